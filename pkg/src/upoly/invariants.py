"""The four invariant computations and the chromatic-symmetric specialisations.

Two independent strategies exist for the rooted polynomial: the subset
expansion (a brute-force oracle over all edge subsets, capped) and the fast
recursion over tree branches.  They agree exactly on trees and cross-validate
each other in the test suite.
"""

from __future__ import annotations

import math
import os
from itertools import permutations

from . import kernels
from .errors import CapExceeded, NotATree
from .graphmodel import Graph, RootedTree, WeightedGraph, canonical_form
from .polycore import UMonomial, UPolynomial, make_partition, star_specialize, y_var

__all__ = [
    "DEFAULT_EDGE_CAP",
    "u_polynomial",
    "w_polynomial",
    "u_rooted",
    "chromatic_symmetric",
]

DEFAULT_EDGE_CAP = 24


def _edge_cap(cap: int | None) -> int:
    if cap is not None:
        return cap
    env = os.environ.get("UPOLY_CAP_EDGES")
    return int(env) if env else DEFAULT_EDGE_CAP


def _as_graph(g: Graph | RootedTree) -> Graph:
    return g.to_graph() if isinstance(g, RootedTree) else g


def _expand_subset_classes(
    counts: dict[tuple[int, int, tuple[int, ...]], int],
    rooted: bool,
) -> UPolynomial:
    """Turn subset class counts into a polynomial, expanding (y-1)**nullity."""
    acc: dict[UMonomial, int] = {}
    for (root_size, nullity, parts), count in counts.items():
        zexp = root_size if rooted else 0
        for j in range(nullity + 1):
            coeff = count * math.comb(nullity, j) * (-1) ** (nullity - j)
            mono = UMonomial(parts, zexp, j)
            c = acc.get(mono, 0) + coeff
            if c:
                acc[mono] = c
            else:
                acc.pop(mono, None)
    return UPolynomial._raw(acc)


def u_polynomial(g: Graph | RootedTree, cap: int | None = None) -> UPolynomial:
    """Subset-expansion U-polynomial: sum of x_lambda(A) (y-1)^(|A|-r(A)).

    This is the brute-force oracle; it enumerates all 2^|E| edge subsets and
    refuses graphs above the edge cap (env UPOLY_CAP_EDGES, default 24).
    """
    graph = _as_graph(g)
    limit = _edge_cap(cap)
    if graph.num_edges > limit:
        raise CapExceeded(
            f"{graph.num_edges} edges exceeds the subset-expansion cap {limit}; "
            "use the fast rooted strategy (trees only)"
        )
    counts = kernels.subset_class_counts(graph.n, list(graph.edges), root=-1)
    return _expand_subset_classes(counts, rooted=False)


def u_rooted(
    g: RootedTree | Graph,
    strategy: str = "fast",
    root: int | None = None,
    cap: int | None = None,
    cache: dict | None = None,
) -> UPolynomial:
    """Rooted U-polynomial, tracking the root's component size as a z-power.

    ``strategy="subset"`` runs the capped brute-force expansion and accepts
    any rooted multigraph; ``strategy="fast"`` requires a tree and recurses
    over the root branches.  ``cache`` (optional, code-keyed) lets a caller
    share fast-path subresults across several computations.
    """
    if strategy == "subset":
        graph = _as_graph(g)
        if root is None:
            if not isinstance(g, RootedTree):
                raise ValueError("subset strategy on a Graph needs an explicit root")
            root = g.root
        if not (0 <= root < graph.n):
            raise ValueError(f"root {root} out of range")
        limit = _edge_cap(cap)
        if graph.num_edges > limit:
            raise CapExceeded(
                f"{graph.num_edges} edges exceeds the subset-expansion cap {limit}"
            )
        counts = kernels.subset_class_counts(graph.n, list(graph.edges), root=root)
        return _expand_subset_classes(counts, rooted=True)
    if strategy == "fast":
        if not isinstance(g, RootedTree):
            raise NotATree("the fast strategy requires a RootedTree")
        if root is not None and root != g.root:
            raise ValueError("pass the root by rooting the tree, not as an override")
        return _u_rooted_fast(g, cache if cache is not None else {})
    raise ValueError(f"unknown strategy {strategy!r}")


def _u_rooted_fast(t: RootedTree, cache: dict) -> UPolynomial:
    """U^r by recursion: z times the product over child subtrees S of
    (U^r(S) + U(S)), with U(S) obtained by star-specialisation."""
    z_mono = UMonomial((), 1, 0)
    children = t.children()
    order = t.topo_order()
    size = [1] * t.n
    for v in reversed(order[1:]):
        size[t.parent[v]] += size[v]
    # bottom-up canonical codes double as cache keys
    code: list[bytes] = [b""] * t.n
    poly: list[UPolynomial | None] = [None] * t.n
    for v in reversed(order):
        ch = children[v]
        code[v] = b"(" + b"".join(sorted(code[c] for c in ch)) + b")"
        hit = cache.get(code[v])
        if hit is not None:
            poly[v] = hit
            continue
        result = UPolynomial._raw({z_mono: 1})
        for c in sorted(ch, key=lambda c: (size[c], code[c])):
            fkey = (b"f", code[c])
            factor = cache.get(fkey)
            if factor is None:
                factor = poly[c] + star_specialize(poly[c])
                cache[fkey] = factor
            result = result * factor
        cache[code[v]] = result
        poly[v] = result
    return poly[t.root]


# ---------------------------------------------------------------------------
# W-polynomial by deletion-contraction
# ---------------------------------------------------------------------------


def w_polynomial(gw: WeightedGraph | Graph, cap: int | None = None) -> UPolynomial:
    """Weighted deletion-contraction polynomial.

    Contraction sums the endpoint weights; loops each contribute a factor y;
    isolated vertices contribute x_{weight}.  A bare Graph gets unit weights,
    under which this equals the U-polynomial.
    """
    if isinstance(gw, Graph):
        gw = WeightedGraph.with_unit_weights(gw)
    limit = _edge_cap(cap)
    if gw.graph.num_edges > limit:
        raise CapExceeded(f"{gw.graph.num_edges} edges exceeds the recursion cap {limit}")
    memo: dict = {}
    return _w_recurse(gw.graph.n, list(gw.graph.edges), list(gw.weights), memo)


def _w_recurse(n: int, edges: list[tuple[int, int]], weights: list[int], memo: dict) -> UPolynomial:
    plain = [e for e in edges if e[0] != e[1]]
    n_loops = len(edges) - len(plain)
    if not plain:
        base = UPolynomial._raw({UMonomial(make_partition(weights), 0, 0): 1})
        return base * y_var() ** n_loops if n_loops else base

    key = _canon_weighted_key(n, plain, weights)
    result = memo.get(key)
    if result is None:
        u, v = plain[0]
        deleted = _w_recurse(n, plain[1:], weights, memo)
        c_edges = []
        for a, b in plain[1:]:
            a = u if a == v else (a - 1 if a > v else a)
            b = u if b == v else (b - 1 if b > v else b)
            c_edges.append((a, b) if a <= b else (b, a))
        c_weights = list(weights)
        c_weights[u] += c_weights[v]
        del c_weights[v]
        contracted = _w_recurse(n - 1, c_edges, c_weights, memo)
        result = deleted + contracted
        memo[key] = result
    return result * y_var() ** n_loops if n_loops else result


_CANON_PERM_LIMIT = 40320  # 8!


def _canon_weighted_key(n: int, edges: list[tuple[int, int]], weights: list[int]):
    """Isomorphism-invariant memo key for a loop-free weighted multigraph.

    Colour classes are refined from (weight, degree) by neighbour multisets;
    small class systems are then canonicalised exactly by backtracking over
    within-class orderings.  Beyond the permutation budget the raw sorted
    encoding is used (fewer memo hits, same results).
    """
    deg = [0] * n
    mult: dict[tuple[int, int], int] = {}
    for u, v in edges:
        deg[u] += 1
        deg[v] += 1
        mult[(u, v)] = mult.get((u, v), 0) + 1
    color = {v: (weights[v], deg[v]) for v in range(n)}
    for _ in range(n):
        sig = {}
        for v in range(n):
            neigh = []
            for (a, b), m in mult.items():
                if a == v:
                    neigh.append((color[b], m))
                elif b == v:
                    neigh.append((color[a], m))
            sig[v] = (color[v], tuple(sorted(neigh)))
        relabel = {s: i for i, s in enumerate(sorted(set(sig.values())))}
        new = {v: relabel[sig[v]] for v in range(n)}
        if new == color:
            break
        color = new

    classes: dict = {}
    for v in range(n):
        classes.setdefault(color[v], []).append(v)
    blocks = [classes[c] for c in sorted(classes)]
    budget = 1
    for b in blocks:
        budget *= math.factorial(len(b))
        if budget > _CANON_PERM_LIMIT:
            return ("raw", n, tuple(sorted(edges)), tuple(weights))

    best = None
    for ordering in _block_orderings(blocks):
        pos = {v: i for i, v in enumerate(ordering)}
        enc_edges = tuple(
            sorted((pos[u], pos[v]) if pos[u] <= pos[v] else (pos[v], pos[u]) for u, v in edges)
        )
        enc = (tuple(weights[v] for v in ordering), enc_edges)
        if best is None or enc < best:
            best = enc
    return ("canon", n, best)


def _block_orderings(blocks: list[list[int]]):
    if not blocks:
        yield []
        return
    head, tail = blocks[0], blocks[1:]
    for perm in permutations(head):
        for rest in _block_orderings(tail):
            yield list(perm) + rest


# ---------------------------------------------------------------------------
# chromatic symmetric function
# ---------------------------------------------------------------------------


def chromatic_symmetric(
    g: Graph | RootedTree,
    root: int | None = None,
    cap: int | None = None,
) -> UPolynomial:
    """Chromatic symmetric function in the power-sum basis.

    The partition-indexed representation is reused: index i means p_i here.
    Unrooted: (-1)^n U(G) at y=0, x_i -> -p_i.  Rooted: the same substitution
    on U^r divided once by z, keeping z as the pointed marker.
    """
    rooted = root is not None or isinstance(g, RootedTree)
    if rooted:
        if isinstance(g, RootedTree) and root is None:
            base = u_rooted(g, "fast")
        else:
            base = u_rooted(g, "subset", root=root, cap=cap)
    else:
        base = u_polynomial(g, cap=cap)
    sign = (-1) ** g.n
    acc: dict[UMonomial, int] = {}
    for mono, coeff in base.terms.items():
        if mono.yexp:
            continue
        zexp = mono.zexp
        if rooted:
            zexp -= 1  # every rooted term carries at least z^1
        key = UMonomial(mono.xpart, zexp, 0)
        c = acc.get(key, 0) + sign * coeff * (-1) ** len(mono.xpart)
        if c:
            acc[key] = c
        else:
            acc.pop(key, None)
    return UPolynomial._raw(acc)
