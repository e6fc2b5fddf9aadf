"""Combinatorial data model: multigraphs, weighted graphs and rooted trees.

Multigraphs keep an explicit edge list so loops and parallel edges survive
contraction.  Trees are stored as parent arrays with an explicit root even
when treated as free; free-tree semantics are reached only through
``canonical_form(tree, "free")``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import LoopContraction, NotATree, TreeParseError
from .polycore import Partition, make_partition

__all__ = [
    "Graph",
    "WeightedGraph",
    "RootedTree",
    "subset_stats",
    "join",
    "concat",
    "contract",
    "canonical_form",
    "tree_to_json_dict",
    "tree_from_json_dict",
    "tree_to_text",
    "tree_from_text",
    "random_rooted_tree",
]


@dataclass(frozen=True)
class Graph:
    """Multigraph: vertex count and an edge list; loops and parallels allowed.

    Edge endpoints are normalised to (min, max); the list order is part of
    the representation but never of the semantics.
    """

    n: int
    edges: tuple[tuple[int, int], ...]

    def __init__(self, n: int, edges: Iterable[Sequence[int]]):
        norm = []
        for e in edges:
            u, v = int(e[0]), int(e[1])
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge ({u}, {v}) out of range for n={n}")
            norm.append((u, v) if u <= v else (v, u))
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "edges", tuple(norm))

    @property
    def num_edges(self) -> int:
        return len(self.edges)


@dataclass(frozen=True)
class WeightedGraph:
    """A multigraph with positive integer vertex weights."""

    graph: Graph
    weights: tuple[int, ...]

    def __init__(self, graph: Graph, weights: Iterable[int]):
        w = tuple(int(x) for x in weights)
        if len(w) != graph.n:
            raise ValueError("one weight per vertex is required")
        if any(x < 1 for x in w):
            raise ValueError("weights must be positive")
        object.__setattr__(self, "graph", graph)
        object.__setattr__(self, "weights", w)

    @classmethod
    def with_unit_weights(cls, graph: Graph) -> "WeightedGraph":
        return cls(graph, (1,) * graph.n)


class RootedTree:
    """A rooted tree on vertices 0..n-1 stored as a parent array.

    ``parent[root] == -1``; every other entry points towards the root.  The
    constructor rejects anything that is not a single tree.
    """

    __slots__ = ("parent", "root")

    def __init__(self, parent: Sequence[int], root: int):
        parent = tuple(int(p) for p in parent)
        n = len(parent)
        if n == 0 or not (0 <= root < n) or parent[root] != -1:
            raise NotATree("root must exist and have parent -1")
        seen_depth = [-1] * n
        seen_depth[root] = 0
        for v in range(n):
            path = []
            u = v
            while seen_depth[u] < 0:
                path.append(u)
                u = parent[u]
                if not (0 <= u < len(parent)) or len(path) > n:
                    raise NotATree("parent array does not encode a tree")
            base = seen_depth[u]
            for i, w in enumerate(reversed(path)):
                seen_depth[w] = base + i + 1
        self.parent = parent
        self.root = root

    @property
    def n(self) -> int:
        return len(self.parent)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, RootedTree):
            return self.parent == other.parent and self.root == other.root
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.parent, self.root))

    def __repr__(self) -> str:
        return f"RootedTree(n={self.n}, root={self.root})"

    def children(self) -> list[list[int]]:
        out: list[list[int]] = [[] for _ in range(self.n)]
        for v, p in enumerate(self.parent):
            if p >= 0:
                out[p].append(v)
        return out

    def depths(self) -> list[int]:
        d = [0] * self.n
        order = self.topo_order()
        for v in order[1:]:
            d[v] = d[self.parent[v]] + 1
        return d

    def topo_order(self) -> list[int]:
        """Vertices ordered root-first so parents precede children."""
        ch = self.children()
        order = [self.root]
        i = 0
        while i < len(order):
            order.extend(ch[order[i]])
            i += 1
        return order

    def edge_list(self) -> tuple[tuple[int, int], ...]:
        return tuple(
            (p, v) if p <= v else (v, p)
            for v, p in enumerate(self.parent)
            if p >= 0
        )

    def to_graph(self) -> Graph:
        return Graph(self.n, self.edge_list())

    @classmethod
    def single(cls) -> "RootedTree":
        return cls((-1,), 0)

    @classmethod
    def path(cls, n: int, root: int = 0) -> "RootedTree":
        edges = [(i, i + 1) for i in range(n - 1)]
        return cls.from_edges(n, edges, root)

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[Sequence[int]], root: int) -> "RootedTree":
        edges = [(int(e[0]), int(e[1])) for e in edges]
        if len(edges) != n - 1:
            raise NotATree(f"a tree on {n} vertices needs exactly {n - 1} edges")
        adj: list[list[int]] = [[] for _ in range(n)]
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n) or u == v:
                raise NotATree(f"bad tree edge ({u}, {v})")
            adj[u].append(v)
            adj[v].append(u)
        parent = [-2] * n
        parent[root] = -1
        stack = [root]
        visited = 1
        while stack:
            u = stack.pop()
            for v in adj[u]:
                if parent[v] == -2:
                    parent[v] = u
                    visited += 1
                    stack.append(v)
        if visited != n:
            raise NotATree("edge list is not connected")
        return cls(parent, root)


def subset_stats(
    g: Graph,
    subset: Iterable[int],
    root: int | None = None,
) -> tuple[Partition, int | None, Partition | None, int]:
    """Component statistics of the spanning subgraph on an edge subset.

    Returns ``(lam, lam_r, lam_minus, rank)``: all component sizes as a
    partition, the root's component size and the remaining sizes (both None
    without a root), and ``rank = n - #components``.
    """
    n = g.n
    if root is not None and not (0 <= root < n):
        raise ValueError(f"root {root} out of range")
    parent = list(range(n))

    def find(a: int) -> int:
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for idx in subset:
        if not (0 <= idx < len(g.edges)):
            raise ValueError(f"edge index {idx} out of range")
        a, b = (find(x) for x in g.edges[idx])
        if a != b:
            parent[a] = b
    sizes: dict[int, int] = {}
    for v in range(n):
        r = find(v)
        sizes[r] = sizes.get(r, 0) + 1
    lam = make_partition(sizes.values())
    rank = n - len(sizes)
    if root is None:
        return lam, None, None, rank
    rrep = find(root)
    lam_r = sizes.pop(rrep)
    return lam, lam_r, make_partition(sizes.values()), rank


def join(a: RootedTree, b: RootedTree) -> RootedTree:
    """Merge the two roots into one vertex; the joining is commutative."""
    n_a = a.n
    offset = [0] * b.n
    nxt = n_a
    for v in range(b.n):
        if v == b.root:
            offset[v] = a.root
        else:
            offset[v] = nxt
            nxt += 1
    parent = list(a.parent) + [0] * (b.n - 1)
    for v in range(b.n):
        if v != b.root:
            parent[offset[v]] = offset[b.parent[v]]
    return RootedTree(parent, a.root)


def concat(a: RootedTree, b: RootedTree) -> RootedTree:
    """Add an edge between the two roots; the left root stays the root."""
    n_a = a.n
    parent = list(a.parent) + [0] * b.n
    for v in range(b.n):
        parent[n_a + v] = a.root if v == b.root else n_a + b.parent[v]
    return RootedTree(parent, a.root)


def contract(gw: WeightedGraph, edge_index: int) -> WeightedGraph:
    """Contract a non-loop edge, summing the endpoint weights.

    Parallel copies of the contracted edge become loops on the merged vertex.
    """
    g = gw.graph
    if not (0 <= edge_index < len(g.edges)):
        raise ValueError(f"edge index {edge_index} out of range")
    u, v = g.edges[edge_index]
    if u == v:
        raise LoopContraction("cannot contract a loop")

    def relabel(w: int) -> int:
        if w == v:
            return u
        return w - 1 if w > v else w

    edges = [
        (relabel(a), relabel(b))
        for i, (a, b) in enumerate(g.edges)
        if i != edge_index
    ]
    weights = list(gw.weights)
    weights[u] += weights[v]
    del weights[v]
    return WeightedGraph(Graph(g.n - 1, edges), weights)


# ---------------------------------------------------------------------------
# canonical forms
# ---------------------------------------------------------------------------


def _subtree_codes(t: RootedTree) -> list[bytes]:
    """Bottom-up canonical code per vertex (children codes sorted)."""
    ch = t.children()
    order = t.topo_order()
    code: list[bytes] = [b""] * t.n
    for v in reversed(order):
        code[v] = b"(" + b"".join(sorted(code[c] for c in ch[v])) + b")"
    return code


def _centroids(t: RootedTree) -> list[int]:
    """Vertices minimising the maximum component size after removal."""
    ch = t.children()
    order = t.topo_order()
    size = [1] * t.n
    for v in reversed(order[1:]):
        size[t.parent[v]] += size[v]
    best = t.n + 1
    out: list[int] = []
    for v in range(t.n):
        heaviest = t.n - size[v]
        for c in ch[v]:
            if size[c] > heaviest:
                heaviest = size[c]
        if heaviest < best:
            best = heaviest
            out = [v]
        elif heaviest == best:
            out.append(v)
    return out


def reroot(t: RootedTree, new_root: int) -> RootedTree:
    """Same free tree, rooted at the given vertex."""
    if new_root == t.root:
        return t
    return RootedTree.from_edges(t.n, t.edge_list(), new_root)


def canonical_form(t: RootedTree | Graph, mode: str = "rooted") -> bytes:
    """Order-invariant code: equal codes mean isomorphic (rooted or free).

    Free codes root the tree at its centroid, taking the lexicographically
    smaller code when the centroid is an edge.  A Graph input must be a tree
    (rooted at vertex 0 for the rooted mode); NotATree otherwise.
    """
    if isinstance(t, Graph):
        t = RootedTree.from_edges(t.n, t.edges, 0)
    if mode == "rooted":
        return b"R" + _subtree_codes(t)[t.root]
    if mode == "free":
        best = min(_subtree_codes(reroot(t, c))[c] for c in _centroids(t))
        return b"F" + best
    raise ValueError(f"unknown canonical-form mode {mode!r}")


# ---------------------------------------------------------------------------
# tree codec
# ---------------------------------------------------------------------------


def tree_to_json_dict(t: RootedTree) -> dict:
    return {"n": t.n, "root": t.root, "edges": [list(e) for e in t.edge_list()]}


def tree_from_json_dict(data: dict) -> RootedTree:
    try:
        n = int(data["n"])
        root = int(data.get("root", 0))
        edges = data["edges"]
    except (KeyError, TypeError, ValueError) as exc:
        raise TreeParseError(f"tree JSON needs 'n', 'root' and 'edges': {exc}") from exc
    try:
        return RootedTree.from_edges(n, edges, root)
    except NotATree as exc:
        raise TreeParseError(str(exc)) from exc


def level_sequence(t: RootedTree) -> list[int]:
    """Depth-first preorder depths, root depth 0, children in index order."""
    ch = t.children()
    out: list[int] = []
    stack = [(t.root, 0)]
    while stack:
        v, d = stack.pop()
        out.append(d)
        for c in reversed(ch[v]):
            stack.append((c, d + 1))
    return out


def tree_from_level_sequence(seq: Sequence[int]) -> RootedTree:
    if not seq or seq[0] != 0:
        raise TreeParseError("level sequence must start with depth 0")
    parent = [-1] * len(seq)
    last_at_depth = {0: 0}
    for i, d in enumerate(seq[1:], start=1):
        if d < 1 or d - 1 not in last_at_depth:
            raise TreeParseError(f"invalid depth {d} at position {i}")
        parent[i] = last_at_depth[d - 1]
        last_at_depth[d] = i
        for deeper in list(last_at_depth):
            if deeper > d:
                del last_at_depth[deeper]
    return RootedTree(parent, 0)


def tree_to_text(t: RootedTree) -> str:
    """Level-sequence line: "n: d_1 d_2 ... d_n"."""
    return f"{t.n}: " + " ".join(str(d) for d in level_sequence(t))


def tree_from_text(text: str) -> RootedTree:
    head, sep, rest = text.strip().partition(":")
    if not sep:
        raise TreeParseError("expected 'n: d_1 d_2 ... d_n'")
    try:
        n = int(head)
        seq = [int(x) for x in rest.split()]
    except ValueError as exc:
        raise TreeParseError(f"non-integer in level sequence: {exc}") from exc
    if len(seq) != n:
        raise TreeParseError(f"expected {n} depths, got {len(seq)}")
    return tree_from_level_sequence(seq)


def random_rooted_tree(n: int, rng) -> RootedTree:
    """Uniform random recursive tree on n vertices (seeded via rng)."""
    if n < 1:
        raise ValueError("need at least one vertex")
    parent = [-1] + [rng.randrange(i) for i in range(1, n)]
    return RootedTree(parent, 0)
