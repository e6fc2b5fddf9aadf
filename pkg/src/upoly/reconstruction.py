"""Recovering a rooted tree from its rooted polynomial.

The vertex count is the exponent of the bare z-power; the root degree comes
from the shortest z^1 term.  Reconstruction then peels one step: a degree-1
root strips an edge and recurses, a higher-degree root splits into branches
found by enumerate-and-divide.  Divisibility testing against enumerated
degree-1-root candidates replaces general factorisation: branch factors are
irreducible, so in a unique-factorisation ring any dividing candidate is a
true branch.
"""

from __future__ import annotations

from typing import Iterator

from .errors import CapExceeded, MalformedPolynomial, ReconstructionFailed
from .graphmodel import RootedTree, concat, join, tree_from_level_sequence
from .invariants import u_rooted
from .polycore import UMonomial, UPolynomial, exact_divide

__all__ = ["read_invariants", "enumerate_rooted", "reconstruct"]

DEFAULT_SIZE_CAP = 16


def read_invariants(p: UPolynomial) -> tuple[int, int]:
    """The vertex count and root degree encoded in a rooted polynomial."""
    bare = [m.zexp for m in p.terms if not m.xpart and m.yexp == 0]
    if not bare:
        raise MalformedPolynomial("no bare z^n term")
    n = max(bare)
    if any(m.zexp > n for m in p.terms):
        raise MalformedPolynomial("a term exceeds the bare z-degree")
    linear = [m for m in p.terms if m.zexp == 1 and m.yexp == 0]
    if n == 1:
        return 1, 0
    if not linear:
        raise MalformedPolynomial("no z^1 term")
    shortest = min(len(m.xpart) for m in linear)
    if sum(1 for m in linear if len(m.xpart) == shortest) != 1:
        raise MalformedPolynomial("ambiguous shortest z^1 term")
    return n, shortest


def enumerate_rooted(n: int, cap: int = DEFAULT_SIZE_CAP) -> Iterator[RootedTree]:
    """All rooted trees on n vertices, one per rooted-isomorphism class.

    Generates canonical level sequences in decreasing lexicographic order by
    the constant-amortised-time successor rule: locate the rightmost entry of
    depth at least 2 and tile the block ending before it.
    """
    if n < 1:
        raise ValueError("need at least one vertex")
    if n > cap:
        raise CapExceeded(f"n={n} exceeds the enumeration cap {cap}")
    seq = list(range(n))
    while True:
        yield tree_from_level_sequence(seq)
        p = None
        for i in range(n - 1, 0, -1):
            if seq[i] >= 2:
                p = i
                break
        if p is None:
            return
        q = p - 1
        while seq[q] != seq[p] - 1:
            q -= 1
        width = p - q
        for i in range(p, n):
            seq[i] = seq[i - width]


def _shortest_linear_partition(p: UPolynomial) -> tuple[int, ...]:
    linear = [m for m in p.terms if m.zexp == 1 and m.yexp == 0]
    shortest = min(len(m.xpart) for m in linear)
    (mono,) = [m for m in linear if len(m.xpart) == shortest]
    return mono.xpart


def _divide_by_z(p: UPolynomial) -> UPolynomial:
    out: dict[UMonomial, int] = {}
    for mono, coeff in p.terms.items():
        if mono.zexp < 1:
            raise MalformedPolynomial("polynomial is not divisible by z")
        out[UMonomial(mono.xpart, mono.zexp - 1, mono.yexp)] = coeff
    return UPolynomial._raw(out)


def reconstruct(p: UPolynomial, cap: int = DEFAULT_SIZE_CAP) -> RootedTree:
    """Rebuild the rooted tree whose rooted polynomial is p.

    Raises ReconstructionFailed when p is not the rooted polynomial of any
    tree within the cap (no guessing on non-tree inputs).
    """
    cache: dict = {}
    try:
        tree = _reconstruct(p, cap, cache)
    except MalformedPolynomial as exc:
        raise ReconstructionFailed(str(exc)) from exc
    if u_rooted(tree, "fast", cache=cache) != p:
        raise ReconstructionFailed("input is not the rooted polynomial of a tree")
    return tree


def _reconstruct(p: UPolynomial, cap: int, cache: dict) -> RootedTree:
    n, degree = read_invariants(p)
    if n > cap:
        raise CapExceeded(f"a {n}-vertex tree exceeds the reconstruction cap {cap}")
    if n == 1:
        return RootedTree.single()
    if degree == 1:
        deeper = UPolynomial._raw(
            {m: c for m, c in p.terms.items() if m.zexp >= 2}
        )
        child = _reconstruct(_divide_by_z(deeper), cap, cache)
        return concat(RootedTree.single(), child)

    branch_sizes = _shortest_linear_partition(p)
    if sum(branch_sizes) + 1 != n:
        raise MalformedPolynomial("branch sizes do not account for every vertex")
    remaining = _divide_by_z(p)
    branches: list[RootedTree] = []
    for size in branch_sizes:  # non-increasing: largest branch first
        accepted = None
        for sub in enumerate_rooted(size, cap):
            candidate = concat(RootedTree.single(), sub)
            factor = _divide_by_z(u_rooted(candidate, "fast", cache=cache))
            quotient = exact_divide(remaining, factor)
            if quotient is not None:
                accepted = candidate
                remaining = quotient
                break
        if accepted is None:
            raise ReconstructionFailed(
                f"no degree-1-root candidate of size {size + 1} divides the remainder"
            )
        branches.append(accepted)
    if remaining != UPolynomial.one():
        raise MalformedPolynomial("non-trivial factor left after all branches")
    tree = branches[0]
    for extra in branches[1:]:
        tree = join(tree, extra)
    return tree
