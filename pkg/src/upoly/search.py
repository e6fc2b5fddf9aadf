"""Exhaustive small-tree collision search over truncated polynomials.

Free trees are enumerated by filtering the rooted-tree stream down to
centroid-canonical representatives, so every free isomorphism class appears
exactly once.  Trees are bucketed by the canonical text of their (optionally
truncated) polynomial; the serialisation is injective, so bucket membership
is exact equality, with no probabilistic hashing anywhere.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Iterator

from .errors import CapExceeded
from .graphmodel import RootedTree, canonical_form
from .invariants import u_rooted
from .polycore import UPolynomial, poly_from_text, poly_to_text, star_specialize, truncate_length
from .reconstruction import enumerate_rooted

__all__ = ["CollisionRecord", "enumerate_free", "collision_scan", "phi_restricted"]

DEFAULT_FREE_CAP = 18


@dataclass(frozen=True)
class CollisionRecord:
    """A set of pairwise non-isomorphic trees sharing a truncated polynomial."""

    n: int
    m: int | None  # truncation level; None means the full polynomial
    members: tuple[bytes, ...]  # free canonical codes, sorted
    shared: UPolynomial

    def to_json_dict(self) -> dict:
        return {
            "n": self.n,
            "m": "full" if self.m is None else self.m,
            "members": [code.decode("ascii") for code in self.members],
            "shared": poly_to_text(self.shared),
        }


def enumerate_free(n: int, cap: int = DEFAULT_FREE_CAP) -> Iterator[RootedTree]:
    """One representative per free-isomorphism class on n vertices.

    A rooted tree is kept when its rooted code coincides with its free code,
    i.e. it is already rooted at the canonical centroid.
    """
    if n > cap:
        raise CapExceeded(f"n={n} exceeds the free-enumeration cap {cap}")
    for t in enumerate_rooted(n, cap=max(cap, n)):
        if canonical_form(t, "rooted")[1:] == canonical_form(t, "free")[1:]:
            yield t


def _fingerprint(t: RootedTree, m: int | None) -> str:
    u = star_specialize(u_rooted(t, "fast"))
    if m is not None:
        u = truncate_length(u, m)
    return poly_to_text(u)


def _scan_shard(args: tuple[int, int | None, int, int, int]) -> list[tuple[str, str]]:
    """Fingerprint every shard-th free tree of size n; returns (key, code) pairs."""
    n, m, shard, num_shards, cap = args
    out: list[tuple[str, str]] = []
    for i, t in enumerate(enumerate_free(n, cap)):
        if i % num_shards != shard:
            continue
        out.append((_fingerprint(t, m), canonical_form(t, "free").decode("ascii")))
    return out


def _scan_single_n(
    n: int,
    m: int | None,
    threads: int,
    cap: int,
) -> list[CollisionRecord]:
    if threads > 1:
        tasks = [(n, m, shard, threads, cap) for shard in range(threads)]
        with ProcessPoolExecutor(max_workers=threads) as pool:
            shards = list(pool.map(_scan_shard, tasks))
        pairs = [pair for shard in shards for pair in shard]
    else:
        pairs = _scan_shard((n, m, 0, 1, cap))
    buckets: dict[str, list[str]] = {}
    for key, code in pairs:
        buckets.setdefault(key, []).append(code)
    records = []
    for key, codes in buckets.items():
        if len(codes) >= 2:
            records.append(
                CollisionRecord(
                    n=n,
                    m=m,
                    members=tuple(code.encode("ascii") for code in sorted(codes)),
                    shared=poly_from_text(key),
                )
            )
    records.sort(key=lambda r: r.members)
    return records


def collision_scan(
    n_max: int,
    m: int | None,
    threads: int = 1,
    cap: int = DEFAULT_FREE_CAP,
) -> list[CollisionRecord]:
    """All collision buckets among free trees of each size up to n_max.

    ``m`` is the truncation level (partition length <= m + 1 kept); None
    compares full polynomials.  Output order is deterministic regardless of
    the thread count: ascending n, then lexicographic member codes.
    """
    if n_max > cap:
        raise CapExceeded(f"n_max={n_max} exceeds the scan cap {cap}")
    records: list[CollisionRecord] = []
    for n in range(1, n_max + 1):
        records.extend(_scan_single_n(n, m, threads, cap))
    return records


def phi_restricted(
    m: int,
    n_max: int,
    threads: int = 1,
    cap: int = DEFAULT_FREE_CAP,
) -> int | None:
    """Smallest n <= n_max with a level-m collision; None when there is none."""
    if n_max > cap:
        raise CapExceeded(f"n_max={n_max} exceeds the scan cap {cap}")
    for n in range(1, n_max + 1):
        if _scan_single_n(n, m, threads, cap):
            return n
    return None
