"""Twin rooted-tree families and the exact verification of their collisions.

``build_ab`` produces the mutually recursive pair seeded by the two rootings
of the 3-vertex path: unrooted-isomorphic at every level but never
rooted-isomorphic.  ``build_yz`` combines them into non-isomorphic free trees
whose truncated polynomials agree up to level k+l+2 and split at k+l+3;
``verify_pair`` checks all of that by exact computation.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import CapExceeded, VerificationFailed
from .graphmodel import RootedTree, canonical_form, concat, join, random_rooted_tree
from .invariants import u_rooted
from .polycore import (
    UPolynomial,
    poly_to_text,
    star_specialize,
    x_var,
    z_var,
)

__all__ = [
    "PairReport",
    "build_ab",
    "build_yz",
    "delta0",
    "p_cumulative",
    "d_transform",
    "verify_pair",
    "verify_identities",
    "phi_upper_bound",
]

DEFAULT_FAMILY_CAP = 6
DEFAULT_PAIR_CAP = 3


def build_ab(k: int, cap: int = DEFAULT_FAMILY_CAP) -> tuple[RootedTree, RootedTree]:
    """The twin rooted trees at level k; both have 3 * 2**k vertices."""
    if k < 0:
        raise ValueError("k must be non-negative")
    if k > cap:
        raise CapExceeded(f"k={k} exceeds the family cap {cap}")
    one = RootedTree.single()
    a = join(concat(one, one), concat(one, one))  # 3-path rooted at the centre
    b = concat(one, concat(one, one))  # 3-path rooted at a leaf
    for _ in range(k):
        a, b = concat(a, b), concat(b, a)
    return a, b


def build_yz(k: int, l: int, cap: int = DEFAULT_FAMILY_CAP) -> tuple[RootedTree, RootedTree]:
    """The collision pair at (k, l); both have 6 * (2**k + 2**l) - 2 vertices."""
    a_k, b_k = build_ab(k, cap)
    a_l, b_l = build_ab(l, cap)
    y = concat(join(a_k, a_l), join(b_k, b_l))
    z = concat(join(a_l, b_k), join(b_l, a_k))
    return y, z


def delta0() -> UPolynomial:
    """The rooted difference of the two 3-path rootings: x1*z^2 - x2*z."""
    return x_var(1) * z_var() ** 2 - x_var(2) * z_var()


def p_cumulative(k: int, cap: int = DEFAULT_FAMILY_CAP, cache: dict | None = None) -> UPolynomial:
    """Product of the unrooted polynomials of the first k twin trees; 1 for k=0."""
    if k < 0:
        raise ValueError("k must be non-negative")
    if k > cap:
        raise CapExceeded(f"k={k} exceeds the family cap {cap}")
    result = UPolynomial.one()
    for i in range(k):
        a_i, _ = build_ab(i, cap)
        result = result * star_specialize(u_rooted(a_i, "fast", cache=cache))
    return result


def d_transform(t: RootedTree, cache: dict | None = None) -> UPolynomial:
    """x1 * (z * U^r(T))^* - x2 * U(T); every term has length at least 2."""
    ur = u_rooted(t, "fast", cache=cache)
    u = star_specialize(ur)
    return x_var(1) * star_specialize(z_var() * ur) - x_var(2) * u


def phi_upper_bound(m: int) -> int:
    """Size of the smallest constructed collision pair at truncation level m."""
    if m < 2:
        raise ValueError("the bound is defined for m >= 2")
    if m % 2 == 0:
        return 6 * 2 ** (m // 2) - 2
    return 18 * 2 ** (m // 2 - 1) - 2


@dataclass(frozen=True)
class PairReport:
    """Exact comparison of the (k, l) collision pair."""

    k: int
    l: int
    n: int
    agree_upto: int
    first_diff: UPolynomial
    iso_free: bool
    iso_rooted: bool
    identities_ok: bool
    failed_assertion: str | None = None

    @property
    def ok(self) -> bool:
        return (
            self.identities_ok
            and not self.iso_free
            and not self.first_diff.is_zero()
            and self.agree_upto == self.k + self.l + 2
            and self.first_diff.min_xlength() == self.k + self.l + 4
        )

    def to_json_dict(self) -> dict:
        return {
            "k": self.k,
            "l": self.l,
            "n": self.n,
            "agree_upto": self.agree_upto,
            "first_diff": poly_to_text(self.first_diff),
            "iso_free": self.iso_free,
            "iso_rooted": self.iso_rooted,
            "identities_ok": self.identities_ok,
        }


def _expected_first_diff(k: int, l: int) -> UPolynomial:
    """Closed form of the minimal-length part of U(Y) - U(Z).

    The product of the cumulative factors contributes exactly one monomial at
    the minimal length (the all-edges term of each factor), multiplying the
    explicit degree-4 expression in the twin sizes n(k) = 3 * 2**k.
    """
    x1, x2, x3 = x_var(1), x_var(2), x_var(3)
    nk = 3 * 2**k
    nl = 3 * 2**l
    closed = (x1 * x1 * x3 - x1 * x2 * x2) * x_var(nl + nk - 1) - (
        x1 * x_var(nk + 1) - x2 * x_var(nk)
    ) * (x1 * x_var(nl + 1) - x2 * x_var(nl))
    prefix = UPolynomial.one()
    for i in range(k):
        prefix = prefix * x_var(3 * 2**i)
    for i in range(l):
        prefix = prefix * x_var(3 * 2**i)
    return prefix * closed


def verify_pair(
    k: int,
    l: int,
    cap: int = DEFAULT_PAIR_CAP,
    strict: bool = False,
) -> PairReport:
    """Compute the (k, l) pair report, asserting the difference identities.

    U is always computed through the fast rooted recursion (star-specialised),
    never by subset expansion, so large indices stay feasible.  With
    ``strict`` a violated assertion raises VerificationFailed by name;
    otherwise it is recorded on the report.
    """
    if k > cap or l > cap:
        raise CapExceeded(f"(k, l)=({k}, {l}) exceeds the pair cap {cap}")
    cache: dict = {}
    y, z = build_yz(k, l, cap=max(cap, DEFAULT_FAMILY_CAP))
    u_y = star_specialize(u_rooted(y, "fast", cache=cache))
    u_z = star_specialize(u_rooted(z, "fast", cache=cache))
    diff = u_y - u_z

    failed: str | None = None

    def check(name: str, condition: bool) -> None:
        nonlocal failed
        if not condition and failed is None:
            failed = name
            if strict:
                raise VerificationFailed(name)

    check("delta0_value", _ab_difference(0, cache) == delta0())
    for i in sorted({k, l}):
        check(
            f"ab_difference_k{i}",
            _ab_difference(i, cache) == delta0() * p_cumulative(i, cache=cache),
        )
    check("difference_nonzero", not diff.is_zero())

    if diff.is_zero():
        agree_upto = -1
        first_diff = UPolynomial.zero()
    else:
        min_len = diff.min_xlength()
        agree_upto = min_len - 2
        first_diff = diff.xlength_component(min_len)
        check("first_diff_closed_form", first_diff == _expected_first_diff(k, l))

    iso_free = canonical_form(y, "free") == canonical_form(z, "free")
    iso_rooted = canonical_form(y, "rooted") == canonical_form(z, "rooted")
    return PairReport(
        k=k,
        l=l,
        n=y.n,
        agree_upto=agree_upto,
        first_diff=first_diff,
        iso_free=iso_free,
        iso_rooted=iso_rooted,
        identities_ok=failed is None,
        failed_assertion=failed,
    )


def _ab_difference(i: int, cache: dict) -> UPolynomial:
    a, b = build_ab(i)
    return u_rooted(a, "fast", cache=cache) - u_rooted(b, "fast", cache=cache)


def verify_identities(
    k: int,
    l: int,
    trials: int = 20,
    seed: int = 0,
    cap: int = DEFAULT_PAIR_CAP,
) -> dict:
    """Exact checks of the three product/difference identities.

    Returns a dict of booleans: the twin-difference identity up to max(k, l),
    the joining-difference identity on seeded random trees, and the final
    factored form of U(Y) - U(Z) at (k, l).
    """
    import random

    if k > cap or l > cap:
        raise CapExceeded(f"(k, l)=({k}, {l}) exceeds the pair cap {cap}")
    cache: dict = {}
    x1, x2, x3 = x_var(1), x_var(2), x_var(3)

    ab_ok = all(
        _ab_difference(i, cache) == delta0() * p_cumulative(i, cache=cache)
        for i in range(max(k, l) + 1)
    )

    rng = random.Random(seed)
    join_ok = True
    for _ in range(trials):
        t = random_rooted_tree(rng.randrange(1, 7), rng)
        for i in range(min(k, 2) + 1):
            a_i, b_i = build_ab(i)
            lhs = star_specialize(u_rooted(join(a_i, t), "fast", cache=cache)) - star_specialize(
                u_rooted(join(b_i, t), "fast", cache=cache)
            )
            if lhs != p_cumulative(i, cache=cache) * d_transform(t, cache=cache):
                join_ok = False

    y, z = build_yz(k, l, cap=max(cap, DEFAULT_FAMILY_CAP))
    u_y = star_specialize(u_rooted(y, "fast", cache=cache))
    u_z = star_specialize(u_rooted(z, "fast", cache=cache))
    a_k, b_k = build_ab(k)
    a_l, b_l = build_ab(l)
    u_bl_ak = star_specialize(u_rooted(join(b_l, a_k), "fast", cache=cache))
    rhs = (
        p_cumulative(l, cache=cache)
        * p_cumulative(k, cache=cache)
        * (
            (x1 * x1 * x3 - x1 * x2 * x2) * u_bl_ak
            - d_transform(a_k, cache=cache) * d_transform(b_l, cache=cache)
        )
    )
    final_ok = (u_y - u_z) == rhs

    return {
        "ab_difference": ab_ok,
        "join_difference": join_ok,
        "final_factored_form": final_ok,
        "all_ok": ab_ok and join_ok and final_ok,
    }
