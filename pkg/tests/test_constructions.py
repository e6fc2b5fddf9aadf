import random

import pytest

from upoly.constructions import (
    build_ab,
    build_yz,
    d_transform,
    delta0,
    p_cumulative,
    phi_upper_bound,
    verify_identities,
    verify_pair,
)
from upoly.errors import CapExceeded, VerificationFailed
from upoly.graphmodel import RootedTree, canonical_form, join, random_rooted_tree
from upoly.invariants import u_polynomial, u_rooted
from upoly.polycore import UPolynomial, star_specialize, truncate_length, x_var, z_var

X1, X2, X3 = x_var(1), x_var(2), x_var(3)
Z = z_var()


def test_build_ab_examples():
    a0, b0 = build_ab(0)
    assert a0.n == b0.n == 3
    assert len(a0.children()[a0.root]) == 2  # centre-rooted path
    assert len(b0.children()[b0.root]) == 1  # leaf-rooted path
    for k in range(3):
        a, b = build_ab(k)
        assert a.n == b.n == 3 * 2**k
    for k in range(5):
        a, b = build_ab(k)
        assert canonical_form(a, "free") == canonical_form(b, "free")
        assert canonical_form(a, "rooted") != canonical_form(b, "rooted")
    with pytest.raises(CapExceeded):
        build_ab(7)


def test_build_yz_sizes():
    y, z = build_yz(0, 0)
    assert y.n == z.n == 10
    assert build_yz(1, 0)[0].n == 16
    assert build_yz(1, 1)[0].n == 22
    for k in range(4):
        for l in range(4):
            y, z = build_yz(k, l)
            assert y.n == z.n == 6 * (2**k + 2**l) - 2


def test_delta0():
    assert delta0() == X1 * Z**2 - X2 * Z
    a0, b0 = build_ab(0)
    assert u_rooted(a0) - u_rooted(b0) == delta0()


def test_p_cumulative():
    assert p_cumulative(0) == UPolynomial.one()
    a0, _ = build_ab(0)
    assert p_cumulative(1) == u_polynomial(a0)
    for k in range(5):
        p = p_cumulative(k)
        if k:
            assert p.min_xlength() >= k


def test_ab_difference_identity():
    cache = {}
    for k in range(4):
        a, b = build_ab(k)
        lhs = u_rooted(a, "fast", cache=cache) - u_rooted(b, "fast", cache=cache)
        assert lhs == delta0() * p_cumulative(k, cache=cache)


def test_d_transform_examples():
    assert d_transform(RootedTree.single()) == UPolynomial.zero()
    a1, b1 = build_ab(1)
    d_a1 = d_transform(a1)
    assert d_a1.min_xlength() >= 2
    cache = {}
    for k in range(4):
        a, b = build_ab(k)
        lhs = d_transform(a, cache=cache) - d_transform(b, cache=cache)
        assert lhs == X1 * (X1 * X3 - X2**2) * p_cumulative(k, cache=cache)


def test_join_difference_identity():
    rng = random.Random(15)
    cache = {}
    for _ in range(10):
        t = random_rooted_tree(rng.randrange(1, 7), rng)
        for i in range(3):
            a, b = build_ab(i)
            lhs = star_specialize(u_rooted(join(a, t), "fast", cache=cache)) - star_specialize(
                u_rooted(join(b, t), "fast", cache=cache)
            )
            assert lhs == p_cumulative(i, cache=cache) * d_transform(t, cache=cache)


@pytest.mark.parametrize("k,l,expected_n", [(0, 0, 10), (1, 0, 16), (0, 1, 16), (1, 1, 22)])
def test_verify_pair_small(k, l, expected_n):
    report = verify_pair(k, l)
    assert report.ok
    assert report.n == expected_n
    assert report.agree_upto == k + l + 2
    assert report.first_diff.min_xlength() == k + l + 4
    assert not report.iso_free and not report.iso_rooted
    assert report.identities_ok and report.failed_assertion is None


def test_verify_pair_agrees_with_truncations():
    report = verify_pair(0, 0)
    y, z = build_yz(0, 0)
    u_y = star_specialize(u_rooted(y))
    u_z = star_specialize(u_rooted(z))
    assert truncate_length(u_y, 2) == truncate_length(u_z, 2)
    assert truncate_length(u_y, 3) != truncate_length(u_z, 3)
    assert u_y - u_z == report.first_diff + (u_y - u_z) - report.first_diff


def test_verify_pair_subset_cross_check():
    # the fast-path polynomial agrees with the brute-force oracle at (0, 0)
    y, z = build_yz(0, 0)
    assert star_specialize(u_rooted(y, "fast")) == u_polynomial(y)
    assert star_specialize(u_rooted(z, "fast")) == u_polynomial(z)


def test_verify_pair_report_json():
    data = verify_pair(0, 0).to_json_dict()
    assert set(data) == {
        "k", "l", "n", "agree_upto", "first_diff", "iso_free", "iso_rooted", "identities_ok",
    }
    assert data["agree_upto"] == 2 and data["iso_free"] is False


def test_verify_pair_cap():
    with pytest.raises(CapExceeded):
        verify_pair(4, 0)
    # strict mode passes cleanly on a valid pair
    assert verify_pair(0, 0, strict=True).ok


def test_verify_identities():
    result = verify_identities(1, 1, trials=6, seed=3)
    assert result["all_ok"]
    assert result["ab_difference"] and result["join_difference"] and result["final_factored_form"]


def test_verify_identities_at_pair_cap():
    # the factored form of U(Y) - U(Z) holds all the way to (2, 2)
    assert verify_identities(2, 2, trials=4, seed=1)["all_ok"]


def test_family_polynomials_roundtrip_codecs():
    from upoly.polycore import poly_from_json_dict, poly_from_text, poly_to_json_dict, poly_to_text
    from upoly.graphmodel import tree_from_json_dict, tree_from_text, tree_to_json_dict, tree_to_text

    a2, _ = build_ab(2)
    ur = u_rooted(a2, "fast")
    assert poly_from_text(poly_to_text(ur)) == ur
    assert poly_from_json_dict(poly_to_json_dict(ur)) == ur
    a3, _ = build_ab(3)
    for back in (tree_from_text(tree_to_text(a3)), tree_from_json_dict(tree_to_json_dict(a3))):
        assert canonical_form(back, "rooted") == canonical_form(a3, "rooted")


def test_phi_upper_bound_values():
    assert [phi_upper_bound(m) for m in range(2, 9)] == [10, 16, 22, 34, 46, 70, 94]
    with pytest.raises(ValueError):
        phi_upper_bound(1)
