import random

import pytest

from upoly.errors import MalformedPolynomial, PolyParseError
from upoly.polycore import (
    UMonomial,
    UPolynomial,
    exact_divide,
    iter_random_polynomials,
    make_partition,
    partition_union,
    poly_from_json_dict,
    poly_from_text,
    poly_to_json_dict,
    poly_to_text,
    restrict_part_size,
    ring_combine,
    star_specialize,
    truncate_length,
    x_var,
    y_var,
    z_var,
)

X1, X2, X3 = x_var(1), x_var(2), x_var(3)
Y, Z = y_var(), z_var()

# U(P_3) by the subset oracle: 4 subsets -> (1,1,1), (2,1) twice, (3).
U_P3 = X1**3 + 2 * X1 * X2 + X3

EXAMPLE14_TEXT = (
    "x1^5*z + 3*x1^4*z^2 + 4*x1^3*z^3 + 4*x1^2*z^4 + 3*x1*z^5 + z^6"
    " + 2*x1^3*x2*z + 5*x1^2*x2*z^2 + 4*x1*x2*z^3 + x2*z^4"
    " + x1^2*x3*z + 2*x1*x3*z^2 + x3*z^3"
)


def test_partition_helpers():
    assert make_partition([1, 3, 2]) == (3, 2, 1)
    assert make_partition([]) == ()
    assert partition_union((3, 1), (2, 2)) == (3, 2, 2, 1)
    assert partition_union((), (2,)) == (2,)
    with pytest.raises(ValueError):
        make_partition([0])


def test_mul_examples():
    assert (X1 * Z) * (X1 * Z + Z**2) == X1**2 * Z**2 + X1 * Z**3
    # rooted polynomial of the centre-rooted 3-path, via the join identity
    a0 = exact_divide((X1 * Z + Z**2) ** 2, Z)
    assert a0 == X1**2 * Z + 2 * X1 * Z**2 + Z**3
    p = X1 * Z + Z**2
    assert (p - p) == UPolynomial.zero()
    assert len(p - p) == 0


def test_ring_combine_dispatch():
    p, q = X1 + Z, X2 * Y
    assert ring_combine(p, q, "add") == p + q
    assert ring_combine(p, q, "sub") == p - q
    assert ring_combine(p, q, "mul") == p * q
    with pytest.raises(ValueError):
        ring_combine(p, q, "div")


def test_no_zero_coefficients_stored():
    p = UPolynomial({UMonomial((1,), 0, 0): 5, UMonomial((2,), 0, 0): 0})
    assert len(p) == 1
    q = X1 + (-1) * X1
    assert q.is_zero() and not q


def test_star_specialize_examples():
    assert star_specialize(X1 * Y * Z - X2 * X3 * Z**3) == X1**2 * Y - X2 * X3**2
    assert star_specialize(Z) == X1
    assert star_specialize(X1**2 * Z + 2 * X1 * Z**2 + Z**3) == U_P3


def test_star_linear_not_multiplicative():
    rng = random.Random(11)
    polys = list(iter_random_polynomials(rng, 12))
    for p, q in zip(polys[::2], polys[1::2]):
        assert star_specialize(p + q) == star_specialize(p) + star_specialize(q)
    # witness: (z * z)^* = x2 but (z^*)^2 = x1^2
    assert star_specialize(Z * Z) != star_specialize(Z) * star_specialize(Z)


def test_exact_divide_examples():
    q = X1 * Z + Z**2
    assert exact_divide(q * q, q) == q
    assert exact_divide(X1 * Z + Z**2, X2) is None
    with pytest.raises(ZeroDivisionError):
        exact_divide(q, UPolynomial.zero())


def test_exact_divide_example14_chain():
    p = poly_from_text(EXAMPLE14_TEXT)
    p = exact_divide(p, Z)
    p = exact_divide(p, X1 + Z)
    p = exact_divide(p, X1 + Z)
    assert p == poly_from_text("x1^3 + x1^2*z + x1*z^2 + z^3 + 2*x1*x2 + x2*z + x3")


def test_exact_divide_roundtrip_property():
    rng = random.Random(5)
    polys = list(iter_random_polynomials(rng, 30, max_terms=10))
    for p, q in zip(polys[::2], polys[1::2]):
        if q.is_zero():
            continue
        assert exact_divide(p * q, q) == p


def test_ring_laws_on_random_polynomials():
    rng = random.Random(23)
    polys = list(iter_random_polynomials(rng, 15, max_terms=20))
    for i in range(0, 15, 3):
        p, q, r = polys[i], polys[i + 1], polys[i + 2]
        assert (p + q) + r == p + (q + r)
        assert p + q == q + p
        assert (p * q) * r == p * (q * r)
        assert p * q == q * p
        assert p * (q + r) == p * q + p * r


def test_truncate_length():
    assert truncate_length(U_P3, 1) == 2 * X1 * X2 + X3
    assert truncate_length(U_P3, 2) == U_P3  # k >= n - 1 keeps everything
    rng = random.Random(2)
    for p in iter_random_polynomials(rng, 8, max_terms=12):
        p = star_specialize(p)
        p = UPolynomial({UMonomial(m.xpart, 0, 0): c for m, c in p.terms.items()})
        for a in range(4):
            for b in range(4):
                assert truncate_length(truncate_length(p, a), b) == truncate_length(
                    p, min(a, b)
                )
    with pytest.raises(MalformedPolynomial):
        truncate_length(X1 * Z, 2)
    with pytest.raises(MalformedPolynomial):
        truncate_length(X1 * Y, 2)


def test_restrict_part_size():
    assert restrict_part_size(U_P3, 2) == X1**3 + 2 * X1 * X2
    assert restrict_part_size(U_P3, 3) == U_P3
    assert restrict_part_size(U_P3, 1) == X1**3
    with pytest.raises(MalformedPolynomial):
        restrict_part_size(Z, 1)


def test_text_codec_fixtures():
    assert poly_to_text(UPolynomial.zero()) == "0"
    assert poly_from_text("0") == UPolynomial.zero()
    assert poly_to_text(X1 * Z + Z**2) == "x1*z + z^2"
    assert poly_to_text(-X2 + X1) == "x1 - x2"
    assert poly_to_text(UPolynomial.one() * 7) == "7"
    assert poly_from_text("x1*z + z^2") == X1 * Z + Z**2
    assert poly_from_text("-2*x3^2*y^4*z + 1") == -2 * X3**2 * Y**4 * Z + 1 * UPolynomial.one()


def test_codec_roundtrips():
    rng = random.Random(9)
    for p in iter_random_polynomials(rng, 25):
        assert poly_from_text(poly_to_text(p)) == p
        assert poly_from_json_dict(poly_to_json_dict(p)) == p


def test_json_shape():
    data = poly_to_json_dict(X1 * Z + Z**2)
    assert data == {
        "terms": [
            {"c": "1", "y": 0, "z": 1, "parts": [1]},
            {"c": "1", "y": 0, "z": 2, "parts": []},
        ]
    }


def test_parse_errors_carry_position():
    with pytest.raises(PolyParseError) as info:
        poly_from_text("x1 + @")
    assert info.value.position == 5
    with pytest.raises(PolyParseError):
        poly_from_text("x1 * * z")
    with pytest.raises(PolyParseError):
        poly_from_text("x1^")
    with pytest.raises(PolyParseError):
        poly_from_json_dict({"terms": [{"c": "zz", "parts": []}]})
    with pytest.raises(PolyParseError):
        poly_from_json_dict({})


def test_monomial_order_is_strict_and_deterministic():
    p = X1 * Z + Z**2 + X2 + X1 * X2 + Y
    keys = [m.sort_key() for m, _ in p.sorted_terms()]
    assert keys == sorted(keys)
    assert len(set(keys)) == len(keys)
    # leading term is the maximal key (the highest z-power here)
    mono, coeff = p.leading_term()
    assert mono == UMonomial((), 2, 0) and coeff == 1


def test_serialization_follows_order():
    # serialisation ascends in (z, y, length, partition); stable across runs
    p = 3 * X3 + X1 * X2 + Z + X1 * Y
    assert poly_to_text(p) == "3*x3 + x1*x2 + x1*y + z"
