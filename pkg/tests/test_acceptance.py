"""Acceptance suite: every criterion checked exactly, one pass/fail line each.

All comparisons are exact integer-polynomial equalities; the printed budget
next to each elapsed time is informational (run with ``pytest -s`` to see
the lines as they pass).
"""

import random
import time

from upoly.constructions import (
    build_ab,
    build_yz,
    delta0,
    p_cumulative,
    phi_upper_bound,
    verify_pair,
)
from upoly.graphmodel import (
    Graph,
    RootedTree,
    WeightedGraph,
    canonical_form,
    concat,
    join,
    random_rooted_tree,
)
from upoly.invariants import u_polynomial, u_rooted, w_polynomial
from upoly.polycore import (
    poly_from_text,
    poly_to_text,
    star_specialize,
    z_var,
)
from upoly.reconstruction import enumerate_rooted, reconstruct
from upoly.search import collision_scan, phi_restricted

ONE = RootedTree.single()


def _report(number: int, description: str, ok: bool, started: float, budget: str) -> None:
    status = "PASS" if ok else "FAIL"
    print(f"ACCEPTANCE {number:2d} [{status}] {description} "
          f"({time.time() - started:.1f}s, budget {budget})")
    assert ok, f"criterion {number} failed: {description}"


def test_acceptance_01_pair_collisions():
    started = time.time()
    ok = True
    for k, l in [(0, 0), (1, 0), (0, 1), (1, 1), (2, 1), (2, 2)]:
        report = verify_pair(k, l)
        ok &= report.agree_upto == k + l + 2
        ok &= not report.first_diff.is_zero()
        ok &= report.first_diff.min_xlength() == k + l + 4
        ok &= report.identities_ok  # includes the closed-form check
        ok &= not report.iso_free
    _report(1, "pair collisions agree to k+l+2, split at k+l+3, closed-form diff",
            ok, started, "5min for (2,2)")


def test_acceptance_02_twin_difference_identity():
    started = time.time()
    cache: dict = {}
    ok = delta0() == poly_from_text("x1*z^2 - x2*z")
    for k in range(5):
        a, b = build_ab(k)
        lhs = u_rooted(a, "fast", cache=cache) - u_rooted(b, "fast", cache=cache)
        ok &= lhs == delta0() * p_cumulative(k, cache=cache)
    _report(2, "rooted twin difference equals delta0 times the cumulative product (k<=4)",
            ok, started, "1min")


def test_acceptance_03_six_vertex_spider_roundtrip():
    started = time.time()
    displayed = poly_from_text(
        "x1^5*z + 3*x1^4*z^2 + 4*x1^3*z^3 + 4*x1^2*z^4 + 3*x1*z^5 + z^6"
        " + 2*x1^3*x2*z + 5*x1^2*x2*z^2 + 4*x1*x2*z^3 + x2*z^4"
        " + x1^2*x3*z + 2*x1*x3*z^2 + x3*z^3"
    )
    c2 = concat(ONE, ONE)
    spider = join(join(concat(ONE, concat(ONE, c2)), c2), c2)
    ok = u_rooted(spider, "fast") == displayed
    rebuilt = reconstruct(displayed)
    ok &= canonical_form(rebuilt, "rooted") == canonical_form(spider, "rooted")
    _report(3, "6-vertex spider reproduces the 13-term polynomial and reconstructs",
            ok, started, "1s")


def test_acceptance_04_product_formulas_dual_strategy():
    started = time.time()
    rng = random.Random(20240)
    z = z_var()
    ok = True
    for _ in range(200):
        g = random_rooted_tree(rng.randrange(1, 9), rng)
        h = random_rooted_tree(rng.randrange(1, 9), rng)
        fast_g, fast_h = u_rooted(g, "fast"), u_rooted(h, "fast")
        sub_g, sub_h = u_rooted(g, "subset"), u_rooted(h, "subset")
        u_h_fast = star_specialize(fast_h)
        u_h_sub = u_polynomial(h)
        joined_fast = u_rooted(join(g, h), "fast")
        joined_sub = u_rooted(join(g, h), "subset")
        ok &= joined_fast == joined_sub
        ok &= joined_fast * z == fast_g * fast_h
        ok &= joined_sub * z == sub_g * sub_h
        chained_fast = u_rooted(concat(g, h), "fast")
        chained_sub = u_rooted(concat(g, h), "subset")
        ok &= chained_fast == chained_sub
        ok &= chained_fast == fast_g * (fast_h + u_h_fast)
        ok &= chained_sub == sub_g * (sub_h + u_h_sub)
    _report(4, "joining/concatenation product formulas, 200 seeded pairs, both strategies",
            ok, started, "2min")


def test_acceptance_05_star_specialization():
    started = time.time()
    count = 0
    ok = True
    for n in range(1, 10):
        for t in enumerate_rooted(n):
            count += 1
            ok &= star_specialize(u_rooted(t, "fast")) == u_polynomial(t)
    ok &= count == 486  # every rooted tree with at most 9 vertices
    _report(5, "star-specialised rooted polynomial equals the unrooted one (<=9 vertices)",
            ok, started, "2min")


def test_acceptance_06_deletion_contraction_consistency():
    started = time.time()
    rng = random.Random(606)
    ok = True
    for _ in range(50):
        n = rng.randrange(1, 7)
        edges = [(rng.randrange(n), rng.randrange(n)) for _ in range(rng.randrange(10))]
        g = Graph(n, edges)
        reference = w_polynomial(WeightedGraph.with_unit_weights(g))
        ok &= reference == u_polynomial(g)
        shuffled = list(g.edges)
        for _ in range(10):
            rng.shuffle(shuffled)
            ok &= w_polynomial(Graph(n, shuffled)) == reference
    _report(6, "deletion-contraction equals subset expansion at unit weights, order-free",
            ok, started, "2min")


def test_acceptance_07_reconstruction_completeness():
    started = time.time()
    ok = True
    count = 0
    for n in range(1, 9):
        for t in enumerate_rooted(n):
            count += 1
            rebuilt = reconstruct(u_rooted(t, "fast"))
            ok &= canonical_form(rebuilt, "rooted") == canonical_form(t, "rooted")
    ok &= count == 200
    seen: dict[str, int] = {}
    total = 0
    for n in range(1, 11):
        for t in enumerate_rooted(n):
            total += 1
            seen[poly_to_text(u_rooted(t, "fast"))] = total
    ok &= len(seen) == total == 1205  # pairwise distinct polynomials
    _report(7, "reconstruction round-trips every rooted tree <=8; injective <=10",
            ok, started, "5min")


def test_acceptance_08_minimality_at_level_two():
    started = time.time()
    records = collision_scan(10, 2)
    ok = len(records) == 1 and records[0].n == 10
    y, z = build_yz(0, 0)
    expected = sorted([canonical_form(y, "free"), canonical_form(z, "free")])
    ok &= sorted(records[0].members) == expected
    ok &= collision_scan(9, 2) == []
    ok &= phi_restricted(2, 12) == 10 == phi_upper_bound(2)
    _report(8, "level-2 scan: unique collision at n=10, none below, minimum matches bound",
            ok, started, "10min")


def test_acceptance_09_full_polynomial_scan():
    started = time.time()
    ok = collision_scan(12, None) == []
    _report(9, "full-polynomial scan is collision-free for all trees up to 12 vertices",
            ok, started, "15min")


def test_acceptance_10_bound_table():
    started = time.time()
    ok = [phi_upper_bound(m) for m in range(2, 9)] == [10, 16, 22, 34, 46, 70, 94]
    _report(10, "piecewise size bound reproduces 10, 16, 22, 34, 46, 70, 94",
            ok, started, "1s")
