import pytest

from upoly.constructions import build_yz, phi_upper_bound
from upoly.errors import CapExceeded
from upoly.graphmodel import canonical_form
from upoly.invariants import u_rooted
from upoly.polycore import poly_to_text, star_specialize, truncate_length
from upoly.search import collision_scan, enumerate_free, phi_restricted


def test_enumerate_free_counts():
    assert [sum(1 for _ in enumerate_free(n)) for n in range(1, 9)] == [1, 1, 1, 2, 3, 6, 11, 23]


def test_enumerate_free_distinct_codes():
    for n in range(1, 10):
        codes = [canonical_form(t, "free") for t in enumerate_free(n)]
        assert len(set(codes)) == len(codes)


def test_enumerate_free_cap():
    with pytest.raises(CapExceeded):
        list(enumerate_free(19))


def test_scan_finds_smallest_pair():
    records = collision_scan(10, 2)
    assert len(records) == 1
    record = records[0]
    assert record.n == 10 and record.m == 2
    y, z = build_yz(0, 0)
    assert sorted(record.members) == sorted(
        [canonical_form(y, "free"), canonical_form(z, "free")]
    )
    shared = truncate_length(star_specialize(u_rooted(y)), 2)
    assert record.shared == shared


def test_scan_below_ten_is_empty():
    assert collision_scan(9, 2) == []


def test_collision_monotone_in_level():
    [record] = collision_scan(10, 2)
    y, z = build_yz(0, 0)
    u_y = star_specialize(u_rooted(y))
    u_z = star_specialize(u_rooted(z))
    for lower in (0, 1, 2):
        assert truncate_length(u_y, lower) == truncate_length(u_z, lower)


def test_phi_restricted():
    assert phi_restricted(2, 9) is None
    assert phi_restricted(2, 10) == 10 == phi_upper_bound(2)


def test_scan_threads_deterministic():
    single = [r.to_json_dict() for r in collision_scan(10, 2, threads=1)]
    multi = [r.to_json_dict() for r in collision_scan(10, 2, threads=2)]
    assert single == multi


def test_record_json_shape():
    [record] = collision_scan(10, 2)
    data = record.to_json_dict()
    assert set(data) == {"n", "m", "members", "shared"}
    assert data["n"] == 10 and data["m"] == 2
    assert all(isinstance(member, str) for member in data["members"])
    assert data["shared"] == poly_to_text(record.shared)
