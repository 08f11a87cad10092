"""
Tests for the E1 page, stabilizer cohomology and the cross-checks.
"""

import asyncio

import jsonschema
import pytest

from finite_groups import cyclic_group, direct_product, symmetric_group
from gmodules import sign_module, trivial_module
from integer_linalg import invariant_factors
from job_schema import load_schema
from spectral_sequence import (E1PageBuilder, VanishingCell, cyclic_generator, e1_entry, e1_page,
                               periodic_cyclic_cohomology, prime_column_crosscheck, row0_complex, subgroup_cohomology,
                               vanishing_reason, vanishing_report)


def test_periodic_cohomology_of_c2(c2):
    z = trivial_module(c2, 0)
    assert [invariant_factors(periodic_cyclic_cohomology(c2, z, q)) for q in range(5)] == \
        [(1, []), (0, []), (0, [2]), (0, []), (0, [2])]
    sign = sign_module(c2)
    assert [invariant_factors(periodic_cyclic_cohomology(c2, sign, q)) for q in range(4)] == \
        [(0, []), (0, [2]), (0, []), (0, [2])]


def test_periodic_cohomology_needs_a_cyclic_group(klein):
    with pytest.raises(ValueError):
        periodic_cyclic_cohomology(klein, trivial_module(klein, 0), 1)
    with pytest.raises(ValueError):
        cyclic_generator(klein)


def test_periodic_and_normalized_routes_agree(c3):
    module = trivial_module(c3, 0)
    for q in range(4):
        assert invariant_factors(periodic_cyclic_cohomology(c3, module, q)) == \
            invariant_factors(subgroup_cohomology(c3, module, q))


def test_e1_page_of_c2_has_two_columns(c2):
    page = e1_page(c2, trivial_module(c2, 0), 3, 2)
    assert str(page.entry(0, 0)) == "Z"
    assert str(page.entry(1, 0)) == "0"
    assert str(page.entry(1, 1)) == "Z/2"
    assert str(page.entry(1, 2)) == "0"
    for p in (2, 3):
        for q in range(3):
            assert page.entry(p, q).group.is_trivial()
    for q in (1, 2):
        assert page.entry(0, q).group.is_trivial()
    assert page.row0_is_exterior


def test_e1_entries_of_s3(s3):
    module = trivial_module(s3, 0)
    first = e1_entry(s3, module, 1, 1)
    assert invariant_factors(first.group) == (0, [2, 2, 2])
    assert sorted(o.stabilizer.order for o in first.orbits if not o.is_free) == [2, 2, 2]
    second = e1_entry(s3, module, 2, 2)
    assert invariant_factors(second.group) == (0, [3])
    assert invariant_factors(e1_entry(s3, module, 2, 1).group) == (0, [])


def test_entry_rejects_negative_coordinates(c2):
    with pytest.raises(ValueError):
        e1_entry(c2, trivial_module(c2, 0), -1, 0)


@pytest.mark.parametrize("ell", [2, 3])
@pytest.mark.parametrize("q", [1, 2, 3])
def test_prime_columns_match_subgroup_cohomology(s3, ell, q):
    check = prime_column_crosscheck(s3, trivial_module(s3, 0), ell, q)
    assert check.passed
    assert check.subgroup_count == (3 if ell == 2 else 1)


def test_prime_column_crosscheck_validates_inputs(s3):
    module = trivial_module(s3, 0)
    with pytest.raises(ValueError):
        prime_column_crosscheck(s3, module, 4, 1)
    with pytest.raises(ValueError):
        prime_column_crosscheck(s3, module, 2, 0)


def test_vanishing_reasons(s3):
    assert vanishing_reason(s3, 6, 0) == "truncation"
    assert vanishing_reason(s3, 0, 2) == "column zero"
    assert vanishing_reason(s3, 4, 1) == "no solutions of x^(p+1)=1"
    assert vanishing_reason(s3, 3, 1) == ""
    assert vanishing_reason(s3, 4, 0) == ""


def test_vanishing_report_is_consistent(c3):
    cells = vanishing_report(c3, trivial_module(c3, 0), 3, 2)
    assert len(cells) == 12
    assert all(cell.consistent for cell in cells)
    assert any(cell.expected_zero for cell in cells)


def test_row0_is_the_exterior_complex(s3):
    row0, matches = row0_complex(s3, sign_module(s3), 3)
    assert matches
    assert row0.squares_to_zero()


def test_page_json_matches_schema(s3):
    page = e1_page(s3, trivial_module(s3, 0), 2, 1)
    document = page.to_dict()
    jsonschema.validate(document, load_schema("e1_page"))
    assert [(e["p"], e["q"]) for e in document["entries"]] == [(p, q) for p in range(3) for q in range(2)]


def test_async_page_matches_serial_page():
    c4 = cyclic_group(4)
    module = trivial_module(c4, 2)
    serial = E1PageBuilder(c4, module).build(3, 2).to_dict()
    parallel = asyncio.run(E1PageBuilder(c4, module).build_async(3, 2, threads=3)).to_dict()
    assert serial == parallel


@pytest.mark.parametrize("group_name, modulus, pmax, qmax", [
    ("S3", 0, 4, 3),
    ("S3", 3, 3, 2),
    ("C2xC2", 0, 3, 3),
    ("C4", 0, 3, 3),
])
def test_positive_rows_are_killed_by_the_group_order(group_name, modulus, pmax, qmax):
    group = {"S3": symmetric_group(3), "C2xC2": direct_product(cyclic_group(2), cyclic_group(2)),
             "C4": cyclic_group(4)}[group_name]
    page = e1_page(group, trivial_module(group, modulus), pmax, qmax)
    for (p, q), entry in page.entries.items():
        if q > 0:
            assert entry.group.exponent_divides(group.order), f"E1[{p},{q}] = {entry}"


def test_vanishing_cell_flags_entries_not_killed_by_the_group_order():
    assert VanishingCell(1, 1, False, "", False).consistent
    assert not VanishingCell(1, 1, False, "", False, annihilated=False).consistent
    assert not VanishingCell(0, 1, True, "column zero", False).consistent


def test_klein_top_exterior_power_gives_its_own_cohomology(klein):
    module = trivial_module(klein, 0)
    expected = [(1, []), (0, []), (0, [2, 2]), (0, [2])]
    for q, factors in enumerate(expected):
        entry = e1_entry(klein, module, 3, q)
        assert entry.free_orbits == 0
        [orbit] = entry.orbits
        assert orbit.stabilizer.order == 4
        assert orbit.character_label == "trivial"
        assert invariant_factors(entry.group) == factors
        assert invariant_factors(subgroup_cohomology(klein, module, q)) == factors
