"""
Tests for cohomology tables, comparison maps and the direct-sum check.
"""

import jsonschema

from cochain_complexes import ComplexLabel, antisymmetric_KS, exterior_K_lambda
from cohomology_tables import ComparisonBuilder, cohomology, comparison_maps, direct_sum_check
from finite_groups import cyclic_group
from gmodules import sign_module, trivial_module
from job_schema import load_schema


def test_table_entries_and_strings(c2):
    table = cohomology(antisymmetric_KS(c2, trivial_module(c2, 2), 5), theory="symmetric")
    assert table.theory == "symmetric"
    assert table.group == "C2" and table.module == "F2"
    assert [str(e) for e in table.degrees] == ["Z/2", "Z/2", "0", "0", "0", "Z/2"]
    jsonschema.validate(table.to_dict(), load_schema("cohomology_table"))


def test_exterior_cohomology_of_c2_vanishes_above_degree_one(c2):
    table = cohomology(exterior_K_lambda(c2, trivial_module(c2, 0), 4))
    assert [table.invariants(n) for n in range(5)] == [(1, []), (0, []), (0, []), (0, []), (0, [])]


def test_comparison_on_c3_with_integers_is_iso_everywhere(c3):
    result = comparison_maps(c3, trivial_module(c3, 0), 2)
    for report in result.maps.values():
        assert all(d.is_iso for d in report.degrees)
    assert all(result.beta_is_alpha_gamma)
    jsonschema.validate(result.to_dict(), load_schema("map_report"))


def test_comparison_on_trivial_group_is_iso_everywhere():
    c1 = cyclic_group(1)
    result = comparison_maps(c1, trivial_module(c1, 0), 3)
    assert set(result.maps) == {"alpha", "beta", "gamma", "delta_projection"}
    for report in result.maps.values():
        assert all(d.is_iso for d in report.degrees)


def test_gamma_five_is_not_surjective_for_c2_with_f2(c2):
    result = ComparisonBuilder(c2, trivial_module(c2, 2), 5).compare()
    gamma = result.maps["gamma"]
    assert all(d.is_iso for d in gamma.degrees[:5])
    assert gamma.degrees[5].is_mono
    assert not gamma.degrees[5].is_iso
    assert gamma.degrees[5].cokernel == (0, [2])
    assert result.tables["delta"].invariants(5) == (0, [2])
    assert all(result.beta_is_alpha_gamma)


def test_alpha_and_beta_in_low_degrees_with_sign_coefficients(s3):
    result = comparison_maps(s3, sign_module(s3), 2)
    for name in ("alpha", "beta"):
        degrees = result.maps[name].degrees
        assert degrees[0].is_iso and degrees[1].is_iso
        assert degrees[2].is_mono


def test_builder_caches_complexes(c2):
    builder = ComparisonBuilder(c2, trivial_module(c2, 0), 2)
    assert builder.complex(ComplexLabel.KS) is builder.complex(ComplexLabel.KS)
    assert builder.table(ComplexLabel.K) is builder.table(ComplexLabel.K)


def test_direct_sum_check_on_c2_with_f2(c2):
    degrees = direct_sum_check(c2, trivial_module(c2, 2), 5)
    assert all(d.passed for d in degrees)
    assert degrees[5].symmetric == "Z/2"
    assert degrees[5].exterior == "0"
    assert degrees[5].delta == "Z/2"


def test_direct_sum_check_on_klein_group(klein):
    assert all(d.passed for d in direct_sum_check(klein, trivial_module(klein, 0), 3))
