"""
Tests for coefficient modules, the based resolution families, orbits and
equivariant Hom.
"""

import pytest

from finite_groups import cyclic_group, cyclic_subgroups_of_order, direct_product, symmetric_group
from gmodules import (EquivariantHom, Family, GModule, augmentation, augmentation_section, basis_size,
                      based_power, boundary, contracting_homotopy, delta_power, equivariant_hom, exterior_power,
                      face_expansion, group_ring_module, hom_differential, normalized_power, orbit_decomposition,
                      restrict, sign_module, tensor_power, tilde_exterior_power, trivial_module, twist)
from integer_linalg import AbHom, IntMatrix, PresentedAb, SmithForm, invariant_factors
from settings import Settings, SizeGuardError


def test_trivial_module_labels(c3):
    assert trivial_module(c3, 0).label == "Z"
    assert trivial_module(c3, 2).label == "F2"
    assert trivial_module(c3, 5).label == "Z/5"
    with pytest.raises(ValueError):
        trivial_module(c3, 1)


def test_sign_module_needs_a_sign_character(c2, c3, s3):
    assert sign_module(c2).matrix(1).to_lists() == [[-1]]
    transposition = next(g for g in range(6) if s3.element_orders[g] == 2)
    assert sign_module(s3).matrix(transposition).to_lists() == [[-1]]
    with pytest.raises(ValueError, match="sign character"):
        sign_module(c3)


def test_action_must_be_multiplicative(c2):
    with pytest.raises(ValueError):
        GModule(c2, PresentedAb.free(1), [IntMatrix.identity(1), IntMatrix.from_rows([[2]])])
    with pytest.raises(ValueError):
        GModule(c2, PresentedAb.free(1), [IntMatrix.from_rows([[-1]]), IntMatrix.from_rows([[-1]])])


def test_group_ring_module_permutes_basis(c3):
    zg = group_ring_module(c3)
    assert zg.gens == 3
    assert zg.matrix(1).to_lists() == [[0, 0, 1], [1, 0, 0], [0, 1, 0]]


def test_restrict_and_twist(s3):
    subgroup = cyclic_subgroups_of_order(s3, 2)[0]
    restricted = restrict(sign_module(s3), subgroup)
    assert restricted.group.order == 2
    assert restricted.matrix(1).to_lists() == [[-1]]
    twisted = twist(restrict(trivial_module(s3, 0), subgroup), (1, -1))
    assert twisted.matrix(1).to_lists() == [[-1]]
    assert twist(restricted, (1, 1)) is restricted


def test_basis_sizes_match_enumeration(c3, s3):
    for group in (c3, s3):
        for family in Family:
            for n in range(1, 4):
                assert based_power(group, family, n).rank == basis_size(family, group.order, n)
    assert tensor_power(c3, 2).rank == 9
    assert normalized_power(c3, 2).rank == 6
    assert exterior_power(c3, 2).rank == 3
    assert delta_power(c3, 2).rank == 3
    assert tilde_exterior_power(c3, 2).rank == 6
    assert exterior_power(c3, 4).rank == 0


def test_size_guard_names_the_flag(c3):
    with pytest.raises(SizeGuardError) as excinfo:
        tensor_power(c3, 3, Settings(max_basis=10))
    assert excinfo.value.dimension == 27
    assert excinfo.value.limit == 10
    assert "--max-basis" in str(excinfo.value)


def test_normalize_signs(c3):
    ext = exterior_power(c3, 2)
    assert ext.normalize((1, 0)) == (ext.index[(0, 1)], -1)
    assert ext.normalize((1, 1)) is None
    delta = delta_power(c3, 3)
    assert delta.normalize((1, 0, 1)) == (delta.index[(0, 1, 1)], 1)
    assert delta.normalize((0, 1, 2)) is None
    tilde = tilde_exterior_power(c3, 2)
    assert tilde.normalize((2, 0)) == (tilde.index[(0, 2)], -1)
    j, sign = tilde.normalize((1, 1))
    assert tilde.torsion[j] == 2 and sign == 1
    normalized = normalized_power(c3, 3)
    assert normalized.normalize((0, 0, 1)) is None
    assert normalized.normalize((0, 1, 0)) is not None


def test_exterior_square_of_c2_is_one_sign_orbit(c2):
    based = exterior_power(c2, 2)
    assert based.basis == [(0, 1)]
    [orbit] = based.orbits
    assert not orbit.is_free
    assert orbit.stabilizer.order == 2
    assert orbit.character == (1, -1)
    assert orbit.character_label == "sign"


def test_exterior_powers_of_s3_orbits(s3):
    square = exterior_power(s3, 2).orbits
    assert sorted(o.stabilizer.order for o in square) == [1, 2, 2, 2]
    assert all(o.character_label == "sign" for o in square if not o.is_free)

    cube = exterior_power(s3, 3).orbits
    stabilized = [o for o in cube if not o.is_free]
    assert len(stabilized) == 1
    assert stabilized[0].stabilizer.order == 3
    assert stabilized[0].character_label == "trivial"
    assert sum(o.size for o in cube) == 20


def test_transport_reaches_every_basis_word(c3):
    based = tensor_power(c3, 2)
    for i in range(based.rank):
        o, g, sign = based.transport(i)
        rep = based.orbits[o].representative
        assert based.act(g, rep) == (i, sign)


@pytest.mark.parametrize("family", list(Family))
def test_boundary_squares_to_zero(c3, family):
    powers = [None] + [based_power(c3, family, n) for n in range(1, 5)]
    for n in range(1, 3):
        assert boundary(powers[n + 1], powers[n]).compose(boundary(powers[n + 2], powers[n + 1])).is_zero()
    assert augmentation(powers[1]).compose(boundary(powers[2], powers[1])).is_zero()


@pytest.mark.parametrize("family", list(Family))
def test_contracting_homotopy(c3, family):
    powers = [None] + [based_power(c3, family, n) for n in range(1, 5)]
    for n in range(1, 4):
        carrier = powers[n].carrier
        upper = boundary(powers[n + 1], powers[n]).compose(contracting_homotopy(powers[n], powers[n + 1]))
        if n == 1:
            lower = augmentation_section(powers[1]).compose(augmentation(powers[1]))
        else:
            lower = contracting_homotopy(powers[n - 1], powers[n]).compose(boundary(powers[n], powers[n - 1]))
        total = AbHom(carrier, carrier, upper.matrix + lower.matrix, check=False)
        assert total.equals(AbHom.identity(carrier))


def test_boundary_rejects_non_consecutive_degrees(c3):
    with pytest.raises(ValueError):
        boundary(tensor_power(c3, 3), tensor_power(c3, 1))
    with pytest.raises(ValueError):
        boundary(exterior_power(c3, 2), tensor_power(c3, 1))


@pytest.mark.parametrize("family", [Family.EXTERIOR, Family.TILDE])
def test_boundary_of_identity_wedge_t_is_t_minus_identity(s3, family):
    source, target = based_power(s3, family, 2), based_power(s3, family, 1)
    d = boundary(source, target)
    for t in range(1, s3.order):
        column = d.matrix.column(source.index[(0, t)])
        assert face_expansion(source, target, source.index[(0, t)]) == {target.index[(t,)]: 1,
                                                                          target.index[(0,)]: -1}
        assert column[target.index[(t,)]] == 1
        assert column[target.index[(0,)]] == -1
        assert sum(abs(c) for c in column) == 2


def test_hom_from_free_module_is_the_module(c3):
    hom = EquivariantHom(tensor_power(c3, 1), trivial_module(c3, 0))
    assert invariant_factors(hom.group) == (1, [])
    hom_zg = EquivariantHom(tensor_power(c3, 1), group_ring_module(c3))
    assert invariant_factors(hom_zg.group) == (3, [])


def test_hom_from_sign_orbit_sees_two_torsion(c2):
    based = exterior_power(c2, 2)
    assert invariant_factors(EquivariantHom(based, trivial_module(c2, 0)).group) == (0, [])
    assert invariant_factors(EquivariantHom(based, trivial_module(c2, 2)).group) == (0, [2])
    assert invariant_factors(EquivariantHom(based, sign_module(c2)).group) == (1, [])


def test_function_table_is_equivariant(c3):
    module = group_ring_module(c3)
    hom = EquivariantHom(tensor_power(c3, 2), module)
    table = hom.function_table()
    m = module.gens
    for i in range(hom.based.rank):
        for g in range(c3.order):
            j, sign = hom.based.act(g, i)
            block_i = IntMatrix.from_rows(table.entries[i * m:(i + 1) * m], cols=table.cols)
            block_j = IntMatrix.from_rows(table.entries[j * m:(j + 1) * m], cols=table.cols)
            assert (module.matrix(g) @ block_i).scaled(sign) == block_j


def equivariance_constraints(based, module) -> IntMatrix:
    """Rows s·f(e_j) - g·f(e_i) = 0 for every g·e_i = s·e_j, on M^basis."""
    gens = module.gens
    rows = []
    for g in range(based.group.order):
        action = module.matrix(g).entries
        for i in range(based.rank):
            j, sign = based.act(g, i)
            for r in range(gens):
                row = [0] * (based.rank * gens)
                for c in range(gens):
                    row[i * gens + c] -= action[r][c]
                row[j * gens + r] += sign
                rows.append(row)
    return IntMatrix.from_rows(rows, cols=based.rank * gens)


GROUPS = {"C2": lambda: cyclic_group(2), "C3": lambda: cyclic_group(3), "S3": lambda: symmetric_group(3),
          "C2xC2": lambda: direct_product(cyclic_group(2), cyclic_group(2))}
MODULES = {"Z": lambda g: trivial_module(g, 0), "Zsign": sign_module, "ZG": group_ring_module}


@pytest.mark.parametrize("group_name, family, degree, module_name", [
    ("C2", Family.EXTERIOR, 2, "Z"),
    ("C2", Family.EXTERIOR, 2, "Zsign"),
    ("C2", Family.TENSOR, 3, "ZG"),
    ("C3", Family.NORMALIZED, 3, "Z"),
    ("C3", Family.EXTERIOR, 2, "ZG"),
    ("S3", Family.EXTERIOR, 2, "Zsign"),
    ("S3", Family.EXTERIOR, 3, "Z"),
    ("S3", Family.EXTERIOR, 4, "Zsign"),
    ("S3", Family.TENSOR, 2, "Z"),
    ("C2xC2", Family.EXTERIOR, 2, "ZG"),
    ("C2xC2", Family.EXTERIOR, 4, "Z"),
])
def test_hom_matches_brute_force_equivariant_functions(group_name, family, degree, module_name):
    group = GROUPS[group_name]()
    based = based_power(group, family, degree)
    module = MODULES[module_name](group)
    assert based.rank * module.gens <= 64

    constraints = equivariance_constraints(based, module)
    kernel_rank = based.rank * module.gens - SmithForm(constraints, track=False).rank
    hom = equivariant_hom(based, module)
    table = hom.function_table()

    assert (constraints @ table).is_zero()
    assert invariant_factors(hom.group) == (kernel_rank, [])
    # the table spans the whole saturated kernel, not a finite-index sublattice
    spanned = SmithForm(table, track=False)
    assert spanned.rank == kernel_rank
    assert all(d == 1 for d in spanned.diagonal)


@pytest.mark.parametrize("group_name", list(GROUPS))
def test_delta_squares_and_cubes_have_only_free_orbits(group_name):
    group = GROUPS[group_name]()
    for n, rank in ((2, group.order), (3, group.order ** 2)):
        based = delta_power(group, n)
        assert based.rank == rank
        assert all(o.is_free for o in based.orbits)
        assert len(based.orbits) == rank // group.order


def test_hom_differential_squares_to_zero(s3):
    module = sign_module(s3)
    homs = [EquivariantHom(tilde_exterior_power(s3, n), module) for n in range(1, 5)]
    for n in range(2):
        first = hom_differential(homs[n], homs[n + 1])
        second = hom_differential(homs[n + 1], homs[n + 2])
        assert second.compose(first).is_zero()


def test_hom_over_different_groups_is_rejected(c2, c3):
    with pytest.raises(ValueError):
        EquivariantHom(tensor_power(c2, 1), trivial_module(c3, 0))


def test_characteristic_of_each_family(c2, c3):
    assert tensor_power(c3, 2).characteristic == 0
    assert exterior_power(c3, 2).characteristic == 0
    assert delta_power(c2, 2).characteristic == 2
    assert tilde_exterior_power(c2, 2).characteristic == 0


def test_orbit_decomposition_partitions_the_basis(s3):
    based = exterior_power(s3, 2)
    orbits = orbit_decomposition(based)
    assert sum(o.size for o in orbits) == based.rank
    for orbit in orbits:
        assert orbit.size * orbit.stabilizer.order == s3.order
        assert all(orbit.representative <= based.act(g, orbit.representative)[0] for g in range(s3.order))


def test_evaluator_on_trivial_coefficients(c3):
    hom = equivariant_hom(tensor_power(c3, 1), trivial_module(c3, 0))
    assert [hom.evaluate([5], i) for i in range(3)] == [(5,), (5,), (5,)]


def test_lambda_differential_vanishes_for_c2_with_f2(c2):
    module = trivial_module(c2, 2)
    lower = equivariant_hom(exterior_power(c2, 1), module)
    upper = equivariant_hom(exterior_power(c2, 2), module)
    assert invariant_factors(lower.group) == (0, [2])
    assert invariant_factors(upper.group) == (0, [2])
    assert hom_differential(lower, upper).is_zero()
