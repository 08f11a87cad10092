"""
Tests for integer linear algebra: Smith normal form, presented groups,
kernels, cokernels, homology and induced maps.
"""

import random

import pytest
from sympy import Matrix

from integer_linalg import (AbHom, IntMatrix, Lifter, PresentedAb, SmithForm, cokernel, format_invariants,
                            homology_at, homology_subquotient, image, induced_map, induced_on_homology,
                            invariant_factors, kernel, same_image, simplify, smith_normal_form, stack_homs)


def hom(source: PresentedAb, target: PresentedAb, rows) -> AbHom:
    return AbHom(source, target, IntMatrix.from_rows(rows, cols=source.gens))


def test_matrix_arithmetic():
    a = IntMatrix.from_rows([[1, 2], [3, 4]])
    b = IntMatrix.from_rows([[0, 1], [1, 0]])
    assert (a @ b).to_lists() == [[2, 1], [4, 3]]
    assert (a + b).to_lists() == [[1, 3], [4, 4]]
    assert (-a).to_lists() == [[-1, -2], [-3, -4]]
    assert a.transpose().to_lists() == [[1, 3], [2, 4]]
    with pytest.raises(ValueError):
        a @ IntMatrix.zeros(3, 1)


def test_smith_normal_form_textbook_example():
    a = IntMatrix.from_rows([[2, 4, 4], [-6, 6, 12], [10, -4, -16]])
    u, d, v = smith_normal_form(a)
    assert d.to_lists() == [[2, 0, 0], [0, 6, 0], [0, 0, 12]]
    assert (u @ a @ v) == d


def test_smith_form_repairs_divisibility():
    form = SmithForm(IntMatrix.from_rows([[2, 0], [0, 3]]))
    assert list(form.diagonal) == [1, 6]
    assert form.rank == 2


@pytest.mark.parametrize("seed", range(12))
def test_smith_normal_form_of_random_matrices(seed):
    rng = random.Random(seed)
    rows, cols = rng.randint(1, 5), rng.randint(1, 5)
    entries = [[rng.randint(-9, 9) for _ in range(cols)] for _ in range(rows)]
    a = IntMatrix.from_rows(entries, cols=cols)

    u, d, v = smith_normal_form(a)
    assert u @ a @ v == d
    assert abs(Matrix(u.to_lists()).det()) == 1
    assert abs(Matrix(v.to_lists()).det()) == 1

    factors = list(SmithForm(a, track=False).diagonal)
    assert all(x > 0 for x in factors)
    assert all(later % earlier == 0 for earlier, later in zip(factors, factors[1:]))
    expected = [[(factors[i] if i < len(factors) else 0) if i == j else 0 for j in range(cols)]
                for i in range(rows)]
    assert d.to_lists() == expected

    row_order = rng.sample(range(rows), rows)
    col_order = rng.sample(range(cols), cols)
    shuffled = IntMatrix.from_rows([[entries[i][j] for j in col_order] for i in row_order], cols=cols)
    assert list(SmithForm(shuffled, track=False).diagonal) == factors


def test_smith_form_solves_and_finds_kernel():
    a = IntMatrix.from_rows([[1, 2, 3], [2, 4, 6]])
    form = SmithForm(a)
    assert form.rank == 1
    for column in form.kernel_columns():
        vector = IntMatrix.from_columns([[column.get(k, 0) for k in range(3)]], 3)
        assert (a @ vector).is_zero()
    assert form.solve(IntMatrix.from_rows([[1], [2]])) is not None
    assert form.solve(IntMatrix.from_rows([[1], [1]])) is None


def test_presented_group_invariants():
    assert invariant_factors(PresentedAb.from_orders([2, 3])) == (0, [6])
    assert invariant_factors(PresentedAb.from_orders([2, 0, 4])) == (1, [2, 4])
    assert invariant_factors(PresentedAb.from_orders([1])) == (0, [])
    assert not PresentedAb.free(1).exponent_divides(6)
    assert PresentedAb.from_orders([2, 4]).exponent_divides(4)
    assert not PresentedAb.from_orders([2, 4]).exponent_divides(2)


def test_format_invariants():
    assert format_invariants(0, []) == "0"
    assert format_invariants(1, []) == "Z"
    assert format_invariants(2, [2]) == "Z^2 ⊕ Z/2"
    assert format_invariants(1, [3]) == "Z ⊕ Z/3"
    assert str(PresentedAb.direct_sum([PresentedAb.from_orders([2]), PresentedAb.free(1)])) == "Z ⊕ Z/2"
    assert format_invariants(0, [2, 6]) == "Z/2 ⊕ Z/6"


def test_contains_respects_relations():
    group = PresentedAb.from_orders([4])
    assert group.contains(IntMatrix.from_rows([[8]]))
    assert not group.contains(IntMatrix.from_rows([[2]]))
    skew = PresentedAb(2, IntMatrix.from_columns([[2, 2]], 2))
    assert skew.contains(IntMatrix.from_rows([[4], [4]]))
    assert not skew.contains(IntMatrix.from_rows([[2], [0]]))


def test_ill_defined_map_is_rejected():
    with pytest.raises(ValueError):
        hom(PresentedAb.from_orders([2]), PresentedAb.free(1), [[1]])


def test_kernel_and_cokernel_of_multiplication_by_two():
    z = PresentedAb.free(1)
    double = hom(z, z, [[2]])
    assert invariant_factors(kernel(double)[0]) == (0, [])
    assert invariant_factors(cokernel(double)[0]) == (0, [2])

    z4 = PresentedAb.from_orders([4])
    double4 = hom(z4, z4, [[2]])
    k, incl = kernel(double4)
    assert invariant_factors(k) == (0, [2])
    assert double4.compose(incl).is_zero()
    assert invariant_factors(image(double4)[0]) == (0, [2])


def test_reduction_mod_two_on_free_group():
    reduction = hom(PresentedAb.free(2), PresentedAb.from_orders([2]), [[1, 1]])
    k, incl = kernel(reduction)
    assert invariant_factors(k) == (2, [])
    assert reduction.is_surjective()
    assert not reduction.is_injective()


def test_homology_of_the_periodic_c2_complex():
    z = PresentedAb.free(1)
    zero = hom(z, z, [[0]])
    two = hom(z, z, [[2]])
    assert invariant_factors(homology_at(zero, two)) == (0, [])
    assert invariant_factors(homology_at(two, zero)) == (0, [2])
    with pytest.raises(ValueError):
        homology_subquotient(two, two)


def test_induced_map_on_homology():
    z = PresentedAb.free(1)
    zero_in = AbHom.zero(PresentedAb.zero(), z)
    # H = Z/2 on both sides; multiplication by 3 induces the identity, by 2 the zero map
    source = homology_subquotient(hom(z, z, [[2]]), AbHom.zero(z, z))
    target = homology_subquotient(hom(z, z, [[2]]), AbHom.zero(z, z))
    assert invariant_factors(source.group) == (0, [2])
    assert induced_map(source, target, hom(z, z, [[3]])).is_isomorphism()
    assert induced_map(source, target, hom(z, z, [[2]])).is_zero()
    assert invariant_factors(homology_subquotient(zero_in, AbHom.zero(z, z)).group) == (1, [])


def test_lifter_and_same_image():
    z2 = PresentedAb.free(2)
    first = hom(PresentedAb.free(1), z2, [[2], [0]])
    second = hom(PresentedAb.free(1), z2, [[-2], [0]])
    third = hom(PresentedAb.free(1), z2, [[1], [0]])
    assert same_image(first, second)
    assert not same_image(first, third)
    lifter = Lifter(first)
    assert lifter.lift(IntMatrix.from_rows([[6], [0]])).to_lists() == [[3]]
    assert not lifter.can_lift(IntMatrix.from_rows([[1], [0]]))
    with pytest.raises(ValueError):
        lifter.lift(IntMatrix.from_rows([[0], [1]]))


def test_simplify_gives_inverse_isomorphisms():
    group = PresentedAb(2, IntMatrix.from_columns([[2, 4], [0, 6]], 2))
    reduced, forward, backward = simplify(group)
    assert invariant_factors(reduced) == invariant_factors(group)
    assert backward.compose(forward).equals(AbHom.identity(group))
    assert forward.compose(backward).equals(AbHom.identity(reduced))


def test_stacked_maps_into_a_direct_sum():
    z = PresentedAb.free(1)
    to_two = hom(z, PresentedAb.from_orders([2]), [[1]])
    to_three = hom(z, PresentedAb.from_orders([3]), [[1]])
    stacked = stack_homs([to_two, to_three])
    assert invariant_factors(stacked.target) == (0, [6])
    assert stacked.is_surjective()
    assert invariant_factors(kernel(stacked)[0]) == (1, [])


def test_induced_on_homology_checks_the_squares():
    z = PresentedAb.free(1)
    two = hom(z, z, [[2]])
    zero = AbHom.zero(z, z)
    three = hom(z, z, [[3]])
    assert induced_on_homology(two, zero, two, zero, three, three, three).is_isomorphism()
    with pytest.raises(ValueError, match="Left square"):
        induced_on_homology(two, zero, zero, zero, three, three, three)
