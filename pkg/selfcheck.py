"""
Selfcheck: the acceptance suite

This module runs every guard-safe acceptance claim and records its outcome
and timing in a RunLedger. Each claim returns (passed, detail); the
manifest lists claims in a fixed order whatever the worker count.
"""

import asyncio
import logging
import time
import uuid
from dataclasses import dataclass
from typing import Callable, List, Optional, Tuple

from cochain_complexes import (ComplexLabel, antisymmetric_KS, classical_C, delta_hom_complex,
                               exterior_K_lambda, homogeneous_K, normalized_NC, normalized_NK,
                               normalized_symmetric_C_lambda, psi_chain_map, psi_inverse_matrix,
                               quotient_inclusion, splitting_maps, symmetric_CS)
from cohomology_tables import ComparisonBuilder, cohomology, direct_sum_check, induced_report
from finite_groups import Group, cyclic_group, direct_product, sign_character, symmetric_group
from gmodules import (Family, GModule, augmentation, augmentation_section, based_power, boundary,
                      contracting_homotopy, exterior_power, sign_module, trivial_module)
from integer_linalg import AbHom, format_invariants, homology_at, invariant_factors, same_image
from run_ledger import RunLedger
from settings import Settings, get_settings
from spectral_sequence import (E1PageBuilder, periodic_cyclic_cohomology, prime_column_crosscheck,
                               vanishing_reason)

logger = logging.getLogger(__name__)

Outcome = Tuple[bool, str]

TRIVIAL = (0, [])


@dataclass
class Claim:
    name: str
    anchor: str
    check: Callable[[Settings], Outcome]


def _grid_groups() -> List[Group]:
    c2 = cyclic_group(2)
    return [c2, cyclic_group(3), cyclic_group(4), direct_product(c2, c2), symmetric_group(3)]


def _grid_modules(group: Group) -> List[GModule]:
    modules = [trivial_module(group, 0), trivial_module(group, 2), trivial_module(group, 4)]
    if sign_character(group) is not None:
        modules.append(sign_module(group))
    return modules


def _grid() -> List[Tuple[Group, GModule]]:
    return [(g, m) for g in _grid_groups() for m in _grid_modules(g)]


def _collect(failures: List[str], checked: str) -> Outcome:
    if failures:
        return False, "; ".join(failures)
    return True, checked


# --- Claims ---

def symmetric_c2_f2(settings: Settings) -> Outcome:
    group = cyclic_group(2)
    table = cohomology(antisymmetric_KS(group, trivial_module(group, 2), 9, settings))
    failures = []
    for n in range(10):
        expected = (0, [2]) if n == 0 or n % 4 == 1 else TRIVIAL
        if table.invariants(n) != expected:
            failures.append(f"HS^{n} = {table.entry(n)}, expected {format_invariants(*expected)}")
    return _collect(failures, "HS^0..HS^9 of C2 with F2 coefficients")


def exterior_c2(settings: Settings) -> Outcome:
    group = cyclic_group(2)
    failures = []
    for module in (trivial_module(group, 0), trivial_module(group, 2), sign_module(group)):
        table = cohomology(exterior_K_lambda(group, module, 6, settings))
        for n in range(7):
            expected = invariant_factors(periodic_cyclic_cohomology(group, module, n)) if n <= 1 else TRIVIAL
            if table.invariants(n) != expected:
                failures.append(f"H_lambda^{n}(C2, {module.label}) = {table.entry(n)}")
    return _collect(failures, "C2 with Z, F2, Zsign in degrees 0..6")


def exterior_cyclic_prime(settings: Settings) -> Outcome:
    failures = []
    for ell in (3, 5):
        group = cyclic_group(ell)
        for module in (trivial_module(group, 0), trivial_module(group, ell)):
            table = cohomology(exterior_K_lambda(group, module, ell + 1, settings))
            for n in range(ell + 2):
                if n <= ell - 1:
                    expected = invariant_factors(periodic_cyclic_cohomology(group, module, n))
                else:
                    expected = TRIVIAL
                if table.invariants(n) != expected:
                    failures.append(f"H_lambda^{n}(C{ell}, {module.label}) = {table.entry(n)}")
    return _collect(failures, "C3 and C5 with Z and Z/ell")


def delta_vanishing(settings: Settings) -> Outcome:
    failures = []
    grid = _grid()
    for group, module in grid:
        table = cohomology(delta_hom_complex(group, module, 4, settings))
        for n in range(5):
            if table.invariants(n) != TRIVIAL:
                failures.append(f"H_delta^{n}({group.label}, {module.label}) = {table.entry(n)}")
    return _collect(failures, f"{len(grid)} group/module pairs in degrees 0..4")


def delta_degree_five(settings: Settings) -> Outcome:
    group = cyclic_group(2)
    module = trivial_module(group, 2)
    ks = antisymmetric_KS(group, module, 5, settings)
    k_lambda = exterior_K_lambda(group, module, 5, settings)
    delta = delta_hom_complex(group, module, 5, settings)
    h_delta = cohomology(delta)
    _, _, section = splitting_maps(ks, k_lambda, delta)
    gamma = induced_report("gamma", section, cohomology(k_lambda), cohomology(ks))
    failures = []
    if h_delta.invariants(5) != (0, [2]):
        failures.append(f"H_delta^5(C2, F2) = {h_delta.entry(5)}")
    if gamma.degrees[5].cokernel == TRIVIAL:
        failures.append("gamma^5 is surjective")
    return _collect(failures, "H_delta^5(C2, F2) = Z/2 and gamma^5 not onto")


def symmetric_splits(settings: Settings) -> Outcome:
    failures = []
    grid = _grid()
    for group, module in grid:
        for degree in direct_sum_check(group, module, 5, settings):
            if not degree.passed:
                failures.append(f"{group.label}/{module.label} degree {degree.n}: HS = {degree.symmetric}, "
                                f"H_lambda ⊕ H_delta = {degree.exterior} ⊕ {degree.delta}")
    return _collect(failures, f"{len(grid)} group/module pairs in degrees 0..5")


def gamma_without_two_torsion(settings: Settings) -> Outcome:
    failures = []
    for group in _grid_groups():
        for modulus in (0, 3, 5):
            module = trivial_module(group, modulus)
            builder = ComparisonBuilder(group, module, 5, settings)
            ks = builder.complex(ComplexLabel.KS)
            k_lambda = builder.complex(ComplexLabel.K_LAMBDA)
            delta = builder.complex(ComplexLabel.DELTA)
            _, _, section = splitting_maps(ks, k_lambda, delta)
            for n in range(6):
                if not delta.terms[n].is_trivial() or not section.components[n].is_isomorphism():
                    failures.append(f"KS^{n} != K_lambda^{n} for {group.label}, {module.label}")
            gamma = induced_report("gamma", section, builder.table(ComplexLabel.K_LAMBDA),
                                   builder.table(ComplexLabel.KS))
            failures += [f"gamma^{d.n} not iso for {group.label}, {module.label}" for d in gamma.degrees
                         if not d.is_iso]
    for order in (2, 3):
        group = cyclic_group(order)
        module = trivial_module(group, 0)
        k = homogeneous_K(group, module, 3, settings)
        from_ks = quotient_inclusion(antisymmetric_KS(group, module, 3, settings), k)
        from_lambda = quotient_inclusion(exterior_K_lambda(group, module, 3, settings), k)
        for n in range(4):
            if not same_image(from_ks.components[n], from_lambda.components[n]):
                failures.append(f"KS^{n} and K_lambda^{n} differ inside K^{n} for C{order}")
    return _collect(failures, "Z, Z/3, Z/5 over the grid up to degree 5")


def low_degree_comparison(settings: Settings) -> Outcome:
    failures = []
    grid = _grid()
    for group, module in grid:
        result = ComparisonBuilder(group, module, 2, settings).compare()
        for name in ("alpha", "beta"):
            report = result.maps[name]
            for n in (0, 1):
                if not report.degrees[n].is_iso:
                    failures.append(f"{name}^{n} not iso for {group.label}, {module.label}")
            if not report.degrees[2].is_mono:
                failures.append(f"{name}^2 not mono for {group.label}, {module.label}")
    for order in (3, 5):
        group = cyclic_group(order)
        for module in (trivial_module(group, 0), trivial_module(group, order)):
            result = ComparisonBuilder(group, module, 2, settings).compare()
            if not result.maps["beta"].degrees[2].is_iso:
                failures.append(f"beta^2 not iso for C{order}, {module.label}")
    return _collect(failures, f"{len(grid)} pairs in degrees 0..2, beta^2 on C3 and C5")


def beta_without_small_torsion(settings: Settings) -> Outcome:
    group = cyclic_group(5)
    module = trivial_module(group, 5)
    k = homogeneous_K(group, module, 3, settings)
    k_lambda = exterior_K_lambda(group, module, 3, settings)
    beta = induced_report("beta", quotient_inclusion(k_lambda, k), cohomology(k_lambda), cohomology(k))
    failures = [f"beta^{d.n} not iso" for d in beta.degrees if not d.is_iso]
    return _collect(failures, "C5 with Z/5 in degrees 0..3")


def e1_symmetric_three(settings: Settings) -> Outcome:
    group = symmetric_group(3)
    module = trivial_module(group, 0)
    page = E1PageBuilder(group, module, settings).build(5, 3)
    failures = []
    for q in range(1, 4):
        if not page.entry(0, q).group.is_trivial():
            failures.append(f"E1[0,{q}] = {page.entry(0, q)}")
        for ell in (2, 3):
            check = prime_column_crosscheck(group, module, ell, q, settings)
            if not check.passed:
                failures.append(f"E1[{ell - 1},{q}] = {check.entry}, subgroups give {check.product}")
    stabilized = [o for o in page.entry(1, 0).orbits if not o.is_free]
    if sorted(o.stabilizer.order for o in stabilized) != [2, 2, 2]:
        failures.append("column 1 does not come from three subgroups of order 2")
    for (p, q), entry in sorted(page.entries.items()):
        if vanishing_reason(group, p, q) and not entry.group.is_trivial():
            failures.append(f"E1[{p},{q}] = {entry} should vanish ({vanishing_reason(group, p, q)})")
        if q > 0 and not entry.group.exponent_divides(group.order):
            failures.append(f"E1[{p},{q}] = {entry} is not killed by {group.order}")
    if not page.row0_is_exterior:
        failures.append("row 0 differs from the exterior complex")
    return _collect(failures, "S3 with Z, p <= 5, q <= 3")


def _homotopy_holds(group: Group, family: Family, top: int, settings: Settings) -> bool:
    powers = [None] + [based_power(group, family, n, settings) for n in range(1, top + 2)]
    for n in range(1, top + 1):
        upper = boundary(powers[n + 1], powers[n]).compose(contracting_homotopy(powers[n], powers[n + 1]))
        if n == 1:
            lower = augmentation_section(powers[1]).compose(augmentation(powers[1]))
        else:
            lower = contracting_homotopy(powers[n - 1], powers[n]).compose(boundary(powers[n], powers[n - 1]))
        total = AbHom(powers[n].carrier, powers[n].carrier, upper.matrix + lower.matrix, check=False)
        if not total.equals(AbHom.identity(powers[n].carrier)):
            return False
    return True


def structural_invariants(settings: Settings) -> Outcome:
    failures = []
    small = [cyclic_group(2), cyclic_group(3), symmetric_group(3)]

    for group in small:
        module = trivial_module(group, 0)
        complexes = [homogeneous_K(group, module, 2, settings), normalized_NK(group, module, 3, settings),
                     antisymmetric_KS(group, module, 4, settings), exterior_K_lambda(group, module, 4, settings),
                     delta_hom_complex(group, module, 4, settings)]
        if group.order <= 3:
            ambient = classical_C(group, module, 3, settings)
            complexes += [ambient, normalized_NC(group, module, 3, settings, ambient),
                          symmetric_CS(group, module, 3, settings, ambient),
                          normalized_symmetric_C_lambda(group, module, 3, settings, ambient)]
        failures += [f"d∘d != 0 on {c.describe()}" for c in complexes if not c.squares_to_zero()]

        for family in Family:
            if not _homotopy_holds(group, family, 3, settings):
                failures.append(f"h∂ + ∂h != id for the {family.value} family of {group.label}")

        top = 6 if group.order <= 3 else 4
        deltas = [based_power(group, Family.DELTA, n, settings) for n in range(1, top + 2)]
        for k in range(2, top + 1):
            d_in = boundary(deltas[k], deltas[k - 1])
            d_out = boundary(deltas[k - 1], deltas[k - 2])
            if not homology_at(d_in, d_out).is_trivial():
                failures.append(f"delta resolution of {group.label} has homology at degree {k}")

        for p in range(group.order):
            for orbit in exterior_power(group, p + 1, settings).orbits:
                if (p + 1) % orbit.stabilizer.order:
                    failures.append(f"stabilizer of order {orbit.stabilizer.order} in degree {p + 1} of {group.label}")

    for group in small[:2]:
        for module in (trivial_module(group, 0), trivial_module(group, 2)):
            k = homogeneous_K(group, module, 3, settings)
            c = classical_C(group, module, 3, settings)
            psi = psi_chain_map(k, c)
            if not psi.commutes():
                failures.append(f"psi squares do not commute for {group.label}, {module.label}")
            for n in range(4):
                inverse = AbHom(c.terms[n], k.terms[n], psi_inverse_matrix(k.homs[n], n, c.terms[n]), check=False)
                if not (inverse.compose(psi.components[n]).equals(AbHom.identity(k.terms[n]))
                        and psi.components[n].compose(inverse).equals(AbHom.identity(c.terms[n]))):
                    failures.append(f"psi^{n} not invertible for {group.label}, {module.label}")
            symmetric = psi_chain_map(antisymmetric_KS(group, module, 3, settings), symmetric_CS(group, module, 3, settings, c))
            for n in range(4):
                if not symmetric.components[n].is_isomorphism():
                    failures.append(f"psi(KS^{n}) != CS^{n} for {group.label}, {module.label}")
    return _collect(failures, "C2, C3, S3: d∘d, homotopies, delta acyclicity, stabilizers, psi")


CLAIMS: List[Claim] = [
    Claim("symmetric_c2_f2", "symmetric cohomology of C2 with F2 is F2 in degree 0 and degrees 1 mod 4, else 0",
          symmetric_c2_f2),
    Claim("exterior_c2", "exterior cohomology of C2 agrees with classical in degrees 0 and 1 and vanishes above",
          exterior_c2),
    Claim("exterior_cyclic_prime", "exterior cohomology of C_ell agrees with classical below ell and vanishes from ell on",
          exterior_cyclic_prime),
    Claim("delta_vanishing", "delta cohomology vanishes in degrees 0-4", delta_vanishing),
    Claim("delta_degree_five", "delta cohomology of C2 with F2 is F2 in degree 5, so gamma^5 is not onto",
          delta_degree_five),
    Claim("symmetric_splits", "symmetric cohomology splits as exterior plus delta cohomology", symmetric_splits),
    Claim("gamma_without_two_torsion", "without 2-torsion the symmetric and exterior complexes coincide",
          gamma_without_two_torsion),
    Claim("low_degree_comparison", "alpha and beta are iso in degrees 0-1 and mono in degree 2; beta^2 iso for odd cyclic",
          low_degree_comparison),
    Claim("beta_without_small_torsion", "with no elements of order 2 or 3, beta is iso in low degrees",
          beta_without_small_torsion),
    Claim("e1_symmetric_three", "E1 page of S3 matches stabilizer cohomology and vanishes where x^(p+1)=1 is trivial",
          e1_symmetric_three),
    Claim("structural_invariants", "differentials square to zero, resolutions contract, psi is an isomorphism",
          structural_invariants),
]


def run_claim(claim: Claim, settings: Settings) -> Tuple[Outcome, float]:
    started = time.perf_counter()
    try:
        outcome = claim.check(settings)
    except Exception as e:
        logger.exception(f"Claim {claim.name} raised")
        outcome = (False, f"error: {type(e).__name__}: {e}")
    return outcome, time.perf_counter() - started


async def run_selfcheck(threads: int = 1, settings: Optional[Settings] = None,
                        claims: Optional[List[Claim]] = None,
                        ledger: Optional[RunLedger] = None) -> RunLedger:
    """
    Run claims on worker threads and record them in claim order

    Args:
        threads: Number of claims allowed to run at once
        settings: Size guards for every construction
        claims: Subset of CLAIMS to run (default: all)
        ledger: Ledger to fill (default: a new one)

    Returns:
        The filled ledger
    """
    settings = settings or get_settings()
    claims = CLAIMS if claims is None else claims
    ledger = ledger or RunLedger(uuid.uuid4().hex[:12])
    semaphore = asyncio.Semaphore(max(1, threads))

    async def run(claim: Claim) -> Tuple[Outcome, float]:
        async with semaphore:
            logger.info(f"Running claim {claim.name}")
            return await asyncio.to_thread(run_claim, claim, settings)

    results = await asyncio.gather(*(run(c) for c in claims))
    for claim, ((passed, detail), seconds) in zip(claims, results):
        ledger.add_claim(claim.name, claim.anchor, passed, seconds, detail)
    logger.info(ledger.get_summary_line())
    return ledger
