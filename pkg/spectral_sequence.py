"""
E1 Page of the Exterior Comparison Spectral Sequence

This module fills the first page E1^{p,q} = Ext^q_{Z[G]}(Lambda^{p+1} Z[G], M)
by splitting Lambda^{p+1} into orbits: a free orbit contributes Hom in row 0
and nothing above it, an orbit with stabilizer S and sign character chi
contributes H^q(S, M twisted by chi).

Stabilizers of prime order use the 2-periodic resolution of a cyclic group;
other stabilizers use the normalized homogeneous complex of the subgroup.
"""

import asyncio
import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

from sympy import isprime

from cochain_complexes import (CochainComplex, ComplexLabel, exterior_K_lambda,
                               normalized_NK)
from cohomology_tables import cohomology
from finite_groups import Group, cyclic_subgroups_of_order, solutions_of_power_equation
from gmodules import (EquivariantHom, GModule, Orbit, SignedBasedGModule, exterior_power,
                      hom_differential, restrict, twist)
from integer_linalg import (AbHom, IntMatrix, PresentedAb, format_invariants, homology_at,
                            invariant_factors, kernel)
from settings import Settings, get_settings

logger = logging.getLogger(__name__)


def cyclic_generator(group: Group) -> int:
    """Smallest element of full order, so that the group is cyclic on it."""
    for g in range(group.order):
        if group.element_orders[g] == group.order:
            return g
    raise ValueError(f"{group.label} is not cyclic")


def periodic_cyclic_cohomology(group: Group, module: GModule, q: int) -> PresentedAb:
    """
    H^q of a cyclic group from its 2-periodic resolution

    q = 0 gives ker(g-1); odd q gives ker(N)/im(g-1); even q >= 2 gives
    ker(g-1)/im(N), with N = 1 + g + ... + g^(n-1).

    Raises:
        ValueError: If the group is not cyclic or q < 0
    """
    if q < 0:
        raise ValueError(f"Cohomological degree must be nonnegative, got {q}")
    g = cyclic_generator(group)
    carrier = module.carrier
    n = module.gens
    identity = IntMatrix.identity(n)
    difference = AbHom(carrier, carrier, module.matrix(g) - identity, check=False)

    norm_matrix = IntMatrix.zeros(n, n)
    x = 0
    for _ in range(group.order):
        norm_matrix = norm_matrix + module.matrix(x)
        x = group.table[x][g]
    norm = AbHom(carrier, carrier, norm_matrix, check=False)

    if q == 0:
        return kernel(difference)[0]
    if q % 2:
        return homology_at(difference, norm)
    return homology_at(norm, difference)


def subgroup_cohomology(group: Group, module: GModule, q: int,
                        settings: Optional[Settings] = None) -> PresentedAb:
    """H^q(group, module) from the normalized homogeneous complex."""
    complex_ = normalized_NK(group, module, q, settings)
    return cohomology(complex_).subquotients[q].group


@dataclass
class E1Entry:
    p: int
    q: int
    group: PresentedAb
    orbits: List[Orbit]
    free_orbits: int

    @property
    def invariants(self) -> Tuple[int, List[int]]:
        free_rank, torsion = invariant_factors(self.group)
        return free_rank, torsion

    def __str__(self) -> str:
        return format_invariants(*self.invariants)

    def to_dict(self) -> Dict:
        free_rank, torsion = self.invariants
        return {
            "p": self.p,
            "q": self.q,
            "free_rank": free_rank,
            "torsion": torsion,
            "free_orbits": self.free_orbits,
            "orbits": [
                {
                    "stab_order": o.stabilizer.order,
                    "stabilizer": list(o.stabilizer.elements),
                    "character": o.character_label,
                }
                for o in self.orbits if not o.is_free
            ],
        }


@dataclass
class E1Page:
    group: str
    module: str
    pmax: int
    qmax: int
    entries: Dict[Tuple[int, int], E1Entry]
    row0: Optional[CochainComplex] = field(default=None, repr=False)
    row0_is_exterior: bool = False

    def entry(self, p: int, q: int) -> E1Entry:
        return self.entries[(p, q)]

    def to_dict(self) -> Dict:
        return {
            "group": self.group,
            "module": self.module,
            "pmax": self.pmax,
            "qmax": self.qmax,
            "entries": [self.entries[key].to_dict() for key in sorted(self.entries)],
            "row0_is_exterior": self.row0_is_exterior,
        }


class E1PageBuilder:
    """
    Computes E1 cells for one (G, M), sharing exterior powers and stabilizer
    cohomology between cells.
    """

    def __init__(self, group: Group, module: GModule, settings: Optional[Settings] = None,
                 logger: Optional[logging.Logger] = None):
        if module.group is not group:
            raise ValueError("Module is over a different group")
        self.group = group
        self.module = module
        self.settings = settings or get_settings()
        self.logger = logger or logging.getLogger(__name__)
        self._powers: Dict[int, SignedBasedGModule] = {}
        self._homs: Dict[int, EquivariantHom] = {}
        self._stabilizer_cohomology: Dict[Tuple, PresentedAb] = {}

    def exterior(self, n: int) -> SignedBasedGModule:
        if n not in self._powers:
            based = exterior_power(self.group, n, self.settings)
            based.orbits  # decompose once, before any worker threads read it
            self._powers[n] = based
        return self._powers[n]

    def row0_hom(self, p: int) -> EquivariantHom:
        if p not in self._homs:
            self._homs[p] = EquivariantHom(self.exterior(p + 1), self.module)
        return self._homs[p]

    def twisted_stabilizer_cohomology(self, orbit: Orbit, q: int) -> PresentedAb:
        """H^q(Stab, M_chi) for one orbit."""
        key = (orbit.stabilizer.elements, orbit.character, q)
        if key not in self._stabilizer_cohomology:
            twisted = twist(restrict(self.module, orbit.stabilizer), orbit.character)
            stabilizer = twisted.group
            if isprime(stabilizer.order):
                value = periodic_cyclic_cohomology(stabilizer, twisted, q)
            else:
                value = subgroup_cohomology(stabilizer, twisted, q, self.settings)
            self._stabilizer_cohomology[key] = value
        return self._stabilizer_cohomology[key]

    def entry(self, p: int, q: int) -> E1Entry:
        """
        E1^{p,q} with its orbit provenance

        Raises:
            SizeGuardError: If Lambda^{p+1} exceeds the basis limit
        """
        if p < 0 or q < 0:
            raise ValueError(f"Page coordinates must be nonnegative, got ({p}, {q})")
        based = self.exterior(p + 1)
        orbits = based.orbits
        free = sum(1 for o in orbits if o.is_free)
        if q == 0:
            value = self.row0_hom(p).group
        else:
            parts = [self.twisted_stabilizer_cohomology(o, q) for o in orbits if not o.is_free]
            value = PresentedAb.direct_sum(parts)
        self.logger.info(f"E1[{p},{q}] over {self.group.label}: {format_invariants(*invariant_factors(value))}")
        return E1Entry(p, q, value, orbits, free)

    def row0_complex(self, pmax: int) -> CochainComplex:
        """(E1^{p,0}, d1) for p = 0..pmax, from the page's own Hom groups."""
        homs = [self.row0_hom(p) for p in range(pmax + 2)]
        differentials = [hom_differential(homs[p], homs[p + 1]) for p in range(pmax + 1)]
        return CochainComplex(ComplexLabel.K_LAMBDA, self.group, self.module,
                              [h.group for h in homs], differentials, homs=homs)

    def row0_matches_exterior(self, row0: CochainComplex) -> bool:
        """Row 0 agrees term by term and map by map with an independently built K_lambda."""
        reference = exterior_K_lambda(self.group, self.module, row0.max_degree, self.settings)
        same_terms = all(a == b for a, b in zip(row0.terms, reference.terms))
        same_maps = all(a.matrix == b.matrix for a, b in zip(row0.differentials, reference.differentials))
        return same_terms and same_maps

    def _cells(self, pmax: int, qmax: int) -> List[Tuple[int, int]]:
        return [(p, q) for p in range(pmax + 1) for q in range(qmax + 1)]

    def _assemble(self, pmax: int, qmax: int, entries: Dict[Tuple[int, int], E1Entry]) -> E1Page:
        row0 = self.row0_complex(pmax)
        return E1Page(self.group.label, self.module.label, pmax, qmax, entries,
                      row0=row0, row0_is_exterior=self.row0_matches_exterior(row0))

    def build(self, pmax: int, qmax: int) -> E1Page:
        entries = {(p, q): self.entry(p, q) for p, q in self._cells(pmax, qmax)}
        return self._assemble(pmax, qmax, entries)

    async def build_async(self, pmax: int, qmax: int, threads: int = 1) -> E1Page:
        """Fill cells on worker threads; the page is assembled in (p, q) order."""
        for p in range(pmax + 1):
            self.exterior(p + 1)
        semaphore = asyncio.Semaphore(max(1, threads))

        async def run(p: int, q: int) -> E1Entry:
            async with semaphore:
                return await asyncio.to_thread(self.entry, p, q)

        cells = self._cells(pmax, qmax)
        results = await asyncio.gather(*(run(p, q) for p, q in cells))
        return self._assemble(pmax, qmax, dict(zip(cells, results)))


def e1_entry(group: Group, module: GModule, p: int, q: int,
             settings: Optional[Settings] = None) -> E1Entry:
    return E1PageBuilder(group, module, settings).entry(p, q)


def e1_page(group: Group, module: GModule, pmax: int, qmax: int,
            settings: Optional[Settings] = None) -> E1Page:
    return E1PageBuilder(group, module, settings).build(pmax, qmax)


def row0_complex(group: Group, module: GModule, pmax: int,
                 settings: Optional[Settings] = None) -> Tuple[CochainComplex, bool]:
    """The row-0 complex and whether it coincides with the exterior complex."""
    builder = E1PageBuilder(group, module, settings)
    row0 = builder.row0_complex(pmax)
    return row0, builder.row0_matches_exterior(row0)


@dataclass
class PrimeColumnCheck:
    ell: int
    q: int
    entry: str
    product: str
    subgroup_count: int
    passed: bool

    def to_dict(self) -> Dict:
        return {
            "ell": self.ell,
            "q": self.q,
            "entry": self.entry,
            "product": self.product,
            "subgroups": self.subgroup_count,
            "passed": self.passed,
        }


def prime_column_crosscheck(group: Group, module: GModule, ell: int, q: int,
                            settings: Optional[Settings] = None) -> PrimeColumnCheck:
    """
    Compare E1^{ell-1,q} with the product over subgroups C of order ell of
    H^{q+1}(C, M) for ell = 2, or H^q(C, M) for odd ell

    The product side uses the normalized homogeneous complex of each subgroup,
    with no twist, independently of the page.

    Raises:
        ValueError: If ell is not prime or q < 1
    """
    if not isprime(ell):
        raise ValueError(f"Column index must come from a prime, got {ell}")
    if q < 1:
        raise ValueError(f"Crosscheck needs q >= 1, got {q}")
    entry = e1_entry(group, module, ell - 1, q, settings)
    degree = q + 1 if ell == 2 else q
    subgroups = cyclic_subgroups_of_order(group, ell)
    restricted = [restrict(module, c) for c in subgroups]
    parts = [subgroup_cohomology(r.group, r, degree, settings) for r in restricted]
    product = PresentedAb.direct_sum(parts)
    passed = invariant_factors(entry.group) == invariant_factors(product)
    if not passed:
        logger.warning(f"Prime column {ell - 1}, row {q} over {group.label}: {entry} vs {format_invariants(*invariant_factors(product))}")
    return PrimeColumnCheck(ell, q, str(entry), format_invariants(*invariant_factors(product)),
                            len(subgroups), passed)


@dataclass
class VanishingCell:
    p: int
    q: int
    expected_zero: bool
    reason: str
    is_zero: bool
    annihilated: bool = True

    @property
    def consistent(self) -> bool:
        """Forced zeros are zero and rows q > 0 are killed by |G|."""
        return (self.is_zero or not self.expected_zero) and self.annihilated


def vanishing_reason(group: Group, p: int, q: int) -> str:
    """Why E1^{p,q} must vanish, or the empty string when nothing forces it."""
    if p + 1 > group.order:
        return "truncation"
    if q > 0 and p == 0:
        return "column zero"
    if q > 0 and solutions_of_power_equation(group, p + 1) == [0]:
        return "no solutions of x^(p+1)=1"
    return ""


def vanishing_report(group: Group, module: GModule, pmax: int, qmax: int,
                     settings: Optional[Settings] = None) -> List[VanishingCell]:
    """Every (p, q) with the reason it must vanish, if any, and whether it does."""
    builder = E1PageBuilder(group, module, settings)
    cells = []
    for p in range(pmax + 1):
        for q in range(qmax + 1):
            reason = vanishing_reason(group, p, q)
            value = builder.entry(p, q)
            annihilated = q == 0 or value.group.exponent_divides(group.order)
            if not annihilated:
                logger.warning(f"E1[{p},{q}] = {value} is not killed by |G| = {group.order}")
            cells.append(VanishingCell(p, q, bool(reason), reason, value.group.is_trivial(), annihilated))
    return cells
