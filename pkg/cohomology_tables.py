"""
Cohomology Tables and Comparison Maps

This module computes cohomology tables of built complexes and the maps
induced on cohomology by the comparison chain maps:

- alpha: symmetric cohomology -> classical (KS -> K)
- beta: exterior cohomology -> classical (K_lambda -> K)
- gamma: exterior cohomology -> symmetric (section K_lambda -> KS)
- delta projection: symmetric -> delta cohomology (KS -> Delta)

Isomorphism and monomorphism flags come from the kernel and cokernel of
each induced map.
"""

import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

from cochain_complexes import (ChainMap, CochainComplex, ComplexLabel, antisymmetric_KS,
                               delta_hom_complex, exterior_K_lambda, homogeneous_K,
                               quotient_inclusion, splitting_maps)
from finite_groups import Group
from gmodules import GModule
from integer_linalg import (AbHom, PresentedAb, Subquotient, cokernel, format_invariants,
                            homology_subquotient, induced_map, invariant_factors, kernel, stack_homs)
from settings import Settings, get_settings

logger = logging.getLogger(__name__)


@dataclass
class DegreeEntry:
    n: int
    free_rank: int
    torsion: List[int]

    def __str__(self) -> str:
        return format_invariants(self.free_rank, self.torsion)

    def to_dict(self) -> Dict:
        return {"n": self.n, "free_rank": self.free_rank, "torsion": list(self.torsion)}


@dataclass
class CohomologyTable:
    """Invariant factors of one theory in degrees 0..N."""

    theory: str
    group: str
    module: str
    degrees: List[DegreeEntry]
    subquotients: List[Subquotient] = field(default_factory=list, repr=False, compare=False)

    def entry(self, n: int) -> DegreeEntry:
        return self.degrees[n]

    def invariants(self, n: int) -> Tuple[int, List[int]]:
        entry = self.degrees[n]
        return entry.free_rank, entry.torsion

    def to_dict(self) -> Dict:
        return {
            "theory": self.theory,
            "group": self.group,
            "module": self.module,
            "degrees": [d.to_dict() for d in self.degrees],
        }


def cohomology(complex_: CochainComplex, theory: Optional[str] = None) -> CohomologyTable:
    """
    Cohomology of a complex in degrees 0..N

    Degree 0 uses the zero map into the first term, so H^0 = ker d^0.
    """
    subquotients = []
    degrees = []
    for n in range(complex_.max_degree + 1):
        sq = homology_subquotient(complex_.incoming(n), complex_.differentials[n])
        subquotients.append(sq)
        free_rank, torsion = invariant_factors(sq.group)
        degrees.append(DegreeEntry(n, free_rank, torsion))
        logger.debug(f"{complex_.label.value} degree {n}: {format_invariants(free_rank, torsion)}")
    return CohomologyTable(theory or complex_.label.value, complex_.group.label, complex_.module.label,
                           degrees, subquotients)


@dataclass
class MapDegree:
    n: int
    induced: AbHom
    kernel: Tuple[int, List[int]]
    cokernel: Tuple[int, List[int]]

    @property
    def is_mono(self) -> bool:
        return self.kernel == (0, [])

    @property
    def is_iso(self) -> bool:
        return self.is_mono and self.cokernel == (0, [])

    def to_dict(self) -> Dict:
        return {
            "n": self.n,
            "kernel": {"free_rank": self.kernel[0], "torsion": self.kernel[1]},
            "cokernel": {"free_rank": self.cokernel[0], "torsion": self.cokernel[1]},
            "is_mono": self.is_mono,
            "is_iso": self.is_iso,
        }


@dataclass
class MapReport:
    label: str
    degrees: List[MapDegree]

    def to_dict(self) -> Dict:
        return {"map": self.label, "degrees": [d.to_dict() for d in self.degrees]}


def induced_report(label: str, chain_map: ChainMap, source: CohomologyTable,
                   target: CohomologyTable) -> MapReport:
    """Kernel/cokernel diagnostics of the maps a chain map induces on cohomology."""
    degrees = []
    for n in range(min(len(source.subquotients), len(target.subquotients))):
        f = induced_map(source.subquotients[n], target.subquotients[n], chain_map.components[n])
        degrees.append(MapDegree(n, f, invariant_factors(kernel(f)[0]), invariant_factors(cokernel(f)[0])))
    return MapReport(label, degrees)


@dataclass
class ComparisonResult:
    """alpha, beta, gamma and the delta projection, plus the check beta = alpha∘gamma."""

    group: str
    module: str
    tables: Dict[str, CohomologyTable]
    maps: Dict[str, MapReport]
    beta_is_alpha_gamma: List[bool]

    def to_dict(self) -> Dict:
        return {
            "group": self.group,
            "module": self.module,
            "tables": {name: table.to_dict() for name, table in self.tables.items()},
            "maps": [report.to_dict() for report in self.maps.values()],
            "beta_is_alpha_gamma": self.beta_is_alpha_gamma,
        }


class ComparisonBuilder:
    """Builds the four complexes once and derives every comparison from them."""

    def __init__(self, group: Group, module: GModule, max_degree: int,
                 settings: Optional[Settings] = None, logger: Optional[logging.Logger] = None):
        self.group = group
        self.module = module
        self.max_degree = max_degree
        self.settings = settings or get_settings()
        self.logger = logger or logging.getLogger(__name__)
        self._complexes: Dict[ComplexLabel, CochainComplex] = {}
        self._tables: Dict[ComplexLabel, CohomologyTable] = {}

    def complex(self, label: ComplexLabel) -> CochainComplex:
        if label not in self._complexes:
            builders = {
                ComplexLabel.K: homogeneous_K,
                ComplexLabel.KS: antisymmetric_KS,
                ComplexLabel.K_LAMBDA: exterior_K_lambda,
                ComplexLabel.DELTA: delta_hom_complex,
            }
            self._complexes[label] = builders[label](self.group, self.module, self.max_degree, self.settings)
        return self._complexes[label]

    def table(self, label: ComplexLabel) -> CohomologyTable:
        if label not in self._tables:
            self._tables[label] = cohomology(self.complex(label))
        return self._tables[label]

    def compare(self) -> ComparisonResult:
        """
        Compute alpha, beta, gamma and the delta projection in degrees 0..N

        Raises:
            SizeGuardError: If the homogeneous complex exceeds the basis limit
        """
        k = self.complex(ComplexLabel.K)
        ks = self.complex(ComplexLabel.KS)
        k_lambda = self.complex(ComplexLabel.K_LAMBDA)
        delta = self.complex(ComplexLabel.DELTA)
        h, hs = self.table(ComplexLabel.K), self.table(ComplexLabel.KS)
        h_lambda, h_delta = self.table(ComplexLabel.K_LAMBDA), self.table(ComplexLabel.DELTA)

        _, to_delta, section = splitting_maps(ks, k_lambda, delta)
        alpha = induced_report("alpha", quotient_inclusion(ks, k), hs, h)
        beta = induced_report("beta", quotient_inclusion(k_lambda, k), h_lambda, h)
        gamma = induced_report("gamma", section, h_lambda, hs)
        projection = induced_report("delta_projection", to_delta, hs, h_delta)

        factorizations = [b.induced.equals(a.induced.compose(g.induced))
                          for a, b, g in zip(alpha.degrees, beta.degrees, gamma.degrees)]
        if not all(factorizations):
            self.logger.warning(f"beta differs from alpha∘gamma for {self.group.label}, {self.module.label}")

        return ComparisonResult(
            self.group.label, self.module.label,
            {"classical": h, "symmetric": hs, "exterior": h_lambda, "delta": h_delta},
            {"alpha": alpha, "beta": beta, "gamma": gamma, "delta_projection": projection},
            factorizations,
        )


def comparison_maps(group: Group, module: GModule, max_degree: int,
                    settings: Optional[Settings] = None) -> ComparisonResult:
    return ComparisonBuilder(group, module, max_degree, settings).compare()


@dataclass
class DirectSumDegree:
    n: int
    symmetric: str
    exterior: str
    delta: str
    invariants_match: bool
    split_is_iso: bool

    @property
    def passed(self) -> bool:
        return self.invariants_match and self.split_is_iso

    def to_dict(self) -> Dict:
        return {
            "n": self.n,
            "symmetric": self.symmetric,
            "exterior": self.exterior,
            "delta": self.delta,
            "invariants_match": self.invariants_match,
            "split_is_iso": self.split_is_iso,
        }


def direct_sum_check(group: Group, module: GModule, max_degree: int,
                     settings: Optional[Settings] = None) -> List[DirectSumDegree]:
    """
    Symmetric cohomology against exterior ⊕ delta, degree by degree

    Both the invariant factors and the map HS -> H_lambda ⊕ H_delta induced by
    the two projections are checked.
    """
    builder = ComparisonBuilder(group, module, max_degree, settings)
    ks = builder.complex(ComplexLabel.KS)
    k_lambda = builder.complex(ComplexLabel.K_LAMBDA)
    delta = builder.complex(ComplexLabel.DELTA)
    hs, h_lambda = builder.table(ComplexLabel.KS), builder.table(ComplexLabel.K_LAMBDA)
    h_delta = builder.table(ComplexLabel.DELTA)
    to_lambda, to_delta, _ = splitting_maps(ks, k_lambda, delta)

    results = []
    for n in range(max_degree + 1):
        lam = induced_map(hs.subquotients[n], h_lambda.subquotients[n], to_lambda.components[n])
        dlt = induced_map(hs.subquotients[n], h_delta.subquotients[n], to_delta.components[n])
        split = stack_homs([lam, dlt])
        combined = invariant_factors(PresentedAb.direct_sum([h_lambda.subquotients[n].group,
                                                             h_delta.subquotients[n].group]))
        results.append(DirectSumDegree(
            n, str(hs.entry(n)), str(h_lambda.entry(n)), str(h_delta.entry(n)),
            invariants_match=hs.invariants(n) == combined,
            split_is_iso=split.is_isomorphism(),
        ))
    return results
