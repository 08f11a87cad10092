"""
Cochain Complexes

This module builds the cochain complexes of a finite group with coefficients
in a G-module, on two routes:

- resolution route: Hom_G(F_{*+1}, M) for a based resolution family
  (K over tensor words, NK over normalized words, KS over the tilde-exterior
  family, K_lambda over exterior words, the delta complex over delta words)
- explicit route: inhomogeneous cochains C^n = M^(G^n) and the subcomplexes
  NC, CS and C_lambda cut out of them by linear conditions

plus the chain maps between them: the psi isomorphism, the inclusions
induced by family quotients, and the splitting of KS into K_lambda and the
delta complex.

A complex built up to degree N carries terms 0..N+1 and differentials
d^0..d^N, so cohomology is defined in degrees 0..N.
"""

import logging
from dataclasses import dataclass
from enum import Enum
from itertools import product
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from finite_groups import Group
from gmodules import (EquivariantHom, Family, GModule, SignedBasedGModule,
                      based_power, hom_differential)
from integer_linalg import AbHom, IntMatrix, Lifter, PresentedAb, kernel
from settings import Settings, get_settings

logger = logging.getLogger(__name__)


class ComplexLabel(Enum):
    C = "C"
    NC = "NC"
    K = "K"
    NK = "NK"
    CS = "CS"
    KS = "KS"
    K_LAMBDA = "K_lambda"
    C_LAMBDA = "C_lambda"
    DELTA = "Delta"


RESOLUTION_FAMILIES = {
    ComplexLabel.K: Family.TENSOR,
    ComplexLabel.NK: Family.NORMALIZED,
    ComplexLabel.KS: Family.TILDE,
    ComplexLabel.K_LAMBDA: Family.EXTERIOR,
    ComplexLabel.DELTA: Family.DELTA,
}

PSI_PAIRS = {
    ComplexLabel.K: ComplexLabel.C,
    ComplexLabel.NK: ComplexLabel.NC,
    ComplexLabel.KS: ComplexLabel.CS,
    ComplexLabel.K_LAMBDA: ComplexLabel.C_LAMBDA,
}


@dataclass
class CochainComplex:
    """
    Terms in degrees 0..N+1 with differentials d^n: term n -> term n+1 for n <= N.

    Resolution-route complexes keep their EquivariantHom per degree; explicit
    subcomplexes keep their inclusion into the inhomogeneous cochains.
    """

    label: ComplexLabel
    group: Group
    module: GModule
    terms: List[PresentedAb]
    differentials: List[AbHom]
    homs: Optional[List[EquivariantHom]] = None
    inclusions: Optional[List[AbHom]] = None

    @property
    def max_degree(self) -> int:
        return len(self.differentials) - 1

    def incoming(self, n: int) -> AbHom:
        """d^{n-1}, or the zero map into degree 0."""
        if n == 0:
            return AbHom.zero(PresentedAb.zero(), self.terms[0])
        return self.differentials[n - 1]

    def squares_to_zero(self) -> bool:
        return all(self.differentials[n + 1].compose(self.differentials[n]).is_zero()
                   for n in range(len(self.differentials) - 1))

    def describe(self) -> str:
        sizes = ", ".join(str(t.gens) for t in self.terms)
        return f"{self.label.value}({self.group.label}, {self.module.label}) generators [{sizes}]"


@dataclass
class ChainMap:
    """Degreewise maps between two complexes of the same length."""

    source: CochainComplex
    target: CochainComplex
    components: List[AbHom]
    label: str = ""

    def commutes(self) -> bool:
        """Every square f^{n+1}∘d^n = d'^n∘f^n."""
        top = min(self.source.max_degree, self.target.max_degree)
        for n in range(top + 1):
            left = self.components[n + 1].compose(self.source.differentials[n])
            right = self.target.differentials[n].compose(self.components[n])
            if not left.equals(right):
                logger.warning(f"{self.label}: square at degree {n} does not commute")
                return False
        return True

    def compose(self, inner: "ChainMap") -> "ChainMap":
        """self ∘ inner."""
        components = [f.compose(g) for f, g in zip(self.components, inner.components)]
        return ChainMap(inner.source, self.target, components, label=f"{self.label}∘{inner.label}")


# --- Resolution route ---

def resolution_complex(group: Group, module: GModule, label: ComplexLabel, max_degree: int,
                       settings: Optional[Settings] = None) -> CochainComplex:
    """
    Hom_G(F_{*+1}, M) for the family behind label, in degrees 0..max_degree

    Raises:
        SizeGuardError: If some F_{n+1} exceeds the basis limit
    """
    if label not in RESOLUTION_FAMILIES:
        raise ValueError(f"{label.value} is not built on the resolution route")
    if module.group is not group:
        raise ValueError("Module is over a different group")
    family = RESOLUTION_FAMILIES[label]
    settings = settings or get_settings()

    homs = [EquivariantHom(based_power(group, family, n + 1, settings), module)
            for n in range(max_degree + 2)]
    differentials = [hom_differential(homs[n], homs[n + 1]) for n in range(max_degree + 1)]
    complex_ = CochainComplex(label, group, module, [h.group for h in homs], differentials, homs=homs)
    logger.info(f"Built {complex_.describe()}")
    return complex_


def homogeneous_K(group: Group, module: GModule, max_degree: int, settings: Optional[Settings] = None):
    return resolution_complex(group, module, ComplexLabel.K, max_degree, settings)


def normalized_NK(group: Group, module: GModule, max_degree: int, settings: Optional[Settings] = None):
    return resolution_complex(group, module, ComplexLabel.NK, max_degree, settings)


def antisymmetric_KS(group: Group, module: GModule, max_degree: int, settings: Optional[Settings] = None):
    return resolution_complex(group, module, ComplexLabel.KS, max_degree, settings)


def exterior_K_lambda(group: Group, module: GModule, max_degree: int, settings: Optional[Settings] = None):
    return resolution_complex(group, module, ComplexLabel.K_LAMBDA, max_degree, settings)


def delta_hom_complex(group: Group, module: GModule, max_degree: int, settings: Optional[Settings] = None):
    return resolution_complex(group, module, ComplexLabel.DELTA, max_degree, settings)


def family_pullback(coarse: CochainComplex, fine: CochainComplex,
                    image_of: Callable[[SignedBasedGModule, SignedBasedGModule, int], Dict[int, int]],
                    label: str) -> ChainMap:
    """Chain map Hom(F_coarse) -> Hom(F_fine) induced by an equivariant map F_fine -> F_coarse."""
    if coarse.homs is None or fine.homs is None:
        raise ValueError("Both complexes must come from the resolution route")
    if coarse.module is not fine.module:
        raise ValueError("Complexes have different coefficient modules")
    components = []
    for lower, upper in zip(coarse.homs, fine.homs):
        components.append(lower.pullback(upper, lambda i, lo=lower, up=upper: image_of(lo.based, up.based, i)))
    return ChainMap(coarse, fine, components, label=label)


def _normalized_image(coarse: SignedBasedGModule, fine: SignedBasedGModule, i: int) -> Dict[int, int]:
    image = coarse.normalize(fine.basis[i])
    if image is None:
        return {}
    j, sign = image
    if coarse.torsion[j] == 2:
        return {j: 1}
    return {j: sign}


def _word_inclusion(coarse: SignedBasedGModule, fine: SignedBasedGModule, i: int) -> Dict[int, int]:
    return {coarse.index[fine.basis[i]]: 1}


def quotient_inclusion(coarse: CochainComplex, fine: CochainComplex) -> ChainMap:
    """
    Inclusion induced by the quotient of families F_fine -> F_coarse

    Covers K_lambda -> K, KS -> K, NK -> K, K_lambda -> KS (the section)
    and Delta -> KS.
    """
    return family_pullback(coarse, fine, _normalized_image,
                           label=f"{coarse.label.value}->{fine.label.value}")


def splitting_maps(ks: CochainComplex, k_lambda: CochainComplex,
                   delta: CochainComplex) -> Tuple[ChainMap, ChainMap, ChainMap]:
    """
    Split KS into its exterior and delta parts

    Returns:
        (KS -> K_lambda, KS -> Delta, section K_lambda -> KS)
    """
    if ks.label is not ComplexLabel.KS or k_lambda.label is not ComplexLabel.K_LAMBDA \
            or delta.label is not ComplexLabel.DELTA:
        raise ValueError("Splitting needs the KS, K_lambda and Delta complexes")
    to_lambda = family_pullback(ks, k_lambda, _word_inclusion, label="KS->K_lambda")
    to_delta = family_pullback(ks, delta, _word_inclusion, label="KS->Delta")
    section = quotient_inclusion(k_lambda, ks)
    return to_lambda, to_delta, section


# --- Explicit route ---

def _tuples(group: Group, n: int) -> List[Tuple[int, ...]]:
    return list(product(range(group.order), repeat=n))


def _tuple_index(word: Sequence[int], order: int) -> int:
    index = 0
    for g in word:
        index = index * order + g
    return index


def _cochain_group(group: Group, module: GModule, n: int, settings: Settings) -> PresentedAb:
    count = group.order ** n
    settings.check_cochain_coordinates(f"inhomogeneous cochains C^{n}({group.label}, {module.label})",
                                       count * module.gens)
    return PresentedAb.direct_sum([module.carrier] * count)


def _classical_differential(group: Group, module: GModule, n: int,
                            source: PresentedAb, target: PresentedAb) -> AbHom:
    """(dφ)(g1..g_{n+1}) = g1·φ(g2..) + Σ(-1)^i φ(..g_i g_{i+1}..) + (-1)^{n+1} φ(g1..gn)."""
    m = module.gens
    order = group.order
    rows = [[0] * source.gens for _ in range(target.gens)]

    def add_block(row_block: int, col_block: int, matrix_rows: Sequence[Sequence[int]], coeff: int) -> None:
        for r in range(m):
            row = rows[row_block * m + r]
            for c in range(m):
                v = matrix_rows[r][c]
                if v:
                    row[col_block * m + c] += coeff * v

    identity_rows = IntMatrix.identity(m).entries
    for word in _tuples(group, n + 1):
        row_block = _tuple_index(word, order)
        add_block(row_block, _tuple_index(word[1:], order), module.matrix(word[0]).entries, 1)
        for i in range(1, n + 1):
            merged = word[:i - 1] + (group.table[word[i - 1]][word[i]],) + word[i + 1:]
            add_block(row_block, _tuple_index(merged, order), identity_rows, -1 if i % 2 else 1)
        add_block(row_block, _tuple_index(word[:n], order), identity_rows, -1 if (n + 1) % 2 else 1)
    return AbHom(source, target, IntMatrix.from_rows(rows, cols=source.gens), check=False)


def classical_C(group: Group, module: GModule, max_degree: int,
                settings: Optional[Settings] = None) -> CochainComplex:
    """
    Inhomogeneous cochains C^n = M^(G^n)

    Raises:
        SizeGuardError: If |G|^(N+1)·gens(M) exceeds the cochain coordinate limit
    """
    settings = settings or get_settings()
    terms = [_cochain_group(group, module, n, settings) for n in range(max_degree + 2)]
    differentials = [_classical_differential(group, module, n, terms[n], terms[n + 1])
                     for n in range(max_degree + 1)]
    complex_ = CochainComplex(ComplexLabel.C, group, module, terms, differentials)
    logger.info(f"Built {complex_.describe()}")
    return complex_


def _degenerate_selection(group: Group, module: GModule, n: int, ambient: PresentedAb) -> Optional[IntMatrix]:
    """Rows reading φ at every tuple containing the identity."""
    m = module.gens
    rows = []
    for word in _tuples(group, n):
        if 0 in word:
            block = _tuple_index(word, group.order)
            for r in range(m):
                row = [0] * ambient.gens
                row[block * m + r] = 1
                rows.append(row)
    return IntMatrix.from_rows(rows, cols=ambient.gens) if rows else None


def swap_matrix(group: Group, module: GModule, n: int, i: int, ambient: PresentedAb) -> IntMatrix:
    """
    The adjacent transposition τ_i (1 <= i <= n) acting on C^n

    With x = (1, g1, g1g2, ...) and y = x with entries i-1 and i exchanged,
    (τ_i φ)(g) = -y0·φ(h) where h_k = y_{k-1}^{-1} y_k.
    """
    m = module.gens
    order = group.order
    table, inverses = group.table, group.inverses
    rows = [[0] * ambient.gens for _ in range(ambient.gens)]
    for word in _tuples(group, n):
        x = [0]
        for g in word:
            x.append(table[x[-1]][g])
        y = list(x)
        y[i - 1], y[i] = y[i], y[i - 1]
        h = tuple(table[inverses[y[k - 1]]][y[k]] for k in range(1, n + 1))
        row_block = _tuple_index(word, order)
        col_block = _tuple_index(h, order)
        action = module.matrix(y[0]).entries
        for r in range(m):
            for c in range(m):
                if action[r][c]:
                    rows[row_block * m + r][col_block * m + c] -= action[r][c]
    return IntMatrix.from_rows(rows, cols=ambient.gens)


def _symmetry_conditions(group: Group, module: GModule, n: int, ambient: PresentedAb) -> List[IntMatrix]:
    identity = IntMatrix.identity(ambient.gens)
    return [swap_matrix(group, module, n, i, ambient) - identity for i in range(1, n + 1)]


def _restricted_complex(ambient: CochainComplex, label: ComplexLabel,
                        conditions: Callable[[int], List[IntMatrix]]) -> CochainComplex:
    """The subcomplex of C cut out by linear conditions in each degree."""
    terms, inclusions = [], []
    for n, term in enumerate(ambient.terms):
        rows = conditions(n)
        if not rows:
            terms.append(term)
            inclusions.append(AbHom.identity(term))
            continue
        stacked = IntMatrix.vstack(rows, cols=term.gens)
        target = PresentedAb.direct_sum([ambient.module.carrier] * (stacked.rows // ambient.module.gens))
        sub, incl = kernel(AbHom(term, target, stacked, check=False))
        terms.append(sub)
        inclusions.append(incl)

    differentials = []
    for n, d in enumerate(ambient.differentials):
        values = d.matrix @ inclusions[n].matrix
        lifted = Lifter(inclusions[n + 1]).lift(values)
        differentials.append(AbHom(terms[n], terms[n + 1], lifted, check=False))
    complex_ = CochainComplex(label, ambient.group, ambient.module, terms, differentials,
                              inclusions=inclusions)
    logger.info(f"Built {complex_.describe()}")
    return complex_


def normalized_NC(group: Group, module: GModule, max_degree: int,
                  settings: Optional[Settings] = None, ambient: Optional[CochainComplex] = None) -> CochainComplex:
    """Cochains vanishing whenever some argument is the identity."""
    ambient = ambient or classical_C(group, module, max_degree, settings)

    def conditions(n: int) -> List[IntMatrix]:
        selection = _degenerate_selection(group, module, n, ambient.terms[n])
        return [selection] if selection is not None else []

    return _restricted_complex(ambient, ComplexLabel.NC, conditions)


def symmetric_CS(group: Group, module: GModule, max_degree: int,
                 settings: Optional[Settings] = None, ambient: Optional[CochainComplex] = None) -> CochainComplex:
    """Cochains invariant under every adjacent transposition τ_1..τ_n."""
    ambient = ambient or classical_C(group, module, max_degree, settings)
    return _restricted_complex(ambient, ComplexLabel.CS,
                               lambda n: _symmetry_conditions(group, module, n, ambient.terms[n]))


def normalized_symmetric_C_lambda(group: Group, module: GModule, max_degree: int,
                                  settings: Optional[Settings] = None,
                                  ambient: Optional[CochainComplex] = None) -> CochainComplex:
    """CS ∩ NC inside the inhomogeneous cochains."""
    ambient = ambient or classical_C(group, module, max_degree, settings)

    def conditions(n: int) -> List[IntMatrix]:
        rows = _symmetry_conditions(group, module, n, ambient.terms[n])
        selection = _degenerate_selection(group, module, n, ambient.terms[n])
        if selection is not None:
            rows.append(selection)
        return rows

    return _restricted_complex(ambient, ComplexLabel.C_LAMBDA, conditions)


# --- psi ---

def psi_matrix(hom: EquivariantHom, n: int) -> IntMatrix:
    """ψ(f)(g1..gn) = f(1, g1, g1g2, ..., g1...gn) into C^n coordinates."""
    group = hom.based.group
    table = group.table
    rows: List[Sequence[int]] = []
    zero_rows = [[0] * hom.group.gens for _ in range(hom.module.gens)]
    for word in _tuples(group, n):
        x = [0]
        for g in word:
            x.append(table[x[-1]][g])
        image = hom.based.normalize(tuple(x))
        if image is None:
            rows.extend(zero_rows)
            continue
        j, sign = image
        rows.extend(hom.values_of({j: 1 if hom.based.torsion[j] == 2 else sign}))
    return IntMatrix.from_rows(rows, cols=hom.group.gens)


def psi_inverse_matrix(hom: EquivariantHom, n: int, cochains: PresentedAb) -> IntMatrix:
    """
    C^n -> K^n, f(x0..xn) = x0·φ(x0^-1 x1, ..., x_{n-1}^-1 x_n)

    Only defined on the tensor family, whose orbit representatives are the
    words starting with the identity.
    """
    based = hom.based
    if based.family is not Family.TENSOR:
        raise ValueError("Inverse of psi is defined on the homogeneous complex only")
    group = based.group
    m = hom.module.gens
    per_orbit = []
    for orbit in hom.orbits:
        x = based.basis[orbit.representative]
        word = tuple(group.table[group.inverses[x[k - 1]]][x[k]] for k in range(1, n + 1))
        block = _tuple_index(word, group.order)
        rows = [[0] * cochains.gens for _ in range(m)]
        for r in range(m):
            rows[r][block * m + r] = 1
        per_orbit.append(IntMatrix.from_rows(rows, cols=cochains.gens))
    return hom.from_representative_values(per_orbit)


def psi_chain_map(k_side: CochainComplex, c_side: CochainComplex) -> ChainMap:
    """
    ψ from a resolution-route complex to its explicit partner

    Raises:
        ValueError: If the pair is not one of K/C, NK/NC, KS/CS, K_lambda/C_lambda,
            or ψ leaves the explicit subcomplex
    """
    if PSI_PAIRS.get(k_side.label) is not c_side.label:
        raise ValueError(f"psi does not connect {k_side.label.value} and {c_side.label.value}")
    if k_side.module is not c_side.module:
        raise ValueError("Complexes have different coefficient modules")
    components = []
    for n, hom in enumerate(k_side.homs[:len(c_side.terms)]):
        matrix = psi_matrix(hom, n)
        if c_side.inclusions is not None:
            matrix = Lifter(c_side.inclusions[n]).lift(matrix)
        components.append(AbHom(hom.group, c_side.terms[n], matrix, check=False))
    return ChainMap(k_side, c_side, components, label=f"psi:{k_side.label.value}->{c_side.label.value}")


def explicit_inclusion(sub: CochainComplex, ambient: CochainComplex) -> ChainMap:
    """Inclusion of an explicit subcomplex into C."""
    if sub.inclusions is None:
        raise ValueError(f"{sub.label.value} is not an explicit subcomplex")
    components = [AbHom(incl.source, term, incl.matrix, check=False)
                  for incl, term in zip(sub.inclusions, ambient.terms)]
    return ChainMap(sub, ambient, components, label=f"{sub.label.value}->C")


# --- Theory dispatch ---

THEORIES = ("classical", "normalized", "symmetric", "exterior", "delta", "ks")

_RESOLUTION_ROUTE = {
    "classical": ComplexLabel.K,
    "normalized": ComplexLabel.NK,
    "symmetric": ComplexLabel.KS,
    "ks": ComplexLabel.KS,
    "exterior": ComplexLabel.K_LAMBDA,
    "delta": ComplexLabel.DELTA,
}

_COCHAIN_ROUTE = {
    "classical": classical_C,
    "normalized": normalized_NC,
    "symmetric": symmetric_CS,
    "exterior": normalized_symmetric_C_lambda,
}


def build_complex(theory: str, group: Group, module: GModule, max_degree: int,
                  route: str = "resolution", settings: Optional[Settings] = None) -> CochainComplex:
    """
    The complex computing a named theory

    Args:
        theory: classical, normalized, symmetric, exterior, delta or ks
        route: "resolution" (Hom over a based family) or "cochain" (explicit cochains)

    Raises:
        ValueError: If the theory or route is unknown, or has no cochain route
    """
    if theory not in THEORIES:
        raise ValueError(f"Unknown theory {theory!r}; expected one of {', '.join(THEORIES)}")
    if route == "resolution":
        return resolution_complex(group, module, _RESOLUTION_ROUTE[theory], max_degree, settings)
    if route == "cochain":
        if theory not in _COCHAIN_ROUTE:
            raise ValueError(f"Theory {theory!r} is only available on the resolution route")
        return _COCHAIN_ROUTE[theory](group, module, max_degree, settings)
    raise ValueError(f"Unknown route {route!r}; expected resolution or cochain")
