"""
G-Modules and Based Resolutions

This module provides coefficient modules (a presented abelian group with a
left G-action), the five based resolution families of Z by G-modules whose
basis is permuted by G up to sign, their boundaries and contracting
homotopies, orbit decomposition, and equivariant Hom into a coefficient
module.

Families, all with basis words over element indices:
- tensor: every word (the homogeneous bar resolution)
- normalized: words with no two equal neighbours
- exterior: strictly increasing words, sign = parity of the sorting permutation
- delta: weakly increasing words with a repeat, over F2
- tilde: exterior words followed by delta words (the tilde-exterior power)

Every family shares the boundary (x0..xn) -> sum (-1)^i (x0..^xi..xn),
pushed through the family's normalize map.
"""

import logging
from dataclasses import dataclass, field
from enum import Enum
from itertools import combinations, combinations_with_replacement, product
from math import comb
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from finite_groups import Group, Subgroup, sign_character
from integer_linalg import AbHom, IntMatrix, Lifter, PresentedAb, kernel
from settings import Settings, get_settings

logger = logging.getLogger(__name__)

Word = Tuple[int, ...]


class ModuleKind(Enum):
    TRIVIAL = "trivial"
    SIGN = "sign"
    GROUP_RING = "group_ring"
    EXPLICIT = "explicit"


@dataclass
class FixedBlock:
    """{m in M : h·m = chi(h)·m for h in a stabilizer, and 2m = 0 if required}."""

    group: PresentedAb
    incl: AbHom
    is_whole_module: bool
    _lifter: Optional[Lifter] = field(default=None, repr=False)

    def lift(self, values: IntMatrix) -> IntMatrix:
        """Coordinates in the block of module elements known to lie in it."""
        if self.is_whole_module:
            return values
        if self._lifter is None:
            self._lifter = Lifter(self.incl)
        return self._lifter.lift(values)


class GModule:
    """A presented abelian group with a left action of a finite group."""

    def __init__(self, group: Group, carrier: PresentedAb, action: Sequence[IntMatrix],
                 label: str = "M", check: bool = True):
        """
        Args:
            group: the acting group
            carrier: the underlying presented abelian group
            action: one carrier.gens x carrier.gens matrix per group element
            label: short description used in reports
            check: validate that the action is a homomorphism into Aut(carrier)

        Raises:
            ValueError: If the matrices do not define a left action
        """
        if len(action) != group.order:
            raise ValueError(f"Need {group.order} action matrices, got {len(action)}")
        self.group = group
        self.carrier = carrier
        self.label = label
        self.action = [AbHom(carrier, carrier, matrix, check=check) for matrix in action]
        self._blocks: Dict[Tuple, FixedBlock] = {}
        if check:
            self._validate()

    def _validate(self) -> None:
        if not self.action[0].equals(AbHom.identity(self.carrier)):
            raise ValueError(f"Identity of {self.group.label} does not act trivially on {self.label}")
        for g in range(self.group.order):
            for h in range(self.group.order):
                gh = self.group.table[g][h]
                if not self.action[g].compose(self.action[h]).equals(self.action[gh]):
                    raise ValueError(
                        f"Action on {self.label} is not multiplicative at "
                        f"({self.group.names[g]}, {self.group.names[h]})"
                    )

    @property
    def gens(self) -> int:
        return self.carrier.gens

    def matrix(self, g: int) -> IntMatrix:
        return self.action[g].matrix

    def fixed_block(self, elements: Sequence[int], character: Sequence[int],
                    killed_by_two: bool = False) -> FixedBlock:
        """
        Elements fixed by a stabilizer up to a sign character

        Args:
            elements: stabilizer elements (indices in self.group)
            character: sign of each stabilizer element
            killed_by_two: additionally require 2m = 0

        Returns:
            Cached FixedBlock with its inclusion into the carrier
        """
        key = (tuple(elements), tuple(character), killed_by_two)
        if key in self._blocks:
            return self._blocks[key]

        conditions = []
        n = self.gens
        for h, sign in zip(elements, character):
            if h == 0:
                continue
            conditions.append(self.matrix(h) - IntMatrix.identity(n).scaled(sign))
        if killed_by_two:
            conditions.append(IntMatrix.identity(n).scaled(2))

        if not conditions:
            block = FixedBlock(self.carrier, AbHom.identity(self.carrier), True)
        else:
            stacked = IntMatrix.vstack(conditions, cols=n)
            target = PresentedAb.direct_sum([self.carrier] * len(conditions))
            group, incl = kernel(AbHom(self.carrier, target, stacked, check=False))
            block = FixedBlock(group, incl, False)
        self._blocks[key] = block
        return block

    def __repr__(self) -> str:
        return f"GModule({self.label} over {self.group.label})"


# --- Coefficient module constructors ---

def trivial_module(group: Group, modulus: int = 0) -> GModule:
    """Z (modulus 0) or Z/modulus with trivial action."""
    if modulus < 0 or modulus == 1:
        raise ValueError(f"Trivial module modulus must be 0 or at least 2, got {modulus}")
    carrier = PresentedAb.from_orders([modulus])
    label = "Z" if modulus == 0 else ("F2" if modulus == 2 else f"Z/{modulus}")
    return GModule(group, carrier, [IntMatrix.identity(1)] * group.order, label=label, check=False)


def sign_module(group: Group, character: Optional[Sequence[int]] = None) -> GModule:
    """
    Z with g acting by a sign character

    Raises:
        ValueError: If no character is given and the group has none
    """
    if character is None:
        character = sign_character(group)
        if character is None:
            raise ValueError(f"{group.label} has no sign character (no subgroup of index 2)")
    if len(character) != group.order or any(s not in (1, -1) for s in character):
        raise ValueError("Sign character must give +1 or -1 for every element")
    matrices = [IntMatrix.from_rows([[s]]) for s in character]
    return GModule(group, PresentedAb.free(1), matrices, label="Zsign")


def group_ring_module(group: Group) -> GModule:
    """Z[G] with g·e_h = e_gh."""
    n = group.order
    matrices = []
    for g in range(n):
        rows = [[0] * n for _ in range(n)]
        for h in range(n):
            rows[group.table[g][h]][h] = 1
        matrices.append(IntMatrix.from_rows(rows, cols=n))
    return GModule(group, PresentedAb.free(n), matrices, label="ZG", check=False)


def coefficient_module(group: Group, kind: ModuleKind, modulus: int = 0,
                       carrier: Optional[PresentedAb] = None,
                       matrices: Optional[Sequence[IntMatrix]] = None,
                       label: str = "M") -> GModule:
    """
    Build a coefficient module

    Args:
        group: the acting group
        kind: trivial, sign, group ring or explicit
        modulus: for trivial modules, 0 for Z or k for Z/k
        carrier: explicit carrier presentation
        matrices: explicit action matrices, one per element
        label: label for explicit modules

    Returns:
        A validated GModule
    """
    if kind is ModuleKind.TRIVIAL:
        return trivial_module(group, modulus)
    if kind is ModuleKind.SIGN:
        return sign_module(group)
    if kind is ModuleKind.GROUP_RING:
        return group_ring_module(group)
    if carrier is None or matrices is None:
        raise ValueError("Explicit modules need a carrier and action matrices")
    return GModule(group, carrier, matrices, label=label)


def restrict(module: GModule, subgroup: Subgroup) -> GModule:
    """The module viewed over subgroup.as_group()."""
    if subgroup.parent is not module.group:
        raise ValueError("Subgroup does not belong to the module's group")
    matrices = [module.matrix(g) for g in subgroup.elements]
    return GModule(subgroup.as_group(), module.carrier, matrices,
                   label=f"{module.label}|{subgroup.order}", check=False)


def twist(module: GModule, character: Sequence[int]) -> GModule:
    """The module with h acting by character(h)·(h·m)."""
    if all(s == 1 for s in character):
        return module
    matrices = [module.matrix(g).scaled(s) for g, s in enumerate(character)]
    return GModule(module.group, module.carrier, matrices, label=f"{module.label}(sign)", check=False)


# --- Based resolution families ---

class Family(Enum):
    TENSOR = "tensor"
    NORMALIZED = "normalized"
    EXTERIOR = "exterior"
    TILDE = "tilde"
    DELTA = "delta"


def basis_size(family: Family, order: int, degree: int) -> int:
    if family is Family.TENSOR:
        return order ** degree
    if family is Family.NORMALIZED:
        return order * (order - 1) ** (degree - 1)
    if family is Family.EXTERIOR:
        return comb(order, degree)
    if family is Family.DELTA:
        return comb(order + degree - 1, degree) - comb(order, degree)
    return comb(order + degree - 1, degree)


def _sort_with_sign(word: Word) -> Tuple[Word, int]:
    inversions = sum(1 for i in range(len(word)) for j in range(i + 1, len(word)) if word[i] > word[j])
    return tuple(sorted(word)), -1 if inversions % 2 else 1


@dataclass(frozen=True)
class Orbit:
    representative: int
    stabilizer: Subgroup
    character: Tuple[int, ...]
    size: int

    @property
    def is_free(self) -> bool:
        return self.stabilizer.order == 1

    @property
    def character_label(self) -> str:
        return "sign" if any(s == -1 for s in self.character) else "trivial"


class SignedBasedGModule:
    """
    One degree of a based resolution: a free abelian group (or F2-space) on
    words of a fixed length, permuted by G up to sign.
    """

    def __init__(self, group: Group, family: Family, degree: int,
                 settings: Optional[Settings] = None):
        if degree < 1:
            raise ValueError(f"Resolution degrees start at 1, got {degree}")
        settings = settings or get_settings()
        size = basis_size(family, group.order, degree)
        settings.check_basis(f"{family.value} power {degree} of Z[{group.label}]", size)

        self.group = group
        self.family = family
        self.degree = degree
        self.basis: List[Word] = self._enumerate(group.order)
        self.index: Dict[Word, int] = {word: i for i, word in enumerate(self.basis)}
        if family is Family.DELTA:
            self.torsion = (2,) * len(self.basis)
        elif family is Family.TILDE:
            self.torsion = tuple(2 if len(set(w)) < len(w) else 0 for w in self.basis)
        else:
            self.torsion = (0,) * len(self.basis)
        self.carrier = PresentedAb.from_orders(self.torsion)
        self._orbits: Optional[List[Orbit]] = None
        self._transport: Optional[List[Tuple[int, int, int]]] = None
        logger.debug(f"{family.value} degree {degree} over {group.label}: {len(self.basis)} basis words")

    def _enumerate(self, order: int) -> List[Word]:
        n = self.degree
        elements = range(order)
        if self.family is Family.TENSOR:
            return list(product(elements, repeat=n))
        if self.family is Family.NORMALIZED:
            return [w for w in product(elements, repeat=n) if all(w[i] != w[i + 1] for i in range(n - 1))]
        if self.family is Family.EXTERIOR:
            return list(combinations(elements, n))
        repeated = [w for w in combinations_with_replacement(elements, n) if len(set(w)) < n]
        if self.family is Family.DELTA:
            return repeated
        return list(combinations(elements, n)) + repeated

    @property
    def rank(self) -> int:
        return len(self.basis)

    @property
    def characteristic(self) -> int:
        return 2 if self.basis and all(t == 2 for t in self.torsion) else 0

    def normalize(self, word: Word) -> Optional[Tuple[int, int]]:
        """
        Image of a tensor word in this family

        Returns:
            (basis index, sign), or None when the word maps to zero
        """
        family = self.family
        if family is Family.TENSOR:
            return self.index[word], 1
        if family is Family.NORMALIZED:
            if any(word[i] == word[i + 1] for i in range(len(word) - 1)):
                return None
            return self.index[word], 1
        repeated = len(set(word)) < len(word)
        if family is Family.EXTERIOR:
            if repeated:
                return None
            ordered, sign = _sort_with_sign(word)
            return self.index[ordered], sign
        if family is Family.DELTA:
            if not repeated:
                return None
            return self.index[tuple(sorted(word))], 1
        if repeated:
            return self.index[tuple(sorted(word))], 1
        ordered, sign = _sort_with_sign(word)
        return self.index[ordered], sign

    def act(self, g: int, i: int) -> Tuple[int, int]:
        """g applied to basis element i, as (basis index, sign)."""
        row = self.group.table[g]
        return self.normalize(tuple(row[x] for x in self.basis[i]))

    def _decompose(self) -> None:
        orbits: List[Orbit] = []
        transport: List[Optional[Tuple[int, int, int]]] = [None] * self.rank
        for rep in range(self.rank):
            if transport[rep] is not None:
                continue
            o = len(orbits)
            stabilizer, character, size = [], [], 0
            for g in range(self.group.order):
                j, sign = self.act(g, rep)
                if j == rep:
                    stabilizer.append(g)
                    character.append(1 if self.torsion[rep] == 2 else sign)
                if transport[j] is None:
                    transport[j] = (o, g, sign)
                    size += 1
            orbits.append(Orbit(rep, Subgroup(self.group, tuple(stabilizer)), tuple(character), size))
        self._orbits = orbits
        self._transport = transport

    @property
    def orbits(self) -> List[Orbit]:
        if self._orbits is None:
            self._decompose()
        return self._orbits

    def transport(self, i: int) -> Tuple[int, int, int]:
        """(orbit index, g, sign) with g·representative = sign·basis[i]."""
        if self._transport is None:
            self._decompose()
        return self._transport[i]

    def __repr__(self) -> str:
        return f"SignedBasedGModule({self.family.value}, degree={self.degree}, rank={self.rank})"


def tensor_power(group: Group, n: int, settings: Optional[Settings] = None) -> SignedBasedGModule:
    return SignedBasedGModule(group, Family.TENSOR, n, settings)


def normalized_power(group: Group, n: int, settings: Optional[Settings] = None) -> SignedBasedGModule:
    return SignedBasedGModule(group, Family.NORMALIZED, n, settings)


def exterior_power(group: Group, n: int, settings: Optional[Settings] = None) -> SignedBasedGModule:
    """Lambda^n Z[G]; the zero module once n exceeds |G|."""
    return SignedBasedGModule(group, Family.EXTERIOR, n, settings)


def delta_power(group: Group, n: int, settings: Optional[Settings] = None) -> SignedBasedGModule:
    return SignedBasedGModule(group, Family.DELTA, n, settings)


def tilde_exterior_power(group: Group, n: int, settings: Optional[Settings] = None) -> SignedBasedGModule:
    return SignedBasedGModule(group, Family.TILDE, n, settings)


def based_power(group: Group, family: Family, n: int, settings: Optional[Settings] = None) -> SignedBasedGModule:
    return SignedBasedGModule(group, family, n, settings)


def orbit_decomposition(based: SignedBasedGModule) -> List[Orbit]:
    return based.orbits


def _check_consecutive(source: SignedBasedGModule, target: SignedBasedGModule) -> None:
    if source.family is not target.family:
        raise ValueError(f"Family mismatch: {source.family.value} vs {target.family.value}")
    if source.group is not target.group:
        raise ValueError("Based modules are over different groups")
    if source.degree != target.degree + 1:
        raise ValueError(f"Degrees {source.degree} and {target.degree} are not consecutive")


def _reduce(combination: Dict[int, int], target: SignedBasedGModule) -> Dict[int, int]:
    out = {}
    for j, c in combination.items():
        if target.torsion[j] == 2:
            c %= 2
        if c:
            out[j] = c
    return out


def face_expansion(source: SignedBasedGModule, target: SignedBasedGModule, i: int) -> Dict[int, int]:
    """Boundary of basis element i of source, as {target index: coefficient}."""
    word = source.basis[i]
    out: Dict[int, int] = {}
    for k in range(len(word)):
        image = target.normalize(word[:k] + word[k + 1:])
        if image is not None:
            j, sign = image
            out[j] = out.get(j, 0) + (sign if k % 2 == 0 else -sign)
    return _reduce(out, target)


def _columns_to_hom(source: SignedBasedGModule, target: SignedBasedGModule,
                    column: Callable[[int], Dict[int, int]]) -> AbHom:
    rows = [[0] * source.rank for _ in range(target.rank)]
    for i in range(source.rank):
        for j, c in column(i).items():
            rows[j][i] = c
    return AbHom(source.carrier, target.carrier, IntMatrix.from_rows(rows, cols=source.rank), check=False)


def boundary(source: SignedBasedGModule, target: SignedBasedGModule) -> AbHom:
    """
    The boundary F_{n+1} -> F_n of one family

    Raises:
        ValueError: If the modules are not consecutive degrees of one family
    """
    _check_consecutive(source, target)
    return _columns_to_hom(source, target, lambda i: face_expansion(source, target, i))


def augmentation(based: SignedBasedGModule) -> AbHom:
    """F_1 -> Z sending every basis word to 1 (zero on the delta family)."""
    if based.degree != 1:
        raise ValueError("Augmentation is defined on degree 1 only")
    values = [0 if t == 2 else 1 for t in based.torsion]
    return AbHom(based.carrier, PresentedAb.free(1), IntMatrix.from_rows([values], cols=based.rank), check=False)


def augmentation_section(based: SignedBasedGModule) -> AbHom:
    """Z -> F_1, 1 -> (identity); zero on the delta family."""
    if based.degree != 1:
        raise ValueError("Augmentation section is defined on degree 1 only")
    rows = [[1 if (i == based.index.get((0,)) and based.torsion[i] == 0) else 0] for i in range(based.rank)]
    return AbHom(PresentedAb.free(1), based.carrier, IntMatrix.from_rows(rows, cols=1), check=False)


def homotopy_image(source: SignedBasedGModule, target: SignedBasedGModule, i: int) -> Dict[int, int]:
    """h(word) = identity prepended to word, normalized in target."""
    image = target.normalize((0,) + source.basis[i])
    if image is None:
        return {}
    j, sign = image
    return _reduce({j: sign}, target)


def contracting_homotopy(source: SignedBasedGModule, target: SignedBasedGModule) -> AbHom:
    """The (non-equivariant) contraction F_n -> F_{n+1}."""
    _check_consecutive(target, source)
    return _columns_to_hom(source, target, lambda i: homotopy_image(source, target, i))


# --- Equivariant Hom ---

class EquivariantHom:
    """
    Hom_G(F, M) presented as a direct sum over orbits of F's basis

    Coordinates of orbit o describe f(representative) inside the fixed block
    of o's stabilizer; f(g·rep) = sign·g·f(rep) recovers the rest.
    """

    def __init__(self, based: SignedBasedGModule, module: GModule):
        if based.group is not module.group:
            raise ValueError("Based module and coefficient module live over different groups")
        self.based = based
        self.module = module
        self.blocks: List[FixedBlock] = []
        self.offsets: List[int] = []
        offset = 0
        for orbit in based.orbits:
            block = module.fixed_block(orbit.stabilizer.elements, orbit.character,
                                       killed_by_two=based.torsion[orbit.representative] == 2)
            self.blocks.append(block)
            self.offsets.append(offset)
            offset += block.group.gens
        self.group = PresentedAb.direct_sum([b.group for b in self.blocks])
        self._transported: Dict[Tuple[int, int, int], IntMatrix] = {}

    @property
    def orbits(self) -> List[Orbit]:
        return self.based.orbits

    def _transported_block(self, i: int) -> Tuple[int, IntMatrix]:
        o, g, sign = self.based.transport(i)
        key = (o, g, sign)
        matrix = self._transported.get(key)
        if matrix is None:
            block = self.blocks[o]
            matrix = self.module.matrix(g) @ block.incl.matrix
            if sign == -1:
                matrix = -matrix
            self._transported[key] = matrix
        return o, matrix

    def values_of(self, combination: Dict[int, int]) -> List[List[int]]:
        """The M-valued linear form f -> f(sum c_i e_i), as a dense M.gens x H.gens array."""
        values = [[0] * self.group.gens for _ in range(self.module.gens)]
        for i, c in combination.items():
            o, matrix = self._transported_block(i)
            offset = self.offsets[o]
            for r, row in enumerate(matrix.entries):
                target = values[r]
                for t, v in enumerate(row):
                    if v:
                        target[offset + t] += c * v
        return values

    def evaluate(self, coordinates: Sequence[int], i: int) -> Tuple[int, ...]:
        """Value f(basis[i]) in carrier coordinates for f given in Hom coordinates."""
        values = self.values_of({i: 1})
        return tuple(sum(a * b for a, b in zip(row, coordinates)) for row in values)

    def from_representative_values(self, per_orbit: Sequence[IntMatrix]) -> IntMatrix:
        """Hom coordinates from the values at each orbit representative (one matrix per orbit)."""
        rows: List[Tuple[int, ...]] = []
        for block, values in zip(self.blocks, per_orbit):
            rows.extend(block.lift(values).entries)
        cols = per_orbit[0].cols if per_orbit else 0
        return IntMatrix(self.group.gens, cols, tuple(rows))

    def pullback(self, target: "EquivariantHom", image_of: Callable[[int], Dict[int, int]]) -> AbHom:
        """
        Precomposition with an equivariant map phi: target.based -> self.based

        Args:
            target: Hom_G(F', M) for the source F' of phi
            image_of: basis index of F' -> phi of that word in self.based

        Returns:
            phi^*: Hom_G(F, M) -> Hom_G(F', M)
        """
        per_orbit = []
        for orbit in target.orbits:
            values = self.values_of(image_of(orbit.representative))
            per_orbit.append(IntMatrix.from_rows(values, cols=self.group.gens))
        matrix = target.from_representative_values(per_orbit) if per_orbit \
            else IntMatrix.zeros(0, self.group.gens)
        return AbHom(self.group, target.group, matrix, check=False)

    def function_table(self) -> IntMatrix:
        """Hom coordinates -> the full table (f(e_0), f(e_1), ...) in M^basis."""
        rows = []
        for i in range(self.based.rank):
            rows.extend(self.values_of({i: 1}))
        return IntMatrix.from_rows(rows, cols=self.group.gens)


def equivariant_hom(based: SignedBasedGModule, module: GModule) -> EquivariantHom:
    return EquivariantHom(based, module)


def hom_differential(lower: EquivariantHom, upper: EquivariantHom) -> AbHom:
    """
    Hom_G(F_n, M) -> Hom_G(F_{n+1}, M), f -> f∘boundary

    Raises:
        ValueError: If the based modules are not consecutive in one family
    """
    _check_consecutive(upper.based, lower.based)
    return lower.pullback(upper, lambda i: face_expansion(upper.based, lower.based, i))
