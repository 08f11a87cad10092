"""
Finite Groups as Multiplication Tables

This module provides validated finite groups with the identity at index 0,
constructors for cyclic, dihedral, symmetric and product groups, element
orders, cyclic subgroups of prime order and sign characters.

Element index order is the total order used by every downstream basis.
"""

import logging
from dataclasses import dataclass
from enum import Enum
from functools import cached_property
from itertools import permutations
from typing import Dict, List, Optional, Sequence, Tuple

from sympy import isprime
from sympy.combinatorics import Permutation

logger = logging.getLogger(__name__)

MAX_SYMMETRIC_DEGREE = 5


class Group:
    """A finite group given by its multiplication table (table[g][h] = g·h)."""

    def __init__(self, table: Sequence[Sequence[int]], names: Optional[Sequence[str]] = None,
                 label: str = "G", check_associativity: bool = True):
        """
        Validate and store a multiplication table

        Args:
            table: n x n array of element indices, identity at index 0
            names: display strings for the elements
            label: short description used in reports
            check_associativity: run the O(n^3) associativity check

        Raises:
            ValueError: If the table is not a group table with identity 0
        """
        order = len(table)
        if order < 1:
            raise ValueError("A group needs at least one element")
        rows = tuple(tuple(int(x) for x in row) for row in table)
        for g, row in enumerate(rows):
            if len(row) != order:
                raise ValueError(f"Row {g} of the table has {len(row)} entries, expected {order}")
            for x in row:
                if not 0 <= x < order:
                    raise ValueError(f"Table entry {x} is outside 0..{order - 1}")
        for g in range(order):
            if rows[0][g] != g or rows[g][0] != g:
                raise ValueError("Index 0 is not a two-sided identity")

        inverses = []
        for g in range(order):
            candidates = [h for h in range(order) if rows[g][h] == 0]
            if len(candidates) != 1 or rows[candidates[0]][g] != 0:
                raise ValueError(f"Element {g} has no two-sided inverse")
            inverses.append(candidates[0])

        if check_associativity:
            for a in range(order):
                row_a = rows[a]
                for b in range(order):
                    ab = row_a[b]
                    row_ab = rows[ab]
                    row_b = rows[b]
                    for c in range(order):
                        if row_ab[c] != row_a[row_b[c]]:
                            raise ValueError(f"Table is not associative at ({a}, {b}, {c})")

        if names is None:
            names = ["e"] + [str(g) for g in range(1, order)]
        if len(names) != order:
            raise ValueError(f"Got {len(names)} element names for {order} elements")

        self.order = order
        self.table = rows
        self.names = tuple(names)
        self.inverses = tuple(inverses)
        self.label = label
        self.identity = 0

    def multiply(self, g: int, h: int) -> int:
        return self.table[g][h]

    def inverse(self, g: int) -> int:
        return self.inverses[g]

    @cached_property
    def element_orders(self) -> Tuple[int, ...]:
        orders = []
        for g in range(self.order):
            k, x = 1, g
            while x != 0:
                x = self.table[x][g]
                k += 1
            orders.append(k)
        return tuple(orders)

    def __repr__(self) -> str:
        return f"Group({self.label}, order={self.order})"


@dataclass(frozen=True)
class Subgroup:
    """A subgroup of a parent group, as a sorted tuple of element indices."""

    parent: Group
    elements: Tuple[int, ...]

    def __post_init__(self):
        elements = tuple(sorted(set(self.elements)))
        object.__setattr__(self, "elements", elements)
        members = set(elements)
        if 0 not in members:
            raise ValueError("Subgroup must contain the identity")
        for g in elements:
            if self.parent.inverses[g] not in members:
                raise ValueError(f"Subgroup is not closed under inverses at {g}")
            for h in elements:
                if self.parent.table[g][h] not in members:
                    raise ValueError(f"Subgroup is not closed under products at ({g}, {h})")

    @property
    def order(self) -> int:
        return len(self.elements)

    def as_group(self) -> Group:
        """Re-table the subgroup; element i of the result is elements[i]."""
        position = {g: i for i, g in enumerate(self.elements)}
        table = [[position[self.parent.table[g][h]] for h in self.elements] for g in self.elements]
        names = [self.parent.names[g] for g in self.elements]
        label = f"<{','.join(names)}> in {self.parent.label}"
        return Group(table, names, label=label, check_associativity=False)


def element_order(group: Group, g: int) -> int:
    """Smallest k >= 1 with g^k equal to the identity."""
    if not 0 <= g < group.order:
        raise ValueError(f"Element {g} is not in a group of order {group.order}")
    return group.element_orders[g]


def solutions_of_power_equation(group: Group, k: int) -> List[int]:
    """All x with x^k = identity, sorted; always contains 0."""
    if k < 1:
        raise ValueError(f"Exponent must be positive, got {k}")
    return [x for x in range(group.order) if k % group.element_orders[x] == 0]


def generated_subgroup(group: Group, generators: Sequence[int]) -> Subgroup:
    """Closure of a set of elements under multiplication."""
    members = {0}
    frontier = [0]
    generators = list(generators)
    while frontier:
        x = frontier.pop()
        for s in generators:
            y = group.table[x][s]
            if y not in members:
                members.add(y)
                frontier.append(y)
    return Subgroup(group, tuple(members))


def cyclic_subgroups_of_order(group: Group, ell: int) -> List[Subgroup]:
    """
    Every subgroup of prime order ell

    Args:
        group: the ambient group
        ell: a prime

    Returns:
        Duplicate-free list sorted by element tuples

    Raises:
        ValueError: If ell is not prime
    """
    if not isprime(ell):
        raise ValueError(f"Subgroup order must be prime, got {ell}")
    found: Dict[Tuple[int, ...], Subgroup] = {}
    for g in range(group.order):
        if group.element_orders[g] == ell:
            subgroup = generated_subgroup(group, [g])
            found.setdefault(subgroup.elements, subgroup)
    return [found[key] for key in sorted(found)]


def sign_character(group: Group) -> Optional[Tuple[int, ...]]:
    """
    A nontrivial homomorphism G -> {+1, -1}, chosen deterministically

    The kernel contains the subgroup generated by squares. Cosets of that
    subgroup form an F2-vector space; a basis is read off in index order and
    the kernel is spanned by all basis vectors except the first.

    Returns:
        Tuple of signs indexed by element, or None if G has no index-2 subgroup
    """
    squares = generated_subgroup(group, sorted({group.table[g][g] for g in range(group.order)}))
    if squares.order == group.order:
        return None

    basis = []
    span = squares
    while span.order < group.order:
        x = next(g for g in range(group.order) if g not in set(span.elements))
        basis.append(x)
        span = generated_subgroup(group, list(span.elements) + [x])

    kernel = set(generated_subgroup(group, list(squares.elements) + basis[1:]).elements)
    signs = tuple(1 if g in kernel else -1 for g in range(group.order))
    logger.debug(f"Sign character of {group.label}: kernel of order {len(kernel)}")
    return signs


# --- Constructors ---

def cyclic_group(n: int) -> Group:
    """C_n with element k = g^k."""
    if n < 1:
        raise ValueError(f"Cyclic group order must be positive, got {n}")
    names = ["e"] + ["g" if k == 1 else f"g^{k}" for k in range(1, n)]
    table = [[(a + b) % n for b in range(n)] for a in range(n)]
    return Group(table, names, label=f"C{n}", check_associativity=False)


def dihedral_group(n: int) -> Group:
    """
    Dihedral group of order 2n

    Elements are indexed [e, r, ..., r^(n-1), s, rs, ..., r^(n-1)s], so that
    index a + b*n is r^a s^b.
    """
    if n < 1:
        raise ValueError(f"Dihedral index must be positive, got {n}")

    def split(x: int) -> Tuple[int, int]:
        return x % n, x // n

    table = []
    for x in range(2 * n):
        xa, xb = split(x)
        row = []
        for y in range(2 * n):
            ya, yb = split(y)
            a = (xa + (ya if xb == 0 else -ya)) % n
            row.append(a + ((xb + yb) % 2) * n)
        table.append(row)

    def name(x: int) -> str:
        a, b = split(x)
        rotation = "" if a == 0 else ("r" if a == 1 else f"r^{a}")
        text = rotation + ("s" if b else "")
        return text or "e"

    return Group(table, [name(x) for x in range(2 * n)], label=f"D{n}", check_associativity=False)


def symmetric_group(n: int) -> Group:
    """
    S_n on {0..n-1}, elements in lexicographic order of their images

    The product is composition of functions: (g·h)(x) = g(h(x)).

    Raises:
        ValueError: If n exceeds the supported degree
    """
    if n < 1:
        raise ValueError(f"Symmetric degree must be positive, got {n}")
    if n > MAX_SYMMETRIC_DEGREE:
        raise ValueError(f"Symmetric groups are supported up to S{MAX_SYMMETRIC_DEGREE}, got S{n}")

    perms = [Permutation(list(images)) for images in permutations(range(n))]
    position = {tuple(p.array_form): i for i, p in enumerate(perms)}
    # sympy multiplies left to right: (p*q)(x) = q(p(x))
    table = [[position[tuple((h * g).array_form)] for h in perms] for g in perms]
    names = ["e" if p.is_Identity else "".join(str(tuple(c)) for c in p.cyclic_form) for p in perms]
    logger.debug(f"Built S{n} with {len(perms)} elements")
    return Group(table, names, label=f"S{n}", check_associativity=False)


def direct_product(first: Group, second: Group) -> Group:
    """G x H with element (a, b) at index a*|H| + b."""
    m = second.order
    table = [[first.table[x // m][y // m] * m + second.table[x % m][y % m]
              for y in range(first.order * m)] for x in range(first.order * m)]
    names = [f"({first.names[x // m]},{second.names[x % m]})" for x in range(first.order * m)]
    return Group(table, names, label=f"{first.label}x{second.label}", check_associativity=False)


def group_from_table(table: Sequence[Sequence[int]], names: Optional[Sequence[str]] = None,
                     label: str = "table") -> Group:
    """
    Build a group from an explicit table, moving the identity to index 0

    Raises:
        ValueError: If the table is not a group table
    """
    order = len(table)
    identities = [e for e in range(order)
                  if all(table[e][g] == g and table[g][e] == g for g in range(order))]
    if not identities:
        raise ValueError("Table has no two-sided identity")
    e = identities[0]
    if e != 0:
        perm = [e] + [g for g in range(order) if g != e]
        position = {g: i for i, g in enumerate(perm)}
        table = [[position[table[perm[i]][perm[j]]] for j in range(order)] for i in range(order)]
        if names is not None:
            names = [names[g] for g in perm]
        logger.info(f"Reindexed explicit table so that element {e} is the identity")
    return Group(table, names, label=label)


class GroupKind(Enum):
    CYCLIC = "cyclic"
    DIHEDRAL = "dihedral"
    SYMMETRIC = "symmetric"
    PRODUCT = "product"
    TABLE = "table"


def make_group(kind: GroupKind, n: int = 0, factors: Sequence[Group] = (),
               table: Optional[Sequence[Sequence[int]]] = None, names: Optional[Sequence[str]] = None,
               label: str = "table") -> Group:
    """
    Build a group of the given kind

    Args:
        kind: Which constructor to use
        n: Order (cyclic), half order (dihedral) or degree (symmetric)
        factors: Exactly two groups for a product
        table: Multiplication table for an explicit group
        names, label: Element names and label for an explicit group

    Raises:
        ValueError: If the arguments do not describe a group of that kind
    """
    if kind is GroupKind.CYCLIC:
        return cyclic_group(n)
    if kind is GroupKind.DIHEDRAL:
        return dihedral_group(n)
    if kind is GroupKind.SYMMETRIC:
        return symmetric_group(n)
    if kind is GroupKind.PRODUCT:
        if len(factors) != 2:
            raise ValueError(f"A product needs two factors, got {len(factors)}")
        return direct_product(factors[0], factors[1])
    if table is None:
        raise ValueError("An explicit group needs a table")
    return group_from_table(table, names, label)
