"""
Exact Integer Linear Algebra

This module provides integer matrices, finitely presented abelian groups
(generators modulo the column span of a relation matrix), homomorphisms
between them, and the Smith normal form engine behind kernels, images,
cokernels and the homology of composable pairs.

All arithmetic uses Python integers, so nothing overflows.
"""

import logging
from dataclasses import dataclass, InitVar
from functools import cached_property
from math import gcd
from typing import Dict, List, Optional, Sequence, Tuple

logger = logging.getLogger(__name__)

SparseRow = Dict[int, int]


@dataclass(frozen=True)
class IntMatrix:
    """A dense integer matrix stored as a tuple of row tuples."""

    rows: int
    cols: int
    entries: Tuple[Tuple[int, ...], ...]

    def __post_init__(self):
        if self.rows < 0 or self.cols < 0:
            raise ValueError(f"Matrix dimensions must be nonnegative, got {self.rows}x{self.cols}")
        if len(self.entries) != self.rows or any(len(row) != self.cols for row in self.entries):
            raise ValueError(f"Matrix entries do not match the declared shape {self.rows}x{self.cols}")

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "IntMatrix":
        return cls(rows, cols, tuple((0,) * cols for _ in range(rows)))

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls(n, n, tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n)))

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], cols: Optional[int] = None) -> "IntMatrix":
        rows = [tuple(int(x) for x in row) for row in rows]
        if cols is None:
            if not rows:
                raise ValueError("Column count is required for a matrix without rows")
            cols = len(rows[0])
        return cls(len(rows), cols, tuple(rows))

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence[int]], rows: int) -> "IntMatrix":
        columns = [tuple(int(x) for x in column) for column in columns]
        for column in columns:
            if len(column) != rows:
                raise ValueError(f"Column of length {len(column)} in a matrix with {rows} rows")
        return cls(rows, len(columns), tuple(tuple(column[i] for column in columns) for i in range(rows)))

    @classmethod
    def from_sparse_rows(cls, rows: Sequence[SparseRow], cols: int) -> "IntMatrix":
        dense = []
        for row in rows:
            values = [0] * cols
            for j, value in row.items():
                values[j] = value
            dense.append(tuple(values))
        return cls(len(dense), cols, tuple(dense))

    @classmethod
    def diagonal(cls, values: Sequence[int], rows: int, cols: int) -> "IntMatrix":
        entries = [[0] * cols for _ in range(rows)]
        for i, value in enumerate(values):
            entries[i][i] = value
        return cls(rows, cols, tuple(tuple(row) for row in entries))

    @staticmethod
    def hstack(matrices: Sequence["IntMatrix"], rows: Optional[int] = None) -> "IntMatrix":
        if not matrices:
            if rows is None:
                raise ValueError("Row count is required to stack zero matrices")
            return IntMatrix.zeros(rows, 0)
        rows = matrices[0].rows
        if any(m.rows != rows for m in matrices):
            raise ValueError("Cannot place matrices with different row counts side by side")
        return IntMatrix(rows, sum(m.cols for m in matrices),
                         tuple(sum((m.entries[i] for m in matrices), ()) for i in range(rows)))

    @staticmethod
    def vstack(matrices: Sequence["IntMatrix"], cols: Optional[int] = None) -> "IntMatrix":
        if not matrices:
            if cols is None:
                raise ValueError("Column count is required to stack zero matrices")
            return IntMatrix.zeros(0, cols)
        cols = matrices[0].cols
        if any(m.cols != cols for m in matrices):
            raise ValueError("Cannot stack matrices with different column counts")
        return IntMatrix(sum(m.rows for m in matrices), cols, sum((m.entries for m in matrices), ()))

    @staticmethod
    def block_diagonal(matrices: Sequence["IntMatrix"]) -> "IntMatrix":
        rows = sum(m.rows for m in matrices)
        cols = sum(m.cols for m in matrices)
        entries = []
        offset = 0
        for m in matrices:
            for row in m.entries:
                entries.append((0,) * offset + row + (0,) * (cols - offset - m.cols))
            offset += m.cols
        return IntMatrix(rows, cols, tuple(entries))

    def column(self, j: int) -> Tuple[int, ...]:
        return tuple(row[j] for row in self.entries)

    def columns(self) -> List[Tuple[int, ...]]:
        return [self.column(j) for j in range(self.cols)]

    def transpose(self) -> "IntMatrix":
        return IntMatrix(self.cols, self.rows, tuple(self.columns()))

    def select_rows(self, indices: Sequence[int]) -> "IntMatrix":
        return IntMatrix(len(indices), self.cols, tuple(self.entries[i] for i in indices))

    def sparse_rows(self) -> List[SparseRow]:
        return [{j: v for j, v in enumerate(row) if v} for row in self.entries]

    def is_zero(self) -> bool:
        return all(v == 0 for row in self.entries for v in row)

    def scaled(self, k: int) -> "IntMatrix":
        return IntMatrix(self.rows, self.cols, tuple(tuple(k * v for v in row) for row in self.entries))

    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        if self.cols != other.rows:
            raise ValueError(f"Cannot multiply {self.rows}x{self.cols} by {other.rows}x{other.cols}")
        other_rows = other.entries
        result = []
        for row in self.entries:
            acc = [0] * other.cols
            for k, a in enumerate(row):
                if a:
                    for j, b in enumerate(other_rows[k]):
                        if b:
                            acc[j] += a * b
            result.append(tuple(acc))
        return IntMatrix(self.rows, other.cols, tuple(result))

    def __add__(self, other: "IntMatrix") -> "IntMatrix":
        self._check_same_shape(other)
        return IntMatrix(self.rows, self.cols, tuple(
            tuple(a + b for a, b in zip(r1, r2)) for r1, r2 in zip(self.entries, other.entries)))

    def __sub__(self, other: "IntMatrix") -> "IntMatrix":
        self._check_same_shape(other)
        return IntMatrix(self.rows, self.cols, tuple(
            tuple(a - b for a, b in zip(r1, r2)) for r1, r2 in zip(self.entries, other.entries)))

    def __neg__(self) -> "IntMatrix":
        return self.scaled(-1)

    def _check_same_shape(self, other: "IntMatrix") -> None:
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise ValueError(f"Shape mismatch: {self.rows}x{self.cols} vs {other.rows}x{other.cols}")

    def to_lists(self) -> List[List[int]]:
        return [list(row) for row in self.entries]


# --- Smith normal form engine ---

def _axpy(target: SparseRow, source: SparseRow, q: int) -> None:
    """target -= q * source, keeping target sparse."""
    for k, v in source.items():
        nv = target.get(k, 0) - q * v
        if nv:
            target[k] = nv
        else:
            target.pop(k, None)


def _swap_keys(row: SparseRow, a: int, b: int) -> None:
    va = row.pop(a, 0)
    vb = row.pop(b, 0)
    if vb:
        row[a] = vb
    if va:
        row[b] = va


def _extended_gcd(a: int, b: int) -> Tuple[int, int, int]:
    """Return (g, x, y) with a*x + b*y = g = gcd(a, b) >= 0."""
    old_r, r = a, b
    old_x, x = 1, 0
    old_y, y = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_x, x = x, old_x - q * x
        old_y, y = y, old_y - q * y
    if old_r < 0:
        old_r, old_x, old_y = -old_r, -old_x, -old_y
    return old_r, old_x, old_y


class SmithForm:
    """
    Smith normal form U·A·V = D of an integer matrix, with transforms

    Pivoting takes the smallest nonzero absolute value in the remaining
    block, clears its row and column completely, and repeats; the diagonal
    is then repaired into a divisibility chain with 2x2 gcd/lcm moves.

    Attributes:
        diagonal: the nonzero invariant factors d1 | d2 | ... (positive)
        rank: number of nonzero invariant factors
    """

    def __init__(self, matrix: IntMatrix, track: bool = True):
        self.nrows = matrix.rows
        self.ncols = matrix.cols
        self.track = track
        m, n = self.nrows, self.ncols

        if m * n > 40000:
            logger.info(f"Smith normal form of a {m}x{n} matrix")

        D = matrix.sparse_rows()
        U = [{i: 1} for i in range(m)] if track else None
        # Rows of Uinv_t are the columns of U^-1; rows of Vt are the columns of V.
        Uinv_t = [{i: 1} for i in range(m)] if track else None
        Vt = [{j: 1} for j in range(n)] if track else None

        t = 0
        while t < min(m, n):
            best = None
            for i in range(t, m):
                for j, v in D[i].items():
                    a = abs(v)
                    if best is None or a < best[0]:
                        best = (a, i, j)
                        if a == 1:
                            break
                if best is not None and best[0] == 1:
                    break
            if best is None:
                break
            _, pi, pj = best
            self._swap_rows(D, U, Uinv_t, t, pi)
            self._swap_cols(D, Vt, t, pj, t, m)

            while True:
                p = D[t][t]
                clean = True
                pivot_row = D[t]
                for i in range(t + 1, m):
                    v = D[i].get(t)
                    if v:
                        q = v // p
                        _axpy(D[i], pivot_row, q)
                        if track:
                            _axpy(U[i], U[t], q)
                            _axpy(Uinv_t[t], Uinv_t[i], -q)
                        if D[i].get(t):
                            clean = False
                column_rows = [i for i in range(t, m) if D[i].get(t)]
                for j in [j for j in D[t] if j > t]:
                    q = D[t][j] // p
                    for i in column_rows:
                        nv = D[i].get(j, 0) - q * D[i][t]
                        if nv:
                            D[i][j] = nv
                        else:
                            D[i].pop(j, None)
                    if track:
                        _axpy(Vt[j], Vt[t], q)
                    if D[t].get(j):
                        clean = False
                if clean:
                    break
                # bring the smallest remainder of row t / column t into the pivot
                best = None
                for i in range(t + 1, m):
                    v = D[i].get(t)
                    if v and (best is None or abs(v) < best[0]):
                        best = (abs(v), "row", i)
                for j, v in D[t].items():
                    if j > t and (best is None or abs(v) < best[0]):
                        best = (abs(v), "col", j)
                if best[1] == "row":
                    self._swap_rows(D, U, Uinv_t, t, best[2])
                else:
                    self._swap_cols(D, Vt, t, best[2], t, m)
            t += 1

        rank = t
        diag = [D[i][i] for i in range(rank)]
        for i in range(rank):
            if diag[i] < 0:
                diag[i] = -diag[i]
                if track:
                    U[i] = {k: -v for k, v in U[i].items()}
                    Uinv_t[i] = {k: -v for k, v in Uinv_t[i].items()}

        for i in range(rank):
            for j in range(i + 1, rank):
                a, b = diag[i], diag[j]
                if b % a == 0:
                    continue
                g, x, y = _extended_gcd(a, b)
                ag, bg = a // g, b // g
                if track:
                    ui, uj = U[i], U[j]
                    U[i] = _combine(ui, x, uj, y)
                    U[j] = _combine(ui, -bg, uj, ag)
                    ci, cj = Uinv_t[i], Uinv_t[j]
                    Uinv_t[i] = _combine(ci, ag, cj, bg)
                    Uinv_t[j] = _combine(ci, -y, cj, x)
                    vi, vj = Vt[i], Vt[j]
                    Vt[i] = _combine(vi, 1, vj, 1)
                    Vt[j] = _combine(vi, -y * bg, vj, x * ag)
                diag[i], diag[j] = g, a * bg

        self.rank = rank
        self.diagonal = diag
        self._U = U
        self._Uinv_t = Uinv_t
        self._Vt = Vt

    @staticmethod
    def _swap_rows(D, U, Uinv_t, a: int, b: int) -> None:
        if a == b:
            return
        D[a], D[b] = D[b], D[a]
        if U is not None:
            U[a], U[b] = U[b], U[a]
            Uinv_t[a], Uinv_t[b] = Uinv_t[b], Uinv_t[a]

    @staticmethod
    def _swap_cols(D, Vt, a: int, b: int, first_row: int, m: int) -> None:
        if a == b:
            return
        for i in range(first_row, m):
            _swap_keys(D[i], a, b)
        if Vt is not None:
            Vt[a], Vt[b] = Vt[b], Vt[a]

    def _require_tracking(self) -> None:
        if not self.track:
            raise ValueError("This Smith form was computed without transforms")

    def u_row(self, i: int) -> SparseRow:
        self._require_tracking()
        return self._U[i]

    def uinv_column(self, i: int) -> SparseRow:
        self._require_tracking()
        return self._Uinv_t[i]

    def u_matrix(self) -> IntMatrix:
        self._require_tracking()
        return IntMatrix.from_sparse_rows(self._U, self.nrows)

    def v_matrix(self) -> IntMatrix:
        self._require_tracking()
        return IntMatrix.from_sparse_rows(self._Vt, self.ncols).transpose()

    def d_matrix(self) -> IntMatrix:
        return IntMatrix.diagonal(self.diagonal, self.nrows, self.ncols)

    def kernel_columns(self) -> List[SparseRow]:
        """Columns of V spanning the integer kernel of the matrix."""
        self._require_tracking()
        return [self._Vt[j] for j in range(self.rank, self.ncols)]

    def solve(self, rhs: IntMatrix) -> Optional[IntMatrix]:
        """
        Solve A·Z = rhs over the integers

        Returns:
            One integer solution Z, or None if some column has none
        """
        self._require_tracking()
        if rhs.rows != self.nrows:
            raise ValueError(f"Right-hand side has {rhs.rows} rows, expected {self.nrows}")
        solution_columns = []
        for column in rhs.columns():
            nz = {k: v for k, v in enumerate(column) if v}
            w = {}
            for i in range(self.nrows):
                value = sum(c * nz[k] for k, c in self._U[i].items() if k in nz)
                if i < self.rank:
                    if value % self.diagonal[i]:
                        return None
                    if value:
                        w[i] = value // self.diagonal[i]
                elif value:
                    return None
            z = [0] * self.ncols
            for i, wi in w.items():
                for k, c in self._Vt[i].items():
                    z[k] += c * wi
            solution_columns.append(z)
        return IntMatrix.from_columns(solution_columns, self.ncols)


def _combine(a: SparseRow, x: int, b: SparseRow, y: int) -> SparseRow:
    """Return x*a + y*b as a sparse row."""
    out: SparseRow = {}
    if x:
        for k, v in a.items():
            out[k] = x * v
    if y:
        for k, v in b.items():
            nv = out.get(k, 0) + y * v
            if nv:
                out[k] = nv
            else:
                out.pop(k, None)
    return out


def smith_normal_form(matrix: IntMatrix) -> Tuple[IntMatrix, IntMatrix, IntMatrix]:
    """
    Compute the Smith normal form of an integer matrix

    Args:
        matrix: any integer matrix

    Returns:
        (U, D, V) with U and V unimodular and U·A·V = D diagonal,
        d1 | d2 | ... >= 0
    """
    form = SmithForm(matrix)
    return form.u_matrix(), form.d_matrix(), form.v_matrix()


# --- Presented abelian groups ---

@dataclass(frozen=True)
class PresentedAb:
    """The abelian group Z^gens / column-span(rels)."""

    gens: int
    rels: IntMatrix

    def __post_init__(self):
        if self.rels.rows != self.gens:
            raise ValueError(f"Relation matrix has {self.rels.rows} rows for {self.gens} generators")

    @classmethod
    def free(cls, rank: int) -> "PresentedAb":
        return cls(rank, IntMatrix.zeros(rank, 0))

    @classmethod
    def zero(cls) -> "PresentedAb":
        return cls.free(0)

    @classmethod
    def from_orders(cls, orders: Sequence[int]) -> "PresentedAb":
        """Direct sum of cyclic groups Z/k (k = 0 gives a copy of Z)."""
        relation_columns = []
        for i, k in enumerate(orders):
            if k < 0:
                raise ValueError(f"Cyclic order must be nonnegative, got {k}")
            if k:
                column = [0] * len(orders)
                column[i] = k
                relation_columns.append(column)
        return cls(len(orders), IntMatrix.from_columns(relation_columns, len(orders)))

    @staticmethod
    def direct_sum(groups: Sequence["PresentedAb"]) -> "PresentedAb":
        return PresentedAb(sum(g.gens for g in groups),
                           IntMatrix.block_diagonal([g.rels for g in groups]))

    @cached_property
    def _row_moduli(self) -> Optional[Dict[int, int]]:
        """For relation matrices whose columns each touch one row: row -> modulus."""
        moduli: Dict[int, int] = {}
        for column in self.rels.columns():
            support = [(i, v) for i, v in enumerate(column) if v]
            if len(support) > 1:
                return None
            if support:
                i, v = support[0]
                moduli[i] = gcd(moduli.get(i, 0), v)
        return moduli

    @cached_property
    def _relation_solver(self) -> SmithForm:
        return SmithForm(self.rels)

    def contains(self, vectors: IntMatrix) -> bool:
        """Whether every column of vectors lies in the relation lattice (is zero in the group)."""
        if vectors.rows != self.gens:
            raise ValueError(f"Vectors have {vectors.rows} rows, group has {self.gens} generators")
        moduli = self._row_moduli
        if moduli is not None:
            for i, row in enumerate(vectors.entries):
                modulus = moduli.get(i, 0)
                for v in row:
                    if v and (modulus == 0 or v % modulus):
                        return False
            return True
        return self._relation_solver.solve(vectors) is not None

    @cached_property
    def invariants(self) -> Tuple[int, Tuple[int, ...]]:
        form = SmithForm(self.rels, track=False)
        torsion = tuple(d for d in form.diagonal if d > 1)
        return self.gens - form.rank, torsion

    def is_trivial(self) -> bool:
        free_rank, torsion = self.invariants
        return free_rank == 0 and not torsion

    def exponent_divides(self, n: int) -> bool:
        """Whether n·x = 0 for every x in the group."""
        free_rank, torsion = self.invariants
        return free_rank == 0 and all(n % d == 0 for d in torsion)

    def __str__(self) -> str:
        return format_invariants(*self.invariants)


def invariant_factors(group: PresentedAb) -> Tuple[int, List[int]]:
    """
    Canonical invariants of a presented group

    Returns:
        (free_rank, torsion) with torsion factors > 1, each dividing the next
    """
    free_rank, torsion = group.invariants
    return free_rank, list(torsion)


def format_invariants(free_rank: int, torsion: Sequence[int]) -> str:
    """Render Z^r ⊕ Z/d1 ⊕ ...; the trivial group prints as 0."""
    parts = []
    if free_rank == 1:
        parts.append("Z")
    elif free_rank > 1:
        parts.append(f"Z^{free_rank}")
    parts += [f"Z/{d}" for d in torsion]
    return " ⊕ ".join(parts) if parts else "0"


@dataclass(frozen=True)
class AbHom:
    """A homomorphism of presented groups given on generators (target.gens x source.gens)."""

    source: PresentedAb
    target: PresentedAb
    matrix: IntMatrix
    check: InitVar[bool] = True

    def __post_init__(self, check: bool):
        if (self.matrix.rows, self.matrix.cols) != (self.target.gens, self.source.gens):
            raise ValueError(
                f"Map matrix is {self.matrix.rows}x{self.matrix.cols}, "
                f"expected {self.target.gens}x{self.source.gens}"
            )
        if check and not self.target.contains(self.matrix @ self.source.rels):
            raise ValueError("Map does not send relations to relations")

    @classmethod
    def identity(cls, group: PresentedAb) -> "AbHom":
        return cls(group, group, IntMatrix.identity(group.gens), check=False)

    @classmethod
    def zero(cls, source: PresentedAb, target: PresentedAb) -> "AbHom":
        return cls(source, target, IntMatrix.zeros(target.gens, source.gens), check=False)

    def compose(self, inner: "AbHom") -> "AbHom":
        """Return self ∘ inner."""
        if inner.target != self.source:
            raise ValueError("Maps are not composable")
        return AbHom(inner.source, self.target, self.matrix @ inner.matrix, check=False)

    def equals(self, other: "AbHom") -> bool:
        """Equality as maps of groups (matrices may differ by relations)."""
        if self.source != other.source or self.target != other.target:
            return False
        return self.target.contains(self.matrix - other.matrix)

    def is_zero(self) -> bool:
        return self.target.contains(self.matrix)

    def is_injective(self) -> bool:
        return kernel(self)[0].is_trivial()

    def is_surjective(self) -> bool:
        return cokernel(self)[0].is_trivial()

    def is_isomorphism(self) -> bool:
        return self.is_injective() and self.is_surjective()


def stack_homs(maps: Sequence[AbHom]) -> AbHom:
    """The map A -> B1 ⊕ B2 ⊕ ... with the given components."""
    source = maps[0].source
    if any(f.source != source for f in maps):
        raise ValueError("Stacked maps must share their source")
    target = PresentedAb.direct_sum([f.target for f in maps])
    return AbHom(source, target, IntMatrix.vstack([f.matrix for f in maps], cols=source.gens), check=False)


# --- Kernels, images, cokernels ---

@dataclass(frozen=True)
class Simplified:
    """A reduced presentation together with the coordinate changes to and from it."""

    group: PresentedAb
    to_new: IntMatrix     # old coordinates -> new coordinates
    from_new: IntMatrix   # new generators in old coordinates


def simplify_presentation(gens: int, rels: IntMatrix) -> Simplified:
    """
    Rewrite Z^gens / span(rels) as a diagonal presentation without unit factors

    New generators follow the row order of the Smith transform U.
    """
    form = SmithForm(rels)
    kept = [i for i in range(gens) if i >= form.rank or form.diagonal[i] != 1]
    orders = [form.diagonal[i] if i < form.rank else 0 for i in kept]
    group = PresentedAb.from_orders(orders)
    to_new = IntMatrix.from_sparse_rows([form.u_row(i) for i in kept], gens)
    from_new = IntMatrix.from_sparse_rows([form.uinv_column(i) for i in kept], gens).transpose() \
        if kept else IntMatrix.zeros(gens, 0)
    return Simplified(group, to_new, from_new)


def simplify(group: PresentedAb) -> Tuple[PresentedAb, AbHom, AbHom]:
    """
    Reduce a presentation

    Returns:
        (reduced group, isomorphism group -> reduced, inverse isomorphism)
    """
    result = simplify_presentation(group.gens, group.rels)
    return (result.group,
            AbHom(group, result.group, result.to_new, check=False),
            AbHom(result.group, group, result.from_new, check=False))


def kernel(f: AbHom) -> Tuple[PresentedAb, AbHom]:
    """
    Kernel of a homomorphism of presented groups

    Returns:
        (K, incl) with incl: K -> f.source injective and image = ker f
    """
    a = f.source.gens
    stacked = IntMatrix.hstack([f.matrix, -f.target.rels], rows=f.target.gens)
    form = SmithForm(stacked)
    preimage = [[column.get(k, 0) for k in range(a)] for column in form.kernel_columns()]
    preimage_lattice = IntMatrix.from_columns(preimage, a)

    # basis of the preimage lattice: d_i * (column i of U^-1)
    basis_form = SmithForm(preimage_lattice)
    r = basis_form.rank
    basis_columns = []
    for i in range(r):
        column = [0] * a
        for k, v in basis_form.uinv_column(i).items():
            column[k] = v * basis_form.diagonal[i]
        basis_columns.append(column)
    basis = IntMatrix.from_columns(basis_columns, a)

    # source relations in that basis: rows (U·R)[:r] / d_i
    relation_rows = []
    for i in range(r):
        row = []
        for column in f.source.rels.columns():
            value = sum(c * column[k] for k, c in basis_form.u_row(i).items())
            if value % basis_form.diagonal[i]:
                raise ValueError("Source relations are not in the kernel; the map is not well defined")
            row.append(value // basis_form.diagonal[i])
        relation_rows.append(row)
    relations = IntMatrix.from_rows(relation_rows, cols=f.source.rels.cols)

    reduced = simplify_presentation(r, relations)
    incl = AbHom(reduced.group, f.source, basis @ reduced.from_new, check=False)
    return reduced.group, incl


def cokernel(f: AbHom) -> Tuple[PresentedAb, AbHom]:
    """
    Cokernel of a homomorphism

    Returns:
        (Q, proj) with proj: f.target -> Q surjective
    """
    rels = IntMatrix.hstack([f.target.rels, f.matrix], rows=f.target.gens)
    reduced = simplify_presentation(f.target.gens, rels)
    return reduced.group, AbHom(f.target, reduced.group, reduced.to_new, check=False)


def image(f: AbHom) -> Tuple[PresentedAb, AbHom]:
    """
    Image of a homomorphism, presented as source / kernel

    Returns:
        (I, incl) with incl: I -> f.target injective
    """
    _, kernel_incl = kernel(f)
    rels = IntMatrix.hstack([f.source.rels, kernel_incl.matrix], rows=f.source.gens)
    reduced = simplify_presentation(f.source.gens, rels)
    return reduced.group, AbHom(reduced.group, f.target, f.matrix @ reduced.from_new, check=False)


class Lifter:
    """Solves incl·Y ≡ values modulo the target relations, for a fixed map incl."""

    def __init__(self, incl: AbHom):
        self.incl = incl
        self._form = SmithForm(IntMatrix.hstack([incl.matrix, incl.target.rels], rows=incl.target.gens))

    def lift(self, values: IntMatrix) -> IntMatrix:
        """
        Lift target-coordinate columns into source coordinates

        Raises:
            ValueError: If some column is not in the image of incl
        """
        solution = self._form.solve(values)
        if solution is None:
            raise ValueError("Values do not lie in the image of the inclusion")
        return solution.select_rows(range(self.incl.source.gens))

    def can_lift(self, values: IntMatrix) -> bool:
        return self._form.solve(values) is not None


def same_image(f: AbHom, g: AbHom) -> bool:
    """Whether two maps into the same group have equal images."""
    if f.target != g.target:
        raise ValueError("Maps have different targets")
    return Lifter(g).can_lift(f.matrix) and Lifter(f).can_lift(g.matrix)


# --- Homology ---

@dataclass
class Subquotient:
    """ker(d_out) / im(d_in), with the data needed to push classes around."""

    group: PresentedAb
    cycles: PresentedAb
    cycle_incl: AbHom          # cycles -> middle term
    to_homology: IntMatrix     # cycle coordinates -> homology coordinates
    from_homology: IntMatrix   # homology generators in cycle coordinates

    def __post_init__(self):
        self._lifter: Optional[Lifter] = None

    def classes_of(self, cycle_values: IntMatrix) -> IntMatrix:
        """Homology coordinates of cycles given in middle-term coordinates."""
        if self._lifter is None:
            self._lifter = Lifter(self.cycle_incl)
        return self.to_homology @ self._lifter.lift(cycle_values)

    def representatives(self) -> IntMatrix:
        """Middle-term cycles representing the homology generators."""
        return self.cycle_incl.matrix @ self.from_homology


def homology_subquotient(d_in: AbHom, d_out: AbHom) -> Subquotient:
    """
    Homology of a composable pair at the middle term

    Raises:
        ValueError: If the maps are not composable or d_out ∘ d_in != 0
    """
    if d_in.target != d_out.source:
        raise ValueError("Maps are not composable at the middle term")
    if not d_out.compose(d_in).is_zero():
        raise ValueError("Composite of consecutive maps is not zero")

    cycles, cycle_incl = kernel(d_out)
    boundaries = Lifter(cycle_incl).lift(d_in.matrix)
    rels = IntMatrix.hstack([cycles.rels, boundaries], rows=cycles.gens)
    reduced = simplify_presentation(cycles.gens, rels)
    return Subquotient(reduced.group, cycles, cycle_incl, reduced.to_new, reduced.from_new)


def homology_at(d_in: AbHom, d_out: AbHom) -> PresentedAb:
    """ker(d_out) / im(d_in) as a presented group."""
    return homology_subquotient(d_in, d_out).group


def induced_map(source: Subquotient, target: Subquotient, middle: AbHom) -> AbHom:
    """The map on homology induced by a chain map component on the middle terms."""
    if middle.source != source.cycle_incl.target or middle.target != target.cycle_incl.target:
        raise ValueError("Middle map does not connect the two middle terms")
    values = middle.matrix @ source.representatives()
    return AbHom(source.group, target.group, target.classes_of(values), check=False)


def induced_on_homology(d_in: AbHom, d_out: AbHom, d_in2: AbHom, d_out2: AbHom,
                        f_prev: AbHom, f_mid: AbHom, f_next: AbHom) -> AbHom:
    """
    Map on homology induced by a chain map square

    The squares f_mid∘d_in = d_in2∘f_prev and f_next∘d_out = d_out2∘f_mid
    must commute.

    Raises:
        ValueError: If a square does not commute
    """
    if not f_mid.compose(d_in).equals(d_in2.compose(f_prev)):
        raise ValueError("Left square does not commute")
    if not f_next.compose(d_out).equals(d_out2.compose(f_mid)):
        raise ValueError("Right square does not commute")
    return induced_map(homology_subquotient(d_in, d_out), homology_subquotient(d_in2, d_out2), f_mid)
