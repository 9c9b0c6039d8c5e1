"""Exact dense linear algebra over a :class:`~tangdeform.scalar.Field`.

Vectors are plain lists of raw field elements.  Pivoting is deterministic:
leftmost column first, topmost nonzero row within it.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .errors import DimensionMismatch, DivisionByZero, MixedFields
from .scalar import Field


class DenseMatrix:
    """Row-major dense matrix of raw field elements."""

    __slots__ = ("rows", "cols", "entries", "field")

    def __init__(self, field: Field, rows: Sequence[Sequence], cols: int | None = None):
        self.field = field
        self.entries = [[field(x) for x in r] for r in rows]
        self.rows = len(self.entries)
        self.cols = len(self.entries[0]) if self.entries else (cols or 0)
        if any(len(r) != self.cols for r in self.entries):
            raise DimensionMismatch("ragged matrix rows")

    @classmethod
    def identity(cls, n: int, field: Field) -> DenseMatrix:
        return cls(field, [[field.one if i == j else field.zero for j in range(n)] for i in range(n)])

    @classmethod
    def zeros(cls, rows: int, cols: int, field: Field) -> DenseMatrix:
        return cls(field, [[field.zero] * cols for _ in range(rows)], cols)

    @classmethod
    def diagonal(cls, diag: Sequence, field: Field) -> DenseMatrix:
        n = len(diag)
        return cls(field, [[diag[i] if i == j else 0 for j in range(n)] for i in range(n)])

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence], field: Field, nrows: int | None = None) -> DenseMatrix:
        if not columns:
            return cls.zeros(nrows or 0, 0, field)
        return cls(field, [list(r) for r in zip(*columns)])

    def to_rows(self) -> list:
        return [list(r) for r in self.entries]

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def __eq__(self, other):
        if not isinstance(other, DenseMatrix):
            return NotImplemented
        return self.field == other.field and self.entries == other.entries and self.cols == other.cols

    def __hash__(self):
        return hash((self.field, tuple(map(tuple, self.entries))))

    def __repr__(self):
        body = "; ".join(" ".join(self.field.format(x) for x in r) for r in self.entries)
        return f"DenseMatrix[{body}]"

    def transpose(self) -> DenseMatrix:
        return DenseMatrix(self.field, [list(c) for c in zip(*self.entries)], self.rows)

    def __matmul__(self, other: DenseMatrix) -> DenseMatrix:
        if other.field != self.field:
            raise MixedFields(f"{self.field} and {other.field}")
        if self.cols != other.rows:
            raise DimensionMismatch(f"{self.rows}x{self.cols} @ {other.rows}x{other.cols}")
        K = self.field
        cols = list(zip(*other.entries))
        out = []
        for r in self.entries:
            row = []
            for c in cols:
                s = K.zero
                for a, b in zip(r, c):
                    if a and b:
                        s = K.add(s, K.mul(a, b))
                row.append(s)
            out.append(row)
        return DenseMatrix(K, out, other.cols)

    def apply(self, v: Sequence) -> list:
        if len(v) != self.cols:
            raise DimensionMismatch(f"vector of length {len(v)} for {self.cols} columns")
        K = self.field
        out = []
        for r in self.entries:
            s = K.zero
            for a, b in zip(r, v):
                if a and b:
                    s = K.add(s, K.mul(a, b))
            out.append(s)
        return out

    def rank(self) -> int:
        return rref(self).rank

    def is_invertible(self) -> bool:
        return self.rows == self.cols and self.rank() == self.rows

    def inverse(self) -> DenseMatrix:
        n = self.rows
        if n != self.cols:
            raise DimensionMismatch("only square matrices are invertible")
        K = self.field
        aug = DenseMatrix(K, [r + [K.one if i == j else K.zero for j in range(n)]
                              for i, r in enumerate(self.entries)])
        ech = rref(aug)
        if ech.pivot_columns[:n] != list(range(n)):
            raise DivisionByZero("singular matrix")
        return DenseMatrix(K, [r[n:] for r in ech.reduced.entries[:n]])


@dataclass(frozen=True)
class RowEchelon:
    reduced: DenseMatrix
    rank: int
    pivot_columns: list


def rref(M: DenseMatrix) -> RowEchelon:
    K = M.field
    rows = [list(r) for r in M.entries]
    pivots = []
    r = 0
    for c in range(M.cols):
        if r == len(rows):
            break
        pivot = next((i for i in range(r, len(rows)) if rows[i][c]), None)
        if pivot is None:
            continue
        rows[r], rows[pivot] = rows[pivot], rows[r]
        inv = K.inv(rows[r][c])
        if inv != K.one:
            rows[r] = [K.mul(inv, x) for x in rows[r]]
        prow = rows[r]
        for i in range(len(rows)):
            if i != r and rows[i][c]:
                factor = rows[i][c]
                rows[i] = [K.sub(x, K.mul(factor, y)) if y else x for x, y in zip(rows[i], prow)]
        pivots.append(c)
        r += 1
    return RowEchelon(DenseMatrix(K, rows, M.cols), len(pivots), pivots)


def kernel(M: DenseMatrix) -> list:
    """Basis of the right null space, one vector per free column."""
    K = M.field
    ech = rref(M)
    pivots = ech.pivot_columns
    pivot_set = set(pivots)
    basis = []
    for free in range(M.cols):
        if free in pivot_set:
            continue
        v = [K.zero] * M.cols
        v[free] = K.one
        for row_index, pc in enumerate(pivots):
            v[pc] = K.neg(ech.reduced.entries[row_index][free])
        basis.append(v)
    return basis


def solve(M: DenseMatrix, b: Sequence) -> list | None:
    """Some x with M x = b (free variables zero), or None if inconsistent."""
    if len(b) != M.rows:
        raise DimensionMismatch(f"right-hand side of length {len(b)} for {M.rows} rows")
    K = M.field
    aug = DenseMatrix(K, [list(r) + [K(x)] for r, x in zip(M.entries, b)], M.cols + 1)
    ech = rref(aug)
    if ech.pivot_columns and ech.pivot_columns[-1] == M.cols:
        return None
    x = [K.zero] * M.cols
    for row_index, pc in enumerate(ech.pivot_columns):
        x[pc] = ech.reduced.entries[row_index][M.cols]
    return x


def row_basis(vectors: Sequence[Sequence], field: Field, dim: int) -> list:
    """Echelonized basis of the span of ``vectors`` (ambient dimension ``dim``)."""
    if not vectors:
        return []
    ech = rref(DenseMatrix(field, vectors, dim))
    return [list(r) for r in ech.reduced.entries[:ech.rank]]


def _intersect_pair(U: list, V: list, field: Field, dim: int) -> list:
    if not U or not V:
        return []
    K = field
    # columns u_1..u_a, -v_1..-v_b ; kernel vectors give sum c_i u_i = sum d_j v_j
    cols = [list(u) for u in U] + [[K.neg(x) for x in v] for v in V]
    ker = kernel(DenseMatrix.from_columns(cols, K))
    vecs = []
    for z in ker:
        w = [K.zero] * dim
        for coef, u in zip(z[:len(U)], U):
            if coef:
                w = [K.add(a, K.mul(coef, b)) for a, b in zip(w, u)]
        vecs.append(w)
    return row_basis(vecs, K, dim)


def subspace_intersection(bases: Sequence[Sequence[Sequence]], field: Field, dim: int | None = None) -> list:
    """Echelonized basis of the intersection of the spans in ``bases``."""
    if not bases:
        raise ValueError("need at least one subspace")
    if dim is None:
        dim = next((len(v) for B in bases for v in B), None)
        if dim is None:
            return []
    for B in bases:
        for v in B:
            if len(v) != dim:
                raise DimensionMismatch(f"vector of length {len(v)} in ambient dimension {dim}")
    current = row_basis([[field(x) for x in v] for v in bases[0]], field, dim)
    for B in bases[1:]:
        current = _intersect_pair(current, row_basis([[field(x) for x in v] for v in B], field, dim), field, dim)
        if not current:
            break
    return current


def in_span(v: Sequence, basis: Sequence[Sequence], field: Field) -> bool:
    if not basis:
        return not any(v)
    return solve(DenseMatrix.from_columns(basis, field), list(v)) is not None
