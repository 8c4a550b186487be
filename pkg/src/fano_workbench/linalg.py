"""Exact dense linear algebra over a FieldSpec.

Gaussian elimination with first-nonzero pivoting; no tolerances anywhere.
Matrices are small (fiber dimensions, coordinate changes), so clarity wins
over asymptotics.
"""

from __future__ import annotations

from typing import Sequence

from .errors import DimensionMismatch
from .fields import FieldSpec


class ExactMatrix:
    """Immutable-by-convention matrix with exact entries."""

    __slots__ = ("field", "rows", "cols", "entries")

    def __init__(self, field: FieldSpec, entries: Sequence[Sequence]):
        self.field = field
        self.entries = tuple(tuple(field(x) for x in row) for row in entries)
        self.rows = len(self.entries)
        self.cols = len(self.entries[0]) if self.entries else 0
        if any(len(r) != self.cols for r in self.entries):
            raise DimensionMismatch("ragged matrix")

    @classmethod
    def identity(cls, field, n):
        return cls(field, [[field.one if i == j else field.zero for j in range(n)] for i in range(n)])

    def row_list(self):
        return [list(r) for r in self.entries]

    def transpose(self):
        return ExactMatrix(self.field, list(zip(*self.entries)) if self.entries else [])

    def __eq__(self, other):
        return (
            isinstance(other, ExactMatrix)
            and self.field == other.field
            and self.entries == other.entries
        )

    def __repr__(self):
        return f"ExactMatrix({self.field}, {self.rows}x{self.cols})"

    def matvec(self, v):
        f = self.field
        if len(v) != self.cols:
            raise DimensionMismatch("matvec size mismatch")
        return tuple(
            _dot(f, row, v) for row in self.entries
        )

    def matmul(self, other: "ExactMatrix") -> "ExactMatrix":
        if self.cols != other.rows:
            raise DimensionMismatch("matmul size mismatch")
        f = self.field
        bt = list(zip(*other.entries))
        return ExactMatrix(
            f, [[_dot(f, row, col) for col in bt] for row in self.entries]
        )


def _dot(f, xs, ys):
    acc = f.zero
    for x, y in zip(xs, ys):
        acc = f.add(acc, f.mul(x, y))
    return acc


def rref(rows: Sequence[Sequence], field: FieldSpec):
    """Reduced row echelon form.  Returns (rref rows, pivot column list)."""
    m = [list(map(field, r)) for r in rows]
    nrows = len(m)
    ncols = len(m[0]) if m else 0
    pivots = []
    r = 0
    for c in range(ncols):
        pivot_row = None
        for i in range(r, nrows):
            if m[i][c] != 0:
                pivot_row = i
                break
        if pivot_row is None:
            continue
        m[r], m[pivot_row] = m[pivot_row], m[r]
        inv = field.inv(m[r][c])
        m[r] = [field.mul(x, inv) for x in m[r]]
        for i in range(nrows):
            if i != r and m[i][c] != 0:
                factor = m[i][c]
                m[i] = [field.sub(x, field.mul(factor, y)) for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    return m, pivots


def rank(rows: Sequence[Sequence], field: FieldSpec) -> int:
    return len(rref(rows, field)[1])


def nullspace_rank(M: ExactMatrix):
    """(rank, nullspace basis).  Basis vectors exactly satisfy M v = 0 and
    rank + len(basis) = cols."""
    f = M.field
    reduced, pivots = rref(M.entries, f)
    free = [c for c in range(M.cols) if c not in pivots]
    basis = []
    for fc in free:
        v = [f.zero] * M.cols
        v[fc] = f.one
        for r, pc in enumerate(pivots):
            v[pc] = f.neg(reduced[r][fc])
        basis.append(tuple(v))
    return len(pivots), basis


def invert(M: ExactMatrix) -> ExactMatrix:
    """Inverse of a square matrix (raises on singular input)."""
    if M.rows != M.cols:
        raise DimensionMismatch("only square matrices invert")
    f = M.field
    n = M.rows
    aug = [list(M.entries[i]) + [f.one if j == i else f.zero for j in range(n)] for i in range(n)]
    reduced, pivots = rref(aug, f)
    if pivots[:n] != list(range(n)):
        raise DimensionMismatch("matrix is singular")
    return ExactMatrix(f, [row[n:] for row in reduced[:n]])


def solve(M: ExactMatrix, rhs: Sequence):
    """One exact solution of M x = rhs, or None if inconsistent."""
    f = M.field
    if len(rhs) != M.rows:
        raise DimensionMismatch("rhs length mismatch")
    aug = [list(row) + [f(b)] for row, b in zip(M.entries, rhs)]
    reduced, pivots = rref(aug, f)
    if M.cols in pivots:
        return None
    x = [f.zero] * M.cols
    for r, pc in enumerate(pivots):
        x[pc] = reduced[r][M.cols]
    return tuple(x)


def extend_to_basis(rows: Sequence[Sequence], field: FieldSpec):
    """Extend independent rows to a full basis by standard vectors at the
    non-pivot columns.  Returns the square matrix rows + completions."""
    reduced, pivots = rref(rows, field)
    ncols = len(rows[0])
    if len(pivots) != len(rows):
        raise DimensionMismatch("rows are dependent; cannot extend")
    out = [list(map(field, r)) for r in rows]
    for c in range(ncols):
        if c not in pivots:
            v = [field.zero] * ncols
            v[c] = field.one
            out.append(v)
    return out
