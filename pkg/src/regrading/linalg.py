"""Exact dense linear algebra over the rationals and over prime fields.

Everything in this package reduces to rank/kernel/solve computations over
an exact field, so no floating point appears anywhere.  Elimination uses
deterministic pivoting (first nonzero entry in column order), which makes
every downstream basis and report reproducible bit for bit.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


@dataclass(frozen=True)
class FieldSpec:
    """Coefficient field: the rationals (``char == 0``) or F_p (``char == p``).

    Rational elements are `fractions.Fraction`; prime-field elements are
    plain ints reduced to ``[0, p)``.  All arithmetic goes through this
    object so matrices stay agnostic of the representation.
    """

    char: int = 0

    def __post_init__(self):
        if self.char != 0 and not _is_prime(self.char):
            raise ValueError(f"field characteristic must be 0 or prime, got {self.char}")

    @property
    def zero(self):
        return Fraction(0) if self.char == 0 else 0

    @property
    def one(self):
        return Fraction(1) if self.char == 0 else 1

    def of(self, x):
        """Coerce an int or Fraction into the field."""
        if self.char == 0:
            return Fraction(x)
        if isinstance(x, Fraction):
            num = x.numerator % self.char
            den = x.denominator % self.char
            return self.mul(num, self.inv(den))
        return x % self.char

    def add(self, a, b):
        return a + b if self.char == 0 else (a + b) % self.char

    def sub(self, a, b):
        return a - b if self.char == 0 else (a - b) % self.char

    def neg(self, a):
        return -a if self.char == 0 else (-a) % self.char

    def mul(self, a, b):
        return a * b if self.char == 0 else (a * b) % self.char

    def inv(self, a):
        if self.is_zero(a):
            raise ZeroDivisionError("inverse of zero field element")
        if self.char == 0:
            return 1 / a
        return pow(a, self.char - 2, self.char)

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def is_zero(self, a) -> bool:
        return a == 0


QQ = FieldSpec(0)


@dataclass(frozen=True)
class Matrix:
    """Immutable dense matrix with exact entries.

    >>> m = Matrix.from_rows(QQ, [[1, 2], [2, 4]])
    >>> m.rank()
    1
    >>> m.kernel_basis().cols
    1
    """

    field: FieldSpec
    rows: int
    cols: int
    entries: tuple

    def __post_init__(self):
        if len(self.entries) != self.rows or any(len(r) != self.cols for r in self.entries):
            raise ValueError("entry grid does not match declared shape")

    # ---- construction ----

    @classmethod
    def from_rows(cls, field: FieldSpec, rows: Iterable[Iterable]) -> "Matrix":
        ent = tuple(tuple(field.of(x) for x in row) for row in rows)
        nrows = len(ent)
        ncols = len(ent[0]) if nrows else 0
        return cls(field, nrows, ncols, ent)

    @classmethod
    def zeros(cls, field: FieldSpec, rows: int, cols: int) -> "Matrix":
        z = field.zero
        return cls(field, rows, cols, tuple(tuple(z for _ in range(cols)) for _ in range(rows)))

    @classmethod
    def identity(cls, field: FieldSpec, n: int) -> "Matrix":
        z, o = field.zero, field.one
        return cls(field, n, n, tuple(tuple(o if i == j else z for j in range(n)) for i in range(n)))

    @classmethod
    def column(cls, field: FieldSpec, vec: Sequence) -> "Matrix":
        return cls.from_rows(field, [[x] for x in vec])

    @classmethod
    def hstack(cls, field: FieldSpec, mats: Sequence["Matrix"], rows: Optional[int] = None) -> "Matrix":
        mats = [m for m in mats]
        if rows is None:
            if not mats:
                raise ValueError("hstack of nothing needs an explicit row count")
            rows = mats[0].rows
        if any(m.rows != rows for m in mats):
            raise ValueError("hstack row mismatch")
        ent = tuple(tuple(x for m in mats for x in m.entries[i]) for i in range(rows))
        return cls(field, rows, sum(m.cols for m in mats), ent)

    @classmethod
    def vstack(cls, field: FieldSpec, mats: Sequence["Matrix"], cols: Optional[int] = None) -> "Matrix":
        mats = [m for m in mats]
        if cols is None:
            if not mats:
                raise ValueError("vstack of nothing needs an explicit column count")
            cols = mats[0].cols
        if any(m.cols != cols for m in mats):
            raise ValueError("vstack column mismatch")
        ent = tuple(row for m in mats for row in m.entries)
        return cls(field, sum(m.rows for m in mats), cols, ent)

    @classmethod
    def block_diagonal(cls, field: FieldSpec, mats: Sequence["Matrix"]) -> "Matrix":
        total_r = sum(m.rows for m in mats)
        total_c = sum(m.cols for m in mats)
        z = field.zero
        grid = [[z] * total_c for _ in range(total_r)]
        r0 = c0 = 0
        for m in mats:
            for i in range(m.rows):
                grid[r0 + i][c0:c0 + m.cols] = list(m.entries[i])
            r0 += m.rows
            c0 += m.cols
        return cls(field, total_r, total_c, tuple(tuple(r) for r in grid))

    # ---- basic algebra ----

    def __matmul__(self, other: "Matrix") -> "Matrix":
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch {self.rows}x{self.cols} @ {other.rows}x{other.cols}")
        f = self.field
        a, b = self.entries, other.entries
        out = []
        for i in range(self.rows):
            row = []
            ai = a[i]
            for j in range(other.cols):
                acc = f.zero
                for k in range(self.cols):
                    aik = ai[k]
                    if not f.is_zero(aik):
                        acc = f.add(acc, f.mul(aik, b[k][j]))
                row.append(acc)
            out.append(tuple(row))
        return Matrix(f, self.rows, other.cols, tuple(out))

    def __add__(self, other: "Matrix") -> "Matrix":
        self._same_shape(other)
        f = self.field
        ent = tuple(
            tuple(f.add(x, y) for x, y in zip(r1, r2))
            for r1, r2 in zip(self.entries, other.entries)
        )
        return Matrix(f, self.rows, self.cols, ent)

    def __sub__(self, other: "Matrix") -> "Matrix":
        self._same_shape(other)
        f = self.field
        ent = tuple(
            tuple(f.sub(x, y) for x, y in zip(r1, r2))
            for r1, r2 in zip(self.entries, other.entries)
        )
        return Matrix(f, self.rows, self.cols, ent)

    def _same_shape(self, other: "Matrix") -> None:
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise ValueError("shape mismatch")

    def scale(self, c) -> "Matrix":
        f = self.field
        c = f.of(c)
        ent = tuple(tuple(f.mul(c, x) for x in row) for row in self.entries)
        return Matrix(f, self.rows, self.cols, ent)

    def transpose(self) -> "Matrix":
        ent = tuple(tuple(self.entries[i][j] for i in range(self.rows)) for j in range(self.cols))
        return Matrix(self.field, self.cols, self.rows, ent)

    def is_zero(self) -> bool:
        f = self.field
        return all(f.is_zero(x) for row in self.entries for x in row)

    def column_vector(self, j: int) -> tuple:
        return tuple(self.entries[i][j] for i in range(self.rows))

    def apply(self, vec: Sequence) -> tuple:
        """Matrix-vector product."""
        f = self.field
        if len(vec) != self.cols:
            raise ValueError("vector length mismatch")
        out = []
        for i in range(self.rows):
            acc = f.zero
            for k in range(self.cols):
                acc = f.add(acc, f.mul(self.entries[i][k], f.of(vec[k])))
            out.append(acc)
        return tuple(out)

    # ---- elimination ----

    def rref(self):
        """Reduced row echelon form; returns (rref_matrix, pivot_columns).

        Pivot choice is the first row with a nonzero entry in the current
        column, scanning columns left to right.
        """
        f = self.field
        grid = [list(row) for row in self.entries]
        pivots = []
        pr = 0
        for pc in range(self.cols):
            pivot_row = None
            for i in range(pr, self.rows):
                if not f.is_zero(grid[i][pc]):
                    pivot_row = i
                    break
            if pivot_row is None:
                continue
            grid[pr], grid[pivot_row] = grid[pivot_row], grid[pr]
            inv = f.inv(grid[pr][pc])
            grid[pr] = [f.mul(inv, x) for x in grid[pr]]
            for i in range(self.rows):
                if i != pr and not f.is_zero(grid[i][pc]):
                    c = grid[i][pc]
                    grid[i] = [f.sub(x, f.mul(c, y)) for x, y in zip(grid[i], grid[pr])]
            pivots.append(pc)
            pr += 1
            if pr == self.rows:
                break
        ent = tuple(tuple(row) for row in grid)
        return Matrix(f, self.rows, self.cols, ent), tuple(pivots)

    def rank(self) -> int:
        return len(self.rref()[1])

    def kernel_basis(self) -> "Matrix":
        """Columns form a basis of the null space (empty matrix if injective)."""
        f = self.field
        r, pivots = self.rref()
        pivot_set = set(pivots)
        free = [j for j in range(self.cols) if j not in pivot_set]
        cols = []
        for j in free:
            v = [f.zero] * self.cols
            v[j] = f.one
            for i, p in enumerate(pivots):
                v[p] = f.neg(r.entries[i][j])
            cols.append(v)
        ent = tuple(tuple(c[i] for c in cols) for i in range(self.cols))
        return Matrix(f, self.cols, len(cols), ent)

    def solve(self, b: Sequence) -> Optional[tuple]:
        """Some x with self @ x = b, or None if the system is inconsistent."""
        sol = self.solve_matrix(Matrix.column(self.field, list(b)))
        if sol is None:
            return None
        return sol.column_vector(0)

    def solve_matrix(self, B: "Matrix") -> Optional["Matrix"]:
        """Columnwise solve; returns X with self @ X = B, or None."""
        f = self.field
        if B.rows != self.rows:
            raise ValueError("right-hand side row mismatch")
        aug = Matrix.hstack(f, [self, B], rows=self.rows)
        r, pivots = aug.rref()
        for i, p in enumerate(pivots):
            if p >= self.cols:
                return None  # pivot in the augmented block: inconsistent
        cols = []
        for j in range(B.cols):
            v = [f.zero] * self.cols
            for i, p in enumerate(pivots):
                v[p] = r.entries[i][self.cols + j]
            cols.append(v)
        ent = tuple(tuple(c[i] for c in cols) for i in range(self.cols))
        return Matrix(f, self.cols, B.cols, ent)

    def column_space_basis(self) -> "Matrix":
        """Submatrix of pivot columns; a deterministic basis of the image."""
        _, pivots = self.rref()
        ent = tuple(tuple(self.entries[i][j] for j in pivots) for i in range(self.rows))
        return Matrix(self.field, self.rows, len(pivots), ent)

    def inverse(self) -> Optional["Matrix"]:
        if self.rows != self.cols:
            raise ValueError("inverse of a non-square matrix")
        sol = self.solve_matrix(Matrix.identity(self.field, self.rows))
        if sol is None or (self @ sol != Matrix.identity(self.field, self.rows)):
            return None
        return sol

    def det(self):
        """Determinant by fraction-free-naive elimination (exact)."""
        if self.rows != self.cols:
            raise ValueError("determinant of a non-square matrix")
        f = self.field
        grid = [list(row) for row in self.entries]
        n = self.rows
        sign = 1
        acc = f.one
        for c in range(n):
            pivot_row = None
            for i in range(c, n):
                if not f.is_zero(grid[i][c]):
                    pivot_row = i
                    break
            if pivot_row is None:
                return f.zero
            if pivot_row != c:
                grid[c], grid[pivot_row] = grid[pivot_row], grid[c]
                sign = -sign
            acc = f.mul(acc, grid[c][c])
            inv = f.inv(grid[c][c])
            for i in range(c + 1, n):
                if not f.is_zero(grid[i][c]):
                    factor = f.mul(grid[i][c], inv)
                    grid[i] = [f.sub(x, f.mul(factor, y)) for x, y in zip(grid[i], grid[c])]
        return f.mul(acc, f.of(sign))

    def __repr__(self):
        body = "; ".join(" ".join(str(x) for x in row) for row in self.entries)
        return f"Matrix({self.rows}x{self.cols}: {body})"
