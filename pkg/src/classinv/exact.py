"""Exact rational scalars and dense rational matrix algebra.

The base field is Q, realized by ``fractions.Fraction``: always reduced,
positive denominator, zero stored as 0/1.  Everything downstream relies on
these operations being exact; there is no floating point anywhere.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Iterable, Sequence

Rational = Fraction

ZERO = Fraction(0)
ONE = Fraction(1)


class DimensionMismatch(ValueError):
    pass


class SingularMatrixError(ValueError):
    """Raised when inverting a singular matrix; carries the rank found."""

    def __init__(self, rank: int, size: int):
        self.rank = rank
        self.size = size
        super().__init__(f"singular matrix: rank {rank} < {size}")


def _as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    raise TypeError(f"expected an int or Fraction, got {type(x).__name__}")


class Matrix:
    """Immutable dense matrix over Q, row-major entries."""

    __slots__ = ("rows", "cols", "entries")

    def __init__(self, rows: int, cols: int, entries: Iterable[Fraction]):
        entries = tuple(_as_fraction(e) for e in entries)
        if len(entries) != rows * cols:
            raise DimensionMismatch(
                f"{rows}x{cols} matrix needs {rows * cols} entries, got {len(entries)}"
            )
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "cols", cols)
        object.__setattr__(self, "entries", entries)

    def __setattr__(self, name, value):
        raise AttributeError("Matrix is immutable")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence]) -> "Matrix":
        nrows = len(rows)
        ncols = len(rows[0]) if nrows else 0
        for r in rows:
            if len(r) != ncols:
                raise DimensionMismatch("ragged rows")
        return cls(nrows, ncols, [x for r in rows for x in r])

    @classmethod
    def identity(cls, n: int) -> "Matrix":
        return cls(n, n, [ONE if i == j else ZERO for i in range(n) for j in range(n)])

    @classmethod
    def zero(cls, rows: int, cols: int) -> "Matrix":
        return cls(rows, cols, [ZERO] * (rows * cols))

    def at(self, i: int, j: int) -> Fraction:
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> tuple:
        return self.entries[i * self.cols : (i + 1) * self.cols]

    def row_lists(self) -> list[list[Fraction]]:
        return [list(self.row(i)) for i in range(self.rows)]

    def __eq__(self, other) -> bool:
        if not isinstance(other, Matrix):
            return NotImplemented
        return (
            self.rows == other.rows
            and self.cols == other.cols
            and self.entries == other.entries
        )

    def __hash__(self) -> int:
        return hash((self.rows, self.cols, self.entries))

    def __add__(self, other: "Matrix") -> "Matrix":
        if self.rows != other.rows or self.cols != other.cols:
            raise DimensionMismatch(
                f"add {self.rows}x{self.cols} with {other.rows}x{other.cols}"
            )
        return Matrix(
            self.rows, self.cols, [a + b for a, b in zip(self.entries, other.entries)]
        )

    def __sub__(self, other: "Matrix") -> "Matrix":
        if self.rows != other.rows or self.cols != other.cols:
            raise DimensionMismatch(
                f"sub {self.rows}x{self.cols} with {other.rows}x{other.cols}"
            )
        return Matrix(
            self.rows, self.cols, [a - b for a, b in zip(self.entries, other.entries)]
        )

    def __neg__(self) -> "Matrix":
        return Matrix(self.rows, self.cols, [-a for a in self.entries])

    def __matmul__(self, other: "Matrix") -> "Matrix":
        if self.cols != other.rows:
            raise DimensionMismatch(
                f"multiply {self.rows}x{self.cols} with {other.rows}x{other.cols}"
            )
        n, k, m = self.rows, self.cols, other.cols
        a, b = self.entries, other.entries
        out = []
        for i in range(n):
            arow = a[i * k : (i + 1) * k]
            for j in range(m):
                s = ZERO
                for t in range(k):
                    avt = arow[t]
                    if avt:
                        s += avt * b[t * m + j]
                out.append(s)
        return Matrix(n, m, out)

    def scale(self, c) -> "Matrix":
        c = _as_fraction(c)
        return Matrix(self.rows, self.cols, [c * a for a in self.entries])

    def transpose(self) -> "Matrix":
        return Matrix(
            self.cols,
            self.rows,
            [self.at(i, j) for j in range(self.cols) for i in range(self.rows)],
        )

    def apply(self, vec: Sequence) -> tuple:
        """Matrix-vector product, vec of length cols."""
        if len(vec) != self.cols:
            raise DimensionMismatch(f"vector length {len(vec)} != {self.cols}")
        vec = [_as_fraction(v) for v in vec]
        return tuple(
            sum((self.at(i, j) * vec[j] for j in range(self.cols)), ZERO)
            for i in range(self.rows)
        )

    def inverse(self) -> "Matrix":
        """Exact inverse via Gauss-Jordan; SingularMatrixError reports the rank."""
        if self.rows != self.cols:
            raise DimensionMismatch("inverse needs a square matrix")
        n = self.rows
        aug = [list(self.row(i)) + [ONE if i == j else ZERO for j in range(n)] for i in range(n)]
        reduced, pivots = rref(aug)
        lead = [p for p in pivots if p < n]
        if len(lead) < n:
            raise SingularMatrixError(len(lead), n)
        return Matrix.from_rows([r[n:] for r in reduced])

    def det(self) -> Fraction:
        if self.rows != self.cols:
            raise DimensionMismatch("determinant needs a square matrix")
        n = self.rows
        rows = self.row_lists()
        det = ONE
        for col in range(n):
            piv = None
            for r in range(col, n):
                if rows[r][col]:
                    piv = r
                    break
            if piv is None:
                return ZERO
            if piv != col:
                rows[col], rows[piv] = rows[piv], rows[col]
                det = -det
            pval = rows[col][col]
            det *= pval
            for r in range(col + 1, n):
                factor = rows[r][col] / pval
                if factor:
                    rows[r] = [a - factor * b for a, b in zip(rows[r], rows[col])]
        return det

    def rank(self) -> int:
        _, pivots = rref(self.row_lists())
        return len(pivots)

    def is_invertible(self) -> bool:
        return self.rows == self.cols and self.rank() == self.rows

    def __repr__(self) -> str:
        body = "; ".join(
            " ".join(str(self.at(i, j)) for j in range(self.cols))
            for i in range(self.rows)
        )
        return f"Matrix[{body}]"


def _strip_row(row: list[Fraction]) -> list[Fraction]:
    """Scale a row to primitive integer form (content 1), keeping sign."""
    den = 1
    for x in row:
        if x:
            den = den * x.denominator // gcd(den, x.denominator)
    num = 0
    for x in row:
        if x:
            num = gcd(num, abs(x.numerator * (den // x.denominator)))
    if num == 0:
        return [ZERO] * len(row)
    scale = Fraction(den, num)
    return [x * scale for x in row]


def rref(rows: list[list[Fraction]]) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form with first-nonzero pivoting.

    Returns (nonzero rows with pivot entries 1, pivot column indices).
    Elimination uses integer cross-multiplication on content-stripped rows
    so intermediate fractions never appear; pivots are normalized at the end.
    """
    work = [_strip_row(list(r)) for r in rows]
    work = [r for r in work if any(r)]
    if not work:
        return [], []
    ncols = len(work[0])
    pivots: list[int] = []
    piv_rows: list[list[Fraction]] = []
    for col in range(ncols):
        target = None
        for idx, r in enumerate(work):
            if r[col]:
                target = idx
                break
        if target is None:
            continue
        prow = work.pop(target)
        pval = prow[col]
        rest = []
        for r in work:
            rv = r[col]
            if rv:
                r = _strip_row([pval * a - rv * b for a, b in zip(r, prow)])
            if any(r):
                rest.append(r)
        work = rest
        pivots.append(col)
        piv_rows.append(prow)
        if not work:
            break
    # back-substitution, highest pivot row last
    for i in range(len(piv_rows) - 1, -1, -1):
        col = pivots[i]
        prow = piv_rows[i]
        pval = prow[col]
        for j in range(i):
            rv = piv_rows[j][col]
            if rv:
                piv_rows[j] = _strip_row(
                    [pval * a - rv * b for a, b in zip(piv_rows[j], prow)]
                )
    out = []
    for i, prow in enumerate(piv_rows):
        pval = prow[pivots[i]]
        out.append([a / pval for a in prow])
    return out, pivots


def nullspace_basis(m: Matrix) -> list[tuple[Fraction, ...]]:
    """Canonical basis of {v : m v = 0}: reduced-echelon rows, pivots 1.

    The free-variable parametrization of the RREF of ``m`` is itself
    re-echelonized so fixtures are deterministic.
    """
    reduced, pivots = rref(m.row_lists())
    ncols = m.cols
    pivot_set = set(pivots)
    free_cols = [c for c in range(ncols) if c not in pivot_set]
    if not free_cols:
        return []
    vectors = []
    for fc in free_cols:
        v = [ZERO] * ncols
        v[fc] = ONE
        for ridx, pc in enumerate(pivots):
            v[pc] = -reduced[ridx][fc]
        vectors.append(v)
    canonical, _ = rref(vectors)
    return [tuple(r) for r in canonical]
