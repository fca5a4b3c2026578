"""Exact matrices over Q plus field-generic elimination (rank, null space)."""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from .poly import Poly, format_rational, parse_rational


class DimensionError(ValueError):
    pass


class RationalMatrix:
    """Immutable dense matrix with Fraction entries (row-major)."""

    __slots__ = ("rows", "cols", "entries")

    def __init__(self, rows: int, cols: int, entries: Sequence):
        if len(entries) != rows * cols:
            raise DimensionError(f"expected {rows * cols} entries, got {len(entries)}")
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "cols", cols)
        object.__setattr__(self, "entries", tuple(Fraction(e) for e in entries))

    def __setattr__(self, name, value):
        raise AttributeError("RationalMatrix is immutable")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence]) -> "RationalMatrix":
        r = len(rows)
        c = len(rows[0]) if r else 0
        if any(len(row) != c for row in rows):
            raise DimensionError("ragged rows")
        return cls(r, c, [e for row in rows for e in row])

    @classmethod
    def from_columns(cls, cols: Sequence[Sequence]) -> "RationalMatrix":
        return cls.from_rows([list(t) for t in zip(*cols)])

    @classmethod
    def identity(cls, n: int) -> "RationalMatrix":
        return cls(n, n, [1 if i == j else 0 for i in range(n) for j in range(n)])

    @classmethod
    def diagonal(cls, values: Sequence) -> "RationalMatrix":
        n = len(values)
        return cls(n, n, [values[i] if i == j else 0 for i in range(n) for j in range(n)])

    @property
    def is_square(self) -> bool:
        return self.rows == self.cols

    def __getitem__(self, ij: tuple[int, int]) -> Fraction:
        i, j = ij
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> list[Fraction]:
        return list(self.entries[i * self.cols:(i + 1) * self.cols])

    def column(self, j: int) -> list[Fraction]:
        return [self.entries[i * self.cols + j] for i in range(self.rows)]

    def to_rows(self) -> list[list[Fraction]]:
        return [self.row(i) for i in range(self.rows)]

    def __eq__(self, other) -> bool:
        if not isinstance(other, RationalMatrix):
            return NotImplemented
        return (self.rows, self.cols, self.entries) == (other.rows, other.cols, other.entries)

    def __hash__(self) -> int:
        return hash((self.rows, self.cols, self.entries))

    def __repr__(self) -> str:
        body = "; ".join(" ".join(format_rational(e) for e in self.row(i)) for i in range(self.rows))
        return f"RationalMatrix([{body}])"

    def __add__(self, other: "RationalMatrix") -> "RationalMatrix":
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise DimensionError("shape mismatch")
        return RationalMatrix(self.rows, self.cols, [a + b for a, b in zip(self.entries, other.entries)])

    def __sub__(self, other: "RationalMatrix") -> "RationalMatrix":
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise DimensionError("shape mismatch")
        return RationalMatrix(self.rows, self.cols, [a - b for a, b in zip(self.entries, other.entries)])

    def scale(self, c) -> "RationalMatrix":
        c = Fraction(c)
        return RationalMatrix(self.rows, self.cols, [c * e for e in self.entries])

    def __matmul__(self, other: "RationalMatrix") -> "RationalMatrix":
        if self.cols != other.rows:
            raise DimensionError("shape mismatch in product")
        a = self.to_rows()
        bt = [other.column(j) for j in range(other.cols)]
        out = []
        for row in a:
            for col in bt:
                out.append(sum((x * y for x, y in zip(row, col) if x and y), Fraction(0)))
        return RationalMatrix(self.rows, other.cols, out)

    def apply(self, v: Sequence) -> list:
        """Matrix-vector product; ``v`` may hold Fractions or number-field elements."""
        if len(v) != self.cols:
            raise DimensionError("vector length mismatch")
        out = []
        for i in range(self.rows):
            acc = 0
            for j in range(self.cols):
                e = self.entries[i * self.cols + j]
                if e:
                    acc = acc + v[j] * e
            out.append(acc)
        return out

    def power(self, n: int) -> "RationalMatrix":
        if not self.is_square:
            raise DimensionError("power of a non-square matrix")
        if n < 0:
            raise ValueError("negative power")
        result, base = RationalMatrix.identity(self.rows), self
        while n:
            if n & 1:
                result = result @ base
            base = base @ base
            n >>= 1
        return result

    def transpose(self) -> "RationalMatrix":
        return RationalMatrix.from_rows([self.column(j) for j in range(self.cols)])

    def is_integral(self) -> bool:
        return all(e.denominator == 1 for e in self.entries)

    def to_json(self) -> list[list[str]]:
        return [[format_rational(e) for e in self.row(i)] for i in range(self.rows)]

    @classmethod
    def from_json(cls, data) -> "RationalMatrix":
        return cls.from_rows([[parse_rational(s) for s in row] for row in data])


# -- characteristic polynomial ------------------------------------------------

def char_poly(m: RationalMatrix) -> Poly:
    """det(xI - M) by Berkowitz's division-free algorithm."""
    if not m.is_square:
        raise DimensionError(f"char_poly needs a square matrix, got {m.rows}x{m.cols}")
    n = m.rows
    if n == 0:
        return Poly.const(1)
    a = m.to_rows()
    # vect holds coefficients highest degree first
    vect = [Fraction(1), -a[0][0]]
    for r in range(1, n):
        # partition the leading (r+1)x(r+1) block as [[A, R], [C, a_rr]]
        R = [a[i][r] for i in range(r)]
        C = a[r][:r]
        A = [row[:r] for row in a[:r]]
        # Toeplitz column: 1, -a_rr, -C R, -C A R, ...
        col = [Fraction(1), -a[r][r]]
        w = R
        for _ in range(r):
            col.append(-sum((c * x for c, x in zip(C, w)), Fraction(0)))
            w = [sum((A[i][j] * w[j] for j in range(r) if A[i][j]), Fraction(0)) for i in range(r)]
        new = []
        for i in range(r + 2):
            s = Fraction(0)
            for j in range(min(i, len(vect) - 1) + 1):
                if i - j < len(col):
                    s += col[i - j] * vect[j]
            new.append(s)
        vect = new
    return Poly(reversed(vect))


def det_bareiss(rows: Sequence[Sequence[int]]) -> int:
    """Integer determinant by fraction-free Bareiss elimination."""
    a = [list(map(int, r)) for r in rows]
    n = len(a)
    if n == 0:
        return 1
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


# -- field-generic elimination --------------------------------------------------

def _nonzero(x) -> bool:
    return not (x == 0)


def row_echelon(rows: list[list]) -> tuple[list[list], list[int]]:
    """Reduced row echelon form over any exact field; returns (rref, pivot columns)."""
    a = [list(r) for r in rows]
    if not a:
        return a, []
    nr, nc = len(a), len(a[0])
    pivots = []
    r = 0
    for c in range(nc):
        if r >= nr:
            break
        p = next((i for i in range(r, nr) if _nonzero(a[i][c])), None)
        if p is None:
            continue
        a[r], a[p] = a[p], a[r]
        inv = 1 / a[r][c]
        a[r] = [x * inv if _nonzero(x) else x for x in a[r]]
        for i in range(nr):
            if i != r and _nonzero(a[i][c]):
                f = a[i][c]
                a[i] = [x - f * y if _nonzero(y) else x for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
    return a, pivots


def rank(rows: list[list]) -> int:
    return len(row_echelon(rows)[1])


def nullspace(rows: list[list], one=Fraction(1), zero=Fraction(0)) -> list[list]:
    """Basis of the right null space; one vector per free column, free entry = 1."""
    if not rows:
        return []
    nc = len(rows[0])
    rref, pivots = row_echelon(rows)
    free = [c for c in range(nc) if c not in pivots]
    basis = []
    for fcol in free:
        v = [zero] * nc
        v[fcol] = one
        for i, pc in enumerate(pivots):
            v[pc] = -rref[i][fcol]
        basis.append(v)
    return basis
