"""
Exact rational matrices for KahlerLab.

Small dense matrices over fractions.Fraction with Gauss–Jordan elimination.
Zero-dimensional spaces are allowed, so every matrix carries its shape.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, List, Sequence, Tuple, Union

from .errors import ShapeError, SingularInputError

Rational = Fraction
Vector = Tuple[Fraction, ...]
RationalLike = Union[int, str, Fraction]


def parse_rational(value: RationalLike) -> Fraction:
    """Parse an int, 'p', 'p/q' or a Fraction."""
    if isinstance(value, (Fraction, int)) and not isinstance(value, bool):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError):
            pass
    raise ValueError(f"Unrecognized rational format: {value!r}")


def format_rational(x: Fraction) -> str:
    return str(x)


def vector(values: Iterable[RationalLike]) -> Vector:
    return tuple(parse_rational(v) for v in values)


def zero_vector(n: int) -> Vector:
    return (Fraction(0),) * n


def vadd(a: Vector, b: Vector) -> Vector:
    if len(a) != len(b):
        raise ShapeError(f"Vector lengths differ: {len(a)} vs {len(b)}")
    return tuple(x + y for x, y in zip(a, b))


def vscale(c: RationalLike, a: Vector) -> Vector:
    c = Fraction(c)
    return tuple(c * x for x in a)


def is_zero_vector(a: Vector) -> bool:
    return all(x == 0 for x in a)


class QMatrix:
    """Dense rows × cols matrix of Fractions."""

    __slots__ = ("rows", "cols", "data")

    def __init__(self, rows: int, cols: int, data: Sequence[Sequence[RationalLike]] = ()):
        self.rows = rows
        self.cols = cols
        if data:
            if len(data) != rows or any(len(r) != cols for r in data):
                raise ShapeError(f"Matrix data does not have shape {rows}x{cols}")
            self.data: List[List[Fraction]] = [[parse_rational(x) for x in r] for r in data]
        else:
            self.data = [[Fraction(0)] * cols for _ in range(rows)]

    # -- constructors --------------------------------------------------

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "QMatrix":
        return cls(rows, cols)

    @classmethod
    def identity(cls, n: int) -> "QMatrix":
        out = cls(n, n)
        for i in range(n):
            out.data[i][i] = Fraction(1)
        return out

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[RationalLike]], cols: int = 0) -> "QMatrix":
        if not rows:
            return cls(0, cols)
        return cls(len(rows), len(rows[0]), rows)

    @classmethod
    def from_columns(cls, columns: Sequence[Vector], rows: int) -> "QMatrix":
        out = cls(rows, len(columns))
        for j, col in enumerate(columns):
            for i in range(rows):
                out.data[i][j] = col[i]
        return out

    # -- structure -----------------------------------------------------

    @property
    def shape(self) -> Tuple[int, int]:
        return self.rows, self.cols

    def __repr__(self) -> str:
        return f"QMatrix({self.rows}x{self.cols})"

    def __eq__(self, other: object) -> bool:
        return isinstance(other, QMatrix) and self.shape == other.shape and self.data == other.data

    def copy(self) -> "QMatrix":
        return QMatrix(self.rows, self.cols, self.data)

    def column(self, j: int) -> Vector:
        return tuple(self.data[i][j] for i in range(self.rows))

    @property
    def T(self) -> "QMatrix":
        out = QMatrix(self.cols, self.rows)
        for i in range(self.rows):
            for j in range(self.cols):
                out.data[j][i] = self.data[i][j]
        return out

    def to_strings(self) -> List[List[str]]:
        return [[format_rational(x) for x in r] for r in self.data]

    # -- arithmetic ----------------------------------------------------

    def _check_same(self, other: "QMatrix") -> None:
        if self.shape != other.shape:
            raise ShapeError(f"Matrix shapes differ: {self.shape} vs {other.shape}")

    def __add__(self, other: "QMatrix") -> "QMatrix":
        self._check_same(other)
        out = QMatrix(self.rows, self.cols)
        out.data = [[a + b for a, b in zip(r, s)] for r, s in zip(self.data, other.data)]
        return out

    def __neg__(self) -> "QMatrix":
        return self.scale(-1)

    def __sub__(self, other: "QMatrix") -> "QMatrix":
        return self + (-other)

    def scale(self, c: RationalLike) -> "QMatrix":
        c = Fraction(c)
        out = QMatrix(self.rows, self.cols)
        out.data = [[c * a for a in r] for r in self.data]
        return out

    def __matmul__(self, other: "QMatrix") -> "QMatrix":
        if self.cols != other.rows:
            raise ShapeError(f"Cannot multiply {self.shape} by {other.shape}")
        out = QMatrix(self.rows, other.cols)
        for i in range(self.rows):
            row = self.data[i]
            for j in range(other.cols):
                out.data[i][j] = sum((row[k] * other.data[k][j] for k in range(self.cols)), Fraction(0))
        return out

    def apply(self, v: Vector) -> Vector:
        if len(v) != self.cols:
            raise ShapeError(f"Cannot apply {self.shape} matrix to a vector of length {len(v)}")
        return tuple(sum((a * x for a, x in zip(r, v)), Fraction(0)) for r in self.data)

    def is_zero(self) -> bool:
        return all(x == 0 for r in self.data for x in r)

    def is_symmetric(self) -> bool:
        return self.rows == self.cols and all(
            self.data[i][j] == self.data[j][i] for i in range(self.rows) for j in range(i))

    # -- elimination ---------------------------------------------------

    def _rref(self) -> Tuple[List[List[Fraction]], List[int]]:
        a = [list(r) for r in self.data]
        pivots: List[int] = []
        row = 0
        for col in range(self.cols):
            pivot = next((r for r in range(row, self.rows) if a[r][col] != 0), None)
            if pivot is None:
                continue
            a[row], a[pivot] = a[pivot], a[row]
            inv = 1 / a[row][col]
            a[row] = [x * inv for x in a[row]]
            for r in range(self.rows):
                if r != row and a[r][col] != 0:
                    factor = a[r][col]
                    a[r] = [x - factor * y for x, y in zip(a[r], a[row])]
            pivots.append(col)
            row += 1
            if row == self.rows:
                break
        return a, pivots

    def rank(self) -> int:
        return len(self._rref()[1])

    def nullspace(self) -> List[Vector]:
        """Basis of the kernel, one vector per free column."""
        a, pivots = self._rref()
        free = [c for c in range(self.cols) if c not in pivots]
        basis = []
        for f in free:
            v = [Fraction(0)] * self.cols
            v[f] = Fraction(1)
            for r, p in enumerate(pivots):
                v[p] = -a[r][f]
            basis.append(tuple(v))
        return basis

    def inverse(self) -> "QMatrix":
        if self.rows != self.cols:
            raise ShapeError(f"Cannot invert a {self.rows}x{self.cols} matrix")
        n = self.rows
        augmented = QMatrix(n, 2 * n)
        for i in range(n):
            augmented.data[i] = list(self.data[i]) + [Fraction(int(i == j)) for j in range(n)]
        a, pivots = augmented._rref()
        if pivots[:n] != list(range(n)):
            raise SingularInputError(f"Rational {n}x{n} matrix is singular")
        out = QMatrix(n, n)
        out.data = [r[n:] for r in a]
        return out

    def is_positive_definite(self) -> bool:
        """Symmetric with positive pivots in unpivoted elimination."""
        if not self.is_symmetric():
            return False
        a = [list(r) for r in self.data]
        n = self.rows
        for k in range(n):
            if a[k][k] <= 0:
                return False
            for r in range(k + 1, n):
                factor = a[r][k] / a[k][k]
                a[r] = [x - factor * y for x, y in zip(a[r], a[k])]
        return True
