"""
Exact rational linear algebra

Every coordinate is a fractions.Fraction. Eliminations run fraction-free on
integer-scaled rows (Bareiss), so intermediate entries stay integral and
bounded by the minors of the input.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Iterator, Optional, Sequence, Union

from specialsimplex.errors import DimensionMismatchError, EmptyInputError, InputError, PolytopeError

ExactScalar = Fraction
RationalLike = Union[int, str, Fraction]


def parse_rational(text: str) -> Fraction:
    """Parse "p/q", "p" or an exact decimal string"""
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError) as e:
        raise InputError(f"invalid rational {text!r}") from e


def format_rational(value: Fraction) -> str:
    return str(value)


def to_rational(value: RationalLike) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not coordinates")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return parse_rational(value)
    raise TypeError(f"not an exact rational: {value!r}")


@dataclass(frozen=True, order=True)
class QVector:
    """A point or direction in Q^dim"""

    coords: tuple[Fraction, ...]

    def __post_init__(self):
        if not self.coords:
            raise DimensionMismatchError("a vector needs at least one coordinate")

    @classmethod
    def of(cls, values: Iterable[RationalLike]) -> QVector:
        return cls(tuple(to_rational(v) for v in values))

    @classmethod
    def zero(cls, dim: int) -> QVector:
        return cls((Fraction(0),) * dim)

    @classmethod
    def unit(cls, dim: int, index: int) -> QVector:
        return cls(tuple(Fraction(int(i == index)) for i in range(dim)))

    @property
    def dim(self) -> int:
        return len(self.coords)

    def __len__(self) -> int:
        return len(self.coords)

    def __iter__(self) -> Iterator[Fraction]:
        return iter(self.coords)

    def __getitem__(self, index):
        return self.coords[index]

    def _same_dim(self, other: QVector) -> None:
        if self.dim != other.dim:
            raise DimensionMismatchError(f"dimensions {self.dim} and {other.dim} differ")

    def __add__(self, other: QVector) -> QVector:
        self._same_dim(other)
        return QVector(tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __sub__(self, other: QVector) -> QVector:
        self._same_dim(other)
        return QVector(tuple(a - b for a, b in zip(self.coords, other.coords)))

    def __neg__(self) -> QVector:
        return QVector(tuple(-a for a in self.coords))

    def scale(self, factor: RationalLike) -> QVector:
        factor = to_rational(factor)
        return QVector(tuple(factor * a for a in self.coords))

    def dot(self, other: QVector) -> Fraction:
        self._same_dim(other)
        return sum((a * b for a, b in zip(self.coords, other.coords)), Fraction(0))

    def concat(self, other: QVector) -> QVector:
        return QVector(self.coords + other.coords)

    def pick(self, columns: Sequence[int]) -> QVector:
        return QVector(tuple(self.coords[c] for c in columns))

    def is_zero(self) -> bool:
        return not any(self.coords)

    def __str__(self) -> str:
        return "(" + ", ".join(format_rational(c) for c in self.coords) + ")"


class Side(str, enum.Enum):
    ON = "ON"
    POSITIVE = "POSITIVE"
    NEGATIVE = "NEGATIVE"


@dataclass(frozen=True)
class Hyperplane:
    """{x : <normal, x> = offset}; the positive side is <normal, x> > offset"""

    normal: QVector
    offset: Fraction

    def __post_init__(self):
        if self.normal.is_zero():
            raise PolytopeError("hyperplane normal must be nonzero")
        object.__setattr__(self, "offset", to_rational(self.offset))

    @property
    def dim(self) -> int:
        return self.normal.dim

    def value(self, p: QVector) -> Fraction:
        return self.normal.dot(p) - self.offset

    def contains(self, p: QVector) -> bool:
        return self.value(p) == 0

    def flipped(self) -> Hyperplane:
        return Hyperplane(-self.normal, -self.offset)

    def normalized(self) -> Hyperplane:
        """Same hyperplane and sides, with coprime integer coefficients"""
        coeffs = list(self.normal.coords) + [self.offset]
        denominator = math.lcm(*(c.denominator for c in coeffs))
        ints = [int(c * denominator) for c in coeffs]
        g = math.gcd(*ints)
        ints = [i // g for i in ints]
        return Hyperplane(QVector.of(ints[:-1]), Fraction(ints[-1]))

    def __str__(self) -> str:
        return f"<{self.normal}, x> = {format_rational(self.offset)}"


def side_of(h: Hyperplane, p: QVector) -> Side:
    v = h.value(p)
    if v > 0:
        return Side.POSITIVE
    if v < 0:
        return Side.NEGATIVE
    return Side.ON


def _width(rows: Sequence[Sequence[Fraction]]) -> int:
    widths = {len(r) for r in rows}
    if len(widths) > 1:
        raise DimensionMismatchError(f"rows of mixed dimensions {sorted(widths)}")
    return widths.pop() if widths else 0


def _integer_rows(rows: Sequence[Sequence[Fraction]]) -> tuple[list[list[int]], list[int]]:
    """Scale every row by the lcm of its denominators"""
    ints, scales = [], []
    for row in rows:
        row = [to_rational(v) for v in row]
        d = math.lcm(*(v.denominator for v in row)) if row else 1
        ints.append([int(v * d) for v in row])
        scales.append(d)
    return ints, scales


def _echelon(rows: list[list[int]], ncols: int) -> tuple[list[list[int]], list[int], int]:
    """Bareiss forward elimination with column skipping.

    Returns the nonzero echelon rows, their pivot columns and the number of
    row swaps performed.
    """
    m = [r[:] for r in rows]
    nrows = len(m)
    r, prev, swaps = 0, 1, 0
    pivots: list[int] = []
    for c in range(ncols):
        if r == nrows:
            break
        p = next((i for i in range(r, nrows) if m[i][c] != 0), None)
        if p is None:
            continue
        if p != r:
            m[r], m[p] = m[p], m[r]
            swaps += 1
        pivot_row = m[r]
        piv = pivot_row[c]
        for i in range(r + 1, nrows):
            row = m[i]
            factor = row[c]
            for j in range(c + 1, ncols):
                q, rem = divmod(piv * row[j] - factor * pivot_row[j], prev)
                if rem:
                    raise PolytopeError("fraction-free elimination lost exactness")
                row[j] = q
            row[c] = 0
        prev = piv
        pivots.append(c)
        r += 1
    return m[:r], pivots, swaps


def rank(rows: Sequence[Sequence[RationalLike]]) -> int:
    """Rank of the linear span of the rows"""
    ncols = _width(rows)
    if not rows:
        return 0
    ints, _ = _integer_rows(rows)
    return len(_echelon(ints, ncols)[1])


def determinant(rows: Sequence[Sequence[RationalLike]]) -> Fraction:
    n = len(rows)
    if n == 0:
        return Fraction(1)
    if _width(rows) != n:
        raise DimensionMismatchError("determinant of a non-square matrix")
    ints, scales = _integer_rows(rows)
    echelon, pivots, swaps = _echelon(ints, n)
    if len(pivots) < n:
        return Fraction(0)
    det = Fraction(echelon[-1][-1] * (-1) ** swaps)
    return det / math.prod(scales)


def _back_substitute(
    echelon: list[list[int]], pivots: list[int], x: list[Fraction], ncols: int, rhs_col: Optional[int] = None
) -> None:
    for k in reversed(range(len(pivots))):
        c = pivots[k]
        row = echelon[k]
        s = sum((row[j] * x[j] for j in range(c + 1, ncols) if row[j]), Fraction(0))
        if rhs_col is not None:
            s = row[rhs_col] - s
        else:
            s = -s
        x[c] = s / row[c]


def nullspace(rows: Sequence[Sequence[RationalLike]], ncols: int) -> list[QVector]:
    """Basis of {x : row . x = 0 for all rows}"""
    if rows and _width(rows) != ncols:
        raise DimensionMismatchError(f"expected {ncols} columns")
    if ncols == 0:
        return []
    ints, _ = _integer_rows(rows)
    echelon, pivots, _ = _echelon(ints, ncols) if rows else ([], [], 0)
    pivot_set = set(pivots)
    basis = []
    for f in range(ncols):
        if f in pivot_set:
            continue
        x = [Fraction(0)] * ncols
        x[f] = Fraction(1)
        _back_substitute(echelon, pivots, x, ncols)
        basis.append(QVector(tuple(x)))
    return basis


def solve(matrix: Sequence[Sequence[RationalLike]], rhs: Sequence[RationalLike]) -> Optional[QVector]:
    """One solution of matrix . x = rhs with free variables at zero, or None"""
    if len(matrix) != len(rhs):
        raise DimensionMismatchError("matrix and right-hand side differ in length")
    n = _width(matrix)
    if n == 0:
        raise DimensionMismatchError("no unknowns to solve for")
    augmented = [list(row) + [b] for row, b in zip(matrix, rhs)]
    ints, _ = _integer_rows(augmented)
    echelon, pivots, _ = _echelon(ints, n + 1)
    if pivots and pivots[-1] == n:
        return None
    x = [Fraction(0)] * n
    _back_substitute(echelon, pivots, x, n, rhs_col=n)
    return QVector(tuple(x))


def reduced_basis(rows: Sequence[Sequence[RationalLike]]) -> tuple[list[QVector], list[int]]:
    """Reduced row echelon basis of the row space and its pivot columns.

    The unit vectors outside the pivot columns span a rational complement of
    the row space.
    """
    ncols = _width(rows)
    if not rows or ncols == 0:
        return [], []
    ints, _ = _integer_rows(rows)
    echelon, pivots, _ = _echelon(ints, ncols)
    reduced = [[Fraction(v) for v in row] for row in echelon]
    for k, c in enumerate(pivots):
        lead = reduced[k][c]
        reduced[k] = [v / lead for v in reduced[k]]
    for k in reversed(range(len(pivots))):
        c = pivots[k]
        for i in range(k):
            f = reduced[i][c]
            if f:
                reduced[i] = [a - f * b for a, b in zip(reduced[i], reduced[k])]
    return [QVector(tuple(row)) for row in reduced], pivots


def barycenter(points: Sequence[QVector]) -> QVector:
    if not points:
        raise EmptyInputError("barycenter of no points")
    total = points[0]
    for p in points[1:]:
        total = total + p
    return total.scale(Fraction(1, len(points)))


def affine_dimension(points: Sequence[QVector]) -> int:
    """Dimension of the affine hull; -1 for no points"""
    if not points:
        return -1
    base = points[0]
    return rank([(p - base).coords for p in points[1:]])


def hyperplane_through(
    points: Sequence[QVector], directions: Sequence[QVector] = ()
) -> Optional[Hyperplane]:
    """The unique hyperplane containing the points and parallel to the directions"""
    if not points:
        raise EmptyInputError("a hyperplane needs a point")
    d = points[0].dim
    rows = [list(p.coords) + [Fraction(-1)] for p in points]
    rows += [list(v.coords) + [Fraction(0)] for v in directions]
    kernel = nullspace(rows, d + 1)
    if len(kernel) != 1:
        return None
    vec = kernel[0]
    normal = QVector(vec.coords[:d])
    if normal.is_zero():
        return None
    return Hyperplane(normal, vec.coords[d])


@dataclass(frozen=True)
class AffineSubspace:
    base_point: QVector
    direction_basis: tuple[QVector, ...]

    def __post_init__(self):
        object.__setattr__(self, "direction_basis", tuple(self.direction_basis))
        for v in self.direction_basis:
            self.base_point._same_dim(v)
        if rank([v.coords for v in self.direction_basis]) != len(self.direction_basis):
            raise PolytopeError("direction basis is linearly dependent")

    @property
    def dimension(self) -> int:
        return len(self.direction_basis)

    @property
    def ambient_dim(self) -> int:
        return self.base_point.dim

    @cached_property
    def _reduced(self) -> tuple[list[QVector], list[int]]:
        return reduced_basis([v.coords for v in self.direction_basis])

    @property
    def chart_columns(self) -> tuple[int, ...]:
        """Coordinates that restrict injectively to this subspace"""
        return tuple(self._reduced[1])

    def restrict(self, h: Hyperplane) -> Optional[Hyperplane]:
        """h in chart coordinates, with the same values on the subspace; None if h is constant on it"""
        self.base_point._same_dim(h.normal)
        rows, pivots = self._reduced
        normal = [h.normal.dot(row) for row in rows]
        if not any(normal):
            return None
        offset = h.offset - h.normal.dot(self.base_point) + sum(
            a * self.base_point[c] for a, c in zip(normal, pivots)
        )
        return Hyperplane(QVector.of(normal), offset)

    def contains(self, p: QVector) -> bool:
        residual = p - self.base_point
        for row, c in zip(*self._reduced):
            residual = residual - row.scale(residual[c])
        return residual.is_zero()

    def meet(self, other: AffineSubspace) -> Optional[AffineSubspace]:
        """Intersection of two affine subspaces, or None when disjoint"""
        self.base_point._same_dim(other.base_point)
        a, b = self.direction_basis, other.direction_basis
        if not a and not b:
            return self if self.base_point == other.base_point else None
        if not a:
            return self if other.contains(self.base_point) else None
        if not b:
            return other if self.contains(other.base_point) else None
        columns = list(a) + [-v for v in b]
        matrix = [[col[i] for col in columns] for i in range(self.ambient_dim)]
        rhs = list((other.base_point - self.base_point).coords)
        sol = solve(matrix, rhs)
        if sol is None:
            return None
        point = self.base_point
        for s, v in zip(sol, a):
            point = point + v.scale(s)
        directions = []
        for kernel_vector in nullspace(matrix, len(columns)):
            direction = QVector.zero(self.ambient_dim)
            for s, v in zip(kernel_vector, a):
                direction = direction + v.scale(s)
            directions.append(direction.coords)
        basis, _ = reduced_basis(directions)
        return AffineSubspace(point, tuple(basis))


def affine_hull(points: Sequence[QVector]) -> AffineSubspace:
    if not points:
        raise EmptyInputError("affine hull of no points")
    base = points[0]
    basis, _ = reduced_basis([(p - base).coords for p in points[1:]])
    return AffineSubspace(base, tuple(basis))
