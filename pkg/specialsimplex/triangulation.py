"""
Reverse lexicographic (pulling) triangulations and simplicial joins
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from math import factorial
from typing import Mapping, Optional, Sequence, Union

from loguru import logger

from specialsimplex.errors import InputError, InternalInconsistencyError, JoinError
from specialsimplex.exact import QVector, affine_dimension, affine_hull, determinant, nullspace
from specialsimplex.polytope import PolytopalComplex, Polytope, subcomplex_excluding
from specialsimplex.special import SpecialSimplexCertificate

Source = Union[Polytope, PolytopalComplex]


@dataclass(frozen=True, eq=False)
class Triangulation:
    cells: tuple[frozenset[int], ...]
    points: Mapping[int, QVector]
    ordering: tuple[int, ...]
    dim: int
    source: Optional[Source] = field(default=None, repr=False)

    @classmethod
    def empty(cls) -> Triangulation:
        """The triangulation of the empty complex, neutral for joins"""
        return cls((frozenset(),), {}, (), -1)

    @property
    def is_empty(self) -> bool:
        return self.cells == (frozenset(),)

    def cell_lists(self) -> list[list[int]]:
        return sorted(sorted(c) for c in self.cells)


def _sorted_cells(cells) -> tuple[frozenset[int], ...]:
    return tuple(sorted(cells, key=sorted))


def rlt(source: Source, ordering: Sequence[int]) -> Triangulation:
    """Pull the last vertex of the ordering, recursively on every maximal face"""
    if isinstance(source, Polytope):
        lattice = source.lattice
        maximal = [frozenset(range(source.num_vertices))]
        dims, facets_of = lattice.dims, lattice.facets_of
        points = dict(enumerate(source.vertices))
        dim = source.intrinsic_dim
    else:
        maximal = list(source.maximal_faces)
        dims, facets_of = source.face_dims, source.facets_of
        points = {i: source.points[i] for i in source.vertex_indices}
        dim = source.dimension
    ordering = tuple(ordering)
    if sorted(ordering) != sorted(points):
        raise InputError(f"ordering {ordering} is not a permutation of the vertices {sorted(points)}")
    position = {v: k for k, v in enumerate(ordering)}
    memo: dict[frozenset[int], list[frozenset[int]]] = {}

    def cells_of(face: frozenset[int]) -> list[frozenset[int]]:
        if face in memo:
            return memo[face]
        if len(face) == dims[face] + 1:
            result = [face]
        else:
            apex = max(face, key=position.__getitem__)
            result = [
                cell | {apex}
                for g in facets_of(face) if apex not in g
                for cell in cells_of(g)
            ]
        memo[face] = result
        return result

    cells = set()
    for face in maximal:
        cells.update(cells_of(face))
    for cell in cells:
        if affine_dimension([points[i] for i in sorted(cell)]) != len(cell) - 1:
            raise InternalInconsistencyError(f"pulling produced a degenerate cell {sorted(cell)}")
    logger.debug("rlt: {} cells from {} memoised faces", len(cells), len(memo))
    return Triangulation(_sorted_cells(cells), points, ordering, dim, source)


def simplicial_join(t1: Triangulation, t2: Triangulation) -> Triangulation:
    if t1.is_empty:
        return t2
    if t2.is_empty:
        return t1
    if set(t1.points) & set(t2.points):
        raise JoinError("the triangulations share vertices")
    pts1, pts2 = list(t1.points.values()), list(t2.points.values())
    if affine_dimension(pts1 + pts2) < affine_dimension(pts1) + affine_dimension(pts2):
        raise JoinError("the affine hulls meet in more than a point")
    points = {**t1.points, **t2.points}
    cells = []
    for c1 in t1.cells:
        for c2 in t2.cells:
            cell = c1 | c2
            if affine_dimension([points[i] for i in sorted(cell)]) != len(cell) - 1:
                raise JoinError(f"joined cell {sorted(cell)} is degenerate")
            cells.append(cell)
    return Triangulation(_sorted_cells(cells), points, t1.ordering + t2.ordering, t1.dim + t2.dim + 1)


@dataclass(frozen=True)
class JoinStructureReport:
    passes: bool
    full_cells: int
    base_cells: int
    bijection: tuple[tuple[tuple[int, ...], tuple[int, ...]], ...]
    unmatched: tuple[tuple[int, ...], ...] = ()


def join_structure_check(
    p: Polytope, cert: SpecialSimplexCertificate, rest_order: Optional[Sequence[int]] = None
) -> JoinStructureReport:
    """Compare rlt(P) for a simplex-last ordering with the join of Σ and rlt(F(P)\\V(Σ))"""
    simplex = cert.simplex_vertices
    rest = tuple(i for i in range(p.num_vertices) if i not in cert.simplex)
    rest_order = rest if rest_order is None else tuple(rest_order)
    if sorted(rest_order) != list(rest):
        raise InputError("rest ordering must be a permutation of the non-simplex vertices")
    full = rlt(p, rest_order + simplex)
    if rest:
        base = rlt(subcomplex_excluding(p.lattice, simplex), rest_order)
    else:
        base = Triangulation.empty()
    expected = {cell | cert.simplex: cell for cell in base.cells}
    bijection = tuple(
        (tuple(sorted(c)), tuple(sorted(expected[c]))) for c in full.cells if c in expected
    )
    unmatched = tuple(tuple(sorted(c)) for c in full.cells if c not in expected)
    passes = not unmatched and len(full.cells) == len(expected)
    if not passes:
        logger.warning("join structure of {} with simplex {} failed", p.name, simplex)
    return JoinStructureReport(passes, len(full.cells), len(base.cells), bijection, unmatched)


def _chart(t: Triangulation) -> tuple[tuple[int, ...], int]:
    if isinstance(t.source, Polytope):
        return t.source.chart_columns, t.source.intrinsic_dim
    aff = affine_hull(list(t.points.values()))
    return aff.chart_columns, aff.dimension


def triangulation_volume(t: Triangulation) -> Fraction:
    """Sum of |det| / d! over the cells, measured in the chart of the source's affine hull"""
    columns, d = _chart(t)
    if d < 1:
        raise InputError("volume needs a source of dimension at least 1")
    total = Fraction(0)
    for cell in t.cells:
        if len(cell) != d + 1:
            raise InputError(f"cell {sorted(cell)} is not {d}-dimensional")
        pts = [t.points[i].pick(columns) for i in sorted(cell)]
        det = determinant([(q - pts[0]).coords for q in pts[1:]])
        if det == 0:
            raise InputError(f"cell {sorted(cell)} is flat")
        total += abs(det)
    return total / factorial(d)


def _has_crossing_circuit(a: frozenset[int], b: frozenset[int], points: Mapping[int, QVector]) -> bool:
    """Is there an affine circuit with positive part in a and negative part in b?"""
    support = sorted(a | b)
    for size in range(2, len(support) + 1):
        for subset in combinations(support, size):
            pts = [points[i] for i in subset]
            if affine_dimension(pts) != size - 2:
                continue
            if any(affine_dimension(pts[:k] + pts[k + 1:]) != size - 2 for k in range(size)):
                continue
            rows = [[q[c] for q in pts] for c in range(pts[0].dim)] + [[1] * size]
            kernel = nullspace(rows, size)
            if len(kernel) != 1:
                continue
            weights = dict(zip(subset, kernel[0]))
            for sign in (1, -1):
                positive = {i for i, w in weights.items() if sign * w > 0}
                negative = {i for i, w in weights.items() if sign * w < 0}
                if positive <= a and negative <= b:
                    return True
    return False


def cells_meet_properly(t: Triangulation) -> bool:
    """Every two cells intersect in a common face (no crossing affine circuit)"""
    for a, b in combinations(t.cells, 2):
        if _has_crossing_circuit(a, b, t.points):
            return False
    return True
