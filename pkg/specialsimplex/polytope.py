"""
Polytopes: V/H conversion, face lattices, f-vectors and isomorphism tests

Facets are enumerated by brute force over affinely independent d-subsets of
the input inside its affine hull. Every facet is stored with the polytope on
its closed positive side.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property
from itertools import combinations
from typing import Iterable, Mapping, Optional, Sequence

import networkx as nx
from loguru import logger
from networkx.algorithms import isomorphism

from specialsimplex.config import get_settings
from specialsimplex.errors import CapacityError, EmptyInputError, InputError
from specialsimplex.exact import (
    Hyperplane,
    QVector,
    affine_dimension,
    affine_hull,
    hyperplane_through,
    rank,
)


@dataclass(frozen=True, eq=False)
class Polytope:
    vertices: tuple[QVector, ...]
    facets: tuple[Hyperplane, ...]
    incidence: tuple[frozenset[int], ...]
    intrinsic_dim: int
    chart_columns: tuple[int, ...]
    name: str = "polytope"
    labels: Optional[tuple[str, ...]] = None

    @property
    def ambient_dim(self) -> int:
        return self.vertices[0].dim

    @property
    def num_vertices(self) -> int:
        return len(self.vertices)

    @property
    def num_facets(self) -> int:
        return len(self.facets)

    @property
    def is_simplex(self) -> bool:
        return self.num_vertices == self.intrinsic_dim + 1

    @cached_property
    def _index(self) -> dict[QVector, int]:
        return {v: i for i, v in enumerate(self.vertices)}

    def index_of(self, point: QVector) -> Optional[int]:
        return self._index.get(point)

    def chart(self, point: QVector) -> QVector:
        """Coordinates of a point of the affine hull in the hull's own chart"""
        return point.pick(self.chart_columns)

    def lift(self, h: Hyperplane) -> Hyperplane:
        """Ambient hyperplane agreeing with a chart hyperplane on the affine hull"""
        return _lift(h, self.chart_columns, self.ambient_dim)

    def points(self, indices: Iterable[int]) -> list[QVector]:
        return [self.vertices[i] for i in sorted(indices)]

    def renamed(self, name: str) -> Polytope:
        return Polytope(
            self.vertices, self.facets, self.incidence, self.intrinsic_dim,
            self.chart_columns, name, self.labels,
        )

    @cached_property
    def lattice(self) -> FaceLattice:
        return face_lattice(self)

    @property
    def fvector(self) -> FVector:
        return f_vector(self.lattice)

    @classmethod
    def from_representation(
        cls, vertices: Sequence[QVector], facets: Sequence[Hyperplane], name: str = "polytope"
    ) -> Polytope:
        """Build from a known vertex list and facet list, validating them against each other"""
        vertices = tuple(vertices)
        if not vertices:
            raise EmptyInputError("a polytope needs at least one vertex")
        if len(set(vertices)) != len(vertices):
            raise InputError("duplicate vertices")
        aff = affine_hull(list(vertices))
        d = aff.dimension
        if d == 0 and facets:
            raise InputError("a point has no facets")
        incidence, stored = [], []
        for h in facets:
            values = [h.value(v) for v in vertices]
            if any(v < 0 for v in values):
                raise InputError(f"vertices lie on the negative side of facet {h}")
            on = frozenset(i for i, v in enumerate(values) if v == 0)
            if affine_dimension([vertices[i] for i in sorted(on)]) != d - 1:
                raise InputError(f"hyperplane {h} does not cut out a facet")
            if on in incidence:
                raise InputError(f"facet {h} is listed twice")
            incidence.append(on)
            # re-express through the chart so hull and this constructor agree on one form
            stored.append(_lift(aff.restrict(h), aff.chart_columns, aff.ambient_dim))
        if d >= 1:
            for i in range(len(vertices)):
                around = [on for on in incidence if i in on]
                if len(around) < d or frozenset.intersection(*around) != {i}:
                    raise InputError(f"vertex {vertices[i]} is not cut out by the facets")
        return cls(tuple(vertices), tuple(stored), tuple(incidence), d, aff.chart_columns, name)


def _lift(h: Hyperplane, columns: Sequence[int], ambient_dim: int) -> Hyperplane:
    coords = [0] * ambient_dim
    for a, c in zip(h.normal, columns):
        coords[c] = a
    return Hyperplane(QVector.of(coords), h.offset).normalized()


def _enumerate_facets(local: list[QVector], d: int) -> list[tuple[Hyperplane, frozenset[int]]]:
    found: dict[frozenset[int], Hyperplane] = {}
    for subset in combinations(range(len(local)), d):
        if any(on.issuperset(subset) for on in found):
            continue
        h = hyperplane_through([local[i] for i in subset])
        if h is None:
            continue
        values = [h.value(p) for p in local]
        if all(v >= 0 for v in values):
            pass
        elif all(v <= 0 for v in values):
            h = h.flipped()
        else:
            continue
        on = frozenset(i for i, v in enumerate(values) if v == 0)
        found[on] = h
    return [(h, on) for on, h in found.items()]


def hull(points: Sequence[QVector], name: str = "hull") -> Polytope:
    """Convex hull of finitely many rational points"""
    pts = list(dict.fromkeys(points))
    if not pts:
        raise EmptyInputError("hull of no points")
    aff = affine_hull(pts)
    d = aff.dimension
    cols = aff.chart_columns
    if d == 0:
        return Polytope((pts[0],), (), (), 0, cols, name)
    subsets = math.comb(len(pts), d)
    limit = get_settings().max_hull_subsets
    if subsets > limit:
        raise CapacityError("facet enumeration", subsets, limit, "max_hull_subsets")
    local = [p.pick(cols) for p in pts]
    found = _enumerate_facets(local, d)
    keep = [
        i for i in range(len(pts))
        if rank([h.normal.coords for h, on in found if i in on]) == d
    ]
    renumber = {old: new for new, old in enumerate(keep)}
    vertices = tuple(pts[i] for i in keep)
    chart_facets, incidence = [], []
    for h, on in found:
        chart_facets.append(h)
        incidence.append(frozenset(renumber[i] for i in on if i in renumber))
    logger.debug(
        "hull {}: {} points, {} vertices, {} facets in dimension {}",
        name, len(pts), len(vertices), len(found), d,
    )
    ambient = pts[0].dim
    return Polytope(
        vertices, tuple(_lift(h, cols, ambient) for h in chart_facets), tuple(incidence), d, cols, name
    )


@dataclass(frozen=True)
class FVector:
    """Face counts (1, f_0, ..., f_{d-1}, 1)"""

    entries: tuple[int, ...]

    @classmethod
    def from_proper(cls, proper: Sequence[int]) -> FVector:
        return cls((1, *proper, 1))

    @property
    def dim(self) -> int:
        return len(self.entries) - 2

    @property
    def proper(self) -> tuple[int, ...]:
        return self.entries[1:-1]

    def f(self, i: int) -> int:
        """Number of i-dimensional faces, for -1 <= i <= dim"""
        return self.entries[i + 1]

    def euler_holds(self) -> bool:
        d = self.dim
        return sum((-1) ** i * fi for i, fi in enumerate(self.proper)) == 1 - (-1) ** d

    def __str__(self) -> str:
        return "(" + ",".join(str(e) for e in self.entries) + ")"


@dataclass(frozen=True, eq=False)
class FaceLattice:
    polytope: Polytope
    grades: tuple[tuple[frozenset[int], ...], ...]

    @property
    def dim(self) -> int:
        return len(self.grades) - 2

    def faces(self, dim: int) -> tuple[frozenset[int], ...]:
        return self.grades[dim + 1]

    def all_faces(self) -> list[frozenset[int]]:
        return [f for grade in self.grades for f in grade]

    @cached_property
    def dims(self) -> dict[frozenset[int], int]:
        return {f: k - 1 for k, grade in enumerate(self.grades) for f in grade}

    @cached_property
    def covers(self) -> dict[frozenset[int], tuple[frozenset[int], ...]]:
        """Each face mapped to the faces it covers (its facets)"""
        result = {f: () for f in self.grades[0]}
        for k in range(1, len(self.grades)):
            below = self.grades[k - 1]
            for f in self.grades[k]:
                result[f] = tuple(g for g in below if g <= f)
        return result

    def facets_of(self, face: frozenset[int]) -> tuple[frozenset[int], ...]:
        return self.covers[face]


def face_lattice(p: Polytope) -> FaceLattice:
    facet_sets = list(dict.fromkeys(p.incidence))
    seen = set(facet_sets)
    frontier = list(facet_sets)
    while frontier:
        fresh = []
        for f in frontier:
            for g in facet_sets:
                h = f & g
                if h not in seen:
                    seen.add(h)
                    fresh.append(h)
        frontier = fresh
    seen.add(frozenset())
    seen.add(frozenset(range(p.num_vertices)))
    grades: list[list[frozenset[int]]] = [[] for _ in range(p.intrinsic_dim + 2)]
    for face in seen:
        grades[affine_dimension(p.points(face)) + 1].append(face)
    return FaceLattice(p, tuple(tuple(sorted(g, key=sorted)) for g in grades))


def f_vector(l: FaceLattice) -> FVector:
    return FVector(tuple(len(g) for g in l.grades))


@dataclass(frozen=True, eq=False)
class PolytopalComplex:
    """A complex of faces of one parent polytope, keyed by parent vertex indices"""

    faces: frozenset[frozenset[int]]
    face_dims: Mapping[frozenset[int], int]
    points: Mapping[int, QVector]
    lattice: Optional[FaceLattice] = None

    @cached_property
    def maximal_faces(self) -> tuple[frozenset[int], ...]:
        by_size = sorted(self.faces, key=len, reverse=True)
        maximal: list[frozenset[int]] = []
        for f in by_size:
            if not any(f < g for g in maximal):
                maximal.append(f)
        return tuple(sorted(maximal, key=sorted))

    @property
    def dimension(self) -> int:
        return max(self.face_dims.values(), default=-1)

    @property
    def is_pure(self) -> bool:
        return len({self.face_dims[f] for f in self.maximal_faces}) <= 1

    @property
    def vertex_indices(self) -> tuple[int, ...]:
        return tuple(sorted(set().union(*self.faces))) if self.faces else ()

    def face_counts(self) -> tuple[int, ...]:
        counts = [0] * (self.dimension + 1)
        for d in self.face_dims.values():
            counts[d] += 1
        return tuple(counts)

    def facets_of(self, face: frozenset[int]) -> tuple[frozenset[int], ...]:
        if self.lattice is not None:
            return tuple(g for g in self.lattice.facets_of(face) if g)
        d = self.face_dims[face]
        return tuple(sorted((g for g in self.faces if g < face and self.face_dims[g] == d - 1), key=sorted))

    def coordinates(self, face: Iterable[int]) -> list[QVector]:
        return [self.points[i] for i in sorted(face)]


def subcomplex_excluding(l: FaceLattice, banned: Iterable[int]) -> PolytopalComplex:
    """All proper faces of the lattice avoiding the banned vertices"""
    banned = frozenset(banned)
    p = l.polytope
    if not banned <= set(range(p.num_vertices)):
        raise InputError("banned vertices are not vertices of the polytope")
    faces = {
        f: d for f, d in l.dims.items()
        if f and d < l.dim and not (f & banned)
    }
    points = {i: v for i, v in enumerate(p.vertices) if i not in banned}
    return PolytopalComplex(frozenset(faces), faces, points, l)


def boundary_complex(l: FaceLattice) -> PolytopalComplex:
    return subcomplex_excluding(l, ())


@dataclass(frozen=True)
class Isomorphism:
    isomorphic: bool
    vertex_map: Optional[dict[int, int]] = None

    def __bool__(self) -> bool:
        return self.isomorphic


def _check_capacity(size: int) -> None:
    limit = get_settings().max_isomorphism_vertices
    if size > limit:
        raise CapacityError("isomorphism search", size, limit, "max_isomorphism_vertices")


def _incidence_graph(p: Polytope) -> nx.Graph:
    g = nx.Graph()
    g.add_nodes_from((("v", i) for i in range(p.num_vertices)), kind="v")
    g.add_nodes_from((("f", j) for j in range(p.num_facets)), kind="f")
    g.add_edges_from((("v", i), ("f", j)) for j, on in enumerate(p.incidence) for i in on)
    return g


def lattice_isomorphic(a: FaceLattice, b: FaceLattice) -> Isomorphism:
    """Combinatorial equivalence, decided on the vertex-facet incidence graphs"""
    if a.dim != b.dim or f_vector(a) != f_vector(b):
        return Isomorphism(False)
    pa, pb = a.polytope, b.polytope
    _check_capacity(pa.num_vertices)
    if sorted(len(on) for on in pa.incidence) != sorted(len(on) for on in pb.incidence):
        return Isomorphism(False)
    matcher = isomorphism.GraphMatcher(
        _incidence_graph(pa), _incidence_graph(pb),
        node_match=isomorphism.categorical_node_match("kind", None),
    )
    if not matcher.is_isomorphic():
        return Isomorphism(False)
    mapping = {i: j for (kind, i), (_, j) in matcher.mapping.items() if kind == "v"}
    return Isomorphism(True, mapping)


def _hasse_graph(c: PolytopalComplex) -> nx.Graph:
    g = nx.Graph()
    for f, d in c.face_dims.items():
        g.add_node(f, dim=d)
    for f in c.faces:
        g.add_edges_from((f, sub) for sub in c.facets_of(f))
    return g


def complex_isomorphic(a: PolytopalComplex, b: PolytopalComplex) -> Isomorphism:
    """Isomorphism of face posets, witnessed by a vertex bijection"""
    if a.face_counts() != b.face_counts():
        return Isomorphism(False)
    _check_capacity(len(a.vertex_indices))
    matcher = isomorphism.GraphMatcher(
        _hasse_graph(a), _hasse_graph(b),
        node_match=isomorphism.categorical_node_match("dim", None),
    )
    if not matcher.is_isomorphic():
        return Isomorphism(False)
    mapping = {
        next(iter(f)): next(iter(g)) for f, g in matcher.mapping.items() if len(f) == 1
    }
    return Isomorphism(True, mapping)
