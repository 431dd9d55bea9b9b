"""
Special simplices: certification, search, basis polytopes and meek/wild classification

A simplex on m+1 vertices of P is special when every facet of P contains
exactly m of them. Projecting P along the directions of its affine hull
gives the basis polytope Q, whose boundary is combinatorially the complex
of faces of P avoiding the simplex.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Mapping, Optional, Sequence, Union

import networkx as nx
from loguru import logger

from specialsimplex.config import get_settings
from specialsimplex.errors import CapacityError, InputError, InternalInconsistencyError
from specialsimplex.exact import (
    AffineSubspace,
    QVector,
    RationalLike,
    affine_dimension,
    affine_hull,
    barycenter,
    reduced_basis,
    to_rational,
)
from specialsimplex.polytope import (
    Polytope,
    boundary_complex,
    hull,
    lattice_isomorphic,
    subcomplex_excluding,
)


@dataclass(frozen=True)
class SpecialSimplexCertificate:
    simplex_vertices: tuple[int, ...]
    m: int
    missed_vertex_per_facet: Mapping[int, int] = field(hash=False)

    @property
    def simplex(self) -> frozenset[int]:
        return frozenset(self.simplex_vertices)


@dataclass(frozen=True)
class SimplexRejection:
    reason: str
    facet: Optional[int] = None

    def __bool__(self) -> bool:
        return False


@dataclass(frozen=True)
class SpecialSimplexSearch:
    certificates: tuple[SpecialSimplexCertificate, ...]
    is_simplex: bool

    def __iter__(self):
        return iter(self.certificates)

    def __len__(self) -> int:
        return len(self.certificates)

    def __getitem__(self, index: int) -> SpecialSimplexCertificate:
        return self.certificates[index]


SimplexLike = Union[SpecialSimplexCertificate, Iterable[int]]


def _simplex_of(s: SimplexLike) -> tuple[int, ...]:
    if isinstance(s, SpecialSimplexCertificate):
        return s.simplex_vertices
    return tuple(sorted(set(s)))


def verify_special_simplex(
    p: Polytope, s: Iterable[int]
) -> Union[SpecialSimplexCertificate, SimplexRejection]:
    simplex = tuple(sorted(set(s)))
    if len(simplex) < 2:
        raise InputError("a special simplex needs at least two vertices")
    if not all(0 <= v < p.num_vertices for v in simplex):
        raise InputError(f"vertex indices {simplex} out of range")
    if affine_dimension(p.points(simplex)) != len(simplex) - 1:
        return SimplexRejection("vertices are affinely dependent")
    missed = {}
    for f, on in enumerate(p.incidence):
        outside = [v for v in simplex if v not in on]
        if len(outside) != 1:
            return SimplexRejection(
                f"facet {f} contains {len(simplex) - len(outside)} of the {len(simplex)} vertices",
                facet=f,
            )
        missed[f] = outside[0]
    return SpecialSimplexCertificate(simplex, len(simplex) - 1, missed)


def compatibility_graph(p: Polytope) -> nx.Graph:
    """u ~ v iff no facet omits both"""
    g = nx.Graph()
    g.add_nodes_from(range(p.num_vertices))
    for u in range(p.num_vertices):
        for v in range(u + 1, p.num_vertices):
            if all(u in on or v in on for on in p.incidence):
                g.add_edge(u, v)
    return g


def find_special_simplices(p: Polytope) -> SpecialSimplexSearch:
    limit = get_settings().max_search_vertices
    if p.num_vertices > limit:
        raise CapacityError("special simplex search", p.num_vertices, limit, "max_search_vertices")
    # a special simplex is a clique no vertex can extend, since no vertex lies on every facet
    cliques = sorted(tuple(sorted(c)) for c in nx.find_cliques(compatibility_graph(p)) if len(c) >= 2)
    certificates = []
    for clique in cliques:
        if p.is_simplex and len(clique) == p.num_vertices:
            continue
        result = verify_special_simplex(p, clique)
        if result:
            certificates.append(result)
        else:
            logger.debug("clique {} of {} rejected: {}", clique, p.name, result.reason)
    logger.debug("{}: {} maximal cliques, {} special simplices", p.name, len(cliques), len(certificates))
    return SpecialSimplexSearch(tuple(certificates), p.is_simplex)


@dataclass(frozen=True)
class QuotientProjection:
    """Linear projection whose kernel is spanned by the rows of a reduced basis.

    Images are expressed in the coordinates outside the pivot columns, a
    rational complement of the kernel.
    """

    kernel_rows: tuple[QVector, ...]
    pivots: tuple[int, ...]
    ambient_dim: int

    @property
    def kept_columns(self) -> tuple[int, ...]:
        return tuple(c for c in range(self.ambient_dim) if c not in self.pivots)

    @property
    def kernel_dim(self) -> int:
        return len(self.kernel_rows)

    def along_fibre_to(self, x: QVector, anchor: QVector) -> QVector:
        """The point of x + kernel agreeing with anchor on the pivot columns"""
        for row, c in zip(self.kernel_rows, self.pivots):
            x = x - row.scale(x[c] - anchor[c])
        return x

    def __call__(self, x: QVector) -> QVector:
        kept = self.kept_columns
        if not kept:
            # the zero space, represented in Q^1
            return QVector.zero(1)
        return self.along_fibre_to(x, QVector.zero(self.ambient_dim)).pick(kept)


def simplex_projection(p: Polytope, simplex: Sequence[int]) -> QuotientProjection:
    pts = p.points(simplex)
    rows, pivots = reduced_basis([(v - pts[0]).coords for v in pts[1:]])
    return QuotientProjection(tuple(rows), tuple(pivots), p.ambient_dim)


@dataclass(frozen=True)
class _Quotient:
    projection: QuotientProjection
    q: Polytope
    vertex_map: Optional[dict[int, int]]
    boundary_matches: bool


@lru_cache(maxsize=512)
def _quotient(p: Polytope, simplex: tuple[int, ...]) -> _Quotient:
    proj = simplex_projection(p, simplex)
    rest = [i for i in range(p.num_vertices) if i not in simplex]
    if not rest:
        q = hull([proj(p.vertices[simplex[0]])], name=f"basis of {p.name}")
        return _Quotient(proj, q, {}, True)
    images = [proj(p.vertices[i]) for i in rest]
    q = hull(images, name=f"basis of {p.name}")
    vertex_map: dict[int, int] = {}
    for i, image in zip(rest, images):
        j = q.index_of(image)
        if j is None or j in vertex_map.values():
            logger.debug("vertex {} of {} does not map to its own vertex of Q", i, p.name)
            return _Quotient(proj, q, None, False)
        vertex_map[i] = j
    avoiding = subcomplex_excluding(p.lattice, simplex)
    mapped = {frozenset(vertex_map[i] for i in f) for f in avoiding.faces}
    matches = mapped == set(boundary_complex(q.lattice).faces)
    return _Quotient(proj, q, vertex_map, matches)


@dataclass(frozen=True)
class BasisPolytopeResult:
    q: Polytope
    projection: QuotientProjection
    vertex_map: dict[int, int]
    subcomplex_dim: int


def basis_polytope(p: Polytope, cert: SpecialSimplexCertificate) -> BasisPolytopeResult:
    quotient = _quotient(p, cert.simplex_vertices)
    if quotient.vertex_map is None or not quotient.boundary_matches:
        raise InternalInconsistencyError(
            f"boundary of the basis polytope of {p.name} does not match the faces avoiding {cert.simplex_vertices}"
        )
    rest = [i for i in range(p.num_vertices) if i not in cert.simplex]
    return BasisPolytopeResult(
        quotient.q, quotient.projection, quotient.vertex_map, affine_dimension(p.points(rest))
    )


@dataclass(frozen=True)
class EquivalenceReport:
    condition_a: bool
    condition_b: bool
    trivial: bool = False


def equivalence_report(p: Polytope, cert: SimplexLike) -> EquivalenceReport:
    """Interior projection point (a) and boundary isomorphism (b) for a vertex set"""
    simplex = _simplex_of(cert)
    if len(simplex) == p.num_vertices:
        return EquivalenceReport(True, True, trivial=True)
    quotient = _quotient(p, simplex)
    q = quotient.q
    center = quotient.projection(p.vertices[simplex[0]])
    condition_a = (
        q.intrinsic_dim == p.intrinsic_dim - (len(simplex) - 1)
        and affine_hull(list(q.vertices)).contains(center)
        and all(h.value(center) > 0 for h in q.facets)
    )
    return EquivalenceReport(condition_a, quotient.boundary_matches)


class Kind(str, enum.Enum):
    MEEK = "MEEK"
    WILD = "WILD"
    MEEK_EQUIVALENT = "MEEK_EQUIVALENT"


@dataclass(frozen=True)
class Classification:
    kind: Kind
    dim_A: int
    dim_Q: int


@dataclass(frozen=True)
class VertexProjection:
    mapping: dict[int, int]
    target: Polytope
    simplex_images: tuple[int, ...]
    basis: BasisPolytopeResult
    meek: bool


def _dilate(points: Sequence[QVector], epsilon: Fraction) -> list[QVector]:
    w = barycenter(points)
    return [w + (v - w).scale(1 + epsilon) for v in points]


def _flattened(p: Polytope, cert: SpecialSimplexCertificate, basis: BasisPolytopeResult) -> dict[int, QVector]:
    """Non-simplex vertices moved along their fibres onto the complement through the simplex barycenter"""
    w = barycenter(p.points(cert.simplex_vertices))
    return {
        i: basis.projection.along_fibre_to(v, w)
        for i, v in enumerate(p.vertices) if i not in cert.simplex
    }


def vertex_projection(
    p: Polytope, cert: SpecialSimplexCertificate, epsilon: Optional[RationalLike] = None
) -> VertexProjection:
    """Bijection V(P) -> V(Σ ⊕ Q) realised inside the space of P"""
    eps = get_settings().epsilon if epsilon is None else to_rational(epsilon)
    if eps <= 0:
        raise InputError("epsilon must be positive")
    basis = basis_polytope(p, cert)
    simplex = cert.simplex_vertices
    rest = [i for i in range(p.num_vertices) if i not in cert.simplex]
    meek = bool(rest) and basis.subcomplex_dim == basis.q.intrinsic_dim
    images: dict[int, QVector] = dict(zip(simplex, _dilate(p.points(simplex), eps)))
    if meek:
        images.update((i, p.vertices[i]) for i in rest)
    else:
        images.update(_flattened(p, cert, basis))
    target = hull([images[i] for i in range(p.num_vertices)], name=f"projection of {p.name}")
    mapping = {i: target.index_of(images[i]) for i in range(p.num_vertices)}
    if target.num_vertices != p.num_vertices or None in mapping.values():
        raise InternalInconsistencyError(f"vertex projection of {p.name} is not bijective")
    if basis.q.intrinsic_dim > 0 and not _is_simplex_sum(target, mapping, simplex, basis):
        raise InternalInconsistencyError(f"vertex projection of {p.name} is not a direct sum with the simplex")
    return VertexProjection(mapping, target, tuple(mapping[i] for i in simplex), basis, meek)


def _is_simplex_sum(
    target: Polytope, mapping: Mapping[int, int], simplex: Sequence[int], basis: BasisPolytopeResult
) -> bool:
    """Facets of the target are exactly the joins of simplex facets with Q facets"""
    back = {j: i for i, j in basis.vertex_map.items()}
    expected = set()
    for s in simplex:
        simplex_facet = frozenset(mapping[t] for t in simplex if t != s)
        for g in basis.q.incidence:
            expected.add(simplex_facet | frozenset(mapping[back[j]] for j in g))
    return expected == set(target.incidence)


def meek_representative(p: Polytope, cert: SpecialSimplexCertificate) -> Polytope:
    return vertex_projection(p, cert).target


def complement_meet(p: Polytope, cert: SpecialSimplexCertificate) -> Optional[AffineSubspace]:
    """aff(simplex) meet aff(remaining vertices); None when they miss or nothing remains"""
    rest = [i for i in range(p.num_vertices) if i not in cert.simplex]
    if not rest:
        return None
    return affine_hull(p.points(cert.simplex_vertices)).meet(affine_hull(p.points(rest)))


def classify_meek_wild(p: Polytope, cert: SpecialSimplexCertificate) -> Classification:
    basis = basis_polytope(p, cert)
    dim_q = basis.q.intrinsic_dim
    if len(cert.simplex_vertices) == p.num_vertices:
        return Classification(Kind.MEEK, dim_q, dim_q)
    dim_a = basis.subcomplex_dim
    meet = complement_meet(p, cert)
    # meek exactly when the two affine hulls cross in a single point
    if (meet is not None and meet.dimension == 0) != (dim_a == dim_q):
        raise InternalInconsistencyError(
            f"{p.name}: dim_A={dim_a}, dim_Q={dim_q} disagrees with the affine hull intersection {meet}"
        )
    if dim_a == dim_q:
        return Classification(Kind.MEEK, dim_a, dim_q)
    representative = meek_representative(p, cert)
    if lattice_isomorphic(p.lattice, representative.lattice):
        kind = Kind.MEEK_EQUIVALENT
    else:
        kind = Kind.WILD
    logger.debug("{} with simplex {}: {} (dim_A={}, dim_Q={})", p.name, cert.simplex_vertices, kind.value, dim_a, dim_q)
    return Classification(kind, dim_a, dim_q)


def flatten_onto_complement(p: Polytope, cert: SpecialSimplexCertificate) -> Polytope:
    """hull of the simplex and the non-simplex vertices flattened onto a complement through its barycenter"""
    basis = basis_polytope(p, cert)
    moved = _flattened(p, cert, basis)
    points = [moved.get(i, v) for i, v in enumerate(p.vertices)]
    return hull(points, name=f"flattened {p.name}")


@dataclass(frozen=True)
class WeaklyHannarResult:
    weakly_hannar: bool
    pairs: tuple[SpecialSimplexCertificate, ...] = ()
    witness_vertex: Optional[int] = None
    failing_facet: Optional[int] = None

    def __bool__(self) -> bool:
        return self.weakly_hannar


def weakly_hannar_pairs(p: Polytope) -> WeaklyHannarResult:
    antipode = {}
    for i, v in enumerate(p.vertices):
        j = p.index_of(-v)
        if j is None:
            return WeaklyHannarResult(False, witness_vertex=i)
        antipode[i] = j
    everything = frozenset(range(p.num_vertices))
    for f, on in enumerate(p.incidence):
        # hull(F ∪ -F) is P iff F ∪ -F already contains every vertex
        if on | {antipode[i] for i in on} != everything:
            return WeaklyHannarResult(False, failing_facet=f)
    pairs = []
    for i, j in sorted(antipode.items()):
        if i < j:
            cert = verify_special_simplex(p, (i, j))
            if not cert:
                raise InternalInconsistencyError(f"antipodal pair {(i, j)} of {p.name} is not special: {cert.reason}")
            pairs.append(cert)
    return WeaklyHannarResult(True, tuple(pairs))
