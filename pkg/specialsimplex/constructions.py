"""
Polytope constructions and closed-form f-vectors

Standard generators (cube, cross-polytope, n-gon, simplex), pyramids,
bipyramids, direct sums, the family pyr^i(Σ_j ⊕ Q) with i + j = m, Birkhoff
polytopes, order polytopes and the zonotope that is the basis polytope of
the cube.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from itertools import combinations, permutations, product
from math import comb
from typing import Optional, Sequence

import networkx as nx
from loguru import logger

from specialsimplex.config import get_settings
from specialsimplex.errors import CapacityError, InputError, InternalInconsistencyError
from specialsimplex.exact import Hyperplane, QVector, barycenter
from specialsimplex.polytope import FVector, Polytope, hull, lattice_isomorphic
from specialsimplex.special import (
    Kind,
    SpecialSimplexCertificate,
    classify_meek_wild,
    verify_special_simplex,
)


def simplex(n: int) -> Polytope:
    """conv(0, e_1, ..., e_n)"""
    if n < 1:
        raise InputError(f"simplex dimension must be at least 1, got {n}")
    points = [QVector.zero(n)] + [QVector.unit(n, i) for i in range(n)]
    return hull(points, name=f"simplex{n}")


def cube(n: int) -> Polytope:
    if n < 1:
        raise InputError(f"cube dimension must be at least 1, got {n}")
    return hull([QVector.of(c) for c in product((-1, 1), repeat=n)], name=f"cube{n}")


def cross(n: int) -> Polytope:
    if n < 1:
        raise InputError(f"cross-polytope dimension must be at least 1, got {n}")
    points = []
    for i in range(n):
        points.append(QVector.unit(n, i))
        points.append(-QVector.unit(n, i))
    return hull(points, name=f"cross{n}")


def ngon_points(n: int) -> list[QVector]:
    """n rational points on the unit circle, in counterclockwise order.

    Uses x = (1 - t^2)/(1 + t^2), y = 2t/(1 + t^2) for n increasing rational
    parameters t, placed symmetrically about t = 0.
    """
    points = []
    for k in range(n):
        a = 2 * k - n + 1
        t = Fraction(a, n + 1 - abs(a))
        denominator = 1 + t * t
        points.append(QVector((((1 - t * t) / denominator), (2 * t / denominator))))
    return points


def ngon(n: int) -> Polytope:
    if n < 3:
        raise InputError(f"a polygon needs at least 3 vertices, got {n}")
    return hull(ngon_points(n), name=f"ngon{n}")


GENERATORS = {"cube": cube, "cross": cross, "ngon": ngon, "simplex": simplex}


def generate_standard(kind: str, n: int) -> Polytope:
    try:
        generator = GENERATORS[kind]
    except KeyError:
        raise InputError(f"unknown polytope kind {kind!r}; expected one of {sorted(GENERATORS)}")
    return generator(n)


def pyramid(p: Polytope) -> Polytope:
    """p at height 0 and the apex (0, ..., 0, 1); the apex is the last vertex"""
    zero = QVector.zero(1)
    points = [v.concat(zero) for v in p.vertices]
    points.append(QVector.unit(p.ambient_dim + 1, p.ambient_dim))
    return hull(points, name=f"pyr({p.name})")


def bipyramid(q: Polytope) -> Polytope:
    """q at height 0 with apexes over its barycenter at heights 1 and -1 (the last two vertices)"""
    center = barycenter(list(q.vertices))
    points = [v.concat(QVector.zero(1)) for v in q.vertices]
    points.append(center.concat(QVector.of([1])))
    points.append(center.concat(QVector.of([-1])))
    return hull(points, name=f"bipyr({q.name})")


def direct_sum(a: Polytope, b: Polytope) -> Polytope:
    """hull of (v, 0) and (0, w) after centring both operands at their vertex barycenters.

    The vertices of a come first.
    """
    centers = []
    for operand in (a, b):
        center = barycenter(list(operand.vertices))
        if not all(h.value(center) > 0 for h in operand.facets):
            raise InputError(f"barycenter of {operand.name} is not interior")
        centers.append(center)
    zero_a, zero_b = QVector.zero(a.ambient_dim), QVector.zero(b.ambient_dim)
    points = [(v - centers[0]).concat(zero_b) for v in a.vertices]
    points += [zero_a.concat(w - centers[1]) for w in b.vertices]
    return hull(points, name=f"{a.name}+{b.name}")


def pyramid_fvector(f: FVector) -> FVector:
    entries = (0, *f.entries, 0)
    return FVector(tuple(entries[i] + entries[i + 1] for i in range(len(entries) - 1)))


def direct_sum_fvector(f_q: FVector, k: int) -> FVector:
    """f-vector of Σ_k ⊕ Q from the f-vector of Q"""
    if k < 1:
        raise InputError("simplex dimension must be at least 1")
    q = f_q.dim
    proper = []
    for j in range(q + k):
        total = 0
        for r in range(-1, q):
            l = j - 1 - r
            if -1 <= l <= k - 1 and (r, l) != (-1, -1):
                total += f_q.f(r) * comb(k + 1, l + 1)
        proper.append(total)
    return FVector.from_proper(proper)


def bipyramid_fvector(f_q: FVector) -> FVector:
    return direct_sum_fvector(f_q, 1)


def cube_fvector(n: int) -> FVector:
    return FVector.from_proper([comb(n, i) * 2 ** (n - i) for i in range(n)])


def cube_basis_fvector(n: int) -> FVector:
    """Recursion f_i(Q_n) = f_i(cube_{n-1}) + f_i(Q_{n-1}) + f_{i-1}(Q_{n-1})"""
    if n < 2:
        raise InputError("the cube basis zonotope needs n >= 2")
    if n == 2:
        return FVector((1, 2, 1))
    previous = cube_basis_fvector(n - 1).proper
    cube_counts = cube_fvector(n - 1).proper
    proper = []
    for i in range(n - 1):
        count = cube_counts[i]
        if i < len(previous):
            count += previous[i]
        if 1 <= i <= len(previous):
            count += previous[i - 1]
        proper.append(count)
    return FVector.from_proper(proper)


@dataclass(frozen=True)
class Construction:
    polytope: Polytope
    simplex: Optional[tuple[int, ...]] = None
    certificate: Optional[SpecialSimplexCertificate] = None
    predicted: Optional[FVector] = None


@dataclass(frozen=True)
class MeekFamilyMember:
    i: int
    j: int
    polytope: Polytope
    expected_fvector: FVector
    certificate: SpecialSimplexCertificate


def _certify(p: Polytope, simplex_vertices: Sequence[int]) -> SpecialSimplexCertificate:
    result = verify_special_simplex(p, simplex_vertices)
    if not result:
        raise InternalInconsistencyError(
            f"designated simplex {tuple(simplex_vertices)} of {p.name} is not special: {result.reason}"
        )
    return result


def meek_family(q: Polytope, m: int) -> list[MeekFamilyMember]:
    """pyr^i(Σ_j ⊕ Q) for j >= 1 and i + j = m, ordered by (i, j)"""
    if m < 1:
        raise InputError("the special simplex dimension m must be at least 1")
    members = []
    for i in range(m):
        j = m - i
        p = direct_sum(simplex(j), q)
        designated = list(range(j + 1))
        expected = direct_sum_fvector(q.fvector, j)
        for _ in range(i):
            p = pyramid(p)
            designated.append(p.num_vertices - 1)
            expected = pyramid_fvector(expected)
        p = p.renamed(f"pyr^{i}(simplex{j}+{q.name})")
        cert = _certify(p, designated)
        if p.fvector != expected:
            raise InternalInconsistencyError(f"{p.name} has f-vector {p.fvector}, expected {expected}")
        kind = classify_meek_wild(p, cert).kind
        if kind is not Kind.MEEK:
            raise InternalInconsistencyError(f"{p.name} classified {kind.value}")
        members.append(MeekFamilyMember(i, j, p, expected, cert))
    for a, b in combinations(members, 2):
        if lattice_isomorphic(a.polytope.lattice, b.polytope.lattice):
            raise InternalInconsistencyError(f"{a.polytope.name} and {b.polytope.name} are isomorphic")
    logger.debug("meek family of {} with m={}: {} members", q.name, m, len(members))
    return members


def birkhoff(n: int) -> Construction:
    """Permutation matrices flattened row by row; the cyclic shifts form a special (n-1)-simplex"""
    if n < 2:
        raise InputError(f"Birkhoff polytopes need n >= 2, got {n}")
    limit = get_settings().max_birkhoff_n
    if n > limit:
        raise CapacityError("Birkhoff polytope", n, limit, "max_birkhoff_n")
    perms = list(permutations(range(n)))
    vertices = [QVector.of([int(perm[i] == j) for i in range(n) for j in range(n)]) for perm in perms]
    name = f"birkhoff{n}"
    if n == 2:
        p = hull(vertices, name=name)
    else:
        facets = [Hyperplane(QVector.unit(n * n, c), 0) for c in range(n * n)]
        p = Polytope.from_representation(vertices, facets, name=name)
    shifts = sorted(perms.index(tuple((i + k) % n for i in range(n))) for k in range(n))
    return Construction(p, tuple(shifts), _certify(p, shifts))


@dataclass(frozen=True, eq=False)
class Poset:
    """A finite poset; edges of `order` point from smaller to larger elements"""

    elements: tuple[str, ...]
    order: nx.DiGraph

    @classmethod
    def from_covers(cls, elements: Sequence[str], covers: Sequence[Sequence[str]]) -> Poset:
        elements = tuple(str(e) for e in elements)
        if len(set(elements)) != len(elements):
            raise InputError("poset elements must be distinct")
        g = nx.DiGraph()
        g.add_nodes_from(elements)
        for pair in covers:
            if len(pair) != 2 or any(str(x) not in g for x in pair):
                raise InputError(f"cover relation {pair} names unknown elements")
            a, b = (str(x) for x in pair)
            if a == b:
                raise InputError(f"cover relation {pair} is reflexive")
            g.add_edge(a, b)
        if not nx.is_directed_acyclic_graph(g):
            raise InputError("cover relations contain a cycle")
        return cls(elements, nx.transitive_closure_dag(g))

    def leq(self, a: str, b: str) -> bool:
        return a == b or self.order.has_edge(a, b)

    @property
    def relations(self) -> list[list[bool]]:
        return [[self.leq(a, b) for b in self.elements] for a in self.elements]

    @cached_property
    def covers(self) -> nx.DiGraph:
        return nx.transitive_reduction(self.order)

    @property
    def minimal(self) -> list[str]:
        return [e for e in self.elements if self.order.in_degree(e) == 0]

    @property
    def maximal(self) -> list[str]:
        return [e for e in self.elements if self.order.out_degree(e) == 0]

    def maximal_chains(self) -> list[list[str]]:
        chains = []
        tops = set(self.maximal)
        for low in self.minimal:
            if low in tops:
                chains.append([low])
            else:
                chains.extend(nx.all_simple_paths(self.covers, low, tops))
        return chains

    @property
    def is_graded(self) -> bool:
        return len({len(c) for c in self.maximal_chains()}) == 1

    @cached_property
    def rank(self) -> dict[str, int]:
        """Length of the longest chain ending at each element"""
        rank = {}
        for e in nx.topological_sort(self.covers):
            rank[e] = max((rank[d] + 1 for d in self.covers.predecessors(e)), default=0)
        return rank

    def filters(self) -> list[frozenset[str]]:
        """Upward-closed subsets, in order of their bitmask over the element list"""
        result = []
        for mask in range(2 ** len(self.elements)):
            chosen = frozenset(e for k, e in enumerate(self.elements) if mask >> k & 1)
            if all(b in chosen for a in chosen for b in self.order.successors(a)):
                result.append(chosen)
        return result


def order_polytope(omega: Poset) -> Construction:
    """Characteristic vectors of filters; graded posets get their rank-level filters designated"""
    limit = get_settings().max_poset_elements
    if len(omega.elements) > limit:
        raise CapacityError("order polytope", len(omega.elements), limit, "max_poset_elements")
    n = len(omega.elements)
    position = {e: k for k, e in enumerate(omega.elements)}
    filters = omega.filters()
    vertices = [QVector.of([int(e in f) for e in omega.elements]) for f in filters]
    facets = []
    for e in omega.minimal:
        facets.append(Hyperplane(QVector.unit(n, position[e]), 0))
    for e in omega.maximal:
        facets.append(Hyperplane(-QVector.unit(n, position[e]), -1))
    for a, b in omega.covers.edges:
        facets.append(Hyperplane(QVector.unit(n, position[b]) - QVector.unit(n, position[a]), 0))
    p = Polytope.from_representation(vertices, facets, name="order(" + ",".join(omega.elements) + ")")
    if not omega.is_graded:
        return Construction(p)
    top = max(omega.rank.values())
    designated = sorted(
        filters.index(frozenset(e for e in omega.elements if omega.rank[e] >= t))
        for t in range(top + 2)
    )
    return Construction(p, tuple(designated), _certify(p, designated))


def cube_basis_zonotope(n: int) -> Construction:
    """The Minkowski sum of cube(n-1) and the segment [0, (1, ..., 1)]"""
    if n < 2:
        raise InputError("the cube basis zonotope needs n >= 2")
    base = cube(n - 1).vertices
    ones = QVector.of([1] * (n - 1))
    points = list(base) + [v + ones for v in base]
    return Construction(hull(points, name=f"zonotope{n}"), predicted=cube_basis_fvector(n))
