"""
Wild polytopes: corresponding hyperplanes, characterization checks,
chord-system enumeration over polygons and f-vector bounds

A wild polytope arises from Σ ⊕ Q by pushing some vertices of Q along the
directions of aff(Σ) into hyperplanes through all but one simplex vertex.
Over a polygon Q every such hyperplane meets Q in a chord, so the
realizable wild polytopes are enumerated from systems of chords.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from itertools import chain, combinations
from typing import Iterator, Optional, Sequence

from loguru import logger

from specialsimplex.config import get_settings
from specialsimplex.constructions import direct_sum_fvector, ngon, simplex
from specialsimplex.errors import CapacityError, DimensionMismatchError, InputError, PolytopeError
from specialsimplex.exact import Hyperplane, QVector, barycenter, hyperplane_through, solve
from specialsimplex.polytope import FVector, Polytope, hull, lattice_isomorphic
from specialsimplex.special import (
    Classification,
    Kind,
    SpecialSimplexCertificate,
    VertexProjection,
    basis_polytope,
    classify_meek_wild,
    flatten_onto_complement,
    verify_special_simplex,
    vertex_projection,
)


@dataclass(frozen=True)
class CorrespondingHyperplane:
    """Ĥ in the space of Σ ⊕ Q for a hyperplane H of P.

    on_target and negative_side hold vertex indices of P; negative_side only
    lists vertices of Q, the part of Q separated by Ĥ.
    """

    source: Hyperplane
    target: Hyperplane
    on_target: frozenset[int]
    negative_side: frozenset[int]
    contains_basis: bool = False

    @property
    def separates_trivially(self) -> bool:
        return not self.negative_side


def _subcomplex_neighbours(p: Polytope, simplex: frozenset[int]) -> dict[int, set[int]]:
    neighbours: dict[int, set[int]] = {i: set() for i in range(p.num_vertices)}
    for edge in p.lattice.faces(1):
        if edge & simplex:
            continue
        a, b = edge
        neighbours[a].add(b)
        neighbours[b].add(a)
    return neighbours


def corresponding_hyperplane(
    p: Polytope,
    cert: SpecialSimplexCertificate,
    h: Hyperplane,
    projection: Optional[VertexProjection] = None,
) -> CorrespondingHyperplane:
    if h.dim != p.ambient_dim:
        raise DimensionMismatchError(f"hyperplane in dimension {h.dim}, polytope in {p.ambient_dim}")
    vp = projection or vertex_projection(p, cert)
    t = vp.target
    image = {i: t.chart(t.vertices[j]) for i, j in vp.mapping.items()}
    on_h = {i for i, v in enumerate(p.vertices) if h.contains(v)}
    simplex_on = [s for s in cert.simplex_vertices if s in on_h]
    missed = [s for s in cert.simplex_vertices if s not in on_h]
    if len(missed) != 1:
        raise InputError(f"hyperplane {h} must miss exactly one simplex vertex, misses {len(missed)}")
    w0 = missed[0]
    rest = [i for i in range(p.num_vertices) if i not in cert.simplex]

    def oriented(local: Optional[Hyperplane]) -> Optional[Hyperplane]:
        if local is None:
            return None
        value = local.value(image[w0])
        if value == 0:
            return None
        return local if value > 0 else local.flipped()

    contains_basis = all(i in on_h for i in rest)
    if contains_basis:
        anchors = [image[i] for i in rest] or [barycenter([image[s] for s in cert.simplex_vertices])]
        directions = [image[s] - image[simplex_on[0]] for s in simplex_on[1:]]
        local = oriented(hyperplane_through(anchors, directions))
        if local is None or any(local.value(image[s]) >= 0 for s in simplex_on):
            raise InputError(f"no hyperplane through Q parallel to the simplex face on {h}")
        found = local
    else:
        inside = [i for i in rest if i in on_h]
        neighbours = _subcomplex_neighbours(p, cert.simplex)
        boundary = [i for i in inside if neighbours[i] - on_h]
        dim_q = vp.basis.q.intrinsic_dim
        face = [image[s] for s in simplex_on]
        candidates = chain(
            combinations(boundary, dim_q),
            (c for c in combinations(inside, dim_q) if not set(c) <= set(boundary)),
        )
        found = None
        for subset in candidates:
            local = oriented(hyperplane_through(face + [image[i] for i in subset]))
            if local is None or any(local.value(image[s]) != 0 for s in simplex_on):
                continue
            if all((local.value(image[i]) <= 0) == (i in on_h) for i in rest):
                found = local
                break
        if found is None:
            raise InputError(f"no corresponding hyperplane exists for {h}")
    target = t.lift(found)
    values = {i: target.value(t.vertices[j]) for i, j in vp.mapping.items()}
    return CorrespondingHyperplane(
        source=h,
        target=target,
        on_target=frozenset(i for i, v in values.items() if v == 0),
        negative_side=frozenset(i for i in rest if values[i] < 0),
        contains_basis=contains_basis,
    )


class ConditionA(str, enum.Enum):
    VERIFIED_BY_CONSTRUCTION = "VERIFIED_BY_CONSTRUCTION"
    NOT_DECIDED = "NOT_DECIDED"


@dataclass(frozen=True)
class FacetCondition:
    facet: int
    corresponding: CorrespondingHyperplane
    condition_b: bool
    condition_c: bool


@dataclass(frozen=True)
class CharacterizationReport:
    condition_a: ConditionA
    facets: tuple[FacetCondition, ...] = ()

    @property
    def passes(self) -> bool:
        return all(f.condition_b and f.condition_c for f in self.facets)

    @property
    def separates_trivially(self) -> bool:
        return all(f.corresponding.separates_trivially for f in self.facets)


def wild_characterization_report(p: Polytope, cert: SpecialSimplexCertificate) -> CharacterizationReport:
    """Check the necessary conditions on every corresponding hyperplane of the facets of P"""
    if not verify_special_simplex(p, cert.simplex_vertices):
        return CharacterizationReport(ConditionA.NOT_DECIDED)
    vp = vertex_projection(p, cert)
    t = vp.target
    simplex_images = [vp.mapping[s] for s in cert.simplex_vertices]
    basis_images = [vp.mapping[i] for i in range(p.num_vertices) if i not in cert.simplex]
    results = []
    for f, h in enumerate(p.facets):
        ch = corresponding_hyperplane(p, cert, h, projection=vp)
        values = [ch.target.value(v) for v in t.vertices]
        bounding = all(v >= 0 for v in values) and (
            frozenset(j for j, v in enumerate(values) if v == 0) in set(t.incidence)
        )
        contains_q = all(values[j] == 0 for j in basis_images)
        swallows_facet = any(
            all(values[j] <= 0 for j in on) and any(values[j] < 0 for j in on)
            for on in t.incidence
        )
        condition_c = sum(1 for j in simplex_images if values[j] > 0) == 1
        results.append(FacetCondition(f, ch, bounding or contains_q or swallows_facet, condition_c))
        if not (results[-1].condition_b and condition_c):
            logger.warning("facet {} of {} fails the wild characterization", f, p.name)
    return CharacterizationReport(ConditionA.VERIFIED_BY_CONSTRUCTION, tuple(results))


@dataclass(frozen=True, order=True)
class Chord:
    """Chord of the polygon between two non-adjacent vertices.

    The covered arc is pushed into the hyperplane through the chord and all
    simplex vertices except the excluded one.
    """

    pair: tuple[int, int]
    arc: tuple[int, ...]
    excluded: int


@dataclass(frozen=True, eq=False)
class WildBlueprint:
    q: Polytope
    k: int
    chords: tuple[Chord, ...]
    result: Optional[Polytope] = field(default=None, repr=False)
    classification: Optional[Classification] = None
    rejection: Optional[str] = None

    @property
    def m(self) -> int:
        return self.q.num_vertices

    @property
    def certificate(self) -> Optional[SpecialSimplexCertificate]:
        if self.result is None:
            return None
        return verify_special_simplex(self.result, tuple(range(self.k + 1))) or None


@dataclass(frozen=True)
class WildEnumeration:
    results: tuple[WildBlueprint, ...]
    anchor: WildBlueprint
    meek_equivalent: int
    rejected: tuple[WildBlueprint, ...]
    systems: int


def polygon_chords(m: int, k: int) -> list[Chord]:
    chords = []
    for a in range(m):
        for b in range(a + 2, m):
            if b - a > m - 2:
                continue
            inner = tuple(range(a + 1, b))
            outer = tuple(range(b + 1, m)) + tuple(range(a))
            for arc in (inner, outer):
                chords.extend(Chord((a, b), arc, w0) for w0 in range(k + 1))
    return chords


def _constraint_counts(system: Sequence[Chord], m: int) -> list[int]:
    """For each covered vertex: covering chords plus chords ending there; 0 when uncovered"""
    covering = [0] * m
    ending = [0] * m
    for chord in system:
        for v in chord.arc:
            covering[v] += 1
        for v in chord.pair:
            ending[v] += 1
    return [c + e if c else 0 for c, e in zip(covering, ending)]


def chord_systems(m: int, k: int, max_chords: Optional[int] = None) -> Iterator[tuple[Chord, ...]]:
    """Admissible chord systems in a fixed order, the empty system first"""
    chords = polygon_chords(m, k)
    limit = len(chords) if max_chords is None else max_chords

    def extend(system: tuple[Chord, ...], start: int) -> Iterator[tuple[Chord, ...]]:
        yield system
        if len(system) == limit:
            return
        for i in range(start, len(chords)):
            candidate = system + (chords[i],)
            if max(_constraint_counts(candidate, m)) <= k:
                yield from extend(candidate, i + 1)

    yield from extend((), 0)


def _foot_point(q_points: Sequence[QVector], system: Sequence[Chord]) -> Optional[QVector]:
    """An interior point of Q on the uncovered side of every chord"""
    covered = {v for chord in system for v in chord.arc}
    ends = {v for chord in system for v in chord.pair}
    free = [q for i, q in enumerate(q_points) if i not in covered and i not in ends]
    center = barycenter(list(q_points))
    candidates = [center]
    if free:
        candidates.insert(0, barycenter([center, barycenter(free)]))
    for x in candidates:
        ok = True
        for chord in system:
            line = hyperplane_through([q_points[v] for v in chord.pair])
            side = line.value(x) * line.value(q_points[chord.arc[0]])
            if side >= 0:
                ok = False
                break
        if ok:
            return x
    return None


SCALES = (1, 4, 16, 64)


def _place(
    q_points: Sequence[QVector], k: int, system: Sequence[Chord], foot: QVector, scale: int
) -> Optional[list[QVector]]:
    """Σ at the foot point and Q with its covered vertices pushed into the chord hyperplanes"""
    base = simplex(k).vertices
    center = barycenter(list(base))
    excluded = [sum(1 for c in system if c.excluded == i) for i in range(k + 1)]
    q_center = barycenter(list(q_points))
    offset = foot - q_center
    zero_k = QVector.zero(k)
    simplex_points = [(v - center).scale(scale ** excluded[i]).concat(offset) for i, v in enumerate(base)]
    q_lifted = [zero_k.concat(q - q_center) for q in q_points]
    planes = {}
    for chord in system:
        through = [s for i, s in enumerate(simplex_points) if i != chord.excluded]
        through += [q_lifted[v] for v in chord.pair]
        plane = hyperplane_through(through)
        if plane is None:
            return None
        planes[chord] = plane
    moved = list(q_lifted)
    for v in {v for chord in system for v in chord.arc}:
        constraints = [planes[c] for c in system if v in c.arc or v in c.pair]
        tail = q_lifted[v].coords[k:]
        rows = [h.normal.coords[:k] for h in constraints]
        rhs = [h.offset - QVector(h.normal.coords[k:]).dot(QVector(tail)) for h in constraints]
        shift = solve(rows, rhs)
        if shift is None:
            return None
        moved[v] = shift.concat(QVector(tail))
    return simplex_points + moved


def realize_chord_system(q: Polytope, k: int, system: Sequence[Chord]) -> WildBlueprint:
    """Build and classify the polytope of one chord system, or report why it fails"""
    system = tuple(system)
    m = q.num_vertices
    q_points = list(q.vertices)
    foot = _foot_point(q_points, system)
    if foot is None:
        return WildBlueprint(q, k, system, rejection="no interior point on the uncovered side of every chord")
    scales = SCALES if system else SCALES[:1]
    reason = "chord hyperplanes are degenerate"
    for scale in scales:
        points = _place(q_points, k, system, foot, scale)
        if points is None:
            continue
        result = hull(points, name=f"wild{m}.{k}")
        if result.num_vertices != m + k + 1:
            reason = "a displaced point is not a vertex"
            continue
        cert = verify_special_simplex(result, tuple(range(k + 1)))
        if not cert:
            reason = f"simplex is not special: {cert.reason}"
            continue
        try:
            classification = classify_meek_wild(result, cert)
        except PolytopeError as e:
            reason = str(e)
            continue
        return WildBlueprint(q, k, system, result, classification)
    return WildBlueprint(q, k, system, rejection=reason)


def _check_limits(m: int, k: int) -> None:
    settings = get_settings()
    if m < 4 or k < 1:
        raise InputError(f"need m >= 4 and k >= 1, got m={m}, k={k}")
    if m > settings.max_wild_gon:
        raise CapacityError("wild enumeration polygon size", m, settings.max_wild_gon, "max_wild_gon")
    if k > settings.max_wild_k:
        raise CapacityError("wild enumeration simplex dimension", k, settings.max_wild_k, "max_wild_k")


def realize_wild_2d(m: int, k: int, system: Sequence[Chord]) -> WildBlueprint:
    """One chord system over the m-gon, as stored in a blueprint file"""
    _check_limits(m, k)
    known = set(polygon_chords(m, k))
    for chord in system:
        if chord not in known:
            raise InputError(f"{chord} is not a chord of the {m}-gon with a {k}-simplex")
    if max(_constraint_counts(system, m), default=0) > k:
        raise InputError(f"chord system is not admissible: a covered vertex carries more than {k} constraints")
    return realize_chord_system(ngon(m), k, system)


def enumerate_wild_2d(m: int, k: int, max_chords: Optional[int] = None) -> WildEnumeration:
    """All realizable wild polytopes with a special k-simplex over the m-gon, up to isomorphism"""
    _check_limits(m, k)
    q = ngon(m)
    anchor: Optional[WildBlueprint] = None
    results: list[WildBlueprint] = []
    rejected: list[WildBlueprint] = []
    meek_equivalent = 0
    count = 0
    for system in chord_systems(m, k, max_chords):
        count += 1
        blueprint = realize_chord_system(q, k, system)
        if not system:
            anchor = blueprint
            continue
        if blueprint.result is None:
            logger.debug("chord system {} rejected: {}", system, blueprint.rejection)
            rejected.append(blueprint)
            continue
        if blueprint.classification.kind != Kind.WILD:
            meek_equivalent += 1
            continue
        if any(lattice_isomorphic(blueprint.result.lattice, r.result.lattice) for r in results):
            continue
        results.append(blueprint)
    logger.info(
        "{}-gon, k={}: {} chord systems, {} wild classes, {} meek-equivalent, {} rejected",
        m, k, count, len(results), meek_equivalent, len(rejected),
    )
    return WildEnumeration(tuple(results), anchor, meek_equivalent, tuple(rejected), count)


@dataclass(frozen=True)
class BoundReport:
    f_p: FVector
    f_flattened: FVector
    f_direct_sum: FVector
    strict_dims: tuple[int, ...]
    violations: tuple[int, ...]

    @property
    def holds(self) -> bool:
        return not self.violations

    @property
    def matches_direct_sum(self) -> bool:
        return self.f_flattened == self.f_direct_sum


def fvector_bound_check(p: Polytope, cert: SpecialSimplexCertificate) -> BoundReport:
    """Compare f(P) with f(P'), P' having the non-simplex vertices flattened onto a complement"""
    n = p.intrinsic_dim
    if n < 3:
        raise InputError(f"the f-vector bound needs dimension at least 3, got {n}")
    classification = classify_meek_wild(p, cert)
    if classification.kind != Kind.WILD:
        raise InputError(f"{p.name} is {classification.kind.value}, not WILD")
    flattened = flatten_onto_complement(p, cert)
    f_p, f_prime = p.fvector, flattened.fvector
    f_sum = direct_sum_fvector(basis_polytope(p, cert).q.fvector, cert.m)
    strict = (n - 2, n - 1)
    violations = []
    for i in range(n):
        a, b = f_p.f(i), f_prime.f(i)
        if i == 0:
            ok = a == b
        elif i in strict:
            ok = a < b
        else:
            ok = a <= b
        if not ok:
            violations.append(i)
    if violations:
        logger.warning("f-vector bound fails for {} in dimensions {}", p.name, violations)
    return BoundReport(f_p, f_prime, f_sum, strict, tuple(violations))
