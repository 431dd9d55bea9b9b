"""
JSON formats for polytopes, certificates, triangulations, blueprints and reports
"""

from __future__ import annotations

import dataclasses
import json
import math
from fractions import Fraction
from pathlib import Path
from typing import Annotated, Any, Optional, Union

from loguru import logger
from pydantic import BaseModel, BeforeValidator, ConfigDict, Field, ValidationError

from specialsimplex.config import get_settings
from specialsimplex.constructions import Poset
from specialsimplex.errors import InputError
from specialsimplex.exact import Hyperplane, QVector, affine_dimension, format_rational
from specialsimplex.polytope import FVector, Polytope, hull
from specialsimplex.special import (
    Classification,
    EquivalenceReport,
    SpecialSimplexCertificate,
)
from specialsimplex.triangulation import Triangulation
from specialsimplex.wild import BoundReport, CharacterizationReport, Chord, WildBlueprint


def _rational_string(value: Any) -> str:
    if isinstance(value, (bool, float)):
        raise ValueError("coordinates must be integers or rational strings, not floats")
    if isinstance(value, int):
        return str(value)
    if isinstance(value, str):
        try:
            return format_rational(Fraction(value.strip()))
        except (ValueError, ZeroDivisionError):
            raise ValueError(f"invalid rational {value!r}")
    raise ValueError(f"invalid rational {value!r}")


Rational = Annotated[str, BeforeValidator(_rational_string)]


class FacetModel(BaseModel):
    normal: list[Rational]
    offset: Rational


class PolytopeModel(BaseModel):
    model_config = ConfigDict(extra="forbid")

    name: str = "polytope"
    ambient_dim: int = Field(ge=1)
    vertices: list[list[Rational]] = Field(min_length=1)
    facets: Optional[list[FacetModel]] = None
    labels: Optional[list[str]] = None


class CertificateModel(BaseModel):
    simplex: list[int]
    m: int
    missed: dict[str, int]


class ClassificationModel(BaseModel):
    kind: str
    dim_A: int
    dim_Q: int


class EquivalenceModel(BaseModel):
    condition_a: bool
    condition_b: bool
    trivial: bool = False


class TriangulationModel(BaseModel):
    ordering: list[int]
    cells: list[list[int]]
    volume: Optional[Rational] = None


class ChordModel(BaseModel):
    pair: tuple[int, int]
    arc: list[int]
    excluded_simplex_vertex: int


class BlueprintModel(BaseModel):
    m: int = Field(ge=3)
    k: int = Field(ge=1)
    chords: list[ChordModel] = []


class PosetModel(BaseModel):
    elements: list[str]
    covers: list[tuple[str, str]] = []


class BoundReportModel(BaseModel):
    f_p: list[int]
    f_flattened: list[int]
    f_direct_sum: list[int]
    strict_dims: list[int]
    violations: list[int]
    holds: bool
    matches_direct_sum: bool


class FacetConditionModel(BaseModel):
    facet: int
    target: FacetModel
    negative_side: list[int]
    condition_b: bool
    condition_c: bool


class CharacterizationModel(BaseModel):
    condition_a: str
    passes: bool
    facets: list[FacetConditionModel]


class CertificateAnalysis(BaseModel):
    certificate: CertificateModel
    basis_fvector: list[int]
    classification: ClassificationModel
    equivalence: EquivalenceModel
    join_structure: bool
    bound: Optional[BoundReportModel] = None


class AnalysisReport(BaseModel):
    name: str
    fvector: list[int]
    is_simplex: bool
    certificates: list[CertificateAnalysis]


def parse_json(text: str) -> Any:
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise InputError(f"malformed JSON: {e.msg}", line=e.lineno, column=e.colno) from e


def _validate(model: type[BaseModel], data: Any) -> Any:
    try:
        return model.model_validate(data)
    except ValidationError as e:
        first = e.errors()[0]
        where = ".".join(str(part) for part in first["loc"])
        raise InputError(f"invalid {model.__name__} at {where or 'top level'}: {first['msg']}") from e


def read_text(source: Union[str, Path]) -> str:
    path = Path(source)
    try:
        return path.read_text(encoding="utf-8")
    except OSError as e:
        raise InputError(f"cannot read {path}: {e.strerror}") from e


def _hyperplane(model: FacetModel) -> Hyperplane:
    return Hyperplane(QVector.of(model.normal), Fraction(model.offset))


def polytope_from_model(model: PolytopeModel) -> Polytope:
    points = []
    for row in model.vertices:
        if len(row) != model.ambient_dim:
            raise InputError(f"vertex {row} does not have {model.ambient_dim} coordinates")
        points.append(QVector.of(row))
    if len(set(points)) != len(points):
        raise InputError("vertices must be distinct")
    if model.labels is not None and len(model.labels) != len(points):
        raise InputError("labels must match the vertices one to one")
    labels = tuple(model.labels) if model.labels is not None else None
    facets = [_hyperplane(f) for f in model.facets] if model.facets is not None else None
    if facets is not None and any(h.dim != model.ambient_dim for h in facets):
        raise InputError(f"facet normals must have {model.ambient_dim} coordinates")
    d = affine_dimension(points)
    if facets is not None and math.comb(len(points), d) > get_settings().max_hull_subsets:
        logger.warning("{}: too many vertices to re-derive the facets, validating them locally", model.name)
        p = Polytope.from_representation(points, facets, name=model.name)
        return dataclasses.replace(p, labels=labels)
    p = hull(points, name=model.name)
    if p.num_vertices != len(points):
        extra = [str(v) for v in points if p.index_of(v) is None]
        raise InputError(f"points {', '.join(extra)} are not vertices")
    if facets is not None:
        # facet equations are only unique modulo the affine hull, so compare incidences
        given = Polytope.from_representation(points, facets, name=model.name)
        if set(given.incidence) != set(p.incidence):
            raise InputError("supplied facets do not match the facets of the convex hull of the vertices")
        p = given
    return dataclasses.replace(p, labels=labels)


def load_polytope(text: str) -> Polytope:
    return polytope_from_model(_validate(PolytopeModel, parse_json(text)))


def _facet_model(h: Hyperplane) -> FacetModel:
    h = h.normalized()
    return FacetModel(normal=[format_rational(c) for c in h.normal], offset=format_rational(h.offset))


def polytope_model(p: Polytope) -> PolytopeModel:
    """Canonical form: vertices sorted by value, facets primitive and sorted"""
    order = sorted(range(p.num_vertices), key=lambda i: p.vertices[i])
    facets = sorted((h.normalized() for h in p.facets), key=lambda h: (h.normal.coords, h.offset))
    return PolytopeModel(
        name=p.name,
        ambient_dim=p.ambient_dim,
        vertices=[[format_rational(c) for c in p.vertices[i]] for i in order],
        facets=[_facet_model(h) for h in facets],
        labels=[p.labels[i] for i in order] if p.labels is not None else None,
    )


def dump_json(model: BaseModel) -> str:
    return json.dumps(model.model_dump(exclude_none=True), indent=2) + "\n"


def certificate_model(cert: SpecialSimplexCertificate) -> CertificateModel:
    return CertificateModel(
        simplex=list(cert.simplex_vertices),
        m=cert.m,
        missed={f"facet_{f}": v for f, v in sorted(cert.missed_vertex_per_facet.items())},
    )


def classification_model(c: Classification) -> ClassificationModel:
    return ClassificationModel(kind=c.kind.value, dim_A=c.dim_A, dim_Q=c.dim_Q)


def equivalence_model(r: EquivalenceReport) -> EquivalenceModel:
    return EquivalenceModel(condition_a=r.condition_a, condition_b=r.condition_b, trivial=r.trivial)


def triangulation_model(t: Triangulation, volume: Optional[Fraction] = None) -> TriangulationModel:
    return TriangulationModel(
        ordering=list(t.ordering),
        cells=t.cell_lists(),
        volume=format_rational(volume) if volume is not None else None,
    )


def load_poset(text: str) -> Poset:
    model = _validate(PosetModel, parse_json(text))
    return Poset.from_covers(model.elements, model.covers)


def blueprint_model(b: WildBlueprint) -> BlueprintModel:
    return BlueprintModel(
        m=b.m,
        k=b.k,
        chords=[
            ChordModel(pair=c.pair, arc=list(c.arc), excluded_simplex_vertex=c.excluded)
            for c in b.chords
        ],
    )


def load_blueprint(text: str) -> tuple[int, int, tuple[Chord, ...]]:
    model = _validate(BlueprintModel, parse_json(text))
    chords = []
    for c in model.chords:
        a, b = sorted(c.pair)
        if not 0 <= a < b < model.m or not 0 <= c.excluded_simplex_vertex <= model.k:
            raise InputError(f"chord {c.pair} is out of range for m={model.m}, k={model.k}")
        chords.append(Chord((a, b), tuple(c.arc), c.excluded_simplex_vertex))
    return model.m, model.k, tuple(chords)


def bound_model(r: BoundReport) -> BoundReportModel:
    return BoundReportModel(
        f_p=list(r.f_p.entries),
        f_flattened=list(r.f_flattened.entries),
        f_direct_sum=list(r.f_direct_sum.entries),
        strict_dims=list(r.strict_dims),
        violations=list(r.violations),
        holds=r.holds,
        matches_direct_sum=r.matches_direct_sum,
    )


def characterization_model(r: CharacterizationReport) -> CharacterizationModel:
    return CharacterizationModel(
        condition_a=r.condition_a.value,
        passes=r.passes,
        facets=[
            FacetConditionModel(
                facet=f.facet,
                target=_facet_model(f.corresponding.target),
                negative_side=sorted(f.corresponding.negative_side),
                condition_b=f.condition_b,
                condition_c=f.condition_c,
            )
            for f in r.facets
        ],
    )


def fvector_list(f: FVector) -> list[int]:
    return list(f.entries)


class BoundCheckModel(BaseModel):
    certificate: CertificateModel
    bound: BoundReportModel
    characterization: CharacterizationModel


class WildResultModel(BaseModel):
    blueprint: BlueprintModel
    fvector: list[int]
    classification: ClassificationModel
    polytope: PolytopeModel


class RejectedSystemModel(BaseModel):
    blueprint: BlueprintModel
    reason: str


class WildEnumerationModel(BaseModel):
    m: int
    k: int
    systems: int
    meek_equivalent: int
    wild: list[WildResultModel]
    rejected: list[RejectedSystemModel]


def wild_result_model(b: WildBlueprint) -> WildResultModel:
    return WildResultModel(
        blueprint=blueprint_model(b),
        fvector=fvector_list(b.result.fvector),
        classification=classification_model(b.classification),
        polytope=polytope_model(b.result),
    )
