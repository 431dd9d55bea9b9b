#!/usr/bin/env python3
"""
CLI for analysing, generating and triangulating polytopes with special simplices
"""

import random
import re
import sys
from pathlib import Path
from typing import List, NoReturn, Optional

import pandas as pd
import typer
from loguru import logger
from pydantic import BaseModel

from specialsimplex.config import setup_logging
from specialsimplex.constructions import (
    GENERATORS,
    bipyramid,
    birkhoff,
    cube_basis_zonotope,
    direct_sum,
    generate_standard,
    meek_family,
    order_polytope,
    pyramid,
)
from specialsimplex.errors import InputError, InternalInconsistencyError, PolytopeError
from specialsimplex.polytope import Polytope
from specialsimplex.schemas import (
    AnalysisReport,
    BoundCheckModel,
    CertificateAnalysis,
    RejectedSystemModel,
    WildEnumerationModel,
    blueprint_model,
    bound_model,
    certificate_model,
    characterization_model,
    classification_model,
    dump_json,
    equivalence_model,
    fvector_list,
    load_blueprint,
    load_polytope,
    load_poset,
    polytope_model,
    read_text,
    triangulation_model,
    wild_result_model,
)
from specialsimplex.special import (
    Kind,
    basis_polytope,
    classify_meek_wild,
    equivalence_report,
    find_special_simplices,
    verify_special_simplex,
)
from specialsimplex.triangulation import join_structure_check, rlt, triangulation_volume
from specialsimplex.wild import (
    enumerate_wild_2d,
    fvector_bound_check,
    realize_wild_2d,
    wild_characterization_report,
)

app = typer.Typer(help="Exact polyhedral computation with special simplices")

# Global output options, set once by the callback
state = {"json": False, "seed": 0}

GENERATE_KINDS = sorted(
    [*GENERATORS, "birkhoff", "order", "cube-basis-zonotope", "direct-sum", "pyramid", "bipyramid", "meek-family", "wild2d"]
)

# Smallest accepted value of each numeric option, per kind
PARAMETER_MINIMUMS = {
    "cube": {"--n": 1},
    "cross": {"--n": 1},
    "simplex": {"--n": 1},
    "ngon": {"--n": 3},
    "birkhoff": {"--n": 2},
    "cube-basis-zonotope": {"--n": 2},
    "meek-family": {"--m": 1},
    "wild2d": {"--m": 4, "--k": 1},
}


@app.callback()
def main(
    json_output: bool = typer.Option(False, "--json", help="Machine-readable JSON on stdout"),
    seed: int = typer.Option(0, "--seed", help="Seed for random vertex orderings"),
    verbose: bool = typer.Option(False, "--verbose", "-v", help="Debug logging on stderr"),
):
    state["json"] = json_output
    state["seed"] = seed
    setup_logging("DEBUG" if verbose else None)
    logger.enable("specialsimplex")


def fail(error: PolytopeError) -> NoReturn:
    typer.echo(f"Error: {error}", err=True)
    raise typer.Exit(code=1)


def parse_polytope_spec(spec: Optional[str]) -> Polytope:
    """A JSON file, "-" or nothing for stdin, or a generator call such as "ngon:5" """
    if spec is None or spec == "-":
        return load_polytope(sys.stdin.read())
    if ":" in spec and not Path(spec).exists():
        kind, _, n = spec.partition(":")
        if kind == "segment":
            kind = "simplex"
        try:
            return generate_standard(kind, int(n))
        except ValueError:
            raise InputError(f"expected kind:n, got {spec!r}")
    return load_polytope(read_text(spec))


def parse_indices(text: Optional[str], option: str) -> Optional[List[int]]:
    if text is None:
        return None
    try:
        return [int(part) for part in text.split(",") if part.strip()]
    except ValueError:
        raise typer.BadParameter(f"expected comma separated vertex indices, got {text!r}", param_hint=option)


def emit(model: BaseModel, table: Optional[str] = None) -> None:
    """JSON on stdout with the table on stderr, or just the table"""
    if state["json"]:
        typer.echo(dump_json(model), nl=False)
        if table:
            typer.echo(table, err=True)
    elif table:
        typer.echo(table)


def write_polytopes(polytopes: List[Polytope], out_dir: Path) -> List[Path]:
    out_dir.mkdir(parents=True, exist_ok=True)
    written = []
    for i, p in enumerate(polytopes):
        stem = re.sub(r"[^A-Za-z0-9_.+-]", "_", p.name)
        path = out_dir / (f"{i:02d}_{stem}.json" if len(polytopes) > 1 else f"{stem}.json")
        path.write_text(dump_json(polytope_model(p)), encoding="utf-8")
        written.append(path)
    return written


def analyze_polytope(p: Polytope) -> AnalysisReport:
    """Special simplices of p with their basis polytopes, classifications and checks"""
    search = find_special_simplices(p)
    entries = []
    for cert in search:
        classification = classify_meek_wild(p, cert)
        bound = None
        if classification.kind == Kind.WILD and p.intrinsic_dim >= 3:
            bound = bound_model(fvector_bound_check(p, cert))
        entries.append(
            CertificateAnalysis(
                certificate=certificate_model(cert),
                basis_fvector=fvector_list(basis_polytope(p, cert).q.fvector),
                classification=classification_model(classification),
                equivalence=equivalence_model(equivalence_report(p, cert)),
                join_structure=join_structure_check(p, cert).passes,
                bound=bound,
            )
        )
    return AnalysisReport(
        name=p.name, fvector=fvector_list(p.fvector), is_simplex=search.is_simplex, certificates=entries
    )


@app.command()
def analyze(
    source: Optional[str] = typer.Argument(None, help="Polytope JSON file or kind:n; stdin when omitted"),
):
    """Find and classify all special simplices of a polytope"""
    try:
        report = analyze_polytope(parse_polytope_spec(source))
    except PolytopeError as e:
        fail(e)
    rows = [
        {
            "simplex": ",".join(map(str, c.certificate.simplex)),
            "m": c.certificate.m,
            "basis f": str(tuple(c.basis_fvector)),
            "kind": c.classification.kind,
            "dim_A": c.classification.dim_A,
            "dim_Q": c.classification.dim_Q,
            "equivalence": f"{c.equivalence.condition_a}/{c.equivalence.condition_b}",
            "join": c.join_structure,
            "bound": "-" if c.bound is None else c.bound.holds,
        }
        for c in report.certificates
    ]
    header = f"{report.name}: f = {tuple(report.fvector)}"
    if rows:
        table = header + "\n" + pd.DataFrame(rows).to_string(index=False)
    elif report.is_simplex:
        table = header + "\nthe polytope is a simplex, its own special simplex"
    else:
        table = header + "\nno special simplex"
    emit(report, table)
    if not rows and not report.is_simplex:
        raise typer.Exit(code=3)


@app.command()
def generate(
    kind: str = typer.Argument(..., help=f"One of: {', '.join(GENERATE_KINDS)}"),
    n: int = typer.Option(3, "--n", help="Dimension or size parameter"),
    q: str = typer.Option("ngon:5", "--q", help="Operand for pyramid, bipyramid, direct-sum and meek-family"),
    other: str = typer.Option("simplex:1", "--with", help="Second operand of direct-sum"),
    m: int = typer.Option(2, "--m", help="Simplex dimension (meek-family) or polygon size (wild2d)"),
    k: int = typer.Option(1, "--k", help="Simplex dimension for wild2d"),
    poset: Optional[str] = typer.Option(None, "--poset", help="Poset JSON file for order"),
    max_chords: Optional[int] = typer.Option(None, "--max-chords", help="Largest chord system for wild2d"),
    out_dir: Optional[Path] = typer.Option(None, "--out-dir", help="Write one JSON file per polytope"),
):
    """Generate polytopes as canonical JSON"""
    if kind not in GENERATE_KINDS:
        raise typer.BadParameter(f"unknown kind {kind!r}", param_hint="KIND")
    if kind == "order" and poset is None:
        raise typer.BadParameter("order needs --poset", param_hint="--poset")
    values = {"--n": n, "--m": m, "--k": k}
    for option, lowest in PARAMETER_MINIMUMS.get(kind, {}).items():
        if values[option] < lowest:
            raise typer.BadParameter(f"{kind} needs {option} >= {lowest}, got {values[option]}", param_hint=option)
    try:
        if kind in GENERATORS:
            polytopes = [generate_standard(kind, n)]
        elif kind == "birkhoff":
            polytopes = [birkhoff(n).polytope]
        elif kind == "order":
            polytopes = [order_polytope(load_poset(read_text(poset))).polytope]
        elif kind == "cube-basis-zonotope":
            polytopes = [cube_basis_zonotope(n).polytope]
        elif kind == "direct-sum":
            polytopes = [direct_sum(parse_polytope_spec(q), parse_polytope_spec(other))]
        elif kind == "pyramid":
            polytopes = [pyramid(parse_polytope_spec(q))]
        elif kind == "bipyramid":
            polytopes = [bipyramid(parse_polytope_spec(q))]
        elif kind == "meek-family":
            polytopes = [member.polytope for member in meek_family(parse_polytope_spec(q), m)]
        else:
            polytopes = [b.result for b in enumerate_wild_2d(m, k, max_chords).results]
    except PolytopeError as e:
        fail(e)

    if out_dir is not None:
        for path in write_polytopes(polytopes, out_dir):
            typer.echo(f"Wrote {path}", err=state["json"])
    elif len(polytopes) == 1:
        typer.echo(dump_json(polytope_model(polytopes[0])), nl=False)
    else:
        typer.echo("[\n" + ",\n".join(dump_json(polytope_model(p)).rstrip() for p in polytopes) + "\n]")


@app.command()
def triangulate(
    source: Optional[str] = typer.Argument(None, help="Polytope JSON file or kind:n; stdin when omitted"),
    ordering: Optional[str] = typer.Option(None, "--ordering", help="Vertex ordering, the last vertex is pulled first"),
    simplex_last: Optional[str] = typer.Option(None, "--simplex-last", help="Put these vertices at the end of the ordering"),
    orderings: int = typer.Option(1, "--orderings", help="Cross-check the volume against this many orderings"),
):
    """Reverse lexicographic (pulling) triangulation"""
    order = parse_indices(ordering, "--ordering")
    tail = parse_indices(simplex_last, "--simplex-last")
    try:
        p = parse_polytope_spec(source)
        if order is None:
            order = list(range(p.num_vertices))
            if tail:
                order = [i for i in order if i not in tail] + tail
        t = rlt(p, order)
        volume = triangulation_volume(t)
        rng = random.Random(state["seed"])
        for _ in range(orderings - 1):
            shuffled = list(order)
            rng.shuffle(shuffled)
            other = triangulation_volume(rlt(p, shuffled))
            if other != volume:
                raise InternalInconsistencyError(f"ordering {shuffled} gives volume {other}, expected {volume}")
    except PolytopeError as e:
        fail(e)
    table = pd.DataFrame(
        [{"polytope": p.name, "cells": len(t.cells), "volume": str(volume), "orderings checked": max(orderings, 1)}]
    ).to_string(index=False)
    if state["json"]:
        emit(triangulation_model(t, volume), table)
    else:
        typer.echo(table)
        for cell in t.cell_lists():
            typer.echo("  " + " ".join(map(str, cell)))


@app.command("enumerate-wild2d")
def enumerate_wild2d(
    m: int = typer.Option(8, "--m", help="Number of polygon vertices"),
    k: int = typer.Option(1, "--k", help="Dimension of the special simplex"),
    max_chords: Optional[int] = typer.Option(None, "--max-chords", help="Largest chord system to try"),
    format: str = typer.Option("table", "--format", "-f", help="Summary format: table, csv"),
    out_dir: Optional[Path] = typer.Option(None, "--out-dir", help="Write one JSON file per wild polytope"),
):
    """Enumerate wild polytopes over the m-gon with a special k-simplex"""
    if format not in ("table", "csv"):
        raise typer.BadParameter(f"unknown format {format!r}", param_hint="--format")
    try:
        result = enumerate_wild_2d(m, k, max_chords)
    except PolytopeError as e:
        fail(e)
    rows = [
        {
            "class": i,
            "f-vector": str(b.result.fvector),
            "chords": "; ".join(f"{c.pair[0]}-{c.pair[1]} covers {list(c.arc)} w0={c.excluded}" for c in b.chords),
        }
        for i, b in enumerate(result.results)
    ]
    summary = pd.DataFrame(rows, columns=["class", "f-vector", "chords"])
    if format == "csv":
        table = summary.to_csv(index=False)
    else:
        counts = summary.groupby("f-vector").size().rename("classes").reset_index()
        table = (
            f"{result.systems} chord systems, {len(result.results)} wild classes, "
            f"{result.meek_equivalent} meek-equivalent, {len(result.rejected)} rejected\n"
            + summary.to_string(index=False)
            + "\n\n"
            + counts.to_string(index=False)
        )
    if out_dir is not None:
        write_polytopes([b.result for b in result.results], out_dir)
    emit(
        WildEnumerationModel(
            m=m,
            k=k,
            systems=result.systems,
            meek_equivalent=result.meek_equivalent,
            wild=[wild_result_model(b) for b in result.results],
            rejected=[RejectedSystemModel(blueprint=blueprint_model(b), reason=b.rejection) for b in result.rejected],
        ),
        table,
    )


@app.command("realize-wild2d")
def realize_wild2d(
    source: Optional[str] = typer.Argument(None, help="Blueprint JSON file; stdin when omitted"),
    out_dir: Optional[Path] = typer.Option(None, "--out-dir", help="Write the realized polytope as JSON"),
):
    """Realize one chord system over a polygon, as written by enumerate-wild2d --json"""
    try:
        text = sys.stdin.read() if source in (None, "-") else read_text(source)
        m, k, chords = load_blueprint(text)
        blueprint = realize_wild_2d(m, k, chords)
        if blueprint.result is None:
            raise InputError(f"chord system cannot be realized: {blueprint.rejection}")
    except PolytopeError as e:
        fail(e)
    if out_dir is not None:
        write_polytopes([blueprint.result], out_dir)
    table = pd.DataFrame(
        [
            {
                "polytope": blueprint.result.name,
                "f-vector": str(blueprint.result.fvector),
                "facets": blueprint.result.num_facets,
                "kind": blueprint.classification.kind.value,
            }
        ]
    ).to_string(index=False)
    emit(wild_result_model(blueprint), table)


@app.command("check-bounds")
def check_bounds(
    source: Optional[str] = typer.Argument(None, help="Polytope JSON file or kind:n; stdin when omitted"),
    simplex: Optional[str] = typer.Option(None, "--simplex", help="Vertex indices of the special simplex"),
):
    """Compare the f-vector of a wild polytope with its flattened counterpart"""
    indices = parse_indices(simplex, "--simplex")
    try:
        p = parse_polytope_spec(source)
        if indices is not None:
            cert = verify_special_simplex(p, indices)
            if not cert:
                raise InputError(f"{indices} is not a special simplex: {cert.reason}")
        else:
            wild = [c for c in find_special_simplices(p) if classify_meek_wild(p, c).kind == Kind.WILD]
            if not wild:
                raise InputError(f"{p.name} has no wild special simplex")
            cert = wild[0]
        report = fvector_bound_check(p, cert)
        characterization = wild_characterization_report(p, cert)
    except PolytopeError as e:
        fail(e)
    rows = []
    for i in range(p.intrinsic_dim):
        a, b = report.f_p.f(i), report.f_flattened.f(i)
        relation = "=" if i == 0 else ("<" if i in report.strict_dims else "<=")
        rows.append({"dim": i, "f(P)": a, "relation": relation, "f(P')": b, "ok": i not in report.violations})
    table = (
        pd.DataFrame(rows).to_string(index=False)
        + f"\nbound holds: {report.holds}; P' is the direct sum: {report.matches_direct_sum}"
        + f"\ncharacterization conditions (b), (c): {characterization.passes}"
    )
    emit(
        BoundCheckModel(
            certificate=certificate_model(cert),
            bound=bound_model(report),
            characterization=characterization_model(characterization),
        ),
        table,
    )


if __name__ == "__main__":
    app()
