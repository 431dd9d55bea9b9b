from functools import lru_cache
from itertools import combinations

import pytest

from specialsimplex.config import get_settings
from specialsimplex.constructions import bipyramid, cube, ngon
from specialsimplex.errors import CapacityError, InputError
from specialsimplex.exact import Hyperplane, QVector
from specialsimplex.polytope import FVector, hull, lattice_isomorphic
from specialsimplex.special import Kind, find_special_simplices, verify_special_simplex
from specialsimplex.wild import (
    Chord,
    ConditionA,
    _constraint_counts,
    chord_systems,
    corresponding_hyperplane,
    enumerate_wild_2d,
    fvector_bound_check,
    polygon_chords,
    realize_chord_system,
    realize_wild_2d,
    wild_characterization_report,
)


@lru_cache(maxsize=None)
def octagon_enumeration():
    return enumerate_wild_2d(8, 1)


def cube_with_diagonal():
    p = cube(3)
    cert = verify_special_simplex(p, (p.index_of(QVector.of([1, 1, 1])), p.index_of(QVector.of([-1, -1, -1]))))
    return p, cert


def test_corresponding_hyperplane_of_a_cube_facet():
    p, cert = cube_with_diagonal()
    top = p.index_of(QVector.of([1, 1, 1]))
    bottom = p.index_of(QVector.of([-1, -1, -1]))
    facet = next(f for f, on in enumerate(p.incidence) if top in on)
    ch = corresponding_hyperplane(p, cert, p.facets[facet])
    assert not ch.contains_basis
    assert len(ch.negative_side) == 1
    assert top in ch.on_target and bottom not in ch.on_target
    (negative,) = ch.negative_side
    assert negative in p.incidence[facet]
    assert not ch.separates_trivially


def test_corresponding_hyperplane_needs_one_missed_simplex_vertex():
    p, cert = cube_with_diagonal()
    with pytest.raises(InputError):
        corresponding_hyperplane(p, cert, Hyperplane(QVector.of([1, -1, 0]), 0))


def test_cube_passes_the_characterization():
    p, cert = cube_with_diagonal()
    report = wild_characterization_report(p, cert)
    assert report.condition_a is ConditionA.VERIFIED_BY_CONSTRUCTION
    assert len(report.facets) == 6
    assert report.passes and not report.separates_trivially


def test_meek_polytopes_separate_trivially():
    p = bipyramid(ngon(5))
    cert = verify_special_simplex(p, (5, 6))
    report = wild_characterization_report(p, cert)
    assert report.passes and report.separates_trivially


def test_polygon_chords():
    chords = polygon_chords(5, 1)
    assert len(chords) == 20
    assert {c.pair for c in chords} == {(0, 2), (0, 3), (1, 3), (1, 4), (2, 4)}
    assert Chord((0, 2), (1,), 0) in chords and Chord((0, 2), (3, 4), 1) in chords


def test_constraint_counts():
    system = (Chord((0, 2), (1,), 0), Chord((1, 3), (2,), 1))
    assert _constraint_counts(system, 5) == [0, 2, 2, 0, 0]
    assert _constraint_counts((Chord((0, 3), (1, 2), 0),), 5) == [0, 1, 1, 0, 0]


def test_chord_systems_are_admissible():
    systems = list(chord_systems(5, 1, max_chords=1))
    assert systems[0] == ()
    assert len(systems) == 21
    for system in chord_systems(6, 1, max_chords=2):
        assert max(_constraint_counts(system, 6), default=0) <= 1


def test_empty_chord_system_realizes_the_direct_sum():
    blueprint = realize_chord_system(ngon(6), 1, ())
    assert blueprint.result.fvector == FVector((1, 8, 18, 12, 1))
    assert blueprint.classification.kind is Kind.MEEK
    assert blueprint.certificate


def test_enumeration_over_the_square():
    result = enumerate_wild_2d(4, 1, max_chords=1)
    assert result.systems == 9
    assert result.anchor.classification.kind is Kind.MEEK
    assert result.results
    for blueprint in result.results:
        assert blueprint.classification.kind is Kind.WILD
        assert blueprint.certificate


def test_enumeration_limits(monkeypatch):
    with pytest.raises(InputError):
        enumerate_wild_2d(3, 1)
    with pytest.raises(InputError):
        enumerate_wild_2d(6, 0)
    monkeypatch.setattr(get_settings(), "max_wild_gon", 6)
    with pytest.raises(CapacityError):
        enumerate_wild_2d(7, 1)


def test_two_non_isomorphic_wild_polytopes_over_the_octagon():
    target = FVector((1, 10, 22, 14, 1))
    found = [b for b in octagon_enumeration().results if b.result.fvector == target]
    assert len(found) >= 2
    for a, b in combinations(found, 2):
        assert not lattice_isomorphic(a.result.lattice, b.result.lattice)


def test_octagon_results_pass_all_checks():
    for blueprint in octagon_enumeration().results:
        p, cert = blueprint.result, blueprint.certificate
        assert cert and cert.m == 1
        assert blueprint.classification.kind is Kind.WILD
        assert wild_characterization_report(p, cert).passes
        report = fvector_bound_check(p, cert)
        assert report.holds, report.violations
        assert report.f_direct_sum == FVector((1, 10, 24, 16, 1))


def test_cube_bounds():
    p, cert = cube_with_diagonal()
    report = fvector_bound_check(p, cert)
    assert report.f_p.proper == (8, 12, 6)
    assert report.f_flattened.proper == (8, 18, 12)
    assert report.strict_dims == (1, 2)
    assert report.holds and report.matches_direct_sum


def test_four_cube_bounds():
    p = cube(4)
    for cert in find_special_simplices(p):
        report = fvector_bound_check(p, cert)
        assert report.holds
        assert report.f_p.f(0) == report.f_flattened.f(0) == 16


def test_bound_check_rejects_meek_and_flat_inputs():
    p = bipyramid(ngon(5))
    with pytest.raises(InputError):
        fvector_bound_check(p, verify_special_simplex(p, (5, 6)))
    square = hull([QVector.of(c) for c in ((0, 0), (1, 0), (0, 1), (1, 1))])
    with pytest.raises(InputError):
        fvector_bound_check(square, find_special_simplices(square)[0])


def test_four_cube_passes_the_characterization_on_every_facet():
    p = cube(4)
    for cert in find_special_simplices(p):
        report = wild_characterization_report(p, cert)
        assert len(report.facets) == 8
        assert report.passes


def facets_expected(blueprint):
    return 2 * blueprint.m - sum(len(c.arc) for c in blueprint.chords)


def test_square_chords_give_seven_facets():
    for blueprint in enumerate_wild_2d(4, 1, max_chords=1).results:
        assert blueprint.result.num_vertices == 6
        assert blueprint.result.num_facets == facets_expected(blueprint) == 7


def test_octagon_enumeration_is_complete():
    result = octagon_enumeration()
    assert result.systems > len(list(chord_systems(8, 1, max_chords=2)))
    for blueprint in result.results:
        assert blueprint.result.num_facets == facets_expected(blueprint)


def test_realize_a_single_chord_system():
    blueprint = enumerate_wild_2d(4, 1, max_chords=1).results[0]
    again = realize_wild_2d(4, 1, blueprint.chords)
    assert again.classification.kind is Kind.WILD
    assert lattice_isomorphic(again.result.lattice, blueprint.result.lattice)


def test_realize_rejects_foreign_and_inadmissible_chords():
    with pytest.raises(InputError):
        realize_wild_2d(5, 1, (Chord((0, 1), (), 0),))
    crowded = (Chord((0, 2), (1,), 0), Chord((1, 3), (2,), 1), Chord((0, 2), (1,), 1))
    with pytest.raises(InputError):
        realize_wild_2d(5, 1, crowded)
    with pytest.raises(InputError):
        realize_wild_2d(3, 1, ())
