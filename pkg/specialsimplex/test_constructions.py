import pytest

from specialsimplex.config import get_settings
from specialsimplex.constructions import (
    Poset,
    bipyramid,
    bipyramid_fvector,
    birkhoff,
    cube,
    cube_basis_fvector,
    cube_basis_zonotope,
    cross,
    cube_fvector,
    direct_sum,
    direct_sum_fvector,
    generate_standard,
    meek_family,
    ngon,
    ngon_points,
    order_polytope,
    pyramid,
    pyramid_fvector,
    simplex,
)
from specialsimplex.errors import CapacityError, InputError
from specialsimplex.polytope import FVector, hull, lattice_isomorphic
from specialsimplex.special import (
    Kind,
    basis_polytope,
    classify_meek_wild,
    equivalence_report,
    find_special_simplices,
    verify_special_simplex,
)


def test_standard_generators():
    assert simplex(3).fvector == FVector((1, 4, 6, 4, 1))
    assert cube(3).fvector == cube_fvector(3)
    assert cross(3).fvector == FVector((1, 6, 12, 8, 1))
    assert ngon(7).fvector == FVector((1, 7, 7, 1))
    assert generate_standard("cube", 2).fvector == FVector((1, 4, 4, 1))
    with pytest.raises(InputError):
        generate_standard("dodecahedron", 3)
    with pytest.raises(InputError):
        ngon(2)
    with pytest.raises(InputError):
        cube(0)


def test_ngon_points_are_in_convex_position():
    points = ngon_points(9)
    assert all(x * x + y * y == 1 for x, y in points)
    assert ngon(9).num_vertices == 9


def test_pyramid_and_bipyramid_fvectors():
    q = ngon(5)
    assert pyramid(q).fvector == pyramid_fvector(q.fvector) == FVector((1, 6, 10, 6, 1))
    assert bipyramid_fvector(q.fvector) == FVector((1, 7, 15, 10, 1))


@pytest.mark.parametrize("k", range(3, 9))
def test_bipyramids_over_polygons(k):
    p = bipyramid(ngon(k))
    assert p.fvector == FVector((1, k + 2, 3 * k, 2 * k, 1))
    apexes = (p.num_vertices - 2, p.num_vertices - 1)
    assert verify_special_simplex(p, apexes)


def _square():
    return generate_standard("cube", 2)


@pytest.mark.parametrize(
    "q",
    [lambda: simplex(2), _square, lambda: ngon(5), lambda: ngon(8), lambda: cube(3)],
    ids=["triangle", "square", "pentagon", "octagon", "cube3"],
)
@pytest.mark.parametrize("k", [1, 2, 3])
def test_direct_sum_fvector_matches_the_hull(q, k):
    q = q()
    p = direct_sum(simplex(k), q)
    assert p.fvector == direct_sum_fvector(q.fvector, k)
    designated = tuple(range(k + 1))
    assert verify_special_simplex(p, designated)


def test_direct_sum_fvector_examples():
    assert direct_sum_fvector(FVector((1, 3, 3, 1)), 1) == FVector((1, 5, 9, 6, 1))
    assert direct_sum_fvector(FVector((1, 5, 5, 1)), 1) == FVector((1, 7, 15, 10, 1))
    assert direct_sum_fvector(FVector((1, 2, 1)), 2) == FVector((1, 5, 9, 6, 1))
    with pytest.raises(InputError):
        direct_sum_fvector(FVector((1, 2, 1)), 0)


def test_meek_family_of_a_segment():
    members = meek_family(simplex(1), 2)
    assert [(m.i, m.j) for m in members] == [(0, 2), (1, 1)]
    assert {m.polytope.fvector.entries for m in members} == {(1, 5, 9, 6, 1), (1, 5, 8, 5, 1)}


@pytest.mark.parametrize("q", [lambda: simplex(1), lambda: ngon(5), lambda: cube(3)], ids=["segment", "pentagon", "cube3"])
@pytest.mark.parametrize("m", [1, 2, 3])
def test_meek_family_properties(q, m):
    members = meek_family(q(), m)
    assert len(members) == m
    for member in members:
        p, cert = member.polytope, member.certificate
        assert cert.m == m
        assert verify_special_simplex(p, cert.simplex_vertices)
        assert p.fvector == member.expected_fvector
        assert classify_meek_wild(p, cert).kind is Kind.MEEK
        report = equivalence_report(p, cert)
        assert report.condition_a and report.condition_b
    for a in members:
        for b in members:
            if a is not b:
                assert not lattice_isomorphic(a.polytope.lattice, b.polytope.lattice)


def test_meek_family_needs_a_simplex():
    with pytest.raises(InputError):
        meek_family(ngon(4), 0)


def test_birkhoff_three():
    construction = birkhoff(3)
    p = construction.polytope
    assert (p.intrinsic_dim, p.num_vertices, p.num_facets) == (4, 6, 9)
    assert construction.certificate.m == 2
    assert p.fvector.euler_holds()


def test_birkhoff_limits(monkeypatch):
    with pytest.raises(InputError):
        birkhoff(1)
    monkeypatch.setattr(get_settings(), "max_birkhoff_n", 3)
    with pytest.raises(CapacityError):
        birkhoff(4)


def test_poset_structure():
    omega = Poset.from_covers(["a", "b", "c"], [["a", "c"], ["b", "c"]])
    assert omega.leq("a", "c") and not omega.leq("a", "b")
    assert sorted(omega.minimal) == ["a", "b"] and omega.maximal == ["c"]
    assert omega.is_graded
    assert omega.rank == {"a": 0, "b": 0, "c": 1}
    assert len(omega.filters()) == 5
    assert omega.relations[0] == [True, False, True]


def test_poset_rejects_cycles_and_unknown_elements():
    with pytest.raises(InputError):
        Poset.from_covers(["a", "b"], [["a", "b"], ["b", "a"]])
    with pytest.raises(InputError):
        Poset.from_covers(["a"], [["a", "z"]])
    with pytest.raises(InputError):
        Poset.from_covers(["a", "a"], [])


def test_order_polytope_of_a_chain_is_a_simplex():
    chain = Poset.from_covers(["a", "b", "c"], [["a", "b"], ["b", "c"]])
    construction = order_polytope(chain)
    p = construction.polytope
    assert p.is_simplex and p.intrinsic_dim == 3
    assert find_special_simplices(p).is_simplex
    assert construction.certificate.m == 3


@pytest.mark.parametrize(
    "covers",
    [[["a", "c"], ["b", "c"]], [["a", "b"], ["a", "c"]]],
    ids=["two below one", "one below two"],
)
def test_order_polytopes_of_three_element_posets(covers):
    construction = order_polytope(Poset.from_covers(["a", "b", "c"], covers))
    assert construction.polytope.fvector == FVector((1, 5, 8, 5, 1))
    assert construction.certificate.m == 2


def test_order_polytope_of_an_ungraded_poset_has_no_designated_simplex():
    omega = Poset.from_covers(["a", "b", "c", "d"], [["a", "b"], ["b", "c"], ["a", "d"]])
    assert not omega.is_graded
    construction = order_polytope(omega)
    assert construction.certificate is None
    assert construction.polytope.fvector.euler_holds()


def test_cube_basis_fvector_recursion():
    assert cube_basis_fvector(3) == FVector((1, 6, 6, 1))
    assert cube_basis_fvector(4) == FVector((1, 14, 24, 12, 1))
    assert cube_basis_fvector(4).f(0) == cube_fvector(3).f(0) + cube_basis_fvector(3).f(0)


@pytest.mark.parametrize("n", [3, 4])
def test_cube_basis_zonotope_is_the_basis_polytope_of_the_cube(n):
    construction = cube_basis_zonotope(n)
    z = construction.polytope
    assert z.fvector == construction.predicted
    p = cube(n)
    cert = find_special_simplices(p)[0]
    assert lattice_isomorphic(basis_polytope(p, cert).q.lattice, z.lattice)


def test_hull_of_a_generated_polytope_is_itself():
    p = bipyramid(ngon(6))
    assert hull(list(p.vertices)).fvector == p.fvector
