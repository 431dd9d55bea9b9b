import pytest

from specialsimplex.config import get_settings
from specialsimplex.constructions import bipyramid, birkhoff, cross, cube, direct_sum, ngon, pyramid, simplex
from specialsimplex.errors import CapacityError, InputError
from specialsimplex.exact import QVector
from specialsimplex.polytope import FVector, hull, lattice_isomorphic
from specialsimplex.special import (
    Kind,
    SimplexRejection,
    basis_polytope,
    classify_meek_wild,
    compatibility_graph,
    complement_meet,
    equivalence_report,
    find_special_simplices,
    flatten_onto_complement,
    meek_representative,
    simplex_projection,
    verify_special_simplex,
    vertex_projection,
    weakly_hannar_pairs,
)


def v(*coords):
    return QVector.of(coords)


def diagonal(p, corner):
    return (p.index_of(corner), p.index_of(-corner))


def test_cube_diagonal_is_special():
    p = cube(3)
    cert = verify_special_simplex(p, diagonal(p, v(1, 1, 1)))
    assert cert and cert.m == 1
    assert set(cert.missed_vertex_per_facet) == set(range(6))
    assert set(cert.missed_vertex_per_facet.values()) == set(cert.simplex_vertices)


def test_cube_edge_is_rejected():
    p = cube(3)
    edge = (p.index_of(v(1, 1, 1)), p.index_of(v(1, 1, -1)))
    result = verify_special_simplex(p, edge)
    assert isinstance(result, SimplexRejection) and not result
    assert result.facet is not None


def test_verify_rejects_bad_vertex_sets():
    p = ngon(6)
    with pytest.raises(InputError):
        verify_special_simplex(p, [0])
    with pytest.raises(InputError):
        verify_special_simplex(p, [0, 17])
    square = hull([v(0, 0), v(2, 0), v(0, 2), v(2, 2)])
    assert not verify_special_simplex(square, [0, 1, 2])


def test_three_cube_has_four_wild_diagonals():
    p = cube(3)
    search = find_special_simplices(p)
    assert len(search) == 4 and not search.is_simplex
    for cert in search:
        assert cert.m == 1
        basis = basis_polytope(p, cert)
        assert basis.q.fvector == FVector((1, 6, 6, 1))
        assert basis.subcomplex_dim == 3
        assert classify_meek_wild(p, cert).kind is Kind.WILD
        assert equivalence_report(p, cert) == equivalence_report(p, list(cert.simplex_vertices))


@pytest.mark.parametrize(
    "corners",
    [
        [(0, 0), (1, 0), (0, 1), (1, 1)],
        [(0, 0), (4, 0), (5, 3), (1, 4)],
        [(0, 0), (7, 1), (6, 5), (1, 6)],
    ],
)
def test_quadrangles_have_two_meek_diagonals(corners):
    p = hull([v(*c) for c in corners])
    assert p.fvector == FVector((1, 4, 4, 1))
    search = find_special_simplices(p)
    assert len(search) == 2
    for cert in search:
        c = classify_meek_wild(p, cert)
        assert (c.kind, c.dim_A, c.dim_Q) == (Kind.MEEK, 1, 1)


def test_simplex_is_flagged_not_certified():
    search = find_special_simplices(simplex(3))
    assert search.is_simplex and len(search) == 0


def test_cross_polytope_axes_are_meek():
    p = cross(3)
    search = find_special_simplices(p)
    assert len(search) == 3
    assert all(classify_meek_wild(p, c).kind is Kind.MEEK for c in search)


def test_pyramid_over_square_has_two_special_triangles():
    p = pyramid(hull([v(0, 0), v(1, 0), v(0, 1), v(1, 1)]))
    apex = p.num_vertices - 1
    search = find_special_simplices(p)
    assert len(search) == 2
    assert all(c.m == 2 and apex in c.simplex for c in search)


def test_bipyramid_apexes_form_a_meek_special_segment():
    p = bipyramid(ngon(5))
    apexes = (p.num_vertices - 2, p.num_vertices - 1)
    cert = verify_special_simplex(p, apexes)
    assert cert
    assert classify_meek_wild(p, cert).kind is Kind.MEEK
    assert equivalence_report(p, cert) == equivalence_report(p, apexes)
    report = equivalence_report(p, cert)
    assert report.condition_a and report.condition_b


def test_equivalence_report_of_a_non_special_edge():
    p = cube(3)
    edge = [p.index_of(v(1, 1, 1)), p.index_of(v(1, 1, -1))]
    report = equivalence_report(p, edge)
    assert not report.condition_a and not report.condition_b


def test_compatibility_graph_of_the_cube_is_a_matching():
    g = compatibility_graph(cube(3))
    assert g.number_of_edges() == 4
    assert all(d == 1 for _, d in g.degree)


def test_search_capacity(monkeypatch):
    monkeypatch.setattr(get_settings(), "max_search_vertices", 5)
    with pytest.raises(CapacityError) as info:
        find_special_simplices(cube(3))
    assert info.value.setting == "max_search_vertices"


def test_simplex_projection_of_a_diagonal():
    p = cube(3)
    proj = simplex_projection(p, diagonal(p, v(1, 1, 1)))
    assert proj.kernel_dim == 1 and len(proj.kept_columns) == 2
    assert proj(v(1, 1, 1)) == proj(v(-1, -1, -1))
    moved = proj.along_fibre_to(v(1, -1, -1), v(0, 0, 0))
    assert proj(moved) == proj(v(1, -1, -1))


def test_vertex_projection_of_the_cube():
    p = cube(3)
    cert = find_special_simplices(p)[0]
    vp = vertex_projection(p, cert)
    assert not vp.meek
    assert sorted(vp.mapping.values()) == list(range(8))
    assert vp.target.fvector == FVector((1, 8, 18, 12, 1))
    assert meek_representative(p, cert).fvector == bipyramid(ngon(6)).fvector
    with pytest.raises(InputError):
        vertex_projection(p, cert, epsilon=0)


def test_vertex_projection_keeps_meek_vertices():
    p = bipyramid(ngon(4))
    cert = verify_special_simplex(p, (4, 5))
    vp = vertex_projection(p, cert, epsilon="1/2")
    assert vp.meek
    for i in range(4):
        assert vp.target.vertices[vp.mapping[i]] == p.vertices[i]


def test_flattening_the_cube():
    p = cube(3)
    cert = find_special_simplices(p)[0]
    assert flatten_onto_complement(p, cert).fvector == FVector((1, 8, 18, 12, 1))


def test_weakly_hannar():
    cube_result = weakly_hannar_pairs(cube(3))
    assert cube_result and len(cube_result.pairs) == 4
    assert all(c.m == 1 for c in cube_result.pairs)
    assert len(weakly_hannar_pairs(cross(3)).pairs) == 3
    assert not weakly_hannar_pairs(ngon(5))
    hexagon = hull([v(1, 0), v(0, 1), v(-1, 1), v(-1, 0), v(0, -1), v(1, -1)])
    result = weakly_hannar_pairs(hexagon)
    assert not result and result.failing_facet is not None


def test_vertex_projection_does_not_depend_on_epsilon():
    p = cube(3)
    for cert in find_special_simplices(p):
        targets = [vertex_projection(p, cert, eps).target for eps in ("1/10", 1, 10)]
        for other in targets[1:]:
            assert other.fvector == targets[0].fvector
            assert lattice_isomorphic(other.lattice, targets[0].lattice)


@pytest.mark.parametrize(
    "p",
    [cube(3), bipyramid(ngon(5)), direct_sum(simplex(2), ngon(4)), birkhoff(3).polytope, pyramid(ngon(4))],
    ids=["cube3", "bipyramid5", "simplex2+square", "birkhoff3", "pyramid4"],
)
def test_meek_exactly_when_the_affine_hulls_cross_in_a_point(p):
    search = find_special_simplices(p)
    assert len(search) > 0
    for cert in search:
        meet = complement_meet(p, cert)
        single_point = meet is not None and meet.dimension == 0
        assert single_point == (classify_meek_wild(p, cert).kind is Kind.MEEK)


def test_cube_diagonal_hulls_do_not_cross_in_a_point():
    p = cube(3)
    meet = complement_meet(p, verify_special_simplex(p, diagonal(p, v(1, 1, 1))))
    assert meet is not None and meet.dimension == 1
