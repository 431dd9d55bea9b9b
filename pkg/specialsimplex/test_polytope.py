from fractions import Fraction
from itertools import permutations

import pytest

from specialsimplex.constructions import bipyramid, cube, ngon, pyramid, simplex
from specialsimplex.errors import CapacityError, EmptyInputError, InputError
from specialsimplex.exact import Hyperplane, QVector, affine_dimension
from specialsimplex.polytope import (
    FVector,
    Polytope,
    boundary_complex,
    complex_isomorphic,
    f_vector,
    face_lattice,
    hull,
    lattice_isomorphic,
    subcomplex_excluding,
)


def v(*coords):
    return QVector.of(coords)


SQUARE = [v(0, 0), v(1, 0), v(0, 1), v(1, 1)]


def test_hull_drops_interior_points():
    p = hull(SQUARE + [v("1/2", "1/2"), v(1, "1/3")])
    assert p.num_vertices == 4 and p.num_facets == 4
    assert set(p.vertices) == set(SQUARE)


def test_facets_hold_the_polytope_on_their_positive_side():
    p = cube(3)
    for h, on in zip(p.facets, p.incidence):
        assert all(h.value(x) >= 0 for x in p.vertices)
        assert {i for i, x in enumerate(p.vertices) if h.contains(x)} == on
        assert affine_dimension(p.points(on)) == p.intrinsic_dim - 1


def test_hull_of_a_lower_dimensional_set():
    p = hull([x.concat(v(0)) for x in SQUARE])
    assert p.ambient_dim == 3 and p.intrinsic_dim == 2
    assert p.fvector == FVector((1, 4, 4, 1))
    assert all(h.dim == 3 for h in p.facets)


def test_hull_degenerate_inputs():
    point = hull([v(2, 3), v(2, 3)])
    assert point.intrinsic_dim == 0 and point.num_vertices == 1
    assert point.fvector == FVector((1, 1))
    with pytest.raises(EmptyInputError):
        hull([])


def test_hull_is_idempotent():
    p = cube(3)
    again = hull(list(p.vertices))
    assert set(again.vertices) == set(p.vertices)
    assert set(again.facets) == set(p.facets)


def test_birkhoff_three_from_permutation_matrices():
    points = [v(*[int(perm[i] == j) for i in range(3) for j in range(3)]) for perm in permutations(range(3))]
    p = hull(points)
    assert (p.intrinsic_dim, p.num_vertices, p.num_facets) == (4, 6, 9)


def test_face_lattice_grades():
    lattice = face_lattice(simplex(2))
    assert [len(g) for g in lattice.grades] == [1, 3, 3, 1]
    cube_lattice = cube(3).lattice
    assert len(cube_lattice.all_faces()) == 28
    for f in cube_lattice.faces(2):
        assert len(cube_lattice.facets_of(f)) == 4


def test_face_lattice_is_closed_under_intersection():
    lattice = cube(3).lattice
    faces = set(lattice.all_faces())
    for a in faces:
        for b in faces:
            assert a & b in faces


@pytest.mark.parametrize(
    "p, expected",
    [
        (hull(SQUARE), (1, 4, 4, 1)),
        (bipyramid(simplex(2)), (1, 5, 9, 6, 1)),
        (pyramid(hull(SQUARE)), (1, 5, 8, 5, 1)),
        (cube(3), (1, 8, 12, 6, 1)),
        (cube(4), (1, 16, 32, 24, 8, 1)),
    ],
)
def test_f_vectors(p, expected):
    f = f_vector(p.lattice)
    assert f.entries == expected
    assert f.euler_holds()


def test_fvector_accessors():
    f = FVector.from_proper([8, 12, 6])
    assert f.dim == 3 and f.f(-1) == 1 and f.f(1) == 12 and f.f(3) == 1
    assert str(f) == "(1,8,12,6,1)"
    assert not FVector.from_proper([8, 12, 5]).euler_holds()


def test_from_representation_validates_facets():
    facets = [
        Hyperplane(v(1, 0), 0), Hyperplane(v(0, 1), 0),
        Hyperplane(v(-1, 0), -1), Hyperplane(v(0, -1), -1),
    ]
    p = Polytope.from_representation(SQUARE, facets, name="square")
    assert p.fvector.entries == (1, 4, 4, 1)
    with pytest.raises(InputError):
        Polytope.from_representation(SQUARE, facets[:3])
    with pytest.raises(InputError):
        Polytope.from_representation(SQUARE, facets + [Hyperplane(v(1, 1), 3)])


def test_lattice_isomorphism():
    square = hull(SQUARE)
    rotated = hull([v(1, 0), v(0, 1), v(-1, 0), v(0, -1)])
    iso = lattice_isomorphic(square.lattice, rotated.lattice)
    assert iso and sorted(iso.vertex_map) == [0, 1, 2, 3]
    assert not lattice_isomorphic(pyramid(square).lattice, bipyramid(simplex(2)).lattice)
    assert not lattice_isomorphic(ngon(5).lattice, square.lattice)


def test_isomorphism_capacity(monkeypatch):
    from specialsimplex.config import get_settings

    monkeypatch.setattr(get_settings(), "max_isomorphism_vertices", 3)
    with pytest.raises(CapacityError):
        lattice_isomorphic(hull(SQUARE).lattice, hull(SQUARE).lattice)


def test_subcomplex_excluding_a_cube_diagonal():
    p = cube(3)
    a = p.index_of(v(1, 1, 1))
    b = p.index_of(v(-1, -1, -1))
    complex_ = subcomplex_excluding(p.lattice, {a, b})
    assert complex_.face_counts() == (6, 6)
    assert len(complex_.maximal_faces) == 6 and complex_.is_pure
    assert complex_isomorphic(complex_, boundary_complex(ngon(6).lattice))


def test_subcomplex_excluding_a_four_cube_diagonal():
    p = cube(4)
    a = p.index_of(v(1, 1, 1, 1))
    b = p.index_of(v(-1, -1, -1, -1))
    complex_ = subcomplex_excluding(p.lattice, {a, b})
    assert complex_.dimension == 2
    assert complex_.face_counts()[2] == 12
    assert all(len(f) == 4 for f in complex_.maximal_faces)


def test_subcomplex_edge_cases():
    p = hull(SQUARE)
    boundary = boundary_complex(p.lattice)
    assert boundary.face_counts() == (4, 4)
    assert subcomplex_excluding(p.lattice, range(4)).faces == frozenset()
    with pytest.raises(InputError):
        subcomplex_excluding(p.lattice, {9})


def test_renamed_and_chart():
    p = hull([x.concat(v(5)) for x in SQUARE], name="lifted")
    q = p.renamed("other")
    assert q.name == "other" and q.vertices == p.vertices
    assert p.chart(v(1, 1, 5)).dim == 2
    assert p.lift(Hyperplane(v(1, 0), Fraction(1, 2))).dim == 3


def test_supplied_facets_take_the_same_form_as_hull_facets():
    lifted = [x.concat(v(5)) for x in SQUARE]
    # x >= 0 written with a multiple of the affine hull equation z = 5 added
    facets = [
        Hyperplane(v(1, 0, 1), 5), Hyperplane(v(0, 1, 0), 0),
        Hyperplane(v(-1, 0, 2), 9), Hyperplane(v(0, -1, 0), -1),
    ]
    p = Polytope.from_representation(lifted, facets)
    assert set(p.facets) == set(hull(lifted).facets)


def test_birkhoff_facets_match_its_hull():
    from specialsimplex.constructions import birkhoff
    from specialsimplex.schemas import polytope_model

    p = birkhoff(3).polytope
    again = hull(list(p.vertices)).renamed(p.name)
    assert set(again.facets) == set(p.facets)
    assert polytope_model(again) == polytope_model(p)


def test_a_point_has_no_facets():
    with pytest.raises(InputError):
        Polytope.from_representation([v(1, 2)], [Hyperplane(v(1, 0), 0)])
