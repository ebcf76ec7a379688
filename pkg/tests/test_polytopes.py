from fractions import Fraction as F

import pytest
from hypothesis import assume, given, settings, strategies as st

import builders
import oracles
from builders import BOTTOM, TOP, S2
from qtoric.fan_core import validate_fan
from qtoric.fan_cobordism import max_cone_rays, same_cones
from qtoric.polytopes import (
    DegeneratePolytope,
    EmptyPolytope,
    EmptySlice,
    FacetsIntersect,
    InvalidIndex,
    NotAFacet,
    NotAdmissible,
    NotElementary,
    Polytope,
    Unbounded,
    catastrophe_polytope,
    classify_cobordism,
    cobordism_surgery,
    flip_index,
    lvm_admissible,
    lvm_polytope,
    normal_fan,
    slice_polytope,
    surgery_descriptor,
    transition_polytope,
    truncate_vertex,
    zero_in_hull,
)

pts2 = st.lists(st.tuples(st.integers(-5, 5), st.integers(-5, 5)), min_size=3, max_size=12)


@settings(max_examples=80, deadline=None)
@given(pts2)
def test_planar_vertices_match_monotone_chain(points):
    hull = oracles.hull_2d(points)
    assume(len(hull) >= 3)
    P = Polytope(points)
    assert set(P.vertices) == set(hull)
    assert len(P.facets) == len(hull)
    for f in P.facets:
        assert all(f.value(v) >= 0 for v in P.vertices)
        assert len(f.vertices) == 2


def square():
    return Polytope.from_inequalities([(1, 0), (0, 1), (-1, 0), (0, -1)], [0, 0, -1, -1])


def test_unit_square():
    P = square()
    assert set(P.vertices) == {(0, 0), (1, 0), (0, 1), (1, 1)}
    assert P.dim == 2 and P.is_simple()
    assert P.contains((F(1, 2), F(1, 2))) and not P.contains((2, 0))
    fan = normal_fan(P)
    assert validate_fan(fan).ok and fan.is_complete() and len(fan.max_cones) == 4


def test_cube_f_vector(cube):
    P = cube.facet_polytope(cube.facet_index(BOTTOM), drop_axis=3)
    assert P.f_vector() == (8, 12, 6, 1)


def test_inequality_errors():
    with pytest.raises(Unbounded):
        Polytope.from_inequalities([(1, 0), (0, 1)], [0, 0])
    with pytest.raises(EmptyPolytope):
        Polytope.from_inequalities([(1, 0), (-1, 0), (0, 1), (0, -1)], [1, 0, 0, -1])
    with pytest.raises(EmptyPolytope):
        Polytope([])


def test_equalities_give_lower_dimension():
    P = Polytope.from_inequalities([(1, 0, 0), (0, 1, 0), (0, 0, 1)], [0, 0, 0], [(1, 1, 1)], [1])
    assert P.dim == 2 and len(P.vertices) == 3
    with pytest.raises(DegeneratePolytope):
        normal_fan(P)


def test_irrational_polytope():
    P = Polytope([(0, 0), (1, 0), (0, S2)])
    assert len(P.facets) == 3
    fan = normal_fan(P)
    assert validate_fan(fan).ok and fan.is_complete()
    assert Polytope.from_json(P.to_json()).vertices == P.vertices


def test_facet_lookup(cube):
    assert cube.facet_index(BOTTOM) == cube.facet_index((0, 0, 0, 2))
    with pytest.raises(NotAFacet):
        cube.facet_index((1, 1, 1, 1))
    with pytest.raises(NotAFacet):
        cube.facet_index(99)


def test_cube_cobordism_classification(cube):
    cob = classify_cobordism(cube, BOTTOM, TOP)
    assert cob.kind == "elementary" and len(cob.interior_vertices) == 1
    assert flip_index(cob) == (2, 2)
    assert flip_index(cob.swapped()) == (2, 2)


def test_triangle_cobordism(triangle):
    cob = classify_cobordism(triangle, (0, 0, 1), (0, 0, -1))
    assert flip_index(cob) == (1, 2)
    assert flip_index(cob.swapped()) == (2, 1)
    assert cobordism_surgery(cob, 1) == {"a": 1, "b": 2, "p": 1, "removed": "S^1 x D^4 x (S^1)^1", "glued": "D^2 x S^3 x (S^1)^1"}


def test_trivial_cobordism():
    prism = Polytope([(x, y, z) for x, y in ((0, 0), (1, 0), (0, 1)) for z in (0, 1)])
    cob = classify_cobordism(prism, (0, 0, 1), (0, 0, -1))
    assert cob.kind == "trivial"
    with pytest.raises(NotElementary):
        flip_index(cob)


def test_intersecting_facets(cube):
    with pytest.raises(FacetsIntersect):
        classify_cobordism(cube, BOTTOM, (1, 0, 0, 0))


def test_slices(cube):
    S = slice_polytope(cube, 0)
    assert S.ambient_dim == 3 and S.dim == 3
    with pytest.raises(EmptySlice):
        slice_polytope(cube, 1)
    with pytest.raises(EmptySlice):
        slice_polytope(cube, 2)


def test_slice_along_direction(cube):
    S = slice_polytope(cube, F(1, 2), axis=(0, 0, 0, 1))
    assert S.ambient_dim == 4 and S.dim == 3


def test_catastrophe_and_transition_polytopes(cube):
    cob = classify_cobordism(cube, BOTTOM, TOP)
    C = catastrophe_polytope(cob)
    assert len(C.non_simple_vertices()) == 1
    T = transition_polytope(cob)
    assert T.is_simple() and len(T.vertices) == len(C.vertices) + 3


def test_transition_of_simple_catastrophe(triangle):
    cob = classify_cobordism(triangle, (0, 0, 1), (0, 0, -1))
    C = catastrophe_polytope(cob)
    assert C.is_simple()
    T = transition_polytope(cob)
    assert same_cones(normal_fan(T), normal_fan(triangle.facet_polytope(cob.Q_facet, 2)))


def test_truncate_vertex_of_square_pyramid():
    apex = Polytope([(0, 0, 0), (1, 0, 0), (0, 1, 0), (1, 1, 0), (F(1, 2), F(1, 2), 1)])
    top = next(i for i, v in enumerate(apex.vertices) if v[2] == 1)
    assert apex.non_simple_vertices() == [top]
    cut = truncate_vertex(apex, top)
    assert cut.is_simple() and len(cut.vertices) == 8


def test_lvm_admissibility():
    assert zero_in_hull([(1, 0), (-1, 0)])
    assert not zero_in_hull([(1, 0), (0, 1)])
    adm = lvm_admissible([[1, 1, 1], [0, 1, -1]])
    assert not adm.siegel
    adm = lvm_admissible([[1, -1, 1, -1], [0, 0, 1, -1]])
    assert adm.siegel and not adm.weak_hyperbolic
    assert adm.to_json()["violating_subset"] == [1, 2]
    with pytest.raises(NotAdmissible):
        lvm_polytope([[1, -1, 1, -1], [0, 0, 1, -1]])


def test_lvm_triangle():
    P = lvm_polytope([[1, 0, -1, -1, -1], [0, 1, -1, -1, -1]])
    assert P.dim == 2 and len(P.vertices) == 3 and P.is_simple()
    for v in P.vertices:
        assert sum(v) == 1 and all(x >= 0 for x in v)


def test_surgery_descriptor():
    assert surgery_descriptor(2, 2, 0) == {"a": 2, "b": 2, "p": 0, "removed": "S^3 x D^4", "glued": "D^4 x S^3"}
    with pytest.raises(InvalidIndex):
        surgery_descriptor(0, 2, 0)
    with pytest.raises(InvalidIndex):
        surgery_descriptor(1, 2, -1)


def test_normal_fans_of_facets_are_simplicial(cube, triangle):
    for W, ids in ((cube, (BOTTOM, TOP)), (triangle, ((0, 0, 1), (0, 0, -1)))):
        for ident in ids:
            F_ = W.facet_polytope(ident, drop_axis=W.ambient_dim - 1)
            fan = normal_fan(F_)
            assert F_.is_simple() and fan.is_simplicial() and validate_fan(fan).ok
            assert max_cone_rays(fan) == oracles.projected_subfan(W, W.facets[W.facet_index(ident)].vertices)
