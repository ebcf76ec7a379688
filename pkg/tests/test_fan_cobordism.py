import dataclasses
from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

import builders
from builders import BOTTOM, S2, TOP
from qtoric.exactreal import ExactMatrix, QFanError
from qtoric.fan_core import Calibration, QuantumFan, validate_fan
from qtoric.fan_cobordism import (
    ChamberLeft,
    FanCobordism,
    MissingCombinationColumn,
    NotComplete,
    NotInterior,
    NotNormalForm,
    NotValid,
    OutOfRange,
    TrivialBlowup,
    UnionsDiffer,
    VirtualMismatch,
    blowup_cobordism,
    catastrophe,
    catastrophe_fan,
    cobordism_from_polytope,
    cobordism_index,
    column_projection,
    deform_cobordism,
    merged_face_counts,
    normalize_cobordism,
    ray_counts,
    reverse_cobordism,
    same_cones,
    slice_family,
    transition_fan,
    validate_cobordism,
)
from qtoric.polytopes import Polytope


def tamper(c, **kw):
    return validate_cobordism(dataclasses.replace(c, **kw)).codes()


def test_hand_built_cobordism(ex_cob):
    assert validate_cobordism(ex_cob).ok
    assert ex_cob.is_normal_form()
    assert ex_cob.leftover() == [frozenset({0, 2, 3})]
    assert ray_counts(ex_cob) == {"total": 6, "side0": 3, "side1": 4}
    assert merged_face_counts(ex_cob) == (1, 2, 1)


def test_disjointness(ex_cob):
    assert tamper(ex_cob, sub1=list(ex_cob.sub1) + [frozenset({0, 1, 4})]) == {"DisjointnessViolated"}


def test_subfan_outside_total(ex_cob):
    assert "SubfanNotInFan" in tamper(ex_cob, sub0=list(ex_cob.sub0) + [frozenset({0, 1, 3})])


def test_leftover_count(ex_cob):
    assert "LeftoverCountViolated" in tamper(ex_cob, sub1=list(ex_cob.sub1) + [frozenset({0, 2, 3})])


def test_incomplete_total(ex_cob):
    cones = [s for s in ex_cob.total.max_cones if s != frozenset({0, 2, 3})]
    codes = tamper(ex_cob, total=QuantumFan(ex_cob.total.calibration, cones))
    assert "NotComplete" in codes


def test_h_must_delete_the_vertical_rays(ex_cob):
    assert "HNotCoordinateProjection" in tamper(ex_cob, H0=column_projection(6, [3, 5]))


def test_virtual_set(ex_cob):
    plain = ex_cob.fan0.with_calibration(ex_cob.fan0.calibration.with_virtuals([]))
    assert tamper(ex_cob, fan0=plain) == {"VirtualSetMismatch"}


def test_column_count(ex_cob):
    assert "ColumnCountViolated" in tamper(ex_cob, fan0=builders.p2())


def test_wrong_side_fan(ex_cob):
    assert "SubfanNotOnto" in tamper(ex_cob, fan1=builders.p2_marked())


def test_index_needs_valid_input(ex_cob):
    with pytest.raises(NotValid):
        cobordism_index(dataclasses.replace(ex_cob, fan0=builders.p2()))


def test_reverse_swaps_index(ex_cob):
    assert cobordism_index(reverse_cobordism(ex_cob)) == (2, 1)
    assert same_cones(catastrophe_fan(reverse_cobordism(ex_cob)), builders.p2())


def test_normalize_is_idempotent_on_normal_form(ex_cob):
    n = normalize_cobordism(ex_cob)
    assert n.is_normal_form() and validate_cobordism(n).ok
    assert cobordism_index(n) == cobordism_index(ex_cob)


def test_normalize_moves_vertical_columns_last(ex_cob):
    # put the two vertical rays first and check they return to the end
    order = [4, 5, 0, 1, 2, 3]
    pos = {j: i for i, j in enumerate(order)}
    cols = [ex_cob.total.column(j) for j in order]
    relabel = lambda s: frozenset(pos[j] for j in s)  # noqa: E731
    total = QuantumFan(Calibration(cols), [relabel(s) for s in ex_cob.total.max_cones])
    H = column_projection(6, [0, 1])
    shuffled = FanCobordism(total, [relabel(s) for s in ex_cob.sub0], [relabel(s) for s in ex_cob.sub1], ex_cob.fan0, ex_cob.fan1, ex_cob.L0, H, ex_cob.L1, H)
    assert validate_cobordism(shuffled).ok
    n = normalize_cobordism(shuffled)
    assert n.is_normal_form() and validate_cobordism(n).ok
    assert n.total.column(4)[-1] == 1 and n.total.column(5)[-1] == -1


def test_normalize_needs_shared_maps(ex_cob):
    with pytest.raises(NotNormalForm):
        normalize_cobordism(dataclasses.replace(ex_cob, H1=column_projection(6, [3, 5])))


def test_json_round_trip(ex_cob):
    again = FanCobordism.from_json(ex_cob.to_json())
    assert again.to_json() == ex_cob.to_json()
    assert validate_cobordism(again).ok


def test_catastrophe_merges_the_split_cone(ex_cob):
    cat = catastrophe(ex_cob)
    assert cat.merged == {0, 2}
    assert [sorted(s) for s in cat.sigma0] == [[0, 2]]
    assert sorted(map(sorted, cat.sigma1)) == [[0, 3], [2, 3]]
    assert same_cones(cat.fan, builders.p2()) and validate_fan(cat.fan).ok


def test_catastrophe_unions_differ(ex_cob):
    # a fourth column outside Cone((1,0), (-1,-1)) makes the projected neighbourhoods disagree
    fan1 = QuantumFan(Calibration([(1, 0), (0, 1), (-1, -1), (-2, 1)]), builders.bl_p2().max_cones)
    bad = dataclasses.replace(ex_cob, fan0=builders.p2_marked(extra=(-2, 1)), fan1=fan1)
    with pytest.raises(UnionsDiffer):
        catastrophe(bad, check=False)


def test_catastrophe_needs_normal_form(ex_cob):
    with pytest.raises(NotNormalForm):
        catastrophe(dataclasses.replace(ex_cob, L1=ExactMatrix([(2, 0, 0), (0, 1, 0)])), check=False)


def test_transition_recovers_the_blowup(ex_cob):
    t = transition_fan(ex_cob)
    assert t.alpha_index == 3 and len(t.subdivision) == 2
    assert same_cones(t.fan, builders.bl_p2())
    assert all(m.meta["report"].ok for m in t.edges.values())


def test_transition_alpha_outside(ex_cob):
    with pytest.raises(NotInterior):
        transition_fan(ex_cob, alpha=(1, 1))


def test_transition_with_explicit_alpha():
    c = cobordism_from_polytope(builders.cube_flip(), BOTTOM, TOP)
    cat = catastrophe(c)
    cols = cat.fan.calibration.columns
    alpha = tuple(sum(cols[j][r] for j in cat.merged) for r in range(3))
    t = transition_fan(c, alpha=alpha)
    assert validate_fan(t.fan).ok and t.fan.is_complete()
    assert all(m.meta["report"].ok for m in t.edges.values())


def test_slice_family(ex_cob):
    assert same_cones(slice_family(ex_cob, F(-1, 2)), builders.p2())
    assert same_cones(slice_family(ex_cob, 0), builders.p2())
    assert same_cones(slice_family(ex_cob, 1), builders.bl_p2())
    with pytest.raises(OutOfRange):
        slice_family(ex_cob, 2)
    with pytest.raises(OutOfRange):
        slice_family(ex_cob, -1 - S2)


@settings(max_examples=12, deadline=None)
@given(st.fractions(min_value=-1, max_value=1))
def test_slices_are_constant_on_each_half(t):
    c = builders.ex_cobordism()
    expect = builders.bl_p2() if t > 0 else builders.p2()
    assert same_cones(slice_family(c, t), expect)


@pytest.mark.parametrize(
    "sigma, weights, error",
    [
        ((0, 1), (1, 0), TrivialBlowup),
        ((0, 1), (1, -1), TrivialBlowup),
        ((0, 1), (1, 1), MissingCombinationColumn),
    ],
)
def test_blowup_cobordism_errors(p2, sigma, weights, error):
    with pytest.raises(error):
        blowup_cobordism(p2, sigma, weights)


def test_blowup_cobordism_center_checks(p2, p2_marked):
    with pytest.raises(QFanError, match="maximal cone"):
        blowup_cobordism(p2, (0,), (1,))
    with pytest.raises(MissingCombinationColumn):
        blowup_cobordism(p2_marked, (2, 0), (1, 1), new_index=1)
    quadrant = QuantumFan(Calibration([(1, 0), (0, 1)]), [{0, 1}])
    with pytest.raises(NotComplete):
        blowup_cobordism(quadrant, (0, 1), (1, 1), auto_extend=True)


def test_blowup_cobordism_uses_existing_virtual(p2_marked):
    c = blowup_cobordism(p2_marked, (2, 0), (1, 1))
    assert c.meta["alpha_index"] == 3 and validate_cobordism(c).ok
    assert cobordism_index(c) == (1, 2)


@settings(max_examples=6, deadline=None)
@given(st.integers(1, 4), st.integers(1, 4), st.integers(0, 2))
def test_blowup_cobordisms_of_p3_are_valid(u, v, chart):
    sigma = [(0, 1, 2), (0, 1, 3), (1, 2, 3)][chart]
    c = blowup_cobordism(builders.p3(), sigma, (u, v, 1), auto_extend=True)
    assert validate_cobordism(c).ok
    assert cobordism_index(c) == (1, 3)
    assert same_cones(catastrophe_fan(c), builders.p3())


def test_polytope_cobordism_needs_horizontal_facets():
    A = [(1, 0, 0), (0, 1, 0), (-1, -1, 0), (0, F(1, 10), 1), (0, 0, -1), (0, -1, F(-3, 4))]
    b = [0, 0, -2, -1, -1, F(-7, 4)]
    with pytest.raises(NotNormalForm):
        cobordism_from_polytope(Polytope.from_inequalities(A, b), (0, F(1, 10), 1), (0, 0, -1))


def test_triangle_cobordism_index(triangle):
    c = cobordism_from_polytope(triangle, (0, 0, 1), (0, 0, -1))
    assert validate_cobordism(c).ok and cobordism_index(c) == (1, 2)


def test_deformation_keeps_the_chamber(ex_cob):
    d = deform_cobordism(ex_cob, [(1, 0), (0, 1), (-1, -1), (0, -2)], side=1)
    assert d.meta["frobenius_sq"] == 1
    assert cobordism_index(d) == (1, 2)
    assert d.total.column(3) == (0, -2, -1)


def test_deformation_errors(ex_cob):
    with pytest.raises(VirtualMismatch):
        deform_cobordism(ex_cob, [(1, 0), (0, 1), (-1, -1), (0, -2)], side=0)
    with pytest.raises(ChamberLeft):
        deform_cobordism(ex_cob, [(1, 0), (0, 1), (-1, -1), (1, 1)], side=1)
    with pytest.raises(QFanError):
        deform_cobordism(ex_cob, [(1, 0), (0, 1)], side=1)
