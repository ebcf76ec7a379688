import itertools
from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

import builders
from builders import S2
from qtoric.blowup import (
    BlowupSpec,
    BudgetExhausted,
    CenterNotInCone,
    IndexNotAvailable,
    NonIntegerWeight,
    NonPositiveWeight,
    NotRational,
    UnequalSupport,
    WeightMismatch,
    blowup_fibers_reduced,
    blown_up_fan,
    chart_exponents,
    exceptional_divisor,
    extend_calibration,
    fiber_reduced,
    fiber_reduced_analytic,
    fiber_reduced_strict,
    fiber_strata,
    irrational_blowup,
    is_natural_blowup_valid,
    lcd,
    minimal_transversals,
    natural_blowup,
    rational_approximation,
    rational_blowup_fibers_reduced,
    rational_zigzag,
    standard_plane_spec,
    star_subdivision,
    zigzag_dim2,
)
from qtoric.fan_core import Calibration, QuantumFan, UnsupportedDimension, validate_fan
from qtoric.fan_maps import NotSimplicial, validate_birational, validate_morphism
from qtoric.fan_cobordism import same_cones


def test_star_subdivision_of_p2(p2_marked):
    fine = star_subdivision(p2_marked, 3, {2, 0})
    assert same_cones(fine, builders.bl_p2())
    assert fine.virtuals == frozenset() and validate_fan(fine).ok


def test_star_subdivision_at_an_edge_of_p3():
    fan, k = extend_calibration(builders.p3(), (1, 1, 0))
    fine = star_subdivision(fan, k, {0, 1, 2})
    # both maximal cones through the edge {1,2} split in two
    assert len(fine.max_cones) == 6 and validate_fan(fine).ok and fine.is_complete()


def test_star_subdivision_on_a_ray_is_identity():
    fan, k = extend_calibration(builders.p2(), (2, 0))
    assert star_subdivision(fan, k, {0, 1}) is fan


def test_star_subdivision_errors(p2_marked):
    with pytest.raises(IndexNotAvailable):
        star_subdivision(p2_marked, 0, {0, 1})
    with pytest.raises(CenterNotInCone):
        star_subdivision(p2_marked, 3, {0, 1})
    with pytest.raises(CenterNotInCone):
        star_subdivision(p2_marked, 3, {0, 3})


def test_extend_calibration_inserts_before_virtual_tail(p2_marked):
    fan, pos = extend_calibration(p2_marked, (1, 1))
    assert pos == 3
    assert fan.calibration.columns[3] == (1, 1) and fan.calibration.columns[4] == (0, -1)
    assert fan.virtuals == {3, 4}


def test_spec_validation(p2):
    with pytest.raises(WeightMismatch):
        BlowupSpec.create(p2, (0, 1), (1,))
    with pytest.raises(NonPositiveWeight):
        BlowupSpec.create(p2, (0, 1), (1, -1))
    with pytest.raises(NonPositiveWeight):
        BlowupSpec.create(p2, (0, 1), (0, 0))
    bad = QuantumFan(Calibration([(1, 0), (0, 1), (1, 1)]), [{0, 1, 2}])
    with pytest.raises(NotSimplicial):
        BlowupSpec.create(bad, (0, 1, 2), (1, 1, 1))


def test_spec_checks_existing_column(p2_marked):
    assert BlowupSpec(p2_marked, (2, 0), (1, 1), 3).alpha() == (0, -1)
    with pytest.raises(WeightMismatch):
        BlowupSpec(p2_marked, (2, 0), (1, 2), 3)


@pytest.mark.parametrize("v", [(F(1, 2), 1), (F(3, 2), 2), (S2, 1)])
def test_natural_blowup_refused_for_non_integers(v):
    spec = standard_plane_spec(v)
    with pytest.raises(NonIntegerWeight):
        natural_blowup(spec)
    assert not is_natural_blowup_valid(spec)


def test_integer_blowup_morphism():
    m = natural_blowup(standard_plane_spec((2, 3)))
    assert validate_morphism(m).ok
    assert m.H.column(2) == (2, 3, 0)


def test_irrational_blowup_witness():
    b = irrational_blowup(standard_plane_spec((1, S2)))
    assert b.meta["report"].ok
    assert b.meta["witness"].source_exceptional == {2}


def test_rational_zigzag_legs():
    legs = rational_zigzag((F(1, 2), F(2, 3)))
    assert legs.N == 6
    assert validate_morphism(legs.up).ok and validate_morphism(legs.down).ok
    assert legs.dashed() == legs.H
    assert legs.H.column(2) == (F(1, 2), F(2, 3), 0)


def test_lcd():
    assert lcd((F(1, 2), F(2, 3), 1)) == 6
    with pytest.raises(NotRational):
        lcd((S2,))


def test_chart_exponents():
    assert chart_exponents((2, 3), 0).exponents == ((2, 0), (3, 1))
    assert chart_exponents((1, 1), 1, N=2).exponents == ((2, 2), (0, 2))


def test_fiber_reducedness_readings():
    assert not fiber_reduced((1, 2), (), 0)
    assert not fiber_reduced((1, 2), {1}, 0)
    assert fiber_reduced((2, 1), {1}, 0)
    assert fiber_reduced_strict((2, 1), {1}, 0)
    assert not fiber_reduced_strict((2, 3), {1}, 0)
    assert not fiber_reduced_analytic((2, 1), (), 0)
    assert fiber_reduced_analytic((1, 2), (), 0)
    with pytest.raises(ValueError):
        fiber_reduced((1, 1), {0}, 0)


def test_readings_disagree_at_generic_point():
    # chart weight 1, the other weight 2: only the strict reading accepts
    assert fiber_reduced_strict((1, 2), {1}, 0)
    assert not fiber_reduced((1, 2), {1}, 0)
    assert fiber_reduced_analytic((1, 2), {1}, 0)


@given(st.lists(st.integers(1, 4), min_size=2, max_size=5))
def test_reduced_only_for_all_ones(v):
    assert blowup_fibers_reduced(v) == all(x == 1 for x in v)


def test_rational_reducedness():
    assert rational_blowup_fibers_reduced((1, 1))
    assert not rational_blowup_fibers_reduced((F(1, 2), F(1, 2)))


def test_single_weight_rejected():
    with pytest.raises(ValueError):
        blowup_fibers_reduced((1,))


@settings(max_examples=60)
@given(st.lists(st.frozensets(st.integers(0, 4), min_size=1, max_size=3), min_size=1, max_size=4))
def test_minimal_transversals_against_brute_force(edges):
    universe = sorted(set().union(*edges))
    hits = [frozenset(s) for r in range(len(universe) + 1) for s in itertools.combinations(universe, r) if all(set(s) & e for e in edges)]
    minimal = {s for s in hits if not any(t < s for t in hits)}
    assert set(minimal_transversals(edges)) == minimal


def test_fiber_strata_mixed_with_names():
    strata = fiber_strata([[1, 0, 0], [0, 2, 1]], {1}, names=["a", "b"])
    assert [s.to_json()["A"] for s in strata] == [[1]]
    assert "b" in strata[0].descriptor


def test_fiber_unreachable_target():
    assert fiber_strata([[1, 1], [0, 1]], {0}) == []


def test_fiber_rejects_bad_exponents():
    with pytest.raises(ValueError):
        fiber_strata([[1, -1], [0, 1]], None)
    with pytest.raises(ValueError):
        fiber_strata([[F(1, 2), 0], [0, 1]], None)


def test_fiber_stratum_json():
    (s,) = fiber_strata([[2, 0], [0, 3]], None)
    obj = s.to_json()
    assert obj["kind"] == "torus" and obj["A"] == [] and obj["free"] == [1, 2]
    assert obj["descriptor"] == "E(L_A^-1 (w1,w2)) [6 components]"


def test_exceptional_divisor_needs_full_center():
    spec = BlowupSpec.create(builders.p3(), (0, 1), (1, 1))
    with pytest.raises(NotSimplicial):
        exceptional_divisor(spec)


def test_exceptional_divisor_chart_independence():
    spec = BlowupSpec.create(builders.p3(), (0, 1, 2), (1, S2, 2))
    fans = [exceptional_divisor(spec, chart) for chart in range(3)]
    for f in fans:
        assert validate_fan(f).ok and f.is_complete()


def test_zigzag_single_steps(p2):
    up = zigzag_dim2(p2, builders.bl_p2())
    assert [s.kind for s in up.steps] == ["blowup"]
    assert up.steps[0].weights == (1, 1)
    down = zigzag_dim2(builders.bl_p2(), p2)
    assert [s.kind for s in down.steps] == ["blowdown"]
    for z in (up, down):
        for st_ in z.steps:
            assert validate_birational(st_.morphism)[0].ok


def test_zigzag_irrational_weights():
    f2 = QuantumFan(Calibration([(1, 0), (0, 1), (-1, -1), (1, S2)]), [{0, 3}, {3, 1}, {1, 2}, {2, 0}])
    z = zigzag_dim2(builders.p2(), f2)
    assert len(z.steps) == 1 and z.steps[0].weights == (1, S2)


def test_zigzag_errors(p2):
    half = QuantumFan(Calibration([(1, 0), (0, 1), (-1, 0)]), [{0, 1}, {1, 2}])
    with pytest.raises(UnequalSupport):
        zigzag_dim2(p2, half)
    with pytest.raises(UnsupportedDimension):
        zigzag_dim2(builders.p3(), builders.p3())


def test_rational_approximation(p2):
    assert rational_approximation(p2) == (p2, 1)
    f = QuantumFan(Calibration([(1, 0), (0, 1), (-1, -1), (1, S2)]), [{0, 3}, {3, 1}, {1, 2}, {2, 0}])
    g, Q = rational_approximation(f)
    assert Q == 16 and g.cones == f.cones
    assert g.calibration.columns[3] == (1, F(23, 16))


def test_rational_approximation_budget():
    thin = QuantumFan(Calibration([(1, 0), (1, S2 / 1000), (0, 1), (-1, -1)]), [{0, 1}, {1, 2}, {2, 3}, {3, 0}])
    with pytest.raises(BudgetExhausted):
        rational_approximation(thin, ladder=(2, 4))
    g, Q = rational_approximation(thin)
    assert Q > 4 and validate_fan(g).ok


def test_blown_up_fan_of_plane():
    fine = blown_up_fan(standard_plane_spec((1, 1)))
    assert sorted(map(sorted, fine.max_cones)) == [[0, 2], [1, 2]]
