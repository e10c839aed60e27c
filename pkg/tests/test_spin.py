import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from oracles import averaged_margin_quad
from wignerlab.qm2 import joint_probability, pair_state_at, spinor_minus, spinor_plus
from wignerlab.spin import (
    THETA_STAR,
    ResolutionParams,
    SpinScenarioParams,
    assemble_dynamic_operands,
    averaged_inequality,
    delta_threshold,
    kappa,
    larmor_omega,
    model_inequality,
    probabilities_in_field,
    resolution_bound,
)
from wignerlab.wigner import JointProbabilityTable, dynamic_wigner, static_wigner

angle = st.floats(min_value=-2 * math.pi, max_value=2 * math.pi)
params = st.builds(SpinScenarioParams, angle, angle, angle, angle)


def sin2(x):
    return math.sin(x) ** 2


def test_probabilities_examples():
    w_ab, _, _ = probabilities_in_field(SpinScenarioParams(2 * math.pi / 3, 0, 0, 0))
    assert w_ab == pytest.approx(3 / 8, abs=1e-15)
    assert probabilities_in_field(SpinScenarioParams(0, 1, 1, 0))[0] == 0.0


def test_probabilities_against_born_rule():
    # axes a = 0, b = theta_ba, c = theta_ca; theta_bc = theta_ba - theta_ca
    grid = np.linspace(-math.pi, math.pi, 20)
    for tb, tc, wt in itertools.product(grid, grid, grid[::2]):
        p = SpinScenarioParams(tb, tc, tb - tc, wt)
        psi = pair_state_at(wt)
        expect = (
            joint_probability(psi, spinor_plus(0.0), spinor_plus(tb)),
            joint_probability(psi, spinor_minus(0.0), spinor_plus(tc)),
            joint_probability(psi, spinor_plus(tc), spinor_minus(tb)),
        )
        np.testing.assert_allclose(probabilities_in_field(p), expect, atol=1e-12)


def test_named_configurations():
    rep = model_inequality(SpinScenarioParams(2 * math.pi / 3, math.pi / 3, math.pi / 3, 0.0))
    assert (rep.lhs, rep.rhs) == pytest.approx((0.75, 0.5), abs=1e-12)
    rep = model_inequality(SpinScenarioParams(4 * math.pi / 3, 2 * math.pi / 3, 2 * math.pi / 3, math.pi / 2))
    assert rep.margin == pytest.approx(0.25, abs=1e-12)
    rep = model_inequality(SpinScenarioParams.max_violation())
    assert math.cos(2 * THETA_STAR) == pytest.approx(0.25)
    assert rep.margin == pytest.approx(9 / 16, abs=1e-12)


@given(angle, angle, angle, st.integers(-3, 3))
def test_reduces_to_static_at_integer_periods(tba, tca, tbc, n):
    rep = model_inequality(SpinScenarioParams(tba, tca, tbc, n * math.pi))
    static = sin2(tba / 2) - sin2(tca / 2) - sin2(tbc / 2)
    assert abs(rep.margin - static) <= 1e-12


@given(angle, angle, angle, st.integers(-3, 3))
def test_half_period_case(tba, tca, tbc, n):
    rep = model_inequality(SpinScenarioParams(tba, tca, tbc, math.pi / 2 + n * math.pi))
    assert abs(rep.margin - (sin2(tba / 2) + sin2(tca / 2) + sin2(tbc / 2) - 2)) <= 1e-12


@given(params)
def test_periodicity(p):
    shifted = SpinScenarioParams(p.theta_ba, p.theta_ca, p.theta_bc, p.omega_t + math.pi)
    assert abs(model_inequality(p).margin - model_inequality(shifted).margin) <= 1e-12


@given(params)
@settings(max_examples=1000)
def test_dynamic_margin_is_half_model_margin(p):
    table, trans, lhs = assemble_dynamic_operands(p)
    rep = dynamic_wigner(table, trans, lhs)
    assert abs(rep.margin - 0.5 * model_inequality(p).margin) <= 1e-12


def test_dynamic_operands_examples():
    table, trans, _ = assemble_dynamic_operands(SpinScenarioParams(1, 2, 3, 0.0))
    assert trans.as_array().tolist() == [1.0, 0.0, 1.0, 0.0]
    table, trans, lhs = assemble_dynamic_operands(SpinScenarioParams.max_violation())
    assert dynamic_wigner(table, trans, lhs).margin == pytest.approx(9 / 32, abs=1e-12)
    # static on the same operands equals the ratio-1 singlet form
    s = static_wigner(JointProbabilityTable(table.ab, table.cb, table.ac))
    assert s.lhs == pytest.approx(0.5 * sin2(THETA_STAR), abs=1e-15)


@given(params, st.floats(0.0, 3.0))
@settings(max_examples=150, deadline=None)
def test_averaged_against_quadrature(p, delta):
    rep = averaged_inequality(p, ResolutionParams(delta))
    oracle = averaged_margin_quad(p.theta_ba, p.theta_ca, p.theta_bc, p.omega_t, delta)
    assert abs(rep.margin - oracle) <= 1e-9


def test_averaged_limits():
    p = SpinScenarioParams.max_violation()
    small = averaged_inequality(p, ResolutionParams(1e-8))
    assert abs(small.margin - model_inequality(p).margin) <= 1e-6
    wide = averaged_inequality(p, ResolutionParams(1e3))
    assert abs(wide.lhs) < 1e-3 and not wide.violated
    with pytest.raises(ValueError):
        ResolutionParams(-0.1)


def test_kappa_values():
    assert kappa(0.0) == 0.5625
    assert 0.44 + 0.62 - 0.5 == pytest.approx(kappa(0.0), abs=0.005)
    assert kappa(2.0) < 0
    with pytest.raises(ValueError):
        kappa(-1.0)


@pytest.mark.parametrize("delta", np.linspace(0.0, 2.0, 41))
def test_kappa_is_averaged_margin_at_max_violation(delta):
    p = SpinScenarioParams.max_violation()
    oracle = averaged_margin_quad(p.theta_ba, p.theta_ca, p.theta_bc, p.omega_t, delta)
    assert abs(kappa(delta) - oracle) <= 1e-9
    assert kappa(delta) == pytest.approx(averaged_inequality(p, ResolutionParams(delta)).margin, abs=1e-15)


def test_delta_threshold_is_first_root():
    root = delta_threshold()
    assert abs(kappa(root)) <= 1e-9
    assert kappa(root - 0.01) > 0 > kappa(root + 0.01)
    # no earlier sign change
    assert all(kappa(d) > 0 for d in np.linspace(0, root - 1e-6, 2000))
    # computed first root of K(delta); see README "Known discrepancies"
    assert root == pytest.approx(0.6932387706, abs=1e-8)


def test_larmor_and_resolution():
    assert resolution_bound(1.7) == pytest.approx(1.0)
    w_e = larmor_omega(1.0)
    assert w_e == pytest.approx(8.794e10, rel=1e-3)
    assert resolution_bound(w_e) == pytest.approx(1.933e-11, rel=1e-3)
    from scipy.constants import m_p
    ratio = resolution_bound(larmor_omega(1.0, mass=m_p)) / resolution_bound(w_e)
    assert ratio == pytest.approx(1836.15, rel=1e-5)
    with pytest.raises(ValueError):
        larmor_omega(0.0)
    with pytest.raises(ValueError):
        resolution_bound(-1.0)
