import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from oracles import bracket_mp
from wignerlab.qft import (
    PlateauWarning,
    QftParams,
    TimeWindow,
    decay_rate,
    integrated_probability,
    perturbativity_ok,
    rate_bracket,
    ratio_inequality,
    violation_region_fraction,
)
from wignerlab.specfun import si_oracle
from wignerlab.wigner import JointProbabilityTable, static_wigner

QP = QftParams(1.0, 1e-6)
angle = st.floats(min_value=0.0, max_value=math.pi)


def test_params_validation():
    with pytest.raises(ValueError):
        QftParams(1.0, 0.01)
    with pytest.raises(ValueError):
        QftParams(-1.0, 1e-6)
    assert QftParams.from_coupling(0.01, 2.0).Gamma0 == pytest.approx(1e-4 * 2 / (8 * math.pi))
    with pytest.raises(ValueError):
        TimeWindow(2.0, 1.0)


@pytest.mark.parametrize("x", np.geomspace(1e-3, 1e4, 29))
def test_bracket_against_mpmath_and_positive(x):
    b = rate_bracket(x)
    assert b > 0
    assert abs(b - bracket_mp(x)) <= 1e-12 * max(1.0, 1.0 / x)


def test_bracket_regimes():
    assert abs(rate_bracket(1e3) - 1) <= 2e-3
    assert rate_bracket(0.01) == pytest.approx(0.5 + 2 / (math.pi * 0.01), rel=0.01)
    assert 1e-4 * (rate_bracket(1e-4) - 0.5) == pytest.approx(2 / math.pi, abs=1e-4)
    for x in (1e-3, 1e-2, 3e-2):
        slope = (rate_bracket(x) - 0.5 - 2 / (math.pi * x)) / x
        assert slope == pytest.approx(1 / (3 * math.pi), rel=0.02)
    with pytest.raises(ValueError):
        rate_bracket(0.0)


@given(st.floats(min_value=10.0, max_value=1e4))
def test_bracket_envelope(x):
    assert abs(rate_bracket(x) - 1) <= 3 / x


def test_decay_rate():
    assert decay_rate(0.0, 5.0, QP) == 0.0
    assert decay_rate(math.pi, 1e5, QP) == pytest.approx(QP.Gamma0 / 2, rel=1e-4)
    x = 50.0
    b = 1 + si_oracle(x) / math.pi + math.sin(x) / (math.pi * x * x) + math.cos(x) / (math.pi * x)
    assert abs(decay_rate(math.pi / 2, x, QP) - 0.5 * QP.Gamma0 * b * 0.5) <= 1e-10


def test_perturbativity():
    assert perturbativity_ok(QP, 100.0).ok and perturbativity_ok(QP, 100.0).window_ok
    assert not perturbativity_ok(QP, 0.5).window_ok
    assert not perturbativity_ok(QP, 1.0 / QP.Gamma0).window_ok


def test_integrated_probability():
    win = TimeWindow(100.0, 200.0)
    p = integrated_probability(math.pi, win, QP)
    assert p == pytest.approx(100.0 * QP.Gamma0 / 2, rel=0.02)
    doubled = integrated_probability(math.pi, TimeWindow(100.0, 300.0), QP)
    assert doubled / p == pytest.approx(2.0, rel=0.01)
    tiny = integrated_probability(math.pi, TimeWindow(100.0, 100.0 + 1e-9), QP)
    assert tiny == pytest.approx(0.0, abs=1e-14)
    with pytest.warns(PlateauWarning):
        integrated_probability(math.pi, TimeWindow(1.0, 20.0), QP)


def test_ratio_examples():
    rep = ratio_inequality(1.0, 2 * math.pi / 3, math.pi / 3, math.pi / 3)
    assert rep.margin == pytest.approx(0.25, abs=1e-12)
    rep = ratio_inequality(1.0, 0, 0, 0)
    assert rep.margin == 0 and not rep.violated
    with pytest.raises(ValueError):
        ratio_inequality(0.5, 1, 1, 1)


@given(angle, angle, angle)
def test_ratio_one_matches_static_singlet(tba, tca, tbc):
    def block(theta):
        s, c = 0.5 * math.sin(theta / 2) ** 2, 0.5 * math.cos(theta / 2) ** 2
        return [[s, c], [c, s]]

    static = static_wigner(JointProbabilityTable(block(tba), block(tbc), block(tca)))
    assert abs(ratio_inequality(1.0, tba, tca, tbc).margin - 2 * static.margin) <= 1e-12


def test_region_fraction_monotone_and_reproducible():
    fr = [violation_region_fraction(r, 200_000, seed=3) for r in (1.0, 2.0, 4.0)]
    assert 0 < fr[0].fraction < fr[1].fraction < fr[2].fraction
    assert violation_region_fraction(2.0, 200_000, seed=3) == fr[1]
    assert violation_region_fraction(1000.0, 100_000, seed=3).fraction > 0.9
    with pytest.raises(ValueError):
        violation_region_fraction(1.0, 100)
