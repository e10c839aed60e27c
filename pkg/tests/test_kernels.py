import importlib
import math
import subprocess
import sys

import numpy as np
import pytest

from wignerlab import _kernels_py, kernels
from wignerlab.spin import SpinScenarioParams, model_inequality
from wignerlab.wigner import HiddenVariableModel, TransitionTable, dynamic_wigner, lhv_dynamic_operands, static_wigner

try:
    compiled = importlib.import_module("wignerlab._kernels")
except ImportError:  # pure-Python install
    compiled = None

backends = [_kernels_py] + ([compiled] if compiled is not None else [])


@pytest.mark.parametrize("mod", backends, ids=lambda m: m.BACKEND)
def test_lhv_margins_match_scalar_path(mod):
    rng = np.random.default_rng(1)
    w = rng.dirichlet(np.ones(8), 200)
    t = rng.random((200, 4))
    out = mod.lhv_margins(w, t)
    for k in range(200):
        model = HiddenVariableModel(w[k] / w[k].sum())
        trans = TransitionTable(*t[k])
        table, lhs = lhv_dynamic_operands(model, trans)
        expect = [static_wigner(table, v).margin for v in range(4)]
        expect.append(dynamic_wigner(table, trans, lhs).margin)
        np.testing.assert_allclose(out[k], expect, atol=1e-15)


@pytest.mark.parametrize("mod", backends, ids=lambda m: m.BACKEND)
def test_spin_margins_match_scalar_path(mod):
    rng = np.random.default_rng(2)
    p = rng.uniform(-7, 7, (4, 300))
    out = mod.spin_margins(*p)
    for k in range(300):
        assert out[k] == pytest.approx(model_inequality(SpinScenarioParams(*p[:, k])).margin, abs=1e-15)


@pytest.mark.parametrize("mod", backends, ids=lambda m: m.BACKEND)
def test_grid_argmax_and_ties(mod):
    g = np.linspace(0, math.pi, 7)
    best, idx = mod.spin_grid_argmax(g, g, g, g)
    full = _kernels_py.spin_margins(*np.meshgrid(g, g, g, g, indexing="ij"))
    assert best == full.max()
    assert np.ravel_multi_index(idx, full.shape) == int(np.argmax(full))


@pytest.mark.parametrize("mod", backends, ids=lambda m: m.BACKEND)
def test_ratio_violation_count(mod):
    rng = np.random.default_rng(4)
    ang = rng.uniform(0, math.pi, (5000, 3))
    s = np.sin(0.5 * ang) ** 2
    expect = int(np.sum(2.0 * s[:, 0] - s[:, 1] - s[:, 2] > 1e-9))
    assert mod.ratio_violation_count(2.0, ang, 1e-9) == expect


@pytest.mark.skipif(compiled is None, reason="compiled kernels not built")
def test_backends_bitwise_equal():
    rng = np.random.default_rng(9)
    w = rng.dirichlet(np.ones(8), 1000)
    t = rng.random((1000, 4))
    np.testing.assert_array_equal(compiled.lhv_margins(w, t), _kernels_py.lhv_margins(w, t))
    g = np.linspace(0, 2 * math.pi, 11)
    assert compiled.spin_grid_argmax(g, g, g, g[:6]) == _kernels_py.spin_grid_argmax(g, g, g, g[:6])


def test_pure_env_forces_fallback():
    code = "import wignerlab.kernels as k; print(k.BACKEND)"
    out = subprocess.run(
        [sys.executable, "-c", code], capture_output=True, text=True, check=True,
        env={"WIGNERLAB_PURE": "1", "PATH": ""},
    )
    assert out.stdout.strip() == "python"
    assert kernels.BACKEND in ("python", "cython")
