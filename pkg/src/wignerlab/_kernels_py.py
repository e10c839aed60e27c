"""Pure-Python (numpy) implementations of the hot loops.

Same signatures and results as the compiled ``_kernels`` module; used when
the extension is not built or when WIGNERLAB_PURE=1.
"""
from __future__ import annotations

import numpy as np

BACKEND = "python"


def lhv_margins(weights, trans):
    """Margins of the 4 static variants and the dynamic inequality per trial.

    ``weights`` is (n, 8) over antifermion sign triples, ``trans`` is (n, 4)
    holding (a_pp, a_mp, b_pp, b_mp). Returns an (n, 5) array.
    """
    s = np.ascontiguousarray(weights, dtype=float).reshape(-1, 2, 2, 2)  # [n, ia, ib, ic]
    t = np.ascontiguousarray(trans, dtype=float)
    # block[s2][s1]; the fermion sign index is 1 - antifermion index
    ab = np.stack([[s[:, 1, 0].sum(-1), s[:, 1, 1].sum(-1)],
                   [s[:, 0, 0].sum(-1), s[:, 0, 1].sum(-1)]])
    cb = np.stack([[s[:, :, 0, 1].sum(1), s[:, :, 1, 1].sum(1)],
                   [s[:, :, 0, 0].sum(1), s[:, :, 1, 0].sum(1)]])
    ac = np.stack([[s[:, 1, :, 0].sum(1), s[:, 1, :, 1].sum(1)],
                   [s[:, 0, :, 0].sum(1), s[:, 0, :, 1].sum(1)]])
    out = np.empty((s.shape[0], 5))
    out[:, 0] = ab[0, 0] - (cb[0, 0] + ac[0, 0])
    out[:, 1] = ab[0, 1] - (cb[0, 1] + ac[0, 0])
    out[:, 2] = ab[1, 0] - (cb[0, 0] + ac[1, 0])
    out[:, 3] = ab[1, 1] - (cb[0, 1] + ac[1, 0])
    a_pp, a_mp, b_pp, b_mp = t.T
    lhs = (a_pp * b_pp * ab[0, 0] + a_mp * b_pp * ab[1, 0]
           + a_pp * b_mp * ab[0, 1] + a_mp * b_mp * ab[1, 1])
    b_in = b_pp + b_mp
    a_in = a_pp + a_mp
    rhs = (a_pp * b_in * ac[0, 0] + a_mp * b_in * ac[1, 0]
           + b_pp * a_in * cb[0, 0] + b_mp * a_in * cb[0, 1])
    out[:, 4] = lhs - rhs
    return out


def spin_margins(theta_ba, theta_ca, theta_bc, omega_t):
    """Elementwise margin of the precessing-pair inequality (broadcasting)."""
    ba, ca, bc, wt = np.broadcast_arrays(*(np.asarray(v, dtype=float)
                                           for v in (theta_ba, theta_ca, theta_bc, omega_t)))
    lhs = np.sin(0.5 * ba + 2.0 * wt) ** 2
    rhs = 2.0 * np.sin(wt) ** 2 + np.cos(2.0 * wt) * (np.sin(0.5 * ca) ** 2 + np.sin(0.5 * bc) ** 2)
    return lhs - rhs


def spin_grid_argmax(theta_ba, theta_ca, theta_bc, omega_t):
    """Best margin over the outer-product lattice; ties go to the lowest row-major index."""
    ba = np.asarray(theta_ba, dtype=float)
    ca = np.asarray(theta_ca, dtype=float)
    bc = np.asarray(theta_bc, dtype=float)
    wt = np.asarray(omega_t, dtype=float)
    best = -np.inf
    best_idx = (0, 0, 0, 0)
    # slab over the first axis keeps memory at len(ca)*len(bc)*len(wt)
    sw = 2.0 * np.sin(wt) ** 2
    cw = np.cos(2.0 * wt)
    s = np.sin(0.5 * ca)[:, None] ** 2 + np.sin(0.5 * bc)[None, :] ** 2
    rhs = sw[None, None, :] + cw[None, None, :] * s[:, :, None]
    for i, x in enumerate(ba):
        lhs = np.sin(0.5 * x + 2.0 * wt) ** 2
        m = lhs[None, None, :] - rhs
        k = int(np.argmax(m))
        if m.flat[k] > best:
            best = float(m.flat[k])
            best_idx = (i,) + np.unravel_index(k, m.shape)
    return best, tuple(int(v) for v in best_idx)


def ratio_violation_count(ratio, angles, tol):
    """Number of rows (theta_ba, theta_ca, theta_bc) violating the ratio inequality."""
    a = np.asarray(angles, dtype=float)
    lhs = ratio * np.sin(0.5 * a[:, 0]) ** 2
    rhs = np.sin(0.5 * a[:, 1]) ** 2 + np.sin(0.5 * a[:, 2]) ** 2
    return int(np.count_nonzero(lhs - rhs > tol))
