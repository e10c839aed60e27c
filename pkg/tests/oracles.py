"""Independent reference computations used by the tests.

Nothing here reuses the closed forms under test: meson quantities come from
explicit 2x2 matrix evolution, averaged margins from adaptive quadrature,
and special functions from mpmath.
"""
import cmath
import math

import mpmath
import numpy as np
from scipy import integrate

# --- meson amplitudes -------------------------------------------------------
# basis (B, Bbar); kets as length-2 complex vectors


def flavour_states(p, q, alpha):
    B = np.array([1.0, 0.0], dtype=complex)
    Bbar = np.array([0.0, 1.0], dtype=complex)
    ph = cmath.exp(1j * alpha)
    return {
        "B": B,
        "Bbar": Bbar,
        "B1": (B - ph * Bbar) / math.sqrt(2.0),
        "B2": (B + ph * Bbar) / math.sqrt(2.0),
        "BL": p * B + q * Bbar,
        "BH": p * B - q * Bbar,
    }


def evolution(t, p, q, gamma_L, gamma_H, m_L, m_H):
    """Non-unitary U(t) = V diag(exp(-i E t)) V^-1 with V = [BL, BH]."""
    V = np.array([[p, p], [q, -q]], dtype=complex)
    E = np.array([complex(m_L, -0.5 * gamma_L), complex(m_H, -0.5 * gamma_H)])
    return V @ np.diag(np.exp(-1j * E * t)) @ np.linalg.inv(V)


def pair_t0():
    # (|B>_2 |Bbar>_1 - |Bbar>_2 |B>_1)/sqrt2 as amp[slot2][slot1]
    return np.array([[0.0, 1.0], [-1.0, 0.0]], dtype=complex) / math.sqrt(2.0)


def pair_prob(psi, x2, x1):
    return abs(np.conj(x2) @ psi @ np.conj(x1)) ** 2


def meson_oracle(t, mp):
    """Five dynamic probabilities and the pair norm from matrix evolution."""
    s = flavour_states(mp.p, mp.q, mp.alpha)
    U = evolution(t, mp.p, mp.q, mp.gamma_L, mp.gamma_H, mp.m_L, mp.m_H)
    psi = U @ pair_t0() @ U.T
    ov = lambda a, b: abs(np.vdot(a, b)) ** 2  # noqa: E731
    return {
        "B1_to_B1": ov(U @ s["B1"], s["B1"]),
        "B2_to_B1": ov(U @ s["B2"], s["B1"]),
        "Bbar_to_Bbar": ov(U @ s["Bbar"], s["Bbar"]),
        "B_to_Bbar": ov(U @ s["Bbar"], s["B"]),
        "B1_Bbar_t": pair_prob(psi, s["B1"], s["Bbar"]),
        "norm2": float(np.sum(abs(psi) ** 2)),
    }


def meson_static_oracle(p, q, alpha):
    s = flavour_states(p, q, alpha)
    psi = pair_t0()
    names = [("B1", "Bbar"), ("B1", "B"), ("B1", "BH"), ("B2", "BH"), ("BH", "Bbar"), ("BH", "B")]
    out = {f"{a}_{b}": pair_prob(psi, s[a], s[b]) for a, b in names}
    out["B2_Bbar"] = pair_prob(psi, s["B2"], s["Bbar"])
    out["B2_B"] = pair_prob(psi, s["B2"], s["B"])
    out["B1_BL"] = pair_prob(psi, s["B1"], s["BL"])
    out["B2_BL"] = pair_prob(psi, s["B2"], s["BL"])
    out["BL_Bbar"] = pair_prob(psi, s["BL"], s["Bbar"])
    out["BL_B"] = pair_prob(psi, s["BL"], s["B"])
    return out


# --- spin averaging -----------------------------------------------------------


def model_margin_at(theta_ba, theta_ca, theta_bc, wt):
    lhs = math.sin(0.5 * theta_ba + 2 * wt) ** 2
    rhs = 2 * math.sin(wt) ** 2 + math.cos(2 * wt) * (
        math.sin(0.5 * theta_ca) ** 2 + math.sin(0.5 * theta_bc) ** 2
    )
    return lhs - rhs


def averaged_margin_quad(theta_ba, theta_ca, theta_bc, T, delta):
    """Window average of the precessing-pair margin over [T - delta, T + delta]."""
    if delta == 0.0:
        return model_margin_at(theta_ba, theta_ca, theta_bc, T)
    f = lambda s: model_margin_at(theta_ba, theta_ca, theta_bc, s)  # noqa: E731
    if delta < 1e-6:
        # quad cannot resolve tiny windows; a fixed 20-point rule is exact to rounding here
        x, w = np.polynomial.legendre.leggauss(20)
        return 0.5 * sum(wi * f(T + delta * xi) for xi, wi in zip(x, w))
    val, _ = integrate.quad(f, T - delta, T + delta, epsabs=1e-12 * delta, epsrel=1e-12, limit=200)
    return val / (2.0 * delta)


# --- special functions ----------------------------------------------------------


def si_mp(x):
    with mpmath.workdps(40):
        return float(mpmath.si(x) - mpmath.pi / 2)


def bracket_mp(x):
    with mpmath.workdps(40):
        x = mpmath.mpf(x)
        s = mpmath.si(x) - mpmath.pi / 2
        return float(1 + s / mpmath.pi + mpmath.sin(x) / (mpmath.pi * x * x)
                     + mpmath.cos(x) / (mpmath.pi * x))
