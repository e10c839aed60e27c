"""Singlet pair precessing in a homogeneous magnetic field.

Angles are radians in the (x, z) plane, ``omega_t`` is the dimensionless
precession phase. Averaging over a finite detector window uses the
half-width ``delta`` with 2*delta = omega * Delta t.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from scipy import constants

from . import kernels
from .specfun import sinc
from .wigner import (
    DEFAULT_TOL,
    InequalityReport,
    JointProbabilityTable,
    TransitionTable,
)

__all__ = [
    "SpinScenarioParams",
    "ResolutionParams",
    "THETA_STAR",
    "probabilities_in_field",
    "model_inequality",
    "assemble_dynamic_operands",
    "averaged_inequality",
    "kappa",
    "delta_threshold",
    "larmor_omega",
    "resolution_bound",
    "RESOLUTION_FACTOR",
]

# cos(2 theta*) = 1/4
THETA_STAR = 0.5 * math.acos(0.25)

KAPPA_COS = 7.0 / 16.0
KAPPA_CONST = 5.0 / 8.0


@dataclass(frozen=True)
class SpinScenarioParams:
    theta_ba: float
    theta_ca: float
    theta_bc: float
    omega_t: float

    @classmethod
    def symmetric(cls, theta: float, omega_t: float) -> "SpinScenarioParams":
        """theta_bc = theta_ca = theta, theta_ba = 2 theta."""
        return cls(2.0 * theta, theta, theta, omega_t)

    @classmethod
    def max_violation(cls) -> "SpinScenarioParams":
        """The field-assisted point with margin 9/16."""
        return cls.symmetric(THETA_STAR, 0.5 * THETA_STAR)

    def as_dict(self) -> dict:
        return {
            "theta_ba": self.theta_ba,
            "theta_ca": self.theta_ca,
            "theta_bc": self.theta_bc,
            "omega_t": self.omega_t,
        }


@dataclass(frozen=True)
class ResolutionParams:
    delta: float

    def __post_init__(self):
        if not self.delta >= 0.0:
            raise ValueError(f"delta must be >= 0, got {self.delta!r}")


def _sin2(x: float) -> float:
    s = math.sin(x)
    return s * s


def _cos2(x: float) -> float:
    c = math.cos(x)
    return c * c


def probabilities_in_field(p: SpinScenarioParams) -> tuple[float, float, float]:
    """w(a+, b+, t), w(a-, c+, t), w(c+, b-, t) for the precessing singlet."""
    wt2 = 2.0 * p.omega_t
    theta_cb = -p.theta_bc
    return (
        0.5 * _sin2(0.5 * p.theta_ba + wt2),
        0.5 * _cos2(0.5 * p.theta_ca + wt2),
        0.5 * _cos2(0.5 * theta_cb - wt2),
    )


def _sides(theta_ba, theta_ca, theta_bc, omega_t) -> tuple[float, float]:
    lhs = _sin2(0.5 * theta_ba + 2.0 * omega_t)
    rhs = 2.0 * _sin2(omega_t) + math.cos(2.0 * omega_t) * (
        _sin2(0.5 * theta_ca) + _sin2(0.5 * theta_bc)
    )
    return lhs, rhs


def model_inequality(p: SpinScenarioParams, tol: float = DEFAULT_TOL) -> InequalityReport:
    """sin^2(theta_ba/2 + 2wt) <= 2 sin^2(wt) + cos(2wt) [sin^2(theta_ca/2) + sin^2(theta_bc/2)]."""
    lhs, rhs = _sides(p.theta_ba, p.theta_ca, p.theta_bc, p.omega_t)
    return InequalityReport.compare(lhs, rhs, tol, **p.as_dict())


def model_margin_batch(theta_ba, theta_ca, theta_bc, omega_t):
    """Vectorised margins of :func:`model_inequality` (compiled kernel when available)."""
    return kernels.spin_margins(theta_ba, theta_ca, theta_bc, omega_t)


def _singlet_block(theta_yx: float) -> list[list[float]]:
    # w(x_s2, y_s1) at t0 for the singlet: equal signs -> sin^2, opposite -> cos^2
    s, c = 0.5 * _sin2(0.5 * theta_yx), 0.5 * _cos2(0.5 * theta_yx)
    return [[s, c], [c, s]]


def assemble_dynamic_operands(
    p: SpinScenarioParams,
) -> tuple[JointProbabilityTable, TransitionTable, float]:
    """t0 table, local transition table and w(a+, b+, t) for the dynamical inequality."""
    table = JointProbabilityTable(
        ab=_singlet_block(p.theta_ba),
        cb=_singlet_block(p.theta_bc),
        ac=_singlet_block(p.theta_ca),
    )
    stay, flip = _cos2(p.omega_t), _sin2(p.omega_t)
    trans = TransitionTable(stay, flip, stay, flip)
    lhs = 0.5 * _sin2(0.5 * p.theta_ba + 2.0 * p.omega_t)
    return table, trans, lhs


def averaged_inequality(
    p: SpinScenarioParams, r: ResolutionParams, tol: float = DEFAULT_TOL
) -> InequalityReport:
    """Finite-resolution form: the inequality averaged over [T - delta, T + delta].

    ``p.omega_t`` plays the role of the common time T. Reported as
    sinc(2 delta) [...] <= 1/2.
    """
    T, d = p.omega_t, r.delta
    inner = (
        math.cos(2.0 * d) * (_sin2(0.5 * p.theta_ba + 2.0 * T) - 0.5)
        + 1.0
        - 2.0 * _sin2(T)
        - math.cos(2.0 * T) * (_sin2(0.5 * p.theta_ca) + _sin2(0.5 * p.theta_bc))
    )
    return InequalityReport.compare(sinc(2.0 * d) * inner, 0.5, tol, delta=d, **p.as_dict())


def kappa(delta: float) -> float:
    """Violation rate at the 9/16 configuration versus resolution half-width."""
    if not delta >= 0.0:
        raise ValueError(f"delta must be >= 0, got {delta!r}")
    return sinc(2.0 * delta) * (KAPPA_COS * math.cos(2.0 * delta) + KAPPA_CONST) - 0.5


def delta_threshold(tol: float = 1e-10, lo: float = 1e-6, hi: float = 2.0, n_scan: int = 2000) -> float:
    """Smallest positive root of :func:`kappa` (scan for a bracket, then bisect)."""
    step = (hi - lo) / n_scan
    a, fa = lo, kappa(lo)
    for i in range(1, n_scan + 1):
        b = lo + i * step
        fb = kappa(b)
        if fa > 0.0 >= fb:
            break
        a, fa = b, fb
    else:
        raise ArithmeticError(f"kappa has no sign change on [{lo}, {hi}]")
    while b - a > tol:
        m = 0.5 * (a + b)
        if kappa(m) > 0.0:
            a = m
        else:
            b = m
    return 0.5 * (a + b)


RESOLUTION_FACTOR = 1.7


def larmor_omega(B: float, mass: float = constants.m_e, charge: float = constants.e) -> float:
    """Precession frequency qB/(2m) in s^-1 (SI units)."""
    if B <= 0 or mass <= 0 or charge <= 0:
        raise ValueError("field, mass and charge must be positive")
    return charge * B / (2.0 * mass)


def resolution_bound(omega: float) -> float:
    """Required detector time resolution 1.7/omega in seconds."""
    if not omega > 0.0:
        raise ValueError(f"omega must be positive, got {omega!r}")
    return RESOLUTION_FACTOR / omega
