"""Scalar special functions: cardinal sine and the integral sine.

``si`` follows the convention si(x) = -int_x^inf sin(z)/z dz = Si(x) - pi/2.
"""
from __future__ import annotations

import math

import numpy as np

__all__ = ["sinc", "si", "si_oracle", "SI_SWITCH", "SINC_SWITCH", "QuadratureError"]

SINC_SWITCH = 1e-4
SI_SWITCH = 4.0

_HALF_PI = 0.5 * math.pi
_CF_EPS = 1e-16
_CF_MAXITER = 200


class QuadratureError(RuntimeError):
    """Raised when an adaptive quadrature exhausts its node budget."""


def sinc(x: float) -> float:
    """Unnormalised cardinal sine sin(x)/x, equal to 1 at the origin."""
    if abs(x) < SINC_SWITCH:
        x2 = x * x
        return 1.0 - x2 / 6.0 + x2 * x2 / 120.0
    return math.sin(x) / x


def _si_series(x: float) -> float:
    # Si(x) = sum (-1)^k x^(2k+1) / ((2k+1) (2k+1)!)
    x2 = x * x
    term = x
    total = x
    k = 0
    while True:
        k += 1
        term *= -x2 / ((2 * k) * (2 * k + 1))
        contrib = term / (2 * k + 1)
        total += contrib
        if abs(contrib) < 1e-18 * max(1.0, abs(total)):
            break
    return total - _HALF_PI


def _aux_fg(x: float) -> tuple[float, float]:
    """Auxiliary functions f(x), g(x) with si(x) = -f cos x - g sin x.

    Evaluated through the continued fraction of exp(ix) E1(ix) = g - i f,
    (modified Lentz), which converges quickly for x >= 2.
    """
    b = complex(1.0, x)
    c = 1.0 / 1e-300
    d = 1.0 / b
    h = d
    for i in range(1, _CF_MAXITER):
        a = -float(i * i)
        b += 2.0
        d = 1.0 / (a * d + b)
        c = b + a / c
        delta = c * d
        h *= delta
        if abs(delta - 1.0) < _CF_EPS:
            break
    else:  # pragma: no cover - x >= SI_SWITCH converges in < 60 steps
        raise ArithmeticError(f"continued fraction for si({x}) did not converge")
    return -h.imag, h.real


def si(x: float) -> float:
    """Integral sine si(x) = Si(x) - pi/2 for x >= 0."""
    if not x >= 0.0:
        raise ValueError(f"si is defined here only for x >= 0, got {x!r}")
    if math.isinf(x):
        return 0.0
    if x <= SI_SWITCH:
        return _si_series(x)
    f, g = _aux_fg(x)
    return -f * math.cos(x) - g * math.sin(x)


def _tail(L: float, tol: float) -> float:
    """int_L^inf sin(z)/z dz by repeated integration by parts.

    After n steps the remainder is bounded by (n-1)!/L^n; terms are added
    until that bound drops below ``tol``.
    """
    # J_1 = i e^{iL} sum_m (-i)^m m! / L^(m+1) + (-i)^n n! J_{n+1}
    acc = 0j
    coef = 1.0 / L
    phase = 1 + 0j
    n = 0
    while True:
        acc += phase * coef
        n += 1
        coef *= n / L
        phase *= -1j
        bound = math.factorial(n - 1) / L**n
        if bound < tol:
            break
        if n > 60:
            raise QuadratureError(f"tail expansion at L={L} cannot reach tol={tol}")
    return (1j * complex(math.cos(L), math.sin(L)) * acc).imag


_GL_LO = np.polynomial.legendre.leggauss(10)
_GL_HI = np.polynomial.legendre.leggauss(20)


def _gauss(f, lo: float, hi: float, rule) -> float:
    nodes, weights = rule
    half = 0.5 * (hi - lo)
    mid = 0.5 * (hi + lo)
    return half * float(np.dot(weights, f(mid + half * nodes)))


def _adaptive(f, lo: float, hi: float, tol: float, budget: list[int]) -> float:
    """Adaptive bisection with a 10/20-point Gauss-Legendre error estimate."""
    coarse = _gauss(f, lo, hi, _GL_LO)
    fine = _gauss(f, lo, hi, _GL_HI)
    budget[0] -= 30
    if budget[0] < 0:
        raise QuadratureError(f"node budget exhausted on [{lo}, {hi}]")
    if abs(fine - coarse) <= tol:
        return fine
    mid = 0.5 * (lo + hi)
    return _adaptive(f, lo, mid, 0.5 * tol, budget) + _adaptive(f, mid, hi, 0.5 * tol, budget)


def si_oracle(x: float, tol: float = 1e-12, max_nodes: int = 2_000_000) -> float:
    """Reference value of si(x) from quadrature plus an analytic tail.

    Integrates sin(z)/z over [x, L] in half-period pieces with an adaptive
    Gauss-Legendre rule and closes the remainder with a bounded asymptotic
    tail. Only meant for cross-checking :func:`si`.
    """
    if not x >= 0.0:
        raise ValueError(f"si_oracle requires x >= 0, got {x!r}")
    if not tol > 0.0:
        raise ValueError("tol must be positive")
    L = max(x + 20.0 * math.pi, 200.0)
    edges = np.append(np.arange(x, L, math.pi), L)
    piece_tol = 0.5 * tol / (len(edges) - 1)
    budget = [max_nodes]
    integrand = lambda z: np.sinc(z / math.pi)  # noqa: E731
    pieces = [
        _adaptive(integrand, lo, hi, piece_tol, budget)
        for lo, hi in zip(edges[:-1], edges[1:])
    ]
    return -(math.fsum(pieces) + _tail(L, 0.5 * tol))
