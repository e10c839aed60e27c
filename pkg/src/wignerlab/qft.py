"""Finite-time decay of a pseudoscalar into a fermion pair at leading order.

Natural units; x = M tau is the dimensionless measurement time.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

from scipy import integrate

from . import kernels
from ._workers import chunk_generators
from .specfun import si
from .wigner import DEFAULT_TOL, InequalityReport

__all__ = [
    "QftParams",
    "TimeWindow",
    "PerturbativityCheck",
    "RegionFraction",
    "PlateauWarning",
    "rate_bracket",
    "decay_rate",
    "perturbativity_ok",
    "integrated_probability",
    "ratio_inequality",
    "violation_region_fraction",
]

MC_CHUNK = 1 << 16


class PlateauWarning(UserWarning):
    """The integration window leaves the plateau M/Gamma0 >> M tau >> 1."""


@dataclass(frozen=True)
class QftParams:
    M: float
    Gamma0: float
    max_width_ratio: float = 1e-3

    def __post_init__(self):
        if not self.M > 0:
            raise ValueError("M must be positive")
        if not self.Gamma0 > 0:
            raise ValueError("Gamma0 must be positive")
        if self.Gamma0 / self.M > self.max_width_ratio:
            raise ValueError(
                f"Gamma0/M = {self.Gamma0 / self.M:.3g} exceeds {self.max_width_ratio}; "
                "leading order needs a narrow width"
            )

    @classmethod
    def from_coupling(cls, g: float, M: float, **kw) -> "QftParams":
        """Gamma0 = g^2 M / (8 pi)."""
        return cls(M, g * g * M / (8.0 * math.pi), **kw)


@dataclass(frozen=True)
class TimeWindow:
    t_i: float
    t_f: float

    def __post_init__(self):
        if not 0.0 < self.t_i < self.t_f:
            raise ValueError(f"need 0 < t_i < t_f, got ({self.t_i}, {self.t_f})")


def rate_bracket(x: float) -> float:
    """1 + si(x)/pi + sin(x)/(pi x^2) + cos(x)/(pi x)."""
    if not x > 0.0:
        raise ValueError(f"M tau must be positive, got {x!r}")
    return 1.0 + si(x) / math.pi + math.sin(x) / (math.pi * x * x) + math.cos(x) / (math.pi * x)


def decay_rate(theta_ab: float, tau: float, qp: QftParams) -> float:
    """W(tau) = (Gamma0/2) * bracket(M tau) * sin^2(theta_ab/2)."""
    if not tau > 0.0:
        raise ValueError(f"tau must be positive, got {tau!r}")
    return 0.5 * qp.Gamma0 * rate_bracket(qp.M * tau) * math.sin(0.5 * theta_ab) ** 2


@dataclass(frozen=True)
class PerturbativityCheck:
    ok: bool
    ratio: float
    window_ok: bool
    bound: float

    def as_dict(self) -> dict:
        return dict(self.__dict__)


def perturbativity_ok(qp: QftParams, tau: float, bound: float = 1e-2) -> PerturbativityCheck:
    """W(tau)/M against ``bound`` and the window 10 <= M tau <= 0.1 M/Gamma0."""
    if not tau > 0.0:
        raise ValueError(f"tau must be positive, got {tau!r}")
    x = qp.M * tau
    ratio = 0.5 * qp.Gamma0 * rate_bracket(x) / qp.M
    window_ok = 10.0 <= x <= 0.1 * qp.M / qp.Gamma0
    return PerturbativityCheck(ratio <= bound, ratio, window_ok, bound)


def integrated_probability(
    theta_ab: float, win: TimeWindow, qp: QftParams, rtol: float = 1e-10
) -> float:
    """Integral of :func:`decay_rate` over the window."""
    lo, hi = qp.M * win.t_i, qp.M * win.t_f
    if not (10.0 <= lo and hi <= 0.1 * qp.M / qp.Gamma0):
        warnings.warn(
            f"window M*t in [{lo:.3g}, {hi:.3g}] is outside the perturbative plateau",
            PlateauWarning,
            stacklevel=2,
        )
    # integrate the bracket in x = M tau, one sub-interval per ~period
    n_sub = max(1, int(math.ceil((hi - lo) / math.pi)))
    val, err, info, *warn = integrate.quad(
        rate_bracket, lo, hi, epsabs=0.0, epsrel=rtol, limit=max(50, 4 * n_sub), full_output=True
    )
    if warn or err > 1e-8 * abs(val):
        raise ArithmeticError(f"quadrature did not converge: {warn[0] if warn else err}")
    return 0.5 * qp.Gamma0 * math.sin(0.5 * theta_ab) ** 2 * val / qp.M


def ratio_inequality(
    t_over_t0: float, theta_ba: float, theta_ca: float, theta_bc: float, tol: float = DEFAULT_TOL
) -> InequalityReport:
    """(t/t0) sin^2(theta_ba/2) <= sin^2(theta_ca/2) + sin^2(theta_bc/2)."""
    if not t_over_t0 >= 1.0:
        raise ValueError(f"t/t0 must be >= 1, got {t_over_t0!r}")
    lhs = t_over_t0 * math.sin(0.5 * theta_ba) ** 2
    rhs = math.sin(0.5 * theta_ca) ** 2 + math.sin(0.5 * theta_bc) ** 2
    return InequalityReport.compare(
        lhs, rhs, tol, t_over_t0=t_over_t0, theta_ba=theta_ba, theta_ca=theta_ca, theta_bc=theta_bc
    )


@dataclass(frozen=True)
class RegionFraction:
    ratio: float
    samples: int
    seed: int
    violated: int

    @property
    def fraction(self) -> float:
        return self.violated / self.samples

    @property
    def stderr(self) -> float:
        f = self.fraction
        return math.sqrt(f * (1.0 - f) / self.samples)

    def as_dict(self) -> dict:
        return {
            "ratio": self.ratio,
            "samples": self.samples,
            "seed": self.seed,
            "violated": self.violated,
            "fraction": self.fraction,
            "stderr": self.stderr,
        }


def violation_region_fraction(
    t_over_t0: float, samples: int = 1_000_000, seed: int = 0, tol: float = DEFAULT_TOL
) -> RegionFraction:
    """Monte Carlo share of [0, pi]^3 where the ratio inequality is violated.

    Samples are drawn in fixed chunks from per-chunk Philox streams, so the
    count for a given (samples, seed) is reproducible.
    """
    if samples < 10_000:
        raise ValueError("need at least 10^4 samples")
    if not t_over_t0 >= 1.0:
        raise ValueError(f"t/t0 must be >= 1, got {t_over_t0!r}")
    sizes = [min(MC_CHUNK, samples - s) for s in range(0, samples, MC_CHUNK)]
    count = 0
    for rng, size in zip(chunk_generators(seed, len(sizes)), sizes):
        angles = rng.uniform(0.0, math.pi, size=(size, 3))
        count += kernels.ratio_violation_count(float(t_over_t0), angles, tol)
    return RegionFraction(float(t_over_t0), samples, seed, count)
