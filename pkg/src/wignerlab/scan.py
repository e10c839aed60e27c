"""Grid sweeps and violation maximisation over scenario parameters."""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Callable, Iterator, Mapping, Sequence

import numpy as np

from . import kernels
from .meson import MesonParams, dynamic_inequality
from .qft import ratio_inequality
from .spin import SpinScenarioParams, model_inequality
from .wigner import InequalityReport

__all__ = [
    "AxisRange",
    "ScanRecord",
    "MaxViolationResult",
    "Target",
    "GridGuardError",
    "EvaluationError",
    "MAX_GRID_POINTS",
    "grid_scan",
    "grid_best",
    "golden_section_max",
    "maximize_violation",
    "spin_target",
    "spin_family_target",
    "meson_dynamic_target",
    "qft_ratio_target",
]

MAX_GRID_POINTS = 10**8
MAX_AXES = 4
INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0


class GridGuardError(ValueError):
    pass


class EvaluationError(RuntimeError):
    """Target evaluation failed; ``point`` holds the offending parameters."""

    def __init__(self, point: Mapping[str, float], cause: BaseException):
        super().__init__(f"evaluation failed at {dict(point)}: {cause}")
        self.point = dict(point)


@dataclass(frozen=True)
class AxisRange:
    name: str
    lo: float
    hi: float
    steps: int

    def __post_init__(self):
        if not self.lo < self.hi:
            raise ValueError(f"axis {self.name!r}: need lo < hi, got [{self.lo}, {self.hi}]")
        if self.steps < 2:
            raise ValueError(f"axis {self.name!r}: need at least 2 steps")

    def values(self) -> np.ndarray:
        return np.linspace(self.lo, self.hi, self.steps)

    @property
    def spacing(self) -> float:
        return (self.hi - self.lo) / (self.steps - 1)


@dataclass(frozen=True)
class ScanRecord:
    params: dict[str, float]
    lhs: float
    rhs: float
    margin: float
    violated: bool

    @classmethod
    def from_report(cls, params: Mapping[str, float], rep: InequalityReport) -> "ScanRecord":
        return cls(dict(params), rep.lhs, rep.rhs, rep.margin, rep.violated)


@dataclass(frozen=True)
class MaxViolationResult:
    params: dict[str, float]
    margin: float
    refinement_iterations: int
    grid_margin: float
    history: tuple[float, ...] = field(default=())

    def as_dict(self) -> dict:
        return {
            "params": self.params,
            "margin": self.margin,
            "refinement_iterations": self.refinement_iterations,
            "grid_margin": self.grid_margin,
            "history": list(self.history),
        }


@dataclass(frozen=True)
class Target:
    """A named inequality evaluated from keyword parameters.

    ``evaluate(**params)`` returns an :class:`InequalityReport`. ``grid_argmax``
    optionally finds the best lattice point of a full 4-axis grid without
    materialising records.
    """

    name: str
    axes: tuple[str, ...]
    evaluate: Callable[..., InequalityReport]
    grid_argmax: Callable[..., tuple[float, tuple[int, ...]]] | None = None

    def margin(self, **params: float) -> float:
        return self.evaluate(**params).margin


def _check_ranges(target: Target, ranges: Sequence[AxisRange]) -> None:
    if len(ranges) > MAX_AXES:
        raise GridGuardError(f"at most {MAX_AXES} axes, got {len(ranges)}")
    names = [r.name for r in ranges]
    unknown = set(names) - set(target.axes)
    if unknown:
        raise ValueError(f"target {target.name!r} has no axes {sorted(unknown)}")
    if len(set(names)) != len(names):
        raise ValueError("duplicate axis names")
    total = math.prod(r.steps for r in ranges)
    if total > MAX_GRID_POINTS:
        raise GridGuardError(f"{total} grid points exceed the guard of {MAX_GRID_POINTS}")


def _evaluate(target: Target, point: Mapping[str, float]) -> InequalityReport:
    try:
        return target.evaluate(**point)
    except Exception as exc:
        raise EvaluationError(point, exc) from exc


def grid_scan(target: Target, ranges: Sequence[AxisRange]) -> Iterator[ScanRecord]:
    """Evaluate ``target`` on the lattice, yielding records in row-major order."""
    _check_ranges(target, ranges)
    names = [r.name for r in ranges]
    for combo in itertools.product(*(r.values() for r in ranges)):
        point = {n: float(v) for n, v in zip(names, combo)}
        yield ScanRecord.from_report(point, _evaluate(target, point))


def grid_best(target: Target, ranges: Sequence[AxisRange]) -> tuple[dict[str, float], float]:
    """Best lattice point; ties resolved to the lowest row-major index."""
    _check_ranges(target, ranges)
    names = [r.name for r in ranges]
    if target.grid_argmax is not None and names == list(target.axes):
        best, idx = target.grid_argmax(*(r.values() for r in ranges))
        return {n: float(r.values()[i]) for n, r, i in zip(names, ranges, idx)}, float(best)
    best_point, best_margin = None, -math.inf
    for rec in grid_scan(target, ranges):
        if rec.margin > best_margin:
            best_point, best_margin = rec.params, rec.margin
    return best_point, best_margin


def golden_section_max(f: Callable[[float], float], lo: float, hi: float, tol: float = 1e-12,
                       max_iter: int = 200) -> tuple[float, float]:
    """Maximise a unimodal f on [lo, hi]; returns (x, f(x))."""
    x1 = hi - INV_PHI * (hi - lo)
    x2 = lo + INV_PHI * (hi - lo)
    f1, f2 = f(x1), f(x2)
    for _ in range(max_iter):
        if hi - lo <= tol:
            break
        if f1 >= f2:
            hi, x2, f2 = x2, x1, f1
            x1 = hi - INV_PHI * (hi - lo)
            f1 = f(x1)
        else:
            lo, x1, f1 = x1, x2, f2
            x2 = lo + INV_PHI * (hi - lo)
            f2 = f(x2)
    return (x1, f1) if f1 >= f2 else (x2, f2)


def maximize_violation(
    target: Target, ranges: Sequence[AxisRange], refine_iters: int = 50, tol: float = 1e-15
) -> MaxViolationResult:
    """Coarse grid, then cyclic coordinate ascent with golden-section line searches.

    Each line search is confined to one grid spacing around the current
    point (clipped to the range), and a move is accepted only if it raises
    the margin, so the margin never decreases. Stops early once a full
    cycle gains less than ``tol``.
    """
    if refine_iters < 0:
        raise ValueError("refine_iters must be >= 0")
    point, grid_margin = grid_best(target, ranges)
    current = grid_margin
    history = [current]
    iters = 0
    for _ in range(refine_iters):
        start = current
        for r in ranges:
            h = r.spacing
            lo, hi = max(r.lo, point[r.name] - h), min(r.hi, point[r.name] + h)

            def along(v, name=r.name):
                return _evaluate(target, {**point, name: v}).margin

            x, fx = golden_section_max(along, lo, hi)
            for cand, fc in ((lo, None), (hi, None), (x, fx)):
                val = along(cand) if fc is None else fc
                if val > current:
                    point = {**point, r.name: float(cand)}
                    current = val
        iters += 1
        history.append(current)
        if current - start < tol:
            break
    return MaxViolationResult(point, float(current), iters, float(grid_margin), tuple(history))


# --- targets -------------------------------------------------------------

SPIN_AXES = ("theta_ba", "theta_ca", "theta_bc", "omega_t")


def spin_target(**fixed: float) -> Target:
    """Precessing-pair inequality; any of the four parameters may be pinned."""
    unknown = set(fixed) - set(SPIN_AXES)
    if unknown:
        raise ValueError(f"unknown spin parameters {sorted(unknown)}")
    axes = tuple(a for a in SPIN_AXES if a not in fixed)

    def evaluate(**params: float) -> InequalityReport:
        return model_inequality(SpinScenarioParams(**{**fixed, **params}))

    argmax = kernels.spin_grid_argmax if not fixed else None
    return Target("spin", axes, evaluate, argmax)


def spin_family_target(omega_t: float | None = None) -> Target:
    """theta_bc = theta_ca = theta, theta_ba = 2 theta; omega_t = theta/2 unless pinned."""

    def evaluate(theta: float) -> InequalityReport:
        wt = 0.5 * theta if omega_t is None else omega_t
        return model_inequality(SpinScenarioParams.symmetric(theta, wt))

    return Target("spin-family", ("theta",), evaluate)


def meson_dynamic_target(gamma: float = 1.0, dgamma: float = 0.1, dm: float = 0.5,
                         alpha: float = 0.0) -> Target:
    defaults = {"gamma": gamma, "dgamma": dgamma, "dm": dm, "alpha": alpha}

    def evaluate(**params: float) -> InequalityReport:
        p = {**defaults, **params}
        mp = MesonParams.from_widths(p["gamma"], p["dgamma"], p["dm"], p["alpha"])
        return dynamic_inequality(p["t"], mp)

    return Target("meson-dynamic", ("t", "gamma", "dgamma", "dm"), evaluate)


def qft_ratio_target(t_over_t0: float = 1.0) -> Target:
    defaults = {"t_over_t0": t_over_t0}

    def evaluate(**params: float) -> InequalityReport:
        p = {**defaults, **params}
        return ratio_inequality(p["t_over_t0"], p["theta_ba"], p["theta_ca"], p["theta_bc"])

    return Target("qft-ratio", ("theta_ba", "theta_ca", "theta_bc", "t_over_t0"), evaluate)
