"""Static and dynamical Wigner inequalities and the hidden-variable oracle.

Sign index convention used throughout: 0 is "+", 1 is "-". A table entry
``table.ab[s2, s1]`` is w(a^(2)_{s2}, b^(1)_{s1}); ``cb`` and ``ac`` follow
the same (fermion, antifermion) order.
"""
from __future__ import annotations

import itertools
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Mapping

import numpy as np

from . import kernels
from ._workers import chunk_generators, worker_count

__all__ = [
    "PLUS",
    "MINUS",
    "DEFAULT_TOL",
    "InequalityReport",
    "JointProbabilityTable",
    "TransitionTable",
    "HiddenVariableModel",
    "FuzzSummary",
    "static_wigner",
    "dynamic_wigner",
    "lhv_table",
    "lhv_dynamic_operands",
    "corner_sweep",
    "fuzz_lhv",
]

PLUS, MINUS = 0, 1
DEFAULT_TOL = 1e-9

_NEG_SLACK = 1e-12
_NORM_SLACK = 1e-9
FUZZ_CHUNK = 8192


@dataclass(frozen=True)
class InequalityReport:
    lhs: float
    rhs: float
    margin: float
    violated: bool
    tolerance: float
    params: Mapping[str, float] = field(default_factory=dict)

    @classmethod
    def compare(cls, lhs: float, rhs: float, tol: float = DEFAULT_TOL, **params: float):
        margin = lhs - rhs
        return cls(float(lhs), float(rhs), float(margin), bool(margin > tol), tol, dict(params))

    def as_dict(self) -> dict:
        return {
            "lhs": self.lhs,
            "rhs": self.rhs,
            "margin": self.margin,
            "violated": self.violated,
            "tolerance": self.tolerance,
            "params": dict(self.params),
        }


def _as_block(x) -> np.ndarray:
    arr = np.array(x, dtype=float).reshape(2, 2)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class JointProbabilityTable:
    """Joint probabilities for the axis pairs (a2, b1), (c2, b1), (a2, c1).

    Tables need not be normalised (decaying systems); only non-negativity
    and a sub-unit total per axis pair are enforced.
    """

    ab: np.ndarray
    cb: np.ndarray
    ac: np.ndarray

    def __post_init__(self):
        for name in ("ab", "cb", "ac"):
            block = _as_block(getattr(self, name))
            if not np.all(np.isfinite(block)):
                raise ValueError(f"{name} has non-finite entries")
            if block.min() < -_NEG_SLACK:
                raise ValueError(f"{name} has negative probability {block.min()!r}")
            if block.sum() > 1.0 + _NORM_SLACK:
                raise ValueError(f"{name} sums to {block.sum()!r} > 1")
            object.__setattr__(self, name, block)

    @classmethod
    def zeros(cls) -> "JointProbabilityTable":
        z = np.zeros((2, 2))
        return cls(z, z, z)


@dataclass(frozen=True)
class TransitionTable:
    """Local transition probabilities for the fermion axis a and antifermion axis b.

    ``a_pp`` = w(a+(t0) -> a+(t)), ``a_mp`` = w(a-(t0) -> a+(t)); same for b.
    """

    a_pp: float
    a_mp: float
    b_pp: float
    b_mp: float

    def __post_init__(self):
        for name in ("a_pp", "a_mp", "b_pp", "b_mp"):
            v = getattr(self, name)
            if not (-_NEG_SLACK <= v <= 1.0 + _NORM_SLACK):
                raise ValueError(f"{name}={v!r} outside [0, 1]")

    @classmethod
    def frozen(cls) -> "TransitionTable":
        return cls(1.0, 0.0, 1.0, 0.0)

    def as_array(self) -> np.ndarray:
        return np.array([self.a_pp, self.a_mp, self.b_pp, self.b_mp])


@dataclass(frozen=True)
class HiddenVariableModel:
    """Probability weights over the 8 antifermion sign triples (alpha, beta, gamma).

    ``weight[4*ia + 2*ib + ic]`` is the weight of a1 = alpha, b1 = beta,
    c1 = gamma (index 0 = "+"); the fermion carries the opposite signs.
    """

    weight: np.ndarray

    def __post_init__(self):
        w = np.array(self.weight, dtype=float).reshape(8)
        if w.min() < 0.0:
            raise ValueError("hidden-variable weights must be non-negative")
        if abs(w.sum() - 1.0) > 1e-12:
            raise ValueError(f"hidden-variable weights sum to {w.sum()!r}")
        w.setflags(write=False)
        object.__setattr__(self, "weight", w)

    @classmethod
    def point_mass(cls, alpha: int, beta: int, gamma: int) -> "HiddenVariableModel":
        w = np.zeros(8)
        w[4 * alpha + 2 * beta + gamma] = 1.0
        return cls(w)

    @classmethod
    def uniform(cls) -> "HiddenVariableModel":
        return cls(np.full(8, 0.125))


# (lhs pair, lhs signs), (first rhs pair, signs), (second rhs pair, signs)
_STATIC_VARIANTS = (
    (("ab", PLUS, PLUS), ("cb", PLUS, PLUS), ("ac", PLUS, PLUS)),
    (("ab", PLUS, MINUS), ("cb", PLUS, MINUS), ("ac", PLUS, PLUS)),
    (("ab", MINUS, PLUS), ("cb", PLUS, PLUS), ("ac", MINUS, PLUS)),
    (("ab", MINUS, MINUS), ("cb", PLUS, MINUS), ("ac", MINUS, PLUS)),
)


def static_wigner(
    table: JointProbabilityTable, variant: int = 0, tol: float = DEFAULT_TOL
) -> InequalityReport:
    """w(a2, b1) <= w(c2, b1) + w(a2, c1) in one of its four sign variants.

    Variant 0 is the (+, +) form; 1-3 flip the b and/or a outcomes.
    """
    if variant not in range(4):
        raise ValueError(f"variant must be 0..3, got {variant!r}")
    (lp, ls2, ls1), (r1p, r1s2, r1s1), (r2p, r2s2, r2s1) = _STATIC_VARIANTS[variant]
    lhs = getattr(table, lp)[ls2, ls1]
    rhs = getattr(table, r1p)[r1s2, r1s1] + getattr(table, r2p)[r2s2, r2s1]
    return InequalityReport.compare(lhs, rhs, tol, variant=variant)


def dynamic_rhs(t0_table: JointProbabilityTable, trans: TransitionTable) -> float:
    b_in = trans.b_pp + trans.b_mp
    a_in = trans.a_pp + trans.a_mp
    return (
        trans.a_pp * b_in * t0_table.ac[PLUS, PLUS]
        + trans.a_mp * b_in * t0_table.ac[MINUS, PLUS]
        + trans.b_pp * a_in * t0_table.cb[PLUS, PLUS]
        + trans.b_mp * a_in * t0_table.cb[PLUS, MINUS]
    )


def dynamic_wigner(
    t0_table: JointProbabilityTable,
    trans: TransitionTable,
    lhs_prob: float,
    tol: float = DEFAULT_TOL,
) -> InequalityReport:
    """Time-dependent inequality for w(a2+, b1+, t) given t0 data and local transitions."""
    if lhs_prob < 0.0:
        raise ValueError(f"lhs probability must be non-negative, got {lhs_prob!r}")
    return InequalityReport.compare(lhs_prob, dynamic_rhs(t0_table, trans), tol)


_SIGNS = np.array(list(itertools.product((0, 1), repeat=3)))  # rows (ia, ib, ic)


def lhv_table(model: HiddenVariableModel) -> JointProbabilityTable:
    """Marginals of a hidden-variable model on the three measured axis pairs."""
    w = model.weight
    ia, ib, ic = _SIGNS.T
    blocks = {}
    # fermion sign on an axis is opposite to the antifermion's: s2 = 1 - i
    for name, fermion_axis, anti_axis in (("ab", ia, ib), ("cb", ic, ib), ("ac", ia, ic)):
        block = np.zeros((2, 2))
        np.add.at(block, (1 - fermion_axis, anti_axis), w)
        blocks[name] = block
    return JointProbabilityTable(**blocks)


def lhv_dynamic_operands(
    model: HiddenVariableModel, trans: TransitionTable
) -> tuple[JointProbabilityTable, float]:
    """t0 table and the locally evolved w(a2+, b1+, t) of a hidden-variable model."""
    table = lhv_table(model)
    ab = table.ab
    lhs = (
        trans.a_pp * trans.b_pp * ab[PLUS, PLUS]
        + trans.a_mp * trans.b_pp * ab[MINUS, PLUS]
        + trans.a_pp * trans.b_mp * ab[PLUS, MINUS]
        + trans.a_mp * trans.b_mp * ab[MINUS, MINUS]
    )
    return table, float(lhs)


@dataclass(frozen=True)
class FuzzSummary:
    n: int
    seed: int
    max_static_margin: float
    max_dynamic_margin: float
    corner_max_margin: float
    worst: dict

    @property
    def max_margin(self) -> float:
        return max(self.max_static_margin, self.max_dynamic_margin, self.corner_max_margin)

    def breached(self, tol: float = DEFAULT_TOL) -> bool:
        return self.max_margin > tol

    def as_dict(self) -> dict:
        return {
            "n": self.n,
            "seed": self.seed,
            "max_margin": self.max_margin,
            "max_static_margin": self.max_static_margin,
            "max_dynamic_margin": self.max_dynamic_margin,
            "corner_max_margin": self.corner_max_margin,
            "worst": self.worst,
        }


def corner_sweep() -> np.ndarray:
    """Margins (128, 5) over all point-mass models x all 0/1 transition tables.

    Columns are the four static variants followed by the dynamic inequality.
    """
    weights = np.repeat(np.eye(8), 16, axis=0)
    trans = np.tile(np.array(list(itertools.product((0.0, 1.0), repeat=4))), (8, 1))
    return kernels.lhv_margins(weights, trans)


def _sample_chunk(rng: np.random.Generator, size: int) -> tuple[np.ndarray, np.ndarray]:
    weights = rng.dirichlet(np.ones(8), size=size)
    # a quarter of the models are sparse: mass on a random subset of outcomes
    sparse = rng.random(size) < 0.25
    mask = rng.random((size, 8)) < 0.3
    mask[np.arange(size), rng.integers(0, 8, size)] = True
    weights[sparse] *= mask[sparse]
    weights /= weights.sum(axis=1, keepdims=True)
    trans = rng.random((size, 4))
    snap = rng.random((size, 4)) < 0.1
    trans[snap] = np.round(trans[snap])
    return weights, trans


def _run_chunk(args):
    index, rng, size = args
    weights, trans = _sample_chunk(rng, size)
    margins = kernels.lhv_margins(weights, trans)
    return index, weights, trans, margins


def fuzz_lhv(n: int, seed: int, workers: int | None = None, include_corners: bool = True) -> FuzzSummary:
    """Randomised certification that hidden-variable models never violate.

    Trials are generated in fixed-size chunks with their own derived seeds,
    so the result depends only on (n, seed) and not on ``workers``.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    sizes = [min(FUZZ_CHUNK, n - start) for start in range(0, n, FUZZ_CHUNK)]
    rngs = chunk_generators(seed, len(sizes))
    jobs = list(zip(range(len(sizes)), rngs, sizes))
    nworkers = worker_count(workers)
    if nworkers > 1 and len(jobs) > 1:
        with ThreadPoolExecutor(nworkers) as pool:
            results = list(pool.map(_run_chunk, jobs))
    else:
        results = [_run_chunk(job) for job in jobs]

    best = (-np.inf, None)
    max_static = -np.inf
    max_dynamic = -np.inf
    for index, weights, trans, margins in sorted(results, key=lambda r: r[0]):
        max_static = max(max_static, float(margins[:, :4].max()))
        max_dynamic = max(max_dynamic, float(margins[:, 4].max()))
        flat = int(np.argmax(margins))
        row, col = divmod(flat, margins.shape[1])
        if margins[row, col] > best[0]:
            best = (
                float(margins[row, col]),
                {
                    "trial": index * FUZZ_CHUNK + row,
                    "inequality": "dynamic" if col == 4 else f"static-{col}",
                    "margin": float(margins[row, col]),
                    "weights": weights[row].tolist(),
                    "transitions": trans[row].tolist(),
                },
            )
    corner = float(corner_sweep().max()) if include_corners else -np.inf
    return FuzzSummary(n, seed, max_static, max_dynamic, corner, best[1])
