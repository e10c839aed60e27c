"""Neutral B-meson pair: flavour, CP and mass "directions".

Axis mapping used for the inequalities: a+ -> B1, a- -> B2, b+ -> Bbar,
b- -> B, c+ -> BH, c- -> BL. Units: hbar = c = 1, times in any unit
consistent with the widths.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

from .wigner import (
    DEFAULT_TOL,
    InequalityReport,
    JointProbabilityTable,
    TransitionTable,
    dynamic_wigner,
)

__all__ = [
    "MesonParams",
    "StaticProbabilities",
    "DynamicProbabilities",
    "QP_MODULUS_MEASURED",
    "QP_MODULUS_ERROR",
    "g_plus",
    "g_minus",
    "static_probabilities",
    "static_table",
    "static_inequality",
    "dynamic_probabilities",
    "dynamic_inequality",
    "pair_norm2",
]

# measured |q/p| for neutral B mesons; only used in the validation message
QP_MODULUS_MEASURED = 1.0017
QP_MODULUS_ERROR = 0.0017


@dataclass(frozen=True)
class MesonParams:
    gamma_L: float
    gamma_H: float
    m_L: float
    m_H: float
    p: complex
    q: complex
    alpha: float

    def __post_init__(self):
        if not (self.gamma_L > 0 and self.gamma_H > 0):
            raise ValueError("widths must be positive")
        n = abs(self.p) ** 2 + abs(self.q) ** 2
        if abs(n - 1.0) > 1e-12:
            raise ValueError(f"|p|^2 + |q|^2 = {n!r}, expected 1")

    @classmethod
    def from_widths(
        cls, gamma: float, dgamma: float, dm: float, alpha: float = 0.0, m_L: float = 0.0
    ) -> "MesonParams":
        """Parameters with q/p = exp(i alpha) and |p| = |q| = 1/sqrt(2)."""
        p = complex(1.0 / math.sqrt(2.0))
        return cls(
            gamma_L=gamma - 0.5 * dgamma,
            gamma_H=gamma + 0.5 * dgamma,
            m_L=m_L,
            m_H=m_L + dm,
            p=p,
            q=p * cmath.exp(1j * alpha),
            alpha=alpha,
        )

    @classmethod
    def scaled(cls, x: float, y: float, alpha: float = 0.0) -> "MesonParams":
        """Dimensionless parameters in units of 1/Gamma: x = dm/Gamma, y = dGamma/Gamma."""
        return cls.from_widths(1.0, y, x, alpha)

    @property
    def gamma(self) -> float:
        return 0.5 * (self.gamma_H + self.gamma_L)

    @property
    def dgamma(self) -> float:
        return self.gamma_H - self.gamma_L

    @property
    def dm(self) -> float:
        return self.m_H - self.m_L

    @property
    def p_tilde(self) -> complex:
        return self.p * cmath.exp(1j * self.alpha)

    def rotated(self, phi: float) -> "MesonParams":
        """Shift the unphysical phase by ``phi`` with q co-rotated."""
        return MesonParams(
            self.gamma_L, self.gamma_H, self.m_L, self.m_H,
            self.p, self.q * cmath.exp(1j * phi), self.alpha + phi,
        )


def _check_time(t: float) -> None:
    if not t >= 0.0:
        raise ValueError(f"time must be >= 0, got {t!r}")


def g_plus(t: float, mp: MesonParams) -> complex:
    _check_time(t)
    eh = complex(mp.m_H, -0.5 * mp.gamma_H)
    el = complex(mp.m_L, -0.5 * mp.gamma_L)
    return 0.5 * (cmath.exp(-1j * eh * t) + cmath.exp(-1j * el * t))


def g_minus(t: float, mp: MesonParams) -> complex:
    _check_time(t)
    eh = complex(mp.m_H, -0.5 * mp.gamma_H)
    el = complex(mp.m_L, -0.5 * mp.gamma_L)
    return 0.5 * (cmath.exp(-1j * eh * t) - cmath.exp(-1j * el * t))


@dataclass(frozen=True)
class StaticProbabilities:
    B1_Bbar: float
    B1_B: float
    B1_BH: float
    B2_BH: float
    BH_Bbar: float
    BH_B: float

    def as_dict(self) -> dict:
        return dict(self.__dict__)


def static_probabilities(mp: MesonParams) -> StaticProbabilities:
    """Joint probabilities at t0 for the flavour-singlet pair (fermion slot first)."""
    pt, q = mp.p_tilde, mp.q
    return StaticProbabilities(
        B1_Bbar=0.25 * (abs(pt) ** 2 + abs(q) ** 2),
        B1_B=0.25 * (abs(pt) ** 2 + abs(q) ** 2),
        B1_BH=0.25 * abs(pt - q) ** 2,
        B2_BH=0.25 * abs(pt + q) ** 2,
        BH_Bbar=0.5 * abs(pt) ** 2,
        BH_B=0.5 * abs(q) ** 2,
    )


def static_table(mp: MesonParams) -> JointProbabilityTable:
    """The t0 data as a :class:`JointProbabilityTable` under the axis mapping above.

    Entries involving BL or B2-with-flavour complete the blocks; they are
    obtained from the same projections as the six listed probabilities.
    """
    pt, q = mp.p_tilde, mp.q
    s = static_probabilities(mp)
    quarter = 0.25 * (abs(pt) ** 2 + abs(q) ** 2)
    # ab: (B1|B2) x (Bbar|B)
    ab = [[s.B1_Bbar, s.B1_B], [quarter, quarter]]
    # cb: (BH|BL) x (Bbar|B)
    cb = [[s.BH_Bbar, s.BH_B], [0.5 * abs(mp.p) ** 2, 0.5 * abs(q) ** 2]]
    # ac: (B1|B2) x (BH|BL)
    ac = [[s.B1_BH, 0.25 * abs(pt + q) ** 2], [s.B2_BH, 0.25 * abs(q - pt) ** 2]]
    return JointProbabilityTable(ab, cb, ac)


def static_inequality(
    mp: MesonParams, orientation: str = "Bbar-plus", tol: float = DEFAULT_TOL
) -> InequalityReport:
    """Static inequality reduced with |p~|^2 + |q|^2 = 1.

    ``Bbar-plus`` (b+ -> Bbar): |q|^2 - |p~|^2 <= |p~ - q|^2.
    ``B-plus`` (b+ -> B):      |p~|^2 - |q|^2 <= |p~ - q|^2.
    The margin equals four times the margin of the probability form.
    """
    pt, q = mp.p_tilde, mp.q
    diff = abs(pt) ** 2 - abs(q) ** 2
    if orientation == "Bbar-plus":
        lhs = -diff
    elif orientation == "B-plus":
        lhs = diff
    else:
        raise ValueError(f"orientation must be 'Bbar-plus' or 'B-plus', got {orientation!r}")
    return InequalityReport.compare(lhs, abs(pt - q) ** 2, tol, alpha=mp.alpha)


@dataclass(frozen=True)
class DynamicProbabilities:
    B1_to_B1: float
    B2_to_B1: float
    Bbar_to_Bbar: float
    B_to_Bbar: float
    B1_Bbar_t: float

    def as_dict(self) -> dict:
        return dict(self.__dict__)


def _check_qp(mp: MesonParams, qp_tol: float) -> None:
    ratio = mp.q / mp.p
    if abs(abs(ratio) - 1.0) > qp_tol:
        raise ValueError(
            f"|q/p| = {abs(ratio):.6g} is outside 1 +/- {qp_tol}; the dynamic branch "
            f"assumes q/p = exp(i alpha) (measured |q/p| = {QP_MODULUS_MEASURED} "
            f"+/- {QP_MODULUS_ERROR})"
        )
    if abs(ratio - cmath.exp(1j * mp.alpha)) > qp_tol:
        raise ValueError(
            f"arg(q/p) = {cmath.phase(ratio):.6g} does not match alpha = {mp.alpha:.6g}"
        )


def dynamic_probabilities(t: float, mp: MesonParams, qp_tol: float = 0.01) -> DynamicProbabilities:
    """Transition probabilities and w(B1, Bbar, t), valid for q/p = exp(i alpha)."""
    _check_time(t)
    _check_qp(mp, qp_tol)
    G, dG = mp.gamma, mp.dgamma
    return DynamicProbabilities(
        B1_to_B1=math.exp(-G * t) * math.exp(-0.5 * dG * t),
        B2_to_B1=0.0,
        Bbar_to_Bbar=abs(g_plus(t, mp)) ** 2,
        B_to_Bbar=abs(g_minus(t, mp)) ** 2,
        B1_Bbar_t=0.25 * math.exp(-2.0 * G * t),
    )


def pair_norm2(t: float, mp: MesonParams) -> float:
    """Squared norm of the decaying pair state, exp(-2 Gamma t)."""
    _check_time(t)
    return math.exp(-2.0 * mp.gamma * t)


def dynamic_inequality(
    t: float, mp: MesonParams, tol: float = DEFAULT_TOL, qp_tol: float = 0.01
) -> InequalityReport:
    """Time-dependent inequality for the pair; reduces to 1 <= exp(-dGamma t).

    ``params`` carries ``ratio`` (rhs/lhs as assembled) next to its closed
    form (1 + exp(-dGamma t))/2. The pair decays, so ``tol`` is applied
    relative to the surviving norm exp(-2 Gamma t).
    """
    d = dynamic_probabilities(t, mp, qp_tol)
    trans = TransitionTable(d.B1_to_B1, d.B2_to_B1, d.Bbar_to_Bbar, d.B_to_Bbar)
    rep = dynamic_wigner(static_table(mp), trans, d.B1_Bbar_t, tol * pair_norm2(t, mp))
    closed = 0.5 * (1.0 + math.exp(-mp.dgamma * t))
    return InequalityReport(
        rep.lhs, rep.rhs, rep.margin, rep.violated, rep.tolerance,
        {
            "t": t,
            "gamma": mp.gamma,
            "dgamma": mp.dgamma,
            "dm": mp.dm,
            "alpha": mp.alpha,
            "ratio": rep.rhs / rep.lhs,
            "ratio_closed_form": closed,
        },
    )
