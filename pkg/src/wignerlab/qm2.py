"""Two-level and bipartite two-level kernel for the precessing pair.

Spinors live in the (x, z) plane: a direction at polar angle theta has
the spin-up eigenstate (cos theta/2, sin theta/2). Pair amplitudes are
indexed ``amp[s2][s1]`` with slot 2 the fermion (electron) and slot 1 the
antifermion (positron); index 0 is "up", 1 is "down".
"""
from __future__ import annotations

import math
from dataclasses import dataclass

__all__ = [
    "Spinor",
    "PairState",
    "spinor_plus",
    "spinor_minus",
    "singlet",
    "evolve_electron",
    "evolve_positron",
    "pair_state_at",
    "joint_probability",
    "transition_probability",
]

_INV_SQRT2 = 1.0 / math.sqrt(2.0)


@dataclass(frozen=True)
class Spinor:
    up: complex
    down: complex

    def norm2(self) -> float:
        return abs(self.up) ** 2 + abs(self.down) ** 2

    def inner(self, other: "Spinor") -> complex:
        """<self|other>."""
        return self.up.conjugate() * other.up + self.down.conjugate() * other.down


@dataclass(frozen=True)
class PairState:
    amp: tuple[tuple[complex, complex], tuple[complex, complex]]

    def norm2(self) -> float:
        return sum(abs(a) ** 2 for row in self.amp for a in row)

    @classmethod
    def product(cls, fermion: Spinor, antifermion: Spinor) -> "PairState":
        f = (fermion.up, fermion.down)
        a = (antifermion.up, antifermion.down)
        return cls(tuple(tuple(f[i] * a[j] for j in range(2)) for i in range(2)))

    def __sub__(self, other: "PairState") -> "PairState":
        return PairState(
            tuple(tuple(x - y for x, y in zip(r, q)) for r, q in zip(self.amp, other.amp))
        )

    def scaled(self, c: complex) -> "PairState":
        return PairState(tuple(tuple(c * x for x in r) for r in self.amp))


def spinor_plus(theta: float) -> Spinor:
    return Spinor(complex(math.cos(0.5 * theta)), complex(math.sin(0.5 * theta)))


def spinor_minus(theta: float) -> Spinor:
    return Spinor(complex(-math.sin(0.5 * theta)), complex(math.cos(0.5 * theta)))


def singlet() -> PairState:
    # (|up>_2 |down>_1 - |down>_2 |up>_1) / sqrt(2)
    return PairState(((0j, complex(_INV_SQRT2)), (complex(-_INV_SQRT2), 0j)))


def _rotate(s: Spinor, angle: float) -> Spinor:
    c, sn = math.cos(angle), math.sin(angle)
    return Spinor(c * s.up - sn * s.down, sn * s.up + c * s.down)


def evolve_electron(s: Spinor, phase: float) -> Spinor:
    """Larmor precession of the electron: the half-angle advances by ``phase``."""
    return _rotate(s, phase)


def evolve_positron(s: Spinor, phase: float) -> Spinor:
    """Precession of the positron, opposite sense to the electron."""
    return _rotate(s, -phase)


def pair_state_at(phase: float) -> PairState:
    """Singlet prepared along z at t = 0 and evolved to precession phase ``phase``."""
    up, down = spinor_plus(0.0), spinor_minus(0.0)
    first = PairState.product(evolve_electron(up, phase), evolve_positron(down, phase))
    second = PairState.product(evolve_electron(down, phase), evolve_positron(up, phase))
    return (first - second).scaled(_INV_SQRT2)


def joint_probability(state: PairState, proj2: Spinor, proj1: Spinor) -> float:
    """Born probability |<proj2|<proj1|state>|^2."""
    p2 = (proj2.up.conjugate(), proj2.down.conjugate())
    p1 = (proj1.up.conjugate(), proj1.down.conjugate())
    amp = sum(p2[i] * p1[j] * state.amp[i][j] for i in range(2) for j in range(2))
    return abs(amp) ** 2


def transition_probability(
    initial: Spinor, evolved_by: float, target: Spinor, particle: str = "electron"
) -> float:
    """|<psi(t)|target>|^2 for ``initial`` precessed by phase ``evolved_by``."""
    if particle == "electron":
        evolved = evolve_electron(initial, evolved_by)
    elif particle == "positron":
        evolved = evolve_positron(initial, evolved_by)
    else:
        raise ValueError(f"unknown particle {particle!r}")
    return abs(evolved.inner(target)) ** 2
