"""Exact classical Riemann solver: two-wave patterns, vacuum and self-similar sampling."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .classify import Region, classify
from .curves import CurveId
from .errors import DomainError
from .gas import GasLaw, GasState, power_difference, pressure, pressure_jump, sound_speed

ROOT_TOL = 1e-12
MAX_ITER = 200


@dataclass(frozen=True)
class ClassicalWave:
    """One elementary wave.

    ``sigma`` is set for shocks; ``fan_span`` holds the head and tail speeds
    (in ``xi = x/t``) of a rarefaction.
    """

    family: int
    kind: str
    left_state: GasState
    right_state: GasState
    sigma: float | None = None
    fan_span: tuple[float, float] | None = None

    @property
    def span(self) -> tuple[float, float]:
        if self.kind == "shock":
            return self.sigma, self.sigma
        return self.fan_span


@dataclass(frozen=True)
class VacuumRange:
    """Zero-density band between two rarefaction tails."""

    xi_lo: float
    xi_hi: float


@dataclass(frozen=True)
class ClassicalSolution:
    law: GasLaw
    left: GasState
    right: GasState
    pattern: str
    waves: tuple
    middle: GasState | VacuumRange | None


def _wave_function(law: GasLaw, rho, rho_k: float):
    """Velocity change across a wave from density ``rho_k`` to ``rho``.

    Shock branch for ``rho > rho_k``, rarefaction branch otherwise.
    """
    rho = float(rho)
    if rho > rho_k:
        return math.sqrt((rho - rho_k) * pressure_jump(law, rho, rho_k) / (rho * rho_k))
    return law.rarefaction_coeff * power_difference(rho, rho_k, law.k)


def _mismatch(law: GasLaw, U1: GasState, U2: GasState, rho: float) -> float:
    return _wave_function(law, rho, U1.rho) + _wave_function(law, rho, U2.rho) + (U2.u - U1.u)


def fan_tail_speed(law: GasLaw, s: GasState, family: int) -> float:
    """Speed ``u -/+ 2c/(gamma-1)`` of the vacuum edge of a fan emanating from ``s``."""
    c = sound_speed(law, s.rho)
    return s.u + 2.0 * c / (law.gamma - 1.0) if family == 1 else s.u - 2.0 * c / (law.gamma - 1.0)


def _middle_density(law: GasLaw, U1: GasState, U2: GasState) -> float:
    lo, hi = 0.0, max(U1.rho, U2.rho)
    while _mismatch(law, U1, U2, hi) < 0:
        lo, hi = hi, 2.0 * hi
    for _ in range(MAX_ITER):
        mid = 0.5 * (lo + hi)
        if _mismatch(law, U1, U2, mid) < 0:
            lo = mid
        else:
            hi = mid
        if hi - lo <= ROOT_TOL * hi:
            break
    return 0.5 * (lo + hi)


def _shock(law: GasLaw, family: int, left: GasState, right: GasState) -> ClassicalWave:
    sigma = (right.momentum - left.momentum) / (right.rho - left.rho)
    return ClassicalWave(family, "shock", left, right, sigma=sigma)


def _fan(law: GasLaw, family: int, left: GasState, right: GasState) -> ClassicalWave:
    if family == 1:
        head = left.u - sound_speed(law, left.rho)
        tail = right.u - (sound_speed(law, right.rho) if right.rho > 0 else 0.0)
    else:
        head = left.u + (sound_speed(law, left.rho) if left.rho > 0 else 0.0)
        tail = right.u + sound_speed(law, right.rho)
    return ClassicalWave(family, "rarefaction", left, right, fan_span=(head, tail))


def _elementary(law, family, left, right):
    if family == 1:
        return _shock(law, 1, left, right) if right.rho > left.rho else _fan(law, 1, left, right)
    return _shock(law, 2, left, right) if right.rho < left.rho else _fan(law, 2, left, right)


def solve_classical(law: GasLaw, U1: GasState, U2: GasState) -> ClassicalSolution:
    """Entropy solution of the classical Riemann problem.

    The middle density solves ``f(rho; rho1) + f(rho; rho2) + u2 - u1 = 0`` by
    bracketed bisection. Right states exactly on a wave curve through ``U1``
    yield a single wave.
    """
    if U1.rho <= 0 or U2.rho <= 0:
        raise DomainError("solve_classical requires positive densities")
    label = classify(law, U1, U2)
    if label.tag == Region.COINCIDENT:
        return ClassicalSolution(law, U1, U2, "Constant", (), U1)
    if label.tag == Region.ON_CURVE and label.curve in (CurveId.S1, CurveId.R1, CurveId.S2, CurveId.R2):
        family = 1 if label.curve in (CurveId.S1, CurveId.R1) else 2
        return ClassicalSolution(law, U1, U2, "SingleWave", (_elementary(law, family, U1, U2),), None)
    if label.tag == Region.V:
        lo, hi = fan_tail_speed(law, U1, 1), fan_tail_speed(law, U2, 2)
        w1 = _fan(law, 1, U1, GasState(lo, 0.0))
        w2 = _fan(law, 2, GasState(hi, 0.0), U2)
        return ClassicalSolution(law, U1, U2, "R1VacR2", (w1, w2), VacuumRange(lo, hi))
    rho_m = _middle_density(law, U1, U2)
    u_m = 0.5 * (U1.u + U2.u) + 0.5 * (_wave_function(law, rho_m, U2.rho) - _wave_function(law, rho_m, U1.rho))
    mid = GasState(u_m, rho_m)
    w1 = _elementary(law, 1, U1, mid)
    w2 = _elementary(law, 2, mid, U2)
    pattern = ("S1" if w1.kind == "shock" else "R1") + ("S2" if w2.kind == "shock" else "R2")
    return ClassicalSolution(law, U1, U2, pattern, (w1, w2), mid)


def fan_state(law: GasLaw, wave: ClassicalWave, xi):
    """Closed-form ``(rho, u)`` inside a rarefaction fan at similarity speeds ``xi``."""
    g = law.gamma
    xi = np.asarray(xi, dtype=float)
    if wave.family == 1:
        s = wave.left_state
        c = (g - 1.0) / (g + 1.0) * (s.u + 2.0 * sound_speed(law, s.rho) / (g - 1.0) - xi)
        u = xi + c
    else:
        s = wave.right_state
        c = (g - 1.0) / (g + 1.0) * (xi - s.u + 2.0 * sound_speed(law, s.rho) / (g - 1.0))
        u = xi - c
    c = np.maximum(c, 0.0)
    rho = (c * c / g) ** (1.0 / (g - 1.0))
    return rho, u


def sample_classical_array(sol: ClassicalSolution, xi):
    """Vectorized sampler returning arrays ``(rho, u)`` at similarity speeds ``xi``.

    Points exactly on a shock take the right state.
    """
    xi = np.asarray(xi, dtype=float)
    rho = np.full(xi.shape, sol.left.rho)
    u = np.full(xi.shape, sol.left.u)
    for w in sol.waves:
        head, tail = w.span
        after = xi >= tail if w.kind == "shock" else xi > tail
        rho = np.where(after, w.right_state.rho, rho)
        u = np.where(after, w.right_state.u, u)
        if w.kind == "rarefaction":
            inside = (xi > head) & (xi <= tail)
            if np.any(inside):
                fr, fu = fan_state(sol.law, w, xi[inside])
                rho[inside] = fr
                u[inside] = fu
    if isinstance(sol.middle, VacuumRange):
        band = (xi > sol.middle.xi_lo) & (xi < sol.middle.xi_hi)
        rho = np.where(band, 0.0, rho)
        u = np.where(band, xi, u)
    if sol.pattern == "Constant":
        rho = np.full(xi.shape, sol.left.rho)
        u = np.full(xi.shape, sol.left.u)
    return rho, u


def sample_classical(sol: ClassicalSolution, xi: float) -> GasState:
    """State at similarity speed ``xi = x/t``.

    In a vacuum band the density is 0 and the velocity is the linear
    interpolant of the two tail speeds, which equals ``xi``.
    """
    rho, u = sample_classical_array(sol, np.array([xi]))
    return GasState(float(u[0]), float(rho[0]))


def rh_residual(wave: ClassicalWave, law: GasLaw) -> float:
    """Largest Rankine-Hugoniot mismatch of a shock over both conserved components."""
    L, R = wave.left_state, wave.right_state
    s = wave.sigma
    mass = s * (R.rho - L.rho) - (R.momentum - L.momentum)
    mom = s * (R.momentum - L.momentum) - ((R.rho * R.u ** 2 + pressure(law, R.rho))
                                            - (L.rho * L.u ** 2 + pressure(law, L.rho)))
    return max(abs(mass), abs(mom))
