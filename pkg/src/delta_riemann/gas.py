"""Polytropic gas law p = rho**gamma and its characteristic speeds."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError


@dataclass(frozen=True)
class GasLaw:
    """Polytropic pressure law with adiabatic exponent ``gamma > 1``."""

    gamma: float

    def __post_init__(self):
        g = self.gamma
        if not isinstance(g, (int, float)) or not math.isfinite(g) or g <= 1.0:
            raise DomainError(f"gamma must be a finite number > 1, got {g!r}")
        object.__setattr__(self, "gamma", float(g))

    @property
    def k(self) -> float:
        """Exponent (gamma - 1)/2 of the Riemann-invariant power law."""
        return 0.5 * (self.gamma - 1.0)

    @property
    def rarefaction_coeff(self) -> float:
        """Prefactor 2*sqrt(gamma)/(gamma - 1) of the closed-form rarefaction integral."""
        return 2.0 * math.sqrt(self.gamma) / (self.gamma - 1.0)


@dataclass(frozen=True)
class GasState:
    """A phase-plane point (u, rho)."""

    u: float
    rho: float

    def __post_init__(self):
        if not (math.isfinite(self.u) and math.isfinite(self.rho)):
            raise DomainError(f"state components must be finite, got u={self.u!r}, rho={self.rho!r}")
        if self.rho < 0:
            raise DomainError(f"density must be non-negative, got rho={self.rho!r}")
        object.__setattr__(self, "u", float(self.u))
        object.__setattr__(self, "rho", float(self.rho))

    @property
    def momentum(self) -> float:
        return self.rho * self.u


def _as_float_or_array(x):
    if np.ndim(x) == 0:
        return float(x)
    return np.asarray(x, dtype=float)


def pressure(law: GasLaw, rho):
    """Return ``rho**gamma``. Accepts scalars or arrays; negative density is rejected."""
    r = _as_float_or_array(rho)
    if np.any(np.asarray(r) < 0):
        raise DomainError("pressure requires rho >= 0")
    return r ** law.gamma


def sound_speed(law: GasLaw, rho):
    """Return ``sqrt(gamma * rho**(gamma - 1))`` for positive density."""
    r = _as_float_or_array(rho)
    if np.any(~(np.asarray(r) > 0)):
        raise DomainError("sound speed requires rho > 0 (vacuum has no sound speed)")
    return np.sqrt(law.gamma * r ** (law.gamma - 1.0)) if isinstance(r, np.ndarray) else math.sqrt(
        law.gamma * r ** (law.gamma - 1.0))


def eigenvalues(law: GasLaw, s: GasState) -> tuple[float, float]:
    """Characteristic speeds ``(u - c, u + c)`` of a non-vacuum state."""
    if s.rho <= 0:
        raise DomainError("eigenvalues are undefined at vacuum")
    c = sound_speed(law, s.rho)
    return s.u - c, s.u + c


def power_difference(rho, rho_ref, exponent: float):
    """Accurate ``rho**e - rho_ref**e`` without cancellation near ``rho == rho_ref``.

    Uses ``rho_ref**e * expm1(e * log1p((rho - rho_ref)/rho_ref))``.
    """
    rho = np.asarray(rho, dtype=float)
    ratio = (rho - rho_ref) / rho_ref
    with np.errstate(divide="ignore"):
        out = rho_ref ** exponent * np.expm1(exponent * np.log1p(ratio))
    return out if out.ndim else float(out)


def pressure_jump(law: GasLaw, rho, rho_ref):
    """``p(rho) - p(rho_ref)`` computed without cancellation."""
    return power_difference(rho, rho_ref, law.gamma)


@dataclass(frozen=True)
class RiemannData:
    """Riemann data with an optional point mass ``rho0`` moving at ``u0`` at the origin."""

    left: GasState
    right: GasState
    rho0: float = 0.0
    u0: float = 0.0

    def __post_init__(self):
        if not (math.isfinite(self.rho0) and math.isfinite(self.u0)):
            raise DomainError("rho0 and u0 must be finite")
        if self.rho0 < 0:
            raise DomainError(f"rho0 must be >= 0, got {self.rho0!r}")
        object.__setattr__(self, "rho0", float(self.rho0))
        object.__setattr__(self, "u0", float(self.u0))
