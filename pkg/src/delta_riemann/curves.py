"""Phase-plane wave curves through a base state.

Every curve is a graph ``u = f(rho)`` over a density interval that depends on
the base state. Shock loci, rarefaction curves (and their inverses), the
delta-entropy boundaries ``D*`` and the speed-compatibility curves ``M*`` are
all evaluated in closed form.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .gas import GasLaw, GasState, power_difference, pressure_jump


class CurveId(str, enum.Enum):
    S1 = "S1"
    S2 = "S2"
    S11 = "S11"
    S22 = "S22"
    R1 = "R1"
    R2 = "R2"
    R1STAR = "R1star"
    R2STAR = "R2star"
    D1 = "D1"
    D2 = "D2"
    M1 = "M1"
    M2 = "M2"
    M11 = "M11"
    M21 = "M21"
    D11 = "D11"
    D21 = "D21"

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class CurvePoint:
    rho: float
    u: float


# Domain kinds relative to the base density rb:
#   "above": rho >= rb, "below": 0 < rho <= rb,
#   "m_above": rho >= rb/(gamma+1)**(1/gamma), "m_band": that bound <= rho <= rb.
_DOMAIN = {
    CurveId.S1: "above",
    CurveId.S2: "below",
    CurveId.S11: "below",
    CurveId.S22: "above",
    CurveId.R1: "below",
    CurveId.R2: "above",
    CurveId.R1STAR: "above",
    CurveId.R2STAR: "below",
    CurveId.D1: "above",
    CurveId.D2: "below",
    CurveId.M1: "m_above",
    CurveId.M2: "m_band",
    CurveId.M11: "m_above",
    CurveId.M21: "m_band",
    CurveId.D11: "above",
    CurveId.D21: "below",
}


def m_lower_bound(law: GasLaw, rho_base: float) -> float:
    """Smallest density on the M-curves: ``rho_base / (gamma + 1)**(1/gamma)``."""
    return rho_base / (law.gamma + 1.0) ** (1.0 / law.gamma)


def curve_domain(law: GasLaw, cid: CurveId, base: GasState) -> tuple[float, float]:
    """Closed density interval ``(lo, hi)`` on which the curve is evaluated.

    ``lo`` may be 0 (excluded) and ``hi`` may be ``inf``.
    """
    kind = _DOMAIN[CurveId(cid)]
    rb = base.rho
    if kind == "above":
        return rb, math.inf
    if kind == "below":
        return 0.0, rb
    if kind == "m_above":
        return m_lower_bound(law, rb), math.inf
    return m_lower_bound(law, rb), rb


def shock_magnitude(law: GasLaw, rho, rho_base):
    """``sqrt((rho - rb)(p - pb)/(rho*rb))``, the velocity jump across a shock."""
    rho = np.asarray(rho, dtype=float)
    dp = pressure_jump(law, rho, rho_base)
    out = np.sqrt((rho - rho_base) * dp / (rho * rho_base))
    return out if out.ndim else float(out)


def rarefaction_integral(law: GasLaw, rho, rho_base):
    """Closed form of the integral of c(s)/s from rb to rho."""
    return law.rarefaction_coeff * power_difference(rho, rho_base, law.k)


def _m_root(law: GasLaw, rho, rho_base):
    g = law.gamma
    arg = ((g + 1.0) * np.asarray(rho, dtype=float) ** g - rho_base ** g) / rho_base
    return np.sqrt(np.maximum(arg, 0.0))


def _evaluate(law: GasLaw, cid: CurveId, base: GasState, rho):
    ub, rb = base.u, base.rho
    g = law.gamma
    if cid in (CurveId.S1, CurveId.S2):
        return ub - shock_magnitude(law, rho, rb)
    if cid in (CurveId.S11, CurveId.S22):
        return ub + shock_magnitude(law, rho, rb)
    if cid in (CurveId.R1, CurveId.R1STAR):
        return ub - rarefaction_integral(law, rho, rb)
    if cid in (CurveId.R2, CurveId.R2STAR):
        return ub + rarefaction_integral(law, rho, rb)
    if cid == CurveId.D1:
        return ub - np.sqrt(pressure_jump(law, rho, rb) / rb)
    if cid == CurveId.D2:
        return ub - np.sqrt(-pressure_jump(law, rho, rb) / rho)
    if cid == CurveId.D11:
        return ub + np.sqrt(pressure_jump(law, rho, rb) / rb)
    if cid == CurveId.D21:
        return ub + np.sqrt(-pressure_jump(law, rho, rb) / rho)
    c = np.sqrt(g * np.asarray(rho, dtype=float) ** (g - 1.0))
    if cid == CurveId.M1:
        return ub - c - _m_root(law, rho, rb)
    if cid == CurveId.M2:
        return ub - c + _m_root(law, rho, rb)
    if cid == CurveId.M11:
        return ub + c + _m_root(law, rho, rb)
    if cid == CurveId.M21:
        return ub + c - _m_root(law, rho, rb)
    raise ValueError(f"unknown curve {cid!r}")


def _check_domain(law, cid, base, rho, window):
    if base.rho <= 0:
        raise DomainError("curve base state must have positive density")
    lo, hi = curve_domain(law, cid, base)
    r = np.asarray(rho, dtype=float)
    if np.any(~np.isfinite(r)) or np.any(r <= 0):
        raise DomainError(f"{cid}: density must be positive and finite")
    if np.any(r < lo):
        raise DomainError(f"{cid}: requires rho >= {lo!r} relative to base rho={base.rho!r}")
    if np.any(r > hi):
        raise DomainError(f"{cid}: requires rho <= {hi!r} relative to base rho={base.rho!r}")
    if window is not None and np.any(r >= window):
        raise DomainError(f"{cid}: requires rho < {window!r} (search window)")


def eval_curve(law: GasLaw, cid: CurveId, base: GasState, rho, window: float | None = None):
    """Velocity of curve ``cid`` through ``base`` at density ``rho``.

    Parameters
    ----------
    law : GasLaw
    cid : CurveId
    base : GasState
        Base state with positive density.
    rho : float or array_like
        Abscissa(e) inside the curve's domain.
    window : float, optional
        Extra strict upper bound on ``rho``. Used for the D11 search window,
        whose natural domain is otherwise unbounded above.

    Raises
    ------
    DomainError
        If any ``rho`` lies outside the curve's domain.
    """
    cid = CurveId(cid)
    _check_domain(law, cid, base, rho, window)
    out = _evaluate(law, cid, base, rho)
    out = np.asarray(out, dtype=float)
    return out if out.ndim else float(out)


def sample_curve(law: GasLaw, cid: CurveId, base: GasState, rho_lo: float, rho_hi: float,
                 n: int) -> list[CurvePoint]:
    """Sample ``n`` evenly spaced points of a curve on ``[rho_lo, rho_hi]``."""
    if n < 2:
        raise ValueError("sample_curve needs n >= 2")
    if not (rho_lo <= rho_hi):
        raise ValueError(f"inverted or empty density range [{rho_lo}, {rho_hi}]")
    rho = np.linspace(rho_lo, rho_hi, n)
    u = eval_curve(law, cid, base, rho)
    return [CurvePoint(float(r), float(v)) for r, v in zip(rho, u)]


def on_curve(law: GasLaw, cid: CurveId, base: GasState, state: GasState, tol: float = 1e-10) -> bool:
    """True when ``state`` lies on the curve within ``tol * max(1, |u|)``."""
    lo, hi = curve_domain(law, cid, base)
    if not (lo <= state.rho <= hi) or state.rho <= 0:
        return False
    return abs(state.u - eval_curve(law, cid, base, state.rho)) <= tol * max(1.0, abs(state.u))
