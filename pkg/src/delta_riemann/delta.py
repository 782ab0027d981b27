"""Closed-form delta-shock paths for constant side states and an initial point mass.

The front ``x(t)`` solves the quadratic

    ([rho]/2) x^2 - ([rho u] t - rho0) x + [rho u^2 + p] t^2/2 - rho0 u0 t = 0

with the root chosen so that the mass weight ``w = [rho] x - [rho u] t + rho0``
is non-negative. Its square is ``Delta = a t^2 + 2 rho0 b t + rho0^2``.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field

import numpy as np

from .classify import (EXTINCTION_ROWS, Brackets, CaseRow, brackets, snapped,
                       table_row)
from .gas import GasLaw, GasState, RiemannData

log = logging.getLogger(__name__)

NONE, VANISHES, BLOWS_UP = "none", "weight_vanishes", "blows_up"


@dataclass(frozen=True)
class Extinction:
    """How the single-delta description ends.

    ``kind`` is ``"none"``, ``"weight_vanishes"`` or ``"blows_up"``; ``direction``
    is the sign of the front's limit for blow-up, and ``finite_front`` marks the
    degenerate rational case whose front stays bounded.
    """

    kind: str = NONE
    time: float = math.inf
    direction: int = 0
    finite_front: bool = False


def _speed_pair(d_m: float, ra: float, d_rho: float, d_flux: float) -> tuple[float, float]:
    """Stable ``((d_m + ra)/d_rho, (d_m - ra)/d_rho)`` using their product ``d_flux/d_rho``."""
    if d_m >= 0:
        plus = (d_m + ra) / d_rho
        minus = d_flux / (d_m + ra) if d_m + ra != 0 else 0.0
    else:
        minus = (d_m - ra) / d_rho
        plus = d_flux / (d_m - ra)
    return plus, minus


def _arr(t):
    return np.asarray(t, dtype=float)


def _out(v):
    v = np.asarray(v, dtype=float)
    return v if v.ndim else float(v)


@dataclass(frozen=True)
class DeltaShockPath:
    """A delta shock between constant states ``left`` and ``right``.

    All functions of ``t`` accept scalars or arrays and use time measured from
    the moment the front starts at ``x = 0``.

    Attributes
    ----------
    case : CaseRow
        Row of the existence table.
    form : str
        ``"linear"``, ``"rational"`` or ``"sqrt"``.
    lifespan : float
        ``inf`` for global paths.
    extinction : Extinction
    kinks : tuple of float
        Times where ``x`` is not smooth inside the lifespan.
    """

    law: GasLaw
    left: GasState
    right: GasState
    rho0: float
    u0: float
    case: CaseRow
    brackets: Brackets
    a: float
    b: float
    form: str
    lifespan: float
    extinction: Extinction
    kinks: tuple = ()
    _speed: float = 0.0
    _wslope: float = 0.0
    _roots: tuple = field(default=(), repr=False)

    @property
    def data(self) -> RiemannData:
        return RiemannData(self.left, self.right, self.rho0, self.u0)

    @property
    def closed_end(self) -> bool:
        """Whether the lifespan includes its endpoint (weight extinction)."""
        return self.extinction.kind == VANISHES

    @property
    def mean_velocity(self) -> float:
        return 0.5 * (self.left.u + self.right.u)

    # -- discriminant ---------------------------------------------------
    def discriminant(self, t):
        """``Delta(t)`` evaluated in a factored form accurate near its roots."""
        t = _arr(t)
        a, b, r0 = self.a, self.b, self.rho0
        if self.case == CaseRow.R12:
            d = a * (t - r0 / math.sqrt(a)) ** 2
        elif a == 0.0:
            d = r0 * (2.0 * b * t + r0)
        elif self._roots:
            r1, r2 = self._roots
            d = a * (t - r1) * (t - r2)
        else:
            d = a * (t + r0 * b / a) ** 2 + r0 * r0 * (a - b * b) / a
        return _out(d)

    def _sqrt_delta(self, t):
        t = _arr(t)
        if self.case == CaseRow.R12:
            return math.sqrt(self.a) * np.abs(t - self.rho0 / math.sqrt(self.a))
        return np.sqrt(np.maximum(_arr(self.discriminant(t)), 0.0))

    # -- front ----------------------------------------------------------
    def x(self, t):
        """Front position."""
        t = _arr(t)
        if self.form == "linear":
            return _out(self._speed * t)
        br = self.brackets
        if self.form == "rational":
            if self.extinction.finite_front or self.u0 == self.mean_velocity:
                return _out(self.u0 * t)
            u1, u2 = self.left.u, self.right.u
            rho1 = self.left.rho
            num = rho1 * (u2 * u2 - u1 * u1) * t * t - 2.0 * self.rho0 * self.u0 * t
            with np.errstate(divide="ignore", invalid="ignore"):
                return _out(num / (2.0 * (rho1 * br.d_u * t - self.rho0)))
        sd = self._sqrt_delta(t)
        B = br.d_m * t - self.rho0
        C = 0.5 * br.d_flux * t * t - self.rho0 * self.u0 * t
        den = sd - B
        with np.errstate(divide="ignore", invalid="ignore"):
            stable = -2.0 * C / den
            direct = (B + sd) / br.d_rho
        return _out(np.where((B <= 0) & (den > 0), stable, direct))

    def xprime(self, t):
        """Front speed, which is also the atom velocity."""
        t = _arr(t)
        if self.form == "linear":
            return _out(np.full_like(t, self._speed))
        br = self.brackets
        if self.form == "rational":
            if self.extinction.finite_front or self.u0 == self.mean_velocity:
                return _out(np.full_like(t, self.u0))
            u1, u2 = self.left.u, self.right.u
            rho1, r0 = self.left.rho, self.rho0
            du2 = u2 * u2 - u1 * u1
            num = rho1 ** 2 * br.d_u * du2 * t * t - 2.0 * r0 * rho1 * du2 * t + 2.0 * r0 * r0 * self.u0
            with np.errstate(divide="ignore", invalid="ignore"):
                return _out(num / (2.0 * (rho1 * br.d_u * t - r0) ** 2))
        if self.case == CaseRow.R12:
            plus, minus = _speed_pair(br.d_m, math.sqrt(self.a), br.d_rho, br.d_flux)
            return _out(np.where(t < self.kinks[0], minus, plus))
        sd = self._sqrt_delta(t)
        with np.errstate(divide="ignore", invalid="ignore"):
            return _out((br.d_m * sd + self.a * t + self.rho0 * self.b) / (br.d_rho * sd))

    def xsecond(self, t):
        """Second derivative of the front, away from kinks."""
        t = _arr(t)
        if self.form == "linear" or self.case in (CaseRow.R12, CaseRow.R14):
            return _out(np.zeros_like(t))
        br = self.brackets
        r0 = self.rho0
        if self.form == "rational":
            if self.extinction.finite_front or self.u0 == self.mean_velocity:
                return _out(np.zeros_like(t))
            rho1 = self.left.rho
            u1, u2 = self.left.u, self.right.u
            with np.errstate(divide="ignore", invalid="ignore"):
                return _out(rho1 * r0 * r0 * br.d_u * (u1 + u2 - 2.0 * self.u0)
                            / (rho1 * br.d_u * t - r0) ** 3)
        d = _arr(self.discriminant(t))
        with np.errstate(divide="ignore", invalid="ignore"):
            return _out(r0 * r0 * (self.a - self.b * self.b) / (br.d_rho * d ** 1.5))

    # -- weights --------------------------------------------------------
    def w_rho(self, t):
        """Mass carried by the atom."""
        t = _arr(t)
        if self.form == "linear":
            return _out(self._wslope * t)
        if self.form == "rational":
            return _out(self.rho0 - self.left.rho * self.brackets.d_u * t)
        return _out(self._sqrt_delta(t))

    def w_m(self, t):
        """Momentum carried by the atom, ``w_rho * x'``.

        Evaluated as ``[rho u] x - [rho u^2 + p] t + rho0 u0`` for curved fronts,
        which stays finite where ``x'`` blows up at weight extinction.
        """
        t = _arr(t)
        if self.form == "linear":
            return _out(self._wslope * self._speed * t)
        br = self.brackets
        return _out(br.d_m * _arr(self.x(t)) - br.d_flux * t + self.rho0 * self.u0)

    def w_n(self, t):
        """Momentum-flux weight ``w_m * x'``."""
        return _out(_arr(self.w_m(t)) * _arr(self.xprime(t)))

    def w_p(self, t):
        """Pressure weight; identically zero."""
        return _out(np.zeros_like(_arr(t)))

    def front_at_end(self) -> float:
        """Front position at a weight-extinction time."""
        if self.extinction.kind != VANISHES:
            raise ValueError("front position at the end is only defined for weight extinction")
        if self.form == "rational":
            return self.u0 * self.lifespan
        T = self.lifespan
        br = self.brackets
        B = br.d_m * T - self.rho0
        return B / br.d_rho

    def momentum_at_end(self) -> float:
        """Atom momentum left at weight extinction.

        Equals ``-rho0 sqrt(b^2 - a)/[rho]``, generally nonzero although the mass vanishes.
        """
        if self.extinction.kind != VANISHES:
            raise ValueError("only defined for weight extinction")
        br = self.brackets
        return br.d_m * self.front_at_end() - br.d_flux * self.lifespan + self.rho0 * self.u0


def _smallest_positive(values) -> float:
    pos = [v for v in values if v > 0 and math.isfinite(v)]
    return min(pos) if pos else math.inf


def construct(law: GasLaw, data: RiemannData) -> DeltaShockPath:
    """Build the single delta-shock path for ``data``.

    Raises
    ------
    NoDeltaShock
        With ``reason`` in ``{"a_negative", "u_jump_positive", "degenerate_constant"}``.
    """
    row = table_row(law, data)
    U1, U2 = data.left, data.right
    br = brackets(law, U1, U2, data.u0)
    a, b = snapped(br)
    r0 = data.rho0
    common = dict(law=law, left=U1, right=U2, rho0=r0, u0=data.u0, case=row, brackets=br, a=a, b=b)

    if r0 == 0.0:
        if row == CaseRow.R1:
            return DeltaShockPath(**common, form="linear", lifespan=math.inf, extinction=Extinction(),
                                  _speed=0.5 * (U1.u + U2.u), _wslope=-U1.rho * br.d_u)
        ra = math.sqrt(a)
        speed, _ = _speed_pair(br.d_m, ra, br.d_rho, br.d_flux)
        return DeltaShockPath(**common, form="linear", lifespan=math.inf, extinction=Extinction(),
                              _speed=speed, _wslope=ra)

    if br.d_rho == 0.0:
        ext = Extinction()
        life = math.inf
        if row == CaseRow.R6:
            life = r0 / (U1.rho * br.d_u)
            mean = 0.5 * (U1.u + U2.u)
            if data.u0 == mean:
                log.warning("u0 equals the mean velocity: the front stays finite (x = u0 t) "
                            "while the weight vanishes at t=%r", life)
                ext = Extinction(VANISHES, life, 0, finite_front=True)
            else:
                ext = Extinction(BLOWS_UP, life, 1 if data.u0 > mean else -1)
        return DeltaShockPath(**common, form="rational", lifespan=life, extinction=ext)

    roots: tuple = ()
    kinks: tuple = ()
    if row == CaseRow.R12:
        kinks = (r0 / math.sqrt(a),)
    elif a != 0.0 and b * b >= a:
        q = -r0 * (b + math.copysign(math.sqrt(b * b - a), b))
        roots = (q / a, r0 * r0 / q)
    life, ext = math.inf, Extinction()
    if row in EXTINCTION_ROWS:
        life = -r0 / (2.0 * b) if row == CaseRow.R8 else _smallest_positive(roots)
        ext = Extinction(VANISHES, life)
    return DeltaShockPath(**common, form="sqrt", lifespan=life, extinction=ext, kinks=kinks, _roots=roots)


# ---------------------------------------------------------------------------
# entropy
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Witness:
    """First failure of the over-compressing inequalities: ``side`` is ``left`` or ``right``."""

    time: float
    side: str


@dataclass(frozen=True)
class EntropyInterval:
    valid_until: float
    witnesses: tuple = ()
    method: str = ""


def _entropy_tol(path: DeltaShockPath) -> float:
    return 1e-12 * max(1.0, abs(path.left.u), abs(path.right.u))


def _margins(path: DeltaShockPath, t):
    xp = _arr(path.xprime(t))
    return path.left.u - xp, xp - path.right.u


def _violations(path, t, tol):
    left, right = _margins(path, t)
    bad_l = ~(left >= -tol)
    bad_r = ~(right >= -tol)
    return bad_l, bad_r


def _asymptotic_speed(path: DeltaShockPath) -> float:
    br = path.brackets
    if path.form == "rational":
        return path.mean_velocity
    if path.a > 0:
        return _speed_pair(br.d_m, math.sqrt(path.a), br.d_rho, br.d_flux)[0]
    return br.d_m / br.d_rho


def _time_scale(path: DeltaShockPath) -> float:
    s = max(math.sqrt(abs(path.a)), abs(path.b), path.left.rho * abs(path.brackets.d_u))
    return path.rho0 / s if s > 0 else 1.0


def _refine(path, lo: float, hi: float, tol: float) -> float:
    """Bisect between a satisfying time ``lo`` and a violating time ``hi``."""
    for _ in range(200):
        if hi - lo <= 1e-13 * max(1.0, hi):
            break
        mid = 0.5 * (lo + hi)
        bl, br_ = _violations(path, mid, tol)
        if bl or br_:
            hi = mid
        else:
            lo = mid
    return hi


def _numeric_interval(path: DeltaShockPath) -> EntropyInterval:
    tol = _entropy_tol(path)
    T = path.lifespan
    if math.isfinite(T):
        grid = np.unique(np.concatenate([
            np.linspace(0.0, T, 5000, endpoint=False),
            T * (1.0 - np.geomspace(1e-12, 1.0, 5000)),
        ]))
        grid = grid[(grid >= 0) & (grid < T)]
        horizons = [grid]
    else:
        tau = _time_scale(path)
        horizons = [np.concatenate([[0.0], tau * np.logspace(-6, 6, 10_000)])]
        s_inf = _asymptotic_speed(path)
        if not (path.right.u - tol <= s_inf <= path.left.u + tol):
            # the crossing exists; keep extending geometrically until it is found
            for k in range(1, 40):
                horizons.append(tau * np.logspace(6 * k, 6 * (k + 1), 1000))
    prev = 0.0
    for grid in horizons:
        bl, br_ = _violations(path, grid, tol)
        bad = bl | br_
        if np.any(bad):
            i = int(np.argmax(bad))
            if i == 0 and grid[0] == 0.0:
                side = "left" if bl[0] else "right"
                return EntropyInterval(0.0, (Witness(0.0, side),), "numeric")
            lo = grid[i - 1] if i > 0 else prev
            t = _refine(path, float(lo), float(grid[i]), tol)
            l2, r2 = _violations(path, t, tol)
            side = "left" if l2 else "right"
            return EntropyInterval(t, (Witness(t, side),), "numeric")
        prev = float(grid[-1])
    if math.isfinite(T):
        return EntropyInterval(T, (), "numeric")
    return EntropyInterval(math.inf, (), "numeric")


def _closed_form_item(path: DeltaShockPath) -> tuple[str, float, str] | None:
    """Closed-form entropy verdict: (item, valid_until, failing side) or ``None``."""
    br = path.brackets
    u1, u2 = path.left.u, path.right.u
    rho1, rho2 = path.left.rho, path.right.rho
    a, b, r0 = path.a, path.b, path.rho0
    du, drho = br.d_u, br.d_rho
    if r0 == 0.0:
        if drho == 0.0:
            return ("i", math.inf, "") if du < 0 else None
        if drho > 0 and du <= 0 and a >= (rho1 * du) ** 2:
            return "ii", math.inf, ""
        if drho < 0 and du <= 0 and a >= (rho2 * du) ** 2:
            return "iii", math.inf, ""
        return None
    if not (u2 <= path.u0 <= u1):
        return None
    if drho == 0.0:
        return "iv", math.inf, ""
    if a <= 0 or b < -math.sqrt(a):
        return None
    rk = rho1 if drho > 0 else rho2
    lim = (rk * du) ** 2
    if a >= lim:
        return ("v" if drho > 0 else "vi"), math.inf, ""
    t_star = -r0 * b / a - (r0 * rk * du / a) * math.sqrt((b * b - a) / (lim - a))
    return ("vii", t_star, "right") if drho > 0 else ("viii", t_star, "left")


def entropy_interval(law: GasLaw, path: DeltaShockPath, data: RiemannData | None = None) -> EntropyInterval:
    """Time up to which ``u1 >= x'(t) >= u2`` holds along the path.

    Closed-form verdicts are used where available; otherwise sign changes of
    the two margins are located on a grid and refined by bisection.
    """
    item = _closed_form_item(path)
    if item is not None:
        name, until, side = item
        wit = (Witness(until, side),) if side else ()
        return EntropyInterval(until, wit, f"closed_form:{name}")
    tol = _entropy_tol(path)
    if path.rho0 == 0.0:
        left, right = _margins(path, 1.0)
        if left >= -tol and right >= -tol:
            return EntropyInterval(math.inf, (), "direct")
        return EntropyInterval(0.0, (Witness(0.0, "left" if left < -tol else "right"),), "direct")
    if not (path.right.u <= path.u0 <= path.left.u):
        side = "left" if path.u0 > path.left.u else "right"
        return EntropyInterval(0.0, (Witness(0.0, side),), "direct")
    return _numeric_interval(path)


def convexity(path: DeltaShockPath, data: RiemannData | None = None) -> str:
    """``"convex"``, ``"concave"`` or ``"straight"`` shape of the front.

    Raises
    ------
    ValueError
        For a point mass whose velocity lies outside ``[u2, u1]``.
    """
    if path.rho0 == 0.0:
        return "straight"
    if not (path.right.u <= path.u0 <= path.left.u):
        raise ValueError("convexity requires u2 <= u0 <= u1")
    if path.brackets.d_rho == 0.0:
        s = path.mean_velocity - path.u0
    else:
        s = (path.a - path.b * path.b) / path.brackets.d_rho
    if s > 0:
        return "convex"
    if s < 0:
        return "concave"
    return "straight"
