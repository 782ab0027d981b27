"""Independent numerical checks of constructed solutions.

* weak-formulation residuals against polynomial bump test functions,
* central-difference residuals of the weight ODEs along a delta front,
* strict orderings between phase-plane curves,
* a grid scan of the over-compressing entropy inequalities,
* a brute-force scan for the classical middle state.
"""
from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
from numpy.polynomial.legendre import leggauss

from .curves import (CurveId, eval_curve, m_lower_bound, rarefaction_integral,
                     shock_magnitude)
from .delta import VANISHES, DeltaShockPath
from .gas import GasLaw, GasState, RiemannData, pressure_jump
from .measure import DeltaShock, MeasureSolution, SolutionPlan

# ---------------------------------------------------------------------------
# weak formulation
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TestBump:
    """``phi = (1 - X^2)_+^k (1 - T^2)_+^k`` with ``X = (x - x0)/rx``, ``T = (t - t0)/rt``."""

    __test__ = False

    center: tuple[float, float]
    radii: tuple[float, float]
    degree: int = 3

    def __post_init__(self):
        if self.degree < 2:
            raise ValueError("bump degree must be >= 2")
        if min(self.radii) <= 0:
            raise ValueError("bump radii must be positive")

    @property
    def x_support(self) -> tuple[float, float]:
        return self.center[0] - self.radii[0], self.center[0] + self.radii[0]

    @property
    def t_support(self) -> tuple[float, float]:
        return self.center[1] - self.radii[1], self.center[1] + self.radii[1]

    def _factors(self, s):
        q = np.clip(1.0 - s * s, 0.0, None)
        k = self.degree
        return q ** k, -2.0 * k * s * q ** (k - 1)

    def phi(self, x, t):
        px, _ = self._factors((np.asarray(x, dtype=float) - self.center[0]) / self.radii[0])
        pt, _ = self._factors((np.asarray(t, dtype=float) - self.center[1]) / self.radii[1])
        return px * pt

    def derivatives(self, x, t):
        """Return ``(phi, phi_x, phi_t)``."""
        px, dpx = self._factors((np.asarray(x, dtype=float) - self.center[0]) / self.radii[0])
        pt, dpt = self._factors((np.asarray(t, dtype=float) - self.center[1]) / self.radii[1])
        return px * pt, dpx * pt / self.radii[0], px * dpt / self.radii[1]


@dataclass(frozen=True)
class ResidualReport:
    mass_residual: float
    momentum_residual: float
    scale: float
    quadrature_order: int

    @property
    def relative(self) -> float:
        """Largest residual divided by ``scale``."""
        if self.scale == 0:
            return 0.0
        return max(abs(self.mass_residual), abs(self.momentum_residual)) / self.scale


class _ScaledWeight:
    """Path proxy multiplying the mass weight by ``factor``; everything else delegates."""

    def __init__(self, path, factor: float):
        self._path = path
        self._factor = factor

    def __getattr__(self, name):
        return getattr(self._path, name)

    def w_rho(self, t):
        return self._factor * np.asarray(self._path.w_rho(t))


def perturb_weights(sol: MeasureSolution, factor: float) -> MeasureSolution:
    """Copy of ``sol`` whose atoms carry ``factor`` times their mass (a detector test)."""
    def redo(plan: SolutionPlan | None):
        if plan is None:
            return None
        pieces = tuple(DeltaShock(_ScaledWeight(p.path, factor)) if isinstance(p, DeltaShock) else p
                       for p in plan.pieces)
        return SolutionPlan(plan.law, pieces, plan.validity, plan.origin, plan.closed_end,
                            redo(plan.continuation), plan.pattern)
    return MeasureSolution(sol.law, redo(sol.plan), sol.kind, sol.region, sol.pick, sol.entropic,
                           sol.notes, sol.data)


def _front_crossings(stage: SolutionPlan, t_lo: float, t_hi: float, xs) -> list[float]:
    """Times in ``(t_lo, t_hi)`` where a wave edge of ``stage`` passes one of the abscissae ``xs``."""
    out = []
    x0, s0 = stage.origin
    for w in stage.waves:
        if isinstance(w, DeltaShock):
            p = w.path
            T = p.lifespan
            taus = np.linspace(t_lo - s0, t_hi - s0, 257)
            if math.isfinite(T) and t_hi - s0 >= T * (1 - 1e-15):
                # cluster toward the square-root end
                sig = np.linspace(0.0, 1.0, 257)
                taus = np.unique(np.concatenate([taus, (t_hi - s0) - (t_hi - t_lo) * sig ** 2]))
            taus = taus[(taus > t_lo - s0) & (taus < t_hi - s0)]
            if taus.size < 2:
                continue
            xv = x0 + np.asarray(p.x(taus))
            for xc in xs:
                f = xv - xc
                idx = np.nonzero(np.sign(f[:-1]) * np.sign(f[1:]) < 0)[0]
                for i in idx:
                    lo, hi = taus[i], taus[i + 1]
                    flo = f[i]
                    for _ in range(100):
                        mid = 0.5 * (lo + hi)
                        fm = x0 + float(p.x(mid)) - xc
                        if (fm < 0) == (flo < 0):
                            lo, flo = mid, fm
                        else:
                            hi = mid
                    out.append(s0 + 0.5 * (lo + hi))
        else:
            lo_e, hi_e = w.edges(1.0)
            for speed in {float(lo_e), float(hi_e)}:
                if speed == 0.0:
                    continue
                for xc in xs:
                    tc = s0 + (xc - x0) / speed
                    if t_lo < tc < t_hi:
                        out.append(tc)
    return out


class _Acc:
    def __init__(self, names):
        self.val = dict.fromkeys(names, 0.0)
        self.abs = dict.fromkeys(names, 0.0)

    def add(self, name, values, weights):
        self.val[name] += float(np.dot(values, weights))
        self.abs[name] += float(np.dot(np.abs(values), np.abs(weights)))


_TERMS = ("rho_t", "m_x", "m_t", "n_x", "p_x", "w_t", "wm_x", "wm_t", "wn_x", "init_rho", "init_m")


def weak_residual(sol: MeasureSolution, bump: TestBump, order: int = 32) -> ResidualReport:
    """Residuals of the weak mass and momentum balances tested against ``bump``.

    Space-time is split into cells whose edges are the stage boundaries, kinks
    of the fronts and the times at which fronts or fan edges cross the bump's
    spatial support. Each cell is integrated by tensor Gauss-Legendre with
    ``order`` points per axis; cells ending at a weight-extinction time are
    integrated in the variable ``sigma`` with ``t = t_end - L sigma^2``.

    Raises
    ------
    ValueError
        If the bump reaches beyond the solution's validity, e.g. a blow-up time.
    """
    law = sol.law
    stages = sol.stages()
    xa, xb = bump.x_support
    ta, tb = bump.t_support
    ta = max(ta, 0.0)
    if tb <= 0:
        raise ValueError("bump support lies in t < 0")
    last = stages[-1]
    end = last.validity[1]
    if tb > end or (tb == end and not last.closed_end):
        raise ValueError(f"bump reaches t={tb!r} but the solution ends at t={end!r} "
                         f"({'blow-up' if not last.closed_end else 'end of validity'})")

    breaks = {ta, tb}
    singular_ends = set()
    for st in stages:
        s0, s1 = st.validity
        if ta < s0 < tb:
            breaks.add(s0)
        if ta < s1 < tb:
            breaks.add(s1)
        for d in st.deltas:
            for kk in getattr(d.path, "kinks", ()):
                if ta < s0 + kk < tb:
                    breaks.add(s0 + kk)
            if d.path.extinction.kind == VANISHES and math.isfinite(s1):
                singular_ends.add(s1)
        lo, hi = max(ta, s0), min(tb, s1)
        if lo < hi:
            breaks.update(_front_crossings(st, lo, hi, (xa, xb)))
    cuts = sorted(breaks)

    nodes, weights = leggauss(order)
    acc = _Acc(_TERMS)

    def slice_at(t: float, wt: float):
        st = sol.stage_at(t)
        xs = [xa, xb]
        for lo, hi in st.edges_at(t):
            for e in (lo, hi):
                if xa < e < xb:
                    xs.append(e)
        xs = sorted(set(xs))
        xn, xw = [], []
        for l, r in zip(xs[:-1], xs[1:]):
            if r > l:
                xn.append(0.5 * (r - l) * nodes + 0.5 * (r + l))
                xw.append(0.5 * (r - l) * weights)
        if xn:
            x = np.concatenate(xn)
            w = np.concatenate(xw) * wt
            rho, u = st.sample(x, t)
            _, phx, pht = bump.derivatives(x, t)
            m = rho * u
            acc.add("rho_t", rho * pht, w)
            acc.add("m_x", m * phx, w)
            acc.add("m_t", m * pht, w)
            acc.add("n_x", m * u * phx, w)
            acc.add("p_x", rho ** law.gamma * phx, w)
        tau = t - st.origin[1]
        for d in st.deltas:
            p = d.path
            X = st.origin[0] + float(p.x(tau))
            if not xa < X < xb:
                continue
            _, phx, pht = bump.derivatives(X, t)
            wr, wm, wn = float(p.w_rho(tau)), float(p.w_m(tau)), float(p.w_n(tau))
            acc.add("w_t", np.array([wr * pht]), np.array([wt]))
            acc.add("wm_x", np.array([wm * phx]), np.array([wt]))
            acc.add("wm_t", np.array([wm * pht]), np.array([wt]))
            acc.add("wn_x", np.array([wn * phx]), np.array([wt]))

    for tl, tr in zip(cuts[:-1], cuts[1:]):
        if tr <= tl:
            continue
        L = tr - tl
        if tr in singular_ends:
            sig = 0.5 * nodes + 0.5
            ts = tr - L * sig * sig
            wts = 0.5 * weights * 2.0 * L * sig
        else:
            ts = 0.5 * L * nodes + 0.5 * (tl + tr)
            wts = 0.5 * L * weights
        for t, wt in zip(ts, wts):
            slice_at(float(t), float(wt))

    if ta == 0.0:
        st = stages[0]
        for l, r in ((xa, min(xb, 0.0)), (max(xa, 0.0), xb)):
            if r > l:
                x = 0.5 * (r - l) * nodes + 0.5 * (r + l)
                w = 0.5 * (r - l) * weights
                rho, u = st.sample(x, 0.0) if l >= 0 else (np.full_like(x, st.left_state.rho),
                                                             np.full_like(x, st.left_state.u))
                ph = bump.phi(x, 0.0)
                acc.add("init_rho", rho * ph, w)
                acc.add("init_m", rho * u * ph, w)
        if xa < 0.0 < xb and sol.data is not None and sol.data.rho0 > 0:
            ph0 = float(bump.phi(0.0, 0.0))
            acc.add("init_rho", np.array([sol.data.rho0 * ph0]), np.array([1.0]))
            acc.add("init_m", np.array([sol.data.rho0 * sol.data.u0 * ph0]), np.array([1.0]))

    v = acc.val
    mass = v["rho_t"] + v["m_x"] + v["w_t"] + v["wm_x"] + v["init_rho"]
    mom = v["m_t"] + v["n_x"] + v["p_x"] + v["wm_t"] + v["wn_x"] + v["init_m"]
    scale = max(acc.abs.values())
    return ResidualReport(mass, mom, scale, order)


# ---------------------------------------------------------------------------
# generalized Rankine-Hugoniot residuals
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class GRHReport:
    """Largest absolute and relative residuals of the two weight ODEs."""

    mass: float
    momentum: float
    mass_relative: float
    momentum_relative: float
    step: float

    @property
    def relative(self) -> float:
        return max(self.mass_relative, self.momentum_relative)


def _grh_window(path) -> float:
    if path.rho0 == 0.0:
        return 1.0
    s = max(math.sqrt(abs(path.a)), abs(path.b), path.left.rho * abs(path.brackets.d_u))
    tau = path.rho0 / s if s > 0 else 1.0
    T = 10.0 * tau
    if math.isfinite(path.lifespan):
        T = min(T, 0.9 * path.lifespan)
    return T


def grh_residual(path: DeltaShockPath, data: RiemannData | None = None, n: int = 1000,
                 h: float | None = None) -> GRHReport:
    """Central-difference residuals of ``w' = [rho] x' - [rho u]`` and ``w_m' = [rho u] x' - [rho u^2 + p]``.

    The grid has ``n`` interior points of ``[0, T]``, where ``T`` is a few time
    scales of the path, cut to 90% of a finite lifespan. Points within ``2h``
    of a kink are skipped. The default step is ``2**round(log2(1e-6 T))``.
    """
    br = path.brackets
    T = _grh_window(path)
    if h is None:
        h = 2.0 ** round(math.log2(1e-6 * T))
    t = np.linspace(0.0, T, n + 2)[1:-1]
    t = t[t > 2 * h]
    for kk in getattr(path, "kinks", ()):
        t = t[np.abs(t - kk) > 2 * h]
    if t.size == 0:
        t = np.array([T / 2])
    xp = np.asarray(path.xprime(t), dtype=float)
    dw = (np.asarray(path.w_rho(t + h)) - np.asarray(path.w_rho(t - h))) / (2 * h)
    dwm = (np.asarray(path.w_m(t + h)) - np.asarray(path.w_m(t - h))) / (2 * h)
    r_mass = dw - (br.d_rho * xp - br.d_m)
    r_mom = dwm - (br.d_m * xp - br.d_flux)
    s_mass = max(float(np.max(np.abs(br.d_rho * xp) + abs(br.d_m))), float(np.max(np.abs(dw))))
    s_mom = max(float(np.max(np.abs(br.d_m * xp) + abs(br.d_flux))), float(np.max(np.abs(dwm))))
    m1, m2 = float(np.max(np.abs(r_mass))), float(np.max(np.abs(r_mom)))
    return GRHReport(m1, m2, m1 / s_mass if s_mass > 0 else m1, m2 / s_mom if s_mom > 0 else m2, h)


# ---------------------------------------------------------------------------
# curve orderings
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CheckResult:
    """Outcome of a strict inequality sampled on a density grid.

    ``min_margin`` is the smallest margin over interior points (positive when
    the inequality holds); ``boundary`` counts tangency points that were
    reported but not judged.
    """

    name: str
    passed: bool
    min_margin: float
    n_points: int
    boundary: int


def _order_margins(law: GasLaw, U1: GasState):
    g = law.gamma
    r1 = U1.rho
    lo_m = m_lower_bound(law, r1)

    def h_margin(r):  # S22 - R2 > 0 on rho > rho1
        return shock_magnitude(law, r, r1) - rarefaction_integral(law, r, r1)

    def k_margin(r):  # -K > 0 on [lo_m, rho1)
        K = g * r ** g * (r - r1) ** 2 + (r + r1) ** 2 * pressure_jump(law, r, r1)
        return -K

    def d1s1(r):
        return eval_curve(law, CurveId.S1, U1, r) - eval_curve(law, CurveId.D1, U1, r)

    def d2s2(r):
        return eval_curve(law, CurveId.S2, U1, r) - eval_curve(law, CurveId.D2, U1, r)

    def m2d2(r):
        return eval_curve(law, CurveId.M2, U1, r) - eval_curve(law, CurveId.D2, U1, r)

    def r1s11(r):
        return eval_curve(law, CurveId.S11, U1, r) - eval_curve(law, CurveId.R1, U1, r)

    # name -> (margin, lo, hi, lo_closed, hi_closed, tangent endpoints)
    return {
        "H_R2_left_of_S22": (h_margin, r1, math.inf, False, True, (r1,)),
        "K_negative": (k_margin, lo_m, r1, True, False, (r1,)),
        "D1_below_S1": (d1s1, r1, math.inf, False, True, (r1,)),
        "D2_above_S2": (d2s2, 0.0, r1, False, False, (r1,)),
        "M2_below_D2": (m2d2, lo_m, r1, False, False, (lo_m, r1)),
        "R1_left_of_S11": (r1s11, 0.0, r1, False, False, (r1,)),
    }


def curve_order_checks(law: GasLaw, U1: GasState, grid=None, n: int = 10_000) -> dict[str, CheckResult]:
    """Sample every curve-ordering inequality through ``U1``.

    With ``grid=None`` each inequality gets its own ``n``-point grid over its
    domain. A user grid is filtered to each domain; points at a tangency
    endpoint are counted as boundary rather than judged.
    """
    out = {}
    for name, (f, lo, hi, lo_closed, hi_closed, tangent) in _order_margins(law, U1).items():
        if grid is None:
            if math.isinf(hi):
                g = lo * np.linspace(1.0, 1000.0, n + 1)[1:]
            elif lo == 0.0:
                g = hi * np.linspace(1e-3, 1.0, n + 1)[:-1]
            else:
                g = np.linspace(lo, hi, n + 1 if lo_closed else n + 2)
                g = g[:-1] if lo_closed else g[1:-1]
        else:
            g = np.asarray(grid, dtype=float)
        ok_lo = g >= lo if lo_closed else g > lo
        ok_hi = g <= hi if hi_closed else g < hi
        tan_mask = np.isin(g, np.asarray(tangent))
        inside = ok_lo & ok_hi & ~tan_mask & (g > 0)
        boundary = int(np.count_nonzero(tan_mask))
        pts = g[inside]
        if pts.size == 0:
            out[name] = CheckResult(name, True, math.inf, 0, boundary)
            continue
        m = np.asarray(f(pts), dtype=float)
        mn = float(np.min(m))
        out[name] = CheckResult(name, bool(np.all(m > 0)), mn, int(pts.size), boundary)
    return out


# ---------------------------------------------------------------------------
# entropy scan
# ---------------------------------------------------------------------------


def entropy_scan(sol: MeasureSolution, n: int = 10_000) -> float | None:
    """First time at which ``u_l >= x'(t) >= u_r`` fails along the first atom, or ``None``.

    The flanking states are read from the plan pieces on either side of the
    atom. The inequalities are evaluated on a grid mixing uniform and
    geometric spacing; the first failure is refined by bisection.
    """
    stage = next((s for s in sol.stages() if s.deltas), None)
    if stage is None:
        raise ValueError("solution carries no atom")
    i = next(k for k, p in enumerate(stage.pieces) if isinstance(p, DeltaShock))
    path = stage.pieces[i].path
    ul, ur = stage.pieces[i - 1].state.u, stage.pieces[i + 1].state.u
    tol = 1e-12 * max(1.0, abs(ul), abs(ur))

    def bad(t):
        xp = np.asarray(path.xprime(t), dtype=float)
        return ~((ul - xp >= -tol) & (xp - ur >= -tol))

    T = path.lifespan
    if math.isfinite(T):
        j = np.arange(n) / n
        grid = np.unique(np.concatenate([T * j, T * (1.0 - (1.0 - j) ** 3)]))
    else:
        s = max(abs(path.a) ** 0.5, abs(path.b), path.left.rho * abs(path.brackets.d_u), 1e-300)
        tau = path.rho0 / s if path.rho0 > 0 else 1.0
        grid = np.concatenate([np.linspace(0.0, 10 * tau, n), tau * np.geomspace(1e-9, 1e12, n)])
        grid = np.unique(grid)
    flags = bad(grid)
    if not flags.any():
        return None
    i = int(np.argmax(flags))
    if i == 0:
        return 0.0
    lo, hi = float(grid[i - 1]), float(grid[i])
    while hi - lo > 1e-13 * max(1.0, hi):
        mid = 0.5 * (lo + hi)
        if bad(mid):
            hi = mid
        else:
            lo = mid
    return hi


# ---------------------------------------------------------------------------
# classical oracle
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class OracleResult:
    middle: GasState
    cell: float


def _forward(law, U1, r):
    r = np.asarray(r, dtype=float)
    out = np.empty_like(r)
    hi = r > U1.rho
    if hi.any():
        out[hi] = eval_curve(law, CurveId.S1, U1, r[hi])
    if (~hi).any():
        out[~hi] = eval_curve(law, CurveId.R1, U1, r[~hi])
    return out


def _backward(law, U2, r):
    r = np.asarray(r, dtype=float)
    out = np.empty_like(r)
    hi = r > U2.rho
    if hi.any():
        out[hi] = eval_curve(law, CurveId.S22, U2, r[hi])
    if (~hi).any():
        out[~hi] = eval_curve(law, CurveId.R2STAR, U2, r[~hi])
    return out


def classical_oracle(law: GasLaw, U1: GasState, U2: GasState, grid_size: int = 100_000) -> OracleResult:
    """Middle state by a dense scan of the mismatch between the 1-wave curve of ``U1``
    and the backward 2-wave curve of ``U2``."""
    if U1 == U2:
        return OracleResult(U1, 0.0)
    hi = 2.0 * max(U1.rho, U2.rho)
    while _forward(law, U1, np.array([hi]))[0] > _backward(law, U2, np.array([hi]))[0]:
        hi *= 2.0
    grid = np.linspace(0.0, hi, grid_size + 1)[1:]
    f, b = _forward(law, U1, grid), _backward(law, U2, grid)
    j = int(np.argmin(np.abs(f - b)))
    return OracleResult(GasState(0.5 * (f[j] + b[j]), float(grid[j])), hi / grid_size)


# ---------------------------------------------------------------------------
# batch verification
# ---------------------------------------------------------------------------


def thread_cap(default: int | None = None) -> int:
    """Worker count from ``DELTA_RIEMANN_THREADS`` (at least 1)."""
    raw = os.environ.get("DELTA_RIEMANN_THREADS")
    if raw:
        try:
            return max(1, int(raw))
        except ValueError:
            pass
    return default or min(4, os.cpu_count() or 1)


def parallel_map(fn, items, workers: int | None = None) -> list:
    """Ordered ``map`` over a thread pool capped by :func:`thread_cap`."""
    items = list(items)
    workers = workers or thread_cap()
    if workers == 1 or len(items) < 2:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=workers) as ex:
        return list(ex.map(fn, items))


# ---------------------------------------------------------------------------
# random configurations and bumps
# ---------------------------------------------------------------------------

REGION_BOUNDS = {
    # region -> (density side, lower curve, upper curve); None means unbounded
    "IV0": (None, None, None),
    "IV1": ("above", CurveId.D1, CurveId.S1),
    "III": ("above", CurveId.S1, CurveId.R2),
    "IV2": ("below", CurveId.D2, CurveId.S2),
    "II": ("below", CurveId.S2, CurveId.R1),
    "I": (None, None, None),
    "V": (None, None, None),
}


def random_pair(law: GasLaw, rng: np.random.Generator, region: str,
                U1: GasState | None = None) -> tuple[GasState, GasState]:
    """Random ``(U1, U2)`` with ``U2`` strictly inside ``region`` relative to ``U1``.

    Velocities are drawn between the bounding curves at a random ``rho2`` with
    a 2% margin from either boundary.
    """
    from .classify import vacuum_threshold

    if U1 is None:
        U1 = GasState(float(rng.uniform(-1, 1)), float(rng.uniform(0.5, 2.0)))
    frac = float(rng.uniform(0.02, 0.98))
    c1 = math.sqrt(law.gamma * U1.rho ** (law.gamma - 1))
    while True:
        above = rng.random() < 0.5
        rho2 = U1.rho * (float(rng.uniform(1.1, 4.0)) if above else float(rng.uniform(0.25, 0.9)))
        side, lo_id, hi_id = REGION_BOUNDS[region]
        if side == "above":
            rho2 = U1.rho * float(rng.uniform(1.1, 4.0))
        elif side == "below":
            rho2 = U1.rho * float(rng.uniform(0.25, 0.9))
        U2p = GasState(0.0, rho2)
        vac = vacuum_threshold(law, U1, U2p)
        if region == "V":
            return U1, GasState(U1.u + vac * (1.0 + frac), rho2)
        if region == "IV0":
            cid = CurveId.D1 if rho2 > U1.rho else CurveId.D2
            top = eval_curve(law, cid, U1, rho2)
            return U1, GasState(top - (0.02 + 2.0 * frac) * c1, rho2)
        if region == "I":
            if rho2 > U1.rho:
                lo, hi = eval_curve(law, CurveId.R2, U1, rho2), eval_curve(law, CurveId.S22, U1, rho2)
            else:
                lo, hi = eval_curve(law, CurveId.R1, U1, rho2), eval_curve(law, CurveId.S11, U1, rho2)
            hi = min(hi, U1.u + vac)
            if hi <= lo:
                continue
        else:
            lo, hi = eval_curve(law, lo_id, U1, rho2), eval_curve(law, hi_id, U1, rho2)
        return U1, GasState(lo + frac * (hi - lo), rho2)


def random_bumps(sol: MeasureSolution, rng: np.random.Generator, count: int,
                 degree: int = 3) -> list[TestBump]:
    """Bumps inside single stages of ``sol``, half of them centered on an atom.

    Bumps never contain a stage junction point, where an expiring atom's
    leftover momentum is not balanced.
    """
    stages = sol.stages()
    out = []
    for j in range(count):
        st = stages[j % len(stages)]
        s0, s1 = st.validity
        span = (s1 - s0) if math.isfinite(s1) else 2.0
        t0 = s0 + span * float(rng.uniform(0.3, 0.7))
        rt = min(t0 - s0, (s0 + span) - t0) * float(rng.uniform(0.5, 0.95))
        if s0 == 0.0 and j % 3 == 2:
            rt = t0 * float(rng.uniform(1.05, 1.5))  # reach t = 0
            if math.isfinite(s1):
                rt = min(rt, 0.95 * (s1 - t0))
                if rt < t0:
                    rt = t0 * 0.9
        edges = [e for pair in st.edges_at(t0) for e in pair]
        spread = max(1e-3, (max(edges) - min(edges)) if edges else 1.0)
        if st.deltas and j % 2 == 0:
            tau = t0 - st.origin[1]
            x0 = st.origin[0] + float(st.deltas[0].path.x(tau))
        else:
            x0 = float(rng.uniform(min(edges), max(edges))) if edges else st.origin[0]
        rx = spread * float(rng.uniform(0.4, 1.2)) + 0.2 * span
        out.append(TestBump((x0, t0), (rx, rt), degree))
    return out
