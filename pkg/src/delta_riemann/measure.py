"""Measure-valued Riemann solutions: single delta shocks, delta+rarefaction
composites, singular data with continuation, and space-time sampling."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .classical import ClassicalSolution, VacuumRange, fan_state, solve_classical
from .classify import EXTINCTION_ROWS, Region, RegionLabel, classify
from .curves import CurveId, eval_curve, m_lower_bound
from .delta import VANISHES, DeltaShockPath, _speed_pair, construct, entropy_interval
from .errors import NoDeltaShock, NoMeasureSolution
from .gas import GasLaw, GasState, RiemannData, sound_speed

# ---------------------------------------------------------------------------
# pieces
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ConstantState:
    state: GasState


@dataclass(frozen=True)
class RarefactionFan:
    """Centered fan of ``family`` from ``left`` to ``right``; one side may be vacuum."""

    family: int
    left: GasState
    right: GasState
    head: float
    tail: float

    @classmethod
    def build(cls, law: GasLaw, family: int, left: GasState, right: GasState) -> "RarefactionFan":
        def c(s):
            return sound_speed(law, s.rho) if s.rho > 0 else 0.0
        if family == 1:
            return cls(1, left, right, left.u - c(left), right.u - c(right))
        return cls(2, left, right, left.u + c(left), right.u + c(right))

    def edges(self, tau):
        return self.head * tau, self.tail * tau

    def interior(self, law: GasLaw, xi):
        from .classical import ClassicalWave
        wave = ClassicalWave(self.family, "rarefaction", self.left, self.right, fan_span=(self.head, self.tail))
        return fan_state(law, wave, xi)


@dataclass(frozen=True)
class ClassicalShock:
    family: int
    left: GasState
    right: GasState
    speed: float

    def edges(self, tau):
        return self.speed * tau, self.speed * tau


@dataclass(frozen=True)
class DeltaShock:
    path: DeltaShockPath

    @property
    def left(self) -> GasState:
        return self.path.left

    @property
    def right(self) -> GasState:
        return self.path.right

    def edges(self, tau):
        x = self.path.x(tau)
        return x, x


@dataclass(frozen=True)
class VacuumBand:
    xi_lo: float
    xi_hi: float

    @property
    def right(self) -> GasState:
        return GasState(self.xi_hi, 0.0)

    def edges(self, tau):
        return self.xi_lo * tau, self.xi_hi * tau


WAVES = (RarefactionFan, ClassicalShock, DeltaShock, VacuumBand)


@dataclass(frozen=True)
class SolutionPlan:
    """One stage of a solution: pieces ordered left to right, valid on a time interval.

    The stage's waves emanate from ``origin = (x0, t0)``; ``validity`` is
    ``(t0, t_end)`` and includes ``t_end`` when ``closed_end``. A follow-on
    stage, if any, starts at ``t_end``.
    """

    law: GasLaw
    pieces: tuple
    validity: tuple[float, float]
    origin: tuple[float, float] = (0.0, 0.0)
    closed_end: bool = False
    continuation: "SolutionPlan | None" = None
    pattern: str = ""

    @property
    def waves(self):
        return tuple(p for p in self.pieces if isinstance(p, WAVES))

    @property
    def deltas(self):
        return tuple(p for p in self.pieces if isinstance(p, DeltaShock))

    @property
    def left_state(self) -> GasState:
        return self.pieces[0].state

    @property
    def right_state(self) -> GasState:
        return self.pieces[-1].state

    def contains(self, t: float) -> bool:
        t0, t1 = self.validity
        return t0 <= t < t1 or (self.closed_end and t == t1)

    def edges_at(self, t: float) -> list[tuple[float, float]]:
        """Absolute x-edges of every wave at time ``t``."""
        tau = t - self.origin[1]
        x0 = self.origin[0]
        out = []
        for w in self.waves:
            lo, hi = w.edges(tau)
            out.append((x0 + float(lo), x0 + float(hi)))
        return out

    def sample(self, x, t: float):
        """Absolutely continuous part ``(rho, u)`` at positions ``x`` and time ``t``.

        A point exactly on a jump takes the state to its right.
        """
        x = np.asarray(x, dtype=float)
        tau = t - self.origin[1]
        xr = x - self.origin[0]
        first = self.pieces[0].state
        rho = np.full(x.shape, first.rho)
        u = np.full(x.shape, first.u)
        for i, p in enumerate(self.pieces):
            if not isinstance(p, WAVES):
                continue
            lo, hi = p.edges(tau)
            if isinstance(p, RarefactionFan):
                after = xr > hi
                nxt = p.right
            elif isinstance(p, VacuumBand):
                after = xr > lo
                nxt = p.right
            else:
                after = xr >= hi
                nxt = p.right
            rho = np.where(after, nxt.rho, rho)
            u = np.where(after, nxt.u, u)
            if isinstance(p, RarefactionFan) and tau > 0:
                inside = (xr > lo) & (xr <= hi)
                if np.any(inside):
                    fr, fu = p.interior(self.law, xr[inside] / tau)
                    rho[inside] = fr
                    u[inside] = fu
            elif isinstance(p, VacuumBand) and tau > 0:
                inside = (xr > lo) & (xr <= hi)
                rho = np.where(inside, 0.0, rho)
                u = np.where(inside, xr / tau, u)
        return rho, u


# ---------------------------------------------------------------------------
# solutions
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class IntermediatePick:
    """Intermediate state of a composite plan and the interval it was picked from.

    ``components`` lists every feasible density interval; ``admissible_rho_interval``
    spans them.
    """

    state: GasState
    admissible_rho_interval: tuple[float, float]
    selection_parameter: float
    components: tuple = ()


@dataclass(frozen=True)
class Atom:
    x: float
    w: float
    v: float
    w_m: float


@dataclass(frozen=True)
class SampledProfile:
    time: float
    grid: np.ndarray
    rho: np.ndarray
    u: np.ndarray
    atoms: tuple


@dataclass(frozen=True)
class MeasureSolution:
    """A measure solution made of one or more consecutive stages.

    ``kind`` is one of ``"delta"``, ``"delta+R2"``, ``"R1+delta"``,
    ``"classical"`` or ``"singular"``.
    """

    law: GasLaw
    plan: SolutionPlan
    kind: str
    region: RegionLabel | None = None
    pick: IntermediatePick | None = None
    entropic: bool = True
    notes: tuple = ()
    data: RiemannData | None = None

    def stages(self) -> list[SolutionPlan]:
        out, p = [], self.plan
        while p is not None:
            out.append(p)
            p = p.continuation
        return out

    @property
    def horizon(self) -> float:
        return self.stages()[-1].validity[1]

    @property
    def delta_paths(self) -> list[DeltaShockPath]:
        return [d.path for s in self.stages() for d in s.deltas]

    def stage_at(self, t: float) -> SolutionPlan:
        for s in self.stages():
            if s.contains(t):
                return s
        raise ValueError(f"t={t!r} lies outside the solution's validity")

    def state(self, x, t: float):
        return self.stage_at(t).sample(x, t)

    def atoms(self, t: float) -> list[Atom]:
        s = self.stage_at(t)
        tau = t - s.origin[1]
        out = []
        for d in s.deltas:
            p = d.path
            out.append(Atom(s.origin[0] + float(p.x(tau)), float(p.w_rho(tau)),
                            float(p.xprime(tau)), float(p.w_m(tau))))
        return out


def _plan_from_classical(law: GasLaw, sol: ClassicalSolution, origin=(0.0, 0.0),
                         end=math.inf) -> SolutionPlan:
    pieces: list = [ConstantState(sol.left)]
    for w in sol.waves:
        if w.kind == "shock":
            pieces.append(ClassicalShock(w.family, w.left_state, w.right_state, w.sigma))
        else:
            pieces.append(RarefactionFan(w.family, w.left_state, w.right_state, *w.fan_span))
        if w.family == 1 and isinstance(sol.middle, VacuumRange):
            pieces.append(VacuumBand(sol.middle.xi_lo, sol.middle.xi_hi))
        elif w.family == 1 and sol.middle is not None:
            pieces.append(ConstantState(sol.middle))
    pieces.append(ConstantState(sol.right))
    return SolutionPlan(law, tuple(pieces), (origin[1], end), origin, pattern=sol.pattern)


def classical_measure_solution(law: GasLaw, U1: GasState, U2: GasState) -> MeasureSolution:
    """Wrap the classical entropy solution as a measure solution without atoms."""
    sol = solve_classical(law, U1, U2)
    return MeasureSolution(law, _plan_from_classical(law, sol), "classical", classify(law, U1, U2),
                           data=RiemannData(U1, U2))


def _delta_plan(law: GasLaw, path: DeltaShockPath, origin=(0.0, 0.0)) -> SolutionPlan:
    t0 = origin[1]
    end = t0 + path.lifespan
    return SolutionPlan(law, (ConstantState(path.left), DeltaShock(path), ConstantState(path.right)),
                        (t0, end), origin, closed_end=path.closed_end, pattern="delta")


def single_delta_solution(law: GasLaw, data: RiemannData, region=None) -> MeasureSolution:
    """The single delta shock for ``data`` regardless of entropy."""
    path = construct(law, data)
    ent = entropy_interval(law, path, data)
    return MeasureSolution(law, _delta_plan(law, path), "delta" if data.rho0 == 0 else "singular", region,
                           entropic=ent.valid_until == math.inf, data=data)


# ---------------------------------------------------------------------------
# composite plans
# ---------------------------------------------------------------------------

_SCAN_POINTS = 400
_BISECT_TOL = 1e-12


def _velocity_scale(law, U1, U2):
    return max(1.0, abs(U1.u), abs(U2.u), sound_speed(law, U1.rho), sound_speed(law, U2.rho))


def _delta_margins(law: GasLaw, UL_u, UL_rho, UR_u, UR_rho, vscale):
    """Vectorized normalized discriminant and delta speed between left and right states."""
    g = law.gamma
    pL, pR = UL_rho ** g, UR_rho ** g
    d_rho = UR_rho - UL_rho
    d_u = UR_u - UL_u
    kin = UL_rho * UR_rho * d_u * d_u
    dp = pR - pL
    a = kin - d_rho * dp
    d_m = UR_rho * UR_u - UL_rho * UL_u
    d_flux = UR_rho * UR_u ** 2 + pR - (UL_rho * UL_u ** 2 + pL)
    ra = np.sqrt(np.maximum(a, 0.0))
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        plus_direct = (d_m + ra) / d_rho
        plus_stable = d_flux / (d_m - ra)
        s = np.where(d_m >= 0, plus_direct, plus_stable)
        s = np.where(d_rho == 0, 0.5 * (UL_u + UR_u), s)
    a_norm = a / np.maximum(np.maximum(kin, np.abs(d_rho * dp)), 1e-300)
    return a_norm, s


class _Composite:
    """Feasibility margins for the intermediate density of a composite plan.

    ``kind="delta+R2"``: the intermediate state lies on the inverse 2-rarefaction
    curve through ``U2`` and is reached from ``U1`` by a delta shock.
    ``kind="R1+delta"``: it lies on the 1-rarefaction curve through ``U1`` and
    connects to ``U2`` by a delta shock.
    """

    def __init__(self, law: GasLaw, U1: GasState, U2: GasState, kind: str):
        self.law, self.U1, self.U2, self.kind = law, U1, U2, kind
        self.rho_max = U2.rho if kind == "delta+R2" else U1.rho
        self.vscale = _velocity_scale(law, U1, U2)

    def state_u(self, rho):
        if self.kind == "delta+R2":
            return eval_curve(self.law, CurveId.R2STAR, self.U2, rho)
        return eval_curve(self.law, CurveId.R1, self.U1, rho)

    def margin(self, rho):
        """Smallest normalized margin; feasible iff ``>= 0``."""
        law, U1, U2 = self.law, self.U1, self.U2
        rho = np.atleast_1d(np.asarray(rho, dtype=float))
        um = np.asarray(self.state_u(rho), dtype=float)
        cm = np.sqrt(law.gamma * rho ** (law.gamma - 1.0))
        vs = self.vscale
        if self.kind == "delta+R2":
            a_n, s = _delta_margins(law, U1.u, U1.rho, um, rho, vs)
            parts = [(U1.u - s) / vs, (s - um) / vs, (um + cm - s) / vs]
        else:
            a_n, s = _delta_margins(law, um, rho, U2.u, U2.rho, vs)
            parts = [(um - s) / vs, (s - U2.u) / vs, (s - (um - cm)) / vs]
        m = np.where(a_n < 0, a_n, np.minimum.reduce(parts))
        return np.where(np.isfinite(m), m, -np.inf)

    def margin_scalar(self, rho: float) -> float:
        """Scalar twin of :meth:`margin` used inside bisection loops."""
        law, U1, U2 = self.law, self.U1, self.U2
        g = law.gamma
        Ub = U2 if self.kind == "delta+R2" else U1
        dk = math.expm1(law.k * math.log1p((rho - Ub.rho) / Ub.rho)) * Ub.rho ** law.k
        um = Ub.u + law.rarefaction_coeff * dk if self.kind == "delta+R2" else Ub.u - law.rarefaction_coeff * dk
        cm = math.sqrt(g * rho ** (g - 1.0))
        if self.kind == "delta+R2":
            lu, lr, ru, rr = U1.u, U1.rho, um, rho
        else:
            lu, lr, ru, rr = um, rho, U2.u, U2.rho
        pl, pr = lr ** g, rr ** g
        d_rho, d_u = rr - lr, ru - lu
        kin = lr * rr * d_u * d_u
        a = kin - d_rho * (pr - pl)
        if a < 0:
            return a / max(kin, abs(d_rho * (pr - pl)))
        d_m = rr * ru - lr * lu
        d_flux = rr * ru * ru + pr - (lr * lu * lu + pl)
        ra = math.sqrt(a)
        if d_rho == 0:
            s = 0.5 * (lu + ru)
        else:
            s = _speed_pair(d_m, ra, d_rho, d_flux)[0]
        vs = self.vscale
        if self.kind == "delta+R2":
            return min((U1.u - s) / vs, (s - um) / vs, (um + cm - s) / vs)
        return min((um - s) / vs, (s - U2.u) / vs, (s - (um - cm)) / vs)

    def _bisect(self, good: float, bad: float) -> float:
        for _ in range(200):
            if abs(good - bad) <= _BISECT_TOL * self.rho_max:
                break
            mid = 0.5 * (good + bad)
            if self.margin_scalar(mid) >= 0:
                good = mid
            else:
                bad = mid
        return good

    def scan_grid(self) -> np.ndarray:
        """Geometric scan of ``(0, rho_max]`` plus a cluster around the opposite base density.

        Near that density the feasible set can be a band whose width shrinks
        quadratically with the distance of ``U2`` from the rarefaction curve,
        too narrow for the coarse scan.
        """
        rmax = self.rho_max
        ref = self.U1.rho if self.kind == "delta+R2" else self.U2.rho
        offsets = np.geomspace(1e-12, 0.5, _SCAN_POINTS // 4)
        near = ref * np.concatenate([[1.0], 1.0 - offsets, 1.0 + offsets])
        grid = np.concatenate([rmax * np.geomspace(1e-8, 1.0, _SCAN_POINTS), near])
        return np.unique(grid[(grid > 0) & (grid <= rmax)])

    def feasible_components(self) -> list[tuple[float, float]]:
        rmax = self.rho_max
        grid = self.scan_grid()
        ok = self.margin(grid) >= 0
        if not ok.any():
            from scipy.optimize import minimize_scalar
            res = minimize_scalar(lambda r: -self.margin(r)[0], bounds=(float(grid[0]), rmax),
                                  method="bounded", options={"xatol": 1e-14 * rmax})
            if -res.fun < 0:
                return []
            grid = np.sort(np.append(grid, res.x))
            ok = self.margin(grid) >= 0
        comps = []
        n = len(grid)
        i = 0
        while i < n:
            if not ok[i]:
                i += 1
                continue
            j = i
            while j + 1 < n and ok[j + 1]:
                j += 1
            lo = grid[i] if i == 0 else self._bisect(grid[i], grid[i - 1])
            hi = grid[j] if j == n - 1 else self._bisect(grid[j], grid[j + 1])
            comps.append((float(lo), float(hi)))
            i = j + 1
        return comps


def _select(components, selection: float) -> float:
    lengths = [hi - lo for lo, hi in components]
    total = sum(lengths)
    if total == 0:
        return components[0][0]
    target = selection * total
    for (lo, hi), ln in zip(components, lengths):
        if target <= ln:
            return lo + target
        target -= ln
    return components[-1][1]


def admissible_intermediate(law: GasLaw, U1: GasState, U2: GasState, kind: str,
                            selection: float = 0.5) -> IntermediatePick | None:
    """Pick the intermediate state of a composite plan.

    ``selection`` in ``[0, 1]`` maps affinely onto the total length of the
    feasible density set. Returns ``None`` when the set is empty.
    """
    if not 0.0 <= selection <= 1.0:
        raise ValueError(f"selection must lie in [0, 1], got {selection!r}")
    comp = _Composite(law, U1, U2, kind)
    comps = comp.feasible_components()
    if not comps:
        return None
    rho_m = _select(comps, selection)
    state = GasState(float(comp.state_u(rho_m)), rho_m)
    return IntermediatePick(state, (comps[0][0], comps[-1][1]), selection, tuple(comps))


def in_q1(law: GasLaw, U1: GasState, s: GasState, tol: float = 0.0) -> bool:
    """Speed-compatibility set for delta+R2 intermediate states (bounded by M1, M2 and ``u1``)."""
    lo = m_lower_bound(law, U1.rho)
    if s.rho < lo:
        return False
    m1 = eval_curve(law, CurveId.M1, U1, s.rho)
    upper = U1.u if s.rho >= U1.rho else eval_curve(law, CurveId.M2, U1, s.rho)
    return m1 - tol <= s.u <= upper + tol


def in_q2(law: GasLaw, U1: GasState, U2: GasState, s: GasState, tol: float = 0.0) -> bool:
    """Speed-compatibility set for R1+delta intermediate states (bounded by M11, D11 and D21)."""
    if s.rho < m_lower_bound(law, U2.rho) or s.rho > U1.rho:
        return False
    upper = eval_curve(law, CurveId.M11, U2, s.rho)
    if s.rho >= U2.rho:
        lower = eval_curve(law, CurveId.D11, U2, s.rho)
    else:
        lower = eval_curve(law, CurveId.D21, U2, s.rho)
    return lower - tol <= s.u <= upper + tol


def _composite_solution(law, U1, U2, kind, selection, label) -> MeasureSolution:
    pick = admissible_intermediate(law, U1, U2, kind, selection)
    if pick is None:
        raise NoMeasureSolution(label, f"no admissible intermediate state for a {kind} plan")
    Um = pick.state
    if kind == "delta+R2":
        path = construct(law, RiemannData(U1, Um))
        pieces = (ConstantState(U1), DeltaShock(path), ConstantState(Um),
                  RarefactionFan.build(law, 2, Um, U2), ConstantState(U2))
    else:
        path = construct(law, RiemannData(Um, U2))
        pieces = (ConstantState(U1), RarefactionFan.build(law, 1, U1, Um), ConstantState(Um),
                  DeltaShock(path), ConstantState(U2))
    plan = SolutionPlan(law, pieces, (0.0, math.inf), pattern=kind)
    return MeasureSolution(law, plan, kind, label, pick=pick, data=RiemannData(U1, U2))


_NO_SOLUTION = {
    Region.I: "a single delta shock violates the entropy condition and neither delta+R2 nor R1+delta "
              "plans admit a compatible intermediate state",
    Region.I0_UPPER: "a single delta shock exists but violates the entropy condition; no one- or two-wave "
                     "delta plan is admissible",
    Region.I0_LOWER: "a single delta shock exists but violates the entropy condition; no one- or two-wave "
                     "delta plan is admissible",
    Region.V: "the states separate through a vacuum; no delta-containing plan with one or two waves exists",
    Region.HALF_LINE: "equal densities with u2 > u1: the states separate and no delta shock forms",
    Region.COINCIDENT: "identical states: the solution is constant and carries no delta shock",
}


def solve_measure(law: GasLaw, U1: GasState, U2: GasState, selection: float = 0.5,
                  allow_nonentropic: bool = False) -> MeasureSolution:
    """Delta-containing measure solution for data without an initial point mass.

    Raises
    ------
    NoMeasureSolution
        In regions where no entropic one- or two-wave delta plan exists. With
        ``allow_nonentropic`` a non-entropic single delta is returned instead
        when one exists.
    """
    if not 0.0 <= selection <= 1.0:
        raise ValueError(f"selection must lie in [0, 1], got {selection!r}")
    label = classify(law, U1, U2)
    tag, curve = label.tag, label.curve
    data = RiemannData(U1, U2)
    if tag == Region.IV0 or (tag == Region.ON_CURVE and curve in (CurveId.D1, CurveId.D2)):
        return single_delta_solution(law, data, label)
    if tag in (Region.IV1, Region.III) or (tag == Region.ON_CURVE and curve in (CurveId.S1, CurveId.R2)):
        return _composite_solution(law, U1, U2, "delta+R2", selection, label)
    if tag in (Region.IV2, Region.II) or (tag == Region.ON_CURVE and curve in (CurveId.S2, CurveId.R1)):
        return _composite_solution(law, U1, U2, "R1+delta", selection, label)
    if allow_nonentropic:
        try:
            sol = single_delta_solution(law, data, label)
        except NoDeltaShock:
            pass
        else:
            return MeasureSolution(law, sol.plan, sol.kind, label, entropic=False,
                                   notes=("non-entropic single delta returned on request",), data=data)
    reason = _NO_SOLUTION.get(tag, "no entropic delta plan with one or two waves")
    raise NoMeasureSolution(label, reason)


def solve_singular(law: GasLaw, data: RiemannData, selection: float = 0.5) -> MeasureSolution:
    """Solution of Riemann data carrying an initial point mass ``rho0 > 0``.

    Global rows give one delta shock. Rows whose weight vanishes at ``t*``
    continue from ``(x(t*), t*)`` with a fresh problem between the same states:
    a measure solution when that pair lies in the two-shock region IV, the
    classical solution otherwise. A front that blows up ends the solution.
    """
    if data.rho0 <= 0:
        raise ValueError("solve_singular requires rho0 > 0")
    path = construct(law, data)
    ent = entropy_interval(law, path, data)
    plan = _delta_plan(law, path)
    notes: list[str] = []
    if path.case in EXTINCTION_ROWS:
        t_star = path.lifespan
        x_star = path.front_at_end()
        label = classify(law, data.left, data.right)
        tag, curve = label.tag, label.curve
        measure_tags = (Region.IV0, Region.IV1, Region.IV2)
        if tag in measure_tags or (tag == Region.ON_CURVE and curve in (CurveId.D1, CurveId.D2)):
            cont = solve_measure(law, data.left, data.right, selection)
            cont_plan = _shift(cont.plan, x_star, t_star)
            notes.append(f"continued by a {cont.kind} plan from (x*, t*)")
        else:
            csol = solve_classical(law, data.left, data.right)
            cont_plan = _plan_from_classical(law, csol, (x_star, t_star))
            notes.append(f"continued by the classical {csol.pattern} solution from (x*, t*)")
            if tag in (Region.I0_UPPER, Region.I0_LOWER):
                notes.append("a non-entropic single delta shock also exists for the continued pair")
        plan = SolutionPlan(law, plan.pieces, plan.validity, plan.origin, True, cont_plan, plan.pattern)
        notes.append(f"atom momentum left at t*: {path.momentum_at_end()!r}")
    elif path.extinction.kind == "blows_up":
        notes.append(f"front blows up at t*={path.lifespan!r} toward "
                     f"{'+' if path.extinction.direction > 0 else '-'}infinity; no continuation")
    elif path.extinction.kind == VANISHES:
        notes.append("weight vanishes with a bounded front; no continuation")
    return MeasureSolution(law, plan, "singular", None, entropic=ent.valid_until == math.inf,
                           notes=tuple(notes), data=data)


def _shift(plan: SolutionPlan, x0: float, t0: float) -> SolutionPlan:
    end = plan.validity[1] + t0
    cont = _shift(plan.continuation, x0, t0) if plan.continuation else None
    return SolutionPlan(plan.law, plan.pieces, (plan.validity[0] + t0, end),
                        (plan.origin[0] + x0, plan.origin[1] + t0), plan.closed_end, cont, plan.pattern)


def sample_solution(sol: MeasureSolution, t: float, x_lo: float, x_hi: float, n: int) -> SampledProfile:
    """Sample the absolutely continuous part on ``n`` points and list the atoms in the window."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if not x_lo <= x_hi:
        raise ValueError("x_lo must not exceed x_hi")
    if t < 0:
        raise ValueError("t must be >= 0")
    try:
        stage = sol.stage_at(t)
    except ValueError:
        raise ValueError(f"t={t!r} is beyond the solution's validity") from None
    grid = np.linspace(x_lo, x_hi, n)
    rho, u = stage.sample(grid, t)
    atoms = tuple(a for a in sol.atoms(t) if x_lo <= a.x <= x_hi)
    return SampledProfile(t, grid, rho, u, atoms)
