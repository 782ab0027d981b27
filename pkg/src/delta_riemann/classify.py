"""Jump brackets, Table-of-cases selection and phase-plane region labels."""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from .curves import CurveId, eval_curve
from .errors import DomainError, NoDeltaShock
from .gas import GasLaw, GasState, RiemannData, pressure, sound_speed

SNAP_RTOL = 1e-12
ON_CURVE_TOL = 1e-10


@dataclass(frozen=True)
class Brackets:
    """Jumps ``[q] = q2 - q1`` across the initial discontinuity.

    ``a`` is the discriminant ``rho1*rho2*[u]**2 - [rho][p]`` and
    ``b = [rho]*u0 - [rho u]``. ``a_scale`` and ``b_scale`` are the magnitudes of
    the terms entering each, used to decide when a value is zero.
    """

    d_rho: float
    d_u: float
    d_p: float
    d_m: float
    d_flux: float
    a: float
    b: float
    a_scale: float
    b_scale: float

    def delta(self, t, rho0: float):
        """``a t^2 + 2 rho0 b t + rho0^2`` evaluated literally."""
        return self.a * t * t + 2.0 * rho0 * self.b * t + rho0 * rho0


def brackets(law: GasLaw, U1: GasState, U2: GasState, u0: float = 0.0) -> Brackets:
    if U1.rho <= 0 or U2.rho <= 0:
        raise DomainError("brackets require positive densities on both sides")
    p1, p2 = pressure(law, U1.rho), pressure(law, U2.rho)
    d_rho = U2.rho - U1.rho
    d_u = U2.u - U1.u
    d_p = p2 - p1
    d_m = U2.rho * U2.u - U1.rho * U1.u
    d_flux = (U2.rho * U2.u ** 2 + p2) - (U1.rho * U1.u ** 2 + p1)
    kinetic = U1.rho * U2.rho * d_u * d_u
    a = kinetic - d_rho * d_p
    b = d_rho * u0 - d_m
    return Brackets(d_rho, d_u, d_p, d_m, d_flux, a, b,
                    a_scale=max(kinetic, abs(d_rho * d_p)),
                    b_scale=max(abs(d_rho * u0), abs(d_m)))


def snapped(br: Brackets) -> tuple[float, float]:
    """Return ``(a, b)`` with values within round-off of zero set to exactly 0.

    When ``a > 0`` and ``b`` is within round-off of ``-sqrt(a)`` the returned
    ``b`` equals ``-sqrt(a)`` exactly.
    """
    a = 0.0 if abs(br.a) <= SNAP_RTOL * br.a_scale else br.a
    b = 0.0 if abs(br.b) <= SNAP_RTOL * br.b_scale else br.b
    if a > 0:
        ra = math.sqrt(a)
        if abs(b + ra) <= SNAP_RTOL * max(abs(b), ra, br.b_scale):
            b = -ra
    return a, b


class CaseRow(str, enum.Enum):
    """Rows of the single-delta existence table.

    Rows ``R1``-``R3`` have no initial mass; ``R4``-``R14`` have ``rho0 > 0``.
    """

    R1 = "rho0=0, [rho]=0, [u]<0: global, w=-rho1[u]t increasing"
    R2 = "rho0=0, [rho]!=0, a>0: global, w=sqrt(a)t increasing"
    R3 = "rho0=0, [rho]!=0, a=0: global, w=0"
    R4 = "rho0>0, [rho]=0, [u]<0: global, w increasing"
    R5 = "rho0>0, [rho]=0, [u]=0: global, w=rho0"
    R6 = "rho0>0, [rho]=0, [u]>0: local, w decreasing, x blows up"
    R7 = "rho0>0, [rho]!=0, a>0, b<-sqrt(a): local, w decreasing to 0"
    R8 = "rho0>0, [rho]!=0, a=0, b<0: local, w decreasing to 0"
    R9 = "rho0>0, [rho]!=0, a<0, b<0: local, w decreasing to 0"
    R10 = "rho0>0, [rho]!=0, a<0, b>=0: local, w rises then falls to 0"
    R11 = "rho0>0, [rho]!=0, a>0, b>-sqrt(a): global, w eventually increasing"
    R12 = "rho0>0, [rho]!=0, a>0, b=-sqrt(a): global, w decreasing to 0 then increasing"
    R13 = "rho0>0, [rho]!=0, a=0, b>0: global, w increasing"
    R14 = "rho0>0, [rho]!=0, a=0, b=0: global, w=rho0"

    @property
    def key(self) -> str:
        return self.name

    @property
    def is_global(self) -> bool:
        return self not in LOCAL_ROWS


LOCAL_ROWS = frozenset({CaseRow.R6, CaseRow.R7, CaseRow.R8, CaseRow.R9, CaseRow.R10})
EXTINCTION_ROWS = frozenset({CaseRow.R7, CaseRow.R8, CaseRow.R9, CaseRow.R10})


def table_row(law: GasLaw, data: RiemannData) -> CaseRow:
    """Select the existence-table row for ``data``.

    Raises
    ------
    NoDeltaShock
        When no single delta shock exists (only possible for ``rho0 == 0``).
    """
    br = brackets(law, data.left, data.right, data.u0)
    a, b = snapped(br)
    if data.rho0 == 0.0:
        if br.d_rho == 0.0:
            if br.d_u < 0:
                return CaseRow.R1
            if br.d_u == 0:
                raise NoDeltaShock("degenerate_constant", "[rho]=[u]=0 with no point mass: nothing to concentrate")
            raise NoDeltaShock("u_jump_positive", "[rho]=0 and [u]>0: the states separate")
        if a < 0:
            raise NoDeltaShock("a_negative", f"a={br.a!r} < 0")
        return CaseRow.R3 if a == 0 else CaseRow.R2
    if br.d_rho == 0.0:
        if br.d_u < 0:
            return CaseRow.R4
        return CaseRow.R5 if br.d_u == 0 else CaseRow.R6
    if a > 0:
        ra = math.sqrt(a)
        if b == -ra:
            return CaseRow.R12
        return CaseRow.R7 if b < -ra else CaseRow.R11
    if a == 0:
        if b < 0:
            return CaseRow.R8
        return CaseRow.R13 if b > 0 else CaseRow.R14
    return CaseRow.R9 if b < 0 else CaseRow.R10


class Region(str, enum.Enum):
    I = "I"
    I0_UPPER = "I0_upper"
    I0_LOWER = "I0_lower"
    HALF_LINE = "HalfLine_rho1"
    II = "II"
    III = "III"
    IV0 = "IV0"
    IV1 = "IV1"
    IV2 = "IV2"
    V = "V"
    ON_CURVE = "OnCurve"
    COINCIDENT = "Coincident"

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class RegionLabel:
    tag: Region
    curve: CurveId | None = None

    def __str__(self) -> str:
        if self.tag == Region.ON_CURVE:
            return f"OnCurve({self.curve})"
        return str(self.tag)

    @classmethod
    def parse(cls, text: str) -> "RegionLabel":
        if text.startswith("OnCurve(") and text.endswith(")"):
            return cls(Region.ON_CURVE, CurveId(text[8:-1]))
        return cls(Region(text))


def vacuum_threshold(law: GasLaw, U1: GasState, U2: GasState) -> float:
    """Velocity jump ``2 (c1 + c2)/(gamma - 1)`` beyond which a vacuum forms."""
    return 2.0 * (sound_speed(law, U1.rho) + sound_speed(law, U2.rho)) / (law.gamma - 1.0)


def classify(law: GasLaw, U1: GasState, U2: GasState) -> RegionLabel:
    """Label the position of ``U2`` in the phase plane relative to ``U1``.

    Precedence: coincident states, the vacuum region, curve boundaries (within
    ``1e-10 * max(1, |u2|)``), the half-line ``rho2 == rho1, u2 > u1``, then
    the open regions.
    """
    if U1.rho <= 0 or U2.rho <= 0:
        raise DomainError("classify requires positive densities")
    if U1 == U2:
        return RegionLabel(Region.COINCIDENT)
    u2 = U2.u
    if u2 - U1.u >= vacuum_threshold(law, U1, U2):
        return RegionLabel(Region.V)
    if U2.rho == U1.rho:
        return RegionLabel(Region.IV0 if u2 < U1.u else Region.HALF_LINE)

    if U2.rho > U1.rho:
        ids = (CurveId.D1, CurveId.S1, CurveId.R2, CurveId.S22)
        labels = (Region.IV0, Region.IV1, Region.III, Region.I, Region.I0_UPPER)
    else:
        ids = (CurveId.D2, CurveId.S2, CurveId.R1, CurveId.S11)
        labels = (Region.IV0, Region.IV2, Region.II, Region.I, Region.I0_LOWER)
    values = [eval_curve(law, cid, U1, U2.rho) for cid in ids]

    tol = ON_CURVE_TOL * max(1.0, abs(u2))
    dist = [abs(u2 - v) for v in values]
    j = min(range(len(ids)), key=dist.__getitem__)
    if dist[j] <= tol:
        return RegionLabel(Region.ON_CURVE, ids[j])
    for v, lab in zip(values, labels):
        if u2 < v:
            return RegionLabel(lab)
    return RegionLabel(labels[-1])


@dataclass(frozen=True)
class ExistenceReport:
    """Whether a single delta shock connects the data, and for how long it is entropic.

    ``entropic`` is ``"always"``, ``"until"`` (see ``entropic_until``) or ``"never"``.
    """

    exists: bool
    global_in_time: bool
    entropic: str
    case_row: CaseRow | None
    entropic_until: float | None = None
    reason: str | None = None
    lifespan: float | None = None


def delta_existence(law: GasLaw, data: RiemannData) -> ExistenceReport:
    from . import delta

    try:
        path = delta.construct(law, data)
    except NoDeltaShock as exc:
        return ExistenceReport(False, False, "never", None, reason=exc.reason)
    ent = delta.entropy_interval(law, path, data)
    vu = ent.valid_until
    if vu == math.inf:
        verdict, until = "always", None
    elif vu <= 0.0:
        verdict, until = "never", None
    else:
        verdict, until = "until", vu
    return ExistenceReport(True, path.lifespan == math.inf, verdict, path.case,
                           entropic_until=until, lifespan=path.lifespan)
