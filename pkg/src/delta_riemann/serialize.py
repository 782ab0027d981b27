"""Configuration parsing and lossless JSON/CSV serialization."""
from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass

from .classify import RegionLabel
from .delta import construct
from .gas import GasLaw, GasState, RiemannData
from .measure import (ClassicalShock, ConstantState, DeltaShock, IntermediatePick,
                      MeasureSolution, RarefactionFan, SampledProfile, SolutionPlan,
                      VacuumBand)

CONFIG_FIELDS = ("gamma", "u1", "rho1", "u2", "rho2", "rho0", "u0", "pick")


class ConfigError(ValueError):
    def __init__(self, field: str, message: str):
        self.field = field
        super().__init__(f"{field}: {message}")


@dataclass(frozen=True)
class ProblemConfig:
    gamma: float
    u1: float
    rho1: float
    u2: float
    rho2: float
    rho0: float = 0.0
    u0: float | None = None
    pick: float = 0.5

    @property
    def law(self) -> GasLaw:
        return GasLaw(self.gamma)

    @property
    def left(self) -> GasState:
        return GasState(self.u1, self.rho1)

    @property
    def right(self) -> GasState:
        return GasState(self.u2, self.rho2)

    @property
    def data(self) -> RiemannData:
        return RiemannData(self.left, self.right, self.rho0, self.u0 if self.u0 is not None else 0.0)

    def to_dict(self) -> dict:
        return {k: getattr(self, k) for k in CONFIG_FIELDS}


def _number(field: str, value) -> float:
    if isinstance(value, bool) or value is None:
        raise ConfigError(field, f"expected a number, got {value!r}")
    try:
        out = float(value)
    except (TypeError, ValueError):
        raise ConfigError(field, f"expected a number, got {value!r}") from None
    if not math.isfinite(out):
        raise ConfigError(field, f"must be finite, got {value!r}")
    return out


def parse_config(raw: dict) -> ProblemConfig:
    """Validate a mapping of config fields; errors name the offending field."""
    for key in raw:
        if key not in CONFIG_FIELDS:
            raise ConfigError(key, "unknown field")
    vals = {}
    for key in ("gamma", "u1", "rho1", "u2", "rho2"):
        if raw.get(key) is None:
            raise ConfigError(key, "missing required field")
        vals[key] = _number(key, raw[key])
    if vals["gamma"] <= 1:
        raise ConfigError("gamma", "must be > 1")
    for key in ("rho1", "rho2"):
        if vals[key] <= 0:
            raise ConfigError(key, "must be > 0")
    rho0 = _number("rho0", raw["rho0"]) if raw.get("rho0") is not None else 0.0
    if rho0 < 0:
        raise ConfigError("rho0", "must be >= 0")
    u0 = raw.get("u0")
    if u0 is not None:
        u0 = _number("u0", u0)
    elif rho0 > 0:
        raise ConfigError("u0", "required when rho0 > 0")
    pick = _number("pick", raw["pick"]) if raw.get("pick") is not None else 0.5
    if not 0.0 <= pick <= 1.0:
        raise ConfigError("pick", "must lie in [0, 1]")
    return ProblemConfig(rho0=rho0, u0=u0, pick=pick, **vals)


# -- plain values -----------------------------------------------------------

def num(x):
    """JSON-safe float: infinities become the strings ``"inf"``/``"-inf"``."""
    if x is None:
        return None
    x = float(x)
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    if math.isnan(x):
        return "nan"
    return x


def unnum(x):
    if isinstance(x, str):
        return float(x)
    return x


def _state(s: GasState) -> dict:
    return {"u": s.u, "rho": s.rho}


def _unstate(d: dict) -> GasState:
    return GasState(d["u"], d["rho"])


def dumps(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=False, allow_nan=False) + "\n"


# -- plans ------------------------------------------------------------------

def _piece_to_dict(p) -> dict:
    if isinstance(p, ConstantState):
        return {"type": "ConstantState", "state": _state(p.state)}
    if isinstance(p, RarefactionFan):
        return {"type": "RarefactionFan", "family": p.family, "left": _state(p.left),
                "right": _state(p.right), "head": p.head, "tail": p.tail}
    if isinstance(p, ClassicalShock):
        return {"type": "ClassicalShock", "family": p.family, "left": _state(p.left),
                "right": _state(p.right), "speed": p.speed}
    if isinstance(p, VacuumBand):
        return {"type": "VacuumBand", "xi_lo": p.xi_lo, "xi_hi": p.xi_hi}
    path = p.path
    return {"type": "DeltaShock", "left": _state(path.left), "right": _state(path.right),
            "rho0": path.rho0, "u0": path.u0, "case": path.case.name, "form": path.form,
            "a": path.a, "b": path.b, "lifespan": num(path.lifespan),
            "extinction": {"kind": path.extinction.kind, "time": num(path.extinction.time),
                           "direction": path.extinction.direction,
                           "finite_front": path.extinction.finite_front}}


def _piece_from_dict(law: GasLaw, d: dict):
    kind = d["type"]
    if kind == "ConstantState":
        return ConstantState(_unstate(d["state"]))
    if kind == "RarefactionFan":
        return RarefactionFan(d["family"], _unstate(d["left"]), _unstate(d["right"]), d["head"], d["tail"])
    if kind == "ClassicalShock":
        return ClassicalShock(d["family"], _unstate(d["left"]), _unstate(d["right"]), d["speed"])
    if kind == "VacuumBand":
        return VacuumBand(d["xi_lo"], d["xi_hi"])
    if kind == "DeltaShock":
        path = construct(law, RiemannData(_unstate(d["left"]), _unstate(d["right"]), d["rho0"], d["u0"]))
        if path.case.name != d["case"]:
            raise ValueError(f"stored case {d['case']} does not match reconstructed {path.case.name}")
        return DeltaShock(path)
    raise ValueError(f"unknown piece type {kind!r}")


def _stage_to_dict(plan: SolutionPlan) -> dict:
    return {"validity": [num(plan.validity[0]), num(plan.validity[1])],
            "origin": list(plan.origin), "closed_end": plan.closed_end, "pattern": plan.pattern,
            "pieces": [_piece_to_dict(p) for p in plan.pieces]}


def plan_to_dict(sol: MeasureSolution) -> dict:
    """Full description of a measure solution; :func:`plan_from_dict` inverts it."""
    pick = None
    if sol.pick is not None:
        pick = {"state": _state(sol.pick.state),
                "admissible_rho_interval": list(sol.pick.admissible_rho_interval),
                "selection_parameter": sol.pick.selection_parameter,
                "components": [list(c) for c in sol.pick.components]}
    data = None
    if sol.data is not None:
        data = {"left": _state(sol.data.left), "right": _state(sol.data.right),
                "rho0": sol.data.rho0, "u0": sol.data.u0}
    return {"gamma": sol.law.gamma, "kind": sol.kind,
            "region": str(sol.region) if sol.region is not None else None,
            "entropic": sol.entropic, "notes": list(sol.notes), "pick": pick, "data": data,
            "stages": [_stage_to_dict(s) for s in sol.stages()]}


def plan_from_dict(d: dict) -> MeasureSolution:
    law = GasLaw(d["gamma"])
    plan = None
    for st in reversed(d["stages"]):
        pieces = tuple(_piece_from_dict(law, p) for p in st["pieces"])
        plan = SolutionPlan(law, pieces, (unnum(st["validity"][0]), unnum(st["validity"][1])),
                            tuple(st["origin"]), st["closed_end"], plan, st["pattern"])
    pick = None
    if d.get("pick"):
        p = d["pick"]
        pick = IntermediatePick(_unstate(p["state"]), tuple(p["admissible_rho_interval"]),
                                p["selection_parameter"], tuple(tuple(c) for c in p["components"]))
    data = None
    if d.get("data"):
        dd = d["data"]
        data = RiemannData(_unstate(dd["left"]), _unstate(dd["right"]), dd["rho0"], dd["u0"])
    region = RegionLabel.parse(d["region"]) if d.get("region") else None
    return MeasureSolution(law, plan, d["kind"], region, pick, d["entropic"], tuple(d["notes"]), data)


# -- profiles ---------------------------------------------------------------

def profile_csv(profile: SampledProfile) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["x", "rho", "u"])
    for x, r, u in zip(profile.grid, profile.rho, profile.u):
        w.writerow([repr(float(x)), repr(float(r)), repr(float(u))])
    return buf.getvalue()


def atoms_json(profile: SampledProfile) -> dict:
    return {"time": profile.time,
            "atoms": [{"x": num(a.x), "w": num(a.w), "v": num(a.v)} for a in profile.atoms]}


def curves_csv(rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["rho", "u", "curve"])
    for rho, u, cid in rows:
        w.writerow([repr(float(rho)), repr(float(u)), str(cid)])
    return buf.getvalue()
