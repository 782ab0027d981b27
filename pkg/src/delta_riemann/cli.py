"""Command-line interface: ``python -m delta_riemann <command>``.

Exit codes: 0 success, 1 verification failure, 2 no measure solution,
64 malformed configuration or usage.
"""
from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .classical import solve_classical
from .classify import Region, classify, delta_existence
from .curves import CurveId, curve_domain, eval_curve
from .delta import convexity, entropy_interval
from .errors import DomainError, NoDeltaShock, NoMeasureSolution
from .measure import (MeasureSolution, classical_measure_solution, sample_solution,
                      single_delta_solution, solve_measure, solve_singular)
from .serialize import (CONFIG_FIELDS, ConfigError, ProblemConfig, atoms_json, curves_csv, dumps,
                        num, parse_config, plan_from_dict, plan_to_dict, profile_csv)
from . import verify as vf

EXIT_OK, EXIT_VERIFY, EXIT_NO_SOLUTION, EXIT_USAGE = 0, 1, 2, 64


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _add_config(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", type=Path, help="JSON file with fields " + ", ".join(CONFIG_FIELDS))
    for name in CONFIG_FIELDS:
        p.add_argument(f"--{name}", dest=name, default=None)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="delta-riemann", description="Classical and delta-shock Riemann solver "
                                                       "for isentropic polytropic gas dynamics.")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("classify", help="region of U2 relative to U1 and single-delta existence")
    _add_config(p)

    p = sub.add_parser("solve", help="solve and print the solution plan as JSON")
    _add_config(p)
    _add_mode(p)
    p.add_argument("--out", type=Path, help="write JSON here instead of stdout")

    p = sub.add_parser("sample", help="sample a solution at one time to CSV")
    _add_config(p)
    _add_mode(p)
    p.add_argument("--plan", type=Path, help="sample a plan written by 'solve' instead of solving")
    p.add_argument("--t", type=float, required=True)
    p.add_argument("--x-lo", type=float, required=True)
    p.add_argument("--x-hi", type=float, required=True)
    p.add_argument("--n", type=int, default=201)
    p.add_argument("--out", type=Path, help="CSV path; atoms go to <out>.atoms.json")

    p = sub.add_parser("curves", help="sample wave curves through U1 to CSV")
    _add_config(p)
    p.add_argument("--curve", action="append", help="curve id (repeatable); default: S1 S2 R1 R2 D1 D2")
    p.add_argument("--rho-lo", type=float)
    p.add_argument("--rho-hi", type=float)
    p.add_argument("--n", type=int, default=101)
    p.add_argument("--out", type=Path)

    p = sub.add_parser("verify", help="run numerical verification and print a JSON summary")
    _add_config(p)
    p.add_argument("--tests", type=int, default=10, help="number of bumps or random configurations")
    p.add_argument("--order", type=int, default=32, help="Gauss-Legendre points per axis")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", type=Path)
    return parser


def _add_mode(p):
    g = p.add_mutually_exclusive_group()
    g.add_argument("--classical", action="store_true", help="classical entropy solution")
    g.add_argument("--delta", action="store_true", help="force a single delta shock")
    p.add_argument("--allow-nonentropic", action="store_true",
                   help="return a non-entropic single delta where no entropic plan exists")


def load_config(args, required: bool = True) -> ProblemConfig | None:
    raw: dict = {}
    if args.config is not None:
        try:
            raw = json.loads(Path(args.config).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError("config", f"cannot read {args.config}: {exc}") from None
        if not isinstance(raw, dict):
            raise ConfigError("config", "top level must be a JSON object")
    for name in CONFIG_FIELDS:
        v = getattr(args, name, None)
        if v is not None:
            raw[name] = v
    if not raw and not required:
        return None
    return parse_config(raw)


def _emit(text: str, out: Path | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        Path(out).write_text(text, newline="\n")


def _existence_dict(rep) -> dict:
    return {"exists": rep.exists, "global_in_time": rep.global_in_time, "entropic": rep.entropic,
            "entropic_until": num(rep.entropic_until), "case_row": rep.case_row.name if rep.case_row else None,
            "case": rep.case_row.value if rep.case_row else None, "reason": rep.reason,
            "lifespan": num(rep.lifespan)}


def cmd_classify(args) -> int:
    cfg = load_config(args)
    label = classify(cfg.law, cfg.left, cfg.right)
    rep = delta_existence(cfg.law, cfg.data)
    out = {"config": cfg.to_dict(), "region": str(label), "existence": _existence_dict(rep)}
    if label.tag == Region.HALF_LINE or label.tag in (Region.I0_UPPER, Region.I0_LOWER):
        out["warning"] = "solutions near the half-line rho2 = rho1, u2 > u1 depend discontinuously on the data"
    _emit(dumps(out), None)
    return EXIT_OK


def _solve(cfg: ProblemConfig, args) -> MeasureSolution:
    law = cfg.law
    if args.classical:
        if cfg.rho0 > 0:
            raise ConfigError("rho0", "--classical requires rho0 = 0")
        return classical_measure_solution(law, cfg.left, cfg.right)
    if args.delta:
        try:
            return single_delta_solution(law, cfg.data, classify(law, cfg.left, cfg.right))
        except NoDeltaShock as exc:
            raise NoMeasureSolution(classify(law, cfg.left, cfg.right),
                                    f"no single delta shock ({exc.reason})") from None
    if cfg.rho0 > 0:
        return solve_singular(law, cfg.data, cfg.pick)
    return solve_measure(law, cfg.left, cfg.right, cfg.pick, allow_nonentropic=args.allow_nonentropic)


def _report(cfg: ProblemConfig, sol: MeasureSolution) -> dict:
    out = {"config": cfg.to_dict(), "classification": str(classify(cfg.law, cfg.left, cfg.right)),
           "plan": plan_to_dict(sol)}
    paths = sol.delta_paths
    if paths:
        p = paths[0]
        ent = entropy_interval(cfg.law, p)
        out["delta"] = {
            "case_row": p.case.name, "case": p.case.value, "form": p.form,
            "a": p.a, "b": p.b, "lifespan": num(p.lifespan),
            "extinction": {"kind": p.extinction.kind, "time": num(p.extinction.time),
                           "direction": p.extinction.direction, "finite_front": p.extinction.finite_front},
            "entropy": {"valid_until": num(ent.valid_until), "method": ent.method,
                        "witnesses": [{"time": num(w.time), "side": w.side} for w in ent.witnesses]},
        }
        try:
            out["delta"]["convexity"] = convexity(p)
        except ValueError as exc:
            out["delta"]["convexity"] = None
            out["delta"]["convexity_note"] = str(exc)
    return out


def cmd_solve(args) -> int:
    cfg = load_config(args)
    try:
        sol = _solve(cfg, args)
    except NoMeasureSolution as exc:
        csol = solve_classical(cfg.law, cfg.left, cfg.right) if cfg.rho0 == 0 else None
        out = {"config": cfg.to_dict(), "region": str(exc.region), "no_measure_solution": exc.justification,
               "classical_fallback": csol.pattern if csol else None}
        _emit(dumps(out), args.out)
        return EXIT_NO_SOLUTION
    _emit(dumps(_report(cfg, sol)), args.out)
    return EXIT_OK


def cmd_sample(args) -> int:
    if args.n < 1:
        raise UsageError("--n must be >= 1")
    if args.plan is not None:
        try:
            doc = json.loads(Path(args.plan).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError("plan", f"cannot read {args.plan}: {exc}") from None
        sol = plan_from_dict(doc.get("plan", doc))
    else:
        cfg = load_config(args)
        try:
            sol = _solve(cfg, args)
        except NoMeasureSolution as exc:
            sys.stderr.write(f"no measure solution in region {exc.region}: {exc.justification}\n")
            return EXIT_NO_SOLUTION
    try:
        prof = sample_solution(sol, args.t, args.x_lo, args.x_hi, args.n)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    _emit(profile_csv(prof), args.out)
    atoms = dumps(atoms_json(prof))
    if args.out is not None:
        Path(str(args.out) + ".atoms.json").write_text(atoms)
    else:
        sys.stderr.write(atoms)
    return EXIT_OK


DEFAULT_CURVES = ("S1", "S2", "R1", "R2", "D1", "D2")


def cmd_curves(args) -> int:
    cfg = load_config(args)
    base = cfg.left
    rows = []
    for name in args.curve or DEFAULT_CURVES:
        try:
            cid = CurveId(name)
        except ValueError:
            raise UsageError(f"unknown curve {name!r}") from None
        if cid in (CurveId.M11, CurveId.M21, CurveId.D11, CurveId.D21):
            b = cfg.right
        else:
            b = base
        lo, hi = curve_domain(cfg.law, cid, b)
        r_lo = args.rho_lo if args.rho_lo is not None else max(lo, 1e-3 * b.rho)
        r_hi = args.rho_hi if args.rho_hi is not None else (hi if math.isfinite(hi) else 4.0 * b.rho)
        r_lo, r_hi = max(r_lo, lo, 1e-12), min(r_hi, hi)
        if r_lo > r_hi:
            continue
        rho = np.linspace(r_lo, r_hi, args.n)
        u = eval_curve(cfg.law, cid, b, rho)
        rows.extend((r, v, cid) for r, v in zip(rho, u))
    _emit(curves_csv(rows), args.out)
    return EXIT_OK


def _verify_solution(sol: MeasureSolution, rng, n_bumps: int, order: int) -> list[dict]:
    checks = []
    for p in sol.delta_paths:
        g = vf.grh_residual(p)
        checks.append({"check": "grh", "case_row": p.case.name, "value": g.relative,
                       "threshold": 1e-8, "passed": g.relative <= 1e-8})
    bumps = vf.random_bumps(sol, rng, n_bumps)
    reports = vf.parallel_map(lambda b: vf.weak_residual(sol, b, order), bumps)
    for b, r in zip(bumps, reports):
        checks.append({"check": "weak_residual", "bump": {"center": list(b.center), "radii": list(b.radii)},
                       "value": r.relative, "threshold": 1e-6, "passed": r.relative <= 1e-6})
    return checks


def cmd_verify(args) -> int:
    if args.tests < 1 or args.order < 2:
        raise UsageError("--tests must be >= 1 and --order >= 2")
    cfg = load_config(args, required=False)
    rng = np.random.default_rng(args.seed)
    checks: list[dict] = []
    note = None
    if cfg is not None:
        try:
            sol = _solve(cfg, argparse.Namespace(classical=False, delta=False, allow_nonentropic=False))
        except NoMeasureSolution as exc:
            if cfg.rho0 > 0:
                raise
            sol = classical_measure_solution(cfg.law, cfg.left, cfg.right)
            note = f"no delta plan in region {exc.region}; verified the classical solution"
        checks += _verify_solution(sol, rng, args.tests, args.order)
        for name, res in vf.curve_order_checks(cfg.law, cfg.left).items():
            checks.append({"check": f"curve_order:{name}", "value": res.min_margin, "threshold": 0.0,
                           "passed": res.passed})
    else:
        from .gas import GasLaw
        regions = ("IV0", "III", "IV1", "II", "IV2")
        for i in range(args.tests):
            law = GasLaw((1.4, 2.0, 3.0)[i % 3])
            region = regions[i % len(regions)]
            U1, U2 = vf.random_pair(law, rng, region)
            sol = solve_measure(law, U1, U2, float(rng.uniform(0.1, 0.9)))
            for c in _verify_solution(sol, rng, 2, args.order):
                c["config"] = {"gamma": law.gamma, "u1": U1.u, "rho1": U1.rho, "u2": U2.u, "rho2": U2.rho,
                               "region": region}
                checks.append(c)
    for c in checks:
        c["value"] = num(c["value"])
    ok = all(c["passed"] for c in checks)
    summary = {"tests": args.tests, "order": args.order, "seed": args.seed, "passed": ok,
               "n_checks": len(checks), "checks": checks}
    if note:
        summary["note"] = note
    _emit(dumps(summary), args.out)
    return EXIT_OK if ok else EXIT_VERIFY


COMMANDS = {"classify": cmd_classify, "solve": cmd_solve, "sample": cmd_sample,
            "curves": cmd_curves, "verify": cmd_verify}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return COMMANDS[args.command](args)
    except ConfigError as exc:
        sys.stderr.write(f"error: malformed config field '{exc.field}': {exc}\n")
        return EXIT_USAGE
    except NoMeasureSolution as exc:
        sys.stderr.write(f"no measure solution in region {exc.region}: {exc.justification}\n")
        return EXIT_NO_SOLUTION
    except (UsageError, DomainError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_USAGE
