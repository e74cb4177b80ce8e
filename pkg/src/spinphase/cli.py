"""Command-line front end: ``spinphase run | verify | scan``.

Exit codes: 0 success, 1 failed check, 2 config error, 3 runtime error,
4 I/O error while writing outputs.
"""

from __future__ import annotations

import argparse
import copy
import csv
import json
import logging
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np

from spinphase.checks import CheckResult, run_suite
from spinphase.dynamics import decompose, zbw_frequency
from spinphase.errors import ConfigError, SpinPhaseError
from spinphase.repspace import METRIC
from spinphase.scenario import (
    HBAR_MEV_S,
    ScenarioResult,
    config_hash,
    load_config,
    parse_scenario,
    simulate,
)

log = logging.getLogger("spinphase")

EXIT_OK, EXIT_CHECK, EXIT_CONFIG, EXIT_RUNTIME, EXIT_IO = 0, 1, 2, 3, 4
FORMAT_VERSION = 1

S_PAIRS = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]
COLUMNS = (
    ["tau"]
    + [f"x{i}" for i in range(4)]
    + [f"p{i}" for i in range(4)]
    + [f"pi{i}" for i in range(4)]
    + [f"u{i}" for i in range(4)]
    + [f"r{i}" for i in range(4)]
    + [f"W{i}" for i in range(4)]
    + [f"S{a}{b}" for a, b in S_PAIRS]
    + ["H", "purity"]
    + [f"rad{i}" for i in range(4)]
)
SCAN_COLUMNS = ["value", "zbw_amplitude", "frequency_predicted", "frequency_measured",
                "purity", "max_radiation_rate"]


class OutputError(Exception):
    pass


def _fmt(v) -> str:
    return repr(float(v))


def _write_text(path, text: str):
    try:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text)
    except OSError as exc:
        raise OutputError(f"cannot write {path}: {exc}") from exc


def _csv_text(header, rows) -> str:
    lines = [",".join(header)]
    lines += [",".join(_fmt(v) for v in row) for row in rows]
    return "\n".join(lines) + "\n"


def _json_text(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


# ---------------------------------------------------------------------- run


def sample_rows(result: ScenarioResult):
    traj, rep = result.trajectory, result.report
    purity = rep.purity
    rad = result.radiation_rate()
    W = _kinetic(result, "W")
    S = traj.S
    H = _kinetic(result, "H")
    for k in range(len(traj)):
        yield ([traj.tau[k], *traj.x[k], *traj.p[k], *rep.kinetic[k], *rep.velocity[k],
                *rep.radius[k], *W[k]] + [S[k, a, b] for a, b in S_PAIRS]
               + [H[k], purity[k], *rad[k]])


def _kinetic(result: ScenarioResult, name: str) -> np.ndarray:
    """``W`` or ``H`` evaluated with the kinetic momentum (equal to canonical when free)."""
    from spinphase.phase_space import Point, _H, _W

    t = result.trajectory
    c = Point.batch(t.x, t.p, t.xi, t.lam, t.rep).seeded(0)
    fn = {"W": _W, "H": _H}[name]
    return np.real(fn(c, t.rep, p=result.report.kinetic))


def run_checks(result: ScenarioResult):
    """Conservation audit; tolerances depend on integration method and coupling."""
    scn, traj, rep = result.scenario, result.trajectory, result.report
    exact = scn.integrator.method == "exact" and not scn.interacting
    tight, loose = (1e-11, 1e-9) if exact else (1e-8, 1e-6)
    out = [CheckResult("spinor_norm_conserved",
                       float(np.abs(traj.spinor_norm - traj.spinor_norm[0]).max()), tight,
                       False)]
    if not scn.interacting:
        out.append(CheckResult("p_constant", float(np.abs(traj.p - traj.p[0]).max()), 0.0, False))
        out.append(CheckResult("H_conserved", float(np.abs(traj.H - traj.H[0]).max()), tight,
                               False))
        out.append(CheckResult("J_conserved", float(np.abs(traj.J - traj.J[0]).max()), loose,
                               False))
        out.append(CheckResult("W_conserved", float(np.abs(traj.W - traj.W[0]).max()), loose,
                               False))
        if len(traj) >= 2:
            out.append(CheckResult("decomposition_residual", decompose(traj).residual, loose,
                                   False))
    for c in out:
        c.passed = bool(np.isfinite(c.residual) and c.residual <= c.tolerance)
    return out


def zbw_summary(result: ScenarioResult) -> dict:
    scn = result.scenario
    omega = zbw_frequency(result.report.kinetic[0], scn.state.lam, scn.state.spin)
    measured = result.measured_frequency()
    return {
        "omega_natural": omega,
        "omega_measured_natural": None if np.isnan(measured) else measured,
        "omega_si": scn.to_si_frequency(omega),
        "omega_measured_si": None if np.isnan(measured) else scn.to_si_frequency(measured),
        "hbar_mev_s": HBAR_MEV_S,
    }


def audit_document(result: ScenarioResult, checks) -> dict:
    scn = result.scenario
    return {
        "format_version": FORMAT_VERSION,
        "command": "run",
        "seed": scn.seed,
        "config_hash": scn.config_hash,
        "spin": str(scn.raw["spin"]),
        "samples": len(result.trajectory),
        "zbw": zbw_summary(result),
        "checks": [c.as_dict() for c in checks],
        "passed": all(c.passed for c in checks),
    }


def cmd_run(args) -> int:
    raw = load_config(args.config)
    scn = parse_scenario(raw)
    out = scn.raw["output"]
    samples_path = args.samples or out.get("samples")
    audit_path = args.audit or out.get("audit")
    result = simulate(scn)
    checks = run_checks(result)
    audit = audit_document(result, checks)
    if samples_path:
        _write_text(samples_path, _csv_text(COLUMNS, sample_rows(result)))
    if audit_path:
        _write_text(audit_path, _json_text(audit))
    for c in checks:
        log.info("%-24s %.3e (tol %.1e) %s", c.name, c.residual, c.tolerance,
                 "ok" if c.passed else "FAIL")
    return EXIT_OK if audit["passed"] else EXIT_CHECK


# ------------------------------------------------------------------- verify


def cmd_verify(args) -> int:
    metric = METRIC
    if args.inject_fault == "metric":
        metric = np.diag([1.0, -1.0, -1.0, 1.0])
    checks = run_suite(args.seed, args.cases, metric)
    doc = {
        "format_version": FORMAT_VERSION,
        "command": "verify",
        "seed": args.seed,
        "cases": args.cases,
        "config_hash": config_hash({"seed": args.seed, "cases": args.cases,
                                    "inject_fault": args.inject_fault}),
        "checks": [c.as_dict() for c in checks],
        "passed": all(c.passed for c in checks),
    }
    if args.output:
        _write_text(args.output, _json_text(doc))
    for c in checks:
        print(f"{'PASS' if c.passed else 'FAIL'} {c.name} residual={c.residual:.3e} "
              f"tol={c.tolerance:.1e}")
    return EXIT_OK if doc["passed"] else EXIT_CHECK


# --------------------------------------------------------------------- scan


def scan_variant(raw: dict, param: str, value: float) -> dict:
    cfg = copy.deepcopy(raw)
    if param == "lambda":
        cfg["lambda"] = value
    elif param == "mix":
        spinor = dict(cfg.get("spinor", {}))
        spinor["kind"] = "mix"
        spinor["alpha"] = [value, 0.0]
        cfg["spinor"] = spinor
    elif param == "field":
        field = dict(cfg.get("field", {}))
        if field.get("kind", "none") == "none":
            raise ConfigError("field scan needs a field section in the config")
        field["strength"] = value
        cfg["field"] = field
    else:
        raise ConfigError(f"unknown scan parameter {param!r}")
    return cfg


def scan_row(raw: dict, param: str, value: float):
    result = simulate(parse_scenario(scan_variant(raw, param, value)))
    rep = result.report
    omega = zbw_frequency(rep.kinetic[0], result.scenario.state.lam,
                          result.scenario.state.spin)
    rate = np.abs(result.radiation_rate()).max()
    return [value, float(rep.amplitude.max()), omega, result.measured_frequency(),
            float(rep.purity.min()), float(rate)]


def cmd_scan(args) -> int:
    raw = load_config(args.config)
    if args.steps < 1:
        raise ConfigError("--steps must be >= 1")
    values = np.linspace(args.start, args.stop, args.steps) if args.steps > 1 else [args.start]
    parse_scenario(scan_variant(raw, args.param, float(values[0])))  # fail fast on bad config
    with ThreadPoolExecutor(max_workers=args.workers) as pool:
        rows = list(pool.map(lambda v: scan_row(raw, args.param, float(v)), values))
    text = _csv_text(SCAN_COLUMNS, rows)
    output = args.output or raw.get("output", {}).get("scan")
    if output:
        _write_text(output, text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


# --------------------------------------------------------------------- main


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="spinphase",
                                     description="Spinning-particle phase-space simulations")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="simulate one scenario, write samples and audit")
    run.add_argument("config")
    run.add_argument("--samples", help="override output.samples")
    run.add_argument("--audit", help="override output.audit")
    run.set_defaults(func=cmd_run)

    ver = sub.add_parser("verify", help="run the property suite")
    ver.add_argument("--seed", type=int, default=0)
    ver.add_argument("--cases", type=int, default=20)
    ver.add_argument("--output", help="write the audit JSON here")
    ver.add_argument("--inject-fault", choices=["metric"], help=argparse.SUPPRESS)
    ver.set_defaults(func=cmd_verify)

    scan = sub.add_parser("scan", help="sweep one parameter, one summary row per value")
    scan.add_argument("config")
    scan.add_argument("--param", required=True, choices=["lambda", "mix", "field"])
    scan.add_argument("--from", dest="start", type=float, required=True)
    scan.add_argument("--to", dest="stop", type=float, required=True)
    scan.add_argument("--steps", type=int, required=True)
    scan.add_argument("--output")
    scan.add_argument("--workers", type=int, default=4)
    scan.set_defaults(func=cmd_scan)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    try:
        if getattr(args, "cases", 0) < 0:
            raise ConfigError("--cases must be non-negative")
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OutputError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_IO
    except (SpinPhaseError, ArithmeticError, ValueError, np.linalg.LinAlgError) as exc:
        print(f"runtime error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
