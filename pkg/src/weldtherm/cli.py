"""Command-line entry point ``weldtherm``.

Verbs::

    weldtherm run <config> [--out DIR]
    weldtherm verify <config> [--out DIR]
    weldtherm scales <config> [--out DIR]
    weldtherm inner [--eta-max X] [--tol T] [--out DIR]

Exit status is 0 when the command ran (verification failures are report
rows, not errors), 1 for configuration errors and 2 for solver errors.
Errors are also written to stderr as one JSON object prefixed with
``weldtherm-error:``.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import List, Optional

from .config import RunConfig, load_config
from .core import Model, compute_scales, coupling_constant
from .errors import ConfigError, WeldThermError
from .hard import hard_run, hard_steady, resolve_M
from .inner import solve_inner_bvp
from .io import format_number, write_csv
from .soft import soft_run, soft_steady
from .verification import format_report, hard_rows, inner_rows, soft_rows

__all__ = ["main", "run", "verify", "write_scales", "write_inner"]

EXIT_OK, EXIT_CONFIG, EXIT_SOLVER = 0, 1, 2


def _n_value(cfg: RunConfig) -> float:
    return coupling_constant(cfg.process.N_mode)


def write_scales(cfg: RunConfig, out: Path) -> Path:
    N = _n_value(cfg)
    scales = compute_scales(cfg.material, cfg.process, N)
    names = list(scales.as_dict()) + ["N"]
    values = list(scales.as_dict().values()) + [N]
    return write_csv(out / "scales.csv", ("name", "value"), (names, values))


def write_inner(out: Path, eta_max: float = 40.0, tol: float = 1e-12) -> Path:
    sol = solve_inner_bvp(tol=tol, eta_max=eta_max)
    comments = [f"N = {format_number(sol.N)}", f"phi0 = {format_number(sol.phi0)}",
                f"c_inf = {format_number(sol.c_inf)}", f"eta_max = {format_number(sol.eta_max)}"]
    return write_csv(out / "inner.csv", ("eta", "phi"), (sol.eta, sol.phi), comments)


def run(cfg: RunConfig, out: Optional[Path] = None) -> List[Path]:
    """Execute the configured model and write the requested CSV files."""
    out = Path(cfg.out_dir if out is None else out)
    out.mkdir(parents=True, exist_ok=True)
    m, p, s = cfg.material, cfg.process, cfg.solver
    written = []
    if p.model is Model.HARD:
        result = hard_run(s, m, p, M=resolve_M(m, p))
    else:
        result = soft_run(s, m, p)
    series = (result.t, result.T_c, result.V, result.G, result.upset)
    if "series" in cfg.emit:
        written.append(write_csv(out / "series.csv", ("t", "T_c", "V", "G", "upset"), series))
    if "profiles" in cfg.emit:
        y = s.grid.y
        for snap in result.snapshots:
            written.append(write_csv(out / f"profile_{format_number(snap.t)}.csv", ("y", "T"), (y, snap.T)))
    if "scales" in cfg.emit:
        written.append(write_scales(cfg, out))
    if "inner" in cfg.emit:
        written.append(write_inner(out))
    if "steady" in cfg.emit:
        y = s.grid.y
        if p.model is Model.HARD:
            st = hard_steady(m, p, result.M)
            comments = [f"V_inf = {format_number(st.V_inf)}", f"G_inf = {format_number(st.G_inf)}",
                        f"l_inf = {format_number(st.l_inf)}"]
        else:
            st = soft_steady(m, p, s.N)
            comments = [f"T_inf = {format_number(st.T_inf)}", f"V_inf = {format_number(st.V_inf)}",
                        f"G_inf = {format_number(st.G_inf)}", f"l_inf = {format_number(st.l_inf)}"]
        written.append(write_csv(out / "steady.csv", ("y", "T"), (y, st.temperature(y)), comments))
    return written


def verify(cfg: RunConfig) -> str:
    rows = inner_rows()
    if cfg.process.model is Model.HARD:
        rows += hard_rows(cfg.material, cfg.process, cfg.solver)
    else:
        rows += soft_rows(cfg.material, cfg.process, cfg.solver)
    return format_report(rows)


def _parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="weldtherm", description="Thermal model of linear friction welding.")
    sub = ap.add_subparsers(dest="verb", required=True)
    for verb, text in (("run", "run the configured transient model"),
                       ("verify", "run the oracle suite and print a pass/fail table"),
                       ("scales", "print the derived scales")):
        sp = sub.add_parser(verb, help=text)
        sp.add_argument("config", help="configuration file")
        sp.add_argument("--out", help="output directory (overrides output.dir)")
    sp = sub.add_parser("inner", help="solve the hard-material inner layer problem")
    sp.add_argument("--eta-max", type=float, default=40.0)
    sp.add_argument("--tol", type=float, default=1e-12)
    sp.add_argument("--out", help="directory for inner.csv")
    return ap


def _error(kind: str, exc: Exception) -> None:
    print("weldtherm-error: " + json.dumps({"kind": kind, "type": type(exc).__name__, "message": str(exc)}),
          file=sys.stderr)


def main(argv: Optional[List[str]] = None) -> int:
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
    args = _parser().parse_args(argv)
    try:
        if args.verb == "inner":
            if args.out:
                out = Path(args.out)
                out.mkdir(parents=True, exist_ok=True)
                print(write_inner(out, args.eta_max, args.tol))
            sol = solve_inner_bvp(tol=args.tol, eta_max=args.eta_max)
            print(f"N = {format_number(sol.N)}")
            print(f"phi0 = {format_number(sol.phi0)}")
            print(f"first_integral_drift = {format_number(sol.first_integral_drift)}")
            return EXIT_OK
        cfg = load_config(args.config)
    except ConfigError as exc:
        _error("config", exc)
        return EXIT_CONFIG
    except WeldThermError as exc:
        _error("solver", exc)
        return EXIT_SOLVER
    try:
        out = Path(args.out) if args.out else None
        if args.verb == "run":
            for path in run(cfg, out):
                print(path)
        elif args.verb == "verify":
            report = verify(cfg)
            sys.stdout.write(report)
            if out is not None:
                out.mkdir(parents=True, exist_ok=True)
                (out / "verify.csv").write_text(report, encoding="ascii", newline="\n")
        else:
            N = _n_value(cfg)
            for name, value in compute_scales(cfg.material, cfg.process, N).as_dict().items():
                print(f"{name} = {format_number(value)}")
            print(f"N = {format_number(N)}")
            if out is not None:
                out.mkdir(parents=True, exist_ok=True)
                print(write_scales(cfg, out))
    except ConfigError as exc:
        _error("config", exc)
        return EXIT_CONFIG
    except (WeldThermError, OSError, ArithmeticError) as exc:
        _error("solver", exc)
        return EXIT_SOLVER
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
