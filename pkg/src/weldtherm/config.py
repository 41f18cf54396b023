"""Flat ``section.key = value`` run configuration.

Example (all values SI, temperatures in K)::

    material.rho = 4420
    material.c_p = 560
    material.k = 11.187
    material.kappa_m = 1e8
    material.T_m = 1350
    material.T_a = 5000
    process.P = 5e7
    process.L = 0.01
    process.U_e = 1
    process.l = 0.018
    process.T_e = 300
    process.model = hard
    solver.n = 401
    solver.dt = 0.05
    solver.t_end = 375
    solver.snapshots = 1, 5, 20, 75, 375

Lines starting with ``#`` are comments. Keys are case-sensitive.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path
from typing import Union

from .core import Grid1D, MaterialProps, Model, NMode, ProcessParams, coupling_constant
from .errors import ConfigError, WeldThermError
from .hard import HardRunConfig
from .soft import SoftRunConfig

__all__ = ["RunConfig", "EMIT_CHOICES", "parse_config", "load_config", "serialize_config"]

EMIT_CHOICES = ("profiles", "series", "scales", "inner", "steady")
DEFAULT_EMIT = frozenset({"profiles", "series", "scales", "steady"})

_REQUIRED = (
    "material.rho", "material.c_p", "material.k", "material.kappa_m", "material.T_m", "material.T_a",
    "process.P", "process.L", "process.U_e", "process.l", "process.T_e", "process.model",
    "solver.n", "solver.dt", "solver.t_end",
)
_OPTIONAL = (
    "process.N_mode", "process.M",
    "solver.picard_tol", "solver.picard_max", "solver.newton_tol", "solver.newton_max",
    "solver.snapshots", "output.dir", "output.emit",
)
_SOFT_ONLY = ("solver.newton_tol", "solver.newton_max")


@dataclass(frozen=True)
class RunConfig:
    material: MaterialProps
    process: ProcessParams
    solver: Union[HardRunConfig, SoftRunConfig]
    out_dir: Path = Path(".")
    emit: frozenset = DEFAULT_EMIT


def _entries(text: str):
    seen = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        key, sep, value = line.partition("=")
        key, value = key.strip(), value.strip()
        if not sep or not key or not value:
            raise ConfigError(f"line {lineno}: expected 'section.key = value', got {raw!r}")
        if key not in _REQUIRED and key not in _OPTIONAL:
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
        if key in seen:
            raise ConfigError(f"line {lineno}: duplicate key {key!r} (first given on line {seen[key][0]})")
        seen[key] = (lineno, value)
    return seen


def _number(entries, key, kind=float):
    lineno, value = entries[key]
    try:
        x = kind(value)
    except ValueError:
        raise ConfigError(f"line {lineno}: {key} must be {'an integer' if kind is int else 'a number'}, "
                          f"got {value!r}") from None
    if kind is float and not math.isfinite(x):
        raise ConfigError(f"line {lineno}: {key} must be finite, got {value!r}")
    return x


def _numbers(entries, key):
    lineno, value = entries[key]
    try:
        return tuple(float(v) for v in value.split(",") if v.strip())
    except ValueError:
        raise ConfigError(f"line {lineno}: {key} must be a comma-separated list of numbers") from None


def parse_config(text: str) -> RunConfig:
    """Parse and validate a configuration document."""
    e = _entries(text)
    missing = [k for k in _REQUIRED if k not in e]
    if missing:
        raise ConfigError("missing required keys: " + ", ".join(missing))
    try:
        material = MaterialProps(*(_number(e, f"material.{k}") for k in ("rho", "c_p", "k", "kappa_m", "T_m", "T_a")))
        try:
            model = Model(e["process.model"][1])
        except ValueError:
            raise ConfigError(f"line {e['process.model'][0]}: process.model must be one of "
                              f"{[m.value for m in Model]}") from None
        if "process.N_mode" in e:
            try:
                n_mode = NMode(e["process.N_mode"][1])
            except ValueError:
                raise ConfigError(f"line {e['process.N_mode'][0]}: process.N_mode must be one of "
                                  f"{[m.value for m in NMode]}") from None
        else:
            n_mode = NMode.COMPUTED_FROM_BVP if model is Model.HARD else NMode.DECOUPLING_CONSTANT
        process = ProcessParams(
            *(_number(e, f"process.{k}") for k in ("P", "L", "U_e", "l", "T_e")),
            model=model, N_mode=n_mode,
            M=_number(e, "process.M") if "process.M" in e else None,
        )
        process.check_against(material)
        if model is Model.SOFT and "process.M" in e:
            raise ConfigError(f"line {e['process.M'][0]}: process.M applies to the hard model only")
        if model is Model.HARD:
            extra = [k for k in _SOFT_ONLY if k in e]
            if extra:
                raise ConfigError(f"line {e[extra[0]][0]}: {extra[0]} applies to the soft model only")

        grid = Grid1D(_number(e, "solver.n", int), process.l)
        common = dict(grid=grid, dt=_number(e, "solver.dt"), t_end=_number(e, "solver.t_end"),
                      snapshot_times=_numbers(e, "solver.snapshots") if "solver.snapshots" in e else ())
        if "solver.picard_tol" in e:
            common["picard_tol"] = _number(e, "solver.picard_tol")
        if "solver.picard_max" in e:
            common["picard_max"] = _number(e, "solver.picard_max", int)
        if model is Model.HARD:
            solver = HardRunConfig(**common)
        else:
            if "solver.newton_tol" in e:
                common["newton_tol"] = _number(e, "solver.newton_tol")
            if "solver.newton_max" in e:
                common["newton_max"] = _number(e, "solver.newton_max", int)
            solver = SoftRunConfig(N=coupling_constant(n_mode), **common)
    except ConfigError:
        raise
    except WeldThermError as exc:
        raise ConfigError(f"invalid configuration: {exc}") from exc

    out_dir = Path(e["output.dir"][1]) if "output.dir" in e else Path(".")
    emit = DEFAULT_EMIT
    if "output.emit" in e:
        lineno, value = e["output.emit"]
        items = [v.strip() for v in value.split(",") if v.strip()]
        bad = [v for v in items if v not in EMIT_CHOICES]
        if bad or not items:
            raise ConfigError(f"line {lineno}: output.emit entries must come from {EMIT_CHOICES}, got {value!r}")
        emit = frozenset(items)
    return RunConfig(material, process, solver, out_dir, emit)


def load_config(path) -> RunConfig:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read configuration {path}: {exc}") from exc
    return parse_config(text)


def serialize_config(cfg: RunConfig) -> str:
    """Render a configuration that :func:`parse_config` maps back to ``cfg``."""
    m, p, s = cfg.material, cfg.process, cfg.solver
    lines = [f"material.{k} = {getattr(m, k)!r}" for k in ("rho", "c_p", "k", "kappa_m", "T_m", "T_a")]
    lines += [f"process.{k} = {getattr(p, k)!r}" for k in ("P", "L", "U_e", "l", "T_e")]
    lines += [f"process.model = {p.model.value}", f"process.N_mode = {p.N_mode.value}"]
    if p.M is not None:
        lines.append(f"process.M = {p.M!r}")
    lines += [f"solver.n = {s.grid.n}", f"solver.dt = {s.dt!r}", f"solver.t_end = {s.t_end!r}",
              f"solver.picard_tol = {s.picard_tol!r}", f"solver.picard_max = {s.picard_max}"]
    if isinstance(s, SoftRunConfig):
        lines += [f"solver.newton_tol = {s.newton_tol!r}", f"solver.newton_max = {s.newton_max}"]
    if s.snapshot_times:
        lines.append("solver.snapshots = " + ", ".join(repr(t) for t in s.snapshot_times))
    lines.append(f"output.dir = {cfg.out_dir}")
    lines.append("output.emit = " + ", ".join(k for k in EMIT_CHOICES if k in cfg.emit))
    return "\n".join(lines) + "\n"
