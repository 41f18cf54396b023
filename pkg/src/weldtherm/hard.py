"""Outer thermal problem for a hard material.

The workpiece occupies 0 < y < l and moves towards the weld plane with
speed V(t):

    rho c_p (dT/dt - V dT/dy) = k d2T/dy2,
    T(0, t) = T_m,  T(l, t) = T_e,  T(y, 0) = T_e,
    V(t) = M / G(t),  G = -dT/dy at y = 0.

The non-local coupling is resolved inside every implicit step by a
lagged-velocity (Picard) iteration, which keeps the linear systems
tridiagonal.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np
from scipy.special import erfc

from . import _scheme
from .core import Grid1D, MaterialProps, ProcessParams, ThermalState, compute_scales, coupling_constant
from .errors import ConvergenceError, ModelBreakdownError, ParameterError
from .numerics import RootBracket, find_root

__all__ = [
    "HardRunConfig",
    "HardRunResult",
    "HardSteady",
    "resolve_M",
    "initial_hard_state",
    "hard_step",
    "hard_run",
    "hard_steady",
    "hard_short_time",
]


@dataclass(frozen=True)
class HardRunConfig:
    grid: Grid1D
    dt: float
    t_end: float
    picard_tol: float = 1e-10
    picard_max: int = 50
    snapshot_times: Sequence[float] = ()

    def __post_init__(self):
        if not self.dt > 0 or not self.t_end > 0:
            raise ParameterError("dt and t_end must be positive")
        if not 0 < self.picard_tol < 1:
            raise ParameterError("picard_tol must lie in (0, 1)")
        if self.picard_max < 1:
            raise ParameterError("picard_max must be >= 1")
        snaps = tuple(sorted(float(s) for s in self.snapshot_times))
        if any(s < 0 or s > self.t_end for s in snaps):
            raise ParameterError("snapshot times must lie in [0, t_end]")
        object.__setattr__(self, "snapshot_times", snaps)


@dataclass
class HardRunResult:
    """Snapshots and per-step time series of a transient run.

    ``nonlocal_residual[i]`` is ``|V G - M| / M`` after step i.
    """

    grid: Grid1D
    M: float
    snapshots: list
    t: np.ndarray
    V: np.ndarray
    G: np.ndarray
    upset: np.ndarray
    nonlocal_residual: np.ndarray
    final: ThermalState = field(repr=False, default=None)

    @property
    def T_c(self) -> np.ndarray:
        return np.full_like(self.t, self.final.T[0])


def resolve_M(m: MaterialProps, p: ProcessParams, N: Optional[float] = None) -> float:
    """Non-local constant M, honouring an explicit override on ``p``."""
    if p.M is not None:
        return p.M
    N = coupling_constant(p.N_mode) if N is None else N
    return compute_scales(m, p, N).M


def initial_hard_state(grid: Grid1D, m: MaterialProps, p: ProcessParams) -> ThermalState:
    T = np.full(grid.n, p.T_e, dtype=float)
    T[0] = m.T_m
    return ThermalState(0.0, T, 0.0, _scheme.boundary_gradient(T, grid.dy))


def hard_step(state: ThermalState, cfg: HardRunConfig, M: float, m: MaterialProps,
              p: ProcessParams, dt: Optional[float] = None) -> ThermalState:
    """Advance one implicit step, iterating V = M / G to ``cfg.picard_tol``."""
    dt = cfg.dt if dt is None else dt
    grid = cfg.grid
    D = m.diffusivity
    r = D * dt / grid.dy ** 2
    V = state.V
    for _ in range(cfg.picard_max):
        T = _scheme.dirichlet_solve(state.T, r, V * grid.dy / D, m.T_m, p.T_e)
        G = _scheme.boundary_gradient(T, grid.dy)
        if M == 0.0:
            V_next = 0.0
        elif G <= 0.0:
            raise ModelBreakdownError(f"boundary gradient {G} <= 0 at t={state.t + dt}: V undefined")
        else:
            V_next = M / G
        if abs(V_next - V) <= cfg.picard_tol * abs(V_next):
            break
        V = V_next
    else:
        raise ConvergenceError(f"Picard iteration for V did not converge in {cfg.picard_max} sweeps")
    _scheme.check_range(T, p.T_e, m.T_m, m.T_m - p.T_e)
    return ThermalState(state.t + dt, T, V, G)


def hard_run(cfg: HardRunConfig, m: MaterialProps, p: ProcessParams, M: Optional[float] = None,
             state0: Optional[ThermalState] = None) -> HardRunResult:
    """Integrate from the cold start (or ``state0``) to ``cfg.t_end``."""
    p.check_against(m)
    if not math.isclose(cfg.grid.length, p.l, rel_tol=1e-12):
        raise ParameterError(f"grid length {cfg.grid.length} differs from workpiece length l={p.l}")
    M = resolve_M(m, p) if M is None else M
    state = initial_hard_state(cfg.grid, m, p) if state0 is None else state0.copy()
    times = _scheme.step_times(state.t, cfg.t_end, cfg.dt, cfg.snapshot_times)

    n = len(times) + 1
    t_s, V_s, G_s, res = (np.empty(n) for _ in range(4))
    t_s[0], V_s[0], G_s[0] = state.t, state.V, state.G
    res[0] = abs(state.V * state.G - M) / M if M > 0 and state.t > 0 else 0.0
    pending = list(cfg.snapshot_times)
    snapshots = []
    while pending and pending[0] <= state.t:
        snapshots.append(state.copy())
        pending.pop(0)
    for i, t_next in enumerate(times, start=1):
        state = hard_step(state, cfg, M, m, p, dt=t_next - state.t)
        state.t = t_next
        t_s[i], V_s[i], G_s[i] = state.t, state.V, state.G
        res[i] = abs(state.V * state.G - M) / M if M > 0 else 0.0
        while pending and abs(pending[0] - state.t) <= 1e-9 * cfg.dt:
            snapshots.append(state.copy())
            pending.pop(0)
    upset = np.concatenate([[0.0], np.cumsum(0.5 * (V_s[1:] + V_s[:-1]) * np.diff(t_s))])
    return HardRunResult(cfg.grid, M, snapshots, t_s, V_s, G_s, upset, res, final=state)


@dataclass(frozen=True)
class HardSteady:
    """Exact steady state on a workpiece of finite length ``l``."""

    V_inf: float
    l: float
    T_e: float
    T_m: float
    diffusivity: float
    M: float

    @property
    def alpha(self) -> float:
        return self.V_inf / self.diffusivity

    @property
    def G_inf(self) -> float:
        return (self.T_m - self.T_e) * self.alpha / -math.expm1(-self.alpha * self.l)

    @property
    def l_inf(self) -> float:
        return self.diffusivity / self.V_inf

    def temperature(self, y):
        y = np.asarray(y, dtype=float)
        a, l = self.alpha, self.l
        shape = (np.exp(-a * y) - math.exp(-a * l)) / -math.expm1(-a * l)
        return self.T_e + (self.T_m - self.T_e) * shape

    def profile(self, n: int = 201):
        y = np.linspace(0.0, self.l, n)
        return y, self.temperature(y)

    def closure_residual(self) -> float:
        """Relative residual of ``V^2 = M D (1 - exp(-V l / D)) / (T_m - T_e)``."""
        lhs = self.V_inf ** 2
        rhs = self.M * self.diffusivity * -math.expm1(-self.alpha * self.l) / (self.T_m - self.T_e)
        return abs(lhs - rhs) / rhs


def hard_steady(m: MaterialProps, p: ProcessParams, M: float, l: Optional[float] = None) -> HardSteady:
    """Steady approach speed and profile for workpiece length ``l`` (default ``p.l``)."""
    p.check_against(m)
    l = p.l if l is None else l
    D = m.diffusivity
    dT = m.T_m - p.T_e
    if not M > 0:
        raise ParameterError("steady state needs M > 0")
    V_long = math.sqrt(M * D / dT)

    def closure(V):
        # divided through by M D / dT so that the trivial root V = 0 is isolated
        return V * V * dT / (M * D) + math.expm1(-V * l / D)

    lo = 1e-6 * min(V_long, M * l / dT)
    V = find_root(closure, RootBracket.around(closure, lo, V_long), tol=1e-16 * V_long)
    return HardSteady(V, l, p.T_e, m.T_m, D, M)


def hard_short_time(t: float, y, m: MaterialProps, p: ProcessParams, M: float):
    """Early-time erfc profile and the matching approach speed.

    Returns ``(T, V)`` with ``V = M sqrt(pi D t) / (T_m - T_e)``.
    """
    if not t > 0:
        raise ParameterError("short-time solution needs t > 0")
    D = m.diffusivity
    y = np.asarray(y, dtype=float)
    dT = m.T_m - p.T_e
    T = p.T_e + dT * erfc(0.5 * y / math.sqrt(D * t))
    return T, M * math.sqrt(math.pi * D * t) / dT
