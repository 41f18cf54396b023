"""Outer thermal problem for a soft material, its steady state and early stages.

The outer equation is the same moving-workpiece heat equation as for
hard materials, but the weld-plane temperature is free. It is fixed by
the nonlinear matching relation ``-dT/dy = g(T)`` at y = 0 (see
:func:`weldtherm.inner.soft_gradient`) and the approach speed follows

    V = N P U_e^2 T_c^4 / (k T_a^2 L^2 G^3).

Early stages for a cold start:

(i)   T_c - T_e << T_e^2/T_a: constant flux G_e, similarity profile f(eta).
(ii)  T_c - T_e ~ T_e^2/T_a: parameter-free problem
      d(varphi)/d(tau) = d2(varphi)/dY2,  -d(varphi)/dY = exp(-varphi) at Y = 0.
(iii) later: plain heat equation with the full nonlinear flux law.
"""
from __future__ import annotations

import logging
import math
import warnings
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np
from scipy.special import erfc

from . import _scheme
from .core import (
    DerivedScales,
    Grid1D,
    MaterialProps,
    ProcessParams,
    ThermalState,
    compute_scales,
    coupling_constant,
)
from .errors import BracketError, ModelBreakdownError, ParameterError
from .inner import dlog_soft_gradient_dT, log_soft_gradient, log_soft_velocity
from .numerics import RootBracket, find_root

__all__ = [
    "SoftRunConfig",
    "SoftRunResult",
    "SoftSteady",
    "StageIIField",
    "StageIIResult",
    "StageIIScales",
    "SoftScaledReport",
    "soft_M",
    "initial_soft_state",
    "soft_step",
    "soft_run",
    "soft_steady",
    "similarity_f",
    "similarity_f_prime",
    "stage_i_G0",
    "stage_i_profile",
    "stage_i_time_limit",
    "stage_ii_scales",
    "stage_ii_solve",
    "stage_iii_bc",
    "soft_nondimensionalize",
]

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class SoftRunConfig:
    grid: Grid1D
    dt: float
    t_end: float
    N: float
    newton_tol: float = 1e-12
    newton_max: int = 100
    picard_tol: float = 1e-10
    picard_max: int = 50
    snapshot_times: Sequence[float] = ()

    def __post_init__(self):
        if not self.dt > 0 or not self.t_end > 0:
            raise ParameterError("dt and t_end must be positive")
        if not self.N > 0:
            raise ParameterError("coupling constant N must be positive")
        for name in ("newton_tol", "picard_tol"):
            if not 0 < getattr(self, name) < 1:
                raise ParameterError(f"{name} must lie in (0, 1)")
        if self.newton_max < 1 or self.picard_max < 1:
            raise ParameterError("iteration caps must be >= 1")
        snaps = tuple(sorted(float(s) for s in self.snapshot_times))
        if any(s < 0 or s > self.t_end for s in snaps):
            raise ParameterError("snapshot times must lie in [0, t_end]")
        object.__setattr__(self, "snapshot_times", snaps)


def soft_M(T_c, N: float, m: MaterialProps, p: ProcessParams):
    """Temperature-dependent non-local factor: V G^3 = N P U_e^2 T_c^4 / (k T_a^2 L^2)."""
    return N * p.P * p.U_e ** 2 * np.asarray(T_c) ** 4 / (m.k * m.T_a ** 2 * p.L ** 2)


def initial_soft_state(grid: Grid1D, m: MaterialProps, p: ProcessParams) -> ThermalState:
    return ThermalState(0.0, np.full(grid.n, p.T_e, dtype=float), 0.0, 0.0)


def _affine_gradient(u, w, right, dy):
    u1, w1 = (u[1], w[1]) if u.size > 1 else (right, 0.0)
    A = (-4.0 * u[0] + u1) / (2.0 * dy)
    B = (3.0 - 4.0 * w[0] + w1) / (2.0 * dy)
    return A, B


def soft_step(state: ThermalState, cfg: SoftRunConfig, m: MaterialProps, p: ProcessParams,
              dt: Optional[float] = None) -> ThermalState:
    """Advance one implicit step with the nonlinear flux condition at y = 0.

    For a frozen V the interior is affine in the wall value T0; the wall
    value is then found by a safeguarded Newton iteration on the scalar
    boundary relation, and V is updated by Picard iteration.
    """
    dt = cfg.dt if dt is None else dt
    grid = cfg.grid
    D = m.diffusivity
    r = D * dt / grid.dy ** 2

    # work with the rise above T_e: A + B T0 cancels badly when G dy << T0
    T_e = p.T_e

    def log_g(x):
        return log_soft_gradient(x + T_e, m, p)

    def dlog_g(x):
        return dlog_soft_gradient_dT(x + T_e, m)

    theta = state.T - T_e
    V = state.V
    x0 = theta[0]
    for _ in range(cfg.picard_max):
        u, w = _scheme.affine_interior(theta, r, V * grid.dy / D, 0.0)
        A, B = _affine_gradient(u, w, 0.0, grid.dy)
        sol = _scheme.solve_flux_boundary(A, B, log_g, dlog_g, -T_e, m.T_m - T_e, x0,
                                          cfg.newton_tol, cfg.newton_max)
        x = sol.T0
        if x + T_e >= m.T_m * (1.0 - 1e-12):
            raise ModelBreakdownError(f"centre temperature reached melting at t={state.t + dt}")
        G = A + B * x
        V_next = math.exp(log_soft_velocity(x + T_e, math.log(G), cfg.N, m, p))
        x0 = x
        if abs(V_next - V) <= cfg.picard_tol * V_next:
            break
        V = V_next
    else:
        raise ModelBreakdownError(f"Picard iteration for V did not converge in {cfg.picard_max} sweeps")
    T = np.empty_like(state.T)
    T[0], T[1:-1], T[-1] = x, u + x * w, 0.0
    T += T_e
    _scheme.check_range(T, p.T_e, m.T_m, m.T_m - p.T_e)
    return ThermalState(state.t + dt, T, V, G)


@dataclass
class SoftRunResult:
    """Transient soft-material run.

    ``closure_residual`` is ``|G - g(T_c)| / g(T_c)`` and
    ``nonlocal_residual`` is ``|V G^3 - M(T_c)| / M(T_c)``, both per step.
    ``handoff_time`` is the first time T_c exceeded ``T_m - 5 T_m^2 / T_a``,
    where a hard-material description becomes the appropriate one.
    """

    grid: Grid1D
    N: float
    snapshots: list
    t: np.ndarray
    T_c: np.ndarray
    V: np.ndarray
    G: np.ndarray
    upset: np.ndarray
    closure_residual: np.ndarray
    nonlocal_residual: np.ndarray
    handoff_time: Optional[float] = None
    final: ThermalState = field(repr=False, default=None)


def soft_run(cfg: SoftRunConfig, m: MaterialProps, p: ProcessParams,
             state0: Optional[ThermalState] = None) -> SoftRunResult:
    p.check_against(m)
    if not math.isclose(cfg.grid.length, p.l, rel_tol=1e-12):
        raise ParameterError(f"grid length {cfg.grid.length} differs from workpiece length l={p.l}")
    state = initial_soft_state(cfg.grid, m, p) if state0 is None else state0.copy()
    times = _scheme.step_times(state.t, cfg.t_end, cfg.dt, cfg.snapshot_times)
    handoff_T = m.T_m - 5.0 * m.T_m ** 2 / m.T_a
    handoff_time = None

    n = len(times) + 1
    t_s, Tc_s, V_s, G_s, clo, nl = (np.zeros(n) for _ in range(6))
    t_s[0], Tc_s[0], V_s[0], G_s[0] = state.t, state.T[0], state.V, state.G
    pending = list(cfg.snapshot_times)
    snapshots = []
    while pending and pending[0] <= state.t:
        snapshots.append(state.copy())
        pending.pop(0)
    for i, t_next in enumerate(times, start=1):
        state = soft_step(state, cfg, m, p, dt=t_next - state.t)
        state.t = t_next
        Tc = state.T[0]
        t_s[i], Tc_s[i], V_s[i], G_s[i] = t_next, Tc, state.V, state.G
        log_g = log_soft_gradient(Tc, m, p)
        clo[i] = abs(math.expm1(math.log(state.G) - log_g))
        log_vg3 = math.log(state.V) + 3.0 * math.log(state.G)
        nl[i] = abs(math.expm1(log_vg3 - math.log(soft_M(Tc, cfg.N, m, p))))
        if handoff_time is None and Tc > handoff_T:
            handoff_time = t_next
            log.warning("T_c=%.6g K passed T_m - 5 T_m^2/T_a at t=%.6g s; "
                        "a hard-material model applies from here", Tc, t_next)
        while pending and abs(pending[0] - t_next) <= 1e-9 * cfg.dt:
            snapshots.append(state.copy())
            pending.pop(0)
    upset = np.concatenate([[0.0], np.cumsum(0.5 * (V_s[1:] + V_s[:-1]) * np.diff(t_s))])
    return SoftRunResult(cfg.grid, cfg.N, snapshots, t_s, Tc_s, V_s, G_s, upset, clo, nl,
                         handoff_time, final=state)


@dataclass(frozen=True)
class SoftSteady:
    """Equilibrium of the soft-material outer problem on 0 < y < l."""

    T_inf: float
    V_inf: float
    G_inf: float
    l_inf: float
    t_inf: float
    l: float
    T_e: float
    diffusivity: float
    N: float

    @property
    def alpha(self) -> float:
        return self.V_inf / self.diffusivity

    def temperature(self, y):
        y = np.asarray(y, dtype=float)
        a, l = self.alpha, self.l
        shape = (np.exp(-a * y) - math.exp(-a * l)) / -math.expm1(-a * l)
        return self.T_e + (self.T_inf - self.T_e) * shape

    def profile(self, n: int = 201):
        y = np.linspace(0.0, self.l, n)
        return y, self.temperature(y)

    def profile_gradient(self) -> float:
        """-dT/dy at y = 0 of the exact convection-diffusion profile."""
        return _log_profile_gradient_exp(self.T_inf - self.T_e, math.log(self.alpha), self.l)


def _log_profile_gradient(rise, log_alpha, l):
    alpha_l = math.exp(min(log_alpha + math.log(l), 700.0))
    return math.log(rise) + log_alpha - math.log(-math.expm1(-alpha_l))


def _log_profile_gradient_exp(rise, log_alpha, l):
    return math.exp(_log_profile_gradient(rise, log_alpha, l))


def soft_steady(m: MaterialProps, p: ProcessParams, N: float) -> SoftSteady:
    """Equilibrium centre temperature, velocity and gradient.

    One scalar root-find in T_inf: the exact steady profile's gradient
    must equal the matching gradient g(T_inf), with V given by the
    non-local law evaluated at (T_inf, g(T_inf)).
    """
    p.check_against(m)
    log_D = math.log(m.diffusivity)

    def mismatch(T):
        log_g = log_soft_gradient(T, m, p)
        log_alpha = log_soft_velocity(T, log_g, N, m, p) - log_D
        return _log_profile_gradient(T - p.T_e, log_alpha, p.l) - log_g

    lo, hi = p.T_e + 1.0, m.T_m - 1.0
    try:
        bracket = RootBracket.around(mismatch, lo, hi)
    except BracketError as exc:
        raise BracketError(f"no steady state with T_e + 1 K < T_inf < T_m - 1 K: {exc}") from exc
    T_inf = find_root(mismatch, bracket, tol=1e-13 * m.T_m)
    log_g = log_soft_gradient(T_inf, m, p)
    V_inf = math.exp(log_soft_velocity(T_inf, log_g, N, m, p))
    l_inf = m.diffusivity / V_inf
    return SoftSteady(T_inf, V_inf, math.exp(log_g), l_inf, l_inf ** 2 / m.diffusivity,
                      p.l, p.T_e, m.diffusivity, N)


# ---- stage (i): constant-flux similarity solution -------------------------

def similarity_f(eta):
    """f(eta) = (2/sqrt(pi)) exp(-eta^2/4) - eta erfc(eta/2); f'(0) = -1."""
    eta = np.asarray(eta, dtype=float)
    return 2.0 / math.sqrt(math.pi) * np.exp(-0.25 * eta ** 2) - eta * erfc(0.5 * eta)


def similarity_f_prime(eta):
    return -erfc(0.5 * np.asarray(eta, dtype=float))


def stage_i_G0(m: MaterialProps, p: ProcessParams) -> float:
    """G_0 of the initial stage; the ambient matching gradient is G_0 exp((4/3)(T_a/T_e - T_a/T_m))."""
    log_G0 = (math.log(2.0 * m.T_a) + 4.0 * math.log(m.kappa_m) - 4.0 * math.log(m.k)
              + 5.0 * math.log(p.U_e) + 4.0 * math.log1p(-p.T_e / m.T_m)
              - 2.0 * math.log(p.T_e)) / 3.0
    return math.exp(log_G0)


def _log_G_e(m, p):
    return math.log(stage_i_G0(m, p)) + (4.0 / 3.0) * (m.T_a / p.T_e - m.T_a / m.T_m)


def stage_i_time_limit(m: MaterialProps, p: ProcessParams) -> float:
    """Time by which T_c - T_e reaches T_e^2/T_a under the constant flux G_e."""
    return math.exp(4.0 * math.log(p.T_e) - 2.0 * math.log(m.T_a) - 2.0 * _log_G_e(m, p)) / m.diffusivity


def stage_i_profile(t: float, y, m: MaterialProps, p: ProcessParams):
    """Initial-stage temperature ``T_e + a sqrt(t) f(y / sqrt(D t))``.

    Returns ``(T, G_e)``. Warns when ``t`` is past the stage's validity time.
    """
    if not t > 0:
        raise ParameterError("stage (i) profile needs t > 0")
    if t > stage_i_time_limit(m, p):
        warnings.warn(f"t={t:.3g} s is beyond the initial-stage time scale "
                      f"{stage_i_time_limit(m, p):.3g} s", RuntimeWarning, stacklevel=2)
    D = m.diffusivity
    G_e = math.exp(_log_G_e(m, p))
    a = math.sqrt(D) * G_e
    eta = np.asarray(y, dtype=float) / math.sqrt(D * t)
    return p.T_e + a * math.sqrt(t) * similarity_f(eta), G_e


# ---- stage (ii): parameter-free rescaled problem --------------------------

@dataclass(frozen=True)
class StageIIScales:
    """Map between the rescaled stage-(ii) variables and dimensional ones.

    ``t = time * tau``, ``y = length * Y``, ``T = T_e + temperature * varphi``.
    """

    time: float
    length: float
    temperature: float
    T_e: float

    def to_time(self, tau):
        return self.time * np.asarray(tau)

    def to_tau(self, t):
        return np.asarray(t) / self.time

    def to_temperature(self, varphi):
        return self.T_e + self.temperature * np.asarray(varphi)

    def to_varphi(self, T):
        return (np.asarray(T) - self.T_e) / self.temperature


def stage_ii_scales(m: MaterialProps, p: ProcessParams) -> StageIIScales:
    """Length ``(3/4)(T_e^2/T_a)/G_e``, time ``length^2 / D``, temperature ``(3/4) T_e^2/T_a``."""
    G_e = math.exp(_log_G_e(m, p))
    theta_scale = p.T_e ** 2 / m.T_a
    length = 0.75 * theta_scale / G_e
    return StageIIScales(length ** 2 / m.diffusivity, length, 0.75 * theta_scale, p.T_e)


@dataclass(frozen=True)
class StageIIField:
    tau: float
    Y: np.ndarray
    varphi: np.ndarray


@dataclass
class StageIIResult:
    Y: np.ndarray
    tau: np.ndarray
    varphi0: np.ndarray
    closure_residual: np.ndarray
    snapshots: list


def stage_ii_solve(tau_end: float, n: int = 601, n_steps: int = 4000, Y_max: Optional[float] = None,
                   snapshot_taus: Sequence[float] = (), newton_tol: float = 1e-13,
                   newton_max: int = 100) -> StageIIResult:
    """Solve the rescaled stage-(ii) problem from varphi = 0 up to ``tau_end``.

    The domain is truncated at ``Y_max`` (default ``6 sqrt(tau_end)``) with
    varphi = 0 there; the flux condition uses the same implicit boundary
    solve as :func:`soft_step`.
    """
    if not tau_end > 0:
        raise ParameterError("tau_end must be positive")
    Y_max = 6.0 * math.sqrt(tau_end) if Y_max is None else Y_max
    grid = Grid1D(n, Y_max)
    dtau = tau_end / n_steps
    times = _scheme.step_times(0.0, tau_end, dtau, snapshot_taus)
    phi = np.zeros(grid.n)
    taus, phi0, res = [0.0], [0.0], [0.0]
    pending = sorted(float(s) for s in snapshot_taus)
    snapshots = []
    while pending and pending[0] <= 0.0:
        snapshots.append(StageIIField(0.0, grid.y, phi.copy()))
        pending.pop(0)
    tau = 0.0
    for t_next in times:
        r = (t_next - tau) / grid.dy ** 2
        u, w = _scheme.affine_interior(phi, r, 0.0, 0.0)
        A, B = _affine_gradient(u, w, 0.0, grid.dy)
        sol = _scheme.solve_flux_boundary(A, B, lambda x: -x, lambda x: -1.0, -math.inf, phi[0] + 50.0,
                                          phi[0], newton_tol, newton_max)
        x = sol.T0
        phi = np.concatenate([[x], u + x * w, [0.0]])
        tau = t_next
        taus.append(tau)
        phi0.append(x)
        res.append(abs(math.expm1(math.log(A + B * x) + x)))
        while pending and abs(pending[0] - tau) <= 1e-9 * dtau:
            snapshots.append(StageIIField(tau, grid.y, phi.copy()))
            pending.pop(0)
    return StageIIResult(grid.y, np.array(taus), np.array(phi0), np.array(res), snapshots)


# ---- stage (iii) -----------------------------------------------------------

def stage_iii_bc(T, m: MaterialProps, p: ProcessParams, form: str = "printed"):
    """Weld-plane gradient during the second intermediate stage.

    ``form="printed"`` evaluates
    ``(2 kappa_m^4 T_a U_e^5 (1 - T/T_m) / (k^4 T^2))^(1/3) exp((4/3)(T_a/T_e - T_a/T_m))``;
    ``form="consistent"`` evaluates the reduction that follows from the
    full matching relation, which keeps ``(1 - T/T_m)^4`` and ``T_a/T`` and
    so coincides with :func:`weldtherm.inner.soft_gradient`.
    """
    Tarr = np.asarray(T, dtype=float)
    if np.any(Tarr <= 0) or np.any(Tarr >= m.T_m):
        raise ParameterError(f"stage (iii) needs 0 < T < T_m, got {T}")
    if form == "consistent":
        out = np.exp(log_soft_gradient(Tarr, m, p))
    elif form == "printed":
        log_val = (math.log(2.0 * m.T_a) + 4.0 * math.log(m.kappa_m) + 5.0 * math.log(p.U_e)
                   - 4.0 * math.log(m.k) + np.log1p(-Tarr / m.T_m) - 2.0 * np.log(Tarr)) / 3.0
        out = np.exp(log_val + (4.0 / 3.0) * (m.T_a / p.T_e - m.T_a / m.T_m))
    else:
        raise ParameterError(f"unknown stage (iii) form {form!r}")
    return float(out) if np.ndim(T) == 0 else out


# ---- nondimensional report -------------------------------------------------

@dataclass(frozen=True)
class SoftScaledReport:
    """Scale factors for y = l_inf z, t = t_inf s, T = T_e + (T_inf - T_e) phi, V = V_inf V*.

    ``centre_variation`` is the predicted O(T_inf^2/T_a) wander of the
    weld-plane temperature; ``effective_dirichlet`` is true when it is
    below a tenth of the temperature rise, so that phi = 1 at z = 0 is a
    fair reduction of the boundary relation.
    """

    l_inf: float
    t_inf: float
    V_inf: float
    T_inf: float
    temperature_rise: float
    l_star: float
    centre_variation: float
    centre_variation_rel: float
    variation_vs_rise: float
    effective_dirichlet: bool
    scales: DerivedScales


def soft_nondimensionalize(m: MaterialProps, p: ProcessParams, steady: SoftSteady,
                           N: Optional[float] = None) -> SoftScaledReport:
    N = coupling_constant(p.N_mode) if N is None else N
    rise = steady.T_inf - p.T_e
    variation = steady.T_inf ** 2 / m.T_a
    return SoftScaledReport(
        l_inf=steady.l_inf, t_inf=steady.t_inf, V_inf=steady.V_inf, T_inf=steady.T_inf,
        temperature_rise=rise, l_star=p.l / steady.l_inf, centre_variation=variation,
        centre_variation_rel=steady.T_inf / m.T_a, variation_vs_rise=variation / rise,
        effective_dirichlet=variation / rise < 0.1, scales=compute_scales(m, p, N),
    )
