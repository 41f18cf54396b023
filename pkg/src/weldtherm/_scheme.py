"""Backward-time central-space kernels shared by the outer solvers.

Interior rows discretise ``dT/dt = D T'' + V T'`` as

    -r(1 - Pe/2) T[i-1] + (1 + 2r) T[i] - r(1 + Pe/2) T[i+1] = T_old[i]

with ``r = D dt / dy^2`` and cell Peclet number ``Pe = V dy / D``.
The boundary gradient is the 3-point one-sided difference
``G = (3 T0 - 4 T1 + T2) / (2 dy)``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConvergenceError, ModelBreakdownError, SchemeError
from .numerics import Tridiag, solve_tridiag

PECLET_MAX = 2.0


def boundary_gradient(T: np.ndarray, dy: float) -> float:
    """-dT/dy at node 0, second order."""
    return (3.0 * T[0] - 4.0 * T[1] + T[2]) / (2.0 * dy)


def interior_matrix(n_int: int, r: float, pe: float) -> Tridiag:
    if pe > PECLET_MAX * (1.0 + 1e-12):
        raise SchemeError(f"cell Peclet number {pe:.4g} exceeds {PECLET_MAX}; refine the grid")
    return Tridiag(
        np.full(n_int - 1, -r * (1.0 - 0.5 * pe)),
        np.full(n_int, 1.0 + 2.0 * r),
        np.full(n_int - 1, -r * (1.0 + 0.5 * pe)),
    )


def dirichlet_solve(T_old, r, pe, left, right):
    """One implicit step with fixed end values; returns the full new field."""
    n_int = T_old.size - 2
    rhs = T_old[1:-1].copy()
    rhs[0] += r * (1.0 - 0.5 * pe) * left
    rhs[-1] += r * (1.0 + 0.5 * pe) * right
    T = np.empty_like(T_old)
    T[0], T[-1] = left, right
    T[1:-1] = solve_tridiag(interior_matrix(n_int, r, pe), rhs)
    return T


def affine_interior(T_old, r, pe, right):
    """Interior solution as an affine function of the unknown wall value.

    Returns ``(u, w)`` with ``T[1:-1] = u + T0 * w``.
    """
    n_int = T_old.size - 2
    rhs = np.zeros((n_int, 2))
    rhs[:, 0] = T_old[1:-1]
    rhs[-1, 0] += r * (1.0 + 0.5 * pe) * right
    rhs[0, 1] = r * (1.0 - 0.5 * pe)
    sol = solve_tridiag(interior_matrix(n_int, r, pe), rhs)
    return sol[:, 0], sol[:, 1]


@dataclass
class FluxSolve:
    T0: float
    iterations: int
    log_residual: float


def solve_flux_boundary(A, B, log_g, dlog_g, lo, hi, x0, tol, max_iter) -> FluxSolve:
    """Find T0 in (lo, hi) with ``A + B T0 = g(T0)``.

    ``A + B T0`` is the discrete boundary gradient of the affine interior
    solution; ``g`` is a positive, strictly decreasing flux law given
    through ``log_g``. The residual ``F = log(A + B T0) - log g(T0)`` is
    strictly increasing, so a Newton iteration safeguarded by bisection on
    a shrinking bracket always converges.
    """
    if not B > 0:
        raise ModelBreakdownError(f"boundary gradient does not increase with wall value (B={B})")
    a = max(lo, -A / B)
    b = hi
    if not a < b:
        raise ModelBreakdownError("no admissible wall value: discrete gradient vanishes above the upper limit")

    def residual(x):
        gd = A + B * x
        if gd <= 0:
            return -math.inf, math.inf
        return math.log(gd) - log_g(x), B / gd - dlog_g(x)

    x = x0 if a < x0 < b else 0.5 * (a + b)
    for it in range(1, max_iter + 1):
        F, dF = residual(x)
        if abs(F) <= tol:
            return FluxSolve(x, it, F)
        if F < 0:
            a = x
        else:
            b = x
        if b - a <= 4e-16 * max(abs(a), abs(b)):
            return FluxSolve(x, it, F)
        step = -F / dF if math.isfinite(F) and dF > 0 else math.nan
        x_new = x + step
        if not (a < x_new < b):
            x_new = 0.5 * (a + b)
        x = x_new
    raise ConvergenceError(f"boundary solve did not converge in {max_iter} iterations (last residual {F:.3e})")


def step_times(t0, t_end, dt, snapshot_times=()):
    """End times of successive steps; each snapshot time is hit exactly."""
    events = sorted({float(s) for s in snapshot_times if t0 < s < t_end} | {float(t_end)})
    times = []
    t = float(t0)
    slack = 1e-9 * dt
    for event in events:
        while event - t > slack:
            nxt = t + dt
            if nxt >= event - slack:
                nxt = event
            times.append(nxt)
            t = nxt
    return times


def check_range(T, lo, hi, scale):
    slack = 1e-9 * scale
    if T.min() < lo - slack or T.max() > hi + slack:
        raise SchemeError(f"temperature left [{lo}, {hi}]: range [{T.min()}, {T.max()}]")
