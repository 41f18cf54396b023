"""Domain-free numerical kernels: tridiagonal solve, bracketed roots, RK4, trapezoid."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.linalg import lapack
from scipy.optimize import brentq

from .errors import BracketError, ConvergenceError, DomainError, NonFiniteError, SingularPivotError

__all__ = [
    "Tridiag",
    "RootBracket",
    "solve_tridiag",
    "find_root",
    "integrate_ode",
    "quad_trapezoid",
    "cumulative_trapezoid_from_right",
]


@dataclass
class Tridiag:
    """Tridiagonal matrix stored by diagonals.

    ``lower`` and ``upper`` hold the n-1 off-diagonal entries, so that row
    i reads ``lower[i-1] x[i-1] + diag[i] x[i] + upper[i] x[i+1]``.
    """

    lower: np.ndarray
    diag: np.ndarray
    upper: np.ndarray

    def __post_init__(self):
        self.lower = np.asarray(self.lower, dtype=float)
        self.diag = np.asarray(self.diag, dtype=float)
        self.upper = np.asarray(self.upper, dtype=float)
        n = self.diag.size
        if n < 1 or self.lower.size != n - 1 or self.upper.size != n - 1:
            raise DomainError("tridiagonal system needs diag of size n >= 1 and off-diagonals of size n-1")

    @property
    def n(self) -> int:
        return self.diag.size

    def to_dense(self) -> np.ndarray:
        return np.diag(self.diag) + np.diag(self.lower, -1) + np.diag(self.upper, 1)

    def matvec(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        out = self.diag * x
        out[1:] += self.lower * x[:-1]
        out[:-1] += self.upper * x[1:]
        return out

    def is_diagonally_dominant(self) -> bool:
        off = np.zeros(self.n)
        off[1:] += np.abs(self.lower)
        off[:-1] += np.abs(self.upper)
        return bool(np.all(np.abs(self.diag) >= off))


def solve_tridiag(sys: Tridiag, rhs) -> np.ndarray:
    """Solve ``sys @ x = rhs``; ``rhs`` may carry several columns.

    Gaussian elimination with partial pivoting (LAPACK gtsv).
    """
    rhs = np.asarray(rhs, dtype=float)
    if rhs.shape[0] != sys.n:
        raise DomainError(f"rhs has {rhs.shape[0]} rows, system has {sys.n}")
    if sys.n == 1:
        if sys.diag[0] == 0.0:
            raise SingularPivotError("zero pivot in 1x1 system")
        return rhs / sys.diag[0]
    *_, x, info = lapack.dgtsv(sys.lower, sys.diag, sys.upper, rhs)
    if info > 0:
        raise SingularPivotError(f"zero pivot at row {info - 1}")
    if info < 0:
        raise DomainError(f"illegal argument {-info} passed to gtsv")
    return x


@dataclass
class RootBracket:
    lo: float
    hi: float
    f_lo: float
    f_hi: float

    def __post_init__(self):
        if not self.lo <= self.hi:
            raise BracketError(f"bracket lower end {self.lo} exceeds upper end {self.hi}")
        if not (np.isfinite(self.f_lo) and np.isfinite(self.f_hi)):
            raise BracketError("residual is not finite at a bracket end")
        if self.f_lo * self.f_hi > 0:
            raise BracketError(
                f"no sign change on [{self.lo}, {self.hi}]: f = ({self.f_lo}, {self.f_hi})")

    @classmethod
    def around(cls, f: Callable[[float], float], lo: float, hi: float) -> "RootBracket":
        return cls(lo, hi, f(lo), f(hi))


def find_root(f: Callable[[float], float], bracket: RootBracket, tol: float = 1e-12,
              maxiter: int = 200) -> float:
    """Root of ``f`` inside ``bracket`` by Brent's hybrid bisection/secant/inverse-quadratic method."""
    if bracket.f_lo == 0.0:
        return bracket.lo
    if bracket.f_hi == 0.0:
        return bracket.hi
    try:
        x = brentq(f, bracket.lo, bracket.hi, xtol=tol, maxiter=maxiter)
    except RuntimeError as exc:
        raise ConvergenceError(str(exc)) from exc
    return min(max(x, bracket.lo), bracket.hi)


def integrate_ode(rhs: Callable[[float, np.ndarray], np.ndarray], y0, span, dt: float):
    """Classical fourth-order Runge-Kutta with fixed step ``dt``.

    The last step is shortened to land exactly on ``span[1]``.

    Returns
    -------
    t : ndarray, shape (m,)
    y : ndarray, shape (m, len(y0))
    """
    t0, t1 = map(float, span)
    if not dt > 0 or not (math.isfinite(t0) and math.isfinite(t1)) or t1 < t0:
        raise DomainError(f"need dt > 0 and a finite forward span, got dt={dt}, span={span}")
    n_steps = max(int(math.ceil((t1 - t0) / dt - 1e-9)), 0)
    ts = t0 + dt * np.arange(n_steps + 1, dtype=float)
    if n_steps:
        ts[-1] = t1
    y = np.asarray(y0, dtype=float).copy()
    out = np.empty((n_steps + 1, y.size))
    out[0] = y
    for i in range(n_steps):
        t = ts[i]
        h = ts[i + 1] - t
        k1 = rhs(t, y)
        k2 = rhs(t + 0.5 * h, y + 0.5 * h * k1)
        k3 = rhs(t + 0.5 * h, y + 0.5 * h * k2)
        k4 = rhs(t + h, y + h * k3)
        y = y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        out[i + 1] = y
    finite = np.isfinite(out).all(axis=1)
    if not finite.all():
        first = int(np.argmin(finite))
        raise NonFiniteError(f"ODE state became non-finite at t={ts[first]}")
    return ts, out


def _check_abscissae(x, f):
    x = np.asarray(x, dtype=float)
    f = np.asarray(f, dtype=float)
    if x.shape != f.shape:
        raise DomainError("abscissae and samples differ in shape")
    if x.size > 1 and not np.all(np.diff(x) > 0):
        raise DomainError("abscissae must be strictly increasing")
    return x, f


def quad_trapezoid(x, f) -> float:
    """Composite trapezoid rule over samples ``f`` at increasing ``x``."""
    x, f = _check_abscissae(x, f)
    return float(np.trapezoid(f, x))


def cumulative_trapezoid_from_right(x, f) -> np.ndarray:
    """``out[i]`` = trapezoid integral of f from ``x[i]`` to ``x[-1]``."""
    x, f = _check_abscissae(x, f)
    pieces = 0.5 * (f[1:] + f[:-1]) * np.diff(x)
    out = np.zeros_like(f)
    out[:-1] = np.cumsum(pieces[::-1])[::-1]
    return out
