"""Thin lubricating-layer problems that close the outer thermal models.

Hard materials: the scaled layer temperature ``phi(eta)`` solves

    phi'' = phi**-4,  phi'(0) = 0,  phi'(eta) -> 1 as eta -> inf,

and the coupling constant is ``N = 12 * int_0^inf eta**2 phi**-4 d eta``.

Soft materials: the layer solution is closed-form and reduces to a
gradient relation ``G(T_c)`` and a velocity law ``V(T_c, G)``; both are
evaluated in log space because they contain ``exp(4 T_a / T_c)``.
"""
from __future__ import annotations

import functools
import math
from dataclasses import dataclass

import numpy as np

from .core import MaterialProps, ProcessParams, log_kappa_soft_centre
from .errors import BracketError, DomainError, ModelBreakdownError
from .numerics import (
    RootBracket,
    cumulative_trapezoid_from_right,
    find_root,
    integrate_ode,
    quad_trapezoid,
)

__all__ = [
    "InnerSolution",
    "SoftLayerClosure",
    "solve_inner_bvp",
    "default_inner_solution",
    "squeeze_profile",
    "pressure_profile",
    "log_soft_gradient",
    "dlog_soft_gradient_dT",
    "soft_gradient",
    "log_soft_velocity",
    "soft_velocity",
    "soft_closure",
    "soft_layer_profile",
]


@dataclass(frozen=True)
class InnerSolution:
    """Shooting solution of the hard-material layer problem.

    ``c_inf`` is the far-field intercept, ``phi ~ eta + c_inf``.
    """

    eta: np.ndarray
    phi: np.ndarray
    dphi: np.ndarray
    phi0: float
    c_inf: float
    N: float
    eta_max: float

    @property
    def energy(self) -> np.ndarray:
        """First integral ``phi'**2/2 + phi**-3/3``, constant for exact solutions."""
        return 0.5 * self.dphi ** 2 + self.phi ** -3 / 3.0

    @property
    def first_integral_drift(self) -> float:
        e = self.energy
        return float(np.max(np.abs(e - e[0])) / abs(e[0]))


def _layer_rhs(_eta, state):
    return np.array((state[1], state[0] ** -4))


def _far_field_slope(phi_end):
    # phi'**2 = 1 - (2/3) phi**-3 once phi' -> 1 at infinity
    return math.sqrt(max(1.0 - (2.0 / 3.0) * phi_end ** -3, 0.0))


def _n_tail(eta_max, c_inf):
    # 12 * int_{eta_max}^inf eta^2 / (eta + c)^4 d eta, closed form
    u = eta_max + c_inf
    return 12.0 * (1.0 / u - c_inf / u ** 2 + c_inf ** 2 / (3.0 * u ** 3))


def _w_tail(eta, c_inf):
    # 12 * int_eta^inf s / (s + c)^4 ds
    u = eta + c_inf
    return 12.0 * (0.5 / u ** 2 - c_inf / (3.0 * u ** 3))


def solve_inner_bvp(tol: float = 1e-12, eta_max: float = 40.0, step: float = 0.02) -> InnerSolution:
    """Shoot on the unknown wall value phi(0) and evaluate N.

    The infinite-domain condition is replaced by the first integral of the
    tail, ``phi'(eta_max) = sqrt(1 - (2/3) phi(eta_max)**-3)``. The N
    integral beyond ``eta_max`` uses ``phi ~ eta + c_inf`` analytically.
    """
    if not tol > 0:
        raise DomainError("tol must be positive")
    if not eta_max >= 20:
        raise DomainError(f"eta_max must be >= 20, got {eta_max}")

    def residual(phi0):
        _, y = integrate_ode(_layer_rhs, [phi0, 0.0], (0.0, eta_max), step)
        return y[-1, 1] - _far_field_slope(y[-1, 0])

    lo, hi = 0.2, 5.0
    for _ in range(20):
        try:
            bracket = RootBracket.around(residual, lo, hi)
            break
        except BracketError:
            lo, hi = lo / 2.0, hi * 2.0
    else:
        raise BracketError("could not bracket the wall value phi(0)")

    phi0 = find_root(residual, bracket, tol=tol)
    eta, y = integrate_ode(_layer_rhs, [phi0, 0.0], (0.0, eta_max), step)
    phi, dphi = y[:, 0], y[:, 1]
    c_inf = float(phi[-1] - eta_max)
    N = 12.0 * quad_trapezoid(eta, eta ** 2 * phi ** -4) + _n_tail(eta_max, c_inf)
    return InnerSolution(eta, phi, dphi, float(phi0), c_inf, float(N), float(eta_max))


@functools.lru_cache(maxsize=None)
def default_inner_solution() -> InnerSolution:
    return solve_inner_bvp()


def squeeze_profile(sol: InnerSolution):
    """Scaled squeeze velocity ``w*(eta) = 12 int_eta^inf s phi(s)**-4 ds``.

    Returns ``(eta, w)`` on the solution's nodes, tail included.
    """
    w = 12.0 * cumulative_trapezoid_from_right(sol.eta, sol.eta * sol.phi ** -4)
    w += _w_tail(sol.eta_max, sol.c_inf)
    return sol.eta, w


def pressure_profile(x, p: ProcessParams):
    """Squeeze-film pressure ``3P(L^2 - x^2)/(2L^2)`` on 0 <= x <= L."""
    xa = np.asarray(x, dtype=float)
    if np.any(xa < 0) or np.any(xa > p.L):
        raise DomainError(f"x must lie in [0, L={p.L}]")
    value = 1.5 * p.P * (p.L ** 2 - xa ** 2) / p.L ** 2
    return float(value) if np.ndim(x) == 0 else value


def _check_centre(T_c, m):
    Ta = np.asarray(T_c, dtype=float)
    if np.any(Ta <= 0) or np.any(Ta >= m.T_m):
        raise DomainError(f"centre temperature must satisfy 0 < T_c < T_m={m.T_m}, got {T_c}")
    return Ta


def log_soft_gradient(T_c, m: MaterialProps, p: ProcessParams):
    """log G, where G(T_c) is the positive root of the soft matching relation

    ``T_c^2 G^3 / K_c^4 = 2 T_a U_e^5 / k^4``.
    """
    T = _check_centre(T_c, m)
    value = (math.log(2.0 * m.T_a) + 5.0 * math.log(p.U_e) - 4.0 * math.log(m.k)
             + 4.0 * log_kappa_soft_centre(T, m) - 2.0 * np.log(T)) / 3.0
    return float(value) if np.ndim(T_c) == 0 else value


def dlog_soft_gradient_dT(T_c, m: MaterialProps):
    T = _check_centre(T_c, m)
    value = -(4.0 / (m.T_m - T) + 2.0 / T + 4.0 * m.T_a / T ** 2) / 3.0
    return float(value) if np.ndim(T_c) == 0 else value


def soft_gradient(T_c, m: MaterialProps, p: ProcessParams):
    """Matching gradient -dT/dy at the layer edge for centre temperature ``T_c``, K/m."""
    return np.exp(log_soft_gradient(T_c, m, p))


def log_soft_velocity(T_c, log_G, N: float, m: MaterialProps, p: ProcessParams):
    return (math.log(N * p.P) + 2.0 * math.log(p.U_e) - math.log(m.k) - 2.0 * math.log(m.T_a)
            - 2.0 * math.log(p.L) + 4.0 * np.log(T_c) - 3.0 * log_G)


def soft_velocity(T_c: float, G: float, N: float, m: MaterialProps, p: ProcessParams) -> float:
    """Approach velocity ``N T_c^4 P U_e^2 / (k T_a^2 L^2 G^3)``, m/s."""
    if not G > 0:
        raise ModelBreakdownError(f"soft velocity undefined for non-positive gradient G={G}")
    if not T_c > 0:
        raise DomainError(f"T_c must be positive, got {T_c}")
    return float(np.exp(log_soft_velocity(T_c, math.log(G), N, m, p)))


@dataclass(frozen=True)
class SoftLayerClosure:
    """Closed-form soft-material layer at one centre temperature.

    ``b = 2 T_a G / T_c^2`` is the wavenumber of the ln-cosh profile and
    ``sigma = k G / U_e`` the shear stress. ``log_K_c`` is kept because
    ``K_c`` itself overflows for large activation temperatures.
    """

    T_c: float
    G: float
    b: float
    K_c: float
    log_K_c: float
    V: float
    sigma: float
    T_a: float
    k: float

    def sigma_from_wavenumber(self) -> float:
        """Stress implied by ``b^2 = 2 sigma^5 T_a / (k K_c^4 T_c^2)``."""
        log_s5 = (2.0 * math.log(self.b) + math.log(self.k) + 4.0 * self.log_K_c
                  + 2.0 * math.log(self.T_c) - math.log(2.0 * self.T_a))
        return math.exp(log_s5 / 5.0)


def soft_closure(T_c: float, N: float, m: MaterialProps, p: ProcessParams, G=None) -> SoftLayerClosure:
    """Assemble the layer closure at ``T_c``; G defaults to the matching gradient."""
    log_G = log_soft_gradient(T_c, m, p) if G is None else math.log(G)
    G = math.exp(log_G)
    log_K_c = log_kappa_soft_centre(T_c, m)
    K_c = math.exp(log_K_c) if log_K_c < 700 else math.inf
    return SoftLayerClosure(
        T_c=float(T_c), G=G, b=2.0 * m.T_a * G / T_c ** 2, K_c=K_c, log_K_c=float(log_K_c),
        V=soft_velocity(T_c, G, N, m, p), sigma=m.k * G / p.U_e, T_a=m.T_a, k=m.k,
    )


def _log_cosh(x):
    x = np.abs(x)
    return x + np.log1p(np.exp(-2.0 * x)) - math.log(2.0)


def soft_layer_profile(closure: SoftLayerClosure, y):
    """Layer temperature ``T_c - (T_c^2 / 2 T_a) ln cosh(b y)``."""
    ya = np.asarray(y, dtype=float)
    T = closure.T_c - closure.T_c ** 2 / (2.0 * closure.T_a) * _log_cosh(closure.b * ya)
    return float(T) if np.ndim(y) == 0 else T
