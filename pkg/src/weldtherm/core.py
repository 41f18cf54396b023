"""Physical parameters, derived scales and the 1-D thermal state.

All quantities are SI with absolute temperatures in kelvin. The
stress coefficient ``kappa`` appearing in the power-law constitutive
relation ``sigma = kappa(T) * (du/dy)**(1/4)`` has units Pa s^(1/4).
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import DomainError, ParameterError

__all__ = [
    "Model",
    "NMode",
    "MaterialProps",
    "ProcessParams",
    "DerivedScales",
    "Grid1D",
    "ThermalState",
    "DECOUPLING_N_SOFT",
    "ASYMPTOTIC_N_SOFT",
    "kappa_full",
    "kappa_hard_lin",
    "kappa_soft",
    "log_kappa_soft_centre",
    "coupling_constant",
    "hard_M",
    "compute_scales",
]

#: Soft-material coupling constant from the simple decoupling approach.
DECOUPLING_N_SOFT = math.pi ** 2 / 4
#: Soft-material coupling constant from the fuller asymptotic solution.
ASYMPTOTIC_N_SOFT = 0.75 * (2.5 - math.pi ** 2 / 12)


class Model(enum.Enum):
    HARD = "hard"
    SOFT = "soft"


class NMode(enum.Enum):
    """How the dimensionless coupling constant N is obtained."""

    COMPUTED_FROM_BVP = "computed_from_bvp"
    DECOUPLING_CONSTANT = "decoupling_constant"
    ASYMPTOTIC_CONSTANT = "asymptotic_constant"


def _require_positive(owner, **values):
    for name, value in values.items():
        if isinstance(value, bool) or not (
                isinstance(value, (int, float)) and math.isfinite(value) and value > 0):
            raise ParameterError(f"{owner}.{name} must be finite and > 0, got {value!r}")


def _coerce_floats(obj, names):
    for name in names:
        object.__setattr__(obj, name, float(getattr(obj, name)))


@dataclass(frozen=True)
class MaterialProps:
    """Constant physical properties of the workpiece material.

    Parameters
    ----------
    rho : float
        Density, kg m^-3.
    c_p : float
        Specific heat, J kg^-1 K^-1.
    k : float
        Thermal conductivity, W m^-1 K^-1.
    kappa_m : float
        Consistency constant of the constitutive law, Pa s^(1/4).
    T_m : float
        Melting temperature, K.
    T_a : float
        Activation temperature, K.
    """

    rho: float
    c_p: float
    k: float
    kappa_m: float
    T_m: float
    T_a: float

    def __post_init__(self):
        _require_positive(
            "MaterialProps", rho=self.rho, c_p=self.c_p, k=self.k,
            kappa_m=self.kappa_m, T_m=self.T_m, T_a=self.T_a,
        )
        _coerce_floats(self, ("rho", "c_p", "k", "kappa_m", "T_m", "T_a"))

    @property
    def rho_cp(self) -> float:
        return self.rho * self.c_p

    @property
    def diffusivity(self) -> float:
        """Thermal diffusivity k / (rho c_p), m^2 s^-1."""
        return self.k / (self.rho * self.c_p)


@dataclass(frozen=True)
class ProcessParams:
    """Controllable process inputs.

    ``M`` optionally overrides the hard-model non-local constant that is
    otherwise derived from the material, the loading and N.
    """

    P: float
    L: float
    U_e: float
    l: float
    T_e: float
    model: Model = Model.HARD
    N_mode: NMode = NMode.COMPUTED_FROM_BVP
    M: Optional[float] = None

    def __post_init__(self):
        _require_positive("ProcessParams", P=self.P, L=self.L, U_e=self.U_e, l=self.l, T_e=self.T_e)
        _coerce_floats(self, ("P", "L", "U_e", "l", "T_e"))
        if self.M is not None:
            if not (math.isfinite(self.M) and self.M >= 0):
                raise ParameterError(f"ProcessParams.M must be finite and >= 0, got {self.M!r}")
            _coerce_floats(self, ("M",))
        object.__setattr__(self, "model", Model(self.model))
        object.__setattr__(self, "N_mode", NMode(self.N_mode))

    def check_against(self, m: MaterialProps) -> None:
        """Raise ParameterError unless 0 < T_e < T_m."""
        if not self.T_e < m.T_m:
            raise ParameterError(f"ambient T_e={self.T_e} must lie below T_m={m.T_m}")


@dataclass(frozen=True)
class DerivedScales:
    """Scaling block of the lubrication layer plus the hard-model steady scales."""

    V_E: float
    S: float
    h: float
    delta: float
    G_E: float
    M: float
    V_inf: float
    l_inf: float
    t_inf: float

    def as_dict(self) -> dict:
        return {name: getattr(self, name) for name in self.__dataclass_fields__}


@dataclass(frozen=True)
class Grid1D:
    """Uniform grid on [0, length]; node 0 sits at the weld plane y = 0."""

    n: int
    length: float
    dy: float = field(init=False)

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 3:
            raise ParameterError(f"Grid1D needs n >= 3 nodes, got {self.n!r}")
        _require_positive("Grid1D", length=self.length)
        object.__setattr__(self, "n", int(self.n))
        object.__setattr__(self, "length", float(self.length))
        object.__setattr__(self, "dy", self.length / (self.n - 1))

    @property
    def y(self) -> np.ndarray:
        return np.arange(self.n) * self.dy

    def refined(self, factor: int = 2) -> "Grid1D":
        """Grid with spacing divided by ``factor``; old nodes are kept."""
        return Grid1D((self.n - 1) * factor + 1, self.length)


@dataclass
class ThermalState:
    """Outer temperature field at time ``t``.

    ``G`` is the boundary gradient magnitude -dT/dy at y = 0 as measured
    on ``T``; ``V`` is the approach velocity that was used to advance to
    this state.
    """

    t: float
    T: np.ndarray
    V: float
    G: float

    @property
    def T_c(self) -> float:
        return float(self.T[0])

    def copy(self) -> "ThermalState":
        return ThermalState(self.t, self.T.copy(), self.V, self.G)


def _check_temperature(T, upper, name="T", inclusive=True):
    T = np.asarray(T, dtype=float)
    bad = (T <= 0) | ((T > upper) if inclusive else (T >= upper))
    if np.any(bad) or not np.all(np.isfinite(T)):
        bound = "<=" if inclusive else "<"
        raise DomainError(f"{name} must satisfy 0 < {name} {bound} {upper}, got {T}")
    return T


def _as_output(value, like):
    return float(value) if np.ndim(like) == 0 else value


def kappa_full(T, m: MaterialProps):
    """Full temperature dependence of the stress coefficient.

    ``kappa_m (1 - T/T_m) exp((T_a/T_m)(T_m/T - 1))``, exactly zero at T_m.
    """
    Tarr = _check_temperature(T, m.T_m)
    value = m.kappa_m * (1.0 - Tarr / m.T_m) * np.exp(m.T_a / Tarr - m.T_a / m.T_m)
    return _as_output(value, T)


def kappa_hard_lin(T, m: MaterialProps):
    """Linearisation about melting used for hard materials."""
    Tarr = _check_temperature(T, m.T_m)
    return _as_output(m.kappa_m * (1.0 - Tarr / m.T_m), T)


def log_kappa_soft_centre(T_c, m: MaterialProps):
    """log K_c, the logarithm of the soft-model consistency at the centre temperature."""
    T_c = _check_temperature(T_c, m.T_m, "T_c", inclusive=False)
    value = math.log(m.kappa_m) + np.log1p(-T_c / m.T_m) + m.T_a / T_c - m.T_a / m.T_m
    return _as_output(value, T_c)


def kappa_soft(T, T_c: float, m: MaterialProps):
    """Exponential approximation about the centre temperature ``T_c``.

    ``K_c exp((T_a/T_c^2)(T_c - T))`` with
    ``K_c = kappa_m (1 - T_c/T_m) exp(T_a/T_c - T_a/T_m)``.
    """
    if not 0 < T_c < m.T_m:
        raise DomainError(f"centre temperature must satisfy 0 < T_c < T_m, got {T_c}")
    Tarr = np.asarray(T, dtype=float)
    if np.any(Tarr <= 0):
        raise DomainError(f"T must be positive, got {T}")
    log_value = log_kappa_soft_centre(T_c, m) + (m.T_a / T_c ** 2) * (T_c - Tarr)
    return _as_output(np.exp(log_value), T)


def coupling_constant(mode: NMode) -> float:
    """Numerical value of N for the given mode."""
    mode = NMode(mode)
    if mode is NMode.DECOUPLING_CONSTANT:
        return DECOUPLING_N_SOFT
    if mode is NMode.ASYMPTOTIC_CONSTANT:
        return ASYMPTOTIC_N_SOFT
    from .inner import default_inner_solution

    return default_inner_solution().N


def hard_M(m: MaterialProps, p: ProcessParams, N: float) -> float:
    """Hard-model constant in V G = M, K s^-1."""
    return (N * m.k ** (5 / 3) * (m.T_m / m.kappa_m) ** (8 / 3)
            * (p.P / p.L ** 2) * p.U_e ** (-4 / 3))


def compute_scales(m: MaterialProps, p: ProcessParams, N: float) -> DerivedScales:
    """Evaluate the lubrication-layer scaling block and the steady hard-model scales.

    The steady approach speed is the long-workpiece value
    ``sqrt(M k / (rho c_p (T_m - T_e)))``. ``p.M``, when given, replaces the
    M derived from N.
    """
    p.check_against(m)
    if not (math.isfinite(N) and N > 0):
        raise ParameterError(f"coupling constant N must be > 0, got {N!r}")
    dT = m.T_m - p.T_e
    heat = m.rho_cp * dT
    a = (m.k * m.T_m / m.kappa_m) ** (4 / 3)
    b = math.sqrt(p.P) / p.L
    V_E = a * b / math.sqrt(heat) * p.U_e ** (-2 / 3)
    S = a * b * math.sqrt(heat) * p.U_e ** (-5 / 3)
    h = a * p.U_e ** (-5 / 3)
    delta = (m.k ** (5 / 3) * (m.T_m / m.kappa_m) ** (8 / 3) * math.sqrt(heat)
             * b * p.U_e ** (-7 / 3))
    G_E = (m.k ** (1 / 3) * (m.T_m / m.kappa_m) ** (4 / 3) * b * math.sqrt(heat)
           * p.U_e ** (-2 / 3))
    M = hard_M(m, p, N) if p.M is None else p.M
    if M <= 0:
        raise ParameterError("steady scales need M > 0")
    V_inf = math.sqrt(M * m.diffusivity / dT)
    l_inf = m.k / (m.rho_cp * V_inf)
    t_inf = l_inf ** 2 * m.rho_cp / m.k
    return DerivedScales(V_E, S, h, delta, G_E, M, V_inf, l_inf, t_inf)
