"""Thermal models of linear friction welding.

Hard materials: the weld-plane temperature is pinned at melting and the
approach speed obeys ``V G = M``. Soft materials: the weld-plane
temperature follows from a nonlinear flux law and ``V G^3 = M(T_c)``.
Both outer problems are closed by thin-layer (lubrication) solutions.
"""
from .core import (
    ASYMPTOTIC_N_SOFT,
    DECOUPLING_N_SOFT,
    DerivedScales,
    Grid1D,
    MaterialProps,
    Model,
    NMode,
    ProcessParams,
    ThermalState,
    compute_scales,
    coupling_constant,
    hard_M,
    kappa_full,
    kappa_hard_lin,
    kappa_soft,
)
from .errors import (
    BracketError,
    ConfigError,
    ConvergenceError,
    DomainError,
    ModelBreakdownError,
    NonFiniteError,
    ParameterError,
    SchemeError,
    SingularPivotError,
    WeldThermError,
)
from .hard import HardRunConfig, HardRunResult, HardSteady, hard_run, hard_short_time, hard_steady, hard_step
from .inner import (
    InnerSolution,
    SoftLayerClosure,
    default_inner_solution,
    pressure_profile,
    soft_closure,
    soft_gradient,
    soft_layer_profile,
    soft_velocity,
    solve_inner_bvp,
    squeeze_profile,
)
from .soft import (
    SoftRunConfig,
    SoftRunResult,
    SoftSteady,
    StageIIField,
    similarity_f,
    soft_nondimensionalize,
    soft_run,
    soft_steady,
    soft_step,
    stage_i_profile,
    stage_ii_scales,
    stage_ii_solve,
    stage_iii_bc,
)

__version__ = "0.1.0"
