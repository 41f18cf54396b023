import dataclasses
import math
import warnings

import mpmath
import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

import oracles
from weldtherm.core import ASYMPTOTIC_N_SOFT, Grid1D, ThermalState, compute_scales
from weldtherm.errors import BracketError, ModelBreakdownError, ParameterError, SchemeError
from weldtherm.inner import log_soft_gradient, soft_gradient
from weldtherm.soft import (
    SoftRunConfig,
    initial_soft_state,
    similarity_f,
    similarity_f_prime,
    soft_M,
    soft_nondimensionalize,
    soft_run,
    soft_steady,
    soft_step,
    stage_i_G0,
    stage_i_profile,
    stage_i_time_limit,
    stage_ii_scales,
    stage_ii_solve,
    stage_iii_bc,
)
from weldtherm.verification import stage_chain


@pytest.fixture(scope="module")
def moderate():
    from conftest import ANCHOR_K
    from weldtherm.core import DECOUPLING_N_SOFT, MaterialProps, ProcessParams

    m = MaterialProps(4420.0, 560.0, ANCHOR_K, 1e5, 1350.0, 4500.0)
    p = ProcessParams(5e7, 0.01, 1.0, 0.005, 300.0, model="soft", N_mode="decoupling_constant")
    return m, p, DECOUPLING_N_SOFT


@pytest.fixture(scope="module")
def moderate_run(moderate):
    m, p, N = moderate
    steady = soft_steady(m, p, N)
    t_end = 10 * steady.t_inf
    cfg = SoftRunConfig(Grid1D(401, p.l), t_end / 2000, t_end, N,
                        snapshot_times=(0.01 * t_end, 0.1 * t_end, t_end))
    return steady, soft_run(cfg, m, p)


def fd4_second(f, x, h):
    """Fourth-order central second derivative."""
    return (-f(x + 2 * h) + 16 * f(x + h) - 30 * f(x) + 16 * f(x - h) - f(x - 2 * h)) / (12 * h * h)


class TestConfig:
    @pytest.mark.parametrize("kwargs", [dict(dt=0.0), dict(N=-1.0), dict(newton_tol=2.0),
                                        dict(newton_max=0), dict(snapshot_times=(-1.0,))])
    def test_invalid(self, kwargs):
        base = dict(grid=Grid1D(11, 1.0), dt=0.1, t_end=1.0, N=2.0)
        base.update(kwargs)
        with pytest.raises(ParameterError):
            SoftRunConfig(**base)

    def test_grid_must_span_workpiece(self, moderate):
        m, p, N = moderate
        with pytest.raises(ParameterError):
            soft_run(SoftRunConfig(Grid1D(11, 2 * p.l), 0.01, 0.1, N), m, p)


class TestStep:
    def test_first_step_closure(self, moderate):
        m, p, N = moderate
        grid = Grid1D(201, p.l)
        cfg = SoftRunConfig(grid, 1e-4, 1e-4, N)
        s = soft_step(initial_soft_state(grid, m, p), cfg, m, p)
        assert s.T[-1] == p.T_e
        assert s.T[0] > p.T_e
        g = soft_gradient(s.T[0], m, p)
        assert abs(s.G - g) <= 1e-8 * g
        assert s.V * s.G ** 3 == pytest.approx(float(soft_M(s.T[0], N, m, p)), rel=1e-9)
        # G is the one-sided three-point gradient of the returned field
        assert s.G == pytest.approx((3 * s.T[0] - 4 * s.T[1] + s.T[2]) / (2 * grid.dy), rel=1e-12)

    def test_picard_cap(self, moderate):
        m, p, N = moderate
        grid = Grid1D(201, p.l)
        cfg = SoftRunConfig(grid, 1e-2, 1e-2, N, picard_max=1)
        with pytest.raises(ModelBreakdownError):
            soft_step(initial_soft_state(grid, m, p), cfg, m, p)

    def test_peclet_guard(self, moderate):
        m, p, N = moderate
        with pytest.raises(SchemeError):
            soft_run(SoftRunConfig(Grid1D(11, p.l), 1e-2, 1.0, N), m, dataclasses.replace(p, P=1e13))


class TestRun:
    def test_closure_every_step(self, moderate_run):
        run = moderate_run[1]
        assert run.closure_residual.max() <= 1e-8
        assert run.nonlocal_residual.max() <= 1e-9

    def test_centre_heats_monotonically(self, moderate_run):
        steady, run = moderate_run
        assert np.all(np.diff(run.T_c) >= -1e-9 * (steady.T_inf - 300.0))
        assert np.all(run.T_c < 1350.0)

    def test_approaches_steady(self, moderate_run):
        steady, run = moderate_run
        assert run.T_c[-1] == pytest.approx(steady.T_inf, abs=1e-3 * (steady.T_inf - 300.0))
        assert run.V[-1] == pytest.approx(steady.V_inf, rel=1e-2)

    def test_snapshots_and_upset(self, moderate_run):
        run = moderate_run[1]
        t_end = run.t[-1]
        assert [s.t for s in run.snapshots] == [0.01 * t_end, 0.1 * t_end, t_end]
        assert run.upset[-1] == pytest.approx(np.trapezoid(run.V, run.t), rel=1e-12)

    def test_handoff_flag(self, moderate_run, moderate, caplog):
        m, p, _ = moderate
        # T_m - 5 T_m^2/T_a is negative here, so the first step is already past it
        assert moderate_run[1].handoff_time == moderate_run[1].t[1]
        assert m.T_m - 5 * m.T_m ** 2 / m.T_a < p.T_e


class TestSteady:
    def test_residuals(self, moderate):
        m, p, N = moderate
        s = soft_steady(m, p, N)
        g = math.exp(log_soft_gradient(s.T_inf, m, p))
        assert abs(s.profile_gradient() / g - 1) <= 1e-10
        assert abs(s.V_inf * s.profile_gradient() ** 3 / float(soft_M(s.T_inf, N, m, p)) - 1) <= 1e-10
        assert p.T_e < s.T_inf < m.T_m

    def test_profile_ends(self, moderate):
        s = soft_steady(*moderate)
        y, T = s.profile(51)
        assert T[0] == pytest.approx(s.T_inf, rel=1e-14) and T[-1] == pytest.approx(300.0, rel=1e-14)
        assert np.all(np.diff(T) < 0)

    def test_larger_N_runs_faster_and_cooler(self, moderate):
        m, p, N = moderate
        hi, lo = soft_steady(m, p, N), soft_steady(m, p, ASYMPTOTIC_N_SOFT)
        assert hi.V_inf > lo.V_inf
        assert hi.T_inf < lo.T_inf

    @given(st.floats(1e6, 1e9))
    def test_residuals_across_pressures(self, P):
        from conftest import ANCHOR_K
        from weldtherm.core import MaterialProps, ProcessParams

        m = MaterialProps(4420.0, 560.0, ANCHOR_K, 1e5, 1350.0, 4500.0)
        p = ProcessParams(P, 0.01, 1.0, 0.005, 300.0, model="soft")
        s = soft_steady(m, p, 2.0)
        assert abs(math.log(s.profile_gradient()) - log_soft_gradient(s.T_inf, m, p)) <= 1e-10

    def test_no_steady_state(self, moderate):
        m, p, N = moderate
        with pytest.raises(BracketError, match="no steady state"):
            soft_steady(m, dataclasses.replace(p, T_e=1348.5), N)

    def test_discrete_fixed_point(self, moderate):
        # the discrete equilibrium sits O(dy^2) from the exact profile, so start
        # from the exact profile on a fine grid and watch the drift
        m, p, N = moderate
        s = soft_steady(m, p, N)
        grid = Grid1D(3201, p.l)
        dt = 1e-4 * s.t_inf
        state0 = ThermalState(0.0, s.temperature(grid.y), s.V_inf, s.G_inf)
        run = soft_run(SoftRunConfig(grid, dt, 1000 * dt, N), m, p, state0)
        rise = s.T_inf - p.T_e
        assert np.abs(run.T_c - s.T_inf).max() <= 1e-6 * rise
        assert np.abs(run.final.T - state0.T).max() <= 1e-6 * rise

    def test_stationary_per_step(self, moderate):
        # per-step change shrinks like dy^2; 3201 nodes give 1.6e-8, 6401 give 4e-9
        m, p, N = moderate
        s = soft_steady(m, p, N)
        grid = Grid1D(6401, p.l)
        dt = 1e-4 * s.t_inf
        state = ThermalState(0.0, s.temperature(grid.y), s.V_inf, s.G_inf)
        cfg = SoftRunConfig(grid, dt, 20 * dt, N)
        for _ in range(20):
            nxt = soft_step(state, cfg, m, p)
            assert np.abs(nxt.T - state.T).max() <= 1e-8 * (s.T_inf - p.T_e)
            state = nxt


def test_late_centre_variation(stiff_soft):
    m, p, N = stiff_soft
    s = soft_steady(m, p, N)
    t_end = 10 * s.t_inf
    run = soft_run(SoftRunConfig(Grid1D(401, p.l), t_end / 2000, t_end, N), m, p)
    last = run.t >= t_end / 10
    assert np.abs(run.T_c[last] - s.T_inf).max() <= 5 * s.T_inf ** 2 / m.T_a


class TestStageI:
    def test_wall_values(self):
        assert similarity_f(0.0) == pytest.approx(2 / math.sqrt(math.pi), rel=1e-15)
        assert similarity_f_prime(0.0) == -1.0

    @pytest.mark.parametrize("eta", [0.0, 0.3, 1.0, 2.5, 5.0])
    def test_matches_quadrature_oracle(self, eta):
        assert similarity_f(eta) == pytest.approx(float(oracles.similarity_f(eta)), rel=1e-13, abs=1e-300)

    @pytest.mark.parametrize("eta", [0.1, 0.5, 1.0, 2.0, 4.0])
    def test_ode_residual(self, eta):
        h = 1e-2
        f2 = fd4_second(similarity_f, eta, h)
        res = f2 + eta / 2 * similarity_f_prime(eta) - similarity_f(eta) / 2
        assert abs(res) <= 1e-8
        # the oracle itself satisfies the equation to high precision
        assert abs(oracles.similarity_residual(oracles.similarity_f, mpmath.mpf(eta))) <= 1e-12

    def test_derivative_consistent(self):
        eta = np.linspace(0.1, 6, 40)
        h = 1e-5
        fd = (similarity_f(eta + h) - similarity_f(eta - h)) / (2 * h)
        np.testing.assert_allclose(similarity_f_prime(eta), fd, rtol=1e-8, atol=1e-12)

    def test_fast_decay(self):
        assert similarity_f(12.0) < 1e-15

    def test_profile_flux_and_warning(self, moderate):
        m, p, _ = moderate
        t = 0.5 * stage_i_time_limit(m, p)
        h = 1e-3 * math.sqrt(m.diffusivity * t)
        with warnings.catch_warnings():
            warnings.simplefilter("error")
            T, G_e = stage_i_profile(t, np.array([0.0, h]), m, p)
        assert (T[0] - T[1]) / h == pytest.approx(G_e, rel=1e-3)
        assert G_e == pytest.approx(soft_gradient(p.T_e, m, p), rel=1e-12)
        with pytest.warns(RuntimeWarning):
            stage_i_profile(2 * stage_i_time_limit(m, p), 0.0, m, p)
        with pytest.raises(ParameterError):
            stage_i_profile(0.0, 0.0, m, p)

    def test_G0_scaling_with_activation(self, moderate):
        m, p, _ = moderate
        ratio = stage_i_G0(dataclasses.replace(m, T_a=2 * m.T_a), p) / stage_i_G0(m, p)
        assert ratio == pytest.approx(2 ** (1 / 3), rel=1e-14)


class TestStageII:
    def test_boundary_identity(self):
        r = stage_ii_solve(1.0, n=201, n_steps=400)
        assert r.closure_residual.max() <= 1e-10

    @pytest.mark.parametrize("tau", [1e-4, 1e-3])
    def test_small_tau_limit(self, tau):
        r = stage_ii_solve(tau, n=401, n_steps=2000)
        law = 2 / math.sqrt(math.pi) * math.sqrt(tau)
        assert abs(r.varphi0[-1] / law - 1) <= 2 * math.sqrt(tau)

    def test_monotone_and_unbounded_without_similarity(self):
        r = stage_ii_solve(100.0, n=601, n_steps=4000)
        assert np.all(np.diff(r.varphi0) > 0)
        at = lambda tau: r.varphi0[np.searchsorted(r.tau, tau)]
        assert at(100.0) > at(10.0) > at(1.0)
        # no collapse onto sqrt(tau): the ratio keeps drifting at large tau
        ratios = [at(tau) / math.sqrt(tau) for tau in (1.0, 10.0, 100.0)]
        assert ratios[0] / ratios[1] > 1.2 and ratios[1] / ratios[2] > 1.2

    def test_scales_round_trip(self, moderate):
        m, p, _ = moderate
        sc = stage_ii_scales(m, p)
        assert sc.to_tau(sc.to_time(0.37)) == pytest.approx(0.37, rel=1e-15)
        assert sc.to_varphi(sc.to_temperature(1.5)) == pytest.approx(1.5, rel=1e-14)
        assert sc.length ** 2 / m.diffusivity == pytest.approx(sc.time, rel=1e-15)
        assert sc.temperature == pytest.approx(0.75 * p.T_e ** 2 / m.T_a, rel=1e-15)

    def test_rejects_bad_tau(self):
        with pytest.raises(ParameterError):
            stage_ii_solve(0.0)


class TestStageIII:
    @given(st.floats(301.0, 1349.0))
    def test_printed_vs_consistent(self, T):
        from conftest import ANCHOR_K
        from weldtherm.core import MaterialProps, ProcessParams

        m = MaterialProps(4420.0, 560.0, ANCHOR_K, 1e5, 1350.0, 4500.0)
        p = ProcessParams(5e7, 0.01, 1.0, 0.005, 300.0, model="soft")
        ratio = stage_iii_bc(T, m, p) / stage_iii_bc(T, m, p, "consistent")
        expected = math.exp(-math.log1p(-T / m.T_m) + 4 / 3 * m.T_a * (1 / p.T_e - 1 / T))
        assert ratio == pytest.approx(expected, rel=1e-10)

    def test_consistent_form_is_matching_gradient(self, moderate):
        m, p, _ = moderate
        T = np.array([350.0, 700.0, 1200.0])
        np.testing.assert_allclose(stage_iii_bc(T, m, p, "consistent"), soft_gradient(T, m, p), rtol=1e-14)

    def test_vanishes_at_melting(self, moderate):
        m, p, _ = moderate
        eps = np.array([1e-3, 1e-6])
        G = stage_iii_bc(m.T_m * (1 - eps), m, p)
        assert G[1] < G[0]
        assert G[0] / G[1] == pytest.approx(1e3 ** (1 / 3), rel=1e-2)

    def test_errors(self, moderate):
        m, p, _ = moderate
        with pytest.raises(ParameterError):
            stage_iii_bc(1350.0, m, p)
        with pytest.raises(ParameterError):
            stage_iii_bc(700.0, m, p, form="other")


def test_stage_chain(moderate):
    m, p, N = moderate
    pairs = {c.name: c for c in stage_chain(m, p, N)}
    for name in ("stage_i_vs_stage_ii", "stage_i_vs_full", "stage_ii_vs_full"):
        assert pairs[name].max_rel_dev <= 0.02, name
    V_inf = soft_steady(m, p, N).V_inf
    for name, c in pairs.items():
        if name.startswith("velocity"):
            assert c.max_rel_dev <= 1e-3 * V_inf


class TestScaledReport:
    def test_fields(self, moderate):
        m, p, N = moderate
        s = soft_steady(m, p, N)
        r = soft_nondimensionalize(m, p, s)
        assert r.l_star == p.l / s.l_inf
        assert r.centre_variation == s.T_inf ** 2 / m.T_a
        assert r.variation_vs_rise == pytest.approx(r.centre_variation / (s.T_inf - p.T_e), rel=1e-15)
        assert r.scales == compute_scales(m, p, N)
        assert r.effective_dirichlet == (r.variation_vs_rise < 0.1)

    def test_stiff_material_is_effectively_dirichlet(self, stiff_soft):
        m, p, N = stiff_soft
        assert soft_nondimensionalize(m, p, soft_steady(m, p, N)).effective_dirichlet


def test_cross_model_product_reported(moderate, capsys):
    # as U_e grows T_inf approaches T_m; the soft V G is set against the hard M
    # for information only, since the two closures differ near melting
    m, p, N = moderate
    lines = ["", "cross-model scan: U_e, T_inf, soft V_inf G_inf / hard M (same N)"]
    for U in (1.0, 10.0, 100.0, 1000.0):
        q = dataclasses.replace(p, U_e=U)
        s = soft_steady(m, q, N)
        ratio = s.V_inf * s.G_inf / compute_scales(m, q, N).M
        lines.append(f"  {U:7g} {s.T_inf:9.2f} {ratio:11.4g}")
        assert math.isfinite(ratio) and s.T_inf < m.T_m
    with capsys.disabled():
        print("\n".join(lines))
