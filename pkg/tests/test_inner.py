import math
import time

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from weldtherm.core import DECOUPLING_N_SOFT, MaterialProps, ProcessParams
from weldtherm.errors import DomainError, ModelBreakdownError
from weldtherm.inner import (
    default_inner_solution,
    dlog_soft_gradient_dT,
    log_soft_gradient,
    pressure_profile,
    soft_closure,
    soft_gradient,
    soft_layer_profile,
    soft_velocity,
    solve_inner_bvp,
    squeeze_profile,
)
from weldtherm.soft import stage_i_G0


@pytest.fixture(scope="module")
def sol():
    return default_inner_solution()


class TestHardLayer:
    def test_coupling_constant(self, sol):
        assert sol.N == pytest.approx(8.123, rel=5e-3)
        # frozen oracle: phi(0) = (2/3)^(1/3) from the first integral
        assert sol.phi0 == pytest.approx((2 / 3) ** (1 / 3), rel=1e-9)

    def test_wall_condition_and_monotone_slope(self, sol):
        assert sol.dphi[0] == 0.0
        assert np.all(np.diff(sol.dphi) >= 0)
        assert np.all(sol.phi > 0)
        assert sol.dphi[-1] == pytest.approx(1.0, abs=1e-4)

    def test_first_integral(self, sol):
        # (phi')^2/2 + phi^-3/3 = phi0^-3/3 everywhere
        e = 0.5 * sol.dphi ** 2 + sol.phi ** -3 / 3
        np.testing.assert_allclose(e, sol.phi0 ** -3 / 3, rtol=1e-6)
        assert sol.first_integral_drift <= 1e-6

    def test_equation_residual_at_interior_nodes(self, sol):
        h = np.diff(sol.eta)[:-1]
        d2 = (sol.phi[2:] - 2 * sol.phi[1:-1] + sol.phi[:-2]) / h ** 2
        # central differences carry an O(h^2) error of their own
        np.testing.assert_allclose(d2[:-1], sol.phi[1:-2] ** -4, rtol=1e-3, atol=1e-9)

    def test_truncation_insensitive(self):
        a = solve_inner_bvp(eta_max=30.0)
        b = solve_inner_bvp(eta_max=60.0, step=0.01)
        assert abs(b.N / a.N - 1) < 1e-3

    def test_runtime(self):
        t0 = time.perf_counter()
        solve_inner_bvp()
        assert time.perf_counter() - t0 < 1.0

    def test_rejects_short_domain(self):
        with pytest.raises(DomainError):
            solve_inner_bvp(eta_max=10.0)


class TestSqueeze:
    def test_tail_value(self, sol):
        eta, w = squeeze_profile(sol)
        u = sol.eta_max + sol.c_inf
        assert w[-1] == pytest.approx(12 * (1 / (2 * u ** 2) - sol.c_inf / (3 * u ** 3)), rel=1e-12)
        assert w[-1] < 1e-3 * w[0]

    def test_monotone(self, sol):
        _, w = squeeze_profile(sol)
        assert np.all(np.diff(w) < 0)

    def test_integral_of_w_recovers_N(self, sol):
        # int_0^inf w* = 12 int_0^inf s^2 phi^-4 ds by parts
        eta, w = squeeze_profile(sol)
        u = sol.eta_max + sol.c_inf
        tail = 12 * (1 / (2 * u) - sol.c_inf / (6 * u ** 2))
        assert np.trapezoid(w, eta) + tail == pytest.approx(sol.N, rel=1e-5)


class TestPressure:
    def test_ends(self):
        p = ProcessParams(2e7, 0.02, 1.0, 0.01, 300.0)
        assert pressure_profile(0.02, p) == 0.0
        assert pressure_profile(0.0, p) == 1.5 * 2e7

    @given(st.floats(1e5, 1e9), st.floats(1e-3, 1.0))
    def test_mean_is_applied_pressure(self, P, L):
        p = ProcessParams(P, L, 1.0, 0.01, 300.0)
        x = np.linspace(0, L, 2001)
        assert np.trapezoid(pressure_profile(x, p), x) / L == pytest.approx(P, rel=1e-6)

    def test_out_of_range(self):
        with pytest.raises(DomainError):
            pressure_profile(0.05, ProcessParams(1.0, 0.02, 1.0, 0.01, 300.0))


def _material(T_a):
    return MaterialProps(4420.0, 560.0, 11.19, 1e5, 1350.0, T_a)


PROC = ProcessParams(5e7, 0.01, 1.0, 0.005, 300.0, model="soft")


class TestSoftClosure:
    @given(st.floats(300.0, 0.999 * 1350.0), st.sampled_from([4500.0, 2e4, 6e4]))
    def test_matching_relation_residual(self, T_c, T_a):
        m = _material(T_a)
        logG = log_soft_gradient(T_c, m, PROC)
        # T_c^2 G^3 / K_c^4 = 2 T_a U_e^5 / k^4, in logs
        log_Kc = math.log(m.kappa_m) + math.log1p(-T_c / m.T_m) + T_a / T_c - T_a / m.T_m
        lhs = 2 * math.log(T_c) + 3 * logG - 4 * log_Kc
        rhs = math.log(2 * T_a) + 5 * math.log(PROC.U_e) - 4 * math.log(m.k)
        assert abs(lhs - rhs) <= 1e-12 * max(1.0, abs(rhs))

    def test_no_overflow_for_large_activation(self):
        m = _material(3e5)
        assert math.isfinite(log_soft_gradient(310.0, m, PROC))

    def test_vanishes_near_melting(self):
        m = _material(4500.0)
        eps = np.array([1e-4, 1e-5])
        G = soft_gradient(m.T_m * (1 - eps), m, PROC)
        assert math.log(G[0] / G[1]) / math.log(10) == pytest.approx(4 / 3, rel=1e-3)

    def test_ambient_value_is_stage_one_gradient(self):
        m = _material(4500.0)
        G_e = stage_i_G0(m, PROC) * math.exp(4 / 3 * (m.T_a / PROC.T_e - m.T_a / m.T_m))
        assert soft_gradient(PROC.T_e, m, PROC) == pytest.approx(G_e, rel=1e-12)

    def test_log_derivative(self):
        m = _material(4500.0)
        T, h = 700.0, 1e-3
        fd = (log_soft_gradient(T + h, m, PROC) - log_soft_gradient(T - h, m, PROC)) / (2 * h)
        assert dlog_soft_gradient_dT(T, m) == pytest.approx(fd, rel=1e-7)

    def test_velocity_cubic_law(self):
        m = _material(4500.0)
        V1 = soft_velocity(700.0, 1e5, 2.0, m, PROC)
        assert soft_velocity(700.0, 2e5, 2.0, m, PROC) == pytest.approx(V1 / 8, rel=1e-14)

    @given(st.floats(350.0, 1300.0))
    def test_velocity_matches_first_form(self, T_c):
        # pi^2 k^3 T_c^6 P / (8 K_c^4 T_a^3 L^2 U_e^3) at the matching gradient
        m = _material(4500.0)
        G = soft_gradient(T_c, m, PROC)
        log_Kc = math.log(m.kappa_m) + math.log1p(-T_c / m.T_m) + m.T_a / T_c - m.T_a / m.T_m
        log_first = (math.log(math.pi ** 2 * m.k ** 3 * PROC.P / 8) + 6 * math.log(T_c) - 4 * log_Kc
                     - 3 * math.log(m.T_a) - 2 * math.log(PROC.L) - 3 * math.log(PROC.U_e))
        V = soft_velocity(T_c, G, DECOUPLING_N_SOFT, m, PROC)
        assert math.log(V) == pytest.approx(log_first, abs=1e-11)

    def test_velocity_guards(self):
        m = _material(4500.0)
        with pytest.raises(ModelBreakdownError):
            soft_velocity(700.0, 0.0, 2.0, m, PROC)
        with pytest.raises(DomainError):
            log_soft_gradient(1350.0, m, PROC)

    @pytest.mark.parametrize("T_c", [400.0, 800.0, 1300.0])
    def test_closure_stress_consistency(self, T_c):
        c = soft_closure(T_c, DECOUPLING_N_SOFT, _material(4500.0), PROC)
        assert c.b == pytest.approx(2 * c.T_a * c.G / T_c ** 2, rel=1e-15)
        assert c.sigma_from_wavenumber() == pytest.approx(c.sigma, rel=1e-10)
        assert c.sigma == pytest.approx(c.k * c.G / PROC.U_e, rel=1e-15)


class TestSoftProfile:
    @pytest.fixture
    def closure(self):
        return soft_closure(800.0, DECOUPLING_N_SOFT, _material(4500.0), PROC)

    def test_centre(self, closure):
        assert soft_layer_profile(closure, 0.0) == closure.T_c

    def test_far_slope(self, closure):
        y = 50.0 / closure.b
        h = 1e-3 / closure.b
        slope = (soft_layer_profile(closure, y + h) - soft_layer_profile(closure, y - h)) / (2 * h)
        assert slope == pytest.approx(-closure.G, rel=1e-8)

    def test_curvature_at_centre(self, closure):
        h = 1e-4 / closure.b
        T = soft_layer_profile(closure, np.array([-h, 0.0, h]))
        d2 = (T[0] - 2 * T[1] + T[2]) / h ** 2
        expected = -(closure.T_c ** 2 / (2 * closure.T_a)) * closure.b ** 2
        assert d2 == pytest.approx(expected, rel=1e-5)
        # equals -sigma^5 / (k K_c^4)
        log_rhs = 5 * math.log(closure.sigma) - math.log(closure.k) - 4 * closure.log_K_c
        assert math.log(-expected) == pytest.approx(log_rhs, abs=1e-10)
