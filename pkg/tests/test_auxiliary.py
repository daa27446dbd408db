import math

import numpy as np
import pytest

from blowup_lab.auxiliary import (
    KernelConfig,
    KernelQuadrature,
    ball_volume,
    bracket,
    critical_kernel_orders,
    eta_eval,
    fit_kernel_bounds,
    fundamental_identity_v,
    phi_eval,
    sinhc,
    solve_fundamental_pair,
    sphere_area,
    verify_fundamental_bounds,
    xi_eval,
)
from blowup_lab.damping import DampingProfile


class TestPhi:
    def test_point_values(self):
        assert phi_eval(1, 0.0) == 2.0
        assert abs(phi_eval(2, 0.0) - 2.0 * math.pi) < 1e-12

    def test_closed_form_n3(self):
        rho = np.linspace(1e-3, 10.0, 200)
        exact = 4.0 * math.pi * np.sinh(rho) / rho
        rel = np.abs(phi_eval(3, rho) - exact) / exact
        assert np.max(rel) < 1e-8

    def test_even_and_positive(self):
        rho = np.linspace(0.0, 8.0, 30)
        for n in (1, 2, 3, 4):
            plus = np.atleast_1d(phi_eval(n, rho))
            minus = np.atleast_1d(phi_eval(n, -rho))
            assert np.allclose(plus, minus, rtol=1e-13)
            assert np.all(plus > 0)

    @pytest.mark.parametrize("n", [2, 3, 4])
    def test_is_laplace_eigenfunction(self, n):
        # discrete radial Laplacian residual |(Phi'' + (n-1)Phi'/rho) - Phi| / Phi
        h = 1e-3
        rho = np.arange(0.0, 10.0 + h / 2, h)
        vals = phi_eval(n, rho)
        lap = np.empty_like(vals)
        lap[1:-1] = (vals[2:] - 2 * vals[1:-1] + vals[:-2]) / h ** 2
        lap[1:-1] += (n - 1) * (vals[2:] - vals[:-2]) / (2 * h * rho[1:-1])
        lap[0] = n * 2.0 * (vals[1] - vals[0]) / h ** 2  # symmetric ghost at the origin
        rel = np.abs(lap[:-1] - vals[:-1]) / vals[:-1]
        assert np.max(rel) < 1e-4


class TestKernels:
    def test_xi_closed_form_at_origin(self):
        cfg = KernelConfig(lambda0=1.0, R=1.0, order=0.0)
        expected = 2.0 * math.pi * (1.0 - math.exp(-1.0))
        assert abs(xi_eval(cfg, 2, 0.0, 0.0) - expected) / expected < 1e-12

    def test_eta_equals_xi_like_integral_at_s_equals_t(self):
        cfg = KernelConfig(lambda0=1.0, R=1.0, order=0.5, quad_nodes=48)
        lam, w = cfg.nodes()
        for t in (0.0, 2.0, 7.0):
            direct = float(np.sum(w * np.exp(-lam * (t + 1.0)) * phi_eval(2, lam * 0.7)))
            assert abs(eta_eval(cfg, 2, t, t, 0.7) - direct) < 1e-13 * max(1.0, direct)

    def test_eta_closed_form_origin(self):
        cfg = KernelConfig(lambda0=1.0, R=1.0, order=0.0)
        expected = 2.0 * math.pi * (1.0 - math.exp(-1.0))
        assert abs(eta_eval(cfg, 2, 0.0, 0.0, 0.0) - expected) / expected < 1e-12

    def test_xi_transient_decays_like_inverse_t(self):
        # xi(t, 0) tends to a positive constant; the transient part is the
        # Watson tail ~ Phi(0) / (2(2t+R)) for order zero
        cfg = KernelConfig(lambda0=1.0, R=1.0, order=0.0)
        lam, w = cfg.nodes()
        limit = float(np.sum(w * 0.5 * np.exp(-lam * cfg.R) * phi_eval(2, 0.0 * lam)))
        for t in (20.0, 40.0, 80.0):
            transient = xi_eval(cfg, 2, t, 0.0) - limit
            envelope = math.pi / (2.0 * t + cfg.R)
            assert 0.5 < transient / envelope < 2.0

    def test_positive_and_decreasing_in_t(self):
        cfg = KernelConfig(lambda0=1.0, R=1.0, order=0.5)
        ts = np.linspace(0.0, 30.0, 16)
        xis = np.array([xi_eval(cfg, 3, t, 0.5) for t in ts])
        etas = np.array([eta_eval(cfg, 3, t, 0.0, 0.5) for t in ts])
        assert np.all(xis > 0) and np.all(etas > 0)
        assert np.all(np.diff(xis) < 0)
        assert np.all(np.diff(etas) < 0)

    def test_series_patch_continuity(self):
        # direct sinh(z)/z against the series patch at the switch point
        for z in (0.99e-4, 1.01e-4):
            assert abs(sinhc(z) - math.sinh(z) / z) < 1e-12

    def test_eta_continuous_across_switch(self):
        cfg = KernelConfig(lambda0=1.0, R=1.0, order=0.0)
        t = 1.0
        below = eta_eval(cfg, 2, t, t - 0.9e-4, 0.3)
        above = eta_eval(cfg, 2, t, t - 1.1e-4, 0.3)
        assert abs(below - above) / above < 1e-7

    def test_eta_requires_ordered_times(self):
        cfg = KernelConfig()
        with pytest.raises(ValueError):
            eta_eval(cfg, 2, 1.0, 2.0, 0.0)

    def test_quad_nodes_validation(self):
        with pytest.raises(ValueError):
            KernelConfig(quad_nodes=3)
        with pytest.raises(ValueError):
            KernelConfig(order=-1.0)

    def test_singular_order_substitution(self):
        # r = -1/2 at the origin has the closed form
        # 2 pi int_0^1 e^(-lam) lam^(-1/2) dlam = 2 pi sqrt(pi) erf(1)
        cfg = KernelConfig(lambda0=1.0, R=1.0, order=-0.5, quad_nodes=64)
        ref = 2.0 * math.pi * math.sqrt(math.pi) * math.erf(1.0)
        val = xi_eval(cfg, 2, 0.0, 0.0)
        assert abs(val - ref) / ref < 1e-9


class TestKernelBounds:
    def test_singleton_grid_reduces_to_point_value(self):
        cfg = KernelConfig(lambda0=1.0, R=1.0, order=0.5)
        fit = fit_kernel_bounds(cfg, 3, [0.0], x_points=1)
        assert fit.a0 == xi_eval(cfg, 3, 0.0, 0.0)

    @pytest.mark.parametrize("n,q", [(2, 2), (2, 3), (3, 2), (3, 3)])
    def test_all_constants_positive(self, n, q):
        r = (n - 1) / 2.0 - 1.0 / q
        cfg = KernelConfig(lambda0=1.0, R=1.0, order=r)
        fit = fit_kernel_bounds(cfg, n, np.linspace(0.0, 50.0, 6), x_points=5)
        assert fit.all_positive(), fit

    def test_shrinking_lambda0_keeps_a0_positive(self):
        for lam0 in (1.0, 0.5, 0.25):
            cfg = KernelConfig(lambda0=lam0, R=1.0, order=0.5)
            fit = fit_kernel_bounds(cfg, 3, np.linspace(0.0, 10.0, 4), x_points=3)
            assert fit.a0 > 0

    def test_upper_bound_order_restriction(self):
        cfg = KernelConfig(order=-0.5)
        with pytest.raises(ValueError):
            fit_kernel_bounds(cfg, 4, [1.0])

    def test_bracket(self):
        assert bracket(0.0) == 3.0
        assert bracket(-2.0) == 5.0

    def test_orders_for_critical_functionals(self):
        r1, r2 = critical_kernel_orders(3, 2.0, 2.0)
        assert r1 == r2 == 0.5
        r1, r2 = critical_kernel_orders(3, 3.0, 2.0)
        assert r1 == 0.5 and abs(r2 - (1.0 - 1.0 / 3.0 + 0.01)) < 1e-12
        with pytest.raises(ValueError):
            critical_kernel_orders(3, 2.0, 3.0)


class TestFundamentalPair:
    def test_undamped_matches_hyperbolic_solutions(self):
        grid = np.arange(0.0, 10.0 + 1e-9, 1e-3)
        pair = solve_fundamental_pair(DampingProfile.zero(), 1.0, 0.0, grid)
        rel1 = np.max(np.abs(pair.y1 - np.cosh(grid)) / np.cosh(grid))
        sinh_ref = np.maximum(np.sinh(grid), 1e-300)
        rel2 = np.max(np.abs(pair.y2 - np.sinh(grid)) / sinh_ref)
        assert rel1 < 1e-8 and rel2 < 1e-8

    def test_initial_conditions_exact(self):
        grid = np.linspace(2.0, 4.0, 201)
        pair = solve_fundamental_pair(DampingProfile.polynomial_tail(1.0, 2.0), 1.5, 2.0, grid)
        assert pair.y1[0] == 1.0 and pair.dy1[0] == 0.0
        assert pair.y2[0] == 0.0 and pair.dy2[0] == 1.0

    def test_step_size_guard(self):
        with pytest.raises(ValueError):
            solve_fundamental_pair(DampingProfile.zero(), 5.0, 0.0, np.linspace(0, 1, 11))

    def test_identity_v(self):
        val = fundamental_identity_v(DampingProfile.polynomial_tail(1.0, 2.0), 1.0, 0.0, 2.0)
        assert abs(val + 1.0) < 1e-6

    @pytest.mark.parametrize("lam", [0.5, 1.0, 2.0])
    def test_bounds_and_identity_iv(self, lam):
        prof = DampingProfile.polynomial_tail(1.0, 2.0)
        h = min(1e-3, 0.05 / lam)
        grid = np.linspace(0.0, 10.0, int(round(10.0 / h)) + 1)
        pair = solve_fundamental_pair(prof, lam, 0.0, grid)
        report = verify_fundamental_bounds(pair, prof, lam, 0.0)
        assert report.slack1_min >= -1e-6
        assert report.slack2_min >= -1e-6
        assert report.identity4_residual <= 1e-6
        assert report.ok()

    def test_zero_damping_bounds_tight(self):
        grid = np.arange(0.0, 5.0 + 1e-9, 1e-3)
        pair = solve_fundamental_pair(DampingProfile.zero(), 1.0, 0.0, grid)
        report = verify_fundamental_bounds(pair, DampingProfile.zero(), 1.0, 0.0)
        # with no damping the envelopes are the exact solutions
        assert abs(report.slack1_min) < 1e-10
        assert abs(report.slack2_min) < 1e-10

    def test_small_lambda_envelope_linear_limit(self):
        # sinh(lambda tau)/lambda -> tau as lambda -> 0+, via the series patch
        tau = np.linspace(0.0, 3.0, 7)
        lam = 1e-9
        env = tau * sinhc(lam * tau)
        assert np.allclose(env, tau, rtol=0, atol=1e-15)


def test_geometry_helpers():
    assert abs(sphere_area(0) - 2.0) < 1e-15          # two points
    assert abs(sphere_area(1) - 2 * math.pi) < 1e-14
    assert abs(sphere_area(2) - 4 * math.pi) < 1e-14
    assert abs(ball_volume(3) - 4 * math.pi / 3) < 1e-14
