import math

import numpy as np
import pytest

from sgsim.core import DomainError, PRESETS, SGConfig, derive_kinematics
from sgsim.wavepacket import (
    Spin,
    amplitude,
    complex_width,
    density_z_profile,
    packet_at,
    packet_in_magnet,
    z_factor,
)

from helpers import gauss_legendre_box_integral, random_config


class TestPacketAt:
    def test_set3_exit_center(self):
        state = packet_at(PRESETS["set3"], Spin.PLUS, 0.0)
        assert state.center[2] == pytest.approx(0.0011537405218221985, rel=1e-12)

    def test_centers_mirror(self):
        cfg = PRESETS["set3"]
        for t in (0.0, 1e-5, 0.01):
            plus = packet_at(cfg, Spin.PLUS, t)
            minus = packet_at(cfg, Spin.MINUS, t)
            assert plus.center[2] == -minus.center[2]
            assert plus.center[1] == minus.center[1] == pytest.approx(cfg.v_y * (cfg.tau + t))

    def test_no_gradient_no_deflection(self):
        cfg = SGConfig(b=0.0, tau=1e-4, sigma0=1e-5, v_y=1e4)
        for t in (0.0, 1e-3, 0.1):
            assert packet_at(cfg, Spin.PLUS, t).center[2] == 0.0
            assert packet_at(cfg, Spin.MINUS, t).center[2] == 0.0

    def test_set3_width_far_field(self):
        state = packet_at(PRESETS["set3"], Spin.PLUS, 0.1)
        assert state.width == pytest.approx(3.1513959042489543, rel=1e-12)

    def test_width_growth_monotone(self):
        cfg = PRESETS["set2"]
        widths = [packet_at(cfg, Spin.PLUS, t).width for t in np.geomspace(1e-7, 1.0, 40)]
        assert all(a < b for a, b in zip(widths, widths[1:]))

    def test_width_law(self):
        cfg = PRESETS["set2"]
        c = cfg.constants
        t_total = cfg.tau + 3e-3
        spread = c.hbar * t_total / (2 * c.mass * cfg.sigma0 ** 2)
        assert abs(complex_width(cfg, t_total)) == pytest.approx(
            cfg.sigma0 * math.hypot(1.0, spread), rel=1e-14)

    def test_negative_time_rejected(self):
        with pytest.raises(DomainError):
            packet_at(PRESETS["set3"], Spin.PLUS, -1e-6)


class TestAmplitude:
    def test_normalization_random_configs(self):
        rng = np.random.default_rng(42)
        for _ in range(20):
            cfg = random_config(rng)
            state = packet_at(cfg, Spin.PLUS if rng.random() < 0.5 else Spin.MINUS,
                              float(10 ** rng.uniform(-6, -2)))

            def density(x, y, z):
                return np.abs(amplitude(state, x, y, z)) ** 2

            total = gauss_legendre_box_integral(density, state.center, 10.0 * state.width)
            assert total == pytest.approx(1.0, abs=1e-8), cfg

    def test_peak_density_value(self):
        state = packet_at(PRESETS["set3"], Spin.PLUS, 1e-4)
        cx, cy, cz = state.center
        peak = float(np.abs(amplitude(state, cx, cy, cz)) ** 2)
        assert peak == pytest.approx((2 * math.pi * state.width ** 2) ** -1.5, rel=1e-12)

    def test_peak_is_max_along_axis_lines(self):
        state = packet_at(PRESETS["set2"], Spin.MINUS, 5e-4)
        cx, cy, cz = state.center
        peak = abs(amplitude(state, cx, cy, cz))
        span = np.linspace(-4, 4, 201) * state.width
        assert np.all(np.abs(amplitude(state, cx + span, cy, cz)) <= peak + 1e-18)
        assert np.all(np.abs(amplitude(state, cx, cy + span, cz)) <= peak + 1e-18)
        assert np.all(np.abs(amplitude(state, cx, cy, cz + span)) <= peak + 1e-18)

    def test_mirror_symmetry_pointwise(self):
        cfg = PRESETS["set3"]
        plus = packet_at(cfg, Spin.PLUS, 2e-4)
        minus = packet_at(cfg, Spin.MINUS, 2e-4)
        rng = np.random.default_rng(3)
        pts = rng.normal(scale=3 * plus.width, size=(50, 3))
        cy = plus.center[1]
        rho_plus = np.abs(amplitude(plus, pts[:, 0], cy + pts[:, 1], pts[:, 2])) ** 2
        rho_minus = np.abs(amplitude(minus, pts[:, 0], cy + pts[:, 1], -pts[:, 2])) ** 2
        np.testing.assert_allclose(rho_plus, rho_minus, rtol=1e-14)

    def test_density_is_gaussian_with_width_variance(self):
        # evaluated-amplitude modulus vs closed-form marginal along z
        cfg = PRESETS["set2"]
        state = packet_at(cfg, Spin.PLUS, 1e-3)
        cx, cy, _ = state.center
        z = state.center[2] + np.linspace(-5, 5, 101) * state.width
        from_amplitude = np.abs(amplitude(state, cx, cy, z)) ** 2
        var = state.width ** 2
        closed = (
            np.exp(-((z - state.center[2]) ** 2) / (2 * var)) / (2 * math.pi * var) ** 1.5
        )
        np.testing.assert_allclose(from_amplitude, closed, rtol=1e-12)

    def test_z_factor_matches_marginal(self):
        state = packet_at(PRESETS["set3"], Spin.MINUS, 1e-3)
        z = state.center[2] + np.linspace(-6, 6, 301) * state.width
        np.testing.assert_allclose(
            np.abs(z_factor(state, z)) ** 2,
            density_z_profile(state, z),
            rtol=1e-12,
        )


class TestDensityProfile:
    def test_normalized_on_wide_grid(self):
        state = packet_at(PRESETS["set1"], Spin.PLUS, 1e-3)
        z = state.center[2] + np.linspace(-8, 8, 1601) * state.width
        rho = density_z_profile(state, z)
        assert np.trapezoid(rho, z) == pytest.approx(1.0, abs=1e-6)

    def test_identical_profiles_without_gradient(self):
        cfg = SGConfig(b=0.0, tau=1e-4, sigma0=1e-5, v_y=1e4)
        z = np.linspace(-1e-3, 1e-3, 501)
        rho_p = density_z_profile(packet_at(cfg, Spin.PLUS, 0.01), z)
        rho_m = density_z_profile(packet_at(cfg, Spin.MINUS, 0.01), z)
        np.testing.assert_array_equal(rho_p, rho_m)

    def test_grid_validation(self):
        state = packet_at(PRESETS["set3"], Spin.PLUS, 0.0)
        with pytest.raises(DomainError):
            density_z_profile(state, np.array([]))
        with pytest.raises(DomainError):
            density_z_profile(state, np.array([0.0, -1.0]))
        with pytest.raises(DomainError):
            density_z_profile(state, np.array([0.0, np.inf]))


class TestInMagnet:
    def test_interpolated_center_follows_uniform_acceleration(self):
        cfg = PRESETS["set3"]
        c = cfg.constants
        accel = c.moment * cfg.b / c.mass
        for t in (0.2 * cfg.tau, 0.5 * cfg.tau, cfg.tau):
            state = packet_in_magnet(cfg, Spin.PLUS, t)
            assert state.center[2] == pytest.approx(0.5 * accel * t * t, rel=1e-12)

    def test_full_traversal_matches_exit_state(self):
        cfg = PRESETS["set3"]
        inside = packet_in_magnet(cfg, Spin.MINUS, cfg.tau)
        exit_state = packet_at(cfg, Spin.MINUS, 0.0)
        assert inside.center == exit_state.center
        assert inside.complex_width == exit_state.complex_width

    def test_bounds(self):
        cfg = PRESETS["set3"]
        with pytest.raises(DomainError):
            packet_in_magnet(cfg, Spin.PLUS, 0.0)
        with pytest.raises(DomainError):
            packet_in_magnet(cfg, Spin.PLUS, 2 * cfg.tau)


def test_derived_kinematics_consistency():
    cfg = PRESETS["set3"]
    kin = derive_kinematics(cfg)
    state = packet_at(cfg, Spin.PLUS, 0.0)
    assert state.k_z == kin.k_z and state.k_y == kin.k_y and state.v_z == kin.v_z
