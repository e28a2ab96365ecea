import numpy as np
import pytest

from mtjsim import (CONSTANTS, DemagTensor, DeviceParams, MagnetizationState,
                    RngStream, Segment, StepperConfig, anisotropy_field,
                    demag_factors, effective_field, llg_rhs,
                    llg_rhs_fixed_point, magnetic_energy, num_spins, run,
                    run_program, step_heun, thermal_field, thermal_sigma)
from mtjsim.errors import ConfigurationError

from conftest import random_unit_vectors


class TestThermalField:
    def test_sigma_closed_form(self, table_device):
        dt = 1e-12
        a = table_device.alpha
        expected = np.sqrt(a / (1 + a * a) * 2 * CONSTANTS.k_b * 300.0
                           / (CONSTANTS.gamma * CONSTANTS.mu_0
                              * table_device.m_s * table_device.volume * dt))
        assert thermal_sigma(table_device, dt) == pytest.approx(expected, rel=1e-12)

    def test_sigma_scaling_with_dt(self, table_device):
        assert thermal_sigma(table_device, 0.25e-12) == pytest.approx(
            2.0 * thermal_sigma(table_device, 1e-12), rel=1e-12)

    def test_zero_temperature(self, cold_device):
        assert thermal_sigma(cold_device, 1e-12) == 0.0
        h = thermal_field(cold_device, 1e-12, RngStream(0, 0))
        assert np.array_equal(h, np.zeros(3))

    def test_component_statistics(self, table_device):
        stream = RngStream(31, 0)
        draws = np.array([thermal_field(table_device, 1e-12, stream)
                          for _ in range(20000)])
        sigma = thermal_sigma(table_device, 1e-12)
        assert np.allclose(draws.mean(axis=0), 0.0, atol=4 * sigma / np.sqrt(20000))
        assert np.allclose(draws.std(axis=0), sigma, rtol=0.03)

    def test_bad_dt(self, table_device):
        with pytest.raises(ConfigurationError):
            thermal_sigma(table_device, 0.0)


class TestEffectiveField:
    def test_easy_axis_equilibrium(self, cold_device):
        demag = demag_factors(cold_device)
        m = np.array([1.0, 0.0, 0.0])
        h = effective_field(m, cold_device, demag)
        h_k = anisotropy_field(cold_device)
        assert h == pytest.approx([h_k - cold_device.m_s * demag.n_x, 0.0, 0.0])
        assert np.allclose(np.cross(m, h), 0.0, atol=1e-12)

    def test_hard_axis(self, cold_device):
        demag = demag_factors(cold_device)
        h = effective_field(np.array([0.0, 0.0, 1.0]), cold_device, demag)
        assert h == pytest.approx([0.0, 0.0, -cold_device.m_s * demag.n_z])

    def test_in_plane_45_degrees(self, table_device):
        demag = demag_factors(table_device)
        m = np.array([np.cos(np.pi / 4), np.sin(np.pi / 4), 0.0])
        h = effective_field(m, table_device, demag)
        h_k = anisotropy_field(table_device)
        expected = np.array([
            -table_device.m_s * demag.n_x * m[0] + h_k * m[0],
            -table_device.m_s * demag.n_y * m[1],
            0.0,
        ])
        assert np.allclose(h, expected, rtol=1e-12)

    def test_thermal_term_adds(self, table_device, iso_demag):
        m = np.array([1.0, 0.0, 0.0])
        th = np.array([10.0, -20.0, 5.0])
        assert np.allclose(
            effective_field(m, table_device, iso_demag, th)
            - effective_field(m, table_device, iso_demag), th, rtol=1e-12)


class TestRhs:
    def test_equilibrium_is_fixed_point(self, cold_device, iso_demag):
        m = np.array([1.0, 0.0, 0.0])
        h = effective_field(m, cold_device, iso_demag)
        assert np.allclose(llg_rhs(m, h, np.zeros(3), cold_device), 0.0, atol=1e-12)

    def test_undamped_precession_magnitude(self, zero_demag):
        dev = DeviceParams(alpha=0.0, t_k=0.0)
        theta = np.deg2rad(40.0)
        m = np.array([np.cos(theta), np.sin(theta), 0.0])
        h0 = 5e4
        h = np.array([h0, 0.0, 0.0])
        dmdt = llg_rhs(m, h, np.zeros(3), dev)
        assert np.linalg.norm(dmdt) == pytest.approx(
            CONSTANTS.gamma * h0 * np.sin(theta), rel=1e-12)

    def test_spin_torque_rate(self, table_device):
        # m perpendicular to I_s: torque magnitude is I_s/(q N_s)
        m = np.array([0.0, 1.0, 0.0])
        i_s = 50e-6 * np.array([1.0, 0.0, 0.0])
        dev = DeviceParams(alpha=0.0)
        dmdt = llg_rhs(m, np.zeros(3), i_s, dev)
        rate = 50e-6 / (CONSTANTS.q_e * num_spins(dev))
        assert np.linalg.norm(dmdt) == pytest.approx(rate, rel=1e-12)
        assert rate == pytest.approx(1.54e9, rel=5e-3)

    def test_tangency_on_random_states(self, table_device):
        rng = np.random.default_rng(8)
        m = random_unit_vectors(rng, 10_000)
        h = rng.normal(scale=1e5, size=(10_000, 3))
        i_s = 50e-6 * np.array([1.0, 0.0, 0.0])
        dmdt = llg_rhs(m, h, i_s, table_device)
        dots = np.sum(dmdt * m, axis=1)
        assert np.max(np.abs(dots) / np.linalg.norm(dmdt, axis=1)) < 1e-12

    def test_explicit_matches_implicit_fixed_point(self, table_device):
        rng = np.random.default_rng(12)
        m = random_unit_vectors(rng, 10_000)
        h = rng.normal(scale=2e5, size=(10_000, 3))
        i_s = 50e-6 * np.array([1.0, 0.0, 0.0])
        explicit = llg_rhs(m, h, i_s, table_device)
        implicit = llg_rhs_fixed_point(m, h, i_s, table_device)
        scale = np.linalg.norm(explicit, axis=1, keepdims=True)
        assert np.max(np.abs(explicit - implicit) / scale) < 1e-10

    def test_alpha_torque_flag(self, table_device):
        m = np.array([0.0, 1.0, 0.0])
        i_s = 50e-6 * np.array([1.0, 0.0, 0.0])
        with_term = llg_rhs(m, np.zeros(3), i_s, table_device, True)
        without = llg_rhs(m, np.zeros(3), i_s, table_device, False)
        diff = np.linalg.norm(with_term - without)
        assert diff == pytest.approx(
            table_device.alpha * 50e-6
            / (CONSTANTS.q_e * num_spins(table_device))
            / (1 + table_device.alpha**2), rel=1e-12)


class TestHeunStep:
    def test_equilibrium_fixed_point(self, cold_device, iso_demag, stepper):
        state = MagnetizationState(m=np.array([1.0, 0.0, 0.0]))
        out = step_heun(state, 0.0, cold_device, iso_demag, stepper, RngStream(0, 0))
        assert np.allclose(out.m, state.m, atol=1e-12)
        assert out.t == pytest.approx(stepper.dt)

    def test_norm_drift_without_renormalization(self, cold_device, zero_demag):
        cfg = StepperConfig(renormalize=False)
        state = MagnetizationState(m=np.array([-np.cos(0.3), np.sin(0.3), 0.0]))
        stream = RngStream(1, 0)
        for _ in range(200):
            new = step_heun(state, 100e-6, cold_device, zero_demag, cfg, stream)
            assert abs(np.linalg.norm(new.m) - 1.0) < 1e-4
            new.m /= np.linalg.norm(new.m)
            state = new

    def test_renormalized_norm_exact(self, table_device, iso_demag, stepper):
        state = MagnetizationState(m=np.array([-1.0, 0.0, 0.0]))
        stream = RngStream(2, 0)
        for _ in range(100):
            state = step_heun(state, 100e-6, table_device, iso_demag, stepper, stream)
        assert abs(np.linalg.norm(state.m) - 1.0) < 1e-12

    def test_step_sequence_matches_run_program(self, table_device, iso_demag, stepper):
        m0 = np.array([-1.0, 0.0, 0.0])
        state = MagnetizationState(m=m0.copy())
        stream = RngStream(7, 5)
        for _ in range(1500):
            state = step_heun(state, 80e-6, table_device, iso_demag, stepper, stream)
        res = run_program(m0[None, :], [Segment(1500e-12, 80e-6)], table_device,
                          iso_demag, stepper, [RngStream(7, 5)])
        assert np.array_equal(res.final_m[0], state.m)


class TestPrecession:
    def test_period_within_a_tenth_percent(self, zero_demag):
        dev = DeviceParams(alpha=0.0, t_k=0.0)
        h_k = anisotropy_field(dev)
        theta = np.deg2rad(30.0)
        cfg = StepperConfig(dt=1e-12, sample_every=1e-12)
        period = 2 * np.pi / (CONSTANTS.gamma * h_k * np.cos(theta))
        state = MagnetizationState(m=np.array([np.cos(theta), np.sin(theta), 0.0]))
        trace = run(state, [Segment(3.2 * period, 0.0)], dev, zero_demag, cfg,
                    RngStream(0, 0))
        # interpolated zero crossings of m_y give half periods
        y = trace.m[:, 1]
        t = trace.t
        idx = np.nonzero(np.signbit(y[1:]) != np.signbit(y[:-1]))[0]
        t_cross = t[idx] - y[idx] * (t[idx + 1] - t[idx]) / (y[idx + 1] - y[idx])
        measured = 2 * np.mean(np.diff(t_cross))
        assert abs(measured - period) / period < 1e-3

    def test_second_order_self_convergence(self, cold_device, zero_demag):
        # damped deterministic trajectory; quartering dt should cut the
        # deviation from a fine-step reference by ~16x
        theta = np.deg2rad(150.0)
        m0 = np.array([np.cos(theta), np.sin(theta), 0.1])
        m0 /= np.linalg.norm(m0)
        duration = 0.5e-9

        def final_m(dt):
            cfg = StepperConfig(dt=dt, sample_every=duration)
            res = run_program(m0[None, :], [Segment(duration, 0.0)], cold_device,
                              zero_demag, cfg, [RngStream(0, 0)])
            return res.final_m[0]

        ref = final_m(1e-12 / 64)
        err1 = np.linalg.norm(final_m(1e-12) - ref)
        err2 = np.linalg.norm(final_m(0.25e-12) - ref)
        ratio = err1 / err2
        assert 12.0 < ratio < 20.0


class TestEnergyDissipation:
    def test_zero_temperature_energy_never_increases(self, cold_device):
        demag = demag_factors(cold_device)
        theta = np.deg2rad(120.0)
        state = MagnetizationState(m=np.array([np.cos(theta), np.sin(theta), 0.0]))
        cfg = StepperConfig()
        trace = run(state, [Segment(5e-9, 0.0)], cold_device, demag, cfg,
                    RngStream(0, 0))
        e = magnetic_energy(trace.m, cold_device, demag)
        diffs = np.diff(e)
        assert np.all(diffs <= 1e-9 * cold_device.e_b)
        assert e[-1] < e[0]


class TestRun:
    def test_zero_program_relaxes_toward_ap(self, cold_device, iso_demag, stepper):
        theta = np.deg2rad(170.0)
        state = MagnetizationState(m=np.array([np.cos(theta), np.sin(theta), 0.0]))
        trace = run(state, [Segment(10e-9, 0.0)], cold_device, iso_demag, stepper,
                    RngStream(0, 0))
        e = magnetic_energy(trace.m, cold_device, iso_demag)
        assert np.all(np.diff(e) <= 1e-9 * cold_device.e_b)
        assert trace.theta[-1] > np.deg2rad(179.0)

    def test_single_pulse_stp_signature(self, cold_device, iso_demag, stepper):
        # theta dips during the pulse and partially recovers afterwards
        theta0 = np.pi - np.deg2rad(5.0)
        state = MagnetizationState(m=np.array([np.cos(theta0), np.sin(theta0), 0.0]))
        program = [Segment(1e-9, 100e-6), Segment(4e-9, 0.0)]
        trace = run(state, program, cold_device, iso_demag, stepper, RngStream(0, 0))
        i_on = trace.current > 0
        theta_pulse_end = trace.theta[np.nonzero(i_on)[0][-1]]
        assert theta_pulse_end < theta0 - np.deg2rad(5.0)
        assert trace.theta[-1] > theta_pulse_end + np.deg2rad(4.0)

    def test_identical_seed_identical_trace(self, table_device, iso_demag, stepper):
        program = [Segment(1e-9, 0.0), Segment(1e-9, 100e-6), Segment(1e-9, 0.0)]
        state = MagnetizationState(m=np.array([-1.0, 0.0, 0.0]))
        t1 = run(state, program, table_device, iso_demag, stepper, RngStream(5, 1))
        t2 = run(state, program, table_device, iso_demag, stepper, RngStream(5, 1))
        assert np.array_equal(t1.m, t2.m)
        assert np.array_equal(t1.conductance, t2.conductance)

    def test_trace_grid_and_current_column(self, cold_device, iso_demag):
        cfg = StepperConfig(dt=1e-12, sample_every=10e-12)
        state = MagnetizationState(m=np.array([-1.0, 0.0, 0.0]))
        program = [Segment(1e-9, 0.0), Segment(1e-9, 100e-6), Segment(1e-9, 0.0)]
        trace = run(state, program, cold_device, iso_demag, cfg, RngStream(0, 0))
        assert len(trace.t) == 301
        assert trace.t[0] == 0.0
        assert trace.t[-1] == pytest.approx(3e-9)
        on = trace.current > 0
        assert trace.t[on].min() == pytest.approx(1.01e-9)
        assert trace.t[on].max() == pytest.approx(2e-9)

    def test_empty_program_rejected(self, table_device, iso_demag, stepper):
        state = MagnetizationState(m=np.array([-1.0, 0.0, 0.0]))
        with pytest.raises(ConfigurationError):
            run(state, [], table_device, iso_demag, stepper, RngStream(0, 0))


class TestStepperConfigValidation:
    def test_dt_positive(self):
        with pytest.raises(ConfigurationError):
            StepperConfig(dt=0.0)

    def test_sample_not_below_dt(self):
        with pytest.raises(ConfigurationError):
            StepperConfig(dt=1e-12, sample_every=0.5e-12)

    def test_unit_norm_enforced(self):
        with pytest.raises(ConfigurationError):
            MagnetizationState(m=np.array([0.5, 0.0, 0.0]))
