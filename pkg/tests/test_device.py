import numpy as np
import pytest

from mtjsim import (CONSTANTS, ConfigurationError, DemagTensor, DeviceParams,
                    anisotropy_field, conductance, demag_factors, energy,
                    magnetic_energy, num_spins, retention_lifetime)
from mtjsim.constants import SECONDS_PER_HOUR, SECONDS_PER_YEAR

from conftest import random_unit_vectors

# Frozen from an independent quadrature of the cylinder magnetometric
# integral (cross-checked by a 2e7-pair Monte Carlo of the surface-charge
# energy, which gave 0.8975 +- 0.0046).
NZ_TABLE_DISK = 0.900435
# Aspect ratio t/d at which all three cylinder factors equal 1/3.
EQUAL_FACTOR_ASPECT = 0.906476


class TestDemagFactors:
    def test_table_disk_factors(self, table_device):
        n = demag_factors(table_device)
        assert n.n_z == pytest.approx(NZ_TABLE_DISK, abs=1e-3)
        assert n.n_x == n.n_y
        assert n.n_x == pytest.approx((1.0 - NZ_TABLE_DISK) / 2.0, abs=1e-3)

    def test_factors_sum_to_one(self, table_device):
        n = demag_factors(table_device)
        assert n.n_x + n.n_y + n.n_z == pytest.approx(1.0, abs=1e-6)

    def test_equal_axis_cylinder_is_isotropic(self):
        d = 50e-9
        dev = DeviceParams(axis_a=d, axis_b=d, thickness=EQUAL_FACTOR_ASPECT * d)
        n = demag_factors(dev)
        for v in (n.n_x, n.n_y, n.n_z):
            assert v == pytest.approx(1.0 / 3.0, abs=2e-3)

    def test_thin_film_limit(self):
        dev = DeviceParams(axis_a=40e-9, axis_b=40e-9, thickness=4e-12)
        n = demag_factors(dev)
        assert n.n_z > 0.999
        assert n.n_x == pytest.approx(0.0, abs=5e-4)

    def test_elongated_axis_has_smaller_factor(self):
        n = demag_factors(DeviceParams(axis_a=80e-9, axis_b=40e-9))
        assert n.n_x < n.n_y < n.n_z

    def test_sum_rule_over_random_geometries(self):
        rng = np.random.default_rng(11)
        for _ in range(100):
            a = rng.uniform(10e-9, 200e-9)
            b = rng.uniform(10e-9, 200e-9)
            t = rng.uniform(0.02, 2.0) * min(a, b)
            n = demag_factors(DeviceParams(axis_a=a, axis_b=b, thickness=t))
            assert n.n_x + n.n_y + n.n_z == pytest.approx(1.0, abs=1e-6)
            assert 0.0 <= min(n.n_x, n.n_y, n.n_z)
            assert max(n.n_x, n.n_y, n.n_z) <= 1.0

    def test_rejects_bad_geometry(self):
        with pytest.raises(ConfigurationError):
            DeviceParams(axis_a=-40e-9)
        with pytest.raises(ConfigurationError):
            DeviceParams(thickness=0.0)


class TestAnisotropyField:
    def test_table_value(self, table_device):
        # closed form 2 E_B / (mu_0 M_s V)
        expected = 2.0 * table_device.e_b / (
            CONSTANTS.mu_0 * table_device.m_s * table_device.volume)
        h_k = anisotropy_field(table_device)
        assert h_k == pytest.approx(expected, rel=1e-12)
        assert h_k == pytest.approx(1.10e5, rel=5e-3)

    def test_linear_in_barrier(self, table_device):
        doubled = DeviceParams(e_b=2 * table_device.e_b)
        assert anisotropy_field(doubled) == pytest.approx(
            2 * anisotropy_field(table_device), rel=1e-12)

    def test_zero_barrier(self):
        assert anisotropy_field(DeviceParams(e_b=0.0)) == 0.0

    def test_barrier_round_trip(self, table_device):
        h_k = anisotropy_field(table_device)
        e_b = 0.5 * CONSTANTS.mu_0 * table_device.m_s * h_k * table_device.volume
        assert e_b == pytest.approx(table_device.e_b, rel=1e-12)

    def test_zero_ms_rejected(self):
        with pytest.raises(ConfigurationError):
            anisotropy_field(DeviceParams(m_s=0.0))


class TestNumSpins:
    def test_table_value(self, table_device):
        expected = table_device.m_s * table_device.volume / CONSTANTS.mu_b
        n_s = num_spins(table_device)
        assert n_s == pytest.approx(expected, rel=1e-12)
        assert n_s == pytest.approx(2.03e5, rel=5e-3)

    def test_linear_in_volume(self, table_device):
        bigger = DeviceParams(thickness=2 * table_device.thickness)
        assert num_spins(bigger) == pytest.approx(2 * num_spins(table_device), rel=1e-12)

    def test_zero_ms(self):
        assert num_spins(DeviceParams(m_s=0.0)) == 0.0


class TestConductance:
    def test_endpoints(self, table_device):
        assert conductance(np.array([1.0, 0, 0]), table_device) == pytest.approx(1.0e-3)
        assert conductance(np.array([-1.0, 0, 0]), table_device) == pytest.approx(0.5e-3)

    def test_midpoint(self, table_device):
        g = conductance(np.array([0.0, 1.0, 0.0]), table_device)
        assert g == pytest.approx(0.75e-3, rel=1e-12)

    def test_bounded(self, table_device):
        m = random_unit_vectors(np.random.default_rng(0), 1000)
        g = conductance(m, table_device)
        assert np.all(g >= table_device.g_ap - 1e-18)
        assert np.all(g <= table_device.g_p + 1e-18)

    def test_reflection_symmetry(self, table_device):
        # theta <-> pi - theta pairs sum to G_P + G_AP
        m = random_unit_vectors(np.random.default_rng(1), 500)
        reflected = m.copy()
        reflected[:, 0] *= -1
        total = conductance(m, table_device) + conductance(reflected, table_device)
        assert np.allclose(total, table_device.g_p + table_device.g_ap, rtol=1e-12)

    def test_conductance_ordering_enforced(self):
        with pytest.raises(ConfigurationError):
            DeviceParams(g_p=0.5e-3, g_ap=1.0e-3)


class TestEnergy:
    def test_barrier_top(self, table_device):
        assert energy(np.pi / 2, table_device) == pytest.approx(
            31.44 * CONSTANTS.k_b * 300.0, rel=1e-12)

    def test_minima(self, table_device):
        assert energy(0.0, table_device) == 0.0
        assert energy(np.pi, table_device) == pytest.approx(0.0, abs=1e-40)

    def test_half_barrier(self, table_device):
        assert energy(np.pi / 4, table_device) == pytest.approx(
            table_device.e_b / 2, rel=1e-12)

    def test_maximum_is_barrier(self, table_device):
        th = np.linspace(0, np.pi, 1001)
        assert energy(th, table_device).max() == pytest.approx(table_device.e_b, rel=1e-9)


class TestMagneticEnergy:
    def test_isotropic_demag_reduces_to_uniaxial(self, table_device, iso_demag):
        m = random_unit_vectors(np.random.default_rng(3), 200)
        e = magnetic_energy(m, table_device, iso_demag)
        const = (0.5 * CONSTANTS.mu_0 * table_device.m_s**2
                 * table_device.volume / 3.0)
        uniaxial = table_device.e_b * (1.0 - m[:, 0] ** 2)
        assert np.allclose(e, uniaxial + const, rtol=1e-12)


class TestRetention:
    def test_table_barrier_lifetime(self, table_device):
        tau = retention_lifetime(table_device, attempt_time=1e-9)
        assert tau == pytest.approx(1e-9 * np.exp(31.44), rel=1e-12)
        hours = tau / SECONDS_PER_HOUR
        assert abs(hours - 12.4) / 12.4 < 0.05

    def test_forty_kt_lifetime(self, table_device):
        dev = DeviceParams(e_b=40.0 * CONSTANTS.k_b * 300.0)
        years = retention_lifetime(dev, 1e-9) / SECONDS_PER_YEAR
        assert abs(years - 7.0) / 7.0 < 0.10

    def test_zero_barrier(self):
        dev = DeviceParams(e_b=0.0)
        assert retention_lifetime(dev, 2e-9) == pytest.approx(2e-9, rel=1e-12)

    def test_attempt_time_validation(self, table_device):
        with pytest.raises(ConfigurationError):
            retention_lifetime(table_device, attempt_time=0.0)


class TestDeviceValidation:
    def test_volume(self, table_device):
        assert table_device.volume == pytest.approx(
            np.pi / 4 * 40e-9 * 40e-9 * 1.5e-9, rel=1e-12)

    def test_eta_bounds(self):
        with pytest.raises(ConfigurationError):
            DeviceParams(eta=0.0)
        with pytest.raises(ConfigurationError):
            DeviceParams(eta=1.5)

    def test_pinned_layer_must_be_unit(self):
        with pytest.raises(ConfigurationError):
            DeviceParams(m_p=np.array([2.0, 0.0, 0.0]))

    def test_isotropic_tensor(self):
        n = DemagTensor.isotropic()
        assert n.n_x == n.n_y == n.n_z == pytest.approx(1 / 3)
