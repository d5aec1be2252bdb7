import math

import numpy as np
import pytest

from gravidec.bath import OhmicBath, bose_occupation, spectral_density
from gravidec.units import CODATA2018


class TestSpectralDensity:
    def test_reference_frequency_reads_off_coupling(self):
        bath = OhmicBath(coupling=0.05, omega0=1.0)
        assert spectral_density(bath, 1.0) == pytest.approx(0.05, rel=1e-15)

    def test_zero_frequency(self):
        bath = OhmicBath(coupling=0.05, omega0=1.0)
        assert spectral_density(bath, 0.0) == 0.0

    def test_direct_substitution(self):
        bath = OhmicBath(coupling=0.01, omega0=1.0)
        assert spectral_density(bath, 2.0) == pytest.approx(0.02, rel=1e-15)

    def test_linear_in_omega_any_reference(self):
        for omega0 in (1.0, 2.7e5, 1e9):
            bath = OhmicBath(coupling=0.3, omega0=omega0)
            for omega in (0.1 * omega0, omega0, 13.0 * omega0):
                assert spectral_density(bath, 2 * omega) == pytest.approx(
                    2 * spectral_density(bath, omega), rel=1e-14
                )

    def test_cutoff_suppression(self):
        plain = OhmicBath(coupling=1.0, omega0=1.0)
        cut = OhmicBath(coupling=1.0, omega0=1.0, cutoff=5.0)
        assert spectral_density(cut, 10.0) == pytest.approx(
            spectral_density(plain, 10.0) * math.exp(-2.0), rel=1e-14
        )

    def test_negative_omega_rejected(self):
        bath = OhmicBath(coupling=1.0, omega0=1.0)
        with pytest.raises(ValueError):
            spectral_density(bath, -1.0)

    def test_parameter_validation(self):
        with pytest.raises(ValueError):
            OhmicBath(coupling=-0.1, omega0=1.0)
        with pytest.raises(ValueError):
            OhmicBath(coupling=0.1, omega0=0.0)
        with pytest.raises(ValueError):
            OhmicBath(coupling=0.1, omega0=1.0, cutoff=-2.0)


class TestBoseOccupation:
    def kT_omega(self, x):
        # omega such that hbar omega / k_B T = x at T = 1 K
        return x * CODATA2018.k_B / CODATA2018.hbar

    def test_unit_thermal_ratio(self):
        assert bose_occupation(self.kT_omega(1.0), 1.0) == pytest.approx(
            1.0 / (math.e - 1.0), rel=1e-12
        )
        assert bose_occupation(self.kT_omega(1.0), 1.0) == pytest.approx(0.58198, rel=1e-5)

    def test_double_thermal_ratio(self):
        assert bose_occupation(self.kT_omega(2.0), 1.0) == pytest.approx(0.15652, rel=1e-4)

    def test_zero_temperature(self):
        assert bose_occupation(1e12, 0.0) == 0.0

    def test_zero_omega_rejected(self):
        with pytest.raises(ValueError):
            bose_occupation(0.0, 1.0)

    def test_negative_temperature_rejected(self):
        with pytest.raises(ValueError):
            bose_occupation(1e12, -1.0)

    def test_monotonic_in_omega_and_temperature(self):
        omegas = np.geomspace(1e9, 1e14, 40)
        occ = [bose_occupation(w, 1.0) for w in omegas]
        assert all(a > b for a, b in zip(occ, occ[1:]))
        temps = np.geomspace(0.01, 100.0, 40)
        occ_t = [bose_occupation(1e12, T) for T in temps]
        assert all(a < b for a, b in zip(occ_t, occ_t[1:]))

    def test_high_temperature_expansion(self):
        # n = 1/x - 1/2 + x/12 - O(x^3) for x = hbar w / k_B T
        for x in np.geomspace(1e-4, 0.1, 25):
            n = bose_occupation(self.kT_omega(x), 1.0)
            assert abs(n - 1.0 / x + 0.5) <= 1.01 * x / 12.0

    def test_coth_identity(self):
        # 1 + 2 n(w, T) = coth(hbar w / 2 k_B T)
        for x in np.geomspace(1e-3, 20.0, 60):
            lhs = 1.0 + 2.0 * bose_occupation(self.kT_omega(x), 1.0)
            assert lhs == pytest.approx(1.0 / math.tanh(x / 2.0), rel=1e-12)
