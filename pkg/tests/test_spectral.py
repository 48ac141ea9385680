import math

import numpy as np
import pytest

from nonmarkov import spectral
from nonmarkov.errors import DegenerateArgument
from nonmarkov.spectral import BathSpec, SpectralDensity


def sd_ohmic(eta=0.1, s=1.0):
    return SpectralDensity(s=s, eta=eta, omega_c=5.0)


def test_spectral_density_validation():
    with pytest.raises(ValueError):
        SpectralDensity(s=0.0, eta=0.1, omega_c=5.0)
    with pytest.raises(ValueError):
        SpectralDensity(s=1.0, eta=-0.1, omega_c=5.0)
    with pytest.raises(ValueError):
        SpectralDensity(s=1.0, eta=0.1, omega_c=0.0)


def test_j_omega_closed_form():
    sd = sd_ohmic(eta=0.2, s=2.0)
    w = 1.7
    expect = 2.0 * math.pi * 0.2 * w * (w / 5.0) * math.exp(-w / 5.0)
    assert abs(spectral.j_omega(sd, w) - expect) < 1e-14
    assert spectral.j_omega(sd, -1.0) == 0.0
    assert spectral.j_omega(sd, 0.0) == 0.0


def test_j_omega_array():
    sd = sd_ohmic()
    w = np.array([-1.0, 0.0, 1.0, 2.0])
    out = spectral.j_omega(sd, w)
    assert out.shape == w.shape
    assert out[0] == 0.0 and out[1] == 0.0
    assert out[2] == pytest.approx(spectral.j_omega(sd, 1.0))


def test_bose_occupation():
    bath = BathSpec(theta=1.0)
    assert spectral.bose_occupation(bath, 1.0) == pytest.approx(
        1.0 / (math.e - 1.0)
    )
    assert spectral.bose_occupation(BathSpec(theta=0.0), 1.0) == 0.0
    with pytest.raises(DegenerateArgument):
        spectral.bose_occupation(bath, 0.0)


def test_bose_occupation_no_overflow_at_low_temperature():
    bath = spectral.bath_from_kelvin(0.05)
    with np.errstate(over="raise"):
        vals = spectral.bose_occupation(bath, np.linspace(0.01, 200.0, 50))
    assert np.all(np.isfinite(vals))


def test_kelvin_conversion():
    # theta = (k_B/hbar) T / omega0 = 2.08362 T at the default 10 GHz
    bath = spectral.bath_from_kelvin(0.5)
    assert bath.theta == pytest.approx(1.0418218912818233, rel=1e-12)


def test_critical_coupling_closed_form():
    for s, target in ((0.5, 0.112838), (1.0, 0.2), (2.0, 0.2), (3.0, 0.1)):
        eta_c = spectral.critical_coupling(sd_ohmic(s=s))
        assert eta_c == pytest.approx(target, rel=1e-5)


def test_lamb_shift_total_weight():
    # Delta(0) = -int J/(2 pi w) dw = -eta omega_c Gamma(s)
    for s in (0.5, 1.0, 2.0):
        sd = sd_ohmic(eta=0.15, s=s)
        expect = -0.15 * 5.0 * math.gamma(s)
        assert spectral.lamb_shift(sd, 0.0) == pytest.approx(expect, rel=1e-7)


def test_lamb_shift_zero_coupling():
    assert spectral.lamb_shift(sd_ohmic(eta=0.0), 1.0) == 0.0


def test_localized_mode_threshold_sides():
    assert spectral.localized_mode(sd_ohmic(eta=0.1)) is None  # 0.5 eta_c
    lm = spectral.localized_mode(sd_ohmic(eta=0.3))  # 1.5 eta_c
    assert lm is not None
    assert lm.omega_b < 0.0
    assert 0.0 < lm.residue_z < 1.0


def test_localized_mode_pole_condition():
    sd = sd_ohmic(eta=0.3)
    lm = spectral.localized_mode(sd)
    residual = lm.omega_b - sd.omega0 - spectral.lamb_shift(sd, lm.omega_b)
    assert abs(residual) < 1e-8


def test_lamb_shift_interpolant_accuracy():
    sd = sd_ohmic(eta=0.3)
    spline = spectral.lamb_shift_interpolant(sd)
    for w in (0.3, 1.0, 2.5, 7.0):
        assert spline(w) == pytest.approx(spectral.lamb_shift(sd, w), abs=1e-6)
