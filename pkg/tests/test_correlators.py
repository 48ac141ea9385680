import math

import numpy as np
import pytest

from nonmarkov import correlators, spectral
from nonmarkov.correlators import InitialState
from nonmarkov.errors import DegenerateState
from nonmarkov.fluctuation import FluctuationTable
from nonmarkov.propagator import TimeGrid, solve_u_volterra
from nonmarkov.spectral import BathSpec, SpectralDensity


@pytest.fixture(scope="module")
def setup():
    sd = SpectralDensity(s=1.0, eta=0.1, omega_c=5.0)
    bath = spectral.bath_from_kelvin(0.5)
    pt = solve_u_volterra(sd, TimeGrid(t_max=10.0, n_steps=1000))
    flt = FluctuationTable(sd, bath, pt)
    return sd, bath, pt, flt


def test_initial_state_validation():
    with pytest.raises(ValueError):
        InitialState(n0=-1.0)


def test_population_initial_value(setup):
    _, _, pt, flt = setup
    n = correlators.exact_population(InitialState(n0=3.0), pt, flt)
    assert n[0] == pytest.approx(3.0)


def test_correlation_at_t_zero_is_propagator_scaled(setup):
    # the noise row vanishes at t = 0, leaving n0 u(tau)
    _, _, pt, flt = setup
    state = InitialState(n0=2.0)
    curve = correlators.exact_correlation(state, pt, flt, 0.0)
    assert np.max(np.abs(curve.values - 2.0 * flt.u)) < 1e-12


def test_naive_regression_exact_at_t_zero(setup):
    _, _, pt, flt = setup
    state = InitialState(n0=1.0)
    exact = correlators.exact_correlation(state, pt, flt, 0.0)
    naive = correlators.naive_qrt_correlation(state, pt, flt, 0.0)
    assert np.max(np.abs(exact.values - naive.values)) < 1e-12


def test_naive_regression_deviates_later(setup):
    _, _, pt, flt = setup
    state = InitialState(n0=1.0)
    exact = correlators.exact_correlation(state, pt, flt, 5.0)
    naive = correlators.naive_qrt_correlation(state, pt, flt, 5.0)
    dev = np.max(np.abs(exact.values - naive.values))
    assert dev / np.max(np.abs(exact.values)) > 1e-3


def test_markov_coefficients_values(setup):
    sd, bath, _, _ = setup
    mc = correlators.markov_coefficients(sd, bath)
    j0 = spectral.j_omega(sd, 1.0)
    assert mc.gamma == pytest.approx(0.5 * j0)
    assert mc.gamma_tilde == pytest.approx(j0 * spectral.bose_occupation(bath, 1.0))
    assert mc.omega_shifted == pytest.approx(1.0 + spectral.lamb_shift(sd, 1.0))


def test_markov_population_limits(setup):
    sd, bath, _, _ = setup
    mc = correlators.markov_coefficients(sd, bath)
    state = InitialState(n0=4.0)
    assert correlators.markov_population(state, mc, 0.0) == pytest.approx(4.0)
    n_ss = 0.5 * mc.gamma_tilde / mc.gamma
    assert correlators.markov_population(state, mc, 1e4) == pytest.approx(n_ss)


def test_markov_correlation_regression_ode(setup):
    # d/dtau C = -(gamma + i omega') C, probed by central differences
    sd, bath, _, _ = setup
    mc = correlators.markov_coefficients(sd, bath)
    state = InitialState(n0=1.0)
    lam = mc.gamma + 1j * mc.omega_shifted
    h = 1e-3
    for tau in (0.5, 4.0):
        stencil = np.array([tau - 2 * h, tau - h, tau + h, tau + 2 * h])
        c = correlators.markov_correlation(state, mc, 1.0, stencil)
        deriv = (c[0] - 8.0 * c[1] + 8.0 * c[2] - c[3]) / (12.0 * h)
        value = correlators.markov_correlation(state, mc, 1.0, tau)
        assert abs(deriv + lam * value) < 1e-10


def test_coherence_normalized_at_zero_lag(setup):
    _, _, pt, flt = setup
    state = InitialState(n0=1.0)
    g = correlators.coherence_exact(state, pt, flt, 3.0)
    assert abs(g.values[0]) == pytest.approx(1.0, abs=1e-10)


def test_coherence_degenerate_state():
    sd = SpectralDensity(s=1.0, eta=0.1, omega_c=5.0)
    bath = BathSpec(theta=0.0)
    pt = solve_u_volterra(sd, TimeGrid(t_max=5.0, n_steps=500))
    flt = FluctuationTable(sd, bath, pt)
    with pytest.raises(DegenerateState):
        correlators.coherence_exact(InitialState(n0=0.0), pt, flt, 0.0)


def test_exact_coefficients_free_mode():
    sd = SpectralDensity(s=1.0, eta=0.0, omega_c=5.0)
    bath = spectral.bath_from_kelvin(0.5)
    pt = solve_u_volterra(sd, TimeGrid(t_max=5.0, n_steps=500))
    flt = FluctuationTable(sd, bath, pt)
    coeffs = correlators.exact_coefficients(pt, flt)
    assert np.max(np.abs(coeffs.gamma)) < 1e-10
    assert np.max(np.abs(coeffs.omega - 1.0)) < 1e-10
    assert np.max(np.abs(coeffs.gamma_tilde)) < 1e-10


def test_exact_coefficients_need_full_resolution(setup):
    sd, bath, pt, _ = setup
    strided = FluctuationTable(sd, bath, pt, time_stride=2)
    with pytest.raises(ValueError):
        correlators.exact_coefficients(pt, strided)
