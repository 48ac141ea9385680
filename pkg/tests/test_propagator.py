import math

import numpy as np
import pytest

from nonmarkov import numerics, spectral
from nonmarkov.propagator import (
    TimeGrid,
    eval_u_spectral,
    memory_kernel,
    solve_u_volterra,
)
from nonmarkov.spectral import SpectralDensity


def sd_ohmic(eta=0.1, s=1.0):
    return SpectralDensity(s=s, eta=eta, omega_c=5.0)


def test_time_grid_validation():
    with pytest.raises(ValueError):
        TimeGrid(t_max=0.0, n_steps=10)
    with pytest.raises(ValueError):
        TimeGrid(t_max=1.0, n_steps=1)
    with pytest.raises(ValueError):
        TimeGrid(t_max=1.0, n_steps=10, t0=0.5)
    grid = TimeGrid(t_max=2.0, n_steps=8)
    assert grid.dt == pytest.approx(0.25)
    assert grid.index_of(0.75) == 3
    with pytest.raises(ValueError):
        grid.index_of(0.3)


@pytest.mark.parametrize("s", [0.5, 1.0, 2.0, 3.0])
def test_memory_kernel_against_quadrature(s):
    # g(dt) = int_0^inf J(w) e^{-i w dt} dw / 2pi, via oscillatory quadrature
    sd = sd_ohmic(eta=0.2, s=s)
    for dt in (0.0, 0.3, 2.0):
        direct = numerics.integrate_oscillatory(
            lambda w: spectral.j_omega(sd, w) / (2.0 * math.pi),
            0.0,
            math.inf,
            dt,
            scale=sd.omega_c,
        )
        assert abs(memory_kernel(sd, dt) - direct) < 1e-8


def test_memory_kernel_conjugate_symmetry():
    sd = sd_ohmic(s=2.0)
    assert memory_kernel(sd, -1.3) == pytest.approx(
        np.conj(memory_kernel(sd, 1.3))
    )


def test_volterra_initial_condition_and_bound():
    pt = solve_u_volterra(sd_ohmic(eta=0.3), TimeGrid(t_max=20.0, n_steps=1600))
    assert pt.u[0] == pytest.approx(1.0)
    assert np.max(np.abs(pt.u)) <= 1.0 + 1e-6


def test_volterra_free_mode():
    # eta = 0: u(t) = e^{-i omega0 t} exactly
    pt = solve_u_volterra(sd_ohmic(eta=0.0), TimeGrid(t_max=10.0, n_steps=800))
    expect = np.exp(-1j * pt.grid.times())
    assert np.max(np.abs(pt.u - expect)) < 1e-12


def test_volterra_weak_coupling_decay():
    # Markov estimate |u| ~ e^{-gamma t} with gamma = J(omega0)/2; checked
    # at moderate gamma t, before the power-law branch-cut tail takes over
    sd = sd_ohmic(eta=0.01)
    pt = solve_u_volterra(sd, TimeGrid(t_max=20.0, n_steps=1600))
    gamma = 0.5 * spectral.j_omega(sd, sd.omega0)
    k = pt.grid.index_of(20.0)
    assert abs(pt.u[k]) == pytest.approx(math.exp(-gamma * 20.0), rel=0.1)


def test_volterra_strong_coupling_plateau():
    # above threshold |u| approaches the localized-mode residue
    sd = sd_ohmic(eta=0.3)
    pt = solve_u_volterra(sd, TimeGrid(t_max=60.0, n_steps=4800))
    lm = spectral.localized_mode(sd)
    tail = np.abs(pt.u[pt.grid.index_of(40.0):])
    assert np.mean(tail) == pytest.approx(lm.residue_z, rel=0.02)


def test_volterra_matches_spectral():
    sd = sd_ohmic(eta=0.3)
    pt = solve_u_volterra(sd, TimeGrid(t_max=20.0, n_steps=1600))
    for t in (0.5, 3.0, 11.0, 20.0):
        assert abs(pt.at(t) - eval_u_spectral(sd, t)) < 1e-4


def test_spectral_sum_rule():
    for eta in (0.1, 0.3):
        assert abs(eval_u_spectral(sd_ohmic(eta=eta), 0.0) - 1.0) < 1e-6


def test_table_interpolation():
    pt = solve_u_volterra(sd_ohmic(), TimeGrid(t_max=5.0, n_steps=400))
    k = 17
    t = pt.grid.times()[k]
    assert pt.at(t) == pytest.approx(pt.u[k])
