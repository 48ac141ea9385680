"""Two-time correlation functions of the mode, exact and Markovian.

The exact correlator follows from the propagator and the noise term,

    <a^dag(t) a(t + tau)> = u*(t) n0 u(t + tau) + v*(t, t + tau),

while the Markov limit evolves the same initial occupation with constant
rate coefficients evaluated at the system frequency.  A third variant
applies the naive regression recipe, propagating the equal-time population
with the exact propagator; it agrees with the exact correlator at t = 0
and deviates at later start times.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import spectral
from .errors import DegenerateState, UZero
from .fluctuation import FluctuationTable
from .propagator import PropagatorTable
from .spectral import BathSpec, SpectralDensity

__all__ = [
    "InitialState",
    "MarkovCoefficients",
    "ExactCoefficients",
    "CorrelationCurve",
    "exact_population",
    "exact_correlation",
    "exact_coefficients",
    "markov_coefficients",
    "markov_population",
    "markov_correlation",
    "naive_qrt_correlation",
    "coherence_exact",
    "coherence_markov",
]


@dataclass(frozen=True)
class InitialState:
    """Initial occupation of the mode, uncorrelated with the reservoir."""

    n0: float

    def __post_init__(self) -> None:
        if self.n0 < 0.0:
            raise ValueError("initial occupation must be non-negative")


@dataclass(frozen=True)
class MarkovCoefficients:
    """Constant coefficients of the Markov (Lindblad-limit) master equation:
    shifted frequency, decay rate gamma = J(omega0)/2 and thermal pump
    gamma_tilde = J(omega0) n(omega0)."""

    omega_shifted: float
    gamma: float
    gamma_tilde: float

    def __post_init__(self) -> None:
        if self.gamma < 0.0 or self.gamma_tilde < 0.0:
            raise ValueError("rates must be non-negative")


@dataclass(frozen=True)
class ExactCoefficients:
    """Time-dependent coefficients of the exact master equation, sampled on
    the propagator grid: omega(t) = -Im(udot/u), gamma(t) = -Re(udot/u) and
    gamma_tilde(t) = vdot + 2 gamma v."""

    times: np.ndarray
    omega: np.ndarray
    gamma: np.ndarray
    gamma_tilde: np.ndarray


@dataclass(frozen=True)
class CorrelationCurve:
    """A two-time curve tau -> f(t, t + tau) at fixed first time t."""

    t: float
    tau: np.ndarray
    values: np.ndarray


def _tau_window(flt: FluctuationTable, t: float):
    """Table-grid index of t and the tau values reachable on the grid."""
    kt = flt.index_of(t)
    tau = flt.dt * np.arange(flt.n_steps - kt + 1)
    return kt, tau


def exact_population(
    state: InitialState, ptable: PropagatorTable, flt: FluctuationTable
) -> np.ndarray:
    """Occupation n(t) = |u(t)|^2 n0 + v(t, t) on the table grid."""
    return np.abs(flt.u) ** 2 * state.n0 + flt.diagonal()


def exact_correlation(
    state: InitialState,
    ptable: PropagatorTable,
    flt: FluctuationTable,
    t: float,
) -> CorrelationCurve:
    """Exact <a^dag(t) a(t + tau)> for every grid tau."""
    kt, tau = _tau_window(flt, t)
    row = flt.two_time_row(t)
    values = (
        np.conj(flt.u[kt]) * state.n0 * flt.u[kt:]
        + np.conj(row[kt:])
    )
    return CorrelationCurve(t=t, tau=tau, values=values)


def exact_coefficients(
    ptable: PropagatorTable, flt: FluctuationTable
) -> ExactCoefficients:
    """Exact master-equation coefficients on the propagator grid.

    The frequency and decay rate come from the logarithmic derivative of
    the propagator; the pump coefficient is fixed by consistency with the
    population equation ndot = -2 gamma n + gamma_tilde.  Raises UZero at
    an exact zero of the propagator, where the coefficients are singular.
    """
    if flt.time_stride != 1:
        raise ValueError("coefficients need the full-resolution table")
    if np.min(np.abs(ptable.u)) < 1e-12:
        raise UZero("propagator passes through zero; coefficients diverge")
    ratio = ptable.udot / ptable.u
    gamma = -ratio.real
    v = flt.diagonal()
    vdot = np.gradient(v, ptable.grid.dt)
    return ExactCoefficients(
        times=ptable.grid.times(),
        omega=-ratio.imag,
        gamma=gamma,
        gamma_tilde=vdot + 2.0 * gamma * v,
    )


def markov_coefficients(sd: SpectralDensity, bath: BathSpec) -> MarkovCoefficients:
    """Rates of the Markov limit, evaluated on resonance: the Lamb-shifted
    frequency omega0 + Delta(omega0), gamma = J(omega0)/2 and
    gamma_tilde = J(omega0) n(omega0)."""
    j0 = spectral.j_omega(sd, sd.omega0)
    pump = j0 * spectral.bose_occupation(bath, sd.omega0) if j0 > 0.0 else 0.0
    return MarkovCoefficients(
        omega_shifted=sd.omega0 + spectral.lamb_shift(sd, sd.omega0),
        gamma=0.5 * j0,
        gamma_tilde=pump,
    )


def markov_population(state: InitialState, mc: MarkovCoefficients, t):
    """Markov occupation n0 e^{-2 gamma t} + n_ss (1 - e^{-2 gamma t}) with
    the stationary value n_ss = gamma_tilde / (2 gamma)."""
    t = np.asarray(t, dtype=float)
    if mc.gamma == 0.0:
        out = np.full_like(t, state.n0)
    else:
        decay = np.exp(-2.0 * mc.gamma * t)
        out = state.n0 * decay + 0.5 * mc.gamma_tilde / mc.gamma * (1.0 - decay)
    if out.ndim == 0:
        return float(out)
    return out


def markov_correlation(state: InitialState, mc: MarkovCoefficients, t: float, tau):
    """Markov <a^dag(t) a(t + tau)> = n(t) e^{-(gamma + i omega') tau}.

    ``tau`` may be complex (the correlator is entire in tau), which lets
    derivative checks probe the quantum-regression differential equation
    d/dtau C = -(gamma + i omega') C directly.
    """
    tau = np.asarray(tau)
    out = markov_population(state, mc, t) * np.exp(
        -(mc.gamma + 1j * mc.omega_shifted) * tau
    )
    if out.ndim == 0:
        return complex(out)
    return out


def naive_qrt_correlation(
    state: InitialState,
    ptable: PropagatorTable,
    flt: FluctuationTable,
    t: float,
) -> CorrelationCurve:
    """Regression-recipe correlator n(t) u(tau) for every grid tau.

    The recipe propagates the equal-time population with the exact
    single-time propagator, which reproduces the exact correlator at t = 0
    (where the noise term vanishes) but not at later start times.
    """
    kt, tau = _tau_window(flt, t)
    n_t = exact_population(state, ptable, flt)[kt]
    values = n_t * flt.u[: tau.size]
    return CorrelationCurve(t=t, tau=tau, values=values)


def coherence_exact(
    state: InitialState,
    ptable: PropagatorTable,
    flt: FluctuationTable,
    t: float,
) -> CorrelationCurve:
    """Normalized exact coherence
    g(t, tau) = <a^dag(t) a(t+tau)> / sqrt(n(t) n(t+tau))."""
    kt, tau = _tau_window(flt, t)
    pop = exact_population(state, ptable, flt)
    if pop[kt] < 1e-14 or np.min(pop[kt:]) < 1e-14:
        raise DegenerateState("vanishing population; coherence is 0/0")
    curve = exact_correlation(state, ptable, flt, t)
    values = curve.values / np.sqrt(pop[kt] * pop[kt:])
    return CorrelationCurve(t=t, tau=tau, values=values)


def coherence_markov(state: InitialState, mc: MarkovCoefficients, t: float, tau):
    """Normalized Markov coherence
    g(t, tau) = C_M(t, tau) / sqrt(n_M(t) n_M(t+tau))."""
    tau = np.asarray(tau, dtype=float)
    n_t = markov_population(state, mc, t)
    n_s = markov_population(state, mc, t + tau)
    if n_t < 1e-14 or np.min(n_s) < 1e-14:
        raise DegenerateState("vanishing population; coherence is 0/0")
    out = markov_correlation(state, mc, t, tau) / np.sqrt(n_t * n_s)
    if out.ndim == 0:
        return complex(out)
    return out
