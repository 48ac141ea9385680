"""Time-resolved non-Markovianity from two-time coherences.

The measure compares the exact and Markov normalized coherences at the
same (t, tau) point,

    N(t, tau) = |g_exact(t, tau) - g_markov(t, tau)|.

Above the critical coupling the localized mode keeps g_exact from
decaying, so N saturates at a finite plateau whose height follows from the
mode residue and the stationary noise population.  A second, ratio-type
indicator compares the exact correlator with the naive regression recipe.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import List, Tuple

import numpy as np

from . import correlators, spectral
from .correlators import InitialState
from .errors import DegenerateState, ExactZero, NoDecay
from .fluctuation import FluctuationTable
from .numerics import DEFAULT_QUAD, QuadSpec
from .propagator import PropagatorTable, TimeGrid, solve_u_volterra
from .spectral import (
    DEFAULT_OMEGA0_RAD_PER_S,
    KB_OVER_HBAR,
    BathSpec,
    SpectralDensity,
)

__all__ = [
    "MeasureCurve",
    "SweepConfig",
    "build_tables",
    "non_markovianity",
    "asymptotic_measure",
    "ratio_measure",
    "measure_curve",
    "run_sweep",
]


@dataclass(frozen=True)
class MeasureCurve:
    """N(t, tau) together with the two coherences it compares."""

    t: float
    tau: np.ndarray
    g_exact: np.ndarray
    g_markov: np.ndarray
    n_value: np.ndarray


@dataclass(frozen=True)
class SweepConfig:
    """One family of measure curves, varying a single parameter.

    ``axis`` selects which parameter ``values`` replaces: the coupling
    ``eta``, the temperature in Kelvin, or the initial occupation ``n0``.
    The remaining fields are the base point shared by every curve.
    """

    axis: str
    values: Tuple[float, ...]
    s: float
    eta: float
    temp_k: float
    n0: float
    t: float = 0.0
    omega_c: float = 5.0
    t_max: float = 200.0
    steps_per_unit_time: int = 80
    time_stride: int = 1
    omega0_rad_per_s: float = DEFAULT_OMEGA0_RAD_PER_S
    kb_over_hbar: float = KB_OVER_HBAR

    def __post_init__(self) -> None:
        if self.axis not in ("coupling", "temperature", "initial_occupation"):
            raise ValueError(f"unknown sweep axis {self.axis!r}")
        if not self.values:
            raise ValueError("sweep needs at least one value")


def build_tables(
    sd: SpectralDensity,
    bath: BathSpec,
    t_max: float,
    steps_per_unit_time: int = 80,
    spec: QuadSpec = DEFAULT_QUAD,
    omega_spacing=None,
    time_stride: int = 1,
) -> Tuple[PropagatorTable, FluctuationTable]:
    """Propagator and fluctuation tables on a shared uniform grid.

    The default step density keeps the Richardson-extrapolated Volterra
    error and the frequency-grid quadrature error both well below the
    percent-scale structure of the measure curves.
    """
    n_steps = max(2, int(round(steps_per_unit_time * t_max)))
    n_steps -= n_steps % time_stride
    ptable = solve_u_volterra(sd, TimeGrid(t_max=t_max, n_steps=n_steps))
    flt = FluctuationTable(
        sd, bath, ptable, spec, omega_spacing=omega_spacing, time_stride=time_stride
    )
    return ptable, flt


def non_markovianity(
    sd: SpectralDensity,
    bath: BathSpec,
    state: InitialState,
    ptable: PropagatorTable,
    flt: FluctuationTable,
    t: float = 0.0,
) -> MeasureCurve:
    """N(t, tau) = |g_exact - g_markov| over every grid tau."""
    g_e = correlators.coherence_exact(state, ptable, flt, t)
    mc = correlators.markov_coefficients(sd, bath)
    g_m = correlators.coherence_markov(state, mc, t, g_e.tau)
    return MeasureCurve(
        t=t,
        tau=g_e.tau,
        g_exact=g_e.values,
        g_markov=np.asarray(g_m),
        n_value=np.abs(g_e.values - g_m),
    )


def asymptotic_measure(
    sd: SpectralDensity,
    state: InitialState,
    flt: FluctuationTable,
) -> float:
    """tau -> infinity limit of N(0, tau).

    The Markov coherence decays away (NoDecay is raised when J(omega0) = 0
    and it does not), leaving |g_exact|; with a localized mode of residue Z
    and stationary noise population v_ss this limit is
    Z sqrt(n0) / sqrt(n0 Z^2 + v_ss).  Without a localized mode the exact
    coherence decays too and the limit is zero.
    """
    if spectral.j_omega(sd, sd.omega0) == 0.0:
        raise NoDecay("J(omega0) = 0: the Markov coherence never decays")
    lm = spectral.localized_mode(sd)
    if lm is None:
        return 0.0
    v_ss = flt.steady()
    denom = state.n0 * lm.residue_z**2 + v_ss
    if denom == 0.0:
        raise DegenerateState("empty mode in an empty bath; coherence is 0/0")
    return lm.residue_z * math.sqrt(state.n0) / math.sqrt(denom)


def ratio_measure(
    state: InitialState,
    ptable: PropagatorTable,
    flt: FluctuationTable,
    t: float = 0.0,
) -> correlators.CorrelationCurve:
    """Ratio-type indicator |1 - C_regression / C_exact| over grid tau.

    Raises ExactZero when the exact correlator passes through (numerical)
    zero inside the window, where the ratio is undefined.
    """
    c_e = correlators.exact_correlation(state, ptable, flt, t)
    c_q = correlators.naive_qrt_correlation(state, ptable, flt, t)
    scale = float(np.max(np.abs(c_e.values)))
    if scale == 0.0 or np.min(np.abs(c_e.values)) < 1e-12 * scale:
        raise ExactZero("exact correlator vanishes inside the tau window")
    values = np.abs(1.0 - c_q.values / c_e.values)
    return correlators.CorrelationCurve(t=t, tau=c_e.tau, values=values)


def measure_curve(
    sd: SpectralDensity,
    bath: BathSpec,
    state: InitialState,
    t: float = 0.0,
    t_max: float = 200.0,
    steps_per_unit_time: int = 80,
) -> MeasureCurve:
    """Convenience wrapper: build both tables and evaluate N(t, tau)."""
    ptable, flt = build_tables(sd, bath, t_max + t, steps_per_unit_time)
    return non_markovianity(sd, bath, state, ptable, flt, t)


def run_sweep(config: SweepConfig) -> List[Tuple[float, MeasureCurve]]:
    """Measure curves along one parameter axis.

    Tables are shared whenever the swept parameter allows it: the
    propagator is coupling-only, so temperature and occupation sweeps
    reuse it, and occupation sweeps reuse the fluctuation table as well.
    """
    t_total = config.t_max + config.t

    def tables(eta: float, temp_k: float):
        sd = SpectralDensity(s=config.s, eta=eta, omega_c=config.omega_c)
        bath = spectral.bath_from_kelvin(
            temp_k, config.omega0_rad_per_s, config.kb_over_hbar
        )
        ptable, flt = build_tables(
            sd, bath, t_total, config.steps_per_unit_time
        )
        return sd, bath, ptable, flt

    out: List[Tuple[float, MeasureCurve]] = []
    if config.axis == "coupling":
        for eta in config.values:
            sd, bath, ptable, flt = tables(eta, config.temp_k)
            state = InitialState(n0=config.n0)
            out.append(
                (eta, non_markovianity(sd, bath, state, ptable, flt, config.t))
            )
        return out

    if config.axis == "temperature":
        sd = SpectralDensity(s=config.s, eta=config.eta, omega_c=config.omega_c)
        n_steps = max(2, int(round(config.steps_per_unit_time * t_total)))
        ptable = solve_u_volterra(sd, TimeGrid(t_max=t_total, n_steps=n_steps))
        state = InitialState(n0=config.n0)
        for temp_k in config.values:
            bath = spectral.bath_from_kelvin(
                temp_k, config.omega0_rad_per_s, config.kb_over_hbar
            )
            flt = FluctuationTable(sd, bath, ptable)
            out.append(
                (temp_k, non_markovianity(sd, bath, state, ptable, flt, config.t))
            )
        return out

    sd, bath, ptable, flt = tables(config.eta, config.temp_k)
    for n0 in config.values:
        state = InitialState(n0=n0)
        out.append((n0, non_markovianity(sd, bath, state, ptable, flt, config.t)))
    return out
