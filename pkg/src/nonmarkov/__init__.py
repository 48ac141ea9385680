"""Exact and Markov-limit two-time correlations of a damped bosonic mode.

The package computes the retarded propagator and thermal noise kernel of a
single mode coupled to an Ohmic-family reservoir, builds exact and
Markovian two-time coherence functions from them, and quantifies their
difference as a time-resolved non-Markovianity measure.  The ``nonmarkov``
console script exposes curve evaluation, figure presets, localized-mode
reports and a self-validation suite.
"""

__version__ = "0.1.0"

from .correlators import InitialState, MarkovCoefficients
from .errors import NonMarkovError
from .fluctuation import FluctuationTable
from .measure import (
    MeasureCurve,
    SweepConfig,
    asymptotic_measure,
    build_tables,
    ratio_measure,
    measure_curve,
    non_markovianity,
    run_sweep,
)
from .propagator import PropagatorTable, TimeGrid, eval_u_spectral, solve_u_volterra
from .spectral import (
    BathSpec,
    LocalizedMode,
    SpectralDensity,
    bath_from_kelvin,
    critical_coupling,
    localized_mode,
)

__all__ = [
    "__version__",
    "InitialState",
    "MarkovCoefficients",
    "NonMarkovError",
    "FluctuationTable",
    "MeasureCurve",
    "SweepConfig",
    "asymptotic_measure",
    "build_tables",
    "ratio_measure",
    "measure_curve",
    "non_markovianity",
    "run_sweep",
    "PropagatorTable",
    "TimeGrid",
    "eval_u_spectral",
    "solve_u_volterra",
    "BathSpec",
    "LocalizedMode",
    "SpectralDensity",
    "bath_from_kelvin",
    "critical_coupling",
    "localized_mode",
]
