"""Ohmic-family spectral density, thermal occupation, self-energy and the
localized (bound) mode.

All frequencies are expressed in units of the system frequency omega0 and
all times in units of 1/omega0; omega0 itself is kept as an explicit field
so the formulas read naturally, but it is 1.0 everywhere in practice.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Optional

import numpy as np
from scipy.interpolate import CubicSpline

from . import numerics
from .errors import DegenerateArgument
from .numerics import DEFAULT_QUAD, TIGHT_QUAD, QuadSpec

__all__ = [
    "SpectralDensity",
    "BathSpec",
    "LocalizedMode",
    "KB_OVER_HBAR",
    "DEFAULT_OMEGA0_RAD_PER_S",
    "bath_from_kelvin",
    "j_omega",
    "bose_occupation",
    "lamb_shift",
    "damping_rate",
    "critical_coupling",
    "localized_mode",
    "lamb_shift_interpolant",
]

#: k_B / hbar in rad s^-1 K^-1 (CODATA).
KB_OVER_HBAR = 1.309192e11

#: Default system frequency, reading "10 GHz" as an ordinary frequency,
#: i.e. 2 pi x 1e10 rad/s angular.  With this choice the thermal occupation
#: at resonance is n(omega0) = 0.62 at T = 0.5 K, which reproduces the
#: initial-state trend of the measure (monotone growth with n0 >= 1); the
#: angular reading would place n(omega0) = 6.1 inside the swept n0 range
#: and break it.  Both conversion constants remain overridable.
DEFAULT_OMEGA0_RAD_PER_S = 2.0 * math.pi * 1.0e10


@dataclass(frozen=True)
class SpectralDensity:
    """Ohmic-family coupling spectrum J(w) = 2 pi eta w (w/wc)^(s-1) e^(-w/wc).

    s < 1 is sub-Ohmic, s = 1 Ohmic, s > 1 super-Ohmic.  ``eta`` is the
    dimensionless coupling strength and ``omega_c`` the exponential cutoff.
    """

    s: float
    eta: float
    omega_c: float
    omega0: float = 1.0

    def __post_init__(self) -> None:
        if self.s <= 0.0:
            raise ValueError("exponent s must be positive")
        if self.eta < 0.0:
            raise ValueError("coupling eta must be non-negative")
        if self.omega_c <= 0.0:
            raise ValueError("cutoff omega_c must be positive")
        if self.omega0 <= 0.0:
            raise ValueError("omega0 must be positive")


@dataclass(frozen=True)
class BathSpec:
    """Thermal reservoir state, parameterized by theta = k_B T / (hbar omega0)."""

    theta: float

    def __post_init__(self) -> None:
        if self.theta < 0.0:
            raise ValueError("temperature must be non-negative")


@dataclass(frozen=True)
class LocalizedMode:
    """Dissipationless pole of the propagator below the band edge."""

    omega_b: float
    residue_z: float

    def __post_init__(self) -> None:
        if self.omega_b >= 0.0:
            raise ValueError("localized-mode frequency must lie below the band edge")
        if not 0.0 < self.residue_z < 1.0:
            raise ValueError("residue must lie in (0, 1)")


def bath_from_kelvin(
    temperature_k: float,
    omega0_rad_per_s: float = DEFAULT_OMEGA0_RAD_PER_S,
    kb_over_hbar: float = KB_OVER_HBAR,
) -> BathSpec:
    """Convert a lab temperature in Kelvin to the dimensionless theta.

    With the default omega0 = 2 pi x 1e10 rad/s this gives
    theta = 2.08362 * T[K].
    """
    return BathSpec(theta=kb_over_hbar * temperature_k / omega0_rad_per_s)


def j_omega(sd: SpectralDensity, omega):
    """Spectral density J(omega); zero for omega <= 0 (scalar or array)."""
    w = np.asarray(omega, dtype=float)
    out = np.zeros_like(w)
    mask = w > 0.0
    if np.any(mask):
        wp = w[mask]
        # (w/wc)^s avoids 0**negative for sub-Ohmic exponents
        out[mask] = (
            2.0
            * math.pi
            * sd.eta
            * sd.omega_c
            * (wp / sd.omega_c) ** sd.s
            * np.exp(-wp / sd.omega_c)
        )
    if np.isscalar(omega) or np.ndim(omega) == 0:
        return float(out)
    return out


def bose_occupation(bath: BathSpec, omega):
    """Bose-Einstein occupation n(omega, T) = 1 / (exp(omega/theta) - 1).

    Raises DegenerateArgument for non-positive frequencies; returns 0 at
    zero temperature.
    """
    w = np.asarray(omega, dtype=float)
    if np.any(w <= 0.0):
        raise DegenerateArgument("Bose occupation needs omega > 0")
    if bath.theta == 0.0:
        out = np.zeros_like(w)
    else:
        # the cap keeps expm1 from overflowing; 1/expm1(700) underflows to 0
        out = 1.0 / np.expm1(np.minimum(w / bath.theta, 700.0))
    if np.isscalar(omega) or np.ndim(omega) == 0:
        return float(out)
    return out


def damping_rate(sd: SpectralDensity, omega):
    """Imaginary part of the self-energy, gamma(omega) = J(omega)/2."""
    return 0.5 * j_omega(sd, omega)


def critical_coupling(sd: SpectralDensity) -> float:
    """Coupling threshold eta_c = omega0 / (omega_c Gamma(s)) above which
    the localized mode appears."""
    return sd.omega0 / (sd.omega_c * math.gamma(sd.s))


def _band_integral(sd: SpectralDensity, f, upper: float, spec: QuadSpec) -> float:
    """int_0^upper f(w) J(w)/(2 pi) dw with the sub-Ohmic origin handled by
    the w = x**(1/s) substitution."""

    def integrand(w: float) -> float:
        return f(w) * j_omega(sd, w) / (2.0 * math.pi)

    return numerics.integrate_powerlaw_endpoint(integrand, upper, min(sd.s, 1.0), spec)


def _log_integral(f, lo: float, hi: float, spec: QuadSpec) -> float:
    """int_lo^hi f(w) dw in logarithmic coordinates, for integrands whose
    magnitude spans many decades across the interval."""
    return numerics.integrate(
        lambda y: f(math.exp(y)) * math.exp(y), math.log(lo), math.log(hi), spec
    ).real


def lamb_shift(
    sd: SpectralDensity, omega: float, spec: QuadSpec = DEFAULT_QUAD
) -> float:
    """Real part of the self-energy, Delta(w) = P int J(w')/(w-w') dw'/2pi.

    For omega <= 0 the integrand has no pole and the integral is regular;
    for omega > 0 the pole is treated by the principal-value routine with
    the sub-Ohmic origin integrated in substituted coordinates.
    """
    if sd.eta == 0.0:
        return 0.0
    cutoff = spec.tail_cutoff_multiplier * sd.omega_c
    if omega <= 0.0:
        # near the band edge the integrand turns over sharply at w ~ |omega|;
        # splitting there (and once more, to avoid handing QUADPACK an
        # interval spanning seven decades) keeps the quadrature reliable
        split = 16.0 * abs(omega)
        if 0.0 < split < 0.02 * sd.omega_c:
            def f(w: float) -> float:
                return j_omega(sd, w) / (2.0 * math.pi * (omega - w))

            return (
                _band_integral(sd, lambda w: 1.0 / (omega - w), split, spec)
                + _log_integral(f, split, 0.02 * sd.omega_c, spec)
                + numerics.integrate(f, 0.02 * sd.omega_c, cutoff, spec).real
            )
        return _band_integral(sd, lambda w: 1.0 / (omega - w), cutoff, spec)

    half_width = min(0.5 * omega, sd.omega_c)
    lo, hi = omega - half_width, omega + half_width

    def f(w: float) -> float:
        return j_omega(sd, w) / (2.0 * math.pi)

    total = numerics.principal_value(f, lo, hi, omega, spec)
    if lo > 0.0:
        total += _band_integral(sd, lambda w: 1.0 / (omega - w), lo, spec)
    if hi < cutoff:
        total += numerics.integrate(
            lambda w: f(w) / (omega - w), hi, cutoff, spec
        ).real
    return total


def _lamb_shift_slope(sd: SpectralDensity, omega: float, spec: QuadSpec) -> float:
    """Delta'(omega) for omega < 0, where the integrand is regular:
    -int J(w')/(2 pi (omega - w')**2) dw'."""
    cutoff = spec.tail_cutoff_multiplier * sd.omega_c
    split = 16.0 * abs(omega)
    if 0.0 < split < 0.02 * sd.omega_c:
        def f(w: float) -> float:
            return -j_omega(sd, w) / (2.0 * math.pi * (omega - w) ** 2)

        return (
            _band_integral(sd, lambda w: -1.0 / (omega - w) ** 2, split, spec)
            + _log_integral(f, split, 0.02 * sd.omega_c, spec)
            + numerics.integrate(f, 0.02 * sd.omega_c, cutoff, spec).real
        )
    return _band_integral(sd, lambda w: -1.0 / (omega - w) ** 2, cutoff, spec)


@lru_cache(maxsize=64)
def localized_mode(
    sd: SpectralDensity, tol: float = 1e-13
) -> Optional[LocalizedMode]:
    """Solve the pole condition omega_b - omega0 - Delta(omega_b) = 0 below
    the band edge.

    The mode exists iff omega0 + Delta(0) < 0 (algebraically eta > eta_c);
    at the threshold itself the residue is ill-defined and the mode is
    reported absent.  The residue is Z = 1 / (1 - Delta'(omega_b)).
    """
    if sd.eta == 0.0:
        return None
    delta0 = lamb_shift(sd, 0.0, TIGHT_QUAD)
    # Hairline margin: within ~1e-5 of the threshold the pole sits so close
    # to the band edge (|omega_b| ~ (eta - eta_c)^(1/s) for sub-Ohmic baths)
    # that its frequency and residue are numerically meaningless, so the
    # mode is reported absent.  The corresponding bias in the detected
    # threshold is ~1e-5 relative in eta.
    if sd.omega0 + delta0 >= -1e-5 * sd.omega0:
        return None

    # DEFAULT_QUAD here: near the threshold the pole migrates towards the
    # band edge, where the 1e-12 relative target of TIGHT_QUAD is not
    # achievable in double precision; quadrature determinism still leaves
    # the root-finder residual far below the 1e-10 gate
    def pole_fn(w: float) -> float:
        return w - sd.omega0 - lamb_shift(sd, w, DEFAULT_QUAD)

    # Delta is bounded below by -eta omega_c Gamma(s), so the pole function
    # is guaranteed negative at -search_max.
    search_max = sd.omega0 + sd.eta * sd.omega_c * math.gamma(sd.s) + 1.0
    omega_b = numerics.find_root(pole_fn, -search_max, -1e-12, tol=tol)
    residual = abs(pole_fn(omega_b))
    slope = _lamb_shift_slope(sd, omega_b, DEFAULT_QUAD)
    # the residual divided by the pole-function slope bounds the error in
    # omega_b itself, which is the quantity that must be tight
    if residual / max(1.0, 1.0 - slope) > 1e-10:
        raise RuntimeError(f"pole condition residual {residual:.2e} too large")
    return LocalizedMode(omega_b=omega_b, residue_z=1.0 / (1.0 - slope))


def _lamb_shift_nodes(sd: SpectralDensity, cutoff: float) -> np.ndarray:
    """Frequency nodes for tabulating Delta on [0, cutoff]: geometric
    clustering near the band edge, fine spacing through the resonance
    region, coarser towards the tail."""
    w0 = sd.omega0
    pieces = [
        np.geomspace(1e-4 * w0, 0.4 * w0, 48),
        np.arange(0.4 * w0, 3.0 * w0, 0.02 * w0),
        np.linspace(3.0 * w0, 3.0 * sd.omega_c + 3.0 * w0, 160),
        np.geomspace(3.0 * sd.omega_c + 3.0 * w0, cutoff, 120),
    ]
    nodes = np.unique(np.concatenate([[0.0], *pieces, [cutoff]]))
    return nodes


@lru_cache(maxsize=32)
def lamb_shift_interpolant(sd: SpectralDensity, spec: QuadSpec = DEFAULT_QUAD):
    """Cubic-spline table of Delta(omega) on [0, tail cutoff].

    The spectral representation of the propagator evaluates Delta inside a
    quadrature loop; tabulating once per spectral density keeps that loop
    cheap while staying well below the downstream tolerances (the spline
    error is O(h^4) on nodes much finer than the omega_c variation scale).
    """
    cutoff = spec.tail_cutoff_multiplier * sd.omega_c
    nodes = _lamb_shift_nodes(sd, cutoff)
    values = np.array([lamb_shift(sd, w, spec) for w in nodes])
    return CubicSpline(nodes, values)
