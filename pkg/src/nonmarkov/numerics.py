"""Shared numerical primitives.

Adaptive quadrature on finite and semi-infinite intervals, Cauchy
principal-value integration, and bracketed root finding.  Everything here is
a thin, contract-enforcing layer over scipy's QUADPACK and Brent routines;
the physics modules never call scipy directly for these tasks.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Callable

from scipy import integrate as _integrate
from scipy import optimize as _optimize

from .errors import NoBracket, NonConvergence, PoleOutOfRange

__all__ = [
    "QuadSpec",
    "DEFAULT_QUAD",
    "TIGHT_QUAD",
    "integrate",
    "integrate_oscillatory",
    "principal_value",
    "find_root",
]


@dataclass(frozen=True)
class QuadSpec:
    """Tolerances and budget for the adaptive quadrature routines.

    Semi-infinite integrals are truncated at ``tail_cutoff_multiplier``
    times the caller-supplied frequency scale (the spectral cutoff in
    practice).  All integrand families carry exp(-omega/omega_c), so the
    truncation error at the default multiplier 40 is bounded by the upper
    incomplete Gamma tail Gamma(s+1, 40) < 1e-15 for every exponent used
    here.
    """

    rel_tol: float = 1e-8
    abs_tol: float = 1e-12
    max_subdivisions: int = 200
    tail_cutoff_multiplier: float = 40.0

    def __post_init__(self) -> None:
        if self.rel_tol <= 0.0:
            raise ValueError("rel_tol must be positive")
        if self.abs_tol < 0.0:
            raise ValueError("abs_tol must be non-negative")
        if self.max_subdivisions < 1:
            raise ValueError("max_subdivisions must be at least 1")
        if self.tail_cutoff_multiplier < 10.0:
            raise ValueError("tail_cutoff_multiplier must be >= 10")


#: Defaults one order tighter than the downstream acceptance tolerances.
DEFAULT_QUAD = QuadSpec()

#: Used where quadrature noise must stay far below root-finding residuals.
TIGHT_QUAD = QuadSpec(rel_tol=1e-12, abs_tol=1e-14, max_subdivisions=400)


def _quad(f, a: float, b: float, spec: QuadSpec, complex_func: bool, **kw):
    with warnings.catch_warnings():
        warnings.simplefilter("error", _integrate.IntegrationWarning)
        try:
            val, _err = _integrate.quad(
                f,
                a,
                b,
                epsabs=spec.abs_tol,
                epsrel=spec.rel_tol,
                limit=spec.max_subdivisions,
                complex_func=complex_func,
                **kw,
            )
        except _integrate.IntegrationWarning as exc:
            raise NonConvergence(
                f"quadrature on [{a:g}, {b:g}] did not converge: {exc}"
            ) from exc
    return val


def _truncate_upper(a: float, b: float, spec: QuadSpec, scale: float) -> float:
    if math.isinf(b):
        b = spec.tail_cutoff_multiplier * scale
        if b <= a:
            raise ValueError("tail cutoff lies below the lower limit")
    return b


def integrate(
    f: Callable[[float], complex],
    a: float,
    b: float,
    spec: QuadSpec = DEFAULT_QUAD,
    *,
    scale: float = 1.0,
) -> complex:
    """Adaptive integral of a (possibly complex-valued) integrand on (a, b).

    ``b`` may be ``inf``; the integral is then truncated at
    ``spec.tail_cutoff_multiplier * scale``.  Integrable endpoint
    singularities (e.g. omega**(s-1) for s < 1) are handled by QUADPACK's
    endpoint extrapolation.

    Raises NonConvergence when the subdivision budget is exhausted.
    """
    b = _truncate_upper(a, b, spec, scale)
    if not a < b:
        raise ValueError("need a < b")
    return _quad(f, a, b, spec, complex_func=True)


def integrate_oscillatory(
    f: Callable[[float], float],
    a: float,
    b: float,
    t: float,
    spec: QuadSpec = DEFAULT_QUAD,
    *,
    scale: float = 1.0,
) -> complex:
    """Integral of f(omega) * exp(-i*omega*t) on (a, b) for real f.

    Uses QUADPACK's dedicated oscillatory weights (QAWO), which remain
    accurate for phases omega*t of many thousands of radians where plain
    subdivision thrashes.  For t == 0 this reduces to ``integrate``.
    """
    b = _truncate_upper(a, b, spec, scale)
    if not a < b:
        raise ValueError("need a < b")
    if t == 0.0:
        return complex(_quad(f, a, b, spec, complex_func=False))
    re = _quad(f, a, b, spec, complex_func=False, weight="cos", wvar=t)
    im = _quad(f, a, b, spec, complex_func=False, weight="sin", wvar=t)
    return complex(re, -im)


def principal_value(
    f: Callable[[float], float],
    a: float,
    b: float,
    pole: float,
    spec: QuadSpec = DEFAULT_QUAD,
    *,
    scale: float = 1.0,
) -> float:
    """Cauchy principal value of  P int_a^b f(w') / (pole - w') dw'.

    A symmetric window [pole - d, pole + d] around the pole is folded onto
    itself, turning the excised singularity into the smooth integrand
    [f(pole - x) - f(pole + x)] / x whose x -> 0 limit is -2 f'(pole); the
    remaining pieces are regular integrals.  ``b`` may be infinite (tail
    truncation as in ``integrate``).
    """
    b = _truncate_upper(a, b, spec, scale)
    if not a < pole < b:
        raise PoleOutOfRange(f"pole {pole:g} not inside ({a:g}, {b:g})")

    d = min(pole - a, b - pole)

    def folded(x: float) -> float:
        return (f(pole - x) - f(pole + x)) / x

    total = _quad(folded, 0.0, d, spec, complex_func=False)
    if a < pole - d:
        total += _quad(
            lambda w: f(w) / (pole - w), a, pole - d, spec, complex_func=False
        )
    if pole + d < b:
        total += _quad(
            lambda w: f(w) / (pole - w), pole + d, b, spec, complex_func=False
        )
    return total


def find_root(
    g: Callable[[float], float],
    lo: float,
    hi: float,
    tol: float = 1e-12,
) -> float:
    """Root of a continuous g on a sign-changing bracket [lo, hi].

    Brent's method: bisection safeguarded by secant/inverse-quadratic
    steps.  Raises NoBracket if g(lo) and g(hi) have the same sign.
    """
    if not lo < hi:
        raise ValueError("need lo < hi")
    if tol <= 0.0:
        raise ValueError("tol must be positive")
    glo, ghi = g(lo), g(hi)
    if glo == 0.0:
        return lo
    if ghi == 0.0:
        return hi
    if glo * ghi > 0.0:
        raise NoBracket(f"g({lo:g}) = {glo:g} and g({hi:g}) = {ghi:g} have equal sign")
    return float(_optimize.brentq(g, lo, hi, xtol=tol))


def power_substitution(f: Callable[[float], float], power: float):
    """Transform an integrand with an omega**(power-1) endpoint singularity
    at 0 into a smooth one via omega = x**(1/power).

    Returns the transformed integrand g(x) such that
    int_0^A f(omega) d omega = int_0^(A**power) g(x) dx.
    """
    inv = 1.0 / power

    def g(x: float) -> float:
        w = x**inv
        return f(w) * inv * x ** (inv - 1.0)

    return g


def integrate_powerlaw_endpoint(
    f: Callable[[float], float],
    upper: float,
    power: float,
    spec: QuadSpec = DEFAULT_QUAD,
) -> float:
    """Integral of f on (0, upper) where f ~ omega**(power-1) at the origin.

    For power >= 1 the integrand is already integrable-smooth enough for
    QUADPACK; for power < 1 the substitution omega = x**(1/power) removes
    the singularity entirely, avoiding adaptive thrash near 0.
    """
    if power >= 1.0:
        return _quad(f, 0.0, upper, spec, complex_func=False)
    g = power_substitution(f, power)
    return _quad(g, 0.0, upper**power, spec, complex_func=False)
