import math

import numpy as np
import pytest

from nonmarkov import numerics
from nonmarkov.errors import NoBracket, PoleOutOfRange
from nonmarkov.numerics import DEFAULT_QUAD, QuadSpec


def test_quadspec_validation():
    with pytest.raises(ValueError):
        QuadSpec(rel_tol=0.0)
    with pytest.raises(ValueError):
        QuadSpec(max_subdivisions=0)
    with pytest.raises(ValueError):
        QuadSpec(tail_cutoff_multiplier=2.0)


def test_integrate_complex_exponential():
    val = numerics.integrate(lambda x: np.exp((1j - 1.0) * x), 0.0, math.inf)
    assert abs(val - 1.0 / (1.0 - 1j)) < 1e-10


def test_integrate_tail_truncation_uses_scale():
    # exp(-x/5) over (0, inf) truncated at 40 * 5
    val = numerics.integrate(
        lambda x: math.exp(-x / 5.0), 0.0, math.inf, scale=5.0
    )
    assert abs(val - 5.0) < 1e-6


def test_oscillatory_matches_analytic():
    # int_0^inf e^{-x} e^{-i w x} dx = 1 / (1 + i w)
    for w in (0.0, 3.0, 57.0):
        val = numerics.integrate_oscillatory(lambda x: math.exp(-x), 0.0, math.inf, w)
        assert abs(val - 1.0 / (1.0 + 1j * w)) < 1e-9


def test_principal_value_odd_integrand():
    # P int_-1^1 dx / (0 - x) = 0 by symmetry
    val = numerics.principal_value(lambda x: 1.0, -1.0, 1.0, 0.0)
    assert abs(val) < 1e-12


def test_principal_value_analytic():
    # P int_0^2 x / (1 - x) dx = -2
    val = numerics.principal_value(lambda x: x, 0.0, 2.0, 1.0)
    assert abs(val + 2.0) < 1e-10


def test_principal_value_pole_outside():
    with pytest.raises(PoleOutOfRange):
        numerics.principal_value(lambda x: x, 0.0, 1.0, 2.0)


def test_find_root():
    r = numerics.find_root(lambda x: x * x - 2.0, 0.0, 2.0)
    assert abs(r - math.sqrt(2.0)) < 1e-10


def test_find_root_no_bracket():
    with pytest.raises(NoBracket):
        numerics.find_root(lambda x: x * x + 1.0, -1.0, 1.0)


def test_powerlaw_endpoint_subohmic():
    # int_0^1 x^(s-1) dx = 1/s with an integrable singularity at 0
    s = 0.5
    val = numerics.integrate_powerlaw_endpoint(
        lambda x: x ** (s - 1.0), 1.0, s, DEFAULT_QUAD
    )
    assert abs(val - 1.0 / s) < 1e-8
