# This file is part of gwk project governed by MIT license, see the LICENSE.txt file.
"""
special functions tests
"""

import math

import mpmath
import numpy as np
import pytest
from scipy.integrate import quad
from scipy.special import jv

from gwk.lib import ConfigError
from gwk.special import bessel_j_radial, bessel_k, hyp1f2


def test_bessel_k_closed_forms():
    """test half integer orders"""

    assert bessel_k(0.5, 1.0) == pytest.approx(math.sqrt(math.pi / 2) * math.exp(-1), rel=1e-12)
    assert bessel_k(1.5, 2.0) == pytest.approx(math.sqrt(math.pi / 4) * math.exp(-2) * 1.5, rel=1e-12)
    assert bessel_k(-0.5, 1.0) == bessel_k(0.5, 1.0)


def test_bessel_k_integral_representation():
    """test K_1(1) against int_0^inf exp(-x cosh t) cosh(nu t) dt"""

    # integrand is below 1e-300 beyond t = 8
    oracle = quad(lambda t: math.exp(-math.cosh(t)) * math.cosh(t), 0, 8.0, epsabs=0, epsrel=1e-13, limit=200)[0]
    assert bessel_k(1.0, 1.0) == pytest.approx(oracle, rel=1e-10)


def test_bessel_k_vectorized():
    """test array input and extended precision agreement"""

    x = np.geomspace(1e-6, 50, 40)
    for nu in (0.3, 1.0, 2.7, 5.0):
        values = bessel_k(nu, x)
        assert values.shape == x.shape
        expected = np.array([float(mpmath.besselk(nu, item)) for item in x])
        assert np.allclose(values, expected, rtol=1e-10, atol=0)

    with pytest.raises(ConfigError):
        bessel_k(1.0, 0.0)


def test_bessel_j_radial():
    """test radial kernels against scipy bessel J of order d/2 - 1"""

    x = np.linspace(0.1, 30, 50)
    for dim in (1, 2, 3):
        assert np.allclose(bessel_j_radial(dim, x), jv(dim / 2 - 1, x), rtol=1e-12, atol=1e-14)

    with pytest.raises(ConfigError):
        bessel_j_radial(4, x)


def test_hyp1f2():
    """test series against mpmath, including the cancellation regime"""

    assert hyp1f2(1.5, 2.0, 2.5, 0.0) == 1.0
    for a, b, c, z in [(1.5, 3.0, 3.5, -0.3), (2.0, 4.25, 4.75, -25.0), (2.5, 5.0, 5.5, -900.0), (1.5, 3.0, 3.5, 4.0)]:
        expected = float(mpmath.hyp1f2(a, b, c, z))
        assert hyp1f2(a, b, c, z) == pytest.approx(expected, rel=1e-10, abs=1e-300)

    with pytest.raises(ConfigError):
        hyp1f2(1.0, -2.0, 1.0, -1.0)
