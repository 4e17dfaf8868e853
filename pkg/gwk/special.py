# This file is part of gwk project governed by MIT license, see the LICENSE.txt file.
"""
special functions: modified bessel K, bessel J kernels, 1F2 series
"""

import logging
import math

import mpmath
import numpy as np
from scipy.special import j0, kv

from gwk.lib import ConfigError, NumericalError


LOGGER = logging.getLogger('gwk.special')

EPS = 1e-16
SERIES_CAP = 100000
CANCELLATION_DIGITS = 4


class SeriesNonconvergenceError(NumericalError):
    """hypergeometric series did not converge within the term cap"""


def bessel_k(nu, x):
    """modified bessel function of the second kind K_nu(x), vectorized over x, scalar order"""

    x_arr = np.asarray(x, dtype=float)
    if np.any(x_arr <= 0) or not np.all(np.isfinite(x_arr)):
        raise ConfigError('bessel_k requires finite x > 0')
    result = kv(abs(float(nu)), x_arr)
    return float(result) if np.ndim(result) == 0 else result


def bessel_j_radial(d, x):
    """bessel J of order d/2 - 1, the kernel of the radial fourier transform for d in 1..3"""

    x = np.asarray(x, dtype=float)
    if d == 2:
        return j0(x)
    if d == 1:
        return np.sqrt(2.0 / (math.pi * x)) * np.cos(x)
    if d == 3:
        return np.sqrt(2.0 / (math.pi * x)) * np.sin(x)
    raise ConfigError(f'radial transform supports d in 1..3, got {d}')


def _hyp1f2_double(a, b, c, z):
    """compensated double precision series, returns sum and the largest term magnitude"""

    total = 1.0
    compensation = 0.0
    term = 1.0
    largest = 1.0
    for k in range(SERIES_CAP):
        term *= (a + k) * z / ((b + k) * (c + k) * (k + 1))
        # kahan summation
        corrected = term - compensation
        updated = total + corrected
        compensation = (updated - total) - corrected
        total = updated
        largest = max(largest, abs(term))
        if abs(term) < EPS * abs(total) and k > abs(z) ** 0.5:
            return total, largest, k + 2
    raise SeriesNonconvergenceError(f'1F2({a}; {b}, {c}; {z}) did not converge within {SERIES_CAP} terms')


def hyp1f2(a, b, c, z):
    """
    generalized hypergeometric series 1F2(a; b, c; z)

    Summed term by term with compensation. When the partial sums lose more than a
    few digits to cancellation (large negative z), mpmath evaluates the function
    again with enough guard digits.
    """

    for param in (b, c):
        if param <= 0 and float(param).is_integer():
            raise ConfigError(f'1F2 lower parameters must not be nonpositive integers, got {b}, {c}')
    if z == 0:
        return 1.0

    total, largest, terms = _hyp1f2_double(a, b, c, z)
    lost = math.log10(largest / abs(total)) if total else float('inf')
    if lost <= CANCELLATION_DIGITS:
        return total

    # the double sum may be pure rounding noise, size guard digits on the largest term
    digits = 25 + 2 * int(math.ceil(math.log10(largest)))
    LOGGER.debug('1F2 cancellation at z=%g (%d terms, %.1f digits lost), evaluating with %d digits', z, terms, lost, digits)
    try:
        with mpmath.workdps(digits):
            return float(mpmath.hyp1f2(a, b, c, z))
    except mpmath.libmp.NoConvergence as exc:
        raise SeriesNonconvergenceError(f'1F2({a}; {b}, {c}; {z}) did not converge, {exc}') from None
