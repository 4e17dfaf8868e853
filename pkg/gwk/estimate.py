# This file is part of gwk project governed by MIT license, see the LICENSE.txt file.
"""
maximum likelihood for the GW model with known shape

With mu and kappa fixed, the variance profiles out of the gaussian likelihood as
sigma2_hat(beta) = z' R(beta)^-1 z / n, leaving a scalar search over the compact
support beta.
"""

import logging
import math
from dataclasses import dataclass

import numpy as np
from scipy.spatial.distance import pdist, squareform

from gwk.covariance import GWParams, build_model, gw_correlation
from gwk.lib import ConfigError, NumericalError
from gwk.linalg import NotPositiveDefiniteError, cholesky, quad_form


LOGGER = logging.getLogger('gwk.estimate')

INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0
GRID_POINTS = 32
DEFAULT_TOL = 1e-6


class DegenerateDataError(NumericalError):
    """data vector carries no information, z' R^-1 z = 0"""


@dataclass(frozen=True)
class FitResult:
    """profile likelihood fit"""

    sigma2_hat: float
    beta_hat: float
    microergodic_hat: float
    loglik: float
    evaluations: int
    interval: tuple


@dataclass(frozen=True)
class MicroergodicStat:
    """standardized microergodic estimate, asymptotically N(0, 1)"""

    value: float


@dataclass(frozen=True)
class ScalarOptimum:
    """maximize_scalar outcome"""

    argmax: float
    value: float
    evaluations: int


def maximize_scalar(func, lower, upper, tol=DEFAULT_TOL, grid_points=GRID_POINTS):
    """
    maximize a scalar function on [lower, upper]

    A log spaced grid picks the starting bracket, golden section narrows it below
    tol relative width and one parabolic step through the final bracket polishes
    the result. Points where func raises NumericalError count as -inf.
    """

    if not 0 < lower <= upper:
        raise ConfigError(f'invalid search interval [{lower}, {upper}]')

    evaluations = 0

    def evaluate(point):
        nonlocal evaluations
        evaluations += 1
        try:
            return float(func(point))
        except NumericalError as exc:
            LOGGER.debug('objective failed at %g, %s', point, exc)
            return -math.inf

    if lower == upper:
        return ScalarOptimum(lower, evaluate(lower), evaluations)

    grid = np.geomspace(lower, upper, grid_points)
    values = [evaluate(point) for point in grid]
    if all(value == -math.inf for value in values):
        raise NotPositiveDefiniteError('objective not evaluable at any grid point')
    best = int(np.argmax(values))
    candidates = [(float(grid[best]), values[best])]

    left, right = float(grid[max(best - 1, 0)]), float(grid[min(best + 1, grid_points - 1)])
    inner_left = right - INV_PHI * (right - left)
    inner_right = left + INV_PHI * (right - left)
    f_left, f_right = evaluate(inner_left), evaluate(inner_right)
    while right - left > tol * (left + right) / 2:
        if f_left >= f_right:
            right, inner_right, f_right = inner_right, inner_left, f_left
            inner_left = right - INV_PHI * (right - left)
            f_left = evaluate(inner_left)
        else:
            left, inner_left, f_left = inner_left, inner_right, f_right
            inner_right = left + INV_PHI * (right - left)
            f_right = evaluate(inner_right)
    candidates += [(inner_left, f_left), (inner_right, f_right)]

    # parabola through the final bracket
    middle = (left + right) / 2
    f_lo, f_mid, f_hi = evaluate(left), evaluate(middle), evaluate(right)
    candidates += [(left, f_lo), (middle, f_mid), (right, f_hi)]
    numer = (middle - left) ** 2 * (f_mid - f_hi) - (middle - right) ** 2 * (f_mid - f_lo)
    denom = (middle - left) * (f_mid - f_hi) - (middle - right) * (f_mid - f_lo)
    if denom != 0 and math.isfinite(denom):
        vertex = middle - 0.5 * numer / denom
        if left <= vertex <= right:
            candidates.append((vertex, evaluate(vertex)))

    argmax, value = max(candidates, key=lambda item: item[1])
    return ScalarOptimum(argmax, value, evaluations)


class ProfileLikelihood:
    """gaussian likelihood of a GW(mu, kappa) field over one location set"""

    def __init__(self, locs, mu, kappa, ridge=0.0):
        # validates the shape bound for the dimension
        build_model(GWParams(mu=mu, kappa=kappa, beta=1.0, d=locs.dim))
        self.locs = locs
        self.mu = mu
        self.kappa = kappa
        self.ridge = ridge
        self.condensed = pdist(locs.coords) if len(locs) > 1 else np.zeros(0)

    def __repr__(self):
        return f'<ProfileLikelihood n={len(self.locs)} mu={self.mu} kappa={self.kappa}>'

    @property
    def n(self):
        """number of observations"""
        return len(self.locs)

    def correlation_matrix(self, beta):
        """R(beta), correlation evaluated once per pair"""

        if beta <= 0:
            raise ConfigError(f'beta must be positive, got {beta}')
        matrix = squareform(np.asarray(gw_correlation(self.mu, self.kappa, self.condensed / beta))) if self.n > 1 else np.zeros((self.n, self.n))
        matrix[np.diag_indices(self.n)] = 1.0 + self.ridge
        return matrix

    def factor(self, beta):
        """cholesky factor of R(beta)"""
        return cholesky(self.correlation_matrix(beta))

    def _check_data(self, z):
        z = np.asarray(z, dtype=float).reshape(-1)
        if z.shape[0] != self.n or not self.n:
            raise ConfigError(f'data vector of length {z.shape[0]} for {self.n} locations')
        return z

    def loglik(self, z, sigma2, beta):
        """-1/2 (n log(2 pi sigma2) + log|R| + z' R^-1 z / sigma2)"""

        z = self._check_data(z)
        if sigma2 <= 0:
            raise ConfigError(f'sigma2 must be positive, got {sigma2}')
        factor = self.factor(beta)
        return -0.5 * (self.n * math.log(2 * math.pi * sigma2) + factor.logdet + quad_form(factor, z) / sigma2)

    def _sigma2_hat(self, z, factor):
        value = quad_form(factor, z) / self.n
        if value <= 0:
            raise DegenerateDataError('data vector is identically zero')
        return value

    def sigma2_hat(self, z, beta):
        """z' R(beta)^-1 z / n"""
        return self._sigma2_hat(self._check_data(z), self.factor(beta))

    def profile_loglik(self, z, beta):
        """-1/2 (n log 2pi + n log sigma2_hat(beta) + log|R(beta)| + n)"""

        z = self._check_data(z)
        factor = self.factor(beta)
        variance = self._sigma2_hat(z, factor)
        value = -0.5 * (self.n * math.log(2 * math.pi) + self.n * math.log(variance) + factor.logdet + self.n)
        LOGGER.debug('profile loglik at beta=%g: %.12g', beta, value)
        return value

    def fit(self, z, interval, tol=DEFAULT_TOL):
        """beta_hat maximizing the profile over interval, with the matching variance"""

        z = self._check_data(z)
        if np.all(z == 0):
            raise DegenerateDataError('data vector is identically zero')
        lower, upper = interval
        optimum = maximize_scalar(lambda beta: self.profile_loglik(z, beta), lower, upper, tol=tol)
        variance = self.sigma2_hat(z, optimum.argmax)
        return FitResult(
            sigma2_hat=variance,
            beta_hat=optimum.argmax,
            microergodic_hat=variance / optimum.argmax ** (1 + 2 * self.kappa),
            loglik=optimum.value,
            evaluations=optimum.evaluations,
            interval=(lower, upper),
        )


def loglik(z, locs, mu, kappa, sigma2, beta):
    """gaussian log likelihood of z under GW(mu, kappa, beta, sigma2)"""
    return ProfileLikelihood(locs, mu, kappa).loglik(z, sigma2, beta)


def sigma2_hat(z, locs, mu, kappa, beta):
    """profiled variance estimate at beta"""
    return ProfileLikelihood(locs, mu, kappa).sigma2_hat(z, beta)


def profile_loglik(z, locs, mu, kappa, beta):
    """profile log likelihood at beta"""
    return ProfileLikelihood(locs, mu, kappa).profile_loglik(z, beta)


def fit_profile(z, locs, mu, kappa, interval, tol=DEFAULT_TOL):
    """profile maximum likelihood fit of beta and sigma2"""
    return ProfileLikelihood(locs, mu, kappa).fit(z, interval, tol)


def microergodic_stat(sigma2_hat_val, x, sigma0sq, beta0, kappa, n):
    """sqrt(n/2) (sigma2_hat(x) beta0^(1+2kappa) / (sigma0^2 x^(1+2kappa)) - 1)"""

    if min(sigma2_hat_val, x, sigma0sq, beta0) <= 0 or n < 1:
        raise ConfigError('microergodic statistic requires positive inputs')
    exponent = 1 + 2 * kappa
    return MicroergodicStat(math.sqrt(n / 2) * (sigma2_hat_val * beta0**exponent / (sigma0sq * x**exponent) - 1))
