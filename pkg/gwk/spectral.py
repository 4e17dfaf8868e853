# This file is part of gwk project governed by MIT license, see the LICENSE.txt file.
"""
isotropic spectral densities

The isotropic transform is normalized as
f(z) = (2pi)^(-d/2) z^(1-d/2) int_0^inf u^(d/2) J_(d/2-1)(uz) C(u) du,
under which the matern density has its textbook closed form.
"""

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np
from scipy.integrate import quad
from scipy.optimize import brentq
from scipy.special import beta as beta_fn, gamma

from gwk.covariance import Family, GWParams, MaternParams, validity_bound
from gwk.lib import ConfigError
from gwk.special import bessel_j_radial, hyp1f2


HANKEL_RTOL = 1e-12
# matern oracle integrals stop where the correlation drops below this level
MATERN_TAIL = 1e-14
TAIL_POINTS = 50


@dataclass(frozen=True)
class SpectralConstants:
    """constants of the GW spectral density for shape (mu, kappa, d)"""

    lam: float
    L: float  # pylint: disable=invalid-name
    K: float  # pylint: disable=invalid-name
    c3: float
    c4: float
    c5: float
    mu: float
    kappa: float
    d: int

    @property
    def scale(self):
        """density at z = 0 for unit variance and support, L for kappa > 0 and K for the askey case"""
        return self.L if self.kappa > 0 else self.K


def spectral_constants(mu, kappa, d):
    """compute SpectralConstants"""

    lam = validity_bound(d, kappa)
    const_k = (
        2.0 ** (-kappa - d + 1) * math.pi ** (-d / 2) * gamma(mu + 1) * gamma(2 * kappa + d)
        / (gamma(kappa + d / 2) * gamma(mu + 2 * lam))
    )
    const_l = const_k * gamma(kappa) / (2.0 ** (1 - kappa) * beta_fn(2 * kappa, mu + 1)) if kappa > 0 else math.nan
    return SpectralConstants(
        lam=lam,
        L=const_l,
        K=const_k,
        c3=gamma(mu + 2 * lam) / gamma(mu),
        c4=gamma(mu + 2 * lam) / (gamma(lam) * 2.0 ** (lam - 1)),
        c5=math.pi / 2 * (mu + lam),
        mu=mu,
        kappa=kappa,
        d=d,
    )


def _map_scalar(func, z):
    z_arr = np.asarray(z, dtype=float)
    if np.any(z_arr < 0):
        raise ConfigError('frequency must be nonnegative')
    values = np.array([func(item) for item in z_arr.ravel()]).reshape(z_arr.shape)
    return float(values) if values.ndim == 0 else values


def matern_sd(p, z):
    """Gamma(nu+d/2)/(pi^(d/2) Gamma(nu)) sigma2 alpha^d / (1 + alpha^2 z^2)^(nu+d/2)"""

    z_arr = np.asarray(z, dtype=float)
    if np.any(z_arr < 0):
        raise ConfigError('frequency must be nonnegative')
    exponent = p.nu + p.d / 2
    values = gamma(exponent) / (math.pi ** (p.d / 2) * gamma(p.nu)) * p.sigma2 * p.alpha**p.d / (1 + (p.alpha * z_arr) ** 2) ** exponent
    return float(values) if values.ndim == 0 else values


def gw_sd(p, z, constants=None):
    """
    GW spectral density sigma2 L beta^d 1F2(lam; lam+mu/2, lam+mu/2+1/2; -(z beta)^2/4)

    K replaces L for the askey member. Raises SeriesNonconvergenceError where
    the series cannot be summed.
    """

    constants = constants or spectral_constants(p.mu, p.kappa, p.d)
    lam = constants.lam
    upper_b = lam + p.mu / 2
    prefactor = p.sigma2 * constants.scale * p.beta**p.d
    return _map_scalar(lambda zz: prefactor * hyp1f2(lam, upper_b, upper_b + 0.5, -((zz * p.beta) ** 2) / 4), z)


def gw_sd_asymptotic(p, z, constants=None):
    """two-term large-z expansion sigma2 L beta^d [c3 (z beta)^-2lam + c4 (z beta)^-(mu+lam) cos(z beta - c5)]"""

    constants = constants or spectral_constants(p.mu, p.kappa, p.d)
    z_arr = np.asarray(z, dtype=float)
    if np.any(z_arr <= 0):
        raise ConfigError('asymptotic density requires positive frequency')
    zb = z_arr * p.beta
    values = p.sigma2 * constants.scale * p.beta**p.d * (
        constants.c3 * zb ** (-2 * constants.lam)
        + constants.c4 * zb ** (-(p.mu + constants.lam)) * np.cos(zb - constants.c5)
    )
    return float(values) if values.ndim == 0 else values


class SpectralDensity:
    """spectral density of a GW, askey or matern model"""

    def __init__(self, model):
        if model.family not in (Family.GW, Family.ASKEY, Family.MATERN):
            raise ConfigError(f'spectral density not available for {model.family.value}')
        self.model = model

    def __repr__(self):
        return f'<SpectralDensity {self.model}>'

    @cached_property
    def constants(self):
        """SpectralConstants for GW models, None for matern"""

        params = self.model.params
        if isinstance(params, GWParams):
            return spectral_constants(params.mu, params.kappa, params.d)
        return None

    def __call__(self, z):
        if isinstance(self.model.params, MaternParams):
            return matern_sd(self.model.params, z)
        return gw_sd(self.model.params, z, self.constants)

    def asymptotic(self, z):
        """large-z expansion, GW models only"""

        if self.constants is None:
            raise ConfigError('asymptotic expansion is defined for GW models')
        return gw_sd_asymptotic(self.model.params, z, self.constants)


def _integration_limit(model):
    if model.support is not None:
        return model.support
    scale = model.params.alpha
    return brentq(lambda u: model.correlation(u) - MATERN_TAIL, 1e-3 * scale, 1e3 * scale)


def hankel_oracle(model, z):
    """
    spectral density by direct quadrature of the isotropic transform

    The integral is truncated at the compact support, or where the matern
    correlation decays below MATERN_TAIL, and split into half periods of the bessel
    kernel.
    """

    if z <= 0:
        raise ConfigError('hankel oracle requires z > 0')
    dim = model.dim
    limit = _integration_limit(model)

    def integrand(u):
        return u ** (dim / 2) * bessel_j_radial(dim, u * z) * model.covariance(u)

    edges = np.append(np.arange(0.0, limit, math.pi / z), limit)
    total = sum(
        quad(integrand, lo, hi, epsabs=0.0, epsrel=HANKEL_RTOL, limit=200)[0]
        for lo, hi in zip(edges[:-1], edges[1:])
        if hi > lo
    )
    return (2 * math.pi) ** (-dim / 2) * z ** (1 - dim / 2) * total


def tail_slope(p, z_lo, z_hi, points=TAIL_POINTS):
    """least-squares slope of log density against log z on a log grid"""

    if not 0 < z_lo < z_hi:
        raise ConfigError(f'tail slope requires 0 < z_lo < z_hi, got {z_lo}, {z_hi}')
    grid = np.geomspace(z_lo, z_hi, points)
    density = np.asarray(gw_sd(p, grid))
    return float(np.polyfit(np.log(grid), np.log(density), 1)[0])
