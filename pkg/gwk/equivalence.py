# This file is part of gwk project governed by MIT license, see the LICENSE.txt file.
"""
equivalence of gaussian measures under GW and matern models

Microergodic parameters, the compatibility conditions between GW models and
between a matern and a GW model, the equivalent compact support, and a truncated
numerical look at the spectral integral criterion.
"""

import logging
import math
from dataclasses import dataclass

from scipy.integrate import quad
from scipy.special import beta as beta_fn, gamma, poch

from gwk.covariance import Family, GWParams, MaternParams, validity_bound
from gwk.lib import ConfigError, GwkError


LOGGER = logging.getLogger('gwk.equivalence')

DEFAULT_TOL = 1e-9
INTEGRAL_RTOL = 1e-8


class TheoremInapplicableError(GwkError):
    """the models lie outside the hypotheses of the equivalence results"""


@dataclass(frozen=True)
class Microergodic:
    """consistently estimable parameter combination"""

    value: float
    family: Family


@dataclass(frozen=True)
class CompatibilityReport:
    """outcome of an equivalence check"""

    equivalent: bool
    condition_checked: str
    mu_bound_ok: bool
    smoothness_match_ok: bool
    constant: float = None


@dataclass(frozen=True)
class EquivalenceDiagnostic:
    """truncated spectral integral at z_max and 2 z_max"""

    value: float
    value_doubled: float
    growth: float
    z_max: float


def microergodic_gw(p):
    """sigma2 / beta^(1+2kappa)"""
    return Microergodic(p.sigma2 / p.beta ** (1 + 2 * p.kappa), Family.GW)


def microergodic_matern(p):
    """sigma2 / alpha^(2nu)"""
    return Microergodic(p.sigma2 / p.alpha ** (2 * p.nu), Family.MATERN)


def _close(left, right, tol):
    return abs(left - right) <= tol * max(abs(left), abs(right))


def mu_bound(mu, kappa, d):
    """mu > lambda(d, kappa) + d/2"""
    return mu > validity_bound(d, kappa) + d / 2


def gw_gw_equivalent(p0, p1, tol=DEFAULT_TOL):
    """equivalence of two GW models sharing mu, kappa and d"""

    if (p0.mu, p0.kappa, p0.d) != (p1.mu, p1.kappa, p1.d):
        raise TheoremInapplicableError(
            f'GW equivalence requires equal mu, kappa and d, got {(p0.mu, p0.kappa, p0.d)} and {(p1.mu, p1.kappa, p1.d)}'
        )
    if p0.d not in (1, 2, 3):
        raise TheoremInapplicableError(f'GW equivalence holds for d in 1..3, got {p0.d}')

    bound_ok = mu_bound(p0.mu, p0.kappa, p0.d)
    match = _close(microergodic_gw(p0).value, microergodic_gw(p1).value, tol)
    return CompatibilityReport(
        equivalent=bound_ok and match,
        condition_checked='sigma0^2/beta0^(1+2kappa) = sigma1^2/beta1^(1+2kappa), mu > lambda + d/2',
        mu_bound_ok=bound_ok,
        smoothness_match_ok=True,
    )


def matern_gw_constant(kappa, mu):
    """mu Gamma(2kappa+mu+1) / Gamma(mu+1), equal to mu for the askey case"""

    if mu <= 0:
        raise ConfigError(f'mu must be positive, got {mu}')
    return float(mu * poch(mu + 1, 2 * kappa))


def matern_gw_constant_general(nu, kappa, mu, d):
    """constant of the matern/GW compatibility condition for general nu, kappa"""

    if kappa > 0:
        return (
            mu * 2.0**-d * gamma(nu) * gamma(kappa) * gamma(2 * kappa + d)
            / (gamma(nu + d / 2) * gamma(kappa + d / 2) * beta_fn(2 * kappa, mu + 1))
        )
    return mu * 2.0 ** (1 - d) * gamma(0.5) * gamma(d) / (gamma(0.5 + d / 2) * gamma(d / 2))


def matern_gw_equivalent(pm, pg, tol=DEFAULT_TOL):
    """
    compatibility of a matern and a GW model

    Equivalent iff nu = kappa + 1/2, mu > lambda + d/2 and
    sigma_m^2 alpha^(-2nu) = C sigma_g^2 beta^(-(1+2kappa)). Arguments are accepted
    in either order.
    """

    if isinstance(pm, GWParams) and isinstance(pg, MaternParams):
        pm, pg = pg, pm
    if pm.d != pg.d:
        raise TheoremInapplicableError(f'models live in different dimensions {pm.d} and {pg.d}')
    if pg.d not in (1, 2, 3):
        raise TheoremInapplicableError(f'matern/GW equivalence holds for d in 1..3, got {pg.d}')

    constant = matern_gw_constant(pg.kappa, pg.mu)
    smoothness_ok = pm.nu == pg.kappa + 0.5
    bound_ok = mu_bound(pg.mu, pg.kappa, pg.d)
    match = _close(microergodic_matern(pm).value, constant * microergodic_gw(pg).value, tol)
    return CompatibilityReport(
        equivalent=smoothness_ok and bound_ok and match,
        condition_checked='sigma0^2 alpha^(-2nu) = C sigma1^2 beta^(-(1+2kappa)), nu = kappa + 1/2, mu > lambda + d/2',
        mu_bound_ok=bound_ok,
        smoothness_match_ok=smoothness_ok,
        constant=constant,
    )


def equivalent_support(pm, kappa, mu, sigma1sq):
    """
    compact support beta1 making GW(mu, kappa, beta1, sigma1sq) equivalent to the matern model

    beta1 = [C sigma1sq alpha^(2nu) / sigma_m^2]^(1/(1+2kappa))
    """

    if pm.nu != kappa + 0.5:
        raise TheoremInapplicableError(f'equivalent support requires nu = kappa + 1/2, got nu={pm.nu}, kappa={kappa}')
    if not mu_bound(mu, kappa, pm.d):
        raise TheoremInapplicableError(
            f'equivalent support requires mu > lambda + d/2 = {validity_bound(pm.d, kappa) + pm.d / 2}, got {mu}'
        )
    if sigma1sq <= 0:
        raise ConfigError(f'sigma1sq must be positive, got {sigma1sq}')

    constant = matern_gw_constant(kappa, mu)
    return (constant * sigma1sq * pm.alpha ** (2 * pm.nu) / pm.sigma2) ** (1 / (1 + 2 * kappa))


def equivalence_integral(sd0, sd1, c, z_max):
    """int_c^z_max z^(d-1) ((f1 - f0)/f0)^2 dz, truncated; a diagnostic, never a proof of convergence"""

    if not 0 < c < z_max:
        raise ConfigError(f'equivalence integral requires 0 < c < z_max, got {c}, {z_max}')
    dim = sd0.model.dim

    def integrand(z):
        base = sd0(z)
        return z ** (dim - 1) * ((sd1(z) - base) / base) ** 2

    value, error = quad(integrand, c, z_max, epsabs=0.0, epsrel=INTEGRAL_RTOL, limit=400)
    LOGGER.debug('equivalence integral on [%g, %g] = %g (abserr %g)', c, z_max, value, error)
    return value


def equivalence_diagnostic(sd0, sd1, c, z_max):
    """truncated integral at z_max and 2 z_max with the relative growth between them"""

    value = equivalence_integral(sd0, sd1, c, z_max)
    value_doubled = value + equivalence_integral(sd0, sd1, z_max, 2 * z_max)
    growth = (value_doubled - value) / value if value > 0 else (0.0 if value_doubled == 0 else math.inf)
    return EquivalenceDiagnostic(value=value, value_doubled=value_doubled, growth=growth, z_max=z_max)
