# This file is part of gwk project governed by MIT license, see the LICENSE.txt file.
"""
parametric covariance families

Generalized Wendland (GW) correlations with compact support, the Askey member
(kappa = 0), Matern and tapered Matern models. Parameters are validated against
the positive-definiteness bounds when a model is constructed; evaluation assumes
a validated model.
"""

import math
from abc import ABC, abstractmethod
from dataclasses import asdict, dataclass, replace
from enum import Enum
from functools import lru_cache

import numpy as np
from scipy.optimize import bisect
from scipy.special import beta as beta_fn, gamma, roots_jacobi, roots_legendre

from gwk.lib import ConfigError
from gwk.special import bessel_k


QUADRATURE_NODES = (16, 32, 64, 128)
QUADRATURE_RTOL = 1e-12
# bessel K underflows beyond this argument
MATERN_CUTOFF = 705.0
PRACTICAL_RANGE_LEVEL = 0.05

# wendland polynomial coefficients for integer kappa, phi = (1-r)^(mu+k) * sum(c_i r^i)
WENDLAND_POLYNOMIALS = {
    0: lambda mu: (1.0,),
    1: lambda mu: (1.0, mu + 1),
    2: lambda mu: (1.0, mu + 2, (mu**2 + 4 * mu + 3) / 3),
    3: lambda mu: (1.0, mu + 3, (2 * mu**2 + 12 * mu + 15) / 5, (mu**3 + 9 * mu**2 + 23 * mu + 15) / 15),
}


class InvalidParamsError(ConfigError):
    """covariance parameters violate a validity bound"""


class Family(str, Enum):
    """covariance family tags, as used in model json"""

    GW = 'gw'
    ASKEY = 'askey'
    MATERN = 'matern'
    TAPERED_MATERN = 'tapered_matern'


@dataclass(frozen=True)
class GWParams:
    """generalized wendland parameters"""

    mu: float
    kappa: float
    beta: float
    sigma2: float = 1.0
    d: int = 2

    @property
    def lam(self):
        """lambda(d, kappa), the smallest admissible mu"""
        return validity_bound(self.d, self.kappa)


@dataclass(frozen=True)
class MaternParams:
    """matern parameters"""

    nu: float
    alpha: float
    sigma2: float = 1.0
    d: int = 2


@dataclass(frozen=True)
class TaperedMaternParams:
    """matern model multiplied by a unit variance GW taper"""

    matern: MaternParams
    taper: GWParams


def validity_bound(d, kappa):
    """lambda(d, kappa) = (d+1)/2 + kappa"""
    return (d + 1) / 2 + kappa


def _as_array(r):
    r_arr = np.asarray(r, dtype=float)
    if np.any(r_arr < 0) or np.any(np.isnan(r_arr)):
        raise ConfigError('distance must be nonnegative')
    return r_arr


def _unwrap(value):
    return float(value) if np.ndim(value) == 0 else value


@lru_cache(maxsize=256)
def _jacobi_rule(nodes, alpha, beta):
    return roots_jacobi(nodes, alpha, beta)


@lru_cache(maxsize=16)
def _legendre_rule(nodes):
    return roots_legendre(nodes)


def _gw_integral(mu, kappa, t, nodes):
    """
    J(t) = int_0^1 s^kappa (t+s)^kappa (1-s)^(mu-1) ds on a graded mesh

    Panels halve towards s = 0 until their width drops below t, so the nearby
    singularity at s = -t never spoils gauss convergence. The panels touching the
    endpoints carry the algebraic endpoint factors as jacobi weights.
    """

    xg, wg = _legendre_rule(nodes)
    depth = np.clip(np.ceil(np.log2(1.0 / t)), 1, 60).astype(int)

    # [0, 2^-depth], weight s^kappa
    xj, wj = _jacobi_rule(nodes, 0.0, kappa)
    width = np.ldexp(1.0, -depth)[:, None]
    s = width * (1.0 + xj) / 2.0
    total = (width[:, 0] / 2.0) ** (kappa + 1) * (((t[:, None] + s) ** kappa * (1.0 - s) ** (mu - 1)) @ wj)

    # [1/2, 1], weight (1-s)^(mu-1)
    xj, wj = _jacobi_rule(nodes, mu - 1.0, 0.0)
    s = 0.75 + xj / 4.0
    total += 0.25**mu * (((s * (t[:, None] + s)) ** kappa) @ wj)

    for level in range(1, int(depth.max())):
        lower, upper = 2.0 ** -(level + 1), 2.0**-level
        s = (lower + upper) / 2.0 + (upper - lower) / 2.0 * xg
        panel = (upper - lower) / 2.0 * (((s * (t[:, None] + s)) ** kappa * (1.0 - s) ** (mu - 1)) @ wg)
        total += np.where(level < depth, panel, 0.0)

    return total


def gw_quadrature(mu, kappa, r):
    """
    GW correlation for 0 < r < 1 by quadrature of the integration-by-parts form

    phi(r) = int_r^1 (u^2-r^2)^kappa (1-u)^(mu-1) du / B(1+2kappa, mu); with
    u = r + (1-r)s the integral becomes (1-r)^(2kappa+mu) J(2r/(1-r)). The node
    count doubles until successive results agree to QUADRATURE_RTOL.
    """

    r = np.asarray(r, dtype=float)
    if r.size == 0:
        return np.zeros(0)
    t = 2.0 * r / (1.0 - r)
    scale = (1.0 - r) ** (2 * kappa + mu) / beta_fn(2 * kappa + 1, mu)

    previous = _gw_integral(mu, kappa, t, QUADRATURE_NODES[0])
    for nodes in QUADRATURE_NODES[1:]:
        current = _gw_integral(mu, kappa, t, nodes)
        if np.all(np.abs(current - previous) <= QUADRATURE_RTOL * np.abs(current)):
            break
        previous = current
    return scale * current


def gw_correlation(mu, kappa, r):
    """
    GW correlation phi_{mu,kappa}(r), zero for r >= 1

    kappa = 0 is the Askey function (1-r)^mu, kappa in {1, 2, 3} use the closed
    wendland forms, any other kappa goes through quadrature.
    """

    if kappa < 0:
        raise ConfigError(f'kappa must be nonnegative, got {kappa}')
    r_arr = _as_array(r)

    out = np.zeros(r_arr.shape)
    inside = r_arr < 1.0
    rin = r_arr[inside]
    if float(kappa).is_integer() and int(kappa) in WENDLAND_POLYNOMIALS:
        coeffs = WENDLAND_POLYNOMIALS[int(kappa)](mu)
        out[inside] = (1.0 - rin) ** (mu + kappa) * np.polynomial.polynomial.polyval(rin, coeffs)
    else:
        values = np.ones(rin.shape)
        positive = rin > 0
        if positive.any():
            values[positive] = gw_quadrature(mu, kappa, rin[positive])
        out[inside] = values
    return _unwrap(out)


def gw_derivative_at_zero(mu, kappa):
    """right derivative at r = 0 of the closed forms, kappa in {0, 1, 2, 3}"""

    if not (float(kappa).is_integer() and int(kappa) in WENDLAND_POLYNOMIALS):
        raise ConfigError(f'closed form available for kappa in 0..3, got {kappa}')
    coeffs = WENDLAND_POLYNOMIALS[int(kappa)](mu) + (0.0,)
    return coeffs[1] - (mu + kappa) * coeffs[0]


def matern_halfint(nu, x):
    """exponential-polynomial form of the matern correlation for nu = m + 1/2"""

    m = int(nu - 0.5)
    x = np.asarray(x, dtype=float)
    poly = sum(
        math.factorial(m + i) / (math.factorial(i) * math.factorial(m - i)) * (2.0 * x) ** (m - i)
        for i in range(m + 1)
    )
    return np.exp(-x) * math.factorial(m) / math.factorial(2 * m) * poly


def is_halfint(nu):
    """nu = m + 1/2 for a small integer m"""
    return float(2 * nu).is_integer() and int(2 * nu) % 2 == 1 and nu < 20


def matern_correlation(nu, x, use_closed_form=True):
    """matern correlation at scaled distance x = r / alpha"""

    x_arr = _as_array(x)
    out = np.zeros(x_arr.shape)
    out[x_arr == 0] = 1.0
    mask = (x_arr > 0) & (x_arr < MATERN_CUTOFF)
    xin = x_arr[mask]
    if use_closed_form and is_halfint(nu):
        out[mask] = matern_halfint(nu, xin)
    elif xin.size:
        out[mask] = 2.0 ** (1.0 - nu) / gamma(nu) * xin**nu * bessel_k(nu, xin)
    return _unwrap(out)


def gw_cov(p, r):
    """sigma2 * phi_{mu,kappa}(r / beta)"""
    return _unwrap(p.sigma2 * np.asarray(gw_correlation(p.mu, p.kappa, _as_array(r) / p.beta)))


def matern_cov(p, r):
    """sigma2 2^(1-nu)/Gamma(nu) (r/alpha)^nu K_nu(r/alpha), sigma2 at the origin"""
    return _unwrap(p.sigma2 * np.asarray(matern_correlation(p.nu, _as_array(r) / p.alpha)))


def tapered_matern_cov(p, r):
    """matern covariance times the taper correlation, supported on r < taper beta"""

    r_arr = _as_array(r)
    taper = np.asarray(gw_correlation(p.taper.mu, p.taper.kappa, r_arr / p.taper.beta))
    return _unwrap(np.asarray(matern_cov(p.matern, r_arr)) * taper)


def practical_range_root(nu):
    """c_nu such that the unit matern correlation drops to 0.05 at c_nu"""

    return bisect(lambda c: matern_correlation(nu, c) - PRACTICAL_RANGE_LEVEL, 1e-6, 50.0, xtol=1e-10)


def _check_dim(d):
    if d not in (1, 2, 3):
        return f'dimension d={d} outside 1..3'
    return None


def _validate_gw(p, askey=False):
    violation = _check_dim(p.d)
    if violation:
        return violation
    if askey and p.kappa != 0:
        return f'askey model requires kappa=0, got {p.kappa}'
    if p.kappa < 0:
        return f'kappa={p.kappa} violates kappa >= 0'
    if p.beta <= 0:
        return f'beta={p.beta} violates beta > 0'
    if p.sigma2 <= 0:
        return f'sigma2={p.sigma2} violates sigma2 > 0'
    if p.mu < p.lam:
        return f'mu={p.mu} violates mu >= lambda(d={p.d}, kappa={p.kappa}) = {p.lam}'
    return None


def _validate_matern(p):
    violation = _check_dim(p.d)
    if violation:
        return violation
    for name in ('nu', 'alpha', 'sigma2'):
        if getattr(p, name) <= 0:
            return f'{name}={getattr(p, name)} violates {name} > 0'
    return None


def validate(params, family=None):
    """None when all invariants hold, otherwise the description of the failed bound"""

    if isinstance(params, GWParams):
        return _validate_gw(params, askey=family == Family.ASKEY)
    if isinstance(params, MaternParams):
        return _validate_matern(params)
    if isinstance(params, TaperedMaternParams):
        violation = _validate_matern(params.matern)
        if violation:
            return f'matern: {violation}'
        violation = _validate_gw(params.taper)
        if violation:
            return f'taper: {violation}'
        if params.taper.sigma2 != 1:
            return f'taper: sigma2={params.taper.sigma2} violates sigma2 = 1'
        if params.taper.d != params.matern.d:
            return f'taper dimension {params.taper.d} differs from matern dimension {params.matern.d}'
        return None
    return f'unknown parameter type {type(params).__name__}'


REGISTERED_FAMILIES = {}


def register(family):
    """register model implementation for family"""

    def register_decorator(cls):
        cls.family = family
        REGISTERED_FAMILIES[family] = cls
        return cls

    return register_decorator


class CovarianceModel(ABC):
    """validated covariance model, immutable value type"""

    family = None

    def __init__(self, params):
        violation = validate(params, self.family)
        if violation:
            raise InvalidParamsError(violation)
        self.params = params

    def __repr__(self):
        return f'<{self.__class__.__name__} {self.params}>'

    def __eq__(self, other):
        return isinstance(other, CovarianceModel) and self.family == other.family and self.params == other.params

    def __hash__(self):
        return hash((self.family, self.params))

    @property
    @abstractmethod
    def dim(self):
        """spatial dimension"""

    @property
    @abstractmethod
    def variance(self):
        """covariance at the origin"""

    @property
    def support(self):
        """compact support radius, None for globally supported models"""
        return None

    @abstractmethod
    def correlation(self, r):
        """correlation at distance r, vectorized"""

    @abstractmethod
    def with_variance(self, sigma2):
        """same model with another variance"""

    def covariance(self, r):
        """covariance at distance r, vectorized"""
        return _unwrap(self.variance * np.asarray(self.correlation(r)))

    def to_dict(self):
        """json compatible representation"""

        params = asdict(self.params)
        dim = self.dim
        if 'd' in params:
            params.pop('d')
        for value in params.values():
            if isinstance(value, dict):
                value.pop('d', None)
        return {'family': self.family.value, 'params': params, 'dim': dim}


@register(Family.GW)
class GWModel(CovarianceModel):
    """generalized wendland covariance"""

    @property
    def dim(self):
        return self.params.d

    @property
    def variance(self):
        return self.params.sigma2

    @property
    def support(self):
        return self.params.beta

    def correlation(self, r):
        return gw_correlation(self.params.mu, self.params.kappa, _as_array(r) / self.params.beta)

    def covariance(self, r):
        return gw_cov(self.params, r)

    def with_variance(self, sigma2):
        return self.__class__(replace(self.params, sigma2=sigma2))

    def with_support(self, beta):
        """same model with another compact support"""
        return self.__class__(replace(self.params, beta=beta))

    def to_dict(self):
        data = super().to_dict()
        if self.family == Family.ASKEY:
            data['params'].pop('kappa')
        return data


@register(Family.ASKEY)
class AskeyModel(GWModel):
    """askey covariance sigma2 (1 - r/beta)_+^mu, the kappa = 0 member"""


@register(Family.MATERN)
class MaternModel(CovarianceModel):
    """matern covariance"""

    @property
    def dim(self):
        return self.params.d

    @property
    def variance(self):
        return self.params.sigma2

    def correlation(self, r):
        return matern_correlation(self.params.nu, _as_array(r) / self.params.alpha)

    def covariance(self, r):
        return matern_cov(self.params, r)

    def with_variance(self, sigma2):
        return self.__class__(replace(self.params, sigma2=sigma2))


@register(Family.TAPERED_MATERN)
class TaperedMaternModel(CovarianceModel):
    """matern covariance tapered by a GW correlation"""

    @property
    def dim(self):
        return self.params.matern.d

    @property
    def variance(self):
        return self.params.matern.sigma2

    @property
    def support(self):
        return self.params.taper.beta

    def correlation(self, r):
        return _unwrap(np.asarray(tapered_matern_cov(self.params, r)) / self.params.matern.sigma2)

    def covariance(self, r):
        return tapered_matern_cov(self.params, r)

    def with_variance(self, sigma2):
        return self.__class__(replace(self.params, matern=replace(self.params.matern, sigma2=sigma2)))

    def with_support(self, beta):
        """same model with another taper support"""
        return self.__class__(replace(self.params, taper=replace(self.params.taper, beta=beta)))


def build_model(params, family=None):
    """model for params; GW parameters with kappa = 0 map to the askey family unless told otherwise"""

    if family is None:
        if isinstance(params, GWParams):
            family = Family.ASKEY if params.kappa == 0 else Family.GW
        elif isinstance(params, MaternParams):
            family = Family.MATERN
        else:
            family = Family.TAPERED_MATERN
    return REGISTERED_FAMILIES[Family(family)](params)
