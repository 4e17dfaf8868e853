# This file is part of gwk project governed by MIT license, see the LICENSE.txt file.
"""
kriging under a possibly misspecified model

The predictor uses the assumed model, mean squared errors are evaluated exactly
under either measure.
"""

import logging
from dataclasses import dataclass

import numpy as np

from gwk.lib import ConfigError, NumericalError
from gwk.linalg import assemble_dense, assemble_sparse, cg_solve, cholesky, quad_form, solve


LOGGER = logging.getLogger('gwk.predict')

SOLVERS = ('dense', 'cg')
CG_TOL = 1e-10
CG_MAXITER = 10000


class DegenerateRatioError(NumericalError):
    """ratio denominator vanishes, typically a prediction at an observed site"""


@dataclass(frozen=True)
class PredictionResult:
    """kriging prediction with its error under both measures"""

    predicted: float
    weights: np.ndarray
    mse_true_model: float
    mse_assumed_model: float


@dataclass(frozen=True)
class RatioPair:
    """efficiency ratio u1 and error variance ratio u2"""

    u1: float
    u2: float


def _check(model, locs, s0):
    s0 = np.asarray(s0, dtype=float).reshape(-1)
    if s0.shape[0] != locs.dim or model.dim != locs.dim:
        raise ConfigError(f'dimension mismatch, model {model.dim}, locations {locs.dim}, point {s0.shape[0]}')
    return s0


def cross_correlation(model, locs, s0):
    """correlation between every observation and s0"""
    return np.asarray(model.correlation(locs.distances_to(_check(model, locs, s0))), dtype=float).reshape(-1)


def kriging_weights(model, locs, s0, solver='dense', tol=CG_TOL, max_iter=CG_MAXITER):
    """
    R^-1 c for the model correlations

    A prediction point coinciding with an observation gets the unit weight of that
    observation. The cg solver needs a compactly supported model.
    """

    if solver not in SOLVERS:
        raise ConfigError(f'unknown solver {solver}, expected one of {SOLVERS}')
    s0 = _check(model, locs, s0)
    if not len(locs):
        return np.zeros(0)

    observed = np.flatnonzero(locs.distances_to(s0) == 0)
    if observed.size:
        weights = np.zeros(len(locs))
        weights[observed[0]] = 1.0
        return weights

    cross = cross_correlation(model, locs, s0)
    if solver == 'cg':
        return cg_solve(assemble_sparse(model, locs), cross, tol=tol, max_iter=max_iter)
    return solve(cholesky(assemble_dense(model, locs)), cross)


def blup(z, locs, s0, model, solver='dense'):
    """simple kriging prediction c' R^-1 z and its weights"""

    z = np.asarray(z, dtype=float).reshape(-1)
    if z.shape[0] != len(locs):
        raise ConfigError(f'data vector of length {z.shape[0]} for {len(locs)} locations')
    weights = kriging_weights(model, locs, s0, solver=solver)
    return float(weights @ z), weights


def _true_error(weights, locs, s0, true_model):
    cross = cross_correlation(true_model, locs, s0)
    matrix = assemble_dense(true_model, locs).values
    value = true_model.variance * (1.0 - 2.0 * weights @ cross + weights @ matrix @ weights)
    return max(float(value), 0.0)


def _claimed_error(weights, locs, s0, assumed_model, variance=None):
    variance = assumed_model.variance if variance is None else variance
    cross = cross_correlation(assumed_model, locs, s0)
    return max(float(variance * (1.0 - weights @ cross)), 0.0)


def mse_true(locs, s0, true_model, assumed_model, solver='dense'):
    """
    mean squared error under the true model of the predictor built from the assumed model

    sigma0^2 (1 - 2 w'c0 + w' R0 w) with w = R~^-1 c~
    """

    weights = kriging_weights(assumed_model, locs, s0, solver=solver)
    return _true_error(weights, locs, s0, true_model)


def mse_assumed(locs, s0, assumed_model):
    """error variance the assumed model claims for its own predictor, sigma1^2 (1 - c' R^-1 c)"""
    return _claimed_error(kriging_weights(assumed_model, locs, s0), locs, s0, assumed_model)


def _ratio(numerator, denominator, what):
    if denominator <= 0:
        raise DegenerateRatioError(f'{what} denominator vanishes')
    return numerator / denominator


def ratio_u1(locs, s0, true_model, assumed_model, solver='dense'):
    """true error of the assumed predictor over true error of the optimal predictor, >= 1"""

    return _ratio(
        mse_true(locs, s0, true_model, assumed_model, solver=solver),
        mse_true(locs, s0, true_model, true_model),
        'u1',
    )


def ratio_u2(locs, s0, true_model, assumed_model, solver='dense'):
    """claimed error of the assumed predictor over its true error"""

    return _ratio(
        mse_assumed(locs, s0, assumed_model),
        mse_true(locs, s0, true_model, assumed_model, solver=solver),
        'u2',
    )


class TruthReference:
    """true model quantities for one location set and prediction point, shared by many assumed models"""

    def __init__(self, true_model, locs, s0):
        self.true_model = true_model
        self.locs = locs
        self.s0 = _check(true_model, locs, s0)
        self.cross = cross_correlation(true_model, locs, self.s0)
        self.matrix = assemble_dense(true_model, locs).values
        self.optimal_error = self.error_of(kriging_weights(true_model, locs, self.s0))

    def error_of(self, weights):
        """true mean squared error of a linear predictor with the given weights"""

        value = self.true_model.variance * (1.0 - 2.0 * weights @ self.cross + weights @ self.matrix @ weights)
        return max(float(value), 0.0)

    def ratios(self, assumed_model, solver='dense'):
        """u1 and u2 of the assumed model"""

        weights = kriging_weights(assumed_model, self.locs, self.s0, solver=solver)
        true_error = self.error_of(weights)
        return RatioPair(
            u1=_ratio(true_error, self.optimal_error, 'u1'),
            u2=_ratio(_claimed_error(weights, self.locs, self.s0, assumed_model), true_error, 'u2'),
        )


def ratio_pair(locs, s0, true_model, assumed_model, solver='dense'):
    """u1 and u2 sharing one solve for the assumed weights"""
    return TruthReference(true_model, locs, s0).ratios(assumed_model, solver=solver)


def plug_in_ratios(z, locs, s0, true_model, assumed_model):
    """
    u2 with the assumed variance replaced by its estimate sigma2_n = z' R~^-1 z / n

    Returns the ratio and the variance estimate. With a GW true model sharing the
    assumed shape this is the plug-in claimed over true error of the GW pair.
    """

    z = np.asarray(z, dtype=float).reshape(-1)
    if z.shape[0] != len(locs) or not len(locs):
        raise ConfigError(f'data vector of length {z.shape[0]} for {len(locs)} locations')
    variance = quad_form(cholesky(assemble_dense(assumed_model, locs)), z) / len(locs)
    weights = kriging_weights(assumed_model, locs, s0)
    return (
        _ratio(_claimed_error(weights, locs, s0, assumed_model, variance), _true_error(weights, locs, s0, true_model), 'plug-in u2'),
        variance,
    )


def predict(z, locs, s0, true_model, assumed_model, solver='dense', tol=CG_TOL, max_iter=CG_MAXITER):  # pylint: disable=too-many-arguments
    """prediction at s0 with the assumed model, errors under both models; z may be None"""

    weights = kriging_weights(assumed_model, locs, s0, solver=solver, tol=tol, max_iter=max_iter)
    predicted = None
    if z is not None:
        z = np.asarray(z, dtype=float).reshape(-1)
        if z.shape[0] != len(locs):
            raise ConfigError(f'data vector of length {z.shape[0]} for {len(locs)} locations')
        predicted = float(weights @ z)
    LOGGER.debug('predicting at %s from %d observations', s0, len(locs))
    return PredictionResult(
        predicted=predicted,
        weights=weights,
        mse_true_model=_true_error(weights, locs, s0, true_model),
        mse_assumed_model=_claimed_error(weights, locs, s0, assumed_model),
    )
