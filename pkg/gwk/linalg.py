# This file is part of gwk project governed by MIT license, see the LICENSE.txt file.
"""
covariance matrix assembly, cholesky factors and sparse conjugate gradients
"""

import logging
from dataclasses import dataclass
from functools import cached_property

import numpy as np
from scipy.linalg import lapack, solve_triangular
from scipy.sparse import coo_matrix, csr_matrix, diags

from gwk.geometry import pairs_within
from gwk.lib import ConfigError, NumericalError


LOGGER = logging.getLogger('gwk.linalg')


class NotPositiveDefiniteError(NumericalError):
    """cholesky met a nonpositive pivot"""

    def __init__(self, message, pivot=None):
        super().__init__(message)
        self.pivot = pivot


class ConvergenceError(NumericalError):
    """iterative solver hit its iteration cap"""


@dataclass(frozen=True)
class SymMatrix:
    """dense symmetric matrix"""

    values: np.ndarray

    @property
    def n(self):
        """matrix size"""
        return self.values.shape[0]


@dataclass(frozen=True)
class SparseSym:
    """sparse symmetric matrix in csr storage, full pattern with diagonal"""

    matrix: csr_matrix

    @property
    def n(self):
        """matrix size"""
        return self.matrix.shape[0]

    @property
    def nnz(self):
        """stored entries, diagonal included"""
        return self.matrix.nnz

    @property
    def nonzero_fraction(self):
        """stored entries over n^2"""
        return self.nnz / self.n**2 if self.n else 0.0

    def todense(self):
        """dense copy"""
        return self.matrix.toarray()


class CholFactor:
    """lower cholesky factor L with R = L L'"""

    def __init__(self, lower):
        lower.setflags(write=False)
        self.lower = lower

    def __repr__(self):
        return f'<CholFactor n={self.n}>'

    @property
    def n(self):
        """matrix size"""
        return self.lower.shape[0]

    @cached_property
    def logdet(self):
        """log determinant of R"""
        return 2.0 * float(np.sum(np.log(np.diag(self.lower))))


def _scale(model, correlation):
    return 1.0 if correlation else model.variance


def assemble_dense(model, locs, correlation=True, ridge=0.0):
    """correlation (or covariance) matrix of model over all pairs of locs"""

    values = _scale(model, correlation) * np.asarray(model.correlation(locs.distances()), dtype=float).reshape(len(locs), len(locs))
    if ridge:
        values = values + ridge * np.eye(len(locs))
    values.setflags(write=False)
    return SymMatrix(values)


def assemble_sparse(model, locs, correlation=True, ridge=0.0):
    """compactly supported model matrix, only pairs closer than the support are evaluated"""

    support = model.support
    if support is None:
        raise ConfigError(f'sparse assembly requires a compactly supported model, got {model.family.value}')

    n = len(locs)
    rows, cols, dists = pairs_within(locs, support)
    scale = _scale(model, correlation)
    offdiag = scale * np.asarray(model.correlation(dists), dtype=float).reshape(-1)
    diag_idx = np.arange(n)
    matrix = coo_matrix(
        (
            np.concatenate([offdiag, offdiag, np.full(n, scale + ridge)]),
            (np.concatenate([rows, cols, diag_idx]), np.concatenate([cols, rows, diag_idx])),
        ),
        shape=(n, n),
    ).tocsr()
    matrix.sort_indices()
    return SparseSym(matrix)


def cholesky(matrix):
    """lower cholesky factor, NotPositiveDefiniteError names the failing pivot"""

    values = matrix.values if isinstance(matrix, SymMatrix) else np.asarray(matrix, dtype=float)
    if not values.size:
        return CholFactor(np.zeros((0, 0)))
    lower, info = lapack.dpotrf(values, lower=1, clean=1)
    if info > 0:
        raise NotPositiveDefiniteError(f'matrix is not positive definite, leading minor {info} fails', pivot=info - 1)
    if info < 0:
        raise ConfigError(f'invalid argument {-info} to cholesky')
    return CholFactor(lower)


def logdet(factor):
    """log |R| = 2 sum log L_ii"""
    return factor.logdet


def _check_rhs(factor, vector):
    vector = np.asarray(vector, dtype=float)
    if vector.shape[0] != factor.n:
        raise ConfigError(f'dimension mismatch, factor {factor.n} vs vector {vector.shape[0]}')
    return vector


def solve(factor, rhs):
    """R^-1 rhs by forward and back substitution"""

    rhs = _check_rhs(factor, rhs)
    if not factor.n:
        return rhs.copy()
    half = solve_triangular(factor.lower, rhs, lower=True)
    return solve_triangular(factor.lower, half, lower=True, trans='T')


def whiten(factor, vector):
    """L^-1 vector"""

    vector = _check_rhs(factor, vector)
    if not factor.n:
        return vector.copy()
    return solve_triangular(factor.lower, vector, lower=True)


def quad_form(factor, vector):
    """z' R^-1 z = |L^-1 z|^2"""

    half = whiten(factor, vector)
    return float(half @ half)


def cg_solve(matrix, rhs, tol=1e-10, max_iter=10000):
    """
    jacobi preconditioned conjugate gradients

    Stops once |Ax - b| <= tol |b|, raises ConvergenceError after max_iter
    iterations.
    """

    operator = matrix.matrix if isinstance(matrix, SparseSym) else matrix
    rhs = np.asarray(rhs, dtype=float)
    if rhs.shape[0] != operator.shape[0]:
        raise ConfigError(f'dimension mismatch, matrix {operator.shape[0]} vs vector {rhs.shape[0]}')

    solution = np.zeros_like(rhs)
    target = tol * np.linalg.norm(rhs)
    if target == 0:
        return solution

    precond = diags(1.0 / operator.diagonal())
    residual = rhs.copy()
    zk = precond @ residual
    direction = zk.copy()
    rz_old = residual @ zk
    for iteration in range(1, max_iter + 1):
        adk = operator @ direction
        step = rz_old / (direction @ adk)
        solution += step * direction
        residual -= step * adk
        if np.linalg.norm(residual) <= target:
            LOGGER.debug('cg converged in %d iterations', iteration)
            return solution
        zk = precond @ residual
        rz_new = residual @ zk
        direction = zk + (rz_new / rz_old) * direction
        rz_old = rz_new

    raise ConvergenceError(f'cg did not reach tolerance {tol} in {max_iter} iterations')
