# This file is part of gwk project governed by MIT license, see the LICENSE.txt file.
"""
linalg tests
"""

import math

import numpy as np
import pytest
from scipy.sparse import identity

from gwk.covariance import build_model, GWParams, MaternParams
from gwk.geometry import LocationSet, pairs_within, perturbed_grid, subsample
from gwk.lib import ConfigError
from gwk.linalg import (
    assemble_dense,
    assemble_sparse,
    cg_solve,
    cholesky,
    ConvergenceError,
    logdet,
    NotPositiveDefiniteError,
    quad_form,
    solve,
    SparseSym,
    whiten,
)


def test_assemble_dense(gw_model):
    """test dense assembly against entrywise evaluation"""

    assert np.array_equal(assemble_dense(gw_model, LocationSet([[0.5, 0.5]])).values, [[1.0]])
    assert np.array_equal(assemble_dense(gw_model, LocationSet([[0, 0], [1, 1]])).values, np.eye(2))

    locs = LocationSet(np.random.default_rng(4).random((5, 2)) * 0.3)
    matrix = assemble_dense(gw_model, locs).values
    for i in range(5):
        for j in range(5):
            assert matrix[i, j] == pytest.approx(gw_model.correlation(np.linalg.norm(locs[i] - locs[j])), rel=1e-14)

    covariance = assemble_dense(gw_model.with_variance(2.0), locs, correlation=False).values
    assert np.allclose(covariance, 2 * matrix)
    assert np.allclose(assemble_dense(gw_model, locs, ridge=0.1).values, matrix + 0.1 * np.eye(5))


def test_assemble_sparse(random_locs, gw_model, matern_model):
    """test sparse pattern and values against the dense matrix"""

    sparse = assemble_sparse(gw_model, random_locs)
    dense = assemble_dense(gw_model, random_locs).values
    assert np.allclose(sparse.todense(), np.where(random_locs.distances() < gw_model.support, dense, 0.0), rtol=1e-12, atol=1e-15)
    assert sparse.nnz == 2 * len(pairs_within(random_locs, gw_model.support)[0]) + len(random_locs)

    wide = assemble_sparse(gw_model.with_support(5.0), random_locs)
    assert wide.nonzero_fraction == 1.0

    with pytest.raises(ConfigError):
        assemble_sparse(matern_model, random_locs)


def test_assemble_sparse_grid_fraction():
    """test nonzero fraction on the experiment grid"""

    grid = perturbed_grid(0.03, 0.01, 0)
    sparse = assemble_sparse(build_model(GWParams(mu=3.0, kappa=0.0, beta=0.1)), grid)
    assert 0.027 <= sparse.nonzero_fraction <= 0.033


def test_cholesky():
    """test factorization and failure reporting"""

    assert np.array_equal(cholesky(np.eye(3)).lower, np.eye(3))
    assert np.allclose(cholesky(np.array([[4.0, 2.0], [2.0, 3.0]])).lower, [[2.0, 0.0], [1.0, math.sqrt(2)]])
    assert cholesky(np.zeros((0, 0))).n == 0

    with pytest.raises(NotPositiveDefiniteError) as exc_info:
        cholesky(np.array([[1.0, 0.0, 0.0], [0.0, 1.0, 2.0], [0.0, 2.0, 1.0]]))
    assert exc_info.value.pivot == 2


def test_cholesky_reconstruction(locs, askey_model):
    """test L L' reproduces the matrix"""

    matrix = assemble_dense(askey_model, locs).values
    factor = cholesky(assemble_dense(askey_model, locs))
    assert np.max(np.abs(factor.lower @ factor.lower.T - matrix)) < 1e-10
    assert np.all(np.diag(factor.lower) > 0)


def test_factor_operations():
    """test logdet, solve and quadratic forms on simple matrices"""

    vector = np.array([1.0, -2.0, 3.0])
    factor = cholesky(np.eye(3))
    assert logdet(factor) == 0.0
    assert np.array_equal(solve(factor, vector), vector)
    assert quad_form(factor, vector) == pytest.approx(14.0)

    factor = cholesky(4 * np.eye(3))
    assert logdet(factor) == pytest.approx(3 * math.log(4))
    assert quad_form(factor, vector) == pytest.approx(14.0 / 4)
    assert np.allclose(whiten(factor, vector), vector / 2)
    assert quad_form(factor, np.zeros(3)) == 0.0

    with pytest.raises(ConfigError):
        solve(factor, np.ones(2))


def test_factor_operations_oracle(gw_model):
    """test against explicit inverse on a small GW system"""

    locs = LocationSet(np.random.default_rng(6).random((20, 2)) * 0.5)
    matrix = assemble_dense(gw_model, locs).values
    factor = cholesky(matrix)
    vector = np.random.default_rng(7).normal(size=20)
    inverse = np.linalg.inv(matrix)

    assert quad_form(factor, vector) == pytest.approx(vector @ inverse @ vector, rel=1e-9)
    assert np.allclose(solve(factor, vector), inverse @ vector, rtol=1e-9, atol=1e-12)
    assert logdet(factor) == pytest.approx(np.linalg.slogdet(matrix)[1], rel=1e-9, abs=1e-12)


def test_cg_solve():
    """test conjugate gradients against dense solves"""

    rhs = np.array([1.0, 2.0, 3.0])
    assert np.allclose(cg_solve(SparseSym(identity(3, format='csr')), rhs), rhs)
    assert np.array_equal(cg_solve(SparseSym(identity(3, format='csr')), np.zeros(3)), np.zeros(3))

    model = build_model(GWParams(mu=3.0, kappa=0.0, beta=0.1))
    grid = perturbed_grid(0.03, 0.01, 0)
    for size in (200, 500):
        locs = subsample(grid, size, 1)
        rhs = np.random.default_rng(size).normal(size=size)
        dense = solve(cholesky(assemble_dense(model, locs)), rhs)
        iterative = cg_solve(assemble_sparse(model, locs), rhs, tol=1e-10)
        assert np.allclose(iterative, dense, rtol=1e-7, atol=1e-7 * np.max(np.abs(dense)))


def test_cg_solve_iteration_cap(askey_model, locs):
    """test iteration cap"""

    with pytest.raises(ConvergenceError):
        cg_solve(assemble_sparse(askey_model, locs), np.ones(len(locs)), tol=1e-14, max_iter=1)


def test_matern_dense_only(matern_model, locs):
    """test globally supported models assemble densely"""

    matrix = assemble_dense(build_model(MaternParams(nu=1.0, alpha=0.05)), locs)
    assert matrix.n == len(locs)
    assert assemble_dense(matern_model, locs).values[0, 0] == 1.0
