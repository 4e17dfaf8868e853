# This file is part of gwk project governed by MIT license, see the LICENSE.txt file.
"""
gwk pytest config and fixtures
"""

import os
import shutil
from tempfile import mkdtemp

import numpy as np
import pytest
from click.testing import CliRunner

from gwk.covariance import build_model, GWParams, MaternParams
from gwk.geometry import LocationSet, perturbed_grid, subsample


@pytest.fixture
def tmpworkdir():
    """
    self cleaning temporary workdir
    pytest tmpdir fixture has issues https://github.com/pytest-dev/pytest/issues/1120
    """

    cwd = os.getcwd()
    tmpdir = mkdtemp(prefix='gwk_test-')
    os.chdir(tmpdir)
    yield tmpdir
    os.chdir(cwd)
    shutil.rmtree(tmpdir)


@pytest.fixture
def runner():
    """create cli test runner"""
    return CliRunner()


@pytest.fixture
def grid():
    """full perturbed experiment grid"""
    return perturbed_grid(0.03, 0.01, 0)


@pytest.fixture
def locs(grid):  # pylint: disable=redefined-outer-name
    """small random subset of the experiment grid"""
    return subsample(grid, 60, 0)


@pytest.fixture
def random_locs():
    """uniform random points on the unit square"""
    return LocationSet(np.random.default_rng(42).random((80, 2)))


@pytest.fixture
def askey_model():
    """askey model, mu = lambda + 3"""
    return build_model(GWParams(mu=4.5, kappa=0.0, beta=0.3))


@pytest.fixture
def gw_model():
    """GW model with kappa = 1"""
    return build_model(GWParams(mu=5.5, kappa=1.0, beta=0.3))


@pytest.fixture
def matern_model():
    """exponential model with practical range 0.1"""
    return build_model(MaternParams(nu=0.5, alpha=0.1 / np.log(20)))
