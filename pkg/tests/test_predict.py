# This file is part of gwk project governed by MIT license, see the LICENSE.txt file.
"""
predict tests
"""

import numpy as np
import pytest

from gwk.covariance import build_model, GWParams, MaternParams, TaperedMaternParams, validity_bound
from gwk.estimate import sigma2_hat
from gwk.geometry import LocationSet, perturbed_grid, subsample
from gwk.lib import ConfigError
from gwk.linalg import assemble_dense
from gwk.predict import (
    blup,
    DegenerateRatioError,
    kriging_weights,
    mse_assumed,
    mse_true,
    plug_in_ratios,
    predict,
    ratio_pair,
    ratio_u1,
    ratio_u2,
    TruthReference,
)


S0 = (0.26, 0.48)


def test_kriging_weights_oracle(locs, gw_model):
    """test weights and errors against explicit inverse"""

    matrix = assemble_dense(gw_model, locs).values
    cross = gw_model.correlation(locs.distances_to(S0))
    expected = np.linalg.inv(matrix) @ cross

    weights = kriging_weights(gw_model, locs, S0)
    assert np.allclose(weights, expected, rtol=1e-7, atol=1e-9)
    assert mse_assumed(locs, S0, gw_model) == pytest.approx(1.0 - cross @ expected, rel=1e-7)
    assert mse_true(locs, S0, gw_model, gw_model) == pytest.approx(1.0 - cross @ expected, rel=1e-7)

    z = np.random.default_rng(0).normal(size=len(locs))
    predicted, blup_weights = blup(z, locs, S0, gw_model)
    assert predicted == pytest.approx(expected @ z, rel=1e-7, abs=1e-9)
    assert np.array_equal(blup_weights, weights)


def test_observed_site():
    """test prediction at an observed location reproduces the datum"""

    rng = np.random.default_rng(5)
    model = build_model(GWParams(mu=4.5, kappa=0.0, beta=0.3, sigma2=2.0))
    for _ in range(50):
        locs = LocationSet(rng.random((20, 2)))
        idx = int(rng.integers(20))
        z = rng.normal(size=20)

        result = predict(z, locs, locs[idx], model, model)
        assert result.predicted == z[idx]
        assert result.mse_true_model == 0.0
        assert result.mse_assumed_model == 0.0

    with pytest.raises(DegenerateRatioError):
        ratio_u1(locs, locs[0], model, model)


def test_empty_locations(askey_model):
    """test kriging without observations"""

    locs = LocationSet.empty()
    assert kriging_weights(askey_model, locs, S0).shape == (0,)

    result = predict(None, locs, S0, askey_model.with_variance(3.0), askey_model)
    assert result.predicted is None
    assert result.mse_true_model == pytest.approx(3.0)
    assert result.mse_assumed_model == pytest.approx(1.0)


def test_input_checks(locs, askey_model):
    """test dimension, data and solver validation"""

    with pytest.raises(ConfigError):
        kriging_weights(askey_model, locs, (0.5, 0.5, 0.5))

    with pytest.raises(ConfigError):
        kriging_weights(askey_model, locs, S0, solver='lu')

    with pytest.raises(ConfigError):
        predict(np.zeros(3), locs, S0, askey_model, askey_model)

    with pytest.raises(ConfigError):
        blup(np.zeros(3), locs, S0, askey_model)


def test_ratios_bounds(locs, askey_model, gw_model, matern_model):
    """test u1 is at least one and both ratios are one for the true model"""

    assert ratio_u1(locs, S0, askey_model, gw_model) >= 1.0 - 1e-10
    assert ratio_u1(locs, S0, matern_model, askey_model) >= 1.0 - 1e-10
    assert ratio_u1(locs, S0, gw_model, gw_model) == pytest.approx(1.0, rel=1e-10)
    assert ratio_u2(locs, S0, gw_model, gw_model) == pytest.approx(1.0, rel=1e-8)

    pair = ratio_pair(locs, S0, matern_model, matern_model)
    assert pair.u1 == pytest.approx(1.0, rel=1e-10)
    assert pair.u2 == pytest.approx(1.0, rel=1e-8)


def test_mse_true_permutation(locs, askey_model, matern_model):
    """test relabeling the observations leaves the error unchanged"""

    expected = mse_true(locs, S0, matern_model, askey_model)
    for seed in range(3):
        shuffled = LocationSet(locs.coords[np.random.default_rng(seed).permutation(len(locs))])
        assert mse_true(shuffled, S0, matern_model, askey_model) == pytest.approx(expected, rel=1e-10)


def test_true_error_reduces_to_claimed_error():
    """test the misspecified error with the true model assumed equals the claimed error"""

    rng = np.random.default_rng(11)
    for _ in range(20):
        kappa = float(rng.choice([0.0, 1.0]))
        model = build_model(GWParams(mu=validity_bound(2, kappa) + 3, kappa=kappa, beta=rng.uniform(0.1, 0.4), sigma2=rng.uniform(0.5, 2.0)))
        locs = LocationSet(rng.random((30, 2)))
        s0 = tuple(rng.random(2))
        assert mse_true(locs, s0, model, model) == pytest.approx(mse_assumed(locs, s0, model), rel=1e-10, abs=1e-10)


def test_truth_reference(locs, askey_model, gw_model, matern_model):
    """test shared truth quantities reproduce the direct ratios"""

    taper = build_model(TaperedMaternParams(matern=matern_model.params, taper=GWParams(mu=2.0, kappa=0.0, beta=0.3)))
    truth = TruthReference(matern_model, locs, S0)
    assert truth.optimal_error == pytest.approx(mse_true(locs, S0, matern_model, matern_model), rel=1e-12)

    for model in (askey_model, gw_model, taper):
        pair = truth.ratios(model)
        assert pair.u1 == pytest.approx(ratio_u1(locs, S0, matern_model, model), rel=1e-10)
        assert pair.u2 == pytest.approx(ratio_u2(locs, S0, matern_model, model), rel=1e-10)


def test_variance_scaling(locs, askey_model, matern_model):
    """test u2 scales with the assumed variance and u1 does not"""

    scaled = askey_model.with_variance(2.0)
    assert ratio_u1(locs, S0, matern_model, scaled) == pytest.approx(ratio_u1(locs, S0, matern_model, askey_model), rel=1e-12)
    assert ratio_u2(locs, S0, matern_model, scaled) == pytest.approx(2.0 * ratio_u2(locs, S0, matern_model, askey_model), rel=1e-12)


def test_plug_in_ratios(locs, askey_model, matern_model):
    """test plug-in variance is the profiled estimate and rescales u2"""

    z = np.random.default_rng(9).normal(size=len(locs))
    ratio, variance = plug_in_ratios(z, locs, S0, matern_model, askey_model)

    assert variance == pytest.approx(sigma2_hat(z, locs, 4.5, 0.0, 0.3), rel=1e-10)
    assert ratio == pytest.approx(variance * ratio_u2(locs, S0, matern_model, askey_model), rel=1e-10)

    ratio, variance = plug_in_ratios(z, locs, S0, askey_model, askey_model)
    assert ratio == pytest.approx(variance, rel=1e-8)

    with pytest.raises(ConfigError):
        plug_in_ratios(z[:5], locs, S0, matern_model, askey_model)


def test_cg_solver():
    """test iterative weights match the dense solve on a compactly supported system"""

    model = build_model(GWParams(mu=3.0, kappa=0.0, beta=0.1))
    locs = subsample(perturbed_grid(0.03, 0.01, 0), 500, 1)

    dense = kriging_weights(model, locs, S0)
    iterative = kriging_weights(model, locs, S0, solver='cg')
    assert np.max(np.abs(iterative - dense)) < 1e-7

    result = predict(None, locs, S0, model, model, solver='cg')
    assert result.mse_true_model == pytest.approx(mse_true(locs, S0, model, model), rel=1e-6)

    with pytest.raises(ConfigError):
        kriging_weights(build_model(MaternParams(nu=0.5, alpha=0.05)), locs, S0, solver='cg')
