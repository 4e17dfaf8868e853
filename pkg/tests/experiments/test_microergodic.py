# This file is part of gwk project governed by MIT license, see the LICENSE.txt file.
"""
experiments.microergodic tests
"""

import pytest

from gwk.experiments.microergodic import normal_reference, run_microergodic_study
from gwk.lib import ConfigError


CONFIG = {
    'study': 'microergodic',
    'beta0': [0.2],
    'kappa': [0, 1],
    'n': [30],
    'replicates': 5,
    'x': ['fit', 1.0],
    'seed': 0,
}


def test_microergodic_study():
    """test rows, columns and reference row of a small run"""

    report = run_microergodic_study(CONFIG)

    assert report.study == 'microergodic'
    assert report.columns[:5] == ['beta0', 'kappa', 'mu', 'n', 'x']
    assert len(report.rows) == 5
    assert [row['x'] for row in report.rows] == ['fit', '1', 'fit', '1', 'normal']
    assert [row.get('mu') for row in report.rows[:4]] == [4.5, 4.5, 5.5, 5.5]

    for row in report.rows[:4]:
        assert row['replicates'] + row['failures'] == 5
        assert row['q05'] <= row['q25'] <= row['q50'] <= row['q75'] <= row['q95']
        assert row['var'] >= 0

    assert report.rows[-1] == normal_reference()
    assert set(report.cdf) == {
        'beta0=0.2 kappa=0 n=30 x=fit',
        'beta0=0.2 kappa=0 n=30 x=1',
        'beta0=0.2 kappa=1 n=30 x=fit',
        'beta0=0.2 kappa=1 n=30 x=1',
    }


def test_microergodic_determinism():
    """test repeated and parallel runs give identical rows"""

    config = {**CONFIG, 'kappa': [0]}
    report = run_microergodic_study(config)
    assert run_microergodic_study(config).rows == report.rows
    assert run_microergodic_study(config, workers=2).rows == report.rows
    assert run_microergodic_study({**config, 'seed': 1}).rows != report.rows


def test_microergodic_single_replicate():
    """test one replicate collapses quantiles"""

    report = run_microergodic_study({**CONFIG, 'kappa': [0], 'replicates': 1, 'x': [0.5], 'reference': False})
    assert len(report.rows) == 1
    row = report.rows[0]
    assert row['x'] == '0.5'
    assert row['q05'] == row['q25'] == row['q50'] == row['q75'] == row['q95'] == row['mean']
    assert row['var'] == 0.0


def test_normal_reference():
    """test standard normal reference row"""

    row = normal_reference()
    assert row['q05'] == pytest.approx(-1.6448536269514722)
    assert row['q50'] == 0.0
    assert row['q95'] == pytest.approx(1.6448536269514722)
    assert (row['mean'], row['var']) == (0.0, 1.0)


@pytest.mark.parametrize('override', [
    {'study': 'ratios'},
    {'n': [0]},
    {'beta0': [-0.2]},
    {'x': ['best']},
    {'replicates': 0},
    {'n': [5000]},
])
def test_microergodic_config_errors(override):
    """test invalid study configs"""

    with pytest.raises(ConfigError):
        run_microergodic_study({**CONFIG, **override})


@pytest.mark.slow
def test_microergodic_sampling_distribution():
    """test scaled down sampling distribution at beta0 = 0.4, kappa = 0, n = 500"""

    config = {
        'study': 'microergodic',
        'beta0': [0.4],
        'kappa': [0],
        'n': [500],
        'replicates': 200,
        'x': ['fit', 1.0, 0.5],
        'seed': 0,
    }
    rows = {row['x']: row for row in run_microergodic_study(config, workers=4).rows}

    assert rows['1']['mean'] == pytest.approx(0.027, abs=0.25)
    assert 0.7 <= rows['1']['var'] <= 1.4
    assert rows['fit']['mean'] == pytest.approx(0.07, abs=0.35)
    assert 0.7 <= rows['fit']['var'] <= 1.8
    assert rows['0.5']['mean'] > 3
