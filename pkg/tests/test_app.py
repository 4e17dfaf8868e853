# This file is part of gwk project governed by MIT license, see the LICENSE.txt file.
"""
app tests
"""

import json
import logging
from pathlib import Path

import pytest

from gwk.app import cli, config_from_yaml, DEFAULT_CONFIG, main
from gwk.version import __version__


GW = '{"family": "gw", "params": {"mu": 5.5, "kappa": 1, "beta": 0.3}}'
# microergodic value 10 percent above GW
GW_NEAR = '{"family": "gw", "params": {"mu": 5.5, "kappa": 1, "beta": 0.3, "sigma2": 1.1}}'


def test_version(runner):
    """version option test"""

    result = runner.invoke(cli, ['--version'])
    assert result.exit_code == 0
    assert result.stdout.strip() == f'gwk {__version__}'

    with pytest.raises(SystemExit) as exc_info:
        main(['--version'])
    assert exc_info.value.code == 0


def test_config_from_yaml(tmpworkdir):  # pylint: disable=unused-argument
    """settings file test"""

    Path('gwk.yaml').write_text('gwk:\n  workers: 4\n  tol: 0.5\nother:\n  key: value\n', encoding='utf-8')
    assert config_from_yaml('gwk.yaml') == {'WORKERS': 4, 'TOL': 0.5}
    assert config_from_yaml('notexist.yaml') == {}


def test_settings_tolerance(runner, tmpworkdir):  # pylint: disable=unused-argument
    """settings file tolerance reaches equiv check, command line wins"""

    result = runner.invoke(cli, ['--settings', 'notexist.yaml', 'equiv', 'check', '--model0', GW, '--model1', GW_NEAR])
    assert result.exit_code == 0
    assert not json.loads(result.stdout)['equivalent']

    Path('gwk.yaml').write_text('gwk:\n  tol: 0.5\n', encoding='utf-8')
    result = runner.invoke(cli, ['--settings', 'gwk.yaml', 'equiv', 'check', '--model0', GW, '--model1', GW_NEAR])
    assert result.exit_code == 0
    assert json.loads(result.stdout)['equivalent']

    result = runner.invoke(cli, ['--settings', 'gwk.yaml', 'equiv', 'check', '--model0', GW, '--model1', GW_NEAR, '--tol', '1e-9'])
    assert result.exit_code == 0
    assert not json.loads(result.stdout)['equivalent']


def test_debug(runner, tmpworkdir):  # pylint: disable=unused-argument
    """debug flag test"""

    result = runner.invoke(cli, ['--debug', '--settings', 'notexist.yaml', 'cov', 'validate', '--model', GW])
    assert result.exit_code == 0
    assert logging.getLogger('gwk').getEffectiveLevel() == logging.DEBUG

    result = runner.invoke(cli, ['--settings', 'notexist.yaml', 'cov', 'validate', '--model', GW])
    assert result.exit_code == 0
    assert logging.getLogger('gwk').getEffectiveLevel() == logging.INFO


def test_default_config():
    """default config keys test"""

    assert set(DEFAULT_CONFIG) == {'WORKERS', 'CG_TOL', 'CG_MAXITER', 'TOL', 'OPT_TOL'}
