# This file is part of gwk project governed by MIT license, see the LICENSE.txt file.
"""
experiments.commands tests
"""

import csv
import json
from pathlib import Path

from gwk.experiments.commands import command, resolve_workers
from gwk.experiments.core import parse_report


MICROERGODIC = {
    'study': 'microergodic',
    'beta0': [0.2],
    'kappa': [0],
    'n': [20],
    'replicates': 3,
    'x': ['fit', 1.0],
}
RATIOS = {
    'study': 'ratios',
    'settings': [{'nu': 0.5, 'y': [0.1]}],
    'n': [20],
    'subsets': 2,
}


def test_resolve_workers():
    """test workers precedence"""

    assert resolve_workers(None, None) == 1
    assert resolve_workers({'WORKERS': 3}, None) == 3
    assert resolve_workers({'WORKERS': 3}, 2) == 2


def test_microergodic_command(runner, tmpworkdir):  # pylint: disable=unused-argument
    """microergodic command test"""

    Path('config.json').write_text(json.dumps(MICROERGODIC), encoding='utf-8')
    result = runner.invoke(command, ['microergodic', '--config', 'config.json', '--output', 'report.csv', '--cdf', 'cdf.csv'])
    assert result.exit_code == 0

    report = parse_report('report.csv')
    assert report.study == 'microergodic'
    assert [row['x'] for row in report.rows] == ['fit', 1, 'normal']
    assert report.metadata['workers'] == '1'

    with Path('cdf.csv').open(encoding='utf-8') as ftmp:
        rows = list(csv.DictReader(ftmp))
    assert len(rows) == 6

    result = runner.invoke(command, ['microergodic', '--config', json.dumps({**MICROERGODIC, 'replicates': -1})])
    assert result.exit_code == 2


def test_ratios_command(runner, tmpworkdir):  # pylint: disable=unused-argument
    """ratios command test"""

    result = runner.invoke(command, ['ratios', '--config', json.dumps(RATIOS)])
    assert result.exit_code == 0
    lines = result.stdout.splitlines()
    assert lines[0] == '# study: ratios'
    assert lines[-2].startswith('nu,y,n,alpha,beta_star,u1_1')
    assert lines[-1].startswith('0.5,0.10000000000000001,20,')

    result = runner.invoke(command, ['ratios', '--config', 'notexist.json'])
    assert result.exit_code == 2
