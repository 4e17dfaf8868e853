# This file is part of gwk project governed by MIT license, see the LICENSE.txt file.
"""
experiment commands
"""

import click

from gwk.experiments.core import emit_cdf, emit_report
from gwk.experiments.microergodic import run_microergodic_study
from gwk.experiments.ratios import run_ratio_study
from gwk.lib import exit_on_error, load_json


def resolve_workers(config, workers):
    """command line value, settings file value or single process"""
    return workers or (config or {}).get('WORKERS', 1)


@click.group(name='experiment', help='simulation studies')
def command():
    """experiment commands container"""


@command.command(name='microergodic', help='sampling distribution of the standardized microergodic estimate')
@click.option('--config', 'config_json', required=True, help='study config json or json file')
@click.option('--output', default='-', help='report csv')
@click.option('--cdf', 'cdf_path', help='per replicate statistics with empirical and normal cdf')
@click.option('--workers', type=int, help='worker processes')
@click.pass_obj
@exit_on_error
def microergodic_command(config, config_json, output, cdf_path, workers):
    """run microergodic study"""

    report = run_microergodic_study(load_json(config_json), resolve_workers(config, workers))
    emit_report(report, output)
    if cdf_path:
        emit_cdf(report, cdf_path)


@command.command(name='ratios', help='kriging efficiency of GW and tapered matern models')
@click.option('--config', 'config_json', required=True, help='study config json or json file')
@click.option('--output', default='-', help='report csv')
@click.option('--workers', type=int, help='worker processes')
@click.pass_obj
@exit_on_error
def ratios_command(config, config_json, output, workers):
    """run ratio study"""

    emit_report(run_ratio_study(load_json(config_json), resolve_workers(config, workers)), output)
