# This file is part of gwk project governed by MIT license, see the LICENSE.txt file.
"""
gwk command line application
"""

import copy
import logging
import logging.config

import click

from gwk.commands import cov_command, equiv_command, fit_command, grid_command, predict_command, simulate_command, spectral_command
from gwk.experiments.commands import command as experiment_command
from gwk.lib import load_yaml
from gwk.version import __version__


LOGGER_NAME = 'gwk'
DEFAULT_CONFIG = {
    'WORKERS': 1,
    'CG_TOL': 1e-10,
    'CG_MAXITER': 10000,
    'TOL': 1e-9,
    'OPT_TOL': 1e-6,
}


def configure_logging():
    """configure logging, stdout carries command output so log records go to stderr"""

    logging.config.dictConfig({
        'version': 1,
        'disable_existing_loggers': False,
        'formatters': {
            'formatter_gwk': {
                'format': f'{LOGGER_NAME} [%(asctime)s] %(levelname)s %(message)s',
                'datefmt': '%d/%b/%Y:%H:%M:%S %z'
            }
        },
        'handlers': {
            'console_gwk': {
                'class': 'logging.StreamHandler',
                'stream': 'ext://sys.stderr',
                'formatter': 'formatter_gwk'
            }
        },
        'loggers': {
            LOGGER_NAME: {
                'level': 'INFO',
                'handlers': ['console_gwk']
            }
        }
    })


def config_from_yaml(filename):
    """pull config variables from settings file"""

    return {k.upper(): v for k, v in load_yaml(filename).get('gwk', {}).items()}


@click.group(name='gwk', help='generalized wendland covariance toolkit')
@click.option('--debug', is_flag=True, help='show debug output')
@click.option('--settings', default='/etc/gwk.yaml', help='settings file')
@click.version_option(__version__, prog_name='gwk', message='%(prog)s %(version)s')
@click.pass_context
def cli(ctx, debug, settings):
    """gwk commands container"""

    configure_logging()
    logger = logging.getLogger(LOGGER_NAME)
    if debug:
        logger.setLevel(logging.DEBUG)

    config = copy.deepcopy(DEFAULT_CONFIG)
    config.update(config_from_yaml(settings))
    logger.debug('config %s', config)
    ctx.obj = config


cli.add_command(grid_command)
cli.add_command(cov_command)
cli.add_command(spectral_command)
cli.add_command(equiv_command)
cli.add_command(simulate_command)
cli.add_command(fit_command)
cli.add_command(predict_command)
cli.add_command(experiment_command)


def main(argv=None):
    """gwk main"""

    return cli.main(args=argv, prog_name='gwk')  # pylint: disable=no-value-for-parameter
