# This file is part of gwk project governed by MIT license, see the LICENSE.txt file.
"""
gwk library commands
"""

import csv
import json
import sys

import click
import numpy as np

from gwk.covariance import Family, InvalidParamsError
from gwk.equivalence import DEFAULT_TOL, equivalent_support, gw_gw_equivalent, matern_gw_equivalent
from gwk.estimate import DEFAULT_TOL as OPT_TOL, fit_profile
from gwk.geometry import LocationSet, perturbed_grid
from gwk.lib import ConfigError, EXIT_CONFIG_ERROR, exit_on_error
from gwk.predict import CG_MAXITER, CG_TOL, predict, SOLVERS
from gwk.schema import CompatibilityReportSchema, FitResultSchema, load_model, PredictionResultSchema
from gwk.simulate import read_realizations, simulate, SimConfig, write_realizations
from gwk.spectral import SpectralDensity


GW_FAMILIES = (Family.GW, Family.ASKEY)


def parse_point(value):
    """comma separated coordinates"""

    try:
        return np.array([float(item) for item in value.split(',')])
    except ValueError:
        raise ConfigError(f'invalid point {value}') from None


def pick_realization(path, replicate):
    """one row of a realizations csv"""

    rows = read_realizations(path)
    if not 0 <= replicate < rows.shape[0]:
        raise ConfigError(f'replicate {replicate} not in {path} with {rows.shape[0]} rows')
    return rows[replicate]


def dump_json(data):
    """print json document"""
    click.echo(json.dumps(data, indent=2))


@click.command(name='grid', help='perturbed regular grid on the unit square as csv')
@click.option('--increment', type=float, required=True, help='grid spacing')
@click.option('--jitter', type=float, default=0.0, help='uniform perturbation half width')
@click.option('--seed', type=int, default=0)
@click.option('--dim', type=int, default=2)
@click.option('--output', default='-', help='output file')
@exit_on_error
def grid_command(increment, jitter, seed, dim, output):
    """generate perturbed grid"""

    locs = perturbed_grid(increment, jitter, seed, dim=dim)
    with click.open_file(output, 'w', encoding='utf-8') as ftmp:
        locs.write_csv(ftmp)


@click.group(name='cov', help='covariance model evaluation')
def cov_command():
    """covariance commands container"""


@cov_command.command(name='eval', help='evaluate covariance at distances')
@click.option('--model', 'model_json', required=True, help='model json or json file')
@click.option('--r', 'radii', type=float, multiple=True, required=True, help='distance, repeatable')
@exit_on_error
def cov_eval_command(model_json, radii):
    """evaluate covariance"""

    model = load_model(model_json)
    writer = csv.writer(sys.stdout)
    writer.writerow(['r', 'cov'])
    for radius in radii:
        writer.writerow([radius, f'{model.covariance(radius):.17g}'])


@cov_command.command(name='validate', help='check model parameters against validity bounds')
@click.option('--model', 'model_json', required=True, help='model json or json file')
@exit_on_error
def cov_validate_command(model_json):
    """validate model"""

    try:
        load_model(model_json)
    except InvalidParamsError as exc:
        click.echo(str(exc))
        sys.exit(EXIT_CONFIG_ERROR)
    click.echo('ok')


@click.command(name='spectral', help='spectral density on a frequency grid as csv')
@click.option('--model', 'model_json', required=True, help='model json or json file')
@click.option('--z-min', type=float, default=0.0)
@click.option('--z-max', type=float, required=True)
@click.option('--points', type=int, default=100)
@click.option('--asymptotic', is_flag=True, help='large frequency expansion instead of the series')
@exit_on_error
def spectral_command(model_json, z_min, z_max, points, asymptotic):
    """evaluate spectral density"""

    density = SpectralDensity(load_model(model_json))
    grid = np.linspace(z_min, z_max, points)
    values = density.asymptotic(grid) if asymptotic else density(grid)
    writer = csv.writer(sys.stdout)
    writer.writerow(['z', 'sd'])
    for freq, value in zip(grid, np.atleast_1d(values)):
        writer.writerow([f'{freq:.17g}', f'{value:.17g}'])


@click.group(name='equiv', help='equivalence of gaussian measures')
def equiv_command():
    """equivalence commands container"""


@equiv_command.command(name='check', help='compatibility report of two models')
@click.option('--model0', required=True, help='model json or json file')
@click.option('--model1', required=True, help='model json or json file')
@click.option('--tol', type=float, help='relative tolerance')
@click.pass_obj
@exit_on_error
def equiv_check_command(config, model0, model1, tol):
    """check equivalence"""

    tol = tol or (config or {}).get('TOL', DEFAULT_TOL)
    first, second = load_model(model0), load_model(model1)
    families = {first.family, second.family}
    if families <= set(GW_FAMILIES):
        report = gw_gw_equivalent(first.params, second.params, tol)
    elif Family.MATERN in families and families - {Family.MATERN} <= set(GW_FAMILIES) and len(families) == 2:
        report = matern_gw_equivalent(first.params, second.params, tol)
    else:
        raise ConfigError(f'no equivalence result for families {first.family.value} and {second.family.value}')
    dump_json(CompatibilityReportSchema().dump(report))


@equiv_command.command(name='support', help='compact support equivalent to a matern model')
@click.option('--matern', 'matern_json', required=True, help='matern model json or json file')
@click.option('--kappa', type=float, required=True)
@click.option('--mu', type=float, required=True)
@click.option('--sigma1sq', type=float, default=1.0)
@exit_on_error
def equiv_support_command(matern_json, kappa, mu, sigma1sq):
    """compute equivalent compact support"""

    model = load_model(matern_json)
    if model.family != Family.MATERN:
        raise ConfigError('equivalent support needs a matern model')
    dump_json({'beta': equivalent_support(model.params, kappa, mu, sigma1sq), 'kappa': kappa, 'mu': mu, 'sigma1sq': sigma1sq})


@click.command(name='simulate', help='simulate gaussian field realizations as csv')
@click.option('--model', 'model_json', required=True, help='model json or json file')
@click.option('--locs', 'locs_path', required=True, help='locations csv')
@click.option('--replicates', type=int, default=1)
@click.option('--seed', type=int, default=0)
@click.option('--output', default='-', help='output file')
@exit_on_error
def simulate_command(model_json, locs_path, replicates, seed, output):
    """simulate realizations"""

    cfg = SimConfig(model=load_model(model_json), locs=LocationSet.from_csv(locs_path), replicates=replicates, seed=seed)
    realizations = simulate(cfg)
    with click.open_file(output, 'w', encoding='utf-8') as ftmp:
        write_realizations(ftmp, realizations)


@click.command(name='fit', help='profile likelihood fit of GW support and variance')
@click.option('--locs', 'locs_path', required=True, help='locations csv')
@click.option('--data', 'data_path', required=True, help='realizations csv')
@click.option('--replicate', type=int, default=0, help='row of the realizations file')
@click.option('--kappa', type=float, required=True)
@click.option('--mu', type=float, required=True)
@click.option('--beta-lo', type=float, default=1e-6)
@click.option('--beta-hi', type=float, required=True)
@click.option('--tol', type=float, help='relative optimizer tolerance')
@click.pass_obj
@exit_on_error
def fit_command(config, locs_path, data_path, replicate, kappa, mu, beta_lo, beta_hi, tol):  # pylint: disable=too-many-arguments
    """fit model"""

    tol = tol or (config or {}).get('OPT_TOL', OPT_TOL)
    locs = LocationSet.from_csv(locs_path)
    result = fit_profile(pick_realization(data_path, replicate), locs, mu, kappa, (beta_lo, beta_hi), tol)
    dump_json(FitResultSchema().dump(result))


@click.command(name='predict', help='kriging with an assumed model, errors under both models')
@click.option('--true-model', 'true_json', required=True, help='model json or json file')
@click.option('--assumed-model', 'assumed_json', required=True, help='model json or json file')
@click.option('--locs', 'locs_path', required=True, help='locations csv')
@click.option('--s0', required=True, help='prediction point, comma separated')
@click.option('--data', 'data_path', help='realizations csv')
@click.option('--replicate', type=int, default=0, help='row of the realizations file')
@click.option('--solver', type=click.Choice(SOLVERS), default='dense')
@click.pass_obj
@exit_on_error
def predict_command(config, true_json, assumed_json, locs_path, s0, data_path, replicate, solver):  # pylint: disable=too-many-arguments
    """predict"""

    config = config or {}
    locs = LocationSet.from_csv(locs_path)
    z = pick_realization(data_path, replicate) if data_path else None
    result = predict(
        z,
        locs,
        parse_point(s0),
        load_model(true_json),
        load_model(assumed_json),
        solver=solver,
        tol=config.get('CG_TOL', CG_TOL),
        max_iter=config.get('CG_MAXITER', CG_MAXITER),
    )
    dump_json(PredictionResultSchema().dump(result))
