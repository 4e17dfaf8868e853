# This file is part of gwk project governed by MIT license, see the LICENSE.txt file.
"""
sampling distribution of the standardized microergodic estimate

Per cell (beta0, kappa, n) every replicate draws a fresh subset of the perturbed
grid, simulates a GW(mu, kappa, beta0, sigma0sq) field with mu = lambda(2, kappa)
+ mu_offset, and evaluates the statistic at the fitted support and at fixed
multiples of beta0.
"""

from dataclasses import dataclass

from schema import And, Optional, Or, Schema, Use
from scipy.special import ndtri

from gwk.covariance import GWParams, build_model, validity_bound
from gwk.estimate import microergodic_stat, ProfileLikelihood
from gwk.experiments.core import register, StudyBase
from gwk.geometry import LocationSet, perturbed_grid, subsample
from gwk.lib import QUANTILE_LEVELS, summarize
from gwk.simulate import simulate_replicate


FIT = 'fit'
DIM = 2
positive = And(Use(float), lambda value: value > 0)
counting = And(int, lambda value: value > 0)


@dataclass(frozen=True)
class ReplicateTask:
    """inputs of one simulated replicate"""

    grid: LocationSet
    n: int
    params: GWParams
    variants: tuple
    interval: tuple
    tol: float
    seed: int
    replicate: int


def run_replicate(task):
    """statistic for every variant of one replicate"""

    locs = subsample(task.grid, task.n, task.seed, stream=task.replicate)
    params = task.params
    profile = ProfileLikelihood(locs, params.mu, params.kappa)
    factor = profile.factor(params.beta)
    z = simulate_replicate(factor, task.seed, task.replicate) * params.sigma2**0.5

    values = {}
    for variant in task.variants:
        if variant == FIT:
            fit = profile.fit(z, task.interval, task.tol)
            support, variance = fit.beta_hat, fit.sigma2_hat
        else:
            support = variant * params.beta
            variance = profile.sigma2_hat(z, support)
        values[variant] = microergodic_stat(variance, support, params.sigma2, params.beta, params.kappa, task.n).value
    return values


def variant_label(variant):
    """x column text"""
    return FIT if variant == FIT else f'{variant:g}'


@register('microergodic')
class MicroergodicStudy(StudyBase):
    """microergodic estimation study"""

    CONFIG_SCHEMA = Schema({
        'study': 'microergodic',
        'beta0': [positive],
        'kappa': [And(Use(float), lambda value: value >= 0)],
        'n': [counting],
        'replicates': counting,
        Optional('sigma0sq', default=1.0): positive,
        Optional('mu_offset', default=3.0): And(Use(float), lambda value: value >= 0),
        Optional('x', default=[FIT, 1.0, 0.5, 2.0]): [Or(FIT, positive)],
        Optional('interval_lo', default=1e-6): positive,
        Optional('interval_factor', default=15.0): positive,
        Optional('increment', default=0.03): positive,
        Optional('jitter', default=0.01): And(Use(float), lambda value: value >= 0),
        Optional('tol', default=1e-6): positive,
        Optional('seed', default=0): And(int, lambda value: value >= 0),
        Optional('reference', default=True): bool,
    })

    COLUMNS = {
        'beta0': 'true compact support',
        'kappa': 'smoothness',
        'mu': 'shape, lambda(2, kappa) + mu_offset',
        'n': 'locations per replicate',
        'x': 'support the statistic is evaluated at, fit or multiple of beta0; normal marks the N(0,1) reference row',
        **{f'q{int(round(level * 100)):02d}': f'{level:.0%} sample quantile' for level in QUANTILE_LEVELS},
        'mean': 'sample mean',
        'var': 'sample variance',
        'replicates': 'successful replicates',
        'failures': 'replicates lost to numerical failures',
    }

    def __init__(self, config, workers=1):
        super().__init__(config, workers)
        self.grid = perturbed_grid(self.config['increment'], self.config['jitter'], self.config['seed'], dim=DIM)

    def cells(self):
        for beta0 in self.config['beta0']:
            for kappa in self.config['kappa']:
                for n in self.config['n']:
                    yield {'beta0': beta0, 'kappa': kappa, 'n': n}

    def run_cell(self, cell, report):
        cfg = self.config
        params = GWParams(
            mu=validity_bound(DIM, cell['kappa']) + cfg['mu_offset'],
            kappa=cell['kappa'],
            beta=cell['beta0'],
            sigma2=cfg['sigma0sq'],
            d=DIM,
        )
        build_model(params)
        variants = tuple(cfg['x'])
        tasks = [
            ReplicateTask(
                grid=self.grid,
                n=cell['n'],
                params=params,
                variants=variants,
                interval=(cfg['interval_lo'], cfg['interval_factor'] * cell['beta0']),
                tol=cfg['tol'],
                seed=cfg['seed'],
                replicate=idx,
            )
            for idx in range(cfg['replicates'])
        ]
        results, failures = self.map_tasks(run_replicate, tasks)

        for variant in variants:
            values = [item[variant] for item in results]
            label = variant_label(variant)
            report.rows.append({
                **cell,
                'mu': params.mu,
                'x': label,
                **summarize(values),
                'replicates': len(values),
                'failures': failures,
            })
            report.cdf[f'beta0={cell["beta0"]:g} kappa={cell["kappa"]:g} n={cell["n"]} x={label}'] = values

    def run(self):
        report = super().run()
        if self.config['reference']:
            report.rows.append(normal_reference())
        return report


def normal_reference():
    """N(0, 1) quantiles, mean and variance"""

    return {
        'x': 'normal',
        **{f'q{int(round(level * 100)):02d}': float(ndtri(level)) for level in QUANTILE_LEVELS},
        'mean': 0.0,
        'var': 1.0,
    }


def run_microergodic_study(cfg, workers=1):
    """run microergodic study for config"""
    return MicroergodicStudy(cfg, workers).run()
