# This file is part of gwk project governed by MIT license, see the LICENSE.txt file.
"""
prediction efficiency of GW and tapered matern models under a matern truth

Per cell (nu, y, n) the matern scale is alpha = y / c_nu for practical range y,
the GW model takes kappa = nu - 1/2, mu = lambda(2, kappa) + mu_offset and the
equivalent support beta*. Every subset is shared by all assumed models of the
cell.
"""

from dataclasses import dataclass

import numpy as np
from schema import And, Optional, Schema, Use

from gwk.covariance import build_model, GWParams, MaternParams, practical_range_root, TaperedMaternParams, validity_bound
from gwk.equivalence import equivalent_support
from gwk.experiments.core import register, StudyBase
from gwk.geometry import LocationSet, pairs_within, perturbed_grid, subsample
from gwk.lib import ConfigError
from gwk.linalg import cholesky
from gwk.predict import plug_in_ratios, TruthReference
from gwk.simulate import standard_normals


DIM = 2
# taper (mu, kappa) per matern smoothness
TAPER_SHAPES = {0.5: (2.0, 0.0), 1.0: (3.0, 1.0), 1.5: (4.0, 2.0)}
positive = And(Use(float), lambda value: value > 0)
counting = And(int, lambda value: value > 0)


@dataclass(frozen=True)
class SubsetTask:
    """inputs of one random subset"""

    grid: LocationSet
    n: int
    s0: tuple
    matern: MaternParams
    gw: GWParams
    taper: GWParams
    multipliers: tuple
    plugin: bool
    seed: int
    subset: int


def scaled(params, multiplier):
    """GW parameters with support multiplied"""
    return GWParams(mu=params.mu, kappa=params.kappa, beta=params.beta * multiplier, sigma2=params.sigma2, d=params.d)


def nonzero_percentage(locs, support):
    """share of entries with distance below support in a covariance matrix, diagonal included"""

    rows, _, _ = pairs_within(locs, support)
    return 100.0 * (2 * len(rows) + len(locs)) / len(locs) ** 2


def run_subset(task):
    """ratios of every assumed model on one subset"""

    locs = subsample(task.grid, task.n, task.seed, stream=task.subset)
    truth_model = build_model(task.matern)
    truth = TruthReference(truth_model, locs, task.s0)

    values = {}
    for multiplier in task.multipliers:
        gw_model = build_model(scaled(task.gw, multiplier))
        taper_model = build_model(TaperedMaternParams(matern=task.matern, taper=scaled(task.taper, multiplier)))
        gw_ratios, taper_ratios = truth.ratios(gw_model), truth.ratios(taper_model)
        values[('u1', multiplier)] = gw_ratios.u1
        values[('u1t', multiplier)] = taper_ratios.u1
        if multiplier == 1.0:
            values['u2'] = gw_ratios.u2
            values['u2t'] = taper_ratios.u2

    values['nonzero'] = nonzero_percentage(locs, task.gw.beta)
    if task.plugin:
        factor = cholesky(truth.matrix * truth_model.variance)
        z = factor.lower @ standard_normals(task.seed, task.subset, task.n)
        values['u2p'] = plug_in_ratios(z, locs, task.s0, truth_model, build_model(task.gw))[0]
    return values


def multiplier_label(multiplier):
    """column suffix"""
    return f'{multiplier:g}'


@register('ratios')
class RatioStudy(StudyBase):
    """prediction ratio study"""

    CONFIG_SCHEMA = Schema({
        'study': 'ratios',
        'settings': [{'nu': And(Use(float), lambda value: value in TAPER_SHAPES), 'y': [positive]}],
        'n': [counting],
        'subsets': counting,
        Optional('s0', default=[0.26, 0.48]): And([Use(float)], lambda value: len(value) == DIM),
        Optional('mu_offset', default=1.5): And(Use(float), lambda value: value > 0),
        Optional('multipliers', default=[1.0, 0.5, 2.0]): And([positive], lambda value: 1.0 in value),
        Optional('plugin', default=False): bool,
        Optional('increment', default=0.03): positive,
        Optional('jitter', default=0.01): And(Use(float), lambda value: value >= 0),
        Optional('seed', default=0): And(int, lambda value: value >= 0),
    })

    def __init__(self, config, workers=1):
        super().__init__(config, workers)
        self.grid = perturbed_grid(self.config['increment'], self.config['jitter'], self.config['seed'], dim=DIM)

    def columns(self):
        suffixes = [multiplier_label(item) for item in self.config['multipliers']]
        return (
            ['nu', 'y', 'n', 'alpha', 'beta_star']
            + [f'u1_{item}' for item in suffixes]
            + [f'u1t_{item}' for item in suffixes]
            + ['u2', 'u2t', 'u2p', 'nonzero_pct', 'subsets', 'failures']
        )

    def describe(self):
        """column descriptions"""

        descriptions = {
            'nu': 'matern smoothness',
            'y': 'practical range',
            'n': 'locations per subset',
            'alpha': 'matern scale y / c_nu',
            'beta_star': 'equivalent GW compact support',
            'u2': 'mean claimed over true error, GW at beta_star',
            'u2t': 'mean claimed over true error, tapered matern at beta_star',
            'u2p': 'mean plug-in variance u2, GW at beta_star',
            'nonzero_pct': 'mean percentage of nonzero covariance entries at beta_star, diagonal included',
            'subsets': 'successful subsets',
            'failures': 'subsets lost to numerical failures',
        }
        for multiplier in self.config['multipliers']:
            label = multiplier_label(multiplier)
            descriptions[f'u1_{label}'] = f'mean efficiency ratio, GW at {label} beta_star'
            descriptions[f'u1t_{label}'] = f'mean efficiency ratio, tapered matern at {label} beta_star'
        return descriptions

    def cells(self):
        for setting in self.config['settings']:
            for y in setting['y']:
                for n in self.config['n']:
                    yield {'nu': setting['nu'], 'y': y, 'n': n}

    def run_cell(self, cell, report):
        cfg = self.config
        if cell['n'] > len(self.grid):
            raise ConfigError(f'subset size {cell["n"]} exceeds grid size {len(self.grid)}')

        nu = cell['nu']
        kappa = nu - 0.5
        matern = MaternParams(nu=nu, alpha=cell['y'] / practical_range_root(nu), sigma2=1.0, d=DIM)
        mu = validity_bound(DIM, kappa) + cfg['mu_offset']
        beta_star = equivalent_support(matern, kappa, mu, 1.0)
        taper_mu, taper_kappa = TAPER_SHAPES[nu]
        tasks = [
            SubsetTask(
                grid=self.grid,
                n=cell['n'],
                s0=tuple(cfg['s0']),
                matern=matern,
                gw=GWParams(mu=mu, kappa=kappa, beta=beta_star, sigma2=1.0, d=DIM),
                taper=GWParams(mu=taper_mu, kappa=taper_kappa, beta=beta_star, sigma2=1.0, d=DIM),
                multipliers=tuple(cfg['multipliers']),
                plugin=cfg['plugin'],
                seed=cfg['seed'],
                subset=idx,
            )
            for idx in range(cfg['subsets'])
        ]
        results, failures = self.map_tasks(run_subset, tasks)

        def mean_of(key):
            return float(np.mean([item[key] for item in results])) if results else None

        row = {**cell, 'alpha': matern.alpha, 'beta_star': beta_star}
        for multiplier in cfg['multipliers']:
            label = multiplier_label(multiplier)
            row[f'u1_{label}'] = mean_of(('u1', multiplier))
            row[f'u1t_{label}'] = mean_of(('u1t', multiplier))
        row.update({
            'u2': mean_of('u2'),
            'u2t': mean_of('u2t'),
            'u2p': mean_of('u2p') if cfg['plugin'] else None,
            'nonzero_pct': mean_of('nonzero'),
            'subsets': len(results),
            'failures': failures,
        })
        report.rows.append(row)


def run_ratio_study(cfg, workers=1):
    """run ratio study for config"""
    return RatioStudy(cfg, workers).run()
