# This file is part of gwk project governed by MIT license, see the LICENSE.txt file.
"""
exact gaussian field simulation by cholesky factorization

Replicate j draws its normals from generator stream j of the seed, so any
replicate is reproducible on its own.
"""

import csv
import logging
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from gwk.geometry import LocationSet
from gwk.lib import ConfigError, make_generator
from gwk.linalg import assemble_dense, cholesky


LOGGER = logging.getLogger('gwk.simulate')


@dataclass(frozen=True)
class SimConfig:
    """simulation request"""

    model: object
    locs: LocationSet
    replicates: int = 1
    seed: int = 0

    def __post_init__(self):
        if self.replicates < 1:
            raise ConfigError(f'replicates must be positive, got {self.replicates}')
        if self.model.dim != self.locs.dim:
            raise ConfigError(f'model dimension {self.model.dim} differs from locations dimension {self.locs.dim}')


def standard_normals(seed, stream, count):
    """
    iid standard normals by box-muller on the (seed, stream) philox stream

    Only the cosine branch is used, one normal per pair of uniforms.
    """

    # one uniform pair per draw, so draw k depends on (seed, stream, k) only
    pairs = make_generator(seed, stream).random((count, 2))
    # 1 - U keeps the log argument in (0, 1]
    radius = np.sqrt(-2.0 * np.log(1.0 - pairs[:, 0]))
    return radius * np.cos(2.0 * np.pi * pairs[:, 1])


def simulate_replicate(factor, seed, replicate):
    """one realization L eps for a factor of the covariance matrix"""
    return factor.lower @ standard_normals(seed, replicate, factor.n)


def simulate(cfg):
    """realizations as a (replicates, n) array"""

    factor = cholesky(assemble_dense(cfg.model, cfg.locs, correlation=False))
    LOGGER.debug('simulating %d replicates of %s on %d points', cfg.replicates, cfg.model, len(cfg.locs))
    return np.array([simulate_replicate(factor, cfg.seed, idx) for idx in range(cfg.replicates)]).reshape(cfg.replicates, len(cfg.locs))


def write_realizations(stream, realizations):
    """csv with header z_1..z_n, one row per replicate"""

    realizations = np.atleast_2d(np.asarray(realizations, dtype=float))
    writer = csv.writer(stream)
    writer.writerow([f'z_{idx + 1}' for idx in range(realizations.shape[1])])
    for row in realizations:
        writer.writerow([f'{value:.17g}' for value in row])


def read_realizations(path):
    """(replicates, n) array from a realizations csv"""

    try:
        with Path(path).open(encoding='utf-8', newline='') as ftmp:
            reader = csv.reader(ftmp)
            header = next(reader)
            rows = [[float(value) for value in row] for row in reader if row]
    except (OSError, StopIteration, ValueError) as exc:
        raise ConfigError(f'cannot read realizations from {path}, {exc}') from None
    if header != [f'z_{idx + 1}' for idx in range(len(header))] or any(len(row) != len(header) for row in rows):
        raise ConfigError(f'malformed realizations file {path}')
    return np.array(rows, dtype=float).reshape(-1, len(header))
