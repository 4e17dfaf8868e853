# This file is part of gwk project governed by MIT license, see the LICENSE.txt file.
"""
point sets, distances, perturbed grids and radius queries
"""

import csv
from itertools import product
from pathlib import Path

import numpy as np
from scipy.spatial.distance import cdist, pdist, squareform

from gwk.lib import ConfigError, make_generator


# generator streams reserved for geometry draws, simulation uses replicate indices
GRID_STREAM = 2**63
SUBSAMPLE_STREAM = 2**62
AXIS_NAMES = ('x', 'y', 'z')


def distance(a, b):
    """euclidean distance of two points"""

    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.shape != b.shape:
        raise ConfigError(f'dimension mismatch, {a.shape} vs {b.shape}')
    return float(np.linalg.norm(a - b))


class LocationSet:
    """immutable ordered set of distinct d-dimensional points"""

    def __init__(self, coords):
        coords = np.array(coords, dtype=float, ndmin=2)
        if coords.ndim != 2 or coords.shape[1] not in (1, 2, 3):
            raise ConfigError(f'points must be an (n, d) array with d in 1..3, got shape {coords.shape}')
        if not np.all(np.isfinite(coords)):
            raise ConfigError('points must have finite coordinates')
        if len(np.unique(coords, axis=0)) != len(coords):
            raise ConfigError('points must be pairwise distinct')
        coords.setflags(write=False)
        self.coords = coords
        self._distances = None

    @classmethod
    def empty(cls, dim=2):
        """location set without points; only kriging accepts it"""

        return cls(np.empty((0, dim)))

    def __len__(self):
        return self.coords.shape[0]

    def __getitem__(self, idx):
        return self.coords[idx]

    def __repr__(self):
        return f'<LocationSet n={len(self)} d={self.dim}>'

    @property
    def dim(self):
        """point dimension"""
        return self.coords.shape[1]

    def take(self, indices):
        """location set restricted to indices, in the given order"""

        return LocationSet(self.coords[np.asarray(indices, dtype=int)])

    def distances(self):
        """dense pairwise distance matrix, computed once"""

        if self._distances is None:
            dists = squareform(pdist(self.coords)) if len(self) > 1 else np.zeros((len(self), len(self)))
            dists.setflags(write=False)
            self._distances = dists
        return self._distances

    def distances_to(self, point):
        """distances from every point to a given point"""

        point = np.asarray(point, dtype=float).reshape(1, -1)
        if point.shape[1] != self.dim:
            raise ConfigError(f'dimension mismatch, {point.shape[1]} vs {self.dim}')
        return cdist(self.coords, point)[:, 0]

    def write_csv(self, stream):
        """write points as csv to an open text stream, full double precision"""

        writer = csv.writer(stream)
        writer.writerow(AXIS_NAMES[:self.dim])
        for row in self.coords:
            writer.writerow([f'{value:.17g}' for value in row])

    def to_csv(self, path):
        """write points as csv file"""

        with Path(path).open('w', encoding='utf-8', newline='') as ftmp:
            self.write_csv(ftmp)

    @classmethod
    def from_csv(cls, path):
        """read points from csv with x,y[,z] header"""

        try:
            with Path(path).open(encoding='utf-8', newline='') as ftmp:
                reader = csv.reader(ftmp)
                header = next(reader)
                if tuple(header) != AXIS_NAMES[:len(header)]:
                    raise ConfigError(f'invalid locations header {header}')
                coords = [[float(value) for value in row] for row in reader if row]
        except (OSError, StopIteration, ValueError) as exc:
            raise ConfigError(f'cannot read locations from {path}, {exc}') from None
        return cls(np.array(coords, dtype=float).reshape(-1, len(header)))


class CellIndex:
    """
    uniform grid binning of a location set

    Cells are half-open boxes of side `cell`; every point closer than `cell`
    to a query lies in the query cell or one of its direct neighbours.
    """

    def __init__(self, locs, cell):
        self.locs = locs
        self.cell = float(cell)
        keys = np.floor(locs.coords / self.cell).astype(np.int64)
        buckets = {}
        for idx, key in enumerate(map(tuple, keys)):
            buckets.setdefault(key, []).append(idx)
        self.buckets = {key: np.array(value, dtype=int) for key, value in buckets.items()}
        self.offsets = list(product((-1, 0, 1), repeat=locs.dim))

    def _key(self, point):
        return tuple(np.floor(np.asarray(point, dtype=float) / self.cell).astype(np.int64))

    def candidates(self, point):
        """indices in the cell of point and neighbouring cells"""

        key = self._key(point)
        found = [self.buckets.get(tuple(k + o for k, o in zip(key, offset))) for offset in self.offsets]
        found = [item for item in found if item is not None]
        return np.concatenate(found) if found else np.empty(0, dtype=int)

    def within(self, center, radius):
        """indices strictly closer than radius to center, radius <= cell"""

        idx = self.candidates(center)
        if not idx.size:
            return idx
        dists = np.linalg.norm(self.locs.coords[idx] - np.asarray(center, dtype=float), axis=1)
        return np.sort(idx[dists < radius])

    def pairs(self, radius):
        """all index pairs i < j strictly closer than radius, with distances"""

        rows, cols, dists = [], [], []
        for key, members in self.buckets.items():
            for offset in self.offsets:
                others = self.buckets.get(tuple(k + o for k, o in zip(key, offset)))
                if others is None:
                    continue
                block = cdist(self.locs.coords[members], self.locs.coords[others])
                ii, jj = np.nonzero((block < radius) & (members[:, None] < others[None, :]))
                rows.append(members[ii])
                cols.append(others[jj])
                dists.append(block[ii, jj])
        if not rows:
            return np.empty(0, dtype=int), np.empty(0, dtype=int), np.empty(0)
        return np.concatenate(rows), np.concatenate(cols), np.concatenate(dists)


def _binning_cell(locs, radius):
    """cell side for radius queries; an infinite radius collapses into a single cell"""

    if np.isfinite(radius):
        return radius
    return float(np.ptp(locs.coords, axis=0).max()) + 1.0


def neighbors_within(locs, center, radius):
    """indices of points strictly closer than radius to center"""

    if radius < 0:
        raise ConfigError(f'radius must be nonnegative, got {radius}')
    if radius == 0 or not len(locs):
        return np.empty(0, dtype=int)
    return CellIndex(locs, _binning_cell(locs, radius)).within(center, radius)


def pairs_within(locs, radius):
    """index pairs i < j with distance strictly below radius"""

    if radius <= 0 or len(locs) < 2:
        return np.empty(0, dtype=int), np.empty(0, dtype=int), np.empty(0)
    return CellIndex(locs, _binning_cell(locs, radius)).pairs(radius)


def perturbed_grid(increment, jitter, seed, dim=2):
    """
    regular grid on the unit cube with independent uniform jitter per coordinate

    Axis values are {k * increment : k >= 0, k * increment <= 1}, jittered points
    are not clamped to the unit cube.
    """

    if increment <= 0 or jitter < 0:
        raise ConfigError(f'invalid grid parameters, increment={increment} jitter={jitter}')

    axis = increment * np.arange(int(np.floor(1.0 / increment + 1e-9)) + 1)
    nodes = np.array(list(product(axis, repeat=dim)), dtype=float)
    shift = make_generator(seed, GRID_STREAM).uniform(-jitter, jitter, size=nodes.shape) if jitter else 0.0
    return LocationSet(nodes + shift)


def subsample(locs, m, seed, stream=0):
    """m distinct points drawn uniformly without replacement"""

    if not 1 <= m <= len(locs):
        raise ConfigError(f'cannot draw {m} points from a set of {len(locs)}')
    generator = make_generator(seed, SUBSAMPLE_STREAM + stream)
    return locs.take(generator.choice(len(locs), size=m, replace=False))
