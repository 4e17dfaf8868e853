# This file is part of gwk project governed by MIT license, see the LICENSE.txt file.
"""
simulation study plumbing

Studies declare a CONFIG_SCHEMA, enumerate their cells in a fixed order and map
independent per-replicate tasks over an optional process pool. Reports are CSV
files with '#' comment lines documenting the columns.
"""

import csv
import logging
import multiprocessing
import time
from abc import ABC, abstractmethod
from dataclasses import dataclass, field

import click
import numpy as np
from schema import SchemaError
from scipy.special import ndtr

from gwk.lib import ConfigError, NumericalError


REGISTERED_STUDIES = {}
# per-cell failure share above which a study cell aborts
FAILURE_LIMIT = 0.01


def register(name):
    """register study class under name"""

    def register_decorator(cls):
        cls.name = name
        REGISTERED_STUDIES[name] = cls
        return cls

    return register_decorator


@dataclass
class StudyReport:
    """study output, one row per cell"""

    study: str
    columns: list
    rows: list = field(default_factory=list)
    descriptions: dict = field(default_factory=dict, compare=False)
    cdf: dict = field(default_factory=dict, compare=False)
    metadata: dict = field(default_factory=dict, compare=False)


@dataclass(frozen=True)
class TaskOutcome:
    """result of one replicate task, value None on numerical failure"""

    value: object
    error: str = None


def guarded(func, task):
    """run task, numerical failures become outcomes"""

    try:
        return TaskOutcome(func(task))
    except NumericalError as exc:
        return TaskOutcome(None, f'{type(exc).__name__}: {exc}')


class StudyBase(ABC):
    """base class for simulation studies"""

    name = None
    CONFIG_SCHEMA = None
    COLUMNS = {}

    def __init__(self, config, workers=1):
        try:
            self.config = self.CONFIG_SCHEMA.validate(config)
        except SchemaError as exc:
            raise ConfigError(f'invalid {self.name} study config, {exc}') from None
        if workers < 1:
            raise ConfigError(f'workers must be positive, got {workers}')
        self.workers = workers
        self.log = logging.getLogger(f'gwk.experiments.{self.name}')

    @abstractmethod
    def cells(self):
        """study cells in output order"""

    @abstractmethod
    def run_cell(self, cell, report):
        """append the rows of one cell to report"""

    def columns(self):
        """report columns"""
        return list(self.COLUMNS)

    def describe(self):
        """column descriptions"""
        return dict(self.COLUMNS)

    def map_tasks(self, func, tasks):
        """
        apply module level func to tasks, results in task order

        Numerical failures are counted; more than FAILURE_LIMIT of them abort the
        cell.
        """

        tasks = list(tasks)
        if self.workers > 1 and len(tasks) > 1:
            with multiprocessing.Pool(self.workers) as pool:
                outcomes = pool.starmap(guarded, [(func, task) for task in tasks])
        else:
            outcomes = [guarded(func, task) for task in tasks]

        failures = [item.error for item in outcomes if item.error is not None]
        for error in failures:
            self.log.warning('replicate failed, %s', error)
        if failures and len(failures) > FAILURE_LIMIT * len(tasks):
            raise NumericalError(f'{len(failures)} of {len(tasks)} replicates failed')
        return [item.value for item in outcomes if item.error is None], len(failures)

    def run(self):
        """run all cells"""

        report = StudyReport(study=self.name, columns=self.columns(), descriptions=self.describe())
        started = time.monotonic()
        for cell in self.cells():
            self.log.info('%s cell %s', self.name, cell)
            self.run_cell(cell, report)
        report.metadata.update({'runtime': f'{time.monotonic() - started:.1f}', 'workers': str(self.workers)})
        return report


def format_value(value):
    """csv cell text"""

    if value is None:
        return ''
    if isinstance(value, float):
        return f'{value:.17g}'
    return str(value)


def parse_value(text):
    """inverse of format_value"""

    if text == '':
        return None
    for kind in (int, float):
        try:
            return kind(text)
        except ValueError:
            pass
    return text


def emit_report(report, path):
    """write report csv, '-' writes to stdout"""

    with click.open_file(path, 'w', encoding='utf-8') as ftmp:
        ftmp.write(f'# study: {report.study}\n')
        for key, value in report.metadata.items():
            ftmp.write(f'# meta {key}: {value}\n')
        for column in report.columns:
            ftmp.write(f'# column {column}: {report.descriptions.get(column, "")}\n')
        writer = csv.writer(ftmp, lineterminator='\n')
        writer.writerow(report.columns)
        for row in report.rows:
            writer.writerow([format_value(row.get(column)) for column in report.columns])


def parse_report(path):
    """read report csv written by emit_report"""

    study, metadata, descriptions, lines = None, {}, {}, []
    try:
        with open(path, encoding='utf-8') as ftmp:
            for line in ftmp:
                if line.startswith('# study: '):
                    study = line[len('# study: '):].strip()
                elif line.startswith('# meta '):
                    key, _, value = line[len('# meta '):].partition(': ')
                    metadata[key] = value.strip()
                elif line.startswith('# column '):
                    key, _, value = line[len('# column '):].partition(':')
                    descriptions[key] = value.strip()
                else:
                    lines.append(line)
    except OSError as exc:
        raise ConfigError(f'cannot read report {path}, {exc}') from None

    reader = csv.reader(lines)
    try:
        columns = next(reader)
    except StopIteration:
        raise ConfigError(f'report {path} has no header') from None
    rows = [dict(zip(columns, map(parse_value, row))) for row in reader if row]
    return StudyReport(study=study, columns=columns, rows=rows, descriptions=descriptions, metadata=metadata)


def emit_cdf(report, path):
    """sorted statistics per cell with empirical and standard normal cdf"""

    with click.open_file(path, 'w', encoding='utf-8') as ftmp:
        writer = csv.writer(ftmp, lineterminator='\n')
        writer.writerow(['cell', 'rank', 'value', 'ecdf', 'phi'])
        for cell, values in report.cdf.items():
            values = np.sort(np.asarray(values, dtype=float))
            for rank, value in enumerate(values, start=1):
                writer.writerow([cell, rank, format_value(float(value)), format_value(rank / len(values)), format_value(float(ndtr(value)))])
