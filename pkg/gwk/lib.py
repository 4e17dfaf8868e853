# This file is part of gwk project governed by MIT license, see the LICENSE.txt file.
"""
shared functions
"""

import json
import logging
import os
import sys
from functools import wraps
from pathlib import Path

import numpy as np
import yaml


QUANTILE_LEVELS = (0.05, 0.25, 0.5, 0.75, 0.95)
EXIT_CONFIG_ERROR = 2
EXIT_NUMERICAL_ERROR = 3


class GwkError(Exception):
    """gwk base exception"""


class ConfigError(GwkError):
    """invalid parameters or configuration"""


class NumericalError(GwkError):
    """numerical failure during computation"""


def load_yaml(filename):
    """load yaml from file, silence file not found"""

    if filename and os.path.exists(filename):
        config = yaml.safe_load(Path(filename).read_text(encoding='utf-8'))
        return config or {}
    return {}


def load_json(value):
    """load json from inline string or from file path"""

    try:
        if Path(value).is_file():
            return json.loads(Path(value).read_text(encoding='utf-8'))
        return json.loads(value)
    except (OSError, ValueError) as exc:
        raise ConfigError(f'invalid json input, {exc}') from None


def quantiles(values, levels=QUANTILE_LEVELS):
    """
    sample quantiles by linear interpolation of order statistics

    Hyndman-Fan type 7, the numpy default.
    """

    return np.quantile(np.asarray(values, dtype=float), levels, method='linear')


def summarize(values):
    """quantiles, mean and unbiased variance of a sample"""

    values = np.asarray(values, dtype=float)
    variance = float(np.var(values, ddof=1)) if values.size > 1 else 0.0
    return {
        **{f'q{int(round(level * 100)):02d}': float(value) for level, value in zip(QUANTILE_LEVELS, quantiles(values))},
        'mean': float(np.mean(values)),
        'var': variance,
    }


def make_generator(seed, stream=0):
    """
    counter-based generator for (seed, stream)

    Philox keyed by both numbers, so any stream is reproducible without drawing
    the preceding ones.
    """

    if seed < 0 or stream < 0 or seed >= 2**64 or stream >= 2**64:
        raise ConfigError(f'seed and stream must be in [0, 2**64), got {seed}, {stream}')
    return np.random.Generator(np.random.Philox(key=(int(seed) << 64) | int(stream)))


def exit_on_error(func):
    """command decorator, logs library errors and exits with the matching code"""

    @wraps(func)
    def wrapper(*args, **kwargs):
        try:
            return func(*args, **kwargs)
        except NumericalError as exc:
            logging.getLogger('gwk').error(exc)
            sys.exit(EXIT_NUMERICAL_ERROR)
        except GwkError as exc:
            logging.getLogger('gwk').error(exc)
            sys.exit(EXIT_CONFIG_ERROR)

    return wrapper
