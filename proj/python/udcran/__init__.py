# SPDX-License-Identifier: Apache-2.0
# Copyright 2026 The udcran Authors
"""Robust beamforming toolkit for FDD user-centric C-RAN.

Configurations are plain dicts with the same keys as the JSON config files
accepted by the command-line driver. Missing keys keep their defaults.
"""

import json

import numpy as np

from . import _udcran
from ._udcran import CSV_HEADER, ConfigError, pathloss_db, sinr_target

__all__ = [
    "CSV_HEADER",
    "ConfigError",
    "color_topology",
    "default_config",
    "gain_matrix",
    "normalize_config",
    "oracles",
    "pathloss_db",
    "pilots",
    "sinr_target",
    "solve",
    "sweep",
    "topology",
]


def _dump(config):
    return json.dumps(config if config is not None else {})


def default_config(large=False):
    """Small (14 RRHs, 8 UEs) or large (42 RRHs, 24 UEs) scenario."""
    return json.loads(_udcran.default_config(large))


def normalize_config(config):
    """Fill defaults and validate. Raises ConfigError."""
    return json.loads(_udcran.normalize_config(_dump(config)))


def topology(config=None, trial=0):
    return json.loads(_udcran.topology(_dump(config), trial))


def gain_matrix(config=None, trial=0):
    """Linear gains, shape (num_rrh, num_ue)."""
    return np.asarray(_udcran.gain_matrix(_dump(config), trial))


def pilots(config=None, trial=0):
    return json.loads(_udcran.pilots(_dump(config), trial))


def color_topology(topo, n_max):
    """Pilot assignment for a topology dict as returned by topology()."""
    return json.loads(_udcran.color_topology(json.dumps(topo), n_max))


def solve(config=None, trial=0):
    """Admission and power minimisation with the first method and belief of the config."""
    return json.loads(_udcran.solve(_dump(config), trial))[0]


def sweep(config=None):
    """Returns (csv_text, records)."""
    csv, records = _udcran.sweep(_dump(config))
    return csv, json.loads(records)


def oracles(draws=100_000, channel_draws=100_000, seed=2026):
    return _udcran.oracles(draws, channel_draws, seed)
