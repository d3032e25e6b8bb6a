# SPDX-License-Identifier: Apache-2.0
# Copyright 2026 The udcran Authors

import csv
import io

import numpy as np
import pytest

import udcran


def test_default_config_round_trips():
    cfg = udcran.default_config()
    assert cfg["network"]["num_rrh"] == 14
    assert cfg["network"]["num_ue"] == 8
    assert udcran.normalize_config(cfg) == cfg
    assert udcran.default_config(large=True)["network"]["num_ue"] == 24


def test_unknown_key_is_rejected():
    with pytest.raises(udcran.ConfigError):
        udcran.normalize_config({"bogus": 1})
    with pytest.raises(ValueError):
        udcran.normalize_config({"r_min": -1.0})


def test_topology_and_gains_agree():
    topo = udcran.topology({"base_seed": 5})
    gains = udcran.gain_matrix({"base_seed": 5})
    assert gains.shape == (14, 8)
    assert np.all(gains > 0)
    rrh = np.asarray(topo["rrh_positions_m"], dtype=float)
    ue = np.asarray(topo["ue_positions_m"], dtype=float)
    for k, cluster in enumerate(topo["clusters"]):
        assert len(cluster) == 3
        nearest = np.argsort(np.linalg.norm(rrh - ue[k], axis=1))[:3]
        assert set(cluster) == set(nearest.tolist())


def test_pilot_colouring_is_proper():
    topo = udcran.topology()
    pa = udcran.color_topology(topo, 2)
    color = pa["color"]
    for cluster in topo["clusters"]:
        for a in cluster:
            for b in cluster:
                if a != b:
                    assert color[a] != color[b]
    counts = np.bincount(color)
    assert counts.max() <= 2
    assert pa == udcran.pilots()


def test_solve_meets_rate_target():
    rec = udcran.solve({"r_min": 2.0})
    assert rec["ok"]
    assert rec["admitted"]
    assert min(rec["rates"]) >= 2.0 - 1e-3
    assert rec["power_mw"] > 0


def test_sweep_csv_schema():
    text, records = udcran.sweep(
        {"trials": 2, "sweep": {"axis": "r_min", "values": [1.0, 3.0]}, "threads": 1})
    rows = list(csv.reader(io.StringIO(text)))
    assert ",".join(rows[0]) == udcran.CSV_HEADER
    assert len(rows) == 1 + 4 == 1 + len(records)
    assert {r["sweep_value"] for r in records} == {1.0, 3.0}


def test_sinr_target_and_pathloss():
    assert udcran.sinr_target(3.0, 200, 8) == pytest.approx(2 ** 3.125 - 1, rel=1e-12)
    assert udcran.pathloss_db(1000.0) == pytest.approx(148.1)
