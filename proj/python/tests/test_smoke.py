# Copyright 2026 The hohl Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

import json
import math
import pathlib

import numpy as np
import pytest

import hohl

DATA = pathlib.Path(__file__).resolve().parents[2] / "data"


def test_load_dataset():
    x, y = hohl.load_dataset(str(DATA / "iris.csv"))
    assert x.shape == (150, 4)
    assert sorted(set(y.tolist())) == [0, 1, 2]


def test_kernel_constants_closed_form():
    c = hohl.kernel_constants("indicator", d=1, k=1, p=2, mc_samples=20000)
    assert c["sigma_eta"]["value"] == pytest.approx(2.0 / 3.0)
    assert c["ratio_kp_kp1"]["value"] == pytest.approx(1.0)


def test_eps_graph_toy():
    x = np.array([[0.0], [0.5], [1.2]])
    rows, cols, vals, n = hohl.eps_graph(x, 1.0, "indicator")
    assert n == 3
    edges = sorted(zip(rows.tolist(), cols.tolist()))
    assert edges == [(0, 1), (1, 0), (1, 2), (2, 1)]
    assert np.all(vals == 1.0)


def test_knn_graph_is_symmetric():
    rng = np.random.default_rng(0)
    rows, cols, vals, n = hohl.knn_graph(rng.random((40, 2)), 5)
    w = np.zeros((n, n))
    w[rows, cols] = vals
    assert np.allclose(w, w.T)


def test_toy_energy_and_operator():
    x = np.array([[0.0], [0.5], [1.2]])
    u = np.array([0.0, 1.0, 0.0])
    assert hohl.hypergraph_energy(u, x, k=1, eps=1.0, p=2) == pytest.approx(4.0 / 9.0)
    lu = hohl.kp_laplacian(u, x, k=1, eps=1.0, p=2)
    assert np.allclose(lu, [1.0 / 3.0, -2.0 / 3.0, 1.0 / 3.0])


def test_expand_scheme():
    assert hohl.expand_scheme("QC", "IP", 3) == ([1.0, 4.0, 9.0], [1, 2, 3])
    with pytest.raises(ValueError):
        hohl.expand_scheme("VQC", "IP", 3)


def test_solve_keeps_labels_and_classifies_iris():
    x, y = hohl.load_dataset(str(DATA / "iris.csv"))
    labeled = list(range(0, 150, 5))
    lam, pw = hohl.expand_scheme("QC", "IP", 3)
    scores = hohl.solve(x, y.tolist(), labeled, [4.0, 2.0, 1.0], lam, pw)
    pred = hohl.predict(scores)
    assert np.all(pred[labeled] == y[labeled])
    free = np.setdiff1d(np.arange(150), labeled)
    assert np.mean(pred[free] == y[free]) > 0.85


def test_run_experiment(tmp_path):
    cfg = {
        "dataset": str(DATA / "iris.csv"),
        "graph": {"type": "eps", "scales": [4, 2, 1]},
        "schemes": [{"lambda": "QC", "power": "IP"}],
        "rates": [0.5],
        "trials": 3,
        "record_timing": False,
    }
    path = tmp_path / "iris.json"
    path.write_text(json.dumps(cfg))
    rows = hohl.run_experiment(str(path))
    assert len(rows) == 1
    assert rows[0]["method"] == "IP-QC"
    assert rows[0]["trials"] == 3
    assert rows == hohl.run_experiment(str(path), trials=3)
    assert 80.0 < rows[0]["mean_acc"] <= 100.0


def test_invalid_input_raises():
    with pytest.raises(ValueError):
        hohl.eps_graph(np.zeros(3), 1.0)
    with pytest.raises(ValueError):
        hohl.kernel_constants("cosine", d=1, k=1, p=2)
    with pytest.raises(RuntimeError):
        hohl.load_dataset(str(DATA / "missing.csv"))
    assert math.isfinite(hohl.num_threads())
