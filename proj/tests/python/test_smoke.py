import math

import numpy as np
import pytest

import mvclust


def test_version():
    assert mvclust.__version__


def test_metrics_examples():
    truth = [0, 0, 0, 1, 1]
    pred = [0, 0, 1, 1, 1]
    assert mvclust.pair_counts(truth, pred) == (2, 2, 2, 4)
    s = mvclust.scores(truth, pred)
    assert s["ri"] == pytest.approx(0.6)
    assert s["ji"] == pytest.approx(1 / 3)
    assert s["fmi"] == pytest.approx(0.5)
    assert mvclust.scores([0, 0, 1, 1], [0, 1, 0, 1])["nmi"] == pytest.approx(0.0, abs=1e-12)


def test_delta():
    (delta,) = mvclust.compute_delta([np.array([[1.0], [2.0], [3.0]])])
    assert delta[0] == pytest.approx(2.0)


def test_synthetic_shapes():
    views, labels = mvclust.synthetic(n=300, seed=1)
    assert [v.shape for v in views] == [(300, 3), (300, 3)]
    assert len(labels) == 300
    assert set(labels) == {0, 1, 2, 3, 4}


def test_fit_separable():
    x = np.repeat(np.array([[1.0], [11.0], [21.0]]), 20, axis=0)
    labels = [0] * 20 + [1] * 20 + [2] * 20
    for fit in (mvclust.fit_amvfcm, mvclust.fit_aamvfcm):
        out = fit([x], clusters=3, seed=3)
        assert out["memberships"].shape == (60, 3)
        assert np.allclose(out["memberships"].sum(axis=1), 1.0)
        assert math.isclose(out["view_weights"].sum(), 1.0)
        assert mvclust.scores(labels, out["labels"])["ari"] == 1.0


def test_pruning_reports_mask():
    views, _ = mvclust.synthetic(n=300, seed=5)
    out = mvclust.fit_aamvfcm(mvclust.minmax_normalize(views), clusters=5)
    assert len(out["final_dims"]) == 2
    assert sum(out["final_dims"]) >= 1
    assert out["objective_trace"][0] >= out["objective_trace"][1] or out["pruning_events"][1]


def test_errors_map_to_python():
    with pytest.raises(mvclust.Error):
        mvclust.fit_amvfcm([np.zeros((3, 2))], clusters=5)
    with pytest.raises(mvclust.Error):
        mvclust.fit_amvfcm([np.ones((10, 2))], clusters=2, beta="warm")
