import json

import numpy as np
import pytest

from oracles import central_difference, combiner_mse
from repvec.errors import (
    DimensionMismatch,
    EmptyDataset,
    InvalidWeights,
    NonFiniteLoss,
    ParseError,
    ZeroWeightSum,
)
from repvec.weights import (
    TrainConfig,
    WeightDataset,
    WeightVector,
    build_weight_dataset,
    dumps_weights,
    load_weights,
    loads_weights,
    loss_and_grad,
    predict_class_vector,
    predict_scalar,
    save_weights,
    train_weights,
)


def _ds(X, D):
    return WeightDataset(np.asarray(X, float), np.asarray(D, float), [("c", i) for i in range(len(D))])


def test_dataset_size_is_n_times_m(rng):
    classes = [(rng.standard_normal((3, 5)), rng.standard_normal(3)) for _ in range(2)]
    ds = build_weight_dataset(classes, labels=["a", "b"])
    assert len(ds) == 6
    assert ds.provenance == [("a", 0), ("a", 1), ("a", 2), ("b", 0), ("b", 1), ("b", 2)]


def test_dataset_rows_and_targets():
    m = np.array([[1, 3, 5, 7, 9], [2, 4, 6, 8, 10]], dtype=float)
    ds = build_weight_dataset([(m, np.array([0.5, 0.25]))])
    np.testing.assert_array_equal(ds.X, m)
    np.testing.assert_array_equal(ds.D, [0.5, 0.25])


def test_dataset_empty_and_mismatch(rng):
    assert len(build_weight_dataset([])) == 0
    with pytest.raises(DimensionMismatch):
        build_weight_dataset([(rng.standard_normal((3, 5)), rng.standard_normal(3)),
                              (rng.standard_normal((2, 5)), rng.standard_normal(2))])
    with pytest.raises(DimensionMismatch):
        build_weight_dataset([(rng.standard_normal((3, 5)), rng.standard_normal(2))])


def test_predict_scalar():
    x = [1, 3, 5, 7, 9]
    assert predict_scalar(x, [1, 1, 1, 1, 1]) == 5.0
    assert predict_scalar(x, [2, 0, 0, 0, 0]) == 1.0
    w = np.array([0.3, 1.2, 0.1, 2.0, 0.7])
    assert predict_scalar(x, 3 * w) == pytest.approx(predict_scalar(x, w), abs=1e-12)
    with pytest.raises(ZeroWeightSum):
        predict_scalar(x, [0, 0, 0, 0, 0])


def test_predict_class_vector_scale_invariant(rng):
    m = rng.standard_normal((20, 5))
    w = rng.uniform(0.01, 1, 5)
    y = predict_class_vector(m, w)
    for c in (1e-3, 0.5, 7.0, 1e4):
        assert np.abs(predict_class_vector(m, c * w) - y).max() <= 1e-12
    np.testing.assert_allclose(y, [predict_scalar(row, w) for row in m], atol=1e-15)


@pytest.mark.parametrize("exp_param", [True, False])
def test_gradient_matches_finite_differences(rng, backend, exp_param):
    X = rng.standard_normal((20, 5))
    D = rng.standard_normal(20)
    params = rng.normal(0, 0.5, 5) if exp_param else rng.uniform(0.2, 1.5, 5)
    _, g = loss_and_grad(params, X, D, exp_param)

    def f(p):
        w = np.exp(p) if exp_param else p
        return combiner_mse(w, X, D)

    fd = central_difference(f, params, h=1e-5)
    rel = np.abs(g - fd) / np.maximum(np.abs(fd), 1e-12)
    assert rel.max() < 1e-4
    assert loss_and_grad(params, X, D, exp_param)[0] == pytest.approx(f(params), rel=1e-12)


def test_backends_agree(rng):
    from repvec import kernels
    try:
        nb = kernels.numba_backend()
    except ImportError:
        pytest.skip("numba not installed")
    X, D, th = rng.standard_normal((50, 5)), rng.standard_normal(50), rng.standard_normal(5)
    for e in (True, False):
        a = kernels.numpy_backend.combiner_loss_grad(th, X, D, e)
        b = nb.combiner_loss_grad(th, X, D, e)
        assert a[0] == pytest.approx(b[0], rel=1e-12)
        np.testing.assert_allclose(a[1], b[1], rtol=1e-10, atol=1e-14)


def test_recovers_single_candidate(rng):
    base = rng.standard_normal((300, 1))
    X = base + 0.4 * rng.standard_normal((300, 5))
    D = X[:, 1].copy()
    wv = train_weights(_ds(X, D), TrainConfig(learning_rate=0.5, epochs=500))
    assert wv.w[1] >= 0.9
    assert wv.meta["final_loss"] <= 1e-6 * D.var()


def test_equal_weights_already_optimal(rng):
    X = rng.standard_normal((100, 5))
    D = X.mean(axis=1)
    wv = train_weights(_ds(X, D))
    assert wv.loss_history[0] == pytest.approx(0.0, abs=1e-25)
    assert wv.meta["final_loss"] == pytest.approx(0.0, abs=1e-25)
    np.testing.assert_allclose(wv.w, 0.2, atol=1e-9)


def test_weights_positive_and_normalized(rng):
    X = rng.standard_normal((60, 5))
    D = X @ np.array([0.1, 0.5, 0.1, 0.2, 0.1]) + 0.05 * rng.standard_normal(60)
    wv = train_weights(_ds(X, D))
    assert (wv.w > 0).all()
    assert wv.w.sum() == pytest.approx(1.0, abs=1e-12)
    assert wv.meta["final_loss"] < wv.meta["initial_loss"]


def _monotone_gd(ds, lr=1e-3, epochs=300):
    for _ in range(6):
        wv = train_weights(ds, TrainConfig(learning_rate=lr, epochs=epochs, optimizer="gd"))
        if np.all(np.diff(wv.loss_history) <= 0):
            return wv
        lr /= 2
    raise AssertionError("loss never became monotone")


def test_gd_loss_monotone(rng):
    for _ in range(5):
        X = rng.standard_normal((80, 5)) * rng.uniform(0.5, 3, 5)
        D = X @ rng.dirichlet(np.ones(5)) + 0.1 * rng.standard_normal(80)
        wv = _monotone_gd(_ds(X, D))
        assert wv.loss_history[-1] < wv.loss_history[0]


def test_minibatch_is_seeded(rng):
    X = rng.standard_normal((64, 5))
    D = X[:, 0] + 0.1 * rng.standard_normal(64)
    a = train_weights(_ds(X, D), TrainConfig(batch=16, epochs=30, seed=3))
    b = train_weights(_ds(X, D), TrainConfig(batch=16, epochs=30, seed=3))
    np.testing.assert_array_equal(a.w, b.w)


def test_allow_negative(rng):
    X = rng.standard_normal((200, 5))
    D = X @ np.array([1.5, -0.5, 0.0, 0.0, 0.0])
    wv = train_weights(_ds(X, D), TrainConfig(allow_negative=True, learning_rate=0.05, epochs=2000))
    assert wv.w.sum() == pytest.approx(1.0, abs=1e-12)
    np.testing.assert_allclose(wv.w, [1.5, -0.5, 0, 0, 0], atol=2e-2)


def test_training_errors(rng):
    with pytest.raises(EmptyDataset):
        train_weights(_ds(np.empty((0, 5)), []))
    X = 1e3 * rng.standard_normal((50, 5))
    D = 1e3 * rng.standard_normal(50)
    with pytest.raises(NonFiniteLoss):
        train_weights(_ds(X, D), TrainConfig(learning_rate=1e3, epochs=50, optimizer="gd"))


def test_save_load_round_trip(tmp_path, rng):
    wv = WeightVector(rng.dirichlet(np.ones(5)), {"epochs": 5, "final_loss": 0.1, "seed": 1})
    path = tmp_path / "w.json"
    save_weights(wv, path)
    back = load_weights(path)
    np.testing.assert_allclose(back.w, wv.w, atol=1e-12)
    assert back.meta == wv.meta
    text = path.read_text()
    assert dumps_weights(back) == text


def test_load_validation():
    w = loads_weights(json.dumps({"weights": [0.2] * 5, "meta": {}}))
    np.testing.assert_array_equal(w.w, [0.2] * 5)
    w = loads_weights(json.dumps({"weights": [1, 1, 1, 1, 4]}))
    np.testing.assert_allclose(w.w, [0.125] * 4 + [0.5])
    assert abs(w.w.sum() - 1) <= 1e-9
    with pytest.raises(InvalidWeights):
        loads_weights(json.dumps({"weights": [0.3, -0.1, 0.3, 0.3, 0.2]}))
    with pytest.raises(InvalidWeights):
        loads_weights(json.dumps({"weights": [0.2] * 4}))
    with pytest.raises(InvalidWeights):
        loads_weights('{"weights": [0.2, 0.2, 0.2, 0.2, NaN]}')
    with pytest.raises(ParseError):
        loads_weights("{not json")
    with pytest.raises(ParseError):
        loads_weights(json.dumps({"w": [0.2] * 5}))
    neg = loads_weights(json.dumps({"weights": [1.5, -0.5, 0, 0, 0], "meta": {"allow_negative": True}}))
    np.testing.assert_allclose(neg.w, [1.5, -0.5, 0, 0, 0])
