import numpy as np
import pytest

from oracles import grid_dual_qp, max_margin_bruteforce, separable_instance
from repvec.errors import DimensionMismatch, EmptySide
from repvec.svm import SvmConfig, kkt_residuals, support_membership, train_linear_svm


def _split(X, y):
    return X[y > 0], X[y < 0]


def test_symmetric_1d(backend):
    m = train_linear_svm([[1.0]], [[-1.0]], SvmConfig(C=10))
    np.testing.assert_allclose(m.w, [1.0], atol=1e-9)
    assert m.b == pytest.approx(0.0, abs=1e-9)
    assert m.support_mask.all()
    assert list(support_membership(m, 2)) == [1, 1]


def test_four_point_example_against_grid_qp(backend):
    pos, neg = [[2, 0], [3, 1]], [[-2, 0], [-3, 1]]
    X = np.array(pos + neg, dtype=float)
    y = np.array([1, 1, -1, -1.0])
    alpha_grid = grid_dual_qp(X, y, C=10, step=1 / 128, upper=0.5)
    m = train_linear_svm(pos, neg, SvmConfig(C=10))
    np.testing.assert_array_equal(m.support_mask, alpha_grid > 0)
    np.testing.assert_allclose(m.alphas, alpha_grid, atol=1e-6)
    np.testing.assert_allclose(m.w, (alpha_grid * y) @ X, atol=1e-6)
    np.testing.assert_allclose(m.w, [0.5, 0.0], atol=1e-9)
    assert m.b == pytest.approx(0.0, abs=1e-9)
    assert list(support_membership(m, 4)) == [1, 0, 1, 0]


def test_identical_opposing_points_fall_back():
    m = train_linear_svm([[0.0, 0.0]], [[0.0, 0.0]], SvmConfig(C=1))
    assert m.fallback_all
    assert list(support_membership(m, 2)) == [1, 1]


def test_fallback_membership_three_points():
    m = train_linear_svm([[1.0, 1.0], [1.0, 1.0]], [[1.0, 1.0]], SvmConfig(C=1))
    assert m.fallback_all
    assert list(support_membership(m, 3)) == [1, 1, 1]


def test_errors():
    with pytest.raises(EmptySide):
        train_linear_svm(np.empty((0, 2)), [[1.0, 0.0]])
    with pytest.raises(EmptySide):
        train_linear_svm([[1.0, 0.0]], [])
    with pytest.raises(DimensionMismatch):
        train_linear_svm([[1.0, 0.0]], [[1.0]])
    m = train_linear_svm([[1.0]], [[-1.0]])
    with pytest.raises(DimensionMismatch):
        support_membership(m, 3)


@pytest.mark.parametrize("C, separable", [(0.1, False), (1.0, False), (100.0, False),
                                           (1.0, True), (1e6, True)])
def test_dual_feasibility_and_kkt(rng, backend, C, separable):
    for _ in range(15):
        n, d = int(rng.integers(4, 30)), int(rng.integers(1, 6))
        if separable:
            X, y = separable_instance(rng, n, d)
        else:
            X = rng.standard_normal((n, d))
            y = np.where(rng.random(n) < 0.5, 1.0, -1.0)
            y[0], y[1] = 1.0, -1.0
        m = train_linear_svm(*_split(X, y), SvmConfig(C=C))
        Xo = np.vstack(_split(X, y))
        assert m.converged
        assert (m.alphas >= 0).all() and (m.alphas <= C).all()
        assert abs(m.alphas @ m.labels) <= 1e-8 * max(1.0, m.alphas.max())
        assert kkt_residuals(m, Xo).max() <= 1e-3
        sv = m.support_mask
        assert sv[m.labels > 0].any() and sv[m.labels < 0].any()


def test_margin_matches_bruteforce(rng, backend):
    for _ in range(15):
        X, y = separable_instance(rng, int(rng.integers(3, 12)), int(rng.integers(1, 4)))
        m = train_linear_svm(*_split(X, y), SvmConfig(C=1e6))
        Xo = np.vstack(_split(X, y))
        yo = np.concatenate([np.ones((y > 0).sum()), -np.ones((y < 0).sum())])
        oracle = max_margin_bruteforce(Xo, yo)
        assert m.margin == pytest.approx(oracle, rel=1e-4)


def test_scaling(rng):
    for _ in range(10):
        X, y = separable_instance(rng, 10, 3)
        pos, neg = _split(X, y)
        a = train_linear_svm(pos, neg, SvmConfig(C=1e6))
        for s in (0.5, 4.0):
            b = train_linear_svm(pos * s, neg * s, SvmConfig(C=1e6))
            np.testing.assert_allclose(b.w, a.w / s, rtol=1e-4, atol=1e-8)
            np.testing.assert_array_equal(b.support_mask, a.support_mask)


def test_seed_changes_nothing_on_well_posed_problem(rng):
    X, y = separable_instance(rng, 12, 2)
    ms = [train_linear_svm(*_split(X, y), SvmConfig(C=1e6, seed=s)) for s in range(4)]
    for m in ms[1:]:
        np.testing.assert_allclose(m.w, ms[0].w, rtol=1e-5)
        np.testing.assert_array_equal(m.support_mask, ms[0].support_mask)
