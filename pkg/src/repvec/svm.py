"""Linear soft-margin SVM between two sub-clusters, used only for its support vectors."""

import logging
from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import DimensionMismatch, EmptySide

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class SvmConfig:
    C: float = 1.0
    kkt_tol: float = 1e-3
    support_eps: float = 1e-8
    max_passes: int = None  # None -> 10 * n
    seed: int = 0
    # SMO stops once the maximal violating pair gap drops below min(gap_tol, kkt_tol)
    gap_tol: float = 1e-6

    def __post_init__(self):
        if not self.C > 0:
            raise ValueError("C must be positive")
        if self.kkt_tol <= 0 or self.gap_tol <= 0 or self.support_eps < 0:
            raise ValueError("tolerances must be positive")


@dataclass
class SvmModel:
    w: np.ndarray
    b: float
    alphas: np.ndarray
    support_mask: np.ndarray
    C: float
    fallback_all: bool
    labels: np.ndarray  # +1 for pos, -1 for neg, in training order
    iterations: int = 0
    converged: bool = True

    def decision(self, X):
        return np.asarray(X, dtype=np.float64) @ self.w + self.b

    @property
    def margin(self):
        nw = np.linalg.norm(self.w)
        return 2.0 / nw if nw > 0 else np.inf


def _offset(X, y, alpha, w, C):
    """Bias from the free support vectors (average), else the midpoint of the feasible interval."""
    score = y - X @ w  # equals b at a free support vector
    free = (alpha > 0) & (alpha < C)
    if free.any():
        return float(score[free].mean())
    pos = y > 0
    up = (pos & (alpha < C)) | (~pos & (alpha > 0))
    low = (pos & (alpha > 0)) | (~pos & (alpha < C))
    hi = score[up].max() if up.any() else score.max()
    lo = score[low].min() if low.any() else score.min()
    return float((hi + lo) / 2.0)


def kkt_residuals(model, X):
    """Per-point KKT violation of a trained model on its own training set."""
    X = np.asarray(X, dtype=np.float64)
    margin = model.labels * model.decision(X)
    a, C = model.alphas, model.C
    at_zero = a <= 0
    at_c = a >= C
    free = ~at_zero & ~at_c
    res = np.zeros_like(margin)
    res[at_zero] = np.maximum(0.0, 1.0 - margin[at_zero])
    res[free] = np.abs(margin[free] - 1.0)
    res[at_c] = np.maximum(0.0, margin[at_c] - 1.0)
    return res


def train_linear_svm(pos, neg, config=None):
    """Fit the soft-margin dual between ``pos`` (+1) and ``neg`` (-1) by SMO.

    Training order is ``pos`` followed by ``neg``; ``alphas`` and
    ``support_mask`` follow that order. If the solution has ||w|| < 1e-12 the
    model is flagged ``fallback_all`` and every point counts as a support vector.
    """
    config = config or SvmConfig()
    pos = np.asarray(pos, dtype=np.float64)
    neg = np.asarray(neg, dtype=np.float64)
    if pos.size == 0:
        raise EmptySide("positive")
    if neg.size == 0:
        raise EmptySide("negative")
    pos, neg = np.atleast_2d(pos), np.atleast_2d(neg)
    if pos.shape[1] != neg.shape[1]:
        raise DimensionMismatch(pos.shape[1], neg.shape[1])
    X = np.vstack([pos, neg])
    y = np.concatenate([np.ones(len(pos)), -np.ones(len(neg))])
    n = len(y)
    C = float(config.C)

    # seeded visiting order decides ties in working-set selection
    perm = np.random.default_rng(config.seed).permutation(n)
    passes = config.max_passes if config.max_passes is not None else 10 * n
    tol = min(config.gap_tol, config.kkt_tol)
    alpha_p, _, _, iters, gap = kernels.smo_linear(
        np.ascontiguousarray(X[perm]), np.ascontiguousarray(y[perm]), C, tol, passes * n
    )
    alpha = np.empty(n)
    alpha[perm] = alpha_p
    converged = bool(gap < tol)
    if not converged:
        log.warning("SMO stopped after %d iterations with gap %.3g", iters, gap)

    w = (alpha * y) @ X
    b = _offset(X, y, alpha, w, C)
    fallback = bool(np.linalg.norm(w) < 1e-12)
    if fallback:
        support = np.ones(n, dtype=bool)
    else:
        support = alpha > config.support_eps
    return SvmModel(w, b, alpha, support, C, fallback, y, int(iters), converged)


def support_membership(model, n_total):
    """0/1 membership of each training point in the support set."""
    if n_total != len(model.alphas):
        raise DimensionMismatch(len(model.alphas), n_total)
    if model.fallback_all:
        return np.ones(n_total, dtype=np.int64)
    return model.support_mask.astype(np.int64)
