"""Two-way k-means split of a class's instance vectors."""

from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import EmptyInput


@dataclass(frozen=True)
class KMeansConfig:
    max_iters: int = 100
    tol: float = 1e-9
    seed: int = 0
    restarts: int = 16
    refine: bool = True  # Hartigan single-point transfers after Lloyd

    def __post_init__(self):
        if self.max_iters < 1 or self.restarts < 1:
            raise ValueError("max_iters and restarts must be >= 1")
        if self.tol < 0:
            raise ValueError("tol must be nonnegative")


@dataclass
class SubClustering:
    assignment: np.ndarray  # int, values in {0, 1}
    mean0: np.ndarray
    mean1: np.ndarray
    objective: float
    iterations: int
    degenerate: bool
    history: np.ndarray  # per-iteration SSE of the winning restart

    def sizes(self):
        n1 = int(self.assignment.sum())
        return len(self.assignment) - n1, n1


def sse(X, assignment, means):
    return float(((X - means[assignment]) ** 2).sum())


def kmeans_pp_init(X, rng):
    """Pick two seed rows: the first uniformly, the second with probability ~ squared distance."""
    n = X.shape[0]
    i0 = int(rng.integers(n))
    d = ((X - X[i0]) ** 2).sum(axis=1)
    i1 = int(rng.choice(n, p=d / d.sum()))
    return i0, i1


def kmeans2(vectors, config=None):
    """Lloyd's k-means with K=2, best of ``config.restarts`` k-means++ starts.

    Each Lloyd run is followed by Hartigan transfers (unless ``config.refine`` is
    off). Lloyd alone can stall in a partition that no single-point move would
    keep, and from some point sets no pair of seed points reaches the optimum.

    Clusters are numbered so that the first vector lies in cluster 0.

    Singletons and sets of identical vectors come back ``degenerate`` with both
    means set to the overall mean and every point in cluster 0.
    """
    config = config or KMeansConfig()
    X = np.asarray(vectors, dtype=np.float64)
    if X.ndim != 2 or X.shape[0] == 0:
        raise EmptyInput("kmeans2 needs at least one vector")
    n = X.shape[0]

    if n == 1 or (X == X[0]).all():
        mean = X.mean(axis=0)
        assignment = np.zeros(n, dtype=np.int64)
        obj = sse(X, assignment, np.stack([mean, mean]))
        return SubClustering(assignment, mean, mean.copy(), obj, 0, True, np.array([obj]))

    rng = np.random.default_rng(config.seed)
    best = None
    for _ in range(config.restarts):
        i0, i1 = kmeans_pp_init(X, rng)
        assign, _, _, iters, history = kernels.lloyd2(
            X, X[i0].copy(), X[i1].copy(), config.max_iters, config.tol
        )
        assign = np.asarray(assign, dtype=np.int64)
        history = np.asarray(history)
        if config.refine:
            assign, moves = kernels.hartigan2(X, assign, config.max_iters, config.tol)
            assign = np.asarray(assign, dtype=np.int64)
        means = np.stack([X[assign == 0].mean(axis=0), X[assign == 1].mean(axis=0)])
        obj = sse(X, assign, means)
        if config.refine and moves:
            history = np.append(history, obj)
        if best is None or obj < best[0]:
            best = (obj, assign, means, int(iters), history)
    obj, assign, means, iters, history = best
    if assign[0] == 1:
        # cluster 0 is the one holding the first vector
        assign = 1 - assign
        means = means[::-1].copy()
    return SubClustering(assign, means[0], means[1], obj, iters, False, history)

