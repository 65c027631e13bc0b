"""Candidate representative vectors C1..C5 and the N x 5 candidate matrix."""

from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import AllZeroMembership, DimensionMismatch, EmptyInput
from .subclustering import KMeansConfig, kmeans2
from .svm import SvmConfig, support_membership, train_linear_svm

CANDIDATE_IDS = ("C1", "C2", "C3", "C4", "C5")


@dataclass
class CandidateSet:
    c1: np.ndarray  # average support vector
    c2: np.ndarray  # average instance vector
    c3: np.ndarray  # instance nearest the class mean
    c4: np.ndarray  # sub-cluster 0 mean
    c5: np.ndarray  # sub-cluster 1 mean

    def as_tuple(self):
        return (self.c1, self.c2, self.c3, self.c4, self.c5)


def weighted_average(vectors, a):
    """Mean of the rows of ``vectors`` whose membership ``a`` is 1."""
    V = np.asarray(vectors, dtype=np.float64)
    a = np.asarray(a)
    if V.ndim != 2 or len(a) != V.shape[0]:
        raise DimensionMismatch(V.shape[0] if V.ndim == 2 else 0, len(a))
    if not np.isin(a, (0, 1)).all():
        raise ValueError("membership entries must be 0 or 1")
    mask = a.astype(bool)
    if not mask.any():
        raise AllZeroMembership()
    return V[mask].mean(axis=0)


def median_index(vectors):
    V = np.asarray(vectors, dtype=np.float64)
    if V.ndim != 2 or V.shape[0] == 0:
        raise EmptyInput("median_vector needs at least one vector")
    mean = weighted_average(V, np.ones(V.shape[0], dtype=np.int64))
    return int(kernels.medoid_index(np.ascontiguousarray(V), mean))


def median_vector(vectors):
    """The instance vector with the smallest squared distance to the mean (lowest index on ties)."""
    V = np.asarray(vectors, dtype=np.float64)
    return V[median_index(V)].copy()


def build_candidates(resolved, clustering, model):
    """Assemble C1..C5 for a resolved class from its clustering and SVM.

    ``model`` is ignored (and may be None) when the clustering is degenerate;
    then C1, C4 and C5 all collapse to the class mean.
    """
    X = resolved.instance_vectors
    n = X.shape[0]
    c2 = weighted_average(X, np.ones(n, dtype=np.int64))
    c3 = median_vector(X)
    if clustering.degenerate:
        return CandidateSet(c2.copy(), c2, c3, c2.copy(), c2.copy())
    # SVM training order is cluster-0 members then cluster-1 members
    order = np.concatenate([np.flatnonzero(clustering.assignment == 0),
                            np.flatnonzero(clustering.assignment == 1)])
    a = np.empty(n, dtype=np.int64)
    a[order] = support_membership(model, n)
    c1 = weighted_average(X, a)
    return CandidateSet(c1, c2, c3, clustering.mean0.copy(), clustering.mean1.copy())


def class_candidates(resolved, kmeans_config=None, svm_config=None):
    """Run sub-clustering and the SVM for one class; returns (candidates, clustering, model)."""
    X = resolved.instance_vectors
    clustering = kmeans2(X, kmeans_config or KMeansConfig())
    model = None
    if not clustering.degenerate:
        model = train_linear_svm(X[clustering.assignment == 0],
                                 X[clustering.assignment == 1],
                                 svm_config or SvmConfig())
    return build_candidates(resolved, clustering, model), clustering, model


def assemble_matrix(cs, n):
    """Stack the candidates as columns: row i is (C1[i], ..., C5[i])."""
    cols = cs.as_tuple()
    for c in cols:
        if len(c) != n:
            raise DimensionMismatch(n, len(c))
    return np.column_stack(cols)


def matrix_columns(m):
    m = np.asarray(m)
    if m.ndim != 2 or m.shape[1] != 5:
        raise DimensionMismatch(5, m.shape[1] if m.ndim == 2 else 0)
    return CandidateSet(*(m[:, j].copy() for j in range(5)))


def format_candidate_dump(entries):
    """TSV of ``(label, CandidateSet)`` pairs: class, candidate id, then the components."""
    lines = []
    for label, cs in entries:
        for cid, vec in zip(CANDIDATE_IDS, cs.as_tuple()):
            lines.append("\t".join([label, cid] + [repr(float(v)) for v in vec]))
    return "".join(line + "\n" for line in lines)
