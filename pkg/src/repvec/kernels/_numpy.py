"""Vectorized numpy kernels. Same contracts as the numba backend."""

import numpy as np

_TAU = 1e-12


def lloyd2(X, c0, c1, max_iters, tol):
    """Two-center Lloyd iterations from the given initial centers.

    Returns ``(assign, means, objective, iterations, history)`` where
    ``history[k]`` is the within-cluster SSE after iteration ``k + 1``.
    Ties go to cluster 0; an emptied cluster takes the point farthest
    from the surviving center.
    """
    n = X.shape[0]
    centers = np.stack([c0, c1]).astype(np.float64)
    history = np.empty(max_iters, dtype=np.float64)
    prev = np.inf
    it = 0
    assign = np.zeros(n, dtype=np.int64)
    means = centers.copy()
    obj = np.inf
    while it < max_iters:
        d0 = ((X - centers[0]) ** 2).sum(axis=1)
        d1 = ((X - centers[1]) ** 2).sum(axis=1)
        assign = (d1 < d0).astype(np.int64)
        n1 = int(assign.sum())
        if n1 == 0:
            assign[int(np.argmax(d0))] = 1
        elif n1 == n:
            assign[int(np.argmax(d1))] = 0
        means = np.stack([X[assign == 0].mean(axis=0), X[assign == 1].mean(axis=0)])
        obj = float(((X - means[assign]) ** 2).sum())
        history[it] = obj
        it += 1
        if prev - obj <= tol:
            break
        prev = obj
        centers = means
    return assign, means, obj, it, history[:it].copy()


def hartigan2(X, assign, max_sweeps, tol):
    """Single-point transfers between the two clusters until none lowers the SSE by more than ``tol``.

    Moving x from cluster s (size ns >= 2) to t changes the SSE by
    nt/(nt+1)*|x-mt|^2 - ns/(ns-1)*|x-ms|^2. Points are visited in index order
    and means are updated after every move. Returns ``(assign, moves)``.
    """
    assign = assign.astype(np.int64).copy()
    counts = np.array([np.sum(assign == 0), np.sum(assign == 1)], dtype=np.float64)
    sums = np.stack([X[assign == 0].sum(axis=0), X[assign == 1].sum(axis=0)])
    moves = 0
    for _ in range(max_sweeps):
        moved = False
        for i in range(X.shape[0]):
            s = assign[i]
            t = 1 - s
            ns, nt = counts[s], counts[t]
            if ns < 2:
                continue
            ds = float(((X[i] - sums[s] / ns) ** 2).sum())
            dt = float(((X[i] - sums[t] / nt) ** 2).sum())
            if ns / (ns - 1) * ds - nt / (nt + 1) * dt > tol:
                assign[i] = t
                counts[s] -= 1
                counts[t] += 1
                sums[s] -= X[i]
                sums[t] += X[i]
                moves += 1
                moved = True
        if not moved:
            break
    return assign, moves


def smo_linear(X, y, C, tol, max_iter):
    """Linear soft-margin SVM dual by SMO with second-order working-set selection.

    ``y`` holds +1/-1 as floats. Returns ``(alpha, w, b, iterations, gap)`` where
    ``gap`` is the final maximal KKT violation m(alpha) - M(alpha).
    """
    n = X.shape[0]
    alpha = np.zeros(n)
    w = np.zeros(X.shape[1])
    G = -np.ones(n)
    kdiag = np.einsum("ij,ij->i", X, X)
    pos = y > 0
    it = 0
    gap = np.inf
    while it < max_iter:
        up = (pos & (alpha < C)) | (~pos & (alpha > 0))
        low = (pos & (alpha > 0)) | (~pos & (alpha < C))
        score = -y * G
        up_score = np.where(up, score, -np.inf)
        i = int(np.argmax(up_score))
        gmax = up_score[i]
        gmin = np.min(np.where(low, score, np.inf))
        gap = gmax - gmin
        if gap < tol:
            break
        ki = X @ X[i]
        b_it = gmax - score
        cand = low & (b_it > 0)
        if not cand.any():
            break
        quad = kdiag[i] + kdiag - 2.0 * ki
        quad = np.where(quad > 0, quad, _TAU)
        obj = np.where(cand, -(b_it * b_it) / quad, np.inf)
        j = int(np.argmin(obj))
        ai, aj = _pair_update(alpha[i], alpha[j], y[i], y[j], G[i], G[j],
                              kdiag[i], kdiag[j], ki[j], C)
        dw = (ai - alpha[i]) * y[i] * X[i] + (aj - alpha[j]) * y[j] * X[j]
        alpha[i], alpha[j] = ai, aj
        w += dw
        G += y * (X @ dw)
        it += 1
    return alpha, w, _offset(alpha, y, G, C), it, gap


def _pair_update(ai, aj, yi, yj, gi, gj, kii, kjj, kij, C):
    quad = kii + kjj - 2.0 * kij
    if quad <= 0:
        quad = _TAU
    if yi != yj:
        delta = (-gi - gj) / quad
        diff = ai - aj
        ai += delta
        aj += delta
        if diff > 0:
            if aj < 0:
                aj = 0.0
                ai = diff
        elif ai < 0:
            ai = 0.0
            aj = -diff
        if diff > 0:
            if ai > C:
                ai = C
                aj = C - diff
        elif aj > C:
            aj = C
            ai = C + diff
    else:
        delta = (gi - gj) / quad
        total = ai + aj
        ai -= delta
        aj += delta
        if total > C:
            if ai > C:
                ai = C
                aj = total - C
        elif aj < 0:
            aj = 0.0
            ai = total
        if total > C:
            if aj > C:
                aj = C
                ai = total - C
        elif ai < 0:
            ai = 0.0
            aj = total
    return ai, aj


def _offset(alpha, y, G, C):
    free = (alpha > 0) & (alpha < C)
    if free.any():
        return float(np.mean(-y[free] * G[free]))
    pos = y > 0
    score = -y * G
    up = (pos & (alpha < C)) | (~pos & (alpha > 0))
    low = (pos & (alpha > 0)) | (~pos & (alpha < C))
    hi = score[up].max() if up.any() else score.max()
    lo = score[low].min() if low.any() else score.min()
    return float((hi + lo) / 2.0)


def medoid_index(X, mean):
    """Index of the row of ``X`` nearest (squared Euclidean) to ``mean``; lowest index on ties."""
    # accumulate dimensions in order so near-ties round the same way as a scalar loop
    dist = np.zeros(X.shape[0])
    for k in range(X.shape[1]):
        dist += (X[:, k] - mean[k]) ** 2
    return int(np.argmin(dist))


def combiner_loss_grad(theta, X, D, exp_param):
    """MSE of the normalized weighted combiner and its gradient in ``theta``.

    Weights are ``exp(theta)`` when ``exp_param`` else ``theta`` itself.
    """
    w = np.exp(theta) if exp_param else theta
    s = w.sum()
    yhat = X @ w / s
    r = yhat - D
    m = D.shape[0]
    loss = float(r @ r / m)
    gw = (2.0 / (m * s)) * (r @ (X - yhat[:, None]))
    grad = gw * w if exp_param else gw
    return loss, grad
