"""numba-compiled kernels. Loop-for-loop equivalents of ``_numpy``."""

import numpy as np
from numba import njit

_TAU = 1e-12

_opts = dict(cache=True, nogil=True)


@njit(**_opts)
def _sqdist(X, i, c):
    s = 0.0
    for k in range(X.shape[1]):
        t = X[i, k] - c[k]
        s += t * t
    return s


@njit(**_opts)
def lloyd2(X, c0, c1, max_iters, tol):
    n, d = X.shape
    centers = np.empty((2, d))
    centers[0] = c0
    centers[1] = c1
    means = centers.copy()
    assign = np.zeros(n, dtype=np.int64)
    history = np.empty(max_iters)
    prev = np.inf
    obj = np.inf
    it = 0
    while it < max_iters:
        n1 = 0
        far0 = -1.0
        far1 = -1.0
        i0 = 0
        i1 = 0
        for i in range(n):
            d0 = _sqdist(X, i, centers[0])
            d1 = _sqdist(X, i, centers[1])
            if d1 < d0:
                assign[i] = 1
                n1 += 1
            else:
                assign[i] = 0
            if d0 > far0:
                far0 = d0
                i0 = i
            if d1 > far1:
                far1 = d1
                i1 = i
        if n1 == 0:
            assign[i0] = 1
            n1 = 1
        elif n1 == n:
            assign[i1] = 0
            n1 = n - 1
        means[:, :] = 0.0
        for i in range(n):
            for k in range(d):
                means[assign[i], k] += X[i, k]
        for k in range(d):
            means[0, k] /= n - n1
            means[1, k] /= n1
        obj = 0.0
        for i in range(n):
            obj += _sqdist(X, i, means[assign[i]])
        history[it] = obj
        it += 1
        if prev - obj <= tol:
            break
        prev = obj
        centers[:, :] = means
    return assign, means, obj, it, history[:it].copy()


@njit(**_opts)
def hartigan2(X, assign, max_sweeps, tol):
    n, d = X.shape
    assign = assign.astype(np.int64).copy()
    counts = np.zeros(2)
    sums = np.zeros((2, d))
    for i in range(n):
        counts[assign[i]] += 1.0
        for k in range(d):
            sums[assign[i], k] += X[i, k]
    moves = 0
    for _ in range(max_sweeps):
        moved = False
        for i in range(n):
            s = assign[i]
            t = 1 - s
            ns = counts[s]
            nt = counts[t]
            if ns < 2:
                continue
            ds = 0.0
            dt = 0.0
            for k in range(d):
                a = X[i, k] - sums[s, k] / ns
                b = X[i, k] - sums[t, k] / nt
                ds += a * a
                dt += b * b
            if ns / (ns - 1) * ds - nt / (nt + 1) * dt > tol:
                assign[i] = t
                counts[s] -= 1.0
                counts[t] += 1.0
                for k in range(d):
                    sums[s, k] -= X[i, k]
                    sums[t, k] += X[i, k]
                moves += 1
                moved = True
        if not moved:
            break
    return assign, moves


@njit(**_opts)
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


@njit(**_opts)
def _in_up(yt, at, C):
    return (yt > 0 and at < C) or (yt < 0 and at > 0)


@njit(**_opts)
def _in_low(yt, at, C):
    return (yt > 0 and at > 0) or (yt < 0 and at < C)


@njit(**_opts)
def smo_linear(X, y, C, tol, max_iter):
    n, d = X.shape
    alpha = np.zeros(n)
    w = np.zeros(d)
    G = -np.ones(n)
    kdiag = np.empty(n)
    for t in range(n):
        kdiag[t] = X[t] @ X[t]
    ki = np.empty(n)
    dw = np.empty(d)
    it = 0
    gap = np.inf
    while it < max_iter:
        gmax = -np.inf
        i = -1
        for t in range(n):
            if _in_up(y[t], alpha[t], C) and -y[t] * G[t] > gmax:
                gmax = -y[t] * G[t]
                i = t
        gmin = np.inf
        for t in range(n):
            if _in_low(y[t], alpha[t], C) and -y[t] * G[t] < gmin:
                gmin = -y[t] * G[t]
        gap = gmax - gmin
        if gap < tol:
            break
        for t in range(n):
            ki[t] = X[t] @ X[i]
        j = -1
        best = np.inf
        for t in range(n):
            if not _in_low(y[t], alpha[t], C):
                continue
            b_it = gmax + y[t] * G[t]
            if b_it > 0:
                quad = kdiag[i] + kdiag[t] - 2.0 * ki[t]
                if quad <= 0:
                    quad = _TAU
                o = -(b_it * b_it) / quad
                if o < best:
                    best = o
                    j = t
        if j == -1:
            break
        ai, aj = _pair_update(alpha[i], alpha[j], y[i], y[j], G[i], G[j],
                              kdiag[i], kdiag[j], ki[j], C)
        ci = (ai - alpha[i]) * y[i]
        cj = (aj - alpha[j]) * y[j]
        for k in range(d):
            dw[k] = ci * X[i, k] + cj * X[j, k]
            w[k] += dw[k]
        alpha[i] = ai
        alpha[j] = aj
        for t in range(n):
            G[t] += y[t] * (X[t] @ dw)
        it += 1
    return alpha, w, _offset(alpha, y, G, C), it, gap


@njit(**_opts)
def _offset(alpha, y, G, C):
    acc = 0.0
    nfree = 0
    for t in range(alpha.shape[0]):
        if 0 < alpha[t] < C:
            acc += -y[t] * G[t]
            nfree += 1
    if nfree > 0:
        return acc / nfree
    hi = -np.inf
    lo = np.inf
    for t in range(alpha.shape[0]):
        s = -y[t] * G[t]
        if _in_up(y[t], alpha[t], C) and s > hi:
            hi = s
        if _in_low(y[t], alpha[t], C) and s < lo:
            lo = s
    return (hi + lo) / 2.0


@njit(**_opts)
def medoid_index(X, mean):
    best = np.inf
    idx = 0
    for i in range(X.shape[0]):
        s = _sqdist(X, i, mean)
        if s < best:
            best = s
            idx = i
    return idx


@njit(**_opts)
def _combiner(theta, X, D, exp_param):
    p = theta.shape[0]
    w = np.exp(theta) if exp_param else theta.copy()
    s = w.sum()
    m = D.shape[0]
    loss = 0.0
    gw = np.zeros(p)
    for r in range(m):
        yhat = 0.0
        for k in range(p):
            yhat += X[r, k] * w[k]
        yhat /= s
        res = yhat - D[r]
        loss += res * res
        for k in range(p):
            gw[k] += res * (X[r, k] - yhat)
    gw *= 2.0 / (m * s)
    if exp_param:
        gw *= w
    return loss / m, gw


def combiner_loss_grad(theta, X, D, exp_param):
    loss, grad = _combiner(theta, X, D, exp_param)
    return float(loss), grad

