"""Universal candidate weights: dataset construction, training, prediction, persistence."""

import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import kernels
from .errors import (
    DimensionMismatch,
    EmptyDataset,
    InvalidWeights,
    NonFiniteLoss,
    ParseError,
    ZeroWeightSum,
)

N_CANDIDATES = 5
OPTIMIZERS = ("adam", "gd")
_MIN_SUM = 1e-6


@dataclass
class WeightDataset:
    X: np.ndarray  # (N*M, 5)
    D: np.ndarray  # (N*M,)
    provenance: list  # (class label, dimension index) per example

    def __len__(self):
        return len(self.D)


@dataclass
class WeightVector:
    w: np.ndarray
    meta: dict = field(default_factory=dict)
    loss_history: np.ndarray = None


@dataclass(frozen=True)
class TrainConfig:
    learning_rate: float = 0.05
    epochs: int = 500
    seed: int = 42
    batch: int = None  # None -> full batch
    allow_negative: bool = False
    optimizer: str = "adam"  # "adam" or "gd" (plain gradient descent)

    def __post_init__(self):
        if not self.learning_rate > 0:
            raise ValueError("learning_rate must be positive")
        if self.epochs < 0:
            raise ValueError("epochs must be nonnegative")
        if self.batch is not None and self.batch < 1:
            raise ValueError("batch must be >= 1")
        if self.optimizer not in OPTIMIZERS:
            raise ValueError(f"optimizer must be one of {OPTIMIZERS}")


def build_weight_dataset(classes, labels=None):
    """One example per (class, dimension): input is the candidate-matrix row, target is C0[i].

    ``classes`` is a sequence of ``(candidate_matrix, c0)`` pairs; examples are
    emitted in class order, then dimension order.
    """
    classes = list(classes)
    if labels is None:
        labels = [str(k) for k in range(len(classes))]
    if not classes:
        return WeightDataset(np.empty((0, N_CANDIDATES)), np.empty(0), [])
    n = np.asarray(classes[0][0]).shape[0]
    xs, ds, prov = [], [], []
    for label, (m, c0) in zip(labels, classes):
        m = np.asarray(m, dtype=np.float64)
        c0 = np.asarray(c0, dtype=np.float64)
        if m.shape != (n, N_CANDIDATES):
            raise DimensionMismatch((n, N_CANDIDATES), m.shape)
        if c0.shape != (n,):
            raise DimensionMismatch(n, c0.shape[0] if c0.ndim else 0)
        xs.append(m)
        ds.append(c0)
        prov.extend((label, i) for i in range(n))
    return WeightDataset(np.vstack(xs), np.concatenate(ds), prov)


def _as_array(w):
    return np.asarray(w.w if isinstance(w, WeightVector) else w, dtype=np.float64)


def _combine(m, w):
    # anchored at C2: identical to sum(w_k C_k) / sum(w), and exact when the candidates coincide
    s = w.sum()
    if not abs(s) >= 1e-12:
        raise ZeroWeightSum(s)
    anchor = m[..., 1:2]
    return anchor[..., 0] + ((m - anchor) @ w) / s


def predict_scalar(x, w):
    w = _as_array(w)
    return float(_combine(np.asarray(x, dtype=np.float64), w))


def predict_class_vector(m, w):
    """Apply the normalized weighted combination to every row of a candidate matrix."""
    w = _as_array(w)
    m = np.asarray(m, dtype=np.float64)
    if m.ndim != 2 or m.shape[1] != len(w):
        raise DimensionMismatch(len(w), m.shape[-1])
    return _combine(m, w)


def loss_and_grad(params, X, D, exp_param=True):
    """Mean squared error and its gradient in ``params``.

    With ``exp_param`` the weights are ``exp(params)``; otherwise ``params`` are
    the weights themselves.
    """
    return kernels.combiner_loss_grad(
        np.ascontiguousarray(params, dtype=np.float64),
        np.ascontiguousarray(X, dtype=np.float64),
        np.ascontiguousarray(D, dtype=np.float64),
        bool(exp_param),
    )


def normalize(w):
    w = np.asarray(w, dtype=np.float64)
    s = w.sum()
    if abs(s - 1.0) <= 1e-12:
        return w.copy()
    return w / s


class _Adam:
    def __init__(self, lr, beta1=0.9, beta2=0.999, eps=1e-8):
        self.lr, self.beta1, self.beta2, self.eps = lr, beta1, beta2, eps
        self.m = self.v = 0.0
        self.t = 0

    def step(self, params, grad):
        self.t += 1
        self.m = self.beta1 * self.m + (1 - self.beta1) * grad
        self.v = self.beta2 * self.v + (1 - self.beta2) * grad * grad
        mhat = self.m / (1 - self.beta1 ** self.t)
        vhat = self.v / (1 - self.beta2 ** self.t)
        return params - self.lr * mhat / (np.sqrt(vhat) + self.eps)


class _GD:
    def __init__(self, lr):
        self.lr = lr

    def step(self, params, grad):
        return params - self.lr * grad


def train_weights(ds, config=None):
    """Fit the combiner weights by minimizing MSE, starting from equal weights.

    Positive weights are parameterized as exp(theta); with ``allow_negative``
    the weights are trained directly and a near-zero sum is an error.
    ``loss_history[e]`` is the full-dataset loss before epoch ``e + 1``.
    """
    config = config or TrainConfig()
    if len(ds) == 0:
        raise EmptyDataset()
    X = np.ascontiguousarray(ds.X, dtype=np.float64)
    D = np.ascontiguousarray(ds.D, dtype=np.float64)
    exp_param = not config.allow_negative
    params = np.zeros(N_CANDIDATES) if exp_param else np.ones(N_CANDIDATES)
    lr = config.learning_rate
    opt = _Adam(lr) if config.optimizer == "adam" else _GD(lr)
    rng = np.random.default_rng(config.seed)
    m = len(D)
    history = np.empty(config.epochs + 1)

    for epoch in range(config.epochs + 1):
        loss, grad = loss_and_grad(params, X, D, exp_param)
        if not (math.isfinite(loss) and np.isfinite(grad).all()):
            raise NonFiniteLoss(epoch, lr)
        history[epoch] = loss
        if epoch == config.epochs:
            break
        if config.batch is None or config.batch >= m:
            params = opt.step(params, grad)
        else:
            idx = rng.permutation(m)
            for start in range(0, m, config.batch):
                sl = idx[start:start + config.batch]
                _, g = loss_and_grad(params, X[sl], D[sl], exp_param)
                params = opt.step(params, g)
        if not exp_param and abs(params.sum()) < _MIN_SUM:
            raise ZeroWeightSum(params.sum())
        if not np.isfinite(params).all():
            raise NonFiniteLoss(epoch + 1, lr)

    w = np.exp(params) if exp_param else params
    meta = {
        "epochs": config.epochs,
        "learning_rate": lr,
        "optimizer": config.optimizer,
        "seed": config.seed,
        "batch": config.batch,
        "allow_negative": config.allow_negative,
        "n_examples": m,
        "initial_loss": float(history[0]),
        "final_loss": float(history[-1]),
    }
    return WeightVector(normalize(w), meta, history)


def dumps_weights(wv):
    doc = {"weights": [float(v) for v in wv.w], "meta": wv.meta}
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def save_weights(wv, path):
    Path(path).write_text(dumps_weights(wv), encoding="utf-8")


def loads_weights(text):
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, exc.pos) from None
    if not isinstance(doc, dict) or not isinstance(doc.get("weights"), list):
        raise ParseError('expected an object with a "weights" list')
    meta = doc.get("meta", {})
    if not isinstance(meta, dict):
        raise ParseError('"meta" must be an object')
    raw = doc["weights"]
    if len(raw) != N_CANDIDATES or not all(
        isinstance(v, (int, float)) and not isinstance(v, bool) for v in raw
    ):
        raise InvalidWeights(f"expected {N_CANDIDATES} numeric weights")
    w = np.asarray(raw, dtype=np.float64)
    if not np.isfinite(w).all():
        raise InvalidWeights("weights must be finite")
    if meta.get("allow_negative"):
        if abs(w.sum()) < _MIN_SUM:
            raise InvalidWeights("weights sum to zero")
    elif (w <= 0).any():
        raise InvalidWeights("weights must be positive")
    return WeightVector(normalize(w), meta)


def load_weights(path):
    return loads_weights(Path(path).read_text(encoding="utf-8"))
