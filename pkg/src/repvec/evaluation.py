"""Distance-to-label scoring against mean and median baselines, with report I/O."""

import hashlib
import json
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np

from .candidates import assemble_matrix, class_candidates
from .errors import DimensionMismatch, InsufficientClasses, ParseError, RepvecError
from .subclustering import KMeansConfig
from .svm import SvmConfig
from .weights import TrainConfig, build_weight_dataset, predict_class_vector, train_weights

log = logging.getLogger(__name__)

PROTOCOLS = ("insample", "loco")
TSV_HEADER = ("class", "dist_mean", "dist_median", "dist_model", "n_instances")


@dataclass(frozen=True)
class PipelineConfig:
    kmeans: KMeansConfig = field(default_factory=KMeansConfig)
    svm: SvmConfig = field(default_factory=SvmConfig)
    train: TrainConfig = field(default_factory=TrainConfig)
    jobs: int = 1

    def digest(self):
        doc = {"kmeans": asdict(self.kmeans), "svm": asdict(self.svm), "train": asdict(self.train)}
        return hashlib.sha256(json.dumps(doc, sort_keys=True).encode()).hexdigest()[:16]


@dataclass
class PreparedClass:
    label: str
    c0: np.ndarray
    candidates: object
    matrix: np.ndarray
    n_instances: int
    degenerate: bool
    dropped: list


@dataclass
class ClassResult:
    label: str
    dist_mean: float
    dist_median: float
    dist_model: float
    n_instances: int
    degenerate: bool = False
    dist_candidates: tuple = ()


@dataclass
class EvaluationReport:
    rows: list
    mean_row: dict
    protocol: str
    run_meta: dict = field(default_factory=dict)
    weights: dict = field(default_factory=dict)  # label -> weights used to score it


def euclidean_distance(a, b):
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.shape != b.shape:
        raise DimensionMismatch(a.shape, b.shape)
    return float(np.linalg.norm(a - b))


def _prepare_one(resolved, config):
    try:
        cs, clustering, _ = class_candidates(resolved, config.kmeans, config.svm)
        m = assemble_matrix(cs, len(resolved.c0))
    except RepvecError as exc:
        exc.label = getattr(exc, "label", resolved.label)
        raise
    return PreparedClass(resolved.label, resolved.c0, cs, m, resolved.n_instances,
                         clustering.degenerate, list(resolved.dropped_instances))


def prepare_classes(classes, config):
    """Per-class candidate computation, fanned out over ``config.jobs`` threads in class order."""
    if config.jobs > 1 and len(classes) > 1:
        with ThreadPoolExecutor(max_workers=config.jobs) as pool:
            return list(pool.map(lambda r: _prepare_one(r, config), classes))
    return [_prepare_one(r, config) for r in classes]


def fit_weights(prepared, config):
    ds = build_weight_dataset([(p.matrix, p.c0) for p in prepared],
                              labels=[p.label for p in prepared])
    n, m = prepared[0].matrix.shape[0], len(prepared)
    if len(ds) != n * m:
        raise AssertionError(f"weight dataset has {len(ds)} examples, expected {n * m}")
    return train_weights(ds, config.train)


def score_class(p, wv):
    y = predict_class_vector(p.matrix, wv)
    cs = p.candidates
    return ClassResult(
        label=p.label,
        dist_mean=euclidean_distance(cs.c2, p.c0),
        dist_median=euclidean_distance(cs.c3, p.c0),
        dist_model=euclidean_distance(y, p.c0),
        n_instances=p.n_instances,
        degenerate=p.degenerate,
        dist_candidates=tuple(euclidean_distance(c, p.c0) for c in cs.as_tuple()),
    )


def mean_row(rows):
    return {
        "dist_mean": float(np.mean([r.dist_mean for r in rows])),
        "dist_median": float(np.mean([r.dist_median for r in rows])),
        "dist_model": float(np.mean([r.dist_model for r in rows])),
        "n_instances": float(np.mean([r.n_instances for r in rows])),
    }


def evaluate_prepared(prepared, config, protocol="loco"):
    if protocol not in PROTOCOLS:
        raise ValueError(f"unknown protocol {protocol!r}")
    if not prepared:
        raise InsufficientClasses(0)
    weights = {}
    if protocol == "insample":
        wv = fit_weights(prepared, config)
        weights = {p.label: wv for p in prepared}
    else:
        if len(prepared) < 2:
            raise InsufficientClasses(len(prepared))
        for k, p in enumerate(prepared):
            weights[p.label] = fit_weights(prepared[:k] + prepared[k + 1:], config)
    rows = [score_class(p, weights[p.label]) for p in prepared]
    run_meta = {
        "protocol": protocol,
        "config_digest": config.digest(),
        "seeds": {"kmeans": config.kmeans.seed, "svm": config.svm.seed,
                  "train": config.train.seed},
        "dropped_instances": {p.label: len(p.dropped) for p in prepared},
    }
    return EvaluationReport(rows, mean_row(rows), protocol, run_meta, weights)


def evaluate(classes, config=None, protocol="loco"):
    """Score resolved classes: mean (C2), median (C3) and model (learned combination) vs C0.

    ``insample`` trains one weight vector on every class; ``loco`` scores each
    class with weights trained on all the other classes.
    """
    config = config or PipelineConfig()
    if protocol == "loco" and len(classes) < 2:
        raise InsufficientClasses(len(classes))
    return evaluate_prepared(prepare_classes(classes, config), config, protocol)


def _fmt(v, decimals):
    return f"{v:.{decimals}f}"


def render_tsv(report, decimals=4, counts=True):
    cols = TSV_HEADER if counts else TSV_HEADER[:4]
    lines = ["\t".join(cols)]
    for r in report.rows:
        fields = [r.label] + [_fmt(v, decimals) for v in (r.dist_mean, r.dist_median, r.dist_model)]
        if counts:
            fields.append(str(r.n_instances))
        lines.append("\t".join(fields))
    mr = report.mean_row
    fields = ["MEAN"] + [_fmt(mr[k], decimals) for k in TSV_HEADER[1:4]]
    if counts:
        fields.append(_fmt(mr["n_instances"], decimals))
    lines.append("\t".join(fields))
    return "\n".join(lines) + "\n"


def parse_tsv(text):
    """Read a rendered report back. Values carry the printed precision only."""
    lines = text.rstrip("\n").split("\n")
    if tuple(lines[0].split("\t")) != TSV_HEADER:
        raise ParseError("unexpected report header", 0)
    rows, mr = [], None
    for k, line in enumerate(lines[1:], start=2):
        f = line.split("\t")
        if len(f) != 5:
            raise ParseError(f"line {k} has {len(f)} fields", k)
        try:
            vals = [float(x) for x in f[1:4]]
            if f[0] == "MEAN" and k == len(lines):
                mr = dict(zip(TSV_HEADER[1:4], vals), n_instances=float(f[4]))
            else:
                rows.append(ClassResult(f[0], *vals, n_instances=int(f[4])))
        except ValueError as exc:
            raise ParseError(f"line {k}: {exc}", k) from None
    if mr is None:
        raise ParseError("missing MEAN row")
    return EvaluationReport(rows, mr, protocol="unknown")


def render_json(report):
    doc = {
        "protocol": report.protocol,
        "rows": [
            {**asdict(r), "dist_candidates": list(r.dist_candidates)} for r in report.rows
        ],
        "mean": report.mean_row,
        "run_meta": report.run_meta,
        "weights": {label: [float(v) for v in wv.w] for label, wv in report.weights.items()},
    }
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"
