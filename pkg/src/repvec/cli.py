"""Command-line entry point: ``repvec {train,derive,evaluate,synth}``."""

import argparse
import logging
import os
import sys
from pathlib import Path

from . import kernels
from .candidates import format_candidate_dump
from .embeddings import load_embeddings, save_embeddings
from .errors import RepvecError
from .evaluation import (
    PROTOCOLS,
    EvaluationReport,
    PipelineConfig,
    fit_weights,
    mean_row,
    prepare_classes,
    render_json,
    render_tsv,
    score_class,
    evaluate_prepared,
)
from .ontology import load_ontology, resolve_class, save_ontology
from .subclustering import KMeansConfig
from .svm import SvmConfig
from .synthetic import SynthConfig, dumps_truth, generate_synthetic
from .weights import OPTIMIZERS, TrainConfig, load_weights, predict_class_vector, save_weights

log = logging.getLogger("repvec")


class UsageError(Exception):
    pass


def _positive_int(text):
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return v


def _positive_float(text):
    v = float(text)
    if not v > 0:
        raise argparse.ArgumentTypeError(f"expected a positive number, got {text}")
    return v


def _nonneg_float(text):
    v = float(text)
    if not v >= 0:
        raise argparse.ArgumentTypeError(f"expected a nonnegative number, got {text}")
    return v


def _add_pipeline_args(p):
    p.add_argument("--embeddings", required=True, help="word2vec text file")
    p.add_argument("--ontology", required=True, help="ontology JSON file")
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--svm-c", type=_positive_float, default=1.0)
    p.add_argument("--kmeans-restarts", type=_positive_int, default=16)
    p.add_argument("--kmeans-max-iters", type=_positive_int, default=100)
    p.add_argument("--kmeans-tol", type=_nonneg_float, default=1e-9)
    p.add_argument("--no-kmeans-refine", dest="kmeans_refine", action="store_false",
                   help="plain Lloyd, without single-point transfer refinement")
    p.add_argument("--lr", type=_positive_float, default=0.05, help="learning rate")
    p.add_argument("--epochs", type=int, default=500)
    p.add_argument("--optimizer", choices=OPTIMIZERS, default="adam")
    p.add_argument("--allow-negative", action="store_true",
                   help="train unconstrained weights instead of positive ones")
    p.add_argument("--jobs", type=_positive_int, default=os.cpu_count() or 1)


def build_parser():
    parser = argparse.ArgumentParser(
        prog="repvec",
        description="Representative vectors for ontology classes from instance embeddings.",
    )
    parser.add_argument("--log-level", default=os.environ.get("REPVEC_LOG", "WARNING"))
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("train", help="learn candidate weights and write them as JSON")
    _add_pipeline_args(p)
    p.add_argument("--out", required=True, help="weights JSON to write")

    p = sub.add_parser("derive", help="write each class's representative vector")
    _add_pipeline_args(p)
    p.add_argument("--weights", required=True)
    p.add_argument("--out", required=True, help="TSV of label and vector components")
    p.add_argument("--candidates-out", help="optional TSV dump of C1..C5 per class")

    p = sub.add_parser("evaluate", help="distance report against mean/median baselines")
    _add_pipeline_args(p)
    p.add_argument("--protocol", choices=PROTOCOLS, default="loco")
    p.add_argument("--weights", help="score with these weights instead of training")
    p.add_argument("--out", help="report TSV (default: stdout)")
    p.add_argument("--json-out", help="full-precision JSON sidecar")

    p = sub.add_parser("synth", help="generate a synthetic embedding table and ontology")
    p.add_argument("--classes", type=int, default=10)
    p.add_argument("--instances", type=int, default=30)
    p.add_argument("--dim", type=int, default=20)
    p.add_argument("--schism", type=float, default=2.0)
    p.add_argument("--label-noise", type=float, default=0.1)
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--out-dir", required=True,
                   help="directory for embeddings.txt, ontology.json, truth.json")
    return parser


def _pipeline_config(args):
    return PipelineConfig(
        kmeans=KMeansConfig(args.kmeans_max_iters, args.kmeans_tol, args.seed,
                            args.kmeans_restarts, args.kmeans_refine),
        svm=SvmConfig(C=args.svm_c, seed=args.seed),
        train=TrainConfig(learning_rate=args.lr, epochs=args.epochs, seed=args.seed,
                          allow_negative=args.allow_negative, optimizer=args.optimizer),
        jobs=args.jobs,
    )


def _resolved(args):
    table = load_embeddings(args.embeddings)
    classes = load_ontology(args.ontology)
    out = []
    for c in classes:
        r = resolve_class(c, table)
        if r.dropped_instances:
            log.info("class %r: %d instances dropped", c.label, len(r.dropped_instances))
        out.append(r)
    dropped = sum(len(r.dropped_instances) for r in out)
    if dropped:
        print(f"dropped instances: {dropped}", file=sys.stderr)
    return out


def _write(path, text):
    Path(path).write_text(text, encoding="utf-8")


def cmd_train(args):
    config = _pipeline_config(args)
    prepared = prepare_classes(_resolved(args), config)
    wv = fit_weights(prepared, config)
    print(f"examples: {wv.meta['n_examples']}", file=sys.stderr)
    print(f"final loss: {wv.meta['final_loss']:.6g}", file=sys.stderr)
    save_weights(wv, args.out)
    return 0


def cmd_derive(args):
    config = _pipeline_config(args)
    wv = load_weights(args.weights)
    prepared = prepare_classes(_resolved(args), config)
    lines = []
    for p in prepared:
        y = predict_class_vector(p.matrix, wv)
        lines.append("\t".join([p.label] + [repr(float(v)) for v in y]) + "\n")
    _write(args.out, "".join(lines))
    if args.candidates_out:
        _write(args.candidates_out, format_candidate_dump((p.label, p.candidates) for p in prepared))
    return 0


def cmd_evaluate(args):
    config = _pipeline_config(args)
    prepared = prepare_classes(_resolved(args), config)
    if args.weights:
        wv = load_weights(args.weights)
        rows = [score_class(p, wv) for p in prepared]
        report = EvaluationReport(rows, mean_row(rows), "weights",
                                  {"protocol": "weights", "config_digest": config.digest()},
                                  {p.label: wv for p in prepared})
    else:
        report = evaluate_prepared(prepared, config, args.protocol)
    text = render_tsv(report)
    if args.out:
        _write(args.out, text)
    else:
        sys.stdout.write(text)
    if args.json_out:
        _write(args.json_out, render_json(report))
    return 0


def cmd_synth(args):
    try:
        config = SynthConfig(args.classes, args.instances, args.dim, args.schism,
                             args.label_noise, args.seed)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    table, classes, truth = generate_synthetic(config)
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    save_embeddings(table, out / "embeddings.txt")
    save_ontology(classes, out / "ontology.json")
    _write(out / "truth.json", dumps_truth(truth))
    return 0


COMMANDS = {"train": cmd_train, "derive": cmd_derive, "evaluate": cmd_evaluate,
            "synth": cmd_synth}


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=args.log_level.upper(), format="%(levelname)s %(name)s: %(message)s")
    log.debug("kernel backend: %s", kernels.BACKEND)
    try:
        return COMMANDS[args.command](args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"{parser.prog}: error: {exc}", file=sys.stderr)
        return 2
    except RepvecError as exc:
        label = getattr(exc, "label", None)
        where = f" class {label!r}" if label else ""
        print(f"error: [{exc.module}]{where}: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
