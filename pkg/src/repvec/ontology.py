"""Ontology classes (label + instance strings) and their resolution to vectors."""

import json
import logging
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .embeddings import embed_phrase
from .errors import (
    ClassUnresolvable,
    DuplicateClassLabel,
    EmptyClass,
    LabelUnresolvable,
    NoTokenResolved,
    ParseError,
)

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class OntologyClass:
    label: str
    instances: tuple


@dataclass
class ResolvedClass:
    label: str
    c0: np.ndarray
    instance_vectors: np.ndarray  # (n, N), rows in instance order
    instances: list  # the instance strings that resolved, same order as rows
    dropped_instances: list = field(default_factory=list)

    @property
    def n_instances(self):
        return self.instance_vectors.shape[0]


def _dedupe(instances):
    seen = set()
    out = []
    for inst in instances:
        key = inst.lower()
        if key not in seen:
            seen.add(key)
            out.append(inst)
    return tuple(out)


def parse_ontology(doc):
    """Validate an already-decoded ontology document into a list of classes."""
    if not isinstance(doc, dict) or not isinstance(doc.get("classes"), list):
        raise ParseError('expected an object with a "classes" list')
    classes = []
    labels = set()
    for k, entry in enumerate(doc["classes"]):
        if not isinstance(entry, dict):
            raise ParseError(f"class entry {k} is not an object")
        label = entry.get("label")
        instances = entry.get("instances")
        if not isinstance(label, str) or not label.strip():
            raise ParseError(f"class entry {k} has no label")
        if not isinstance(instances, list) or not all(
            isinstance(s, str) and s.strip() for s in instances
        ):
            raise ParseError(f"class {label!r}: instances must be nonempty strings")
        if label.lower() in labels:
            raise DuplicateClassLabel(label)
        labels.add(label.lower())
        if not instances:
            raise EmptyClass(label)
        classes.append(OntologyClass(label, _dedupe(instances)))
    return classes


def load_ontology(source):
    """Read ``{"classes": [{"label": ..., "instances": [...]}, ...]}`` from a stream or path."""
    if isinstance(source, (str, Path)):
        with open(source, encoding="utf-8") as fh:
            text = fh.read()
    else:
        text = source.read()
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, exc.pos) from None
    return parse_ontology(doc)


def dumps_ontology(classes):
    doc = {"classes": [{"label": c.label, "instances": list(c.instances)} for c in classes]}
    return json.dumps(doc, indent=2, ensure_ascii=False) + "\n"


def save_ontology(classes, dest):
    text = dumps_ontology(classes)
    if isinstance(dest, (str, Path)):
        Path(dest).write_text(text, encoding="utf-8")
    else:
        dest.write(text)


def resolve_class(cls, table):
    """Embed the label (C0) and every instance; unresolvable instances are dropped."""
    try:
        c0 = embed_phrase(table, cls.label)
    except NoTokenResolved:
        raise LabelUnresolvable(cls.label) from None
    vectors, kept, dropped = [], [], []
    for inst in cls.instances:
        try:
            vectors.append(embed_phrase(table, inst))
            kept.append(inst)
        except NoTokenResolved:
            dropped.append(inst)
    if not vectors:
        raise ClassUnresolvable(cls.label)
    if dropped:
        log.info("class %r: dropped %d unresolvable instances", cls.label, len(dropped))
    return ResolvedClass(cls.label, c0, np.array(vectors), kept, dropped)
