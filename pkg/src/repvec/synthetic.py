"""Seeded synthetic embeddings + ontology with a planted two-mode split per class."""

import json
from dataclasses import dataclass

import numpy as np

from .embeddings import EmbeddingTable
from .ontology import OntologyClass


@dataclass(frozen=True)
class SynthConfig:
    n_classes: int = 10
    instances_per_class: int = 30
    dim: int = 20
    schism: float = 2.0
    label_noise: float = 0.1
    seed: int = 0
    # total variance of each mixture mode (per-dimension variance is spread / dim)
    spread: float = 1.0

    def __post_init__(self):
        if self.n_classes < 1 or self.instances_per_class < 1 or self.dim < 1:
            raise ValueError("n_classes, instances_per_class and dim must be >= 1")
        if self.schism < 0 or self.label_noise < 0 or self.spread < 0:
            raise ValueError("schism, label_noise and spread must be nonnegative")


def generate_synthetic(config):
    """Return ``(table, classes, truth)`` fully determined by ``config.seed``.

    Class ``c`` has a center g drawn from N(0, I); its instances come from an
    equal-odds mixture of N(g + s*u, v*I) and N(g - s*u, v*I) with s = schism / 2,
    u a random unit vector and v = spread / dim. The label token ``class{c}``
    maps to g + N(0, label_noise^2 I). ``truth`` maps labels to g.
    """
    rng = np.random.default_rng(config.seed)
    dim, n = config.dim, config.instances_per_class
    width = max(2, len(str(n - 1)))
    mode_sd = np.sqrt(config.spread / dim)

    tokens, rows, classes, truth = [], [], [], {}
    for c in range(config.n_classes):
        label = f"class{c}"
        g = rng.standard_normal(dim)
        u = rng.standard_normal(dim)
        u /= np.linalg.norm(u)
        side = np.where(rng.random(n) < 0.5, 1.0, -1.0)
        inst = (g + np.outer(side * config.schism / 2.0, u)
                + mode_sd * rng.standard_normal((n, dim)))
        c0 = g + config.label_noise * rng.standard_normal(dim)

        names = [f"{label}_inst{k:0{width}d}" for k in range(n)]
        tokens.append(label)
        rows.append(c0)
        tokens.extend(names)
        rows.extend(inst)
        classes.append(OntologyClass(label, tuple(names)))
        truth[label] = g
    return EmbeddingTable(tokens, np.array(rows)), classes, truth


def dumps_truth(truth):
    doc = {label: [float(v) for v in g] for label, g in truth.items()}
    return json.dumps(doc, indent=2) + "\n"
