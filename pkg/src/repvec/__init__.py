"""Representative vectors for ontology classes derived from instance word embeddings."""

from .candidates import (
    CandidateSet,
    assemble_matrix,
    build_candidates,
    class_candidates,
    median_vector,
    weighted_average,
)
from .embeddings import EmbeddingTable, embed_phrase, load_embeddings, lookup, save_embeddings
from .evaluation import PipelineConfig, evaluate, euclidean_distance
from .ontology import OntologyClass, ResolvedClass, load_ontology, resolve_class
from .subclustering import KMeansConfig, SubClustering, kmeans2
from .svm import SvmConfig, SvmModel, support_membership, train_linear_svm
from .synthetic import SynthConfig, generate_synthetic
from .weights import (
    TrainConfig,
    WeightDataset,
    WeightVector,
    build_weight_dataset,
    load_weights,
    predict_class_vector,
    predict_scalar,
    save_weights,
    train_weights,
)

__version__ = "0.1.0"
