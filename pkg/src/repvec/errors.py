"""Exception hierarchy shared by every stage of the pipeline."""


class RepvecError(Exception):
    """Base class. ``module`` names the pipeline stage that raised."""

    module = "repvec"


# embeddings

class EmbeddingError(RepvecError):
    module = "embeddings"


class MalformedLine(EmbeddingError):
    def __init__(self, line_no, reason=""):
        self.line_no = line_no
        msg = f"malformed embedding line {line_no}"
        super().__init__(f"{msg}: {reason}" if reason else msg)


class EmptyTable(EmbeddingError):
    def __init__(self):
        super().__init__("embedding source contains no valid entries")


class DimensionZero(EmbeddingError):
    def __init__(self):
        super().__init__("embedding dimension is zero")


class NoTokenResolved(EmbeddingError):
    def __init__(self, phrase):
        self.phrase = phrase
        super().__init__(f"no token of {phrase!r} is in the embedding table")


# ontology

class OntologyError(RepvecError):
    module = "ontology"


class ParseError(RepvecError):
    def __init__(self, message, position=None):
        self.position = position
        where = f" at position {position}" if position is not None else ""
        super().__init__(f"parse error{where}: {message}")


class DuplicateClassLabel(OntologyError):
    def __init__(self, label):
        self.label = label
        super().__init__(f"duplicate class label {label!r}")


class EmptyClass(OntologyError):
    def __init__(self, label):
        self.label = label
        super().__init__(f"class {label!r} has no instances")


class LabelUnresolvable(OntologyError):
    def __init__(self, label):
        self.label = label
        super().__init__(f"class label {label!r} has no embedding")


class ClassUnresolvable(OntologyError):
    def __init__(self, label):
        self.label = label
        super().__init__(f"no instance of class {label!r} has an embedding")


# numerics

class EmptyInput(RepvecError):
    def __init__(self, what="vectors"):
        super().__init__(f"empty input: {what}")


class DimensionMismatch(RepvecError):
    def __init__(self, expected, got):
        self.expected, self.got = expected, got
        super().__init__(f"dimension mismatch: expected {expected}, got {got}")


class EmptySide(RepvecError):
    module = "svm"

    def __init__(self, side):
        super().__init__(f"svm training set has no {side} examples")


class AllZeroMembership(RepvecError):
    module = "candidates"

    def __init__(self):
        super().__init__("membership vector selects no vectors")


class ZeroWeightSum(RepvecError):
    module = "weights"

    def __init__(self, total):
        super().__init__(f"weight sum {total!r} is too close to zero")


class EmptyDataset(RepvecError):
    module = "weights"

    def __init__(self):
        super().__init__("weight dataset is empty")


class NonFiniteLoss(RepvecError):
    module = "weights"

    def __init__(self, epoch, learning_rate):
        self.epoch, self.learning_rate = epoch, learning_rate
        super().__init__(
            f"loss became non-finite at epoch {epoch}; "
            f"learning rate {learning_rate} is too high"
        )


class InvalidWeights(RepvecError):
    module = "weights"


class InsufficientClasses(RepvecError):
    module = "evaluation"

    def __init__(self, n):
        super().__init__(f"leave-one-class-out needs at least 2 classes, got {n}")
