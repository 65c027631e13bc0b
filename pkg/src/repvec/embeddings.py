"""Word-embedding tables in the word2vec/GloVe text format."""

import io
import logging
import math
from pathlib import Path

import numpy as np

from .errors import DimensionZero, EmptyTable, MalformedLine, NoTokenResolved

log = logging.getLogger(__name__)


class EmbeddingTable:
    """Immutable token -> vector map. Tokens are lowercase; vectors are read-only rows."""

    __slots__ = ("_tokens", "_index", "_matrix", "duplicates")

    def __init__(self, tokens, matrix, duplicates=0):
        matrix = np.array(matrix, dtype=np.float64, copy=True)
        if matrix.ndim != 2 or matrix.shape[0] != len(tokens):
            raise ValueError("matrix must have one row per token")
        if matrix.shape[0] == 0:
            raise EmptyTable()
        if matrix.shape[1] == 0:
            raise DimensionZero()
        if not np.isfinite(matrix).all():
            raise ValueError("embedding vectors must be finite")
        index = {}
        for i, tok in enumerate(tokens):
            if not tok or tok != tok.lower() or any(c.isspace() for c in tok):
                raise ValueError(f"invalid token {tok!r}")
            if tok in index:
                raise ValueError(f"duplicate token {tok!r}")
            index[tok] = i
        matrix.setflags(write=False)
        self._tokens = tuple(tokens)
        self._index = index
        self._matrix = matrix
        self.duplicates = duplicates

    @property
    def dimension(self):
        return self._matrix.shape[1]

    @property
    def vocab_size(self):
        return len(self._tokens)

    @property
    def tokens(self):
        return self._tokens

    @property
    def matrix(self):
        return self._matrix

    def __len__(self):
        return len(self._tokens)

    def __contains__(self, token):
        return token.lower() in self._index

    def __repr__(self):
        return f"EmbeddingTable(vocab_size={self.vocab_size}, dimension={self.dimension})"


def _open_text(source, mode="r"):
    if isinstance(source, (str, Path)):
        return open(source, mode, encoding="utf-8", newline="\n"), True
    return source, False


def _is_header(fields):
    if len(fields) != 2:
        return False
    try:
        int(fields[0]), int(fields[1])
    except ValueError:
        return False
    return True


def load_embeddings(source):
    """Parse a word2vec text stream (or path) into an :class:`EmbeddingTable`.

    An optional first line ``"vocab_size dimension"`` fixes the dimension;
    otherwise the first data line's arity does. Later duplicates win and are
    counted in ``table.duplicates``.
    """
    stream, owned = _open_text(source)
    try:
        lines = stream.read().split("\n")
    finally:
        if owned:
            stream.close()

    dim = None
    rows = {}
    duplicates = 0
    for line_no, line in enumerate(lines, start=1):
        fields = line.split()
        if not fields:
            continue
        if dim is None:
            if _is_header(fields):
                dim = int(fields[1])
                if dim <= 0:
                    raise DimensionZero()
                continue
            dim = len(fields) - 1
            if dim == 0:
                raise DimensionZero()
        if len(fields) - 1 != dim:
            raise MalformedLine(line_no, f"expected {dim} components, got {len(fields) - 1}")
        try:
            values = [float(v) for v in fields[1:]]
        except ValueError as exc:
            raise MalformedLine(line_no, str(exc)) from None
        if not all(math.isfinite(v) for v in values):
            raise MalformedLine(line_no, "non-finite component")
        token = fields[0].lower()
        if token in rows:
            duplicates += 1
            del rows[token]
        rows[token] = values

    if not rows:
        raise EmptyTable()
    if duplicates:
        log.warning("%d duplicate embedding tokens overwritten", duplicates)
    return EmbeddingTable(list(rows), list(rows.values()), duplicates=duplicates)


def save_embeddings(table, dest):
    """Write ``table`` in word2vec text format with a header line.

    Components use Python's shortest round-trip float repr, so
    save -> load -> save is byte-identical.
    """
    stream, owned = _open_text(dest, "w")
    try:
        stream.write(f"{table.vocab_size} {table.dimension}\n")
        for tok, row in zip(table.tokens, table.matrix):
            stream.write(tok + " " + " ".join(repr(float(v)) for v in row) + "\n")
    finally:
        if owned:
            stream.close()


def dumps_embeddings(table):
    buf = io.StringIO()
    save_embeddings(table, buf)
    return buf.getvalue()


def lookup(table, token):
    """Vector for ``token`` (case-insensitive), or None when absent."""
    i = table._index.get(token.lower())
    if i is None:
        return None
    return table.matrix[i]


def embed_phrase(table, phrase):
    """Mean of the vectors of the whitespace tokens of ``phrase`` found in ``table``.

    Absent tokens are skipped; raises NoTokenResolved if none resolve.
    """
    found = [v for v in (lookup(table, t) for t in phrase.split()) if v is not None]
    if not found:
        raise NoTokenResolved(phrase)
    if len(found) == 1:
        return found[0].copy()
    return np.mean(found, axis=0)
