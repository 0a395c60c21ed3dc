"""Word-vector table for the embedding feature family."""

from __future__ import annotations

import hashlib
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .config import ConfigurationError


@dataclass(frozen=True)
class EmbeddingTable:
    """Fixed-dimension word vectors with lower-cased lookup."""

    dim: int
    vectors: dict  # word -> np.ndarray of shape (dim,)
    content_hash: str

    def document_vector(self, words) -> np.ndarray:
        """Mean vector of the in-vocabulary words; zero vector if none."""
        found = [self.vectors[w] for w in words if w in self.vectors]
        if not found:
            return np.zeros(self.dim)
        return np.mean(found, axis=0)


def load_embeddings(path: str | Path, expected_dim: int) -> EmbeddingTable:
    """Read a whitespace-delimited vector file ("word v1 ... vd" per line).

    A leading "count dim" header line (two integers) is allowed and
    skipped. Every row must have exactly expected_dim values.
    """
    path = Path(path)
    if not path.is_file():
        raise ConfigurationError(f"embedding file not found: {path}")
    digest = hashlib.sha256()
    vectors = {}
    with open(path, encoding="utf-8") as handle:
        for line_number, line in enumerate(handle, start=1):
            digest.update(line.encode("utf-8"))
            parts = line.rstrip("\n").split(" ")
            parts = [p for p in parts if p]
            if not parts:
                continue
            if line_number == 1 and len(parts) == 2:
                try:
                    int(parts[0]), int(parts[1])
                    continue  # header
                except ValueError:
                    pass
            word, values = parts[0], parts[1:]
            if len(values) != expected_dim:
                raise ConfigurationError(
                    f"embedding file {path} line {line_number}: expected "
                    f"{expected_dim} values, found {len(values)}")
            try:
                vector = np.array([float(v) for v in values])
            except ValueError as error:
                raise ConfigurationError(
                    f"embedding file {path} line {line_number}: {error}")
            vectors[word.lower()] = vector
    if not vectors:
        raise ConfigurationError(f"embedding file {path} has no vectors")
    return EmbeddingTable(expected_dim, vectors, digest.hexdigest())
