"""Static word vectors and the similarity math built on them.

The vector file format is the plain-text one used by the common
pretrained-embedding releases: a header line ``vocab_size dimension``
followed by one ``word v1 v2 ... vd`` line per word. Everything is read
into float64 and stays float64; similarity ranking depends on these
numbers being bit-for-bit reproducible across runs.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Mapping

import numpy as np

from .errors import DimensionMismatch, EmptyVocabulary, HeaderMismatch

__all__ = ["WordVectorTable", "load_vectors", "sentence_vector", "cosine"]


@dataclass(frozen=True)
class WordVectorTable:
    """Lookup table from lowercase word to its embedding vector."""

    dimension: int
    vectors: Mapping[str, np.ndarray]

    def __post_init__(self) -> None:
        if self.dimension <= 0:
            raise HeaderMismatch(f"dimension must be positive, got {self.dimension}")
        if not self.vectors:
            raise EmptyVocabulary("vector table has no entries")
        for word, vector in self.vectors.items():
            if vector.shape != (self.dimension,):
                raise DimensionMismatch(
                    f"vector for {word!r} has shape {vector.shape}, "
                    f"expected ({self.dimension},)"
                )

    def __contains__(self, word: str) -> bool:
        return word.lower() in self.vectors

    def __len__(self) -> int:
        return len(self.vectors)

    def get(self, word: str) -> np.ndarray | None:
        return self.vectors.get(word.lower())


def load_vectors(path: str | Path) -> WordVectorTable:
    """Load a word-vector table from a text file.

    The header must be two integers (``vocab_size dimension``); a header
    whose count disagrees with the actual number of lines is tolerated,
    since published files are routinely off by the odd duplicate. Every
    data row must carry exactly ``dimension`` floats. Words are matched
    case-insensitively; on duplicates the first row wins.
    """
    path = Path(path)
    vectors: dict[str, np.ndarray] = {}
    with path.open("r", encoding="utf-8") as handle:
        header = handle.readline().strip().split()
        if len(header) != 2:
            raise HeaderMismatch(
                f"expected 'vocab_size dimension' header, got {' '.join(header)!r}"
            )
        try:
            _, dimension = int(header[0]), int(header[1])
        except ValueError as exc:
            raise HeaderMismatch(f"non-integer header fields: {header}") from exc
        if dimension <= 0:
            raise HeaderMismatch(f"dimension must be positive, got {dimension}")
        for line_number, line in enumerate(handle, start=2):
            line = line.rstrip("\n")
            if not line.strip():
                continue
            parts = line.split()
            if len(parts) != dimension + 1:
                raise DimensionMismatch(
                    f"line {line_number}: expected {dimension} components, "
                    f"got {len(parts) - 1}"
                )
            word = parts[0].lower()
            if word in vectors:
                continue
            try:
                vectors[word] = np.asarray(parts[1:], dtype=np.float64)
            except ValueError as exc:
                raise DimensionMismatch(
                    f"line {line_number}: non-numeric component ({exc})"
                ) from exc
    if not vectors:
        raise EmptyVocabulary(f"{path} contains a header but no vectors")
    return WordVectorTable(dimension=dimension, vectors=vectors)


def sentence_vector(words: Iterable[str], table: WordVectorTable) -> np.ndarray:
    """Mean of the vectors of the in-vocabulary words.

    Out-of-vocabulary words are skipped; if nothing is in vocabulary the
    zero vector comes back (and cosine against it is defined as 0).
    """
    found = [table.get(word) for word in words]
    found = [vec for vec in found if vec is not None]
    if not found:
        return np.zeros(table.dimension, dtype=np.float64)
    return np.mean(np.stack(found), axis=0)


def cosine(a: np.ndarray, b: np.ndarray) -> float:
    """Cosine similarity in double precision; 0.0 when either vector is zero."""
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.shape != b.shape:
        raise DimensionMismatch(f"shape {a.shape} vs {b.shape}")
    norm_product = float(np.linalg.norm(a)) * float(np.linalg.norm(b))
    if norm_product == 0.0:
        return 0.0
    return float(np.dot(a, b) / norm_product)
