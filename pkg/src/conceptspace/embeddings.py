"""Word-vector store, similarity queries and per-word weighted vectors."""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path

import numpy as np

from .config import Config, DEFAULTS
from .errors import DimensionMismatch, MissingFile, UnknownWord


class HierarchyLevel(Enum):
    BASE = "BASE"
    DESCRIPTOR = "DESCRIPTOR"
    CONCEPT = "CONCEPT"
    SUPER_CONCEPT = "SUPER_CONCEPT"
    DEMOTED = "DEMOTED"


class EmbeddingStore:
    """Unit-normalized word vectors with brute-force cosine queries."""

    def __init__(self, dim: int):
        self.dim = dim
        self._index: dict[str, int] = {}
        self._words: list[str] = []
        self._rows: list[np.ndarray] = []
        self._matrix: np.ndarray | None = None

    def __contains__(self, word: str) -> bool:
        return word in self._index

    def __len__(self) -> int:
        return len(self._words)

    @property
    def words(self) -> list[str]:
        return list(self._words)

    def add(self, word: str, vec: np.ndarray) -> None:
        norm = float(np.linalg.norm(vec))
        unit = vec / norm if norm > 0 else vec
        if word in self._index:
            self._rows[self._index[word]] = unit
        else:
            self._index[word] = len(self._words)
            self._words.append(word)
            self._rows.append(unit)
        self._matrix = None

    def vector(self, word: str) -> np.ndarray:
        if word not in self._index:
            raise UnknownWord(word)
        return self._rows[self._index[word]]

    def matrix(self) -> np.ndarray:
        if self._matrix is None:
            self._matrix = np.vstack(self._rows) if self._rows else np.zeros((0, self.dim))
        return self._matrix

    def cosine(self, a: str, b: str) -> float:
        return float(np.dot(self.vector(a), self.vector(b)))

    def nearest_neighbors(self, word: str, k: int,
                          candidates: set[str] | None = None) -> list[tuple[str, float]]:
        """k most-similar distinct other words, descending; ties lexicographic."""
        sims = self.matrix() @ self.vector(word)
        pairs = []
        for i, w in enumerate(self._words):
            if w == word:
                continue
            if candidates is not None and w not in candidates:
                continue
            pairs.append((w, float(sims[i])))
        pairs.sort(key=lambda p: (-p[1], p[0]))
        return pairs[:k]

    def ensure(self, words) -> None:
        """Give every listed word a vector; absentees get a deterministic
        pseudo-random unit vector seeded from the word's bytes."""
        for w in words:
            if w not in self._index:
                self.add(w, _pseudo_random_vector(w, self.dim))


def _pseudo_random_vector(word: str, dim: int) -> np.ndarray:
    seed = int.from_bytes(hashlib.sha256(word.encode("utf-8")).digest()[:8], "big")
    rng = np.random.default_rng(seed)
    vec = rng.standard_normal(dim)
    return vec / np.linalg.norm(vec)


def load_embeddings(source: str | Path,
                    corpus_vocabulary: set[str] | None = None,
                    expansion_k: int = 30) -> EmbeddingStore:
    """Parse a text vector file: `word f1 ... fd`, optional `count dim` header.

    When a corpus vocabulary is given, the store keeps corpus words plus
    the expansion_k nearest file words of each corpus word.
    """
    path = Path(source)
    if not path.exists():
        raise MissingFile(str(path))
    words: list[str] = []
    rows: list[np.ndarray] = []
    dim = None
    with open(path, encoding="utf-8") as fh:
        for rowno, line in enumerate(fh, start=1):
            parts = line.rstrip("\n").split(" ")
            if not parts or parts == [""]:
                continue
            if rowno == 1 and len(parts) == 2:
                try:
                    int(parts[0]), int(parts[1])
                    continue  # header line
                except ValueError:
                    pass
            vec = np.array([float(x) for x in parts[1:]], dtype=np.float64)
            if dim is None:
                dim = len(vec)
            elif len(vec) != dim:
                raise DimensionMismatch(rowno, dim, len(vec))
            words.append(parts[0])
            rows.append(vec)
    if dim is None:
        raise MissingFile(f"{path}: no vector rows")

    store = EmbeddingStore(dim)
    if corpus_vocabulary is None:
        for w, v in zip(words, rows):
            store.add(w, v)
        return store

    matrix = np.vstack(rows)
    matrix = matrix / np.linalg.norm(matrix, axis=1, keepdims=True)
    index = {w: i for i, w in enumerate(words)}
    keep: set[str] = set()
    for w in corpus_vocabulary:
        if w in index:
            keep.add(w)
            sims = matrix @ matrix[index[w]]
            order = np.argsort(-sims)
            added = 0
            for i in order:
                if words[i] == w:
                    continue
                keep.add(words[i])
                added += 1
                if added >= expansion_k:
                    break
    for w in keep:
        store.add(w, matrix[index[w]])
    store.ensure(sorted(corpus_vocabulary))
    return store


@dataclass
class WeightedWordVector:
    word: str
    base_score: float = 1.0
    level_multiplier: float = 1.0
    level: HierarchyLevel = HierarchyLevel.BASE
    relevance: dict[str, float] = field(default_factory=dict)

    @property
    def effective_weight(self) -> float:
        return self.base_score * self.level_multiplier


class WeightStore:
    """Per-word weighted vectors shared by both hierarchies."""

    def __init__(self, config: Config = DEFAULTS):
        self.config = config
        self._weights: dict[str, WeightedWordVector] = {}

    def get(self, word: str) -> WeightedWordVector:
        if word not in self._weights:
            self._weights[word] = WeightedWordVector(word)
        return self._weights[word]

    def __iter__(self):
        return iter(self._weights.values())

    def set_level(self, word: str, level: HierarchyLevel) -> WeightedWordVector:
        wv = self.get(word)
        wv.level = level
        wv.level_multiplier = self.config.multipliers[level.value]
        return wv

    def effective_weight(self, word: str) -> float:
        wv = self._weights.get(word)
        return wv.effective_weight if wv is not None else 1.0

    def export_learned(self) -> dict:
        return {
            wv.word: {
                "global_relevance": wv.relevance.get("GLOBAL", 0.0),
                "level_multiplier": wv.level_multiplier,
            }
            for wv in self._weights.values()
        }

    def import_learned(self, data: dict) -> None:
        for word, entry in data.items():
            wv = self.get(word)
            wv.relevance["GLOBAL"] = float(entry.get("global_relevance", 0.0))
            wv.level_multiplier = float(entry.get("level_multiplier", 1.0))

    def save(self, path: str | Path) -> None:
        Path(path).write_text(json.dumps(self.export_learned(), indent=1))

    def load(self, path: str | Path) -> None:
        self.import_learned(json.loads(Path(path).read_text()))
