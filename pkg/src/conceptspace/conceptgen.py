"""Seeded, user-editable generation of weighted concept vectors.

Four stages: seed extraction from corpus salience, expansion through
embedding neighbors, optional user edit script, scoring and ranking.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field, replace
from enum import Enum

from .config import Config, DEFAULTS
from .corpus import (CorpusStats, Document, ScoringFunction, corpus_g2,
                     corpus_tfidf)
from .embeddings import EmbeddingStore
from .errors import DuplicateDescriptor, EmptyCorpus, UnknownConcept


class Provenance(Enum):
    CONCEPT_DESCRIPTOR = "CONCEPT_DESCRIPTOR"
    TOPIC_DESCRIPTOR = "TOPIC_DESCRIPTOR"
    USER_DEFINED = "USER_DEFINED"


@dataclass
class Descriptor:
    word: str
    score: float
    provenance: Provenance


@dataclass
class ConceptVector:
    concept_word: str
    descriptors: list[Descriptor] = field(default_factory=list)

    def words(self) -> list[str]:
        return [d.word for d in self.descriptors]

    def copy(self) -> "ConceptVector":
        return ConceptVector(self.concept_word,
                             [replace(d) for d in self.descriptors])


def extract_seed_concepts(docs: list[Document], stats: CorpusStats,
                          n_seeds: int) -> list[str]:
    """Top corpus words by Borda combination of the G2 and tf-idf rankings."""
    if not docs:
        raise EmptyCorpus("no documents")
    g2 = corpus_g2(docs, stats)
    tfidf = corpus_tfidf(stats)
    vocab = sorted(stats.vocabulary)
    n = len(vocab)

    def borda(scores: dict[str, float]) -> dict[str, int]:
        ranked = sorted(vocab, key=lambda w: (-scores.get(w, 0.0), w))
        return {w: n - i for i, w in enumerate(ranked)}

    points_g2 = borda(g2)
    points_tfidf = borda(tfidf)
    merged = sorted(vocab, key=lambda w: (-(points_g2[w] + points_tfidf[w]), w))
    return merged[:n_seeds]


def expand_concept_vector(seed: str, store: EmbeddingStore, k: int,
                          corpus_vocabulary: set[str]) -> ConceptVector:
    """Descriptors = k nearest in-corpus embedding neighbors of the seed."""
    neighbors = store.nearest_neighbors(seed, k, candidates=corpus_vocabulary)
    return ConceptVector(seed, [
        Descriptor(w, sim, Provenance.CONCEPT_DESCRIPTOR)
        for w, sim in neighbors if w != seed
    ])


def apply_user_edits(vectors: list[ConceptVector],
                     edits: list[dict]) -> list[ConceptVector]:
    """Edit script ops: add / remove / new_concept. Empty script is identity."""
    out = [v.copy() for v in vectors]
    by_word = {v.concept_word: v for v in out}
    for edit in edits:
        op = edit["op"]
        if op == "new_concept":
            word = edit["concept"]
            if word in by_word:
                raise DuplicateDescriptor(f"concept {word!r} already exists")
            vec = ConceptVector(word)
            out.append(vec)
            by_word[word] = vec
            continue
        if edit["concept"] not in by_word:
            raise UnknownConcept(edit["concept"])
        vec = by_word[edit["concept"]]
        word = edit["word"]
        if op == "add":
            if word in vec.words():
                raise DuplicateDescriptor(word)
            vec.descriptors.append(Descriptor(word, 0.0, Provenance.USER_DEFINED))
        elif op == "remove":
            vec.descriptors = [d for d in vec.descriptors if d.word != word]
        else:
            raise UnknownConcept(f"unknown op {op!r}")
    return out


def rank_descriptors(vectors: list[ConceptVector], docs: list[Document],
                     stats: CorpusStats, f: ScoringFunction,
                     config: Config = DEFAULTS) -> list[ConceptVector]:
    """Rescore descriptors corpus-wide; shared descriptors are down-ranked
    by dividing their score by the number of hosting concepts."""
    if f is ScoringFunction.TF:
        base = {w: float(c) for w, c in stats.term_freq.items()}
    elif f is ScoringFunction.TFIDF:
        base = corpus_tfidf(stats)
    else:
        base = corpus_g2(docs, stats)
        if f is ScoringFunction.LOG_LIKELIHOOD_RATIO:
            base = {w: s / 2.0 for w, s in base.items()}

    hosts = Counter()
    for vec in vectors:
        hosts.update(set(vec.words()))

    out = []
    for vec in vectors:
        scored = [
            Descriptor(d.word, base.get(d.word, 0.0) / hosts[d.word], d.provenance)
            for d in vec.descriptors
        ]
        scored.sort(key=lambda d: (-d.score, d.word))
        out.append(ConceptVector(vec.concept_word, scored))
    return out


def generate_concepts(docs: list[Document], stats: CorpusStats,
                      store: EmbeddingStore,
                      edits: list[dict] | None = None,
                      config: Config = DEFAULTS) -> list[ConceptVector]:
    """The full four-stage pipeline with an optional edit script."""
    seeds = extract_seed_concepts(docs, stats, config.n_seeds)
    vectors = [
        expand_concept_vector(s, store, config.expansion_width, stats.vocabulary)
        for s in seeds
    ]
    vectors = apply_user_edits(vectors, edits or [])
    return rank_descriptors(vectors, docs, stats,
                            ScoringFunction[config.scoring_function], config)
