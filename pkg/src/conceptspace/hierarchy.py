"""Concept hierarchy construction via density-based clustering.

Two passes over the projected space: words cluster around concept words,
then concepts cluster into super concepts with a widened neighborhood.
Membership requires both spatial proximity (quadtree neighbors) and
semantic similarity (cosine threshold).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from itertools import combinations
from pathlib import Path

from .conceptgen import ConceptVector, Descriptor, Provenance
from .embeddings import EmbeddingStore
from .errors import LevelOutOfRange, NoConcepts
from .quadtree import QuadTree
from .spatialization import Projection2D

BASE_NEIGHBORHOOD = 6
SUPER_FACTOR = 1.5
LEVEL_MIN, LEVEL_MAX = -2, 2


@dataclass
class AbstractionParams:
    eps_similarity: float = 0.4
    eps_neighborhood: int = BASE_NEIGHBORHOOD
    super_factor: float = SUPER_FACTOR
    level: int = 0

    @property
    def coherence_threshold(self) -> float:
        return self.eps_similarity * (1 + 0.1 * self.level)


def effective_neighborhood(level: int, base: int = BASE_NEIGHBORHOOD) -> int:
    if not LEVEL_MIN <= level <= LEVEL_MAX:
        raise LevelOutOfRange(str(level))
    return round(base * SUPER_FACTOR ** level)


@dataclass
class Cluster:
    seed: str
    members: set[str]


@dataclass
class Concept:
    word: str
    parent: str | None = None  # super-concept label
    descriptors: list[Descriptor] = field(default_factory=list)

    def descriptor_words(self) -> list[str]:
        return [d.word for d in self.descriptors]


@dataclass
class SuperConcept:
    label: str
    concepts: list[str]


@dataclass
class ConceptHierarchy:
    super_concepts: list[SuperConcept] = field(default_factory=list)
    concepts: dict[str, Concept] = field(default_factory=dict)
    base_words: set[str] = field(default_factory=set)

    def descriptor_owner(self, word: str) -> str | None:
        for c in self.concepts.values():
            if word in c.descriptor_words():
                return c.word
        return None

    def all_descriptors(self) -> set[str]:
        out: set[str] = set()
        for c in self.concepts.values():
            out.update(c.descriptor_words())
        return out

    def all_words(self) -> set[str]:
        return set(self.concepts) | self.all_descriptors() | self.base_words

    def level_of(self, word: str) -> str:
        if word in self.concepts:
            return "CONCEPT"
        if self.descriptor_owner(word) is not None:
            return "DESCRIPTOR"
        return "BASE"

    def export_json(self) -> dict:
        return {
            "super_concepts": [
                {
                    "label": sc.label,
                    "concepts": [
                        {
                            "word": cw,
                            "descriptors": [
                                {"word": d.word, "provenance": d.provenance.value,
                                 "score": d.score}
                                for d in self.concepts[cw].descriptors
                            ],
                        }
                        for cw in sc.concepts
                    ],
                }
                for sc in self.super_concepts
            ]
        }

    @classmethod
    def from_json(cls, data: dict) -> "ConceptHierarchy":
        h = cls()
        for sc in data["super_concepts"]:
            members = []
            for c in sc["concepts"]:
                concept = Concept(c["word"], parent=sc["label"], descriptors=[
                    Descriptor(d["word"], d["score"], Provenance(d["provenance"]))
                    for d in c["descriptors"]
                ])
                h.concepts[c["word"]] = concept
                members.append(c["word"])
            h.super_concepts.append(SuperConcept(sc["label"], members))
        return h

    def save(self, path: str | Path) -> None:
        Path(path).write_text(json.dumps(self.export_json(), indent=1))


def _mean_pairwise_cosine(words: list[str], store: EmbeddingStore) -> float:
    pairs = list(combinations(sorted(words), 2))
    if not pairs:
        return 1.0
    return sum(store.cosine(a, b) for a, b in pairs) / len(pairs)


def cluster_level(candidates: list[str], proj: Projection2D, qt: QuadTree,
                  store: EmbeddingStore, params: AbstractionParams,
                  pool: set[str] | None = None
                  ) -> tuple[list[Cluster], list[str]]:
    """One clustering pass: each candidate seeds a cluster from its
    eps_neighborhood nearest spatial neighbors, kept only when all of them
    clear the similarity threshold. Overlaps merge when coherent, otherwise
    contested members go to their most-similar seed."""
    eps_n = params.eps_neighborhood
    candidate_set = set(candidates)
    if pool is None:
        ineligible = set(candidate_set)  # concept words can't be descriptors
    else:
        ineligible = {w for w in qt.coords if w not in pool}

    clusters: list[Cluster] = []
    for seed in sorted(candidate_set):
        if seed not in qt.coords:
            continue
        neighbors = qt.knn(qt.coords[seed], eps_n, exclude=ineligible | {seed})
        qualifying = [w for w, _ in neighbors if store.cosine(seed, w) >= params.eps_similarity]
        if len(qualifying) >= eps_n:
            clusters.append(Cluster(seed, set(qualifying)))

    # resolve overlaps pairwise, deterministically by seed order
    changed = True
    while changed:
        changed = False
        for a, b in combinations(sorted(clusters, key=lambda c: c.seed), 2):
            shared = a.members & b.members
            if not shared:
                continue
            merged = sorted({a.seed, b.seed} | a.members | b.members)
            if _mean_pairwise_cosine(merged, store) >= params.coherence_threshold:
                winner, loser = sorted((a, b), key=lambda c: c.seed)
                winner.members |= loser.members | {loser.seed}
                winner.members.discard(winner.seed)
                clusters.remove(loser)
            else:
                for w in sorted(shared):
                    sim_a, sim_b = store.cosine(w, a.seed), store.cosine(w, b.seed)
                    if sim_a == sim_b:  # tie: earlier seed keeps the word
                        keep = a if a.seed < b.seed else b
                    else:
                        keep = a if sim_a > sim_b else b
                    drop = b if keep is a else a
                    drop.members.discard(w)
            changed = True
            break

    clustered_seeds = {c.seed for c in clusters}
    unclustered = [w for w in sorted(candidate_set) if w not in clustered_seeds]
    return clusters, unclustered


def build_hierarchy(concept_vectors: list[ConceptVector], proj: Projection2D,
                    qt: QuadTree, store: EmbeddingStore,
                    params: AbstractionParams,
                    scores: dict[str, float] | None = None) -> ConceptHierarchy:
    if not concept_vectors:
        raise NoConcepts("no concept vectors")
    concept_words = sorted({v.concept_word for v in concept_vectors})
    provenance_of: dict[str, Provenance] = {}
    score_of: dict[str, float] = {}
    declared: set[str] = set()
    for v in concept_vectors:
        for d in v.descriptors:
            provenance_of.setdefault(d.word, d.provenance)
            score_of.setdefault(d.word, d.score)
            declared.add(d.word)

    h = ConceptHierarchy()
    for cw in concept_words:
        h.concepts[cw] = Concept(cw)

    pass1 = AbstractionParams(params.eps_similarity,
                              effective_neighborhood(params.level,
                                                     params.eps_neighborhood),
                              params.super_factor, params.level)
    clusters, _ = cluster_level(concept_words, proj, qt, store, pass1)
    assigned: set[str] = set()
    for cl in clusters:
        for w in sorted(cl.members):
            if w in h.concepts or w in assigned:
                continue
            h.concepts[cl.seed].descriptors.append(Descriptor(
                w, score_of.get(w, 0.0),
                provenance_of.get(w, Provenance.TOPIC_DESCRIPTOR)))
            assigned.add(w)

    # leftover declared descriptors attach to their most similar concept,
    # provided they clear the similarity threshold; otherwise base words
    for w in sorted(declared - assigned - set(concept_words)):
        if w not in store:
            h.base_words.add(w)
            continue
        sims = [(store.cosine(w, c), c) for c in concept_words if c in store]
        if not sims:
            h.base_words.add(w)
            continue
        best_sim = max(s for s, _ in sims)
        if best_sim < params.eps_similarity:
            h.base_words.add(w)
            continue
        best = min(c for s, c in sims if s == best_sim)
        h.concepts[best].descriptors.append(Descriptor(
            w, score_of.get(w, 0.0),
            provenance_of.get(w, Provenance.TOPIC_DESCRIPTOR)))
        assigned.add(w)

    for w in qt.coords:
        if w not in h.concepts and w not in assigned:
            h.base_words.add(w)

    rebuild_super_concepts(h, proj, qt, store, params, scores)
    return h


def rebuild_super_concepts(h: ConceptHierarchy, proj: Projection2D,
                           qt: QuadTree, store: EmbeddingStore,
                           params: AbstractionParams,
                           scores: dict[str, float] | None = None) -> ConceptHierarchy:
    """Recompute only the super-concept layer; concepts and descriptors
    are untouched."""
    concept_words = sorted(h.concepts)
    scores = scores or {}

    def concept_score(cw: str) -> float:
        return scores.get(cw, float(len(h.concepts[cw].descriptors)))

    eps_super = max(1, round(
        effective_neighborhood(params.level, params.eps_neighborhood)
        * params.super_factor))
    pass2 = AbstractionParams(params.eps_similarity, eps_super,
                              params.super_factor, params.level)
    clusters, unclustered = cluster_level(
        concept_words, proj, qt, store, pass2, pool=set(concept_words))

    h.super_concepts = []
    grouped: set[str] = set()
    for cl in sorted(clusters, key=lambda c: c.seed):
        members = sorted(({cl.seed} | cl.members) - grouped)
        if not members:
            continue
        label = max(members, key=lambda w: (concept_score(w), w))
        h.super_concepts.append(SuperConcept(label, members))
        grouped.update(members)
    for cw in concept_words:
        if cw not in grouped:
            h.super_concepts.append(SuperConcept(cw, [cw]))
            grouped.add(cw)
    h.super_concepts.sort(key=lambda sc: sc.label)
    for sc in h.super_concepts:
        for cw in sc.concepts:
            h.concepts[cw].parent = sc.label
    return h
