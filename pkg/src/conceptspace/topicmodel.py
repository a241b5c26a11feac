"""Deterministic incremental topic model over weighted keyword vectors,
plus concept-driven reweighting, topic glyphs and topic diagnosis."""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path

from .config import Config, DEFAULTS
from .corpus import Document, top_keywords
from .embeddings import EmbeddingStore, HierarchyLevel, WeightStore
from .errors import UntrainedModel
from .hierarchy import ConceptHierarchy
from .spatialization import Projection2D


@dataclass
class Topic:
    id: int
    doc_ids: list[str] = field(default_factory=list)
    centroid: dict[str, float] = field(default_factory=dict)

    def top_keywords(self, m: int) -> list[tuple[str, float]]:
        ranked = sorted(self.centroid.items(), key=lambda kv: (-kv[1], kv[0]))
        return ranked[:m]


@dataclass
class TopicHierarchy:
    topics: list[Topic] = field(default_factory=list)
    assignments: dict[str, int] = field(default_factory=dict)
    attach_margins: dict[str, float] = field(default_factory=dict)
    doc_vectors: dict[str, dict[str, float]] = field(default_factory=dict)

    def hash(self) -> str:
        payload = json.dumps({
            "topics": [
                {"id": t.id, "docs": t.doc_ids,
                 "centroid": {w: round(v, 12) for w, v in sorted(t.centroid.items())}}
                for t in self.topics
            ],
        }, sort_keys=True)
        return hashlib.sha256(payload.encode()).hexdigest()

    def export_json(self, cases: dict[int, str] | None = None,
                    m: int = 15, path: str | Path | None = None) -> dict:
        data = {
            "topics": [
                {
                    "id": t.id,
                    "top_keywords": [
                        {"word": w, "weight": v} for w, v in t.top_keywords(m)
                    ],
                    "docs": list(t.doc_ids),
                    "case": (cases or {}).get(t.id),
                }
                for t in self.topics
            ]
        }
        if path is not None:
            Path(path).write_text(json.dumps(data, indent=1))
        return data


def _sparse_cosine(a: dict[str, float], b: dict[str, float]) -> float:
    if not a or not b:
        return 0.0
    if len(b) < len(a):
        a, b = b, a
    dot = sum(v * b.get(w, 0.0) for w, v in a.items())
    na = math.sqrt(sum(v * v for v in a.values()))
    nb = math.sqrt(sum(v * v for v in b.values()))
    if na == 0 or nb == 0:
        return 0.0
    return dot / (na * nb)


def doc_vector(doc: Document, weights: WeightStore,
               n: int = 15) -> dict[str, float]:
    """Top-n keyword vector scaled by each word's effective weight."""
    return {
        w: doc.keyword_vector[w] * weights.effective_weight(w)
        for w in top_keywords(doc, n)
    }


def train(docs: list[Document], weights: WeightStore,
          tau: float = DEFAULTS.attach_threshold,
          config: Config = DEFAULTS, progress=None) -> TopicHierarchy:
    """Order-dependent single pass: a document joins the most similar
    topic centroid at or above tau, otherwise founds a new topic."""
    tm = TopicHierarchy()
    for pos, doc in enumerate(docs):
        vec = doc_vector(doc, weights, config.top_doc_keywords)
        tm.doc_vectors[doc.id] = vec
        sims = [(t, _sparse_cosine(vec, t.centroid)) for t in tm.topics]
        sims.sort(key=lambda ts: (-ts[1], ts[0].id))
        best = sims[0] if sims else None
        second = sims[1][1] if len(sims) > 1 else 0.0
        if best is not None and best[1] >= tau:
            topic = best[0]
            tm.attach_margins[doc.id] = best[1] - second
        else:
            topic = Topic(id=len(tm.topics))
            tm.topics.append(topic)
            tm.attach_margins[doc.id] = (best[1] if best else 0.0)
        topic.doc_ids.append(doc.id)
        tm.assignments[doc.id] = topic.id
        n = len(topic.doc_ids)
        for w in set(topic.centroid) | set(vec):
            prev = topic.centroid.get(w, 0.0)
            topic.centroid[w] = prev + (vec.get(w, 0.0) - prev) / n
        if progress is not None:
            progress(pos + 1, len(docs))
    return tm


def reweight_from_concepts(h: ConceptHierarchy,
                           weights: WeightStore) -> WeightStore:
    """Push every word's hierarchy level into its multiplier; user-demoted
    words keep DEMOTED."""
    super_labels = {sc.label for sc in h.super_concepts}
    for w in sorted(h.all_words()):
        if weights.get(w).level is HierarchyLevel.DEMOTED:
            continue
        if w in super_labels:
            weights.set_level(w, HierarchyLevel.SUPER_CONCEPT)
        elif w in h.concepts:
            weights.set_level(w, HierarchyLevel.CONCEPT)
        elif h.descriptor_owner(w) is not None:
            weights.set_level(w, HierarchyLevel.DESCRIPTOR)
        else:
            weights.set_level(w, HierarchyLevel.BASE)
    return weights


@dataclass
class Spike:
    concept: str
    sim: float
    dist: float
    endpoint_distance: float
    opacity: float
    direction: tuple[float, float]
    color: str = "#000000"


@dataclass
class TopicGlyph:
    owner: str
    position: tuple[float, float]
    spikes: list[Spike] = field(default_factory=list)


class TopicCase(Enum):
    SINGLE_CONCEPT = "SINGLE_CONCEPT"
    UNREPRESENTED = "UNREPRESENTED"
    MULTI_CONCEPT = "MULTI_CONCEPT"
    CONCEPT_INCOHERENT = "CONCEPT_INCOHERENT"


def concept_embedding_centroid(h: ConceptHierarchy, concept: str,
                               store: EmbeddingStore):
    words = [concept] + h.concepts[concept].descriptor_words()
    store.ensure(words)
    acc = sum(store.vector(w) for w in words)
    norm = math.sqrt(float(acc @ acc))
    return acc / norm if norm > 0 else acc


def keyword_embedding_centroid(vec: dict[str, float], store: EmbeddingStore):
    store.ensure(sorted(vec))
    acc = None
    for w, weight in vec.items():
        term = store.vector(w) * weight
        acc = term if acc is None else acc + term
    if acc is None:
        return None
    norm = math.sqrt(float(acc @ acc))
    return acc / norm if norm > 0 else acc


def glyph(owner: str, owner_vec: dict[str, float],
          owner_pos: tuple[float, float], h: ConceptHierarchy,
          proj: Projection2D, store: EmbeddingStore,
          colors: dict[str, str] | None = None) -> TopicGlyph:
    """One spike per concept: endpoint at sim*dist from the owner, opacity
    sim, oriented toward the concept."""
    owner_emb = keyword_embedding_centroid(owner_vec, store)
    out = TopicGlyph(owner, owner_pos)
    for cw in sorted(h.concepts):
        cpos = proj.coords.get(cw)
        if cpos is None:
            continue
        cemb = concept_embedding_centroid(h, cw, store)
        sim = 0.0 if owner_emb is None else max(0.0, float(owner_emb @ cemb))
        dx, dy = cpos[0] - owner_pos[0], cpos[1] - owner_pos[1]
        dist = math.hypot(dx, dy)
        direction = (dx / dist, dy / dist) if dist > 0 else (0.0, 0.0)
        out.spikes.append(Spike(
            concept=cw, sim=sim, dist=dist,
            endpoint_distance=sim * dist, opacity=sim, direction=direction,
            color=(colors or {}).get(cw, "#000000")))
    return out


def classify(g: TopicGlyph, sigma_related: float = DEFAULTS.sigma_related,
             rho: float | None = None,
             viewport: tuple[float, float] = (1.0, 1.0)) -> TopicCase:
    if rho is None:
        rho = DEFAULTS.rho_fraction * math.hypot(*viewport)
    related = [s for s in g.spikes if s.sim >= sigma_related]
    if not related:
        return TopicCase.UNREPRESENTED
    if len(related) == 1:
        return TopicCase.SINGLE_CONCEPT
    positions = [
        (g.position[0] + s.direction[0] * s.dist,
         g.position[1] + s.direction[1] * s.dist)
        for s in related
    ]
    max_dist = max(
        math.hypot(p[0] - q[0], p[1] - q[1])
        for i, p in enumerate(positions) for q in positions[i + 1:])
    if max_dist <= rho:
        return TopicCase.MULTI_CONCEPT
    return TopicCase.CONCEPT_INCOHERENT


def quality_metrics(tm: TopicHierarchy, docs: list[Document],
                    store: EmbeddingStore,
                    m: int = 15) -> dict[str, float]:
    if not tm.topics:
        raise UntrainedModel("no topics")
    by_id = {d.id: d for d in docs}

    def pairwise_mean(vals):
        return sum(vals) / len(vals) if vals else 0.0

    coherences = []
    tops: dict[int, list[str]] = {}
    for t in tm.topics:
        kws = [w for w, _ in t.top_keywords(m)]
        tops[t.id] = kws
        store.ensure(kws)
        sims = [store.cosine(a, b)
                for i, a in enumerate(kws) for b in kws[i + 1:]]
        coherences.append(pairwise_mean(sims))
    coherence = pairwise_mean(coherences)

    def centroid_dist(a: Topic, b: Topic) -> float:
        words = set(a.centroid) | set(b.centroid)
        return math.sqrt(sum(
            (a.centroid.get(w, 0.0) - b.centroid.get(w, 0.0)) ** 2
            for w in words))

    separations = [centroid_dist(a, b)
                   for i, a in enumerate(tm.topics) for b in tm.topics[i + 1:]]
    separation = pairwise_mean(separations)  # 0 for a single topic

    kw_hosts: dict[str, int] = {}
    for kws in tops.values():
        for w in set(kws):
            kw_hosts[w] = kw_hosts.get(w, 0) + 1
    all_top = [w for kws in tops.values() for w in kws]
    distinctiveness = (
        sum(1 for w in all_top if kw_hosts[w] == 1) / len(all_top)
        if all_top else 0.0)

    n_docs = len(docs)
    contains = {
        w: {d.id for d in docs if w in d.counts}
        for w in set(all_top)
    }
    pmi_vals = []
    for kws in tops.values():
        for i, w1 in enumerate(kws):
            for w2 in kws[i + 1:]:
                joint = len(contains[w1] & contains[w2]) / n_docs
                p1 = len(contains[w1]) / n_docs
                p2 = len(contains[w2]) / n_docs
                if joint > 0 and p1 > 0 and p2 > 0:
                    pmi_vals.append(math.log(joint / (p1 * p2)))
    pmi = pairwise_mean(pmi_vals)

    certainty = pairwise_mean(list(tm.attach_margins.values()))
    sizes = [len(t.doc_ids) for t in tm.topics]
    branching = pairwise_mean(sizes)
    compactness = pairwise_mean([
        _sparse_cosine(tm.doc_vectors[d], tm.topics[tm.assignments[d]].centroid)
        for d in tm.assignments if d in by_id
    ])
    return {
        "coherence": coherence,
        "separation": separation,
        "distinctiveness": distinctiveness,
        "pmi": pmi,
        "certainty": certainty,
        "branching_factor": branching,
        "compactness": compactness,
        "topic_size": pairwise_mean(sizes),
    }
