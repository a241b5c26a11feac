"""Refinement action algebra, quality monitoring and the guided
recommendation queue."""

from __future__ import annotations

import copy
import math
from dataclasses import dataclass, field
from enum import Enum

from .config import Config, DEFAULTS
from .corpus import CorpusStats, corpus_tfidf
from .embeddings import EmbeddingStore, HierarchyLevel, WeightStore
from .errors import (EmptyQueue, ForbiddenAction, LastConcept, UnknownTarget)
from .conceptgen import Descriptor, Provenance
from .hierarchy import Concept, ConceptHierarchy
from .quadtree import QuadTree
from .spatialization import Projection2D


class ActionKind(Enum):
    PROMOTE = "PROMOTE"
    DEMOTE = "DEMOTE"
    REASSIGN_CHILDREN = "REASSIGN_CHILDREN"
    REASSIGN_PARENT = "REASSIGN_PARENT"
    SPLIT = "SPLIT"
    MERGE = "MERGE"
    SWAP = "SWAP"
    DELETE = "DELETE"
    ADD_WORD = "ADD_WORD"
    CREATE_CONCEPT_FROM_SELECTION = "CREATE_CONCEPT_FROM_SELECTION"


# permitted kinds per hierarchy level of the primary target
PERMISSIONS: dict[str, set[ActionKind]] = {
    "SUPER_CONCEPT": set(),
    "CONCEPT": {ActionKind.DEMOTE, ActionKind.REASSIGN_CHILDREN,
                ActionKind.SPLIT, ActionKind.MERGE, ActionKind.SWAP,
                ActionKind.DELETE},
    "DESCRIPTOR": {ActionKind.PROMOTE, ActionKind.DEMOTE,
                   ActionKind.REASSIGN_PARENT, ActionKind.SPLIT,
                   ActionKind.MERGE, ActionKind.DELETE,
                   ActionKind.CREATE_CONCEPT_FROM_SELECTION},
    "BASE": {ActionKind.PROMOTE, ActionKind.ADD_WORD},
}


@dataclass
class RefinementAction:
    kind: ActionKind
    targets: list[str]
    destination: str | None = None

    def to_json(self) -> dict:
        return {"kind": self.kind.value, "targets": list(self.targets),
                "destination": self.destination}

    @classmethod
    def from_json(cls, data: dict) -> "RefinementAction":
        return cls(ActionKind(data["kind"]), list(data["targets"]),
                   data.get("destination"))


def _most_similar_concept(word: str, h: ConceptHierarchy,
                          store: EmbeddingStore,
                          exclude: set[str] = frozenset()) -> str | None:
    options = sorted(set(h.concepts) - exclude - {word})
    if not options:
        return None
    store.ensure([word] + options)
    best = max(store.cosine(word, c) for c in options)
    return next(c for c in options if store.cosine(word, c) == best)


def apply(action: RefinementAction, h: ConceptHierarchy,
          store: EmbeddingStore, weights: WeightStore | None = None
          ) -> ConceptHierarchy:
    """Apply one action to a copy of the hierarchy; forbidden or unknown
    targets raise before any mutation."""
    if not action.targets:
        raise UnknownTarget("action has no targets")
    target = action.targets[0]
    if target not in h.all_words():
        raise UnknownTarget(target)
    level = h.level_of(target)
    if action.kind not in PERMISSIONS[level]:
        raise ForbiddenAction(level, action.kind.value)

    out = copy.deepcopy(h)
    weights = weights if weights is not None else WeightStore()

    def set_level(word: str, lvl: HierarchyLevel) -> None:
        weights.set_level(word, lvl)

    def remove_descriptor(word: str) -> Descriptor | None:
        owner = out.descriptor_owner(word)
        if owner is None:
            return None
        concept = out.concepts[owner]
        entry = next(d for d in concept.descriptors if d.word == word)
        concept.descriptors = [d for d in concept.descriptors if d.word != word]
        return entry

    def attach(word: str, concept_word: str, score: float = 0.0,
               provenance: Provenance = Provenance.USER_DEFINED) -> None:
        concept = out.concepts[concept_word]
        if word not in concept.descriptor_words():
            concept.descriptors.append(Descriptor(word, score, provenance))
        out.base_words.discard(word)
        set_level(word, HierarchyLevel.DESCRIPTOR)

    kind = action.kind
    if kind in (ActionKind.PROMOTE, ActionKind.ADD_WORD) and level == "BASE":
        # base word becomes a descriptor of the destination concept
        if action.destination is None or action.destination not in out.concepts:
            raise UnknownTarget(str(action.destination))
        out.base_words.discard(target)
        attach(target, action.destination)

    elif kind is ActionKind.PROMOTE:  # descriptor -> concept
        remove_descriptor(target)
        out.concepts[target] = Concept(target)
        set_level(target, HierarchyLevel.CONCEPT)

    elif kind is ActionKind.DEMOTE and level == "CONCEPT":
        if len(out.concepts) <= 1:
            raise LastConcept(target)
        doomed = out.concepts.pop(target)
        for d in doomed.descriptors:
            host = _most_similar_concept(d.word, out, store)
            attach(d.word, host, d.score, d.provenance)
        host = _most_similar_concept(target, out, store)
        attach(target, host)

    elif kind is ActionKind.DEMOTE:  # descriptor -> base word
        remove_descriptor(target)
        out.base_words.add(target)
        set_level(target, HierarchyLevel.BASE)

    elif kind is ActionKind.DELETE and level == "CONCEPT":
        if len(out.concepts) <= 1:
            raise LastConcept(target)
        doomed = out.concepts.pop(target)
        for word in [target] + doomed.descriptor_words():
            out.base_words.add(word)
            set_level(word, HierarchyLevel.DEMOTED)

    elif kind is ActionKind.DELETE:  # descriptor deleted from the view
        remove_descriptor(target)
        out.base_words.add(target)
        set_level(target, HierarchyLevel.DEMOTED)

    elif kind is ActionKind.REASSIGN_PARENT:
        if action.destination is None or action.destination not in out.concepts:
            raise UnknownTarget(str(action.destination))
        entry = remove_descriptor(target)
        attach(target, action.destination, entry.score if entry else 0.0,
               entry.provenance if entry else Provenance.USER_DEFINED)

    elif kind is ActionKind.REASSIGN_CHILDREN:
        if action.destination is None or action.destination not in out.concepts:
            raise UnknownTarget(str(action.destination))
        src = out.concepts[target]
        for d in list(src.descriptors):
            remove_descriptor(d.word)
            attach(d.word, action.destination, d.score, d.provenance)

    elif kind is ActionKind.SWAP:
        # exchange a concept with one of its descriptors
        if level == "CONCEPT":
            concept_word, descriptor_word = target, action.destination
        else:
            descriptor_word, concept_word = target, out.descriptor_owner(target)
        if (concept_word not in out.concepts
                or descriptor_word not in out.concepts[concept_word].descriptor_words()):
            raise UnknownTarget(str(descriptor_word))
        concept = out.concepts.pop(concept_word)
        rest = [d for d in concept.descriptors if d.word != descriptor_word]
        rest.append(Descriptor(concept_word, 0.0, Provenance.USER_DEFINED))
        out.concepts[descriptor_word] = Concept(
            descriptor_word, parent=concept.parent, descriptors=rest)
        set_level(descriptor_word, HierarchyLevel.CONCEPT)
        set_level(concept_word, HierarchyLevel.DESCRIPTOR)

    elif kind is ActionKind.MERGE:
        members = sorted(set(action.targets))
        if any(m not in out.concepts for m in members):
            raise UnknownTarget(str(members))
        if len(members) < 2:
            raise UnknownTarget("merge needs at least two concepts")
        winner = max(members,
                     key=lambda w: (weights.get(w).base_score, w))
        pooled: list[Descriptor] = []
        for m in members:
            concept = out.concepts.pop(m)
            pooled.extend(concept.descriptors)
            if m != winner:
                pooled.append(Descriptor(m, 0.0, Provenance.USER_DEFINED))
                set_level(m, HierarchyLevel.DESCRIPTOR)
        seen: set[str] = set()
        unique = []
        for d in pooled:
            if d.word not in seen and d.word != winner:
                unique.append(d)
                seen.add(d.word)
        out.concepts[winner] = Concept(winner, descriptors=unique)
        set_level(winner, HierarchyLevel.CONCEPT)

    elif kind is ActionKind.SPLIT:
        if level == "DESCRIPTOR":
            owner = out.descriptor_owner(target)
            remove_descriptor(target)
            out.concepts[target] = Concept(target, parent=out.concepts[owner].parent)
            set_level(target, HierarchyLevel.CONCEPT)
        else:
            concept = out.concepts[target]
            if len(concept.descriptors) < 2:
                raise UnknownTarget("concept too small to split")
            store.ensure([target] + concept.descriptor_words())
            new_seed = min(concept.descriptor_words(),
                           key=lambda w: (store.cosine(w, target), w))
            moved = [d for d in concept.descriptors
                     if d.word != new_seed
                     and store.cosine(d.word, new_seed) > store.cosine(d.word, target)]
            concept.descriptors = [
                d for d in concept.descriptors
                if d.word != new_seed and d not in moved]
            out.concepts[new_seed] = Concept(new_seed, parent=concept.parent,
                                             descriptors=moved)
            set_level(new_seed, HierarchyLevel.CONCEPT)

    elif kind is ActionKind.CREATE_CONCEPT_FROM_SELECTION:
        clicked = target
        remove_descriptor(clicked)
        out.base_words.discard(clicked)
        out.concepts[clicked] = Concept(clicked)
        set_level(clicked, HierarchyLevel.CONCEPT)
        for word in action.targets[1:]:
            if word == clicked or word in out.concepts:
                continue
            remove_descriptor(word)
            attach(word, clicked)
    else:  # pragma: no cover - all kinds handled above
        raise ForbiddenAction(level, kind.value)

    return out


@dataclass
class WordQuality:
    word: str
    parent: str | None
    neighborhood_count: int
    sim_to_parent: float
    sim_to_children_mean: float
    spatial_dist_to_parent: float


@dataclass
class QualityReport:
    rmsstd: float
    s_dbw: float
    clusters: dict[str, dict[str, float]]
    words: dict[str, WordQuality]
    tm_metrics: dict[str, float] = field(default_factory=dict)


def _cluster_positions(h: ConceptHierarchy,
                       proj: Projection2D) -> dict[str, list[tuple[float, float]]]:
    out: dict[str, list[tuple[float, float]]] = {}
    for cw, concept in h.concepts.items():
        pts = [proj.coords[w]
               for w in [cw] + concept.descriptor_words()
               if w in proj.coords]
        if pts:
            out[cw] = pts
    return out


def rmsstd(clusters: dict[str, list[tuple[float, float]]]) -> float:
    num = 0.0
    den = 0
    for pts in clusters.values():
        n = len(pts)
        if n < 2:
            continue
        cx = sum(p[0] for p in pts) / n
        cy = sum(p[1] for p in pts) / n
        num += sum((p[0] - cx) ** 2 + (p[1] - cy) ** 2 for p in pts)
        den += n - 1
    if den == 0:
        return 0.0
    return math.sqrt(num / (2 * den))


def s_dbw(clusters: dict[str, list[tuple[float, float]]]) -> float:
    """Halkidi's validity index: average scattering plus inter-cluster
    density; lower is better."""
    names = sorted(clusters)
    c = len(names)
    if c == 0:
        return 0.0
    all_pts = [p for pts in clusters.values() for p in pts]

    def variance(pts) -> tuple[float, float]:
        n = len(pts)
        cx = sum(p[0] for p in pts) / n
        cy = sum(p[1] for p in pts) / n
        vx = sum((p[0] - cx) ** 2 for p in pts) / n
        vy = sum((p[1] - cy) ** 2 for p in pts) / n
        return vx, vy

    def centroid(pts) -> tuple[float, float]:
        n = len(pts)
        return (sum(p[0] for p in pts) / n, sum(p[1] for p in pts) / n)

    sigma_all = math.hypot(*variance(all_pts)) if len(all_pts) > 1 else 0.0
    sigmas = {name: math.hypot(*variance(clusters[name])) for name in names}
    scat = (sum(sigmas[n] / sigma_all for n in names) / c
            if sigma_all > 0 else 0.0)

    if c < 2:
        return scat
    avg_std = math.sqrt(sum(sigmas[n] for n in names) / c)

    def density(point, pts) -> int:
        return sum(1 for p in pts
                   if math.hypot(p[0] - point[0], p[1] - point[1]) <= avg_std)

    dens = 0.0
    pairs = 0
    for i, a in enumerate(names):
        for b in names[i + 1:]:
            pa, pb = clusters[a], clusters[b]
            ca, cb = centroid(pa), centroid(pb)
            mid = ((ca[0] + cb[0]) / 2, (ca[1] + cb[1]) / 2)
            union = pa + pb
            denom = max(density(ca, union), density(cb, union))
            if denom > 0:
                dens += density(mid, union) / denom
            pairs += 1
    return scat + dens / pairs


def monitor(h: ConceptHierarchy, proj: Projection2D, qt: QuadTree,
            store: EmbeddingStore,
            tm_metrics: dict[str, float] | None = None) -> QualityReport:
    clusters = _cluster_positions(h, proj)
    per_cluster: dict[str, dict[str, float]] = {}
    for cw, pts in clusters.items():
        n = len(pts)
        cx = sum(p[0] for p in pts) / n
        cy = sum(p[1] for p in pts) / n
        intra = sum((p[0] - cx) ** 2 + (p[1] - cy) ** 2 for p in pts) / n
        others = [p for name, ps in clusters.items() if name != cw for p in ps]
        if others:
            ox = sum(p[0] for p in others) / len(others)
            oy = sum(p[1] for p in others) / len(others)
            inter = (cx - ox) ** 2 + (cy - oy) ** 2
        else:
            inter = 0.0
        per_cluster[cw] = {
            "size": float(n),
            "density": n / (intra + 1e-9),
            "intra_variance": intra,
            "inter_variance": inter,
        }

    words: dict[str, WordQuality] = {}
    for cw, concept in h.concepts.items():
        children = concept.descriptor_words()
        store.ensure([cw] + children)
        child_sims = [store.cosine(cw, w) for w in children]
        words[cw] = WordQuality(
            word=cw, parent=None,
            neighborhood_count=len(children),
            sim_to_parent=1.0,
            sim_to_children_mean=(sum(child_sims) / len(child_sims)
                                  if child_sims else 0.0),
            spatial_dist_to_parent=0.0,
        )
        cpos = proj.coords.get(cw)
        for w in children:
            wpos = proj.coords.get(w)
            dist = (math.hypot(wpos[0] - cpos[0], wpos[1] - cpos[1])
                    if wpos and cpos else 0.0)
            count = 0
            if wpos is not None:
                count = len(qt.knn(wpos, 6, exclude={w}))
            words[w] = WordQuality(
                word=w, parent=cw,
                neighborhood_count=count,
                sim_to_parent=store.cosine(w, cw),
                sim_to_children_mean=0.0,
                spatial_dist_to_parent=dist,
            )
    return QualityReport(
        rmsstd=rmsstd(clusters),
        s_dbw=s_dbw(clusters),
        clusters=per_cluster,
        words=words,
        tm_metrics=dict(tm_metrics or {}),
    )


@dataclass
class Recommendation:
    word: str
    action: RefinementAction
    impact: float
    rationale: str

    def focus_rect(self, proj: Projection2D,
                   pad: float = 0.08) -> tuple[float, float, float, float]:
        pts = [proj.coords[w] for w in self.action.targets if w in proj.coords]
        if self.action.destination and self.action.destination in proj.coords:
            pts.append(proj.coords[self.action.destination])
        if not pts:
            return (0.0, 0.0, 1.0, 1.0)
        xs = [p[0] for p in pts]
        ys = [p[1] for p in pts]
        return (min(xs) - pad, min(ys) - pad, max(xs) + pad, max(ys) + pad)


# decision-tree thresholds
REASSIGN_GAIN = 0.2
SWAP_GAIN = 0.1
MERGE_SIM = 0.6
WEAK_PARENT_SIM = 0.2
BADNESS_WEIGHTS = (0.4, 0.4, 0.2)


def _decide_action(word: str, wq: WordQuality, h: ConceptHierarchy,
                   store: EmbeddingStore, tfidf_rank: float,
                   eps_neighborhood: int,
                   conflicts: set[str]) -> tuple[RefinementAction, str] | None:
    level = h.level_of(word)
    if level == "CONCEPT":
        concept = h.concepts[word]
        if len(concept.descriptors) < eps_neighborhood:
            neighbor = _most_similar_concept(word, h, store)
            if neighbor is not None and store.cosine(word, neighbor) >= MERGE_SIM:
                return (RefinementAction(ActionKind.MERGE, [word, neighbor]),
                        "small concept near a similar concept")
        return None

    if level == "DESCRIPTOR":
        parent = wq.parent
        alt = _most_similar_concept(word, h, store, exclude={parent})
        if alt is not None and (store.cosine(word, alt) - wq.sim_to_parent
                                > REASSIGN_GAIN):
            return (RefinementAction(ActionKind.REASSIGN_PARENT, [word],
                                     destination=alt),
                    "more similar to another concept")
        members = h.concepts[parent].descriptor_words()
        store.ensure(members + [word, parent])
        others = [m for m in members if m != word]
        if others:
            mine = sum(store.cosine(word, m) for m in others) / len(others)
            parents = sum(store.cosine(parent, m) for m in others) / len(others)
            if mine - parents > SWAP_GAIN:
                return (RefinementAction(ActionKind.SWAP, [parent],
                                         destination=word),
                        "descriptor fits the cluster better than its concept")
        if wq.sim_to_parent < WEAK_PARENT_SIM:
            return (RefinementAction(ActionKind.DEMOTE, [word]),
                    "weak similarity to parent")
        return None

    # base word: promote when it has enough similar unowned neighbors
    if tfidf_rank >= 0.75:
        unowned = sorted(h.base_words - {word})
        store.ensure([word] + unowned)
        similar = [w for w in unowned
                   if store.cosine(word, w) >= MERGE_SIM]
        if len(similar) >= eps_neighborhood:
            return (RefinementAction(
                ActionKind.CREATE_CONCEPT_FROM_SELECTION,
                [word] + similar[:eps_neighborhood]),
                "salient base word with a coherent neighborhood")
    return None


def build_queue(report: QualityReport, stats: CorpusStats,
                h: ConceptHierarchy, store: EmbeddingStore,
                proj: Projection2D, qt: QuadTree,
                config: Config = DEFAULTS,
                suppressed: set[str] = frozenset()) -> list[Recommendation]:
    """Top-50 tf-idf words ranked by badness x salience, each with the
    action chosen by the decision tree."""
    tfidf = corpus_tfidf(stats)
    pool = sorted(tfidf, key=lambda w: (-tfidf[w], w))[:config.recommendation_pool]
    if not pool:
        return []
    max_tfidf = max(tfidf[w] for w in pool) or 1.0
    ranks = {w: 1.0 - i / max(len(tfidf), 1)
             for i, w in enumerate(sorted(tfidf, key=lambda w: (-tfidf[w], w)))}
    from .layout import color_conflicts
    conflicts = color_conflicts(h, proj, qt)
    max_dist = max((wq.spatial_dist_to_parent
                    for wq in report.words.values()), default=0.0) or 1.0

    recs: list[Recommendation] = []
    for word in pool:
        if word in suppressed or word not in h.all_words():
            continue
        wq = report.words.get(word)
        level = h.level_of(word)
        sim_term = 1.0 - (wq.sim_to_parent if wq else 1.0)
        dist_term = (wq.spatial_dist_to_parent / max_dist) if wq else 0.0
        conflict_term = 1.0 if word in conflicts else 0.0
        w1, w2, w3 = BADNESS_WEIGHTS
        badness = w1 * sim_term + w2 * dist_term + w3 * conflict_term
        # high-tf-idf words belong high in the hierarchy and vice versa
        rank = ranks.get(word, 0.0)
        if rank >= 0.75 and level == "BASE":
            badness += 0.1
        elif rank < 0.25 and level == "CONCEPT":
            badness += 0.1
        decided = _decide_action(
            word, wq or WordQuality(word, None, 0, 1.0, 0.0, 0.0),
            h, store, rank, config.eps_neighborhood, conflicts)
        if decided is None:
            continue
        action, rationale = decided
        impact = badness * (tfidf[word] / max_tfidf)
        recs.append(Recommendation(word, action, impact, rationale))
    recs.sort(key=lambda r: (-r.impact, r.word))
    return recs[:config.recommendation_pool]


@dataclass
class TourState:
    queue: list[Recommendation]
    suppressed: set[str] = field(default_factory=set)


def step_tour(state: TourState, verdict: str, h: ConceptHierarchy,
              store: EmbeddingStore, weights: WeightStore,
              rebuild, proj: Projection2D | None = None
              ) -> tuple[ConceptHierarchy,
                         Recommendation | None,
                         tuple[float, float, float, float] | None]:
    """Advance the guided tour. `rebuild` is called with the new hierarchy
    after an accepted action and must return a fresh queue."""
    if not state.queue:
        raise EmptyQueue("no recommendations left")
    current = state.queue[0]
    if verdict == "accept":
        h = apply(current.action, h, store, weights)
        state.queue = [r for r in rebuild(h) if r.word not in state.suppressed]
    elif verdict == "reject":
        state.suppressed.add(current.word)
        state.queue = state.queue[1:]
    else:
        raise ValueError(f"unknown verdict {verdict!r}")
    nxt = state.queue[0] if state.queue else None
    focus = nxt.focus_rect(proj) if nxt is not None and proj is not None else None
    return h, nxt, focus
