"""Session state: the full pipeline run once at creation, then mutated by
refinement actions and on-demand recomputation jobs."""

from __future__ import annotations

import hashlib
import json
import threading
import time
import uuid
from dataclasses import dataclass, field
from pathlib import Path

from .config import Config, DEFAULTS
from .conceptgen import generate_concepts
from .corpus import corpus_tfidf, load_corpus
from .embeddings import WeightStore, load_embeddings
from .errors import JobAlreadyRunning, LevelOutOfRange
from .hierarchy import (AbstractionParams, ConceptHierarchy, LEVEL_MAX,
                        LEVEL_MIN, build_hierarchy, rebuild_super_concepts)
from .layout import (CanvasObject, assign_colors, export_layout, make_object,
                     reduce_overlap, rescale, voronoi)
from .quadtree import QuadTree
from .refinement import (Recommendation, RefinementAction, TourState, apply,
                         build_queue, monitor)
from .spatialization import (Projection2D, TsneParams, gather_projection_input,
                             initial_anchor_pass, tsne_project)
from .topicmodel import (TopicCase, TopicGlyph, classify, glyph,
                         quality_metrics, reweight_from_concepts, train)


def hierarchy_hash(h: ConceptHierarchy) -> str:
    payload = json.dumps(h.export_json(), sort_keys=True)
    return hashlib.sha256(payload.encode()).hexdigest()


@dataclass
class Job:
    kind: str
    status: str = "running"
    progress: float = 0.0
    thread: threading.Thread | None = None

    def wait(self) -> None:
        if self.thread is not None:
            self.thread.join()


@dataclass
class Session:
    id: str
    config: Config
    docs: list
    stats: object
    store: object
    weights: WeightStore
    concept_vectors: list
    hierarchy: ConceptHierarchy
    projection: Projection2D
    qt: QuadTree
    topic_model: object
    level: int = 0
    generation: int = 1
    job: Job | None = None
    action_log: list[dict] = field(default_factory=list)
    tour: TourState | None = None
    _lock: threading.Lock = field(default_factory=threading.Lock)

    # ------------------------------------------------------------------
    @classmethod
    def create(cls, corpus_source, embedding_source,
               config: Config = DEFAULTS,
               imported_weights: dict | None = None,
               stop_words_path=None) -> "Session":
        docs, stats = load_corpus(corpus_source, stop_words_path, config)
        store = load_embeddings(embedding_source, stats.vocabulary,
                                config.expansion_width)
        weights = WeightStore(config)
        if imported_weights:
            weights.import_learned(imported_weights)
        for doc in docs:
            for w, score in doc.keyword_vector.items():
                wv = weights.get(w)
                wv.base_score = max(wv.base_score, score)

        concepts = generate_concepts(docs, stats, store, config=config)
        concepts, words = gather_projection_input(concepts, [], docs, store,
                                                  config)
        vectors = {w: store.vector(w) for w in words}
        params = TsneParams.from_config(config)
        anchors = initial_anchor_pass(
            vectors, [c.concept_word for c in concepts], params)
        projection = tsne_project(vectors, anchors, params)
        qt = QuadTree(projection.coords)

        abstraction = AbstractionParams(config.eps_similarity,
                                        config.eps_neighborhood,
                                        config.super_factor, level=0)
        hierarchy = build_hierarchy(concepts, projection, qt, store,
                                    abstraction)
        reweight_from_concepts(hierarchy, weights)
        tm = train(docs, weights, config.attach_threshold, config)

        session = cls(
            id=uuid.uuid4().hex[:12], config=config, docs=docs, stats=stats,
            store=store, weights=weights, concept_vectors=concepts,
            hierarchy=hierarchy, projection=projection, qt=qt,
            topic_model=tm,
        )
        return session

    # ------------------------------------------------------------------
    def abstraction_params(self) -> AbstractionParams:
        return AbstractionParams(self.config.eps_similarity,
                                 self.config.eps_neighborhood,
                                 self.config.super_factor, self.level)

    def set_level(self, level: int) -> None:
        if not LEVEL_MIN <= level <= LEVEL_MAX:
            raise LevelOutOfRange(str(level))
        with self._lock:
            self.level = level
            self.hierarchy = build_hierarchy(
                self.concept_vectors, self.projection, self.qt, self.store,
                self.abstraction_params())
            self.generation += 1

    # ------------------------------------------------------------------
    def apply_action(self, action: RefinementAction) -> ConceptHierarchy:
        with self._lock:
            pre = hierarchy_hash(self.hierarchy)
            self.hierarchy = apply(action, self.hierarchy, self.store,
                                   self.weights)
            rebuild_super_concepts(self.hierarchy, self.projection, self.qt,
                                   self.store, self.abstraction_params())
            post = hierarchy_hash(self.hierarchy)
            self.action_log.append({
                "timestamp": time.time(),
                "action": action.to_json(),
                "pre_hash": pre,
                "post_hash": post,
            })
            self.generation += 1
        return self.hierarchy

    def replay_log(self, log: list[dict],
                   initial: ConceptHierarchy) -> str:
        h = initial
        for entry in log:
            h = apply(RefinementAction.from_json(entry["action"]), h,
                      self.store, WeightStore(self.config))
            rebuild_super_concepts(h, self.projection, self.qt, self.store,
                                   self.abstraction_params())
        return hierarchy_hash(h)

    # ------------------------------------------------------------------
    def recompute(self, kind: str) -> Job:
        if self.job is not None and self.job.status == "running":
            raise JobAlreadyRunning(self.job.kind)
        job = Job(kind=kind)

        def progress(done, total):
            job.progress = done / total

        def run():
            try:
                if kind == "tsne":
                    self._recompute_tsne(progress)
                elif kind == "topics":
                    self._recompute_topics(progress)
                else:
                    raise ValueError(f"unknown job kind {kind!r}")
                job.status = "done"
            except Exception as exc:  # surfaced through the jobs endpoint
                job.status = f"failed: {exc}"

        thread = threading.Thread(target=run, daemon=True)
        job.thread = thread
        self.job = job
        thread.start()
        return job

    def _recompute_tsne(self, progress) -> None:
        words = sorted(self.projection.coords)
        self.store.ensure(words)
        vectors = {w: self.store.vector(w) for w in words}
        params = TsneParams.from_config(self.config)
        anchors = {c: self.projection.coords[c]
                   for c in self.hierarchy.concepts
                   if c in self.projection.coords}
        projection = tsne_project(vectors, anchors, params, progress=progress)
        qt = QuadTree(projection.coords)
        with self._lock:
            self.projection = projection
            self.qt = qt
            rebuild_super_concepts(self.hierarchy, self.projection, self.qt,
                                   self.store, self.abstraction_params())
            self.generation += 1

    def _recompute_topics(self, progress) -> None:
        reweight_from_concepts(self.hierarchy, self.weights)
        tm = train(self.docs, self.weights, self.config.attach_threshold,
                   self.config, progress=progress)
        with self._lock:
            self.topic_model = tm
            self.generation += 1

    # ------------------------------------------------------------------
    def search(self, q: str, limit: int = 20) -> list[dict]:
        q = q.lower()
        tfidf = corpus_tfidf(self.stats)
        hits = [w for w in self.stats.vocabulary if w.startswith(q)]
        hits.sort(key=lambda w: (-tfidf.get(w, 0.0), w))
        out = []
        for w in hits[:limit]:
            x, y = self.projection.coords.get(w, (None, None))
            out.append({
                "word": w,
                "x": x, "y": y,
                "level": self.hierarchy.level_of(w),
                "can_add_as_descriptor": self.hierarchy.level_of(w) == "BASE",
            })
        return out

    def xray(self, x: float, y: float, r: float) -> dict[str, list[str]]:
        hits = set(self.qt.radius_query((x, y), r))
        layers: dict[str, list[str]] = {
            "super_concepts": [], "concepts": [], "descriptors": [],
            "base_words": [], "topics": [], "documents": [],
        }
        super_labels = {sc.label for sc in self.hierarchy.super_concepts}
        for w in sorted(hits):
            level = self.hierarchy.level_of(w)
            if w in super_labels:
                layers["super_concepts"].append(w)
            if level == "CONCEPT":
                layers["concepts"].append(w)
            elif level == "DESCRIPTOR":
                layers["descriptors"].append(w)
            else:
                layers["base_words"].append(w)
        for t in self.topic_model.topics:
            pos = self.topic_position(t)
            if pos and (pos[0] - x) ** 2 + (pos[1] - y) ** 2 <= r * r:
                layers["topics"].append(f"topic-{t.id}")
        return layers

    # ------------------------------------------------------------------
    def topic_position(self, topic) -> tuple[float, float] | None:
        total = 0.0
        acc = [0.0, 0.0]
        for w, weight in topic.top_keywords(self.config.top_topic_keywords):
            pos = self.projection.coords.get(w)
            if pos is None or weight <= 0:
                continue
            acc[0] += pos[0] * weight
            acc[1] += pos[1] * weight
            total += weight
        if total == 0:
            return None
        return (acc[0] / total, acc[1] / total)

    def topic_glyphs(self) -> dict[int, TopicGlyph]:
        colors = assign_colors(self.hierarchy, self.projection)
        out = {}
        for t in self.topic_model.topics:
            pos = self.topic_position(t)
            if pos is None:
                continue
            out[t.id] = glyph(f"topic-{t.id}", t.centroid, pos,
                              self.hierarchy, self.projection, self.store,
                              colors)
        return out

    def topic_cases(self) -> dict[int, str]:
        return {tid: classify(g, self.config.sigma_related).value
                for tid, g in self.topic_glyphs().items()}

    # ------------------------------------------------------------------
    def quality(self) -> dict:
        tm_metrics = quality_metrics(self.topic_model, self.docs, self.store,
                                     self.config.top_topic_keywords)
        report = monitor(self.hierarchy, self.projection, self.qt, self.store,
                         tm_metrics)
        return {
            "rmsstd": report.rmsstd,
            "s_dbw": report.s_dbw,
            "clusters": report.clusters,
            "topic_model": tm_metrics,
        }

    def recommendations(self) -> list[Recommendation]:
        report = monitor(self.hierarchy, self.projection, self.qt, self.store)
        suppressed = self.tour.suppressed if self.tour else set()
        queue = build_queue(report, self.stats, self.hierarchy, self.store,
                            self.projection, self.qt, self.config, suppressed)
        if self.tour is None:
            self.tour = TourState(queue)
        else:
            self.tour.queue = queue
        return queue

    # ------------------------------------------------------------------
    def layout_snapshot(self) -> dict:
        norm = rescale(self.projection)
        colors = assign_colors(self.hierarchy, norm)
        super_labels = {sc.label for sc in self.hierarchy.super_concepts}
        objects: list[CanvasObject] = []
        for w, (x, y) in norm.coords.items():
            level = self.hierarchy.level_of(w)
            layer = "SUPER_CONCEPT" if w in super_labels and level == "CONCEPT" \
                else level
            obj = make_object(w, layer if layer != "BASE" else "BASE", x, y)
            obj.color = colors.get(w, "#444444")
            objects.append(obj)
        for t in self.topic_model.topics:
            pos = self.topic_position(t)
            if pos is None:
                continue
            sx = min(max(pos[0], 0.0), 1.0)
            sy = min(max(pos[1], 0.0), 1.0)
            objects.append(make_object(f"topic-{t.id}", "TOPIC", sx, sy))
        objects = reduce_overlap(objects)
        sites = {sc.label: norm.coords[sc.label]
                 for sc in self.hierarchy.super_concepts
                 if sc.label in norm.coords}
        diagram = voronoi(sites) if sites else voronoi(
            {"all": (0.5, 0.5)})
        return export_layout(objects, diagram)

    def state(self, view: str = "concept") -> dict:
        base = {"generation": self.generation, "view": view,
                "level": self.level}
        if view == "topic":
            glyphs = self.topic_glyphs()
            cases = self.topic_cases()
            base["topics"] = self.topic_model.export_json(
                cases, self.config.top_topic_keywords)
            base["glyphs"] = {
                str(tid): {
                    "position": list(g.position),
                    "spikes": [
                        {"concept": s.concept, "sim": s.sim, "dist": s.dist,
                         "endpoint_distance": s.endpoint_distance,
                         "opacity": s.opacity,
                         "direction": list(s.direction), "color": s.color}
                        for s in g.spikes
                    ],
                }
                for tid, g in glyphs.items()
            }
        else:
            base["hierarchy"] = self.hierarchy.export_json()
            base["layout"] = self.layout_snapshot()
        return base

    # ------------------------------------------------------------------
    def save(self, directory) -> None:
        d = Path(directory)
        d.mkdir(parents=True, exist_ok=True)
        (d / "config.json").write_text(json.dumps(self.config.dump(), indent=1))
        self.hierarchy.save(d / "hierarchy.json")
        self.projection.export_json(d / "projection.json")
        self.weights.save(d / "weights.json")
        with open(d / "actions.jsonl", "w") as fh:
            for entry in self.action_log:
                fh.write(json.dumps(entry) + "\n")
