"""Concept-anchored t-SNE projection and projection input assembly.

Two-pass scheme: a free run fixes concept anchor positions, then the
full run re-embeds every word while clamping concepts to their anchors
after each gradient step. Exact gradients are used for small point sets;
a Barnes-Hut approximation of the repulsive term kicks in above
EXACT_LIMIT points.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .config import Config, DEFAULTS
from .conceptgen import ConceptVector, Descriptor, Provenance
from .corpus import Document, top_keywords
from .embeddings import EmbeddingStore
from .errors import ConvergenceFailure

EXACT_LIMIT = 500
EARLY_EXAGGERATION = 12.0
EXAGGERATION_STOP = 250
MOMENTUM_SWITCH = 250
ANCHOR_SCALE = 32.0  # power of two: scaling in and out is bit-exact


@dataclass
class TsneParams:
    perplexity: float = 5.0
    theta: float = 0.5
    iterations: int = 5000
    learning_rate: float = 200.0
    seed: int = 0

    @classmethod
    def from_config(cls, config: Config) -> "TsneParams":
        return cls(config.perplexity, config.theta, config.iterations,
                   config.learning_rate, config.seed)


@dataclass
class Projection2D:
    coords: dict[str, tuple[float, float]]
    anchors: dict[str, tuple[float, float]] = field(default_factory=dict)
    kl_trace: dict[int, float] = field(default_factory=dict)

    def export_json(self, path: str | Path) -> None:
        xs = [p[0] for p in self.coords.values()]
        ys = [p[1] for p in self.coords.values()]
        sx = max(max(xs) - min(xs), 1e-12)
        sy = max(max(ys) - min(ys), 1e-12)
        data = {
            w: [(x - min(xs)) / sx, (y - min(ys)) / sy]
            for w, (x, y) in self.coords.items()
        }
        Path(path).write_text(json.dumps(data, indent=1))


def _pairwise_sq_dists(x: np.ndarray) -> np.ndarray:
    sums = np.sum(x * x, axis=1)
    d = sums[:, None] + sums[None, :] - 2.0 * (x @ x.T)
    np.fill_diagonal(d, 0.0)
    return np.maximum(d, 0.0)


def _binary_search_beta(dist_row: np.ndarray, perplexity: float) -> np.ndarray:
    """Conditional probabilities for one point at the target entropy."""
    target = math.log(perplexity)
    beta, beta_min, beta_max = 1.0, -math.inf, math.inf
    p = np.zeros_like(dist_row)
    for _ in range(64):
        p = np.exp(-dist_row * beta)
        psum = p.sum()
        if psum <= 0:
            h = 0.0
            p = np.zeros_like(dist_row)
        else:
            h = math.log(psum) + beta * float(np.sum(dist_row * p)) / psum
            p = p / psum
        diff = h - target
        if abs(diff) < 1e-7:
            break
        if diff > 0:
            beta_min = beta
            beta = beta * 2 if beta_max == math.inf else (beta + beta_max) / 2
        else:
            beta_max = beta
            beta = beta / 2 if beta_min == -math.inf else (beta + beta_min) / 2
    return p


def _joint_p(x: np.ndarray, perplexity: float) -> np.ndarray:
    n = x.shape[0]
    d = _pairwise_sq_dists(x)
    p = np.zeros((n, n))
    idx = np.arange(n)
    for i in range(n):
        mask = idx != i
        p[i, mask] = _binary_search_beta(d[i, mask], min(perplexity, n - 1))
    p = (p + p.T) / (2.0 * n)
    return np.maximum(p, 1e-12)


class _BHNode:
    __slots__ = ("x", "y", "size", "children", "com", "count", "point_index")

    def __init__(self, x, y, size):
        self.x, self.y, self.size = x, y, size
        self.children = None
        self.com = np.zeros(2)
        self.count = 0
        self.point_index = -1


def _bh_build(y: np.ndarray) -> _BHNode:
    x0, y0 = y.min(axis=0)
    size = float(max(y[:, 0].max() - x0, y[:, 1].max() - y0)) * (1 + 1e-9) + 1e-9
    root = _BHNode(float(x0), float(y0), size)
    for i in range(y.shape[0]):
        node = root
        depth = 0
        while True:
            node.com = (node.com * node.count + y[i]) / (node.count + 1)
            node.count += 1
            if node.children is None:
                if node.point_index < 0:
                    node.point_index = i
                    break
                if depth > 40 or np.allclose(y[node.point_index], y[i]):
                    break  # coincident: fold into this cell's mass only
                old = node.point_index
                node.point_index = -1
                half = node.size / 2
                node.children = [
                    _BHNode(node.x, node.y, half),
                    _BHNode(node.x + half, node.y, half),
                    _BHNode(node.x, node.y + half, half),
                    _BHNode(node.x + half, node.y + half, half),
                ]
                child = node.children[_bh_quadrant(node, y[old])]
                child.com = y[old].copy()
                child.count = 1
                child.point_index = old
            node = node.children[_bh_quadrant(node, y[i])]
            depth += 1
    return root


def _bh_quadrant(node: _BHNode, p: np.ndarray) -> int:
    half = node.size / 2
    return (2 if p[1] >= node.y + half else 0) + (1 if p[0] >= node.x + half else 0)


def _bh_repulsion(root: _BHNode, y: np.ndarray, theta: float):
    n = y.shape[0]
    forces = np.zeros_like(y)
    z_total = 0.0
    theta2 = theta * theta
    for i in range(n):
        stack = [root]
        acc = np.zeros(2)
        z = 0.0
        while stack:
            node = stack.pop()
            if node.count == 0:
                continue
            delta = y[i] - node.com
            d2 = float(delta @ delta)
            if node.children is None or (node.size * node.size) < theta2 * max(d2, 1e-12):
                mult = node.count
                if node.point_index == i or (node.children is None and d2 == 0.0):
                    mult -= 1  # drop self-interaction
                if mult <= 0:
                    continue
                q = 1.0 / (1.0 + d2)
                z += mult * q
                acc += mult * q * q * delta
            else:
                stack.extend(node.children)
        forces[i] = acc
        z_total += z
    return forces, z_total


def _run_tsne(x: np.ndarray, params: TsneParams, y0: np.ndarray,
              anchor_idx: np.ndarray | None = None,
              anchor_pos: np.ndarray | None = None,
              kl_milestones: tuple[int, ...] = (50,),
              progress=None) -> tuple[np.ndarray, dict[int, float]]:
    n = x.shape[0]
    exact = n <= EXACT_LIMIT
    p = _joint_p(x, params.perplexity)
    if not exact:
        # sparsify attraction to the significant entries
        keep = max(3, int(3 * params.perplexity))
        thresh = np.sort(p, axis=1)[:, -keep][:, None]
        p_sparse = np.where(p >= thresh, p, 0.0)
        p = np.maximum((p_sparse + p_sparse.T) / 2.0, 0.0)
        psum = p.sum()
        if psum > 0:
            p = p / psum * 1.0
        p = np.maximum(p, 0.0)

    # small point sets blow apart under the full learning rate, so cap
    # the step size by the usual n / early-exaggeration heuristic
    lr = min(params.learning_rate, max(n / EARLY_EXAGGERATION, 2.0))

    y = y0.copy()
    velocity = np.zeros_like(y)
    gains = np.ones_like(y)
    kl_trace: dict[int, float] = {}

    def exact_kl(py, yy):
        num = 1.0 / (1.0 + _pairwise_sq_dists(yy))
        np.fill_diagonal(num, 0.0)
        q = np.maximum(num / num.sum(), 1e-12)
        pp = np.maximum(py, 1e-12)
        return float(np.sum(pp * (np.log(pp) - np.log(q))))

    for it in range(1, params.iterations + 1):
        exaggeration = EARLY_EXAGGERATION if it <= EXAGGERATION_STOP else 1.0
        if exact:
            num = 1.0 / (1.0 + _pairwise_sq_dists(y))
            np.fill_diagonal(num, 0.0)
            q = np.maximum(num / num.sum(), 1e-12)
            pq = (exaggeration * p - q) * num
            grad = 4.0 * (np.diag(pq.sum(axis=1)) - pq) @ y
        else:
            # attraction from sparse p, repulsion via Barnes-Hut
            num_sparse = 1.0 / (1.0 + _pairwise_sq_dists(y))
            attr_w = exaggeration * p * num_sparse
            attr = (np.diag(attr_w.sum(axis=1)) - attr_w) @ y
            root = _bh_build(y)
            rep, z = _bh_repulsion(root, y, params.theta)
            grad = 4.0 * (attr - rep / max(z, 1e-12))

        momentum = 0.5 if it <= MOMENTUM_SWITCH else 0.8
        inc = np.sign(grad) != np.sign(velocity)
        gains = np.where(inc, gains + 0.2, gains * 0.8)
        gains = np.maximum(gains, 0.01)
        velocity = momentum * velocity - lr * gains * grad
        y = y + velocity
        if anchor_idx is not None:
            y[anchor_idx] = anchor_pos
            velocity[anchor_idx] = 0.0
        if not np.all(np.isfinite(y)):
            raise ConvergenceFailure(f"non-finite embedding at iteration {it}")
        if it in kl_milestones or it == params.iterations:
            kl = exact_kl(p, y)
            if not math.isfinite(kl):
                raise ConvergenceFailure(f"non-finite KL at iteration {it}")
            kl_trace[it] = kl
        if progress is not None:
            progress(it, params.iterations)
    return y, kl_trace


def initial_anchor_pass(vectors: dict[str, np.ndarray],
                        concept_words: list[str],
                        params: TsneParams) -> dict[str, tuple[float, float]]:
    """Free t-SNE run; keep only the concept coordinates, min-max mapped
    to the unit square."""
    words = sorted(vectors)
    x = np.vstack([vectors[w] for w in words])
    rng = np.random.default_rng(params.seed)
    y0 = rng.standard_normal((len(words), 2)) * 1e-4
    y, _ = _run_tsne(x, params, y0)
    lo = y.min(axis=0)
    span = np.maximum(y.max(axis=0) - lo, 1e-12)
    unit = (y - lo) / span
    index = {w: i for i, w in enumerate(words)}
    return {
        c: (float(unit[index[c], 0]), float(unit[index[c], 1]))
        for c in concept_words if c in index
    }


def tsne_project(vectors: dict[str, np.ndarray],
                 anchors: dict[str, tuple[float, float]],
                 params: TsneParams,
                 progress=None) -> Projection2D:
    """Anchored run: anchor words are clamped to their fixed coordinates
    after every iteration and come out bit-exact."""
    words = sorted(vectors)
    index = {w: i for i, w in enumerate(words)}
    x = np.vstack([vectors[w] for w in words])
    rng = np.random.default_rng(params.seed)
    y0 = rng.uniform(0.0, ANCHOR_SCALE, size=(len(words), 2))

    anchor_words = [w for w in sorted(anchors) if w in index]
    anchor_idx = np.array([index[w] for w in anchor_words], dtype=int)
    anchor_pos = np.array([
        [anchors[w][0] * ANCHOR_SCALE, anchors[w][1] * ANCHOR_SCALE]
        for w in anchor_words
    ]) if anchor_words else None
    if anchor_pos is not None:
        y0[anchor_idx] = anchor_pos

    y, kl_trace = _run_tsne(
        x, params, y0,
        anchor_idx=anchor_idx if anchor_words else None,
        anchor_pos=anchor_pos,
        progress=progress,
    )
    y = y / ANCHOR_SCALE
    coords = {w: (float(y[i, 0]), float(y[i, 1])) for w, i in index.items()}
    for w in anchor_words:
        coords[w] = (anchors[w][0], anchors[w][1])
    return Projection2D(coords=coords, anchors=dict(anchors), kl_trace=kl_trace)


def gather_projection_input(concepts: list[ConceptVector],
                            topic_keywords: list[str],
                            docs: list[Document],
                            store: EmbeddingStore,
                            config: Config = DEFAULTS
                            ) -> tuple[list[ConceptVector], list[str]]:
    """Combine concept vectors, corpus/topic keywords and per-document top
    keywords; the latter become topic descriptors of their closest concept."""
    concepts = [c.copy() for c in concepts]
    by_word = {c.concept_word: c for c in concepts}
    store.ensure([c.concept_word for c in concepts])

    words: set[str] = set(by_word)
    for c in concepts:
        words.update(c.words())
    words.update(topic_keywords)

    concept_order = sorted(by_word)
    for doc in docs:
        for kw in top_keywords(doc, config.doc_keywords_for_concepts):
            words.add(kw)
            if kw in by_word:
                continue
            store.ensure([kw])
            # ties go to the lexicographically earliest concept
            best_sim = max(store.cosine(kw, c) for c in concept_order)
            best = next(c for c in concept_order
                        if store.cosine(kw, c) == best_sim)
            host = by_word[best]
            if kw not in host.words():
                host.descriptors.append(
                    Descriptor(kw, 0.0, Provenance.TOPIC_DESCRIPTOR))
    store.ensure(sorted(words))
    return concepts, sorted(words)
