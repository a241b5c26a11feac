"""End-to-end acceptance checks, one per shipped guarantee.

Each test prints a single PASS line on success (run with -s or -rA to
see them); a failure reads as FAIL through pytest itself.
"""

import copy
import math
import random
import time

import numpy as np
import pytest

from conceptspace.config import DEFAULTS, Config
from conceptspace.corpus import load_corpus
from conceptspace.embeddings import (EmbeddingStore, HierarchyLevel,
                                     WeightStore)
from conceptspace.errors import LastConcept, UnknownTarget
from conceptspace.hierarchy import (BASE_NEIGHBORHOOD, SUPER_FACTOR,
                                    AbstractionParams, build_hierarchy,
                                    rebuild_super_concepts)
from conceptspace.layout import polygon_area, voronoi
from conceptspace.quadtree import QuadTree
from conceptspace.refinement import (ActionKind, RefinementAction, apply,
                                     build_queue, monitor, s_dbw)
from conceptspace.session import Session, hierarchy_hash
from conceptspace.spatialization import TsneParams, tsne_project
from conceptspace.topicmodel import (Spike, TopicCase, TopicGlyph, classify,
                                     glyph, train)
from conceptspace.corpus import Document

from conftest import (MED_GROUP, TAX_GROUP, assert_hierarchy_invariants,
                      brute_force_knn, random_valid_action)


def _ok(line):
    print(f"PASS {line}")


# ----------------------------------------------------------------------
def test_parameter_fidelity():
    assert DEFAULTS.eps_similarity == 0.4
    assert DEFAULTS.eps_neighborhood == 6
    assert BASE_NEIGHBORHOOD == 6
    assert DEFAULTS.super_factor == 1.5
    assert SUPER_FACTOR == 1.5
    assert DEFAULTS.perplexity == 5.0
    assert DEFAULTS.theta == 0.5
    assert DEFAULTS.iterations == 5000
    assert TsneParams().perplexity == 5.0
    assert TsneParams().theta == 0.5
    assert TsneParams().iterations == 5000
    assert DEFAULTS.top_doc_keywords == 15
    assert DEFAULTS.top_topic_keywords == 15
    assert DEFAULTS.doc_keywords_for_concepts == 20
    assert DEFAULTS.recommendation_pool == 50
    _ok("parameter fidelity: all tuning constants at their documented values")


# ----------------------------------------------------------------------
def _hundred_word_fixture():
    rng = np.random.default_rng(42)
    centers = rng.standard_normal((5, 12)) * 4
    vectors = {}
    for c in range(5):
        for i in range(20):
            v = centers[c] + rng.standard_normal(12) * 0.2
            vectors[f"g{c}w{i:02d}"] = v / np.linalg.norm(v)
    return vectors


def test_anchored_tsne():
    vectors = _hundred_word_fixture()
    assert len(vectors) == 100
    anchors = {f"g{c}w00": (0.1 + 0.2 * c, 0.3 + 0.1 * (c % 2))
               for c in range(5)}
    params = TsneParams(perplexity=5.0, theta=0.5, iterations=5000,
                        learning_rate=200.0, seed=0)
    start = time.time()
    proj = tsne_project(vectors, anchors, params)
    elapsed = time.time() - start
    assert elapsed < 60.0, f"took {elapsed:.1f}s"
    for w, pos in anchors.items():
        assert proj.coords[w] == pos, "anchor moved"
    assert proj.kl_trace[5000] < proj.kl_trace[50]
    again = tsne_project(vectors, anchors, params)
    assert again.coords == proj.coords
    _ok(f"anchored t-SNE: 100 words, 5000 iterations in {elapsed:.1f}s, "
        f"anchors bit-exact, KL {proj.kl_trace[50]:.3f} -> "
        f"{proj.kl_trace[5000]:.3f}, seed-deterministic")


# ----------------------------------------------------------------------
def test_quadtree_oracle():
    rng = random.Random(1234)
    coords = {f"w{i:04d}": (rng.uniform(0, 1), rng.uniform(0, 1))
              for i in range(990)}
    # grid points guarantee exact distance ties
    for i, (x, y) in enumerate([(0.25, 0.25), (0.75, 0.25), (0.25, 0.75),
                                (0.75, 0.75), (0.5, 0.25), (0.5, 0.75),
                                (0.25, 0.5), (0.75, 0.5), (0.5, 0.5),
                                (0.5, 0.5)]):
        coords[f"t{i:04d}"] = (x, y)
    assert len(coords) == 1000
    qt = QuadTree(coords)
    queries = [(rng.uniform(0, 1), rng.uniform(0, 1)) for _ in range(99)]
    queries.append((0.5, 0.5))  # sits on the tie grid
    for q in queries:
        for k in (1, 6, 15):
            got = qt.knn(q, k)
            want = brute_force_knn(coords, q, k)
            assert [w for w, _ in got] == [w for w, _ in want], (q, k)
    _ok("quadtree: 1000 points, 100 queries, k in {1, 6, 15} all exact, "
        "ties broken lexicographically")


# ----------------------------------------------------------------------
def test_voronoi_oracle():
    rng = random.Random(77)
    sites = {f"s{i:03d}": (rng.uniform(0, 1), rng.uniform(0, 1))
             for i in range(200)}
    start = time.time()
    diagram = voronoi(sites)
    names = sorted(sites)
    pos = np.array([sites[n] for n in names])
    queries = np.random.default_rng(78).uniform(0, 1, size=(10_000, 2))
    d = np.linalg.norm(pos[None, :, :] - queries[:, None, :], axis=2)
    order = np.argsort(d, axis=1)
    nearest = order[:, 0]
    margin = (d[np.arange(len(queries)), order[:, 1]]
              - d[np.arange(len(queries)), nearest])

    def point_in_poly(poly, q):
        inside = False
        n = len(poly)
        for i in range(n):
            (x0, y0), (x1, y1) = poly[i], poly[(i + 1) % n]
            if (y0 > q[1]) != (y1 > q[1]):
                xq = x0 + (q[1] - y0) / (y1 - y0) * (x1 - x0)
                if q[0] < xq:
                    inside = not inside
        return inside

    checked = 0
    for qi in range(len(queries)):
        if margin[qi] < 1e-6:
            continue  # epsilon-tie: cell ownership genuinely ambiguous
        name = names[nearest[qi]]
        assert point_in_poly(diagram.cells[name], tuple(queries[qi])), name
        checked += 1
    elapsed = time.time() - start
    assert elapsed < 5.0, f"took {elapsed:.1f}s"
    area = sum(polygon_area(p) for p in diagram.cells.values())
    assert area == pytest.approx(1.0, abs=1e-6)
    _ok(f"voronoi: 200 sites, {checked}/10000 non-tie queries all owned by "
        f"their nearest site in {elapsed:.1f}s")


# ----------------------------------------------------------------------
def test_hierarchy_invariants_under_random_actions(
        toy_hierarchy, toy_store):
    h0, proj, qt = toy_hierarchy
    params = AbstractionParams()
    total = 0
    for seed in range(50):
        rng = random.Random(seed)
        cur = h0
        weights = WeightStore()
        applied = 0
        while applied < 200:
            action = random_valid_action(cur, rng)
            if action is None:
                break
            try:
                cur = apply(action, cur, toy_store, weights)
            except (LastConcept, UnknownTarget):
                continue
            rebuild_super_concepts(cur, proj, qt, toy_store, params)
            assert_hierarchy_invariants(cur)
            applied += 1
        total += applied
    assert total == 50 * 200
    _ok(f"hierarchy invariants: {total} random valid actions over 50 seeds, "
        "partition and ownership invariants held throughout")


# ----------------------------------------------------------------------
def test_toy_reproduction(toy_hierarchy):
    h, proj, qt = toy_hierarchy
    assert set(h.concepts["tax"].descriptor_words()) == set(TAX_GROUP)
    assert set(h.concepts["medic"].descriptor_words()) == set(MED_GROUP)
    assert h.level_of("system") == "BASE"
    _ok("toy reproduction: taxes={cut, deductions, spending, company}, "
        "medical={healthcare, health, care, affordable}, 'system' excluded")


# ----------------------------------------------------------------------
def test_glyph_formula_and_cases(toy_store):
    from conceptspace.hierarchy import Concept, ConceptHierarchy
    from conceptspace.spatialization import Projection2D
    h = ConceptHierarchy()
    h.concepts["tax"] = Concept("tax")
    h.concepts["medic"] = Concept("medic")
    rng = random.Random(99)
    checked = 0
    for _ in range(500):  # two spikes each: 1000 (sim, dist) pairs
        proj = Projection2D({"tax": (rng.random(), rng.random()),
                             "medic": (rng.random(), rng.random())})
        pos = (rng.random(), rng.random())
        vec = {"tax": rng.random() + 0.05, "care": rng.random()}
        g = glyph("t", vec, pos, h, proj, toy_store)
        for s in g.spikes:
            cx, cy = proj.coords[s.concept]
            dist = math.hypot(cx - pos[0], cy - pos[1])
            assert abs(s.dist - dist) < 1e-9
            assert abs(s.endpoint_distance - s.sim * s.dist) < 1e-9
            assert abs(s.opacity - s.sim) < 1e-9
            checked += 1
    assert checked == 1000

    def mk(spikes):
        g = TopicGlyph("t", (0.5, 0.5))
        for i, (sim, dist, d) in enumerate(spikes):
            g.spikes.append(Spike(f"c{i}", sim, dist, sim * dist, sim, d))
        return g

    cases = {
        TopicCase.UNREPRESENTED: mk([(0.1, 0.2, (1, 0))]),
        TopicCase.SINGLE_CONCEPT: mk([(0.9, 0.2, (1, 0)), (0.1, 0.2, (0, 1))]),
        TopicCase.MULTI_CONCEPT: mk([(0.9, 0.05, (1, 0)), (0.8, 0.05, (0, 1))]),
        TopicCase.CONCEPT_INCOHERENT: mk([(0.9, 0.45, (1, 0)),
                                          (0.8, 0.45, (-1, 0))]),
    }
    for want, g in cases.items():
        assert classify(g, sigma_related=0.5, rho=0.25) is want
    _ok("topic glyphs: endpoint = sim x dist and opacity = sim on 1000 "
        "random pairs at 1e-9; all four diagnosis cases exercised")


# ----------------------------------------------------------------------
def test_guided_refinement_efficacy(debate_jsonl, toy_store, toy_hierarchy):
    docs, stats = load_corpus(debate_jsonl)
    toy_store.ensure(sorted(stats.vocabulary))
    h, proj, qt = toy_hierarchy
    broken = apply(RefinementAction(ActionKind.REASSIGN_PARENT, ["care"],
                                    destination="tax"), h, toy_store)

    def spatial_clusters(hh):
        return {cw: [proj.coords[w]
                     for w in [cw] + hh.concepts[cw].descriptor_words()
                     if w in proj.coords]
                for cw in hh.concepts}

    report = monitor(broken, proj, qt, toy_store)
    queue = build_queue(report, stats, broken, toy_store, proj, qt)
    assert queue
    top = queue[0]
    assert top.word == "care"
    assert top.action.kind in (ActionKind.REASSIGN_PARENT, ActionKind.SWAP)
    fixed = apply(top.action, broken, toy_store)
    before, after = s_dbw(spatial_clusters(broken)), s_dbw(spatial_clusters(fixed))
    assert after < before
    _ok(f"guided refinement: top recommendation is corrective "
        f"{top.action.kind.value} on 'care'; accepting drops S_Dbw "
        f"{before:.3f} -> {after:.3f}")


# ----------------------------------------------------------------------
def test_teach_the_model_loop():
    def mk(doc_id, scores):
        return Document(doc_id, None, "", list(scores), dict(scores))

    docs = [mk("a", {"tax": 3.0, "cut": 2.0}),
            mk("b", {"care": 3.0, "health": 2.0}),
            mk("c", {"tax": 1.0, "care": 1.2})]
    before = train(docs, WeightStore(), tau=0.3)
    assert before.assignments["c"] == before.assignments["b"]

    def promoted():
        weights = WeightStore()
        weights.set_level("tax", HierarchyLevel.CONCEPT)
        return train(docs, weights, tau=0.3)

    after = promoted()
    assert after.assignments["c"] == after.assignments["a"]
    assert promoted().hash() == after.hash()
    _ok("teach the model: promoting 'tax' flips document c from the care "
        "topic to the tax topic, deterministically")


# ----------------------------------------------------------------------
def test_determinism_and_replay(tmp_path):
    from conftest import _write_vectors, make_toy_vectors, write_debate_jsonl
    corpus = write_debate_jsonl(tmp_path / "debate.jsonl")
    vectors = _write_vectors(tmp_path / "toy.vec", make_toy_vectors())
    config = Config(iterations=500)

    a = Session.create(corpus, vectors, config)
    b = Session.create(corpus, vectors, config)
    assert a.topic_model.hash() == b.topic_model.hash()
    assert hierarchy_hash(a.hierarchy) == hierarchy_hash(b.hierarchy)

    initial = copy.deepcopy(a.hierarchy)
    descriptor = sorted(a.hierarchy.all_descriptors())[0]
    a.apply_action(RefinementAction(ActionKind.DEMOTE, [descriptor]))
    concept = sorted(a.hierarchy.concepts)[0]
    a.apply_action(RefinementAction(ActionKind.PROMOTE, [descriptor],
                                    destination=concept))
    a.apply_action(RefinementAction(
        ActionKind.REASSIGN_PARENT, [descriptor],
        destination=sorted(a.hierarchy.concepts)[-1]))
    replayed = a.replay_log(a.action_log, initial)
    assert replayed == a.action_log[-1]["post_hash"]
    _ok("determinism: identical corpora give identical topic-model and "
        "hierarchy hashes; replaying the action log reproduces the "
        "final hierarchy hash")
