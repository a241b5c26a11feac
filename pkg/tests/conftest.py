import json
import math

import numpy as np
import pytest

from conceptspace.embeddings import EmbeddingStore


DEBATE_DOCS = [
        ("u1", "ROMNEY", "We must cut taxes and tax deductions for companies, "
                         "tax relief means spending less money on taxes."),
        ("u2", "OBAMA", "Medical care and healthcare must be affordable, "
                        "health insurance and medical relief for families."),
        ("u3", "ROMNEY", "Tax cuts create jobs, companies invest when tax "
                         "deductions reward spending on growth."),
        ("u4", "OBAMA", "Affordable healthcare is a right, medical systems "
                        "and health care support every family."),
        ("u5", "MODERATOR", "Gentlemen, the question concerned energy policy "
                            "and oil production in this country."),
        ("u6", "ROMNEY", "Energy independence means oil, gas and coal "
                         "production with renewable energy investment."),
        ("u7", "OBAMA", "Renewable energy like wind and solar will power "
                        "production and reduce oil imports."),
        ("u8", "MODERATOR", "A follow up question about immigration reform "
                            "and border security now."),
]


def write_debate_jsonl(path):
    with open(path, "w") as fh:
        for doc_id, speaker, text in DEBATE_DOCS:
            fh.write(json.dumps({"id": doc_id, "speaker": speaker,
                                 "text": text}) + "\n")
    return path


@pytest.fixture
def debate_jsonl(tmp_path):
    """Small debate-flavored corpus, one utterance per record."""
    return write_debate_jsonl(tmp_path / "debate.jsonl")


def _write_vectors(path, vectors):
    with open(path, "w") as fh:
        for word, vec in vectors.items():
            fh.write(word + " " + " ".join(f"{x:.6f}" for x in vec) + "\n")
    return path


def make_toy_vectors():
    """Two clean semantic groups plus an off-axis 'system' word, stemmed
    forms as produced by the tokenizer."""
    rng = np.random.default_rng(7)

    def around(base, scale=0.12):
        v = np.array(base, dtype=float) + rng.normal(0, scale, 8)
        return v / np.linalg.norm(v)

    tax_axis = [1, 0.2, 0, 0, 0, 0, 0, 0]
    med_axis = [0, 0, 0, 1, 0.2, 0, 0, 0]
    sys_axis = [0, 0, 0, 0, 0, 0, 1, 0.1]
    return {
        "tax": around(tax_axis, 0.0),
        "cut": around(tax_axis),
        "deduct": around(tax_axis),
        "spend": around(tax_axis),
        "compani": around(tax_axis),
        "medic": around(med_axis, 0.0),
        "healthcar": around(med_axis),
        "health": around(med_axis),
        "care": around(med_axis),
        "afford": around(med_axis),
        "system": around(sys_axis, 0.0),
    }


@pytest.fixture
def toy_vectors():
    return make_toy_vectors()


@pytest.fixture
def toy_vector_file(tmp_path, toy_vectors):
    return _write_vectors(tmp_path / "toy.vec", toy_vectors)


TAX_GROUP = ["cut", "deduct", "spend", "compani"]
MED_GROUP = ["healthcar", "health", "care", "afford"]


@pytest.fixture
def toy_layout(toy_vectors):
    """Hand-placed coordinates: two tight groups and 'system' in between."""
    from conceptspace.quadtree import QuadTree
    from conceptspace.spatialization import Projection2D
    coords = {
        "tax": (0.10, 0.10), "cut": (0.12, 0.08), "deduct": (0.08, 0.12),
        "spend": (0.14, 0.12), "compani": (0.10, 0.16),
        "medic": (0.90, 0.90), "healthcar": (0.92, 0.88),
        "health": (0.88, 0.92), "care": (0.94, 0.92), "afford": (0.90, 0.86),
        "system": (0.50, 0.50),
    }
    proj = Projection2D(coords=coords, anchors={"tax": coords["tax"],
                                                "medic": coords["medic"]})
    return proj, QuadTree(coords)


@pytest.fixture
def toy_concept_vectors():
    from conceptspace.conceptgen import ConceptVector, Descriptor, Provenance

    def vec(seed, words):
        return ConceptVector(seed, [
            Descriptor(w, 1.0, Provenance.CONCEPT_DESCRIPTOR) for w in words
        ])
    return [vec("tax", TAX_GROUP + ["system"]), vec("medic", MED_GROUP)]


@pytest.fixture
def toy_hierarchy(toy_layout, toy_store, toy_concept_vectors):
    from conceptspace.hierarchy import AbstractionParams, build_hierarchy
    proj, qt = toy_layout
    h = build_hierarchy(toy_concept_vectors, proj, qt, toy_store,
                        AbstractionParams())
    return h, proj, qt


@pytest.fixture
def toy_store(toy_vectors):
    store = EmbeddingStore(dim=8)
    for w, v in toy_vectors.items():
        store.add(w, v)
    return store


def random_valid_action(h, rng):
    """Draw one action that the permission matrix allows for the current
    hierarchy state, or None when nothing is possible."""
    from conceptspace.refinement import ActionKind, RefinementAction

    concepts = sorted(h.concepts)
    descriptors = sorted(h.all_descriptors())
    base = sorted(h.base_words)
    options = []

    if base and concepts:
        options.append(lambda: RefinementAction(
            rng.choice([ActionKind.PROMOTE, ActionKind.ADD_WORD]),
            [rng.choice(base)], destination=rng.choice(concepts)))
    if descriptors:
        options.append(lambda: RefinementAction(
            ActionKind.PROMOTE, [rng.choice(descriptors)]))
        options.append(lambda: RefinementAction(
            ActionKind.DEMOTE, [rng.choice(descriptors)]))
        options.append(lambda: RefinementAction(
            ActionKind.DELETE, [rng.choice(descriptors)]))
        options.append(lambda: RefinementAction(
            ActionKind.SPLIT, [rng.choice(descriptors)]))
    if descriptors and len(concepts) >= 2:
        options.append(lambda: RefinementAction(
            ActionKind.REASSIGN_PARENT, [rng.choice(descriptors)],
            destination=rng.choice(concepts)))
    if len(concepts) >= 2:
        options.append(lambda: RefinementAction(
            ActionKind.DEMOTE, [rng.choice(concepts)]))
        options.append(lambda: RefinementAction(
            ActionKind.DELETE, [rng.choice(concepts)]))
        options.append(lambda: RefinementAction(
            ActionKind.MERGE, rng.sample(concepts, 2)))
        options.append(lambda: RefinementAction(
            ActionKind.REASSIGN_CHILDREN, [rng.choice(concepts)],
            destination=rng.choice(concepts)))
    swappable = [c for c in concepts if h.concepts[c].descriptors]
    if swappable:
        def swap():
            cw = rng.choice(swappable)
            dw = rng.choice(h.concepts[cw].descriptor_words())
            return RefinementAction(ActionKind.SWAP, [cw], destination=dw)
        options.append(swap)
    splittable = [c for c in concepts if len(h.concepts[c].descriptors) >= 2]
    if splittable:
        options.append(lambda: RefinementAction(
            ActionKind.SPLIT, [rng.choice(splittable)]))
    if descriptors and base:
        options.append(lambda: RefinementAction(
            ActionKind.CREATE_CONCEPT_FROM_SELECTION,
            [rng.choice(descriptors)] + rng.sample(base, min(2, len(base)))))

    if not options:
        return None
    action = rng.choice(options)()
    # REASSIGN variants need a destination other than the current owner
    if action.kind.value in ("REASSIGN_PARENT", "REASSIGN_CHILDREN"):
        owner = (h.descriptor_owner(action.targets[0])
                 if action.kind.value == "REASSIGN_PARENT"
                 else action.targets[0])
        others = [c for c in concepts if c != owner]
        if not others:
            return None
        action.destination = rng.choice(others)
    return action


def assert_hierarchy_invariants(h):
    """Every word has exactly one level; descriptors have one owner;
    concepts partition into super concepts."""
    owners = {}
    for cw, concept in h.concepts.items():
        for d in concept.descriptors:
            assert d.word not in owners, f"{d.word} owned twice"
            assert d.word not in h.concepts, f"{d.word} both levels"
            owners[d.word] = cw
    for w in h.base_words:
        assert w not in h.concepts, f"{w} base and concept"
        assert w not in owners, f"{w} base and descriptor"
    if h.super_concepts:
        seen = [c for sc in h.super_concepts for c in sc.concepts]
        assert sorted(seen) == sorted(h.concepts)


def brute_force_knn(coords, q, k, exclude=frozenset()):
    items = [
        (math.hypot(x - q[0], y - q[1]), w)
        for w, (x, y) in coords.items() if w not in exclude
    ]
    items.sort()
    return [(w, d) for d, w in items[:k]]
