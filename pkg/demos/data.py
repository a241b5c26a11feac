"""Shared fixture data for the demo scripts: a small televised-debate
style corpus and a matching toy embedding file, written to a temp dir."""

import json
import tempfile
from pathlib import Path

import numpy as np

UTTERANCES = [
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

# stemmed forms, grouped the way the corpus actually uses them
GROUPS = {
    (1.0, 0.2, 0, 0, 0, 0, 0, 0): ["tax", "cut", "deduct", "spend", "compani"],
    (0, 0, 0, 1.0, 0.2, 0, 0, 0): ["medic", "healthcar", "health", "care",
                                   "afford"],
    (0, 0, 0, 0, 0, 0, 1.0, 0.1): ["system", "energi", "oil", "product"],
}


def write_fixture(directory=None):
    root = Path(directory or tempfile.mkdtemp(prefix="conceptspace-demo-"))
    corpus = root / "debate.jsonl"
    with open(corpus, "w") as fh:
        for doc_id, speaker, text in UTTERANCES:
            fh.write(json.dumps({"id": doc_id, "speaker": speaker,
                                 "text": text}) + "\n")

    rng = np.random.default_rng(7)
    vectors = root / "vectors.txt"
    with open(vectors, "w") as fh:
        for axis, words in GROUPS.items():
            for i, word in enumerate(words):
                noise = 0.0 if i == 0 else 0.12
                v = np.array(axis, dtype=float) + rng.normal(0, noise, 8)
                v = v / np.linalg.norm(v)
                fh.write(word + " " + " ".join(f"{x:.6f}" for x in v) + "\n")
    return corpus, vectors
