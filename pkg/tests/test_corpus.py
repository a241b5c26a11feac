import json
import math

import pytest

from conceptspace.corpus import (Document, ScoringFunction, load_corpus,
                                 score_keywords, top_keywords)
from conceptspace.errors import EmptyCorpus, MalformedRecord


def _jsonl(tmp_path, rows):
    path = tmp_path / "docs.jsonl"
    with open(path, "w") as fh:
        for row in rows:
            fh.write(json.dumps(row) + "\n")
    return path


def test_single_stem_case(tmp_path):
    path = _jsonl(tmp_path, [{"id": "d1", "text": "Taxes tax the taxed"}])
    docs, stats = load_corpus(path)
    assert "tax" in stats.vocabulary
    assert stats.term_freq["tax"] == 3
    assert stats.n_docs == 1


def test_disjoint_vocabularies(tmp_path):
    path = _jsonl(tmp_path, [
        {"id": "d1", "text": "apple banana cherry"},
        {"id": "d2", "text": "xylophone zebra quartz"},
    ])
    docs, stats = load_corpus(path)
    assert all(df == 1 for df in stats.doc_freq.values())


def test_n_docs_matches_record_count(debate_jsonl):
    # independent oracle: count non-empty lines in the input file
    expected = sum(1 for line in open(debate_jsonl) if line.strip())
    docs, stats = load_corpus(debate_jsonl)
    assert stats.n_docs == expected


def test_txt_directory_input(tmp_path):
    d = tmp_path / "corpus"
    d.mkdir()
    (d / "a.txt").write_text("taxes and spending")
    (d / "b.txt").write_text("medical care")
    docs, stats = load_corpus(d)
    assert {doc.id for doc in docs} == {"a.txt", "b.txt"}


def test_empty_corpus_raises(tmp_path):
    path = tmp_path / "empty.jsonl"
    path.write_text("")
    with pytest.raises(EmptyCorpus):
        load_corpus(path)


def test_malformed_record_carries_line(tmp_path):
    path = tmp_path / "bad.jsonl"
    path.write_text('{"id": "a", "text": "ok words here"}\nnot-json\n')
    with pytest.raises(MalformedRecord) as exc:
        load_corpus(path)
    assert exc.value.line == 2


def test_stop_word_override(tmp_path):
    path = _jsonl(tmp_path, [{"id": "d1", "text": "alpha beta gamma"}])
    stops = tmp_path / "stops.txt"
    stops.write_text("beta\n")
    docs, stats = load_corpus(path, stop_words_path=stops)
    assert "beta" not in stats.vocabulary
    assert "alpha" in stats.vocabulary


def test_tokenization_deterministic(debate_jsonl):
    docs1, _ = load_corpus(debate_jsonl)
    docs2, _ = load_corpus(debate_jsonl)
    assert [d.tokens for d in docs1] == [d.tokens for d in docs2]


def test_tfidf_word_in_every_document(tmp_path):
    path = _jsonl(tmp_path, [
        {"id": f"d{i}", "text": "shared plus unique" + str(i)}
        for i in range(4)
    ])
    docs, stats = load_corpus(path)
    scores = score_keywords(docs[0], stats, ScoringFunction.TFIDF)
    assert scores["share"] == 0.0


def test_tfidf_hand_computed(tmp_path):
    rows = [{"id": "d0", "text": " ".join(["zonk"] * 5)}]
    rows += [{"id": f"d{i}", "text": f"filler{i} padding{i}"}
             for i in range(1, 10)]
    docs, stats = load_corpus(_jsonl(tmp_path, rows))
    scores = score_keywords(docs[0], stats, ScoringFunction.TFIDF)
    assert scores["zonk"] == pytest.approx(5 * math.log(10))


def test_g2_zero_at_independence(tmp_path):
    # identical relative frequency inside and outside the document
    rows = [
        {"id": "d1", "text": "tok tok other pad"},
        {"id": "d2", "text": "tok tok other pad"},
    ]
    docs, stats = load_corpus(_jsonl(tmp_path, rows))
    scores = score_keywords(docs[0], stats, ScoringFunction.G2)
    assert scores["tok"] == pytest.approx(0.0, abs=1e-9)


def test_scores_finite_nonnegative(debate_jsonl):
    docs, stats = load_corpus(debate_jsonl)
    for f in ScoringFunction:
        for doc in docs:
            for s in score_keywords(doc, stats, f).values():
                assert math.isfinite(s) and s >= 0


def test_top_keywords_fewer_words_than_n():
    doc = Document("d", None, "", ["a", "b", "c"],
                   {"a": 1.0, "b": 2.0, "c": 3.0})
    assert top_keywords(doc, 15) == ["c", "b", "a"]


def test_top_keywords_tie_break():
    doc = Document("d", None, "", ["b", "a"], {"b": 1.0, "a": 1.0})
    assert top_keywords(doc, 2) == ["a", "b"]


def test_top_keywords_prefix_property(debate_jsonl):
    docs, stats = load_corpus(debate_jsonl)
    for doc in docs:
        for n in range(1, 8):
            assert top_keywords(doc, n) == top_keywords(doc, n + 1)[:n]


def test_top_keywords_matches_full_sort(debate_jsonl):
    docs, stats = load_corpus(debate_jsonl)
    doc = docs[0]
    oracle = [w for w, _ in sorted(doc.keyword_vector.items(),
                                   key=lambda kv: (-kv[1], kv[0]))][:15]
    assert top_keywords(doc, 15) == oracle
