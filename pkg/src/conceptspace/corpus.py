"""Corpus ingestion, tokenization and keyword scoring.

Documents come from either a directory of .txt files (one document per
file) or a JSON-lines file with {"id", "speaker", "text"} records.
Tokens are lowercased, punctuation-stripped, stop-word filtered and
stemmed; statistically salient bigrams/trigrams join the vocabulary.
"""

from __future__ import annotations

import json
import math
import re
from collections import Counter
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path

import numpy as np

from .config import Config, DEFAULTS
from .errors import (EmptyCorpus, MalformedRecord, MissingFile,
                     UnknownScoringKind)
from .stemming import stem
from .stopwords import STOP_WORDS

_TOKEN_RE = re.compile(r"[a-z][a-z']*")

NGRAM_JOIN = "_"
NGRAM_PERCENTILE = 95.0


class ScoringFunction(Enum):
    TF = "TF"
    TFIDF = "TFIDF"
    LOG_LIKELIHOOD_RATIO = "LOG_LIKELIHOOD_RATIO"
    G2 = "G2"


@dataclass
class Document:
    id: str
    speaker: str | None
    text: str
    tokens: list[str] = field(default_factory=list)
    keyword_vector: dict[str, float] = field(default_factory=dict)

    @property
    def counts(self) -> Counter:
        return Counter(self.tokens)


@dataclass
class CorpusStats:
    vocabulary: set[str]
    doc_freq: dict[str, int]
    term_freq: dict[str, int]
    n_docs: int
    total_tokens: int


def tokenize(text: str, stop_words: frozenset[str] | None = None) -> list[str]:
    """Lowercase, strip punctuation, drop stop words, stem."""
    stops = STOP_WORDS if stop_words is None else stop_words
    out = []
    for raw in _TOKEN_RE.findall(text.lower()):
        raw = raw.strip("'")
        if not raw or raw in stops:
            continue
        stemmed = stem(raw)
        if stemmed and stemmed not in stops:
            out.append(stemmed)
    return out


def _g2(k11: float, k12: float, k21: float, k22: float) -> float:
    """Dunning's log-likelihood statistic for a 2x2 contingency table."""
    total = k11 + k12 + k21 + k22
    if total == 0:
        return 0.0
    g = 0.0
    row1, row2 = k11 + k12, k21 + k22
    col1, col2 = k11 + k21, k12 + k22
    for obs, row, col in ((k11, row1, col1), (k12, row1, col2),
                          (k21, row2, col1), (k22, row2, col2)):
        if obs > 0:
            expected = row * col / total
            g += obs * math.log(obs / expected)
    return max(0.0, 2.0 * g)


def _doc_g2(count_in_doc: int, doc_len: int, corpus_count: int,
            corpus_tokens: int) -> float:
    k11 = count_in_doc
    k12 = doc_len - count_in_doc
    k21 = corpus_count - count_in_doc
    k22 = (corpus_tokens - doc_len) - k21
    return _g2(k11, k12, k21, k22)


def _read_records(source: str | Path) -> list[tuple[str, str | None, str]]:
    path = Path(source)
    if not path.exists():
        raise MissingFile(str(path))
    records: list[tuple[str, str | None, str]] = []
    if path.is_dir():
        for f in sorted(path.glob("*.txt")):
            records.append((f.name, None, f.read_text(encoding="utf-8")))
    else:
        with open(path, encoding="utf-8") as fh:
            for lineno, line in enumerate(fh, start=1):
                line = line.strip()
                if not line:
                    continue
                try:
                    rec = json.loads(line)
                except json.JSONDecodeError as exc:
                    raise MalformedRecord(lineno, str(exc)) from exc
                if "id" not in rec or "text" not in rec:
                    raise MalformedRecord(lineno, "missing id or text")
                records.append((str(rec["id"]), rec.get("speaker"), rec["text"]))
    return records


def load_stop_words(path: str | Path | None) -> frozenset[str]:
    if path is None:
        return STOP_WORDS
    words = {w.strip().lower() for w in Path(path).read_text(encoding="utf-8").splitlines()}
    return frozenset(w for w in words if w)


def load_corpus(source: str | Path,
                stop_words_path: str | Path | None = None,
                config: Config = DEFAULTS) -> tuple[list[Document], CorpusStats]:
    stops = load_stop_words(stop_words_path)
    records = _read_records(source)
    docs = []
    for doc_id, speaker, text in records:
        tokens = tokenize(text, stops)
        if tokens:
            docs.append(Document(doc_id, speaker, text, tokens))
    if not docs:
        raise EmptyCorpus("no non-empty documents in source")

    _admit_ngrams(docs)

    term_freq: Counter = Counter()
    doc_freq: Counter = Counter()
    for doc in docs:
        counts = doc.counts
        term_freq.update(counts)
        doc_freq.update(counts.keys())
    stats = CorpusStats(
        vocabulary=set(term_freq),
        doc_freq=dict(doc_freq),
        term_freq=dict(term_freq),
        n_docs=len(docs),
        total_tokens=sum(term_freq.values()),
    )
    for doc in docs:
        doc.keyword_vector = score_keywords(
            doc, stats, ScoringFunction[config.scoring_function])
    return docs, stats


def _admit_ngrams(docs: list[Document]) -> None:
    """Append bigrams/trigrams whose G2 beats the unigram 95th percentile."""
    term_freq: Counter = Counter()
    doc_lens = {}
    for doc in docs:
        term_freq.update(doc.counts)
        doc_lens[doc.id] = len(doc.tokens)
    corpus_tokens = sum(term_freq.values())

    def max_g2(counts_by_doc: dict[str, int], total: int) -> float:
        return max(
            _doc_g2(c, doc_lens[d], total, corpus_tokens)
            for d, c in counts_by_doc.items())

    uni_by_doc: dict[str, Counter] = {}
    for doc in docs:
        for w, c in doc.counts.items():
            uni_by_doc.setdefault(w, Counter())[doc.id] = c
    uni_scores = [max_g2(by_doc, term_freq[w]) for w, by_doc in uni_by_doc.items()]
    threshold = float(np.percentile(uni_scores, NGRAM_PERCENTILE))

    gram_by_doc: dict[str, Counter] = {}
    gram_total: Counter = Counter()
    for doc in docs:
        toks = doc.tokens
        for n in (2, 3):
            for i in range(len(toks) - n + 1):
                gram = NGRAM_JOIN.join(toks[i:i + n])
                gram_by_doc.setdefault(gram, Counter())[doc.id] += 1
                gram_total[gram] += 1

    admitted = {
        gram for gram in gram_total
        if gram_total[gram] >= 2
        and max_g2(gram_by_doc[gram], gram_total[gram]) > threshold
    }
    if not admitted:
        return
    for doc in docs:
        toks = doc.tokens
        extra = []
        for n in (2, 3):
            for i in range(len(toks) - n + 1):
                gram = NGRAM_JOIN.join(toks[i:i + n])
                if gram in admitted:
                    extra.append(gram)
        doc.tokens = toks + extra


def score_keywords(doc: Document, stats: CorpusStats,
                   f: ScoringFunction) -> dict[str, float]:
    if not isinstance(f, ScoringFunction):
        raise UnknownScoringKind(repr(f))
    counts = doc.counts
    doc_len = len(doc.tokens)
    scores: dict[str, float] = {}
    for w, c in counts.items():
        if f is ScoringFunction.TF:
            scores[w] = float(c)
        elif f is ScoringFunction.TFIDF:
            df = stats.doc_freq.get(w, stats.n_docs)
            scores[w] = c * math.log(stats.n_docs / df)
        else:
            g2 = _doc_g2(c, doc_len, stats.term_freq.get(w, c),
                         stats.total_tokens)
            scores[w] = g2 if f is ScoringFunction.G2 else g2 / 2.0
    return scores


def top_keywords(doc: Document, n: int) -> list[str]:
    """The n highest-scoring words; ties broken lexicographically."""
    ranked = sorted(doc.keyword_vector.items(), key=lambda kv: (-kv[1], kv[0]))
    return [w for w, _ in ranked[:n]]


def corpus_tfidf(stats: CorpusStats) -> dict[str, float]:
    """Corpus-level tf-idf used for seed extraction and recommendations."""
    return {
        w: stats.term_freq[w] * math.log(stats.n_docs / stats.doc_freq[w])
        if stats.doc_freq[w] < stats.n_docs else 0.0
        for w in stats.vocabulary
    }


def corpus_g2(docs: list[Document], stats: CorpusStats) -> dict[str, float]:
    """Corpus-level G2 salience: a word's best per-document G2."""
    best: dict[str, float] = {}
    for doc in docs:
        doc_len = len(doc.tokens)
        for w, c in doc.counts.items():
            g2 = _doc_g2(c, doc_len, stats.term_freq[w], stats.total_tokens)
            if g2 > best.get(w, -1.0):
                best[w] = g2
    return best
