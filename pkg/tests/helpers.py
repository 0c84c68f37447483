"""Shared builders and independent oracles used across test modules.

The oracles deliberately avoid the library's code paths: counting is
re-done from raw documents, probabilities are exact rationals, and the
log-space work happens in plain math calls at the very end.
"""

from __future__ import annotations

import itertools
import math
from fractions import Fraction

import numpy as np

from spanmeta import Corpus, Document, Span, Token


def make_doc(doc_id: str, surfaces, spans=()) -> Document:
    return Document(doc_id, tuple(Token(s) for s in surfaces), tuple(spans))


def random_corpus(
    rng: np.random.Generator,
    max_tokens: int = 50,
    max_types: int = 3,
    vocab: int = 6,
) -> Corpus:
    """A small random training corpus with non-overlapping typed spans."""
    n_types = int(rng.integers(1, max_types + 1))
    inventory = tuple(f"t{i}" for i in range(n_types))
    n_docs = int(rng.integers(1, 4))
    budget = int(rng.integers(n_docs, max_tokens + 1))
    docs = []
    for d in range(n_docs):
        n = max(1, budget // n_docs)
        surfaces = [f"w{int(rng.integers(vocab))}" for _ in range(n)]
        spans = []
        pos = 0
        while pos < n:
            if rng.random() < 0.45:
                length = int(rng.integers(1, min(4, n - pos) + 1))
                spans.append(Span(str(rng.choice(inventory)), pos, pos + length))
                pos += length
            pos += 1
        docs.append(make_doc(f"d{d}", surfaces, spans))
    return Corpus(tuple(docs), inventory)


# ---------------------------------------------------------------------------
# Rational-arithmetic oracles for the four span-type measurements.


def _spans_of(corpus: Corpus, type_id: str):
    for doc in corpus.documents:
        for s in doc.spans:
            if s.type_id == type_id:
                yield doc, s


def oracle_frequency(corpus: Corpus, type_id: str) -> int:
    return sum(1 for _ in _spans_of(corpus, type_id))


def oracle_geometric_length(corpus: Corpus, type_id: str) -> float:
    lengths = [s.end - s.start for _, s in _spans_of(corpus, type_id)]
    if not lengths:
        raise ValueError("no spans")
    return math.exp(sum(math.log(n) for n in lengths) / len(lengths))


def _fraction_distribution(counts: dict[str, int]) -> dict[str, Fraction]:
    total = sum(counts.values())
    if total == 0:
        raise ValueError("empty distribution")
    return {w: Fraction(c, total) for w, c in counts.items()}


def _oracle_kl(p: dict[str, Fraction], q: dict[str, Fraction]) -> float:
    total = 0.0
    for w, pw in sorted(p.items()):
        total += float(pw) * math.log(float(pw) / float(q[w]))
    return max(total, 0.0)


def _corpus_counts(corpus: Corpus) -> dict[str, int]:
    counts: dict[str, int] = {}
    for doc in corpus.documents:
        for tok in doc.tokens:
            counts[tok.surface] = counts.get(tok.surface, 0) + 1
    return counts


def oracle_span_distinctiveness(corpus: Corpus, type_id: str) -> float:
    inside: dict[str, int] = {}
    for doc, s in _spans_of(corpus, type_id):
        for tok in doc.tokens[s.start : s.end]:
            inside[tok.surface] = inside.get(tok.surface, 0) + 1
    return _oracle_kl(
        _fraction_distribution(inside), _fraction_distribution(_corpus_counts(corpus))
    )


def oracle_boundary_distinctiveness(corpus: Corpus, type_id: str) -> float:
    edge: dict[str, int] = {}
    for doc, s in _spans_of(corpus, type_id):
        if s.start > 0:
            w = doc.tokens[s.start - 1].surface
            edge[w] = edge.get(w, 0) + 1
        if s.end < len(doc.tokens):
            w = doc.tokens[s.end].surface
            edge[w] = edge.get(w, 0) + 1
    if not edge:
        raise ValueError("no boundary neighbors")
    return _oracle_kl(
        _fraction_distribution(edge), _fraction_distribution(_corpus_counts(corpus))
    )


# ---------------------------------------------------------------------------
# Tiny-CRF enumeration oracles.


def enumerate_sequences(n: int, num_labels: int):
    return itertools.product(range(num_labels), repeat=n)


def brute_force_log_partition(score_fn, n: int, num_labels: int) -> float:
    scores = [score_fn(seq) for seq in enumerate_sequences(n, num_labels)]
    m = max(scores)
    return m + math.log(math.fsum(math.exp(s - m) for s in scores))


def brute_force_argmax(score_fn, n: int, num_labels: int):
    # ties resolve to the lexicographically smallest id sequence, which
    # itertools.product emits first
    best, best_score = None, -math.inf
    for seq in enumerate_sequences(n, num_labels):
        s = score_fn(seq)
        if s > best_score:
            best, best_score = seq, s
    return best, best_score
