"""Train the two reference labelers on a task where only label adjacency
tells you where one span ends and the next begins.

Every marker block is four identical tokens carrying two 2-token spans.
A per-token classifier sees the same features at all four positions, so
it cannot find the internal boundary; the chain model learns the B-I-B-I
transition rhythm.
"""

import numpy as np

from spanmeta import (
    Corpus,
    Document,
    Span,
    Token,
    TrainConfig,
    bio_decode,
    count_matches,
    f1_report,
    predict_labels,
    train,
)
from spanmeta.evaluation import EvalCounts


def build(rng, n_docs, partition):
    docs = []
    for i in range(n_docs):
        words, spans = [], []
        for _ in range(int(rng.integers(2, 5))):
            words += ["pad"] * int(rng.integers(1, 3))
            s = len(words)
            words += ["mark"] * 4
            spans += [Span("x", s, s + 2), Span("x", s + 2, s + 4)]
            words += ["pad"] * int(rng.integers(1, 3))
        docs.append(Document(f"{partition}-{i}", tuple(Token(w) for w in words), tuple(spans)))
    return Corpus(tuple(docs), ("x",), partition)


def micro_f1(model, corpus):
    counts = EvalCounts()
    for doc, seq in zip(corpus.documents, predict_labels(model, corpus)):
        counts = counts + count_matches(doc.spans, bio_decode(seq, mode="lenient"))
    return f1_report(counts, types=["x"]).micro.f1


rng = np.random.default_rng(7)
train_set = build(rng, 30, "train")
dev_set = build(rng, 10, "dev")
test_set = build(rng, 15, "test")

config = TrainConfig(seed=0, max_epochs=30)
for arch in ("baseline", "crf"):
    result = train(arch, train_set, dev_set, config)
    last = result.log[-1]
    print(
        f"{arch:8s} epochs={len(result.log)} "
        f"stopped_early={result.stopped_early} dev_f1={last.dev_f1:.1f}"
    )
    print(f"{'':8s} held-out micro F1 = {micro_f1(result.model, test_set):.1f}")

# same data, same budget; the transition structure is the entire difference
