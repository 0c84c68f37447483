"""Measure what makes a span type hard: how often it occurs, how long it
runs, and how sharply its tokens and boundaries stand out from the rest
of the corpus."""

import numpy as np

from spanmeta import (
    Corpus,
    Document,
    Span,
    Token,
    dataset_profile,
    load_embedded,
    profile_span_type,
)


def doc(doc_id, text, spans):
    return Document(doc_id, tuple(Token(w) for w in text.split()), tuple(spans))


# quote words ("alas", "woe") never occur outside quotes; title words
# ("the report") are everywhere, so titles blend into the corpus
corpus = Corpus(
    (
        doc(
            "d0",
            "she said alas woe . the report was on the table near the window",
            [Span("quote", 2, 4), Span("title", 5, 7)],
        ),
        doc(
            "d1",
            "he said woe . the report sat by the door and the report",
            [Span("quote", 2, 3), Span("title", 4, 6)],
        ),
    ),
    ("quote", "title"),
)

for t in corpus.span_type_inventory:
    p = profile_span_type(corpus, t)
    print(
        f"{t:6s} freq={p.frequency}  len={p.span_length:.2f}  "
        f"span-dist={p.span_distinctiveness:.3f}  boundary-dist={p.boundary_distinctiveness:.3f}"
    )

# the quote tokens barely occur outside quotes, so their in-span
# distribution diverges hard from the corpus distribution
pq = profile_span_type(corpus, "quote")
pt = profile_span_type(corpus, "title")
assert pq.span_distinctiveness > pt.span_distinctiveness

print()
print("bundled study profiles, aggregated per dataset")
print(f"{'dataset':12s} {'freq':>9s} {'len':>6s} {'SD':>6s} {'BD':>6s}  types")
by_dataset = {}
for p in load_embedded().profiles:
    by_dataset.setdefault(p.type_id.split("/")[0], []).append(p)
for name in sorted(by_dataset):
    agg = dataset_profile(by_dataset[name])
    print(
        f"{name:12s} {agg.frequency:9.0f} {agg.span_length:6.2f} "
        f"{agg.span_distinctiveness:6.2f} {agg.boundary_distinctiveness:6.2f}  "
        f"{len(by_dataset[name])}"
    )

# frequency and span distinctiveness trade off across the 36 embedded types
profiles = load_embedded().profiles
r = np.corrcoef(
    np.log([p.frequency for p in profiles]),
    [p.span_distinctiveness for p in profiles],
)[0, 1]
print(f"\ncorr(log freq, span distinctiveness) over 36 types: {r:+.2f}")
