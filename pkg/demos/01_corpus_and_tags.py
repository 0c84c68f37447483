"""Round-trip a tiny annotated corpus through both file formats and show
how per-token tags map back to spans."""

import tempfile
from pathlib import Path

from spanmeta import (
    BioSequence,
    Corpus,
    Document,
    Span,
    Token,
    bio_decode,
    bio_encode,
    bio_labels,
    read_corpus,
    write_corpus,
)

# two documents, two span types: person names and role words
doc1 = Document(
    "memo-1",
    tuple(Token(w) for w in "the clerk spoke to mary ann today".split()),
    (Span("role", 1, 2), Span("person", 4, 6)),
)
doc2 = Document(
    "memo-2",
    tuple(Token(w) for w in "bob met the auditor".split()),
    (Span("person", 0, 1), Span("role", 3, 4)),
)
corpus = Corpus((doc1, doc2), ("person", "role"))

print("label alphabet:", bio_labels(corpus.span_type_inventory))

for doc in corpus:
    tags = bio_encode(doc, corpus.span_type_inventory)
    print(doc.id)
    for tok, tag in zip(doc.tokens, tags):
        print(f"  {tok.surface:10s} {tag}")

# tags back to spans, exactly
recovered = bio_decode(bio_encode(doc1, corpus.span_type_inventory))
assert tuple(recovered) == doc1.spans
print("decode(encode(doc)) recovers the annotation:", recovered)

# a stray continuation tag is an error under strict decoding, but the
# lenient mode (meant for model output) opens a fresh span instead
stray = BioSequence(("O", "I-person", "I-person", "O"))
try:
    bio_decode(stray)
except ValueError as e:
    print("strict decode refuses:", e)
print("lenient decode repairs:", bio_decode(stray, mode="lenient"))

with tempfile.TemporaryDirectory() as tmp:
    jsonl = Path(tmp) / "memos.jsonl"
    tsv = Path(tmp) / "memos.tsv"
    write_corpus(corpus, jsonl)
    write_corpus(corpus, tsv, format="conll_tsv")
    print("\njsonl serialization:")
    print(jsonl.read_text(), end="")
    print("column serialization:")
    print(tsv.read_text(), end="")

    back = read_corpus(jsonl)
    assert back.documents == corpus.documents
    print("file round trip preserves every document")
