"""Token-softmax and linear-chain CRF labelers over sparse indicators.

Both models score a token as the sum of the weight rows of its active
indicators plus a bias row, giving one score per BIO label. The softmax
baseline treats positions independently; the CRF adds label-bigram
transition scores plus start/stop scores and normalizes over whole
sequences. All sequence computations run in log space.

Label ids follow the order of the model's ``labels`` tuple. Argmax ties
resolve toward the lower label id everywhere, including each Viterbi
backpointer.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np
from scipy.special import logsumexp

from ..corpus import BioSequence, Corpus
from .features import FeatureIndex

__all__ = [
    "NEG_INF",
    "TokenClassifierModel",
    "LinearChainCrfModel",
    "bio_transition_mask",
    "bio_start_mask",
    "crf_log_partition",
    "crf_viterbi",
    "sequence_score",
    "crf_nll_gradient",
    "baseline_nll_gradient",
    "predict",
    "model_to_dict",
    "model_from_dict",
]

# Additive penalty standing in for -inf; keeps logsumexp free of nans.
NEG_INF = -1e30

Encoded = Sequence[Sequence[int]]


def _emissions(weights: np.ndarray, encoded: Encoded) -> np.ndarray:
    """Per-position label scores: summed indicator rows plus the bias row."""
    out = np.tile(weights[-1], (len(encoded), 1))
    for t, ids in enumerate(encoded):
        if ids:
            out[t] += weights[np.asarray(ids, dtype=np.intp)].sum(axis=0)
    return out


def _label_ids(labels: Sequence[str], seq: Iterable[str]) -> np.ndarray:
    index = {lab: i for i, lab in enumerate(labels)}
    try:
        return np.array([index[lab] for lab in seq], dtype=np.intp)
    except KeyError as exc:
        raise ValueError(
            f"label {exc.args[0]!r} outside the model alphabet"
        ) from None


@dataclass(frozen=True)
class TokenClassifierModel:
    """Independent per-token softmax over the label alphabet.

    ``weights`` has shape (num_features + 1, num_labels); the final row
    is the bias, added at every position.
    """

    feature_index: FeatureIndex
    labels: tuple[str, ...]
    weights: np.ndarray

    arch = "baseline"

    def __post_init__(self) -> None:
        object.__setattr__(self, "labels", tuple(self.labels))
        expected = (self.feature_index.num_features + 1, len(self.labels))
        if self.weights.shape != expected:
            raise ValueError(
                f"weight shape {self.weights.shape} != expected {expected}"
            )

    def parameters(self) -> list[np.ndarray]:
        return [self.weights]

    def clone(self) -> "TokenClassifierModel":
        return TokenClassifierModel(
            self.feature_index, self.labels, self.weights.copy()
        )


@dataclass(frozen=True)
class LinearChainCrfModel:
    """Linear-chain CRF: emissions plus transition, start, and stop scores.

    A sequence's score is the sum of its per-position emissions, the
    transition score of each label bigram, the start score of the first
    label, and the stop score of the last. With ``masked`` set, additive
    penalties rule out label bigrams that break BIO well-formedness.
    """

    feature_index: FeatureIndex
    labels: tuple[str, ...]
    emission_weights: np.ndarray  # (num_features + 1, L), last row is bias
    transitions: np.ndarray  # (L, L), indexed [previous, next]
    start: np.ndarray  # (L,)
    stop: np.ndarray  # (L,)
    masked: bool = False

    arch = "crf"

    def __post_init__(self) -> None:
        object.__setattr__(self, "labels", tuple(self.labels))
        n_labels = len(self.labels)
        expected = (self.feature_index.num_features + 1, n_labels)
        if self.emission_weights.shape != expected:
            raise ValueError(
                f"emission shape {self.emission_weights.shape} != {expected}"
            )
        if self.transitions.shape != (n_labels, n_labels):
            raise ValueError("transition matrix must be num_labels x num_labels")
        if self.start.shape != (n_labels,) or self.stop.shape != (n_labels,):
            raise ValueError("start and stop scores must have one entry per label")

    def parameters(self) -> list[np.ndarray]:
        return [self.emission_weights, self.transitions, self.start, self.stop]

    def clone(self) -> "LinearChainCrfModel":
        return LinearChainCrfModel(
            self.feature_index,
            self.labels,
            self.emission_weights.copy(),
            self.transitions.copy(),
            self.start.copy(),
            self.stop.copy(),
            self.masked,
        )


def bio_transition_mask(labels: Sequence[str]) -> np.ndarray:
    """Additive mask, NEG_INF where a label bigram breaks BIO structure.

    An I-t label may only follow B-t or I-t of the same type; every
    other bigram is left unpenalized.
    """
    n = len(labels)
    mask = np.zeros((n, n))
    for j, nxt in enumerate(labels):
        if not nxt.startswith("I-"):
            continue
        allowed = {"B-" + nxt[2:], "I-" + nxt[2:]}
        for i, prev in enumerate(labels):
            if prev not in allowed:
                mask[i, j] = NEG_INF
    return mask


def bio_start_mask(labels: Sequence[str]) -> np.ndarray:
    """Additive mask forbidding a sequence from opening on a continuation."""
    return np.array(
        [NEG_INF if lab.startswith("I-") else 0.0 for lab in labels]
    )


def _potentials(model: LinearChainCrfModel) -> tuple[np.ndarray, np.ndarray]:
    if model.masked:
        return (
            model.transitions + bio_transition_mask(model.labels),
            model.start + bio_start_mask(model.labels),
        )
    return model.transitions, model.start


def _require_nonempty(encoded: Encoded) -> None:
    if len(encoded) == 0:
        raise ValueError("sequence must contain at least one position")


def crf_log_partition(model: LinearChainCrfModel, encoded: Encoded) -> float:
    """Log of the sum over all label sequences of exp(sequence score)."""
    _require_nonempty(encoded)
    em = _emissions(model.emission_weights, encoded)
    trans, start = _potentials(model)
    alpha = start + em[0]
    for t in range(1, len(encoded)):
        alpha = logsumexp(alpha[:, None] + trans, axis=0) + em[t]
    return float(logsumexp(alpha + model.stop))


def crf_viterbi(model: LinearChainCrfModel, encoded: Encoded) -> BioSequence:
    """Highest-scoring label sequence under the model."""
    _require_nonempty(encoded)
    em = _emissions(model.emission_weights, encoded)
    trans, start = _potentials(model)
    n, n_labels = em.shape
    delta = start + em[0]
    back = np.zeros((n, n_labels), dtype=np.intp)
    for t in range(1, n):
        scores = delta[:, None] + trans
        back[t] = np.argmax(scores, axis=0)  # first max = lowest prior id
        delta = scores[back[t], np.arange(n_labels)] + em[t]
    path = [int(np.argmax(delta + model.stop))]
    for t in range(n - 1, 0, -1):
        path.append(int(back[t, path[-1]]))
    path.reverse()
    return BioSequence(tuple(model.labels[i] for i in path))


def sequence_score(
    model: LinearChainCrfModel,
    encoded: Encoded,
    labels: BioSequence | Sequence[str],
) -> float:
    """Unnormalized log score of one labeling of one sequence."""
    _require_nonempty(encoded)
    ids = _label_ids(model.labels, labels)
    if len(ids) != len(encoded):
        raise ValueError(
            f"{len(ids)} labels for {len(encoded)} positions"
        )
    em = _emissions(model.emission_weights, encoded)
    trans, start = _potentials(model)
    score = start[ids[0]] + model.stop[ids[-1]]
    score += em[np.arange(len(ids)), ids].sum()
    if len(ids) > 1:
        score += trans[ids[:-1], ids[1:]].sum()
    return float(score)


Batch = Sequence[tuple[Encoded, "BioSequence | Sequence[str]"]]


def crf_nll_gradient(
    model: LinearChainCrfModel, batch: Batch
) -> tuple[float, list[np.ndarray]]:
    """Summed negative log-likelihood and its gradient over a batch.

    The loss is the sum over examples of log-partition minus gold score.
    The gradient of each parameter block is expected counts under the
    model (forward-backward marginals) minus observed gold counts, in
    the same order as ``model.parameters()``.
    """
    weights = model.emission_weights
    d_em = np.zeros_like(weights)
    d_trans = np.zeros_like(model.transitions)
    d_start = np.zeros_like(model.start)
    d_stop = np.zeros_like(model.stop)
    trans, start = _potentials(model)
    loss = 0.0

    for encoded, gold in batch:
        _require_nonempty(encoded)
        ids = _label_ids(model.labels, gold)
        n = len(encoded)
        if len(ids) != n:
            raise ValueError(f"{len(ids)} gold labels for {n} positions")
        em = _emissions(weights, encoded)

        alpha = np.empty_like(em)
        beta = np.empty_like(em)
        alpha[0] = start + em[0]
        for t in range(1, n):
            alpha[t] = logsumexp(alpha[t - 1][:, None] + trans, axis=0) + em[t]
        beta[-1] = model.stop
        for t in range(n - 2, -1, -1):
            beta[t] = logsumexp(trans + (em[t + 1] + beta[t + 1])[None, :], axis=1)
        log_z = float(logsumexp(alpha[-1] + model.stop))

        gold_score = start[ids[0]] + model.stop[ids[-1]]
        gold_score += em[np.arange(n), ids].sum()
        if n > 1:
            gold_score += trans[ids[:-1], ids[1:]].sum()
        loss += log_z - float(gold_score)

        # node marginals minus gold one-hots, routed through the indicators
        resid = np.exp(alpha + beta - log_z)
        resid[np.arange(n), ids] -= 1.0
        for t, feats in enumerate(encoded):
            if feats:
                np.add.at(d_em, np.asarray(feats, dtype=np.intp), resid[t])
        d_em[-1] += resid.sum(axis=0)

        for t in range(n - 1):
            d_trans += np.exp(
                alpha[t][:, None] + trans + (em[t + 1] + beta[t + 1])[None, :] - log_z
            )
        if n > 1:
            np.add.at(d_trans, (ids[:-1], ids[1:]), -1.0)

        d_start += np.exp(alpha[0] + beta[0] - log_z)
        d_start[ids[0]] -= 1.0
        d_stop += np.exp(alpha[-1] + beta[-1] - log_z)
        d_stop[ids[-1]] -= 1.0

    return loss, [d_em, d_trans, d_start, d_stop]


def baseline_nll_gradient(
    model: TokenClassifierModel, batch: Batch
) -> tuple[float, list[np.ndarray]]:
    """Summed per-token cross-entropy and its gradient over a batch."""
    weights = model.weights
    d_w = np.zeros_like(weights)
    loss = 0.0
    for encoded, gold in batch:
        _require_nonempty(encoded)
        ids = _label_ids(model.labels, gold)
        n = len(encoded)
        if len(ids) != n:
            raise ValueError(f"{len(ids)} gold labels for {n} positions")
        em = _emissions(weights, encoded)
        lse = logsumexp(em, axis=1)
        loss += float(lse.sum() - em[np.arange(n), ids].sum())
        resid = np.exp(em - lse[:, None])
        resid[np.arange(n), ids] -= 1.0
        for t, feats in enumerate(encoded):
            if feats:
                np.add.at(d_w, np.asarray(feats, dtype=np.intp), resid[t])
        d_w[-1] += resid.sum(axis=0)
    return loss, [d_w]


def predict(
    model: "TokenClassifierModel | LinearChainCrfModel", corpus: Corpus
) -> list[BioSequence]:
    """One label sequence per document; argmax per token or Viterbi.

    Prediction always uses the full feature bags. Downstream span
    recovery should use the lenient decode, since unconstrained models
    may emit stray continuation labels.
    """
    out: list[BioSequence] = []
    for doc in corpus:
        encoded = model.feature_index.encode_document(doc)
        if not encoded:
            out.append(BioSequence(()))
        elif isinstance(model, LinearChainCrfModel):
            out.append(crf_viterbi(model, encoded))
        else:
            em = _emissions(model.weights, encoded)
            picks = np.argmax(em, axis=1)  # first max = lowest label id
            out.append(BioSequence(tuple(model.labels[i] for i in picks)))
    return out


# ---------------------------------------------------------------------------
# JSON round trip, used by the CLI model files.


def model_to_dict(model: "TokenClassifierModel | LinearChainCrfModel") -> dict:
    obj: dict = {
        "arch": model.arch,
        "labels": list(model.labels),
        "feature_ids": dict(model.feature_index.ids),
    }
    if isinstance(model, LinearChainCrfModel):
        obj["emission_weights"] = model.emission_weights.tolist()
        obj["transitions"] = model.transitions.tolist()
        obj["start"] = model.start.tolist()
        obj["stop"] = model.stop.tolist()
        obj["masked"] = model.masked
    else:
        obj["weights"] = model.weights.tolist()
    return obj


def model_from_dict(obj: dict) -> "TokenClassifierModel | LinearChainCrfModel":
    arch = obj.get("arch")
    index = FeatureIndex(obj["feature_ids"])
    labels = tuple(obj["labels"])
    if arch == "crf":
        return LinearChainCrfModel(
            index,
            labels,
            np.asarray(obj["emission_weights"], dtype=float),
            np.asarray(obj["transitions"], dtype=float),
            np.asarray(obj["start"], dtype=float),
            np.asarray(obj["stop"], dtype=float),
            bool(obj.get("masked", False)),
        )
    if arch == "baseline":
        return TokenClassifierModel(
            index, labels, np.asarray(obj["weights"], dtype=float)
        )
    raise ValueError(f"unknown architecture {arch!r}")
