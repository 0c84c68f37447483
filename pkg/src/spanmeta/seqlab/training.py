"""Training loop shared by both labelers.

One protocol for both architectures: Adam on minibatches of whole
documents, indicator dropout re-sampled at every presentation, and early
stopping gated by an exponential moving average of dev micro-F1. After
each epoch the model is checkpointed if its dev F1 is the best so far;
training stops once an epoch's F1 falls below the running average, and
the best checkpoint is returned. Everything downstream of the seed is
deterministic.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from ..corpus import BioSequence, Corpus, Document, bio_decode, bio_encode, bio_labels
from ..evaluation import EvalCounts, count_matches, f1_report
from .features import FeatureIndex
from .models import (
    LinearChainCrfModel,
    TokenClassifierModel,
    baseline_nll_gradient,
    crf_nll_gradient,
    predict,
)

__all__ = ["TrainConfig", "Adam", "EpochRecord", "TrainResult", "train"]

ARCHITECTURES = ("baseline", "crf")


@dataclass(frozen=True)
class TrainConfig:
    learning_rate: float = 1e-3
    betas: tuple[float, float] = (0.9, 0.999)
    eps: float = 1e-8
    feature_dropout_prob: float = 0.5
    ema_decay: float = 0.9
    batch_size: int = 8
    max_epochs: int = 50
    seed: int = 0
    mask_invalid_transitions: bool = False
    dev_fraction: float = 0.1

    def __post_init__(self) -> None:
        if self.learning_rate <= 0:
            raise ValueError("learning rate must be positive")
        b1, b2 = self.betas
        if not (0 <= b1 < 1 and 0 <= b2 < 1):
            raise ValueError("adam betas must lie in [0, 1)")
        if self.eps <= 0:
            raise ValueError("adam epsilon must be positive")
        if not 0 <= self.feature_dropout_prob < 1:
            raise ValueError("feature dropout probability must lie in [0, 1)")
        if not 0 < self.ema_decay < 1:
            raise ValueError("ema decay must lie in (0, 1)")
        if self.batch_size < 1:
            raise ValueError("batch size must be at least 1")
        if self.max_epochs < 0:
            raise ValueError("max epochs cannot be negative")
        if not 0 < self.dev_fraction < 1:
            raise ValueError("dev fraction must lie in (0, 1)")


class Adam:
    """Diagonal Adam with bias correction, updating arrays in place."""

    def __init__(self, params: Sequence[np.ndarray], config: TrainConfig):
        self.params = list(params)
        self.lr = config.learning_rate
        self.b1, self.b2 = config.betas
        self.eps = config.eps
        self.t = 0
        self.m = [np.zeros_like(p) for p in self.params]
        self.v = [np.zeros_like(p) for p in self.params]

    def step(self, grads: Sequence[np.ndarray]) -> None:
        self.t += 1
        for p, g, m, v in zip(self.params, grads, self.m, self.v):
            m *= self.b1
            m += (1 - self.b1) * g
            v *= self.b2
            v += (1 - self.b2) * g * g
            m_hat = m / (1 - self.b1**self.t)
            v_hat = v / (1 - self.b2**self.t)
            p -= self.lr * m_hat / (np.sqrt(v_hat) + self.eps)


@dataclass(frozen=True)
class EpochRecord:
    """One training epoch: mean per-document loss and the dev snapshot.

    ``ema`` is the running average after this epoch was folded in; on
    the epoch that triggers early stopping it is the prior average the
    epoch failed to reach.
    """

    epoch: int
    train_loss: float
    dev_f1: float
    ema: float
    checkpointed: bool


@dataclass(frozen=True)
class TrainResult:
    model: "TokenClassifierModel | LinearChainCrfModel"
    log: tuple[EpochRecord, ...]
    stopped_early: bool


def _init_model(
    arch: str, index: FeatureIndex, labels: tuple[str, ...], config: TrainConfig
):
    rows = index.num_features + 1
    n_labels = len(labels)
    if arch == "crf":
        return LinearChainCrfModel(
            index,
            labels,
            np.zeros((rows, n_labels)),
            np.zeros((n_labels, n_labels)),
            np.zeros(n_labels),
            np.zeros(n_labels),
            config.mask_invalid_transitions,
        )
    return TokenClassifierModel(index, labels, np.zeros((rows, n_labels)))


def _dropout(
    encoded: list[list[int]], prob: float, rng: np.random.Generator
) -> list[list[int]]:
    if prob == 0.0:
        return encoded
    out = []
    for feats in encoded:
        keep = rng.random(len(feats)) >= prob
        out.append([f for f, k in zip(feats, keep) if k])
    return out


def _dev_f1(model, dev_docs: list[Document], inventory: Sequence[str]) -> float:
    corpus = Corpus(tuple(dev_docs), tuple(inventory), partition="dev")
    counts = EvalCounts()
    for doc, seq in zip(dev_docs, predict(model, corpus)):
        counts = counts + count_matches(doc.spans, bio_decode(seq, mode="lenient"))
    return f1_report(counts, types=inventory).micro.f1


def train(
    arch: str,
    train_corpus: Corpus,
    dev_corpus: Corpus | None = None,
    config: TrainConfig | None = None,
) -> TrainResult:
    """Fit one architecture and return the best dev checkpoint plus a log.

    With no dev corpus, a fraction of the training documents is held out
    for the early-stopping signal. ``max_epochs`` of 0 returns the
    zero-weight initial model with an empty log.
    """
    if arch not in ARCHITECTURES:
        raise ValueError(f"architecture must be one of {ARCHITECTURES}, got {arch!r}")
    config = TrainConfig() if config is None else config
    if len(train_corpus) == 0:
        raise ValueError("training corpus is empty")

    rng = np.random.default_rng(config.seed)
    inventory = tuple(train_corpus.span_type_inventory)
    if dev_corpus is not None:
        if tuple(dev_corpus.span_type_inventory) != inventory:
            raise ValueError("train and dev corpora must share a span-type inventory")
        train_docs = list(train_corpus.documents)
        dev_docs = list(dev_corpus.documents)
    else:
        docs = list(train_corpus.documents)
        if len(docs) < 2:
            raise ValueError(
                "need a dev corpus or at least two training documents to hold out from"
            )
        n_held = max(1, round(config.dev_fraction * len(docs)))
        n_held = min(n_held, len(docs) - 1)
        held = set(rng.permutation(len(docs))[:n_held].tolist())
        dev_docs = [d for i, d in enumerate(docs) if i in held]
        train_docs = [d for i, d in enumerate(docs) if i not in held]

    labels = bio_labels(inventory)
    index = FeatureIndex.fit(train_docs)
    model = _init_model(arch, index, labels, config)
    grad_fn = crf_nll_gradient if arch == "crf" else baseline_nll_gradient
    optimizer = Adam(model.parameters(), config)

    encoded = [index.encode_document(d) for d in train_docs]
    gold = [bio_encode(d, inventory) for d in train_docs]

    best_model = model.clone()
    best_f1 = -np.inf
    ema = 0.0
    log: list[EpochRecord] = []
    stopped = False

    for epoch in range(1, config.max_epochs + 1):
        order = rng.permutation(len(train_docs))
        epoch_loss = 0.0
        for lo in range(0, len(order), config.batch_size):
            picks = order[lo : lo + config.batch_size]
            batch = [
                (_dropout(encoded[i], config.feature_dropout_prob, rng), gold[i])
                for i in picks
            ]
            loss, grads = grad_fn(model, batch)
            epoch_loss += loss
            for g in grads:
                g /= len(picks)
            optimizer.step(grads)

        f1 = _dev_f1(model, dev_docs, inventory)
        checkpointed = f1 > best_f1
        if checkpointed:
            best_f1 = f1
            best_model = model.clone()

        if epoch == 1:
            ema = f1
        elif f1 < ema:
            stopped = True
        else:
            ema = config.ema_decay * ema + (1 - config.ema_decay) * f1
        log.append(
            EpochRecord(epoch, epoch_loss / len(train_docs), f1, ema, checkpointed)
        )
        if stopped:
            break

    return TrainResult(best_model, tuple(log), stopped)
