"""Performance prediction for span identification tasks.

A linear meta-model maps architecture flags, span-type measurements, and
their pairwise interactions onto the expected exact-match F1 of an
architecture on a span type. Scores are fitted in a padded-logit space,
which keeps scores of exactly 0 or 100 finite, and every predictor
column is standardized to mean zero and unit variance before fitting so
coefficient magnitudes are comparable.

The full design has 31 columns: an intercept, eight standardized main
effects (four architecture flags and the logs of frequency and span
length plus the two distinctiveness scores), sixteen architecture by
measurement interactions, and six architecture by architecture
interactions. Interaction columns are products of the raw mains,
standardized after the product is taken; for the architecture by
architecture terms the raw product is simply the logical AND of the two
flags. Built this way, the refit coefficient table reproduces the
reference study's reported signs and magnitudes (see the ledgered
comparison in the reproduction report).

Generalization is estimated with leave-one-span-type-out cross
validation: each fold holds out every observation of one span type,
refits the standardization and the regression on the rest, and scores
the held-out rows in F1 space after undoing the padded logit.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Mapping, Sequence

import numpy as np
from scipy import special, stats

from .metrics import SpanTypeProfile

__all__ = [
    "ARCH_MAINS",
    "TASK_MAINS",
    "MAIN_COLUMNS",
    "INTERACTION_COLUMNS",
    "FULL_COLUMNS",
    "PREDICTOR_SETS",
    "DEFAULT_ALPHA",
    "DEFAULT_ALPHA_GRID",
    "BONFERRONI_P",
    "ArchitectureFeatures",
    "Observation",
    "DesignMatrix",
    "MetaModel",
    "CrossValidationResult",
    "padded_logit",
    "inverse_padded_logit",
    "build_design_matrix",
    "fit_ols",
    "fit_elastic_net",
    "fit_meta_model",
    "loso_cv",
    "ablate",
    "alpha_mae_curve",
    "select_alpha",
    "predict",
    "meta_model_to_dict",
    "meta_model_from_dict",
    "observations_to_csv",
    "observations_from_csv",
]

ARCH_MAINS = ("feat", "crf", "lstm", "bert")
TASK_MAINS = ("log_freq", "log_length", "span_dist", "boundary_dist")
MAIN_COLUMNS = ARCH_MAINS + TASK_MAINS

_ARCH_TASK_PAIRS = tuple((a, t) for a in ARCH_MAINS for t in TASK_MAINS)
_ARCH_ARCH_PAIRS = (
    ("feat", "crf"),
    ("feat", "lstm"),
    ("feat", "bert"),
    ("crf", "lstm"),
    ("crf", "bert"),
    ("lstm", "bert"),
)
INTERACTION_PAIRS = _ARCH_TASK_PAIRS + _ARCH_ARCH_PAIRS
INTERACTION_COLUMNS = tuple(f"{a}:{b}" for a, b in INTERACTION_PAIRS)

INTERCEPT = "intercept"
FULL_COLUMNS = (INTERCEPT,) + MAIN_COLUMNS + INTERACTION_COLUMNS

#: Non-intercept columns used by each named predictor set.
PREDICTOR_SETS: dict[str, tuple[str, ...]] = {
    "full": MAIN_COLUMNS + INTERACTION_COLUMNS,
    "no_interactions": MAIN_COLUMNS,
    "arch_only": ARCH_MAINS,
    "task_only": TASK_MAINS,
    "empty": (),
}

DEFAULT_ALPHA = 0.2
DEFAULT_ALPHA_GRID = tuple(round(0.05 * k, 2) for k in range(1, 10))

#: Bonferroni-corrected two-sided significance threshold.
BONFERRONI_P = 0.002


@dataclass(frozen=True)
class ArchitectureFeatures:
    """Which of the four architectural ingredients a labeler uses."""

    has_feat: bool
    has_crf: bool
    has_lstm: bool
    has_bert: bool

    def flags(self) -> tuple[float, float, float, float]:
        return (
            float(self.has_feat),
            float(self.has_crf),
            float(self.has_lstm),
            float(self.has_bert),
        )


@dataclass(frozen=True)
class Observation:
    """One (span type, architecture) cell: predictors plus observed F1."""

    span_type_id: str
    arch: ArchitectureFeatures
    profile: SpanTypeProfile
    f1: float

    def __post_init__(self) -> None:
        if not 0.0 <= self.f1 <= 100.0:
            raise ValueError(f"F1 must lie in [0, 100], got {self.f1}")


# ---------------------------------------------------------------------------
# Padded logit


def _check_alpha(alpha: float) -> None:
    if not 0.0 <= alpha < 0.5:
        raise ValueError(f"alpha must lie in [0, 0.5), got {alpha}")


def padded_logit(f1, alpha: float = DEFAULT_ALPHA):
    """Map F1 in [0, 100] onto an unbounded fitting scale.

    The score is squeezed affinely into [alpha, 1 - alpha] and passed
    through the logit. Strictly increasing in f1; for alpha > 0 the
    endpoints 0 and 100 stay finite. Accepts scalars or arrays.
    """
    _check_alpha(alpha)
    arr = np.asarray(f1, dtype=float)
    if np.any((arr < 0.0) | (arr > 100.0)):
        raise ValueError("F1 scores must lie in [0, 100]")
    squeezed = (1.0 - alpha) * arr / 100.0 + alpha * (100.0 - arr) / 100.0
    out = special.logit(squeezed)
    return float(out) if np.isscalar(f1) else out


def inverse_padded_logit(value, alpha: float = DEFAULT_ALPHA):
    """Invert :func:`padded_logit`, clamping the result into [0, 100].

    The clamp matters for model predictions, which can leave the padded
    band even though every attainable F1 maps inside it.
    """
    _check_alpha(alpha)
    arr = np.asarray(value, dtype=float)
    squeezed = special.expit(arr)
    f1 = 100.0 * (squeezed - alpha) / (1.0 - 2.0 * alpha)
    out = np.clip(f1, 0.0, 100.0)
    return float(out) if np.isscalar(value) else out


# ---------------------------------------------------------------------------
# Design matrix


def raw_predictors(observations: Sequence[Observation]) -> np.ndarray:
    """The eight untransformed mains, one row per observation."""
    rows = []
    for o in observations:
        p = o.profile
        rows.append(
            o.arch.flags()
            + (
                math.log(p.frequency),
                math.log(p.span_length),
                p.span_distinctiveness,
                p.boundary_distinctiveness,
            )
        )
    return np.asarray(rows, dtype=float)


@dataclass(frozen=True)
class DesignMatrix:
    """A standardized predictor matrix plus the state needed to reuse it.

    The stored means and standard deviations let held-out observations be
    mapped through exactly the transformation fitted on training rows,
    which is what cross validation requires.
    """

    column_names: tuple[str, ...]
    predictor_set: str
    mains_used: tuple[str, ...]
    main_means: np.ndarray
    main_sds: np.ndarray
    interaction_means: np.ndarray
    interaction_sds: np.ndarray
    matrix: np.ndarray | None = None

    @property
    def has_interactions(self) -> bool:
        return self.predictor_set == "full"

    def transform(self, observations: Sequence[Observation]) -> np.ndarray:
        """Build rows for new observations with the stored statistics."""
        raw = raw_predictors(observations)
        idx = [MAIN_COLUMNS.index(name) for name in self.mains_used]
        z = (raw[:, idx] - self.main_means) / self.main_sds
        cols = [np.ones(len(raw)), *z.T]
        if self.has_interactions:
            prods = _raw_interactions(raw)
            zp = (prods - self.interaction_means) / self.interaction_sds
            cols.extend(zp.T)
        return np.column_stack(cols)


def _raw_interactions(raw: np.ndarray) -> np.ndarray:
    """Pairwise products of the raw mains, one column per interaction."""
    col = {name: raw[:, j] for j, name in enumerate(MAIN_COLUMNS)}
    return np.column_stack([col[a] * col[b] for a, b in INTERACTION_PAIRS])


def build_design_matrix(
    observations: Sequence[Observation], predictor_set: str = "full"
) -> DesignMatrix:
    """Standardize predictors and assemble the design matrix.

    Every non-intercept column of the result has mean 0 and standard
    deviation 1; interaction columns are standardized products of the
    raw mains. A predictor that is constant across the observations
    cannot be standardized and raises, naming the offending column.
    """
    if predictor_set not in PREDICTOR_SETS:
        raise ValueError(
            f"predictor set must be one of {sorted(PREDICTOR_SETS)}, "
            f"got {predictor_set!r}"
        )
    observations = list(observations)
    if len(observations) < 2:
        raise ValueError("need at least two observations")
    mains_used = tuple(
        name for name in MAIN_COLUMNS if name in PREDICTOR_SETS[predictor_set]
    )
    raw = raw_predictors(observations)
    idx = [MAIN_COLUMNS.index(name) for name in mains_used]
    sub = raw[:, idx] if idx else np.empty((len(observations), 0))
    means = sub.mean(axis=0) if idx else np.empty(0)
    sds = sub.std(axis=0) if idx else np.empty(0)
    for j, name in enumerate(mains_used):
        if sds[j] == 0.0:
            raise ValueError(f"zero-variance predictor column: {name}")
    z = (sub - means) / sds if idx else sub

    cols = [np.ones(len(observations)), *z.T]
    names = [INTERCEPT, *mains_used]
    if predictor_set == "full":
        prods = _raw_interactions(raw)
        pmeans = prods.mean(axis=0)
        psds = prods.std(axis=0)
        for j, name in enumerate(INTERACTION_COLUMNS):
            if psds[j] == 0.0:
                raise ValueError(f"zero-variance predictor column: {name}")
        zp = (prods - pmeans) / psds
        cols.extend(zp.T)
        names.extend(INTERACTION_COLUMNS)
    else:
        pmeans = np.empty(0)
        psds = np.empty(0)

    return DesignMatrix(
        column_names=tuple(names),
        predictor_set=predictor_set,
        mains_used=mains_used,
        main_means=means,
        main_sds=sds,
        interaction_means=pmeans,
        interaction_sds=psds,
        matrix=np.column_stack(cols),
    )


# ---------------------------------------------------------------------------
# Fitting


@dataclass(frozen=True)
class MetaModel:
    """A fitted linear model over a standardized design.

    Inference fields are populated by :func:`fit_ols`; the elastic net
    leaves them ``None`` because classical standard errors do not apply
    to penalized estimates.
    """

    alpha: float
    design: DesignMatrix
    coefficients: np.ndarray
    standard_errors: np.ndarray | None = None
    t_statistics: np.ndarray | None = None
    p_values: np.ndarray | None = None
    significant: np.ndarray | None = None
    residual_df: int | None = None
    sigma2: float | None = None

    @property
    def column_names(self) -> tuple[str, ...]:
        return self.design.column_names

    def coefficient(self, name: str) -> float:
        return float(self.coefficients[self.column_names.index(name)])


def _check_xy(design: DesignMatrix, y) -> tuple[np.ndarray, np.ndarray]:
    if design.matrix is None:
        raise ValueError("design matrix has no rows; was it deserialized?")
    X = design.matrix
    y = np.asarray(y, dtype=float)
    if y.shape != (X.shape[0],):
        raise ValueError(f"y must have shape ({X.shape[0]},), got {y.shape}")
    return X, y


def fit_ols(design: DesignMatrix, y, alpha: float = DEFAULT_ALPHA) -> MetaModel:
    """Ordinary least squares with classical inference statistics.

    Standard errors come from ``sigma2 * inv(X'X)`` with
    ``sigma2 = RSS / (n - k)``; p-values are two-sided t tests on n - k
    degrees of freedom, and the significance flag applies the
    Bonferroni-corrected threshold p < 0.002.

    Raises:
        ValueError: if the design is rank deficient, listing the columns
            that are linearly dependent on earlier ones.
    """
    _check_alpha(alpha)
    X, y = _check_xy(design, y)
    n, k = X.shape
    if n <= k:
        raise ValueError(f"need more observations ({n}) than columns ({k})")

    import scipy.linalg as sla

    _, R, piv = sla.qr(X, mode="economic", pivoting=True)
    diag = np.abs(np.diag(R))
    tol = diag.max() * max(n, k) * np.finfo(float).eps
    rank = int((diag > tol).sum())
    if rank < k:
        dependent = sorted(design.column_names[j] for j in piv[rank:])
        raise ValueError(
            "design matrix is rank deficient; dependent columns: "
            + ", ".join(dependent)
        )

    beta, *_ = np.linalg.lstsq(X, y, rcond=None)
    resid = y - X @ beta
    rss = float(resid @ resid)
    dof = n - k
    sigma2 = rss / dof
    cov = sigma2 * np.linalg.inv(X.T @ X)
    se = np.sqrt(np.diag(cov))
    t = beta / se
    p = 2.0 * stats.t.sf(np.abs(t), dof)
    return MetaModel(
        alpha=alpha,
        design=design,
        coefficients=beta,
        standard_errors=se,
        t_statistics=t,
        p_values=p,
        significant=p < BONFERRONI_P,
        residual_df=dof,
        sigma2=sigma2,
    )


def _soft_threshold(value: float, threshold: float) -> float:
    if value > threshold:
        return value - threshold
    if value < -threshold:
        return value + threshold
    return 0.0


def fit_elastic_net(
    design: DesignMatrix,
    y,
    l1_weight: float,
    l2_weight: float,
    alpha: float = DEFAULT_ALPHA,
    max_sweeps: int = 200_000,
    tol: float = 1e-13,
) -> MetaModel:
    """Elastic net by cyclic coordinate descent.

    Minimizes ``0.5 * ||y - X b||^2 + 0.5 * l2 * ||b||^2 + l1 * sum_j |b_j|``
    where the l1 sum skips the intercept. The l2 term covers every
    coefficient, so with ``l1_weight = 0`` the solution is exactly ridge
    regression ``inv(X'X + l2 I) X'y``; with both weights zero it matches
    ordinary least squares.
    """
    _check_alpha(alpha)
    if l1_weight < 0.0 or l2_weight < 0.0:
        raise ValueError("penalty weights must be non-negative")
    X, y = _check_xy(design, y)
    n, k = X.shape
    beta = np.zeros(k)
    col_sq = (X * X).sum(axis=0)
    if np.any(col_sq == 0.0):
        raise ValueError("design matrix contains an all-zero column")
    skip_l1 = np.array([name == INTERCEPT for name in design.column_names])
    resid = y.copy()
    for _ in range(max_sweeps):
        max_delta = 0.0
        for j in range(k):
            xj = X[:, j]
            rho = float(xj @ resid) + col_sq[j] * beta[j]
            if l1_weight > 0.0 and not skip_l1[j]:
                rho = _soft_threshold(rho, l1_weight)
            new = rho / (col_sq[j] + l2_weight)
            if new != beta[j]:
                resid += xj * (beta[j] - new)
                max_delta = max(max_delta, abs(new - beta[j]))
                beta[j] = new
        if max_delta <= tol * max(1.0, float(np.abs(beta).max())):
            break
    return MetaModel(alpha=alpha, design=design, coefficients=beta)


def fit_meta_model(
    observations: Sequence[Observation],
    alpha: float = DEFAULT_ALPHA,
    predictor_set: str = "full",
) -> MetaModel:
    """Standardize over all observations and fit by least squares."""
    observations = list(observations)
    design = build_design_matrix(observations, predictor_set)
    y = padded_logit(np.array([o.f1 for o in observations]), alpha)
    return fit_ols(design, y, alpha)


def predict(
    model: MetaModel, arch: ArchitectureFeatures, profile: SpanTypeProfile
) -> float:
    """Predicted F1 for one architecture on one span-type profile."""
    obs = Observation(profile.type_id, arch, profile, f1=0.0)
    x = model.design.transform([obs])
    value = float((x @ model.coefficients)[0])
    return float(inverse_padded_logit(value, model.alpha))


# ---------------------------------------------------------------------------
# Cross validation


@dataclass(frozen=True)
class CrossValidationResult:
    """Pooled held-out predictions plus summary errors, all in F1 space."""

    predictor_set: str
    alpha: float
    predictions: np.ndarray
    actual: np.ndarray
    mae: float
    r2: float | None


def _group_order(observations: Sequence[Observation]) -> list[str]:
    seen: set[str] = set()
    order: list[str] = []
    for o in observations:
        if o.span_type_id not in seen:
            seen.add(o.span_type_id)
            order.append(o.span_type_id)
    return order


def loso_cv(
    observations: Sequence[Observation],
    alpha: float = DEFAULT_ALPHA,
    predictor_set: str = "full",
) -> CrossValidationResult:
    """Leave-one-span-type-out cross validation.

    For each span type, every observation of that type is held out, the
    design standardization and regression are refitted on the remaining
    types, and the held-out rows are predicted and mapped back to F1.
    MAE and r2 are computed on the pooled held-out predictions. The
    ``empty`` predictor set predicts the training fold's mean F1 and has
    no defined r2.
    """
    _check_alpha(alpha)
    if predictor_set not in PREDICTOR_SETS:
        raise ValueError(
            f"predictor set must be one of {sorted(PREDICTOR_SETS)}, "
            f"got {predictor_set!r}"
        )
    observations = list(observations)
    order = _group_order(observations)
    if len(order) < 2:
        raise ValueError(
            "leave-one-span-type-out needs at least two span types, "
            f"got {len(order)}"
        )
    actual = np.array([o.f1 for o in observations])
    preds = np.empty(len(observations))
    for type_id in order:
        test_idx = [i for i, o in enumerate(observations) if o.span_type_id == type_id]
        train = [o for o in observations if o.span_type_id != type_id]
        if predictor_set == "empty":
            preds[test_idx] = float(np.mean([o.f1 for o in train]))
            continue
        design = build_design_matrix(train, predictor_set)
        y = padded_logit(np.array([o.f1 for o in train]), alpha)
        model = fit_ols(design, y, alpha)
        x_test = design.transform([observations[i] for i in test_idx])
        preds[test_idx] = inverse_padded_logit(x_test @ model.coefficients, alpha)
    mae = float(np.mean(np.abs(preds - actual)))
    if predictor_set == "empty":
        r2 = None
    else:
        ss_tot = float(np.sum((actual - actual.mean()) ** 2))
        r2 = None if ss_tot == 0.0 else 1.0 - float(np.sum((preds - actual) ** 2)) / ss_tot
    return CrossValidationResult(
        predictor_set=predictor_set,
        alpha=alpha,
        predictions=preds,
        actual=actual,
        mae=mae,
        r2=r2,
    )


def ablate(
    observations: Sequence[Observation], alpha: float = DEFAULT_ALPHA
) -> dict[str, CrossValidationResult]:
    """Cross-validate every named predictor set, strongest first."""
    return {
        name: loso_cv(observations, alpha, name)
        for name in ("full", "no_interactions", "arch_only", "task_only", "empty")
    }


def alpha_mae_curve(
    observations: Sequence[Observation],
    grid: Sequence[float] | None = None,
    predictor_set: str = "full",
) -> list[tuple[float, float]]:
    """Full-model cross-validation MAE at each padding value."""
    grid = DEFAULT_ALPHA_GRID if grid is None else tuple(grid)
    if not grid:
        raise ValueError("alpha grid is empty")
    for a in grid:
        _check_alpha(a)
    return [(a, loso_cv(observations, a, predictor_set).mae) for a in grid]


def select_alpha(
    observations: Sequence[Observation], grid: Sequence[float] | None = None
) -> float:
    """Grid value minimizing cross-validated MAE; ties go to the smallest."""
    curve = alpha_mae_curve(observations, grid)
    best_alpha, best_mae = curve[0]
    for a, mae in curve[1:]:
        if mae < best_mae:
            best_alpha, best_mae = a, mae
    return best_alpha


# ---------------------------------------------------------------------------
# Serialization and observation CSV I/O


def meta_model_to_dict(model: MetaModel) -> dict:
    """JSON-ready representation, including the standardization state."""
    d = model.design

    def named(values) -> dict[str, float] | None:
        if values is None:
            return None
        return {name: float(v) for name, v in zip(model.column_names, values)}

    return {
        "alpha": model.alpha,
        "predictor_set": d.predictor_set,
        "columns": list(model.column_names),
        "coefficients": named(model.coefficients),
        "standard_errors": named(model.standard_errors),
        "t_statistics": named(model.t_statistics),
        "p_values": named(model.p_values),
        "significant": (
            None
            if model.significant is None
            else {
                name: bool(v)
                for name, v in zip(model.column_names, model.significant)
            }
        ),
        "residual_df": model.residual_df,
        "sigma2": model.sigma2,
        "standardization": {
            "mains": {
                name: {"mean": float(m), "sd": float(s)}
                for name, m, s in zip(d.mains_used, d.main_means, d.main_sds)
            },
            "interactions": {
                name: {"mean": float(m), "sd": float(s)}
                for name, m, s in zip(
                    INTERACTION_COLUMNS, d.interaction_means, d.interaction_sds
                )
            },
        },
    }


def meta_model_from_dict(payload: Mapping) -> MetaModel:
    """Rebuild a model saved by :func:`meta_model_to_dict`.

    The design matrix rows are not stored, so the result supports
    prediction but not refitting.
    """
    columns = tuple(payload["columns"])
    std = payload["standardization"]
    # key order in the payload is not trustworthy (JSON writers may sort),
    # so recover the design's column order from the canonical catalogs
    mains_used = tuple(n for n in MAIN_COLUMNS if n in std["mains"])
    if len(mains_used) != len(std["mains"]):
        unknown = sorted(set(std["mains"]) - set(MAIN_COLUMNS))
        raise ValueError(f"unknown main-effect columns: {', '.join(unknown)}")
    interactions = tuple(n for n in INTERACTION_COLUMNS if n in std["interactions"])
    if len(interactions) != len(std["interactions"]):
        unknown = sorted(set(std["interactions"]) - set(INTERACTION_COLUMNS))
        raise ValueError(f"unknown interaction columns: {', '.join(unknown)}")
    design = DesignMatrix(
        column_names=columns,
        predictor_set=payload["predictor_set"],
        mains_used=mains_used,
        main_means=np.array([std["mains"][m]["mean"] for m in mains_used]),
        main_sds=np.array([std["mains"][m]["sd"] for m in mains_used]),
        interaction_means=np.array(
            [std["interactions"][n]["mean"] for n in interactions]
        ),
        interaction_sds=np.array(
            [std["interactions"][n]["sd"] for n in interactions]
        ),
        matrix=None,
    )

    def arr(key: str) -> np.ndarray | None:
        if payload.get(key) is None:
            return None
        return np.array([payload[key][name] for name in columns])

    sig = payload.get("significant")
    return MetaModel(
        alpha=float(payload["alpha"]),
        design=design,
        coefficients=arr("coefficients"),
        standard_errors=arr("standard_errors"),
        t_statistics=arr("t_statistics"),
        p_values=arr("p_values"),
        significant=(
            None if sig is None else np.array([bool(sig[name]) for name in columns])
        ),
        residual_df=payload.get("residual_df"),
        sigma2=payload.get("sigma2"),
    )


_CSV_HEADER = [
    "span_type",
    "feat",
    "crf",
    "lstm",
    "bert",
    "freq",
    "length",
    "sd",
    "bd",
    "f1",
]


def observations_to_csv(observations: Sequence[Observation], path: str | Path) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(_CSV_HEADER)
        for o in observations:
            p = o.profile
            writer.writerow(
                [
                    o.span_type_id,
                    int(o.arch.has_feat),
                    int(o.arch.has_crf),
                    int(o.arch.has_lstm),
                    int(o.arch.has_bert),
                    p.frequency,
                    repr(p.span_length),
                    repr(p.span_distinctiveness),
                    repr(p.boundary_distinctiveness),
                    repr(o.f1),
                ]
            )


def observations_from_csv(path: str | Path) -> list[Observation]:
    """Read observations from the flat CSV interchange format."""
    with open(path, encoding="utf-8", newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None or list(reader.fieldnames) != _CSV_HEADER:
            raise ValueError(
                f"observation CSV must have header {','.join(_CSV_HEADER)}"
            )
        out = []
        for lineno, row in enumerate(reader, start=2):
            try:
                arch = ArchitectureFeatures(
                    bool(int(row["feat"])),
                    bool(int(row["crf"])),
                    bool(int(row["lstm"])),
                    bool(int(row["bert"])),
                )
                profile = SpanTypeProfile(
                    type_id=row["span_type"],
                    frequency=int(row["freq"]),
                    span_length=float(row["length"]),
                    span_distinctiveness=float(row["sd"]),
                    boundary_distinctiveness=float(row["bd"]),
                )
                out.append(
                    Observation(row["span_type"], arch, profile, float(row["f1"]))
                )
            except (TypeError, ValueError, KeyError) as e:
                raise ValueError(f"observation CSV line {lineno}: {e}") from e
    return out
