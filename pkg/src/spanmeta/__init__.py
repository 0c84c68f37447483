"""Span identification toolkit.

Corpora of token-indexed span annotations, BIO tagging, span-type
metrics, exact-match span F1, desk-scale sequence labelers, a linear
meta-model that predicts an architecture's F1 on a span type, and the
bundled reference study the meta-model analysis reproduces.
"""

from .corpus import (
    BioSequence,
    Corpus,
    CorpusFormatError,
    Document,
    Span,
    Token,
    bio_decode,
    bio_encode,
    bio_labels,
    read_corpus,
    write_corpus,
)
from .evaluation import (
    EvalCounts,
    F1Report,
    PRF,
    TypeCounts,
    average_trials,
    count_matches,
    f1_report,
)
from .meta import (
    ArchitectureFeatures,
    CrossValidationResult,
    DesignMatrix,
    MetaModel,
    Observation,
    ablate,
    alpha_mae_curve,
    build_design_matrix,
    fit_elastic_net,
    fit_meta_model,
    fit_ols,
    inverse_padded_logit,
    loso_cv,
    padded_logit,
    select_alpha,
)
from .meta import predict as predict_f1
from .metrics import (
    DatasetMetrics,
    SpanTypeProfile,
    UnigramDistribution,
    boundary_distinctiveness,
    dataset_profile,
    geometric_mean_length,
    kl_divergence,
    profile_span_type,
    span_distinctiveness,
    span_frequency,
)
from .reference import EmbeddedTables, export_table, load_embedded, to_observations
from .report import ReproductionReport, build_reproduction_report
from .seqlab import (
    FeatureIndex,
    LinearChainCrfModel,
    TokenClassifierModel,
    TrainConfig,
    TrainResult,
    crf_log_partition,
    crf_viterbi,
    sequence_score,
    train,
)
from .seqlab import predict as predict_labels
from .svgplot import scatter_svg

__version__ = "0.1.0"
