"""Stream mining of wiki review activity: revert classification in real time
with incremental editor profiles, interpretable online models, offline
feature analysis, synthetic class balancing, and per-prediction explanations.
"""

from .aggregate import aggregate_daily
from .bayes import IncrementalNaiveBayes
from .ensemble import OnlineBaggingForest, OnlineForestConfig
from .explain import (
    CLASS_NAMES,
    Explanation,
    FeatureSpace,
    Predicate,
    decision_path,
    export_dot,
    render_nl,
    shortest_ensemble_path,
    verify_explanation,
)
from .hoeffding import HoeffdingConfig, HoeffdingTree, hoeffding_bound
from .metrics import MetricsReport, compute_metrics, empty_report
from .offline import (
    BatchGaussianNB,
    RidgeModel,
    SpearmanResult,
    batch_metrics_run,
    kfold_runs,
    select_features,
    selection_subset,
    spearman,
    train_ridge,
)
from .prequential import prequential_run, window_start
from .profiles import EditorProfile, ProfileStore, profile_feature_vector, update_profile
from .records import (
    DENSE_FEATURE_NAMES,
    N_DENSE,
    DailyRecord,
    ParseError,
    ReviewEvent,
    load_daily_records,
    load_events,
    parse_review_stream,
    save_daily_records,
)
from .seeds import derive_seed
from .synthesis import (
    QuartileStats,
    SynthConfig,
    fidelity_report,
    generate_reverts,
    kmeans_1d,
    merge_balance,
    quartile_stats,
)
from .textfeatures import (
    Lexicon,
    NgramConfig,
    NgramVocabulary,
    WordList,
    count_wordlist,
    fit_ngram_vocabulary,
    normalize_text,
    polarity,
    vectorize,
)
from .trees import (
    ForestModel,
    TreeNode,
    feature_importance,
    oob_accuracy,
    train_cart,
    train_forest,
    tree_predict,
)

__version__ = "0.1.0"

__all__ = [
    "aggregate_daily",
    "IncrementalNaiveBayes",
    "OnlineBaggingForest",
    "OnlineForestConfig",
    "CLASS_NAMES",
    "Explanation",
    "FeatureSpace",
    "Predicate",
    "decision_path",
    "export_dot",
    "render_nl",
    "shortest_ensemble_path",
    "verify_explanation",
    "HoeffdingConfig",
    "HoeffdingTree",
    "hoeffding_bound",
    "MetricsReport",
    "compute_metrics",
    "empty_report",
    "BatchGaussianNB",
    "RidgeModel",
    "SpearmanResult",
    "batch_metrics_run",
    "kfold_runs",
    "select_features",
    "selection_subset",
    "spearman",
    "train_ridge",
    "prequential_run",
    "window_start",
    "EditorProfile",
    "ProfileStore",
    "profile_feature_vector",
    "update_profile",
    "DENSE_FEATURE_NAMES",
    "N_DENSE",
    "DailyRecord",
    "ParseError",
    "ReviewEvent",
    "load_daily_records",
    "load_events",
    "parse_review_stream",
    "save_daily_records",
    "derive_seed",
    "QuartileStats",
    "SynthConfig",
    "fidelity_report",
    "generate_reverts",
    "kmeans_1d",
    "merge_balance",
    "quartile_stats",
    "Lexicon",
    "NgramConfig",
    "NgramVocabulary",
    "WordList",
    "count_wordlist",
    "fit_ngram_vocabulary",
    "normalize_text",
    "polarity",
    "vectorize",
    "ForestModel",
    "TreeNode",
    "feature_importance",
    "oob_accuracy",
    "train_cart",
    "train_forest",
    "tree_predict",
    "__version__",
]
