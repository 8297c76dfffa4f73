"""Ethics-related paper classification and per-venue ethics index reports."""

from .active import (
    UncertaintyBand,
    agreement_rate,
    apply_labels,
    build_queue,
    machine_label_remainder,
    refresh_probabilities,
    select_uncertain,
    training_rows,
)
from .base import Estimator, NotFittedError, clone
from .baseline import (
    KeywordClassifier,
    KeywordList,
    keyword_classify,
    lemma_keyword_list,
    load_keyword_list,
    raw_keyword_list,
)
from .corpus import (
    AnnotationVote,
    CategoryFilter,
    DocumentRecord,
    LabeledExample,
    LabelValue,
    Provenance,
    available_text,
    filter_candidates,
    load_dataset,
    majority_vote,
    parse_metadata,
    save_dataset,
)
from .evaluation import (
    MetricsReport,
    cross_validate,
    precision_recall,
    random_oversample,
    roc_auc,
    stratified_kfold,
)
from .forest import RandomForest, gini, load_forest, save_forest
from .index import aggregate_index, classify_corpus, export_report
from .linear import (
    LogisticRegressionL1,
    extract_signed_keywords,
    load_logistic,
    save_logistic,
    soft_threshold,
)
from .pipeline import TextClassifier, load_pipeline, make_classifier, save_pipeline
from .text import (
    Lemmatizer,
    TfidfVectorizer,
    Vocabulary,
    fit_vocabulary,
    lemmatize,
    tokenize,
    vectorize,
)

__version__ = "0.1.0"

__all__ = [
    "AnnotationVote",
    "CategoryFilter",
    "DocumentRecord",
    "Estimator",
    "KeywordClassifier",
    "KeywordList",
    "LabelValue",
    "LabeledExample",
    "Lemmatizer",
    "LogisticRegressionL1",
    "MetricsReport",
    "NotFittedError",
    "Provenance",
    "RandomForest",
    "TextClassifier",
    "TfidfVectorizer",
    "UncertaintyBand",
    "Vocabulary",
    "agreement_rate",
    "aggregate_index",
    "apply_labels",
    "available_text",
    "build_queue",
    "classify_corpus",
    "clone",
    "cross_validate",
    "export_report",
    "extract_signed_keywords",
    "filter_candidates",
    "fit_vocabulary",
    "gini",
    "keyword_classify",
    "lemma_keyword_list",
    "lemmatize",
    "load_dataset",
    "load_forest",
    "load_keyword_list",
    "load_logistic",
    "load_pipeline",
    "machine_label_remainder",
    "majority_vote",
    "make_classifier",
    "parse_metadata",
    "precision_recall",
    "random_oversample",
    "raw_keyword_list",
    "refresh_probabilities",
    "roc_auc",
    "save_dataset",
    "save_forest",
    "save_logistic",
    "save_pipeline",
    "select_uncertain",
    "soft_threshold",
    "stratified_kfold",
    "tokenize",
    "training_rows",
    "vectorize",
]
