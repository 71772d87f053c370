//! Description baselines over precomputed features: nearest-neighbour
//! retrieval, visual-word tuples, a three-node CRF over tuple slots,
//! template generation and SMT corpus export.

mod crf;
mod features;
mod featio;
mod kmeans;
mod smt;
mod template;
mod vwords;

pub use crf::{
    crf_map, fit_pairwise, parse_unaries, sum_unaries, CrfNode, CrfSolution, CrfVocabs,
    CrfWeights, FitReport, NodePair, PairwisePotentials, UnaryScores, DEFAULT_ALPHA,
};
pub use features::{
    intersection_distance, l1_normalize, nearest_index, nearest_neighbor, FeatureKind,
    FeatureVector,
};
pub use featio::{parse_feature_csv, read_features, read_features_bytes, write_features_binary, FeatureRecord, FEATURE_MAGIC};
pub use kmeans::{kmeans_assign, kmeans_fit, Codebook, KMeansParams, DEFAULT_K, DEFAULT_MAX_ITER};
pub use smt::{
    export_smt_parallel, format_smt_source, parse_smt_parallel, tokenize_target, tuple_from_smt_labels, SmtLine,
    write_smt_parallel,
};
pub use template::{inflect_third_person, TemplateBank};
pub use vwords::{rank_classes, visual_word_tuple, VisualWordTuple};

use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum BaselineError {
    #[error("vector is all zeros and cannot be L1-normalized")]
    Unnormalizable,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimMismatch { expected: usize, found: usize },
    #[error("non-finite value in input")]
    NonFinite,
    #[error("training set is empty")]
    EmptyTraining,
    #[error("k-means needs at least k={k} vectors, got {n}")]
    TooFewVectors { n: usize, k: usize },
    #[error("k must be at least 1")]
    InvalidK,
    #[error("need at least two detector classes, got {0}")]
    TooFewClasses(usize),
    #[error("no scored labels for node {0}")]
    EmptyNode(String),
    #[error("label {label:?} is not in the {node} vocabulary")]
    UnknownLabel { node: String, label: String },
    #[error("no training tuples")]
    EmptyTuples,
    #[error("template bank is empty")]
    EmptyBank,
    #[error("{path}: {message}")]
    Io { path: String, message: String },
    #[error("{context}: {message}")]
    Format { context: String, message: String },
}
