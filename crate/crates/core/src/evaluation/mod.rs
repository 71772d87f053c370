//! Corpus BLEU@4 and the human ranking harness.

mod bleu;
mod ranking;

pub use bleu::{bleu4, bleu_stats, parse_eval_pairs, BleuStats, EvalPair, Smoothing, MAX_ORDER};
pub use ranking::{
    export_ranking_tasks, import_rankings, mean_ranks, mean_ranks_by_criterion, parse_judgments,
    render_ranking_table, BlindJudgment, Candidate, Criterion, RankingBlock, RankingLayout, RankingRecord,
    RankingTask, TaskFile, TaskHeader, TASK_FORMAT, TASK_VERSION,
};

use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum EvalError {
    #[error("no evaluation pairs")]
    EmptyPairs,
    #[error("snippet {0} has no reference")]
    NoReference(String),
    #[error("snippet {snippet}: method set differs from the first record")]
    InconsistentMethods { snippet: String },
    #[error("snippet {snippet}: {message}")]
    InvalidRanks { snippet: String, message: String },
    #[error("method {method} has no sentence for snippet {snippet}")]
    MissingCandidate { method: String, snippet: String },
    #[error("judgment for unknown task {0}")]
    UnknownTask(String),
    #[error("{context}: {message}")]
    Format { context: String, message: String },
}
