//! Script and subtitle parsing, dialogue word alignment and timestamp
//! inference for script description sentences.

mod dp;
mod script;
mod scoring;
mod srt;
mod tokens;

use thiserror::Error;

pub use dp::{align_dialogue_dp, WordMatch};
pub use script::{parse_script, parse_script_with, ElementKind, ScriptElement, ScriptFormat};
pub use scoring::{
    align_script, filter_reliable, infer_interval, score_descriptions, Anchor, CharSpan,
    InferredInterval, ScoredSentence, ScriptAlignment, SentenceRecord, DEFAULT_CLIP_DURATION_S,
    DEFAULT_MIN_SCORE, DEFAULT_WINDOW,
};
pub use srt::{format_timestamp, parse_srt, serialize_srt, SubtitleEntry};
pub use tokens::normalize_tokens;

#[derive(Debug, Error, PartialEq)]
pub enum AlignError {
    #[error("subtitle block {block}: {message}")]
    MalformedSubtitle { block: usize, message: String },
    #[error("unalignable script: no dialogue matched any subtitle")]
    Unalignable,
    #[error("invalid anchors: {0}")]
    InvalidAnchors(String),
}
