//! Corpus data model: snippets, curation, pairing, anonymization,
//! statistics and the project file.

mod anonymize;
mod pairing;
mod persist;
mod project;
mod stats;

pub use anonymize::{parse_name_list, Anonymized, Anonymizer, PersonPatterns, Replacement};
pub use pairing::{pair_overlapping, SnippetPair, DEFAULT_MIN_IOU};
pub use persist::{
    load_project, project_to_string, read_project, save_project, write_project, FORMAT_NAME,
    FORMAT_VERSION,
};
pub use project::{snippet_id, CorpusProject, CurationTag, Movie, Snippet, SnippetPatch, Source};
pub use stats::{compute_stats, render_stats_table, thousands, CorpusStats, SourceStats};

use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum CorpusError {
    #[error("unknown movie {0:?}")]
    UnknownMovie(String),
    #[error("unknown snippet {0:?}")]
    UnknownSnippet(String),
    #[error("duplicate snippet id {0:?}")]
    DuplicateSnippet(String),
    #[error("snippet {snippet:?} ends at {end_s} s, past the movie end {duration_s} s")]
    OutOfBounds {
        snippet: String,
        end_s: f64,
        duration_s: f64,
    },
    #[error("revision {expected} is stale, project is at {actual}")]
    StaleRevision { expected: u64, actual: u64 },
    #[error("snippet {0:?} is locked")]
    Locked(String),
    #[error("project format version {found} is not supported (expected {supported}); re-export with a matching tool version")]
    UnsupportedVersion { found: String, supported: u32 },
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("io: {0}")]
    Io(String),
}

impl From<std::io::Error> for CorpusError {
    fn from(e: std::io::Error) -> Self {
        CorpusError::Io(e.to_string())
    }
}
