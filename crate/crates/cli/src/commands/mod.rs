pub mod baselines;
pub mod corpus;
pub mod evaluation;
pub mod semantic;
pub mod signal;

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};
use crate::io::{read_jsonl, read_text};
use moviedesc::semantic::SrTuple;

/// `{"id", "sentence"}`; `snippet_id` and `sentence_id` are accepted for the id.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SentenceLine {
    #[serde(alias = "snippet_id", alias = "sentence_id")]
    pub id: String,
    pub sentence: String,
}

/// A tuple with the id of the sentence or snippet it belongs to. Reads
/// parse-sr records and crf-map output alike.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TupleLine {
    #[serde(alias = "snippet_id", alias = "sentence_id")]
    pub id: String,
    #[serde(default)]
    pub clause_index: usize,
    #[serde(flatten)]
    pub tuple: SrTuple,
}

pub fn read_sentences(path: &Path) -> CliResult<Vec<SentenceLine>> {
    read_jsonl(path)
}

/// JSON lines when the first non-blank character is `{`, else one sentence
/// per line with 1-based line numbers as ids.
pub fn read_sentence_input(path: &Path) -> CliResult<Vec<SentenceLine>> {
    let text = read_text(path)?;
    if text.trim_start().starts_with('{') {
        return read_jsonl(path);
    }
    Ok(text
        .lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| SentenceLine {
            id: format!("{}", i + 1),
            sentence: l.trim().to_string(),
        })
        .collect())
}

/// Sentences by id; a repeated id is a data error.
pub fn sentence_map(path: &Path, lines: Vec<SentenceLine>) -> CliResult<BTreeMap<String, String>> {
    let mut out = BTreeMap::new();
    for l in lines {
        if out.contains_key(&l.id) {
            return Err(CliError::data(path.display(), format!("duplicate id {:?}", l.id)));
        }
        out.insert(l.id, l.sentence);
    }
    Ok(out)
}
