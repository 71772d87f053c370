use std::io::{self, Write};
use std::path::Path;

use super::BaselineError;
use crate::semantic::{LabelMode, SrTuple};

const SPLIT_PUNCT: &[char] = &['.', ',', '!', '?', ';', ':', '"', '(', ')'];

/// Source side: non-empty labels in subject, verb, object, location order,
/// each multiword label joined with underscores.
pub fn format_smt_source(t: &SrTuple) -> String {
    [t.subject.as_deref(), Some(t.verb.as_str()), t.object.as_deref(), t.location.as_deref()]
        .into_iter()
        .flatten()
        .map(|l| l.split_whitespace().collect::<Vec<_>>().join("_"))
        .filter(|l| !l.is_empty())
        .collect::<Vec<_>>()
        .join(" ")
}

/// Target side: lowercase, punctuation and `'s` as separate tokens.
pub fn tokenize_target(sentence: &str) -> Vec<String> {
    let mut out = Vec::new();
    for word in sentence.split_whitespace() {
        let lower = word.to_lowercase();
        let mut w = lower.as_str();
        while let Some(rest) = w.strip_prefix(SPLIT_PUNCT) {
            out.push(w[..w.len() - rest.len()].to_string());
            w = rest;
        }
        let mut tail = Vec::new();
        while let Some(rest) = w.strip_suffix(SPLIT_PUNCT) {
            tail.push(w[rest.len()..].to_string());
            w = rest;
        }
        if let Some(stem) = w.strip_suffix("'s").filter(|s| !s.is_empty()) {
            out.push(stem.to_string());
            out.push("'s".to_string());
        } else if !w.is_empty() {
            out.push(w.to_string());
        }
        out.extend(tail.into_iter().rev());
    }
    out
}

pub fn write_smt_parallel<W1: Write, W2: Write>(
    pairs: &[(SrTuple, String)],
    src: &mut W1,
    tgt: &mut W2,
) -> io::Result<()> {
    for (tuple, sentence) in pairs {
        writeln!(src, "{}", format_smt_source(tuple))?;
        writeln!(tgt, "{}", tokenize_target(sentence).join(" "))?;
    }
    Ok(())
}

fn io_err(path: &Path, e: impl std::fmt::Display) -> BaselineError {
    BaselineError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    }
}

fn atomic_write(path: &Path, bytes: &[u8]) -> Result<(), BaselineError> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(|e| io_err(path, e))?;
    tmp.write_all(bytes).map_err(|e| io_err(path, e))?;
    tmp.persist(path).map_err(|e| io_err(path, e.error))?;
    Ok(())
}

/// Write line-aligned source and target files. Both files are replaced
/// atomically.
pub fn export_smt_parallel(pairs: &[(SrTuple, String)], out_src: &Path, out_tgt: &Path) -> Result<(), BaselineError> {
    if pairs.is_empty() {
        return Err(BaselineError::EmptyTuples);
    }
    let mut src = Vec::new();
    let mut tgt = Vec::new();
    write_smt_parallel(pairs, &mut src, &mut tgt).expect("writing to memory");
    atomic_write(out_src, &src)?;
    atomic_write(out_tgt, &tgt)
}

/// Source labels and target tokens of one exported line.
pub type SmtLine = (Vec<String>, Vec<String>);

/// Read an exported pair of files back. Source labels come back with
/// underscores as spaces. A line with four labels is a fully filled tuple;
/// shorter lines cannot say which slots were empty, so they are returned as
/// labels only.
pub fn parse_smt_parallel(src: &str, tgt: &str) -> Result<Vec<SmtLine>, BaselineError> {
    let s: Vec<&str> = src.lines().collect();
    let t: Vec<&str> = tgt.lines().collect();
    if s.len() != t.len() {
        return Err(BaselineError::Format {
            context: "smt".into(),
            message: format!("{} source lines but {} target lines", s.len(), t.len()),
        });
    }
    Ok(s.iter()
        .zip(&t)
        .map(|(a, b)| {
            (
                a.split_whitespace().map(|l| l.replace('_', " ")).collect(),
                b.split_whitespace().map(str::to_string).collect(),
            )
        })
        .collect())
}

/// Rebuild a fully filled tuple from parsed source labels.
pub fn tuple_from_smt_labels(labels: &[String]) -> Option<SrTuple> {
    let [s, v, o, l] = labels else { return None };
    Some(SrTuple {
        subject: Some(s.clone()),
        verb: v.clone(),
        object: Some(o.clone()),
        location: Some(l.clone()),
        mode: LabelMode::Text,
    })
}
