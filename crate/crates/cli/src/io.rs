use std::io::Write;
use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde::Serialize;

use crate::error::{CliError, CliResult};
use moviedesc::corpus::{load_project, save_project, CorpusProject};

pub const PROJECT_DIR_ENV: &str = "MOVIEDESC_PROJECT_DIR";
pub const PROJECT_FILE: &str = "project.jsonl";

pub fn read_text(path: &Path) -> CliResult<String> {
    std::fs::read_to_string(path).map_err(|e| CliError::data(path.display(), e))
}

pub fn read_bytes(path: &Path) -> CliResult<Vec<u8>> {
    std::fs::read(path).map_err(|e| CliError::data(path.display(), e))
}

/// Parse JSON lines; errors name the file and line.
pub fn read_jsonl<T: DeserializeOwned>(path: &Path) -> CliResult<Vec<T>> {
    let text = read_text(path)?;
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| serde_json::from_str(l).map_err(|e| CliError::data(format!("{}:{}", path.display(), i + 1), e)))
        .collect()
}

pub fn jsonl<T: Serialize>(items: impl IntoIterator<Item = T>) -> String {
    let mut out = String::new();
    for item in items {
        out.push_str(&serde_json::to_string(&item).expect("serializable record"));
        out.push('\n');
    }
    out
}

/// Replace `path` atomically: write a sibling temp file, then rename.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> CliResult<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let fail = |e: &dyn std::fmt::Display| CliError::data(path.display(), e);
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(|e| fail(&e))?;
    tmp.write_all(bytes).map_err(|e| fail(&e))?;
    tmp.persist(path).map_err(|e| fail(&e.error))?;
    Ok(())
}

/// Result text goes to `--out` when given, standard output otherwise.
pub fn emit(out: Option<&Path>, text: &str) -> CliResult<()> {
    match out {
        Some(p) => write_atomic(p, text.as_bytes()),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .and_then(|_| stdout.flush())
                .map_err(|e| CliError::data("stdout", e))
        }
    }
}

/// `--project`, else `$MOVIEDESC_PROJECT_DIR/project.jsonl`.
pub fn project_path(explicit: Option<&Path>) -> CliResult<PathBuf> {
    if let Some(p) = explicit {
        return Ok(p.to_path_buf());
    }
    match std::env::var_os(PROJECT_DIR_ENV) {
        Some(dir) if !dir.is_empty() => Ok(PathBuf::from(dir).join(PROJECT_FILE)),
        _ => Err(CliError::Usage(format!("--project is required (or set {PROJECT_DIR_ENV})"))),
    }
}

pub fn load(path: &Path) -> CliResult<CorpusProject> {
    load_project(path).map_err(|e| CliError::data(path.display(), e))
}

/// Load, or start empty if the file does not exist yet.
pub fn load_or_new(path: &Path) -> CliResult<CorpusProject> {
    if path.exists() {
        load(path)
    } else {
        Ok(CorpusProject::new())
    }
}

pub fn save(project: &CorpusProject, path: &Path) -> CliResult<()> {
    save_project(project, path).map_err(|e| CliError::data(path.display(), e))
}

pub fn progress(msg: impl AsRef<str>) {
    eprintln!("[moviedesc] {}", msg.as_ref());
}
