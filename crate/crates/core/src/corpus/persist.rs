use std::collections::BTreeMap;
use std::io::{BufRead, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::project::{CorpusProject, Movie, Snippet};
use super::CorpusError;

pub const FORMAT_NAME: &str = "moviedesc-project";
pub const FORMAT_VERSION: u32 = 1;

#[derive(Serialize, Deserialize)]
struct Header {
    format: String,
    version: u32,
    revision: u64,
    movies: BTreeMap<String, Movie>,
}

#[derive(Deserialize)]
struct VersionProbe {
    format: Option<String>,
    version: Option<serde_json::Value>,
}

/// Header line followed by one snippet per line.
pub fn write_project<W: Write>(project: &CorpusProject, mut w: W) -> Result<(), CorpusError> {
    let header = Header {
        format: FORMAT_NAME.to_string(),
        version: FORMAT_VERSION,
        revision: project.revision(),
        movies: project.movies.clone(),
    };
    serde_json::to_writer(&mut w, &header).map_err(|e| CorpusError::Io(e.to_string()))?;
    w.write_all(b"\n")?;
    for s in project.snippets() {
        serde_json::to_writer(&mut w, s).map_err(|e| CorpusError::Io(e.to_string()))?;
        w.write_all(b"\n")?;
    }
    Ok(())
}

pub fn project_to_string(project: &CorpusProject) -> String {
    let mut buf = Vec::new();
    write_project(project, &mut buf).expect("writing to memory");
    String::from_utf8(buf).expect("json is utf-8")
}

pub fn read_project<R: BufRead>(r: R) -> Result<CorpusProject, CorpusError> {
    let mut lines = r.lines().enumerate();
    let (_, first) = lines.next().ok_or(CorpusError::Parse {
        line: 1,
        message: "empty project file".into(),
    })?;
    let first = first?;
    let probe: VersionProbe = serde_json::from_str(&first).map_err(|e| CorpusError::Parse {
        line: 1,
        message: e.to_string(),
    })?;
    if probe.format.as_deref() != Some(FORMAT_NAME) {
        return Err(CorpusError::Parse {
            line: 1,
            message: format!("not a {FORMAT_NAME} file"),
        });
    }
    match &probe.version {
        Some(serde_json::Value::Number(n)) if n.as_u64() == Some(FORMAT_VERSION as u64) => {}
        other => {
            let found = match other {
                Some(serde_json::Value::String(s)) => s.clone(),
                Some(v) => v.to_string(),
                None => "missing".into(),
            };
            return Err(CorpusError::UnsupportedVersion {
                found,
                supported: FORMAT_VERSION,
            });
        }
    }
    let header: Header = serde_json::from_str(&first).map_err(|e| CorpusError::Parse {
        line: 1,
        message: e.to_string(),
    })?;
    let project = CorpusProject::from_parts(header.movies, Vec::new(), header.revision);
    let mut snippets = Vec::new();
    let mut seen = std::collections::HashSet::new();
    for (i, line) in lines {
        let line_no = i + 1;
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let s: Snippet = serde_json::from_str(&line).map_err(|e| CorpusError::Parse {
            line: line_no,
            message: e.to_string(),
        })?;
        let at_line = |e: CorpusError| CorpusError::Parse {
            line: line_no,
            message: e.to_string(),
        };
        project.check_snippet(&s).map_err(at_line)?;
        if !seen.insert(s.id.clone()) {
            return Err(at_line(CorpusError::DuplicateSnippet(s.id)));
        }
        snippets.push(s);
    }
    Ok(CorpusProject::from_parts(project.movies, snippets, header.revision))
}

pub fn load_project(path: &Path) -> Result<CorpusProject, CorpusError> {
    let f = std::fs::File::open(path)?;
    read_project(std::io::BufReader::new(f))
}

/// Write next to `path` and rename into place.
pub fn save_project(project: &CorpusProject, path: &Path) -> Result<(), CorpusError> {
    let dir = path
        .parent()
        .filter(|p| !p.as_os_str().is_empty())
        .unwrap_or(Path::new("."));
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    write_project(project, std::io::BufWriter::new(tmp.as_file_mut()))?;
    tmp.as_file_mut().sync_all()?;
    tmp.persist(path).map_err(|e| CorpusError::Io(e.error.to_string()))?;
    Ok(())
}
