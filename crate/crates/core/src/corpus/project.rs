use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::CorpusError;
use crate::interval::TimeInterval;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Source {
    Dvs,
    Script,
}

impl Source {
    pub const ALL: [Source; 2] = [Source::Dvs, Source::Script];
}

impl fmt::Display for Source {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Source::Dvs => "dvs",
            Source::Script => "script",
        })
    }
}

impl FromStr for Source {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "dvs" => Ok(Source::Dvs),
            "script" => Ok(Source::Script),
            other => Err(format!("unknown source {other:?}")),
        }
    }
}

/// Curation verdict for a snippet.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CurationTag {
    #[default]
    Keep,
    IntroEnding,
    ScreenText,
    Irrelevant,
    AudioRelated,
}

impl FromStr for CurationTag {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        serde_json::from_value(serde_json::Value::String(s.to_string()))
            .map_err(|_| format!("unknown tag {s:?}"))
    }
}

/// Stable snippet id: `<movie>-<source>-<index:03>`.
pub fn snippet_id(movie_id: &str, source: Source, index: usize) -> String {
    format!("{movie_id}-{source}-{index:03}")
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Snippet {
    pub id: String,
    pub movie_id: String,
    pub interval: TimeInterval,
    pub sentence: String,
    pub source: Source,
    #[serde(default)]
    pub score: Option<f64>,
    #[serde(default)]
    pub tag: CurationTag,
    #[serde(default)]
    pub locked: bool,
}

impl Snippet {
    pub fn new(
        id: impl Into<String>,
        movie_id: impl Into<String>,
        interval: TimeInterval,
        sentence: impl Into<String>,
        source: Source,
    ) -> Self {
        Self {
            id: id.into(),
            movie_id: movie_id.into(),
            interval,
            sentence: sentence.into(),
            source,
            score: None,
            tag: CurationTag::Keep,
            locked: false,
        }
    }

    pub fn kept(&self) -> bool {
        self.tag == CurationTag::Keep
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct Movie {
    pub title: String,
    #[serde(default)]
    pub duration_s: Option<f64>,
    /// Named media files, e.g. `mixed_audio`, `original_audio`, `script`.
    #[serde(default)]
    pub media: BTreeMap<String, String>,
}

/// Fields a curation edit may change; `None` leaves a field alone.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct SnippetPatch {
    #[serde(default)]
    pub interval: Option<TimeInterval>,
    #[serde(default)]
    pub sentence: Option<String>,
    #[serde(default)]
    pub tag: Option<CurationTag>,
    #[serde(default)]
    pub locked: Option<bool>,
}

/// Movies and their snippets. Every mutation bumps `revision`.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct CorpusProject {
    pub movies: BTreeMap<String, Movie>,
    snippets: Vec<Snippet>,
    revision: u64,
}

impl CorpusProject {
    pub fn new() -> Self {
        Self::default()
    }

    pub(crate) fn from_parts(movies: BTreeMap<String, Movie>, snippets: Vec<Snippet>, revision: u64) -> Self {
        Self {
            movies,
            snippets,
            revision,
        }
    }

    pub fn revision(&self) -> u64 {
        self.revision
    }

    pub fn snippets(&self) -> &[Snippet] {
        &self.snippets
    }

    pub fn snippet(&self, id: &str) -> Option<&Snippet> {
        self.snippets.iter().find(|s| s.id == id)
    }

    pub fn movie_snippets<'a>(&'a self, movie_id: &'a str) -> impl Iterator<Item = &'a Snippet> + 'a {
        self.snippets.iter().filter(move |s| s.movie_id == movie_id)
    }

    fn bump(&mut self) -> u64 {
        self.revision += 1;
        self.revision
    }

    pub fn upsert_movie(&mut self, id: impl Into<String>, movie: Movie) -> u64 {
        self.movies.insert(id.into(), movie);
        self.bump()
    }

    pub(crate) fn check_snippet(&self, s: &Snippet) -> Result<(), CorpusError> {
        let movie = self
            .movies
            .get(&s.movie_id)
            .ok_or_else(|| CorpusError::UnknownMovie(s.movie_id.clone()))?;
        check_bounds(movie, &s.id, &s.interval)
    }

    pub fn add_snippet(&mut self, snippet: Snippet) -> Result<u64, CorpusError> {
        self.check_snippet(&snippet)?;
        if self.snippet(&snippet.id).is_some() {
            return Err(CorpusError::DuplicateSnippet(snippet.id));
        }
        self.snippets.push(snippet);
        Ok(self.bump())
    }

    /// Add many snippets as one revision; nothing is added on error.
    pub fn add_snippets(&mut self, snippets: Vec<Snippet>) -> Result<u64, CorpusError> {
        let mut seen: std::collections::HashSet<&str> =
            self.snippets.iter().map(|s| s.id.as_str()).collect();
        for s in &snippets {
            self.check_snippet(s)?;
            if !seen.insert(&s.id) {
                return Err(CorpusError::DuplicateSnippet(s.id.clone()));
            }
        }
        self.snippets.extend(snippets);
        Ok(self.bump())
    }

    /// Revision-checked edit, the only way to change a locked snippet.
    /// Locked snippets accept a patch only if it also unlocks them.
    pub fn update_snippet(
        &mut self,
        id: &str,
        patch: SnippetPatch,
        expected_revision: u64,
    ) -> Result<u64, CorpusError> {
        if expected_revision != self.revision {
            return Err(CorpusError::StaleRevision {
                expected: expected_revision,
                actual: self.revision,
            });
        }
        let idx = self
            .snippets
            .iter()
            .position(|s| s.id == id)
            .ok_or_else(|| CorpusError::UnknownSnippet(id.to_string()))?;
        let current = &self.snippets[idx];
        if current.locked && patch.locked != Some(false) {
            return Err(CorpusError::Locked(id.to_string()));
        }
        if let Some(iv) = &patch.interval {
            check_bounds(&self.movies[&current.movie_id], id, iv)?;
        }
        let s = &mut self.snippets[idx];
        if let Some(iv) = patch.interval {
            s.interval = iv;
        }
        if let Some(text) = patch.sentence {
            s.sentence = text;
        }
        if let Some(tag) = patch.tag {
            s.tag = tag;
        }
        if let Some(locked) = patch.locked {
            s.locked = locked;
        }
        Ok(self.bump())
    }

    /// Rewrite the sentence of every unlocked snippet; locked ones are
    /// left as curated.
    pub fn map_unlocked_sentences(&mut self, mut f: impl FnMut(&Snippet) -> String) -> u64 {
        for s in self.snippets.iter_mut().filter(|s| !s.locked) {
            s.sentence = f(s);
        }
        self.bump()
    }
}

fn check_bounds(movie: &Movie, id: &str, iv: &TimeInterval) -> Result<(), CorpusError> {
    match movie.duration_s {
        Some(d) if iv.end_s() > d => Err(CorpusError::OutOfBounds {
            snippet: id.to_string(),
            end_s: iv.end_s(),
            duration_s: d,
        }),
        _ => Ok(()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn project() -> CorpusProject {
        let mut p = CorpusProject::new();
        p.upsert_movie(
            "m1",
            Movie {
                title: "Fixture".into(),
                duration_s: Some(100.0),
                media: BTreeMap::new(),
            },
        );
        let iv = TimeInterval::new(1.0, 3.0).unwrap();
        p.add_snippet(Snippet::new("s1", "m1", iv, "Abby runs.", Source::Dvs)).unwrap();
        p
    }

    #[test]
    fn mutations_bump_revision() {
        let mut p = project();
        assert_eq!(p.revision(), 2);
        let patch = SnippetPatch {
            tag: Some(CurationTag::Irrelevant),
            ..Default::default()
        };
        assert_eq!(p.update_snippet("s1", patch, 2).unwrap(), 3);
        assert_eq!(p.snippet("s1").unwrap().tag, CurationTag::Irrelevant);
        assert_eq!(p.map_unlocked_sentences(|s| s.sentence.to_uppercase()), 4);
    }

    #[test]
    fn stale_revision_is_rejected() {
        let mut p = project();
        let err = p.update_snippet("s1", SnippetPatch::default(), 1).unwrap_err();
        assert_eq!(err, CorpusError::StaleRevision { expected: 1, actual: 2 });
        assert_eq!(p.revision(), 2);
    }

    #[test]
    fn locked_snippets() {
        let mut p = project();
        let lock = SnippetPatch {
            locked: Some(true),
            ..Default::default()
        };
        p.update_snippet("s1", lock, 2).unwrap();
        let edit = SnippetPatch {
            sentence: Some("x".into()),
            ..Default::default()
        };
        assert_eq!(p.update_snippet("s1", edit.clone(), 3).unwrap_err(), CorpusError::Locked("s1".into()));
        p.map_unlocked_sentences(|_| "changed".into());
        assert_eq!(p.snippet("s1").unwrap().sentence, "Abby runs.");
        let unlock = SnippetPatch {
            locked: Some(false),
            ..edit
        };
        p.update_snippet("s1", unlock, 4).unwrap();
        assert_eq!(p.snippet("s1").unwrap().sentence, "x");
    }

    #[test]
    fn invariants_on_insert() {
        let mut p = project();
        let iv = TimeInterval::new(90.0, 101.0).unwrap();
        assert!(matches!(
            p.add_snippet(Snippet::new("s2", "m1", iv, "x", Source::Script)),
            Err(CorpusError::OutOfBounds { .. })
        ));
        let iv = TimeInterval::new(0.0, 1.0).unwrap();
        assert!(matches!(
            p.add_snippet(Snippet::new("s2", "nope", iv, "x", Source::Script)),
            Err(CorpusError::UnknownMovie(_))
        ));
        assert!(matches!(
            p.add_snippet(Snippet::new("s1", "m1", iv, "x", Source::Script)),
            Err(CorpusError::DuplicateSnippet(_))
        ));
        let before = p.revision();
        let batch = vec![
            Snippet::new("a", "m1", iv, "x", Source::Script),
            Snippet::new("a", "m1", iv, "y", Source::Script),
        ];
        assert!(p.add_snippets(batch).is_err());
        assert_eq!(p.revision(), before);
        assert_eq!(p.snippets().len(), 1);
    }

    #[test]
    fn tag_names() {
        assert_eq!("intro_ending".parse::<CurationTag>().unwrap(), CurationTag::IntroEnding);
        assert!("bogus".parse::<CurationTag>().is_err());
        let s: Snippet = serde_json::from_str(
            r#"{"id":"a","movie_id":"m","interval":{"start_s":0.0,"end_s":1.0},"sentence":"x","source":"dvs"}"#,
        )
        .unwrap();
        assert_eq!(s.tag, CurationTag::Keep);
        assert!(!s.locked);
    }
}
