use std::collections::BTreeSet;
use std::fmt::Write;

use serde::{Deserialize, Serialize};

use super::project::{CorpusProject, Source};

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct SourceStats {
    pub movies: usize,
    /// Whitespace tokens over all snippets, whatever their tag.
    pub words_before: usize,
    /// Whitespace tokens over kept snippets.
    pub words_after: usize,
    /// Kept snippets.
    pub sentences: usize,
    pub avg_clip_s: f64,
    pub total_h: f64,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct CorpusStats {
    pub dvs: SourceStats,
    pub script: SourceStats,
    pub total: SourceStats,
}

impl CorpusStats {
    pub fn get(&self, source: Source) -> &SourceStats {
        match source {
            Source::Dvs => &self.dvs,
            Source::Script => &self.script,
        }
    }
}

fn word_count(s: &str) -> usize {
    s.split_whitespace().count()
}

fn summarize<'a>(snippets: impl Iterator<Item = &'a super::Snippet>) -> SourceStats {
    let mut st = SourceStats::default();
    let mut movies = BTreeSet::new();
    let mut seconds = 0.0;
    for s in snippets {
        movies.insert(s.movie_id.as_str());
        let w = word_count(&s.sentence);
        st.words_before += w;
        if s.kept() {
            st.words_after += w;
            st.sentences += 1;
            seconds += s.interval.duration();
        }
    }
    st.movies = movies.len();
    st.total_h = seconds / 3600.0;
    st.avg_clip_s = if st.sentences == 0 {
        0.0
    } else {
        seconds / st.sentences as f64
    };
    st
}

pub fn compute_stats(project: &CorpusProject) -> CorpusStats {
    let all = project.snippets();
    CorpusStats {
        dvs: summarize(all.iter().filter(|s| s.source == Source::Dvs)),
        script: summarize(all.iter().filter(|s| s.source == Source::Script)),
        total: summarize(all.iter()),
    }
}

/// `1234567` -> `1,234,567`.
pub fn thousands(n: usize) -> String {
    let digits = n.to_string();
    let mut out = String::new();
    for (i, c) in digits.chars().enumerate() {
        if i > 0 && (digits.len() - i).is_multiple_of(3) {
            out.push(',');
        }
        out.push(c);
    }
    out
}

/// Plain-text table with the columns of the corpus statistics report.
pub fn render_stats_table(stats: &CorpusStats) -> String {
    let header = [
        "",
        "Movies",
        "Words (before)",
        "Words",
        "Sentences",
        "Avg. length",
        "Total length",
    ];
    let row = |name: &str, s: &SourceStats| {
        vec![
            name.to_string(),
            s.movies.to_string(),
            thousands(s.words_before),
            thousands(s.words_after),
            thousands(s.sentences),
            format!("{:.1} sec.", s.avg_clip_s),
            format!("{:.1} h.", s.total_h),
        ]
    };
    let rows = vec![
        header.iter().map(|h| h.to_string()).collect::<Vec<_>>(),
        row("DVS", &stats.dvs),
        row("Movie script", &stats.script),
        row("Total", &stats.total),
    ];
    let widths: Vec<usize> = (0..header.len())
        .map(|c| rows.iter().map(|r| r[c].chars().count()).max().unwrap_or(0))
        .collect();
    let mut out = String::new();
    for r in &rows {
        let mut line = String::new();
        for (c, cell) in r.iter().enumerate() {
            if c == 0 {
                let _ = write!(line, "{:<w$}", cell, w = widths[c]);
            } else {
                let _ = write!(line, "  {:>w$}", cell, w = widths[c]);
            }
        }
        out.push_str(line.trim_end());
        out.push('\n');
    }
    out
}
