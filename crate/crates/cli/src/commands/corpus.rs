use serde::Serialize;

use crate::error::{CliError, CliResult};
use crate::io::{self, emit, jsonl, progress, read_text};
use crate::{AlignScriptArgs, AnonymizeArgs, PairArgs, StatsArgs};
use moviedesc::align::{align_script as align, filter_reliable};
use moviedesc::corpus::{
    compute_stats, pair_overlapping, parse_name_list, render_stats_table, snippet_id, Anonymizer, CorpusProject, Movie,
    PersonPatterns, Snippet, SnippetPair, Source,
};

pub fn align_script(a: AlignScriptArgs) -> CliResult<()> {
    let project_path = match (&a.movie, &a.project) {
        (Some(_), p) => Some(io::project_path(p.as_deref())?),
        (None, Some(_)) => return Err(CliError::Usage("--project needs --movie".into())),
        (None, None) => None,
    };
    let script = read_text(&a.script)?;
    let srt = read_text(&a.subtitles)?;
    let aligned = align(&script, &srt, a.window).map_err(|e| CliError::data(a.subtitles.display(), e))?;
    let reliable = filter_reliable(&aligned.sentences, a.min_score);
    progress(format!(
        "{} description sentences, {} at score >= {}",
        aligned.sentences.len(),
        reliable.len(),
        a.min_score
    ));
    let movie_id = a.movie.as_deref().unwrap_or("");
    let records: Vec<_> = reliable.iter().map(|s| s.record(movie_id)).collect();

    if let (Some(movie_id), Some(path)) = (&a.movie, &project_path) {
        let mut project = io::load_or_new(path)?;
        if !project.movies.contains_key(movie_id) {
            project.upsert_movie(
                movie_id.clone(),
                Movie {
                    title: movie_id.clone(),
                    ..Movie::default()
                },
            );
        }
        let snippets: Vec<Snippet> = reliable
            .iter()
            .enumerate()
            .map(|(i, s)| {
                let mut snip = Snippet::new(snippet_id(movie_id, Source::Script, i), movie_id.clone(), s.interval, &s.text, Source::Script);
                snip.score = Some(s.score);
                snip
            })
            .collect();
        project.add_snippets(snippets).map_err(|e| CliError::data(path.display(), e))?;
        io::save(&project, path)?;
        progress(format!("{} script snippets stored in {}", reliable.len(), path.display()));
    }
    emit(a.out.out.as_deref(), &jsonl(records))
}

/// One-to-one pairs between the kept DVS and script snippets of a movie.
pub fn movie_pairs(project: &CorpusProject, movie: &str, min_iou: f64) -> Option<Vec<SnippetPair>> {
    project.movies.get(movie)?;
    let kept = |source: Source| -> Vec<Snippet> {
        project
            .movie_snippets(movie)
            .filter(|s| s.source == source && s.kept())
            .cloned()
            .collect()
    };
    Some(pair_overlapping(&kept(Source::Dvs), &kept(Source::Script), min_iou))
}

pub fn pair(a: PairArgs) -> CliResult<()> {
    if !(0.0..=1.0).contains(&a.min_iou) {
        return Err(CliError::Usage(format!("--min-iou must lie in [0, 1], got {}", a.min_iou)));
    }
    let path = io::project_path(a.project.as_deref())?;
    let project = io::load(&path)?;
    let pairs = movie_pairs(&project, &a.movie, a.min_iou)
        .ok_or_else(|| CliError::data(path.display(), format!("unknown movie {:?}", a.movie)))?;
    progress(format!("{} pairs at IoU >= {}", pairs.len(), a.min_iou));
    emit(a.out.out.as_deref(), &jsonl(pairs))
}

#[derive(Serialize)]
struct AnonymizedLine {
    id: String,
    sentence: String,
    replaced: Vec<String>,
}

pub fn anonymize(a: AnonymizeArgs) -> CliResult<()> {
    let names = parse_name_list(&read_text(&a.names)?);
    let patterns = match &a.patterns {
        Some(p) => PersonPatterns::parse(&read_text(p)?),
        None => PersonPatterns::bundled(),
    };
    let anonymizer = Anonymizer::new(&names, patterns);
    let mut out = Vec::new();
    if let Some(input) = &a.input {
        let text = read_text(input)?;
        let body: String = text.lines().map(|l| anonymizer.anonymize(l).text + "\n").collect();
        return emit(a.out.out.as_deref(), &body);
    }
    let path = io::project_path(a.project.as_deref())?;
    let mut project = io::load(&path)?;
    project.map_unlocked_sentences(|s| {
        let r = anonymizer.anonymize(&s.sentence);
        if !r.replacements.is_empty() {
            out.push(AnonymizedLine {
                id: s.id.clone(),
                sentence: r.text.clone(),
                replaced: r.replacements.iter().map(|x| x.original.clone()).collect(),
            });
        }
        r.text
    });
    io::save(&project, &path)?;
    progress(format!("{} sentences rewritten in {}", out.len(), path.display()));
    emit(a.out.out.as_deref(), &jsonl(out))
}

pub fn stats(a: StatsArgs) -> CliResult<()> {
    let path = io::project_path(a.project.as_deref())?;
    let project = io::load(&path)?;
    let stats = compute_stats(&project);
    let text = if a.json {
        serde_json::to_string(&stats).expect("stats serialize") + "\n"
    } else {
        render_stats_table(&stats)
    };
    emit(a.out.out.as_deref(), &text)
}
