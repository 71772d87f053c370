use std::path::Path;

use serde::Serialize;

use crate::error::{CliError, CliResult};
use crate::io::{self, emit, jsonl, progress, read_text, write_atomic};
use crate::{FixtureArgs, SegmentArgs, ThresholdArg};
use moviedesc::corpus::{snippet_id, Movie, Snippet, Source};
use moviedesc::signal::{read_wav, segment_dvs, AudioTrack, Segment, SegmentParams, Threshold};
use moviedesc::synth::{FixtureMovie, FixtureSpec};

/// Media key under which a movie's difference curve file is recorded.
pub const CURVE_MEDIA_KEY: &str = "difference_curve";

#[derive(Serialize)]
struct SegmentLine<'a> {
    #[serde(skip_serializing_if = "Option::is_none")]
    id: Option<String>,
    #[serde(flatten)]
    segment: &'a Segment,
    #[serde(skip_serializing_if = "Option::is_none")]
    sentence: Option<&'a str>,
}

fn load_track(path: &Path) -> CliResult<AudioTrack<f64>> {
    read_wav(path).map_err(|e| CliError::data(path.display(), e))
}

pub fn segment(a: SegmentArgs) -> CliResult<()> {
    let project_path = match (&a.movie, &a.project) {
        (Some(_), p) => Some(io::project_path(p.as_deref())?),
        (None, Some(_)) => return Err(CliError::Usage("--project needs --movie".into())),
        (None, None) => None,
    };
    if a.sentences.is_some() && a.movie.is_none() {
        return Err(CliError::Usage("--sentences needs --movie".into()));
    }
    let mixed = load_track(&a.mixed)?;
    let original = load_track(&a.original)?;
    let sentences: Vec<String> = match &a.sentences {
        Some(p) => read_text(p)?
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty())
            .map(str::to_string)
            .collect(),
        None => Vec::new(),
    };

    let threshold = match a.threshold {
        ThresholdArg::Auto => Threshold::auto(),
        ThresholdArg::Fixed(v) => Threshold::Fixed(v),
    };
    let mut params = SegmentParams::with_threshold(threshold);
    params.min_segment_s = a.min_segment_s;
    let seg = segment_dvs(&mixed, &original, &params).map_err(|e| CliError::data(a.mixed.display(), e))?;
    progress(format!(
        "offset {:.3} s, threshold {:.5}, {} intervals",
        seg.lag_seconds(params.hop, mixed.sample_rate),
        seg.threshold,
        seg.segments.len()
    ));
    if a.sentences.is_some() && sentences.len() != seg.segments.len() {
        progress(format!(
            "warning: {} sentences for {} intervals; pairing in order",
            sentences.len(),
            seg.segments.len()
        ));
    }

    let curve_json = serde_json::to_string(&seg.curve).expect("curve serializes") + "\n";
    let lines: Vec<SegmentLine<'_>> = seg
        .segments
        .iter()
        .enumerate()
        .map(|(i, s)| SegmentLine {
            id: a.movie.as_deref().map(|m| snippet_id(m, Source::Dvs, i)),
            segment: s,
            sentence: sentences.get(i).map(String::as_str),
        })
        .collect();

    if let (Some(movie_id), Some(path)) = (&a.movie, &project_path) {
        let mut project = io::load_or_new(path)?;
        let mut movie = project.movies.get(movie_id).cloned().unwrap_or_else(|| Movie {
            title: movie_id.clone(),
            ..Movie::default()
        });
        movie.duration_s = Some(mixed.duration_s());
        let curve_file = format!("{movie_id}.curve.json");
        movie.media.insert(CURVE_MEDIA_KEY.into(), curve_file.clone());
        project.upsert_movie(movie_id.clone(), movie);
        let snippets: Vec<Snippet> = lines
            .iter()
            .filter_map(|l| {
                let sentence = l.sentence?;
                let mut s = Snippet::new(l.id.clone()?, movie_id.clone(), l.segment.interval, sentence, Source::Dvs);
                s.score = Some(l.segment.mean_score);
                Some(s)
            })
            .collect();
        let added = snippets.len();
        project.add_snippets(snippets).map_err(|e| CliError::data(path.display(), e))?;
        let dir = match path.parent() {
            Some(d) if !d.as_os_str().is_empty() => d.to_path_buf(),
            _ => std::path::PathBuf::from("."),
        };
        write_atomic(&dir.join(&curve_file), curve_json.as_bytes())?;
        io::save(&project, path)?;
        progress(format!("{added} DVS snippets stored in {}", path.display()));
    }
    if let Some(p) = &a.curve_out {
        write_atomic(p, curve_json.as_bytes())?;
    }
    emit(a.out.out.as_deref(), &jsonl(lines))
}

pub fn fixture(a: FixtureArgs) -> CliResult<()> {
    let spec = FixtureSpec {
        seed: a.seed,
        ..FixtureSpec::default()
    };
    let movie = FixtureMovie::generate(&spec);
    movie.write_to(&a.out).map_err(|e| CliError::data(a.out.display(), e))?;
    progress(format!("fixture movie {:?} written to {}", movie.movie_id, a.out.display()));
    Ok(())
}
