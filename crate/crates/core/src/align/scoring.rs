use serde::{Deserialize, Serialize};

use super::{
    align_dialogue_dp, normalize_tokens, parse_script, parse_srt, AlignError, ElementKind,
    ScriptElement, SubtitleEntry, WordMatch,
};
use crate::TimeInterval;

/// Dialogue blocks considered on each side of a description sentence.
pub const DEFAULT_WINDOW: usize = 2;
/// Minimum matched-word ratio for a reliable sentence.
pub const DEFAULT_MIN_SCORE: f64 = 0.5;
/// Mean script clip length; used when only one side has an anchor.
pub const DEFAULT_CLIP_DURATION_S: f64 = 3.4;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CharSpan {
    pub start: usize,
    pub end: usize,
}

/// A script position with a known movie time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Anchor {
    pub position: usize,
    pub time_s: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InferredInterval {
    pub interval: TimeInterval,
    /// Set when the interval came from the default-duration fallback.
    pub low_confidence: bool,
}

/// Map a character span between two anchors onto the time axis by linear
/// interpolation. With a single anchor the span gets `default_duration_s`
/// next to it.
pub fn infer_interval(
    span: CharSpan,
    before: Option<Anchor>,
    after: Option<Anchor>,
    default_duration_s: f64,
) -> Result<InferredInterval, AlignError> {
    let fallback_after = |b: Anchor| -> Result<InferredInterval, AlignError> {
        let iv = TimeInterval::new(b.time_s.max(0.0), b.time_s.max(0.0) + default_duration_s)
            .map_err(|e| AlignError::InvalidAnchors(e.to_string()))?;
        Ok(InferredInterval {
            interval: iv,
            low_confidence: true,
        })
    };
    match (before, after) {
        (None, None) => Err(AlignError::Unalignable),
        (Some(b), None) => fallback_after(b),
        (None, Some(a)) => {
            let end = if a.time_s > 0.0 { a.time_s } else { default_duration_s };
            let iv = TimeInterval::new((end - default_duration_s).max(0.0), end)
                .map_err(|e| AlignError::InvalidAnchors(e.to_string()))?;
            Ok(InferredInterval {
                interval: iv,
                low_confidence: true,
            })
        }
        (Some(b), Some(a)) => {
            if !(b.time_s < a.time_s) || a.position <= b.position {
                return fallback_after(b);
            }
            let width = (a.position - b.position) as f64;
            let frac = |p: usize| ((p as f64 - b.position as f64) / width).clamp(0.0, 1.0);
            let dt = a.time_s - b.time_s;
            let start = b.time_s + frac(span.start) * dt;
            let mut end = b.time_s + frac(span.end) * dt;
            if end <= start {
                end = (start + dt * 1e-6).min(a.time_s);
            }
            let iv = TimeInterval::new(start, end)
                .map_err(|e| AlignError::InvalidAnchors(e.to_string()))?;
            Ok(InferredInterval {
                interval: iv,
                low_confidence: false,
            })
        }
    }
}

/// A script description sentence with its inferred time and alignment score.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScoredSentence {
    pub text: String,
    pub interval: TimeInterval,
    pub score: f64,
    pub low_confidence: bool,
    /// Ordinal of the source element in the parsed script.
    pub ordinal: usize,
}

impl ScoredSentence {
    pub fn record(&self, movie_id: &str) -> SentenceRecord {
        SentenceRecord {
            text: self.text.clone(),
            start_s: self.interval.start_s(),
            end_s: self.interval.end_s(),
            score: self.score,
            movie_id: movie_id.to_string(),
        }
    }
}

/// Output line for aligned script sentences.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SentenceRecord {
    pub text: String,
    pub start_s: f64,
    pub end_s: f64,
    pub score: f64,
    pub movie_id: String,
}

struct DialogueInfo {
    element: usize,
    tokens: usize,
    matched: usize,
    first_entry: Option<usize>,
    last_entry: Option<usize>,
}

pub(crate) fn dialogue_tokens(elements: &[ScriptElement]) -> (Vec<String>, Vec<usize>) {
    let mut tokens = Vec::new();
    let mut owner = Vec::new();
    for (k, el) in elements.iter().enumerate() {
        if el.kind == ElementKind::Dialogue {
            for t in normalize_tokens(&el.text) {
                tokens.push(t);
                owner.push(k);
            }
        }
    }
    (tokens, owner)
}

pub(crate) fn subtitle_tokens(subtitles: &[SubtitleEntry]) -> (Vec<String>, Vec<usize>) {
    let mut tokens = Vec::new();
    let mut owner = Vec::new();
    for (k, s) in subtitles.iter().enumerate() {
        for t in normalize_tokens(&s.text) {
            tokens.push(t);
            owner.push(k);
        }
    }
    (tokens, owner)
}

/// Score every description sentence by the fraction of matched words in the
/// `window` dialogue blocks before and after it, and infer its interval from
/// the nearest matched dialogue on either side.
pub fn score_descriptions(
    elements: &[ScriptElement],
    matches: &[WordMatch],
    subtitles: &[SubtitleEntry],
    window: usize,
) -> Result<Vec<ScoredSentence>, AlignError> {
    let (_, script_owner) = dialogue_tokens(elements);
    let (_, subtitle_owner) = subtitle_tokens(subtitles);

    let mut dialogues: Vec<DialogueInfo> = Vec::new();
    let mut slot_of_element = vec![usize::MAX; elements.len()];
    for (k, el) in elements.iter().enumerate() {
        if el.kind == ElementKind::Dialogue {
            slot_of_element[k] = dialogues.len();
            dialogues.push(DialogueInfo {
                element: k,
                tokens: 0,
                matched: 0,
                first_entry: None,
                last_entry: None,
            });
        }
    }
    for &el in &script_owner {
        dialogues[slot_of_element[el]].tokens += 1;
    }
    for m in matches {
        let (Some(&el), Some(&entry)) = (
            script_owner.get(m.script_token_index),
            subtitle_owner.get(m.subtitle_token_index),
        ) else {
            continue;
        };
        let d = &mut dialogues[slot_of_element[el]];
        d.matched += 1;
        d.first_entry = Some(d.first_entry.map_or(entry, |e| e.min(entry)));
        d.last_entry = Some(d.last_entry.map_or(entry, |e| e.max(entry)));
    }

    let descriptions: Vec<usize> = elements
        .iter()
        .enumerate()
        .filter(|(_, e)| e.kind == ElementKind::Description)
        .map(|(k, _)| k)
        .collect();
    if descriptions.is_empty() {
        return Ok(Vec::new());
    }
    if dialogues.iter().all(|d| d.matched == 0) {
        return Err(AlignError::Unalignable);
    }

    let mut out = Vec::with_capacity(descriptions.len());
    for k in descriptions {
        let el = &elements[k];
        // dialogues[..split] precede this element
        let split = dialogues.partition_point(|d| d.element < k);
        let near = dialogues[split.saturating_sub(window)..split]
            .iter()
            .chain(dialogues[split..].iter().take(window));
        let (matched, total) = near.fold((0, 0), |(m, t), d| (m + d.matched, t + d.tokens));
        let score = if total == 0 {
            0.0
        } else {
            matched as f64 / total as f64
        };

        let before = dialogues[..split]
            .iter()
            .rev()
            .find(|d| d.matched > 0)
            .map(|d| Anchor {
                position: elements[d.element].char_end(),
                time_s: subtitles[d.last_entry.unwrap()].interval.end_s(),
            });
        let after = dialogues[split..]
            .iter()
            .find(|d| d.matched > 0)
            .map(|d| Anchor {
                // a monologue starts at its character cue
                position: match d.element.checked_sub(1).map(|p| &elements[p]) {
                    Some(cue) if cue.kind == ElementKind::CharacterCue => cue.char_offset,
                    _ => elements[d.element].char_offset,
                },
                time_s: subtitles[d.first_entry.unwrap()].interval.start_s(),
            });
        let inferred = infer_interval(
            CharSpan {
                start: el.char_offset,
                end: el.char_end(),
            },
            before,
            after,
            DEFAULT_CLIP_DURATION_S,
        )?;
        out.push(ScoredSentence {
            text: el.text.clone(),
            interval: inferred.interval,
            score,
            low_confidence: inferred.low_confidence,
            ordinal: el.ordinal,
        });
    }
    Ok(out)
}

/// Keep sentences scoring at least `min_score`, preserving order.
pub fn filter_reliable(sentences: &[ScoredSentence], min_score: f64) -> Vec<ScoredSentence> {
    sentences
        .iter()
        .filter(|s| s.score >= min_score)
        .cloned()
        .collect()
}

/// Everything produced by aligning one script against one subtitle file.
#[derive(Debug, Clone)]
pub struct ScriptAlignment {
    pub elements: Vec<ScriptElement>,
    pub subtitles: Vec<SubtitleEntry>,
    pub matches: Vec<WordMatch>,
    pub sentences: Vec<ScoredSentence>,
}

pub fn align_script(
    script_text: &str,
    srt_text: &str,
    window: usize,
) -> Result<ScriptAlignment, AlignError> {
    let elements = parse_script(script_text);
    let subtitles = parse_srt(srt_text)?;
    let (script_tokens, _) = dialogue_tokens(&elements);
    let (sub_tokens, _) = subtitle_tokens(&subtitles);
    let matches = align_dialogue_dp(&script_tokens, &sub_tokens);
    let sentences = score_descriptions(&elements, &matches, &subtitles, window)?;
    Ok(ScriptAlignment {
        elements,
        subtitles,
        matches,
        sentences,
    })
}
