use std::fmt::Write as _;
use std::sync::LazyLock;

use regex::Regex;
use serde::{Deserialize, Serialize};

use super::AlignError;
use crate::TimeInterval;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SubtitleEntry {
    pub index: u32,
    pub interval: TimeInterval,
    pub text: String,
}

static TIMING: LazyLock<Regex> = LazyLock::new(|| {
    Regex::new(
        r"^\s*(\d+):(\d{1,2}):(\d{1,2})[,.](\d{1,3})\s*-->\s*(\d+):(\d{1,2}):(\d{1,2})[,.](\d{1,3})",
    )
    .unwrap()
});
static TAGS: LazyLock<Regex> = LazyLock::new(|| Regex::new(r"<[^>]*>|\{\\[^}]*\}").unwrap());

fn seconds(caps: &regex::Captures<'_>, base: usize) -> f64 {
    let num = |k: usize| caps[base + k].parse::<u64>().unwrap_or(0);
    let ms_raw = &caps[base + 3];
    // "5" after the comma means 500 ms
    let ms = num(3) * 10u64.pow(3 - ms_raw.len() as u32);
    ((num(0) * 3600 + num(1) * 60 + num(2)) * 1000 + ms) as f64 / 1000.0
}

/// Parse SubRip text. Accepts a BOM and CRLF line endings; strips
/// formatting tags; clips overlapping cues so intervals are disjoint and
/// renumbers when indices do not increase.
pub fn parse_srt(text: &str) -> Result<Vec<SubtitleEntry>, AlignError> {
    let text = text.strip_prefix('\u{feff}').unwrap_or(text);
    let text = text.replace("\r\n", "\n").replace('\r', "\n");

    let mut blocks: Vec<Vec<&str>> = Vec::new();
    let mut current: Vec<&str> = Vec::new();
    for line in text.lines() {
        if line.trim().is_empty() {
            if !current.is_empty() {
                blocks.push(std::mem::take(&mut current));
            }
        } else {
            current.push(line);
        }
    }
    if !current.is_empty() {
        blocks.push(current);
    }

    let mut entries: Vec<SubtitleEntry> = Vec::with_capacity(blocks.len());
    for (ordinal, block) in blocks.iter().enumerate() {
        let ordinal = ordinal + 1;
        let (index, timing_at) = match block[0].trim().parse::<u32>() {
            Ok(i) => (i, 1),
            Err(_) if TIMING.is_match(block[0]) => (ordinal as u32, 0),
            Err(_) => {
                return Err(AlignError::MalformedSubtitle {
                    block: ordinal,
                    message: format!("expected a cue number, got {:?}", block[0]),
                })
            }
        };
        let malformed = |message: String| AlignError::MalformedSubtitle {
            block: index as usize,
            message,
        };
        let line = block
            .get(timing_at)
            .ok_or_else(|| malformed("missing timestamp line".into()))?;
        let caps = TIMING
            .captures(line)
            .ok_or_else(|| malformed(format!("malformed timestamp line {line:?}")))?;
        let (start, end) = (seconds(&caps, 1), seconds(&caps, 5));
        let interval = TimeInterval::new(start, end)
            .map_err(|_| malformed(format!("end {end} not after start {start}")))?;
        let text = block[timing_at + 1..]
            .iter()
            .map(|l| TAGS.replace_all(l, "").trim().to_string())
            .filter(|l| !l.is_empty())
            .collect::<Vec<_>>()
            .join("\n");
        entries.push(SubtitleEntry {
            index,
            interval,
            text,
        });
    }

    normalize(&mut entries);
    Ok(entries)
}

fn normalize(entries: &mut [SubtitleEntry]) {
    if entries.windows(2).any(|w| w[1].index <= w[0].index) {
        for (i, e) in entries.iter_mut().enumerate() {
            e.index = i as u32 + 1;
        }
    }
    for i in 1..entries.len() {
        let prev = entries[i - 1].interval;
        let cur = entries[i].interval;
        if cur.start_s() >= prev.end_s() {
            continue;
        }
        if cur.start_s() > prev.start_s() {
            entries[i - 1].interval =
                TimeInterval::new(prev.start_s(), cur.start_s()).expect("clipped interval");
        } else {
            let end = cur.end_s().max(prev.end_s() + 0.001);
            entries[i].interval = TimeInterval::new(prev.end_s(), end).expect("shifted interval");
        }
    }
}

pub fn format_timestamp(seconds: f64) -> String {
    let total_ms = (seconds * 1000.0).round() as u64;
    let (h, rest) = (total_ms / 3_600_000, total_ms % 3_600_000);
    let (m, rest) = (rest / 60_000, rest % 60_000);
    let (s, ms) = (rest / 1000, rest % 1000);
    format!("{h:02}:{m:02}:{s:02},{ms:03}")
}

pub fn serialize_srt(entries: &[SubtitleEntry]) -> String {
    let mut out = String::new();
    for e in entries {
        let _ = write!(
            out,
            "{}\n{} --> {}\n{}\n\n",
            e.index,
            format_timestamp(e.interval.start_s()),
            format_timestamp(e.interval.end_s()),
            e.text
        );
    }
    out
}
