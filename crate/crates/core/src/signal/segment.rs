use serde::{Deserialize, Serialize};

use super::{
    compute_spectrogram, difference_curve, estimate_offset, suggest_threshold, AudioTrack,
    DifferenceCurve, SignalError,
};
use crate::{Real, TimeInterval};

pub const DEFAULT_WINDOW: usize = 1024;
pub const DEFAULT_HOP: usize = 512;
pub const DEFAULT_MAX_LAG_S: f64 = 10.0;
pub const DEFAULT_MIN_SEGMENT_S: f64 = 1.0;
pub const DEFAULT_MERGE_GAP_S: f64 = 0.25;
pub const DEFAULT_THRESHOLD_PERCENTILE: f64 = 75.0;

/// Detection threshold on the difference curve.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Threshold {
    /// A percentile of the curve itself (the movie-specific suggestion).
    Percentile(f64),
    Fixed(f64),
}

impl Threshold {
    pub fn auto() -> Self {
        Threshold::Percentile(DEFAULT_THRESHOLD_PERCENTILE)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SegmentParams {
    pub window_size: usize,
    pub hop: usize,
    pub max_lag_s: f64,
    pub threshold: Threshold,
    pub min_segment_s: f64,
    pub merge_gap_s: f64,
}

impl SegmentParams {
    pub fn with_threshold(threshold: Threshold) -> Self {
        Self {
            window_size: DEFAULT_WINDOW,
            hop: DEFAULT_HOP,
            max_lag_s: DEFAULT_MAX_LAG_S,
            threshold,
            min_segment_s: DEFAULT_MIN_SEGMENT_S,
            merge_gap_s: DEFAULT_MERGE_GAP_S,
        }
    }
}

/// A detected narration interval with curve statistics over its frames.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Segment {
    #[serde(flatten)]
    pub interval: TimeInterval,
    pub peak_score: f64,
    pub mean_score: f64,
}

#[derive(Debug, Clone)]
pub struct Segmentation<T> {
    pub segments: Vec<Segment>,
    /// `mixed[t + lag]` aligns with `original[t]`.
    pub lag_frames: i64,
    pub threshold: T,
    pub curve: DifferenceCurve<T>,
}

impl<T> Segmentation<T> {
    pub fn lag_seconds(&self, hop: usize, sample_rate: u32) -> f64 {
        self.lag_frames as f64 * hop as f64 / sample_rate as f64
    }
}

/// Runs of frames strictly above `threshold`, gap-merged and length-filtered.
pub fn threshold_segments_detailed<T: Real>(
    curve: &DifferenceCurve<T>,
    threshold: T,
    min_segment_s: f64,
    merge_gap_s: f64,
) -> Result<Vec<Segment>, SignalError> {
    if !(threshold >= T::zero()) {
        return Err(SignalError::InvalidParameter(format!(
            "threshold must be >= 0, got {threshold}"
        )));
    }
    if !(min_segment_s > 0.0) || !(merge_gap_s >= 0.0) || !(curve.frame_rate > 0.0) {
        return Err(SignalError::InvalidParameter(
            "min_segment_s must be > 0 and merge_gap_s >= 0".into(),
        ));
    }

    let mut runs: Vec<(usize, usize)> = Vec::new();
    let mut open: Option<usize> = None;
    for (i, &s) in curve.scores.iter().enumerate() {
        match (s > threshold, open) {
            (true, None) => open = Some(i),
            (false, Some(start)) => {
                runs.push((start, i - 1));
                open = None;
            }
            _ => {}
        }
    }
    if let Some(start) = open {
        runs.push((start, curve.scores.len() - 1));
    }

    let fr = curve.frame_rate;
    let mut merged: Vec<(usize, usize)> = Vec::with_capacity(runs.len());
    for run in runs {
        match merged.last_mut() {
            Some(last) if ((run.0 - last.1 - 1) as f64 / fr) < merge_gap_s => last.1 = run.1,
            _ => merged.push(run),
        }
    }

    let mut out = Vec::new();
    for (first, last) in merged {
        let duration = (last - first + 1) as f64 / fr;
        if duration < min_segment_s {
            continue;
        }
        let start = (curve.time_of(first) - 0.5 / fr).max(0.0);
        let end = curve.time_of(last) + 0.5 / fr;
        let frames = &curve.scores[first..=last];
        let peak = frames.iter().copied().fold(T::zero(), T::max);
        let mean = frames.iter().copied().sum::<T>() / T::from_usize_lossy(frames.len());
        let interval = TimeInterval::new(start, end)
            .map_err(|e| SignalError::InvalidParameter(e.to_string()))?;
        out.push(Segment {
            interval,
            peak_score: peak.to_f64_lossy(),
            mean_score: mean.to_f64_lossy(),
        });
    }
    Ok(out)
}

pub fn threshold_segments<T: Real>(
    curve: &DifferenceCurve<T>,
    threshold: T,
    min_segment_s: f64,
    merge_gap_s: f64,
) -> Result<Vec<TimeInterval>, SignalError> {
    Ok(
        threshold_segments_detailed(curve, threshold, min_segment_s, merge_gap_s)?
            .into_iter()
            .map(|s| s.interval)
            .collect(),
    )
}

/// Offset estimation, difference curve and thresholding in one pass.
pub fn segment_dvs<T: Real>(
    mixed: &AudioTrack<T>,
    original: &AudioTrack<T>,
    params: &SegmentParams,
) -> Result<Segmentation<T>, SignalError> {
    if mixed.sample_rate != original.sample_rate {
        return Err(SignalError::SampleRateMismatch(
            mixed.sample_rate,
            original.sample_rate,
        ));
    }
    let spec_mixed = compute_spectrogram(mixed, params.window_size, params.hop)?;
    let spec_original = compute_spectrogram(original, params.window_size, params.hop)?;

    let min_frames = spec_mixed.frames().min(spec_original.frames());
    let max_lag = ((params.max_lag_s * spec_mixed.frame_rate()).round().max(0.0) as usize)
        .min(min_frames.saturating_sub(1));
    let lag = estimate_offset(&spec_original, &spec_mixed, max_lag)?;
    let curve = difference_curve(&spec_mixed, &spec_original, lag)?;

    let threshold = match params.threshold {
        Threshold::Fixed(v) => T::from_f64_lossy(v),
        Threshold::Percentile(p) => suggest_threshold(&curve, p).ok_or_else(|| {
            SignalError::InvalidParameter(format!("percentile {p} outside [0, 100]"))
        })?,
    };
    let segments =
        threshold_segments_detailed(&curve, threshold, params.min_segment_s, params.merge_gap_s)?;
    Ok(Segmentation {
        segments,
        lag_frames: lag,
        threshold,
        curve,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    /// Frame-by-frame state machine: collect runs, merge, drop. Written
    /// independently of the implementation above.
    fn oracle(scores: &[f64], fr: f64, start_s: f64, thr: f64, min_s: f64, gap_s: f64) -> Vec<(f64, f64)> {
        let mut state_in = false;
        let mut cur_start = 0usize;
        let mut raw = vec![];
        for i in 0..=scores.len() {
            let above = i < scores.len() && scores[i] > thr;
            if above && !state_in {
                state_in = true;
                cur_start = i;
            } else if !above && state_in {
                state_in = false;
                raw.push((cur_start, i));
            }
        }
        let mut merged: Vec<(usize, usize)> = vec![];
        for (s, e) in raw {
            if let Some(last) = merged.last_mut() {
                let gap_frames = s - last.1;
                if (gap_frames as f64) / fr < gap_s {
                    last.1 = e;
                    continue;
                }
            }
            merged.push((s, e));
        }
        merged
            .into_iter()
            .filter(|(s, e)| (e - s) as f64 / fr >= min_s)
            .map(|(s, e)| {
                let a = start_s + (s as f64 - 0.5) / fr;
                let b = start_s + (e as f64 - 0.5) / fr;
                (a.max(0.0), b)
            })
            .collect()
    }

    fn curve(scores: Vec<f64>, fr: f64) -> DifferenceCurve<f64> {
        DifferenceCurve::new(scores, fr, 5.0)
    }

    #[test]
    fn below_threshold_is_empty() {
        let c = curve(vec![0.1; 100], 10.0);
        assert!(threshold_segments(&c, 0.5, 1.0, 0.25).unwrap().is_empty());
    }

    #[test]
    fn short_run_dropped() {
        let mut s = vec![0.0; 40];
        s[10..15].fill(1.0); // 0.5 s at 10 fps
        assert!(threshold_segments(&curve(s, 10.0), 0.5, 1.0, 0.25).unwrap().is_empty());
    }

    #[test]
    fn close_runs_merge() {
        let mut s = vec![0.0; 60];
        s[10..18].fill(1.0); // 0.8 s
        s[19..27].fill(1.0); // 0.1 s gap, then 0.8 s
        let c = curve(s.clone(), 10.0);
        let got = threshold_segments(&c, 0.5, 1.0, 0.25).unwrap();
        let want = oracle(&s, 10.0, 5.0, 0.5, 1.0, 0.25);
        assert_eq!(got.len(), 1);
        assert_eq!(want.len(), 1);
        assert!((got[0].start_s() - want[0].0).abs() < 1e-12);
        assert!((got[0].end_s() - want[0].1).abs() < 1e-12);
        assert!((got[0].duration() - 1.7).abs() < 1e-12);
        // without merging neither run survives
        assert!(threshold_segments(&c, 0.5, 1.0, 0.0).unwrap().is_empty());
    }

    #[test]
    fn exactly_min_length_is_kept_and_stats_reported() {
        let mut s = vec![0.0; 30];
        s[5..15].fill(2.0);
        s[7] = 4.0;
        let got = threshold_segments_detailed(&curve(s, 10.0), 1.0, 1.0, 0.25).unwrap();
        assert_eq!(got.len(), 1);
        assert_eq!(got[0].peak_score, 4.0);
        assert!((got[0].mean_score - 2.2).abs() < 1e-12);
    }

    #[test]
    fn invalid_parameters() {
        let c = curve(vec![0.0; 3], 10.0);
        assert!(threshold_segments(&c, -1.0, 1.0, 0.25).is_err());
        assert!(threshold_segments(&c, 0.0, 0.0, 0.25).is_err());
    }

    #[test]
    fn identical_tracks_give_nothing() {
        let samples: Vec<f64> = (0..40_000).map(|n| ((n as f64) * 0.05).sin() * 0.3).collect();
        let track = AudioTrack::new(samples, 8000).unwrap();
        let res = segment_dvs(&track, &track, &SegmentParams::with_threshold(Threshold::auto()))
            .unwrap();
        assert!(res.segments.is_empty());
        assert_eq!(res.lag_frames, 0);
    }

    proptest! {
        #[test]
        fn matches_oracle_and_invariants(
            scores in proptest::collection::vec(0.0f64..1.0, 1..300),
            thr in 0.0f64..1.0,
            min_s in 0.05f64..2.0,
            gap_s in 0.0f64..0.5,
        ) {
            let c = curve(scores.clone(), 20.0);
            let got = threshold_segments(&c, thr, min_s, gap_s).unwrap();
            let want = oracle(&scores, 20.0, 5.0, thr, min_s, gap_s);
            prop_assert_eq!(got.len(), want.len());
            for (g, w) in got.iter().zip(&want) {
                prop_assert!((g.start_s() - w.0).abs() < 1e-9);
                prop_assert!((g.end_s() - w.1).abs() < 1e-9);
                prop_assert!(g.duration() >= min_s - 1e-9);
            }
            for pair in got.windows(2) {
                prop_assert!(pair[0].end_s() <= pair[1].start_s());
            }
        }

        #[test]
        fn monotone_in_threshold(
            scores in proptest::collection::vec(0.0f64..1.0, 1..300),
            a in 0.0f64..1.0,
            b in 0.0f64..1.0,
        ) {
            // higher thresholds only shrink runs and widen gaps
            let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
            let c = curve(scores, 20.0);
            let total = |t: f64| -> f64 {
                threshold_segments(&c, t, 0.5, 0.25).unwrap().iter().map(|i| i.duration()).sum()
            };
            prop_assert!(total(hi) <= total(lo) + 1e-9);
        }
    }
}
