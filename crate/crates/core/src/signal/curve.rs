use serde::{Deserialize, Serialize};

use super::offset::{frame_l1, overlap};
use super::{SignalError, Spectrogram};
use crate::Real;

/// Per-frame spectral difference on the mixed-track timeline.
///
/// `scores[i]` belongs to the mixed frame centred at `start_s + i / frame_rate`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DifferenceCurve<T> {
    pub scores: Vec<T>,
    pub frame_rate: f64,
    pub start_s: f64,
}

impl<T: Real> DifferenceCurve<T> {
    pub fn new(scores: Vec<T>, frame_rate: f64, start_s: f64) -> Self {
        Self {
            scores,
            frame_rate,
            start_s,
        }
    }

    pub fn len(&self) -> usize {
        self.scores.len()
    }

    pub fn is_empty(&self) -> bool {
        self.scores.is_empty()
    }

    pub fn time_of(&self, index: usize) -> f64 {
        self.start_s + index as f64 / self.frame_rate
    }

    /// Max-pool down to at most `points` samples, returned as `(time_s, score)`.
    pub fn downsample(&self, points: usize) -> Vec<(f64, T)> {
        if points == 0 || self.scores.is_empty() {
            return Vec::new();
        }
        let stride = self.scores.len().div_ceil(points);
        self.scores
            .chunks(stride)
            .enumerate()
            .map(|(i, chunk)| {
                let peak = chunk.iter().copied().fold(T::zero(), T::max);
                (self.time_of(i * stride), peak)
            })
            .collect()
    }
}

/// Mean absolute per-bin difference between `mixed[t + lag]` and `original[t]`.
pub fn difference_curve<T: Real>(
    mixed: &Spectrogram<T>,
    original: &Spectrogram<T>,
    lag: i64,
) -> Result<DifferenceCurve<T>, SignalError> {
    if !mixed.compatible_with(original) {
        return Err(SignalError::ParameterMismatch);
    }
    let (lo, hi) = overlap(original.frames(), mixed.frames(), lag).ok_or(SignalError::NoOverlap)?;
    let bins = T::from_usize_lossy(mixed.bins());
    let scores = (lo..hi)
        .map(|t| frame_l1(mixed.frame((t as i64 + lag) as usize), original.frame(t)) / bins)
        .collect();
    let first_mixed = (lo as i64 + lag) as usize;
    let start_s = (first_mixed * mixed.hop) as f64 / mixed.sample_rate as f64
        + mixed.window_size as f64 / (2.0 * mixed.sample_rate as f64);
    Ok(DifferenceCurve::new(scores, mixed.frame_rate(), start_s))
}

/// Linear-interpolated percentile of the curve scores, `percentile` in [0, 100].
pub fn suggest_threshold<T: Real>(curve: &DifferenceCurve<T>, percentile: f64) -> Option<T> {
    if curve.scores.is_empty() || !(0.0..=100.0).contains(&percentile) {
        return None;
    }
    let mut sorted = curve.scores.clone();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal));
    let rank = percentile / 100.0 * (sorted.len() - 1) as f64;
    let lo = rank.floor() as usize;
    let hi = rank.ceil() as usize;
    let frac = T::from_f64_lossy(rank - lo as f64);
    Some(sorted[lo] + (sorted[hi] - sorted[lo]) * frac)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn spec(frames: &[Vec<f64>]) -> Spectrogram<f64> {
        Spectrogram::from_frames(frames, 8, 4, 100).unwrap()
    }

    #[test]
    fn identical_is_zero() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let frames: Vec<Vec<f64>> = (0..30)
            .map(|_| (0..5).map(|_| rng.random_range(0.0..2.0)).collect())
            .collect();
        let s = spec(&frames);
        let c = difference_curve(&s, &s, 0).unwrap();
        assert_eq!(c.len(), 30);
        assert!(c.scores.iter().all(|&v| v == 0.0));
    }

    #[test]
    fn silent_original_gives_mean_magnitude() {
        let mixed = vec![vec![1.0, 2.0, 3.0, 4.0, 5.0], vec![0.5; 5]];
        let silent = vec![vec![0.0; 5]; 2];
        let c = difference_curve(&spec(&mixed), &spec(&silent), 0).unwrap();
        assert_eq!(c.scores, vec![3.0, 0.5]);
    }

    #[test]
    fn matches_direct_loop_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let mut gen = |n: usize| -> Vec<Vec<f64>> {
            (0..n)
                .map(|_| (0..5).map(|_| rng.random_range(0.0..3.0)).collect())
                .collect()
        };
        let mixed = gen(40);
        let original = gen(35);
        for lag in [-4i64, 0, 3] {
            let c = difference_curve(&spec(&mixed), &spec(&original), lag).unwrap();
            let mut oracle = Vec::new();
            for t in 0..original.len() as i64 {
                let m = t + lag;
                if m < 0 || m >= mixed.len() as i64 {
                    continue;
                }
                let mut s = 0.0;
                for k in 0..5 {
                    s += (mixed[m as usize][k] - original[t as usize][k]).abs();
                }
                oracle.push(s / 5.0);
            }
            assert_eq!(c.len(), oracle.len());
            for (a, b) in c.scores.iter().zip(&oracle) {
                assert!((a - b).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn curve_starts_at_first_mixed_frame_centre() {
        let frames = vec![vec![0.0; 5]; 10];
        let c = difference_curve(&spec(&frames), &spec(&frames), 2).unwrap();
        // first mixed frame is 2, hop 4 at 100 Hz = 0.08 s, plus half window 0.04 s
        assert!((c.start_s - 0.12).abs() < 1e-12);
        assert_eq!(c.len(), 8);
        assert!(matches!(
            difference_curve(&spec(&frames), &spec(&frames), 10),
            Err(SignalError::NoOverlap)
        ));
    }

    #[test]
    fn percentile_and_downsample() {
        let c = DifferenceCurve::new((0..=100).map(|v| v as f64).collect(), 10.0, 0.0);
        assert_eq!(suggest_threshold(&c, 75.0), Some(75.0));
        assert_eq!(suggest_threshold(&c, 0.0), Some(0.0));
        let c2 = DifferenceCurve::new(vec![1.0, 3.0], 10.0, 0.0);
        assert_eq!(suggest_threshold(&c2, 50.0), Some(2.0));
        assert_eq!(suggest_threshold(&DifferenceCurve::<f64>::new(vec![], 1.0, 0.0), 50.0), None);
        let d = c.downsample(10);
        assert_eq!(d.len(), 10);
        assert_eq!(d[0], (0.0, 10.0));
        assert_eq!(d[9].1, 100.0);
    }
}
