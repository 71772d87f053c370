use std::thread;

use super::{SignalError, Spectrogram};
use crate::Real;

pub(crate) fn frame_l1<T: Real>(a: &[T], b: &[T]) -> T {
    a.iter().zip(b).map(|(&x, &y)| (x - y).abs()).sum()
}

/// Overlapping frame range of `a` when `b[t + lag]` is compared with `a[t]`.
pub(crate) fn overlap(frames_a: usize, frames_b: usize, lag: i64) -> Option<(usize, usize)> {
    let lo = (-lag).max(0);
    let hi = (frames_a as i64).min(frames_b as i64 - lag);
    (lo < hi).then_some((lo as usize, hi as usize))
}

fn mean_distance<T: Real>(a: &Spectrogram<T>, b: &Spectrogram<T>, lag: i64) -> Option<T> {
    let (lo, hi) = overlap(a.frames(), b.frames(), lag)?;
    let total: T = (lo..hi)
        .map(|t| frame_l1(a.frame(t), b.frame((t as i64 + lag) as usize)))
        .sum();
    Some(total / T::from_usize_lossy(hi - lo))
}

/// Lag `k` in `[-max_lag, max_lag]` such that `spec_b[t + k]` best matches
/// `spec_a[t]`, by mean per-frame L1 distance over the overlap.
///
/// Ties prefer the smallest `|k|`, then the negative lag.
pub fn estimate_offset<T: Real>(
    spec_a: &Spectrogram<T>,
    spec_b: &Spectrogram<T>,
    max_lag_frames: usize,
) -> Result<i64, SignalError> {
    if !spec_a.compatible_with(spec_b) {
        return Err(SignalError::ParameterMismatch);
    }
    let max_lag = max_lag_frames as i64;
    // scan order encodes the tie rule: 0, -1, +1, -2, +2, ...
    let lags: Vec<i64> = std::iter::once(0)
        .chain((1..=max_lag).flat_map(|d| [-d, d]))
        .collect();

    let workers = thread::available_parallelism()
        .map(|n| n.get())
        .unwrap_or(1)
        .min(lags.len())
        .max(1);
    let chunk = lags.len().div_ceil(workers);
    let scores: Vec<Option<T>> = thread::scope(|s| {
        let handles: Vec<_> = lags
            .chunks(chunk)
            .map(|part| {
                s.spawn(move || {
                    part.iter()
                        .map(|&lag| mean_distance(spec_a, spec_b, lag))
                        .collect::<Vec<_>>()
                })
            })
            .collect();
        handles
            .into_iter()
            .flat_map(|h| h.join().expect("offset worker panicked"))
            .collect()
    });

    let mut best: Option<(i64, T)> = None;
    for (&lag, score) in lags.iter().zip(scores) {
        let Some(d) = score else { continue };
        match best {
            Some((_, bd)) if !(d < bd) => {}
            _ => best = Some((lag, d)),
        }
    }
    best.map(|(lag, _)| lag).ok_or(SignalError::NoOverlap)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_spec(rng: &mut ChaCha8Rng, frames: usize) -> Vec<Vec<f64>> {
        (0..frames)
            .map(|_| (0..33).map(|_| rng.random_range(0.0..1.0)).collect())
            .collect()
    }

    fn spec(frames: &[Vec<f64>]) -> Spectrogram<f64> {
        Spectrogram::from_frames(frames, 64, 32, 8000).unwrap()
    }

    fn delayed(frames: &[Vec<f64>], k: i64) -> Vec<Vec<f64>> {
        let bins = frames[0].len();
        if k >= 0 {
            std::iter::repeat_n(vec![0.0; bins], k as usize)
                .chain(frames.iter().cloned())
                .collect()
        } else {
            frames[(-k) as usize..].to_vec()
        }
    }

    #[test]
    fn identity_gives_zero() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let a = spec(&random_spec(&mut rng, 50));
        assert_eq!(estimate_offset(&a, &a, 10).unwrap(), 0);
    }

    #[test]
    fn leading_zero_delay_is_recovered() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let frames = random_spec(&mut rng, 80);
        for k in [1, 5, 17] {
            let b = spec(&delayed(&frames, k));
            assert_eq!(estimate_offset(&spec(&frames), &b, 20).unwrap(), k);
        }
    }

    #[test]
    fn anti_symmetric_on_constructed_shift() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let frames = random_spec(&mut rng, 60);
        let shifted = delayed(&frames, 7);
        assert_eq!(estimate_offset(&spec(&frames), &spec(&shifted), 15).unwrap(), 7);
        assert_eq!(estimate_offset(&spec(&shifted), &spec(&frames), 15).unwrap(), -7);
    }

    #[test]
    fn ties_prefer_small_then_negative() {
        // constant spectrogram: every lag scores 0
        let frames = vec![vec![1.0; 33]; 20];
        assert_eq!(estimate_offset(&spec(&frames), &spec(&frames), 5).unwrap(), 0);

        // period-2 pattern: lags -1 and +1 tie, 0 is worse
        let alt: Vec<Vec<f64>> = (0..20).map(|t| vec![(t % 2) as f64; 33]).collect();
        let b: Vec<Vec<f64>> = (0..20).map(|t| vec![((t + 1) % 2) as f64; 33]).collect();
        assert_eq!(estimate_offset(&spec(&alt), &spec(&b), 3).unwrap(), -1);
    }

    #[test]
    fn mismatched_parameters() {
        let a = spec(&[vec![0.0; 33]]);
        let b = Spectrogram::from_frames(&[vec![0.0; 33]], 64, 16, 8000).unwrap();
        assert!(matches!(estimate_offset(&a, &b, 0), Err(SignalError::ParameterMismatch)));
    }

    #[test]
    fn overlap_bounds() {
        assert_eq!(overlap(10, 10, 0), Some((0, 10)));
        assert_eq!(overlap(10, 10, 3), Some((0, 7)));
        assert_eq!(overlap(10, 10, -3), Some((3, 10)));
        assert_eq!(overlap(10, 10, 10), None);
    }
}
