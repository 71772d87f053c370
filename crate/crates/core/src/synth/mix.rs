use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::signal::AudioTrack;
use crate::TimeInterval;

/// Original soundtrack, the narrated mix and the inserted narration intervals
/// on the mixed timeline.
#[derive(Debug, Clone)]
pub struct SyntheticMix {
    pub original: AudioTrack<f64>,
    pub mixed: AudioTrack<f64>,
    pub narration: Vec<TimeInterval>,
    pub offset_s: f64,
}

#[derive(Debug, Clone)]
pub struct MixSpec {
    pub sample_rate: u32,
    pub duration_s: f64,
    pub offset_s: f64,
    pub bursts: usize,
    pub min_burst_s: f64,
    pub max_burst_s: f64,
    pub seed: u64,
}

impl Default for MixSpec {
    fn default() -> Self {
        Self {
            sample_rate: 16_000,
            duration_s: 180.0,
            offset_s: 1.5,
            bursts: 8,
            min_burst_s: 1.2,
            max_burst_s: 4.0,
            seed: 42,
        }
    }
}

/// Slowly evolving chords plus faint noise.
fn soundtrack(rng: &mut ChaCha8Rng, sample_rate: u32, n: usize) -> Vec<f64> {
    const ROOTS: [f64; 6] = [110.0, 130.81, 146.83, 164.81, 196.0, 220.0];
    let chord_len = (4.0 * sample_rate as f64) as usize;
    let chords: Vec<[f64; 3]> = (0..n / chord_len + 1)
        .map(|_| {
            let root = ROOTS[rng.random_range(0..ROOTS.len())];
            [root, root * 1.25, root * 1.5]
        })
        .collect();
    (0..n)
        .map(|i| {
            let t = i as f64 / sample_rate as f64;
            let chord = &chords[i / chord_len];
            let env = 0.6 + 0.4 * (2.0 * PI * 0.05 * t).sin();
            let tone: f64 = chord
                .iter()
                .enumerate()
                .map(|(h, f)| (2.0 * PI * f * t).sin() / (h + 1) as f64)
                .sum();
            0.12 * env * tone + 0.002 * rng.random_range(-1.0..1.0)
        })
        .collect()
}

/// Voiced, syllable-modulated harmonic signal standing in for a narrator.
fn narration(rng: &mut ChaCha8Rng, sample_rate: u32, n: usize) -> Vec<f64> {
    let f0 = rng.random_range(110.0..200.0);
    let rate = rng.random_range(3.0..5.0);
    let ramp = (0.02 * sample_rate as f64) as usize;
    (0..n)
        .map(|i| {
            let t = i as f64 / sample_rate as f64;
            let pitch = f0 * (1.0 + 0.05 * (2.0 * PI * 0.7 * t).sin());
            let voiced: f64 = (1..=12)
                .map(|h| {
                    let formant = if (3..=5).contains(&h) { 1.0 } else { 0.4 };
                    formant * (2.0 * PI * pitch * h as f64 * t).sin() / h as f64
                })
                .sum();
            let syllable = 0.65 + 0.35 * (2.0 * PI * rate * t).sin();
            let edge = (i.min(n - 1 - i) as f64 / ramp as f64).min(1.0);
            0.25 * voiced * syllable * edge
        })
        .collect()
}

/// Build an original track and a mix delayed by `offset_s` with narration
/// bursts inserted at random, non-adjacent positions.
pub fn synthetic_mix(spec: &MixSpec) -> SyntheticMix {
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let sr = spec.sample_rate;
    let n = (spec.duration_s * sr as f64) as usize;
    let original = soundtrack(&mut rng, sr, n);

    let offset = (spec.offset_s * sr as f64).round() as usize;
    let mut mixed = vec![0.0; n + offset];
    mixed[offset..].copy_from_slice(&original);

    // one burst per equal slot, leaving at least 2 s of slack around it
    let usable_start = spec.offset_s + 2.0;
    let slot = (spec.duration_s - 2.0 - 2.0) / spec.bursts as f64;
    let mut narration_intervals = Vec::with_capacity(spec.bursts);
    for b in 0..spec.bursts {
        let len = rng.random_range(spec.min_burst_s..spec.max_burst_s.min(slot - 1.0));
        let slack = slot - len - 1.0;
        let start = usable_start + b as f64 * slot + 0.5 + rng.random_range(0.0..slack.max(0.01));
        let s0 = (start * sr as f64).round() as usize;
        let len_samples = (len * sr as f64).round() as usize;
        let voice = narration(&mut rng, sr, len_samples);
        for (dst, v) in mixed[s0..s0 + len_samples].iter_mut().zip(voice) {
            *dst += v;
        }
        narration_intervals.push(
            TimeInterval::new(s0 as f64 / sr as f64, (s0 + len_samples) as f64 / sr as f64)
                .expect("burst interval"),
        );
    }

    SyntheticMix {
        original: AudioTrack {
            samples: original,
            sample_rate: sr,
        },
        mixed: AudioTrack {
            samples: mixed,
            sample_rate: sr,
        },
        narration: narration_intervals,
        offset_s: offset as f64 / sr as f64,
    }
}
