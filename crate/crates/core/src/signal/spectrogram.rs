use std::f64::consts::PI;

use rustfft::num_complex::Complex;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use super::SignalError;
use crate::Real;

/// Mono PCM samples in [-1, 1].
#[derive(Debug, Clone, PartialEq)]
pub struct AudioTrack<T> {
    pub samples: Vec<T>,
    pub sample_rate: u32,
}

impl<T: Real> AudioTrack<T> {
    pub fn new(samples: Vec<T>, sample_rate: u32) -> Result<Self, SignalError> {
        if sample_rate == 0 {
            return Err(SignalError::InvalidSampleRate(sample_rate));
        }
        Ok(Self {
            samples,
            sample_rate,
        })
    }

    /// Downmix interleaved multi-channel samples by averaging the channels.
    pub fn from_interleaved(
        interleaved: &[T],
        channels: usize,
        sample_rate: u32,
    ) -> Result<Self, SignalError> {
        if channels == 0 {
            return Err(SignalError::InvalidParameter("zero channels".into()));
        }
        let scale = T::one() / T::from_usize_lossy(channels);
        let samples = interleaved
            .chunks_exact(channels)
            .map(|frame| frame.iter().copied().sum::<T>() * scale)
            .collect();
        Self::new(samples, sample_rate)
    }

    pub fn duration_s(&self) -> f64 {
        self.samples.len() as f64 / self.sample_rate as f64
    }
}

/// Magnitude spectrogram stored row-major, one row per frame.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Spectrogram<T> {
    magnitudes: Vec<T>,
    frames: usize,
    bins: usize,
    pub window_size: usize,
    pub hop: usize,
    pub sample_rate: u32,
}

impl<T: Real> Spectrogram<T> {
    /// Build from explicit frames. All rows must have `window_size / 2 + 1` bins.
    pub fn from_frames(
        frames: &[Vec<T>],
        window_size: usize,
        hop: usize,
        sample_rate: u32,
    ) -> Result<Self, SignalError> {
        let bins = window_size / 2 + 1;
        if frames.iter().any(|f| f.len() != bins) {
            return Err(SignalError::InvalidParameter(format!(
                "every frame needs {bins} bins"
            )));
        }
        if frames.iter().flatten().any(|m| !(*m >= T::zero())) {
            return Err(SignalError::InvalidParameter(
                "magnitudes must be non-negative".into(),
            ));
        }
        Ok(Self {
            magnitudes: frames.iter().flatten().copied().collect(),
            frames: frames.len(),
            bins,
            window_size,
            hop,
            sample_rate,
        })
    }

    pub fn frames(&self) -> usize {
        self.frames
    }

    pub fn bins(&self) -> usize {
        self.bins
    }

    pub fn frame(&self, i: usize) -> &[T] {
        &self.magnitudes[i * self.bins..(i + 1) * self.bins]
    }

    pub fn iter_frames(&self) -> impl Iterator<Item = &[T]> {
        self.magnitudes.chunks_exact(self.bins)
    }

    pub fn frame_rate(&self) -> f64 {
        self.sample_rate as f64 / self.hop as f64
    }

    /// Same analysis parameters, so frames are comparable.
    pub fn compatible_with(&self, other: &Self) -> bool {
        self.window_size == other.window_size
            && self.hop == other.hop
            && self.sample_rate == other.sample_rate
            && self.bins == other.bins
    }
}

/// Periodic Hann window.
pub fn hann_window<T: Real>(n: usize) -> Vec<T> {
    (0..n)
        .map(|i| T::from_f64_lossy(0.5 - 0.5 * (2.0 * PI * i as f64 / n as f64).cos()))
        .collect()
}

/// Short-time Fourier magnitudes with a Hann window.
pub fn compute_spectrogram<T: Real>(
    track: &AudioTrack<T>,
    window_size: usize,
    hop: usize,
) -> Result<Spectrogram<T>, SignalError> {
    if window_size == 0 || !window_size.is_power_of_two() {
        return Err(SignalError::InvalidWindow(window_size));
    }
    if hop == 0 || hop > window_size {
        return Err(SignalError::InvalidHop {
            hop,
            window: window_size,
        });
    }
    if track.sample_rate == 0 {
        return Err(SignalError::InvalidSampleRate(track.sample_rate));
    }
    let len = track.samples.len();
    if len < window_size {
        return Err(SignalError::InputTooShort {
            samples: len,
            window: window_size,
        });
    }

    let frames = (len - window_size) / hop + 1;
    let bins = window_size / 2 + 1;
    let window = hann_window::<T>(window_size);
    let fft = FftPlanner::<T>::new().plan_fft_forward(window_size);
    let mut scratch = vec![Complex::default(); fft.get_inplace_scratch_len()];
    let mut buf = vec![Complex::default(); window_size];
    let mut magnitudes = Vec::with_capacity(frames * bins);

    for f in 0..frames {
        let chunk = &track.samples[f * hop..f * hop + window_size];
        for ((slot, &x), &w) in buf.iter_mut().zip(chunk).zip(&window) {
            *slot = Complex::new(x * w, T::zero());
        }
        fft.process_with_scratch(&mut buf, &mut scratch);
        magnitudes.extend(buf[..bins].iter().map(|c| c.norm()));
    }

    Ok(Spectrogram {
        magnitudes,
        frames,
        bins,
        window_size,
        hop,
        sample_rate: track.sample_rate,
    })
}
