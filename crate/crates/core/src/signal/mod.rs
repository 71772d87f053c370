//! Audio-description segmentation: spectrogram comparison of the mixed
//! (narrated) track against the original soundtrack.

mod curve;
mod offset;
mod segment;
mod spectrogram;
mod wav;

use thiserror::Error;

pub use curve::{difference_curve, suggest_threshold, DifferenceCurve};
pub use offset::estimate_offset;
pub use segment::{
    segment_dvs, threshold_segments, threshold_segments_detailed, Segment, SegmentParams,
    Segmentation, Threshold, DEFAULT_HOP, DEFAULT_MAX_LAG_S, DEFAULT_MERGE_GAP_S,
    DEFAULT_MIN_SEGMENT_S, DEFAULT_THRESHOLD_PERCENTILE, DEFAULT_WINDOW,
};
pub use spectrogram::{compute_spectrogram, hann_window, AudioTrack, Spectrogram};
pub use wav::{read_wav, write_wav_i16};

#[derive(Debug, Error)]
pub enum SignalError {
    #[error("input too short: {samples} samples, window needs {window}")]
    InputTooShort { samples: usize, window: usize },
    #[error("invalid window: {0} is not a power of two")]
    InvalidWindow(usize),
    #[error("invalid hop {hop} for window {window}")]
    InvalidHop { hop: usize, window: usize },
    #[error("invalid sample rate {0}")]
    InvalidSampleRate(u32),
    #[error("sample rate mismatch: {0} Hz vs {1} Hz")]
    SampleRateMismatch(u32, u32),
    #[error("spectrogram parameters differ")]
    ParameterMismatch,
    #[error("no overlap between the compared spectrograms")]
    NoOverlap,
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("wav: {0}")]
    Wav(#[from] hound::Error),
}
