//! Building blocks for an aligned movie-description corpus: narration
//! segmentation, script/subtitle alignment, semantic tuple extraction,
//! description baselines and evaluation.
//!
//! Numeric code is generic over [`Real`] (`f32` or `f64`); the aliases at
//! the crate root fix the scalar to `f64`.

// `!(x > 0)` style checks are meant to reject NaN as well
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod align;
pub mod baselines;
pub mod corpus;
pub mod evaluation;
pub mod interval;
pub mod scalar;
pub mod semantic;
pub mod signal;
pub mod synth;

pub use interval::{iou, InvalidInterval, TimeInterval};
pub use scalar::Real;

pub type AudioTrack = signal::AudioTrack<f64>;
pub type Spectrogram = signal::Spectrogram<f64>;
pub type DifferenceCurve = signal::DifferenceCurve<f64>;
pub type FeatureVector = baselines::FeatureVector<f64>;
pub type Codebook = baselines::Codebook<f64>;
pub type UnaryScores = baselines::UnaryScores<f64>;
