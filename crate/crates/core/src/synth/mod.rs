//! Deterministic synthetic fixtures: a soundtrack with inserted narration,
//! and a complete movie bundle around it.

mod fixture;
mod mix;

pub use fixture::{FixtureMovie, FixtureSpec, FIXTURE_FEATURE_DIM};
pub use mix::{synthetic_mix, MixSpec, SyntheticMix};
