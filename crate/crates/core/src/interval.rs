use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
#[error("invalid interval [{start_s}, {end_s}): need 0 <= start < end")]
pub struct InvalidInterval {
    pub start_s: f64,
    pub end_s: f64,
}

/// A half-open span `[start_s, end_s)` on a movie timeline, in seconds.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawInterval", into = "RawInterval")]
pub struct TimeInterval {
    start_s: f64,
    end_s: f64,
}

#[derive(Serialize, Deserialize)]
struct RawInterval {
    start_s: f64,
    end_s: f64,
}

impl TryFrom<RawInterval> for TimeInterval {
    type Error = InvalidInterval;

    fn try_from(raw: RawInterval) -> Result<Self, Self::Error> {
        TimeInterval::new(raw.start_s, raw.end_s)
    }
}

impl From<TimeInterval> for RawInterval {
    fn from(iv: TimeInterval) -> Self {
        RawInterval {
            start_s: iv.start_s,
            end_s: iv.end_s,
        }
    }
}

impl TimeInterval {
    pub fn new(start_s: f64, end_s: f64) -> Result<Self, InvalidInterval> {
        if start_s.is_finite() && end_s.is_finite() && 0.0 <= start_s && start_s < end_s {
            Ok(Self { start_s, end_s })
        } else {
            Err(InvalidInterval { start_s, end_s })
        }
    }

    pub fn start_s(&self) -> f64 {
        self.start_s
    }

    pub fn end_s(&self) -> f64 {
        self.end_s
    }

    pub fn duration(&self) -> f64 {
        self.end_s - self.start_s
    }

    pub fn intersection(&self, other: &TimeInterval) -> f64 {
        (self.end_s.min(other.end_s) - self.start_s.max(other.start_s)).max(0.0)
    }

    pub fn contains(&self, other: &TimeInterval) -> bool {
        self.start_s <= other.start_s && other.end_s <= self.end_s
    }

    /// Intersection over union; disjoint intervals give 0.
    pub fn iou(&self, other: &TimeInterval) -> f64 {
        let inter = self.intersection(other);
        if inter <= 0.0 {
            return 0.0;
        }
        let union = self.duration() + other.duration() - inter;
        (inter / union).clamp(0.0, 1.0)
    }
}

impl fmt::Display for TimeInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{:.3}, {:.3})", self.start_s, self.end_s)
    }
}

pub fn iou(a: &TimeInterval, b: &TimeInterval) -> f64 {
    a.iou(b)
}
