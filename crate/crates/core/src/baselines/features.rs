use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::BaselineError;
use crate::Real;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum FeatureKind {
    Dt,
    Lsda,
    Places,
    Hybrid,
    Other(String),
}

impl fmt::Display for FeatureKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FeatureKind::Dt => f.write_str("DT"),
            FeatureKind::Lsda => f.write_str("LSDA"),
            FeatureKind::Places => f.write_str("PLACES"),
            FeatureKind::Hybrid => f.write_str("HYBRID"),
            FeatureKind::Other(s) => f.write_str(s),
        }
    }
}

impl FromStr for FeatureKind {
    type Err = std::convert::Infallible;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s.to_ascii_uppercase().as_str() {
            "DT" => FeatureKind::Dt,
            "LSDA" => FeatureKind::Lsda,
            "PLACES" => FeatureKind::Places,
            "HYBRID" => FeatureKind::Hybrid,
            _ => FeatureKind::Other(s.to_string()),
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FeatureVector<T> {
    pub kind: FeatureKind,
    values: Vec<T>,
}

impl<T: Real> FeatureVector<T> {
    pub fn new(kind: FeatureKind, values: Vec<T>) -> Result<Self, BaselineError> {
        if values.iter().any(|v| !v.is_finite()) {
            return Err(BaselineError::NonFinite);
        }
        Ok(Self { kind, values })
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn dim(&self) -> usize {
        self.values.len()
    }
}

/// Scale so the absolute values sum to one.
pub fn l1_normalize<T: Real>(v: &FeatureVector<T>) -> Result<FeatureVector<T>, BaselineError> {
    let norm: T = v.values.iter().map(|x| x.abs()).sum();
    if norm == T::zero() {
        return Err(BaselineError::Unnormalizable);
    }
    Ok(FeatureVector {
        kind: v.kind.clone(),
        values: v.values.iter().map(|x| *x / norm).collect(),
    })
}

/// `1 - sum(min(a_i, b_i))` for L1-normalized histograms.
pub fn intersection_distance<T: Real>(a: &FeatureVector<T>, b: &FeatureVector<T>) -> Result<T, BaselineError> {
    if a.dim() != b.dim() {
        return Err(BaselineError::DimMismatch {
            expected: a.dim(),
            found: b.dim(),
        });
    }
    let shared: T = a.values.iter().zip(&b.values).map(|(x, y)| x.min(*y)).sum();
    Ok(T::one() - shared)
}

/// Index of the closest training vector; the earliest wins ties.
pub fn nearest_index<T: Real, S>(
    query: &FeatureVector<T>,
    training: &[(FeatureVector<T>, S)],
) -> Result<(usize, T), BaselineError> {
    let mut best: Option<(usize, T)> = None;
    for (i, (v, _)) in training.iter().enumerate() {
        let d = intersection_distance(query, v)?;
        if best.is_none_or(|(_, bd)| d < bd) {
            best = Some((i, d));
        }
    }
    best.ok_or(BaselineError::EmptyTraining)
}

/// Sentence of the closest training item.
pub fn nearest_neighbor<'a, T: Real, S>(
    query: &FeatureVector<T>,
    training: &'a [(FeatureVector<T>, S)],
) -> Result<&'a S, BaselineError> {
    nearest_index(query, training).map(|(i, _)| &training[i].1)
}
