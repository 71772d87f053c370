use std::cmp::Ordering;
use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::kmeans::{kmeans_assign, Codebook};
use super::BaselineError;
use crate::Real;

/// ⟨top detector class, activity word, second detector class, top scene⟩.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct VisualWordTuple {
    pub subject: String,
    pub activity_word: usize,
    pub object: String,
    pub scene: String,
}

/// Classes by descending score, names ascending on ties.
pub fn rank_classes<T: Real>(scores: &BTreeMap<String, T>) -> Result<Vec<(&str, T)>, BaselineError> {
    if scores.values().any(|v| v.is_nan()) {
        return Err(BaselineError::NonFinite);
    }
    let mut v: Vec<(&str, T)> = scores.iter().map(|(k, v)| (k.as_str(), *v)).collect();
    v.sort_by(|a, b| {
        b.1.partial_cmp(&a.1)
            .unwrap_or(Ordering::Equal)
            .then_with(|| a.0.cmp(b.0))
    });
    Ok(v)
}

pub fn visual_word_tuple<T: Real>(
    lsda: &BTreeMap<String, T>,
    dt: &[T],
    places: &BTreeMap<String, T>,
    codebook: &Codebook<T>,
) -> Result<VisualWordTuple, BaselineError> {
    let objects = rank_classes(lsda)?;
    if objects.len() < 2 {
        return Err(BaselineError::TooFewClasses(objects.len()));
    }
    let scenes = rank_classes(places)?;
    let scene = scenes.first().ok_or(BaselineError::TooFewClasses(0))?.0;
    Ok(VisualWordTuple {
        subject: objects[0].0.to_string(),
        activity_word: kmeans_assign(codebook, dt)?,
        object: objects[1].0.to_string(),
        scene: scene.to_string(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn scores(v: &[(&str, f64)]) -> BTreeMap<String, f64> {
        v.iter().map(|(k, s)| (k.to_string(), *s)).collect()
    }

    fn codebook() -> Codebook<f64> {
        Codebook {
            centroids: vec![vec![0.0, 0.0], vec![1.0, 1.0]],
            seed: 42,
            objective_history: vec![],
            converged: true,
        }
    }

    #[test]
    fn argmax_reading() {
        let t = visual_word_tuple(
            &scores(&[("dog", 0.9), ("car", 0.5)]),
            &[0.9, 0.8],
            &scores(&[("street", 0.7), ("kitchen", 0.1)]),
            &codebook(),
        )
        .unwrap();
        assert_eq!(t.subject, "dog");
        assert_eq!(t.object, "car");
        assert_eq!(t.scene, "street");
        assert_eq!(t.activity_word, 1);
    }

    #[test]
    fn ties_and_errors() {
        let t = visual_word_tuple(
            &scores(&[("b", 0.5), ("a", 0.5)]),
            &[0.0, 0.0],
            &scores(&[("x", 1.0)]),
            &codebook(),
        )
        .unwrap();
        assert_eq!((t.subject.as_str(), t.object.as_str()), ("a", "b"));
        assert_eq!(
            visual_word_tuple(&scores(&[("a", 1.0)]), &[0.0, 0.0], &scores(&[("x", 1.0)]), &codebook())
                .unwrap_err(),
            BaselineError::TooFewClasses(1)
        );
    }

    #[test]
    fn ten_class_fixture() {
        // Hand-sorted: 0.8 person, 0.7 {cup, knife}, 0.6 table, ...
        let lsda = scores(&[
            ("table", 0.6),
            ("knife", 0.7),
            ("person", 0.8),
            ("cup", 0.7),
            ("door", 0.1),
            ("car", 0.3),
            ("phone", 0.3),
            ("bag", 0.05),
            ("window", 0.2),
            ("chair", 0.55),
        ]);
        let ranked: Vec<&str> = rank_classes(&lsda).unwrap().into_iter().map(|c| c.0).collect();
        assert_eq!(
            ranked,
            ["person", "cup", "knife", "table", "chair", "car", "phone", "window", "door", "bag"]
        );
        let t = visual_word_tuple(&lsda, &[0.1, 0.2], &scores(&[("office", 0.4), ("kitchen", 0.4)]), &codebook())
            .unwrap();
        assert_eq!((t.subject.as_str(), t.object.as_str(), t.scene.as_str()), ("person", "cup", "kitchen"));
    }
}
