use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::sr::{SrSlot, SrTuple};

pub const MIN_COUNT_30: usize = 30;
pub const MIN_COUNT_100: usize = 100;

/// Labels of one tuple slot seen at least `min_count` times.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LabelVocab {
    pub slot: SrSlot,
    pub min_count: usize,
    pub counts: BTreeMap<String, usize>,
}

impl LabelVocab {
    pub fn contains(&self, label: &str) -> bool {
        self.counts.contains_key(label)
    }

    pub fn len(&self) -> usize {
        self.counts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    pub fn labels(&self) -> impl Iterator<Item = &str> {
        self.counts.keys().map(String::as_str)
    }
}

pub fn count_labels<'a>(
    tuples: impl IntoIterator<Item = &'a SrTuple>,
    slot: SrSlot,
) -> BTreeMap<String, usize> {
    let mut counts = BTreeMap::new();
    for t in tuples {
        if let Some(label) = t.get(slot) {
            *counts.entry(label.to_string()).or_insert(0) += 1;
        }
    }
    counts
}

pub fn extract_label_vocab<'a>(
    tuples: impl IntoIterator<Item = &'a SrTuple>,
    slot: SrSlot,
    min_count: usize,
) -> LabelVocab {
    let mut counts = count_labels(tuples, slot);
    counts.retain(|_, c| *c >= min_count);
    LabelVocab {
        slot,
        min_count,
        counts,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::semantic::LabelMode;
    use proptest::prelude::*;

    fn verbs(labels: &[(&str, usize)]) -> Vec<SrTuple> {
        labels
            .iter()
            .flat_map(|(l, n)| (0..*n).map(move |_| SrTuple::verb_only(l.to_string(), LabelMode::Text)))
            .collect()
    }

    #[test]
    fn threshold_is_inclusive() {
        let t = verbs(&[("run", 29), ("walk", 30), ("open", 31)]);
        let v = extract_label_vocab(&t, SrSlot::Verb, MIN_COUNT_30);
        assert!(!v.contains("run"));
        assert_eq!(v.labels().collect::<Vec<_>>(), ["open", "walk"]);
        let all = extract_label_vocab(&t, SrSlot::Verb, 1);
        assert_eq!(all.len(), 3);
        assert!(extract_label_vocab(&t, SrSlot::Object, 1).is_empty());
    }

    proptest! {
        #[test]
        fn counts_match_oracle_and_nest(
            labels in prop::collection::vec(0usize..6, 0..200),
            a in 1usize..40,
            b in 1usize..40,
        ) {
            let tuples: Vec<SrTuple> = labels
                .iter()
                .map(|i| SrTuple::verb_only(format!("v{i}"), LabelMode::Text))
                .collect();
            let v = extract_label_vocab(&tuples, SrSlot::Verb, a);
            for i in 0..6 {
                let n = labels.iter().filter(|x| **x == i).count();
                let key = format!("v{i}");
                prop_assert_eq!(v.contains(&key), n >= a && n > 0);
                if n >= a && n > 0 {
                    prop_assert_eq!(v.counts[&key], n);
                }
            }
            let (lo, hi) = (a.min(b), a.max(b));
            let small = extract_label_vocab(&tuples, SrSlot::Verb, hi);
            let big = extract_label_vocab(&tuples, SrSlot::Verb, lo);
            prop_assert!(small.labels().all(|l| big.contains(l)));
        }
    }
}
