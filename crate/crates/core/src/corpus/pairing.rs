use serde::{Deserialize, Serialize};

use super::project::Snippet;

/// IoU needed for a DVS and a script sentence to count as the same moment.
pub const DEFAULT_MIN_IOU: f64 = 0.75;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SnippetPair {
    pub dvs_id: String,
    pub script_id: String,
    pub iou: f64,
}

/// One-to-one pairing by descending IoU. Candidates below `min_iou` are
/// ignored; equal IoUs resolve by DVS then script position.
pub fn pair_overlapping(dvs: &[Snippet], script: &[Snippet], min_iou: f64) -> Vec<SnippetPair> {
    let mut candidates: Vec<(f64, usize, usize)> = Vec::new();
    for (i, d) in dvs.iter().enumerate() {
        for (j, s) in script.iter().enumerate() {
            let v = d.interval.iou(&s.interval);
            if v >= min_iou && v > 0.0 {
                candidates.push((v, i, j));
            }
        }
    }
    candidates.sort_by(|a, b| b.0.total_cmp(&a.0).then(a.1.cmp(&b.1)).then(a.2.cmp(&b.2)));
    let mut used_d = vec![false; dvs.len()];
    let mut used_s = vec![false; script.len()];
    let mut out = Vec::new();
    for (v, i, j) in candidates {
        if used_d[i] || used_s[j] {
            continue;
        }
        used_d[i] = true;
        used_s[j] = true;
        out.push(SnippetPair {
            dvs_id: dvs[i].id.clone(),
            script_id: script[j].id.clone(),
            iou: v,
        });
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::Source;
    use crate::TimeInterval;
    use proptest::prelude::*;

    fn snip(id: &str, a: f64, b: f64, source: Source) -> Snippet {
        Snippet::new(id, "m", TimeInterval::new(a, b).unwrap(), "x", source)
    }

    #[test]
    fn threshold() {
        // [0,10) vs [1,9): 8/10
        let d = [snip("d", 0.0, 10.0, Source::Dvs)];
        let s = [snip("s", 1.0, 9.0, Source::Script)];
        let p = pair_overlapping(&d, &s, DEFAULT_MIN_IOU);
        assert_eq!(p.len(), 1);
        assert!((p[0].iou - 0.8).abs() < 1e-12);
        // [0,100) vs [0,74): 0.74
        let d = [snip("d", 0.0, 100.0, Source::Dvs)];
        let s = [snip("s", 0.0, 74.0, Source::Script)];
        assert!(pair_overlapping(&d, &s, DEFAULT_MIN_IOU).is_empty());
    }

    /// Repeatedly take the best remaining cell of the full IoU matrix.
    fn greedy_oracle(d: &[Snippet], s: &[Snippet], min_iou: f64) -> Vec<(usize, usize)> {
        let mut m: Vec<Vec<Option<f64>>> = d
            .iter()
            .map(|a| s.iter().map(|b| Some(a.interval.iou(&b.interval))).collect())
            .collect();
        let mut out = Vec::new();
        loop {
            let mut best: Option<(f64, usize, usize)> = None;
            for (i, row) in m.iter().enumerate() {
                for (j, v) in row.iter().enumerate() {
                    if let Some(v) = *v {
                        if v >= min_iou && v > 0.0 && best.is_none_or(|b| v > b.0) {
                            best = Some((v, i, j));
                        }
                    }
                }
            }
            let Some((_, bi, bj)) = best else { break };
            out.push((bi, bj));
            for row in m.iter_mut() {
                row[bj] = None;
            }
            for v in m[bi].iter_mut() {
                *v = None;
            }
        }
        out
    }

    fn grid() -> impl Strategy<Value = Vec<(f64, f64)>> {
        prop::collection::vec((0u32..20, 1u32..8), 5).prop_map(|v| {
            v.into_iter()
                .map(|(a, l)| (a as f64 * 0.5, (a + l) as f64 * 0.5))
                .collect()
        })
    }

    proptest! {
        #[test]
        fn five_by_five_matches_oracle(d in grid(), s in grid(), min_iou in 0.0f64..1.0) {
            let d: Vec<Snippet> = d.iter().enumerate().map(|(i, (a, b))| snip(&format!("d{i}"), *a, *b, Source::Dvs)).collect();
            let s: Vec<Snippet> = s.iter().enumerate().map(|(i, (a, b))| snip(&format!("s{i}"), *a, *b, Source::Script)).collect();
            let got: Vec<(usize, usize)> = pair_overlapping(&d, &s, min_iou)
                .iter()
                .map(|p| (
                    d.iter().position(|x| x.id == p.dvs_id).unwrap(),
                    s.iter().position(|x| x.id == p.script_id).unwrap(),
                ))
                .collect();
            prop_assert_eq!(&got, &greedy_oracle(&d, &s, min_iou));
            let mut ds: Vec<usize> = got.iter().map(|p| p.0).collect();
            let mut ss: Vec<usize> = got.iter().map(|p| p.1).collect();
            ds.dedup();
            ss.sort();
            ss.dedup();
            prop_assert_eq!(ds.len(), got.len());
            prop_assert_eq!(ss.len(), got.len());
        }
    }
}
