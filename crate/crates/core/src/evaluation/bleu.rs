use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::EvalError;
use crate::baselines::tokenize_target;

pub const MAX_ORDER: usize = 4;

/// Candidate and references for one snippet, already tokenized.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalPair {
    pub snippet_id: String,
    pub candidate: Vec<String>,
    pub references: Vec<Vec<String>>,
}

impl EvalPair {
    /// Build from raw sentences with the corpus tokenizer.
    pub fn from_sentences(snippet_id: &str, candidate: &str, references: &[&str]) -> Self {
        Self {
            snippet_id: snippet_id.to_string(),
            candidate: tokenize_target(candidate),
            references: references.iter().map(|r| tokenize_target(r)).collect(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Smoothing {
    #[default]
    None,
    /// Add one to matches and totals for orders above 1.
    AddOne,
}

/// Pooled corpus counts.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct BleuStats {
    pub matches: [usize; MAX_ORDER],
    pub totals: [usize; MAX_ORDER],
    pub candidate_len: usize,
    pub reference_len: usize,
}

fn ngram_counts(tokens: &[String], n: usize) -> HashMap<&[String], usize> {
    let mut m = HashMap::new();
    if tokens.len() >= n {
        for g in tokens.windows(n) {
            *m.entry(g).or_insert(0) += 1;
        }
    }
    m
}

/// Reference length closest to `c`; the shorter one on ties.
fn closest_ref_len(c: usize, refs: &[Vec<String>]) -> usize {
    refs.iter()
        .map(Vec::len)
        .min_by_key(|&r| (r.abs_diff(c), r))
        .unwrap_or(0)
}

pub fn bleu_stats(pairs: &[EvalPair]) -> Result<BleuStats, EvalError> {
    if pairs.is_empty() {
        return Err(EvalError::EmptyPairs);
    }
    let mut s = BleuStats::default();
    for p in pairs {
        if p.references.is_empty() {
            return Err(EvalError::NoReference(p.snippet_id.clone()));
        }
        s.candidate_len += p.candidate.len();
        s.reference_len += closest_ref_len(p.candidate.len(), &p.references);
        for n in 1..=MAX_ORDER {
            let cand = ngram_counts(&p.candidate, n);
            let mut max_ref: HashMap<&[String], usize> = HashMap::new();
            for r in &p.references {
                for (g, c) in ngram_counts(r, n) {
                    let e = max_ref.entry(g).or_insert(0);
                    *e = (*e).max(c);
                }
            }
            for (g, c) in cand {
                s.matches[n - 1] += c.min(max_ref.get(g).copied().unwrap_or(0));
                s.totals[n - 1] += c;
            }
        }
    }
    Ok(s)
}

impl BleuStats {
    /// BLEU@4 in percent.
    pub fn score(&self, smoothing: Smoothing) -> f64 {
        let mut log_sum = 0.0;
        for n in 0..MAX_ORDER {
            let (mut m, mut t) = (self.matches[n] as f64, self.totals[n] as f64);
            if smoothing == Smoothing::AddOne && n > 0 {
                m += 1.0;
                t += 1.0;
            }
            if m == 0.0 || t == 0.0 {
                return 0.0;
            }
            log_sum += (m / t).ln();
        }
        let (c, r) = (self.candidate_len as f64, self.reference_len as f64);
        let bp = if c > r { 1.0 } else { (1.0 - r / c).exp() };
        100.0 * bp * (log_sum / MAX_ORDER as f64).exp()
    }
}

/// Corpus-level BLEU@4 with clipped counts pooled over all pairs.
pub fn bleu4(pairs: &[EvalPair], smoothing: Smoothing) -> Result<f64, EvalError> {
    Ok(bleu_stats(pairs)?.score(smoothing))
}

#[derive(Deserialize)]
struct JsonPair {
    snippet_id: String,
    candidate: String,
    references: Vec<String>,
}

/// Eval input: JSON lines `{snippet_id, candidate, references: [..]}` or
/// CSV `snippet_id,candidate,reference` with one row per reference.
pub fn parse_eval_pairs(text: &str, context: &str) -> Result<Vec<EvalPair>, EvalError> {
    let first = text.trim_start().chars().next();
    if first == Some('{') {
        parse_jsonl(text, context)
    } else {
        parse_csv(text, context)
    }
}

fn parse_jsonl(text: &str, context: &str) -> Result<Vec<EvalPair>, EvalError> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let p: JsonPair = serde_json::from_str(line).map_err(|e| EvalError::Format {
            context: format!("{context}:{}", i + 1),
            message: e.to_string(),
        })?;
        let refs: Vec<&str> = p.references.iter().map(String::as_str).collect();
        out.push(EvalPair::from_sentences(&p.snippet_id, &p.candidate, &refs));
    }
    Ok(out)
}

fn parse_csv(text: &str, context: &str) -> Result<Vec<EvalPair>, EvalError> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(false)
        .from_reader(text.as_bytes());
    let mut out: Vec<EvalPair> = Vec::new();
    for (i, row) in reader.records().enumerate() {
        let err = |message: String| EvalError::Format {
            context: format!("{context}:{}", i + 2),
            message,
        };
        let row = row.map_err(|e| err(e.to_string()))?;
        if row.len() != 3 {
            return Err(err(format!("expected 3 columns, got {}", row.len())));
        }
        let (id, cand, reference) = (&row[0], &row[1], &row[2]);
        match out.last_mut() {
            Some(last) if last.snippet_id == id => {
                if last.candidate != tokenize_target(cand) {
                    return Err(err(format!("snippet {id} has two different candidates")));
                }
                last.references.push(tokenize_target(reference));
            }
            _ => {
                if out.iter().any(|p| p.snippet_id == id) {
                    return Err(err(format!("rows for snippet {id} are not contiguous")));
                }
                out.push(EvalPair::from_sentences(id, cand, &[reference]));
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pair(c: &str, refs: &[&str]) -> EvalPair {
        EvalPair::from_sentences("s", c, refs)
    }

    #[test]
    fn identical_scores_100() {
        let p = [pair("the man opens the door slowly .", &["the man opens the door slowly ."])];
        assert!((bleu4(&p, Smoothing::None).unwrap() - 100.0).abs() < 1e-12);
    }

    #[test]
    fn no_overlap_scores_zero() {
        let p = [pair("a b c d e", &["v w x y z"])];
        assert_eq!(bleu4(&p, Smoothing::None).unwrap(), 0.0);
        assert_eq!(bleu4(&p, Smoothing::AddOne).unwrap(), 0.0);
    }

    #[test]
    fn clipping_and_brevity() {
        // "the the the" against "the cat": unigram matches clipped to 1
        let s = bleu_stats(&[pair("the the the", &["the cat"])]).unwrap();
        assert_eq!(s.matches[0], 1);
        assert_eq!(s.totals[0], 3);
        let short = [pair("the cat sat on", &["the cat sat on the mat"])];
        let s = bleu_stats(&short).unwrap();
        assert_eq!((s.candidate_len, s.reference_len), (4, 6));
        let want = 100.0 * (1.0f64 - 6.0 / 4.0).exp();
        assert!((s.score(Smoothing::None) - want).abs() < 1e-9);
    }

    #[test]
    fn closest_reference_prefers_shorter_on_tie() {
        let refs = vec![vec!["a".to_string(); 3], vec!["a".to_string(); 7]];
        assert_eq!(closest_ref_len(5, &refs), 3);
        assert_eq!(closest_ref_len(6, &refs), 7);
    }

    #[test]
    fn smoothing_rescues_missing_higher_orders() {
        let p = [pair("cat sat", &["the cat sat on the mat"])];
        assert_eq!(bleu4(&p, Smoothing::None).unwrap(), 0.0);
        assert!(bleu4(&p, Smoothing::AddOne).unwrap() > 0.0);
    }

    #[test]
    fn errors() {
        assert_eq!(bleu4(&[], Smoothing::None).unwrap_err(), EvalError::EmptyPairs);
        let p = EvalPair {
            snippet_id: "x".into(),
            candidate: vec![],
            references: vec![],
        };
        assert_eq!(bleu4(&[p], Smoothing::None).unwrap_err(), EvalError::NoReference("x".into()));
    }

    #[test]
    fn input_formats_agree() {
        let jsonl = r#"{"snippet_id":"a","candidate":"Someone opens the door.","references":["Someone opens a door.","He opens the door."]}"#;
        let csv = "snippet_id,candidate,reference\na,Someone opens the door.,Someone opens a door.\na,Someone opens the door.,He opens the door.\n";
        let x = parse_eval_pairs(jsonl, "j").unwrap();
        let y = parse_eval_pairs(csv, "c").unwrap();
        assert_eq!(x, y);
        assert_eq!(x[0].references.len(), 2);
        let bad = "snippet_id,candidate,reference\na,x,y\nb,x,y\na,x,z\n";
        assert!(parse_eval_pairs(bad, "c").unwrap_err().to_string().starts_with("c:4"));
    }
}
