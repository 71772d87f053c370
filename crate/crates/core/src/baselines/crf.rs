use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use super::BaselineError;
use crate::semantic::{LabelMode, LabelVocab, SrTuple};
use crate::Real;

/// Laplace smoothing constant for pairwise counts.
pub const DEFAULT_ALPHA: f64 = 1.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CrfNode {
    Verb,
    Object,
    Location,
}

impl CrfNode {
    pub const ALL: [CrfNode; 3] = [CrfNode::Verb, CrfNode::Object, CrfNode::Location];

    fn label<'a>(&self, t: &'a SrTuple) -> Option<&'a str> {
        match self {
            CrfNode::Verb => Some(&t.verb),
            CrfNode::Object => t.object.as_deref(),
            CrfNode::Location => t.location.as_deref(),
        }
    }
}

impl fmt::Display for CrfNode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CrfNode::Verb => "verb",
            CrfNode::Object => "object",
            CrfNode::Location => "location",
        })
    }
}

impl std::str::FromStr for CrfNode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "verb" => Ok(CrfNode::Verb),
            "object" => Ok(CrfNode::Object),
            "location" => Ok(CrfNode::Location),
            other => Err(format!("unknown node {other:?}")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NodePair {
    VerbObject,
    VerbLocation,
    ObjectLocation,
}

impl NodePair {
    pub const ALL: [NodePair; 3] = [NodePair::VerbObject, NodePair::VerbLocation, NodePair::ObjectLocation];

    pub fn nodes(self) -> (CrfNode, CrfNode) {
        match self {
            NodePair::VerbObject => (CrfNode::Verb, CrfNode::Object),
            NodePair::VerbLocation => (CrfNode::Verb, CrfNode::Location),
            NodePair::ObjectLocation => (CrfNode::Object, CrfNode::Location),
        }
    }
}

/// Allowed labels per node.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct CrfVocabs {
    pub verb: BTreeSet<String>,
    pub object: BTreeSet<String>,
    pub location: BTreeSet<String>,
}

impl CrfVocabs {
    pub fn from_label_vocabs(verb: &LabelVocab, object: &LabelVocab, location: &LabelVocab) -> Self {
        let set = |v: &LabelVocab| v.labels().map(str::to_string).collect();
        Self {
            verb: set(verb),
            object: set(object),
            location: set(location),
        }
    }

    pub fn get(&self, node: CrfNode) -> &BTreeSet<String> {
        match node {
            CrfNode::Verb => &self.verb,
            CrfNode::Object => &self.object,
            CrfNode::Location => &self.location,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct PairCounts {
    /// Tuples that contributed to this pair.
    pub n: usize,
    pub counts: BTreeMap<String, BTreeMap<String, usize>>,
}

impl PairCounts {
    pub fn count(&self, u: &str, v: &str) -> usize {
        self.counts.get(u).and_then(|m| m.get(v)).copied().unwrap_or(0)
    }
}

/// Smoothed log co-occurrence potentials for the three node pairs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairwisePotentials {
    pub alpha: f64,
    pub vocabs: CrfVocabs,
    pub verb_object: PairCounts,
    pub verb_location: PairCounts,
    pub object_location: PairCounts,
}

impl PairwisePotentials {
    pub fn counts(&self, pair: NodePair) -> &PairCounts {
        match pair {
            NodePair::VerbObject => &self.verb_object,
            NodePair::VerbLocation => &self.verb_location,
            NodePair::ObjectLocation => &self.object_location,
        }
    }

    /// `ln((count(u,v) + alpha) / (N + alpha |U| |V|))`, defined for any
    /// label pair.
    pub fn potential<T: Real>(&self, pair: NodePair, u: &str, v: &str) -> T {
        let (a, b) = pair.nodes();
        let c = self.counts(pair);
        let cells = (self.vocabs.get(a).len() * self.vocabs.get(b).len()) as f64;
        let p = (c.count(u, v) as f64 + self.alpha) / (c.n as f64 + self.alpha * cells);
        T::from_f64_lossy(p.ln())
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct FitReport {
    /// Tuples skipped per pair because a label was missing or outside the
    /// vocabulary.
    pub skipped_verb_object: usize,
    pub skipped_verb_location: usize,
    pub skipped_object_location: usize,
}

pub fn fit_pairwise(
    tuples: &[SrTuple],
    vocabs: CrfVocabs,
    alpha: f64,
) -> Result<(PairwisePotentials, FitReport), BaselineError> {
    if tuples.is_empty() {
        return Err(BaselineError::EmptyTuples);
    }
    let mut tables: [PairCounts; 3] = Default::default();
    let mut skipped = [0usize; 3];
    for (slot, pair) in NodePair::ALL.iter().enumerate() {
        let (a, b) = pair.nodes();
        for t in tuples {
            let labels = a.label(t).zip(b.label(t));
            match labels {
                Some((u, v)) if vocabs.get(a).contains(u) && vocabs.get(b).contains(v) => {
                    let table = &mut tables[slot];
                    table.n += 1;
                    *table
                        .counts
                        .entry(u.to_string())
                        .or_default()
                        .entry(v.to_string())
                        .or_insert(0) += 1;
                }
                _ => skipped[slot] += 1,
            }
        }
    }
    let [verb_object, verb_location, object_location] = tables;
    Ok((
        PairwisePotentials {
            alpha,
            vocabs,
            verb_object,
            verb_location,
            object_location,
        },
        FitReport {
            skipped_verb_object: skipped[0],
            skipped_verb_location: skipped[1],
            skipped_object_location: skipped[2],
        },
    ))
}

/// Per-node label scores, e.g. classifier responses.
#[derive(Debug, Clone, PartialEq)]
pub struct UnaryScores<T> {
    pub verb: BTreeMap<String, T>,
    pub object: BTreeMap<String, T>,
    pub location: BTreeMap<String, T>,
}

impl<T> Default for UnaryScores<T> {
    fn default() -> Self {
        Self {
            verb: BTreeMap::new(),
            object: BTreeMap::new(),
            location: BTreeMap::new(),
        }
    }
}

impl<T: Real> UnaryScores<T> {
    pub fn get(&self, node: CrfNode) -> &BTreeMap<String, T> {
        match node {
            CrfNode::Verb => &self.verb,
            CrfNode::Object => &self.object,
            CrfNode::Location => &self.location,
        }
    }

    pub fn get_mut(&mut self, node: CrfNode) -> &mut BTreeMap<String, T> {
        match node {
            CrfNode::Verb => &mut self.verb,
            CrfNode::Object => &mut self.object,
            CrfNode::Location => &mut self.location,
        }
    }
}

/// Read `snippet_id,node,label,score` rows. A header row is skipped.
pub fn parse_unaries<T: Real>(text: &str, context: &str) -> Result<BTreeMap<String, UnaryScores<T>>, BaselineError> {
    let mut out: BTreeMap<String, UnaryScores<T>> = BTreeMap::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || (i == 0 && line.starts_with("snippet_id")) {
            continue;
        }
        let err = |message: String| BaselineError::Format {
            context: format!("{context}:{}", i + 1),
            message,
        };
        let fields: Vec<&str> = line.splitn(4, ',').map(str::trim).collect();
        let [id, node, label, score] = fields[..] else {
            return Err(err(format!("expected 4 fields, got {}", fields.len())));
        };
        let node: CrfNode = node.parse().map_err(err)?;
        let score: f64 = score.parse().map_err(|_| err(format!("bad score {score:?}")))?;
        if !score.is_finite() {
            return Err(err("non-finite score".into()));
        }
        let map = out.entry(id.to_string()).or_default().get_mut(node);
        if map.insert(label.to_string(), T::from_f64_lossy(score)).is_some() {
            return Err(err(format!("duplicate {node} label {label:?} for {id}")));
        }
    }
    Ok(out)
}

/// Add `other` into `into`, label by label.
pub fn sum_unaries<T: Real>(into: &mut BTreeMap<String, UnaryScores<T>>, other: BTreeMap<String, UnaryScores<T>>) {
    for (id, scores) in other {
        let target = into.entry(id).or_default();
        for node in CrfNode::ALL {
            for (label, s) in scores.get(node) {
                let e = target.get_mut(node).entry(label.clone()).or_insert_with(T::zero);
                *e = *e + *s;
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CrfWeights<T> {
    pub unary: T,
    pub pairwise: T,
}

impl<T: Real> Default for CrfWeights<T> {
    fn default() -> Self {
        Self {
            unary: T::one(),
            pairwise: T::one(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CrfSolution<T> {
    pub verb: String,
    pub object: String,
    pub location: String,
    pub score: T,
}

impl<T> CrfSolution<T> {
    pub fn to_sr(&self, mode: LabelMode) -> SrTuple {
        SrTuple {
            subject: None,
            verb: self.verb.clone(),
            object: Some(self.object.clone()),
            location: Some(self.location.clone()),
            mode,
        }
    }
}

fn candidates<T: Real>(scores: &BTreeMap<String, T>, top_k: Option<usize>) -> Vec<(&str, T)> {
    let mut v: Vec<(&str, T)> = scores.iter().map(|(k, s)| (k.as_str(), *s)).collect();
    if let Some(k) = top_k {
        v.sort_by(|a, b| b.1.partial_cmp(&a.1).unwrap_or(std::cmp::Ordering::Equal).then(a.0.cmp(b.0)));
        v.truncate(k.max(1));
        v.sort_by(|a, b| a.0.cmp(b.0));
    }
    v
}

/// Exact MAP over the verb × object × location product. The first
/// maximum in lexicographic label order wins ties. `top_k` restricts each
/// node to its best unary labels first.
pub fn crf_map<T: Real>(
    unaries: &UnaryScores<T>,
    potentials: &PairwisePotentials,
    weights: CrfWeights<T>,
    top_k: Option<usize>,
) -> Result<CrfSolution<T>, BaselineError> {
    for node in CrfNode::ALL {
        let scores = unaries.get(node);
        if scores.is_empty() {
            return Err(BaselineError::EmptyNode(node.to_string()));
        }
        if scores.values().any(|s| !s.is_finite()) {
            return Err(BaselineError::NonFinite);
        }
        let vocab = potentials.vocabs.get(node);
        if let Some(label) = scores.keys().find(|l| !vocab.contains(*l)) {
            return Err(BaselineError::UnknownLabel {
                node: node.to_string(),
                label: label.clone(),
            });
        }
    }
    let verbs = candidates(&unaries.verb, top_k);
    let objects = candidates(&unaries.object, top_k);
    let locations = candidates(&unaries.location, top_k);
    let table = |pair: NodePair, us: &[(&str, T)], vs: &[(&str, T)]| -> Vec<Vec<T>> {
        us.iter()
            .map(|(u, _)| vs.iter().map(|(v, _)| potentials.potential::<T>(pair, u, v)).collect())
            .collect()
    };
    let vo = table(NodePair::VerbObject, &verbs, &objects);
    let vl = table(NodePair::VerbLocation, &verbs, &locations);
    let ol = table(NodePair::ObjectLocation, &objects, &locations);

    let mut best: Option<(T, usize, usize, usize)> = None;
    for (i, (_, uv)) in verbs.iter().enumerate() {
        for (j, (_, uo)) in objects.iter().enumerate() {
            let partial_u = *uv + *uo;
            let partial_p = vo[i][j];
            for (l, (_, ul)) in locations.iter().enumerate() {
                let score = weights.unary * (partial_u + *ul) + weights.pairwise * (partial_p + vl[i][l] + ol[j][l]);
                if best.is_none_or(|b| score > b.0) {
                    best = Some((score, i, j, l));
                }
            }
        }
    }
    let (score, i, j, l) = best.expect("all nodes non-empty");
    Ok(CrfSolution {
        verb: verbs[i].0.to_string(),
        object: objects[j].0.to_string(),
        location: locations[l].0.to_string(),
        score,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tuple(v: &str, o: Option<&str>, l: Option<&str>) -> SrTuple {
        SrTuple {
            subject: None,
            verb: v.into(),
            object: o.map(Into::into),
            location: l.map(Into::into),
            mode: LabelMode::Text,
        }
    }

    fn set(v: &[&str]) -> BTreeSet<String> {
        v.iter().map(|s| s.to_string()).collect()
    }

    fn vocabs() -> CrfVocabs {
        CrfVocabs {
            verb: set(&["cut", "open", "walk"]),
            object: set(&["door", "tomato"]),
            location: set(&["kitchen", "street"]),
        }
    }

    fn scores(v: &[(&str, f64)]) -> BTreeMap<String, f64> {
        v.iter().map(|(k, s)| (k.to_string(), *s)).collect()
    }

    #[test]
    fn single_tuple_gets_maximal_potential() {
        let (p, report) = fit_pairwise(&[tuple("cut", Some("tomato"), Some("kitchen"))], vocabs(), 1.0).unwrap();
        assert_eq!(report, FitReport::default());
        let seen: f64 = p.potential(NodePair::VerbObject, "cut", "tomato");
        assert!((seen - (2.0f64 / 7.0).ln()).abs() < 1e-15);
        let unseen: f64 = p.potential(NodePair::VerbObject, "open", "door");
        assert!((unseen - (1.0f64 / 7.0).ln()).abs() < 1e-15);
        for v in &p.vocabs.verb {
            for o in &p.vocabs.object {
                assert!(p.potential::<f64>(NodePair::VerbObject, v, o) <= seen);
            }
        }
    }

    #[test]
    fn skips_are_counted_per_pair() {
        let t = [
            tuple("cut", Some("tomato"), None),
            tuple("dance", Some("door"), Some("street")),
        ];
        let (p, r) = fit_pairwise(&t, vocabs(), 1.0).unwrap();
        assert_eq!(r.skipped_verb_object, 1);
        assert_eq!(r.skipped_verb_location, 2);
        assert_eq!(r.skipped_object_location, 1);
        assert_eq!(p.verb_object.n, 1);
        assert_eq!(p.object_location.n, 1);
        assert_eq!(fit_pairwise(&[], vocabs(), 1.0).unwrap_err(), BaselineError::EmptyTuples);
    }

    fn unaries() -> UnaryScores<f64> {
        UnaryScores {
            verb: scores(&[("cut", 0.2), ("open", 0.5), ("walk", 0.1)]),
            object: scores(&[("door", 0.3), ("tomato", 0.4)]),
            location: scores(&[("kitchen", 0.6), ("street", 0.2)]),
        }
    }

    #[test]
    fn zero_pairwise_is_argmax() {
        let t: Vec<SrTuple> = (0..10).map(|_| tuple("cut", Some("tomato"), Some("kitchen"))).collect();
        let (p, _) = fit_pairwise(&t, vocabs(), 1.0).unwrap();
        let w = CrfWeights { unary: 1.0, pairwise: 0.0 };
        let s = crf_map(&unaries(), &p, w, None).unwrap();
        assert_eq!((s.verb.as_str(), s.object.as_str(), s.location.as_str()), ("open", "tomato", "kitchen"));
    }

    #[test]
    fn zero_unary_follows_cooccurrence() {
        let t: Vec<SrTuple> = (0..10).map(|_| tuple("open", Some("door"), Some("street"))).collect();
        let (p, _) = fit_pairwise(&t, vocabs(), 1.0).unwrap();
        let w = CrfWeights { unary: 0.0, pairwise: 1.0 };
        let s = crf_map(&unaries(), &p, w, None).unwrap();
        assert_eq!(s.to_sr(LabelMode::Text).to_string(), "<-, open, door, street>");
    }

    #[test]
    fn ties_and_top_k() {
        let (p, _) = fit_pairwise(&[tuple("walk", None, None)], vocabs(), 1.0).unwrap();
        let flat = UnaryScores {
            verb: scores(&[("walk", 0.0), ("cut", 0.0)]),
            object: scores(&[("tomato", 0.0), ("door", 0.0)]),
            location: scores(&[("street", 0.0), ("kitchen", 0.0)]),
        };
        let s = crf_map(&flat, &p, CrfWeights::default(), None).unwrap();
        assert_eq!((s.verb.as_str(), s.object.as_str(), s.location.as_str()), ("cut", "door", "kitchen"));
        let s = crf_map(&unaries(), &p, CrfWeights::default(), Some(1)).unwrap();
        assert_eq!((s.verb.as_str(), s.object.as_str(), s.location.as_str()), ("open", "tomato", "kitchen"));
    }

    #[test]
    fn label_checks() {
        let (p, _) = fit_pairwise(&[tuple("walk", None, None)], vocabs(), 1.0).unwrap();
        let mut u = unaries();
        u.verb.insert("fly".into(), 1.0);
        assert!(matches!(crf_map(&u, &p, CrfWeights::default(), None), Err(BaselineError::UnknownLabel { .. })));
        let mut u = unaries();
        u.location.clear();
        assert_eq!(
            crf_map(&u, &p, CrfWeights::default(), None).unwrap_err(),
            BaselineError::EmptyNode("location".into())
        );
    }

    #[test]
    fn unary_files_sum() {
        let a = "snippet_id,node,label,score\ns1,verb,cut,0.5\ns1,object,tomato,1\n";
        let b = "s1,verb,cut,0.25\ns2,location,kitchen,2\n";
        let mut all = parse_unaries::<f64>(a, "a.csv").unwrap();
        sum_unaries(&mut all, parse_unaries(b, "b.csv").unwrap());
        assert_eq!(all["s1"].verb["cut"], 0.75);
        assert_eq!(all["s2"].location["kitchen"], 2.0);
        let err = parse_unaries::<f64>("s1,verb,cut\n", "c.csv").unwrap_err();
        assert!(err.to_string().starts_with("c.csv:1"));
        assert!(parse_unaries::<f64>("s1,noun,cut,1\n", "d.csv").is_err());
        assert!(parse_unaries::<f64>("s1,verb,cut,1\ns1,verb,cut,2\n", "e.csv").is_err());
    }
}
