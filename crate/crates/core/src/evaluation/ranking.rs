use std::collections::{BTreeMap, BTreeSet};
use std::fmt::{self, Write as _};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::EvalError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Criterion {
    Correctness,
    Grammar,
    Relevance,
}

impl Criterion {
    pub const ALL: [Criterion; 3] = [Criterion::Correctness, Criterion::Grammar, Criterion::Relevance];
}

impl fmt::Display for Criterion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Criterion::Correctness => "Correctness",
            Criterion::Grammar => "Grammar",
            Criterion::Relevance => "Relevance",
        })
    }
}

/// One judge's ranking of all methods for one snippet.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankingRecord {
    pub snippet_id: String,
    #[serde(default = "default_criterion")]
    pub criterion: Criterion,
    pub ranks: BTreeMap<String, u32>,
}

fn default_criterion() -> Criterion {
    Criterion::Correctness
}

impl RankingRecord {
    /// Ranks must be a permutation of `1..=M`.
    pub fn validate(&self) -> Result<(), EvalError> {
        let m = self.ranks.len() as u32;
        let seen: BTreeSet<u32> = self.ranks.values().copied().collect();
        if m == 0 || seen.len() as u32 != m || seen.iter().any(|r| !(1..=m).contains(r)) {
            return Err(EvalError::InvalidRanks {
                snippet: self.snippet_id.clone(),
                message: format!("ranks {:?} are not a permutation of 1..={m}", self.ranks.values().collect::<Vec<_>>()),
            });
        }
        Ok(())
    }
}

/// Mean rank per method. All records must rank the same method set.
pub fn mean_ranks(records: &[RankingRecord]) -> Result<BTreeMap<String, f64>, EvalError> {
    let Some(first) = records.first() else {
        return Ok(BTreeMap::new());
    };
    let methods: BTreeSet<&String> = first.ranks.keys().collect();
    let mut sums: BTreeMap<String, u64> = BTreeMap::new();
    for r in records {
        r.validate()?;
        if r.ranks.keys().collect::<BTreeSet<_>>() != methods {
            return Err(EvalError::InconsistentMethods {
                snippet: r.snippet_id.clone(),
            });
        }
        for (m, rank) in &r.ranks {
            *sums.entry(m.clone()).or_insert(0) += u64::from(*rank);
        }
    }
    let n = records.len() as f64;
    Ok(sums.into_iter().map(|(m, s)| (m, s as f64 / n)).collect())
}

/// Mean ranks split by criterion.
pub fn mean_ranks_by_criterion(
    records: &[RankingRecord],
) -> Result<BTreeMap<Criterion, BTreeMap<String, f64>>, EvalError> {
    let mut out = BTreeMap::new();
    for c in Criterion::ALL {
        let subset: Vec<RankingRecord> = records.iter().filter(|r| r.criterion == c).cloned().collect();
        if !subset.is_empty() {
            out.insert(c, mean_ranks(&subset)?);
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankingBlock {
    /// Heading line printed above the rows, if any.
    pub title: Option<String>,
    /// (row label, method key)
    pub rows: Vec<(String, String)>,
}

/// Row grouping for the human-evaluation table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankingLayout {
    pub blocks: Vec<RankingBlock>,
}

impl RankingLayout {
    /// The twelve-method comparison: nearest neighbour per feature, SMT on
    /// visual words, SMT on text and sense labels, and the reference
    /// sentences.
    pub fn twelve_methods() -> Self {
        let block = |title: Option<&str>, rows: &[(&str, &str)]| RankingBlock {
            title: title.map(str::to_string),
            rows: rows.iter().map(|(l, k)| (l.to_string(), k.to_string())).collect(),
        };
        Self {
            blocks: vec![
                block(
                    Some("Nearest neighbor"),
                    &[("DT", "nn-dt"), ("LSDA", "nn-lsda"), ("PLACES", "nn-places"), ("HYBRID", "nn-hybrid")],
                ),
                block(None, &[("SMT Visual words", "smt-visual-words")]),
                block(
                    Some("SMT with our text-labels"),
                    &[("DT 30", "text-dt-30"), ("DT 100", "text-dt-100"), ("All 100", "text-all-100")],
                ),
                block(
                    Some("SMT with our sense-labels"),
                    &[("DT 30", "sense-dt-30"), ("DT 100", "sense-dt-100"), ("All 100", "sense-all-100")],
                ),
                block(None, &[("Movie script/DVS", "reference")]),
            ],
        }
    }

    pub fn methods(&self) -> impl Iterator<Item = &str> {
        self.blocks.iter().flat_map(|b| b.rows.iter().map(|(_, k)| k.as_str()))
    }
}

const LABEL_WIDTH: usize = 22;
const COLUMN_WIDTH: usize = 13;

/// Plain-text table of mean ranks with one column per criterion. Missing
/// values print as `-`.
pub fn render_ranking_table(layout: &RankingLayout, means: &BTreeMap<Criterion, BTreeMap<String, f64>>) -> String {
    let mut out = String::new();
    let rule = "-".repeat(LABEL_WIDTH + COLUMN_WIDTH * Criterion::ALL.len());
    let _ = write!(out, "{:<LABEL_WIDTH$}", "");
    for c in Criterion::ALL {
        let _ = write!(out, "{:>COLUMN_WIDTH$}", c.to_string());
    }
    out.push('\n');
    for block in &layout.blocks {
        out.push_str(&rule);
        out.push('\n');
        let indent = if let Some(t) = &block.title {
            out.push_str(t);
            out.push('\n');
            "  "
        } else {
            ""
        };
        for (label, key) in &block.rows {
            let _ = write!(out, "{:<LABEL_WIDTH$}", format!("{indent}{label}"));
            for c in Criterion::ALL {
                let cell = means
                    .get(&c)
                    .and_then(|m| m.get(key))
                    .map_or_else(|| "-".to_string(), |v| format!("{v:.1}"));
                let _ = write!(out, "{cell:>COLUMN_WIDTH$}");
            }
            out.push('\n');
        }
    }
    out.push_str(&rule);
    out.push('\n');
    out
}

pub const TASK_FORMAT: &str = "moviedesc-ranking";
pub const TASK_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TaskHeader {
    pub format: String,
    pub version: u32,
    pub seed: u64,
    /// Sorted method names; with the seed this fixes every blinding.
    pub methods: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Candidate {
    pub key: String,
    pub sentence: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankingTask {
    pub snippet_id: String,
    pub candidates: Vec<Candidate>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TaskFile {
    pub header: TaskHeader,
    pub tasks: Vec<RankingTask>,
}

fn blind_key(i: usize) -> String {
    let mut s = String::new();
    let mut i = i;
    loop {
        s.insert(0, (b'A' + (i % 26) as u8) as char);
        if i < 26 {
            break;
        }
        i = i / 26 - 1;
    }
    s
}

/// Method order per snippet, in task order.
fn blindings(methods: &[String], n_tasks: usize, seed: u64) -> Vec<Vec<usize>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n_tasks)
        .map(|_| {
            let mut order: Vec<usize> = (0..methods.len()).collect();
            order.shuffle(&mut rng);
            order
        })
        .collect()
}

/// One task per snippet with candidates in a seeded random order under
/// blind keys `A`, `B`, ...
pub fn export_ranking_tasks(
    snippets: &[String],
    methods: &BTreeMap<String, BTreeMap<String, String>>,
    seed: u64,
) -> Result<TaskFile, EvalError> {
    let names: Vec<String> = methods.keys().cloned().collect();
    for s in snippets {
        for (m, sentences) in methods {
            if !sentences.contains_key(s) {
                return Err(EvalError::MissingCandidate {
                    method: m.clone(),
                    snippet: s.clone(),
                });
            }
        }
    }
    let tasks = snippets
        .iter()
        .zip(blindings(&names, snippets.len(), seed))
        .map(|(s, order)| RankingTask {
            snippet_id: s.clone(),
            candidates: order
                .iter()
                .enumerate()
                .map(|(pos, &m)| Candidate {
                    key: blind_key(pos),
                    sentence: methods[&names[m]][s].clone(),
                })
                .collect(),
        })
        .collect();
    Ok(TaskFile {
        header: TaskHeader {
            format: TASK_FORMAT.into(),
            version: TASK_VERSION,
            seed,
            methods: names,
        },
        tasks,
    })
}

impl TaskFile {
    /// JSON lines: header record first, then one task per line.
    pub fn to_jsonl(&self) -> String {
        let mut out = serde_json::to_string(&self.header).expect("header serializes");
        out.push('\n');
        for t in &self.tasks {
            out.push_str(&serde_json::to_string(t).expect("task serializes"));
            out.push('\n');
        }
        out
    }

    pub fn from_jsonl(text: &str, context: &str) -> Result<Self, EvalError> {
        let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
        let err = |i: usize, message: String| EvalError::Format {
            context: format!("{context}:{}", i + 1),
            message,
        };
        let (i, first) = lines.next().ok_or_else(|| err(0, "empty task file".into()))?;
        let header: TaskHeader = serde_json::from_str(first).map_err(|e| err(i, e.to_string()))?;
        if header.format != TASK_FORMAT || header.version != TASK_VERSION {
            return Err(err(i, format!("unsupported task file {} v{}", header.format, header.version)));
        }
        let tasks = lines
            .map(|(i, l)| serde_json::from_str(l).map_err(|e| err(i, e.to_string())))
            .collect::<Result<Vec<RankingTask>, _>>()?;
        Ok(Self { header, tasks })
    }

    /// Blind key to method name for every task, rebuilt from the seed.
    pub fn unblind(&self) -> BTreeMap<String, BTreeMap<String, String>> {
        let orders = blindings(&self.header.methods, self.tasks.len(), self.header.seed);
        self.tasks
            .iter()
            .zip(orders)
            .map(|(t, order)| {
                let keys = order
                    .iter()
                    .enumerate()
                    .map(|(pos, &m)| (blind_key(pos), self.header.methods[m].clone()))
                    .collect();
                (t.snippet_id.clone(), keys)
            })
            .collect()
    }
}

/// A judge's ranks by blind key.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BlindJudgment {
    pub snippet_id: String,
    #[serde(default = "default_criterion")]
    pub criterion: Criterion,
    pub ranks: BTreeMap<String, u32>,
}

/// Map blind judgments back to method names.
pub fn import_rankings(tasks: &TaskFile, judgments: &[BlindJudgment]) -> Result<Vec<RankingRecord>, EvalError> {
    let keys = tasks.unblind();
    judgments
        .iter()
        .map(|j| {
            let table = keys.get(&j.snippet_id).ok_or_else(|| EvalError::UnknownTask(j.snippet_id.clone()))?;
            let mut ranks = BTreeMap::new();
            for (k, r) in &j.ranks {
                let method = table.get(k).ok_or_else(|| EvalError::InvalidRanks {
                    snippet: j.snippet_id.clone(),
                    message: format!("unknown candidate key {k}"),
                })?;
                ranks.insert(method.clone(), *r);
            }
            if ranks.len() != table.len() {
                return Err(EvalError::InconsistentMethods {
                    snippet: j.snippet_id.clone(),
                });
            }
            let record = RankingRecord {
                snippet_id: j.snippet_id.clone(),
                criterion: j.criterion,
                ranks,
            };
            record.validate()?;
            Ok(record)
        })
        .collect()
}

pub fn parse_judgments(text: &str, context: &str) -> Result<Vec<BlindJudgment>, EvalError> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| {
            serde_json::from_str(l).map_err(|e| EvalError::Format {
                context: format!("{context}:{}", i + 1),
                message: e.to_string(),
            })
        })
        .collect()
}
