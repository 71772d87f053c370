use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::semantic::read_tuples;
use super::{read_sentences, sentence_map, TupleLine};
use crate::error::{CliError, CliResult};
use crate::io::{emit, jsonl, progress, read_bytes, read_text, write_atomic};
use crate::{CrfFitArgs, CrfMapArgs, ExportSmtArgs, GenArgs, NnArgs, VwordsArgs};
use moviedesc::baselines::{
    crf_map as map, export_smt_parallel, fit_pairwise, kmeans_fit, l1_normalize, nearest_index, parse_unaries,
    read_features_bytes, sum_unaries, visual_word_tuple, CrfNode, CrfVocabs, CrfWeights, FeatureRecord,
    FeatureVector, KMeansParams, PairwisePotentials, TemplateBank, UnaryScores, VisualWordTuple, DEFAULT_MAX_ITER,
};
use moviedesc::semantic::{extract_label_vocab, LabelMode, SrSlot, SrTuple};

fn features(path: &Path) -> CliResult<Vec<FeatureRecord<f64>>> {
    let bytes = read_bytes(path)?;
    read_features_bytes(&bytes, &path.display().to_string()).map_err(|e| CliError::Data(e.to_string()))
}

fn normalized(path: &Path, r: &FeatureRecord<f64>) -> CliResult<FeatureVector<f64>> {
    l1_normalize(&r.vector).map_err(|e| CliError::data(format!("{}: record {}", path.display(), r.snippet_id), e))
}

#[derive(Serialize)]
struct NnLine<'a> {
    snippet_id: &'a str,
    neighbor_id: &'a str,
    distance: f64,
    sentence: &'a str,
}

pub fn nn(a: NnArgs) -> CliResult<()> {
    let train = features(&a.train_features)?;
    let sentences = sentence_map(&a.train_sentences, read_sentences(&a.train_sentences)?)?;
    let query = features(&a.query)?;
    let mut bank: Vec<(FeatureVector<f64>, (&str, &str))> = Vec::with_capacity(train.len());
    for r in &train {
        let sentence = sentences.get(&r.snippet_id).ok_or_else(|| {
            CliError::data(a.train_sentences.display(), format!("no sentence for training record {}", r.snippet_id))
        })?;
        bank.push((normalized(&a.train_features, r)?, (r.snippet_id.as_str(), sentence.as_str())));
    }
    let mut lines = Vec::with_capacity(query.len());
    for q in &query {
        let v = normalized(&a.query, q)?;
        let (i, distance) = nearest_index(&v, &bank)
            .map_err(|e| CliError::data(format!("{}: record {}", a.query.display(), q.snippet_id), e))?;
        let (neighbor_id, sentence) = bank[i].1;
        lines.push(NnLine {
            snippet_id: &q.snippet_id,
            neighbor_id,
            distance,
            sentence,
        });
    }
    progress(format!("{} queries against {} training items", query.len(), bank.len()));
    emit(a.out.out.as_deref(), &jsonl(lines))
}

#[derive(Deserialize)]
struct ScoreRow {
    snippet_id: String,
    class: String,
    score: f64,
}

/// `snippet_id,class,score` rows grouped per snippet.
fn class_scores(path: &Path) -> CliResult<BTreeMap<String, BTreeMap<String, f64>>> {
    let text = read_text(path)?;
    let mut reader = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(text.as_bytes());
    let mut out: BTreeMap<String, BTreeMap<String, f64>> = BTreeMap::new();
    for (i, row) in reader.deserialize::<ScoreRow>().enumerate() {
        let row = row.map_err(|e| CliError::data(format!("{}:{}", path.display(), i + 2), e))?;
        if !row.score.is_finite() {
            return Err(CliError::data(format!("{}:{}", path.display(), i + 2), "non-finite score"));
        }
        out.entry(row.snippet_id).or_default().insert(row.class, row.score);
    }
    Ok(out)
}

#[derive(Serialize)]
struct VwordLine<'a> {
    snippet_id: &'a str,
    #[serde(flatten)]
    tuple: VisualWordTuple,
}

pub fn vwords(a: VwordsArgs) -> CliResult<()> {
    if a.k == 0 {
        return Err(CliError::Usage("--k must be at least 1".into()));
    }
    let train = features(&a.train_features)?;
    let dt = features(&a.dt)?;
    let lsda = class_scores(&a.lsda)?;
    let places = class_scores(&a.places)?;
    let vectors: Vec<&[f64]> = train.iter().map(|r| r.vector.values()).collect();
    let codebook = kmeans_fit(
        &vectors,
        KMeansParams {
            k: a.k,
            seed: a.seed,
            max_iter: DEFAULT_MAX_ITER,
        },
    )
    .map_err(|e| CliError::data(a.train_features.display(), e))?;
    progress(format!(
        "codebook k={} after {} iterations{}",
        codebook.k(),
        codebook.objective_history.len(),
        if codebook.converged { "" } else { " (not converged)" }
    ));
    let empty = BTreeMap::new();
    let mut lines = Vec::with_capacity(dt.len());
    for r in &dt {
        let id = r.snippet_id.as_str();
        let tuple = visual_word_tuple(
            lsda.get(id).unwrap_or(&empty),
            r.vector.values(),
            places.get(id).unwrap_or(&empty),
            &codebook,
        )
        .map_err(|e| CliError::data(format!("snippet {id}"), e))?;
        lines.push(VwordLine { snippet_id: id, tuple });
    }
    if let Some(p) = &a.codebook_out {
        write_atomic(p, (serde_json::to_string(&codebook).expect("codebook serializes") + "\n").as_bytes())?;
    }
    emit(a.out.out.as_deref(), &jsonl(lines))
}

pub fn crf_fit(a: CrfFitArgs) -> CliResult<()> {
    if !(a.alpha > 0.0 && a.alpha.is_finite()) {
        return Err(CliError::Usage(format!("--alpha must be positive, got {}", a.alpha)));
    }
    let tuples: Vec<SrTuple> = read_tuples(&a.tuples)?.into_iter().map(|t| t.tuple).collect();
    let vocab = |slot| extract_label_vocab(&tuples, slot, a.min_count);
    let vocabs = CrfVocabs::from_label_vocabs(
        &vocab(SrSlot::Verb),
        &vocab(SrSlot::Object),
        &vocab(SrSlot::Location),
    );
    for node in CrfNode::ALL {
        if vocabs.get(node).is_empty() {
            return Err(CliError::data(
                a.tuples.display(),
                format!("no {node} label reaches min count {}", a.min_count),
            ));
        }
    }
    let (model, report) = fit_pairwise(&tuples, vocabs, a.alpha).map_err(|e| CliError::data(a.tuples.display(), e))?;
    progress(format!(
        "vocabularies {}/{}/{}; skipped tuples vo={} vl={} ol={}",
        model.vocabs.verb.len(),
        model.vocabs.object.len(),
        model.vocabs.location.len(),
        report.skipped_verb_object,
        report.skipped_verb_location,
        report.skipped_object_location
    ));
    emit(a.out.out.as_deref(), &(serde_json::to_string(&model).expect("model serializes") + "\n"))
}

#[derive(Serialize)]
struct MapLine {
    snippet_id: String,
    #[serde(flatten)]
    tuple: SrTuple,
    score: f64,
}

pub fn crf_map(a: CrfMapArgs) -> CliResult<()> {
    if a.top_k == Some(0) {
        return Err(CliError::Usage("--top-k must be at least 1".into()));
    }
    let model: PairwisePotentials = serde_json::from_str(&read_text(&a.model)?)
        .map_err(|e| CliError::data(a.model.display(), e))?;
    let mut unaries: BTreeMap<String, UnaryScores<f64>> = BTreeMap::new();
    for p in &a.unaries {
        let parsed = parse_unaries(&read_text(p)?, &p.display().to_string()).map_err(|e| CliError::Data(e.to_string()))?;
        sum_unaries(&mut unaries, parsed);
    }
    let weights = CrfWeights {
        unary: a.unary_weight,
        pairwise: a.pairwise_weight,
    };
    let mode = LabelMode::from(a.mode);
    let mut dropped = 0;
    let mut lines = Vec::with_capacity(unaries.len());
    for (id, mut u) in unaries {
        if a.drop_unknown {
            for node in CrfNode::ALL {
                let vocab = model.vocabs.get(node);
                let scores = u.get_mut(node);
                let before = scores.len();
                scores.retain(|label, _| vocab.contains(label));
                dropped += before - scores.len();
            }
        }
        let sol = map(&u, &model, weights, a.top_k).map_err(|e| CliError::data(format!("snippet {id}"), e))?;
        lines.push(MapLine {
            tuple: sol.to_sr(mode),
            score: sol.score,
            snippet_id: id,
        });
    }
    if dropped > 0 {
        progress(format!("dropped {dropped} unary labels outside the model vocabulary"));
    }
    progress(format!("{} snippets decoded", lines.len()));
    emit(a.out.out.as_deref(), &jsonl(lines))
}

/// (tuple, sentence) for training sentences that yield exactly one tuple.
fn training_pairs(tuples_path: &Path, sentences_path: &Path) -> CliResult<Vec<(SrTuple, String)>> {
    let sentences = sentence_map(sentences_path, read_sentences(sentences_path)?)?;
    let mut by_id: BTreeMap<String, Vec<TupleLine>> = BTreeMap::new();
    for t in read_tuples(tuples_path)? {
        by_id.entry(t.id.clone()).or_default().push(t);
    }
    let mut pairs = Vec::new();
    for (id, mut ts) in by_id {
        if ts.len() != 1 {
            continue;
        }
        let sentence = sentences
            .get(&id)
            .ok_or_else(|| CliError::data(sentences_path.display(), format!("no sentence for tuple id {id}")))?;
        pairs.push((ts.remove(0).tuple, sentence.clone()));
    }
    Ok(pairs)
}

#[derive(Serialize)]
struct GenLine<'a> {
    snippet_id: &'a str,
    sentence: String,
}

pub fn gen(a: GenArgs) -> CliResult<()> {
    let pairs = training_pairs(&a.bank_tuples, &a.bank_sentences)?;
    let bank = TemplateBank::fit(&pairs).map_err(|e| CliError::data(a.bank_tuples.display(), e))?;
    let queries = read_tuples(&a.tuples)?;
    progress(format!("template bank from {} sentences, {} patterns", pairs.len(), bank.len()));
    let lines: Vec<GenLine<'_>> = queries
        .iter()
        .map(|q| GenLine {
            snippet_id: &q.id,
            sentence: bank.generate(&q.tuple),
        })
        .collect();
    emit(a.out.out.as_deref(), &jsonl(lines))
}

pub fn export_smt(a: ExportSmtArgs) -> CliResult<()> {
    let pairs = training_pairs(&a.tuples, &a.sentences)?;
    export_smt_parallel(&pairs, &a.out_src, &a.out_tgt).map_err(|e| CliError::data(a.tuples.display(), e))?;
    progress(format!("{} parallel lines written", pairs.len()));
    Ok(())
}
