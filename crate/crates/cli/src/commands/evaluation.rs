use std::collections::BTreeMap;

use super::{read_sentences, sentence_map};
use crate::error::{CliError, CliResult};
use crate::io::{self, emit, progress, read_text};
use crate::{BleuArgs, RankExportArgs, RankImportArgs, SmoothingArg};
use moviedesc::evaluation::{
    bleu4, export_ranking_tasks, import_rankings, mean_ranks_by_criterion, parse_eval_pairs, parse_judgments,
    render_ranking_table, EvalPair, RankingLayout, Smoothing, TaskFile,
};

fn eval_pairs(a: &BleuArgs) -> CliResult<Vec<EvalPair>> {
    if let Some(p) = &a.pairs {
        return parse_eval_pairs(&read_text(p)?, &p.display().to_string()).map_err(|e| CliError::Data(e.to_string()));
    }
    let Some(cand_path) = &a.candidates else {
        return Err(CliError::Usage("give --pairs, or --candidates with --references or --project".into()));
    };
    let candidates = read_sentences(cand_path)?;
    let mut references: BTreeMap<String, Vec<String>> = BTreeMap::new();
    let ref_source = if let Some(r) = &a.references {
        for line in read_sentences(r)? {
            references.entry(line.id).or_default().push(line.sentence);
        }
        r.display().to_string()
    } else {
        let path = io::project_path(a.project.as_deref())?;
        for s in io::load(&path)?.snippets() {
            references.entry(s.id.clone()).or_default().push(s.sentence.clone());
        }
        path.display().to_string()
    };
    // one candidate per snippet
    let candidates = sentence_map(cand_path, candidates)?;
    candidates
        .iter()
        .map(|(id, c)| {
            let refs = references
                .get(id)
                .ok_or_else(|| CliError::data(&ref_source, format!("no reference for snippet {id}")))?;
            let refs: Vec<&str> = refs.iter().map(String::as_str).collect();
            Ok(EvalPair::from_sentences(id, c, &refs))
        })
        .collect()
}

pub fn bleu(a: BleuArgs) -> CliResult<()> {
    let pairs = eval_pairs(&a)?;
    let smoothing = match a.smoothing {
        SmoothingArg::None => Smoothing::None,
        SmoothingArg::AddOne => Smoothing::AddOne,
    };
    let score = bleu4(&pairs, smoothing).map_err(|e| CliError::Data(e.to_string()))?;
    progress(format!("{} evaluation pairs", pairs.len()));
    emit(a.out.out.as_deref(), &format!("BLEU@4 {score:.2}\n"))
}

pub fn rank_export(a: RankExportArgs) -> CliResult<()> {
    let mut methods: BTreeMap<String, BTreeMap<String, String>> = BTreeMap::new();
    for (name, path) in &a.methods {
        if methods.contains_key(name) {
            return Err(CliError::Usage(format!("method {name:?} given twice")));
        }
        methods.insert(name.clone(), sentence_map(path, read_sentences(path)?)?);
    }
    let snippets: Vec<String> = match &a.snippets {
        Some(p) => read_text(p)?
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty())
            .map(str::to_string)
            .collect(),
        None => methods[&a.methods[0].0].keys().cloned().collect(),
    };
    let tasks = export_ranking_tasks(&snippets, &methods, a.seed).map_err(|e| CliError::Data(e.to_string()))?;
    progress(format!("{} tasks over {} methods", tasks.tasks.len(), methods.len()));
    emit(a.out.out.as_deref(), &tasks.to_jsonl())
}

pub fn rank_import(a: RankImportArgs) -> CliResult<()> {
    let tasks = TaskFile::from_jsonl(&read_text(&a.tasks)?, &a.tasks.display().to_string())
        .map_err(|e| CliError::Data(e.to_string()))?;
    let judgments = parse_judgments(&read_text(&a.judgments)?, &a.judgments.display().to_string())
        .map_err(|e| CliError::Data(e.to_string()))?;
    let records = import_rankings(&tasks, &judgments).map_err(|e| CliError::data(a.judgments.display(), e))?;
    let means = mean_ranks_by_criterion(&records).map_err(|e| CliError::data(a.judgments.display(), e))?;
    progress(format!("{} judgments imported", records.len()));
    let text = if a.json {
        serde_json::to_string(&means).expect("means serialize") + "\n"
    } else {
        render_ranking_table(&RankingLayout::twelve_methods(), &means)
    };
    emit(a.out.out.as_deref(), &text)
}
