use serde::Serialize;

use super::{read_sentence_input, SentenceLine, TupleLine};
use crate::error::{CliError, CliResult};
use crate::io::{self, emit, jsonl, progress, read_jsonl};
use crate::{BuildVocabArgs, ModeArg, ParseSrArgs, SourceArg, WsdArg};
use moviedesc::corpus::Source;
use moviedesc::semantic::{
    extract_label_vocab, ContextDisambiguator, LabelMode, Lexicon, MostFrequentSense, SemanticParser, SrTuple,
};

impl From<ModeArg> for LabelMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Text => LabelMode::Text,
            ModeArg::Sense => LabelMode::Sense,
        }
    }
}

pub fn parse_sr(a: ParseSrArgs) -> CliResult<()> {
    let sentences: Vec<SentenceLine> = match (&a.input, &a.project) {
        (Some(p), _) => read_sentence_input(p)?,
        (None, project) => {
            let path = io::project_path(project.as_deref())?;
            let source = a.source.map(|s| match s {
                SourceArg::Dvs => Source::Dvs,
                SourceArg::Script => Source::Script,
            });
            io::load(&path)?
                .snippets()
                .iter()
                .filter(|s| s.kept() && source.is_none_or(|src| s.source == src))
                .map(|s| SentenceLine {
                    id: s.id.clone(),
                    sentence: s.sentence.clone(),
                })
                .collect()
        }
    };
    let parser = match a.wsd {
        WsdArg::Mfs => SemanticParser::with_disambiguator(Lexicon::bundled(), Box::new(MostFrequentSense)),
        WsdArg::Context => SemanticParser::with_disambiguator(Lexicon::bundled(), Box::new(ContextDisambiguator)),
    };
    let mode = LabelMode::from(a.mode);
    let mut records = Vec::new();
    for s in &sentences {
        records.extend(parser.records(&s.id, &s.sentence, mode));
    }
    let flagged = records.iter().filter(|r| !r.flags.is_empty()).count();
    progress(format!(
        "{} sentences, {} tuples, {} flagged",
        sentences.len(),
        records.len(),
        flagged
    ));
    emit(a.out.out.as_deref(), &jsonl(records))
}

#[derive(Serialize)]
struct VocabLine<'a> {
    label: &'a str,
    count: usize,
}

pub fn read_tuples(path: &std::path::Path) -> CliResult<Vec<TupleLine>> {
    read_jsonl(path)
}

pub fn build_vocab(a: BuildVocabArgs) -> CliResult<()> {
    let tuples: Vec<SrTuple> = read_tuples(&a.tuples)?.into_iter().map(|t| t.tuple).collect();
    if tuples.is_empty() {
        return Err(CliError::data(a.tuples.display(), "no tuples"));
    }
    let vocab = extract_label_vocab(&tuples, a.slot, a.min_count);
    progress(format!("{} {} labels with count >= {}", vocab.len(), a.slot, a.min_count));
    emit(
        a.out.out.as_deref(),
        &jsonl(vocab.counts.iter().map(|(label, &count)| VocabLine { label, count })),
    )
}
