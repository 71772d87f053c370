use serde::{Deserialize, Serialize};

use super::chunk::{chunk_clause, head_word, Chunk, ChunkKind};
use super::clause::{split_clauses, Clause};
use super::lexicon::{Lexicon, SensePos};
use super::matching::{match_verb_frames, FrameMatches, MatchFlag};
use super::sr::{sense_label, to_sr_with_dropped, LabelMode, SrTuple};
use super::tagger::LexiconTagger;
use super::wsd::{disambiguate, Disambiguation, Disambiguator, MostFrequentSense};

/// Everything derived from one clause.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClauseParse {
    pub clause: Clause,
    pub chunks: Vec<Chunk>,
    pub verb: Option<Disambiguation>,
    pub matches: FrameMatches,
    pub out_of_lexicon: Vec<String>,
}

impl ClauseParse {
    /// Tuple from the first surviving frame assignment, or a verb-only
    /// tuple when no frame survives. `None` without a verb.
    pub fn tuple(&self, mode: LabelMode, lexicon: &Lexicon) -> Option<SrTuple> {
        if let Some(a) = self.matches.assignments.first() {
            return Some(to_sr_with_dropped(a, mode).0);
        }
        let verb = self.verb.as_ref()?;
        let label = match mode {
            LabelMode::Text => verb.sense.lemma.clone(),
            LabelMode::Sense => sense_label(&lexicon.canonical(&verb.sense)),
        };
        Some(SrTuple::verb_only(label, mode))
    }

    pub fn frame_id(&self) -> Option<&str> {
        self.matches.assignments.first().map(|a| a.frame_id.as_str())
    }

    pub fn flags(&self) -> Vec<String> {
        let mut flags = Vec::new();
        if self.verb.is_none() {
            flags.push("no-verb".to_string());
        }
        match self.matches.flag {
            Some(MatchFlag::NoFrame) => flags.push("no-frame".into()),
            Some(MatchFlag::NoSyntacticMatch) => flags.push("no-syntactic-match".into()),
            Some(MatchFlag::NoRestrictionMatch) => flags.push("no-restriction-match".into()),
            None => {}
        }
        if self.matches.assignments.len() > 1 {
            flags.push(format!("ambiguous-frames:{}", self.matches.assignments.len()));
        }
        if let Some(a) = self.matches.assignments.first() {
            for role in to_sr_with_dropped(a, LabelMode::Text).1 {
                flags.push(format!("dropped-role:{role}"));
            }
        }
        for w in &self.out_of_lexicon {
            flags.push(format!("out-of-lexicon:{w}"));
        }
        flags
    }
}

/// One line of SR output with provenance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SrRecord {
    pub sentence_id: String,
    pub clause_index: usize,
    pub frame_id: Option<String>,
    #[serde(flatten)]
    pub tuple: SrTuple,
    pub flags: Vec<String>,
}

/// Sentence to SR tuples: split, chunk, disambiguate, match frames.
pub struct SemanticParser {
    lexicon: Lexicon,
    wsd: Box<dyn Disambiguator + Send + Sync>,
}

impl SemanticParser {
    /// Most-frequent-sense disambiguation.
    pub fn new(lexicon: Lexicon) -> Self {
        Self::with_disambiguator(lexicon, Box::new(MostFrequentSense))
    }

    pub fn with_disambiguator(lexicon: Lexicon, wsd: Box<dyn Disambiguator + Send + Sync>) -> Self {
        Self { lexicon, wsd }
    }

    pub fn lexicon(&self) -> &Lexicon {
        &self.lexicon
    }

    pub fn parse_clause(&self, clause: Clause) -> ClauseParse {
        let tagger = LexiconTagger::new(&self.lexicon);
        let chunks = chunk_clause(&clause, &tagger);
        let mut out_of_lexicon = Vec::new();
        for c in chunks.iter().filter(|c| c.kind == ChunkKind::Np) {
            let d = disambiguate(head_word(c), SensePos::Noun, &clause, &self.lexicon, &*self.wsd);
            if d.out_of_lexicon {
                out_of_lexicon.push(d.sense.lemma);
            }
        }
        let vp = chunks.iter().position(|c| c.kind == ChunkKind::Vp);
        let Some(vp) = vp else {
            return ClauseParse {
                clause,
                chunks,
                verb: None,
                matches: FrameMatches::default(),
                out_of_lexicon,
            };
        };
        let verb = disambiguate(head_word(&chunks[vp]), SensePos::Verb, &clause, &self.lexicon, &*self.wsd);
        if verb.out_of_lexicon {
            out_of_lexicon.push(verb.sense.lemma.clone());
        }
        let matches = match_verb_frames(&verb.sense, &chunks, vp, &self.lexicon, &clause, &*self.wsd);
        ClauseParse {
            clause,
            chunks,
            verb: Some(verb),
            matches,
            out_of_lexicon,
        }
    }

    pub fn parse(&self, sentence: &str) -> Vec<ClauseParse> {
        let tagger = LexiconTagger::new(&self.lexicon);
        split_clauses(sentence, &tagger)
            .into_iter()
            .map(|c| self.parse_clause(c))
            .collect()
    }

    /// One record per clause that has a verb.
    pub fn records(&self, sentence_id: &str, sentence: &str, mode: LabelMode) -> Vec<SrRecord> {
        self.parse(sentence)
            .into_iter()
            .enumerate()
            .filter_map(|(i, p)| {
                let tuple = p.tuple(mode, &self.lexicon)?;
                Some(SrRecord {
                    sentence_id: sentence_id.to_string(),
                    clause_index: i,
                    frame_id: p.frame_id().map(str::to_string),
                    tuple,
                    flags: p.flags(),
                })
            })
            .collect()
    }
}

impl Default for SemanticParser {
    fn default() -> Self {
        Self::new(Lexicon::bundled())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::semantic::ContextDisambiguator;

    #[test]
    fn table_sentence_both_modes() {
        for parser in [
            SemanticParser::default(),
            SemanticParser::with_disambiguator(Lexicon::bundled(), Box::new(ContextDisambiguator)),
        ] {
            let p = parser.parse("He began to shoot a video in the moving bus.");
            assert_eq!(p.len(), 1);
            let lex = parser.lexicon();
            assert_eq!(
                p[0].tuple(LabelMode::Sense, lex).unwrap().to_string(),
                "<man#1, shoot#2, video#1, bus#1>"
            );
            assert_eq!(
                p[0].tuple(LabelMode::Text, lex).unwrap().to_string(),
                "<man, shoot, video, moving bus>"
            );
            assert!(p[0].flags().is_empty(), "{:?}", p[0].flags());
        }
    }

    #[test]
    fn synonyms_share_sense_label_only() {
        let parser = SemanticParser::default();
        let lex = parser.lexicon();
        let close = &parser.parse("She closes the door.")[0];
        let shut = &parser.parse("She shuts the door.")[0];
        assert_eq!(
            close.tuple(LabelMode::Sense, lex).unwrap().verb,
            shut.tuple(LabelMode::Sense, lex).unwrap().verb
        );
        assert_ne!(
            close.tuple(LabelMode::Text, lex).unwrap().verb,
            shut.tuple(LabelMode::Text, lex).unwrap().verb
        );
    }

    #[test]
    fn unmatched_clause_keeps_verb() {
        let parser = SemanticParser::default();
        let recs = parser.records("s1", "The door shoots the man.", LabelMode::Sense);
        assert_eq!(recs.len(), 1);
        assert_eq!(recs[0].tuple.to_string(), "<-, shoot#1, -, ->");
        assert_eq!(recs[0].frame_id, None);
        assert_eq!(recs[0].flags, ["no-restriction-match"]);
        assert!(parser.records("s2", "A dark room.", LabelMode::Text).is_empty());
    }

    #[test]
    fn record_json_shape() {
        let parser = SemanticParser::default();
        let recs = parser.records("s9", "He shot and modified the video", LabelMode::Text);
        assert_eq!(recs.len(), 2);
        let json = serde_json::to_string(&recs[1]).unwrap();
        assert_eq!(
            json,
            r#"{"sentence_id":"s9","clause_index":1,"frame_id":"modify#1/1","subject":"man","verb":"modify","object":"video","location":null,"mode":"text","flags":[]}"#
        );
    }
}
