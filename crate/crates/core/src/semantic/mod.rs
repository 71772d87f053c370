//! Sentences to ⟨SUBJECT, VERB, OBJECT, LOCATION⟩ tuples.
//!
//! Rule-based clause splitting and chunking over a pluggable tagger, sense
//! selection through a pluggable disambiguator, and verb-frame matching
//! with selectional restrictions from a plain-text [`Lexicon`].

mod chunk;
mod clause;
mod lexicon;
mod matching;
mod parser;
mod sr;
mod tagger;
mod vocab;
mod wsd;

pub use chunk::{chunk_clause, head_word, Chunk, ChunkKind};
pub use clause::{split_clauses, Clause};
pub use lexicon::{
    ContextRule, Lexicon, LexiconError, PatternSlot, Restriction, RoleRestriction, Sense,
    SenseEntry, SensePos, VerbFrame,
};
pub use matching::{
    match_verb_frames, np_text, FrameMatches, MatchFlag, RoleAssignment, RoleBinding, ACTION_ROLE,
};
pub use parser::{ClauseParse, SemanticParser, SrRecord};
pub use sr::{role_group, sense_label, to_sr, to_sr_with_dropped, LabelMode, SrSlot, SrTuple};
pub use tagger::{tokenize, LexiconTagger, PosTagger, Tag};
pub use vocab::{count_labels, extract_label_vocab, LabelVocab, MIN_COUNT_100, MIN_COUNT_30};
pub use wsd::{disambiguate, ContextDisambiguator, Disambiguation, Disambiguator, MostFrequentSense};
