use serde::{Deserialize, Serialize};

use super::chunk::{head_word, Chunk, ChunkKind};
use super::clause::Clause;
use super::lexicon::{Lexicon, PatternSlot, Restriction, Sense, SensePos, VerbFrame};
use super::tagger::Tag;
use super::wsd::{disambiguate, Disambiguator};

pub const ACTION_ROLE: &str = "Action";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RoleBinding {
    pub role: String,
    pub restriction: Restriction,
    pub chunk: Chunk,
    pub sense: Sense,
    /// Representative sense shared by synonyms.
    pub concept: Sense,
    /// Chunk text without determiners, pronouns replaced by their referent;
    /// the verb lemma for the action.
    pub text: String,
    pub preposition: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RoleAssignment {
    pub frame_id: String,
    /// In pattern order, the verb bound as `Action`.
    pub bindings: Vec<RoleBinding>,
}

impl RoleAssignment {
    pub fn get(&self, role: &str) -> Option<&RoleBinding> {
        self.bindings.iter().find(|b| b.role == role)
    }

    /// Re-check every argument against its selectional restriction.
    pub fn satisfies_restrictions(&self, lexicon: &Lexicon) -> bool {
        self.bindings
            .iter()
            .filter(|b| b.role != ACTION_ROLE)
            .all(|b| lexicon.satisfies(&b.sense.lemma, b.restriction))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MatchFlag {
    NoFrame,
    NoSyntacticMatch,
    NoRestrictionMatch,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct FrameMatches {
    pub assignments: Vec<RoleAssignment>,
    pub flag: Option<MatchFlag>,
}

/// Chunk sequence folded into pattern slots.
enum Slot<'a> {
    Np(&'a Chunk),
    V(&'a Chunk),
    Pp(&'a Chunk, &'a Chunk),
    Stray,
}

fn fold(chunks: &[Chunk], verb_chunk: usize) -> Vec<Slot<'_>> {
    let mut slots = Vec::new();
    let mut i = 0;
    while i < chunks.len() {
        let c = &chunks[i];
        match c.kind {
            ChunkKind::Np => slots.push(Slot::Np(c)),
            ChunkKind::Vp if i == verb_chunk => slots.push(Slot::V(c)),
            ChunkKind::Vp => slots.push(Slot::Stray),
            ChunkKind::Pp => match chunks.get(i + 1) {
                Some(np) if np.kind == ChunkKind::Np => {
                    slots.push(Slot::Pp(c, np));
                    i += 1;
                }
                _ => slots.push(Slot::Stray),
            },
        }
        i += 1;
    }
    slots
}

fn slot_fits(pattern: PatternSlot, slot: &Slot<'_>) -> bool {
    matches!(
        (pattern, slot),
        (PatternSlot::Np, Slot::Np(_))
            | (PatternSlot::V, Slot::V(_))
            | (PatternSlot::Pp | PatternSlot::NpLocation, Slot::Pp(..))
    )
}

/// Determiner-free text of a noun phrase; a lone pronoun becomes its
/// referent noun.
pub fn np_text(chunk: &Chunk, lexicon: &Lexicon) -> String {
    if chunk.tokens.len() == 1 {
        if let Some(r) = lexicon.pronoun_referent(&chunk.tokens[0]) {
            return r.to_string();
        }
    }
    let words: Vec<&str> = chunk
        .tokens
        .iter()
        .zip(&chunk.tags)
        .filter(|(_, t)| **t != Tag::Det)
        .map(|(w, _)| w.as_str())
        .collect();
    if words.is_empty() {
        chunk.text()
    } else {
        words.join(" ")
    }
}

/// Match the clause's verb against every frame of its lemma, in lexicon
/// order. A frame survives when the folded chunk sequence fits its
/// pattern exactly and every argument head satisfies its restriction.
///
/// `verb_chunk` indexes the VP carrying `verb`. Argument heads are
/// disambiguated with `wsd`.
pub fn match_verb_frames(
    verb: &Sense,
    chunks: &[Chunk],
    verb_chunk: usize,
    lexicon: &Lexicon,
    context: &Clause,
    wsd: &dyn Disambiguator,
) -> FrameMatches {
    let frames: Vec<&VerbFrame> = lexicon.frames_for(&verb.lemma).collect();
    if frames.is_empty() {
        return FrameMatches {
            assignments: Vec::new(),
            flag: Some(MatchFlag::NoFrame),
        };
    }
    let slots = fold(chunks, verb_chunk);
    let syntactic: Vec<&VerbFrame> = frames
        .into_iter()
        .filter(|f| {
            f.pattern.len() == slots.len()
                && f.pattern.iter().zip(&slots).all(|(p, s)| slot_fits(*p, s))
        })
        .collect();
    if syntactic.is_empty() {
        return FrameMatches {
            assignments: Vec::new(),
            flag: Some(MatchFlag::NoSyntacticMatch),
        };
    }

    let mut assignments = Vec::new();
    'frames: for frame in syntactic {
        let mut restrictions = frame.restrictions.iter();
        let mut bindings = Vec::with_capacity(slots.len());
        for slot in &slots {
            let (np, prep) = match slot {
                Slot::V(vp) => {
                    bindings.push(RoleBinding {
                        role: ACTION_ROLE.to_string(),
                        restriction: Restriction::Any,
                        chunk: (*vp).clone(),
                        sense: frame.verb_sense.clone(),
                        concept: lexicon.canonical(&frame.verb_sense),
                        text: frame.verb_sense.lemma.clone(),
                        preposition: None,
                    });
                    continue;
                }
                Slot::Np(np) => (*np, None),
                Slot::Pp(pp, np) => (*np, Some(head_word(pp).to_string())),
                Slot::Stray => unreachable!("stray slots never fit a pattern"),
            };
            let rr = restrictions.next().expect("frame restrictions cover arguments");
            let sense = disambiguate(head_word(np), SensePos::Noun, context, lexicon, wsd).sense;
            if !lexicon.satisfies(&sense.lemma, rr.restriction) {
                continue 'frames;
            }
            bindings.push(RoleBinding {
                role: rr.role.clone(),
                restriction: rr.restriction,
                chunk: np.clone(),
                concept: lexicon.canonical(&sense),
                sense,
                text: np_text(np, lexicon),
                preposition: prep,
            });
        }
        assignments.push(RoleAssignment {
            frame_id: frame.id.clone(),
            bindings,
        });
    }
    let flag = assignments
        .is_empty()
        .then_some(MatchFlag::NoRestrictionMatch);
    FrameMatches { assignments, flag }
}
