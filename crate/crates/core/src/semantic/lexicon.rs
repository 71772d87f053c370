use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::tagger::Tag;

#[derive(Debug, Error, PartialEq)]
#[error("lexicon line {line}: {message}")]
pub struct LexiconError {
    pub line: usize,
    pub message: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SensePos {
    Noun,
    Verb,
}

/// A dictionary sense, rendered `lemma#n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Sense {
    pub lemma: String,
    pub pos: SensePos,
    pub sense_number: u32,
}

impl Sense {
    pub fn new(lemma: impl Into<String>, pos: SensePos, sense_number: u32) -> Self {
        Self {
            lemma: lemma.into(),
            pos,
            sense_number,
        }
    }
}

impl fmt::Display for Sense {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}#{}", self.lemma, self.sense_number)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Restriction {
    Animate,
    Solid,
    Location,
    Machine,
    Any,
}

impl FromStr for Restriction {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s.trim().to_ascii_lowercase().as_str() {
            "animate" => Restriction::Animate,
            "solid" => Restriction::Solid,
            "location" => Restriction::Location,
            "machine" => Restriction::Machine,
            "any" => Restriction::Any,
            other => return Err(format!("unknown restriction {other:?}")),
        })
    }
}

impl fmt::Display for Restriction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Restriction::Animate => "animate",
            Restriction::Solid => "solid",
            Restriction::Location => "location",
            Restriction::Machine => "machine",
            Restriction::Any => "any",
        };
        f.write_str(s)
    }
}

/// One symbol of a verb frame's syntactic pattern.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PatternSlot {
    /// Bare noun phrase.
    Np,
    /// The verb.
    V,
    /// Prepositional argument (preposition plus noun phrase).
    Pp,
    /// Prepositional argument naming a place.
    NpLocation,
}

impl FromStr for PatternSlot {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s {
            "NP" => PatternSlot::Np,
            "V" => PatternSlot::V,
            "PP" => PatternSlot::Pp,
            "NP.Location" => PatternSlot::NpLocation,
            other => return Err(format!("unknown pattern symbol {other:?}")),
        })
    }
}

impl fmt::Display for PatternSlot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PatternSlot::Np => "NP",
            PatternSlot::V => "V",
            PatternSlot::Pp => "PP",
            PatternSlot::NpLocation => "NP.Location",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RoleRestriction {
    pub role: String,
    pub restriction: Restriction,
}

/// A verb sense's syntactic pattern with selectional restrictions on the
/// non-verb slots, in pattern order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerbFrame {
    pub id: String,
    pub verb_sense: Sense,
    pub pattern: Vec<PatternSlot>,
    pub restrictions: Vec<RoleRestriction>,
}

impl VerbFrame {
    pub fn new(
        id: impl Into<String>,
        verb_sense: Sense,
        pattern: Vec<PatternSlot>,
        restrictions: Vec<RoleRestriction>,
    ) -> Result<Self, String> {
        let verbs = pattern.iter().filter(|s| **s == PatternSlot::V).count();
        if verbs != 1 {
            return Err(format!("pattern needs exactly one V, found {verbs}"));
        }
        if restrictions.len() != pattern.len() - 1 {
            return Err(format!(
                "{} restrictions for {} argument slots",
                restrictions.len(),
                pattern.len() - 1
            ));
        }
        Ok(Self {
            id: id.into(),
            verb_sense,
            pattern,
            restrictions,
        })
    }

    /// `(slot, restriction)` for every argument slot in pattern order.
    pub fn argument_slots(&self) -> impl Iterator<Item = (PatternSlot, &RoleRestriction)> {
        self.pattern
            .iter()
            .copied()
            .filter(|s| *s != PatternSlot::V)
            .zip(&self.restrictions)
    }
}

impl fmt::Display for VerbFrame {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let pattern: Vec<String> = self.pattern.iter().map(|p| p.to_string()).collect();
        let roles: Vec<String> = self
            .restrictions
            .iter()
            .map(|r| format!("{}:{}", r.role, r.restriction))
            .collect();
        write!(f, "{}: {} | {}", self.verb_sense, pattern.join(" "), roles.join(", "))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SenseEntry {
    pub number: u32,
    pub gloss: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ContextRule {
    pub cue: String,
    pub sense_number: u32,
}

/// Word lists, noun properties, verb frames and sense inventories.
///
/// Plain-text format, one section per `[header]`:
///
/// ```text
/// [nouns]          bus: solid,machine
/// [frames]         shoot#2: NP V NP | Agent:animate, Patient:solid
/// [verb-senses]    shoot: 1=kill 2=film
/// [noun-senses]    bus: 1=vehicle 2=connector
/// [words]          the: det
/// [lemmas]         began: begin
/// [pronouns]       he: man
/// [context]        shoot: video=2 gun=1
/// ```
///
/// Senses sharing a gloss across lemmas are one concept; the first declared
/// lemma names it (see [`Lexicon::canonical`]).
#[derive(Debug, Clone, Default)]
pub struct Lexicon {
    nouns: HashMap<String, BTreeSet<Restriction>>,
    frames: Vec<VerbFrame>,
    senses: HashMap<(String, SensePos), Vec<SenseEntry>>,
    canonical: HashMap<(SensePos, String), Sense>,
    words: HashMap<String, Vec<Tag>>,
    lemmas: HashMap<String, String>,
    pronouns: HashMap<String, String>,
    context: HashMap<String, Vec<ContextRule>>,
}

const BUNDLED: &str = include_str!("../../data/lexicon.txt");

#[derive(Clone, Copy)]
enum Section {
    Nouns,
    Frames,
    VerbSenses,
    NounSenses,
    Words,
    Lemmas,
    Pronouns,
    Context,
}

impl Lexicon {
    /// The small lexicon shipped with the crate.
    pub fn bundled() -> Self {
        Self::parse(BUNDLED).expect("bundled lexicon parses")
    }

    pub fn parse(text: &str) -> Result<Self, LexiconError> {
        let mut lex = Lexicon::default();
        lex.extend_from(text)?;
        Ok(lex)
    }

    /// Add the entries of another lexicon file; later entries append.
    pub fn extend_from(&mut self, text: &str) -> Result<(), LexiconError> {
        let mut section: Option<Section> = None;
        for (no, raw) in text.lines().enumerate() {
            let line_no = no + 1;
            let line = raw.split('%').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let err = |message: String| LexiconError {
                line: line_no,
                message,
            };
            if let Some(name) = line.strip_prefix('[').and_then(|l| l.strip_suffix(']')) {
                section = Some(match name.trim() {
                    "nouns" => Section::Nouns,
                    "frames" => Section::Frames,
                    "verb-senses" => Section::VerbSenses,
                    "noun-senses" => Section::NounSenses,
                    "words" => Section::Words,
                    "lemmas" => Section::Lemmas,
                    "pronouns" => Section::Pronouns,
                    "context" => Section::Context,
                    other => return Err(err(format!("unknown section [{other}]"))),
                });
                continue;
            }
            let section = section.ok_or_else(|| err("entry outside any section".into()))?;
            let (key, value) = line
                .split_once(':')
                .ok_or_else(|| err(format!("expected `key: value`, got {line:?}")))?;
            let key = key.trim().to_lowercase();
            let value = value.trim();
            match section {
                Section::Nouns => {
                    let props = value
                        .split(',')
                        .filter(|p| !p.trim().is_empty())
                        .map(|p| p.parse::<Restriction>())
                        .collect::<Result<BTreeSet<_>, _>>()
                        .map_err(err)?;
                    self.nouns.entry(key).or_default().extend(props);
                }
                Section::Frames => {
                    let frame = self.parse_frame(&key, value).map_err(err)?;
                    self.frames.push(frame);
                }
                Section::VerbSenses | Section::NounSenses => {
                    let pos = if matches!(section, Section::VerbSenses) {
                        SensePos::Verb
                    } else {
                        SensePos::Noun
                    };
                    let mut entries = Vec::new();
                    for item in value.split_whitespace() {
                        let (n, gloss) = item
                            .split_once('=')
                            .ok_or_else(|| err(format!("expected n=gloss, got {item:?}")))?;
                        let number: u32 = n
                            .parse()
                            .ok()
                            .filter(|n| *n > 0)
                            .ok_or_else(|| err(format!("bad sense number {n:?}")))?;
                        entries.push(SenseEntry {
                            number,
                            gloss: gloss.to_lowercase(),
                        });
                    }
                    for e in &entries {
                        self.canonical
                            .entry((pos, e.gloss.clone()))
                            .or_insert_with(|| Sense::new(key.clone(), pos, e.number));
                    }
                    self.senses.insert((key, pos), entries);
                }
                Section::Words => {
                    let tags = value
                        .split(',')
                        .map(|t| t.trim().parse::<Tag>())
                        .collect::<Result<Vec<_>, _>>()
                        .map_err(err)?;
                    self.words.insert(key, tags);
                }
                Section::Lemmas => {
                    self.lemmas.insert(key, value.to_lowercase());
                }
                Section::Pronouns => {
                    self.pronouns.insert(key, value.to_lowercase());
                }
                Section::Context => {
                    let mut rules = Vec::new();
                    for item in value.split_whitespace() {
                        let (cue, n) = item
                            .split_once('=')
                            .ok_or_else(|| err(format!("expected word=n, got {item:?}")))?;
                        let sense_number = n
                            .parse()
                            .map_err(|_| err(format!("bad sense number {n:?}")))?;
                        rules.push(ContextRule {
                            cue: cue.to_lowercase(),
                            sense_number,
                        });
                    }
                    self.context.entry(key).or_default().extend(rules);
                }
            }
        }
        Ok(())
    }

    fn parse_frame(&self, key: &str, value: &str) -> Result<VerbFrame, String> {
        let (lemma, number) = key
            .split_once('#')
            .ok_or_else(|| format!("frame key {key:?} must be lemma#n"))?;
        let number: u32 = number
            .parse()
            .map_err(|_| format!("bad sense number in {key:?}"))?;
        let (pattern, roles) = value.split_once('|').unwrap_or((value, ""));
        let pattern = pattern
            .split_whitespace()
            .map(str::parse)
            .collect::<Result<Vec<PatternSlot>, _>>()?;
        let restrictions = roles
            .split(',')
            .filter(|r| !r.trim().is_empty())
            .map(|r| {
                let (role, restr) = r
                    .split_once(':')
                    .ok_or_else(|| format!("expected Role:restriction, got {r:?}"))?;
                Ok(RoleRestriction {
                    role: role.trim().to_string(),
                    restriction: restr.parse()?,
                })
            })
            .collect::<Result<Vec<_>, String>>()?;
        let n_same = self
            .frames
            .iter()
            .filter(|f| f.verb_sense.lemma == lemma && f.verb_sense.sense_number == number)
            .count();
        VerbFrame::new(
            format!("{lemma}#{number}/{}", n_same + 1),
            Sense::new(lemma, SensePos::Verb, number),
            pattern,
            restrictions,
        )
    }

    pub fn frames(&self) -> &[VerbFrame] {
        &self.frames
    }

    pub fn frames_for<'a>(&'a self, lemma: &'a str) -> impl Iterator<Item = &'a VerbFrame> + 'a {
        self.frames.iter().filter(move |f| f.verb_sense.lemma == lemma)
    }

    pub fn noun_properties(&self, lemma: &str) -> Option<&BTreeSet<Restriction>> {
        self.nouns.get(lemma)
    }

    pub fn satisfies(&self, noun_lemma: &str, restriction: Restriction) -> bool {
        restriction == Restriction::Any
            || self
                .nouns
                .get(noun_lemma)
                .is_some_and(|props| props.contains(&restriction))
    }

    pub fn senses(&self, lemma: &str, pos: SensePos) -> Option<&[SenseEntry]> {
        self.senses.get(&(lemma.to_string(), pos)).map(Vec::as_slice)
    }

    pub fn context_rules(&self, lemma: &str) -> &[ContextRule] {
        self.context.get(lemma).map_or(&[], Vec::as_slice)
    }

    /// Whether the lemma is known with this part of speech.
    pub fn knows(&self, lemma: &str, pos: SensePos) -> bool {
        match pos {
            SensePos::Noun => {
                self.nouns.contains_key(lemma) || self.senses.contains_key(&(lemma.into(), pos))
            }
            SensePos::Verb => {
                self.senses.contains_key(&(lemma.into(), pos))
                    || self.frames.iter().any(|f| f.verb_sense.lemma == lemma)
            }
        }
    }

    /// Representative sense of the concept `sense` belongs to.
    pub fn canonical(&self, sense: &Sense) -> Sense {
        self.senses(&sense.lemma, sense.pos)
            .and_then(|entries| entries.iter().find(|e| e.number == sense.sense_number))
            .and_then(|e| self.canonical.get(&(sense.pos, e.gloss.clone())))
            .cloned()
            .unwrap_or_else(|| sense.clone())
    }

    pub fn tags(&self, word: &str) -> Option<&[Tag]> {
        self.words.get(word).map(Vec::as_slice)
    }

    /// Noun a pronoun stands for in labels (`he` -> `man`).
    pub fn pronoun_referent(&self, word: &str) -> Option<&str> {
        self.pronouns.get(word).map(String::as_str)
    }

    /// Base form of `word` for the given part of speech: irregular table,
    /// then suffix stripping checked against known lemmas.
    pub fn lemmatize(&self, word: &str, pos: SensePos) -> String {
        let word = word.to_lowercase();
        if let Some(base) = self.lemmas.get(&word).filter(|b| self.knows(b, pos)) {
            return base.clone();
        }
        if self.knows(&word, pos) {
            return word;
        }
        let mut candidates: Vec<String> = Vec::new();
        let strip = |suffix: &str| word.strip_suffix(suffix).map(str::to_string);
        match pos {
            SensePos::Noun => {
                if let Some(s) = strip("ies") {
                    candidates.push(s + "y");
                }
                candidates.extend(strip("es"));
                candidates.extend(strip("s"));
            }
            SensePos::Verb => {
                if let Some(s) = strip("ies") {
                    candidates.push(s + "y");
                }
                candidates.extend(strip("es"));
                candidates.extend(strip("s"));
                if let Some(s) = strip("ied") {
                    candidates.push(s + "y");
                }
                for suffix in ["ed", "ing"] {
                    if let Some(stem) = strip(suffix) {
                        candidates.push(stem.clone() + "e");
                        candidates.push(stem.clone());
                        let b = stem.as_bytes();
                        if b.len() >= 2 && b[b.len() - 1] == b[b.len() - 2] {
                            candidates.push(stem[..stem.len() - 1].to_string());
                        }
                    }
                }
            }
        }
        candidates
            .into_iter()
            .find(|c| self.knows(c, pos))
            .unwrap_or(word)
    }

    /// Whether any reading of `word` can be a verb.
    pub fn can_be_verb(&self, word: &str) -> bool {
        match self.tags(word) {
            Some(tags) => tags.contains(&Tag::Verb),
            None => self.knows(&self.lemmatize(word, SensePos::Verb), SensePos::Verb),
        }
    }
}
