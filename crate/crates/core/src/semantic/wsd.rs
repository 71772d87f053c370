use serde::{Deserialize, Serialize};

use super::clause::Clause;
use super::lexicon::{Lexicon, Sense, SenseEntry, SensePos};

/// Pluggable word-sense disambiguator.
pub trait Disambiguator {
    /// Pick a sense number from `senses` (never empty), or `None` to fall
    /// back to the first listed sense.
    fn choose(
        &self,
        lemma: &str,
        pos: SensePos,
        context: &Clause,
        senses: &[SenseEntry],
        lexicon: &Lexicon,
    ) -> Option<u32>;
}

/// First listed sense.
#[derive(Debug, Clone, Copy, Default)]
pub struct MostFrequentSense;

impl Disambiguator for MostFrequentSense {
    fn choose(&self, _: &str, _: SensePos, _: &Clause, senses: &[SenseEntry], _: &Lexicon) -> Option<u32> {
        senses.first().map(|s| s.number)
    }
}

/// Lexicon `[context]` cue words, first matching rule wins; otherwise
/// the most frequent sense.
#[derive(Debug, Clone, Copy, Default)]
pub struct ContextDisambiguator;

impl Disambiguator for ContextDisambiguator {
    fn choose(
        &self,
        lemma: &str,
        pos: SensePos,
        context: &Clause,
        senses: &[SenseEntry],
        lexicon: &Lexicon,
    ) -> Option<u32> {
        let words: Vec<String> = context
            .tokens()
            .iter()
            .map(|t| lexicon.lemmatize(t, SensePos::Noun))
            .collect();
        lexicon
            .context_rules(lemma)
            .iter()
            .filter(|r| senses.iter().any(|s| s.number == r.sense_number))
            .find(|r| words.contains(&r.cue) || context.contains(&r.cue))
            .map(|r| r.sense_number)
            .or_else(|| MostFrequentSense.choose(lemma, pos, context, senses, lexicon))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Disambiguation {
    pub sense: Sense,
    pub out_of_lexicon: bool,
}

/// Lemmatize `head` (pronouns resolve to their referent noun) and pick a
/// sense. Words the lexicon does not know get sense 1 and a flag.
pub fn disambiguate(
    head: &str,
    pos: SensePos,
    context: &Clause,
    lexicon: &Lexicon,
    wsd: &dyn Disambiguator,
) -> Disambiguation {
    let head = head.to_lowercase();
    let lemma = match pos {
        SensePos::Noun => lexicon
            .pronoun_referent(&head)
            .map(str::to_string)
            .unwrap_or_else(|| lexicon.lemmatize(&head, pos)),
        SensePos::Verb => lexicon.lemmatize(&head, pos),
    };
    if let Some(senses) = lexicon.senses(&lemma, pos).filter(|s| !s.is_empty()) {
        let number = wsd
            .choose(&lemma, pos, context, senses, lexicon)
            .filter(|n| senses.iter().any(|s| s.number == *n))
            .unwrap_or(senses[0].number);
        return Disambiguation {
            sense: Sense::new(lemma, pos, number),
            out_of_lexicon: false,
        };
    }
    let known = lexicon.knows(&lemma, pos);
    Disambiguation {
        sense: Sense::new(lemma, pos, 1),
        out_of_lexicon: !known,
    }
}
