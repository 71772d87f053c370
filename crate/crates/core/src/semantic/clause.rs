use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::tagger::{tokenize, PosTagger, Tag};

/// A single-predicate piece of a sentence.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Clause {
    tokens: Vec<String>,
    source_sentence: Arc<str>,
}

impl Clause {
    /// `None` for an empty token list.
    pub fn new(tokens: Vec<String>, source_sentence: Arc<str>) -> Option<Self> {
        (!tokens.is_empty()).then_some(Self {
            tokens,
            source_sentence,
        })
    }

    /// Tokenize `text` as one clause.
    pub fn from_text(text: &str) -> Option<Self> {
        let tokens: Vec<String> = tokenize(text).into_iter().filter(|t| t != ",").collect();
        Self::new(tokens, Arc::from(text))
    }

    pub fn tokens(&self) -> &[String] {
        &self.tokens
    }

    pub fn source_sentence(&self) -> &str {
        &self.source_sentence
    }

    pub fn text(&self) -> String {
        self.tokens.join(" ")
    }

    pub fn contains(&self, word: &str) -> bool {
        self.tokens.iter().any(|t| t == word)
    }
}

struct Segment {
    tokens: Vec<String>,
    tags: Vec<Tag>,
    /// Starts with its verb and borrows the previous segment's subject.
    coordinated: bool,
}

impl Segment {
    fn first_verbal(&self) -> Option<usize> {
        self.tags.iter().position(|t| t.is_verbal())
    }

    /// End of the verb group that starts at the first verbal token.
    fn verb_group_end(&self) -> Option<usize> {
        let v = self.first_verbal()?;
        let mut e = v;
        while e < self.tags.len()
            && matches!(
                self.tags[e],
                Tag::Verb | Tag::Aux | Tag::Adv | Tag::To | Tag::Particle
            )
        {
            e += 1;
        }
        Some(e)
    }

    fn main_verb(&self) -> Option<&str> {
        let v = self.first_verbal()?;
        let e = self.verb_group_end()?;
        (v..e)
            .rev()
            .find(|&i| self.tags[i] == Tag::Verb)
            .map(|i| self.tokens[i].as_str())
    }
}

/// Whether the material right after a coordinator starts a new predicate:
/// either a verb directly or a subject followed by a verb.
fn opens_clause(tags: &[Tag], from: usize) -> Option<bool> {
    let mut i = from;
    while i < tags.len() && matches!(tags[i], Tag::Conj | Tag::Punct | Tag::Adv) {
        i += 1;
    }
    let first = *tags.get(i)?;
    if first.is_verbal() {
        return Some(true);
    }
    if !first.starts_np() {
        return None;
    }
    while i < tags.len() && tags[i].starts_np() {
        i += 1;
    }
    while i < tags.len() && tags[i] == Tag::Adv {
        i += 1;
    }
    tags.get(i).filter(|t| t.is_verbal()).map(|_| false)
}

/// Split coordinated predicates into separate clauses.
///
/// A coordinator (`and`, `but`, `then`, comma) splits only when the left
/// side already has a verb and the right side starts a new predicate. A
/// right side that starts with its verb gets the left subject copied in,
/// and an object-less transitive verb directly before such a segment
/// shares that segment's object.
pub fn split_clauses(sentence: &str, tagger: &dyn PosTagger) -> Vec<Clause> {
    let source: Arc<str> = Arc::from(sentence);
    let tokens = tokenize(sentence);
    if tokens.is_empty() {
        return Vec::new();
    }
    let tags = tagger.tag(&tokens);

    let mut segments: Vec<Segment> = Vec::new();
    let mut start = 0;
    let mut coordinated = false;
    let mut i = 0;
    while i < tokens.len() {
        if matches!(tags[i], Tag::Conj | Tag::Punct) {
            let left_has_verb = tags[start..i].iter().any(|t| t.is_verbal());
            if left_has_verb {
                if let Some(vp_start) = opens_clause(&tags, i + 1) {
                    segments.push(make_segment(&tokens, &tags, start, i, coordinated));
                    let mut j = i;
                    while j < tokens.len() && matches!(tags[j], Tag::Conj | Tag::Punct) {
                        j += 1;
                    }
                    start = j;
                    coordinated = vp_start;
                    i = j;
                    continue;
                }
            }
        }
        i += 1;
    }
    segments.push(make_segment(&tokens, &tags, start, tokens.len(), coordinated));
    segments.retain(|s| !s.tokens.is_empty());

    // Share a trailing object backwards through verb-initial segments.
    for k in (0..segments.len().saturating_sub(1)).rev() {
        if !segments[k + 1].coordinated {
            continue;
        }
        let Some(end) = segments[k].verb_group_end() else {
            continue;
        };
        if end != segments[k].tokens.len() || segments[k].tags[end - 1] != Tag::Verb {
            continue;
        }
        if segments[k].main_verb().is_some_and(|v| tagger.object_optional(v)) {
            continue;
        }
        let next = &segments[k + 1];
        let Some(next_end) = next.verb_group_end() else {
            continue;
        };
        if next.tags.get(next_end).is_some_and(|t| t.starts_np()) {
            let obj_tokens = next.tokens[next_end..].to_vec();
            let obj_tags = next.tags[next_end..].to_vec();
            segments[k].tokens.extend(obj_tokens);
            segments[k].tags.extend(obj_tags);
        }
    }

    // Copy subjects forward into verb-initial segments.
    let mut subject: Vec<String> = Vec::new();
    let mut clauses = Vec::new();
    for seg in segments {
        let mut tokens: Vec<String> = seg
            .tokens
            .iter()
            .zip(&seg.tags)
            .filter(|(_, t)| **t != Tag::Punct)
            .map(|(w, _)| w.clone())
            .collect();
        if seg.coordinated {
            let mut with_subject = subject.clone();
            with_subject.append(&mut tokens);
            tokens = with_subject;
        } else if let Some(v) = seg.first_verbal() {
            subject = seg.tokens[..v]
                .iter()
                .zip(&seg.tags[..v])
                .filter(|(_, t)| t.starts_np() || **t == Tag::Conj)
                .map(|(w, _)| w.clone())
                .collect();
        }
        if let Some(c) = Clause::new(tokens, source.clone()) {
            clauses.push(c);
        }
    }
    clauses
}

fn make_segment(tokens: &[String], tags: &[Tag], start: usize, end: usize, coordinated: bool) -> Segment {
    Segment {
        tokens: tokens[start..end].to_vec(),
        tags: tags[start..end].to_vec(),
        coordinated,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::semantic::{Lexicon, LexiconTagger};
    use proptest::prelude::*;

    fn split(s: &str) -> Vec<String> {
        let lex = Lexicon::bundled();
        split_clauses(s, &LexiconTagger::new(&lex))
            .iter()
            .map(Clause::text)
            .collect()
    }

    #[test]
    fn shared_subject_and_object() {
        assert_eq!(
            split("He shot and modified the video"),
            ["he shot the video", "he modified the video"]
        );
    }

    #[test]
    fn no_coordination_is_one_clause() {
        assert_eq!(split("Abby gets in the basket."), ["abby gets in the basket"]);
        assert_eq!(split("Mike and Abby run."), ["mike and abby run"]);
        assert_eq!(split("someone"), ["someone"]);
        assert!(split("").is_empty());
    }

    #[test]
    fn intransitive_verb_keeps_no_object() {
        assert_eq!(
            split("She sits and reads a book."),
            ["she sits", "she reads a book"]
        );
    }

    #[test]
    fn full_clauses_keep_their_subjects() {
        assert_eq!(
            split("He opens the door, and she walks into the room."),
            ["he opens the door", "she walks into the room"]
        );
        assert_eq!(
            split("The man stands up, takes his coat and leaves."),
            ["the man stands up", "the man takes his coat", "the man leaves"]
        );
    }

    const WORDS: &[&str] = &[
        "he", "she", "the", "a", "man", "door", "opens", "walks", "and", "then", "takes", "video",
        "shot", "into", "room", "slowly", "bus", "moving", ",", "someone", "kisses", "her", "in",
    ];

    proptest! {
        #[test]
        fn content_words_survive(idx in prop::collection::vec(0..WORDS.len(), 1..14)) {
            let lex = Lexicon::bundled();
            let tagger = LexiconTagger::new(&lex);
            let sentence: Vec<&str> = idx.iter().map(|&i| WORDS[i]).collect();
            let sentence = sentence.join(" ");
            let tokens = tokenize(&sentence);
            let tags = tagger.tag(&tokens);
            let clauses = split_clauses(&sentence, &tagger);
            let all: Vec<&String> = clauses.iter().flat_map(|c| c.tokens()).collect();
            for (w, t) in tokens.iter().zip(&tags) {
                if t.is_content() {
                    prop_assert!(all.contains(&w), "{w} lost from {sentence:?}");
                }
            }
            for c in &clauses {
                prop_assert!(!c.tokens().is_empty());
            }
        }
    }
}
