use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::lexicon::{Lexicon, SensePos};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Tag {
    Det,
    Adj,
    Noun,
    Pron,
    Verb,
    Aux,
    To,
    Prep,
    Particle,
    Conj,
    Adv,
    Num,
    Punct,
}

impl Tag {
    /// Tags that can open a noun phrase.
    pub fn starts_np(self) -> bool {
        matches!(self, Tag::Det | Tag::Adj | Tag::Noun | Tag::Pron | Tag::Num)
    }

    pub fn is_verbal(self) -> bool {
        matches!(self, Tag::Verb | Tag::Aux)
    }

    /// Nouns, verbs and adjectives.
    pub fn is_content(self) -> bool {
        matches!(self, Tag::Noun | Tag::Verb | Tag::Adj)
    }
}

impl FromStr for Tag {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s {
            "det" => Tag::Det,
            "adj" => Tag::Adj,
            "noun" => Tag::Noun,
            "pron" => Tag::Pron,
            "verb" => Tag::Verb,
            "aux" => Tag::Aux,
            "to" => Tag::To,
            "prep" => Tag::Prep,
            "part" => Tag::Particle,
            "conj" => Tag::Conj,
            "adv" => Tag::Adv,
            "num" => Tag::Num,
            "punct" => Tag::Punct,
            other => return Err(format!("unknown tag {other:?}")),
        })
    }
}

impl fmt::Display for Tag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Tag::Det => "det",
            Tag::Adj => "adj",
            Tag::Noun => "noun",
            Tag::Pron => "pron",
            Tag::Verb => "verb",
            Tag::Aux => "aux",
            Tag::To => "to",
            Tag::Prep => "prep",
            Tag::Particle => "part",
            Tag::Conj => "conj",
            Tag::Adv => "adv",
            Tag::Num => "num",
            Tag::Punct => "punct",
        })
    }
}

/// Part-of-speech provider used by clause splitting and chunking.
pub trait PosTagger {
    /// One tag per token. Unknown words should come back as [`Tag::Noun`].
    fn tag(&self, tokens: &[String]) -> Vec<Tag>;

    /// Whether `verb` reads naturally without an object. Clause splitting
    /// only shares a trailing object with verbs for which this is false.
    fn object_optional(&self, _verb: &str) -> bool {
        false
    }
}

/// Lowercased word tokens; commas survive as `,`, other punctuation is
/// dropped and a possessive `'s` becomes its own token.
pub fn tokenize(text: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut word = String::new();
    let flush = |word: &mut String, out: &mut Vec<String>| {
        if word.is_empty() {
            return;
        }
        let w = std::mem::take(word);
        let w = w.trim_matches('\'').to_string();
        if let Some(stem) = w.strip_suffix("'s").filter(|s| !s.is_empty()) {
            out.push(stem.to_string());
            out.push("'s".to_string());
        } else if !w.is_empty() {
            out.push(w);
        }
    };
    for c in text.chars() {
        if c.is_alphanumeric() || (c == '\'' && !word.is_empty()) || c == '’' && !word.is_empty() {
            if c == '’' {
                word.push('\'');
            } else {
                word.extend(c.to_lowercase());
            }
        } else {
            flush(&mut word, &mut out);
            if c == ',' || c == ';' {
                out.push(",".to_string());
            }
        }
    }
    flush(&mut word, &mut out);
    out
}

/// Lexicon lookup with a few left-to-right context rules for ambiguous
/// words.
#[derive(Debug, Clone, Copy)]
pub struct LexiconTagger<'a> {
    lexicon: &'a Lexicon,
}

impl<'a> LexiconTagger<'a> {
    pub fn new(lexicon: &'a Lexicon) -> Self {
        Self { lexicon }
    }

    fn candidates(&self, token: &str) -> Vec<Tag> {
        if token == "," {
            return vec![Tag::Punct];
        }
        if token == "'s" {
            return vec![Tag::Det];
        }
        if token.chars().all(|c| c.is_ascii_digit()) {
            return vec![Tag::Num];
        }
        if let Some(tags) = self.lexicon.tags(token) {
            return tags.to_vec();
        }
        let mut tags = Vec::new();
        let verb = self.lexicon.lemmatize(token, SensePos::Verb);
        if self.lexicon.knows(&verb, SensePos::Verb) {
            tags.push(Tag::Verb);
        }
        let noun = self.lexicon.lemmatize(token, SensePos::Noun);
        if self.lexicon.knows(&noun, SensePos::Noun) {
            tags.push(Tag::Noun);
        }
        if tags.is_empty() {
            tags.push(Tag::Noun);
        }
        tags
    }
}

fn choose(cands: &[Tag], prev: Option<Tag>, next: &[Tag]) -> Tag {
    if cands.len() == 1 {
        return cands[0];
    }
    let has = |t: Tag| cands.contains(&t);
    let next_has = |t: Tag| next.contains(&t);
    let next_np = next.iter().any(|t| t.starts_np());
    if has(Tag::Det) && has(Tag::Pron) {
        return if next_has(Tag::Noun) || next_has(Tag::Adj) || next_has(Tag::Num) {
            Tag::Det
        } else {
            Tag::Pron
        };
    }
    if has(Tag::To) {
        return if next_has(Tag::Verb) && !next_has(Tag::Det) {
            Tag::To
        } else {
            Tag::Prep
        };
    }
    let after_verb = matches!(prev, Some(Tag::Verb) | Some(Tag::Particle));
    let after_np_opener = matches!(prev, Some(Tag::Det) | Some(Tag::Adj) | Some(Tag::Num));
    if has(Tag::Particle) {
        if after_np_opener && has(Tag::Noun) {
            return Tag::Noun;
        }
        if after_verb {
            if !next_np {
                return Tag::Particle;
            }
            return cands
                .iter()
                .copied()
                .find(|t| matches!(t, Tag::Particle | Tag::Prep))
                .unwrap_or(Tag::Particle);
        }
        return cands
            .iter()
            .copied()
            .find(|t| *t != Tag::Particle)
            .unwrap_or(Tag::Particle);
    }
    if has(Tag::Verb) && has(Tag::Adj) {
        return match prev {
            Some(Tag::Det) | Some(Tag::Adj) | Some(Tag::Num) | Some(Tag::Aux) | None => Tag::Adj,
            _ => Tag::Verb,
        };
    }
    if has(Tag::Adj) && has(Tag::Noun) {
        return if next_has(Tag::Noun) { Tag::Adj } else { Tag::Noun };
    }
    if has(Tag::Verb) && has(Tag::Noun) {
        return match prev {
            None | Some(Tag::Det) | Some(Tag::Adj) | Some(Tag::Num) => Tag::Noun,
            Some(Tag::Verb) | Some(Tag::Particle) | Some(Tag::Prep) => Tag::Noun,
            _ => Tag::Verb,
        };
    }
    cands[0]
}

impl PosTagger for LexiconTagger<'_> {
    fn tag(&self, tokens: &[String]) -> Vec<Tag> {
        let cands: Vec<Vec<Tag>> = tokens.iter().map(|t| self.candidates(t)).collect();
        let mut out: Vec<Tag> = Vec::with_capacity(tokens.len());
        for i in 0..tokens.len() {
            let next = cands.get(i + 1).map_or(&[][..], Vec::as_slice);
            out.push(choose(&cands[i], out.last().copied(), next));
        }
        out
    }

    fn object_optional(&self, verb: &str) -> bool {
        use super::lexicon::PatternSlot;
        let lemma = self.lexicon.lemmatize(verb, SensePos::Verb);
        let optional = self
            .lexicon
            .frames_for(&lemma)
            .any(|f| f.pattern.last() == Some(&PatternSlot::V));
        optional
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tags_of(text: &str) -> Vec<String> {
        let lex = Lexicon::bundled();
        let tokens = tokenize(text);
        LexiconTagger::new(&lex)
            .tag(&tokens)
            .into_iter()
            .map(|t| t.to_string())
            .collect()
    }

    #[test]
    fn tokenizer() {
        assert_eq!(tokenize("He shot, and ran."), ["he", "shot", ",", "and", "ran"]);
        assert_eq!(tokenize("Someone's car"), ["someone", "'s", "car"]);
        assert_eq!(tokenize("  "), Vec::<String>::new());
    }

    #[test]
    fn table_sentence_tags() {
        assert_eq!(
            tags_of("He began to shoot a video in the moving bus"),
            ["pron", "verb", "to", "verb", "det", "noun", "prep", "det", "adj", "noun"]
        );
    }

    #[test]
    fn ambiguous_words_follow_context() {
        assert_eq!(tags_of("he shot the man"), ["pron", "verb", "det", "noun"]);
        assert_eq!(tags_of("a shot"), ["det", "noun"]);
        assert_eq!(tags_of("she opens her bag"), ["pron", "verb", "det", "noun"]);
        assert_eq!(tags_of("he kisses her"), ["pron", "verb", "pron"]);
        assert_eq!(tags_of("he walks to the door"), ["pron", "verb", "prep", "det", "noun"]);
        assert_eq!(tags_of("he picks up the phone"), ["pron", "verb", "part", "det", "noun"]);
        assert_eq!(tags_of("she sits down"), ["pron", "verb", "part"]);
        assert_eq!(tags_of("zorp"), ["noun"]);
    }

    #[test]
    fn object_optional_follows_frames() {
        let lex = Lexicon::bundled();
        let t = LexiconTagger::new(&lex);
        assert!(t.object_optional("sits"));
        assert!(!t.object_optional("shot"));
        assert!(!t.object_optional("modified"));
    }
}
