use std::collections::HashSet;

use regex::Regex;
use serde::{Deserialize, Serialize};
use std::sync::LazyLock;

const BUNDLED_PERSONS: &str = include_str!("../../data/persons.txt");

/// Word lists describing people: `a young woman`, `two men`.
#[derive(Debug, Clone, Default)]
pub struct PersonPatterns {
    pub articles: HashSet<String>,
    pub plural_markers: HashSet<String>,
    pub adjectives: HashSet<String>,
    pub singular_nouns: HashSet<String>,
    pub plural_nouns: HashSet<String>,
}

impl PersonPatterns {
    /// Shipped lists. The file has one `section: word word ...` line per
    /// list.
    pub fn bundled() -> Self {
        Self::parse(BUNDLED_PERSONS)
    }

    pub fn parse(text: &str) -> Self {
        let mut p = PersonPatterns::default();
        for line in text.lines() {
            let line = line.split('#').next().unwrap_or("").trim();
            let Some((key, words)) = line.split_once(':') else {
                continue;
            };
            let set = match key.trim() {
                "articles" => &mut p.articles,
                "plural_markers" => &mut p.plural_markers,
                "adjectives" => &mut p.adjectives,
                "singular" => &mut p.singular_nouns,
                "plural" => &mut p.plural_nouns,
                _ => continue,
            };
            set.extend(words.split_whitespace().map(str::to_lowercase));
        }
        p
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Replacement {
    pub original: String,
    pub replacement: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Anonymized {
    pub text: String,
    pub replacements: Vec<Replacement>,
}

static WORD: LazyLock<Regex> = LazyLock::new(|| Regex::new(r"[\p{L}\p{N}][\p{L}\p{N}'’\-]*").unwrap());

#[derive(Clone, Copy, PartialEq)]
enum Number {
    One,
    Many,
}

struct Word<'a> {
    start: usize,
    end: usize,
    text: &'a str,
}

struct Mention {
    first: usize,
    last: usize,
    number: Number,
    possessive: bool,
}

fn split_possessive(w: &str) -> (&str, bool) {
    for suffix in ["'s", "’s"] {
        if let Some(stem) = w.strip_suffix(suffix) {
            return (stem, true);
        }
    }
    (w, false)
}

/// Character names and person descriptions become `someone`, coordinated
/// mentions and plural person references become `people`.
pub struct Anonymizer {
    names: HashSet<String>,
    patterns: PersonPatterns,
}

impl Anonymizer {
    pub fn new<I, S>(names: I, patterns: PersonPatterns) -> Self
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        Self {
            names: names.into_iter().map(|n| n.as_ref().to_lowercase()).collect(),
            patterns,
        }
    }

    fn adjacent(text: &str, a: &Word<'_>, b: &Word<'_>) -> bool {
        text[a.end..b.start].chars().all(char::is_whitespace)
    }

    fn mention_at(&self, text: &str, words: &[Word<'_>], i: usize) -> Option<Mention> {
        let (stem, possessive) = split_possessive(words[i].text);
        let lower = stem.to_lowercase();
        let capitalized = stem.chars().next().is_some_and(char::is_uppercase);
        if (capitalized && self.names.contains(&lower)) || lower == "someone" || lower == "somebody" {
            return Some(Mention { first: i, last: i, number: Number::One, possessive });
        }
        if lower == "people" {
            return Some(Mention { first: i, last: i, number: Number::Many, possessive });
        }
        let det = words[i].text.to_lowercase();
        let article = self.patterns.articles.contains(&det);
        let plural_marker = self.patterns.plural_markers.contains(&det);
        if !article && !plural_marker {
            return None;
        }
        let mut j = i + 1;
        while j < words.len()
            && Self::adjacent(text, &words[j - 1], &words[j])
            && self.patterns.adjectives.contains(&words[j].text.to_lowercase())
        {
            j += 1;
        }
        if j >= words.len() || !Self::adjacent(text, &words[j - 1], &words[j]) {
            return None;
        }
        let (noun, possessive) = split_possessive(words[j].text);
        let noun = noun.to_lowercase();
        let number = if self.patterns.plural_nouns.contains(&noun) {
            Number::Many
        } else if article && self.patterns.singular_nouns.contains(&noun) {
            Number::One
        } else {
            return None;
        };
        Some(Mention { first: i, last: j, number, possessive })
    }

    pub fn anonymize(&self, sentence: &str) -> Anonymized {
        let words: Vec<Word<'_>> = WORD
            .find_iter(sentence)
            .map(|m| Word {
                start: m.start(),
                end: m.end(),
                text: m.as_str(),
            })
            .collect();
        let mut mentions: Vec<Mention> = Vec::new();
        let mut i = 0;
        while i < words.len() {
            match self.mention_at(sentence, &words, i) {
                Some(m) => {
                    i = m.last + 1;
                    mentions.push(m);
                }
                None => i += 1,
            }
        }

        // A determiner (plus adjectives) right before a mention would form a
        // new description around the replacement; fold it in.
        for m in mentions.iter_mut() {
            let mut k = m.first;
            while k > 0 && Self::adjacent(sentence, &words[k - 1], &words[k]) {
                let w = words[k - 1].text.to_lowercase();
                let det = self.patterns.articles.contains(&w) || self.patterns.plural_markers.contains(&w);
                if !det && !self.patterns.adjectives.contains(&w) {
                    break;
                }
                k -= 1;
                if det {
                    m.first = k;
                }
            }
        }
        mentions.dedup_by(|b, a| b.first <= a.last);

        // Merge `X and Y`, `X, Y and Z` into one plural mention.
        let mut merged: Vec<Mention> = Vec::new();
        for m in mentions {
            if let Some(prev) = merged.last_mut() {
                let gap_words = &words[prev.last + 1..m.first];
                let gap = &sentence[words[prev.last].end..words[m.first].start];
                let joined = !prev.possessive
                    && match gap_words {
                        [] => gap.trim() == ",",
                        [w] => {
                            w.text.eq_ignore_ascii_case("and")
                                && gap.replace(w.text, "").trim().trim_end_matches(',').trim().is_empty()
                        }
                        _ => false,
                    };
                if joined {
                    prev.last = m.last;
                    prev.number = Number::Many;
                    prev.possessive = m.possessive;
                    continue;
                }
            }
            merged.push(m);
        }


        let mut out = String::with_capacity(sentence.len());
        let mut replacements = Vec::new();
        let mut cursor = 0;
        for m in &merged {
            let start = words[m.first].start;
            let end = words[m.last].end;
            let original = &sentence[start..end];
            let mut replacement = match m.number {
                Number::One => "someone".to_string(),
                Number::Many => "people".to_string(),
            };
            if m.possessive {
                replacement.push_str("'s");
            }
            let before = sentence[..start].trim_end();
            if before.is_empty() || before.ends_with(['.', '!', '?', '"']) {
                replacement = capitalize(&replacement);
            }
            out.push_str(&sentence[cursor..start]);
            out.push_str(&replacement);
            cursor = end;
            if original != replacement {
                replacements.push(Replacement {
                    original: original.to_string(),
                    replacement,
                });
            }
        }
        out.push_str(&sentence[cursor..]);
        Anonymized {
            text: out,
            replacements,
        }
    }
}

fn capitalize(s: &str) -> String {
    let mut c = s.chars();
    match c.next() {
        Some(f) => f.to_uppercase().chain(c).collect(),
        None => String::new(),
    }
}

/// Names from a cast file: one name per line, `#` comments.
pub fn parse_name_list(text: &str) -> Vec<String> {
    text.lines()
        .map(|l| l.split('#').next().unwrap_or("").trim())
        .filter(|l| !l.is_empty())
        .flat_map(|l| l.split_whitespace().map(str::to_string).collect::<Vec<_>>())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn anon() -> Anonymizer {
        Anonymizer::new(["Abby", "Mike", "Hale"], PersonPatterns::bundled())
    }

    fn run(s: &str) -> String {
        anon().anonymize(s).text
    }

    #[test]
    fn names_and_coordination() {
        assert_eq!(run("Abby gets in the basket."), "Someone gets in the basket.");
        assert_eq!(run("Mike and Abby run."), "People run.");
        assert_eq!(run("The door opens slowly."), "The door opens slowly.");
        assert_eq!(run("She hands Mike, Abby and Hale a map."), "She hands people a map.");
        assert_eq!(run("Later Abby smiles at Mike."), "Later someone smiles at someone.");
    }

    #[test]
    fn person_descriptions() {
        assert_eq!(run("A young woman enters."), "Someone enters.");
        assert_eq!(run("He sees the old man."), "He sees someone.");
        assert_eq!(run("Two men wait outside."), "People wait outside.");
        assert_eq!(run("A young woman and Mike leave."), "People leave.");
        assert_eq!(run("A red car stops."), "A red car stops.");
    }

    #[test]
    fn possessives_and_logging() {
        let a = anon().anonymize("Abby's bag falls. Mike grabs it.");
        assert_eq!(a.text, "Someone's bag falls. Someone grabs it.");
        assert_eq!(a.replacements.len(), 2);
        assert_eq!(a.replacements[0].original, "Abby's");
        assert!(anon().anonymize("Nobody here.").replacements.is_empty());
    }

    #[test]
    fn lowercase_name_lookalikes_stay() {
        let a = Anonymizer::new(["Will", "Hope"], PersonPatterns::bundled());
        assert_eq!(a.anonymize("Will will hope.").text, "Someone will hope.");
    }

    const PARTS: &[&str] = &[
        "Abby", "Mike", "and", "a", "young", "woman", "the", "man", "runs", ",", "people", "someone",
        "Someone", "door", "Hale's", "two", "men", "opens", ".",
    ];

    proptest! {
        #[test]
        fn idempotent(idx in prop::collection::vec(0..PARTS.len(), 0..16)) {
            let s: Vec<&str> = idx.iter().map(|&i| PARTS[i]).collect();
            let s = s.join(" ");
            let once = run(&s);
            prop_assert_eq!(run(&once), once.clone(), "{:?}", s);
        }
    }
}
