use std::collections::BTreeMap;

use regex::{NoExpand, Regex};

use super::BaselineError;
use crate::semantic::{LabelMode, SrTuple};

const SUBJECT: &str = "\u{1}S\u{1}";
const VERB: &str = "\u{1}V\u{1}";
const OBJECT: &str = "\u{1}O\u{1}";
const LOCATION: &str = "\u{1}L\u{1}";

type Key = (Option<String>, String, Option<String>, Option<String>);

/// Which optional slots a pattern has placeholders for.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
struct Signature {
    subject: bool,
    object: bool,
    location: bool,
}

/// Third person singular present of a verb; for phrasal verbs the first
/// word is inflected.
pub fn inflect_third_person(verb: &str) -> String {
    let (head, rest) = match verb.split_once(' ') {
        Some((h, r)) => (h, Some(r)),
        None => (verb, None),
    };
    let before_y = head.strip_suffix('y').and_then(|s| s.chars().last());
    let inflected = match head {
        "" => String::new(),
        "be" => "is".into(),
        "have" => "has".into(),
        "do" => "does".into(),
        "go" => "goes".into(),
        h if before_y.is_some_and(|c| !"aeiou".contains(c)) => format!("{}ies", &h[..h.len() - 1]),
        h if ["s", "sh", "ch", "x", "z"].iter().any(|e| h.ends_with(e)) => format!("{h}es"),
        h => format!("{h}s"),
    };
    match rest {
        Some(r) => format!("{inflected} {r}"),
        None => inflected,
    }
}

/// Surface form of a tuple label: sense numbers stripped, underscores as
/// spaces.
fn display_label(label: &str) -> String {
    label
        .split(['_', ' '])
        .map(|w| w.split('#').next().unwrap_or(w))
        .filter(|w| !w.is_empty())
        .collect::<Vec<_>>()
        .join(" ")
}

fn replace_first(sentence: &str, surface: &str, placeholder: &str) -> Option<String> {
    if surface.is_empty() {
        return None;
    }
    let re = Regex::new(&format!(r"(?i)\b{}\b", regex::escape(surface))).expect("escaped pattern");
    re.find(sentence)?;
    Some(re.replacen(sentence, 1, NoExpand(placeholder)).into_owned())
}

fn bump(map: &mut BTreeMap<String, usize>, s: String) {
    *map.entry(s).or_insert(0) += 1;
}

/// Most frequent entry, ties to the lexicographically smallest.
fn most_frequent(map: &BTreeMap<String, usize>) -> Option<&str> {
    let mut best: Option<(&str, usize)> = None;
    for (s, &c) in map {
        if best.is_none_or(|(_, b)| c > b) {
            best = Some((s, c));
        }
    }
    best.map(|(s, _)| s)
}

/// SR tuple to sentence generator learned from training pairs.
///
/// Lookup: exact tuple, then verb-specific patterns, then patterns with the
/// verb abstracted, each backing off by dropping location and then object.
/// A subject that matches no pattern is dropped last; training pairs with a
/// subject also yield patterns keeping it as literal text. The final fallback is
/// `Someone <verb>s.`.
#[derive(Debug, Clone)]
pub struct TemplateBank {
    exact: BTreeMap<Key, BTreeMap<String, usize>>,
    by_verb: BTreeMap<(String, Signature), BTreeMap<String, usize>>,
    generic: BTreeMap<Signature, BTreeMap<String, usize>>,
}

fn extract_pattern(tuple: &SrTuple, sentence: &str, with_subject: bool) -> (String, Signature) {
    let mut pattern = sentence.to_string();
    let mut sig = Signature {
        subject: false,
        object: false,
        location: false,
    };
    let subject = if with_subject { &tuple.subject } else { &None };
    let slots = [
        (&tuple.object, OBJECT, &mut sig.object),
        (&tuple.location, LOCATION, &mut sig.location),
        (subject, SUBJECT, &mut sig.subject),
    ];
    for (label, placeholder, flag) in slots {
        if let Some(label) = label {
            if let Some(p) = replace_first(&pattern, &display_label(label), placeholder) {
                pattern = p;
                *flag = true;
            }
        }
    }
    (pattern, sig)
}

fn key(t: &SrTuple) -> Key {
    (t.subject.clone(), t.verb.clone(), t.object.clone(), t.location.clone())
}

impl TemplateBank {
    pub fn fit(pairs: &[(SrTuple, String)]) -> Result<Self, BaselineError> {
        if pairs.is_empty() {
            return Err(BaselineError::EmptyBank);
        }
        let mut bank = Self {
            exact: BTreeMap::new(),
            by_verb: BTreeMap::new(),
            generic: BTreeMap::new(),
        };
        for (tuple, sentence) in pairs {
            let sentence = sentence.trim();
            if sentence.is_empty() {
                continue;
            }
            bump(bank.exact.entry(key(tuple)).or_default(), sentence.to_string());

            // subject-less tuples (e.g. CRF output) reuse the literal subject
            let variants: &[bool] = if tuple.subject.is_some() { &[true, false] } else { &[false] };
            for &with_subject in variants {
                let (pattern, sig) = extract_pattern(tuple, sentence, with_subject);
                bump(bank.by_verb.entry((tuple.verb.clone(), sig)).or_default(), pattern.clone());
                let verb_form = inflect_third_person(&display_label(&tuple.verb));
                if let Some(p) = replace_first(&pattern, &verb_form, VERB) {
                    bump(bank.generic.entry(sig).or_default(), p);
                }
            }
        }
        if bank.exact.is_empty() {
            return Err(BaselineError::EmptyBank);
        }
        Ok(bank)
    }

    pub fn len(&self) -> usize {
        self.exact.values().map(|m| m.values().sum::<usize>()).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.exact.is_empty()
    }

    fn backoff(t: &SrTuple) -> Vec<Signature> {
        let full = Signature {
            subject: t.subject.is_some(),
            object: t.object.is_some(),
            location: t.location.is_some(),
        };
        let mut sigs = Vec::new();
        let subjects: &[bool] = if full.subject { &[true, false] } else { &[false] };
        for &subject in subjects {
            for (object, location) in [(full.object, full.location), (full.object, false), (false, false)] {
                let s = Signature { subject, object, location };
                if !sigs.contains(&s) {
                    sigs.push(s);
                }
            }
        }
        sigs
    }

    pub fn generate(&self, tuple: &SrTuple) -> String {
        if let Some(s) = self.exact.get(&key(tuple)).and_then(most_frequent) {
            return s.to_string();
        }
        let sigs = Self::backoff(tuple);
        for sig in &sigs {
            if let Some(p) = self.by_verb.get(&(tuple.verb.clone(), *sig)).and_then(most_frequent) {
                return fill(p, tuple);
            }
        }
        for sig in &sigs {
            if let Some(p) = self.generic.get(sig).and_then(most_frequent) {
                return fill(p, tuple);
            }
        }
        format!("Someone {}.", inflect_third_person(&display_label(&tuple.verb)))
    }
}

fn fill(pattern: &str, t: &SrTuple) -> String {
    let label = |l: &Option<String>| l.as_deref().map(display_label).unwrap_or_default();
    let out = pattern
        .replace(VERB, &inflect_third_person(&display_label(&t.verb)))
        .replace(OBJECT, &label(&t.object))
        .replace(LOCATION, &label(&t.location))
        .replace(SUBJECT, &label(&t.subject));
    let mut chars = out.chars();
    match chars.next() {
        Some(c) => c.to_uppercase().chain(chars).collect(),
        None => out,
    }
}

impl TemplateBank {
    /// Convenience for tests and tools: text-mode tuple from slot strings,
    /// with `-` or empty meaning unfilled.
    pub fn tuple(subject: &str, verb: &str, object: &str, location: &str) -> SrTuple {
        let opt = |s: &str| (!s.is_empty() && s != "-").then(|| s.to_string());
        SrTuple {
            subject: opt(subject),
            verb: verb.to_string(),
            object: opt(object),
            location: opt(location),
            mode: LabelMode::Text,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(s: &str, v: &str, o: &str, l: &str) -> SrTuple {
        TemplateBank::tuple(s, v, o, l)
    }

    #[test]
    fn inflection() {
        let cases = [
            ("cut", "cuts"),
            ("watch", "watches"),
            ("carry", "carries"),
            ("play", "plays"),
            ("go", "goes"),
            ("be", "is"),
            ("pick up", "picks up"),
            ("kiss", "kisses"),
        ];
        for (v, want) in cases {
            assert_eq!(inflect_third_person(v), want);
        }
    }

    #[test]
    fn labels_are_displayed_plainly() {
        assert_eq!(display_label("man#1"), "man");
        assert_eq!(display_label("living_room#2"), "living room");
        assert_eq!(display_label("moving bus"), "moving bus");
    }

    #[test]
    fn exact_lookup_takes_most_frequent() {
        let tup = t("-", "cut", "tomato", "-");
        let bank = TemplateBank::fit(&[
            (tup.clone(), "The person slices the tomato.".into()),
            (tup.clone(), "Someone cuts the tomato.".into()),
            (tup.clone(), "Someone cuts the tomato.".into()),
        ])
        .unwrap();
        assert_eq!(bank.generate(&tup), "Someone cuts the tomato.");
    }

    #[test]
    fn backoff_substitutes_labels() {
        let bank = TemplateBank::fit(&[(t("-", "cut", "tomato", "kitchen"), "She cuts the tomato in the kitchen.".into())])
            .unwrap();
        assert_eq!(bank.generate(&t("-", "cut", "bread", "garden")), "She cuts the bread in the garden.");
        assert_eq!(bank.generate(&t("-", "wash", "bread", "garden")), "She washes the bread in the garden.");
        assert_eq!(bank.generate(&t("-", "wash", "-", "-")), "Someone washes.");
        assert_eq!(bank.generate(&t("-", "cut", "bread", "-")), "Someone cuts.");
    }

    #[test]
    fn empty_bank_is_an_error() {
        assert_eq!(TemplateBank::fit(&[]).unwrap_err(), BaselineError::EmptyBank);
    }
}
