use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ElementKind {
    SceneHeading,
    CharacterCue,
    Dialogue,
    Description,
}

/// One classified unit of a screenplay.
///
/// `char_offset` counts characters of element text only (layout whitespace
/// excluded), so consecutive elements are contiguous in offset space.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScriptElement {
    pub kind: ElementKind,
    pub text: String,
    pub ordinal: usize,
    pub char_offset: usize,
    /// Speaking character, for dialogue.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub speaker: Option<String>,
}

impl ScriptElement {
    pub fn char_len(&self) -> usize {
        self.text.chars().count()
    }

    pub fn char_end(&self) -> usize {
        self.char_offset + self.char_len()
    }
}

/// Layout dialect. `Auto` inspects the indentation distribution of the file.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScriptFormat {
    #[default]
    Auto,
    /// Cues and dialogue indented relative to action lines.
    Indented,
    /// Everything flush left; a cue is an all-caps line directly above its speech.
    Flush,
}

const SCENE_PREFIXES: [&str; 6] = ["INT.", "EXT.", "INT/EXT", "EXT/INT", "I/E", "INT "];
const MAX_CUE_CHARS: usize = 40;
const MAX_CUE_WORDS: usize = 5;
const ABBREVIATIONS: [&str; 6] = ["mr.", "mrs.", "ms.", "dr.", "st.", "jr."];

struct Line<'a> {
    indent: usize,
    content: &'a str,
}

fn measure(raw: &str) -> (usize, &str) {
    let mut indent = 0;
    for c in raw.chars() {
        match c {
            ' ' => indent += 1,
            '\t' => indent += 8,
            _ => break,
        }
    }
    (indent, raw.trim())
}

fn is_all_caps(s: &str) -> bool {
    s.chars().any(char::is_alphabetic) && !s.chars().any(char::is_lowercase)
}

fn is_scene_heading(s: &str) -> bool {
    if !is_all_caps(s) {
        return false;
    }
    let body = s.trim_start_matches(|c: char| c.is_ascii_digit() || c == ' ' || c == '.');
    let body = if body.len() < s.len() && !body.is_empty() { body } else { s };
    SCENE_PREFIXES.iter().any(|p| body.starts_with(p)) || body == "INT" || body == "EXT"
}

fn strip_extension(s: &str) -> &str {
    match s.find('(') {
        Some(i) => s[..i].trim(),
        None => s,
    }
}

fn is_cue_candidate(s: &str) -> bool {
    let name = strip_extension(s);
    is_all_caps(name)
        && !is_scene_heading(s)
        && s.chars().count() <= MAX_CUE_CHARS
        && name.split_whitespace().count() <= MAX_CUE_WORDS
        && !s.ends_with(':')
        && !name.ends_with(['.', '!', '?'])
}

fn is_parenthetical(s: &str) -> bool {
    s.starts_with('(') && s.ends_with(')')
}

/// Split prose into sentences at `.`, `!` or `?` followed by whitespace.
pub(crate) fn split_sentences(text: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut current = String::new();
    let words: Vec<&str> = text.split_whitespace().collect();
    for (i, w) in words.iter().enumerate() {
        if !current.is_empty() {
            current.push(' ');
        }
        current.push_str(w);
        let bare = w.trim_end_matches(['"', '\'', ')']);
        let ends = bare.ends_with(['.', '!', '?'])
            && !ABBREVIATIONS.contains(&bare.to_lowercase().as_str());
        let next_starts_upper = words
            .get(i + 1)
            .and_then(|n| n.trim_start_matches(['"', '\'', '(']).chars().next())
            .is_none_or(|c| c.is_uppercase() || c.is_ascii_digit());
        if ends && next_starts_upper {
            out.push(std::mem::take(&mut current));
        }
    }
    if !current.is_empty() {
        out.push(current);
    }
    out
}

fn detect_format(lines: &[Line<'_>]) -> (ScriptFormat, usize) {
    let prose_indent = lines
        .iter()
        .filter(|l| !l.content.is_empty() && !is_all_caps(l.content))
        .map(|l| l.indent)
        .min()
        .unwrap_or(0);
    let indented_cues = lines
        .iter()
        .filter(|l| is_cue_candidate(l.content) && l.indent > prose_indent + 2)
        .count();
    let format = if indented_cues > 0 {
        ScriptFormat::Indented
    } else {
        ScriptFormat::Flush
    };
    (format, prose_indent)
}

pub fn parse_script(text: &str) -> Vec<ScriptElement> {
    parse_script_with(text, ScriptFormat::Auto)
}

#[derive(Debug, PartialEq)]
enum State {
    Free,
    AfterCue,
    InDialogue,
}

/// Classify screenplay lines into headings, cues, dialogue and description
/// sentences using layout heuristics.
pub fn parse_script_with(text: &str, format: ScriptFormat) -> Vec<ScriptElement> {
    let text = text.strip_prefix('\u{feff}').unwrap_or(text);
    let lines: Vec<Line<'_>> = text
        .lines()
        .map(|raw| {
            let (indent, content) = measure(raw);
            Line { indent, content }
        })
        .collect();
    let (detected, prose_indent) = detect_format(&lines);
    let format = match format {
        ScriptFormat::Auto => detected,
        f => f,
    };
    let deep = |l: &Line<'_>| l.indent > prose_indent + 2;

    let mut builder = Builder::default();
    let mut state = State::Free;
    for (i, line) in lines.iter().enumerate() {
        let c = line.content;
        if c.is_empty() {
            if state == State::AfterCue {
                builder.demote_cue();
            }
            builder.flush_description();
            builder.flush_dialogue();
            state = State::Free;
            continue;
        }
        if is_scene_heading(c) {
            if state == State::AfterCue {
                builder.demote_cue();
            }
            builder.flush_description();
            builder.flush_dialogue();
            builder.push(ElementKind::SceneHeading, c.to_string());
            state = State::Free;
            continue;
        }
        let in_speech = matches!(state, State::AfterCue | State::InDialogue);
        let speech_line = match format {
            ScriptFormat::Flush => in_speech,
            _ => in_speech && (deep(line) || is_parenthetical(c)),
        };
        if speech_line {
            if !is_parenthetical(c) {
                builder.add_dialogue_line(c);
                state = State::InDialogue;
            }
            continue;
        }
        let cue_here = is_cue_candidate(c)
            && match format {
                ScriptFormat::Flush => lines
                    .get(i + 1)
                    .is_some_and(|n| !n.content.is_empty() && !is_all_caps(n.content)),
                _ => deep(line),
            };
        if cue_here {
            if state == State::AfterCue {
                builder.demote_cue();
            }
            builder.flush_description();
            builder.flush_dialogue();
            builder.push_cue(strip_extension(c).to_string(), c.to_string());
            state = State::AfterCue;
            continue;
        }
        if state == State::AfterCue {
            builder.demote_cue();
        }
        builder.flush_dialogue();
        builder.add_description_line(c);
        state = State::Free;
    }
    if state == State::AfterCue {
        builder.demote_cue();
    }
    builder.flush_description();
    builder.flush_dialogue();
    builder.finish()
}

#[derive(Default)]
struct Builder {
    elements: Vec<(ElementKind, String, Option<String>)>,
    description: Vec<String>,
    dialogue: Vec<String>,
    speaker: Option<String>,
}

impl Builder {
    fn push(&mut self, kind: ElementKind, text: String) {
        self.elements.push((kind, text, None));
    }

    fn push_cue(&mut self, name: String, raw: String) {
        self.speaker = Some(name);
        self.elements.push((ElementKind::CharacterCue, raw, None));
    }

    /// A cue with no speech under it was really an action line.
    fn demote_cue(&mut self) {
        if let Some(last) = self.elements.last_mut() {
            if last.0 == ElementKind::CharacterCue {
                let text = std::mem::take(&mut last.1);
                self.elements.pop();
                self.description.push(text);
            }
        }
        self.speaker = None;
    }

    fn add_dialogue_line(&mut self, line: &str) {
        self.dialogue.push(line.to_string());
    }

    fn add_description_line(&mut self, line: &str) {
        self.description.push(line.to_string());
    }

    fn flush_dialogue(&mut self) {
        if self.dialogue.is_empty() {
            return;
        }
        let text = self.dialogue.join(" ");
        self.dialogue.clear();
        self.elements
            .push((ElementKind::Dialogue, text, self.speaker.clone()));
    }

    fn flush_description(&mut self) {
        if self.description.is_empty() {
            return;
        }
        let paragraph = self.description.join(" ");
        self.description.clear();
        for sentence in split_sentences(&paragraph) {
            self.elements.push((ElementKind::Description, sentence, None));
        }
    }

    fn finish(self) -> Vec<ScriptElement> {
        let mut offset = 0;
        self.elements
            .into_iter()
            .enumerate()
            .map(|(ordinal, (kind, text, speaker))| {
                let el = ScriptElement {
                    kind,
                    char_offset: offset,
                    ordinal,
                    speaker,
                    text,
                };
                offset += el.char_len();
                el
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use ElementKind::*;

    fn kinds(els: &[ScriptElement]) -> Vec<(ElementKind, &str)> {
        els.iter().map(|e| (e.kind, e.text.as_str())).collect()
    }

    #[test]
    fn scene_heading_rule() {
        let e = parse_script("INT. HOUSE - NIGHT");
        assert_eq!(kinds(&e), vec![(SceneHeading, "INT. HOUSE - NIGHT")]);
        assert!(is_scene_heading("12 EXT. STREET - DAY"));
        assert!(!is_scene_heading("Int. house"));
    }

    #[test]
    fn cue_then_dialogue() {
        let text = "Abby walks in.\n\n               ABBY\n          Hi.\n";
        let e = parse_script(text);
        assert_eq!(
            kinds(&e),
            vec![(Description, "Abby walks in."), (CharacterCue, "ABBY"), (Dialogue, "Hi.")]
        );
        assert_eq!(e[2].speaker.as_deref(), Some("ABBY"));
    }

    #[test]
    fn flush_dialect() {
        let text = "INT. KITCHEN - DAY\n\nMIKE\nWhere were you?\n\nHe drops the bag. It spills.\n";
        let e = parse_script(text);
        assert_eq!(
            kinds(&e),
            vec![
                (SceneHeading, "INT. KITCHEN - DAY"),
                (CharacterCue, "MIKE"),
                (Dialogue, "Where were you?"),
                (Description, "He drops the bag."),
                (Description, "It spills."),
            ]
        );
    }

    #[test]
    fn caps_line_without_speech_is_description() {
        let text = "She waits.\n\n              BANG!\n\nThe door flies open.\n";
        let e = parse_script_with(text, ScriptFormat::Indented);
        assert!(e.iter().all(|el| el.kind == Description));
    }

    #[test]
    fn offsets_are_contiguous_and_ordinals_increase() {
        let text = "INT. A - DAY\n\nOne. Two.\n\n          BOB\n     Hello there.\n";
        let e = parse_script(text);
        for w in e.windows(2) {
            assert_eq!(w[0].char_end(), w[1].char_offset);
            assert!(w[0].ordinal < w[1].ordinal);
        }
    }

    #[test]
    fn sentence_splitting() {
        assert_eq!(
            split_sentences("Mr. Smith enters. He sits down! Does he? yes."),
            vec!["Mr. Smith enters.", "He sits down!", "Does he? yes."]
        );
    }
}
