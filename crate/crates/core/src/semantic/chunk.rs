use std::fmt;

use serde::{Deserialize, Serialize};

use super::clause::Clause;
use super::tagger::{PosTagger, Tag};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ChunkKind {
    #[serde(rename = "NP")]
    Np,
    #[serde(rename = "VP")]
    Vp,
    #[serde(rename = "PP")]
    Pp,
}

impl fmt::Display for ChunkKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ChunkKind::Np => "NP",
            ChunkKind::Vp => "VP",
            ChunkKind::Pp => "PP",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Chunk {
    pub kind: ChunkKind,
    pub tokens: Vec<String>,
    pub tags: Vec<Tag>,
    /// Index into `tokens`.
    pub head: usize,
}

impl Chunk {
    fn new(kind: ChunkKind, tokens: Vec<String>, tags: Vec<Tag>) -> Self {
        let head = match kind {
            ChunkKind::Np => tags
                .iter()
                .rposition(|t| *t == Tag::Noun)
                .or_else(|| tags.iter().rposition(|t| *t == Tag::Pron))
                .unwrap_or(tokens.len() - 1),
            ChunkKind::Vp => tags
                .iter()
                .rposition(|t| *t == Tag::Verb)
                .or_else(|| tags.iter().rposition(|t| *t == Tag::Aux))
                .unwrap_or(tokens.len() - 1),
            ChunkKind::Pp => 0,
        };
        Self {
            kind,
            tokens,
            tags,
            head,
        }
    }

    pub fn text(&self) -> String {
        self.tokens.join(" ")
    }
}

impl fmt::Display for Chunk {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{} {}]", self.kind, self.text())
    }
}

/// Head token: rightmost noun of an NP, last verb of a VP, the
/// preposition of a PP.
pub fn head_word(chunk: &Chunk) -> &str {
    &chunk.tokens[chunk.head]
}

/// Deterministic chunker over tags.
///
/// NP: determiners, numbers, adjectives and nouns, or a lone pronoun;
/// a determiner after a noun starts a new NP and `NP and NP` merges.
/// VP: auxiliaries/adverbs, verb, particles, `to` + verb continuations.
/// PP: a lone preposition. Other tokens are skipped.
pub fn chunk_clause(clause: &Clause, tagger: &dyn PosTagger) -> Vec<Chunk> {
    let tokens = clause.tokens();
    let tags = tagger.tag(tokens);
    let n = tokens.len();
    let mut chunks: Vec<Chunk> = Vec::new();
    let mut i = 0;
    let span = |a: usize, b: usize| (tokens[a..b].to_vec(), tags[a..b].to_vec());
    while i < n {
        match tags[i] {
            Tag::Prep | Tag::To => {
                let (t, g) = span(i, i + 1);
                chunks.push(Chunk::new(ChunkKind::Pp, t, g));
                i += 1;
            }
            Tag::Aux | Tag::Verb | Tag::Adv => {
                let mut j = i;
                while j < n && matches!(tags[j], Tag::Aux | Tag::Adv) {
                    j += 1;
                }
                if j < n && tags[j] == Tag::Verb {
                    j += 1;
                    loop {
                        if j < n && matches!(tags[j], Tag::Verb | Tag::Particle) {
                            j += 1;
                        } else if j + 1 < n && tags[j] == Tag::To && tags[j + 1] == Tag::Verb {
                            j += 2;
                        } else {
                            break;
                        }
                    }
                } else if !tags[i..j].contains(&Tag::Aux) {
                    // adverbs with no verb to attach to
                    i = j;
                    continue;
                }
                let (t, g) = span(i, j);
                chunks.push(Chunk::new(ChunkKind::Vp, t, g));
                i = j;
            }
            Tag::Pron => {
                let (t, g) = span(i, i + 1);
                push_np(&mut chunks, Chunk::new(ChunkKind::Np, t, g), tokens, &tags, i);
                i += 1;
            }
            Tag::Det | Tag::Num | Tag::Adj | Tag::Noun => {
                let mut j = i;
                let mut seen_noun = false;
                while j < n {
                    match tags[j] {
                        Tag::Det | Tag::Num if seen_noun => break,
                        Tag::Det | Tag::Num | Tag::Adj => {}
                        Tag::Noun => seen_noun = true,
                        _ => break,
                    }
                    j += 1;
                }
                let (t, g) = span(i, j);
                push_np(&mut chunks, Chunk::new(ChunkKind::Np, t, g), tokens, &tags, i);
                i = j;
            }
            _ => i += 1,
        }
    }
    chunks
}

/// Append an NP, merging it into a preceding `NP and` coordination.
fn push_np(chunks: &mut Vec<Chunk>, np: Chunk, tokens: &[String], tags: &[Tag], start: usize) {
    let joined = start >= 2
        && tags[start - 1] == Tag::Conj
        && chunks.last().is_some_and(|c| {
            c.kind == ChunkKind::Np && c.tokens.last() == Some(&tokens[start - 2])
        });
    if joined {
        let prev = chunks.pop().expect("checked above");
        let mut t = prev.tokens;
        let mut g = prev.tags;
        t.push(tokens[start - 1].clone());
        g.push(Tag::Conj);
        t.extend(np.tokens);
        g.extend(np.tags);
        chunks.push(Chunk::new(ChunkKind::Np, t, g));
    } else {
        chunks.push(np);
    }
}
