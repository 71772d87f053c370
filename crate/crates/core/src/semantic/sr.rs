use std::fmt;

use serde::{Deserialize, Serialize};

use super::lexicon::Sense;
use super::matching::RoleAssignment;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum LabelMode {
    #[default]
    Text,
    Sense,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SrSlot {
    Subject,
    Verb,
    Object,
    Location,
}

impl SrSlot {
    pub const ALL: [SrSlot; 4] = [SrSlot::Subject, SrSlot::Verb, SrSlot::Object, SrSlot::Location];
}

impl fmt::Display for SrSlot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SrSlot::Subject => "subject",
            SrSlot::Verb => "verb",
            SrSlot::Object => "object",
            SrSlot::Location => "location",
        })
    }
}

impl std::str::FromStr for SrSlot {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "subject" => Ok(SrSlot::Subject),
            "verb" => Ok(SrSlot::Verb),
            "object" => Ok(SrSlot::Object),
            "location" => Ok(SrSlot::Location),
            other => Err(format!("unknown slot {other:?}")),
        }
    }
}

/// Slot a frame role feeds, `None` for roles outside the tuple.
pub fn role_group(role: &str) -> Option<SrSlot> {
    match role {
        "Agent" | "Experiencer" => Some(SrSlot::Subject),
        "Action" => Some(SrSlot::Verb),
        "Patient" | "Theme" | "Stimulus" => Some(SrSlot::Object),
        "Location" | "Destination" | "Source" => Some(SrSlot::Location),
        _ => None,
    }
}

/// ⟨SUBJECT, VERB, OBJECT, LOCATION⟩.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SrTuple {
    pub subject: Option<String>,
    pub verb: String,
    pub object: Option<String>,
    pub location: Option<String>,
    pub mode: LabelMode,
}

impl SrTuple {
    pub fn verb_only(verb: String, mode: LabelMode) -> Self {
        Self {
            subject: None,
            verb,
            object: None,
            location: None,
            mode,
        }
    }

    pub fn get(&self, slot: SrSlot) -> Option<&str> {
        match slot {
            SrSlot::Subject => self.subject.as_deref(),
            SrSlot::Verb => Some(&self.verb),
            SrSlot::Object => self.object.as_deref(),
            SrSlot::Location => self.location.as_deref(),
        }
    }

    pub fn set(&mut self, slot: SrSlot, label: Option<String>) {
        match slot {
            SrSlot::Subject => self.subject = label,
            SrSlot::Verb => {
                if let Some(l) = label {
                    self.verb = l;
                }
            }
            SrSlot::Object => self.object = label,
            SrSlot::Location => self.location = label,
        }
    }
}

impl fmt::Display for SrTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let o = |s: &Option<String>| s.clone().unwrap_or_else(|| "-".into());
        write!(
            f,
            "<{}, {}, {}, {}>",
            o(&self.subject),
            self.verb,
            o(&self.object),
            o(&self.location)
        )
    }
}

/// Sense label of a verb or noun as used in tuples.
pub fn sense_label(concept: &Sense) -> String {
    concept.to_string()
}

/// Group roles into tuple slots. The first role to reach a slot fills it;
/// roles that map to no slot are returned in the second element.
pub fn to_sr_with_dropped(assignment: &RoleAssignment, mode: LabelMode) -> (SrTuple, Vec<String>) {
    let mut tuple = SrTuple::verb_only(String::new(), mode);
    let mut dropped = Vec::new();
    for b in &assignment.bindings {
        let Some(slot) = role_group(&b.role) else {
            dropped.push(b.role.clone());
            continue;
        };
        let label = match mode {
            LabelMode::Text => b.text.clone(),
            LabelMode::Sense => sense_label(&b.concept),
        };
        if slot == SrSlot::Verb {
            tuple.verb = label;
        } else if tuple.get(slot).is_none() {
            tuple.set(slot, Some(label));
        }
    }
    (tuple, dropped)
}

pub fn to_sr(assignment: &RoleAssignment, mode: LabelMode) -> SrTuple {
    to_sr_with_dropped(assignment, mode).0
}
