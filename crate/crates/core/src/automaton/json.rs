//! JSON document form. Markers are written `|>` and `<|`.

use serde::{Deserialize, Serialize};

use super::{AutomatonError, Builder, Direction, Guard, Po2dta};
use crate::word::{Symbol, END_MARKER, START_MARKER};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AutomatonDoc {
    pub alphabet: Vec<String>,
    pub states: Vec<StateDoc>,
    pub clocks: Vec<String>,
    pub transitions: Vec<TransitionDoc>,
    pub start: String,
    pub accept: String,
    pub reject: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StateDoc {
    pub name: String,
    /// `"forward"`, `"backward"` or null for terminals.
    pub direction: Option<String>,
    pub rank: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TransitionDoc {
    pub from: String,
    pub letter: String,
    pub guard: String,
    #[serde(default)]
    pub resets: Vec<String>,
    pub to: String,
}

pub(crate) fn letter_to_text(s: &Symbol) -> String {
    match s.as_str() {
        START_MARKER => "|>".into(),
        END_MARKER => "<|".into(),
        other => other.into(),
    }
}

pub(crate) fn letter_from_text(s: &str) -> Symbol {
    match s {
        "|>" | START_MARKER => Symbol::start_marker(),
        "<|" | END_MARKER => Symbol::end_marker(),
        other => Symbol::new(other),
    }
}

impl Po2dta {
    pub fn to_doc(&self) -> AutomatonDoc {
        AutomatonDoc {
            alphabet: self.alphabet.iter().map(|a| a.to_string()).collect(),
            states: self
                .states
                .iter()
                .map(|s| StateDoc {
                    name: s.name.clone(),
                    direction: s.direction.map(|d| match d {
                        Direction::Forward => "forward".into(),
                        Direction::Backward => "backward".into(),
                    }),
                    rank: s.rank,
                })
                .collect(),
            clocks: self.clocks.clone(),
            transitions: self
                .transitions
                .iter()
                .map(|t| TransitionDoc {
                    from: self.states[t.from].name.clone(),
                    letter: letter_to_text(&t.letter),
                    guard: t.guard.display_with(&self.clocks).to_string(),
                    resets: t.resets.iter().map(|&c| self.clocks[c].clone()).collect(),
                    to: self.states[t.to].name.clone(),
                })
                .collect(),
            start: self.states[self.start].name.clone(),
            accept: self.states[self.accept].name.clone(),
            reject: self.states[self.reject].name.clone(),
        }
    }

    /// Builds and validates.
    pub fn from_doc(doc: &AutomatonDoc) -> Result<Po2dta, AutomatonError> {
        let mut b = Builder::new(doc.alphabet.iter().map(|a| Symbol::new(a)).collect());
        for c in &doc.clocks {
            b.clock(c);
        }
        for s in &doc.states {
            if b.states.iter().any(|t| t.name == s.name) {
                return Err(AutomatonError::DuplicateState(s.name.clone()));
            }
            let direction = match s.direction.as_deref() {
                None => None,
                Some("forward") => Some(Direction::Forward),
                Some("backward") => Some(Direction::Backward),
                Some(other) => {
                    return Err(AutomatonError::Guard(super::GuardError::Syntax {
                        text: other.into(),
                        reason: "direction must be forward, backward or null".into(),
                    }))
                }
            };
            b.state(s.name.clone(), direction, s.rank);
        }
        let state = |b: &Builder, n: &str| {
            b.states
                .iter()
                .position(|s| s.name == n)
                .ok_or_else(|| AutomatonError::UnknownState(n.into()))
        };
        for t in &doc.transitions {
            let clocks = b.clocks.clone();
            let mut lookup = |n: &str| clocks.iter().position(|c| c == n);
            let guard = Guard::parse(&t.guard, &mut lookup)?;
            let resets = t
                .resets
                .iter()
                .map(|r| lookup(r).ok_or_else(|| super::GuardError::UnknownClockName(r.clone())))
                .collect::<Result<Vec<_>, _>>()?;
            let from = state(&b, &t.from)?;
            let to = state(&b, &t.to)?;
            b.transition(from, letter_from_text(&t.letter), guard, resets, to);
        }
        let start = state(&b, &doc.start)?;
        let accept = state(&b, &doc.accept)?;
        let reject = state(&b, &doc.reject)?;
        b.build(start, accept, reject)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_doc()).expect("automaton document serializes")
    }

    pub fn from_json(text: &str) -> Result<Po2dta, AutomatonError> {
        Po2dta::from_doc(&serde_json::from_str(text)?)
    }
}
