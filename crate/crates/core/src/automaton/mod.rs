//! Partially ordered two-way deterministic timed automata (po2DTA).
//!
//! The head runs over the end-marked word `ρ' = ▷ ρ ◁`. States carry a rank;
//! the partial order is `q' < q ⇔ rank(q') < rank(q)`, so every progress
//! transition must go to a strictly lower rank.

mod compose;
mod dot;
pub mod guard;
mod json;
mod run;
mod validate;

use std::collections::HashMap;

use thiserror::Error;

use crate::word::{Alphabet, Symbol};

pub use compose::sequential_compose;
pub use guard::{Bound, ClockId, Constraint, DiffRange, Form, Guard, GuardError, GuardExpr, Rel};
pub use json::{AutomatonDoc, StateDoc, TransitionDoc};
pub use run::{Config, RunError, RunResult, Valuation, Verdict};
pub use validate::Violation;

pub type StateId = usize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Direction {
    /// `Q_L`: the head moves right.
    Forward,
    /// `Q_R`: the head moves left.
    Backward,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct State {
    pub name: String,
    /// `None` only for the terminal states.
    pub direction: Option<Direction>,
    pub rank: u32,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Transition {
    pub from: StateId,
    pub letter: Symbol,
    pub guard: Guard,
    pub resets: Vec<ClockId>,
    pub to: StateId,
}

#[derive(Debug, Error)]
pub enum AutomatonError {
    #[error("invalid automaton: {}", .0.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; "))]
    Invalid(Vec<Violation>),
    #[error("unknown state `{0}`")]
    UnknownState(String),
    #[error("duplicate state `{0}`")]
    DuplicateState(String),
    #[error("cannot compose: {0}")]
    CompositionUnsupported(String),
    #[error(transparent)]
    Guard(#[from] GuardError),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

#[derive(Clone, Debug)]
pub struct Po2dta {
    alphabet: Alphabet,
    states: Vec<State>,
    clocks: Vec<String>,
    transitions: Vec<Transition>,
    start: StateId,
    accept: StateId,
    reject: StateId,
    letters: HashMap<Symbol, usize>,
    // index[state][letter] -> transition indices
    index: Vec<Vec<Vec<usize>>>,
}

impl Po2dta {
    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn states(&self) -> &[State] {
        &self.states
    }

    pub fn state(&self, id: StateId) -> &State {
        &self.states[id]
    }

    pub fn state_id(&self, name: &str) -> Option<StateId> {
        self.states.iter().position(|s| s.name == name)
    }

    pub fn clocks(&self) -> &[String] {
        &self.clocks
    }

    pub fn clock_id(&self, name: &str) -> Option<ClockId> {
        self.clocks.iter().position(|c| c == name)
    }

    pub fn transitions(&self) -> &[Transition] {
        &self.transitions
    }

    pub fn start(&self) -> StateId {
        self.start
    }

    pub fn accept(&self) -> StateId {
        self.accept
    }

    pub fn reject(&self) -> StateId {
        self.reject
    }

    pub fn is_terminal(&self, q: StateId) -> bool {
        q == self.accept || q == self.reject
    }

    pub fn num_states(&self) -> usize {
        self.states.len()
    }

    pub fn num_clocks(&self) -> usize {
        self.clocks.len()
    }

    /// Transitions leaving `q` on `letter`.
    pub fn outgoing(&self, q: StateId, letter: &Symbol) -> impl Iterator<Item = &Transition> + '_ {
        let ids: &[usize] = match self.letters.get(letter) {
            Some(&l) => &self.index[q][l],
            None => &[],
        };
        ids.iter().map(move |&i| &self.transitions[i])
    }

    /// All transitions leaving `q`.
    pub fn outgoing_all(&self, q: StateId) -> impl Iterator<Item = &Transition> + '_ {
        self.transitions.iter().filter(move |t| t.from == q)
    }

    pub(crate) fn letter_id(&self, letter: &Symbol) -> Option<usize> {
        self.letters.get(letter).copied()
    }

    pub(crate) fn indexed(&self, q: StateId, letter: usize) -> &[usize] {
        &self.index[q][letter]
    }

    /// Largest guard constant.
    pub fn max_constant(&self) -> u64 {
        self.transitions
            .iter()
            .flat_map(|t| t.guard.constraints().iter().map(|c| c.c))
            .max()
            .unwrap_or(0)
    }

    /// Same automaton with accept and reject swapped.
    pub fn complement(&self) -> Po2dta {
        let mut out = self.clone();
        std::mem::swap(&mut out.accept, &mut out.reject);
        out
    }

    /// Accepts every word: a forward start state that fires on the first
    /// cell that is not `▷`.
    pub fn trivial_accept(sigma: &Alphabet) -> Po2dta {
        let mut b = Builder::new(sigma.clone());
        let s = b.state("s", Some(Direction::Forward), 1);
        let t = b.state("t", None, 0);
        let r = b.state("r", None, 0);
        for a in sigma.iter().cloned().chain([Symbol::end_marker()]) {
            b.transition(s, a, Guard::tt(), vec![], t);
        }
        b.build(s, t, r).expect("trivial automaton is valid")
    }

    fn from_parts(
        alphabet: Alphabet,
        states: Vec<State>,
        clocks: Vec<String>,
        transitions: Vec<Transition>,
        start: StateId,
        accept: StateId,
        reject: StateId,
    ) -> Po2dta {
        let mut letters = HashMap::new();
        for (i, a) in [Symbol::start_marker(), Symbol::end_marker()]
            .into_iter()
            .chain(alphabet.iter().cloned())
            .enumerate()
        {
            letters.insert(a, i);
        }
        // letters used by transitions but missing from Σ still get a slot so
        // the validator can report them
        for t in &transitions {
            let n = letters.len();
            letters.entry(t.letter.clone()).or_insert(n);
        }
        let mut index = vec![vec![Vec::new(); letters.len()]; states.len()];
        for (i, t) in transitions.iter().enumerate() {
            if t.from < states.len() {
                index[t.from][letters[&t.letter]].push(i);
            }
        }
        Po2dta {
            alphabet,
            states,
            clocks,
            transitions,
            start,
            accept,
            reject,
            letters,
            index,
        }
    }
}

/// Incremental construction; [`Builder::build`] validates.
#[derive(Clone, Debug)]
pub struct Builder {
    alphabet: Alphabet,
    states: Vec<State>,
    clocks: Vec<String>,
    transitions: Vec<Transition>,
}

impl Builder {
    pub fn new(alphabet: Alphabet) -> Self {
        Builder {
            alphabet,
            states: vec![],
            clocks: vec![],
            transitions: vec![],
        }
    }

    pub fn state(
        &mut self,
        name: impl Into<String>,
        direction: Option<Direction>,
        rank: u32,
    ) -> StateId {
        self.states.push(State {
            name: name.into(),
            direction,
            rank,
        });
        self.states.len() - 1
    }

    /// Get-or-create by name.
    pub fn clock(&mut self, name: &str) -> ClockId {
        match self.clocks.iter().position(|c| c == name) {
            Some(i) => i,
            None => {
                self.clocks.push(name.to_string());
                self.clocks.len() - 1
            }
        }
    }

    pub fn transition(
        &mut self,
        from: StateId,
        letter: Symbol,
        guard: Guard,
        resets: Vec<ClockId>,
        to: StateId,
    ) {
        self.transitions.push(Transition {
            from,
            letter,
            guard,
            resets,
            to,
        });
    }

    pub fn build(
        self,
        start: StateId,
        accept: StateId,
        reject: StateId,
    ) -> Result<Po2dta, AutomatonError> {
        let a = self.build_unchecked(start, accept, reject);
        let violations = a.validate();
        if violations.is_empty() {
            Ok(a)
        } else {
            Err(AutomatonError::Invalid(violations))
        }
    }

    /// Skips validation; for tests that need broken automata.
    pub fn build_unchecked(self, start: StateId, accept: StateId, reject: StateId) -> Po2dta {
        Po2dta::from_parts(
            self.alphabet,
            self.states,
            self.clocks,
            self.transitions,
            start,
            accept,
            reject,
        )
    }
}

impl From<&Po2dta> for Builder {
    fn from(a: &Po2dta) -> Self {
        Builder {
            alphabet: a.alphabet.clone(),
            states: a.states.clone(),
            clocks: a.clocks.clone(),
            transitions: a.transitions.clone(),
        }
    }
}
