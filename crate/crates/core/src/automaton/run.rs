use num_traits::Zero;
use thiserror::Error;

use super::{Direction, Po2dta, StateId};
use crate::word::{Rational, TimedWord};

/// Clock values, indexed by clock id.
pub type Valuation = Vec<Rational>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Verdict {
    Accept,
    Reject,
    /// The head left `ρ'`; only possible on an invalid automaton.
    FellOff,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RunError {
    #[error("start position {pos} outside 0..={max}")]
    StartOutOfRange { pos: usize, max: usize },
    #[error("valuation has {got} clocks, automaton has {want}")]
    ValuationSize { got: usize, want: usize },
    #[error("{count} transitions enabled in `{state}` at position {pos}")]
    Nondeterministic {
        state: String,
        pos: usize,
        count: usize,
    },
    #[error("run exceeded {0} steps")]
    StepLimit(usize),
    #[error("head fell off the word in `{state}`")]
    FellOff { state: String },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Config {
    pub state: StateId,
    /// Position in `ρ'`; `▷` is 0.
    pub head: usize,
    pub valuation: Valuation,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunResult {
    pub verdict: Verdict,
    pub valuation: Valuation,
    /// Final head position (the last in-range one for `FellOff`).
    pub head: usize,
    /// Rightmost position visited.
    pub max_head: usize,
    pub trace: Vec<Config>,
}

impl Po2dta {
    /// Runs from `s` with valuation `nu` and the head on position `k` of
    /// `ρ'` (`ρ` is passed without markers).
    pub fn run(&self, word: &TimedWord, nu: Valuation, k: usize) -> Result<RunResult, RunError> {
        self.run_inner(word, nu, k, true)
    }

    /// As [`Po2dta::run`] without recording the trace.
    pub fn run_quiet(
        &self,
        word: &TimedWord,
        nu: Valuation,
        k: usize,
    ) -> Result<RunResult, RunError> {
        self.run_inner(word, nu, k, false)
    }

    pub fn initial_valuation(&self) -> Valuation {
        vec![Rational::zero(); self.clocks.len()]
    }

    /// `ρ ∈ L(A)`: run from `s`, `ν_init`, first letter of `ρ`. `τ1 = 0` is
    /// not enforced; a fell-off run is an error.
    pub fn accepts(&self, word: &TimedWord) -> Result<bool, RunError> {
        let res = self.run_quiet(word, self.initial_valuation(), 1)?;
        match res.verdict {
            Verdict::Accept => Ok(true),
            Verdict::Reject => Ok(false),
            Verdict::FellOff => Err(RunError::FellOff {
                state: self.states[self.start].name.clone(),
            }),
        }
    }

    fn run_inner(
        &self,
        word: &TimedWord,
        mut nu: Valuation,
        k: usize,
        trace: bool,
    ) -> Result<RunResult, RunError> {
        let ext = word.extended();
        let len = ext.len();
        if k >= len {
            return Err(RunError::StartOutOfRange {
                pos: k,
                max: len - 1,
            });
        }
        if nu.len() != self.clocks.len() {
            return Err(RunError::ValuationSize {
                got: nu.len(),
                want: self.clocks.len(),
            });
        }
        let letters: Vec<Option<usize>> = ext.events().iter().map(|e| self.letter_id(e)).collect();
        let stamps = ext.stamps();
        let limit = (self.states.len() + 1) * (len + 1) + 10;

        let mut q = self.start;
        let mut head = k;
        let mut max_head = k;
        let mut configs = vec![];
        for _ in 0..limit {
            if trace {
                configs.push(Config {
                    state: q,
                    head,
                    valuation: nu.clone(),
                });
            }
            if self.is_terminal(q) {
                let verdict = if q == self.accept {
                    Verdict::Accept
                } else {
                    Verdict::Reject
                };
                return Ok(RunResult {
                    verdict,
                    valuation: nu,
                    head,
                    max_head,
                    trace: configs,
                });
            }
            let t = stamps[head];
            let mut fired = None;
            if let Some(l) = letters[head] {
                let mut count = 0;
                for &i in self.indexed(q, l) {
                    if self.transitions[i].guard.holds_fast(&nu, t) {
                        count += 1;
                        fired = Some(i);
                    }
                }
                if count > 1 {
                    return Err(RunError::Nondeterministic {
                        state: self.states[q].name.clone(),
                        pos: head,
                        count,
                    });
                }
            }
            let dir = match fired {
                Some(i) => {
                    let tr = &self.transitions[i];
                    for &c in &tr.resets {
                        nu[c] = t;
                    }
                    q = tr.to;
                    self.states[q].direction
                }
                None => self.states[q].direction,
            };
            let next = match dir {
                None => Some(head),
                Some(Direction::Forward) => (head + 1 < len).then_some(head + 1),
                Some(Direction::Backward) => head.checked_sub(1),
            };
            match next {
                Some(h) => {
                    head = h;
                    max_head = max_head.max(h);
                }
                None => {
                    return Ok(RunResult {
                        verdict: Verdict::FellOff,
                        valuation: nu,
                        head,
                        max_head,
                        trace: configs,
                    })
                }
            }
        }
        Err(RunError::StepLimit(limit))
    }
}
