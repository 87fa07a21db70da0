//! po2DTA → `MITL[F∞,P∞]` over `Σ ∪ {▷,◁}`.
//!
//! `Enable(π)` holds exactly where the run fires the last edge of the
//! progress path `π`, having fired all of `π` before. Guards become
//! formulas about the unique position where each clock was last reset,
//! so one interval on `T − x` splits into a past part (reset earlier), a
//! present part and a future part (reset later, reached by a backward
//! sweep).

use std::collections::HashMap;

use thiserror::Error;

use crate::automaton::{Bound, ClockId, DiffRange, Direction, Guard, Po2dta, StateId};
use crate::formula::Formula;
use crate::interval::Interval;
use crate::oracle::{holds_at, OracleError};
use crate::word::{Rational, Symbol, TimedWord};

#[derive(Debug, Error)]
pub enum ExtractError {
    #[error("edge {index} starts at `{found}` but the path is at `{expected}`")]
    IllChained {
        index: usize,
        expected: String,
        found: String,
    },
    #[error("no transition {0}")]
    UnknownTransition(usize),
}

/// Sequence of transition indices, starting at the start state.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ProgressPath {
    pub edges: Vec<usize>,
}

impl ProgressPath {
    pub fn new(edges: Vec<usize>) -> Self {
        ProgressPath { edges }
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    /// State the run is in after the path.
    pub fn end(&self, a: &Po2dta) -> StateId {
        self.edges
            .last()
            .map_or(a.start(), |&e| a.transitions()[e].to)
    }

    pub fn check(&self, a: &Po2dta) -> Result<(), ExtractError> {
        let mut at = a.start();
        for (index, &e) in self.edges.iter().enumerate() {
            let tr = a
                .transitions()
                .get(e)
                .ok_or(ExtractError::UnknownTransition(e))?;
            if tr.from != at {
                return Err(ExtractError::IllChained {
                    index,
                    expected: a.state(at).name.clone(),
                    found: a.state(tr.from).name.clone(),
                });
            }
            at = tr.to;
        }
        Ok(())
    }

    /// Prefix ending with the last edge that resets `x`; empty if none does.
    pub fn pref(&self, a: &Po2dta, x: ClockId) -> ProgressPath {
        let cut = self
            .edges
            .iter()
            .rposition(|&e| a.transitions()[e].resets.contains(&x))
            .map_or(0, |i| i + 1);
        ProgressPath::new(self.edges[..cut].to_vec())
    }

    pub fn push(&self, e: usize) -> ProgressPath {
        let mut edges = self.edges.clone();
        edges.push(e);
        ProgressPath { edges }
    }
}

/// `trans(q)`: the letter/guard pairs leaving `q`.
pub fn trans(a: &Po2dta, q: StateId) -> Vec<(Symbol, Guard)> {
    a.outgoing_all(q)
        .map(|t| (t.letter.clone(), t.guard.clone()))
        .collect()
}

/// All paths of progress edges from the start state to the accepting state.
pub fn accepting_paths(a: &Po2dta) -> Vec<ProgressPath> {
    fn walk(a: &Po2dta, q: StateId, path: &mut Vec<usize>, out: &mut Vec<ProgressPath>) {
        for (i, t) in a.transitions().iter().enumerate() {
            if t.from != q {
                continue;
            }
            path.push(i);
            if t.to == a.accept() {
                out.push(ProgressPath::new(path.clone()));
            } else if t.to != a.reject() {
                walk(a, t.to, path, out);
            }
            path.pop();
        }
    }
    let mut out = Vec::new();
    walk(a, a.start(), &mut Vec::new(), &mut out);
    out
}

fn lower(b: Bound) -> Interval {
    let v = b.value.max(0) as u64;
    if b.inclusive {
        Interval::at_least(v)
    } else {
        Interval::greater_than(v)
    }
}

fn above(b: Bound) -> Interval {
    let v = b.value.max(0) as u64;
    if b.inclusive {
        Interval::greater_than(v)
    } else {
        Interval::at_least(v)
    }
}

/// `f` holds at exactly one earlier (`future == false`) or later position,
/// at a time distance in `s ⊆ [0,∞)`.
fn at_distance(s: DiffRange, f: &Formula, future: bool) -> Formula {
    let m = |iv, f: Formula| {
        if future {
            Formula::f(iv, f)
        } else {
            Formula::p(iv, f)
        }
    };
    let lo = s.lo.expect("clipped at 0");
    let mut parts = vec![m(lower(lo), f.clone())];
    if let Some(hi) = s.hi {
        parts.push(Formula::not(m(above(hi), f.clone())));
    }
    Formula::and_all(parts)
}

/// Memoizing builder for `Enable` and `gsat` over one automaton.
pub struct Extractor<'a> {
    a: &'a Po2dta,
    enable: HashMap<ProgressPath, Formula>,
}

impl<'a> Extractor<'a> {
    pub fn new(a: &'a Po2dta) -> Self {
        Extractor {
            a,
            enable: HashMap::new(),
        }
    }

    /// Holds iff `T − x ∈ range` where `x` was last reset where `f` holds.
    fn clock_in(&self, range: DiffRange, f: &Formula) -> Formula {
        if range.is_full() {
            return Formula::tt();
        }
        let nonneg = DiffRange::at_least(0);
        let mut parts = Vec::new();
        let past = range.intersect(&nonneg);
        if !past.is_empty() {
            parts.push(at_distance(past, f, false));
        }
        if range.contains(Rational::from_integer(0)) {
            parts.push(f.clone());
        }
        let mirrored = DiffRange::new(
            range.hi.map(|b| Bound {
                value: -b.value,
                ..b
            }),
            range.lo.map(|b| Bound {
                value: -b.value,
                ..b
            }),
        )
        .intersect(&nonneg);
        if !mirrored.is_empty() {
            parts.push(at_distance(mirrored, f, true));
        }
        Formula::or_all(parts)
    }

    /// Holds at `p` iff `ν_π, τ_p ⊨ g` for a run that has traversed `π`.
    pub fn gsat(&mut self, path: &ProgressPath, g: &Guard) -> Formula {
        let mut parts = Vec::new();
        for (x, range) in g.ranges() {
            if range.is_empty() {
                return Formula::ff();
            }
            let f = self.enable(&path.pref(self.a, x));
            parts.push(self.clock_in(range, &f));
        }
        Formula::and_all(parts)
    }

    /// Positions the state after `path` may read, before any firing.
    fn reach(&mut self, path: &ProgressPath) -> Formula {
        let e = self.enable(path);
        let q = path.end(self.a);
        match self.a.state(q).direction {
            Some(Direction::Forward) => Formula::p(Interval::anywhere(), e),
            // the run starts on cell 1, so an initial backward sweep sees 1 and 0
            Some(Direction::Backward) if path.is_empty() => Formula::not(Formula::p(
                Interval::anywhere(),
                Formula::p(Interval::anywhere(), Formula::tt()),
            )),
            Some(Direction::Backward) => Formula::f(Interval::anywhere(), e),
            None => Formula::ff(),
        }
    }

    /// Assumes a chained path (see [`ProgressPath::check`]).
    pub fn enable(&mut self, path: &ProgressPath) -> Formula {
        if let Some(f) = self.enable.get(path) {
            return f.clone();
        }
        let f = match path.edges.split_last() {
            None => Formula::at_first(),
            Some((&last, init)) => {
                let prev = ProgressPath::new(init.to_vec());
                let q = prev.end(self.a);
                let reach = self.reach(&prev);
                let fires = |s: &mut Self, letter: &Symbol, g: &Guard| {
                    Formula::and_all([Formula::sym(letter), s.gsat(&prev, g), reach.clone()])
                };
                let t = &self.a.transitions()[last];
                let here = fires(self, &t.letter.clone(), &t.guard.clone());
                let any = Formula::or_all(
                    trans(self.a, q)
                        .iter()
                        .map(|(letter, g)| fires(self, letter, g))
                        .collect::<Vec<_>>(),
                );
                let earlier = match self.a.state(q).direction {
                    Some(Direction::Backward) => Formula::f(Interval::anywhere(), any),
                    _ => Formula::p(Interval::anywhere(), any),
                };
                Formula::and(here, Formula::not(earlier))
            }
        };
        self.enable.insert(path.clone(), f.clone());
        f
    }
}

pub fn enable(a: &Po2dta, path: &ProgressPath) -> Result<Formula, ExtractError> {
    path.check(a)?;
    Ok(Extractor::new(a).enable(path))
}

pub fn gsat(a: &Po2dta, path: &ProgressPath, g: &Guard) -> Result<Formula, ExtractError> {
    path.check(a)?;
    Ok(Extractor::new(a).gsat(path, g))
}

/// `φ_A = ⋁_℘ [Enable(℘) ∨ F_[0,∞) Enable(℘)]`, read at the `▷` cell of `ρ'`.
pub fn extract_formula(a: &Po2dta) -> Formula {
    let mut ex = Extractor::new(a);
    let parts: Vec<Formula> = accepting_paths(a)
        .iter()
        .map(|p| {
            let e = ex.enable(p);
            Formula::or(e.clone(), Formula::f(Interval::anywhere(), e))
        })
        .collect();
    Formula::or_all(parts)
}

/// `ρ'`: the word with both end-markers.
pub fn lift(word: &TimedWord) -> TimedWord {
    word.extended()
}

/// Whether `ρ'` satisfies an extracted formula at its first cell.
pub fn extracted_accepts(phi: &Formula, word: &TimedWord) -> Result<bool, OracleError> {
    holds_at(&lift(word), 0, phi)
}
