//! Brute-force pointwise semantics; the ground truth for everything else.
//!
//! Positions are 0-based. Evaluation works on any non-decreasing word, so it
//! also serves for end-marked words `ρ'`.

use std::collections::HashMap;

use thiserror::Error;

use crate::formula::{Formula, Modality, Node};
use crate::interval::Interval;
use crate::word::{Rational, TimedWord, WordError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("position {pos} outside word of length {len}")]
    OutOfRange { pos: usize, len: usize },
    #[error(transparent)]
    Word(#[from] WordError),
    #[error("interval {0} is not a lower-bound interval")]
    NotLowerBound(Interval),
    #[error("interval {0} is not a bounded unit interval")]
    NotUnit(Interval),
}

/// Memoizes the truth vector of every subformula over one word.
pub struct Evaluator<'w> {
    word: &'w TimedWord,
    memo: HashMap<usize, Vec<bool>>,
    // keeps memoized nodes alive so their addresses stay unique
    pinned: Vec<Formula>,
}

impl<'w> Evaluator<'w> {
    pub fn new(word: &'w TimedWord) -> Self {
        Evaluator {
            word,
            memo: HashMap::new(),
            pinned: Vec::new(),
        }
    }

    /// Truth of `phi` at every position.
    pub fn truth(&mut self, phi: &Formula) -> &[bool] {
        if !self.memo.contains_key(&phi.key()) {
            let mut order = Vec::new();
            phi.for_each_node(|g| {
                if !self.memo.contains_key(&g.key()) {
                    order.push(g.clone());
                }
            });
            for g in order {
                let v = self.compute(&g);
                self.memo.insert(g.key(), v);
                self.pinned.push(g);
            }
        }
        &self.memo[&phi.key()]
    }

    pub fn holds_at(&mut self, phi: &Formula, pos: usize) -> Result<bool, OracleError> {
        let len = self.word.len();
        if pos >= len {
            return Err(OracleError::OutOfRange { pos, len });
        }
        Ok(self.truth(phi)[pos])
    }

    fn compute(&self, g: &Formula) -> Vec<bool> {
        let n = self.word.len();
        let sub = |h: &Formula| &self.memo[&h.key()];
        match g.node() {
            Node::True => vec![true; n],
            Node::False => vec![false; n],
            Node::Atom(a) => self.word.events().iter().map(|e| e == a).collect(),
            Node::Not(a) => sub(a).iter().map(|b| !b).collect(),
            Node::And(a, b) => sub(a).iter().zip(sub(b)).map(|(x, y)| *x && *y).collect(),
            Node::Or(a, b) => sub(a).iter().zip(sub(b)).map(|(x, y)| *x || *y).collect(),
            Node::Modal(m, iv, a) => {
                let arg = sub(a);
                let st = self.word.stamps();
                (0..n)
                    .map(|i| match m {
                        Modality::F => (i + 1..n).any(|j| arg[j] && iv.contains(st[j] - st[i])),
                        Modality::P => (0..i).any(|j| arg[j] && iv.contains(st[i] - st[j])),
                    })
                    .collect()
            }
        }
    }
}

/// `ρ, i ⊨ φ`
pub fn holds_at(word: &TimedWord, pos: usize, phi: &Formula) -> Result<bool, OracleError> {
    Evaluator::new(word).holds_at(phi, pos)
}

/// Direct recursion on the semantic clauses, without sharing.
pub fn holds_at_naive(word: &TimedWord, pos: usize, phi: &Formula) -> bool {
    match phi.node() {
        Node::True => true,
        Node::False => false,
        Node::Atom(a) => word.event(pos) == a,
        Node::Not(a) => !holds_at_naive(word, pos, a),
        Node::And(a, b) => holds_at_naive(word, pos, a) && holds_at_naive(word, pos, b),
        Node::Or(a, b) => holds_at_naive(word, pos, a) || holds_at_naive(word, pos, b),
        Node::Modal(Modality::F, iv, a) => (pos + 1..word.len())
            .any(|j| iv.contains(word.stamp(j) - word.stamp(pos)) && holds_at_naive(word, j, a)),
        Node::Modal(Modality::P, iv, a) => (0..pos)
            .any(|j| iv.contains(word.stamp(pos) - word.stamp(j)) && holds_at_naive(word, j, a)),
    }
}

/// `ρ ∈ L(φ)`: nonempty, `τ1 = 0`, and `φ` holds at the first position.
pub fn language_member(word: &TimedWord, phi: &Formula) -> Result<bool, OracleError> {
    word.check_language_word()?;
    holds_at(word, 0, phi)
}

/// `Idx^φ_I(ρ)` with first/last stamps; empty index sets default to
/// `τ_#ρ` (first) and `τ_1` (last).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OccurrenceMap {
    pub idx: Vec<usize>,
    pub first: Rational,
    pub last: Rational,
}

fn occurrence_where(
    word: &TimedWord,
    truth: &[bool],
    mut inside: impl FnMut(Rational) -> bool,
) -> OccurrenceMap {
    let idx: Vec<usize> = (0..word.len())
        .filter(|&i| truth[i] && inside(word.stamp(i)))
        .collect();
    let (first, last) = match (idx.first(), idx.last()) {
        (Some(&f), Some(&l)) => (word.stamp(f), word.stamp(l)),
        _ => (
            word.stamps().last().copied().unwrap_or_default(),
            word.stamps().first().copied().unwrap_or_default(),
        ),
    };
    OccurrenceMap { idx, first, last }
}

/// Occurrences of `phi` with stamps in `iv` (`[0,∞)` when `None`).
pub fn occurrence(word: &TimedWord, phi: &Formula, iv: Option<Interval>) -> OccurrenceMap {
    let iv = iv.unwrap_or_else(Interval::anywhere);
    let mut ev = Evaluator::new(word);
    let truth = ev.truth(phi).to_vec();
    occurrence_where(word, &truth, |t| iv.contains(t))
}

/// Occurrences inside the unit `[r, r+1)`; `r` may be negative.
pub fn occurrence_unit(word: &TimedWord, truth: &[bool], r: i64) -> OccurrenceMap {
    let lo = Rational::from_integer(r);
    let hi = Rational::from_integer(r + 1);
    occurrence_where(word, truth, |t| lo <= t && t < hi)
}

/// Right-hand side of the lower-bound characterisation: truth of
/// `M_⟨l,∞) φ` at `pos` computed from `F^φ` / `L^φ` alone.
pub fn lb_condition(
    word: &TimedWord,
    pos: usize,
    modality: Modality,
    iv: Interval,
    phi: &Formula,
) -> Result<bool, OracleError> {
    if !iv.is_lower_bound() {
        return Err(OracleError::NotLowerBound(iv));
    }
    if pos >= word.len() {
        return Err(OracleError::OutOfRange {
            pos,
            len: word.len(),
        });
    }
    let occ = occurrence(word, phi, None);
    let t = word.stamp(pos);
    let l = Rational::from_integer(iv.lower() as i64);
    Ok(match (modality, iv.lower_open()) {
        (Modality::F, false) => t <= occ.last - l && t < occ.last,
        (Modality::F, true) => t < occ.last - l,
        (Modality::P, false) => t >= occ.first + l && t > occ.first,
        (Modality::P, true) => t > occ.first + l,
    })
}

/// Right-hand side of the unit-interval characterisation for
/// `M_⟨_a l,l+1⟩_b φ` at `pos`, with `r = ⌊τ_pos⌋`.
pub fn bounded_condition(
    word: &TimedWord,
    pos: usize,
    modality: Modality,
    iv: Interval,
    phi: &Formula,
) -> Result<bool, OracleError> {
    if iv.upper() != Some(iv.lower() + 1) {
        return Err(OracleError::NotUnit(iv));
    }
    if pos >= word.len() {
        return Err(OracleError::OutOfRange {
            pos,
            len: word.len(),
        });
    }
    let truth = Evaluator::new(word).truth(phi).to_vec();
    let t = word.stamp(pos);
    let r = t.floor().to_integer();
    let l = iv.lower() as i64;
    let lq = Rational::from_integer(l);
    let r1 = Rational::from_integer(r + 1);
    let a_open = iv.lower_open();
    let b_open = iv.upper_open();
    // x <_s y, strict when the bracket is open
    let lt = |open: bool, x: Rational, y: Rational| if open { x < y } else { x <= y };
    Ok(match modality {
        Modality::F => {
            let near = occurrence_unit(word, &truth, r + l);
            let far = occurrence_unit(word, &truth, r + l + 1);
            let c1a = t < near.last && lt(a_open, t, near.last - lq);
            let c1b = t < far.last && lt(b_open, far.first - (lq + 1), t) && t < r1;
            c1a || c1b
        }
        Modality::P => {
            let far = occurrence_unit(word, &truth, r - l - 1);
            let near = occurrence_unit(word, &truth, r - l);
            let c2a = t > far.first && lt(b_open, t, far.last + lq + 1);
            let c2b = t > near.first && lt(a_open, near.first + lq, t) && t < r1;
            c2a || c2b
        }
    })
}
