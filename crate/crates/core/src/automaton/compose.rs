//! Sequential composition `A1 ; A2`.
//!
//! Accepting in `A1` hands the head and the valuation over to `A2`. A po2DTA
//! moves the head whenever it enters a non-terminal state, so the hand-over
//! goes through a bounce state `β` that steps away from the current cell and
//! fires straight back into `s2`, which then sees the cell where `A1`
//! stopped. When `A1` accepts on a marker that `β` cannot step away from, the
//! transition enters `s2` directly; this is equivalent as long as `s2` would
//! ignore that marker anyway.

use std::collections::HashSet;

use super::{AutomatonError, Builder, Direction, Guard, Po2dta};
use crate::word::Symbol;

pub fn sequential_compose(a1: &Po2dta, a2: &Po2dta) -> Result<Po2dta, AutomatonError> {
    checked(compose(a1, a2)?)
}

fn checked(a: Po2dta) -> Result<Po2dta, AutomatonError> {
    let violations = a.validate();
    if violations.is_empty() {
        Ok(a)
    } else {
        Err(AutomatonError::Invalid(violations))
    }
}

fn compose(a1: &Po2dta, a2: &Po2dta) -> Result<Po2dta, AutomatonError> {
    let alphabet = a1.alphabet.union(&a2.alphabet).cloned().collect();
    let mut b = Builder::new(alphabet);
    let s2_dir = a2.states[a2.start]
        .direction
        .expect("start state of a valid automaton has a direction");

    // A2 first, ranks unchanged
    let mut map2 = Vec::with_capacity(a2.states.len());
    for st in &a2.states {
        map2.push(b.state(st.name.clone(), st.direction, st.rank));
    }
    let clocks2: Vec<usize> = a2.clocks.iter().map(|c| b.clock(c)).collect();
    for t in &a2.transitions {
        b.transition(
            map2[t.from],
            t.letter.clone(),
            remap_guard(&t.guard, &clocks2),
            t.resets.iter().map(|&c| clocks2[c]).collect(),
            map2[t.to],
        );
    }
    let s2 = map2[a2.start];
    let t2 = map2[a2.accept];
    let r = map2[a2.reject];

    let bounce_rank = a2.states[a2.start].rank + 1;
    let needs_bounce = a1
        .transitions
        .iter()
        .any(|t| t.to == a1.accept && !direct(&t.letter, s2_dir));
    let beta = needs_bounce.then(|| {
        let (dir, skip) = match s2_dir {
            Direction::Forward => (Direction::Backward, Symbol::end_marker()),
            Direction::Backward => (Direction::Forward, Symbol::start_marker()),
        };
        let names: HashSet<String> = b.states.iter().map(|s| s.name.clone()).collect();
        let beta = b.state(fresh_name(&names, "bounce"), Some(dir), bounce_rank);
        let letters: Vec<Symbol> = [Symbol::start_marker(), Symbol::end_marker()]
            .into_iter()
            .chain(b.alphabet.iter().cloned())
            .filter(|a| *a != skip)
            .collect();
        for a in letters {
            b.transition(beta, a, Guard::tt(), vec![], s2);
        }
        beta
    });

    let shift = if needs_bounce {
        bounce_rank
    } else {
        bounce_rank - 1
    };
    let mut names: HashSet<String> = b.states.iter().map(|s| s.name.clone()).collect();
    let mut map1 = vec![usize::MAX; a1.states.len()];
    for (q, st) in a1.states.iter().enumerate() {
        if q == a1.reject {
            map1[q] = r;
        } else if q == a1.accept {
            continue;
        } else {
            let name = fresh_name(&names, &st.name);
            names.insert(name.clone());
            map1[q] = b.state(name, st.direction, st.rank + shift);
        }
    }
    let clocks1: Vec<usize> = a1.clocks.iter().map(|c| b.clock(c)).collect();
    for t in &a1.transitions {
        let to = if t.to == a1.accept {
            if direct(&t.letter, s2_dir) {
                if a2.outgoing(a2.start, &t.letter).next().is_some() {
                    return Err(AutomatonError::CompositionUnsupported(format!(
                        "first automaton accepts on `{}` but the second one reads it in its start state",
                        t.letter
                    )));
                }
                s2
            } else {
                beta.expect("bounce state exists")
            }
        } else {
            map1[t.to]
        };
        b.transition(
            map1[t.from],
            t.letter.clone(),
            remap_guard(&t.guard, &clocks1),
            t.resets.iter().map(|&c| clocks1[c]).collect(),
            to,
        );
    }
    Ok(b.build_unchecked(map1[a1.start], t2, r))
}

/// Whether accepting on `letter` has to enter `s2` directly: the bounce
/// would step off the word.
fn direct(letter: &Symbol, s2_dir: Direction) -> bool {
    (letter.as_str() == crate::word::START_MARKER && s2_dir == Direction::Forward)
        || (letter.as_str() == crate::word::END_MARKER && s2_dir == Direction::Backward)
}

fn remap_guard(g: &Guard, clocks: &[usize]) -> Guard {
    Guard::new(
        g.constraints()
            .iter()
            .map(|c| {
                let mut c = *c;
                c.clock = clocks[c.clock];
                c
            })
            .collect(),
    )
}

fn fresh_name(taken: &HashSet<String>, base: &str) -> String {
    if !taken.contains(base) {
        return base.to_string();
    }
    (1..)
        .map(|k| format!("{base}'{k}"))
        .find(|n| !taken.contains(n))
        .unwrap()
}

impl Po2dta {
    /// Left fold of [`sequential_compose`], validated once at the end.
    pub fn chain(parts: &[Po2dta]) -> Result<Po2dta, AutomatonError> {
        let (first, rest) = parts
            .split_first()
            .ok_or_else(|| AutomatonError::CompositionUnsupported("empty chain".into()))?;
        checked(
            rest.iter()
                .try_fold(first.clone(), |acc, a| compose(&acc, a))?,
        )
    }
}
