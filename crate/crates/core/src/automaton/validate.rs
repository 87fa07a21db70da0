use std::fmt;

use super::{ClockId, DiffRange, Direction, Po2dta, StateId};
use crate::word::Symbol;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    BadStateRef {
        transition: usize,
    },
    BadClockRef {
        transition: usize,
    },
    UnknownLetter {
        transition: usize,
        letter: Symbol,
    },
    TerminalsCoincide,
    StartIsTerminal,
    /// `t` and `r` must share the minimum rank, strictly below all others.
    TerminalRank {
        state: String,
    },
    /// `s` must be the unique maximum.
    StartNotMaximal {
        state: String,
    },
    TerminalDirection {
        state: String,
    },
    MissingDirection {
        state: String,
    },
    TerminalHasTransition {
        state: String,
    },
    NotDescending {
        from: String,
        to: String,
    },
    Overlap {
        state: String,
        letter: Symbol,
        first: usize,
        second: usize,
    },
    /// `◁` must lead into `Q_R ∪ {t,r}` and `▷` into `Q_L ∪ {t,r}`.
    MarkerUnsafe {
        transition: usize,
    },
    NoEndTransition {
        state: String,
    },
    NoStartTransition {
        state: String,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::BadStateRef { transition } => {
                write!(f, "transition {transition} references a missing state")
            }
            Violation::BadClockRef { transition } => {
                write!(f, "transition {transition} references a missing clock")
            }
            Violation::UnknownLetter { transition, letter } => {
                write!(
                    f,
                    "transition {transition} reads `{letter}` outside the alphabet"
                )
            }
            Violation::TerminalsCoincide => f.write_str("accept and reject are the same state"),
            Violation::StartIsTerminal => f.write_str("start state is terminal"),
            Violation::TerminalRank { state } => {
                write!(f, "rank of `{state}` breaks terminal minimality")
            }
            Violation::StartNotMaximal { state } => {
                write!(f, "`{state}` is not below the start state")
            }
            Violation::TerminalDirection { state } => {
                write!(f, "terminal `{state}` has a direction")
            }
            Violation::MissingDirection { state } => {
                write!(f, "non-terminal `{state}` has no direction")
            }
            Violation::TerminalHasTransition { state } => {
                write!(f, "terminal `{state}` has an outgoing transition")
            }
            Violation::NotDescending { from, to } => {
                write!(f, "transition `{from}` -> `{to}` does not descend")
            }
            Violation::Overlap {
                state,
                letter,
                first,
                second,
            } => write!(
                f,
                "guards of transitions {first} and {second} from `{state}` on `{letter}` overlap"
            ),
            Violation::MarkerUnsafe { transition } => {
                write!(
                    f,
                    "transition {transition} on an end-marker could push the head off the word"
                )
            }
            Violation::NoEndTransition { state } => {
                write!(f, "forward state `{state}` has no transition on ◁")
            }
            Violation::NoStartTransition { state } => {
                write!(f, "backward state `{state}` has no transition on ▷")
            }
        }
    }
}

impl Po2dta {
    /// Every violated structural invariant; empty means valid.
    pub fn validate(&self) -> Vec<Violation> {
        let mut out = vec![];
        let n = self.states.len();
        let name = |q: StateId| self.states[q].name.clone();
        if self.start >= n || self.accept >= n || self.reject >= n {
            out.push(Violation::BadStateRef {
                transition: usize::MAX,
            });
            return out;
        }
        if self.accept == self.reject {
            out.push(Violation::TerminalsCoincide);
        }
        if self.is_terminal(self.start) {
            out.push(Violation::StartIsTerminal);
        }

        let bottom = self.states[self.accept].rank;
        if self.states[self.reject].rank != bottom {
            out.push(Violation::TerminalRank {
                state: name(self.reject),
            });
        }
        let top = self.states[self.start].rank;
        for (q, st) in self.states.iter().enumerate() {
            if self.is_terminal(q) {
                if st.direction.is_some() {
                    out.push(Violation::TerminalDirection { state: name(q) });
                }
                continue;
            }
            if st.direction.is_none() {
                out.push(Violation::MissingDirection { state: name(q) });
            }
            if st.rank <= bottom {
                out.push(Violation::TerminalRank { state: name(q) });
            }
            if q != self.start && st.rank >= top {
                out.push(Violation::StartNotMaximal { state: name(q) });
            }
        }

        let markers = [Symbol::start_marker(), Symbol::end_marker()];
        for (i, t) in self.transitions.iter().enumerate() {
            if t.from >= n || t.to >= n {
                out.push(Violation::BadStateRef { transition: i });
                continue;
            }
            let clocks_ok = t.resets.iter().all(|&c| c < self.clocks.len())
                && t.guard
                    .constraints()
                    .iter()
                    .all(|c| c.clock < self.clocks.len());
            if !clocks_ok {
                out.push(Violation::BadClockRef { transition: i });
            }
            if !self.alphabet.contains(&t.letter) && !markers.contains(&t.letter) {
                out.push(Violation::UnknownLetter {
                    transition: i,
                    letter: t.letter.clone(),
                });
            }
            if self.is_terminal(t.from) {
                out.push(Violation::TerminalHasTransition {
                    state: name(t.from),
                });
            }
            if self.states[t.to].rank >= self.states[t.from].rank {
                out.push(Violation::NotDescending {
                    from: name(t.from),
                    to: name(t.to),
                });
            }
            let target = self.states[t.to].direction;
            let terminal = self.is_terminal(t.to);
            let safe = if t.letter == markers[1] {
                terminal || target == Some(Direction::Backward)
            } else if t.letter == markers[0] {
                terminal || target == Some(Direction::Forward)
            } else {
                true
            };
            if !safe {
                out.push(Violation::MarkerUnsafe { transition: i });
            }
        }

        let ranges: Vec<Vec<(ClockId, DiffRange)>> = self
            .transitions
            .iter()
            .map(|t| t.guard.ranges().into_iter().collect())
            .collect();
        for (q, per_letter) in self.index.iter().enumerate() {
            for ids in per_letter {
                for (k, &i) in ids.iter().enumerate() {
                    for &j in &ids[k + 1..] {
                        if overlap(&ranges[i], &ranges[j]) {
                            out.push(Violation::Overlap {
                                state: name(q),
                                letter: self.transitions[i].letter.clone(),
                                first: i,
                                second: j,
                            });
                        }
                    }
                }
            }
        }

        for (q, st) in self.states.iter().enumerate() {
            match st.direction {
                Some(Direction::Forward) if self.outgoing(q, &markers[1]).next().is_none() => {
                    out.push(Violation::NoEndTransition { state: name(q) })
                }
                Some(Direction::Backward) if self.outgoing(q, &markers[0]).next().is_none() => {
                    out.push(Violation::NoStartTransition { state: name(q) })
                }
                _ => {}
            }
        }
        out
    }

    pub fn is_valid(&self) -> bool {
        self.validate().is_empty()
    }
}

/// Merge over two clock-sorted range lists: the conjunction is satisfiable
/// iff no shared clock's ranges are disjoint and no range is empty.
fn overlap(a: &[(ClockId, DiffRange)], b: &[(ClockId, DiffRange)]) -> bool {
    if a.iter().chain(b).any(|(_, r)| r.is_empty()) {
        return false;
    }
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].0.cmp(&b[j].0) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                if a[i].1.intersect(&b[j].1).is_empty() {
                    return false;
                }
                i += 1;
                j += 1;
            }
        }
    }
    true
}
