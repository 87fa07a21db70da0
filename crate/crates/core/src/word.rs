//! Finite timed words with exact rational time stamps.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use num_rational::Ratio;
use num_traits::{Signed, Zero};
use thiserror::Error;

/// Exact time stamps and clock values.
pub type Rational = Ratio<i64>;

/// Left end-marker, read by automata at head position 0.
pub const START_MARKER: &str = "▷";
/// Right end-marker, read by automata at head position `len + 1`.
pub const END_MARKER: &str = "◁";

/// An event name. Cheap to clone; compared by content.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Symbol(Arc<str>);

impl Symbol {
    pub fn new(name: &str) -> Self {
        Symbol(Arc::from(name))
    }

    pub fn start_marker() -> Self {
        Symbol::new(START_MARKER)
    }

    pub fn end_marker() -> Self {
        Symbol::new(END_MARKER)
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    pub fn is_marker(&self) -> bool {
        self.as_str() == START_MARKER || self.as_str() == END_MARKER
    }
}

impl fmt::Debug for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for Symbol {
    fn from(s: &str) -> Self {
        Symbol::new(s)
    }
}

pub type Alphabet = BTreeSet<Symbol>;

/// Builds an alphabet from string names.
pub fn alphabet<'a, I: IntoIterator<Item = &'a str>>(names: I) -> Alphabet {
    names.into_iter().map(Symbol::new).collect()
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WordError {
    #[error("events and stamps differ in length ({events} vs {stamps})")]
    LengthMismatch { events: usize, stamps: usize },
    #[error("negative time stamp {stamp} at position {pos}")]
    NegativeStamp { pos: usize, stamp: Rational },
    #[error("time stamps not strictly increasing at position {pos}")]
    NotStrictlyMonotonic { pos: usize },
    #[error("word is empty")]
    Empty,
    #[error("first time stamp is {0}, expected 0")]
    NonZeroStart(Rational),
    #[error("bad token `{token}`: {reason}")]
    BadToken { token: String, reason: String },
    #[error("symbol `{0}` is not in the alphabet")]
    UnknownSymbol(Symbol),
}

/// A finite timed word `(σ1,τ1) … (σn,τn)`.
///
/// Words built with [`TimedWord::new`] are strictly monotonic. The extended
/// word produced by [`TimedWord::extended`] repeats the first and last stamps
/// on its end-markers and is therefore only weakly monotonic.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct TimedWord {
    events: Vec<Symbol>,
    stamps: Vec<Rational>,
}

impl TimedWord {
    pub fn new(events: Vec<Symbol>, stamps: Vec<Rational>) -> Result<Self, WordError> {
        if events.len() != stamps.len() {
            return Err(WordError::LengthMismatch {
                events: events.len(),
                stamps: stamps.len(),
            });
        }
        for (pos, stamp) in stamps.iter().enumerate() {
            if stamp.is_negative() {
                return Err(WordError::NegativeStamp { pos, stamp: *stamp });
            }
            if pos > 0 && stamps[pos - 1] >= *stamp {
                return Err(WordError::NotStrictlyMonotonic { pos });
            }
        }
        Ok(TimedWord { events, stamps })
    }

    /// Builds a word from `(event, stamp)` pairs.
    pub fn from_pairs<S: Into<Symbol>>(
        pairs: impl IntoIterator<Item = (S, Rational)>,
    ) -> Result<Self, WordError> {
        let (events, stamps) = pairs.into_iter().map(|(s, t)| (s.into(), t)).unzip();
        TimedWord::new(events, stamps)
    }

    /// Like [`TimedWord::new`] but only requires non-decreasing stamps, as
    /// for end-marked words.
    pub fn weak(events: Vec<Symbol>, stamps: Vec<Rational>) -> Result<Self, WordError> {
        if events.len() != stamps.len() {
            return Err(WordError::LengthMismatch {
                events: events.len(),
                stamps: stamps.len(),
            });
        }
        for (pos, stamp) in stamps.iter().enumerate() {
            if stamp.is_negative() {
                return Err(WordError::NegativeStamp { pos, stamp: *stamp });
            }
            if pos > 0 && stamps[pos - 1] > *stamp {
                return Err(WordError::NotStrictlyMonotonic { pos });
            }
        }
        Ok(TimedWord { events, stamps })
    }

    pub(crate) fn new_weak(events: Vec<Symbol>, stamps: Vec<Rational>) -> Self {
        debug_assert_eq!(events.len(), stamps.len());
        debug_assert!(stamps.windows(2).all(|w| w[0] <= w[1]));
        TimedWord { events, stamps }
    }

    pub fn len(&self) -> usize {
        self.events.len()
    }

    pub fn is_empty(&self) -> bool {
        self.events.is_empty()
    }

    pub fn event(&self, pos: usize) -> &Symbol {
        &self.events[pos]
    }

    pub fn stamp(&self, pos: usize) -> Rational {
        self.stamps[pos]
    }

    pub fn events(&self) -> &[Symbol] {
        &self.events
    }

    pub fn stamps(&self) -> &[Rational] {
        &self.stamps
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Symbol, Rational)> + '_ {
        self.events.iter().zip(self.stamps.iter().copied())
    }

    pub fn is_strictly_monotonic(&self) -> bool {
        self.stamps.windows(2).all(|w| w[0] < w[1])
    }

    /// Checks the entry conditions for language membership: nonempty, τ1 = 0.
    pub fn check_language_word(&self) -> Result<(), WordError> {
        match self.stamps.first() {
            None => Err(WordError::Empty),
            Some(t) if !t.is_zero() => Err(WordError::NonZeroStart(*t)),
            Some(_) => Ok(()),
        }
    }

    /// `ρ' = (▷,0) ρ (◁,τn)`; positions `0..=len+1`.
    pub fn extended(&self) -> TimedWord {
        let last = self.stamps.last().copied().unwrap_or_else(Rational::zero);
        let mut events = Vec::with_capacity(self.len() + 2);
        let mut stamps = Vec::with_capacity(self.len() + 2);
        events.push(Symbol::start_marker());
        stamps.push(Rational::zero());
        events.extend(self.events.iter().cloned());
        stamps.extend(self.stamps.iter().copied());
        events.push(Symbol::end_marker());
        stamps.push(last);
        TimedWord::new_weak(events, stamps)
    }

    /// Same word with every symbol renamed by `f`.
    pub fn map_symbols(&self, mut f: impl FnMut(&Symbol) -> Symbol) -> TimedWord {
        TimedWord {
            events: self.events.iter().map(&mut f).collect(),
            stamps: self.stamps.clone(),
        }
    }

    pub fn untime(&self) -> &[Symbol] {
        &self.events
    }

    pub fn alph(&self) -> Alphabet {
        self.events.iter().cloned().collect()
    }

    pub fn check_alphabet(&self, sigma: &Alphabet) -> Result<(), WordError> {
        match self.events.iter().find(|e| !sigma.contains(*e)) {
            Some(e) => Err(WordError::UnknownSymbol(e.clone())),
            None => Ok(()),
        }
    }

    /// Parses `sym@num/den` tokens separated by whitespace. Decimal stamps
    /// such as `0.2` are converted exactly.
    pub fn parse(text: &str) -> Result<Self, WordError> {
        let mut pairs = Vec::new();
        for token in text.split_whitespace() {
            let (sym, stamp) = token.split_once('@').ok_or_else(|| WordError::BadToken {
                token: token.to_string(),
                reason: "expected `symbol@stamp`".into(),
            })?;
            if sym.is_empty() {
                return Err(WordError::BadToken {
                    token: token.to_string(),
                    reason: "empty symbol".into(),
                });
            }
            let stamp = parse_rational(stamp).map_err(|reason| WordError::BadToken {
                token: token.to_string(),
                reason,
            })?;
            let sym = match sym {
                "|>" => Symbol::start_marker(),
                "<|" => Symbol::end_marker(),
                s => Symbol::new(s),
            };
            pairs.push((sym, stamp));
        }
        TimedWord::from_pairs(pairs)
    }
}

impl fmt::Display for TimedWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (e, t)) in self.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{e}@{t}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for TimedWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TimedWord({self})")
    }
}

/// Parses `n`, `n/d` or a decimal literal into an exact rational.
pub fn parse_rational(text: &str) -> Result<Rational, String> {
    let text = text.trim();
    if let Some((num, den)) = text.split_once('/') {
        let num: i64 = num.trim().parse().map_err(|e| format!("numerator: {e}"))?;
        let den: i64 = den
            .trim()
            .parse()
            .map_err(|e| format!("denominator: {e}"))?;
        if den == 0 {
            return Err("zero denominator".into());
        }
        return Ok(Rational::new(num, den));
    }
    if let Some((int, frac)) = text.split_once('.') {
        let negative = int.starts_with('-');
        let int_part: i64 = if int.is_empty() || int == "-" {
            0
        } else {
            int.parse().map_err(|e| format!("integer part: {e}"))?
        };
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) || frac.len() > 15 {
            return Err(format!("bad fractional part `{frac}`"));
        }
        let scale = 10i64.pow(frac.len() as u32);
        let frac_part: i64 = frac.parse().map_err(|e| format!("fractional part: {e}"))?;
        let magnitude = Rational::from_integer(int_part.abs()) + Rational::new(frac_part, scale);
        return Ok(if negative { -magnitude } else { magnitude });
    }
    text.parse::<i64>()
        .map(Rational::from_integer)
        .map_err(|e| format!("bad number `{text}`: {e}"))
}

/// Shorthand for `Rational::new(n, d)`.
pub fn q(n: i64, d: i64) -> Rational {
    Rational::new(n, d)
}
