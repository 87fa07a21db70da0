//! Integer-endpoint intervals `⟨l,u⟩` with independent open/closed ends.

use std::fmt;

use num_traits::Zero;
use thiserror::Error;

use crate::word::Rational;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum IntervalError {
    #[error("upper bound {upper} below lower bound {lower}")]
    Inverted { lower: u64, upper: u64 },
    #[error("interval `{0}` is empty")]
    Empty(String),
    #[error("interval `{0}` is unbounded")]
    Unbounded(String),
    #[error("interval `{0}` is punctual")]
    Punctual(String),
    #[error("shifting `{interval}` by {by} gives a negative bound")]
    NegativeShift { interval: String, by: i64 },
}

/// `⟨l,u⟩` with `l, u ∈ ℕ` and `u` possibly infinite.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Interval {
    lower: u64,
    upper: Option<u64>,
    lower_open: bool,
    upper_open: bool,
}

/// Mutually exclusive shape classes. `[0,∞)` counts as lower-bound.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum IntervalShape {
    Punctual,
    LowerBound,
    UpperBound,
    Bounded,
}

impl Interval {
    /// An infinite upper end is always open.
    pub fn new(
        lower: u64,
        upper: Option<u64>,
        lower_open: bool,
        upper_open: bool,
    ) -> Result<Self, IntervalError> {
        let iv = Interval {
            lower,
            upper,
            lower_open,
            upper_open: upper_open || upper.is_none(),
        };
        if let Some(u) = upper {
            if u < lower {
                return Err(IntervalError::Inverted { lower, upper: u });
            }
            if u == lower && (lower_open || upper_open) {
                return Err(IntervalError::Empty(iv.to_string()));
            }
        }
        Ok(iv)
    }

    pub fn closed(lower: u64, upper: u64) -> Self {
        Interval::new(lower, Some(upper), false, false).expect("valid closed interval")
    }

    pub fn open(lower: u64, upper: u64) -> Self {
        Interval::new(lower, Some(upper), true, true).expect("valid open interval")
    }

    /// `[l,u)`
    pub fn closed_open(lower: u64, upper: u64) -> Self {
        Interval::new(lower, Some(upper), false, true).expect("valid interval")
    }

    /// `(l,u]`
    pub fn open_closed(lower: u64, upper: u64) -> Self {
        Interval::new(lower, Some(upper), true, false).expect("valid interval")
    }

    /// `[l,∞)`
    pub fn at_least(lower: u64) -> Self {
        Interval::new(lower, None, false, true).unwrap()
    }

    /// `(l,∞)`
    pub fn greater_than(lower: u64) -> Self {
        Interval::new(lower, None, true, true).unwrap()
    }

    /// `[0,∞)`
    pub fn anywhere() -> Self {
        Interval::at_least(0)
    }

    pub fn lower(&self) -> u64 {
        self.lower
    }

    pub fn upper(&self) -> Option<u64> {
        self.upper
    }

    pub fn lower_open(&self) -> bool {
        self.lower_open
    }

    pub fn upper_open(&self) -> bool {
        self.upper_open
    }

    pub fn is_punctual(&self) -> bool {
        self.upper == Some(self.lower)
    }

    pub fn is_bounded(&self) -> bool {
        self.upper.is_some()
    }

    /// `⟨l,∞)`
    pub fn is_lower_bound(&self) -> bool {
        self.upper.is_none()
    }

    /// `[0,u⟩`, including `[0,∞)`.
    pub fn is_upper_bound(&self) -> bool {
        self.lower == 0 && !self.lower_open && !self.is_punctual()
    }

    pub fn shape(&self) -> IntervalShape {
        if self.is_punctual() {
            IntervalShape::Punctual
        } else if self.upper.is_none() {
            IntervalShape::LowerBound
        } else if self.is_upper_bound() {
            IntervalShape::UpperBound
        } else {
            IntervalShape::Bounded
        }
    }

    pub fn contains(&self, t: Rational) -> bool {
        let l = Rational::from_integer(self.lower as i64);
        let above = if self.lower_open { t > l } else { t >= l };
        let below = match self.upper {
            None => true,
            Some(u) => {
                let u = Rational::from_integer(u as i64);
                if self.upper_open {
                    t < u
                } else {
                    t <= u
                }
            }
        };
        above && below
    }

    pub fn contains_zero(&self) -> bool {
        self.contains(Rational::zero())
    }

    /// Adds `k` to both ends, keeping the flags.
    pub fn shift(&self, k: i64) -> Result<Interval, IntervalError> {
        let lower = self.lower as i64 + k;
        let upper = self.upper.map(|u| u as i64 + k);
        if lower < 0 || upper.is_some_and(|u| u < 0) {
            return Err(IntervalError::NegativeShift {
                interval: self.to_string(),
                by: k,
            });
        }
        Ok(Interval {
            lower: lower as u64,
            upper: upper.map(|u| u as u64),
            ..*self
        })
    }

    /// Partition into unit pieces `⟨k,k+1⟩`. Inner pieces are `[k,k+1)`; the
    /// first piece keeps the lower flag and the last one the upper flag.
    pub fn split(&self) -> Result<Vec<Interval>, IntervalError> {
        let u = self
            .upper
            .ok_or_else(|| IntervalError::Unbounded(self.to_string()))?;
        if self.is_punctual() {
            return Err(IntervalError::Punctual(self.to_string()));
        }
        Ok((self.lower..u)
            .map(|k| Interval {
                lower: k,
                upper: Some(k + 1),
                lower_open: k == self.lower && self.lower_open,
                upper_open: if k + 1 == u { self.upper_open } else { true },
            })
            .collect())
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let open = if self.lower_open { '(' } else { '[' };
        match self.upper {
            None => write!(f, "{open}{},inf)", self.lower),
            Some(u) => {
                let close = if self.upper_open { ')' } else { ']' };
                write!(f, "{open}{},{u}{close}", self.lower)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::word::q;

    #[test]
    fn split_follows_flag_rule() {
        let parts = Interval::open_closed(3, 6).split().unwrap();
        let shown: Vec<String> = parts.iter().map(|p| p.to_string()).collect();
        assert_eq!(shown, ["(3,4)", "[4,5)", "[5,6]"]);
        assert_eq!(
            Interval::closed_open(0, 1).split().unwrap(),
            vec![Interval::closed_open(0, 1)]
        );
        let shown: Vec<String> = Interval::open(0, 2)
            .split()
            .unwrap()
            .iter()
            .map(|p| p.to_string())
            .collect();
        assert_eq!(shown, ["(0,1)", "[1,2)"]);
    }

    #[test]
    fn split_rejects_unbounded_and_punctual() {
        assert!(matches!(
            Interval::at_least(1).split(),
            Err(IntervalError::Unbounded(_))
        ));
        assert!(matches!(
            Interval::closed(2, 2).split(),
            Err(IntervalError::Punctual(_))
        ));
    }

    #[test]
    fn shift_keeps_flags() {
        assert_eq!(Interval::open(2, 3).shift(2).unwrap(), Interval::open(4, 5));
        let iv = Interval::closed_open(1, 2);
        assert_eq!(iv.shift(-1).unwrap(), Interval::closed_open(0, 1));
        assert_eq!(iv.shift(1).unwrap().shift(-1).unwrap(), iv);
        assert!(iv.shift(-2).is_err());
    }

    #[test]
    fn construction_errors() {
        assert!(matches!(
            Interval::new(3, Some(2), false, false),
            Err(IntervalError::Inverted { .. })
        ));
        assert!(matches!(
            Interval::new(2, Some(2), true, false),
            Err(IntervalError::Empty(_))
        ));
        assert!(Interval::new(2, None, false, false).unwrap().upper_open());
    }

    #[test]
    fn shapes_are_exclusive() {
        assert_eq!(Interval::closed(2, 2).shape(), IntervalShape::Punctual);
        assert_eq!(Interval::anywhere().shape(), IntervalShape::LowerBound);
        assert_eq!(Interval::greater_than(2).shape(), IntervalShape::LowerBound);
        assert_eq!(
            Interval::closed_open(0, 2).shape(),
            IntervalShape::UpperBound
        );
        assert_eq!(Interval::open(0, 1).shape(), IntervalShape::Bounded);
    }

    #[test]
    fn membership() {
        let iv = Interval::open_closed(1, 2);
        assert!(!iv.contains(q(1, 1)));
        assert!(iv.contains(q(3, 2)));
        assert!(iv.contains(q(2, 1)));
        assert!(Interval::greater_than(2).contains(q(5, 2)));
        assert!(!Interval::greater_than(2).contains(q(3, 2)));
    }
}
