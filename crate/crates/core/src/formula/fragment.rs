//! Syntactic fragment classification.

use std::fmt;

use super::{Formula, Modality};

/// Most specific fragment. Inclusions: `LowerBound ⊆ ZeroInf ⊆ Full`,
/// `UpperBound ⊆ ZeroInf`, `Bounded ⊆ Full`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Fragment {
    /// `MITL[F∞,P∞]`: every interval is `⟨l,∞)`.
    LowerBound,
    /// `Bounded MITL[F_b,P_b]`: every interval has a finite upper end.
    Bounded,
    /// `MITL[F0,P0]`: every interval is `[0,u⟩`.
    UpperBound,
    /// `MITL[F0,∞,P0,∞]`: every interval is `[0,u⟩` or `⟨l,∞)`.
    ZeroInf,
    /// `MITL[F_I,P_I]`
    Full,
    /// Contains a punctual interval.
    NonMitl,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct FragmentTag {
    pub fragment: Fragment,
    pub future_only: bool,
}

impl Fragment {
    /// Whether every formula of `self` also belongs to `other`.
    pub fn within(self, other: Fragment) -> bool {
        use Fragment::*;
        match (self, other) {
            (a, b) if a == b => true,
            (NonMitl, _) | (_, NonMitl) => false,
            (_, Full) => true,
            (LowerBound | UpperBound, ZeroInf) => true,
            _ => false,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Fragment::LowerBound => "MITL[F∞,P∞]",
            Fragment::Bounded => "Bounded MITL[F_b,P_b]",
            Fragment::UpperBound => "MITL[F0,P0]",
            Fragment::ZeroInf => "MITL[F0,∞,P0,∞]",
            Fragment::Full => "MITL[F_I,P_I]",
            Fragment::NonMitl => "MTL (punctual)",
        }
    }
}

impl fmt::Display for FragmentTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = self.fragment.name();
        if self.future_only && self.fragment != Fragment::NonMitl {
            // MITL[F∞,P∞] -> MITL[F∞]
            let trimmed = match name.find(",P") {
                Some(i) => format!("{}]", &name[..i]),
                None => name.to_string(),
            };
            write!(f, "{trimmed}")
        } else {
            f.write_str(name)
        }
    }
}

/// Formulas without modalities belong to every fragment and are tagged
/// `LowerBound`; a formula that is both lower- and upper-bound only (all
/// intervals `[0,∞)`) is also `LowerBound`; bounded beats upper-bound.
pub fn classify(f: &Formula) -> FragmentTag {
    let ivs = f.intervals();
    let future_only = ivs.iter().all(|(m, _)| *m == Modality::F);
    let all = |p: &dyn Fn(&crate::interval::Interval) -> bool| ivs.iter().all(|(_, iv)| p(iv));
    let fragment = if ivs.iter().any(|(_, iv)| iv.is_punctual()) {
        Fragment::NonMitl
    } else if all(&|iv| iv.is_lower_bound()) {
        Fragment::LowerBound
    } else if all(&|iv| iv.is_bounded()) {
        Fragment::Bounded
    } else if all(&|iv| iv.is_upper_bound()) {
        Fragment::UpperBound
    } else if all(&|iv| iv.is_upper_bound() || iv.is_lower_bound()) {
        Fragment::ZeroInf
    } else {
        Fragment::Full
    };
    FragmentTag {
        fragment,
        future_only,
    }
}

/// No punctual interval and every interval `⟨l,∞)`.
pub fn is_lower_bound(f: &Formula) -> bool {
    f.intervals().iter().all(|(_, iv)| iv.is_lower_bound())
}

/// Every interval bounded and non-punctual.
pub fn is_bounded(f: &Formula) -> bool {
    f.intervals()
        .iter()
        .all(|(_, iv)| iv.is_bounded() && !iv.is_punctual())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse;

    fn tag(s: &str) -> Fragment {
        classify(&parse(s).unwrap()).fragment
    }

    #[test]
    fn separating_languages() {
        assert_eq!(tag("F(0,inf)[a & F(1,2) c]"), Fragment::Full);
        assert_eq!(tag("F(0,inf)[a & F[0,2] c]"), Fragment::ZeroInf);
        assert_eq!(tag("F(0,inf)[a & F(2,inf) c]"), Fragment::LowerBound);
        assert_eq!(tag("F(0,1)[a & F(1,2) c]"), Fragment::Bounded);
        assert_eq!(tag("F[2,2] a"), Fragment::NonMitl);
        assert_eq!(tag("F[0,2) a & !F[0,inf) b"), Fragment::UpperBound);
        assert_eq!(tag("a & b"), Fragment::LowerBound);
    }

    #[test]
    fn future_only_flag() {
        let t = classify(&parse("F(0,1) a").unwrap());
        assert!(t.future_only);
        assert_eq!(t.to_string(), "Bounded MITL[F_b]");
        assert!(!classify(&parse("P(0,1) a").unwrap()).future_only);
    }

    #[test]
    fn inclusions() {
        assert!(Fragment::LowerBound.within(Fragment::ZeroInf));
        assert!(Fragment::ZeroInf.within(Fragment::Full));
        assert!(Fragment::Bounded.within(Fragment::Full));
        assert!(!Fragment::Bounded.within(Fragment::ZeroInf));
        assert!(!Fragment::NonMitl.within(Fragment::Full));
    }
}
