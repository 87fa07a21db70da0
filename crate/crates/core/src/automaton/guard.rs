//! Clock guards: conjunctions of `T−x ≈ c` / `x−T ≈ c` with natural `c`.
//!
//! Every atomic constraint restricts the single quantity `d = T − x` to an
//! interval of ℝ, which makes satisfiability and disjointness a per-clock
//! interval question.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_traits::Signed;
use thiserror::Error;

use crate::word::Rational;

pub type ClockId = usize;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GuardError {
    #[error("unknown clock index {0}")]
    UnknownClock(ClockId),
    #[error("unknown clock `{0}`")]
    UnknownClockName(String),
    #[error("bad guard `{text}`: {reason}")]
    Syntax { text: String, reason: String },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Rel {
    Lt,
    Le,
    Gt,
    Ge,
    Eq,
}

impl Rel {
    fn holds(self, lhs: Rational, c: Rational) -> bool {
        match self {
            Rel::Lt => lhs < c,
            Rel::Le => lhs <= c,
            Rel::Gt => lhs > c,
            Rel::Ge => lhs >= c,
            Rel::Eq => lhs == c,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Rel::Lt => "<",
            Rel::Le => "<=",
            Rel::Gt => ">",
            Rel::Ge => ">=",
            Rel::Eq => "=",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Form {
    /// `T − x ≈ c`, implicitly `T − x ≥ 0`.
    TMinusX,
    /// `x − T ≈ c`, implicitly `x − T ≥ 0`.
    XMinusT,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Constraint {
    pub clock: ClockId,
    pub form: Form,
    pub rel: Rel,
    pub c: u64,
}

impl Constraint {
    pub fn new(clock: ClockId, form: Form, rel: Rel, c: u64) -> Self {
        Constraint {
            clock,
            form,
            rel,
            c,
        }
    }

    pub fn holds(&self, x: Rational, t: Rational) -> bool {
        let c = Rational::from_integer(self.c as i64);
        let lhs = match self.form {
            Form::TMinusX => t - x,
            Form::XMinusT => x - t,
        };
        !lhs.is_negative() && self.rel.holds(lhs, c)
    }

    /// The set of `d = T − x` satisfying the constraint.
    pub fn range(&self) -> DiffRange {
        let c = self.c as i64;
        match (self.form, self.rel) {
            (Form::TMinusX, Rel::Lt) => DiffRange::new(Some(Bound::incl(0)), Some(Bound::excl(c))),
            (Form::TMinusX, Rel::Le) => DiffRange::new(Some(Bound::incl(0)), Some(Bound::incl(c))),
            (Form::TMinusX, Rel::Gt) => DiffRange::new(Some(Bound::excl(c)), None),
            (Form::TMinusX, Rel::Ge) => DiffRange::new(Some(Bound::incl(c)), None),
            (Form::TMinusX, Rel::Eq) => DiffRange::point(c),
            (Form::XMinusT, Rel::Lt) => DiffRange::new(Some(Bound::excl(-c)), Some(Bound::incl(0))),
            (Form::XMinusT, Rel::Le) => DiffRange::new(Some(Bound::incl(-c)), Some(Bound::incl(0))),
            (Form::XMinusT, Rel::Gt) => DiffRange::new(None, Some(Bound::excl(-c))),
            (Form::XMinusT, Rel::Ge) => DiffRange::new(None, Some(Bound::incl(-c))),
            (Form::XMinusT, Rel::Eq) => DiffRange::point(-c),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Bound {
    pub value: i64,
    pub inclusive: bool,
}

impl Bound {
    pub fn incl(value: i64) -> Self {
        Bound {
            value,
            inclusive: true,
        }
    }

    pub fn excl(value: i64) -> Self {
        Bound {
            value,
            inclusive: false,
        }
    }
}

/// Interval of `d = T − x` over ℝ with integer ends; `None` is infinite.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DiffRange {
    pub lo: Option<Bound>,
    pub hi: Option<Bound>,
}

impl DiffRange {
    pub fn new(lo: Option<Bound>, hi: Option<Bound>) -> Self {
        DiffRange { lo, hi }
    }

    pub fn full() -> Self {
        DiffRange { lo: None, hi: None }
    }

    pub fn point(v: i64) -> Self {
        DiffRange::new(Some(Bound::incl(v)), Some(Bound::incl(v)))
    }

    /// `d < v`
    pub fn below(v: i64) -> Self {
        DiffRange::new(None, Some(Bound::excl(v)))
    }

    /// `d ≤ v`
    pub fn at_most(v: i64) -> Self {
        DiffRange::new(None, Some(Bound::incl(v)))
    }

    /// `d > v`
    pub fn above(v: i64) -> Self {
        DiffRange::new(Some(Bound::excl(v)), None)
    }

    /// `d ≥ v`
    pub fn at_least(v: i64) -> Self {
        DiffRange::new(Some(Bound::incl(v)), None)
    }

    /// `[lo, hi)`
    pub fn half_open(lo: i64, hi: i64) -> Self {
        DiffRange::new(Some(Bound::incl(lo)), Some(Bound::excl(hi)))
    }

    pub fn is_full(&self) -> bool {
        self.lo.is_none() && self.hi.is_none()
    }

    pub fn is_empty(&self) -> bool {
        match (self.lo, self.hi) {
            (Some(l), Some(h)) => {
                l.value > h.value || (l.value == h.value && !(l.inclusive && h.inclusive))
            }
            _ => false,
        }
    }

    pub fn contains(&self, d: Rational) -> bool {
        let lo_ok = self.lo.is_none_or(|b| {
            let v = Rational::from_integer(b.value);
            if b.inclusive {
                d >= v
            } else {
                d > v
            }
        });
        let hi_ok = self.hi.is_none_or(|b| {
            let v = Rational::from_integer(b.value);
            if b.inclusive {
                d <= v
            } else {
                d < v
            }
        });
        lo_ok && hi_ok
    }

    pub fn intersect(&self, other: &DiffRange) -> DiffRange {
        let lo = match (self.lo, other.lo) {
            (None, b) | (b, None) => b,
            (Some(a), Some(b)) => Some(if a.value != b.value {
                if a.value > b.value {
                    a
                } else {
                    b
                }
            } else {
                Bound {
                    value: a.value,
                    inclusive: a.inclusive && b.inclusive,
                }
            }),
        };
        let hi = match (self.hi, other.hi) {
            (None, b) | (b, None) => b,
            (Some(a), Some(b)) => Some(if a.value != b.value {
                if a.value < b.value {
                    a
                } else {
                    b
                }
            } else {
                Bound {
                    value: a.value,
                    inclusive: a.inclusive && b.inclusive,
                }
            }),
        };
        DiffRange { lo, hi }
    }

    /// Conjunctions of constraints whose union is exactly `self`: one when
    /// the range stays on one side of 0, two when it straddles it (the
    /// point `d = 0` goes to the `T − x` side).
    pub fn to_constraints(&self, clock: ClockId) -> Vec<Vec<Constraint>> {
        if self.is_empty() {
            return vec![];
        }
        let lo_nonneg = self.lo.is_some_and(|b| b.value >= 0);
        let hi_nonpos = self.hi.is_some_and(|b| b.value <= 0);
        if lo_nonneg {
            vec![self.nonneg_side(clock)]
        } else if hi_nonpos {
            vec![self.nonpos_side(clock)]
        } else {
            let pos = self.intersect(&DiffRange::at_least(0));
            let neg = self.intersect(&DiffRange::below(0));
            let mut out = vec![];
            if !pos.is_empty() {
                out.push(pos.nonneg_side(clock));
            }
            if !neg.is_empty() {
                out.push(neg.nonpos_side(clock));
            }
            out
        }
    }

    // self ⊆ [0,∞), nonempty
    fn nonneg_side(&self, clock: ClockId) -> Vec<Constraint> {
        let lo = self.lo.expect("nonnegative range has a lower end");
        let mk = |rel, c: i64| Constraint::new(clock, Form::TMinusX, rel, c as u64);
        if let Some(h) = self.hi {
            if h.value == lo.value {
                return vec![mk(Rel::Eq, lo.value)];
            }
        }
        let mut out = vec![];
        if lo.value > 0 || !lo.inclusive || self.hi.is_none() {
            out.push(mk(if lo.inclusive { Rel::Ge } else { Rel::Gt }, lo.value));
        }
        if let Some(h) = self.hi {
            out.push(mk(if h.inclusive { Rel::Le } else { Rel::Lt }, h.value));
        }
        out
    }

    // self ⊆ (−∞,0], nonempty; e = −d
    fn nonpos_side(&self, clock: ClockId) -> Vec<Constraint> {
        let hi = self.hi.expect("nonpositive range has an upper end");
        let mk = |rel, c: i64| Constraint::new(clock, Form::XMinusT, rel, (-c) as u64);
        if let Some(l) = self.lo {
            if l.value == hi.value {
                return vec![mk(Rel::Eq, hi.value)];
            }
        }
        let mut out = vec![];
        if hi.value < 0 || !hi.inclusive || self.lo.is_none() {
            out.push(mk(if hi.inclusive { Rel::Ge } else { Rel::Gt }, hi.value));
        }
        if let Some(l) = self.lo {
            out.push(mk(if l.inclusive { Rel::Le } else { Rel::Lt }, l.value));
        }
        out
    }
}

impl fmt::Display for DiffRange {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.lo {
            None => f.write_str("(-inf")?,
            Some(b) => write!(f, "{}{}", if b.inclusive { "[" } else { "(" }, b.value)?,
        }
        match self.hi {
            None => f.write_str(",inf)"),
            Some(b) => write!(f, ",{}{}", b.value, if b.inclusive { "]" } else { ")" }),
        }
    }
}

/// Conjunction of constraints; empty means `true`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Guard {
    atoms: Vec<Constraint>,
}

impl Guard {
    pub fn tt() -> Self {
        Guard { atoms: vec![] }
    }

    pub fn new(mut atoms: Vec<Constraint>) -> Self {
        atoms.sort();
        atoms.dedup();
        Guard { atoms }
    }

    pub fn constraints(&self) -> &[Constraint] {
        &self.atoms
    }

    pub fn is_true(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn clocks(&self) -> BTreeSet<ClockId> {
        self.atoms.iter().map(|c| c.clock).collect()
    }

    pub fn and(&self, other: &Guard) -> Guard {
        Guard::new(self.atoms.iter().chain(&other.atoms).copied().collect())
    }

    /// `ν, τ ⊨ g`; every clock of `g` must index into `nu`.
    pub fn holds(&self, nu: &[Rational], t: Rational) -> Result<bool, GuardError> {
        for a in &self.atoms {
            let x = *nu.get(a.clock).ok_or(GuardError::UnknownClock(a.clock))?;
            if !a.holds(x, t) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Unchecked variant for validated automata.
    pub(crate) fn holds_fast(&self, nu: &[Rational], t: Rational) -> bool {
        self.atoms.iter().all(|a| a.holds(nu[a.clock], t))
    }

    /// Intersected range of `T − x` per mentioned clock.
    pub fn ranges(&self) -> BTreeMap<ClockId, DiffRange> {
        let mut out: BTreeMap<ClockId, DiffRange> = BTreeMap::new();
        for a in &self.atoms {
            let r = a.range();
            out.entry(a.clock)
                .and_modify(|cur| *cur = cur.intersect(&r))
                .or_insert(r);
        }
        out
    }

    /// Clocks are independent, so the guard is satisfiable iff no clock's
    /// range is empty.
    pub fn is_satisfiable(&self) -> bool {
        self.ranges().values().all(|r| !r.is_empty())
    }

    pub fn disjoint(&self, other: &Guard) -> bool {
        !self.and(other).is_satisfiable()
    }

    /// Guards for a conjunction of per-clock ranges; ranges that straddle 0
    /// multiply out, and the results are pairwise disjoint.
    pub fn from_ranges(ranges: &[(ClockId, DiffRange)]) -> Vec<Guard> {
        let mut acc: Vec<Vec<Constraint>> = vec![vec![]];
        for (clock, range) in ranges {
            if range.is_full() {
                continue;
            }
            let alts = range.to_constraints(*clock);
            acc = acc
                .iter()
                .flat_map(|prefix| {
                    alts.iter().map(move |alt| {
                        let mut v = prefix.clone();
                        v.extend(alt.iter().copied());
                        v
                    })
                })
                .collect();
        }
        acc.into_iter().map(Guard::new).collect()
    }

    pub fn display_with<'a>(&'a self, names: &'a [String]) -> GuardDisplay<'a> {
        GuardDisplay { guard: self, names }
    }

    /// Parses `true` or `&`-joined `T-x REL c` / `x-T REL c` atoms.
    pub fn parse(
        text: &str,
        clock: &mut impl FnMut(&str) -> Option<ClockId>,
    ) -> Result<Guard, GuardError> {
        let syntax = |reason: &str| GuardError::Syntax {
            text: text.to_string(),
            reason: reason.to_string(),
        };
        let trimmed = text.trim();
        if trimmed.is_empty() || trimmed == "true" || trimmed == "⊤" {
            return Ok(Guard::tt());
        }
        let mut atoms = vec![];
        for part in trimmed.split('&') {
            let part: String = part.chars().filter(|c| !c.is_whitespace()).collect();
            let part = part.replace('≤', "<=").replace('≥', ">=").replace('−', "-");
            let rel_at = part
                .find(['<', '>', '='])
                .ok_or_else(|| syntax("missing relation"))?;
            let (lhs, rest) = part.split_at(rel_at);
            let (rel, num) = if let Some(n) = rest.strip_prefix("<=") {
                (Rel::Le, n)
            } else if let Some(n) = rest.strip_prefix(">=") {
                (Rel::Ge, n)
            } else if let Some(n) = rest.strip_prefix('<') {
                (Rel::Lt, n)
            } else if let Some(n) = rest.strip_prefix('>') {
                (Rel::Gt, n)
            } else if let Some(n) = rest.strip_prefix("==") {
                (Rel::Eq, n)
            } else {
                (Rel::Eq, &rest[1..])
            };
            let c: u64 = num
                .parse()
                .map_err(|_| syntax("constant must be a natural number"))?;
            let (form, name) = if let Some(x) = lhs.strip_prefix("T-") {
                (Form::TMinusX, x)
            } else if let Some(x) = lhs.strip_suffix("-T") {
                (Form::XMinusT, x)
            } else {
                return Err(syntax("left side must be `T-x` or `x-T`"));
            };
            let id = clock(name).ok_or_else(|| GuardError::UnknownClockName(name.to_string()))?;
            atoms.push(Constraint::new(id, form, rel, c));
        }
        Ok(Guard::new(atoms))
    }
}

pub struct GuardDisplay<'a> {
    guard: &'a Guard,
    names: &'a [String],
}

impl fmt::Display for GuardDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.guard.is_true() {
            return f.write_str("true");
        }
        for (i, a) in self.guard.atoms.iter().enumerate() {
            if i > 0 {
                f.write_str(" & ")?;
            }
            let name = self.names.get(a.clock).map(String::as_str).unwrap_or("?");
            match a.form {
                Form::TMinusX => write!(f, "T-{name} {} {}", a.rel.as_str(), a.c)?,
                Form::XMinusT => write!(f, "{name}-T {} {}", a.rel.as_str(), a.c)?,
            }
        }
        Ok(())
    }
}

/// Boolean combination of per-clock range literals.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum GuardExpr {
    True,
    False,
    Lit(ClockId, DiffRange),
    Not(Box<GuardExpr>),
    And(Vec<GuardExpr>),
    Or(Vec<GuardExpr>),
}

impl GuardExpr {
    pub fn lit(clock: ClockId, range: DiffRange) -> GuardExpr {
        if range.is_empty() {
            GuardExpr::False
        } else if range.is_full() {
            GuardExpr::True
        } else {
            GuardExpr::Lit(clock, range)
        }
    }

    pub fn not(e: GuardExpr) -> GuardExpr {
        match e {
            GuardExpr::True => GuardExpr::False,
            GuardExpr::False => GuardExpr::True,
            GuardExpr::Not(inner) => *inner,
            e => GuardExpr::Not(Box::new(e)),
        }
    }

    pub fn and(items: impl IntoIterator<Item = GuardExpr>) -> GuardExpr {
        let mut out = vec![];
        for e in items {
            match e {
                GuardExpr::True => {}
                GuardExpr::False => return GuardExpr::False,
                GuardExpr::And(v) => out.extend(v),
                e => out.push(e),
            }
        }
        match out.len() {
            0 => GuardExpr::True,
            1 => out.pop().unwrap(),
            _ => GuardExpr::And(out),
        }
    }

    pub fn or(items: impl IntoIterator<Item = GuardExpr>) -> GuardExpr {
        let mut out = vec![];
        for e in items {
            match e {
                GuardExpr::False => {}
                GuardExpr::True => return GuardExpr::True,
                GuardExpr::Or(v) => out.extend(v),
                e => out.push(e),
            }
        }
        match out.len() {
            0 => GuardExpr::False,
            1 => out.pop().unwrap(),
            _ => GuardExpr::Or(out),
        }
    }

    pub fn from_guard(g: &Guard) -> GuardExpr {
        GuardExpr::and(g.ranges().into_iter().map(|(c, r)| GuardExpr::lit(c, r)))
    }

    pub fn eval(&self, nu: &[Rational], t: Rational) -> bool {
        match self {
            GuardExpr::True => true,
            GuardExpr::False => false,
            GuardExpr::Lit(c, r) => r.contains(t - nu[*c]),
            GuardExpr::Not(e) => !e.eval(nu, t),
            GuardExpr::And(v) => v.iter().all(|e| e.eval(nu, t)),
            GuardExpr::Or(v) => v.iter().any(|e| e.eval(nu, t)),
        }
    }

    fn count_lits(&self, out: &mut BTreeMap<ClockId, usize>) {
        match self {
            GuardExpr::True | GuardExpr::False => {}
            GuardExpr::Lit(c, _) => *out.entry(*c).or_default() += 1,
            GuardExpr::Not(e) => e.count_lits(out),
            GuardExpr::And(v) | GuardExpr::Or(v) => v.iter().for_each(|e| e.count_lits(out)),
        }
    }

    fn breakpoints(&self, clock: ClockId, out: &mut BTreeSet<i64>) {
        match self {
            GuardExpr::True | GuardExpr::False => {}
            GuardExpr::Lit(c, r) => {
                if *c == clock {
                    out.extend(r.lo.map(|b| b.value));
                    out.extend(r.hi.map(|b| b.value));
                }
            }
            GuardExpr::Not(e) => e.breakpoints(clock, out),
            GuardExpr::And(v) | GuardExpr::Or(v) => {
                v.iter().for_each(|e| e.breakpoints(clock, out))
            }
        }
    }

    /// Fixes `clock`'s difference to `d` and simplifies.
    fn substitute(&self, clock: ClockId, d: Rational) -> GuardExpr {
        match self {
            GuardExpr::True => GuardExpr::True,
            GuardExpr::False => GuardExpr::False,
            GuardExpr::Lit(c, r) if *c == clock => {
                if r.contains(d) {
                    GuardExpr::True
                } else {
                    GuardExpr::False
                }
            }
            GuardExpr::Lit(..) => self.clone(),
            GuardExpr::Not(e) => GuardExpr::not(e.substitute(clock, d)),
            GuardExpr::And(v) => GuardExpr::and(v.iter().map(|e| e.substitute(clock, d))),
            GuardExpr::Or(v) => GuardExpr::or(v.iter().map(|e| e.substitute(clock, d))),
        }
    }

    /// Pairwise-disjoint conjunctive guards whose union is `self`.
    pub fn refine(&self) -> Vec<Guard> {
        let mut counts = BTreeMap::new();
        self.count_lits(&mut counts);
        // split on the most shared clocks first
        let mut clocks: Vec<ClockId> = counts.keys().copied().collect();
        clocks.sort_by_key(|c| std::cmp::Reverse(counts[c]));
        let mut cubes = vec![];
        refine_rec(self.clone(), &clocks, &mut vec![], &mut cubes);
        cubes
            .iter()
            .flat_map(|cube| Guard::from_ranges(cube))
            .collect()
    }
}

/// Elementary cells of ℝ cut at `points`, in increasing order.
fn cells(points: &BTreeSet<i64>) -> Vec<(DiffRange, Rational)> {
    let pts: Vec<i64> = points.iter().copied().collect();
    let mut out = vec![];
    let r = |v: i64| Rational::from_integer(v);
    out.push((DiffRange::below(pts[0]), r(pts[0] - 1)));
    for (k, &p) in pts.iter().enumerate() {
        out.push((DiffRange::point(p), r(p)));
        match pts.get(k + 1) {
            Some(&next) => out.push((
                DiffRange::new(Some(Bound::excl(p)), Some(Bound::excl(next))),
                (r(p) + r(next)) / r(2),
            )),
            None => out.push((DiffRange::above(p), r(p + 1))),
        }
    }
    out
}

fn refine_rec(
    expr: GuardExpr,
    clocks: &[ClockId],
    prefix: &mut Vec<(ClockId, DiffRange)>,
    out: &mut Vec<Vec<(ClockId, DiffRange)>>,
) {
    match expr {
        GuardExpr::False => return,
        GuardExpr::True => {
            out.push(prefix.clone());
            return;
        }
        _ => {}
    }
    let Some((&clock, rest)) = clocks.split_first() else {
        unreachable!("literals left after all clocks were fixed");
    };
    let mut points = BTreeSet::new();
    expr.breakpoints(clock, &mut points);
    if points.is_empty() {
        return refine_rec(expr, rest, prefix, out);
    }
    points.insert(0);
    // consecutive cells with the same residual form one range
    let mut groups: Vec<(DiffRange, GuardExpr)> = vec![];
    for (cell, sample) in cells(&points) {
        let residual = expr.substitute(clock, sample);
        match groups.last_mut() {
            Some((range, res)) if *res == residual => range.hi = cell.hi,
            _ => groups.push((cell, residual)),
        }
    }
    for (range, residual) in groups {
        if residual == GuardExpr::False {
            continue;
        }
        let pushed = !range.is_full();
        if pushed {
            prefix.push((clock, range));
        }
        refine_rec(residual, rest, prefix, out);
        if pushed {
            prefix.pop();
        }
    }
}
