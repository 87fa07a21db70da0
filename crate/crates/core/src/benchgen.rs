//! Tiling-reduction formula families, their word encoding, and a brute-force
//! tiling checker to test them against.
//!
//! A tiling is a list of rows, bottom row first; `T(i,j)` is `rows[j][i]`.
//! The encoding concatenates rows, each followed by the separator `s`.

use std::collections::BTreeSet;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::analysis::SearchBounds;
use crate::formula::Formula;
use crate::interval::Interval;
use crate::word::{Alphabet, Rational, Symbol, TimedWord, WordError};

pub const SEPARATOR: &str = "s";

/// Largest `n` accepted by the exponential families; keeps `2ⁿ(2ⁿ+1)` in range.
pub const MAX_EXP_N: u32 = 30;

#[derive(Debug, Error)]
pub enum BenchError {
    #[error("invalid instance: {0}")]
    Invalid(String),
    #[error("empty tiling")]
    EmptyTiling,
    #[error("ragged tiling: row {row} has {found} tiles, expected {expected}")]
    Ragged {
        row: usize,
        expected: usize,
        found: usize,
    },
    #[error("cannot decode word: {0}")]
    Decode(String),
    #[error(transparent)]
    Word(#[from] WordError),
}

/// Tiles `X` with horizontal and vertical matching relations.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TilingSystem {
    pub tiles: Vec<String>,
    pub horizontal: Vec<(String, String)>,
    pub vertical: Vec<(String, String)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "lowercase")]
pub enum Family {
    /// `2ⁿ` columns, any number of rows; `T(1,1)=first`, `T(2ⁿ,m)=last`.
    Expspace { first: String, last: String },
    /// `2ⁿ × 2ⁿ` square whose bottom row starts with `prefix` (length n).
    Nexptime { prefix: Vec<String> },
    /// Corridor of width n between `bottom` and `top`, with the left
    /// column in `left` and the right column in `right`.
    Pspace {
        left: Vec<String>,
        right: Vec<String>,
        top: Vec<String>,
        bottom: Vec<String>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TilingInstance {
    pub n: u32,
    #[serde(flatten)]
    pub system: TilingSystem,
    #[serde(flatten)]
    pub family: Family,
}

pub type Tiling = Vec<Vec<Symbol>>;

/// How [`tiling_to_word`] spaces consecutive letters.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Scheme {
    /// Stamps `0, 1, 2, …`
    IntegerGrid,
    /// Stamps `0, gap, 2·gap, …`
    CorridorSpacing(Rational),
}

impl TilingSystem {
    fn tile_set(&self) -> BTreeSet<&str> {
        self.tiles.iter().map(String::as_str).collect()
    }

    pub fn matches_h(&self, a: &str, b: &str) -> bool {
        self.horizontal.iter().any(|(x, y)| x == a && y == b)
    }

    pub fn matches_v(&self, a: &str, b: &str) -> bool {
        self.vertical.iter().any(|(x, y)| x == a && y == b)
    }
}

impl TilingInstance {
    pub fn validate(&self) -> Result<(), BenchError> {
        let bad = |m: String| Err(BenchError::Invalid(m));
        if self.n == 0 {
            return bad("n must be at least 1".into());
        }
        if self.system.tiles.is_empty() {
            return bad("no tiles".into());
        }
        let tiles = self.system.tile_set();
        if tiles.len() != self.system.tiles.len() {
            return bad("duplicate tile".into());
        }
        for t in &tiles {
            if *t == SEPARATOR || Symbol::new(t).is_marker() || t.is_empty() {
                return bad(format!("reserved tile name {t:?}"));
            }
        }
        let known = |t: &String| -> Result<(), BenchError> {
            if tiles.contains(t.as_str()) {
                Ok(())
            } else {
                Err(BenchError::Invalid(format!("unknown tile {t:?}")))
            }
        };
        for (a, b) in self.system.horizontal.iter().chain(&self.system.vertical) {
            known(a)?;
            known(b)?;
        }
        let n = self.n as usize;
        match &self.family {
            Family::Expspace { first, last } => {
                self.check_exp_n()?;
                known(first)?;
                known(last)?;
            }
            Family::Nexptime { prefix } => {
                self.check_exp_n()?;
                if prefix.len() != n {
                    return bad(format!("prefix has {} tiles, expected {n}", prefix.len()));
                }
                prefix.iter().try_for_each(known)?;
            }
            Family::Pspace {
                left,
                right,
                top,
                bottom,
            } => {
                if top.len() != n || bottom.len() != n {
                    return bad(format!("top and bottom rows must have {n} tiles"));
                }
                left.iter()
                    .chain(right)
                    .chain(top)
                    .chain(bottom)
                    .try_for_each(known)?;
            }
        }
        Ok(())
    }

    fn check_exp_n(&self) -> Result<(), BenchError> {
        if self.n > MAX_EXP_N {
            return Err(BenchError::Invalid(format!(
                "n = {} exceeds {MAX_EXP_N}",
                self.n
            )));
        }
        Ok(())
    }

    /// Row width of a solution: `2ⁿ`, or `n` for corridors.
    pub fn width(&self) -> usize {
        match self.family {
            Family::Pspace { .. } => self.n as usize,
            _ => 1usize << self.n,
        }
    }

    /// Tiles plus the separator.
    pub fn alphabet(&self) -> Alphabet {
        self.system
            .tiles
            .iter()
            .map(|t| Symbol::new(t))
            .chain([Symbol::new(SEPARATOR)])
            .collect()
    }

    pub fn scheme(&self) -> Scheme {
        match self.family {
            Family::Pspace { .. } => Scheme::CorridorSpacing(Rational::new(3, 2)),
            _ => Scheme::IntegerGrid,
        }
    }

    pub fn formula(&self) -> Result<Formula, BenchError> {
        match self.family {
            Family::Expspace { .. } => gen_expspace(self),
            Family::Nexptime { .. } => gen_nexptime(self),
            Family::Pspace { .. } => gen_pspace(self),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("instances serialise")
    }

    pub fn from_json(text: &str) -> Result<Self, BenchError> {
        let inst: TilingInstance =
            serde_json::from_str(text).map_err(|e| BenchError::Invalid(e.to_string()))?;
        inst.validate()?;
        Ok(inst)
    }
}

/// Shared vocabulary of the three families.
struct Vocab<'a> {
    inst: &'a TilingInstance,
    s: Formula,
    xx: Formula,
    xxs: Formula,
    atlast: Formula,
}

impl<'a> Vocab<'a> {
    fn new(inst: &'a TilingInstance) -> Self {
        let s = Formula::atom(SEPARATOR);
        let xx = Formula::or_all(inst.system.tiles.iter().map(|t| Formula::atom(t)));
        let xxs = Formula::or(xx.clone(), s.clone());
        let atlast = Formula::not(Formula::f(Interval::anywhere(), xxs.clone()));
        Vocab {
            inst,
            s,
            xx,
            xxs,
            atlast,
        }
    }

    fn tiles(&self) -> impl Iterator<Item = &'a String> {
        self.inst.system.tiles.iter()
    }

    fn any_of<'b>(names: impl IntoIterator<Item = &'b String>) -> Formula {
        Formula::or_all(names.into_iter().map(|t| Formula::atom(t)))
    }

    /// `⋁ {b | (a,b) ∈ rel}`
    fn successors(rel: &[(String, String)], a: &str) -> Formula {
        Vocab::any_of(rel.iter().filter(|(x, _)| x == a).map(|(_, b)| b))
    }

    /// `⋀_a (a ⇒ body(a))`
    fn each_tile(&self, body: impl Fn(&str) -> Formula) -> Formula {
        Formula::and_all(
            self.tiles()
                .map(|a| Formula::implies(Formula::atom(a), body(a))),
        )
    }
}

/// `F_I(φ₁ ∧ F_I(φ₂ ∧ … F_I φ_k))`
fn steps(iv: Interval, items: Vec<Formula>) -> Formula {
    let mut it = items.into_iter().rev();
    let mut acc = Formula::f(iv, it.next().expect("at least one step"));
    for phi in it {
        acc = Formula::f(iv, Formula::and(phi, acc));
    }
    acc
}

fn untimed_f(phi: Formula) -> Formula {
    Formula::f(Interval::anywhere(), phi)
}

/// EXPSPACE family over `MITL[F_I]`: integer-spaced rows of width `2ⁿ`.
pub fn gen_expspace(inst: &TilingInstance) -> Result<Formula, BenchError> {
    inst.validate()?;
    let Family::Expspace { first, last } = &inst.family else {
        return Err(BenchError::Invalid("not an EXPSPACE instance".into()));
    };
    let v = Vocab::new(inst);
    let w = 1u64 << inst.n;
    let sys = &inst.system;

    let phi_1 = Formula::globally(Formula::implies(
        v.xxs.clone(),
        Formula::or(
            Formula::and(
                Formula::not(Formula::f(Interval::open(0, 1), v.xxs.clone())),
                Formula::f(Interval::open_closed(0, 1), v.xxs.clone()),
            ),
            v.atlast.clone(),
        ),
    ));
    let phi_s = Formula::and(
        Formula::f(Interval::open_closed(w - 1, w), v.s.clone()),
        Formula::globally(Formula::implies(
            v.s.clone(),
            Formula::and(
                Formula::not(Formula::f(Interval::open_closed(0, w), v.s.clone())),
                Formula::or(
                    Formula::f(Interval::open_closed(w, w + 1), v.s.clone()),
                    v.atlast.clone(),
                ),
            ),
        )),
    );
    let phi_f = Formula::atom(first);
    let phi_t = untimed_f(Formula::and(
        Formula::atom(last),
        Formula::f(
            Interval::open_closed(0, 1),
            Formula::and(v.s.clone(), v.atlast.clone()),
        ),
    ));
    let phi_h = Formula::globally(v.each_tile(|a| {
        Formula::f(
            Interval::open_closed(0, 1),
            Formula::or(v.s.clone(), Vocab::successors(&sys.horizontal, a)),
        )
    }));
    let phi_v = Formula::globally(v.each_tile(|a| {
        Formula::or(
            Formula::f(Interval::open_closed(0, w + 1), v.atlast.clone()),
            Formula::f(
                Interval::open_closed(w, w + 1),
                Vocab::successors(&sys.vertical, a),
            ),
        )
    }));
    Ok(Formula::and_all([phi_1, phi_s, phi_f, phi_t, phi_h, phi_v]))
}

/// NEXPTIME family in the bounded future fragment: a `2ⁿ × 2ⁿ` square
/// occupying stamps `0 … l−1` with `l = 2ⁿ(2ⁿ+1)`.
pub fn gen_nexptime(inst: &TilingInstance) -> Result<Formula, BenchError> {
    inst.validate()?;
    let Family::Nexptime { prefix } = &inst.family else {
        return Err(BenchError::Invalid("not a NEXPTIME instance".into()));
    };
    let v = Vocab::new(inst);
    let w = 1u64 << inst.n;
    let l = w * (w + 1);
    let sys = &inst.system;
    let all_but_last = |phi| Formula::globally_within(Interval::closed(0, l - 2), phi);
    // stamps before the last row's separator predecessor
    let nonlast = |phi| Formula::globally_within(Interval::closed_open(0, l - 1 - (w + 1)), phi);

    let phi_1 = all_but_last(Formula::implies(
        v.xxs.clone(),
        Formula::and(
            Formula::not(Formula::f(Interval::closed_open(0, 1), v.xxs.clone())),
            Formula::f(Interval::closed(0, 1), v.xxs.clone()),
        ),
    ));
    let phi_s = Formula::and_all([
        Formula::f(Interval::closed_open(0, w), Formula::not(v.s.clone())),
        Formula::f(Interval::closed(0, w), v.s.clone()),
        nonlast(Formula::implies(
            v.s.clone(),
            Formula::and(
                Formula::not(Formula::f(Interval::closed(0, w), v.s.clone())),
                Formula::f(Interval::closed(0, w + 1), v.s.clone()),
            ),
        )),
    ]);
    let mut row: Vec<Formula> = prefix.iter().map(|t| Formula::atom(t)).collect();
    let head = row.remove(0);
    let phi_t = if row.is_empty() {
        head
    } else {
        Formula::and(head, steps(Interval::closed(0, 1), row))
    };
    let phi_h = all_but_last(v.each_tile(|a| {
        Formula::f(
            Interval::closed(0, 1),
            Formula::or(v.s.clone(), Vocab::successors(&sys.horizontal, a)),
        )
    }));
    let phi_v = nonlast(v.each_tile(|a| {
        Formula::f(
            Interval::open_closed(w, w + 1),
            Vocab::successors(&sys.vertical, a),
        )
    }));
    Ok(Formula::and_all([phi_1, phi_s, phi_t, phi_h, phi_v]))
}

/// PSPACE family over `MITL[F0]`: corridor of width n, letters spaced
/// strictly between 1 and 2 apart.
pub fn gen_pspace(inst: &TilingInstance) -> Result<Formula, BenchError> {
    inst.validate()?;
    let Family::Pspace {
        left,
        right,
        top,
        bottom,
    } = &inst.family
    else {
        return Err(BenchError::Invalid("not a PSPACE instance".into()));
    };
    let v = Vocab::new(inst);
    let n = inst.n as usize;
    let sys = &inst.system;
    let near = Interval::closed_open(0, 2);
    let atoms = |row: &[String]| -> Vec<Formula> { row.iter().map(|t| Formula::atom(t)).collect() };

    let phi_1 = Formula::globally(Formula::implies(
        v.xxs.clone(),
        Formula::and(
            Formula::not(Formula::f(Interval::closed(0, 1), v.xxs.clone())),
            Formula::or(v.atlast.clone(), Formula::f(near, v.xxs.clone())),
        ),
    ));
    let mut row_shape = vec![v.xx.clone(); n];
    row_shape.push(v.s.clone());
    let phi_n = Formula::globally(Formula::implies(
        v.s.clone(),
        Formula::or(v.atlast.clone(), steps(near, row_shape)),
    ));
    let phi_h = Formula::globally(v.each_tile(|a| {
        Formula::f(
            near,
            Formula::or(Vocab::successors(&sys.horizontal, a), v.s.clone()),
        )
    }));
    let not_last_row = untimed_f(Formula::and(v.s.clone(), untimed_f(v.s.clone())));
    let phi_v = Formula::and_all(v.tiles().map(|a| {
        let mut path = vec![v.xxs.clone(); n];
        path.push(Vocab::successors(&sys.vertical, a));
        Formula::globally(Formula::implies(
            Formula::and(Formula::atom(a), not_last_row.clone()),
            steps(near, path),
        ))
    }));
    // a row read from the current position, ending at the separator after it
    let row_here = |tiles: &[String], tail: Formula| {
        let mut items = atoms(tiles);
        items.push(tail);
        let head = items.remove(0);
        Formula::and(head, steps(near, items))
    };
    let phi_b = row_here(bottom, v.s.clone());
    let last_sep = Formula::and(v.s.clone(), v.atlast.clone());
    let phi_t = Formula::or(
        row_here(top, last_sep.clone()),
        untimed_f(Formula::and(
            v.s.clone(),
            steps(near, {
                let mut items = atoms(top);
                items.push(last_sep);
                items
            }),
        )),
    );
    let phi_l = Formula::and(
        Vocab::any_of(left),
        Formula::globally(Formula::implies(
            v.s.clone(),
            Formula::or(v.atlast.clone(), Formula::f(near, Vocab::any_of(left))),
        )),
    );
    let not_right = Vocab::any_of(v.tiles().filter(|a| !right.contains(a)));
    let phi_r = Formula::globally(Formula::not(Formula::and(
        not_right,
        Formula::f(near, v.s.clone()),
    )));
    Ok(Formula::and_all([
        phi_1, phi_n, phi_h, phi_v, phi_b, phi_t, phi_l, phi_r,
    ]))
}

/// Search bounds matching the NEXPTIME encoding exactly: `l` letters on
/// the integer grid within `[0, l−1]`.
pub fn nexptime_bounds(inst: &TilingInstance) -> Result<SearchBounds, BenchError> {
    inst.validate()?;
    if !matches!(inst.family, Family::Nexptime { .. }) {
        return Err(BenchError::Invalid("not a NEXPTIME instance".into()));
    }
    let w = 1i64 << inst.n;
    let l = w * (w + 1);
    Ok(SearchBounds {
        max_len: l as usize,
        grid: 1,
        horizon: Rational::from_integer(l - 1),
        alphabet: inst.alphabet(),
        budget: None,
    })
}

fn check_rectangular(t: &Tiling) -> Result<usize, BenchError> {
    let width = match t.first() {
        Some(row) if !row.is_empty() => row.len(),
        _ => return Err(BenchError::EmptyTiling),
    };
    for (row, r) in t.iter().enumerate() {
        if r.len() != width {
            return Err(BenchError::Ragged {
                row,
                expected: width,
                found: r.len(),
            });
        }
    }
    Ok(width)
}

/// Rows in order, each followed by `s`; `p` columns and `q` rows give
/// `q(p+1)` letters with separators at positions `j(p+1)−1`.
pub fn tiling_to_word(t: &Tiling, scheme: Scheme) -> Result<TimedWord, BenchError> {
    check_rectangular(t)?;
    let gap = match scheme {
        Scheme::IntegerGrid => Rational::one(),
        Scheme::CorridorSpacing(g) => g,
    };
    if gap <= Rational::zero() {
        return Err(BenchError::Invalid(format!("non-positive spacing {gap}")));
    }
    let sep = Symbol::new(SEPARATOR);
    let events: Vec<Symbol> = t
        .iter()
        .flat_map(|row| row.iter().cloned().chain([sep.clone()]))
        .collect();
    let stamps = (0..events.len() as i64).map(|k| gap * k).collect();
    Ok(TimedWord::new(events, stamps)?)
}

/// Inverse of [`tiling_to_word`], ignoring stamps: the word must end with
/// `s` and every row must be non-empty and of equal width.
pub fn word_to_tiling(w: &TimedWord) -> Result<Tiling, BenchError> {
    let sep = Symbol::new(SEPARATOR);
    if w.events().last() != Some(&sep) {
        return Err(BenchError::Decode(
            "word does not end with the separator".into(),
        ));
    }
    let rows: Tiling = w
        .events()
        .split(|e| *e == sep)
        .take(w.events().iter().filter(|e| **e == sep).count())
        .map(<[Symbol]>::to_vec)
        .collect();
    check_rectangular(&rows).map_err(|e| BenchError::Decode(e.to_string()))?;
    Ok(rows)
}

/// Reads `rows` rows of `width` tiles from the fixed slot layout of the
/// encoding, ignoring what sits in separator slots and anything after.
pub fn decode_layout(w: &TimedWord, width: usize, rows: usize) -> Result<Tiling, BenchError> {
    let need = rows * (width + 1);
    if w.len() + 1 < need {
        return Err(BenchError::Decode(format!(
            "word has {} letters, layout needs {}",
            w.len(),
            need - 1
        )));
    }
    let sep = Symbol::new(SEPARATOR);
    (0..rows)
        .map(|j| {
            (0..width)
                .map(|i| {
                    let e = w.event(j * (width + 1) + i);
                    if *e == sep {
                        Err(BenchError::Decode(format!(
                            "separator at tile slot ({i},{j})"
                        )))
                    } else {
                        Ok(e.clone())
                    }
                })
                .collect()
        })
        .collect()
}

/// Both matchings plus the family's boundary conditions.
pub fn check_tiling(t: &Tiling, inst: &TilingInstance) -> bool {
    let Ok(width) = check_rectangular(t) else {
        return false;
    };
    let sys = &inst.system;
    let tiles = sys.tile_set();
    if t.iter().flatten().any(|x| !tiles.contains(x.as_str())) {
        return false;
    }
    let h_ok = t.iter().all(|row| {
        row.windows(2)
            .all(|p| sys.matches_h(p[0].as_str(), p[1].as_str()))
    });
    let v_ok = t.windows(2).all(|rs| {
        rs[0]
            .iter()
            .zip(&rs[1])
            .all(|(a, b)| sys.matches_v(a.as_str(), b.as_str()))
    });
    if !(h_ok && v_ok) || width != inst.width() {
        return false;
    }
    let same = |row: &[Symbol], names: &[String]| {
        row.iter()
            .map(Symbol::as_str)
            .eq(names.iter().map(String::as_str))
    };
    match &inst.family {
        Family::Expspace { first, last } => {
            t[0][0].as_str() == first && t[t.len() - 1][width - 1].as_str() == last
        }
        Family::Nexptime { prefix } => t.len() == width && same(&t[0][..prefix.len()], prefix),
        Family::Pspace {
            left,
            right,
            top,
            bottom,
        } => {
            same(&t[0], bottom)
                && same(&t[t.len() - 1], top)
                && t.iter()
                    .all(|row| left.iter().any(|l| l == row[0].as_str()))
                && t.iter()
                    .all(|row| right.iter().any(|r| r == row[width - 1].as_str()))
        }
    }
}

/// Every `width`-wide arrangement with `1..=max_rows` rows, valid or not.
pub fn all_tilings(inst: &TilingInstance, max_rows: usize) -> Vec<Tiling> {
    let tiles: Vec<Symbol> = inst.system.tiles.iter().map(|t| Symbol::new(t)).collect();
    let rows = all_rows(&tiles, inst.width());
    let mut out = Vec::new();
    let mut layer: Vec<Tiling> = vec![vec![]];
    for _ in 0..max_rows {
        layer = layer
            .iter()
            .flat_map(|t| {
                rows.iter().map(move |r| {
                    let mut t = t.clone();
                    t.push(r.clone());
                    t
                })
            })
            .collect();
        out.extend(layer.iter().cloned());
    }
    out
}

fn all_rows(tiles: &[Symbol], width: usize) -> Vec<Vec<Symbol>> {
    let mut rows: Vec<Vec<Symbol>> = vec![vec![]];
    for _ in 0..width {
        rows = rows
            .iter()
            .flat_map(|r| {
                tiles.iter().map(move |x| {
                    let mut r = r.clone();
                    r.push(x.clone());
                    r
                })
            })
            .collect();
    }
    rows
}

/// Depth-first search for a solution with at most `max_rows` rows (exactly
/// `2ⁿ` for NEXPTIME). Rows are extended only through matching pairs.
pub fn solve(inst: &TilingInstance, max_rows: usize) -> Option<Tiling> {
    let tiles: Vec<Symbol> = inst.system.tiles.iter().map(|t| Symbol::new(t)).collect();
    let sys = &inst.system;
    let rows: Vec<Vec<Symbol>> = all_rows(&tiles, inst.width())
        .into_iter()
        .filter(|r| {
            r.windows(2)
                .all(|p| sys.matches_h(p[0].as_str(), p[1].as_str()))
        })
        .collect();
    let max_rows = match inst.family {
        Family::Nexptime { .. } => inst.width(),
        _ => max_rows,
    };
    let mut t: Tiling = Vec::new();
    dfs(inst, &rows, max_rows, &mut t)
}

fn dfs(
    inst: &TilingInstance,
    rows: &[Vec<Symbol>],
    max_rows: usize,
    t: &mut Tiling,
) -> Option<Tiling> {
    if !t.is_empty() && check_tiling(t, inst) {
        return Some(t.clone());
    }
    if t.len() == max_rows {
        return None;
    }
    for r in rows {
        let fits = t.last().is_none_or(|prev| {
            prev.iter()
                .zip(r)
                .all(|(a, b)| inst.system.matches_v(a.as_str(), b.as_str()))
        });
        if fits {
            t.push(r.clone());
            let found = dfs(inst, rows, max_rows, t);
            t.pop();
            if found.is_some() {
                return found;
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    fn single(family: Family, n: u32) -> TilingInstance {
        TilingInstance {
            n,
            system: TilingSystem {
                tiles: vec!["x".into()],
                horizontal: vec![("x".into(), "x".into())],
                vertical: vec![("x".into(), "x".into())],
            },
            family,
        }
    }

    #[test]
    fn encoding_layout() {
        let x = Symbol::new("x");
        let w = tiling_to_word(&vec![vec![x.clone(), x.clone()]], Scheme::IntegerGrid).unwrap();
        assert_eq!(w, TimedWord::parse("x@0 x@1 s@2").unwrap());
        let w = tiling_to_word(
            &vec![vec![x.clone()]],
            Scheme::CorridorSpacing(Rational::new(3, 2)),
        )
        .unwrap();
        assert_eq!(w, TimedWord::parse("x@0 s@3/2").unwrap());
        assert!(matches!(
            tiling_to_word(&vec![], Scheme::IntegerGrid),
            Err(BenchError::EmptyTiling)
        ));
        assert!(matches!(
            tiling_to_word(&vec![vec![x.clone()], vec![]], Scheme::IntegerGrid),
            Err(BenchError::Ragged { .. })
        ));
        let t = vec![vec![x.clone(), x.clone()], vec![x.clone(), x]];
        let w = tiling_to_word(&t, Scheme::IntegerGrid).unwrap();
        assert_eq!(w.len(), 2 * (2 + 1));
        assert_eq!(word_to_tiling(&w).unwrap(), t);
        assert_eq!(decode_layout(&w, 2, 2).unwrap(), t);
    }

    #[test]
    fn validation() {
        let mut inst = single(
            Family::Nexptime {
                prefix: vec!["x".into()],
            },
            1,
        );
        assert!(inst.validate().is_ok());
        inst.n = 2;
        assert!(inst.validate().is_err());
        inst.n = 0;
        assert!(inst.validate().is_err());
        let mut inst = single(
            Family::Expspace {
                first: "x".into(),
                last: "y".into(),
            },
            1,
        );
        assert!(inst.validate().is_err());
        inst.family = Family::Expspace {
            first: "x".into(),
            last: "x".into(),
        };
        inst.system.tiles.push("s".into());
        assert!(inst.validate().is_err());
    }

    #[test]
    fn json_round_trip() {
        let inst = single(
            Family::Pspace {
                left: vec!["x".into()],
                right: vec!["x".into()],
                top: vec!["x".into(), "x".into()],
                bottom: vec!["x".into(), "x".into()],
            },
            2,
        );
        let text = inst.to_json();
        assert!(text.contains("\"family\": \"pspace\""));
        assert_eq!(TilingInstance::from_json(&text).unwrap(), inst);
    }

    #[test]
    fn checker_and_solver() {
        let inst = single(
            Family::Nexptime {
                prefix: vec!["x".into()],
            },
            1,
        );
        let x = Symbol::new("x");
        let square = vec![vec![x.clone(), x.clone()], vec![x.clone(), x.clone()]];
        assert!(check_tiling(&square, &inst));
        assert_eq!(solve(&inst, 0), Some(square.clone()));
        let mut no_v = inst.clone();
        no_v.system.vertical.clear();
        assert!(!check_tiling(&square, &no_v));
        assert_eq!(solve(&no_v, 0), None);
    }
}
