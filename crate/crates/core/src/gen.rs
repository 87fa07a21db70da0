//! Seeded random words, formulas and automata for property tests.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::automaton::{Builder, Constraint, Direction, Form, Guard, Po2dta, Rel};
use crate::formula::{Formula, Modality};
use crate::interval::Interval;
use crate::word::{Alphabet, Rational, Symbol, TimedWord};

/// Words start at 0 and advance by `1..=max_gap` steps of `1/grid`.
#[derive(Clone, Copy, Debug)]
pub struct WordSpec {
    pub min_len: usize,
    pub max_len: usize,
    pub grid: i64,
    pub max_gap: i64,
}

impl Default for WordSpec {
    fn default() -> Self {
        WordSpec {
            min_len: 1,
            max_len: 6,
            grid: 4,
            max_gap: 8,
        }
    }
}

pub fn random_word(rng: &mut impl Rng, sigma: &Alphabet, spec: WordSpec) -> TimedWord {
    let letters: Vec<&Symbol> = sigma.iter().collect();
    let n = rng.gen_range(spec.min_len..=spec.max_len);
    let mut t = 0i64;
    let mut pairs = Vec::with_capacity(n);
    for i in 0..n {
        if i > 0 {
            t += rng.gen_range(1..=spec.max_gap);
        }
        pairs.push((
            (*letters.choose(rng).unwrap()).clone(),
            Rational::new(t, spec.grid),
        ));
    }
    TimedWord::from_pairs(pairs).expect("generated stamps increase")
}

/// Which interval shapes the formula generator draws.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum IntervalKind {
    LowerBound,
    Bounded,
    /// Any non-punctual interval.
    Any,
}

#[derive(Clone, Copy, Debug)]
pub struct FormulaSpec {
    pub depth: usize,
    pub max_const: u64,
    pub kind: IntervalKind,
    pub future_only: bool,
}

pub fn random_interval(rng: &mut impl Rng, kind: IntervalKind, max_const: u64) -> Interval {
    let kind = match kind {
        IntervalKind::Any if rng.gen_bool(0.5) => IntervalKind::LowerBound,
        IntervalKind::Any => IntervalKind::Bounded,
        k => k,
    };
    match kind {
        IntervalKind::LowerBound => {
            let l = rng.gen_range(0..=max_const);
            if rng.gen_bool(0.5) {
                Interval::at_least(l)
            } else {
                Interval::greater_than(l)
            }
        }
        _ => {
            let u = rng.gen_range(1..=max_const.max(1));
            let l = rng.gen_range(0..u);
            Interval::new(l, Some(u), rng.gen_bool(0.5), rng.gen_bool(0.5)).expect("l < u")
        }
    }
}

pub fn random_formula(rng: &mut impl Rng, sigma: &Alphabet, spec: FormulaSpec) -> Formula {
    let letters: Vec<&Symbol> = sigma.iter().collect();
    gen_formula(rng, &letters, spec, spec.depth)
}

fn gen_formula(
    rng: &mut impl Rng,
    letters: &[&Symbol],
    spec: FormulaSpec,
    depth: usize,
) -> Formula {
    let leaf = |rng: &mut _| -> Formula {
        match rng_pick(rng, 10) {
            0 => Formula::tt(),
            _ => Formula::sym(letters.choose(rng).unwrap()),
        }
    };
    if depth == 0 {
        return leaf(rng);
    }
    match rng_pick(rng, 8) {
        0 => leaf(rng),
        1 => Formula::not(gen_formula(rng, letters, spec, depth - 1)),
        2 => Formula::and(
            gen_formula(rng, letters, spec, depth - 1),
            gen_formula(rng, letters, spec, depth - 1),
        ),
        3 => Formula::or(
            gen_formula(rng, letters, spec, depth - 1),
            gen_formula(rng, letters, spec, depth - 1),
        ),
        4 => {
            // letter-guarded modality, the common shape in practice
            let m = gen_modal(rng, letters, spec, depth);
            Formula::and(Formula::sym(letters.choose(rng).unwrap()), m)
        }
        _ => gen_modal(rng, letters, spec, depth),
    }
}

fn gen_modal(rng: &mut impl Rng, letters: &[&Symbol], spec: FormulaSpec, depth: usize) -> Formula {
    let m = if spec.future_only || rng.gen_bool(0.5) {
        Modality::F
    } else {
        Modality::P
    };
    let iv = random_interval(rng, spec.kind, spec.max_const);
    Formula::modal(m, iv, gen_formula(rng, letters, spec, depth - 1))
}

fn rng_pick(rng: &mut impl Rng, n: u32) -> u32 {
    rng.gen_range(0..n)
}

#[derive(Clone, Copy, Debug)]
pub struct AutomatonSpec {
    /// Progress edges besides the marker completions.
    pub max_edges: usize,
    pub max_clocks: usize,
    pub max_const: u64,
    pub max_states: usize,
    /// Restrict atoms to `T−x ≈ c` and `x−T < c`.
    pub table_rows_only: bool,
}

impl Default for AutomatonSpec {
    fn default() -> Self {
        AutomatonSpec {
            max_edges: 3,
            max_clocks: 2,
            max_const: 2,
            max_states: 3,
            table_rows_only: true,
        }
    }
}

fn random_constraint(rng: &mut impl Rng, clocks: usize, spec: AutomatonSpec) -> Constraint {
    let clock = rng.gen_range(0..clocks);
    let c = rng.gen_range(0..=spec.max_const);
    let rels = [Rel::Lt, Rel::Le, Rel::Gt, Rel::Ge, Rel::Eq];
    if rng.gen_bool(0.25) {
        let rel = if spec.table_rows_only {
            Rel::Lt
        } else {
            *rels.choose(rng).unwrap()
        };
        // x−T < 0 is unsatisfiable; keep the constant positive there
        let c = if rel == Rel::Lt { c.max(1) } else { c };
        Constraint::new(clock, Form::XMinusT, rel, c)
    } else {
        Constraint::new(clock, Form::TMinusX, *rels.choose(rng).unwrap(), c)
    }
}

/// A valid po2DTA with random progress edges on `Σ` letters and `⊤` marker
/// completions. Retries until the validator is satisfied.
pub fn random_po2dta(rng: &mut impl Rng, sigma: &Alphabet, spec: AutomatonSpec) -> Po2dta {
    let letters: Vec<Symbol> = sigma.iter().cloned().collect();
    loop {
        let n = rng.gen_range(1..=spec.max_states);
        let clocks = rng.gen_range(1..=spec.max_clocks);
        let mut b = Builder::new(sigma.clone());
        for k in 0..clocks {
            b.clock(&format!("x{k}"));
        }
        // q0 is the start with the highest rank
        let states: Vec<(usize, Direction)> = (0..n)
            .map(|i| {
                let dir = if rng.gen_bool(0.5) {
                    Direction::Forward
                } else {
                    Direction::Backward
                };
                (b.state(format!("q{i}"), Some(dir), (n - i) as u32), dir)
            })
            .collect();
        let t = b.state("t", None, 0);
        let r = b.state("r", None, 0);
        let edges = rng.gen_range(1..=spec.max_edges);
        for _ in 0..edges {
            let from = rng.gen_range(0..n);
            let to = match rng.gen_range(0..(n - from) + 1) {
                0 => t,
                1 => r,
                k => states[from + k - 1].0,
            };
            let atoms = (0..rng.gen_range(0..=2))
                .map(|_| random_constraint(rng, clocks, spec))
                .collect();
            let resets = (0..clocks).filter(|_| rng.gen_bool(0.4)).collect();
            b.transition(
                states[from].0,
                letters.choose(rng).unwrap().clone(),
                Guard::new(atoms),
                resets,
                to,
            );
        }
        for &(q, dir) in &states {
            let target = if rng.gen_bool(0.5) { t } else { r };
            let marker = match dir {
                Direction::Forward => Symbol::end_marker(),
                Direction::Backward => Symbol::start_marker(),
            };
            b.transition(q, marker, Guard::tt(), vec![], target);
        }
        if let Ok(a) = b.build(states[0].0, t, r) {
            return a;
        }
    }
}
