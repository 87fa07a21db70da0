//! Bounded witness search, satisfiability, sampled equivalence, sizes.
//!
//! Emptiness is decided only within explicit bounds: words of at most `N`
//! letters, stamps on the grid `1/g`, first stamp 0, last stamp at most
//! `T_max`. Inside those bounds the search is exhaustive.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use num_traits::Zero;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};
use thiserror::Error;

use crate::automaton::{Config, Po2dta, RunError, Verdict as RunVerdict};
use crate::bcompile::{closure_size, compile_bounded};
use crate::formula::{classify, modal_dag_size, Formula, Fragment};
use crate::gen::{random_word, WordSpec};
use crate::lbcompile::{compile_lb, CompileError};
use crate::oracle::{holds_at, language_member, OracleError};
use crate::word::{Alphabet, Rational, Symbol, TimedWord};

#[derive(Debug, Error)]
pub enum AnalysisError {
    #[error("{0} is not compilable (need a lower-bound or bounded formula)")]
    Fragment(String),
    #[error(transparent)]
    Compile(#[from] CompileError),
    #[error(transparent)]
    Run(#[from] RunError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error("witness {word} accepted by the automaton but rejected by the formula")]
    Inconsistent { word: String },
    #[error("no letters to sample from")]
    EmptyAlphabet,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchBounds {
    pub max_len: usize,
    pub grid: i64,
    pub horizon: Rational,
    pub alphabet: Alphabet,
    /// Stop after this many runs; the verdict is then inconclusive.
    pub budget: Option<u64>,
}

impl SearchBounds {
    /// `N = 2·|edges| + 2`, `g = N + 1`, `T_max = (c_max + 1)·N`.
    pub fn defaults_for(a: &Po2dta) -> Self {
        let n = 2 * a.transitions().len() + 2;
        SearchBounds {
            max_len: n,
            grid: n as i64 + 1,
            horizon: Rational::from_integer((a.max_constant() as i64 + 1) * n as i64),
            alphabet: a.alphabet().clone(),
            budget: None,
        }
    }

    pub fn to_json(&self) -> Value {
        json!({
            "max_len": self.max_len,
            "grid": self.grid,
            "horizon": self.horizon.to_string(),
            "alphabet": self.alphabet.iter().map(|s| s.as_str()).collect::<Vec<_>>(),
            "budget": self.budget,
        })
    }
}

#[derive(Clone, Debug)]
pub enum Verdict {
    Sat {
        witness: TimedWord,
        trace: Vec<Config>,
    },
    UnsatWithinBounds,
    /// The run budget ran out before the space was exhausted.
    Unknown,
}

impl Verdict {
    pub fn is_sat(&self) -> bool {
        matches!(self, Verdict::Sat { .. })
    }

    pub fn witness(&self) -> Option<&TimedWord> {
        match self {
            Verdict::Sat { witness, .. } => Some(witness),
            _ => None,
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            Verdict::Sat { .. } => "SAT",
            Verdict::UnsatWithinBounds => "UNSAT-within-bounds",
            Verdict::Unknown => "UNKNOWN-budget-exhausted",
        }
    }
}

#[derive(Clone, Debug, Default)]
pub struct SearchStats {
    pub words_checked: u64,
    pub runs: u64,
    pub elapsed: Duration,
}

#[derive(Clone, Debug)]
pub struct SearchOutcome {
    pub verdict: Verdict,
    pub bounds: SearchBounds,
    pub stats: SearchStats,
}

impl SearchOutcome {
    pub fn to_json(&self) -> Value {
        let mut doc = json!({
            "verdict": self.verdict.label(),
            "bounds": self.bounds.to_json(),
            "statistics": {
                "words_checked": self.stats.words_checked,
                "runs": self.stats.runs,
                "time": self.stats.elapsed.as_secs_f64(),
            },
        });
        if let Some(w) = self.verdict.witness() {
            doc["witness"] = json!(w.to_string());
        }
        doc
    }
}

struct Search<'a> {
    a: &'a Po2dta,
    bounds: &'a SearchBounds,
    letters: Vec<Symbol>,
    stats: SearchStats,
    out_of_budget: bool,
}

impl Search<'_> {
    fn run(
        &mut self,
        events: &[Symbol],
        stamps: &[i64],
        h: i64,
    ) -> Result<(RunVerdict, usize), RunError> {
        self.stats.runs += 1;
        if self.bounds.budget.is_some_and(|b| self.stats.runs > b) {
            self.out_of_budget = true;
        }
        let w = word_of(events, stamps, h);
        let res = self.a.run_quiet(&w, self.a.initial_valuation(), 1)?;
        Ok((res.verdict, res.max_head))
    }

    /// Lexicographic DFS over words of exactly `target` letters.
    fn dfs(
        &mut self,
        events: &mut Vec<Symbol>,
        stamps: &mut Vec<i64>,
        h: i64,
        cap: i64,
        target: usize,
    ) -> Result<bool, RunError> {
        if self.out_of_budget {
            return Ok(false);
        }
        let len = events.len();
        if len == target {
            self.stats.words_checked += 1;
            let (v, _) = self.run(events, stamps, h)?;
            return Ok(v == RunVerdict::Accept);
        }
        if len > 0 {
            // a run that never reached ◁ is decided by the prefix alone, and
            // that prefix was already tried at its own length
            let (_, max_head) = self.run(events, stamps, h)?;
            if max_head <= len {
                return Ok(false);
            }
        }
        let limit = self.bounds.horizon * h;
        let last = stamps.last().copied();
        for i in 0..self.letters.len() {
            let gaps = match last {
                None => 0..=0,
                Some(_) => 1..=cap,
            };
            for gap in gaps {
                let t = last.unwrap_or(0) + gap;
                if Rational::from_integer(t) > limit {
                    break;
                }
                events.push(self.letters[i].clone());
                stamps.push(t);
                if self.dfs(events, stamps, h, cap, target)? {
                    return Ok(true);
                }
                events.pop();
                stamps.pop();
            }
        }
        Ok(false)
    }
}

fn word_of(events: &[Symbol], stamps: &[i64], h: i64) -> TimedWord {
    TimedWord::new(
        events.to_vec(),
        stamps.iter().map(|&t| Rational::new(t, h)).collect(),
    )
    .expect("search stamps increase")
}

/// Grids tried in order: the powers of two dividing `g`, then `g` itself.
fn grid_levels(g: i64) -> Vec<i64> {
    let mut levels = Vec::new();
    let mut h = 1;
    while h < g {
        if g % h == 0 {
            levels.push(h);
        }
        h *= 2;
    }
    levels.push(g);
    levels
}

/// Grids for words of `n` letters. Guards only see integer parts and the
/// order of fractional parts of stamp differences, and `n` stamps have at
/// most `n` distinct fractional parts, so grid `n` already holds a
/// representative of every grid-`g` word when `g ≥ n` (integer horizons
/// keep the representative inside the bounds).
fn levels_for(n: usize, g: i64, horizon: Rational) -> Vec<i64> {
    let n = n.max(1) as i64;
    if g < n || !horizon.is_integer() {
        return grid_levels(g);
    }
    let mut levels: Vec<i64> = (0..).map(|k| 1i64 << k).take_while(|&h| h < n).collect();
    levels.push(n);
    levels
}

/// Region-equivalent copy of `w` on grid `g`: integer parts kept, distinct
/// fractional parts renumbered `1/g, 2/g, …` in order. `g` must exceed
/// the number of distinct non-zero fractional parts.
pub fn regrid(w: &TimedWord, g: i64) -> TimedWord {
    let frac = |t: Rational| t - t.floor();
    let fracs: BTreeSet<Rational> = w
        .stamps()
        .iter()
        .map(|&t| frac(t))
        .filter(|f| !f.is_zero())
        .collect();
    let fracs: Vec<Rational> = fracs.into_iter().collect();
    let stamps = w
        .stamps()
        .iter()
        .map(|&t| {
            let f = frac(t);
            let slot = if f.is_zero() {
                0
            } else {
                fracs.binary_search(&f).unwrap() as i64 + 1
            };
            t.floor() + Rational::new(slot, g)
        })
        .collect();
    TimedWord::new(w.events().to_vec(), stamps).expect("order is preserved")
}

/// Exhaustive bounded search for an accepted word. Shorter words first;
/// for each length the coarser grids first, then lexicographically by
/// (letter, stamp). Gaps wider than `c_max + 1` are never needed: every
/// difference spanning one exceeds all guard constants. Witnesses are
/// reported on grid `g`.
pub fn witness_search(a: &Po2dta, bounds: &SearchBounds) -> Result<SearchOutcome, AnalysisError> {
    let start = Instant::now();
    let mut search = Search {
        a,
        bounds,
        letters: bounds.alphabet.iter().cloned().collect(),
        stats: SearchStats::default(),
        out_of_budget: false,
    };
    let cmax = a.max_constant() as i64;
    let g = bounds.grid.max(1);
    let mut verdict = Verdict::UnsatWithinBounds;
    'lengths: for target in 0..=bounds.max_len {
        for h in levels_for(target, g, bounds.horizon) {
            let cap = (cmax + 1) * h;
            let (mut events, mut stamps) = (Vec::new(), Vec::new());
            if search.dfs(&mut events, &mut stamps, h, cap, target)? {
                let found = word_of(&events, &stamps, h);
                let witness = if g % h == 0 { found } else { regrid(&found, g) };
                let res = a.run(&witness, a.initial_valuation(), 1)?;
                assert_eq!(
                    res.verdict,
                    RunVerdict::Accept,
                    "regridded witness {witness}"
                );
                verdict = Verdict::Sat {
                    witness,
                    trace: res.trace,
                };
                break 'lengths;
            }
            if search.out_of_budget {
                verdict = Verdict::Unknown;
                break 'lengths;
            }
        }
    }
    let mut stats = search.stats;
    stats.elapsed = start.elapsed();
    Ok(SearchOutcome {
        verdict,
        bounds: bounds.clone(),
        stats,
    })
}

/// Compiler matching the formula's fragment.
pub fn compile(phi: &Formula, sigma: &Alphabet) -> Result<Po2dta, AnalysisError> {
    let tag = classify(phi);
    match tag.fragment {
        Fragment::LowerBound => Ok(compile_lb(phi, sigma)?),
        Fragment::Bounded => Ok(compile_bounded(phi, sigma)?),
        _ => Err(AnalysisError::Fragment(tag.to_string())),
    }
}

/// Classify, compile, search; a witness is re-checked by the oracle.
/// `Σ` is extended by the formula's atoms.
pub fn is_satisfiable(
    phi: &Formula,
    sigma: &Alphabet,
    bounds: Option<SearchBounds>,
) -> Result<SearchOutcome, AnalysisError> {
    let mut sigma = sigma.clone();
    sigma.extend(phi.atoms());
    let a = compile(phi, &sigma)?;
    let bounds = bounds.unwrap_or_else(|| SearchBounds::defaults_for(&a));
    let out = witness_search(&a, &bounds)?;
    if let Some(w) = out.verdict.witness() {
        if !language_member(w, phi)? {
            return Err(AnalysisError::Inconsistent {
                word: w.to_string(),
            });
        }
    }
    Ok(out)
}

#[derive(Clone, Debug)]
pub enum Side {
    /// Evaluated at the first position of `ρ`.
    Formula(Formula),
    /// Evaluated at the `▷` cell of `ρ'` (extracted formulas).
    Lifted(Formula),
    Automaton(Po2dta),
}

impl Side {
    pub fn eval(&self, w: &TimedWord) -> Result<bool, AnalysisError> {
        Ok(match self {
            Side::Formula(phi) => language_member(w, phi)?,
            Side::Lifted(phi) => holds_at(&w.extended(), 0, phi)?,
            Side::Automaton(a) => a.accepts(w)?,
        })
    }

    fn max_constant(&self) -> u64 {
        match self {
            Side::Formula(phi) | Side::Lifted(phi) => phi.max_constant(),
            Side::Automaton(a) => a.max_constant(),
        }
    }

    fn alphabet(&self) -> Alphabet {
        match self {
            Side::Formula(phi) | Side::Lifted(phi) => {
                phi.atoms().into_iter().filter(|s| !s.is_marker()).collect()
            }
            Side::Automaton(a) => a.alphabet().clone(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct SamplerConfig {
    /// Defaults to an automaton side's alphabet, else the formulas' atoms.
    pub alphabet: Option<Alphabet>,
    pub samples: usize,
    pub max_len: usize,
    pub grid: i64,
    pub seed: u64,
    /// Cap on the boundary-stamp words.
    pub max_boundary: usize,
}

impl Default for SamplerConfig {
    fn default() -> Self {
        SamplerConfig {
            alphabet: None,
            samples: 1000,
            max_len: 5,
            grid: 4,
            seed: 0,
            max_boundary: 20_000,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Counterexample {
    pub word: String,
    pub lhs: bool,
    pub rhs: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct EquivalenceReport {
    pub checked: usize,
    pub counterexample: Option<Counterexample>,
}

impl EquivalenceReport {
    pub fn passed(&self) -> bool {
        self.counterexample.is_none()
    }
}

/// Short words whose stamps sit on and right beside each integer up to
/// `c_max + 1`.
fn boundary_words(sigma: &[Symbol], cmax: u64, g: i64, cap: usize) -> Vec<TimedWord> {
    let mut points = BTreeSet::new();
    for k in 0..=(cmax as i64 + 1) {
        for d in [-1, 0, 1] {
            let t = Rational::new(k * g + d, g);
            if t >= Rational::from_integer(0) {
                points.insert(t);
            }
        }
    }
    let points: Vec<Rational> = points.into_iter().collect();
    let mut out = Vec::new();
    // stamp index tuples: 0 first, then strictly increasing
    let mut stack: Vec<Vec<usize>> = vec![vec![0]];
    while let Some(idx) = stack.pop() {
        if out.len() >= cap {
            break;
        }
        let n = idx.len();
        let mut letters = vec![0usize; n];
        loop {
            let pairs = idx
                .iter()
                .zip(&letters)
                .map(|(&i, &l)| (sigma[l].clone(), points[i]));
            out.push(TimedWord::from_pairs(pairs).expect("increasing"));
            // odometer over letter choices
            let mut k = 0;
            while k < n && letters[k] + 1 == sigma.len() {
                letters[k] = 0;
                k += 1;
            }
            if k == n {
                break;
            }
            letters[k] += 1;
        }
        if n < 3 {
            for next in (idx[n - 1] + 1)..points.len() {
                let mut more = idx.clone();
                more.push(next);
                stack.push(more);
            }
        }
    }
    out.truncate(cap);
    out
}

/// Runs both sides on boundary-stamp words, then on random grid words.
pub fn sampled_equivalence(
    lhs: &Side,
    rhs: &Side,
    cfg: &SamplerConfig,
) -> Result<EquivalenceReport, AnalysisError> {
    let sigma = match &cfg.alphabet {
        Some(s) => s.clone(),
        None => match (lhs, rhs) {
            (Side::Automaton(a), _) | (_, Side::Automaton(a)) => a.alphabet().clone(),
            _ => lhs.alphabet().union(&rhs.alphabet()).cloned().collect(),
        },
    };
    if sigma.is_empty() {
        return Err(AnalysisError::EmptyAlphabet);
    }
    let letters: Vec<Symbol> = sigma.iter().cloned().collect();
    let cmax = lhs.max_constant().max(rhs.max_constant());
    let mut words = boundary_words(&letters, cmax, cfg.grid, cfg.max_boundary);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let spec = WordSpec {
        min_len: 1,
        max_len: cfg.max_len.max(1),
        grid: cfg.grid,
        max_gap: (cmax as i64 + 2) * cfg.grid,
    };
    words.extend((0..cfg.samples).map(|_| random_word(&mut rng, &sigma, spec)));
    for (i, w) in words.iter().enumerate() {
        let (l, r) = (lhs.eval(w)?, rhs.eval(w)?);
        if l != r {
            return Ok(EquivalenceReport {
                checked: i + 1,
                counterexample: Some(Counterexample {
                    word: w.to_string(),
                    lhs: l,
                    rhs: r,
                }),
            });
        }
    }
    Ok(EquivalenceReport {
        checked: words.len(),
        counterexample: None,
    })
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct AutomatonSize {
    pub states: usize,
    pub clocks: usize,
    pub transitions: usize,
}

impl AutomatonSize {
    pub fn of(a: &Po2dta) -> Self {
        AutomatonSize {
            states: a.num_states(),
            clocks: a.num_clocks(),
            transitions: a.transitions().len(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SizeReport {
    pub fragment: String,
    pub dag_nodes: usize,
    pub modalities: usize,
    pub constant_bits: u64,
    /// `l = modalities + constant_bits`
    pub modal_dag_size: u64,
    pub closure: Option<usize>,
    pub lower_bound: Option<AutomatonSize>,
    pub bounded: Option<AutomatonSize>,
}

pub fn size_report(phi: &Formula, sigma: &Alphabet) -> Result<SizeReport, AnalysisError> {
    let mut sigma = sigma.clone();
    sigma.extend(phi.atoms());
    let tag = classify(phi);
    let dag = modal_dag_size(phi);
    let mut report = SizeReport {
        fragment: tag.to_string(),
        dag_nodes: phi.dag_nodes(),
        modalities: dag.modalities,
        constant_bits: dag.constant_bits,
        modal_dag_size: dag.total,
        closure: None,
        lower_bound: None,
        bounded: None,
    };
    // modality-free formulas are in both fragments
    if tag.fragment == Fragment::LowerBound {
        report.lower_bound = Some(AutomatonSize::of(&compile_lb(phi, &sigma)?));
    }
    if crate::formula::is_bounded(phi) {
        report.closure = Some(closure_size(phi, &sigma));
        report.bounded = Some(AutomatonSize::of(&compile_bounded(phi, &sigma)?));
    }
    if report.lower_bound.is_none() && report.bounded.is_none() {
        return Err(AnalysisError::Fragment(tag.to_string()));
    }
    Ok(report)
}
