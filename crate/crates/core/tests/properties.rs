use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use unimitl::analysis::{regrid, witness_search, SearchBounds};
use unimitl::formula::{parse, Formula, NormalForm};
use unimitl::gen::{random_formula, FormulaSpec, IntervalKind};
use unimitl::interval::Interval;
use unimitl::lbcompile::compile_lb;
use unimitl::oracle::{holds_at, holds_at_naive, language_member};
use unimitl::word::{alphabet, Alphabet, Rational, Symbol, TimedWord};

fn sigma() -> Alphabet {
    alphabet(["a", "b"])
}

/// Words from `(letter, gap)` pairs on grid `grid`, starting at 0.
fn word_strategy(grid: i64, max_len: usize) -> impl Strategy<Value = TimedWord> {
    prop::collection::vec((0usize..2, 1i64..=3 * grid), 1..=max_len).prop_map(move |steps| {
        let mut t = 0;
        let pairs: Vec<(Symbol, Rational)> = steps
            .iter()
            .enumerate()
            .map(|(i, &(l, gap))| {
                if i > 0 {
                    t += gap;
                }
                (Symbol::new(["a", "b"][l]), Rational::new(t, grid))
            })
            .collect();
        TimedWord::from_pairs(pairs).unwrap()
    })
}

fn formula(seed: u64, kind: IntervalKind) -> Formula {
    let spec = FormulaSpec {
        depth: 3,
        max_const: 3,
        kind,
        future_only: false,
    };
    random_formula(&mut ChaCha8Rng::seed_from_u64(seed), &sigma(), spec)
}

fn interval_strategy() -> impl Strategy<Value = Interval> {
    (0u64..5, 1u64..5, any::<bool>(), any::<bool>())
        .prop_map(|(l, len, a, b)| Interval::new(l, Some(l + len), a, b).unwrap())
}

proptest! {
    #[test]
    fn memoised_evaluation_matches_definition(seed in any::<u64>(), w in word_strategy(4, 6)) {
        let phi = formula(seed, IntervalKind::Any);
        for pos in 0..w.len() {
            prop_assert_eq!(holds_at(&w, pos, &phi).unwrap(), holds_at_naive(&w, pos, &phi));
        }
    }

    #[test]
    fn normal_form_preserves_truth(seed in any::<u64>(), w in word_strategy(4, 6)) {
        let phi = formula(seed, IntervalKind::Any);
        let back = NormalForm::new(&phi, &sigma()).to_formula();
        for pos in 0..w.len() {
            prop_assert_eq!(holds_at(&w, pos, &phi).unwrap(), holds_at(&w, pos, &back).unwrap());
        }
    }

    #[test]
    fn printing_reparses(seed in any::<u64>()) {
        let phi = formula(seed, IntervalKind::Any);
        prop_assert_eq!(parse(&phi.to_string()).unwrap(), phi);
    }

    #[test]
    fn split_partitions_the_interval(iv in interval_strategy(), k in 0i64..40) {
        let t = Rational::new(k, 4);
        let parts = iv.split().unwrap();
        let hits = parts.iter().filter(|p| p.contains(t)).count();
        prop_assert_eq!(hits, iv.contains(t) as usize);
        prop_assert!(parts.iter().all(|p| p.upper() == Some(p.lower() + 1)));
    }

    #[test]
    fn shift_inverts(iv in interval_strategy(), k in 0i64..4) {
        prop_assert_eq!(iv.shift(k).unwrap().shift(-k).unwrap(), iv);
    }

    /// Regridding keeps the integer part and integrality of every stamp
    /// difference, so lower-bound automata cannot tell the words apart.
    #[test]
    fn regrid_preserves_regions(seed in any::<u64>(), w in word_strategy(12, 5)) {
        let r = regrid(&w, w.len() as i64 + 1);
        for i in 0..w.len() {
            for j in i..w.len() {
                let (d, e) = (w.stamp(j) - w.stamp(i), r.stamp(j) - r.stamp(i));
                prop_assert_eq!(d.floor(), e.floor());
                prop_assert_eq!(d.is_integer(), e.is_integer());
            }
        }
        let phi = formula(seed, IntervalKind::LowerBound);
        let a = compile_lb(&phi, &sigma()).unwrap();
        prop_assert_eq!(a.accepts(&w).unwrap(), a.accepts(&r).unwrap());
        prop_assert_eq!(language_member(&w, &phi).unwrap(), language_member(&r, &phi).unwrap());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    /// Widening the bounds never loses a witness.
    #[test]
    fn search_is_monotone_in_its_bounds(seed in any::<u64>()) {
        let spec = FormulaSpec { depth: 2, max_const: 2, kind: IntervalKind::LowerBound, future_only: false };
        let phi = random_formula(&mut ChaCha8Rng::seed_from_u64(seed), &sigma(), spec);
        let a = compile_lb(&phi, &sigma()).unwrap();
        let small = SearchBounds {
            max_len: 2,
            grid: 2,
            horizon: Rational::from_integer(3),
            alphabet: sigma(),
            budget: None,
        };
        let large = SearchBounds { max_len: 3, grid: 4, horizon: Rational::from_integer(4), ..small.clone() };
        let s = witness_search(&a, &small).unwrap();
        let l = witness_search(&a, &large).unwrap();
        if s.verdict.is_sat() {
            prop_assert!(l.verdict.is_sat(), "{}", phi);
        }
        if let Some(w) = l.verdict.witness() {
            prop_assert!(language_member(w, &phi).unwrap());
        }
    }
}
