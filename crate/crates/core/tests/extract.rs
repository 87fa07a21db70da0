use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use unimitl::automaton::Po2dta;
use unimitl::extract::{
    accepting_paths, extract_formula, extracted_accepts, lift, Extractor, ProgressPath,
};
use unimitl::fixtures::{a_ex, phi_ex, rho_acc, rho_rej, sigma_bc};
use unimitl::formula::{classify, Fragment};
use unimitl::gen::{random_po2dta, random_word, AutomatonSpec, WordSpec};
use unimitl::oracle::holds_at;
use unimitl::word::{alphabet, TimedWord};

fn words(seed: u64, n: usize) -> Vec<TimedWord> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let spec = WordSpec {
        min_len: 0,
        max_len: 5,
        grid: 2,
        max_gap: 4,
    };
    (0..n)
        .map(|_| random_word(&mut rng, &sigma_bc(), spec))
        .collect()
}

#[test]
fn a_ex_extraction_matches_runs_and_hand_formula() {
    let a = a_ex();
    let phi = extract_formula(&a);
    assert_eq!(classify(&phi).fragment, Fragment::LowerBound);
    let mut all = words(5, 1000);
    all.extend([rho_acc(), rho_rej()]);
    for w in &all {
        let want = a.accepts(w).unwrap();
        assert_eq!(extracted_accepts(&phi, w).unwrap(), want, "{w}");
        if !w.is_empty() {
            assert_eq!(
                holds_at(w, 0, &phi_ex()).unwrap(),
                want,
                "hand formula on {w}"
            );
        }
    }
}

#[test]
fn trivial_automaton_extracts_to_a_tautology() {
    let one = Po2dta::trivial_accept(&sigma_bc());
    assert!(!accepting_paths(&one).is_empty());
    let phi = extract_formula(&one);
    for w in words(6, 100) {
        assert!(extracted_accepts(&phi, &w).unwrap());
    }
}

fn round_trip(table_rows_only: bool, seed: u64, automata: usize) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let sigma = alphabet(["b", "c"]);
    let spec = AutomatonSpec {
        table_rows_only,
        ..AutomatonSpec::default()
    };
    let ws = words(seed + 1, 60);
    for _ in 0..automata {
        let a = random_po2dta(&mut rng, &sigma, spec);
        let phi = extract_formula(&a);
        for w in &ws {
            assert_eq!(
                extracted_accepts(&phi, w).unwrap(),
                a.accepts(w).unwrap(),
                "{w}\n{}",
                a.to_json()
            );
        }
    }
}

#[test]
fn random_round_trip_table_rows() {
    round_trip(true, 21, 150);
}

#[test]
fn random_round_trip_all_rows() {
    round_trip(false, 22, 150);
}

#[test]
fn gsat_matches_the_run_valuation() {
    // Along every prefix actually traversed, gsat agrees with the guard
    // evaluated under the run's valuation at every cell.
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    let sigma = alphabet(["b", "c"]);
    let spec = AutomatonSpec {
        table_rows_only: false,
        ..AutomatonSpec::default()
    };
    for _ in 0..60 {
        let a = random_po2dta(&mut rng, &sigma, spec);
        for w in words(32, 15) {
            let lifted = lift(&w);
            let run = a.run(&w, a.initial_valuation(), 1).unwrap();
            // rebuild the fired edge sequence and valuation after each edge
            let mut path = ProgressPath::default();
            let mut nu = a.initial_valuation();
            let mut ex = Extractor::new(&a);
            for step in run.trace.windows(2) {
                let (from, to) = (&step[0], &step[1]);
                if from.state == to.state {
                    continue;
                }
                let letter = lifted.event(from.head);
                let e = a
                    .transitions()
                    .iter()
                    .position(|t| {
                        t.from == from.state
                            && &t.letter == letter
                            && t.to == to.state
                            && t.guard.holds(&nu, lifted.stamp(from.head)).unwrap()
                    })
                    .unwrap();
                for g in a
                    .transitions()
                    .iter()
                    .filter(|t| t.from == from.state)
                    .map(|t| &t.guard)
                {
                    let f = ex.gsat(&path, g);
                    for p in 0..lifted.len() {
                        assert_eq!(
                            holds_at(&lifted, p, &f).unwrap(),
                            g.holds(&nu, lifted.stamp(p)).unwrap(),
                            "cell {p} of {w}"
                        );
                    }
                }
                nu = to.valuation.clone();
                path = path.push(e);
            }
        }
    }
}
