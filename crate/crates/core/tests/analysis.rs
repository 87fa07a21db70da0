use unimitl::analysis::{
    is_satisfiable, sampled_equivalence, size_report, witness_search, SamplerConfig, SearchBounds,
    Side,
};
use unimitl::automaton::{Builder, Constraint, Direction, Form, Guard, Rel};
use unimitl::extract::extract_formula;
use unimitl::fixtures::{a_ex, l3, l4, phi_ex, sigma_ac};
use unimitl::formula::{parse, Formula};
use unimitl::interval::Interval;
use unimitl::lbcompile::compile_lb;
use unimitl::oracle::language_member;
use unimitl::word::{alphabet, q, Rational, Symbol};

#[test]
fn a_ex_witness() {
    let a = a_ex();
    let bounds = SearchBounds {
        max_len: 3,
        grid: 10,
        horizon: Rational::from_integer(3),
        alphabet: a.alphabet().clone(),
        budget: None,
    };
    let out = witness_search(&a, &bounds).unwrap();
    let w = out.verdict.witness().expect("SAT").clone();
    assert!(a.accepts(&w).unwrap());
    // a c exactly one unit before the first b stamped in [1,2]
    let b = (0..w.len()).find(|&i| w.event(i).as_str() == "b").unwrap();
    assert!(w.stamp(b) >= q(1, 1) && w.stamp(b) <= q(2, 1));
    assert!((0..b).any(|i| w.event(i).as_str() == "c" && w.stamp(b) - w.stamp(i) == q(1, 1)));
    let again = witness_search(&a, &bounds).unwrap();
    assert_eq!(again.verdict.witness(), Some(&w), "deterministic");
    let doc = out.to_json();
    assert_eq!(doc["verdict"], "SAT");
    assert!(doc["witness"].is_string());
}

#[test]
fn horizon_excludes_late_guard() {
    let sigma = alphabet(["a"]);
    let mut b = Builder::new(sigma.clone());
    let s = b.state("s", Some(Direction::Forward), 1);
    let t = b.state("t", None, 0);
    let r = b.state("r", None, 0);
    let z = b.clock("z0");
    b.transition(
        s,
        Symbol::new("a"),
        Guard::new(vec![Constraint::new(z, Form::TMinusX, Rel::Eq, 5)]),
        vec![],
        t,
    );
    b.transition(s, Symbol::end_marker(), Guard::tt(), vec![], r);
    let a = b.build(s, t, r).unwrap();
    let mut bounds = SearchBounds {
        max_len: 4,
        grid: 2,
        horizon: Rational::from_integer(3),
        alphabet: sigma,
        budget: None,
    };
    let out = witness_search(&a, &bounds).unwrap();
    assert_eq!(out.verdict.label(), "UNSAT-within-bounds");
    // monotonicity: a larger horizon finds it
    bounds.horizon = Rational::from_integer(6);
    assert!(witness_search(&a, &bounds).unwrap().verdict.is_sat());
}

#[test]
fn named_formulas_are_satisfiable() {
    for phi in [l3(), l4()] {
        let t = std::time::Instant::now();
        let out = is_satisfiable(&phi, &sigma_ac(), None).unwrap();
        let w = out.verdict.witness().expect("SAT");
        assert!(language_member(w, &phi).unwrap());
        eprintln!("{phi}: {w} in {:?}, {} runs", t.elapsed(), out.stats.runs);
    }
    let w = is_satisfiable(&l3(), &sigma_ac(), None).unwrap();
    let w = w.verdict.witness().unwrap();
    let a = (0..w.len())
        .find(|&i| i > 0 && w.event(i).as_str() == "a")
        .unwrap();
    assert!((a..w.len()).any(|j| w.event(j).as_str() == "c" && w.stamp(j) - w.stamp(a) > q(2, 1)));
}

#[test]
fn contradiction_is_unsat() {
    // an UNSAT verdict is exhaustive, so keep the bounds small
    let small = |sigma| SearchBounds {
        max_len: 4,
        grid: 2,
        horizon: Rational::from_integer(4),
        alphabet: sigma,
        budget: None,
    };
    let phi = parse("a & !a").unwrap();
    let out = is_satisfiable(
        &phi,
        &alphabet(["a", "b"]),
        Some(small(alphabet(["a", "b"]))),
    )
    .unwrap();
    assert_eq!(out.verdict.label(), "UNSAT-within-bounds");
    let phi = Formula::and(
        Formula::f(Interval::at_least(0), Formula::atom("a")),
        Formula::not(Formula::f(Interval::at_least(0), Formula::atom("a"))),
    );
    let out = is_satisfiable(&phi, &alphabet(["a"]), Some(small(alphabet(["a"])))).unwrap();
    assert_eq!(out.verdict.label(), "UNSAT-within-bounds");
}

#[test]
fn unsupported_fragment() {
    let phi = parse("F(1,inf) a & F[0,2] a").unwrap();
    assert!(is_satisfiable(&phi, &alphabet(["a"]), None).is_err());
}

#[test]
fn equivalences() {
    let cfg = SamplerConfig::default();
    let a = a_ex();
    let r =
        sampled_equivalence(&Side::Automaton(a.clone()), &Side::Formula(phi_ex()), &cfg).unwrap();
    assert!(r.passed(), "{r:?}");
    let r = sampled_equivalence(
        &Side::Automaton(a.clone()),
        &Side::Lifted(extract_formula(&a)),
        &cfg,
    )
    .unwrap();
    assert!(r.passed(), "{r:?}");
    let a3 = compile_lb(&l3(), &sigma_ac()).unwrap();
    let r = sampled_equivalence(&Side::Automaton(a3.clone()), &Side::Formula(l3()), &cfg).unwrap();
    assert!(r.passed(), "{r:?}");
    let r = sampled_equivalence(&Side::Automaton(a3), &Side::Formula(l4()), &cfg).unwrap();
    let cex = r.counterexample.expect("L3 and L4 differ");
    assert_ne!(cex.lhs, cex.rhs);
}

#[test]
fn sizes() {
    let sigma = alphabet(["c"]);
    let mut states = Vec::new();
    for m in 1..=8u64 {
        let phi = Formula::f(
            Interval::new(0, Some(m), false, true).unwrap(),
            Formula::atom("c"),
        );
        let r = size_report(&phi, &sigma).unwrap();
        assert_eq!(r.closure, Some(m as usize + 2));
        states.push(r.bounded.unwrap().states);
    }
    assert!(states.windows(2).all(|w| w[1] > w[0]));
    let r = size_report(&Formula::atom("a"), &sigma).unwrap();
    assert_eq!(r.modal_dag_size, 0);
    assert!(r.lower_bound.unwrap().states <= 4);
}
