use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use unimitl::bcompile::{closure_size, compile_bounded};
use unimitl::fixtures::{l1, l2, l3, l4, sigma_ac};
use unimitl::gen::{random_formula, random_word, FormulaSpec, IntervalKind, WordSpec};
use unimitl::lbcompile::compile_lb;
use unimitl::oracle::language_member;
use unimitl::word::{alphabet, TimedWord};

fn agree(kind: IntervalKind, seed: u64, cases: usize) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let sigma = alphabet(["a", "b"]);
    let spec = FormulaSpec {
        depth: 3,
        max_const: 3,
        kind,
        future_only: false,
    };
    for _ in 0..cases {
        let phi = random_formula(&mut rng, &sigma, spec);
        let a = match kind {
            IntervalKind::LowerBound => compile_lb(&phi, &sigma),
            _ => compile_bounded(&phi, &sigma),
        }
        .unwrap();
        assert!(a.is_valid(), "{phi}");
        for _ in 0..8 {
            let w = random_word(&mut rng, &sigma, WordSpec::default());
            let want = language_member(&w, &phi).unwrap();
            assert_eq!(a.accepts(&w).unwrap(), want, "{phi} on {w}");
        }
    }
}

#[test]
fn lower_bound_compiler_agrees_with_oracle() {
    agree(IntervalKind::LowerBound, 11, 150);
}

#[test]
fn bounded_compiler_agrees_with_oracle() {
    agree(IntervalKind::Bounded, 12, 60);
}

#[test]
fn named_examples() {
    let sigma = sigma_ac();
    let w = |s: &str| TimedWord::parse(s).unwrap();
    for phi in [l1(), l2(), l3()] {
        let a = compile_lb(&phi, &sigma);
        assert!(a.is_err() == (phi != l3()), "{phi}");
    }
    let a3 = compile_lb(&l3(), &sigma).unwrap();
    assert!(a3.accepts(&w("c@0 a@1/2 c@3")).unwrap());
    assert!(!a3.accepts(&w("c@0 a@1/2 c@5/2")).unwrap());
    let a4 = compile_bounded(&l4(), &sigma).unwrap();
    assert!(a4.accepts(&w("c@0 a@1/2 c@2")).unwrap());
    assert!(!a4.accepts(&w("c@0 a@1 c@2")).unwrap());
    assert!(closure_size(&l4(), &sigma) > 0);
}
