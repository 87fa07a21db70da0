//! Named formulas, automata and words shared by tests, benches and the CLI.

use crate::automaton::{Builder, Constraint, Direction, Form, Guard, Po2dta, Rel};
use crate::formula::{parse, Formula};
use crate::interval::Interval;
use crate::word::{alphabet, Alphabet, Symbol, TimedWord};

/// `F_(0,∞)[a ∧ F_(1,2)c]`
pub fn l1() -> Formula {
    parse("F(0,inf)[a & F(1,2) c]").expect("fixture parses")
}

/// `F_(0,∞)[a ∧ F_[0,2]c]`
pub fn l2() -> Formula {
    parse("F(0,inf)[a & F[0,2] c]").expect("fixture parses")
}

/// `F_(0,∞)[a ∧ F_(2,∞)c]`
pub fn l3() -> Formula {
    parse("F(0,inf)[a & F(2,inf) c]").expect("fixture parses")
}

/// `F_(0,1)[a ∧ F_(1,2)c]`
pub fn l4() -> Formula {
    parse("F(0,1)[a & F(1,2) c]").expect("fixture parses")
}

pub fn sigma_ac() -> Alphabet {
    alphabet(["a", "c"])
}

pub fn sigma_bc() -> Alphabet {
    alphabet(["b", "c"])
}

/// The two-state example automaton: scan right for the first `b` with
/// `T ∈ [1,2]`, remember it in `x`, then scan left for a `c` exactly one
/// time unit earlier. The `◁` edge of `S` is the completion that the
/// marker-safety rule requires.
pub fn a_ex() -> Po2dta {
    let mut b = Builder::new(sigma_bc());
    let s = b.state("S", Some(Direction::Forward), 2);
    let a = b.state("A", Some(Direction::Backward), 1);
    let t = b.state("t", None, 0);
    let r = b.state("r", None, 0);
    let x = b.clock("x");
    b.transition(
        s,
        Symbol::new("b"),
        Guard::new(vec![
            Constraint::new(x, Form::TMinusX, Rel::Ge, 1),
            Constraint::new(x, Form::TMinusX, Rel::Le, 2),
        ]),
        vec![x],
        a,
    );
    b.transition(
        a,
        Symbol::new("c"),
        Guard::new(vec![Constraint::new(x, Form::XMinusT, Rel::Eq, 1)]),
        vec![],
        t,
    );
    b.transition(a, Symbol::start_marker(), Guard::tt(), vec![], r);
    b.transition(s, Symbol::end_marker(), Guard::tt(), vec![], r);
    b.build(s, t, r).expect("fixture is valid")
}

/// Hand-written lower-bound formula for [`a_ex`]:
/// `φ1 = b ∧ P_[1,∞)Atfirst ∧ ¬P_(2,∞)Atfirst`, `φ2 = φ1 ∧ ¬P_(0,∞)φ1`,
/// `Φ = F_[0,∞)[φ2 ∧ P_[1,∞)(c ∧ ¬F_(1,∞)φ2)]`.
pub fn phi_ex() -> Formula {
    let at_first = Formula::at_first();
    let phi1 = Formula::and_all([
        Formula::atom("b"),
        Formula::p(Interval::at_least(1), at_first.clone()),
        Formula::not(Formula::p(Interval::greater_than(2), at_first)),
    ]);
    let phi2 = Formula::and(
        phi1.clone(),
        Formula::not(Formula::p(Interval::greater_than(0), phi1)),
    );
    Formula::f(
        Interval::anywhere(),
        Formula::and(
            phi2.clone(),
            Formula::p(
                Interval::at_least(1),
                Formula::and(
                    Formula::atom("c"),
                    Formula::not(Formula::f(Interval::greater_than(1), phi2)),
                ),
            ),
        ),
    )
}

/// `c@1/5 b@6/5`, accepted by [`a_ex`].
pub fn rho_acc() -> TimedWord {
    TimedWord::parse("c@1/5 b@6/5").expect("fixture parses")
}

/// `c@3/10 b@6/5`, rejected by [`a_ex`].
pub fn rho_rej() -> TimedWord {
    TimedWord::parse("c@3/10 b@6/5").expect("fixture parses")
}
