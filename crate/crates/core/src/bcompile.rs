//! Bounded `MITL[F_b,P_b]` → po2DTA.
//!
//! Truth of a bounded modality at a position in unit `[r,r+1)` depends only
//! on the first and last occurrences of its argument in two neighbouring
//! units. The closure `Cl(Φ,[0,1))` collects every (modarg, unit) pair that
//! is needed; one pass per pair stores both occurrences in `x_{φ,r}` and
//! `y_{φ,r}`, innermost first.

use std::collections::{BTreeMap, BTreeSet, HashSet};

use crate::automaton::{Builder, ClockId, DiffRange, Direction, Guard, GuardExpr, Po2dta};
use crate::formula::{
    classify, is_bounded, Formula, Fragment, ModalId, Modality, NodeId, NormalForm,
};
use crate::lbcompile::{check_passes, reset_pass, substitute, CompileError};
use crate::word::{Alphabet, Symbol};

/// `(node, r)` standing for `(φ, [r, r+1))`.
pub type ClosureItem = (NodeId, i64);

/// `Cl(node, [r,r+1))`; units below 0 hold no positions and are dropped.
pub fn closure(nf: &NormalForm, node: NodeId, r: i64) -> BTreeSet<ClosureItem> {
    let mut out = BTreeSet::new();
    let mut seen = HashSet::new();
    closure_into(nf, node, r, &mut out, &mut seen);
    out
}

fn closure_into(
    nf: &NormalForm,
    node: NodeId,
    r: i64,
    out: &mut BTreeSet<ClosureItem>,
    seen: &mut HashSet<ClosureItem>,
) {
    if r < 0 || !seen.insert((node, r)) {
        return;
    }
    out.insert((node, r));
    for m in nf.immediate_modals(node) {
        for (arg, unit) in related_units(nf, m, r) {
            closure_into(nf, arg, unit, out, seen);
        }
    }
}

/// Units of the argument that decide modal `m` in unit `r`, one pair per
/// piece of `spl(I)`: `(near, far)`.
fn pieces(nf: &NormalForm, m: ModalId, r: i64) -> Vec<(crate::interval::Interval, i64, i64)> {
    let sub = nf.modal(m);
    sub.interval
        .split()
        .expect("bounded non-punctual interval")
        .into_iter()
        .map(|p| {
            let k = p.lower() as i64;
            match sub.modality {
                Modality::F => (p, r + k, r + k + 1),
                Modality::P => (p, r - k, r - k - 1),
            }
        })
        .collect()
}

fn related_units(nf: &NormalForm, m: ModalId, r: i64) -> Vec<ClosureItem> {
    let arg = nf.modal(m).arg;
    pieces(nf, m, r)
        .into_iter()
        .flat_map(|(_, near, far)| [(arg, near), (arg, far)])
        .collect()
}

/// `x_{φ,r}` / `y_{φ,r}` per closure item, plus `z0` (never reset, so
/// `T − z0` is absolute time).
#[derive(Clone, Debug, Default)]
pub struct BoundedPlan {
    pub items: Vec<ClosureItem>,
    pub names: Vec<String>,
    pub first: BTreeMap<ClosureItem, ClockId>,
    pub last: BTreeMap<ClosureItem, ClockId>,
    pub z0: ClockId,
}

impl BoundedPlan {
    pub fn new(nf: &NormalForm) -> BoundedPlan {
        let items: Vec<ClosureItem> = closure(nf, nf.root(), 0).into_iter().collect();
        let mut plan = BoundedPlan::default();
        for &(id, r) in &items {
            plan.first.insert((id, r), plan.names.len());
            plan.names.push(format!("x{id}_{r}"));
            plan.last.insert((id, r), plan.names.len());
            plan.names.push(format!("y{id}_{r}"));
        }
        plan.z0 = plan.names.len();
        plan.names.push("z0".into());
        plan.items = items;
        plan
    }
}

// `d < v` or `d ≤ v`
fn upto(v: i64, strict: bool) -> DiffRange {
    if strict {
        DiffRange::below(v)
    } else {
        DiffRange::at_most(v)
    }
}

// `d > v` or `d ≥ v`
fn from(v: i64, strict: bool) -> DiffRange {
    if strict {
        DiffRange::above(v)
    } else {
        DiffRange::at_least(v)
    }
}

/// `cond(ψ, [r,r+1))` for a bounded modality: a disjunction over the pieces
/// `⟨_a k,k+1⟩_b` of its interval, each being
/// - `F`: `T < L_near ∧ T <_a L_near − k` or
///   `T < L_far ∧ T >_b F_far − (k+1) ∧ T < r+1`;
/// - `P`: `T > F_far ∧ T <_b L_far + k+1` or
///   `T > F_near ∧ T >_a F_near + k`.
///
/// Units below 0 are empty, so their disjunct is false.
pub fn cond_bounded(nf: &NormalForm, plan: &BoundedPlan, m: ModalId, r: i64) -> GuardExpr {
    let sub = nf.modal(m);
    let arg = sub.arg;
    let mut alts = vec![];
    for (piece, near, far) in pieces(nf, m, r) {
        let k = piece.lower() as i64;
        let (a, b) = (piece.lower_open(), piece.upper_open());
        match sub.modality {
            Modality::F => {
                let y = plan.last[&(arg, near)];
                alts.push(GuardExpr::lit(
                    y,
                    DiffRange::below(0).intersect(&upto(-k, a)),
                ));
                let (xf, yf) = (plan.first[&(arg, far)], plan.last[&(arg, far)]);
                alts.push(GuardExpr::and([
                    GuardExpr::lit(yf, DiffRange::below(0)),
                    GuardExpr::lit(xf, from(-(k + 1), b)),
                    GuardExpr::lit(plan.z0, DiffRange::below(r + 1)),
                ]));
            }
            Modality::P => {
                if far >= 0 {
                    let (xf, yf) = (plan.first[&(arg, far)], plan.last[&(arg, far)]);
                    alts.push(GuardExpr::and([
                        GuardExpr::lit(xf, DiffRange::above(0)),
                        GuardExpr::lit(yf, upto(k + 1, b)),
                    ]));
                }
                if near >= 0 {
                    let x = plan.first[&(arg, near)];
                    alts.push(GuardExpr::lit(
                        x,
                        DiffRange::above(0).intersect(&from(k, a)),
                    ));
                }
            }
        }
    }
    GuardExpr::or(alts)
}

/// `G(φ, [r,r+1), a)`
pub fn unit_letter_guard(
    nf: &NormalForm,
    plan: &BoundedPlan,
    node: NodeId,
    r: i64,
    a: &Symbol,
) -> GuardExpr {
    substitute(nf.branch(node, a), &mut |m| cond_bounded(nf, plan, m, r))
}

/// Pass for `(φ, [r,r+1))`: rewind to `▷`, scan right and store the first
/// qualifying stamp in `x`, go on to `◁`, scan left and store the last one
/// in `y`. Always accepts.
pub fn unit_pass(nf: &NormalForm, plan: &BoundedPlan, item: ClosureItem) -> Po2dta {
    let (node, r) = item;
    let sigma = nf.alphabet();
    let mut b = Builder::new(sigma.clone());
    for n in &plan.names {
        b.clock(n);
    }
    let tag = format!("U{node}_{r}");
    let s0 = b.state(format!("{tag}.rewind"), Some(Direction::Backward), 4);
    let f = b.state(format!("{tag}.first"), Some(Direction::Forward), 3);
    let g = b.state(format!("{tag}.skip"), Some(Direction::Forward), 2);
    let h = b.state(format!("{tag}.last"), Some(Direction::Backward), 1);
    let t = b.state(format!("{tag}.t"), None, 0);
    let rej = b.state(format!("{tag}.r"), None, 0);
    let in_unit = GuardExpr::lit(plan.z0, DiffRange::half_open(r, r + 1));
    let (x, y) = (plan.first[&item], plan.last[&item]);
    b.transition(s0, Symbol::start_marker(), Guard::tt(), vec![], f);
    for a in sigma {
        let g_a = GuardExpr::and([unit_letter_guard(nf, plan, node, r, a), in_unit.clone()]);
        for piece in g_a.refine() {
            b.transition(f, a.clone(), piece.clone(), vec![x], g);
            b.transition(h, a.clone(), piece, vec![y], t);
        }
    }
    b.transition(f, Symbol::end_marker(), Guard::tt(), vec![], t);
    b.transition(g, Symbol::end_marker(), Guard::tt(), vec![], h);
    b.transition(h, Symbol::start_marker(), Guard::tt(), vec![], t);
    b.build(s0, t, rej).expect("unit pass is valid")
}

#[derive(Clone, Debug)]
pub struct BoundedCompilation {
    pub normal_form: NormalForm,
    pub plan: BoundedPlan,
    /// `A_reset`, the unit passes in closure order, then the check passes.
    pub passes: Vec<Po2dta>,
    pub automaton: Po2dta,
}

pub fn compile_bounded_detailed(
    phi: &Formula,
    sigma: &Alphabet,
) -> Result<BoundedCompilation, CompileError> {
    if !is_bounded(phi) {
        return Err(CompileError::WrongFragment {
            expected: Fragment::Bounded.name(),
            found: classify(phi).to_string(),
        });
    }
    let nf = NormalForm::new(phi, sigma);
    let plan = BoundedPlan::new(&nf);
    let mut passes = vec![reset_pass(
        sigma,
        &plan.names,
        plan.first.values().copied().collect(),
    )];
    // the root's own item is read by no modality; the check passes
    // evaluate its guard directly
    for &item in &plan.items {
        if nf.polarity(item.0).is_some() {
            passes.push(unit_pass(&nf, &plan, item));
        }
    }
    let root_guards: Vec<(Symbol, GuardExpr)> = sigma
        .iter()
        .map(|a| (a.clone(), unit_letter_guard(&nf, &plan, nf.root(), 0, a)))
        .collect();
    passes.extend(check_passes(sigma, &plan.names, &root_guards));
    let automaton = Po2dta::chain(&passes)?;
    Ok(BoundedCompilation {
        normal_form: nf,
        plan,
        passes,
        automaton,
    })
}

pub fn compile_bounded(phi: &Formula, sigma: &Alphabet) -> Result<Po2dta, CompileError> {
    Ok(compile_bounded_detailed(phi, sigma)?.automaton)
}

/// `|Cl(Φ,[0,1))|` over `sigma`.
pub fn closure_size(phi: &Formula, sigma: &Alphabet) -> usize {
    let nf = NormalForm::new(phi, sigma);
    closure(&nf, nf.root(), 0).len()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{l4, sigma_ac};
    use crate::formula::parse;
    use crate::word::{alphabet, q, TimedWord};

    fn w(s: &str) -> TimedWord {
        TimedWord::parse(s).unwrap()
    }

    #[test]
    fn closure_example() {
        let nf = NormalForm::new(&parse("a & F(0,2) c").unwrap(), &sigma_ac());
        let cl = closure(&nf, nf.root(), 0);
        let c = nf.modal(nf.immediate_modals(nf.root())[0]).arg;
        let want: BTreeSet<ClosureItem> = [(nf.root(), 0), (c, 0), (c, 1), (c, 2)]
            .into_iter()
            .collect();
        assert_eq!(cl, want);
        let nf = NormalForm::new(&parse("a").unwrap(), &sigma_ac());
        assert_eq!(closure(&nf, nf.root(), 3).len(), 1);
    }

    #[test]
    fn closure_sizes() {
        for m in 1..=8 {
            let phi = parse(&format!("F(0,{m}) c")).unwrap();
            assert_eq!(closure_size(&phi, &sigma_ac()), m + 2);
        }
    }

    #[test]
    fn unit_pass_contract() {
        let sigma = sigma_ac();
        let nf = NormalForm::new(&parse("F(0,4) c").unwrap(), &sigma);
        let plan = BoundedPlan::new(&nf);
        let c = nf.modal(nf.immediate_modals(nf.root())[0]).arg;
        let rho = w("a@0 c@5/2 c@14/5");
        let mut nu0 = vec![q(0, 1); plan.names.len()];
        for &x in plan.first.values() {
            nu0[x] = q(14, 5);
        }
        let res = unit_pass(&nf, &plan, (c, 2))
            .run(&rho, nu0.clone(), 1)
            .unwrap();
        assert_eq!(res.valuation[plan.first[&(c, 2)]], q(5, 2));
        assert_eq!(res.valuation[plan.last[&(c, 2)]], q(14, 5));
        let res = unit_pass(&nf, &plan, (c, 1)).run(&rho, nu0, 1).unwrap();
        assert_eq!(res.valuation[plan.first[&(c, 1)]], q(14, 5));
        assert_eq!(res.valuation[plan.last[&(c, 1)]], q(0, 1));
    }

    #[test]
    fn l4_verdicts() {
        let sigma = alphabet(["a", "c"]);
        let a = compile_bounded(&l4(), &sigma).unwrap();
        assert!(a.accepts(&w("a@0 a@1/2 c@7/4")).unwrap());
        assert!(!a.accepts(&w("a@0 a@1/2 c@5/4")).unwrap());
        let atom = compile_bounded(&parse("a").unwrap(), &sigma).unwrap();
        assert!(atom.accepts(&w("a@0")).unwrap());
        let plan = BoundedPlan::new(&NormalForm::new(&l4(), &sigma));
        assert_eq!(a.num_clocks(), 2 * plan.items.len() + 1);
    }

    #[test]
    fn wrong_fragment() {
        assert!(compile_bounded(&parse("F(1,inf) a").unwrap(), &sigma_ac()).is_err());
    }
}
