//! `MITL[F∞,P∞]` → po2DTA.
//!
//! Every modarg `φ` gets its last occurrence `L^φ` (F-type, clock `y`) or
//! first occurrence `F^φ` (P-type, clock `x`) stored by a scan pass; the
//! passes run innermost first, after which each lower-bound modality is a
//! guard on those clocks. A final pass checks the root at the first cell.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::automaton::{AutomatonError, Builder, ClockId, DiffRange, Direction, GuardExpr, Po2dta};
use crate::formula::{
    classify, is_lower_bound, BoolExpr, Formula, Fragment, ModalId, Modality, NodeId, NormalForm,
};
use crate::word::{Alphabet, Symbol};

#[derive(Debug, Error)]
pub enum CompileError {
    #[error("formula is in {found}, expected {expected}")]
    WrongFragment {
        expected: &'static str,
        found: String,
    },
    #[error(transparent)]
    Automaton(#[from] AutomatonError),
}

/// Clock names: `y<id>` / `x<id>` per modarg and polarity, plus `z0`,
/// which is never reset.
#[derive(Clone, Debug, Default)]
pub struct ClockPlan {
    pub names: Vec<String>,
    pub last: BTreeMap<NodeId, ClockId>,
    pub first: BTreeMap<NodeId, ClockId>,
}

impl ClockPlan {
    pub fn new(nf: &NormalForm) -> ClockPlan {
        let mut plan = ClockPlan::default();
        for id in nf.modargs() {
            let pol = nf.polarity(id).expect("modarg has a polarity");
            if pol.has_f() {
                plan.last.insert(id, plan.names.len());
                plan.names.push(format!("y{id}"));
            }
            if pol.has_p() {
                plan.first.insert(id, plan.names.len());
                plan.names.push(format!("x{id}"));
            }
        }
        plan.names.push("z0".into());
        plan
    }
}

/// `cond(ψ)` as a range of `T − clock`.
pub fn cond_lb(nf: &NormalForm, plan: &ClockPlan, m: ModalId) -> GuardExpr {
    let sub = nf.modal(m);
    let iv = sub.interval;
    assert!(
        iv.is_lower_bound(),
        "cond_lb needs a lower-bound interval, got {iv}"
    );
    let l = iv.lower() as i64;
    match sub.modality {
        Modality::F => {
            let range = match (iv.lower_open(), l) {
                (false, 0) => DiffRange::below(0),
                (false, l) => DiffRange::at_most(-l),
                (true, l) => DiffRange::below(-l),
            };
            GuardExpr::lit(plan.last[&sub.arg], range)
        }
        Modality::P => {
            let range = match (iv.lower_open(), l) {
                (false, 0) => DiffRange::above(0),
                (false, l) => DiffRange::at_least(l),
                (true, l) => DiffRange::above(l),
            };
            GuardExpr::lit(plan.first[&sub.arg], range)
        }
    }
}

/// `B_a` with every modal subformula replaced by its clock condition.
pub fn substitute(e: &BoolExpr, cond: &mut impl FnMut(ModalId) -> GuardExpr) -> GuardExpr {
    e.fold(
        cond,
        &|| GuardExpr::True,
        &|| GuardExpr::False,
        &GuardExpr::not,
        &|v| GuardExpr::and(v),
        &|v| GuardExpr::or(v),
    )
}

/// `G(φ, a)`
pub fn letter_guard(nf: &NormalForm, plan: &ClockPlan, node: NodeId, a: &Symbol) -> GuardExpr {
    substitute(nf.branch(node, a), &mut |m| cond_lb(nf, plan, m))
}

/// Scan pass storing `L^φ` (for `F`) or `F^φ` (for `P`) of modarg `node`.
/// Always accepts.
pub fn modarg_pass(nf: &NormalForm, plan: &ClockPlan, node: NodeId, modality: Modality) -> Po2dta {
    let guards: Vec<(Symbol, GuardExpr)> = nf
        .alphabet()
        .iter()
        .map(|a| (a.clone(), letter_guard(nf, plan, node, a)))
        .collect();
    let (clock, tag) = match modality {
        Modality::F => (plan.last[&node], "L"),
        Modality::P => (plan.first[&node], "F"),
    };
    scan_pass(
        nf.alphabet(),
        &plan.names,
        &format!("{tag}{node}"),
        modality,
        &guards,
        clock,
    )
}

/// Rewind to one end, then scan towards the other firing at the first cell
/// whose letter guard holds and storing its stamp in `clock`. `F` scans
/// right-to-left (last occurrence), `P` left-to-right (first occurrence).
pub(crate) fn scan_pass(
    sigma: &Alphabet,
    clocks: &[String],
    tag: &str,
    modality: Modality,
    guards: &[(Symbol, GuardExpr)],
    clock: ClockId,
) -> Po2dta {
    let mut b = Builder::new(sigma.clone());
    for n in clocks {
        b.clock(n);
    }
    let (rewind_dir, scan_dir, rewind_on, stop_on) = match modality {
        Modality::F => (
            Direction::Forward,
            Direction::Backward,
            Symbol::end_marker(),
            Symbol::start_marker(),
        ),
        Modality::P => (
            Direction::Backward,
            Direction::Forward,
            Symbol::start_marker(),
            Symbol::end_marker(),
        ),
    };
    let s = b.state(format!("{tag}.rewind"), Some(rewind_dir), 2);
    let scan = b.state(format!("{tag}.scan"), Some(scan_dir), 1);
    let t = b.state(format!("{tag}.t"), None, 0);
    let r = b.state(format!("{tag}.r"), None, 0);
    b.transition(s, rewind_on, crate::automaton::Guard::tt(), vec![], scan);
    for (a, g) in guards {
        for piece in g.refine() {
            b.transition(scan, a.clone(), piece, vec![clock], t);
        }
    }
    b.transition(scan, stop_on, crate::automaton::Guard::tt(), vec![], t);
    b.build(s, t, r).expect("scan pass is valid")
}

/// Walks to `◁` and sets every clock in `resets` to `τ_#ρ`.
pub(crate) fn reset_pass(sigma: &Alphabet, clocks: &[String], resets: Vec<ClockId>) -> Po2dta {
    let mut b = Builder::new(sigma.clone());
    for n in clocks {
        b.clock(n);
    }
    let s = b.state("init", Some(Direction::Forward), 1);
    let t = b.state("init.t", None, 0);
    let r = b.state("init.r", None, 0);
    b.transition(
        s,
        Symbol::end_marker(),
        crate::automaton::Guard::tt(),
        resets,
        t,
    );
    b.build(s, t, r).expect("reset pass is valid")
}

/// Top-level conjuncts of `e`, reading `¬(a ∨ b)` as `¬a ∧ ¬b`.
fn conjuncts(e: &GuardExpr, out: &mut Vec<GuardExpr>) {
    match e {
        GuardExpr::And(v) => v.iter().for_each(|c| conjuncts(c, out)),
        GuardExpr::Not(inner) => match inner.as_ref() {
            GuardExpr::Or(v) => v
                .iter()
                .for_each(|c| conjuncts(&GuardExpr::not(c.clone()), out)),
            _ => out.push(e.clone()),
        },
        GuardExpr::True => {}
        _ => out.push(e.clone()),
    }
}

/// Final check as a chain of passes, one per top-level conjunct of the
/// letter guards: refining a whole conjunction into disjoint cubes
/// multiplies out its independent clocks. Each pass rewinds to `▷`, steps
/// onto the first letter and accepts iff its conjunct holds there
/// (rejecting on the empty word).
pub(crate) fn check_passes(
    sigma: &Alphabet,
    clocks: &[String],
    guards: &[(Symbol, GuardExpr)],
) -> Vec<Po2dta> {
    let split: Vec<(Symbol, Vec<GuardExpr>)> = guards
        .iter()
        .map(|(a, g)| {
            let mut parts = vec![];
            conjuncts(g, &mut parts);
            (a.clone(), parts)
        })
        .collect();
    let k = split.iter().map(|(_, p)| p.len()).max().unwrap_or(0).max(1);
    (0..k)
        .map(|j| {
            let part: Vec<(Symbol, GuardExpr)> = split
                .iter()
                .map(|(a, p)| (a.clone(), p.get(j).cloned().unwrap_or(GuardExpr::True)))
                .collect();
            check_pass(sigma, clocks, &part, j)
        })
        .collect()
}

fn check_pass(
    sigma: &Alphabet,
    clocks: &[String],
    guards: &[(Symbol, GuardExpr)],
    index: usize,
) -> Po2dta {
    let mut b = Builder::new(sigma.clone());
    for n in clocks {
        b.clock(n);
    }
    let w = b.state(format!("check{index}.rewind"), Some(Direction::Backward), 2);
    let c = b.state(format!("check{index}"), Some(Direction::Forward), 1);
    let t = b.state("t", None, 0);
    let r = b.state("r", None, 0);
    b.transition(
        w,
        Symbol::start_marker(),
        crate::automaton::Guard::tt(),
        vec![],
        c,
    );
    for (a, g) in guards {
        for piece in g.refine() {
            b.transition(c, a.clone(), piece, vec![], t);
        }
        for piece in GuardExpr::not(g.clone()).refine() {
            b.transition(c, a.clone(), piece, vec![], r);
        }
    }
    b.transition(
        c,
        Symbol::end_marker(),
        crate::automaton::Guard::tt(),
        vec![],
        r,
    );
    b.build(w, t, r).expect("check pass is valid")
}

/// Compilation with its intermediate pieces exposed.
#[derive(Clone, Debug)]
pub struct LbCompilation {
    pub normal_form: NormalForm,
    pub plan: ClockPlan,
    /// `InitPass`, the modarg passes bottom-up, the `FinalCheck` passes.
    pub passes: Vec<Po2dta>,
    pub automaton: Po2dta,
}

pub fn compile_lb_detailed(phi: &Formula, sigma: &Alphabet) -> Result<LbCompilation, CompileError> {
    if !is_lower_bound(phi) {
        return Err(CompileError::WrongFragment {
            expected: Fragment::LowerBound.name(),
            found: classify(phi).to_string(),
        });
    }
    let nf = NormalForm::new(phi, sigma);
    let plan = ClockPlan::new(&nf);
    let mut passes = vec![];
    let x_clocks: Vec<ClockId> = plan.first.values().copied().collect();
    if !x_clocks.is_empty() {
        passes.push(reset_pass(sigma, &plan.names, x_clocks));
    }
    for id in nf.modargs() {
        let pol = nf.polarity(id).expect("modarg has a polarity");
        if pol.has_f() {
            passes.push(modarg_pass(&nf, &plan, id, Modality::F));
        }
        if pol.has_p() {
            passes.push(modarg_pass(&nf, &plan, id, Modality::P));
        }
    }
    let root_guards: Vec<(Symbol, GuardExpr)> = sigma
        .iter()
        .map(|a| (a.clone(), letter_guard(&nf, &plan, nf.root(), a)))
        .collect();
    passes.extend(check_passes(sigma, &plan.names, &root_guards));
    let automaton = Po2dta::chain(&passes)?;
    Ok(LbCompilation {
        normal_form: nf,
        plan,
        passes,
        automaton,
    })
}

/// Language-equivalent po2DTA over `sigma`.
pub fn compile_lb(phi: &Formula, sigma: &Alphabet) -> Result<Po2dta, CompileError> {
    Ok(compile_lb_detailed(phi, sigma)?.automaton)
}
