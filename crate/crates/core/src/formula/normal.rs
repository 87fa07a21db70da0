//! Normal form `⋁_{a∈Σ} (a ∧ B_a(ψ_1,…,ψ_k))` with hash-consed modargs.
//!
//! Nodes and modal subformulas are numbered in creation order, which is a
//! post-order of the source DAG: every modarg gets a smaller id than any node
//! that mentions it. That order is the bottom-up order used by the compilers.

use std::collections::HashMap;
use std::fmt;

use super::{Formula, Modality, Node};
use crate::interval::Interval;
use crate::word::{Alphabet, Symbol};

pub type NodeId = usize;
pub type ModalId = usize;

/// Boolean combination of modal subformulas.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum BoolExpr {
    True,
    False,
    Var(ModalId),
    Not(Box<BoolExpr>),
    And(Vec<BoolExpr>),
    Or(Vec<BoolExpr>),
}

impl BoolExpr {
    pub fn not(e: BoolExpr) -> BoolExpr {
        match e {
            BoolExpr::True => BoolExpr::False,
            BoolExpr::False => BoolExpr::True,
            BoolExpr::Not(inner) => *inner,
            e => BoolExpr::Not(Box::new(e)),
        }
    }

    pub fn and(items: impl IntoIterator<Item = BoolExpr>) -> BoolExpr {
        let mut out = Vec::new();
        for e in items {
            match e {
                BoolExpr::True => {}
                BoolExpr::False => return BoolExpr::False,
                BoolExpr::And(inner) => out.extend(inner),
                e => out.push(e),
            }
        }
        match out.len() {
            0 => BoolExpr::True,
            1 => out.pop().unwrap(),
            _ => BoolExpr::And(out),
        }
    }

    pub fn or(items: impl IntoIterator<Item = BoolExpr>) -> BoolExpr {
        let mut out = Vec::new();
        for e in items {
            match e {
                BoolExpr::False => {}
                BoolExpr::True => return BoolExpr::True,
                BoolExpr::Or(inner) => out.extend(inner),
                e => out.push(e),
            }
        }
        match out.len() {
            0 => BoolExpr::False,
            1 => out.pop().unwrap(),
            _ => BoolExpr::Or(out),
        }
    }

    pub fn eval(&self, var: &mut impl FnMut(ModalId) -> bool) -> bool {
        match self {
            BoolExpr::True => true,
            BoolExpr::False => false,
            BoolExpr::Var(m) => var(*m),
            BoolExpr::Not(e) => !e.eval(var),
            BoolExpr::And(es) => es.iter().all(|e| e.eval(var)),
            BoolExpr::Or(es) => es.iter().any(|e| e.eval(var)),
        }
    }

    pub fn vars(&self, out: &mut Vec<ModalId>) {
        match self {
            BoolExpr::True | BoolExpr::False => {}
            BoolExpr::Var(m) => {
                if !out.contains(m) {
                    out.push(*m)
                }
            }
            BoolExpr::Not(e) => e.vars(out),
            BoolExpr::And(es) | BoolExpr::Or(es) => es.iter().for_each(|e| e.vars(out)),
        }
    }

    /// Structural map from variables to some other boolean domain.
    pub fn fold<T>(
        &self,
        var: &mut impl FnMut(ModalId) -> T,
        tt: &impl Fn() -> T,
        ff: &impl Fn() -> T,
        not: &impl Fn(T) -> T,
        and: &impl Fn(Vec<T>) -> T,
        or: &impl Fn(Vec<T>) -> T,
    ) -> T {
        match self {
            BoolExpr::True => tt(),
            BoolExpr::False => ff(),
            BoolExpr::Var(m) => var(*m),
            BoolExpr::Not(e) => not(e.fold(var, tt, ff, not, and, or)),
            BoolExpr::And(es) => and(es
                .iter()
                .map(|e| e.fold(var, tt, ff, not, and, or))
                .collect()),
            BoolExpr::Or(es) => or(es
                .iter()
                .map(|e| e.fold(var, tt, ff, not, and, or))
                .collect()),
        }
    }
}

/// `F_I(arg)` or `P_I(arg)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ModalSub {
    pub modality: Modality,
    pub interval: Interval,
    pub arg: NodeId,
}

/// `⋁_a (a ∧ B_a)`; letters with `B_a = ⊥` are omitted.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct NfNode {
    pub branches: Vec<(Symbol, BoolExpr)>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Polarity {
    F,
    P,
    Both,
}

impl Polarity {
    pub fn has_f(self) -> bool {
        matches!(self, Polarity::F | Polarity::Both)
    }

    pub fn has_p(self) -> bool {
        matches!(self, Polarity::P | Polarity::Both)
    }
}

#[derive(Clone, Debug)]
pub struct NormalForm {
    alphabet: Alphabet,
    nodes: Vec<NfNode>,
    modals: Vec<ModalSub>,
    root: NodeId,
}

const FALSE: BoolExpr = BoolExpr::False;

impl NormalForm {
    /// Atoms outside `sigma` are false everywhere and vanish.
    pub fn new(phi: &Formula, sigma: &Alphabet) -> NormalForm {
        let mut b = Builder {
            letters: sigma.iter().cloned().collect(),
            nodes: Vec::new(),
            node_index: HashMap::new(),
            modals: Vec::new(),
            modal_index: HashMap::new(),
            nf_memo: HashMap::new(),
            subst_memo: HashMap::new(),
        };
        let root = b.node_of(phi);
        NormalForm {
            alphabet: sigma.clone(),
            nodes: b.nodes,
            modals: b.modals,
            root,
        }
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn root(&self) -> NodeId {
        self.root
    }

    pub fn nodes(&self) -> &[NfNode] {
        &self.nodes
    }

    pub fn node(&self, id: NodeId) -> &NfNode {
        &self.nodes[id]
    }

    pub fn modals(&self) -> &[ModalSub] {
        &self.modals
    }

    pub fn modal(&self, id: ModalId) -> &ModalSub {
        &self.modals[id]
    }

    /// `B_a` of node `id`.
    pub fn branch(&self, id: NodeId, a: &Symbol) -> &BoolExpr {
        self.nodes[id]
            .branches
            .iter()
            .find(|(b, _)| b == a)
            .map(|(_, e)| e)
            .unwrap_or(&FALSE)
    }

    /// `F`/`P`/both for modargs, `None` for nodes never under a modality.
    pub fn polarity(&self, id: NodeId) -> Option<Polarity> {
        let f = self
            .modals
            .iter()
            .any(|m| m.arg == id && m.modality == Modality::F);
        let p = self
            .modals
            .iter()
            .any(|m| m.arg == id && m.modality == Modality::P);
        match (f, p) {
            (true, true) => Some(Polarity::Both),
            (true, false) => Some(Polarity::F),
            (false, true) => Some(Polarity::P),
            (false, false) => None,
        }
    }

    /// Modargs in bottom-up order.
    pub fn modargs(&self) -> Vec<NodeId> {
        (0..self.nodes.len())
            .filter(|&id| self.polarity(id).is_some())
            .collect()
    }

    /// Modal subformulas mentioned directly by node `id`.
    pub fn immediate_modals(&self, id: NodeId) -> Vec<ModalId> {
        let mut out = Vec::new();
        for (_, e) in &self.nodes[id].branches {
            e.vars(&mut out);
        }
        out.sort_unstable();
        out
    }

    /// Converts back to a shared-DAG formula.
    pub fn to_formula(&self) -> Formula {
        let mut nodes: Vec<Option<Formula>> = vec![None; self.nodes.len()];
        let mut modals: Vec<Option<Formula>> = vec![None; self.modals.len()];
        // ids are bottom-up: every modal's argument precedes its user
        for id in 0..self.nodes.len() {
            for m in self.immediate_modals(id) {
                if modals[m].is_none() {
                    let sub = self.modals[m];
                    modals[m] = Some(Formula::modal(
                        sub.modality,
                        sub.interval,
                        nodes[sub.arg].clone().expect("argument built first"),
                    ));
                }
            }
            let disjuncts = self.nodes[id].branches.iter().map(|(a, e)| {
                let b = e.fold(
                    &mut |m| modals[m].clone().unwrap(),
                    &Formula::tt,
                    &Formula::ff,
                    &Formula::not,
                    &|v| Formula::and_all(v),
                    &|v| Formula::or_all(v),
                );
                match e {
                    BoolExpr::True => Formula::sym(a),
                    _ => Formula::and(Formula::sym(a), b),
                }
            });
            nodes[id] = Some(Formula::or_all(disjuncts.collect::<Vec<_>>()));
        }
        nodes[self.root].clone().unwrap()
    }
}

impl fmt::Display for NormalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let show = |e: &BoolExpr| -> String {
            e.fold(
                &mut |m| format!("ψ{m}"),
                &|| "true".to_string(),
                &|| "false".to_string(),
                &|s| format!("!{s}"),
                &|v| format!("({})", v.join(" & ")),
                &|v| format!("({})", v.join(" | ")),
            )
        };
        for (id, node) in self.nodes.iter().enumerate() {
            let tag = if id == self.root { " (root)" } else { "" };
            let body: Vec<String> = node
                .branches
                .iter()
                .map(|(a, e)| format!("{a} & {}", show(e)))
                .collect();
            let body = if body.is_empty() {
                "false".to_string()
            } else {
                body.join(" | ")
            };
            writeln!(f, "φ{id}{tag} := {body}")?;
        }
        for (id, m) in self.modals.iter().enumerate() {
            let tag = match m.modality {
                Modality::F => "F",
                Modality::P => "P",
            };
            writeln!(f, "ψ{id} := {tag}{} φ{}", m.interval, m.arg)?;
        }
        Ok(())
    }
}

struct Builder {
    letters: Vec<Symbol>,
    nodes: Vec<NfNode>,
    node_index: HashMap<NfNode, NodeId>,
    modals: Vec<ModalSub>,
    modal_index: HashMap<ModalSub, ModalId>,
    nf_memo: HashMap<usize, NodeId>,
    subst_memo: HashMap<(usize, usize), BoolExpr>,
}

impl Builder {
    fn node_of(&mut self, phi: &Formula) -> NodeId {
        if let Some(&id) = self.nf_memo.get(&phi.key()) {
            return id;
        }
        let mut branches = Vec::new();
        for li in 0..self.letters.len() {
            let e = self.subst(phi, li);
            if e != BoolExpr::False {
                branches.push((self.letters[li].clone(), e));
            }
        }
        let node = NfNode { branches };
        let id = match self.node_index.get(&node) {
            Some(&id) => id,
            None => {
                let id = self.nodes.len();
                self.nodes.push(node.clone());
                self.node_index.insert(node, id);
                id
            }
        };
        self.nf_memo.insert(phi.key(), id);
        id
    }

    /// `phi` restricted to positions carrying letter `li`.
    fn subst(&mut self, phi: &Formula, li: usize) -> BoolExpr {
        if let Some(e) = self.subst_memo.get(&(phi.key(), li)) {
            return e.clone();
        }
        let e = match phi.node() {
            Node::True => BoolExpr::True,
            Node::False => BoolExpr::False,
            Node::Atom(b) => {
                if *b == self.letters[li] {
                    BoolExpr::True
                } else {
                    BoolExpr::False
                }
            }
            Node::Not(a) => BoolExpr::not(self.subst(a, li)),
            Node::And(a, b) => {
                let x = self.subst(a, li);
                if x == BoolExpr::False {
                    BoolExpr::False
                } else {
                    BoolExpr::and([x, self.subst(b, li)])
                }
            }
            Node::Or(a, b) => {
                let x = self.subst(a, li);
                if x == BoolExpr::True {
                    BoolExpr::True
                } else {
                    BoolExpr::or([x, self.subst(b, li)])
                }
            }
            Node::Modal(m, iv, a) => {
                let arg = self.node_of(a);
                let sub = ModalSub {
                    modality: *m,
                    interval: *iv,
                    arg,
                };
                let id = match self.modal_index.get(&sub) {
                    Some(&id) => id,
                    None => {
                        let id = self.modals.len();
                        self.modals.push(sub);
                        self.modal_index.insert(sub, id);
                        id
                    }
                };
                BoolExpr::Var(id)
            }
        };
        self.subst_memo.insert((phi.key(), li), e.clone());
        e
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse;
    use crate::word::alphabet;

    #[test]
    fn atom_keeps_single_disjunct() {
        let nf = NormalForm::new(&parse("c").unwrap(), &alphabet(["a", "c"]));
        let root = nf.node(nf.root());
        assert_eq!(root.branches, vec![(Symbol::new("c"), BoolExpr::True)]);
        assert_eq!(nf.to_formula().to_string(), "c");
    }

    #[test]
    fn conflicting_letters_vanish() {
        let nf = NormalForm::new(&parse("a & b").unwrap(), &alphabet(["a", "b"]));
        assert!(nf.node(nf.root()).branches.is_empty());
    }

    #[test]
    fn shared_modarg_is_interned_once() {
        let f = parse("F(1,inf) c | (a & F(1,inf) c)").unwrap();
        let nf = NormalForm::new(&f, &alphabet(["a", "c"]));
        assert_eq!(nf.modals().len(), 1);
        assert_eq!(nf.modargs().len(), 1);
        let arg = nf.modal(0).arg;
        assert!(arg < nf.root());
        assert_eq!(nf.polarity(arg), Some(Polarity::F));
    }

    #[test]
    fn polarity_both() {
        let f = parse("F(1,inf) c & P[0,inf) c").unwrap();
        let nf = NormalForm::new(&f, &alphabet(["a", "c"]));
        assert_eq!(nf.modals().len(), 2);
        assert_eq!(nf.polarity(nf.modal(0).arg), Some(Polarity::Both));
    }
}
