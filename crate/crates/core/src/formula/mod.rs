//! Unary MITL formulas over `F_I` / `P_I`.
//!
//! A [`Formula`] is a cheap reference-counted handle; subterms may be shared,
//! so a formula is really a DAG. Equality is structural.

mod fragment;
mod normal;
mod parser;
mod size;

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use crate::interval::Interval;
use crate::word::Symbol;

pub use fragment::{classify, is_bounded, is_lower_bound, Fragment, FragmentTag};
pub use normal::{BoolExpr, ModalId, ModalSub, NfNode, NodeId, NormalForm, Polarity};
pub use parser::{parse, parse_with_alphabet, ParseError};
pub use size::{modal_dag_size, DagSize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Modality {
    /// Strict future.
    F,
    /// Strict past.
    P,
}

#[derive(Debug, PartialEq, Eq)]
pub enum Node {
    True,
    False,
    Atom(Symbol),
    Not(Formula),
    And(Formula, Formula),
    Or(Formula, Formula),
    Modal(Modality, Interval, Formula),
}

#[derive(Clone)]
pub struct Formula(Arc<Node>);

impl PartialEq for Formula {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0 == other.0
    }
}

impl Eq for Formula {}

impl Formula {
    fn mk(node: Node) -> Formula {
        Formula(Arc::new(node))
    }

    pub fn node(&self) -> &Node {
        &self.0
    }

    /// Address of the shared node; stable while the formula is alive.
    pub(crate) fn key(&self) -> usize {
        Arc::as_ptr(&self.0) as usize
    }

    pub fn tt() -> Formula {
        Formula::mk(Node::True)
    }

    pub fn ff() -> Formula {
        Formula::mk(Node::False)
    }

    pub fn atom(name: &str) -> Formula {
        Formula::mk(Node::Atom(Symbol::new(name)))
    }

    pub fn sym(s: &Symbol) -> Formula {
        Formula::mk(Node::Atom(s.clone()))
    }

    pub fn not(f: Formula) -> Formula {
        Formula::mk(Node::Not(f))
    }

    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::mk(Node::And(a, b))
    }

    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::mk(Node::Or(a, b))
    }

    pub fn implies(a: Formula, b: Formula) -> Formula {
        Formula::or(Formula::not(a), b)
    }

    pub fn modal(m: Modality, iv: Interval, f: Formula) -> Formula {
        Formula::mk(Node::Modal(m, iv, f))
    }

    pub fn f(iv: Interval, f: Formula) -> Formula {
        Formula::modal(Modality::F, iv, f)
    }

    pub fn p(iv: Interval, f: Formula) -> Formula {
        Formula::modal(Modality::P, iv, f)
    }

    /// Left-nested conjunction; `true` when empty.
    pub fn and_all(items: impl IntoIterator<Item = Formula>) -> Formula {
        items
            .into_iter()
            .reduce(Formula::and)
            .unwrap_or_else(Formula::tt)
    }

    /// Left-nested disjunction; `false` when empty.
    pub fn or_all(items: impl IntoIterator<Item = Formula>) -> Formula {
        items
            .into_iter()
            .reduce(Formula::or)
            .unwrap_or_else(Formula::ff)
    }

    /// Reflexive henceforth: `ψ ∧ ¬F_I ¬ψ`.
    pub fn globally_within(iv: Interval, psi: Formula) -> Formula {
        Formula::and(psi.clone(), Formula::not(Formula::f(iv, Formula::not(psi))))
    }

    /// `ψ ∧ ¬F_[0,∞) ¬ψ`
    pub fn globally(psi: Formula) -> Formula {
        Formula::globally_within(Interval::anywhere(), psi)
    }

    /// Holds only at the first position: `¬P_[0,∞) ⊤`.
    pub fn at_first() -> Formula {
        Formula::not(Formula::p(Interval::anywhere(), Formula::tt()))
    }

    /// Holds only at the last position: `¬F_[0,∞) ⊤`.
    pub fn at_last() -> Formula {
        Formula::not(Formula::f(Interval::anywhere(), Formula::tt()))
    }

    /// Visits every distinct shared node once, children before parents.
    pub fn for_each_node(&self, mut visit: impl FnMut(&Formula)) {
        let mut seen = std::collections::HashSet::new();
        let mut stack = vec![(self.clone(), false)];
        while let Some((f, expanded)) = stack.pop() {
            if expanded {
                visit(&f);
                continue;
            }
            if !seen.insert(f.key()) {
                continue;
            }
            stack.push((f.clone(), true));
            for child in f.children().into_iter().rev() {
                stack.push((child.clone(), false));
            }
        }
    }

    pub fn children(&self) -> Vec<&Formula> {
        match self.node() {
            Node::True | Node::False | Node::Atom(_) => vec![],
            Node::Not(a) | Node::Modal(_, _, a) => vec![a],
            Node::And(a, b) | Node::Or(a, b) => vec![a, b],
        }
    }

    pub fn atoms(&self) -> BTreeSet<Symbol> {
        let mut out = BTreeSet::new();
        self.for_each_node(|f| {
            if let Node::Atom(s) = f.node() {
                out.insert(s.clone());
            }
        });
        out
    }

    pub fn intervals(&self) -> Vec<(Modality, Interval)> {
        let mut out = Vec::new();
        self.for_each_node(|f| {
            if let Node::Modal(m, iv, _) = f.node() {
                out.push((*m, *iv));
            }
        });
        out
    }

    /// Largest finite interval endpoint, 0 if none.
    pub fn max_constant(&self) -> u64 {
        self.intervals()
            .iter()
            .map(|(_, iv)| iv.upper().unwrap_or(0).max(iv.lower()))
            .max()
            .unwrap_or(0)
    }

    /// Number of distinct shared nodes.
    pub fn dag_nodes(&self) -> usize {
        let mut n = 0;
        self.for_each_node(|_| n += 1);
        n
    }
}

fn write_formula(f: &Formula, out: &mut fmt::Formatter<'_>) -> fmt::Result {
    match f.node() {
        Node::True => out.write_str("true"),
        Node::False => out.write_str("false"),
        Node::Atom(s) => write!(out, "{s}"),
        Node::Not(a) => {
            out.write_str("!")?;
            write_formula(a, out)
        }
        Node::And(a, b) => {
            out.write_str("(")?;
            write_formula(a, out)?;
            out.write_str(" & ")?;
            write_formula(b, out)?;
            out.write_str(")")
        }
        Node::Or(a, b) => {
            out.write_str("(")?;
            write_formula(a, out)?;
            out.write_str(" | ")?;
            write_formula(b, out)?;
            out.write_str(")")
        }
        Node::Modal(m, iv, a) => {
            let tag = match m {
                Modality::F => "F",
                Modality::P => "P",
            };
            write!(out, "{tag}{iv} ")?;
            write_formula(a, out)
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_formula(self, f)
    }
}

impl fmt::Debug for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Formula({self})")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn printing_parenthesises_binaries() {
        let f = Formula::f(
            Interval::greater_than(0),
            Formula::and(
                Formula::atom("a"),
                Formula::f(Interval::greater_than(2), Formula::atom("c")),
            ),
        );
        assert_eq!(f.to_string(), "F(0,inf) (a & F(2,inf) c)");
    }

    #[test]
    fn shared_nodes_visited_once() {
        let c = Formula::f(Interval::greater_than(1), Formula::atom("c"));
        let f = Formula::or(c.clone(), c);
        assert_eq!(f.dag_nodes(), 3);
        assert_eq!(f.intervals().len(), 1);
        assert_eq!(f.max_constant(), 1);
    }
}
