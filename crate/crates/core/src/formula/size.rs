//! Modal-DAG size `l = n + Σ bits(c)`.

use std::collections::HashMap;

use super::{Formula, Modality, Node};
use crate::interval::Interval;
use crate::word::Symbol;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DagSize {
    /// Distinct modal nodes.
    pub modalities: usize,
    /// Binary digits of all finite interval endpoints of those nodes.
    pub constant_bits: u64,
    /// `modalities + constant_bits`
    pub total: u64,
}

/// Binary length of `c`, `⌈log2(c+1)⌉`; zero needs no bits.
pub fn bits(c: u64) -> u64 {
    (u64::BITS - c.leading_zeros()) as u64
}

#[derive(Hash, PartialEq, Eq)]
enum Key {
    True,
    False,
    Atom(Symbol),
    Not(usize),
    And(usize, usize),
    Or(usize, usize),
    Modal(Modality, Interval, usize),
}

/// Counts structurally distinct modal subformulas, so syntactic repetition
/// is measured as if shared.
pub fn modal_dag_size(f: &Formula) -> DagSize {
    let mut ids: HashMap<usize, usize> = HashMap::new();
    let mut interned: HashMap<Key, usize> = HashMap::new();
    let mut size = DagSize {
        modalities: 0,
        constant_bits: 0,
        total: 0,
    };
    f.for_each_node(|g| {
        let id = |h: &Formula| ids[&h.key()];
        let key = match g.node() {
            Node::True => Key::True,
            Node::False => Key::False,
            Node::Atom(s) => Key::Atom(s.clone()),
            Node::Not(a) => Key::Not(id(a)),
            Node::And(a, b) => Key::And(id(a), id(b)),
            Node::Or(a, b) => Key::Or(id(a), id(b)),
            Node::Modal(m, iv, a) => Key::Modal(*m, *iv, id(a)),
        };
        let fresh = interned.len();
        let n = *interned.entry(key).or_insert_with(|| {
            if let Node::Modal(_, iv, _) = g.node() {
                size.modalities += 1;
                size.constant_bits += bits(iv.lower()) + iv.upper().map_or(0, bits);
            }
            fresh
        });
        ids.insert(g.key(), n);
    });
    size.total = size.modalities as u64 + size.constant_bits;
    size
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse;

    #[test]
    fn sizes() {
        let s = modal_dag_size(&parse("a").unwrap());
        assert_eq!((s.modalities, s.constant_bits, s.total), (0, 0, 0));
        let s = modal_dag_size(&parse("F(1,inf) c").unwrap());
        assert_eq!((s.modalities, s.constant_bits, s.total), (1, 1, 2));
        let s = modal_dag_size(&parse("F(1,inf) c | F(1,inf) c").unwrap());
        assert_eq!((s.modalities, s.constant_bits, s.total), (1, 1, 2));
        let s = modal_dag_size(&parse("F(1,2) c").unwrap());
        assert_eq!((s.modalities, s.constant_bits), (1, 3));
    }

    #[test]
    fn bit_lengths() {
        assert_eq!(bits(0), 0);
        assert_eq!(bits(1), 1);
        assert_eq!(bits(2), 2);
        assert_eq!(bits(3), 2);
        assert_eq!(bits(4), 3);
    }
}
