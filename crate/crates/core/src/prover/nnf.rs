//! Interned negation normal form.
//!
//! Every formula the tableau touches is an id into a store of NNF nodes:
//! literals, n-ary conjunctions and disjunctions, and per-agent boxes and
//! diamonds. `neg` maps each id to the id of its negation and is filled in
//! eagerly as nodes are interned, so complement checks during the search are
//! a single table lookup.

use std::collections::{HashMap, HashSet};

use crate::formula::Formula;

pub(crate) type NnfId = u32;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub(crate) enum NnfNode {
    Top,
    Bottom,
    /// `atom` indexes the store's atom table.
    Lit { atom: u32, positive: bool },
    And(Vec<NnfId>),
    Or(Vec<NnfId>),
    /// Agent indices are 0-based here.
    Box_ { agent: u32, body: NnfId },
    Dia { agent: u32, body: NnfId },
}

pub(crate) struct NnfStore {
    atoms: Vec<String>,
    atom_index: HashMap<String, u32>,
    nodes: Vec<NnfNode>,
    neg: Vec<NnfId>,
    interned: HashMap<NnfNode, NnfId>,
}

pub(crate) const TOP: NnfId = 0;
pub(crate) const BOTTOM: NnfId = 1;

impl NnfStore {
    /// Atom order fixes the extraction order of countermodel valuations.
    pub(crate) fn new(atoms: &[String]) -> Self {
        let atom_index = atoms
            .iter()
            .enumerate()
            .map(|(i, a)| (a.clone(), i as u32))
            .collect();
        let mut store = NnfStore {
            atoms: atoms.to_vec(),
            atom_index,
            nodes: Vec::new(),
            neg: Vec::new(),
            interned: HashMap::new(),
        };
        let top = store.intern(NnfNode::Top);
        let bottom = store.intern(NnfNode::Bottom);
        debug_assert_eq!(top, TOP);
        debug_assert_eq!(bottom, BOTTOM);
        store
    }

    pub(crate) fn node(&self, id: NnfId) -> &NnfNode {
        &self.nodes[id as usize]
    }

    pub(crate) fn neg(&self, id: NnfId) -> NnfId {
        self.neg[id as usize]
    }

    pub(crate) fn atoms(&self) -> &[String] {
        &self.atoms
    }

    /// Interns a node, registering its negation at the same time. The
    /// placeholder in `neg` is only visible to the re-entrant lookup that
    /// happens while that very negation is being built, and such a lookup
    /// never reads it.
    fn intern(&mut self, node: NnfNode) -> NnfId {
        if let Some(&id) = self.interned.get(&node) {
            return id;
        }
        let id = self.nodes.len() as NnfId;
        self.nodes.push(node.clone());
        self.neg.push(NnfId::MAX);
        self.interned.insert(node.clone(), id);
        let neg_id = match node {
            NnfNode::Top => self.intern(NnfNode::Bottom),
            NnfNode::Bottom => self.intern(NnfNode::Top),
            NnfNode::Lit { atom, positive } => self.intern(NnfNode::Lit {
                atom,
                positive: !positive,
            }),
            NnfNode::And(children) => {
                let negs = children.iter().map(|&c| self.neg(c)).collect();
                self.mk_or(negs)
            }
            NnfNode::Or(children) => {
                let negs = children.iter().map(|&c| self.neg(c)).collect();
                self.mk_and(negs)
            }
            NnfNode::Box_ { agent, body } => {
                let neg_body = self.neg(body);
                self.mk_dia(agent, neg_body)
            }
            NnfNode::Dia { agent, body } => {
                let neg_body = self.neg(body);
                self.mk_box(agent, neg_body)
            }
        };
        self.neg[id as usize] = neg_id;
        if self.neg[neg_id as usize] == NnfId::MAX {
            self.neg[neg_id as usize] = id;
        }
        id
    }

    pub(crate) fn mk_lit(&mut self, atom: u32, positive: bool) -> NnfId {
        self.intern(NnfNode::Lit { atom, positive })
    }

    /// Conjunction with flattening, `True`/`False` absorption, dedup and the
    /// complementary-pair check.
    pub(crate) fn mk_and(&mut self, children: Vec<NnfId>) -> NnfId {
        let mut flat = Vec::with_capacity(children.len());
        for id in children {
            match self.node(id) {
                NnfNode::And(inner) => flat.extend(inner.iter().copied()),
                NnfNode::Top => {}
                NnfNode::Bottom => return BOTTOM,
                _ => flat.push(id),
            }
        }
        flat.sort_unstable();
        flat.dedup();
        let present: HashSet<NnfId> = flat.iter().copied().collect();
        if flat.iter().any(|&id| present.contains(&self.neg(id))) {
            return BOTTOM;
        }
        match flat.len() {
            0 => TOP,
            1 => flat[0],
            _ => self.intern(NnfNode::And(flat)),
        }
    }

    pub(crate) fn mk_or(&mut self, children: Vec<NnfId>) -> NnfId {
        let mut flat = Vec::with_capacity(children.len());
        for id in children {
            match self.node(id) {
                NnfNode::Or(inner) => flat.extend(inner.iter().copied()),
                NnfNode::Bottom => {}
                NnfNode::Top => return TOP,
                _ => flat.push(id),
            }
        }
        flat.sort_unstable();
        flat.dedup();
        let present: HashSet<NnfId> = flat.iter().copied().collect();
        if flat.iter().any(|&id| present.contains(&self.neg(id))) {
            return TOP;
        }
        match flat.len() {
            0 => BOTTOM,
            1 => flat[0],
            _ => self.intern(NnfNode::Or(flat)),
        }
    }

    // `K True = True` and `K False = False` hold because the relations are
    // reflexive, and dually for diamonds.
    pub(crate) fn mk_box(&mut self, agent: u32, body: NnfId) -> NnfId {
        match body {
            TOP => TOP,
            BOTTOM => BOTTOM,
            _ => self.intern(NnfNode::Box_ { agent, body }),
        }
    }

    pub(crate) fn mk_dia(&mut self, agent: u32, body: NnfId) -> NnfId {
        match body {
            TOP => TOP,
            BOTTOM => BOTTOM,
            _ => self.intern(NnfNode::Dia { agent, body }),
        }
    }

    /// Converts a formula under a polarity: `convert(f, false)` is the NNF
    /// of `~f`. Atoms must already be in the store's atom table.
    pub(crate) fn convert(&mut self, f: &Formula, positive: bool) -> NnfId {
        match f {
            Formula::Atom(name) => {
                let atom = *self
                    .atom_index
                    .get(name)
                    .expect("atom validated against the store signature");
                self.mk_lit(atom, positive)
            }
            Formula::Top => {
                if positive {
                    TOP
                } else {
                    BOTTOM
                }
            }
            Formula::Bottom => {
                if positive {
                    BOTTOM
                } else {
                    TOP
                }
            }
            Formula::Not(g) => self.convert(g, !positive),
            Formula::And(a, b) => {
                let ca = self.convert(a, positive);
                let cb = self.convert(b, positive);
                if positive {
                    self.mk_and(vec![ca, cb])
                } else {
                    self.mk_or(vec![ca, cb])
                }
            }
            Formula::Or(a, b) => {
                let ca = self.convert(a, positive);
                let cb = self.convert(b, positive);
                if positive {
                    self.mk_or(vec![ca, cb])
                } else {
                    self.mk_and(vec![ca, cb])
                }
            }
            Formula::Implies(a, b) => {
                // a -> b reads as ~a | b, so the antecedent flips polarity
                let ca = self.convert(a, !positive);
                let cb = self.convert(b, positive);
                if positive {
                    self.mk_or(vec![ca, cb])
                } else {
                    self.mk_and(vec![ca, cb])
                }
            }
            Formula::Iff(a, b) => {
                let pa = self.convert(a, true);
                let na = self.convert(a, false);
                let pb = self.convert(b, true);
                let nb = self.convert(b, false);
                if positive {
                    let left = self.mk_or(vec![na, pb]);
                    let right = self.mk_or(vec![pa, nb]);
                    self.mk_and(vec![left, right])
                } else {
                    let left = self.mk_and(vec![pa, nb]);
                    let right = self.mk_and(vec![na, pb]);
                    self.mk_or(vec![left, right])
                }
            }
            Formula::Knows(i, g) => {
                let agent = i.index() - 1;
                let body = self.convert(g, positive);
                if positive {
                    self.mk_box(agent, body)
                } else {
                    self.mk_dia(agent, body)
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::parse_formula;

    fn store() -> NnfStore {
        NnfStore::new(&["p".into(), "q".into()])
    }

    fn convert(s: &mut NnfStore, text: &str, positive: bool) -> NnfId {
        let f = parse_formula(text, 2).unwrap();
        s.convert(&f, positive)
    }

    #[test]
    fn negation_is_an_involution() {
        let mut s = store();
        let ids = [
            convert(&mut s, "p", true),
            convert(&mut s, "p & q", true),
            convert(&mut s, "p | ~q", true),
            convert(&mut s, "K1 (p -> q)", true),
            convert(&mut s, "~K2 (p <-> q)", true),
        ];
        for id in ids {
            assert_eq!(s.neg(s.neg(id)), id);
            assert_ne!(s.neg(id), id);
        }
    }

    #[test]
    fn positive_and_negative_conversion_are_negations() {
        let mut s = store();
        for text in ["p -> q", "p <-> q", "K1 p | K2 ~q", "~(p & K1 q)"] {
            let pos = convert(&mut s, text, true);
            let neg = convert(&mut s, text, false);
            assert_eq!(s.neg(pos), neg, "for {text}");
        }
    }

    #[test]
    fn interning_dedups_reordered_conjunctions() {
        let mut s = store();
        let a = convert(&mut s, "p & q", true);
        let b = convert(&mut s, "q & p", true);
        assert_eq!(a, b);
    }

    #[test]
    fn complementary_pairs_collapse() {
        let mut s = store();
        assert_eq!(convert(&mut s, "p & ~p", true), BOTTOM);
        assert_eq!(convert(&mut s, "p | ~p", true), TOP);
        assert_eq!(convert(&mut s, "K1 (p | ~p)", true), TOP);
        assert_eq!(convert(&mut s, "~K1 (p & ~p)", true), TOP);
    }

    #[test]
    fn implication_unfolds() {
        let mut s = store();
        let imp = convert(&mut s, "p -> q", true);
        let disj = convert(&mut s, "~p | q", true);
        assert_eq!(imp, disj);
    }

    #[test]
    fn knowledge_polarity() {
        let mut s = store();
        let id = convert(&mut s, "~K2 p", true);
        match s.node(id) {
            NnfNode::Dia { agent, body } => {
                assert_eq!(*agent, 1);
                assert!(matches!(
                    s.node(*body),
                    NnfNode::Lit {
                        positive: false,
                        ..
                    }
                ));
            }
            other => panic!("expected a diamond, got {other:?}"),
        }
    }
}
