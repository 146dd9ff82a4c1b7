//! Finite formula fragments.
//!
//! Completeness and exactness analyses quantify over "all formulas", which is
//! impossible verbatim; a [`FragmentSpec`] carves out a finite, deterministic
//! sample instead. Enumeration is stratified by modal depth so that the list
//! for depth `d` is a prefix of the list for depth `d + 1`, and everything is
//! deduplicated under [`Formula::normalize`].

use std::collections::HashSet;

use crate::formula::Formula;

/// Which formulas a fragment contains, level by level.
///
/// * `Literals`: `a` and `~a` for each atom; depth is ignored.
/// * `KOverLiterals`: literals, then `K_i f` / `~K_i f` over everything from
///   the previous level, repeated to the depth bound.
/// * `KOverBooleans`: like `KOverLiterals`, but each level also adds pairwise
///   `&` / `|` combinations of the modal literals it introduced (and level 0
///   adds pairwise combinations of the atom literals).
/// * `Full`: every formula over the whole connective set with at most
///   [`FULL_SHAPE_MAX_NODES`] AST nodes, grouped by modal depth.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FragmentShape {
    Literals,
    KOverLiterals,
    KOverBooleans,
    Full,
}

/// Node-count ceiling for [`FragmentShape::Full`]; without it a single depth
/// level would already be infinite.
pub const FULL_SHAPE_MAX_NODES: usize = 6;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FragmentSpec {
    pub atoms: Vec<String>,
    pub agent_count: u32,
    pub max_modal_depth: u32,
    pub shape: FragmentShape,
    /// Upper bound on how many formulas to emit. Hitting it is reported via
    /// [`EnumeratedFragment::truncated`], never silently.
    pub size_budget: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EnumeratedFragment {
    pub formulas: Vec<Formula>,
    pub truncated: bool,
}

struct Acc {
    out: Vec<Formula>,
    seen: HashSet<Formula>,
    budget: usize,
    truncated: bool,
}

impl Acc {
    fn new(budget: usize) -> Self {
        Acc {
            out: Vec::new(),
            seen: HashSet::new(),
            budget,
            truncated: false,
        }
    }

    /// Adds the normalized form of `f` unless it is already present.
    /// Returns false once the budget is exhausted.
    fn push(&mut self, f: Formula) -> bool {
        let f = f.normalize();
        if self.seen.contains(&f) {
            return true;
        }
        if self.out.len() >= self.budget {
            self.truncated = true;
            return false;
        }
        self.seen.insert(f.clone());
        self.out.push(f);
        true
    }
}

impl FragmentSpec {
    pub fn enumerate(&self) -> EnumeratedFragment {
        let mut acc = Acc::new(self.size_budget);
        match self.shape {
            FragmentShape::Literals => self.emit_literals(&mut acc),
            FragmentShape::KOverLiterals => self.emit_k_levels(&mut acc, false),
            FragmentShape::KOverBooleans => self.emit_k_levels(&mut acc, true),
            FragmentShape::Full => self.emit_full(&mut acc),
        }
        EnumeratedFragment {
            formulas: acc.out,
            truncated: acc.truncated,
        }
    }

    fn emit_literals(&self, acc: &mut Acc) {
        for atom in &self.atoms {
            if !acc.push(Formula::atom(atom.clone())) {
                return;
            }
            if !acc.push(Formula::not(Formula::atom(atom.clone()))) {
                return;
            }
        }
    }

    fn emit_k_levels(&self, acc: &mut Acc, with_booleans: bool) {
        self.emit_literals(acc);
        if acc.truncated {
            return;
        }
        if with_booleans {
            let base: Vec<Formula> = acc.out.clone();
            if !emit_pairs(acc, &base) {
                return;
            }
        }
        for _ in 0..self.max_modal_depth {
            let snapshot: Vec<Formula> = acc.out.clone();
            let before = acc.out.len();
            for f in &snapshot {
                for agent in 1..=self.agent_count {
                    if !acc.push(Formula::knows(agent, f.clone())) {
                        return;
                    }
                    if !acc.push(Formula::not(Formula::knows(agent, f.clone()))) {
                        return;
                    }
                }
            }
            if with_booleans {
                let fresh: Vec<Formula> = acc.out[before..].to_vec();
                if !emit_pairs(acc, &fresh) {
                    return;
                }
            }
        }
    }

    fn emit_full(&self, acc: &mut Acc) {
        for depth in 0..=self.max_modal_depth {
            for size in 1..=FULL_SHAPE_MAX_NODES {
                for f in self.formulas_of_size(size, depth) {
                    if !acc.push(f) {
                        return;
                    }
                }
            }
        }
    }

    /// All formulas with exactly `size` AST nodes and modal depth at most
    /// `depth`, in a fixed constructor order.
    fn formulas_of_size(&self, size: usize, depth: u32) -> Vec<Formula> {
        let mut out = Vec::new();
        if size == 1 {
            for atom in &self.atoms {
                out.push(Formula::atom(atom.clone()));
            }
            out.push(Formula::Top);
            out.push(Formula::Bottom);
            return out;
        }
        for sub in self.formulas_of_size(size - 1, depth) {
            out.push(Formula::not(sub));
        }
        if depth > 0 {
            for agent in 1..=self.agent_count {
                for sub in self.formulas_of_size(size - 1, depth - 1) {
                    out.push(Formula::knows(agent, sub));
                }
            }
        }
        for left_size in 1..size - 1 {
            let right_size = size - 1 - left_size;
            for left in self.formulas_of_size(left_size, depth) {
                for right in self.formulas_of_size(right_size, depth) {
                    out.push(Formula::and(left.clone(), right.clone()));
                    out.push(Formula::or(left.clone(), right.clone()));
                    out.push(Formula::implies(left.clone(), right.clone()));
                    out.push(Formula::iff(left.clone(), right.clone()));
                }
            }
        }
        out
    }
}

/// `a & b` and `a | b` for every pair from `pool`, first index minor.
fn emit_pairs(acc: &mut Acc, pool: &[Formula]) -> bool {
    for (i, a) in pool.iter().enumerate() {
        for b in pool.iter().skip(i + 1) {
            if !acc.push(Formula::and(a.clone(), b.clone())) {
                return false;
            }
            if !acc.push(Formula::or(a.clone(), b.clone())) {
                return false;
            }
        }
    }
    true
}
