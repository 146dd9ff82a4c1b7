//! Formula syntax for multi-agent S5.
//!
//! `Formula` is the core AST. The `E` ("everybody knows") macro only exists in
//! [`SurfaceFormula`], which the parser produces; [`expand_everybody`] lowers it
//! into a conjunction of `K_i` before anything else sees the formula. Common
//! knowledge is not a connective either: it is an assumption mode on
//! [`Scenario`], made concrete by [`expand_ck`] as a finite set of `K`-prefixed
//! formulas up to a requested depth.

use std::collections::{BTreeSet, HashSet};
use std::fmt;

use thiserror::Error;

/// 1-based agent index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AgentId(u32);

impl AgentId {
    /// Panics if `index` is zero; agents are numbered from 1.
    pub fn new(index: u32) -> Self {
        assert!(index >= 1, "agent indices start at 1");
        AgentId(index)
    }

    pub fn index(self) -> u32 {
        self.0
    }
}

impl fmt::Display for AgentId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// An epistemic formula. `Knows(i, f)` is `K_i f`; the remaining constructors
/// are classical. Binary connectives are kept binary in the tree; `conj` and
/// `disj` fold lists right-associatively.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Formula {
    Atom(String),
    Top,
    Bottom,
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Iff(Box<Formula>, Box<Formula>),
    Knows(AgentId, Box<Formula>),
}

impl Formula {
    pub fn atom(name: impl Into<String>) -> Self {
        Formula::Atom(name.into())
    }

    pub fn not(f: Formula) -> Self {
        Formula::Not(Box::new(f))
    }

    pub fn and(a: Formula, b: Formula) -> Self {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Self {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn implies(a: Formula, b: Formula) -> Self {
        Formula::Implies(Box::new(a), Box::new(b))
    }

    pub fn iff(a: Formula, b: Formula) -> Self {
        Formula::Iff(Box::new(a), Box::new(b))
    }

    pub fn knows(agent: u32, f: Formula) -> Self {
        Formula::Knows(AgentId::new(agent), Box::new(f))
    }

    /// Right-associative conjunction of `parts`; `Top` when empty.
    pub fn conj(parts: impl IntoIterator<Item = Formula>) -> Self {
        let mut parts: Vec<Formula> = parts.into_iter().collect();
        match parts.pop() {
            None => Formula::Top,
            Some(last) => parts.into_iter().rev().fold(last, |acc, f| Formula::and(f, acc)),
        }
    }

    /// Right-associative disjunction of `parts`; `Bottom` when empty.
    pub fn disj(parts: impl IntoIterator<Item = Formula>) -> Self {
        let mut parts: Vec<Formula> = parts.into_iter().collect();
        match parts.pop() {
            None => Formula::Bottom,
            Some(last) => parts.into_iter().rev().fold(last, |acc, f| Formula::or(f, acc)),
        }
    }

    /// Maximum nesting depth of `K` operators.
    pub fn modal_depth(&self) -> u32 {
        match self {
            Formula::Atom(_) | Formula::Top | Formula::Bottom => 0,
            Formula::Not(f) => f.modal_depth(),
            Formula::And(a, b)
            | Formula::Or(a, b)
            | Formula::Implies(a, b)
            | Formula::Iff(a, b) => a.modal_depth().max(b.modal_depth()),
            Formula::Knows(_, f) => 1 + f.modal_depth(),
        }
    }

    /// Every atom name occurring in the formula.
    pub fn atoms(&self) -> BTreeSet<&str> {
        let mut out = BTreeSet::new();
        self.collect_atoms(&mut out);
        out
    }

    fn collect_atoms<'a>(&'a self, out: &mut BTreeSet<&'a str>) {
        match self {
            Formula::Atom(name) => {
                out.insert(name.as_str());
            }
            Formula::Top | Formula::Bottom => {}
            Formula::Not(f) | Formula::Knows(_, f) => f.collect_atoms(out),
            Formula::And(a, b)
            | Formula::Or(a, b)
            | Formula::Implies(a, b)
            | Formula::Iff(a, b) => {
                a.collect_atoms(out);
                b.collect_atoms(out);
            }
        }
    }

    /// Largest agent index used, or 0 for a purely Boolean formula.
    pub fn max_agent(&self) -> u32 {
        match self {
            Formula::Atom(_) | Formula::Top | Formula::Bottom => 0,
            Formula::Not(f) => f.max_agent(),
            Formula::And(a, b)
            | Formula::Or(a, b)
            | Formula::Implies(a, b)
            | Formula::Iff(a, b) => a.max_agent().max(b.max_agent()),
            Formula::Knows(i, f) => i.index().max(f.max_agent()),
        }
    }

    /// Checks that agent indices fit `agent_count` and atoms occur in `atoms`.
    pub fn validate(&self, agent_count: u32, atoms: &[String]) -> Result<(), SignatureError> {
        match self {
            Formula::Atom(name) => {
                if atoms.iter().any(|a| a == name) {
                    Ok(())
                } else {
                    Err(SignatureError::UnknownAtom { name: name.clone() })
                }
            }
            Formula::Top | Formula::Bottom => Ok(()),
            Formula::Not(f) => f.validate(agent_count, atoms),
            Formula::And(a, b)
            | Formula::Or(a, b)
            | Formula::Implies(a, b)
            | Formula::Iff(a, b) => {
                a.validate(agent_count, atoms)?;
                b.validate(agent_count, atoms)
            }
            Formula::Knows(i, f) => {
                if i.index() > agent_count {
                    return Err(SignatureError::AgentOutOfRange {
                        index: i.index(),
                        agent_count,
                    });
                }
                f.validate(agent_count, atoms)
            }
        }
    }

    /// Canonical form used for deduplication: double negations dropped, chains
    /// of `&` and `|` flattened, sorted by the derived structural order, and
    /// rebuilt right-associatively. No other rewriting, so the result is
    /// semantically equivalent to the input and `normalize` is idempotent.
    pub fn normalize(&self) -> Formula {
        match self {
            Formula::Atom(_) | Formula::Top | Formula::Bottom => self.clone(),
            Formula::Not(f) => {
                let inner = f.normalize();
                match inner {
                    Formula::Not(g) => *g,
                    other => Formula::not(other),
                }
            }
            Formula::And(a, b) => {
                let mut parts = Vec::new();
                flatten_and(a.normalize(), &mut parts);
                flatten_and(b.normalize(), &mut parts);
                parts.sort();
                Formula::conj(parts)
            }
            Formula::Or(a, b) => {
                let mut parts = Vec::new();
                flatten_or(a.normalize(), &mut parts);
                flatten_or(b.normalize(), &mut parts);
                parts.sort();
                Formula::disj(parts)
            }
            Formula::Implies(a, b) => Formula::implies(a.normalize(), b.normalize()),
            Formula::Iff(a, b) => Formula::iff(a.normalize(), b.normalize()),
            Formula::Knows(i, f) => Formula::Knows(*i, Box::new(f.normalize())),
        }
    }
}

fn flatten_and(f: Formula, out: &mut Vec<Formula>) {
    match f {
        Formula::And(a, b) => {
            flatten_and(*a, out);
            flatten_and(*b, out);
        }
        other => out.push(other),
    }
}

fn flatten_or(f: Formula, out: &mut Vec<Formula>) {
    match f {
        Formula::Or(a, b) => {
            flatten_or(*a, out);
            flatten_or(*b, out);
        }
        other => out.push(other),
    }
}

/// Formula as written in source, before the `E` macro is expanded.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SurfaceFormula {
    Atom(String),
    Top,
    Bottom,
    Not(Box<SurfaceFormula>),
    And(Box<SurfaceFormula>, Box<SurfaceFormula>),
    Or(Box<SurfaceFormula>, Box<SurfaceFormula>),
    Implies(Box<SurfaceFormula>, Box<SurfaceFormula>),
    Iff(Box<SurfaceFormula>, Box<SurfaceFormula>),
    Knows(AgentId, Box<SurfaceFormula>),
    /// `E f`, shorthand for `K_1 f & ... & K_n f`.
    Everybody(Box<SurfaceFormula>),
}

impl SurfaceFormula {
    /// Modal depth with `E` counting as one layer, matching what it expands to.
    pub fn modal_depth(&self) -> u32 {
        match self {
            SurfaceFormula::Atom(_) | SurfaceFormula::Top | SurfaceFormula::Bottom => 0,
            SurfaceFormula::Not(f) => f.modal_depth(),
            SurfaceFormula::And(a, b)
            | SurfaceFormula::Or(a, b)
            | SurfaceFormula::Implies(a, b)
            | SurfaceFormula::Iff(a, b) => a.modal_depth().max(b.modal_depth()),
            SurfaceFormula::Knows(_, f) | SurfaceFormula::Everybody(f) => 1 + f.modal_depth(),
        }
    }
}

/// Replaces every `E f` with `K_1 f & ... & K_n f` for `agent_count` agents.
pub fn expand_everybody(f: &SurfaceFormula, agent_count: u32) -> Formula {
    assert!(agent_count >= 1, "need at least one agent");
    match f {
        SurfaceFormula::Atom(name) => Formula::Atom(name.clone()),
        SurfaceFormula::Top => Formula::Top,
        SurfaceFormula::Bottom => Formula::Bottom,
        SurfaceFormula::Not(g) => Formula::not(expand_everybody(g, agent_count)),
        SurfaceFormula::And(a, b) => Formula::and(
            expand_everybody(a, agent_count),
            expand_everybody(b, agent_count),
        ),
        SurfaceFormula::Or(a, b) => Formula::or(
            expand_everybody(a, agent_count),
            expand_everybody(b, agent_count),
        ),
        SurfaceFormula::Implies(a, b) => Formula::implies(
            expand_everybody(a, agent_count),
            expand_everybody(b, agent_count),
        ),
        SurfaceFormula::Iff(a, b) => Formula::iff(
            expand_everybody(a, agent_count),
            expand_everybody(b, agent_count),
        ),
        SurfaceFormula::Knows(i, g) => {
            Formula::Knows(*i, Box::new(expand_everybody(g, agent_count)))
        }
        SurfaceFormula::Everybody(g) => {
            let body = expand_everybody(g, agent_count);
            Formula::conj((1..=agent_count).map(|i| Formula::knows(i, body.clone())))
        }
    }
}

/// How an assumption contributes to a scenario's hypothesis set.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AssumptionMode {
    /// The bare formula, nothing more.
    Plain,
    /// Common knowledge: the formula under every `K`-prefix up to the
    /// expansion depth chosen at query time.
    CommonKnowledge,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Assumption {
    pub formula: Formula,
    pub mode: AssumptionMode,
}

impl Assumption {
    pub fn plain(formula: Formula) -> Self {
        Assumption {
            formula,
            mode: AssumptionMode::Plain,
        }
    }

    pub fn common_knowledge(formula: Formula) -> Self {
        Assumption {
            formula,
            mode: AssumptionMode::CommonKnowledge,
        }
    }
}

/// A finite reasoning situation: agent count, atom signature, and an ordered
/// list of assumptions. Constructed through [`Scenario::new`], which checks
/// that atom names are well-formed and unique and that every assumption stays
/// inside the signature.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Scenario {
    agent_count: u32,
    atoms: Vec<String>,
    assumptions: Vec<Assumption>,
}

impl Scenario {
    pub fn new(
        agent_count: u32,
        atoms: Vec<String>,
        assumptions: Vec<Assumption>,
    ) -> Result<Self, ScenarioError> {
        if agent_count == 0 {
            return Err(ScenarioError::NoAgents);
        }
        let mut seen = HashSet::new();
        for atom in &atoms {
            if !is_atom_name(atom) {
                return Err(ScenarioError::BadAtomName { name: atom.clone() });
            }
            if !seen.insert(atom.clone()) {
                return Err(ScenarioError::DuplicateAtom { name: atom.clone() });
            }
        }
        for assumption in &assumptions {
            assumption.formula.validate(agent_count, &atoms)?;
        }
        Ok(Scenario {
            agent_count,
            atoms,
            assumptions,
        })
    }

    pub fn agent_count(&self) -> u32 {
        self.agent_count
    }

    pub fn atoms(&self) -> &[String] {
        &self.atoms
    }

    pub fn assumptions(&self) -> &[Assumption] {
        &self.assumptions
    }

    pub fn has_common_knowledge(&self) -> bool {
        self.assumptions
            .iter()
            .any(|a| a.mode == AssumptionMode::CommonKnowledge)
    }

    pub fn max_assumption_depth(&self) -> u32 {
        self.assumptions
            .iter()
            .map(|a| a.formula.modal_depth())
            .max()
            .unwrap_or(0)
    }

    /// Same scenario with one more assumption appended.
    pub fn with_assumption(&self, assumption: Assumption) -> Result<Self, ScenarioError> {
        let mut assumptions = self.assumptions.clone();
        assumptions.push(assumption);
        Scenario::new(self.agent_count, self.atoms.clone(), assumptions)
    }
}

/// `[a-z][a-zA-Z0-9_]*`
pub fn is_atom_name(name: &str) -> bool {
    let mut chars = name.chars();
    match chars.next() {
        Some(c) if c.is_ascii_lowercase() => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SignatureError {
    #[error("unknown atom `{name}`")]
    UnknownAtom { name: String },
    #[error("agent index {index} out of range (have {agent_count} agents)")]
    AgentOutOfRange { index: u32, agent_count: u32 },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScenarioError {
    #[error("a scenario needs at least one agent")]
    NoAgents,
    #[error("`{name}` is not a valid atom name")]
    BadAtomName { name: String },
    #[error("atom `{name}` declared twice")]
    DuplicateAtom { name: String },
    #[error(transparent)]
    Signature(#[from] SignatureError),
}

/// Default cap on the number of formulas [`expand_ck`] may produce.
pub const DEFAULT_EXPANSION_LIMIT: usize = 20_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExpansionError {
    #[error("expansion needs {required} formulas, over the cap of {cap}")]
    BudgetExceeded { required: u128, cap: usize },
}

/// Concrete hypothesis set of a scenario at common-knowledge depth `depth`.
///
/// Plain assumptions contribute themselves. A common-knowledge assumption `A`
/// contributes `P_1 ... P_j A` for every `0 <= j <= depth` and every choice of
/// `P_m` among `K_1 ... K_n`, which is `sum(n^j)` formulas before
/// deduplication. Output order is by prefix length, then assumption order,
/// then agent order, so the result for `depth` is a prefix of the result for
/// `depth + 1`. The count is checked against `cap` before anything is built.
pub fn expand_ck(s: &Scenario, depth: u32, cap: usize) -> Result<Vec<Formula>, ExpansionError> {
    let n = s.agent_count() as u128;
    let ck_count = s
        .assumptions()
        .iter()
        .filter(|a| a.mode == AssumptionMode::CommonKnowledge)
        .count() as u128;
    let plain_count = s.assumptions().len() as u128 - ck_count;

    let mut per_ck: u128 = 0;
    let mut level: u128 = 1;
    for _ in 0..=depth {
        per_ck = per_ck.saturating_add(level);
        level = level.saturating_mul(n);
    }
    let required = plain_count.saturating_add(ck_count.saturating_mul(per_ck));
    if required > cap as u128 {
        return Err(ExpansionError::BudgetExceeded { required, cap });
    }

    let mut out: Vec<Formula> = Vec::new();
    let mut seen: HashSet<Formula> = HashSet::new();
    let mut push = |f: Formula, out: &mut Vec<Formula>| {
        if seen.insert(f.clone()) {
            out.push(f);
        }
    };

    for assumption in s.assumptions() {
        push(assumption.formula.clone(), &mut out);
    }

    // previous[c] holds the depth j-1 prefixes of the c-th CK assumption
    let mut previous: Vec<Vec<Formula>> = s
        .assumptions()
        .iter()
        .filter(|a| a.mode == AssumptionMode::CommonKnowledge)
        .map(|a| vec![a.formula.clone()])
        .collect();
    for _ in 1..=depth {
        for prev in previous.iter_mut() {
            let mut next = Vec::with_capacity(prev.len() * s.agent_count() as usize);
            for i in 1..=s.agent_count() {
                for f in prev.iter() {
                    next.push(Formula::knows(i, f.clone()));
                }
            }
            for f in &next {
                push(f.clone(), &mut out);
            }
            *prev = next;
        }
    }
    Ok(out)
}
