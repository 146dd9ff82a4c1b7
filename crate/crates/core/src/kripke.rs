//! Partition-style Kripke models.
//!
//! Each agent's indistinguishability relation is stored as a partition of the
//! world set, so reflexivity, symmetry and transitivity hold by construction.
//! [`ModelData`] is the serialized form (JSON via serde); [`ModelData::build`]
//! validates it into a [`KripkeStructure`] with index-based internals, and
//! [`PointedModel`] adds a designated world.
//!
//! Formula evaluation, common knowledge by union reachability, and public
//! announcements (restriction to the worlds where the announcement holds)
//! all live here, along with the exactness analysis that compares a model
//! against what a scenario derives.

use std::collections::{BTreeMap, HashMap, VecDeque};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::formula::{
    is_atom_name, Assumption, AssumptionMode, Formula, Scenario, SignatureError,
};
use crate::fragment::FragmentSpec;
use crate::prover::{DerivabilityResult, Prover, ProverError};

/// Serialized model. Field names are the wire format:
///
/// ```json
/// {
///   "agents": 2,
///   "atoms": ["h"],
///   "worlds": ["u", "v"],
///   "valuation": {"u": ["h"], "v": []},
///   "partitions": {"1": [["u"], ["v"]], "2": [["u", "v"]]},
///   "designated": "u"
/// }
/// ```
///
/// `valuation` lists the atoms true at each world, `partitions` maps each
/// agent index (as a string key) to its equivalence blocks, and `designated`
/// is optional.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModelData {
    pub agents: u32,
    pub atoms: Vec<String>,
    pub worlds: Vec<String>,
    pub valuation: BTreeMap<String, Vec<String>>,
    pub partitions: BTreeMap<String, Vec<Vec<String>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub designated: Option<String>,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ModelError {
    #[error("a model needs at least one agent")]
    NoAgents,
    #[error("a model needs at least one world")]
    NoWorlds,
    #[error("`{0}` is not a valid atom name")]
    BadAtomName(String),
    #[error("atom `{0}` declared twice")]
    DuplicateAtom(String),
    #[error("world `{0}` declared twice")]
    DuplicateWorld(String),
    #[error("world names must be nonempty")]
    EmptyWorldName,
    #[error("valuation is missing world `{0}`")]
    ValuationMissingWorld(String),
    #[error("valuation mentions unknown world `{0}`")]
    ValuationUnknownWorld(String),
    #[error("valuation at `{world}` mentions unknown atom `{atom}`")]
    ValuationUnknownAtom { world: String, atom: String },
    #[error("valuation at `{world}` lists atom `{atom}` twice")]
    ValuationDuplicateAtom { world: String, atom: String },
    #[error("partitions are missing agent {0}")]
    PartitionMissingAgent(u32),
    #[error("partitions mention unknown agent key `{0}`")]
    PartitionUnknownAgent(String),
    #[error("partition for agent {agent} mentions unknown world `{world}`")]
    PartitionUnknownWorld { agent: u32, world: String },
    #[error("partition for agent {agent} lists world `{world}` in two blocks")]
    PartitionOverlap { agent: u32, world: String },
    #[error("partition for agent {agent} does not cover world `{world}`")]
    PartitionMissingWorld { agent: u32, world: String },
    #[error("partition for agent {agent} has an empty block")]
    EmptyBlock { agent: u32 },
    #[error("designated world `{0}` is not in the model")]
    UnknownDesignated(String),
    #[error("model has no designated world")]
    MissingDesignated,
    #[error("invalid model JSON: {0}")]
    Json(String),
}

impl ModelData {
    /// Validates and indexes the data. The designated world, if present, is
    /// checked but not carried over; use [`ModelData::build_pointed`] for
    /// that.
    pub fn build(&self) -> Result<KripkeStructure, ModelError> {
        if self.agents == 0 {
            return Err(ModelError::NoAgents);
        }
        if self.worlds.is_empty() {
            return Err(ModelError::NoWorlds);
        }
        let mut atom_index = HashMap::new();
        for (i, atom) in self.atoms.iter().enumerate() {
            if !is_atom_name(atom) {
                return Err(ModelError::BadAtomName(atom.clone()));
            }
            if atom_index.insert(atom.clone(), i).is_some() {
                return Err(ModelError::DuplicateAtom(atom.clone()));
            }
        }
        let mut world_index = HashMap::new();
        for (i, world) in self.worlds.iter().enumerate() {
            if world.is_empty() {
                return Err(ModelError::EmptyWorldName);
            }
            if world_index.insert(world.clone(), i).is_some() {
                return Err(ModelError::DuplicateWorld(world.clone()));
            }
        }

        let mut valuation = vec![vec![false; self.atoms.len()]; self.worlds.len()];
        for world in self.valuation.keys() {
            if !world_index.contains_key(world) {
                return Err(ModelError::ValuationUnknownWorld(world.clone()));
            }
        }
        for (world, &w) in &world_index {
            let Some(true_atoms) = self.valuation.get(world) else {
                return Err(ModelError::ValuationMissingWorld(world.clone()));
            };
            for atom in true_atoms {
                let Some(&a) = atom_index.get(atom) else {
                    return Err(ModelError::ValuationUnknownAtom {
                        world: world.clone(),
                        atom: atom.clone(),
                    });
                };
                if valuation[w][a] {
                    return Err(ModelError::ValuationDuplicateAtom {
                        world: world.clone(),
                        atom: atom.clone(),
                    });
                }
                valuation[w][a] = true;
            }
        }

        for key in self.partitions.keys() {
            match key.parse::<u32>() {
                Ok(i) if i >= 1 && i <= self.agents => {}
                _ => return Err(ModelError::PartitionUnknownAgent(key.clone())),
            }
        }
        let mut block_of = Vec::with_capacity(self.agents as usize);
        let mut blocks = Vec::with_capacity(self.agents as usize);
        for agent in 1..=self.agents {
            let Some(agent_blocks) = self.partitions.get(&agent.to_string()) else {
                return Err(ModelError::PartitionMissingAgent(agent));
            };
            let mut assignment = vec![usize::MAX; self.worlds.len()];
            let mut indexed_blocks = Vec::with_capacity(agent_blocks.len());
            for block in agent_blocks {
                if block.is_empty() {
                    return Err(ModelError::EmptyBlock { agent });
                }
                let mut indices = Vec::with_capacity(block.len());
                for world in block {
                    let Some(&w) = world_index.get(world) else {
                        return Err(ModelError::PartitionUnknownWorld {
                            agent,
                            world: world.clone(),
                        });
                    };
                    if assignment[w] != usize::MAX {
                        return Err(ModelError::PartitionOverlap {
                            agent,
                            world: world.clone(),
                        });
                    }
                    assignment[w] = indexed_blocks.len();
                    indices.push(w);
                }
                indices.sort_unstable();
                indexed_blocks.push(indices);
            }
            for (w, &b) in assignment.iter().enumerate() {
                if b == usize::MAX {
                    return Err(ModelError::PartitionMissingWorld {
                        agent,
                        world: self.worlds[w].clone(),
                    });
                }
            }
            block_of.push(assignment);
            blocks.push(indexed_blocks);
        }

        if let Some(designated) = &self.designated {
            if !world_index.contains_key(designated) {
                return Err(ModelError::UnknownDesignated(designated.clone()));
            }
        }

        Ok(KripkeStructure {
            agents: self.agents,
            atoms: self.atoms.clone(),
            worlds: self.worlds.clone(),
            valuation,
            block_of,
            blocks,
            atom_index,
            world_index,
        })
    }

    /// Like [`ModelData::build`], but requires `designated` and returns the
    /// pointed model.
    pub fn build_pointed(&self) -> Result<PointedModel, ModelError> {
        let model = self.build()?;
        let Some(designated) = &self.designated else {
            return Err(ModelError::MissingDesignated);
        };
        let world = model.world_index[designated];
        Ok(PointedModel { model, world })
    }

    pub fn from_json(text: &str) -> Result<Self, ModelError> {
        serde_json::from_str(text).map_err(|e| ModelError::Json(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("model serialization cannot fail")
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CheckError {
    #[error("unknown world `{0}`")]
    UnknownWorld(String),
    #[error(transparent)]
    Signature(#[from] SignatureError),
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum AnnouncementError {
    #[error("announcement holds at no world, the restriction would be empty")]
    EmptyRestriction,
    #[error("announcement is false at the designated world")]
    FalseAnnouncement,
    #[error(transparent)]
    Signature(#[from] SignatureError),
}

/// Validated model with index-based internals. Build one through
/// [`ModelData::build`].
#[derive(Debug, Clone)]
pub struct KripkeStructure {
    agents: u32,
    atoms: Vec<String>,
    worlds: Vec<String>,
    valuation: Vec<Vec<bool>>,
    block_of: Vec<Vec<usize>>,
    blocks: Vec<Vec<Vec<usize>>>,
    atom_index: HashMap<String, usize>,
    world_index: HashMap<String, usize>,
}

impl KripkeStructure {
    pub fn agent_count(&self) -> u32 {
        self.agents
    }

    pub fn atoms(&self) -> &[String] {
        &self.atoms
    }

    pub fn worlds(&self) -> &[String] {
        &self.worlds
    }

    pub fn world_count(&self) -> usize {
        self.worlds.len()
    }

    pub fn index_of(&self, world: &str) -> Option<usize> {
        self.world_index.get(world).copied()
    }

    /// The equivalence blocks of one agent, as world names.
    pub fn blocks_of(&self, agent: u32) -> Vec<Vec<&str>> {
        assert!(agent >= 1 && agent <= self.agents, "agent out of range");
        self.blocks[(agent - 1) as usize]
            .iter()
            .map(|block| block.iter().map(|&w| self.worlds[w].as_str()).collect())
            .collect()
    }

    fn eval(&self, w: usize, f: &Formula) -> bool {
        match f {
            Formula::Atom(name) => self.valuation[w][self.atom_index[name]],
            Formula::Top => true,
            Formula::Bottom => false,
            Formula::Not(g) => !self.eval(w, g),
            Formula::And(a, b) => self.eval(w, a) && self.eval(w, b),
            Formula::Or(a, b) => self.eval(w, a) || self.eval(w, b),
            Formula::Implies(a, b) => !self.eval(w, a) || self.eval(w, b),
            Formula::Iff(a, b) => self.eval(w, a) == self.eval(w, b),
            Formula::Knows(i, g) => {
                let agent = (i.index() - 1) as usize;
                self.blocks[agent][self.block_of[agent][w]]
                    .iter()
                    .all(|&v| self.eval(v, g))
            }
        }
    }

    fn check_signature(&self, f: &Formula) -> Result<(), SignatureError> {
        f.validate(self.agents, &self.atoms)
    }

    /// Truth of `f` at the named world.
    pub fn check(&self, world: &str, f: &Formula) -> Result<bool, CheckError> {
        let w = self
            .index_of(world)
            .ok_or_else(|| CheckError::UnknownWorld(world.to_string()))?;
        self.check_signature(f)?;
        Ok(self.eval(w, f))
    }

    /// Worlds reachable from `w` along the union of all agents' relations.
    fn reachable(&self, w: usize) -> Vec<bool> {
        let mut seen = vec![false; self.worlds.len()];
        let mut queue = VecDeque::new();
        seen[w] = true;
        queue.push_back(w);
        while let Some(u) = queue.pop_front() {
            for agent in 0..self.agents as usize {
                for &v in &self.blocks[agent][self.block_of[agent][u]] {
                    if !seen[v] {
                        seen[v] = true;
                        queue.push_back(v);
                    }
                }
            }
        }
        seen
    }

    /// Common knowledge of `f` among all agents at the named world: `f` must
    /// hold at every world reachable through any chain of agent relations.
    pub fn check_common_knowledge(&self, world: &str, f: &Formula) -> Result<bool, CheckError> {
        let w = self
            .index_of(world)
            .ok_or_else(|| CheckError::UnknownWorld(world.to_string()))?;
        self.check_signature(f)?;
        let seen = self.reachable(w);
        Ok((0..self.worlds.len()).all(|v| !seen[v] || self.eval(v, f)))
    }

    /// Public announcement of `f`: the submodel on the worlds where `f`
    /// holds, with every partition restricted accordingly.
    pub fn restrict(&self, f: &Formula) -> Result<KripkeStructure, AnnouncementError> {
        self.check_signature(f)?;
        let survivors: Vec<usize> = (0..self.worlds.len())
            .filter(|&w| self.eval(w, f))
            .collect();
        if survivors.is_empty() {
            return Err(AnnouncementError::EmptyRestriction);
        }
        let mut new_index = vec![usize::MAX; self.worlds.len()];
        for (new_w, &old_w) in survivors.iter().enumerate() {
            new_index[old_w] = new_w;
        }
        let worlds: Vec<String> = survivors.iter().map(|&w| self.worlds[w].clone()).collect();
        let valuation: Vec<Vec<bool>> = survivors
            .iter()
            .map(|&w| self.valuation[w].clone())
            .collect();
        let mut block_of = Vec::with_capacity(self.agents as usize);
        let mut blocks = Vec::with_capacity(self.agents as usize);
        for agent in 0..self.agents as usize {
            let mut assignment = vec![usize::MAX; worlds.len()];
            let mut agent_blocks = Vec::new();
            for block in &self.blocks[agent] {
                let kept: Vec<usize> = block
                    .iter()
                    .filter_map(|&w| {
                        let n = new_index[w];
                        (n != usize::MAX).then_some(n)
                    })
                    .collect();
                if kept.is_empty() {
                    continue;
                }
                for &w in &kept {
                    assignment[w] = agent_blocks.len();
                }
                agent_blocks.push(kept);
            }
            block_of.push(assignment);
            blocks.push(agent_blocks);
        }
        let world_index = worlds
            .iter()
            .enumerate()
            .map(|(i, w)| (w.clone(), i))
            .collect();
        Ok(KripkeStructure {
            agents: self.agents,
            atoms: self.atoms.clone(),
            worlds,
            valuation,
            block_of,
            blocks,
            atom_index: self.atom_index.clone(),
            world_index,
        })
    }

    fn data_with_designated(&self, designated: Option<String>) -> ModelData {
        let valuation = self
            .worlds
            .iter()
            .enumerate()
            .map(|(w, name)| {
                let true_atoms = self
                    .atoms
                    .iter()
                    .enumerate()
                    .filter(|&(a, _)| self.valuation[w][a])
                    .map(|(_, atom)| atom.clone())
                    .collect();
                (name.clone(), true_atoms)
            })
            .collect();
        let partitions = (0..self.agents as usize)
            .map(|agent| {
                let blocks = self.blocks[agent]
                    .iter()
                    .map(|block| block.iter().map(|&w| self.worlds[w].clone()).collect())
                    .collect();
                ((agent as u32 + 1).to_string(), blocks)
            })
            .collect();
        ModelData {
            agents: self.agents,
            atoms: self.atoms.clone(),
            worlds: self.worlds.clone(),
            valuation,
            partitions,
            designated,
        }
    }

    pub fn to_data(&self) -> ModelData {
        self.data_with_designated(None)
    }

    fn dot_with_designated(&self, designated: Option<usize>) -> String {
        fn quote(s: &str) -> String {
            s.replace('\\', "\\\\").replace('"', "\\\"")
        }
        let mut out = String::from("graph model {\n  rankdir=LR;\n  node [shape=circle];\n");
        for (w, name) in self.worlds.iter().enumerate() {
            let true_atoms: Vec<&str> = self
                .atoms
                .iter()
                .enumerate()
                .filter(|&(a, _)| self.valuation[w][a])
                .map(|(_, atom)| atom.as_str())
                .collect();
            let label = if true_atoms.is_empty() {
                name.clone()
            } else {
                format!("{name}\\n{}", true_atoms.join(" "))
            };
            let shape = if designated == Some(w) {
                ", shape=doublecircle"
            } else {
                ""
            };
            out.push_str(&format!(
                "  \"{}\" [label=\"{}\"{}];\n",
                quote(name),
                quote(&label).replace("\\\\n", "\\n"),
                shape
            ));
        }
        let mut edges: BTreeMap<(usize, usize), Vec<u32>> = BTreeMap::new();
        for agent in 0..self.agents as usize {
            for block in &self.blocks[agent] {
                for (i, &u) in block.iter().enumerate() {
                    for &v in &block[i + 1..] {
                        edges.entry((u, v)).or_default().push(agent as u32 + 1);
                    }
                }
            }
        }
        for ((u, v), agents) in edges {
            let label: Vec<String> = agents.iter().map(|a| a.to_string()).collect();
            out.push_str(&format!(
                "  \"{}\" -- \"{}\" [label=\"{}\"];\n",
                quote(&self.worlds[u]),
                quote(&self.worlds[v]),
                label.join(",")
            ));
        }
        out.push_str("}\n");
        out
    }

    /// Graphviz rendering: undirected edges labeled by agent, reflexive
    /// loops left implicit.
    pub fn to_dot(&self) -> String {
        self.dot_with_designated(None)
    }
}

/// Outcome of checking one scenario assumption against a pointed model.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AssumptionCheck {
    pub formula: Formula,
    pub mode: AssumptionMode,
    pub holds: bool,
}

/// A [`KripkeStructure`] with a designated world.
#[derive(Debug, Clone)]
pub struct PointedModel {
    model: KripkeStructure,
    world: usize,
}

impl PointedModel {
    pub fn new(model: KripkeStructure, world: &str) -> Result<Self, CheckError> {
        let w = model
            .index_of(world)
            .ok_or_else(|| CheckError::UnknownWorld(world.to_string()))?;
        Ok(PointedModel { model, world: w })
    }

    pub fn model(&self) -> &KripkeStructure {
        &self.model
    }

    pub fn world(&self) -> &str {
        &self.model.worlds[self.world]
    }

    pub fn check(&self, f: &Formula) -> Result<bool, SignatureError> {
        self.model.check_signature(f)?;
        Ok(self.model.eval(self.world, f))
    }

    pub fn check_common_knowledge(&self, f: &Formula) -> Result<bool, SignatureError> {
        self.model.check_signature(f)?;
        let seen = self.model.reachable(self.world);
        Ok((0..self.model.worlds.len()).all(|v| !seen[v] || self.model.eval(v, f)))
    }

    /// Truthful public announcement: `f` must hold at the designated world,
    /// which therefore survives the restriction.
    pub fn announce(&self, f: &Formula) -> Result<PointedModel, AnnouncementError> {
        self.model.check_signature(f)?;
        if !self.model.eval(self.world, f) {
            return Err(AnnouncementError::FalseAnnouncement);
        }
        let name = self.world().to_string();
        let restricted = self.model.restrict(f)?;
        let world = restricted.world_index[&name];
        Ok(PointedModel {
            model: restricted,
            world,
        })
    }

    /// Checks every scenario assumption here: plain assumptions must hold at
    /// the designated world, common-knowledge assumptions must be common
    /// knowledge at it.
    pub fn check_scenario(&self, s: &Scenario) -> Result<Vec<AssumptionCheck>, AnalysisError> {
        if s.agent_count() != self.model.agents {
            return Err(AnalysisError::AgentMismatch {
                model: self.model.agents,
                scenario: s.agent_count(),
            });
        }
        s.assumptions()
            .iter()
            .map(|Assumption { formula, mode }| {
                let holds = match mode {
                    AssumptionMode::Plain => self.check(formula)?,
                    AssumptionMode::CommonKnowledge => self.check_common_knowledge(formula)?,
                };
                Ok(AssumptionCheck {
                    formula: formula.clone(),
                    mode: *mode,
                    holds,
                })
            })
            .collect()
    }

    /// All assumptions hold, see [`PointedModel::check_scenario`].
    pub fn is_model_of(&self, s: &Scenario) -> Result<bool, AnalysisError> {
        Ok(self.check_scenario(s)?.iter().all(|c| c.holds))
    }

    pub fn to_data(&self) -> ModelData {
        self.model
            .data_with_designated(Some(self.world().to_string()))
    }

    /// Graphviz rendering with the designated world drawn as a double
    /// circle.
    pub fn to_dot(&self) -> String {
        self.model.dot_with_designated(Some(self.world))
    }
}

#[derive(Debug, Error)]
pub enum AnalysisError {
    #[error("model has {model} agents but the scenario has {scenario}")]
    AgentMismatch { model: u32, scenario: u32 },
    #[error(transparent)]
    Signature(#[from] SignatureError),
    #[error(transparent)]
    Prover(#[from] ProverError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MismatchKind {
    /// Holds at the designated world but the scenario does not derive it.
    TrueButUnderivable,
    /// Derived by the scenario but false at the designated world.
    DerivableButFalse,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mismatch {
    pub formula: Formula,
    pub kind: MismatchKind,
}

/// Result of comparing scenario derivability against truth in one model over
/// a formula fragment.
#[derive(Debug, Clone)]
pub struct ExactReport {
    pub checked: usize,
    pub truncated: bool,
    pub ck_depth: u32,
    pub mismatches: Vec<Mismatch>,
}

impl ExactReport {
    /// No mismatches: over the sampled fragment the model makes true exactly
    /// what the scenario derives.
    pub fn is_exact(&self) -> bool {
        self.mismatches.is_empty()
    }
}

/// Compares, formula by formula over `fragment`, derivability from the
/// scenario (with common-knowledge assumptions expanded to `ck_depth`)
/// against truth at the model's designated world.
pub fn exact_check(
    prover: &Prover,
    scenario: &Scenario,
    model: &PointedModel,
    fragment: &FragmentSpec,
    ck_depth: u32,
) -> Result<ExactReport, AnalysisError> {
    if scenario.agent_count() != model.model().agent_count() {
        return Err(AnalysisError::AgentMismatch {
            model: model.model().agent_count(),
            scenario: scenario.agent_count(),
        });
    }
    let enumerated = fragment.enumerate();
    let mismatches: Vec<Option<Mismatch>> = enumerated
        .formulas
        .par_iter()
        .map(|f| {
            let derivable = match prover.derives_scenario(scenario, f, ck_depth)? {
                DerivabilityResult::Derivable { .. } => true,
                DerivabilityResult::NotDerivable { .. } => false,
            };
            let true_here = model.check(f).map_err(AnalysisError::from)?;
            Ok(match (true_here, derivable) {
                (true, false) => Some(Mismatch {
                    formula: f.clone(),
                    kind: MismatchKind::TrueButUnderivable,
                }),
                (false, true) => Some(Mismatch {
                    formula: f.clone(),
                    kind: MismatchKind::DerivableButFalse,
                }),
                _ => None,
            })
        })
        .collect::<Result<_, AnalysisError>>()?;
    Ok(ExactReport {
        checked: enumerated.formulas.len(),
        truncated: enumerated.truncated,
        ck_depth,
        mismatches: mismatches.into_iter().flatten().collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::parse_formula;

    fn two_sided_coin() -> ModelData {
        ModelData::from_json(
            r#"{
                "agents": 2,
                "atoms": ["h"],
                "worlds": ["u", "v"],
                "valuation": {"u": ["h"], "v": []},
                "partitions": {"1": [["u"], ["v"]], "2": [["u", "v"]]},
                "designated": "u"
            }"#,
        )
        .unwrap()
    }

    fn f(text: &str) -> Formula {
        parse_formula(text, 2).unwrap()
    }

    #[test]
    fn coin_checks() {
        let m = two_sided_coin().build_pointed().unwrap();
        assert!(m.check(&f("h")).unwrap());
        assert!(m.check(&f("K1 h")).unwrap());
        assert!(!m.check(&f("K2 h")).unwrap());
        assert!(m.check(&f("~K2 h & ~K2 ~h")).unwrap());
        assert!(m.check(&f("K2 (K1 h | K1 ~h)")).unwrap());
        assert!(m.check_common_knowledge(&f("K1 h | K1 ~h")).unwrap());
        assert!(!m.check_common_knowledge(&f("h")).unwrap());
    }

    #[test]
    fn everybody_differs_from_common_knowledge() {
        // p holds at a and b; agent 1 cannot tell a from b, agent 2 cannot
        // tell b from c, so E p holds at a while no chain-closed version does
        let data = ModelData::from_json(
            r#"{
                "agents": 2,
                "atoms": ["p"],
                "worlds": ["a", "b", "c"],
                "valuation": {"a": ["p"], "b": ["p"], "c": []},
                "partitions": {"1": [["a", "b"], ["c"]], "2": [["a"], ["b", "c"]]},
                "designated": "a"
            }"#,
        )
        .unwrap();
        let m = data.build_pointed().unwrap();
        assert!(m.check(&f("K1 p & K2 p")).unwrap());
        assert!(!m.check(&f("K1 K2 p")).unwrap());
        assert!(!m.check_common_knowledge(&f("p")).unwrap());
    }

    #[test]
    fn validator_rejects_partition_overlap() {
        let mut data = two_sided_coin();
        data.partitions
            .insert("1".into(), vec![vec!["u".into(), "v".into()], vec!["v".into()]]);
        assert_eq!(
            data.build().unwrap_err(),
            ModelError::PartitionOverlap {
                agent: 1,
                world: "v".into()
            }
        );
    }

    #[test]
    fn validator_rejects_partition_gap() {
        let mut data = two_sided_coin();
        data.partitions.insert("1".into(), vec![vec!["u".into()]]);
        assert_eq!(
            data.build().unwrap_err(),
            ModelError::PartitionMissingWorld {
                agent: 1,
                world: "v".into()
            }
        );
    }

    #[test]
    fn validator_rejects_missing_valuation() {
        let mut data = two_sided_coin();
        data.valuation.remove("v");
        assert_eq!(
            data.build().unwrap_err(),
            ModelError::ValuationMissingWorld("v".into())
        );
    }

    #[test]
    fn validator_rejects_unknown_designated() {
        let mut data = two_sided_coin();
        data.designated = Some("w".into());
        assert_eq!(
            data.build().unwrap_err(),
            ModelError::UnknownDesignated("w".into())
        );
    }

    #[test]
    fn validator_rejects_unknown_agent_key() {
        let mut data = two_sided_coin();
        data.partitions.insert("3".into(), vec![vec!["u".into(), "v".into()]]);
        assert_eq!(
            data.build().unwrap_err(),
            ModelError::PartitionUnknownAgent("3".into())
        );
    }

    #[test]
    fn signature_errors_surface() {
        let m = two_sided_coin().build_pointed().unwrap();
        assert!(m.check(&Formula::atom("x")).is_err());
        assert!(m.check(&Formula::knows(3, Formula::atom("h"))).is_err());
    }

    #[test]
    fn announcement_restricts_and_preserves_point() {
        let m = two_sided_coin().build_pointed().unwrap();
        let after = m.announce(&f("h")).unwrap();
        assert_eq!(after.model().world_count(), 1);
        assert_eq!(after.world(), "u");
        assert!(after.check(&f("K2 h")).unwrap());
        assert!(matches!(
            m.announce(&f("~h")),
            Err(AnnouncementError::FalseAnnouncement)
        ));
        assert!(matches!(
            m.model().restrict(&f("h & ~h")),
            Err(AnnouncementError::EmptyRestriction)
        ));
    }

    #[test]
    fn json_round_trip_is_canonical() {
        let data = two_sided_coin();
        let rebuilt = data.build_pointed().unwrap().to_data();
        assert_eq!(rebuilt, data);
        let value: serde_json::Value = serde_json::from_str(&rebuilt.to_json()).unwrap();
        let obj = value.as_object().unwrap();
        for key in ["agents", "atoms", "worlds", "valuation", "partitions", "designated"] {
            assert!(obj.contains_key(key), "missing key {key}");
        }
    }

    #[test]
    fn dot_marks_designated_and_labels_edges() {
        let m = two_sided_coin().build_pointed().unwrap();
        let dot = m.to_dot();
        assert!(dot.contains("doublecircle"));
        assert!(dot.contains("\"u\" -- \"v\" [label=\"2\"];"));
        assert!(!dot.contains("label=\"1\"];"));
    }

    #[test]
    fn scenario_fit() {
        let m = two_sided_coin().build_pointed().unwrap();
        let s = crate::parser::parse_scenario(
            "agents: 2\natoms: h\nassume: h\nassume-ck: K1 h | K1 ~h\n",
        )
        .unwrap();
        assert!(m.is_model_of(&s).unwrap());
        let bad = crate::parser::parse_scenario("agents: 2\natoms: h\nassume-ck: h\n").unwrap();
        let checks = m.check_scenario(&bad).unwrap();
        assert!(!checks[0].holds);
    }
}
