//! Class-based tableau search.
//!
//! Worlds live in one equivalence class per agent, so the S5 frame
//! conditions hold by construction rather than through edge bookkeeping.
//! Boxes and diamonds attach to classes: a box body propagates to every
//! present and future member, a diamond gets at most one witness per class
//! and body. Disjunctions are deferred; when nothing deterministic is left
//! the first unresolved one is branched on, after dropping disjuncts whose
//! negation is already present and taking the unit shortcut when a single
//! live disjunct remains.
//!
//! Every witness world only receives bodies of formulas held by its parent
//! class, so formulas lose modal depth along the world-creation tree and the
//! search terminates without loop checks; the limits below cap the
//! exponential worst case rather than guard against divergence.

use std::collections::{HashSet, VecDeque};

use crate::kripke::ModelData;

use super::nnf::{NnfId, NnfNode, NnfStore, BOTTOM};

#[derive(Debug, Clone, Copy)]
pub(crate) struct SearchLimits {
    pub max_worlds: usize,
    pub max_steps: usize,
}

#[derive(Debug, Clone, Copy)]
pub(crate) struct LimitExceeded {
    pub worlds_created: usize,
    pub steps: usize,
}

#[derive(Debug)]
pub(crate) enum TableauOutcome {
    Satisfiable(ModelData),
    Unsatisfiable,
}

#[derive(Clone)]
struct Class {
    members: Vec<usize>,
    boxes: Vec<NnfId>,
    witnessed: HashSet<NnfId>,
}

impl Class {
    fn singleton(world: usize) -> Self {
        Class {
            members: vec![world],
            boxes: Vec::new(),
            witnessed: HashSet::new(),
        }
    }
}

#[derive(Clone)]
struct Branch {
    labels: Vec<HashSet<NnfId>>,
    class_of: Vec<Vec<usize>>,
    classes: Vec<Vec<Class>>,
    queue: VecDeque<(usize, NnfId)>,
    ors: Vec<(usize, NnfId)>,
    or_cursor: usize,
}

impl Branch {
    fn initial(agent_count: u32) -> Self {
        let n = agent_count as usize;
        Branch {
            labels: vec![HashSet::new()],
            class_of: vec![vec![0]; n],
            classes: (0..n).map(|_| vec![Class::singleton(0)]).collect(),
            queue: VecDeque::new(),
            ors: Vec::new(),
            or_cursor: 0,
        }
    }
}

enum RunOutcome {
    Closed,
    Saturated(Branch),
    Split(Vec<Branch>),
}

struct Searcher<'a> {
    store: &'a NnfStore,
    agent_count: u32,
    limits: SearchLimits,
    worlds_created: usize,
    steps: usize,
}

impl<'a> Searcher<'a> {
    fn exceeded(&self) -> LimitExceeded {
        LimitExceeded {
            worlds_created: self.worlds_created,
            steps: self.steps,
        }
    }

    /// Labels `w` with `x`. `Ok(false)` means the branch closed: `x` is
    /// `False` or the complement of a present label.
    fn add(&mut self, b: &mut Branch, w: usize, x: NnfId) -> Result<bool, LimitExceeded> {
        if b.labels[w].contains(&x) {
            return Ok(true);
        }
        self.steps += 1;
        if self.steps > self.limits.max_steps {
            return Err(self.exceeded());
        }
        if x == BOTTOM || b.labels[w].contains(&self.store.neg(x)) {
            return Ok(false);
        }
        b.labels[w].insert(x);
        b.queue.push_back((w, x));
        Ok(true)
    }

    fn new_world(
        &mut self,
        b: &mut Branch,
        agent: usize,
        class: usize,
    ) -> Result<usize, LimitExceeded> {
        self.worlds_created += 1;
        if self.worlds_created > self.limits.max_worlds {
            return Err(self.exceeded());
        }
        let w = b.labels.len();
        b.labels.push(HashSet::new());
        for a in 0..self.agent_count as usize {
            if a == agent {
                b.class_of[a].push(class);
                b.classes[a][class].members.push(w);
            } else {
                b.class_of[a].push(b.classes[a].len());
                b.classes[a].push(Class::singleton(w));
            }
        }
        Ok(w)
    }

    fn process(&mut self, b: &mut Branch, w: usize, x: NnfId) -> Result<bool, LimitExceeded> {
        match self.store.node(x).clone() {
            NnfNode::And(children) => {
                for c in children {
                    if !self.add(b, w, c)? {
                        return Ok(false);
                    }
                }
                Ok(true)
            }
            NnfNode::Or(_) => {
                b.ors.push((w, x));
                Ok(true)
            }
            NnfNode::Box_ { agent, body } => {
                let a = agent as usize;
                let class = b.class_of[a][w];
                if !b.classes[a][class].boxes.contains(&body) {
                    b.classes[a][class].boxes.push(body);
                    let members = b.classes[a][class].members.clone();
                    for m in members {
                        if !self.add(b, m, body)? {
                            return Ok(false);
                        }
                    }
                }
                Ok(true)
            }
            NnfNode::Dia { agent, body } => {
                let a = agent as usize;
                let class = b.class_of[a][w];
                if b.classes[a][class].witnessed.contains(&body) {
                    return Ok(true);
                }
                b.classes[a][class].witnessed.insert(body);
                let reused = b.classes[a][class]
                    .members
                    .iter()
                    .any(|&m| b.labels[m].contains(&body));
                if reused {
                    return Ok(true);
                }
                let u = self.new_world(b, a, class)?;
                if !self.add(b, u, body)? {
                    return Ok(false);
                }
                let boxes = b.classes[a][class].boxes.clone();
                for phi in boxes {
                    if !self.add(b, u, phi)? {
                        return Ok(false);
                    }
                }
                Ok(true)
            }
            NnfNode::Top | NnfNode::Bottom | NnfNode::Lit { .. } => Ok(true),
        }
    }

    fn run(&mut self, mut b: Branch) -> Result<RunOutcome, LimitExceeded> {
        loop {
            while let Some((w, x)) = b.queue.pop_front() {
                if !self.process(&mut b, w, x)? {
                    return Ok(RunOutcome::Closed);
                }
            }
            let mut progressed = false;
            while b.or_cursor < b.ors.len() {
                let (w, x) = b.ors[b.or_cursor];
                let NnfNode::Or(children) = self.store.node(x).clone() else {
                    unreachable!("only disjunctions are deferred");
                };
                if children.iter().any(|c| b.labels[w].contains(c)) {
                    b.or_cursor += 1;
                    continue;
                }
                let live: Vec<NnfId> = children
                    .into_iter()
                    .filter(|&c| !b.labels[w].contains(&self.store.neg(c)))
                    .collect();
                b.or_cursor += 1;
                match live.len() {
                    0 => return Ok(RunOutcome::Closed),
                    1 => {
                        if !self.add(&mut b, w, live[0])? {
                            return Ok(RunOutcome::Closed);
                        }
                        progressed = true;
                        break;
                    }
                    _ => {
                        let mut branches = Vec::with_capacity(live.len());
                        for d in live {
                            let mut child = b.clone();
                            if self.add(&mut child, w, d)? {
                                branches.push(child);
                            }
                        }
                        return Ok(RunOutcome::Split(branches));
                    }
                }
            }
            if !progressed {
                return Ok(RunOutcome::Saturated(b));
            }
        }
    }

    fn extract(&self, b: &Branch) -> ModelData {
        let world_names: Vec<String> = (0..b.labels.len()).map(|i| format!("w{i}")).collect();
        let valuation = world_names
            .iter()
            .enumerate()
            .map(|(w, name)| {
                let mut atom_ids: Vec<u32> = b.labels[w]
                    .iter()
                    .filter_map(|&id| match self.store.node(id) {
                        NnfNode::Lit {
                            atom,
                            positive: true,
                        } => Some(*atom),
                        _ => None,
                    })
                    .collect();
                atom_ids.sort_unstable();
                let atoms = atom_ids
                    .into_iter()
                    .map(|a| self.store.atoms()[a as usize].clone())
                    .collect();
                (name.clone(), atoms)
            })
            .collect();
        let partitions = (0..self.agent_count as usize)
            .map(|a| {
                let blocks = b.classes[a]
                    .iter()
                    .map(|class| {
                        class
                            .members
                            .iter()
                            .map(|&m| world_names[m].clone())
                            .collect()
                    })
                    .collect();
                ((a as u32 + 1).to_string(), blocks)
            })
            .collect();
        ModelData {
            agents: self.agent_count,
            atoms: self.store.atoms().to_vec(),
            worlds: world_names,
            valuation,
            partitions,
            designated: Some("w0".to_string()),
        }
    }
}

/// Searches for a model of the conjunction of `roots` at a single
/// designated world. Branches are explored depth first in disjunct order,
/// so the outcome and the extracted model are deterministic.
pub(crate) fn solve(
    store: &NnfStore,
    agent_count: u32,
    roots: &[NnfId],
    limits: SearchLimits,
) -> Result<TableauOutcome, LimitExceeded> {
    debug_assert!(agent_count >= 1);
    let mut searcher = Searcher {
        store,
        agent_count,
        limits,
        worlds_created: 1,
        steps: 0,
    };
    let mut initial = Branch::initial(agent_count);
    for &r in roots {
        if !searcher.add(&mut initial, 0, r)? {
            return Ok(TableauOutcome::Unsatisfiable);
        }
    }
    let mut stack = vec![initial];
    while let Some(branch) = stack.pop() {
        match searcher.run(branch)? {
            RunOutcome::Closed => {}
            RunOutcome::Saturated(b) => {
                return Ok(TableauOutcome::Satisfiable(searcher.extract(&b)))
            }
            RunOutcome::Split(children) => stack.extend(children.into_iter().rev()),
        }
    }
    Ok(TableauOutcome::Unsatisfiable)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::parse_formula;

    fn solve_texts(texts: &[&str]) -> Result<TableauOutcome, LimitExceeded> {
        solve_texts_limited(
            texts,
            SearchLimits {
                max_worlds: 10_000,
                max_steps: 100_000,
            },
        )
    }

    fn solve_texts_limited(
        texts: &[&str],
        limits: SearchLimits,
    ) -> Result<TableauOutcome, LimitExceeded> {
        let mut atoms: Vec<String> = texts
            .iter()
            .flat_map(|t| {
                parse_formula(t, 3)
                    .unwrap()
                    .atoms()
                    .into_iter()
                    .map(String::from)
                    .collect::<Vec<_>>()
            })
            .collect();
        atoms.sort();
        atoms.dedup();
        let mut store = NnfStore::new(&atoms);
        let roots: Vec<NnfId> = texts
            .iter()
            .map(|t| {
                let f = parse_formula(t, 3).unwrap();
                store.convert(&f, true)
            })
            .collect();
        solve(&store, 3, &roots, limits)
    }

    fn is_sat(texts: &[&str]) -> bool {
        matches!(solve_texts(texts).unwrap(), TableauOutcome::Satisfiable(_))
    }

    #[test]
    fn literal_queries() {
        assert!(is_sat(&["p"]));
        assert!(is_sat(&["p", "~q"]));
        assert!(!is_sat(&["p", "~p"]));
    }

    #[test]
    fn reflection_closes() {
        assert!(!is_sat(&["K1 p", "~p"]));
        assert!(is_sat(&["p", "~K1 p"]));
    }

    #[test]
    fn introspection_closes() {
        // positive: K1 p & ~K1 K1 p has no S5 model
        assert!(!is_sat(&["K1 p", "~K1 K1 p"]));
        // negative: ~K1 p & ~K1 ~K1 p has none either
        assert!(!is_sat(&["~K1 p", "~K1 ~K1 p"]));
    }

    #[test]
    fn agents_do_not_interfere() {
        assert!(is_sat(&["K1 p", "~K2 p"]));
        assert!(is_sat(&["K1 p", "~K2 K1 p"]));
        assert!(!is_sat(&["K2 K1 p", "~K1 p"]));
    }

    #[test]
    fn disjunction_branches() {
        assert!(is_sat(&["p | q", "~p"]));
        assert!(!is_sat(&["p | q", "~p", "~q"]));
        assert!(!is_sat(&["K1 (p | q)", "K1 ~p", "K1 ~q"]));
    }

    #[test]
    fn extracted_model_satisfies_query() {
        let texts = ["K1 (p | q)", "~K1 p", "~K1 q", "K2 ~q"];
        let TableauOutcome::Satisfiable(data) = solve_texts(&texts).unwrap() else {
            panic!("expected a model");
        };
        let model = data.build_pointed().unwrap();
        for t in texts {
            let f = parse_formula(t, 3).unwrap();
            assert!(model.check(&f).unwrap(), "query conjunct {t} false in model");
        }
    }

    #[test]
    fn limits_are_reported() {
        let err = solve_texts_limited(
            &["~K1 p", "~K1 q", "~K2 p", "~K2 q"],
            SearchLimits {
                max_worlds: 2,
                max_steps: 100_000,
            },
        )
        .unwrap_err();
        assert!(err.worlds_created > 2 || err.steps > 0);
    }
}
