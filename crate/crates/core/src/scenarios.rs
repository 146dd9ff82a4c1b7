//! Generators for the bundled worked examples: muddy children in several
//! framings, the peeked-at coin, a three-leg backward-induction game, and a
//! trio of scenarios that tell a bare fact, mutual knowledge and common
//! knowledge apart.
//!
//! Muddy-children atoms are `m1..mn`, world names are bit strings in binary
//! counting order with `m1` as the leading bit.

use thiserror::Error;

use crate::formula::{Assumption, Formula, Scenario};
use crate::kripke::{KripkeStructure, ModelData, PointedModel};

/// Caps the agent count of generated families; the cube model has `2^n`
/// worlds and the sight postulates grow quadratically.
#[derive(Debug, Clone, Copy)]
pub struct ScenarioLimits {
    pub max_agents: u32,
}

impl Default for ScenarioLimits {
    fn default() -> Self {
        ScenarioLimits { max_agents: 4 }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GeneratorError {
    #[error("need at least {min} agents, got {got}")]
    TooFewAgents { min: u32, got: u32 },
    #[error("{got} agents exceeds the generator limit of {max}")]
    TooManyAgents { max: u32, got: u32 },
    #[error("muddy count {count} is out of range for {agents} children")]
    BadCount { agents: u32, count: u32 },
    #[error("world vector has {got} coordinates, expected {expected}")]
    WrongLength { expected: u32, got: u32 },
}

fn check_agents(n: u32, min: u32) -> Result<(), GeneratorError> {
    let limits = ScenarioLimits::default();
    if n < min {
        return Err(GeneratorError::TooFewAgents { min, got: n });
    }
    if n > limits.max_agents {
        return Err(GeneratorError::TooManyAgents {
            max: limits.max_agents,
            got: n,
        });
    }
    Ok(())
}

/// One concrete muddiness assignment; coordinate `i` is child `i+1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WorldVector(Vec<bool>);

impl WorldVector {
    pub fn new(bits: Vec<bool>) -> Self {
        WorldVector(bits)
    }

    /// Reads a bit-string name like `"10"`.
    pub fn from_name(name: &str) -> Option<Self> {
        name.chars()
            .map(|c| match c {
                '0' => Some(false),
                '1' => Some(true),
                _ => None,
            })
            .collect::<Option<Vec<bool>>>()
            .filter(|bits| !bits.is_empty())
            .map(WorldVector)
    }

    pub fn name(&self) -> String {
        self.0.iter().map(|&b| if b { '1' } else { '0' }).collect()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn bit(&self, i: usize) -> bool {
        self.0[i]
    }
}

fn muddy_atom(i: u32) -> Formula {
    Formula::atom(format!("m{i}"))
}

fn muddy_atoms(n: u32) -> Vec<String> {
    (1..=n).map(|i| format!("m{i}")).collect()
}

/// The literal description of one assignment: `m1 & ~m2 & ...`.
pub fn world_formula(u: &WorldVector) -> Formula {
    Formula::conj((0..u.len()).map(|i| {
        let atom = muddy_atom(i as u32 + 1);
        if u.bit(i) {
            atom
        } else {
            Formula::not(atom)
        }
    }))
}

/// Sight postulates: child `i` knows whether each other child is muddy, one
/// formula per ordered pair.
pub fn knowing_about_others(n: u32) -> Vec<Formula> {
    let mut out = Vec::new();
    for i in 1..=n {
        for j in 1..=n {
            if i != j {
                out.push(Formula::or(
                    Formula::knows(i, muddy_atom(j)),
                    Formula::knows(i, Formula::not(muddy_atom(j))),
                ));
            }
        }
    }
    out
}

/// Nobody knows their own state: `~Ki mi & ~Ki ~mi` over all children.
pub fn not_knowing_own(n: u32) -> Formula {
    let mut literals = Vec::new();
    for i in 1..=n {
        literals.push(Formula::not(Formula::knows(i, muddy_atom(i))));
        literals.push(Formula::not(Formula::knows(i, Formula::not(muddy_atom(i)))));
    }
    Formula::conj(literals)
}

pub fn at_least_one_muddy(n: u32) -> Formula {
    Formula::disj((1..=n).map(muddy_atom))
}

/// Exactly `count` of `n` children muddy, as a disjunction over the
/// assignments with that many bits set, in binary counting order.
pub fn exact_count(n: u32, count: u32) -> Formula {
    let mut cases = Vec::new();
    for mask in 0u32..(1 << n) {
        if mask.count_ones() != count {
            continue;
        }
        let bits = (0..n).map(|i| mask & (1 << (n - 1 - i)) != 0).collect();
        cases.push(world_formula(&WorldVector::new(bits)));
    }
    Formula::disj(cases)
}

/// The standing muddy-children situation, before anyone speaks: it is
/// common knowledge that each child sees the others and that nobody knows
/// their own state. Two assumptions, one formula each. Nothing ties the
/// scenario to an actual assignment yet.
pub fn muddy_children(n: u32) -> Result<Scenario, GeneratorError> {
    check_agents(n, 2)?;
    let assumptions = vec![
        Assumption::common_knowledge(Formula::conj(knowing_about_others(n))),
        Assumption::common_knowledge(not_knowing_own(n)),
    ];
    Ok(Scenario::new(n, muddy_atoms(n), assumptions)
        .expect("generated scenario is well formed"))
}

/// [`muddy_children`] plus the actual assignment as a plain assumption.
pub fn muddy_children_instance(n: u32, u: &WorldVector) -> Result<Scenario, GeneratorError> {
    if u.len() as u32 != n {
        return Err(GeneratorError::WrongLength {
            expected: n,
            got: u.len() as u32,
        });
    }
    let base = muddy_children(n)?;
    Ok(base
        .with_assumption(Assumption::plain(world_formula(u)))
        .expect("generated scenario is well formed"))
}

/// Sight postulates alone, before any announcement. No ignorance
/// assumption either, so each child's own state is left fully open.
pub fn muddy_explicit_before_announcement(n: u32) -> Result<Scenario, GeneratorError> {
    check_agents(n, 2)?;
    let assumptions = vec![Assumption::common_knowledge(Formula::conj(
        knowing_about_others(n),
    ))];
    Ok(Scenario::new(n, muddy_atoms(n), assumptions)
        .expect("generated scenario is well formed"))
}

/// Sight postulates plus a public count announcement: it becomes common
/// knowledge that exactly `count` children are muddy. Strong enough that
/// every child can settle their own state by counting what they see, so
/// there is deliberately no not-knowing-own assumption here.
pub fn muddy_explicit(n: u32, count: u32) -> Result<Scenario, GeneratorError> {
    check_agents(n, 2)?;
    if count == 0 || count > n {
        return Err(GeneratorError::BadCount { agents: n, count });
    }
    let assumptions = vec![
        Assumption::common_knowledge(Formula::conj(knowing_about_others(n))),
        Assumption::common_knowledge(exact_count(n, count)),
    ];
    Ok(Scenario::new(n, muddy_atoms(n), assumptions)
        .expect("generated scenario is well formed"))
}

/// The full `2^n` assignment model: agent `i` cannot tell apart two worlds
/// that differ only in coordinate `i`.
pub fn cube_model(n: u32) -> Result<KripkeStructure, GeneratorError> {
    check_agents(n, 1)?;
    let size = 1u32 << n;
    let names: Vec<String> = (0..size)
        .map(|mask| {
            (0..n)
                .map(|i| {
                    if mask & (1 << (n - 1 - i)) != 0 {
                        '1'
                    } else {
                        '0'
                    }
                })
                .collect()
        })
        .collect();
    let valuation = (0..size)
        .map(|mask| {
            let true_atoms = (0..n)
                .filter(|i| mask & (1 << (n - 1 - i)) != 0)
                .map(|i| format!("m{}", i + 1))
                .collect();
            (names[mask as usize].clone(), true_atoms)
        })
        .collect();
    let partitions = (0..n)
        .map(|i| {
            let flip = 1u32 << (n - 1 - i);
            let blocks = (0..size)
                .filter(|mask| mask & flip == 0)
                .map(|mask| {
                    vec![
                        names[mask as usize].clone(),
                        names[(mask | flip) as usize].clone(),
                    ]
                })
                .collect();
            ((i + 1).to_string(), blocks)
        })
        .collect();
    let data = ModelData {
        agents: n,
        atoms: muddy_atoms(n),
        worlds: names,
        valuation,
        partitions,
        designated: None,
    };
    Ok(data.build().expect("generated model is well formed"))
}

/// A coin lies heads up under a cup; agent 1 has peeked, agent 2 has not.
/// Returns the assumption set and its intended two-world model, pointed at
/// the heads world. None of the assumptions is common knowledge, which is
/// what keeps claims like `K2 (K1 h | K1 ~h)` underivable.
pub fn coin_scenario() -> (Scenario, PointedModel) {
    let h = || Formula::atom("h");
    let scenario = Scenario::new(
        2,
        vec!["h".to_string()],
        vec![
            Assumption::plain(h()),
            Assumption::plain(Formula::knows(1, h())),
            Assumption::plain(Formula::not(Formula::knows(2, h()))),
            Assumption::plain(Formula::not(Formula::knows(2, Formula::not(h())))),
        ],
    )
    .expect("generated scenario is well formed");
    let data = ModelData::from_json(
        r#"{
            "agents": 2,
            "atoms": ["h"],
            "worlds": ["u", "v"],
            "valuation": {"u": ["h"], "v": []},
            "partitions": {"1": [["u"], ["v"]], "2": [["u", "v"]]},
            "designated": "u"
        }"#,
    )
    .expect("embedded model parses");
    let model = data.build_pointed().expect("embedded model is well formed");
    (scenario, model)
}

/// Three-leg alternating game under risk-averse play: `di` says the mover
/// at leg `i` plays down. The last leg goes down outright, and each earlier
/// mover plays down whenever they cannot rule out a down at the next leg,
/// with "cannot rule out" read as `~K ~`. All three down-moves then follow
/// by reflection and modus ponens, while higher-order claims like `K2 d3`
/// stay open: no cross-knowledge between the players is assumed. The
/// encoding of risk aversion is a modelling choice; edit the emitted
/// scenario file to try variants.
pub fn centipede_lite() -> Scenario {
    let d = |i: u32| Formula::atom(format!("d{i}"));
    let cannot_rule_out = |agent: u32, f: Formula| Formula::not(Formula::knows(agent, Formula::not(f)));
    Scenario::new(
        2,
        vec!["d1".to_string(), "d2".to_string(), "d3".to_string()],
        vec![
            Assumption::plain(d(3)),
            Assumption::plain(Formula::implies(cannot_rule_out(2, d(3)), d(2))),
            Assumption::plain(Formula::implies(cannot_rule_out(1, d(2)), d(1))),
        ],
    )
    .expect("generated scenario is well formed")
}

/// Three scenarios over one atom and two agents: a bare fact, everybody
/// knowing it, and common knowledge of it. Knowledge claims separate them.
pub fn trio() -> [Scenario; 3] {
    let m = || Formula::atom("m");
    let atoms = || vec!["m".to_string()];
    let fact = Scenario::new(2, atoms(), vec![Assumption::plain(m())])
        .expect("generated scenario is well formed");
    let mutual = Scenario::new(
        2,
        atoms(),
        vec![Assumption::plain(Formula::and(
            Formula::knows(1, m()),
            Formula::knows(2, m()),
        ))],
    )
    .expect("generated scenario is well formed");
    let common = Scenario::new(2, atoms(), vec![Assumption::common_knowledge(m())])
        .expect("generated scenario is well formed");
    [fact, mutual, common]
}
