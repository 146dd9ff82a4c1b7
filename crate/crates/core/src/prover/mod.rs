//! Decision procedures: satisfiability, validity, derivability from
//! assumptions, and the two scenario analyses (necessitation and deductive
//! completeness over a formula fragment).
//!
//! Derivability is semantic consequence at the designated world: `F` follows
//! from assumptions when the assumptions plus `~F` have no model.
//! Common-knowledge assumptions enter a query through their knowledge-prefix
//! expansion at a chosen depth, so negative verdicts are always relative to
//! that depth.

mod nnf;
mod tableau;

use std::collections::BTreeSet;

use rayon::prelude::*;
use thiserror::Error;

use crate::formula::{
    expand_ck, ExpansionError, Formula, Scenario, SignatureError, DEFAULT_EXPANSION_LIMIT,
};
use crate::fragment::FragmentSpec;
use crate::kripke::PointedModel;

use nnf::{NnfId, NnfStore};
use tableau::{solve, SearchLimits, TableauOutcome};

#[derive(Debug, Clone, Copy)]
pub struct ProverConfig {
    /// Cap on worlds created across all branches of one query.
    pub max_worlds: usize,
    /// Cap on label additions across all branches of one query.
    pub max_steps: usize,
    /// Cap forwarded to the common-knowledge prefix expansion.
    pub max_expansion_formulas: usize,
}

impl Default for ProverConfig {
    fn default() -> Self {
        ProverConfig {
            max_worlds: 50_000,
            max_steps: 1_000_000,
            max_expansion_formulas: DEFAULT_EXPANSION_LIMIT,
        }
    }
}

#[derive(Debug, Error)]
pub enum ProverError {
    #[error(
        "search exceeded its resource limits ({worlds_created} worlds, {steps} steps); \
         raise the limits or simplify the query"
    )]
    ResourceLimit { worlds_created: usize, steps: usize },
    #[error(transparent)]
    Expansion(#[from] ExpansionError),
    #[error(transparent)]
    Signature(#[from] SignatureError),
    #[error("the assumptions are inconsistent at this expansion depth, every formula is derivable")]
    InconsistentScenario,
}

#[derive(Debug)]
pub enum SatResult {
    Satisfiable(PointedModel),
    Unsatisfiable,
}

impl SatResult {
    pub fn is_satisfiable(&self) -> bool {
        matches!(self, SatResult::Satisfiable(_))
    }

    pub fn model(&self) -> Option<&PointedModel> {
        match self {
            SatResult::Satisfiable(m) => Some(m),
            SatResult::Unsatisfiable => None,
        }
    }
}

#[derive(Debug)]
pub enum ValidityResult {
    Valid,
    Invalid { countermodel: PointedModel },
}

impl ValidityResult {
    pub fn is_valid(&self) -> bool {
        matches!(self, ValidityResult::Valid)
    }
}

#[derive(Debug)]
pub enum DerivabilityResult {
    Derivable {
        ck_depth_used: u32,
    },
    /// The countermodel satisfies the expanded assumptions and the negated
    /// goal at its designated world.
    NotDerivable {
        countermodel: PointedModel,
        ck_depth_tried: u32,
    },
}

impl DerivabilityResult {
    pub fn is_derivable(&self) -> bool {
        matches!(self, DerivabilityResult::Derivable { .. })
    }
}

#[derive(Debug)]
pub enum NecessitationVerdict {
    /// Every expanded assumption is known by every agent one level up.
    Pass,
    /// First assumption and agent for which that fails.
    Fail {
        formula: Formula,
        agent: u32,
        countermodel: Box<PointedModel>,
    },
}

#[derive(Debug)]
pub struct NecessitationReport {
    pub ck_depth: u32,
    /// Assumption-agent pairs examined before the verdict was settled.
    pub checked: usize,
    pub verdict: NecessitationVerdict,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct FormulaTally {
    pub derivable: usize,
    pub refutable: usize,
    pub undetermined: usize,
}

#[derive(Debug)]
pub enum CompletenessVerdict {
    /// Every fragment formula is settled: itself or its negation derivable.
    Complete,
    /// `witness` is the first fragment formula left open, with a model
    /// either way.
    Incomplete {
        witness: Formula,
        model_true: Box<PointedModel>,
        model_false: Box<PointedModel>,
    },
}

#[derive(Debug)]
pub struct CompletenessReport {
    pub fragment: FragmentSpec,
    pub ck_depth: u32,
    pub checked: usize,
    pub truncated: bool,
    pub tally: FormulaTally,
    pub verdict: CompletenessVerdict,
}

/// Depth that covers a goal query: deep enough for the goal's own modal
/// nesting stacked on the assumptions'.
pub fn suggested_ck_depth(s: &Scenario, goal: &Formula) -> u32 {
    goal.modal_depth() + s.max_assumption_depth() + 1
}

/// Depth for fragment-wide analyses, by the same measure.
pub fn suggested_analysis_depth(s: &Scenario, fragment_depth: u32) -> u32 {
    s.max_assumption_depth() + fragment_depth + 1
}

#[derive(Debug, Default)]
pub struct Prover {
    config: ProverConfig,
}

impl Prover {
    pub fn new() -> Self {
        Prover::default()
    }

    pub fn with_config(config: ProverConfig) -> Self {
        Prover { config }
    }

    pub fn config(&self) -> &ProverConfig {
        &self.config
    }

    /// Satisfiability against an explicit signature; the signature fixes the
    /// atom set of any extracted model.
    fn satisfiable_signed(
        &self,
        agent_count: u32,
        atoms: &[String],
        formulas: &[Formula],
    ) -> Result<SatResult, ProverError> {
        for f in formulas {
            f.validate(agent_count, atoms)?;
        }
        let mut store = NnfStore::new(atoms);
        let roots: Vec<NnfId> = formulas.iter().map(|f| store.convert(f, true)).collect();
        let limits = SearchLimits {
            max_worlds: self.config.max_worlds,
            max_steps: self.config.max_steps,
        };
        match solve(&store, agent_count, &roots, limits) {
            Ok(TableauOutcome::Satisfiable(data)) => {
                let model = data
                    .build_pointed()
                    .expect("tableau extraction produces a valid model");
                debug_assert!(
                    formulas.iter().all(|f| model.check(f).unwrap_or(false)),
                    "extracted model must satisfy the query"
                );
                Ok(SatResult::Satisfiable(model))
            }
            Ok(TableauOutcome::Unsatisfiable) => Ok(SatResult::Unsatisfiable),
            Err(e) => Err(ProverError::ResourceLimit {
                worlds_created: e.worlds_created,
                steps: e.steps,
            }),
        }
    }

    fn inferred_signature(formulas: &[Formula]) -> (u32, Vec<String>) {
        let agent_count = formulas
            .iter()
            .map(Formula::max_agent)
            .max()
            .unwrap_or(0)
            .max(1);
        let atoms: BTreeSet<&str> = formulas.iter().flat_map(Formula::atoms).collect();
        (agent_count, atoms.into_iter().map(String::from).collect())
    }

    pub fn satisfiable(&self, f: &Formula) -> Result<SatResult, ProverError> {
        self.satisfiable_all(std::slice::from_ref(f))
    }

    /// Joint satisfiability of all `formulas` at one world. Agent count and
    /// atom set are read off the formulas.
    pub fn satisfiable_all(&self, formulas: &[Formula]) -> Result<SatResult, ProverError> {
        let (agent_count, atoms) = Self::inferred_signature(formulas);
        self.satisfiable_signed(agent_count, &atoms, formulas)
    }

    pub fn valid(&self, f: &Formula) -> Result<ValidityResult, ProverError> {
        let negated = Formula::not(f.clone());
        Ok(match self.satisfiable(&negated)? {
            SatResult::Satisfiable(countermodel) => ValidityResult::Invalid { countermodel },
            SatResult::Unsatisfiable => ValidityResult::Valid,
        })
    }

    /// Semantic consequence from plain hypotheses.
    pub fn derives(
        &self,
        hypotheses: &[Formula],
        goal: &Formula,
    ) -> Result<DerivabilityResult, ProverError> {
        let mut all = hypotheses.to_vec();
        all.push(goal.clone());
        let (agent_count, atoms) = Self::inferred_signature(&all);
        all.pop();
        self.derive_signed(agent_count, &atoms, &all, goal, 0)
    }

    fn derive_signed(
        &self,
        agent_count: u32,
        atoms: &[String],
        hypotheses: &[Formula],
        goal: &Formula,
        ck_depth: u32,
    ) -> Result<DerivabilityResult, ProverError> {
        let mut query = hypotheses.to_vec();
        query.push(Formula::not(goal.clone()));
        Ok(match self.satisfiable_signed(agent_count, atoms, &query)? {
            SatResult::Unsatisfiable => DerivabilityResult::Derivable {
                ck_depth_used: ck_depth,
            },
            SatResult::Satisfiable(countermodel) => DerivabilityResult::NotDerivable {
                countermodel,
                ck_depth_tried: ck_depth,
            },
        })
    }

    /// Derivability from a scenario, with its common-knowledge assumptions
    /// expanded to knowledge prefixes of length at most `ck_depth`. A
    /// negative answer comes with a countermodel over the scenario's
    /// signature and only rules the goal out at this depth.
    pub fn derives_scenario(
        &self,
        scenario: &Scenario,
        goal: &Formula,
        ck_depth: u32,
    ) -> Result<DerivabilityResult, ProverError> {
        goal.validate(scenario.agent_count(), scenario.atoms())?;
        let hypotheses = expand_ck(scenario, ck_depth, self.config.max_expansion_formulas)?;
        self.derive_signed(
            scenario.agent_count(),
            scenario.atoms(),
            &hypotheses,
            goal,
            ck_depth,
        )
    }

    /// Whether the expanded assumption set derives its own one-step
    /// knowledge closure: `K_i A` for every expanded assumption `A` and
    /// agent `i`, judged against the expansion one level deeper. Fails for
    /// assumption sets that are not introspectively closed.
    pub fn necessitation_check(
        &self,
        scenario: &Scenario,
        ck_depth: u32,
    ) -> Result<NecessitationReport, ProverError> {
        let cap = self.config.max_expansion_formulas;
        let gamma = expand_ck(scenario, ck_depth, cap)?;
        let gamma_plus = expand_ck(scenario, ck_depth + 1, cap)?;
        if !self
            .satisfiable_signed(scenario.agent_count(), scenario.atoms(), &gamma_plus)?
            .is_satisfiable()
        {
            return Err(ProverError::InconsistentScenario);
        }
        let mut checked = 0;
        for formula in &gamma {
            for agent in 1..=scenario.agent_count() {
                checked += 1;
                let goal = Formula::knows(agent, formula.clone());
                let result = self.derive_signed(
                    scenario.agent_count(),
                    scenario.atoms(),
                    &gamma_plus,
                    &goal,
                    ck_depth,
                )?;
                if let DerivabilityResult::NotDerivable { countermodel, .. } = result {
                    return Ok(NecessitationReport {
                        ck_depth,
                        checked,
                        verdict: NecessitationVerdict::Fail {
                            formula: formula.clone(),
                            agent,
                            countermodel: Box::new(countermodel),
                        },
                    });
                }
            }
        }
        Ok(NecessitationReport {
            ck_depth,
            checked,
            verdict: NecessitationVerdict::Pass,
        })
    }

    /// Classifies every formula of `fragment` as derivable, refutable or
    /// undetermined under the scenario's expanded assumptions. Errors out on
    /// inconsistent assumptions instead of reporting a vacuous verdict.
    pub fn completeness_check(
        &self,
        scenario: &Scenario,
        fragment: &FragmentSpec,
        ck_depth: u32,
    ) -> Result<CompletenessReport, ProverError> {
        let hypotheses = expand_ck(scenario, ck_depth, self.config.max_expansion_formulas)?;
        if !self
            .satisfiable_signed(scenario.agent_count(), scenario.atoms(), &hypotheses)?
            .is_satisfiable()
        {
            return Err(ProverError::InconsistentScenario);
        }
        enum Classified {
            Derivable,
            Refutable,
            Undetermined {
                model_true: Box<PointedModel>,
                model_false: Box<PointedModel>,
            },
        }
        let enumerated = fragment.enumerate();
        let classes: Vec<Classified> = enumerated
            .formulas
            .par_iter()
            .map(|f| -> Result<Classified, ProverError> {
                let mut with_neg = hypotheses.clone();
                with_neg.push(Formula::not(f.clone()));
                let falsified = self.satisfiable_signed(
                    scenario.agent_count(),
                    scenario.atoms(),
                    &with_neg,
                )?;
                let SatResult::Satisfiable(model_false) = falsified else {
                    return Ok(Classified::Derivable);
                };
                let mut with_pos = hypotheses.clone();
                with_pos.push(f.clone());
                let satisfied = self.satisfiable_signed(
                    scenario.agent_count(),
                    scenario.atoms(),
                    &with_pos,
                )?;
                let SatResult::Satisfiable(model_true) = satisfied else {
                    return Ok(Classified::Refutable);
                };
                Ok(Classified::Undetermined {
                    model_true: Box::new(model_true),
                    model_false: Box::new(model_false),
                })
            })
            .collect::<Result<_, _>>()?;
        let mut tally = FormulaTally::default();
        let mut verdict = CompletenessVerdict::Complete;
        for (f, class) in enumerated.formulas.iter().zip(classes) {
            match class {
                Classified::Derivable => tally.derivable += 1,
                Classified::Refutable => tally.refutable += 1,
                Classified::Undetermined {
                    model_true,
                    model_false,
                } => {
                    tally.undetermined += 1;
                    if matches!(verdict, CompletenessVerdict::Complete) {
                        verdict = CompletenessVerdict::Incomplete {
                            witness: f.clone(),
                            model_true,
                            model_false,
                        };
                    }
                }
            }
        }
        Ok(CompletenessReport {
            fragment: fragment.clone(),
            ck_depth,
            checked: enumerated.formulas.len(),
            truncated: enumerated.truncated,
            tally,
            verdict,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fragment::FragmentShape;
    use crate::parser::{parse_formula, parse_scenario};

    fn f2(text: &str) -> Formula {
        parse_formula(text, 2).unwrap()
    }

    #[test]
    fn s5_schemata_are_valid() {
        let p = Prover::new();
        for text in [
            "K1 p -> p",
            "K1 p -> K1 K1 p",
            "~K1 p -> K1 ~K1 p",
            "K1 (p -> q) -> (K1 p -> K1 q)",
            "K2 (p & q) -> K2 p & K2 q",
            "p -> ~K1 ~p",
        ] {
            assert!(p.valid(&f2(text)).unwrap().is_valid(), "{text} not valid");
        }
    }

    #[test]
    fn non_theorems_have_countermodels() {
        let p = Prover::new();
        for text in ["p -> K1 p", "K1 p -> K2 p", "~K1 p -> K1 ~p"] {
            let ValidityResult::Invalid { countermodel } = p.valid(&f2(text)).unwrap() else {
                panic!("{text} should not be valid");
            };
            assert!(!countermodel.check(&f2(text)).unwrap());
        }
    }

    #[test]
    fn plain_fact_does_not_yield_knowledge() {
        let p = Prover::new();
        let s = parse_scenario("agents: 2\natoms: m\nassume: m\n").unwrap();
        let result = p.derives_scenario(&s, &f2("K1 m"), 2).unwrap();
        let DerivabilityResult::NotDerivable { countermodel, ck_depth_tried } = result else {
            panic!("a bare fact should not make anyone know it");
        };
        assert_eq!(ck_depth_tried, 2);
        assert!(countermodel.check(&f2("m")).unwrap());
        assert!(!countermodel.check(&f2("K1 m")).unwrap());
        assert!(p.derives_scenario(&s, &f2("m"), 0).unwrap().is_derivable());
    }

    #[test]
    fn mutual_knowledge_stops_at_one_level() {
        let p = Prover::new();
        let s = parse_scenario("agents: 2\natoms: m\nassume: E m\n").unwrap();
        assert!(p.derives_scenario(&s, &f2("K1 m"), 0).unwrap().is_derivable());
        assert!(p.derives_scenario(&s, &f2("K2 m"), 0).unwrap().is_derivable());
        let second = p.derives_scenario(&s, &f2("K2 K1 m"), 3).unwrap();
        assert!(!second.is_derivable());
    }

    #[test]
    fn common_knowledge_expansion_is_depth_sensitive() {
        let p = Prover::new();
        let s = parse_scenario("agents: 2\natoms: m\nassume-ck: m\n").unwrap();
        assert!(!p.derives_scenario(&s, &f2("K2 K1 m"), 1).unwrap().is_derivable());
        assert!(p.derives_scenario(&s, &f2("K2 K1 m"), 2).unwrap().is_derivable());
        assert_eq!(suggested_ck_depth(&s, &f2("K2 K1 m")), 3);
    }

    #[test]
    fn necessitation_fails_for_a_bare_fact() {
        let p = Prover::new();
        let s = parse_scenario("agents: 2\natoms: m\nassume: m\n").unwrap();
        let report = p.necessitation_check(&s, 0).unwrap();
        let NecessitationVerdict::Fail { formula, agent, countermodel } = report.verdict else {
            panic!("expected a failure");
        };
        assert_eq!(formula, f2("m"));
        assert_eq!(agent, 1);
        assert_eq!(report.checked, 1);
        assert!(!countermodel.check(&f2("K1 m")).unwrap());
    }

    #[test]
    fn necessitation_fails_for_mutual_knowledge() {
        let p = Prover::new();
        let s = parse_scenario("agents: 2\natoms: m\nassume: E m\n").unwrap();
        let report = p.necessitation_check(&s, 0).unwrap();
        let NecessitationVerdict::Fail { formula, agent, .. } = report.verdict else {
            panic!("expected a failure");
        };
        assert_eq!(formula, f2("E m"));
        assert_eq!(agent, 1);
    }

    #[test]
    fn necessitation_passes_under_common_knowledge() {
        let p = Prover::new();
        let s = parse_scenario("agents: 2\natoms: m\nassume-ck: m\n").unwrap();
        let report = p.necessitation_check(&s, 1).unwrap();
        assert!(matches!(report.verdict, NecessitationVerdict::Pass));
        assert_eq!(report.checked, 2 * 3);
    }

    #[test]
    fn completeness_flags_the_first_open_formula() {
        let p = Prover::new();
        let s = parse_scenario("agents: 2\natoms: m\nassume: m\n").unwrap();
        let fragment = FragmentSpec {
            atoms: vec!["m".into()],
            agent_count: 2,
            max_modal_depth: 1,
            shape: FragmentShape::KOverLiterals,
            size_budget: 64,
        };
        let report = p.completeness_check(&s, &fragment, 1).unwrap();
        let CompletenessVerdict::Incomplete { witness, model_true, model_false } = report.verdict
        else {
            panic!("a bare fact cannot settle knowledge claims");
        };
        assert_eq!(witness, f2("K1 m"));
        assert!(model_true.check(&f2("K1 m")).unwrap());
        assert!(!model_false.check(&f2("K1 m")).unwrap());
        // open: K1 m, ~K1 m, K2 m, ~K2 m; settled: m, ~m and the four
        // formulas about ~m, e.g. ~K1 ~m follows from m alone
        assert_eq!(report.checked, 10);
        assert_eq!(report.tally.undetermined, 4);
        assert_eq!(report.tally.derivable, 3);
        assert_eq!(report.tally.refutable, 3);
    }

    #[test]
    fn completeness_holds_for_ck_over_shallow_fragment() {
        let p = Prover::new();
        let s = parse_scenario("agents: 2\natoms: m\nassume-ck: m\n").unwrap();
        let fragment = FragmentSpec {
            atoms: vec!["m".into()],
            agent_count: 2,
            max_modal_depth: 1,
            shape: FragmentShape::KOverLiterals,
            size_budget: 64,
        };
        let report = p.completeness_check(&s, &fragment, 1).unwrap();
        assert!(matches!(report.verdict, CompletenessVerdict::Complete));
        assert_eq!(report.tally.undetermined, 0);
    }

    #[test]
    fn inconsistent_assumptions_are_an_error() {
        let p = Prover::new();
        let s = parse_scenario("agents: 1\natoms: m\nassume: m\nassume: ~m\n").unwrap();
        let fragment = FragmentSpec {
            atoms: vec!["m".into()],
            agent_count: 1,
            max_modal_depth: 0,
            shape: FragmentShape::Literals,
            size_budget: 8,
        };
        assert!(matches!(
            p.completeness_check(&s, &fragment, 0),
            Err(ProverError::InconsistentScenario)
        ));
        assert!(matches!(
            p.necessitation_check(&s, 0),
            Err(ProverError::InconsistentScenario)
        ));
    }

    #[test]
    fn tight_limits_surface_as_resource_errors() {
        let p = Prover::with_config(ProverConfig {
            max_worlds: 2,
            max_steps: 1_000_000,
            ..ProverConfig::default()
        });
        let big = f2("~K1 p & ~K1 q & ~K2 p & ~K2 q & ~K1 r");
        let big = Formula::and(big, f2("~K2 r"));
        assert!(matches!(
            p.satisfiable(&big),
            Err(ProverError::ResourceLimit { .. })
        ));
    }

    #[test]
    fn derives_from_plain_hypotheses() {
        let p = Prover::new();
        let hyps = [f2("K1 (p -> q)"), f2("K1 p")];
        assert!(p.derives(&hyps, &f2("K1 q")).unwrap().is_derivable());
        assert!(p.derives(&hyps, &f2("q")).unwrap().is_derivable());
        assert!(!p.derives(&hyps, &f2("K2 q")).unwrap().is_derivable());
    }
}
