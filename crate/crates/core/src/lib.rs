//! Workbench for multi-agent S5 epistemic reasoning.
//!
//! The pieces: [`formula`] for the syntax and scenario assumption sets,
//! [`parser`] for concrete syntax and scenario files, [`prover`] for the
//! tableau decision procedure with countermodel extraction, [`kripke`] for
//! partition models, public announcements and the exactness analysis,
//! [`fragment`] for enumerating finite formula fragments, and [`scenarios`]
//! for generated worked examples.
//!
//! Knowledge here is deliberately assumption-sensitive: a scenario derives
//! `K1 m` only if its assumptions put `K1 m` (or the means to conclude it)
//! on the table. Common-knowledge assumptions are approximated by expanding
//! knowledge prefixes to a finite depth, and every negative answer is
//! reported relative to that depth.

pub mod formula;
pub mod fragment;
pub mod kripke;
pub mod parser;
pub mod prover;
pub mod scenarios;

pub use formula::{
    expand_ck, expand_everybody, is_atom_name, AgentId, Assumption, AssumptionMode,
    ExpansionError, Formula, Scenario, ScenarioError, SignatureError, SurfaceFormula,
    DEFAULT_EXPANSION_LIMIT,
};
pub use fragment::{EnumeratedFragment, FragmentShape, FragmentSpec};
pub use kripke::{
    exact_check, AnalysisError, AnnouncementError, AssumptionCheck, CheckError, ExactReport,
    KripkeStructure, Mismatch, MismatchKind, ModelData, ModelError, PointedModel,
};
pub use parser::{
    parse_formula, parse_scenario, parse_scenario_file, render, render_scenario, ParseError,
    ScenarioFile, SourceSpan,
};
pub use prover::{
    suggested_analysis_depth, suggested_ck_depth, CompletenessReport, CompletenessVerdict,
    DerivabilityResult, FormulaTally, NecessitationReport, NecessitationVerdict, Prover,
    ProverConfig, ProverError, SatResult, ValidityResult,
};
pub use scenarios::{
    at_least_one_muddy, centipede_lite, coin_scenario, cube_model, exact_count,
    knowing_about_others, muddy_children, muddy_children_instance, muddy_explicit,
    muddy_explicit_before_announcement, not_knowing_own, trio, world_formula, GeneratorError,
    ScenarioLimits, WorldVector,
};
