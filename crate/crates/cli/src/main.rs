//! Command-line front end. Exit codes: 0 for affirmative verdicts, 1 for
//! negative ones, 2 for usage, parse or input problems, 3 when a search or
//! expansion budget ran out. Verdicts go to stdout, diagnostics to stderr.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::exit;

use clap::{Args, Parser, Subcommand, ValueEnum};
use epilog_core::{
    centipede_lite, coin_scenario, cube_model, exact_check, expand_ck,
    muddy_children, muddy_explicit, parse_formula, parse_scenario_file, render, render_scenario,
    trio, AnalysisError, AnnouncementError, AssumptionMode, CompletenessVerdict,
    DerivabilityResult, Formula, FragmentShape, FragmentSpec, MismatchKind, ModelData,
    NecessitationVerdict, PointedModel, Prover, ProverError, Scenario, ScenarioFile,
    ValidityResult, DEFAULT_EXPANSION_LIMIT,
};
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "epilog", version, about = "Workbench for multi-agent knowledge logic")]
struct Cli {
    /// Emit one JSON object with the verdict instead of prose.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide whether a scenario derives a goal formula.
    Prove {
        #[arg(long)]
        scenario: PathBuf,
        /// Goal formula; defaults to the scenario file's `goal:` line.
        #[arg(long)]
        goal: Option<String>,
        /// Expansion depth for common-knowledge assumptions.
        #[arg(long)]
        ck_depth: Option<u32>,
        /// Where to save the countermodel of a negative answer.
        #[arg(long)]
        out_model: Option<PathBuf>,
    },
    /// Decide whether a formula holds in every pointed model.
    Valid {
        #[arg(long)]
        agents: u32,
        #[arg(long)]
        formula: String,
    },
    /// Evaluate a formula at one world of a model.
    CheckModel {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        world: String,
        #[arg(long)]
        formula: String,
    },
    /// Check every scenario assumption at a world of a model.
    IsModel {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        world: String,
        #[arg(long)]
        scenario: PathBuf,
    },
    /// Publicly announce a formula: drop the worlds where it fails.
    Announce {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        formula: String,
        #[arg(long)]
        out: PathBuf,
    },
    /// Classify every fragment formula as derivable, refutable or open.
    Complete {
        #[arg(long)]
        scenario: PathBuf,
        /// Comma-separated fragment atoms, e.g. "m1,m2".
        #[arg(long)]
        atoms: String,
        /// Modal depth bound of the fragment.
        #[arg(long)]
        depth: u32,
        #[arg(long)]
        ck_depth: Option<u32>,
        #[arg(long, value_enum, default_value = "k-over-booleans")]
        shape: ShapeArg,
        #[arg(long, default_value_t = 512)]
        budget: usize,
    },
    /// Compare derivability against truth at a model's world, formula by formula.
    Exact {
        #[arg(long)]
        scenario: PathBuf,
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        world: String,
        #[arg(long)]
        atoms: String,
        #[arg(long)]
        depth: u32,
        #[arg(long)]
        ck_depth: Option<u32>,
        #[arg(long, value_enum, default_value = "k-over-booleans")]
        shape: ShapeArg,
        #[arg(long, default_value_t = 512)]
        budget: usize,
    },
    /// Check whether the expanded assumptions derive their own knowledge closure.
    Necessitation {
        #[arg(long)]
        scenario: PathBuf,
        #[arg(long)]
        ck_depth: Option<u32>,
    },
    /// Write a bundled scenario and, where one exists, its companion model.
    Scenario {
        #[command(subcommand)]
        which: ScenarioCommand,
    },
    /// Render a model file as Graphviz DOT.
    Export {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        dot: PathBuf,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ShapeArg {
    Literals,
    KOverLiterals,
    KOverBooleans,
    Full,
}

impl From<ShapeArg> for FragmentShape {
    fn from(s: ShapeArg) -> FragmentShape {
        match s {
            ShapeArg::Literals => FragmentShape::Literals,
            ShapeArg::KOverLiterals => FragmentShape::KOverLiterals,
            ShapeArg::KOverBooleans => FragmentShape::KOverBooleans,
            ShapeArg::Full => FragmentShape::Full,
        }
    }
}

#[derive(Args)]
struct ScenarioOut {
    /// Where to write the scenario file; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Where to write the companion model, for scenarios that have one.
    #[arg(long)]
    out_model: Option<PathBuf>,
}

#[derive(Subcommand)]
enum ScenarioCommand {
    /// Muddy children: sight and shared ignorance, all common knowledge.
    Muddy {
        #[arg(long)]
        n: u32,
        #[command(flatten)]
        outs: ScenarioOut,
    },
    /// Muddy children after an exact-count announcement.
    MuddyExplicit {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        k: u32,
        #[command(flatten)]
        outs: ScenarioOut,
    },
    /// A peeked-at coin: one agent knows the outcome, one does not.
    Coin {
        #[command(flatten)]
        outs: ScenarioOut,
    },
    /// Three-leg game solved without any cross-knowledge assumptions.
    Centipede {
        #[command(flatten)]
        outs: ScenarioOut,
    },
    /// A bare fact (1), mutual knowledge (2) or common knowledge (3) of it.
    Trio {
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=3))]
        which: u8,
        #[command(flatten)]
        outs: ScenarioOut,
    },
}

struct Verdict {
    code: i32,
    lines: Vec<String>,
    json: Value,
}

struct Failure {
    code: i32,
    message: String,
}

type CmdResult = Result<Verdict, Failure>;

fn input_error(message: impl ToString) -> Failure {
    Failure {
        code: 2,
        message: message.to_string(),
    }
}

fn prover_failure(e: ProverError) -> Failure {
    let code = match e {
        ProverError::ResourceLimit { .. } | ProverError::Expansion(_) => 3,
        _ => 2,
    };
    Failure {
        code,
        message: e.to_string(),
    }
}

fn analysis_failure(e: AnalysisError) -> Failure {
    match e {
        AnalysisError::Prover(p) => prover_failure(p),
        other => input_error(other),
    }
}

fn read_file(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| input_error(format!("{}: {e}", path.display())))
}

fn write_file(path: &Path, content: &str) -> Result<(), Failure> {
    fs::write(path, content).map_err(|e| input_error(format!("{}: {e}", path.display())))
}

fn load_scenario(path: &Path) -> Result<ScenarioFile, Failure> {
    let text = read_file(path)?;
    parse_scenario_file(&text).map_err(|e| input_error(format!("{}: {e}", path.display())))
}

fn load_model(path: &Path) -> Result<ModelData, Failure> {
    let text = read_file(path)?;
    ModelData::from_json(&text).map_err(|e| input_error(format!("{}: {e}", path.display())))
}

fn parse_goal(text: &str, scenario: &Scenario) -> Result<Formula, Failure> {
    parse_formula(text, scenario.agent_count()).map_err(input_error)
}

fn parse_atom_list(list: &str) -> Result<Vec<String>, Failure> {
    let atoms: Vec<String> = list
        .split(',')
        .map(|a| a.trim().to_string())
        .filter(|a| !a.is_empty())
        .collect();
    if atoms.is_empty() {
        return Err(input_error("--atoms needs at least one atom name"));
    }
    for a in &atoms {
        if !epilog_core::is_atom_name(a) {
            return Err(input_error(format!("bad atom name {a:?}")));
        }
    }
    Ok(atoms)
}

fn mode_word(mode: AssumptionMode) -> &'static str {
    match mode {
        AssumptionMode::Plain => "assume",
        AssumptionMode::CommonKnowledge => "assume-ck",
    }
}

/// Negative answers under expanded common knowledge are relative to the
/// depth used; say so whenever the scenario has CK assumptions.
fn at_depth(scenario: &Scenario, depth: u32) -> String {
    if scenario.has_common_knowledge() {
        format!(" at ck-depth {depth}")
    } else {
        String::new()
    }
}

fn prove(
    scenario_path: &Path,
    goal: Option<String>,
    ck_depth: Option<u32>,
    out_model: Option<PathBuf>,
) -> CmdResult {
    let file = load_scenario(scenario_path)?;
    let scenario = file.scenario;
    let goal = match goal {
        Some(text) => parse_goal(&text, &scenario)?,
        None => file.goal.ok_or_else(|| {
            input_error("no goal: pass --goal or add a goal: line to the scenario file")
        })?,
    };
    let depth = ck_depth.unwrap_or_else(|| epilog_core::suggested_ck_depth(&scenario, &goal));
    let prover = Prover::new();
    match prover
        .derives_scenario(&scenario, &goal, depth)
        .map_err(prover_failure)?
    {
        DerivabilityResult::Derivable { ck_depth_used } => Ok(Verdict {
            code: 0,
            lines: vec![format!("derivable: {}", render(&goal))],
            json: json!({
                "command": "prove",
                "goal": render(&goal),
                "verdict": "derivable",
                "ck_depth": ck_depth_used,
            }),
        }),
        DerivabilityResult::NotDerivable {
            countermodel,
            ck_depth_tried,
        } => {
            let expanded = expand_ck(&scenario, ck_depth_tried, DEFAULT_EXPANSION_LIMIT)
                .map_err(|e| prover_failure(e.into()))?;
            for h in &expanded {
                assert!(
                    countermodel.check(h).unwrap_or(false),
                    "countermodel fails hypothesis {h}"
                );
            }
            assert!(
                !countermodel.check(&goal).unwrap_or(true),
                "countermodel satisfies the goal {goal}"
            );
            let mut lines = vec![format!(
                "not derivable{}: {}",
                at_depth(&scenario, ck_depth_tried),
                render(&goal)
            )];
            let data = countermodel.to_data();
            if let Some(path) = &out_model {
                write_file(path, &data.to_json())?;
                lines.push(format!("countermodel written to {}", path.display()));
            } else {
                lines.push(format!(
                    "countermodel has {} worlds; save it with --out-model FILE",
                    countermodel.model().world_count()
                ));
            }
            Ok(Verdict {
                code: 1,
                lines,
                json: json!({
                    "command": "prove",
                    "goal": render(&goal),
                    "verdict": "not-derivable",
                    "ck_depth": ck_depth_tried,
                    "countermodel": serde_json::to_value(&data).unwrap(),
                }),
            })
        }
    }
}

fn valid(agents: u32, formula: &str) -> CmdResult {
    if agents == 0 {
        return Err(input_error("--agents must be at least 1"));
    }
    let f = parse_formula(formula, agents).map_err(input_error)?;
    let prover = Prover::new();
    match prover.valid(&f).map_err(prover_failure)? {
        ValidityResult::Valid => Ok(Verdict {
            code: 0,
            lines: vec![format!("valid: {}", render(&f))],
            json: json!({"command": "valid", "formula": render(&f), "verdict": "valid"}),
        }),
        ValidityResult::Invalid { countermodel } => {
            assert!(
                !countermodel.check(&f).unwrap_or(true),
                "countermodel satisfies {f}"
            );
            Ok(Verdict {
                code: 1,
                lines: vec![format!("not valid: {}", render(&f))],
                json: json!({
                    "command": "valid",
                    "formula": render(&f),
                    "verdict": "not-valid",
                    "countermodel": serde_json::to_value(countermodel.to_data()).unwrap(),
                }),
            })
        }
    }
}

fn check_model(model_path: &Path, world: &str, formula: &str) -> CmdResult {
    let model = load_model(model_path)?.build().map_err(input_error)?;
    let f = parse_formula(formula, model.agent_count()).map_err(input_error)?;
    let holds = model.check(world, &f).map_err(input_error)?;
    Ok(Verdict {
        code: if holds { 0 } else { 1 },
        lines: vec![format!(
            "{} at {world}: {}",
            if holds { "true" } else { "false" },
            render(&f)
        )],
        json: json!({
            "command": "check-model",
            "world": world,
            "formula": render(&f),
            "holds": holds,
        }),
    })
}

fn is_model(model_path: &Path, world: &str, scenario_path: &Path) -> CmdResult {
    let model = load_model(model_path)?.build().map_err(input_error)?;
    let pointed = PointedModel::new(model, world).map_err(input_error)?;
    let scenario = load_scenario(scenario_path)?.scenario;
    let checks = pointed.check_scenario(&scenario).map_err(analysis_failure)?;
    let holds = checks.iter().all(|c| c.holds);
    let mut lines = vec![if holds {
        format!("model of the scenario at {world}")
    } else {
        format!("not a model of the scenario at {world}:")
    }];
    for c in checks.iter().filter(|c| !c.holds) {
        lines.push(format!("  fails {} {}", mode_word(c.mode), render(&c.formula)));
    }
    let assumptions: Vec<Value> = checks
        .iter()
        .map(|c| {
            json!({
                "formula": render(&c.formula),
                "mode": mode_word(c.mode),
                "holds": c.holds,
            })
        })
        .collect();
    Ok(Verdict {
        code: if holds { 0 } else { 1 },
        lines,
        json: json!({
            "command": "is-model",
            "world": world,
            "holds": holds,
            "assumptions": assumptions,
        }),
    })
}

fn announce(model_path: &Path, formula: &str, out: &Path) -> CmdResult {
    let data = load_model(model_path)?;
    let pointed = data.designated.is_some();
    let negative = |message: String| Verdict {
        code: 1,
        lines: vec![message.clone()],
        json: json!({"command": "announce", "verdict": "rejected", "reason": message}),
    };
    let (before, after) = if pointed {
        let model = data.build_pointed().map_err(input_error)?;
        let f = parse_formula(formula, model.model().agent_count()).map_err(input_error)?;
        let before = model.model().world_count();
        match model.announce(&f) {
            Ok(next) => (before, next.to_data()),
            Err(AnnouncementError::Signature(e)) => return Err(input_error(e)),
            Err(e) => return Ok(negative(e.to_string())),
        }
    } else {
        let model = data.build().map_err(input_error)?;
        let f = parse_formula(formula, model.agent_count()).map_err(input_error)?;
        let before = model.world_count();
        match model.restrict(&f) {
            Ok(next) => (before, next.to_data()),
            Err(AnnouncementError::Signature(e)) => return Err(input_error(e)),
            Err(e) => return Ok(negative(e.to_string())),
        }
    };
    write_file(out, &after.to_json())?;
    let plural = |n: usize| if n == 1 { "world" } else { "worlds" };
    let after_count = after.worlds.len();
    Ok(Verdict {
        code: 0,
        lines: vec![format!(
            "{before} {} -> {after_count} {}, written to {}",
            plural(before),
            plural(after_count),
            out.display()
        )],
        json: json!({
            "command": "announce",
            "verdict": "announced",
            "worlds_before": before,
            "worlds_after": after.worlds.len(),
            "out": out.display().to_string(),
        }),
    })
}

fn fragment_for(
    scenario: &Scenario,
    atoms: &str,
    depth: u32,
    shape: ShapeArg,
    budget: usize,
) -> Result<FragmentSpec, Failure> {
    Ok(FragmentSpec {
        atoms: parse_atom_list(atoms)?,
        agent_count: scenario.agent_count(),
        max_modal_depth: depth,
        shape: shape.into(),
        size_budget: budget,
    })
}

#[allow(clippy::too_many_arguments)]
fn complete(
    scenario_path: &Path,
    atoms: &str,
    depth: u32,
    ck_depth: Option<u32>,
    shape: ShapeArg,
    budget: usize,
) -> CmdResult {
    let scenario = load_scenario(scenario_path)?.scenario;
    let fragment = fragment_for(&scenario, atoms, depth, shape, budget)?;
    let k = ck_depth.unwrap_or_else(|| epilog_core::suggested_analysis_depth(&scenario, depth));
    let prover = Prover::new();
    let report = prover
        .completeness_check(&scenario, &fragment, k)
        .map_err(prover_failure)?;
    let tally = json!({
        "derivable": report.tally.derivable,
        "refutable": report.tally.refutable,
        "undetermined": report.tally.undetermined,
    });
    let truncated_note = if report.truncated {
        " (fragment truncated at the size budget)"
    } else {
        ""
    };
    match report.verdict {
        CompletenessVerdict::Complete => Ok(Verdict {
            code: 0,
            lines: vec![format!(
                "complete: all {} fragment formulas settled{truncated_note}",
                report.checked
            )],
            json: json!({
                "command": "complete",
                "verdict": "complete",
                "ck_depth": report.ck_depth,
                "checked": report.checked,
                "truncated": report.truncated,
                "tally": tally,
            }),
        }),
        CompletenessVerdict::Incomplete {
            witness,
            model_true,
            model_false,
        } => {
            assert!(model_true.check(&witness).unwrap_or(false));
            assert!(!model_false.check(&witness).unwrap_or(true));
            Ok(Verdict {
                code: 1,
                lines: vec![
                    format!(
                        "incomplete{}: {} is neither derivable nor refutable",
                        at_depth(&scenario, report.ck_depth),
                        render(&witness)
                    ),
                    format!(
                        "checked {}: {} derivable, {} refutable, {} open{truncated_note}",
                        report.checked,
                        report.tally.derivable,
                        report.tally.refutable,
                        report.tally.undetermined
                    ),
                ],
                json: json!({
                    "command": "complete",
                    "verdict": "incomplete",
                    "ck_depth": report.ck_depth,
                    "checked": report.checked,
                    "truncated": report.truncated,
                    "tally": tally,
                    "witness": render(&witness),
                }),
            })
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn exact(
    scenario_path: &Path,
    model_path: &Path,
    world: &str,
    atoms: &str,
    depth: u32,
    ck_depth: Option<u32>,
    shape: ShapeArg,
    budget: usize,
) -> CmdResult {
    let scenario = load_scenario(scenario_path)?.scenario;
    let model = load_model(model_path)?.build().map_err(input_error)?;
    let pointed = PointedModel::new(model, world).map_err(input_error)?;
    let fragment = fragment_for(&scenario, atoms, depth, shape, budget)?;
    let k = ck_depth.unwrap_or_else(|| epilog_core::suggested_analysis_depth(&scenario, depth));
    let prover = Prover::new();
    let report = exact_check(&prover, &scenario, &pointed, &fragment, k).map_err(analysis_failure)?;
    let mismatches: Vec<Value> = report
        .mismatches
        .iter()
        .map(|m| {
            json!({
                "formula": render(&m.formula),
                "kind": match m.kind {
                    MismatchKind::TrueButUnderivable => "true-but-underivable",
                    MismatchKind::DerivableButFalse => "derivable-but-false",
                },
            })
        })
        .collect();
    let json = json!({
        "command": "exact",
        "verdict": if report.is_exact() { "exact" } else { "mismatched" },
        "ck_depth": report.ck_depth,
        "checked": report.checked,
        "truncated": report.truncated,
        "mismatches": mismatches,
    });
    if report.is_exact() {
        Ok(Verdict {
            code: 0,
            lines: vec![format!(
                "exact: truth at {world} and derivability agree on all {} formulas",
                report.checked
            )],
            json,
        })
    } else {
        let mut lines = vec![format!(
            "{} disagreements{} over {} formulas:",
            report.mismatches.len(),
            at_depth(&scenario, report.ck_depth),
            report.checked
        )];
        for m in &report.mismatches {
            lines.push(match m.kind {
                MismatchKind::TrueButUnderivable => {
                    format!("  true but not derivable: {}", render(&m.formula))
                }
                MismatchKind::DerivableButFalse => {
                    format!("  derivable but false: {}", render(&m.formula))
                }
            });
        }
        Ok(Verdict {
            code: 1,
            lines,
            json,
        })
    }
}

fn necessitation(scenario_path: &Path, ck_depth: Option<u32>) -> CmdResult {
    let scenario = load_scenario(scenario_path)?.scenario;
    let k = ck_depth.unwrap_or(1);
    let prover = Prover::new();
    let report = prover
        .necessitation_check(&scenario, k)
        .map_err(prover_failure)?;
    match report.verdict {
        NecessitationVerdict::Pass => Ok(Verdict {
            code: 0,
            lines: vec![format!(
                "pass: all {} knowledge-prefix checks derivable at ck-depth {}",
                report.checked, report.ck_depth
            )],
            json: json!({
                "command": "necessitation",
                "verdict": "pass",
                "ck_depth": report.ck_depth,
                "checked": report.checked,
            }),
        }),
        NecessitationVerdict::Fail {
            formula,
            agent,
            countermodel,
        } => {
            let unknown = Formula::knows(agent, formula.clone());
            assert!(!countermodel.check(&unknown).unwrap_or(true));
            Ok(Verdict {
                code: 1,
                lines: vec![format!(
                    "fail at ck-depth {}: agent {agent} need not know {}",
                    report.ck_depth,
                    render(&formula)
                )],
                json: json!({
                    "command": "necessitation",
                    "verdict": "fail",
                    "ck_depth": report.ck_depth,
                    "checked": report.checked,
                    "witness": {"formula": render(&formula), "agent": agent},
                }),
            })
        }
    }
}

fn scenario_cmd(which: ScenarioCommand) -> CmdResult {
    let generator = |e: epilog_core::GeneratorError| input_error(e);
    let (name, scenario, model): (&str, Scenario, Option<ModelData>) = match &which {
        ScenarioCommand::Muddy { n, .. } => (
            "muddy",
            muddy_children(*n).map_err(generator)?,
            Some(cube_model(*n).map_err(generator)?.to_data()),
        ),
        ScenarioCommand::MuddyExplicit { n, k, .. } => (
            "muddy-explicit",
            muddy_explicit(*n, *k).map_err(generator)?,
            Some(cube_model(*n).map_err(generator)?.to_data()),
        ),
        ScenarioCommand::Coin { .. } => {
            let (s, m) = coin_scenario();
            ("coin", s, Some(m.to_data()))
        }
        ScenarioCommand::Centipede { .. } => ("centipede", centipede_lite(), None),
        ScenarioCommand::Trio { which, .. } => {
            let scenarios = trio();
            ("trio", scenarios[*which as usize - 1].clone(), None)
        }
    };
    let outs = match &which {
        ScenarioCommand::Muddy { outs, .. }
        | ScenarioCommand::MuddyExplicit { outs, .. }
        | ScenarioCommand::Coin { outs }
        | ScenarioCommand::Centipede { outs }
        | ScenarioCommand::Trio { outs, .. } => outs,
    };
    let text = render_scenario(&scenario);
    let mut lines = Vec::new();
    if let Some(path) = &outs.out {
        write_file(path, &text)?;
        lines.push(format!("wrote {}", path.display()));
    } else {
        lines.push(text.trim_end().to_string());
    }
    let mut written_model = None;
    if let Some(path) = &outs.out_model {
        let data = model
            .as_ref()
            .ok_or_else(|| input_error(format!("the {name} scenario has no companion model")))?;
        write_file(path, &data.to_json())?;
        lines.push(format!("wrote {}", path.display()));
        written_model = Some(path.display().to_string());
    }
    Ok(Verdict {
        code: 0,
        lines,
        json: json!({
            "command": "scenario",
            "name": name,
            "scenario": text,
            "out": outs.out.as_ref().map(|p| p.display().to_string()),
            "out_model": written_model,
        }),
    })
}

fn export(model_path: &Path, dot_path: &Path) -> CmdResult {
    let data = load_model(model_path)?;
    let (dot, worlds) = if data.designated.is_some() {
        let m = data.build_pointed().map_err(input_error)?;
        (m.to_dot(), m.model().world_count())
    } else {
        let m = data.build().map_err(input_error)?;
        (m.to_dot(), m.world_count())
    };
    write_file(dot_path, &dot)?;
    Ok(Verdict {
        code: 0,
        lines: vec![format!("wrote {} ({worlds} worlds)", dot_path.display())],
        json: json!({
            "command": "export",
            "dot": dot_path.display().to_string(),
            "worlds": worlds,
        }),
    })
}

fn run(command: Command) -> CmdResult {
    match command {
        Command::Prove {
            scenario,
            goal,
            ck_depth,
            out_model,
        } => prove(&scenario, goal, ck_depth, out_model),
        Command::Valid { agents, formula } => valid(agents, &formula),
        Command::CheckModel {
            model,
            world,
            formula,
        } => check_model(&model, &world, &formula),
        Command::IsModel {
            model,
            world,
            scenario,
        } => is_model(&model, &world, &scenario),
        Command::Announce {
            model,
            formula,
            out,
        } => announce(&model, &formula, &out),
        Command::Complete {
            scenario,
            atoms,
            depth,
            ck_depth,
            shape,
            budget,
        } => complete(&scenario, &atoms, depth, ck_depth, shape, budget),
        Command::Exact {
            scenario,
            model,
            world,
            atoms,
            depth,
            ck_depth,
            shape,
            budget,
        } => exact(&scenario, &model, &world, &atoms, depth, ck_depth, shape, budget),
        Command::Necessitation { scenario, ck_depth } => necessitation(&scenario, ck_depth),
        Command::Scenario { which } => scenario_cmd(which),
        Command::Export { model, dot } => export(&model, &dot),
    }
}

fn main() {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(verdict) => {
            if cli.json {
                println!("{}", serde_json::to_string_pretty(&verdict.json).unwrap());
            } else {
                for line in &verdict.lines {
                    println!("{line}");
                }
            }
            exit(verdict.code);
        }
        Err(failure) => {
            eprintln!("error: {}", failure.message);
            exit(failure.code);
        }
    }
}
