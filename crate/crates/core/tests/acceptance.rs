//! End-to-end acceptance checks for the bundled scenarios. Each test states
//! one headline behaviour of the workbench, asserts the exact verdicts and
//! enforces a wall-clock budget; run with `--nocapture` for one summary
//! line per criterion.

mod common;

use std::time::{Duration, Instant};

use common::small_formula;
use epilog_core::{
    at_least_one_muddy, centipede_lite, coin_scenario, cube_model, exact_check, muddy_children,
    muddy_children_instance, muddy_explicit, muddy_explicit_before_announcement, parse_formula,
    render, trio, CompletenessVerdict, DerivabilityResult, Formula, FragmentShape, FragmentSpec,
    MismatchKind, NecessitationVerdict, PointedModel, Prover, WorldVector,
};
use proptest::prelude::*;
use proptest::test_runner::{Config, TestRunner};

fn assert_within(start: Instant, budget: Duration, label: &str) {
    let elapsed = start.elapsed();
    assert!(
        elapsed < budget,
        "{label} took {elapsed:?}, budget {budget:?}"
    );
    println!("acceptance: {label} ok in {elapsed:?}");
}

fn knows(agent: u32, f: Formula) -> Formula {
    Formula::knows(agent, f)
}

#[test]
fn c1_one_agents_knowledge_stays_private() {
    let start = Instant::now();
    let p = Prover::new();
    let m = Formula::atom("m");
    let hyps = [knows(1, m.clone())];

    assert!(p.derives(&hyps, &m).unwrap().is_derivable());
    assert!(p
        .derives(&hyps, &knows(1, knows(1, m.clone())))
        .unwrap()
        .is_derivable());

    let goal = knows(2, m.clone());
    match p.derives(&hyps, &goal).unwrap() {
        DerivabilityResult::NotDerivable { countermodel, .. } => {
            assert!(countermodel.check(&hyps[0]).unwrap());
            assert!(!countermodel.check(&goal).unwrap());
        }
        other => panic!("expected a countermodel, got {other:?}"),
    }
    assert_within(start, Duration::from_secs(1), "one agent's knowledge stays private");
}

#[test]
fn c2_completeness_separates_fact_mutual_and_common_knowledge() {
    let start = Instant::now();
    let p = Prover::new();
    let [fact, mutual, common] = trio();
    let fragment = FragmentSpec {
        atoms: vec!["m".to_string()],
        agent_count: 2,
        max_modal_depth: 2,
        shape: FragmentShape::KOverBooleans,
        size_budget: 512,
    };
    let m = Formula::atom("m");

    let r1 = p.completeness_check(&fact, &fragment, 4).unwrap();
    match r1.verdict {
        CompletenessVerdict::Incomplete { ref witness, .. } => {
            assert_eq!(witness, &knows(1, m.clone()))
        }
        ref other => panic!("expected incompleteness, got {other:?}"),
    }

    let r2 = p.completeness_check(&mutual, &fragment, 4).unwrap();
    match r2.verdict {
        CompletenessVerdict::Incomplete { ref witness, .. } => {
            assert_eq!(witness, &knows(2, knows(1, m.clone())))
        }
        ref other => panic!("expected incompleteness, got {other:?}"),
    }

    let r3 = p.completeness_check(&common, &fragment, 4).unwrap();
    assert!(matches!(r3.verdict, CompletenessVerdict::Complete));
    assert_within(
        start,
        Duration::from_secs(30),
        "completeness separates fact, mutual and common knowledge",
    );
}

#[test]
fn c3_necessitation_passes_only_for_introspectively_closed_sets() {
    let start = Instant::now();
    let p = Prover::new();
    let [fact, mutual, common] = trio();
    let m = Formula::atom("m");

    let r = p.necessitation_check(&common, 1).unwrap();
    assert!(matches!(r.verdict, NecessitationVerdict::Pass));

    let r = p.necessitation_check(&muddy_children(2).unwrap(), 1).unwrap();
    assert!(matches!(r.verdict, NecessitationVerdict::Pass));

    match p.necessitation_check(&fact, 1).unwrap().verdict {
        NecessitationVerdict::Fail { formula, agent, countermodel } => {
            assert_eq!(formula, m.clone());
            assert_eq!(agent, 1);
            assert!(countermodel.check(&m).unwrap());
            assert!(!countermodel.check(&knows(1, m.clone())).unwrap());
        }
        other => panic!("expected a failure witness, got {other:?}"),
    }

    let mutual_assumption = Formula::and(knows(1, m.clone()), knows(2, m.clone()));
    match p.necessitation_check(&mutual, 1).unwrap().verdict {
        NecessitationVerdict::Fail { formula, .. } => assert_eq!(formula, mutual_assumption),
        other => panic!("expected a failure witness, got {other:?}"),
    }
    assert_within(
        start,
        Duration::from_secs(5),
        "necessitation passes only for introspectively closed sets",
    );
}

#[test]
fn c4_cube_model_is_exact_for_every_assignment() {
    let start = Instant::now();
    let p = Prover::new();
    let q2 = cube_model(2).unwrap();
    let fragment = FragmentSpec {
        atoms: vec!["m1".to_string(), "m2".to_string()],
        agent_count: 2,
        max_modal_depth: 1,
        shape: FragmentShape::KOverBooleans,
        size_budget: 128,
    };

    for name in ["00", "01", "10", "11"] {
        let u = WorldVector::from_name(name).unwrap();
        let scenario = muddy_children_instance(2, &u).unwrap();
        let pointed = PointedModel::new(q2.clone(), name).unwrap();
        let report = exact_check(&p, &scenario, &pointed, &fragment, 3).unwrap();
        assert!(
            report.is_exact(),
            "assignment {name}: {} disagreements, first {:?}",
            report.mismatches.len(),
            report.mismatches.first()
        );
        assert_eq!(report.checked, 128);
    }
    assert_within(
        start,
        Duration::from_secs(180),
        "cube model is exact for every assignment",
    );
}

#[test]
fn c5_announcement_chain_isolates_the_actual_world() {
    let start = Instant::now();
    let q2 = cube_model(2).unwrap();
    let pointed = PointedModel::new(q2, "11").unwrap();
    assert_eq!(pointed.model().world_count(), 4);

    let after_father = pointed.announce(&at_least_one_muddy(2)).unwrap();
    assert_eq!(after_father.model().world_count(), 3);

    let nobody_knows_own = Formula::conj((1..=2).map(|i| {
        let mi = Formula::atom(format!("m{i}"));
        Formula::not(Formula::or(
            knows(i, mi.clone()),
            knows(i, Formula::not(mi)),
        ))
    }));
    let after_silence = after_father.announce(&nobody_knows_own).unwrap();
    assert_eq!(after_silence.model().worlds(), &["11".to_string()]);
    assert_eq!(after_silence.world(), "11");

    let both_know = Formula::and(
        knows(1, Formula::atom("m1")),
        knows(2, Formula::atom("m2")),
    );
    assert!(after_silence.check(&both_know).unwrap());
    assert_within(
        start,
        Duration::from_secs(1),
        "announcement chain isolates the actual world",
    );
}

#[test]
fn c6_coin_model_carries_truths_its_description_cannot_derive() {
    let start = Instant::now();
    let p = Prover::new();
    let (scenario, model) = coin_scenario();
    assert!(model.is_model_of(&scenario).unwrap());

    let fragment = FragmentSpec {
        atoms: vec!["h".to_string()],
        agent_count: 2,
        max_modal_depth: 2,
        shape: FragmentShape::KOverBooleans,
        size_budget: 512,
    };
    let report = exact_check(&p, &scenario, &model, &fragment, 2).unwrap();

    let h = Formula::atom("h");
    let alice_knows_bobs_ignorance = knows(1, Formula::not(knows(2, h.clone())));
    let bob_knows_alice_knows_whether = knows(
        2,
        Formula::or(knows(1, h.clone()), knows(1, Formula::not(h.clone()))),
    );
    for wanted in [&alice_knows_bobs_ignorance, &bob_knows_alice_knows_whether] {
        assert!(
            report.mismatches.iter().any(|mis| {
                mis.kind == MismatchKind::TrueButUnderivable && &mis.formula == wanted
            }),
            "missing true-but-underivable witness {wanted}"
        );
    }
    assert!(report
        .mismatches
        .iter()
        .all(|mis| mis.kind == MismatchKind::TrueButUnderivable));
    assert_within(
        start,
        Duration::from_secs(10),
        "coin model carries truths its description cannot derive",
    );
}

#[test]
fn c7_count_announcement_settles_every_childs_state() {
    let start = Instant::now();
    let p = Prover::new();

    let before = muddy_explicit_before_announcement(2).unwrap();
    let k1m1 = knows(1, Formula::atom("m1"));
    for goal in [k1m1.clone(), Formula::not(k1m1)] {
        assert!(matches!(
            p.derives_scenario(&before, &goal, 1).unwrap(),
            DerivabilityResult::NotDerivable { .. }
        ));
    }

    for (n, count) in [(2, 2), (3, 2)] {
        let s = muddy_explicit(n, count).unwrap();
        let everyone_settled = Formula::conj((1..=n).map(|i| {
            let mi = Formula::atom(format!("m{i}"));
            Formula::or(knows(i, mi.clone()), knows(i, Formula::not(mi)))
        }));
        assert!(
            p.derives_scenario(&s, &everyone_settled, 1)
                .unwrap()
                .is_derivable(),
            "{count} of {n} left someone unsettled"
        );
    }
    assert_within(
        start,
        Duration::from_secs(30),
        "count announcement settles every child's state",
    );
}

#[test]
fn c8_backward_induction_needs_no_cross_knowledge() {
    let start = Instant::now();
    let p = Prover::new();
    let s = centipede_lite();
    let d = |i: u32| Formula::atom(format!("d{i}"));

    let all_down = Formula::conj([d(1), d(2), d(3)]);
    assert!(p.derives_scenario(&s, &all_down, 0).unwrap().is_derivable());

    let second_knows_last = knows(2, d(3));
    for goal in [second_knows_last.clone(), Formula::not(second_knows_last)] {
        assert!(matches!(
            p.derives_scenario(&s, &goal, 0).unwrap(),
            DerivabilityResult::NotDerivable { .. }
        ));
    }

    let fragment = FragmentSpec {
        atoms: vec!["d3".to_string()],
        agent_count: 2,
        max_modal_depth: 1,
        shape: FragmentShape::KOverLiterals,
        size_budget: 64,
    };
    let report = p.completeness_check(&s, &fragment, 0).unwrap();
    assert!(matches!(
        report.verdict,
        CompletenessVerdict::Incomplete { .. }
    ));
    assert_within(
        start,
        Duration::from_secs(5),
        "backward induction needs no cross-knowledge",
    );
}

// The full randomized suites live in tests/properties.rs and run in the
// same invocation; this one repeats two of them at 200 fresh cases so the
// acceptance target is self-contained.
#[test]
fn c9_randomized_suites_hold() {
    let start = Instant::now();
    let config = Config {
        cases: 200,
        ..Config::default()
    };

    let mut runner = TestRunner::new(config.clone());
    runner
        .run(&small_formula(3), |f| {
            let text = render(&f);
            prop_assert_eq!(parse_formula(&text, 2).unwrap(), f);
            Ok(())
        })
        .unwrap();

    let mut runner = TestRunner::new(config);
    let p = Prover::new();
    runner
        .run(
            &(small_formula(2), small_formula(2)),
            |(a, f)| {
                let direct = p.derives(&[a.clone()], &f).unwrap().is_derivable();
                let conditional = p
                    .derives(&[], &Formula::implies(a, f))
                    .unwrap()
                    .is_derivable();
                prop_assert_eq!(direct, conditional);
                Ok(())
            },
        )
        .unwrap();
    assert_within(start, Duration::from_secs(60), "randomized suites hold");
}
