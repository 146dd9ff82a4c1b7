//! Shared helpers for the integration suites: random formula strategies and
//! a brute-force pointed-model enumerator used as an independent oracle.
//! The oracle only ever evaluates formulas on explicit models; it never
//! calls the prover.

#![allow(dead_code)]

use std::collections::BTreeMap;

use epilog_core::{Formula, ModelData, PointedModel};
use proptest::prelude::*;

pub fn two_atoms() -> Vec<String> {
    vec!["p".to_string(), "q".to_string()]
}

/// Random formulas over atoms p, q and agents 1, 2. `depth` bounds the
/// connective nesting, so modal depth stays within it too.
pub fn small_formula(depth: u32) -> impl Strategy<Value = Formula> {
    let leaf = prop_oneof![
        4 => prop::sample::select(vec!["p", "q"]).prop_map(Formula::atom),
        1 => Just(Formula::Top),
        1 => Just(Formula::Bottom),
    ];
    leaf.prop_recursive(depth, 16, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(Formula::not),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::and(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::or(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::implies(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::iff(a, b)),
            (1u32..=2, inner).prop_map(|(i, f)| Formula::knows(i, f)),
        ]
    })
}

pub fn formula_set(len: usize, depth: u32) -> impl Strategy<Value = Vec<Formula>> {
    prop::collection::vec(small_formula(depth), 0..=len)
}

/// All partitions of {0..k-1} as restricted growth strings: entry i names
/// the block of world i, blocks numbered by first appearance.
pub fn all_partitions(k: usize) -> Vec<Vec<usize>> {
    fn extend(prefix: &mut Vec<usize>, k: usize, out: &mut Vec<Vec<usize>>) {
        if prefix.len() == k {
            out.push(prefix.clone());
            return;
        }
        let top = prefix.iter().copied().max().unwrap_or(0);
        for b in 0..=top + 1 {
            prefix.push(b);
            extend(prefix, k, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    extend(&mut vec![0], k, &mut out);
    out
}

fn blocks_from_rgs(rgs: &[usize]) -> Vec<Vec<String>> {
    let count = rgs.iter().copied().max().unwrap() + 1;
    let mut blocks = vec![Vec::new(); count];
    for (world, &b) in rgs.iter().enumerate() {
        blocks[b].push(format!("w{world}"));
    }
    blocks
}

/// A concrete two-agent pointed model: `val_mask` bit `world * atoms + atom`
/// sets atom truth, partitions come as restricted growth strings.
pub fn build_model(
    atoms: &[String],
    worlds: usize,
    part1: &[usize],
    part2: &[usize],
    val_mask: u32,
    designated: usize,
) -> PointedModel {
    let names: Vec<String> = (0..worlds).map(|i| format!("w{i}")).collect();
    let valuation: BTreeMap<String, Vec<String>> = (0..worlds)
        .map(|w| {
            let truths = atoms
                .iter()
                .enumerate()
                .filter(|(a, _)| val_mask & (1 << (w * atoms.len() + a)) != 0)
                .map(|(_, name)| name.clone())
                .collect();
            (names[w].clone(), truths)
        })
        .collect();
    let mut partitions = BTreeMap::new();
    partitions.insert("1".to_string(), blocks_from_rgs(part1));
    partitions.insert("2".to_string(), blocks_from_rgs(part2));
    let data = ModelData {
        agents: 2,
        atoms: atoms.to_vec(),
        worlds: names.clone(),
        valuation,
        partitions,
        designated: Some(names[designated].clone()),
    };
    data.build_pointed().expect("enumerated model is well formed")
}

/// Exhaustive search for a pointed model of all `fs` with at most
/// `max_worlds` worlds. Fixing the designated world to w0 loses nothing:
/// every labelling of valuations and partitions is enumerated, so any
/// pointed model this size has an isomorphic copy with w0 designated.
pub fn oracle_satisfiable(fs: &[Formula], atoms: &[String], max_worlds: usize) -> Option<PointedModel> {
    for k in 1..=max_worlds {
        let parts = all_partitions(k);
        for part1 in &parts {
            for part2 in &parts {
                for val_mask in 0..(1u32 << (k * atoms.len())) {
                    let m = build_model(atoms, k, part1, part2, val_mask, 0);
                    if fs.iter().all(|f| m.check(f).unwrap()) {
                        return Some(m);
                    }
                }
            }
        }
    }
    None
}

/// Strategy for random pointed models: up to `max_worlds` worlds over
/// atoms p, q, any designated world.
pub fn arbitrary_model(max_worlds: usize) -> impl Strategy<Value = PointedModel> {
    (1..=max_worlds).prop_flat_map(|k| {
        let parts = all_partitions(k);
        (
            prop::sample::select(parts.clone()),
            prop::sample::select(parts),
            0..(1u32 << (k * 2)),
            0..k,
        )
            .prop_map(move |(p1, p2, mask, designated)| {
                build_model(&two_atoms(), k, &p1, &p2, mask, designated)
            })
    })
}
