//! Random generators shared by the integration tests.
#![allow(dead_code)]

pub mod laws;

use std::sync::OnceLock;

use minmat::formula::{plc_closure, Hypergraph};
use minmat::oracle::for_each_matroid;
use minmat::{Configuration, Matroid, PointSet};
use proptest::prelude::*;

pub fn ps(v: &[u8]) -> PointSet {
    PointSet::from_points(v.iter().copied())
}

/// Triples over `[n]` drawn from arbitrary index triples; degenerate ones are skipped.
pub fn triples(n: usize, raw: &[(u8, u8, u8)]) -> Vec<PointSet> {
    raw.iter()
        .map(|&(a, b, c)| ps(&[a % n as u8 + 1, b % n as u8 + 1, c % n as u8 + 1]))
        .filter(|t| t.len() == 3)
        .collect()
}

/// Configuration on `[d]`: the closure of a few random triples.
pub fn configuration_from(d: usize, raw: &[(u8, u8, u8)]) -> Configuration {
    let h = Hypergraph::new(d, triples(d, raw)).expect("triples are valid edges");
    plc_closure(&h)
}

pub fn arb_configuration(min_d: usize, max_d: usize) -> impl Strategy<Value = Configuration> {
    (min_d..=max_d, prop::collection::vec(any::<(u8, u8, u8)>(), 0..7)).prop_map(|(d, raw)| configuration_from(d, &raw))
}

/// Rank-3 configurations only; the generator retries by adding a triangle when needed.
pub fn arb_rank3_configuration(min_d: usize, max_d: usize) -> impl Strategy<Value = Configuration> {
    arb_configuration(min_d.max(3), max_d).prop_filter("rank 3", |c| c.rank() == 3)
}

/// Matroid built from a labelling (0 = loop, otherwise a class tag) and random class triples.
pub fn matroid_from(d: usize, tags: &[u8], raw: &[(u8, u8, u8)]) -> Matroid {
    let mut loops = PointSet::EMPTY;
    let mut by_tag: std::collections::BTreeMap<u8, PointSet> = Default::default();
    for p in 1..=d as u8 {
        let t = tags[p as usize - 1] % (d as u8 + 1);
        if t == 0 {
            loops.insert(p);
        } else {
            by_tag.entry(t).or_default().insert(p);
        }
    }
    let classes: Vec<PointSet> = by_tag.into_values().collect();
    let k = classes.len();
    let lines = if k >= 3 { configuration_from(k, raw).lines().to_vec() } else { Vec::new() };
    Matroid::new(d, loops, classes, lines).expect("generated matroid is valid")
}

pub fn arb_matroid(min_d: usize, max_d: usize) -> impl Strategy<Value = Matroid> {
    (min_d..=max_d)
        .prop_flat_map(|d| (Just(d), prop::collection::vec(any::<u8>(), d), prop::collection::vec(any::<(u8, u8, u8)>(), 0..6)))
        .prop_map(|(d, tags, raw)| matroid_from(d, &tags, &raw))
}

pub fn arb_permutation(d: usize) -> impl Strategy<Value = Vec<u8>> {
    Just((1..=d as u8).collect::<Vec<u8>>()).prop_shuffle()
}

/// Every matroid of rank at most three on `[d]`, for `d ≤ 7`, enumerated once.
pub fn all_matroids(d: usize) -> &'static [Matroid] {
    static CACHE: OnceLock<Vec<Vec<Matroid>>> = OnceLock::new();
    &CACHE.get_or_init(|| {
        (0..=7)
            .map(|d| {
                let mut v = Vec::new();
                if d > 0 {
                    for_each_matroid(d, |m| v.push(m));
                }
                v
            })
            .collect()
    })[d]
}

/// A matroid from the exhaustive enumeration on `[d]` with `d` in the given range.
pub fn enumerated_matroid(min_d: usize, max_d: usize) -> impl Strategy<Value = Matroid> {
    (min_d..=max_d, any::<prop::sample::Index>()).prop_map(|(d, i)| {
        let all = all_matroids(d);
        all[i.index(all.len())].clone()
    })
}

/// Dependency containment checked subset by subset.
pub fn brute_leq(a: &Matroid, b: &Matroid) -> bool {
    (0u32..1 << a.d()).all(|s| !a.is_dependent(PointSet(s)) || b.is_dependent(PointSet(s)))
}
