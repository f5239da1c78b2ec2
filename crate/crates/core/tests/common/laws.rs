//! Algebraic laws as plain check functions, each paired with its input strategy.
//!
//! `properties.rs` runs them as ordinary proptest tests; the acceptance harness runs the same
//! checks through a `TestRunner` and reports the case counts.

use std::collections::BTreeSet;

use minmat::formula::{delta_extend, delta_f, merge_closure, plc_closure, Atom, Formula, Hypergraph};
use minmat::search::min_matroids;
use minmat::symmetry::{are_isomorphic, automorphisms, canonical_form, canonical_labeling, orbit_classify};
use minmat::xmatroid::{rank_table, ScanOrder, XSystem};
use minmat::{io, Configuration, Matroid, PointSet};
use proptest::prelude::*;
use proptest::test_runner::TestCaseError;

use super::*;

type Check = Result<(), TestCaseError>;

pub const CASES: u32 = 1000;

pub fn config() -> ProptestConfig {
    ProptestConfig { cases: CASES, max_global_rejects: 100_000, ..ProptestConfig::default() }
}

fn arb_edges(d: usize) -> impl Strategy<Value = Vec<PointSet>> {
    prop::collection::vec(prop::collection::btree_set(1..=d as u8, 3..=4), 0..6)
        .prop_map(|es| es.into_iter().map(PointSet::from_points).collect())
}

/// A hypergraph together with one above it: extra edges plus points added to existing edges.
pub fn hypergraph_pair() -> impl Strategy<Value = (Hypergraph, Hypergraph)> {
    (4usize..=8).prop_flat_map(|d| {
        (arb_edges(d), arb_edges(d), prop::collection::vec(1..=d as u8, 0..4)).prop_map(move |(base, extra, grow)| {
            let small = Hypergraph::new(d, base.clone()).unwrap();
            let mut bigger: Vec<PointSet> =
                base.iter().enumerate().map(|(i, e)| grow.get(i).map_or(*e, |&p| e.with(p))).collect();
            bigger.extend(extra);
            (small, Hypergraph::new(d, bigger).unwrap())
        })
    })
}

pub fn merge_input() -> impl Strategy<Value = ((Hypergraph, Hypergraph), Vec<(u8, u8)>)> {
    hypergraph_pair().prop_flat_map(|p| {
        let d = p.0.d() as u8;
        (Just(p), prop::collection::vec((1..=d, 1..=d), 0..10))
    })
}

pub fn merge_closure_laws(((small, big), forbid): ((Hypergraph, Hypergraph), Vec<(u8, u8)>)) -> Check {
    let c = merge_closure(&small, &forbid);
    prop_assert!(small.leq(&c), "not extensive");
    prop_assert_eq!(&merge_closure(&c, &forbid), &c, "not idempotent");
    prop_assert!(small.leq(&big));
    prop_assert!(c.leq(&merge_closure(&big, &forbid)), "not monotone");
    for (i, a) in c.edges().iter().enumerate() {
        for b in &c.edges()[i + 1..] {
            let inter = *a & *b;
            prop_assert!(!forbid.iter().any(|&(x, y)| x != y && inter.contains(x) && inter.contains(y)));
        }
    }
    Ok(())
}

pub fn plc_closure_laws((small, big): (Hypergraph, Hypergraph)) -> Check {
    let c = Hypergraph::from_configuration(&plc_closure(&small));
    prop_assert!(c.is_linear());
    prop_assert!(small.leq(&c), "not extensive");
    prop_assert_eq!(&Hypergraph::from_configuration(&plc_closure(&c)), &c, "not idempotent");
    prop_assert!(c.leq(&Hypergraph::from_configuration(&plc_closure(&big))), "not monotone");
    let d = small.d() as u8;
    let all: Vec<(u8, u8)> = (1..=d).flat_map(|a| (a + 1..=d).map(move |b| (a, b))).collect();
    prop_assert_eq!(merge_closure(&small, &all), c, "differs from forbidding every pair");
    Ok(())
}

pub fn delta_input() -> impl Strategy<Value = (Hypergraph, Vec<(bool, u8, u8)>)> {
    hypergraph_pair().prop_flat_map(|(h, _)| {
        let d = h.d() as u8;
        (Just(h), prop::collection::vec((any::<bool>(), 1..=d, 1..=d), 0..8))
    })
}

/// Extending a formula one atom at a time gives the same closure as computing it from scratch.
pub fn incremental_delta((h, atoms): (Hypergraph, Vec<(bool, u8, u8)>)) -> Check {
    let mut f = Formula::new(h.d()).unwrap();
    let mut delta = delta_f(&h, &f).unwrap();
    for (same, x, y) in atoms {
        let atom = if same { Atom::Same(x, y) } else { Atom::Apart(x, y) };
        if let Ok((g, next)) = delta_extend(&delta, &f, atom) {
            f = g;
            delta = next;
            prop_assert_eq!(&delta, &delta_f(&h, &f).unwrap());
        }
    }
    Ok(())
}

pub fn xsystem(max_d: usize) -> impl Strategy<Value = XSystem> {
    (3..=max_d, prop::collection::vec(any::<(u8, u8, u8)>(), 0..5))
        .prop_map(|(d, raw)| XSystem::new(d, triples(d, &raw)).unwrap())
}

/// Scan order does not change the fixed point, which is monotone, grows by at most one per
/// point and never exceeds the sequence bound.
pub fn v_x_laws(sys: XSystem) -> Check {
    let fwd = sys.v_x_with_order(ScanOrder::Forward).unwrap();
    let rev = sys.v_x_with_order(ScanOrder::Reverse).unwrap();
    prop_assert_eq!(&fwd, &rev);
    let val = sys.val_table().unwrap();
    for f in 0u32..1 << sys.d() {
        prop_assert!(fwd[f as usize] <= val[f as usize]);
        for p in 1..=sys.d() as u8 {
            let g = PointSet(f).with(p).0 as usize;
            prop_assert!(fwd[g] <= fwd[f as usize] + 1, "step above one at {:?} + {}", PointSet(f), p);
            prop_assert!(fwd[g] >= fwd[f as usize], "not monotone at {:?} + {}", PointSet(f), p);
        }
    }
    Ok(())
}

pub fn x_matroid_input() -> impl Strategy<Value = (Matroid, u64)> {
    enumerated_matroid(3, 6).prop_flat_map(|m| (Just(m), any::<u64>()))
}

/// For an enumerated matroid and a family of its 3-circuits: rank ≤ v_x ≤ val_x everywhere.
pub fn rank_below_v_x((m, pick): (Matroid, u64)) -> Check {
    let circuits: Vec<PointSet> =
        PointSet::full(m.d()).subsets_of_size(3).into_iter().filter(|t| m.is_circuit(*t)).collect();
    let family: Vec<PointSet> =
        circuits.iter().enumerate().filter(|(i, _)| pick >> (i % 64) & 1 == 1).map(|(_, t)| *t).collect();
    let sys = XSystem::new(m.d(), family).unwrap();
    let rank = rank_table(&m);
    let v = sys.v_x().unwrap();
    let val = sys.val_table().unwrap();
    for f in 0..rank.len() {
        prop_assert!(
            rank[f] <= v[f] && v[f] <= val[f],
            "at {:?}: rank {} v {} val {}",
            PointSet(f as u32),
            rank[f],
            v[f],
            val[f]
        );
    }
    Ok(())
}

pub fn leq_input() -> impl Strategy<Value = (Matroid, Matroid, u8)> {
    (3usize..=7).prop_flat_map(|d| {
        let all = all_matroids(d);
        (any::<prop::sample::Index>(), any::<prop::sample::Index>(), 1..=d as u8)
            .prop_map(move |(i, j, p)| (all[i.index(all.len())].clone(), all[j.index(all.len())].clone(), p))
    })
}

pub fn dependency_leq_brute((a, b, p): (Matroid, Matroid, u8)) -> Check {
    prop_assert_eq!(a.dependency_leq(&b).unwrap(), brute_leq(&a, &b));
    if let Ok(bigger) = a.add_loop(p) {
        prop_assert!(a.dependency_leq(&bigger).unwrap());
        prop_assert!(!bigger.dependency_leq(&a).unwrap());
    }
    Ok(())
}

pub fn relabel_input() -> impl Strategy<Value = (Matroid, Vec<u8>)> {
    arb_matroid(1, 9).prop_flat_map(|m| {
        let d = m.d();
        (Just(m), arb_permutation(d))
    })
}

pub fn canonical_invariance((m, perm): (Matroid, Vec<u8>)) -> Check {
    let moved = m.relabel(&perm);
    let cf = canonical_form(&m).unwrap();
    prop_assert_eq!(&canonical_form(&moved).unwrap(), &cf);
    prop_assert_eq!(&m.relabel(&canonical_labeling(&[&m]).unwrap()), &cf);
    prop_assert!(are_isomorphic(&m, &moved).unwrap());
    prop_assert_eq!(io::parse_matroid_json(&io::matroid_to_json(&m)).unwrap(), m);
    Ok(())
}

pub fn orbit_input() -> impl Strategy<Value = Configuration> {
    arb_rank3_configuration(3, 6)
}

/// Orbit classes of the (invariant) minimal set partition it, and each class is one orbit.
pub fn orbits_partition(c: Configuration) -> Check {
    let set = min_matroids(&c).unwrap().matroids();
    let g = automorphisms(&c);
    let orbits = orbit_classify(&g, &set);
    prop_assert_eq!(orbits.iter().map(|o| o.size()).sum::<usize>(), set.len());
    let elements = g.elements(10_000).expect("groups on six points are small");
    for o in &orbits {
        let images: BTreeSet<_> = elements.iter().map(|e| o.representative.relabel(e)).collect();
        let members: BTreeSet<_> = o.members.iter().cloned().collect();
        prop_assert_eq!(images, members, "class is not a single group orbit");
    }
    Ok(())
}
