//! Decomposition behaviour that holds with or without the registered facts.

use std::collections::BTreeSet;

use minmat::facts::FactTable;
use minmat::variety::{decompose, NodeKind, DEFAULT_DEPTH};
use minmat::{library, Matroid};

fn component_matroids(name: &str, facts: &FactTable) -> (bool, BTreeSet<Matroid>) {
    let d = decompose(&library::get(name).unwrap(), facts, DEFAULT_DEPTH).unwrap();
    (d.complete, d.components.into_iter().map(|c| c.matroid).collect())
}

#[test]
fn facts_only_remove_or_split_components() {
    let shipped = FactTable::shipped();
    let empty = FactTable::empty();
    for name in ["fano", "maclane", "affine3", "k9", "qs", "three-concurrent-lines"] {
        let (complete, bare) = component_matroids(name, &empty);
        assert!(complete, "{name} should finish without facts");
        let (_, with_facts) = component_matroids(name, &shipped);
        let missing: Vec<_> = with_facts.difference(&bare).collect();
        assert!(missing.is_empty(), "{name}: {} components only appear with facts", missing.len());
    }
}

#[test]
fn components_are_matroid_varieties_above_the_root() {
    let facts = FactTable::shipped();
    for n in library::all() {
        let d = decompose(&n.configuration, &facts, DEFAULT_DEPTH).unwrap();
        let root = Matroid::from_configuration(&n.configuration);
        for c in &d.components {
            assert_eq!(c.kind, NodeKind::MatroidVariety);
            assert!(root.dependency_leq(&c.matroid).unwrap(), "{}", n.name);
        }
        let distinct: BTreeSet<_> = d.components.iter().map(|c| (&c.matroid, &c.label)).collect();
        assert_eq!(distinct.len(), d.components.len(), "{} lists a component twice", n.name);
    }
}

#[test]
fn repeated_runs_agree() {
    let facts = FactTable::shipped();
    for name in ["maclane", "pappus"] {
        let c = library::get(name).unwrap();
        let a = decompose(&c, &facts, DEFAULT_DEPTH).unwrap();
        let b = decompose(&c, &facts, DEFAULT_DEPTH).unwrap();
        assert_eq!(a.components, b.components);
        assert_eq!(a.removed, b.removed);
    }
}

#[test]
fn shallow_limits_are_reported() {
    let d = decompose(&library::get("pappus").unwrap(), &FactTable::shipped(), 1).unwrap();
    assert!(!d.complete);
    assert!(d.check_complete().is_err());
}
