//! Registered geometric facts consumed by the decomposition engine.
//!
//! Four kinds of statement are supported: a containment `V_N ⊆ V_M` between matroid
//! varieties, the number of irreducible components of `V_M`, whether `M` is realizable, and a
//! cover `V_C(N) ⊆ V_1 ∪ … ∪ V_k` bounding a circuit variety by a union of matroid and circuit
//! varieties. Containments are keyed by the canonical form of the pair after deleting the loops
//! the two matroids share, so one entry covers every relabelling and every common set of extra
//! loops. Covers are keyed the same way by the subject with its loops deleted. Component counts
//! and realizability depend only on the simplification and are keyed by its canonical form.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::io::MatroidRecord;
use crate::model::Matroid;
use crate::symmetry::{automorphisms_of_matroid, canonical_form, canonical_labeling, canonical_tuple};
use crate::variety::NodeKind;

/// Largest automorphism group enumerated when transporting a cover.
const AUTOMORPHISM_LIMIT: u128 = 50_000;

/// The table shipped with the crate.
pub const SHIPPED_FACTS: &str = include_str!("../data/facts.json");

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FactType {
    Containment,
    Components,
    Realizable,
    Cover,
}

/// One member of the union on the right of a cover.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TargetRecord {
    pub variety: NodeKind,
    pub matroid: MatroidRecord,
}

/// One entry as stored on disk.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FactRecord {
    #[serde(rename = "type")]
    pub kind: FactType,
    pub subject: MatroidRecord,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub object: Option<MatroidRecord>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub targets: Option<Vec<TargetRecord>>,
    pub value: serde_json::Value,
    pub citation: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FactFile {
    pub version: u32,
    pub facts: Vec<FactRecord>,
}

/// The simple matroid obtained by deleting loops and keeping one point per parallel class.
pub fn simple_core(m: &Matroid) -> Matroid {
    match m.geometry() {
        Ok(g) if !m.classes().is_empty() => Matroid::from_configuration(&g),
        _ => Matroid::new(1, crate::PointSet::full(1), vec![], vec![]).expect("single loop is valid"),
    }
}

/// Deletes the loops `a` and `b` share and returns the canonical form of the pair.
pub fn pair_key(a: &Matroid, b: &Matroid) -> Result<(Matroid, Matroid)> {
    let common = a.loops() & b.loops();
    let (a2, b2) = if common.len() == a.d() {
        (a.clone(), b.clone())
    } else {
        (a.delete_points(common)?.0, b.delete_points(common)?.0)
    };
    let t = canonical_tuple(&[&a2, &b2])?;
    Ok((t[0].clone(), t[1].clone()))
}

fn single_key(m: &Matroid) -> Result<Matroid> {
    canonical_form(&simple_core(m))
}

/// Cover right-hand side: variety kinds and matroids.
pub type Targets = Vec<(NodeKind, Matroid)>;

/// Facts indexed for lookup.
#[derive(Clone, Debug, Default)]
pub struct FactTable {
    containment: BTreeMap<(Matroid, Matroid), String>,
    components: BTreeMap<Matroid, (u32, String)>,
    realizable: BTreeMap<Matroid, (bool, String)>,
    cover: BTreeMap<Matroid, Vec<(Targets, String)>>,
    records: Vec<FactRecord>,
}

impl FactTable {
    pub fn empty() -> Self {
        FactTable::default()
    }

    /// The table shipped with the crate.
    pub fn shipped() -> Self {
        FactTable::from_json(SHIPPED_FACTS).expect("shipped fact table is valid")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: FactFile =
            serde_json::from_str(text).map_err(|e| Error::ParseError(format!("fact table line {}: {e}", e.line())))?;
        let mut t = FactTable::empty();
        for r in file.facts {
            t.insert_record(r)?;
        }
        Ok(t)
    }

    pub fn to_json(&self) -> String {
        let file = FactFile { version: 1, facts: self.records.clone() };
        serde_json::to_string_pretty(&file).expect("fact file serializes") + "\n"
    }

    pub fn records(&self) -> &[FactRecord] {
        &self.records
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    fn insert_record(&mut self, r: FactRecord) -> Result<()> {
        let subject = Matroid::try_from(&r.subject)?;
        match r.kind {
            FactType::Containment => {
                let object = r
                    .object
                    .as_ref()
                    .ok_or_else(|| Error::ValidationError("containment fact without object".into()))?;
                let object = Matroid::try_from(object)?;
                self.add_containment(&subject, &object, &r.citation)?;
            }
            FactType::Components => {
                let n = r
                    .value
                    .as_u64()
                    .filter(|&n| n >= 1)
                    .ok_or_else(|| Error::ValidationError(format!("component count {} is not a positive integer", r.value)))?;
                self.add_components(&subject, n as u32, &r.citation)?;
            }
            FactType::Realizable => {
                let v = r
                    .value
                    .as_bool()
                    .ok_or_else(|| Error::ValidationError(format!("realizability value {} is not a boolean", r.value)))?;
                self.add_realizable(&subject, v, &r.citation)?;
            }
            FactType::Cover => {
                let targets = r
                    .targets
                    .as_ref()
                    .filter(|t| !t.is_empty())
                    .ok_or_else(|| Error::ValidationError("cover fact without targets".into()))?
                    .iter()
                    .map(|t| Ok((t.variety, Matroid::try_from(&t.matroid)?)))
                    .collect::<Result<Vec<_>>>()?;
                self.add_cover(&subject, &targets, &r.citation)?;
            }
        }
        Ok(())
    }

    /// Registers `V_sub ⊆ V_sup`. Rejects pairs violating the necessary condition `sub ≥ sup`.
    pub fn add_containment(&mut self, sub: &Matroid, sup: &Matroid, citation: &str) -> Result<()> {
        if !sup.dependency_leq(sub)? || sub == sup {
            return Err(Error::ValidationError(format!(
                "containment needs the contained matroid strictly above the container: {} vs {}",
                crate::io::matroid_to_json(sub),
                crate::io::matroid_to_json(sup)
            )));
        }
        let key = pair_key(sub, sup)?;
        if self.containment.insert(key.clone(), citation.to_string()).is_none() {
            self.records.push(FactRecord {
                kind: FactType::Containment,
                subject: MatroidRecord::from(&key.0),
                object: Some(MatroidRecord::from(&key.1)),
                targets: None,
                value: serde_json::Value::Bool(true),
                citation: citation.to_string(),
            });
        }
        Ok(())
    }

    pub fn add_components(&mut self, m: &Matroid, n: u32, citation: &str) -> Result<()> {
        let key = single_key(m)?;
        if self.components.insert(key.clone(), (n, citation.to_string())).is_none() {
            self.records.push(FactRecord {
                kind: FactType::Components,
                subject: MatroidRecord::from(&key),
                object: None,
                targets: None,
                value: serde_json::Value::from(n),
                citation: citation.to_string(),
            });
        }
        Ok(())
    }

    pub fn add_realizable(&mut self, m: &Matroid, v: bool, citation: &str) -> Result<()> {
        let key = single_key(m)?;
        if self.realizable.insert(key.clone(), (v, citation.to_string())).is_none() {
            self.records.push(FactRecord {
                kind: FactType::Realizable,
                subject: MatroidRecord::from(&key),
                object: None,
                targets: None,
                value: serde_json::Value::Bool(v),
                citation: citation.to_string(),
            });
        }
        Ok(())
    }

    /// Registers `V_C(subject) ⊆ ⋃ targets`. The statement is stored with the loops shared by
    /// the subject and every target deleted.
    pub fn add_cover(&mut self, subject: &Matroid, targets: &[(NodeKind, Matroid)], citation: &str) -> Result<()> {
        let mut common = subject.loops();
        for (_, t) in targets {
            if t.d() != subject.d() {
                return Err(Error::GroundSetMismatch(subject.d(), t.d()));
            }
            common = common & t.loops();
        }
        if targets.is_empty() {
            return Err(Error::ValidationError("cover without targets".into()));
        }
        if common.len() == subject.d() {
            return Err(Error::ValidationError("cover subject has no non-loop point".into()));
        }
        let (core, _) = subject.delete_points(common)?;
        let perm = canonical_labeling(&[&core])?;
        let key = core.relabel(&perm);
        let mut mapped: Targets = targets
            .iter()
            .map(|(k, t)| Ok((*k, t.delete_points(common)?.0.relabel(&perm))))
            .collect::<Result<_>>()?;
        mapped.sort();
        mapped.dedup();
        let entry = self.cover.entry(key.clone()).or_default();
        if !entry.iter().any(|(t, _)| *t == mapped) {
            entry.push((mapped.clone(), citation.to_string()));
            self.records.push(FactRecord {
                kind: FactType::Cover,
                subject: MatroidRecord::from(&key),
                object: None,
                targets: Some(
                    mapped.iter().map(|(k, t)| TargetRecord { variety: *k, matroid: MatroidRecord::from(t) }).collect(),
                ),
                value: serde_json::Value::Bool(true),
                citation: citation.to_string(),
            });
        }
        Ok(())
    }

    /// Registered covers applying to `m`, each in `m`'s labels with its citation.
    ///
    /// A cover stated for `N` also bounds `N` with extra loops, so every set of `m`'s loops is
    /// tried for deletion, largest first. Each statement is transported along every
    /// automorphism of its subject; every image is a valid bound and the caller picks one.
    pub fn cover(&self, m: &Matroid) -> Vec<(Targets, &str)> {
        let mut out: Vec<(Targets, &str)> = Vec::new();
        if self.cover.is_empty() {
            return out;
        }
        let loops = m.loops();
        for k in (0..=loops.len()).rev() {
            for drop in loops.subsets_of_size(k) {
                if drop.len() == m.d() {
                    continue;
                }
                let Ok((core, kept)) = m.delete_points(drop) else { continue };
                let Ok(perm) = canonical_labeling(&[&core]) else { continue };
                let key = core.relabel(&perm);
                let Some(entries) = self.cover.get(&key) else { continue };
                let mut inverse = vec![0u8; perm.len()];
                for (i, &p) in perm.iter().enumerate() {
                    inverse[p as usize - 1] = i as u8 + 1;
                }
                let group = automorphisms_of_matroid(&key);
                let elements =
                    group.elements(AUTOMORPHISM_LIMIT).unwrap_or_else(|| vec![(1..=key.d() as u8).collect()]);
                for (targets, citation) in entries {
                    for g in &elements {
                        let back: Vec<u8> = g.iter().map(|&x| inverse[x as usize - 1]).collect();
                        let image: Result<Targets> = targets
                            .iter()
                            .map(|(k, t)| Ok((*k, t.relabel(&back).embed_with_loops(m.d(), &kept)?)))
                            .collect();
                        let Ok(mut image) = image else { continue };
                        image.sort();
                        if !out.iter().any(|(t, _)| *t == image) {
                            out.push((image, citation.as_str()));
                        }
                    }
                }
            }
        }
        out
    }

    /// Citation for `V_sub ⊆ V_sup`, if registered.
    pub fn containment(&self, sub: &Matroid, sup: &Matroid) -> Option<&str> {
        if self.containment.is_empty() || sub.d() != sup.d() || !sup.leq_unchecked(sub) || sub == sup {
            return None;
        }
        let key = pair_key(sub, sup).ok()?;
        self.containment.get(&key).map(String::as_str)
    }

    pub fn components(&self, m: &Matroid) -> Option<(u32, &str)> {
        let key = single_key(m).ok()?;
        self.components.get(&key).map(|(n, c)| (*n, c.as_str()))
    }

    pub fn realizable(&self, m: &Matroid) -> Option<(bool, &str)> {
        let key = single_key(m).ok()?;
        self.realizable.get(&key).map(|(v, c)| (*v, c.as_str()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::library;
    use crate::pointset::PointSet;

    fn m(name: &str) -> Matroid {
        Matroid::from_configuration(&library::get(name).unwrap())
    }

    #[test]
    fn containment_needs_the_order() {
        let mut t = FactTable::empty();
        let f = m("fano");
        let f1 = f.add_loop(1).unwrap();
        assert!(matches!(t.add_containment(&f, &f1, "wrong way"), Err(Error::ValidationError(_))));
        t.add_containment(&f1, &f, "ok").unwrap();
        // Any relabelling, with or without a shared extra loop, finds the same entry.
        let perm = [2, 3, 1, 5, 6, 4, 7];
        assert_eq!(t.containment(&f1.relabel(&perm), &f.relabel(&perm)), Some("ok"));
        let kept = [1, 2, 3, 4, 5, 6, 7];
        let (f1e, fe) = (f1.embed_with_loops(8, &kept).unwrap(), f.embed_with_loops(8, &kept).unwrap());
        assert_eq!(t.containment(&f1e, &fe), Some("ok"));
        assert_eq!(t.containment(&f.add_loop(2).unwrap(), &f), Some("ok"));
        assert_eq!(t.containment(&f, &f), None);
    }

    #[test]
    fn json_round_trip() {
        let shipped = FactTable::shipped();
        assert!(!shipped.is_empty());
        let again = FactTable::from_json(&shipped.to_json()).unwrap();
        assert_eq!(again.to_json(), shipped.to_json());
        assert!(matches!(FactTable::from_json("{\"version\": 1, \"facts\": [{}]}"), Err(Error::ParseError(_))));
    }

    #[test]
    fn single_facts_ignore_loops_and_parallels() {
        let t = FactTable::shipped();
        assert_eq!(t.realizable(&m("fano")).map(|x| x.0), Some(false));
        assert_eq!(t.components(&m("maclane")).map(|x| x.0), Some(2));
        // A loop next to the MacLane configuration inside the affine plane.
        let a = m("affine3").add_loop(9).unwrap();
        assert_eq!(t.components(&a).map(|x| x.0), Some(2));
    }

    #[test]
    fn covers_lift_through_loops() {
        let mut t = FactTable::empty();
        let qs = m("qs");
        let u = Matroid::uniform_rank2(6, PointSet::full(6)).unwrap();
        t.add_cover(&qs, &[(NodeKind::MatroidVariety, qs.clone()), (NodeKind::MatroidVariety, u)], "qs").unwrap();
        let lifted = qs.embed_with_loops(8, &[1, 2, 3, 4, 5, 6]).unwrap().relabel(&[8, 2, 3, 4, 5, 6, 7, 1]);
        let found = t.cover(&lifted);
        assert!(!found.is_empty());
        for (targets, cite) in found {
            assert_eq!(cite, "qs");
            assert!(targets.iter().all(|(_, x)| x.loops() == lifted.loops()));
            assert!(targets.iter().any(|(_, x)| *x == lifted));
        }
    }
}
