//! Exhaustive enumeration of rank ≤ 3 matroids on small ground sets, used as ground truth.

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use crate::error::{Error, Result};
use crate::model::{Configuration, Matroid};
use crate::pointset::PointSet;
use crate::xmatroid::XSystem;

/// Limits on exhaustive enumeration.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EnumerationBudget {
    /// Largest ground set accepted. Values above 7 are clamped to 7.
    pub max_d: usize,
    /// Maximum number of matroids materialized.
    pub max_count: usize,
}

impl Default for EnumerationBudget {
    fn default() -> Self {
        EnumerationBudget { max_d: 6, max_count: 2_000_000 }
    }
}

impl EnumerationBudget {
    /// Budget admitting seven-point ground sets.
    pub fn with_d7() -> Self {
        EnumerationBudget { max_d: 7, ..Self::default() }
    }

    fn admit(&self, d: usize) -> Result<()> {
        let cap = self.max_d.min(7);
        if d > cap {
            return Err(Error::BudgetExceeded(format!("ground set {d} exceeds budget max_d = {cap}")));
        }
        Ok(())
    }
}

/// All sets of lines on `[k]` (each ≥ 3 points, pairwise meeting in ≤ 1 point), with edges in
/// lexicographic order and line sets in the order the backtracking produces them.
pub fn partial_linear_spaces(k: usize) -> Vec<Vec<PointSet>> {
    static CACHE: OnceLock<Mutex<HashMap<usize, Vec<Vec<PointSet>>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(v) = cache.lock().unwrap().get(&k) {
        return v.clone();
    }
    let full = PointSet::full(k);
    let mut cands: Vec<PointSet> = (3..=k).flat_map(|r| full.subsets_of_size(r)).collect();
    cands.sort();
    let mut out = Vec::new();
    let mut chosen = Vec::new();
    fn rec(i: usize, cands: &[PointSet], chosen: &mut Vec<PointSet>, out: &mut Vec<Vec<PointSet>>) {
        out.push(chosen.clone());
        for j in i..cands.len() {
            let c = cands[j];
            if chosen.iter().all(|l| (*l & c).len() <= 1) {
                chosen.push(c);
                rec(j + 1, cands, chosen, out);
                chosen.pop();
            }
        }
    }
    rec(0, &cands, &mut chosen, &mut out);
    cache.lock().unwrap().insert(k, out.clone());
    out
}

/// Set partitions of `s` in restricted-growth order; classes are listed by smallest member.
pub fn set_partitions(s: PointSet) -> Vec<Vec<PointSet>> {
    let pts = s.to_vec();
    let mut out = Vec::new();
    let mut blocks: Vec<PointSet> = Vec::new();
    fn rec(i: usize, pts: &[u8], blocks: &mut Vec<PointSet>, out: &mut Vec<Vec<PointSet>>) {
        if i == pts.len() {
            out.push(blocks.clone());
            return;
        }
        for b in 0..blocks.len() {
            blocks[b].insert(pts[i]);
            rec(i + 1, pts, blocks, out);
            blocks[b].remove(pts[i]);
        }
        blocks.push(PointSet::singleton(pts[i]));
        rec(i + 1, pts, blocks, out);
        blocks.pop();
    }
    rec(0, &pts, &mut blocks, &mut out);
    out
}

/// Calls `f` on every rank ≤ 3 matroid on `[d]`: loop sets by ascending bitmask, partitions
/// in restricted-growth order, then line sets.
pub fn for_each_matroid<F: FnMut(Matroid)>(d: usize, mut f: F) {
    for lbits in 0..(1u32 << d) {
        let loops = PointSet(lbits);
        let rest = PointSet::full(d) - loops;
        for classes in set_partitions(rest) {
            for lines in partial_linear_spaces(classes.len()) {
                f(Matroid::new(d, loops, classes.clone(), lines).expect("enumerated matroid is valid"));
            }
        }
    }
}

/// Every configuration on `[d]`, including those of rank below three.
pub fn all_configurations(d: usize) -> Vec<Configuration> {
    partial_linear_spaces(d)
        .into_iter()
        .map(|lines| Configuration::from_sets(d, lines).expect("enumerated configuration is valid"))
        .collect()
}

/// Bit `i` records whether the `i`-th subset of size 1–3 is dependent; ordering of the
/// dependency families then becomes containment of bitmasks.
pub fn dependency_signature(m: &Matroid) -> u64 {
    let d = m.d();
    assert!(d <= 7, "signatures cover ground sets of at most seven points");
    let full = PointSet::full(d);
    let mut sig = 0u64;
    let mut i = 0;
    for k in 1..=3 {
        for s in full.subsets_of_size(k) {
            if m.is_dependent(s) {
                sig |= 1 << i;
            }
            i += 1;
        }
    }
    sig
}

fn enumerate_filtered<P: Fn(&Matroid) -> bool>(d: usize, budget: &EnumerationBudget, keep: P) -> Result<Vec<Matroid>> {
    budget.admit(d)?;
    let mut out = Vec::new();
    let mut overflow = false;
    for_each_matroid(d, |n| {
        if !overflow && keep(&n) {
            if out.len() >= budget.max_count {
                overflow = true;
            } else {
                out.push(n);
            }
        }
    });
    if overflow {
        return Err(Error::BudgetExceeded(format!("more than {} matroids", budget.max_count)));
    }
    Ok(out)
}

/// Every rank ≤ 3 matroid strictly above `m`.
pub fn enumerate_above(m: &Matroid, budget: &EnumerationBudget) -> Result<Vec<Matroid>> {
    budget.admit(m.d())?;
    let base = dependency_signature(m);
    enumerate_filtered(m.d(), budget, |n| {
        let s = dependency_signature(n);
        s != base && s & base == base
    })
}

/// Minimal elements of a family by signature containment, smallest signatures first.
fn minimal_by_signature(items: Vec<Matroid>) -> Vec<Matroid> {
    let mut tagged: Vec<(u64, Matroid)> = items.into_iter().map(|n| (dependency_signature(&n), n)).collect();
    tagged.sort_by_key(|(s, n)| (s.count_ones(), n.clone()));
    let mut mins: Vec<(u64, Matroid)> = Vec::new();
    for (s, n) in tagged {
        if !mins.iter().any(|(t, _)| s & t == *t) {
            mins.push((s, n));
        }
    }
    let mut out: Vec<Matroid> = mins.into_iter().map(|(_, n)| n).collect();
    out.sort();
    out
}

/// Minimal matroids strictly above `m`, by exhaustive enumeration.
pub fn brute_minimal(m: &Matroid, budget: &EnumerationBudget) -> Result<Vec<Matroid>> {
    Ok(minimal_by_signature(enumerate_above(m, budget)?))
}

/// Minimal matroids of rank ≤ 3 in which every member of the family is a circuit.
pub fn brute_minimal_x(sys: &XSystem, budget: &EnumerationBudget) -> Result<Vec<Matroid>> {
    let family = sys.family().to_vec();
    let all = enumerate_filtered(sys.d(), budget, |n| family.iter().all(|x| n.is_circuit(*x)))?;
    Ok(minimal_by_signature(all))
}
