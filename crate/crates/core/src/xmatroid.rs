//! Rank bounds for matroids in which a prescribed family of sets are all circuits.

use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::formula::{Formula, Hypergraph};
use crate::model::Matroid;
use crate::pointset::PointSet;
use crate::search::{formula_search, minimal_elements};

/// Largest ground set for which the full `v_x` table is built.
pub const MAX_TABLE_D: usize = 10;
/// Largest ground set for `val_x` queries.
pub const MAX_VAL_D: usize = 20;

/// A family `X` of subsets of `[d]`, each of size at least two.
#[derive(Debug)]
pub struct XSystem {
    d: usize,
    family: Vec<PointSet>,
    reach: OnceLock<Vec<i32>>,
    v_table: OnceLock<Vec<i32>>,
}

impl Clone for XSystem {
    fn clone(&self) -> Self {
        XSystem { d: self.d, family: self.family.clone(), reach: OnceLock::new(), v_table: OnceLock::new() }
    }
}

impl PartialEq for XSystem {
    fn eq(&self, other: &Self) -> bool {
        self.d == other.d && self.family == other.family
    }
}

/// Scan direction for the fixed-point updates. Both directions reach the same table.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ScanOrder {
    Forward,
    Reverse,
}

impl XSystem {
    pub fn new(d: usize, family: Vec<PointSet>) -> Result<Self> {
        if d > MAX_VAL_D {
            return Err(Error::GroundSetTooLarge { d, max: MAX_VAL_D });
        }
        let full = PointSet::full(d);
        for x in &family {
            if x.len() < 2 {
                return Err(Error::ValidationError(format!("member {x} of X has fewer than two points")));
            }
            if !x.is_subset(full) {
                return Err(Error::LabelOutOfRange { label: (*x - full).first().unwrap_or(0) as i64, d });
            }
        }
        let mut family = family;
        family.sort();
        family.dedup();
        Ok(XSystem { d, family, reach: OnceLock::new(), v_table: OnceLock::new() })
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn family(&self) -> &[PointSet] {
        &self.family
    }

    /// For every union `U` of a proper sequence, the longest such sequence (−1 if unreachable).
    fn reach(&self) -> &[i32] {
        self.reach.get_or_init(|| {
            let n = 1usize << self.d;
            let mut best = vec![-1i32; n];
            best[0] = 0;
            // Unions only grow along a sequence, so increasing bitmask order is topological.
            for u in 0..n {
                if best[u] < 0 {
                    continue;
                }
                let cur = PointSet(u as u32);
                for x in &self.family {
                    if !x.is_subset(cur) {
                        let v = (cur | *x).0 as usize;
                        best[v] = best[v].max(best[u] + 1);
                    }
                }
            }
            best
        })
    }

    /// Smallest value of `|F ∪ X₁ ∪ … ∪ X_k| − k` over proper sequences.
    pub fn val_x(&self, f: PointSet) -> i32 {
        let reach = self.reach();
        let mut best = f.len() as i32;
        for (u, &k) in reach.iter().enumerate() {
            if k > 0 {
                best = best.min((f | PointSet(u as u32)).len() as i32 - k);
            }
        }
        best
    }

    /// `val_x` for every subset, indexed by bitmask.
    pub fn val_table(&self) -> Result<Vec<i32>> {
        if self.d > MAX_TABLE_D {
            return Err(Error::GroundSetTooLarge { d: self.d, max: MAX_TABLE_D });
        }
        let reach = self.reach();
        let n = 1usize << self.d;
        let reachable: Vec<(u32, i32)> =
            reach.iter().enumerate().filter(|(_, &k)| k > 0).map(|(u, &k)| (u as u32, k)).collect();
        Ok((0..n)
            .map(|f| {
                let fs = PointSet(f as u32);
                reachable.iter().fold(fs.len() as i32, |acc, &(u, k)| acc.min((fs | PointSet(u)).len() as i32 - k))
            })
            .collect())
    }

    /// The refined fixed-point table `v_x`, indexed by bitmask.
    pub fn v_x(&self) -> Result<&[i32]> {
        if let Some(t) = self.v_table.get() {
            return Ok(t);
        }
        let t = self.v_x_with_order(ScanOrder::Forward)?;
        Ok(self.v_table.get_or_init(|| t))
    }

    /// Runs the fixed-point iteration scanning subsets in the given direction.
    pub fn v_x_with_order(&self, order: ScanOrder) -> Result<Vec<i32>> {
        let mut t = self.val_table()?;
        let d = self.d;
        let n = 1usize << d;
        // cap[I]: the largest amount rule (i) may subtract when A ∩ B = I, if some member contains I.
        let mut cap = vec![i32::MIN; n];
        for x in &self.family {
            let xb = x.0 as usize;
            let mut sub = xb;
            loop {
                let c = if sub == xb { x.len() as i32 - 1 } else { PointSet(sub as u32).len() as i32 };
                cap[sub] = cap[sub].max(c);
                if sub == 0 {
                    break;
                }
                sub = (sub - 1) & xb;
            }
        }
        let idx: Vec<usize> = match order {
            ScanOrder::Forward => (0..n).collect(),
            ScanOrder::Reverse => (0..n).rev().collect(),
        };
        loop {
            if sweep_union_rule(&mut t, &cap, &idx) {
                continue;
            }
            if sweep_superset_rule(&mut t, d, &idx) {
                continue;
            }
            if sweep_growth_rule(&mut t, d, &idx) {
                continue;
            }
            return Ok(t);
        }
    }

    /// Minimal matroids of rank ≤ 3 in which every member of `X` is a circuit.
    ///
    /// Runs the formula search from the hypergraph `X` with every pair inside a member kept
    /// apart, then keeps the candidates in which each member is a circuit. Loops never occur in
    /// a minimal answer: a loop at a point outside every member can always be replaced by a
    /// point in general position, which gives a strictly smaller matroid with the same circuits
    /// from `X`.
    pub fn minimal_x_matroids_rank3(&self) -> Result<Vec<Matroid>> {
        for x in &self.family {
            if x.len() != 3 {
                return Err(Error::XMemberNotTriple(x.to_vec()));
            }
        }
        if self.d < 3 {
            return Err(Error::ValidationError("minimal X-matroids need d ≥ 3".into()));
        }
        let mut seed = Formula::new(self.d)?;
        for x in &self.family {
            let v = x.to_vec();
            for i in 0..3 {
                for j in i + 1..3 {
                    seed = seed.with_forbid(v[i], v[j])?;
                }
            }
        }
        let hyper = Hypergraph::new(self.d, self.family.clone())?;
        let cands = formula_search(self.d, &hyper, seed, false)?;
        let ok: Vec<Matroid> = cands
            .into_iter()
            .map(|(m, _)| m)
            .filter(|m| self.family.iter().all(|x| m.is_circuit(*x)))
            .collect();
        Ok(minimal_elements(ok))
    }

    /// `subset-bitmask,value` lines for a table.
    pub fn dump(table: &[i32]) -> String {
        table.iter().enumerate().map(|(i, v)| format!("{i},{v}\n")).collect()
    }
}

fn sweep_union_rule(t: &mut [i32], cap: &[i32], idx: &[usize]) -> bool {
    let mut changed = false;
    for &a in idx {
        for &b in idx {
            let c = cap[a & b];
            if c == i32::MIN {
                continue;
            }
            let bound = t[a] + t[b] - c;
            if t[a | b] > bound {
                t[a | b] = bound;
                changed = true;
            }
        }
    }
    changed
}

fn sweep_superset_rule(t: &mut [i32], d: usize, idx: &[usize]) -> bool {
    let mut changed = false;
    for &a in idx {
        for y in 0..d {
            let b = a | (1 << y);
            if b != a && t[a] > t[b] {
                t[a] = t[b];
                changed = true;
            }
        }
    }
    changed
}

fn sweep_growth_rule(t: &mut [i32], d: usize, idx: &[usize]) -> bool {
    let mut changed = false;
    for &a in idx {
        for y in 0..d {
            if a & (1 << y) != 0 {
                let b = a & !(1 << y);
                if t[a] > t[b] + 1 {
                    t[a] = t[b] + 1;
                    changed = true;
                }
            }
        }
    }
    changed
}

/// First pair `(A, B)` with `f(A ∪ B) + f(A ∩ B) > f(A) + f(B)`, if any.
pub fn submodularity_violation(table: &[i32], d: usize) -> Option<(PointSet, PointSet)> {
    let n = 1usize << d;
    for a in 0..n {
        for b in a + 1..n {
            if table[a | b] + table[a & b] > table[a] + table[b] {
                return Some((PointSet(a as u32), PointSet(b as u32)));
            }
        }
    }
    None
}

pub fn is_submodular(table: &[i32], d: usize) -> bool {
    submodularity_violation(table, d).is_none()
}

/// Rank function of a matroid as a table over all subsets.
pub fn rank_table(m: &Matroid) -> Vec<i32> {
    (0..1u32 << m.d()).map(|s| m.rank_of(PointSet(s)) as i32).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ps(v: &[u8]) -> PointSet {
        PointSet::from_points(v.iter().copied())
    }

    fn example() -> XSystem {
        XSystem::new(7, vec![ps(&[1, 4, 5]), ps(&[2, 4, 5]), ps(&[1, 6, 7]), ps(&[2, 6, 7]), ps(&[1, 2, 3])]).unwrap()
    }

    #[test]
    fn val_basics() {
        let empty = XSystem::new(5, vec![]).unwrap();
        assert_eq!(empty.val_x(ps(&[1, 2, 4])), 3);
        let one = XSystem::new(3, vec![ps(&[1, 2, 3])]).unwrap();
        assert_eq!(one.val_x(ps(&[1, 2, 3])), 2);
        assert_eq!(example().val_x(PointSet::full(7)), 3);
    }

    #[test]
    fn refined_bound_on_example() {
        let sys = example();
        let v = sys.v_x().unwrap();
        assert_eq!(v[127], 2);
        assert_eq!(v[0], 0);
        let val = sys.val_table().unwrap();
        assert!(!is_submodular(&val, 7));
    }

    #[test]
    fn empty_family_is_cardinality() {
        let sys = XSystem::new(4, vec![]).unwrap();
        let v = sys.v_x().unwrap();
        assert!(v.iter().enumerate().all(|(s, &x)| x == (s as u32).count_ones() as i32));
        assert!(is_submodular(v, 4));
    }

    #[test]
    fn uniform_rank_function_is_submodular() {
        let u = Matroid::uniform_rank2(7, PointSet::full(7)).unwrap();
        assert!(is_submodular(&rank_table(&u), 7));
    }

    #[test]
    fn minimal_example_matroid_is_uniform() {
        let mins = example().minimal_x_matroids_rank3().unwrap();
        assert_eq!(mins, vec![Matroid::uniform_rank2(7, PointSet::full(7)).unwrap()]);
        let pair = XSystem::new(3, vec![ps(&[1, 2])]).unwrap();
        assert_eq!(pair.minimal_x_matroids_rank3().unwrap_err(), Error::XMemberNotTriple(vec![1, 2]));
    }
}
