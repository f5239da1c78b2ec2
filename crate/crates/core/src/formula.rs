//! Hypergraph closures under identification and separation constraints.

use std::ops::ControlFlow;

use crate::error::{Error, Result};
use crate::model::{Configuration, Matroid};
use crate::pointset::{PointSet, MAX_POINTS};

/// An antichain of vertex sets, each with at least three vertices.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Hypergraph {
    d: usize,
    edges: Vec<PointSet>,
}

/// Sorts, deduplicates and drops edges strictly contained in another edge.
pub(crate) fn normalize_antichain(edges: &mut Vec<PointSet>) {
    edges.sort();
    edges.dedup();
    let snapshot = edges.clone();
    edges.retain(|e| !snapshot.iter().any(|f| f != e && e.is_subset(*f)));
}

impl Hypergraph {
    /// Validates edge sizes and labels, then restores the antichain property.
    pub fn new(d: usize, mut edges: Vec<PointSet>) -> Result<Self> {
        let full = PointSet::full(d);
        for e in &edges {
            if e.len() < 3 {
                return Err(Error::LineTooShort(e.to_vec()));
            }
            if !e.is_subset(full) {
                return Err(Error::LabelOutOfRange { label: (*e - full).first().unwrap_or(0) as i64, d });
            }
        }
        normalize_antichain(&mut edges);
        Ok(Hypergraph { d, edges })
    }

    pub fn from_configuration(c: &Configuration) -> Self {
        Hypergraph { d: c.d(), edges: c.lines().to_vec() }
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn edges(&self) -> &[PointSet] {
        &self.edges
    }

    /// Every pair of distinct edges meets in at most one vertex.
    pub fn is_linear(&self) -> bool {
        pairwise_linear(&self.edges)
    }

    /// `self ≤ other`: every edge of `self` lies inside an edge of `other`.
    pub fn leq(&self, other: &Hypergraph) -> bool {
        self.edges.iter().all(|e| other.edges.iter().any(|f| e.is_subset(*f)))
    }

    pub fn to_configuration(&self) -> Result<Configuration> {
        Configuration::from_sets(self.d, self.edges.clone())
    }
}

pub(crate) fn pairwise_linear(edges: &[PointSet]) -> bool {
    edges.iter().enumerate().all(|(i, a)| edges[i + 1..].iter().all(|b| (*a & *b).len() <= 1))
}

/// Repeatedly merges the first pair of edges whose intersection triggers, replacing every edge
/// inside the union by the union itself. `on_add` sees each merged edge and may stop early.
pub(crate) fn close_under_with<T, F, G>(edges: &mut Vec<PointSet>, trigger: F, mut on_add: G) -> ControlFlow<T>
where
    F: Fn(PointSet) -> bool,
    G: FnMut(PointSet) -> ControlFlow<T>,
{
    normalize_antichain(edges);
    loop {
        let mut found = None;
        'scan: for i in 0..edges.len() {
            for j in i + 1..edges.len() {
                if trigger(edges[i] & edges[j]) {
                    found = Some(edges[i] | edges[j]);
                    break 'scan;
                }
            }
        }
        let Some(u) = found else { return ControlFlow::Continue(()) };
        edges.retain(|e| !e.is_subset(u));
        edges.push(u);
        edges.sort();
        on_add(u)?;
    }
}

pub(crate) fn close_under<F: Fn(PointSet) -> bool>(edges: &mut Vec<PointSet>, trigger: F) {
    let _: ControlFlow<()> = close_under_with(edges, trigger, |_| ControlFlow::Continue(()));
}

fn pair_set(a: u8, b: u8) -> PointSet {
    PointSet::singleton(a).with(b)
}

/// The minimal hypergraph above `delta` in which no forbidden pair lies in two edges.
pub fn merge_closure(delta: &Hypergraph, forbid: &[(u8, u8)]) -> Hypergraph {
    let pairs: Vec<PointSet> = forbid.iter().filter(|(a, b)| a != b).map(|&(a, b)| pair_set(a, b)).collect();
    let mut edges = delta.edges.clone();
    close_under(&mut edges, |inter| pairs.iter().any(|p| p.is_subset(inter)));
    Hypergraph { d: delta.d, edges }
}

/// The minimal configuration above `delta`: closure with every pair forbidden.
pub fn plc_closure(delta: &Hypergraph) -> Configuration {
    let mut edges = delta.edges.clone();
    close_under(&mut edges, |inter| inter.len() >= 2);
    Configuration::from_sets(delta.d, edges).expect("closure under all pairs is linear")
}

/// Largest ground set a [`Formula`] supports.
pub const MAX_FORMULA_D: usize = 16;

fn pair_index(a: u8, b: u8) -> u32 {
    let (lo, hi) = if a < b { (a as u32 - 1, b as u32 - 1) } else { (b as u32 - 1, a as u32 - 1) };
    hi * (hi - 1) / 2 + lo
}

/// A conjunction of identifications and separations on `[d]`, stored canonically.
///
/// Each point records the smallest member of its identification class. Separations are kept
/// as a bitmask over pairs of class representatives.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct Formula {
    d: u8,
    rep: [u8; MAX_FORMULA_D],
    forbid: u128,
}

/// A single identification or separation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Atom {
    Same(u8, u8),
    Apart(u8, u8),
}

impl Formula {
    /// The empty formula on `[d]`.
    pub fn new(d: usize) -> Result<Self> {
        if d > MAX_FORMULA_D {
            return Err(Error::GroundSetTooLarge { d, max: MAX_FORMULA_D });
        }
        let mut rep = [0u8; MAX_FORMULA_D];
        for (i, r) in rep.iter_mut().enumerate().take(d) {
            *r = i as u8 + 1;
        }
        Ok(Formula { d: d as u8, rep, forbid: 0 })
    }

    pub fn d(&self) -> usize {
        self.d as usize
    }

    fn check(&self, p: u8) -> Result<()> {
        if p == 0 || p > self.d {
            Err(Error::LabelOutOfRange { label: p as i64, d: self.d as usize })
        } else {
            Ok(())
        }
    }

    /// Smallest member of the class of `p`.
    pub fn rep(&self, p: u8) -> u8 {
        self.rep[p as usize - 1]
    }

    pub fn reps(&self) -> PointSet {
        PointSet::from_points((1..=self.d).filter(|&p| self.rep(p) == p))
    }

    pub fn classes(&self) -> Vec<PointSet> {
        self.reps()
            .iter()
            .map(|r| PointSet::from_points((1..=self.d).filter(|&p| self.rep(p) == r)))
            .collect()
    }

    pub fn has_merges(&self) -> bool {
        (1..=self.d).any(|p| self.rep(p) != p)
    }

    pub fn is_forbidden(&self, x: u8, y: u8) -> bool {
        let (a, b) = (self.rep(x), self.rep(y));
        a != b && self.forbid >> pair_index(a, b) & 1 == 1
    }

    /// Forbidden pairs of representatives, sorted.
    pub fn forbidden_pairs(&self) -> Vec<(u8, u8)> {
        let reps = self.reps().to_vec();
        let mut out = Vec::new();
        for (i, &a) in reps.iter().enumerate() {
            for &b in &reps[i + 1..] {
                if self.forbid >> pair_index(a, b) & 1 == 1 {
                    out.push((a, b));
                }
            }
        }
        out
    }

    pub fn with_atom(&self, atom: Atom) -> Result<Formula> {
        match atom {
            Atom::Same(x, y) => self.with_merge(x, y),
            Atom::Apart(x, y) => self.with_forbid(x, y),
        }
    }

    /// Adds `x ∼ y`.
    pub fn with_merge(&self, x: u8, y: u8) -> Result<Formula> {
        self.check(x)?;
        self.check(y)?;
        let (a, b) = (self.rep(x), self.rep(y));
        if a == b {
            return Ok(*self);
        }
        if self.is_forbidden(a, b) {
            return Err(Error::InconsistentFormula(format!("{x} ∼ {y} joins a separated pair")));
        }
        let (keep, gone) = if a < b { (a, b) } else { (b, a) };
        let mut out = *self;
        for r in out.rep.iter_mut().take(self.d as usize) {
            if *r == gone {
                *r = keep;
            }
        }
        let mut forbid = 0u128;
        for (p, q) in self.forbidden_pairs() {
            let p2 = if p == gone { keep } else { p };
            let q2 = if q == gone { keep } else { q };
            forbid |= 1u128 << pair_index(p2, q2);
        }
        out.forbid = forbid;
        Ok(out)
    }

    /// Adds `x ≁ y`.
    pub fn with_forbid(&self, x: u8, y: u8) -> Result<Formula> {
        self.check(x)?;
        self.check(y)?;
        let (a, b) = (self.rep(x), self.rep(y));
        if a == b {
            return Err(Error::InconsistentFormula(format!("{x} ≁ {y} separates one class")));
        }
        let mut out = *self;
        out.forbid |= 1u128 << pair_index(a, b);
        Ok(out)
    }

    /// Maps a point set to the set of its class representatives.
    pub fn image(&self, s: PointSet) -> PointSet {
        PointSet::from_points(s.iter().map(|p| self.rep(p)))
    }

    /// Whether `inter` (a set of representatives) contains a forbidden pair.
    fn hits_forbidden(&self, inter: PointSet) -> bool {
        if inter.len() < 2 || self.forbid == 0 {
            return false;
        }
        let v = inter.to_vec();
        v.iter().enumerate().any(|(i, &a)| v[i + 1..].iter().any(|&b| self.forbid >> pair_index(a, b) & 1 == 1))
    }

    /// Human-readable atoms: identifications per class, then separations.
    pub fn describe(&self) -> String {
        let mut parts = Vec::new();
        for c in self.classes() {
            if c.len() > 1 {
                let v: Vec<String> = c.iter().map(|p| p.to_string()).collect();
                parts.push(v.join("∼"));
            }
        }
        for (a, b) in self.forbidden_pairs() {
            parts.push(format!("{a}≁{b}"));
        }
        parts.join(" ∧ ")
    }
}

/// Images of the edges under the class map, keeping those with at least three classes.
/// Edges are expressed over class representatives.
pub fn quotient(delta: &Hypergraph, classes: &[PointSet]) -> Hypergraph {
    let mut rep = [0u8; MAX_POINTS];
    for p in 1..=delta.d as u8 {
        rep[p as usize - 1] = p;
    }
    for c in classes {
        if let Some(m) = c.first() {
            for p in c.iter() {
                rep[p as usize - 1] = m;
            }
        }
    }
    let mut edges: Vec<PointSet> = delta
        .edges
        .iter()
        .map(|e| PointSet::from_points(e.iter().map(|p| rep[p as usize - 1])))
        .filter(|e| e.len() >= 3)
        .collect();
    normalize_antichain(&mut edges);
    Hypergraph { d: delta.d, edges }
}

fn quotient_edges(edges: &[PointSet], f: &Formula) -> Vec<PointSet> {
    let mut out: Vec<PointSet> = edges.iter().map(|e| f.image(*e)).filter(|e| e.len() >= 3).collect();
    normalize_antichain(&mut out);
    out
}

/// Closure of `delta` compatible with `f`, computed from scratch: quotient by the
/// identifications, then merge under the separations. Edges are over class representatives.
pub fn delta_f(delta: &Hypergraph, f: &Formula) -> Result<Hypergraph> {
    if delta.d > f.d() {
        return Err(Error::GroundSetMismatch(delta.d, f.d()));
    }
    let mut edges = quotient_edges(&delta.edges, f);
    close_under(&mut edges, |inter| f.hits_forbidden(inter));
    Ok(Hypergraph { d: delta.d, edges })
}

/// Incremental form: extends `parent` by one atom and updates its cached closure.
pub fn delta_extend(parent_delta: &Hypergraph, parent: &Formula, atom: Atom) -> Result<(Formula, Hypergraph)> {
    let f = parent.with_atom(atom)?;
    let mut edges = match atom {
        Atom::Same(..) => quotient_edges(&parent_delta.edges, &f),
        Atom::Apart(..) => parent_delta.edges.clone(),
    };
    close_under(&mut edges, |inter| f.hits_forbidden(inter));
    Ok((f, Hypergraph { d: parent_delta.d, edges }))
}

/// Whether the closure of the lines under `f` is again a configuration over the classes.
pub fn has_property_x(lines: &Hypergraph, f: &Formula) -> Result<bool> {
    Ok(delta_f(lines, f)?.is_linear())
}

/// The unique minimal matroid above `m` realizing `f`: classes from `f`, no loops, and the
/// closed line system as geometry.
pub fn realize_formula(m: &Configuration, f: &Formula) -> Result<Matroid> {
    let delta = delta_f(&Hypergraph::from_configuration(m), f)?;
    matroid_of(m.d(), f, &delta)
}

pub(crate) fn matroid_of(d: usize, f: &Formula, delta: &Hypergraph) -> Result<Matroid> {
    if !delta.is_linear() {
        return Err(Error::PropertyXViolated);
    }
    Matroid::from_point_lines(d, PointSet::EMPTY, f.classes(), &delta.edges)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ps(v: &[u8]) -> PointSet {
        PointSet::from_points(v.iter().copied())
    }

    fn hg(d: usize, edges: &[&[u8]]) -> Hypergraph {
        Hypergraph::new(d, edges.iter().map(|e| ps(e)).collect()).unwrap()
    }

    fn fano() -> Configuration {
        let l: Vec<Vec<i64>> = [[1, 2, 3], [1, 5, 6], [1, 4, 7], [2, 5, 7], [2, 4, 6], [3, 4, 5], [3, 6, 7]]
            .iter()
            .map(|l| l.to_vec())
            .collect();
        Configuration::new(7, &l).unwrap()
    }

    #[test]
    fn merge_closure_worked_example() {
        let delta = hg(6, &[&[1, 2, 3], &[2, 3, 4], &[1, 4, 5], &[1, 5, 6]]);
        let out = merge_closure(&delta, &[(2, 3), (1, 4)]);
        assert_eq!(out.edges(), &[ps(&[1, 2, 3, 4, 5]), ps(&[1, 5, 6])]);
        assert_eq!(merge_closure(&delta, &[]), delta);
    }

    #[test]
    fn fano_collapses_under_all_pairs() {
        let delta = Hypergraph::from_configuration(&fano());
        let all: Vec<(u8, u8)> = (1..=7u8).flat_map(|a| (a + 1..=7).map(move |b| (a, b))).collect();
        // The Fano lines already pairwise meet in one point, so nothing merges.
        assert_eq!(merge_closure(&delta, &all), delta);
        let mut edges = delta.edges().to_vec();
        edges.push(ps(&[1, 2, 4]));
        let delta = Hypergraph::new(7, edges).unwrap();
        let all: Vec<(u8, u8)> = (1..=7u8).flat_map(|a| (a + 1..=7).map(move |b| (a, b))).collect();
        assert_eq!(merge_closure(&delta, &all).edges(), &[PointSet::full(7)]);
    }

    #[test]
    fn plc_closure_worked_example() {
        let delta = hg(10, &[&[1, 2, 3], &[1, 5, 6], &[1, 2, 5], &[6, 7, 8], &[6, 7, 9, 10]]);
        assert_eq!(plc_closure(&delta).lines(), &[ps(&[1, 2, 3, 5, 6]), ps(&[6, 7, 8, 9, 10])]);
    }

    #[test]
    fn quotient_fano() {
        let delta = Hypergraph::from_configuration(&fano());
        let q = quotient(&delta, &[ps(&[1, 2])]);
        assert_eq!(q.edges().len(), 6);
        assert!(quotient(&delta, &[PointSet::full(7)]).edges().is_empty());
        assert_eq!(quotient(&delta, &[]), delta);
    }

    #[test]
    fn delta_f_examples() {
        let lines = Hypergraph::from_configuration(&fano());
        let f = Formula::new(7).unwrap().with_merge(1, 2).unwrap().with_forbid(1, 5).unwrap().with_forbid(1, 4).unwrap();
        let got = delta_f(&lines, &f).unwrap();
        assert_eq!(got.edges(), &[ps(&[1, 4, 6, 7]), ps(&[1, 5, 6, 7]), ps(&[3, 4, 5]), ps(&[3, 6, 7])]);
        let g = Formula::new(7).unwrap().with_merge(1, 2).unwrap().with_merge(1, 6).unwrap().with_merge(1, 7).unwrap();
        assert_eq!(delta_f(&lines, &g).unwrap().edges(), &[ps(&[3, 4, 5])]);
        assert!(has_property_x(&lines, &g).unwrap());
        let n = realize_formula(&fano(), &g).unwrap();
        assert_eq!(n.classes(), &[ps(&[1, 2, 6, 7]), ps(&[3]), ps(&[4]), ps(&[5])]);
        assert_eq!(n.point_lines(), vec![ps(&[3, 4, 5])]);
    }

    #[test]
    fn formula_consistency() {
        let f = Formula::new(4).unwrap().with_forbid(1, 2).unwrap();
        assert!(matches!(f.with_merge(2, 1), Err(Error::InconsistentFormula(_))));
        let g = f.with_merge(2, 3).unwrap();
        assert!(g.is_forbidden(1, 3));
        assert!(matches!(g.with_forbid(2, 3), Err(Error::InconsistentFormula(_))));
        assert!(matches!(Formula::new(17), Err(Error::GroundSetTooLarge { .. })));
    }

    #[test]
    fn raw_hypergraph_without_property_x() {
        let delta = hg(4, &[&[1, 2, 3], &[1, 2, 4]]);
        assert!(!has_property_x(&delta, &Formula::new(4).unwrap()).unwrap());
    }
}
