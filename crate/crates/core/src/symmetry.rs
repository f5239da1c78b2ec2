//! Automorphism groups, canonical forms and orbit classification.

use std::collections::HashMap;
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::model::{Configuration, Matroid};
use crate::pointset::PointSet;

/// Largest ground set accepted by [`canonical_form`].
pub const MAX_CANONICAL_D: usize = 12;

/// Dependency tables for a tuple of matroids on a common ground set. Entry values are
/// bitmasks over the tuple: bit `s` is set when the set is dependent in matroid `s`.
struct Tables {
    d: usize,
    loopc: Vec<u32>,
    pairc: Vec<u32>,
    tric: Vec<u32>,
    inv: Vec<Vec<u32>>,
    twin_rep: Vec<usize>,
}

impl Tables {
    fn new(ms: &[&Matroid]) -> Tables {
        let d = ms[0].d();
        let mut loopc = vec![0u32; d];
        let mut pairc = vec![0u32; d * d];
        let mut tric = vec![0u32; d * d * d];
        for (s, m) in ms.iter().enumerate() {
            let bit = 1u32 << s;
            let map = m.class_map();
            for p in 0..d {
                if map[p] == 0 {
                    loopc[p] |= bit;
                }
            }
            for p in 0..d {
                for q in 0..d {
                    if p != q && (map[p] == 0 || map[q] == 0 || map[p] == map[q]) {
                        pairc[p * d + q] |= bit;
                    }
                }
            }
            for p in 0..d {
                for q in p + 1..d {
                    for r in q + 1..d {
                        let dep = m.is_dependent(PointSet::from_points([p as u8 + 1, q as u8 + 1, r as u8 + 1]));
                        if dep {
                            for (a, b, c) in [(p, q, r), (p, r, q), (q, p, r), (q, r, p), (r, p, q), (r, q, p)] {
                                tric[(a * d + b) * d + c] |= bit;
                            }
                        }
                    }
                }
            }
        }
        let mut t = Tables { d, loopc, pairc, tric, inv: Vec::new(), twin_rep: Vec::new() };
        t.inv = (0..d).map(|p| t.invariant(p, ms.len())).collect();
        t.twin_rep = (0..d).map(|v| (0..v).find(|&u| t.twins(u, v)).map_or(v, |u| u)).collect();
        t
    }

    fn pair(&self, p: usize, q: usize) -> u32 {
        self.pairc[p * self.d + q]
    }

    fn tri(&self, p: usize, q: usize, r: usize) -> u32 {
        self.tric[(p * self.d + q) * self.d + r]
    }

    fn invariant(&self, p: usize, n: usize) -> Vec<u32> {
        let d = self.d;
        let mut v = vec![self.loopc[p]];
        for s in 0..n {
            let bit = 1 << s;
            let pairs = (0..d).filter(|&q| q != p && self.pair(p, q) & bit != 0).count();
            let mut triples = 0;
            for q in 0..d {
                for r in q + 1..d {
                    if q != p && r != p && self.tri(p, q, r) & bit != 0 && self.pair(q, r) & bit == 0 {
                        triples += 1;
                    }
                }
            }
            v.push(pairs as u32);
            v.push(triples);
        }
        v
    }

    /// Whether swapping `u` and `v` preserves every table.
    fn twins(&self, u: usize, v: usize) -> bool {
        let d = self.d;
        if self.loopc[u] != self.loopc[v] || self.inv[u] != self.inv[v] {
            return false;
        }
        for w in 0..d {
            if w == u || w == v {
                continue;
            }
            if self.pair(u, w) != self.pair(v, w) {
                return false;
            }
            for x in w + 1..d {
                if x != u && x != v && self.tri(u, w, x) != self.tri(v, w, x) {
                    return false;
                }
            }
        }
        true
    }

    fn block(&self, placed: &[usize], p: usize) -> Vec<u32> {
        let k = placed.len();
        let mut b = Vec::with_capacity(1 + k + k * k / 2);
        b.push(self.loopc[p]);
        for &q in placed {
            b.push(self.pair(q, p));
        }
        for i in 0..k {
            for j in i + 1..k {
                b.push(self.tri(placed[i], placed[j], p));
            }
        }
        b
    }

    /// Placement order maximizing the block sequence among invariant-respecting orders.
    fn canonical_order(&self) -> Vec<usize> {
        let mut target: Vec<Vec<u32>> = self.inv.clone();
        target.sort_by(|a, b| b.cmp(a));
        let mut search = CanonSearch { t: self, target, best: None, cur: Vec::new(), placed: Vec::new(), used: vec![false; self.d] };
        search.run();
        search.best.expect("at least one ordering exists").1
    }

    fn consistent(&self, sigma: &[usize], p: usize, c: usize) -> bool {
        if self.loopc[p] != self.loopc[c] || self.inv[p] != self.inv[c] {
            return false;
        }
        for q in 0..p {
            if self.pair(q, p) != self.pair(sigma[q], c) {
                return false;
            }
            for r in q + 1..p {
                if self.tri(q, r, p) != self.tri(sigma[q], sigma[r], c) {
                    return false;
                }
            }
        }
        true
    }

    /// Completes `sigma` (fixed on `0..start`) to an automorphism, if possible.
    fn extend(&self, sigma: &mut Vec<usize>, used: &mut Vec<bool>, p: usize) -> bool {
        if p == self.d {
            return true;
        }
        for c in 0..self.d {
            if used[c] || !self.consistent(sigma, p, c) {
                continue;
            }
            sigma.push(c);
            used[c] = true;
            if self.extend(sigma, used, p + 1) {
                return true;
            }
            sigma.pop();
            used[c] = false;
        }
        false
    }

    /// An automorphism fixing `0..i` pointwise and sending `i` to `c`.
    fn find_automorphism(&self, i: usize, c: usize) -> Option<Vec<usize>> {
        let mut sigma: Vec<usize> = (0..i).collect();
        let mut used = vec![false; self.d];
        for u in used.iter_mut().take(i) {
            *u = true;
        }
        if used[c] || !self.consistent(&sigma, i, c) {
            return None;
        }
        sigma.push(c);
        used[c] = true;
        self.extend(&mut sigma, &mut used, i + 1).then_some(sigma)
    }
}

struct CanonSearch<'a> {
    t: &'a Tables,
    target: Vec<Vec<u32>>,
    best: Option<(Vec<Vec<u32>>, Vec<usize>)>,
    cur: Vec<Vec<u32>>,
    placed: Vec<usize>,
    used: Vec<bool>,
}

impl CanonSearch<'_> {
    fn run(&mut self) {
        let k = self.placed.len();
        if k == self.t.d {
            let better = match &self.best {
                None => true,
                Some((b, _)) => self.cur > *b,
            };
            if better {
                self.best = Some((self.cur.clone(), self.placed.clone()));
            }
            return;
        }
        let mut tried: Vec<usize> = Vec::new();
        for p in 0..self.t.d {
            if self.used[p] || self.t.inv[p] != self.target[k] {
                continue;
            }
            let rep = self.t.twin_rep[p];
            if tried.contains(&rep) {
                continue;
            }
            tried.push(rep);
            let blk = self.t.block(&self.placed, p);
            if let Some((b, _)) = &self.best {
                if self.cur[..] == b[..k] && blk < b[k] {
                    continue;
                }
            }
            self.cur.push(blk);
            self.placed.push(p);
            self.used[p] = true;
            self.run();
            self.used[p] = false;
            self.placed.pop();
            self.cur.pop();
        }
    }
}

fn check_same_d(ms: &[&Matroid]) -> Result<usize> {
    let d = ms.first().map(|m| m.d()).ok_or_else(|| Error::ValidationError("empty matroid tuple".into()))?;
    for m in ms {
        if m.d() != d {
            return Err(Error::GroundSetMismatch(d, m.d()));
        }
    }
    if d > MAX_CANONICAL_D {
        return Err(Error::GroundSetTooLarge { d, max: MAX_CANONICAL_D });
    }
    Ok(d)
}

/// A relabelling putting the tuple into canonical form, as `perm[p-1]` = new label of `p`.
pub fn canonical_labeling(ms: &[&Matroid]) -> Result<Vec<u8>> {
    let d = check_same_d(ms)?;
    let t = Tables::new(ms);
    let order = t.canonical_order();
    let mut perm = vec![0u8; d];
    for (pos, &p) in order.iter().enumerate() {
        perm[p] = pos as u8 + 1;
    }
    Ok(perm)
}

/// The canonical representative of the isomorphism class of `n`.
pub fn canonical_form(n: &Matroid) -> Result<Matroid> {
    let perm = canonical_labeling(&[n])?;
    Ok(n.relabel(&perm))
}

/// Canonical form of a tuple under simultaneous relabelling.
pub fn canonical_tuple(ms: &[&Matroid]) -> Result<Vec<Matroid>> {
    let perm = canonical_labeling(ms)?;
    Ok(ms.iter().map(|m| m.relabel(&perm)).collect())
}

pub fn are_isomorphic(a: &Matroid, b: &Matroid) -> Result<bool> {
    if a.d() != b.d() {
        return Ok(false);
    }
    Ok(canonical_form(a)? == canonical_form(b)?)
}

/// A permutation group on `[d]` given by generators, with its order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PermutationGroup {
    degree: usize,
    generators: Vec<Vec<u8>>,
    order: u128,
}

impl PermutationGroup {
    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Generators as image lists (`g[p-1]` is the image of `p`).
    pub fn generators(&self) -> &[Vec<u8>] {
        &self.generators
    }

    pub fn order(&self) -> u128 {
        self.order
    }

    /// All group elements, or `None` if the order exceeds `limit`.
    pub fn elements(&self, limit: u128) -> Option<Vec<Vec<u8>>> {
        if self.order > limit {
            return None;
        }
        let id: Vec<u8> = (1..=self.degree as u8).collect();
        let mut seen = std::collections::HashSet::new();
        seen.insert(id.clone());
        let mut frontier = vec![id];
        while let Some(g) = frontier.pop() {
            for h in &self.generators {
                let gh: Vec<u8> = g.iter().map(|&x| h[x as usize - 1]).collect();
                if seen.insert(gh.clone()) {
                    frontier.push(gh);
                }
            }
        }
        let mut out: Vec<Vec<u8>> = seen.into_iter().collect();
        out.sort();
        Some(out)
    }

    /// Cycle notation of a permutation, e.g. `(1 2 3)(4 5)`; the identity prints as `()`.
    pub fn cycle_notation(perm: &[u8]) -> String {
        let mut seen = vec![false; perm.len()];
        let mut out = String::new();
        for start in 0..perm.len() {
            if seen[start] || perm[start] as usize == start + 1 {
                continue;
            }
            out.push('(');
            let mut p = start;
            let mut first = true;
            while !seen[p] {
                seen[p] = true;
                if !first {
                    out.push(' ');
                }
                let _ = write!(out, "{}", p + 1);
                first = false;
                p = perm[p] as usize - 1;
            }
            out.push(')');
        }
        if out.is_empty() {
            out.push_str("()");
        }
        out
    }
}

/// Automorphism group of a matroid: a stabilizer chain built by backtracking.
pub fn automorphisms_of_matroid(m: &Matroid) -> PermutationGroup {
    let t = Tables::new(&[m]);
    let d = t.d;
    let mut generators: Vec<Vec<u8>> = Vec::new();
    let mut order: u128 = 1;
    for i in 0..d {
        let mut level: Vec<Vec<usize>> = Vec::new();
        let mut orbit = vec![false; d];
        orbit[i] = true;
        for c in i + 1..d {
            if orbit[c] {
                continue;
            }
            if let Some(g) = t.find_automorphism(i, c) {
                level.push(g);
                // Close the orbit of `i` under this level's generators.
                let mut stack: Vec<usize> = (0..d).filter(|&x| orbit[x]).collect();
                while let Some(x) = stack.pop() {
                    for h in &level {
                        if !orbit[h[x]] {
                            orbit[h[x]] = true;
                            stack.push(h[x]);
                        }
                    }
                }
            }
        }
        order *= orbit.iter().filter(|&&b| b).count() as u128;
        generators.extend(level.into_iter().map(|g| g.into_iter().map(|x| x as u8 + 1).collect::<Vec<u8>>()));
    }
    PermutationGroup { degree: d, generators, order }
}

/// Automorphism group of a configuration (permutations preserving its lines).
pub fn automorphisms(c: &Configuration) -> PermutationGroup {
    automorphisms_of_matroid(&Matroid::from_configuration(c))
}

/// One orbit of a group acting on a set of matroids.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbitClass {
    pub representative: Matroid,
    pub members: Vec<Matroid>,
}

impl OrbitClass {
    pub fn size(&self) -> usize {
        self.members.len()
    }
}

/// Partitions `set` into orbits, joining each matroid with its images under the generators.
/// Classes are sorted by (size, representative); the representative is the least member.
pub fn orbit_classify(g: &PermutationGroup, set: &[Matroid]) -> Vec<OrbitClass> {
    let index: HashMap<&Matroid, usize> = set.iter().enumerate().map(|(i, m)| (m, i)).collect();
    let mut parent: Vec<usize> = (0..set.len()).collect();
    fn find(parent: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while parent[r] != r {
            r = parent[r];
        }
        let mut y = x;
        while parent[y] != r {
            let next = parent[y];
            parent[y] = r;
            y = next;
        }
        r
    }
    for (i, m) in set.iter().enumerate() {
        for gen in &g.generators {
            let image = m.relabel(gen);
            if let Some(&j) = index.get(&image) {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                if a != b {
                    parent[a.max(b)] = a.min(b);
                }
            }
        }
    }
    let mut groups: HashMap<usize, Vec<Matroid>> = HashMap::new();
    for (i, m) in set.iter().enumerate() {
        let r = find(&mut parent, i);
        groups.entry(r).or_default().push(m.clone());
    }
    let mut out: Vec<OrbitClass> = groups
        .into_values()
        .map(|mut members| {
            members.sort();
            members.dedup();
            OrbitClass { representative: members[0].clone(), members }
        })
        .collect();
    out.sort_by(|a, b| (a.size(), &a.representative).cmp(&(b.size(), &b.representative)));
    out
}
