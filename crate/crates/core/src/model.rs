//! Point-line configurations, rank ≤ 3 matroids and the dependency order.

use crate::error::{Error, Result};
use crate::pointset::{PointSet, MAX_POINTS};

fn check_label(p: i64, d: usize) -> Result<u8> {
    if p < 1 || p as usize > d {
        Err(Error::LabelOutOfRange { label: p, d })
    } else {
        Ok(p as u8)
    }
}

fn check_d(d: usize) -> Result<()> {
    if d == 0 {
        return Err(Error::ValidationError("ground set must be nonempty".into()));
    }
    if d > MAX_POINTS {
        return Err(Error::GroundSetTooLarge { d, max: MAX_POINTS });
    }
    Ok(())
}

/// Sort, deduplicate and check the two-point axiom for a list of lines.
fn normalize_lines(lines: &mut Vec<PointSet>) -> Result<()> {
    lines.sort();
    lines.dedup();
    for (i, a) in lines.iter().enumerate() {
        if a.len() < 3 {
            return Err(Error::LineTooShort(a.to_vec()));
        }
        for b in &lines[i + 1..] {
            if (*a & *b).len() >= 2 {
                return Err(Error::LinesShareTwoPoints(a.to_vec(), b.to_vec()));
            }
        }
    }
    Ok(())
}

/// A simple matroid of rank at most three on `[d]`, given by its lines.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Configuration {
    d: usize,
    lines: Vec<PointSet>,
}

impl Configuration {
    /// Validates and builds a configuration from integer line lists.
    pub fn new(d: usize, lines: &[Vec<i64>]) -> Result<Self> {
        check_d(d)?;
        let mut sets = Vec::with_capacity(lines.len());
        for line in lines {
            let mut s = PointSet::EMPTY;
            for &p in line {
                s.insert(check_label(p, d)?);
            }
            if s.len() < 3 {
                return Err(Error::LineTooShort(s.to_vec()));
            }
            sets.push(s);
        }
        Self::from_sets(d, sets)
    }

    pub fn from_sets(d: usize, mut lines: Vec<PointSet>) -> Result<Self> {
        check_d(d)?;
        let full = PointSet::full(d);
        for l in &lines {
            if !l.is_subset(full) {
                let bad = (*l - full).first().unwrap_or(0);
                return Err(Error::LabelOutOfRange { label: bad as i64, d });
            }
        }
        normalize_lines(&mut lines)?;
        Ok(Configuration { d, lines })
    }

    /// The configuration with no lines.
    pub fn free(d: usize) -> Result<Self> {
        Self::from_sets(d, Vec::new())
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn lines(&self) -> &[PointSet] {
        &self.lines
    }

    pub fn points(&self) -> PointSet {
        PointSet::full(self.d)
    }

    pub fn degree(&self, p: u8) -> usize {
        self.lines.iter().filter(|l| l.contains(p)).count()
    }

    pub fn lines_through(&self, p: u8) -> impl Iterator<Item = &PointSet> + '_ {
        self.lines.iter().filter(move |l| l.contains(p))
    }

    /// Whether some line contains every point of `s`.
    pub fn is_collinear(&self, s: PointSet) -> bool {
        self.lines.iter().any(|l| s.is_subset(*l))
    }

    /// Whether the two points lie on a common line.
    pub fn connected(&self, a: u8, b: u8) -> bool {
        self.is_collinear(PointSet::singleton(a).with(b))
    }

    /// Rank of the configuration viewed as a matroid.
    pub fn rank(&self) -> u8 {
        match self.d {
            0 => 0,
            1 => 1,
            2 => 2,
            _ if self.lines.len() == 1 && self.lines[0] == self.points() => 2,
            _ => 3,
        }
    }

    pub fn is_dependent(&self, s: PointSet) -> bool {
        s.len() >= 4 || (s.len() == 3 && self.is_collinear(s))
    }

    /// Restriction to the points of degree at least two.
    pub fn reduce_s(&self) -> Restriction {
        Restriction::whole(self).reduce(2)
    }

    /// Restriction to the points of degree at least three.
    pub fn reduce_q(&self) -> Restriction {
        Restriction::whole(self).reduce(3)
    }

    pub fn is_nilpotent(&self) -> bool {
        Restriction::whole(self).chain_empties(2)
    }

    pub fn is_solvable(&self) -> bool {
        Restriction::whole(self).chain_empties(3)
    }

    pub fn max_degree(&self) -> usize {
        self.points().iter().map(|p| self.degree(p)).max().unwrap_or(0)
    }

    /// Whether the restriction to `[d] ∖ {p}` is nilpotent for every point `p`.
    pub fn proper_restrictions_nilpotent(&self) -> bool {
        self.points().iter().all(|p| {
            let r = Restriction::whole(self).restrict(self.points().without(p));
            r.chain_empties(2)
        })
    }

    /// Relabels the points through `perm` (`perm[p-1]` is the new label of `p`).
    pub fn relabel(&self, perm: &[u8]) -> Configuration {
        let lines = self.lines.iter().map(|l| map_set(*l, perm)).collect();
        Configuration::from_sets(self.d, lines).expect("relabelling preserves validity")
    }

    pub fn lines_as_vecs(&self) -> Vec<Vec<u8>> {
        self.lines.iter().map(|l| l.to_vec()).collect()
    }
}

pub(crate) fn map_set(s: PointSet, perm: &[u8]) -> PointSet {
    PointSet::from_points(s.iter().map(|p| perm[p as usize - 1]))
}

/// A configuration restricted to a subset of its points, keeping the original labels.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Restriction {
    pub points: PointSet,
    pub lines: Vec<PointSet>,
}

impl Restriction {
    pub fn whole(c: &Configuration) -> Self {
        Restriction { points: c.points(), lines: c.lines.clone() }
    }

    /// Restricts to `s`, discarding lines left with fewer than three points.
    pub fn restrict(&self, s: PointSet) -> Restriction {
        let points = self.points & s;
        let mut lines: Vec<PointSet> =
            self.lines.iter().map(|l| *l & points).filter(|l| l.len() >= 3).collect();
        lines.sort();
        lines.dedup();
        Restriction { points, lines }
    }

    pub fn degree(&self, p: u8) -> usize {
        self.lines.iter().filter(|l| l.contains(p)).count()
    }

    fn reduce(&self, min_degree: usize) -> Restriction {
        let keep = PointSet::from_points(self.points.iter().filter(|&p| self.degree(p) >= min_degree));
        self.restrict(keep)
    }

    fn chain_empties(&self, min_degree: usize) -> bool {
        let mut cur = self.clone();
        loop {
            if cur.points.is_empty() {
                return true;
            }
            let next = cur.reduce(min_degree);
            if next.points == cur.points {
                return false;
            }
            cur = next;
        }
    }

    /// Relabels the surviving points to `1..=k` in increasing order.
    pub fn to_configuration(&self) -> Result<Configuration> {
        let pts = self.points.to_vec();
        let mut perm = vec![0u8; MAX_POINTS];
        for (i, &p) in pts.iter().enumerate() {
            perm[p as usize - 1] = i as u8 + 1;
        }
        let lines = self.lines.iter().map(|l| map_set(*l, &perm)).collect();
        Configuration::from_sets(pts.len().max(1), lines)
    }
}

/// A matroid of rank at most three on `[d]`: loops, parallel classes and lines over the classes.
///
/// Classes are sorted by their smallest member. Lines are sets of class numbers `1..=k`
/// (class number `c` is `classes[c-1]`). A rank-2 matroid with three or more classes carries
/// one line holding every class.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Matroid {
    d: usize,
    loops: PointSet,
    classes: Vec<PointSet>,
    lines: Vec<PointSet>,
    rank: u8,
}

fn compute_rank(classes: usize, lines: &[PointSet]) -> u8 {
    match classes {
        0 => 0,
        1 => 1,
        2 => 2,
        k if lines.len() == 1 && lines[0] == PointSet::full(k) => 2,
        _ => 3,
    }
}

impl Matroid {
    /// Builds a matroid from loops, classes and lines given over class numbers.
    pub fn new(d: usize, loops: PointSet, classes: Vec<PointSet>, lines_over_classes: Vec<PointSet>) -> Result<Self> {
        check_d(d)?;
        let full = PointSet::full(d);
        if !loops.is_subset(full) {
            return Err(Error::LabelOutOfRange { label: (loops - full).first().unwrap_or(0) as i64, d });
        }
        let mut seen = loops;
        for c in &classes {
            if c.is_empty() {
                return Err(Error::ValidationError("empty parallel class".into()));
            }
            if !c.is_subset(full) {
                return Err(Error::LabelOutOfRange { label: (*c - full).first().unwrap_or(0) as i64, d });
            }
            if !c.is_disjoint(seen) {
                return Err(Error::ValidationError(format!("class {c} overlaps loops or another class")));
            }
            seen |= *c;
        }
        if seen != full {
            return Err(Error::ValidationError(format!(
                "loops and classes do not cover [{d}]: missing {}",
                full - seen
            )));
        }
        // Reorder classes by minimum member and translate the lines.
        let mut order: Vec<usize> = (0..classes.len()).collect();
        order.sort_by_key(|&i| classes[i].first());
        let mut newpos = vec![0u8; classes.len()];
        for (new, &old) in order.iter().enumerate() {
            newpos[old] = new as u8 + 1;
        }
        let sorted: Vec<PointSet> = order.iter().map(|&i| classes[i]).collect();
        let k = sorted.len();
        let mut lines = Vec::with_capacity(lines_over_classes.len());
        for l in lines_over_classes {
            if !l.is_subset(PointSet::full(k)) || l.first() == Some(0) {
                return Err(Error::ValidationError(format!("line {l} refers to a missing class")));
            }
            lines.push(map_set(l, &newpos));
        }
        normalize_lines(&mut lines)?;
        let rank = compute_rank(k, &lines);
        Ok(Matroid { d, loops, classes: sorted, lines, rank })
    }

    /// Builds a matroid whose lines are given as point sets; each line becomes the set of
    /// classes it meets.
    pub fn from_point_lines(d: usize, loops: PointSet, classes: Vec<PointSet>, lines: &[PointSet]) -> Result<Self> {
        let mut class_lines = Vec::with_capacity(lines.len());
        for l in lines {
            let mut cs = PointSet::EMPTY;
            for (i, c) in classes.iter().enumerate() {
                if !c.is_disjoint(*l) {
                    cs.insert(i as u8 + 1);
                }
            }
            if cs.len() < 3 {
                return Err(Error::LineTooShort(l.to_vec()));
            }
            class_lines.push(cs);
        }
        Matroid::new(d, loops, classes, class_lines)
    }

    pub fn from_configuration(c: &Configuration) -> Self {
        let classes = c.points().iter().map(PointSet::singleton).collect();
        Matroid::new(c.d(), PointSet::EMPTY, classes, c.lines().to_vec()).expect("configuration is a valid matroid")
    }

    /// The rank-2 uniform matroid on `support`, with every other point a loop.
    pub fn uniform_rank2(d: usize, support: PointSet) -> Result<Self> {
        let classes: Vec<PointSet> = support.iter().map(PointSet::singleton).collect();
        let lines = if classes.len() >= 3 { vec![PointSet::full(classes.len())] } else { vec![] };
        Matroid::new(d, PointSet::full(d) - support, classes, lines)
    }

    /// The rank-2 matroid keeping this matroid's loops and parallel classes with all classes
    /// on one line.
    pub fn collapse_to_rank2(&self) -> Matroid {
        let k = self.classes.len();
        let lines = if k >= 3 { vec![PointSet::full(k)] } else { vec![] };
        Matroid::new(self.d, self.loops, self.classes.clone(), lines).expect("collapse keeps validity")
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn loops(&self) -> PointSet {
        self.loops
    }

    pub fn classes(&self) -> &[PointSet] {
        &self.classes
    }

    /// Lines as sets of class numbers (`1..=classes().len()`).
    pub fn lines_over_classes(&self) -> &[PointSet] {
        &self.lines
    }

    /// Lines as sets of points (the union of their classes).
    pub fn point_lines(&self) -> Vec<PointSet> {
        self.lines.iter().map(|l| self.class_union(*l)).collect()
    }

    pub fn rank(&self) -> u8 {
        self.rank
    }

    pub fn non_loops(&self) -> PointSet {
        PointSet::full(self.d) - self.loops
    }

    pub fn is_simple(&self) -> bool {
        self.loops.is_empty() && self.classes.iter().all(|c| c.len() == 1)
    }

    pub fn has_double_point(&self) -> bool {
        self.classes.iter().any(|c| c.len() >= 2)
    }

    pub fn class_union(&self, cs: PointSet) -> PointSet {
        cs.iter().fold(PointSet::EMPTY, |acc, c| acc | self.classes[c as usize - 1])
    }

    /// Class number of every point (`0` for loops), indexed by `p-1`.
    pub fn class_map(&self) -> [u8; MAX_POINTS] {
        let mut map = [0u8; MAX_POINTS];
        for (i, c) in self.classes.iter().enumerate() {
            for p in c.iter() {
                map[p as usize - 1] = i as u8 + 1;
            }
        }
        map
    }

    pub fn class_of(&self, p: u8) -> Option<usize> {
        self.classes.iter().position(|c| c.contains(p))
    }

    pub fn is_loop(&self, p: u8) -> bool {
        self.loops.contains(p)
    }

    /// Whether the class numbers in `cs` lie on a common line (always true for rank ≤ 2).
    pub fn classes_collinear(&self, cs: PointSet) -> bool {
        cs.len() <= 2 || self.lines.iter().any(|l| cs.is_subset(*l))
    }

    pub fn is_dependent(&self, s: PointSet) -> bool {
        if !s.is_disjoint(self.loops) || s.len() > 3 {
            return !s.is_empty();
        }
        let map = self.class_map();
        let mut cs = PointSet::EMPTY;
        for p in s.iter() {
            let c = map[p as usize - 1];
            if cs.contains(c) {
                return true;
            }
            cs.insert(c);
        }
        cs.len() == 3 && self.classes_collinear(cs)
    }

    pub fn is_circuit(&self, s: PointSet) -> bool {
        self.is_dependent(s) && s.iter().all(|p| !self.is_dependent(s.without(p)))
    }

    pub fn rank_of(&self, s: PointSet) -> u8 {
        let map = self.class_map();
        let cs = PointSet::from_points((s - self.loops).iter().map(|p| map[p as usize - 1]));
        match cs.len() {
            k if k <= 2 => k as u8,
            _ if self.classes_collinear(cs) => 2,
            _ => 3,
        }
    }

    /// `self ≤ other` in the dependency order: every dependent set of `self` is dependent in `other`.
    pub fn dependency_leq(&self, other: &Matroid) -> Result<bool> {
        if self.d != other.d {
            return Err(Error::GroundSetMismatch(self.d, other.d));
        }
        Ok(self.leq_unchecked(other))
    }

    pub(crate) fn leq_unchecked(&self, other: &Matroid) -> bool {
        if !self.loops.is_subset(other.loops) {
            return false;
        }
        let omap = other.class_map();
        // Each class of `self` must collapse onto at most one class of `other`.
        let mut image = vec![0u8; self.classes.len()];
        for (i, c) in self.classes.iter().enumerate() {
            let mut img = 0u8;
            for p in c.iter() {
                let oc = omap[p as usize - 1];
                if oc == 0 {
                    continue;
                }
                if img == 0 {
                    img = oc;
                } else if img != oc {
                    return false;
                }
            }
            image[i] = img;
        }
        for l in &self.lines {
            let imgs: Vec<u8> = l.iter().map(|c| image[c as usize - 1]).filter(|&c| c != 0).collect();
            let distinct = PointSet::from_points(imgs.iter().copied());
            if distinct.len() >= 3 {
                if other.rank <= 2 {
                    continue;
                }
                // Triples with a repeated image are parallel in `other`. The remaining triples
                // are all collinear exactly when the distinct images share one line, since two
                // lines of `other` meet in at most one class.
                if !other.classes_collinear(distinct) {
                    return false;
                }
            }
        }
        true
    }

    /// Makes `i` a loop, deleting it from the geometry.
    pub fn add_loop(&self, i: u8) -> Result<Matroid> {
        if i == 0 || i as usize > self.d {
            return Err(Error::LabelOutOfRange { label: i as i64, d: self.d });
        }
        if self.is_loop(i) {
            return Err(Error::AlreadyLoop(i));
        }
        let ci = self.class_of(i).expect("non-loop point has a class");
        let mut classes = self.classes.clone();
        classes[ci].remove(i);
        let mut lines = self.point_lines();
        if classes[ci].is_empty() {
            for l in &mut lines {
                l.remove(i);
            }
            classes.remove(ci);
        }
        let kept: Vec<PointSet> = lines
            .into_iter()
            .filter(|l| classes.iter().filter(|c| !c.is_disjoint(*l)).count() >= 3)
            .collect();
        Matroid::from_point_lines(self.d, self.loops.with(i), classes, &kept)
    }

    /// The geometry over class numbers as a configuration on `[k]`, `k` the number of classes.
    pub fn geometry(&self) -> Result<Configuration> {
        Configuration::from_sets(self.classes.len().max(1), self.lines.clone())
    }

    /// Loops removed and parallel classes identified, plus the point → class number map.
    pub fn simplify(&self) -> Result<(Configuration, Vec<Option<u8>>)> {
        if self.rank < 3 {
            return Err(Error::RankTooLow(self.rank));
        }
        let map = self.class_map();
        let mapping = (0..self.d).map(|i| if map[i] == 0 { None } else { Some(map[i]) }).collect();
        Ok((self.geometry()?, mapping))
    }

    /// Lifts a matroid on this matroid's class numbers back to `[d]`, keeping the loops.
    pub fn lift(&self, n: &Matroid) -> Result<Matroid> {
        if n.d != self.classes.len() {
            return Err(Error::GroundSetMismatch(n.d, self.classes.len()));
        }
        let loops = self.loops | self.class_union(n.loops);
        let classes: Vec<PointSet> = n.classes.iter().map(|c| self.class_union(*c)).collect();
        Matroid::new(self.d, loops, classes, n.lines.clone())
    }

    /// Relabels through `perm` (`perm[p-1]` is the new label of `p`).
    pub fn relabel(&self, perm: &[u8]) -> Matroid {
        let classes = self.classes.iter().map(|c| map_set(*c, perm)).collect();
        Matroid::new(self.d, map_set(self.loops, perm), classes, self.lines.clone())
            .expect("relabelling preserves validity")
    }

    /// Deletes the points of `drop`, relabelling the remaining points to `1..` in order.
    /// Returns the smaller matroid and the original labels of the kept points.
    pub fn delete_points(&self, drop: PointSet) -> Result<(Matroid, Vec<u8>)> {
        let kept: Vec<u8> = (PointSet::full(self.d) - drop).to_vec();
        if kept.is_empty() {
            return Err(Error::ValidationError("cannot delete every point".into()));
        }
        let mut perm = vec![0u8; MAX_POINTS];
        for (i, &p) in kept.iter().enumerate() {
            perm[p as usize - 1] = i as u8 + 1;
        }
        let classes: Vec<PointSet> = self
            .classes
            .iter()
            .map(|c| *c - drop)
            .filter(|c| !c.is_empty())
            .map(|c| map_set(c, &perm))
            .collect();
        let lines: Vec<PointSet> = self
            .point_lines()
            .into_iter()
            .map(|l| map_set(l - drop, &perm))
            .filter(|l| classes.iter().filter(|c| !c.is_disjoint(*l)).count() >= 3)
            .collect();
        let out = Matroid::from_point_lines(kept.len(), map_set(self.loops - drop, &perm), classes, &lines)?;
        Ok((out, kept))
    }

    /// Inverse of [`Matroid::delete_points`]: embeds into `[d]` along `kept`, making every other
    /// point a loop.
    pub fn embed_with_loops(&self, d: usize, kept: &[u8]) -> Result<Matroid> {
        let mut perm = vec![0u8; MAX_POINTS];
        for (i, &p) in kept.iter().enumerate() {
            perm[i] = p;
        }
        let used = PointSet::from_points(kept.iter().copied());
        let loops = map_set(self.loops, &perm) | (PointSet::full(d) - used);
        let classes = self.classes.iter().map(|c| map_set(*c, &perm)).collect();
        Matroid::new(d, loops, classes, self.lines.clone())
    }

    /// All circuits of size at most three, for validation and tests.
    pub fn small_circuits(&self) -> Vec<PointSet> {
        let full = PointSet::full(self.d);
        (1..=3).flat_map(|k| full.subsets_of_size(k)).filter(|s| self.is_circuit(*s)).collect()
    }
}
