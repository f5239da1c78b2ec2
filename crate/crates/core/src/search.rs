//! Minimal matroids above a point-line configuration.
//!
//! The matroids strictly above `M` split into three families: loopless ones with a double
//! point, simple ones, and ones with a loop. Each family has its own search; the union of the
//! three results, after discarding identifications that sit above a simple member, is the
//! full minimal set.

use std::collections::{HashMap, HashSet};
use std::ops::ControlFlow;

use crate::error::{Error, Result};
use crate::formula::{close_under, close_under_with, delta_extend, matroid_of, Atom, Formula, Hypergraph};
use crate::model::{Configuration, Matroid};
use crate::pointset::PointSet;

/// Keeps the elements of `items` not strictly above another element, sorted and deduplicated.
pub fn minimal_elements(mut items: Vec<Matroid>) -> Vec<Matroid> {
    items.sort();
    items.dedup();
    let keep: Vec<bool> = items
        .iter()
        .map(|n| !items.iter().any(|m| m != n && m.leq_unchecked(n)))
        .collect();
    items.into_iter().zip(keep).filter_map(|(m, k)| k.then_some(m)).collect()
}

fn require_rank3(m: &Configuration) -> Result<()> {
    match m.rank() {
        3 => Ok(()),
        r => Err(Error::RankTooLow(r)),
    }
}

/// Lexicographically least pair of classes lying in two distinct edges.
fn offending_pair(edges: &[PointSet]) -> Option<(u8, u8)> {
    let mut best: Option<(u8, u8)> = None;
    for (i, a) in edges.iter().enumerate() {
        for b in &edges[i + 1..] {
            let inter = *a & *b;
            if inter.len() >= 2 {
                let mut it = inter.iter();
                let cand = (it.next().unwrap(), it.next().unwrap());
                if best.is_none_or(|b| cand < b) {
                    best = Some(cand);
                }
            }
        }
    }
    best
}

/// Least pair of distinct classes not yet separated.
fn undecided_pair(f: &Formula) -> Option<(u8, u8)> {
    let reps = f.reps().to_vec();
    for (i, &a) in reps.iter().enumerate() {
        for &b in &reps[i + 1..] {
            if !f.is_forbidden(a, b) {
                return Some((a, b));
            }
        }
    }
    None
}

/// Depth-first search over formulas. Returns each distinct realized matroid with the first
/// formula that produced it.
///
/// `seed` is the root formula and `hyper` the starting hypergraph. When `need_merge` holds, a
/// node that already has the closure property but no identification keeps splitting on the
/// least undecided pair, since such a node only reproduces the ambient itself.
pub(crate) fn formula_search(
    d: usize,
    hyper: &Hypergraph,
    seed: Formula,
    need_merge: bool,
) -> Result<Vec<(Matroid, Formula)>> {
    let root_delta = crate::formula::delta_f(hyper, &seed)?;
    let mut stack = vec![(seed, root_delta)];
    let mut seen: HashSet<Formula> = HashSet::new();
    seen.insert(seed);
    let mut found: HashMap<Matroid, Formula> = HashMap::new();
    let mut order: Vec<Matroid> = Vec::new();
    while let Some((f, delta)) = stack.pop() {
        let split = match offending_pair(delta.edges()) {
            Some(pair) => Some(pair),
            None if need_merge && !f.has_merges() => undecided_pair(&f),
            None => {
                let m = matroid_of(d, &f, &delta)?;
                if !found.contains_key(&m) {
                    found.insert(m.clone(), f);
                    order.push(m);
                }
                None
            }
        };
        if let Some((x, y)) = split {
            // Push the separation first so the identification is explored first.
            for atom in [Atom::Apart(x, y), Atom::Same(x, y)] {
                let Ok((g, gd)) = delta_extend(&delta, &f, atom) else { continue };
                if seen.insert(g) {
                    stack.push((g, gd));
                }
            }
        }
    }
    Ok(order.into_iter().map(|m| { let f = found[&m]; (m, f) }).collect())
}

/// Minimal loopless matroids above `m` having at least one double point, each with a witnessing formula.
pub fn min_a_with_witness(m: &Configuration) -> Result<Vec<(Matroid, Formula)>> {
    require_rank3(m)?;
    let seed = Formula::new(m.d())?;
    let cands = formula_search(m.d(), &Hypergraph::from_configuration(m), seed, true)?;
    let witness: HashMap<Matroid, Formula> = cands.iter().cloned().collect();
    let mins = minimal_elements(cands.into_iter().map(|(n, _)| n).collect());
    Ok(mins.into_iter().map(|n| { let f = witness[&n]; (n, f) }).collect())
}

/// Minimal loopless matroids above `m` having at least one double point.
pub fn min_a(m: &Configuration) -> Result<Vec<Matroid>> {
    Ok(min_a_with_witness(m)?.into_iter().map(|(n, _)| n).collect())
}

/// The minimal configuration above `m` in which the triple `x` is collinear.
pub fn m_superset(m: &Configuration, x: PointSet) -> Result<Configuration> {
    if x.len() != 3 || !x.is_subset(m.points()) {
        return Err(Error::ValidationError(format!("{x} is not a triple of [{}]", m.d())));
    }
    if m.is_collinear(x) {
        return Err(Error::AlreadyDependent(x.to_vec()));
    }
    let mut edges = m.lines().to_vec();
    edges.push(x);
    close_under(&mut edges, |inter| inter.len() >= 2);
    Configuration::from_sets(m.d(), edges)
}

enum Step {
    Dominated,
    Follow(PointSet),
}

/// Minimal simple matroids above `m`, each returned as a configuration with the triple that generated it.
///
/// Triples meeting every line in at most one point give minimal members outright. The other
/// independent triples are explored through chains: closing the lines together with the last
/// triple of the chain either runs into a triple already handled (the chain is dominated),
/// creates a fresh triple (which extends the chain), or finishes, in which case the closure is
/// a new minimal member.
pub fn min_b_with_witness(m: &Configuration) -> Result<Vec<(Configuration, PointSet)>> {
    require_rank3(m)?;
    let full = m.points();
    let universe: Vec<PointSet> = full.subsets_of_size(3).into_iter().filter(|t| !m.is_collinear(*t)).collect();
    let (seeds, rest): (Vec<PointSet>, Vec<PointSet>) =
        universe.iter().partition(|t| m.lines().iter().all(|l| (**t & *l).len() <= 1));
    let mut visited: HashSet<PointSet> = seeds.iter().copied().collect();
    let mut out: Vec<(Configuration, PointSet)> = Vec::new();
    for &x in &seeds {
        out.push((m_superset(m, x)?, x));
    }
    let mut chain: Vec<PointSet> = Vec::new();
    let mut next_seed = rest.iter();
    while visited.len() < universe.len() {
        if chain.is_empty() {
            let x = *next_seed.by_ref().find(|t| !visited.contains(*t)).expect("an unvisited triple remains");
            chain.push(x);
        }
        let x = *chain.last().unwrap();
        let mut edges = m.lines().to_vec();
        edges.push(x);
        let in_chain: HashSet<PointSet> = chain.iter().copied().collect();
        let flow = close_under_with(
            &mut edges,
            |inter| inter.len() >= 2,
            |e| {
                let triples = e.subsets_of_size(3);
                if triples.iter().any(|t| visited.contains(t)) {
                    return ControlFlow::Break(Step::Dominated);
                }
                match triples.into_iter().find(|t| !m.is_collinear(*t) && !in_chain.contains(t)) {
                    Some(y) => ControlFlow::Break(Step::Follow(y)),
                    None => ControlFlow::Continue(()),
                }
            },
        );
        match flow {
            ControlFlow::Break(Step::Follow(y)) => chain.push(y),
            ControlFlow::Break(Step::Dominated) => visited.extend(chain.drain(..)),
            ControlFlow::Continue(()) => {
                out.push((Configuration::from_sets(m.d(), edges)?, chain[0]));
                visited.extend(chain.drain(..));
            }
        }
    }
    out.sort();
    out.dedup_by(|a, b| a.0 == b.0);
    Ok(out)
}

pub fn min_b(m: &Configuration) -> Result<Vec<Configuration>> {
    Ok(min_b_with_witness(m)?.into_iter().map(|(c, _)| c).collect())
}

/// Reference computation: the minimal elements among all single-triple closures.
pub fn min_b_exhaustive(m: &Configuration) -> Result<Vec<Configuration>> {
    require_rank3(m)?;
    let all: Vec<Matroid> = m
        .points()
        .subsets_of_size(3)
        .into_iter()
        .filter(|t| !m.is_collinear(*t))
        .map(|t| m_superset(m, t).map(|c| Matroid::from_configuration(&c)))
        .collect::<Result<_>>()?;
    let mut out: Vec<Configuration> = minimal_elements(all)
        .into_iter()
        .map(|n| Configuration::from_sets(m.d(), n.point_lines()).expect("simple matroid"))
        .collect();
    out.sort();
    Ok(out)
}

/// Points `i` for which turning `i` into a loop gives a minimal matroid above `m`.
pub fn m_zero(m: &Configuration) -> Result<PointSet> {
    require_rank3(m)?;
    let pts: Vec<u8> = m.points().to_vec();
    // A point on at most one line can be made parallel to a point of that line (or to any
    // point, if it is on no line), which gives a matroid strictly between `m` and the loop.
    // From two lines on, no identification of the point stays below the loop.
    let c1: Vec<u8> = pts.iter().copied().filter(|&p| m.degree(p) >= 2).collect();
    // Points whose non-collinear neighbourhood contains no edge, i.e. no 3-clique through them.
    let apart = |a: u8, b: u8| a != b && !m.connected(a, b);
    let in_triangle = |p: u8| {
        pts.iter().any(|&a| apart(p, a) && pts.iter().any(|&b| b > a && apart(p, b) && apart(a, b)))
    };
    let c2: PointSet = PointSet::from_points(pts.iter().copied().filter(|&p| !in_triangle(p)));
    let mut c3 = PointSet::EMPTY;
    for &j in c1.iter().filter(|&&j| c2.contains(j)) {
        let through: PointSet = m.lines_through(j).fold(PointSet::EMPTY, |acc, l| acc | *l);
        if m.lines().iter().filter(|l| !l.contains(j)).all(|l| !l.is_disjoint(through)) {
            c3.insert(j);
        }
    }
    Ok(c3)
}

/// Which family produced a minimal matroid, with the generating data.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Provenance {
    /// Identification of points, witnessed by a formula.
    Identification(Formula),
    /// Closure after making a triple collinear.
    AddedTriple(PointSet),
    /// A single point turned into a loop.
    Loop(u8),
}

impl Provenance {
    pub fn family(&self) -> &'static str {
        match self {
            Provenance::Identification(_) => "A",
            Provenance::AddedTriple(_) => "B",
            Provenance::Loop(_) => "C",
        }
    }

    pub fn describe(&self) -> String {
        match self {
            Provenance::Identification(f) => f.describe(),
            Provenance::AddedTriple(x) => format!("triple {x}"),
            Provenance::Loop(i) => format!("loop {i}"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Member {
    pub matroid: Matroid,
    pub provenance: Provenance,
}

/// The minimal matroids above an ambient configuration.
#[derive(Clone, Debug)]
pub struct MinimalSet {
    pub ambient: Configuration,
    pub members: Vec<Member>,
}

impl MinimalSet {
    pub fn matroids(&self) -> Vec<Matroid> {
        self.members.iter().map(|m| m.matroid.clone()).collect()
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn count_family(&self, family: &str) -> usize {
        self.members.iter().filter(|m| m.provenance.family() == family).count()
    }
}

/// All minimal matroids strictly above `m`.
pub fn min_matroids(m: &Configuration) -> Result<MinimalSet> {
    require_rank3(m)?;
    let a = min_a_with_witness(m)?;
    let b: Vec<(Matroid, PointSet)> =
        min_b_with_witness(m)?.into_iter().map(|(c, x)| (Matroid::from_configuration(&c), x)).collect();
    let zero = m_zero(m)?;
    let base = Matroid::from_configuration(m);
    let mut members = Vec::new();
    for (n, f) in a {
        if !b.iter().any(|(s, _)| s.leq_unchecked(&n)) {
            members.push(Member { matroid: n, provenance: Provenance::Identification(f) });
        }
    }
    for (n, x) in b {
        members.push(Member { matroid: n, provenance: Provenance::AddedTriple(x) });
    }
    for i in zero.iter() {
        members.push(Member { matroid: base.add_loop(i)?, provenance: Provenance::Loop(i) });
    }
    members.sort_by(|x, y| x.matroid.cmp(&y.matroid));
    Ok(MinimalSet { ambient: m.clone(), members })
}
