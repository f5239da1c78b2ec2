//! Builder for the shipped fact table.
//!
//! Every entry is a known geometric statement about one of the library configurations.
//! The builder states each fact on concrete labelled matroids, and the table stores them keyed
//! by canonical form. `data/facts.json` is the serialized output, and a test keeps the two in
//! step.

use crate::error::{Error, Result};
use crate::facts::FactTable;
use crate::library;
use crate::model::{Configuration, Matroid};
use crate::pointset::PointSet;
use crate::search::min_matroids;
use crate::variety::NodeKind::{self, CircuitVariety as Circuit, MatroidVariety as Variety};

fn ps(points: &[u8]) -> PointSet {
    PointSet::from_points(points.iter().copied())
}

fn config(name: &str) -> Result<Matroid> {
    Ok(Matroid::from_configuration(&library::get(name)?))
}

fn configuration(d: usize, lines: &[&str]) -> Result<Matroid> {
    let lines: Vec<Vec<i64>> = lines.iter().map(|l| l.bytes().map(|b| (b - b'0') as i64).collect()).collect();
    Ok(Matroid::from_configuration(&Configuration::new(d, &lines)?))
}

fn with_loops(m: &Matroid, points: &[u8]) -> Result<Matroid> {
    points.iter().try_fold(m.clone(), |acc, &p| acc.add_loop(p))
}

/// The configuration `m` with one more three-point line.
fn with_line(m: &Matroid, line: &[u8]) -> Result<Matroid> {
    let mut lines = m.point_lines();
    lines.push(ps(line));
    let classes = m.classes().to_vec();
    Matroid::from_point_lines(m.d(), m.loops(), classes, &lines)
}

fn uniform(m: &Matroid) -> Result<Matroid> {
    Matroid::uniform_rank2(m.d(), m.non_loops())
}

/// The members of `min(m)` satisfying `pred`; `m` must be simple.
fn minimal_where(m: &Matroid, pred: impl Fn(&Matroid) -> bool) -> Result<Vec<Matroid>> {
    let c = m.geometry()?;
    Ok(min_matroids(&c)?.matroids().into_iter().filter(|n| pred(n)).collect())
}

fn targets(list: &[(NodeKind, &Matroid)]) -> Vec<(NodeKind, Matroid)> {
    list.iter().map(|(k, m)| (*k, (*m).clone())).collect()
}

/// The collapsed-line matroids of `m`: one three-point line kept, every other point in a single
/// class off it.
fn collapsed_lines(m: &Matroid) -> Result<Vec<Matroid>> {
    m.point_lines()
        .into_iter()
        .map(|l| {
            let mut classes: Vec<PointSet> = l.iter().map(PointSet::singleton).collect();
            classes.push(m.non_loops() - l);
            Matroid::from_point_lines(m.d(), m.loops(), classes, &[l])
        })
        .collect()
}

/// Builds the shipped fact table.
pub fn build() -> Result<FactTable> {
    let mut t = FactTable::empty();
    fano(&mut t)?;
    maclane(&mut t)?;
    affine(&mut t)?;
    pappus(&mut t)?;
    k9(&mut t)?;
    Ok(t)
}

fn fano(t: &mut FactTable) -> Result<()> {
    t.add_realizable(&config("fano")?, false, "the Fano plane has no realization over the complex numbers")
}

/// The 7-point configuration obtained by deleting a point of the MacLane configuration.
fn maclane_minus_point() -> Result<Matroid> {
    configuration(7, &["634", "627", "615", "235", "147"])
}

fn maclane(t: &mut FactTable) -> Result<()> {
    let m = config("maclane")?;
    t.add_realizable(&m, true, "the MacLane configuration is realizable over the complex numbers")?;
    t.add_components(&m, 2, "component count: the MacLane matroid variety has two irreducible components")?;
    for a in collapsed_lines(&m)? {
        t.add_containment(&a, &m, "MacLane: each collapsed-line matroid variety lies in V_M")?;
    }
    let n = maclane_minus_point()?;
    t.add_cover(
        &n,
        &targets(&[(Variety, &n), (Variety, &uniform(&n)?), (Variety, &n.add_loop(6)?)]),
        "MacLane minus a point: its circuit variety is V_N ∪ V_U(2,7) ∪ V_N(6), N(6) making the point of degree three a loop",
    )?;
    Ok(())
}

fn affine(t: &mut FactTable) -> Result<()> {
    let m = config("affine3")?;
    t.add_realizable(&m, true, "the affine plane of order three is realizable over the complex numbers")?;
    t.add_components(&m, 2, "component count: the matroid variety of the affine plane of order three has two irreducible components")?;
    for a in collapsed_lines(&m)? {
        t.add_containment(&a, &m, "affine plane of order three: each collapsed-line matroid variety lies in V_M")?;
    }
    Ok(())
}

/// A line through every point except `x`: the three pairs sharing a line with `x` become
/// double points, the remaining points stay single, and `x` is free.
fn five_point_line(m: &Matroid, x: u8) -> Result<Matroid> {
    let mut classes = vec![PointSet::singleton(x)];
    let mut covered = PointSet::singleton(x);
    for l in m.point_lines().into_iter().filter(|l| l.contains(x)) {
        let pair = l.without(x);
        classes.push(pair);
        covered |= pair;
    }
    classes.extend((m.non_loops() - covered).iter().map(PointSet::singleton));
    let line = m.non_loops().without(x);
    Matroid::from_point_lines(m.d(), m.loops(), classes, &[line])
}

/// Pairs of distinct points not on a common line.
fn unconnected_pairs(m: &Matroid) -> Vec<(u8, u8)> {
    let lines = m.point_lines();
    let pts = m.non_loops().to_vec();
    let mut out = Vec::new();
    for (i, &a) in pts.iter().enumerate() {
        for &b in &pts[i + 1..] {
            if !lines.iter().any(|l| l.contains(a) && l.contains(b)) {
                out.push((a, b));
            }
        }
    }
    out
}

fn pappus(t: &mut FactTable) -> Result<()> {
    let m = config("pappus")?;
    let d = m.d() as u8;
    t.add_realizable(&m, true, "the Pappus configuration is realizable over the complex numbers")?;
    t.add_components(&m, 1, "component count: the Pappus matroid variety is irreducible")?;
    let u = uniform(&m)?;
    // The three triples of pairwise unconnected points, each of which may become a fourth line.
    let extra: [[u8; 3]; 3] = [[1, 4, 9], [2, 5, 8], [3, 6, 7]];
    let fives: Vec<Matroid> = (1..=d).map(|x| five_point_line(&m, x)).collect::<Result<_>>()?;
    let single_loops: Vec<Matroid> = (1..=d).map(|i| m.add_loop(i)).collect::<Result<_>>()?;
    let identify3 = minimal_where(&m, |n| n.classes().iter().any(|c| c.len() == 3))?;
    let identify_pairs = minimal_where(&m, |n| n.classes().iter().filter(|c| c.len() == 2).count() == 3)?;
    let (collinear_loops, unconnected_loops): (Vec<Matroid>, Vec<Matroid>) = {
        let unconnected = unconnected_pairs(&m);
        let mut a = Vec::new();
        let mut b = Vec::new();
        for i in 1..=d {
            for j in i + 1..=d {
                let n = with_loops(&m, &[i, j])?;
                if unconnected.contains(&(i, j)) {
                    b.push(n);
                } else {
                    a.push(n);
                }
            }
        }
        (a, b)
    };

    for n in &identify3 {
        t.add_cover(
            n,
            &targets(&[(Variety, &m), (Variety, &u)]),
            "Pappus: identifying three pairwise connected points not on a line gives a circuit variety inside V_Pappus ∪ V_U(2,9)",
        )?;
    }
    for n in &identify_pairs {
        t.add_cover(
            n,
            &targets(&[(Variety, &m)]),
            "Pappus: identifying three disjoint pairs as 1=3, 4=6, 7=9 gives a nilpotent matroid whose variety lies in V_Pappus",
        )?;
    }
    for n in &collinear_loops {
        t.add_cover(
            n,
            &targets(&[(Variety, &m)]),
            "Pappus: making two collinear points loops gives a circuit variety inside V_Pappus",
        )?;
    }
    for n in &unconnected_loops {
        let centre = n
            .non_loops()
            .iter()
            .find(|&p| n.point_lines().iter().filter(|l| l.contains(p)).count() == 3)
            .ok_or_else(|| Error::ValidationError("two unconnected loops leave a point of degree three".into()))?;
        t.add_cover(
            n,
            &targets(&[(Variety, n), (Variety, &n.add_loop(centre)?)]),
            "Pappus: with two unconnected points as loops, the circuit variety is V_F ∪ V_F', F' also making the remaining point of degree three a loop",
        )?;
    }
    for i in 1..=d {
        t.add_containment(&single_loops[i as usize - 1], &m, "Pappus: each single-loop matroid variety lies in V_Pappus")?;
    }
    // The minimal matroids of a single-loop matroid that identify points are redundant; being
    // irreducible and above no other component, each lies in V_Pappus.
    for single in &single_loops {
        let g = single.geometry()?;
        for n in min_matroids(&g)?.matroids() {
            let lifted = single.lift(&n)?;
            if lifted.has_double_point() {
                t.add_containment(
                    &lifted,
                    &m,
                    "Pappus: the minimal matroids of a single-loop matroid that identify points lie in V_Pappus",
                )?;
            }
        }
    }
    for x in extra {
        let a = with_line(&m, &x)?;
        let mut ts = vec![(Variety, m.clone()), (Variety, u.clone())];
        ts.extend(single_loops.iter().map(|n| (Circuit, n.clone())));
        ts.extend(fives.iter().map(|n| (Variety, n.clone())));
        ts.extend(identify3.iter().chain(&identify_pairs).map(|n| (Circuit, n.clone())));
        t.add_cover(
            &a,
            &ts,
            "Pappus: adding one of the triples 149, 258, 367 as a line gives a circuit variety covered by V_Pappus, V_U(2,9), the single-loop circuit varieties, the five-point-line matroids and the remaining minimal matroids",
        )?;
        for i in (1..=d).filter(|i| !x.contains(i)) {
            let h = with_line(&single_loops[i as usize - 1], &x)?;
            let mut ts = vec![(Variety, m.clone()), (Variety, u.clone())];
            ts.extend(single_loops.iter().map(|n| (Variety, n.clone())));
            ts.extend(unconnected_loops.iter().chain(&collinear_loops).map(|n| (Circuit, n.clone())));
            ts.extend(fives.iter().map(|n| (Variety, n.clone())));
            t.add_cover(
                &h,
                &ts,
                "Pappus: a single loop plus one of the triples 149, 258, 367 as a line gives a circuit variety covered by V_Pappus, V_U(2,9), the single-loop matroid varieties, the two-loop circuit varieties and the five-point-line matroids",
            )?;
        }
    }
    Ok(())
}

/// Sorted sizes of the parallel classes with at least two points.
fn class_shape(n: &Matroid) -> Vec<usize> {
    let mut v: Vec<usize> = n.classes().iter().map(|c| c.len()).filter(|&k| k > 1).collect();
    v.sort();
    v
}

fn k9(t: &mut FactTable) -> Result<()> {
    let m = config("k9")?;
    t.add_realizable(&m, true, "the second 9_3 configuration is realizable over the complex numbers")?;
    t.add_components(&m, 1, "component count: the matroid variety of the second 9_3 configuration is irreducible")?;
    let u = uniform(&m)?;
    let shape = |s: &'static [usize]| move |n: &Matroid| n.loops().is_empty() && class_shape(n) == s;
    for n in minimal_where(&m, shape(&[5]))? {
        t.add_cover(&n, &targets(&[(Variety, &m)]), "second 9_3: identifying five points as 1=3=4=5=9 gives a variety inside V_K9")?;
    }
    for n in minimal_where(&m, shape(&[2, 4]))? {
        t.add_cover(&n, &targets(&[(Variety, &m)]), "second 9_3: identifying 3=6 and 2=4=5=8 gives a variety inside V_K9")?;
    }
    for n in minimal_where(&m, shape(&[2, 3]))? {
        t.add_cover(
            &n,
            &targets(&[(Variety, &m), (Variety, &u)]),
            "second 9_3: identifying 1=4=9 and 6=8 gives a circuit variety inside V_K9 ∪ V_U(2,9)",
        )?;
    }
    for n in minimal_where(&m, shape(&[3]))? {
        t.add_cover(
            &n,
            &targets(&[(Variety, &m), (Variety, &u)]),
            "second 9_3: identifying 1=2=3 with 1,7,8,9 dependent gives a circuit variety inside V_K9 ∪ V_U(2,9)",
        )?;
    }
    let unconnected = unconnected_pairs(&m);
    for i in 1..=m.d() as u8 {
        let mi = m.add_loop(i)?;
        let mut ts = vec![(Variety, mi.clone()), (Variety, u.clone())];
        for &(a, b) in unconnected.iter().filter(|(a, b)| *a == i || *b == i) {
            let other = if a == i { b } else { a };
            ts.push((Variety, mi.add_loop(other)?));
        }
        t.add_cover(
            &mi,
            &ts,
            "second 9_3: with one point a loop, the circuit variety is V_K9(i) ∪ V_U(2,9) together with the two matroids also making a point unconnected to i a loop",
        )?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::facts::SHIPPED_FACTS;

    #[test]
    fn shipped_table_matches_builder() {
        let built = build().unwrap().to_json();
        assert!(
            built == SHIPPED_FACTS,
            "data/facts.json is stale; regenerate it with `cargo run -p minmat --example write_facts`"
        );
    }
}
