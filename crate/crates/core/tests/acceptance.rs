//! Acceptance harness: one PASS/FAIL line per criterion, with the pinned tolerance and the
//! runtime limit next to the measured values.
//!
//! Every count below is compared exactly. A criterion also fails when its runtime limit is
//! exceeded. Criteria listed in `KNOWN_FAILURES` still print FAIL; they only keep the process
//! exit status at zero, and a listed criterion that starts passing is itself reported as an
//! error so the list cannot go stale.

mod common;

use std::collections::BTreeMap;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use minmat::cli::{self, Command};
use minmat::facts::FactTable;
use minmat::oracle::{all_configurations, brute_minimal, EnumerationBudget};
use minmat::search::{m_zero, min_a, min_matroids};
use minmat::symmetry::{automorphisms, canonical_form, orbit_classify};
use minmat::variety::{decompose, DEFAULT_DEPTH};
use minmat::xmatroid::XSystem;
use minmat::{library, Matroid, PointSet};
use proptest::prelude::ProptestConfig;
use proptest::strategy::Strategy;
use proptest::test_runner::{TestCaseError, TestRunner};

use common::laws;

/// Criteria expected to fail, with the reason recorded next to the analysis.
const KNOWN_FAILURES: &[(u8, &str)] = &[(
    1,
    "Aut(QS) splits min_A(QS) into 4 orbits: identifying a pair of points on no common line is \
     isomorphic to, but not in the orbit of, identifying a collinear pair",
)];

struct Outcome {
    id: u8,
    title: &'static str,
    tolerance: &'static str,
    limit: Duration,
    elapsed: Duration,
    ok: bool,
    detail: String,
}

impl Outcome {
    fn pass(&self) -> bool {
        self.ok && self.elapsed <= self.limit
    }

    fn line(&self) -> String {
        let verdict = if self.pass() { "PASS" } else { "FAIL" };
        let over = if self.elapsed > self.limit { " OVER LIMIT" } else { "" };
        format!(
            "{verdict} [{}] {}: {} | tolerance {} | {:.2?} (limit {:?}){over}",
            self.id, self.title, self.detail, self.tolerance, self.elapsed, self.limit
        )
    }
}

fn timed<F: FnOnce() -> (bool, String)>(
    id: u8,
    title: &'static str,
    tolerance: &'static str,
    limit: Duration,
    f: F,
) -> Outcome {
    let start = Instant::now();
    let (ok, detail) = f();
    Outcome { id, title, tolerance, limit, elapsed: start.elapsed(), ok, detail }
}

fn secs(s: u64) -> Duration {
    Duration::from_secs(s)
}

fn get(name: &str) -> minmat::Configuration {
    library::get(name).expect("library configuration")
}

fn isomorphism_types(ms: &[Matroid]) -> usize {
    let forms: std::collections::BTreeSet<Matroid> = ms.iter().map(|m| canonical_form(m).unwrap()).collect();
    forms.len()
}

fn criterion_1() -> Outcome {
    timed(1, "min_A(QS) has 25 members in 3 orbit classes under Aut(QS)", "exact", secs(1), || {
        let qs = get("qs");
        let set = min_a(&qs).unwrap();
        let orbits = orbit_classify(&automorphisms(&qs), &set);
        let sizes: Vec<usize> = orbits.iter().map(|o| o.size()).collect();
        let types = isomorphism_types(&set);
        let ok = set.len() == 25 && orbits.len() == 3;
        (ok, format!("{} members, {} orbits {:?}, {} isomorphism types (want 25, 3)", set.len(), orbits.len(), sizes, types))
    })
}

fn criterion_2() -> Vec<Outcome> {
    let cases: [(&str, usize); 5] = [("fano", 22), ("maclane", 25), ("affine3", 31), ("pappus", 30), ("k9", 49)];
    cases
        .iter()
        .map(|&(name, want)| {
            timed(2, "min_matroids count", "exact", secs(30), || {
                let c = get(name);
                let set = min_matroids(&c).unwrap().matroids();
                let mut sizes: Vec<usize> = orbit_classify(&automorphisms(&c), &set).iter().map(|o| o.size()).collect();
                sizes.sort();
                (set.len() == want, format!("{name} {} (want {want}), orbit sizes {sizes:?}", set.len()))
            })
        })
        .collect()
}

fn criterion_3() -> Outcome {
    timed(3, "m_zero: Fano gives [7], Pappus gives the empty set", "exact", secs(1), || {
        let f = m_zero(&get("fano")).unwrap();
        let p = m_zero(&get("pappus")).unwrap();
        (f == PointSet::full(7) && p.is_empty(), format!("fano {f}, pappus {p}"))
    })
}

fn criterion_4() -> Outcome {
    timed(4, "min_matroids equals brute force on every rank-3 configuration with d <= 6", "exact", secs(600), || {
        let budget = EnumerationBudget::default();
        let mut per_d = Vec::new();
        let mut bad = 0;
        for d in 3..=6 {
            let mut seen = std::collections::BTreeSet::new();
            for c in all_configurations(d) {
                if c.rank() != 3 || !seen.insert(canonical_form(&Matroid::from_configuration(&c)).unwrap()) {
                    continue;
                }
                let mut found = min_matroids(&c).unwrap().matroids();
                found.sort();
                if found != brute_minimal(&Matroid::from_configuration(&c), &budget).unwrap() {
                    bad += 1;
                }
            }
            per_d.push(format!("d={d}: {}", seen.len()));
        }
        (bad == 0, format!("{bad} mismatches over isomorphism classes ({})", per_d.join(", ")))
    })
}

/// Component counts per isomorphism type; the two components of one matroid variety count 2.
fn type_counts(name: &str, facts: &FactTable) -> (bool, Vec<usize>, usize) {
    let d = decompose(&get(name), facts, DEFAULT_DEPTH).unwrap();
    let mut by_type: BTreeMap<Matroid, usize> = BTreeMap::new();
    for c in &d.components {
        *by_type.entry(canonical_form(&c.matroid).unwrap()).or_default() += 1;
    }
    let mut v: Vec<usize> = by_type.into_values().collect();
    v.sort();
    (d.complete, v, d.len())
}

fn criterion_5() -> Vec<Outcome> {
    let facts = FactTable::shipped();
    let cases: [(&str, &[usize]); 5] = [
        ("fano", &[1, 7, 7, 7]),
        ("maclane", &[1, 2, 4, 8, 8]),
        ("affine3", &[1, 2, 9, 12, 18, 36]),
        ("pappus", &[1, 1, 3, 9, 9]),
        ("k9", &[1, 1, 9, 9, 9]),
    ];
    cases
        .iter()
        .map(|&(name, want)| {
            timed(5, "decomposition component multiset", "exact", secs(60), || {
                let (complete, got, total) = type_counts(name, &facts);
                let want_total: usize = want.iter().sum();
                let ok = complete && got == want && total == want_total;
                (ok, format!("{name} {total} components, per type {got:?} (want {want_total}, {want:?})"))
            })
        })
        .collect()
}

fn criterion_6() -> Outcome {
    timed(6, "X-system on seven points: val = 3, v = 2, minimal set {U(2,7)}", "exact", secs(5), || {
        let fam = [[1, 4, 5], [2, 4, 5], [1, 6, 7], [2, 6, 7], [1, 2, 3]];
        let sys = XSystem::new(7, fam.iter().map(|t| PointSet::from_points(t.iter().copied())).collect()).unwrap();
        let full = PointSet::full(7);
        let val = sys.val_x(full);
        let v = sys.v_x().unwrap()[full.0 as usize];
        let mins = sys.minimal_x_matroids_rank3().unwrap();
        let ok = val == 3 && v == 2 && mins == vec![Matroid::uniform_rank2(7, full).unwrap()];
        (ok, format!("val {val}, v {v}, {} minimal X-matroids", mins.len()))
    })
}

fn run_law<S, F>(name: &str, strategy: S, check: F) -> (bool, String)
where
    S: Strategy,
    F: Fn(S::Value) -> Result<(), TestCaseError>,
{
    let mut runner = TestRunner::new(ProptestConfig { failure_persistence: None, ..laws::config() });
    match runner.run(&strategy, check) {
        Ok(()) => (true, format!("{name} {}", laws::CASES)),
        Err(e) => (false, format!("{name} FAILED: {e}")),
    }
}

fn criterion_7() -> Outcome {
    timed(7, "property suites, 1000 cases each", "zero failures", secs(600), || {
        let results = [
            run_law("merge_closure", laws::merge_input(), laws::merge_closure_laws),
            run_law("plc_closure", laws::hypergraph_pair(), laws::plc_closure_laws),
            run_law("delta_f", laws::delta_input(), laws::incremental_delta),
            run_law("v_x", laws::xsystem(7), laws::v_x_laws),
            run_law("rank<=v<=val", laws::x_matroid_input(), laws::rank_below_v_x),
            run_law("dependency_leq", laws::leq_input(), laws::dependency_leq_brute),
            run_law("canonical_form", laws::relabel_input(), laws::canonical_invariance),
            run_law("orbits", laws::orbit_input(), laws::orbits_partition),
        ];
        let ok = results.iter().all(|r| r.0);
        (ok, results.iter().map(|r| r.1.as_str()).collect::<Vec<_>>().join(", "))
    })
}

fn criterion_8() -> Outcome {
    timed(8, "repeated min/decompose runs give byte-identical JSON", "byte-identical", secs(600), || {
        let mut differing = Vec::new();
        let mut checked = 0;
        for name in library::names() {
            let commands = [
                Command::Min { config: name.to_string() },
                Command::Decompose { config: name.to_string(), facts: "shipped".into(), depth: DEFAULT_DEPTH },
            ];
            for cmd in &commands {
                let a = cli::render_json(&cli::report(cmd).unwrap().json);
                let b = cli::render_json(&cli::report(cmd).unwrap().json);
                checked += 1;
                if a != b {
                    differing.push(format!("{cmd:?}"));
                }
            }
        }
        (differing.is_empty(), format!("{checked} reports compared, {} differ {:?}", differing.len(), differing))
    })
}

fn main() -> ExitCode {
    let mut outcomes = vec![criterion_1()];
    outcomes.extend(criterion_2());
    outcomes.push(criterion_3());
    outcomes.push(criterion_4());
    outcomes.extend(criterion_5());
    outcomes.push(criterion_6());
    outcomes.push(criterion_7());
    outcomes.push(criterion_8());

    for o in &outcomes {
        println!("{}", o.line());
    }

    let mut verdicts: BTreeMap<u8, bool> = BTreeMap::new();
    for o in &outcomes {
        *verdicts.entry(o.id).or_insert(true) &= o.pass();
    }
    let passed = verdicts.values().filter(|&&p| p).count();
    println!("{passed}/{} criteria pass", verdicts.len());

    let mut unexpected = false;
    for (&id, &pass) in &verdicts {
        match (KNOWN_FAILURES.iter().find(|k| k.0 == id), pass) {
            (Some((_, why)), false) => println!("known failure [{id}]: {why}"),
            (Some(_), true) => {
                println!("criterion {id} now passes; remove it from KNOWN_FAILURES");
                unexpected = true;
            }
            (None, false) => unexpected = true,
            (None, true) => {}
        }
    }
    if unexpected {
        ExitCode::FAILURE
    } else {
        ExitCode::SUCCESS
    }
}
