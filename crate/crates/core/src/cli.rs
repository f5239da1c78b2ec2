//! Command-line front end: argument parsing, verb dispatch and report emission.
//!
//! Every verb prints a human-readable summary to standard output. With `--json PATH` the same
//! result is also written as a structured report whose bytes depend only on the input.

use std::collections::BTreeSet;
use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::facts::FactTable;
use crate::io::{parse_config, parse_xsystem_json, ConfigurationRecord, MatroidRecord, XSystemRecord};
use crate::library;
use crate::model::{Configuration, Matroid};
use crate::oracle::{self, EnumerationBudget};
use crate::pointset::PointSet;
use crate::search;
use crate::symmetry::{automorphisms, canonical_form, orbit_classify, PermutationGroup};
use crate::variety::{self, NodeKind, NodeStatus, VarietyNode, DEFAULT_DEPTH};
use crate::xmatroid::XSystem;

#[derive(Debug, Parser)]
#[command(name = "minmat", version, about = "Minimal matroids, circuit-variety decompositions and X-matroid bounds")]
pub struct Cli {
    /// Also write the structured report to PATH.
    #[arg(long, global = true, value_name = "PATH")]
    pub json: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// All minimal matroids above a configuration, grouped into orbits of its automorphism group.
    Min {
        /// Library name or path to a configuration JSON file.
        config: String,
    },
    /// Minimal matroids obtained by identifying points.
    MinA { config: String },
    /// Minimal configurations obtained by adding a collinear triple.
    MinB { config: String },
    /// Points whose turning into a loop gives a minimal matroid.
    MZero { config: String },
    /// Decompose the circuit variety into matroid varieties.
    Decompose {
        config: String,
        /// `shipped`, `none`, or a path to a fact table JSON file.
        #[arg(long, default_value = "shipped")]
        facts: String,
        /// Maximum refinement depth.
        #[arg(long, default_value_t = DEFAULT_DEPTH)]
        depth: usize,
    },
    /// Automorphism group of a configuration.
    Aut { config: String },
    /// Rank upper bound from proper X-sequences.
    Xval {
        /// X-system JSON file `{"d": .., "X": [[..], ..]}`.
        #[arg(long)]
        file: PathBuf,
        /// `all` for the whole table, or a comma-separated subset such as `1,2,5`.
        #[arg(long, default_value = "all")]
        set: String,
    },
    /// Submodular refinement of the X-sequence bound.
    Vx {
        #[arg(long)]
        file: PathBuf,
        #[arg(long, default_value = "all")]
        set: String,
    },
    /// Minimal rank-3 X-matroids.
    MinX {
        #[arg(long)]
        file: PathBuf,
    },
    /// Compare the algorithm against exhaustive enumeration.
    OracleCheck {
        /// A configuration to check; omit to sweep every configuration up to `--max-d`.
        config: Option<String>,
        /// Largest ground set of the sweep.
        #[arg(long, default_value_t = 6)]
        max_d: usize,
    },
    /// List the named configurations.
    Library,
}

/// Exit status for an error: 2 when a budget or depth limit ran out, 1 otherwise.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::BudgetExceeded(_) | Error::DepthExhausted(_) => 2,
        _ => 1,
    }
}

/// Parses `args` (program name first), runs the verb and returns the exit status.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let benign = matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion);
            let _ = if benign {
                write!(out, "{e}")
            } else {
                // clap's rendering spans several lines; keep the diagnostic to its first one.
                let text = e.to_string();
                writeln!(err, "{}", text.lines().find(|l| !l.trim().is_empty()).unwrap_or("invalid arguments"))
            };
            return if benign { 0 } else { 1 };
        }
    };
    match execute(&cli, out) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

/// Runs a parsed command, writing the text report to `out` and the JSON report if requested.
pub fn execute(cli: &Cli, out: &mut dyn Write) -> Result<()> {
    let Report { text, json, outcome } = report(&cli.command)?;
    out.write_all(text.as_bytes()).map_err(io_err)?;
    if let Some(path) = &cli.json {
        std::fs::write(path, render_json(&json))
            .map_err(|e| Error::ValidationError(format!("cannot write {}: {e}", path.display())))?;
    }
    outcome
}

/// Output of one verb.
#[derive(Debug)]
pub struct Report {
    /// Human-readable table.
    pub text: String,
    /// Structured encoding written by `--json`.
    pub json: serde_json::Value,
    /// `Err` when the verb ran but its result signals failure, e.g. an incomplete decomposition.
    pub outcome: Result<()>,
}

/// Pretty-printed JSON with a trailing newline, exactly as `--json` writes it.
pub fn render_json(v: &serde_json::Value) -> String {
    let mut body = serde_json::to_string_pretty(v).expect("report serializes");
    body.push('\n');
    body
}

/// Computes the report of a command without writing anything.
pub fn report(command: &Command) -> Result<Report> {
    match command {
        Command::Min { config } => report_min(&parse_config(config)?),
        Command::MinA { config } => report_min_a(&parse_config(config)?),
        Command::MinB { config } => report_min_b(&parse_config(config)?),
        Command::MZero { config } => report_m_zero(&parse_config(config)?),
        Command::Decompose { config, facts, depth } => {
            report_decompose(&parse_config(config)?, &load_facts(facts)?, facts, *depth)
        }
        Command::Aut { config } => report_aut(&parse_config(config)?),
        Command::Xval { file, set } => report_xval(&load_xsystem(file)?, set),
        Command::Vx { file, set } => report_vx(&load_xsystem(file)?, set),
        Command::MinX { file } => report_min_x(&load_xsystem(file)?),
        Command::OracleCheck { config: Some(c), .. } => report_oracle_one(&parse_config(c)?),
        Command::OracleCheck { config: None, max_d } => report_oracle_sweep(*max_d),
        Command::Library => Ok(report_library()),
    }
}

fn done(text: String, json: serde_json::Value) -> Result<Report> {
    Ok(Report { text, json, outcome: Ok(()) })
}

fn io_err(e: std::io::Error) -> Error {
    Error::ValidationError(format!("cannot write output: {e}"))
}

fn to_value<T: Serialize>(v: &T) -> serde_json::Value {
    serde_json::to_value(v).expect("report serializes")
}

/// `shipped`, `none`, or a path to a fact table file.
pub fn load_facts(source: &str) -> Result<FactTable> {
    match source {
        "shipped" => Ok(FactTable::shipped()),
        "none" => Ok(FactTable::empty()),
        path => {
            let text = std::fs::read_to_string(path).map_err(|e| Error::ParseError(format!("{path}: {e}")))?;
            FactTable::from_json(&text)
        }
    }
}

fn load_xsystem(path: &Path) -> Result<XSystem> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::ParseError(format!("{}: {e}", path.display())))?;
    parse_xsystem_json(&text)
}

/// `all` selects the whole table; otherwise a comma- or space-separated list of points.
fn parse_set(source: &str, d: usize) -> Result<Option<PointSet>> {
    let source = source.trim();
    if source.eq_ignore_ascii_case("all") {
        return Ok(None);
    }
    let mut s = PointSet::EMPTY;
    for tok in source.split(|c: char| c == ',' || c.is_whitespace()).filter(|t| !t.is_empty()) {
        let p: i64 = tok.parse().map_err(|_| Error::ParseError(format!("--set: {tok:?} is not a point label")))?;
        if p < 1 || p > d as i64 {
            return Err(Error::LabelOutOfRange { label: p, d });
        }
        s.insert(p as u8);
    }
    Ok(Some(s))
}

/// Compact text form: `rank 3; loops {7}; parallel {1,2}; lines {1,2,3} {1,5,6}`.
pub fn describe_matroid(m: &Matroid) -> String {
    let mut parts = vec![format!("rank {}", m.rank())];
    if !m.loops().is_empty() {
        parts.push(format!("loops {}", m.loops()));
    }
    let parallel: Vec<String> = m.classes().iter().filter(|c| c.len() > 1).map(|c| c.to_string()).collect();
    if !parallel.is_empty() {
        parts.push(format!("parallel {}", parallel.join(" ")));
    }
    let lines: Vec<String> = m.point_lines().iter().map(|l| l.to_string()).collect();
    if !lines.is_empty() {
        parts.push(format!("lines {}", lines.join(" ")));
    }
    parts.join("; ")
}

/// Sorts matroids by canonical form, breaking ties by the labelled matroid itself.
fn canonical_order(ms: Vec<Matroid>) -> Result<Vec<Matroid>> {
    let mut keyed = ms.into_iter().map(|m| Ok((canonical_form(&m)?, m))).collect::<Result<Vec<_>>>()?;
    keyed.sort();
    Ok(keyed.into_iter().map(|(_, m)| m).collect())
}

#[derive(Serialize)]
struct OrbitRecord {
    size: usize,
    representative: MatroidRecord,
    members: Vec<MatroidRecord>,
}

fn orbit_records(g: &PermutationGroup, set: &[Matroid]) -> Vec<OrbitRecord> {
    orbit_classify(g, set)
        .into_iter()
        .map(|o| OrbitRecord {
            size: o.size(),
            representative: (&o.representative).into(),
            members: o.members.iter().map(MatroidRecord::from).collect(),
        })
        .collect()
}

fn orbit_text(g: &PermutationGroup, set: &[Matroid]) -> String {
    let mut s = String::new();
    for (i, o) in orbit_classify(g, set).iter().enumerate() {
        s.push_str(&format!("  class {}: size {}, e.g. {}\n", i + 1, o.size(), describe_matroid(&o.representative)));
    }
    s
}

#[derive(Serialize)]
struct MemberRecord {
    family: &'static str,
    provenance: String,
    matroid: MatroidRecord,
}

fn report_min(c: &Configuration) -> Result<Report> {
    let set = search::min_matroids(c)?;
    let g = automorphisms(c);
    let order = canonical_order(set.matroids())?;
    let members: Vec<MemberRecord> = order
        .iter()
        .map(|m| {
            let member = set.members.iter().find(|x| &x.matroid == m).expect("member of the set");
            MemberRecord {
                family: member.provenance.family(),
                provenance: member.provenance.describe(),
                matroid: m.into(),
            }
        })
        .collect();
    let orbits = orbit_records(&g, &order);
    let mut text = format!(
        "{} minimal matroids in {} orbit classes (identifications {}, added triples {}, loops {})\n",
        order.len(),
        orbits.len(),
        set.count_family("A"),
        set.count_family("B"),
        set.count_family("C"),
    );
    text.push_str(&orbit_text(&g, &order));
    let json = serde_json::json!({
        "command": "min",
        "ambient": ConfigurationRecord::from(c),
        "count": order.len(),
        "family_counts": {"A": set.count_family("A"), "B": set.count_family("B"), "C": set.count_family("C")},
        "automorphism_group_order": g.order().to_string(),
        "orbit_classes": orbits,
        "members": members,
    });
    done(text, json)
}

fn report_min_a(c: &Configuration) -> Result<Report> {
    let witnessed = search::min_a_with_witness(c)?;
    let g = automorphisms(c);
    let order = canonical_order(witnessed.iter().map(|(m, _)| m.clone()).collect())?;
    let orbits = orbit_records(&g, &order);
    let mut text = format!("{} minimal matroids from identifications in {} orbit classes\n", order.len(), orbits.len());
    text.push_str(&orbit_text(&g, &order));
    let members: Vec<serde_json::Value> = order
        .iter()
        .map(|m| {
            let f = &witnessed.iter().find(|(n, _)| n == m).expect("member").1;
            serde_json::json!({"formula": f.describe(), "matroid": MatroidRecord::from(m)})
        })
        .collect();
    let json = serde_json::json!({
        "command": "min-a",
        "ambient": ConfigurationRecord::from(c),
        "count": order.len(),
        "orbit_classes": orbits,
        "members": members,
    });
    done(text, json)
}

fn report_min_b(c: &Configuration) -> Result<Report> {
    let witnessed = search::min_b_with_witness(c)?;
    let g = automorphisms(c);
    let order = canonical_order(witnessed.iter().map(|(n, _)| Matroid::from_configuration(n)).collect())?;
    let orbits = orbit_records(&g, &order);
    let mut text = format!("{} minimal configurations from added triples in {} orbit classes\n", order.len(), orbits.len());
    text.push_str(&orbit_text(&g, &order));
    let members: Vec<serde_json::Value> = order
        .iter()
        .map(|m| {
            let x = witnessed.iter().find(|(n, _)| &Matroid::from_configuration(n) == m).expect("member").1;
            serde_json::json!({"triple": x.to_vec(), "configuration": ConfigurationRecord::from(&m.geometry().expect("simple"))})
        })
        .collect();
    let json = serde_json::json!({
        "command": "min-b",
        "ambient": ConfigurationRecord::from(c),
        "count": order.len(),
        "orbit_classes": orbits,
        "members": members,
    });
    done(text, json)
}

fn report_m_zero(c: &Configuration) -> Result<Report> {
    let z = search::m_zero(c)?;
    let text = if z.is_empty() { "∅\n".to_string() } else { format!("{}\n", z) };
    let json = serde_json::json!({"command": "m-zero", "ambient": ConfigurationRecord::from(c), "points": z.to_vec()});
    done(text, json)
}

#[derive(Serialize)]
struct ComponentRecord {
    kind: NodeKind,
    label: Option<String>,
    matroid: MatroidRecord,
    nilpotent: &'static str,
    solvable: &'static str,
    irreducible: &'static str,
    realizable: &'static str,
    component_count: Option<u32>,
}

impl From<&VarietyNode> for ComponentRecord {
    fn from(n: &VarietyNode) -> Self {
        ComponentRecord {
            kind: n.kind,
            label: n.label.clone(),
            matroid: (&n.matroid).into(),
            nilpotent: n.nilpotent.as_str(),
            solvable: n.solvable.as_str(),
            irreducible: n.irreducible.as_str(),
            realizable: n.realizable.as_str(),
            component_count: n.component_count,
        }
    }
}

fn kind_name(k: NodeKind) -> &'static str {
    match k {
        NodeKind::CircuitVariety => "V_C",
        NodeKind::MatroidVariety => "V",
    }
}

fn status_value(s: &NodeStatus) -> serde_json::Value {
    match s {
        NodeStatus::Rewritten(r) => serde_json::json!({"status": "rewritten", "rule": format!("{r:?}")}),
        NodeStatus::Expanded { children } => serde_json::json!({"status": "expanded", "children": children}),
        NodeStatus::Covered { targets, citation } => {
            serde_json::json!({"status": "covered", "targets": targets, "citation": citation})
        }
        NodeStatus::Dominated { by } => serde_json::json!({"status": "dominated", "by": MatroidRecord::from(by)}),
        NodeStatus::Unresolved => serde_json::json!({"status": "unresolved"}),
    }
}

/// Decomposition report; `source` is recorded as the fact table's origin.
pub fn report_decompose(c: &Configuration, facts: &FactTable, source: &str, depth: usize) -> Result<Report> {
    let dec = variety::decompose(c, facts, depth)?;
    let sizes = dec.class_sizes()?;
    let mut text = format!(
        "{} components in {} classes (type and label) {:?}; {} tree nodes, {} leaves before pruning{}\n",
        dec.len(),
        sizes.len(),
        sizes,
        dec.tree.len(),
        dec.leaves.len(),
        if dec.complete { "" } else { "; INCOMPLETE" },
    );
    for ((m, label), k) in dec.class_counts()? {
        let node = dec.components.iter().find(|n| n.label == label && canonical_form(&n.matroid).ok().as_ref() == Some(&m));
        let kind = node.map_or("V", |n| kind_name(n.kind));
        let label = label.map(|l| format!(" [{l}]")).unwrap_or_default();
        text.push_str(&format!("  {k} x {kind}{label}: {}\n", describe_matroid(&m)));
    }
    let mut citations = BTreeSet::new();
    for r in &dec.removed {
        citations.insert(r.reason.clone());
    }
    for t in &dec.tree {
        if let NodeStatus::Covered { citation, .. } = &t.status {
            citations.insert(citation.clone());
        }
    }
    let tree: Vec<serde_json::Value> = dec
        .tree
        .iter()
        .map(|t| {
            let mut v = status_value(&t.status);
            v["depth"] = t.depth.into();
            v["matroid"] = to_value(&MatroidRecord::from(&t.matroid));
            v
        })
        .collect();
    let removed: Vec<serde_json::Value> = dec
        .removed
        .iter()
        .map(|r| {
            serde_json::json!({
                "node": ComponentRecord::from(&r.node),
                "reason": r.reason,
                "within": r.within.as_ref().map(MatroidRecord::from),
            })
        })
        .collect();
    let json = serde_json::json!({
        "command": "decompose",
        "ambient": ConfigurationRecord::from(c),
        "facts": source,
        "depth_limit": depth,
        "complete": dec.complete,
        "count": dec.len(),
        "class_sizes": sizes,
        "components": dec.components.iter().map(ComponentRecord::from).collect::<Vec<_>>(),
        "removed": removed,
        "citations": citations,
        "tree": tree,
    });
    Ok(Report { text, json, outcome: dec.check_complete() })
}

fn report_aut(c: &Configuration) -> Result<Report> {
    let g = automorphisms(c);
    let mut text = format!("order {}\n", g.order());
    for p in g.generators() {
        text.push_str(&format!("  {}\n", PermutationGroup::cycle_notation(p)));
    }
    let json = serde_json::json!({
        "command": "aut",
        "ambient": ConfigurationRecord::from(c),
        "degree": g.degree(),
        "order": g.order().to_string(),
        "generators": g.generators(),
    });
    done(text, json)
}

fn table_report(verb: &str, sys: &XSystem, set: &str, table: &[i32]) -> Result<Report> {
    let full = PointSet::full(sys.d());
    let record = XSystemRecord::from(sys);
    match parse_set(set, sys.d())? {
        None => {
            let mut text = format!("# {verb}([{}]) = {}\n", sys.d(), table[full.bits() as usize]);
            text.push_str(&XSystem::dump(table));
            let json = serde_json::json!({"command": verb, "system": record, "table": table});
            done(text, json)
        }
        Some(s) => {
            let v = table[s.bits() as usize];
            let text = format!("{verb}({s}) = {v}\n");
            let json = serde_json::json!({"command": verb, "system": record, "set": s.to_vec(), "value": v});
            done(text, json)
        }
    }
}

fn report_xval(sys: &XSystem, set: &str) -> Result<Report> {
    match parse_set(set, sys.d())? {
        None => table_report("val", sys, set, &sys.val_table()?),
        Some(s) => {
            let v = sys.val_x(s);
            let json = serde_json::json!({"command": "val", "system": XSystemRecord::from(sys), "set": s.to_vec(), "value": v});
            done(format!("val({s}) = {v}\n"), json)
        }
    }
}

fn report_vx(sys: &XSystem, set: &str) -> Result<Report> {
    let table = sys.v_x()?.to_vec();
    table_report("v", sys, set, &table)
}

fn report_min_x(sys: &XSystem) -> Result<Report> {
    let found = canonical_order(sys.minimal_x_matroids_rank3()?)?;
    let mut text = format!("{} minimal rank-3 X-matroids\n", found.len());
    for m in &found {
        text.push_str(&format!("  {}\n", describe_matroid(m)));
    }
    let json = serde_json::json!({
        "command": "min-x",
        "system": XSystemRecord::from(sys),
        "count": found.len(),
        "matroids": found.iter().map(MatroidRecord::from).collect::<Vec<_>>(),
    });
    done(text, json)
}

/// Sorted algorithm output and brute-force output for one configuration.
fn compare(c: &Configuration, budget: &EnumerationBudget) -> Result<(Vec<Matroid>, Vec<Matroid>)> {
    let mut alg = search::min_matroids(c)?.matroids();
    alg.sort();
    let brute = oracle::brute_minimal(&Matroid::from_configuration(c), budget)?;
    Ok((alg, brute))
}

fn report_oracle_one(c: &Configuration) -> Result<Report> {
    let (alg, brute) = compare(c, &EnumerationBudget::with_d7())?;
    let only_alg: Vec<MatroidRecord> = alg.iter().filter(|m| !brute.contains(m)).map(MatroidRecord::from).collect();
    let only_brute: Vec<MatroidRecord> = brute.iter().filter(|m| !alg.contains(m)).map(MatroidRecord::from).collect();
    let agree = only_alg.is_empty() && only_brute.is_empty();
    let text = format!(
        "{}: algorithm {}, brute force {}\n",
        if agree { "agree" } else { "MISMATCH" },
        alg.len(),
        brute.len()
    );
    let json = serde_json::json!({
        "command": "oracle-check",
        "ambient": ConfigurationRecord::from(c),
        "agree": agree,
        "algorithm_count": alg.len(),
        "brute_count": brute.len(),
        "only_algorithm": only_alg,
        "only_brute": only_brute,
    });
    let outcome = if agree {
        Ok(())
    } else {
        Err(Error::ValidationError("algorithm and brute force disagree".into()))
    };
    Ok(Report { text, json, outcome })
}

fn report_oracle_sweep(max_d: usize) -> Result<Report> {
    let budget = EnumerationBudget::with_d7();
    if max_d > 7 {
        return Err(Error::BudgetExceeded(format!("sweep limited to ground sets of at most 7 points, asked for {max_d}")));
    }
    let mut text = String::new();
    let mut rows = Vec::new();
    let mut bad = Vec::new();
    for d in 3..=max_d {
        let mut seen = BTreeSet::new();
        let mut mismatches = 0usize;
        for c in oracle::all_configurations(d) {
            if c.rank() != 3 {
                continue;
            }
            if !seen.insert(canonical_form(&Matroid::from_configuration(&c))?) {
                continue;
            }
            let (alg, brute) = compare(&c, &budget)?;
            if alg != brute {
                mismatches += 1;
                bad.push(ConfigurationRecord::from(&c));
            }
        }
        text.push_str(&format!("d = {d}: {} classes, {mismatches} mismatches\n", seen.len()));
        rows.push(serde_json::json!({"d": d, "classes": seen.len(), "mismatches": mismatches}));
    }
    let json = serde_json::json!({"command": "oracle-check", "max_d": max_d, "per_d": rows, "mismatched": bad});
    let outcome = if bad.is_empty() {
        Ok(())
    } else {
        Err(Error::ValidationError(format!("{} configurations disagree with brute force", bad.len())))
    };
    Ok(Report { text, json, outcome })
}

fn report_library() -> Report {
    let mut text = String::new();
    let mut rows = Vec::new();
    for n in library::all() {
        let c = &n.configuration;
        text.push_str(&format!("{:<24} d = {:<2} {:>2} lines  {}\n", n.name, c.d(), c.lines().len(), n.notes));
        rows.push(serde_json::json!({"name": n.name, "notes": n.notes, "configuration": ConfigurationRecord::from(c)}));
    }
    Report { text, json: serde_json::json!({"command": "library", "configurations": rows}), outcome: Ok(()) }
}
