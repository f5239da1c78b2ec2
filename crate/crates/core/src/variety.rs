//! Symbolic decomposition of circuit varieties into matroid varieties.
//!
//! Every circuit variety `V_C(M)` splits as the matroid variety `V_M` together with the
//! circuit varieties of the minimal matroids above `M`. The engine applies that split
//! repeatedly, stopping at nodes whose circuit variety is known in closed form:
//!
//! * a nilpotent configuration with no point of degree above two has `V_C(M) = V_M`;
//! * a configuration with no point of degree above two whose proper restrictions are all
//!   nilpotent has `V_C(M) = V_M ∪ V_U`, `U` the same classes placed on one line.
//!
//! The leaves are matroid varieties. Redundant leaves are then removed using only sound
//! arguments: a leaf above a matroid whose circuit and matroid varieties agree lies in that
//! matroid's variety, a leaf above a realizable configuration of the collapsed-line shape lies
//! in it, and registered containments from the fact table.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::facts::{FactTable, Targets};
use crate::model::{Configuration, Matroid};
use crate::pointset::PointSet;
use crate::search::min_matroids;
use crate::symmetry::canonical_form;

/// Depth used when none is given.
pub const DEFAULT_DEPTH: usize = 6;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NodeKind {
    CircuitVariety,
    MatroidVariety,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Tri {
    Yes,
    No,
    Unknown,
}

impl Tri {
    pub fn from_bool(b: bool) -> Tri {
        if b {
            Tri::Yes
        } else {
            Tri::No
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Tri::Yes => "yes",
            Tri::No => "no",
            Tri::Unknown => "unknown",
        }
    }
}

/// A matroid on the ambient ground set viewed as a circuit or matroid variety.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VarietyNode {
    pub matroid: Matroid,
    pub kind: NodeKind,
    /// Opaque label separating irreducible components of one matroid variety.
    pub label: Option<String>,
    pub nilpotent: Tri,
    pub solvable: Tri,
    pub irreducible: Tri,
    pub realizable: Tri,
    pub component_count: Option<u32>,
}

fn simple_geometry(m: &Matroid) -> Configuration {
    if m.classes().is_empty() {
        return Configuration::free(1).expect("one point is valid");
    }
    m.geometry().expect("geometry of a valid matroid")
}

impl VarietyNode {
    /// A node with flags computed from the simplification and the fact table.
    pub fn new(matroid: Matroid, kind: NodeKind, facts: &FactTable) -> Self {
        let g = simple_geometry(&matroid);
        let nilpotent = g.is_nilpotent();
        let solvable = g.is_solvable();
        let component_count = facts.components(&matroid).map(|(n, _)| n);
        let realizable = match facts.realizable(&matroid) {
            Some((v, _)) => Tri::from_bool(v),
            None if matroid.rank() <= 2 => Tri::Yes,
            None => Tri::Unknown,
        };
        let irreducible = if kind == NodeKind::CircuitVariety {
            Tri::Unknown
        } else if solvable || component_count == Some(1) {
            Tri::Yes
        } else if component_count.is_some_and(|n| n > 1) {
            Tri::No
        } else {
            Tri::Unknown
        };
        VarietyNode {
            matroid,
            kind,
            label: None,
            nilpotent: Tri::from_bool(nilpotent),
            solvable: Tri::from_bool(solvable),
            irreducible,
            realizable,
            component_count,
        }
    }

    /// One labelled irreducible component of this matroid variety.
    fn component(&self, label: String) -> Self {
        VarietyNode { label: Some(label), irreducible: Tri::Yes, ..self.clone() }
    }
}

/// Which closed form applies to a circuit variety, if any.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Rewrite {
    /// `V_C(M) = V_M`.
    Coincide,
    /// `V_C(M) = V_M ∪ V_U` with `U` the one-line collapse.
    WithCollapse,
}

pub fn rewrite_rule(m: &Matroid) -> Option<Rewrite> {
    if m.rank() <= 2 {
        return Some(Rewrite::Coincide);
    }
    let g = simple_geometry(m);
    if g.max_degree() > 2 {
        None
    } else if g.is_nilpotent() {
        Some(Rewrite::Coincide)
    } else if g.proper_restrictions_nilpotent() {
        Some(Rewrite::WithCollapse)
    } else {
        None
    }
}

/// Applies a closed form: the matroid-variety leaves, or `None` when no rule applies.
pub fn rewrite(node: &VarietyNode, facts: &FactTable) -> Option<Vec<VarietyNode>> {
    if node.kind != NodeKind::CircuitVariety {
        return None;
    }
    let m = &node.matroid;
    match rewrite_rule(m)? {
        Rewrite::Coincide => Some(vec![VarietyNode::new(m.clone(), NodeKind::MatroidVariety, facts)]),
        Rewrite::WithCollapse => Some(vec![
            VarietyNode::new(m.clone(), NodeKind::MatroidVariety, facts),
            VarietyNode::new(m.collapse_to_rank2(), NodeKind::MatroidVariety, facts),
        ]),
    }
}

/// Circuit-variety children (minimal matroids of the simplification, lifted back) and the
/// node's own matroid variety.
pub fn expand(node: &VarietyNode, facts: &FactTable) -> Result<Vec<VarietyNode>> {
    let m = &node.matroid;
    let (g, _) = m.simplify()?;
    let mut out: Vec<VarietyNode> = min_matroids(&g)?
        .members
        .into_iter()
        .map(|mem| m.lift(&mem.matroid).map(|n| VarietyNode::new(n, NodeKind::CircuitVariety, facts)))
        .collect::<Result<_>>()?;
    out.push(VarietyNode::new(m.clone(), NodeKind::MatroidVariety, facts));
    Ok(out)
}

/// Why a circuit variety node stopped being refined.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NodeStatus {
    Rewritten(Rewrite),
    Expanded { children: usize },
    /// Bounded by a registered cover; the circuit-variety targets are refined in turn.
    Covered { targets: usize, citation: String },
    /// Lies above a node whose circuit variety is already in closed form.
    Dominated { by: Matroid },
    /// Depth limit reached before the node could be refined.
    Unresolved,
}

/// A circuit variety node of the decomposition tree.
#[derive(Clone, Debug)]
pub struct TreeNode {
    pub matroid: Matroid,
    pub depth: usize,
    pub status: NodeStatus,
}

/// A leaf removed from the final list, with the justification.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Removal {
    pub node: VarietyNode,
    pub reason: String,
    /// The retained matroid the leaf lies under, when the argument names one.
    pub within: Option<Matroid>,
}

/// Outcome of [`decompose`].
#[derive(Clone, Debug)]
pub struct Decomposition {
    pub ambient: Matroid,
    pub depth_limit: usize,
    /// False when the depth limit stopped the refinement.
    pub complete: bool,
    pub tree: Vec<TreeNode>,
    /// Leaves before pruning, deduplicated.
    pub leaves: Vec<VarietyNode>,
    /// Final components, sorted by canonical form then label.
    pub components: Vec<VarietyNode>,
    pub removed: Vec<Removal>,
}

impl Decomposition {
    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    /// Error form of an incomplete run.
    pub fn check_complete(&self) -> Result<()> {
        if self.complete {
            Ok(())
        } else {
            Err(Error::DepthExhausted(self.depth_limit))
        }
    }

    /// Number of components in each isomorphism class (with label), keyed by canonical form.
    pub fn class_counts(&self) -> Result<BTreeMap<(Matroid, Option<String>), usize>> {
        let mut out = BTreeMap::new();
        for c in &self.components {
            *out.entry((canonical_form(&c.matroid)?, c.label.clone())).or_insert(0) += 1;
        }
        Ok(out)
    }

    /// Sorted multiset of class sizes, e.g. `[1, 7, 7, 7]`.
    pub fn class_sizes(&self) -> Result<Vec<usize>> {
        let mut v: Vec<usize> = self.class_counts()?.into_values().collect();
        v.sort();
        Ok(v)
    }
}

/// Decomposes the circuit variety of a rank-3 configuration.
pub fn decompose(m: &Configuration, facts: &FactTable, depth: usize) -> Result<Decomposition> {
    if m.rank() != 3 {
        return Err(Error::RankTooLow(m.rank()));
    }
    decompose_matroid(&Matroid::from_configuration(m), facts, depth)
}

/// Decomposes the circuit variety of any rank ≤ 3 matroid.
pub fn decompose_matroid(root: &Matroid, facts: &FactTable, depth: usize) -> Result<Decomposition> {
    let mut e = Engine { root: root.clone(), facts, depth_limit: depth, tree: Vec::new(), index: HashMap::new(), finished: Vec::new(), leaves: BTreeSet::new(), complete: true };
    e.visit(root, 0)?;
    let leaves: Vec<VarietyNode> = e.leaves.into_iter().collect();
    let (components, removed) = prune(leaves.clone(), facts)?;
    Ok(Decomposition { ambient: root.clone(), depth_limit: depth, complete: e.complete, tree: e.tree, leaves, components, removed })
}

/// Depth-first refinement with memoization.
///
/// A child lying strictly above a node whose refinement has already finished is not refined:
/// its circuit variety sits inside that node's, which is covered by leaves recorded earlier.
/// Finished nodes only ever lean on nodes finished before them, so the argument is well
/// founded.
struct Engine<'a> {
    root: Matroid,
    facts: &'a FactTable,
    depth_limit: usize,
    tree: Vec<TreeNode>,
    index: HashMap<Matroid, usize>,
    finished: Vec<Matroid>,
    leaves: BTreeSet<VarietyNode>,
    complete: bool,
}

/// Number of circuits of size at most three; smaller matroids are refined first so that more
/// of their siblings can lean on them.
fn weight(m: &Matroid) -> usize {
    m.small_circuits().len()
}

/// Number of dependent sets of size at most three. It grows strictly along every refinement
/// step, which keeps the refinement graph acyclic.
fn dependent_count(m: &Matroid) -> usize {
    let full = PointSet::full(m.d());
    (1..=3).flat_map(|k| full.subsets_of_size(k)).filter(|s| m.is_dependent(*s)).count()
}

impl Engine<'_> {
    fn visit(&mut self, m: &Matroid, depth: usize) -> Result<()> {
        let i = self.tree.len();
        self.index.insert(m.clone(), i);
        self.tree.push(TreeNode { matroid: m.clone(), depth, status: NodeStatus::Unresolved });
        let node = VarietyNode::new(m.clone(), NodeKind::CircuitVariety, self.facts);
        if let Some((targets, citation)) = self.usable_cover(m) {
            self.tree[i].status = NodeStatus::Covered { targets: targets.len(), citation };
            let mut pending = Vec::new();
            for (kind, t) in targets {
                match kind {
                    NodeKind::MatroidVariety => {
                        self.leaves.insert(VarietyNode::new(t, kind, self.facts));
                    }
                    NodeKind::CircuitVariety => pending.push(t),
                }
            }
            for t in pending {
                self.refine_child(t, depth)?;
            }
            self.finished.push(m.clone());
            return Ok(());
        }
        if let Some(ls) = rewrite(&node, self.facts) {
            self.tree[i].status = NodeStatus::Rewritten(rewrite_rule(m).expect("rewrite applied"));
            self.leaves.extend(ls);
            self.finished.push(m.clone());
            return Ok(());
        }
        if depth == self.depth_limit {
            self.complete = false;
            return Ok(());
        }
        let mut children = expand(&node, self.facts)?;
        let own = children.pop().expect("expansion includes the node itself");
        self.tree[i].status = NodeStatus::Expanded { children: children.len() };
        self.leaves.insert(own);
        // Single-loop matroids above `m` are added even when they are not minimal: their
        // circuit varieties lie inside `m`'s, and they cover much of what sits above the
        // genuinely minimal children.
        let mut all: Vec<Matroid> = children.into_iter().map(|c| c.matroid).collect();
        for p in m.non_loops().iter() {
            let n = m.add_loop(p)?;
            if !all.contains(&n) {
                all.push(n);
            }
        }
        let mut order: Vec<(bool, bool, usize, Matroid)> = all
            .into_iter()
            .map(|c| (rewrite_rule(&c).is_none(), c.loops().len() <= m.loops().len(), weight(&c), c))
            .collect();
        order.sort();
        for (_, _, _, c) in order {
            self.refine_child(c, depth)?;
        }
        self.finished.push(m.clone());
        Ok(())
    }

    /// Refines `c` unless it was seen before or lies above a finished node.
    fn refine_child(&mut self, c: Matroid, depth: usize) -> Result<()> {
        if self.index.contains_key(&c) {
            return Ok(());
        }
        if let Some(by) = self.finished.iter().find(|f| f.leq_unchecked(&c)) {
            let by = by.clone();
            self.index.insert(c.clone(), self.tree.len());
            self.tree.push(TreeNode { matroid: c, depth: depth + 1, status: NodeStatus::Dominated { by } });
            return Ok(());
        }
        self.visit(&c, depth + 1)
    }

    /// A registered cover of `m` whose targets all lie above the root (so that adding them keeps
    /// the union inside the root's circuit variety) and whose circuit-variety targets have
    /// strictly more dependent sets than `m`.
    fn usable_cover(&self, m: &Matroid) -> Option<(Targets, String)> {
        let own = dependent_count(m);
        self.facts
            .cover(m)
            .into_iter()
            .find(|(ts, _)| {
                ts.iter().all(|(k, t)| {
                    self.root.leq_unchecked(t) && (*k == NodeKind::MatroidVariety || dependent_count(t) > own)
                })
            })
            .map(|(ts, c)| (ts, c.to_string()))
    }
}

/// The matroid with `l`'s three points as singletons on one line and every other non-loop
/// point in a single parallel class, loops as in `m`.
fn collapsed_line(m: &Matroid, l: PointSet) -> Option<Matroid> {
    let rest = m.non_loops() - l;
    if rest.is_empty() {
        return None;
    }
    let mut classes: Vec<PointSet> = l.iter().map(PointSet::singleton).collect();
    classes.push(rest);
    Matroid::from_point_lines(m.d(), m.loops(), classes, &[l]).ok()
}

/// The collapsed-line argument: `sup` is a realizable configuration (up to loops), `sub`
/// keeps `sup`'s loops, and `sub` is a three-point line of `sup` with all remaining points
/// identified.
fn collapsed_line_applies(sub: &Matroid, sup: &Matroid, facts: &FactTable) -> bool {
    if sub.loops() != sup.loops() || sup.has_double_point() || !matches!(facts.realizable(sup), Some((true, _))) {
        return false;
    }
    if sub.classes().len() != 4 || sub.lines_over_classes().len() != 1 {
        return false;
    }
    sup.point_lines()
        .into_iter()
        .filter(|l| l.len() == 3)
        .any(|l| collapsed_line(sup, l).as_ref() == Some(sub))
}

/// Removes empty and redundant leaves, and splits registered reducible varieties.
pub fn prune(leaves: Vec<VarietyNode>, facts: &FactTable) -> Result<(Vec<VarietyNode>, Vec<Removal>)> {
    let mut removed = Vec::new();
    let mut alive: Vec<VarietyNode> = Vec::new();
    for leaf in leaves {
        if leaf.realizable == Tri::No {
            let cite = facts.realizable(&leaf.matroid).map(|(_, c)| c.to_string()).unwrap_or_default();
            removed.push(Removal { node: leaf, reason: format!("not realizable ({cite})"), within: None });
        } else {
            alive.push(leaf);
        }
    }
    // Each leaf is tested against every other leaf. Every argument needs the removed leaf to
    // be strictly above the container, so removals never form a cycle and the minimal
    // justifying leaves always survive.
    let mut keep = vec![true; alive.len()];
    let mut reasons: Vec<Option<(String, Matroid)>> = vec![None; alive.len()];
    for (i, b) in alive.iter().enumerate() {
        for a in &alive {
            let (am, bm) = (&a.matroid, &b.matroid);
            if am == bm || !am.leq_unchecked(bm) {
                continue;
            }
            let reason = if let Some(c) = facts.containment(bm, am) {
                Some(format!("registered containment ({c})"))
            } else if rewrite_rule(am) == Some(Rewrite::Coincide) {
                Some("lies above a matroid whose circuit and matroid varieties coincide".to_string())
            } else if collapsed_line_applies(bm, am, facts) {
                Some("collapsed-line containment in a realizable configuration".to_string())
            } else {
                None
            };
            if let Some(r) = reason {
                keep[i] = false;
                reasons[i] = Some((r, am.clone()));
                break;
            }
        }
    }
    let mut kept = Vec::new();
    for ((leaf, k), r) in alive.into_iter().zip(keep).zip(reasons) {
        if k {
            kept.push(leaf);
        } else {
            let (reason, within) = r.expect("removed leaf has a reason");
            removed.push(Removal { node: leaf, reason, within: Some(within) });
        }
    }
    // Split registered reducible varieties into labelled components.
    let mut components = Vec::new();
    for leaf in kept {
        match leaf.component_count {
            Some(2) => {
                components.push(leaf.component("+".into()));
                components.push(leaf.component("-".into()));
            }
            Some(n) if n > 2 => components.extend((1..=n).map(|k| leaf.component(format!("#{k}")))),
            _ => components.push(leaf),
        }
    }
    let mut keyed: Vec<(Matroid, VarietyNode)> =
        components.into_iter().map(|c| Ok((canonical_form(&c.matroid)?, c))).collect::<Result<_>>()?;
    keyed.sort_by(|x, y| (&x.0, &x.1.label, &x.1.matroid).cmp(&(&y.0, &y.1.label, &y.1.matroid)));
    removed.sort_by(|x, y| x.node.cmp(&y.node));
    Ok((keyed.into_iter().map(|(_, c)| c).collect(), removed))
}
