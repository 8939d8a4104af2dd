//! The graded diagram of first-order operators on spinor-valued forms.
//!
//! An edge `E_{i,j} → E_{i+1,j'}` means the summand `E_{i+1,j'}` of
//! `⋀^{i+1}𝕍*⊗𝕊` also occurs in `𝕍*⊗E_{i,j}`, so the covariant derivative
//! may have a nonzero component there. The diagram is an upper bound: no
//! edge is claimed to be a nonzero operator.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::findim::{Decomposition, ModuleLabel};
use crate::guards::check_rank;
use crate::half::Half;
use crate::report::SuiteReport;
use crate::spinor_decomp::{e_label, forms_spinor_decomposition, tensor_with_defining, XiIndex};
use crate::weights::Weight;

pub use crate::spinor_decomp::xi;

/// Iso-classes occurring in both decompositions; the intersection of two
/// submodules lies in the sum of these summands.
pub fn intersection_bound(a: &Decomposition, b: &Decomposition) -> BTreeSet<ModuleLabel> {
    a.label_set().intersection(&b.label_set()).cloned().collect()
}

fn column_index(rank: usize, i: usize) -> Result<BTreeMap<ModuleLabel, XiIndex>> {
    let mut map = BTreeMap::new();
    for j in 0..=crate::spinor_decomp::column_height(rank, i) {
        let idx = XiIndex { i, j };
        if map.insert(e_label(rank, idx)?, idx).is_some() {
            return Err(Error::Consistency(format!("column {i} at rank {rank} repeats a label")));
        }
    }
    Ok(map)
}

/// Positions in column `i+1` reachable from `idx`.
pub fn targets(rank: usize, idx: XiIndex) -> Result<BTreeSet<XiIndex>> {
    let source = e_label(rank, idx)?;
    if idx.i == 2 * rank {
        return Ok(BTreeSet::new());
    }
    let next = idx.i + 1;
    let product = tensor_with_defining(source.highest_weight())?;
    let column = forms_spinor_decomposition(rank, next)?;
    let positions = column_index(rank, next)?;
    intersection_bound(&product, &column)
        .into_iter()
        .map(|label| {
            positions.get(&label).copied().ok_or_else(|| {
                Error::Consistency(format!("{label} occurs in column {next} but has no position there"))
            })
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Diagram {
    pub rank: usize,
    pub nodes: Vec<(XiIndex, ModuleLabel)>,
    pub edges: BTreeSet<(XiIndex, XiIndex)>,
}

/// Conventional operator names. Rows are counted from the top.
pub fn edge_name(from: XiIndex, to: XiIndex) -> Option<&'static str> {
    match (from.j, to.j) {
        (0, 0) => Some("symplectic Dirac"),
        (0, 1) => Some("symplectic twistor"),
        (1, 1) => Some("symplectic Rarita-Schwinger"),
        (a, b) if a == b => Some("symplectic generalized Rarita-Schwinger"),
        _ => None,
    }
}

pub fn diagram(rank: usize) -> Result<Diagram> {
    check_rank(rank)?;
    let nodes = crate::spinor_decomp::e_table(rank)?;
    let mut edges = BTreeSet::new();
    for (idx, _) in &nodes {
        for t in targets(rank, *idx)? {
            edges.insert((*idx, t));
        }
    }
    Ok(Diagram { rank, nodes, edges })
}

impl Diagram {
    /// Every edge goes one column right and at most one row up or down,
    /// and stays inside the index set.
    pub fn three_window_violations(&self) -> Vec<(XiIndex, XiIndex)> {
        self.edges
            .iter()
            .filter(|(a, b)| b.i != a.i + 1 || b.j.abs_diff(a.j) > 1 || !b.belongs_to(self.rank))
            .copied()
            .collect()
    }

    /// Edges whose reflection under `(i, j) ↦ (2l − i, j)`, read backwards,
    /// is missing.
    pub fn mirror_violations(&self) -> Vec<(XiIndex, XiIndex)> {
        self.edges
            .iter()
            .filter(|(a, b)| !self.edges.contains(&(b.mirror(self.rank), a.mirror(self.rank))))
            .copied()
            .collect()
    }

    pub fn label(&self, idx: XiIndex) -> Option<&ModuleLabel> {
        self.nodes.iter().find(|(i, _)| *i == idx).map(|(_, l)| l)
    }
}

/// Three-window containment, zero extension and mirror symmetry.
pub fn verify_diagram(rank: usize) -> Result<SuiteReport> {
    let d = diagram(rank)?;
    let mut report = SuiteReport::new("operator-diagram");
    for (idx, _) in &d.nodes {
        let outgoing: Vec<XiIndex> = d.edges.iter().filter(|(a, _)| a == idx).map(|(_, b)| *b).collect();
        let bad: Vec<String> = outgoing
            .iter()
            .filter(|b| b.i != idx.i + 1 || b.j.abs_diff(idx.j) > 1 || !b.belongs_to(rank))
            .map(|b| b.to_string())
            .collect();
        let outcome = if bad.is_empty() {
            Ok(())
        } else {
            Err(format!("targets outside the window: {}", bad.join(", ")))
        };
        report.record(format!("l={rank}, {idx}"), outcome);
    }
    let mirror = d.mirror_violations();
    let outcome = match mirror.first() {
        None => Ok(()),
        Some((a, b)) => Err(format!("{a} → {b} has no mirror edge")),
    };
    report.record(format!("l={rank}, mirror symmetry"), outcome);
    Ok(report)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Dot,
    Text,
    Json,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "dot" => Ok(Format::Dot),
            "text" => Ok(Format::Text),
            "json" => Ok(Format::Json),
            other => Err(Error::Parse(format!("unknown format {other:?}, expected dot, text or json"))),
        }
    }
}

#[derive(Serialize, Deserialize)]
struct NodeRepr {
    i: usize,
    j: usize,
    label: Vec<Half>,
}

#[derive(Serialize, Deserialize)]
struct EdgeRepr {
    from: XiIndex,
    to: XiIndex,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    name: Option<String>,
}

#[derive(Serialize, Deserialize)]
struct DiagramRepr {
    rank: usize,
    nodes: Vec<NodeRepr>,
    edges: Vec<EdgeRepr>,
}

fn node_id(idx: XiIndex) -> String {
    format!("E_{}_{}", idx.i, idx.j)
}

fn to_repr(d: &Diagram) -> DiagramRepr {
    DiagramRepr {
        rank: d.rank,
        nodes: d
            .nodes
            .iter()
            .map(|(idx, l)| NodeRepr { i: idx.i, j: idx.j, label: l.highest_weight().fundamental_coords() })
            .collect(),
        edges: d
            .edges
            .iter()
            .map(|&(from, to)| EdgeRepr { from, to, name: edge_name(from, to).map(str::to_string) })
            .collect(),
    }
}

pub fn to_json_value(d: &Diagram) -> serde_json::Value {
    serde_json::to_value(to_repr(d)).expect("diagram serialises")
}

/// Reads the JSON form back, validating labels and edge endpoints.
pub fn parse_json(text: &str) -> Result<Diagram> {
    let repr: DiagramRepr = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    let mut nodes = Vec::with_capacity(repr.nodes.len());
    for n in repr.nodes {
        let idx = XiIndex::new(repr.rank, n.i, n.j)?;
        let label = ModuleLabel::bounded(Weight::from_fundamental(&n.label, repr.rank)?)?;
        nodes.push((idx, label));
    }
    let known: BTreeSet<XiIndex> = nodes.iter().map(|(i, _)| *i).collect();
    let mut edges = BTreeSet::new();
    for e in repr.edges {
        if !known.contains(&e.from) || !known.contains(&e.to) {
            return Err(Error::Parse(format!("edge {} → {} references an unknown node", e.from, e.to)));
        }
        edges.insert((e.from, e.to));
    }
    Ok(Diagram { rank: repr.rank, nodes, edges })
}

pub fn emit(d: &Diagram, format: Format) -> String {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&to_repr(d)).expect("diagram serialises");
            s.push('\n');
            s
        }
        Format::Dot => emit_dot(d),
        Format::Text => emit_text(d),
    }
}

fn emit_dot(d: &Diagram) -> String {
    let mut out = String::new();
    writeln!(out, "digraph derham_l{} {{", d.rank).unwrap();
    writeln!(out, "  rankdir=LR;").unwrap();
    writeln!(out, "  node [shape=box];").unwrap();
    let columns: BTreeSet<usize> = d.nodes.iter().map(|(i, _)| i.i).collect();
    for c in columns {
        let ids: Vec<String> = d.nodes.iter().filter(|(i, _)| i.i == c).map(|(i, _)| node_id(*i)).collect();
        writeln!(out, "  {{ rank=same; {}; }}", ids.join("; ")).unwrap();
    }
    for (idx, label) in &d.nodes {
        writeln!(out, "  {} [label=\"{}\\n{}\"];", node_id(*idx), idx, label.highest_weight().shorthand()).unwrap();
    }
    for &(a, b) in &d.edges {
        match edge_name(a, b) {
            Some(name) => writeln!(out, "  {} -> {} [label=\"{name}\"];", node_id(a), node_id(b)).unwrap(),
            None => writeln!(out, "  {} -> {};", node_id(a), node_id(b)).unwrap(),
        }
    }
    out.push_str("}\n");
    out
}

fn emit_text(d: &Diagram) -> String {
    let width = d
        .nodes
        .iter()
        .map(|(i, l)| format!("{i} {}", l.highest_weight().shorthand()).chars().count())
        .max()
        .unwrap_or(0)
        + 2;
    let mut out = String::new();
    let columns = d.nodes.iter().map(|(i, _)| i.i).max().map_or(0, |m| m + 1);
    for j in 0..=d.rank {
        let mut line = String::new();
        for i in 0..columns {
            let cell = d
                .label(XiIndex { i, j })
                .map(|l| format!("{} {}", XiIndex { i, j }, l.highest_weight().shorthand()))
                .unwrap_or_default();
            line.push_str(&format!("{cell:<width$}"));
        }
        out.push_str(line.trim_end());
        out.push('\n');
    }
    out.push('\n');
    for &(a, b) in &d.edges {
        match edge_name(a, b) {
            Some(name) => writeln!(out, "{a} -> {b}  ({name})").unwrap(),
            None => writeln!(out, "{a} -> {b}").unwrap(),
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ix(i: usize, j: usize) -> XiIndex {
        XiIndex { i, j }
    }

    #[test]
    fn targets_examples() {
        assert_eq!(targets(3, ix(0, 0)).unwrap(), BTreeSet::from([ix(1, 0), ix(1, 1)]));
        assert_eq!(targets(3, ix(3, 3)).unwrap(), BTreeSet::from([ix(4, 2)]));
        assert_eq!(targets(3, ix(5, 0)).unwrap(), BTreeSet::from([ix(6, 0)]));
        assert!(targets(3, ix(6, 0)).unwrap().is_empty());
        assert!(targets(3, ix(3, 4)).is_err());
    }

    #[test]
    fn intersection_examples() {
        let a = tensor_with_defining(e_label(3, ix(0, 0)).unwrap().highest_weight()).unwrap();
        assert_eq!(intersection_bound(&a, &a), a.label_set());
        let b = forms_spinor_decomposition(3, 1).unwrap();
        assert_eq!(intersection_bound(&a, &b), a.label_set());
        let c = forms_spinor_decomposition(3, 0).unwrap();
        assert!(intersection_bound(&a, &c).is_empty());
    }

    #[test]
    fn windows_and_mirrors() {
        for l in 2..=4 {
            let r = verify_diagram(l).unwrap();
            assert!(r.passed(), "{r}");
            let d = diagram(l).unwrap();
            assert_eq!(d.nodes.len(), (l + 1) * (l + 1));
            assert!(d.edges.iter().all(|(a, _)| a.i < 2 * l));
        }
    }

    #[test]
    fn formats() {
        let d = diagram(2).unwrap();
        let dot = emit(&d, Format::Dot);
        assert!(dot.starts_with("digraph derham_l2 {"));
        assert_eq!(dot.matches("rank=same").count(), 5);
        let json = emit(&d, Format::Json);
        assert_eq!(parse_json(&json).unwrap(), d);
        assert_eq!(emit(&d, Format::Text).lines().take_while(|l| !l.is_empty()).count(), 3);
        assert!("svg".parse::<Format>().is_err());

        let bare = Diagram { edges: BTreeSet::new(), ..d };
        let dot = emit(&bare, Format::Dot);
        assert!(!dot.contains("->"));
        assert_eq!(dot.matches("[label=").count(), 9);
    }

    #[test]
    fn names_follow_rows() {
        assert_eq!(edge_name(ix(0, 0), ix(1, 0)), Some("symplectic Dirac"));
        assert_eq!(edge_name(ix(0, 0), ix(1, 1)), Some("symplectic twistor"));
        assert_eq!(edge_name(ix(1, 1), ix(2, 1)), Some("symplectic Rarita-Schwinger"));
        assert_eq!(edge_name(ix(2, 2), ix(3, 2)), Some("symplectic generalized Rarita-Schwinger"));
        assert_eq!(edge_name(ix(1, 1), ix(2, 0)), None);
    }
}
