use std::fmt::Write;

use super::{HasseDiagram, MdagCatalog};
use crate::graph::{Mdag, NodeKind, Pdag};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DotStyle {
    pub name: String,
    /// Graphviz `rankdir` value.
    pub rankdir: String,
}

impl Default for DotStyle {
    fn default() -> Self {
        DotStyle { name: "G".into(), rankdir: "TB".into() }
    }
}

/// Graphviz rendering. Visible nodes are white circles, latent nodes gray
/// circles, input nodes squares.
pub trait ToDot {
    fn to_dot(&self, style: &DotStyle) -> String;
}

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

fn node_attrs(kind: NodeKind) -> &'static str {
    match kind {
        NodeKind::Visible => "shape=circle, style=filled, fillcolor=white",
        NodeKind::Latent => "shape=circle, style=filled, fillcolor=gray",
        NodeKind::Input => "shape=square, style=filled, fillcolor=white",
    }
}

fn header(out: &mut String, style: &DotStyle) {
    writeln!(out, "digraph {} {{", quote(&style.name)).unwrap();
    writeln!(out, "  rankdir={};", style.rankdir).unwrap();
}

impl ToDot for Pdag {
    fn to_dot(&self, style: &DotStyle) -> String {
        let mut out = String::new();
        header(&mut out, style);
        for n in self.nodes() {
            writeln!(out, "  {} [{}];", quote(n.id.as_str()), node_attrs(n.kind)).unwrap();
        }
        for &(u, v) in self.edges() {
            writeln!(out, "  {} -> {};", quote(self.id(u).as_str()), quote(self.id(v).as_str())).unwrap();
        }
        out.push_str("}\n");
        out
    }
}

impl ToDot for Mdag {
    /// Facets of size at least two become red junction points joined to
    /// their members by undirected red lines.
    fn to_dot(&self, style: &DotStyle) -> String {
        let mut out = String::new();
        header(&mut out, style);
        for n in self.nodes() {
            writeln!(out, "  {} [{}];", quote(n.id.as_str()), node_attrs(n.kind)).unwrap();
        }
        for &(u, v) in self.edges() {
            writeln!(out, "  {} -> {};", quote(self.id(u).as_str()), quote(self.id(v).as_str())).unwrap();
        }
        for (k, facet) in self.complex().nontrivial_facets().enumerate() {
            let j = quote(&format!("facet{k}"));
            writeln!(out, "  {j} [shape=point, color=red, label=\"\"];").unwrap();
            for &m in facet {
                writeln!(out, "  {j} -> {} [dir=none, color=red];", quote(self.id(m).as_str())).unwrap();
            }
        }
        out.push_str("}\n");
        out
    }
}

impl ToDot for HasseDiagram {
    /// Elements are labeled by catalog index; edges run upper to lower.
    fn to_dot(&self, style: &DotStyle) -> String {
        let mut out = String::new();
        header(&mut out, style);
        for i in 0..self.elements {
            writeln!(out, "  {i};").unwrap();
        }
        for &(lo, up) in &self.covers {
            writeln!(out, "  {up} -> {lo};").unwrap();
        }
        out.push_str("}\n");
        out
    }
}

impl HasseDiagram {
    /// Rendering with islands boxed as clusters and entries labeled by
    /// their edges and nontrivial facets.
    pub fn to_dot_with_islands(&self, cat: &MdagCatalog, style: &DotStyle) -> String {
        let mut out = String::new();
        header(&mut out, style);
        for c in 0..cat.complex_count() {
            writeln!(out, "  subgraph \"cluster_{c}\" {{").unwrap();
            for i in cat.island(c) {
                writeln!(out, "    {i} [shape=box, label={}];", quote(&entry_label(&cat.entry(i)))).unwrap();
            }
            out.push_str("  }\n");
        }
        for &(lo, up) in &self.covers {
            writeln!(out, "  {up} -> {lo};").unwrap();
        }
        out.push_str("}\n");
        out
    }
}

fn entry_label(m: &Mdag) -> String {
    let edges: Vec<String> = m.edge_ids().iter().map(|(a, b)| format!("{a}>{b}")).collect();
    let facets: Vec<String> = m
        .complex()
        .nontrivial_facets()
        .map(|f| f.iter().map(|&i| m.id(i).to_string()).collect::<Vec<_>>().join(""))
        .collect();
    format!("{} | {}", edges.join(" "), facets.join(" "))
}
