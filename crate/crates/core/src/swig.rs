//! Node splitting: each split visible node `a` becomes a childless natural
//! value `a_flat` and a parentless intervention input `a_sharp`.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::graph::{Mdag, Node, NodeId, NodeKind, Pdag, SimplicialComplex};
use crate::reduction::lnodes_to_faces;

pub const FLAT_SUFFIX: &str = "_flat";
pub const SHARP_SUFFIX: &str = "_sharp";

/// Name map between original nodes and their split halves.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SplitNaming;

impl SplitNaming {
    pub fn flat(v: &NodeId) -> NodeId {
        NodeId::new(format!("{v}{FLAT_SUFFIX}")).expect("suffix keeps id valid")
    }

    pub fn sharp(v: &NodeId) -> NodeId {
        NodeId::new(format!("{v}{SHARP_SUFFIX}")).expect("suffix keeps id valid")
    }

    /// Original name and whether the id is the sharp half.
    pub fn original(id: &NodeId) -> Option<(NodeId, bool)> {
        let s = id.as_str();
        if let Some(base) = s.strip_suffix(FLAT_SUFFIX) {
            NodeId::new(base).ok().map(|b| (b, false))
        } else if let Some(base) = s.strip_suffix(SHARP_SUFFIX) {
            NodeId::new(base).ok().map(|b| (b, true))
        } else {
            None
        }
    }
}

/// Node list after splitting the flagged nodes in place, plus the position
/// of each original node's flat (or unchanged) and sharp (or unchanged) copy.
fn split_nodes(nodes: &[Node], split: &[bool]) -> Result<(Vec<Node>, Vec<usize>, Vec<usize>)> {
    let mut out = Vec::with_capacity(nodes.len() + split.len());
    let mut flat_at = Vec::with_capacity(nodes.len());
    let mut sharp_at = Vec::with_capacity(nodes.len());
    for (n, &s) in nodes.iter().zip(split) {
        if s {
            flat_at.push(out.len());
            out.push(Node::new(SplitNaming::flat(&n.id), NodeKind::Visible));
            sharp_at.push(out.len());
            out.push(Node::new(SplitNaming::sharp(&n.id), NodeKind::Input));
        } else {
            flat_at.push(out.len());
            sharp_at.push(out.len());
            out.push(n.clone());
        }
    }
    let mut seen = BTreeSet::new();
    for n in &out {
        if !seen.insert(&n.id) {
            return Err(Error::NameCollision(n.id.to_string()));
        }
    }
    Ok((out, flat_at, sharp_at))
}

/// SWIG of `g` with respect to the visible nodes in `subset`.
pub fn split_subset<S: AsRef<str>>(g: &Pdag, subset: &[S]) -> Result<Pdag> {
    let mut flags = vec![false; g.len()];
    for s in subset {
        let i = g.require(s.as_ref())?;
        if g.kind(i) != NodeKind::Visible {
            return Err(Error::NotVisible(s.as_ref().to_string()));
        }
        flags[i] = true;
    }
    let (nodes, flat_at, sharp_at) = split_nodes(g.nodes(), &flags)?;
    let edges = g.edges().iter().map(|&(u, v)| (sharp_at[u], flat_at[v])).collect();
    Ok(Pdag::from_parts(nodes, edges))
}

/// Full-SWIG: every visible node split.
pub fn split(g: &Pdag) -> Result<Pdag> {
    let all: Vec<NodeId> = g.visible_ids();
    split_subset(g, &all)
}

/// Split every visible node of an mDAG: `a -> b` becomes `a_sharp -> b_flat`
/// and each face `S` becomes `S_flat`.
pub fn split_mdag(m: &Mdag) -> Result<Mdag> {
    let flags: Vec<bool> = (0..m.len()).map(|i| m.kind(i) == NodeKind::Visible).collect();
    let (nodes, flat_at, sharp_at) = split_nodes(m.nodes(), &flags)?;
    let edges = m.edges().iter().map(|&(u, v)| (sharp_at[u], flat_at[v])).collect();
    let ground = nodes.iter().map(|n| n.id.clone()).collect();
    let facets = m.complex().facets().iter().map(|f| f.iter().map(|&i| flat_at[i]).collect());
    Mdag::from_parts(nodes, edges, SimplicialComplex::from_index_sets(ground, facets))
}

/// Re-kind input nodes as visible.
pub fn convert_i_to_v(s: &Pdag) -> Pdag {
    let nodes = s
        .nodes()
        .iter()
        .map(|n| match n.kind {
            NodeKind::Input => Node::new(n.id.clone(), NodeKind::Visible),
            _ => n.clone(),
        })
        .collect();
    Pdag::from_parts(nodes, s.edges().clone())
}

/// Whether splitting and passing to the mDAG commute on `g`.
pub fn check_commutation(g: &Pdag) -> Result<bool> {
    let left = split_mdag(&lnodes_to_faces(g))?;
    let right = lnodes_to_faces(&split(g)?);
    Ok(left == right)
}
