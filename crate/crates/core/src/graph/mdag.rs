use std::collections::{BTreeMap, BTreeSet};

use super::complex::{closure, SimplicialComplex};
use super::node::{Node, NodeId, NodeKind};
use crate::error::{Error, Result};

/// Marginalized DAG: a directed structure over visible (and, for 3-mDAGs,
/// input) nodes plus a simplicial complex recording latent confounding.
///
/// Node declaration order is the temporal order; every directed edge points
/// forward in it.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Mdag {
    nodes: Vec<Node>,
    edges: BTreeSet<(usize, usize)>,
    complex: SimplicialComplex,
}

impl Mdag {
    pub fn new<N, S, E, T, U>(nodes: N, edges: E, facets: &[Vec<&str>]) -> Result<Self>
    where
        N: IntoIterator<Item = (S, NodeKind)>,
        S: Into<String>,
        E: IntoIterator<Item = (T, U)>,
        T: Into<String>,
        U: Into<String>,
    {
        let nodes = nodes
            .into_iter()
            .map(|(s, k)| Ok(Node::new(NodeId::new(s)?, k)))
            .collect::<Result<Vec<_>>>()?;
        let facets = facets
            .iter()
            .map(|f| f.iter().map(|s| NodeId::new(*s)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        let edges = edges
            .into_iter()
            .map(|(a, b)| Ok((NodeId::new(a)?, NodeId::new(b)?)))
            .collect::<Result<Vec<_>>>()?;
        Self::from_ids(nodes, &edges, &facets)
    }

    /// All nodes visible.
    pub fn visible<S, E, T, U>(nodes: impl IntoIterator<Item = S>, edges: E, facets: &[Vec<&str>]) -> Result<Self>
    where
        S: Into<String>,
        E: IntoIterator<Item = (T, U)>,
        T: Into<String>,
        U: Into<String>,
    {
        Self::new(nodes.into_iter().map(|s| (s, NodeKind::Visible)), edges, facets)
    }

    pub fn from_ids(nodes: Vec<Node>, edges: &[(NodeId, NodeId)], facets: &[Vec<NodeId>]) -> Result<Self> {
        let mut index = BTreeMap::new();
        for (i, n) in nodes.iter().enumerate() {
            if n.kind == NodeKind::Latent {
                return Err(Error::Shape(format!("mDAG node {} cannot be latent", n.id)));
            }
            if index.insert(n.id.clone(), i).is_some() {
                return Err(Error::Shape(format!("duplicate node {}", n.id)));
            }
        }
        let mut resolved = BTreeSet::new();
        for (a, b) in edges {
            let u = *index.get(a).ok_or_else(|| Error::UnknownNode(a.to_string()))?;
            let v = *index.get(b).ok_or_else(|| Error::UnknownNode(b.to_string()))?;
            if u >= v {
                return Err(Error::Shape(format!("edge {a} -> {b} violates the temporal order")));
            }
            if nodes[v].kind == NodeKind::Input {
                return Err(Error::Shape(format!("input node {b} has a parent")));
            }
            resolved.insert((u, v));
        }
        let ground: Vec<NodeId> = nodes.iter().map(|n| n.id.clone()).collect();
        let complex = closure(facets, &ground)?;
        Self::from_parts(nodes, resolved, complex)
    }

    pub(crate) fn from_parts(
        nodes: Vec<Node>,
        edges: BTreeSet<(usize, usize)>,
        complex: SimplicialComplex,
    ) -> Result<Self> {
        for f in complex.nontrivial_facets() {
            if let Some(&i) = f.iter().find(|&&i| nodes[i].kind == NodeKind::Input) {
                return Err(Error::Shape(format!("input node {} lies in a nontrivial face", nodes[i].id)));
            }
        }
        debug_assert!(edges.iter().all(|&(u, v)| u < v));
        Ok(Mdag { nodes, edges, complex })
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn id(&self, i: usize) -> &NodeId {
        &self.nodes[i].id
    }

    pub fn ids(&self) -> Vec<NodeId> {
        self.nodes.iter().map(|n| n.id.clone()).collect()
    }

    pub fn kind(&self, i: usize) -> NodeKind {
        self.nodes[i].kind
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.nodes.iter().position(|n| n.id.as_str() == name)
    }

    pub fn edges(&self) -> &BTreeSet<(usize, usize)> {
        &self.edges
    }

    pub fn edge_ids(&self) -> Vec<(NodeId, NodeId)> {
        self.edges.iter().map(|&(u, v)| (self.id(u).clone(), self.id(v).clone())).collect()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.edges.contains(&(u, v))
    }

    pub fn complex(&self) -> &SimplicialComplex {
        &self.complex
    }

    pub fn is_confounder_free(&self) -> bool {
        self.complex.is_trivial()
    }

    pub fn is_directed_edge_free(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn has_inputs(&self) -> bool {
        self.nodes.iter().any(|n| n.kind == NodeKind::Input)
    }

    /// Visible nodes reachable from `u` and reaching `v` along directed edges.
    pub fn mediaries(&self, u: usize, v: usize) -> Vec<usize> {
        let n = self.len();
        let reach = super::pdag::reachability(n, &self.edges);
        (0..n).filter(|&m| reach[u][m] && reach[m][v]).collect()
    }
}
