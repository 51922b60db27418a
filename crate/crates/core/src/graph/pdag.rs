use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use super::node::{Node, NodeId, NodeKind};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    InvalidId(String),
    DuplicateNode(String),
    UnknownEndpoint { from: String, to: String },
    SelfLoop(String),
    /// Nodes left over after peeling off every source; each lies on or
    /// downstream of a cycle.
    Cycle(Vec<String>),
    InputHasParent { input: String, parent: String },
    /// `later` is declared after `earlier` but is one of its ancestors.
    TemporalOrder { earlier: String, later: String },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::InvalidId(id) => write!(f, "invalid node id {id:?}"),
            Violation::DuplicateNode(id) => write!(f, "duplicate node {id}"),
            Violation::UnknownEndpoint { from, to } => {
                write!(f, "edge {from} -> {to} has an unknown endpoint")
            }
            Violation::SelfLoop(id) => write!(f, "self-loop on {id}"),
            Violation::Cycle(ids) => write!(f, "cycle through {}", ids.join(", ")),
            Violation::InputHasParent { input, parent } => {
                write!(f, "input node {input} has parent {parent}")
            }
            Violation::TemporalOrder { earlier, later } => {
                write!(f, "{later} is an ancestor of {earlier} but declared after it")
            }
        }
    }
}

/// Outcome of [`validate`]: empty means the graph is well formed.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_ok() {
            return f.write_str("ok");
        }
        let parts: Vec<String> = self.violations.iter().map(|v| v.to_string()).collect();
        f.write_str(&parts.join("; "))
    }
}

/// Check raw node and edge lists against the partitioned-DAG invariants.
///
/// Non-latent nodes (visible and input) must be declared in an order that
/// every ancestry relation between them respects, including ancestry that
/// runs through latent mediaries.
pub fn validate(nodes: &[(String, NodeKind)], edges: &[(String, String)]) -> ValidationReport {
    let mut violations = Vec::new();
    let mut index = BTreeMap::new();
    for (i, (name, _)) in nodes.iter().enumerate() {
        if NodeId::new(name.clone()).is_err() {
            violations.push(Violation::InvalidId(name.clone()));
        }
        if index.insert(name.as_str(), i).is_some() {
            violations.push(Violation::DuplicateNode(name.clone()));
        }
    }
    let mut resolved = BTreeSet::new();
    for (from, to) in edges {
        match (index.get(from.as_str()), index.get(to.as_str())) {
            (Some(&u), Some(&v)) => {
                if u == v {
                    violations.push(Violation::SelfLoop(from.clone()));
                } else {
                    resolved.insert((u, v));
                }
            }
            _ => violations.push(Violation::UnknownEndpoint { from: from.clone(), to: to.clone() }),
        }
    }
    let n = nodes.len();
    for &(u, v) in &resolved {
        if nodes[v].1 == NodeKind::Input {
            violations.push(Violation::InputHasParent {
                input: nodes[v].0.clone(),
                parent: nodes[u].0.clone(),
            });
        }
    }
    match topo_sort(n, &resolved) {
        Err(stuck) => {
            violations.push(Violation::Cycle(stuck.into_iter().map(|i| nodes[i].0.clone()).collect()));
        }
        Ok(_) => {
            let reach = reachability(n, &resolved);
            for (x, row) in reach.iter().enumerate() {
                if nodes[x].1 == NodeKind::Latent {
                    continue;
                }
                for (y, &r) in row.iter().enumerate() {
                    if r && y < x && nodes[y].1 != NodeKind::Latent {
                        violations.push(Violation::TemporalOrder {
                            earlier: nodes[y].0.clone(),
                            later: nodes[x].0.clone(),
                        });
                    }
                }
            }
        }
    }
    ValidationReport { violations }
}

/// Kahn's algorithm; on failure returns the nodes that could not be ordered.
pub(crate) fn topo_sort(n: usize, edges: &BTreeSet<(usize, usize)>) -> Result<Vec<usize>, Vec<usize>> {
    let mut indeg = vec![0usize; n];
    let mut children = vec![Vec::new(); n];
    for &(u, v) in edges {
        indeg[v] += 1;
        children[u].push(v);
    }
    let mut queue: VecDeque<usize> = (0..n).filter(|&i| indeg[i] == 0).collect();
    let mut order = Vec::with_capacity(n);
    while let Some(u) = queue.pop_front() {
        order.push(u);
        for &v in &children[u] {
            indeg[v] -= 1;
            if indeg[v] == 0 {
                queue.push_back(v);
            }
        }
    }
    if order.len() == n {
        Ok(order)
    } else {
        Err((0..n).filter(|&i| indeg[i] > 0).collect())
    }
}

/// `reach[u][v]` is true when there is a directed path of length >= 1 from u to v.
pub(crate) fn reachability(n: usize, edges: &BTreeSet<(usize, usize)>) -> Vec<Vec<bool>> {
    let mut children = vec![Vec::new(); n];
    for &(u, v) in edges {
        children[u].push(v);
    }
    (0..n)
        .map(|s| {
            let mut seen = vec![false; n];
            let mut stack = children[s].clone();
            while let Some(u) = stack.pop() {
                if !seen[u] {
                    seen[u] = true;
                    stack.extend(children[u].iter().copied());
                }
            }
            seen
        })
        .collect()
}

/// Named nodes with kinds, and named edges.
pub type NamedParts = (Vec<(String, NodeKind)>, Vec<(String, String)>);

type Encoding<'a> = (Vec<(&'a NodeId, NodeKind)>, BTreeSet<&'a NodeId>, BTreeSet<(&'a NodeId, &'a NodeId)>);

/// Non-latent nodes, edges among them, and each latent's sorted parents and children.
type LatentSignature<'a> = (Vec<(&'a NodeId, NodeKind)>, BTreeSet<(&'a NodeId, &'a NodeId)>, Vec<(Vec<&'a NodeId>, Vec<&'a NodeId>)>);

/// Partitioned DAG. Nodes carrying [`NodeKind::Input`] make it a
/// 3-partitioned DAG; everything else treats both uniformly.
///
/// Declaration order of the non-latent nodes is the temporal order.
#[derive(Debug, Clone)]
pub struct Pdag {
    nodes: Vec<Node>,
    edges: BTreeSet<(usize, usize)>,
    index: BTreeMap<NodeId, usize>,
}

impl Pdag {
    pub fn new<N, S, E, T, U>(nodes: N, edges: E) -> Result<Self>
    where
        N: IntoIterator<Item = (S, NodeKind)>,
        S: Into<String>,
        E: IntoIterator<Item = (T, U)>,
        T: Into<String>,
        U: Into<String>,
    {
        let nodes: Vec<(String, NodeKind)> = nodes.into_iter().map(|(s, k)| (s.into(), k)).collect();
        let edges: Vec<(String, String)> = edges.into_iter().map(|(a, b)| (a.into(), b.into())).collect();
        let report = validate(&nodes, &edges);
        if !report.is_ok() {
            return Err(Error::InvalidGraph(report));
        }
        let nodes: Vec<Node> = nodes
            .into_iter()
            .map(|(s, k)| Node::new(NodeId::new(s).expect("validated"), k))
            .collect();
        let index: BTreeMap<NodeId, usize> = nodes.iter().enumerate().map(|(i, n)| (n.id.clone(), i)).collect();
        let edges = edges.iter().map(|(a, b)| (index[a.as_str()], index[b.as_str()])).collect();
        Ok(Pdag { nodes, edges, index })
    }

    /// Construct from already-resolved parts; used by rewrites that
    /// preserve the invariants.
    pub(crate) fn from_parts(nodes: Vec<Node>, edges: BTreeSet<(usize, usize)>) -> Self {
        let index = nodes.iter().enumerate().map(|(i, n)| (n.id.clone(), i)).collect();
        let g = Pdag { nodes, edges, index };
        debug_assert!(g.validate().is_ok(), "{}", g.validate());
        g
    }

    pub fn validate(&self) -> ValidationReport {
        let (nodes, edges) = self.to_named_parts();
        validate(&nodes, &edges)
    }

    pub fn to_named_parts(&self) -> NamedParts {
        let nodes = self.nodes.iter().map(|n| (n.id.to_string(), n.kind)).collect();
        let edges = self
            .edges
            .iter()
            .map(|&(u, v)| (self.nodes[u].id.to_string(), self.nodes[v].id.to_string()))
            .collect();
        (nodes, edges)
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

    pub fn node(&self, i: usize) -> &Node {
        &self.nodes[i]
    }

    pub fn id(&self, i: usize) -> &NodeId {
        &self.nodes[i].id
    }

    pub fn kind(&self, i: usize) -> NodeKind {
        self.nodes[i].kind
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    pub(crate) fn require(&self, name: &str) -> Result<usize> {
        self.index_of(name).ok_or_else(|| Error::UnknownNode(name.to_string()))
    }

    pub fn edges(&self) -> &BTreeSet<(usize, usize)> {
        &self.edges
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.edges.contains(&(u, v))
    }

    fn of_kind(&self, kind: NodeKind) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.nodes[i].kind == kind).collect()
    }

    /// Visible nodes in temporal order.
    pub fn visible(&self) -> Vec<usize> {
        self.of_kind(NodeKind::Visible)
    }

    pub fn latents(&self) -> Vec<usize> {
        self.of_kind(NodeKind::Latent)
    }

    pub fn inputs(&self) -> Vec<usize> {
        self.of_kind(NodeKind::Input)
    }

    pub fn visible_ids(&self) -> Vec<NodeId> {
        self.visible().into_iter().map(|i| self.id(i).clone()).collect()
    }

    pub fn is_latent_free(&self) -> bool {
        self.nodes.iter().all(|n| n.kind != NodeKind::Latent)
    }

    pub fn has_inputs(&self) -> bool {
        self.nodes.iter().any(|n| n.kind == NodeKind::Input)
    }

    /// Parents in declaration order.
    pub fn parents(&self, v: usize) -> Vec<usize> {
        self.edges.iter().filter(|&&(_, c)| c == v).map(|&(p, _)| p).collect()
    }

    pub fn children(&self, u: usize) -> Vec<usize> {
        self.edges.range((u, 0)..(u + 1, 0)).map(|&(_, c)| c).collect()
    }

    pub fn is_exogenous(&self, v: usize) -> bool {
        !self.edges.iter().any(|&(_, c)| c == v)
    }

    pub fn topological_order(&self) -> Vec<usize> {
        topo_sort(self.len(), &self.edges).expect("acyclic by construction")
    }

    /// Strict-ancestor matrix: `m[u][v]` when u is a proper ancestor of v.
    pub fn reachability(&self) -> Vec<Vec<bool>> {
        reachability(self.len(), &self.edges)
    }

    /// Proper ancestors of `v`.
    pub fn ancestors(&self, v: usize) -> Vec<bool> {
        let mut seen = vec![false; self.len()];
        let mut stack = self.parents(v);
        while let Some(u) = stack.pop() {
            if !seen[u] {
                seen[u] = true;
                stack.extend(self.parents(u));
            }
        }
        seen
    }

    /// Canonical, order-insensitive encoding for latent nodes and edges;
    /// non-latent declaration order is part of the identity.
    fn encoding(&self) -> Encoding<'_> {
        let ordered = self
            .nodes
            .iter()
            .filter(|n| n.kind != NodeKind::Latent)
            .map(|n| (&n.id, n.kind))
            .collect();
        let latents = self.nodes.iter().filter(|n| n.kind == NodeKind::Latent).map(|n| &n.id).collect();
        let edges = self.edges.iter().map(|&(u, v)| (self.id(u), self.id(v))).collect();
        (ordered, latents, edges)
    }

    /// Equality up to a bijective renaming of latent nodes.
    pub fn eq_up_to_latent_labels(&self, other: &Pdag) -> bool {
        let a = self.latent_signature();
        let b = other.latent_signature();
        a == b
    }

    fn latent_signature(&self) -> LatentSignature<'_> {
        let ordered = self
            .nodes
            .iter()
            .filter(|n| n.kind != NodeKind::Latent)
            .map(|n| (&n.id, n.kind))
            .collect();
        let observed_edges = self
            .edges
            .iter()
            .filter(|&&(u, v)| self.kind(u) != NodeKind::Latent && self.kind(v) != NodeKind::Latent)
            .map(|&(u, v)| (self.id(u), self.id(v)))
            .collect();
        // Latent-latent edges cannot be matched by name; this signature is
        // only exact for graphs whose latents are exogenous.
        let mut latents: Vec<(Vec<&NodeId>, Vec<&NodeId>)> = self
            .latents()
            .into_iter()
            .map(|l| {
                let mut pa: Vec<&NodeId> = self.parents(l).into_iter().map(|p| self.id(p)).collect();
                let mut ch: Vec<&NodeId> = self.children(l).into_iter().map(|c| self.id(c)).collect();
                pa.sort();
                ch.sort();
                (pa, ch)
            })
            .collect();
        latents.sort();
        (ordered, observed_edges, latents)
    }
}

impl PartialEq for Pdag {
    fn eq(&self, other: &Self) -> bool {
        self.encoding() == other.encoding()
    }
}

impl Eq for Pdag {}

/// True iff every ancestry relation between visible nodes (through any
/// mediaries, latent included) respects `order`.
pub fn is_temporally_consistent(g: &Pdag, order: &[NodeId]) -> Result<bool> {
    let visible = g.visible();
    let mut pos = vec![usize::MAX; g.len()];
    for (k, id) in order.iter().enumerate() {
        let i = g.index_of(id.as_str()).ok_or(Error::NotAPermutation)?;
        if g.kind(i) != NodeKind::Visible || pos[i] != usize::MAX {
            return Err(Error::NotAPermutation);
        }
        pos[i] = k;
    }
    if order.len() != visible.len() {
        return Err(Error::NotAPermutation);
    }
    let reach = g.reachability();
    for &x in &visible {
        for &y in &visible {
            if reach[x][y] && pos[x] > pos[y] {
                return Ok(false);
            }
        }
    }
    Ok(true)
}
