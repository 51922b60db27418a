//! Rewrites that take a pDAG to its RE-reduction and to its mDAG, and back.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{is_subset, Mdag, Node, NodeId, NodeKind, Pdag, SimplicialComplex};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Rule {
    Exogenize,
    RemoveRedundant,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReductionStep {
    pub rule: Rule,
    pub target: NodeId,
    pub graph: Pdag,
}

/// Audit log of a reduction; replaying it on the input reproduces the output.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ReductionTrace {
    pub steps: Vec<ReductionStep>,
}

impl ReductionTrace {
    pub fn replay(&self, input: &Pdag) -> Result<Pdag> {
        let mut g = input.clone();
        for step in &self.steps {
            g = match step.rule {
                Rule::Exogenize => exogenize(&g, step.target.as_str())?,
                Rule::RemoveRedundant => {
                    let u = g.require(step.target.as_str())?;
                    remove_nodes(&g, &BTreeSet::from([u]))
                }
            };
        }
        Ok(g)
    }
}

/// Connect every parent of latent `u` to every child of `u`, then cut the
/// edges into `u`.
pub fn exogenize(g: &Pdag, u: &str) -> Result<Pdag> {
    let ui = g.require(u)?;
    if g.kind(ui) != NodeKind::Latent {
        return Err(Error::NotLatent(u.to_string()));
    }
    let parents = g.parents(ui);
    if parents.is_empty() {
        return Err(Error::AlreadyExogenous(u.to_string()));
    }
    let children = g.children(ui);
    let mut edges: BTreeSet<(usize, usize)> = g.edges().iter().copied().filter(|&(_, c)| c != ui).collect();
    for &p in &parents {
        for &c in &children {
            edges.insert((p, c));
        }
    }
    Ok(Pdag::from_parts(g.nodes().to_vec(), edges))
}

fn first_endogenous_latent(g: &Pdag) -> Option<usize> {
    g.topological_order()
        .into_iter()
        .find(|&i| g.kind(i) == NodeKind::Latent && !g.is_exogenous(i))
}

fn exog_all_traced(g: &Pdag, trace: &mut ReductionTrace) -> Pdag {
    let mut g = g.clone();
    while let Some(u) = first_endogenous_latent(&g) {
        let target = g.id(u).clone();
        g = exogenize(&g, target.as_str()).expect("endogenous latent");
        trace.steps.push(ReductionStep { rule: Rule::Exogenize, target, graph: g.clone() });
    }
    g
}

/// Exogenize every latent node.
pub fn exog_all(g: &Pdag) -> Pdag {
    exog_all_traced(g, &mut ReductionTrace::default())
}

pub(crate) fn remove_nodes(g: &Pdag, drop: &BTreeSet<usize>) -> Pdag {
    let mut remap = vec![usize::MAX; g.len()];
    let mut nodes = Vec::with_capacity(g.len() - drop.len());
    for (i, n) in g.nodes().iter().enumerate() {
        if !drop.contains(&i) {
            remap[i] = nodes.len();
            nodes.push(n.clone());
        }
    }
    let edges = g
        .edges()
        .iter()
        .filter(|(u, v)| !drop.contains(u) && !drop.contains(v))
        .map(|&(u, v)| (remap[u], remap[v]))
        .collect();
    Pdag::from_parts(nodes, edges)
}

/// Latents to delete, in deletion order. Survivors are ranked by larger
/// children set first, then smaller id; a latent is dropped exactly when its
/// children lie inside a survivor's.
fn redundant_latents(g: &Pdag) -> Vec<usize> {
    let mut ranked: Vec<(usize, Vec<usize>)> = g.latents().into_iter().map(|l| (l, g.children(l))).collect();
    ranked.sort_by(|(a, ca), (b, cb)| cb.len().cmp(&ca.len()).then_with(|| g.id(*a).cmp(g.id(*b))));
    let mut survivors: Vec<&Vec<usize>> = Vec::new();
    let mut removed = Vec::new();
    for (l, ch) in &ranked {
        if survivors.iter().any(|s| is_subset(ch, s)) {
            removed.push(*l);
        } else {
            survivors.push(ch);
        }
    }
    removed
}

fn endogenous_latents(g: &Pdag) -> Vec<String> {
    g.latents()
        .into_iter()
        .filter(|&l| !g.is_exogenous(l))
        .map(|l| g.id(l).to_string())
        .collect()
}

fn remove_redundant_traced(g: &Pdag, trace: &mut ReductionTrace) -> Result<Pdag> {
    let endo = endogenous_latents(g);
    if !endo.is_empty() {
        return Err(Error::EndogenousLatents(endo));
    }
    let mut out = g.clone();
    for l in redundant_latents(g) {
        let target = g.id(l).clone();
        let at = out.require(target.as_str())?;
        out = remove_nodes(&out, &BTreeSet::from([at]));
        trace.steps.push(ReductionStep { rule: Rule::RemoveRedundant, target, graph: out.clone() });
    }
    Ok(out)
}

/// Delete latents whose children are already covered by another latent's.
/// Requires every latent to be exogenous.
pub fn remove_redundant(g: &Pdag) -> Result<Pdag> {
    remove_redundant_traced(g, &mut ReductionTrace::default())
}

/// Redundancy removal after full exogenization.
pub fn re_reduce(g: &Pdag) -> (Pdag, ReductionTrace) {
    let mut trace = ReductionTrace::default();
    let exog = exog_all_traced(g, &mut trace);
    let reduced = remove_redundant_traced(&exog, &mut trace).expect("all latents exogenous");
    (reduced, trace)
}

/// The mDAG of a pDAG (or the 3-mDAG of a 3-pDAG).
pub fn lnodes_to_faces(g: &Pdag) -> Mdag {
    let (r, _) = re_reduce(g);
    let mut remap = vec![usize::MAX; r.len()];
    let mut nodes: Vec<Node> = Vec::new();
    for (i, n) in r.nodes().iter().enumerate() {
        if n.kind != NodeKind::Latent {
            remap[i] = nodes.len();
            nodes.push(n.clone());
        }
    }
    let edges = r
        .edges()
        .iter()
        .filter(|&&(u, v)| remap[u] != usize::MAX && remap[v] != usize::MAX)
        .map(|&(u, v)| (remap[u], remap[v]))
        .collect();
    let facets = r
        .latents()
        .into_iter()
        .map(|l| r.children(l).into_iter().map(|c| remap[c]).collect::<Vec<_>>());
    let ground = nodes.iter().map(|n| n.id.clone()).collect();
    let complex = SimplicialComplex::from_index_sets(ground, facets);
    Mdag::from_parts(nodes, edges, complex).expect("latent children are never inputs")
}

/// Name of the latent standing for `facet`: "λ" followed by the sorted
/// member names joined with "_".
pub fn latent_name(facet: &[NodeId]) -> String {
    let mut names: Vec<&str> = facet.iter().map(|n| n.as_str()).collect();
    names.sort_unstable();
    format!("λ{}", names.join("_"))
}

/// One fresh latent per facet with at least two members, pointing at the
/// facet's members.
pub fn canonical_pdag(m: &Mdag) -> Pdag {
    let mut nodes: Vec<Node> = m.nodes().to_vec();
    let mut taken: BTreeMap<String, ()> = nodes.iter().map(|n| (n.id.to_string(), ())).collect();
    let mut edges: BTreeSet<(usize, usize)> = m.edges().clone();
    for facet in m.complex().nontrivial_facets() {
        let ids: Vec<NodeId> = facet.iter().map(|&i| m.id(i).clone()).collect();
        let mut name = latent_name(&ids);
        while taken.contains_key(&name) {
            name.push('\'');
        }
        taken.insert(name.clone(), ());
        let l = nodes.len();
        nodes.push(Node::new(NodeId::new(name).expect("no whitespace in ids"), NodeKind::Latent));
        edges.extend(facet.iter().map(|&c| (l, c)));
    }
    Pdag::from_parts(nodes, edges)
}
