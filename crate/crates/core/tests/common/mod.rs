//! Graph and model generators shared by the integration tests.
#![allow(dead_code)]

use mdag_core::models::Cards;
use mdag_core::{NodeId, NodeKind, Pdag};
use rand::seq::SliceRandom;
use rand::Rng;

/// Visible nodes `v0, v1, …` then latent nodes `l0, l1, …`.
pub fn node_names(nv: usize, nl: usize) -> Vec<(String, NodeKind)> {
    (0..nv)
        .map(|i| (format!("v{i}"), NodeKind::Visible))
        .chain((0..nl).map(|i| (format!("l{i}"), NodeKind::Latent)))
        .collect()
}

/// Whether the edge set (bit `k` of `mask` is `pairs[k]`) is acyclic and
/// keeps visible ancestry in index order. Visible nodes are `0..nv`.
fn admissible(n: usize, nv: usize, pairs: &[(usize, usize)], mask: u64) -> bool {
    let mut reach = vec![0u32; n];
    for (k, &(u, v)) in pairs.iter().enumerate() {
        if mask >> k & 1 == 1 {
            reach[u] |= 1 << v;
        }
    }
    for _ in 0..n {
        for u in 0..n {
            let mut r = reach[u];
            for v in 0..n {
                if reach[u] >> v & 1 == 1 {
                    r |= reach[v];
                }
            }
            reach[u] = r;
        }
    }
    (0..n).all(|u| reach[u] >> u & 1 == 0) && (0..nv).all(|j| (0..j).all(|i| reach[j] >> i & 1 == 0))
}

/// Every admissible pDAG with `nv` visible and `nl` latent nodes.
pub fn all_pdags(nv: usize, nl: usize) -> Vec<Pdag> {
    let n = nv + nl;
    let names = node_names(nv, nl);
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|u| (0..n).filter(move |&v| v != u).map(move |v| (u, v))).collect();
    (0u64..1 << pairs.len())
        .filter(|&m| admissible(n, nv, &pairs, m))
        .map(|m| {
            let edges: Vec<(String, String)> = pairs
                .iter()
                .enumerate()
                .filter(|(k, _)| m >> k & 1 == 1)
                .map(|(_, &(u, v))| (names[u].0.clone(), names[v].0.clone()))
                .collect();
            Pdag::new(names.clone(), edges).expect("admissible")
        })
        .collect()
}

/// Random pDAG: nodes placed in a random order that keeps visible nodes in
/// index order, each forward pair an edge with probability `density`.
pub fn random_pdag<R: Rng>(nv: usize, nl: usize, density: f64, rng: &mut R) -> Pdag {
    let names = node_names(nv, nl);
    let mut slots: Vec<usize> = (0..nv + nl).collect();
    slots.shuffle(rng);
    let mut vis_slots: Vec<usize> = slots[..nv].to_vec();
    vis_slots.sort_unstable();
    let mut rank = vec![0; nv + nl];
    for (i, &s) in vis_slots.iter().enumerate() {
        rank[i] = s;
    }
    for (k, &s) in slots[nv..].iter().enumerate() {
        rank[nv + k] = s;
    }
    let mut edges = Vec::new();
    for u in 0..nv + nl {
        for v in 0..nv + nl {
            if rank[u] < rank[v] && rng.gen_bool(density) {
                edges.push((names[u].0.clone(), names[v].0.clone()));
            }
        }
    }
    Pdag::new(names, edges).expect("forward edges in a total order")
}

/// Cardinality drawn from `choices` for every node.
pub fn random_cards<R: Rng>(g: &Pdag, choices: &[usize], rng: &mut R) -> Cards {
    g.nodes().iter().map(|n| (n.id.clone(), *choices.choose(rng).expect("nonempty"))).collect()
}

pub fn id(s: &str) -> NodeId {
    NodeId::new(s).expect("valid id")
}

/// Nodes named `a`, `b`, … all visible, with the given edges.
pub fn latent_free(names: &[NodeId], edges: &std::collections::BTreeSet<(usize, usize)>) -> Pdag {
    Pdag::new(
        names.iter().map(|n| (n.to_string(), NodeKind::Visible)),
        edges.iter().map(|&(u, v)| (names[u].to_string(), names[v].to_string())),
    )
    .expect("forward edges")
}
