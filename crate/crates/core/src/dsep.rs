//! d-separation, exact conditional-independence checks, and the witness
//! separating two distinct latent-free graphs on one temporal order.

use std::collections::{BTreeSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{NodeId, NodeKind, Pdag};
use crate::models::Table;
use crate::scalar::Probability;

/// Is `A` d-separated from `B` given `C`?
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DsepQuery {
    pub a: Vec<NodeId>,
    pub b: Vec<NodeId>,
    pub c: Vec<NodeId>,
}

impl DsepQuery {
    pub fn new<S: AsRef<str>>(a: &[S], b: &[S], c: &[S]) -> Result<Self> {
        let ids = |v: &[S]| v.iter().map(|s| NodeId::new(s.as_ref())).collect::<Result<Vec<_>>>();
        Ok(DsepQuery { a: ids(a)?, b: ids(b)?, c: ids(c)? })
    }

    fn resolve(&self, g: &Pdag) -> Result<(Vec<usize>, Vec<usize>, Vec<usize>)> {
        let mut seen = BTreeSet::new();
        let mut side = |v: &[NodeId]| {
            v.iter()
                .map(|id| {
                    let i = g.require(id.as_str())?;
                    if g.kind(i) == NodeKind::Latent {
                        return Err(Error::NotVisible(id.to_string()));
                    }
                    if !seen.insert(i) {
                        return Err(Error::OverlappingSets);
                    }
                    Ok(i)
                })
                .collect::<Result<Vec<_>>>()
        };
        Ok((side(&self.a)?, side(&self.b)?, side(&self.c)?))
    }
}

/// Reachability of active trails from `a` (Bayes-ball). Input nodes are
/// treated as ordinary observed-or-not nodes.
pub fn d_separated_idx(g: &Pdag, a: &[usize], b: &[usize], c: &[usize]) -> bool {
    let n = g.len();
    let mut in_c = vec![false; n];
    for &x in c {
        in_c[x] = true;
    }
    let mut anc_c = vec![false; n];
    let mut stack: Vec<usize> = c.to_vec();
    while let Some(x) = stack.pop() {
        if !anc_c[x] {
            anc_c[x] = true;
            stack.extend(g.parents(x));
        }
    }
    let parents: Vec<Vec<usize>> = (0..n).map(|i| g.parents(i)).collect();
    let children: Vec<Vec<usize>> = (0..n).map(|i| g.children(i)).collect();
    // visited[node][0]: arrived from a child (moving up); [1]: from a parent.
    let mut visited = vec![[false; 2]; n];
    let mut queue: VecDeque<(usize, usize)> = a.iter().map(|&x| (x, 0)).collect();
    let mut reached = vec![false; n];
    while let Some((y, dir)) = queue.pop_front() {
        if visited[y][dir] {
            continue;
        }
        visited[y][dir] = true;
        if !in_c[y] {
            reached[y] = true;
        }
        if dir == 0 && !in_c[y] {
            queue.extend(parents[y].iter().map(|&p| (p, 0)));
            queue.extend(children[y].iter().map(|&ch| (ch, 1)));
        } else if dir == 1 {
            if !in_c[y] {
                queue.extend(children[y].iter().map(|&ch| (ch, 1)));
            }
            if anc_c[y] {
                queue.extend(parents[y].iter().map(|&p| (p, 0)));
            }
        }
    }
    !b.iter().any(|&x| reached[x])
}

/// d-separation over the whole graph, latents included.
pub fn d_separated(g: &Pdag, q: &DsepQuery) -> Result<bool> {
    let (a, b, c) = q.resolve(g)?;
    Ok(d_separated_idx(g, &a, &b, &c))
}

/// Exact check of `P(A B | C) = P(A | C) P(B | C)` on every `C`-slice of
/// positive probability.
pub fn ci_holds<P: Probability, S: AsRef<str>>(dist: &Table<P>, a: &[S], b: &[S], c: &[S]) -> Result<bool> {
    let pos = |v: &[S]| {
        v.iter()
            .map(|s| dist.position(s.as_ref()).ok_or_else(|| Error::UnknownNode(s.as_ref().to_string())))
            .collect::<Result<Vec<_>>>()
    };
    let (pa, pb, pc) = (pos(a)?, pos(b)?, pos(c)?);
    let all: BTreeSet<usize> = pa.iter().chain(&pb).chain(&pc).copied().collect();
    if all.len() != pa.len() + pb.len() + pc.len() {
        return Err(Error::OverlappingSets);
    }
    let cat = |x: &[&[usize]]| x.concat();
    let abc = dist.marginal(&cat(&[&pa, &pb, &pc]));
    let ac = dist.marginal(&cat(&[&pa, &pc]));
    let bc = dist.marginal(&cat(&[&pb, &pc]));
    let mc = dist.marginal(&pc);
    let card = |p: &[usize]| p.iter().map(|&k| dist.cards()[k]).collect::<Vec<_>>();
    let (ca, cb, cc) = (card(&pa), card(&pb), card(&pc));
    for z in crate::models::assignments(&cc) {
        let pz = mc.get(&z);
        if pz.is_zero() {
            continue;
        }
        for x in crate::models::assignments(&ca) {
            let pxz = ac.get(&[x.clone(), z.clone()].concat()).clone();
            for y in crate::models::assignments(&cb) {
                let lhs = abc.get(&[x.clone(), y.clone(), z.clone()].concat()).clone() * pz.clone();
                let rhs = pxz.clone() * bc.get(&[y.clone(), z.clone()].concat()).clone();
                if !lhs.approx_eq(&rhs) {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

/// For distinct latent-free `g`, `h` on the same nodes, take the first edge
/// `(a_i, a_j)` present in exactly one of them and return
/// `({a_i}, {a_j}, {a_k : k < j, k != i})`; the two graphs disagree on it.
pub fn latent_free_witness(g: &Pdag, h: &Pdag) -> Result<DsepQuery> {
    if !g.is_latent_free() || !h.is_latent_free() {
        return Err(Error::LatentNodes);
    }
    if g.nodes() != h.nodes() {
        return Err(Error::NodeMismatch);
    }
    let (i, j) = *g
        .edges()
        .symmetric_difference(h.edges())
        .min()
        .ok_or(Error::IdenticalGraphs)?;
    if i > j {
        return Err(Error::Shape("edge against the temporal order".into()));
    }
    let c: Vec<usize> = (0..j).filter(|&k| k != i).collect();
    let q = DsepQuery {
        a: vec![g.id(i).clone()],
        b: vec![g.id(j).clone()],
        c: c.iter().map(|&k| g.id(k).clone()).collect(),
    };
    if d_separated_idx(g, &[i], &[j], &c) == d_separated_idx(h, &[i], &[j], &c) {
        return Err(Error::Shape("graphs agree on the witness query".into()));
    }
    Ok(q)
}

#[cfg(test)]
mod tests {
    use super::*;
    use NodeKind::*;

    fn dag(n: &[&str], e: &[(&str, &str)]) -> Pdag {
        Pdag::new(n.iter().map(|s| (*s, Visible)), e.iter().copied()).unwrap()
    }

    fn sep(g: &Pdag, a: &[&str], b: &[&str], c: &[&str]) -> bool {
        d_separated(g, &DsepQuery::new(a, b, c).unwrap()).unwrap()
    }

    #[test]
    fn chain_fork_collider() {
        let chain = dag(&["a", "b", "c"], &[("a", "b"), ("b", "c")]);
        assert!(sep(&chain, &["a"], &["c"], &["b"]));
        assert!(!sep(&chain, &["a"], &["c"], &[]));
        let collider = dag(&["a", "b", "c"], &[("a", "c"), ("b", "c")]);
        assert!(!sep(&collider, &["a"], &["b"], &["c"]));
        assert!(sep(&collider, &["a"], &["b"], &[]));
        let fork = dag(&["a", "b", "c"], &[("a", "b"), ("a", "c")]);
        assert!(sep(&fork, &["b"], &["c"], &["a"]));
        assert!(!sep(&chain, &["b"], &["c"], &["a"]));
    }

    #[test]
    fn conditioning_on_collider_descendant_opens() {
        let g = dag(&["a", "b", "c", "d"], &[("a", "c"), ("b", "c"), ("c", "d")]);
        assert!(!sep(&g, &["a"], &["b"], &["d"]));
    }

    #[test]
    fn overlapping_sets_rejected() {
        let g = dag(&["a", "b"], &[]);
        let q = DsepQuery::new(&["a"], &["a"], &[]).unwrap();
        assert_eq!(d_separated(&g, &q), Err(Error::OverlappingSets));
    }

    #[test]
    fn witness_fork_vs_chain() {
        let fork = dag(&["a", "b", "c"], &[("a", "b"), ("a", "c")]);
        let chain = dag(&["a", "b", "c"], &[("a", "b"), ("b", "c")]);
        let q = latent_free_witness(&fork, &chain).unwrap();
        assert_eq!(q, DsepQuery::new(&["a"], &["c"], &["b"]).unwrap());
        assert_ne!(d_separated(&fork, &q).unwrap(), d_separated(&chain, &q).unwrap());
    }

    #[test]
    fn witness_adjacent_pair_has_empty_conditioning() {
        let g = dag(&["a", "b", "c"], &[("a", "b")]);
        let h = dag(&["a", "b", "c"], &[]);
        assert_eq!(latent_free_witness(&g, &h).unwrap(), DsepQuery::new(&["a"], &["b"], &[]).unwrap());
        assert_eq!(latent_free_witness(&g, &g), Err(Error::IdenticalGraphs));
    }
}
