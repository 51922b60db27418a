mod common;

use std::collections::BTreeSet;

use common::{id, random_pdag};
use mdag_core::dsep::d_separated_idx;
use mdag_core::graph::{closure, is_temporally_consistent};
use mdag_core::reduction::{canonical_pdag, exog_all, exogenize, lnodes_to_faces, re_reduce};
use mdag_core::swig::{split, split_subset};
use mdag_core::{NodeId, NodeKind, Pdag};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// `(visible, latent, density, seed)` for [`random_pdag`].
fn pdag_strategy(max_nodes: usize, max_latent: usize) -> impl Strategy<Value = Pdag> {
    (1..=max_nodes, 0..=max_latent, 0.1f64..0.8, any::<u64>()).prop_map(move |(total, nl, density, seed)| {
        let nl = nl.min(total.saturating_sub(1));
        random_pdag(total - nl, nl, density, &mut ChaCha8Rng::seed_from_u64(seed))
    })
}

/// Drops latents with at most one child.
fn without_thin_latents(g: &Pdag) -> Pdag {
    let keep: Vec<usize> = (0..g.len()).filter(|&i| g.kind(i) != NodeKind::Latent || g.children(i).len() > 1).collect();
    let nodes = keep.iter().map(|&i| (g.id(i).to_string(), g.kind(i)));
    let edges = g
        .edges()
        .iter()
        .filter(|(u, v)| keep.contains(u) && keep.contains(v))
        .map(|&(u, v)| (g.id(u).to_string(), g.id(v).to_string()));
    Pdag::new(nodes, edges).unwrap()
}

/// Exogenize endogenous latents repeatedly, picking by `choice`.
fn exog_in_order(g: &Pdag, choice: &[usize]) -> Pdag {
    let mut g = g.clone();
    let mut k = 0;
    loop {
        let endo: Vec<usize> = g.latents().into_iter().filter(|&l| !g.is_exogenous(l)).collect();
        if endo.is_empty() {
            return g;
        }
        let pick = endo[choice.get(k).copied().unwrap_or(0) % endo.len()];
        g = exogenize(&g, g.id(pick).clone().as_str()).unwrap();
        k += 1;
    }
}

/// Whether some simple path in the skeleton from `a` to `b` is active given `c`.
fn path_connected(g: &Pdag, a: usize, b: usize, c: &BTreeSet<usize>) -> bool {
    let n = g.len();
    let anc_c: Vec<bool> = (0..n).map(|x| c.contains(&x) || c.iter().any(|&z| g.ancestors(z)[x])).collect();
    let neighbours: Vec<Vec<usize>> = (0..n).map(|x| (0..n).filter(|&y| g.has_edge(x, y) || g.has_edge(y, x)).collect()).collect();
    fn walk(g: &Pdag, path: &mut Vec<usize>, b: usize, c: &BTreeSet<usize>, anc_c: &[bool], nb: &[Vec<usize>]) -> bool {
        let last = *path.last().unwrap();
        if last == b {
            return (1..path.len() - 1).all(|k| {
                let (p, m, q) = (path[k - 1], path[k], path[k + 1]);
                if g.has_edge(p, m) && g.has_edge(q, m) {
                    anc_c[m]
                } else {
                    !c.contains(&m)
                }
            });
        }
        for &y in &nb[last] {
            if !path.contains(&y) {
                path.push(y);
                if walk(g, path, b, c, anc_c, nb) {
                    return true;
                }
                path.pop();
            }
        }
        false
    }
    walk(g, &mut vec![a], b, c, &anc_c, &neighbours)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn closure_is_idempotent(sets in prop::collection::vec(prop::collection::btree_set(0usize..5, 1..4), 0..5)) {
        let ground: Vec<NodeId> = (0..5).map(|k| id(&format!("n{k}"))).collect();
        let named: Vec<Vec<NodeId>> = sets.iter().map(|s| s.iter().map(|&k| ground[k].clone()).collect()).collect();
        let once = closure(&named, &ground).unwrap();
        let twice = closure(&once.facet_ids(), &ground).unwrap();
        prop_assert_eq!(&once, &twice);
        for s in &sets {
            let v: Vec<usize> = s.iter().copied().collect();
            prop_assert!(once.contains(&v));
        }
    }

    #[test]
    fn re_reduce_is_idempotent(g in pdag_strategy(6, 3)) {
        let (once, _) = re_reduce(&g);
        let (twice, trace) = re_reduce(&once);
        prop_assert_eq!(&once, &twice);
        prop_assert!(trace.steps.is_empty());
    }

    #[test]
    fn trace_replays(g in pdag_strategy(6, 3)) {
        let (out, trace) = re_reduce(&g);
        prop_assert_eq!(trace.replay(&g).unwrap(), out);
    }

    #[test]
    fn exogenization_order_is_irrelevant(g in pdag_strategy(6, 3), choice in prop::collection::vec(0usize..6, 0..8)) {
        prop_assert_eq!(exog_in_order(&g, &choice), exog_all(&g));
    }

    #[test]
    fn faces_of_canonical_round_trip(g in pdag_strategy(6, 3)) {
        let m = lnodes_to_faces(&g);
        prop_assert_eq!(lnodes_to_faces(&canonical_pdag(&m)), m);
    }

    #[test]
    fn canonical_is_a_section_up_to_thin_latents(g in pdag_strategy(6, 3)) {
        let (reduced, _) = re_reduce(&g);
        let m = lnodes_to_faces(&g);
        prop_assert_eq!(&lnodes_to_faces(&reduced), &m);
        let can = canonical_pdag(&m);
        prop_assert!(without_thin_latents(&can).eq_up_to_latent_labels(&without_thin_latents(&reduced)));
    }

    #[test]
    fn split_composes(g in pdag_strategy(5, 2), mask in 0usize..32, part in 0usize..32) {
        let vis = g.visible_ids();
        let all: Vec<&NodeId> = vis.iter().enumerate().filter(|(k, _)| mask >> k & 1 == 1).map(|(_, v)| v).collect();
        let first: Vec<&NodeId> = all.iter().enumerate().filter(|(k, _)| part >> k & 1 == 1).map(|(_, v)| *v).collect();
        let second: Vec<&NodeId> = all.iter().filter(|v| !first.contains(v)).copied().collect();
        let together = split_subset(&g, &all).unwrap();
        let staged = split_subset(&split_subset(&g, &first).unwrap(), &second).unwrap();
        prop_assert_eq!(together, staged);
    }

    #[test]
    fn full_split_leaves_no_mixed_node(g in pdag_strategy(6, 2)) {
        let s = split(&g).unwrap();
        for i in 0..s.len() {
            if s.kind(i) != NodeKind::Latent {
                prop_assert!(s.parents(i).is_empty() || s.children(i).is_empty());
            }
        }
    }

    #[test]
    fn dsep_matches_path_enumeration(g in pdag_strategy(6, 0), a in 0usize..6, b in 0usize..6, cmask in 0usize..64) {
        let n = g.len();
        let (a, b) = (a % n, b % n);
        prop_assume!(a != b);
        let c: BTreeSet<usize> = (0..n).filter(|&k| cmask >> k & 1 == 1 && k != a && k != b).collect();
        let cv: Vec<usize> = c.iter().copied().collect();
        prop_assert_eq!(d_separated_idx(&g, &[a], &[b], &cv), !path_connected(&g, a, b, &c));
    }

    #[test]
    fn dsep_with_latents_matches_path_enumeration(g in pdag_strategy(6, 3), a in 0usize..6, b in 0usize..6, cmask in 0usize..64) {
        let vis = g.visible();
        prop_assume!(vis.len() >= 2);
        let (a, b) = (vis[a % vis.len()], vis[b % vis.len()]);
        prop_assume!(a != b);
        let c: BTreeSet<usize> = vis.iter().enumerate().filter(|&(k, &v)| cmask >> k & 1 == 1 && v != a && v != b).map(|(_, &v)| v).collect();
        let cv: Vec<usize> = c.iter().copied().collect();
        prop_assert_eq!(d_separated_idx(&g, &[a], &[b], &cv), !path_connected(&g, a, b, &c));
    }
}

#[test]
fn temporal_consistency_examples() {
    let g = Pdag::new(
        [("a", NodeKind::Visible), ("l", NodeKind::Latent), ("b", NodeKind::Visible), ("c", NodeKind::Visible)],
        [("a", "l"), ("l", "c")],
    )
    .unwrap();
    assert!(is_temporally_consistent(&g, &[id("a"), id("b"), id("c")]).unwrap());
    assert!(is_temporally_consistent(&g, &[id("b"), id("a"), id("c")]).unwrap());
    assert!(!is_temporally_consistent(&g, &[id("c"), id("b"), id("a")]).unwrap());
    assert!(is_temporally_consistent(&g, &[id("a"), id("b")]).is_err());
    assert!(is_temporally_consistent(&g, &[id("a"), id("l"), id("c")]).is_err());
}

#[test]
fn out_of_order_visible_ancestry_is_rejected() {
    let r = Pdag::new([("a", NodeKind::Visible), ("l", NodeKind::Latent), ("b", NodeKind::Visible)], [("b", "l"), ("l", "a")]);
    assert!(r.is_err());
}
