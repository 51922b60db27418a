use super::params::{Compiled, Params};
use super::table::{assignments, encode, FullConditional, Table};
use crate::error::{Error, Result};
use crate::graph::{NodeId, NodeKind, Pdag};
use crate::scalar::Probability;

/// Resolve a do-set against `nodes`: positions in temporal order with their
/// values, checked against `cards`.
pub(crate) fn normalize_do<S: AsRef<str>>(
    nodes: &[NodeId],
    cards: &[usize],
    do_nodes: &[S],
    values: &[usize],
) -> Result<Vec<(usize, usize)>> {
    if do_nodes.len() != values.len() {
        return Err(Error::Shape("do-set and values differ in length".into()));
    }
    let mut out = Vec::with_capacity(values.len());
    for (name, &v) in do_nodes.iter().zip(values) {
        let name = name.as_ref();
        let k = nodes.iter().position(|n| n.as_str() == name).ok_or_else(|| Error::UnknownNode(name.to_string()))?;
        if v >= cards[k] {
            return Err(Error::OutOfRange { node: name.to_string(), value: v, card: cards[k] });
        }
        if out.iter().any(|&(j, _)| j == k) {
            return Err(Error::Shape(format!("{name} repeated in do-set")));
        }
        out.push((k, v));
    }
    out.sort_unstable();
    Ok(out)
}

fn reject_inputs(g: &Pdag) -> Result<()> {
    if g.has_inputs() {
        return Err(Error::InputNodes);
    }
    Ok(())
}

fn visible_cards<P: Probability>(g: &Pdag, par: &Params<P>) -> Result<(Vec<usize>, Vec<NodeId>, Vec<usize>)> {
    let vis = g.visible();
    let ids = vis.iter().map(|&v| g.id(v).clone()).collect();
    let cards = vis.iter().map(|&v| par.card(g.id(v).as_str())).collect::<Result<_>>()?;
    Ok((vis, ids, cards))
}

/// Sum over every joint state of `order` (node positions), calling `leaf`
/// with the completed state and its weight. Positions in `fixed` keep their
/// preset value and contribute no factor.
fn enumerate_worlds<P: Probability>(
    compiled: &[Option<Compiled<P>>],
    order: &[usize],
    fixed: &[bool],
    state: &mut Vec<usize>,
    weight: P,
    leaf: &mut dyn FnMut(&[usize], &P),
) {
    let Some((&v, rest)) = order.split_first() else {
        leaf(state, &weight);
        return;
    };
    if fixed[v] {
        enumerate_worlds(compiled, rest, fixed, state, weight, leaf);
        return;
    }
    let c = compiled[v].as_ref().expect("non-input node has a mechanism");
    for x in 0..c.card {
        let p = c.prob(state, x);
        if p.is_zero() {
            continue;
        }
        state[v] = x;
        enumerate_worlds(compiled, rest, fixed, state, weight.clone() * p.clone(), leaf);
    }
}

/// `P(flat | sharp)` of the full-SWIG of `g`: each flat copy reads the sharp
/// values of its visible parents and the values of its latent parents.
pub fn full_conditional<P: Probability>(g: &Pdag, par: &Params<P>) -> Result<FullConditional<P>> {
    reject_inputs(g)?;
    let compiled = par.compile(g)?;
    let (vis, ids, cards) = visible_cards(g, par)?;
    let states: usize = cards.iter().product();
    let latent_order: Vec<usize> = g.topological_order().into_iter().filter(|&i| g.kind(i) == NodeKind::Latent).collect();
    let fixed: Vec<bool> = (0..g.len()).map(|i| g.kind(i) != NodeKind::Latent).collect();
    let mut values = vec![P::zero(); states * states];
    for sharp in assignments(&cards) {
        let mut state = vec![0; g.len()];
        for (&v, &x) in vis.iter().zip(&sharp) {
            state[v] = x;
        }
        let base = encode(&sharp, &cards) * states;
        let slice = &mut values[base..base + states];
        enumerate_worlds(&compiled, &latent_order, &fixed, &mut state, P::one(), &mut |st, w| {
            // Outer product of the flat conditionals, built one node at a time.
            let mut acc = vec![w.clone()];
            for &v in &vis {
                let c = compiled[v].as_ref().expect("visible mechanism");
                let mut next = Vec::with_capacity(acc.len() * c.card);
                for a in &acc {
                    for x in 0..c.card {
                        next.push(a.clone() * c.prob(st, x).clone());
                    }
                }
                acc = next;
            }
            for (slot, a) in slice.iter_mut().zip(acc) {
                *slot = slot.clone() + a;
            }
        });
    }
    FullConditional::new(ids, cards, values)
}

/// Truncated factorization on the unsplit graph: mechanisms of the do-nodes
/// are deleted and their values forced. The result ranges over the
/// remaining visible nodes in temporal order.
pub fn simulate<P: Probability, S: AsRef<str>>(g: &Pdag, par: &Params<P>, do_nodes: &[S], do_values: &[usize]) -> Result<Table<P>> {
    reject_inputs(g)?;
    let compiled = par.compile(g)?;
    let (vis, ids, cards) = visible_cards(g, par)?;
    let forced = normalize_do(&ids, &cards, do_nodes, do_values)?;
    let mut fixed = vec![false; g.len()];
    let mut state = vec![0; g.len()];
    for &(k, x) in &forced {
        fixed[vis[k]] = true;
        state[vis[k]] = x;
    }
    let keep: Vec<usize> = (0..vis.len()).filter(|k| !forced.iter().any(|&(j, _)| j == *k)).collect();
    let mut out = Table::zeros(keep.iter().map(|&k| ids[k].clone()).collect(), keep.iter().map(|&k| cards[k]).collect());
    let order = g.topological_order();
    enumerate_worlds(&compiled, &order, &fixed, &mut state, P::one(), &mut |st, w| {
        let key: Vec<usize> = keep.iter().map(|&k| st[vis[k]]).collect();
        out.add_at(&key, w.clone());
    });
    Ok(out)
}

/// `P(x) = P(flat = x | sharp = x)`.
pub fn observational_shadow<P: Probability>(fc: &FullConditional<P>) -> Table<P> {
    let values = assignments(fc.cards()).map(|x| fc.get(&x, &x).clone()).collect();
    Table::new(fc.nodes().to_vec(), fc.cards().to_vec(), values).expect("shape from fc")
}

/// Data of the do-pattern forcing `do_nodes` to `do_values`: sharp values
/// fixed on the do-set and equal to the flat values elsewhere, flat values
/// on the do-set summed out.
pub fn do_pattern_shadow<P: Probability, S: AsRef<str>>(fc: &FullConditional<P>, do_nodes: &[S], do_values: &[usize]) -> Result<Table<P>> {
    let forced = normalize_do(fc.nodes(), fc.cards(), do_nodes, do_values)?;
    let n = fc.nodes().len();
    let in_do: Vec<Option<usize>> = (0..n).map(|k| forced.iter().find(|&&(j, _)| j == k).map(|&(_, x)| x)).collect();
    let keep: Vec<usize> = (0..n).filter(|&k| in_do[k].is_none()).collect();
    let do_pos: Vec<usize> = forced.iter().map(|&(k, _)| k).collect();
    let keep_cards: Vec<usize> = keep.iter().map(|&k| fc.cards()[k]).collect();
    let do_cards: Vec<usize> = do_pos.iter().map(|&k| fc.cards()[k]).collect();
    let mut values = Vec::with_capacity(keep_cards.iter().product());
    for y in assignments(&keep_cards) {
        let mut sharp = vec![0; n];
        for (&k, &v) in keep.iter().zip(&y) {
            sharp[k] = v;
        }
        for &(k, x) in &forced {
            sharp[k] = x;
        }
        let mut total = P::zero();
        for z in assignments(&do_cards) {
            let mut flat = sharp.clone();
            for (&k, &v) in do_pos.iter().zip(&z) {
                flat[k] = v;
            }
            total = total + fc.get(&sharp, &flat).clone();
        }
        values.push(total);
    }
    Table::new(keep.iter().map(|&k| fc.nodes()[k].clone()).collect(), keep_cards, values)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::params::{uniform_cards, Mechanism};
    use num_rational::BigRational;
    use std::collections::BTreeMap;
    use NodeKind::*;

    type Q = BigRational;

    fn id(s: &str) -> NodeId {
        NodeId::new(s).unwrap()
    }

    fn q(n: i64, d: i64) -> Q {
        Q::from_ratio(n, d)
    }

    /// a uniform, b copies a.
    fn copy_model() -> (Pdag, Params<Q>) {
        let g = Pdag::new([("a", Visible), ("b", Visible)], [("a", "b")]).unwrap();
        let mut m = BTreeMap::new();
        m.insert(id("a"), Mechanism::source(vec![], 1, vec![q(1, 2), q(1, 2)]));
        m.insert(id("b"), Mechanism { parents: vec![id("a")], error: vec![q(1, 1)], table: vec![0, 1] });
        (g.clone(), Params { cards: uniform_cards(&g, 2), mechanisms: m })
    }

    #[test]
    fn lone_source_ignores_sharp() {
        let g = Pdag::new([("a", Visible)], Vec::<(&str, &str)>::new()).unwrap();
        let mut m = BTreeMap::new();
        m.insert(id("a"), Mechanism::source(vec![], 1, vec![q(2, 3), q(1, 3)]));
        let fc = full_conditional(&g, &Params { cards: uniform_cards(&g, 2), mechanisms: m }).unwrap();
        for s in 0..2 {
            assert_eq!(*fc.get(&[s], &[1]), q(1, 3));
        }
    }

    #[test]
    fn copy_mechanism_tracks_sharp() {
        let (g, par) = copy_model();
        let fc = full_conditional(&g, &par).unwrap();
        assert!(fc.is_normalized());
        for x in 0..2 {
            let b_flat_is_x: Q = (0..2).map(|a| fc.get(&[x, 0], &[a, x]).clone()).fold(q(0, 1), |s, v| s + v);
            assert_eq!(b_flat_is_x, q(1, 1));
        }
        let obs = observational_shadow(&fc);
        assert_eq!(obs.values(), &[q(1, 2), q(0, 1), q(0, 1), q(1, 2)]);
        assert_eq!(obs, simulate(&g, &par, &[] as &[&str], &[]).unwrap());
    }

    #[test]
    fn do_shadow_matches_truncated_simulation() {
        let (g, par) = copy_model();
        let fc = full_conditional(&g, &par).unwrap();
        let t = do_pattern_shadow(&fc, &["a"], &[0]).unwrap();
        assert_eq!(t.values(), &[q(1, 1), q(0, 1)]);
        assert_eq!(t, simulate(&g, &par, &["a"], &[0]).unwrap());
        let all = do_pattern_shadow(&fc, &["b", "a"], &[1, 0]).unwrap();
        assert_eq!(all.values(), &[q(1, 1)]);
        assert_eq!(do_pattern_shadow(&fc, &[] as &[&str], &[]).unwrap(), observational_shadow(&fc));
        assert!(matches!(do_pattern_shadow(&fc, &["a"], &[2]), Err(Error::OutOfRange { .. })));
    }

    /// Brute-force oracle for the confounded pair: sum over the latent and
    /// the error worlds with explicit loops.
    #[test]
    fn confounded_pair_matches_world_sum() {
        let g = Pdag::new([("a", Visible), ("b", Visible), ("l", Latent)], [("l", "a"), ("l", "b"), ("a", "b")]).unwrap();
        let mut m = BTreeMap::new();
        m.insert(id("l"), Mechanism::source(vec![], 1, vec![q(1, 2), q(1, 2)]));
        m.insert(id("a"), Mechanism { parents: vec![id("l")], error: vec![q(1, 1)], table: vec![0, 1] });
        // b = l xor a, flipped with probability 1/4.
        m.insert(
            id("b"),
            Mechanism { parents: vec![id("a"), id("l")], error: vec![q(3, 4), q(1, 4)], table: vec![0, 1, 1, 0, 1, 0, 0, 1] },
        );
        let par = Params { cards: uniform_cards(&g, 2), mechanisms: m };
        let fc = full_conditional(&g, &par).unwrap();
        for sa in 0..2 {
            for sb in 0..2 {
                for fa in 0..2 {
                    for fb in 0..2 {
                        let mut expect = q(0, 1);
                        for l in 0..2usize {
                            for e in 0..2usize {
                                let pe = if e == 0 { q(3, 4) } else { q(1, 4) };
                                let a = l;
                                let b = l ^ sa ^ e;
                                if a == fa && b == fb {
                                    expect += q(1, 2) * pe;
                                }
                            }
                        }
                        let _ = sb;
                        assert_eq!(*fc.get(&[sa, sb], &[fa, fb]), expect);
                    }
                }
            }
        }
    }

    #[test]
    fn endogenous_latent_reads_sharp_parent() {
        let g = Pdag::new([("a", Visible), ("l", Latent), ("b", Visible)], [("a", "l"), ("l", "b")]).unwrap();
        let mut m = BTreeMap::new();
        m.insert(id("a"), Mechanism::source(vec![], 1, vec![q(1, 2), q(1, 2)]));
        m.insert(id("l"), Mechanism { parents: vec![id("a")], error: vec![q(1, 1)], table: vec![0, 1] });
        m.insert(id("b"), Mechanism { parents: vec![id("l")], error: vec![q(1, 1)], table: vec![0, 1] });
        let par = Params { cards: uniform_cards(&g, 2), mechanisms: m };
        let fc = full_conditional(&g, &par).unwrap();
        assert_eq!(*fc.get(&[1, 0], &[0, 1]), q(1, 2));
        assert_eq!(*fc.get(&[1, 0], &[0, 0]), q(0, 1));
    }

    #[test]
    fn inputs_rejected() {
        let g = Pdag::new([("a", Input)], Vec::<(&str, &str)>::new()).unwrap();
        let par: Params<Q> = Params { cards: uniform_cards(&g, 2), mechanisms: BTreeMap::new() };
        assert_eq!(full_conditional(&g, &par).unwrap_err(), Error::InputNodes);
    }
}
