use std::collections::BTreeMap;

use super::params::{Cards, Params};
use super::simulate::{do_pattern_shadow, normalize_do, simulate};
use super::table::{assignments, FullConditional, Table};
use crate::error::{Error, Result};
use crate::graph::{NodeId, Pdag};
use crate::scalar::Probability;

/// Data of one do-pattern: the do-set (temporal order), its forced values,
/// and the distribution of the remaining visible nodes.
#[derive(Debug, Clone, PartialEq)]
pub struct Pattern<P> {
    pub do_set: Vec<NodeId>,
    pub values: Vec<usize>,
    pub table: Table<P>,
}

/// Shadow data keyed by do-pattern.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbeDataset<P> {
    nodes: Vec<NodeId>,
    cards: Vec<usize>,
    patterns: Vec<Pattern<P>>,
    index: BTreeMap<(Vec<usize>, Vec<usize>), usize>,
}

impl<P: Probability> ProbeDataset<P> {
    /// Validates each pattern: known, ordered do-set with in-range values, a
    /// normalized table over the complement, and no repeated key.
    pub fn new(nodes: Vec<NodeId>, cards: Vec<usize>, patterns: Vec<Pattern<P>>) -> Result<Self> {
        if nodes.len() != cards.len() {
            return Err(Error::Shape("nodes and cards differ in length".into()));
        }
        let mut index = BTreeMap::new();
        for (i, pat) in patterns.iter().enumerate() {
            let forced = normalize_do(&nodes, &cards, &pat.do_set, &pat.values)?;
            let positions: Vec<usize> = forced.iter().map(|&(k, _)| k).collect();
            let values: Vec<usize> = forced.iter().map(|&(_, x)| x).collect();
            let keep: Vec<usize> = (0..nodes.len()).filter(|k| !positions.contains(k)).collect();
            let expect_nodes: Vec<&NodeId> = keep.iter().map(|&k| &nodes[k]).collect();
            let expect_cards: Vec<usize> = keep.iter().map(|&k| cards[k]).collect();
            if pat.table.nodes().iter().collect::<Vec<_>>() != expect_nodes || pat.table.cards() != expect_cards {
                return Err(Error::Shape(format!("pattern do{:?} has a table over the wrong variables", pat.do_set)));
            }
            if !pat.table.total().approx_eq(&P::one()) || pat.table.values().iter().any(|v| *v < P::zero()) {
                return Err(Error::Shape(format!("pattern do{:?} is not a distribution", pat.do_set)));
            }
            if index.insert((positions, values), i).is_some() {
                return Err(Error::Shape(format!("pattern do{:?} appears twice", pat.do_set)));
            }
        }
        let mut patterns = patterns;
        for pat in &mut patterns {
            let forced = normalize_do(&nodes, &cards, &pat.do_set, &pat.values)?;
            pat.do_set = forced.iter().map(|&(k, _)| nodes[k].clone()).collect();
            pat.values = forced.iter().map(|&(_, x)| x).collect();
        }
        Ok(ProbeDataset { nodes, cards, patterns, index })
    }

    pub fn nodes(&self) -> &[NodeId] {
        &self.nodes
    }

    pub fn cards(&self) -> &[usize] {
        &self.cards
    }

    pub fn cards_map(&self) -> Cards {
        self.nodes.iter().cloned().zip(self.cards.iter().copied()).collect()
    }

    pub fn patterns(&self) -> &[Pattern<P>] {
        &self.patterns
    }

    /// Pattern forcing the visible positions `do_positions` (ascending) to
    /// `values`.
    pub fn find(&self, do_positions: &[usize], values: &[usize]) -> Option<&Pattern<P>> {
        self.index.get(&(do_positions.to_vec(), values.to_vec())).map(|&i| &self.patterns[i])
    }

    fn require(&self, do_positions: &[usize], values: &[usize]) -> Result<&Pattern<P>> {
        self.find(do_positions, values).ok_or_else(|| Error::MissingPattern {
            do_set: do_positions.iter().map(|&k| self.nodes[k].to_string()).collect(),
            values: values.to_vec(),
        })
    }

    /// Whether every do-value in the dataset is zero.
    pub fn only_zero_do(&self) -> bool {
        self.patterns.iter().all(|p| p.values.iter().all(|&v| v == 0))
    }

    /// Equal keys and tables (up to the scalar's rounding), in any order.
    pub fn same_data(&self, other: &ProbeDataset<P>) -> bool {
        self.nodes == other.nodes
            && self.cards == other.cards
            && self.index.len() == other.index.len()
            && self.index.iter().all(|(key, &i)| {
                other.index.get(key).is_some_and(|&j| self.patterns[i].table.approx_eq(&other.patterns[j].table))
            })
    }
}

/// Do-sets in mask order (bit `k` is visible node `k`), each with either
/// every value assignment or only all-zeros.
fn pattern_keys(cards: &[usize], one_do: bool) -> Vec<(Vec<usize>, Vec<usize>)> {
    let n = cards.len();
    let mut out = Vec::new();
    for mask in 0usize..1 << n {
        let pos: Vec<usize> = (0..n).filter(|k| mask >> k & 1 == 1).collect();
        if one_do {
            out.push((pos.clone(), vec![0; pos.len()]));
        } else {
            let sub: Vec<usize> = pos.iter().map(|&k| cards[k]).collect();
            out.extend(assignments(&sub).map(|v| (pos.clone(), v)));
        }
    }
    out
}

/// Every do-pattern of `(g, par)`, computed by truncated factorization on
/// the unsplit graph. With `one_do`, only the all-zeros value per do-set.
pub fn generate_all_patterns<P: Probability>(g: &Pdag, par: &Params<P>, one_do: bool) -> Result<ProbeDataset<P>> {
    let nodes = g.visible_ids();
    let cards = nodes.iter().map(|n| par.card(n.as_str())).collect::<Result<Vec<_>>>()?;
    let patterns = pattern_keys(&cards, one_do)
        .into_iter()
        .map(|(pos, values)| {
            let do_set: Vec<NodeId> = pos.iter().map(|&k| nodes[k].clone()).collect();
            let table = simulate(g, par, &do_set, &values)?;
            Ok(Pattern { do_set, values, table })
        })
        .collect::<Result<Vec<_>>>()?;
    ProbeDataset::new(nodes, cards, patterns)
}

/// Every do-pattern read off a full conditional.
pub fn shadow_all_patterns<P: Probability>(fc: &FullConditional<P>, one_do: bool) -> Result<ProbeDataset<P>> {
    let nodes = fc.nodes().to_vec();
    let patterns = pattern_keys(fc.cards(), one_do)
        .into_iter()
        .map(|(pos, values)| {
            let do_set: Vec<NodeId> = pos.iter().map(|&k| nodes[k].clone()).collect();
            let table = do_pattern_shadow(fc, &do_set, &values)?;
            Ok(Pattern { do_set, values, table })
        })
        .collect::<Result<Vec<_>>>()?;
    ProbeDataset::new(nodes, fc.cards().to_vec(), patterns)
}

fn require_binary<P: Probability>(ds: &ProbeDataset<P>) -> Result<()> {
    match ds.cards.iter().position(|&c| c != 2) {
        Some(k) => Err(Error::NonBinary(ds.nodes[k].to_string(), ds.cards[k])),
        None => Ok(()),
    }
}

/// `P(flat = f | sharp = s)` for every `f`, from the patterns whose forced
/// values agree with `s`. With `D` the nodes where `f` differs from `s` and
/// `E` the rest, inclusion-exclusion over `T ⊆ D` gives
/// `Σ (-1)^|T| Q(X_{E∪T} = s | do(X_{D\T} = s))`.
pub fn reconstruct_binary_slice<P: Probability>(ds: &ProbeDataset<P>, sharp: &[usize]) -> Result<Vec<P>> {
    require_binary(ds)?;
    let n = ds.nodes.len();
    if sharp.len() != n || sharp.iter().any(|&x| x > 1) {
        return Err(Error::Shape("sharp assignment does not fit the dataset".into()));
    }
    // agree[mask] = Q(X_B = s_B | do(X_A = s_A)) with A the nodes of `mask`.
    let mut agree = Vec::with_capacity(1 << n);
    for mask in 0usize..1 << n {
        let pos: Vec<usize> = (0..n).filter(|k| mask >> k & 1 == 1).collect();
        let vals: Vec<usize> = pos.iter().map(|&k| sharp[k]).collect();
        let pat = ds.require(&pos, &vals)?;
        let rest: Vec<usize> = (0..n).filter(|k| mask >> k & 1 == 0).map(|k| sharp[k]).collect();
        agree.push(pat.table.get(&rest).clone());
    }
    let mut out = Vec::with_capacity(1 << n);
    for flat in assignments(&ds.cards) {
        let d_mask = (0..n).filter(|&k| flat[k] != sharp[k]).fold(0usize, |m, k| m | 1 << k);
        let mut total = P::zero();
        // T runs over subsets of D; the do-set is D \ T.
        let mut t = d_mask;
        loop {
            let term = agree[d_mask & !t].clone();
            total = if t.count_ones() % 2 == 0 { total + term } else { total - term };
            if t == 0 {
                break;
            }
            t = (t - 1) & d_mask;
        }
        out.push(total);
    }
    Ok(out)
}

/// Full conditional of binary data holding every do-pattern.
pub fn reconstruct_binary<P: Probability>(ds: &ProbeDataset<P>) -> Result<FullConditional<P>> {
    require_binary(ds)?;
    let mut values = Vec::new();
    for sharp in assignments(&ds.cards) {
        values.extend(reconstruct_binary_slice(ds, &sharp)?);
    }
    FullConditional::new(ds.nodes.clone(), ds.cards.clone(), values)
}
