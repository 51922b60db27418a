use std::collections::BTreeMap;

use super::dataset::{reconstruct_binary_slice, Pattern, ProbeDataset};
use super::params::{uniform_cards, Mechanism, Params};
use super::simulate::simulate;
use super::table::{assignments, decode, Table};
use crate::dsep::d_separated_idx;
use crate::error::{Error, Result};
use crate::graph::{Mdag, NodeId, NodeKind, Pdag};
use crate::order::structurally_dominates;
use crate::reduction::canonical_pdag;
use crate::scalar::{sum, Probability};
use crate::swig::{convert_i_to_v, split, SplitNaming};

/// Observed assignment `x` has `P(x) > P(node_flat = x_node | sharp = 0)`,
/// yet `node_flat` is d-separated from the sharp copies of `intervened` (the
/// nodes where `x` is one) given the other sharp nodes.
#[derive(Debug, Clone, PartialEq)]
pub struct DconnectionFact<P> {
    pub node: NodeId,
    pub intervened: Vec<NodeId>,
    pub observed: Vec<usize>,
    pub observed_probability: P,
    pub bound: P,
}

/// The flat copies of `nodes` are perfectly correlated at sharp = 0 with
/// weight `p` on all-zeros, but share no latent ancestor.
#[derive(Debug, Clone, PartialEq)]
pub struct CommonAncestorFact<P> {
    pub nodes: Vec<NodeId>,
    pub p: P,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Verdict<P> {
    FeasibleWithParams(Params<P>),
    InfeasibleDconnection(DconnectionFact<P>),
    InfeasibleCommonAncestor(CommonAncestorFact<P>),
    Undecided,
}

impl<P> Verdict<P> {
    pub fn status(&self) -> &'static str {
        match self {
            Verdict::FeasibleWithParams(_) => "feasible-with-params",
            Verdict::InfeasibleDconnection(_) => "infeasible-dconnection",
            Verdict::InfeasibleCommonAncestor(_) => "infeasible-common-ancestor",
            Verdict::Undecided => "undecided",
        }
    }

    pub fn is_infeasible(&self) -> bool {
        matches!(self, Verdict::InfeasibleDconnection(_) | Verdict::InfeasibleCommonAncestor(_))
    }
}

fn no_inputs(m: &Mdag) -> Result<()> {
    if m.has_inputs() {
        return Err(Error::InputNodes);
    }
    Ok(())
}

fn positions<S: AsRef<str>>(m: &Mdag, names: &[S]) -> Result<Vec<usize>> {
    let mut out = names
        .iter()
        .map(|s| m.index_of(s.as_ref()).ok_or_else(|| Error::UnknownNode(s.as_ref().to_string())))
        .collect::<Result<Vec<_>>>()?;
    out.sort_unstable();
    out.dedup();
    Ok(out)
}

/// Value of parent `parent` inside parent-state index `ps` of node `v`
/// (all cardinalities two).
fn parent_value(g: &Pdag, v: usize, ps: usize, parent: usize) -> usize {
    let parents = g.parents(v);
    let k = parents.iter().position(|&p| p == parent).expect("is a parent");
    decode(ps, &vec![2; parents.len()])[k]
}

fn parent_ids(g: &Pdag, v: usize) -> Vec<NodeId> {
    g.parents(v).into_iter().map(|p| g.id(p).clone()).collect()
}

/// Constant-zero mechanisms for every non-input node of `g`.
fn all_zero<P: Probability>(g: &Pdag) -> BTreeMap<NodeId, Mechanism<P>> {
    (0..g.len())
        .map(|v| (g.id(v).clone(), Mechanism::constant(parent_ids(g, v), 1 << g.parents(v).len(), 0)))
        .collect()
}

/// Dataset over every zero-valued do-pattern, from a rule giving the
/// distribution of the unforced nodes as weighted points.
fn zero_do_dataset<P: Probability>(
    ids: &[NodeId],
    points: impl Fn(&[usize]) -> Vec<(Vec<usize>, P)>,
) -> Result<ProbeDataset<P>> {
    let n = ids.len();
    let mut patterns = Vec::with_capacity(1 << n);
    for mask in 0usize..1 << n {
        let forced: Vec<usize> = (0..n).filter(|k| mask >> k & 1 == 1).collect();
        let keep: Vec<usize> = (0..n).filter(|k| mask >> k & 1 == 0).collect();
        let mut table = Table::zeros(keep.iter().map(|&k| ids[k].clone()).collect(), vec![2; keep.len()]);
        for (full, w) in points(&forced) {
            let key: Vec<usize> = keep.iter().map(|&k| full[k]).collect();
            table.add_at(&key, w);
        }
        patterns.push(Pattern { do_set: forced.iter().map(|&k| ids[k].clone()).collect(), values: vec![0; forced.len()], table });
    }
    ProbeDataset::new(ids.to_vec(), vec![2; n], patterns)
}

/// Members of face `S` copy one latent common cause, Bernoulli with
/// `P(0) = p`; all other variables are constant zero. Returns parameters on
/// `canonical_pdag(m)` and the data of every zero-valued do-pattern:
/// `p [S∖A = 0] + (1 - p) [S∖A = 1]`, everything else zero.
pub fn copy_construction<P: Probability, S: AsRef<str>>(m: &Mdag, face: &[S], p: P) -> Result<(Params<P>, ProbeDataset<P>)> {
    no_inputs(m)?;
    let s = positions(m, face)?;
    if !m.complex().contains(&s) {
        return Err(Error::NotAFace(face.iter().map(|x| x.as_ref().to_string()).collect()));
    }
    if p < P::zero() || p > P::one() {
        return Err(Error::Shape("p must lie in [0, 1]".into()));
    }
    let can = canonical_pdag(m);
    let q = P::one() - p.clone();
    let mut mech = all_zero::<P>(&can);
    let source = can.latents().into_iter().find(|&l| {
        let ch = can.children(l);
        s.iter().all(|x| ch.contains(x))
    });
    match source {
        Some(l) => {
            mech.insert(can.id(l).clone(), Mechanism::source(vec![], 1, vec![p.clone(), q.clone()]));
            for &v in &s {
                let states = 1 << can.parents(v).len();
                let table = (0..states).map(|ps| parent_value(&can, v, ps, l)).collect();
                mech.insert(can.id(v).clone(), Mechanism { parents: parent_ids(&can, v), error: vec![P::one()], table });
            }
        }
        None => {
            // A singleton face with no covering latent draws from its own error.
            let v = s[0];
            let states = 1 << can.parents(v).len();
            mech.insert(can.id(v).clone(), Mechanism::source(parent_ids(&can, v), states, vec![p.clone(), q.clone()]));
        }
    }
    let par = Params { cards: uniform_cards(&can, 2), mechanisms: mech };
    par.check(&can)?;
    let n = m.len();
    let ds = zero_do_dataset(&m.ids(), |forced| {
        let ones: Vec<usize> = (0..n).map(|k| usize::from(s.contains(&k) && !forced.contains(&k))).collect();
        vec![(vec![0; n], p.clone()), (ones, q.clone())]
    })?;
    Ok((par, ds))
}

/// `a` uniform, `b` copies `a`, everything else constant zero. Returns
/// parameters on `canonical_pdag(m)` and the data of every zero-valued
/// do-pattern.
pub fn chain_construction<P: Probability>(m: &Mdag, a: &str, b: &str) -> Result<(Params<P>, ProbeDataset<P>)> {
    no_inputs(m)?;
    let ia = m.index_of(a).ok_or_else(|| Error::UnknownNode(a.to_string()))?;
    let ib = m.index_of(b).ok_or_else(|| Error::UnknownNode(b.to_string()))?;
    if !m.has_edge(ia, ib) {
        return Err(Error::EdgeAbsent(a.to_string(), b.to_string()));
    }
    let can = canonical_pdag(m);
    let mut mech = all_zero::<P>(&can);
    let states_a = 1 << can.parents(ia).len();
    mech.insert(can.id(ia).clone(), Mechanism::source(parent_ids(&can, ia), states_a, vec![P::half(), P::half()]));
    let states_b = 1 << can.parents(ib).len();
    let table = (0..states_b).map(|ps| parent_value(&can, ib, ps, ia)).collect();
    mech.insert(can.id(ib).clone(), Mechanism { parents: parent_ids(&can, ib), error: vec![P::one()], table });
    let par = Params { cards: uniform_cards(&can, 2), mechanisms: mech };
    par.check(&can)?;
    let n = m.len();
    let ds = zero_do_dataset(&m.ids(), |forced| {
        let point = |va: usize| {
            let mut x = vec![0; n];
            if !forced.contains(&ia) {
                x[ia] = va;
            }
            if !forced.contains(&ib) {
                x[ib] = va;
            }
            x
        };
        if forced.contains(&ia) {
            vec![(point(0), P::one())]
        } else {
            vec![(point(0), P::half()), (point(1), P::half())]
        }
    })?;
    Ok((par, ds))
}

/// Structural infeasibility of binary data holding every zero-valued
/// do-pattern, for the graph `g`.
///
/// The sharp = 0 slice of the full conditional is reconstructed exactly.
/// d-connection: for observed `x` with ones on `D`, if `b_flat` is
/// d-separated from `D_sharp` given the other sharp nodes in the split
/// graph, then `P(x) <= P(b_flat = x_b | sharp = x) = P(b_flat = x_b | sharp = 0)`.
/// Common ancestor: a set of flat nodes perfectly correlated and
/// non-degenerate at sharp = 0 needs a common latent ancestor.
pub fn certify_infeasible<P: Probability>(g: &Pdag, ds: &ProbeDataset<P>) -> Result<Verdict<P>> {
    if g.has_inputs() {
        return Err(Error::InputNodes);
    }
    if g.visible_ids() != ds.nodes() {
        return Err(Error::NodeMismatch);
    }
    let n = ds.nodes().len();
    let slice = reconstruct_binary_slice(ds, &vec![0; n])?;
    let obs = &ds.find(&[], &[]).ok_or(Error::MissingPattern { do_set: vec![], values: vec![] })?.table;
    let s = split(g)?;
    let conv = convert_i_to_v(&s);
    let flat: Vec<usize> = ds.nodes().iter().map(|v| conv.index_of(SplitNaming::flat(v).as_str()).expect("flat copy")).collect();
    let sharp: Vec<usize> = ds.nodes().iter().map(|v| conv.index_of(SplitNaming::sharp(v).as_str()).expect("sharp copy")).collect();
    let cards = vec![2; n];
    let flats: Vec<Vec<usize>> = assignments(&cards).collect();

    for x in assignments(&cards) {
        let px = obs.get(&x).clone();
        if px.is_zero() || x.iter().all(|&v| v == 0) {
            continue;
        }
        let d: Vec<usize> = (0..n).filter(|&k| x[k] == 1).collect();
        let d_sharp: Vec<usize> = d.iter().map(|&k| sharp[k]).collect();
        let given: Vec<usize> = (0..n).filter(|&k| x[k] == 0).map(|k| sharp[k]).collect();
        for b in 0..n {
            if !d_separated_idx(&conv, &d_sharp, &[flat[b]], &given) {
                continue;
            }
            let bound = sum(flats.iter().zip(&slice).filter(|(f, _)| f[b] == x[b]).map(|(_, p)| p.clone()));
            if px > bound && !px.approx_eq(&bound) {
                return Ok(Verdict::InfeasibleDconnection(DconnectionFact {
                    node: ds.nodes()[b].clone(),
                    intervened: d.iter().map(|&k| ds.nodes()[k].clone()).collect(),
                    observed: x,
                    observed_probability: px,
                    bound,
                }));
            }
        }
    }

    let ancestors: Vec<Vec<bool>> = flat.iter().map(|&f| s.ancestors(f)).collect();
    let table = Table::new(ds.nodes().to_vec(), cards.clone(), slice)?;
    let mut masks: Vec<usize> = (0usize..1 << n).filter(|m| m.count_ones() >= 2).collect();
    masks.sort_by_key(|m| (m.count_ones(), *m));
    for mask in masks {
        let members: Vec<usize> = (0..n).filter(|k| mask >> k & 1 == 1).collect();
        let marg = table.marginal(&members);
        let p = marg.get(&vec![0; members.len()]).clone();
        let q = marg.get(&vec![1; members.len()]).clone();
        let two_point = !p.is_zero() && !q.is_zero() && (p.clone() + q).approx_eq(&P::one());
        if !two_point {
            continue;
        }
        let shared = (0..s.len()).any(|l| s.kind(l) == NodeKind::Latent && members.iter().all(|&k| ancestors[k][l]));
        if !shared {
            return Ok(Verdict::InfeasibleCommonAncestor(CommonAncestorFact {
                nodes: members.iter().map(|&k| ds.nodes()[k].clone()).collect(),
                p,
            }));
        }
    }
    Ok(Verdict::Undecided)
}

/// Feasible when `par` on `g` regenerates every pattern of `ds`.
pub fn check_feasible<P: Probability>(g: &Pdag, par: &Params<P>, ds: &ProbeDataset<P>) -> Result<Verdict<P>> {
    for pat in ds.patterns() {
        if !simulate(g, par, &pat.do_set, &pat.values)?.approx_eq(&pat.table) {
            return Ok(Verdict::Undecided);
        }
    }
    Ok(Verdict::FeasibleWithParams(par.clone()))
}

/// Inclusion lists showing `h` is `g` with edges and faces dropped.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DominanceCertificate {
    pub edges: Vec<(NodeId, NodeId)>,
    /// Each facet of `h` with a facet of `g` containing it.
    pub faces: Vec<(Vec<NodeId>, Vec<NodeId>)>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Construction<P> {
    Chain { from: NodeId, to: NodeId, mediaries: Vec<NodeId> },
    Copy { face: Vec<NodeId>, p: P },
}

#[derive(Debug, Clone, PartialEq)]
pub struct DistinguishingWitness<P> {
    pub construction: Construction<P>,
    pub dataset: ProbeDataset<P>,
    /// Parameters on `canonical_pdag(h)` realizing the dataset.
    pub params: Params<P>,
    /// Verdict for `canonical_pdag(g)`.
    pub verdict: Verdict<P>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Witness<P> {
    Dominates(DominanceCertificate),
    Distinguishing(Box<DistinguishingWitness<P>>),
}

/// Either the inclusion certificate for `g` dominating `h`, or data realized
/// by `h` with a structural infeasibility verdict for `g`. A missing edge
/// yields the chain construction, otherwise a missing face yields the copy
/// construction with `p = 1/2`. Every do-value in the data is zero.
pub fn dominance_witness<P: Probability>(g: &Mdag, h: &Mdag) -> Result<Witness<P>> {
    no_inputs(g)?;
    no_inputs(h)?;
    if structurally_dominates(g, h)? {
        let faces = h
            .complex()
            .facets()
            .iter()
            .map(|f| {
                let host = g.complex().facets().iter().find(|big| f.iter().all(|x| big.contains(x))).expect("dominated face");
                (f.iter().map(|&i| h.id(i).clone()).collect(), host.iter().map(|&i| g.id(i).clone()).collect())
            })
            .collect();
        return Ok(Witness::Dominates(DominanceCertificate { edges: h.edge_ids(), faces }));
    }
    let (construction, params, dataset) = if let Some(&(a, b)) = h.edges().difference(g.edges()).next() {
        let (par, ds) = chain_construction(h, h.id(a).as_str(), h.id(b).as_str())?;
        let mediaries = g.mediaries(a, b).into_iter().filter(|&x| x != a && x != b).map(|x| g.id(x).clone()).collect();
        (Construction::Chain { from: h.id(a).clone(), to: h.id(b).clone(), mediaries }, par, ds)
    } else {
        let face = h
            .complex()
            .facets()
            .iter()
            .find(|f| !g.complex().contains(f))
            .expect("some facet of h is missing from g");
        let names: Vec<NodeId> = face.iter().map(|&i| h.id(i).clone()).collect();
        let (par, ds) = copy_construction(h, &names, P::half())?;
        (Construction::Copy { face: names, p: P::half() }, par, ds)
    };
    let verdict = certify_infeasible(&canonical_pdag(g), &dataset)?;
    Ok(Witness::Distinguishing(Box::new(DistinguishingWitness { construction, dataset, params, verdict })))
}
