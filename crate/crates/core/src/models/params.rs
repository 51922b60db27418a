use std::collections::BTreeMap;

use rand::Rng;

use super::table::{decode, encode};
use crate::error::{Error, Result};
use crate::graph::{NodeId, NodeKind, Pdag};
use crate::scalar::{sum, Probability};

/// State-space size per node; states are `0..card`.
pub type Cards = BTreeMap<NodeId, usize>;

/// Response table `f(parent states, error) -> state` with its error law.
///
/// `table[encode(parent_states) * error.len() + e]`, parent states in the
/// order of `parents`.
#[derive(Debug, Clone, PartialEq)]
pub struct Mechanism<P> {
    pub parents: Vec<NodeId>,
    pub error: Vec<P>,
    pub table: Vec<usize>,
}

impl<P: Probability> Mechanism<P> {
    /// Deterministic constant.
    pub fn constant(parents: Vec<NodeId>, parent_states: usize, value: usize) -> Self {
        Mechanism { parents, error: vec![P::one()], table: vec![value; parent_states] }
    }

    /// Error variable of cardinality `card` copied straight into the node.
    pub fn source(parents: Vec<NodeId>, parent_states: usize, error: Vec<P>) -> Self {
        let e = error.len();
        Mechanism { parents, error, table: (0..parent_states).flat_map(|_| 0..e).collect() }
    }

    /// Error ranging over every response function `parent state -> state`,
    /// each weighted by `weights`.
    pub fn response_functions(parents: Vec<NodeId>, parent_states: usize, card: usize, weights: Vec<P>) -> Result<Self> {
        let count = card.checked_pow(parent_states as u32).filter(|&c| c <= 1 << 16);
        let count = count.ok_or_else(|| Error::Shape("response-function space too large".into()))?;
        if weights.len() != count {
            return Err(Error::Shape(format!("expected {count} response-function weights")));
        }
        let per_state: Vec<usize> = vec![card; parent_states];
        let mut table = vec![0; parent_states * count];
        for e in 0..count {
            // Function `e` maps parent state `ps` to digit `ps` of `e` in base `card`.
            for (ps, &v) in decode(e, &per_state).iter().enumerate() {
                table[ps * count + e] = v;
            }
        }
        Ok(Mechanism { parents, error: weights, table })
    }

    /// `P(node = x | parents = ps)` at `cpt[ps * card + x]`.
    pub fn cpt(&self, card: usize) -> Vec<P> {
        let e = self.error.len();
        let parent_states = self.table.len() / e;
        let mut out = vec![P::zero(); parent_states * card];
        for ps in 0..parent_states {
            for (k, w) in self.error.iter().enumerate() {
                let x = self.table[ps * e + k];
                out[ps * card + x] = out[ps * card + x].clone() + w.clone();
            }
        }
        out
    }
}

/// Causal parameters: a mechanism for every non-input node.
#[derive(Debug, Clone, PartialEq)]
pub struct Params<P> {
    pub cards: Cards,
    pub mechanisms: BTreeMap<NodeId, Mechanism<P>>,
}

/// A node's compiled conditional table.
#[derive(Debug, Clone)]
pub(crate) struct Compiled<P> {
    pub parents: Vec<usize>,
    pub parent_cards: Vec<usize>,
    pub card: usize,
    pub cpt: Vec<P>,
}

impl<P: Probability> Compiled<P> {
    pub fn prob(&self, state: &[usize], x: usize) -> &P {
        let ps: Vec<usize> = self.parents.iter().map(|&p| state[p]).collect();
        &self.cpt[encode(&ps, &self.parent_cards) * self.card + x]
    }
}

impl<P: Probability> Params<P> {
    pub fn card(&self, node: &str) -> Result<usize> {
        self.cards.get(node).copied().ok_or_else(|| Error::Shape(format!("no cardinality for {node}")))
    }

    /// Check shapes against `g`: every node has a cardinality, every
    /// non-input node a total response table over its parents and a
    /// normalized error law.
    pub fn check(&self, g: &Pdag) -> Result<()> {
        for n in g.nodes() {
            if self.card(n.id.as_str())? == 0 {
                return Err(Error::Shape(format!("cardinality of {} is zero", n.id)));
            }
        }
        for id in self.mechanisms.keys() {
            let i = g.require(id.as_str())?;
            if g.kind(i) == NodeKind::Input {
                return Err(Error::Shape(format!("input node {id} cannot have a mechanism")));
            }
        }
        for (i, n) in g.nodes().iter().enumerate() {
            if n.kind == NodeKind::Input {
                continue;
            }
            let m = self
                .mechanisms
                .get(&n.id)
                .ok_or_else(|| Error::Shape(format!("no mechanism for {}", n.id)))?;
            let parents: Vec<NodeId> = g.parents(i).into_iter().map(|p| g.id(p).clone()).collect();
            if m.parents != parents {
                return Err(Error::Shape(format!("mechanism parents of {} differ from the graph", n.id)));
            }
            if m.error.is_empty() || m.error.iter().any(|w| *w < P::zero()) {
                return Err(Error::Shape(format!("error law of {} is empty or negative", n.id)));
            }
            if !sum(m.error.iter().cloned()).approx_eq(&P::one()) {
                return Err(Error::Shape(format!("error law of {} does not sum to one", n.id)));
            }
            let parent_states: usize = parents.iter().map(|p| self.cards[p]).product();
            if m.table.len() != parent_states * m.error.len() {
                return Err(Error::Shape(format!("response table of {} has the wrong size", n.id)));
            }
            let card = self.cards[&n.id];
            if let Some(&v) = m.table.iter().find(|&&v| v >= card) {
                return Err(Error::OutOfRange { node: n.id.to_string(), value: v, card });
            }
        }
        Ok(())
    }

    /// Conditional tables indexed by node position in `g`; `None` for inputs.
    pub(crate) fn compile(&self, g: &Pdag) -> Result<Vec<Option<Compiled<P>>>> {
        self.check(g)?;
        Ok((0..g.len())
            .map(|i| {
                let m = self.mechanisms.get(g.id(i))?;
                let parents = g.parents(i);
                let parent_cards = parents.iter().map(|&p| self.cards[g.id(p)]).collect();
                let card = self.cards[g.id(i)];
                Some(Compiled { parents, parent_cards, card, cpt: m.cpt(card) })
            })
            .collect())
    }

    /// Random parameters on `g` with the given cardinalities. Each error
    /// variable has between one and `max_error` values with random integer
    /// weights; response tables are uniform random.
    pub fn random<R: Rng + ?Sized>(g: &Pdag, cards: &Cards, max_error: usize, rng: &mut R) -> Result<Self> {
        let mut mechanisms = BTreeMap::new();
        for (i, n) in g.nodes().iter().enumerate() {
            if n.kind == NodeKind::Input {
                continue;
            }
            let card = *cards.get(&n.id).ok_or_else(|| Error::Shape(format!("no cardinality for {}", n.id)))?;
            let parents: Vec<NodeId> = g.parents(i).into_iter().map(|p| g.id(p).clone()).collect();
            let mut parent_states = 1usize;
            for p in &parents {
                parent_states *= *cards.get(p).ok_or_else(|| Error::Shape(format!("no cardinality for {p}")))?;
            }
            let e = rng.gen_range(1..=max_error.max(1));
            let mut weights: Vec<i64> = (0..e).map(|_| rng.gen_range(0..=4)).collect();
            if weights.iter().all(|&w| w == 0) {
                weights[0] = 1;
            }
            let total: i64 = weights.iter().sum();
            let error = weights.iter().map(|&w| P::from_ratio(w, total)).collect();
            let table = (0..parent_states * e).map(|_| rng.gen_range(0..card)).collect();
            mechanisms.insert(n.id.clone(), Mechanism { parents, error, table });
        }
        let params = Params { cards: cards.clone(), mechanisms };
        params.check(g)?;
        Ok(params)
    }
}

impl<P: Probability> Params<P> {
    /// [`Params::random`] driven by a ChaCha8 stream seeded with `seed`.
    pub fn seeded(g: &Pdag, cards: &Cards, max_error: usize, seed: u64) -> Result<Self> {
        use rand::SeedableRng;
        Self::random(g, cards, max_error, &mut rand_chacha::ChaCha8Rng::seed_from_u64(seed))
    }
}

/// Same cardinality `card` for every node of `g`.
pub fn uniform_cards(g: &Pdag, card: usize) -> Cards {
    g.nodes().iter().map(|n| (n.id.clone(), card)).collect()
}
