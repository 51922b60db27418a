use crate::error::{Error, Result};
use crate::graph::NodeId;
use crate::scalar::{sum, Probability};

/// Row-major index of `values` (first coordinate most significant).
pub fn encode(values: &[usize], cards: &[usize]) -> usize {
    values.iter().zip(cards).fold(0, |acc, (&v, &c)| acc * c + v)
}

/// Inverse of [`encode`].
pub fn decode(mut index: usize, cards: &[usize]) -> Vec<usize> {
    let mut out = vec![0; cards.len()];
    for (slot, &c) in out.iter_mut().zip(cards).rev() {
        *slot = index % c;
        index /= c;
    }
    out
}

/// Every assignment over `cards`, in row-major order.
pub fn assignments(cards: &[usize]) -> impl Iterator<Item = Vec<usize>> + '_ {
    (0..cards.iter().product::<usize>()).map(move |i| decode(i, cards))
}

/// Dense distribution (or conditional slice) over named discrete variables.
#[derive(Debug, Clone, PartialEq)]
pub struct Table<P> {
    nodes: Vec<NodeId>,
    cards: Vec<usize>,
    values: Vec<P>,
}

impl<P: Probability> Table<P> {
    pub fn new(nodes: Vec<NodeId>, cards: Vec<usize>, values: Vec<P>) -> Result<Self> {
        if nodes.len() != cards.len() || values.len() != cards.iter().product::<usize>() {
            return Err(Error::Shape(format!(
                "table over {} variables with cards {cards:?} cannot hold {} values",
                nodes.len(),
                values.len()
            )));
        }
        Ok(Table { nodes, cards, values })
    }

    pub fn zeros(nodes: Vec<NodeId>, cards: Vec<usize>) -> Self {
        let len = cards.iter().product();
        Table { nodes, cards, values: vec![P::zero(); len] }
    }

    pub fn nodes(&self) -> &[NodeId] {
        &self.nodes
    }

    pub fn cards(&self) -> &[usize] {
        &self.cards
    }

    pub fn values(&self) -> &[P] {
        &self.values
    }

    pub fn get(&self, assignment: &[usize]) -> &P {
        &self.values[encode(assignment, &self.cards)]
    }

    pub fn get_mut(&mut self, assignment: &[usize]) -> &mut P {
        let i = encode(assignment, &self.cards);
        &mut self.values[i]
    }

    /// Add `v` to the entry at `assignment`.
    pub fn add_at(&mut self, assignment: &[usize], v: P) {
        let i = encode(assignment, &self.cards);
        self.values[i] = self.values[i].clone() + v;
    }

    pub fn total(&self) -> P {
        sum(self.values.iter().cloned())
    }

    pub fn position(&self, node: &str) -> Option<usize> {
        self.nodes.iter().position(|n| n.as_str() == node)
    }

    /// Marginal onto the variables at `keep` (positions, in that order).
    pub fn marginal(&self, keep: &[usize]) -> Table<P> {
        let nodes = keep.iter().map(|&k| self.nodes[k].clone()).collect();
        let cards: Vec<usize> = keep.iter().map(|&k| self.cards[k]).collect();
        let mut out = Table::zeros(nodes, cards);
        for (i, v) in self.values.iter().enumerate() {
            if v.is_zero() {
                continue;
            }
            let full = decode(i, &self.cards);
            let sub: Vec<usize> = keep.iter().map(|&k| full[k]).collect();
            out.add_at(&sub, v.clone());
        }
        out
    }

    pub fn approx_eq(&self, other: &Table<P>) -> bool {
        self.nodes == other.nodes
            && self.cards == other.cards
            && self.values.iter().zip(&other.values).all(|(a, b)| a.approx_eq(b))
    }
}

/// The tensor `P(flat | sharp)` over the visible nodes in temporal order:
/// index `encode(sharp) * flat_len + encode(flat)`.
#[derive(Debug, Clone, PartialEq)]
pub struct FullConditional<P> {
    nodes: Vec<NodeId>,
    cards: Vec<usize>,
    values: Vec<P>,
}

impl<P: Probability> FullConditional<P> {
    pub fn new(nodes: Vec<NodeId>, cards: Vec<usize>, values: Vec<P>) -> Result<Self> {
        let len: usize = cards.iter().product();
        if nodes.len() != cards.len() || values.len() != len * len {
            return Err(Error::Shape(format!("full conditional over cards {cards:?} cannot hold {} values", values.len())));
        }
        Ok(FullConditional { nodes, cards, values })
    }

    pub fn nodes(&self) -> &[NodeId] {
        &self.nodes
    }

    pub fn cards(&self) -> &[usize] {
        &self.cards
    }

    pub fn values(&self) -> &[P] {
        &self.values
    }

    /// Number of assignments of the visible nodes.
    pub fn states(&self) -> usize {
        self.cards.iter().product()
    }

    pub fn get(&self, sharp: &[usize], flat: &[usize]) -> &P {
        &self.values[encode(sharp, &self.cards) * self.states() + encode(flat, &self.cards)]
    }

    /// Distribution of the flat variables for one sharp assignment.
    pub fn slice(&self, sharp: &[usize]) -> &[P] {
        let s = self.states();
        let start = encode(sharp, &self.cards) * s;
        &self.values[start..start + s]
    }

    /// Whether every sharp slice sums to one.
    pub fn is_normalized(&self) -> bool {
        self.values.chunks(self.states()).all(|c| sum(c.iter().cloned()).approx_eq(&P::one()))
    }

    pub fn approx_eq(&self, other: &FullConditional<P>) -> bool {
        self.nodes == other.nodes
            && self.cards == other.cards
            && self.values.iter().zip(&other.values).all(|(a, b)| a.approx_eq(b))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    fn ids(v: &[&str]) -> Vec<NodeId> {
        v.iter().map(|s| NodeId::new(*s).unwrap()).collect()
    }

    #[test]
    fn encode_decode_round_trip() {
        let cards = [2, 3, 2];
        for i in 0..12 {
            assert_eq!(encode(&decode(i, &cards), &cards), i);
        }
        assert_eq!(encode(&[1, 0, 0], &cards), 6);
        assert_eq!(assignments(&cards).count(), 12);
        assert_eq!(assignments(&[]).collect::<Vec<_>>(), vec![Vec::<usize>::new()]);
    }

    #[test]
    fn marginal_sums_out() {
        let q = |n| BigRational::from_ratio(n, 8);
        let t = Table::new(ids(&["a", "b"]), vec![2, 2], vec![q(1), q(2), q(3), q(2)]).unwrap();
        let m = t.marginal(&[1]);
        assert_eq!(m.values(), &[q(4), q(4)]);
        assert_eq!(t.total(), BigRational::from_ratio(1, 1));
        assert!(Table::<BigRational>::new(ids(&["a"]), vec![2], vec![q(1)]).is_err());
    }
}
