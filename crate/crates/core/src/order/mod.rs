//! Exhaustive mDAG enumeration over a fixed temporal order and the
//! structural-dominance partial order.
//!
//! Directed structures are bitmasks over the ordered pairs `(i, j)`, `i < j`,
//! listed lexicographically. Complexes are bitmasks over the `2^n - 1`
//! nonempty subsets: bit `s - 1` is set when subset `s` is a face.

mod dot;
mod hasse;

use std::collections::{BTreeSet, HashMap};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::{Mdag, Node, NodeId, NodeKind, SimplicialComplex};
use crate::parallel;

pub use dot::{DotStyle, ToDot};
pub use hasse::{hasse, transitive_closure, HasseDiagram};

/// Largest node count the enumerators accept.
pub const MAX_NODES: usize = 5;

fn check_n(n: usize) -> Result<()> {
    if n == 0 || n > MAX_NODES {
        return Err(Error::TooManyNodes(n));
    }
    Ok(())
}

/// Ordered pairs `(i, j)` with `i < j`, lexicographically.
pub fn directed_pairs(n: usize) -> Vec<(usize, usize)> {
    (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect()
}

fn mask_to_edges(pairs: &[(usize, usize)], mask: u32) -> BTreeSet<(usize, usize)> {
    pairs.iter().enumerate().filter(|(k, _)| mask >> k & 1 == 1).map(|(_, &p)| p).collect()
}

/// Every edge set consistent with the order `0 < 1 < … < n-1`, by mask.
pub fn enumerate_directed(n: usize) -> Result<Vec<BTreeSet<(usize, usize)>>> {
    check_n(n)?;
    let pairs = directed_pairs(n);
    Ok((0u32..1 << pairs.len()).map(|m| mask_to_edges(&pairs, m)).collect())
}

fn members(s: u32) -> Vec<usize> {
    (0..32).filter(|b| s >> b & 1 == 1).collect()
}

/// Subsets of size at least two, by size then lexicographic member list.
fn nontrivial_subsets(n: usize) -> Vec<u32> {
    let mut out: Vec<u32> = (1u32..1 << n).filter(|s| s.count_ones() >= 2).collect();
    out.sort_by_key(|&s| (s.count_ones(), members(s)));
    out
}

/// Face mask of the complex generated by `facets` plus all singletons.
fn face_mask(n: usize, facets: &[u32]) -> u64 {
    (1u32..1 << n)
        .filter(|&s| s.count_ones() == 1 || facets.iter().any(|&f| s & !f == 0))
        .fold(0u64, |m, s| m | 1 << (s - 1))
}

/// Compact complex: its nontrivial facets (as subset masks) and face mask.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ComplexCode {
    pub facets: Vec<u32>,
    pub faces: u64,
}

impl ComplexCode {
    pub fn to_complex(&self, ground: Vec<NodeId>) -> SimplicialComplex {
        let covered = self.facets.iter().fold(0u32, |a, &f| a | f);
        let singles = (0..ground.len()).filter(|i| covered >> i & 1 == 0).map(|i| 1u32 << i);
        let sets: Vec<Vec<usize>> = self.facets.iter().copied().chain(singles).map(members).collect();
        SimplicialComplex::from_index_sets(ground, sets)
    }
}

fn complex_codes(n: usize) -> Vec<ComplexCode> {
    fn extend(cands: &[u32], start: usize, chosen: &mut Vec<u32>, n: usize, out: &mut Vec<ComplexCode>) {
        out.push(ComplexCode { facets: chosen.clone(), faces: face_mask(n, chosen) });
        for k in start..cands.len() {
            let c = cands[k];
            if chosen.iter().all(|&f| c & !f != 0 && f & !c != 0) {
                chosen.push(c);
                extend(cands, k + 1, chosen, n, out);
                chosen.pop();
            }
        }
    }
    let cands = nontrivial_subsets(n);
    let mut out = Vec::new();
    extend(&cands, 0, &mut Vec::new(), n, &mut out);
    out
}

fn default_ground(n: usize) -> Vec<NodeId> {
    (0..n).map(|i| NodeId::new(((b'a' + i as u8) as char).to_string()).expect("letter")).collect()
}

/// Every simplicial complex over `n` labeled nodes containing all singletons,
/// by recursive antichain extension.
pub fn enumerate_complexes(n: usize) -> Result<Vec<SimplicialComplex>> {
    check_n(n)?;
    let ground = default_ground(n);
    Ok(complex_codes(n).iter().map(|c| c.to_complex(ground.clone())).collect())
}

/// All mDAGs over a fixed temporal order, indexed
/// `complex_index * directed_count + directed_mask`; each island (one
/// complex, every directed structure) is a contiguous block.
#[derive(Debug, Clone)]
pub struct MdagCatalog {
    order: Vec<NodeId>,
    pairs: Vec<(usize, usize)>,
    complexes: Vec<ComplexCode>,
    complex_index: HashMap<u64, usize>,
}

/// Enumerate the catalog over `order` (its length is the node count).
pub fn enumerate_mdags(order: &[NodeId]) -> Result<MdagCatalog> {
    let n = order.len();
    check_n(n)?;
    if order.iter().collect::<BTreeSet<_>>().len() != n {
        return Err(Error::Shape("duplicate node in order".into()));
    }
    let complexes = complex_codes(n);
    let complex_index = complexes.iter().enumerate().map(|(i, c)| (c.faces, i)).collect();
    Ok(MdagCatalog { order: order.to_vec(), pairs: directed_pairs(n), complexes, complex_index })
}

/// Catalog over `n` nodes named `a`, `b`, ….
pub fn enumerate_mdags_n(n: usize) -> Result<MdagCatalog> {
    check_n(n)?;
    enumerate_mdags(&default_ground(n))
}

impl MdagCatalog {
    pub fn order(&self) -> &[NodeId] {
        &self.order
    }

    pub fn n(&self) -> usize {
        self.order.len()
    }

    pub fn directed_count(&self) -> usize {
        1 << self.pairs.len()
    }

    pub fn complex_count(&self) -> usize {
        self.complexes.len()
    }

    pub fn len(&self) -> usize {
        self.directed_count() * self.complex_count()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn complex_codes(&self) -> &[ComplexCode] {
        &self.complexes
    }

    /// (complex index, directed mask) of entry `i`.
    pub fn split_index(&self, i: usize) -> (usize, u32) {
        (i / self.directed_count(), (i % self.directed_count()) as u32)
    }

    pub fn join_index(&self, complex: usize, directed: u32) -> usize {
        complex * self.directed_count() + directed as usize
    }

    /// Entry indices sharing complex `c`.
    pub fn island(&self, c: usize) -> std::ops::Range<usize> {
        let d = self.directed_count();
        c * d..(c + 1) * d
    }

    pub fn directed_mask(&self, i: usize) -> u32 {
        self.split_index(i).1
    }

    pub fn face_mask(&self, i: usize) -> u64 {
        self.complexes[self.split_index(i).0].faces
    }

    pub fn entry(&self, i: usize) -> Mdag {
        let (c, d) = self.split_index(i);
        let nodes = self.order.iter().map(|id| Node::new(id.clone(), NodeKind::Visible)).collect();
        let edges = mask_to_edges(&self.pairs, d);
        let complex = self.complexes[c].to_complex(self.order.clone());
        Mdag::from_parts(nodes, edges, complex).expect("visible-only catalog entry")
    }

    /// Index of `m` in the catalog, when it is over the same order.
    pub fn index_of(&self, m: &Mdag) -> Option<usize> {
        if m.ids() != self.order || m.has_inputs() {
            return None;
        }
        let d = self
            .pairs
            .iter()
            .enumerate()
            .filter(|(_, p)| m.edges().contains(p))
            .fold(0u32, |acc, (k, _)| acc | 1 << k);
        let facets: Vec<u32> = m
            .complex()
            .nontrivial_facets()
            .map(|f| f.iter().fold(0u32, |a, &i| a | 1 << i))
            .collect();
        let c = *self.complex_index.get(&face_mask(self.n(), &facets))?;
        Some(self.join_index(c, d))
    }

    /// Whether entry `g` structurally dominates entry `h`.
    pub fn dominates(&self, g: usize, h: usize) -> bool {
        self.directed_mask(h) & !self.directed_mask(g) == 0 && self.face_mask(h) & !self.face_mask(g) == 0
    }

    /// Complex indices covered by complex `c`: drop one maximal face of
    /// size at least two.
    pub fn complex_covers_below(&self, c: usize) -> Vec<usize> {
        let code = &self.complexes[c];
        code.facets
            .iter()
            .map(|&f| self.complex_index[&(code.faces & !(1u64 << (f - 1)))])
            .collect()
    }

    /// Row `g` of the dominance relation as a bitset over entries.
    fn dominance_row(&self, g: usize) -> Vec<u64> {
        let mut row = vec![0u64; self.len().div_ceil(64)];
        let (dg, fg) = (self.directed_mask(g), self.face_mask(g));
        for (c, code) in self.complexes.iter().enumerate() {
            if code.faces & !fg != 0 {
                continue;
            }
            for h in self.island(c) {
                if (h % self.directed_count()) as u32 & !dg == 0 {
                    row[h / 64] |= 1 << (h % 64);
                }
            }
        }
        row
    }

    /// The whole dominance relation, one bitset row per entry.
    pub fn dominance_matrix(&self) -> Vec<Vec<u64>> {
        parallel::install(|| (0..self.len()).into_par_iter().map(|g| self.dominance_row(g)).collect())
    }

    /// Number of ordered pairs `(g, h)` with `g` dominating `h`, checking
    /// every pair with the two mask tests.
    pub fn count_dominating_pairs(&self) -> u64 {
        let n = self.len();
        parallel::install(|| {
            (0..n)
                .into_par_iter()
                .map(|g| (0..n).filter(|&h| self.dominates(g, h)).count() as u64)
                .sum()
        })
    }
}

/// Whether `h` is obtained from `g` by dropping edges and faces.
pub fn structurally_dominates(g: &Mdag, h: &Mdag) -> Result<bool> {
    if g.nodes() != h.nodes() {
        return Err(Error::NodeMismatch);
    }
    Ok(h.edges().is_subset(g.edges()) && h.complex().is_subcomplex_of(g.complex()))
}
