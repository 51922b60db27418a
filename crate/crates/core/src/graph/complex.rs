use std::collections::{BTreeMap, BTreeSet};

use super::node::NodeId;
use crate::error::{Error, Result};

/// Downward-closed family of nonempty subsets of a ground set, stored by its
/// inclusion-maximal members. Members of a facet are indices into `ground`,
/// sorted ascending; facets are sorted lexicographically.
///
/// The empty set is never counted as a face.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SimplicialComplex {
    ground: Vec<NodeId>,
    facets: Vec<Vec<usize>>,
}

impl SimplicialComplex {
    /// Complex whose only faces are the singletons.
    pub fn trivial(ground: Vec<NodeId>) -> Self {
        let facets = (0..ground.len()).map(|i| vec![i]).collect();
        SimplicialComplex { ground, facets }
    }

    /// Downward closure of `sets` over `ground`, keeping only maximal sets
    /// and completing uncovered ground elements with singleton facets.
    pub(crate) fn from_index_sets(ground: Vec<NodeId>, sets: impl IntoIterator<Item = Vec<usize>>) -> Self {
        let mut candidates: BTreeSet<Vec<usize>> = sets
            .into_iter()
            .map(|mut s| {
                s.sort_unstable();
                s.dedup();
                s
            })
            .filter(|s| !s.is_empty())
            .collect();
        let covered: BTreeSet<usize> = candidates.iter().flatten().copied().collect();
        for i in 0..ground.len() {
            if !covered.contains(&i) {
                candidates.insert(vec![i]);
            }
        }
        let all: Vec<Vec<usize>> = candidates.into_iter().collect();
        let facets = all
            .iter()
            .filter(|s| !all.iter().any(|t| t.len() > s.len() && is_subset(s, t)))
            .cloned()
            .collect();
        SimplicialComplex { ground, facets }
    }

    pub fn ground(&self) -> &[NodeId] {
        &self.ground
    }

    pub fn facets(&self) -> &[Vec<usize>] {
        &self.facets
    }

    /// Facets with at least two members.
    pub fn nontrivial_facets(&self) -> impl Iterator<Item = &Vec<usize>> {
        self.facets.iter().filter(|f| f.len() >= 2)
    }

    pub fn facet_ids(&self) -> Vec<Vec<NodeId>> {
        self.facets
            .iter()
            .map(|f| f.iter().map(|&i| self.ground[i].clone()).collect())
            .collect()
    }

    /// Whether `set` (sorted or not) is a face. The empty set is not.
    pub fn contains(&self, set: &[usize]) -> bool {
        if set.is_empty() {
            return false;
        }
        let mut s = set.to_vec();
        s.sort_unstable();
        s.dedup();
        self.facets.iter().any(|f| is_subset(&s, f))
    }

    /// Every face, enumerated from the facets.
    pub fn faces(&self) -> BTreeSet<Vec<usize>> {
        let mut out = BTreeSet::new();
        for f in &self.facets {
            let k = f.len();
            for mask in 1u64..(1u64 << k) {
                out.insert((0..k).filter(|b| mask >> b & 1 == 1).map(|b| f[b]).collect());
            }
        }
        out
    }

    /// Face inclusion: every face of `self` is a face of `other`.
    pub fn is_subcomplex_of(&self, other: &SimplicialComplex) -> bool {
        self.ground == other.ground && self.facets.iter().all(|f| other.contains(f))
    }

    pub fn is_trivial(&self) -> bool {
        self.facets.iter().all(|f| f.len() == 1)
    }
}

/// Build a complex over `ground` from named facets.
pub fn closure(facets: &[Vec<NodeId>], ground: &[NodeId]) -> Result<SimplicialComplex> {
    let index: BTreeMap<&NodeId, usize> = ground.iter().enumerate().map(|(i, g)| (g, i)).collect();
    let sets = facets
        .iter()
        .map(|f| {
            f.iter()
                .map(|id| index.get(id).copied().ok_or_else(|| Error::FacetOutsideGround(id.to_string())))
                .collect::<Result<Vec<usize>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SimplicialComplex::from_index_sets(ground.to_vec(), sets))
}

/// Both slices sorted ascending.
pub(crate) fn is_subset(small: &[usize], big: &[usize]) -> bool {
    let mut it = big.iter();
    small.iter().all(|x| it.by_ref().any(|y| y == x))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ids(v: &[&str]) -> Vec<NodeId> {
        v.iter().map(|s| NodeId::new(*s).unwrap()).collect()
    }

    #[test]
    fn full_triangle_has_seven_faces() {
        let c = closure(&[ids(&["0", "1", "2"])], &ids(&["0", "1", "2"])).unwrap();
        assert_eq!(c.faces().len(), 7);
        assert_eq!(c.facets(), &[vec![0, 1, 2]]);
    }

    #[test]
    fn hollow_triangle_has_six_faces() {
        let c = closure(
            &[ids(&["0", "1"]), ids(&["0", "2"]), ids(&["1", "2"])],
            &ids(&["0", "1", "2"]),
        )
        .unwrap();
        let faces = c.faces();
        assert_eq!(faces.len(), 6);
        assert!(!faces.contains(&vec![0, 1, 2]));
    }

    #[test]
    fn empty_facets_complete_to_singletons() {
        let c = closure(&[], &ids(&["a", "b"])).unwrap();
        assert_eq!(c.facet_ids(), vec![ids(&["a"]), ids(&["b"])]);
        assert_eq!(c.faces().len(), 2);
        assert!(c.is_trivial());
    }

    #[test]
    fn outside_ground_is_an_error() {
        let err = closure(&[ids(&["a", "z"])], &ids(&["a", "b"])).unwrap_err();
        assert_eq!(err, Error::FacetOutsideGround("z".into()));
    }

    #[test]
    fn non_maximal_sets_are_dropped() {
        let c = closure(&[ids(&["a", "b"]), ids(&["a", "b", "c"]), ids(&["b"])], &ids(&["a", "b", "c", "d"])).unwrap();
        assert_eq!(c.facets(), &[vec![0, 1, 2], vec![3]]);
        assert!(c.contains(&[2, 0]));
        assert!(!c.contains(&[]));
        assert!(!c.contains(&[0, 3]));
    }

    #[test]
    fn subset_helper() {
        assert!(is_subset(&[1, 3], &[0, 1, 2, 3]));
        assert!(!is_subset(&[1, 4], &[0, 1, 2, 3]));
        assert!(is_subset(&[], &[0]));
    }
}
