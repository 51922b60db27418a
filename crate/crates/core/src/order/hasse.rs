use std::collections::BTreeSet;

use super::MdagCatalog;

/// Cover relation of structural dominance over a catalog.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HasseDiagram {
    pub elements: usize,
    /// `(lower, upper)` catalog indices.
    pub covers: BTreeSet<(usize, usize)>,
}

/// Covers from the product structure: a single dropped edge inside an
/// island, or a single dropped maximal face at a fixed directed structure.
pub fn hasse(cat: &MdagCatalog) -> HasseDiagram {
    let mut covers = BTreeSet::new();
    let pair_count = cat.pairs.len();
    for upper in 0..cat.len() {
        let (c, d) = cat.split_index(upper);
        for k in 0..pair_count {
            if d >> k & 1 == 1 {
                covers.insert((cat.join_index(c, d & !(1 << k)), upper));
            }
        }
        for lower_c in cat.complex_covers_below(c) {
            covers.insert((cat.join_index(lower_c, d), upper));
        }
    }
    HasseDiagram { elements: cat.len(), covers }
}

/// Reflexive-transitive closure of the covers, as `reach[upper][lower]`.
pub fn transitive_closure(h: &HasseDiagram) -> Vec<Vec<bool>> {
    let n = h.elements;
    let mut below: Vec<Vec<usize>> = vec![Vec::new(); n];
    for &(lo, up) in &h.covers {
        below[up].push(lo);
    }
    (0..n)
        .map(|top| {
            let mut seen = vec![false; n];
            let mut stack = vec![top];
            seen[top] = true;
            while let Some(x) = stack.pop() {
                for &y in &below[x] {
                    if !seen[y] {
                        seen[y] = true;
                        stack.push(y);
                    }
                }
            }
            seen
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::order::enumerate_mdags_n;

    /// Brute-force transitive reduction of the dominance order.
    fn brute_covers(cat: &MdagCatalog) -> BTreeSet<(usize, usize)> {
        let n = cat.len();
        let mut out = BTreeSet::new();
        for up in 0..n {
            for lo in 0..n {
                if up == lo || !cat.dominates(up, lo) {
                    continue;
                }
                let implied = (0..n).any(|m| m != up && m != lo && cat.dominates(up, m) && cat.dominates(m, lo));
                if !implied {
                    out.insert((lo, up));
                }
            }
        }
        out
    }

    #[test]
    fn two_node_diamond() {
        let cat = enumerate_mdags_n(2).unwrap();
        let h = hasse(&cat);
        assert_eq!(h.covers.len(), 4);
        assert_eq!(h.covers, brute_covers(&cat));
        let top = cat.len() - 1;
        assert!(h.covers.iter().filter(|c| c.1 == top).count() == 2);
    }

    #[test]
    fn three_node_covers_are_the_reduction() {
        let cat = enumerate_mdags_n(3).unwrap();
        let h = hasse(&cat);
        assert_eq!(h.covers, brute_covers(&cat));
        let reach = transitive_closure(&h);
        for (g, row) in reach.iter().enumerate() {
            for (l, &r) in row.iter().enumerate() {
                assert_eq!(r, cat.dominates(g, l));
            }
        }
    }

    #[test]
    fn singleton_catalog_has_no_covers() {
        let cat = enumerate_mdags_n(1).unwrap();
        assert_eq!(cat.len(), 1);
        assert!(hasse(&cat).covers.is_empty());
    }
}
