//! k-patterns and exhaustive colorability search.

use serde::{Deserialize, Serialize};

use super::Hypergraph;
use crate::error::{invalid, Result};

/// A k-pattern: `l` colors and a set of k-multisets of colors.
///
/// Multisets are stored sorted; the multiset list is sorted and deduplicated.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Pattern {
    l: usize,
    k: usize,
    edges: Vec<Vec<usize>>,
}

impl Pattern {
    pub fn new<I, E>(l: usize, k: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = E>,
        E: AsRef<[usize]>,
    {
        let mut out = Vec::new();
        for e in edges {
            let e = e.as_ref();
            if e.len() != k {
                return invalid(format!("pattern multiset {e:?} has {} entries, expected {k}", e.len()));
            }
            if let Some(&c) = e.iter().find(|&&c| c >= l) {
                return invalid(format!("color {c} out of range for l = {l}"));
            }
            let mut e = e.to_vec();
            e.sort_unstable();
            out.push(e);
        }
        out.sort_unstable();
        out.dedup();
        Ok(Pattern { l, k, edges: out })
    }

    /// The pattern whose multisets are all k-subsets of `l` colors.
    pub fn complete(l: usize, k: usize) -> Result<Self> {
        use itertools::Itertools;
        if l < k {
            return invalid(format!("need l >= k, got l = {l}, k = {k}"));
        }
        Pattern::new(l, k, (0..l).combinations(k))
    }

    /// Two colors, single multiset `{0^h, 1^h}`: colorability is bipartite-likeness.
    pub fn bipartite_like(h: usize) -> Self {
        let e: Vec<usize> = std::iter::repeat_n(0, h).chain(std::iter::repeat_n(1, h)).collect();
        Pattern { l: 2, k: 2 * h, edges: vec![e] }
    }

    pub fn l(&self) -> usize {
        self.l
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn edges(&self) -> &[Vec<usize>] {
        &self.edges
    }

    pub fn contains(&self, multiset: &[usize]) -> bool {
        let mut m = multiset.to_vec();
        m.sort_unstable();
        self.edges.binary_search(&m).is_ok()
    }

    fn admits_partial(&self, counts: &[usize]) -> bool {
        self.edges.iter().any(|e| {
            let mut have = vec![0usize; self.l];
            for &c in e {
                have[c] += 1;
            }
            counts.iter().zip(&have).all(|(need, got)| need <= got)
        })
    }
}

/// A color per vertex.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Coloring {
    pub colors: Vec<usize>,
}

impl Coloring {
    /// True when every edge of `h` maps onto a multiset of `p`.
    pub fn is_valid_for(&self, h: &Hypergraph, p: &Pattern) -> bool {
        self.colors.len() == h.n()
            && self.colors.iter().all(|&c| c < p.l())
            && h.edges()
                .iter()
                .all(|e| p.contains(&e.iter().map(|&v| self.colors[v]).collect::<Vec<_>>()))
    }
}

/// Searches for a homomorphism of `h` into `p`.
///
/// Vertices are colored in decreasing-degree order; after each assignment
/// every incident edge's partial color multiset must still extend to some
/// pattern multiset. The search is exhaustive, so `None` means `h` is not
/// `p`-colorable.
pub fn find_pattern_coloring(h: &Hypergraph, p: &Pattern) -> Result<Option<Coloring>> {
    if h.k() != p.k() {
        return invalid(format!("hypergraph is {}-uniform but pattern has arity {}", h.k(), p.k()));
    }
    let n = h.n();
    let deg = h.degrees();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&v| (std::cmp::Reverse(deg[v]), v));
    let inc = h.incidence();

    let mut colors = vec![usize::MAX; n];
    if p.l() == 0 {
        return Ok(if n == 0 { Some(Coloring { colors }) } else { None });
    }
    if search(0, &order, &inc, h, p, &mut colors) {
        Ok(Some(Coloring { colors }))
    } else {
        Ok(None)
    }
}

fn search(
    depth: usize,
    order: &[usize],
    inc: &[Vec<usize>],
    h: &Hypergraph,
    p: &Pattern,
    colors: &mut [usize],
) -> bool {
    let Some(&v) = order.get(depth) else {
        return true;
    };
    let mut counts = vec![0usize; p.l()];
    for c in 0..p.l() {
        colors[v] = c;
        let ok = inc[v].iter().all(|&ei| {
            counts.iter_mut().for_each(|x| *x = 0);
            for &u in &h.edges()[ei] {
                if colors[u] != usize::MAX {
                    counts[colors[u]] += 1;
                }
            }
            p.admits_partial(&counts)
        });
        if ok && search(depth + 1, order, inc, h, p, colors) {
            return true;
        }
    }
    colors[v] = usize::MAX;
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypergraph::{bipartite_like_complete, generalized_triangle, turan_graph};
    use itertools::Itertools;

    /// Plain enumeration of all `l^n` colorings.
    fn brute_force_colorable(h: &Hypergraph, p: &Pattern) -> bool {
        (0..h.n())
            .map(|_| 0..p.l())
            .multi_cartesian_product()
            .any(|colors| Coloring { colors }.is_valid_for(h, p))
            || (h.n() == 0)
    }

    #[test]
    fn multipartite_graphs_color_onto_complete_pattern() {
        let h = turan_graph(6, 3, 3).unwrap();
        let c = find_pattern_coloring(&h, &Pattern::complete(3, 3).unwrap()).unwrap().unwrap();
        assert!(c.is_valid_for(&h, &Pattern::complete(3, 3).unwrap()));
    }

    #[test]
    fn b4_is_bipartite_like() {
        let h = bipartite_like_complete(8, 2).unwrap();
        let p = Pattern::new(2, 4, [[0, 0, 1, 1]]).unwrap();
        assert_eq!(p, Pattern::bipartite_like(2));
        let c = find_pattern_coloring(&h, &p).unwrap().unwrap();
        assert!(c.is_valid_for(&h, &p));
    }

    #[test]
    fn triangle_is_not_three_partite() {
        let t3 = generalized_triangle(3).unwrap();
        let p = Pattern::complete(3, 3).unwrap();
        assert!(find_pattern_coloring(&t3, &p).unwrap().is_none());
        assert!(!brute_force_colorable(&t3, &p));
    }

    #[test]
    fn arity_mismatch() {
        let h = turan_graph(6, 3, 3).unwrap();
        assert!(find_pattern_coloring(&h, &Pattern::complete(4, 2).unwrap()).is_err());
        assert!(Pattern::new(2, 3, [[0, 1, 2]]).is_err());
        assert!(Pattern::new(2, 3, [[0, 1]]).is_err());
    }

    #[test]
    fn agrees_with_unpruned_enumeration() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let patterns = [
            Pattern::complete(3, 3).unwrap(),
            Pattern::new(2, 3, [[0, 0, 1]]).unwrap(),
            Pattern::new(2, 3, [[0, 0, 1], [0, 1, 1]]).unwrap(),
            Pattern::new(3, 3, [[0, 1, 2], [0, 0, 1]]).unwrap(),
        ];
        for _ in 0..150 {
            let n = rng.gen_range(3..=6);
            let edges: Vec<Vec<usize>> =
                (0..n).combinations(3).filter(|_| rng.gen_bool(0.35)).collect();
            let h = Hypergraph::new(n, 3, edges).unwrap();
            for p in &patterns {
                let found = find_pattern_coloring(&h, p).unwrap();
                if let Some(c) = &found {
                    assert!(c.is_valid_for(&h, p));
                }
                assert_eq!(found.is_some(), brute_force_colorable(&h, p), "{h:?} {p:?}");
            }
        }
    }
}
