//! k-uniform hypergraphs with canonical edge storage.

mod build;
mod io;
mod pattern;

pub use build::*;
pub use pattern::{find_pattern_coloring, Coloring, Pattern};

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};

/// A k-uniform hypergraph on the vertex set `0..n`.
///
/// Every edge is stored as a strictly increasing vector of `k` vertices and
/// the edge list is kept in lexicographic order without duplicates, so two
/// hypergraphs with the same labelled edge set compare equal.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawHypergraph")]
pub struct Hypergraph {
    n: usize,
    k: usize,
    edges: Vec<Vec<usize>>,
}

#[derive(Deserialize)]
struct RawHypergraph {
    n: usize,
    k: usize,
    edges: Vec<Vec<usize>>,
}

impl TryFrom<RawHypergraph> for Hypergraph {
    type Error = Error;

    fn try_from(raw: RawHypergraph) -> Result<Self> {
        Hypergraph::new(raw.n, raw.k, raw.edges)
    }
}

impl Hypergraph {
    /// Builds a hypergraph, sorting each edge and collapsing duplicates.
    pub fn new<I, E>(n: usize, k: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = E>,
        E: AsRef<[usize]>,
    {
        if k < 2 {
            return invalid(format!("uniformity must be at least 2, got {k}"));
        }
        let mut out = Vec::new();
        for e in edges {
            let e = e.as_ref();
            if e.len() != k {
                return invalid(format!("edge {e:?} has {} vertices, expected {k}", e.len()));
            }
            let mut e = e.to_vec();
            e.sort_unstable();
            if e.windows(2).any(|w| w[0] == w[1]) {
                return invalid(format!("edge {e:?} repeats a vertex"));
            }
            if let Some(&v) = e.last() {
                if v >= n {
                    return invalid(format!("vertex {v} out of range for n = {n}"));
                }
            }
            out.push(e);
        }
        out.sort_unstable();
        out.dedup();
        Ok(Hypergraph { n, k, edges: out })
    }

    /// Internal constructor for edge lists already known to be canonical.
    pub(crate) fn from_sorted_unchecked(n: usize, k: usize, edges: Vec<Vec<usize>>) -> Self {
        debug_assert!(edges.windows(2).all(|w| w[0] < w[1]));
        debug_assert!(edges
            .iter()
            .all(|e| e.len() == k && e.windows(2).all(|w| w[0] < w[1]) && e[k - 1] < n));
        Hypergraph { n, k, edges }
    }

    pub fn empty(n: usize, k: usize) -> Result<Self> {
        Hypergraph::new(n, k, Vec::<Vec<usize>>::new())
    }

    /// Number of vertices.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Uniformity.
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn edges(&self) -> &[Vec<usize>] {
        &self.edges
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    /// Membership test; `e` may be given in any order.
    pub fn has_edge(&self, e: &[usize]) -> bool {
        if e.len() != self.k {
            return false;
        }
        let mut key = e.to_vec();
        key.sort_unstable();
        self.edges.binary_search(&key).is_ok()
    }

    pub fn degree(&self, v: usize) -> Result<usize> {
        if v >= self.n {
            return invalid(format!("vertex {v} out of range for n = {}", self.n));
        }
        Ok(self.edges.iter().filter(|e| e.contains(&v)).count())
    }

    /// Degree of every vertex.
    pub fn degrees(&self) -> Vec<usize> {
        let mut d = vec![0; self.n];
        for e in &self.edges {
            for &v in e {
                d[v] += 1;
            }
        }
        d
    }

    pub fn min_degree(&self) -> Result<usize> {
        self.degrees()
            .into_iter()
            .min()
            .ok_or_else(|| Error::InvalidInput("minimum degree of a hypergraph with no vertices".into()))
    }

    pub fn max_degree(&self) -> usize {
        self.degrees().into_iter().max().unwrap_or(0)
    }

    /// Edge indices incident to each vertex.
    pub fn incidence(&self) -> Vec<Vec<usize>> {
        let mut inc = vec![Vec::new(); self.n];
        for (i, e) in self.edges.iter().enumerate() {
            for &v in e {
                inc[v].push(i);
            }
        }
        inc
    }

    /// Deletes `v` and its edges. Returns the new hypergraph together with
    /// the map from new labels to original labels.
    pub fn remove_vertex(&self, v: usize) -> Result<(Hypergraph, Vec<usize>)> {
        if v >= self.n {
            return invalid(format!("vertex {v} out of range for n = {}", self.n));
        }
        let keep: Vec<usize> = (0..self.n).filter(|&u| u != v).collect();
        Ok((self.induced_unchecked(&keep), keep))
    }

    /// The induced subhypergraph on `s`, relabelled `0..|s|` in increasing
    /// order of the original labels.
    pub fn induced(&self, s: &[usize]) -> Result<Hypergraph> {
        let mut keep = s.to_vec();
        keep.sort_unstable();
        keep.dedup();
        if let Some(&v) = keep.last() {
            if v >= self.n {
                return invalid(format!("vertex {v} out of range for n = {}", self.n));
            }
        }
        Ok(self.induced_unchecked(&keep))
    }

    fn induced_unchecked(&self, keep: &[usize]) -> Hypergraph {
        let mut new_label = vec![usize::MAX; self.n];
        for (i, &v) in keep.iter().enumerate() {
            new_label[v] = i;
        }
        // Relabelling is monotone, so sortedness of edges and of the edge list survives.
        let edges = self
            .edges
            .iter()
            .filter(|e| e.iter().all(|&v| new_label[v] != usize::MAX))
            .map(|e| e.iter().map(|&v| new_label[v]).collect())
            .collect();
        Hypergraph::from_sorted_unchecked(keep.len(), self.k, edges)
    }

    /// Applies the vertex permutation `perm` (old label `v` becomes `perm[v]`).
    pub fn relabel(&self, perm: &[usize]) -> Result<Hypergraph> {
        if perm.len() != self.n {
            return invalid("permutation length differs from vertex count");
        }
        let mut seen = vec![false; self.n];
        for &p in perm {
            if p >= self.n || std::mem::replace(&mut seen[p], true) {
                return invalid("not a permutation");
            }
        }
        Hypergraph::new(
            self.n,
            self.k,
            self.edges.iter().map(|e| e.iter().map(|&v| perm[v]).collect::<Vec<_>>()),
        )
    }

    /// Same vertex set, edge `idx` removed.
    pub fn without_edge(&self, idx: usize) -> Hypergraph {
        let mut edges = self.edges.clone();
        edges.remove(idx);
        Hypergraph::from_sorted_unchecked(self.n, self.k, edges)
    }

    /// Same vertex set with one more edge (no-op if already present).
    pub fn with_edge(&self, e: &[usize]) -> Result<Hypergraph> {
        let mut edges = self.edges.clone();
        edges.push(e.to_vec());
        Hypergraph::new(self.n, self.k, edges)
    }

    /// Adds `extra` isolated vertices with labels `n..n+extra`.
    pub fn with_isolated(&self, extra: usize) -> Hypergraph {
        Hypergraph::from_sorted_unchecked(self.n + extra, self.k, self.edges.clone())
    }

    /// Connected components (vertices linked when they share an edge), each
    /// sorted, listed by smallest member. Isolated vertices form singletons.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut parent: Vec<usize> = (0..self.n).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        for e in &self.edges {
            for &v in &e[1..] {
                let (a, b) = (find(&mut parent, e[0]), find(&mut parent, v));
                if a != b {
                    parent[a.max(b)] = a.min(b);
                }
            }
        }
        let mut groups: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
        for v in 0..self.n {
            let r = find(&mut parent, v);
            groups.entry(r).or_default().push(v);
        }
        let mut comps: Vec<Vec<usize>> = groups.into_values().collect();
        comps.sort_by_key(|c| c[0]);
        comps
    }
}
