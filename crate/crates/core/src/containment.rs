//! Non-induced subhypergraph containment, family-freeness and the
//! cancellative property.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::hypergraph::Hypergraph;

/// Injective vertex map from a pattern hypergraph into a host.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Embedding {
    /// `map[v]` is the host vertex of pattern vertex `v`.
    pub map: Vec<usize>,
}

impl Embedding {
    /// Checks injectivity and that every edge of `f` lands on an edge of `h`.
    pub fn verify(&self, h: &Hypergraph, f: &Hypergraph) -> bool {
        if self.map.len() != f.n() || self.map.iter().any(|&v| v >= h.n()) {
            return false;
        }
        let mut seen = vec![false; h.n()];
        if self.map.iter().any(|&v| std::mem::replace(&mut seen[v], true)) {
            return false;
        }
        f.edges().iter().all(|e| h.has_edge(&e.iter().map(|&v| self.map[v]).collect::<Vec<_>>()))
    }
}

const UNMAPPED: usize = usize::MAX;

/// Backtracking matcher for one (host, pattern) pair.
struct Matcher<'a> {
    h: &'a Hypergraph,
    f: &'a Hypergraph,
    h_deg: Vec<usize>,
    f_deg: Vec<usize>,
    h_inc: Vec<Vec<usize>>,
    f_inc: Vec<Vec<usize>>,
    map: Vec<usize>,
    used: Vec<bool>,
    scratch: Vec<usize>,
}

impl<'a> Matcher<'a> {
    fn new(h: &'a Hypergraph, f: &'a Hypergraph) -> Self {
        Matcher {
            h,
            f,
            h_deg: h.degrees(),
            f_deg: f.degrees(),
            h_inc: h.incidence(),
            f_inc: f.incidence(),
            map: vec![UNMAPPED; f.n()],
            used: vec![false; h.n()],
            scratch: Vec::with_capacity(f.k()),
        }
    }

    /// Pattern vertices not yet fixed, ordered by decreasing degree; among
    /// equal degrees, vertices sharing more edges with earlier ones come first.
    fn order(&self) -> Vec<usize> {
        let mut placed: Vec<bool> = self.map.iter().map(|&m| m != UNMAPPED).collect();
        let mut order = Vec::new();
        let mut left: Vec<usize> = (0..self.f.n()).filter(|&v| !placed[v]).collect();
        while !left.is_empty() {
            let (idx, &v) = left
                .iter()
                .enumerate()
                .max_by_key(|&(_, &v)| {
                    let links: usize = self.f_inc[v]
                        .iter()
                        .map(|&ei| self.f.edges()[ei].iter().filter(|&&u| placed[u]).count())
                        .sum();
                    (self.f_deg[v], links, std::cmp::Reverse(v))
                })
                .unwrap();
            placed[v] = true;
            order.push(v);
            left.remove(idx);
        }
        order
    }

    /// Every pattern edge through `v` is consistent with the current partial map:
    /// fully mapped edges are host edges, partially mapped ones fit inside a host edge.
    fn consistent(&mut self, v: usize) -> bool {
        for &ei in &self.f_inc[v] {
            self.scratch.clear();
            for &u in &self.f.edges()[ei] {
                if self.map[u] != UNMAPPED {
                    self.scratch.push(self.map[u]);
                }
            }
            self.scratch.sort_unstable();
            let ok = if self.scratch.len() == self.f.k() {
                self.h.edges().binary_search(&self.scratch).is_ok()
            } else if self.scratch.len() >= 2 {
                let pivot = *self.scratch.iter().min_by_key(|&&w| self.h_inc[w].len()).unwrap();
                self.h_inc[pivot].iter().any(|&hi| is_subset(&self.scratch, &self.h.edges()[hi]))
            } else {
                true
            };
            if !ok {
                return false;
            }
        }
        true
    }

    fn extend(&mut self, order: &[usize], depth: usize) -> bool {
        let Some(&v) = order.get(depth) else {
            return true;
        };
        for w in 0..self.h.n() {
            if self.used[w] || self.h_deg[w] < self.f_deg[v] {
                continue;
            }
            self.map[v] = w;
            self.used[w] = true;
            if self.consistent(v) && self.extend(order, depth + 1) {
                return true;
            }
            self.used[w] = false;
        }
        self.map[v] = UNMAPPED;
        false
    }

    fn run(mut self) -> Option<Embedding> {
        if self.f.n() > self.h.n() || self.f.num_edges() > self.h.num_edges() {
            return None;
        }
        let order = self.order();
        self.extend(&order, 0).then_some(Embedding { map: self.map })
    }

    /// Searches only embeddings sending some pattern edge onto `anchor`.
    fn run_anchored(mut self, anchor: &[usize]) -> Option<Embedding> {
        if self.f.n() > self.h.n() {
            return None;
        }
        let k = self.f.k();
        for ei in 0..self.f.num_edges() {
            let fe = self.f.edges()[ei].clone();
            let mut perm: Vec<usize> = (0..k).collect();
            loop {
                let fits = fe.iter().zip(&perm).all(|(&v, &p)| self.h_deg[anchor[p]] >= self.f_deg[v]);
                if fits {
                    for (&v, &p) in fe.iter().zip(&perm) {
                        self.map[v] = anchor[p];
                        self.used[anchor[p]] = true;
                    }
                    let ok = fe.iter().all(|&v| self.consistent(v));
                    if ok {
                        let order = self.order();
                        if self.extend(&order, 0) {
                            return Some(Embedding { map: self.map });
                        }
                    }
                    for &v in &fe {
                        self.used[self.map[v]] = false;
                        self.map[v] = UNMAPPED;
                    }
                }
                if !next_permutation(&mut perm) {
                    break;
                }
            }
        }
        None
    }
}

fn is_subset(small: &[usize], big: &[usize]) -> bool {
    let mut it = big.iter();
    small.iter().all(|s| it.any(|b| b == s))
}

fn next_permutation(p: &mut [usize]) -> bool {
    let Some(i) = (1..p.len()).rev().find(|&i| p[i - 1] < p[i]) else {
        return false;
    };
    let j = (i..p.len()).rev().find(|&j| p[j] > p[i - 1]).unwrap();
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

fn check_uniformity(h: &Hypergraph, f: &Hypergraph) -> Result<()> {
    if h.k() != f.k() {
        return invalid(format!("host is {}-uniform but forbidden graph is {}-uniform", h.k(), f.k()));
    }
    Ok(())
}

/// Finds an injective map sending every edge of `f` to an edge of `h`
/// (extra host edges allowed). `None` is a proof of non-containment.
pub fn contains_sub(h: &Hypergraph, f: &Hypergraph) -> Result<Option<Embedding>> {
    check_uniformity(h, f)?;
    Ok(Matcher::new(h, f).run())
}

/// Like [`contains_sub`] but only looks for copies of `f` that use the host
/// edge `anchor`. Used to test freeness incrementally after adding `anchor`.
pub fn contains_sub_through(h: &Hypergraph, f: &Hypergraph, anchor: &[usize]) -> Result<Option<Embedding>> {
    check_uniformity(h, f)?;
    if !h.has_edge(anchor) {
        return invalid(format!("anchor {anchor:?} is not an edge of the host"));
    }
    let mut a = anchor.to_vec();
    a.sort_unstable();
    Ok(Matcher::new(h, f).run_anchored(&a))
}

/// True iff `h` contains no member of `family`.
pub fn is_family_free(h: &Hypergraph, family: &[Hypergraph]) -> Result<bool> {
    for f in family {
        if contains_sub(h, f)?.is_some() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// True iff no edges `A, B, C` with `B != C` satisfy `A ∪ B = A ∪ C`,
/// i.e. no edge contains the symmetric difference of two distinct edges.
pub fn is_cancellative(h: &Hypergraph) -> bool {
    let edges = h.edges();
    let inc = h.incidence();
    let mut diff: Vec<usize> = Vec::with_capacity(2 * h.k());
    for (i, b) in edges.iter().enumerate() {
        for c in &edges[i + 1..] {
            diff.clear();
            diff.extend(b.iter().filter(|v| !c.contains(v)));
            diff.extend(c.iter().filter(|v| !b.contains(v)));
            diff.sort_unstable();
            if diff.len() > h.k() {
                continue;
            }
            let pivot = *diff.iter().min_by_key(|&&w| inc[w].len()).unwrap();
            if inc[pivot].iter().any(|&ai| is_subset(&diff, &edges[ai])) {
                return false;
            }
        }
    }
    true
}
