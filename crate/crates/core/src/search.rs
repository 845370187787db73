//! Exhaustive Turán and spectral Turán search over all k-graphs on `n`
//! labelled vertices, with witnesses reported up to isomorphism.

use std::collections::BTreeMap;

use itertools::Itertools;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::containment::{contains_sub_through, is_family_free};
use crate::error::{invalid, Error, Result};
use crate::hypergraph::{binomial, Hypergraph};
use crate::spectral::{spectral_radius, SolverOptions};

/// Default refusal threshold on the number of possible edges `C(n, k)`.
pub const DEFAULT_EDGE_CAP: u64 = 64;

/// Largest `n` for which [`canonical_form`] is exact.
pub const EXACT_CANON_MAX_N: usize = 10;

/// Decision depth at which the search tree is split into parallel subtrees.
const SPLIT_DEPTH: usize = 4;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchOptions {
    /// Run even when `C(n, k)` exceeds `edge_cap`.
    pub override_cap: bool,
    pub edge_cap: u64,
    /// Spectral search only: prune with solver estimates of the remaining
    /// superset. The estimates are lower bounds, so pruning may cut the
    /// true optimum; results are then marked incomplete.
    pub unsafe_prune: bool,
    pub solver: SolverOptions,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions { override_cap: false, edge_cap: DEFAULT_EDGE_CAP, unsafe_prune: false, solver: SolverOptions::default() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Optimum {
    Edges(u64),
    Lambda(f64),
}

impl Optimum {
    pub fn value(&self) -> f64 {
        match *self {
            Optimum::Edges(e) => e as f64,
            Optimum::Lambda(l) => l,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchResult {
    pub optimum: Optimum,
    /// Optimal graphs, one per isomorphism class, ordered by canonical form.
    pub witnesses: Vec<Hypergraph>,
    pub nodes_explored: u64,
    /// True iff every labelled k-graph on `n` vertices was accounted for.
    pub complete: bool,
    /// F-free graphs whose spectral solve did not converge.
    #[serde(default)]
    pub solver_failures: usize,
}

/// Isomorphism-invariant byte encoding of a hypergraph.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct CanonicalForm {
    pub bytes: Vec<u8>,
    /// False when `n` exceeds [`EXACT_CANON_MAX_N`]: the bytes then only
    /// encode vertex invariants and may collide for non-isomorphic graphs.
    pub exact: bool,
}

/// Vertex invariant: degree, then the sorted multiset of co-degrees with
/// every other vertex.
fn vertex_invariants(h: &Hypergraph) -> Vec<(usize, Vec<usize>)> {
    let n = h.n();
    let mut codeg = vec![vec![0usize; n]; n];
    for e in h.edges() {
        for (&a, &b) in e.iter().tuple_combinations() {
            codeg[a][b] += 1;
            codeg[b][a] += 1;
        }
    }
    let deg = h.degrees();
    (0..n)
        .map(|v| {
            let mut c = codeg[v].clone();
            c.remove(v);
            c.sort_unstable_by(|a, b| b.cmp(a));
            (deg[v], c)
        })
        .collect()
}

/// Minimal relabelled edge list over all permutations that assign labels in
/// increasing order of vertex invariant (exact for `n <= 10`).
pub fn canonical_form(h: &Hypergraph) -> CanonicalForm {
    let n = h.n();
    let inv = vertex_invariants(h);
    let mut header = Vec::new();
    header.extend_from_slice(&(n as u32).to_le_bytes());
    header.push(h.k() as u8);
    header.extend_from_slice(&(h.num_edges() as u32).to_le_bytes());

    if n > EXACT_CANON_MAX_N {
        let mut sorted = inv;
        sorted.sort();
        let mut bytes = header;
        bytes.push(0xFF);
        for (d, c) in sorted {
            bytes.extend_from_slice(&(d as u32).to_le_bytes());
            for x in c {
                bytes.extend_from_slice(&(x as u32).to_le_bytes());
            }
        }
        return CanonicalForm { bytes, exact: false };
    }

    // Vertices sorted by invariant; label block i goes to invariant class i.
    let mut by_inv: Vec<usize> = (0..n).collect();
    by_inv.sort_by(|&a, &b| inv[b].cmp(&inv[a]));
    let classes: Vec<Vec<usize>> = by_inv
        .iter()
        .copied()
        .chunk_by(|&v| inv[v].clone())
        .into_iter()
        .map(|(_, g)| g.collect())
        .collect();

    let mut best: Option<Vec<Vec<u8>>> = None;
    let mut label = vec![0u8; n];
    let mut scratch: Vec<Vec<u8>> = Vec::with_capacity(h.num_edges());
    let class_perms: Vec<Vec<Vec<usize>>> =
        classes.iter().map(|c| c.iter().copied().permutations(c.len()).collect()).collect();
    for choice in class_perms.iter().map(|ps| ps.iter()).multi_cartesian_product() {
        let mut next = 0u8;
        for perm in &choice {
            for &v in perm.iter() {
                label[v] = next;
                next += 1;
            }
        }
        scratch.clear();
        scratch.extend(h.edges().iter().map(|e| {
            let mut r: Vec<u8> = e.iter().map(|&v| label[v]).collect();
            r.sort_unstable();
            r
        }));
        scratch.sort_unstable();
        if best.as_ref().is_none_or(|b| scratch < *b) {
            best = Some(scratch.clone());
        }
    }
    // multi_cartesian_product yields nothing for zero classes (n = 0)
    let edges = best.unwrap_or_default();
    let mut bytes = header;
    bytes.extend(edges.into_iter().flatten());
    CanonicalForm { bytes, exact: true }
}

fn check_space(n: usize, k: usize, family: &[Hypergraph], opts: &SearchOptions) -> Result<Vec<Vec<usize>>> {
    if k < 2 {
        return invalid(format!("uniformity must be at least 2, got {k}"));
    }
    if let Some(f) = family.iter().find(|f| f.k() != k) {
        return invalid(format!("family member is {}-uniform, expected {k}", f.k()));
    }
    if let Some(f) = family.iter().find(|f| f.num_edges() == 0 && f.n() <= n) {
        return invalid(format!("family member on {} vertices has no edges, so every host contains it", f.n()));
    }
    let possible = binomial(n as u64, k as u64) as u64;
    if possible > opts.edge_cap && !opts.override_cap {
        return Err(Error::SearchCapExceeded { possible_edges: possible, cap: opts.edge_cap });
    }
    Ok((0..n).combinations(k).collect())
}

/// Shared DFS over include/exclude decisions on the lexicographic edge list.
/// Freeness is maintained by checking only copies through the newly added edge.
struct Space<'a> {
    n: usize,
    k: usize,
    all: Vec<Vec<usize>>,
    family: &'a [Hypergraph],
}

impl Space<'_> {
    fn graph(&self, chosen: &[usize]) -> Hypergraph {
        Hypergraph::from_sorted_unchecked(self.n, self.k, chosen.iter().map(|&i| self.all[i].clone()).collect())
    }

    /// Whether adding edge `idx` to `chosen` keeps the graph F-free.
    fn can_add(&self, chosen: &[usize], idx: usize) -> bool {
        let mut with = chosen.to_vec();
        with.push(idx);
        let g = self.graph(&with);
        self.family
            .iter()
            .all(|f| contains_sub_through(&g, f, &self.all[idx]).expect("anchor is an edge").is_none())
    }

    /// F-free prefixes after deciding the first `depth` edges, in DFS order.
    fn prefixes(&self, depth: usize, nodes: &mut u64) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new()];
        for idx in 0..depth {
            let mut next = Vec::new();
            for p in out {
                *nodes += 1;
                if self.can_add(&p, idx) {
                    let mut q = p.clone();
                    q.push(idx);
                    next.push(q);
                }
                next.push(p);
            }
            out = next;
        }
        out
    }
}

struct EdgeSearch<'a> {
    space: &'a Space<'a>,
    best: usize,
    leaves: Vec<Vec<usize>>,
    nodes: u64,
}

impl EdgeSearch<'_> {
    fn dfs(&mut self, chosen: &mut Vec<usize>, idx: usize) {
        self.nodes += 1;
        let remaining = self.space.all.len() - idx;
        // keep ties so that every extremal graph is seen
        if chosen.len() + remaining < self.best {
            return;
        }
        if idx == self.space.all.len() {
            if chosen.len() > self.best {
                self.best = chosen.len();
                self.leaves.clear();
            }
            self.leaves.push(chosen.clone());
            return;
        }
        if self.space.can_add(chosen, idx) {
            chosen.push(idx);
            self.dfs(chosen, idx + 1);
            chosen.pop();
        }
        self.dfs(chosen, idx + 1);
    }
}

fn dedup_witnesses(graphs: impl IntoIterator<Item = Hypergraph>) -> Vec<Hypergraph> {
    let mut by_form: BTreeMap<CanonicalForm, Hypergraph> = BTreeMap::new();
    for g in graphs {
        let mut form = canonical_form(&g);
        if !form.exact {
            // invariant bytes may collide; keep labelled graphs apart
            form.bytes.extend(g.edges().iter().flatten().map(|&v| v as u8));
        }
        by_form.entry(form).or_insert(g);
    }
    by_form.into_values().collect()
}

/// Exact `ex(n, family)` with all extremal graphs up to isomorphism.
pub fn ex_search(n: usize, k: usize, family: &[Hypergraph], opts: &SearchOptions) -> Result<SearchResult> {
    let all = check_space(n, k, family, opts)?;
    let m = all.len();
    let space = Space { n, k, all, family };
    let mut nodes = 0;
    let prefixes = space.prefixes(SPLIT_DEPTH.min(m), &mut nodes);
    let depth = SPLIT_DEPTH.min(m);

    let parts: Vec<(usize, Vec<Vec<usize>>, u64)> = prefixes
        .into_par_iter()
        .map(|p| {
            let mut s = EdgeSearch { space: &space, best: 0, leaves: Vec::new(), nodes: 0 };
            let mut chosen = p;
            s.dfs(&mut chosen, depth);
            (s.best, s.leaves, s.nodes)
        })
        .collect();

    let best = parts.iter().map(|p| p.0).max().unwrap_or(0);
    nodes += parts.iter().map(|p| p.2).sum::<u64>();
    let leaves = parts.into_iter().filter(|p| p.0 == best).flat_map(|p| p.1);
    let witnesses = dedup_witnesses(leaves.map(|c| space.graph(&c)));
    for w in &witnesses {
        debug_assert_eq!(w.num_edges(), best);
        if !is_family_free(w, family)? {
            return invalid("internal error: witness contains a forbidden graph");
        }
    }
    Ok(SearchResult { optimum: Optimum::Edges(best as u64), witnesses, nodes_explored: nodes, complete: true, solver_failures: 0 })
}

struct SpectralSearch<'a> {
    space: &'a Space<'a>,
    alpha: f64,
    opts: &'a SearchOptions,
    cache: BTreeMap<CanonicalForm, (f64, bool, Hypergraph)>,
    best: f64,
    pruned: bool,
    nodes: u64,
}

impl SpectralSearch<'_> {
    fn lambda(&self, g: &Hypergraph) -> Result<(f64, bool)> {
        if g.num_edges() == 0 {
            return Ok((0.0, true));
        }
        let r = spectral_radius(g, self.alpha, &self.opts.solver)?;
        Ok((r.lambda, r.converged))
    }

    fn dfs(&mut self, chosen: &mut Vec<usize>, idx: usize) -> Result<()> {
        self.nodes += 1;
        let m = self.space.all.len();
        if idx == m {
            let g = self.space.graph(chosen);
            let mut form = canonical_form(&g);
            if !form.exact {
                form.bytes.extend(g.edges().iter().flatten().map(|&v| v as u8));
            }
            if !self.cache.contains_key(&form) {
                let (l, ok) = self.lambda(&g)?;
                self.best = self.best.max(l);
                self.cache.insert(form, (l, ok, g));
            }
            return Ok(());
        }
        if self.opts.unsafe_prune && idx > 0 {
            let mut sup = chosen.clone();
            sup.extend(idx..m);
            let (est, _) = self.lambda(&self.space.graph(&sup))?;
            if est < self.best * (1.0 - 1e-9) {
                self.pruned = true;
                return Ok(());
            }
        }
        if self.space.can_add(chosen, idx) {
            chosen.push(idx);
            self.dfs(chosen, idx + 1)?;
            chosen.pop();
        }
        self.dfs(chosen, idx + 1)
    }
}

/// Maximum α-spectral radius over all F-free k-graphs on `n` vertices.
///
/// Every F-free graph is enumerated; one representative per isomorphism
/// class is solved. Witnesses are the classes within `1e-9` (relative) of
/// the optimum.
pub fn spex_search(n: usize, k: usize, family: &[Hypergraph], alpha: f64, opts: &SearchOptions) -> Result<SearchResult> {
    if !(alpha > 1.0) {
        return invalid(format!("alpha must be greater than 1, got {alpha}"));
    }
    let all = check_space(n, k, family, opts)?;
    if n == 0 {
        return invalid("spectral search needs at least one vertex");
    }
    let space = Space { n, k, all, family };
    let mut s = SpectralSearch { space: &space, alpha, opts, cache: BTreeMap::new(), best: 0.0, pruned: false, nodes: 0 };
    s.dfs(&mut Vec::new(), 0)?;

    let best = s.cache.values().map(|v| v.0).fold(0.0, f64::max);
    let tol = 1e-9 * best.max(1.0);
    let solver_failures = s.cache.values().filter(|v| !v.1).count();
    let witnesses: Vec<Hypergraph> =
        s.cache.into_values().filter(|v| v.0 >= best - tol).map(|v| v.2).collect();
    Ok(SearchResult {
        optimum: Optimum::Lambda(best),
        witnesses,
        nodes_explored: s.nodes,
        complete: !s.pruned,
        solver_failures,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DensityPoint {
    pub n: usize,
    pub ex: u64,
    /// `ex / C(n, k)`.
    pub density: f64,
}

/// `ex(n, family) / C(n, k)` for each `n` in `ns`.
pub fn density_trend(
    family: &[Hypergraph],
    k: usize,
    ns: std::ops::RangeInclusive<usize>,
    opts: &SearchOptions,
) -> Result<Vec<DensityPoint>> {
    // refuse before spending time on the smaller n
    let possible = binomial(*ns.end() as u64, k as u64) as u64;
    if !ns.is_empty() && possible > opts.edge_cap && !opts.override_cap {
        return Err(Error::SearchCapExceeded { possible_edges: possible, cap: opts.edge_cap });
    }
    ns.map(|n| {
        let r = ex_search(n, k, family, opts)?;
        let ex = r.optimum.value() as u64;
        let total = binomial(n as u64, k as u64);
        let density = if total == 0 { 0.0 } else { ex as f64 / total as f64 };
        Ok(DensityPoint { n, ex, density })
    })
    .collect()
}

/// CSV with header `n,ex,density`.
pub fn density_csv(points: &[DensityPoint]) -> String {
    let mut s = String::from("n,ex,density\n");
    for p in points {
        s.push_str(&format!("{},{},{:.12}\n", p.n, p.ex, p.density));
    }
    s
}
