//! Named constructions: balanced complete multipartite graphs, complete
//! bipartite-like graphs, expansions, extensions, fans, triangles, books,
//! matchings and hyperstars.

use itertools::Itertools;

use super::Hypergraph;
use crate::error::{invalid, Result};

/// Binomial coefficient, exact in `u128`.
pub fn binomial(n: u64, r: u64) -> u128 {
    if r > n {
        return 0;
    }
    let r = r.min(n - r);
    let mut acc: u128 = 1;
    for i in 0..r {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc
}

/// Falling factorial `l (l-1) ... (l-k+1)`.
pub fn falling_factorial(l: u64, k: u64) -> u128 {
    (0..k).map(|i| l.saturating_sub(i) as u128).product()
}

pub fn factorial(k: usize) -> f64 {
    (1..=k).map(|i| i as f64).product()
}

/// Part sizes `n_i = floor((n + i - 1) / l)` for `i = 1..=l`; ascending.
pub fn turan_part_sizes(n: usize, l: usize) -> Vec<usize> {
    (1..=l).map(|i| (n + i - 1) / l).collect()
}

fn check_parts(l: usize, k: usize) -> Result<()> {
    if k < 2 {
        return invalid(format!("uniformity must be at least 2, got {k}"));
    }
    if l < k {
        return invalid(format!("need at least k = {k} parts, got l = {l}"));
    }
    Ok(())
}

/// Complete k-graph on `n` vertices.
pub fn complete(n: usize, k: usize) -> Result<Hypergraph> {
    if k < 2 {
        return invalid(format!("uniformity must be at least 2, got {k}"));
    }
    let edges = (0..n).combinations(k).collect();
    Ok(Hypergraph::from_sorted_unchecked(n, k, edges))
}

/// Complete multipartite k-graph with the given part sizes; part `i`
/// occupies the next block of labels.
pub fn complete_multipartite(sizes: &[usize], k: usize) -> Result<Hypergraph> {
    check_parts(sizes.len(), k)?;
    let mut part_of = Vec::new();
    for (p, &s) in sizes.iter().enumerate() {
        part_of.extend(std::iter::repeat_n(p, s));
    }
    let n = part_of.len();
    let edges = (0..n)
        .combinations(k)
        .filter(|e| e.iter().map(|&v| part_of[v]).all_unique())
        .collect();
    Ok(Hypergraph::from_sorted_unchecked(n, k, edges))
}

/// The balanced complete l-partite k-graph on `n` vertices.
pub fn turan_graph(n: usize, l: usize, k: usize) -> Result<Hypergraph> {
    check_parts(l, k)?;
    complete_multipartite(&turan_part_sizes(n, l), k)
}

/// Edge count of the balanced complete l-partite k-graph: the sum over
/// k-sets of parts of the product of part sizes.
pub fn turan_edge_count(n: usize, l: usize, k: usize) -> Result<u128> {
    check_parts(l, k)?;
    let sizes = turan_part_sizes(n, l);
    // e_k(sizes) by the elementary symmetric polynomial recurrence.
    let mut esym = vec![0u128; k + 1];
    esym[0] = 1;
    for &s in &sizes {
        for j in (1..=k).rev() {
            esym[j] += esym[j - 1] * s as u128;
        }
    }
    Ok(esym[k])
}

/// Leading term `(l)_k / (k! l^k) * n^k` of the edge count.
pub fn turan_leading_term(n: usize, l: usize, k: usize) -> Result<f64> {
    check_parts(l, k)?;
    let ff = falling_factorial(l as u64, k as u64) as f64;
    Ok(ff / (factorial(k) * (l as f64).powi(k as i32)) * (n as f64).powi(k as i32))
}

/// Complete balanced bipartite-like `2h`-graph: parts `0..n/2` and
/// `n/2..n`, every edge takes `h` vertices from each part.
pub fn bipartite_like_complete(n: usize, h: usize) -> Result<Hypergraph> {
    if h < 1 {
        return invalid("half-uniformity must be at least 1");
    }
    let a = n / 2;
    let mut edges: Vec<Vec<usize>> = Vec::new();
    for left in (0..a).combinations(h) {
        for right in (a..n).combinations(h) {
            edges.push(left.iter().chain(&right).copied().collect());
        }
    }
    edges.sort_unstable();
    Ok(Hypergraph::from_sorted_unchecked(n, 2 * h, edges))
}

/// Whether `h` is bipartite-like with respect to the split `side`
/// (`side[v]` is true for vertices of the second part).
pub fn is_bipartite_like_with(h: &Hypergraph, side: &[bool]) -> bool {
    h.k().is_multiple_of(2)
        && h.edges()
            .iter()
            .all(|e| e.iter().filter(|&&v| side[v]).count() * 2 == h.k())
}

/// Expansion of a 2-graph: each edge `{u, v}` receives `k - 2` fresh vertices.
/// Fresh vertices are numbered from `n(g)` in edge order.
pub fn expansion(g: &Hypergraph, k: usize) -> Result<Hypergraph> {
    if g.k() != 2 {
        return invalid(format!("expansion needs a 2-graph, got a {}-graph", g.k()));
    }
    if k < 3 {
        return invalid(format!("expansion target uniformity must be at least 3, got {k}"));
    }
    let mut next = g.n();
    let mut edges = Vec::with_capacity(g.num_edges());
    for e in g.edges() {
        let mut ne = e.clone();
        ne.extend(next..next + k - 2);
        next += k - 2;
        edges.push(ne);
    }
    Hypergraph::new(next, k, edges)
}

/// Extension of a k-graph: every vertex pair not covered by an edge of `f`
/// gets a new edge padded with `k - 2` fresh vertices.
pub fn extension(f: &Hypergraph) -> Result<Hypergraph> {
    let k = f.k();
    if k < 3 {
        return invalid(format!("extension needs k >= 3, got {k}"));
    }
    let n = f.n();
    let mut covered = vec![false; n * n];
    for e in f.edges() {
        for (a, b) in e.iter().tuple_combinations() {
            covered[a * n + b] = true;
        }
    }
    let mut next = n;
    let mut edges = f.edges().to_vec();
    for (a, b) in (0..n).tuple_combinations() {
        if !covered[a * n + b] {
            let mut ne = vec![a, b];
            ne.extend(next..next + k - 2);
            next += k - 2;
            edges.push(ne);
        }
    }
    Hypergraph::new(next, k, edges)
}

/// Generalized fan: the extension of the single-edge k-graph on `k + 1` vertices.
pub fn generalized_fan(k: usize) -> Result<Hypergraph> {
    if k < 3 {
        return invalid(format!("generalized fan needs k >= 3, got {k}"));
    }
    extension(&Hypergraph::new(k + 1, k, [(0..k).collect::<Vec<_>>()])?)
}

/// Generalized triangle on `2k - 1` vertices with edges `{0..k-1}`,
/// `{0..k-2, k}` and `{k-1, .., 2k-2}`.
pub fn generalized_triangle(k: usize) -> Result<Hypergraph> {
    if k < 2 {
        return invalid(format!("uniformity must be at least 2, got {k}"));
    }
    let a: Vec<usize> = (0..k).collect();
    let mut b: Vec<usize> = (0..k - 1).collect();
    b.push(k);
    let c: Vec<usize> = (k - 1..2 * k - 1).collect();
    Hypergraph::new(2 * k - 1, k, [a, b, c])
}

/// The 3-graph with edges `{0,1,2}, {0,1,3}, {0,2,3}` (three edges on four vertices).
pub fn f4() -> Hypergraph {
    Hypergraph::from_sorted_unchecked(4, 3, vec![vec![0, 1, 2], vec![0, 1, 3], vec![0, 2, 3]])
}

/// The 4-book with three pages: three edges sharing `{0,1,2}` plus the
/// edge through their three private vertices and one more vertex.
pub fn book_f7() -> Hypergraph {
    Hypergraph::from_sorted_unchecked(
        7,
        4,
        vec![vec![0, 1, 2, 3], vec![0, 1, 2, 4], vec![0, 1, 2, 5], vec![3, 4, 5, 6]],
    )
}

/// `t` pairwise disjoint k-edges on `k t` vertices.
pub fn matching(k: usize, t: usize) -> Result<Hypergraph> {
    if k < 2 {
        return invalid(format!("uniformity must be at least 2, got {k}"));
    }
    Hypergraph::new(k * t, k, (0..t).map(|i| (i * k..(i + 1) * k).collect::<Vec<_>>()))
}

/// Star 2-graph with centre 0 and leaves `1..=t`.
pub fn star(t: usize) -> Hypergraph {
    Hypergraph::from_sorted_unchecked(t + 1, 2, (1..=t).map(|v| vec![0, v]).collect())
}

/// k-expansion of the star with `t` edges; vertex 0 is the centre.
pub fn hyperstar(k: usize, t: usize) -> Result<Hypergraph> {
    expansion(&star(t), k)
}
