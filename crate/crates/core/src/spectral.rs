//! Lagrangian polynomial, α-spectral radius and closed forms.
//!
//! For a k-graph `H` and `x ≥ 0` the Lagrangian polynomial is
//! `P_H(x) = k! Σ_{e ∈ E(H)} Π_{v ∈ e} x_v`, and `λ_α(H)` is its maximum over
//! the nonnegative unit sphere of the ℓ_α norm. A maximizer satisfies
//! `λ x_i^{α-1} = (k-1)! Σ_{e ∋ i} Π_{u ∈ e \ i} x_u` for every vertex `i`.
//!
//! [`spectral_radius`] finds a fixed point of that equation by a shifted
//! nonnegative iteration from several starts. The returned `lambda` is the
//! value of `P` at the returned unit vector, so it is always an attained
//! lower bound on `λ_α`; `residual` certifies how well the eigenequation
//! holds there. Global optimality is not claimed for general hypergraphs:
//! when `1 < α < k` the problem is not concave and several fixed points may
//! exist.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::hypergraph::{binomial, factorial, falling_factorial, Hypergraph};

pub const SOLVER_VERSION: &str = concat!("spexlab-shifted-fixed-point/", env!("CARGO_PKG_VERSION"));

/// Smallest accepted α is `1 + ALPHA_GUARD`.
pub const ALPHA_GUARD: f64 = 1e-9;

/// Relative λ change below which an iteration is considered stationary.
const LAMBDA_RTOL: f64 = 1e-13;

/// Entries below this are multiplied in log space.
const TINY: f64 = 1e-150;

/// Nonnegative vertex weights together with the norm exponent they refer to.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeightVector {
    pub entries: Vec<f64>,
    pub alpha: f64,
}

impl WeightVector {
    pub fn new(entries: Vec<f64>, alpha: f64) -> Self {
        WeightVector { entries, alpha }
    }

    /// The all-ones vector scaled to unit ℓ_α norm.
    pub fn uniform(n: usize, alpha: f64) -> Self {
        let mut w = WeightVector::new(vec![1.0; n], alpha);
        w.normalize();
        w
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn norm(&self) -> f64 {
        alpha_norm(&self.entries, self.alpha)
    }

    /// Scales to unit ℓ_α norm; the zero vector is left alone.
    pub fn normalize(&mut self) {
        normalize(&mut self.entries, self.alpha);
    }

    pub fn min_entry(&self) -> Option<(usize, f64)> {
        self.entries
            .iter()
            .copied()
            .enumerate()
            .min_by(|a, b| a.1.total_cmp(&b.1).then(a.0.cmp(&b.0)))
    }
}

/// How much of `x^{α-1}` is mixed back into each update.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Shift {
    /// `max(1, (k-1)/(α-1))` times the largest objective value seen so far.
    Auto,
    /// `k! · Δ(H)`, a uniform bound on the partial sums. Much slower.
    DegreeBound,
    Explicit(f64),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolverOptions {
    /// Residual tolerance for `converged`.
    pub tol: f64,
    pub max_iter: usize,
    /// Number of starts: the all-ones vector plus `starts - 1` seeded random ones.
    pub starts: usize,
    pub seed: u64,
    pub shift: Shift,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions { tol: 1e-10, max_iter: 200_000, starts: 8, seed: 0xA1FA, shift: Shift::Auto }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectralResult {
    pub lambda: f64,
    pub vector: WeightVector,
    /// Maximum eigenequation violation at `vector`, recomputed after the run.
    pub residual: f64,
    /// Iterations used by the start that produced the result.
    pub iterations: usize,
    pub starts_used: usize,
    pub converged: bool,
}

impl SpectralResult {
    /// JSON document with every field plus the edge count of `h` and the solver version.
    pub fn to_json_value(&self, h: &Hypergraph) -> serde_json::Value {
        let mut v = serde_json::to_value(self).expect("result serializes");
        let obj = v.as_object_mut().unwrap();
        obj.insert("num_edges".into(), h.num_edges().into());
        obj.insert("n".into(), h.n().into());
        obj.insert("k".into(), h.k().into());
        obj.insert("solver_version".into(), SOLVER_VERSION.into());
        v
    }
}

pub(crate) fn alpha_norm(x: &[f64], alpha: f64) -> f64 {
    let m = x.iter().fold(0.0f64, |m, &v| m.max(v.abs()));
    if m == 0.0 {
        return 0.0;
    }
    // scale first so that large α does not overflow
    let s: f64 = x.iter().map(|&v| (v.abs() / m).powf(alpha)).sum();
    m * s.powf(1.0 / alpha)
}

fn normalize(x: &mut [f64], alpha: f64) {
    let nrm = alpha_norm(x, alpha);
    if nrm > 0.0 {
        x.iter_mut().for_each(|v| *v /= nrm);
    }
}

/// Neumaier compensated sum.
fn compensated_sum(values: impl Iterator<Item = f64>) -> f64 {
    let (mut sum, mut c) = (0.0f64, 0.0f64);
    for v in values {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            c += (sum - t) + v;
        } else {
            c += (v - t) + sum;
        }
        sum = t;
    }
    sum + c
}

fn product(values: impl Iterator<Item = f64> + Clone) -> f64 {
    if values.clone().any(|v| v < TINY) {
        if values.clone().any(|v| v <= 0.0) {
            return 0.0;
        }
        values.map(f64::ln).sum::<f64>().exp()
    } else {
        values.product()
    }
}

fn check_dim(h: &Hypergraph, x: &[f64]) -> Result<()> {
    if x.len() != h.n() {
        return invalid(format!("vector has {} entries but the hypergraph has {} vertices", x.len(), h.n()));
    }
    Ok(())
}

fn check_alpha(alpha: f64) -> Result<()> {
    if !(alpha > 1.0 + ALPHA_GUARD) || !alpha.is_finite() {
        return invalid(format!("alpha must be finite and greater than 1, got {alpha}"));
    }
    Ok(())
}

/// `P_H(x) = k! Σ_e Π_{v ∈ e} x_v`.
pub fn lagrangian_poly(h: &Hypergraph, x: &[f64]) -> Result<f64> {
    check_dim(h, x)?;
    let s = compensated_sum(h.edges().iter().map(|e| product(e.iter().map(|&v| x[v]))));
    Ok(factorial(h.k()) * s)
}

/// `g_i = (k-1)! Σ_{e ∋ i} Π_{u ∈ e \ i} x_u` for every vertex.
fn partial_sums(h: &Hypergraph, x: &[f64], out: &mut [f64]) {
    let k = h.k();
    out.iter_mut().for_each(|g| *g = 0.0);
    let mut prefix = vec![1.0; k + 1];
    let mut suffix = vec![1.0; k + 1];
    for e in h.edges() {
        let tiny = e.iter().any(|&v| x[v] < TINY);
        if tiny {
            for (j, &v) in e.iter().enumerate() {
                out[v] += product(e.iter().enumerate().filter(|&(i, _)| i != j).map(|(_, &u)| x[u]));
            }
            continue;
        }
        for j in 0..k {
            prefix[j + 1] = prefix[j] * x[e[j]];
            suffix[k - 1 - j] = suffix[k - j] * x[e[k - 1 - j]];
        }
        for (j, &v) in e.iter().enumerate() {
            out[v] += prefix[j] * suffix[j + 1];
        }
    }
    let scale = factorial(k - 1);
    out.iter_mut().for_each(|g| *g *= scale);
}

fn residual_from(g: &[f64], x: &[f64], alpha: f64, lambda: f64) -> f64 {
    g.iter()
        .zip(x)
        .map(|(&gi, &xi)| (lambda * xi.powf(alpha - 1.0) - gi).abs())
        .fold(0.0, f64::max)
}

/// `max_i |λ x_i^{α-1} - (k-1)! Σ_{e ∋ i} Π_{u ∈ e \ i} x_u|`.
pub fn eigen_residual(h: &Hypergraph, alpha: f64, lambda: f64, x: &[f64]) -> Result<f64> {
    check_dim(h, x)?;
    if x.iter().any(|&v| v < 0.0) {
        return invalid("weight vector has a negative entry");
    }
    let mut g = vec![0.0; h.n()];
    partial_sums(h, x, &mut g);
    Ok(residual_from(&g, x, alpha, lambda))
}

struct Run {
    lambda: f64,
    x: Vec<f64>,
    iterations: usize,
    converged: bool,
}

fn iterate(h: &Hypergraph, alpha: f64, shift: Shift, opts: &SolverOptions, mut x: Vec<f64>) -> Run {
    let ratio = ((h.k() - 1) as f64 / (alpha - 1.0)).max(1.0);
    let mut peak: f64 = 0.0;
    let n = h.n();
    let inv = 1.0 / (alpha - 1.0);
    normalize(&mut x, alpha);
    let mut g = vec![0.0; n];
    let mut prev = f64::NAN;
    let mut iterations = 0;
    loop {
        partial_sums(h, &x, &mut g);
        // Σ_i x_i g_i = k! Σ_e Π x_e, the current objective.
        let lambda = compensated_sum(x.iter().zip(&g).map(|(a, b)| a * b));
        let residual = residual_from(&g, &x, alpha, lambda);
        let stationary = (lambda - prev).abs() <= LAMBDA_RTOL * lambda.abs().max(f64::MIN_POSITIVE);
        if (stationary && residual <= opts.tol) || iterations >= opts.max_iter {
            return Run { lambda, x, iterations, converged: residual <= opts.tol };
        }
        prev = lambda;
        peak = peak.max(lambda);
        let shift = match shift {
            Shift::Auto => ratio * peak,
            Shift::DegreeBound => factorial(h.k()) * h.max_degree() as f64,
            Shift::Explicit(s) => s,
        };
        for (xi, &gi) in x.iter_mut().zip(&g) {
            *xi = (gi + shift * xi.powf(alpha - 1.0)).powf(inv);
        }
        normalize(&mut x, alpha);
        iterations += 1;
    }
}

fn lambda_tie(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-12 * a.abs().max(b.abs()).max(1.0)
}

fn rounded(x: &[f64]) -> Vec<i64> {
    x.iter().map(|v| (v * 1e12).round() as i64).collect()
}

/// True if `a` should replace `b`: larger λ, ties broken by the
/// lexicographically smaller vector at 1e-12 resolution.
fn better(a: (f64, &[f64]), b: (f64, &[f64])) -> bool {
    if lambda_tie(a.0, b.0) {
        rounded(a.1) < rounded(b.1)
    } else {
        a.0 > b.0
    }
}

fn solve_connected(h: &Hypergraph, alpha: f64, opts: &SolverOptions) -> Run {
    let n = h.n();
    let shift = opts.shift;
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let starts: Vec<Vec<f64>> = (0..opts.starts.max(1))
        .map(|s| {
            if s == 0 {
                vec![1.0; n]
            } else {
                (0..n).map(|_| rng.gen_range(0.05..1.0)).collect()
            }
        })
        .collect();
    let runs: Vec<Run> = starts.into_par_iter().map(|x0| iterate(h, alpha, shift, opts, x0)).collect();
    runs.into_iter()
        .reduce(|best, r| if better((r.lambda, &r.x), (best.lambda, &best.x)) { r } else { best })
        .expect("at least one start")
}

/// Computes `λ_α(h)` by a multi-start shifted fixed-point iteration on each
/// connected component, keeping the best component.
pub fn spectral_radius(h: &Hypergraph, alpha: f64, opts: &SolverOptions) -> Result<SpectralResult> {
    check_alpha(alpha)?;
    if h.n() == 0 {
        return invalid("spectral radius of a hypergraph with no vertices");
    }
    let starts_used = opts.starts.max(1);
    let mut best: Option<(Run, Vec<usize>)> = None;
    for comp in h.components() {
        let sub = h.induced(&comp)?;
        if sub.num_edges() == 0 {
            continue;
        }
        let run = solve_connected(&sub, alpha, opts);
        let replace = match &best {
            None => true,
            Some((b, _)) => run.lambda > b.lambda && !lambda_tie(run.lambda, b.lambda),
        };
        if replace {
            best = Some((run, comp));
        }
    }
    let Some((run, comp)) = best else {
        let vector = WeightVector::uniform(h.n(), alpha);
        return Ok(SpectralResult { lambda: 0.0, vector, residual: 0.0, iterations: 0, starts_used, converged: true });
    };
    let mut full = vec![0.0; h.n()];
    for (i, &v) in comp.iter().enumerate() {
        full[v] = run.x[i];
    }
    let lambda = lagrangian_poly(h, &full)?;
    let residual = eigen_residual(h, alpha, lambda, &full)?;
    Ok(SpectralResult {
        lambda,
        vector: WeightVector::new(full, alpha),
        residual,
        iterations: run.iterations,
        starts_used,
        converged: run.converged && residual <= opts.tol,
    })
}

/// `(l)_k / l^k · n^{k - k/α}`: the α-spectral radius of the balanced complete
/// l-partite k-graph when `l` divides `n`.
pub fn closed_form_multipartite(n: usize, l: usize, k: usize, alpha: f64) -> Result<f64> {
    check_alpha(alpha)?;
    if k < 2 || l < k {
        return invalid(format!("need l >= k >= 2, got l = {l}, k = {k}"));
    }
    if !n.is_multiple_of(l) {
        return invalid(format!("{l} does not divide {n}; the formula is only an upper bound there"));
    }
    let kf = k as f64;
    Ok(falling_factorial(l as u64, k as u64) as f64 / (l as f64).powi(k as i32) * (n as f64).powf(kf - kf / alpha))
}

/// α-spectral radius of the complete bipartite-like 4-graph with parts
/// `floor(n/2)` and `ceil(n/2)`: `4! · 2^{-4/α} · C(t,2) C(n-t,2) t^{-2/α} (n-t)^{-2/α}`
/// with `t = floor(n/2)`.
pub fn closed_form_b4(n: usize, alpha: f64) -> Result<f64> {
    check_alpha(alpha)?;
    if n < 4 {
        return invalid(format!("need n >= 4, got {n}"));
    }
    let t = n / 2;
    let (a, b) = (t as f64, (n - t) as f64);
    let f = binomial(t as u64, 2) as f64 * binomial((n - t) as u64, 2) as f64 * a.powf(-2.0 / alpha) * b.powf(-2.0 / alpha);
    Ok(24.0 * 2f64.powf(-4.0 / alpha) * f)
}

/// `(3/8)(n-2)^2 n^{2-4/α}`, the even-n value of [`closed_form_b4`] and an
/// upper bound for odd n.
pub fn b4_even_bound(n: usize, alpha: f64) -> f64 {
    let nf = n as f64;
    0.375 * (nf - 2.0).powi(2) * nf.powf(2.0 - 4.0 / alpha)
}

/// `k! · n^{-k/α} · e(h)`: `P_h` at the normalized all-ones vector.
pub fn average_bound(h: &Hypergraph, alpha: f64) -> Result<f64> {
    check_alpha(alpha)?;
    if h.n() == 0 {
        return invalid("average bound of a hypergraph with no vertices");
    }
    let k = h.k() as f64;
    Ok(factorial(h.k()) * (h.n() as f64).powf(-k / alpha) * h.num_edges() as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypergraph::{bipartite_like_complete, turan_graph};
    use approx::assert_relative_eq;

    fn single_edge(k: usize) -> Hypergraph {
        Hypergraph::new(k, k, [(0..k).collect::<Vec<_>>()]).unwrap()
    }

    #[test]
    fn polynomial_examples() {
        let c = 3f64.powf(-1.0 / 3.0);
        assert_relative_eq!(lagrangian_poly(&single_edge(3), &[c, c, c]).unwrap(), 2.0, epsilon = 1e-14);
        let k22 = turan_graph(4, 2, 2).unwrap();
        assert_eq!(lagrangian_poly(&k22, &[0.0; 4]).unwrap(), 0.0);
        assert_relative_eq!(lagrangian_poly(&k22, &[0.5; 4]).unwrap(), 2.0, epsilon = 1e-14);
        assert!(lagrangian_poly(&k22, &[0.5; 3]).is_err());
    }

    #[test]
    fn tiny_entries_do_not_poison_products() {
        let h = single_edge(3);
        let v = lagrangian_poly(&h, &[1e-200, 1e-120, 1.0]).unwrap();
        assert!(v < 1e-300);
        let v = lagrangian_poly(&h, &[1e-160, 1e160, 1.0]).unwrap();
        assert_relative_eq!(v, 6.0, max_relative = 1e-12);
    }

    #[test]
    fn radius_examples() {
        let opts = SolverOptions::default();
        let r = spectral_radius(&turan_graph(4, 2, 2).unwrap(), 2.0, &opts).unwrap();
        assert_relative_eq!(r.lambda, 2.0, max_relative = 1e-12);
        assert!(r.residual <= 1e-9 && r.converged);

        let r = spectral_radius(&single_edge(3), 2.0, &opts).unwrap();
        assert_relative_eq!(r.lambda, 6.0 * 3f64.powf(-1.5), max_relative = 1e-10);

        let r = spectral_radius(&Hypergraph::empty(5, 3).unwrap(), 3.0, &opts).unwrap();
        assert_eq!(r.lambda, 0.0);
        assert_relative_eq!(r.vector.norm(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn radius_rejects_bad_alpha_and_empty_vertex_set() {
        let opts = SolverOptions::default();
        let h = single_edge(3);
        assert!(spectral_radius(&h, 1.0, &opts).is_err());
        assert!(spectral_radius(&h, 1.0 + 1e-10, &opts).is_err());
        assert!(spectral_radius(&h, f64::NAN, &opts).is_err());
        assert!(spectral_radius(&Hypergraph::empty(0, 3).unwrap(), 2.0, &opts).is_err());
    }

    #[test]
    fn non_convergence_is_reported_not_raised() {
        let opts = SolverOptions { max_iter: 2, starts: 1, tol: 1e-15, ..Default::default() };
        let h = bipartite_like_complete(9, 2).unwrap();
        let r = spectral_radius(&h, 1.5, &opts).unwrap();
        assert!(!r.converged);
        assert!(r.lambda > 0.0);
        assert_relative_eq!(r.lambda, lagrangian_poly(&h, &r.vector.entries).unwrap(), max_relative = 1e-12);
    }

    #[test]
    fn residual_examples() {
        let k22 = turan_graph(4, 2, 2).unwrap();
        assert!(eigen_residual(&k22, 2.0, 2.0, &[0.5; 4]).unwrap() < 1e-12);
        let h = single_edge(3);
        let c = 3f64.powf(-0.5);
        assert!(eigen_residual(&h, 2.0, 6.0 * 3f64.powf(-1.5), &[c; 3]).unwrap() < 1e-12);
        assert!(eigen_residual(&h, 2.0, 1.1547, &[c; 3]).unwrap() < 1e-4);
        // λ = 0: residual is the largest partial sum
        assert_relative_eq!(eigen_residual(&h, 2.0, 0.0, &[c; 3]).unwrap(), 2.0 * c * c, epsilon = 1e-14);
        assert!(eigen_residual(&h, 2.0, 0.0, &[-0.1, 0.5, 0.5]).is_err());
    }

    #[test]
    fn closed_forms() {
        assert_relative_eq!(closed_form_multipartite(6, 3, 3, 3.0).unwrap(), 8.0, max_relative = 1e-14);
        assert_relative_eq!(closed_form_multipartite(4, 2, 2, 2.0).unwrap(), 2.0, max_relative = 1e-14);
        assert_relative_eq!(closed_form_multipartite(6, 3, 3, 1e6).unwrap(), 48.0, max_relative = 1e-3);
        assert!(closed_form_multipartite(7, 3, 3, 2.0).is_err());

        assert_relative_eq!(closed_form_b4(4, 4.0).unwrap(), 6.0, max_relative = 1e-14);
        assert_relative_eq!(closed_form_b4(8, 2.0).unwrap(), 13.5, max_relative = 1e-14);
        for alpha in [1.5, 2.0, 3.3, 7.0] {
            assert_relative_eq!(closed_form_b4(6, alpha).unwrap(), 6.0 * 6f64.powf(2.0 - 4.0 / alpha), max_relative = 1e-13);
        }
        assert!(closed_form_b4(3, 2.0).is_err());
    }

    #[test]
    fn average_bound_examples() {
        assert_relative_eq!(average_bound(&turan_graph(6, 3, 3).unwrap(), 3.0).unwrap(), 8.0, max_relative = 1e-14);
        assert_relative_eq!(average_bound(&single_edge(3), 2.0).unwrap(), 6.0 * 3f64.powf(-1.5), max_relative = 1e-14);
        assert_eq!(average_bound(&Hypergraph::empty(4, 3).unwrap(), 2.5).unwrap(), 0.0);
        assert!(average_bound(&Hypergraph::empty(0, 3).unwrap(), 2.5).is_err());
    }

    #[test]
    fn disconnected_maximizer_sits_on_one_component() {
        // K_4^(3) on 0..4 beats a single edge on 4..7
        let mut edges: Vec<Vec<usize>> = vec![vec![0, 1, 2], vec![0, 1, 3], vec![0, 2, 3], vec![1, 2, 3]];
        edges.push(vec![4, 5, 6]);
        let h = Hypergraph::new(8, 3, edges).unwrap();
        let r = spectral_radius(&h, 3.0, &SolverOptions::default()).unwrap();
        assert!(r.vector.entries[4..].iter().all(|&v| v == 0.0));
        // uniform on K_4^(3): 6·4·(1/4) = 6
        assert_relative_eq!(r.lambda, 6.0, max_relative = 1e-10);
    }
}
