//! Minimum-entry vertex peeling and finite-n checks of the inequalities
//! behind spectral stability.
//!
//! The Turán density `π(F)` is always supplied by the caller: it is a limit
//! and cannot be computed at fixed `n`. Typical values are `2/9` for the
//! families whose extremal graphs are balanced complete 3-partite 3-graphs
//! and `3/8` for the 4-book with three pages.
//!
//! The inequalities checked here only hold for large n, so checkers report findings with
//! raw quantities and margins instead of failing. The abstract family of
//! high-minimum-degree F-free graphs is instantiated by whatever candidate
//! sequence the caller passes in (for example `T^k_l(n)`).

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::hypergraph::{binomial, factorial, Hypergraph};
use crate::spectral::{lagrangian_poly, spectral_radius, SolverOptions, SpectralResult, ALPHA_GUARD};

/// Note attached to every report that compares against a candidate sequence.
pub const CANDIDATE_NOTE: &str =
    "the maximum over all F-free graphs of large minimum degree is replaced by the caller-supplied candidate values";

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PeelParams {
    pub alpha: f64,
    pub epsilon: f64,
    /// Turán density of the forbidden family.
    pub pi: f64,
    pub k: usize,
}

impl PeelParams {
    pub fn new(alpha: f64, epsilon: f64, pi: f64, k: usize) -> Result<Self> {
        if !(alpha > 1.0 + ALPHA_GUARD) || !alpha.is_finite() {
            return invalid(format!("alpha must be finite and greater than 1, got {alpha}"));
        }
        if !(epsilon > 0.0 && epsilon < 1.0) {
            return invalid(format!("epsilon must lie in (0, 1), got {epsilon}"));
        }
        if !(pi > 0.0 && pi <= 1.0) {
            return invalid(format!("pi must lie in (0, 1], got {pi}"));
        }
        if k < 2 {
            return invalid(format!("uniformity must be at least 2, got {k}"));
        }
        Ok(PeelParams { alpha, epsilon, pi, k })
    }

    /// `ε π (α - 1) / (2 k α)`.
    pub fn eps_prime(&self) -> f64 {
        self.epsilon * self.pi * (self.alpha - 1.0) / (2.0 * self.k as f64 * self.alpha)
    }

    /// `ε π / (2 (k - 1))`.
    pub fn eps_double_prime(&self) -> f64 {
        self.epsilon * self.pi / (2.0 * (self.k - 1) as f64)
    }

    /// `k - k/α`.
    pub fn exponent(&self) -> f64 {
        let k = self.k as f64;
        k - k / self.alpha
    }
}

/// `(1 - ε) π C(n, k-1)`.
pub fn degree_threshold(n: usize, params: &PeelParams) -> Result<f64> {
    if n < params.k {
        return invalid(format!("n = {n} is below the uniformity {}", params.k));
    }
    Ok((1.0 - params.epsilon) * params.pi * binomial(n as u64, params.k as u64 - 1) as f64)
}

/// `π (1 - 2ε') n^{k - k/α}`.
pub fn spectral_lower_bound(n: usize, params: &PeelParams) -> Result<f64> {
    if n < params.k {
        return invalid(format!("n = {n} is below the uniformity {}", params.k));
    }
    Ok(params.pi * (1.0 - 2.0 * params.eps_prime()) * (n as f64).powf(params.exponent()))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DominanceRow {
    pub n: usize,
    pub lambda: f64,
    pub bound: f64,
    pub margin: f64,
    pub holds: bool,
}

/// Compares a λ sequence with [`spectral_lower_bound`] pointwise.
pub fn check_spectral_lower_bound(lambdas: &[(usize, f64)], params: &PeelParams) -> Result<Vec<DominanceRow>> {
    lambdas
        .iter()
        .map(|&(n, lambda)| {
            let bound = spectral_lower_bound(n, params)?;
            Ok(DominanceRow { n, lambda, bound, margin: lambda - bound, holds: lambda >= bound })
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct N0Bound {
    /// Natural logarithm of the bound; always finite.
    pub ln_value: f64,
    /// The bound itself, `+inf` when it overflows `f64`.
    pub value: f64,
    pub overflow: bool,
}

/// `(N0^{k-k/α} e^{k²} / ((1 - 2ε') π))^{2 / ((k-k/α) ε'')}`, evaluated in log space.
pub fn n0_bound(big_n0: usize, params: &PeelParams) -> Result<N0Bound> {
    if big_n0 < params.k {
        return invalid(format!("N0 = {big_n0} is below the uniformity {}", params.k));
    }
    let s = params.exponent();
    let k = params.k as f64;
    let inner = s * (big_n0 as f64).ln() + k * k - ((1.0 - 2.0 * params.eps_prime()) * params.pi).ln();
    let ln_value = 2.0 / (s * params.eps_double_prime()) * inner;
    let value = ln_value.exp();
    Ok(N0Bound { ln_value, value, overflow: value.is_infinite() })
}

/// `(1 - x)^{-β} >= 1 + β x` with `slack` tolerance.
pub fn bernoulli_fact_holds(x: f64, beta: f64, slack: f64) -> bool {
    (1.0 - x).powf(-beta) >= 1.0 + beta * x - slack
}

/// `1 - x >= e^{-x - x²}` with `slack` tolerance.
pub fn exp_fact_holds(x: f64, slack: f64) -> bool {
    1.0 - x >= (-x - x * x).exp() - slack
}

/// `P_{H-v}` evaluated at `x` with entry `v` dropped.
pub fn deleted_vertex_value(h: &Hypergraph, x: &[f64], v: usize) -> Result<f64> {
    let (sub, keep) = h.remove_vertex(v)?;
    if x.len() != h.n() {
        return invalid("vector length differs from vertex count");
    }
    let xs: Vec<f64> = keep.iter().map(|&u| x[u]).collect();
    lagrangian_poly(&sub, &xs)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PeelStop {
    DegreeThresholdMet,
    FloorSizeReached,
    SolverFailure,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PeelStep {
    pub n_before: usize,
    /// Label in the input hypergraph.
    pub removed_vertex: usize,
    pub lambda_before: f64,
    pub lambda_after: f64,
    /// `x_v^α` of the removed vertex.
    pub x_min_alpha: f64,
    pub min_degree_before: usize,
    pub threshold: f64,
    /// `λ_after >= (1 - (k - k/α)(1 - ε''/2)/n) λ_before`.
    pub ratio_bound_ok: bool,
    /// `P_{H-v}(x')` for the eigenvector of the graph before removal.
    pub deleted_value: f64,
    /// `(1 - k x_v^α) λ_before`, which `deleted_value` should equal.
    pub deleted_value_expected: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PeelTrace {
    pub steps: Vec<PeelStep>,
    pub terminated_reason: PeelStop,
    /// Input labels of the vertices left when the procedure stopped.
    pub remaining: Vec<usize>,
}

impl PeelTrace {
    /// One JSON object per step.
    pub fn to_json_lines(&self) -> String {
        let mut s = String::new();
        for step in &self.steps {
            writeln!(s, "{}", serde_json::to_string(step).expect("step serializes")).unwrap();
        }
        s
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from(
            "n_before,removed_vertex,lambda_before,lambda_after,x_min_alpha,min_degree_before,threshold,ratio_bound_ok,deleted_value,deleted_value_expected\n",
        );
        for p in &self.steps {
            writeln!(
                s,
                "{},{},{:.12e},{:.12e},{:.12e},{},{:.12e},{},{:.12e},{:.12e}",
                p.n_before,
                p.removed_vertex,
                p.lambda_before,
                p.lambda_after,
                p.x_min_alpha,
                p.min_degree_before,
                p.threshold,
                p.ratio_bound_ok,
                p.deleted_value,
                p.deleted_value_expected
            )
            .unwrap();
        }
        s
    }
}

/// Repeatedly deletes the vertex with the smallest eigenvector entry until
/// the minimum degree reaches [`degree_threshold`] or `floor_size` vertices
/// remain. Ties go to the lowest input label.
pub fn peel(h: &Hypergraph, params: &PeelParams, floor_size: usize, opts: &SolverOptions) -> Result<PeelTrace> {
    if h.k() != params.k {
        return invalid(format!("hypergraph is {}-uniform but parameters say k = {}", h.k(), params.k));
    }
    if floor_size < params.k || h.n() <= floor_size {
        return invalid(format!("need n > floor >= k, got n = {}, floor = {floor_size}, k = {}", h.n(), params.k));
    }
    let k = params.k as f64;
    let mut graph = h.clone();
    let mut labels: Vec<usize> = (0..h.n()).collect();
    let mut steps = Vec::new();
    let mut current: Option<SpectralResult> = None;

    let reason = loop {
        let n = graph.n();
        let delta = graph.min_degree()?;
        let threshold = degree_threshold(n, params)?;
        if delta as f64 >= threshold {
            break PeelStop::DegreeThresholdMet;
        }
        if n <= floor_size {
            break PeelStop::FloorSizeReached;
        }
        let before = match current.take() {
            Some(r) => r,
            None => spectral_radius(&graph, params.alpha, opts)?,
        };
        if !before.converged {
            break PeelStop::SolverFailure;
        }
        let (v, xv) = before.vector.min_entry().expect("nonempty vertex set");
        let x_min_alpha = xv.powf(params.alpha);
        let deleted_value = deleted_vertex_value(&graph, &before.vector.entries, v)?;
        let (next, keep) = graph.remove_vertex(v)?;
        let after = spectral_radius(&next, params.alpha, opts)?;
        let ratio_floor = 1.0 - params.exponent() * (1.0 - params.eps_double_prime() / 2.0) / n as f64;
        steps.push(PeelStep {
            n_before: n,
            removed_vertex: labels[v],
            lambda_before: before.lambda,
            lambda_after: after.lambda,
            x_min_alpha,
            min_degree_before: delta,
            threshold,
            ratio_bound_ok: after.lambda >= ratio_floor * before.lambda,
            deleted_value,
            deleted_value_expected: (1.0 - k * x_min_alpha) * before.lambda,
        });
        labels = keep.iter().map(|&u| labels[u]).collect();
        graph = next;
        if !after.converged {
            break PeelStop::SolverFailure;
        }
        current = Some(after);
    };
    Ok(PeelTrace { steps, terminated_reason: reason, remaining: labels })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MinEntryReport {
    pub n: usize,
    pub lambda: f64,
    pub reference_lambda: Option<f64>,
    /// `λ >= reference` (true when no reference is supplied).
    pub lambda_premise: bool,
    pub min_degree: usize,
    pub threshold: f64,
    /// `δ < threshold`.
    pub degree_premise: bool,
    pub x_min_alpha: f64,
    /// `(1 - ε'')/n`.
    pub bound: f64,
    pub conclusion: bool,
    pub margin: f64,
    /// Premises hold but the conclusion fails; expected only below the
    /// inequality's (unknown) size threshold.
    pub finding: bool,
    pub note: String,
}

/// Evaluates the minimum-entry implication for a solved hypergraph.
pub fn check_min_entry_bound(
    h: &Hypergraph,
    params: &PeelParams,
    result: &SpectralResult,
    reference_lambda: Option<f64>,
) -> Result<MinEntryReport> {
    let n = h.n();
    if result.vector.len() != n {
        return invalid("result vector length differs from vertex count");
    }
    let min_degree = h.min_degree()?;
    let threshold = degree_threshold(n, params)?;
    let (_, xmin) = result.vector.min_entry().expect("nonempty");
    let x_min_alpha = xmin.powf(params.alpha);
    let bound = (1.0 - params.eps_double_prime()) / n as f64;
    let lambda_premise = reference_lambda.is_none_or(|r| result.lambda >= r);
    let degree_premise = (min_degree as f64) < threshold;
    let conclusion = x_min_alpha < bound;
    Ok(MinEntryReport {
        n,
        lambda: result.lambda,
        reference_lambda,
        lambda_premise,
        min_degree,
        threshold,
        degree_premise,
        x_min_alpha,
        bound,
        conclusion,
        margin: bound - x_min_alpha,
        finding: lambda_premise && degree_premise && !conclusion,
        note: CANDIDATE_NOTE.into(),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RemovalReport {
    pub n: usize,
    pub vertex: usize,
    pub x_alpha: f64,
    /// Whether `x_v^α < (1 - ε'')/n`.
    pub applicable: bool,
    pub lambda: f64,
    pub lambda_removed: f64,
    pub ratio: f64,
    /// `1 - (k - k/α)(1 - ε''/2)/n`.
    pub stated_bound: f64,
    pub stated_margin: f64,
    /// `(1 - k x_v^α) / (1 - x_v^α)^{k/α}`.
    pub proof_bound: f64,
    pub proof_margin: f64,
    /// `P_{H-v}(x')` and `(1 - k x_v^α) λ`.
    pub deleted_value: f64,
    pub deleted_value_expected: f64,
    pub converged: bool,
}

/// Solves `H` and `H - v` and compares the ratio with the removal bounds.
pub fn check_removal_ratio(h: &Hypergraph, v: usize, params: &PeelParams, opts: &SolverOptions) -> Result<RemovalReport> {
    let n = h.n();
    if v >= n {
        return invalid(format!("vertex {v} out of range for n = {n}"));
    }
    let k = params.k as f64;
    let full = spectral_radius(h, params.alpha, opts)?;
    let x_alpha = full.vector.entries[v].powf(params.alpha);
    let (sub, _) = h.remove_vertex(v)?;
    let removed = if sub.n() == 0 {
        None
    } else {
        Some(spectral_radius(&sub, params.alpha, opts)?)
    };
    let lambda_removed = removed.as_ref().map_or(0.0, |r| r.lambda);
    let ratio = if full.lambda > 0.0 { lambda_removed / full.lambda } else { 1.0 };
    let stated_bound = 1.0 - params.exponent() * (1.0 - params.eps_double_prime() / 2.0) / n as f64;
    let proof_bound = (1.0 - k * x_alpha) / (1.0 - x_alpha).powf(k / params.alpha);
    Ok(RemovalReport {
        n,
        vertex: v,
        x_alpha,
        applicable: x_alpha < (1.0 - params.eps_double_prime()) / n as f64,
        lambda: full.lambda,
        lambda_removed,
        ratio,
        stated_bound,
        stated_margin: ratio - stated_bound,
        proof_bound,
        proof_margin: ratio - proof_bound,
        deleted_value: deleted_vertex_value(h, &full.vector.entries, v)?,
        deleted_value_expected: (1.0 - k * x_alpha) * full.lambda,
        converged: full.converged && removed.is_none_or(|r| r.converged),
    })
}

fn check_consecutive(seq: &[(usize, f64)]) -> Result<()> {
    if let Some(w) = seq.windows(2).find(|w| w[1].0 != w[0].0 + 1) {
        return invalid(format!("sequence is not consecutive: {} followed by {}", w[0].0, w[1].0));
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GrowthPair {
    pub n: usize,
    /// `λ_n - λ_{n-1}`.
    pub increment: f64,
    /// `(k - k/α)(1 - ε') π n^{k - k/α - 1}`.
    pub required: f64,
    pub margin: f64,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GrowthReport {
    pub pairs: Vec<GrowthPair>,
    pub all_hold: bool,
    pub first_failure: Option<usize>,
    pub eps_prime: f64,
    pub note: String,
}

/// Checks `λ_n - λ_{n-1} >= (k - k/α)(1 - ε') π n^{k-k/α-1}` on each
/// consecutive pair of `(n, λ_n)`.
pub fn check_growth_condition(lambdas: &[(usize, f64)], params: &PeelParams) -> Result<GrowthReport> {
    check_consecutive(lambdas)?;
    let s = params.exponent();
    let eps_prime = params.eps_prime();
    let pairs: Vec<GrowthPair> = lambdas
        .windows(2)
        .map(|w| {
            let n = w[1].0;
            let increment = w[1].1 - w[0].1;
            let required = s * (1.0 - eps_prime) * params.pi * (n as f64).powf(s - 1.0);
            GrowthPair { n, increment, required, margin: increment - required, holds: increment >= required }
        })
        .collect();
    let first_failure = pairs.iter().find(|p| !p.holds).map(|p| p.n);
    Ok(GrowthReport { all_hold: first_failure.is_none(), first_failure, pairs, eps_prime, note: CANDIDATE_NOTE.into() })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KlmRow {
    pub n: usize,
    /// `|ex(n) - ex(n-1) - π C(n, k-1)| / n^{k-1}`; absent for the first `n`.
    pub edge_ratio: Option<f64>,
    /// `|λ_n - k! ex(n) n^{-k/α}| / n^{k-k/α-1}`.
    pub spectral_ratio: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KlmReport {
    pub rows: Vec<KlmRow>,
    pub c: f64,
    pub all_hold: bool,
    /// Smallest `c` for which every row passes (the edge condition is
    /// strict, so it needs any value above this one).
    pub smallest_c: f64,
    pub note: String,
}

/// Evaluates the two continuity conditions on aligned `ex(n)` and `λ_n` sequences.
pub fn check_klm_conditions(
    ex_values: &[(usize, u64)],
    lambda_values: &[(usize, f64)],
    pi: f64,
    k: usize,
    alpha: f64,
    c: f64,
) -> Result<KlmReport> {
    if ex_values.len() != lambda_values.len() || ex_values.iter().zip(lambda_values).any(|(a, b)| a.0 != b.0) {
        return invalid("ex and lambda sequences are not aligned");
    }
    let as_f: Vec<(usize, f64)> = ex_values.iter().map(|&(n, e)| (n, e as f64)).collect();
    check_consecutive(&as_f)?;
    if k < 2 || !(alpha > 1.0) {
        return invalid("need k >= 2 and alpha > 1");
    }
    let kf = k as f64;
    let kfact = factorial(k);
    let mut rows = Vec::new();
    let mut all_hold = true;
    for (i, (&(n, ex), &(_, lambda))) in ex_values.iter().zip(lambda_values).enumerate() {
        let nf = n as f64;
        let edge_ratio = (i > 0).then(|| {
            let prev = ex_values[i - 1].1 as f64;
            (ex as f64 - prev - pi * binomial(n as u64, k as u64 - 1) as f64).abs() / nf.powf(kf - 1.0)
        });
        let spectral_ratio = (lambda - kfact * ex as f64 * nf.powf(-kf / alpha)).abs() / nf.powf(kf - kf / alpha - 1.0);
        if edge_ratio.is_some_and(|r| r >= c) || spectral_ratio > c {
            all_hold = false;
        }
        rows.push(KlmRow { n, edge_ratio, spectral_ratio });
    }
    let smallest_c = rows
        .iter()
        .map(|r| r.spectral_ratio.max(r.edge_ratio.unwrap_or(0.0)))
        .fold(0.0, f64::max);
    Ok(KlmReport { rows, c, all_hold, smallest_c, note: CANDIDATE_NOTE.into() })
}
