//! Built-in verification suites.

use itertools::Itertools;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use spexlab::containment::{contains_sub, is_cancellative, is_family_free};
use spexlab::hypergraph::*;
use spexlab::search::{canonical_form, ex_search, SearchOptions};
use spexlab::spectral::*;
use spexlab::stability::*;
use spexlab::{Hypergraph, Result, SolverOptions};

pub const SUITES: [&str; 6] = ["closed-forms", "monotonicity", "turan-pairs", "bollobas", "peeling", "growth"];

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub detail: Value,
}

impl Check {
    fn new(name: impl Into<String>, pass: bool, detail: Value) -> Self {
        Check { name: name.into(), pass, detail }
    }
}

pub fn run_suite(name: &str, opts: &SolverOptions) -> Result<Vec<Check>> {
    match name {
        "closed-forms" => closed_forms(opts),
        "monotonicity" => monotonicity(opts),
        "turan-pairs" => turan_pairs(),
        "bollobas" => bollobas(),
        "peeling" => peeling(opts),
        "growth" => growth(opts),
        other => Err(spexlab::Error::InvalidInput(format!("unknown suite `{other}`; expected one of {}", SUITES.join(", ")))),
    }
}

fn rel_err(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
}

fn closed_forms(opts: &SolverOptions) -> Result<Vec<Check>> {
    let mut out = Vec::new();
    for l in 2..=4 {
        for k in 2..=l {
            for n in (l..=12).step_by(l) {
                for alpha in [1.5, 2.0, 3.0] {
                    let r = spectral_radius(&turan_graph(n, l, k)?, alpha, opts)?;
                    let want = closed_form_multipartite(n, l, k, alpha)?;
                    let err = rel_err(r.lambda, want);
                    out.push(Check::new(
                        format!("multipartite l={l} k={k} n={n} alpha={alpha}"),
                        r.converged && err <= 1e-6,
                        json!({"lambda": r.lambda, "closed_form": want, "relative_error": err, "residual": r.residual}),
                    ));
                }
            }
        }
    }
    for n in 4..=12 {
        for alpha in [1.5, 2.0, 3.0, 4.0] {
            let r = spectral_radius(&bipartite_like_complete(n, 2)?, alpha, opts)?;
            let exact = closed_form_b4(n, alpha)?;
            let bound = b4_even_bound(n, alpha);
            let (pass, detail) = if n % 2 == 0 {
                let err = rel_err(r.lambda, bound);
                (err <= 1e-6, json!({"lambda": r.lambda, "closed_form": bound, "relative_error": err}))
            } else {
                let err = rel_err(r.lambda, exact);
                (
                    err <= 1e-6 && r.lambda < bound,
                    json!({"lambda": r.lambda, "closed_form": exact, "relative_error": err, "even_bound": bound}),
                )
            };
            out.push(Check::new(format!("b4 n={n} alpha={alpha}"), r.converged && pass, detail));
        }
    }
    Ok(out)
}

fn monotonicity(opts: &SolverOptions) -> Result<Vec<Check>> {
    let mut out = Vec::new();
    let hosts: Vec<(String, Hypergraph)> = [6, 8]
        .into_iter()
        .map(|n| Ok((format!("b4 n={n}"), bipartite_like_complete(n, 2)?)))
        .chain([6, 7, 9].into_iter().map(|n| Ok((format!("turan n={n} l=3 k=3"), turan_graph(n, 3, 3)?))))
        .collect::<Result<_>>()?;
    for (name, h) in hosts {
        let alpha = h.k() as f64;
        let full = spectral_radius(&h, alpha, opts)?.lambda;
        let worst = (0..h.num_edges())
            .map(|i| spectral_radius(&h.without_edge(i), alpha, opts).map(|r| full - r.lambda))
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .fold(f64::INFINITY, f64::min);
        out.push(Check::new(
            format!("edge deletion decreases lambda: {name}"),
            worst > 1e-7,
            json!({"lambda": full, "smallest_decrease": worst}),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut worst = f64::INFINITY;
    for _ in 0..30 {
        let k = rng.gen_range(3..=4);
        let n = rng.gen_range(k + 1..=8);
        let all: Vec<Vec<usize>> = (0..n).combinations(k).collect();
        let p = rng.gen_range(0.1..0.6);
        let h = Hypergraph::new(n, k, all.iter().filter(|_| rng.gen_bool(p)).cloned())?;
        let missing: Vec<&Vec<usize>> = all.iter().filter(|e| !h.has_edge(e)).collect();
        if missing.is_empty() {
            continue;
        }
        let bigger = h.with_edge(missing[rng.gen_range(0..missing.len())])?;
        let alpha = k as f64;
        let a = spectral_radius(&h, alpha, opts)?.lambda;
        let b = spectral_radius(&bigger, alpha, opts)?.lambda;
        worst = worst.min(b - a);
    }
    out.push(Check::new("edge addition never decreases lambda (30 random graphs)", worst >= -1e-9, json!({"smallest_change": worst})));
    Ok(out)
}

fn turan_pairs() -> Result<Vec<Check>> {
    let mut out = Vec::new();
    let fam3 = [generalized_triangle(3)?, generalized_fan(3)?, f4()];
    for n in 3..=10 {
        let h = turan_graph(n, 3, 3)?;
        out.push(Check::new(
            format!("turan n={n} l=3 k=3 is T3/Fan3/F4-free and cancellative"),
            is_family_free(&h, &fam3)? && is_cancellative(&h),
            json!({"edges": h.num_edges()}),
        ));
    }
    let f7 = book_f7();
    for n in 4..=10 {
        let h = bipartite_like_complete(n, 2)?;
        out.push(Check::new(format!("b4 n={n} is F7-free"), contains_sub(&h, &f7)?.is_none(), json!({"edges": h.num_edges()})));
    }
    let t4 = generalized_triangle(4)?;
    for n in 4..=10 {
        let h = turan_graph(n, 4, 4)?;
        out.push(Check::new(format!("turan n={n} l=4 k=4 is T4-free"), contains_sub(&h, &t4)?.is_none(), json!({"edges": h.num_edges()})));
    }
    Ok(out)
}

fn bollobas() -> Result<Vec<Check>> {
    let family = [f4(), generalized_triangle(3)?];
    let mut out = Vec::new();
    for n in 5..=6 {
        let r = ex_search(n, 3, &family, &SearchOptions::default())?;
        let t = turan_edge_count(n, 3, 3)?;
        let target = canonical_form(&turan_graph(n, 3, 3)?);
        let iso = r.witnesses.len() == 1 && canonical_form(&r.witnesses[0]) == target;
        out.push(Check::new(
            format!("ex({n}, {{F4, T3}}) equals t(n) with the balanced witness"),
            r.complete && r.optimum.value() == t as f64 && iso,
            json!({"ex": r.optimum.value(), "turan_edges": t as f64, "witnesses": r.witnesses.len(), "nodes": r.nodes_explored}),
        ));
    }
    Ok(out)
}

fn trace_ok(t: &PeelTrace) -> (bool, f64) {
    let mut worst = 0.0f64;
    let mut ok = t.terminated_reason != PeelStop::SolverFailure;
    for (i, s) in t.steps.iter().enumerate() {
        worst = worst.max((s.deleted_value - s.deleted_value_expected).abs());
        ok &= s.lambda_after <= s.lambda_before * (1.0 + 1e-9) + 1e-12;
        if let Some(next) = t.steps.get(i + 1) {
            ok &= next.lambda_before == s.lambda_after && next.n_before + 1 == s.n_before;
        }
    }
    (ok && worst <= 1e-8, worst)
}

fn peeling(opts: &SolverOptions) -> Result<Vec<Check>> {
    let p = PeelParams::new(3.0, 0.3, 2.0 / 9.0, 3)?;
    let planted = turan_graph(9, 3, 3)?.with_isolated(1);
    let t = peel(&planted, &p, 4, opts)?;
    let mut out = vec![Check::new(
        "planted isolated vertex is removed first",
        t.steps.first().is_some_and(|s| s.removed_vertex == 9),
        json!({"steps": t.steps.len(), "first_removed": t.steps.first().map(|s| s.removed_vertex)}),
    )];
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    for run in 0..10 {
        let n = rng.gen_range(6..=9);
        let prob = rng.gen_range(0.15..0.6);
        let h = Hypergraph::new(n, 3, (0..n).combinations(3).filter(|_| rng.gen_bool(prob)))?;
        let p = PeelParams::new(3.0, rng.gen_range(0.05..0.5), 2.0 / 9.0, 3)?;
        let t = peel(&h, &p, 3, opts)?;
        let (ok, worst) = trace_ok(&t);
        out.push(Check::new(
            format!("random trace {run}: step identities hold"),
            ok,
            json!({"n": n, "edges": h.num_edges(), "steps": t.steps.len(), "max_identity_error": worst}),
        ));
    }
    Ok(out)
}

fn growth(opts: &SolverOptions) -> Result<Vec<Check>> {
    let p = PeelParams::new(3.0, 0.3, 2.0 / 9.0, 3)?;
    let seq = (6..=15)
        .map(|n| Ok((n, spectral_radius(&turan_graph(n, 3, 3)?, 3.0, opts)?.lambda)))
        .collect::<Result<Vec<_>>>()?;
    let report = check_growth_condition(&seq, &p)?;
    Ok(report
        .pairs
        .iter()
        .map(|pair| {
            Check::new(
                format!("growth {} -> {}", pair.n - 1, pair.n),
                pair.holds,
                json!({"increment": pair.increment, "required": pair.required, "margin": pair.margin}),
            )
        })
        .collect())
}
