use itertools::Itertools;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use spexlab::hypergraph::*;
use spexlab::spectral::{closed_form_multipartite, spectral_radius, SolverOptions};
use spexlab::stability::*;

const PI3: f64 = 2.0 / 9.0;

fn params(alpha: f64, eps: f64, pi: f64, k: usize) -> PeelParams {
    PeelParams::new(alpha, eps, pi, k).unwrap()
}

fn assert_trace_sane(trace: &PeelTrace, n: usize) {
    for (i, s) in trace.steps.iter().enumerate() {
        assert_eq!(s.n_before, n - i);
        assert!(s.lambda_after <= s.lambda_before * (1.0 + 1e-9) + 1e-12);
        assert!((s.deleted_value - s.deleted_value_expected).abs() <= 1e-8 * s.lambda_before.max(1.0));
        if let Some(next) = trace.steps.get(i + 1) {
            assert_eq!(s.lambda_after, next.lambda_before);
        }
    }
    assert_eq!(trace.remaining.len(), n - trace.steps.len());
}

#[test]
fn isolated_vertex_is_peeled_first() {
    let h = turan_graph(9, 3, 3).unwrap().with_isolated(1);
    let p = params(3.0, 0.3, PI3, 3);
    let t = peel(&h, &p, 4, &SolverOptions::default()).unwrap();
    assert_eq!(t.steps[0].removed_vertex, 9);
    assert_eq!(t.steps[0].x_min_alpha, 0.0);
    assert_eq!(t.terminated_reason, PeelStop::DegreeThresholdMet);
    assert_eq!(t.steps.len(), 1);
    assert_trace_sane(&t, 10);
}

#[test]
fn balanced_graph_stops_immediately() {
    let h = turan_graph(9, 3, 3).unwrap();
    assert_eq!(h.min_degree().unwrap(), 9);
    let t = peel(&h, &params(3.0, 0.3, PI3, 3), 4, &SolverOptions::default()).unwrap();
    assert!(t.steps.is_empty());
    assert_eq!(t.terminated_reason, PeelStop::DegreeThresholdMet);
    assert_eq!(t.remaining, (0..9).collect::<Vec<_>>());
}

#[test]
fn matching_peels_a_bounded_number_of_steps() {
    let h = matching(3, 3).unwrap();
    let t = peel(&h, &params(3.0, 0.1, PI3, 3), 3, &SolverOptions::default()).unwrap();
    assert!(!t.steps.is_empty() && t.steps.len() <= 6);
    assert!(t.steps.iter().all(|s| s.min_degree_before <= 1));
    assert_trace_sane(&t, 9);
}

#[test]
fn peeling_is_deterministic_and_satisfies_step_identities() {
    let mut rng = ChaCha8Rng::seed_from_u64(51);
    let opts = SolverOptions::default();
    for _ in 0..20 {
        let n = rng.gen_range(6..=9);
        let prob = rng.gen_range(0.2..0.7);
        let h = Hypergraph::new(n, 3, (0..n).combinations(3).filter(|_| rng.gen_bool(prob))).unwrap();
        let alpha = [2.0, 3.0, 4.0][rng.gen_range(0..3)];
        let p = params(alpha, rng.gen_range(0.05..0.5), PI3, 3);
        let a = peel(&h, &p, 3, &opts).unwrap();
        let b = peel(&h, &p, 3, &opts).unwrap();
        assert_eq!(a, b);
        assert_trace_sane(&a, n);
        assert_ne!(a.terminated_reason, PeelStop::SolverFailure);
    }
}

#[test]
fn trace_serializations() {
    let h = matching(3, 3).unwrap();
    let t = peel(&h, &params(3.0, 0.1, PI3, 3), 3, &SolverOptions::default()).unwrap();
    let json = t.to_json_lines();
    let lines: Vec<&str> = json.lines().collect();
    assert_eq!(lines.len(), t.steps.len());
    for l in lines {
        let v: serde_json::Value = serde_json::from_str(l).unwrap();
        assert!(v.get("lambda_before").is_some() && v.get("ratio_bound_ok").is_some());
    }
    assert_eq!(t.to_csv().lines().count(), t.steps.len() + 1);
}

#[test]
fn peel_rejects_bad_input() {
    let h = turan_graph(6, 3, 3).unwrap();
    let opts = SolverOptions::default();
    assert!(peel(&h, &params(3.0, 0.3, PI3, 4), 4, &opts).is_err());
    assert!(peel(&h, &params(3.0, 0.3, PI3, 3), 6, &opts).is_err());
    assert!(peel(&h, &params(3.0, 0.3, PI3, 3), 2, &opts).is_err());
}

#[test]
fn turan_min_degree_clears_threshold() {
    for k in 3..=4 {
        for n in 3 * k..=24 {
            let delta = (turan_edge_count(n, k, k).unwrap() - turan_edge_count(n - 1, k, k).unwrap()) as usize;
            assert_eq!(delta, turan_graph(n, k, k).unwrap().min_degree().unwrap());
            let pi = factorial(k) / (k as f64).powi(k as i32);
            for eps in [0.1, 0.2, 0.5, 0.9] {
                let thr = degree_threshold(n, &params(2.0, eps, pi, k)).unwrap();
                assert!(delta as f64 >= thr, "k={k} n={n} eps={eps}");
            }
        }
    }
}

#[test]
fn spectral_lower_bound_on_balanced_graphs() {
    let p = params(3.0, 0.3, PI3, 3);
    let seq: Vec<(usize, f64)> = (6..=15).step_by(3).map(|n| (n, closed_form_multipartite(n, 3, 3, 3.0).unwrap())).collect();
    let rows = check_spectral_lower_bound(&seq, &p).unwrap();
    assert!(rows.iter().all(|r| r.holds && r.margin > 0.0));
    assert!((rows[1].lambda - 18.0).abs() < 1e-9);
}

#[test]
fn min_entry_examples() {
    let opts = SolverOptions::default();
    let p = params(3.0, 0.3, PI3, 3);
    let h = turan_graph(6, 3, 3).unwrap();
    let r = check_min_entry_bound(&h, &p, &spectral_radius(&h, 3.0, &opts).unwrap(), None).unwrap();
    assert!((r.x_min_alpha - 1.0 / 6.0).abs() < 1e-10);
    assert!(!r.conclusion && !r.degree_premise && !r.finding);

    let h = turan_graph(6, 3, 3).unwrap().with_isolated(1);
    let r = check_min_entry_bound(&h, &p, &spectral_radius(&h, 3.0, &opts).unwrap(), None).unwrap();
    assert_eq!(r.x_min_alpha, 0.0);
    assert!(r.conclusion && r.degree_premise);

    let mut edges = hyperstar(3, 5).unwrap().edges().to_vec();
    edges.extend([vec![1, 3, 5], vec![2, 4, 6]]);
    let h = Hypergraph::new(11, 3, edges).unwrap();
    let res = spectral_radius(&h, 3.0, &opts).unwrap();
    let a = check_min_entry_bound(&h, &p, &res, Some(0.0)).unwrap();
    let b = check_min_entry_bound(&h, &p, &res, Some(res.lambda * 2.0)).unwrap();
    assert!(a.lambda_premise && !b.lambda_premise && !b.finding);
    assert!((a.margin - (a.bound - a.x_min_alpha)).abs() < 1e-15);
}

#[test]
fn removal_ratio_examples() {
    let opts = SolverOptions::default();
    let p = params(3.0, 0.3, PI3, 3);
    let h = turan_graph(7, 3, 3).unwrap().with_isolated(1);
    let r = check_removal_ratio(&h, 7, &p, &opts).unwrap();
    assert!(r.applicable && r.converged);
    assert!((r.ratio - 1.0).abs() < 1e-10);
    assert!(r.stated_margin >= 0.0 && r.proof_margin >= -1e-10);

    let h = turan_graph(7, 3, 3).unwrap();
    for v in 0..7 {
        let r = check_removal_ratio(&h, v, &p, &opts).unwrap();
        assert_eq!(r.applicable, r.x_alpha < (1.0 - p.eps_double_prime()) / 7.0);
        assert!((r.deleted_value - r.deleted_value_expected).abs() < 1e-8);
    }

    // a pendant vertex on a dense core
    let mut edges: Vec<Vec<usize>> = (0..7).combinations(3).filter(|e| e.iter().sum::<usize>() % 2 == 0).collect();
    edges.push(vec![0, 1, 7]);
    let h = Hypergraph::new(8, 3, edges).unwrap();
    let r = check_removal_ratio(&h, 7, &p, &opts).unwrap();
    assert!(r.applicable);
    assert!(r.proof_margin >= -1e-9, "{r:?}");
    assert!(r.stated_margin >= 0.0, "{r:?}");
}

#[test]
fn klm_on_balanced_sequences() {
    let ns = 6..=15;
    let ex: Vec<(usize, u64)> = ns.clone().map(|n| (n, turan_edge_count(n, 3, 3).unwrap() as u64)).collect();
    let lam: Vec<(usize, f64)> = ns
        .map(|n| (n, spectral_radius(&turan_graph(n, 3, 3).unwrap(), 3.0, &SolverOptions::default()).unwrap().lambda))
        .collect();
    let r = check_klm_conditions(&ex, &lam, PI3, 3, 3.0, 1.0).unwrap();
    assert!(r.smallest_c.is_finite() && r.smallest_c > 0.0);
    let again = check_klm_conditions(&ex, &lam, PI3, 3, 3.0, r.smallest_c * 1.0001).unwrap();
    assert!(again.all_hold);
}

#[test]
fn growth_report_on_b4_closed_forms() {
    use spexlab::spectral::closed_form_b4;
    let p = params(4.0, 0.3, 3.0 / 8.0, 4);
    let seq: Vec<(usize, f64)> = (6..=16).map(|n| (n, closed_form_b4(n, 4.0).unwrap())).collect();
    let r = check_growth_condition(&seq, &p).unwrap();
    assert_eq!(r.pairs.len(), 10);
    for pair in &r.pairs {
        assert!((pair.margin - (pair.increment - pair.required)).abs() < 1e-9);
    }
}
