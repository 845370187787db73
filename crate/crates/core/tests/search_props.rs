use itertools::Itertools;

use spexlab::containment::is_family_free;
use spexlab::hypergraph::*;
use spexlab::search::*;
use spexlab::spectral::{average_bound, spectral_radius, SolverOptions};

fn bollobas() -> Vec<Hypergraph> {
    vec![f4(), generalized_triangle(3).unwrap()]
}

/// Oracle: every labelled subset of edges, checked from scratch.
fn ex_by_enumeration(n: usize, k: usize, family: &[Hypergraph]) -> (usize, Vec<CanonicalForm>) {
    let all: Vec<Vec<usize>> = (0..n).combinations(k).collect();
    assert!(all.len() <= 20);
    let mut best = 0;
    let mut forms = Vec::new();
    for mask in 0u32..(1 << all.len()) {
        let e = mask.count_ones() as usize;
        if e < best {
            continue;
        }
        let h = Hypergraph::new(n, k, all.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, e)| e.clone())).unwrap();
        if !is_family_free(&h, family).unwrap() {
            continue;
        }
        if e > best {
            best = e;
            forms.clear();
        }
        forms.push(canonical_form(&h));
    }
    forms.sort();
    forms.dedup();
    (best, forms)
}

#[test]
fn bollobas_small_cases() {
    let opts = SearchOptions::default();
    for (n, want) in [(4, 2), (5, 4), (6, 8)] {
        let r = ex_search(n, 3, &bollobas(), &opts).unwrap();
        assert_eq!(r.optimum, Optimum::Edges(want));
        assert!(r.complete);
        assert_eq!(r.witnesses.len(), 1);
        assert_eq!(canonical_form(&r.witnesses[0]), canonical_form(&turan_graph(n, 3, 3).unwrap()));
    }
}

#[test]
fn branch_and_bound_matches_plain_enumeration() {
    let opts = SearchOptions::default();
    let cases: Vec<(usize, usize, Vec<Hypergraph>)> = vec![
        (5, 3, bollobas()),
        (6, 3, bollobas()),
        (5, 3, vec![generalized_triangle(3).unwrap()]),
        (6, 3, vec![generalized_triangle(3).unwrap()]),
        (6, 3, vec![matching(3, 2).unwrap()]),
        (5, 3, vec![hyperstar(3, 2).unwrap()]),
        (6, 2, vec![complete(3, 2).unwrap()]),
        (5, 4, vec![]),
    ];
    for (n, k, fam) in cases {
        let r = ex_search(n, k, &fam, &opts).unwrap();
        let (best, forms) = ex_by_enumeration(n, k, &fam);
        assert_eq!(r.optimum, Optimum::Edges(best as u64), "n={n} k={k}");
        let got: Vec<CanonicalForm> = r.witnesses.iter().map(canonical_form).collect();
        assert_eq!(got, forms, "n={n} k={k}");
    }
}

#[test]
fn witnesses_are_free_and_pairwise_non_isomorphic() {
    let fam = vec![matching(3, 2).unwrap()];
    let r = ex_search(6, 3, &fam, &SearchOptions::default()).unwrap();
    assert!(r.witnesses.len() > 1);
    for w in &r.witnesses {
        assert!(is_family_free(w, &fam).unwrap());
        assert_eq!(w.num_edges() as f64, r.optimum.value());
    }
    let forms: Vec<_> = r.witnesses.iter().map(canonical_form).collect();
    assert!(forms.iter().all_unique());
}

#[test]
fn ex_is_monotone() {
    let opts = SearchOptions::default();
    let t3 = vec![generalized_triangle(3).unwrap()];
    let mut last = 0.0;
    for n in 3..=6 {
        let a = ex_search(n, 3, &t3, &opts).unwrap().optimum.value();
        let b = ex_search(n, 3, &bollobas(), &opts).unwrap().optimum.value();
        assert!(b <= a);
        assert!(a >= last);
        last = a;
    }
}

#[test]
fn spex_examples() {
    let opts = SearchOptions::default();
    let r = spex_search(4, 4, &[book_f7()], 4.0, &opts).unwrap();
    assert!((r.optimum.value() - 6.0).abs() < 1e-6);
    assert_eq!(r.witnesses, vec![bipartite_like_complete(4, 2).unwrap()]);

    let r = spex_search(5, 3, &bollobas(), 3.0, &opts).unwrap();
    assert!(r.complete);
    let bound = average_bound(&turan_graph(5, 3, 3).unwrap(), 3.0).unwrap();
    assert!((bound - 4.8).abs() < 1e-12);
    assert!(r.optimum.value() >= bound);

    for k in 2..=4 {
        for alpha in [1.5, 3.0] {
            let r = spex_search(k, k, &[], alpha, &opts).unwrap();
            let want = factorial(k) * (k as f64).powf(-(k as f64) / alpha);
            assert!((r.optimum.value() - want).abs() < 1e-6 * want);
            assert_eq!(r.witnesses.len(), 1);
            assert_eq!(r.witnesses[0].num_edges(), 1);
        }
    }
}

#[test]
fn spex_dominates_the_average_bound_of_the_edge_extremal_graph() {
    let opts = SearchOptions::default();
    for (n, fam) in [(5, bollobas()), (5, vec![generalized_triangle(3).unwrap()]), (6, bollobas())] {
        for alpha in [2.0, 3.0] {
            let ex = ex_search(n, 3, &fam, &opts).unwrap().optimum.value();
            let spex = spex_search(n, 3, &fam, alpha, &opts).unwrap().optimum.value();
            assert!(spex >= 6.0 * ex * (n as f64).powf(-3.0 / alpha) - 1e-9);
        }
    }
}

#[test]
fn spex_witness_lambda_is_reproducible() {
    let opts = SearchOptions::default();
    let r = spex_search(5, 3, &bollobas(), 2.0, &opts).unwrap();
    for w in &r.witnesses {
        let l = spectral_radius(w, 2.0, &SolverOptions::default()).unwrap().lambda;
        assert!((l - r.optimum.value()).abs() <= 1e-6 * l);
    }
}

#[test]
fn unsafe_pruning_is_marked_incomplete_but_agrees_here() {
    let opts = SearchOptions { unsafe_prune: true, ..Default::default() };
    let r = spex_search(5, 3, &bollobas(), 3.0, &opts).unwrap();
    let exact = spex_search(5, 3, &bollobas(), 3.0, &SearchOptions::default()).unwrap();
    assert!((r.optimum.value() - exact.optimum.value()).abs() < 1e-9);
    assert!(!r.complete || r.nodes_explored == exact.nodes_explored);
}

#[test]
fn density_trend_examples() {
    let opts = SearchOptions::default();
    let pts = density_trend(&bollobas(), 3, 4..=6, &opts).unwrap();
    assert_eq!(pts.iter().map(|p| p.ex).collect::<Vec<_>>(), vec![2, 4, 8]);
    assert!((pts[2].density - 0.4).abs() < 1e-12);

    let edge = Hypergraph::new(3, 3, [[0, 1, 2]]).unwrap();
    assert!(density_trend(&[edge], 3, 3..=6, &opts).unwrap().iter().all(|p| p.density == 0.0));

    let t3 = density_trend(&[generalized_triangle(3).unwrap()], 3, 5..=6, &opts).unwrap();
    let both = density_trend(&bollobas(), 3, 5..=6, &opts).unwrap();
    for (a, b) in t3.iter().zip(&both) {
        assert!(a.density >= b.density);
    }
}

#[test]
fn search_result_json_round_trips() {
    let r = ex_search(5, 3, &bollobas(), &SearchOptions::default()).unwrap();
    let s = serde_json::to_string(&r).unwrap();
    assert!(s.contains("\"optimum\":4"));
    let back: SearchResult = serde_json::from_str(&s).unwrap();
    assert_eq!(back, r);
}
