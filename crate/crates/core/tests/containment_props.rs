use itertools::Itertools;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use spexlab::containment::*;
use spexlab::hypergraph::*;

fn from_mask(n: usize, k: usize, all: &[Vec<usize>], mask: u64) -> Hypergraph {
    Hypergraph::new(n, k, all.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, e)| e.clone())).unwrap()
}

/// Oracle: try every injective map.
fn contains_by_brute_force(h: &Hypergraph, f: &Hypergraph) -> bool {
    (0..h.n()).permutations(f.n()).any(|map| {
        f.edges().iter().all(|e| h.has_edge(&e.iter().map(|&v| map[v]).collect::<Vec<_>>()))
    })
}

#[test]
fn cancellative_iff_f4_and_t3_free_on_five_vertices() {
    let all: Vec<Vec<usize>> = (0..5).combinations(3).collect();
    let family = [f4(), generalized_triangle(3).unwrap()];
    for mask in 0..(1u64 << all.len()) {
        let h = from_mask(5, 3, &all, mask);
        assert_eq!(is_cancellative(&h), is_family_free(&h, &family).unwrap(), "{h:?}");
    }
}

#[test]
fn cancellative_iff_f4_and_t3_free_on_random_graphs() {
    let mut rng = ChaCha8Rng::seed_from_u64(41);
    let family = [f4(), generalized_triangle(3).unwrap()];
    for _ in 0..500 {
        let n = rng.gen_range(6..=7);
        let p = rng.gen_range(0.05..0.5);
        let h = Hypergraph::new(n, 3, (0..n).combinations(3).filter(|_| rng.gen_bool(p))).unwrap();
        assert_eq!(is_cancellative(&h), is_family_free(&h, &family).unwrap());
    }
}

#[test]
fn embeddings_agree_with_brute_force() {
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    let patterns = [f4(), generalized_triangle(3).unwrap(), matching(3, 2).unwrap(), hyperstar(3, 2).unwrap()];
    for _ in 0..200 {
        let n = rng.gen_range(4..=7);
        let p = rng.gen_range(0.1..0.6);
        let h = Hypergraph::new(n, 3, (0..n).combinations(3).filter(|_| rng.gen_bool(p))).unwrap();
        for f in &patterns {
            let found = contains_sub(&h, f).unwrap();
            if let Some(e) = &found {
                assert!(e.verify(&h, f));
            }
            assert_eq!(found.is_some(), contains_by_brute_force(&h, f));
        }
    }
}

#[test]
fn cancellative_graphs_avoid_generalized_triangles() {
    let mut rng = ChaCha8Rng::seed_from_u64(43);
    for k in [3, 4] {
        let tk = generalized_triangle(k).unwrap();
        let mut found = 0;
        while found < 60 {
            let n = rng.gen_range(2 * k - 1..=2 * k + 2);
            let p = rng.gen_range(0.02..0.3);
            let h = Hypergraph::new(n, k, (0..n).combinations(k).filter(|_| rng.gen_bool(p))).unwrap();
            if h.num_edges() < 2 || !is_cancellative(&h) {
                continue;
            }
            found += 1;
            assert!(contains_sub(&h, &tk).unwrap().is_none());
        }
    }
}

#[test]
fn paired_constructions_are_free() {
    // book on B_4
    assert!(contains_sub(&bipartite_like_complete(10, 2).unwrap(), &book_f7()).unwrap().is_none());
    assert!(contains_sub(&turan_graph(8, 3, 3).unwrap(), &generalized_triangle(3).unwrap()).unwrap().is_none());
    assert!(is_family_free(&turan_graph(9, 3, 3).unwrap(), &[generalized_fan(3).unwrap()]).unwrap());
    // and the free-ness is not vacuous: the complete graph contains them
    assert!(contains_sub(&complete(7, 4).unwrap(), &book_f7()).unwrap().is_some());
    assert!(contains_sub(&complete(7, 3).unwrap(), &generalized_fan(3).unwrap()).unwrap().is_some());
}

fn arb_graph() -> impl Strategy<Value = Hypergraph> {
    (4usize..=7).prop_flat_map(|n| {
        let all: Vec<Vec<usize>> = (0..n).combinations(3).collect();
        proptest::collection::vec(any::<bool>(), all.len()).prop_map(move |m| {
            Hypergraph::new(n, 3, all.iter().zip(&m).filter(|(_, &b)| b).map(|(e, _)| e.clone())).unwrap()
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn containment_is_reflexive(h in arb_graph()) {
        let e = contains_sub(&h, &h).unwrap();
        prop_assert!(e.is_some_and(|e| e.verify(&h, &h)));
    }

    #[test]
    fn containment_is_monotone_in_pattern_edges(h in arb_graph(), f in arb_graph(), drop in any::<prop::sample::Index>()) {
        prop_assume!(f.num_edges() > 0);
        if contains_sub(&h, &f).unwrap().is_some() {
            let smaller = f.without_edge(drop.index(f.num_edges()));
            prop_assert!(contains_sub(&h, &smaller).unwrap().is_some());
        }
    }
}
