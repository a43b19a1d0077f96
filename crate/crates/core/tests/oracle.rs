use cyldom::oracle::{
    almost_dominating_sets, brute_force_gamma, brute_force_wasted_min, closed_neighborhood, decode_words, encode_words,
    is_almost_dominating, is_dominating, wasted_outer,
};
use cyldom::transfer::{arc_label, build_transfer_matrix, can_follow};
use cyldom::tropical::{min_diagonal, tropical_pow, KernelConfig};
use cyldom::verify::{closed_word_cycles, verify_properties};
use cyldom::{CylinderDims, VertexSet};

#[test]
fn matrix_minimum_equals_exhaustive_minimum() {
    for r in 2..=6u32 {
        for n in 3..=18 / r {
            let a = build_transfer_matrix(r).unwrap();
            let p = tropical_pow(&a, n as u64, &KernelConfig::default()).unwrap();
            let oracle = brute_force_wasted_min(r, n).unwrap();
            assert_eq!(min_diagonal(&p).get(), Some(oracle.wasted), "r={r} n={n}");
            assert!(is_almost_dominating(&oracle.set));
            assert_eq!(wasted_outer(&oracle.set), oracle.wasted);
        }
    }
}

#[test]
fn all_properties_hold_on_small_strips() {
    for r in 2..=3 {
        for n in 3..=5 {
            for c in verify_properties(r, n).unwrap() {
                assert!(c.passed, "r={r} n={n} {}: {}", c.name, c.detail);
            }
        }
    }
}

#[test]
fn walk_labels_sum_to_waste() {
    for (r, n) in [(2, 6), (3, 5), (4, 4)] {
        for s in almost_dominating_sets(r, n).unwrap() {
            let words = encode_words(&s).unwrap();
            let total: u32 =
                (0..words.len()).map(|j| arc_label(&words[j], &words[(j + 1) % words.len()]).unwrap()).sum();
            assert_eq!(total, wasted_outer(&s));
        }
    }
}

#[test]
fn decoded_cycles_are_almost_dominating() {
    let cycles = closed_word_cycles(3, 4).unwrap();
    assert_eq!(cycles.len(), almost_dominating_sets(3, 4).unwrap().len());
    for c in cycles {
        for j in 0..c.len() {
            assert!(can_follow(&c[j], &c[(j + 1) % c.len()]).unwrap());
        }
        let s = decode_words(&c).unwrap();
        assert!(is_almost_dominating(&s));
        assert_eq!(encode_words(&s).unwrap(), c);
    }
}

/// γ(P_2 □ C_n) from the literature on ladders with a cycle.
fn gamma_p2(n: u32) -> u32 {
    if n % 4 == 2 {
        n / 2 + 1
    } else {
        n.div_ceil(2)
    }
}

#[test]
fn gamma_matches_closed_forms() {
    for n in 3..=12 {
        assert_eq!(brute_force_gamma(CylinderDims::new(2, n).unwrap()).unwrap(), gamma_p2(n), "n={n}");
    }
    // no two closed neighbourhoods cover P_3 □ C_3
    assert_eq!(brute_force_gamma(CylinderDims::new(3, 3).unwrap()).unwrap(), 3);
}

#[test]
fn efficient_set_on_two_rows() {
    // disjoint closed neighbourhoods of size 4 tile P_2 □ C_4
    let s = VertexSet::from_vertices(2, 4, [(0, 0), (1, 2)]).unwrap();
    assert!(is_dominating(&s));
    let n = closed_neighborhood(&s, false);
    assert_eq!(n.len(), 8);
    assert_eq!(brute_force_gamma(CylinderDims::new(2, 8).unwrap()).unwrap(), 4);
}

#[test]
fn oracle_rejects_large_instances() {
    assert!(brute_force_wasted_min(4, 5).is_err());
    assert!(brute_force_gamma(CylinderDims::new(5, 5).unwrap()).is_err());
}
