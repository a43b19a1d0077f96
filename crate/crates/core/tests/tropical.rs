use cyldom::tropical::{
    min_diagonal, read_matrix, read_matrix_from, scalar_shift, tropical_matmul, tropical_matmul_with, tropical_pow,
    write_matrix, write_matrix_to, KernelConfig, INF,
};
use cyldom::TropicalMatrix;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn naive(a: &TropicalMatrix, b: &TropicalMatrix) -> TropicalMatrix {
    let n = a.dim();
    let mut c = TropicalMatrix::infinite(n);
    for i in 0..n {
        for j in 0..n {
            let mut best = INF;
            for k in 0..n {
                let (x, y) = (a.get(i, k).raw(), b.get(k, j).raw());
                if x != INF && y != INF {
                    best = best.min(x + y);
                }
            }
            c.as_raw_mut()[i * n + j] = best;
        }
    }
    c
}

fn random_matrix(rng: &mut impl Rng, dim: usize, inf_density: f64, max: u32) -> TropicalMatrix {
    let data = (0..dim * dim).map(|_| if rng.gen_bool(inf_density) { INF } else { rng.gen_range(0..=max) }).collect();
    TropicalMatrix::from_raw(dim, data).unwrap()
}

const CONFIGS: [KernelConfig; 3] = [
    KernelConfig { panel_rows: 1, k_block: 1, j_block: 1 },
    KernelConfig { panel_rows: 3, k_block: 5, j_block: 7 },
    KernelConfig { panel_rows: 256, k_block: 512, j_block: 512 },
];

#[test]
fn blocked_matches_naive_on_random_instances() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    for case in 0..120 {
        let dim = rng.gen_range(1..=64);
        let density = (case % 10) as f64 * 0.1;
        let a = random_matrix(&mut rng, dim, density, 1000);
        let b = random_matrix(&mut rng, dim, density, 1000);
        let want = naive(&a, &b);
        for cfg in &CONFIGS {
            let got = tropical_matmul_with(&a, &b, cfg).unwrap();
            assert_eq!(got.as_raw(), want.as_raw(), "case {case}, dim {dim}, {cfg:?}");
        }
    }
}

#[test]
fn semiring_laws() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..20 {
        let dim = rng.gen_range(1..=20);
        let a = random_matrix(&mut rng, dim, 0.3, 100);
        let b = random_matrix(&mut rng, dim, 0.3, 100);
        let c = random_matrix(&mut rng, dim, 0.3, 100);
        let left = tropical_matmul(&tropical_matmul(&a, &b).unwrap(), &c).unwrap();
        let right = tropical_matmul(&a, &tropical_matmul(&b, &c).unwrap()).unwrap();
        assert_eq!(left.as_raw(), right.as_raw());

        let id = TropicalMatrix::identity(dim);
        assert_eq!(tropical_matmul(&id, &a).unwrap().as_raw(), a.as_raw());
        assert_eq!(tropical_matmul(&a, &id).unwrap().as_raw(), a.as_raw());

        let zero = TropicalMatrix::infinite(dim);
        assert_eq!(tropical_matmul(&zero, &a).unwrap().as_raw(), zero.as_raw());

        // (c ⊗ A) ⊗ B = c ⊗ (A ⊗ B)
        let shifted = tropical_matmul(&scalar_shift(4, &a).unwrap(), &b).unwrap();
        let expect = scalar_shift(4, &tropical_matmul(&a, &b).unwrap()).unwrap();
        assert_eq!(shifted.as_raw(), expect.as_raw());
    }
}

/// Minimum label over every walk of exactly `k` arcs, by explicit enumeration.
fn min_walk(adj: &[Vec<Option<u32>>], from: usize, to: usize, k: usize) -> Option<u32> {
    if k == 0 {
        return (from == to).then_some(0);
    }
    (0..adj.len()).filter_map(|mid| Some(adj[from][mid]? + min_walk(adj, mid, to, k - 1)?)).min()
}

#[test]
fn powers_enumerate_minimum_walks() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..40 {
        let v = rng.gen_range(1..=6);
        let adj: Vec<Vec<Option<u32>>> =
            (0..v).map(|_| (0..v).map(|_| rng.gen_bool(0.5).then(|| rng.gen_range(0..10))).collect()).collect();
        let a = TropicalMatrix::from_rows(&adj).unwrap();
        for k in 1..=5u64 {
            let p = tropical_pow(&a, k, &KernelConfig::default()).unwrap();
            for i in 0..v {
                for j in 0..v {
                    assert_eq!(p.get(i, j).get(), min_walk(&adj, i, j, k as usize), "k={k} ({i},{j})");
                }
            }
        }
    }
}

#[test]
fn tmx_file_round_trip() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let a = random_matrix(&mut rng, 37, 0.4, u32::MAX - 1);
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("a.tmx");
    write_matrix(&a, &path).unwrap();
    let back = read_matrix(&path).unwrap();
    assert_eq!(back, a);
    assert_eq!(min_diagonal(&back), min_diagonal(&a));
}

proptest! {
    #[test]
    fn tmx_bytes_round_trip(dim in 0usize..12, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_matrix(&mut rng, dim, 0.5, 1 << 20);
        let mut buf = Vec::new();
        write_matrix_to(&a, &mut buf).unwrap();
        prop_assert_eq!(buf.len(), 32 + 4 * dim * dim + 4);
        let back = read_matrix_from(&mut buf.as_slice()).unwrap();
        prop_assert_eq!(back, a);
    }

    #[test]
    fn product_is_blocking_independent(
        dim in 1usize..24,
        seed in any::<u64>(),
        panel in 1usize..9,
        kb in 1usize..9,
        jb in 1usize..9,
    ) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_matrix(&mut rng, dim, 0.6, 50);
        let b = random_matrix(&mut rng, dim, 0.2, 50);
        let cfg = KernelConfig { panel_rows: panel, k_block: kb, j_block: jb };
        let got = tropical_matmul_with(&a, &b, &cfg).unwrap();
        let want = naive(&a, &b);
        prop_assert_eq!(got.as_raw(), want.as_raw());
    }

    #[test]
    fn min_never_exceeds_diagonal_path(dim in 1usize..10, seed in any::<u64>()) {
        // A^2[i][i] <= A[i][i] + A[i][i]
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_matrix(&mut rng, dim, 0.3, 1000);
        let sq = tropical_matmul(&a, &a).unwrap();
        for i in 0..dim {
            if let Some(d) = a.get(i, i).get() {
                prop_assert!(sq.get(i, i).get().unwrap() <= 2 * d);
            }
        }
    }
}
