use num_complex::Complex64;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use wildchar::matrix_real::{
    big_cell_factor, char_poly, condition, covering_maps, opp_intersection_local_dim, random_gl, random_gstar_point,
    random_levi, rel_residual, sample_fission_point, Blocks, CMatrix,
};

fn inv(m: &CMatrix) -> CMatrix {
    m.clone().try_inverse().unwrap()
}

fn block_configs() -> impl Strategy<Value = (usize, Vec<Vec<usize>>)> {
    prop_oneof![
        Just((2, vec![vec![0], vec![1]])),
        Just((3, vec![vec![0, 1], vec![2]])),
        Just((3, vec![vec![0], vec![1], vec![2]])),
        Just((4, vec![vec![0, 1], vec![2, 3]])),
        Just((4, vec![vec![0], vec![1, 2, 3]])),
    ]
}

/// Magnitudes of the leading principal minors, from pivoted determinants.
fn leading_minor_magnitudes(m: &CMatrix) -> Vec<f64> {
    (1..=m.nrows())
        .map(|k| m.view((0, 0), (k, k)).into_owned().determinant().norm())
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn moment_map_is_equivariant((n, blocks) in block_configs(), r in 1usize..=3, seed in any::<u64>()) {
        let p = sample_fission_point(n, &blocks, r, seed).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
        let b = Blocks::new(n, blocks.clone()).unwrap();
        let g = random_gl(&mut rng, n);
        let k = random_levi(&mut rng, &b);
        let (mu_g, mu_h) = p.moment_map().unwrap();
        let (mu_g1, mu_h1) = p.act(&g, &k).unwrap().moment_map().unwrap();
        let scale = condition(&p.c) * condition(&p.h) * condition(&g) * condition(&k);
        prop_assert!(rel_residual(&mu_g1, &(&g * &mu_g * inv(&g))) <= 1e-9 * scale);
        prop_assert!(rel_residual(&mu_h1, &(&k * &mu_h * inv(&k))) <= 1e-9 * scale);
    }

    #[test]
    fn char_poly_is_constant_on_orbits((n, blocks) in block_configs(), seed in any::<u64>()) {
        let p = sample_fission_point(n, &blocks, 2, seed).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed.rotate_left(17));
        let b = Blocks::new(n, blocks.clone()).unwrap();
        let (mu, _) = p.moment_map().unwrap();
        let base = char_poly(&mu);
        let mut q = p.clone();
        for _ in 0..3 {
            let g = random_gl(&mut rng, n);
            let k = random_levi(&mut rng, &b);
            let scale = condition(&g) * condition(&q.c) * condition(&q.h);
            q = q.act(&g, &k).unwrap();
            let (mu_q, _) = q.moment_map().unwrap();
            let cp = char_poly(&mu_q);
            let size = base.iter().map(|c| c.norm()).fold(1.0, f64::max);
            for (a, b) in cp.iter().zip(&base) {
                prop_assert!((a - b).norm() <= 1e-9 * size * scale, "{a} vs {b}");
            }
        }
    }

    #[test]
    fn ldu_reconstructs_and_matches_minors(seed in any::<u64>(), n in 1usize..=5) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = random_gl(&mut rng, n);
        if let Some(f) = big_cell_factor(&m).unwrap() {
            prop_assert!(rel_residual(&f.product(), &m) <= 1e-9 * condition(&m));
            // d_1 ... d_k is the k-th leading minor
            let minors = leading_minor_magnitudes(&m);
            let mut running = Complex64::new(1.0, 0.0);
            for (k, d) in f.diag.iter().enumerate() {
                running *= d;
                prop_assert!((running.norm() - minors[k]).abs() <= 1e-8 * minors[k].max(1.0) * condition(&m));
            }
        }
    }
}

#[test]
fn delta_identity_and_cell_roundtrip() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for trial in 0..1000 {
        let n = 2 + trial % 3;
        let q = random_gstar_point(&mut rng, n);
        let cov = covering_maps(&q).unwrap();
        assert!(cov.delta_defect() <= 1e-12);
        let f = big_cell_factor(&cov.gcirc).unwrap().expect("gcirc in the big cell");
        for i in 0..n {
            let t = cov.t[(i, i)];
            assert!((f.diag[i] - t).norm() <= 1e-9 * t.norm().max(1.0));
        }
        // the unipotent parts are u-^{-1} and u+
        assert!(rel_residual(&f.upper, &q.u_plus) <= 1e-9);
        assert!(rel_residual(&f.lower, &inv(&q.u_minus)) <= 1e-9);
    }
}

#[test]
fn random_matrices_land_in_big_cell() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let total = 10_000;
    let mut inside = 0;
    for i in 0..total {
        let m = random_gl(&mut rng, 2 + i % 4);
        if big_cell_factor(&m).unwrap().is_some() {
            inside += 1;
        }
    }
    assert!(inside as f64 >= (1.0 - 1e-3) * total as f64, "{inside}/{total}");
}

#[test]
fn opposite_intersection_has_root_count_dimension() {
    for (n, roots) in [(2, 2), (3, 6)] {
        for seed in 0..20 {
            let ld = opp_intersection_local_dim(n, seed).unwrap();
            assert_eq!(ld.dim, roots);
            assert_eq!(ld.param_rank, roots);
        }
    }
}
