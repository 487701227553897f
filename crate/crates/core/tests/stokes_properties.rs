mod common;

use std::f64::consts::{PI, TAU};

use proptest::prelude::*;

use common::*;
use wildchar::stokes::{rays_of_linear_type, singular_directions, stokes_budget, DEFAULT_DIRECTION_TOL};
use wildchar::Root;

fn angle_close(a: f64, b: f64) -> bool {
    let d = (a - b).rem_euclid(TAU);
    d.min(TAU - d) < 1e-9
}

fn raw_angles(report: &wildchar::stokes::StokesReport, index: usize) -> Vec<f64> {
    let mut v: Vec<f64> = report
        .directions
        .iter()
        .flat_map(|d| d.support.iter())
        .filter(|s| s.root_index == index)
        .map(|s| s.raw_angle)
        .collect();
    v.sort_by(f64::total_cmp);
    v
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn counts_match_exact_degrees(coeffs in int_coeffs(5, 4, 2)) {
        let q = to_type(&coeffs);
        let n = coeffs[0].len();
        let report = singular_directions(&q, DEFAULT_DIRECTION_TOL).unwrap();
        let exact: Vec<usize> = gl_pairs(n).into_iter().map(|(i, j)| exact_degree(&coeffs, i, j)).collect();
        let total: usize = report.stokes_dims().iter().sum();
        prop_assert_eq!(total, exact.iter().sum::<usize>());
        prop_assert_eq!(stokes_budget(&q), total);
        prop_assert_eq!(report.halo_punctures, report.directions.len());
        for (index, &d) in exact.iter().enumerate() {
            prop_assert_eq!(report.occurrences(index), d);
        }
    }

    #[test]
    fn pullback_multiplies_counts(coeffs in int_coeffs(4, 3, 2), k in 1usize..=4) {
        let q = to_type(&coeffs);
        let base = singular_directions(&q, DEFAULT_DIRECTION_TOL).unwrap();
        let pulled = singular_directions(&q.pullback(k), DEFAULT_DIRECTION_TOL).unwrap();
        for (index, (i, j)) in gl_pairs(coeffs[0].len()).into_iter().enumerate() {
            prop_assert_eq!(pulled.occurrences(index), k * base.occurrences(index));
            prop_assert_eq!(pulled.occurrences(index), k * exact_degree(&coeffs, i, j));
        }
    }

    #[test]
    fn negated_root_rotates_by_pi_over_k(coeffs in int_coeffs(4, 3, 2)) {
        let q = to_type(&coeffs);
        let n = coeffs[0].len();
        let report = singular_directions(&q, DEFAULT_DIRECTION_TOL).unwrap();
        let pairs = gl_pairs(n);
        for (index, &(i, j)) in pairs.iter().enumerate() {
            let k = exact_degree(&coeffs, i, j);
            if k == 0 {
                continue;
            }
            let neg = pairs.iter().position(|&p| p == (j, i)).unwrap();
            let mine = raw_angles(&report, index);
            let theirs = raw_angles(&report, neg);
            prop_assert_eq!(mine.len(), k);
            for a in &mine {
                let shifted = a + PI / k as f64;
                prop_assert!(theirs.iter().any(|&b| angle_close(shifted, b)));
            }
        }
    }

    #[test]
    fn one_level_regular_matches_rays(
        vals in prop::collection::vec((-3i64..=3, -3i64..=3), 2..=4),
        k in 1usize..=3,
    ) {
        let n = vals.len();
        let distinct = (0..n).all(|i| (0..i).all(|j| vals[i] != vals[j]));
        prop_assume!(distinct);
        let a: Vec<_> = vals.iter().map(|&(x, y)| c(x as f64, y as f64)).collect();
        let neg: Vec<_> = a.iter().map(|x| -x).collect();
        let rays = rays_of_linear_type(&a, &gl(n)).unwrap();
        let q = wildchar::IrregularType::monomial(gl(n), neg, k).unwrap();
        let report = singular_directions(&q, DEFAULT_DIRECTION_TOL).unwrap();
        // each ray at angle phi lifts to k directions (phi + 2 pi j)/k with the same support
        let mut lifted: Vec<(f64, Vec<Root>)> = Vec::new();
        for (d, roots) in &rays {
            for j in 0..k {
                lifted.push((((d.angle() + TAU * j as f64) / k as f64).rem_euclid(TAU), roots.clone()));
            }
        }
        prop_assert_eq!(lifted.len(), report.directions.len());
        for (angle, roots) in lifted {
            let hit = report.directions.iter().find(|d| angle_close(d.direction.angle(), angle));
            let hit = hit.expect("lifted ray present");
            let mut got: Vec<Root> = hit.roots().cloned().collect();
            let mut want = roots;
            got.sort();
            want.sort();
            prop_assert_eq!(got, want);
        }
    }
}

#[test]
fn budget_examples() {
    assert_eq!(stokes_budget(&to_type(&[vec![(1, 0), (0, 0), (0, 0)], vec![(1, 0), (1, 0), (0, 0)]])), 10);
    assert_eq!(stokes_budget(&to_type(&[vec![(0, 0), (0, 0)], vec![(1, 0), (0, 0)]])), 4);
}

#[test]
fn rays_with_imaginary_entry() {
    let rays = rays_of_linear_type(&vec![c(1.0, 0.0), c(0.0, 1.0), c(0.0, 0.0)], &gl(3)).unwrap();
    let mut angles: Vec<f64> = rays.iter().map(|(d, _)| d.angle()).collect();
    angles.sort_by(f64::total_cmp);
    let mut want: Vec<f64> = [0.0, PI / 2.0, PI, 3.0 * PI / 2.0, c(1.0, -1.0).arg(), c(-1.0, 1.0).arg()]
        .iter()
        .map(|a: &f64| a.rem_euclid(TAU))
        .collect();
    want.sort_by(f64::total_cmp);
    assert_eq!(angles.len(), 6);
    for (a, b) in angles.iter().zip(&want) {
        assert!(angle_close(*a, *b), "{a} vs {b}");
    }
    assert!(rays.iter().all(|(_, roots)| roots.len() == 1));
}
