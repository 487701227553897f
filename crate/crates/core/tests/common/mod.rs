#![allow(dead_code)]

use std::sync::Arc;

use num_complex::Complex64;
use proptest::prelude::*;

use wildchar::irregular::{real_vector, CartanVector};
use wildchar::sweep::gl_type_from_integers;
use wildchar::{IrregularCurve, IrregularType, MarkedPoint, RootDatum};

/// Integer coefficient lists `[A_1..A_r]` for GL(n), entries `a + bi`.
pub fn int_coeffs(max_n: usize, max_r: usize, bound: i64) -> impl Strategy<Value = Vec<Vec<(i64, i64)>>> {
    (1..=max_n, 1..=max_r).prop_flat_map(move |(n, r)| {
        prop::collection::vec(prop::collection::vec((-bound..=bound, -bound..=bound), n), r)
    })
}

pub fn to_type(coeffs: &[Vec<(i64, i64)>]) -> IrregularType {
    gl_type_from_integers(coeffs).unwrap()
}

/// Exact pole order of `(e_i - e_j) o Q`.
pub fn exact_degree(coeffs: &[Vec<(i64, i64)>], i: usize, j: usize) -> usize {
    coeffs
        .iter()
        .enumerate()
        .filter(|(_, a)| a[i] != a[j])
        .map(|(d, _)| d + 1)
        .next_back()
        .unwrap_or(0)
}

/// Roots of GL(n) as index pairs, in datum order.
pub fn gl_pairs(n: usize) -> Vec<(usize, usize)> {
    (0..n)
        .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
        .collect()
}

/// `dim C_G(Q)` for GL(n): sum of squared sizes of the classes of equal columns.
pub fn exact_centralizer_dim(coeffs: &[Vec<(i64, i64)>]) -> usize {
    let n = coeffs[0].len();
    let column = |i: usize| coeffs.iter().map(|a| a[i]).collect::<Vec<_>>();
    let mut seen = vec![false; n];
    let mut total = 0;
    for i in 0..n {
        if seen[i] {
            continue;
        }
        let size = (i..n).filter(|&j| column(j) == column(i)).inspect(|&j| seen[j] = true).count();
        total += size * size;
    }
    total
}

pub fn gl(n: usize) -> Arc<RootDatum> {
    Arc::new(RootDatum::gl(n).unwrap())
}

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn point(label: &str, q: IrregularType) -> MarkedPoint {
    MarkedPoint {
        label: label.to_string(),
        irregular_type: q,
        position: None,
    }
}

pub fn tame_curve(n: usize, genus: usize, m: usize) -> IrregularCurve {
    let points = (0..m)
        .map(|i| point(&format!("p{i}"), IrregularType::tame(gl(n))))
        .collect();
    IrregularCurve::new(genus, points).unwrap()
}

pub fn one_point_curve(n: usize, a: CartanVector) -> IrregularCurve {
    let q = IrregularType::new(gl(n), vec![a]).unwrap();
    IrregularCurve::new(0, vec![point("0", q)]).unwrap()
}

pub fn real(xs: &[f64]) -> CartanVector {
    real_vector(xs)
}
