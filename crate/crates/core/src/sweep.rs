//! Seeded random irregular types and a data-parallel consistency sweep over them.

use std::sync::Arc;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::cartan::RootDatum;
use crate::error::{Error, Result};
use crate::fission::{nesting_decomposition, space_a};
use crate::irregular::IrregularType;
use crate::matrix_real::Execution;
use crate::stokes::{singular_directions, stokes_budget, DEFAULT_DIRECTION_TOL};

/// Shape of the random types drawn by [`random_gl_type`].
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct TypeShape {
    pub max_rank: usize,
    pub max_order: usize,
    /// Real and imaginary parts of each entry are drawn from `-bound..=bound`.
    pub bound: i64,
}

impl Default for TypeShape {
    fn default() -> TypeShape {
        TypeShape {
            max_rank: 5,
            max_order: 4,
            bound: 1,
        }
    }
}

/// Gaussian-integer coefficients `[A_1, ..., A_r]` with `n` and `r` uniform in
/// `1..=max`. Small bounds make repeated eigenvalues, and hence several levels, common.
pub fn random_gl_coeffs(rng: &mut ChaCha8Rng, shape: &TypeShape) -> Vec<Vec<(i64, i64)>> {
    let n = rng.gen_range(1..=shape.max_rank);
    let r = rng.gen_range(1..=shape.max_order);
    (0..r)
        .map(|_| {
            (0..n)
                .map(|_| {
                    (
                        rng.gen_range(-shape.bound..=shape.bound),
                        rng.gen_range(-shape.bound..=shape.bound),
                    )
                })
                .collect()
        })
        .collect()
}

pub fn gl_type_from_integers(coeffs: &[Vec<(i64, i64)>]) -> Result<IrregularType> {
    let n = coeffs.first().map(Vec::len).ok_or(Error::TameType)?;
    let datum = Arc::new(RootDatum::gl(n)?);
    let coeffs = coeffs
        .iter()
        .map(|a| {
            a.iter()
                .map(|&(re, im)| Complex64::new(re as f64, im as f64))
                .collect()
        })
        .collect();
    IrregularType::new(datum, coeffs)
}

pub fn random_gl_type(rng: &mut ChaCha8Rng, shape: &TypeShape) -> Result<IrregularType> {
    gl_type_from_integers(&random_gl_coeffs(rng, shape))
}

/// Mismatch counts over a sweep; all zero when every identity holds.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct SweepReport {
    pub types: usize,
    /// `sum_d #R(d) != stokes_budget`.
    pub budget: usize,
    /// Some root in a number of supports other than its degree.
    pub support: usize,
    /// Nesting chain dimension differs from `space_a`.
    pub nesting: usize,
    /// `space_a` differs from `dim G + dim H + sum_d dim Sto_d`.
    pub coordinate: usize,
    /// Pullback by `z -> z^k`, `k <= 4`, does not scale direction counts by `k`.
    pub pullback: usize,
}

impl SweepReport {
    pub fn merge(mut self, other: SweepReport) -> SweepReport {
        self.types += other.types;
        self.budget += other.budget;
        self.support += other.support;
        self.nesting += other.nesting;
        self.coordinate += other.coordinate;
        self.pullback += other.pullback;
        self
    }

    pub fn mismatches(&self) -> usize {
        self.budget + self.support + self.nesting + self.coordinate + self.pullback
    }
}

/// Every consistency identity on a single type.
pub fn check_type(q: &IrregularType) -> Result<SweepReport> {
    let report = singular_directions(q, DEFAULT_DIRECTION_TOL)?;
    let degrees = q.degrees();
    let sto: usize = report.stokes_dims().iter().sum();
    let mut out = SweepReport {
        types: 1,
        ..SweepReport::default()
    };
    out.budget = usize::from(sto != stokes_budget(q) || report.budget != sto);
    out.support = usize::from(
        degrees
            .iter()
            .enumerate()
            .any(|(i, &d)| report.occurrences(i) != d),
    );
    let direct = space_a(q);
    if !q.is_tame() {
        out.nesting = usize::from(nesting_decomposition(q)?.dim() != direct.dim());
    }
    let g = q.datum().dim_g();
    let h = q.centralizer().dim();
    out.coordinate = usize::from(direct.dim() != (g + h + sto) as i64);
    for k in 2..=4 {
        let pulled = singular_directions(&q.pullback(k), DEFAULT_DIRECTION_TOL)?;
        if (0..degrees.len()).any(|i| pulled.occurrences(i) != k * report.occurrences(i)) {
            out.pullback = 1;
        }
    }
    Ok(out)
}

/// Draw `count` random types (type `i` from the stream seeded by `seed + i`)
/// and check each one.
pub fn sweep_random_types(count: usize, shape: &TypeShape, seed: u64, exec: Execution) -> Result<SweepReport> {
    let one = |i: usize| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(i as u64));
        check_type(&random_gl_type(&mut rng, shape)?)
    };
    match exec {
        #[cfg(feature = "parallel")]
        Execution::Parallel => {
            use rayon::prelude::*;
            (0..count)
                .into_par_iter()
                .map(one)
                .try_reduce(SweepReport::default, |a, b| Ok(a.merge(b)))
        }
        _ => (0..count).try_fold(SweepReport::default(), |acc, i| Ok(acc.merge(one(i)?))),
    }
}
