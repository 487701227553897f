//! The `GL(n)` matrix model: points of fission spaces with their moment maps
//! and group action, the big cell `U- T U+`, the dual group `G*` with its
//! coverings, and a randomized harness checking the identities that tie
//! them together.

// `!(x <= tol)` is deliberate throughout: NaN must fail a check.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::collections::BTreeMap;
use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::cartan::LeviDatum;
use crate::error::{Error, Result};

pub type CMatrix = DMatrix<Complex64>;

pub const DEFAULT_TOL: f64 = 1e-9;
/// The `k`-th leading minor is the product of the first `k` pivots; a pivot
/// counts as zero when it is below `MINOR_REL_TOL * (|L||U|)_kk`, the size
/// of the terms that cancelled to produce it. Unlike a cutoff in `|M|^k`
/// this is unaffected by a wide spread of diagonal scales.
pub const MINOR_REL_TOL: f64 = 1e-9;
/// Resample random group elements whose determinant is smaller than this.
pub const MIN_SAMPLE_DET: f64 = 1e-6;
/// Matrices with `sigma_min <= SINGULAR_REL_TOL * sigma_max` are singular.
pub const SINGULAR_REL_TOL: f64 = 1e-13;
/// Relative singular-value cutoff for numeric ranks.
pub const RANK_CUTOFF: f64 = 1e-7;

const ONE: Complex64 = Complex64 { re: 1.0, im: 0.0 };
const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };

/// An ordered partition of `0..n`; block order fixes which unipotent
/// radical is "upper".
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Blocks {
    blocks: Vec<Vec<usize>>,
    #[serde(skip)]
    block_of: Vec<usize>,
}

impl Blocks {
    pub fn new(n: usize, blocks: Vec<Vec<usize>>) -> Result<Blocks> {
        if n == 0 {
            return Err(Error::ZeroRank);
        }
        let mut block_of = vec![usize::MAX; n];
        for (b, block) in blocks.iter().enumerate() {
            if block.is_empty() {
                return Err(Error::InvalidPartition("empty block".into()));
            }
            for &i in block {
                if i >= n {
                    return Err(Error::InvalidPartition(format!("index {} out of range 1..{n}", i + 1)));
                }
                if block_of[i] != usize::MAX {
                    return Err(Error::InvalidPartition(format!("index {} repeated", i + 1)));
                }
                block_of[i] = b;
            }
        }
        if let Some(i) = block_of.iter().position(|&b| b == usize::MAX) {
            return Err(Error::InvalidPartition(format!("index {} missing", i + 1)));
        }
        Ok(Blocks { blocks, block_of })
    }

    /// Singleton blocks: the maximal torus.
    pub fn torus(n: usize) -> Result<Blocks> {
        Blocks::new(n, (0..n).map(|i| vec![i]).collect())
    }

    pub fn from_levi(levi: &LeviDatum) -> Result<Blocks> {
        let blocks = levi
            .blocks()
            .ok_or_else(|| Error::Shape("matrix model needs a GL(n) Levi".into()))?;
        Blocks::new(levi.rank(), blocks.to_vec())
    }

    pub fn n(&self) -> usize {
        self.block_of.len()
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    fn upper(&self, i: usize, j: usize) -> bool {
        self.block_of[i] < self.block_of[j]
    }

    fn same(&self, i: usize, j: usize) -> bool {
        self.block_of[i] == self.block_of[j]
    }

    /// Largest entry outside the block diagonal, relative to the matrix size.
    pub fn block_diagonal_defect(&self, m: &CMatrix) -> f64 {
        let n = self.n();
        let off = (0..n)
            .flat_map(|i| (0..n).map(move |j| (i, j)))
            .filter(|&(i, j)| !self.same(i, j))
            .map(|(i, j)| m[(i, j)].norm())
            .fold(0.0, f64::max);
        off / scale(m)
    }

    /// Distance of `m` from the unipotent radical (`upper = true`: entries
    /// only above the block diagonal, identity on it).
    pub fn unipotent_defect(&self, m: &CMatrix, upper: bool) -> f64 {
        let n = self.n();
        let mut worst: f64 = 0.0;
        for i in 0..n {
            for j in 0..n {
                let allowed = if upper { self.upper(i, j) } else { self.upper(j, i) };
                if allowed {
                    continue;
                }
                let target = if i == j { ONE } else { ZERO };
                worst = worst.max((m[(i, j)] - target).norm());
            }
        }
        worst / scale(m)
    }
}

fn scale(m: &CMatrix) -> f64 {
    m.norm().max(1.0)
}

/// `|a - b| / max(1, |b|)` in the Frobenius norm.
pub fn rel_residual(a: &CMatrix, b: &CMatrix) -> f64 {
    (a - b).norm() / scale(b)
}

fn check_square(m: &CMatrix, n: usize, what: &str) -> Result<()> {
    if m.nrows() != n || m.ncols() != n {
        return Err(Error::Shape(format!(
            "{what} is {}x{}, expected {n}x{n}",
            m.nrows(),
            m.ncols()
        )));
    }
    Ok(())
}

fn inverse(m: &CMatrix) -> Result<CMatrix> {
    m.clone().try_inverse().ok_or(Error::Singular)
}

/// A point `(C, S_1..S_2r, h)` of the fission space `G x (U+ x U-)^r x H`.
#[derive(Clone, Debug, PartialEq)]
pub struct FissionPoint {
    pub blocks: Blocks,
    pub c: CMatrix,
    pub s: Vec<CMatrix>,
    pub h: CMatrix,
}

impl FissionPoint {
    /// Checks shapes, invertibility and the unipotent pattern of every `S_i`
    /// (odd indices in `U+`, even in `U-`) to tolerance `tol`.
    pub fn new(blocks: Blocks, c: CMatrix, s: Vec<CMatrix>, h: CMatrix, tol: f64) -> Result<FissionPoint> {
        let n = blocks.n();
        if s.is_empty() || !s.len().is_multiple_of(2) {
            return Err(Error::Shape(format!("need 2r >= 2 Stokes factors, got {}", s.len())));
        }
        check_square(&c, n, "C")?;
        check_square(&h, n, "h")?;
        for (i, si) in s.iter().enumerate() {
            check_square(si, n, &format!("S_{}", i + 1))?;
            if blocks.unipotent_defect(si, i % 2 == 0) > tol {
                return Err(Error::Shape(format!("S_{} has the wrong unipotent pattern", i + 1)));
            }
        }
        if blocks.block_diagonal_defect(&h) > tol {
            return Err(Error::NotBlockDiagonal);
        }
        inverse(&c)?;
        inverse(&h)?;
        Ok(FissionPoint { blocks, c, s, h })
    }

    pub fn r(&self) -> usize {
        self.s.len() / 2
    }

    /// `S_2r ... S_2 S_1`.
    pub fn stokes_product(&self) -> CMatrix {
        let n = self.blocks.n();
        self.s.iter().fold(CMatrix::identity(n, n), |acc, si| si * acc)
    }

    /// `(mu_G, mu_H) = (C^-1 h S_2r ... S_1 C, h^-1)`.
    pub fn moment_map(&self) -> Result<(CMatrix, CMatrix)> {
        let c_inv = inverse(&self.c)?;
        let mu_g = c_inv * &self.h * self.stokes_product() * &self.c;
        Ok((mu_g, inverse(&self.h)?))
    }

    /// `(g, k) . (C, S, h) = (k C g^-1, k S k^-1, k h k^-1)`.
    pub fn act(&self, g: &CMatrix, k: &CMatrix) -> Result<FissionPoint> {
        let n = self.blocks.n();
        check_square(g, n, "g")?;
        check_square(k, n, "k")?;
        if self.blocks.block_diagonal_defect(k) > DEFAULT_TOL {
            return Err(Error::NotBlockDiagonal);
        }
        let g_inv = inverse(g)?;
        let k_inv = inverse(k)?;
        Ok(FissionPoint {
            blocks: self.blocks.clone(),
            c: k * &self.c * g_inv,
            s: self.s.iter().map(|si| k * si * &k_inv).collect(),
            h: k * &self.h * &k_inv,
        })
    }

    /// Largest relative difference between corresponding components.
    pub fn distance(&self, other: &FissionPoint) -> f64 {
        let mut d = rel_residual(&self.c, &other.c).max(rel_residual(&self.h, &other.h));
        for (a, b) in self.s.iter().zip(&other.s) {
            d = d.max(rel_residual(a, b));
        }
        d
    }

    /// How far the `S_i` are from their unipotent radicals.
    pub fn parity_defect(&self) -> f64 {
        self.s
            .iter()
            .enumerate()
            .map(|(i, si)| self.blocks.unipotent_defect(si, i % 2 == 0))
            .fold(0.0, f64::max)
    }
}

fn random_entry(rng: &mut ChaCha8Rng) -> Complex64 {
    Complex64::new(rng.gen_range(-1.0..=1.0), rng.gen_range(-1.0..=1.0))
}

/// A random matrix supported where `mask(i, j)` holds, with `diag` forced
/// on the diagonal when given.
fn random_masked(rng: &mut ChaCha8Rng, n: usize, mask: impl Fn(usize, usize) -> bool, diag: Option<Complex64>) -> CMatrix {
    CMatrix::from_fn(n, n, |i, j| match diag {
        Some(d) if i == j => d,
        _ if mask(i, j) => random_entry(rng),
        _ => ZERO,
    })
}

fn random_invertible(rng: &mut ChaCha8Rng, n: usize, mask: impl Fn(usize, usize) -> bool) -> CMatrix {
    loop {
        let m = random_masked(rng, n, &mask, None);
        if m.determinant().norm() >= MIN_SAMPLE_DET {
            return m;
        }
    }
}

/// A random element of `GL(n)`.
pub fn random_gl(rng: &mut ChaCha8Rng, n: usize) -> CMatrix {
    random_invertible(rng, n, |_, _| true)
}

/// A random invertible block-diagonal matrix.
pub fn random_levi(rng: &mut ChaCha8Rng, blocks: &Blocks) -> CMatrix {
    random_invertible(rng, blocks.n(), |i, j| blocks.same(i, j))
}

/// A random element of `U+` (`upper = true`) or `U-`.
pub fn random_unipotent(rng: &mut ChaCha8Rng, blocks: &Blocks, upper: bool) -> CMatrix {
    random_masked(
        rng,
        blocks.n(),
        |i, j| if upper { blocks.upper(i, j) } else { blocks.upper(j, i) },
        Some(ONE),
    )
}

fn random_point(rng: &mut ChaCha8Rng, blocks: &Blocks, r: usize) -> FissionPoint {
    let n = blocks.n();
    let c = random_gl(rng, n);
    let s = (0..2 * r).map(|i| random_unipotent(rng, blocks, i % 2 == 0)).collect();
    let h = random_levi(rng, blocks);
    FissionPoint {
        blocks: blocks.clone(),
        c,
        s,
        h,
    }
}

/// A deterministic random point: entries uniform in the unit square, `C`
/// and `h` resampled until `|det| >= 1e-6`.
pub fn sample_fission_point(n: usize, blocks: &[Vec<usize>], r: usize, seed: u64) -> Result<FissionPoint> {
    if r == 0 {
        return Err(Error::ZeroOrder);
    }
    let blocks = Blocks::new(n, blocks.to_vec())?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok(random_point(&mut rng, &blocks, r))
}

/// `M = L D U` with `L` unit lower and `U` unit upper triangular.
#[derive(Clone, Debug, PartialEq)]
pub struct Ldu {
    pub lower: CMatrix,
    pub diag: Vec<Complex64>,
    pub upper: CMatrix,
}

impl Ldu {
    pub fn torus(&self) -> CMatrix {
        CMatrix::from_diagonal(&nalgebra::DVector::from_vec(self.diag.clone()))
    }

    pub fn product(&self) -> CMatrix {
        &self.lower * self.torus() * &self.upper
    }
}

/// Gaussian elimination without pivoting; `None` once a leading minor is
/// numerically zero.
fn ldu_no_pivot(m: &CMatrix) -> Option<Ldu> {
    let n = m.nrows();
    let mut u = m.clone();
    let mut lower = CMatrix::identity(n, n);
    for k in 0..n {
        let p = u[(k, k)];
        let cancelled: f64 = (0..k).map(|j| lower[(k, j)].norm() * u[(j, k)].norm()).sum();
        if !(p.norm() > MINOR_REL_TOL * (p.norm() + cancelled)) {
            return None;
        }
        for i in k + 1..n {
            let l = u[(i, k)] / p;
            lower[(i, k)] = l;
            for j in k..n {
                let ukj = u[(k, j)];
                u[(i, j)] -= l * ukj;
            }
        }
    }
    let diag: Vec<Complex64> = (0..n).map(|i| u[(i, i)]).collect();
    let upper = CMatrix::from_fn(n, n, |i, j| if j < i { ZERO } else { u[(i, j)] / diag[i] });
    Some(Ldu { lower, diag, upper })
}

fn check_invertible(m: &CMatrix) -> Result<()> {
    if m.nrows() != m.ncols() || m.nrows() == 0 {
        return Err(Error::Shape(format!("{}x{} is not a square matrix", m.nrows(), m.ncols())));
    }
    let sv = m.clone().singular_values();
    let top = sv.max();
    if !(sv.min() > SINGULAR_REL_TOL * top) {
        return Err(Error::Singular);
    }
    Ok(())
}

/// Factor `M = u- t u+` when `M` lies in the big cell; `Ok(None)` when some
/// leading principal minor vanishes.
pub fn big_cell_factor(m: &CMatrix) -> Result<Option<Ldu>> {
    check_invertible(m)?;
    Ok(ldu_no_pivot(m))
}

fn flip(m: &CMatrix) -> CMatrix {
    let n = m.nrows();
    CMatrix::from_fn(n, n, |i, j| m[(n - 1 - i, n - 1 - j)])
}

/// `M = U D L` with `U` unit upper and `L` unit lower triangular.
#[derive(Clone, Debug, PartialEq)]
pub struct Udl {
    pub upper: CMatrix,
    pub diag: Vec<Complex64>,
    pub lower: CMatrix,
}

impl Udl {
    pub fn product(&self) -> CMatrix {
        let d = CMatrix::from_diagonal(&nalgebra::DVector::from_vec(self.diag.clone()));
        &self.upper * d * &self.lower
    }
}

/// `M = u+ t u-`, through the antidiagonal flip of an LDU factorization;
/// exists when all trailing principal minors are nonzero.
pub fn ul_factor(m: &CMatrix) -> Option<Udl> {
    let f = ldu_no_pivot(&flip(m))?;
    let n = m.nrows();
    Some(Udl {
        upper: flip(&f.lower),
        diag: (0..n).map(|i| f.diag[n - 1 - i]).collect(),
        lower: flip(&f.upper),
    })
}

/// Whether `M` lies in `(U+ U-) cap (U- T U+)`.
pub fn opp_intersection_test(m: &CMatrix) -> Result<bool> {
    check_invertible(m)?;
    let Some(ul) = ul_factor(m) else {
        return Ok(false);
    };
    if ul.diag.iter().any(|d| (d - ONE).norm() > DEFAULT_TOL) {
        return Ok(false);
    }
    Ok(ldu_no_pivot(m).is_some())
}

/// A point `(u+, Lambda, u-)` of the covering `U+ x t x U-` of `G*`.
#[derive(Clone, Debug, PartialEq)]
pub struct GStarPoint {
    pub u_plus: CMatrix,
    pub lambda: CMatrix,
    pub u_minus: CMatrix,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Coverings {
    pub b_plus: CMatrix,
    pub b_minus: CMatrix,
    pub gcirc: CMatrix,
    /// `exp(pi i Lambda)`.
    pub s: CMatrix,
    /// `s^2`.
    pub t: CMatrix,
}

/// Diagonal part of a triangular matrix.
pub fn delta(b: &CMatrix) -> CMatrix {
    CMatrix::from_diagonal(&b.diagonal())
}

impl Coverings {
    /// `|delta(b+) delta(b-) - 1|`.
    pub fn delta_defect(&self) -> f64 {
        let n = self.b_plus.nrows();
        (delta(&self.b_plus) * delta(&self.b_minus) - CMatrix::identity(n, n)).norm()
    }
}

/// `(u+, Lambda, u-) -> ((s u+, s^-1 u-), u-^-1 t u+)` with `s = exp(pi i Lambda)`.
pub fn covering_maps(q: &GStarPoint) -> Result<Coverings> {
    let n = q.lambda.nrows();
    check_square(&q.lambda, n, "Lambda")?;
    check_square(&q.u_plus, n, "u+")?;
    check_square(&q.u_minus, n, "u-")?;
    if (0..n).any(|i| (0..n).any(|j| i != j && q.lambda[(i, j)] != ZERO)) {
        return Err(Error::NotDiagonal);
    }
    let borel = Blocks::torus(n)?;
    if borel.unipotent_defect(&q.u_plus, true) > DEFAULT_TOL || borel.unipotent_defect(&q.u_minus, false) > DEFAULT_TOL {
        return Err(Error::Shape("u+ and u- must be unit upper and unit lower triangular".into()));
    }
    let s_diag: Vec<Complex64> = (0..n)
        .map(|i| (Complex64::new(0.0, PI) * q.lambda[(i, i)]).exp())
        .collect();
    let s = CMatrix::from_fn(n, n, |i, j| if i == j { s_diag[i] } else { ZERO });
    let s_inv = CMatrix::from_fn(n, n, |i, j| if i == j { s_diag[i].inv() } else { ZERO });
    let t = &s * &s;
    Ok(Coverings {
        b_plus: &s * &q.u_plus,
        b_minus: &s_inv * &q.u_minus,
        gcirc: inverse(&q.u_minus)? * &t * &q.u_plus,
        s,
        t,
    })
}

/// A random covering point; entries of `u+-` and `Lambda` uniform in the unit square.
pub fn random_gstar_point(rng: &mut ChaCha8Rng, n: usize) -> GStarPoint {
    let borel = Blocks::torus(n).expect("n >= 1");
    GStarPoint {
        u_plus: random_unipotent(rng, &borel, true),
        lambda: random_masked(rng, n, |i, j| i == j, None),
        u_minus: random_unipotent(rng, &borel, false),
    }
}

/// Coefficients `c_0..c_n` of `det(x - M)` (so `c_n = 1`), by Faddeev-LeVerrier.
pub fn char_poly(m: &CMatrix) -> Vec<Complex64> {
    let n = m.nrows();
    let mut coeffs = vec![ZERO; n + 1];
    coeffs[n] = ONE;
    let id = CMatrix::identity(n, n);
    let mut acc = CMatrix::zeros(n, n);
    for k in 1..=n {
        acc = m * &acc + &id * coeffs[n + 1 - k];
        let am = m * &acc;
        coeffs[n - k] = -am.trace() / k as f64;
    }
    coeffs
}

/// Numeric rank: singular values above `RANK_CUTOFF` times the largest.
pub fn numeric_rank(m: &CMatrix) -> usize {
    let sv = m.clone().singular_values();
    let top = sv.iter().cloned().fold(0.0, f64::max);
    if top == 0.0 {
        return 0;
    }
    sv.iter().filter(|&&s| s > RANK_CUTOFF * top).count()
}

/// Local dimension data of `(U+ U-) cap (U- T U+)` at one point.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LocalDim {
    pub n: usize,
    /// Rank of the derivative of `M -> torus part of M = u+ t u-`.
    pub defining_rank: usize,
    /// `n^2 - defining_rank`.
    pub dim: usize,
    /// Rank of the derivative of `(x, y) -> u+(x) u-(y)`.
    pub param_rank: usize,
}

fn ul_torus(m: &CMatrix) -> Option<Vec<Complex64>> {
    ul_factor(m).map(|f| f.diag)
}

/// Complex central differences of the UL torus map and of the `u+ u-`
/// parametrization at a random point of the intersection.
pub fn opp_intersection_local_dim(n: usize, seed: u64) -> Result<LocalDim> {
    if n == 0 {
        return Err(Error::ZeroRank);
    }
    let borel = Blocks::torus(n)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (up, lo, m) = loop {
        let up = random_unipotent(&mut rng, &borel, true);
        let lo = random_unipotent(&mut rng, &borel, false);
        let m = &up * &lo;
        if opp_intersection_test(&m)? {
            break (up, lo, m);
        }
    };
    const STEP: f64 = 1e-6;
    let mut jac = CMatrix::zeros(n, n * n);
    for i in 0..n {
        for j in 0..n {
            let mut plus = m.clone();
            let mut minus = m.clone();
            plus[(i, j)] += STEP;
            minus[(i, j)] -= STEP;
            let (Some(tp), Some(tm)) = (ul_torus(&plus), ul_torus(&minus)) else {
                return Err(Error::Singular);
            };
            for k in 0..n {
                jac[(k, i * n + j)] = (tp[k] - tm[k]) / (2.0 * STEP);
            }
        }
    }
    let defining_rank = numeric_rank(&jac);

    let pos: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
    let mut pjac = CMatrix::zeros(n * n, 2 * pos.len());
    for (col, &(i, j)) in pos.iter().enumerate() {
        // u+ u- is affine in each coordinate, so one-sided differences are exact
        let mut e = CMatrix::zeros(n, n);
        e[(i, j)] = ONE;
        let d_up = &e * &lo;
        let d_lo = &up * e.transpose();
        for a in 0..n {
            for b in 0..n {
                pjac[(a * n + b, col)] = d_up[(a, b)];
                pjac[(a * n + b, pos.len() + col)] = d_lo[(a, b)];
            }
        }
    }
    Ok(LocalDim {
        n,
        defining_rank,
        dim: n * n - defining_rank,
        param_rank: numeric_rank(&pjac),
    })
}

/// How `verify_suite` spreads trials over threads.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Execution {
    Parallel,
    Sequential,
}

impl Default for Execution {
    fn default() -> Execution {
        if cfg!(feature = "parallel") {
            Execution::Parallel
        } else {
            Execution::Sequential
        }
    }
}

pub const CHECKS: [&str; 5] = [
    "composition",
    "det_identity",
    "equivariance",
    "fusion_moment",
    "s_parity",
];

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report {
    pub trials: usize,
    pub failures_by_check: BTreeMap<String, usize>,
    pub max_residual: f64,
    pub seed: u64,
}

impl Report {
    pub fn empty(seed: u64) -> Report {
        Report {
            trials: 0,
            failures_by_check: CHECKS.iter().map(|c| (c.to_string(), 0)).collect(),
            max_residual: 0.0,
            seed,
        }
    }

    /// Associative combination; the seed of `self` is kept.
    pub fn merge(mut self, other: Report) -> Report {
        self.trials += other.trials;
        for (k, v) in other.failures_by_check {
            *self.failures_by_check.entry(k).or_insert(0) += v;
        }
        self.max_residual = self.max_residual.max(other.max_residual);
        self
    }

    pub fn failures(&self) -> usize {
        self.failures_by_check.values().sum()
    }

    fn record(&mut self, check: &str, residual: f64, tol: f64) {
        // NaN counts as a failure
        if !(residual <= tol) {
            *self.failures_by_check.entry(check.to_string()).or_insert(0) += 1;
        }
        if residual.is_nan() {
            self.max_residual = f64::INFINITY;
        } else {
            self.max_residual = self.max_residual.max(residual);
        }
    }
}

fn conj(g: &CMatrix, m: &CMatrix) -> Result<CMatrix> {
    Ok(g * m * inverse(g)?)
}

fn det_residual(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / b.norm().max(1.0)
}

/// Spectral condition number.
pub fn condition(m: &CMatrix) -> f64 {
    let sv = m.clone().singular_values();
    sv.max() / sv.min()
}

/// One trial. Each residual is relative and divided by the condition
/// numbers of the matrices inverted while computing it, so that it measures
/// the identity rather than the conditioning of the sample.
fn run_trial(blocks: &Blocks, r: usize, tol: f64, seed: u64) -> Result<Report> {
    let n = blocks.n();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let p = random_point(&mut rng, blocks, r);
    let (g1, k1) = (random_gl(&mut rng, n), random_levi(&mut rng, blocks));
    let (g2, k2) = (random_gl(&mut rng, n), random_levi(&mut rng, blocks));
    let q = random_point(&mut rng, blocks, r);
    let mut rep = Report::empty(seed);
    rep.trials = 1;
    let (kc, kh, kg1, kg2, kk1, kk2) = (
        condition(&p.c),
        condition(&p.h),
        condition(&g1),
        condition(&g2),
        condition(&k1),
        condition(&k2),
    );

    let (mu_g, mu_h) = p.moment_map()?;
    let moved = p.act(&g1, &k1)?;
    let (mu_g1, mu_h1) = moved.moment_map()?;
    let equiv = rel_residual(&mu_g1, &conj(&g1, &mu_g)?).max(rel_residual(&mu_h1, &conj(&k1, &mu_h)?));
    rep.record("equivariance", equiv / (kc * kh * kg1 * kk1), tol);

    let twice = moved.act(&g2, &k2)?;
    let once = p.act(&(&g2 * &g1), &(&k2 * &k1))?;
    rep.record("composition", twice.distance(&once) / (kg1 * kg2 * kk1 * kk2), tol);

    let det = det_residual(mu_g.determinant(), p.h.determinant());
    rep.record("det_identity", det / kc, tol);

    rep.record("s_parity", moved.parity_defect() / kk1, tol);

    // fusion of p and q over G: moment is the product, equivariant for the
    // diagonal action, with determinant det(h_p) det(h_q)
    let (mu_q, _) = q.moment_map()?;
    let fused = &mu_g * &mu_q;
    let (mu_q1, _) = q.act(&g1, &k2)?.moment_map()?;
    let fused_moved = &mu_g1 * &mu_q1;
    let fusion = rel_residual(&fused_moved, &conj(&g1, &fused)?).max(det_residual(
        fused.determinant(),
        p.h.determinant() * q.h.determinant(),
    ));
    let kq = condition(&q.c);
    rep.record("fusion_moment", fusion / (kc * kq * kg1 * kk1 * kk2), tol);
    Ok(rep)
}

/// Randomized check of the moment-map identities on `trials` points; trial
/// `i` draws from its own stream seeded by `seed + i`.
pub fn verify_suite(n: usize, blocks: &[Vec<usize>], r: usize, trials: usize, tol: f64, seed: u64) -> Result<Report> {
    verify_suite_with(n, blocks, r, trials, tol, seed, Execution::default())
}

pub fn verify_suite_with(
    n: usize,
    blocks: &[Vec<usize>],
    r: usize,
    trials: usize,
    tol: f64,
    seed: u64,
    exec: Execution,
) -> Result<Report> {
    if trials == 0 {
        return Err(Error::NoTrials);
    }
    if r == 0 {
        return Err(Error::ZeroOrder);
    }
    if !(tol > 0.0) {
        return Err(Error::BadTolerance(tol));
    }
    let blocks = Blocks::new(n, blocks.to_vec())?;
    let trial = |i: usize| run_trial(&blocks, r, tol, seed.wrapping_add(i as u64));
    match exec {
        #[cfg(feature = "parallel")]
        Execution::Parallel => {
            use rayon::prelude::*;
            (0..trials)
                .into_par_iter()
                .map(trial)
                .try_reduce(|| Report::empty(seed), |a, b| Ok(a.merge(b)))
        }
        _ => (0..trials).try_fold(Report::empty(seed), |acc, i| Ok(acc.merge(trial(i)?))),
    }
}
