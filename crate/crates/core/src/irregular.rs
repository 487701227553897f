//! Irregular types `Q = A_r/z^r + ... + A_1/z` and the data they induce.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use num_complex::Complex64;

use crate::cartan::{levi_of_vanishing, LeviDatum, Root, RootDatum};
use crate::error::{Error, Result};

/// An element of the Cartan subalgebra, in the coordinates of the root datum.
pub type CartanVector = Vec<Complex64>;

/// Relative zero threshold for coefficient comparisons.
pub const ZERO_REL_TOL: f64 = 1e-12;

/// The coefficients of `q_alpha = alpha o Q`, keyed by pole degree. Absent keys are zero.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct LaurentTail(pub BTreeMap<usize, Complex64>);

impl LaurentTail {
    pub fn degree(&self) -> usize {
        self.0.keys().next_back().copied().unwrap_or(0)
    }

    /// Most singular term `(k, c)` with `c/z^k`.
    pub fn leading(&self) -> Option<(usize, Complex64)> {
        self.0.iter().next_back().map(|(&k, &c)| (k, c))
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct IrregularType {
    datum: Arc<RootDatum>,
    /// `coeffs[i]` is `A_{i+1}`; the last entry is nonzero unless the type is tame.
    coeffs: Vec<CartanVector>,
    zero_tol: f64,
}

impl IrregularType {
    /// Builds `Q` from coefficients listed by increasing pole order, `[A_1, ..., A_r]`.
    /// Trailing zero vectors are stripped so that `r` is intrinsic.
    pub fn new(datum: Arc<RootDatum>, coeffs: Vec<CartanVector>) -> Result<IrregularType> {
        let rank = datum.rank();
        if let Some(bad) = coeffs.iter().find(|a| a.len() != rank) {
            return Err(Error::CartanLength {
                expected: rank,
                got: bad.len(),
            });
        }
        let scale = coeffs
            .iter()
            .flatten()
            .map(|c| c.norm())
            .fold(0.0_f64, f64::max);
        let zero_tol = ZERO_REL_TOL * (1.0 + scale);
        let mut q = IrregularType {
            datum,
            coeffs,
            zero_tol,
        };
        while q
            .coeffs
            .last()
            .is_some_and(|a| a.iter().all(|c| c.norm() <= q.zero_tol))
        {
            q.coeffs.pop();
        }
        Ok(q)
    }

    /// Builds `Q` from `[A_r, ..., A_1]`.
    pub fn from_descending(datum: Arc<RootDatum>, mut coeffs: Vec<CartanVector>) -> Result<IrregularType> {
        coeffs.reverse();
        IrregularType::new(datum, coeffs)
    }

    /// The one-term type `A/z^k`.
    pub fn monomial(datum: Arc<RootDatum>, a: CartanVector, k: usize) -> Result<IrregularType> {
        let rank = datum.rank();
        let mut coeffs = vec![vec![Complex64::new(0.0, 0.0); rank]; k];
        if k > 0 {
            coeffs[k - 1] = a;
        }
        IrregularType::new(datum, coeffs)
    }

    pub fn tame(datum: Arc<RootDatum>) -> IrregularType {
        IrregularType {
            datum,
            coeffs: Vec::new(),
            zero_tol: ZERO_REL_TOL,
        }
    }

    pub fn datum(&self) -> &RootDatum {
        &self.datum
    }

    pub fn datum_arc(&self) -> &Arc<RootDatum> {
        &self.datum
    }

    /// Pole order `r` of `Q` (0 when tame).
    pub fn order(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_tame(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Coefficients `[A_1, ..., A_r]`.
    pub fn coeffs(&self) -> &[CartanVector] {
        &self.coeffs
    }

    /// `A_i` for `1 <= i <= r`.
    pub fn coeff(&self, i: usize) -> Option<&CartanVector> {
        i.checked_sub(1).and_then(|k| self.coeffs.get(k))
    }

    pub fn zero_tol(&self) -> f64 {
        self.zero_tol
    }

    pub fn is_zero(&self, c: Complex64) -> bool {
        c.norm() <= self.zero_tol
    }

    /// `q_alpha = alpha o Q` as a Laurent tail.
    pub fn pair_root(&self, alpha: &Root) -> Result<LaurentTail> {
        self.datum.check_root(alpha)?;
        Ok(self.pair_unchecked(alpha))
    }

    fn pair_unchecked(&self, alpha: &Root) -> LaurentTail {
        LaurentTail(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(i, a)| (i + 1, alpha.pair(a)))
                .filter(|(_, c)| !self.is_zero(*c))
                .collect(),
        )
    }

    /// Pole order of `alpha o Q`.
    pub fn degree(&self, alpha: &Root) -> Result<usize> {
        Ok(self.pair_root(alpha)?.degree())
    }

    /// Degrees of every root, in datum order.
    pub fn degrees(&self) -> Vec<usize> {
        self.datum
            .roots()
            .iter()
            .map(|a| self.pair_unchecked(a).degree())
            .collect()
    }

    /// The distinct nonzero root degrees.
    pub fn levels(&self) -> BTreeSet<usize> {
        self.degrees().into_iter().filter(|&d| d > 0).collect()
    }

    /// `C_G(Q)`: the Levi whose roots pair to zero with every coefficient.
    pub fn centralizer(&self) -> LeviDatum {
        self.centralizer_from(1)
    }

    /// Centraliser of `{A_r, ..., A_i}`.
    fn centralizer_from(&self, i: usize) -> LeviDatum {
        let vanishing: Vec<Root> = self
            .datum
            .roots()
            .iter()
            .filter(|a| {
                self.coeffs
                    .iter()
                    .skip(i - 1)
                    .all(|c| self.is_zero(a.pair(c)))
            })
            .cloned()
            .collect();
        levi_of_vanishing(&self.datum, &vanishing)
            .expect("a common kernel of linear forms cuts out a Levi")
    }

    /// `[H_1, ..., H_r]` with `H_i` the centraliser of `{A_r, ..., A_i}`.
    pub fn centralizer_chain(&self) -> Result<Vec<LeviDatum>> {
        if self.is_tame() {
            return Err(Error::TameType);
        }
        Ok((1..=self.order()).map(|i| self.centralizer_from(i)).collect())
    }

    /// Pull back along `z -> z^k`: the coefficient of degree `i` moves to degree `k*i`.
    pub fn pullback(&self, k: usize) -> IrregularType {
        assert!(k >= 1, "pullback exponent must be positive");
        let rank = self.datum.rank();
        let mut coeffs = vec![vec![Complex64::new(0.0, 0.0); rank]; self.order() * k];
        for (i, a) in self.coeffs.iter().enumerate() {
            coeffs[(i + 1) * k - 1] = a.clone();
        }
        IrregularType {
            datum: self.datum.clone(),
            coeffs,
            zero_tol: self.zero_tol,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct MarkedPoint {
    pub label: String,
    pub irregular_type: IrregularType,
    /// Coordinate on the curve, when known (genus 0).
    pub position: Option<Complex64>,
}

/// A curve of genus `g` with `m >= 1` marked points, each carrying an irregular type.
#[derive(Clone, Debug, PartialEq)]
pub struct IrregularCurve {
    genus: usize,
    points: Vec<MarkedPoint>,
}

impl IrregularCurve {
    pub fn new(genus: usize, points: Vec<MarkedPoint>) -> Result<IrregularCurve> {
        let first = points.first().ok_or(Error::NoPoints)?;
        let datum = first.irregular_type.datum_arc().clone();
        let mut labels = BTreeSet::new();
        for p in &points {
            if p.irregular_type.datum() != &*datum {
                return Err(Error::DatumMismatch);
            }
            if !labels.insert(p.label.as_str()) {
                return Err(Error::DuplicateLabel(p.label.clone()));
            }
        }
        Ok(IrregularCurve { genus, points })
    }

    pub fn genus(&self) -> usize {
        self.genus
    }

    pub fn points(&self) -> &[MarkedPoint] {
        &self.points
    }

    pub fn datum(&self) -> &RootDatum {
        self.points[0].irregular_type.datum()
    }

    pub fn types(&self) -> impl Iterator<Item = &IrregularType> {
        self.points.iter().map(|p| &p.irregular_type)
    }

    pub fn is_tame(&self) -> bool {
        self.types().all(IrregularType::is_tame)
    }
}

/// Shorthand for a real Cartan vector.
pub fn real_vector(xs: &[f64]) -> CartanVector {
    xs.iter().map(|&x| Complex64::new(x, 0.0)).collect()
}
