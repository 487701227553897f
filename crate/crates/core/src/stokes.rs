//! Singular (anti-Stokes) directions and Stokes groups of an irregular type.
//!
//! If `c/z^k` is the most singular term of `q_alpha`, the directions supported
//! by `alpha` are those where `c/z^k` is real and negative, i.e.
//! `theta = (arg c - pi + 2 pi j)/k` for `j = 0..k`. The Stokes group of a
//! direction `d` is generated by the root groups of its supporting roots, so
//! its dimension is `#R(d)`.

use std::f64::consts::{PI, TAU};
use std::sync::Arc;

use num_complex::Complex64;
use serde::Serialize;

use crate::cartan::{Root, RootDatum};
use crate::error::{Error, Result};
use crate::irregular::{CartanVector, IrregularType};

/// Default merge tolerance for coincident directions, in radians.
pub const DEFAULT_DIRECTION_TOL: f64 = 1e-9;

/// A direction on the boundary circle, canonically in `[0, 2 pi)`.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd, Serialize)]
#[serde(transparent)]
pub struct Direction(f64);

impl Direction {
    pub fn new(angle: f64) -> Direction {
        let a = angle.rem_euclid(TAU);
        Direction(if a >= TAU { 0.0 } else { a })
    }

    pub fn angle(self) -> f64 {
        self.0
    }
}

/// One root supporting a direction, with the term that produced it.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Support {
    pub root: Root,
    pub root_index: usize,
    /// Pole order `k` of `q_alpha`.
    pub degree: usize,
    /// Leading coefficient `c` of `q_alpha = c/z^k + ...`.
    pub leading: Complex64,
    /// Exact (unmerged) angle this root produced.
    pub raw_angle: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SingularDirection {
    pub direction: Direction,
    /// Supporting roots `R(d)`, ordered by root index.
    pub support: Vec<Support>,
}

impl SingularDirection {
    /// Dimension of the Stokes group `Sto_d`.
    pub fn stokes_dim(&self) -> usize {
        self.support.len()
    }

    pub fn roots(&self) -> impl Iterator<Item = &Root> {
        self.support.iter().map(|s| &s.root)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StokesReport {
    /// Singular directions sorted by angle.
    pub directions: Vec<SingularDirection>,
    /// `sum_alpha deg(alpha o Q)`, the total Stokes dimension.
    pub budget: usize,
    /// Number of extra punctures `e(d)`, one per singular direction.
    pub halo_punctures: usize,
}

impl StokesReport {
    pub fn stokes_dims(&self) -> Vec<usize> {
        self.directions.iter().map(SingularDirection::stokes_dim).collect()
    }

    /// Number of directions whose support contains the root with this index.
    pub fn occurrences(&self, root_index: usize) -> usize {
        self.directions
            .iter()
            .filter(|d| d.support.iter().any(|s| s.root_index == root_index))
            .count()
    }
}

/// Angles of the `k` singular directions of a term `c/z^k`.
pub fn term_directions(c: Complex64, k: usize) -> Vec<f64> {
    let arg = c.arg();
    (0..k)
        .map(|j| Direction::new((arg - PI + TAU * j as f64) / k as f64).angle())
        .collect()
}

/// Singular directions of `Q`, merged within `tol` radians (transitively, around the circle).
pub fn singular_directions(q: &IrregularType, tol: f64) -> Result<StokesReport> {
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::BadTolerance(tol));
    }
    let mut raw: Vec<Support> = Vec::new();
    let mut budget = 0;
    for (index, root) in q.datum().roots().iter().enumerate() {
        let tail = q.pair_root(root)?;
        let Some((k, c)) = tail.leading() else {
            continue;
        };
        budget += k;
        for angle in term_directions(c, k) {
            raw.push(Support {
                root: root.clone(),
                root_index: index,
                degree: k,
                leading: c,
                raw_angle: angle,
            });
        }
    }
    raw.sort_by(|a, b| {
        a.raw_angle
            .total_cmp(&b.raw_angle)
            .then(a.root_index.cmp(&b.root_index))
    });

    let mut clusters: Vec<Vec<Support>> = Vec::new();
    for s in raw {
        match clusters.last_mut() {
            Some(last) if s.raw_angle - last.last().unwrap().raw_angle <= tol => last.push(s),
            _ => clusters.push(vec![s]),
        }
    }
    if clusters.len() > 1 {
        let first = clusters[0][0].raw_angle;
        let last = clusters.last().unwrap().last().unwrap().raw_angle;
        if first + TAU - last <= tol {
            let head = clusters.remove(0);
            clusters.last_mut().unwrap().extend(head);
        }
    }

    let mut directions: Vec<SingularDirection> = clusters
        .into_iter()
        .map(|mut support| {
            let direction = Direction::new(support[0].raw_angle);
            support.sort_by_key(|s| s.root_index);
            SingularDirection { direction, support }
        })
        .collect();
    directions.sort_by(|a, b| a.direction.angle().total_cmp(&b.direction.angle()));
    let halo_punctures = directions.len();
    Ok(StokesReport {
        directions,
        budget,
        halo_punctures,
    })
}

/// `sum_alpha deg(alpha o Q)`.
pub fn stokes_budget(q: &IrregularType) -> usize {
    q.degrees().into_iter().sum()
}

/// The rays through the nonzero pairing values `<alpha, A>`, i.e. the singular
/// directions of `Q = -A/z`, each with the roots landing on it.
pub fn rays_of_linear_type(a: &CartanVector, datum: &RootDatum) -> Result<Vec<(Direction, Vec<Root>)>> {
    let neg: CartanVector = a.iter().map(|x| -x).collect();
    let q = IrregularType::monomial(Arc::new(datum.clone()), neg, 1)?;
    let report = singular_directions(&q, DEFAULT_DIRECTION_TOL)?;
    Ok(report
        .directions
        .into_iter()
        .map(|d| (d.direction, d.roots().cloned().collect()))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::irregular::real_vector;

    fn gl(n: usize) -> Arc<RootDatum> {
        Arc::new(RootDatum::gl(n).unwrap())
    }

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() < 1e-12
    }

    #[test]
    fn gl2_simple_pole() {
        let q = IrregularType::monomial(gl(2), real_vector(&[1., 0.]), 1).unwrap();
        let rep = singular_directions(&q, DEFAULT_DIRECTION_TOL).unwrap();
        assert_eq!(rep.directions.len(), 2);
        assert!(close(rep.directions[0].direction.angle(), 0.0));
        assert_eq!(rep.directions[0].support[0].root, Root::gl(2, 1, 0));
        assert!(close(rep.directions[1].direction.angle(), PI));
        assert_eq!(rep.directions[1].support[0].root, Root::gl(2, 0, 1));
        assert_eq!(rep.budget, 2);
        assert_eq!(rep.halo_punctures, 2);
    }

    #[test]
    fn gl2_double_pole_repeats_each_root_twice() {
        let q = IrregularType::monomial(gl(2), real_vector(&[1., 0.]), 2).unwrap();
        let rep = singular_directions(&q, DEFAULT_DIRECTION_TOL).unwrap();
        let angles: Vec<f64> = rep.directions.iter().map(|d| d.direction.angle()).collect();
        let expected = [0.0, PI / 2.0, PI, 3.0 * PI / 2.0];
        assert_eq!(angles.len(), 4);
        for (a, e) in angles.iter().zip(expected) {
            assert!(close(*a, e), "{a} vs {e}");
        }
        let plus = Root::gl(2, 0, 1);
        for d in &rep.directions {
            let is_plus = d.support[0].root == plus;
            let a = d.direction.angle();
            assert_eq!(is_plus, close(a, PI / 2.0) || close(a, 3.0 * PI / 2.0));
        }
        assert_eq!(stokes_budget(&q), 4);
    }

    #[test]
    fn gl3_regular_real_type_merges_by_sign() {
        let q = IrregularType::monomial(gl(3), real_vector(&[2., 1., 0.]), 1).unwrap();
        let rep = singular_directions(&q, DEFAULT_DIRECTION_TOL).unwrap();
        assert_eq!(rep.directions.len(), 2);
        assert!(close(rep.directions[0].direction.angle(), 0.0));
        assert!(close(rep.directions[1].direction.angle(), PI));
        assert_eq!(rep.stokes_dims(), vec![3, 3]);
        for s in &rep.directions[1].support {
            let (i, j) = s.root.gl_indices().unwrap();
            assert!(i < j, "positive roots at pi");
        }
    }

    #[test]
    fn budget_examples() {
        assert_eq!(stokes_budget(&IrregularType::tame(gl(3))), 0);
        let q = IrregularType::new(gl(3), vec![real_vector(&[1., 0., 0.]), real_vector(&[1., 1., 0.])]).unwrap();
        assert_eq!(stokes_budget(&q), 10);
        let rep = singular_directions(&q, DEFAULT_DIRECTION_TOL).unwrap();
        assert_eq!(rep.stokes_dims().iter().sum::<usize>(), 10);
    }

    #[test]
    fn linear_rays() {
        let g2 = RootDatum::gl(2).unwrap();
        let rays = rays_of_linear_type(&real_vector(&[1., 0.]), &g2).unwrap();
        assert_eq!(rays.len(), 2);
        assert!(close(rays[0].0.angle(), 0.0));
        assert_eq!(rays[0].1, vec![Root::gl(2, 0, 1)]);
        assert!(close(rays[1].0.angle(), PI));
        assert_eq!(rays[1].1, vec![Root::gl(2, 1, 0)]);

        assert!(rays_of_linear_type(&real_vector(&[0., 0.]), &g2).unwrap().is_empty());

        let g3 = RootDatum::gl(3).unwrap();
        let a = vec![
            Complex64::new(1.0, 0.0),
            Complex64::new(0.0, 1.0),
            Complex64::new(0.0, 0.0),
        ];
        let rays = rays_of_linear_type(&a, &g3).unwrap();
        assert_eq!(rays.len(), 6);
        assert!(rays.iter().all(|(_, r)| r.len() == 1));
        let one_minus_i = Complex64::new(1.0, -1.0);
        let mut expected: Vec<f64> = [0.0, PI / 2.0, PI, 3.0 * PI / 2.0, one_minus_i.arg(), (-one_minus_i).arg()]
            .iter()
            .map(|&x| Direction::new(x).angle())
            .collect();
        expected.sort_by(f64::total_cmp);
        for ((d, roots), e) in rays.iter().zip(expected) {
            assert!(close(d.angle(), e));
            // each ray is the argument of its root's pairing value
            let p = roots[0].pair(&a);
            assert!(close(Direction::new(p.arg()).angle(), d.angle()));
        }
    }

    #[test]
    fn nonpositive_tolerance_rejected() {
        let q = IrregularType::tame(gl(2));
        assert_eq!(singular_directions(&q, 0.0), Err(Error::BadTolerance(0.0)));
        assert!(singular_directions(&q, -1.0).is_err());
    }

    #[test]
    fn merge_wraps_around_zero() {
        // e1-e2 pairs to e^{i(pi - eps)}, giving 2 pi - eps; e2-e3 pairs to
        // e^{i(eps - pi)}, giving eps
        let eps = 1e-11;
        let a = vec![
            Complex64::from_polar(1.0, PI - eps),
            Complex64::new(0.0, 0.0),
            Complex64::from_polar(1.0, eps),
        ];
        let q = IrregularType::monomial(gl(3), a, 1).unwrap();
        let rep = singular_directions(&q, DEFAULT_DIRECTION_TOL).unwrap();
        let e13 = rep
            .directions
            .iter()
            .find(|d| d.support.iter().any(|s| s.root == Root::gl(3, 0, 1)))
            .unwrap();
        assert!(e13.support.iter().any(|s| s.root == Root::gl(3, 1, 2)));
    }

    #[test]
    fn negating_a_root_rotates_by_pi_over_k() {
        let q = IrregularType::new(
            gl(3),
            vec![
                real_vector(&[0.5, -1.0, 2.0]),
                vec![Complex64::new(1.0, 2.0), Complex64::new(0.0, -1.0), Complex64::new(3.0, 0.5)],
                real_vector(&[0.0, 1.0, 0.0]),
            ],
        )
        .unwrap();
        for root in q.datum().roots() {
            let (k, c) = q.pair_root(root).unwrap().leading().unwrap();
            let (k2, c2) = q.pair_root(&root.neg()).unwrap().leading().unwrap();
            assert_eq!(k, k2);
            let mut shifted: Vec<f64> = term_directions(c, k)
                .iter()
                .map(|a| Direction::new(a + PI / k as f64).angle())
                .collect();
            let mut neg = term_directions(c2, k);
            shifted.sort_by(f64::total_cmp);
            neg.sort_by(f64::total_cmp);
            for (a, b) in shifted.iter().zip(&neg) {
                let d = (a - b).rem_euclid(TAU);
                assert!(d < 1e-12 || TAU - d < 1e-12);
            }
        }
    }
}
