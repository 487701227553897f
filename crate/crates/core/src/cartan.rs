//! Root data for connected complex reductive groups.
//!
//! Two presentations are supported: the concrete `GL(n)` model, whose roots
//! are the differences `e_i - e_j` of coordinate functionals on the diagonal
//! Cartan subalgebra, and an abstract presentation given by a rank and an
//! explicit list of integer root vectors. Only the `GL(n)` model has a matrix
//! realization (see [`crate::matrix_real`]); both support the combinatorics.

use std::collections::BTreeSet;
use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A root, stored through its pairing coefficients: `<alpha, A> = sum_i alpha_i A_i`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Root(pub Vec<i64>);

impl Root {
    /// `e_i - e_j` in rank `n` (0-based indices).
    pub fn gl(n: usize, i: usize, j: usize) -> Root {
        let mut v = vec![0; n];
        v[i] += 1;
        v[j] -= 1;
        Root(v)
    }

    pub fn coefficients(&self) -> &[i64] {
        &self.0
    }

    pub fn neg(&self) -> Root {
        Root(self.0.iter().map(|c| -c).collect())
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }

    /// Pairing with a Cartan vector.
    pub fn pair(&self, a: &[Complex64]) -> Complex64 {
        self.0
            .iter()
            .zip(a)
            .filter(|(c, _)| **c != 0)
            .map(|(&c, x)| x * c as f64)
            .sum()
    }

    /// For a `GL(n)` root, the 0-based pair `(i, j)` with `self = e_i - e_j`.
    pub fn gl_indices(&self) -> Option<(usize, usize)> {
        let mut plus = None;
        let mut minus = None;
        for (k, &c) in self.0.iter().enumerate() {
            match c {
                0 => {}
                1 if plus.is_none() => plus = Some(k),
                -1 if minus.is_none() => minus = Some(k),
                _ => return None,
            }
        }
        Some((plus?, minus?))
    }
}

impl fmt::Display for Root {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.gl_indices() {
            Some((i, j)) => write!(f, "e{}-e{}", i + 1, j + 1),
            None => {
                write!(f, "[")?;
                for (k, c) in self.0.iter().enumerate() {
                    if k > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{c}")?;
                }
                write!(f, "]")
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum DatumKind {
    GL { n: usize },
    Abstract { rank: usize },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootDatum {
    kind: DatumKind,
    roots: Vec<Root>,
    dim_g: usize,
    dim_t: usize,
}

impl RootDatum {
    /// The root datum of `GL(n)`; roots are ordered lexicographically by `(i, j)`.
    pub fn gl(n: usize) -> Result<RootDatum> {
        if n == 0 {
            return Err(Error::ZeroRank);
        }
        let roots = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| Root::gl(n, i, j)))
            .collect();
        Ok(RootDatum {
            kind: DatumKind::GL { n },
            roots,
            dim_g: n * n,
            dim_t: n,
        })
    }

    /// An abstract datum from a rank and a root list.
    ///
    /// Roots must be nonzero, of length `rank`, pairwise distinct and closed
    /// under negation.
    pub fn from_roots(rank: usize, roots: Vec<Root>) -> Result<RootDatum> {
        if rank == 0 {
            return Err(Error::ZeroRank);
        }
        let mut seen = BTreeSet::new();
        for r in &roots {
            if r.0.len() != rank {
                return Err(Error::InvalidDatum(format!(
                    "root {r} has length {}, expected {rank}",
                    r.0.len()
                )));
            }
            if r.is_zero() {
                return Err(Error::InvalidDatum("zero root".into()));
            }
            if !seen.insert(r.clone()) {
                return Err(Error::InvalidDatum(format!("duplicate root {r}")));
            }
        }
        if let Some(r) = roots.iter().find(|r| !seen.contains(&r.neg())) {
            return Err(Error::InvalidDatum(format!("root {r} has no negative")));
        }
        let dim_g = rank + roots.len();
        Ok(RootDatum {
            kind: DatumKind::Abstract { rank },
            roots,
            dim_g,
            dim_t: rank,
        })
    }

    pub fn kind(&self) -> &DatumKind {
        &self.kind
    }

    /// `Some(n)` for the `GL(n)` model.
    pub fn gl_rank(&self) -> Option<usize> {
        match self.kind {
            DatumKind::GL { n } => Some(n),
            DatumKind::Abstract { .. } => None,
        }
    }

    pub fn roots(&self) -> &[Root] {
        &self.roots
    }

    pub fn rank(&self) -> usize {
        self.dim_t
    }

    pub fn dim_g(&self) -> usize {
        self.dim_g
    }

    pub fn dim_t(&self) -> usize {
        self.dim_t
    }

    pub fn root_index(&self, root: &Root) -> Option<usize> {
        self.roots.iter().position(|r| r == root)
    }

    pub fn check_root(&self, root: &Root) -> Result<usize> {
        self.root_index(root)
            .ok_or_else(|| Error::ForeignRoot(root.to_string()))
    }

    /// Dimension of the centre: rank minus the rank of the root lattice.
    pub fn center_dim(&self) -> usize {
        self.dim_t - integer_rank(&self.roots)
    }

    pub fn label(&self) -> String {
        match self.kind {
            DatumKind::GL { n } => format!("GL({n})"),
            DatumKind::Abstract { .. } => "G".to_string(),
        }
    }

    /// The whole group as a (single-factor) [`Group`].
    pub fn group(&self) -> Group {
        Group::simple(self.label(), self.dim_g, self.dim_t, self.center_dim())
    }

    /// The maximal torus `T`.
    pub fn torus(&self) -> LeviDatum {
        levi_of_vanishing(self, &[]).expect("empty vanishing set is always a Levi")
    }
}

/// A Levi subgroup, described by the roots that vanish on it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LeviDatum {
    parent_label: String,
    parent_rank: usize,
    parent_root_count: usize,
    /// Indices into the parent's root list, ascending.
    vanishing: BTreeSet<usize>,
    vanishing_roots: Vec<Root>,
    /// For `GL(n)`: the blocks (0-based, each ascending), ordered by least element.
    blocks: Option<Vec<Vec<usize>>>,
    dim: usize,
    center: usize,
}

impl LeviDatum {
    pub fn vanishing_roots(&self) -> &[Root] {
        &self.vanishing_roots
    }

    pub fn vanishing_indices(&self) -> &BTreeSet<usize> {
        &self.vanishing
    }

    pub fn blocks(&self) -> Option<&[Vec<usize>]> {
        self.blocks.as_deref()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.parent_rank
    }

    pub fn is_torus(&self) -> bool {
        self.vanishing.is_empty()
    }

    /// Whether `self` is contained in `other` (as Levis of the same parent).
    pub fn is_contained_in(&self, other: &LeviDatum) -> bool {
        self.vanishing.is_subset(&other.vanishing)
    }

    pub fn label(&self) -> String {
        self.group().label
    }

    pub fn group(&self) -> Group {
        let n = self.parent_rank;
        match &self.blocks {
            Some(blocks) => {
                let factors: Vec<GroupFactor> = blocks.iter().map(|b| GroupFactor::gl(b.len(), None)).collect();
                let label = if blocks.len() == n {
                    format!("T({n})")
                } else if blocks.len() == 1 {
                    format!("GL({n})")
                } else {
                    factors
                        .iter()
                        .map(|f| f.label.as_str())
                        .collect::<Vec<_>>()
                        .join("x")
                };
                Group { label, factors }
            }
            None => {
                let label = if self.vanishing.is_empty() {
                    format!("T({n})")
                } else if self.is_full() {
                    self.parent_label.clone()
                } else {
                    let idx: Vec<String> = self.vanishing.iter().map(|i| (i + 1).to_string()).collect();
                    format!("L{{{}}}", idx.join(","))
                };
                Group::simple(label, self.dim, n, self.center)
            }
        }
    }

    fn is_full(&self) -> bool {
        self.parent_root_count == self.vanishing.len()
    }
}

/// The Levi subgroup whose roots are exactly `vanishing`.
///
/// For `GL(n)` the set must be the root set of a partition of the indices;
/// the blocks are returned in input index order (ordered by least element).
pub fn levi_of_vanishing(datum: &RootDatum, vanishing: &[Root]) -> Result<LeviDatum> {
    let mut idx = BTreeSet::new();
    for r in vanishing {
        idx.insert(datum.check_root(r)?);
    }
    for &i in &idx {
        let neg = datum.roots[i].neg();
        let j = datum.check_root(&neg)?;
        if !idx.contains(&j) {
            return Err(Error::NotSymmetric);
        }
    }
    let vanishing_roots: Vec<Root> = idx.iter().map(|&i| datum.roots[i].clone()).collect();
    let (blocks, dim) = match datum.kind {
        DatumKind::GL { n } => {
            let mut uf: Vec<usize> = (0..n).collect();
            fn find(uf: &mut [usize], x: usize) -> usize {
                let mut x = x;
                while uf[x] != x {
                    uf[x] = uf[uf[x]];
                    x = uf[x];
                }
                x
            }
            for r in &vanishing_roots {
                let (i, j) = r.gl_indices().expect("GL roots are e_i - e_j");
                let (a, b) = (find(&mut uf, i), find(&mut uf, j));
                if a != b {
                    uf[a.max(b)] = a.min(b);
                }
            }
            let mut blocks: Vec<Vec<usize>> = Vec::new();
            let mut block_of = vec![usize::MAX; n];
            for i in 0..n {
                let root = find(&mut uf, i);
                if block_of[root] == usize::MAX {
                    block_of[root] = blocks.len();
                    blocks.push(Vec::new());
                }
                blocks[block_of[root]].push(i);
            }
            let expected: usize = blocks.iter().map(|b| b.len() * (b.len() - 1)).sum();
            if expected != vanishing_roots.len() {
                return Err(Error::NotPartition { n });
            }
            let dim = blocks.iter().map(|b| b.len() * b.len()).sum();
            (Some(blocks), dim)
        }
        DatumKind::Abstract { rank } => (None, rank + vanishing_roots.len()),
    };
    Ok(LeviDatum {
        parent_label: datum.label(),
        parent_rank: datum.rank(),
        parent_root_count: datum.roots.len(),
        vanishing: idx,
        center: datum.rank() - integer_rank(&vanishing_roots),
        vanishing_roots,
        blocks,
        dim,
    })
}

/// One simple factor of an acting group, e.g. `GL(2)` or a tagged `GL(1)[a]`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GroupFactor {
    pub label: String,
    pub dim: usize,
    pub rank: usize,
    /// Dimension of the factor's centre.
    pub center: usize,
}

impl GroupFactor {
    pub fn new(label: impl Into<String>, dim: usize, rank: usize, center: usize) -> GroupFactor {
        GroupFactor {
            label: label.into(),
            dim,
            rank,
            center,
        }
    }

    /// The factor `GL(d)`, optionally tagged (e.g. by a quiver node).
    pub fn gl(d: usize, tag: Option<&str>) -> GroupFactor {
        let label = match tag {
            Some(t) => format!("GL({d})[{t}]"),
            None => format!("GL({d})"),
        };
        GroupFactor::new(label, d * d, d, 1)
    }
}

/// A group acting on a space: a product of simple factors with a display label.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Group {
    pub label: String,
    pub factors: Vec<GroupFactor>,
}

impl Group {
    pub fn simple(label: impl Into<String>, dim: usize, rank: usize, center: usize) -> Group {
        let label = label.into();
        Group {
            factors: vec![GroupFactor::new(label.clone(), dim, rank, center)],
            label,
        }
    }

    pub fn gl(n: usize) -> Group {
        Group::simple(format!("GL({n})"), n * n, n, 1)
    }

    pub fn product(factors: Vec<GroupFactor>) -> Group {
        let label = factors
            .iter()
            .map(|f| f.label.as_str())
            .collect::<Vec<_>>()
            .join("x");
        Group { label, factors }
    }

    pub fn dim(&self) -> usize {
        self.factors.iter().map(|f| f.dim).sum()
    }

    pub fn rank(&self) -> usize {
        self.factors.iter().map(|f| f.rank).sum()
    }

    pub fn center_dim(&self) -> usize {
        self.factors.iter().map(|f| f.center).sum()
    }

    pub fn is_abelian(&self) -> bool {
        self.dim() == self.rank()
    }
}

impl Serialize for Group {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.label)
    }
}

impl fmt::Display for Group {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label)
    }
}

/// Rank over the rationals of a list of integer vectors.
fn integer_rank(rows: &[Root]) -> usize {
    let mut m: Vec<Vec<i128>> = rows.iter().map(|r| r.0.iter().map(|&c| c as i128).collect()).collect();
    let cols = m.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..m.len()).find(|&i| m[i][c] != 0) else {
            continue;
        };
        m.swap(rank, p);
        for i in 0..m.len() {
            if i != rank && m[i][c] != 0 {
                let (a, b) = (m[rank][c], m[i][c]);
                let pivot = m[rank].clone();
                for (x, &y) in m[i].iter_mut().zip(&pivot).take(cols) {
                    *x = *x * a - y * b;
                }
                let g = m[i].iter().fold(0i128, |g, &x| gcd(g, x.abs()));
                if g > 1 {
                    m[i].iter_mut().for_each(|x| *x /= g);
                }
            }
        }
        rank += 1;
    }
    rank
}

fn gcd(a: i128, b: i128) -> i128 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn roots_of(datum: &RootDatum, pairs: &[(usize, usize)]) -> Vec<Root> {
        let n = datum.rank();
        pairs.iter().map(|&(i, j)| Root::gl(n, i, j)).collect()
    }

    #[test]
    fn gl_counts() {
        let g1 = RootDatum::gl(1).unwrap();
        assert_eq!((g1.roots().len(), g1.dim_g()), (0, 1));
        let g2 = RootDatum::gl(2).unwrap();
        assert_eq!((g2.roots().len(), g2.dim_g(), g2.dim_t()), (2, 4, 2));
        let g3 = RootDatum::gl(3).unwrap();
        assert_eq!((g3.roots().len(), g3.dim_g()), (6, 9));
        assert_eq!(RootDatum::gl(0), Err(Error::ZeroRank));
        for n in 1..8 {
            let g = RootDatum::gl(n).unwrap();
            assert_eq!(g.roots().len(), n * (n - 1));
            assert_eq!(g.dim_g(), g.dim_t() + g.roots().len());
            assert_eq!(g.center_dim(), 1);
        }
    }

    #[test]
    fn levi_examples() {
        let g3 = RootDatum::gl(3).unwrap();
        let t = levi_of_vanishing(&g3, &[]).unwrap();
        assert_eq!(t.blocks().unwrap(), &[vec![0], vec![1], vec![2]]);
        assert_eq!(t.dim(), 3);
        assert_eq!(t.label(), "T(3)");

        let l = levi_of_vanishing(&g3, &roots_of(&g3, &[(0, 1), (1, 0)])).unwrap();
        assert_eq!(l.blocks().unwrap(), &[vec![0, 1], vec![2]]);
        assert_eq!(l.dim(), 5);
        assert_eq!(l.label(), "GL(2)xGL(1)");

        let full = levi_of_vanishing(&g3, g3.roots()).unwrap();
        assert_eq!(full.blocks().unwrap().len(), 1);
        assert_eq!(full.dim(), 9);
        assert_eq!(full.label(), "GL(3)");
    }

    #[test]
    fn levi_blocks_keep_input_order() {
        let g3 = RootDatum::gl(3).unwrap();
        let l = levi_of_vanishing(&g3, &roots_of(&g3, &[(0, 2), (2, 0)])).unwrap();
        assert_eq!(l.blocks().unwrap(), &[vec![0, 2], vec![1]]);
    }

    #[test]
    fn levi_errors() {
        let g3 = RootDatum::gl(3).unwrap();
        assert_eq!(
            levi_of_vanishing(&g3, &roots_of(&g3, &[(0, 1)])),
            Err(Error::NotSymmetric)
        );
        // e1-e2 and e2-e3 without e1-e3 is not the root set of a partition
        let bad = roots_of(&g3, &[(0, 1), (1, 0), (1, 2), (2, 1)]);
        assert_eq!(levi_of_vanishing(&g3, &bad), Err(Error::NotPartition { n: 3 }));
        let g2 = RootDatum::gl(2).unwrap();
        assert!(matches!(
            levi_of_vanishing(&g2, &[Root(vec![1, 0])]),
            Err(Error::ForeignRoot(_))
        ));
    }

    #[test]
    fn abstract_datum() {
        // A2 in simple-root coordinates
        let roots = vec![
            Root(vec![1, 0]),
            Root(vec![0, 1]),
            Root(vec![1, 1]),
            Root(vec![-1, 0]),
            Root(vec![0, -1]),
            Root(vec![-1, -1]),
        ];
        let a2 = RootDatum::from_roots(2, roots).unwrap();
        assert_eq!(a2.dim_g(), 8);
        assert_eq!(a2.center_dim(), 0);
        let l = levi_of_vanishing(&a2, &[Root(vec![1, 0]), Root(vec![-1, 0])]).unwrap();
        assert_eq!(l.dim(), 4);
        assert!(l.blocks().is_none());

        assert!(RootDatum::from_roots(2, vec![Root(vec![1, 0])]).is_err());
        assert!(RootDatum::from_roots(2, vec![Root(vec![0, 0])]).is_err());
        // rank-2 datum with a single root pair has a 1-dimensional centre
        let gl2ish = RootDatum::from_roots(2, vec![Root(vec![1, -1]), Root(vec![-1, 1])]).unwrap();
        assert_eq!(gl2ish.center_dim(), 1);
    }

    #[test]
    fn levi_monotone_and_bounded() {
        let g4 = RootDatum::gl(4).unwrap();
        let small = levi_of_vanishing(&g4, &roots_of(&g4, &[(0, 1), (1, 0)])).unwrap();
        let big = levi_of_vanishing(
            &g4,
            &roots_of(&g4, &[(0, 1), (1, 0), (0, 2), (2, 0), (1, 2), (2, 1)]),
        )
        .unwrap();
        assert!(small.is_contained_in(&big));
        assert!(!big.is_contained_in(&small));
        for l in [&small, &big] {
            assert!(g4.dim_t() <= l.dim() && l.dim() <= g4.dim_g());
        }
        // every small block sits inside some big block
        for b in small.blocks().unwrap() {
            assert!(big.blocks().unwrap().iter().any(|bb| b.iter().all(|i| bb.contains(i))));
        }
    }
}
