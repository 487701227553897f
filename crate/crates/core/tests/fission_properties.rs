mod common;

use std::collections::BTreeMap;

use proptest::prelude::*;

use common::*;
use wildchar::cartan::GroupFactor;
use wildchar::fission::{
    conj_class, double, fission_space_of, fuse, glue, graph_blocks, hom_stokes, nesting_decomposition, quiver_reduction,
    reduce, space_a, trivial_group, wild_leaf_dim, CenterCorrection, ColouredEdge, ColouredGraph, ConjClass,
};
use wildchar::{Group, IrregularCurve, IrregularType};

fn sorted_labels(expr: &wildchar::fission::SpaceExpr) -> Vec<String> {
    let mut v = expr.acting_labels();
    v.sort();
    v
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn nesting_matches_direct(coeffs in int_coeffs(6, 4, 1)) {
        let q = to_type(&coeffs);
        prop_assume!(!q.is_tame());
        prop_assert_eq!(nesting_decomposition(&q).unwrap().dim(), space_a(&q).dim());
    }

    #[test]
    fn direct_matches_coordinate_count(coeffs in int_coeffs(6, 4, 1)) {
        let q = to_type(&coeffs);
        let n = coeffs[0].len();
        let budget: usize = gl_pairs(n).into_iter().map(|(i, j)| exact_degree(&coeffs, i, j)).sum();
        let want = n * n + exact_centralizer_dim(&coeffs) + budget;
        prop_assert_eq!(space_a(&q).dim(), want as i64);
    }

    #[test]
    fn fuse_is_associative(n in 1usize..=4, dims in prop::collection::vec(0usize..=12, 3)) {
        let g = Group::gl(n);
        let cls = |d: usize, l: &str| conj_class(ConjClass::new(g.clone(), d, l));
        let left = fuse(fuse(cls(dims[0], "a"), cls(dims[1], "b"), &g).unwrap(), cls(dims[2], "c"), &g).unwrap();
        let right = fuse(cls(dims[0], "a"), fuse(cls(dims[1], "b"), cls(dims[2], "c"), &g).unwrap(), &g).unwrap();
        prop_assert_eq!(left.dim(), right.dim());
        prop_assert_eq!(left.dim(), dims.iter().sum::<usize>() as i64);
        prop_assert_eq!(sorted_labels(&left), sorted_labels(&right));
    }

    #[test]
    fn tame_hom_dims(n in 1usize..=4, genus in 0usize..=3, m in 1usize..=5) {
        let expr = hom_stokes(&tame_curve(n, genus, m)).unwrap();
        let want = (2 * genus as i64 - 2 + 2 * m as i64) * (n * n) as i64;
        prop_assert_eq!(expr.dim(), want);
        prop_assert_eq!(expr.acting().len(), m);
    }
}

#[test]
fn glue_commutes_with_disjoint_fuse() {
    let g = Group::gl(3);
    let h = Group::product(vec![GroupFactor::gl(2, None), GroupFactor::gl(1, None)]);
    let t = Group::product(vec![GroupFactor::gl(1, None); 3]);
    let k = Group::product(vec![GroupFactor::gl(2, Some("k"))]);
    let outer = || fission_space_of(g.clone(), h.clone(), 2).unwrap();
    let inner = || fission_space_of(h.clone(), t.clone(), 1).unwrap();
    let one = trivial_group();
    let a = fuse(glue(outer(), inner(), &h).unwrap(), double(k.clone()), &one).unwrap();
    let b = glue(fuse(outer(), double(k.clone()), &one).unwrap(), inner(), &h).unwrap();
    assert_eq!(a.dim(), b.dim());
    assert_eq!(a.dim(), 22 + 8);
    assert_eq!(sorted_labels(&a), sorted_labels(&b));
}

#[test]
fn fission_quiver_identity() {
    for d1 in 1..=6 {
        for d2 in 1..=6 {
            let n = d1 + d2;
            let g = Group::gl(n);
            let h = Group::product(vec![GroupFactor::gl(d1, Some("a")), GroupFactor::gl(d2, Some("b"))]);
            let space = fission_space_of(g.clone(), h, 2).unwrap();
            let block = reduce(space, &g, ConjClass::identity(g.clone()), CenterCorrection::Auto).unwrap();
            // dim G + dim H + 4 d1 d2 - 2 dim G, with dim G = dim H + 2 d1 d2
            let dim_h = d1 * d1 + d2 * d2;
            let brute = (dim_h + 2 * d1 * d2) + dim_h + 4 * d1 * d2 - 2 * (dim_h + 2 * d1 * d2);
            assert_eq!(block.dim(), brute as i64);
            assert_eq!(block.dim(), (2 * d1 * d2) as i64);

            let graph = ColouredGraph {
                nodes: vec!["x".into(), "y".into()],
                edges: vec![ColouredEdge::new("x", "y", "red")],
            };
            let dims = BTreeMap::from([("x".to_string(), d1), ("y".to_string(), d2)]);
            let blocks = graph_blocks(&graph, &dims).unwrap();
            assert_eq!(blocks.rep_dim, 2 * d1 * d2);
            assert_eq!(blocks.expr.dim(), (2 * d1 * d2) as i64);
        }
    }
}

#[test]
fn triangle_reduction() {
    let graph = ColouredGraph {
        nodes: vec!["1".into(), "2".into(), "3".into()],
        edges: vec![
            ColouredEdge::new("1", "2", "c"),
            ColouredEdge::new("2", "3", "c"),
            ColouredEdge::new("1", "3", "c"),
        ],
    };
    let dims = BTreeMap::from([("1".into(), 1), ("2".into(), 1), ("3".into(), 1)]);
    let blocks = graph_blocks(&graph, &dims).unwrap();
    assert_eq!(blocks.rep_dim, 6);
    assert_eq!(quiver_reduction(&blocks, 0, CenterCorrection::Auto).unwrap().dim(), 2);
}

fn regular_leaf(genus: usize, m: usize) -> i64 {
    let curve = tame_curve(2, genus, m);
    let classes = vec![ConjClass::new(Group::gl(2), 2, "reg"); m];
    wild_leaf_dim(&curve, &classes, CenterCorrection::Auto).unwrap().dim()
}

#[test]
fn tame_leaves() {
    assert_eq!(regular_leaf(0, 3), 0);
    assert_eq!(regular_leaf(0, 4), 2);
    // (8 + 2) - 8 + 0 + 2 for GL(2): the SL(2) Markov surface plus two determinants
    assert_eq!(regular_leaf(1, 1), 4);
    // generic count (2g - 2) dim G + sum dim C + 2
    for g in 0..=2usize {
        for m in 1..=5usize {
            let generic = 4 * (2 * g as i64 - 2) + 2 * m as i64 + 2;
            if generic >= 0 {
                assert_eq!(regular_leaf(g, m), generic, "g = {g}, m = {m}");
            }
        }
    }
}

#[test]
fn gstar_configuration() {
    let wild = IrregularType::new(gl(2), vec![real(&[1.0, 0.0])]).unwrap();
    let curve = IrregularCurve::new(0, vec![point("0", wild), point("inf", IrregularType::tame(gl(2)))]).unwrap();
    let hom = hom_stokes(&curve).unwrap();
    assert_eq!(hom.dim(), 8);
    assert_eq!(hom.acting_labels(), vec!["T(2)", "GL(2)"]);
    let t = curve.points()[0].irregular_type.centralizer().group();
    let classes = [ConjClass::new(t, 0, "pt"), ConjClass::new(Group::gl(2), 2, "reg")];
    let leaf = wild_leaf_dim(&curve, &classes, CenterCorrection::Auto).unwrap();
    assert_eq!(leaf.dim(), 0);
    assert!(leaf.is_degenerate());
}

#[test]
fn wild_hom_dimension_formula() {
    // (2g - 2) dim G + sum dim A(Q_i) on a few mixed curves
    let q1 = to_type(&[vec![(1, 0), (0, 0), (0, 0)], vec![(1, 0), (1, 0), (0, 0)]]);
    let q2 = to_type(&[vec![(2, 0), (1, 0), (0, 0)]]);
    for genus in 0..=2usize {
        let curve = IrregularCurve::new(
            genus,
            vec![point("a", q1.clone()), point("b", q2.clone()), point("c", IrregularType::tame(gl(3)))],
        )
        .unwrap();
        let want = (2 * genus as i64 - 2) * 9 + space_a(&q1).dim() + space_a(&q2).dim() + 18;
        assert_eq!(hom_stokes(&curve).unwrap().dim(), want);
    }
}
