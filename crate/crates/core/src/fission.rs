//! Symbolic quasi-Hamiltonian spaces: doubles, conjugacy classes, fission
//! spaces and the spaces of Stokes data, closed under fusion, gluing and
//! reduction. Every expression carries its acting groups, its dimension and
//! the rule that produced it.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::cartan::{Group, GroupFactor, LeviDatum, RootDatum};
use crate::error::{Error, Result};
use crate::irregular::{IrregularCurve, IrregularType};
use crate::stokes::stokes_budget;

/// A conjugacy class of some acting group; only its dimension matters here.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConjClass {
    pub group: Group,
    pub dim: usize,
    pub label: String,
}

impl ConjClass {
    pub fn new(group: Group, dim: usize, label: impl Into<String>) -> ConjClass {
        ConjClass {
            group,
            dim,
            label: label.into(),
        }
    }

    /// The class of the identity element.
    pub fn identity(group: Group) -> ConjClass {
        ConjClass::new(group, 0, "1")
    }
}

/// Dimension of a semisimple class in `GL(n)` with the given eigenvalue
/// multiplicities: `n^2 - sum m_i^2`.
pub fn gl_class_dim(multiplicities: &[usize]) -> usize {
    let n: usize = multiplicities.iter().sum();
    n * n - multiplicities.iter().map(|m| m * m).sum::<usize>()
}

/// How a reduction accounts for central parameters that act trivially.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub enum CenterCorrection {
    /// Add `2 * (trivially acting centre)` when the reduction exhausts the
    /// acting groups, nothing otherwise.
    #[default]
    Auto,
    Off,
    /// Add `2 * n` unconditionally.
    Params(usize),
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind")]
pub enum Node {
    Double {
        group: Group,
    },
    ConjClass {
        class: ConjClass,
    },
    FissionSpace {
        g: Group,
        h: Group,
        r: usize,
    },
    SpaceOfQ {
        group: Group,
        centralizer: Group,
        order: usize,
        budget: usize,
    },
    Fuse {
        left: Box<SpaceExpr>,
        right: Box<SpaceExpr>,
        over: Group,
    },
    Glue {
        left: Box<SpaceExpr>,
        right: Box<SpaceExpr>,
        over: Group,
    },
    Reduce {
        inner: Box<SpaceExpr>,
        by: Group,
        at: ConjClass,
        center_correction: i64,
    },
}

/// One derivation step: the rule that fired and how the dimension came out.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TraceStep {
    pub rule: String,
    pub formula: String,
    pub dim: i64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SpaceExpr {
    node: Node,
    acting: Vec<Group>,
    dim: i64,
    degenerate: bool,
    step: TraceStep,
    /// Central parameters acting trivially on the whole space.
    #[serde(skip)]
    trivial_center: usize,
}

impl SpaceExpr {
    pub fn node(&self) -> &Node {
        &self.node
    }

    pub fn acting(&self) -> &[Group] {
        &self.acting
    }

    pub fn acting_labels(&self) -> Vec<String> {
        self.acting.iter().map(|g| g.label.clone()).collect()
    }

    pub fn dim(&self) -> i64 {
        self.dim
    }

    pub fn is_degenerate(&self) -> bool {
        self.degenerate
    }

    pub fn step(&self) -> &TraceStep {
        &self.step
    }

    pub fn trivial_center(&self) -> usize {
        self.trivial_center
    }

    /// The correction added by the outermost reduction, if this is one.
    pub fn center_correction(&self) -> Option<i64> {
        match &self.node {
            Node::Reduce {
                center_correction, ..
            } => Some(*center_correction),
            _ => None,
        }
    }

    /// All derivation steps in post-order (children before parents).
    pub fn trace(&self) -> Vec<&TraceStep> {
        let mut out = Vec::new();
        self.collect_trace(&mut out);
        out
    }

    fn collect_trace<'a>(&'a self, out: &mut Vec<&'a TraceStep>) {
        match &self.node {
            Node::Fuse { left, right, .. } | Node::Glue { left, right, .. } => {
                left.collect_trace(out);
                right.collect_trace(out);
            }
            Node::Reduce { inner, .. } => inner.collect_trace(out),
            _ => {}
        }
        out.push(&self.step);
    }

    fn leaf(node: Node, acting: Vec<Group>, dim: usize, trivial_center: usize, rule: &str, formula: String) -> SpaceExpr {
        let dim = dim as i64;
        SpaceExpr {
            node,
            acting,
            dim,
            degenerate: false,
            step: TraceStep {
                rule: rule.to_string(),
                formula,
                dim,
            },
            trivial_center,
        }
    }
}

fn labels(groups: &[Group]) -> String {
    groups.iter().map(|g| g.label.as_str()).collect::<Vec<_>>().join(", ")
}

/// Remove one copy of `g` from an acting list: a whole entry if one matches,
/// otherwise factor by factor, splitting partially used entries.
fn remove_group(acting: &[Group], g: &Group) -> Option<Vec<Group>> {
    if let Some(i) = acting.iter().position(|a| a == g) {
        let mut out = acting.to_vec();
        out.remove(i);
        return Some(out);
    }
    let mut remaining: Vec<Vec<GroupFactor>> = acting.iter().map(|a| a.factors.clone()).collect();
    for f in &g.factors {
        let (i, j) = remaining
            .iter()
            .enumerate()
            .find_map(|(i, fs)| fs.iter().position(|x| x == f).map(|j| (i, j)))?;
        remaining[i].remove(j);
    }
    Some(
        acting
            .iter()
            .zip(remaining)
            .filter_map(|(orig, fs)| {
                if fs.is_empty() {
                    None
                } else if fs.len() == orig.factors.len() {
                    Some(orig.clone())
                } else {
                    Some(Group::product(fs))
                }
            })
            .collect(),
    )
}

fn take(acting: &[Group], g: &Group) -> Result<Vec<Group>> {
    remove_group(acting, g).ok_or_else(|| Error::GroupAbsent {
        group: g.label.clone(),
        acting: labels(acting),
    })
}

/// The trivial group, used to form plain products.
pub fn trivial_group() -> Group {
    Group {
        label: "1".to_string(),
        factors: Vec::new(),
    }
}

pub fn double(group: Group) -> SpaceExpr {
    let d = 2 * group.dim();
    let c = group.center_dim();
    let formula = format!("{d} = 2*{}", group.dim());
    SpaceExpr::leaf(Node::Double { group: group.clone() }, vec![group], d, c, "double", formula)
}

pub fn conj_class(class: ConjClass) -> SpaceExpr {
    let group = class.group.clone();
    let d = class.dim;
    let c = group.center_dim();
    let formula = format!("{d} (class {} of {})", class.label, group.label);
    SpaceExpr::leaf(Node::ConjClass { class }, vec![group], d, c, "class", formula)
}

/// `G x (U+ x U-)^r x H`, acted on by `G x H`.
pub fn fission_space(g: &RootDatum, h: &LeviDatum, r: usize) -> Result<SpaceExpr> {
    if h.rank() != g.rank() {
        return Err(Error::NotLevi {
            inner: h.label(),
            outer: g.label(),
        });
    }
    fission_space_of(g.group(), h.group(), r)
}

/// Fission space between arbitrary acting groups; `h` must have the rank of
/// `g` and no larger dimension.
pub fn fission_space_of(g: Group, h: Group, r: usize) -> Result<SpaceExpr> {
    if r == 0 {
        return Err(Error::ZeroOrder);
    }
    if h.rank() != g.rank() || h.dim() > g.dim() || !(g.dim() - h.dim()).is_multiple_of(2) {
        return Err(Error::NotLevi {
            inner: h.label.clone(),
            outer: g.label.clone(),
        });
    }
    let (dg, dh) = (g.dim(), h.dim());
    let d = dg + dh + r * (dg - dh);
    let c = g.center_dim();
    let formula = format!("{d} = {dg} + {dh} + {r}*({dg} - {dh})");
    Ok(SpaceExpr::leaf(
        Node::FissionSpace {
            g: g.clone(),
            h: h.clone(),
            r,
        },
        vec![g, h],
        d,
        c,
        "fission",
        formula,
    ))
}

/// The space of Stokes data at one pole: `G x H x prod_d Sto_d`, with
/// `H` the centralizer of `Q`. For tame `Q` this is the double.
pub fn space_a(q: &IrregularType) -> SpaceExpr {
    let datum = q.datum();
    let g = datum.group();
    let h = q.centralizer().group();
    let budget = stokes_budget(q);
    let (dg, dh) = (g.dim(), h.dim());
    let d = dg + dh + budget;
    let formula = format!("{d} = {dg} + {dh} + {budget}");
    SpaceExpr::leaf(
        Node::SpaceOfQ {
            group: g.clone(),
            centralizer: h.clone(),
            order: q.order(),
            budget,
        },
        vec![g, h],
        d,
        datum.center_dim(),
        "space_of_stokes_data",
        formula,
    )
}

/// Fusion: dimensions add and one copy of `over` is dropped.
pub fn fuse(left: SpaceExpr, right: SpaceExpr, over: &Group) -> Result<SpaceExpr> {
    take(&left.acting, over)?;
    let rest = take(&right.acting, over)?;
    let mut acting = left.acting.clone();
    acting.extend(rest);
    let dim = left.dim + right.dim;
    let trivial_center = if over.factors.is_empty() {
        left.trivial_center + right.trivial_center
    } else {
        left.trivial_center.min(right.trivial_center)
    };
    let step = TraceStep {
        rule: "fuse".into(),
        formula: format!("{dim} = {} + {} (over {})", left.dim, right.dim, over.label),
        dim,
    };
    Ok(SpaceExpr {
        degenerate: left.degenerate || right.degenerate,
        node: Node::Fuse {
            left: Box::new(left),
            right: Box::new(right),
            over: over.clone(),
        },
        acting,
        dim,
        step,
        trivial_center,
    })
}

/// Gluing: fusion followed by reduction at the identity over `over`.
pub fn glue(left: SpaceExpr, right: SpaceExpr, over: &Group) -> Result<SpaceExpr> {
    let mut acting = take(&left.acting, over)?;
    acting.extend(take(&right.acting, over)?);
    let dim = left.dim + right.dim - 2 * over.dim() as i64;
    let trivial_center = left.trivial_center.min(right.trivial_center);
    let step = TraceStep {
        rule: "glue".into(),
        formula: format!("{dim} = {} + {} - 2*{} (over {})", left.dim, right.dim, over.dim(), over.label),
        dim,
    };
    Ok(SpaceExpr {
        degenerate: left.degenerate || right.degenerate || dim < 0,
        node: Node::Glue {
            left: Box::new(left),
            right: Box::new(right),
            over: over.clone(),
        },
        acting,
        dim,
        step,
        trivial_center,
    })
}

/// Reduction by `by` at the class `at`.
pub fn reduce(inner: SpaceExpr, by: &Group, at: ConjClass, correction: CenterCorrection) -> Result<SpaceExpr> {
    if &at.group != by {
        return Err(Error::ClassGroupMismatch {
            class: at.group.label.clone(),
            expected: by.label.clone(),
        });
    }
    let acting = take(&inner.acting, by)?;
    let exhausted = acting.is_empty();
    let naive = inner.dim - 2 * by.dim() as i64 + at.dim as i64;
    let cc = match correction {
        CenterCorrection::Auto if exhausted => 2 * inner.trivial_center as i64,
        CenterCorrection::Auto | CenterCorrection::Off => 0,
        CenterCorrection::Params(n) => 2 * n as i64,
    };
    let dim = naive + cc;
    let central_point = at.dim == 0 && !by.is_abelian() && exhausted;
    let trivial_center = if cc > 0 { 0 } else { inner.trivial_center };
    let step = TraceStep {
        rule: "reduce".into(),
        formula: format!(
            "{dim} = {} - 2*{} + {} + {cc} (by {} at {})",
            inner.dim,
            by.dim(),
            at.dim,
            by.label,
            at.label
        ),
        dim,
    };
    Ok(SpaceExpr {
        degenerate: inner.degenerate || naive < 0 || central_point,
        node: Node::Reduce {
            inner: Box::new(inner),
            by: by.clone(),
            at,
            center_correction: cc,
        },
        acting,
        dim,
        step,
        trivial_center,
    })
}

/// The chain `A(r) glue_{H_r} ... glue_{H_2} A(1)` with
/// `A(i) = FissionSpace(H_{i+1}, H_i, i)` and `H_{r+1} = G`.
/// Steps with `H_{i+1} = H_i` contribute nothing and are skipped.
pub fn nesting_decomposition(q: &IrregularType) -> Result<SpaceExpr> {
    let chain = q.centralizer_chain()?;
    let r = chain.len();
    let mut groups: Vec<Group> = chain.iter().map(LeviDatum::group).collect();
    groups.push(q.datum().group());
    let mut expr: Option<SpaceExpr> = None;
    for i in (1..=r).rev() {
        let (outer, inner) = (&groups[i], &groups[i - 1]);
        if outer == inner {
            continue;
        }
        let piece = fission_space_of(outer.clone(), inner.clone(), i)?;
        expr = Some(match expr {
            None => piece,
            Some(e) => glue(e, piece, outer)?,
        });
    }
    match expr {
        Some(e) => Ok(e),
        None => {
            let g = q.datum().group();
            fission_space_of(g.clone(), g, r)
        }
    }
}

/// `D^{(g)} (*) A(Q_1) (*) ... (*) A(Q_{m-1}) glue_G A(Q_m)`: the space of
/// Stokes representations of an irregular curve, acted on by `H_1 x ... x H_m`.
pub fn hom_stokes(curve: &IrregularCurve) -> Result<SpaceExpr> {
    let g = curve.datum().group();
    let types: Vec<&IrregularType> = curve.types().collect();
    let (last, init) = types.split_last().ok_or(Error::NoPoints)?;
    let pieces = (0..curve.genus())
        .map(|_| double(g.clone()))
        .chain(init.iter().map(|q| space_a(q)));
    let mut left: Option<SpaceExpr> = None;
    for p in pieces {
        left = Some(match left {
            None => p,
            Some(l) => fuse(l, p, &g)?,
        });
    }
    let left = left.unwrap_or_else(|| conj_class(ConjClass::identity(g.clone())));
    glue(left, space_a(last), &g)
}

/// Leaf of the space of Stokes representations: reduction by
/// `H = H_1 x ... x H_m` at the product of the given classes.
pub fn wild_leaf_dim(curve: &IrregularCurve, classes: &[ConjClass], correction: CenterCorrection) -> Result<SpaceExpr> {
    let m = curve.points().len();
    if classes.len() != m {
        return Err(Error::ClassCount {
            expected: m,
            got: classes.len(),
        });
    }
    let mut factors = Vec::new();
    let mut central_point = false;
    for (q, class) in curve.types().zip(classes) {
        let h = q.centralizer().group();
        if class.group != h {
            return Err(Error::ClassGroupMismatch {
                class: class.group.label.clone(),
                expected: h.label,
            });
        }
        central_point |= class.dim == 0 && !h.is_abelian();
        factors.extend(h.factors);
    }
    let by = Group {
        label: classes.iter().map(|c| c.group.label.as_str()).collect::<Vec<_>>().join("x"),
        factors,
    };
    let at = ConjClass::new(
        by.clone(),
        classes.iter().map(|c| c.dim).sum(),
        classes.iter().map(|c| c.label.as_str()).collect::<Vec<_>>().join("x"),
    );
    let mut leaf = reduce(hom_stokes(curve)?, &by, at, correction)?;
    leaf.degenerate |= central_point;
    Ok(leaf)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ColouredEdge {
    pub a: String,
    pub b: String,
    pub colour: String,
}

impl ColouredEdge {
    pub fn new(a: impl Into<String>, b: impl Into<String>, colour: impl Into<String>) -> ColouredEdge {
        ColouredEdge {
            a: a.into(),
            b: b.into(),
            colour: colour.into(),
        }
    }
}

/// A simple graph whose edges are coloured so that each colour class is a
/// complete multipartite graph.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ColouredGraph {
    pub nodes: Vec<String>,
    pub edges: Vec<ColouredEdge>,
}

/// One complete multipartite piece of a coloured graph.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Piece {
    pub colour: String,
    pub parts: Vec<Vec<String>>,
    pub rep_dim: usize,
    pub expr: SpaceExpr,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GraphBlocks {
    pub pieces: Vec<Piece>,
    pub rep_dim: usize,
    /// The invertible representations, fused over shared node groups.
    pub expr: SpaceExpr,
    /// The product of all node groups.
    pub node_group: Group,
}

/// Building blocks of the invertible representations of a coloured graph.
///
/// A piece whose parts are all single nodes is
/// `Reduce(FissionSpace(GL(N), prod GL(d_i), 2), GL(N), 1)`; otherwise each
/// part is first split by a one-pole fission space onto its nodes.
pub fn graph_blocks(graph: &ColouredGraph, dims: &BTreeMap<String, usize>) -> Result<GraphBlocks> {
    let bad = |s: String| Error::InvalidGraph(s);
    if graph.nodes.is_empty() {
        return Err(bad("graph has no nodes".into()));
    }
    let mut index = BTreeMap::new();
    for (i, v) in graph.nodes.iter().enumerate() {
        if index.insert(v.as_str(), i).is_some() {
            return Err(bad(format!("duplicate node {v:?}")));
        }
        match dims.get(v) {
            Some(&d) if d > 0 => {}
            _ => return Err(bad(format!("node {v:?} needs a positive dimension"))),
        }
    }
    let node_factor = |i: usize| GroupFactor::gl(dims[&graph.nodes[i]], Some(&graph.nodes[i]));

    let mut pairs = BTreeSet::new();
    let mut by_colour: BTreeMap<&str, BTreeSet<(usize, usize)>> = BTreeMap::new();
    for e in &graph.edges {
        let (Some(&a), Some(&b)) = (index.get(e.a.as_str()), index.get(e.b.as_str())) else {
            return Err(bad(format!("edge {}-{} names an unknown node", e.a, e.b)));
        };
        if a == b {
            return Err(bad(format!("self-loop at {}", e.a)));
        }
        let p = (a.min(b), a.max(b));
        if !pairs.insert(p) {
            return Err(bad(format!("duplicate edge {}-{}", e.a, e.b)));
        }
        by_colour.entry(e.colour.as_str()).or_default().insert(p);
    }

    let mut pieces = Vec::new();
    for (colour, edges) in &by_colour {
        let verts: BTreeSet<usize> = edges.iter().flat_map(|&(a, b)| [a, b]).collect();
        let adjacent = |a: usize, b: usize| edges.contains(&(a.min(b), a.max(b)));
        let mut parts: Vec<Vec<usize>> = Vec::new();
        for &v in &verts {
            match parts.iter_mut().find(|p| !adjacent(p[0], v)) {
                Some(p) => {
                    if p.iter().any(|&u| adjacent(u, v)) {
                        return Err(bad(format!("colour {colour:?} is not complete multipartite")));
                    }
                    p.push(v);
                }
                None => parts.push(vec![v]),
            }
        }
        for (i, p) in parts.iter().enumerate() {
            for q in &parts[i + 1..] {
                if p.iter().any(|&a| q.iter().any(|&b| !adjacent(a, b))) {
                    return Err(bad(format!("colour {colour:?} is not complete multipartite")));
                }
            }
        }

        let d = |i: usize| dims[&graph.nodes[i]];
        let part_dims: Vec<usize> = parts.iter().map(|p| p.iter().map(|&i| d(i)).sum()).collect();
        let n: usize = part_dims.iter().sum();
        let g = Group::product(vec![GroupFactor::gl(n, Some(colour))]);
        let k = Group::product(parts.iter().flatten().map(|&i| node_factor(i)).collect());
        let fission = if parts.iter().all(|p| p.len() == 1) {
            fission_space_of(g.clone(), k, 2)?
        } else {
            let h = Group::product(
                parts
                    .iter()
                    .zip(&part_dims)
                    .map(|(p, &dp)| {
                        if p.len() == 1 {
                            node_factor(p[0])
                        } else {
                            let tag: Vec<&str> = p.iter().map(|&i| graph.nodes[i].as_str()).collect();
                            GroupFactor::gl(dp, Some(&tag.join("+")))
                        }
                    })
                    .collect(),
            );
            let outer = fission_space_of(g.clone(), h.clone(), 2)?;
            let split = fission_space_of(h.clone(), k, 1)?;
            glue(outer, split, &h)?
        };
        let expr = reduce(fission, &g, ConjClass::identity(g.clone()), CenterCorrection::Auto)?;
        let rep_dim = 2 * edges.iter().map(|&(a, b)| d(a) * d(b)).sum::<usize>();
        pieces.push(Piece {
            colour: colour.to_string(),
            parts: parts
                .iter()
                .map(|p| p.iter().map(|&i| graph.nodes[i].clone()).collect())
                .collect(),
            rep_dim,
            expr,
        });
    }

    let mut expr: Option<SpaceExpr> = None;
    for p in &pieces {
        expr = Some(match expr {
            None => p.expr.clone(),
            Some(acc) => {
                let have: Vec<&GroupFactor> = acc.acting.iter().flat_map(|g| &g.factors).collect();
                let shared: Vec<GroupFactor> = p
                    .expr
                    .acting
                    .iter()
                    .flat_map(|g| &g.factors)
                    .filter(|f| have.contains(f))
                    .cloned()
                    .collect();
                let over = if shared.is_empty() {
                    trivial_group()
                } else {
                    Group::product(shared)
                };
                fuse(acc, p.expr.clone(), &over)?
            }
        });
    }
    let covered: BTreeSet<usize> = pairs.iter().flat_map(|&(a, b)| [a, b]).collect();
    for i in (0..graph.nodes.len()).filter(|i| !covered.contains(i)) {
        let point = conj_class(ConjClass::identity(Group::product(vec![node_factor(i)])));
        expr = Some(match expr {
            None => point,
            Some(acc) => fuse(acc, point, &trivial_group())?,
        });
    }
    let rep_dim = pieces.iter().map(|p| p.rep_dim).sum();
    Ok(GraphBlocks {
        pieces,
        rep_dim,
        expr: expr.expect("graph has at least one node"),
        node_group: Group::product((0..graph.nodes.len()).map(node_factor).collect()),
    })
}

/// Multiplicative quiver variety: reduce the graph's building blocks by all
/// node groups at a class of total dimension `class_dim` (0 for a generic
/// central parameter).
pub fn quiver_reduction(blocks: &GraphBlocks, class_dim: usize, correction: CenterCorrection) -> Result<SpaceExpr> {
    let by = blocks.node_group.clone();
    let label = if class_dim == 0 { "q" } else { "C" };
    reduce(blocks.expr.clone(), &by, ConjClass::new(by.clone(), class_dim, label), correction)
}
