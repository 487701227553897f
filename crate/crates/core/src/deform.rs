//! Admissibility of sampled families of irregular curves and event detection
//! (walls `<alpha, A> = 0`, colliding singular directions) along sampled
//! paths of Cartan vectors. Paths are piecewise linear between samples.

use num_complex::Complex64;
use serde::Serialize;

use crate::cartan::{Root, RootDatum};
use crate::error::{Error, Result};
use crate::irregular::{CartanVector, IrregularCurve, ZERO_REL_TOL};

/// Event brackets are refined to this width in `t`.
pub const BRACKET_TOL: f64 = 1e-10;

/// A ray whose pairing is below this (relative) size at a candidate
/// collision is treated as passing through zero.
pub const COLLISION_REL_TOL: f64 = 1e-8;

pub const SMOOTHNESS_NOTE: &str = "fibres are assumed smooth; the curve itself is not deformed";
pub const NO_POSITIONS_NOTE: &str = "no point positions given; the distinct-points condition holds vacuously";
pub const MIXED_LEVEL_NOTE: &str =
    "direction collisions compare leading-coefficient rays only; roots of lower degree (mixed levels) are not compared";

/// A family of curves sampled at strictly monotone parameters `t`, all of
/// the same shape (group, genus, labels, presence of positions).
#[derive(Clone, Debug, PartialEq)]
pub struct CurveFamily {
    samples: Vec<(f64, IrregularCurve)>,
}

fn check_monotone(ts: &[f64]) -> Result<()> {
    if ts.len() < 2 {
        return Err(Error::TooFewSamples(ts.len()));
    }
    if ts.iter().any(|t| !t.is_finite()) {
        return Err(Error::NonMonotone);
    }
    let up = ts.windows(2).all(|w| w[0] < w[1]);
    let down = ts.windows(2).all(|w| w[0] > w[1]);
    if up || down {
        Ok(())
    } else {
        Err(Error::NonMonotone)
    }
}

impl CurveFamily {
    pub fn new(samples: Vec<(f64, IrregularCurve)>) -> Result<CurveFamily> {
        let ts: Vec<f64> = samples.iter().map(|s| s.0).collect();
        check_monotone(&ts)?;
        let first = &samples[0].1;
        for (t, c) in &samples[1..] {
            let shape = |what: &str| Err(Error::FamilyShape(format!("{what} differs at t = {t}")));
            if c.datum() != first.datum() {
                return shape("group");
            }
            if c.genus() != first.genus() {
                return shape("genus");
            }
            if c.points().len() != first.points().len() {
                return shape("number of points");
            }
            for (p, q) in c.points().iter().zip(first.points()) {
                if p.label != q.label {
                    return shape("point labels");
                }
                if p.position.is_some() != q.position.is_some() {
                    return shape("presence of positions");
                }
            }
        }
        Ok(CurveFamily { samples })
    }

    pub fn samples(&self) -> &[(f64, IrregularCurve)] {
        &self.samples
    }

    /// The sub-family on samples `range`.
    pub fn restrict(&self, range: std::ops::Range<usize>) -> Result<CurveFamily> {
        CurveFamily::new(self.samples.get(range).map(<[_]>::to_vec).unwrap_or_default())
    }

    fn has_positions(&self) -> bool {
        self.samples[0].1.points().iter().all(|p| p.position.is_some())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind")]
pub enum EventKind {
    DegreeDrop {
        point: String,
        root: Root,
        from: usize,
        to: usize,
    },
    DegreeRise {
        point: String,
        root: Root,
        from: usize,
        to: usize,
    },
    PointsCollide {
        a: String,
        b: String,
    },
    Wall {
        #[serde(skip_serializing_if = "Option::is_none")]
        point: Option<String>,
        root: Root,
    },
    DirectionCollision {
        #[serde(skip_serializing_if = "Option::is_none")]
        point: Option<String>,
        roots: [Root; 2],
    },
}

/// An event located in the bracket `t_lo <= t <= t_hi`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Event {
    pub t_lo: f64,
    pub t_hi: f64,
    #[serde(flatten)]
    pub kind: EventKind,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "verdict")]
pub enum Verdict {
    Admissible,
    Inadmissible { first: Event },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Admissibility {
    pub verdict: Verdict,
    pub events: Vec<Event>,
    pub notes: Vec<String>,
}

impl Admissibility {
    pub fn is_admissible(&self) -> bool {
        self.verdict == Verdict::Admissible
    }
}

/// Closest approach of `a + s (b - a)` to zero for `s` in `[0, 1]`; the
/// parameter if the value there is within `tol` of zero.
pub fn linear_zero(a: Complex64, b: Complex64, tol: f64) -> Option<f64> {
    let d = b - a;
    let dd = d.norm_sqr();
    let s = if dd == 0.0 {
        0.0
    } else {
        (-(d.conj() * a).re / dd).clamp(0.0, 1.0)
    };
    ((a + d * s).norm() <= tol).then_some(s)
}

/// Shrink `[lo, hi]` (with `f(lo)` and `f(hi)` of opposite signs) to width `tol`.
fn bisect(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, tol: f64) -> (f64, f64) {
    let mut f_lo = f(lo);
    while (hi - lo).abs() > tol {
        let mid = 0.5 * (lo + hi);
        let fm = f(mid);
        if fm == 0.0 {
            return (mid, mid);
        }
        if (fm < 0.0) == (f_lo < 0.0) {
            lo = mid;
            f_lo = fm;
        } else {
            hi = mid;
        }
    }
    (lo, hi)
}

fn sorted(lo: f64, hi: f64) -> (f64, f64) {
    (lo.min(hi), lo.max(hi))
}

fn lerp(a: Complex64, b: Complex64, s: f64) -> Complex64 {
    a + (b - a) * s
}

/// The degree of a coefficient list `c_1..c_D`: the largest `d` with `c_d` nonzero.
fn degree_of(values: impl Iterator<Item = Complex64>, tol: f64) -> usize {
    values
        .enumerate()
        .filter(|(_, v)| v.norm() > tol)
        .map(|(d, _)| d + 1)
        .last()
        .unwrap_or(0)
}

/// Piecewise-linear degree profile of a coefficient track.
#[derive(Clone, Copy, Debug)]
enum State {
    /// A single parameter value (a sample or an interior zero), bracketed.
    Point { lo: f64, hi: f64, deg: usize },
    /// The open part of segment `(t0, t1)` between consecutive points.
    Open { t0: f64, t1: f64, deg: usize },
}

impl State {
    fn deg(&self) -> usize {
        match *self {
            State::Point { deg, .. } | State::Open { deg, .. } => deg,
        }
    }
}

/// Degree states along the path: samples, interior zeros of any coefficient
/// and the open pieces between them.
fn degree_states(ts: &[f64], track: &[Vec<Complex64>], tol: f64) -> Vec<State> {
    let mut states = vec![State::Point {
        lo: ts[0],
        hi: ts[0],
        deg: degree_of(track[0].iter().copied(), tol),
    }];
    for j in 0..ts.len() - 1 {
        let (t0, t1) = (ts[j], ts[j + 1]);
        let (a, b) = (&track[j], &track[j + 1]);
        let at = |s: f64| t0 + s * (t1 - t0);
        let live: Vec<usize> = (0..a.len())
            .filter(|&d| a[d].norm() > tol || b[d].norm() > tol)
            .collect();
        let open_deg = live.last().map_or(0, |d| d + 1);
        let mut zeros: Vec<(f64, usize)> = live
            .iter()
            .filter_map(|&d| linear_zero(a[d], b[d], tol).map(|s| (s, d)))
            .filter(|&(s, _)| s > 0.0 && s < 1.0)
            .collect();
        zeros.sort_by(|x, y| x.0.total_cmp(&y.0));
        zeros.dedup_by(|x, y| (x.0 - y.0).abs() <= 1e-12);
        let mut prev_t = t0;
        for (s, d) in zeros {
            let t = at(s);
            states.push(State::Open {
                t0: prev_t,
                t1: t,
                deg: open_deg,
            });
            // the projection onto the direction of motion is increasing in s
            let dir = b[d] - a[d];
            let phi = |t: f64| (dir.conj() * lerp(a[d], b[d], (t - t0) / (t1 - t0))).re;
            let (lo, hi) = bisect(phi, t0, t1, BRACKET_TOL);
            let (lo, hi) = sorted(lo, hi);
            let value = (0..a.len()).map(|e| if e == d { Complex64::new(0.0, 0.0) } else { lerp(a[e], b[e], s) });
            states.push(State::Point {
                lo,
                hi,
                deg: degree_of(value, tol),
            });
            prev_t = t;
        }
        states.push(State::Open {
            t0: prev_t,
            t1,
            deg: open_deg,
        });
        states.push(State::Point {
            lo: t1,
            hi: t1,
            deg: degree_of(b.iter().copied(), tol),
        });
    }
    states
}

/// Each change of degree, bracketed: `(lo, hi, from, to)`.
fn degree_changes(states: &[State]) -> Vec<(f64, f64, usize, usize)> {
    let mut out = Vec::new();
    for w in states.windows(2) {
        let (prev, next) = (w[0], w[1]);
        if prev.deg() == next.deg() {
            continue;
        }
        let (lo, hi) = match (prev, next) {
            (_, State::Point { lo, hi, .. }) | (State::Point { lo, hi, .. }, _) => (lo, hi),
            (State::Open { t1, .. }, State::Open { .. }) => (t1, t1),
        };
        out.push((lo, hi, prev.deg(), next.deg()));
    }
    out
}

/// Maximal parameter intervals on which the degree is 0, merged.
fn zero_intervals(states: &[State]) -> Vec<(f64, f64)> {
    let mut out: Vec<(f64, f64)> = Vec::new();
    for st in states {
        let iv = match *st {
            State::Point { lo, hi, deg: 0 } => (lo, hi),
            State::Open { t0, t1, deg: 0 } => sorted(t0, t1),
            _ => continue,
        };
        match out.last_mut() {
            Some(last) if iv.0 <= last.1 + BRACKET_TOL && iv.1 >= last.0 - BRACKET_TOL => {
                *last = (last.0.min(iv.0), last.1.max(iv.1));
            }
            _ => out.push(iv),
        }
    }
    out
}

/// One root from each `+-` pair, in datum order.
fn canonical_roots(datum: &RootDatum) -> Vec<(usize, &Root)> {
    datum
        .roots()
        .iter()
        .enumerate()
        .filter(|(i, r)| datum.root_index(&r.neg()).is_some_and(|j| *i < j))
        .collect()
}

/// Fraction of the way along the path, so decreasing paths sort correctly.
fn progress(ts: &[f64], t: f64) -> f64 {
    (t - ts[0]) / (ts[ts.len() - 1] - ts[0])
}

fn sort_events(ts: &[f64], events: &mut [Event]) {
    events.sort_by(|x, y| {
        let px = progress(ts, x.t_lo).min(progress(ts, x.t_hi));
        let py = progress(ts, y.t_lo).min(progress(ts, y.t_hi));
        px.total_cmp(&py)
    });
}

/// Degree changes of every `alpha o Q_i` and collisions of marked points
/// (when positions are given) along the family.
pub fn check_admissible(fam: &CurveFamily) -> Result<Admissibility> {
    let ts: Vec<f64> = fam.samples.iter().map(|s| s.0).collect();
    let first = &fam.samples[0].1;
    let datum = first.datum();
    let mut events = Vec::new();
    let mut notes = vec![SMOOTHNESS_NOTE.to_string()];

    for (i, point) in first.points().iter().enumerate() {
        let types: Vec<_> = fam.samples.iter().map(|(_, c)| &c.points()[i].irregular_type).collect();
        let order = types.iter().map(|q| q.order()).max().unwrap_or(0);
        let scale = types
            .iter()
            .flat_map(|q| q.coeffs().iter().flatten())
            .map(|c| c.norm())
            .fold(0.0, f64::max);
        let tol = ZERO_REL_TOL * (1.0 + scale);
        for (_, root) in canonical_roots(datum) {
            let track: Vec<Vec<Complex64>> = types
                .iter()
                .map(|q| {
                    (1..=order)
                        .map(|d| q.coeff(d).map_or(Complex64::new(0.0, 0.0), |a| root.pair(a)))
                        .collect()
                })
                .collect();
            for (lo, hi, from, to) in degree_changes(&degree_states(&ts, &track, tol)) {
                let detail = format!("degree of {root} at {} changes {from} -> {to}", point.label);
                let (point, root) = (point.label.clone(), root.clone());
                let kind = if to < from {
                    EventKind::DegreeDrop { point, root, from, to }
                } else {
                    EventKind::DegreeRise { point, root, from, to }
                };
                events.push(Event {
                    t_lo: lo,
                    t_hi: hi,
                    kind,
                    detail,
                });
            }
        }
    }

    if fam.has_positions() {
        let pts = first.points();
        for a in 0..pts.len() {
            for b in a + 1..pts.len() {
                let track: Vec<Vec<Complex64>> = fam
                    .samples
                    .iter()
                    .map(|(_, c)| {
                        let p = c.points();
                        vec![p[a].position.unwrap() - p[b].position.unwrap()]
                    })
                    .collect();
                let scale = track.iter().map(|v| v[0].norm()).fold(0.0, f64::max);
                let states = degree_states(&ts, &track, ZERO_REL_TOL * (1.0 + scale));
                for (lo, hi) in zero_intervals(&states) {
                    events.push(Event {
                        t_lo: lo,
                        t_hi: hi,
                        kind: EventKind::PointsCollide {
                            a: pts[a].label.clone(),
                            b: pts[b].label.clone(),
                        },
                        detail: format!("points {} and {} coincide", pts[a].label, pts[b].label),
                    });
                }
            }
        }
    } else {
        notes.push(NO_POSITIONS_NOTE.to_string());
    }

    sort_events(&ts, &mut events);
    let verdict = match events.first() {
        Some(e) => Verdict::Inadmissible { first: e.clone() },
        None => Verdict::Admissible,
    };
    Ok(Admissibility {
        verdict,
        events,
        notes,
    })
}

/// Walls `<alpha, A(t)> = 0` (each `+-` pair once) and collisions of the
/// rays `<alpha, A>`, `<beta, A>` (`alpha != +-beta`) becoming positively
/// parallel, along the piecewise-linear path through `samples`.
pub fn wall_events(samples: &[(f64, CartanVector)], datum: &RootDatum) -> Result<Vec<Event>> {
    wall_events_at(samples, datum, None)
}

/// As [`wall_events`], tagging every event with a marked point.
pub fn wall_events_at(samples: &[(f64, CartanVector)], datum: &RootDatum, point: Option<&str>) -> Result<Vec<Event>> {
    let ts: Vec<f64> = samples.iter().map(|s| s.0).collect();
    check_monotone(&ts)?;
    for (_, a) in samples {
        if a.len() != datum.rank() {
            return Err(Error::CartanLength {
                expected: datum.rank(),
                got: a.len(),
            });
        }
    }
    let scale = samples
        .iter()
        .flat_map(|(_, a)| a.iter())
        .map(|c| c.norm())
        .fold(0.0, f64::max);
    let tol = ZERO_REL_TOL * (1.0 + scale);
    let point = point.map(str::to_string);
    let mut events = Vec::new();

    let (t_min, t_max) = sorted(ts[0], ts[ts.len() - 1]);
    for (_, root) in canonical_roots(datum) {
        let track: Vec<Vec<Complex64>> = samples.iter().map(|(_, a)| vec![root.pair(a)]).collect();
        for (lo, hi) in zero_intervals(&degree_states(&ts, &track, tol)) {
            // a path that never leaves the wall does not cross it
            if lo - t_min <= BRACKET_TOL && t_max - hi <= BRACKET_TOL {
                continue;
            }
            events.push(Event {
                t_lo: lo,
                t_hi: hi,
                kind: EventKind::Wall {
                    point: point.clone(),
                    root: root.clone(),
                },
                detail: format!("<{root}, A> = 0"),
            });
        }
    }

    let roots = datum.roots();
    let neg: Vec<usize> = roots.iter().map(|r| datum.root_index(&r.neg()).unwrap_or(usize::MAX)).collect();
    for i in 0..roots.len() {
        for j in i + 1..roots.len() {
            // skip beta = -alpha, and keep one pair from each {(a, b), (-a, -b)}
            if j == neg[i] || i.min(j) > neg[i].min(neg[j]) {
                continue;
            }
            let pair = |a: &CartanVector| (roots[i].pair(a), roots[j].pair(a));
            let diff = Root(roots[i].0.iter().zip(&roots[j].0).map(|(a, b)| a - b).collect());
            for (lo, hi) in parallel_crossings(&ts, samples, pair, tol) {
                // equal values on the wall of the root alpha - beta: already that wall
                if on_wall(&events, &diff, lo, hi) {
                    continue;
                }
                events.push(Event {
                    t_lo: lo,
                    t_hi: hi,
                    kind: EventKind::DirectionCollision {
                        point: point.clone(),
                        roots: [roots[i].clone(), roots[j].clone()],
                    },
                    detail: format!("rays of {} and {} coincide", roots[i], roots[j]),
                });
            }
        }
    }
    sort_events(&ts, &mut events);
    Ok(events)
}

fn on_wall(events: &[Event], root: &Root, lo: f64, hi: f64) -> bool {
    let neg = root.neg();
    events.iter().any(|e| match &e.kind {
        EventKind::Wall { root: r, .. } => {
            (r == root || *r == neg) && e.t_lo <= hi + BRACKET_TOL && lo <= e.t_hi + BRACKET_TOL
        }
        _ => false,
    })
}

/// Sign of `f` just past an end of a segment where `f(s) = c0 + c1 s + c2 s^2`
/// vanishes: the first nonnegligible term of the expansion there.
fn side_sign(c: [f64; 3], at_end: bool, small: f64) -> f64 {
    let (slope, curve) = if at_end { (-(c[1] + 2.0 * c[2]), c[2]) } else { (c[1], c[2]) };
    if slope.abs() > small {
        slope.signum()
    } else if curve.abs() > small {
        curve.signum()
    } else {
        0.0
    }
}

/// Parameters where `Im(p conj(q))` changes sign with `Re(p conj(q)) > 0`.
fn parallel_crossings(
    ts: &[f64],
    samples: &[(f64, CartanVector)],
    pair: impl Fn(&CartanVector) -> (Complex64, Complex64),
    tol: f64,
) -> Vec<(f64, f64)> {
    let vals: Vec<(Complex64, Complex64)> = samples.iter().map(|(_, a)| pair(a)).collect();
    let pq_at = |t: f64| -> (Complex64, Complex64) {
        let j = (0..ts.len() - 1)
            .find(|&j| sorted(ts[j], ts[j + 1]).0 <= t && t <= sorted(ts[j], ts[j + 1]).1)
            .unwrap_or(ts.len() - 2);
        let s = (t - ts[j]) / (ts[j + 1] - ts[j]);
        (lerp(vals[j].0, vals[j + 1].0, s), lerp(vals[j].1, vals[j + 1].1, s))
    };
    let w_at = |t: f64| -> Complex64 {
        let (p, q) = pq_at(t);
        p * q.conj()
    };
    let scale = vals.iter().map(|(p, q)| p.norm().max(q.norm())).fold(0.0, f64::max);
    // a ray through zero flips direction; that is a wall, not a collision
    let vanish = COLLISION_REL_TOL * (1.0 + scale);
    let collinear = |p: Complex64, q: Complex64| p.norm() > vanish && q.norm() > vanish && (p * q.conj()).re > 0.0;
    let span = (ts[ts.len() - 1] - ts[0]).abs();
    let eta = 1e-8 * span;
    // the location of a tangential zero is only good to about sqrt(eps)
    let snap = 1e-6 * span;
    let (t_min, t_max) = sorted(ts[0], ts[ts.len() - 1]);

    // Im(p conj(q)) on segment j as a quadratic in the local parameter
    let segments: Vec<([f64; 3], f64)> = (0..ts.len() - 1)
        .map(|j| {
            let ((p0, q0), (p1, q1)) = (vals[j], vals[j + 1]);
            let (dp, dq) = (p1 - p0, q1 - q0);
            let c = [
                (p0 * q0.conj()).im,
                (p0 * dq.conj() + dp * q0.conj()).im,
                (dp * dq.conj()).im,
            ];
            let size = (p0.norm() + p1.norm()) * (q0.norm() + q1.norm());
            (c, tol * (1.0 + size))
        })
        .collect();

    // zeros sitting on a sample are exact data: decide them from the one-sided
    // expansions rather than from interpolated values
    let mut out = Vec::new();
    let mut sample_zeros = Vec::new();
    for k in 0..ts.len() {
        let (p, q) = vals[k];
        let small = segments[k.min(ts.len() - 2)].1;
        if (p * q.conj()).im.abs() > small {
            continue;
        }
        sample_zeros.push(ts[k]);
        if k == 0 || k == ts.len() - 1 || !collinear(p, q) {
            continue;
        }
        let (before, small_b) = segments[k - 1];
        let (after, small_a) = segments[k];
        let (sb, sa) = (side_sign(before, true, small_b), side_sign(after, false, small_a));
        if sb != 0.0 && sa != 0.0 && sb != sa {
            out.push((ts[k], ts[k]));
        }
    }

    let mut candidates = Vec::new();
    for (j, &(c, small)) in segments.iter().enumerate() {
        let roots: Vec<f64> = if c[2].abs() <= small {
            if c[1].abs() <= small {
                Vec::new()
            } else {
                vec![-c[0] / c[1]]
            }
        } else {
            let disc = c[1] * c[1] - 4.0 * c[2] * c[0];
            if disc < 0.0 {
                Vec::new()
            } else {
                let r = disc.sqrt();
                vec![(-c[1] - r) / (2.0 * c[2]), (-c[1] + r) / (2.0 * c[2])]
            }
        };
        candidates.extend(
            roots
                .into_iter()
                .filter(|s| (0.0..=1.0).contains(s))
                .map(|s| ts[j] + s * (ts[j + 1] - ts[j]))
                .filter(|t| sample_zeros.iter().all(|z| (t - z).abs() > snap)),
        );
    }
    candidates.sort_by(f64::total_cmp);
    candidates.dedup_by(|a, b| (*a - *b).abs() <= eta);
    for t in candidates {
        let (lo, hi) = (t - eta, t + eta);
        if lo < t_min || hi > t_max {
            continue;
        }
        let (im_lo, im_hi) = (w_at(lo).im, w_at(hi).im);
        if im_lo == 0.0 || im_hi == 0.0 || (im_lo < 0.0) == (im_hi < 0.0) {
            continue;
        }
        let (p, q) = pq_at(t);
        if !collinear(p, q) {
            continue;
        }
        out.push(bisect(|t| w_at(t).im, lo, hi, BRACKET_TOL));
    }
    out.sort_by(|a, b| a.0.total_cmp(&b.0));
    out
}
