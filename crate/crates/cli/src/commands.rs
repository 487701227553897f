use serde::Serialize;
use serde_json::{json, Value};

use wildchar::deform::{check_admissible, wall_events_at, CurveFamily, Event};
use wildchar::fission::{
    graph_blocks, hom_stokes, nesting_decomposition, quiver_reduction, space_a, wild_leaf_dim, CenterCorrection,
    ConjClass, SpaceExpr, TraceStep,
};
use wildchar::irregular::CartanVector;
use wildchar::matrix_real::{verify_suite, Blocks, Report, DEFAULT_TOL};
use wildchar::stokes::{singular_directions, StokesReport, DEFAULT_DIRECTION_TOL};

use crate::spec::{self, Curve, Options};
use crate::{CliError, Command, Flags};

pub const DEFAULT_TRIALS: usize = 1000;
pub const DEFAULT_SEED: u64 = 0;

/// Effective settings after applying flags over spec options over defaults.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Settings {
    pub seed: u64,
    pub tol: f64,
    pub dir_tol: f64,
    pub trials: usize,
    pub center_correction: bool,
}

impl Settings {
    pub fn resolve(flags: &Flags, options: &Options) -> Result<Settings, CliError> {
        let s = Settings {
            seed: flags.seed.or(options.seed).unwrap_or(DEFAULT_SEED),
            tol: flags.tol.or(options.tol_num).unwrap_or(DEFAULT_TOL),
            dir_tol: flags.dir_tol.or(options.tol_dir).unwrap_or(DEFAULT_DIRECTION_TOL),
            trials: flags.trials.unwrap_or(DEFAULT_TRIALS),
            center_correction: !flags.no_center_correction && options.center_correction.unwrap_or(true),
        };
        for (name, v) in [("--tol", s.tol), ("--dir-tol", s.dir_tol)] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(CliError::Spec {
                    path: name.into(),
                    msg: format!("tolerance must be positive, got {v}"),
                });
            }
        }
        if s.trials == 0 {
            return Err(CliError::Spec {
                path: "--trials".into(),
                msg: "at least one trial is required".into(),
            });
        }
        Ok(s)
    }

    fn correction(&self) -> CenterCorrection {
        if self.center_correction {
            CenterCorrection::Auto
        } else {
            CenterCorrection::Off
        }
    }
}

pub(crate) struct CommandResult {
    pub payload: Value,
    pub warnings: Vec<String>,
    pub failures: usize,
}

fn done(payload: impl Serialize, warnings: Vec<String>) -> CommandResult {
    CommandResult {
        payload: serde_json::to_value(payload).expect("payload serializes"),
        warnings,
        failures: 0,
    }
}

pub(crate) fn dispatch(command: Command, spec: &Value, family: Option<&Value>, flags: &Flags) -> Result<CommandResult, CliError> {
    if family.is_some() && command != Command::Deform {
        return Err(CliError::Mismatch(format!("--family applies to deform, not {command}")));
    }
    match command {
        Command::Analyze => analyze(&spec::parse_curve(spec)?, flags),
        Command::Dims => dims(&spec::parse_curve(spec)?, flags),
        Command::Verify => verify(&spec::parse_curve(spec)?, flags),
        Command::Deform => {
            let family = family.ok_or_else(|| CliError::Mismatch("deform needs a family file (--family)".into()))?;
            deform(spec, family, flags)
        }
        Command::Quiver => quiver(&spec::parse_quiver(spec)?, flags),
    }
}

#[derive(Serialize)]
struct PointStokes {
    label: String,
    order: usize,
    levels: Vec<usize>,
    centralizer: String,
    report: StokesReport,
}

fn analyze(c: &Curve, flags: &Flags) -> Result<CommandResult, CliError> {
    let s = Settings::resolve(flags, &c.options)?;
    let points = c
        .curve
        .points()
        .iter()
        .map(|p| {
            let q = &p.irregular_type;
            Ok(PointStokes {
                label: p.label.clone(),
                order: q.order(),
                levels: q.levels().into_iter().collect(),
                centralizer: q.centralizer().label(),
                report: singular_directions(q, s.dir_tol)?,
            })
        })
        .collect::<Result<Vec<_>, wildchar::Error>>()?;
    Ok(done(json!({ "dir_tol": s.dir_tol, "points": points }), Vec::new()))
}

#[derive(Serialize)]
struct Nesting {
    label: String,
    /// `None` for a tame point, which has no nesting chain.
    dim: Option<i64>,
    matches: bool,
}

#[derive(Serialize)]
struct Leaf {
    dim: i64,
    degenerate: bool,
    center_correction: i64,
    expr: SpaceExpr,
}

#[derive(Serialize)]
#[allow(non_snake_case)]
struct Dims {
    hom_dim: i64,
    A_dims: Vec<i64>,
    acting: Vec<String>,
    degenerate: bool,
    nesting: Vec<Nesting>,
    center_correction: bool,
    leaf: Option<Leaf>,
    hom: SpaceExpr,
    trace: Vec<TraceStep>,
}

fn dims(c: &Curve, flags: &Flags) -> Result<CommandResult, CliError> {
    let s = Settings::resolve(flags, &c.options)?;
    let mut warnings = Vec::new();
    let hom = hom_stokes(&c.curve)?;
    let mut a_dims = Vec::new();
    let mut nesting = Vec::new();
    for p in c.curve.points() {
        let direct = space_a(&p.irregular_type).dim();
        a_dims.push(direct);
        let chain = if p.irregular_type.is_tame() {
            None
        } else {
            Some(nesting_decomposition(&p.irregular_type)?.dim())
        };
        if chain.is_some_and(|d| d != direct) {
            warnings.push(format!("point {}: nesting chain disagrees with the direct count", p.label));
        }
        nesting.push(Nesting {
            label: p.label.clone(),
            dim: chain,
            matches: chain.is_none_or(|d| d == direct),
        });
    }
    if hom.is_degenerate() {
        warnings.push("the space of Stokes representations is degenerate".into());
    }

    let given = c.classes.iter().filter(|k| k.is_some()).count();
    let leaf = if given == c.classes.len() {
        let classes: Vec<ConjClass> = c
            .curve
            .points()
            .iter()
            .zip(&c.classes)
            .map(|(p, k)| {
                let k = k.as_ref().expect("all classes present");
                let label = k.label.clone().unwrap_or_else(|| format!("C[{}]", p.label));
                ConjClass::new(p.irregular_type.centralizer().group(), k.dim, label)
            })
            .collect();
        let expr = wild_leaf_dim(&c.curve, &classes, s.correction())?;
        if expr.is_degenerate() {
            warnings.push("the leaf is degenerate: negative naive dimension or a central class of a nonabelian group".into());
        }
        Some(Leaf {
            dim: expr.dim(),
            degenerate: expr.is_degenerate(),
            center_correction: expr.center_correction().unwrap_or(0),
            expr,
        })
    } else {
        if given > 0 {
            warnings.push(format!("classes given for {given} of {} points; leaf dimension skipped", c.classes.len()));
        }
        None
    };
    if !s.center_correction {
        warnings.push("center correction disabled".into());
    }
    let trace = hom.trace().into_iter().cloned().collect();
    let payload = Dims {
        hom_dim: hom.dim(),
        A_dims: a_dims,
        acting: hom.acting_labels(),
        degenerate: hom.is_degenerate(),
        nesting,
        center_correction: s.center_correction,
        leaf,
        trace,
        hom,
    };
    Ok(done(payload, warnings))
}

#[derive(Serialize)]
struct PointVerify {
    label: String,
    blocks: Vec<Vec<usize>>,
    r: usize,
    report: Report,
}

fn verify(c: &Curve, flags: &Flags) -> Result<CommandResult, CliError> {
    let s = Settings::resolve(flags, &c.options)?;
    let n = c
        .curve
        .datum()
        .gl_rank()
        .ok_or_else(|| CliError::Mismatch("verify needs a GL(n) group".into()))?;
    let mut points = Vec::new();
    let mut warnings = Vec::new();
    let mut failures = 0;
    for p in c.curve.points() {
        let q = &p.irregular_type;
        let blocks = Blocks::from_levi(&q.centralizer())?.blocks().to_vec();
        // a tame point carries the double, i.e. H = G with one pair of trivial unipotents
        let r = q.order().max(1);
        let report = verify_suite(n, &blocks, r, s.trials, s.tol, s.seed)?;
        if report.failures() > 0 {
            warnings.push(format!("point {}: {} failed checks", p.label, report.failures()));
        }
        failures += report.failures();
        points.push(PointVerify {
            label: p.label.clone(),
            blocks,
            r,
            report,
        });
    }
    let payload = json!({
        "n": n,
        "seed": s.seed,
        "tol": s.tol,
        "trials": s.trials,
        "failures": failures,
        "points": points,
    });
    Ok(CommandResult {
        payload,
        warnings,
        failures,
    })
}

#[derive(Serialize)]
struct PointWalls {
    label: String,
    /// Degree of the coefficient tracked along the path.
    degree: usize,
    events: Vec<Event>,
}

fn deform(base: &Value, family: &Value, flags: &Flags) -> Result<CommandResult, CliError> {
    let samples = spec::parse_family(base, family)?;
    let options = match samples.first() {
        Some((_, c)) => c.options.clone(),
        None => spec::parse_curve(base)?.options,
    };
    Settings::resolve(flags, &options)?;
    let fam = CurveFamily::new(samples.iter().map(|(t, c)| (*t, c.curve.clone())).collect())?;
    let admissibility = check_admissible(&fam)?;

    let first = &fam.samples()[0].1;
    let datum = first.datum();
    let mut walls = Vec::new();
    for (i, p) in first.points().iter().enumerate() {
        let degree = fam
            .samples()
            .iter()
            .map(|(_, c)| c.points()[i].irregular_type.order())
            .max()
            .unwrap_or(0);
        if degree == 0 {
            continue;
        }
        let path: Vec<(f64, CartanVector)> = fam
            .samples()
            .iter()
            .map(|(t, c)| {
                let q = &c.points()[i].irregular_type;
                let a = q.coeff(degree).cloned().unwrap_or_else(|| vec![Default::default(); datum.rank()]);
                (*t, a)
            })
            .collect();
        walls.push(PointWalls {
            label: p.label.clone(),
            degree,
            events: wall_events_at(&path, datum, Some(&p.label))?,
        });
    }
    let payload = json!({
        "samples": fam.samples().len(),
        "admissibility": admissibility,
        "walls": walls,
    });
    Ok(done(payload, Vec::new()))
}

fn quiver(q: &spec::QuiverSpec, flags: &Flags) -> Result<CommandResult, CliError> {
    let s = Settings::resolve(flags, &q.options)?;
    let blocks = graph_blocks(&q.graph(), &q.dims)?;
    let reduced = quiver_reduction(&blocks, q.class_dim, s.correction())?;
    let mut warnings = Vec::new();
    if reduced.is_degenerate() {
        warnings.push("the reduction is degenerate".into());
    }
    if !s.center_correction {
        warnings.push("center correction disabled".into());
    }
    let payload = json!({
        "rep_dim": blocks.rep_dim,
        "blocks_dim": blocks.expr.dim(),
        "node_group": blocks.node_group,
        "pieces": blocks.pieces,
        "reduced": {
            "dim": reduced.dim(),
            "class_dim": q.class_dim,
            "degenerate": reduced.is_degenerate(),
            "center_correction": reduced.center_correction().unwrap_or(0),
            "expr": reduced,
        },
    });
    Ok(done(payload, warnings))
}
