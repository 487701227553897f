//! Curve, quiver and family documents.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_complex::Complex64;
use serde::de::DeserializeOwned;
use serde::Deserialize;
use serde_json::Value;

use wildchar::fission::{ColouredEdge, ColouredGraph};
use wildchar::irregular::CartanVector;
use wildchar::{IrregularCurve, IrregularType, MarkedPoint, Root, RootDatum};

use crate::CliError;

/// Parse a complex literal: `"a"`, `"bi"`, `"a+bi"`, `"a-bi"`, with `i`
/// alone meaning `1i`. Parts are decimal floats and must be finite.
pub fn parse_complex(s: &str) -> Option<Complex64> {
    let s = s.trim();
    let real = |x: &str| -> Option<f64> {
        let v: f64 = x.parse().ok()?;
        // reject "inf", "nan" and friends
        v.is_finite().then_some(v)
    };
    let Some(body) = s.strip_suffix('i') else {
        return Some(Complex64::new(real(s)?, 0.0));
    };
    // the split is the last sign that does not belong to an exponent
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| matches!(bytes[k], b'+' | b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    let (re, im) = match split {
        Some(k) => (&body[..k], &body[k..]),
        None => ("", body),
    };
    let im = match im {
        "" | "+" => 1.0,
        "-" => -1.0,
        x => real(x)?,
    };
    let re = if re.is_empty() { 0.0 } else { real(re)? };
    Some(Complex64::new(re, im))
}

fn spec_err(path: impl Into<String>, msg: impl std::fmt::Display) -> CliError {
    CliError::Spec {
        path: path.into(),
        msg: msg.to_string(),
    }
}

/// Deserialize with the JSON path of any failure in the error.
pub fn from_value<T: DeserializeOwned>(value: &Value) -> Result<T, CliError> {
    serde_path_to_error::deserialize(value).map_err(|e| {
        let path = e.path().to_string();
        spec_err(path, e.into_inner())
    })
}

pub fn parse_json(text: &str) -> Result<Value, CliError> {
    serde_json::from_str(text).map_err(|e| spec_err(".", format!("malformed JSON: {e}")))
}

#[derive(Debug, Deserialize)]
#[serde(tag = "type", deny_unknown_fields)]
pub enum GroupSpec {
    #[serde(rename = "GL")]
    Gl { n: usize },
    #[serde(rename = "abstract")]
    Abstract { rank: usize, roots: Vec<Vec<i64>> },
}

/// A conjugacy class of a point's centralizer, for leaf dimensions.
#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClassSpec {
    pub dim: usize,
    #[serde(default)]
    pub label: Option<String>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PointSpec {
    pub label: String,
    #[serde(default)]
    pub position: Option<String>,
    pub irregular_type: Vec<Vec<String>>,
    #[serde(default)]
    pub class: Option<ClassSpec>,
}

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Options {
    pub tol_dir: Option<f64>,
    pub tol_num: Option<f64>,
    pub seed: Option<u64>,
    pub center_correction: Option<bool>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CurveSpec {
    pub group: GroupSpec,
    pub genus: usize,
    pub points: Vec<PointSpec>,
    #[serde(default)]
    pub options: Options,
}

/// A parsed curve with its options and per-point classes.
#[derive(Clone, Debug)]
pub struct Curve {
    pub curve: IrregularCurve,
    pub classes: Vec<Option<ClassSpec>>,
    pub options: Options,
}

impl GroupSpec {
    fn datum(&self) -> Result<RootDatum, CliError> {
        let datum = match self {
            GroupSpec::Gl { n } => RootDatum::gl(*n),
            GroupSpec::Abstract { rank, roots } => {
                RootDatum::from_roots(*rank, roots.iter().cloned().map(Root).collect())
            }
        };
        datum.map_err(|e| spec_err("group", e))
    }
}

fn coefficients(rows: &[Vec<String>], rank: usize, path: &str) -> Result<Vec<CartanVector>, CliError> {
    rows.iter()
        .enumerate()
        .map(|(d, row)| {
            if row.len() != rank {
                return Err(spec_err(
                    format!("{path}[{d}]"),
                    format!("coefficient vector has length {}, the rank is {rank}", row.len()),
                ));
            }
            row.iter()
                .enumerate()
                .map(|(j, s)| {
                    parse_complex(s)
                        .ok_or_else(|| spec_err(format!("{path}[{d}][{j}]"), format!("malformed complex literal {s:?}")))
                })
                .collect()
        })
        .collect()
}

fn build_point(p: &PointSpec, datum: &Arc<RootDatum>, genus: usize, path: &str) -> Result<MarkedPoint, CliError> {
    let coeffs = coefficients(&p.irregular_type, datum.rank(), &format!("{path}.irregular_type"))?;
    let irregular_type =
        IrregularType::new(datum.clone(), coeffs).map_err(|e| spec_err(format!("{path}.irregular_type"), e))?;
    let position = match &p.position {
        None => None,
        Some(_) if genus > 0 => {
            return Err(spec_err(format!("{path}.position"), "positions are only meaningful in genus 0"));
        }
        Some(s) => Some(
            parse_complex(s).ok_or_else(|| spec_err(format!("{path}.position"), format!("malformed complex literal {s:?}")))?,
        ),
    };
    Ok(MarkedPoint {
        label: p.label.clone(),
        irregular_type,
        position,
    })
}

impl CurveSpec {
    pub fn build(self) -> Result<Curve, CliError> {
        let datum = Arc::new(self.group.datum()?);
        if self.points.is_empty() {
            return Err(spec_err("points", "at least one marked point is required"));
        }
        let points = self
            .points
            .iter()
            .enumerate()
            .map(|(i, p)| build_point(p, &datum, self.genus, &format!("points[{i}]")))
            .collect::<Result<Vec<_>, _>>()?;
        let curve = IrregularCurve::new(self.genus, points).map_err(|e| spec_err("points", e))?;
        check_options(&self.options)?;
        Ok(Curve {
            curve,
            classes: self.points.into_iter().map(|p| p.class).collect(),
            options: self.options,
        })
    }
}

fn check_options(o: &Options) -> Result<(), CliError> {
    for (name, v) in [("tol_dir", o.tol_dir), ("tol_num", o.tol_num)] {
        if let Some(v) = v {
            if !(v > 0.0 && v.is_finite()) {
                return Err(spec_err(format!("options.{name}"), format!("tolerance must be positive, got {v}")));
            }
        }
    }
    Ok(())
}

pub fn parse_curve(value: &Value) -> Result<Curve, CliError> {
    if value.get("graph").is_some() {
        return Err(CliError::Mismatch("this is a quiver spec; use the quiver command".into()));
    }
    from_value::<CurveSpec>(value)?.build()
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphSpec {
    pub nodes: Vec<String>,
    pub edges: Vec<ColouredEdgeSpec>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ColouredEdgeSpec {
    pub a: String,
    pub b: String,
    pub colour: String,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuiverSpec {
    pub graph: GraphSpec,
    pub dims: BTreeMap<String, usize>,
    /// Dimension of the class of `prod GL(d_i)` reduced at; 0 for a generic central point.
    #[serde(default)]
    pub class_dim: usize,
    #[serde(default)]
    pub options: Options,
}

impl QuiverSpec {
    pub fn graph(&self) -> ColouredGraph {
        ColouredGraph {
            nodes: self.graph.nodes.clone(),
            edges: self
                .graph
                .edges
                .iter()
                .map(|e| ColouredEdge::new(e.a.clone(), e.b.clone(), e.colour.clone()))
                .collect(),
        }
    }
}

pub fn parse_quiver(value: &Value) -> Result<QuiverSpec, CliError> {
    if value.get("group").is_some() {
        return Err(CliError::Mismatch("this is a curve spec; the quiver command needs a graph".into()));
    }
    let spec: QuiverSpec = from_value(value)?;
    check_options(&spec.options)?;
    Ok(spec)
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct PointOverlay {
    label: String,
    #[serde(default)]
    irregular_type: Option<Vec<Vec<String>>>,
    #[serde(default)]
    position: Option<String>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct Overlay {
    points: Vec<PointOverlay>,
}

/// A family file: `[[t, {"points": [{"label", "irregular_type"?, "position"?}]}], ...]`.
/// Each overlay replaces the named points' coefficients (and positions) of the base spec.
pub fn parse_family(base: &Value, family: &Value) -> Result<Vec<(f64, Curve)>, CliError> {
    let entries: Vec<(f64, Overlay)> = from_value(family)?;
    let base_points = base
        .get("points")
        .and_then(Value::as_array)
        .ok_or_else(|| spec_err("points", "base spec has no points"))?;
    entries
        .into_iter()
        .enumerate()
        .map(|(k, (t, overlay))| {
            if !t.is_finite() {
                return Err(spec_err(format!("[{k}][0]"), "parameter must be finite"));
            }
            let mut doc = base.clone();
            let points = doc["points"].as_array_mut().expect("checked above");
            for (j, o) in overlay.points.iter().enumerate() {
                let path = format!("[{k}][1].points[{j}]");
                let i = base_points
                    .iter()
                    .position(|p| p.get("label").and_then(Value::as_str) == Some(o.label.as_str()))
                    .ok_or_else(|| spec_err(format!("{path}.label"), format!("no point labelled {:?}", o.label)))?;
                if let Some(q) = &o.irregular_type {
                    points[i]["irregular_type"] = serde_json::to_value(q).expect("strings serialize");
                }
                if let Some(z) = &o.position {
                    points[i]["position"] = Value::String(z.clone());
                }
            }
            let curve = parse_curve(&doc).map_err(|e| match e {
                CliError::Spec { path, msg } => spec_err(format!("[{k}][1] -> {path}"), msg),
                other => other,
            })?;
            Ok((t, curve))
        })
        .collect()
}
