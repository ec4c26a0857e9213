//! File formats: body and function documents (JSON), measures and reports
//! (JSON and CSV), and the verification diagnostics table.

use crate::body::{hull, AnalyticKind, ConvexBody, Ellipsoid};
use crate::cone::{PointClass, TangentCone};
use crate::error::{Error, Result};
use crate::limits::ConvergenceReport;
use crate::measure::SphericalMeasure;
use crate::newton::{ConvexGraphFn, Domain, GraphKind};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use std::fmt::Write as _;
use std::path::Path;

pub fn read_text(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

pub fn write_text(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

/// Shortest decimal text that reads back to the same double.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:?}")
}

#[derive(Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
struct AnalyticDoc {
    kind: String,
    center: Vec<f64>,
    semi_axes: Vec<f64>,
}

#[derive(Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
struct BodyDoc {
    dim: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    vertices: Option<Vec<Vec<f64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    analytic: Option<AnalyticDoc>,
}

fn check_len(v: &[f64], d: usize) -> Result<()> {
    if v.len() != d {
        return Err(Error::DimensionMismatch { expected: d, got: v.len() });
    }
    Ok(())
}

pub fn parse_body(text: &str) -> Result<ConvexBody> {
    let doc: BodyDoc = serde_json::from_str(text).map_err(|e| Error::Parse(format!("body: {e}")))?;
    let d = doc.dim;
    match (doc.vertices, doc.analytic) {
        (Some(vs), None) => {
            for v in &vs {
                check_len(v, d)?;
            }
            if !(2..=4).contains(&d) {
                return Err(Error::UnsupportedDimension(d));
            }
            Ok(ConvexBody::Polytope(hull(&vs)?))
        }
        (None, Some(a)) => {
            check_len(&a.center, d)?;
            check_len(&a.semi_axes, d)?;
            let kind = match a.kind.as_str() {
                "ball" => AnalyticKind::Ball,
                "ellipsoid" => AnalyticKind::Ellipsoid,
                k => return Err(Error::Parse(format!("unknown analytic kind `{k}`"))),
            };
            Ok(ConvexBody::Ellipsoid(Ellipsoid::new(kind, a.center, a.semi_axes)?))
        }
        _ => Err(Error::Parse("body needs exactly one of `vertices` or `analytic`".into())),
    }
}

pub fn read_body(path: &Path) -> Result<ConvexBody> {
    parse_body(&read_text(path)?)
}

pub fn body_to_json(body: &ConvexBody) -> String {
    let doc = match body {
        ConvexBody::Polytope(p) => BodyDoc { dim: p.dim(), vertices: Some(p.vertices().to_vec()), analytic: None },
        ConvexBody::Ellipsoid(el) => BodyDoc {
            dim: el.dim(),
            vertices: None,
            analytic: Some(AnalyticDoc {
                kind: match el.kind {
                    AnalyticKind::Ball => "ball".into(),
                    AnalyticKind::Ellipsoid => "ellipsoid".into(),
                },
                center: el.center.clone(),
                semi_axes: el.semi_axes.clone(),
            }),
        },
    };
    serde_json::to_string_pretty(&doc).expect("body serializes")
}

pub fn measure_to_json(mu: &SphericalMeasure) -> String {
    serde_json::to_string_pretty(mu).expect("measure serializes")
}

pub fn parse_measure(text: &str) -> Result<SphericalMeasure> {
    serde_json::from_str(text).map_err(|e| Error::Parse(format!("measure: {e}")))
}

/// Columns `dir_1..dir_d,w`.
pub fn measure_to_csv(mu: &SphericalMeasure) -> String {
    let mut out = String::new();
    let header: Vec<String> = (1..=mu.dim()).map(|k| format!("dir_{k}")).chain(["w".to_string()]).collect();
    out.push_str(&header.join(","));
    out.push('\n');
    for a in mu.atoms() {
        let row: Vec<String> = a.dir.iter().chain([&a.weight]).map(|x| fmt_f64(*x)).collect();
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

/// Columns `t,mass,resultant_error,distance`.
pub fn report_to_csv(rep: &ConvergenceReport) -> String {
    let mut out = String::from("t,mass,resultant_error,distance\n");
    for r in &rep.records {
        let _ = writeln!(
            out,
            "{},{},{},{}",
            fmt_f64(r.t),
            fmt_f64(r.mass),
            fmt_f64(r.resultant_error),
            fmt_f64(r.distance)
        );
    }
    out
}

pub fn report_to_json(rep: &ConvergenceReport) -> String {
    serde_json::to_string_pretty(rep).expect("report serializes")
}

pub fn cone_to_json(cone: &TangentCone, e: Option<&[f64]>, nu_star: Option<&SphericalMeasure>) -> String {
    let class = match cone.class {
        PointClass::Regular => json!({"kind": "regular"}),
        PointClass::Ridge { normal_cone_dim } => json!({"kind": "ridge", "normal_cone_dim": normal_cone_dim}),
        PointClass::Conical => json!({"kind": "conical"}),
    };
    let mut v = json!({
        "vertex": cone.vertex,
        "class": class,
        "normal_cone_generators": cone.halfspaces,
    });
    if let Some(e) = e {
        v["direction"] = json!(e);
    }
    if let Some(m) = nu_star {
        v["nu_star"] = serde_json::to_value(m).expect("measure serializes");
    }
    serde_json::to_string_pretty(&v).expect("json")
}

/// One row of a verification run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Diagnostic {
    pub proposition: String,
    pub seed: u64,
    pub lhs: f64,
    pub rhs: f64,
    pub holds: bool,
}

/// Columns `proposition,seed,lhs,rhs,holds`.
pub fn diagnostics_to_csv(rows: &[Diagnostic]) -> String {
    let mut out = String::from("proposition,seed,lhs,rhs,holds\n");
    for r in rows {
        let _ = writeln!(out, "{},{},{},{},{}", r.proposition, r.seed, fmt_f64(r.lhs), fmt_f64(r.rhs), r.holds);
    }
    out
}

pub fn diagnostics_to_json(rows: &[Diagnostic]) -> String {
    serde_json::to_string_pretty(rows).expect("json")
}

#[derive(Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
enum DomainDoc {
    Disk { center: [f64; 2], radius: f64 },
    Polygon(Vec<[f64; 2]>),
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct TriangulationDoc {
    points: Vec<[f64; 2]>,
    heights: Vec<f64>,
    triangles: Vec<[usize; 3]>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct FunctionDoc {
    domain: DomainDoc,
    kind: String,
    bound: f64,
    #[serde(default)]
    params: Option<Value>,
    #[serde(default)]
    triangulation: Option<TriangulationDoc>,
}

/// Function document:
/// `{"domain": {"disk": {...}} | {"polygon": [...]}, "kind": "flat" | "cone" |
/// "paraboloid" | "piecewise_linear", "bound": M, "params": {"c": ..},
/// "triangulation": {"points", "heights", "triangles"}}`.
pub fn parse_function(text: &str) -> Result<ConvexGraphFn> {
    let doc: FunctionDoc = serde_json::from_str(text).map_err(|e| Error::Parse(format!("function: {e}")))?;
    let domain = match doc.domain {
        DomainDoc::Disk { center, radius } => Domain::Disk { center, radius },
        DomainDoc::Polygon(p) => Domain::Polygon(p),
    };
    let kind = match doc.kind.as_str() {
        "flat" => {
            let c = doc.params.as_ref().and_then(|p| p.get("c")).and_then(Value::as_f64).unwrap_or(0.0);
            GraphKind::Flat { c }
        }
        "cone" => GraphKind::Cone,
        "paraboloid" => GraphKind::Paraboloid,
        "piecewise_linear" => {
            let t = doc.triangulation.ok_or_else(|| Error::Parse("piecewise_linear needs a triangulation".into()))?;
            GraphKind::PiecewiseLinear { points: t.points, heights: t.heights, triangles: t.triangles }
        }
        k => return Err(Error::Parse(format!("unknown function kind `{k}`"))),
    };
    ConvexGraphFn::new(domain, kind, doc.bound)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measure::Atom;

    #[test]
    fn body_documents() {
        let cube = parse_body(r#"{"dim": 2, "vertices": [[0,0],[1,0],[1,1],[0,1],[0.5,0.5]]}"#).unwrap();
        assert_eq!(cube.as_polytope().unwrap().vertices().len(), 4);
        let back = parse_body(&body_to_json(&cube)).unwrap();
        assert_eq!(back.as_polytope().unwrap().vertices(), cube.as_polytope().unwrap().vertices());
        let ball =
            parse_body(r#"{"dim": 3, "analytic": {"kind": "ball", "center": [0,0,0], "semi_axes": [1,1,1]}}"#).unwrap();
        assert!(matches!(ball, ConvexBody::Ellipsoid(_)));
        assert!(matches!(parse_body("{"), Err(Error::Parse(_))));
        assert!(matches!(parse_body(r#"{"dim": 2}"#), Err(Error::Parse(_))));
        assert!(matches!(parse_body(r#"{"dim": 3, "vertices": [[0,0]]}"#), Err(Error::DimensionMismatch { .. })));
        assert!(matches!(parse_body(r#"{"dim": 2, "vertices": [[0,0],[1,1],[2,2]]}"#), Err(Error::DegenerateInput(_))));
        assert!(matches!(read_body(Path::new("/nonexistent/body.json")), Err(Error::Io(_))));
    }

    #[test]
    fn measure_csv_and_json() {
        let mu = SphericalMeasure::new(2, vec![Atom { dir: vec![1.0, 0.0], weight: 0.5 }]).unwrap();
        assert_eq!(measure_to_csv(&mu), "dir_1,dir_2,w\n1.0,0.0,0.5\n");
        assert_eq!(parse_measure(&measure_to_json(&mu)).unwrap(), mu);
        assert!(parse_measure(r#"{"dim": 2, "atoms": [{"dir": [2, 0], "w": 1}]}"#).is_err());
    }

    #[test]
    fn function_documents() {
        let f = parse_function(r#"{"domain": {"disk": {"center": [0,0], "radius": 1}}, "kind": "cone", "bound": 1}"#)
            .unwrap();
        assert_eq!(f.kind(), &GraphKind::Cone);
        let g = parse_function(
            r#"{"domain": {"polygon": [[0,0],[1,0],[1,1],[0,1]]}, "kind": "piecewise_linear", "bound": 1,
                "triangulation": {"points": [[0,0],[1,0],[1,1],[0,1],[0.5,0.5]], "heights": [0.5,0.5,0.5,0.5,0],
                "triangles": [[0,1,4],[1,2,4],[2,3,4],[3,0,4]]}}"#,
        )
        .unwrap();
        assert!(matches!(g.kind(), GraphKind::PiecewiseLinear { .. }));
        assert!(matches!(
            parse_function(r#"{"domain": {"disk": {"center": [0,0], "radius": 1}}, "kind": "wave", "bound": 1}"#),
            Err(Error::Parse(_))
        ));
    }

    #[test]
    fn diagnostics_table() {
        let rows = vec![Diagnostic { proposition: "prop1".into(), seed: 3, lhs: 1.0, rhs: 2.0, holds: true }];
        assert_eq!(diagnostics_to_csv(&rows), "proposition,seed,lhs,rhs,holds\nprop1,3,1.0,2.0,true\n");
    }
}
