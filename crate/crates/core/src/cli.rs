//! Command-line front end.

use crate::body::{cut_cap, ConvexBody};
use crate::cone::{nu_star, tangent_cone};
use crate::error::{Error, Result};
use crate::io::{self, fmt_f64};
use crate::limits::{candidate_limit, run_convergence, LimitKind, Schedule};
use crate::linalg::{dist, normalize};
use crate::measure::nu_t;
use crate::newton::{resistance, Method};
use crate::oracle::{mc_boundary_area, mc_cap_measure};
use crate::verify::{self, Suite, SuiteOptions};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;
use std::fmt::Write as _;
use std::path::PathBuf;

#[derive(Debug, Parser)]
#[command(name = "capflow", version, about = "Surface-area measures of convex caps and their limits")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Cut a cap and print its normalized surface-area measure.
    Cut {
        #[command(flatten)]
        at: PointArgs,
        /// Cap depth.
        #[arg(long)]
        t: f64,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Classify a boundary point and print its tangent cone and limit measure.
    Cone {
        #[command(flatten)]
        at: PointArgs,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Track the cap measure along a schedule of depths.
    Converge {
        #[command(flatten)]
        at: PointArgs,
        /// Candidate limit: cone, atom or 2d.
        #[arg(long, default_value = "cone")]
        limit: String,
        /// Depth schedule `geo:t0,ratio,steps`; defaults to `geo:0.2w,0.5,15`
        /// for the width `w` of the body along the direction.
        #[arg(long)]
        schedule: Option<String>,
        #[arg(long, value_enum, default_value_t = Metric::Bl)]
        metric: Metric,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Run a randomized verification suite.
    Verify {
        #[arg(long)]
        suite: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Instance count for every randomized check in the suite.
        #[arg(long)]
        n: Option<usize>,
        /// Monte Carlo samples for oracle checks.
        #[arg(long, default_value_t = 1_000_000)]
        samples: usize,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Evaluate the resistance functional of a convex function.
    Newton {
        /// Function document.
        #[arg(long)]
        function: PathBuf,
        /// Use Gauss quadrature with this many panels per cell instead of
        /// the exact evaluation.
        #[arg(long)]
        panels: Option<usize>,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Monte Carlo boundary area, or cap measure when `--t` is given.
    Oracle {
        #[arg(long)]
        body: PathBuf,
        #[arg(long)]
        point: Option<String>,
        #[arg(long, default_value = "auto")]
        dir: String,
        #[arg(long)]
        t: Option<f64>,
        /// Direction bins per axis for the cap measure.
        #[arg(long, default_value_t = 16)]
        bins: usize,
        #[arg(long, default_value_t = 1_000_000)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        out: OutArgs,
    },
}

#[derive(Debug, Args)]
pub struct PointArgs {
    /// Body document (JSON).
    #[arg(long)]
    pub body: PathBuf,
    /// Boundary point, comma separated.
    #[arg(long)]
    pub point: String,
    /// Outward normal, comma separated, or `auto`.
    #[arg(long, default_value = "auto")]
    pub dir: String,
}

#[derive(Debug, Args)]
pub struct OutArgs {
    /// `csv` or `json` for standard output in that format, otherwise a file
    /// path whose extension picks the format.
    #[arg(long)]
    pub out: Option<String>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Metric {
    /// Bounded-Lipschitz distance.
    Bl,
}

/// Rendered output of a command in both formats.
pub struct Output {
    pub csv: String,
    pub json: String,
    pub default: Format,
}

impl OutArgs {
    fn emit(&self, out: Output) -> Result<()> {
        let (path, format) = match self.out.as_deref() {
            None => (None, self.format.unwrap_or(out.default)),
            Some("csv") => (None, Format::Csv),
            Some("json") => (None, Format::Json),
            Some(p) => {
                let path = PathBuf::from(p);
                let by_ext = match path.extension().and_then(|e| e.to_str()) {
                    Some("json") => Format::Json,
                    Some("csv") => Format::Csv,
                    _ => out.default,
                };
                (Some(path), self.format.unwrap_or(by_ext))
            }
        };
        let mut text = match format {
            Format::Csv => out.csv,
            Format::Json => out.json,
        };
        if !text.ends_with('\n') {
            text.push('\n');
        }
        match path {
            Some(p) => io::write_text(&p, &text),
            None => {
                print!("{text}");
                Ok(())
            }
        }
    }
}

pub fn parse_vector(s: &str) -> Result<Vec<f64>> {
    s.split(',')
        .map(|x| x.trim().parse::<f64>().map_err(|_| Error::Parse(format!("bad number `{x}` in `{s}`"))))
        .collect()
}

fn check_dim(v: &[f64], d: usize) -> Result<()> {
    if v.len() != d {
        return Err(Error::DimensionMismatch { expected: d, got: v.len() });
    }
    Ok(())
}

/// Resolves `--dir`: an explicit vector is normalized; `auto` takes the facet
/// normal at a regular point and the normalized sum of the normal-cone
/// generators at a conical one.
pub fn resolve_dir(body: &ConvexBody, r0: &[f64], dir: &str) -> Result<Vec<f64>> {
    if dir == "auto" {
        return tangent_cone(body, r0)?.auto_direction();
    }
    let v = parse_vector(dir)?;
    check_dim(&v, body.dim())?;
    normalize(&v).ok_or_else(|| Error::InvalidInput("zero direction".into()))
}

fn load_point(at: &PointArgs) -> Result<(ConvexBody, Vec<f64>, Vec<f64>)> {
    let body = io::read_body(&at.body)?;
    let r0 = parse_vector(&at.point)?;
    check_dim(&r0, body.dim())?;
    let e = resolve_dir(&body, &r0, &at.dir)?;
    Ok((body, r0, e))
}

fn pretty(v: serde_json::Value) -> String {
    serde_json::to_string_pretty(&v).expect("json")
}

pub fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Cut { at, t, out } => {
            let (body, r0, e) = load_point(&at)?;
            let cap = cut_cap(&body, &r0, &e, t)?;
            let nu = nu_t(&cap)?;
            let resultant = nu.resultant();
            let json = pretty(json!({
                "t": t,
                "point": r0,
                "direction": e,
                "base_area": cap.base_area,
                "side_area": cap.side_area(),
                "mass": nu.total_mass(),
                "resultant": resultant,
                "resultant_error": dist(&resultant, &e),
                "measure": nu,
            }));
            out.emit(Output { csv: io::measure_to_csv(&nu), json, default: Format::Json })
        }
        Command::Cone { at, out } => {
            let body = io::read_body(&at.body)?;
            let r0 = parse_vector(&at.point)?;
            check_dim(&r0, body.dim())?;
            let cone = tangent_cone(&body, &r0)?;
            let e = match at.dir.as_str() {
                "auto" => cone.auto_direction().ok(),
                d => Some(resolve_dir(&body, &r0, d)?),
            };
            let star = match &e {
                Some(e) if cone.normal_cone_dim == body.dim() => Some(nu_star(&cone, e)?),
                _ => None,
            };
            let csv = match &star {
                Some(m) => io::measure_to_csv(m),
                None => {
                    let d = body.dim();
                    let mut s = (1..=d).map(|k| format!("n_{k}")).collect::<Vec<_>>().join(",");
                    s.push('\n');
                    for g in cone.normal_cone_generators() {
                        let _ = writeln!(s, "{}", g.iter().map(|x| fmt_f64(*x)).collect::<Vec<_>>().join(","));
                    }
                    s
                }
            };
            let json = io::cone_to_json(&cone, e.as_deref(), star.as_ref());
            out.emit(Output { csv, json, default: Format::Json })
        }
        Command::Converge { at, limit, schedule, metric: Metric::Bl, out } => {
            let (body, r0, e) = load_point(&at)?;
            let kind: LimitKind = limit.parse()?;
            let schedule = match schedule {
                Some(s) => s.parse::<Schedule>()?,
                None => Schedule::default_for(body.width(&e)),
            };
            let limit = candidate_limit(&body, &r0, &e, kind)?;
            let rep = run_convergence(&body, &r0, &e, &limit, &schedule)?;
            out.emit(Output { csv: io::report_to_csv(&rep), json: io::report_to_json(&rep), default: Format::Csv })
        }
        Command::Verify { suite, seed, n, samples, out } => {
            let suite: Suite = suite.parse()?;
            let rows = verify::run(suite, &SuiteOptions { seed, n, samples });
            let summary = verify::summarize(&rows);
            for (name, passed, total) in &summary {
                eprintln!("{name}: {passed}/{total}");
            }
            out.emit(Output {
                csv: io::diagnostics_to_csv(&rows),
                json: io::diagnostics_to_json(&rows),
                default: Format::Csv,
            })?;
            let failed = rows.iter().filter(|r| !r.holds).count();
            if failed > 0 {
                return Err(Error::CheckFailed { failed, total: rows.len() });
            }
            Ok(())
        }
        Command::Newton { function, panels, out } => {
            let f = io::parse_function(&io::read_text(&function)?)?;
            let (method, name) = match panels {
                Some(p) => (Method::Quadrature { panels: p }, "quadrature"),
                None => (Method::Exact, "exact"),
            };
            let r = resistance(&f, method)?;
            out.emit(Output {
                csv: format!("method,resistance\n{name},{}\n", fmt_f64(r)),
                json: pretty(json!({"method": name, "resistance": r})),
                default: Format::Json,
            })
        }
        Command::Oracle { body, point, dir, t, bins, n, seed, out } => {
            let body = io::read_body(&body)?;
            match (point, t) {
                (None, None) => {
                    let est = mc_boundary_area(&body, n, seed)?;
                    out.emit(Output {
                        csv: format!(
                            "value,std_error,samples,seed\n{},{},{},{}\n",
                            fmt_f64(est.value),
                            fmt_f64(est.std_error),
                            est.samples,
                            est.seed
                        ),
                        json: pretty(json!({"boundary_area": est})),
                        default: Format::Json,
                    })
                }
                (Some(p), Some(t)) => {
                    let r0 = parse_vector(&p)?;
                    check_dim(&r0, body.dim())?;
                    let e = resolve_dir(&body, &r0, &dir)?;
                    let est = mc_cap_measure(&body, &r0, &e, t, bins, n, seed)?;
                    let d = body.dim();
                    let mut csv = (1..=d).map(|k| format!("dir_{k}")).collect::<Vec<_>>().join(",");
                    csv.push_str(",w,std_error\n");
                    for b in &est.bins {
                        let dirs = b.dir.iter().map(|x| fmt_f64(*x)).collect::<Vec<_>>().join(",");
                        let _ = writeln!(csv, "{dirs},{},{}", fmt_f64(b.weight.value), fmt_f64(b.weight.std_error));
                    }
                    out.emit(Output { csv, json: pretty(json!({"cap_measure": est})), default: Format::Json })
                }
                _ => Err(Error::InvalidInput("cap oracle needs both --point and --t".into())),
            }
        }
    }
}
