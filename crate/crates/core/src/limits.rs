//! Shrinking-cap experiments: schedules, candidate limits, and convergence
//! reports measured in the bounded-Lipschitz metric.

use crate::body::{cut_cap, ConvexBody};
use crate::cone::{nu_star, tangent_cone, PointClass};
use crate::error::{Error, Result};
use crate::linalg::{self, dist, norm};
use crate::measure::{nu_t, Atom, SphericalMeasure};
use crate::parallel::ordered_map;
use crate::transport::bl_distance;
use serde::Serialize;
use std::str::FromStr;

/// Geometric schedule `t_k = t0 * ratio^k`, `k = 0..steps`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Schedule {
    pub t0: f64,
    pub ratio: f64,
    pub steps: usize,
}

impl Schedule {
    pub fn new(t0: f64, ratio: f64, steps: usize) -> Result<Self> {
        if !(t0 > 0.0 && t0.is_finite()) {
            return Err(Error::InvalidInput(format!("schedule start must be positive, got {t0}")));
        }
        if !(ratio > 0.0 && ratio < 1.0) {
            return Err(Error::InvalidInput(format!("schedule ratio must lie in (0, 1), got {ratio}")));
        }
        if steps == 0 {
            return Err(Error::InvalidInput("schedule needs at least one step".into()));
        }
        Ok(Schedule { t0, ratio, steps })
    }

    /// Default schedule for a body of width `width` along `e`.
    pub fn default_for(width: f64) -> Self {
        Schedule { t0: 0.2 * width, ratio: 0.5, steps: 15 }
    }

    pub fn values(&self) -> Vec<f64> {
        (0..self.steps).map(|k| self.t0 * self.ratio.powi(k as i32)).collect()
    }
}

impl FromStr for Schedule {
    type Err = Error;

    /// Parses `geo:t0,ratio,steps`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("schedule `{s}` is not of the form geo:t0,ratio,steps"));
        let body = s.trim().strip_prefix("geo:").ok_or_else(bad)?;
        let parts: Vec<&str> = body.split(',').map(str::trim).collect();
        if parts.len() != 3 {
            return Err(bad());
        }
        let t0 = parts[0].parse::<f64>().map_err(|_| bad())?;
        let ratio = parts[1].parse::<f64>().map_err(|_| bad())?;
        let steps = parts[2].parse::<usize>().map_err(|_| bad())?;
        Schedule::new(t0, ratio, steps)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConvergenceRecord {
    pub t: f64,
    pub mass: f64,
    pub resultant_error: f64,
    pub distance: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct ConvergenceReport {
    pub schedule: Schedule,
    pub candidate_limit: SphericalMeasure,
    pub records: Vec<ConvergenceRecord>,
}

impl ConvergenceReport {
    pub fn max_distance(&self) -> f64 {
        self.records.iter().map(|r| r.distance).fold(0.0, f64::max)
    }

    pub fn max_resultant_error(&self) -> f64 {
        self.records.iter().map(|r| r.resultant_error).fold(0.0, f64::max)
    }

    /// Distances never grow by more than `tol` from one step to the next.
    pub fn is_non_increasing(&self, tol: f64) -> bool {
        self.records.windows(2).all(|w| w[1].distance <= w[0].distance + tol)
    }
}

/// One schedule step: `nu_t` and its record.
pub fn measure_step(
    body: &ConvexBody,
    r0: &[f64],
    e: &[f64],
    t: f64,
    limit: &SphericalMeasure,
) -> Result<(SphericalMeasure, ConvergenceRecord)> {
    let nu = nu_t(&cut_cap(body, r0, e, t)?)?;
    let record = ConvergenceRecord {
        t,
        mass: nu.total_mass(),
        resultant_error: dist(&nu.resultant(), e),
        distance: bl_distance(&nu, limit)?,
    };
    Ok((nu, record))
}

/// Track `nu_t` along the schedule against a candidate limit.
pub fn run_convergence(
    body: &ConvexBody,
    r0: &[f64],
    e: &[f64],
    candidate_limit: &SphericalMeasure,
    schedule: &Schedule,
) -> Result<ConvergenceReport> {
    if candidate_limit.dim() != body.dim() {
        return Err(Error::DimensionMismatch { expected: body.dim(), got: candidate_limit.dim() });
    }
    let ts = schedule.values();
    let records = ordered_map(&ts, |t| measure_step(body, r0, e, *t, candidate_limit).map(|(_, r)| r))
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
    Ok(ConvergenceReport { schedule: *schedule, candidate_limit: candidate_limit.clone(), records })
}

/// Limit of `nu_t` for a planar body whose tangent angle has side normals
/// `e1`, `e2`: the measure `l1 δ_{e1} + l2 δ_{e2}` with `e = l1 e1 + l2 e2`.
pub fn limit_2d(e1: &[f64], e2: &[f64], e: &[f64]) -> Result<SphericalMeasure> {
    for v in [e1, e2, e] {
        if v.len() != 2 {
            return Err(Error::DimensionMismatch { expected: 2, got: v.len() });
        }
        if (norm(v) - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidInput("limit_2d expects unit vectors".into()));
        }
    }
    const ANG: f64 = 1e-9;
    if linalg::angle(e1, e2) <= ANG {
        return if linalg::angle(e, e1) <= ANG { SphericalMeasure::dirac(e) } else { Err(Error::NotInPositiveHull) };
    }
    let det = e1[0] * e2[1] - e1[1] * e2[0];
    if det.abs() <= 1e-12 {
        // opposite normals: only e1 or e2 themselves are reachable
        return if linalg::angle(e, e1) <= ANG {
            SphericalMeasure::dirac(e1)
        } else if linalg::angle(e, e2) <= ANG {
            SphericalMeasure::dirac(e2)
        } else {
            Err(Error::NotInPositiveHull)
        };
    }
    let l1 = (e[0] * e2[1] - e[1] * e2[0]) / det;
    let l2 = (e1[0] * e[1] - e1[1] * e[0]) / det;
    if l1 < -1e-12 || l2 < -1e-12 {
        return Err(Error::NotInPositiveHull);
    }
    let atoms = vec![Atom { dir: e1.to_vec(), weight: l1.max(0.0) }, Atom { dir: e2.to_vec(), weight: l2.max(0.0) }];
    SphericalMeasure::new(2, atoms.into_iter().filter(|a| a.weight > 1e-15).collect())
}

/// Which candidate limit to compare against.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LimitKind {
    /// `ν⋆` of the tangent cone.
    Cone,
    /// The point mass `δ_e`.
    Atom,
    /// The two-atom planar formula.
    Planar,
}

impl FromStr for LimitKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "cone" => Ok(LimitKind::Cone),
            "atom" => Ok(LimitKind::Atom),
            "2d" => Ok(LimitKind::Planar),
            _ => Err(Error::Parse(format!("unknown limit `{s}` (expected cone, atom or 2d)"))),
        }
    }
}

/// The candidate limit measure at `r0` for direction `e`.
pub fn candidate_limit(body: &ConvexBody, r0: &[f64], e: &[f64], kind: LimitKind) -> Result<SphericalMeasure> {
    match kind {
        LimitKind::Atom => SphericalMeasure::dirac(e),
        LimitKind::Cone => {
            let cone = tangent_cone(body, r0)?;
            nu_star(&cone, e)
        }
        LimitKind::Planar => {
            if body.dim() != 2 {
                return Err(Error::DimensionMismatch { expected: 2, got: body.dim() });
            }
            let cone = tangent_cone(body, r0)?;
            let hs = &cone.halfspaces;
            match (cone.class, hs.len()) {
                (PointClass::Regular, _) => limit_2d(&hs[0], &hs[0], e),
                (_, 2) => limit_2d(&hs[0], &hs[1], e),
                _ => Err(Error::DegenerateInput("tangent angle needs two sides".into())),
            }
        }
    }
}

/// Largest angle between `e` and a cap normal of the ball of radius `r` cut
/// at depth `t`.
pub fn ball_cap_angle(r: f64, t: f64) -> f64 {
    (1.0 - t / r).clamp(-1.0, 1.0).acos()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::body::{hull, unit_cube, Ellipsoid};
    use crate::linalg::normalize;

    #[test]
    fn schedule_parsing() {
        let s: Schedule = "geo:0.2,0.5,15".parse().unwrap();
        assert_eq!(s, Schedule { t0: 0.2, ratio: 0.5, steps: 15 });
        let v = s.values();
        assert_eq!(v.len(), 15);
        assert_eq!(v[14], 0.2 * 0.5f64.powi(14));
        for bad in ["0.2,0.5,15", "geo:0.2,0.5", "geo:-1,0.5,3", "geo:0.2,1.5,3", "geo:a,b,c", "geo:0.2,0.5,0"] {
            assert!(bad.parse::<Schedule>().is_err(), "{bad}");
        }
        assert!(matches!("geo:x,0.5,2".parse::<Schedule>(), Err(Error::Parse(_))));
    }

    #[test]
    fn planar_formula() {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let m = limit_2d(&[1.0, 0.0], &[0.0, 1.0], &[s, s]).unwrap();
        assert_eq!(m.len(), 2);
        assert!(m.atoms().iter().all(|a| (a.weight - s).abs() < 1e-15));
        let m = limit_2d(&[s, s], &[s, s], &[s, s]).unwrap();
        assert_eq!(m.len(), 1);
        assert_eq!(m.total_mass(), 1.0);
        let m = limit_2d(&[1.0, 0.0], &[0.0, 1.0], &[1.0, 0.0]).unwrap();
        assert_eq!(m.len(), 1);
        assert_eq!(m.atoms()[0].dir, vec![1.0, 0.0]);
        assert!(matches!(limit_2d(&[1.0, 0.0], &[0.0, 1.0], &[-s, s]), Err(Error::NotInPositiveHull)));
        assert!(matches!(limit_2d(&[1.0, 0.0], &[-1.0, 0.0], &[0.0, 1.0]), Err(Error::NotInPositiveHull)));
    }

    #[test]
    fn cube_corner_is_exact_along_schedule() {
        let body = ConvexBody::Polytope(unit_cube(3));
        let r0 = [1.0, 1.0, 1.0];
        let e = normalize(&r0).unwrap();
        let limit = candidate_limit(&body, &r0, &e, LimitKind::Cone).unwrap();
        let rep = run_convergence(&body, &r0, &e, &limit, &"geo:0.2,0.5,15".parse().unwrap()).unwrap();
        assert_eq!(rep.records.len(), 15);
        assert!(rep.max_distance() <= 1e-9);
        assert!(rep.max_resultant_error() <= 1e-9);
        assert!(rep.records.windows(2).all(|w| w[0].t > w[1].t));
    }

    #[test]
    fn ball_distance_bound() {
        let body = ConvexBody::Ellipsoid(Ellipsoid::ball(vec![0.0; 3], 1.0).unwrap());
        let e = vec![0.0, 0.0, 1.0];
        let limit = SphericalMeasure::dirac(&e).unwrap();
        let rep = run_convergence(&body, &e, &e, &limit, &"geo:0.2,0.5,8".parse().unwrap()).unwrap();
        assert!(rep.is_non_increasing(1e-12));
        for r in &rep.records {
            assert!((r.mass - 2.0 / (2.0 - r.t)).abs() < 1e-12);
            assert!(r.distance <= 2.0 * r.t.sqrt());
        }
    }

    #[test]
    fn square_corner_matches_planar_limit() {
        let body = ConvexBody::Polytope(unit_cube(2));
        let r0 = [1.0, 1.0];
        let e = normalize(&r0).unwrap();
        let limit = candidate_limit(&body, &r0, &e, LimitKind::Planar).unwrap();
        let rep = run_convergence(&body, &r0, &e, &limit, &"geo:0.1,0.5,6".parse().unwrap()).unwrap();
        assert!(rep.max_distance() <= 1e-9);
        let tri = ConvexBody::Polytope(hull(&[vec![0.0, 0.0], vec![2.0, 0.0], vec![0.0, 1.0]]).unwrap());
        assert!(candidate_limit(&tri, &[2.0, 0.0], &[1.0, 0.0], LimitKind::Planar).is_ok());
    }
}
