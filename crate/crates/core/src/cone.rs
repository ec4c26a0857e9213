//! Tangent and normal cones at a boundary point, point classification, and
//! the limit measure of caps cut from the tangent cone.

use crate::body::{hull, ConvexBody, Facet, BOUNDARY_TOL};
use crate::error::{Error, Result};
use crate::linalg::{self, cross, dot, normalize, scale};
use crate::measure::{induced_measure, SphericalMeasure};
use serde::Serialize;

/// Relative singular-value threshold for the normal-cone dimension.
const RANK_TOL: f64 = 1e-9;
/// Strict-descent margin for bounded sections.
const DESCENT_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum PointClass {
    Regular,
    Ridge { normal_cone_dim: usize },
    Conical,
}

/// Tangent cone `K = {r : <r - r0, n_i> <= 0}` in H-form; its normals
/// generate the normal cone.
#[derive(Debug, Clone, PartialEq)]
pub struct TangentCone {
    pub vertex: Vec<f64>,
    /// Unit outward normals of the incident facets.
    pub halfspaces: Vec<Vec<f64>>,
    /// Incident facet indices in the source polytope (empty for analytic bodies).
    pub facet_ids: Vec<usize>,
    pub normal_cone_dim: usize,
    pub class: PointClass,
}

impl TangentCone {
    pub fn dim(&self) -> usize {
        self.vertex.len()
    }

    /// Generators of the normal cone N(r0).
    pub fn normal_cone_generators(&self) -> &[Vec<f64>] {
        &self.halfspaces
    }

    pub fn contains(&self, r: &[f64], tol: f64) -> bool {
        let x = linalg::sub(r, &self.vertex);
        self.halfspaces.iter().all(|n| dot(n, &x) <= tol)
    }

    /// Unit extreme rays of a pointed cone: directions tight on `d - 1`
    /// independent halfspaces and feasible for the rest.
    pub fn rays(&self) -> Vec<Vec<f64>> {
        let d = self.dim();
        let m = self.halfspaces.len();
        let mut rays: Vec<Vec<f64>> = Vec::new();
        for subset in combinations(m, d - 1) {
            let rows: Vec<Vec<f64>> = subset.iter().map(|i| self.halfspaces[*i].clone()).collect();
            let Some(g) = normalize(&cross(&rows)) else { continue };
            if linalg::rank(&rows, RANK_TOL) < d - 1 {
                continue;
            }
            for cand in [g.clone(), scale(&g, -1.0)] {
                if self.halfspaces.iter().all(|n| dot(n, &cand) <= 1e-9) {
                    rays.push(cand);
                }
            }
        }
        let ids = linalg::cluster_directions(&rays, 1e-9);
        let mut seen = std::collections::BTreeSet::new();
        let mut out: Vec<Vec<f64>> = Vec::new();
        for (r, id) in rays.into_iter().zip(ids) {
            if seen.insert(id) {
                out.push(r);
            }
        }
        out.sort_by(|a, b| a.partial_cmp(b).unwrap());
        out
    }

    /// Direction used by `--dir auto`: the facet normal at a regular point,
    /// the normalized mean of the generators at a conical point.
    pub fn auto_direction(&self) -> Result<Vec<f64>> {
        match self.class {
            PointClass::Regular => Ok(self.halfspaces[0].clone()),
            PointClass::Conical => {
                let mut s = vec![0.0; self.dim()];
                for n in &self.halfspaces {
                    s = linalg::add(&s, n);
                }
                normalize(&s).ok_or(Error::UnboundedCut)
            }
            PointClass::Ridge { normal_cone_dim } => Err(Error::RidgePoint { dim: normal_cone_dim }),
        }
    }
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::new(), &mut out);
    out
}

fn classify(dim: usize, normals: &[Vec<f64>]) -> (usize, PointClass) {
    let k = linalg::rank(normals, RANK_TOL);
    let class = if k <= 1 {
        PointClass::Regular
    } else if k == dim {
        PointClass::Conical
    } else {
        PointClass::Ridge { normal_cone_dim: k }
    };
    (k, class)
}

pub fn tangent_cone(body: &ConvexBody, r0: &[f64]) -> Result<TangentCone> {
    let d = body.dim();
    if r0.len() != d {
        return Err(Error::DimensionMismatch { expected: d, got: r0.len() });
    }
    match body {
        ConvexBody::Polytope(p) => {
            if !p.contains(r0, BOUNDARY_TOL * p.diameter()) {
                return Err(Error::PointNotOnBoundary);
            }
            let ids = p.incident_facets(r0);
            if ids.is_empty() {
                return Err(Error::PointNotOnBoundary);
            }
            let halfspaces: Vec<Vec<f64>> = ids.iter().map(|i| p.facets()[*i].normal.clone()).collect();
            let (k, class) = classify(d, &halfspaces);
            Ok(TangentCone { vertex: r0.to_vec(), halfspaces, facet_ids: ids, normal_cone_dim: k, class })
        }
        ConvexBody::Ellipsoid(el) => {
            if (el.level(r0) - 1.0).abs() > 1e-9 {
                return Err(Error::PointNotOnBoundary);
            }
            Ok(TangentCone {
                vertex: r0.to_vec(),
                halfspaces: vec![el.normal_at(r0)],
                facet_ids: Vec::new(),
                normal_cone_dim: 1,
                class: PointClass::Regular,
            })
        }
    }
}

/// The truncated cone `K_tau` with its base and side facets.
#[derive(Debug, Clone)]
pub struct ConeSection {
    pub base_area: f64,
    pub base_vertices: Vec<Vec<f64>>,
    pub side_facets: Vec<Facet>,
}

/// Cut the tangent cone by the plane at depth `tau` along `e`.
pub fn cone_section(cone: &TangentCone, e: &[f64], tau: f64) -> Result<ConeSection> {
    let d = cone.dim();
    if e.len() != d {
        return Err(Error::DimensionMismatch { expected: d, got: e.len() });
    }
    if cone.class != PointClass::Conical {
        return Err(Error::NotConical { dim: cone.normal_cone_dim, ambient: d });
    }
    if !(tau > 0.0) {
        return Err(Error::InvalidInput("section depth must be positive".into()));
    }
    let rays = cone.rays();
    if rays.len() < d {
        return Err(Error::UnboundedCut);
    }
    let mut base_vertices = Vec::new();
    for g in &rays {
        let c = dot(g, e);
        if c > DESCENT_TOL {
            return Err(Error::NotSupportNormal("e is outside the normal cone".into()));
        }
        if c >= -DESCENT_TOL {
            return Err(Error::UnboundedCut);
        }
        base_vertices.push(scale(g, tau / -c));
    }
    let mut pts = base_vertices.clone();
    pts.push(vec![0.0; d]);
    let k = hull(&pts)?;
    let minus_e = scale(e, -1.0);
    let mut base_area = 0.0;
    let mut side_facets = Vec::new();
    for f in k.facets() {
        if linalg::angle(&f.normal, &minus_e) <= 1e-6 {
            base_area += f.area;
            continue;
        }
        let mut f = f.clone();
        if let Some(n) = cone
            .halfspaces
            .iter()
            .min_by(|a, b| linalg::angle(a, &f.normal).partial_cmp(&linalg::angle(b, &f.normal)).unwrap())
        {
            if linalg::angle(n, &f.normal) <= 1e-6 {
                f.normal = n.clone();
            }
        }
        side_facets.push(f);
    }
    let base_vertices = base_vertices.iter().map(|v| linalg::add(v, &cone.vertex)).collect();
    Ok(ConeSection { base_area, base_vertices, side_facets })
}

/// Limit measure `nu_star = nu_{S^_tau} / |B^_tau|`, computed at `tau = 1`.
pub fn nu_star(cone: &TangentCone, e: &[f64]) -> Result<SphericalMeasure> {
    nu_star_at(cone, e, 1.0)
}

pub fn nu_star_at(cone: &TangentCone, e: &[f64], tau: f64) -> Result<SphericalMeasure> {
    let s = cone_section(cone, e, tau)?;
    if !(s.base_area > 0.0) {
        return Err(Error::DegenerateCap);
    }
    Ok(induced_measure(cone.dim(), &s.side_facets).scaled(1.0 / s.base_area))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::body::{unit_cube, Ellipsoid};

    fn cube() -> ConvexBody {
        ConvexBody::Polytope(unit_cube(3))
    }

    #[test]
    fn cube_point_classes() {
        let c = tangent_cone(&cube(), &[1.0, 1.0, 1.0]).unwrap();
        assert_eq!(c.halfspaces.len(), 3);
        assert_eq!(c.class, PointClass::Conical);
        let c = tangent_cone(&cube(), &[1.0, 1.0, 0.5]).unwrap();
        assert_eq!(c.halfspaces.len(), 2);
        assert_eq!(c.class, PointClass::Ridge { normal_cone_dim: 2 });
        let c = tangent_cone(&cube(), &[1.0, 0.5, 0.5]).unwrap();
        assert_eq!(c.halfspaces.len(), 1);
        assert_eq!(c.class, PointClass::Regular);
        assert!(matches!(tangent_cone(&cube(), &[0.5, 0.5, 0.5]), Err(Error::PointNotOnBoundary)));
        assert!(matches!(tangent_cone(&cube(), &[1.5, 0.5, 0.5]), Err(Error::PointNotOnBoundary)));
    }

    #[test]
    fn octant_limit_measure() {
        let c = tangent_cone(&cube(), &[1.0, 1.0, 1.0]).unwrap();
        let e = normalize(&[1.0, 1.0, 1.0]).unwrap();
        let nu = nu_star(&c, &e).unwrap();
        assert_eq!(nu.len(), 3);
        for a in nu.atoms() {
            assert!((a.weight - 1.0 / 3f64.sqrt()).abs() < 1e-12);
            assert_eq!(a.dir.iter().filter(|x| **x == 1.0).count(), 1);
        }
        assert!(linalg::dist(&nu.resultant(), &e) < 1e-12);
        let nu2 = nu_star_at(&c, &e, 2.0).unwrap();
        for (a, b) in nu.atoms().iter().zip(nu2.atoms()) {
            assert!((a.weight - b.weight).abs() < 1e-12);
        }
    }

    #[test]
    fn square_pyramid_apex() {
        let pts = vec![
            vec![1.0, 1.0, 0.0],
            vec![-1.0, 1.0, 0.0],
            vec![-1.0, -1.0, 0.0],
            vec![1.0, -1.0, 0.0],
            vec![0.0, 0.0, 1.0],
        ];
        let body = ConvexBody::Polytope(hull(&pts).unwrap());
        let c = tangent_cone(&body, &[0.0, 0.0, 1.0]).unwrap();
        assert_eq!(c.class, PointClass::Conical);
        let e = vec![0.0, 0.0, 1.0];
        let nu = nu_star(&c, &e).unwrap();
        assert_eq!(nu.len(), 4);
        // slant faces at 45 degrees: each atom carries sqrt(2)/4
        for a in nu.atoms() {
            assert!((a.weight - 2f64.sqrt() / 4.0).abs() < 1e-12);
        }
        assert!(linalg::dist(&nu.resultant(), &e) < 1e-12);
    }

    #[test]
    fn boundary_directions_are_refused() {
        let c = tangent_cone(&cube(), &[1.0, 1.0, 1.0]).unwrap();
        assert!(matches!(nu_star(&c, &[1.0, 0.0, 0.0]), Err(Error::UnboundedCut)));
        assert!(matches!(nu_star(&c, &[-1.0, 0.0, 0.0]), Err(Error::NotSupportNormal(_))));
        let ridge = tangent_cone(&cube(), &[1.0, 1.0, 0.5]).unwrap();
        assert!(matches!(nu_star(&ridge, &[1.0, 0.0, 0.0]), Err(Error::NotConical { .. })));
        assert!(matches!(ridge.auto_direction(), Err(Error::RidgePoint { dim: 2 })));
    }

    #[test]
    fn normal_cone_duality() {
        let p = unit_cube(3);
        let body = ConvexBody::Polytope(p.clone());
        for r0 in [[1.0, 1.0, 1.0], [1.0, 1.0, 0.5], [1.0, 0.25, 0.5]] {
            let c = tangent_cone(&body, &r0).unwrap();
            for g in c.normal_cone_generators() {
                for v in p.vertices() {
                    assert!(dot(g, &linalg::sub(v, &r0)) <= 1e-9);
                }
            }
        }
    }

    #[test]
    fn ball_points_are_regular() {
        let ball = ConvexBody::Ellipsoid(Ellipsoid::ball(vec![0.0; 3], 2.0).unwrap());
        let c = tangent_cone(&ball, &[0.0, 2.0, 0.0]).unwrap();
        assert_eq!(c.class, PointClass::Regular);
        assert_eq!(c.auto_direction().unwrap(), vec![0.0, 1.0, 0.0]);
    }
}
