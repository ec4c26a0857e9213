//! Checkable forms of the perimeter, slab, inscribed-ball, chord-growth,
//! flagged-area and nesting estimates used in the limit arguments.

use crate::body::{cut_cap, hull, CapCut, CapShape, ConvexBody, Polytope};
use crate::cone::{cone_section, tangent_cone, PointClass};
use crate::error::{Error, Result};
use crate::linalg::{self, complement_basis, dot, norm, sub, unit_ball_volume};
use crate::measure::nu_t;
use serde::Serialize;
use std::f64::consts::PI;

/// Outcome of an inequality check `lhs <= rhs`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundCheck {
    pub lhs: f64,
    pub rhs: f64,
    pub holds: bool,
}

impl BoundCheck {
    fn new(lhs: f64, rhs: f64) -> Self {
        BoundCheck { lhs, rhs, holds: lhs <= rhs + 1e-9 * rhs.abs().max(1.0) }
    }
}

#[derive(Debug, Clone)]
enum ProfileShape {
    Polytope(Polytope),
    Ball,
}

/// A convex set `D` of dimension `k` with area `A`, perimeter `P` and a
/// certified inscribed ball of radius `a`.
#[derive(Debug, Clone)]
pub struct SlabProfile {
    pub dim: usize,
    pub area: f64,
    pub perimeter: f64,
    pub inradius: f64,
    pub center: Vec<f64>,
    shape: ProfileShape,
}

impl SlabProfile {
    /// Profile of a polytope with the ball `B(center, a)` claimed inside it.
    pub fn new(d: Polytope, center: Vec<f64>, a: f64) -> Result<Self> {
        let k = d.dim();
        if center.len() != k {
            return Err(Error::DimensionMismatch { expected: k, got: center.len() });
        }
        if !(a > 0.0) {
            return Err(Error::BallNotContained { radius: a });
        }
        let slack = 1e-12 * d.diameter();
        if d.facets().iter().any(|f| f.offset - dot(&f.normal, &center) < a - slack) {
            return Err(Error::BallNotContained { radius: a });
        }
        Ok(SlabProfile {
            dim: k,
            area: d.volume(),
            perimeter: d.boundary_area(),
            inradius: a,
            center,
            shape: ProfileShape::Polytope(d),
        })
    }

    /// Profile of a polytope with the largest ball centred at `center`,
    /// certified by the facet distances.
    pub fn certified(d: Polytope, center: Vec<f64>) -> Result<Self> {
        let a = d.facets().iter().map(|f| f.offset - dot(&f.normal, &center)).fold(f64::INFINITY, f64::min);
        Self::new(d, center, a)
    }

    /// The `k`-dimensional ball of radius `r`, its own inscribed ball.
    pub fn ball(k: usize, r: f64) -> Result<Self> {
        if !(2..=3).contains(&k) {
            return Err(Error::UnsupportedDimension(k));
        }
        if !(r > 0.0) {
            return Err(Error::BallNotContained { radius: r });
        }
        let vol = unit_ball_volume(k);
        Ok(SlabProfile {
            dim: k,
            area: vol * r.powi(k as i32),
            perimeter: k as f64 * vol * r.powi(k as i32 - 1),
            inradius: r,
            center: vec![0.0; k],
            shape: ProfileShape::Ball,
        })
    }

    pub fn polytope(&self) -> Option<&Polytope> {
        match &self.shape {
            ProfileShape::Polytope(p) => Some(p),
            ProfileShape::Ball => None,
        }
    }
}

/// `P <= k A / a` for a `k`-dimensional profile.
pub fn check_perimeter_bound(profile: &SlabProfile) -> BoundCheck {
    BoundCheck::new(profile.perimeter, profile.dim as f64 * profile.area / profile.inradius)
}

/// `(d-2)`-volume of the boundary of the orthogonal projection of `p` onto
/// the hyperplane `e^⊥`.
pub fn shadow_perimeter(p: &Polytope, e: &[f64]) -> Result<f64> {
    let d = p.dim();
    if d == 2 {
        // the shadow is a segment; its boundary is two points
        return Ok(2.0);
    }
    let basis = complement_basis(e);
    let pts: Vec<Vec<f64>> = p.vertices().iter().map(|v| basis.iter().map(|b| dot(b, v)).collect()).collect();
    Ok(hull(&pts)?.boundary_area())
}

/// `|U| <= 2 t P / sin φ` for a polytope between two planes orthogonal to `e`
/// at distance `t`, where `U` collects the facets whose normals make an angle
/// of at least `φ` with `±e`.
pub fn check_slab_bound(p: &Polytope, e: &[f64], t: f64, phi: f64) -> Result<BoundCheck> {
    let d = p.dim();
    if e.len() != d {
        return Err(Error::DimensionMismatch { expected: d, got: e.len() });
    }
    if !(phi > 0.0 && phi < PI / 2.0) {
        return Err(Error::InvalidInput(format!("angle must lie in (0, pi/2), got {phi}")));
    }
    let width = ConvexBody::Polytope(p.clone()).width(e);
    if width > t * (1.0 + 1e-12) + 1e-12 * p.diameter() {
        return Err(Error::NotInSlab { t });
    }
    let c = phi.cos();
    let u: f64 = p.facets().iter().filter(|f| dot(&f.normal, e).abs() <= c + 1e-12).map(|f| f.area).sum();
    let perimeter = shadow_perimeter(p, e)?;
    Ok(BoundCheck::new(u, 2.0 * t * perimeter / phi.sin()))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InscribedBall {
    pub center: Vec<f64>,
    pub radius: f64,
}

/// Ball inside the convex hull of `k` mutually orthogonal segments in `R^k`.
///
/// The averages `P_J = (1/k) Σ_i A_i^{J(i)}` span a box with sides `L_i / k`,
/// so the ball of radius `min L_i / (2k)` about the mean of the segment
/// midpoints lies in the hull; for unit segments the radius is `1/(2k)`.
pub fn inscribed_ball_from_segments(segments: &[[Vec<f64>; 2]]) -> Result<InscribedBall> {
    let k = segments.len();
    if k == 0 {
        return Err(Error::InvalidInput("need at least one segment".into()));
    }
    for s in segments {
        for p in s {
            if p.len() != k {
                return Err(Error::DimensionMismatch { expected: k, got: p.len() });
            }
        }
    }
    let dirs: Vec<Vec<f64>> = segments.iter().map(|s| sub(&s[1], &s[0])).collect();
    let lens: Vec<f64> = dirs.iter().map(|v| norm(v)).collect();
    if lens.iter().any(|l| !(*l > 0.0)) {
        return Err(Error::DegenerateInput("segment of zero length".into()));
    }
    for i in 0..k {
        for j in (i + 1)..k {
            if (dot(&dirs[i], &dirs[j]) / (lens[i] * lens[j])).abs() > 1e-9 {
                return Err(Error::NotOrthogonal);
            }
        }
    }
    let mut center = vec![0.0; k];
    for s in segments {
        center = linalg::axpy(&center, 0.5 / k as f64, &linalg::add(&s[0], &s[1]));
    }
    let lmin = lens.iter().cloned().fold(f64::INFINITY, f64::min);
    Ok(InscribedBall { center, radius: lmin / (2.0 * k as f64) })
}

/// Length of the chord of `body` on the line `p + s u`.
pub fn chord_length(body: &ConvexBody, p: &[f64], u: &[f64]) -> f64 {
    match body {
        ConvexBody::Ellipsoid(el) => {
            let q: Vec<f64> = p.iter().zip(&el.center).zip(&el.semi_axes).map(|((x, c), a)| (x - c) / a).collect();
            let w: Vec<f64> = u.iter().zip(&el.semi_axes).map(|(x, a)| x / a).collect();
            let (a2, b, c) = (dot(&w, &w), 2.0 * dot(&q, &w), dot(&q, &q) - 1.0);
            let disc = b * b - 4.0 * a2 * c;
            if disc <= 0.0 {
                0.0
            } else {
                disc.sqrt() / a2 * norm(u)
            }
        }
        ConvexBody::Polytope(poly) => {
            let (mut lo, mut hi) = (f64::NEG_INFINITY, f64::INFINITY);
            for f in poly.facets() {
                let a = dot(&f.normal, u);
                let b = f.offset - dot(&f.normal, p);
                if a.abs() < 1e-15 {
                    if b < 0.0 {
                        return 0.0;
                    }
                } else if a > 0.0 {
                    hi = hi.min(b / a);
                } else {
                    lo = lo.max(b / a);
                }
            }
            ((hi - lo) * norm(u)).max(0.0)
        }
    }
}

/// `β_t / t`, where `β_t` is the shortest of the `d-1` chords of `B_t`
/// through `r0 - t e` along an orthonormal frame of `e^⊥`.
pub fn beta_ratio(body: &ConvexBody, r0: &[f64], e: &[f64], t: f64) -> Result<f64> {
    let cone = tangent_cone(body, r0)?;
    if cone.class != PointClass::Regular {
        return Err(Error::NotRegularPoint);
    }
    cut_cap(body, r0, e, t)?;
    let p = linalg::axpy(r0, -t, e);
    let beta = complement_basis(e).iter().map(|b| chord_length(body, &p, b)).fold(f64::INFINITY, f64::min);
    Ok(beta / t)
}

/// Side area of a cap whose normals make an angle of at least `φ` with `e`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FlaggedCap {
    pub phi: f64,
    pub flagged_area: f64,
    pub side_area: f64,
    pub base_area: f64,
}

impl FlaggedCap {
    /// `|S_{t,φ}| / |B_t|`
    pub fn ratio(&self) -> f64 {
        self.flagged_area / self.base_area
    }
}

pub fn flagged_ratio(cap: &CapCut, phi: f64) -> Result<FlaggedCap> {
    let c = phi.cos();
    let flagged_area = match &cap.shape {
        CapShape::Polytope { side_facets, .. } => {
            side_facets.iter().filter(|f| dot(&f.normal, &cap.e) <= c).map(|f| f.area).sum()
        }
        CapShape::Ellipsoid(el) if el.body.is_ball() => {
            let r = el.body.semi_axes[0];
            let theta_max = el.cos_max.clamp(-1.0, 1.0).acos();
            if cap.dim() == 2 {
                2.0 * r * (theta_max - phi).max(0.0)
            } else {
                2.0 * PI * r * r * (c - el.cos_max).max(0.0)
            }
        }
        CapShape::Ellipsoid(_) => {
            let nu = nu_t(cap)?;
            cap.base_area * nu.atoms().iter().filter(|a| dot(&a.dir, &cap.e) <= c).map(|a| a.weight).sum::<f64>()
        }
    };
    Ok(FlaggedCap { phi, flagged_area, side_area: cap.side_area(), base_area: cap.base_area })
}

/// Base `B_t` of a polytope cap as points.
pub fn base_vertices(cap: &CapCut) -> Vec<Vec<f64>> {
    match &cap.shape {
        CapShape::Polytope { body, base_facets, .. } => {
            let mut ids: Vec<usize> = base_facets.iter().flat_map(|f| f.vertices.iter().cloned()).collect();
            ids.sort_unstable();
            ids.dedup();
            ids.into_iter().map(|i| body.vertices()[i].clone()).collect()
        }
        CapShape::Ellipsoid(_) => Vec::new(),
    }
}

/// A convex set inside a hyperplane, in coordinates of that hyperplane.
#[derive(Debug, Clone)]
enum FlatSet {
    Interval(f64, f64),
    Polytope(Polytope),
}

impl FlatSet {
    fn new(pts: &[Vec<f64>]) -> Result<Self> {
        if pts.first().map_or(0, |p| p.len()) == 1 {
            let lo = pts.iter().map(|p| p[0]).fold(f64::INFINITY, f64::min);
            let hi = pts.iter().map(|p| p[0]).fold(f64::NEG_INFINITY, f64::max);
            return Ok(FlatSet::Interval(lo, hi));
        }
        match hull(pts) {
            Ok(p) => Ok(FlatSet::Polytope(p)),
            Err(Error::DegenerateInput(_)) => Err(Error::DegenerateCap),
            Err(e) => Err(e),
        }
    }

    fn contains(&self, x: &[f64], tol: f64) -> bool {
        match self {
            FlatSet::Interval(lo, hi) => x[0] >= lo - tol && x[0] <= hi + tol,
            FlatSet::Polytope(p) => p.contains(x, tol),
        }
    }

    fn support(&self, u: &[f64]) -> f64 {
        match self {
            FlatSet::Interval(lo, hi) => (u[0] * lo).max(u[0] * hi),
            FlatSet::Polytope(p) => p.vertices().iter().map(|v| dot(v, u)).fold(f64::NEG_INFINITY, f64::max),
        }
    }
}

/// Fixed direction set on the unit sphere of `R^k` used for support gaps.
fn probe_directions(k: usize) -> Vec<Vec<f64>> {
    match k {
        1 => vec![vec![1.0], vec![-1.0]],
        2 => (0..720)
            .map(|i| {
                let a = 2.0 * PI * i as f64 / 720.0;
                vec![a.cos(), a.sin()]
            })
            .collect(),
        _ => {
            // Fibonacci lattice
            let n = 2000;
            let golden = PI * (3.0 - 5f64.sqrt());
            (0..n)
                .map(|i| {
                    let z = 1.0 - 2.0 * (i as f64 + 0.5) / n as f64;
                    let r = (1.0 - z * z).sqrt();
                    let a = golden * i as f64;
                    vec![r * a.cos(), r * a.sin(), z]
                })
                .collect()
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NestingStep {
    pub t: f64,
    /// The previous (larger-t) scaled base lies inside this one.
    pub nested: bool,
    /// This scaled base lies inside the cone section.
    pub inside_cone: bool,
    /// Hausdorff distance to the cone section, from support functions over
    /// a fixed direction set.
    pub hausdorff: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NestingReport {
    pub sigma: f64,
    pub steps: Vec<NestingStep>,
}

impl NestingReport {
    pub fn holds(&self) -> bool {
        self.steps.iter().all(|s| s.nested && s.inside_cone)
    }

    pub fn hausdorff_non_increasing(&self, tol: f64) -> bool {
        self.steps.windows(2).all(|w| w[1].hausdorff <= w[0].hausdorff + tol)
    }
}

/// Check that the rescaled bases `(σ/t) B_t` (about `r0`) grow as `t`
/// decreases and stay inside the section `B̂_σ` of the tangent cone.
pub fn check_nesting(body: &ConvexBody, r0: &[f64], e: &[f64], sigma: f64, ts: &[f64]) -> Result<NestingReport> {
    let d = body.dim();
    let cone = tangent_cone(body, r0)?;
    if cone.class != PointClass::Conical {
        return Err(Error::NotConical { dim: cone.normal_cone_dim, ambient: d });
    }
    let section = cone_section(&cone, e, sigma)?;
    let basis = complement_basis(e);
    let flat = |x: &[f64]| -> Vec<f64> {
        let y = sub(x, r0);
        basis.iter().map(|b| dot(b, &y)).collect()
    };
    let hat_pts: Vec<Vec<f64>> = section.base_vertices.iter().map(|v| flat(v)).collect();
    let hat = FlatSet::new(&hat_pts)?;
    let scale_len = hat_pts.iter().flat_map(|a| hat_pts.iter().map(move |b| linalg::dist(a, b))).fold(0.0, f64::max);
    let tol = 1e-9 * scale_len.max(sigma);
    let dirs = probe_directions(d - 1);
    let hat_h: Vec<f64> = dirs.iter().map(|u| hat.support(u)).collect();

    let mut ts = ts.to_vec();
    ts.sort_by(|a, b| b.partial_cmp(a).unwrap());
    let mut steps = Vec::new();
    let mut prev: Option<Vec<Vec<f64>>> = None;
    for t in ts {
        let cap = cut_cap(body, r0, e, t)?;
        let k = sigma / t;
        let pts: Vec<Vec<f64>> = base_vertices(&cap).iter().map(|v| flat(&linalg::axpy(r0, k, &sub(v, r0)))).collect();
        let set = FlatSet::new(&pts)?;
        let nested = prev.as_ref().is_none_or(|q| q.iter().all(|x| set.contains(x, tol)));
        let inside_cone = pts.iter().all(|x| hat.contains(x, tol));
        let hausdorff = dirs.iter().zip(&hat_h).map(|(u, h)| h - set.support(u)).fold(0.0, f64::max);
        steps.push(NestingStep { t, nested, inside_cone, hausdorff });
        prev = Some(pts);
    }
    Ok(NestingReport { sigma, steps })
}

/// Depth at which the cone section at `r0` has unit base area.
pub fn unit_section_depth(body: &ConvexBody, r0: &[f64], e: &[f64]) -> Result<f64> {
    let cone = tangent_cone(body, r0)?;
    let s = cone_section(&cone, e, 1.0)?;
    Ok(s.base_area.powf(-1.0 / (body.dim() - 1) as f64))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::body::{unit_cube, Ellipsoid};
    use crate::linalg::normalize;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn perimeter_bound_equality_cases() {
        let disk = SlabProfile::ball(2, 0.7).unwrap();
        let c = check_perimeter_bound(&disk);
        assert!((c.lhs - c.rhs).abs() < 1e-12 && c.holds);
        let sq = SlabProfile::new(unit_cube(2), vec![0.5, 0.5], 0.5).unwrap();
        let c = check_perimeter_bound(&sq);
        assert!((c.lhs - 4.0).abs() < 1e-12 && (c.rhs - 4.0).abs() < 1e-12 && c.holds);
        assert!(matches!(SlabProfile::new(unit_cube(2), vec![0.5, 0.5], 0.6), Err(Error::BallNotContained { .. })));
        let cube = SlabProfile::certified(unit_cube(3), vec![0.5; 3]).unwrap();
        assert!((cube.inradius - 0.5).abs() < 1e-12);
        assert!(check_perimeter_bound(&cube).holds);
    }

    #[test]
    fn thin_prism_slab_bound() {
        let t = 0.01;
        let pts: Vec<Vec<f64>> = unit_cube(3).vertices().iter().map(|v| vec![v[0], v[1], v[2] * t]).collect();
        let p = hull(&pts).unwrap();
        let c = check_slab_bound(&p, &[0.0, 0.0, 1.0], t, PI / 4.0).unwrap();
        assert!((c.lhs - 0.04).abs() < 1e-12);
        assert!((c.rhs - 2.0 * t * 4.0 / (PI / 4.0).sin()).abs() < 1e-12);
        assert!(c.holds);
        assert!(matches!(check_slab_bound(&p, &[0.0, 0.0, 1.0], t / 2.0, 0.5), Err(Error::NotInSlab { .. })));
    }

    #[test]
    fn segment_balls() {
        let b = inscribed_ball_from_segments(&[[vec![0.0, 0.0], vec![1.0, 0.0]], [vec![0.0, 0.0], vec![0.0, 1.0]]])
            .unwrap();
        assert_eq!(b.radius, 0.25);
        assert_eq!(b.center, vec![0.25, 0.25]);
        let segs: Vec<[Vec<f64>; 2]> = (0..3).map(|i| [vec![0.0; 3], linalg::unit(3, i)]).collect();
        assert!((inscribed_ball_from_segments(&segs).unwrap().radius - 1.0 / 6.0).abs() < 1e-15);
        assert!(matches!(
            inscribed_ball_from_segments(&[[vec![0.0, 0.0], vec![1.0, 0.0]], [vec![0.0, 0.0], vec![1.0, 1.0]]]),
            Err(Error::NotOrthogonal)
        ));
    }

    #[test]
    fn segment_ball_lies_in_hull() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let segs = [[vec![0.0, 0.0], vec![1.0, 0.0]], [vec![0.0, 0.0], vec![0.0, 1.0]]];
        let b = inscribed_ball_from_segments(&segs).unwrap();
        let h = hull(&segs.iter().flatten().cloned().collect::<Vec<_>>()).unwrap();
        for _ in 0..1000 {
            let a = rng.random_range(0.0..2.0 * PI);
            let r = b.radius * rng.random_range(0.0f64..1.0).sqrt();
            assert!(h.contains(&[b.center[0] + r * a.cos(), b.center[1] + r * a.sin()], 1e-12));
        }
    }

    #[test]
    fn ball_beta_ratio() {
        let ball = ConvexBody::Ellipsoid(Ellipsoid::ball(vec![0.0; 3], 1.0).unwrap());
        let e = [0.0, 0.0, 1.0];
        let r = beta_ratio(&ball, &e, &e, 0.1).unwrap();
        assert!((r - 2.0 * (0.2f64 - 0.01).sqrt() / 0.1).abs() < 1e-12);
        let mut t = 0.2;
        let mut last = beta_ratio(&ball, &e, &e, t).unwrap();
        for _ in 0..10 {
            t /= 2.0;
            let next = beta_ratio(&ball, &e, &e, t).unwrap();
            assert!(next > last);
            last = next;
        }
        let cube = ConvexBody::Polytope(unit_cube(3));
        assert!(matches!(
            beta_ratio(&cube, &[1.0, 1.0, 1.0], &normalize(&[1.0, 1.0, 1.0]).unwrap(), 0.1),
            Err(Error::NotRegularPoint)
        ));
        let facet = beta_ratio(&cube, &[1.0, 0.5, 0.5], &[1.0, 0.0, 0.0], 0.1).unwrap();
        assert!((facet - 10.0).abs() < 1e-9);
    }

    #[test]
    fn ellipsoid_chords_match_closed_form() {
        let el = Ellipsoid::new(crate::body::AnalyticKind::Ellipsoid, vec![0.0; 3], vec![1.0, 2.0, 3.0]).unwrap();
        let body = ConvexBody::Ellipsoid(el);
        let e = [0.0, 0.0, 1.0];
        let r0 = [0.0, 0.0, 3.0];
        let t = 0.3;
        // cross-section at height 3 - t is the ellipse with semi-axes a_i sqrt(1 - (1 - t/3)^2)
        let s = (1.0 - (1.0 - t / 3.0f64).powi(2)).sqrt();
        let r = beta_ratio(&body, &r0, &e, t).unwrap();
        assert!((r - 2.0 * s / t).abs() < 1e-12);
    }

    #[test]
    fn flagged_area_of_ball_and_corner() {
        let ball = ConvexBody::Ellipsoid(Ellipsoid::ball(vec![0.0; 3], 1.0).unwrap());
        let e = [0.0, 0.0, 1.0];
        let t = 0.1;
        let cap = cut_cap(&ball, &e, &e, t).unwrap();
        let theta = (1.0 - t).acos();
        assert_eq!(flagged_ratio(&cap, theta + 1e-6).unwrap().ratio(), 0.0);
        let f = flagged_ratio(&cap, 0.0).unwrap();
        assert!((f.flagged_area - f.side_area).abs() < 1e-12);

        let cube = ConvexBody::Polytope(unit_cube(3));
        let e = normalize(&[1.0, 1.0, 1.0]).unwrap();
        let cap = cut_cap(&cube, &[1.0, 1.0, 1.0], &e, 0.1).unwrap();
        let f = flagged_ratio(&cap, 0.5).unwrap();
        assert!((f.ratio() - 3f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn cube_corner_nesting_is_equality() {
        let cube = ConvexBody::Polytope(unit_cube(3));
        let r0 = [1.0, 1.0, 1.0];
        let e = normalize(&r0).unwrap();
        let sigma = unit_section_depth(&cube, &r0, &e).unwrap();
        let ts: Vec<f64> = (0..8).map(|k| 0.5 * 0.5f64.powi(k)).collect();
        let rep = check_nesting(&cube, &r0, &e, sigma, &ts).unwrap();
        assert!(rep.holds());
        assert!(rep.steps.iter().all(|s| s.hausdorff < 1e-9));
        let ridge = check_nesting(&cube, &[1.0, 1.0, 0.5], &e, 1.0, &ts);
        assert!(matches!(ridge, Err(Error::NotConical { .. })));
    }
}
