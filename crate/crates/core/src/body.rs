//! Convex bodies, their facets, support data and the cap cut at depth `t`
//! below a support plane.

use crate::error::{Error, Result};
use crate::hull::simplicial_hull;
use crate::linalg::{self, add, cross, dist, dot, factorial, norm, normalize, scale, sub, unit_ball_volume};
use std::collections::BTreeSet;

/// Angular tolerance used to merge coplanar simplices into one facet.
pub const FACET_MERGE_ANGLE: f64 = 1e-9;
/// Facets smaller than this times `diameter^(d-1)` are dropped.
pub const FACET_AREA_TOL: f64 = 1e-12;
/// Relative tolerance (times diameter) for boundary and support tests.
pub const BOUNDARY_TOL: f64 = 1e-9;
/// Angle within which a clipped facet is matched to its source facet.
const SOURCE_MATCH_ANGLE: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq)]
pub struct Facet {
    /// Outward unit normal.
    pub normal: Vec<f64>,
    /// `<normal, x> = offset` on the facet.
    pub offset: f64,
    /// (d-1)-dimensional volume.
    pub area: f64,
    /// Indices into the owning polytope's vertex list.
    pub vertices: Vec<usize>,
    /// Simplices (vertex index tuples) triangulating the facet.
    pub pieces: Vec<Vec<usize>>,
}

/// Full-dimensional convex polytope in R^d, d in 2..=4.
#[derive(Debug, Clone)]
pub struct Polytope {
    dim: usize,
    vertices: Vec<Vec<f64>>,
    facets: Vec<Facet>,
    diameter: f64,
}

impl Polytope {
    pub fn dim(&self) -> usize {
        self.dim
    }
    pub fn vertices(&self) -> &[Vec<f64>] {
        &self.vertices
    }
    pub fn facets(&self) -> &[Facet] {
        &self.facets
    }
    pub fn diameter(&self) -> f64 {
        self.diameter
    }

    /// Total boundary (d-1)-volume.
    pub fn boundary_area(&self) -> f64 {
        self.facets.iter().map(|f| f.area).sum()
    }

    /// d-volume by the divergence theorem about the vertex centroid.
    pub fn volume(&self) -> f64 {
        let c = self.centroid();
        self.facets.iter().map(|f| f.area * (f.offset - dot(&f.normal, &c))).sum::<f64>() / self.dim as f64
    }

    /// Vertex centroid (an interior point).
    pub fn centroid(&self) -> Vec<f64> {
        let mut c = vec![0.0; self.dim];
        for v in &self.vertices {
            for k in 0..self.dim {
                c[k] += v[k];
            }
        }
        scale(&c, 1.0 / self.vertices.len() as f64)
    }

    /// `sum area * normal` over all facets; zero for a closed boundary.
    pub fn area_resultant(&self) -> Vec<f64> {
        let mut r = vec![0.0; self.dim];
        for f in &self.facets {
            for k in 0..self.dim {
                r[k] += f.area * f.normal[k];
            }
        }
        r
    }

    pub fn contains(&self, p: &[f64], tol: f64) -> bool {
        self.facets.iter().all(|f| dot(&f.normal, p) - f.offset <= tol)
    }

    /// Inside the polytope and within `tol` of some facet plane.
    pub fn on_boundary(&self, p: &[f64], tol: f64) -> bool {
        let gap = self.facets.iter().map(|f| dot(&f.normal, p) - f.offset).fold(f64::NEG_INFINITY, f64::max);
        gap.abs() <= tol
    }

    pub fn translated(&self, by: &[f64]) -> Polytope {
        Polytope {
            dim: self.dim,
            vertices: self.vertices.iter().map(|v| add(v, by)).collect(),
            facets: self.facets.iter().map(|f| Facet { offset: f.offset + dot(&f.normal, by), ..f.clone() }).collect(),
            diameter: self.diameter,
        }
    }

    /// Homothety about `center` with ratio `k > 0`.
    pub fn scaled_about(&self, center: &[f64], k: f64) -> Polytope {
        let map = |v: &Vec<f64>| add(center, &scale(&sub(v, center), k));
        let kd = k.powi(self.dim as i32 - 1);
        Polytope {
            dim: self.dim,
            vertices: self.vertices.iter().map(map).collect(),
            facets: self
                .facets
                .iter()
                .map(|f| Facet {
                    offset: dot(&f.normal, center) + k * (f.offset - dot(&f.normal, center)),
                    area: f.area * kd,
                    ..f.clone()
                })
                .collect(),
            diameter: self.diameter * k,
        }
    }

    /// Indices of facets whose hyperplane passes through `p` (within tolerance).
    pub fn incident_facets(&self, p: &[f64]) -> Vec<usize> {
        let tol = BOUNDARY_TOL * self.diameter;
        self.facets
            .iter()
            .enumerate()
            .filter(|(_, f)| (dot(&f.normal, p) - f.offset).abs() <= tol)
            .map(|(i, _)| i)
            .collect()
    }

    fn from_simplicial(points: Vec<Vec<f64>>, simplices: Vec<Vec<usize>>) -> (Polytope, bool) {
        let d = points[0].len();
        let used: BTreeSet<usize> = simplices.iter().flatten().cloned().collect();
        let remap: std::collections::HashMap<usize, usize> =
            used.iter().enumerate().map(|(new, old)| (*old, new)).collect();
        let vertices: Vec<Vec<f64>> = used.iter().map(|i| points[*i].clone()).collect();
        let simplices: Vec<Vec<usize>> = simplices.iter().map(|s| s.iter().map(|i| remap[i]).collect()).collect();
        let mut diameter: f64 = 0.0;
        for i in 0..vertices.len() {
            for j in (i + 1)..vertices.len() {
                diameter = diameter.max(dist(&vertices[i], &vertices[j]));
            }
        }
        let mut interior = vec![0.0; d];
        for v in &vertices {
            for k in 0..d {
                interior[k] += v[k] / vertices.len() as f64;
            }
        }

        // area-weighted normal vector of every simplex
        let fact = factorial(d - 1);
        let mut vecs: Vec<Vec<f64>> = Vec::with_capacity(simplices.len());
        for s in &simplices {
            let base = &vertices[s[0]];
            let edges: Vec<Vec<f64>> = s[1..].iter().map(|i| sub(&vertices[*i], base)).collect();
            let mut c = scale(&cross(&edges), 1.0 / fact);
            if dot(&c, &sub(&interior, base)) > 0.0 {
                c = scale(&c, -1.0);
            }
            vecs.push(c);
        }
        let dirs: Vec<Option<Vec<f64>>> = vecs.iter().map(|v| normalize(v)).collect();
        let valid: Vec<usize> = (0..simplices.len()).filter(|i| dirs[*i].is_some()).collect();
        let valid_dirs: Vec<Vec<f64>> = valid.iter().map(|i| dirs[*i].clone().unwrap()).collect();
        let clusters = linalg::cluster_directions(&valid_dirs, FACET_MERGE_ANGLE);
        let n_clusters = clusters.iter().cloned().max().map_or(0, |m| m + 1);
        let mut groups: Vec<Vec<usize>> = vec![Vec::new(); n_clusters];
        for (k, c) in clusters.iter().enumerate() {
            groups[*c].push(valid[k]);
        }

        let area_tol = FACET_AREA_TOL * diameter.powi(d as i32 - 1);
        let mut facets = Vec::new();
        for g in groups {
            let mut sum = vec![0.0; d];
            let mut area = 0.0;
            let mut verts = BTreeSet::new();
            for &i in &g {
                for k in 0..d {
                    sum[k] += vecs[i][k];
                }
                area += norm(&vecs[i]);
                verts.extend(simplices[i].iter().cloned());
            }
            if area < area_tol {
                continue;
            }
            let Some(normal) = normalize(&sum) else { continue };
            let offset = verts.iter().map(|v| dot(&normal, &vertices[*v])).sum::<f64>() / verts.len() as f64;
            facets.push(Facet {
                normal,
                offset,
                area,
                vertices: verts.into_iter().collect(),
                pieces: g.iter().map(|i| simplices[*i].clone()).collect(),
            });
        }
        facets.sort_by(|a, b| a.normal.partial_cmp(&b.normal).unwrap_or(std::cmp::Ordering::Equal));

        // Vertices on the relative interior of a face are not extreme.
        let mut all_extreme = true;
        for v in 0..vertices.len() {
            let normals: Vec<Vec<f64>> =
                facets.iter().filter(|f| f.vertices.binary_search(&v).is_ok()).map(|f| f.normal.clone()).collect();
            if linalg::rank(&normals, 1e-9) < d {
                all_extreme = false;
                break;
            }
        }
        (Polytope { dim: d, vertices, facets, diameter }, all_extreme)
    }
}

/// Convex hull of a point set: the polytope whose vertex set is the set of
/// extreme points.
pub fn hull(points: &[Vec<f64>]) -> Result<Polytope> {
    let h = simplicial_hull(points)?;
    let (poly, all_extreme) = Polytope::from_simplicial(h.points, h.simplices);
    if all_extreme {
        return Ok(poly);
    }
    let d = poly.dim;
    let extreme: Vec<Vec<f64>> = (0..poly.vertices.len())
        .filter(|v| {
            let normals: Vec<Vec<f64>> =
                poly.facets.iter().filter(|f| f.vertices.binary_search(v).is_ok()).map(|f| f.normal.clone()).collect();
            linalg::rank(&normals, 1e-9) == d
        })
        .map(|v| poly.vertices[v].clone())
        .collect();
    let h = simplicial_hull(&extreme)?;
    Ok(Polytope::from_simplicial(h.points, h.simplices).0)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AnalyticKind {
    Ball,
    Ellipsoid,
}

/// Axis-aligned ellipsoid `{x : sum ((x_i - c_i) / a_i)^2 <= 1}`; a ball when
/// all semi-axes agree.
#[derive(Debug, Clone, PartialEq)]
pub struct Ellipsoid {
    pub kind: AnalyticKind,
    pub center: Vec<f64>,
    pub semi_axes: Vec<f64>,
}

impl Ellipsoid {
    pub fn new(kind: AnalyticKind, center: Vec<f64>, semi_axes: Vec<f64>) -> Result<Self> {
        let d = center.len();
        if semi_axes.len() != d {
            return Err(Error::DimensionMismatch { expected: d, got: semi_axes.len() });
        }
        if !(2..=3).contains(&d) {
            return Err(Error::UnsupportedDimension(d));
        }
        if semi_axes.iter().any(|a| !(*a > 0.0) || !a.is_finite()) {
            return Err(Error::InvalidInput("semi-axes must be strictly positive".into()));
        }
        if kind == AnalyticKind::Ball && semi_axes.iter().any(|a| *a != semi_axes[0]) {
            return Err(Error::InvalidInput("ball requires equal semi-axes".into()));
        }
        Ok(Ellipsoid { kind, center, semi_axes })
    }

    pub fn ball(center: Vec<f64>, radius: f64) -> Result<Self> {
        let d = center.len();
        Ellipsoid::new(AnalyticKind::Ball, center, vec![radius; d])
    }

    pub fn dim(&self) -> usize {
        self.center.len()
    }

    pub fn is_ball(&self) -> bool {
        self.semi_axes.iter().all(|a| *a == self.semi_axes[0])
    }

    pub fn det(&self) -> f64 {
        self.semi_axes.iter().product()
    }

    /// `|A u|` for the diagonal map `A`: the centered support value.
    pub fn stretch(&self, u: &[f64]) -> f64 {
        u.iter().zip(&self.semi_axes).map(|(x, a)| (x * a) * (x * a)).sum::<f64>().sqrt()
    }

    /// `A^{-1} u`
    /// `A u` for the diagonal axis matrix `A`.
    pub fn apply(&self, u: &[f64]) -> Vec<f64> {
        u.iter().zip(&self.semi_axes).map(|(x, a)| x * a).collect()
    }

    pub fn inverse_apply(&self, u: &[f64]) -> Vec<f64> {
        u.iter().zip(&self.semi_axes).map(|(x, a)| x / a).collect()
    }

    /// Level value `sum ((x - c)/a)^2`; equal to 1 on the boundary.
    pub fn level(&self, x: &[f64]) -> f64 {
        x.iter().zip(&self.center).zip(&self.semi_axes).map(|((x, c), a)| ((x - c) / a).powi(2)).sum()
    }

    /// Outward unit normal at a boundary point.
    pub fn normal_at(&self, x: &[f64]) -> Vec<f64> {
        let g: Vec<f64> =
            x.iter().zip(&self.center).zip(&self.semi_axes).map(|((x, c), a)| (x - c) / (a * a)).collect();
        normalize(&g).unwrap_or_else(|| linalg::unit(self.dim(), 0))
    }

    /// Boundary point with outward normal `u`.
    pub fn support_point(&self, u: &[f64]) -> Vec<f64> {
        let h = self.stretch(u);
        self.center.iter().zip(&self.semi_axes).zip(u).map(|((c, a), x)| c + a * a * x / h).collect()
    }

    /// Area of the boundary (closed form for balls; Gauss-Legendre otherwise).
    pub fn boundary_area(&self) -> f64 {
        let d = self.dim();
        if self.is_ball() {
            return linalg::unit_sphere_area(d - 1) * self.semi_axes[0].powi(d as i32 - 1);
        }
        let e = linalg::unit(d, 0);
        let full = 2.0 * self.stretch(&e);
        crate::measure::ellipsoid_cap_cells(self, &e, full * (1.0 - 1e-15), 512, 512).iter().map(|c| c.mass).sum()
    }

    pub fn volume(&self) -> f64 {
        unit_ball_volume(self.dim()) * self.det()
    }
}

#[derive(Debug, Clone)]
pub enum ConvexBody {
    Polytope(Polytope),
    Ellipsoid(Ellipsoid),
}

#[derive(Debug, Clone, PartialEq)]
pub enum SupportFace {
    /// Vertex indices spanning the maximizing face of a polytope.
    Vertices(Vec<usize>),
    /// Unique maximizer of a strictly convex body.
    Point(Vec<f64>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Support {
    pub value: f64,
    pub face: SupportFace,
}

impl ConvexBody {
    pub fn dim(&self) -> usize {
        match self {
            ConvexBody::Polytope(p) => p.dim,
            ConvexBody::Ellipsoid(e) => e.dim(),
        }
    }

    pub fn diameter(&self) -> f64 {
        match self {
            ConvexBody::Polytope(p) => p.diameter,
            ConvexBody::Ellipsoid(e) => 2.0 * e.semi_axes.iter().cloned().fold(0.0, f64::max),
        }
    }

    pub fn as_polytope(&self) -> Option<&Polytope> {
        match self {
            ConvexBody::Polytope(p) => Some(p),
            ConvexBody::Ellipsoid(_) => None,
        }
    }

    pub fn support(&self, u: &[f64]) -> Result<Support> {
        let d = self.dim();
        if u.len() != d {
            return Err(Error::DimensionMismatch { expected: d, got: u.len() });
        }
        if (norm(u) - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidInput("support direction must be a unit vector".into()));
        }
        Ok(match self {
            ConvexBody::Polytope(p) => {
                let vals: Vec<f64> = p.vertices.iter().map(|v| dot(v, u)).collect();
                let value = vals.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
                let tol = BOUNDARY_TOL * p.diameter;
                let face = (0..vals.len()).filter(|i| value - vals[*i] <= tol).collect();
                Support { value, face: SupportFace::Vertices(face) }
            }
            ConvexBody::Ellipsoid(e) => {
                Support { value: dot(&e.center, u) + e.stretch(u), face: SupportFace::Point(e.support_point(u)) }
            }
        })
    }

    /// Support value only.
    pub fn h(&self, u: &[f64]) -> f64 {
        match self {
            ConvexBody::Polytope(p) => p.vertices.iter().map(|v| dot(v, u)).fold(f64::NEG_INFINITY, f64::max),
            ConvexBody::Ellipsoid(e) => dot(&e.center, u) + e.stretch(u),
        }
    }

    /// Width of the body along the unit direction `e`.
    pub fn width(&self, e: &[f64]) -> f64 {
        self.h(e) + self.h(&scale(e, -1.0))
    }

    pub fn boundary_area(&self) -> f64 {
        match self {
            ConvexBody::Polytope(p) => p.boundary_area(),
            ConvexBody::Ellipsoid(e) => e.boundary_area(),
        }
    }
}

/// Cap geometry of an analytic body: the ellipsoid boundary above the plane.
#[derive(Debug, Clone)]
pub struct EllipsoidCap {
    pub body: Ellipsoid,
    /// Unit vector `A e / |A e|` in the parameter sphere; the cap is the set of
    /// parameters `u` with `<u, axis> >= cos_max`.
    pub axis: Vec<f64>,
    pub cos_max: f64,
    /// Area of the curved part S_t.
    pub lateral_area: f64,
}

#[derive(Debug, Clone)]
pub enum CapShape {
    Polytope {
        /// The cut piece C_t.
        body: Polytope,
        /// Facets of C_t lying in the cutting plane (normal -e).
        base_facets: Vec<Facet>,
        /// Remaining facets of C_t; normals inherited from C.
        side_facets: Vec<Facet>,
        /// Index of the facet of C each side facet was clipped from.
        side_sources: Vec<Option<usize>>,
    },
    Ellipsoid(EllipsoidCap),
}

/// The cap `C_t = C ∩ {<r - r0, e> >= -t}` split into base `B_t` and curved or
/// faceted part `S_t`.
#[derive(Debug, Clone)]
pub struct CapCut {
    pub t: f64,
    pub r0: Vec<f64>,
    pub e: Vec<f64>,
    /// |B_t|
    pub base_area: f64,
    pub shape: CapShape,
}

impl CapCut {
    pub fn dim(&self) -> usize {
        self.e.len()
    }

    /// |S_t|
    pub fn side_area(&self) -> f64 {
        match &self.shape {
            CapShape::Polytope { side_facets, .. } => side_facets.iter().map(|f| f.area).sum(),
            CapShape::Ellipsoid(c) => c.lateral_area,
        }
    }
}

fn check_unit(e: &[f64], d: usize) -> Result<()> {
    if e.len() != d {
        return Err(Error::DimensionMismatch { expected: d, got: e.len() });
    }
    if (norm(e) - 1.0).abs() > 1e-9 {
        return Err(Error::InvalidInput("direction e must be a unit vector".into()));
    }
    Ok(())
}

/// Cut the body by the plane at depth `t` below the support plane with outward
/// normal `e` through `r0`.
pub fn cut_cap(body: &ConvexBody, r0: &[f64], e: &[f64], t: f64) -> Result<CapCut> {
    let d = body.dim();
    check_unit(e, d)?;
    if r0.len() != d {
        return Err(Error::DimensionMismatch { expected: d, got: r0.len() });
    }
    if !(t > 0.0) || !t.is_finite() {
        return Err(Error::InvalidInput(format!("cut depth must be positive, got {t}")));
    }
    match body {
        ConvexBody::Polytope(p) => cut_polytope(p, r0, e, t),
        ConvexBody::Ellipsoid(el) => cut_ellipsoid(el, r0, e, t),
    }
}

fn cut_polytope(p: &Polytope, r0: &[f64], e: &[f64], t: f64) -> Result<CapCut> {
    let d = p.dim;
    let tol = BOUNDARY_TOL * p.diameter;
    if !p.on_boundary(r0, tol) {
        return Err(Error::PointNotOnBoundary);
    }
    let body = ConvexBody::Polytope(p.clone());
    let h = body.h(e);
    if (h - dot(r0, e)).abs() > tol {
        return Err(Error::NotSupportNormal(format!("support value {h} differs from <r0, e> = {}", dot(r0, e))));
    }
    let width = body.width(e);
    if t >= width * (1.0 - 1e-12) {
        return Err(Error::EmptyCap { t });
    }

    // Work in coordinates centred at r0 so tiny caps keep full precision.
    let local: Vec<Vec<f64>> = p.vertices.iter().map(|v| sub(v, r0)).collect();
    let snap = 1e-14 * p.diameter;
    let level: Vec<f64> = local
        .iter()
        .map(|x| {
            let s = dot(x, e) + t;
            if s.abs() <= snap {
                0.0
            } else {
                s
            }
        })
        .collect();
    let mut pts: Vec<Vec<f64>> = Vec::new();
    for (x, s) in local.iter().zip(&level) {
        if *s > 0.0 {
            pts.push(x.clone());
        } else if *s == 0.0 {
            pts.push(linalg::axpy(x, -(dot(x, e) + t), e));
        }
    }
    let mut edges: BTreeSet<(usize, usize)> = BTreeSet::new();
    for f in &p.facets {
        for piece in &f.pieces {
            for i in 0..piece.len() {
                for j in (i + 1)..piece.len() {
                    let (a, b) = (piece[i].min(piece[j]), piece[i].max(piece[j]));
                    edges.insert((a, b));
                }
            }
        }
    }
    for (a, b) in edges {
        let (sa, sb) = (level[a], level[b]);
        if (sa > 0.0 && sb < 0.0) || (sa < 0.0 && sb > 0.0) {
            let lam = sa / (sa - sb);
            let x = linalg::axpy(&local[a], lam, &sub(&local[b], &local[a]));
            // Project onto the plane <x, e> = -t.
            pts.push(linalg::axpy(&x, -(dot(&x, e) + t), e));
        }
    }
    let local_cap = match hull(&pts) {
        Ok(h) => h,
        Err(Error::DegenerateInput(_)) => return Err(Error::DegenerateCap),
        Err(err) => return Err(err),
    };

    let minus_e = scale(e, -1.0);
    let mut base_facets = Vec::new();
    let mut side_facets = Vec::new();
    let mut side_sources = Vec::new();
    for f in &local_cap.facets {
        if linalg::angle(&f.normal, &minus_e) <= SOURCE_MATCH_ANGLE {
            let mut f = f.clone();
            f.normal = minus_e.clone();
            f.offset = t + dot(&minus_e, r0);
            base_facets.push(f);
            continue;
        }
        let source = p
            .facets
            .iter()
            .enumerate()
            .map(|(i, g)| (i, linalg::angle(&f.normal, &g.normal)))
            .filter(|(_, a)| *a <= SOURCE_MATCH_ANGLE)
            .min_by(|a, b| a.1.partial_cmp(&b.1).unwrap());
        let mut f = f.clone();
        match source {
            Some((i, _)) => {
                f.normal = p.facets[i].normal.clone();
                f.offset = p.facets[i].offset;
                side_sources.push(Some(i));
            }
            None => {
                f.offset += dot(&f.normal, r0);
                side_sources.push(None);
            }
        }
        side_facets.push(f);
    }
    let base_area: f64 = base_facets.iter().map(|f| f.area).sum();
    if base_facets.is_empty() || base_area <= FACET_AREA_TOL * local_cap.diameter.powi(d as i32 - 1) {
        return Err(Error::DegenerateCap);
    }
    let body_t = local_cap.translated(r0);
    Ok(CapCut {
        t,
        r0: r0.to_vec(),
        e: e.to_vec(),
        base_area,
        shape: CapShape::Polytope { body: body_t, base_facets, side_facets, side_sources },
    })
}

fn cut_ellipsoid(el: &Ellipsoid, r0: &[f64], e: &[f64], t: f64) -> Result<CapCut> {
    let d = el.dim();
    if (el.level(r0) - 1.0).abs() > 1e-9 {
        return Err(Error::PointNotOnBoundary);
    }
    let n = el.normal_at(r0);
    if linalg::angle(&n, e) > 1e-9 {
        return Err(Error::NotSupportNormal("e is not the normal at r0".into()));
    }
    let h0 = el.stretch(e);
    if t >= 2.0 * h0 * (1.0 - 1e-12) {
        return Err(Error::EmptyCap { t });
    }
    let axis: Vec<f64> = e.iter().zip(&el.semi_axes).map(|(x, a)| x * a / h0).collect();
    let cos_max = 1.0 - t / h0;
    let s = t / h0;
    let base_area = unit_ball_volume(d - 1) * el.det() / h0 * (s * (2.0 - s)).powf((d - 1) as f64 / 2.0);
    let lateral_area = if el.is_ball() {
        let r = el.semi_axes[0];
        match d {
            2 => 2.0 * r * cos_max.clamp(-1.0, 1.0).acos(),
            _ => 2.0 * std::f64::consts::PI * r * t,
        }
    } else {
        crate::measure::ellipsoid_cap_cells(el, e, t, 512, 256).iter().map(|c| c.mass).sum()
    };
    if !(base_area > 0.0) {
        return Err(Error::DegenerateCap);
    }
    Ok(CapCut {
        t,
        r0: r0.to_vec(),
        e: e.to_vec(),
        base_area,
        shape: CapShape::Ellipsoid(EllipsoidCap { body: el.clone(), axis, cos_max, lateral_area }),
    })
}

/// Unit cube `[0,1]^d`.
pub fn unit_cube(d: usize) -> Polytope {
    let pts: Vec<Vec<f64>> = (0..(1usize << d)).map(|i| (0..d).map(|k| ((i >> k) & 1) as f64).collect()).collect();
    hull(&pts).expect("cube is full-dimensional")
}
