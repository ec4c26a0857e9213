//! Newton's resistance functional `∫∫_Ω dx dy / (1 + |∇u|^2)` for convex
//! functions `0 <= u <= M` on a planar convex domain.

use crate::error::{Error, Result};
use crate::hull::polygon_area;
use std::collections::HashMap;
use std::f64::consts::PI;

#[derive(Debug, Clone, PartialEq)]
pub enum Domain {
    Disk {
        center: [f64; 2],
        radius: f64,
    },
    /// Convex polygon, counter-clockwise.
    Polygon(Vec<[f64; 2]>),
}

impl Domain {
    pub fn area(&self) -> f64 {
        match self {
            Domain::Disk { radius, .. } => PI * radius * radius,
            Domain::Polygon(p) => polygon_area(p),
        }
    }

    fn validate(&self) -> Result<()> {
        match self {
            Domain::Disk { radius, .. } if !(*radius > 0.0 && radius.is_finite()) => {
                Err(Error::InvalidInput("disk radius must be positive".into()))
            }
            Domain::Disk { .. } => Ok(()),
            Domain::Polygon(p) => {
                let n = p.len();
                if n < 3 {
                    return Err(Error::InvalidInput("polygon needs at least three vertices".into()));
                }
                for i in 0..n {
                    let (a, b, c) = (p[i], p[(i + 1) % n], p[(i + 2) % n]);
                    if (b[0] - a[0]) * (c[1] - b[1]) - (b[1] - a[1]) * (c[0] - b[0]) <= 0.0 {
                        return Err(Error::InvalidInput("polygon must be convex and counter-clockwise".into()));
                    }
                }
                Ok(())
            }
        }
    }
}

/// The profile `u`. Radial kinds are centred on a disk domain of radius `R`.
#[derive(Debug, Clone, PartialEq)]
pub enum GraphKind {
    /// `u = c`
    Flat { c: f64 },
    /// `u = M r / R`, slope `M / R` everywhere.
    Cone,
    /// `u = M r^2 / R^2`
    Paraboloid,
    /// Linear on each triangle, with values `heights` at `points`.
    PiecewiseLinear { points: Vec<[f64; 2]>, heights: Vec<f64>, triangles: Vec<[usize; 3]> },
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvexGraphFn {
    domain: Domain,
    kind: GraphKind,
    bound: f64,
}

/// Tolerance for the tangent-plane convexity test.
const CONVEXITY_TOL: f64 = 1e-9;

fn tri_area(a: [f64; 2], b: [f64; 2], c: [f64; 2]) -> f64 {
    0.5 * ((b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0]))
}

/// Gradient of the affine function through three points of the graph.
fn plane_gradient(p: [[f64; 2]; 3], z: [f64; 3]) -> [f64; 2] {
    let (ux, uy) = (p[1][0] - p[0][0], p[1][1] - p[0][1]);
    let (vx, vy) = (p[2][0] - p[0][0], p[2][1] - p[0][1]);
    let (du, dv) = (z[1] - z[0], z[2] - z[0]);
    let det = ux * vy - uy * vx;
    [(du * vy - dv * uy) / det, (ux * dv - vx * du) / det]
}

impl ConvexGraphFn {
    pub fn new(domain: Domain, kind: GraphKind, bound: f64) -> Result<Self> {
        domain.validate()?;
        if !(bound >= 0.0 && bound.is_finite()) {
            return Err(Error::InvalidInput("bound M must be finite and nonnegative".into()));
        }
        match &kind {
            GraphKind::Flat { c } => {
                if !(*c >= 0.0 && *c <= bound) {
                    return Err(Error::InvalidInput(format!("flat value {c} outside [0, {bound}]")));
                }
            }
            GraphKind::Cone | GraphKind::Paraboloid => {
                if !matches!(domain, Domain::Disk { .. }) {
                    return Err(Error::InvalidInput("radial profiles need a disk domain".into()));
                }
            }
            GraphKind::PiecewiseLinear { points, heights, triangles } => {
                check_triangulation(&domain, points, heights, triangles, bound)?;
            }
        }
        Ok(ConvexGraphFn { domain, kind, bound })
    }

    pub fn domain(&self) -> &Domain {
        &self.domain
    }

    pub fn kind(&self) -> &GraphKind {
        &self.kind
    }

    pub fn bound(&self) -> f64 {
        self.bound
    }

    /// The same function precomposed with a rotation by `angle` about the
    /// origin.
    pub fn rotated(&self, angle: f64) -> Result<Self> {
        let (s, c) = angle.sin_cos();
        let rot = |p: [f64; 2]| [c * p[0] - s * p[1], s * p[0] + c * p[1]];
        let domain = match &self.domain {
            Domain::Disk { center, radius } => Domain::Disk { center: rot(*center), radius: *radius },
            Domain::Polygon(p) => Domain::Polygon(p.iter().map(|q| rot(*q)).collect()),
        };
        let kind = match &self.kind {
            GraphKind::PiecewiseLinear { points, heights, triangles } => GraphKind::PiecewiseLinear {
                points: points.iter().map(|q| rot(*q)).collect(),
                heights: heights.clone(),
                triangles: triangles.clone(),
            },
            k => k.clone(),
        };
        ConvexGraphFn::new(domain, kind, self.bound)
    }

    /// Value at a point of a disk domain for the analytic kinds.
    fn radial_value(&self, x: [f64; 2]) -> f64 {
        let Domain::Disk { center, radius } = self.domain else { unreachable!() };
        let r = ((x[0] - center[0]).powi(2) + (x[1] - center[1]).powi(2)).sqrt();
        match self.kind {
            GraphKind::Flat { c } => c,
            GraphKind::Cone => self.bound * r / radius,
            GraphKind::Paraboloid => self.bound * (r / radius).powi(2),
            GraphKind::PiecewiseLinear { .. } => unreachable!(),
        }
    }
}

fn check_triangulation(
    domain: &Domain,
    points: &[[f64; 2]],
    heights: &[f64],
    triangles: &[[usize; 3]],
    bound: f64,
) -> Result<()> {
    if points.len() != heights.len() {
        return Err(Error::InvalidInput("one height per point required".into()));
    }
    if triangles.is_empty() {
        return Err(Error::InvalidInput("empty triangulation".into()));
    }
    if heights.iter().any(|h| !(*h >= -1e-12 && *h <= bound + 1e-12)) {
        return Err(Error::InvalidInput(format!("heights must lie in [0, {bound}]")));
    }
    let mut total = 0.0;
    for t in triangles {
        if t.iter().any(|i| *i >= points.len()) {
            return Err(Error::InvalidInput("triangle index out of range".into()));
        }
        let a = tri_area(points[t[0]], points[t[1]], points[t[2]]).abs();
        if a <= 0.0 {
            return Err(Error::InvalidInput("degenerate triangle".into()));
        }
        total += a;
    }
    if (total - domain.area()).abs() > 1e-9 * domain.area().max(1.0) {
        return Err(Error::InvalidInput("triangles do not tile the domain".into()));
    }
    // graph above the tangent plane of each neighbouring triangle
    let mut edges: HashMap<(usize, usize), Vec<(usize, usize)>> = HashMap::new();
    for (k, t) in triangles.iter().enumerate() {
        for j in 0..3 {
            let (a, b) = (t[j], t[(j + 1) % 3]);
            edges.entry((a.min(b), a.max(b))).or_default().push((k, t[(j + 2) % 3]));
        }
    }
    for (edge, sides) in edges {
        if sides.len() > 2 {
            return Err(Error::InvalidInput(format!("edge {edge:?} shared by more than two triangles")));
        }
        if sides.len() < 2 {
            continue;
        }
        for (own, other) in [(sides[0], sides[1]), (sides[1], sides[0])] {
            let t = triangles[own.0];
            let g = plane_gradient(
                [points[t[0]], points[t[1]], points[t[2]]],
                [heights[t[0]], heights[t[1]], heights[t[2]]],
            );
            let q = points[other.1];
            let p = points[t[0]];
            let plane = heights[t[0]] + g[0] * (q[0] - p[0]) + g[1] * (q[1] - p[1]);
            if heights[other.1] < plane - CONVEXITY_TOL {
                return Err(Error::NonConvexFunction(format!("graph dips below a tangent plane across edge {edge:?}")));
            }
        }
    }
    Ok(())
}

/// How the integral is evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    /// Closed form, or exact per-triangle sums for piecewise-linear profiles.
    Exact,
    /// Gauss quadrature with `panels` subdivisions and finite-difference
    /// gradients.
    Quadrature { panels: usize },
}

pub fn resistance(f: &ConvexGraphFn, method: Method) -> Result<f64> {
    match method {
        Method::Exact => Ok(exact(f)),
        Method::Quadrature { panels } => Ok(quadrature(f, panels.max(1))),
    }
}

fn exact(f: &ConvexGraphFn) -> f64 {
    match (&f.kind, &f.domain) {
        (GraphKind::Flat { .. }, d) => d.area(),
        (GraphKind::Cone, Domain::Disk { radius, .. }) => {
            let s = f.bound / radius;
            PI * radius * radius / (1.0 + s * s)
        }
        (GraphKind::Paraboloid, Domain::Disk { radius, .. }) => {
            let k = 2.0 * f.bound / (radius * radius);
            if k == 0.0 {
                PI * radius * radius
            } else {
                PI / (k * k) * (1.0 + k * k * radius * radius).ln()
            }
        }
        (GraphKind::PiecewiseLinear { points, heights, triangles }, _) => triangles
            .iter()
            .map(|t| {
                let p = [points[t[0]], points[t[1]], points[t[2]]];
                let g = plane_gradient(p, [heights[t[0]], heights[t[1]], heights[t[2]]]);
                tri_area(p[0], p[1], p[2]).abs() / (1.0 + g[0] * g[0] + g[1] * g[1])
            })
            .sum(),
        _ => unreachable!("radial kinds are validated against disk domains"),
    }
}

const GAUSS4: [(f64, f64); 4] = [
    (0.069_431_844_202_973_71, 0.173_927_422_568_726_93),
    (0.330_009_478_207_571_9, 0.326_072_577_431_273_07),
    (0.669_990_521_792_428_1, 0.326_072_577_431_273_07),
    (0.930_568_155_797_026_3, 0.173_927_422_568_726_93),
];

/// `∫_T g` over a triangle by collapsed-square Gauss rules on `n x n` panels.
fn triangle_rule(a: [f64; 2], b: [f64; 2], c: [f64; 2], n: usize, g: &impl Fn([f64; 2]) -> f64) -> f64 {
    let area2 = 2.0 * tri_area(a, b, c).abs();
    let h = 1.0 / n as f64;
    let mut sum = 0.0;
    for i in 0..n {
        for j in 0..n {
            for (xs, ws) in GAUSS4 {
                let s = (i as f64 + xs) * h;
                for (xt, wt) in GAUSS4 {
                    let t = (j as f64 + xt) * h;
                    let p = [
                        (1.0 - s) * a[0] + s * ((1.0 - t) * b[0] + t * c[0]),
                        (1.0 - s) * a[1] + s * ((1.0 - t) * b[1] + t * c[1]),
                    ];
                    sum += ws * wt * h * h * area2 * s * g(p);
                }
            }
        }
    }
    sum
}

fn central_gradient(u: impl Fn([f64; 2]) -> f64, x: [f64; 2], h: f64) -> [f64; 2] {
    [(u([x[0] + h, x[1]]) - u([x[0] - h, x[1]])) / (2.0 * h), (u([x[0], x[1] + h]) - u([x[0], x[1] - h])) / (2.0 * h)]
}

fn quadrature(f: &ConvexGraphFn, n: usize) -> f64 {
    let integrand = |g: [f64; 2]| 1.0 / (1.0 + g[0] * g[0] + g[1] * g[1]);
    match (&f.kind, &f.domain) {
        (GraphKind::PiecewiseLinear { points, heights, triangles }, _) => triangles
            .iter()
            .map(|t| {
                let p = [points[t[0]], points[t[1]], points[t[2]]];
                let z = [heights[t[0]], heights[t[1]], heights[t[2]]];
                let area2 = 2.0 * tri_area(p[0], p[1], p[2]);
                // interpolant through the triangle's corners via barycentrics
                let u = |x: [f64; 2]| {
                    let l1 = 2.0 * tri_area(x, p[1], p[2]) / area2;
                    let l2 = 2.0 * tri_area(p[0], x, p[2]) / area2;
                    l1 * z[0] + l2 * z[1] + (1.0 - l1 - l2) * z[2]
                };
                let scale = (area2.abs()).sqrt();
                triangle_rule(p[0], p[1], p[2], n, &|x| integrand(central_gradient(u, x, 1e-4 * scale)))
            })
            .sum(),
        (GraphKind::Flat { .. }, Domain::Polygon(poly)) => {
            (1..poly.len() - 1).map(|i| triangle_rule(poly[0], poly[i], poly[i + 1], n, &|_| 1.0)).sum()
        }
        (_, Domain::Disk { center, radius }) => {
            // polar panels; m angular nodes per ring
            let (c, r) = (*center, *radius);
            let m = 16 * n;
            let h = r / n as f64;
            let mut sum = 0.0;
            for i in 0..n {
                for (xs, ws) in GAUSS4 {
                    let rho = (i as f64 + xs) * h;
                    let mut ring = 0.0;
                    for k in 0..m {
                        let th = 2.0 * PI * (k as f64 + 0.5) / m as f64;
                        let x = [c[0] + rho * th.cos(), c[1] + rho * th.sin()];
                        ring += integrand(central_gradient(|y| f.radial_value(y), x, 1e-6 * r));
                    }
                    sum += ws * h * rho * ring * 2.0 * PI / m as f64;
                }
            }
            sum
        }
        _ => unreachable!("radial kinds are validated against disk domains"),
    }
}
