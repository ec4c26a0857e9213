//! Seeded generators for the bodies and functions used by the verification
//! suites.

use crate::body::{hull, Polytope};
use crate::error::Result;
use crate::linalg::{self, axpy, complement_basis, dot, normalize, scale, sub};
use crate::newton::{ConvexGraphFn, Domain, GraphKind};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

pub fn rng(seed: u64) -> ChaCha8Rng {
    rand::SeedableRng::seed_from_u64(seed)
}

/// Uniform direction on the unit sphere of `R^d`.
pub fn random_unit(rng: &mut impl Rng, d: usize) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..d).map(|_| StandardNormal.sample(rng)).collect();
        if let Some(u) = normalize(&v) {
            return u;
        }
    }
}

/// Hull of `n` random points with radii in `[0.5, 1]`.
pub fn random_polytope(rng: &mut impl Rng, d: usize, n: usize) -> Result<Polytope> {
    let pts: Vec<Vec<f64>> =
        (0..n.max(d + 1)).map(|_| scale(&random_unit(rng, d), rng.random_range(0.5..1.0))).collect();
    hull(&pts)
}

/// Hull of `n` random points on the unit sphere.
pub fn random_sphere_hull(rng: &mut impl Rng, d: usize, n: usize) -> Result<Polytope> {
    let pts: Vec<Vec<f64>> = (0..n.max(d + 1)).map(|_| random_unit(rng, d)).collect();
    hull(&pts)
}

/// A boundary point with a support normal there.
#[derive(Debug, Clone)]
pub struct SupportPoint {
    pub r0: Vec<f64>,
    pub e: Vec<f64>,
}

/// Random support point: alternately a vertex maximizing a random direction
/// and a random point inside a random facet with that facet's normal.
pub fn random_support_point(rng: &mut impl Rng, p: &Polytope) -> SupportPoint {
    if rng.random_bool(0.5) {
        let e = random_unit(rng, p.dim());
        let r0 = p.vertices().iter().max_by(|a, b| dot(a, &e).partial_cmp(&dot(b, &e)).unwrap()).unwrap().clone();
        SupportPoint { r0, e }
    } else {
        let f = &p.facets()[rng.random_range(0..p.facets().len())];
        let piece = &f.pieces[rng.random_range(0..f.pieces.len())];
        let w: Vec<f64> = (0..piece.len()).map(|_| rng.random_range(0.05..1.0)).collect();
        let s: f64 = w.iter().sum();
        let mut r0 = vec![0.0; p.dim()];
        for (i, wi) in piece.iter().zip(&w) {
            r0 = axpy(&r0, wi / s, &p.vertices()[*i]);
        }
        SupportPoint { r0, e: f.normal.clone() }
    }
}

/// Icosahedron subdivided `level` times and pushed to the unit sphere
/// (`10 * 4^level + 2` vertices).
pub fn icosphere(level: usize) -> Result<Polytope> {
    let g = (1.0 + 5f64.sqrt()) / 2.0;
    let mut verts: Vec<Vec<f64>> = [
        [-1.0, g, 0.0],
        [1.0, g, 0.0],
        [-1.0, -g, 0.0],
        [1.0, -g, 0.0],
        [0.0, -1.0, g],
        [0.0, 1.0, g],
        [0.0, -1.0, -g],
        [0.0, 1.0, -g],
        [g, 0.0, -1.0],
        [g, 0.0, 1.0],
        [-g, 0.0, -1.0],
        [-g, 0.0, 1.0],
    ]
    .iter()
    .map(|v| normalize(v).unwrap())
    .collect();
    let mut faces: Vec<[usize; 3]> = vec![
        [0, 11, 5],
        [0, 5, 1],
        [0, 1, 7],
        [0, 7, 10],
        [0, 10, 11],
        [1, 5, 9],
        [5, 11, 4],
        [11, 10, 2],
        [10, 7, 6],
        [7, 1, 8],
        [3, 9, 4],
        [3, 4, 2],
        [3, 2, 6],
        [3, 6, 8],
        [3, 8, 9],
        [4, 9, 5],
        [2, 4, 11],
        [6, 2, 10],
        [8, 6, 7],
        [9, 8, 1],
    ];
    for _ in 0..level {
        let mut mid = std::collections::HashMap::new();
        let mut next = Vec::with_capacity(faces.len() * 4);
        let mut midpoint = |a: usize, b: usize, verts: &mut Vec<Vec<f64>>| -> usize {
            *mid.entry((a.min(b), a.max(b))).or_insert_with(|| {
                verts.push(normalize(&linalg::add(&verts[a], &verts[b])).unwrap());
                verts.len() - 1
            })
        };
        for [a, b, c] in faces {
            let ab = midpoint(a, b, &mut verts);
            let bc = midpoint(b, c, &mut verts);
            let ca = midpoint(c, a, &mut verts);
            next.extend([[a, ab, ca], [b, bc, ab], [c, ca, bc], [ab, bc, ca]]);
        }
        faces = next;
    }
    hull(&verts)
}

/// A polytope that coincides with a pointed cone near its apex.
#[derive(Debug, Clone)]
pub struct ConicalInstance {
    pub body: Polytope,
    pub r0: Vec<f64>,
    pub e: Vec<f64>,
    /// Depth below which the body equals its tangent cone.
    pub depth: f64,
}

/// Random pointed cone with apex `0` around axis `e`, truncated at random
/// depths along its rays. With `bend`, the far part is pulled towards the
/// axis so the body departs from the cone below `depth`.
pub fn random_conical_vertex(rng: &mut impl Rng, d: usize, bend: bool) -> Result<ConicalInstance> {
    let e = random_unit(rng, d);
    let basis = complement_basis(&e);
    let k = if d == 2 { 2 } else { d + rng.random_range(1..4) };
    let mut pts = vec![vec![0.0; d]];
    let mut rays = Vec::new();
    for i in 0..k {
        let w = if d == 2 {
            scale(&basis[0], if i == 0 { 1.0 } else { -1.0 })
        } else {
            let c = random_unit(rng, d - 1);
            basis.iter().zip(&c).fold(vec![0.0; d], |acc, (b, ci)| axpy(&acc, *ci, b))
        };
        let alpha: f64 = rng.random_range(0.25..1.2);
        let g = axpy(&scale(&e, -alpha.cos()), alpha.sin(), &w);
        rays.push(g.clone());
        pts.push(scale(&g, rng.random_range(0.6..1.5)));
    }
    if bend {
        // deeper points inside the cone, nearer the axis
        for g in &rays {
            let s = rng.random_range(2.0..3.0);
            let inner = axpy(&scale(g, 0.5), -0.5, &e);
            pts.push(scale(&normalize(&inner).unwrap(), s));
        }
    } else {
        // a floor well below the apex keeps the body bounded and the cone exact
        let deep = rays.iter().map(|g| rng.random_range(2.0..3.0) * -dot(g, &e)).fold(0.0, f64::max);
        pts.push(scale(&e, -deep));
    }
    let body = hull(&pts)?;
    let depth =
        body.vertices().iter().filter(|v| linalg::norm(v) > 1e-12).map(|v| -dot(v, &e)).fold(f64::INFINITY, f64::min);
    Ok(ConicalInstance { body, r0: vec![0.0; d], e, depth })
}

/// Planar wedge with apex `0` and side normals `e1`, `e2`, with a support
/// normal `e` drawn from their positive hull.
#[derive(Debug, Clone)]
pub struct Wedge {
    pub body: Polytope,
    pub e1: Vec<f64>,
    pub e2: Vec<f64>,
    pub e: Vec<f64>,
    pub depth: f64,
}

pub fn random_wedge(rng: &mut impl Rng) -> Result<Wedge> {
    let opening = rng.random_range(0.3..2.8);
    let rot = rng.random_range(0.0..std::f64::consts::TAU);
    let dir = |a: f64| vec![a.cos(), a.sin()];
    // sides along rot and rot + opening; the body lies between them
    let (a1, a2) = (rot, rot + opening);
    let e1 = dir(a1 - std::f64::consts::FRAC_PI_2);
    let e2 = dir(a2 + std::f64::consts::FRAC_PI_2);
    let l = rng.random_range(0.02..0.98);
    let e = normalize(&axpy(&scale(&e1, l), 1.0 - l, &e2)).unwrap();
    let s1 = rng.random_range(0.5..2.0);
    let s2 = rng.random_range(0.5..2.0);
    let body = hull(&[vec![0.0, 0.0], scale(&dir(a1), s1), scale(&dir(a2), s2)])?;
    let depth =
        body.vertices().iter().filter(|v| linalg::norm(v) > 1e-12).map(|v| -dot(v, &e)).fold(f64::INFINITY, f64::min);
    Ok(Wedge { body, e1, e2, e, depth })
}

/// Polytope affinely squashed along `e` into a slab of height `t`.
pub fn squashed(p: &Polytope, e: &[f64], t: f64) -> Result<Polytope> {
    let lo = p.vertices().iter().map(|v| dot(v, e)).fold(f64::INFINITY, f64::min);
    let hi = p.vertices().iter().map(|v| dot(v, e)).fold(f64::NEG_INFINITY, f64::max);
    let k = t / (hi - lo);
    let pts: Vec<Vec<f64>> = p
        .vertices()
        .iter()
        .map(|v| {
            let z = dot(v, e);
            axpy(&sub(v, &scale(e, z)), (z - lo) * k, e)
        })
        .collect();
    hull(&pts)
}

/// Random convex polytope in `R^k` around the origin (radii in `[1, 2]`).
pub fn random_profile(rng: &mut impl Rng, k: usize, n: usize) -> Result<Polytope> {
    let pts: Vec<Vec<f64>> =
        (0..n.max(k + 1) + k).map(|_| scale(&random_unit(rng, k), rng.random_range(1.0..2.0))).collect();
    hull(&pts)
}

/// Random convex piecewise-linear function over the hull of `n` random
/// points in the unit square, with values in `[0, m]`.
pub fn random_convex_pl(rng: &mut impl Rng, n: usize, m: f64) -> Result<ConvexGraphFn> {
    let a = rng.random_range(0.5..3.0);
    let b = rng.random_range(0.5..3.0);
    let (cx, cy): (f64, f64) = (rng.random_range(0.0..1.0), rng.random_range(0.0..1.0));
    let mut planar: Vec<[f64; 2]> = vec![[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]];
    planar.extend((0..n).map(|_| [rng.random_range(0.0..1.0), rng.random_range(0.0..1.0)]));
    let mut lifted: Vec<Vec<f64>> = planar
        .iter()
        .map(|p| {
            let z = a * (p[0] - cx).powi(2) + b * (p[1] - cy).powi(2) + rng.random_range(0.0..0.05);
            vec![p[0], p[1], z]
        })
        .collect();
    let zmin = lifted.iter().map(|p| p[2]).fold(f64::INFINITY, f64::min);
    let zmax = lifted.iter().map(|p| p[2]).fold(f64::NEG_INFINITY, f64::max);
    for p in &mut lifted {
        p[2] = (p[2] - zmin) / (zmax - zmin) * m;
    }
    let h = hull(&lifted)?;
    let points: Vec<[f64; 2]> = h.vertices().iter().map(|v| [v[0], v[1]]).collect();
    let heights: Vec<f64> = h.vertices().iter().map(|v| v[2].clamp(0.0, m)).collect();
    let triangles: Vec<[usize; 3]> = h
        .facets()
        .iter()
        .filter(|f| f.normal[2] < -1e-9)
        .flat_map(|f| f.pieces.iter().map(|s| [s[0], s[1], s[2]]))
        .collect();
    ConvexGraphFn::new(
        Domain::Polygon(crate::hull::convex_hull_2d(&points)),
        GraphKind::PiecewiseLinear { points, heights, triangles },
        m,
    )
}
