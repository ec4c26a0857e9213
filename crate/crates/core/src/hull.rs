//! Quickhull in dimensions 2 to 4 over exact orientation signs.
//!
//! The output is a simplicial boundary: every facet is a `d`-tuple of point
//! indices ordered so that `orient(facet, q) > 0` exactly when `q` is strictly
//! outside. Coplanar simplices are kept separate here and merged into true
//! facets by [`crate::body::Polytope`].

use crate::error::{Error, Result};
use crate::linalg::{dist, dot, norm, scale, sub};
use crate::predicates::{orient, orient_value};
use std::cmp::Ordering;
use std::collections::HashMap;

#[derive(Debug, Clone)]
pub struct SimplicialHull {
    /// Input points after duplicate merging.
    pub points: Vec<Vec<f64>>,
    /// Outward-oriented boundary simplices (indices into `points`).
    pub simplices: Vec<Vec<usize>>,
}

struct Face {
    verts: Vec<usize>,
    outside: Vec<usize>,
    alive: bool,
}

/// Bounding-box diagonal; cheap upper bound for the diameter.
pub fn bbox_diagonal(points: &[Vec<f64>]) -> f64 {
    let d = points[0].len();
    let mut lo = vec![f64::INFINITY; d];
    let mut hi = vec![f64::NEG_INFINITY; d];
    for p in points {
        for k in 0..d {
            lo[k] = lo[k].min(p[k]);
            hi[k] = hi[k].max(p[k]);
        }
    }
    dist(&lo, &hi)
}

/// Remove points within `tol` of an earlier point.
pub fn merge_duplicates(points: &[Vec<f64>], tol: f64) -> Vec<Vec<f64>> {
    let mut order: Vec<usize> = (0..points.len()).collect();
    order.sort_by(|a, b| points[*a][0].partial_cmp(&points[*b][0]).unwrap_or(Ordering::Equal));
    let mut kept: Vec<usize> = Vec::new();
    'outer: for &i in &order {
        for &k in kept.iter().rev() {
            if points[i][0] - points[k][0] > tol {
                break;
            }
            if dist(&points[i], &points[k]) <= tol {
                continue 'outer;
            }
        }
        kept.push(i);
    }
    kept.sort_unstable();
    kept.into_iter().map(|i| points[i].clone()).collect()
}

pub fn simplicial_hull(points: &[Vec<f64>]) -> Result<SimplicialHull> {
    if points.is_empty() {
        return Err(Error::DegenerateInput("no points".into()));
    }
    let d = points[0].len();
    if !(2..=4).contains(&d) {
        return Err(Error::UnsupportedDimension(d));
    }
    if let Some(p) = points.iter().find(|p| p.len() != d) {
        return Err(Error::DimensionMismatch { expected: d, got: p.len() });
    }
    if points.iter().flatten().any(|x| !x.is_finite()) {
        return Err(Error::InvalidInput("non-finite coordinate".into()));
    }
    let diam = bbox_diagonal(points);
    let pts = merge_duplicates(points, 1e-9 * diam);
    if pts.len() < d + 1 {
        return Err(Error::DegenerateInput(format!("{} distinct points cannot span R^{d}", pts.len())));
    }
    let simplex = initial_simplex(&pts, diam)?;
    let refs = |ix: &[usize]| -> Vec<&[f64]> { ix.iter().map(|i| &pts[*i][..]).collect() };

    let mut faces: Vec<Face> = Vec::new();
    for skip in 0..=d {
        let mut verts: Vec<usize> = simplex.iter().enumerate().filter(|(k, _)| *k != skip).map(|(_, v)| *v).collect();
        if orient(&refs(&verts), &pts[simplex[skip]]) == Ordering::Greater {
            verts.swap(0, 1);
        }
        faces.push(Face { verts, outside: Vec::new(), alive: true });
    }
    let in_simplex: Vec<bool> = {
        let mut m = vec![false; pts.len()];
        for v in &simplex {
            m[*v] = true;
        }
        m
    };
    for (i, p) in pts.iter().enumerate() {
        if in_simplex[i] {
            continue;
        }
        if let Some(f) = faces.iter().position(|f| orient(&refs(&f.verts), p) == Ordering::Greater) {
            faces[f].outside.push(i);
        }
    }

    while let Some(fi) = faces.iter().position(|f| f.alive && !f.outside.is_empty()) {
        let apex = {
            let f = &faces[fi];
            let r = refs(&f.verts);
            *f.outside
                .iter()
                .max_by(|a, b| {
                    orient_value(&r, &pts[**a]).partial_cmp(&orient_value(&r, &pts[**b])).unwrap_or(Ordering::Equal)
                })
                .unwrap()
        };
        let visible: Vec<usize> = faces
            .iter()
            .enumerate()
            .filter(|(_, f)| f.alive && orient(&refs(&f.verts), &pts[apex]) == Ordering::Greater)
            .map(|(i, _)| i)
            .collect();

        let mut ridges: HashMap<Vec<usize>, (usize, usize, usize)> = HashMap::new();
        for &f in &visible {
            for k in 0..d {
                let mut key: Vec<usize> =
                    faces[f].verts.iter().enumerate().filter(|(j, _)| *j != k).map(|(_, v)| *v).collect();
                key.sort_unstable();
                ridges.entry(key).and_modify(|e| e.0 += 1).or_insert((1, f, k));
            }
        }
        let mut orphans: Vec<usize> = Vec::new();
        for &f in &visible {
            faces[f].alive = false;
            orphans.extend(faces[f].outside.drain(..).filter(|p| *p != apex));
        }
        let first_new = faces.len();
        let mut horizon: Vec<(usize, usize)> =
            ridges.values().filter(|(count, _, _)| *count == 1).map(|(_, f, k)| (*f, *k)).collect();
        horizon.sort_unstable();
        for (f, k) in horizon {
            let mut verts = faces[f].verts.clone();
            verts[k] = apex;
            faces.push(Face { verts, outside: Vec::new(), alive: true });
        }
        for p in orphans {
            if let Some(off) =
                faces[first_new..].iter().position(|f| orient(&refs(&f.verts), &pts[p]) == Ordering::Greater)
            {
                faces[first_new + off].outside.push(p);
            }
        }
    }

    let simplices = faces.into_iter().filter(|f| f.alive).map(|f| f.verts).collect();
    Ok(SimplicialHull { points: pts, simplices })
}

/// Greedy choice of `d + 1` affinely independent points, each farthest from
/// the affine span of the previous ones.
fn initial_simplex(pts: &[Vec<f64>], diam: f64) -> Result<Vec<usize>> {
    let d = pts[0].len();
    let first = (0..pts.len()).min_by(|a, b| pts[*a][0].partial_cmp(&pts[*b][0]).unwrap_or(Ordering::Equal)).unwrap();
    let mut chosen = vec![first];
    let mut basis: Vec<Vec<f64>> = Vec::new();
    while chosen.len() < d + 1 {
        let origin = &pts[chosen[0]];
        let residual = |p: &[f64]| -> Vec<f64> {
            let mut r = sub(p, origin);
            for b in &basis {
                let c = dot(&r, b);
                r = r.iter().zip(b).map(|(x, y)| x - c * y).collect();
            }
            r
        };
        let (best, best_dist) = pts
            .iter()
            .enumerate()
            .map(|(i, p)| (i, norm(&residual(p))))
            .max_by(|a, b| a.1.partial_cmp(&b.1).unwrap_or(Ordering::Equal))
            .unwrap();
        if best_dist <= 1e-9 * diam {
            return Err(Error::DegenerateInput(format!("points have affine dimension {} < {d}", chosen.len() - 1)));
        }
        let r = residual(&pts[best]);
        basis.push(scale(&r, 1.0 / norm(&r)));
        chosen.push(best);
    }
    let r: Vec<&[f64]> = chosen[..d].iter().map(|i| &pts[*i][..]).collect();
    if orient(&r, &pts[chosen[d]]) == Ordering::Equal {
        return Err(Error::DegenerateInput("initial simplex is flat".into()));
    }
    Ok(chosen)
}

/// Counter-clockwise convex hull of planar points (monotone chain); collinear
/// boundary points are dropped.
pub fn convex_hull_2d(points: &[[f64; 2]]) -> Vec<[f64; 2]> {
    let mut pts = points.to_vec();
    pts.sort_by(|a, b| a.partial_cmp(b).unwrap());
    pts.dedup();
    if pts.len() < 3 {
        return pts;
    }
    let cross =
        |o: &[f64; 2], a: &[f64; 2], b: &[f64; 2]| (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
    let mut out: Vec<[f64; 2]> = Vec::with_capacity(2 * pts.len());
    for pass in 0..2 {
        let start = out.len();
        let iter: Box<dyn Iterator<Item = &[f64; 2]>> =
            if pass == 0 { Box::new(pts.iter()) } else { Box::new(pts.iter().rev()) };
        for p in iter {
            while out.len() >= start + 2 && cross(&out[out.len() - 2], &out[out.len() - 1], p) <= 0.0 {
                out.pop();
            }
            out.push(*p);
        }
        out.pop();
    }
    out
}

/// Shoelace area of a counter-clockwise polygon.
pub fn polygon_area(poly: &[[f64; 2]]) -> f64 {
    let n = poly.len();
    (0..n)
        .map(|i| {
            let (a, b) = (poly[i], poly[(i + 1) % n]);
            a[0] * b[1] - a[1] * b[0]
        })
        .sum::<f64>()
        / 2.0
}

#[cfg(test)]
mod tests {
    use super::*;

    fn assert_valid(h: &SimplicialHull, input: &[Vec<f64>]) {
        for s in &h.simplices {
            let r: Vec<&[f64]> = s.iter().map(|i| &h.points[*i][..]).collect();
            for p in input {
                assert_ne!(orient(&r, p), Ordering::Greater, "point outside hull facet");
            }
        }
    }

    #[test]
    fn square_with_interior_and_edge_points() {
        let pts = vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![1.0, 1.0], vec![0.0, 1.0], vec![0.5, 0.5], vec![0.5, 0.0]];
        let h = simplicial_hull(&pts).unwrap();
        assert_valid(&h, &pts);
        let used: std::collections::BTreeSet<usize> = h.simplices.iter().flatten().cloned().collect();
        assert!(!used.contains(&4));
    }

    #[test]
    fn cube_has_twelve_triangles() {
        let mut pts = Vec::new();
        for i in 0..8 {
            pts.push(vec![(i & 1) as f64, ((i >> 1) & 1) as f64, ((i >> 2) & 1) as f64]);
        }
        pts.push(vec![0.5, 0.5, 0.5]);
        let h = simplicial_hull(&pts).unwrap();
        assert_eq!(h.simplices.len(), 12);
        assert_valid(&h, &pts);
    }

    #[test]
    fn tesseract_boundary_is_closed() {
        let mut pts = Vec::new();
        for i in 0..16 {
            pts.push((0..4).map(|k| ((i >> k) & 1) as f64).collect::<Vec<f64>>());
        }
        let h = simplicial_hull(&pts).unwrap();
        assert_valid(&h, &pts);
        // Every ridge is shared by exactly two simplices.
        let mut count: HashMap<Vec<usize>, usize> = HashMap::new();
        for s in &h.simplices {
            for k in 0..4 {
                let mut r: Vec<usize> = s.iter().enumerate().filter(|(j, _)| *j != k).map(|(_, v)| *v).collect();
                r.sort_unstable();
                *count.entry(r).or_default() += 1;
            }
        }
        assert!(count.values().all(|c| *c == 2));
    }

    #[test]
    fn flat_input_is_rejected() {
        let pts = vec![vec![0.0, 0.0, 0.0], vec![1.0, 0.0, 0.0], vec![0.0, 1.0, 0.0], vec![1.0, 1.0, 0.0]];
        assert!(matches!(simplicial_hull(&pts), Err(Error::DegenerateInput(_))));
    }

    #[test]
    fn duplicates_are_merged() {
        let pts = vec![vec![0.0, 0.0], vec![1e-13, 0.0], vec![1.0, 0.0], vec![0.0, 1.0]];
        let h = simplicial_hull(&pts).unwrap();
        assert_eq!(h.points.len(), 3);
    }

    #[test]
    fn planar_monotone_chain() {
        let pts = [[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0], [0.5, 0.5], [0.5, 0.0]];
        let h = convex_hull_2d(&pts);
        assert_eq!(h, vec![[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]]);
        assert_eq!(polygon_area(&h), 1.0);
    }
}
