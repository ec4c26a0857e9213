//! Small dense helpers over `&[f64]` vectors. Dimensions here never exceed 4,
//! so plain slices beat a matrix library for readability.

use nalgebra::DMatrix;

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

pub fn sub(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn add(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn scale(a: &[f64], k: f64) -> Vec<f64> {
    a.iter().map(|x| x * k).collect()
}

/// `a + k * b`
pub fn axpy(a: &[f64], k: f64, b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x + k * y).collect()
}

pub fn dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

pub fn normalize(a: &[f64]) -> Option<Vec<f64>> {
    let n = norm(a);
    if n > 0.0 && n.is_finite() {
        Some(scale(a, 1.0 / n))
    } else {
        None
    }
}

/// Geodesic distance on the unit sphere between two unit vectors.
pub fn angle(a: &[f64], b: &[f64]) -> f64 {
    // atan2 form stays accurate for nearly parallel and nearly antipodal pairs.
    let d = dot(a, b);
    let c = cross_norm(a, b);
    c.atan2(d)
}

fn cross_norm(a: &[f64], b: &[f64]) -> f64 {
    // |a|^2 |b|^2 - (a.b)^2 computed through the Lagrange identity.
    let mut s = 0.0;
    for i in 0..a.len() {
        for j in (i + 1)..a.len() {
            let m = a[i] * b[j] - a[j] * b[i];
            s += m * m;
        }
    }
    s.sqrt()
}

pub fn unit(dim: usize, axis: usize) -> Vec<f64> {
    let mut v = vec![0.0; dim];
    v[axis] = 1.0;
    v
}

/// Determinant of an n x n matrix (n <= 4) given row-major.
pub fn det(rows: &[Vec<f64>]) -> f64 {
    let n = rows.len();
    match n {
        0 => 1.0,
        1 => rows[0][0],
        2 => rows[0][0] * rows[1][1] - rows[0][1] * rows[1][0],
        _ => {
            let mut s = 0.0;
            for j in 0..n {
                let minor: Vec<Vec<f64>> = rows[1..]
                    .iter()
                    .map(|r| r.iter().enumerate().filter(|(k, _)| *k != j).map(|(_, x)| *x).collect())
                    .collect();
                let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
                s += sign * rows[0][j] * det(&minor);
            }
            s
        }
    }
}

/// Generalized cross product of `d - 1` vectors in R^d: the vector `c` with
/// `<c, x> = det[v_1; ...; v_{d-1}; x]`. Its norm is the (d-1)-volume of the
/// parallelotope spanned by the inputs.
pub fn cross(vs: &[Vec<f64>]) -> Vec<f64> {
    let d = vs.len() + 1;
    (0..d)
        .map(|j| {
            let minor: Vec<Vec<f64>> =
                vs.iter().map(|r| r.iter().enumerate().filter(|(k, _)| *k != j).map(|(_, x)| *x).collect()).collect();
            // Expansion of det along the last row.
            let sign = if (d - 1 + j).is_multiple_of(2) { 1.0 } else { -1.0 };
            sign * det(&minor)
        })
        .collect()
}

/// Numerical rank of a set of vectors: singular values above `rel_tol` times
/// the largest one.
pub fn rank(vectors: &[Vec<f64>], rel_tol: f64) -> usize {
    if vectors.is_empty() {
        return 0;
    }
    let d = vectors[0].len();
    let m = DMatrix::from_fn(vectors.len(), d, |i, j| vectors[i][j]);
    let sv = m.singular_values();
    let max = sv.iter().cloned().fold(0.0, f64::max);
    if max == 0.0 {
        return 0;
    }
    sv.iter().filter(|s| **s > rel_tol * max).count()
}

/// Orthonormal basis of the orthogonal complement of a unit vector, built by
/// Gram-Schmidt over the coordinate axes (so axis-aligned inputs give
/// coordinate axes back).
pub fn complement_basis(e: &[f64]) -> Vec<Vec<f64>> {
    let d = e.len();
    let mut basis: Vec<Vec<f64>> = vec![e.to_vec()];
    let mut axes: Vec<usize> = (0..d).collect();
    // Try the axes least aligned with e first.
    axes.sort_by(|a, b| e[*a].abs().partial_cmp(&e[*b].abs()).unwrap());
    for k in axes {
        if basis.len() == d {
            break;
        }
        let mut v = unit(d, k);
        for b in &basis {
            let c = dot(&v, b);
            v = axpy(&v, -c, b);
        }
        // Second pass for stability.
        for b in &basis {
            let c = dot(&v, b);
            v = axpy(&v, -c, b);
        }
        if norm(&v) > 1e-6 {
            basis.push(normalize(&v).unwrap());
        }
    }
    let mut out = basis.split_off(1);
    out.sort_by_key(|v| {
        v.iter().enumerate().max_by(|a, b| a.1.abs().partial_cmp(&b.1.abs()).unwrap()).map(|(i, _)| i).unwrap()
    });
    out
}

pub fn factorial(n: usize) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

/// Volume of the unit ball in R^n.
pub fn unit_ball_volume(n: usize) -> f64 {
    match n {
        0 => 1.0,
        1 => 2.0,
        _ => unit_ball_volume(n - 2) * 2.0 * std::f64::consts::PI / n as f64,
    }
}

/// (n)-dimensional area of the unit sphere S^n in R^{n+1}.
pub fn unit_sphere_area(n: usize) -> f64 {
    (n + 1) as f64 * unit_ball_volume(n + 1)
}

/// Solve a small square system with partial pivoting.
pub fn solve(a: &[Vec<f64>], b: &[f64]) -> Option<Vec<f64>> {
    let n = b.len();
    let m = DMatrix::from_fn(n, n, |i, j| a[i][j]);
    let rhs = nalgebra::DVector::from_column_slice(b);
    m.lu().solve(&rhs).map(|x| x.iter().cloned().collect())
}

/// Group unit vectors whose angular distance to a cluster representative is
/// at most `tol`. Returns a cluster id per input, ids numbered in order of
/// first appearance in sorted order.
pub fn cluster_directions(dirs: &[Vec<f64>], tol: f64) -> Vec<usize> {
    let mut order: Vec<usize> = (0..dirs.len()).collect();
    order.sort_by(|a, b| dirs[*a][0].partial_cmp(&dirs[*b][0]).unwrap_or(std::cmp::Ordering::Equal));
    let mut reps: Vec<usize> = Vec::new();
    let mut out = vec![usize::MAX; dirs.len()];
    for &i in &order {
        let mut found = None;
        for (c, &r) in reps.iter().enumerate().rev() {
            if dirs[i][0] - dirs[r][0] > tol {
                break;
            }
            if angle(&dirs[i], &dirs[r]) <= tol {
                found = Some(c);
                break;
            }
        }
        out[i] = match found {
            Some(c) => c,
            None => {
                reps.push(i);
                reps.len() - 1
            }
        };
    }
    out
}
