//! Orientation predicate with a floating-point filter and an exact integer
//! fallback. Works in any dimension up to 4.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use std::cmp::Ordering;

const EPS: f64 = f64::EPSILON;

/// Sign of `det[p_0 - q; ...; p_{d-1} - q]`, which equals the affine
/// determinant of the rows `[p_i, 1]` followed by `[q, 1]`.
///
/// Positive means `q` lies on the positive side of the oriented hyperplane
/// through the `p_i`.
pub fn orient(simplex: &[&[f64]], q: &[f64]) -> Ordering {
    let d = q.len();
    debug_assert_eq!(simplex.len(), d);
    let mut m = [[0.0f64; 4]; 4];
    for (i, p) in simplex.iter().enumerate() {
        for j in 0..d {
            m[i][j] = p[j] - q[j];
        }
    }
    let (det, perm) = det_and_permanent(&m, d);
    let bound = (4 * d + 4) as f64 * EPS * perm;
    if det > bound {
        Ordering::Greater
    } else if det < -bound {
        Ordering::Less
    } else {
        orient_exact(simplex, q)
    }
}

/// Floating-point value of the orientation determinant (no sign guarantee).
pub fn orient_value(simplex: &[&[f64]], q: &[f64]) -> f64 {
    let d = q.len();
    let mut m = [[0.0f64; 4]; 4];
    for (i, p) in simplex.iter().enumerate() {
        for j in 0..d {
            m[i][j] = p[j] - q[j];
        }
    }
    det_and_permanent(&m, d).0
}

fn det_and_permanent(m: &[[f64; 4]; 4], n: usize) -> (f64, f64) {
    // Laplace expansion along the first row, recursing on column masks.
    fn rec(m: &[[f64; 4]; 4], row: usize, n: usize, cols: u8) -> (f64, f64) {
        if row == n {
            return (1.0, 1.0);
        }
        let mut det = 0.0;
        let mut perm = 0.0;
        let mut sign = 1.0;
        for c in 0..n {
            if cols & (1 << c) != 0 {
                continue;
            }
            let a = m[row][c];
            let (d, p) = rec(m, row + 1, n, cols | (1 << c));
            det += sign * a * d;
            perm += a.abs() * p;
            sign = -sign;
        }
        (det, perm)
    }
    rec(m, 0, n, 0)
}

fn orient_exact(simplex: &[&[f64]], q: &[f64]) -> Ordering {
    let d = q.len();
    // Every finite double is an integer multiple of 2^-1074, so after
    // aligning exponents all coordinates and their differences are integers.
    let min_exp = simplex
        .iter()
        .flat_map(|p| p.iter())
        .chain(q)
        .filter(|x| **x != 0.0)
        .map(|x| decompose(*x).1)
        .min()
        .unwrap_or(0);
    let int = |x: f64| -> BigInt {
        if x == 0.0 {
            return BigInt::zero();
        }
        let (m, e) = decompose(x);
        BigInt::from(m) << ((e - min_exp) as usize)
    };
    let qi: Vec<BigInt> = q.iter().map(|x| int(*x)).collect();
    let mut m: Vec<Vec<BigInt>> = simplex.iter().map(|p| (0..d).map(|j| int(p[j]) - &qi[j]).collect()).collect();
    // Bareiss fraction-free elimination; every division is exact.
    let mut sign = 1i32;
    let mut prev = BigInt::from(1);
    for k in 0..d {
        let Some(piv) = (k..d).find(|r| !m[*r][k].is_zero()) else {
            return Ordering::Equal;
        };
        if piv != k {
            m.swap(piv, k);
            sign = -sign;
        }
        for i in (k + 1)..d {
            for j in (k + 1)..d {
                let v = (&m[i][j] * &m[k][k] - &m[i][k] * &m[k][j]) / &prev;
                m[i][j] = v;
            }
        }
        prev = m[k][k].clone();
    }
    let det = &m[d - 1][d - 1];
    match (det.is_negative(), sign < 0) {
        (false, false) | (true, true) => Ordering::Greater,
        _ => Ordering::Less,
    }
}

/// `x = m * 2^e` with integer mantissa `m`.
fn decompose(x: f64) -> (i64, i32) {
    let bits = x.to_bits();
    let neg = bits >> 63 == 1;
    let exp = ((bits >> 52) & 0x7ff) as i32;
    let frac = (bits & ((1u64 << 52) - 1)) as i64;
    let (m, e) = if exp == 0 { (frac, -1074) } else { (frac | (1i64 << 52), exp - 1075) };
    (if neg { -m } else { m }, e)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn planar_orientation_signs() {
        let a = [0.0, 0.0];
        let b = [1.0, 0.0];
        let left = orient(&[&a, &b], &[0.5, 1.0]);
        let right = orient(&[&a, &b], &[0.5, -1.0]);
        assert_ne!(left, Ordering::Equal);
        assert_eq!(left, right.reverse());
        assert_eq!(orient(&[&a, &b], &[7.0, 0.0]), Ordering::Equal);
    }

    #[test]
    fn nearly_collinear_points_are_resolved_exactly() {
        // q is on the line y = x up to one ulp; the filter cannot decide.
        let a = [0.1, 0.1];
        let b = [0.7, 0.7];
        let on = [0.3, 0.3];
        assert_eq!(orient(&[&a, &b], &on), orient_exact(&[&a, &b], &on));
        let up = [0.3, f64::from_bits(0.3f64.to_bits() + 1)];
        let down = [0.3, f64::from_bits(0.3f64.to_bits() - 1)];
        assert_ne!(orient(&[&a, &b], &up), Ordering::Equal);
        assert_eq!(orient(&[&a, &b], &up), orient(&[&a, &b], &down).reverse());
    }

    #[test]
    fn coplanar_in_three_and_four_dimensions() {
        let p = [[0.0, 0.0, 1.0], [1.0, 0.0, 1.0], [0.0, 1.0, 1.0]];
        let s: Vec<&[f64]> = p.iter().map(|x| &x[..]).collect();
        assert_eq!(orient(&s, &[0.3, 0.3, 1.0]), Ordering::Equal);
        assert_ne!(orient(&s, &[0.3, 0.3, f64::from_bits(1.0f64.to_bits() + 1)]), Ordering::Equal);
        let p4 = [[0.0, 0.0, 0.0, 0.0], [1.0, 0.0, 0.0, 0.0], [0.0, 1.0, 0.0, 0.0], [0.0, 0.0, 1.0, 0.0]];
        let s4: Vec<&[f64]> = p4.iter().map(|x| &x[..]).collect();
        assert_eq!(orient(&s4, &[0.2, 0.2, 0.2, 0.0]), Ordering::Equal);
        assert_eq!(orient(&s4, &[0.2, 0.2, 0.2, 1e-300]), orient(&s4, &[0.2, 0.2, 0.2, -1e-300]).reverse());
    }

    #[test]
    fn mantissa_decomposition_round_trips() {
        for x in [1.0, -0.3, 1e-200, 123456.789, -1e300] {
            let (m, e) = decompose(x);
            assert_eq!(m as f64 * 2f64.powi(e), x);
        }
    }

    #[test]
    fn filter_agrees_with_exact_on_random_inputs() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for d in 2..=4 {
            for _ in 0..200 {
                let pts: Vec<Vec<f64>> =
                    (0..d).map(|_| (0..d).map(|_| rng.random_range(-1.0..1.0)).collect()).collect();
                let q: Vec<f64> = (0..d).map(|_| rng.random_range(-1.0..1.0)).collect();
                let s: Vec<&[f64]> = pts.iter().map(|x| &x[..]).collect();
                assert_eq!(orient(&s, &q), orient_exact(&s, &q));
            }
        }
    }
}
