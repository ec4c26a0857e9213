//! Balanced transportation problems and the bounded-Lipschitz distance
//! between finite measures on the sphere.

use crate::error::{Error, Result};
use crate::linalg;
use crate::measure::SphericalMeasure;
use std::collections::VecDeque;

/// Measures with more atoms than this are coarsened before solving.
pub const MAX_ATOMS: usize = 5000;
/// Cell size (radians) used for coarsening.
pub const COARSEN_CELL: f64 = 1e-3;

#[derive(Debug, Clone, PartialEq)]
pub struct TransportPlan {
    pub cost: f64,
    /// Nonzero flows `(source, sink, amount)`.
    pub flows: Vec<(usize, usize, f64)>,
}

struct Cell {
    row: usize,
    col: usize,
    flow: f64,
}

/// Solve `min sum c_ij x_ij` subject to row sums `supply` and column sums
/// `demand` (totals must agree to rounding) with the transportation simplex.
pub fn solve_transport(supply: &[f64], demand: &[f64], cost: impl Fn(usize, usize) -> f64) -> Result<TransportPlan> {
    let m = supply.len();
    let n = demand.len();
    if m == 0 || n == 0 {
        return Err(Error::InvalidInput("transport problem needs sources and sinks".into()));
    }
    if supply.iter().chain(demand).any(|x| !(x.is_finite() && *x >= 0.0)) {
        return Err(Error::InvalidInput("supplies and demands must be finite and nonnegative".into()));
    }
    let ts: f64 = supply.iter().sum();
    let td: f64 = demand.iter().sum();
    if (ts - td).abs() > 1e-9 * ts.max(td).max(1.0) {
        return Err(Error::InvalidInput("unbalanced transport problem".into()));
    }
    let c: Vec<f64> = (0..m * n).map(|k| cost(k / n, k % n)).collect();
    let cmax = c.iter().cloned().fold(0.0f64, |a, b| a.max(b.abs()));
    let eps = 1e-12 * cmax.max(1.0);

    // Northwest corner start: m + n - 1 cells forming a spanning tree.
    let mut cells: Vec<Cell> = Vec::with_capacity(m + n - 1);
    let mut ra = supply.to_vec();
    let mut rb = demand.to_vec();
    let (mut i, mut j) = (0, 0);
    loop {
        let x = ra[i].min(rb[j]).max(0.0);
        cells.push(Cell { row: i, col: j, flow: x });
        ra[i] -= x;
        rb[j] -= x;
        if i == m - 1 && j == n - 1 {
            break;
        }
        if j == n - 1 || (i < m - 1 && ra[i] <= rb[j]) {
            i += 1;
        } else {
            j += 1;
        }
    }
    // the last cell absorbs rounding drift
    let mut basic = vec![false; m * n];
    for cl in &cells {
        basic[cl.row * n + cl.col] = true;
    }

    let nodes = m + n;
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); nodes];
    for (k, cl) in cells.iter().enumerate() {
        adj[cl.row].push(k);
        adj[m + cl.col].push(k);
    }

    let mut u = vec![0.0; m];
    let mut v = vec![0.0; n];
    let mut degenerate_run = 0usize;
    let max_iter = 200 * (m + n) + 10_000;
    for _ in 0..max_iter {
        // potentials over the basis tree
        let mut seen = vec![false; nodes];
        let mut queue = VecDeque::from([0usize]);
        seen[0] = true;
        u[0] = 0.0;
        while let Some(a) = queue.pop_front() {
            for &k in &adj[a] {
                let cl = &cells[k];
                let (r, col) = (cl.row, m + cl.col);
                let b = if a == r { col } else { r };
                if seen[b] {
                    continue;
                }
                seen[b] = true;
                if b >= m {
                    v[b - m] = c[cl.row * n + cl.col] - u[cl.row];
                } else {
                    u[b] = c[cl.row * n + cl.col] - v[cl.col];
                }
                queue.push_back(b);
            }
        }

        // pricing: Dantzig, or first improving cell during long degenerate runs
        let bland = degenerate_run > 50;
        let mut best = (-eps, usize::MAX);
        'price: for r in 0..m {
            for col in 0..n {
                let k = r * n + col;
                if basic[k] {
                    continue;
                }
                let red = c[k] - u[r] - v[col];
                if red < best.0 {
                    best = (red, k);
                    if bland {
                        break 'price;
                    }
                }
            }
        }
        if best.1 == usize::MAX {
            let cost_val = cells.iter().map(|cl| cl.flow * c[cl.row * n + cl.col]).sum();
            let flows = cells.iter().filter(|cl| cl.flow > 0.0).map(|cl| (cl.row, cl.col, cl.flow)).collect();
            return Ok(TransportPlan { cost: cost_val, flows });
        }
        let (er, ec) = (best.1 / n, best.1 % n);

        // tree path from row node er to column node m + ec
        let target = m + ec;
        let mut via = vec![usize::MAX; nodes];
        let mut seen = vec![false; nodes];
        seen[er] = true;
        let mut queue = VecDeque::from([er]);
        while let Some(a) = queue.pop_front() {
            if a == target {
                break;
            }
            for &k in &adj[a] {
                let cl = &cells[k];
                let b = if a == cl.row { m + cl.col } else { cl.row };
                if !seen[b] {
                    seen[b] = true;
                    via[b] = k;
                    queue.push_back(b);
                }
            }
        }
        let mut path = Vec::new();
        let mut a = target;
        while a != er {
            let k = via[a];
            path.push(k);
            let cl = &cells[k];
            a = if a == cl.row { m + cl.col } else { cl.row };
        }
        // path runs from the column end; signs alternate starting with minus
        let mut theta = f64::INFINITY;
        let mut leave = usize::MAX;
        for (pos, &k) in path.iter().enumerate() {
            if pos % 2 == 0 && cells[k].flow < theta {
                theta = cells[k].flow;
                leave = k;
            }
        }
        let theta = theta.max(0.0);
        for (pos, &k) in path.iter().enumerate() {
            if pos % 2 == 0 {
                cells[k].flow = (cells[k].flow - theta).max(0.0);
            } else {
                cells[k].flow += theta;
            }
        }
        degenerate_run = if theta > 0.0 { 0 } else { degenerate_run + 1 };

        let old = &cells[leave];
        basic[old.row * n + old.col] = false;
        let (or, oc) = (old.row, m + old.col);
        adj[or].retain(|x| *x != leave);
        adj[oc].retain(|x| *x != leave);
        cells[leave] = Cell { row: er, col: ec, flow: theta };
        basic[best.1] = true;
        adj[er].push(leave);
        adj[m + ec].push(leave);
    }
    Err(Error::InvalidInput("transport simplex did not converge".into()))
}

/// Bounded-Lipschitz distance `sup { int f d(mu - nu) : |f| <= 1, Lip(f) <= 1 }`
/// with the geodesic metric on the sphere.
///
/// Solved as a transport problem with cost `min(angle, 2)` and an extra
/// ground node reachable at cost 1, which absorbs any mass imbalance.
pub fn bl_distance(mu: &SphericalMeasure, nu: &SphericalMeasure) -> Result<f64> {
    if mu.dim() != nu.dim() {
        return Err(Error::DimensionMismatch { expected: mu.dim(), got: nu.dim() });
    }
    let mu = if mu.len() > MAX_ATOMS { mu.coarsened(COARSEN_CELL) } else { mu.clone() };
    let nu = if nu.len() > MAX_ATOMS { nu.coarsened(COARSEN_CELL) } else { nu.clone() };
    let (mm, mn) = (mu.total_mass(), nu.total_mass());
    let mut supply: Vec<f64> = mu.atoms().iter().map(|a| a.weight).collect();
    supply.push(mn);
    let mut demand: Vec<f64> = nu.atoms().iter().map(|a| a.weight).collect();
    demand.push(mm);
    let (p, q) = (mu.len(), nu.len());
    let plan = solve_transport(&supply, &demand, |i, j| match (i < p, j < q) {
        (true, true) => linalg::angle(&mu.atoms()[i].dir, &nu.atoms()[j].dir).min(2.0),
        (false, false) => 0.0,
        _ => 1.0,
    })?;
    Ok(plan.cost)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measure::Atom;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_dir(rng: &mut ChaCha8Rng, d: usize) -> Vec<f64> {
        loop {
            let v: Vec<f64> = (0..d).map(|_| rng.random_range(-1.0..1.0)).collect();
            if let Some(u) = linalg::normalize(&v) {
                return u;
            }
        }
    }

    fn random_measure(rng: &mut ChaCha8Rng, d: usize, k: usize) -> SphericalMeasure {
        let atoms = (0..k).map(|_| Atom { dir: random_dir(rng, d), weight: rng.random_range(0.0..1.0) }).collect();
        SphericalMeasure::new(d, atoms).unwrap()
    }

    // Against a Dirac target the optimal test function is min(1, c + dist)
    // for some level c in [-1, 1]; the objective is piecewise linear in c.
    fn bl_to_dirac(mu: &SphericalMeasure, e: &[f64]) -> f64 {
        let ds: Vec<f64> = mu.atoms().iter().map(|a| linalg::angle(&a.dir, e)).collect();
        let obj = |c: f64| mu.atoms().iter().zip(&ds).map(|(a, d)| a.weight * (c + d).min(1.0)).sum::<f64>() - c;
        let mut cands = vec![-1.0, 1.0];
        cands.extend(ds.iter().map(|d| 1.0 - d).filter(|c| (-1.0..=1.0).contains(c)));
        cands.into_iter().map(obj).fold(f64::NEG_INFINITY, f64::max)
    }

    #[test]
    fn small_transport() {
        let plan = solve_transport(&[3.0, 2.0], &[1.0, 4.0], |i, j| [[1.0, 5.0], [2.0, 1.0]][i][j]).unwrap();
        // ship 1 on (0,0), 2 on (0,1), 2 on (1,1)
        assert!((plan.cost - 13.0).abs() < 1e-12);
        assert!(solve_transport(&[1.0], &[2.0], |_, _| 0.0).is_err());
    }

    #[test]
    fn transport_matches_brute_force_on_2x3() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..50 {
            let a = [rng.random_range(0.1..1.0), rng.random_range(0.1..1.0)];
            let t = a[0] + a[1];
            let w = [rng.random_range(0.1..1.0), rng.random_range(0.1..1.0), rng.random_range(0.1..1.0)];
            let s: f64 = w.iter().sum();
            let b: Vec<f64> = w.iter().map(|x| x * t / s).collect();
            let c: Vec<Vec<f64>> = (0..2).map(|_| (0..3).map(|_| rng.random_range(0.0..3.0)).collect()).collect();
            let plan = solve_transport(&a, &b, |i, j| c[i][j]).unwrap();
            // one free parameter pair (x00, x01); grid search is an upper bound
            let mut best = f64::INFINITY;
            let steps = 400;
            for p in 0..=steps {
                for q in 0..=steps {
                    let x00 = b[0].min(a[0]) * p as f64 / steps as f64;
                    let x01 = b[1].min(a[0] - x00).max(0.0) * q as f64 / steps as f64;
                    let x02 = a[0] - x00 - x01;
                    if x02 < -1e-12 || x02 > b[2] + 1e-12 {
                        continue;
                    }
                    let cost = x00 * c[0][0]
                        + x01 * c[0][1]
                        + x02 * c[0][2]
                        + (b[0] - x00) * c[1][0]
                        + (b[1] - x01) * c[1][1]
                        + (b[2] - x02) * c[1][2];
                    best = best.min(cost);
                }
            }
            assert!(plan.cost <= best + 1e-9);
            assert!(plan.cost >= best - 0.02 * t * 3.0);
        }
    }

    #[test]
    fn bl_against_dirac_closed_form() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for d in [2, 3, 4] {
            for k in [1, 3, 10, 40] {
                let mu = random_measure(&mut rng, d, k);
                let e = random_dir(&mut rng, d);
                let got = bl_distance(&mu, &SphericalMeasure::dirac(&e).unwrap()).unwrap();
                let want = bl_to_dirac(&mu, &e);
                assert!((got - want).abs() < 1e-9, "d={d} k={k}: {got} vs {want}");
            }
        }
    }

    #[test]
    fn bl_metric_properties() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..20 {
            let a = random_measure(&mut rng, 3, 6);
            let b = random_measure(&mut rng, 3, 5);
            let c = random_measure(&mut rng, 3, 7);
            assert!(bl_distance(&a, &a).unwrap().abs() < 1e-12);
            let ab = bl_distance(&a, &b).unwrap();
            assert!((ab - bl_distance(&b, &a).unwrap()).abs() < 1e-9);
            assert!(ab <= bl_distance(&a, &c).unwrap() + bl_distance(&c, &b).unwrap() + 1e-9);
            assert!(ab <= a.total_mass() + b.total_mass() + 1e-12);
        }
    }

    #[test]
    fn bl_simple_values() {
        let x = SphericalMeasure::dirac(&[1.0, 0.0]).unwrap();
        let y = SphericalMeasure::dirac(&[0.0, 1.0]).unwrap();
        assert!((bl_distance(&x, &y).unwrap() - std::f64::consts::FRAC_PI_2).abs() < 1e-12);
        let z = SphericalMeasure::dirac(&[-1.0, 0.0]).unwrap();
        assert!((bl_distance(&x, &z).unwrap() - 2.0).abs() < 1e-12);
        let half = x.scaled(0.5);
        assert!((bl_distance(&x, &half).unwrap() - 0.5).abs() < 1e-12);
        assert!((bl_distance(&x, &SphericalMeasure::zero(2)).unwrap() - 1.0).abs() < 1e-12);
    }
}
