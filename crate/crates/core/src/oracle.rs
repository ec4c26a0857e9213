//! Monte Carlo estimators that serve as independent references for areas
//! and cap measures.
//!
//! Samples are drawn in chunks of [`CHUNK`]; chunk `k` uses a ChaCha stream
//! keyed by `(seed, k)`, so results do not depend on the thread count.

use crate::body::{ConvexBody, Ellipsoid, Polytope};
use crate::error::{Error, Result};
use crate::hull::{convex_hull_2d, polygon_area};
use crate::linalg::{self, complement_basis, dot, normalize, sub, unit_ball_volume};
use crate::parallel::ordered_map;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::Serialize;

pub const CHUNK: usize = 4096;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct McEstimate {
    pub value: f64,
    pub std_error: f64,
    pub samples: usize,
    pub seed: u64,
}

impl McEstimate {
    /// `|value - x| <= k σ` (with a floor for exact zero-variance cases).
    pub fn agrees_with(&self, x: f64, k: f64) -> bool {
        (self.value - x).abs() <= k * self.std_error + 1e-12 * x.abs().max(1.0)
    }
}

/// Running first and second moments of a per-sample contribution.
#[derive(Debug, Clone, Copy, Default)]
struct Moments {
    sum: f64,
    sum_sq: f64,
}

impl Moments {
    fn push(&mut self, x: f64) {
        self.sum += x;
        self.sum_sq += x * x;
    }

    fn merge(&mut self, o: &Moments) {
        self.sum += o.sum;
        self.sum_sq += o.sum_sq;
    }

    /// Mean and standard error of the mean over `n` samples.
    fn estimate(&self, n: usize) -> (f64, f64) {
        let nf = n as f64;
        let mean = self.sum / nf;
        let var = (self.sum_sq / nf - mean * mean).max(0.0);
        (mean, (var / (nf - 1.0).max(1.0)).sqrt())
    }
}

fn chunk_rng(seed: u64, chunk: usize) -> ChaCha8Rng {
    let mut rng: ChaCha8Rng = rand::SeedableRng::seed_from_u64(seed);
    rng.set_stream(chunk as u64);
    rng
}

/// Run `sample` for `samples` draws; each call pushes into a fresh vector of
/// `width` moment accumulators. Returns the merged accumulators.
fn run_chunks(
    samples: usize,
    seed: u64,
    width: usize,
    sample: impl Fn(&mut ChaCha8Rng, &mut [Moments]) + Sync + Send,
) -> Vec<Moments> {
    let chunks: Vec<usize> = (0..samples.div_ceil(CHUNK)).collect();
    let parts = ordered_map(&chunks, |k| {
        let mut rng = chunk_rng(seed, *k);
        let mut acc = vec![Moments::default(); width];
        let n = CHUNK.min(samples - k * CHUNK);
        for _ in 0..n {
            sample(&mut rng, &mut acc);
        }
        acc
    });
    let mut total = vec![Moments::default(); width];
    for p in &parts {
        for (t, x) in total.iter_mut().zip(p) {
            t.merge(x);
        }
    }
    total
}

fn random_unit(rng: &mut impl Rng, d: usize) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..d).map(|_| StandardNormal.sample(rng)).collect();
        if let Some(u) = normalize(&v) {
            return u;
        }
    }
}

/// `(d-1)`-volume of the orthogonal projection of the body onto `u^⊥`.
fn shadow_volume(body: &ConvexBody, u: &[f64]) -> Result<f64> {
    let d = body.dim();
    match body {
        ConvexBody::Ellipsoid(el) => Ok(ellipsoid_shadow(el, u)),
        ConvexBody::Polytope(p) => {
            let basis = complement_basis(u);
            match d {
                2 => {
                    let w = &basis[0];
                    let vals = p.vertices().iter().map(|v| dot(v, w));
                    let (lo, hi) = vals.fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), x| (a.min(x), b.max(x)));
                    Ok(hi - lo)
                }
                3 => {
                    let pts: Vec<[f64; 2]> =
                        p.vertices().iter().map(|v| [dot(v, &basis[0]), dot(v, &basis[1])]).collect();
                    Ok(polygon_area(&convex_hull_2d(&pts)))
                }
                4 => {
                    let pts: Vec<Vec<f64>> =
                        p.vertices().iter().map(|v| basis.iter().map(|b| dot(v, b)).collect()).collect();
                    Ok(crate::body::hull(&pts)?.volume())
                }
                _ => Err(Error::UnsupportedDimension(d)),
            }
        }
    }
}

/// The shadow of `c + A B` on `u^⊥` is an ellipsoid of volume
/// `κ_{d-1} det A |A^{-1} u|`.
fn ellipsoid_shadow(el: &Ellipsoid, u: &[f64]) -> f64 {
    let d = el.dim();
    unit_ball_volume(d - 1) * el.det() * linalg::norm(&el.inverse_apply(u))
}

/// Boundary area via Cauchy's formula `|∂C| = (d κ_d / κ_{d-1}) E|shadow|`
/// over uniformly random directions.
pub fn mc_boundary_area(body: &ConvexBody, samples: usize, seed: u64) -> Result<McEstimate> {
    if samples < 2 {
        return Err(Error::InvalidInput("need at least two samples".into()));
    }
    let d = body.dim();
    let k = d as f64 * unit_ball_volume(d) / unit_ball_volume(d - 1);
    // a 4D shadow goes through the hull kernel, which can fail
    let failed = std::sync::Mutex::new(None);
    let acc = run_chunks(samples, seed, 1, |rng, acc| {
        let u = random_unit(rng, d);
        match shadow_volume(body, &u) {
            Ok(s) => acc[0].push(k * s),
            Err(e) => {
                failed.lock().unwrap().get_or_insert(e);
            }
        }
    });
    if let Some(e) = failed.into_inner().unwrap() {
        return Err(e);
    }
    let (value, std_error) = acc[0].estimate(samples);
    Ok(McEstimate { value, std_error, samples, seed })
}

/// One bin of an estimated cap measure.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BinEstimate {
    /// Mean normal of the samples in the bin.
    pub dir: Vec<f64>,
    pub weight: McEstimate,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CapMeasureEstimate {
    pub bins: Vec<BinEstimate>,
    pub mass: McEstimate,
    pub resultant: Vec<McEstimate>,
    pub side_area: McEstimate,
    pub base_area: McEstimate,
}

/// Area-weighted sampler over the boundary simplices of a polytope that
/// reach the slab `<x - r0, e> >= -t`.
struct PieceSampler<'a> {
    poly: &'a Polytope,
    pieces: Vec<(usize, Vec<usize>)>,
    cdf: Vec<f64>,
    total: f64,
}

impl<'a> PieceSampler<'a> {
    fn new(poly: &'a Polytope, r0: &[f64], e: &[f64], t: f64) -> Self {
        let d = poly.dim();
        let fact = linalg::factorial(d - 1);
        let mut pieces = Vec::new();
        let mut cdf = Vec::new();
        let mut total = 0.0;
        for (fi, f) in poly.facets().iter().enumerate() {
            for s in &f.pieces {
                let reach = s.iter().map(|i| dot(&sub(&poly.vertices()[*i], r0), e)).fold(f64::NEG_INFINITY, f64::max);
                if reach < -t {
                    continue;
                }
                let base = &poly.vertices()[s[0]];
                let edges: Vec<Vec<f64>> = s[1..].iter().map(|i| sub(&poly.vertices()[*i], base)).collect();
                let area = linalg::norm(&linalg::cross(&edges)) / fact;
                total += area;
                pieces.push((fi, s.clone()));
                cdf.push(total);
            }
        }
        PieceSampler { poly, pieces, cdf, total }
    }

    /// Uniform point on the union of pieces and its facet index.
    fn sample(&self, rng: &mut impl Rng) -> (usize, Vec<f64>) {
        let x = rng.random_range(0.0..self.total);
        let k = self.cdf.partition_point(|c| *c <= x).min(self.pieces.len() - 1);
        let (fi, s) = &self.pieces[k];
        // uniform barycentric weights from sorted uniforms
        let mut cuts: Vec<f64> = (0..s.len() - 1).map(|_| rng.random_range(0.0..1.0)).collect();
        cuts.push(0.0);
        cuts.push(1.0);
        cuts.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let mut p = vec![0.0; self.poly.dim()];
        for (j, i) in s.iter().enumerate() {
            p = linalg::axpy(&p, cuts[j + 1] - cuts[j], &self.poly.vertices()[*i]);
        }
        (*fi, p)
    }
}

/// Box in the cutting plane's coordinates that contains `B_t`, plus a
/// membership test for the body.
struct BaseBox {
    origin: Vec<f64>,
    basis: Vec<Vec<f64>>,
    lo: Vec<f64>,
    hi: Vec<f64>,
}

impl BaseBox {
    fn new(body: &ConvexBody, r0: &[f64], e: &[f64], t: f64) -> Self {
        let origin = linalg::axpy(r0, -t, e);
        let basis = complement_basis(e);
        let k = basis.len();
        let (mut lo, mut hi) = (vec![f64::INFINITY; k], vec![f64::NEG_INFINITY; k]);
        match body {
            ConvexBody::Polytope(p) => {
                // B_t lies in the hull of all crossings of vertex-pair segments
                let vs = p.vertices();
                let lvl: Vec<f64> = vs.iter().map(|v| dot(&sub(v, &origin), e)).collect();
                for i in 0..vs.len() {
                    for j in i..vs.len() {
                        let x = if i == j {
                            if lvl[i].abs() > 1e-15 {
                                continue;
                            }
                            vs[i].clone()
                        } else if (lvl[i] >= 0.0) != (lvl[j] >= 0.0) {
                            let lam = lvl[i] / (lvl[i] - lvl[j]);
                            linalg::axpy(&vs[i], lam, &sub(&vs[j], &vs[i]))
                        } else {
                            continue;
                        };
                        let y = sub(&x, &origin);
                        for (m, b) in basis.iter().enumerate() {
                            let c = dot(b, &y);
                            lo[m] = lo[m].min(c);
                            hi[m] = hi[m].max(c);
                        }
                    }
                }
            }
            ConvexBody::Ellipsoid(_) => {
                for (m, b) in basis.iter().enumerate() {
                    let nb = linalg::scale(b, -1.0);
                    hi[m] = body.h(b) - dot(b, &origin);
                    lo[m] = -(body.h(&nb) + dot(&nb, &origin));
                }
            }
        }
        BaseBox { origin, basis, lo, hi }
    }

    fn volume(&self) -> f64 {
        self.lo.iter().zip(&self.hi).map(|(a, b)| (b - a).max(0.0)).product()
    }

    fn sample(&self, rng: &mut impl Rng) -> Vec<f64> {
        let mut x = self.origin.clone();
        for (m, b) in self.basis.iter().enumerate() {
            let c = if self.hi[m] > self.lo[m] { rng.random_range(self.lo[m]..self.hi[m]) } else { self.lo[m] };
            x = linalg::axpy(&x, c, b);
        }
        x
    }
}

fn inside(body: &ConvexBody, x: &[f64]) -> bool {
    match body {
        ConvexBody::Polytope(p) => p.facets().iter().all(|f| dot(&f.normal, x) <= f.offset),
        ConvexBody::Ellipsoid(el) => el.level(x) <= 1.0,
    }
}

/// Estimate `ν_t` by sampling the boundary inside the slab and binning the
/// normals: by facet for polytopes, by polar angle from `e` (`bins` rings)
/// for analytic bodies. `|B_t|` is estimated independently by hit-or-miss in
/// a box around the base.
pub fn mc_cap_measure(
    body: &ConvexBody,
    r0: &[f64],
    e: &[f64],
    t: f64,
    bins: usize,
    samples: usize,
    seed: u64,
) -> Result<CapMeasureEstimate> {
    // validates the cap
    crate::body::cut_cap(body, r0, e, t)?;
    if samples < 2 {
        return Err(Error::InvalidInput("need at least two samples".into()));
    }
    let d = body.dim();
    let bins = bins.max(1);
    let depth = |x: &[f64]| dot(&sub(x, r0), e);

    // layout: [mass, side area, resultant (d), bins (nb), bin normals (nb * d)]
    let (nb, side) = match body {
        ConvexBody::Polytope(p) => {
            let sampler = PieceSampler::new(p, r0, e, t);
            let nb = p.facets().len();
            let width = 2 + d + nb + nb * d;
            let total = sampler.total;
            let acc = run_chunks(samples, seed, width, |rng, acc| {
                let (fi, x) = sampler.sample(rng);
                if depth(&x) < -t {
                    for a in acc.iter_mut() {
                        a.push(0.0);
                    }
                    return;
                }
                let n = &p.facets()[fi].normal;
                push_hit(acc, d, nb, fi, total, n);
            });
            (nb, acc)
        }
        ConvexBody::Ellipsoid(el) => {
            let total = linalg::unit_sphere_area(d - 1);
            let width = 2 + d + bins + bins * d;
            let acc = run_chunks(samples, seed, width, |rng, acc| {
                let u = random_unit(rng, d);
                let x = linalg::add(&el.center, &el.apply(&u));
                if depth(&x) < -t {
                    for a in acc.iter_mut() {
                        a.push(0.0);
                    }
                    return;
                }
                let g = el.inverse_apply(&u);
                let w = total * el.det() * linalg::norm(&g);
                let n = normalize(&g).unwrap();
                let ang = linalg::angle(&n, e);
                let b = ((ang / std::f64::consts::PI * bins as f64) as usize).min(bins - 1);
                push_hit(acc, d, bins, b, w, &n);
            });
            (bins, acc)
        }
    };

    let bbox = BaseBox::new(body, r0, e, t);
    let vol = bbox.volume();
    let base = run_chunks(samples, seed ^ 0x9e37_79b9_7f4a_7c15, 1, |rng, acc| {
        let x = bbox.sample(rng);
        acc[0].push(if inside(body, &x) { vol } else { 0.0 });
    });
    let (b, sb) = base[0].estimate(samples);
    if !(b > 0.0) {
        return Err(Error::DegenerateCap);
    }
    let est = |m: &Moments| m.estimate(samples);
    // ratio X / B with independent estimates: delta method
    let ratio = |m: &Moments| -> McEstimate {
        let (x, sx) = est(m);
        let value = x / b;
        let std_error = ((sx / b).powi(2) + (x * sb / (b * b)).powi(2)).sqrt();
        McEstimate { value, std_error, samples, seed }
    };
    let (sa, ssa) = est(&side[1]);
    let mut bins_out = Vec::new();
    for k in 0..nb {
        let m = &side[2 + d + k];
        if m.sum <= 0.0 {
            continue;
        }
        let dir_sum: Vec<f64> = (0..d).map(|c| side[2 + d + nb + k * d + c].sum).collect();
        if let Some(dir) = normalize(&dir_sum) {
            bins_out.push(BinEstimate { dir, weight: ratio(m) });
        }
    }
    Ok(CapMeasureEstimate {
        bins: bins_out,
        mass: ratio(&side[0]),
        resultant: (0..d).map(|c| ratio(&side[2 + c])).collect(),
        side_area: McEstimate { value: sa, std_error: ssa, samples, seed },
        base_area: McEstimate { value: b, std_error: sb, samples, seed },
    })
}

/// Record one accepted sample of area weight `w` and normal `n` in bin `bin`.
fn push_hit(acc: &mut [Moments], d: usize, nb: usize, bin: usize, w: f64, n: &[f64]) {
    acc[0].push(w);
    acc[1].push(w);
    for c in 0..d {
        acc[2 + c].push(w * n[c]);
    }
    for k in 0..nb {
        acc[2 + d + k].push(if k == bin { w } else { 0.0 });
    }
    for k in 0..nb {
        for c in 0..d {
            acc[2 + d + nb + k * d + c].push(if k == bin { w * n[c] } else { 0.0 });
        }
    }
}
