//! Randomized verification suites. Each suite returns one diagnostic row per
//! checked instance; instance `i` of a run with seed `s` is generated from
//! [`instance_seed`]`(s, i)` alone, so rows can be reproduced individually.

use crate::body::{cut_cap, unit_cube, CapShape, ConvexBody, Ellipsoid};
use crate::bounds::{
    check_nesting, check_perimeter_bound, check_slab_bound, flagged_ratio, inscribed_ball_from_segments,
    unit_section_depth, SlabProfile,
};
use crate::cone::{nu_star, tangent_cone};
use crate::error::{Error, Result};
use crate::instances::{self, random_unit};
use crate::io::Diagnostic;
use crate::limits::{limit_2d, run_convergence, Schedule};
use crate::linalg::{self, dist, norm, normalize};
use crate::measure::{nu_t, SphericalMeasure};
use crate::newton::{resistance, ConvexGraphFn, Domain, GraphKind, Method};
use crate::oracle::{mc_boundary_area, mc_cap_measure};
use crate::parallel::ordered_map;
use crate::transport::bl_distance;
use rand::Rng;
use std::f64::consts::{FRAC_PI_2, PI};
use std::str::FromStr;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Identities,
    Closure,
    Theorem1,
    Theorem2,
    Props,
    Remark1,
    Oracle,
    Newton,
    All,
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "identities" => Suite::Identities,
            "closure" => Suite::Closure,
            "theorem1" => Suite::Theorem1,
            "theorem2" => Suite::Theorem2,
            "props" => Suite::Props,
            "remark1" => Suite::Remark1,
            "oracle" => Suite::Oracle,
            "newton" => Suite::Newton,
            "all" => Suite::All,
            _ => return Err(Error::Parse(format!("unknown suite `{s}`"))),
        })
    }
}

/// Sizes of the randomized suites; `None` fields take the defaults.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SuiteOptions {
    pub seed: u64,
    /// Instance count override applied to every randomized check.
    pub n: Option<usize>,
    /// Monte Carlo sample count.
    pub samples: usize,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        SuiteOptions { seed: 0, n: None, samples: 1_000_000 }
    }
}

impl SuiteOptions {
    fn count(&self, default: usize) -> usize {
        self.n.unwrap_or(default)
    }
}

pub fn instance_seed(seed: u64, i: usize) -> u64 {
    seed.wrapping_mul(1_000_003).wrapping_add(i as u64)
}

fn row(name: &str, seed: u64, lhs: f64, rhs: f64, holds: bool) -> Diagnostic {
    Diagnostic { proposition: name.to_string(), seed, lhs, rhs, holds }
}

/// `lhs <= rhs`; NaN never holds.
fn le(name: &str, seed: u64, lhs: f64, rhs: f64) -> Diagnostic {
    row(name, seed, lhs, rhs, lhs <= rhs)
}

fn failed(name: &str, seed: u64, rhs: f64) -> Diagnostic {
    row(name, seed, f64::INFINITY, rhs, false)
}

fn per_instance(count: usize, seed: u64, f: impl Fn(u64) -> Vec<Diagnostic> + Sync + Send) -> Vec<Diagnostic> {
    let seeds: Vec<u64> = (0..count).map(|i| instance_seed(seed, i)).collect();
    ordered_map(&seeds, |s| f(*s)).into_iter().flatten().collect()
}

pub fn run(suite: Suite, opts: &SuiteOptions) -> Vec<Diagnostic> {
    match suite {
        Suite::Identities => identities(opts),
        Suite::Closure => closure(opts),
        Suite::Theorem1 => theorem1(opts),
        Suite::Theorem2 => theorem2(opts),
        Suite::Props => props(opts),
        Suite::Remark1 => remark1(opts),
        Suite::Oracle => oracle(opts),
        Suite::Newton => newton(opts),
        Suite::All => [
            Suite::Identities,
            Suite::Closure,
            Suite::Theorem1,
            Suite::Theorem2,
            Suite::Props,
            Suite::Remark1,
            Suite::Oracle,
            Suite::Newton,
        ]
        .iter()
        .flat_map(|s| run(*s, opts))
        .collect(),
    }
}

/// `|resultant(ν_t) - e|` over random polytopes in dimensions 2 to 4, random
/// support points and five depths each.
pub fn identities(opts: &SuiteOptions) -> Vec<Diagnostic> {
    per_instance(opts.count(200), opts.seed, |s| {
        let mut rng = instances::rng(s);
        let d = 2 + (s % 3) as usize;
        let n = rng.random_range(d + 2..30);
        let mut check = || -> Result<f64> {
            let p = instances::random_polytope(&mut rng, d, n)?;
            let sp = instances::random_support_point(&mut rng, &p);
            let body = ConvexBody::Polytope(p);
            let width = body.width(&sp.e);
            let mut worst: f64 = 0.0;
            for _ in 0..5 {
                let t = width * 10f64.powf(rng.random_range(-3.0..-0.05));
                let nu = nu_t(&cut_cap(&body, &sp.r0, &sp.e, t)?)?;
                worst = worst.max(dist(&nu.resultant(), &sp.e));
            }
            Ok(worst)
        };
        vec![match check() {
            Ok(x) => le("identities.resultant", s, x, 1e-9),
            Err(_) => failed("identities.resultant", s, 1e-9),
        }]
    })
}

/// `|Σ area · normal|` for random polytopes and for one cap cut from each.
pub fn closure(opts: &SuiteOptions) -> Vec<Diagnostic> {
    per_instance(opts.count(200), opts.seed, |s| {
        let mut rng = instances::rng(s);
        let d = 2 + (s % 3) as usize;
        let n = rng.random_range(d + 2..40);
        let mut check = || -> Result<f64> {
            let p = instances::random_polytope(&mut rng, d, n)?;
            let mut worst = norm(&p.area_resultant());
            let sp = instances::random_support_point(&mut rng, &p);
            let body = ConvexBody::Polytope(p);
            let t = body.width(&sp.e) * rng.random_range(0.01..0.9);
            if let CapShape::Polytope { body: cap, .. } = cut_cap(&body, &sp.r0, &sp.e, t)?.shape {
                worst = worst.max(norm(&cap.area_resultant()));
            }
            Ok(worst)
        };
        vec![match check() {
            Ok(x) => le("closure", s, x, 1e-9),
            Err(_) => failed("closure", s, 1e-9),
        }]
    })
}

/// The unit ball in `R^3` with random poles, schedule
/// `t = 0.2 · 2^-k`: closed-form mass, the `2 sqrt(t)` distance bound,
/// monotone distances and the normal-angle bound.
pub fn theorem1(opts: &SuiteOptions) -> Vec<Diagnostic> {
    let schedule = Schedule { t0: 0.2, ratio: 0.5, steps: 15 };
    per_instance(opts.count(1), opts.seed, |s| {
        let mut rng = instances::rng(s);
        let c = vec![0.0; 3];
        let e = if s == instance_seed(opts.seed, 0) { vec![0.0, 0.0, 1.0] } else { random_unit(&mut rng, 3) };
        let body = ConvexBody::Ellipsoid(Ellipsoid::ball(c.clone(), 1.0).expect("unit ball"));
        let r0 = linalg::add(&c, &e);
        let limit = SphericalMeasure::dirac(&e).expect("unit");
        let rep = match run_convergence(&body, &r0, &e, &limit, &schedule) {
            Ok(r) => r,
            Err(_) => return vec![failed("theorem1", s, 0.0)],
        };
        let mass = rep.records.iter().map(|r| (r.mass - 2.0 / (2.0 - r.t)).abs()).fold(0.0, f64::max);
        let bound = rep.records.iter().map(|r| r.distance / (2.0 * r.t.sqrt())).fold(0.0, f64::max);
        let rise = rep.records.windows(2).map(|w| w[1].distance - w[0].distance).fold(f64::NEG_INFINITY, f64::max);
        let mut angle = f64::NEG_INFINITY;
        for t in schedule.values() {
            match cut_cap(&body, &r0, &e, t).and_then(|c| nu_t(&c)) {
                Ok(nu) => angle = angle.max(nu.max_angle_from(&e) - (1.0 - t).acos()),
                Err(_) => return vec![failed("theorem1.angle", s, 0.0)],
            }
        }
        vec![
            le("theorem1.mass", s, mass, 1e-12),
            le("theorem1.distance_over_2sqrt_t", s, bound, 1.0),
            le("theorem1.distance_increase", s, rise, 1e-12),
            le("theorem1.angle_excess", s, angle, 0.0),
        ]
    })
}

/// Cube corner against `ν⋆` (exact along the schedule, atoms `1/sqrt 3`,
/// Monte Carlo confirmation), then random conical vertices below their
/// truncation depth.
pub fn theorem2(opts: &SuiteOptions) -> Vec<Diagnostic> {
    let mut rows = Vec::new();
    let s0 = instance_seed(opts.seed, 0);
    let cube = ConvexBody::Polytope(unit_cube(3));
    let r0 = [1.0, 1.0, 1.0];
    let e = normalize(&r0).expect("nonzero");
    let schedule = Schedule { t0: 0.2, ratio: 0.5, steps: 15 };
    match tangent_cone(&cube, &r0).and_then(|c| nu_star(&c, &e)) {
        Ok(star) => {
            let w = 1.0 / 3f64.sqrt();
            let atom_err = if star.len() == 3 {
                star.atoms()
                    .iter()
                    .map(|a| {
                        let axis =
                            (0..3).map(|k| linalg::unit(3, k)).map(|u| dist(&u, &a.dir)).fold(f64::INFINITY, f64::min);
                        (a.weight - w).abs().max(axis)
                    })
                    .fold(0.0, f64::max)
            } else {
                f64::INFINITY
            };
            rows.push(le("theorem2.cube_atoms", s0, atom_err, 1e-9));
            match run_convergence(&cube, &r0, &e, &star, &schedule) {
                Ok(rep) => rows.push(le("theorem2.cube_distance", s0, rep.max_distance(), 1e-9)),
                Err(_) => rows.push(failed("theorem2.cube_distance", s0, 1e-9)),
            }
            match mc_cap_measure(&cube, &r0, &e, 0.1, 8, opts.samples, opts.seed) {
                Ok(est) if est.bins.len() == 3 => {
                    let z =
                        est.bins.iter().map(|b| (b.weight.value - w).abs() / b.weight.std_error).fold(0.0, f64::max);
                    rows.push(le("theorem2.cube_oracle_sigmas", opts.seed, z, 3.0));
                }
                _ => rows.push(failed("theorem2.cube_oracle_sigmas", opts.seed, 3.0)),
            }
        }
        Err(_) => rows.push(failed("theorem2.cube_atoms", s0, 1e-9)),
    }
    rows.extend(per_instance(opts.count(20), opts.seed, |s| {
        let mut rng = instances::rng(s);
        let d = [3, 2, 4][(s % 3) as usize];
        let mut check = || -> Result<f64> {
            let inst = instances::random_conical_vertex(&mut rng, d, s % 2 == 1)?;
            let body = ConvexBody::Polytope(inst.body.clone());
            let star = nu_star(&tangent_cone(&body, &inst.r0)?, &inst.e)?;
            let mut worst: f64 = 0.0;
            for k in 0..6 {
                let t = inst.depth * 0.95 * 0.5f64.powi(k);
                let nu = nu_t(&cut_cap(&body, &inst.r0, &inst.e, t)?)?;
                worst = worst.max(bl_distance(&nu, &star)?);
            }
            Ok(worst)
        };
        vec![match check() {
            Ok(x) => le("theorem2.generic_distance", s, x, 1e-9),
            Err(_) => failed("theorem2.generic_distance", s, 1e-9),
        }]
    }));
    rows
}

/// Planar wedges: `ν_t` against `λ1 δ_e1 + λ2 δ_e2` below the truncation depth.
pub fn remark1(opts: &SuiteOptions) -> Vec<Diagnostic> {
    per_instance(opts.count(50), opts.seed, |s| {
        let mut rng = instances::rng(s);
        let mut check = || -> Result<f64> {
            let w = instances::random_wedge(&mut rng)?;
            let body = ConvexBody::Polytope(w.body.clone());
            let limit = limit_2d(&w.e1, &w.e2, &w.e)?;
            let mut worst: f64 = 0.0;
            for f in [0.9, 0.5, 0.1, 0.01] {
                let nu = nu_t(&cut_cap(&body, &[0.0, 0.0], &w.e, w.depth * f)?)?;
                worst = worst.max(bl_distance(&nu, &limit)?);
            }
            Ok(worst)
        };
        vec![match check() {
            Ok(x) => le("remark1.distance", s, x, 1e-9),
            Err(_) => failed("remark1.distance", s, 1e-9),
        }]
    })
}

pub fn props(opts: &SuiteOptions) -> Vec<Diagnostic> {
    let mut rows = prop1(opts);
    rows.extend(prop2(opts));
    rows.extend(prop3(opts));
    rows.extend(prop5(opts));
    rows.extend(nesting(opts));
    rows
}

/// Perimeter bound on random polygons and 3-polytopes with certified balls.
pub fn prop1(opts: &SuiteOptions) -> Vec<Diagnostic> {
    per_instance(opts.count(1000), opts.seed, |s| {
        let mut rng = instances::rng(s);
        let k = 2 + (s % 2) as usize;
        let n = rng.random_range(k + 1..40);
        let mut check = || -> Result<(f64, f64, bool)> {
            let d = instances::random_profile(&mut rng, k, n)?;
            let center = d.centroid();
            let full = SlabProfile::certified(d.clone(), center.clone())?;
            let a = full.inradius * rng.random_range(0.3..1.0);
            let c = check_perimeter_bound(&SlabProfile::new(d, center, a)?);
            Ok((c.lhs, c.rhs, c.holds))
        };
        vec![match check() {
            Ok((l, r, h)) => row("prop1.perimeter", s, l, r, h),
            Err(_) => failed("prop1.perimeter", s, 0.0),
        }]
    })
}

/// Slab bound on random polytopes squashed to height `t`.
pub fn prop2(opts: &SuiteOptions) -> Vec<Diagnostic> {
    per_instance(opts.count(200), opts.seed, |s| {
        let mut rng = instances::rng(s);
        let d = 2 + (s % 3) as usize;
        let n = rng.random_range(d + 2..30);
        let mut check = || -> Result<(f64, f64, bool)> {
            let p = instances::random_polytope(&mut rng, d, n)?;
            let e = random_unit(&mut rng, d);
            let t = rng.random_range(0.01..0.2);
            let q = instances::squashed(&p, &e, t)?;
            let phi = rng.random_range(PI / 12.0..5.0 * PI / 12.0);
            let c = check_slab_bound(&q, &e, t, phi)?;
            Ok((c.lhs, c.rhs, c.holds))
        };
        vec![match check() {
            Ok((l, r, h)) => row("prop2.slab", s, l, r, h),
            Err(_) => failed("prop2.slab", s, 0.0),
        }]
    })
}

/// Segment-ball construction, checked by sampling `10^4` points of the ball
/// against the hull of the segment endpoints.
pub fn prop3(opts: &SuiteOptions) -> Vec<Diagnostic> {
    per_instance(opts.count(100), opts.seed, |s| {
        let mut rng = instances::rng(s);
        let k = 2 + (s % 2) as usize;
        let mut check = || -> Result<f64> {
            // random orthonormal frame by Gram-Schmidt
            let mut frame: Vec<Vec<f64>> = Vec::new();
            while frame.len() < k {
                let mut v = random_unit(&mut rng, k);
                for f in &frame {
                    v = linalg::axpy(&v, -linalg::dot(&v, f), f);
                }
                if let Some(u) = normalize(&v) {
                    frame.push(u);
                }
            }
            let len = rng.random_range(0.5..2.0);
            let segs: Vec<[Vec<f64>; 2]> = frame
                .iter()
                .map(|u| {
                    let o: Vec<f64> = (0..k).map(|_| rng.random_range(-1.0..1.0)).collect();
                    let end = linalg::axpy(&o, len, u);
                    [o, end]
                })
                .collect();
            let ball = inscribed_ball_from_segments(&segs)?;
            let h = crate::body::hull(&segs.iter().flatten().cloned().collect::<Vec<_>>())?;
            let tol = 1e-12 * h.diameter();
            let mut misses = 0;
            for _ in 0..10_000 {
                let r = ball.radius * rng.random_range(0.0f64..1.0).powf(1.0 / k as f64);
                let x = linalg::axpy(&ball.center, r, &random_unit(&mut rng, k));
                if !h.contains(&x, tol) {
                    misses += 1;
                }
            }
            Ok(misses as f64)
        };
        vec![match check() {
            Ok(x) => le("prop3.misses", s, x, 0.0),
            Err(_) => failed("prop3.misses", s, 0.0),
        }]
    })
}

/// Flagged ratio of ball caps beyond the maximal normal deviation, and its
/// decay on the 2562-vertex icosphere at a regular point.
pub fn prop5(opts: &SuiteOptions) -> Vec<Diagnostic> {
    let s = instance_seed(opts.seed, 0);
    let mut rng = instances::rng(s);
    let ball = ConvexBody::Ellipsoid(Ellipsoid::ball(vec![0.0; 3], 1.0).expect("unit ball"));
    let e = [0.0, 0.0, 1.0];
    let mut worst: f64 = 0.0;
    for t in (Schedule { t0: 0.2, ratio: 0.5, steps: 15 }).values() {
        let theta = (1.0 - t).acos();
        let phi = theta + (FRAC_PI_2 - theta) * rng.random_range(0.01..0.99);
        match cut_cap(&ball, &e, &e, t).and_then(|c| flagged_ratio(&c, phi)) {
            Ok(f) => worst = worst.max(f.ratio()),
            Err(_) => worst = f64::INFINITY,
        }
    }
    let mut rows = vec![le("prop5.ball_ratio", s, worst, 0.0)];
    let decay = || -> Result<(f64, f64)> {
        let sphere = instances::icosphere(4)?;
        let f = &sphere.facets()[0];
        let centroid = f
            .vertices
            .iter()
            .fold(vec![0.0; 3], |acc, v| linalg::axpy(&acc, 1.0 / f.vertices.len() as f64, &sphere.vertices()[*v]));
        let e = f.normal.clone();
        let body = ConvexBody::Polytope(sphere.clone());
        let ts = Schedule { t0: 0.4, ratio: 0.5, steps: 12 }.values();
        let first = flagged_ratio(&cut_cap(&body, &centroid, &e, ts[0])?, PI / 4.0)?.ratio();
        let last = flagged_ratio(&cut_cap(&body, &centroid, &e, *ts.last().unwrap())?, PI / 4.0)?.ratio();
        Ok((last, first))
    };
    rows.push(match decay() {
        Ok((last, first)) => row("prop5.icosphere_decay", s, last, 0.01 * first, first > 0.0 && last <= 0.01 * first),
        Err(_) => failed("prop5.icosphere_decay", s, 0.0),
    });
    rows
}

/// Nesting of rescaled bases on the cube corner and on bent conical vertices.
pub fn nesting(opts: &SuiteOptions) -> Vec<Diagnostic> {
    let nest = |body: &ConvexBody, r0: &[f64], e: &[f64], depth: f64| -> Result<(f64, f64)> {
        let sigma = unit_section_depth(body, r0, e)?;
        let start = (4.0 * depth).min(0.9 * body.width(e));
        let ts: Vec<f64> = (0..9).map(|k| start * 0.5f64.powi(k)).collect();
        let rep = check_nesting(body, r0, e, sigma, &ts)?;
        let bad = rep.steps.iter().filter(|s| !(s.nested && s.inside_cone)).count()
            + usize::from(!rep.hausdorff_non_increasing(1e-9 * sigma));
        let last = rep.steps.last().map_or(f64::INFINITY, |s| s.hausdorff);
        Ok((bad as f64, last))
    };
    let s0 = instance_seed(opts.seed, 0);
    let cube = ConvexBody::Polytope(unit_cube(3));
    let r0 = [1.0, 1.0, 1.0];
    let e = normalize(&r0).expect("nonzero");
    let mut rows = match nest(&cube, &r0, &e, 1.0 / 3f64.sqrt()) {
        Ok((bad, last)) => vec![le("nesting.cube", s0, bad, 0.0), le("nesting.cube_hausdorff", s0, last, 1e-9)],
        Err(_) => vec![failed("nesting.cube", s0, 0.0)],
    };
    rows.extend(per_instance(opts.count(10), opts.seed, |s| {
        let mut rng = instances::rng(s);
        let d = [3, 2, 4][(s % 3) as usize];
        let mut check = || -> Result<f64> {
            let inst = instances::random_conical_vertex(&mut rng, d, true)?;
            Ok(nest(&ConvexBody::Polytope(inst.body), &inst.r0, &inst.e, inst.depth)?.0)
        };
        vec![match check() {
            Ok(x) => le("nesting.conical", s, x, 0.0),
            Err(_) => failed("nesting.conical", s, 0.0),
        }]
    }));
    rows
}

/// Monte Carlo boundary areas of random hulls against exact facet sums, and
/// cap-measure resultants against `e`, both in standard errors.
pub fn oracle(opts: &SuiteOptions) -> Vec<Diagnostic> {
    let samples = opts.samples;
    let mut rows = per_instance(opts.count(50), opts.seed, |s| {
        let mut rng = instances::rng(s);
        let mut check = || -> Result<f64> {
            let p = instances::random_sphere_hull(&mut rng, 3, 20)?;
            let exact = p.boundary_area();
            let est = mc_boundary_area(&ConvexBody::Polytope(p), samples, s)?;
            Ok((est.value - exact).abs() / est.std_error)
        };
        vec![match check() {
            Ok(z) => le("oracle.boundary_area_sigmas", s, z, 3.0),
            Err(_) => failed("oracle.boundary_area_sigmas", s, 3.0),
        }]
    });
    let cube = ConvexBody::Polytope(unit_cube(3));
    let ball = ConvexBody::Ellipsoid(Ellipsoid::ball(vec![0.0; 3], 1.0).expect("unit ball"));
    let corner = normalize(&[1.0, 1.0, 1.0]).expect("nonzero");
    let pole = vec![0.0, 0.0, 1.0];
    let cases: [(&str, &ConvexBody, Vec<f64>, Vec<f64>); 2] = [
        ("oracle.cube_cap_resultant_sigmas", &cube, vec![1.0; 3], corner),
        ("oracle.ball_cap_resultant_sigmas", &ball, pole.clone(), pole),
    ];
    for (name, body, r0, e) in cases {
        rows.push(match mc_cap_measure(body, &r0, &e, 0.1, 16, samples, opts.seed) {
            Ok(est) => {
                let z =
                    est.resultant.iter().zip(&e).map(|(r, x)| (r.value - x).abs() / r.std_error).fold(0.0, f64::max);
                le(name, opts.seed, z, 3.0)
            }
            Err(_) => failed(name, opts.seed, 3.0),
        });
    }
    rows
}

/// Closed forms and piecewise-linear versus quadrature agreement.
pub fn newton(opts: &SuiteOptions) -> Vec<Diagnostic> {
    let s0 = instance_seed(opts.seed, 0);
    let disk = Domain::Disk { center: [0.0, 0.0], radius: 1.0 };
    let eval = |kind: GraphKind, m: f64| {
        ConvexGraphFn::new(disk.clone(), kind, m).and_then(|f| resistance(&f, Method::Exact)).unwrap_or(f64::NAN)
    };
    let mut rows = vec![
        le("newton.flat_disk", s0, (eval(GraphKind::Flat { c: 0.0 }, 1.0) - PI).abs(), 1e-12),
        le("newton.cone_m1", s0, (eval(GraphKind::Cone, 1.0) - FRAC_PI_2).abs(), 1e-12),
    ];
    rows.extend(per_instance(opts.count(20), opts.seed, |s| {
        let mut rng = instances::rng(s);
        let mut check = || -> Result<f64> {
            let n = rng.random_range(3..30);
            let m = rng.random_range(0.5..3.0);
            let f = instances::random_convex_pl(&mut rng, n, m)?;
            let exact = resistance(&f, Method::Exact)?;
            let quad = resistance(&f, Method::Quadrature { panels: 2 })?;
            let rot = resistance(&f.rotated(rng.random_range(0.0..2.0 * PI))?, Method::Exact)?;
            Ok((exact - quad).abs().max((exact - rot).abs()))
        };
        vec![match check() {
            Ok(x) => le("newton.pl_vs_quadrature", s, x, 1e-6),
            Err(_) => failed("newton.pl_vs_quadrature", s, 1e-6),
        }]
    }));
    rows
}

/// Rows per proposition name: `(name, passed, total)`, in first-seen order.
pub fn summarize(rows: &[Diagnostic]) -> Vec<(String, usize, usize)> {
    let mut out: Vec<(String, usize, usize)> = Vec::new();
    for r in rows {
        match out.iter_mut().find(|(n, _, _)| *n == r.proposition) {
            Some(e) => {
                e.1 += usize::from(r.holds);
                e.2 += 1;
            }
            None => out.push((r.proposition.clone(), usize::from(r.holds), 1)),
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small(seed: u64) -> SuiteOptions {
        SuiteOptions { seed, n: Some(4), samples: 20_000 }
    }

    #[test]
    fn suites_pass_on_small_runs() {
        for suite in [Suite::Identities, Suite::Closure, Suite::Theorem1, Suite::Remark1, Suite::Newton] {
            let rows = run(suite, &small(1));
            assert!(!rows.is_empty());
            for r in &rows {
                assert!(r.holds, "{r:?}");
            }
        }
    }

    #[test]
    fn rows_are_reproducible() {
        let a = identities(&small(9));
        let b = identities(&small(9));
        assert_eq!(a, b);
    }

    #[test]
    fn suite_names() {
        assert_eq!("props".parse::<Suite>().unwrap(), Suite::Props);
        assert!(matches!("nope".parse::<Suite>(), Err(Error::Parse(_))));
    }
}
