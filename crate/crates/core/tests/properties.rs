use capflow::body::{cut_cap, hull, ConvexBody};
use capflow::instances;
use capflow::limits::Schedule;
use capflow::linalg::{dist, normalize, scale};
use capflow::measure::{boundary_measure, induced_measure, nu_t, Atom, SphericalMeasure};
use capflow::newton::{resistance, Method};
use capflow::transport::bl_distance;
use proptest::prelude::*;
use rand::Rng;

fn cap_measure(body: &ConvexBody, r0: &[f64], e: &[f64], t: f64) -> SphericalMeasure {
    nu_t(&cut_cap(body, r0, e, t).unwrap()).unwrap()
}

fn random_measure(seed: u64, d: usize, n: usize) -> SphericalMeasure {
    let mut rng = instances::rng(seed);
    let atoms = (0..n)
        .map(|_| Atom { dir: instances::random_unit(&mut rng, d), weight: rng.random_range(0.01..1.0) })
        .collect();
    SphericalMeasure::new(d, atoms).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn cap_measure_is_invariant_under_homothety(seed in any::<u64>(), d in 2usize..=4, k in 0.1f64..10.0, frac in 0.01f64..0.9) {
        let mut rng = instances::rng(seed);
        let p = instances::random_polytope(&mut rng, d, 12).unwrap();
        let sp = instances::random_support_point(&mut rng, &p);
        let body = ConvexBody::Polytope(p.clone());
        let t = frac * body.width(&sp.e);
        let shift: Vec<f64> = (0..d).map(|_| rng.random_range(-3.0..3.0)).collect();
        let moved = ConvexBody::Polytope(p.scaled_about(&vec![0.0; d], k).translated(&shift));
        let r1: Vec<f64> = scale(&sp.r0, k).iter().zip(&shift).map(|(a, b)| a + b).collect();
        let a = cap_measure(&body, &sp.r0, &sp.e, t);
        let b = cap_measure(&moved, &r1, &sp.e, k * t);
        prop_assert!(bl_distance(&a, &b).unwrap() <= 1e-9 * a.total_mass().max(1.0));
    }

    #[test]
    fn resultant_identity(seed in any::<u64>(), d in 2usize..=4, frac in 0.001f64..0.95) {
        let mut rng = instances::rng(seed);
        let p = instances::random_polytope(&mut rng, d, 16).unwrap();
        let sp = instances::random_support_point(&mut rng, &p);
        let body = ConvexBody::Polytope(p);
        let nu = cap_measure(&body, &sp.r0, &sp.e, frac * body.width(&sp.e));
        prop_assert!(dist(&nu.resultant(), &sp.e) <= 1e-9);
    }

    #[test]
    fn induced_measure_is_additive(seed in any::<u64>(), d in 2usize..=4, cut in 0usize..100) {
        let mut rng = instances::rng(seed);
        let p = instances::random_polytope(&mut rng, d, 14).unwrap();
        let k = cut % p.facets().len();
        let (a, b) = p.facets().split_at(k);
        let sum = induced_measure(d, a).sum(&induced_measure(d, b)).unwrap();
        let whole = boundary_measure(&p);
        prop_assert!(bl_distance(&sum, &whole).unwrap() <= 1e-12 * whole.total_mass());
        prop_assert!((sum.total_mass() - p.boundary_area()).abs() <= 1e-12 * p.boundary_area());
    }

    #[test]
    fn hull_is_idempotent(seed in any::<u64>(), d in 2usize..=4) {
        let mut rng = instances::rng(seed);
        let p = instances::random_polytope(&mut rng, d, 20).unwrap();
        let q = hull(p.vertices()).unwrap();
        prop_assert_eq!(p.vertices().len(), q.vertices().len());
        prop_assert_eq!(p.facets().len(), q.facets().len());
        prop_assert!((p.volume() - q.volume()).abs() <= 1e-12 * p.volume());
        prop_assert!(p.vertices().iter().all(|v| q.contains(v, 1e-12)));
    }

    #[test]
    fn cap_mass_grows_as_the_cap_shrinks(seed in any::<u64>(), d in 2usize..=4) {
        // |S_t| >= |B_t| by projection, so the normalized mass never drops below 1
        let mut rng = instances::rng(seed);
        let p = instances::random_polytope(&mut rng, d, 12).unwrap();
        let sp = instances::random_support_point(&mut rng, &p);
        let body = ConvexBody::Polytope(p);
        for t in Schedule::default_for(body.width(&sp.e)).values() {
            prop_assert!(cap_measure(&body, &sp.r0, &sp.e, t).total_mass() >= 1.0 - 1e-12);
        }
    }

    #[test]
    fn bl_distance_is_a_metric(s1 in any::<u64>(), s2 in any::<u64>(), s3 in any::<u64>(), d in 2usize..=4) {
        let (a, b, c) = (random_measure(s1, d, 6), random_measure(s2, d, 5), random_measure(s3, d, 7));
        let ab = bl_distance(&a, &b).unwrap();
        prop_assert!(ab >= 0.0);
        prop_assert!(bl_distance(&a, &a).unwrap() <= 1e-12);
        prop_assert!((ab - bl_distance(&b, &a).unwrap()).abs() <= 1e-12);
        prop_assert!(ab <= bl_distance(&a, &c).unwrap() + bl_distance(&c, &b).unwrap() + 1e-12);
        prop_assert!(ab <= a.total_mass() + b.total_mass());
    }

    #[test]
    fn resistance_is_rotation_invariant(seed in any::<u64>(), angle in 0.0f64..6.3) {
        let mut rng = instances::rng(seed);
        let f = instances::random_convex_pl(&mut rng, 12, 2.0).unwrap();
        let a = resistance(&f, Method::Exact).unwrap();
        let b = resistance(&f.rotated(angle).unwrap(), Method::Exact).unwrap();
        prop_assert!((a - b).abs() <= 1e-12 * a);
    }

    #[test]
    fn dirac_distance_closed_form(seed in any::<u64>(), d in 2usize..=4, w in 0.1f64..3.0) {
        let mut rng = instances::rng(seed);
        let u = instances::random_unit(&mut rng, d);
        let v = normalize(&instances::random_unit(&mut rng, d)).unwrap();
        let a = SphericalMeasure::dirac(&u).unwrap().scaled(w);
        let b = SphericalMeasure::dirac(&v).unwrap();
        let angle = capflow::linalg::angle(&u, &v);
        let expect = (w - 1.0).abs() + w.min(1.0) * angle.min(2.0);
        prop_assert!((bl_distance(&a, &b).unwrap() - expect).abs() <= 1e-12);
    }
}
