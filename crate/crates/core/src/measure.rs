//! Finite atomic measures on the unit sphere and the surface-area measures
//! induced by boundary pieces.

use crate::body::{CapCut, CapShape, Ellipsoid, EllipsoidCap, Facet};
use crate::error::{Error, Result};
use crate::linalg::{self, axpy, complement_basis, dot, norm, normalize, scale, sub};
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Atoms closer than this (radians) are merged.
pub const ATOM_MERGE_ANGLE: f64 = 1e-9;
/// Default number of latitude rings for analytic caps.
pub const DEFAULT_RINGS: usize = 256;
/// Azimuthal atoms per ring for three-dimensional analytic caps.
pub const DEFAULT_SECTORS: usize = 8;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Atom {
    pub dir: Vec<f64>,
    #[serde(rename = "w")]
    pub weight: f64,
}

/// Nonnegative atomic measure on S^{d-1} in canonical form: unit directions,
/// positive weights, no two atoms within [`ATOM_MERGE_ANGLE`], sorted.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SphericalMeasure {
    dim: usize,
    atoms: Vec<Atom>,
}

impl SphericalMeasure {
    pub fn zero(dim: usize) -> Self {
        SphericalMeasure { dim, atoms: Vec::new() }
    }

    /// Unit atom at `dir`.
    pub fn dirac(dir: &[f64]) -> Result<Self> {
        Self::new(dir.len(), vec![Atom { dir: dir.to_vec(), weight: 1.0 }])
    }

    pub fn new(dim: usize, atoms: Vec<Atom>) -> Result<Self> {
        for a in &atoms {
            if a.dir.len() != dim {
                return Err(Error::DimensionMismatch { expected: dim, got: a.dir.len() });
            }
            if (norm(&a.dir) - 1.0).abs() > 1e-9 {
                return Err(Error::InvalidInput(format!("atom direction {:?} is not a unit vector", a.dir)));
            }
            if !(a.weight >= 0.0) || !a.weight.is_finite() {
                return Err(Error::InvalidInput(format!("atom weight {} is not a nonnegative number", a.weight)));
            }
        }
        let atoms = atoms
            .into_iter()
            .filter(|a| a.weight > 0.0)
            .map(|a| Atom { dir: normalize(&a.dir).unwrap(), weight: a.weight })
            .collect();
        Ok(Self::canonical(dim, atoms))
    }

    fn canonical(dim: usize, atoms: Vec<Atom>) -> Self {
        let dirs: Vec<Vec<f64>> = atoms.iter().map(|a| a.dir.clone()).collect();
        let ids = linalg::cluster_directions(&dirs, ATOM_MERGE_ANGLE);
        let n = ids.iter().cloned().max().map_or(0, |m| m + 1);
        let mut sums = vec![(vec![0.0; dim], 0.0, 0.0f64, 0usize); n];
        for (idx, (a, c)) in atoms.iter().zip(&ids).enumerate() {
            let s = &mut sums[*c];
            for k in 0..dim {
                s.0[k] += a.weight * a.dir[k];
            }
            s.1 += a.weight;
            // Keep the heaviest member's direction when the weighted mean
            // degenerates; otherwise use the mean.
            if a.weight > s.2 {
                s.2 = a.weight;
                s.3 = idx;
            }
        }
        let mut merged: Vec<Atom> = sums
            .into_iter()
            .map(|(v, w, _, heaviest)| Atom {
                dir: normalize(&v).unwrap_or_else(|| atoms[heaviest].dir.clone()),
                weight: w,
            })
            .collect();
        merged.sort_by(|a, b| a.dir.partial_cmp(&b.dir).unwrap_or(std::cmp::Ordering::Equal));
        SphericalMeasure { dim, atoms: merged }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn total_mass(&self) -> f64 {
        self.atoms.iter().map(|a| a.weight).sum()
    }

    /// `sum weight * direction`
    pub fn resultant(&self) -> Vec<f64> {
        let mut r = vec![0.0; self.dim];
        for a in &self.atoms {
            for k in 0..self.dim {
                r[k] += a.weight * a.dir[k];
            }
        }
        r
    }

    pub fn scaled(&self, k: f64) -> Self {
        assert!(k >= 0.0);
        if k == 0.0 {
            return Self::zero(self.dim);
        }
        SphericalMeasure {
            dim: self.dim,
            atoms: self.atoms.iter().map(|a| Atom { dir: a.dir.clone(), weight: a.weight * k }).collect(),
        }
    }

    pub fn sum(&self, other: &Self) -> Result<Self> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, got: other.dim });
        }
        let mut atoms = self.atoms.clone();
        atoms.extend(other.atoms.iter().cloned());
        Ok(Self::canonical(self.dim, atoms))
    }

    /// Integral of a test function.
    pub fn integrate(&self, f: impl Fn(&[f64]) -> f64) -> f64 {
        self.atoms.iter().map(|a| a.weight * f(&a.dir)).sum()
    }

    /// Largest angle between `axis` and an atom direction.
    pub fn max_angle_from(&self, axis: &[f64]) -> f64 {
        self.atoms.iter().map(|a| linalg::angle(&a.dir, axis)).fold(0.0, f64::max)
    }

    /// Merge atoms into angular cells of size `cell` (radians) by quantizing
    /// coordinates; used to cap the size of distance computations.
    pub fn coarsened(&self, cell: f64) -> Self {
        let mut groups: std::collections::BTreeMap<Vec<i64>, (Vec<f64>, f64)> = Default::default();
        for a in &self.atoms {
            let key: Vec<i64> = a.dir.iter().map(|x| (x / cell).floor() as i64).collect();
            let g = groups.entry(key).or_insert((vec![0.0; self.dim], 0.0));
            for k in 0..self.dim {
                g.0[k] += a.weight * a.dir[k];
            }
            g.1 += a.weight;
        }
        let atoms =
            groups.into_values().filter_map(|(v, w)| normalize(&v).map(|dir| Atom { dir, weight: w })).collect();
        Self::canonical(self.dim, atoms)
    }
}

impl<'de> Deserialize<'de> for SphericalMeasure {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            dim: usize,
            atoms: Vec<Atom>,
        }
        let raw = Raw::deserialize(de)?;
        SphericalMeasure::new(raw.dim, raw.atoms).map_err(serde::de::Error::custom)
    }
}

/// Surface-area measure of a union of facets: one atom per distinct normal
/// carrying the summed facet area.
pub fn induced_measure(dim: usize, facets: &[Facet]) -> SphericalMeasure {
    let atoms =
        facets.iter().filter(|f| f.area > 0.0).map(|f| Atom { dir: f.normal.clone(), weight: f.area }).collect();
    SphericalMeasure::canonical(dim, atoms)
}

/// Normalized cap measure `nu_t = nu_{S_t} / |B_t|`.
pub fn nu_t(cap: &CapCut) -> Result<SphericalMeasure> {
    nu_t_with(cap, DEFAULT_RINGS, DEFAULT_SECTORS)
}

/// [`nu_t`] with an explicit discretization for analytic caps.
pub fn nu_t_with(cap: &CapCut, rings: usize, sectors: usize) -> Result<SphericalMeasure> {
    if !(cap.base_area > 0.0) {
        return Err(Error::DegenerateCap);
    }
    let d = cap.dim();
    let side = match &cap.shape {
        CapShape::Polytope { side_facets, .. } => induced_measure(d, side_facets),
        CapShape::Ellipsoid(c) => ellipsoid_cap_measure(c, &cap.e, cap.t, rings, sectors),
    };
    Ok(side.scaled(1.0 / cap.base_area))
}

/// Surface-area measure of the full boundary of a polytope.
pub fn boundary_measure(p: &crate::body::Polytope) -> SphericalMeasure {
    induced_measure(p.dim(), p.facets())
}

/// One quadrature cell of an ellipsoidal cap.
#[derive(Debug, Clone)]
pub struct CapCell {
    /// Surface area of the cell.
    pub mass: f64,
    /// Integral of the outward normal over the cell.
    pub flux: Vec<f64>,
    /// Direction along which the normal turns across the cell.
    pub spread: Vec<f64>,
}

const GAUSS4: [(f64, f64); 4] = [
    (-0.861_136_311_594_052_6, 0.347_854_845_137_453_85),
    (-0.339_981_043_584_856_26, 0.652_145_154_862_546_1),
    (0.339_981_043_584_856_26, 0.652_145_154_862_546_1),
    (0.861_136_311_594_052_6, 0.347_854_845_137_453_85),
];

/// Quadrature cells of the part of the ellipsoid boundary within depth `t`
/// of the support plane with outward normal `e`.
///
/// The boundary is parametrized by the unit sphere through `x = c + A u`;
/// there the area element is `det A |A^{-1} u| dσ(u)` and the normal is
/// parallel to `A^{-1} u`, and the cap is the spherical cap around
/// `A e / |A e|` with `cos θ >= 1 - t / |A e|`.
pub fn ellipsoid_cap_cells(el: &Ellipsoid, e: &[f64], t: f64, rings: usize, sectors: usize) -> Vec<CapCell> {
    let d = el.dim();
    let h0 = el.stretch(e);
    let axis: Vec<f64> = e.iter().zip(&el.semi_axes).map(|(x, a)| x * a / h0).collect();
    let cos_max = (1.0 - t / h0).clamp(-1.0, 1.0);
    let theta_max = cos_max.acos();
    let basis = complement_basis(&axis);
    let det = el.det();
    let mut cells = Vec::new();
    let eval = |theta: f64, phi: f64| -> (f64, Vec<f64>) {
        let mut u = scale(&axis, theta.cos());
        let (s, c) = phi.sin_cos();
        if d == 2 {
            u = axpy(&u, theta.sin(), &basis[0]);
        } else {
            u = axpy(&u, theta.sin() * c, &basis[0]);
            u = axpy(&u, theta.sin() * s, &basis[1]);
        }
        let g = el.inverse_apply(&u);
        let jac = det * norm(&g);
        (jac, scale(&g, det))
    };
    if d == 2 {
        let n = rings.max(2);
        let h = 2.0 * theta_max / n as f64;
        for i in 0..n {
            let a = -theta_max + i as f64 * h;
            let mut mass = 0.0;
            let mut flux = vec![0.0; 2];
            for (x, w) in GAUSS4 {
                let th = a + 0.5 * h * (x + 1.0);
                let (jac, f) = eval(th, 0.0);
                mass += 0.5 * h * w * jac;
                flux = axpy(&flux, 0.5 * h * w, &f);
            }
            let spread = sub(&eval(a + h, 0.0).1, &eval(a, 0.0).1);
            cells.push(CapCell { mass, flux, spread });
        }
    } else {
        let n = rings.max(1);
        let m = sectors.max(3);
        let h = theta_max / n as f64;
        let hp = 2.0 * PI / m as f64;
        for i in 0..n {
            for j in 0..m {
                let mut mass = 0.0;
                let mut flux = vec![0.0; 3];
                for (x, wx) in GAUSS4 {
                    let th = i as f64 * h + 0.5 * h * (x + 1.0);
                    for (y, wy) in GAUSS4 {
                        let ph = j as f64 * hp + 0.5 * hp * (y + 1.0);
                        let (jac, f) = eval(th, ph);
                        let w = 0.25 * h * hp * wx * wy * th.sin();
                        mass += w * jac;
                        flux = axpy(&flux, w, &f);
                    }
                }
                let mid = (i as f64 + 0.5) * h;
                let spread = sub(&eval(mid, (j + 1) as f64 * hp).1, &eval(mid, j as f64 * hp).1);
                cells.push(CapCell { mass, flux, spread });
            }
        }
    }
    cells
}

/// Atomic discretization of the surface-area measure of an ellipsoidal cap.
///
/// Balls use latitude rings with exact ring mass; each ring's atoms sit at the
/// polar angle whose cosine is the mean of the normal's axial component over
/// the ring, which makes the resultant exact as well. Other ellipsoids use
/// Gauss cells, each carried by two atoms matching its area and flux.
pub fn ellipsoid_cap_measure(cap: &EllipsoidCap, e: &[f64], t: f64, rings: usize, sectors: usize) -> SphericalMeasure {
    let el = &cap.body;
    let d = el.dim();
    let mut atoms = Vec::new();
    if el.is_ball() {
        let r = el.semi_axes[0];
        let theta_max = cap.cos_max.clamp(-1.0, 1.0).acos();
        let basis = complement_basis(e);
        let at = |theta: f64, phi: f64| -> Vec<f64> {
            let mut v = scale(e, theta.cos());
            if d == 2 {
                v = axpy(&v, theta.sin(), &basis[0]);
            } else {
                v = axpy(&v, theta.sin() * phi.cos(), &basis[0]);
                v = axpy(&v, theta.sin() * phi.sin(), &basis[1]);
            }
            normalize(&v).unwrap()
        };
        if d == 2 {
            // pieces symmetric about e, so the transverse parts cancel in pairs
            let n = 2 * (rings.max(2) / 2);
            let h = 2.0 * theta_max / n as f64;
            for i in 0..n {
                let a = -theta_max + i as f64 * h;
                let b = a + h;
                let mean_cos = (b.sin() - a.sin()) / h;
                let mid = 0.5 * (a + b);
                let theta = mid.signum() * mean_cos.clamp(-1.0, 1.0).acos();
                atoms.push(Atom { dir: at(theta, 0.0), weight: r * h });
            }
        } else {
            let n = rings.max(1);
            let m = sectors.max(3);
            // cos a - cos b in product form, rescaled to the exact zone area
            let rings: Vec<(f64, f64)> = (0..n)
                .map(|i| {
                    let a = theta_max * i as f64 / n as f64;
                    let b = theta_max * (i + 1) as f64 / n as f64;
                    (2.0 * (0.5 * (a + b)).sin() * (0.5 * (b - a)).sin(), 0.5 * (a.cos() + b.cos()))
                })
                .collect();
            let total: f64 = rings.iter().map(|r| r.0).sum();
            for (share, mean_cos) in rings {
                let mass = cap.lateral_area * share / total;
                let theta = mean_cos.clamp(-1.0, 1.0).acos();
                for j in 0..m {
                    let phi = 2.0 * PI * (j as f64 + 0.5) / m as f64;
                    atoms.push(Atom { dir: at(theta, phi), weight: mass / m as f64 });
                }
            }
        }
    } else {
        // Each cell becomes two equal atoms tilted apart along its spread so
        // that both the cell's area and its normal integral are reproduced.
        for c in ellipsoid_cap_cells(el, e, t, rings, sectors) {
            let Some(dir) = normalize(&c.flux) else { continue };
            let cos_a = (norm(&c.flux) / c.mass).min(1.0);
            let sin_a = (1.0 - cos_a * cos_a).sqrt();
            let w = normalize(&axpy(&c.spread, -dot(&c.spread, &dir), &dir))
                .unwrap_or_else(|| complement_basis(&dir)[0].clone());
            for sgn in [1.0, -1.0] {
                let n = normalize(&axpy(&scale(&dir, cos_a), sgn * sin_a, &w)).unwrap();
                atoms.push(Atom { dir: n, weight: 0.5 * c.mass });
            }
        }
    }
    SphericalMeasure::canonical(d, atoms)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::body::{cut_cap, unit_cube, ConvexBody};

    #[test]
    fn cube_boundary_measure() {
        let mu = boundary_measure(&unit_cube(3));
        assert_eq!(mu.len(), 6);
        assert!(mu.atoms().iter().all(|a| (a.weight - 1.0).abs() < 1e-12));
        assert!((mu.total_mass() - 6.0).abs() < 1e-12);
        assert!(norm(&mu.resultant()) < 1e-12);
    }

    #[test]
    fn empty_and_dirac() {
        let z = induced_measure(3, &[]);
        assert!(z.is_empty());
        assert_eq!(z.total_mass(), 0.0);
        let e = normalize(&[1.0, 2.0, 2.0]).unwrap();
        let d = SphericalMeasure::dirac(&e).unwrap();
        assert_eq!(d.resultant(), e);
    }

    #[test]
    fn cube_corner_side_measure() {
        let t = 0.1;
        let e = normalize(&[1.0, 1.0, 1.0]).unwrap();
        let cap = cut_cap(&ConvexBody::Polytope(unit_cube(3)), &[1.0, 1.0, 1.0], &e, t).unwrap();
        let CapShape::Polytope { side_facets, .. } = &cap.shape else { panic!() };
        let side = induced_measure(3, side_facets);
        assert_eq!(side.len(), 3);
        for a in side.atoms() {
            assert!((a.weight - 0.015).abs() < 1e-14);
        }
        let nu = nu_t(&cap).unwrap();
        for a in nu.atoms() {
            assert!((a.weight - 1.0 / 3f64.sqrt()).abs() < 1e-12);
        }
        let r = nu.resultant();
        assert!(linalg::dist(&r, &e) < 1e-12);
    }

    #[test]
    fn ball_cap_mass_and_resultant() {
        let ball = ConvexBody::Ellipsoid(Ellipsoid::ball(vec![0.0; 3], 1.0).unwrap());
        let e = vec![0.0, 0.0, 1.0];
        for t in [0.5, 0.1, 1e-4] {
            let cap = cut_cap(&ball, &e, &e, t).unwrap();
            let nu = nu_t(&cap).unwrap();
            assert_eq!(nu.len(), DEFAULT_RINGS * DEFAULT_SECTORS);
            assert!((nu.total_mass() - 2.0 / (2.0 - t)).abs() < 1e-12);
            assert!(linalg::dist(&nu.resultant(), &e) < 1e-12);
            assert!(nu.max_angle_from(&e) <= (1.0 - t).acos() + 1e-15);
        }
    }

    #[test]
    fn disk_cap_resultant_is_exact() {
        let disk = ConvexBody::Ellipsoid(Ellipsoid::ball(vec![1.0, -1.0], 2.0).unwrap());
        let e = normalize(&[1.0, 1.0]).unwrap();
        let r0 = axpy(&[1.0, -1.0], 2.0, &e);
        let cap = cut_cap(&disk, &r0, &e, 0.3).unwrap();
        let nu = nu_t(&cap).unwrap();
        assert!(linalg::dist(&nu.resultant(), &e) < 1e-12);
        // arc length over chord length
        let theta = (1.0f64 - 0.3 / 2.0).acos();
        let expected = 2.0 * 2.0 * theta / (2.0 * (2.0 * 2.0 * 0.3 - 0.09f64).sqrt());
        assert!((nu.total_mass() - expected).abs() < 1e-12);
    }

    #[test]
    fn ellipsoid_cap_resultant_within_quadrature_tolerance() {
        let el = Ellipsoid::new(crate::body::AnalyticKind::Ellipsoid, vec![0.0; 3], vec![1.0, 2.0, 3.0]).unwrap();
        let u = normalize(&[0.3, -0.5, 0.8]).unwrap();
        let r0 = el.support_point(&u);
        let body = ConvexBody::Ellipsoid(el);
        let cap = cut_cap(&body, &r0, &u, 0.4).unwrap();
        let nu = nu_t(&cap).unwrap();
        assert!(linalg::dist(&nu.resultant(), &u) < 1e-12);
        let CapShape::Ellipsoid(c) = &cap.shape else { panic!() };
        assert!((nu.total_mass() - c.lateral_area / cap.base_area).abs() < 1e-6);
    }

    #[test]
    fn merging_and_sums() {
        let a = SphericalMeasure::new(2, vec![Atom { dir: vec![1.0, 0.0], weight: 0.5 }]).unwrap();
        let b = SphericalMeasure::new(
            2,
            vec![
                Atom { dir: normalize(&[1.0, 1e-12]).unwrap(), weight: 0.25 },
                Atom { dir: vec![0.0, 1.0], weight: 1.0 },
            ],
        )
        .unwrap();
        let s = a.sum(&b).unwrap();
        assert_eq!(s.len(), 2);
        assert!((s.total_mass() - 1.75).abs() < 1e-15);
    }

    #[test]
    fn invalid_atoms_are_rejected() {
        assert!(SphericalMeasure::new(2, vec![Atom { dir: vec![2.0, 0.0], weight: 1.0 }]).is_err());
        assert!(SphericalMeasure::new(2, vec![Atom { dir: vec![1.0, 0.0], weight: -1.0 }]).is_err());
        assert!(SphericalMeasure::new(3, vec![Atom { dir: vec![1.0, 0.0], weight: 1.0 }]).is_err());
    }

    #[test]
    fn json_round_trip_validates() {
        let m: SphericalMeasure = serde_json::from_str(r#"{"dim":2,"atoms":[{"dir":[0.0,1.0],"w":0.5}]}"#).unwrap();
        assert_eq!(m.total_mass(), 0.5);
        let bad: std::result::Result<SphericalMeasure, _> =
            serde_json::from_str(r#"{"dim":2,"atoms":[{"dir":[0.0,3.0],"w":0.5}]}"#);
        assert!(bad.is_err());
    }
}
