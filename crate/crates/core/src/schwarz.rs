//! Schwarz functions: analytic self-maps ω of the unit disk with ω(0) = 0.
//!
//! Finite Blaschke products and monomials are the working family; both are
//! evaluated pointwise in closed form and expanded into truncated series
//! for coefficient work.

use std::f64::consts::PI;
use std::fmt;

use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::series::{TruncatedSeries, DEFAULT_ORDER};

/// Largest modulus of a sampled Blaschke zero.
pub const ZERO_RADIUS_CAP: f64 = 0.95;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum SchwarzKind {
    Monomial(usize),
    Blaschke {
        zeros: Vec<Complex64>,
        rotation: Complex64,
    },
    /// A polynomial given by its coefficients; the caller vouches for `|ω| < 1`.
    Raw,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SchwarzMap {
    kind: SchwarzKind,
    series: TruncatedSeries,
}

impl SchwarzMap {
    /// `ω(z) = zⁿ`.
    pub fn monomial(n: usize, order: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParameter("monomial Schwarz map needs n >= 1".into()));
        }
        Ok(Self { kind: SchwarzKind::Monomial(n), series: TruncatedSeries::monomial(n, ONE, order) })
    }

    pub fn identity(order: usize) -> Self {
        Self { kind: SchwarzKind::Monomial(1), series: TruncatedSeries::variable(order) }
    }

    /// `ω(z) = rotation · z · ∏ (aᵢ - z)/(1 - āᵢ z)`.
    pub fn blaschke(zeros: Vec<Complex64>, rotation: Complex64, order: usize) -> Result<Self> {
        if let Some(a) = zeros.iter().find(|a| a.norm().is_nan() || a.norm() >= 1.0) {
            return Err(Error::ZeroOutsideDisk(*a));
        }
        if (rotation.norm() - 1.0).abs() > 1e-12 {
            return Err(Error::NonUnimodularRotation(rotation));
        }
        let series = blaschke_series(&zeros, rotation, order)?;
        Ok(Self { kind: SchwarzKind::Blaschke { zeros, rotation }, series })
    }

    /// A polynomial Schwarz function from its coefficients. The constant term
    /// must vanish exactly.
    pub fn raw(series: TruncatedSeries) -> Result<Self> {
        if series.coeff(0) != ZERO {
            return Err(Error::CompositionRequiresZeroConstant(series.coeff(0)));
        }
        Ok(Self { kind: SchwarzKind::Raw, series })
    }

    /// The constant map ω ≡ 0.
    pub fn zero(order: usize) -> Self {
        Self { kind: SchwarzKind::Raw, series: TruncatedSeries::zero(order) }
    }

    pub fn kind(&self) -> &SchwarzKind {
        &self.kind
    }

    pub fn series(&self) -> &TruncatedSeries {
        &self.series
    }

    pub fn order(&self) -> usize {
        self.series.order()
    }

    /// Taylor coefficient `c_k`.
    pub fn c(&self, k: usize) -> Complex64 {
        self.series.coeff(k)
    }

    /// Expansion to `order`. Monomials and Blaschke products are re-expanded;
    /// raw polynomials are padded with zeros or truncated.
    pub fn series_at(&self, order: usize) -> TruncatedSeries {
        if order <= self.series.order() {
            return self.series.truncate(order);
        }
        match &self.kind {
            SchwarzKind::Monomial(n) => TruncatedSeries::monomial(*n, ONE, order),
            SchwarzKind::Blaschke { zeros, rotation } => {
                blaschke_series(zeros, *rotation, order).expect("zeros validated at construction")
            }
            SchwarzKind::Raw => TruncatedSeries::from_coeffs(self.series.coeffs().to_vec(), order),
        }
    }

    /// Same map with its cached expansion at another order.
    pub fn with_order(&self, order: usize) -> Self {
        Self { kind: self.kind.clone(), series: self.series_at(order) }
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        match &self.kind {
            SchwarzKind::Monomial(n) => z.powu(*n as u32),
            SchwarzKind::Blaschke { zeros, rotation } => {
                rotation * z * zeros.iter().map(|a| factor(*a, z)).product::<Complex64>()
            }
            SchwarzKind::Raw => self.series.eval(z),
        }
    }

    /// `ω(z)/z`, continuous through `z = 0`.
    pub fn eval_over_z(&self, z: Complex64) -> Complex64 {
        match &self.kind {
            SchwarzKind::Monomial(n) => z.powu(*n as u32 - 1),
            SchwarzKind::Blaschke { zeros, rotation } => {
                rotation * zeros.iter().map(|a| factor(*a, z)).product::<Complex64>()
            }
            SchwarzKind::Raw => self.series.shift_down(1).expect("constant term is zero").eval(z),
        }
    }

    /// `ω′(z)`, by the product rule for Blaschke products and termwise for
    /// polynomials.
    pub fn derivative(&self, z: Complex64) -> Complex64 {
        match &self.kind {
            SchwarzKind::Monomial(n) => z.powu(*n as u32 - 1) * *n as f64,
            SchwarzKind::Blaschke { zeros, rotation } => {
                let phis: Vec<Complex64> = zeros.iter().map(|a| factor(*a, z)).collect();
                let full: Complex64 = phis.iter().product();
                let mut sum = ZERO;
                for (i, a) in zeros.iter().enumerate() {
                    let d = 1.0 - a.conj() * z;
                    let dphi = -(1.0 - a.norm_sqr()) / (d * d);
                    let others: Complex64 = phis.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, p)| p).product();
                    sum += dphi * others;
                }
                rotation * (full + z * sum)
            }
            SchwarzKind::Raw => self.series.derivative().eval(z),
        }
    }
}

impl fmt::Display for SchwarzMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            SchwarzKind::Monomial(n) => write!(f, "z^{n}"),
            SchwarzKind::Blaschke { zeros, rotation } => {
                write!(f, "blaschke(rotation={:.6}{:+.6}i, zeros=[", rotation.re, rotation.im)?;
                for (i, a) in zeros.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{:.6}{:+.6}i", a.re, a.im)?;
                }
                write!(f, "])")
            }
            SchwarzKind::Raw => {
                write!(f, "raw(")?;
                let mut first = true;
                for (k, c) in self.series.coeffs().iter().enumerate() {
                    if *c == ZERO {
                        continue;
                    }
                    if !first {
                        write!(f, " + ")?;
                    }
                    first = false;
                    write!(f, "({:.6}{:+.6}i)z^{k}", c.re, c.im)?;
                }
                if first {
                    write!(f, "0")?;
                }
                write!(f, ")")
            }
        }
    }
}

#[inline]
fn factor(a: Complex64, z: Complex64) -> Complex64 {
    (a - z) / (1.0 - a.conj() * z)
}

fn blaschke_series(zeros: &[Complex64], rotation: Complex64, order: usize) -> Result<TruncatedSeries> {
    let mut acc = TruncatedSeries::monomial(1, rotation, order);
    for a in zeros {
        let num = TruncatedSeries::new(vec![*a, -ONE]);
        let den = TruncatedSeries::new(vec![ONE, -a.conj()]);
        let num = TruncatedSeries::from_coeffs(num.into_coeffs(), order);
        let den = TruncatedSeries::from_coeffs(den.into_coeffs(), order);
        acc = acc.mul(&num.div(&den)?);
    }
    Ok(acc)
}

/// A ChaCha8 stream keyed by `(seed, stream)`.
///
/// Every sample index gets its own stream, so parallel searches reproduce the
/// same maps regardless of how work is split between threads.
pub fn rng_for(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Random finite Blaschke product: degree uniform on `0..=max_degree`, zeros
/// uniform (by area) in the disk of radius [`ZERO_RADIUS_CAP`], rotation
/// uniform on the circle.
pub fn sample_with_rng<R: Rng>(rng: &mut R, max_degree: usize, order: usize) -> SchwarzMap {
    let degree = rng.random_range(0..=max_degree);
    let zeros = (0..degree)
        .map(|_| {
            let r = ZERO_RADIUS_CAP * rng.random::<f64>().sqrt();
            Complex64::from_polar(r, 2.0 * PI * rng.random::<f64>())
        })
        .collect();
    let rotation = Complex64::from_polar(1.0, 2.0 * PI * rng.random::<f64>());
    SchwarzMap::blaschke(zeros, rotation, order).expect("sampled zeros lie inside the cap")
}

pub fn sample(seed: u64, max_degree: usize) -> SchwarzMap {
    sample_indexed(seed, 0, max_degree, DEFAULT_ORDER)
}

/// The `index`-th map of the sample stream for `seed`.
pub fn sample_indexed(seed: u64, index: u64, max_degree: usize, order: usize) -> SchwarzMap {
    sample_with_rng(&mut rng_for(seed, index), max_degree, order)
}

/// Worst slack of the Schwarz–Pick inequalities over a grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SchwarzPickReport {
    pub points: usize,
    /// `max(|ω(z)| - |z|)`
    pub max_modulus_excess: f64,
    pub modulus_witness: Complex64,
    /// `max(|ω′(z)| - (1 - |ω(z)|²)/(1 - |z|²))`
    pub max_derivative_excess: f64,
    pub derivative_witness: Complex64,
    pub tolerance: f64,
    pub holds: bool,
}

pub fn schwarz_pick_check(omega: &SchwarzMap, grid: &[Complex64], tolerance: f64) -> Result<SchwarzPickReport> {
    let mut modulus = (f64::NEG_INFINITY, ZERO);
    let mut deriv = (f64::NEG_INFINITY, ZERO);
    for &z in grid {
        let r = z.norm();
        if r > 0.99 {
            return Err(Error::DomainViolation(format!("grid point {z} lies outside |z| <= 0.99")));
        }
        let w = omega.eval(z);
        let m = w.norm() - r;
        if m > modulus.0 {
            modulus = (m, z);
        }
        let d = omega.derivative(z).norm() - (1.0 - w.norm_sqr()) / (1.0 - r * r);
        if d > deriv.0 {
            deriv = (d, z);
        }
    }
    Ok(SchwarzPickReport {
        points: grid.len(),
        max_modulus_excess: modulus.0,
        modulus_witness: modulus.1,
        max_derivative_excess: deriv.0,
        derivative_witness: deriv.1,
        tolerance,
        holds: modulus.0 <= tolerance && deriv.0 <= tolerance,
    })
}

/// Polar grid with `rings` radii evenly spaced in `(0, max_radius]` and
/// `angles` equally spaced arguments.
pub fn polar_grid(max_radius: f64, rings: usize, angles: usize) -> Vec<Complex64> {
    let mut grid = Vec::with_capacity(rings * angles);
    for i in 1..=rings {
        let r = max_radius * i as f64 / rings as f64;
        for k in 0..angles {
            grid.push(Complex64::from_polar(r, 2.0 * PI * k as f64 / angles as f64));
        }
    }
    grid
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn monomials() {
        assert_eq!(SchwarzMap::monomial(1, 8).unwrap().series(), &TruncatedSeries::variable(8));
        let m3 = SchwarzMap::monomial(3, 8).unwrap();
        assert_eq!((m3.c(1), m3.c(2), m3.c(3)), (ZERO, ZERO, ONE));
        assert_eq!(SchwarzMap::monomial(2, 8).unwrap().eval(c(0.5, 0.0)), c(0.25, 0.0));
        assert!(SchwarzMap::monomial(0, 8).is_err());
    }

    #[test]
    fn blaschke_expansions() {
        let id = SchwarzMap::blaschke(vec![], ONE, 8).unwrap();
        assert_eq!(id.series(), &TruncatedSeries::variable(8));

        let b0 = SchwarzMap::blaschke(vec![ZERO], ONE, 8).unwrap();
        assert_eq!(b0.series(), &TruncatedSeries::monomial(2, -ONE, 8));

        // z(0.5 - z)/(1 - 0.5z), expanded by hand via the geometric series
        let b = SchwarzMap::blaschke(vec![c(0.5, 0.0)], ONE, 8).unwrap();
        for (k, v) in [(0, 0.0), (1, 0.5), (2, -0.75), (3, -0.375), (4, -0.1875)] {
            assert!((b.c(k) - c(v, 0.0)).norm() < 1e-15, "c_{k}");
        }

        let rot = Complex64::from_polar(1.0, 0.7);
        let a = c(0.3, -0.4);
        assert!((SchwarzMap::blaschke(vec![a], rot, 8).unwrap().c(1) - rot * a).norm() < 1e-15);

        assert_eq!(SchwarzMap::blaschke(vec![c(1.0, 0.0)], ONE, 8), Err(Error::ZeroOutsideDisk(c(1.0, 0.0))));
    }

    #[test]
    fn raw_maps_need_zero_constant() {
        assert!(SchwarzMap::raw(TruncatedSeries::from_real(&[0.1, 0.5], 4)).is_err());
        let w = SchwarzMap::raw(TruncatedSeries::from_real(&[0.0, 0.5, 0.25], 4)).unwrap();
        assert_eq!(w.eval_over_z(c(0.0, 0.0)), c(0.5, 0.0));
        assert_eq!(w.derivative(c(1.0, 0.0)), c(1.0, 0.0));
    }

    #[test]
    fn degree_zero_sample_is_rotation() {
        let w = sample(11, 0);
        match w.kind() {
            SchwarzKind::Blaschke { zeros, rotation } => {
                assert!(zeros.is_empty());
                assert!((w.c(1) - rotation).norm() < 1e-15);
                assert!((rotation.norm() - 1.0).abs() < 1e-15);
            }
            other => panic!("unexpected kind {other:?}"),
        }
        for k in 2..=w.order() {
            assert_eq!(w.c(k), ZERO);
        }
    }

    #[test]
    fn sampling_is_deterministic() {
        assert_eq!(sample(5, 5), sample(5, 5));
        assert_ne!(sample_indexed(5, 0, 5, 8), sample_indexed(5, 1, 5, 8));
    }

    #[test]
    fn derivative_matches_finite_difference() {
        let w = SchwarzMap::blaschke(vec![c(0.2, 0.3), c(-0.6, 0.1), c(0.0, 0.9)], Complex64::from_polar(1.0, 1.1), 8)
            .unwrap();
        let h = 1e-6;
        for z in [c(0.1, 0.2), c(-0.5, 0.4), c(0.7, -0.6)] {
            let fd = (w.eval(z + h) - w.eval(z - h)) / (2.0 * h);
            assert!((fd - w.derivative(z)).norm() < 1e-8);
        }
    }

    #[test]
    fn schwarz_pick_on_simple_maps() {
        let grid = polar_grid(0.9, 10, 32);
        let id = schwarz_pick_check(&SchwarzMap::identity(8), &grid, 1e-12).unwrap();
        assert!(id.max_modulus_excess.abs() < 1e-15);
        assert!(id.max_derivative_excess.abs() < 1e-15);
        assert!(id.holds);

        let sq = SchwarzMap::monomial(2, 8).unwrap();
        let r = schwarz_pick_check(&sq, &[c(0.5, 0.0)], 0.0).unwrap();
        assert!((r.max_modulus_excess - (0.25 - 0.5)).abs() < 1e-15);

        assert!(schwarz_pick_check(&sq, &[c(0.995, 0.0)], 0.0).is_err());
    }

    #[test]
    fn random_blaschke_obeys_schwarz_pick() {
        let grid = polar_grid(0.9, 20, 50);
        for i in 0..50 {
            let w = sample_indexed(99, i, 5, 8);
            let r = schwarz_pick_check(&w, &grid, 1e-8).unwrap();
            assert!(r.holds, "{w}: {r:?}");
        }
    }
}
