//! Coefficient functionals of `BS(α)`/`BK(α)`, their sharp bounds, and
//! sampling searches that try to break them.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::class::{from_schwarz_bk, from_schwarz_bs, ClassMember, ClassTag};
use crate::domain::{AlphaParam, CONVEXITY_THRESHOLD};
use crate::error::{Error, Result};
use crate::report::BoundReport;
use crate::schwarz::{sample_indexed, SchwarzMap};
use crate::series::TruncatedSeries;

/// Default tolerance of the falsification searches.
pub const FALSIFY_TOLERANCE: f64 = 1e-9;

/// Region boundaries of the Prokhorov lemma are closed; points within this
/// distance of a boundary are classified as on it.
pub const REGION_TOLERANCE: f64 = 1e-10;

/// `(a₂, a₃, a₄)` of the BS member driven by ω, from `c₁, c₂, c₃`:
/// `a₂ = c₁`, `a₃ = (c₁² + c₂)/2`, `a₄ = ((1+2α)c₁³ + 3c₁c₂ + 2c₃)/6`.
pub fn taylor_a234(omega: &SchwarzMap, alpha: f64) -> [Complex64; 3] {
    let (c1, c2, c3) = (omega.c(1), omega.c(2), omega.c(3));
    [c1, (c1 * c1 + c2) / 2.0, ((1.0 + 2.0 * alpha) * c1 * c1 * c1 + 3.0 * c1 * c2 + 2.0 * c3) / 6.0]
}

/// Sharp bounds on `|a₂|, |a₃|, |a₄|` over `BS(α)`.
pub fn bs_a_bounds(alpha: f64) -> [f64; 3] {
    [1.0, 0.5, if alpha <= 0.5 { 1.0 / 3.0 } else { (1.0 + 2.0 * alpha) / 6.0 }]
}

/// Sharp bounds on `|a₂|, |a₃|, |a₄|` over `BK(α)`.
pub fn bk_a_bounds(alpha: f64) -> [f64; 3] {
    [0.5, 1.0 / 6.0, if alpha <= 0.5 { 1.0 / 12.0 } else { (1.0 + 2.0 * alpha) / 24.0 }]
}

pub fn a_bounds(class: ClassTag, alpha: f64) -> [f64; 3] {
    match class {
        ClassTag::BS => bs_a_bounds(alpha),
        ClassTag::BK => bk_a_bounds(alpha),
    }
}

/// Logarithmic coefficients: `log(f(z)/z) = 2 Σ γₙ zⁿ`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LogCoefficients {
    /// `γ₁, …, γ_N`
    pub gammas: Vec<Complex64>,
}

impl LogCoefficients {
    /// `γₙ`, 1-based.
    pub fn gamma(&self, n: usize) -> Complex64 {
        self.gammas[n - 1]
    }
}

/// `γ₁..γ_n` of a normalized `f`. Needs `f` to order at least `n + 1`.
pub fn log_coeffs_of(f: &TruncatedSeries, n: usize) -> Result<LogCoefficients> {
    if f.order() < n + 1 {
        return Err(Error::InvalidParameter(format!(
            "need a series of order >= {} for {n} logarithmic coefficients, got {}",
            n + 1,
            f.order()
        )));
    }
    let log = f.shift_down(1)?.log1()?;
    Ok(LogCoefficients { gammas: (1..=n).map(|k| log.coeff(k) / 2.0).collect() })
}

pub fn log_coeffs(member: &ClassMember, n: usize) -> Result<LogCoefficients> {
    log_coeffs_of(&member.f, n)
}

/// `γ₁ = c₁/2`, `γ₂ = c₂/4`, `γ₃ = (αc₁³ + c₃)/6` for the BS member driven by ω.
pub fn gamma_formula(omega: &SchwarzMap, alpha: f64) -> [Complex64; 3] {
    let (c1, c2, c3) = (omega.c(1), omega.c(2), omega.c(3));
    [c1 / 2.0, c2 / 4.0, (alpha * c1 * c1 * c1 + c3) / 6.0]
}

/// Upper bound on `|γₙ|` over `BS(α)`: `1/(2n)` when `n ≤ 3` or `F_α` is
/// convex, otherwise the weaker `1/2`.
pub fn gamma_bound(alpha: f64, n: usize) -> f64 {
    if n <= 3 || alpha <= CONVEXITY_THRESHOLD {
        1.0 / (2.0 * n as f64)
    } else {
        0.5
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ProkhorovRegion {
    Omega1,
    Omega2,
    Omega3,
    Outside,
}

/// Lower edge `4/27 (|μ|+1)³ − (|μ|+1)` of the second region.
pub fn omega2_lower_edge(mu: f64) -> f64 {
    let m = mu.abs() + 1.0;
    4.0 / 27.0 * m * m * m - m
}

/// Region of `(μ, ν)` in the Prokhorov lemma.
///
/// The regions are closed and share edges on which the two bounds coincide;
/// such points go to the lowest-numbered region. Edges are widened by
/// [`REGION_TOLERANCE`] so that rounding noise does not flip a boundary point
/// to `Outside`.
pub fn prokhorov_region(mu: f64, nu: f64) -> ProkhorovRegion {
    let t = REGION_TOLERANCE;
    let m = mu.abs();
    if m <= 0.5 + t && (-1.0 - t..=1.0 + t).contains(&nu) {
        ProkhorovRegion::Omega1
    } else if (0.5 - t..=2.0 + t).contains(&m) && nu >= omega2_lower_edge(mu) - t && nu <= 1.0 + t {
        ProkhorovRegion::Omega2
    } else if m <= 2.0 + t && nu >= 1.0 - t {
        ProkhorovRegion::Omega3
    } else {
        ProkhorovRegion::Outside
    }
}

/// Region and bound on `|c₃ + μc₁c₂ + νc₁³|`; `None` outside the lemma's range.
pub fn prokhorov_bound(mu: f64, nu: f64) -> (ProkhorovRegion, Option<f64>) {
    let region = prokhorov_region(mu, nu);
    let bound = match region {
        ProkhorovRegion::Omega1 | ProkhorovRegion::Omega2 => Some(1.0),
        ProkhorovRegion::Omega3 => Some(nu.abs()),
        ProkhorovRegion::Outside => None,
    };
    (region, bound)
}

pub fn prokhorov_functional(omega: &SchwarzMap, mu: f64, nu: f64) -> f64 {
    let (c1, c2, c3) = (omega.c(1), omega.c(2), omega.c(3));
    (c3 + mu * c1 * c2 + nu * c1 * c1 * c1).norm()
}

/// `|c₂ − μc₁²|` against `max{1, |μ|}`.
pub fn keogh_merkes_value(omega: &SchwarzMap, mu: Complex64) -> f64 {
    (omega.c(2) - mu * omega.c(1) * omega.c(1)).norm()
}

pub fn keogh_merkes_bound(mu: Complex64) -> f64 {
    mu.norm().max(1.0)
}

pub fn keogh_merkes_check(omega: &SchwarzMap, mu: Complex64, tolerance: f64) -> BoundReport {
    BoundReport::new(
        format!("|c2 - mu c1^2| (mu = {mu})"),
        keogh_merkes_value(omega, mu),
        keogh_merkes_bound(mu),
        tolerance,
        omega.to_string(),
        1,
    )
}

/// Parameters of a falsification search.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SamplerConfig {
    pub seed: u64,
    /// Number of random Blaschke products.
    pub samples: usize,
    pub max_degree: usize,
    /// Truncation order of the sampled maps' expansions.
    pub order: usize,
    pub tolerance: f64,
}

impl Default for SamplerConfig {
    fn default() -> Self {
        Self { seed: 0, samples: 10_000, max_degree: 5, order: 8, tolerance: FALSIFY_TOLERANCE }
    }
}

impl SamplerConfig {
    /// The monomials `z, …, z^{max_degree+1}` are searched before the random
    /// products since they attain the sharp bounds.
    pub fn monomials(&self) -> usize {
        self.max_degree + 1
    }

    pub fn total(&self) -> usize {
        self.monomials() + self.samples
    }

    /// The `index`-th map searched.
    pub fn map(&self, index: usize) -> SchwarzMap {
        if index < self.monomials() {
            SchwarzMap::monomial(index + 1, self.order).expect("n >= 1")
        } else {
            let stream = (index - self.monomials()) as u64;
            sample_indexed(self.seed, stream, self.max_degree, self.order)
        }
    }
}

/// Maximizes several functionals at once over the sampled Schwarz maps.
///
/// The reduction keeps, per functional, the largest value and the smallest
/// index attaining it, so the outcome depends only on the configuration and
/// not on the number of worker threads. NaN values are promoted to +∞.
pub fn falsify_many<F>(names: &[String], bounds: &[f64], config: &SamplerConfig, functional: F) -> Vec<BoundReport>
where
    F: Fn(&SchwarzMap) -> Vec<f64> + Sync,
{
    assert_eq!(names.len(), bounds.len());
    let k = names.len();
    let identity = || vec![(f64::NEG_INFINITY, usize::MAX); k];
    let best = (0..config.total())
        .into_par_iter()
        .map(|i| {
            let values = functional(&config.map(i));
            debug_assert_eq!(values.len(), k);
            values.into_iter().map(|v| (if v.is_nan() { f64::INFINITY } else { v }, i)).collect::<Vec<_>>()
        })
        .reduce(identity, |a, b| a.into_iter().zip(b).map(|(x, y)| better(x, y)).collect());

    names
        .iter()
        .zip(bounds)
        .zip(best)
        .map(|((name, bound), (value, index))| {
            let witness = if index == usize::MAX { String::from("none") } else { config.map(index).to_string() };
            BoundReport::new(name.clone(), value, *bound, config.tolerance, witness, config.total())
        })
        .collect()
}

fn better(x: (f64, usize), y: (f64, usize)) -> (f64, usize) {
    if x.0 > y.0 || (x.0 == y.0 && x.1 < y.1) {
        x
    } else {
        y
    }
}

pub fn falsify<F>(name: &str, bound: f64, config: &SamplerConfig, functional: F) -> BoundReport
where
    F: Fn(&SchwarzMap) -> f64 + Sync,
{
    falsify_many(&[name.to_string()], &[bound], config, |w| vec![functional(w)]).remove(0)
}

/// Member of `class` driven by ω.
pub fn member(class: ClassTag, omega: &SchwarzMap, alpha: f64, order: usize) -> Result<ClassMember> {
    match class {
        ClassTag::BS => from_schwarz_bs(omega, alpha, order),
        ClassTag::BK => from_schwarz_bk(omega, alpha, order),
    }
}

/// Searches for violations of the sharp `|a₂|, |a₃|, |a₄|` bounds.
pub fn falsify_taylor(class: ClassTag, alpha: f64, config: &SamplerConfig) -> Result<Vec<BoundReport>> {
    AlphaParam::new(alpha)?;
    let order = config.order.max(4);
    let names: Vec<String> = (2..=4).map(|n| format!("{class}({alpha}) |a{n}|")).collect();
    Ok(falsify_many(&names, &a_bounds(class, alpha), config, |w| {
        let m = member(class, w, alpha, order).expect("alpha validated");
        (2..=4).map(|n| m.a(n).norm()).collect()
    }))
}

/// Searches for violations of `|γₙ| ≤ gamma_bound(α, n)`, `n = 1..=n_max`,
/// over `BS(α)`.
pub fn falsify_log_coeffs(alpha: f64, n_max: usize, config: &SamplerConfig) -> Result<Vec<BoundReport>> {
    AlphaParam::new(alpha)?;
    let order = config.order.max(n_max + 1);
    let names: Vec<String> = (1..=n_max).map(|n| format!("BS({alpha}) |gamma{n}|")).collect();
    let bounds: Vec<f64> = (1..=n_max).map(|n| gamma_bound(alpha, n)).collect();
    Ok(falsify_many(&names, &bounds, config, |w| {
        let m = from_schwarz_bs(w, alpha, order).expect("alpha validated");
        let g = log_coeffs(&m, n_max).expect("order covers n_max");
        g.gammas.iter().map(|c| c.norm()).collect()
    }))
}

/// The Schwarz functions attaining the sharp `|a₂|, |a₃|, |a₄|` bounds:
/// ω = z for `a₂`, `a₃` and for `a₄` when α > 1/2; ω = z³ for `a₄` when α ≤ 1/2.
pub fn taylor_extremal_maps(alpha: f64, order: usize) -> [SchwarzMap; 3] {
    let z = SchwarzMap::identity(order);
    let a4 = if alpha <= 0.5 { SchwarzMap::monomial(3, order).expect("n >= 1") } else { z.clone() };
    [z.clone(), z, a4]
}
