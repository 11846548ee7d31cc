//! Pre-Schwarzian derivatives `P_f = f″/f′` and estimates of the hyperbolic
//! sup-norm `‖P_f‖ = sup_{|z|<1} (1−|z|²)|P_f(z)|`.
//!
//! Every member of `BK(α)` has `‖P_f‖ ≤ 1`, attained by `g₁`. Inside `BS(α)`
//! the norm ranges from 0 (the identity) to ∞ (the extremal `f₁`, whose
//! derivative vanishes at `z = −r″`).

use std::cmp::Ordering;
use std::f64::consts::PI;
use std::fmt;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::class::{from_schwarz_bk, ClassMember};
use crate::coefficients::{falsify, SamplerConfig};
use crate::domain::AlphaParam;
use crate::error::{Error, Result};
use crate::report::BoundReport;
use crate::schwarz::SchwarzMap;

/// Tolerance of the `‖P_f‖ ≤ 1` check on `BK(α)`.
pub const NORM_TOLERANCE: f64 = 1e-4;

/// A pointwise evaluator of `P_f`.
#[derive(Debug, Clone)]
pub enum PreSchwarzian {
    /// `f(z) = z`.
    Identity,
    /// `P = (2+z)/((1+z−αz²)(1−αz²))`.
    F1 { alpha: f64 },
    /// `P = 1/(1−αz²)`.
    G1 { alpha: f64 },
    /// `P = z²/(1−αz⁶)`.
    G2 { alpha: f64 },
    /// Exact evaluation through the member's Schwarz function.
    Member(Box<ClassMember>),
    /// Ratio of truncated series; only defined for `|z| ≤ 0.9`.
    Series(Box<ClassMember>),
}

impl PreSchwarzian {
    pub fn eval(&self, z: Complex64) -> Result<Complex64> {
        match self {
            PreSchwarzian::Identity => Ok(Complex64::new(0.0, 0.0)),
            PreSchwarzian::F1 { alpha } => {
                let q = 1.0 - alpha * z * z;
                let den = (1.0 + z - alpha * z * z) * q;
                if den.norm() < 1e-14 {
                    // f₁′ vanishes where 1 + z − αz² does; 1 − αz² is a pole of f₁
                    return Err(if q.norm() < 1e-14 { Error::PoleHit(z) } else { Error::CriticalPointHit(z) });
                }
                Ok((2.0 + z) / den)
            }
            PreSchwarzian::G1 { alpha } => {
                let den = 1.0 - alpha * z * z;
                if den.norm() == 0.0 {
                    return Err(Error::PoleHit(z));
                }
                Ok(1.0 / den)
            }
            PreSchwarzian::G2 { alpha } => {
                let z2 = z * z;
                let den = 1.0 - alpha * z2 * z2 * z2;
                if den.norm() == 0.0 {
                    return Err(Error::PoleHit(z));
                }
                Ok(z2 / den)
            }
            PreSchwarzian::Member(m) => m.pre_schwarzian(z),
            PreSchwarzian::Series(m) => m.series_pre_schwarzian(z),
        }
    }

    /// `(1−|z|²)|P_f(z)|`.
    pub fn weighted(&self, z: Complex64) -> Result<f64> {
        Ok((1.0 - z.norm_sqr()) * self.eval(z)?.norm())
    }

    /// Largest radius at which the evaluator is used.
    pub fn max_radius(&self) -> f64 {
        match self {
            PreSchwarzian::Series(_) => crate::class::SERIES_EVAL_RADIUS,
            _ => 1.0,
        }
    }
}

impl fmt::Display for PreSchwarzian {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PreSchwarzian::Identity => write!(f, "identity"),
            PreSchwarzian::F1 { alpha } => write!(f, "f1(alpha={alpha})"),
            PreSchwarzian::G1 { alpha } => write!(f, "g1(alpha={alpha})"),
            PreSchwarzian::G2 { alpha } => write!(f, "g2(alpha={alpha})"),
            PreSchwarzian::Member(m) => write!(f, "{}(alpha={}) omega={}", m.class_tag, m.alpha.value(), m.omega),
            PreSchwarzian::Series(m) => {
                write!(f, "series {}(alpha={}) omega={}", m.class_tag, m.alpha.value(), m.omega)
            }
        }
    }
}

/// Grid parameters of [`norm_estimate`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NormConfig {
    pub rings: usize,
    pub angles: usize,
    pub levels: usize,
    /// Spacing reduction per refinement level.
    pub factor: usize,
    /// Number of best points refined at each level.
    pub top_k: usize,
    /// Half-width, in grid steps, of the local refinement window.
    pub window: usize,
    pub max_radius: f64,
    pub escape: f64,
    /// Minimal ratio between consecutive depth values that counts as growth.
    pub growth: f64,
}

impl Default for NormConfig {
    fn default() -> Self {
        Self {
            rings: 64,
            angles: 256,
            levels: 3,
            factor: 4,
            top_k: 8,
            window: 4,
            max_radius: 1.0 - 1e-4,
            escape: 1e3,
            growth: 2.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NormEstimate {
    /// Largest finite weighted value observed; at least `escape` when diverged.
    pub value: f64,
    /// An evaluation hit a zero of `f′` or a pole exactly.
    pub infinite: bool,
    pub arg_witness: Complex64,
    pub diverged: bool,
    pub refinement_depth: usize,
    /// Running maximum after the coarse pass and after each refinement level.
    pub depth_values: Vec<f64>,
    pub singular_point: Option<Complex64>,
}

#[derive(Debug, Clone, Copy)]
struct Sample {
    value: f64,
    r: f64,
    theta: f64,
}

impl Sample {
    fn z(&self) -> Complex64 {
        Complex64::from_polar(self.r, self.theta)
    }
}

fn by_value_desc(a: &Sample, b: &Sample) -> Ordering {
    b.value.total_cmp(&a.value).then(a.r.total_cmp(&b.r)).then(a.theta.total_cmp(&b.theta))
}

enum Point {
    Finite(Sample),
    Singular(Complex64),
}

fn evaluate(p: &PreSchwarzian, r: f64, theta: f64) -> Point {
    let z = Complex64::from_polar(r, theta);
    match p.weighted(z) {
        Ok(v) if v.is_finite() => Point::Finite(Sample { value: v, r, theta }),
        _ => Point::Singular(z),
    }
}

/// Sorts points into finite samples and the first singular point.
fn split(points: Vec<Point>, finite: &mut Vec<Sample>, singular: &mut Option<Complex64>) {
    for p in points {
        match p {
            Point::Finite(s) => finite.push(s),
            Point::Singular(z) => {
                singular.get_or_insert(z);
            }
        }
    }
}

/// Estimates `sup (1−|z|²)|P(z)|` over `|z| ≤ min(max_radius, P.max_radius())`.
///
/// A coarse polar grid (evaluated in parallel by ring) is followed by
/// `levels` local refinements around the `top_k` best points. The estimate
/// is declared divergent when an evaluation is singular, or when it ends
/// above `escape` after growing by `growth` between two consecutive levels.
pub fn norm_estimate(p: &PreSchwarzian, config: &NormConfig) -> NormEstimate {
    let r_max = config.max_radius.min(p.max_radius());
    let rings = config.rings.max(2);
    let angles = config.angles.max(1);
    let mut dr = r_max / (rings - 1) as f64;
    let mut dtheta = 2.0 * PI / angles as f64;

    let coarse: Vec<Point> = (0..rings)
        .into_par_iter()
        .flat_map_iter(|i| {
            let r = if i + 1 == rings { r_max } else { i as f64 * dr };
            (0..angles).map(move |j| evaluate(p, r, j as f64 * dtheta))
        })
        .collect();

    let mut samples = Vec::new();
    let mut singular = None;
    split(coarse, &mut samples, &mut singular);
    samples.sort_by(by_value_desc);
    samples.truncate(config.top_k.max(1));

    let best = |s: &[Sample]| s.first().map_or(0.0, |b| b.value);
    let mut depth_values = vec![best(&samples)];

    for _ in 0..config.levels {
        dr /= config.factor as f64;
        dtheta /= config.factor as f64;
        let w = config.window as i64;
        let local: Vec<Point> = samples
            .par_iter()
            .flat_map_iter(|c| {
                (-w..=w).flat_map(move |a| {
                    (-w..=w).filter_map(move |b| {
                        let r = c.r + a as f64 * dr;
                        (0.0..=r_max).contains(&r).then(|| evaluate(p, r, c.theta + b as f64 * dtheta))
                    })
                })
            })
            .collect();
        split(local, &mut samples, &mut singular);
        samples.sort_by(by_value_desc);
        samples.dedup_by(|a, b| a.r == b.r && a.theta == b.theta);
        samples.truncate(config.top_k.max(1));
        depth_values.push(best(&samples));
    }

    let value = best(&samples);
    let arg_witness = samples.first().map_or(Complex64::new(0.0, 0.0), Sample::z);
    let grew = depth_values.windows(2).any(|d| d[0] > 0.0 && d[1] >= config.growth * d[0]);
    let infinite = singular.is_some();
    let diverged = infinite || (value >= config.escape && grew);
    NormEstimate {
        value: if infinite { value.max(config.escape) } else { value },
        infinite,
        arg_witness,
        diverged,
        refinement_depth: config.levels,
        depth_values,
        singular_point: singular.or(diverged.then_some(arg_witness)),
    }
}

/// `(1−r²)/(1−αr²)`, the pointwise bound on `(1−|z|²)|P_f(z)|` over `BK(α)`.
pub fn hyperbolic_weight_bound(alpha: f64, r: f64) -> f64 {
    (1.0 - r * r) / (1.0 - alpha * r * r)
}

/// Largest excess of `(1−|z|²)|P_f(z)|` over [`hyperbolic_weight_bound`] on the grid.
pub fn bk_chain_excess(member: &ClassMember, grid: &[Complex64]) -> Result<f64> {
    let alpha = member.alpha.value();
    grid.iter().try_fold(f64::NEG_INFINITY, |acc, &z| {
        let lhs = (1.0 - z.norm_sqr()) * member.pre_schwarzian(z)?.norm();
        Ok(acc.max(lhs - hyperbolic_weight_bound(alpha, z.norm())))
    })
}

/// Largest norm estimate over the monomials `z, …, z^{max_degree+1}` and the
/// sampled Blaschke products, as members of `BK(α)`, against the bound 1.
pub fn bk_norm_sweep(alpha: f64, sampler: &SamplerConfig, config: &NormConfig) -> Result<BoundReport> {
    AlphaParam::new(alpha)?;
    let mut sampler = *sampler;
    sampler.tolerance = NORM_TOLERANCE;
    Ok(falsify(&format!("BK({alpha}) norm"), 1.0, &sampler, |w: &SchwarzMap| {
        let m = from_schwarz_bk(w, alpha, sampler.order).expect("alpha validated");
        let e = norm_estimate(&PreSchwarzian::Member(Box::new(m)), config);
        if e.diverged {
            f64::INFINITY
        } else {
            e.value
        }
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::class::{extremal_bk, extremal_fn};
    use crate::radius::m_alpha_root;
    use crate::schwarz::{polar_grid, sample_indexed};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn closed_forms_match_members() {
        for alpha in [0.0, 0.3, 1.0] {
            let f1 = extremal_fn(1, alpha, 16).unwrap();
            let g1 = extremal_bk(1, alpha, 16).unwrap();
            let g2 = extremal_bk(3, alpha, 16).unwrap();
            for z in [c(0.1, 0.2), c(-0.4, 0.3), c(0.0, -0.7)] {
                let pairs = [
                    (PreSchwarzian::F1 { alpha }, &f1),
                    (PreSchwarzian::G1 { alpha }, &g1),
                    (PreSchwarzian::G2 { alpha }, &g2),
                ];
                for (closed, member) in pairs {
                    let d = closed.eval(z).unwrap() - member.pre_schwarzian(z).unwrap();
                    assert!(d.norm() < 1e-12, "{closed} at {z}");
                }
            }
        }
    }

    #[test]
    fn series_evaluator_matches_closed_form_inside() {
        let m = extremal_bk(1, 0.5, 64).unwrap();
        let z = c(0.3, -0.2);
        let s = PreSchwarzian::Series(Box::new(m.clone())).eval(z).unwrap();
        assert!((s - PreSchwarzian::G1 { alpha: 0.5 }.eval(z).unwrap()).norm() < 1e-12);
        assert!(matches!(
            PreSchwarzian::Series(Box::new(m)).eval(c(0.95, 0.0)),
            Err(Error::OutsideEvaluationRadius { .. })
        ));
    }

    #[test]
    fn identity_norm_is_zero() {
        let e = norm_estimate(&PreSchwarzian::Identity, &NormConfig::default());
        assert_eq!(e.value, 0.0);
        assert!(!e.diverged);
    }

    #[test]
    fn g1_norm_is_one() {
        for alpha in [0.0, 0.5, 1.0] {
            let e = norm_estimate(&PreSchwarzian::G1 { alpha }, &NormConfig::default());
            assert!((e.value - 1.0).abs() <= 1e-4, "alpha={alpha}: {e:?}");
            assert!(!e.diverged);
            if alpha < 1.0 {
                assert!(e.arg_witness.norm() < 1e-12);
            } else {
                // the weight equals 1 along the whole real diameter
                assert!(e.arg_witness.im.abs() < 1e-12);
            }
        }
    }

    #[test]
    fn f1_diverges_near_r_doubleprime() {
        for alpha in [0.25, 0.5, 1.0] {
            let e = norm_estimate(&PreSchwarzian::F1 { alpha }, &NormConfig::default());
            assert!(e.diverged && e.value > 1e2, "alpha={alpha}: {e:?}");
            let pole = c(-m_alpha_root(alpha), 0.0);
            assert!((e.singular_point.unwrap() - pole).norm() < 1e-2, "{e:?}");
        }
    }

    #[test]
    fn f1_norm_finite_at_alpha_zero() {
        // (1−r²)(2−r)/(1−r) = (1+r)(2−r) on the negative axis, largest at r = 1/2
        let e = norm_estimate(&PreSchwarzian::F1 { alpha: 0.0 }, &NormConfig::default());
        assert!(!e.diverged);
        assert!((e.value - 2.25).abs() < 1e-6, "{e:?}");
        assert!((e.arg_witness - c(-0.5, 0.0)).norm() < 1e-3);
    }

    #[test]
    fn estimates_never_decrease_with_depth() {
        let m = from_schwarz_bk(&sample_indexed(3, 0, 5, 8), 0.7, 8).unwrap();
        for p in
            [PreSchwarzian::F1 { alpha: 0.5 }, PreSchwarzian::G2 { alpha: 0.9 }, PreSchwarzian::Member(Box::new(m))]
        {
            let e = norm_estimate(&p, &NormConfig::default());
            assert!(e.depth_values.windows(2).all(|d| d[1] >= d[0]), "{p}: {:?}", e.depth_values);
        }
    }

    #[test]
    fn weight_bound_at_most_one() {
        for i in 0..=100 {
            let alpha = i as f64 / 100.0;
            assert_eq!(hyperbolic_weight_bound(alpha, 0.0), 1.0);
            for j in 1..1000 {
                let r = j as f64 / 1000.0;
                let w = hyperbolic_weight_bound(alpha, r);
                assert!(w < 1.0 || (alpha == 1.0 && (w - 1.0).abs() < 1e-15));
            }
        }
    }

    #[test]
    fn schwarz_chain_on_samples() {
        let grid = polar_grid(0.999, 40, 64);
        for alpha in [0.2, 1.0] {
            for i in 0..50 {
                let m = from_schwarz_bk(&sample_indexed(11, i, 5, 8), alpha, 8).unwrap();
                assert!(bk_chain_excess(&m, &grid).unwrap() <= 1e-8);
            }
        }
    }

    #[test]
    fn small_sweep_is_sharp() {
        let sampler = SamplerConfig { samples: 40, ..SamplerConfig::default() };
        let report = bk_norm_sweep(0.5, &sampler, &NormConfig::default()).unwrap();
        assert!(report.holds(), "{report}");
        assert!(report.max_observed >= 1.0 - 1e-4);
    }
}
