//! Radii of convexity of `BS(α)` and `BK(α)`.
//!
//! For `BS(α)` the radius is `min{r′, r″}` with `r′` the root in (0, 1) of
//! `l_α(r) = α²r⁴ + αr³ + (1−2α)r² − 3r + 1` and `r″` the root of
//! `m_α(r) = 1 − r − αr²`. For `BK(α)` it is `r″` alone.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::class::ClassTag;
use crate::coefficients::{falsify, member, SamplerConfig};
use crate::domain::AlphaParam;
use crate::error::{Error, Result};
use crate::report::BoundReport;
use crate::roots::{bisect, bisect_polished, first_sign_change, Root};
use crate::schwarz::rng_for;

/// Width of the bisection bracket on termination.
pub const ROOT_XTOL: f64 = 1e-13;
/// Offset from `r′` at which the sign change of the extremal is probed.
pub const SIGN_CHANGE_OFFSET: f64 = 1e-6;
/// Lower limit for `ψ_α` on the grid.
pub const PSI_TOLERANCE: f64 = 1e-12;
/// Allowed increase of `h(r, ·)` between ordered samples.
pub const MONOTONE_TOLERANCE: f64 = 1e-12;

/// `l_α(r) = α²r⁴ + αr³ + (1−2α)r² − 3r + 1`.
pub fn l_alpha(alpha: f64, r: f64) -> f64 {
    (((alpha * alpha * r + alpha) * r + (1.0 - 2.0 * alpha)) * r - 3.0) * r + 1.0
}

pub fn l_alpha_derivative(alpha: f64, r: f64) -> f64 {
    ((4.0 * alpha * alpha * r + 3.0 * alpha) * r + 2.0 * (1.0 - 2.0 * alpha)) * r - 3.0
}

/// `m_α(r) = 1 − r − αr²`.
pub fn m_alpha(alpha: f64, r: f64) -> f64 {
    1.0 - r - alpha * r * r
}

/// The quartic `1 − 3r + (1−6α)r² + 5αr³ + 5α²r⁴` whose smallest positive root
/// was once conjectured to give the radius of convexity of `BS(α)`.
pub fn cho_quartic(alpha: f64, r: f64) -> f64 {
    (((5.0 * alpha * alpha * r + 5.0 * alpha) * r + (1.0 - 6.0 * alpha)) * r - 3.0) * r + 1.0
}

/// `(√(1+4α) − 1)/(2α)`, written as `2/(1 + √(1+4α))` so that α = 0 gives
/// the limit 1 without cancellation.
pub fn m_alpha_root(alpha: f64) -> f64 {
    2.0 / (1.0 + (1.0 + 4.0 * alpha).sqrt())
}

/// Root of `m_α` on `[0, 1]` by bisection (cross-check of [`m_alpha_root`]).
pub fn m_alpha_root_bisection(alpha: f64) -> Result<Root> {
    bisect_polished("m_alpha", |r| m_alpha(alpha, r), |r| -1.0 - 2.0 * alpha * r, 0.0, 1.0, ROOT_XTOL)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RadiusResult {
    pub alpha: f64,
    /// Root of `l_α` in (0, 1).
    pub r_prime: f64,
    /// Root of `m_α` in (0, 1]; equal to 1 at α = 0.
    pub r_doubleprime: f64,
    pub radius: f64,
    pub bracket_prime: (f64, f64),
    pub bracket_doubleprime: (f64, f64),
    pub residual_prime: f64,
    pub residual_doubleprime: f64,
}

/// Radius of convexity of `BS(α)`.
pub fn radius_bs(alpha: f64) -> Result<RadiusResult> {
    AlphaParam::new(alpha)?;
    let rp = bisect_polished(
        "l_alpha",
        |r| l_alpha(alpha, r),
        |r| l_alpha_derivative(alpha, r),
        1e-9,
        1.0 - 1e-9,
        ROOT_XTOL,
    )?;
    let rpp = m_alpha_root(alpha);
    Ok(RadiusResult {
        alpha,
        r_prime: rp.root,
        r_doubleprime: rpp,
        radius: rp.root.min(rpp),
        bracket_prime: (rp.lo, rp.hi),
        bracket_doubleprime: (0.0, 1.0),
        residual_prime: rp.residual,
        residual_doubleprime: m_alpha(alpha, rpp).abs(),
    })
}

/// Radius of convexity of `BK(α)`: `(√(1+4α) − 1)/(2α)`, and 1 at α = 0.
pub fn radius_bk(alpha: f64) -> Result<f64> {
    AlphaParam::new(alpha)?;
    Ok(m_alpha_root(alpha))
}

/// Lower bound `h(r, s)` for `Re(1 + zf″/f′)` over `BS(α)` at `|z| = r`,
/// `|ω(z)| = s`.
pub fn h(alpha: f64, r: f64, s: f64) -> Result<f64> {
    if !(0.0 <= s && s <= r && r < 1.0) {
        return Err(Error::DomainViolation(format!("h needs 0 <= s <= r < 1, got r = {r}, s = {s}")));
    }
    let m = m_alpha(alpha, s);
    let q = 1.0 - alpha * s * s;
    if m <= 0.0 || q <= 0.0 {
        return Err(Error::DomainViolation(format!("h needs m_alpha(s) > 0, got {m} at s = {s}")));
    }
    Ok(1.0 - s / q - r * (1.0 + alpha * s * s) * (1.0 - s * s) / ((1.0 - r * r) * m * q))
}

/// `∂h/∂s = −(1+αs²)/(1−αs²)² − r ψ_α(s) / ((1−r²) m_α(s)² (1−αs²)²)`.
pub fn h_ds(alpha: f64, r: f64, s: f64) -> f64 {
    let q = 1.0 - alpha * s * s;
    let m = m_alpha(alpha, s);
    -(1.0 + alpha * s * s) / (q * q) - r * psi(alpha, s) / ((1.0 - r * r) * m * m * q * q)
}

/// `ψ_α(s) = 1 − (2−6α)s + (1−4α)s² − 4α(1+α)s³ + α(4−α)s⁴ + 2α²(3−α)s⁵ − α²s⁶`.
pub fn psi(alpha: f64, s: f64) -> f64 {
    let a = alpha;
    let coeffs =
        [1.0, -(2.0 - 6.0 * a), 1.0 - 4.0 * a, -4.0 * a * (1.0 + a), a * (4.0 - a), 2.0 * a * a * (3.0 - a), -a * a];
    coeffs.iter().rev().fold(0.0, |acc, c| acc * s + c)
}

/// `1 + z f₁″(z)/f₁′(z) = 1 + z(2+z)/((1+z−αz²)(1−αz²))` for the extremal
/// `f₁(z) = z((1+√α z)/(1−√α z))^{1/(2√α)}`.
pub fn f1_convexity_quantity(alpha: f64, z: Complex64) -> Result<Complex64> {
    let z2 = z * z;
    let den = (1.0 + z - alpha * z2) * (1.0 - alpha * z2);
    if den.norm() == 0.0 {
        return Err(Error::PoleHit(z));
    }
    Ok(1.0 + z * (2.0 + z) / den)
}

/// Minimum of `Re(1 + zf₁″/f₁′)` over `angles` equally spaced points of `|z| = r`.
pub fn f1_circle_min(alpha: f64, r: f64, angles: usize) -> Result<(f64, Complex64)> {
    let mut best = (f64::INFINITY, Complex64::new(0.0, 0.0));
    for k in 0..angles {
        let z = Complex64::from_polar(r, 2.0 * PI * k as f64 / angles as f64);
        let v = f1_convexity_quantity(alpha, z)?.re;
        if v < best.0 {
            best = (v, z);
        }
    }
    Ok(best)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RadiusVerification {
    pub alpha: f64,
    pub radius: RadiusResult,
    pub psi_min: f64,
    pub psi_argmin: f64,
    pub h_pairs: usize,
    pub h_monotone_violations: usize,
    /// `Re(1 + zf₁″/f₁′)` at `z = −(r′ − δ)` and `z = −(r′ + δ)`.
    pub value_inside: f64,
    pub value_outside: f64,
    /// `|1 + zf₁″/f₁′|` at `z = −(r″ − δ)`.
    pub blowup_magnitude: f64,
    /// Minimum over the circle `|z| = radius − δ`.
    pub circle_min: f64,
    pub circle_witness: Complex64,
    pub passes: bool,
}

/// Grid and sampling checks behind the BS radius of convexity:
/// nonnegativity of `ψ_α` on `[0, 0.999]`, monotone decrease of `h(r, ·)` on
/// `h_pairs` random ordered pairs, and the sign change of the extremal's
/// convexity quantity across `r′`.
pub fn verify_radius_bs(alpha: f64, h_pairs: usize, seed: u64) -> Result<RadiusVerification> {
    let radius = radius_bs(alpha)?;
    let delta = SIGN_CHANGE_OFFSET;

    let (psi_min, psi_argmin) = (0..1000)
        .map(|k| {
            let s = k as f64 * 1e-3;
            (psi(alpha, s), s)
        })
        .fold((f64::INFINITY, 0.0), |a, b| if b.0 < a.0 { b } else { a });

    let violations = h_monotone_violations(alpha, h_pairs, seed)?;

    let value_inside = f1_convexity_quantity(alpha, Complex64::new(-(radius.r_prime - delta), 0.0))?.re;
    let value_outside = f1_convexity_quantity(alpha, Complex64::new(-(radius.r_prime + delta), 0.0))?.re;
    let blowup_magnitude = f1_convexity_quantity(alpha, Complex64::new(-(radius.r_doubleprime - delta), 0.0))?.norm();
    let (circle_min, circle_witness) = f1_circle_min(alpha, radius.radius - delta, 1024)?;

    let passes = psi_min >= -PSI_TOLERANCE
        && violations == 0
        && value_inside > 0.0
        && value_outside < 0.0
        && blowup_magnitude > 1e3
        && circle_min > 0.0;
    Ok(RadiusVerification {
        alpha,
        radius,
        psi_min,
        psi_argmin,
        h_pairs,
        h_monotone_violations: violations,
        value_inside,
        value_outside,
        blowup_magnitude,
        circle_min,
        circle_witness,
        passes,
    })
}

/// Counts sampled pairs `s₁ ≤ s₂ ≤ r` with `h(r, s₁) < h(r, s₂) − 1e−12`.
/// Samples keep `s` below `r″` where `h` is defined.
pub fn h_monotone_violations(alpha: f64, pairs: usize, seed: u64) -> Result<usize> {
    let cap = m_alpha_root(alpha) * (1.0 - 1e-9);
    let mut rng = rng_for(seed, alpha.to_bits());
    let mut violations = 0;
    for _ in 0..pairs {
        let r: f64 = rng.random_range(0.0..0.999);
        let top = r.min(cap);
        let (mut s1, mut s2): (f64, f64) = (rng.random_range(0.0..=top), rng.random_range(0.0..=top));
        if s1 > s2 {
            std::mem::swap(&mut s1, &mut s2);
        }
        if h(alpha, r, s1)? < h(alpha, r, s2)? - MONOTONE_TOLERANCE {
            violations += 1;
        }
    }
    Ok(violations)
}

/// Smallest positive root of [`cho_quartic`] in (0, 1].
pub fn cho_root(alpha: f64) -> Result<Root> {
    let q = |r| cho_quartic(alpha, r);
    let (lo, hi) =
        first_sign_change(q, 0.0, 1.0, 1e-3).ok_or(Error::BracketFailure { name: "cho_quartic", lo: 0.0, hi: 1.0 })?;
    bisect("cho_quartic", q, lo, hi, ROOT_XTOL)
}

/// Comparison of the conjectured radius with the computed one.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChoComparison {
    pub alpha: f64,
    pub cho_root: f64,
    pub radius: f64,
    pub difference: f64,
    pub differs: bool,
    /// Radius halfway between the two candidates, where the extremal decides.
    pub witness_radius: f64,
    /// `l_α(r)/((1−αr²) m_α(r))` at the witness radius: a lower bound for
    /// `Re(1 + zf″/f′)` over the whole class.
    pub class_lower_bound: f64,
    /// Minimum of `Re(1 + zf₁″/f₁′)` over the witness circle.
    pub extremal_min: f64,
    /// Whether the evidence supports the computed radius over the conjecture.
    pub radius_confirmed: bool,
}

pub const CHO_DIFFERENCE_THRESHOLD: f64 = 1e-6;

pub fn refute_cho(alpha: f64) -> Result<ChoComparison> {
    let radius = radius_bs(alpha)?;
    let cho = cho_root(alpha)?.root;
    let difference = (cho - radius.radius).abs();
    let differs = difference > CHO_DIFFERENCE_THRESHOLD;

    // The computed radius must itself be sharp: the extremal changes sign there.
    let sharp = f1_convexity_quantity(alpha, Complex64::new(-(radius.r_prime - SIGN_CHANGE_OFFSET), 0.0))?.re > 0.0
        && f1_convexity_quantity(alpha, Complex64::new(-(radius.r_prime + SIGN_CHANGE_OFFSET), 0.0))?.re < 0.0;

    let witness_radius = 0.5 * (cho + radius.radius);
    let r = witness_radius;
    let class_lower_bound = l_alpha(alpha, r) / ((1.0 - alpha * r * r) * m_alpha(alpha, r));
    let (extremal_min, _) = f1_circle_min(alpha, r, 1024)?;

    let witness_ok = if !differs {
        true
    } else if cho < radius.radius {
        // every member is still convex beyond the conjectured radius
        class_lower_bound > 0.0 && extremal_min > 0.0
    } else {
        // the extremal already fails before the conjectured radius
        extremal_min < 0.0
    };
    Ok(ChoComparison {
        alpha,
        cho_root: cho,
        radius: radius.radius,
        difference,
        differs,
        witness_radius,
        class_lower_bound,
        extremal_min,
        radius_confirmed: sharp && witness_ok,
    })
}

/// Tolerance of the convexity spot check on random members.
pub const CONVEXITY_TOLERANCE: f64 = 1e-8;

/// Largest value of `−Re(1 + zf″/f′)` on `|z| = r` over the sampled members
/// of `class`, with `r` the class radius minus `1e−3`. Holds when no sampled
/// member fails convexity by more than `1e−8`.
pub fn convexity_spot_check(
    class: ClassTag,
    alpha: f64,
    sampler: &SamplerConfig,
    angles: usize,
) -> Result<BoundReport> {
    let r = match class {
        ClassTag::BS => radius_bs(alpha)?.radius,
        ClassTag::BK => radius_bk(alpha)?,
    } - 1e-3;
    let mut sampler = *sampler;
    sampler.tolerance = CONVEXITY_TOLERANCE;
    let name = format!("{class}({alpha}) -Re(1+zf''/f') at r={r:.6}");
    Ok(falsify(&name, 0.0, &sampler, |w| {
        let m = member(class, w, alpha, sampler.order).expect("alpha validated");
        (0..angles)
            .map(|k| {
                let z = Complex64::from_polar(r, 2.0 * PI * k as f64 / angles as f64);
                m.convexity_quantity(z).map_or(f64::INFINITY, |v| -v.re)
            })
            .fold(f64::NEG_INFINITY, f64::max)
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_identities() {
        for r in [0.0, 0.2, 0.5, 0.9] {
            assert!((l_alpha(0.0, r) - (r * r - 3.0 * r + 1.0)).abs() < 1e-15);
            assert_eq!(cho_quartic(0.0, r), l_alpha(0.0, r));
            assert!((psi(0.0, r) - (1.0 - r) * (1.0 - r)).abs() < 1e-15);
        }
        for a in [0.0, 0.3, 1.0] {
            assert_eq!(m_alpha(a, 0.0), 1.0);
            assert_eq!(m_alpha(a, 1.0), -a);
            assert_eq!(psi(a, 0.0), 1.0);
        }
    }

    #[test]
    fn alpha_zero_radius() {
        let r = radius_bs(0.0).unwrap();
        assert!((r.radius - (3.0 - 5f64.sqrt()) / 2.0).abs() < 1e-10);
        assert_eq!(r.r_doubleprime, 1.0);
    }

    #[test]
    fn bisection_oracles() {
        for a in [0.5, 1.0] {
            let r = radius_bs(a).unwrap();
            let oracle = bisect("l", |x| l_alpha(a, x), 0.0, 1.0, 1e-15).unwrap().root;
            assert!((r.r_prime - oracle).abs() < 1e-12);
            assert!(r.residual_prime <= 1e-11);
            assert!(r.r_prime < r.r_doubleprime);
        }
        assert!((radius_bs(1.0).unwrap().r_doubleprime - (5f64.sqrt() - 1.0) / 2.0).abs() < 1e-15);
        assert!((radius_bs(0.5).unwrap().r_doubleprime - (3f64.sqrt() - 1.0)).abs() < 1e-15);
    }

    #[test]
    fn bk_radius_values() {
        assert_eq!(radius_bk(0.0).unwrap(), 1.0);
        assert!((radius_bk(1.0).unwrap() - (5f64.sqrt() - 1.0) / 2.0).abs() < 1e-15);
        assert!((radius_bk(0.25).unwrap() - 2.0 * (2f64.sqrt() - 1.0)).abs() < 1e-15);
        assert!(radius_bk(1.5).is_err());
    }

    #[test]
    fn h_on_the_diagonal() {
        for a in [0.0, 0.4, 1.0] {
            for r in [0.1, 0.3, 0.5] {
                let expect = l_alpha(a, r) / ((1.0 - a * r * r) * m_alpha(a, r));
                assert!((h(a, r, r).unwrap() - expect).abs() < 1e-13);
            }
        }
        assert!(h(0.5, 0.3, 0.4).is_err());
        assert!(h(1.0, 0.9, 0.7).is_err()); // s beyond r''
    }

    #[test]
    fn h_derivative_matches_finite_difference() {
        let eps = 1e-6;
        for a in [0.0, 0.3, 0.8] {
            for (r, s) in [(0.5, 0.2), (0.6, 0.45), (0.9, 0.1)] {
                let fd = (h(a, r, s + eps).unwrap() - h(a, r, s - eps).unwrap()) / (2.0 * eps);
                assert!((fd - h_ds(a, r, s)).abs() < 1e-6, "a={a} r={r} s={s}");
                assert!(h_ds(a, r, s) < 0.0);
            }
        }
    }

    #[test]
    fn extremal_sign_change_matches_l_alpha() {
        for a in [0.0, 0.25, 0.7] {
            for r in [0.1, 0.3, 0.5] {
                let v = f1_convexity_quantity(a, Complex64::new(-r, 0.0)).unwrap().re;
                let expect = l_alpha(a, r) / (m_alpha(a, r) * (1.0 - a * r * r));
                assert!((v - expect).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn verification_passes() {
        for a in [0.0, 0.5, 1.0] {
            let v = verify_radius_bs(a, 2000, 7).unwrap();
            assert!(v.passes, "{v:?}");
        }
    }

    #[test]
    fn conjecture_comparison() {
        let zero = refute_cho(0.0).unwrap();
        assert!(zero.difference < 1e-12 && !zero.differs);
        let one = refute_cho(1.0).unwrap();
        assert!(one.differs && one.radius_confirmed, "{one:?}");
        // independent bisection of both polynomials at α = 1
        let c = bisect("cho", |r| cho_quartic(1.0, r), 0.0, 0.3, 1e-15).unwrap().root;
        let l = bisect("l", |r| l_alpha(1.0, r), 0.0, 1.0, 1e-15).unwrap().root;
        assert!((one.cho_root - c).abs() < 1e-12 && (one.radius - l).abs() < 1e-12);
    }

    #[test]
    fn random_members_convex_inside_radius() {
        let sampler = SamplerConfig { samples: 200, ..SamplerConfig::default() };
        for class in [ClassTag::BS, ClassTag::BK] {
            for alpha in [0.0, 0.5, 1.0] {
                let report = convexity_spot_check(class, alpha, &sampler, 256).unwrap();
                assert!(report.holds(), "{report}");
            }
        }
    }

    #[test]
    fn bk_radius_decreasing() {
        let values: Vec<f64> = (0..=100).map(|i| radius_bk(i as f64 / 100.0).unwrap()).collect();
        assert!(values.windows(2).all(|w| w[1] < w[0]));
    }
}
