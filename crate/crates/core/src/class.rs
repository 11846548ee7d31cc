//! Members of `BS(α)` and `BK(α)` built from Schwarz functions.
//!
//! With `B = F_α ∘ ω = Σ bₙ zⁿ`, a member of `BS(α)` satisfies
//! `z (log(f/z))′ = B`, so `log(f/z) = Σ (bₙ/n) zⁿ`; a member of `BK(α)`
//! satisfies the same relation with `f′` in place of `f/z`.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::domain::{f_alpha_derivative, AlphaParam, BoothDomain};
use crate::error::{Error, Result};
use crate::schwarz::SchwarzMap;
use crate::series::TruncatedSeries;

const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Default radii of [`membership_probe`].
pub const PROBE_RADII: [f64; 4] = [0.5, 0.7, 0.85, 0.95];
/// Default number of angles of [`membership_probe`].
pub const PROBE_ANGLES: usize = 256;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ClassTag {
    /// `zf′/f − 1 ≺ F_α`
    BS,
    /// `zf″/f′ ≺ F_α`
    BK,
}

impl std::fmt::Display for ClassTag {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            ClassTag::BS => "BS",
            ClassTag::BK => "BK",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassMember {
    pub class_tag: ClassTag,
    pub alpha: AlphaParam,
    pub omega: SchwarzMap,
    /// `f = z + a₂z² + …`
    pub f: TruncatedSeries,
    pub fprime: TruncatedSeries,
}

/// `F_α(ω) = ω/(1 − αω²)` as a series.
pub fn subordinate_series(omega: &TruncatedSeries, alpha: f64) -> Result<TruncatedSeries> {
    let w2 = omega.mul(omega);
    let den = &TruncatedSeries::one(w2.order()) - &w2.scale(Complex64::new(alpha, 0.0));
    omega.div(&den)
}

/// `Σ (bₙ/n) zⁿ` for `b = Σ bₙ zⁿ` with `b₀ = 0`.
fn divided_by_index(b: &TruncatedSeries) -> TruncatedSeries {
    let coeffs = b
        .coeffs()
        .iter()
        .enumerate()
        .map(|(k, c)| if k == 0 { Complex64::new(0.0, 0.0) } else { c / k as f64 })
        .collect();
    TruncatedSeries::new(coeffs)
}

/// `log(fₙ/z) = Σ_k α^k z^{n(2k+1)} / (n(2k+1))`; at α = 0 only `zⁿ/n` survives.
fn extremal_log_series(n: usize, alpha: f64, order: usize) -> TruncatedSeries {
    let mut coeffs = vec![Complex64::new(0.0, 0.0); order + 1];
    let mut pow = 1.0;
    let mut k = 0;
    while n * (2 * k + 1) <= order {
        let m = n * (2 * k + 1);
        coeffs[m] = Complex64::new(pow / m as f64, 0.0);
        pow *= alpha;
        k += 1;
    }
    TruncatedSeries::new(coeffs)
}

fn check_order(order: usize) -> Result<()> {
    if order < 1 {
        return Err(Error::InvalidParameter("truncation order must be at least 1".into()));
    }
    Ok(())
}

impl ClassMember {
    fn from_bs_log(class_alpha: AlphaParam, omega: SchwarzMap, log_f_over_z: &TruncatedSeries) -> Self {
        let full = log_f_over_z.exp0().shift_up(1);
        let order = log_f_over_z.order();
        Self { class_tag: ClassTag::BS, alpha: class_alpha, omega, fprime: full.derivative(), f: full.truncate(order) }
    }

    fn from_bk_log(class_alpha: AlphaParam, omega: SchwarzMap, log_fprime: &TruncatedSeries) -> Self {
        let fprime = log_fprime.exp0();
        Self { class_tag: ClassTag::BK, alpha: class_alpha, omega, f: fprime.integrate0(), fprime }
    }

    /// Taylor coefficient `a_k` of `f`.
    pub fn a(&self, k: usize) -> Complex64 {
        self.f.coeff(k)
    }

    pub fn order(&self) -> usize {
        self.f.order()
    }

    /// `F_α(ω(z))` recovered from the series of `f`: `zf′/f − 1` for BS,
    /// `zf″/f′` for BK.
    pub fn reconstructed_subordinate(&self) -> Result<TruncatedSeries> {
        match self.class_tag {
            ClassTag::BS => {
                let q = self.fprime.shift_up(1).div_cancelling(&self.f)?;
                Ok(&q + Complex64::new(-1.0, 0.0))
            }
            ClassTag::BK => self.fprime.derivative().shift_up(1).div(&self.fprime),
        }
    }

    /// `F_α(ω(z))`, the quantity subordinate to `F_α`, evaluated pointwise.
    pub fn subordinate_value(&self, z: Complex64) -> Result<Complex64> {
        let w = self.omega.eval(z);
        let den = 1.0 - self.alpha.value() * w * w;
        if den.norm() == 0.0 {
            return Err(Error::PoleHit(z));
        }
        Ok(w / den)
    }

    /// `f″(z)/f′(z)` evaluated through ω in closed form (no truncation).
    pub fn pre_schwarzian(&self, z: Complex64) -> Result<Complex64> {
        let alpha = self.alpha.value();
        let w = self.omega.eval(z);
        let den = 1.0 - alpha * w * w;
        if den.norm() == 0.0 {
            return Err(Error::PoleHit(z));
        }
        // B(z)/z, continuous at the origin
        let b_over_z = self.omega.eval_over_z(z) / den;
        match self.class_tag {
            ClassTag::BK => Ok(b_over_z),
            ClassTag::BS => {
                let one_plus_b = 1.0 + w / den;
                if one_plus_b.norm() < 1e-14 {
                    return Err(Error::CriticalPointHit(z));
                }
                let b_prime = f_alpha_derivative(alpha, w)? * self.omega.derivative(z);
                Ok(b_over_z + b_prime / one_plus_b)
            }
        }
    }

    /// `1 + z f″(z)/f′(z)` in closed form.
    pub fn convexity_quantity(&self, z: Complex64) -> Result<Complex64> {
        Ok(1.0 + z * self.pre_schwarzian(z)?)
    }

    /// Truncated-series evaluation of `f″/f′`, valid for `|z| ≤ 0.9`.
    pub fn series_pre_schwarzian(&self, z: Complex64) -> Result<Complex64> {
        if z.norm() > SERIES_EVAL_RADIUS {
            return Err(Error::OutsideEvaluationRadius { radius: z.norm(), limit: SERIES_EVAL_RADIUS });
        }
        let d1 = self.fprime.eval(z);
        if d1.norm() < 1e-14 {
            return Err(Error::CriticalPointHit(z));
        }
        Ok(self.fprime.derivative().eval(z) / d1)
    }
}

/// Radius up to which truncated-series ratios are evaluated.
pub const SERIES_EVAL_RADIUS: f64 = 0.9;

/// The member of `BS(α)` with `zf′/f − 1 = F_α(ω(z))`.
pub fn from_schwarz_bs(omega: &SchwarzMap, alpha: f64, order: usize) -> Result<ClassMember> {
    check_order(order)?;
    let alpha = AlphaParam::new(alpha)?;
    let b = subordinate_series(&omega.series_at(order), alpha.value())?;
    Ok(ClassMember::from_bs_log(alpha, omega.with_order(order), &divided_by_index(&b)))
}

/// The member of `BK(α)` with `zf″/f′ = F_α(ω(z))`.
pub fn from_schwarz_bk(omega: &SchwarzMap, alpha: f64, order: usize) -> Result<ClassMember> {
    check_order(order)?;
    let alpha = AlphaParam::new(alpha)?;
    let b = subordinate_series(&omega.series_at(order), alpha.value())?;
    Ok(ClassMember::from_bk_log(alpha, omega.with_order(order), &divided_by_index(&b)))
}

/// `fₙ(z) = z((1 + √α zⁿ)/(1 − √α zⁿ))^{1/(2n√α)}` from its closed-form
/// logarithm, with the limit `z·exp(zⁿ/n)` at α = 0.
pub fn extremal_fn(n: usize, alpha: f64, order: usize) -> Result<ClassMember> {
    check_order(order)?;
    let a = AlphaParam::new(alpha)?;
    let omega = SchwarzMap::monomial(n, order)?;
    Ok(ClassMember::from_bs_log(a, omega, &extremal_log_series(n, alpha, order)))
}

/// `∫₀^z fₙ(t)/t dt`, the BK counterpart of [`extremal_fn`]. `n = 1` gives
/// `g₁` and `n = 3` gives `g₂`, the extremals of the BK coefficient bounds.
pub fn extremal_bk(n: usize, alpha: f64, order: usize) -> Result<ClassMember> {
    check_order(order)?;
    let a = AlphaParam::new(alpha)?;
    let omega = SchwarzMap::monomial(n, order)?;
    Ok(ClassMember::from_bk_log(a, omega, &extremal_log_series(n, alpha, order)))
}

/// Outcome of probing `f(𝔻_r) ⊂ Ω(α)` on a grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MembershipReport {
    pub class_tag: ClassTag,
    pub alpha: f64,
    pub points_checked: usize,
    pub violations: usize,
    /// Up to 16 offending `(z, w(z))` pairs.
    pub sample_violations: Vec<(Complex64, Complex64)>,
    /// `Σ_{k ≥ N/2} |w_k| r_max^k`; a rough size of the truncated tail at the
    /// outermost radius. Verdicts near the boundary are advisory when this is
    /// not small.
    pub tail_magnitude: f64,
}

/// Evaluates `w = zf′/f − 1` (BS) or `w = zf″/f′` (BK) from the series of a
/// normalized `f` and reports grid points with `w ∉ Ω(α)`.
pub fn membership_probe(
    f: &TruncatedSeries,
    alpha: f64,
    mode: ClassTag,
    radii: &[f64],
    angles: usize,
) -> Result<MembershipReport> {
    let (f0, f1) = (f.coeff(0), f.coeff(1));
    if f0.norm() > 1e-12 || (f1 - ONE).norm() > 1e-12 {
        return Err(Error::NonNormalizedInput { f0, f1 });
    }
    let domain = BoothDomain::new(alpha)?;
    let fprime = f.derivative();
    let w = match mode {
        ClassTag::BS => &fprime.shift_up(1).div_cancelling(f)? + Complex64::new(-1.0, 0.0),
        ClassTag::BK => fprime.derivative().shift_up(1).div(&fprime)?,
    };
    let r_max = radii.iter().copied().fold(0.0, f64::max);
    let n = w.order();
    let tail_magnitude = (n.div_ceil(2)..=n).map(|k| w.coeff(k).norm() * r_max.powi(k as i32)).sum();

    let mut report = MembershipReport {
        class_tag: mode,
        alpha,
        points_checked: 0,
        violations: 0,
        sample_violations: Vec::new(),
        tail_magnitude,
    };
    for &r in radii {
        for k in 0..angles {
            let z = Complex64::from_polar(r, 2.0 * PI * k as f64 / angles as f64);
            let value = w.eval(z);
            report.points_checked += 1;
            if !domain.contains(value) {
                report.violations += 1;
                if report.sample_violations.len() < 16 {
                    report.sample_violations.push((z, value));
                }
            }
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn close(a: Complex64, b: f64) -> bool {
        (a - c(b)).norm() < 1e-12
    }

    #[test]
    fn identity_map_gives_first_extremal() {
        for alpha in [0.0, 0.3, 1.0] {
            let m = from_schwarz_bs(&SchwarzMap::identity(8), alpha, 8).unwrap();
            assert!(close(m.a(1), 1.0) && close(m.a(2), 1.0) && close(m.a(3), 0.5));
            assert!(close(m.a(4), (1.0 + 2.0 * alpha) / 6.0));
        }
    }

    #[test]
    fn zero_map_gives_identity_function() {
        let m = from_schwarz_bs(&SchwarzMap::zero(8), 0.4, 8).unwrap();
        assert_eq!(m.f, TruncatedSeries::variable(8));
        let g = from_schwarz_bk(&SchwarzMap::zero(8), 0.4, 8).unwrap();
        assert_eq!(g.f, TruncatedSeries::variable(8));
    }

    #[test]
    fn cubic_map_gives_third_extremal() {
        let m = from_schwarz_bs(&SchwarzMap::monomial(3, 8).unwrap(), 0.25, 8).unwrap();
        assert!(close(m.a(2), 0.0) && close(m.a(3), 0.0) && close(m.a(4), 1.0 / 3.0));
    }

    #[test]
    fn bk_extremals() {
        let alpha = 0.6;
        let g1 = from_schwarz_bk(&SchwarzMap::identity(8), alpha, 8).unwrap();
        let expect = [0.0, 1.0, 0.5, 1.0 / 6.0, (1.0 + 2.0 * alpha) / 24.0];
        for (k, v) in expect.iter().enumerate() {
            assert!(close(g1.a(k), *v), "a_{k} = {}", g1.a(k));
        }
        for alpha in [0.0, 0.5, 1.0] {
            let g2 = from_schwarz_bk(&SchwarzMap::monomial(3, 8).unwrap(), alpha, 8).unwrap();
            assert!(close(g2.a(2), 0.0) && close(g2.a(3), 0.0) && close(g2.a(4), 1.0 / 12.0));
            assert!(g2.f.max_abs_diff(&extremal_bk(3, alpha, 8).unwrap().f) < 1e-14);
        }
    }

    #[test]
    fn closed_form_extremals() {
        // α = 0: z·e^z
        let f = extremal_fn(1, 0.0, 10).unwrap();
        let mut fact = 1.0;
        for k in 1..=10 {
            assert!(close(f.a(k), 1.0 / fact), "a_{k}");
            fact *= k as f64;
        }
        for alpha in [0.0, 0.3, 1.0] {
            let f2 = extremal_fn(2, alpha, 10).unwrap();
            assert!(close(f2.a(2), 0.0) && close(f2.a(3), 0.5));
        }
        // α = 1: log(f₁/z) = z + z³/3 + z⁵/5 + …
        let l = extremal_log_series(1, 1.0, 9);
        for (k, v) in [(1, 1.0), (2, 0.0), (3, 1.0 / 3.0), (5, 0.2), (7, 1.0 / 7.0), (9, 1.0 / 9.0)] {
            assert!(close(l.coeff(k), v));
        }
    }

    #[test]
    fn closed_form_and_schwarz_routes_agree() {
        for n in 1..=4 {
            for i in 0..=10 {
                let alpha = i as f64 / 10.0;
                let direct = extremal_fn(n, alpha, 32).unwrap();
                let via = from_schwarz_bs(&SchwarzMap::monomial(n, 32).unwrap(), alpha, 32).unwrap();
                let err = direct.f.max_abs_diff(&via.f);
                assert!(err <= 1e-12, "n={n} alpha={alpha} err={err}");
            }
        }
    }

    #[test]
    fn exact_pre_schwarzian_of_first_extremal() {
        let alpha = 0.5;
        let f1 = extremal_fn(1, alpha, 32).unwrap();
        for z in [Complex64::new(0.3, 0.2), Complex64::new(-0.5, 0.1), Complex64::new(0.0, 0.0)] {
            let closed = (2.0 + z) / ((1.0 + z - alpha * z * z) * (1.0 - alpha * z * z));
            assert!((f1.pre_schwarzian(z).unwrap() - closed).norm() < 1e-13);
            assert!((f1.series_pre_schwarzian(z).unwrap() - closed).norm() < 1e-8);
        }
        assert!(f1.series_pre_schwarzian(Complex64::new(0.95, 0.0)).is_err());
    }

    #[test]
    fn probes() {
        let f1 = extremal_fn(1, 0.5, 32).unwrap();
        let r = membership_probe(&f1.f, 0.5, ClassTag::BS, &[0.5, 0.7, 0.9], 256).unwrap();
        assert_eq!(r.violations, 0, "{r:?}");

        let id = TruncatedSeries::variable(16);
        for alpha in [0.0, 0.5, 1.0] {
            let r = membership_probe(&id, alpha, ClassTag::BS, &PROBE_RADII, PROBE_ANGLES).unwrap();
            assert_eq!(r.violations, 0);
        }

        // Koebe function z/(1-z)²: zf′/f − 1 = 2z/(1−z) leaves the unit disk Ω(0)
        let koebe = TruncatedSeries::variable(32).div(&TruncatedSeries::from_real(&[1.0, -2.0, 1.0], 32)).unwrap();
        let r = membership_probe(&koebe, 0.0, ClassTag::BS, &[0.5], 64).unwrap();
        assert!(r.violations > 0);

        let bad = TruncatedSeries::from_real(&[0.0, 2.0], 8);
        assert!(matches!(membership_probe(&bad, 0.3, ClassTag::BS, &[0.5], 8), Err(Error::NonNormalizedInput { .. })));
    }
}
