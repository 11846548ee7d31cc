//! Truncated power series with complex coefficients.
//!
//! A [`TruncatedSeries`] of order `N` stores `c_0, ..., c_N` and represents the
//! class of all analytic germs agreeing with `Σ c_k z^k` up to `z^N`. Every
//! operation is exact on the retained coefficients; combining two series
//! yields the smaller of the two orders.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Tolerance on the constant term when pinning the principal branch of
/// `log1` and `powc`.
pub const UNIT_CONSTANT_TOLERANCE: f64 = 1e-12;

/// Default truncation order.
pub const DEFAULT_ORDER: usize = 32;

#[derive(Clone, PartialEq, Serialize, Deserialize)]
pub struct TruncatedSeries {
    coeffs: Vec<Complex64>,
}

impl fmt::Debug for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("TruncatedSeries").field("order", &self.order()).field("coeffs", &self.coeffs).finish()
    }
}

impl TruncatedSeries {
    /// Series of order `coeffs.len() - 1`.
    ///
    /// # Panics
    /// If `coeffs` is empty.
    pub fn new(coeffs: Vec<Complex64>) -> Self {
        assert!(!coeffs.is_empty(), "a truncated series needs at least c_0");
        Self { coeffs }
    }

    /// Pads with zeros or truncates `coeffs` to exactly `order + 1` entries.
    pub fn from_coeffs(mut coeffs: Vec<Complex64>, order: usize) -> Self {
        coeffs.resize(order + 1, ZERO);
        Self { coeffs }
    }

    pub fn from_real(coeffs: &[f64], order: usize) -> Self {
        Self::from_coeffs(coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect(), order)
    }

    pub fn zero(order: usize) -> Self {
        Self { coeffs: vec![ZERO; order + 1] }
    }

    pub fn constant(c: Complex64, order: usize) -> Self {
        let mut s = Self::zero(order);
        s.coeffs[0] = c;
        s
    }

    pub fn one(order: usize) -> Self {
        Self::constant(ONE, order)
    }

    /// `c · z^k`, or the zero series when `k > order`.
    pub fn monomial(k: usize, c: Complex64, order: usize) -> Self {
        let mut s = Self::zero(order);
        if k <= order {
            s.coeffs[k] = c;
        }
        s
    }

    /// The identity germ `z`.
    pub fn variable(order: usize) -> Self {
        Self::monomial(1, ONE, order)
    }

    /// `z / (1 - α z²) = Σ_k α^k z^{2k+1}`.
    pub fn booth(alpha: f64, order: usize) -> Self {
        let mut s = Self::zero(order);
        let mut pow = 1.0;
        for k in (1..=order).step_by(2) {
            s.coeffs[k] = Complex64::new(pow, 0.0);
            pow *= alpha;
        }
        s
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Complex64> {
        self.coeffs
    }

    /// Coefficient of `z^k`; zero beyond the truncation order.
    #[inline]
    pub fn coeff(&self, k: usize) -> Complex64 {
        self.coeffs.get(k).copied().unwrap_or(ZERO)
    }

    /// Index of the lowest exactly-nonzero coefficient.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| *c != ZERO)
    }

    pub fn truncate(&self, order: usize) -> Self {
        Self::from_coeffs(self.coeffs[..=order.min(self.order())].to_vec(), order.min(self.order()))
    }

    /// Multiplication by `z^k`. The order grows by `k` since no information is lost.
    pub fn shift_up(&self, k: usize) -> Self {
        let mut coeffs = vec![ZERO; k];
        coeffs.extend_from_slice(&self.coeffs);
        Self { coeffs }
    }

    /// Division by `z^k`; the order drops by `k`.
    pub fn shift_down(&self, k: usize) -> Result<Self> {
        if let Some(v) = self.valuation() {
            if v < k {
                return Err(Error::DivisionByZeroSeries { dividend: v, divisor: k });
            }
        }
        if k > self.order() {
            return Err(Error::DivisionByZeroSeries { dividend: self.order(), divisor: k });
        }
        Ok(Self { coeffs: self.coeffs[k..].to_vec() })
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self { coeffs: self.coeffs.iter().map(|a| a * c).collect() }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let n = self.order().min(other.order());
        let mut out = vec![ZERO; n + 1];
        for (i, a) in self.coeffs[..=n].iter().enumerate() {
            if *a == ZERO {
                continue;
            }
            for (j, b) in other.coeffs[..=n - i].iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self { coeffs: out }
    }

    /// Quotient `self / divisor` for a divisor with nonzero constant term.
    pub fn div(&self, divisor: &Self) -> Result<Self> {
        let b0 = divisor.coeffs[0];
        if b0 == ZERO {
            // plain division works at order 0; common zeros need div_cancelling
            let divisor_val = divisor.valuation().unwrap_or(divisor.order() + 1);
            return Err(Error::DivisionByZeroSeries { dividend: 0, divisor: divisor_val });
        }
        let n = self.order().min(divisor.order());
        let inv_b0 = b0.inv();
        let mut q = vec![ZERO; n + 1];
        for k in 0..=n {
            let mut acc = self.coeffs[k];
            for j in 1..=k {
                acc -= divisor.coeffs[j] * q[k - j];
            }
            q[k] = acc * inv_b0;
        }
        Ok(Self { coeffs: q })
    }

    /// Quotient of two series sharing a zero of order `k` at the origin, where
    /// `k` is the divisor's valuation. Both sides are divided by `z^k` first,
    /// so the result has order `min(N_a, N_b) - k`.
    pub fn div_cancelling(&self, divisor: &Self) -> Result<Self> {
        let vb =
            divisor.valuation().ok_or(Error::DivisionByZeroSeries { dividend: 0, divisor: divisor.order() + 1 })?;
        if let Some(va) = self.valuation() {
            if vb > va {
                return Err(Error::DivisionByZeroSeries { dividend: va, divisor: vb });
            }
        }
        let n = self.order().min(divisor.order());
        self.truncate(n).shift_down(vb)?.div(&divisor.truncate(n).shift_down(vb)?)
    }

    /// `outer ∘ inner`, evaluated by Horner's rule in the series ring.
    pub fn compose(&self, inner: &Self) -> Result<Self> {
        if inner.coeffs[0] != ZERO {
            return Err(Error::CompositionRequiresZeroConstant(inner.coeffs[0]));
        }
        let n = self.order().min(inner.order());
        let inner = inner.truncate(n);
        let mut acc = Self::constant(self.coeffs[n], n);
        for k in (0..n).rev() {
            acc = acc.mul(&inner);
            acc.coeffs[0] += self.coeffs[k];
        }
        Ok(acc)
    }

    /// Principal logarithm of a series with constant term 1.
    pub fn log1(&self) -> Result<Self> {
        self.require_unit_constant()?;
        let n = self.order();
        let a = &self.coeffs;
        let mut b = vec![ZERO; n + 1];
        for k in 1..=n {
            let mut acc = a[k] * k as f64;
            for j in 1..k {
                acc -= b[j] * a[k - j] * j as f64;
            }
            b[k] = acc / (k as f64 * a[0]);
        }
        Ok(Self { coeffs: b })
    }

    /// Exponential of an arbitrary series.
    pub fn exp0(&self) -> Self {
        let n = self.order();
        let a = &self.coeffs;
        let mut b = vec![ZERO; n + 1];
        b[0] = a[0].exp();
        for k in 1..=n {
            let mut acc = ZERO;
            for j in 1..=k {
                acc += a[j] * b[k - j] * j as f64;
            }
            b[k] = acc / k as f64;
        }
        Self { coeffs: b }
    }

    /// `self^γ` on the branch taking the value 1 at the origin.
    pub fn powc(&self, gamma: Complex64) -> Result<Self> {
        self.require_unit_constant()?;
        let n = self.order();
        let a = &self.coeffs;
        let mut b = vec![ZERO; n + 1];
        b[0] = ONE;
        for k in 1..=n {
            let mut acc = ZERO;
            for j in 1..=k {
                acc += a[j] * b[k - j] * ((gamma + 1.0) * j as f64 - k as f64);
            }
            b[k] = acc / (k as f64 * a[0]);
        }
        Ok(Self { coeffs: b })
    }

    /// Termwise derivative; the order drops by one.
    pub fn derivative(&self) -> Self {
        if self.order() == 0 {
            return Self::zero(0);
        }
        Self { coeffs: self.coeffs[1..].iter().enumerate().map(|(k, c)| c * (k + 1) as f64).collect() }
    }

    /// Antiderivative vanishing at 0, kept at the same order: the image of
    /// the top coefficient `c_N` would land on `z^{N+1}` and is dropped.
    pub fn integrate0(&self) -> Self {
        let n = self.order();
        let mut out = vec![ZERO];
        out.extend(self.coeffs[..n].iter().enumerate().map(|(k, c)| c / (k + 1) as f64));
        Self { coeffs: out }
    }

    /// Horner evaluation of the retained polynomial.
    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.coeffs.iter().rev().fold(ZERO, |acc, c| acc * z + c)
    }

    /// Largest coefficientwise distance to `other` over the common orders.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        let n = self.order().min(other.order());
        (0..=n).map(|k| (self.coeffs[k] - other.coeffs[k]).norm()).fold(0.0, f64::max)
    }

    fn require_unit_constant(&self) -> Result<()> {
        if (self.coeffs[0] - ONE).norm() > UNIT_CONSTANT_TOLERANCE {
            return Err(Error::BranchPointAtOrigin(self.coeffs[0]));
        }
        Ok(())
    }
}

impl Add for &TruncatedSeries {
    type Output = TruncatedSeries;

    fn add(self, rhs: Self) -> TruncatedSeries {
        let n = self.order().min(rhs.order());
        TruncatedSeries { coeffs: (0..=n).map(|k| self.coeffs[k] + rhs.coeffs[k]).collect() }
    }
}

impl Sub for &TruncatedSeries {
    type Output = TruncatedSeries;

    fn sub(self, rhs: Self) -> TruncatedSeries {
        let n = self.order().min(rhs.order());
        TruncatedSeries { coeffs: (0..=n).map(|k| self.coeffs[k] - rhs.coeffs[k]).collect() }
    }
}

impl Mul for &TruncatedSeries {
    type Output = TruncatedSeries;

    fn mul(self, rhs: Self) -> TruncatedSeries {
        TruncatedSeries::mul(self, rhs)
    }
}

impl Mul<Complex64> for &TruncatedSeries {
    type Output = TruncatedSeries;

    fn mul(self, rhs: Complex64) -> TruncatedSeries {
        self.scale(rhs)
    }
}

impl Add<Complex64> for &TruncatedSeries {
    type Output = TruncatedSeries;

    fn add(self, rhs: Complex64) -> TruncatedSeries {
        let mut out = self.clone();
        out.coeffs[0] += rhs;
        out
    }
}

impl Neg for &TruncatedSeries {
    type Output = TruncatedSeries;

    fn neg(self) -> TruncatedSeries {
        TruncatedSeries { coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn real(coeffs: &[f64], order: usize) -> TruncatedSeries {
        TruncatedSeries::from_real(coeffs, order)
    }

    #[test]
    fn add_sub_scale() {
        let s = &real(&[1.0, 1.0], 4) + &real(&[1.0, -1.0], 4);
        assert_eq!(s, real(&[2.0], 4));
        let z = TruncatedSeries::variable(4);
        assert_eq!(&z - &z, TruncatedSeries::zero(4));
        assert_eq!(real(&[0.0, 1.0, 1.0], 4).scale(c(2.0)), real(&[0.0, 2.0, 2.0], 4));
        // orders combine to the minimum
        assert_eq!((&real(&[1.0], 3) + &real(&[1.0], 7)).order(), 3);
    }

    #[test]
    fn products() {
        assert_eq!(&real(&[1.0, 1.0], 5) * &real(&[1.0, -1.0], 5), real(&[1.0, 0.0, -1.0], 5));
        let z = TruncatedSeries::variable(5);
        assert_eq!(&z * &z, real(&[0.0, 0.0, 1.0], 5));
        let p = &real(&[1.0, 1.0, 1.0], 5) * &real(&[1.0, -1.0], 5);
        assert_eq!(p, real(&[1.0, 0.0, 0.0, -1.0], 5));
    }

    #[test]
    fn geometric_quotients() {
        let q = real(&[1.0], 6).div(&real(&[1.0, -1.0], 6)).unwrap();
        assert_eq!(q, real(&[1.0; 7], 6));

        let alpha = 0.3;
        let f = TruncatedSeries::variable(9).div(&real(&[1.0, 0.0, -alpha], 9)).unwrap();
        assert!(f.max_abs_diff(&TruncatedSeries::booth(alpha, 9)) < 1e-15);
        assert!((f.coeff(5) - c(alpha * alpha)).norm() < 1e-15);
    }

    #[test]
    fn cancelling_division() {
        let q = real(&[0.0, 1.0, 1.0], 6).div_cancelling(&TruncatedSeries::variable(6)).unwrap();
        assert_eq!(q, real(&[1.0, 1.0], 5));
        // plain division refuses a vanishing divisor
        assert!(matches!(
            real(&[0.0, 1.0, 1.0], 6).div(&TruncatedSeries::variable(6)),
            Err(Error::DivisionByZeroSeries { .. })
        ));
        // divisor vanishing to higher order than the dividend
        let err = TruncatedSeries::variable(6).div_cancelling(&real(&[0.0, 0.0, 1.0], 6));
        assert_eq!(err, Err(Error::DivisionByZeroSeries { dividend: 1, divisor: 2 }));
    }

    #[test]
    fn composition() {
        let alpha = 0.25;
        let f = TruncatedSeries::booth(alpha, 12);
        let z2 = real(&[0.0, 0.0, 1.0], 12);
        let g = f.compose(&z2).unwrap();
        let mut expect = vec![0.0; 13];
        expect[2] = 1.0;
        expect[6] = alpha;
        expect[10] = alpha * alpha;
        assert!(g.max_abs_diff(&real(&expect, 12)) < 1e-15);

        assert_eq!(f.compose(&TruncatedSeries::variable(12)).unwrap(), f);

        // exp(log(1+z)) - 1 = z: compose (exp(w) - 1) with log(1+z)
        let n = 16;
        let exp_minus_one = &TruncatedSeries::variable(n).exp0() + c(-1.0);
        let log1p = real(&[1.0, 1.0], n).log1().unwrap();
        let back = exp_minus_one.compose(&log1p).unwrap();
        assert!(back.max_abs_diff(&TruncatedSeries::variable(n)) < 1e-13);

        assert_eq!(f.compose(&real(&[1.0, 1.0], 12)), Err(Error::CompositionRequiresZeroConstant(c(1.0))));
    }

    #[test]
    fn logarithm_and_powers() {
        let n = 10;
        let l = real(&[1.0], n).div(&real(&[1.0, -1.0], n)).unwrap().log1().unwrap();
        for k in 1..=n {
            assert!((l.coeff(k) - c(1.0 / k as f64)).norm() < 1e-15, "k = {k}");
        }
        let sq = real(&[1.0, 1.0], n).powc(c(2.0)).unwrap();
        assert!(sq.max_abs_diff(&real(&[1.0, 2.0, 1.0], n)) < 1e-15);

        assert_eq!(real(&[2.0, 1.0], n).log1(), Err(Error::BranchPointAtOrigin(c(2.0))));
        assert!(matches!(real(&[0.0, 1.0], n).powc(c(0.5)), Err(Error::BranchPointAtOrigin(_))));
    }

    #[test]
    fn booth_extremal_power_matches_log_series_oracle() {
        // ((1+√α z)/(1-√α z))^{1/(2√α)} at α = 1/4, checked against exp of
        // the odd series Σ α^k z^{2k+1}/(2k+1).
        let alpha: f64 = 0.25;
        let n = 20;
        let sa = alpha.sqrt();
        let base = real(&[1.0, sa], n).div(&real(&[1.0, -sa], n)).unwrap();
        let p = base.powc(c(1.0 / (2.0 * sa))).unwrap();

        let mut log = vec![0.0; n + 1];
        let mut pow = 1.0;
        for k in (1..=n).step_by(2) {
            log[k] = pow / k as f64;
            pow *= alpha;
        }
        let oracle = real(&log, n).exp0();
        assert!(p.max_abs_diff(&oracle) < 1e-14);
        let head = [1.0, 1.0, 0.5, 1.0 / 6.0 + 1.0 / 12.0];
        for (k, h) in head.iter().enumerate() {
            assert!((p.coeff(k) - c(*h)).norm() < 1e-15);
        }
    }

    #[test]
    fn calculus() {
        assert_eq!(real(&[0.0, 1.0, 1.0], 4).derivative(), real(&[1.0, 2.0], 3));
        assert_eq!(real(&[1.0, 1.0], 4).integrate0(), real(&[0.0, 1.0, 0.5], 4));
        let a = real(&[0.3, -1.0, 2.0, 0.5, 7.0], 4);
        let back = a.integrate0().derivative();
        assert_eq!(back.order(), 3);
        assert!(back.max_abs_diff(&a) < 1e-15);
    }

    #[test]
    fn evaluation() {
        assert_eq!(real(&[1.0, 1.0, 1.0], 2).eval(c(0.0)), c(1.0));
        assert_eq!(real(&[1.0, -1.0], 2).eval(c(1.0)), c(0.0));
        let v = TruncatedSeries::booth(0.5, 40).eval(c(0.5));
        assert!((v - c(0.5 / 0.875)).norm() < 1e-12);
    }

    #[test]
    fn shifting() {
        let s = real(&[0.0, 0.0, 3.0, 1.0], 3);
        assert_eq!(s.shift_down(2).unwrap(), real(&[3.0, 1.0], 1));
        assert!(s.shift_down(3).is_err());
        assert_eq!(s.shift_up(1).order(), 4);
        assert_eq!(s.valuation(), Some(2));
        assert_eq!(TruncatedSeries::zero(3).valuation(), None);
    }
}
