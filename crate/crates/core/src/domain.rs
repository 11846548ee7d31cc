//! The target domain `Ω(α) = F_α(𝔻)` of the Booth function `F_α(z) = z/(1 - αz²)`.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// `3 - 2√2`: the largest α for which `F_α` is convex.
pub const CONVEXITY_THRESHOLD: f64 = 0.171_572_875_253_809_9;

/// Points with `|Re w|` below this are treated as lying on the imaginary axis
/// when testing membership in the slit plane `Ω(1)`.
pub const SLIT_TOLERANCE: f64 = 1e-12;

/// The class parameter α ∈ [0, 1].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AlphaParam {
    alpha: f64,
    sqrt_alpha: f64,
    convexity_flag: bool,
}

impl AlphaParam {
    pub fn new(alpha: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&alpha) {
            return Err(Error::InvalidParameter(format!("alpha = {alpha} is outside [0, 1]")));
        }
        Ok(Self { alpha, sqrt_alpha: alpha.sqrt(), convexity_flag: alpha <= CONVEXITY_THRESHOLD })
    }

    #[inline]
    pub fn value(&self) -> f64 {
        self.alpha
    }

    #[inline]
    pub fn sqrt(&self) -> f64 {
        self.sqrt_alpha
    }

    /// Whether `F_α` is convex, i.e. `α ≤ 3 - 2√2`.
    #[inline]
    pub fn is_convex(&self) -> bool {
        self.convexity_flag
    }
}

/// `F_α(z) = z / (1 - αz²)`.
pub fn f_alpha(alpha: f64, z: Complex64) -> Result<Complex64> {
    let den = 1.0 - alpha * z * z;
    if den == Complex64::new(0.0, 0.0) {
        return Err(Error::PoleHit(z));
    }
    Ok(z / den)
}

/// `F_α′(z) = (1 + αz²) / (1 - αz²)²`.
pub fn f_alpha_derivative(alpha: f64, z: Complex64) -> Result<Complex64> {
    let z2 = z * z;
    let den = 1.0 - alpha * z2;
    if den == Complex64::new(0.0, 0.0) {
        return Err(Error::PoleHit(z));
    }
    Ok((1.0 + alpha * z2) / (den * den))
}

/// `z F_α′ / F_α = (1 + αz²)/(1 - αz²)`.
pub fn starlike_quantity(alpha: f64, z: Complex64) -> Complex64 {
    let z2 = z * z;
    (1.0 + alpha * z2) / (1.0 - alpha * z2)
}

/// `1 + z F_α″ / F_α′ = 1 + 2αz²/(1 + αz²) + 4αz²/(1 - αz²)`.
pub fn convexity_quantity(alpha: f64, z: Complex64) -> Complex64 {
    let w = alpha * z * z;
    1.0 + 2.0 * w / (1.0 + w) + 4.0 * w / (1.0 - w)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoothDomain {
    pub alpha: AlphaParam,
}

impl BoothDomain {
    pub fn new(alpha: f64) -> Result<Self> {
        Ok(Self { alpha: AlphaParam::new(alpha)? })
    }

    /// Membership in `Ω(α)`.
    ///
    /// For α < 1 the defining quartic is evaluated multiplied through by
    /// `(1-α)²(1+α)²`, which keeps it finite as α → 1; the inequality is strict
    /// and the origin counts as interior. `Ω(1)` is the plane minus the
    /// imaginary-axis slits `{iy : |y| ≥ 1/2}`.
    pub fn contains(&self, w: Complex64) -> bool {
        let a = self.alpha.value();
        if a >= 1.0 {
            return !(w.re.abs() < SLIT_TOLERANCE && w.im.abs() >= 0.5);
        }
        if w.re == 0.0 && w.im == 0.0 {
            return true;
        }
        scaled_quartic(a, w) < 0.0
    }
}

fn scaled_quartic(alpha: f64, w: Complex64) -> f64 {
    let (x2, y2) = (w.re * w.re, w.im * w.im);
    let (p, m) = ((1.0 + alpha) * (1.0 + alpha), (1.0 - alpha) * (1.0 - alpha));
    (x2 + y2) * (x2 + y2) * p * m - x2 * p - y2 * m
}

/// The quartic `(x²+y²)² - x²/(1-α)² - y²/(1+α)²` bounding `Ω(α)`, α < 1.
pub fn lemniscate_quartic(alpha: f64, w: Complex64) -> f64 {
    let (x2, y2) = (w.re * w.re, w.im * w.im);
    (x2 + y2) * (x2 + y2) - x2 / ((1.0 - alpha) * (1.0 - alpha)) - y2 / ((1.0 + alpha) * (1.0 + alpha))
}

/// `F_α(e^{iθ})`, a point of `∂Ω(α)` for α < 1.
pub fn boundary_point(alpha: f64, theta: f64) -> Result<Complex64> {
    f_alpha(alpha, Complex64::from_polar(1.0, theta))
}

/// Value of the boundary quartic at `F_α(e^{iθ})`; vanishes up to rounding.
pub fn boundary_residual(alpha: f64, theta: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&alpha) {
        return Err(Error::InvalidParameter(format!("boundary residual needs 0 <= alpha < 1, got {alpha}")));
    }
    Ok(lemniscate_quartic(alpha, boundary_point(alpha, theta)?))
}

/// Closed boundary polyline with `points` vertices (α < 1), or for α = 1 the
/// two slits clipped to `|Im w| ≤ slit_extent`.
pub fn boundary_curves(alpha: f64, points: usize, slit_extent: f64) -> Result<Vec<Vec<Complex64>>> {
    AlphaParam::new(alpha)?;
    if alpha < 1.0 {
        let curve = (0..=points)
            .map(|k| boundary_point(alpha, 2.0 * PI * k as f64 / points as f64))
            .collect::<Result<Vec<_>>>()?;
        Ok(vec![curve])
    } else {
        Ok(vec![
            vec![Complex64::new(0.0, 0.5), Complex64::new(0.0, slit_extent)],
            vec![Complex64::new(0.0, -0.5), Complex64::new(0.0, -slit_extent)],
        ])
    }
}

/// Minima of `Re(zF′/F)` and `Re(1 + zF″/F′)` over a polar grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ShapeReport {
    pub alpha: f64,
    pub starlike_min: f64,
    pub starlike_witness: Complex64,
    pub convex_min: f64,
    pub convex_witness: Complex64,
    pub tolerance: f64,
    pub starlike_holds: bool,
    pub convex_holds: bool,
}

pub fn target_shape_checks(alpha: f64, radii: &[f64], angles: usize, tolerance: f64) -> Result<ShapeReport> {
    AlphaParam::new(alpha)?;
    let mut star = (f64::INFINITY, Complex64::new(0.0, 0.0));
    let mut conv = star;
    for &r in radii {
        if !(0.0..1.0).contains(&r) {
            return Err(Error::DomainViolation(format!("grid radius {r} is not in [0, 1)")));
        }
        for k in 0..angles {
            let z = Complex64::from_polar(r, 2.0 * PI * k as f64 / angles as f64);
            let s = starlike_quantity(alpha, z).re;
            if s < star.0 {
                star = (s, z);
            }
            let c = convexity_quantity(alpha, z).re;
            if c < conv.0 {
                conv = (c, z);
            }
        }
    }
    Ok(ShapeReport {
        alpha,
        starlike_min: star.0,
        starlike_witness: star.1,
        convex_min: conv.0,
        convex_witness: conv.1,
        tolerance,
        starlike_holds: star.0 >= -tolerance,
        convex_holds: conv.0 >= -tolerance,
    })
}
