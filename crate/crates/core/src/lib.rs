//! Numerical toolkit for the Booth-lemniscate classes `BS(α)` and `BK(α)`:
//! functions `f(z) = z + a₂z² + …` with `zf′/f − 1` (respectively `zf″/f′`)
//! subordinate to `F_α(z) = z/(1 − αz²)`.
//!
//! Everything reduces to truncated complex power series ([`series`]) driven by
//! Schwarz functions ([`schwarz`]). On top of that sit the class constructors,
//! sharp coefficient bounds and their falsification searches, radii of
//! convexity, and pre-Schwarzian norm estimates.

pub mod class;
pub mod coefficients;
pub mod domain;
pub mod error;
pub mod preschwarzian;
pub mod radius;
pub mod report;
pub mod roots;
pub mod schwarz;
pub mod series;

pub use domain::{AlphaParam, BoothDomain};
pub use error::{Error, Result};
pub use schwarz::SchwarzMap;
pub use series::TruncatedSeries;
