//! Named verification sections shared by `verify` and `all-checks`.

use booth_core::class::{extremal_fn, from_schwarz_bs, ClassTag};
use booth_core::coefficients::{
    a_bounds, falsify_log_coeffs, falsify_taylor, gamma_bound, log_coeffs, member, taylor_extremal_maps, SamplerConfig,
};
use booth_core::domain::boundary_residual;
use booth_core::preschwarzian::{bk_norm_sweep, norm_estimate, NormConfig, PreSchwarzian, NORM_TOLERANCE};
use booth_core::radius::{
    convexity_spot_check, l_alpha, m_alpha, m_alpha_root_bisection, radius_bk, refute_cho, verify_radius_bs,
};
use booth_core::schwarz::sample_indexed;
use booth_core::{Result, SchwarzMap};
use serde::Serialize;
use serde_json::{json, Value};

/// Tolerance for sharp-bound attainment and violation.
pub const BOUND_TOLERANCE: f64 = 1e-9;
pub const ROUND_TRIP_TOLERANCE: f64 = 1e-12;
pub const BOUNDARY_TOLERANCE: f64 = 1e-10;
pub const ROOT_AGREEMENT: f64 = 1e-12;
pub const L_RESIDUAL: f64 = 1e-11;
pub const M_RESIDUAL: f64 = 1e-14;

#[derive(Debug, Serialize)]
pub struct Section {
    pub name: String,
    pub holds: bool,
    pub details: Value,
}

impl Section {
    fn new(name: impl Into<String>, holds: bool, details: Value) -> Self {
        Section { name: name.into(), holds, details }
    }

    pub fn line(&self) -> String {
        format!("{} {}", if self.holds { "PASS" } else { "FAIL" }, self.name)
    }
}

pub fn sampler(seed: u64, samples: usize, order: usize) -> SamplerConfig {
    SamplerConfig { seed, samples, order, ..SamplerConfig::default() }
}

/// `|a₂|, |a₃|, |a₄|` searches plus attainment by the extremal maps.
pub fn taylor(class: ClassTag, alpha: f64, sampler: &SamplerConfig) -> Result<Section> {
    let reports = falsify_taylor(class, alpha, sampler)?;
    let bounds = a_bounds(class, alpha);
    let extremal: Vec<f64> = taylor_extremal_maps(alpha, 8)
        .iter()
        .enumerate()
        .map(|(i, w)| member(class, w, alpha, 8).map(|m| m.a(i + 2).norm()))
        .collect::<Result<_>>()?;
    let attained = extremal.iter().zip(bounds).all(|(v, b)| (v - b).abs() <= BOUND_TOLERANCE);
    let holds = attained && reports.iter().all(|r| r.holds());
    Ok(Section::new(
        format!("{class}({alpha}) taylor bounds"),
        holds,
        json!({ "alpha": alpha, "bounds": bounds, "reports": reports, "extremal_values": extremal, "attained": attained }),
    ))
}

/// `|γₙ|` searches for `n ≤ n_max`, and `γₙ(fₙ) = 1/(2n)` wherever that is
/// the bound.
pub fn logs(alpha: f64, n_max: usize, sampler: &SamplerConfig) -> Result<Section> {
    let reports = falsify_log_coeffs(alpha, n_max, sampler)?;
    let mut attainment = Vec::new();
    for n in 1..=n_max {
        let bound = gamma_bound(alpha, n);
        if bound == 0.5 / n as f64 {
            let f = extremal_fn(n, alpha, n + 1)?;
            let g = log_coeffs(&f, n)?.gamma(n).norm();
            attainment
                .push(json!({ "n": n, "gamma": g, "bound": bound, "attained": (g - bound).abs() <= BOUND_TOLERANCE }));
        }
    }
    let attained = attainment.iter().all(|a| a["attained"] == json!(true));
    let holds = attained && reports.iter().all(|r| r.holds());
    Ok(Section::new(
        format!("BS({alpha}) logarithmic coefficients n<={n_max}"),
        holds,
        json!({ "alpha": alpha, "reports": reports, "attainment": attainment }),
    ))
}

pub fn radius_bs(alpha: f64, h_pairs: usize, seed: u64) -> Result<Section> {
    let v = verify_radius_bs(alpha, h_pairs, seed)?;
    let residual_l = l_alpha(alpha, v.radius.r_prime).abs();
    let residual_m = m_alpha(alpha, v.radius.r_doubleprime).abs();
    let holds = v.passes && residual_l <= L_RESIDUAL && residual_m <= M_RESIDUAL;
    Ok(Section::new(
        format!("BS({alpha}) radius of convexity"),
        holds,
        json!({ "verification": v, "residual_l": residual_l, "residual_m": residual_m }),
    ))
}

pub fn radius_bk_agreement(alpha: f64) -> Result<Section> {
    let closed = radius_bk(alpha)?;
    let root = m_alpha_root_bisection(alpha)?;
    let diff = (closed - root.root).abs();
    Ok(Section::new(
        format!("BK({alpha}) radius closed form"),
        diff <= ROOT_AGREEMENT,
        json!({ "alpha": alpha, "closed_form": closed, "bisection": root, "difference": diff }),
    ))
}

pub fn convexity(class: ClassTag, alpha: f64, sampler: &SamplerConfig) -> Result<Section> {
    let report = convexity_spot_check(class, alpha, sampler, 256)?;
    Ok(Section::new(format!("{class}({alpha}) random members convex inside radius"), report.holds(), json!(report)))
}

pub fn cho(alphas: &[f64]) -> Result<Section> {
    let rows = alphas.iter().map(|&a| refute_cho(a)).collect::<Result<Vec<_>>>()?;
    let confirmed: Vec<f64> = rows.iter().filter(|r| r.differs && r.radius_confirmed).map(|r| r.alpha).collect();
    Ok(Section::new(
        "conjectured quartic radius refuted",
        !confirmed.is_empty(),
        json!({ "rows": rows, "refuted_at": confirmed }),
    ))
}

pub fn g1_norm(alpha: f64, config: &NormConfig) -> Section {
    let e = norm_estimate(&PreSchwarzian::G1 { alpha }, config);
    let holds = !e.diverged && (e.value - 1.0).abs() <= NORM_TOLERANCE;
    Section::new(format!("g1({alpha}) norm is 1"), holds, json!(e))
}

/// `f₁` has an infinite norm for α > 0; at α = 0 the critical point sits on
/// the unit circle and the norm is 9/4.
pub fn f1_norm(alpha: f64, config: &NormConfig) -> Section {
    let e = norm_estimate(&PreSchwarzian::F1 { alpha }, config);
    let holds = if alpha > 0.0 { e.diverged && e.value > 1e2 } else { !e.diverged };
    Section::new(format!("f1({alpha}) norm divergence"), holds, json!(e))
}

pub fn identity_norm(config: &NormConfig) -> Section {
    let e = norm_estimate(&PreSchwarzian::Identity, config);
    Section::new("identity norm is 0", e.value == 0.0 && !e.diverged, json!(e))
}

pub fn bk_norms(alpha: f64, sampler: &SamplerConfig, config: &NormConfig) -> Result<Section> {
    let report = bk_norm_sweep(alpha, sampler, config)?;
    // g₁ (ω = z) is among the searched maps, so the maximum must reach 1
    let sharp = report.max_observed >= 1.0 - NORM_TOLERANCE;
    Ok(Section::new(
        format!("BK({alpha}) norm at most 1"),
        report.holds() && sharp,
        json!({ "report": report, "sharp": sharp }),
    ))
}

/// Series round trips and constructor consistency on seeded inputs.
pub fn infrastructure(seed: u64, maps: u64) -> Result<Section> {
    let mut round_trip = 0.0f64;
    for i in 0..maps {
        let order = 8 + (i as usize % 41);
        let b = sample_indexed(seed, i, 5, order).series().clone();
        let a = b.exp0();
        round_trip = round_trip.max(a.log1()?.max_abs_diff(&b)).max(a.log1()?.exp0().max_abs_diff(&a));
        let d = b.integrate0().derivative();
        for k in 0..order {
            round_trip = round_trip.max((d.coeff(k) - b.coeff(k)).norm());
        }
    }

    let mut extremal = 0.0f64;
    for alpha in (0..=10).map(|i| i as f64 / 10.0) {
        for n in 1..=4 {
            let f = extremal_fn(n, alpha, 32)?;
            let g = from_schwarz_bs(&SchwarzMap::monomial(n, 32)?, alpha, 32)?;
            extremal = extremal.max(f.f.max_abs_diff(&g.f));
        }
    }

    let mut boundary = 0.0f64;
    for alpha in (0..=9).map(|i| i as f64 / 10.0) {
        for k in 0..720 {
            boundary = boundary.max(boundary_residual(alpha, 2.0 * std::f64::consts::PI * k as f64 / 720.0)?);
        }
    }

    let holds =
        round_trip <= ROUND_TRIP_TOLERANCE && extremal <= ROUND_TRIP_TOLERANCE && boundary <= BOUNDARY_TOLERANCE;
    Ok(Section::new(
        "series and constructor consistency",
        holds,
        json!({
            "round_trip_max_error": round_trip,
            "round_trip_maps": maps,
            "extremal_max_difference": extremal,
            "boundary_max_residual": boundary,
        }),
    ))
}
