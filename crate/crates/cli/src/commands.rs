use std::collections::BTreeMap;

use booth_core::class::{extremal_bk, extremal_fn, ClassMember, ClassTag};
use booth_core::coefficients::{log_coeffs, member, FALSIFY_TOLERANCE};
use booth_core::domain::boundary_curves;
use booth_core::preschwarzian::{norm_estimate, NormConfig, PreSchwarzian, NORM_TOLERANCE};
use booth_core::radius::{self, refute_cho, CHO_DIFFERENCE_THRESHOLD, CONVEXITY_TOLERANCE, PSI_TOLERANCE};
use booth_core::schwarz::sample_indexed;
use booth_core::Result as CoreResult;
use serde_json::{json, Value};

use crate::args::{Cli, Command, Format, NormFunction, VerifyTarget};
use crate::checks::{self, Section};
use crate::output::{config_error, emit, num, ConfigEcho, Failure, Report, Table};
use crate::plot::{self, Curves};

const DEFAULT_BOUND_SAMPLES: usize = 10_000;
const DEFAULT_MEMBER_SAMPLES: usize = 1_000;
const DEFAULT_H_PAIRS: usize = 10_000;
const MAX_DEGREE: usize = 5;

/// Runs the command; `Ok(false)` means a verdict failed.
pub fn run(cli: &Cli) -> Result<bool, Failure> {
    validate(cli)?;
    let (name, options, default_format) = describe(&cli.command);
    let alphas = resolve_alphas(cli)?;
    let report = match &cli.command {
        Command::Coeffs { extremal, sample } => coeffs(cli, &alphas, *extremal, *sample)?,
        Command::Verify { target } => verify(cli, &alphas, *target)?,
        Command::Radius => radius_cmd(cli, &alphas)?,
        Command::Norm { function } => norm(cli, &alphas, *function)?,
        Command::PlotDomain { points } => plot_domain(&alphas, *points)?,
        Command::RefuteCho => refute(&alphas)?,
        Command::AllChecks => all_checks(cli)?,
    };
    let echo = ConfigEcho {
        command: name,
        alphas,
        seed: cli.seed,
        samples: cli.samples,
        order: cli.order,
        class: cli.class,
        options,
    };
    emit(cli, &echo, &report, default_format)?;
    Ok(report.holds.unwrap_or(true))
}

fn describe(command: &Command) -> (String, Value, Format) {
    match command {
        Command::Coeffs { extremal, sample } => {
            ("coeffs".into(), json!({ "extremal": extremal, "sample": sample }), Format::Json)
        }
        Command::Verify { target } => ("verify".into(), json!({ "target": target }), Format::Json),
        Command::Radius => ("radius".into(), Value::Null, Format::Json),
        Command::Norm { function } => ("norm".into(), json!({ "function": function }), Format::Json),
        Command::PlotDomain { points } => ("plot-domain".into(), json!({ "points": points }), Format::Svg),
        Command::RefuteCho => ("refute-cho".into(), Value::Null, Format::Json),
        Command::AllChecks => ("all-checks".into(), Value::Null, Format::Json),
    }
}

fn validate(cli: &Cli) -> Result<(), Failure> {
    if !(8..=128).contains(&cli.order) {
        return Err(config_error(format!("--order must be in 8..=128, got {}", cli.order)));
    }
    if cli.samples == Some(0) {
        return Err(config_error("--samples must be at least 1"));
    }
    Ok(())
}

/// `--alpha` values, the `--sweep` grid, or the command's default grid.
fn resolve_alphas(cli: &Cli) -> Result<Vec<f64>, Failure> {
    if cli.sweep && !cli.alpha.is_empty() {
        return Err(config_error("--sweep and --alpha are mutually exclusive"));
    }
    if cli.sweep {
        return grid(cli.step);
    }
    if !cli.alpha.is_empty() {
        for &a in &cli.alpha {
            if !(0.0..=1.0).contains(&a) {
                return Err(config_error(format!("alpha must lie in [0, 1], got {a}")));
            }
        }
        return Ok(cli.alpha.clone());
    }
    match cli.command {
        Command::PlotDomain { .. } => Ok(vec![0.25, 0.5, 0.75]),
        Command::RefuteCho => grid(cli.step),
        Command::AllChecks => Ok(Vec::new()),
        _ => Err(config_error("this command needs --alpha or --sweep")),
    }
}

/// `0, 1/n, …, 1` where `step = 1/n`.
fn grid(step: f64) -> Result<Vec<f64>, Failure> {
    let n = (1.0 / step).round();
    if !(step > 0.0 && step <= 1.0) || (n * step - 1.0).abs() > 1e-9 {
        return Err(config_error(format!("--step must be 1/n for a positive integer n, got {step}")));
    }
    let n = n as usize;
    Ok((0..=n).map(|i| i as f64 / n as f64).collect())
}

fn class_or(cli: &Cli, default: ClassTag) -> ClassTag {
    cli.class.map_or(default, ClassTag::from)
}

fn tolerances(entries: &[(&'static str, f64)]) -> BTreeMap<&'static str, f64> {
    entries.iter().copied().collect()
}

fn sections_report(sections: Vec<Section>, tol: &[(&'static str, f64)]) -> Report {
    let holds = sections.iter().all(|s| s.holds);
    Report {
        summary: sections.iter().map(Section::line).collect(),
        result: json!({ "sections": sections }),
        holds: Some(holds),
        tolerances: tolerances(tol),
        ..Report::default()
    }
}

fn coeffs(cli: &Cli, alphas: &[f64], extremal: Option<usize>, sample: Option<u64>) -> Result<Report, Failure> {
    let class = class_or(cli, ClassTag::BS);
    let n = cli.order;
    let mut table = Table::new(&["alpha", "k", "a_re", "a_im", "gamma_re", "gamma_im"]);
    let mut entries = Vec::new();
    for &alpha in alphas {
        let (label, m): (String, ClassMember) = match sample {
            Some(index) => {
                let w = sample_indexed(cli.seed, index, MAX_DEGREE, n);
                (w.to_string(), member(class, &w, alpha, n)?)
            }
            None => {
                let k = extremal.unwrap_or(1);
                match class {
                    ClassTag::BS => (format!("f{k}"), extremal_fn(k, alpha, n)?),
                    ClassTag::BK => (format!("bk extremal n={k}"), extremal_bk(k, alpha, n)?),
                }
            }
        };
        let gammas = log_coeffs(&m, n - 1)?.gammas;
        let a: Vec<_> = (1..=n).map(|k| m.a(k)).collect();
        for k in 1..=n {
            let (g_re, g_im) = gammas.get(k - 1).map_or((String::new(), String::new()), |g| (num(g.re), num(g.im)));
            table.row(&[num(alpha), k.to_string(), num(a[k - 1].re), num(a[k - 1].im), g_re, g_im]);
        }
        entries.push(json!({ "alpha": alpha, "class": class, "member": label, "a": a, "gamma": gammas }));
    }
    Ok(Report {
        summary: vec![format!("{} coefficient lists for {class}", entries.len())],
        result: json!({ "members": entries }),
        csv: Some(table.finish()),
        ..Report::default()
    })
}

fn verify(cli: &Cli, alphas: &[f64], target: VerifyTarget) -> Result<Report, Failure> {
    let samples = cli.samples;
    let mut sections = Vec::new();
    let tol: &[(&'static str, f64)] = match target {
        VerifyTarget::Bounds => {
            let s = checks::sampler(cli.seed, samples.unwrap_or(DEFAULT_BOUND_SAMPLES), cli.order);
            let classes = match cli.class {
                Some(c) => vec![c.into()],
                None => vec![ClassTag::BS, ClassTag::BK],
            };
            for &alpha in alphas {
                for &class in &classes {
                    sections.push(checks::taylor(class, alpha, &s)?);
                }
            }
            &[("bound", FALSIFY_TOLERANCE)]
        }
        VerifyTarget::Logs => {
            let s = checks::sampler(cli.seed, samples.unwrap_or(DEFAULT_BOUND_SAMPLES), cli.order);
            for &alpha in alphas {
                sections.push(checks::logs(alpha, 10, &s)?);
            }
            &[("bound", FALSIFY_TOLERANCE)]
        }
        VerifyTarget::Radius => {
            let s = checks::sampler(cli.seed, samples.unwrap_or(DEFAULT_MEMBER_SAMPLES), cli.order);
            for &alpha in alphas {
                sections.push(checks::radius_bs(alpha, samples.unwrap_or(DEFAULT_H_PAIRS), cli.seed)?);
                sections.push(checks::radius_bk_agreement(alpha)?);
                sections.push(checks::convexity(ClassTag::BS, alpha, &s)?);
                sections.push(checks::convexity(ClassTag::BK, alpha, &s)?);
            }
            &[
                ("psi_grid", PSI_TOLERANCE),
                ("h_monotone", radius::MONOTONE_TOLERANCE),
                ("sign_change_offset", radius::SIGN_CHANGE_OFFSET),
                ("root_agreement", checks::ROOT_AGREEMENT),
                ("convexity", CONVEXITY_TOLERANCE),
            ]
        }
        VerifyTarget::Norm => {
            let s = checks::sampler(cli.seed, samples.unwrap_or(DEFAULT_MEMBER_SAMPLES), cli.order);
            let config = NormConfig::default();
            sections.push(checks::identity_norm(&config));
            for &alpha in alphas {
                sections.push(checks::g1_norm(alpha, &config));
                sections.push(checks::f1_norm(alpha, &config));
                sections.push(checks::bk_norms(alpha, &s, &config)?);
            }
            &[("norm", NORM_TOLERANCE), ("escape", config.escape)]
        }
    };
    Ok(sections_report(sections, tol))
}

fn radius_cmd(cli: &Cli, alphas: &[f64]) -> Result<Report, Failure> {
    let mut table = Table::new(&["alpha", "r_prime", "r_doubleprime", "radius_bs", "radius_bk"]);
    let mut rows = Vec::new();
    for &alpha in alphas {
        let bs = radius::radius_bs(alpha)?;
        let bk = radius::radius_bk(alpha)?;
        table.row(&[num(alpha), num(bs.r_prime), num(bs.r_doubleprime), num(bs.radius), num(bk)]);
        rows.push(match cli.class {
            Some(c) if ClassTag::from(c) == ClassTag::BK => json!({ "alpha": alpha, "class": "bk", "radius": bk }),
            Some(_) => json!({ "alpha": alpha, "class": "bs", "radius": bs.radius, "detail": bs }),
            None => json!({ "alpha": alpha, "bs": bs, "bk": bk }),
        });
    }
    let summary = rows
        .iter()
        .map(|r| {
            let value = r.get("radius").or_else(|| r["bs"].get("radius")).cloned().unwrap_or(Value::Null);
            format!("alpha={} radius={}", r["alpha"], value)
        })
        .collect();
    Ok(Report {
        result: json!({ "radii": rows }),
        csv: Some(table.finish()),
        tolerances: tolerances(&[("root_bracket", radius::ROOT_XTOL)]),
        summary,
        ..Report::default()
    })
}

fn norm(cli: &Cli, alphas: &[f64], function: NormFunction) -> Result<Report, Failure> {
    let config = NormConfig::default();
    let mut estimates = Vec::new();
    for &alpha in alphas {
        let p = match function {
            NormFunction::Identity => PreSchwarzian::Identity,
            NormFunction::F1 => PreSchwarzian::F1 { alpha },
            NormFunction::G1 => PreSchwarzian::G1 { alpha },
            NormFunction::G2 => PreSchwarzian::G2 { alpha },
            NormFunction::Sample => {
                let w = sample_indexed(cli.seed, 0, MAX_DEGREE, cli.order);
                PreSchwarzian::Member(Box::new(member(class_or(cli, ClassTag::BK), &w, alpha, cli.order)?))
            }
        };
        let e = norm_estimate(&p, &config);
        estimates.push(json!({ "alpha": alpha, "function": p.to_string(), "estimate": e }));
    }
    let summary = estimates
        .iter()
        .map(|e| format!("{}: norm {} diverged={}", e["function"], e["estimate"]["value"], e["estimate"]["diverged"]))
        .collect();
    Ok(Report {
        result: json!({ "grid": config, "estimates": estimates }),
        tolerances: tolerances(&[("escape", config.escape), ("growth", config.growth)]),
        summary,
        ..Report::default()
    })
}

fn plot_domain(alphas: &[f64], points: usize) -> Result<Report, Failure> {
    if points < 8 {
        return Err(config_error("--points must be at least 8"));
    }
    let curves = alphas
        .iter()
        .map(|&alpha| Ok(Curves { alpha, polylines: boundary_curves(alpha, points, 3.0)? }))
        .collect::<CoreResult<Vec<_>>>()?;
    let result = json!({
        "curves": curves.iter().map(|c| json!({ "alpha": c.alpha, "polylines": c.polylines })).collect::<Vec<_>>()
    });
    Ok(Report {
        result,
        csv: Some(plot::csv(&curves)),
        svg: Some(plot::svg(&curves)),
        summary: vec![format!("{} boundary curves", curves.len())],
        ..Report::default()
    })
}

fn refute(alphas: &[f64]) -> Result<Report, Failure> {
    let rows = alphas.iter().map(|&a| refute_cho(a)).collect::<CoreResult<Vec<_>>>()?;
    let mut table = Table::new(&[
        "alpha",
        "cho_root",
        "radius",
        "difference",
        "differs",
        "witness_radius",
        "class_lower_bound",
        "extremal_min",
        "radius_confirmed",
    ]);
    for r in &rows {
        table.row(&[
            num(r.alpha),
            num(r.cho_root),
            num(r.radius),
            num(r.difference),
            r.differs.to_string(),
            num(r.witness_radius),
            num(r.class_lower_bound),
            num(r.extremal_min),
            r.radius_confirmed.to_string(),
        ]);
    }
    let refuted: Vec<f64> = rows.iter().filter(|r| r.differs && r.radius_confirmed).map(|r| r.alpha).collect();
    let summary = vec![if refuted.is_empty() {
        "no discrepancy found".to_string()
    } else {
        format!("conjecture disagrees with the computed radius at {} of {} alphas", refuted.len(), rows.len())
    }];
    Ok(Report {
        holds: Some(!refuted.is_empty()),
        result: json!({ "rows": rows, "refuted_at": refuted }),
        csv: Some(table.finish()),
        tolerances: tolerances(&[("difference", CHO_DIFFERENCE_THRESHOLD)]),
        summary,
        ..Report::default()
    })
}

fn all_checks(cli: &Cli) -> Result<Report, Failure> {
    let seed = cli.seed;
    let bound_samples = cli.samples.unwrap_or(DEFAULT_BOUND_SAMPLES);
    let member_samples = cli.samples.unwrap_or(DEFAULT_MEMBER_SAMPLES);
    let bounds = checks::sampler(seed, bound_samples, cli.order);
    let members = checks::sampler(seed, member_samples, cli.order);
    let tenths: Vec<f64> = (0..=10).map(|i| i as f64 / 10.0).collect();
    let quarters = [0.0, 0.25, 0.5, 0.75, 1.0];
    let norm_config = NormConfig::default();

    let mut s = Vec::new();
    for &alpha in &quarters {
        s.push(checks::taylor(ClassTag::BS, alpha, &bounds)?);
        s.push(checks::taylor(ClassTag::BK, alpha, &bounds)?);
        s.push(checks::logs(alpha, 3, &bounds)?);
    }
    s.push(checks::logs(0.1, 10, &bounds)?);
    s.push(checks::logs(0.9, 10, &bounds)?);
    for &alpha in &tenths {
        s.push(checks::radius_bs(alpha, cli.samples.unwrap_or(DEFAULT_H_PAIRS), seed)?);
    }
    for alpha in (1..=100).map(|i| i as f64 / 100.0) {
        s.push(checks::radius_bk_agreement(alpha)?);
    }
    for &alpha in &tenths {
        s.push(checks::convexity(ClassTag::BK, alpha, &members)?);
    }
    s.push(checks::cho(&tenths)?);
    s.push(checks::identity_norm(&norm_config));
    for alpha in [0.0, 0.5, 1.0] {
        s.push(checks::g1_norm(alpha, &norm_config));
        s.push(checks::bk_norms(alpha, &members, &norm_config)?);
    }
    for alpha in [0.25, 0.5, 1.0] {
        s.push(checks::f1_norm(alpha, &norm_config));
    }
    s.push(checks::infrastructure(seed, 200)?);

    Ok(sections_report(
        s,
        &[
            ("bound", FALSIFY_TOLERANCE),
            ("psi_grid", PSI_TOLERANCE),
            ("h_monotone", radius::MONOTONE_TOLERANCE),
            ("root_agreement", checks::ROOT_AGREEMENT),
            ("convexity", CONVEXITY_TOLERANCE),
            ("cho_difference", CHO_DIFFERENCE_THRESHOLD),
            ("norm", NORM_TOLERANCE),
            ("escape", norm_config.escape),
            ("round_trip", checks::ROUND_TRIP_TOLERANCE),
            ("boundary_residual", checks::BOUNDARY_TOLERANCE),
        ],
    ))
}
