use std::path::PathBuf;

use booth_core::class::ClassTag;
use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

/// Verification runs for the Booth-lemniscate classes BS(α) and BK(α).
///
/// Reports are written as JSON (or CSV/SVG where a command has a tabular or
/// graphical form) to stdout or `--output`; a short summary goes to stderr.
/// Exit status is 0 when every verdict holds, 1 when one fails and 2 on a
/// bad configuration.
#[derive(Debug, Parser)]
#[command(name = "booth-gft", version)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Class parameter; repeat or comma-separate for several values.
    #[arg(long, global = true, value_delimiter = ',', allow_negative_numbers = true)]
    pub alpha: Vec<f64>,

    /// Use the grid 0, step, 2·step, …, 1 instead of --alpha.
    #[arg(long, global = true)]
    pub sweep: bool,

    /// Grid spacing for --sweep.
    #[arg(long, global = true, default_value_t = 0.05)]
    pub step: f64,

    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,

    /// Number of random Schwarz functions; each command has its own default.
    #[arg(long, global = true)]
    pub samples: Option<usize>,

    /// Truncation order of the power series, 8..=128.
    #[arg(long, global = true, default_value_t = 8)]
    pub order: usize,

    #[arg(long, global = true, value_enum)]
    pub class: Option<ClassArg>,

    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,

    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,

    /// Also write the CSV table to PATH (stdout when PATH is omitted).
    #[arg(long, global = true, value_name = "PATH", num_args = 0..=1, default_missing_value = "-")]
    pub csv: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Taylor and logarithmic coefficients of an extremal or sampled member.
    Coeffs {
        /// Index n of the extremal (fₙ in BS, its BK counterpart in BK).
        #[arg(long, conflicts_with = "sample")]
        extremal: Option<usize>,
        /// Use the sampled Schwarz function with this index instead.
        #[arg(long)]
        sample: Option<u64>,
    },
    /// Falsification searches against the sharp results.
    Verify {
        #[arg(value_enum)]
        target: VerifyTarget,
    },
    /// Radius of convexity.
    Radius,
    /// Pre-Schwarzian norm estimate.
    Norm {
        #[arg(long, value_enum)]
        function: NormFunction,
    },
    /// Boundary curves of the Booth lemniscate domains Ω(α).
    PlotDomain {
        /// Points per curve.
        #[arg(long, default_value_t = 720)]
        points: usize,
    },
    /// Compare the conjectured quartic radius with the computed radius.
    RefuteCho,
    /// Every verification in one reproducible run.
    AllChecks,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ClassArg {
    Bs,
    Bk,
}

impl From<ClassArg> for ClassTag {
    fn from(c: ClassArg) -> Self {
        match c {
            ClassArg::Bs => ClassTag::BS,
            ClassArg::Bk => ClassTag::BK,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum VerifyTarget {
    /// |a₂|, |a₃|, |a₄|
    Bounds,
    /// Logarithmic coefficients γ₁..γ₁₀ of BS(α).
    Logs,
    Radius,
    Norm,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum NormFunction {
    Identity,
    F1,
    G1,
    G2,
    /// A sampled member of the class chosen by --class (BK by default).
    Sample,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
    Svg,
}
