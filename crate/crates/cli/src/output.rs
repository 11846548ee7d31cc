use std::collections::BTreeMap;
use std::fs;
use std::io::{self, Write};
use std::path::Path;

use serde::Serialize;
use serde_json::Value;

use crate::args::{Cli, Format};

#[derive(Debug, thiserror::Error)]
pub enum Failure {
    #[error("{0}")]
    Config(String),
    #[error(transparent)]
    Io(#[from] io::Error),
}

impl From<booth_core::Error> for Failure {
    fn from(e: booth_core::Error) -> Self {
        Failure::Config(e.to_string())
    }
}

pub fn config_error(msg: impl Into<String>) -> Failure {
    Failure::Config(msg.into())
}

/// Everything a command produces before it is rendered.
#[derive(Debug, Default)]
pub struct Report {
    pub result: Value,
    /// `None` when the command reports values without a verdict.
    pub holds: Option<bool>,
    pub csv: Option<String>,
    pub svg: Option<String>,
    pub tolerances: BTreeMap<&'static str, f64>,
    pub summary: Vec<String>,
}

/// Echo of the resolved run configuration.
#[derive(Debug, Serialize)]
pub struct ConfigEcho {
    pub command: String,
    pub alphas: Vec<f64>,
    pub seed: u64,
    pub samples: Option<usize>,
    pub order: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub class: Option<crate::args::ClassArg>,
    #[serde(skip_serializing_if = "Value::is_null")]
    pub options: Value,
}

#[derive(Serialize)]
struct Envelope<'a> {
    tool: &'static str,
    version: &'static str,
    config: &'a ConfigEcho,
    tolerances: &'a BTreeMap<&'static str, f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    all_hold: Option<bool>,
    result: &'a Value,
}

pub fn render_json(echo: &ConfigEcho, report: &Report) -> String {
    let env = Envelope {
        tool: env!("CARGO_PKG_NAME"),
        version: env!("CARGO_PKG_VERSION"),
        config: echo,
        tolerances: &report.tolerances,
        all_hold: report.holds,
        result: &report.result,
    };
    let mut s = serde_json::to_string_pretty(&env).expect("report is serializable");
    s.push('\n');
    s
}

fn write_to(path: Option<&Path>, body: &str) -> io::Result<()> {
    match path {
        Some(p) if p != Path::new("-") => fs::write(p, body),
        _ => io::stdout().lock().write_all(body.as_bytes()),
    }
}

/// Writes the report in the requested format, plus the CSV side file.
pub fn emit(cli: &Cli, echo: &ConfigEcho, report: &Report, default: Format) -> Result<(), Failure> {
    let csv_to_stdout = cli.csv.as_deref() == Some(Path::new("-"));
    let format = match (cli.format, csv_to_stdout) {
        (Some(f), false) => f,
        (None, true) | (Some(Format::Csv), true) => Format::Csv,
        (None, false) => default,
        (Some(_), true) => return Err(config_error("--csv without a path conflicts with --format")),
    };
    let body = match format {
        Format::Json => render_json(echo, report),
        Format::Csv => report.csv.clone().ok_or_else(|| config_error(format!("{} has no CSV form", echo.command)))?,
        Format::Svg => report.svg.clone().ok_or_else(|| config_error(format!("{} has no SVG form", echo.command)))?,
    };
    if let Some(path) = cli.csv.as_deref().filter(|_| !csv_to_stdout) {
        let table = report.csv.as_ref().ok_or_else(|| config_error(format!("{} has no CSV form", echo.command)))?;
        fs::write(path, table)?;
    }
    write_to(cli.output.as_deref(), &body)?;
    for line in &report.summary {
        eprintln!("{line}");
    }
    Ok(())
}

/// A CSV table with a fixed header.
pub struct Table {
    out: csv::Writer<Vec<u8>>,
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        let mut out = csv::Writer::from_writer(Vec::new());
        out.write_record(header).expect("in-memory write");
        Table { out }
    }

    pub fn row(&mut self, cells: &[String]) {
        self.out.write_record(cells).expect("in-memory write");
    }

    pub fn finish(self) -> String {
        String::from_utf8(self.out.into_inner().expect("in-memory flush")).expect("cells are UTF-8")
    }
}

/// Shortest round-trip form of `x`, with an exponent for very small or large
/// magnitudes.
pub fn num(x: f64) -> String {
    if x.is_finite() {
        serde_json::to_string(&x).expect("finite float")
    } else {
        x.to_string()
    }
}
