//! CSV and JSON writers shared by the subcommands. CSV carries sample-level
//! data (one sorted spectrum per row, 17 significant digits); JSON carries the
//! report with schema version, RNG algorithm, seed, and build identity.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use hwlab::compare::EmpiricalSpectrum;
use serde::Serialize;

pub const REPORT_SCHEMA_VERSION: u32 = 1;

/// 17 significant digits, enough to round-trip any f64.
pub fn format_f64(x: f64) -> String {
    format!("{x:.16e}")
}

#[derive(Debug, Clone, Serialize)]
pub struct BuildInfo {
    pub version: &'static str,
    pub git_describe: &'static str,
}

pub fn build_info() -> BuildInfo {
    BuildInfo {
        version: env!("CARGO_PKG_VERSION"),
        git_describe: env!("HWLAB_GIT_DESCRIBE"),
    }
}

/// Envelope for every JSON report the harness emits.
#[derive(Debug, Serialize)]
pub struct RunReport<R: Serialize, E: Serialize> {
    pub schema_version: u32,
    pub command: String,
    pub rng_algorithm: &'static str,
    pub seed: u64,
    pub build: BuildInfo,
    pub config: serde_json::Value,
    pub report: R,
    pub extras: E,
    pub pass: bool,
}

impl<R: Serialize, E: Serialize> RunReport<R, E> {
    pub fn new(
        command: &str,
        seed: u64,
        config: serde_json::Value,
        report: R,
        extras: E,
        pass: bool,
    ) -> Self {
        Self {
            schema_version: REPORT_SCHEMA_VERSION,
            command: command.to_string(),
            rng_algorithm: hwlab::rmt::RNG_ALGORITHM,
            seed,
            build: build_info(),
            config,
            report,
            extras,
            pass,
        }
    }

    pub fn write(&self, path: &Path) -> std::io::Result<()> {
        let mut out = BufWriter::new(File::create(path)?);
        serde_json::to_writer_pretty(&mut out, self)?;
        out.write_all(b"\n")
    }
}

/// One sorted spectrum per row; header x0..x{d-1}.
pub fn write_spectra_csv(path: &Path, spectra: &EmpiricalSpectrum) -> std::io::Result<()> {
    let mut out = BufWriter::new(File::create(path)?);
    let header: Vec<String> = (0..spectra.rank()).map(|i| format!("x{i}")).collect();
    writeln!(out, "{}", header.join(","))?;
    for row in spectra.samples() {
        let cells: Vec<String> = row.iter().map(|&x| format_f64(x)).collect();
        writeln!(out, "{}", cells.join(","))?;
    }
    Ok(())
}

/// Single-column CSV of scalar samples.
pub fn write_scalar_csv(path: &Path, header: &str, values: &[f64]) -> std::io::Result<()> {
    let mut out = BufWriter::new(File::create(path)?);
    writeln!(out, "{header}")?;
    for &v in values {
        writeln!(out, "{}", format_f64(v))?;
    }
    Ok(())
}
