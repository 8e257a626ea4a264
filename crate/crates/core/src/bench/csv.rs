use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use super::sweep::{AggregateRow, SweepResult, TrialFailure};
use crate::{Error, Result};

pub const CSV_HEADER: &str =
    "algorithm,m,N,snr_db,tau,mean,trials,success_rate,stderr,mean_wall_time_ms";

pub const ERROR_LOG_HEADER: &str = "algorithm,m,N,tau,mean,trial_index,error";

/// Six significant digits; `inf`, `-inf` and `nan` spelled out.
pub fn sig6(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    // Round first, then read the decimal exponent of the rounded value.
    let sci = format!("{x:.5e}");
    let exp: i32 = sci[sci.find('e').expect("exponent") + 1..]
        .parse()
        .expect("integer exponent");
    if (-5..6).contains(&exp) {
        let decimals = (5 - exp).max(0) as usize;
        format!("{x:.decimals$}")
    } else {
        sci
    }
}

/// Success rates use a fixed five-decimal rendering.
pub fn rate5(x: f64) -> String {
    format!("{x:.5}")
}

fn row_line(row: &AggregateRow, snr_db: f64) -> String {
    format!(
        "{},{},{},{},{},{},{},{},{},{}",
        row.algorithm.name(),
        row.m,
        row.snapshots,
        sig6(snr_db),
        sig6(row.tau),
        sig6(row.mean),
        row.trials,
        rate5(row.success_rate),
        sig6(row.stderr),
        row.mean_wall_time_ms.map(sig6).unwrap_or_default()
    )
}

pub fn write_csv<W: Write>(result: &SweepResult, mut out: W) -> std::io::Result<()> {
    writeln!(out, "{CSV_HEADER}")?;
    for row in &result.rows {
        writeln!(out, "{}", row_line(row, result.config.snr_db))?;
    }
    out.flush()
}

pub fn write_error_log<W: Write>(failures: &[TrialFailure], mut out: W) -> std::io::Result<()> {
    writeln!(out, "{ERROR_LOG_HEADER}")?;
    for f in failures {
        // Commas in messages would break the column layout.
        let msg = f.message.replace([',', '\n'], ";");
        writeln!(
            out,
            "{},{},{},{},{},{},{}",
            f.algorithm.name(),
            f.point.m,
            f.point.snapshots,
            sig6(f.point.tau),
            sig6(f.point.mean),
            f.trial_index,
            msg
        )?;
    }
    out.flush()
}

/// Creates (truncating) `path`, surfacing failures with the path attached.
pub fn create_output(path: &Path) -> Result<BufWriter<File>> {
    File::create(path)
        .map(BufWriter::new)
        .map_err(|e| Error::io(path, e))
}

/// Path of the error sidecar belonging to a CSV output.
pub fn error_log_path(path: &Path) -> std::path::PathBuf {
    let mut name = path.file_name().unwrap_or_default().to_os_string();
    name.push(".errors.csv");
    path.with_file_name(name)
}

pub fn emit_csv(result: &SweepResult, path: &Path) -> Result<()> {
    let out = create_output(path)?;
    write_csv(result, out).map_err(|e| Error::io(path, e))
}
