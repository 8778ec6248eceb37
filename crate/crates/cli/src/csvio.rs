//! CSV emission and ingestion.
//!
//! Numeric cells are the shortest round-trip decimal representation of the
//! underlying binary64 (Rust's `Display` for `f64`), locale-independent,
//! which makes output files byte-deterministic and exactly re-parseable.

use std::fmt::Write as _;
use std::path::Path;

use lase_kk_core::{SampledSpectrum, UniformGrid};

use crate::error::{CliError, CliResult};

/// Renders a table column-major: `columns[c]` has one value per row.
pub fn render_table(headers: &[&str], columns: &[&[f64]]) -> String {
    assert_eq!(headers.len(), columns.len(), "one header per column");
    let rows = columns.first().map_or(0, |c| c.len());
    for c in columns {
        assert_eq!(c.len(), rows, "ragged columns");
    }
    let mut text = String::new();
    let _ = writeln!(text, "{}", headers.join(","));
    for r in 0..rows {
        for (c, col) in columns.iter().enumerate() {
            if c > 0 {
                text.push(',');
            }
            let _ = write!(text, "{}", col[r]);
        }
        text.push('\n');
    }
    text
}

pub fn write_file(path: &Path, contents: &str) -> CliResult<()> {
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            std::fs::create_dir_all(parent)
                .map_err(|e| CliError::Io(format!("creating {}: {e}", parent.display())))?;
        }
    }
    std::fs::write(path, contents)
        .map_err(|e| CliError::Io(format!("writing {}: {e}", path.display())))
}

/// Reads a spectrum CSV with a frequency column (`delta_rad_per_s` or
/// `detuning_rad_per_s`) plus `chi_prime_dimensionless` and
/// `chi_double_prime_dimensionless`.
pub fn read_spectrum(path: &Path) -> CliResult<SampledSpectrum> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Io(format!("reading {}: {e}", path.display())))?;
    let mut lines = text.lines();
    let header = lines
        .next()
        .ok_or_else(|| CliError::Validation(format!("{}: empty file", path.display())))?;
    let names: Vec<&str> = header.split(',').map(str::trim).collect();
    let col = |candidates: &[&str]| -> CliResult<usize> {
        names
            .iter()
            .position(|n| candidates.contains(n))
            .ok_or_else(|| {
                CliError::Validation(format!(
                    "{}: missing column (expected one of {candidates:?}; found {names:?})",
                    path.display()
                ))
            })
    };
    let x_col = col(&["delta_rad_per_s", "detuning_rad_per_s"])?;
    let re_col = col(&["chi_prime_dimensionless"])?;
    let im_col = col(&["chi_double_prime_dimensionless"])?;

    let mut xs = Vec::new();
    let mut re = Vec::new();
    let mut im = Vec::new();
    for (lineno, line) in lines.enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let cells: Vec<&str> = line.split(',').collect();
        let parse = |idx: usize| -> CliResult<f64> {
            cells
                .get(idx)
                .and_then(|c| c.trim().parse::<f64>().ok())
                .ok_or_else(|| {
                    CliError::Validation(format!(
                        "{}:{}: bad numeric cell in column {idx}",
                        path.display(),
                        lineno + 2
                    ))
                })
        };
        xs.push(parse(x_col)?);
        re.push(parse(re_col)?);
        im.push(parse(im_col)?);
    }
    let grid = UniformGrid::from_samples(&xs).map_err(CliError::from)?;
    SampledSpectrum::new(grid, re, im).map_err(CliError::from)
}
