//! Result tables and metadata sidecars.
//!
//! A table is plain text with the header `Eb_N0 BER` and one whitespace
//! separated row per operating point, so it can be plotted directly. Points
//! whose stopping rule was cut short by the bit budget go to a separate
//! `*.censored.txt` table with the same layout.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::config::ExperimentConfig;
use crate::sim::BerRecord;
use crate::HarnessError;

pub const TABLE_HEADER: &str = "Eb_N0 BER";

/// Version of this build, `<crate version>-<git revision>`.
pub fn version_string() -> String {
    format!("{}-{}", env!("CARGO_PKG_VERSION"), env!("FEC_GIT_REVISION"))
}

/// Formats records as a table, sorted by Eb/N0.
pub fn format_table<'a, I>(records: I) -> String
where
    I: IntoIterator<Item = &'a BerRecord>,
{
    let mut rows: Vec<&BerRecord> = records.into_iter().collect();
    rows.sort_by(|a, b| a.ebn0_db.partial_cmp(&b.ebn0_db).expect("finite Eb/N0"));
    let mut out = String::from(TABLE_HEADER);
    out.push('\n');
    for r in rows {
        writeln!(out, "{} {:.6e}", r.ebn0_db, r.ber).expect("writing to a string");
    }
    out
}

/// Parses a table written by [`format_table`] (or any two-column table with
/// an `Eb_N0`/`BER` header).
pub fn parse_table(text: &str) -> Result<Vec<(f64, f64)>, HarnessError> {
    let mut lines = text
        .lines()
        .filter(|l| !l.trim().is_empty() && !l.trim_start().starts_with('#'));
    let header: Vec<&str> = lines
        .next()
        .ok_or_else(|| HarnessError::Config("empty table".into()))?
        .split_whitespace()
        .collect();
    let x = header.iter().position(|&h| h == "Eb_N0");
    let y = header.iter().position(|&h| h == "BER");
    let (Some(x), Some(y)) = (x, y) else {
        return Err(HarnessError::Config(format!(
            "table header must name Eb_N0 and BER, got {header:?}"
        )));
    };
    lines
        .map(|line| {
            let cols: Vec<&str> = line.split_whitespace().collect();
            let get = |i: usize| -> Result<f64, HarnessError> {
                cols.get(i)
                    .ok_or_else(|| HarnessError::Config(format!("short row: {line}")))?
                    .parse()
                    .map_err(|_| HarnessError::Config(format!("bad number in row: {line}")))
            };
            Ok((get(x)?, get(y)?))
        })
        .collect()
}

pub fn read_table(path: &Path) -> Result<Vec<(f64, f64)>, HarnessError> {
    let text = std::fs::read_to_string(path).map_err(|e| HarnessError::Io(format!("{}: {e}", path.display())))?;
    parse_table(&text)
}

/// Self-describing record of a sweep, written next to its table.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SweepMetadata {
    pub version: String,
    pub config: ExperimentConfig,
    /// The configuration as it would appear in a config file.
    pub config_toml: String,
    pub rate: f64,
    pub records: Vec<BerRecord>,
    pub censored_points: Vec<f64>,
}

/// Paths produced by [`write_outputs`].
#[derive(Clone, Debug)]
pub struct OutputFiles {
    pub table: PathBuf,
    pub censored_table: Option<PathBuf>,
    pub metadata: PathBuf,
}

fn write(path: &Path, contents: &str) -> Result<(), HarnessError> {
    std::fs::write(path, contents).map_err(|e| HarnessError::Io(format!("{}: {e}", path.display())))
}

pub fn write_outputs(
    dir: &Path,
    name: &str,
    config: &ExperimentConfig,
    rate: f64,
    records: &[BerRecord],
) -> Result<OutputFiles, HarnessError> {
    std::fs::create_dir_all(dir).map_err(|e| HarnessError::Io(format!("{}: {e}", dir.display())))?;
    let table = dir.join(format!("{name}.txt"));
    write(&table, &format_table(records.iter().filter(|r| !r.censored)))?;

    let censored: Vec<&BerRecord> = records.iter().filter(|r| r.censored).collect();
    let censored_table = if censored.is_empty() {
        None
    } else {
        let path = dir.join(format!("{name}.censored.txt"));
        write(&path, &format_table(censored.iter().copied()))?;
        Some(path)
    };

    let meta = SweepMetadata {
        version: version_string(),
        config: config.clone(),
        config_toml: config.to_toml_string(),
        rate,
        records: records.to_vec(),
        censored_points: censored.iter().map(|r| r.ebn0_db).collect(),
    };
    let metadata = dir.join(format!("{name}.meta.json"));
    write(
        &metadata,
        &serde_json::to_string_pretty(&meta).expect("metadata serializes"),
    )?;
    Ok(OutputFiles {
        table,
        censored_table,
        metadata,
    })
}
