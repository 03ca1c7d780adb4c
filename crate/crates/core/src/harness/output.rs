use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::{json, Value};

use super::config::{ExperimentConfig, Mode, S_CURVE_POINTS, S_CURVE_X_MAX};
use super::sweep::{config_fingerprint, run_sweep_parallel, with_workers};
use crate::dynamics::{detect_critical_times, PreparedQuench};
use crate::entropy::{entropy_bound_series, s_curve};
use crate::error::{Error, Result};

/// Shortest round-trip representation; scientific notation outside
/// `[1e-5, 1e16)` so tiny echoes stay compact.
pub fn format_number(x: f64) -> String {
    // -0.0 prints as 0
    let x = x + 0.0;
    let a = x.abs();
    if x == 0.0 || (1e-5..1e16).contains(&a) || !x.is_finite() {
        format!("{x}")
    } else {
        format!("{x:e}")
    }
}

/// In-memory CSV with a fixed header.
#[derive(Clone, Debug, PartialEq)]
pub struct Table {
    pub columns: Vec<&'static str>,
    body: String,
    rows: usize,
}

impl Table {
    pub fn new(columns: Vec<&'static str>) -> Self {
        Self { columns, body: String::new(), rows: 0 }
    }

    pub fn push(&mut self, cells: &[String]) {
        debug_assert_eq!(cells.len(), self.columns.len());
        self.body.push_str(&cells.join(","));
        self.body.push('\n');
        self.rows += 1;
    }

    pub fn len(&self) -> usize {
        self.rows
    }

    pub fn is_empty(&self) -> bool {
        self.rows == 0
    }

    pub fn to_csv(&self) -> String {
        let mut out = self.columns.join(",");
        out.push('\n');
        out.push_str(&self.body);
        out
    }
}

/// Sidecar written next to every CSV.
#[derive(Clone, Debug, Serialize)]
pub struct Metadata {
    pub tool: &'static str,
    pub version: &'static str,
    pub config: ExperimentConfig,
    pub config_fingerprint: String,
    pub columns: Vec<&'static str>,
    pub rows: usize,
    pub summary: Value,
}

/// Data and metadata of one experiment, before anything touches the disk.
#[derive(Clone, Debug)]
pub struct ExperimentOutput {
    pub table: Table,
    pub metadata: Metadata,
}

/// Paths written by [`run_experiment`].
#[derive(Clone, Debug, PartialEq)]
pub struct WrittenFiles {
    pub csv: PathBuf,
    pub metadata: PathBuf,
}

/// `<out>.meta.json`.
pub fn metadata_path(csv: &Path) -> PathBuf {
    let mut name = csv.as_os_str().to_owned();
    name.push(".meta.json");
    PathBuf::from(name)
}

/// Runs the experiment described by `config` without writing files.
pub fn compute_experiment(config: &ExperimentConfig) -> Result<ExperimentOutput> {
    let config = config.clone().resolve()?;
    let (table, summary) = match config.mode {
        Mode::SCurve => with_workers(config.workers(), s_curve_table)?,
        Mode::Sweep => sweep_table(&config)?,
        Mode::Echo | Mode::Bures | Mode::EntropyBound => {
            with_workers(config.workers(), || series_table(&config))?
        }
    };
    let metadata = Metadata {
        tool: env!("CARGO_PKG_NAME"),
        version: env!("CARGO_PKG_VERSION"),
        config_fingerprint: config_fingerprint(&config)?,
        columns: table.columns.clone(),
        rows: table.len(),
        config,
        summary,
    };
    Ok(ExperimentOutput { table, metadata })
}

fn s_curve_table() -> Result<(Table, Value)> {
    let mut table = Table::new(vec!["x", "s", "lower", "upper"]);
    for e in s_curve(S_CURVE_POINTS, S_CURVE_X_MAX)? {
        table.push(&[e.x, e.s, e.lower, e.upper].map(format_number));
    }
    Ok((table, json!({ "points": S_CURVE_POINTS, "x_max": S_CURVE_X_MAX })))
}

fn sweep_table(config: &ExperimentConfig) -> Result<(Table, Value)> {
    let result = run_sweep_parallel(config)?;
    let mut table = Table::new(vec!["h", "j", "beta", "value", "quantity"]);
    for r in &result.rows {
        table.push(&[
            format_number(r.h),
            format_number(r.j),
            r.beta.map(format_number).unwrap_or_default(),
            format_number(r.value),
            r.quantity.clone(),
        ]);
    }
    Ok((table, json!({ "sweep_fingerprint": result.config_fingerprint })))
}

fn series_table(config: &ExperimentConfig) -> Result<(Table, Value)> {
    let spins = config.spins()?;
    let j = *spins.first().ok_or_else(|| Error::config("missing j"))?;
    let prepared = PreparedQuench::new(&config.quench(j, config.beta)?)?;
    match config.mode {
        Mode::Echo => {
            let res = prepared.loschmidt()?;
            let mut table = Table::new(vec!["t", "echo", "rate", "active_sector"]);
            for k in 0..res.times.len() {
                table.push(&[
                    format_number(res.times[k]),
                    format_number(res.echo[k]),
                    format_number(res.rate[k]),
                    res.active_sector[k].to_string(),
                ]);
            }
            let summary = json!({
                "critical_times": detect_critical_times(&res),
                "min_echo": res.min_echo(),
                "floored_probabilities": res.floored,
            });
            Ok((table, summary))
        }
        Mode::Bures => {
            let series = prepared.bures_series(config.reference)?;
            let mut table = Table::new(vec!["t", "angle", "overlap"]);
            for k in 0..series.times.len() {
                table.push(&[series.times[k], series.angle[k], series.overlap[k]].map(format_number));
            }
            let summary = json!({
                "protocol": series.protocol,
                "reference": series.reference,
                "first_time_above_90_percent": series.first_crossing(0.9 * std::f64::consts::FRAC_PI_2),
            });
            Ok((table, summary))
        }
        Mode::EntropyBound => {
            let bures = prepared.bures_series(config.reference)?;
            let bound = entropy_bound_series(&bures)?;
            let mut table = Table::new(vec!["t", "angle", "sigma_lower"]);
            for k in 0..bound.times.len() {
                table.push(&[bound.times[k], bures.angle[k], bound.sigma_lower[k]].map(format_number));
            }
            let summary = json!({
                "protocol": bures.protocol,
                "time_average": bound.time_average,
                "horizon_t": bound.horizon_t,
            });
            Ok((table, summary))
        }
        Mode::SCurve | Mode::Sweep => unreachable!("handled by the caller"),
    }
}

/// Writes `contents` to a sibling temporary file and renames it into place.
fn write_atomic(path: &Path, contents: &[u8]) -> Result<()> {
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".partial");
    let tmp = PathBuf::from(tmp);
    let result = fs::write(&tmp, contents).and_then(|()| fs::rename(&tmp, path));
    if result.is_err() {
        let _ = fs::remove_file(&tmp);
    }
    Ok(result?)
}

/// Runs an experiment and writes its CSV and `<csv>.meta.json`.
///
/// Nothing is written when the computation fails; if the second file cannot
/// be written the first is removed again.
pub fn run_experiment(config: &ExperimentConfig) -> Result<WrittenFiles> {
    let output = compute_experiment(config)?;
    let csv = output
        .metadata
        .config
        .output_path
        .clone()
        .ok_or_else(|| Error::config("no output path"))?;
    let meta = metadata_path(&csv);
    let mut meta_text = serde_json::to_string_pretty(&output.metadata)?;
    let _ = writeln!(meta_text);

    write_atomic(&csv, output.table.to_csv().as_bytes())?;
    if let Err(e) = write_atomic(&meta, meta_text.as_bytes()) {
        let _ = fs::remove_file(&csv);
        return Err(e);
    }
    Ok(WrittenFiles { csv, metadata: meta })
}
