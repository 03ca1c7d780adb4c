use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::config::{ExperimentConfig, Mode};
use crate::entropy::time_averaged_entropy_vs_h;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub h: f64,
    pub j: f64,
    pub beta: Option<f64>,
    pub value: f64,
    pub quantity: String,
}

/// Rows sorted by `(j, beta, h)`, with the pure protocol ordered before
/// every finite `beta`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    pub rows: Vec<SweepRow>,
    pub config_fingerprint: String,
}

impl SweepResult {
    pub fn new(mut rows: Vec<SweepRow>, config_fingerprint: String) -> Result<Self> {
        for r in &rows {
            if !r.value.is_finite() {
                return Err(Error::NonFinite(format!("sweep value at h = {}", r.h)));
            }
        }
        rows.sort_by(|a, b| {
            a.j.total_cmp(&b.j)
                .then_with(|| match (a.beta, b.beta) {
                    (None, None) => std::cmp::Ordering::Equal,
                    (None, Some(_)) => std::cmp::Ordering::Less,
                    (Some(_), None) => std::cmp::Ordering::Greater,
                    (Some(x), Some(y)) => x.total_cmp(&y),
                })
                .then_with(|| a.h.total_cmp(&b.h))
        });
        Ok(Self { rows, config_fingerprint })
    }

    /// Rows for one spin and inverse temperature, in field order.
    pub fn curve(&self, j: f64, beta: Option<f64>) -> Vec<(f64, f64)> {
        self.rows
            .iter()
            .filter(|r| r.j == j && r.beta == beta)
            .map(|r| (r.h, r.value))
            .collect()
    }
}

/// Hex SHA-256 of the compact JSON encoding of `value`.
pub fn fingerprint<T: Serialize>(value: &T) -> Result<String> {
    let bytes = serde_json::to_vec(value)?;
    let digest = Sha256::digest(&bytes);
    Ok(digest.iter().map(|b| format!("{b:02x}")).collect())
}

/// Fingerprint of the parts of a config that determine the output data.
/// Worker count and output location are excluded.
pub fn config_fingerprint(config: &ExperimentConfig) -> Result<String> {
    let mut c = config.clone();
    c.worker_count = None;
    c.output_path = None;
    fingerprint(&c)
}

fn worker_pool(workers: usize) -> Result<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::config(format!("cannot start {workers} workers: {e}")))
}

/// Runs `f` on a dedicated pool of `workers` threads.
pub fn with_workers<T: Send>(workers: usize, f: impl FnOnce() -> Result<T> + Send) -> Result<T> {
    worker_pool(workers)?.install(f)
}

/// Time-averaged entropy-production bound for every `(j, beta, h)` named
/// by a sweep config.
///
/// Each field value is one task on a pool of `worker_count` threads.
/// Results do not depend on the worker count.
pub fn run_sweep_parallel(config: &ExperimentConfig) -> Result<SweepResult> {
    let config = config.clone().resolve()?;
    if config.mode != Mode::Sweep {
        return Err(Error::config("run_sweep_parallel needs a sweep config"));
    }
    let h_grid = config.h_grid.clone().unwrap_or_default();
    let horizon = config.t_average.unwrap_or(super::config::AVERAGE_HORIZON);
    let rows = with_workers(config.workers(), || {
        let mut rows = Vec::new();
        for j in config.spins()? {
            for beta in config.betas() {
                let base = config.quench(j, beta)?;
                rows.extend(time_averaged_entropy_vs_h(&h_grid, &base, horizon)?.rows);
            }
        }
        Ok(rows)
    })?;
    SweepResult::new(rows, config_fingerprint(&config)?)
}
