//! Time-averaged entropy-production bound as a function of the quench field,
//! computed in parallel and written as CSV with a metadata sidecar.
//!
//!     cargo run --release --example h_sweep -- out.csv

use dqpt::harness::{run_experiment, ExperimentConfig, Mode};

fn main() -> dqpt::Result<()> {
    let out = std::env::args().nth(1).unwrap_or_else(|| "h_sweep.csv".into());
    let mut config = ExperimentConfig::new(Mode::Sweep);
    config.j_grid = Some(vec![20.0, 40.0]);
    config.h_grid = Some((0..=20).map(|k| k as f64 / 20.0).collect());
    config.t_average = Some(200.0);
    config.worker_count = Some(std::thread::available_parallelism().map_or(1, |n| n.get()));
    config.output_path = Some(out.into());

    let files = run_experiment(&config)?;
    print!("{}", std::fs::read_to_string(&files.csv)?);
    eprintln!("wrote {} and {}", files.csv.display(), files.metadata.display());
    Ok(())
}
