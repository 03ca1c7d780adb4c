use std::path::PathBuf;

use clap::Parser;

use super::config::{parse_grid, ExperimentConfig, Mode};
use super::output::run_experiment;
use crate::error::{Error, Result};

/// Quench dynamics of the Lipkin-Meshkov-Glick model.
#[derive(Debug, Parser)]
#[command(name = "dqpt", version, allow_negative_numbers = true)]
pub struct Cli {
    /// What to compute.
    #[arg(value_enum)]
    pub mode: Mode,
    /// JSON experiment file; flags override its fields.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub j: Option<f64>,
    #[arg(long, conflicts_with = "h_grid")]
    pub h: Option<f64>,
    /// Field grid as `a:b:steps`, endpoints included.
    #[arg(long = "h-grid", value_name = "a:b:steps")]
    pub h_grid: Option<String>,
    #[arg(long)]
    pub beta: Option<f64>,
    #[arg(long)]
    pub dt: Option<f64>,
    #[arg(long = "t-max")]
    pub t_max: Option<f64>,
    /// Averaging horizon for sweeps.
    #[arg(long = "T", value_name = "T")]
    pub t_average: Option<f64>,
    #[arg(long)]
    pub workers: Option<usize>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

impl Cli {
    /// Config file contents (or defaults) with the flags applied.
    pub fn to_config(&self) -> Result<ExperimentConfig> {
        let mut c = match &self.config {
            Some(path) => ExperimentConfig::load(path)?,
            None => ExperimentConfig::new(self.mode),
        };
        c.mode = self.mode;
        if let Some(j) = self.j {
            c.j = Some(j);
            c.j_grid = None;
        }
        if let Some(h) = self.h {
            c.h = Some(h);
            c.h_grid = None;
        }
        if let Some(grid) = &self.h_grid {
            c.h_grid = Some(parse_grid(grid)?);
            c.h = None;
        }
        if let Some(beta) = self.beta {
            c.beta = Some(beta);
            c.beta_grid = None;
        }
        c.dt = self.dt.or(c.dt);
        c.t_max = self.t_max.or(c.t_max);
        c.t_average = self.t_average.or(c.t_average);
        c.worker_count = self.workers.or(c.worker_count);
        c.output_path = self.out.clone().or(c.output_path);
        c.resolve()
    }
}

/// Single-line JSON diagnostic for the error stream.
pub fn diagnostic(err: &Error) -> String {
    serde_json::json!({ "error": err.kind(), "message": err.to_string() }).to_string()
}

/// Parses `args` (program name first), runs the experiment and returns the
/// process exit status. Help and version requests print and return 0.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => run(&cli),
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            0
        }
        Err(e) => {
            let err = Error::Config(e.to_string().lines().next().unwrap_or_default().to_string());
            eprintln!("{}", diagnostic(&err));
            err.exit_code()
        }
    }
}

/// Runs a parsed command line and returns the process exit status.
pub fn run(cli: &Cli) -> i32 {
    match cli.to_config().and_then(|c| run_experiment(&c)) {
        Ok(files) => {
            println!("{}", files.csv.display());
            0
        }
        Err(e) => {
            eprintln!("{}", diagnostic(&e));
            e.exit_code()
        }
    }
}
