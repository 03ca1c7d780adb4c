use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::dynamics::{InitialState, QuenchSpec, TimeGrid};
use crate::error::{Error, Result};
use crate::geometry::Reference;
use crate::spectral::{LmgParams, DEFAULT_G, DEFAULT_GAMMA};
use crate::spinops::SpinQuantumNumber;

/// Grid spacing for the time-series modes.
pub const SERIES_DT: f64 = 0.01;
/// Grid spacing for thermal series and time averages.
pub const COARSE_DT: f64 = 0.05;
pub const SERIES_T_MAX: f64 = 10.0;
pub const AVERAGE_HORIZON: f64 = 1000.0;
/// Points in the default field grid of a sweep, covering `[0, 1]`.
pub const DEFAULT_SWEEP_POINTS: usize = 101;
pub const S_CURVE_POINTS: usize = 1000;
pub const S_CURVE_X_MAX: f64 = 0.99;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    /// Loschmidt echo and rate function.
    Echo,
    /// Bures angle between the initial and the evolved state.
    Bures,
    /// Lower bound on entropy production along a quench.
    EntropyBound,
    /// `s(x)` with its two analytic bounds.
    SCurve,
    /// Time-averaged entropy-production bound against the quench field.
    Sweep,
}

impl Mode {
    pub fn as_str(self) -> &'static str {
        match self {
            Mode::Echo => "echo",
            Mode::Bures => "bures",
            Mode::EntropyBound => "entropy-bound",
            Mode::SCurve => "s-curve",
            Mode::Sweep => "sweep",
        }
    }
}

/// One experiment, as read from a JSON file and adjusted by CLI flags.
///
/// Optional fields left unset are filled by [`ExperimentConfig::resolve`];
/// output metadata always carries the resolved form.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub mode: Mode,
    #[serde(default)]
    pub j: Option<f64>,
    /// Several sizes for sweep mode.
    #[serde(default)]
    pub j_grid: Option<Vec<f64>>,
    #[serde(default = "default_gamma")]
    pub gamma: f64,
    #[serde(default = "default_g")]
    pub g: f64,
    #[serde(default)]
    pub h0: f64,
    #[serde(default)]
    pub h: Option<f64>,
    #[serde(default)]
    pub h_grid: Option<Vec<f64>>,
    #[serde(default)]
    pub beta: Option<f64>,
    #[serde(default)]
    pub beta_grid: Option<Vec<f64>>,
    #[serde(default)]
    pub dt: Option<f64>,
    #[serde(default)]
    pub t_max: Option<f64>,
    #[serde(default, rename = "T_average")]
    pub t_average: Option<f64>,
    #[serde(default)]
    pub initial_state: InitialState,
    #[serde(default)]
    pub reference: Reference,
    #[serde(default)]
    pub output_path: Option<PathBuf>,
    #[serde(default)]
    pub worker_count: Option<usize>,
    /// Seed for randomized checks; the experiments themselves are
    /// deterministic.
    #[serde(default)]
    pub seed: u64,
}

fn default_gamma() -> f64 {
    DEFAULT_GAMMA
}

fn default_g() -> f64 {
    DEFAULT_G
}

impl ExperimentConfig {
    pub fn new(mode: Mode) -> Self {
        Self {
            mode,
            j: None,
            j_grid: None,
            gamma: DEFAULT_GAMMA,
            g: DEFAULT_G,
            h0: 0.0,
            h: None,
            h_grid: None,
            beta: None,
            beta_grid: None,
            dt: None,
            t_max: None,
            t_average: None,
            initial_state: InitialState::default(),
            reference: Reference::default(),
            output_path: None,
            worker_count: None,
            seed: 0,
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::config(format!("invalid config: {e}")))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    /// Fills mode-dependent defaults and validates the result.
    pub fn resolve(mut self) -> Result<Self> {
        let thermal = self.beta.is_some() || self.beta_grid.is_some();
        match self.mode {
            Mode::Echo | Mode::Bures | Mode::EntropyBound => {
                let dt = if thermal { COARSE_DT } else { SERIES_DT };
                self.dt.get_or_insert(dt);
                self.t_max.get_or_insert(SERIES_T_MAX);
            }
            Mode::Sweep => {
                self.dt.get_or_insert(COARSE_DT);
                self.t_average.get_or_insert(AVERAGE_HORIZON);
                if self.h_grid.is_none() {
                    let n = DEFAULT_SWEEP_POINTS;
                    self.h_grid = Some(linspace(0.0, 1.0, n));
                }
            }
            Mode::SCurve => {}
        }
        self.worker_count.get_or_insert(1);
        if self.output_path.is_none() {
            self.output_path = Some(PathBuf::from(format!("{}.csv", self.mode.as_str())));
        }
        self.validate()?;
        Ok(self)
    }

    fn validate(&self) -> Result<()> {
        let positive = |name: &str, v: Option<f64>| match v {
            Some(x) if !(x.is_finite() && x > 0.0) => {
                Err(Error::config(format!("{name} must be positive and finite, got {x}")))
            }
            _ => Ok(()),
        };
        positive("dt", self.dt)?;
        positive("t_max", self.t_max)?;
        positive("T_average", self.t_average)?;
        for (name, v) in [("gamma", self.gamma), ("g", self.g), ("h0", self.h0)] {
            if !v.is_finite() {
                return Err(Error::config(format!("{name} must be finite")));
            }
        }
        if self.g == 0.0 {
            return Err(Error::config("g must be nonzero"));
        }
        if self.worker_count == Some(0) {
            return Err(Error::config("worker_count must be at least 1"));
        }
        if self.beta.is_some() && self.beta_grid.is_some() {
            return Err(Error::config("give either beta or beta_grid, not both"));
        }
        if let Some(b) = self.beta {
            positive("beta", Some(b))?;
        }
        if let Some(grid) = &self.beta_grid {
            if grid.is_empty() {
                return Err(Error::config("beta_grid is empty"));
            }
            for &b in grid {
                positive("beta", Some(b))?;
            }
        }
        for h in self.h.iter().chain(self.h_grid.iter().flatten()) {
            if !h.is_finite() {
                return Err(Error::config("fields must be finite"));
            }
        }

        match self.mode {
            Mode::SCurve => Ok(()),
            Mode::Sweep => {
                if self.h_grid.as_ref().is_none_or(|g| g.is_empty()) {
                    return Err(Error::config("sweep mode needs a nonempty h_grid"));
                }
                if self.spins()?.is_empty() {
                    return Err(Error::config("sweep mode needs j or j_grid"));
                }
                Ok(())
            }
            Mode::Echo | Mode::Bures | Mode::EntropyBound => {
                if self.h.is_none() {
                    return Err(Error::config(format!("{} mode needs h", self.mode.as_str())));
                }
                if self.j.is_none() {
                    return Err(Error::config(format!("{} mode needs j", self.mode.as_str())));
                }
                if self.j_grid.is_some() || self.h_grid.is_some() || self.beta_grid.is_some() {
                    return Err(Error::config("grids are only accepted in sweep mode"));
                }
                if self.mode == Mode::Echo && self.beta.is_some() {
                    return Err(Error::config("echo mode is defined for the pure protocol; drop beta"));
                }
                self.spins().map(|_| ())
            }
        }
    }

    /// Spin quantum numbers named by `j` and `j_grid`, in that order.
    pub fn spins(&self) -> Result<Vec<SpinQuantumNumber>> {
        self.j
            .iter()
            .chain(self.j_grid.iter().flatten())
            .map(|&j| SpinQuantumNumber::from_j(j).map_err(|e| Error::config(e.to_string())))
            .collect()
    }

    /// Inverse temperatures to run; `None` is the pure protocol.
    pub fn betas(&self) -> Vec<Option<f64>> {
        match (&self.beta_grid, self.beta) {
            (Some(grid), _) => grid.iter().map(|&b| Some(b)).collect(),
            (None, b) => vec![b],
        }
    }

    pub fn workers(&self) -> usize {
        self.worker_count.unwrap_or(1)
    }

    /// Quench for the single-series modes, or the base quench of a sweep at
    /// spin `j` and inverse temperature `beta`.
    pub fn quench(&self, j: SpinQuantumNumber, beta: Option<f64>) -> Result<QuenchSpec> {
        let initial = LmgParams::new(self.h0, self.gamma, self.g, j)?;
        let horizon = match self.mode {
            Mode::Sweep => self.t_average.unwrap_or(AVERAGE_HORIZON),
            _ => self.t_max.unwrap_or(SERIES_T_MAX),
        };
        let grid = TimeGrid::new(self.dt.unwrap_or(SERIES_DT), horizon)?;
        Ok(QuenchSpec::new(initial, self.h.unwrap_or(self.h0), beta, grid)?
            .with_initial_state(self.initial_state))
    }
}

/// `n` evenly spaced points from `a` to `b` inclusive.
pub fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![a],
        _ => (0..n).map(|k| a + (b - a) * k as f64 / (n - 1) as f64).collect(),
    }
}

/// Parses `a:b:steps` into `steps` points from `a` to `b` inclusive.
pub fn parse_grid(spec: &str) -> Result<Vec<f64>> {
    let parts: Vec<&str> = spec.split(':').collect();
    let bad = || Error::config(format!("grid must look like a:b:steps, got {spec:?}"));
    let [a, b, n] = parts.as_slice() else {
        return Err(bad());
    };
    let a: f64 = a.trim().parse().map_err(|_| bad())?;
    let b: f64 = b.trim().parse().map_err(|_| bad())?;
    let n: usize = n.trim().parse().map_err(|_| bad())?;
    if n == 0 || !a.is_finite() || !b.is_finite() {
        return Err(bad());
    }
    Ok(linspace(a, b, n))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_by_mode() {
        let mut c = ExperimentConfig::new(Mode::Echo);
        c.j = Some(10.0);
        c.h = Some(0.8);
        let r = c.resolve().unwrap();
        assert_eq!((r.dt, r.t_max, r.gamma, r.g, r.h0), (Some(0.01), Some(10.0), 0.5, 1.0, 0.0));

        let mut c = ExperimentConfig::new(Mode::Bures);
        c.j = Some(10.0);
        c.h = Some(0.8);
        c.beta = Some(1.0);
        assert_eq!(c.resolve().unwrap().dt, Some(0.05));

        let mut c = ExperimentConfig::new(Mode::Sweep);
        c.j_grid = Some(vec![100.0, 200.0]);
        let r = c.resolve().unwrap();
        assert_eq!(r.t_average, Some(1000.0));
        assert_eq!(r.h_grid.as_ref().unwrap().len(), 101);
        assert_eq!(r.h_grid.as_ref().unwrap()[100], 1.0);
    }

    #[test]
    fn json_round_trip() {
        let text = r#"{"mode":"sweep","j_grid":[5,10],"beta_grid":[1.0,2.0],"T_average":50}"#;
        let c = ExperimentConfig::from_json(text).unwrap().resolve().unwrap();
        let back = ExperimentConfig::from_json(&serde_json::to_string(&c).unwrap()).unwrap();
        assert_eq!(back, c);
        assert_eq!(back.clone().resolve().unwrap(), c);
    }

    #[test]
    fn rejects_bad_configs() {
        assert!(ExperimentConfig::from_json(r#"{"mode":"echo","bogus":1}"#).is_err());
        assert!(ExperimentConfig::from_json(r#"{"mode":"warp"}"#).is_err());
        let cases = [
            r#"{"mode":"echo","j":10,"h":0.8,"dt":-1}"#,
            r#"{"mode":"echo","j":10}"#,
            r#"{"mode":"echo","j":10,"h":0.8,"beta":1}"#,
            r#"{"mode":"bures","j":0.3,"h":0.8}"#,
            r#"{"mode":"sweep","j":10,"h_grid":[]}"#,
            r#"{"mode":"sweep","j":10,"beta_grid":[]}"#,
            r#"{"mode":"sweep","h_grid":[0.1]}"#,
            r#"{"mode":"bures","j":10,"h":0.8,"worker_count":0}"#,
        ];
        for text in cases {
            let err = ExperimentConfig::from_json(text).unwrap().resolve().unwrap_err();
            assert_eq!(err.exit_code(), 2, "{text}: {err}");
        }
    }

    #[test]
    fn grids() {
        assert_eq!(parse_grid("0:1:3").unwrap(), vec![0.0, 0.5, 1.0]);
        assert_eq!(parse_grid("0.2:0.2:1").unwrap(), vec![0.2]);
        assert!(parse_grid("0:1").is_err());
        assert!(parse_grid("0:1:0").is_err());
        assert!(parse_grid("a:1:2").is_err());
    }
}
