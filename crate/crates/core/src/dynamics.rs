//! Sudden-quench evolution, Loschmidt amplitudes and finite-size rate
//! functions.
//!
//! Every time point is evaluated exactly in the eigenbasis of the quenched
//! Hamiltonian: after one diagonalization, `<phi|psi_t> = sum_k <phi|k>
//! <k|psi_0> exp(-i E_k t)` costs O(d) per time point and involves no
//! stepping error.

use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{cmul, CMatrix, StateVector, ZERO};
use crate::spectral::{
    diagonalize_lmg, ground_manifold, parity_operator, thermal_state, DensityMatrix,
    GroundManifold, LmgParams, SpectralDecomposition,
};
use crate::spinops::{build_spin_ops, CollectiveSpinOps};

/// Return probabilities below this value are floored before taking logs.
pub const ECHO_FLOOR: f64 = 1e-300;

/// Uniform grid `t_k = k dt`, `k = 0..=steps`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TimeGrid {
    dt: f64,
    steps: usize,
}

impl TimeGrid {
    pub fn new(dt: f64, t_max: f64) -> Result<Self> {
        if !(dt.is_finite() && dt > 0.0) {
            return Err(Error::domain(format!("time step must be positive, got {dt}")));
        }
        if !(t_max.is_finite() && t_max >= 0.0) {
            return Err(Error::domain(format!("t_max must be non-negative, got {t_max}")));
        }
        let steps = (t_max / dt).round() as usize;
        Ok(Self { dt, steps })
    }

    pub fn with_steps(dt: f64, steps: usize) -> Result<Self> {
        Self::new(dt, 0.0).map(|g| Self { steps, ..g })
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn len(&self) -> usize {
        self.steps + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn time(&self, k: usize) -> f64 {
        k as f64 * self.dt
    }

    pub fn t_max(&self) -> f64 {
        self.time(self.steps)
    }

    pub fn times(&self) -> Vec<f64> {
        (0..self.len()).map(|k| self.time(k)).collect()
    }
}

/// Which member of the initial ground manifold is evolved in the pure
/// protocol.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum InitialState {
    /// `(|even> + |odd>)/sqrt 2`, polarized along `+x`. The return
    /// probabilities are resolved against this state and its spin-flipped
    /// partner.
    #[default]
    BrokenSymmetry,
    /// Lowest even-parity state; sectors are the parity eigenstates.
    ParityEven,
    /// Lowest odd-parity state; sectors are the parity eigenstates.
    ParityOdd,
}

/// A quench `H(h0) -> H(h_f)` together with the sampling grid.
#[derive(Clone, Debug, PartialEq)]
pub struct QuenchSpec {
    initial: LmgParams,
    quenched: LmgParams,
    beta: Option<f64>,
    grid: TimeGrid,
    initial_state: InitialState,
}

impl QuenchSpec {
    /// `beta = None` selects the pure ground-manifold protocol, `Some(beta)`
    /// a Gibbs state of the pre-quench Hamiltonian.
    pub fn new(initial: LmgParams, h_final: f64, beta: Option<f64>, grid: TimeGrid) -> Result<Self> {
        if !h_final.is_finite() {
            return Err(Error::domain("final field must be finite"));
        }
        if let Some(b) = beta {
            if !(b.is_finite() && b >= 0.0) {
                return Err(Error::domain(format!("beta must be >= 0, got {b}")));
            }
        }
        Ok(Self {
            initial,
            quenched: initial.with_field(h_final),
            beta,
            grid,
            initial_state: InitialState::default(),
        })
    }

    pub fn with_initial_state(mut self, initial_state: InitialState) -> Self {
        self.initial_state = initial_state;
        self
    }

    pub fn with_grid(mut self, grid: TimeGrid) -> Self {
        self.grid = grid;
        self
    }

    pub fn initial(&self) -> &LmgParams {
        &self.initial
    }

    pub fn quenched(&self) -> &LmgParams {
        &self.quenched
    }

    pub fn beta(&self) -> Option<f64> {
        self.beta
    }

    pub fn grid(&self) -> &TimeGrid {
        &self.grid
    }

    pub fn initial_state(&self) -> InitialState {
        self.initial_state
    }
}

/// Uniformly sampled real observable.
#[derive(Clone, Debug, PartialEq)]
pub struct TimeSeries {
    pub times: Vec<f64>,
    pub values: Vec<f64>,
    pub label: String,
}

impl TimeSeries {
    pub fn new(times: Vec<f64>, values: Vec<f64>, label: impl Into<String>) -> Result<Self> {
        let label = label.into();
        if times.len() != values.len() {
            return Err(Error::DimensionMismatch { expected: times.len(), got: values.len() });
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite(label));
        }
        Ok(Self { times, values, label })
    }
}

/// `sum_k w_k exp(-i E_k t)`, the overlap `<phi|psi_t>` written in the
/// eigenbasis of the evolution Hamiltonian.
#[derive(Clone, Debug)]
pub struct SpectralAmplitude {
    shifted: Vec<f64>,
    weights: Vec<Complex64>,
    reference: f64,
}

impl SpectralAmplitude {
    /// `weights[k] = <phi|k><k|psi_0>`.
    pub fn new(energies: &[f64], weights: Vec<Complex64>) -> Self {
        // Phases are taken relative to the weighted mean energy so that the
        // arguments of sin/cos stay small; the global factor is restored after
        // the sum and does not affect the modulus.
        let total: f64 = weights.iter().map(|w| w.norm()).sum();
        let reference = if total > 0.0 {
            energies.iter().zip(&weights).map(|(e, w)| e * w.norm()).sum::<f64>() / total
        } else {
            0.0
        };
        let shifted = energies.iter().map(|e| e - reference).collect();
        Self { shifted, weights, reference }
    }

    pub fn at(&self, t: f64) -> Complex64 {
        let mut acc = ZERO;
        for (e, w) in self.shifted.iter().zip(&self.weights) {
            let (s, c) = (e * t).sin_cos();
            acc += w * Complex64::new(c, -s);
        }
        let (s, c) = (self.reference * t).sin_cos();
        acc * Complex64::new(c, -s)
    }

    /// `|<phi|psi_t>|`, skipping the global phase.
    pub fn modulus_at(&self, t: f64) -> f64 {
        let mut acc = ZERO;
        for (e, w) in self.shifted.iter().zip(&self.weights) {
            let (s, c) = (e * t).sin_cos();
            acc += w * Complex64::new(c, -s);
        }
        acc.norm()
    }
}

fn check_normalized(psi: &StateVector) -> Result<()> {
    let norm = psi.norm();
    if (norm - 1.0).abs() > 1e-10 {
        return Err(Error::NotNormalized(norm));
    }
    Ok(())
}

fn phases(energies: &[f64], t: f64) -> Vec<Complex64> {
    energies
        .iter()
        .map(|e| {
            let (s, c) = (e * t).sin_cos();
            Complex64::new(c, -s)
        })
        .collect()
}

/// `psi_t = V exp(-i E t) V^dagger psi_0`.
pub fn evolve_pure(spec_final: &SpectralDecomposition, psi0: &StateVector, t: f64) -> Result<StateVector> {
    if psi0.len() != spec_final.dim() {
        return Err(Error::DimensionMismatch { expected: spec_final.dim(), got: psi0.len() });
    }
    check_normalized(psi0)?;
    if t == 0.0 {
        return Ok(psi0.clone());
    }
    let v = spec_final.eigenvectors();
    let mut coords = v.adjoint() * psi0;
    for (c, p) in coords.iter_mut().zip(phases(spec_final.eigenvalues(), t)) {
        *c *= p;
    }
    Ok(v * coords)
}

/// `rho_t = U_t rho_0 U_t^dagger` with `U_t = V exp(-i E t) V^dagger`.
pub fn evolve_density(
    spec_final: &SpectralDecomposition,
    rho0: &DensityMatrix,
    t: f64,
) -> Result<DensityMatrix> {
    if rho0.dim() != spec_final.dim() {
        return Err(Error::DimensionMismatch { expected: spec_final.dim(), got: rho0.dim() });
    }
    if t == 0.0 {
        return Ok(rho0.clone());
    }
    let v = spec_final.eigenvectors();
    let mut in_eigenbasis = cmul(&cmul(&v.adjoint(), rho0.matrix()), v);
    let ph = phases(spec_final.eigenvalues(), t);
    for k in 0..in_eigenbasis.nrows() {
        for l in 0..in_eigenbasis.ncols() {
            in_eigenbasis[(k, l)] *= ph[k] * ph[l].conj();
        }
    }
    let rho_t = cmul(&cmul(v, &in_eigenbasis), &v.adjoint());
    Ok(DensityMatrix::new_unchecked(rho_t))
}

/// Loschmidt amplitude, echo and sector-resolved rate functions over a grid.
#[derive(Clone, Debug)]
pub struct LoschmidtResult {
    pub times: Vec<f64>,
    /// `<psi_0|psi_t>`.
    pub amplitude: Vec<Complex64>,
    /// `|<psi_0|psi_t>|^2`, floored at [`ECHO_FLOOR`].
    pub echo: Vec<f64>,
    /// `min_eta lambda_eta(t)`.
    pub rate: Vec<f64>,
    /// Sector labels; the initial state's own sector comes first.
    pub sectors: Vec<i8>,
    /// `lambda_eta(t) = -ln P_eta(t) / N`, one row per entry of `sectors`.
    pub sector_rates: Vec<Vec<f64>>,
    /// Label of the minimizing sector at each time.
    pub active_sector: Vec<i8>,
    /// `N = 2j`.
    pub n_spins: u32,
    /// Number of (time, sector) probabilities that hit the floor.
    pub floored: usize,
}

impl LoschmidtResult {
    pub fn echo_series(&self) -> Result<TimeSeries> {
        TimeSeries::new(self.times.clone(), self.echo.clone(), "echo")
    }

    pub fn rate_series(&self) -> Result<TimeSeries> {
        TimeSeries::new(self.times.clone(), self.rate.clone(), "rate")
    }

    pub fn min_echo(&self) -> f64 {
        self.echo.iter().copied().fold(f64::INFINITY, f64::min)
    }
}

/// `(ln P, floored?)` with `P = |a|^2` evaluated in the log domain.
fn log_probability(a: Complex64) -> (f64, bool) {
    let floor = ECHO_FLOOR.ln();
    let m = a.norm();
    if m == 0.0 {
        return (floor, true);
    }
    let lp = 2.0 * m.ln();
    if lp < floor {
        (floor, true)
    } else {
        (lp.min(0.0), false)
    }
}

/// Everything derived from a [`QuenchSpec`] that needs a diagonalization.
///
/// Spin operators and decompositions sit behind `Arc`s so sweeps can share
/// them between quenches.
#[derive(Clone, Debug)]
pub struct PreparedQuench {
    spec: QuenchSpec,
    ops: Arc<CollectiveSpinOps>,
    initial: Arc<SpectralDecomposition>,
    quenched: Arc<SpectralDecomposition>,
    manifold: GroundManifold,
}

impl PreparedQuench {
    pub fn new(spec: &QuenchSpec) -> Result<Self> {
        let ops = Arc::new(build_spin_ops(spec.initial.j)?);
        let initial = Arc::new(diagonalize_lmg(&spec.initial, &ops)?);
        let quenched = if spec.quenched == spec.initial {
            Arc::clone(&initial)
        } else {
            Arc::new(diagonalize_lmg(&spec.quenched, &ops)?)
        };
        Self::from_parts(spec.clone(), ops, initial, quenched)
    }

    /// Assembles a quench from precomputed pieces. Both decompositions must
    /// belong to `ops.j`.
    pub fn from_parts(
        spec: QuenchSpec,
        ops: Arc<CollectiveSpinOps>,
        initial: Arc<SpectralDecomposition>,
        quenched: Arc<SpectralDecomposition>,
    ) -> Result<Self> {
        let d = ops.dim();
        for dim in [initial.dim(), quenched.dim(), spec.initial.j.dim()] {
            if dim != d {
                return Err(Error::DimensionMismatch { expected: d, got: dim });
            }
        }
        let manifold = ground_manifold(&initial, &parity_operator(ops.j))?;
        Ok(Self { spec, ops, initial, quenched, manifold })
    }

    pub fn spec(&self) -> &QuenchSpec {
        &self.spec
    }

    pub fn ops(&self) -> &CollectiveSpinOps {
        &self.ops
    }

    pub fn initial_spectrum(&self) -> &SpectralDecomposition {
        &self.initial
    }

    pub fn quenched_spectrum(&self) -> &SpectralDecomposition {
        &self.quenched
    }

    pub fn manifold(&self) -> &GroundManifold {
        &self.manifold
    }

    /// Ground-manifold basis `(label, state)` for the chosen initial state;
    /// the first entry is the initial state itself.
    pub fn sector_states(&self) -> Result<Vec<(i8, StateVector)>> {
        match self.spec.initial_state {
            InitialState::BrokenSymmetry => {
                let (plus, minus) = self.manifold.broken_symmetry_pair(&self.ops.jx)?;
                Ok(vec![(1, plus), (-1, minus)])
            }
            InitialState::ParityEven | InitialState::ParityOdd => {
                let own = if self.spec.initial_state == InitialState::ParityEven { 1 } else { -1 };
                let mut out = Vec::new();
                for p in [own, -own] {
                    let st = self
                        .manifold
                        .state(p)
                        .ok_or_else(|| Error::domain("missing parity sector"))?;
                    out.push((p, st.vector.clone()));
                }
                Ok(out)
            }
        }
    }

    /// Pure initial state `|psi_0>`.
    pub fn initial_vector(&self) -> Result<StateVector> {
        Ok(self.sector_states()?.swap_remove(0).1)
    }

    /// Gibbs state of the pre-quench Hamiltonian at the configured `beta`.
    pub fn initial_density(&self) -> Result<DensityMatrix> {
        let beta = self
            .spec
            .beta
            .ok_or_else(|| Error::domain("thermal protocol requires beta"))?;
        thermal_state(&self.initial, beta)
    }

    /// `<phi|psi_t>` as a function of time.
    pub fn amplitude_to(&self, phi: &StateVector, psi0: &StateVector) -> Result<SpectralAmplitude> {
        let c_psi = self.quenched.coordinates(psi0)?;
        let c_phi = self.quenched.coordinates(phi)?;
        let weights = c_phi.iter().zip(&c_psi).map(|(a, b)| a.conj() * b).collect();
        Ok(SpectralAmplitude::new(self.quenched.eigenvalues(), weights))
    }

    /// Pure-protocol Loschmidt series.
    pub fn loschmidt(&self) -> Result<LoschmidtResult> {
        if self.spec.beta.is_some() {
            return Err(Error::domain(
                "Loschmidt series is defined for the pure protocol; drop beta",
            ));
        }
        let sectors = self.sector_states()?;
        let psi0 = &sectors[0].1;
        let amps = sectors
            .iter()
            .map(|(_, phi)| self.amplitude_to(phi, psi0))
            .collect::<Result<Vec<_>>>()?;

        let grid = self.spec.grid;
        let n = f64::from(self.spec.initial.j.n_spins());
        let times = grid.times();
        let mut amplitude = Vec::with_capacity(times.len());
        let mut echo = Vec::with_capacity(times.len());
        let mut sector_rates = vec![Vec::with_capacity(times.len()); sectors.len()];
        let mut floored = 0;

        for &t in &times {
            for (s, amp) in amps.iter().enumerate() {
                let a = if t == 0.0 && s == 0 {
                    Complex64::new(1.0, 0.0)
                } else {
                    amp.at(t)
                };
                let (lp, hit_floor) = log_probability(a);
                floored += usize::from(hit_floor);
                // -0.0 is normalized to +0.0
                sector_rates[s].push(-lp / n + 0.0);
                if s == 0 {
                    amplitude.push(a);
                    echo.push(lp.exp().max(ECHO_FLOOR));
                }
            }
        }

        let labels: Vec<i8> = sectors.iter().map(|(l, _)| *l).collect();
        let mut rate = Vec::with_capacity(times.len());
        let mut active_sector = Vec::with_capacity(times.len());
        for k in 0..times.len() {
            let (best, value) = argmin_sector(&sector_rates, k);
            rate.push(value);
            active_sector.push(labels[best]);
        }

        for v in echo.iter().chain(&rate) {
            if !v.is_finite() {
                return Err(Error::NonFinite("loschmidt".into()));
            }
        }
        Ok(LoschmidtResult {
            times,
            amplitude,
            echo,
            rate,
            sectors: labels,
            sector_rates,
            active_sector,
            n_spins: self.spec.initial.j.n_spins(),
            floored,
        })
    }
}

/// First sector attaining the minimum rate at time index `k`.
fn argmin_sector(sector_rates: &[Vec<f64>], k: usize) -> (usize, f64) {
    let mut best = 0;
    for s in 1..sector_rates.len() {
        if sector_rates[s][k] < sector_rates[best][k] {
            best = s;
        }
    }
    (best, sector_rates[best][k])
}

/// Builds the quench and evaluates the pure-protocol Loschmidt series.
pub fn loschmidt_series(quench: &QuenchSpec) -> Result<LoschmidtResult> {
    PreparedQuench::new(quench)?.loschmidt()
}

/// Times at which the dominant sector changes, refined by linear
/// interpolation of the rate difference between the two sectors involved.
pub fn detect_critical_times(result: &LoschmidtResult) -> Vec<f64> {
    if result.sectors.len() < 2 {
        return Vec::new();
    }
    let index_of = |label: i8| result.sectors.iter().position(|&s| s == label).unwrap_or(0);
    let mut out = Vec::new();
    for k in 0..result.active_sector.len().saturating_sub(1) {
        let (from, to) = (result.active_sector[k], result.active_sector[k + 1]);
        if from == to {
            continue;
        }
        let (a, b) = (&result.sector_rates[index_of(from)], &result.sector_rates[index_of(to)]);
        let before = a[k] - b[k];
        let after = a[k + 1] - b[k + 1];
        let (t0, t1) = (result.times[k], result.times[k + 1]);
        let denom = after - before;
        let frac = if denom > 0.0 { (-before / denom).clamp(0.0, 1.0) } else { 0.5 };
        out.push(t0 + frac * (t1 - t0));
    }
    out
}

/// Propagator `U_t` as a dense matrix; test and diagnostics helper.
pub fn propagator(spec_final: &SpectralDecomposition, t: f64) -> CMatrix {
    let v = spec_final.eigenvectors();
    let mut scaled = v.clone();
    for (k, p) in phases(spec_final.eigenvalues(), t).into_iter().enumerate() {
        scaled.column_mut(k).iter_mut().for_each(|z| *z *= p);
    }
    cmul(&scaled, &v.adjoint())
}
