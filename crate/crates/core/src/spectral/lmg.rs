//! Lipkin-Meshkov-Glick Hamiltonian
//! `H = -2h J_z - (g/j)(J_x^2 + gamma J_y^2)` and its spin-flip parity.

use num_complex::Complex64;

use super::{diagonalize_in_sectors, SpectralDecomposition};
use crate::error::{Error, Result};
use crate::linalg::{hermitian_part, sparse_mul, CMatrix, HermitianMatrix};
use crate::spinops::{CollectiveSpinOps, SpinQuantumNumber};

/// Anisotropy used throughout the quench study.
pub const DEFAULT_GAMMA: f64 = 0.5;
/// Coupling; sets the energy and time units.
pub const DEFAULT_G: f64 = 1.0;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LmgParams {
    /// Transverse field.
    pub h: f64,
    /// Anisotropy of the interaction.
    pub gamma: f64,
    /// Interaction strength.
    pub g: f64,
    pub j: SpinQuantumNumber,
}

impl LmgParams {
    pub fn new(h: f64, gamma: f64, g: f64, j: SpinQuantumNumber) -> Result<Self> {
        if !h.is_finite() || !gamma.is_finite() || !g.is_finite() {
            return Err(Error::domain("LMG parameters must be finite"));
        }
        if g == 0.0 {
            return Err(Error::domain("coupling g must be nonzero"));
        }
        Ok(Self { h, gamma, g, j })
    }

    /// `gamma = 1/2`, `g = 1`.
    pub fn standard(h: f64, j: SpinQuantumNumber) -> Self {
        Self { h, gamma: DEFAULT_GAMMA, g: DEFAULT_G, j }
    }

    pub fn with_field(self, h: f64) -> Self {
        Self { h, ..self }
    }
}

pub fn build_lmg_hamiltonian(params: &LmgParams, ops: &CollectiveSpinOps) -> Result<HermitianMatrix> {
    if ops.j != params.j {
        return Err(Error::DimensionMismatch { expected: params.j.dim(), got: ops.dim() });
    }
    let LmgParams { h, gamma, g, j } = *params;
    let jx2 = sparse_mul(&ops.jx, &ops.jx);
    let jy2 = sparse_mul(&ops.jy, &ops.jy);
    let interaction = jx2 + jy2.scale(gamma);
    let ham = ops.jz.scale(-2.0 * h) - interaction.scale(g / j.j());
    Ok(hermitian_part(&ham))
}

/// Spin-flip parity `diag((-1)^(j+m))`.
pub fn parity_operator(j: SpinQuantumNumber) -> HermitianMatrix {
    let d = j.dim();
    let mut pi = CMatrix::zeros(d, d);
    for i in 0..d {
        pi[(i, i)] = Complex64::new(if i % 2 == 0 { 1.0 } else { -1.0 }, 0.0);
    }
    pi
}

/// `h_c = (h0 + g) / 2` for quenches starting at field `h0`.
pub fn dynamical_critical_field(h0: f64, g: f64) -> f64 {
    (h0 + g) / 2.0
}

/// Builds and diagonalizes the LMG Hamiltonian sector by sector.
pub fn diagonalize_lmg(params: &LmgParams, ops: &CollectiveSpinOps) -> Result<SpectralDecomposition> {
    let ham = build_lmg_hamiltonian(params, ops)?;
    diagonalize_in_sectors(&ham, &parity_operator(params.j))
}
