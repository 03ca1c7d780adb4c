//! Collective spin operators in the maximal-spin (symmetric) sector.
//!
//! Basis states are `|j, m>` ordered by ascending `m = -j, ..., j`; index
//! `i` carries `m = i - j`. Every other module relies on this ordering.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::CMatrix;

/// Spin quantum number `j`, stored as the integer `2j` (= number of spins N).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SpinQuantumNumber {
    twice_j: u32,
}

impl SpinQuantumNumber {
    pub fn from_twice(twice_j: u32) -> Result<Self> {
        if twice_j == 0 {
            return Err(Error::domain(
                "spin j = 0 has a one-dimensional space with no collective dynamics",
            ));
        }
        Ok(Self { twice_j })
    }

    /// Accepts integer or half-integer `j > 0`.
    pub fn from_j(j: f64) -> Result<Self> {
        let twice = 2.0 * j;
        if !twice.is_finite() || twice.fract() != 0.0 || twice < 0.0 || twice > u32::MAX as f64 {
            return Err(Error::domain(format!("j = {j} is not a non-negative half-integer")));
        }
        Self::from_twice(twice as u32)
    }

    pub fn twice_j(self) -> u32 {
        self.twice_j
    }

    pub fn j(self) -> f64 {
        f64::from(self.twice_j) / 2.0
    }

    /// Number of spin-1/2 constituents, `N = 2j`.
    pub fn n_spins(self) -> u32 {
        self.twice_j
    }

    /// Hilbert-space dimension `2j + 1`.
    pub fn dim(self) -> usize {
        self.twice_j as usize + 1
    }

    /// `m` for basis index `i`.
    pub fn m(self, index: usize) -> f64 {
        index as f64 - self.j()
    }
}

impl std::fmt::Display for SpinQuantumNumber {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.twice_j.is_multiple_of(2) {
            write!(f, "{}", self.twice_j / 2)
        } else {
            write!(f, "{}/2", self.twice_j)
        }
    }
}

/// `<m+1| J_+ |m> = sqrt(j(j+1) - m(m+1))`, evaluated from integers.
///
/// With `J = 2j` and `M = 2m`, the radicand is `(J - M)(J + M + 2) / 4`.
fn ladder_element(twice_j: u32, index: usize) -> f64 {
    let big_j = i64::from(twice_j);
    let big_m = 2 * index as i64 - big_j;
    (((big_j - big_m) * (big_j + big_m + 2)) as f64 / 4.0).sqrt()
}

/// Dense `J_x, J_y, J_z, J_+, J_-` for a given spin.
#[derive(Clone, Debug)]
pub struct CollectiveSpinOps {
    pub j: SpinQuantumNumber,
    pub jx: CMatrix,
    pub jy: CMatrix,
    pub jz: CMatrix,
    pub jplus: CMatrix,
    pub jminus: CMatrix,
}

impl CollectiveSpinOps {
    pub fn dim(&self) -> usize {
        self.j.dim()
    }
}

/// Builds the collective spin operators for spin `j`.
pub fn build_spin_ops(j: SpinQuantumNumber) -> Result<CollectiveSpinOps> {
    if j.twice_j == 0 {
        return Err(Error::domain("spin j must be positive"));
    }
    let d = j.dim();
    let mut jplus = CMatrix::zeros(d, d);
    let mut jz = CMatrix::zeros(d, d);
    for i in 0..d {
        jz[(i, i)] = Complex64::new(j.m(i), 0.0);
        if i + 1 < d {
            jplus[(i + 1, i)] = Complex64::new(ladder_element(j.twice_j, i), 0.0);
        }
    }
    let jminus = jplus.adjoint();

    let mut jx = CMatrix::zeros(d, d);
    let mut jy = CMatrix::zeros(d, d);
    for i in 0..d.saturating_sub(1) {
        let a = jplus[(i + 1, i)].re / 2.0;
        jx[(i + 1, i)] = Complex64::new(a, 0.0);
        jx[(i, i + 1)] = Complex64::new(a, 0.0);
        // jy = (J+ - J-) / 2i
        jy[(i + 1, i)] = Complex64::new(0.0, -a);
        jy[(i, i + 1)] = Complex64::new(0.0, a);
    }

    Ok(CollectiveSpinOps { j, jx, jy, jz, jplus, jminus })
}
