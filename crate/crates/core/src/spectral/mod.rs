//! Hermitian eigendecomposition and the objects built from it: ground
//! manifolds, Gibbs states and density matrices.

pub mod lmg;

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{
    hermitian_part, hermiticity_defect, max_abs, reconstruct, CMatrix, HermitianMatrix,
    StateVector, ZERO,
};

pub use lmg::{
    build_lmg_hamiltonian, diagonalize_lmg, dynamical_critical_field, parity_operator, LmgParams,
    DEFAULT_G, DEFAULT_GAMMA,
};

/// Scale-aware tolerance used for input Hermiticity and symmetry checks.
fn input_tolerance(m: &CMatrix) -> f64 {
    1e-10 * max_abs(m).max(1.0)
}

/// Eigenvalues in ascending order with the matching orthonormal eigenvectors
/// stored column-wise.
///
/// When built by [`diagonalize_in_sectors`] every eigenvector also carries the
/// eigenvalue (+1 or -1) of the symmetry it was resolved against.
#[derive(Clone, Debug)]
pub struct SpectralDecomposition {
    eigenvalues: Vec<f64>,
    eigenvectors: CMatrix,
    parities: Option<Vec<i8>>,
}

impl SpectralDecomposition {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn eigenvectors(&self) -> &CMatrix {
        &self.eigenvectors
    }

    pub fn parities(&self) -> Option<&[i8]> {
        self.parities.as_deref()
    }

    pub fn ground_energy(&self) -> f64 {
        self.eigenvalues[0]
    }

    /// `V diag(E) V^dagger`.
    pub fn reconstruct(&self) -> HermitianMatrix {
        reconstruct(&self.eigenvectors, &self.eigenvalues)
    }

    /// `max |V^dagger V - I|`.
    pub fn unitarity_defect(&self) -> f64 {
        let n = self.dim();
        let gram = crate::linalg::cmul(&self.eigenvectors.adjoint(), &self.eigenvectors);
        max_abs(&(gram - CMatrix::identity(n, n)))
    }

    /// Coordinates `<k|psi>` of a state in the eigenbasis.
    pub fn coordinates(&self, psi: &StateVector) -> Result<Vec<Complex64>> {
        if psi.len() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), got: psi.len() });
        }
        Ok(self
            .eigenvectors
            .column_iter()
            .map(|v| v.iter().zip(psi.iter()).fold(ZERO, |acc, (a, b)| acc + a.conj() * b))
            .collect())
    }

    /// Matrix function `V diag(f(E)) V^dagger` for a real-valued `f`.
    pub fn apply_real(&self, f: impl Fn(f64) -> f64) -> HermitianMatrix {
        let w: Vec<f64> = self.eigenvalues.iter().map(|&e| f(e)).collect();
        hermitian_part(&reconstruct(&self.eigenvectors, &w))
    }
}

/// Multiplies each column by the conjugate phase of its largest entry so that
/// entry becomes real and positive. Makes the output independent of the
/// eigensolver's arbitrary phase choice.
fn fix_phases(vectors: &mut CMatrix) {
    for mut col in vectors.column_iter_mut() {
        let mut best = 0;
        let mut best_norm = -1.0;
        for (i, z) in col.iter().enumerate() {
            // strict > keeps the first of equal-magnitude entries
            if z.norm() > best_norm * (1.0 + 1e-12) {
                best = i;
                best_norm = z.norm();
            }
        }
        if best_norm > 0.0 {
            let phase = col[best] / best_norm;
            col.iter_mut().for_each(|z| *z *= phase.conj());
            col[best] = Complex64::new(col[best].re, 0.0);
        }
    }
}

fn raw_eigh(h: &HermitianMatrix) -> Result<(Vec<f64>, CMatrix)> {
    let n = h.nrows();
    let max_iter = 200 * n.max(10);
    let (values, vectors) = if h.iter().all(|z| z.im == 0.0) {
        let re: DMatrix<f64> = h.map(|z| z.re);
        let eig = SymmetricEigen::try_new(re, f64::EPSILON, max_iter)
            .ok_or(Error::NoConvergence(n))?;
        (eig.eigenvalues, eig.eigenvectors.map(|x| Complex64::new(x, 0.0)))
    } else {
        let eig = SymmetricEigen::try_new(h.clone(), f64::EPSILON, max_iter)
            .ok_or(Error::NoConvergence(n))?;
        (eig.eigenvalues, eig.eigenvectors)
    };
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    let sorted_values: Vec<f64> = order.iter().map(|&k| values[k]).collect();
    let mut sorted_vectors = CMatrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        sorted_vectors.set_column(dst, &vectors.column(src));
    }
    fix_phases(&mut sorted_vectors);
    if sorted_values.iter().any(|e| !e.is_finite()) {
        return Err(Error::NonFinite("eigenvalues".into()));
    }
    Ok((sorted_values, sorted_vectors))
}

fn check_square_hermitian(h: &HermitianMatrix) -> Result<()> {
    if h.nrows() != h.ncols() {
        return Err(Error::DimensionMismatch { expected: h.nrows(), got: h.ncols() });
    }
    if h.nrows() == 0 {
        return Err(Error::domain("empty matrix"));
    }
    let defect = hermiticity_defect(h);
    if defect > input_tolerance(h) {
        return Err(Error::NotHermitian(defect));
    }
    Ok(())
}

/// Full eigendecomposition of a Hermitian matrix. Real symmetric input takes
/// the real solver.
pub fn diagonalize(h: &HermitianMatrix) -> Result<SpectralDecomposition> {
    check_square_hermitian(h)?;
    let (eigenvalues, eigenvectors) = raw_eigh(h)?;
    Ok(SpectralDecomposition { eigenvalues, eigenvectors, parities: None })
}

/// Sector labels of a diagonal +-1 symmetry operator.
fn diagonal_signs(pi: &HermitianMatrix) -> Result<Vec<i8>> {
    let n = pi.nrows();
    let mut signs = Vec::with_capacity(n);
    for i in 0..n {
        for k in 0..n {
            if i != k && pi[(i, k)] != ZERO {
                return Err(Error::domain("symmetry operator must be diagonal"));
            }
        }
        let z = pi[(i, i)];
        signs.push(match (z.re, z.im) {
            (x, y) if x == 1.0 && y == 0.0 => 1,
            (x, y) if x == -1.0 && y == 0.0 => -1,
            _ => return Err(Error::domain("symmetry operator entries must be +1 or -1")),
        });
    }
    Ok(signs)
}

/// Diagonalizes `h` block by block in the eigenspaces of a diagonal
/// symmetry `pi` (entries +-1). Eigenvectors are exact symmetry eigenstates
/// even when levels of opposite sectors are degenerate to machine precision.
pub fn diagonalize_in_sectors(
    h: &HermitianMatrix,
    pi: &HermitianMatrix,
) -> Result<SpectralDecomposition> {
    check_square_hermitian(h)?;
    if pi.nrows() != h.nrows() || pi.ncols() != h.ncols() {
        return Err(Error::DimensionMismatch { expected: h.nrows(), got: pi.nrows() });
    }
    let signs = diagonal_signs(pi)?;
    let n = h.nrows();

    let mut leak = 0.0f64;
    for i in 0..n {
        for k in 0..n {
            if signs[i] != signs[k] {
                leak = leak.max(h[(i, k)].norm());
            }
        }
    }
    if leak > input_tolerance(h) {
        return Err(Error::SymmetryBroken(leak));
    }

    // (energy, sector, column) triples gathered from both blocks
    let mut levels: Vec<(f64, i8, Vec<Complex64>)> = Vec::with_capacity(n);
    for sector in [1i8, -1] {
        let idx: Vec<usize> = (0..n).filter(|&i| signs[i] == sector).collect();
        if idx.is_empty() {
            continue;
        }
        let block = CMatrix::from_fn(idx.len(), idx.len(), |a, b| h[(idx[a], idx[b])]);
        let (vals, vecs) = raw_eigh(&block)?;
        for (k, &e) in vals.iter().enumerate() {
            let mut full = vec![ZERO; n];
            for (a, &i) in idx.iter().enumerate() {
                full[i] = vecs[(a, k)];
            }
            levels.push((e, sector, full));
        }
    }
    // stable: equal energies keep the even sector first
    levels.sort_by(|a, b| a.0.total_cmp(&b.0));

    let mut eigenvectors = CMatrix::zeros(n, n);
    let mut eigenvalues = Vec::with_capacity(n);
    let mut parities = Vec::with_capacity(n);
    for (k, (e, s, v)) in levels.into_iter().enumerate() {
        eigenvalues.push(e);
        parities.push(s);
        for (i, z) in v.into_iter().enumerate() {
            eigenvectors[(i, k)] = z;
        }
    }
    Ok(SpectralDecomposition { eigenvalues, eigenvectors, parities: Some(parities) })
}

/// Validated density operator.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    rho: CMatrix,
}

impl DensityMatrix {
    /// Checks Hermiticity (1e-12), unit trace (1e-10) and positivity
    /// (eigenvalues >= -1e-12).
    pub fn new(rho: CMatrix) -> Result<Self> {
        if rho.nrows() != rho.ncols() {
            return Err(Error::DimensionMismatch { expected: rho.nrows(), got: rho.ncols() });
        }
        let defect = hermiticity_defect(&rho);
        if defect > 1e-12 {
            return Err(Error::InvalidDensity(format!("not Hermitian (deviation {defect:e})")));
        }
        let trace = rho.trace();
        if (trace.re - 1.0).abs() > 1e-10 || trace.im.abs() > 1e-10 {
            return Err(Error::InvalidDensity(format!("trace {trace} differs from 1")));
        }
        let rho = hermitian_part(&rho);
        let (vals, _) = raw_eigh(&rho)?;
        if vals[0] < -1e-12 {
            return Err(Error::InvalidDensity(format!("negative eigenvalue {:e}", vals[0])));
        }
        Ok(Self { rho })
    }

    pub(crate) fn new_unchecked(rho: CMatrix) -> Self {
        Self { rho: hermitian_part(&rho) }
    }

    /// `|psi><psi|`; the state must be normalized within 1e-10.
    pub fn from_pure(psi: &StateVector) -> Result<Self> {
        let norm = psi.norm();
        if (norm - 1.0).abs() > 1e-10 {
            return Err(Error::NotNormalized(norm));
        }
        Ok(Self::new_unchecked(psi * psi.adjoint()))
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.rho
    }

    pub fn dim(&self) -> usize {
        self.rho.nrows()
    }

    pub fn trace(&self) -> f64 {
        self.rho.trace().re
    }

    /// `Tr rho^2`.
    pub fn purity(&self) -> f64 {
        self.rho.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn eigen(&self) -> Result<SpectralDecomposition> {
        let (eigenvalues, eigenvectors) = raw_eigh(&self.rho)?;
        Ok(SpectralDecomposition { eigenvalues, eigenvectors, parities: None })
    }

    pub fn into_matrix(self) -> CMatrix {
        self.rho
    }
}

/// Normalized Boltzmann weights `exp(-beta (E_k - E_0)) / Z` in eigenvalue
/// order.
pub fn thermal_weights(spec: &SpectralDecomposition, beta: f64) -> Result<Vec<f64>> {
    if !beta.is_finite() || beta < 0.0 {
        return Err(Error::domain(format!("inverse temperature must be >= 0, got {beta}")));
    }
    let e0 = spec.ground_energy();
    let mut w: Vec<f64> = spec.eigenvalues.iter().map(|&e| (-beta * (e - e0)).exp()).collect();
    let z: f64 = w.iter().sum();
    w.iter_mut().for_each(|x| *x /= z);
    Ok(w)
}

/// Gibbs state `exp(-beta H) / Z` assembled in the eigenbasis of `H`.
pub fn thermal_state(spec: &SpectralDecomposition, beta: f64) -> Result<DensityMatrix> {
    let w = thermal_weights(spec, beta)?;
    Ok(DensityMatrix::new_unchecked(reconstruct(&spec.eigenvectors, &w)))
}

/// One member of the ground manifold.
#[derive(Clone, Debug)]
pub struct GroundState {
    pub parity: i8,
    pub vector: StateVector,
    pub energy: f64,
}

/// Lowest-energy state of each symmetry sector.
#[derive(Clone, Debug)]
pub struct GroundManifold {
    /// Even sector first.
    pub states: Vec<GroundState>,
    pub degeneracy_gap: f64,
}

impl GroundManifold {
    pub fn state(&self, parity: i8) -> Option<&GroundState> {
        self.states.iter().find(|s| s.parity == parity)
    }

    /// Symmetry-broken combinations `(|e> +- |o>) / sqrt 2`, with the relative
    /// phase chosen so that `<e| op |o>` is real and non-negative; the first
    /// state then has `<op> >= 0`. `op` must map each sector onto the other
    /// (for the spin-flip parity, `J_x`).
    pub fn broken_symmetry_pair(&self, op: &CMatrix) -> Result<(StateVector, StateVector)> {
        let even = self.state(1).ok_or_else(|| Error::domain("no even ground state"))?;
        let odd = self.state(-1).ok_or_else(|| Error::domain("no odd ground state"))?;
        if op.nrows() != even.vector.len() {
            return Err(Error::DimensionMismatch { expected: even.vector.len(), got: op.nrows() });
        }
        let coupling = crate::linalg::inner(&even.vector, &(op * &odd.vector));
        let phase = if coupling.norm() > 0.0 {
            (coupling / coupling.norm()).conj()
        } else {
            Complex64::new(1.0, 0.0)
        };
        let odd = odd.vector.map(|z| z * phase);
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let plus = (&even.vector + &odd).scale(s);
        let minus = (&even.vector - &odd).scale(s);
        Ok((plus, minus))
    }
}

/// Groups of eigenvalue indices whose consecutive gaps are within `tol`.
fn degenerate_clusters(values: &[f64], tol: f64) -> Vec<std::ops::Range<usize>> {
    let mut out = Vec::new();
    let mut start = 0;
    for k in 1..=values.len() {
        if k == values.len() || values[k] - values[k - 1] > tol {
            out.push(start..k);
            start = k;
        }
    }
    out
}

/// Lowest-energy eigenstate in each sector of the symmetry `pi`.
///
/// Uses the sector labels of `spec` when present. Otherwise eigenvectors of
/// each (quasi-)degenerate cluster are rotated into eigenvectors of `pi`
/// restricted to that cluster before labelling.
pub fn ground_manifold(spec: &SpectralDecomposition, pi: &HermitianMatrix) -> Result<GroundManifold> {
    let n = spec.dim();
    if pi.nrows() != n {
        return Err(Error::DimensionMismatch { expected: n, got: pi.nrows() });
    }
    let mut found: Vec<GroundState> = Vec::new();
    fn push(found: &mut Vec<GroundState>, st: GroundState) {
        if !found.iter().any(|f| f.parity == st.parity) {
            found.push(st);
        }
    }

    if let Some(par) = spec.parities() {
        for (k, &parity) in par.iter().enumerate().take(n) {
            push(&mut found, GroundState {
                parity,
                vector: spec.eigenvectors.column(k).into_owned(),
                energy: spec.eigenvalues[k],
            });
        }
    } else {
        let spread = spec.eigenvalues[n - 1] - spec.eigenvalues[0];
        let tol = 1e-9 * spread.abs().max(1.0);
        for cluster in degenerate_clusters(&spec.eigenvalues, tol) {
            let vc = spec.eigenvectors.columns(cluster.start, cluster.len()).into_owned();
            let restricted = hermitian_part(&(vc.adjoint() * pi * &vc));
            let (pvals, rot) = raw_eigh(&restricted)?;
            let rotated = &vc * &rot;
            for (a, &p) in pvals.iter().enumerate() {
                let parity = if (p - 1.0).abs() < 1e-6 {
                    1
                } else if (p + 1.0).abs() < 1e-6 {
                    -1
                } else {
                    return Err(Error::SymmetryBroken((p.abs() - 1.0).abs()));
                };
                let energy = cluster
                    .clone()
                    .enumerate()
                    .map(|(b, k)| rot[(b, a)].norm_sqr() * spec.eigenvalues[k])
                    .sum();
                push(&mut found, GroundState { parity, vector: rotated.column(a).into_owned(), energy });
            }
            if found.len() == 2 {
                break;
            }
        }
    }

    if found.len() < 2 {
        return Err(Error::domain("a symmetry sector of the ground manifold is empty"));
    }
    found.sort_by_key(|s| -s.parity);
    for st in &found {
        let defect = (pi * &st.vector - st.vector.scale(f64::from(st.parity))).norm();
        if defect > 1e-9 {
            return Err(Error::SymmetryBroken(defect));
        }
    }
    let degeneracy_gap = (found[0].energy - found[1].energy).abs();
    Ok(GroundManifold { states: found, degeneracy_gap })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spinops::{build_spin_ops, SpinQuantumNumber};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn real_diag(v: &[f64]) -> CMatrix {
        CMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
            v.len(),
            v.iter().map(|&x| Complex64::new(x, 0.0)),
        ))
    }

    fn random_hermitian(n: usize, seed: u64) -> CMatrix {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = CMatrix::from_fn(n, n, |_, _| {
            Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
        });
        hermitian_part(&a)
    }

    #[test]
    fn diagonal_matrix_sorted() {
        let s = diagonalize(&real_diag(&[3.0, 1.0, 2.0])).unwrap();
        assert_eq!(s.eigenvalues(), &[1.0, 2.0, 3.0]);
        // permutation eigenvectors
        assert!((s.eigenvectors()[(1, 0)].re - 1.0).abs() < 1e-15);
        assert!((s.eigenvectors()[(2, 1)].re - 1.0).abs() < 1e-15);
        assert!((s.eigenvectors()[(0, 2)].re - 1.0).abs() < 1e-15);
    }

    #[test]
    fn pauli_x_over_two() {
        let ops = build_spin_ops(SpinQuantumNumber::from_twice(1).unwrap()).unwrap();
        let s = diagonalize(&ops.jx).unwrap();
        assert!((s.eigenvalues()[0] + 0.5).abs() < 1e-15);
        assert!((s.eigenvalues()[1] - 0.5).abs() < 1e-15);
    }

    #[test]
    fn rejects_non_hermitian() {
        let mut m = real_diag(&[1.0, 2.0]);
        m[(0, 1)] = Complex64::new(1.0, 0.0);
        assert!(matches!(diagonalize(&m), Err(Error::NotHermitian(_))));
    }

    #[test]
    fn random_hermitian_reconstructs() {
        for (n, seed) in [(8usize, 1u64), (64, 2), (601, 3)] {
            let h = random_hermitian(n, seed);
            let s = diagonalize(&h).unwrap();
            let scale = max_abs(&h);
            assert!(s.unitarity_defect() <= 1e-10, "unitarity at n={n}");
            assert!(max_abs(&(s.reconstruct() - &h)) <= 1e-9 * scale, "reconstruction at n={n}");
            assert!(s.eigenvalues().windows(2).all(|w| w[0] <= w[1]));
        }
    }

    #[test]
    fn sector_diagonalization_matches_full() {
        let h = {
            // parity-preserving random real symmetric matrix
            let mut rng = ChaCha8Rng::seed_from_u64(7);
            let a = CMatrix::from_fn(9, 9, |i, k| {
                if (i + k) % 2 == 0 {
                    Complex64::new(rng.random_range(-1.0..1.0), 0.0)
                } else {
                    ZERO
                }
            });
            hermitian_part(&a)
        };
        let pi = parity_operator(SpinQuantumNumber::from_twice(8).unwrap());
        let blocked = diagonalize_in_sectors(&h, &pi).unwrap();
        let full = diagonalize(&h).unwrap();
        for (a, b) in blocked.eigenvalues().iter().zip(full.eigenvalues()) {
            assert!((a - b).abs() < 1e-12);
        }
        assert!(max_abs(&(blocked.reconstruct() - &h)) < 1e-12);
        assert_eq!(blocked.parities().unwrap().iter().filter(|&&p| p == 1).count(), 5);
    }

    #[test]
    fn sector_diagonalization_rejects_symmetry_breaking() {
        let ops = build_spin_ops(SpinQuantumNumber::from_twice(2).unwrap()).unwrap();
        let pi = parity_operator(ops.j);
        assert!(matches!(
            diagonalize_in_sectors(&ops.jx, &pi),
            Err(Error::SymmetryBroken(_))
        ));
    }

    #[test]
    fn thermal_state_limits() {
        let s = diagonalize(&real_diag(&[0.0, 1.0, 2.5])).unwrap();
        let rho = thermal_state(&s, 0.0).unwrap();
        assert!(max_abs(&(rho.matrix() - CMatrix::identity(3, 3).scale(1.0 / 3.0))) < 1e-15);

        let rho = thermal_state(&s, 1e4).unwrap();
        assert!(rho.purity() >= 1.0 - 1e-6);

        let s = diagonalize(&real_diag(&[0.0, 1.0])).unwrap();
        let rho = thermal_state(&s, 1.0).unwrap();
        let z = 1.0 + (-1.0f64).exp();
        assert!((rho.matrix()[(0, 0)].re - 1.0 / z).abs() < 1e-15);
        assert!((rho.matrix()[(1, 1)].re - (-1.0f64).exp() / z).abs() < 1e-15);

        assert!(thermal_state(&s, -0.1).is_err());
    }

    #[test]
    fn thermal_state_survives_huge_energies() {
        let s = diagonalize(&real_diag(&[-1e6, -1e6 + 1.0, 1e6])).unwrap();
        let rho = thermal_state(&s, 10.0).unwrap();
        assert!((rho.trace() - 1.0).abs() < 1e-12);
        assert!(rho.matrix().iter().all(|z| z.re.is_finite()));
    }

    #[test]
    fn thermal_state_commutes_with_hamiltonian() {
        let h = random_hermitian(12, 11);
        let s = diagonalize(&h).unwrap();
        for beta in [0.0, 0.3, 1.0, 5.0, 50.0] {
            let rho = thermal_state(&s, beta).unwrap();
            let c = crate::linalg::commutator(rho.matrix(), &h);
            assert!(max_abs(&c) <= 1e-10 * max_abs(&h));
            DensityMatrix::new(rho.matrix().clone()).unwrap();
        }
    }

    #[test]
    fn density_validation() {
        assert!(DensityMatrix::new(real_diag(&[0.5, 0.6])).is_err());
        assert!(DensityMatrix::new(real_diag(&[1.2, -0.2])).is_err());
        assert!(DensityMatrix::new(real_diag(&[0.25, 0.75])).is_ok());
        let psi = StateVector::from_vec(vec![Complex64::new(2.0, 0.0), ZERO]);
        assert!(matches!(DensityMatrix::from_pure(&psi), Err(Error::NotNormalized(_))));
    }

    #[test]
    fn ground_manifold_via_cluster_rotation_matches_sector_labels() {
        let ops = build_spin_ops(SpinQuantumNumber::from_twice(40).unwrap()).unwrap();
        let params = LmgParams::new(0.0, 0.5, 1.0, ops.j).unwrap();
        let h = build_lmg_hamiltonian(&params, &ops).unwrap();
        let pi = parity_operator(ops.j);
        let labelled = ground_manifold(&diagonalize_in_sectors(&h, &pi).unwrap(), &pi).unwrap();
        let rotated = ground_manifold(&diagonalize(&h).unwrap(), &pi).unwrap();
        for p in [1, -1] {
            let a = &labelled.state(p).unwrap().vector;
            let b = &rotated.state(p).unwrap().vector;
            assert!((crate::linalg::inner(a, b).norm() - 1.0).abs() < 1e-8);
        }
    }

    #[test]
    fn spin_half_manifold_is_trivial() {
        let ops = build_spin_ops(SpinQuantumNumber::from_twice(1).unwrap()).unwrap();
        let params = LmgParams::new(0.3, 0.5, 1.0, ops.j).unwrap();
        let h = build_lmg_hamiltonian(&params, &ops).unwrap();
        let pi = parity_operator(ops.j);
        let gm = ground_manifold(&diagonalize(&h).unwrap(), &pi).unwrap();
        assert_eq!(gm.states.len(), 2);
        assert_eq!(gm.states[0].parity, 1);
        assert_eq!(gm.states[1].parity, -1);
    }

    #[test]
    fn clusters_group_close_values() {
        let c = degenerate_clusters(&[0.0, 1e-12, 1.0, 2.0, 2.0], 1e-9);
        assert_eq!(c, vec![0..2, 2..3, 3..5]);
    }
}
