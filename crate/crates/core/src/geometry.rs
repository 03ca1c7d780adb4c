//! Distances between quantum states: Wootters angle for pure states,
//! Uhlmann fidelity and Bures angle for density matrices.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dynamics::{PreparedQuench, QuenchSpec};
use crate::error::{Error, Result};
use crate::linalg::{cmul, inner, CMatrix, StateVector};
use crate::spectral::{thermal_weights, DensityMatrix, SpectralDecomposition};

/// Overlaps or fidelities above 1 by more than this are treated as faults.
pub const CLAMP_TOLERANCE: f64 = 1e-8;

/// Truncation budget for the thermal path: discarded Gibbs weights satisfy
/// `sum sqrt(p) <= WEIGHT_BUDGET`, which bounds the error on `sqrt F`.
const WEIGHT_BUDGET: f64 = 1e-13;

fn clamp_unit(x: f64) -> Result<f64> {
    if x > 1.0 + CLAMP_TOLERANCE {
        return Err(Error::ClampOverflow(x - 1.0));
    }
    Ok(x.clamp(0.0, 1.0))
}

/// `arccos |<psi1|psi2>|` for normalized states.
pub fn wootters_distance(psi1: &StateVector, psi2: &StateVector) -> Result<f64> {
    if psi1.len() != psi2.len() {
        return Err(Error::DimensionMismatch { expected: psi1.len(), got: psi2.len() });
    }
    for psi in [psi1, psi2] {
        let n = psi.norm();
        if (n - 1.0).abs() > 1e-10 {
            return Err(Error::NotNormalized(n));
        }
    }
    // atan2 of the orthogonal and parallel parts stays accurate near 0,
    // where arccos of the overlap loses half the digits
    let a = psi1.unscale(psi1.norm());
    let b = psi2.unscale(psi2.norm());
    let c = inner(&a, &b);
    let perp = (&b - a * c).norm();
    Ok(perp.atan2(c.norm()))
}

struct SqrtFactor {
    vectors: CMatrix,
    roots: Vec<f64>,
}

/// Eigenbasis and clamped square-root weights of a density matrix.
fn sqrt_factor(rho: &DensityMatrix) -> Result<SqrtFactor> {
    let eig = rho.eigen()?;
    let lowest = eig.eigenvalues()[0];
    if lowest < -CLAMP_TOLERANCE {
        return Err(Error::InvalidDensity(format!("eigenvalue {lowest:e} below -1e-8")));
    }
    // eigenvalues at roundoff level are zeros; their square roots would
    // otherwise leak ~1e-8 into the fidelity
    let cutoff = eig.dim() as f64 * f64::EPSILON * eig.eigenvalues()[eig.dim() - 1].max(1.0);
    let roots =
        eig.eigenvalues().iter().map(|&p| if p > cutoff { p.sqrt() } else { 0.0 }).collect();
    Ok(SqrtFactor { vectors: eig.eigenvectors().clone(), roots })
}

fn trace_norm(m: &CMatrix) -> f64 {
    m.clone().singular_values().iter().sum()
}

/// `F = (Tr sqrt(sqrt(rho1) rho2 sqrt(rho1)))^2`.
///
/// Evaluated as the squared trace norm of `sqrt(rho1) sqrt(rho2)`; its
/// singular values are the square roots of the eigenvalues of
/// `sqrt(rho1) rho2 sqrt(rho1)`, and this form keeps roundoff in vanishing
/// eigenvalues from being amplified by the square root.
pub fn uhlmann_fidelity(rho1: &DensityMatrix, rho2: &DensityMatrix) -> Result<f64> {
    if rho1.dim() != rho2.dim() {
        return Err(Error::DimensionMismatch { expected: rho1.dim(), got: rho2.dim() });
    }
    let a = sqrt_factor(rho1)?;
    let b = sqrt_factor(rho2)?;
    // diag(sqrt p1) V1^dagger V2 diag(sqrt p2) shares singular values with
    // sqrt(rho1) sqrt(rho2)
    let mut core = cmul(&a.vectors.adjoint(), &b.vectors);
    for i in 0..core.nrows() {
        for k in 0..core.ncols() {
            core[(i, k)] *= a.roots[i] * b.roots[k];
        }
    }
    let root_f = trace_norm(&core);
    Ok(root_f * root_f)
}

/// `arccos sqrt F`.
pub fn bures_angle(rho1: &DensityMatrix, rho2: &DensityMatrix) -> Result<f64> {
    let f = uhlmann_fidelity(rho1, rho2)?;
    Ok(clamp_unit(f.max(0.0).sqrt())?.acos())
}

/// `arccos exp(-N lambda / 2)`: the Bures angle implied by a rate-function
/// value for a pure-state quench.
pub fn bures_from_rate(lambda: f64, n: u32) -> Result<f64> {
    if lambda.is_nan() || lambda < 0.0 {
        return Err(Error::domain(format!("rate function must be non-negative, got {lambda}")));
    }
    if n == 0 {
        return Err(Error::domain("system size must be positive"));
    }
    Ok((-f64::from(n) * lambda / 2.0).exp().min(1.0).acos())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Protocol {
    Pure,
    Thermal,
}

/// State the evolved state is compared against.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Reference {
    /// The initial state `rho_0`.
    #[default]
    Initial,
    /// The Gibbs state of the quenched Hamiltonian at the same `beta`.
    /// It commutes with the evolution, so the resulting angle is constant
    /// in time.
    Equilibrium,
}

/// Bures angle along a quench.
#[derive(Clone, Debug, PartialEq)]
pub struct BuresSeries {
    pub times: Vec<f64>,
    /// Angle in `[0, pi/2]`.
    pub angle: Vec<f64>,
    /// `cos(angle) = sqrt F`, kept separately so that `pi/2 - angle` is
    /// available without cancellation.
    pub overlap: Vec<f64>,
    pub protocol: Protocol,
    pub reference: Reference,
}

impl BuresSeries {
    pub fn from_overlaps(
        times: Vec<f64>,
        overlap: Vec<f64>,
        protocol: Protocol,
        reference: Reference,
    ) -> Result<Self> {
        if times.len() != overlap.len() {
            return Err(Error::DimensionMismatch { expected: times.len(), got: overlap.len() });
        }
        let overlap = overlap.into_iter().map(clamp_unit).collect::<Result<Vec<_>>>()?;
        let angle = overlap.iter().map(|c| c.acos()).collect();
        Ok(Self { times, angle, overlap, protocol, reference })
    }

    /// `pi/2 - angle`, computed from the overlap.
    pub fn complement(&self, k: usize) -> f64 {
        self.overlap[k].asin()
    }

    /// First time the angle exceeds `threshold`.
    pub fn first_crossing(&self, threshold: f64) -> Option<f64> {
        self.times.iter().zip(&self.angle).find(|(_, &a)| a > threshold).map(|(t, _)| *t)
    }
}

/// Fidelity between the Gibbs state `rho_0` of the initial Hamiltonian and
/// its unitarily evolved copy, evaluated in the initial eigenbasis.
///
/// With `u = <i|U_t|l>` restricted to the retained Gibbs levels,
/// `sqrt F = ||diag(sqrt p) u diag(sqrt p)||_1`. Sectors of a conserved
/// symmetry are treated as independent blocks.
pub struct ThermalFidelity {
    blocks: Vec<ThermalBlock>,
}

struct ThermalBlock {
    sqrt_weights: Vec<f64>,
    /// `<i|k>` for retained initial levels `i` and quenched levels `k`.
    overlap: CMatrix,
    energies: Vec<f64>,
}

impl ThermalFidelity {
    pub fn new(initial: &SpectralDecomposition, quenched: &SpectralDecomposition, beta: f64) -> Result<Self> {
        if initial.dim() != quenched.dim() {
            return Err(Error::DimensionMismatch { expected: initial.dim(), got: quenched.dim() });
        }
        let p = thermal_weights(initial, beta)?;
        let n = p.len();

        // drop the smallest weights while the discarded sum of sqrt(p) fits
        // in the budget
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| p[a].total_cmp(&p[b]));
        let mut discarded = 0.0;
        let mut keep = vec![true; n];
        for &i in &order {
            discarded += p[i].sqrt();
            if discarded > WEIGHT_BUDGET {
                break;
            }
            keep[i] = false;
        }

        let labels_i: Vec<i8> = initial.parities().map_or_else(|| vec![0; n], |s| s.to_vec());
        let labels_k: Vec<i8> = match (initial.parities(), quenched.parities()) {
            (Some(_), Some(s)) => s.to_vec(),
            _ => vec![0; n],
        };
        let labels_i = if labels_k.iter().all(|&l| l == 0) { vec![0; n] } else { labels_i };

        let mut sectors: Vec<i8> = labels_i.clone();
        sectors.sort_unstable();
        sectors.dedup();

        let vi = initial.eigenvectors();
        let vk = quenched.eigenvectors();
        let mut blocks = Vec::new();
        for s in sectors {
            let rows: Vec<usize> = (0..n).filter(|&i| keep[i] && labels_i[i] == s).collect();
            let cols: Vec<usize> = (0..n).filter(|&k| labels_k[k] == s).collect();
            if rows.is_empty() {
                continue;
            }
            let left = CMatrix::from_fn(n, rows.len(), |a, b| vi[(a, rows[b])]);
            let right = CMatrix::from_fn(n, cols.len(), |a, b| vk[(a, cols[b])]);
            blocks.push(ThermalBlock {
                sqrt_weights: rows.iter().map(|&i| p[i].sqrt()).collect(),
                overlap: cmul(&left.adjoint(), &right),
                energies: cols.iter().map(|&k| quenched.eigenvalues()[k]).collect(),
            });
        }
        Ok(Self { blocks })
    }

    /// Number of retained Gibbs levels.
    pub fn rank(&self) -> usize {
        self.blocks.iter().map(|b| b.sqrt_weights.len()).sum()
    }

    /// `sqrt F(rho_0, rho_t)`.
    pub fn root_fidelity(&self, t: f64) -> f64 {
        self.blocks
            .iter()
            .map(|b| {
                let mut phased = b.overlap.clone();
                for (k, e) in b.energies.iter().enumerate() {
                    let (s, c) = (e * t).sin_cos();
                    let z = Complex64::new(c, -s);
                    phased.column_mut(k).iter_mut().for_each(|x| *x *= z);
                }
                let mut u = cmul(&phased, &b.overlap.adjoint());
                let r = b.sqrt_weights.len();
                for i in 0..r {
                    for l in 0..r {
                        u[(i, l)] *= b.sqrt_weights[i] * b.sqrt_weights[l];
                    }
                }
                trace_norm(&u)
            })
            .sum()
    }
}

impl PreparedQuench {
    /// Bures angle between the reference state and the evolved state over
    /// the quench grid. Thermal time points are evaluated in parallel and
    /// gathered in grid order.
    pub fn bures_series(&self, reference: Reference) -> Result<BuresSeries> {
        let times = self.spec().grid().times();
        let protocol = if self.spec().beta().is_some() { Protocol::Thermal } else { Protocol::Pure };
        let overlap: Vec<f64> = match (protocol, reference) {
            (Protocol::Pure, Reference::Initial) => {
                let psi0 = self.initial_vector()?;
                let amp = self.amplitude_to(&psi0, &psi0)?;
                times.iter().map(|&t| if t == 0.0 { 1.0 } else { amp.modulus_at(t) }).collect()
            }
            (Protocol::Thermal, Reference::Initial) => {
                let beta = self.spec().beta().unwrap_or_default();
                let kernel =
                    ThermalFidelity::new(self.initial_spectrum(), self.quenched_spectrum(), beta)?;
                times
                    .par_iter()
                    .map(|&t| if t == 0.0 { 1.0 } else { kernel.root_fidelity(t) })
                    .collect()
            }
            (_, Reference::Equilibrium) => {
                let beta = self.spec().beta().ok_or_else(|| {
                    Error::domain("the equilibrium reference needs an inverse temperature")
                })?;
                let eq = crate::spectral::thermal_state(self.quenched_spectrum(), beta)?;
                let start = match protocol {
                    Protocol::Pure => DensityMatrix::from_pure(&self.initial_vector()?)?,
                    Protocol::Thermal => self.initial_density()?,
                };
                let root = uhlmann_fidelity(&start, &eq)?.max(0.0).sqrt();
                vec![root; times.len()]
            }
        };
        BuresSeries::from_overlaps(times, overlap, protocol, reference)
    }
}

/// Bures series for a quench; thermal when `beta` is set, pure otherwise.
pub fn bures_series(quench: &QuenchSpec) -> Result<BuresSeries> {
    PreparedQuench::new(quench)?.bures_series(Reference::Initial)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_2;
    use crate::dynamics::{evolve_density, TimeGrid};
    use crate::linalg::ZERO;
    use crate::spectral::{diagonalize, LmgParams};
    use crate::spinops::SpinQuantumNumber;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_state(d: usize, rng: &mut ChaCha8Rng) -> StateVector {
        let v = StateVector::from_fn(d, |_, _| {
            Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
        });
        let n = v.norm();
        v.unscale(n)
    }

    fn random_density(d: usize, rank: usize, rng: &mut ChaCha8Rng) -> DensityMatrix {
        let mut m = CMatrix::zeros(d, d);
        for _ in 0..rank {
            let v = random_state(d, rng);
            m += (&v * v.adjoint()).scale(rng.random_range(0.1..1.0));
        }
        let tr = m.trace().re;
        DensityMatrix::new(m.unscale(tr)).unwrap()
    }

    fn random_unitary(d: usize, rng: &mut ChaCha8Rng) -> CMatrix {
        let h = CMatrix::from_fn(d, d, |_, _| {
            Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
        });
        let h = crate::linalg::hermitian_part(&h);
        crate::dynamics::propagator(&diagonalize(&h).unwrap(), 1.3)
    }

    #[test]
    fn wootters_basics() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let a = random_state(6, &mut rng);
        assert!(wootters_distance(&a, &a).unwrap().abs() < 1e-15);
        let phased = a.map(|z| z * Complex64::from_polar(1.0, 0.77));
        assert!(wootters_distance(&a, &phased).unwrap().abs() < 1e-15);
        let b = random_state(6, &mut rng);
        let direct = inner(&a, &b).norm().acos();
        assert!((wootters_distance(&a, &b).unwrap() - direct).abs() < 1e-12);

        let e0 = StateVector::from_vec(vec![Complex64::new(1.0, 0.0), ZERO]);
        let e1 = StateVector::from_vec(vec![ZERO, Complex64::new(1.0, 0.0)]);
        assert!((wootters_distance(&e0, &e1).unwrap() - FRAC_PI_2).abs() < 1e-15);

        let bad = e0.scale(1.1);
        assert!(matches!(wootters_distance(&bad, &e1), Err(Error::NotNormalized(_))));
    }

    #[test]
    fn fidelity_of_identical_states() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for rank in [1, 3, 8] {
            let rho = random_density(8, rank, &mut rng);
            assert!((uhlmann_fidelity(&rho, &rho).unwrap() - 1.0).abs() < 1e-10, "rank {rank}");
            assert!(bures_angle(&rho, &rho).unwrap() < 1e-4);
        }
    }

    #[test]
    fn commuting_states_give_bhattacharyya() {
        let p: [f64; 4] = [0.1, 0.2, 0.3, 0.4];
        let q = [0.25, 0.25, 0.4, 0.1];
        let diag = |v: &[f64]| {
            DensityMatrix::new(CMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
                v.len(),
                v.iter().map(|&x| Complex64::new(x, 0.0)),
            )))
            .unwrap()
        };
        let bc: f64 = p.iter().zip(&q).map(|(a, b)| (a * b).sqrt()).sum();
        let f = uhlmann_fidelity(&diag(&p), &diag(&q)).unwrap();
        assert!((f - bc * bc).abs() < 1e-12);
    }

    #[test]
    fn pure_reference_reduces_to_expectation() {
        // two formulas for F(|psi><psi|, rho): generic Uhlmann and <psi|rho|psi>
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for _ in 0..10 {
            let psi = random_state(8, &mut rng);
            let rho = random_density(8, 3, &mut rng);
            let direct = inner(&psi, &(rho.matrix() * &psi)).re;
            let pure = DensityMatrix::from_pure(&psi).unwrap();
            let f = uhlmann_fidelity(&pure, &rho).unwrap();
            assert!((f - direct).abs() < 1e-10);
            let g = uhlmann_fidelity(&rho, &pure).unwrap();
            assert!((f - g).abs() < 1e-10);
        }
    }

    #[test]
    fn orthogonal_pure_states_are_maximally_distant() {
        let e0 = StateVector::from_vec(vec![Complex64::new(1.0, 0.0), ZERO, ZERO]);
        let e2 = StateVector::from_vec(vec![ZERO, ZERO, Complex64::new(1.0, 0.0)]);
        let a = DensityMatrix::from_pure(&e0).unwrap();
        let b = DensityMatrix::from_pure(&e2).unwrap();
        assert!((bures_angle(&a, &b).unwrap() - FRAC_PI_2).abs() < 1e-12);
    }

    #[test]
    fn rank_one_bures_equals_wootters() {
        let mut rng = ChaCha8Rng::seed_from_u64(33);
        for _ in 0..10 {
            let a = random_state(5, &mut rng);
            let b = random_state(5, &mut rng);
            let l = bures_angle(
                &DensityMatrix::from_pure(&a).unwrap(),
                &DensityMatrix::from_pure(&b).unwrap(),
            )
            .unwrap();
            assert!((l - wootters_distance(&a, &b).unwrap()).abs() < 1e-10);
        }
    }

    #[test]
    fn unitary_invariance() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        for d in [2, 7, 16] {
            let rho = random_density(d, d, &mut rng);
            let sigma = random_density(d, 2, &mut rng);
            let u = random_unitary(d, &mut rng);
            let rot = |r: &DensityMatrix| {
                DensityMatrix::new(cmul(&cmul(&u, r.matrix()), &u.adjoint())).unwrap()
            };
            let before = bures_angle(&rho, &sigma).unwrap();
            let after = bures_angle(&rot(&rho), &rot(&sigma)).unwrap();
            assert!((before - after).abs() < 1e-9, "d={d}");
        }
    }

    #[test]
    fn rate_to_angle() {
        assert_eq!(bures_from_rate(0.0, 10).unwrap(), 0.0);
        assert!((bures_from_rate(1e6, 600).unwrap() - FRAC_PI_2).abs() < 1e-15);
        assert!(bures_from_rate(-0.1, 10).is_err());
        assert!(bures_from_rate(0.1, 0).is_err());
    }

    #[test]
    fn clamp_guard() {
        assert!(clamp_unit(1.0 + 1e-9).is_ok());
        assert!(matches!(clamp_unit(1.0 + 1e-7), Err(Error::ClampOverflow(_))));
    }

    fn thermal_quench(twice: u32, h: f64, beta: f64) -> PreparedQuench {
        PreparedQuench::new(
            &QuenchSpec::new(
                LmgParams::standard(0.0, SpinQuantumNumber::from_twice(twice).unwrap()),
                h,
                Some(beta),
                TimeGrid::new(0.25, 3.0).unwrap(),
            )
            .unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn structured_thermal_fidelity_matches_generic() {
        for (twice, beta) in [(10u32, 0.3), (16, 1.0), (24, 5.0)] {
            let p = thermal_quench(twice, 0.8, beta);
            let series = p.bures_series(Reference::Initial).unwrap();
            let rho0 = p.initial_density().unwrap();
            for (k, &t) in series.times.iter().enumerate() {
                let rho_t = evolve_density(p.quenched_spectrum(), &rho0, t).unwrap();
                let generic = bures_angle(&rho0, &rho_t).unwrap();
                assert!(
                    (generic - series.angle[k]).abs() < 1e-7,
                    "j={} beta={beta} t={t}: {generic} vs {}",
                    twice / 2,
                    series.angle[k]
                );
            }
        }
    }

    #[test]
    fn series_start_at_zero() {
        let thermal = thermal_quench(12, 0.8, 1.0).bures_series(Reference::Initial).unwrap();
        assert!(thermal.angle[0].abs() < 1e-8);
        assert_eq!(thermal.protocol, Protocol::Thermal);
        let q = QuenchSpec::new(
            LmgParams::standard(0.0, SpinQuantumNumber::from_twice(12).unwrap()),
            0.8,
            None,
            TimeGrid::new(0.25, 3.0).unwrap(),
        )
        .unwrap();
        let pure = bures_series(&q).unwrap();
        assert_eq!(pure.angle[0], 0.0);
        assert!(pure.angle.iter().all(|&a| (0.0..=FRAC_PI_2 + 1e-12).contains(&a)));
    }

    #[test]
    fn equilibrium_reference_is_constant() {
        let p = thermal_quench(10, 0.6, 2.0);
        let s = p.bures_series(Reference::Equilibrium).unwrap();
        assert!(s.angle.windows(2).all(|w| w[0] == w[1]));
        // and equals the direct evaluation at an arbitrary time
        let rho0 = p.initial_density().unwrap();
        let rho_t = evolve_density(p.quenched_spectrum(), &rho0, 1.7).unwrap();
        let eq = crate::spectral::thermal_state(p.quenched_spectrum(), 2.0).unwrap();
        assert!((bures_angle(&rho_t, &eq).unwrap() - s.angle[0]).abs() < 1e-7);
    }
}
