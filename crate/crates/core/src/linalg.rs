//! Dense complex matrix helpers shared by every module.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

pub type CMatrix = DMatrix<Complex64>;
pub type CVector = DVector<Complex64>;
/// Hermitian operator stored densely.
pub type HermitianMatrix = CMatrix;
/// Pure state in the `|j, m>` basis.
pub type StateVector = CVector;

pub(crate) const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };

/// Largest absolute entry.
pub fn max_abs(m: &CMatrix) -> f64 {
    m.iter().fold(0.0, |acc, z| acc.max(z.norm()))
}

/// Largest entrywise deviation `|m - m^dagger|`.
pub fn hermiticity_defect(m: &CMatrix) -> f64 {
    let n = m.nrows();
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in i..n {
            worst = worst.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    worst
}

/// `[a, b] = ab - ba`.
pub fn commutator(a: &CMatrix, b: &CMatrix) -> CMatrix {
    cmul(a, b) - cmul(b, a)
}

fn split(m: &CMatrix) -> (DMatrix<f64>, Option<DMatrix<f64>>) {
    let re = m.map(|z| z.re);
    let im = if m.iter().any(|z| z.im != 0.0) {
        Some(m.map(|z| z.im))
    } else {
        None
    };
    (re, im)
}

fn join(re: DMatrix<f64>, im: Option<DMatrix<f64>>) -> CMatrix {
    match im {
        Some(im) => re.zip_map(&im, Complex64::new),
        None => re.map(|x| Complex64::new(x, 0.0)),
    }
}

/// Complex matrix product computed through real gemm calls.
///
/// Operands with an identically zero imaginary part skip the corresponding
/// products, so real-by-real costs a single real gemm.
pub fn cmul(a: &CMatrix, b: &CMatrix) -> CMatrix {
    assert_eq!(a.ncols(), b.nrows(), "cmul: inner dimensions differ");
    let (ar, ai) = split(a);
    let (br, bi) = split(b);
    let re_re = &ar * &br;
    match (ai, bi) {
        (None, None) => join(re_re, None),
        (Some(ai), None) => join(re_re, Some(&ai * &br)),
        (None, Some(bi)) => join(re_re, Some(&ar * &bi)),
        (Some(ai), Some(bi)) => {
            let re = re_re - &ai * &bi;
            let im = &ar * &bi + &ai * &br;
            join(re, Some(im))
        }
    }
}

/// Product that skips structurally zero entries of both factors.
///
/// Cost is proportional to the number of nonzero pairs, which makes products
/// of banded operators (the spin matrices) linear in the dimension.
pub fn sparse_mul(a: &CMatrix, b: &CMatrix) -> CMatrix {
    assert_eq!(a.ncols(), b.nrows(), "sparse_mul: inner dimensions differ");
    let rows_b: Vec<Vec<(usize, Complex64)>> = (0..b.nrows())
        .map(|k| {
            (0..b.ncols())
                .filter_map(|l| {
                    let v = b[(k, l)];
                    (v != ZERO).then_some((l, v))
                })
                .collect()
        })
        .collect();
    let mut out = CMatrix::zeros(a.nrows(), b.ncols());
    for i in 0..a.nrows() {
        for k in 0..a.ncols() {
            let aik = a[(i, k)];
            if aik == ZERO {
                continue;
            }
            for &(l, bkl) in &rows_b[k] {
                out[(i, l)] += aik * bkl;
            }
        }
    }
    out
}

/// `(m + m^dagger) / 2`.
pub fn hermitian_part(m: &CMatrix) -> CMatrix {
    (m + m.adjoint()).scale(0.5)
}

/// Hermitian inner product `<a|b>`.
pub fn inner(a: &CVector, b: &CVector) -> Complex64 {
    a.iter()
        .zip(b.iter())
        .fold(ZERO, |acc, (x, y)| acc + x.conj() * y)
}

/// `V diag(w) V^dagger` for real weights.
pub fn reconstruct(vectors: &CMatrix, weights: &[f64]) -> CMatrix {
    let mut scaled = vectors.clone();
    for (k, &w) in weights.iter().enumerate() {
        scaled.column_mut(k).scale_mut(w);
    }
    cmul(&scaled, &vectors.adjoint())
}
