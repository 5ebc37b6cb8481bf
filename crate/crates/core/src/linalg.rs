//! Thin wrappers around faer's self-adjoint eigensolvers for the ndarray
//! types used throughout the crate, plus the spectral utilities built on them
//! (entropy from eigenvalues, trace distance, Hermitian matrix logarithm).

use faer::{Mat, Side};
use ndarray::{Array1, Array2};
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Eigenvalues below this are treated as exact zeros when summing entropies.
pub const SPECTRUM_FLOOR: f64 = 1e-14;

fn to_faer_c64(m: &Array2<Complex64>) -> Mat<Complex64> {
    Mat::from_fn(m.nrows(), m.ncols(), |i, j| m[[i, j]])
}

fn to_faer_f64(m: &Array2<f64>) -> Mat<f64> {
    Mat::from_fn(m.nrows(), m.ncols(), |i, j| m[[i, j]])
}

/// Maximum absolute deviation of `m` from its conjugate transpose.
pub fn hermiticity_defect(m: &Array2<Complex64>) -> f64 {
    let n = m.nrows();
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in i..n {
            let d = (m[[i, j]] - m[[j, i]].conj()).norm();
            if d > worst {
                worst = d;
            }
        }
    }
    worst
}

/// Eigenvalues of a Hermitian matrix, ascending. The strictly lower triangle
/// (plus real diagonal) is what the solver reads, so callers may pass
/// matrices with roundoff-level asymmetry.
pub fn hermitian_eigenvalues(m: &Array2<Complex64>) -> Result<Vec<f64>> {
    let f = to_faer_c64(m);
    f.self_adjoint_eigenvalues(Side::Lower)
        .map_err(|e| Error::Eigensolver(format!("{e:?}")))
}

/// Full eigendecomposition of a Hermitian matrix. Returns `(values, vectors)`
/// with values ascending and eigenvectors in the corresponding columns.
pub fn hermitian_eigen(m: &Array2<Complex64>) -> Result<(Vec<f64>, Array2<Complex64>)> {
    let f = to_faer_c64(m);
    let eig = f
        .self_adjoint_eigen(Side::Lower)
        .map_err(|e| Error::Eigensolver(format!("{e:?}")))?;
    let n = m.nrows();
    let s = eig.S();
    let u = eig.U();
    let values: Vec<f64> = (0..n).map(|i| s[i].re).collect();
    let vectors = Array2::from_shape_fn((n, n), |(i, j)| u[(i, j)]);
    Ok((values, vectors))
}

/// Eigenvalues of a real symmetric matrix, ascending.
pub fn symmetric_eigenvalues(m: &Array2<f64>) -> Result<Vec<f64>> {
    let f = to_faer_f64(m);
    f.self_adjoint_eigenvalues(Side::Lower)
        .map_err(|e| Error::Eigensolver(format!("{e:?}")))
}

/// Symmetric square root of a real symmetric positive semidefinite matrix.
/// Eigenvalues within roundoff below zero are clamped to zero.
pub fn symmetric_sqrt(m: &Array2<f64>) -> Result<Array2<f64>> {
    let f = to_faer_f64(m);
    let eig = f
        .self_adjoint_eigen(Side::Lower)
        .map_err(|e| Error::Eigensolver(format!("{e:?}")))?;
    let n = m.nrows();
    let s = eig.S();
    let u = eig.U();
    let roots: Vec<f64> = (0..n).map(|i| s[i].max(0.0).sqrt()).collect();
    let mut out = Array2::zeros((n, n));
    for i in 0..n {
        for j in 0..n {
            let mut acc = 0.0;
            for k in 0..n {
                acc += u[(i, k)] * roots[k] * u[(j, k)];
            }
            out[[i, j]] = acc;
        }
    }
    Ok(out)
}

/// Shannon entropy in bits of an eigenvalue list, ignoring entries at or
/// below [`SPECTRUM_FLOOR`]. No renormalization: a spectrum that sums to less
/// than one (truncation loss) yields a correspondingly smaller entropy.
pub fn entropy_bits_from_spectrum(eigenvalues: &[f64]) -> f64 {
    let mut s = 0.0;
    for &p in eigenvalues {
        if p > SPECTRUM_FLOOR {
            s -= p * p.log2();
        }
    }
    s
}

/// Von Neumann entropy in bits of a Hermitian PSD matrix.
pub fn von_neumann_entropy_bits(rho: &Array2<Complex64>) -> Result<f64> {
    Ok(entropy_bits_from_spectrum(&hermitian_eigenvalues(rho)?))
}

/// Trace distance `0.5 * ||a - b||_1` between Hermitian matrices.
pub fn trace_distance(a: &Array2<Complex64>, b: &Array2<Complex64>) -> Result<f64> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch(format!(
            "trace distance between {:?} and {:?}",
            a.dim(),
            b.dim()
        )));
    }
    let diff = a - b;
    let evs = hermitian_eigenvalues(&diff)?;
    Ok(0.5 * evs.iter().map(|v| v.abs()).sum::<f64>())
}

/// Base-2 matrix logarithm of a Hermitian positive definite matrix.
/// Fails with [`Error::SingularReference`] if any eigenvalue falls below
/// `min_eigenvalue`.
pub fn hermitian_log2(m: &Array2<Complex64>, min_eigenvalue: f64) -> Result<Array2<Complex64>> {
    let (values, vectors) = hermitian_eigen(m)?;
    if let Some(&lo) = values.first() {
        if lo < min_eigenvalue {
            return Err(Error::SingularReference(lo));
        }
    }
    let n = m.nrows();
    let logs: Vec<f64> = values.iter().map(|v| v.log2()).collect();
    let mut out = Array2::zeros((n, n));
    for i in 0..n {
        for j in 0..n {
            let mut acc = Complex64::new(0.0, 0.0);
            for k in 0..n {
                acc += vectors[[i, k]] * logs[k] * vectors[[j, k]].conj();
            }
            out[[i, j]] = acc;
        }
    }
    Ok(out)
}

/// `Re Tr[a . b]` for Hermitian `a`, `b` (the trace of a product of two
/// Hermitian matrices is real up to roundoff).
pub fn real_trace_product(a: &Array2<Complex64>, b: &Array2<Complex64>) -> f64 {
    let n = a.nrows();
    let mut acc = 0.0;
    for i in 0..n {
        for k in 0..n {
            acc += (a[[i, k]] * b[[k, i]]).re;
        }
    }
    acc
}

/// Expectation value `<psi| m |psi>`, real part.
pub fn real_expectation(m: &Array2<Complex64>, psi: &Array1<Complex64>) -> f64 {
    let mv = m.dot(psi);
    psi.iter()
        .zip(mv.iter())
        .map(|(a, b)| (a.conj() * b).re)
        .sum()
}
