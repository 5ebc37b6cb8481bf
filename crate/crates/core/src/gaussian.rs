//! Gaussian states in the covariance-matrix picture and the phase-space
//! action of the channel families.
//!
//! Quadrature ordering is `(x_1, p_1, x_2, p_2, ...)` with `x = a + a^dag`
//! and `p = -i(a - a^dag)`, so the vacuum covariance is the identity and a
//! thermal state with mean photon number `N` has covariance `(2N + 1) I`.

use ndarray::{Array1, Array2};
use num_complex::Complex64;

use crate::capacity::g;
use crate::channel::CanonicalForm;
use crate::error::{Error, Result};
use crate::linalg;

/// Symplectic eigenvalues may undershoot 1 by at most this much before the
/// covariance is rejected as unphysical.
const UNCERTAINTY_TOL: f64 = 1e-9;

/// A Gaussian state: mean quadrature vector and covariance matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianState {
    pub modes: usize,
    pub mean: Array1<f64>,
    pub cov: Array2<f64>,
}

/// The symplectic form for `modes` modes in interleaved ordering:
/// block-diagonal copies of `[[0, 1], [-1, 0]]`.
pub fn symplectic_form(modes: usize) -> Array2<f64> {
    let n = 2 * modes;
    let mut omega = Array2::zeros((n, n));
    for m in 0..modes {
        omega[[2 * m, 2 * m + 1]] = 1.0;
        omega[[2 * m + 1, 2 * m]] = -1.0;
    }
    omega
}

impl GaussianState {
    /// Construct from raw mean and covariance, validating shapes, symmetry,
    /// and the uncertainty bound (all symplectic eigenvalues >= 1 up to
    /// roundoff).
    pub fn new(mean: Array1<f64>, cov: Array2<f64>) -> Result<Self> {
        let n = mean.len();
        if n == 0 || !n.is_multiple_of(2) {
            return Err(Error::InvalidParameter(format!(
                "mean vector length must be a positive even number, got {n}"
            )));
        }
        if cov.dim() != (n, n) {
            return Err(Error::InvalidCovariance(format!(
                "covariance shape {:?} does not match mean length {n}",
                cov.dim()
            )));
        }
        let state = GaussianState { modes: n / 2, mean, cov };
        state.validate()?;
        Ok(state)
    }

    /// Re-check symmetry and the uncertainty bound.
    pub fn validate(&self) -> Result<()> {
        let n = 2 * self.modes;
        for i in 0..n {
            for j in (i + 1)..n {
                if (self.cov[[i, j]] - self.cov[[j, i]]).abs() > 1e-12 {
                    return Err(Error::InvalidCovariance(format!(
                        "not symmetric at ({i}, {j}): {} vs {}",
                        self.cov[[i, j]],
                        self.cov[[j, i]]
                    )));
                }
            }
        }
        let nus = symplectic_eigenvalues(&self.cov)?;
        if let Some(&lo) = nus.iter().min_by(|a, b| a.total_cmp(b)).as_ref() {
            if *lo < 1.0 - UNCERTAINTY_TOL {
                return Err(Error::InvalidCovariance(format!(
                    "uncertainty bound violated: symplectic eigenvalue {lo} < 1"
                )));
            }
        }
        Ok(())
    }

    /// The vacuum on `modes` modes.
    pub fn vacuum(modes: usize) -> Self {
        GaussianState {
            modes,
            mean: Array1::zeros(2 * modes),
            cov: Array2::eye(2 * modes),
        }
    }

    /// Single-mode thermal state with mean photon number `n_mean >= 0`.
    pub fn thermal(n_mean: f64) -> Result<Self> {
        if !n_mean.is_finite() || n_mean < 0.0 {
            return Err(Error::InvalidParameter(format!(
                "thermal photon number must be >= 0, got {n_mean}"
            )));
        }
        Ok(GaussianState {
            modes: 1,
            mean: Array1::zeros(2),
            cov: Array2::eye(2) * (2.0 * n_mean + 1.0),
        })
    }

    /// Single-mode coherent state of complex amplitude `alpha`.
    pub fn coherent(alpha: Complex64) -> Self {
        GaussianState {
            modes: 1,
            mean: ndarray::arr1(&[2.0 * alpha.re, 2.0 * alpha.im]),
            cov: Array2::eye(2),
        }
    }

    /// Mean photon number summed over all modes:
    /// `(|mean|^2 + tr cov)/4 - modes/2`.
    pub fn mean_photons(&self) -> f64 {
        let m2: f64 = self.mean.iter().map(|v| v * v).sum();
        let tr: f64 = (0..2 * self.modes).map(|i| self.cov[[i, i]]).sum();
        (m2 + tr) / 4.0 - self.modes as f64 / 2.0
    }

    /// Reduced single-mode state of mode `mode` (Gaussian partial trace:
    /// drop the other modes' rows and columns).
    pub fn reduce_to_mode(&self, mode: usize) -> Result<GaussianState> {
        if mode >= self.modes {
            return Err(Error::ModeMismatch { expected: self.modes, got: mode + 1 });
        }
        let (a, b) = (2 * mode, 2 * mode + 1);
        let mean = ndarray::arr1(&[self.mean[a], self.mean[b]]);
        let mut cov = Array2::zeros((2, 2));
        cov[[0, 0]] = self.cov[[a, a]];
        cov[[0, 1]] = self.cov[[a, b]];
        cov[[1, 0]] = self.cov[[b, a]];
        cov[[1, 1]] = self.cov[[b, b]];
        Ok(GaussianState { modes: 1, mean, cov })
    }
}

/// Two-mode squeezed thermal state: the purification-like extension whose
/// first mode carries an amplified thermal population. Its covariance is
/// `[[a I, c Z], [c Z, b I]]` with `a = 2(N+1)kappa - 1`,
/// `b = 2(N+1)kappa - (2N+1)`, `c = 2(N+1) sqrt(kappa (kappa-1))` and
/// `Z = diag(1, -1)`. At `N = 0` this is the two-mode squeezed vacuum of
/// gain `kappa`.
pub fn two_mode_squeezed_thermal(kappa: f64, n_env: f64) -> Result<GaussianState> {
    if !kappa.is_finite() || kappa < 1.0 {
        return Err(Error::InvalidParameter(format!("gain must be >= 1, got {kappa}")));
    }
    if !n_env.is_finite() || n_env < 0.0 {
        return Err(Error::InvalidParameter(format!(
            "photon number must be >= 0, got {n_env}"
        )));
    }
    let a = 2.0 * (n_env + 1.0) * kappa - 1.0;
    let b = 2.0 * (n_env + 1.0) * kappa - (2.0 * n_env + 1.0);
    let c = 2.0 * (n_env + 1.0) * (kappa * (kappa - 1.0)).sqrt();
    let mut cov = Array2::zeros((4, 4));
    cov[[0, 0]] = a;
    cov[[1, 1]] = a;
    cov[[2, 2]] = b;
    cov[[3, 3]] = b;
    cov[[0, 2]] = c;
    cov[[2, 0]] = c;
    cov[[1, 3]] = -c;
    cov[[3, 1]] = -c;
    GaussianState::new(Array1::zeros(4), cov)
}

/// Apply a single-mode channel in canonical form to a single-mode Gaussian
/// state.
///
/// Covariant: `cov -> tau cov + y I`, `mean -> sqrt(tau) mean`.
/// Conjugating: `cov -> |tau| Z cov Z + y I`, `mean -> sqrt(|tau|) Z mean`,
/// with `Z = diag(1, -1)` (momentum flip).
pub fn apply_channel(state: &GaussianState, channel: &CanonicalForm) -> Result<GaussianState> {
    if state.modes != 1 {
        return Err(Error::ModeMismatch { expected: 1, got: state.modes });
    }
    if !channel.is_physical() {
        return Err(Error::NonPhysical(format!(
            "tau = {}, y = {}, conjugating = {}",
            channel.tau, channel.y, channel.conjugating
        )));
    }
    let t = channel.tau.abs();
    let root = t.sqrt();
    let (mean, mut cov) = if channel.conjugating {
        // Z cov Z flips the sign of the off-diagonal x-p correlation.
        let mut c = state.cov.clone();
        c[[0, 1]] = -c[[0, 1]];
        c[[1, 0]] = -c[[1, 0]];
        let mean = ndarray::arr1(&[root * state.mean[0], -root * state.mean[1]]);
        (mean, c * t)
    } else {
        (state.mean.clone() * root, state.cov.clone() * t)
    };
    cov[[0, 0]] += channel.y;
    cov[[1, 1]] += channel.y;
    Ok(GaussianState { modes: 1, mean, cov })
}

/// Symplectic eigenvalues of a covariance matrix, one per mode, ascending.
///
/// Computed as the square roots of the eigenvalues of the symmetric PSD
/// matrix `V^{1/2} (-Omega V Omega) V^{1/2}`, which come in identical pairs.
pub fn symplectic_eigenvalues(cov: &Array2<f64>) -> Result<Vec<f64>> {
    let n = cov.nrows();
    if n == 0 || !n.is_multiple_of(2) || cov.ncols() != n {
        return Err(Error::InvalidCovariance(format!(
            "covariance must be square with even dimension, got {:?}",
            cov.dim()
        )));
    }
    let modes = n / 2;
    let omega = symplectic_form(modes);
    // K = -Omega V Omega is symmetric PSD whenever V is.
    let k = -omega.dot(cov).dot(&omega);
    let root = linalg::symmetric_sqrt(cov)?;
    let m = root.dot(&k).dot(&root);
    let mut evs = linalg::symmetric_eigenvalues(&m)?;
    evs.sort_by(f64::total_cmp);
    let mut out = Vec::with_capacity(modes);
    for i in 0..modes {
        let pair = (evs[2 * i].max(0.0) + evs[2 * i + 1].max(0.0)) / 2.0;
        out.push(pair.sqrt());
    }
    Ok(out)
}

/// Von Neumann entropy in bits of a Gaussian state:
/// `sum_i g((nu_i - 1)/2)` over the symplectic eigenvalues.
pub fn gaussian_entropy_bits(state: &GaussianState) -> Result<f64> {
    let nus = symplectic_eigenvalues(&state.cov)?;
    Ok(nus.iter().map(|nu| g(((nu - 1.0) / 2.0).max(0.0))).sum())
}
