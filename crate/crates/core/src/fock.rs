//! Truncated Fock-space numerics: density matrices with truncation
//! bookkeeping, Kraus families for the loss and amplification stages, the
//! two-mode-squeezer dilation, and deterministic pure-state samplers.
//!
//! Truncation is never renormalized away. Every operation tracks how much
//! population fell off the edge of the kept space, and operations that would
//! lose more than the configured budget abort with
//! [`Error::TruncationBudgetExceeded`].

use ndarray::{Array1, Array2, ArrayView1};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::channel::CanonicalForm;
use crate::error::{Error, Result};
use crate::linalg;

/// Truncation policy for Fock-space channel application.
#[derive(Debug, Clone, Copy)]
pub struct TruncationConfig {
    /// Maximum population an operation may lose to truncation.
    pub budget: f64,
    /// Output dimension override for amplification stages; `None` sizes the
    /// output by [`amplifier_output_dim`].
    pub dim_out: Option<usize>,
}

impl Default for TruncationConfig {
    fn default() -> Self {
        TruncationConfig { budget: 1e-9, dim_out: None }
    }
}

impl TruncationConfig {
    pub fn with_budget(budget: f64) -> Self {
        TruncationConfig { budget, dim_out: None }
    }
}

/// Density operator on `dim^modes` Fock levels (same per-mode cutoff for
/// every mode, mode 0 major in the index: basis state `|n0, n1>` sits at
/// `n0 * dim + n1`).
#[derive(Debug, Clone)]
pub struct FockDensity {
    pub modes: usize,
    pub dim: usize,
    pub matrix: Array2<Complex64>,
    /// `|1 - trace|` accumulated by truncating operations.
    pub trace_defect: f64,
    /// Population sitting in the highest kept level of any mode.
    pub tail_population: f64,
}

fn tail_of(matrix: &Array2<Complex64>, modes: usize, dim: usize) -> f64 {
    let total = dim.pow(modes as u32);
    let mut tail = 0.0;
    for idx in 0..total {
        let mut rest = idx;
        let mut on_edge = false;
        for _ in 0..modes {
            if rest % dim == dim - 1 {
                on_edge = true;
            }
            rest /= dim;
        }
        if on_edge {
            tail += matrix[[idx, idx]].re;
        }
    }
    tail
}

impl FockDensity {
    /// Wrap a raw matrix, computing the trace defect and tail population.
    pub fn new(modes: usize, dim: usize, matrix: Array2<Complex64>) -> Result<Self> {
        let total = dim.pow(modes as u32);
        if modes == 0 || dim == 0 || matrix.dim() != (total, total) {
            return Err(Error::DimensionMismatch(format!(
                "matrix shape {:?} does not match {modes} mode(s) of dimension {dim}",
                matrix.dim()
            )));
        }
        let trace: f64 = (0..total).map(|i| matrix[[i, i]].re).sum();
        let tail = tail_of(&matrix, modes, dim);
        Ok(FockDensity {
            modes,
            dim,
            matrix,
            trace_defect: (1.0 - trace).abs(),
            tail_population: tail,
        })
    }

    /// Rank-one density of a normalized single-mode pure state.
    pub fn from_pure(psi: &ArrayView1<Complex64>) -> Self {
        let dim = psi.len();
        let mut matrix = Array2::zeros((dim, dim));
        for i in 0..dim {
            for j in 0..dim {
                matrix[[i, j]] = psi[i] * psi[j].conj();
            }
        }
        FockDensity::new(1, dim, matrix).expect("square by construction")
    }

    /// Rank-one density of a normalized two-mode pure state (length
    /// `dim * dim`, mode 0 major).
    pub fn from_pure_two_mode(psi: &ArrayView1<Complex64>, dim: usize) -> Result<Self> {
        if psi.len() != dim * dim {
            return Err(Error::DimensionMismatch(format!(
                "two-mode vector length {} != {dim}^2",
                psi.len()
            )));
        }
        let total = dim * dim;
        let mut matrix = Array2::zeros((total, total));
        for i in 0..total {
            for j in 0..total {
                matrix[[i, j]] = psi[i] * psi[j].conj();
            }
        }
        FockDensity::new(2, dim, matrix)
    }

    /// Fock basis state `|n>` on `dim` levels.
    pub fn fock(n: usize, dim: usize) -> Result<Self> {
        if n >= dim {
            return Err(Error::DimensionMismatch(format!(
                "Fock level {n} does not fit in dimension {dim}"
            )));
        }
        let mut matrix = Array2::zeros((dim, dim));
        matrix[[n, n]] = Complex64::new(1.0, 0.0);
        FockDensity::new(1, dim, matrix)
    }

    /// Thermal state with mean photon number `n_mean`, renormalized on the
    /// truncated space (the discarded weight is below 1e-12 for the
    /// dimensions used in this crate; constructors produce unit trace).
    pub fn thermal(n_mean: f64, dim: usize) -> Result<Self> {
        if !n_mean.is_finite() || n_mean < 0.0 {
            return Err(Error::InvalidParameter(format!(
                "thermal photon number must be >= 0, got {n_mean}"
            )));
        }
        let mut p = vec![0.0f64; dim];
        if n_mean == 0.0 {
            p[0] = 1.0;
        } else {
            let ratio = n_mean / (n_mean + 1.0);
            let mut w = 1.0 / (n_mean + 1.0);
            for slot in p.iter_mut() {
                *slot = w;
                w *= ratio;
            }
            let total: f64 = p.iter().sum();
            for slot in p.iter_mut() {
                *slot /= total;
            }
        }
        let mut matrix = Array2::zeros((dim, dim));
        for (n, &w) in p.iter().enumerate() {
            matrix[[n, n]] = Complex64::new(w, 0.0);
        }
        FockDensity::new(1, dim, matrix)
    }

    pub fn trace(&self) -> f64 {
        let total = self.dim.pow(self.modes as u32);
        (0..total).map(|i| self.matrix[[i, i]].re).sum()
    }

    /// Total mean photon number across modes.
    pub fn mean_photons(&self) -> f64 {
        let total = self.dim.pow(self.modes as u32);
        let mut acc = 0.0;
        for idx in 0..total {
            let mut rest = idx;
            let mut photons = 0usize;
            for _ in 0..self.modes {
                photons += rest % self.dim;
                rest /= self.dim;
            }
            acc += photons as f64 * self.matrix[[idx, idx]].re;
        }
        acc
    }

    /// Von Neumann entropy in bits of the kept spectrum (no
    /// renormalization).
    pub fn entropy_bits(&self) -> Result<f64> {
        linalg::von_neumann_entropy_bits(&self.matrix)
    }

    /// Entrywise complex conjugation: transposition in the Fock basis.
    pub fn conjugate_in_fock(&self) -> Self {
        let matrix = self.matrix.mapv(|z| z.conj());
        FockDensity {
            modes: self.modes,
            dim: self.dim,
            matrix,
            trace_defect: self.trace_defect,
            tail_population: self.tail_population,
        }
    }

    /// Tensor product with another density of the same per-mode dimension.
    pub fn tensor(&self, other: &FockDensity) -> Result<FockDensity> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch(format!(
                "tensor factors must share the per-mode dimension, got {} and {}",
                self.dim, other.dim
            )));
        }
        let (na, nb) = (
            self.dim.pow(self.modes as u32),
            other.dim.pow(other.modes as u32),
        );
        let mut matrix = Array2::zeros((na * nb, na * nb));
        for i in 0..na {
            for j in 0..na {
                let a = self.matrix[[i, j]];
                if a == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for k in 0..nb {
                    for l in 0..nb {
                        matrix[[i * nb + k, j * nb + l]] = a * other.matrix[[k, l]];
                    }
                }
            }
        }
        FockDensity::new(self.modes + other.modes, self.dim, matrix)
    }

    /// Partial trace of a two-mode density, keeping mode `keep`.
    pub fn partial_trace(&self, keep: usize) -> Result<FockDensity> {
        if self.modes != 2 {
            return Err(Error::ModeMismatch { expected: 2, got: self.modes });
        }
        if keep > 1 {
            return Err(Error::InvalidParameter(format!(
                "two-mode state has modes 0 and 1, asked to keep {keep}"
            )));
        }
        let d = self.dim;
        let mut matrix = Array2::zeros((d, d));
        for i in 0..d {
            for j in 0..d {
                let mut acc = Complex64::new(0.0, 0.0);
                for k in 0..d {
                    acc += if keep == 0 {
                        self.matrix[[i * d + k, j * d + k]]
                    } else {
                        self.matrix[[k * d + i, k * d + j]]
                    };
                }
                matrix[[i, j]] = acc;
            }
        }
        FockDensity::new(1, d, matrix)
    }

    /// Hermiticity / positivity / trace sanity check, used by tests and at
    /// API boundaries (costs an eigendecomposition).
    pub fn validate(&self) -> Result<()> {
        let defect = linalg::hermiticity_defect(&self.matrix);
        if defect > 1e-12 {
            return Err(Error::NonHermitian(defect));
        }
        let evs = linalg::hermitian_eigenvalues(&self.matrix)?;
        if let Some(&lo) = evs.first() {
            if lo < -1e-10 {
                return Err(Error::InvalidParameter(format!(
                    "density has negative eigenvalue {lo:.3e}"
                )));
            }
        }
        let t = self.trace();
        if (1.0 - t).abs() > self.trace_defect + 1e-12 {
            return Err(Error::InvalidParameter(format!(
                "trace {t} further from 1 than the recorded defect {}",
                self.trace_defect
            )));
        }
        Ok(())
    }
}

fn ln_factorials(n_max: usize) -> Vec<f64> {
    let mut table = vec![0.0f64; n_max + 1];
    for n in 1..=n_max {
        table[n] = table[n - 1] + (n as f64).ln();
    }
    table
}

/// Output cutoff for an amplification stage of gain `kappa` on `dim_in`
/// input levels, sized so the lost population stays well under 1e-9 for the
/// gains used in this crate: `ceil(kappa d + 10 sqrt(kappa d) + 20)`.
pub fn amplifier_output_dim(kappa: f64, dim_in: usize) -> usize {
    let kd = kappa * dim_in as f64;
    (kd + 10.0 * kd.sqrt() + 20.0).ceil() as usize
}

/// Coefficient table `c[n][k]` of the two-mode-squeezer dilation of gain
/// `kappa`: `U |n, 0> = sum_k c[n][k] |n + k, k>` with
/// `c[n][k] = sqrt(binom(n+k, k)) kappa^{-(n+1)/2} (1 - 1/kappa)^{k/2}`.
///
/// The same numbers are the nonzero Kraus matrix elements of both amplifier
/// outputs: `<n+k| K_k |n> = c[n][k]` for the amplified mode and
/// `<k| L_s |n> = c[n][k]` at `s = n + k` for the conjugating mode.
pub fn amplifier_coefficients(kappa: f64, dim_in: usize, k_max: usize) -> Vec<Vec<f64>> {
    let lf = ln_factorials(dim_in + k_max);
    let ln_kappa = kappa.ln();
    // ln(1 - 1/kappa); the k = 0 column is handled without it so kappa = 1
    // degenerates cleanly to the identity table.
    let ln_ratio = if kappa > 1.0 { (1.0 - 1.0 / kappa).ln() } else { f64::NEG_INFINITY };
    let mut c = vec![vec![0.0f64; k_max]; dim_in];
    for (n, row) in c.iter_mut().enumerate() {
        for (k, slot) in row.iter_mut().enumerate() {
            if k == 0 {
                *slot = (-(n as f64 + 1.0) / 2.0 * ln_kappa).exp();
            } else if kappa > 1.0 {
                let ln_binom = lf[n + k] - lf[k] - lf[n];
                *slot = (0.5 * ln_binom - (n as f64 + 1.0) / 2.0 * ln_kappa
                    + k as f64 / 2.0 * ln_ratio)
                    .exp();
            }
        }
    }
    c
}

/// Kraus family of the pure loss channel on `dim` levels:
/// `K_k |n> = sqrt(binom(n, k) eta^{n-k} (1-eta)^k) |n - k>`.
/// Complete on the truncated space (loss never leaks upward).
#[derive(Debug, Clone)]
pub struct LossKraus {
    pub dim: usize,
    pub eta: f64,
    /// `weights[k][m] = <m| K_k |m + k>`.
    weights: Vec<Vec<f64>>,
}

pub fn kraus_loss(eta: f64, dim: usize) -> Result<LossKraus> {
    if !(0.0..=1.0).contains(&eta) || !eta.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "loss transmissivity must satisfy 0 <= eta <= 1, got {eta}"
        )));
    }
    if dim == 0 {
        return Err(Error::InvalidParameter("dimension must be positive".into()));
    }
    let lf = ln_factorials(dim);
    let mut weights = vec![vec![0.0f64; dim]; dim];
    for k in 0..dim {
        for m in 0..dim - k {
            let n = m + k;
            let w2 = if eta == 0.0 {
                if m == 0 { 1.0 } else { 0.0 }
            } else if eta == 1.0 {
                if k == 0 { 1.0 } else { 0.0 }
            } else {
                let ln_binom = lf[n] - lf[k] - lf[m];
                (ln_binom + m as f64 * eta.ln() + k as f64 * (1.0 - eta).ln()).exp()
            };
            weights[k][m] = w2.sqrt();
        }
    }
    Ok(LossKraus { dim, eta, weights })
}

impl LossKraus {
    /// `K_k |psi>`.
    pub fn apply_to_vector(&self, k: usize, psi: &ArrayView1<Complex64>) -> Array1<Complex64> {
        let mut out = Array1::zeros(self.dim);
        for m in 0..self.dim - k {
            out[m] = self.weights[k][m] * psi[m + k];
        }
        out
    }

    /// `sum_k K_k rho K_k^dag`. Trace-preserving up to roundoff.
    pub fn apply(&self, rho: &FockDensity) -> Result<FockDensity> {
        if rho.modes != 1 {
            return Err(Error::ModeMismatch { expected: 1, got: rho.modes });
        }
        if rho.dim != self.dim {
            return Err(Error::DimensionMismatch(format!(
                "loss Kraus on dimension {} applied to state of dimension {}",
                self.dim, rho.dim
            )));
        }
        let d = self.dim;
        let mut matrix = Array2::zeros((d, d));
        for k in 0..d {
            let w = &self.weights[k];
            for a in 0..d - k {
                for b in 0..d - k {
                    matrix[[a, b]] += w[a] * w[b] * rho.matrix[[a + k, b + k]];
                }
            }
        }
        FockDensity::new(1, d, matrix)
    }

    /// `max_n |1 - sum_k <n| K_k^dag K_k |n>|`; zero up to roundoff since
    /// the binomial weights sum exactly.
    pub fn completeness_defect(&self) -> f64 {
        let mut worst = 0.0f64;
        for n in 0..self.dim {
            let total: f64 = (0..=n).map(|k| self.weights[k][n - k].powi(2)).sum();
            worst = worst.max((1.0 - total).abs());
        }
        worst
    }
}

/// Kraus family of the amplified output of a two-mode squeezer of gain
/// `kappa`: `K_k |n> = c[n][k] |n + k>` on `dim_out >= dim_in` levels.
/// Truncation makes it sub-complete; [`AmplifierKraus::completeness_defect`]
/// bounds the loss for inputs supported on the declared `dim_in` levels.
#[derive(Debug, Clone)]
pub struct AmplifierKraus {
    pub dim_in: usize,
    pub dim_out: usize,
    pub kappa: f64,
    /// `coeff[n][k] = <n + k| K_k |n>`.
    coeff: Vec<Vec<f64>>,
}

pub fn kraus_amplifier(kappa: f64, dim_in: usize, dim_out: usize) -> Result<AmplifierKraus> {
    if !kappa.is_finite() || kappa < 1.0 {
        return Err(Error::InvalidParameter(format!(
            "amplifier gain must be >= 1, got {kappa}"
        )));
    }
    if dim_out < dim_in || dim_in == 0 {
        return Err(Error::DimensionMismatch(format!(
            "amplifier needs dim_out >= dim_in >= 1, got {dim_out} < {dim_in}"
        )));
    }
    let coeff = amplifier_coefficients(kappa, dim_in, dim_out);
    Ok(AmplifierKraus { dim_in, dim_out, kappa, coeff })
}

impl AmplifierKraus {
    pub fn coefficients(&self) -> &[Vec<f64>] {
        &self.coeff
    }

    /// `K_k |psi>` for an input vector on `dim_in` levels.
    pub fn apply_to_vector(&self, k: usize, psi: &ArrayView1<Complex64>) -> Array1<Complex64> {
        let mut out = Array1::zeros(self.dim_out);
        for n in 0..self.dim_in.min(self.dim_out - k) {
            out[n + k] = self.coeff[n][k] * psi[n];
        }
        out
    }

    /// `sum_k K_k rho K_k^dag`, with the truncation loss recorded in the
    /// output's `trace_defect`.
    pub fn apply(&self, rho: &FockDensity) -> Result<FockDensity> {
        if rho.modes != 1 {
            return Err(Error::ModeMismatch { expected: 1, got: rho.modes });
        }
        if rho.dim != self.dim_in {
            return Err(Error::DimensionMismatch(format!(
                "amplifier Kraus with dim_in {} applied to state of dimension {}",
                self.dim_in, rho.dim
            )));
        }
        let mut matrix = Array2::zeros((self.dim_out, self.dim_out));
        for k in 0..self.dim_out {
            let top = self.dim_in.min(self.dim_out - k);
            for i in 0..top {
                for j in 0..top {
                    matrix[[i + k, j + k]] +=
                        self.coeff[i][k] * self.coeff[j][k] * rho.matrix[[i, j]];
                }
            }
        }
        FockDensity::new(1, self.dim_out, matrix)
    }

    /// `max_n |1 - sum_k <n| K_k^dag K_k |n>|` over the declared input
    /// levels: the worst-case population lost to the output cutoff.
    pub fn completeness_defect(&self) -> f64 {
        let mut worst = 0.0f64;
        for n in 0..self.dim_in {
            let total: f64 = (0..self.dim_out - n).map(|k| self.coeff[n][k].powi(2)).sum();
            worst = worst.max((1.0 - total).abs());
        }
        worst
    }
}

/// Kraus family of the conjugating (idler) output of a two-mode squeezer of
/// gain `kappa`: `L_s = sum_{n+k=s} c[n][k] |k><n|` with the same
/// coefficient table as [`AmplifierKraus`]. The output lives on `dim_out`
/// idler levels.
#[derive(Debug, Clone)]
pub struct ContraKraus {
    pub dim_in: usize,
    pub dim_out: usize,
    pub kappa: f64,
    coeff: Vec<Vec<f64>>,
}

pub fn kraus_contra_amplifier(kappa: f64, dim_in: usize, dim_out: usize) -> Result<ContraKraus> {
    if !kappa.is_finite() || kappa < 1.0 {
        return Err(Error::InvalidParameter(format!(
            "contra-amplifier gain must be >= 1, got {kappa}"
        )));
    }
    if dim_in == 0 || dim_out == 0 {
        return Err(Error::InvalidParameter("dimensions must be positive".into()));
    }
    let coeff = amplifier_coefficients(kappa, dim_in, dim_out);
    Ok(ContraKraus { dim_in, dim_out, kappa, coeff })
}

impl ContraKraus {
    /// `sum_s L_s rho L_s^dag`:
    /// `out[k, l] = sum_n c[n][k] c[n + k - l][l] rho[n, n + k - l]`.
    pub fn apply(&self, rho: &FockDensity) -> Result<FockDensity> {
        if rho.modes != 1 {
            return Err(Error::ModeMismatch { expected: 1, got: rho.modes });
        }
        if rho.dim != self.dim_in {
            return Err(Error::DimensionMismatch(format!(
                "contra-amplifier Kraus with dim_in {} applied to state of dimension {}",
                self.dim_in, rho.dim
            )));
        }
        let mut matrix = Array2::<Complex64>::zeros((self.dim_out, self.dim_out));
        for k in 0..self.dim_out {
            for l in 0..self.dim_out {
                let mut acc = Complex64::new(0.0, 0.0);
                for n in 0..self.dim_in {
                    let shifted = n as isize + k as isize - l as isize;
                    if shifted < 0 || shifted >= self.dim_in as isize {
                        continue;
                    }
                    let m = shifted as usize;
                    acc += self.coeff[n][k] * self.coeff[m][l] * rho.matrix[[n, m]];
                }
                matrix[[k, l]] = acc;
            }
        }
        FockDensity::new(1, self.dim_out, matrix)
    }

    /// Same bound as the amplifier side: both marginals of the dilation
    /// lose exactly the population that falls past the idler cutoff.
    pub fn completeness_defect(&self) -> f64 {
        let mut worst = 0.0f64;
        for n in 0..self.dim_in {
            let total: f64 = (0..self.dim_out).map(|k| self.coeff[n][k].powi(2)).sum();
            worst = worst.max((1.0 - total).abs());
        }
        worst
    }
}

/// Smallest idler cutoff such that an input supported on `dim_in` levels
/// loses at most `budget` population through the dilation of gain `kappa`.
pub fn idler_dim_for_budget(kappa: f64, dim_in: usize, budget: f64) -> usize {
    // The worst input level is n = dim_in - 1.
    let n = dim_in - 1;
    let start = dim_in.max(8);
    let mut k_max = start;
    loop {
        let coeff = amplifier_coefficients(kappa, dim_in, k_max);
        let kept: f64 = coeff[n].iter().map(|c| c * c).sum();
        if 1.0 - kept <= budget {
            return k_max;
        }
        k_max = (k_max * 3) / 2 + 8;
        if k_max > 1_000_000 {
            return k_max;
        }
    }
}

/// Amplitude matrix `W` of the dilation `U (|psi> tensor |0>)` of gain
/// `kappa`: `W[m, k] = psi[m - k] c[m - k][k]`, signal index `m < s_dim`,
/// idler index `k < i_dim`. The squared norm of `W` falls short of 1 by the
/// truncated tail.
pub fn dilation_amplitudes(
    coeff: &[Vec<f64>],
    psi: &ArrayView1<Complex64>,
    s_dim: usize,
    i_dim: usize,
) -> Array2<Complex64> {
    let dim_in = psi.len();
    let mut w = Array2::zeros((s_dim, i_dim));
    for n in 0..dim_in {
        if psi[n] == Complex64::new(0.0, 0.0) {
            continue;
        }
        for k in 0..i_dim.min(coeff[n].len()) {
            let m = n + k;
            if m >= s_dim {
                break;
            }
            w[[m, k]] = psi[n] * coeff[n][k];
        }
    }
    w
}

/// Signal marginal `W W^dag` of a dilation amplitude matrix.
pub fn dilation_signal_marginal(w: &Array2<Complex64>) -> FockDensity {
    let (s_dim, i_dim) = w.dim();
    let mut matrix = Array2::zeros((s_dim, s_dim));
    for a in 0..s_dim {
        for b in 0..s_dim {
            let mut acc = Complex64::new(0.0, 0.0);
            for k in 0..i_dim {
                acc += w[[a, k]] * w[[b, k]].conj();
            }
            matrix[[a, b]] = acc;
        }
    }
    FockDensity::new(1, s_dim, matrix).expect("square by construction")
}

/// Idler marginal of a dilation amplitude matrix:
/// `rho_i[k, l] = sum_m W[m, k] conj(W[m, l])`.
pub fn dilation_idler_marginal(w: &Array2<Complex64>) -> FockDensity {
    let (s_dim, i_dim) = w.dim();
    let mut matrix = Array2::zeros((i_dim, i_dim));
    for k in 0..i_dim {
        for l in 0..i_dim {
            let mut acc = Complex64::new(0.0, 0.0);
            for m in 0..s_dim {
                acc += w[[m, k]] * w[[m, l]].conj();
            }
            matrix[[k, l]] = acc;
        }
    }
    FockDensity::new(1, i_dim, matrix).expect("square by construction")
}

/// Apply a channel in canonical form to a single-mode Fock density via its
/// loss-then-amplification decomposition. Aborts if either stage loses more
/// population than `trunc.budget`.
pub fn apply_channel_fock(
    channel: &CanonicalForm,
    rho: &FockDensity,
    trunc: &TruncationConfig,
) -> Result<FockDensity> {
    if rho.modes != 1 {
        return Err(Error::ModeMismatch { expected: 1, got: rho.modes });
    }
    let d = channel.decompose()?;
    let mut state = rho.clone();
    if d.eta0 < 1.0 {
        let loss = kraus_loss(d.eta0, state.dim)?;
        state = loss.apply(&state)?;
    }
    if d.conjugating {
        let dim_out = trunc
            .dim_out
            .unwrap_or_else(|| amplifier_output_dim(d.kappa0, state.dim));
        let contra = kraus_contra_amplifier(d.kappa0, state.dim, dim_out)?;
        let before = state.trace();
        state = contra.apply(&state)?;
        let lost = before - state.trace();
        if lost > trunc.budget {
            return Err(Error::TruncationBudgetExceeded { tail: lost, budget: trunc.budget });
        }
    } else if d.kappa0 > 1.0 {
        let dim_out = trunc
            .dim_out
            .unwrap_or_else(|| amplifier_output_dim(d.kappa0, state.dim));
        let amp = kraus_amplifier(d.kappa0, state.dim, dim_out)?;
        let before = state.trace();
        state = amp.apply(&state)?;
        let lost = before - state.trace();
        if lost > trunc.budget {
            return Err(Error::TruncationBudgetExceeded { tail: lost, budget: trunc.budget });
        }
    }
    Ok(state)
}

/// Normalized coherent state amplitudes on `dim` levels, plus the weight
/// discarded by the cutoff (before renormalization). A discarded weight
/// above ~1e-3 means the cutoff is too tight for this amplitude
/// (`|alpha|^2` should stay below about `dim / 4`).
pub fn coherent_vector(alpha: Complex64, dim: usize) -> (Array1<Complex64>, f64) {
    let lf = ln_factorials(dim);
    let r = alpha.norm();
    let mut v = Array1::zeros(dim);
    if r == 0.0 {
        v[0] = Complex64::new(1.0, 0.0);
        return (v, 0.0);
    }
    let theta = alpha.arg();
    let mut kept = 0.0;
    for n in 0..dim {
        let ln_mag = -r * r / 2.0 + n as f64 * r.ln() - 0.5 * lf[n];
        let mag = ln_mag.exp();
        v[n] = Complex64::from_polar(mag, n as f64 * theta);
        kept += mag * mag;
    }
    let discarded = (1.0 - kept).max(0.0);
    let norm = kept.sqrt();
    v.mapv_inplace(|z| z / norm);
    (v, discarded)
}

/// Normalized squeezed vacuum amplitudes on `dim` levels (squeezing
/// parameter `r`, phase `phi`), plus the discarded weight. Support is on
/// even levels only.
pub fn squeezed_vector(r: f64, phi: f64, dim: usize) -> (Array1<Complex64>, f64) {
    let lf = ln_factorials(dim.max(2));
    let mut v = Array1::zeros(dim);
    if r == 0.0 {
        v[0] = Complex64::new(1.0, 0.0);
        return (v, 0.0);
    }
    let t = r.tanh();
    let ln_sech = -r.cosh().ln();
    let mut kept = 0.0;
    for m in 0..=(dim - 1) / 2 {
        let n = 2 * m;
        // sqrt((2m)! ) / (2^m m!) in logs.
        let ln_comb = 0.5 * lf[n] - m as f64 * std::f64::consts::LN_2 - lf[m];
        let mag = (0.5 * ln_sech + m as f64 * t.ln() + ln_comb).exp();
        // Phase (-e^{i phi})^m.
        let phase = m as f64 * (phi + std::f64::consts::PI);
        v[n] = Complex64::from_polar(mag, phase);
        kept += mag * mag;
    }
    let discarded = (1.0 - kept).max(0.0);
    let norm = kept.sqrt();
    v.mapv_inplace(|z| z / norm);
    (v, discarded)
}

/// Fock basis vector `|n>`.
pub fn fock_vector(n: usize, dim: usize) -> Array1<Complex64> {
    let mut v = Array1::zeros(dim);
    v[n] = Complex64::new(1.0, 0.0);
    v
}

/// Families of deterministic pure-state samples.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StateFamily {
    /// Haar-random states from a seeded generator.
    Haar,
    /// Fock basis states `|index mod dim>`.
    Fock,
    /// Truncated coherent states on a fixed grid: 4 radii uniformly spaced
    /// in `(0, sqrt(dim)/2]` times 8 phases, cycled by index.
    CoherentGrid,
    /// Truncated squeezed vacuum on a fixed grid: `r` in
    /// {0.25, 0.5, 0.75, 1.0} times 8 phases, cycled by index.
    SqueezedGrid,
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed for sample `index` of a stream labeled by `seed`: a pure function,
/// so samples are reproducible regardless of evaluation order or worker
/// count.
pub fn sample_seed(seed: u64, index: u64) -> u64 {
    splitmix64(seed ^ splitmix64(index.wrapping_add(0xA076_1D64_78BD_642F)))
}

pub(crate) fn standard_normal(rng: &mut ChaCha8Rng) -> f64 {
    // Box-Muller; u1 in (0, 1] avoids log(0).
    let u1: f64 = 1.0 - rng.gen::<f64>();
    let u2: f64 = rng.gen();
    (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
}

/// The `index`-th pure state of the deterministic stream `(family, dim,
/// seed)`. Haar states depend on `seed`; the grid families ignore it.
pub fn sample_pure_state(
    family: StateFamily,
    dim: usize,
    seed: u64,
    index: u64,
) -> Array1<Complex64> {
    match family {
        StateFamily::Fock => fock_vector(index as usize % dim, dim),
        StateFamily::Haar => {
            let mut rng = ChaCha8Rng::seed_from_u64(sample_seed(seed, index));
            let mut v = Array1::zeros(dim);
            let mut norm2 = 0.0;
            for slot in v.iter_mut() {
                let z = Complex64::new(standard_normal(&mut rng), standard_normal(&mut rng));
                norm2 += z.norm_sqr();
                *slot = z;
            }
            let norm = norm2.sqrt();
            v.mapv_inplace(|z| z / norm);
            v
        }
        StateFamily::CoherentGrid => {
            let radii = 4;
            let phases = 8;
            let slot = index as usize % (radii * phases);
            let (ri, pi) = (slot / phases, slot % phases);
            let r = (dim as f64).sqrt() / 2.0 * (ri + 1) as f64 / radii as f64;
            let phi = 2.0 * std::f64::consts::PI * pi as f64 / phases as f64;
            coherent_vector(Complex64::from_polar(r, phi), dim).0
        }
        StateFamily::SqueezedGrid => {
            let rs = [0.25, 0.5, 0.75, 1.0];
            let phases = 8;
            let slot = index as usize % (rs.len() * phases);
            let (ri, pi) = (slot / phases, slot % phases);
            let phi = 2.0 * std::f64::consts::PI * pi as f64 / phases as f64;
            squeezed_vector(rs[ri], phi, dim).0
        }
    }
}

/// The first `count` states of the stream (see [`sample_pure_state`]).
pub fn sample_pure_states(
    family: StateFamily,
    dim: usize,
    seed: u64,
    count: usize,
) -> Vec<Array1<Complex64>> {
    (0..count as u64)
        .map(|i| sample_pure_state(family, dim, seed, i))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use crate::channel::Channel;

    fn diag(rho: &FockDensity) -> Vec<f64> {
        (0..rho.matrix.nrows()).map(|i| rho.matrix[[i, i]].re).collect()
    }

    #[test]
    fn loss_kraus_is_exactly_complete() {
        for eta in [0.0, 0.17, 0.5, 0.93, 1.0] {
            let k = kraus_loss(eta, 14).unwrap();
            assert!(k.completeness_defect() < 1e-13, "eta = {eta}");
        }
    }

    #[test]
    fn loss_on_single_photon() {
        let k = kraus_loss(0.3, 4).unwrap();
        let rho = FockDensity::fock(1, 4).unwrap();
        let out = k.apply(&rho).unwrap();
        let d = diag(&out);
        assert_abs_diff_eq!(d[0], 0.7, epsilon = 1e-14);
        assert_abs_diff_eq!(d[1], 0.3, epsilon = 1e-14);
        assert_abs_diff_eq!(out.trace(), 1.0, epsilon = 1e-13);
    }

    #[test]
    fn loss_semigroup_composes_in_transmissivity() {
        let dim = 10;
        let rho = {
            let (v, _) = coherent_vector(Complex64::new(0.8, 0.4), dim);
            FockDensity::from_pure(&v.view())
        };
        let once = kraus_loss(0.42, dim).unwrap().apply(&rho).unwrap();
        let two_step = kraus_loss(0.7, dim)
            .unwrap()
            .apply(&kraus_loss(0.6, dim).unwrap().apply(&rho).unwrap())
            .unwrap();
        let dist = linalg::trace_distance(&once.matrix, &two_step.matrix).unwrap();
        assert!(dist < 1e-12, "distance {dist}");
    }

    #[test]
    fn amplifier_on_vacuum_is_thermal() {
        let kappa = 2.0;
        let amp = kraus_amplifier(kappa, 8, amplifier_output_dim(kappa, 8)).unwrap();
        let out = amp.apply(&FockDensity::fock(0, 8).unwrap()).unwrap();
        let d = diag(&out);
        // Geometric distribution with mean kappa - 1 = 1.
        for (k, &p) in d.iter().enumerate().take(12) {
            let expected = 0.5f64.powi(k as i32 + 1);
            assert_abs_diff_eq!(p, expected, epsilon = 1e-12);
        }
        assert!(out.trace_defect < 1e-9);
    }

    #[test]
    fn amplifier_completeness_within_sized_budget() {
        for (kappa, dim_in) in [(1.2, 16), (2.0, 16), (3.0, 16), (1.5, 8)] {
            let amp =
                kraus_amplifier(kappa, dim_in, amplifier_output_dim(kappa, dim_in)).unwrap();
            assert!(
                amp.completeness_defect() < 1e-9,
                "kappa = {kappa}, dim_in = {dim_in}, defect = {}",
                amp.completeness_defect()
            );
        }
    }

    #[test]
    fn amplifier_entropy_of_single_photon_reference() {
        // Independently computed value for the gain-2 amplified |1>.
        let amp = kraus_amplifier(2.0, 4, amplifier_output_dim(2.0, 4)).unwrap();
        let out = amp.apply(&FockDensity::fock(1, 4).unwrap()).unwrap();
        assert_abs_diff_eq!(out.entropy_bits().unwrap(), 2.7114687242206115, epsilon = 1e-9);
    }

    #[test]
    fn contra_amplifier_on_vacuum_matches_amplified_vacuum() {
        let kappa = 2.0;
        let dim_out = amplifier_output_dim(kappa, 8);
        let contra = kraus_contra_amplifier(kappa, 8, dim_out).unwrap();
        let out = contra.apply(&FockDensity::fock(0, 8).unwrap()).unwrap();
        let d = diag(&out);
        for (k, &p) in d.iter().enumerate().take(12) {
            assert_abs_diff_eq!(p, 0.5f64.powi(k as i32 + 1), epsilon = 1e-12);
        }
    }

    #[test]
    fn contra_amplifier_matches_dilation_idler() {
        let kappa = 1.7;
        let dim_in = 6;
        let i_dim = idler_dim_for_budget(kappa, dim_in, 1e-12);
        let s_dim = dim_in + i_dim;
        let psi = sample_pure_state(StateFamily::Haar, dim_in, 11, 3);
        let coeff = amplifier_coefficients(kappa, dim_in, i_dim);
        let w = dilation_amplitudes(&coeff, &psi.view(), s_dim, i_dim);
        let idler = dilation_idler_marginal(&w);
        let contra = kraus_contra_amplifier(kappa, dim_in, i_dim).unwrap();
        let direct = contra.apply(&FockDensity::from_pure(&psi.view())).unwrap();
        let dist = linalg::trace_distance(&idler.matrix, &direct.matrix).unwrap();
        assert!(dist < 1e-12, "distance {dist}");
    }

    #[test]
    fn dilation_signal_matches_amplifier_kraus() {
        let kappa = 2.0;
        let dim_in = 6;
        let i_dim = idler_dim_for_budget(kappa, dim_in, 1e-12);
        let s_dim = dim_in + i_dim;
        let psi = sample_pure_state(StateFamily::Haar, dim_in, 5, 0);
        let coeff = amplifier_coefficients(kappa, dim_in, i_dim);
        let w = dilation_amplitudes(&coeff, &psi.view(), s_dim, i_dim);
        let signal = dilation_signal_marginal(&w);
        let amp = kraus_amplifier(kappa, dim_in, s_dim).unwrap();
        let direct = amp.apply(&FockDensity::from_pure(&psi.view())).unwrap();
        let dist = linalg::trace_distance(&signal.matrix, &direct.matrix).unwrap();
        assert!(dist < 1e-12, "distance {dist}");
    }

    #[test]
    fn degenerate_contra_gain_one_replaces_with_vacuum() {
        let contra = kraus_contra_amplifier(1.0, 6, 6).unwrap();
        let psi = sample_pure_state(StateFamily::Haar, 6, 21, 0);
        let out = contra.apply(&FockDensity::from_pure(&psi.view())).unwrap();
        let d = diag(&out);
        assert_abs_diff_eq!(d[0], 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(out.trace(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn channel_application_reaches_expected_population() {
        let trunc = TruncationConfig::default();
        let ch = Channel::thermal(0.4, 1.5).unwrap().canonical();
        let out = apply_channel_fock(&ch, &FockDensity::fock(0, 10).unwrap(), &trunc).unwrap();
        // (1 - eta) n_env = 0.9.
        assert_abs_diff_eq!(out.mean_photons(), 0.9, epsilon = 1e-9);

        let ch = Channel::additive_noise(1.0).unwrap().canonical();
        let out = apply_channel_fock(&ch, &FockDensity::fock(0, 10).unwrap(), &trunc).unwrap();
        assert_abs_diff_eq!(out.mean_photons(), 1.0, epsilon = 1e-9);

        let ch = Channel::contra_amplifier(2.0, 0.5).unwrap().canonical();
        let out = apply_channel_fock(&ch, &FockDensity::fock(1, 10).unwrap(), &trunc).unwrap();
        // (kappa - 1)(E + 1) + kappa n_env with E = 1.
        assert_abs_diff_eq!(out.mean_photons(), 3.0, epsilon = 1e-8);
    }

    #[test]
    fn truncation_budget_violation_is_an_error() {
        let ch = Channel::amplifier(3.0, 0.0).unwrap().canonical();
        let trunc = TruncationConfig { budget: 1e-9, dim_out: Some(12) };
        let res = apply_channel_fock(&ch, &FockDensity::fock(8, 10).unwrap(), &trunc);
        assert!(matches!(res, Err(Error::TruncationBudgetExceeded { .. })));
    }

    #[test]
    fn coherent_vector_tail_behavior() {
        let (v, tail) = coherent_vector(Complex64::new(0.5, 0.0), 16);
        assert!(tail < 1e-12);
        let norm2: f64 = v.iter().map(|z| z.norm_sqr()).sum();
        assert_abs_diff_eq!(norm2, 1.0, epsilon = 1e-13);

        // Tight cutoff: |alpha|^2 = 4 on 8 levels leaves a visible tail.
        let (_, tail) = coherent_vector(Complex64::new(2.0, 0.0), 8);
        assert!(tail > 1e-3, "tail {tail}");

        let (v, _) = coherent_vector(Complex64::new(1.2, -0.3), 40);
        let rho = FockDensity::from_pure(&v.view());
        assert_abs_diff_eq!(rho.mean_photons(), 1.2f64 * 1.2 + 0.09, epsilon = 1e-10);
    }

    #[test]
    fn squeezed_vector_structure() {
        let (v, tail) = squeezed_vector(0.8, 1.1, 60);
        assert!(tail < 1e-10, "tail {tail}");
        for n in (1..60).step_by(2) {
            assert_eq!(v[n], Complex64::new(0.0, 0.0));
        }
        let rho = FockDensity::from_pure(&v.view());
        let sinh2 = 0.8f64.sinh().powi(2);
        assert_abs_diff_eq!(rho.mean_photons(), sinh2, epsilon = 1e-9);
    }

    #[test]
    fn thermal_density_population() {
        let rho = FockDensity::thermal(1.0, 60).unwrap();
        assert_abs_diff_eq!(rho.trace(), 1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(rho.mean_photons(), 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(rho.entropy_bits().unwrap(), 2.0, epsilon = 1e-11);
    }

    #[test]
    fn tensor_and_partial_trace_round_trip() {
        let a = FockDensity::thermal(0.7, 5).unwrap();
        let b = FockDensity::fock(2, 5).unwrap();
        let joint = a.tensor(&b).unwrap();
        assert_eq!(joint.modes, 2);
        assert_abs_diff_eq!(joint.trace(), 1.0, epsilon = 1e-13);
        assert_abs_diff_eq!(joint.mean_photons(), a.mean_photons() + 2.0, epsilon = 1e-12);
        let back_a = joint.partial_trace(0).unwrap();
        let back_b = joint.partial_trace(1).unwrap();
        assert!(linalg::trace_distance(&back_a.matrix, &a.matrix).unwrap() < 1e-13);
        assert!(linalg::trace_distance(&back_b.matrix, &b.matrix).unwrap() < 1e-13);
    }

    #[test]
    fn conjugation_is_an_involution_and_preserves_spectra() {
        let psi = sample_pure_state(StateFamily::Haar, 8, 3, 7);
        let rho = FockDensity::from_pure(&psi.view());
        let conj = rho.conjugate_in_fock();
        let twice = conj.conjugate_in_fock();
        assert!(linalg::trace_distance(&twice.matrix, &rho.matrix).unwrap() < 1e-15);
        let s1 = linalg::hermitian_eigenvalues(&rho.matrix).unwrap();
        let s2 = linalg::hermitian_eigenvalues(&conj.matrix).unwrap();
        for (a, b) in s1.iter().zip(&s2) {
            assert_abs_diff_eq!(a, b, epsilon = 1e-12);
        }
    }

    #[test]
    fn samplers_are_deterministic_and_normalized() {
        for family in [
            StateFamily::Haar,
            StateFamily::Fock,
            StateFamily::CoherentGrid,
            StateFamily::SqueezedGrid,
        ] {
            let a = sample_pure_state(family, 10, 42, 17);
            let b = sample_pure_state(family, 10, 42, 17);
            assert_eq!(a, b, "{family:?} not reproducible");
            let norm2: f64 = a.iter().map(|z| z.norm_sqr()).sum();
            assert_abs_diff_eq!(norm2, 1.0, epsilon = 1e-12);
        }
        // Different indices and seeds decorrelate Haar samples.
        let a = sample_pure_state(StateFamily::Haar, 10, 42, 0);
        let b = sample_pure_state(StateFamily::Haar, 10, 42, 1);
        let c = sample_pure_state(StateFamily::Haar, 10, 43, 0);
        let overlap_ab: Complex64 = a.iter().zip(&b).map(|(x, y)| x.conj() * y).sum();
        let overlap_ac: Complex64 = a.iter().zip(&c).map(|(x, y)| x.conj() * y).sum();
        assert!(overlap_ab.norm() < 0.999);
        assert!(overlap_ac.norm() < 0.999);
    }

    #[test]
    fn fock_family_enumerates_the_basis() {
        let states = sample_pure_states(StateFamily::Fock, 4, 0, 4);
        for (n, s) in states.iter().enumerate() {
            assert_eq!(s[n], Complex64::new(1.0, 0.0));
            let norm2: f64 = s.iter().map(|z| z.norm_sqr()).sum();
            assert_abs_diff_eq!(norm2, 1.0, epsilon = 1e-15);
        }
    }

    #[test]
    fn density_validation_catches_defects() {
        let psi = sample_pure_state(StateFamily::Haar, 6, 1, 1);
        let rho = FockDensity::from_pure(&psi.view());
        rho.validate().unwrap();

        let mut bad = rho.clone();
        bad.matrix[[0, 1]] += Complex64::new(1e-6, 0.0);
        assert!(matches!(bad.validate(), Err(Error::NonHermitian(_))));
    }
}
