//! Closed-form information quantities of the channel families: constrained
//! classical capacity, minimum and maximum output entropies, a numerical
//! phase-space cross-check, and the Gaussian entanglement-of-formation
//! decomposition of two-mode squeezed thermal states.

use ndarray::Array2;

use crate::channel::Channel;
use crate::error::{Error, Result};
use crate::gaussian::{self, GaussianState};
use crate::linalg;

/// Bosonic entropy function `g(x) = (x+1) log2(x+1) - x log2 x` in bits:
/// the von Neumann entropy of a thermal state with mean photon number `x`.
///
/// Evaluated as `log2(1+x) + x log2(1 + 1/x)`, which is exact for all
/// `x > 0` and avoids cancellation both near zero and for large `x`.
/// Nonpositive inputs (including roundoff-level negatives) return 0.
pub fn g(x: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    (x.ln_1p() + x * x.recip().ln_1p()) / std::f64::consts::LN_2
}

fn check_energy(energy: f64) -> Result<()> {
    if !energy.is_finite() || energy < 0.0 {
        return Err(Error::InvalidParameter(format!(
            "mean photon constraint must be finite and >= 0, got {energy}"
        )));
    }
    Ok(())
}

/// Mean photon number at the channel output when the input carries mean
/// photon number `energy`.
pub fn output_mean_photons(channel: &Channel, energy: f64) -> f64 {
    match *channel {
        Channel::Thermal { eta, n_env } => eta * energy + (1.0 - eta) * n_env,
        Channel::AdditiveNoise { n } => energy + n,
        Channel::Amplifier { kappa, n_env } => kappa * energy + (kappa - 1.0) * (n_env + 1.0),
        Channel::ContraAmplifier { kappa, n_env } => {
            (kappa - 1.0) * (energy + 1.0) + kappa * n_env
        }
    }
}

/// Minimum output entropy in bits, attained on coherent (covariant families)
/// or vacuum inputs.
pub fn min_output_entropy(channel: &Channel) -> f64 {
    match *channel {
        Channel::Thermal { eta, n_env } => g((1.0 - eta) * n_env),
        Channel::AdditiveNoise { n } => g(n),
        Channel::Amplifier { kappa, n_env } => g((kappa - 1.0) * (n_env + 1.0)),
        Channel::ContraAmplifier { kappa, n_env } => g(kappa * (n_env + 1.0) - 1.0),
    }
}

/// Maximum output entropy in bits under the input constraint
/// `mean photons <= energy`, attained by the thermal input saturating it.
pub fn max_output_entropy(channel: &Channel, energy: f64) -> Result<f64> {
    check_energy(energy)?;
    Ok(g(output_mean_photons(channel, energy)))
}

/// Constrained classical (Holevo) capacity in bits per channel use:
/// maximum minus minimum output entropy.
pub fn holevo_capacity(channel: &Channel, energy: f64) -> Result<f64> {
    Ok(max_output_entropy(channel, energy)? - min_output_entropy(channel))
}

/// The same capacity computed numerically through the phase-space picture:
/// both entropy terms are obtained by pushing Gaussian states (the
/// energy-saturating thermal input and the vacuum) through the channel and
/// reading entropies off symplectic spectra. Agreement with
/// [`holevo_capacity`] validates the closed forms.
pub fn capacity_bound_phase_space(channel: &Channel, energy: f64) -> Result<f64> {
    check_energy(energy)?;
    let canonical = channel.canonical();
    let hot = gaussian::apply_channel(&GaussianState::thermal(energy)?, &canonical)?;
    let cold = gaussian::apply_channel(&GaussianState::vacuum(1), &canonical)?;
    Ok(gaussian::gaussian_entropy_bits(&hot)? - gaussian::gaussian_entropy_bits(&cold)?)
}

/// Entanglement of formation data for a two-mode squeezed thermal state of
/// gain `kappa` and thermal population `n_env`.
///
/// The covariance `gamma` splits as `gamma0 + residual`, where `gamma0` is
/// the pure two-mode squeezed vacuum of the same gain and the residual is a
/// rank-two PSD classical-noise term with eigenvalues
/// `{2 n_env (2 kappa - 1), 2 n_env (2 kappa - 1), 0, 0}`.
/// The formation entanglement is that of the pure part: `g(kappa - 1)`,
/// independent of `n_env`.
#[derive(Debug, Clone)]
pub struct EofDecomposition {
    pub gamma: Array2<f64>,
    pub gamma0: Array2<f64>,
    pub residual: Array2<f64>,
    /// Eigenvalues of the residual, ascending.
    pub residual_eigenvalues: Vec<f64>,
    /// Entanglement of formation in ebits.
    pub value_bits: f64,
}

pub fn eof_two_mode_squeezed_thermal(kappa: f64, n_env: f64) -> Result<EofDecomposition> {
    let state = gaussian::two_mode_squeezed_thermal(kappa, n_env)?;
    let pure = gaussian::two_mode_squeezed_thermal(kappa, 0.0)?;
    let gamma = state.cov;
    let gamma0 = pure.cov;
    let residual = &gamma - &gamma0;
    let mut residual_eigenvalues = linalg::symmetric_eigenvalues(&residual)?;
    residual_eigenvalues.sort_by(f64::total_cmp);
    Ok(EofDecomposition {
        gamma,
        gamma0,
        residual,
        residual_eigenvalues,
        value_bits: g(kappa - 1.0),
    })
}
