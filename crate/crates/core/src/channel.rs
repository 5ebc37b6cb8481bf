//! Parametrization of single-mode phase-insensitive bosonic Gaussian
//! channels and the closed-form structure theory on top of it: canonical
//! `(tau, y)` form, physicality and entanglement-breaking tests, composition,
//! decomposition into a pure-loss stage followed by an amplification stage,
//! and transposition of phase-conjugating channels.
//!
//! Conventions: vacuum quadrature variance is 1 (covariance of the vacuum is
//! the identity), so a thermal state with mean photon number `N` has
//! covariance `(2N + 1) I`. A channel acts on covariance matrices as
//! `V -> tau V + y I` (covariant) or `V -> |tau| Z V Z + y I` with
//! `Z = diag(1, -1)` (phase-conjugating).

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Tolerance for boundary classifications (quantum-limited, entanglement
/// breaking, physicality).
const BOUNDARY_TOL: f64 = 1e-12;

/// A single-mode phase-insensitive Gaussian channel, by family.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum Channel {
    /// Beam-splitter coupling of transmissivity `eta` to a thermal
    /// environment with mean photon number `n_env`.
    Thermal { eta: f64, n_env: f64 },
    /// Classical additive Gaussian noise adding `n` photons on average.
    AdditiveNoise { n: f64 },
    /// Two-mode-squeezer coupling of gain `kappa` to a thermal environment
    /// with mean photon number `n_env`; the output is the amplified mode.
    Amplifier { kappa: f64, n_env: f64 },
    /// Same coupling as [`Channel::Amplifier`] but the output is the idler
    /// mode, so the channel conjugates phase.
    ContraAmplifier { kappa: f64, n_env: f64 },
}

/// Canonical form `(tau, y, conjugating)` of a phase-insensitive channel:
/// `tau` scales the covariance (sign matters: negative values arise for
/// phase-conjugating channels), `y >= 0` is the additive noise, and
/// `conjugating` records whether the action includes complex conjugation in
/// the Fock basis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CanonicalForm {
    pub tau: f64,
    pub y: f64,
    pub conjugating: bool,
}

/// Factorization of a channel as a quantum-limited loss stage of
/// transmissivity `eta0` followed by a quantum-limited amplification stage of
/// gain `kappa0`. For `conjugating` channels the second stage is the
/// phase-conjugating amplifier output.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Decomposition {
    pub eta0: f64,
    pub kappa0: f64,
    pub conjugating: bool,
}

fn require_finite(name: &str, v: f64) -> Result<()> {
    if v.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("{name} must be finite, got {v}")))
    }
}

impl Channel {
    /// Thermal attenuation channel. Requires `0 <= eta <= 1`, `n_env >= 0`.
    pub fn thermal(eta: f64, n_env: f64) -> Result<Self> {
        require_finite("eta", eta)?;
        require_finite("n_env", n_env)?;
        if !(0.0..=1.0).contains(&eta) {
            return Err(Error::InvalidParameter(format!(
                "thermal channel needs 0 <= eta <= 1, got eta = {eta}"
            )));
        }
        if n_env < 0.0 {
            return Err(Error::InvalidParameter(format!(
                "environment photon number must be >= 0, got {n_env}"
            )));
        }
        Ok(Channel::Thermal { eta, n_env })
    }

    /// Additive classical noise channel. Requires `n >= 0`.
    pub fn additive_noise(n: f64) -> Result<Self> {
        require_finite("n", n)?;
        if n < 0.0 {
            return Err(Error::InvalidParameter(format!(
                "additive noise photon number must be >= 0, got {n}"
            )));
        }
        Ok(Channel::AdditiveNoise { n })
    }

    /// Thermal amplification channel. Requires `kappa >= 1`, `n_env >= 0`.
    pub fn amplifier(kappa: f64, n_env: f64) -> Result<Self> {
        require_finite("kappa", kappa)?;
        require_finite("n_env", n_env)?;
        if kappa < 1.0 {
            return Err(Error::InvalidParameter(format!(
                "amplifier gain must be >= 1, got kappa = {kappa}"
            )));
        }
        if n_env < 0.0 {
            return Err(Error::InvalidParameter(format!(
                "environment photon number must be >= 0, got {n_env}"
            )));
        }
        Ok(Channel::Amplifier { kappa, n_env })
    }

    /// Phase-conjugating amplification channel. Requires `kappa >= 1`,
    /// `n_env >= 0`.
    pub fn contra_amplifier(kappa: f64, n_env: f64) -> Result<Self> {
        require_finite("kappa", kappa)?;
        require_finite("n_env", n_env)?;
        if kappa < 1.0 {
            return Err(Error::InvalidParameter(format!(
                "contra-amplifier gain must be >= 1, got kappa = {kappa}"
            )));
        }
        if n_env < 0.0 {
            return Err(Error::InvalidParameter(format!(
                "environment photon number must be >= 0, got {n_env}"
            )));
        }
        Ok(Channel::ContraAmplifier { kappa, n_env })
    }

    /// Pure loss: thermal channel with vacuum environment.
    pub fn quantum_limited_loss(eta: f64) -> Result<Self> {
        Self::thermal(eta, 0.0)
    }

    /// Quantum-limited amplifier: vacuum environment.
    pub fn quantum_limited_amplifier(kappa: f64) -> Result<Self> {
        Self::amplifier(kappa, 0.0)
    }

    /// The identity channel (loss with full transmissivity).
    pub fn identity() -> Self {
        Channel::Thermal { eta: 1.0, n_env: 0.0 }
    }

    /// Canonical `(tau, y, conjugating)` parameters.
    pub fn canonical(&self) -> CanonicalForm {
        match *self {
            Channel::Thermal { eta, n_env } => CanonicalForm {
                tau: eta,
                y: (1.0 - eta) * (2.0 * n_env + 1.0),
                conjugating: false,
            },
            Channel::AdditiveNoise { n } => CanonicalForm {
                tau: 1.0,
                y: 2.0 * n,
                conjugating: false,
            },
            Channel::Amplifier { kappa, n_env } => CanonicalForm {
                tau: kappa,
                y: (kappa - 1.0) * (2.0 * n_env + 1.0),
                conjugating: false,
            },
            Channel::ContraAmplifier { kappa, n_env } => CanonicalForm {
                tau: -(kappa - 1.0),
                y: kappa * (2.0 * n_env + 1.0),
                conjugating: true,
            },
        }
    }

    /// Whether the channel sits on the quantum-limited boundary of its
    /// physicality region (vacuum environment, or zero added noise).
    pub fn is_quantum_limited(&self) -> bool {
        let c = self.canonical();
        (c.y - c.noise_lower_bound()).abs() <= BOUNDARY_TOL
    }
}

impl CanonicalForm {
    /// Minimum additive noise compatible with complete positivity for this
    /// `tau` and conjugation flag.
    pub fn noise_lower_bound(&self) -> f64 {
        if self.conjugating {
            self.tau.abs() + 1.0
        } else {
            (self.tau - 1.0).abs()
        }
    }

    /// Complete positivity check: `y` must sit at or above the family's
    /// noise lower bound (up to roundoff). Conjugating forms must have
    /// `tau <= 0`, covariant forms `tau >= 0`.
    pub fn is_physical(&self) -> bool {
        if !self.tau.is_finite() || !self.y.is_finite() {
            return false;
        }
        let sign_ok = if self.conjugating { self.tau <= BOUNDARY_TOL } else { self.tau >= -BOUNDARY_TOL };
        sign_ok && self.y >= self.noise_lower_bound() - BOUNDARY_TOL
    }

    /// A channel is entanglement breaking iff `y >= |tau| + 1`; the boundary
    /// counts as breaking.
    pub fn is_entanglement_breaking(&self) -> bool {
        self.y >= self.tau.abs() + 1.0 - BOUNDARY_TOL
    }

    /// Composition: apply `self` first, then `second`. Scale factors
    /// multiply in magnitude, noise accumulates as `|tau_2| y_1 + y_2`, and
    /// conjugation flags compose by XOR (two conjugations cancel).
    ///
    /// The composite of physical channels is always physical.
    pub fn compose(&self, second: &CanonicalForm) -> CanonicalForm {
        let conjugating = self.conjugating ^ second.conjugating;
        let magnitude = (self.tau * second.tau).abs();
        CanonicalForm {
            tau: if conjugating { -magnitude } else { magnitude },
            y: second.tau.abs() * self.y + second.y,
            conjugating,
        }
    }

    /// Factor the channel as quantum-limited loss followed by a
    /// quantum-limited amplification stage (covariant or conjugating,
    /// matching `self.conjugating`).
    ///
    /// Covariant: `kappa0 = (y + tau + 1)/2`, `eta0 = tau / kappa0`.
    /// Conjugating: `kappa0 = (y + |tau| + 1)/2`, `eta0 = |tau|/(kappa0 - 1)`,
    /// with the degenerate `kappa0 = 1` case (tau = 0, y = 1) taking
    /// `eta0 = 1`. The identity maps to `(eta0, kappa0) = (1, 1)`.
    pub fn decompose(&self) -> Result<Decomposition> {
        if !self.is_physical() {
            return Err(Error::NonPhysical(format!(
                "cannot decompose tau = {}, y = {}, conjugating = {}",
                self.tau, self.y, self.conjugating
            )));
        }
        if self.conjugating {
            let kappa0 = (self.y + self.tau.abs() + 1.0) / 2.0;
            let eta0 = if (kappa0 - 1.0).abs() <= BOUNDARY_TOL {
                1.0
            } else {
                (self.tau.abs() / (kappa0 - 1.0)).min(1.0)
            };
            Ok(Decomposition { eta0, kappa0, conjugating: true })
        } else {
            let kappa0 = ((self.y + self.tau + 1.0) / 2.0).max(1.0);
            let eta0 = (self.tau / kappa0).clamp(0.0, 1.0);
            Ok(Decomposition { eta0, kappa0, conjugating: false })
        }
    }

    /// Composition with the Fock-basis transpose: for a conjugating channel
    /// `C` this returns the covariant channel `T o C` (transposition after
    /// the channel), which has parameters `(|tau|, y)`. Errors on covariant
    /// input, where the composite would not be completely positive in
    /// general.
    pub fn transpose_composite(&self) -> Result<CanonicalForm> {
        if !self.conjugating {
            return Err(Error::InvalidParameter(
                "transpose_composite is defined for phase-conjugating channels only".into(),
            ));
        }
        Ok(CanonicalForm {
            tau: self.tau.abs(),
            y: self.y,
            conjugating: false,
        })
    }

    /// Identify the channel family these canonical parameters belong to.
    pub fn classify(&self) -> Result<Channel> {
        if !self.is_physical() {
            return Err(Error::NonPhysical(format!(
                "tau = {}, y = {}, conjugating = {}",
                self.tau, self.y, self.conjugating
            )));
        }
        if self.conjugating {
            let kappa = self.tau.abs() + 1.0;
            let n_env = ((self.y / kappa - 1.0) / 2.0).max(0.0);
            Channel::contra_amplifier(kappa, n_env)
        } else if (self.tau - 1.0).abs() <= BOUNDARY_TOL {
            Channel::additive_noise((self.y / 2.0).max(0.0))
        } else if self.tau < 1.0 {
            let n_env = (self.y / (1.0 - self.tau) - 1.0).max(0.0) / 2.0;
            Channel::thermal(self.tau, n_env)
        } else {
            let n_env = (self.y / (self.tau - 1.0) - 1.0).max(0.0) / 2.0;
            Channel::amplifier(self.tau, n_env)
        }
    }
}

impl Decomposition {
    /// Multiply the two stages back together, as a canonical form.
    pub fn recompose(&self) -> CanonicalForm {
        let loss = Channel::Thermal { eta: self.eta0, n_env: 0.0 }.canonical();
        let amp = if self.conjugating {
            Channel::ContraAmplifier { kappa: self.kappa0, n_env: 0.0 }.canonical()
        } else {
            Channel::Amplifier { kappa: self.kappa0, n_env: 0.0 }.canonical()
        };
        loss.compose(&amp)
    }
}
