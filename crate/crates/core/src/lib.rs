//! Single-mode bosonic Gaussian channels: closed-form capacities, truncated
//! Fock-space numerics, and a deterministic verification harness for the
//! minimum-output-entropy structure of the amplifier families.

pub mod capacity;
pub mod channel;
pub mod error;
pub mod fock;
pub mod gaussian;
pub mod linalg;
pub mod plot;
pub mod report;
pub mod verify;

pub use channel::{CanonicalForm, Channel, Decomposition};
pub use error::{Error, Result};
pub use report::VerificationReport;
