//! C ABI for the channel library: opaque channel handles, status codes, and
//! the closed-form quantities. The header is generated into `include/bgc.h`
//! at build time.
//!
//! Conventions: constructors write a heap-allocated handle through an out
//! pointer and return [`BgcStatus::Ok`] on success; every other function
//! reports through its own out pointer the same way. Out parameters are left
//! untouched on failure. Handles must be released with [`bgc_channel_free`].

use std::ffi::c_char;

use bgc::capacity::{eof_two_mode_squeezed_thermal, g, holevo_capacity, min_output_entropy};
use bgc::channel::Channel;
use bgc::error::Error;

/// Status code returned by every fallible entry point.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BgcStatus {
    /// Success.
    Ok = 0,
    /// A required pointer argument was null.
    NullPointer = 1,
    /// A parameter was outside its admissible domain.
    InvalidParameter = 2,
    /// Parameters describe a map that is not a physical channel.
    NonPhysical = 3,
    /// A numerical routine failed (truncation budget, rank, eigensolver).
    Numerical = 4,
}

/// Opaque handle to a single-mode channel.
pub struct BgcChannel {
    inner: Channel,
}

fn status_of(err: &Error) -> BgcStatus {
    match err {
        Error::InvalidParameter(_) | Error::InvalidGrid(_) => BgcStatus::InvalidParameter,
        Error::NonPhysical(_)
        | Error::ModeMismatch { .. }
        | Error::DimensionMismatch(_)
        | Error::InvalidCovariance(_) => BgcStatus::NonPhysical,
        Error::NonHermitian(_)
        | Error::TruncationBudgetExceeded { .. }
        | Error::SingularReference(_)
        | Error::Eigensolver(_)
        | Error::Io(_) => BgcStatus::Numerical,
    }
}

/// # Safety
/// `out` must be a valid pointer to writable memory for one handle pointer.
unsafe fn emit_channel(
    built: Result<Channel, Error>,
    out: *mut *mut BgcChannel,
) -> BgcStatus {
    if out.is_null() {
        return BgcStatus::NullPointer;
    }
    match built {
        Ok(inner) => {
            unsafe { *out = Box::into_raw(Box::new(BgcChannel { inner })) };
            BgcStatus::Ok
        }
        Err(e) => status_of(&e),
    }
}

/// Create a thermal attenuator of transmissivity `eta` coupled to an
/// environment with mean photon number `n_env`.
///
/// # Safety
/// `out` must point to writable memory for one handle pointer.
#[no_mangle]
pub unsafe extern "C" fn bgc_channel_thermal(
    eta: f64,
    n_env: f64,
    out: *mut *mut BgcChannel,
) -> BgcStatus {
    unsafe { emit_channel(Channel::thermal(eta, n_env), out) }
}

/// Create an additive classical-noise channel adding `n` photons on average.
///
/// # Safety
/// `out` must point to writable memory for one handle pointer.
#[no_mangle]
pub unsafe extern "C" fn bgc_channel_additive_noise(
    n: f64,
    out: *mut *mut BgcChannel,
) -> BgcStatus {
    unsafe { emit_channel(Channel::additive_noise(n), out) }
}

/// Create an amplifier of gain `kappa` coupled to an environment with mean
/// photon number `n_env`.
///
/// # Safety
/// `out` must point to writable memory for one handle pointer.
#[no_mangle]
pub unsafe extern "C" fn bgc_channel_amplifier(
    kappa: f64,
    n_env: f64,
    out: *mut *mut BgcChannel,
) -> BgcStatus {
    unsafe { emit_channel(Channel::amplifier(kappa, n_env), out) }
}

/// Create the phase-conjugating counterpart of the amplifier, whose output
/// is the idler mode.
///
/// # Safety
/// `out` must point to writable memory for one handle pointer.
#[no_mangle]
pub unsafe extern "C" fn bgc_channel_contra_amplifier(
    kappa: f64,
    n_env: f64,
    out: *mut *mut BgcChannel,
) -> BgcStatus {
    unsafe { emit_channel(Channel::contra_amplifier(kappa, n_env), out) }
}

/// Release a channel handle. Passing null is a no-op.
///
/// # Safety
/// `channel` must be null or a handle produced by a `bgc_channel_*`
/// constructor that has not been freed yet.
#[no_mangle]
pub unsafe extern "C" fn bgc_channel_free(channel: *mut BgcChannel) {
    if !channel.is_null() {
        drop(unsafe { Box::from_raw(channel) });
    }
}

/// Classical capacity in bits per use under a mean photon-number constraint
/// `energy` at the input, assuming the minimum output entropy is attained on
/// the vacuum.
///
/// # Safety
/// `channel` must be a live handle; `out` must point to writable memory for
/// one `double`.
#[no_mangle]
pub unsafe extern "C" fn bgc_channel_capacity(
    channel: *const BgcChannel,
    energy: f64,
    out: *mut f64,
) -> BgcStatus {
    if channel.is_null() || out.is_null() {
        return BgcStatus::NullPointer;
    }
    match holevo_capacity(unsafe { &(*channel).inner }, energy) {
        Ok(v) => {
            unsafe { *out = v };
            BgcStatus::Ok
        }
        Err(e) => status_of(&e),
    }
}

/// Minimum output entropy in bits, attained on the vacuum input.
///
/// # Safety
/// `channel` must be a live handle; `out` must point to writable memory for
/// one `double`.
#[no_mangle]
pub unsafe extern "C" fn bgc_channel_min_output_entropy(
    channel: *const BgcChannel,
    out: *mut f64,
) -> BgcStatus {
    if channel.is_null() || out.is_null() {
        return BgcStatus::NullPointer;
    }
    unsafe { *out = min_output_entropy(&(*channel).inner) };
    BgcStatus::Ok
}

/// Canonical form `(tau, y, conjugating)` of the channel: transmissivity or
/// gain `tau`, additive noise `y`, and whether the map conjugates phase.
///
/// # Safety
/// `channel` must be a live handle; `tau`, `y`, and `conjugating` must each
/// point to writable memory for one value.
#[no_mangle]
pub unsafe extern "C" fn bgc_channel_canonical(
    channel: *const BgcChannel,
    tau: *mut f64,
    y: *mut f64,
    conjugating: *mut bool,
) -> BgcStatus {
    if channel.is_null() || tau.is_null() || y.is_null() || conjugating.is_null() {
        return BgcStatus::NullPointer;
    }
    let form = unsafe { (*channel).inner.canonical() };
    unsafe {
        *tau = form.tau;
        *y = form.y;
        *conjugating = form.conjugating;
    }
    BgcStatus::Ok
}

/// Factor the channel into a quantum-limited loss of transmissivity `eta0`
/// followed by a quantum-limited amplification of gain `kappa0`; for
/// conjugating channels the second stage conjugates phase.
///
/// # Safety
/// `channel` must be a live handle; `eta0`, `kappa0`, and `conjugating` must
/// each point to writable memory for one value.
#[no_mangle]
pub unsafe extern "C" fn bgc_channel_decompose(
    channel: *const BgcChannel,
    eta0: *mut f64,
    kappa0: *mut f64,
    conjugating: *mut bool,
) -> BgcStatus {
    if channel.is_null() || eta0.is_null() || kappa0.is_null() || conjugating.is_null() {
        return BgcStatus::NullPointer;
    }
    match unsafe { (*channel).inner.canonical() }.decompose() {
        Ok(d) => {
            unsafe {
                *eta0 = d.eta0;
                *kappa0 = d.kappa0;
                *conjugating = d.conjugating;
            }
            BgcStatus::Ok
        }
        Err(e) => status_of(&e),
    }
}

/// Whether the channel destroys all input entanglement.
///
/// # Safety
/// `channel` must be a live handle; `out` must point to writable memory for
/// one `bool`.
#[no_mangle]
pub unsafe extern "C" fn bgc_channel_is_entanglement_breaking(
    channel: *const BgcChannel,
    out: *mut bool,
) -> BgcStatus {
    if channel.is_null() || out.is_null() {
        return BgcStatus::NullPointer;
    }
    unsafe { *out = (*channel).inner.canonical().is_entanglement_breaking() };
    BgcStatus::Ok
}

/// Entanglement of formation, in ebits, of the two-mode squeezed thermal
/// state with gain parameter `kappa` and environment population `n_env`.
///
/// # Safety
/// `out` must point to writable memory for one `double`.
#[no_mangle]
pub unsafe extern "C" fn bgc_entanglement_of_formation(
    kappa: f64,
    n_env: f64,
    out: *mut f64,
) -> BgcStatus {
    if out.is_null() {
        return BgcStatus::NullPointer;
    }
    match eof_two_mode_squeezed_thermal(kappa, n_env) {
        Ok(d) => {
            unsafe { *out = d.value_bits };
            BgcStatus::Ok
        }
        Err(e) => status_of(&e),
    }
}

/// Entropy of a thermal state with mean photon number `x`, in bits:
/// `(x+1) log2(x+1) - x log2(x)`.
#[no_mangle]
pub extern "C" fn bgc_g(x: f64) -> f64 {
    g(x)
}

/// Static, null-terminated name of a status code.
#[no_mangle]
pub extern "C" fn bgc_status_name(status: BgcStatus) -> *const c_char {
    let name: &'static [u8] = match status {
        BgcStatus::Ok => b"ok\0",
        BgcStatus::NullPointer => b"null pointer\0",
        BgcStatus::InvalidParameter => b"invalid parameter\0",
        BgcStatus::NonPhysical => b"non-physical channel\0",
        BgcStatus::Numerical => b"numerical failure\0",
    };
    name.as_ptr().cast()
}
