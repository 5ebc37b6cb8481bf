//! Exercises the C ABI from Rust: handle lifecycle, status codes, out
//! parameters, and agreement with the underlying library.

use std::ffi::CStr;
use std::ptr;

use bgc::capacity::{g, holevo_capacity};
use bgc::channel::Channel;
use bgc_ffi::*;

fn make(build: unsafe extern "C" fn(f64, f64, *mut *mut BgcChannel) -> BgcStatus, a: f64, b: f64) -> *mut BgcChannel {
    let mut handle: *mut BgcChannel = ptr::null_mut();
    let status = unsafe { build(a, b, &mut handle) };
    assert_eq!(status, BgcStatus::Ok);
    assert!(!handle.is_null());
    handle
}

#[test]
fn capacity_matches_the_library() {
    let handle = make(bgc_channel_thermal, 0.5, 1.0);
    let mut bits = f64::NAN;
    let status = unsafe { bgc_channel_capacity(handle, 10.0, &mut bits) };
    assert_eq!(status, BgcStatus::Ok);
    let expected = holevo_capacity(&Channel::thermal(0.5, 1.0).unwrap(), 10.0).unwrap();
    assert_eq!(bits, expected);
    unsafe { bgc_channel_free(handle) };
}

#[test]
fn decompose_and_canonical_report_the_split() {
    let handle = make(bgc_channel_amplifier, 2.0, 1.0);

    let (mut tau, mut y, mut conj) = (0.0, 0.0, true);
    assert_eq!(
        unsafe { bgc_channel_canonical(handle, &mut tau, &mut y, &mut conj) },
        BgcStatus::Ok
    );
    assert_eq!(tau, 2.0);
    assert_eq!(y, 3.0);
    assert!(!conj);

    let (mut eta0, mut kappa0, mut conj0) = (0.0, 0.0, true);
    assert_eq!(
        unsafe { bgc_channel_decompose(handle, &mut eta0, &mut kappa0, &mut conj0) },
        BgcStatus::Ok
    );
    assert!((eta0 - 2.0 / 3.0).abs() <= 1e-15);
    assert!((kappa0 - 3.0).abs() <= 1e-15);
    assert!(!conj0);
    unsafe { bgc_channel_free(handle) };
}

#[test]
fn entanglement_breaking_flag_follows_the_noise() {
    let contra = make(bgc_channel_contra_amplifier, 2.0, 0.0);
    let mut breaking = false;
    assert_eq!(
        unsafe { bgc_channel_is_entanglement_breaking(contra, &mut breaking) },
        BgcStatus::Ok
    );
    assert!(breaking, "phase-conjugating maps destroy entanglement");
    unsafe { bgc_channel_free(contra) };

    let loss = make(bgc_channel_thermal, 0.9, 0.0);
    let mut breaking = true;
    assert_eq!(
        unsafe { bgc_channel_is_entanglement_breaking(loss, &mut breaking) },
        BgcStatus::Ok
    );
    assert!(!breaking, "mild pure loss preserves entanglement");
    unsafe { bgc_channel_free(loss) };
}

#[test]
fn min_output_entropy_matches_the_closed_form() {
    let handle = make(bgc_channel_amplifier, 1.5, 0.0);
    let mut bits = f64::NAN;
    assert_eq!(unsafe { bgc_channel_min_output_entropy(handle, &mut bits) }, BgcStatus::Ok);
    assert_eq!(bits, g(0.5));
    unsafe { bgc_channel_free(handle) };
}

#[test]
fn formation_entanglement_ignores_the_environment() {
    for n_env in [0.0, 1.0, 5.0] {
        let mut ebits = f64::NAN;
        assert_eq!(
            unsafe { bgc_entanglement_of_formation(2.0, n_env, &mut ebits) },
            BgcStatus::Ok
        );
        assert!((ebits - 2.0).abs() <= 1e-12);
    }
}

#[test]
fn bad_parameters_leave_the_out_pointer_alone() {
    let mut handle: *mut BgcChannel = ptr::null_mut();
    let status = unsafe { bgc_channel_thermal(1.5, 0.0, &mut handle) };
    assert_eq!(status, BgcStatus::InvalidParameter);
    assert!(handle.is_null());

    let status = unsafe { bgc_channel_amplifier(0.5, 0.0, &mut handle) };
    assert_eq!(status, BgcStatus::InvalidParameter);
    assert!(handle.is_null());
}

#[test]
fn null_pointers_are_reported_not_dereferenced() {
    assert_eq!(unsafe { bgc_channel_thermal(0.5, 0.0, ptr::null_mut()) }, BgcStatus::NullPointer);

    let mut bits = 0.0;
    assert_eq!(
        unsafe { bgc_channel_capacity(ptr::null(), 1.0, &mut bits) },
        BgcStatus::NullPointer
    );
    let handle = make(bgc_channel_thermal, 0.5, 0.0);
    assert_eq!(unsafe { bgc_channel_capacity(handle, 1.0, ptr::null_mut()) }, BgcStatus::NullPointer);
    unsafe { bgc_channel_free(handle) };
    unsafe { bgc_channel_free(ptr::null_mut()) };
}

#[test]
fn g_and_status_names_are_plain_functions() {
    assert_eq!(bgc_g(1.0), 2.0);
    assert_eq!(bgc_g(0.0), 0.0);
    let name = unsafe { CStr::from_ptr(bgc_status_name(BgcStatus::Ok)) };
    assert_eq!(name.to_str().unwrap(), "ok");
    let name = unsafe { CStr::from_ptr(bgc_status_name(BgcStatus::Numerical)) };
    assert_eq!(name.to_str().unwrap(), "numerical failure");
}

#[test]
fn generated_header_declares_the_api() {
    let header = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("include/bgc.h");
    let text = std::fs::read_to_string(header).expect("header should be generated at build time");
    assert!(text.contains("#ifndef BGC_H"));
    assert!(text.contains("typedef struct BgcChannel BgcChannel;"));
    for symbol in [
        "bgc_channel_thermal",
        "bgc_channel_additive_noise",
        "bgc_channel_amplifier",
        "bgc_channel_contra_amplifier",
        "bgc_channel_free",
        "bgc_channel_capacity",
        "bgc_channel_min_output_entropy",
        "bgc_channel_canonical",
        "bgc_channel_decompose",
        "bgc_channel_is_entanglement_breaking",
        "bgc_entanglement_of_formation",
        "bgc_g",
        "bgc_status_name",
    ] {
        assert!(text.contains(symbol), "header lacks {symbol}");
    }
}
