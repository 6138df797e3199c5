use std::ffi::{CStr, CString};
use std::ptr;

use slowlight_ffi::*;

fn last_error() -> String {
    unsafe { CStr::from_ptr(sl_last_error_message()) }.to_string_lossy().into_owned()
}

const TRAP_DOC: &str = "\
species.mass = 3.818e-26
species.wavelength = 589e-9
species.gamma_total_hz = 9.79e6
fields.omega_coupling_hz = 5.4824e6
geometry.kind = trap
geometry.nu_r_hz = 70
geometry.nu_z_hz = 20
geometry.atom_count = 1e6
interaction.scattering_length = 2.75e-9
";

#[test]
fn version_is_the_crate_version() {
    let v = unsafe { CStr::from_ptr(sl_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}

#[test]
fn polylog_and_error_reporting() {
    let mut out = 0.0;
    assert_eq!(unsafe { sl_polylog(1.5, 1.0, &mut out) }, SlStatus::Ok);
    assert!((out - 2.612_375_348_685_488).abs() < 1e-14);
    assert_eq!(last_error(), "");

    let mut untouched = -7.0;
    assert_eq!(unsafe { sl_polylog(1.0, 1.0, &mut untouched) }, SlStatus::Divergence);
    assert_eq!(untouched, -7.0);
    assert!(last_error().contains("diverges"));

    assert_eq!(unsafe { sl_polylog(1.5, 2.0, &mut out) }, SlStatus::InvalidArgument);
    assert_eq!(unsafe { sl_polylog(1.5, 0.5, ptr::null_mut()) }, SlStatus::NullPointer);
}

#[test]
fn faddeeva_modes() {
    let (mut re, mut im) = (0.0, 0.0);
    assert_eq!(unsafe { sl_faddeeva_w(1.0, 1.0, SL_MODE_EXACT, 0.0, &mut re, &mut im) }, SlStatus::Ok);
    assert!((re - 0.304_744_205_256_912_54).abs() < 1e-13);
    assert!((im - 0.208_218_938_202_831_6).abs() < 1e-13);
    assert_eq!(unsafe { sl_faddeeva_w(0.5, 0.5, SL_MODE_ASYMPTOTIC, 0.0, &mut re, &mut im) }, SlStatus::Domain);
    assert_eq!(unsafe { sl_faddeeva_w(0.5, 0.5, 9, 0.0, &mut re, &mut im) }, SlStatus::InvalidArgument);
    assert_eq!(unsafe { sl_faddeeva_w(0.5, 0.5, SL_MODE_AUTO, 10.0, &mut re, &mut im) }, SlStatus::Ok);
}

#[test]
fn config_lifecycle_and_tf_report() {
    let text = CString::new(TRAP_DOC).unwrap();
    let mut cfg = ptr::null_mut();
    assert_eq!(unsafe { sl_config_load(text.as_ptr(), &mut cfg) }, SlStatus::Ok);
    assert!(!cfg.is_null());

    let mut report = SlTfReport::default();
    assert_eq!(unsafe { sl_tf_report(cfg, &mut report) }, SlStatus::Ok);
    assert!((report.r_tf_z / 47.4e-6 - 1.0).abs() < 0.02);
    assert!((report.vg_tf / report.vg_ideal - report.n_ideal / report.n_tf).abs() < 1e-9);

    let mut tc = 0.0;
    assert_eq!(unsafe { sl_critical_temperature(cfg, &mut tc) }, SlStatus::Ok);
    assert!(tc > 0.0);

    assert_eq!(unsafe { sl_config_set_omega_coupling(cfg, -1.0) }, SlStatus::InvalidConfig);
    unsafe { sl_config_free(cfg) };
    unsafe { sl_config_free(ptr::null_mut()) };
}

#[test]
fn bad_config_text() {
    let text = CString::new("species.mass = heavy\n").unwrap();
    let mut cfg = ptr::null_mut();
    assert_eq!(unsafe { sl_config_load(text.as_ptr(), &mut cfg) }, SlStatus::InvalidConfig);
    assert!(cfg.is_null());
    assert!(last_error().contains("species.mass"));
    assert_eq!(unsafe { sl_config_load(ptr::null(), &mut cfg) }, SlStatus::NullPointer);
}

#[test]
fn trap_delay_matches_group_velocity() {
    let cfg = sl_config_sodium(1);
    let mut tc = 0.0;
    assert_eq!(unsafe { sl_critical_temperature(cfg, &mut tc) }, SlStatus::Ok);
    let pin = SlPinhole {
        radius_m: 15e-6,
        thermal: 0,
        path_half_length_m: 0.0,
    };
    let mut d = SlDelay::default();
    assert_eq!(unsafe { sl_mean_delay(cfg, 1.5 * tc, &pin, SL_FC_PAPER, SL_MODE_EXACT, &mut d) }, SlStatus::Ok);
    assert_eq!(d.below_tc, 0);
    let mut v = 0.0;
    assert_eq!(unsafe { sl_group_velocity(cfg, 1.5 * tc, &pin, SL_FC_PAPER, SL_MODE_EXACT, &mut v) }, SlStatus::Ok);
    assert_eq!(v, d.group_velocity_m_s);
    assert_eq!(unsafe { sl_group_velocity(cfg, 1.5 * tc, ptr::null(), SL_FC_PAPER, SL_MODE_EXACT, &mut v) }, SlStatus::NullPointer);

    let mut resp = SlResponse::default();
    assert_eq!(unsafe { sl_chi_trap_local(cfg, 1.5 * tc, 0.0, 0.0, SL_MODE_EXACT, &mut resp) }, SlStatus::Ok);
    assert!(resp.chi_im > 0.0);
    assert_eq!(unsafe { sl_chi_box(cfg, 1.5 * tc, SL_MODE_EXACT, &mut resp) }, SlStatus::InvalidArgument);
    unsafe { sl_config_free(cfg) };
}

#[test]
fn box_response_and_fugacity() {
    let cfg = sl_config_sodium(0);
    let mut tc = 0.0;
    assert_eq!(unsafe { sl_critical_temperature(cfg, &mut tc) }, SlStatus::Ok);
    let mut f = 0.0;
    assert_eq!(unsafe { sl_fugacity(cfg, 0.5 * tc, &mut f) }, SlStatus::Ok);
    assert_eq!(f, 1.0);
    assert_eq!(unsafe { sl_fugacity(cfg, 2.0 * tc, &mut f) }, SlStatus::Ok);
    assert!(f > 0.0 && f < 1.0);
    let mut resp = SlResponse::default();
    assert_eq!(unsafe { sl_chi_box(cfg, 2.0 * tc, SL_MODE_EXACT, &mut resp) }, SlStatus::Ok);
    assert!(resp.chi_im > 0.0);
    assert_eq!(unsafe { sl_chi_box(cfg, -1.0, SL_MODE_EXACT, &mut resp) }, SlStatus::InvalidArgument);
    assert_eq!(unsafe { sl_chi_box(ptr::null(), 1e-7, SL_MODE_EXACT, &mut resp) }, SlStatus::NullPointer);
    let mut v = 0.0;
    assert_eq!(unsafe { sl_group_velocity(cfg, 2.0 * tc, ptr::null(), 0, SL_MODE_EXACT, &mut v) }, SlStatus::Ok);
    assert!(v > 0.0 && v < 299_792_458.0);
    unsafe { sl_config_free(cfg) };
}

#[test]
fn header_declares_every_entry_point() {
    let header = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/slowlight.h")).unwrap();
    for name in [
        "sl_version",
        "sl_last_error_message",
        "sl_config_load",
        "sl_config_sodium",
        "sl_config_free",
        "sl_polylog",
        "sl_faddeeva_w",
        "sl_critical_temperature",
        "sl_fugacity",
        "sl_chi_box",
        "sl_chi_trap_local",
        "sl_mean_delay",
        "sl_group_velocity",
        "sl_tf_report",
        "typedef struct SlConfig SlConfig",
        "SL_STATUS_OK = 0",
    ] {
        assert!(header.contains(name), "{name} missing from header");
    }
}

#[test]
fn header_is_valid_c() {
    let header = concat!(env!("CARGO_MANIFEST_DIR"), "/include/slowlight.h");
    match std::process::Command::new("cc").args(["-fsyntax-only", "-Wall", "-Werror", "-x", "c", header]).output() {
        Ok(out) => assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr)),
        Err(_) => eprintln!("no C compiler found; header syntax not checked"),
    }
}
