//! C ABI for the slowlight library.
//!
//! Every function returns an `SlStatus`; results come back through out
//! pointers, which are written only on success. After a failure,
//! `sl_last_error_message` describes it until the next call on the same
//! thread. Panics never cross the boundary.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use num_complex::Complex64;
use slowlight::box_gas::{box_thermo, chi_box, tc_box};
use slowlight::doppler::SeriesMode;
use slowlight::eit::{group_velocity_from_response, ComplexResponse};
use slowlight::params::{load_config, ExperimentConfig, GeometryKind};
use slowlight::specfun::{faddeeva_w, polylog, FaddeevaMode};
use slowlight::tf_model::tf_report;
use slowlight::trap_gas::{chi_trap_local, mean_delay, tc_trap, trap_thermo, FcMode, PinholeSpec};
use slowlight::Error;

/// Result of every call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SlStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    InvalidConfig = 3,
    Pole = 4,
    Domain = 5,
    Divergence = 6,
    SeriesCap = 7,
    Singular = 8,
    UnphysicalDispersion = 9,
    Io = 10,
    Panic = 11,
}

/// Full Faddeeva evaluation in every term of a series.
pub const SL_MODE_EXACT: u32 = 0;
/// Two-term large-argument expansion.
pub const SL_MODE_ASYMPTOTIC: u32 = 1;
/// Faddeeva only: asymptotic at and beyond a radius, exact inside.
pub const SL_MODE_AUTO: u32 = 2;

/// Condensate pinhole factor 2 / (pi R^2).
pub const SL_FC_PAPER: u32 = 0;
/// Condensate pinhole factor from the Gaussian integral.
pub const SL_FC_EXACT: u32 = 1;

/// Opaque experimental configuration.
pub struct SlConfig {
    inner: ExperimentConfig,
}

/// A susceptibility and its derivative with respect to the probe angular frequency.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct SlResponse {
    pub chi_re: f64,
    pub chi_im: f64,
    pub dchi_domega_re: f64,
    pub dchi_domega_im: f64,
}

/// Pinhole for trap delays. `thermal != 0` ignores `radius_m`;
/// `path_half_length_m <= 0` integrates the whole axis.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct SlPinhole {
    pub radius_m: f64,
    pub thermal: i32,
    pub path_half_length_m: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct SlDelay {
    pub pinhole_radius_m: f64,
    pub mean_delay_s: f64,
    pub cloud_size_m: f64,
    pub group_velocity_m_s: f64,
    /// 1 below Tc, 0 at or above.
    pub below_tc: i32,
}

/// Zero-temperature estimates, SI units.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct SlTfReport {
    pub a0_r: f64,
    pub a0_z: f64,
    pub n_ideal: f64,
    pub vg_ideal: f64,
    pub mu: f64,
    pub r_tf_r: f64,
    pub r_tf_z: f64,
    pub n_tf: f64,
    pub vg_tf: f64,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_last_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(e: &Error) -> SlStatus {
    match e {
        Error::Config(_) => SlStatus::InvalidConfig,
        Error::InvalidArgument { .. } => SlStatus::InvalidArgument,
        Error::Pole(_) => SlStatus::Pole,
        Error::Domain(_) => SlStatus::Domain,
        Error::Divergence(_) => SlStatus::Divergence,
        Error::SeriesCap { .. } => SlStatus::SeriesCap,
        Error::Singular(_) => SlStatus::Singular,
        Error::UnphysicalDispersion(_) => SlStatus::UnphysicalDispersion,
        Error::AtTemperature { source, .. } => status_of(source),
        Error::Io(_) => SlStatus::Io,
    }
}

/// Failure of the boundary itself, before the library is reached.
struct Boundary(SlStatus, String);

impl From<Error> for Boundary {
    fn from(e: Error) -> Self {
        Boundary(status_of(&e), e.to_string())
    }
}

fn guard(f: impl FnOnce() -> Result<(), Boundary>) -> SlStatus {
    set_last_error("");
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => SlStatus::Ok,
        Ok(Err(Boundary(status, msg))) => {
            set_last_error(&msg);
            status
        }
        Err(_) => {
            set_last_error("internal panic");
            SlStatus::Panic
        }
    }
}

fn null(name: &str) -> Boundary {
    Boundary(SlStatus::NullPointer, format!("`{name}` is null"))
}

/// # Safety
/// `p` is null or valid for reads.
unsafe fn config<'a>(p: *const SlConfig) -> Result<&'a ExperimentConfig, Boundary> {
    p.as_ref().map(|c| &c.inner).ok_or_else(|| null("config"))
}

/// # Safety
/// `p` is null or valid for writes.
unsafe fn write<T>(p: *mut T, name: &str, value: T) -> Result<(), Boundary> {
    if p.is_null() {
        return Err(null(name));
    }
    p.write(value);
    Ok(())
}

fn series_mode(mode: u32) -> Result<SeriesMode, Boundary> {
    match mode {
        SL_MODE_EXACT => Ok(SeriesMode::Exact),
        SL_MODE_ASYMPTOTIC => Ok(SeriesMode::Asymptotic),
        other => Err(Boundary(SlStatus::InvalidArgument, format!("unknown series mode {other}"))),
    }
}

fn fc_mode(mode: u32) -> Result<FcMode, Boundary> {
    match mode {
        SL_FC_PAPER => Ok(FcMode::PaperApprox),
        SL_FC_EXACT => Ok(FcMode::Exact),
        other => Err(Boundary(SlStatus::InvalidArgument, format!("unknown F_C mode {other}"))),
    }
}

fn response(r: ComplexResponse) -> SlResponse {
    SlResponse {
        chi_re: r.chi.re,
        chi_im: r.chi.im,
        dchi_domega_re: r.dchi_domega.re,
        dchi_domega_im: r.dchi_domega.im,
    }
}

fn pinhole(p: &SlPinhole) -> PinholeSpec {
    let spec = if p.thermal != 0 {
        PinholeSpec::thermal()
    } else {
        PinholeSpec::fixed(p.radius_m)
    };
    if p.path_half_length_m > 0.0 {
        spec.with_path_half_length(p.path_half_length_m)
    } else {
        spec
    }
}

/// Version string of the library; static, never free it.
#[no_mangle]
pub extern "C" fn sl_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Message of the last failure on this thread, empty after a success.
/// Valid until the next call on the same thread; never free it.
#[no_mangle]
pub extern "C" fn sl_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Parses a configuration document into a new handle.
///
/// # Safety
/// `text` is a NUL-terminated string; `out` is valid for writes.
#[no_mangle]
pub unsafe extern "C" fn sl_config_load(text: *const c_char, out: *mut *mut SlConfig) -> SlStatus {
    guard(|| {
        if text.is_null() {
            return Err(null("text"));
        }
        let s = CStr::from_ptr(text)
            .to_str()
            .map_err(|_| Boundary(SlStatus::InvalidArgument, "configuration is not UTF-8".into()))?;
        let inner = load_config(s)?;
        write(out, "out", Box::into_raw(Box::new(SlConfig { inner })))
    })
}

/// Handle with the built-in sodium trap (`trap != 0`) or box configuration.
#[no_mangle]
pub extern "C" fn sl_config_sodium(trap: i32) -> *mut SlConfig {
    let inner = if trap != 0 {
        ExperimentConfig::sodium_trap()
    } else {
        ExperimentConfig::sodium_box()
    };
    Box::into_raw(Box::new(SlConfig { inner }))
}

/// Releases a handle; null is ignored.
///
/// # Safety
/// `cfg` is null or came from this library and was not freed before.
#[no_mangle]
pub unsafe extern "C" fn sl_config_free(cfg: *mut SlConfig) {
    if !cfg.is_null() {
        drop(Box::from_raw(cfg));
    }
}

/// Sets the coupling Rabi frequency in rad/s.
///
/// # Safety
/// `cfg` is null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn sl_config_set_omega_coupling(cfg: *mut SlConfig, omega_rad_s: f64) -> SlStatus {
    guard(|| {
        let c = cfg.as_mut().ok_or_else(|| null("config"))?;
        let mut next = c.inner;
        next.fields.omega_coupling = omega_rad_s;
        next.validate()?;
        c.inner = next;
        Ok(())
    })
}

/// g_nu(f) for 0 <= f <= 1.
///
/// # Safety
/// `out` is valid for writes.
#[no_mangle]
pub unsafe extern "C" fn sl_polylog(nu: f64, f: f64, out: *mut f64) -> SlStatus {
    guard(|| write(out, "out", polylog(nu, f)?))
}

/// Faddeeva function w(re + i im). `mode` is one of SL_MODE_*; `radius`
/// is used by SL_MODE_AUTO only.
///
/// # Safety
/// `out_re` and `out_im` are valid for writes.
#[no_mangle]
pub unsafe extern "C" fn sl_faddeeva_w(re: f64, im: f64, mode: u32, radius: f64, out_re: *mut f64, out_im: *mut f64) -> SlStatus {
    guard(|| {
        let m = match mode {
            SL_MODE_EXACT => FaddeevaMode::Exact,
            SL_MODE_ASYMPTOTIC => FaddeevaMode::Asymptotic,
            SL_MODE_AUTO => FaddeevaMode::Auto(radius),
            other => return Err(Boundary(SlStatus::InvalidArgument, format!("unknown mode {other}"))),
        };
        if out_re.is_null() || out_im.is_null() {
            return Err(null("out"));
        }
        let w = faddeeva_w(Complex64::new(re, im), m)?;
        write(out_re, "out_re", w.re)?;
        write(out_im, "out_im", w.im)
    })
}

/// Critical temperature of the configured geometry, K.
///
/// # Safety
/// `cfg` is a live handle or null; `out` is valid for writes.
#[no_mangle]
pub unsafe extern "C" fn sl_critical_temperature(cfg: *const SlConfig, out: *mut f64) -> SlStatus {
    guard(|| {
        let c = config(cfg)?;
        let t = match c.geometry.kind() {
            GeometryKind::Box => tc_box(&c.species, c.box_params()?.number_density)?,
            GeometryKind::Trap => tc_trap(c)?,
        };
        write(out, "out", t)
    })
}

/// Fugacity at temperature T (K); 1 at and below Tc.
///
/// # Safety
/// `cfg` is a live handle or null; `out` is valid for writes.
#[no_mangle]
pub unsafe extern "C" fn sl_fugacity(cfg: *const SlConfig, temperature: f64, out: *mut f64) -> SlStatus {
    guard(|| {
        let c = config(cfg)?;
        let f = match c.geometry.kind() {
            GeometryKind::Box => box_thermo(c, temperature)?.fugacity,
            GeometryKind::Trap => trap_thermo(c, temperature)?.fugacity,
        };
        write(out, "out", f.value())
    })
}

/// Box susceptibility at temperature T (K).
///
/// # Safety
/// `cfg` is a live handle or null; `out` is valid for writes.
#[no_mangle]
pub unsafe extern "C" fn sl_chi_box(cfg: *const SlConfig, temperature: f64, mode: u32, out: *mut SlResponse) -> SlStatus {
    guard(|| {
        let r = chi_box(config(cfg)?, temperature, series_mode(mode)?)?;
        write(out, "out", response(r))
    })
}

/// Local trap susceptibility at (r, z) in m.
///
/// # Safety
/// `cfg` is a live handle or null; `out` is valid for writes.
#[no_mangle]
pub unsafe extern "C" fn sl_chi_trap_local(
    cfg: *const SlConfig,
    temperature: f64,
    r: f64,
    z: f64,
    mode: u32,
    out: *mut SlResponse,
) -> SlStatus {
    guard(|| {
        let resp = chi_trap_local(config(cfg)?, temperature, r, z, series_mode(mode)?)?;
        write(out, "out", response(resp))
    })
}

/// Pinhole-averaged delay in the trap.
///
/// # Safety
/// `cfg` is a live handle or null; `pin` is valid for reads; `out` for writes.
#[no_mangle]
pub unsafe extern "C" fn sl_mean_delay(
    cfg: *const SlConfig,
    temperature: f64,
    pin: *const SlPinhole,
    fc: u32,
    mode: u32,
    out: *mut SlDelay,
) -> SlStatus {
    guard(|| {
        let c = config(cfg)?;
        let p = pin.as_ref().ok_or_else(|| null("pinhole"))?;
        let d = mean_delay(c, temperature, &pinhole(p), fc_mode(fc)?, series_mode(mode)?)?;
        write(
            out,
            "out",
            SlDelay {
                pinhole_radius_m: d.pinhole_radius,
                mean_delay_s: d.mean_delay,
                cloud_size_m: d.cloud_size,
                group_velocity_m_s: d.group_velocity,
                below_tc: i32::from(temperature < trap_thermo(c, temperature)?.t_c),
            },
        )
    })
}

/// Group velocity in m/s: from the dispersion for a box, as cloud size
/// over pinhole-averaged delay for a trap (`pin` may be null for a box).
///
/// # Safety
/// `cfg` is a live handle or null; `pin` is null or valid for reads; `out` for writes.
#[no_mangle]
pub unsafe extern "C" fn sl_group_velocity(
    cfg: *const SlConfig,
    temperature: f64,
    pin: *const SlPinhole,
    fc: u32,
    mode: u32,
    out: *mut f64,
) -> SlStatus {
    guard(|| {
        let c = config(cfg)?;
        let m = series_mode(mode)?;
        let v = match c.geometry.kind() {
            GeometryKind::Box => group_velocity_from_response(&chi_box(c, temperature, m)?, c.probe_frequency_rad_s())?,
            GeometryKind::Trap => {
                let p = pin.as_ref().ok_or_else(|| null("pinhole"))?;
                let d = mean_delay(c, temperature, &pinhole(p), fc_mode(fc)?, m)?;
                if !(d.mean_delay > 0.0) {
                    return Err(Boundary(
                        SlStatus::Domain,
                        format!("mean delay {:e} s is not positive", d.mean_delay),
                    ));
                }
                d.group_velocity
            }
        };
        write(out, "out", v)
    })
}

/// Zero-temperature ideal-gas and Thomas-Fermi estimates for a trap.
///
/// # Safety
/// `cfg` is a live handle or null; `out` is valid for writes.
#[no_mangle]
pub unsafe extern "C" fn sl_tf_report(cfg: *const SlConfig, out: *mut SlTfReport) -> SlStatus {
    guard(|| {
        let r = tf_report(config(cfg)?)?;
        write(
            out,
            "out",
            SlTfReport {
                a0_r: r.a0_r,
                a0_z: r.a0_z,
                n_ideal: r.n_ideal,
                vg_ideal: r.vg_ideal,
                mu: r.mu,
                r_tf_r: r.r_tf_r,
                r_tf_z: r.r_tf_z,
                n_tf: r.n_tf,
                vg_tf: r.vg_tf,
            },
        )
    })
}
