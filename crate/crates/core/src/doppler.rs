//! The Doppler-averaged sum shared by the box and the trap,
//!
//!   D(q, s, rho) = sum_{l>=1} q^l / l^s w(sqrt(l) rho),
//!
//! and its derivative dD/drho = sum q^l / l^(s-1/2) w'(sqrt(l) rho).
//!
//! Exact mode sums terms with the full Faddeeva function until sqrt(l)|rho|
//! reaches `TAIL_RADIUS`, then folds the remaining terms into Bose functions
//! through the large-argument expansion of w, which is accurate to machine
//! precision there.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::specfun::{faddeeva_w_with_derivative, polylog, polylog_tail, FaddeevaMode};

/// sqrt(l)|rho| beyond which the tail is summed in closed form.
const TAIL_RADIUS: f64 = 8.0;
const TAIL_ORDERS: usize = 20;
/// Largest number of explicit terms before giving up.
pub const SERIES_CAP: usize = 1_000_000;
/// Minimum |rho| for the two-term expansion.
pub const ASYMPTOTIC_MIN_RHO: f64 = 5.0;

const FRAC_1_SQRT_PI: f64 = 0.564_189_583_547_756_3;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SeriesMode {
    /// Full Faddeeva function in every term.
    Exact,
    /// Two-term large-argument expansion of w, giving Bose functions directly.
    Asymptotic,
}

impl std::str::FromStr for SeriesMode {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "exact" => Ok(SeriesMode::Exact),
            "asymptotic" => Ok(SeriesMode::Asymptotic),
            other => Err(format!("expected `exact` or `asymptotic`, got `{other}`")),
        }
    }
}

/// (D, dD/drho).
pub fn doppler_series(q: f64, s: f64, rho: Complex64, mode: SeriesMode, rel_tol: f64) -> Result<(Complex64, Complex64)> {
    if !(0.0..=1.0).contains(&q) {
        return Err(Error::invalid("q", format!("must lie in [0, 1], got {q}")));
    }
    if rho.im <= 0.0 {
        return Err(Error::invalid("rho", format!("needs Im rho > 0, got {rho}")));
    }
    if q == 0.0 {
        return Ok((Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0)));
    }
    match mode {
        SeriesMode::Asymptotic => asymptotic(q, s, rho),
        SeriesMode::Exact => exact(q, s, rho, rel_tol),
    }
}

fn asymptotic(q: f64, s: f64, rho: Complex64) -> Result<(Complex64, Complex64)> {
    if rho.norm() < ASYMPTOTIC_MIN_RHO {
        return Err(Error::Domain(format!(
            "asymptotic Doppler series needs |zeta/A| >= {ASYMPTOTIC_MIN_RHO}, got |zeta/A| = {:e}",
            rho.norm()
        )));
    }
    let c = Complex64::new(0.0, FRAC_1_SQRT_PI);
    let g1 = polylog(s + 0.5, q)?;
    let g2 = polylog(s + 1.5, q)?;
    let inv = rho.inv();
    let inv2 = inv * inv;
    let d = c * inv * (g1 + 0.5 * g2 * inv2);
    let dd = -c * inv2 * (g1 + 1.5 * g2 * inv2);
    Ok((d, dd))
}

fn exact(q: f64, s: f64, rho: Complex64, rel_tol: f64) -> Result<(Complex64, Complex64)> {
    let r = rho.norm();
    let l0 = ((TAIL_RADIUS / r).powi(2)).ceil().max(1.0);
    let mut d = Complex64::new(0.0, 0.0);
    let mut dd = Complex64::new(0.0, 0.0);

    // explicit terms, stopping early if the geometric tail is negligible
    let mut l = 1usize;
    let mut ql = 1.0;
    while (l as f64) < l0 {
        if l > SERIES_CAP {
            return Err(Error::SeriesCap {
                cap: SERIES_CAP,
                context: format!("Doppler sum with q = {q}, |rho| = {r:e}"),
            });
        }
        ql *= q;
        let lf = l as f64;
        let sl = lf.sqrt();
        let (w, dw) = faddeeva_w_with_derivative(sl * rho, FaddeevaMode::Exact)?;
        let a = ql * lf.powf(-s);
        d += a * w;
        dd += a * sl * dw;
        // |w(y)| <= 1 in the upper half plane, so the rest is below
        // q^(l+1) / (1 - q) in D and sqrt-weighted likewise in dD
        if q < 1.0 {
            let tail = ql * q / (1.0 - q);
            if tail <= rel_tol * 1e-3 * d.norm() && tail * (lf + 1.0).sqrt() <= rel_tol * 1e-3 * dd.norm() {
                return Ok((d, dd));
            }
        }
        l += 1;
    }

    // tail: sum_{l>=l0} q^l/l^s w(sqrt(l) rho) with
    // w(y) = (i/sqrt(pi)) sum_k c_k y^(-2k-1),  c_k = (2k-1)!!/2^k
    let n_head = l - 1;
    let c = Complex64::new(0.0, FRAC_1_SQRT_PI);
    let inv = rho.inv();
    let inv2 = inv * inv;
    let mut ck = 1.0;
    let mut pow = inv; // rho^(-2k-1)
    let mut tail = Complex64::new(0.0, 0.0);
    let mut dtail = Complex64::new(0.0, 0.0);
    for k in 0..TAIL_ORDERS {
        let nu = s + k as f64 + 0.5;
        let rest = polylog_tail(nu, q, n_head)?;
        let term = ck * pow * rest;
        tail += term;
        dtail += -(2.0 * k as f64 + 1.0) * ck * pow * inv * rest;
        if term.norm() <= 1e-17 * (d + c * tail).norm() {
            break;
        }
        ck *= (2.0 * k as f64 + 1.0) / 2.0;
        pow *= inv2;
    }
    Ok((d + c * tail, dd + c * dtail))
}
