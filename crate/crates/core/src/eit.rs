//! Optical response of a single three-level Lambda atom: the complex
//! parameter zeta, the linear-response coherence, the group-velocity formula
//! and a dense steady-state solve of the full Bloch equations.
//!
//! Probe frequency enters every detuning with slope -1, so d/domega of
//! Delta_g0 and of Delta_g0 - Delta_r0 is -1.

use std::ops::{Add, Mul, Sub};

use nalgebra::{SMatrix, SVector};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::params::{AtomSpecies, FieldParams};
use crate::quad::QuadValue;
use crate::units::C_LIGHT;

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// Distance |Gamma_gr + i delta| (relative to Gamma_ge) below which zeta is
/// treated as sitting on its pole.
pub const POLE_GUARD: f64 = 1e-6;

/// A complex quantity and its derivative with respect to the probe angular
/// frequency (units: 1/(rad/s) times the quantity).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZetaValue {
    pub value: Complex64,
    pub d_domega: Complex64,
}

/// Susceptibility at the probe frequency and its frequency derivative.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComplexResponse {
    pub chi: Complex64,
    pub dchi_domega: Complex64,
}

impl ComplexResponse {
    pub const ZERO: ComplexResponse = ComplexResponse {
        chi: Complex64 { re: 0.0, im: 0.0 },
        dchi_domega: Complex64 { re: 0.0, im: 0.0 },
    };

    pub fn scale(self, s: Complex64) -> Self {
        ComplexResponse {
            chi: self.chi * s,
            dchi_domega: self.dchi_domega * s,
        }
    }

    /// Re(chi) + omega Re(dchi/domega): the group index minus one, over 2 pi.
    pub fn dispersion(&self, probe_omega: f64) -> f64 {
        self.chi.re + probe_omega * self.dchi_domega.re
    }
}

impl Add for ComplexResponse {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        ComplexResponse {
            chi: self.chi + o.chi,
            dchi_domega: self.dchi_domega + o.dchi_domega,
        }
    }
}

impl Sub for ComplexResponse {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        ComplexResponse {
            chi: self.chi - o.chi,
            dchi_domega: self.dchi_domega - o.dchi_domega,
        }
    }
}

impl Mul<f64> for ComplexResponse {
    type Output = Self;
    fn mul(self, s: f64) -> Self {
        ComplexResponse {
            chi: self.chi * s,
            dchi_domega: self.dchi_domega * s,
        }
    }
}

impl QuadValue for ComplexResponse {
    fn zero() -> Self {
        ComplexResponse::ZERO
    }
    fn magnitude(&self) -> f64 {
        self.chi.norm().max(self.dchi_domega.norm())
    }
}

fn has_pole(fields: &FieldParams) -> bool {
    fields.omega_coupling != 0.0
        && fields.gamma_gr.hypot(fields.two_photon_detuning()) <= POLE_GUARD * fields.gamma_ge
}

/// zeta = -(Delta_g0 + omega_R)/Gamma_ge + i + i Omega^2 / (4 Gamma_ge (Gamma_gr + i delta))
/// with delta = Delta_g0 - Delta_r0.
///
/// On two-photon resonance with Gamma_gr = 0 zeta diverges; use
/// [`inverse_zeta`] there.
pub fn zeta(fields: &FieldParams, recoil: f64) -> Result<ZetaValue> {
    let g = fields.gamma_ge;
    let omega2 = fields.omega_coupling * fields.omega_coupling;
    let mut value = Complex64::new(-(fields.detuning_g0 + recoil) / g, 1.0);
    let mut d_domega = Complex64::new(1.0 / g, 0.0);
    if omega2 != 0.0 {
        if has_pole(fields) {
            return Err(Error::Pole(format!(
                "Gamma_gr = {:e} rad/s and two-photon detuning {:e} rad/s are within {POLE_GUARD:e} Gamma_ge of the dark resonance",
                fields.gamma_gr,
                fields.two_photon_detuning()
            )));
        }
        let u = Complex64::new(fields.gamma_gr, fields.two_photon_detuning());
        value += I * omega2 / (4.0 * g * u);
        d_domega -= omega2 / (4.0 * g * u * u);
    }
    Ok(ZetaValue { value, d_domega })
}

/// 1/zeta and its frequency derivative, finite everywhere including the
/// dark resonance, where 1/zeta = 0 and d(1/zeta)/domega = -4 Gamma_ge / Omega^2.
pub fn inverse_zeta(fields: &FieldParams, recoil: f64) -> ZetaValue {
    let g = fields.gamma_ge;
    let dt = fields.detuning_g0 + recoil;
    if fields.omega_coupling == 0.0 {
        let z = Complex64::new(-dt / g, 1.0);
        let inv = z.inv();
        return ZetaValue {
            value: inv,
            d_domega: -inv * inv / g,
        };
    }
    let omega2 = fields.omega_coupling * fields.omega_coupling;
    // 1/zeta = Gamma_ge u / D,  D = (-dt + i Gamma_ge) u + i Omega^2/4
    let u = Complex64::new(fields.gamma_gr, fields.two_photon_detuning());
    let a = Complex64::new(-dt, g);
    let d = a * u + I * (0.25 * omega2);
    // du/domega = -i, da/domega = 1
    let dd = u - I * a;
    let value = g * u / d;
    let d_domega = g * (-I * d - u * dd) / (d * d);
    ZetaValue { value, d_domega }
}

/// Response -n chi0 / zeta of a homogeneous gas of atoms at rest, with
/// `n_chi0` = n chi0. Finite at the dark resonance.
pub fn homogeneous_response(fields: &FieldParams, recoil: f64, n_chi0: f64) -> ComplexResponse {
    let inv = inverse_zeta(fields, recoil);
    ComplexResponse {
        chi: -n_chi0 * inv.value,
        dchi_domega: -n_chi0 * inv.d_domega,
    }
}

/// First-order (in the probe Rabi frequency g) steady-state coherence rho_eg
/// for an atom seeing detunings Delta_g and Delta_r:
/// g/(2 Gamma_ge) / (Delta_g/Gamma_ge - i - i Omega^2/(4 Gamma_ge (Gamma_gr + i (Delta_g - Delta_r)))).
pub fn coherence_steady_state(
    fields: &FieldParams,
    probe_rabi: f64,
    detuning_g: f64,
    detuning_r: f64,
) -> Result<Complex64> {
    if probe_rabi >= 0.1 * fields.gamma_ge.max(fields.omega_coupling) {
        log::warn!(
            "probe Rabi frequency {probe_rabi:e} rad/s is not small against Gamma_ge or Omega; linear response is inaccurate"
        );
    }
    let local = FieldParams {
        detuning_g0: detuning_g,
        detuning_r0: detuning_r,
        ..*fields
    };
    let z = zeta(&local, 0.0)?;
    Ok(-probe_rabi / (2.0 * fields.gamma_ge) / z.value)
}

/// Density matrix of one momentum class in steady state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlochSteadyState {
    pub rho_gg: f64,
    pub rho_rr: f64,
    pub rho_ee: f64,
    pub rho_ge: Complex64,
    pub rho_re: Complex64,
    pub rho_gr: Complex64,
}

impl BlochSteadyState {
    pub fn trace(&self) -> f64 {
        self.rho_gg + self.rho_rr + self.rho_ee
    }

    pub fn rho_eg(&self) -> Complex64 {
        self.rho_ge.conj()
    }

    fn from_vector(x: &SVector<f64, 9>) -> Self {
        BlochSteadyState {
            rho_gg: x[0],
            rho_rr: x[1],
            rho_ee: x[2],
            rho_ge: Complex64::new(x[3], x[4]),
            rho_re: Complex64::new(x[5], x[6]),
            rho_gr: Complex64::new(x[7], x[8]),
        }
    }
}

type Mat9 = SMatrix<f64, 9, 9>;
type Vec9 = SVector<f64, 9>;

// Unknown ordering: gg, rr, ee, Re ge, Im ge, Re re, Im re, Re gr, Im gr.
const GG: usize = 0;
const RR: usize = 1;
const EE: usize = 2;
const GE: usize = 3;
const RE: usize = 5;
const GR: usize = 7;

/// Adds c * z to the complex equation for `row` (Re part at row, Im at row+1),
/// where z is the complex unknown stored at `col`, conjugated if asked.
fn add_complex(m: &mut Mat9, row: usize, col: usize, c: Complex64, conjugate: bool) {
    let s = if conjugate { -1.0 } else { 1.0 };
    // c (x + i s y) = (c.re x - s c.im y) + i (c.im x + s c.re y)
    m[(row, col)] += c.re;
    m[(row, col + 1)] -= s * c.im;
    m[(row + 1, col)] += c.im;
    m[(row + 1, col + 1)] += s * c.re;
}

/// Adds c * p to the complex equation for `row`, p a real population.
fn add_population(m: &mut Mat9, row: usize, col: usize, c: Complex64) {
    m[(row, col)] += c.re;
    m[(row + 1, col)] += c.im;
}

/// Generator split as M(g) = m0 + g m1, all rates divided by `scale`.
fn bloch_generator(
    fields: &FieldParams,
    gamma_g: f64,
    gamma_r: f64,
    detuning_g: f64,
    detuning_r: f64,
    scale: f64,
) -> (Mat9, Mat9) {
    let om = fields.omega_coupling / scale;
    let dg = detuning_g / scale;
    let dr = detuning_r / scale;
    let gge = fields.gamma_ge / scale;
    let gre = fields.gamma_re / scale;
    let ggr = fields.gamma_gr / scale;
    let gg = gamma_g / scale;
    let gr = gamma_r / scale;

    let mut m0 = Mat9::zeros();
    let mut m1 = Mat9::zeros();

    // populations
    m1[(GG, GE + 1)] += 1.0;
    m0[(GG, EE)] += gg;
    m0[(RR, RE + 1)] += om;
    m0[(RR, EE)] += gr;
    m0[(EE, EE)] -= gg + gr;
    m1[(EE, GE + 1)] -= 1.0;
    m0[(EE, RE + 1)] -= om;

    // rho_ge
    add_complex(&mut m0, GE, GE, Complex64::new(-gge, dg), false);
    add_population(&mut m1, GE, EE, Complex64::new(0.0, 0.5));
    add_population(&mut m1, GE, GG, Complex64::new(0.0, -0.5));
    add_complex(&mut m0, GE, GR, Complex64::new(0.0, -0.5 * om), false);

    // rho_re
    add_complex(&mut m0, RE, RE, Complex64::new(-gre, dr), false);
    add_population(&mut m0, RE, EE, Complex64::new(0.0, 0.5 * om));
    add_population(&mut m0, RE, RR, Complex64::new(0.0, -0.5 * om));
    add_complex(&mut m1, RE, GR, Complex64::new(0.0, -0.5), true);

    // rho_gr
    add_complex(&mut m0, GR, GR, Complex64::new(-ggr, dg - dr), false);
    add_complex(&mut m1, GR, RE, Complex64::new(0.0, 0.5), true);
    add_complex(&mut m0, GR, GE, Complex64::new(0.0, -0.5 * om), false);

    // the trace replaces the rho_gg equation
    for j in 0..9 {
        m0[(GG, j)] = 0.0;
        m1[(GG, j)] = 0.0;
    }
    m0[(GG, GG)] = 1.0;
    m0[(GG, RR)] = 1.0;
    m0[(GG, EE)] = 1.0;
    (m0, m1)
}

fn check_rates(species: &AtomSpecies, fields: &FieldParams) -> Result<()> {
    let rates = [
        species.gamma_g_rad_s(),
        species.gamma_r_rad_s(),
        fields.gamma_ge,
        fields.gamma_re,
        fields.gamma_gr,
        fields.omega_coupling,
    ];
    if rates.iter().any(|r| !r.is_finite()) {
        return Err(Error::invalid("fields", "all rates must be finite"));
    }
    if fields.gamma_ge <= 0.0 {
        return Err(Error::Singular("Gamma_ge must be positive".into()));
    }
    Ok(())
}

/// Steady state of the Bloch equations for one momentum class, solved as a
/// dense 9x9 linear system with the trace condition replacing one equation.
///
/// The excited state decays to |g> at gamma_g and to |r> at gamma_r, taken
/// from `species`.
pub fn bloch_steady_oracle(
    species: &AtomSpecies,
    fields: &FieldParams,
    probe_rabi: f64,
    detuning_g: f64,
    detuning_r: f64,
) -> Result<BlochSteadyState> {
    check_rates(species, fields)?;
    let scale = fields.gamma_ge;
    let (m0, m1) = bloch_generator(
        fields,
        species.gamma_g_rad_s(),
        species.gamma_r_rad_s(),
        detuning_g,
        detuning_r,
        scale,
    );
    let m = m0 + m1 * (probe_rabi / scale);
    let mut b = Vec9::zeros();
    b[GG] = 1.0;
    let x = m
        .lu()
        .solve(&b)
        .ok_or_else(|| Error::Singular("Bloch steady-state matrix is singular".into()))?;
    if x.iter().any(|v| !v.is_finite()) {
        return Err(Error::Singular("Bloch steady-state solution is not finite".into()));
    }
    Ok(BlochSteadyState::from_vector(&x))
}

/// Linear-response rho_eg / g from the Bloch system, extrapolated to g -> 0.
///
/// Solves for the deviation from the g = 0 state |g><g| at three probe
/// strengths h, h/2, h/4 and removes the g^2 and g^4 corrections by
/// Richardson extrapolation. Multiply by g for the coherence.
pub fn bloch_linear_coherence(
    species: &AtomSpecies,
    fields: &FieldParams,
    detuning_g: f64,
    detuning_r: f64,
) -> Result<Complex64> {
    check_rates(species, fields)?;
    if species.gamma_g_rad_s() <= 0.0 {
        return Err(Error::Singular(
            "gamma_g = 0 leaves the g = 0 steady state undetermined".into(),
        ));
    }
    let scale = fields.gamma_ge;
    let (m0, m1) = bloch_generator(
        fields,
        species.gamma_g_rad_s(),
        species.gamma_r_rad_s(),
        detuning_g,
        detuning_r,
        scale,
    );
    let mut x0 = Vec9::zeros();
    x0[GG] = 1.0;
    let drive = m1 * x0;
    // (m0 + h m1)(x0 + y) = b with m0 x0 = b  =>  (m0 + h m1) y = -h m1 x0
    let ratio = |h: f64| -> Result<Complex64> {
        let y = (m0 + m1 * h)
            .lu()
            .solve(&(-drive))
            .ok_or_else(|| Error::Singular("Bloch steady-state matrix is singular".into()))?;
        // y already carries one factor of h; solve returned y / h
        Ok(Complex64::new(y[GE], -y[GE + 1]))
    };
    let h = 1e-4;
    let f1 = ratio(h)?;
    let f2 = ratio(0.5 * h)?;
    let f4 = ratio(0.25 * h)?;
    let r1 = (4.0 * f2 - f1) / 3.0;
    let r2 = (4.0 * f4 - f2) / 3.0;
    // rates were scaled by Gamma_ge, so y/h is dimensionless per scaled g
    Ok((16.0 * r2 - r1) / 15.0 / scale)
}

/// v_g = c / (1 + 2 pi Re chi + 2 pi omega Re dchi/domega).
pub fn group_velocity_from_response(resp: &ComplexResponse, probe_omega: f64) -> Result<f64> {
    if resp.chi.norm() >= 0.1 {
        log::warn!(
            "|chi| = {:e} is not small; the group-velocity expansion is inaccurate",
            resp.chi.norm()
        );
    }
    let denom = 1.0 + 2.0 * std::f64::consts::PI * resp.dispersion(probe_omega);
    if !(denom > 0.0) {
        return Err(Error::UnphysicalDispersion(denom));
    }
    Ok(C_LIGHT / denom)
}
