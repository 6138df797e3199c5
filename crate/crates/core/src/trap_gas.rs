//! Ideal Bose gas in a cylindrically symmetric harmonic trap: semiclassical
//! local susceptibility, per-ray and pinhole-averaged delays, cloud size and
//! the resulting group velocity.
//!
//! The thermal cloud is handled through one Doppler sum. With
//! n0 = (m k_B T / 2 pi hbar^2)^{3/2} and P = i n0 chi0 sqrt(pi) / A,
//!
//!   local:   chi(r, z)         = P D(f e^{-beta V}, 1, zeta/A)
//!   column:  int dz chi        = P sqrt(2 pi k_B T / m nu_z^2) D(f e^{-beta m nu_r^2 r^2/2}, 3/2, zeta/A)
//!   pinhole: (1/pi R^2) int d^2r = column prefactor / c [D(f, 5/2) - D(f e^{-c}, 5/2)],
//!            c = beta m nu_r^2 R^2 / 2.
//!
//! A delay is (2 pi / c_light) Re[X + omega dX/domega] for the column X, which
//! is 1/v_g - 1/c integrated along the ray, so vacuum is already subtracted.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::box_gas::doppler_parameter;
use crate::doppler::{doppler_series, SeriesMode};
use crate::eit::{homogeneous_response, inverse_zeta, zeta, ComplexResponse, ZetaValue};
use crate::error::{Error, Result};
use crate::params::{ExperimentConfig, GeometryKind, TrapParams};
use crate::quad::{gauss_legendre, Quadrature};
use crate::specfun::{fugacity_from_temperature, polylog, Fugacity, G3_AT_ONE};
use crate::units::{C_LIGHT, HBAR, K_B};

/// k_B T / hbar nu and Gamma_ge / nu below this trigger a warning.
const SEMICLASSICAL_MARGIN: f64 = 10.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrapThermo {
    /// K
    pub t_c: f64,
    pub fugacity: Fugacity,
    /// 1 - (T/Tc)^3 below Tc, else 0.
    pub condensate_fraction: f64,
    /// Axial cloud size, m.
    pub d_z: f64,
    /// Radial thermal size sqrt(2 k_B T / m nu_r^2), m.
    pub d_r: f64,
    /// Ground-state sizes sqrt(hbar / m nu), m.
    pub a0_r: f64,
    pub a0_z: f64,
    /// Thermal Doppler width over Gamma_ge.
    pub a_param: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PinholeRadius {
    /// Radius in m.
    Fixed(f64),
    /// R = sqrt(k_B T / m nu_r^2), following the cloud.
    Thermal,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PinholeSpec {
    pub radius: PinholeRadius,
    /// Half the optical path through the cloud, m; `None` integrates the whole axis.
    pub path_half_length: Option<f64>,
}

impl PinholeSpec {
    pub fn fixed(radius_m: f64) -> Self {
        PinholeSpec {
            radius: PinholeRadius::Fixed(radius_m),
            path_half_length: None,
        }
    }

    pub fn thermal() -> Self {
        PinholeSpec {
            radius: PinholeRadius::Thermal,
            path_half_length: None,
        }
    }

    pub fn with_path_half_length(mut self, l: f64) -> Self {
        self.path_half_length = Some(l);
        self
    }

    pub fn validate(&self) -> Result<()> {
        if let PinholeRadius::Fixed(r) = self.radius {
            if !(r > 0.0 && r.is_finite()) {
                return Err(Error::invalid("pinhole_radius", format!("must be positive, got {r}")));
            }
        }
        if let Some(l) = self.path_half_length {
            if !(l > 0.0 && l.is_finite()) {
                return Err(Error::invalid("path_half_length", format!("must be positive, got {l}")));
            }
        }
        Ok(())
    }

    /// Radius in m at temperature T.
    pub fn radius_at(&self, config: &ExperimentConfig, temperature: f64) -> Result<f64> {
        match self.radius {
            PinholeRadius::Fixed(r) => Ok(r),
            PinholeRadius::Thermal => {
                let trap = config.trap_params()?;
                let r = (K_B * temperature / (config.species.mass_kg() * trap.nu_r * trap.nu_r)).sqrt();
                if r > 0.0 {
                    Ok(r)
                } else {
                    Err(Error::invalid("temperature", "a thermal pinhole needs T > 0"))
                }
            }
        }
    }
}

/// How the condensate contribution is averaged over the pinhole.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum FcMode {
    /// F_C = 2 / (pi R^2).
    #[default]
    PaperApprox,
    /// F_C = (1 - e^{-R^2/a0r^2}) erf(L/a0z) / (pi R^2).
    Exact,
}

impl std::str::FromStr for FcMode {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "paper" => Ok(FcMode::PaperApprox),
            "exact" => Ok(FcMode::Exact),
            other => Err(format!("expected `paper` or `exact`, got `{other}`")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    Above,
    Below,
}

impl Branch {
    pub fn as_str(self) -> &'static str {
        match self {
            Branch::Above => "above",
            Branch::Below => "below",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DelayResult {
    /// m
    pub pinhole_radius: f64,
    /// m, `None` for the whole axis.
    pub path_half_length: Option<f64>,
    /// s
    pub mean_delay: f64,
    /// m
    pub cloud_size: f64,
    /// cloud_size / mean_delay, m/s.
    pub group_velocity: f64,
    pub branch: Branch,
}

/// k_B Tc = hbar (nu_z nu_r^2)^{1/3} (N / g_3(1))^{1/3}.
pub fn tc_trap(config: &ExperimentConfig) -> Result<f64> {
    let trap = config.trap_params()?;
    Ok(tc_from_params(&trap))
}

fn tc_from_params(trap: &TrapParams) -> f64 {
    HBAR * trap.nu_ho() * (trap.atom_count / G3_AT_ONE).cbrt() / K_B
}

fn check_temperature(temperature: f64) -> Result<()> {
    if temperature >= 0.0 && temperature.is_finite() {
        Ok(())
    } else {
        Err(Error::invalid("temperature", format!("must be non-negative and finite, got {temperature}")))
    }
}

pub fn trap_thermo(config: &ExperimentConfig, temperature: f64) -> Result<TrapThermo> {
    check_temperature(temperature)?;
    let trap = config.trap_params()?;
    let m = config.species.mass_kg();
    let t_c = tc_from_params(&trap);
    let t = temperature / t_c;
    let fugacity = if t == 0.0 {
        Fugacity::ONE
    } else {
        fugacity_from_temperature(GeometryKind::Trap, t, config.numerics.bisection_tol)?
    };
    let a0_z = TrapParams::ground_state_size_m(m, trap.nu_z);
    Ok(TrapThermo {
        t_c,
        fugacity,
        condensate_fraction: (1.0 - t.powi(3)).max(0.0),
        d_z: cloud_size_inner(temperature, t, m, trap.nu_z, a0_z),
        d_r: (2.0 * K_B * temperature / (m * trap.nu_r * trap.nu_r)).sqrt(),
        a0_r: TrapParams::ground_state_size_m(m, trap.nu_r),
        a0_z,
        a_param: doppler_parameter(config, temperature),
    })
}

/// Above Tc sqrt(2 k_B T / m nu_z^2); below Tc
/// sqrt(2) [(T/Tc)^3 k_B T / m nu_z^2 + (1 - (T/Tc)^3) a0z^2]^{1/2}.
pub fn cloud_size(config: &ExperimentConfig, temperature: f64) -> Result<f64> {
    Ok(trap_thermo(config, temperature)?.d_z)
}

fn cloud_size_inner(temperature: f64, t: f64, m: f64, nu_z: f64, a0_z: f64) -> f64 {
    let thermal_sq = K_B * temperature / (m * nu_z * nu_z);
    if t >= 1.0 {
        (2.0 * thermal_sq).sqrt()
    } else {
        let t3 = t.powi(3);
        (2.0 * (t3 * thermal_sq + (1.0 - t3) * a0_z * a0_z)).sqrt()
    }
}

/// Conditions the semiclassical treatment relies on that this point violates.
pub fn semiclassical_warnings(config: &ExperimentConfig, temperature: f64) -> Result<Vec<String>> {
    let trap = config.trap_params()?;
    let nu = trap.nu_r.max(trap.nu_z);
    let mut out = Vec::new();
    let thermal = K_B * temperature / (HBAR * nu);
    if thermal < SEMICLASSICAL_MARGIN {
        out.push(format!("k_B T / hbar nu = {thermal:.3e} is not large"));
    }
    let width = config.fields.gamma_ge / nu;
    if width < SEMICLASSICAL_MARGIN {
        out.push(format!("Gamma_ge / nu = {width:.3e} is not large"));
    }
    Ok(out)
}

/// Everything that depends only on T, computed once per temperature.
struct Ctx<'a> {
    config: &'a ExperimentConfig,
    trap: TrapParams,
    th: TrapThermo,
    temperature: f64,
    chi0: f64,
    recoil: f64,
    /// Thermal quantum density n0 = (m k_B T / 2 pi hbar^2)^{3/2}.
    n0: f64,
    /// zeta, or `None` on the dark resonance.
    zeta: Option<ZetaValue>,
    inv: ZetaValue,
    mode: SeriesMode,
}

impl<'a> Ctx<'a> {
    fn new(config: &'a ExperimentConfig, temperature: f64, mode: SeriesMode) -> Result<Self> {
        let th = trap_thermo(config, temperature)?;
        let m = config.species.mass_kg();
        let recoil = config.species.recoil_frequency_rad_s();
        let zeta = match zeta(&config.fields, recoil) {
            Ok(z) => Some(z),
            Err(Error::Pole(_)) => None,
            Err(e) => return Err(e),
        };
        Ok(Ctx {
            config,
            trap: config.trap_params()?,
            th,
            temperature,
            chi0: config.species.chi0_m3().0,
            recoil,
            n0: (m * K_B * temperature / (2.0 * PI * HBAR * HBAR)).powf(1.5),
            zeta,
            inv: inverse_zeta(&config.fields, recoil),
            mode,
        })
    }

    fn beta_half_m(&self) -> f64 {
        self.config.species.mass_kg() / (2.0 * K_B * self.temperature)
    }

    fn fugacity(&self) -> f64 {
        self.th.fugacity.value()
    }

    /// weight * P * D(q, s, zeta/A), or the transparency limit
    /// weight * n0 g_{s+1/2}(q) (-chi0/zeta) on the dark resonance.
    fn thermal_sum(&self, q: f64, s: f64, weight: f64) -> Result<ComplexResponse> {
        if self.temperature == 0.0 || q == 0.0 || weight == 0.0 {
            return Ok(ComplexResponse::ZERO);
        }
        match self.zeta {
            None => {
                let density = self.n0 * polylog(s + 0.5, q)?;
                Ok(homogeneous_response(&self.config.fields, self.recoil, self.chi0 * density * weight))
            }
            Some(z) => {
                let a = self.th.a_param;
                let rho = z.value / a;
                let (d, dd) = doppler_series(q, s, rho, self.mode, self.config.numerics.series_rel_tol)?;
                let p = Complex64::new(0.0, weight * self.n0 * self.chi0 * PI.sqrt() / a);
                Ok(ComplexResponse {
                    chi: p * d,
                    dchi_domega: p * dd * z.d_domega / a,
                })
            }
        }
    }

    /// -chi0 N (1 - (T/Tc)^3) / zeta times a column or area weight (1/m^2 or 1/m^3).
    fn condensate(&self, weight: f64) -> ComplexResponse {
        let nc = self.trap.atom_count * self.th.condensate_fraction;
        ComplexResponse {
            chi: -self.chi0 * nc * weight * self.inv.value,
            dchi_domega: -self.chi0 * nc * weight * self.inv.d_domega,
        }
    }

    fn local(&self, r: f64, z: f64) -> Result<ComplexResponse> {
        let v = self.beta_half_m() * (self.trap.nu_r.powi(2) * r * r + self.trap.nu_z.powi(2) * z * z);
        let thermal = self.thermal_sum(self.fugacity() * (-v).exp(), 1.0, 1.0)?;
        let (ar, az) = (self.th.a0_r, self.th.a0_z);
        let phi2 = (-(r * r) / (ar * ar) - (z * z) / (az * az)).exp() / (PI.powf(1.5) * ar * ar * az);
        Ok(thermal + self.condensate(phi2))
    }

    /// Thermal column over the whole axis.
    fn thermal_column(&self, r: f64) -> Result<ComplexResponse> {
        if self.temperature == 0.0 {
            return Ok(ComplexResponse::ZERO);
        }
        let nu_z = self.trap.nu_z;
        let length = (2.0 * PI * K_B * self.temperature / (self.config.species.mass_kg() * nu_z * nu_z)).sqrt();
        let q = self.fugacity() * (-self.beta_half_m() * self.trap.nu_r.powi(2) * r * r).exp();
        self.thermal_sum(q, 1.5, length)
    }

    /// Condensate column over [-L, L].
    fn condensate_column(&self, r: f64, half_length: Option<f64>) -> ComplexResponse {
        let (ar, az) = (self.th.a0_r, self.th.a0_z);
        let axial = half_length.map_or(1.0, |l| libm::erf(l / az));
        self.condensate((-(r * r) / (ar * ar)).exp() / (PI * ar * ar) * axial)
    }

    fn probe_omega(&self) -> f64 {
        self.config.probe_frequency_rad_s()
    }

    fn delay_of(&self, column: &ComplexResponse) -> f64 {
        2.0 * PI / C_LIGHT * column.dispersion(self.probe_omega())
    }

    /// (2 pi / c) int_{-L}^{L} Re[chi + omega chi'] dz of the thermal cloud.
    fn thermal_delay_finite(&self, r: f64, half_length: f64) -> Result<f64> {
        if self.temperature == 0.0 {
            return Ok(0.0);
        }
        let omega = self.probe_omega();
        let q0 = self.fugacity() * (-self.beta_half_m() * self.trap.nu_r.powi(2) * r * r).exp();
        let kz = self.beta_half_m() * self.trap.nu_z.powi(2);
        let mut failure = None;
        let integrand = |z: f64| -> f64 {
            match self.thermal_sum(q0 * (-kz * z * z).exp(), 1.0, 1.0) {
                Ok(resp) => resp.dispersion(omega),
                Err(e) => {
                    failure.get_or_insert(e);
                    0.0
                }
            }
        };
        let half = Quadrature::new(self.config.numerics.quad_rel_tol).integrate(integrand, 0.0, half_length)?;
        if let Some(e) = failure {
            return Err(e);
        }
        Ok(2.0 * 2.0 * PI / C_LIGHT * half)
    }

    fn delay_at_radius(&self, r: f64, half_length: Option<f64>) -> Result<f64> {
        let thermal = match half_length {
            None => self.delay_of(&self.thermal_column(r)?),
            Some(l) => self.thermal_delay_finite(r, l)?,
        };
        Ok(thermal + self.delay_of(&self.condensate_column(r, half_length)))
    }

    /// Thermal pinhole average over the whole axis, in closed form.
    fn thermal_pinhole(&self, radius: f64) -> Result<ComplexResponse> {
        if self.temperature == 0.0 {
            return Ok(ComplexResponse::ZERO);
        }
        let m = self.config.species.mass_kg();
        let nu_z = self.trap.nu_z;
        let length = (2.0 * PI * K_B * self.temperature / (m * nu_z * nu_z)).sqrt();
        let c = self.beta_half_m() * self.trap.nu_r.powi(2) * radius * radius;
        let f = self.fugacity();
        let whole = self.thermal_sum(f, 2.5, length / c)?;
        let outside = self.thermal_sum(f * (-c).exp(), 2.5, length / c)?;
        Ok(whole - outside)
    }

    fn condensate_factor(&self, radius: f64, half_length: Option<f64>, fc_mode: FcMode) -> f64 {
        match fc_mode {
            FcMode::PaperApprox => 2.0 / (PI * radius * radius),
            FcMode::Exact => {
                let ar = self.th.a0_r;
                let axial = half_length.map_or(1.0, |l| libm::erf(l / self.th.a0_z));
                -(-(radius * radius) / (ar * ar)).exp_m1() * axial / (PI * radius * radius)
            }
        }
    }

    fn mean_delay(&self, pinhole: &PinholeSpec, fc_mode: FcMode) -> Result<DelayResult> {
        pinhole.validate()?;
        let radius = pinhole.radius_at(self.config, self.temperature)?;
        let l = pinhole.path_half_length;
        let thermal = match l {
            None => self.delay_of(&self.thermal_pinhole(radius)?),
            Some(l) => {
                // radial weight 2 r / R^2 on [0, R]
                let mut failure = None;
                let avg = gauss_legendre(
                    |r: f64| match self.thermal_delay_finite(r, l) {
                        Ok(d) => 2.0 * r / (radius * radius) * d,
                        Err(e) => {
                            failure.get_or_insert(e);
                            0.0
                        }
                    },
                    0.0,
                    radius,
                );
                if let Some(e) = failure {
                    return Err(e);
                }
                avg
            }
        };
        let condensate = self.delay_of(&self.condensate(self.condensate_factor(radius, l, fc_mode)));
        let mean_delay = thermal + condensate;
        let branch = if self.temperature < self.th.t_c { Branch::Below } else { Branch::Above };
        Ok(DelayResult {
            pinhole_radius: radius,
            path_half_length: l,
            mean_delay,
            cloud_size: self.th.d_z,
            group_velocity: self.th.d_z / mean_delay,
            branch,
        })
    }
}

/// Local susceptibility at radius r and axial position z (m), including
/// the condensate density N_0 |phi(r, z)|^2 below Tc.
pub fn chi_trap_local(config: &ExperimentConfig, temperature: f64, r: f64, z: f64, mode: SeriesMode) -> Result<ComplexResponse> {
    Ctx::new(config, temperature, mode)?.local(r, z)
}

/// Delay (s) of the ray at distance r from the axis, relative to vacuum.
/// `half_length = None` integrates the whole axis in closed form; a finite
/// L integrates 1/v_g - 1/c over [-L, L] numerically.
pub fn delay_at_radius(config: &ExperimentConfig, temperature: f64, r: f64, half_length: Option<f64>, mode: SeriesMode) -> Result<f64> {
    if !(r >= 0.0 && r.is_finite()) {
        return Err(Error::invalid("r", format!("must be non-negative, got {r}")));
    }
    if let Some(l) = half_length {
        if !(l > 0.0 && l.is_finite()) {
            return Err(Error::invalid("path_half_length", format!("must be positive, got {l}")));
        }
    }
    Ctx::new(config, temperature, mode)?.delay_at_radius(r, half_length)
}

/// Delay averaged uniformly over the pinhole, with the cloud size and the
/// group velocity D_z / delay.
pub fn mean_delay(
    config: &ExperimentConfig,
    temperature: f64,
    pinhole: &PinholeSpec,
    fc_mode: FcMode,
    mode: SeriesMode,
) -> Result<DelayResult> {
    for w in semiclassical_warnings(config, temperature)? {
        log::warn!("T = {temperature:e} K: semiclassical approximation questionable: {w}");
    }
    Ctx::new(config, temperature, mode)?.mean_delay(pinhole, fc_mode)
}

pub fn vg_trap(config: &ExperimentConfig, temperature: f64, pinhole: &PinholeSpec, fc_mode: FcMode, mode: SeriesMode) -> Result<f64> {
    let res = mean_delay(config, temperature, pinhole, fc_mode, mode)?;
    if !(res.mean_delay > 0.0) {
        return Err(Error::Domain(format!(
            "mean delay {:e} s is not positive, so there is no group velocity",
            res.mean_delay
        )));
    }
    Ok(res.group_velocity)
}

/// Whole-cloud delay (s) from the large-|zeta/A| expansion, for a pinhole
/// much wider than the cloud:
/// X = -(chi0/zeta)(N/pi R^2)(T/Tc)^3/g_3(1) [g_3(f) + g_4(f) A^2/(2 zeta^2)]
/// plus the condensate with F_C = 1/(pi R^2).
pub fn full_cloud_delay(config: &ExperimentConfig, temperature: f64, radius: f64) -> Result<f64> {
    let th = trap_thermo(config, temperature)?;
    let trap = config.trap_params()?;
    let recoil = config.species.recoil_frequency_rad_s();
    let inv = inverse_zeta(&config.fields, recoil);
    let chi0 = config.species.chi0_m3().0;
    let t3 = (temperature / th.t_c).powi(3);
    let f = th.fugacity.value();
    let area = PI * radius * radius;
    let k_th = chi0 * trap.atom_count / area * t3 / G3_AT_ONE;
    let c2 = 0.5 * th.a_param * th.a_param * polylog(4.0, f)?;
    let g3 = polylog(3.0, f)?;
    let iz = inv.value;
    let diz = inv.d_domega;
    let k_c = chi0 * trap.atom_count * th.condensate_fraction / area;
    let x = ComplexResponse {
        chi: -k_th * (g3 * iz + c2 * iz * iz * iz) - k_c * iz,
        dchi_domega: -k_th * (g3 * diz + 3.0 * c2 * iz * iz * diz) - k_c * diz,
    };
    Ok(2.0 * PI / C_LIGHT * x.dispersion(config.probe_frequency_rad_s()))
}
