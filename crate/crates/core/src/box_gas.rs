//! Ideal Bose gas in a box: thermodynamics, Doppler-averaged susceptibility
//! and group velocity.

use num_complex::Complex64;

use crate::doppler::{doppler_series, SeriesMode};
use crate::eit::{group_velocity_from_response, homogeneous_response, inverse_zeta, zeta, ComplexResponse};
use crate::error::{Error, Result};
use crate::params::{AtomSpecies, ExperimentConfig, GeometryKind};
use crate::specfun::{fugacity_from_temperature, Fugacity, G32_AT_ONE};
use crate::units::{HBAR, K_B};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoxThermo {
    /// K
    pub t_c: f64,
    /// Thermal Doppler width over Gamma_ge: sqrt(2 k_B T / m) k_g / Gamma_ge.
    pub a_param: f64,
    /// (2 k_g / Gamma_ge)(hbar/m)(n / g_{3/2}(1))^{1/3}, so that A = sqrt(pi T/Tc) A_c.
    pub a_c: f64,
    pub fugacity: Fugacity,
    pub condensate_fraction: f64,
}

impl BoxThermo {
    pub fn thermal_fraction(&self) -> f64 {
        1.0 - self.condensate_fraction
    }
}

/// k_B Tc = (2 pi hbar^2 / m)(n / g_{3/2}(1))^{2/3}.
pub fn tc_box(species: &AtomSpecies, number_density: f64) -> Result<f64> {
    if !(number_density > 0.0 && number_density.is_finite()) {
        return Err(Error::invalid("number_density", format!("must be positive, got {number_density}")));
    }
    let m = species.mass_kg();
    Ok(2.0 * std::f64::consts::PI * HBAR * HBAR / (m * K_B) * (number_density / G32_AT_ONE).powf(2.0 / 3.0))
}

/// sqrt(2 k_B T / m) k_g / Gamma_ge.
pub(crate) fn doppler_parameter(config: &ExperimentConfig, temperature: f64) -> f64 {
    (2.0 * K_B * temperature / config.species.mass_kg()).sqrt() * config.fields.k_g / config.fields.gamma_ge
}

fn check_temperature(temperature: f64, allow_zero: bool) -> Result<()> {
    let ok = if allow_zero { temperature >= 0.0 } else { temperature > 0.0 };
    if ok && temperature.is_finite() {
        Ok(())
    } else {
        Err(Error::invalid("temperature", format!("must be positive and finite, got {temperature}")))
    }
}

pub fn box_thermo(config: &ExperimentConfig, temperature: f64) -> Result<BoxThermo> {
    check_temperature(temperature, true)?;
    let n = config.box_params()?.number_density;
    let t_c = tc_box(&config.species, n)?;
    let t = temperature / t_c;
    let fugacity = if t == 0.0 {
        Fugacity::ONE
    } else {
        fugacity_from_temperature(GeometryKind::Box, t, config.numerics.bisection_tol)?
    };
    let m = config.species.mass_kg();
    let a_c = 2.0 * config.fields.k_g / config.fields.gamma_ge * (HBAR / m) * (n / G32_AT_ONE).cbrt();
    Ok(BoxThermo {
        t_c,
        a_param: doppler_parameter(config, temperature),
        a_c,
        fugacity,
        condensate_fraction: (1.0 - t.powf(1.5)).max(0.0),
    })
}

/// Susceptibility of the box gas at temperature T (K).
///
/// Thermal atoms: i n chi0 sqrt(pi) (T/Tc)^{3/2} / (g_{3/2}(1) A) D(f, 1, zeta/A).
/// Condensate: -n chi0 (1 - (T/Tc)^{3/2}) / zeta with no Doppler shift.
pub fn chi_box(config: &ExperimentConfig, temperature: f64, mode: SeriesMode) -> Result<ComplexResponse> {
    let th = box_thermo(config, temperature)?;
    let n = config.box_params()?.number_density;
    let n_chi0 = n * config.species.chi0_m3().0;
    let recoil = config.species.recoil_frequency_rad_s();
    let fields = &config.fields;

    let z = match zeta(fields, recoil) {
        Ok(z) => z,
        // on the dark resonance 1/zeta = 0 and every Doppler correction,
        // being higher order in 1/zeta, drops out
        Err(Error::Pole(_)) => return Ok(homogeneous_response(fields, recoil, n_chi0)),
        Err(e) => return Err(e),
    };

    let inv = inverse_zeta(fields, recoil);
    let condensate = ComplexResponse {
        chi: -n_chi0 * th.condensate_fraction * inv.value,
        dchi_domega: -n_chi0 * th.condensate_fraction * inv.d_domega,
    };
    if temperature == 0.0 {
        return Ok(condensate);
    }

    let t = temperature / th.t_c;
    let a = th.a_param;
    let prefactor = Complex64::new(0.0, n_chi0 * std::f64::consts::PI.sqrt() * t.powf(1.5) / (G32_AT_ONE * a));
    let rho = z.value / a;
    let (d, dd) = doppler_series(th.fugacity.value(), 1.0, rho, mode, config.numerics.series_rel_tol)?;
    let thermal = ComplexResponse {
        chi: prefactor * d,
        dchi_domega: prefactor * dd * z.d_domega / a,
    };
    Ok(thermal + condensate)
}

/// Box susceptibility with the full Faddeeva series.
pub fn chi_box_exact(config: &ExperimentConfig, temperature: f64) -> Result<ComplexResponse> {
    chi_box(config, temperature, SeriesMode::Exact)
}

/// Box susceptibility from the large-|zeta/A| expansion:
/// -n chi0/zeta [1 + (T/Tc)^{3/2} g_{5/2}(f)/g_{3/2}(1) A^2/(2 zeta^2)].
pub fn chi_box_asymptotic(config: &ExperimentConfig, temperature: f64) -> Result<ComplexResponse> {
    chi_box(config, temperature, SeriesMode::Asymptotic)
}

pub fn vg_box(config: &ExperimentConfig, temperature: f64, mode: SeriesMode) -> Result<f64> {
    let resp = chi_box(config, temperature, mode)?;
    group_velocity_from_response(&resp, config.probe_frequency_rad_s())
}
