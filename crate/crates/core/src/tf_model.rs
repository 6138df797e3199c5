//! Zero-temperature estimates: the ideal-gas ground state against the
//! Thomas-Fermi cloud, each treated as a homogeneous ellipsoid, and the
//! group velocity v_g = hbar c Omega^2 / (8 pi omega n |d|^2) for each.

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::params::{AtomSpecies, ExperimentConfig, TrapParams};
use crate::units::{C_LIGHT, HBAR};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TfGeometry {
    /// J
    pub chemical_potential: f64,
    /// m
    pub r_tf_r: f64,
    pub r_tf_z: f64,
    /// rad/s
    pub nu_ho: f64,
    /// m
    pub a_ho: f64,
    pub scattering_length: f64,
}

impl TfGeometry {
    /// N over the ellipsoid volume 4 pi R_z R_r^2 / 3, in 1/m^3.
    pub fn homogeneous_density(&self, atom_count: f64) -> f64 {
        atom_count / ellipsoid_volume(self.r_tf_z, self.r_tf_r)
    }
}

/// Every quantity of the zero-temperature comparison, SI units throughout.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TfReport {
    /// m
    pub a0_r: f64,
    pub a0_z: f64,
    /// 1/m^3
    pub n_ideal: f64,
    /// m/s
    pub vg_ideal: f64,
    /// J
    pub mu: f64,
    /// m
    pub r_tf_r: f64,
    pub r_tf_z: f64,
    /// 1/m^3
    pub n_tf: f64,
    /// m/s
    pub vg_tf: f64,
}

fn positive(name: &'static str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::invalid(name, format!("must be positive, got {v}")))
    }
}

fn ellipsoid_volume(semi_z: f64, semi_r: f64) -> f64 {
    4.0 * PI * semi_z * semi_r * semi_r / 3.0
}

/// v_g = hbar c Omega^2 / (8 pi omega n |d_eg|^2), the lossless EIT group
/// velocity of a homogeneous medium. `dipole_sq` is hbar Gamma_ge chi0 (J m^3).
pub fn hau_group_velocity(omega: f64, rabi: f64, density: f64, dipole_sq: f64) -> Result<f64> {
    positive("omega", omega)?;
    positive("rabi", rabi)?;
    positive("density", density)?;
    positive("dipole_sq", dipole_sq)?;
    Ok(HBAR * C_LIGHT * rabi * rabi / (8.0 * PI * omega * density * dipole_sq))
}

fn check_trap(trap: &TrapParams) -> Result<()> {
    positive("nu_r", trap.nu_r)?;
    positive("nu_z", trap.nu_z)?;
    if !(trap.atom_count >= 1.0 && trap.atom_count.is_finite()) {
        return Err(Error::invalid("atom_count", format!("must be >= 1, got {}", trap.atom_count)));
    }
    Ok(())
}

/// N / (4 pi a0z a0r^2 / 3): every atom in the oscillator ground state.
pub fn ideal_t0_density(species: &AtomSpecies, trap: &TrapParams) -> Result<f64> {
    check_trap(trap)?;
    let m = species.mass_kg();
    let a_r = TrapParams::ground_state_size_m(m, trap.nu_r);
    let a_z = TrapParams::ground_state_size_m(m, trap.nu_z);
    Ok(trap.atom_count / ellipsoid_volume(a_z, a_r))
}

/// mu = (hbar nu_ho / 2)(15 N a_s / a_ho)^{2/5} and R_j = sqrt(2 mu / m nu_j^2).
pub fn tf_geometry(species: &AtomSpecies, trap: &TrapParams, scattering_length: f64) -> Result<TfGeometry> {
    check_trap(trap)?;
    positive("scattering_length", scattering_length)?;
    let m = species.mass_kg();
    let nu_ho = trap.nu_ho();
    let a_ho = TrapParams::ground_state_size_m(m, nu_ho);
    let mu = 0.5 * HBAR * nu_ho * (15.0 * trap.atom_count * scattering_length / a_ho).powf(0.4);
    let radius = |nu: f64| (2.0 * mu / (m * nu * nu)).sqrt();
    Ok(TfGeometry {
        chemical_potential: mu,
        r_tf_r: radius(trap.nu_r),
        r_tf_z: radius(trap.nu_z),
        nu_ho,
        a_ho,
        scattering_length,
    })
}

/// The full comparison for a trap configuration with a scattering length.
pub fn tf_report(config: &ExperimentConfig) -> Result<TfReport> {
    let trap = config.trap_params()?;
    let a_s = config
        .scattering_length
        .ok_or_else(|| Error::invalid("scattering_length", "the Thomas-Fermi estimate needs a scattering length"))?;
    let species = &config.species;
    let m = species.mass_kg();
    let geo = tf_geometry(species, &trap, a_s)?;
    let n_ideal = ideal_t0_density(species, &trap)?;
    let n_tf = geo.homogeneous_density(trap.atom_count);
    let omega = config.probe_frequency_rad_s();
    let rabi = config.fields.omega_coupling;
    let dipole_sq = species.dipole_sq_j_m3(config.fields.gamma_ge);
    Ok(TfReport {
        a0_r: TrapParams::ground_state_size_m(m, trap.nu_r),
        a0_z: TrapParams::ground_state_size_m(m, trap.nu_z),
        n_ideal,
        vg_ideal: hau_group_velocity(omega, rabi, n_ideal, dipole_sq)?,
        mu: geo.chemical_potential,
        r_tf_r: geo.r_tf_r,
        r_tf_z: geo.r_tf_z,
        n_tf,
        vg_tf: hau_group_velocity(omega, rabi, n_tf, dipole_sq)?,
    })
}
