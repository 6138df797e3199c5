//! Physical constants and the few unit-carrying newtypes used at module
//! boundaries.
//!
//! Mechanics is SI throughout. The optical response follows the Gaussian
//! convention for the susceptibility: `chi = n * chi0 * (...)` is a pure
//! number, `chi0` is a volume, and the group velocity carries the `2*pi`
//! factors of the Gaussian wave equation.

use std::ops::Mul;

/// Reduced Planck constant, J s.
pub const HBAR: f64 = 1.054_571_817e-34;
/// Boltzmann constant, J/K.
pub const K_B: f64 = 1.380_649e-23;
/// Speed of light in vacuum, m/s.
pub const C_LIGHT: f64 = 299_792_458.0;

pub const TWO_PI: f64 = 2.0 * std::f64::consts::PI;

/// Converts a frequency in Hz to an angular frequency in rad/s.
#[inline]
pub fn hz_to_rad(hz: f64) -> f64 {
    TWO_PI * hz
}

/// A volume in m^3.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct CubicMeters(pub f64);

/// A number density in 1/m^3.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct PerCubicMeter(pub f64);

impl PerCubicMeter {
    pub fn from_per_cm3(n: f64) -> Self {
        PerCubicMeter(n * 1e6)
    }

    pub fn per_cm3(self) -> f64 {
        self.0 * 1e-6
    }
}

/// `n * chi0` is the dimensionless expansion parameter of the response.
impl Mul<CubicMeters> for PerCubicMeter {
    type Output = f64;

    fn mul(self, rhs: CubicMeters) -> f64 {
        self.0 * rhs.0
    }
}

impl Mul<PerCubicMeter> for CubicMeters {
    type Output = f64;

    fn mul(self, rhs: PerCubicMeter) -> f64 {
        self.0 * rhs.0
    }
}
