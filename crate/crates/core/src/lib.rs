//! Electromagnetically induced transparency and slow light in an ideal Bose
//! gas, in a box or a harmonic trap, above and below the condensation point.

pub mod box_gas;
pub mod cli;
pub mod doppler;
pub mod eit;
pub mod error;
pub mod params;
pub mod quad;
pub mod specfun;
pub mod tf_model;
pub mod trap_gas;
pub mod units;

pub use error::{Error, Result};
