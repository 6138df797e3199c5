//! Bose functions, the Faddeeva function and fugacity inversion.

mod faddeeva;
mod fugacity;
mod polylog;
mod zeta;

pub use faddeeva::{faddeeva_w, faddeeva_w_with_derivative, FaddeevaMode, ASYMPTOTIC_MIN_RADIUS};
pub use fugacity::{fugacity_from_temperature, Fugacity};
pub use polylog::{polylog, polylog_partial, polylog_tail};
pub use zeta::riemann_zeta;

/// g_{3/2}(1) = zeta(3/2).
pub const G32_AT_ONE: f64 = 2.612_375_348_685_488;
/// g_3(1) = zeta(3).
pub const G3_AT_ONE: f64 = 1.202_056_903_159_594_3;
