use super::polylog::polylog;
use crate::error::{Error, Result};
use crate::params::GeometryKind;

/// Fugacity f = exp(beta mu) of the ideal Bose gas, in [0, 1].
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Fugacity(f64);

impl Fugacity {
    pub const ONE: Fugacity = Fugacity(1.0);

    pub fn new(value: f64) -> Result<Self> {
        if (0.0..=1.0).contains(&value) {
            Ok(Fugacity(value))
        } else {
            Err(Error::invalid("fugacity", format!("must lie in [0, 1], got {value}")))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

/// Order of the Bose function fixing the density (box) or atom number (trap),
/// and the power of T/Tc on the right-hand side of the normalization.
fn normalization(kind: GeometryKind) -> (f64, f64) {
    match kind {
        GeometryKind::Box => (1.5, 1.5),
        GeometryKind::Trap => (3.0, 3.0),
    }
}

/// Solves g_nu(f) = g_nu(1) (Tc/T)^p by bisection; f = 1 at and below Tc.
///
/// Stops once the residual is within `tol` of the target (relative) or the
/// bracket can no longer be split.
pub fn fugacity_from_temperature(kind: GeometryKind, t_over_tc: f64, tol: f64) -> Result<Fugacity> {
    if !(t_over_tc > 0.0 && t_over_tc.is_finite()) {
        return Err(Error::invalid("t_over_tc", format!("must be positive, got {t_over_tc}")));
    }
    if t_over_tc <= 1.0 {
        return Ok(Fugacity::ONE);
    }
    let (nu, p) = normalization(kind);
    let target = polylog(nu, 1.0)? * t_over_tc.powf(-p);
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    loop {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let g = polylog(nu, mid)?;
        if (g - target).abs() <= tol * target {
            return Ok(Fugacity(mid));
        }
        if g < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let glo = polylog(nu, lo)?;
    let ghi = polylog(nu, hi)?;
    let best = if (glo - target).abs() <= (ghi - target).abs() { lo } else { hi };
    Ok(Fugacity(best))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn pinned_at_and_below_tc() {
        for kind in [GeometryKind::Box, GeometryKind::Trap] {
            assert_eq!(fugacity_from_temperature(kind, 1.0, 1e-14).unwrap(), Fugacity::ONE);
            assert_eq!(fugacity_from_temperature(kind, 0.3, 1e-14).unwrap(), Fugacity::ONE);
        }
    }

    #[test]
    fn rejects_non_positive_temperature() {
        assert!(fugacity_from_temperature(GeometryKind::Box, 0.0, 1e-14).is_err());
        assert!(fugacity_from_temperature(GeometryKind::Box, -1.0, 1e-14).is_err());
    }

    #[test]
    fn box_at_twice_tc() {
        // independent: bisect a brute-force partial sum (f < 1, tail negligible)
        let target = 2.612_375_348_685_488 * 2f64.powf(-1.5);
        let brute = |f: f64| -> f64 {
            let mut s = 0.0;
            for l in (1..=20_000).rev() {
                let l = l as f64;
                s += f.powf(l) / l.powf(1.5);
            }
            s
        };
        let (mut lo, mut hi) = (0.0, 1.0);
        for _ in 0..60 {
            let mid = 0.5 * (lo + hi);
            if brute(mid) < target {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let f = fugacity_from_temperature(GeometryKind::Box, 2.0, 1e-14).unwrap().value();
        assert!((f - lo).abs() < 1e-10, "{f} vs {lo}");
        assert!((polylog(1.5, f).unwrap() - 0.92362).abs() < 1e-5);
    }

    #[test]
    fn classical_limit_is_monotone() {
        let mut prev = 1.0;
        for t in [1.1, 1.5, 2.0, 4.0, 10.0, 100.0] {
            let f = fugacity_from_temperature(GeometryKind::Trap, t, 1e-14).unwrap().value();
            assert!(f < prev);
            prev = f;
        }
        assert!(prev < 1e-5);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(100))]
        #[test]
        fn round_trip(x in 1.0f64..10.0, trap in any::<bool>()) {
            prop_assume!(x > 1.0);
            let kind = if trap { GeometryKind::Trap } else { GeometryKind::Box };
            let (nu, p) = normalization(kind);
            let tol = 1e-14;
            let f = fugacity_from_temperature(kind, x, tol).unwrap().value();
            let target = polylog(nu, 1.0).unwrap() * x.powf(-p);
            let g = polylog(nu, f).unwrap();
            // f is only representable to an ulp, and near f = 1 dg/df diverges,
            // so allow what a few ulps of f move g by
            let ulps = (g - polylog(nu, f * (1.0 - 4.0 * f64::EPSILON)).unwrap()).abs();
            prop_assert!((g - target).abs() <= tol * target + ulps + 8.0 * f64::EPSILON * target,
                "x={} f={} g={} target={}", x, f, g, target);
        }
    }
}
