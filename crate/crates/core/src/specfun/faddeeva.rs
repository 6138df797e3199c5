//! The Faddeeva function w(z) = exp(-z^2) (1 + erf(i z)).
//!
//! Upper half plane: Weideman's rational expansion (N = 48) for |z| < 6 and
//! the Laplace continued fraction beyond. The lower half plane follows from
//! w(z) = 2 exp(-z^2) - w(-z).

use std::f64::consts::PI;
use std::sync::OnceLock;

use num_complex::Complex64;

use crate::error::{Error, Result};

const FRAC_1_SQRT_PI: f64 = 0.564_189_583_547_756_3;
const WEIDEMAN_N: usize = 48;
const CF_RADIUS: f64 = 6.0;
const CF_DEPTH: usize = 40;
/// Below this |y| the two-term expansion is refused.
pub const ASYMPTOTIC_MIN_RADIUS: f64 = 2.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FaddeevaMode {
    Exact,
    /// Two-term large-argument expansion i/(sqrt(pi) y) + i/(2 sqrt(pi) y^3).
    Asymptotic,
    /// Asymptotic for |y| >= the given radius (and Im y > 0), exact otherwise.
    Auto(f64),
}

/// w(y) in the requested mode.
pub fn faddeeva_w(y: Complex64, mode: FaddeevaMode) -> Result<Complex64> {
    Ok(faddeeva_w_with_derivative(y, mode)?.0)
}

/// (w(y), w'(y)).
pub fn faddeeva_w_with_derivative(y: Complex64, mode: FaddeevaMode) -> Result<(Complex64, Complex64)> {
    if !(y.re.is_finite() && y.im.is_finite()) {
        return Err(Error::invalid("y", format!("must be finite, got {y}")));
    }
    match mode {
        FaddeevaMode::Exact => Ok(exact(y)),
        FaddeevaMode::Asymptotic => asymptotic(y),
        FaddeevaMode::Auto(radius) => {
            if y.im > 0.0 && y.norm() >= radius {
                asymptotic(y)
            } else {
                Ok(exact(y))
            }
        }
    }
}

fn asymptotic(y: Complex64) -> Result<(Complex64, Complex64)> {
    let r = y.norm();
    if r < ASYMPTOTIC_MIN_RADIUS {
        return Err(Error::Domain(format!(
            "two-term expansion of w needs |y| >= {ASYMPTOTIC_MIN_RADIUS}, got |y| = {r}"
        )));
    }
    if y.im <= 0.0 {
        return Err(Error::Domain(format!(
            "two-term expansion of w needs Im y > 0, got y = {y}"
        )));
    }
    let c = Complex64::new(0.0, FRAC_1_SQRT_PI);
    let inv = y.inv();
    let inv2 = inv * inv;
    let w = c * inv * (1.0 + 0.5 * inv2);
    let dw = -c * inv2 * (1.0 + 1.5 * inv2);
    Ok((w, dw))
}

fn exact(z: Complex64) -> (Complex64, Complex64) {
    if z.im < 0.0 {
        // w(z) = 2 e^{-z^2} - w(-z);  w'(z) = -4 z e^{-z^2} + w'(-z)
        let (wm, dwm) = upper(-z);
        let g = (-z * z).exp();
        return (2.0 * g - wm, -4.0 * z * g + dwm);
    }
    upper(z)
}

fn upper(z: Complex64) -> (Complex64, Complex64) {
    let c = Complex64::new(0.0, FRAC_1_SQRT_PI);
    if z.re == 0.0 && z.im == 0.0 {
        return (Complex64::new(1.0, 0.0), 2.0 * c);
    }
    if z.norm() >= CF_RADIUS {
        // w = (i/sqrt(pi)) / (z - r), r = (1/2)/(z - (2/2)/(z - (3/2)/(z - ...)))
        let mut r = Complex64::new(0.0, 0.0);
        for n in (1..=CF_DEPTH).rev() {
            r = (0.5 * n as f64) / (z - r);
        }
        let d = (z - r).inv();
        let w = c * d;
        // -2 z w + 2i/sqrt(pi) rearranged to avoid cancellation
        let dw = -2.0 * c * r * d;
        return (w, dw);
    }
    let w = weideman(z);
    (w, -2.0 * z * w + 2.0 * c)
}

fn weideman_coefficients() -> &'static (f64, Vec<f64>) {
    static COEFS: OnceLock<(f64, Vec<f64>)> = OnceLock::new();
    COEFS.get_or_init(|| {
        let n = WEIDEMAN_N;
        let m = 2 * n;
        let l = (n as f64 / std::f64::consts::SQRT_2).sqrt();
        let samples: Vec<(f64, f64)> = (-(m as i64) + 1..m as i64)
            .map(|k| {
                let theta = k as f64 * PI / m as f64;
                let t = l * (0.5 * theta).tan();
                (theta, (-t * t).exp() * (l * l + t * t))
            })
            .collect();
        let a = (1..=n)
            .map(|j| {
                samples
                    .iter()
                    .map(|(theta, f)| f * (j as f64 * theta).cos())
                    .sum::<f64>()
                    / (2 * m) as f64
            })
            .collect();
        (l, a)
    })
}

fn weideman(z: Complex64) -> Complex64 {
    let (l, a) = weideman_coefficients();
    let i = Complex64::new(0.0, 1.0);
    let den = *l - i * z;
    let zz = (*l + i * z) / den;
    let mut p = Complex64::new(0.0, 0.0);
    for an in a.iter().rev() {
        p = p * zz + an;
    }
    2.0 * p / (den * den) + FRAC_1_SQRT_PI / den
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn rel(a: Complex64, b: Complex64) -> f64 {
        (a - b).norm() / b.norm()
    }

    #[test]
    fn value_at_origin() {
        assert_eq!(faddeeva_w(c(0.0, 0.0), FaddeevaMode::Exact).unwrap(), c(1.0, 0.0));
    }

    #[test]
    fn imaginary_axis_is_erfcx() {
        // w(iy) = erfcx(y) = exp(y^2) erfc(y)
        for y in [0.1f64, 0.5, 1.0, 2.0, 5.0] {
            let w = faddeeva_w(c(0.0, y), FaddeevaMode::Exact).unwrap();
            let e = (y * y).exp() * libm::erfc(y);
            assert!((w.re - e).abs() / e < 1e-13, "y={y}: {} vs {e}", w.re);
            assert!(w.im.abs() < 1e-15);
        }
    }

    #[test]
    fn real_axis_real_part_is_gaussian() {
        for x in [0.3f64, 1.0, 2.5, 4.0, 7.0] {
            let w = faddeeva_w(c(x, 0.0), FaddeevaMode::Exact).unwrap();
            let g = (-x * x).exp();
            assert!((w.re - g).abs() < 1e-14, "x={x}: {} vs {g}", w.re);
        }
    }

    #[test]
    fn reference_values() {
        // computed with scipy.special.wofz
        let cases = [
            (c(1.0, 1.0), c(0.304_744_205_256_912_54, 0.208_218_938_202_831_6)),
            (c(3.0, 0.5), c(0.037_126_366_054_692_383, 0.192_983_755_300_362_44)),
            (c(-2.0, 0.1), c(0.040_201_398_161_451_296, -0.331_582_687_334_563_2)),
            (c(6.5, 0.2), c(0.002_768_802_783_670_947_5, 0.087_775_923_874_030_16)),
        ];
        for (z, expected) in cases {
            let w = faddeeva_w(z, FaddeevaMode::Exact).unwrap();
            assert!(rel(w, expected) < 1e-12, "z={z}: {w} vs {expected}");
        }
    }

    #[test]
    fn reflection_in_lower_half_plane() {
        let z = c(0.7, -0.4);
        let w = faddeeva_w(z, FaddeevaMode::Exact).unwrap();
        let expected = 2.0 * (-z * z).exp() - faddeeva_w(-z, FaddeevaMode::Exact).unwrap();
        assert!(rel(w, expected) < 1e-15);
    }

    #[test]
    fn derivative_matches_finite_difference() {
        let h = 1e-6;
        for z in [c(0.5, 0.5), c(2.0, 0.1), c(5.9, 1.0), c(8.0, 0.3), c(-3.0, 4.0), c(1.0, -0.5)] {
            let (_, dw) = faddeeva_w_with_derivative(z, FaddeevaMode::Exact).unwrap();
            let wp = faddeeva_w(z + h, FaddeevaMode::Exact).unwrap();
            let wm = faddeeva_w(z - h, FaddeevaMode::Exact).unwrap();
            let fd = (wp - wm) / (2.0 * h);
            assert!(rel(dw, fd) < 1e-7, "z={z}: {dw} vs {fd}");
        }
    }

    #[test]
    fn branches_meet_at_the_switch() {
        for arg in [0.05f64, 0.5, 1.0, 1.5, 2.5, 3.1] {
            let z = Complex64::from_polar(CF_RADIUS, arg);
            let inner = weideman(z);
            let (outer, _) = upper(z);
            assert!(rel(inner, outer) < 1e-12, "arg={arg}");
        }
    }

    #[test]
    fn asymptotic_mode_guards() {
        assert!(matches!(
            faddeeva_w(c(0.0, 1.5), FaddeevaMode::Asymptotic),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            faddeeva_w(c(5.0, -1.0), FaddeevaMode::Asymptotic),
            Err(Error::Domain(_))
        ));
        // auto falls back to the exact branch when the expansion is invalid
        let z = c(1.0, 1.0);
        assert_eq!(
            faddeeva_w(z, FaddeevaMode::Auto(10.0)).unwrap(),
            faddeeva_w(z, FaddeevaMode::Exact).unwrap()
        );
    }

    #[test]
    fn asymptotic_error_at_radius_ten() {
        for k in 1..20 {
            let z = Complex64::from_polar(10.0, PI * k as f64 / 20.0);
            let a = faddeeva_w(z, FaddeevaMode::Asymptotic).unwrap();
            let e = faddeeva_w(z, FaddeevaMode::Exact).unwrap();
            assert!(rel(a, e) <= 1e-4, "z={z}: {}", rel(a, e));
        }
    }
}
