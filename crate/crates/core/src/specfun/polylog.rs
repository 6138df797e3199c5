use super::zeta::{riemann_zeta, BERNOULLI_OVER_FACTORIAL};
use crate::error::{Error, Result};
use crate::quad::Quadrature;

/// Above this fugacity the expansion in -ln f replaces the direct series.
const ROBINSON_THRESHOLD: f64 = 0.75;
const ROBINSON_TERMS: usize = 40;

/// Bose-Einstein function g_nu(f) = sum_{l>=1} f^l / l^nu for 0 <= f <= 1.
///
/// At f = 1 this is zeta(nu), which diverges for nu <= 1.
pub fn polylog(nu: f64, f: f64) -> Result<f64> {
    if !nu.is_finite() {
        return Err(Error::invalid("nu", format!("must be finite, got {nu}")));
    }
    if !(0.0..=1.0).contains(&f) {
        return Err(Error::invalid("f", format!("fugacity must lie in [0, 1], got {f}")));
    }
    if f == 0.0 {
        return Ok(0.0);
    }
    if f == 1.0 {
        if nu <= 1.0 {
            return Err(Error::Divergence(format!("g_{nu}(1) diverges for nu <= 1")));
        }
        return Ok(riemann_zeta(nu));
    }
    if f <= ROBINSON_THRESHOLD {
        Ok(direct(nu, f))
    } else {
        Ok(robinson(nu, -f.ln()))
    }
}

/// sum_{l=1}^{n} f^l / l^nu, summed from the small end.
pub fn polylog_partial(nu: f64, f: f64, n: usize) -> f64 {
    let mut s = 0.0;
    for l in (1..=n).rev() {
        let lf = l as f64;
        s += f.powf(lf) * lf.powf(-nu);
    }
    s
}

/// Tail sum_{l>n} f^l / l^nu without forming g_nu(f) minus a partial sum.
///
/// Geometric convergence is summed directly; otherwise the first few terms
/// are summed and the rest is handled by Euler-Maclaurin on f^x x^-nu.
pub fn polylog_tail(nu: f64, f: f64, n: usize) -> Result<f64> {
    if !(0.0..=1.0).contains(&f) {
        return Err(Error::invalid("f", format!("fugacity must lie in [0, 1], got {f}")));
    }
    if f == 0.0 {
        return Ok(0.0);
    }
    if f < 1.0 && f.powf(n as f64 + 1.0) < 0.25 {
        return Ok(direct_from(nu, f, n + 1));
    }
    if nu <= 1.0 {
        if f == 1.0 {
            return Err(Error::Divergence(format!("g_{nu}(1) diverges for nu <= 1")));
        }
        return Ok(direct_from(nu, f, n + 1));
    }
    // Euler-Maclaurin needs the start well past the scale of the power law
    let start = (n + 1).max((2.0 * nu).ceil() as usize + 20);
    let mut head = 0.0;
    for l in (n + 1..start).rev() {
        let lf = l as f64;
        head += f.powf(lf) * lf.powf(-nu);
    }
    Ok(head + euler_maclaurin_tail(nu, -f.ln(), start as f64)?)
}

/// sum_{l>=N} e^{-alpha l} l^-nu for nu > 1.
fn euler_maclaurin_tail(nu: f64, alpha: f64, n: f64) -> Result<f64> {
    let integral = if alpha == 0.0 {
        n.powf(1.0 - nu) / (nu - 1.0)
    } else {
        // x = N / v^2 maps [N, inf) onto (0, 1]
        let q = Quadrature::new(1e-15).with_abs_tol(1e-300);
        let body = q.integrate(
            |v: f64| {
                if v == 0.0 {
                    0.0
                } else {
                    2.0 * (-alpha * n / (v * v)).exp() * v.powf(2.0 * nu - 3.0)
                }
            },
            0.0,
            1.0,
        )?;
        n.powf(1.0 - nu) * body
    };
    let value = (-alpha * n).exp() * n.powf(-nu);

    // f^(m)(N) = e^{-alpha N} sum_i C(m,i) (-alpha)^(m-i) (-1)^i (nu)_i N^(-nu-i)
    let derivative = |m: usize| -> f64 {
        let mut sum = 0.0;
        let mut binom = 1.0;
        let mut rising = 1.0;
        for i in 0..=m {
            sum += binom * (-alpha).powi((m - i) as i32) * if i % 2 == 0 { rising } else { -rising } * n.powf(-nu - i as f64);
            binom *= (m - i) as f64 / (i + 1) as f64;
            rising *= nu + i as f64;
        }
        (-alpha * n).exp() * sum
    };
    let mut corr = 0.0;
    for (j, c) in BERNOULLI_OVER_FACTORIAL.iter().take(8).enumerate() {
        corr += c * derivative(2 * j + 1);
    }
    Ok(integral + 0.5 * value - corr)
}

/// sum_{l>=first} f^l / l^nu for f < 1. Terms fall at least as fast as
/// f^l, so the rest after term t is below t f / (1 - f).
fn direct_from(nu: f64, f: f64, first: usize) -> f64 {
    let mut terms = Vec::new();
    let mut l = first;
    let mut fl = f.powf(l as f64);
    let mut partial = 0.0;
    loop {
        let t = fl * (l as f64).powf(-nu);
        terms.push(t);
        partial += t;
        if t * f / (1.0 - f) <= 1e-18 * partial || t == 0.0 {
            break;
        }
        fl *= f;
        l += 1;
    }
    terms.iter().rev().sum()
}

fn direct(nu: f64, f: f64) -> f64 {
    direct_from(nu, f, 1)
}

/// Expansion about f = 1 in alpha = -ln f (valid for alpha < 2 pi).
fn robinson(nu: f64, alpha: f64) -> f64 {
    let integer_order = nu.fract() == 0.0 && nu >= 1.0;
    let mut sum = 0.0;
    let mut coef = 1.0; // (-alpha)^k / k!
    for k in 0..ROBINSON_TERMS {
        if k > 0 {
            coef *= -alpha / k as f64;
        }
        let s = nu - k as f64;
        if integer_order && s == 1.0 {
            let n1 = k; // n - 1
            let harmonic: f64 = (1..=n1).map(|j| 1.0 / j as f64).sum();
            sum += coef * (harmonic - alpha.ln());
        } else {
            sum += coef * riemann_zeta(s);
        }
    }
    if !integer_order {
        sum += libm::tgamma(1.0 - nu) * alpha.powf(nu - 1.0);
    }
    sum
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn brute(nu: f64, f: f64, n: usize) -> f64 {
        polylog_partial(nu, f, n)
    }

    #[test]
    fn empty_series_at_zero() {
        for nu in [0.5, 1.5, 3.0, 4.0] {
            assert_eq!(polylog(nu, 0.0).unwrap(), 0.0);
        }
    }

    #[test]
    fn divergence_at_unit_fugacity() {
        assert!(matches!(polylog(1.0, 1.0), Err(Error::Divergence(_))));
        assert!(matches!(polylog(0.5, 1.0), Err(Error::Divergence(_))));
        assert!(polylog(1.0, 0.5).is_ok());
    }

    #[test]
    fn out_of_range_fugacity() {
        assert!(polylog(1.5, 1.5).unwrap_err().is_validation());
        assert!(polylog(1.5, -0.1).unwrap_err().is_validation());
    }

    #[test]
    fn closed_forms() {
        // g_1(f) = -ln(1 - f)
        for f in [0.1, 0.5, 0.75, 0.8, 0.95, 0.999] {
            let g = polylog(1.0, f).unwrap();
            let exact = -(1.0f64 - f).ln();
            assert!(((g - exact) / exact).abs() < 1e-13, "f={f}: {g} vs {exact}");
        }
        // g_2(1/2) = pi^2/12 - ln^2(2)/2
        let g = polylog(2.0, 0.5).unwrap();
        let exact = std::f64::consts::PI.powi(2) / 12.0 - 0.5 * 2f64.ln().powi(2);
        assert!((g - exact).abs() < 1e-15);
    }

    #[test]
    fn half_integer_against_brute_force() {
        // f^l dies quickly enough for 1e4 terms to be exact in double precision
        for nu in [1.5, 2.5, 3.5] {
            for f in [0.2, 0.5, 0.74, 0.76, 0.9] {
                let g = polylog(nu, f).unwrap();
                let b = brute(nu, f, 10_000);
                assert!(((g - b) / b).abs() < 1e-13, "nu={nu} f={f}: {g} vs {b}");
            }
        }
    }

    #[test]
    fn both_branches_agree_at_threshold() {
        for nu in [1.5, 2.0, 2.5, 3.0, 4.0, 5.5] {
            let f = ROBINSON_THRESHOLD;
            let a = direct(nu, f);
            let b = robinson(nu, -f.ln());
            assert!(((a - b) / a).abs() < 2e-14, "nu={nu}: {a} vs {b}");
        }
    }

    #[test]
    fn tail_against_high_precision() {
        // mpmath: nsum(lambda l: f**l / l**nu, [n + 1, inf])
        let cases = [
            (3.0, 0.99, 87, 1.688_827_202_311_491_7e-5),
            (13.0, 0.99, 87, 1.589_299_991_144_799_7e-25),
            (1.5, 1.0, 5, 0.851_929_149_262_347_7),
            (7.5, 0.999, 40, 5.215_599_908_648_416e-12),
        ];
        for (nu, f, n, expected) in cases {
            let t = polylog_tail(nu, f, n).unwrap();
            assert!(((t - expected) / expected).abs() < 1e-13, "nu={nu} f={f} n={n}: {t:e} vs {expected:e}");
        }
    }

    #[test]
    fn tail_plus_partial_is_the_whole() {
        for (nu, f) in [(1.5, 0.9), (2.5, 1.0), (4.0, 0.999)] {
            let whole = polylog(nu, f).unwrap();
            let split = polylog_partial(nu, f, 30) + polylog_tail(nu, f, 30).unwrap();
            assert!(((whole - split) / whole).abs() < 1e-14);
        }
    }

    proptest! {
        #[test]
        fn strictly_increasing(nu in prop::sample::select(vec![1.5, 2.5, 3.0, 4.0]),
                               a in 0.0f64..1.0, b in 0.0f64..1.0) {
            prop_assume!((a - b).abs() > 1e-9);
            let (lo, hi) = if a < b { (a, b) } else { (b, a) };
            prop_assert!(polylog(nu, lo).unwrap() < polylog(nu, hi).unwrap());
        }

        #[test]
        fn derivative_lowers_order(nu in prop::sample::select(vec![2.5, 3.0, 4.0]),
                                   f in 0.05f64..0.95) {
            let h = 1e-5;
            let d = (polylog(nu, f + h).unwrap() - polylog(nu, f - h).unwrap()) / (2.0 * h);
            let lhs = f * d;
            let rhs = polylog(nu - 1.0, f).unwrap();
            prop_assert!(((lhs - rhs) / rhs).abs() < 1e-6, "{} vs {}", lhs, rhs);
        }
    }
}
