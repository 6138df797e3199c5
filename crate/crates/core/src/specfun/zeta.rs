use std::f64::consts::PI;

/// B_{2k} / (2k)! for k = 1..=12.
pub(crate) const BERNOULLI_OVER_FACTORIAL: [f64; 12] = [
    1.0 / 12.0,
    -1.0 / 720.0,
    1.0 / 30_240.0,
    -1.0 / 1_209_600.0,
    1.0 / 47_900_160.0,
    -691.0 / 1_307_674_368_000.0,
    1.0 / 74_724_249_600.0,
    -3617.0 / 10_670_622_842_880_000.0,
    43_867.0 / 5_109_094_217_170_944_000.0,
    -174_611.0 / 802_857_662_698_291_200_000.0,
    77_683.0 / 14_101_100_039_391_805_440_000.0,
    -236_364_091.0 / 1_693_824_136_731_743_669_452_800_000.0,
];

const EM_CUTOFF: usize = 20;

/// Riemann zeta function for real s != 1.
///
/// Euler-Maclaurin summation for s >= 1/2, the functional equation below.
/// Returns infinity at s = 1.
pub fn riemann_zeta(s: f64) -> f64 {
    if s == 1.0 {
        return f64::INFINITY;
    }
    if s >= 0.5 {
        return euler_maclaurin(s);
    }
    if s == 0.0 {
        return -0.5;
    }
    // trivial zeros
    if s < 0.0 && s.fract() == 0.0 && (s as i64) % 2 == 0 {
        return 0.0;
    }
    let t = 1.0 - s;
    (2.0 * PI).powf(s) / PI * (0.5 * PI * s).sin() * libm::tgamma(t) * euler_maclaurin(t)
}

fn euler_maclaurin(s: f64) -> f64 {
    let n = EM_CUTOFF as f64;
    let mut sum = 0.0;
    // smallest terms first
    for k in (1..EM_CUTOFF).rev() {
        sum += (k as f64).powf(-s);
    }
    let n_s = n.powf(-s);
    sum += n * n_s / (s - 1.0) + 0.5 * n_s;

    // rising factorial s (s+1) ... (s+2k-2) times n^{-s-2k+1}
    let mut rising = s;
    let mut power = n_s / n;
    for (k, c) in BERNOULLI_OVER_FACTORIAL.iter().enumerate() {
        let term = c * rising * power;
        sum += term;
        if term.abs() < 1e-18 * sum.abs() {
            break;
        }
        let j = 2.0 * k as f64;
        rising *= (s + j + 1.0) * (s + j + 2.0);
        power /= n * n;
    }
    sum
}
