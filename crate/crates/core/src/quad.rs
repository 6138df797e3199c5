//! Adaptive Gauss-Kronrod quadrature over any vector-like value, and a fixed
//! 64-point Gauss-Legendre rule.

use std::collections::BinaryHeap;
use std::cmp::Ordering;
use std::ops::{Add, Mul, Sub};
use std::sync::OnceLock;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Values a quadrature rule can accumulate.
pub trait QuadValue: Copy + Add<Output = Self> + Sub<Output = Self> + Mul<f64, Output = Self> {
    fn zero() -> Self;
    /// A norm used for error control.
    fn magnitude(&self) -> f64;
}

impl QuadValue for f64 {
    fn zero() -> Self {
        0.0
    }
    fn magnitude(&self) -> f64 {
        self.abs()
    }
}

impl QuadValue for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn magnitude(&self) -> f64 {
        self.norm()
    }
}

// 15-point Kronrod extension of the 7-point Gauss rule (QUADPACK qk15).
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.000_000_000_000_000_000_000_000_000_000_000,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

fn gk15<T: QuadValue>(f: &mut impl FnMut(f64) -> T, a: f64, b: f64) -> (T, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for j in 0..7 {
        let dx = h * XGK[j];
        let s = f(c - dx) + f(c + dx);
        kronrod = kronrod + s * WGK[j];
        // odd Kronrod nodes are the Gauss nodes
        if j % 2 == 1 {
            gauss = gauss + s * WG[j / 2];
        }
    }
    let k = kronrod * h;
    let g = gauss * h;
    (k, (k - g).magnitude())
}

struct Segment<T> {
    a: f64,
    b: f64,
    value: T,
    error: f64,
}

impl<T> PartialEq for Segment<T> {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl<T> Eq for Segment<T> {}
impl<T> PartialOrd for Segment<T> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl<T> Ord for Segment<T> {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

#[derive(Debug, Clone, Copy)]
pub struct Quadrature {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_segments: usize,
}

impl Quadrature {
    pub fn new(rel_tol: f64) -> Self {
        Quadrature {
            rel_tol,
            abs_tol: 0.0,
            max_segments: 20_000,
        }
    }

    pub fn with_abs_tol(mut self, abs_tol: f64) -> Self {
        self.abs_tol = abs_tol;
        self
    }

    /// Integral over the finite interval [a, b], bisecting the segment with
    /// the largest error estimate until the total estimate meets tolerance.
    pub fn integrate<T: QuadValue>(&self, mut f: impl FnMut(f64) -> T, a: f64, b: f64) -> Result<T> {
        if a == b {
            return Ok(T::zero());
        }
        let (value, error) = gk15(&mut f, a, b);
        let mut heap = BinaryHeap::new();
        heap.push(Segment { a, b, value, error });
        let mut total = value;
        let mut total_error = error;
        loop {
            let target = self.abs_tol.max(self.rel_tol * total.magnitude());
            if total_error <= target {
                return Ok(total);
            }
            if heap.len() % 256 == 0 || heap.len() >= self.max_segments {
                // the running sums drift by rounding; resum from the segments
                (total, total_error) = heap
                    .iter()
                    .fold((T::zero(), 0.0), |(v, e), s| (v + s.value, e + s.error));
                if total_error <= self.abs_tol.max(self.rel_tol * total.magnitude()) {
                    return Ok(total);
                }
            }
            if heap.len() >= self.max_segments {
                return Err(Error::SeriesCap {
                    cap: self.max_segments,
                    context: format!(
                        "adaptive quadrature on [{a:e}, {b:e}], error estimate {total_error:e}"
                    ),
                });
            }
            let seg = heap.pop().expect("heap is never empty");
            let mid = 0.5 * (seg.a + seg.b);
            if !(mid > seg.a.min(seg.b) && mid < seg.a.max(seg.b)) {
                // cannot split further; accept what we have
                return Ok(total);
            }
            let (v1, e1) = gk15(&mut f, seg.a, mid);
            let (v2, e2) = gk15(&mut f, mid, seg.b);
            total = total - seg.value + v1 + v2;
            total_error += e1 + e2 - seg.error;
            heap.push(Segment { a: seg.a, b: mid, value: v1, error: e1 });
            heap.push(Segment { a: mid, b: seg.b, value: v2, error: e2 });
        }
    }

    /// Integral over [a, inf) through x = a + t / (1 - t).
    pub fn integrate_to_infinity<T: QuadValue>(&self, mut f: impl FnMut(f64) -> T, a: f64) -> Result<T> {
        self.integrate(
            |t| {
                if t >= 1.0 {
                    return T::zero();
                }
                let s = 1.0 - t;
                let v = f(a + t / s);
                v * (1.0 / (s * s))
            },
            0.0,
            1.0,
        )
    }

    /// Integral over the whole real line, split at `center`.
    pub fn integrate_real_line<T: QuadValue>(&self, mut f: impl FnMut(f64) -> T, center: f64) -> Result<T> {
        let right = self.integrate_to_infinity(&mut f, center)?;
        let left = self.integrate_to_infinity(|x| f(2.0 * center - x), center)?;
        Ok(left + right)
    }
}

/// Nodes and weights of the 64-point Gauss-Legendre rule on [-1, 1].
fn gauss_legendre_64() -> &'static [(f64, f64); 64] {
    static RULE: OnceLock<[(f64, f64); 64]> = OnceLock::new();
    RULE.get_or_init(|| {
        const N: usize = 64;
        let mut rule = [(0.0, 0.0); N];
        for i in 0..N / 2 {
            // Newton iteration from the Chebyshev-like initial guess
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (N as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (mut p0, mut p1) = (1.0, x);
                for k in 2..=N {
                    let k = k as f64;
                    let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                    p0 = p1;
                    p1 = p2;
                }
                dp = N as f64 * (x * p1 - p0) / (x * x - 1.0);
                let dx = p1 / dp;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            rule[i] = (-x, w);
            rule[N - 1 - i] = (x, w);
        }
        rule
    })
}

/// 64-point Gauss-Legendre approximation of the integral over [a, b].
pub fn gauss_legendre<T: QuadValue>(mut f: impl FnMut(f64) -> T, a: f64, b: f64) -> T {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let mut s = T::zero();
    for &(x, w) in gauss_legendre_64() {
        s = s + f(c + h * x) * w;
    }
    s * h
}
