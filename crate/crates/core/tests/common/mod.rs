//! Reference computations that avoid the Faddeeva and Doppler-series code:
//! direct momentum quadrature of the thermal average, a quadrature form of
//! w(z), and Euler-Maclaurin zeta values.
#![allow(dead_code)]

use std::f64::consts::PI;

use num_complex::Complex64;
use slowlight::box_gas::box_thermo;
use slowlight::eit::{zeta, ComplexResponse};
use slowlight::params::ExperimentConfig;
use slowlight::quad::Quadrature;
use slowlight::trap_gas::trap_thermo;
use slowlight::units::{C_LIGHT, HBAR, K_B};

pub const ZETA_3_2: f64 = 2.612_375_348_685_488_3;
pub const ZETA_3: f64 = 1.202_056_903_159_594_3;

pub fn rel(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}

pub fn rel_c(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / b.norm()
}

/// g_1(f e^{-x}) = -ln(1 - f e^{-x}), accurate as f e^{-x} -> 1.
fn g1_shifted(f: f64, x: f64) -> f64 {
    let q = f * (-x).exp();
    if q < 0.5 {
        -(-q).ln_1p()
    } else {
        -((1.0 - f) - f * (-x).exp_m1()).ln()
    }
}

/// sum_{l>=1} l^-nu for nu > 1 by Euler-Maclaurin with cutoff `n`, and a
/// bound on the omitted remainder.
pub fn zeta_em(nu: f64, n: usize) -> (f64, f64) {
    let nf = n as f64;
    let head: f64 = (1..n).rev().map(|l| (l as f64).powf(-nu)).sum();
    let value = head + nf.powf(1.0 - nu) / (nu - 1.0) + 0.5 * nf.powf(-nu) + nu / 12.0 * nf.powf(-nu - 1.0);
    let bound = nu * (nu + 1.0) * (nu + 2.0) / 720.0 * nf.powf(-nu - 3.0);
    (value, bound)
}

/// w(z) = (i/pi) int e^{-t^2} / (z - t) dt for Im z > 0.
pub fn faddeeva_by_quadrature(z: Complex64) -> Complex64 {
    assert!(z.im > 0.0);
    let q = Quadrature::new(1e-14);
    let i = Complex64::new(0.0, 1.0);
    let integral = q
        .integrate_real_line(|t: f64| Complex64::new((-t * t).exp(), 0.0) / (z - t), z.re)
        .unwrap();
    i / PI * integral
}

/// Box susceptibility by direct quadrature over the momentum along the
/// probe. With the transverse momenta integrated out, the thermal part is
/// -n0 chi0 / sqrt(pi) int du g_1(f e^{-u^2}) / (zeta - A u).
pub fn box_chi_oracle(config: &ExperimentConfig, temperature: f64) -> ComplexResponse {
    let n = config.box_params().unwrap().number_density;
    let chi0 = config.species.chi0_m3().0;
    let m = config.species.mass_kg();
    let t_c = (2.0 * PI * HBAR * HBAR / (m * K_B)) * (n / ZETA_3_2).powf(2.0 / 3.0);
    let t = temperature / t_c;
    let f = box_thermo(config, temperature).unwrap().fugacity.value();
    let a = (2.0 * K_B * temperature / m).sqrt() * config.fields.k_g / config.fields.gamma_ge;
    let z = zeta(&config.fields, config.species.recoil_frequency_rad_s()).unwrap();
    let (zv, dz) = (z.value, z.d_domega);

    // s = A u: the population lives on s < 8A and the near-pole at s = Re zeta
    // has unit width, so both get their own panels
    let q = Quadrature::new(1e-13);
    let g1 = |s: f64| g1_shifted(f, (s / a).powi(2));
    let chi_k = |s: f64| g1(s) * (1.0 / (zv - s) + 1.0 / (zv + s)) / a;
    let dchi_k = |s: f64| g1(s) * (-dz) * (1.0 / (zv - s).powi(2) + 1.0 / (zv + s).powi(2)) / a;
    let mut cuts = vec![0.0, 8.0 * a, (zv.re.abs() - 10.0).max(0.0), zv.re.abs() + 10.0];
    cuts.sort_by(f64::total_cmp);
    cuts.dedup();
    let panels = |k: &dyn Fn(f64) -> Complex64| -> Complex64 {
        let finite: Complex64 = cuts.windows(2).map(|w| q.integrate(k, w[0], w[1]).unwrap()).sum();
        finite + q.integrate_to_infinity(k, *cuts.last().unwrap()).unwrap()
    };
    let chi_int = panels(&chi_k);
    let dchi_int = panels(&dchi_k);
    let pre = -n * chi0 * t.powf(1.5) / (PI.sqrt() * ZETA_3_2);
    let nc = n * (1.0 - t.powf(1.5)).max(0.0);
    ComplexResponse {
        chi: pre * chi_int - chi0 * nc / zv,
        dchi_domega: pre * dchi_int + chi0 * nc * dz / (zv * zv),
    }
}

/// Pinhole-averaged delay over the whole axis by nested quadrature in the
/// radius, the axial position and the momentum along the probe, with the
/// condensate averaged over its Gaussian density (exact F_C).
pub fn trap_delay_oracle(config: &ExperimentConfig, temperature: f64, radius: f64) -> f64 {
    let trap = config.trap_params().unwrap();
    let m = config.species.mass_kg();
    let chi0 = config.species.chi0_m3().0;
    let omega = config.probe_frequency_rad_s();
    let th = trap_thermo(config, temperature).unwrap();
    let t = temperature / th.t_c;
    let f = th.fugacity.value();
    let kt = K_B * temperature;
    let a = (2.0 * kt / m).sqrt() * config.fields.k_g / config.fields.gamma_ge;
    let z = zeta(&config.fields, config.species.recoil_frequency_rad_s()).unwrap();
    let (zv, dz) = (z.value, z.d_domega);
    let n0 = (m * kt / (2.0 * PI * HBAR * HBAR)).powf(1.5);
    let kappa = chi0 * n0 / PI.sqrt();

    // Re[chi + omega chi'] per unit g_1, folded over +-u
    let kernel = |u: f64| -> f64 {
        let (p, q) = (zv - a * u, zv + a * u);
        let chi = -(1.0 / p + 1.0 / q);
        let dchi = dz * (1.0 / (p * p) + 1.0 / (q * q));
        (chi + omega * dchi).re
    };
    let inner = Quadrature::new(1e-12);
    let middle = Quadrature::new(1e-11);
    let outer = Quadrature::new(1e-10);
    let z_scale = (2.0 * kt / (m * trap.nu_z.powi(2))).sqrt();
    let column = |r: f64| -> f64 {
        let vr = 0.5 * m * trap.nu_r.powi(2) * r * r / kt;
        // z in units of sqrt(2 k_B T / m nu_z^2)
        let along_z = |s: f64| -> f64 {
            let v = vr + s * s;
            inner.integrate_to_infinity(|u: f64| g1_shifted(f, v + u * u) * kernel(u), 0.0).unwrap()
        };
        2.0 * z_scale * middle.integrate_to_infinity(along_z, 0.0).unwrap()
    };
    let thermal = if temperature > 0.0 {
        kappa * outer.integrate(|r: f64| 2.0 * r / (radius * radius) * column(r), 0.0, radius).unwrap()
    } else {
        0.0
    };

    let ar = th.a0_r;
    let radial = outer
        .integrate(|r: f64| 2.0 * r / (radius * radius) * (-(r * r) / (ar * ar)).exp() / (PI * ar * ar), 0.0, radius)
        .unwrap();
    let axial = 2.0 * middle.integrate_to_infinity(|s: f64| (-(s * s)).exp() / PI.sqrt(), 0.0).unwrap();
    let nc = trap.atom_count * (1.0 - t.powi(3)).max(0.0);
    let cond = chi0 * nc * radial * axial * (-1.0 / zv + omega * dz / (zv * zv)).re;

    2.0 * PI / C_LIGHT * (thermal + cond)
}

/// Least-squares slope of ln y against ln x.
pub fn log_log_slope(x: &[f64], y: &[f64]) -> f64 {
    let lx: Vec<f64> = x.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = y.iter().map(|v| v.ln()).collect();
    let n = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxy: f64 = lx.iter().zip(&ly).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = lx.iter().map(|a| (a - mx) * (a - mx)).sum();
    sxy / sxx
}
