//! Experiment parameters: atomic species, laser fields, confinement geometry
//! and numerical tolerances, plus the flat `key = value` configuration format.
//!
//! Frequencies in a configuration document carry a unit suffix: `_rad` for
//! rad/s or `_hz` for Hz (multiplied by 2*pi on load). Everything else is SI.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::error::{ConfigIssue, Error, Result};
use crate::units::{hz_to_rad, CubicMeters, PerCubicMeter, HBAR, TWO_PI};

/// Three-level atom: mass, optical wavelength of |g> -> |e>, and the
/// excited-state decay split into its two branches.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AtomSpecies {
    mass: f64,
    wavelength: f64,
    gamma_g: f64,
    gamma_r: f64,
}

impl AtomSpecies {
    /// Builds a species from the total decay rate, split evenly between the
    /// two branches.
    pub fn new(mass: f64, wavelength: f64, gamma_total: f64) -> Result<Self> {
        Self::with_branches(mass, wavelength, 0.5 * gamma_total, 0.5 * gamma_total)
    }

    pub fn with_branches(mass: f64, wavelength: f64, gamma_g: f64, gamma_r: f64) -> Result<Self> {
        let mut issues = Vec::new();
        positive(&mut issues, "species.mass", mass);
        positive(&mut issues, "species.wavelength", wavelength);
        positive(&mut issues, "species.gamma_g", gamma_g);
        non_negative(&mut issues, "species.gamma_r", gamma_r);
        if issues.is_empty() {
            Ok(AtomSpecies {
                mass,
                wavelength,
                gamma_g,
                gamma_r,
            })
        } else {
            Err(Error::Config(issues))
        }
    }

    /// Sodium D line: m = 3.818e-26 kg, lambda = 589 nm, gamma = 2 pi x 9.79 MHz.
    pub fn sodium() -> Self {
        let gamma = hz_to_rad(9.79e6);
        AtomSpecies {
            mass: 3.818e-26,
            wavelength: 589e-9,
            gamma_g: 0.5 * gamma,
            gamma_r: 0.5 * gamma,
        }
    }

    pub fn mass_kg(&self) -> f64 {
        self.mass
    }

    pub fn wavelength_m(&self) -> f64 {
        self.wavelength
    }

    /// gamma = gamma_g + gamma_r.
    pub fn gamma_total_rad_s(&self) -> f64 {
        self.gamma_g + self.gamma_r
    }

    pub fn gamma_g_rad_s(&self) -> f64 {
        self.gamma_g
    }

    pub fn gamma_r_rad_s(&self) -> f64 {
        self.gamma_r
    }

    pub fn wave_number_per_m(&self) -> f64 {
        TWO_PI / self.wavelength
    }

    /// omega_eg = 2 pi c / lambda.
    pub fn transition_frequency_rad_s(&self) -> f64 {
        TWO_PI * crate::units::C_LIGHT / self.wavelength
    }

    /// hbar k^2 / 2m.
    pub fn recoil_frequency_rad_s(&self) -> f64 {
        let k = self.wave_number_per_m();
        HBAR * k * k / (2.0 * self.mass)
    }

    /// One-atom susceptibility 3 lambda^3 / (32 pi^3).
    pub fn chi0_m3(&self) -> CubicMeters {
        let l = self.wavelength;
        CubicMeters(3.0 * l * l * l / (32.0 * std::f64::consts::PI.powi(3)))
    }

    /// |d_ge|^2 recovered from chi0 = |d_ge|^2 / (hbar Gamma_ge), in J m^3.
    pub fn dipole_sq_j_m3(&self, gamma_ge: f64) -> f64 {
        HBAR * gamma_ge * self.chi0_m3().0
    }
}

/// Recoil frequency hbar k_g^2 / 2m of the probe transition, rad/s.
pub fn recoil_frequency(species: &AtomSpecies) -> f64 {
    species.recoil_frequency_rad_s()
}

/// One-atom susceptibility 3 lambda^3 / (32 pi^3), m^3.
pub fn chi0(species: &AtomSpecies) -> CubicMeters {
    species.chi0_m3()
}

/// Coupling field, detunings and coherence decay rates (all rad/s), and the
/// two wave numbers (1/m).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FieldParams {
    pub omega_coupling: f64,
    pub detuning_g0: f64,
    pub detuning_r0: f64,
    pub gamma_ge: f64,
    pub gamma_re: f64,
    pub gamma_gr: f64,
    pub k_g: f64,
    pub k_r: f64,
}

impl FieldParams {
    /// Ideal decoherence (Gamma_ge = Gamma_re = gamma/2, Gamma_gr = 0) on
    /// resonance, with the given coupling Rabi frequency.
    pub fn ideal(species: &AtomSpecies, omega_coupling: f64) -> Self {
        let k = species.wave_number_per_m();
        FieldParams {
            omega_coupling,
            detuning_g0: 0.0,
            detuning_r0: 0.0,
            gamma_ge: 0.5 * species.gamma_total_rad_s(),
            gamma_re: 0.5 * species.gamma_total_rad_s(),
            gamma_gr: 0.0,
            k_g: k,
            k_r: k,
        }
    }

    /// Omega = 0.56 gamma, resonant fields, Gamma_gr = 2 pi x 1000 Hz.
    pub fn slow_light_default(species: &AtomSpecies) -> Self {
        FieldParams {
            gamma_gr: hz_to_rad(1000.0),
            ..Self::ideal(species, 0.56 * species.gamma_total_rad_s())
        }
    }

    pub fn validate(&self) -> Vec<ConfigIssue> {
        let mut issues = Vec::new();
        non_negative(&mut issues, "fields.omega_coupling", self.omega_coupling);
        finite(&mut issues, "fields.detuning_g0", self.detuning_g0);
        finite(&mut issues, "fields.detuning_r0", self.detuning_r0);
        positive(&mut issues, "fields.gamma_ge", self.gamma_ge);
        non_negative(&mut issues, "fields.gamma_re", self.gamma_re);
        non_negative(&mut issues, "fields.gamma_gr", self.gamma_gr);
        positive(&mut issues, "fields.k_g", self.k_g);
        positive(&mut issues, "fields.k_r", self.k_r);
        issues
    }

    /// Two-photon detuning Delta_g0 - Delta_r0.
    pub fn two_photon_detuning(&self) -> f64 {
        self.detuning_g0 - self.detuning_r0
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoxParams {
    /// 1/m^3
    pub number_density: f64,
}

impl BoxParams {
    pub fn density(&self) -> PerCubicMeter {
        PerCubicMeter(self.number_density)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrapParams {
    /// Radial trap frequency, rad/s.
    pub nu_r: f64,
    /// Axial trap frequency, rad/s.
    pub nu_z: f64,
    pub atom_count: f64,
}

impl TrapParams {
    /// Harmonic-oscillator ground-state size sqrt(hbar / m nu) along one axis.
    pub fn ground_state_size_m(mass: f64, nu: f64) -> f64 {
        (HBAR / (mass * nu)).sqrt()
    }

    /// Geometric mean (nu_r^2 nu_z)^(1/3).
    pub fn nu_ho(&self) -> f64 {
        (self.nu_r * self.nu_r * self.nu_z).cbrt()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GeometryKind {
    Box,
    Trap,
}

impl GeometryKind {
    pub fn as_str(self) -> &'static str {
        match self {
            GeometryKind::Box => "box",
            GeometryKind::Trap => "trap",
        }
    }
}

impl std::str::FromStr for GeometryKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "box" => Ok(GeometryKind::Box),
            "trap" => Ok(GeometryKind::Trap),
            other => Err(format!("expected `box` or `trap`, got `{other}`")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Geometry {
    Box(BoxParams),
    HarmonicTrap(TrapParams),
}

impl Geometry {
    pub fn kind(&self) -> GeometryKind {
        match self {
            Geometry::Box(_) => GeometryKind::Box,
            Geometry::HarmonicTrap(_) => GeometryKind::Trap,
        }
    }

    pub fn validate(&self) -> Vec<ConfigIssue> {
        let mut issues = Vec::new();
        match self {
            Geometry::Box(b) => positive(&mut issues, "geometry.number_density", b.number_density),
            Geometry::HarmonicTrap(t) => {
                positive(&mut issues, "geometry.nu_r", t.nu_r);
                positive(&mut issues, "geometry.nu_z", t.nu_z);
                if !(t.atom_count >= 1.0 && t.atom_count.is_finite()) {
                    issues.push(issue("geometry.atom_count", format!("must be >= 1, got {}", t.atom_count)));
                }
            }
        }
        issues
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NumericsConfig {
    /// Relative termination threshold for l-sums.
    pub series_rel_tol: f64,
    /// Relative tolerance of adaptive quadrature.
    pub quad_rel_tol: f64,
    /// |y| at or above which the `auto` Faddeeva mode uses the two-term expansion.
    pub faddeeva_switch_radius: f64,
    /// Tolerance of the fugacity bisection.
    pub bisection_tol: f64,
}

impl Default for NumericsConfig {
    fn default() -> Self {
        NumericsConfig {
            series_rel_tol: 1e-14,
            quad_rel_tol: 1e-10,
            faddeeva_switch_radius: 10.0,
            bisection_tol: 1e-14,
        }
    }
}

impl NumericsConfig {
    pub fn validate(&self) -> Vec<ConfigIssue> {
        let mut issues = Vec::new();
        for (key, v) in [
            ("numerics.series_rel_tol", self.series_rel_tol),
            ("numerics.quad_rel_tol", self.quad_rel_tol),
            ("numerics.bisection_tol", self.bisection_tol),
        ] {
            if !(v > 0.0 && v < 1.0) {
                issues.push(issue(key, format!("must lie in (0, 1), got {v}")));
            }
        }
        if !(self.faddeeva_switch_radius >= 5.0 && self.faddeeva_switch_radius.is_finite()) {
            issues.push(issue(
                "numerics.faddeeva_switch_radius",
                format!("must be >= 5, got {}", self.faddeeva_switch_radius),
            ));
        }
        issues
    }
}

/// Everything needed to evaluate the response of one experimental setup.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExperimentConfig {
    pub species: AtomSpecies,
    pub fields: FieldParams,
    pub geometry: Geometry,
    pub numerics: NumericsConfig,
    /// s-wave scattering length in m; only the Thomas-Fermi estimates use it.
    pub scattering_length: Option<f64>,
}

impl ExperimentConfig {
    /// Sodium in the harmonic trap of the slow-light experiment:
    /// nu_r = 2 pi x 70 Hz, nu_z = 2 pi x 20 Hz, N = 8.3e6.
    pub fn sodium_trap() -> Self {
        let species = AtomSpecies::sodium();
        ExperimentConfig {
            species,
            fields: FieldParams::slow_light_default(&species),
            geometry: Geometry::HarmonicTrap(TrapParams {
                nu_r: hz_to_rad(70.0),
                nu_z: hz_to_rad(20.0),
                atom_count: 8.3e6,
            }),
            numerics: NumericsConfig::default(),
            scattering_length: Some(2.75e-9),
        }
    }

    /// Sodium in a box at n = 3.8e12 cm^-3.
    pub fn sodium_box() -> Self {
        ExperimentConfig {
            geometry: Geometry::Box(BoxParams {
                number_density: PerCubicMeter::from_per_cm3(3.8e12).0,
            }),
            ..Self::sodium_trap()
        }
    }

    pub fn validate(&self) -> Result<()> {
        let mut issues = self.fields.validate();
        issues.extend(self.geometry.validate());
        issues.extend(self.numerics.validate());
        if let Some(a) = self.scattering_length {
            positive(&mut issues, "interaction.scattering_length", a);
        }
        if issues.is_empty() {
            Ok(())
        } else {
            Err(Error::Config(issues))
        }
    }

    pub fn box_params(&self) -> Result<BoxParams> {
        match self.geometry {
            Geometry::Box(b) => Ok(b),
            Geometry::HarmonicTrap(_) => Err(Error::invalid("geometry", "expected a box geometry")),
        }
    }

    pub fn trap_params(&self) -> Result<TrapParams> {
        match self.geometry {
            Geometry::HarmonicTrap(t) => Ok(t),
            Geometry::Box(_) => Err(Error::invalid("geometry", "expected a harmonic-trap geometry")),
        }
    }

    /// Probe angular frequency omega_lg = omega_eg - Delta_g0.
    pub fn probe_frequency_rad_s(&self) -> f64 {
        self.species.transition_frequency_rad_s() - self.fields.detuning_g0
    }

    /// Serializes to the configuration format. Reloading the text with
    /// [`load_config`] reproduces every field bit for bit.
    pub fn to_document(&self) -> String {
        let mut out = String::new();
        let s = &self.species;
        let f = &self.fields;
        let n = &self.numerics;
        let mut kv = |k: &str, v: f64| {
            let _ = writeln!(out, "{k} = {v:e}");
        };
        kv("species.mass", s.mass);
        kv("species.wavelength", s.wavelength);
        kv("species.gamma_g_rad", s.gamma_g);
        kv("species.gamma_r_rad", s.gamma_r);
        kv("fields.omega_coupling_rad", f.omega_coupling);
        kv("fields.detuning_g0_rad", f.detuning_g0);
        kv("fields.detuning_r0_rad", f.detuning_r0);
        kv("fields.gamma_ge_rad", f.gamma_ge);
        kv("fields.gamma_re_rad", f.gamma_re);
        kv("fields.gamma_gr_rad", f.gamma_gr);
        kv("fields.k_g", f.k_g);
        kv("fields.k_r", f.k_r);
        match self.geometry {
            Geometry::Box(b) => kv("geometry.number_density", b.number_density),
            Geometry::HarmonicTrap(t) => {
                kv("geometry.nu_r_rad", t.nu_r);
                kv("geometry.nu_z_rad", t.nu_z);
                kv("geometry.atom_count", t.atom_count);
            }
        }
        kv("numerics.series_rel_tol", n.series_rel_tol);
        kv("numerics.quad_rel_tol", n.quad_rel_tol);
        kv("numerics.faddeeva_switch_radius", n.faddeeva_switch_radius);
        kv("numerics.bisection_tol", n.bisection_tol);
        if let Some(a) = self.scattering_length {
            kv("interaction.scattering_length", a);
        }
        let _ = writeln!(out, "geometry.kind = {}", self.geometry.kind().as_str());
        out
    }
}

fn issue(key: &str, message: impl Into<String>) -> ConfigIssue {
    ConfigIssue {
        key: key.to_string(),
        message: message.into(),
    }
}

fn positive(issues: &mut Vec<ConfigIssue>, key: &str, v: f64) {
    if !(v > 0.0 && v.is_finite()) {
        issues.push(issue(key, format!("must be positive and finite, got {v}")));
    }
}

fn non_negative(issues: &mut Vec<ConfigIssue>, key: &str, v: f64) {
    if !(v >= 0.0 && v.is_finite()) {
        issues.push(issue(key, format!("must be non-negative and finite, got {v}")));
    }
}

fn finite(issues: &mut Vec<ConfigIssue>, key: &str, v: f64) {
    if !v.is_finite() {
        issues.push(issue(key, format!("must be finite, got {v}")));
    }
}

// ---------------------------------------------------------------------------
// document parsing

/// Keys holding frequencies; each accepts a `_rad` or `_hz` suffix.
const FREQUENCY_KEYS: &[&str] = &[
    "species.gamma_total",
    "species.gamma_g",
    "species.gamma_r",
    "fields.omega_coupling",
    "fields.detuning_g0",
    "fields.detuning_r0",
    "fields.gamma_ge",
    "fields.gamma_re",
    "fields.gamma_gr",
    "geometry.nu_r",
    "geometry.nu_z",
];

const PLAIN_KEYS: &[&str] = &[
    "species.mass",
    "species.wavelength",
    "fields.k_g",
    "fields.k_r",
    "geometry.kind",
    "geometry.number_density",
    "geometry.atom_count",
    "numerics.series_rel_tol",
    "numerics.quad_rel_tol",
    "numerics.faddeeva_switch_radius",
    "numerics.bisection_tol",
    "interaction.scattering_length",
];

/// A syntactically valid configuration document: raw values keyed by their
/// canonical name (frequencies already converted to rad/s).
#[derive(Debug, Clone, Default)]
pub struct ConfigDocument {
    numbers: BTreeMap<&'static str, (f64, String)>,
    kind: Option<String>,
}

impl ConfigDocument {
    pub fn parse(text: &str) -> Result<Self> {
        let mut doc = ConfigDocument::default();
        let mut issues = Vec::new();
        let mut seen: BTreeMap<&'static str, String> = BTreeMap::new();

        for (lineno, raw) in text.lines().enumerate() {
            let line = match raw.find('#') {
                Some(i) => &raw[..i],
                None => raw,
            }
            .trim();
            if line.is_empty() {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                issues.push(issue(
                    &format!("line {}", lineno + 1),
                    format!("expected `key = value`, got `{line}`"),
                ));
                continue;
            };
            let key = key.trim();
            let value = value.trim();

            let Some((canonical, scale)) = canonical_key(key) else {
                issues.push(issue(key, "unknown key"));
                continue;
            };
            if let Some(prev) = seen.insert(canonical, key.to_string()) {
                issues.push(issue(key, format!("duplicate of `{prev}`")));
                continue;
            }
            if canonical == "geometry.kind" {
                doc.kind = Some(value.to_string());
                continue;
            }
            match value.parse::<f64>() {
                Ok(v) if v.is_finite() => {
                    doc.numbers.insert(canonical, (v * scale, key.to_string()));
                }
                _ => issues.push(issue(key, format!("malformed number `{value}`"))),
            }
        }
        if issues.is_empty() {
            Ok(doc)
        } else {
            Err(Error::Config(issues))
        }
    }

    /// Validates the document and assembles the configuration. `kind`
    /// overrides `geometry.kind` when given.
    pub fn build(&self, kind: Option<GeometryKind>) -> Result<ExperimentConfig> {
        let mut issues = Vec::new();
        let get = |k: &str| self.numbers.get(k).map(|(v, _)| *v);
        // report problems under the key the user actually wrote
        let written = |k: &'static str| {
            self.numbers
                .get(k)
                .map(|(_, w)| w.clone())
                .unwrap_or_else(|| k.to_string())
        };
        let require = |k: &'static str, issues: &mut Vec<ConfigIssue>| -> f64 {
            match get(k) {
                Some(v) => v,
                None => {
                    issues.push(issue(k, "missing required key"));
                    f64::NAN
                }
            }
        };

        let mass = require("species.mass", &mut issues);
        let wavelength = require("species.wavelength", &mut issues);
        let (gamma_g, gamma_r) = match (get("species.gamma_total"), get("species.gamma_g"), get("species.gamma_r")) {
            (Some(total), None, None) => (0.5 * total, 0.5 * total),
            (Some(total), Some(g), None) => (g, total - g),
            (Some(total), None, Some(r)) => (total - r, r),
            (None, Some(g), Some(r)) => (g, r),
            (Some(_), Some(_), Some(_)) => {
                issues.push(issue(
                    "species.gamma_total",
                    "give at most two of gamma_total, gamma_g, gamma_r",
                ));
                (f64::NAN, f64::NAN)
            }
            _ => {
                issues.push(issue(
                    "species.gamma_total",
                    "missing required key (or both species.gamma_g and species.gamma_r)",
                ));
                (f64::NAN, f64::NAN)
            }
        };
        let omega = require("fields.omega_coupling", &mut issues);

        let kind = match (kind, self.kind.as_deref()) {
            (Some(k), _) => Some(k),
            (None, Some(s)) => match s.parse::<GeometryKind>() {
                Ok(k) => Some(k),
                Err(e) => {
                    issues.push(issue("geometry.kind", e));
                    None
                }
            },
            (None, None) => {
                issues.push(issue("geometry.kind", "missing required key"));
                None
            }
        };
        let geometry = match kind {
            Some(GeometryKind::Box) => Some(Geometry::Box(BoxParams {
                number_density: require("geometry.number_density", &mut issues),
            })),
            Some(GeometryKind::Trap) => Some(Geometry::HarmonicTrap(TrapParams {
                nu_r: require("geometry.nu_r", &mut issues),
                nu_z: require("geometry.nu_z", &mut issues),
                atom_count: require("geometry.atom_count", &mut issues),
            })),
            None => None,
        };

        let mut species = None;
        if issues.is_empty() {
            match AtomSpecies::with_branches(mass, wavelength, gamma_g, gamma_r) {
                Ok(s) => species = Some(s),
                Err(Error::Config(mut more)) => {
                    for i in &mut more {
                        if i.key == "species.gamma_g" || i.key == "species.gamma_r" {
                            // the user may have written the total instead
                            if get("species.gamma_total").is_some() {
                                i.key = written("species.gamma_total");
                            }
                        } else if let Some(k) = canonical_of(&i.key) {
                            i.key = written(k);
                        }
                    }
                    issues.extend(more);
                }
                Err(e) => return Err(e),
            }
        }
        let (Some(species), Some(geometry)) = (species, geometry) else {
            return Err(Error::Config(issues));
        };

        let gamma = species.gamma_total_rad_s();
        let k = species.wave_number_per_m();
        let fields = FieldParams {
            omega_coupling: omega,
            detuning_g0: get("fields.detuning_g0").unwrap_or(0.0),
            detuning_r0: get("fields.detuning_r0").unwrap_or(0.0),
            gamma_ge: get("fields.gamma_ge").unwrap_or(0.5 * gamma),
            gamma_re: get("fields.gamma_re").unwrap_or(0.5 * gamma),
            gamma_gr: get("fields.gamma_gr").unwrap_or(hz_to_rad(1000.0)),
            k_g: get("fields.k_g").unwrap_or(k),
            k_r: get("fields.k_r").unwrap_or(k),
        };
        let defaults = NumericsConfig::default();
        let numerics = NumericsConfig {
            series_rel_tol: get("numerics.series_rel_tol").unwrap_or(defaults.series_rel_tol),
            quad_rel_tol: get("numerics.quad_rel_tol").unwrap_or(defaults.quad_rel_tol),
            faddeeva_switch_radius: get("numerics.faddeeva_switch_radius")
                .unwrap_or(defaults.faddeeva_switch_radius),
            bisection_tol: get("numerics.bisection_tol").unwrap_or(defaults.bisection_tol),
        };
        let config = ExperimentConfig {
            species,
            fields,
            geometry,
            numerics,
            scattering_length: get("interaction.scattering_length"),
        };
        match config.validate() {
            Ok(()) => Ok(config),
            Err(Error::Config(mut more)) => {
                for i in &mut more {
                    if let Some(k) = canonical_of(&i.key) {
                        i.key = written(k);
                    }
                }
                Err(Error::Config(more))
            }
            Err(e) => Err(e),
        }
    }
}

/// Parses and validates a configuration document.
pub fn load_config(text: &str) -> Result<ExperimentConfig> {
    ConfigDocument::parse(text)?.build(None)
}

fn canonical_of(key: &str) -> Option<&'static str> {
    FREQUENCY_KEYS
        .iter()
        .chain(PLAIN_KEYS.iter())
        .copied()
        .find(|k| *k == key)
}

/// Maps a written key to its canonical name and the factor converting the
/// written unit to SI.
fn canonical_key(key: &str) -> Option<(&'static str, f64)> {
    if let Some(k) = PLAIN_KEYS.iter().find(|k| **k == key) {
        return Some((k, 1.0));
    }
    for k in FREQUENCY_KEYS {
        if let Some(rest) = key.strip_prefix(k) {
            match rest {
                "_rad" => return Some((k, 1.0)),
                "_hz" => return Some((k, TWO_PI)),
                _ => {}
            }
        }
    }
    None
}
