//! Command-line front end: temperature sweeps, detuning scans and the
//! zero-temperature report. Output is deterministic for identical inputs.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::box_gas::{box_thermo, chi_box, tc_box};
use crate::doppler::SeriesMode;
use crate::eit::{group_velocity_from_response, ComplexResponse};
use crate::error::{Error, Result};
use crate::params::{ConfigDocument, ExperimentConfig, GeometryKind};
use crate::tf_model::tf_report;
use crate::trap_gas::{chi_trap_local, mean_delay, tc_trap, trap_thermo, FcMode, PinholeSpec};

/// Exit status for bad input, including usage errors.
pub const EXIT_VALIDATION: i32 = 1;
/// Exit status for points outside the physical domain of the model.
pub const EXIT_PHYSICS: i32 = 2;

/// Pinhole radius used when none is given, m.
pub const DEFAULT_PINHOLE_RADIUS_M: f64 = 15e-6;

#[derive(Debug, Parser)]
#[command(name = "slowlight", version, about = "EIT slow light in ideal Bose gases")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Group velocity and delay against temperature (in units of Tc).
    Sweep(SweepArgs),
    /// Susceptibility against probe detuning at one temperature.
    Chi(ChiArgs),
    /// Zero-temperature ideal-gas and Thomas-Fermi estimates, as JSON.
    Tf(TfArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GeometryArg {
    Box,
    Trap,
}

impl From<GeometryArg> for GeometryKind {
    fn from(g: GeometryArg) -> Self {
        match g {
            GeometryArg::Box => GeometryKind::Box,
            GeometryArg::Trap => GeometryKind::Trap,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Exact,
    Asymptotic,
}

impl From<ModeArg> for SeriesMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Exact => SeriesMode::Exact,
            ModeArg::Asymptotic => SeriesMode::Asymptotic,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FcArg {
    Paper,
    Exact,
}

impl From<FcArg> for FcMode {
    fn from(m: FcArg) -> Self {
        match m {
            FcArg::Paper => FcMode::PaperApprox,
            FcArg::Exact => FcMode::Exact,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ScaleArg {
    Linear,
    Log,
}

/// Flags shared by every physics subcommand.
#[derive(Debug, Args)]
pub struct CommonArgs {
    /// Configuration file (`key = value` lines).
    #[arg(long)]
    pub config: PathBuf,
    /// Overrides `geometry.kind` from the configuration.
    #[arg(long, value_enum)]
    pub geometry: Option<GeometryArg>,
    /// Coupling Rabi frequency in units of the natural linewidth gamma.
    #[arg(long)]
    pub omega_coupling_gamma: Option<f64>,
    /// Write to this file instead of standard output.
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// Worker threads; 0 uses every core.
    #[arg(long, default_value_t = 0)]
    pub jobs: usize,
    #[arg(long, value_enum, default_value_t = ModeArg::Exact)]
    pub mode: ModeArg,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Lowest T/Tc.
    #[arg(long, default_value_t = 0.2)]
    pub t_min: f64,
    /// Highest T/Tc.
    #[arg(long, default_value_t = 2.0)]
    pub t_max: f64,
    #[arg(long, default_value_t = 50)]
    pub t_points: usize,
    #[arg(long, value_enum, default_value_t = ScaleArg::Linear)]
    pub t_scale: ScaleArg,
    /// Fixed pinhole radius in micrometres (trap only; default 15).
    #[arg(long, conflicts_with = "pinhole_thermal")]
    pub pinhole_radius_um: Option<f64>,
    /// Pinhole radius sqrt(k_B T / m nu_r^2) following the cloud (trap only).
    #[arg(long)]
    pub pinhole_thermal: bool,
    /// Half path length through the cloud in micrometres; default is the whole axis.
    #[arg(long)]
    pub path_half_length_um: Option<f64>,
    #[arg(long, value_enum, default_value_t = FcArg::Paper)]
    pub fc_mode: FcArg,
}

#[derive(Debug, Args)]
pub struct ChiArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Temperature in K.
    #[arg(long, required_unless_present = "t_over_tc", conflicts_with = "t_over_tc")]
    pub temperature: Option<f64>,
    /// Temperature in units of Tc.
    #[arg(long)]
    pub t_over_tc: Option<f64>,
    /// Lowest probe detuning Delta_g0, in units of gamma.
    #[arg(long, default_value_t = -2.0, allow_negative_numbers = true)]
    pub detuning_min_gamma: f64,
    /// Highest probe detuning Delta_g0, in units of gamma.
    #[arg(long, default_value_t = 2.0, allow_negative_numbers = true)]
    pub detuning_max_gamma: f64,
    #[arg(long, default_value_t = 401)]
    pub detuning_points: usize,
}

#[derive(Debug, Args)]
pub struct TfArgs {
    #[arg(long)]
    pub config: PathBuf,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

/// One row of a temperature sweep. For the box, the delay refers to a
/// 1 m path (cloud_size = 1 m); for the trap chi is taken at the centre.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepRecord {
    pub t_over_tc: f64,
    /// K
    pub temperature: f64,
    pub fugacity: f64,
    pub re_chi: f64,
    pub im_chi: f64,
    /// s
    pub mean_delay: f64,
    /// m
    pub cloud_size: f64,
    /// m/s
    pub group_velocity: f64,
}

pub const SWEEP_HEADER: &str =
    "t_over_tc,temperature_K,fugacity,re_chi,im_chi,mean_delay_s,cloud_size_m,group_velocity_m_per_s";
pub const CHI_HEADER: &str = "detuning_gamma,detuning_rad_per_s,re_chi,im_chi";

/// What a sweep evaluates at each temperature.
#[derive(Debug, Clone, Copy)]
pub struct SweepOptions {
    pub mode: SeriesMode,
    pub pinhole: PinholeSpec,
    pub fc_mode: FcMode,
}

impl Default for SweepOptions {
    fn default() -> Self {
        SweepOptions {
            mode: SeriesMode::Exact,
            pinhole: PinholeSpec::fixed(DEFAULT_PINHOLE_RADIUS_M),
            fc_mode: FcMode::PaperApprox,
        }
    }
}

pub fn critical_temperature(config: &ExperimentConfig) -> Result<f64> {
    match config.geometry.kind() {
        GeometryKind::Box => tc_box(&config.species, config.box_params()?.number_density),
        GeometryKind::Trap => tc_trap(config),
    }
}

/// Evaluates one sweep row at temperature T (K).
pub fn sweep_record(config: &ExperimentConfig, temperature: f64, opts: &SweepOptions) -> Result<SweepRecord> {
    let t_c = critical_temperature(config)?;
    match config.geometry.kind() {
        GeometryKind::Box => {
            let th = box_thermo(config, temperature)?;
            let resp = chi_box(config, temperature, opts.mode)?;
            let vg = group_velocity_from_response(&resp, config.probe_frequency_rad_s())?;
            Ok(SweepRecord {
                t_over_tc: temperature / t_c,
                temperature,
                fugacity: th.fugacity.value(),
                re_chi: resp.chi.re,
                im_chi: resp.chi.im,
                mean_delay: 1.0 / vg,
                cloud_size: 1.0,
                group_velocity: vg,
            })
        }
        GeometryKind::Trap => {
            let th = trap_thermo(config, temperature)?;
            let resp = chi_trap_local(config, temperature, 0.0, 0.0, opts.mode)?;
            let delay = mean_delay(config, temperature, &opts.pinhole, opts.fc_mode, opts.mode)?;
            if !(delay.mean_delay > 0.0) {
                return Err(Error::Domain(format!(
                    "mean delay {:e} s is not positive, so there is no group velocity",
                    delay.mean_delay
                )));
            }
            Ok(SweepRecord {
                t_over_tc: temperature / t_c,
                temperature,
                fugacity: th.fugacity.value(),
                re_chi: resp.chi.re,
                im_chi: resp.chi.im,
                mean_delay: delay.mean_delay,
                cloud_size: delay.cloud_size,
                group_velocity: delay.group_velocity,
            })
        }
    }
}

/// T/Tc grid, ascending.
pub fn temperature_grid(t_min: f64, t_max: f64, points: usize, scale: ScaleArg) -> Result<Vec<f64>> {
    if points < 2 {
        return Err(Error::invalid("t-points", format!("need at least 2 grid points, got {points}")));
    }
    if !(t_min > 0.0 && t_min.is_finite()) {
        return Err(Error::invalid("t-min", format!("must be positive, got {t_min}")));
    }
    if !(t_max > t_min && t_max.is_finite()) {
        return Err(Error::invalid("t-max", format!("must exceed t-min = {t_min}, got {t_max}")));
    }
    let step = |i: usize| i as f64 / (points - 1) as f64;
    let grid = (0..points)
        .map(|i| match scale {
            ScaleArg::Linear => t_min + (t_max - t_min) * step(i),
            ScaleArg::Log => (t_min.ln() + (t_max / t_min).ln() * step(i)).exp(),
        })
        .collect();
    Ok(grid)
}

/// Rows for every T/Tc in `grid`, in grid order.
pub fn run_sweep(config: &ExperimentConfig, grid: &[f64], opts: &SweepOptions) -> Result<Vec<SweepRecord>> {
    let t_c = critical_temperature(config)?;
    grid.par_iter()
        .map(|t| {
            let temperature = t * t_c;
            sweep_record(config, temperature, opts).map_err(|e| e.at_temperature(temperature))
        })
        .collect()
}

/// (detuning in gamma, detuning in rad/s, response) rows of a probe scan.
/// Only Delta_g0 moves; the coupling detuning stays as configured.
pub fn run_chi_scan(
    config: &ExperimentConfig,
    temperature: f64,
    detunings_gamma: &[f64],
    mode: SeriesMode,
) -> Result<Vec<(f64, f64, ComplexResponse)>> {
    let gamma = config.species.gamma_total_rad_s();
    detunings_gamma
        .par_iter()
        .map(|&x| {
            let mut c = *config;
            c.fields.detuning_g0 = x * gamma;
            let resp = match c.geometry.kind() {
                GeometryKind::Box => chi_box(&c, temperature, mode),
                GeometryKind::Trap => chi_trap_local(&c, temperature, 0.0, 0.0, mode),
            }?;
            Ok((x, c.fields.detuning_g0, resp))
        })
        .collect()
}

fn num(v: f64) -> String {
    format!("{v:.11e}")
}

fn metadata_line(command: &str, config_text: &[u8]) -> String {
    let digest = Sha256::digest(config_text);
    let hex: String = digest.iter().map(|b| format!("{b:02x}")).collect();
    format!("# slowlight {} {command} config_sha256={hex}", env!("CARGO_PKG_VERSION"))
}

pub fn sweep_csv(records: &[SweepRecord], metadata: &str) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{metadata}");
    let _ = writeln!(out, "{SWEEP_HEADER}");
    for r in records {
        let fields = [
            r.t_over_tc,
            r.temperature,
            r.fugacity,
            r.re_chi,
            r.im_chi,
            r.mean_delay,
            r.cloud_size,
            r.group_velocity,
        ];
        let _ = writeln!(out, "{}", fields.map(num).join(","));
    }
    out
}

fn load(common_config: &Path, geometry: Option<GeometryArg>) -> Result<(ExperimentConfig, Vec<u8>)> {
    let bytes = std::fs::read(common_config)?;
    let text = String::from_utf8(bytes.clone())
        .map_err(|_| Error::invalid("config", format!("{} is not UTF-8", common_config.display())))?;
    let config = ConfigDocument::parse(&text)?.build(geometry.map(Into::into))?;
    Ok((config, bytes))
}

fn apply_common(config: &mut ExperimentConfig, common: &CommonArgs) -> Result<()> {
    if let Some(x) = common.omega_coupling_gamma {
        if !(x >= 0.0 && x.is_finite()) {
            return Err(Error::invalid("omega-coupling-gamma", format!("must be non-negative, got {x}")));
        }
        config.fields.omega_coupling = x * config.species.gamma_total_rad_s();
    }
    Ok(())
}

fn with_pool<T: Send>(jobs: usize, f: impl FnOnce() -> T + Send) -> Result<T> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| Error::invalid("jobs", e.to_string()))?;
    Ok(pool.install(f))
}

fn emit(output: &Option<PathBuf>, text: &str, stdout: &mut dyn Write) -> Result<()> {
    match output {
        Some(path) => std::fs::write(path, text)?,
        None => stdout.write_all(text.as_bytes())?,
    }
    Ok(())
}

fn cmd_sweep(args: &SweepArgs, stdout: &mut dyn Write) -> Result<()> {
    let (mut config, bytes) = load(&args.common.config, args.common.geometry)?;
    apply_common(&mut config, &args.common)?;
    let grid = temperature_grid(args.t_min, args.t_max, args.t_points, args.t_scale)?;
    let radius = match (args.pinhole_thermal, args.pinhole_radius_um) {
        (true, _) => PinholeSpec::thermal(),
        (false, Some(um)) => PinholeSpec::fixed(um * 1e-6),
        (false, None) => PinholeSpec::fixed(DEFAULT_PINHOLE_RADIUS_M),
    };
    let pinhole = match args.path_half_length_um {
        Some(um) => radius.with_path_half_length(um * 1e-6),
        None => radius,
    };
    pinhole.validate()?;
    let opts = SweepOptions {
        mode: args.common.mode.into(),
        pinhole,
        fc_mode: args.fc_mode.into(),
    };
    let records = with_pool(args.common.jobs, || run_sweep(&config, &grid, &opts))??;
    emit(&args.common.output, &sweep_csv(&records, &metadata_line("sweep", &bytes)), stdout)
}

fn cmd_chi(args: &ChiArgs, stdout: &mut dyn Write) -> Result<()> {
    let (mut config, bytes) = load(&args.common.config, args.common.geometry)?;
    apply_common(&mut config, &args.common)?;
    let temperature = match (args.temperature, args.t_over_tc) {
        (Some(t), _) => t,
        (None, Some(x)) => x * critical_temperature(&config)?,
        (None, None) => return Err(Error::invalid("temperature", "give --temperature or --t-over-tc")),
    };
    if !(temperature >= 0.0 && temperature.is_finite()) {
        return Err(Error::invalid("temperature", format!("must be non-negative, got {temperature}")));
    }
    let (lo, hi, n) = (args.detuning_min_gamma, args.detuning_max_gamma, args.detuning_points);
    if n < 2 || !(hi > lo) || !lo.is_finite() || !hi.is_finite() {
        return Err(Error::invalid(
            "detuning grid",
            format!("need at least 2 points and max > min, got {n} points on [{lo}, {hi}]"),
        ));
    }
    let grid: Vec<f64> = (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect();
    let mode = args.common.mode.into();
    let rows = with_pool(args.common.jobs, || run_chi_scan(&config, temperature, &grid, mode))?
        .map_err(|e| e.at_temperature(temperature))?;
    let mut out = String::new();
    let _ = writeln!(out, "{}", metadata_line("chi", &bytes));
    let _ = writeln!(out, "{CHI_HEADER}");
    for (x, rad, resp) in rows {
        let _ = writeln!(out, "{},{},{},{}", num(x), num(rad), num(resp.chi.re), num(resp.chi.im));
    }
    emit(&args.common.output, &out, stdout)
}

fn cmd_tf(args: &TfArgs, stdout: &mut dyn Write) -> Result<()> {
    let (config, _) = load(&args.config, Some(GeometryArg::Trap))?;
    let report = tf_report(&config)?;
    let mut text = serde_json::to_string_pretty(&report).map_err(|e| Error::invalid("report", e.to_string()))?;
    text.push('\n');
    emit(&args.output, &text, stdout)
}

fn exit_code(e: &Error) -> i32 {
    if e.is_validation() {
        EXIT_VALIDATION
    } else {
        EXIT_PHYSICS
    }
}

/// Runs the command line `args` (program name first) and returns the exit
/// status. Usage errors map to the validation status.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_VALIDATION } else { 0 };
            let rendered = e.render().to_string();
            let _ = if code == 0 {
                stdout.write_all(rendered.as_bytes())
            } else {
                stderr.write_all(rendered.as_bytes())
            };
            return code;
        }
    };
    let result = match &cli.command {
        Command::Sweep(a) => cmd_sweep(a, stdout),
        Command::Chi(a) => cmd_chi(a, stdout),
        Command::Tf(a) => cmd_tf(a, stdout),
    };
    match result {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            exit_code(&e)
        }
    }
}
