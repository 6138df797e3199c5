use std::path::PathBuf;
use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_slowlight"))
}

fn config(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../configs").join(name)
}

fn run_ok(args: &[&str]) -> String {
    let out = bin().args(args).output().unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn rows(csv: &str) -> Vec<Vec<f64>> {
    csv.lines()
        .skip(2)
        .map(|l| l.split(',').map(|v| v.parse().unwrap()).collect())
        .collect()
}

#[test]
fn sweep_is_deterministic_across_thread_counts() {
    let c = config("fig2_trap.conf");
    let args = |jobs: &'static str| {
        vec!["sweep", "--config", c.to_str().unwrap(), "--t-points", "6", "--jobs", jobs].into_iter().map(String::from).collect::<Vec<_>>()
    };
    let one = bin().args(args("1")).output().unwrap();
    let four = bin().args(args("4")).output().unwrap();
    assert!(one.status.success());
    assert_eq!(one.stdout, four.stdout);
}

#[test]
fn sweep_header_carries_units_and_metadata() {
    let c = config("fig2_box.conf");
    let out = run_ok(&["sweep", "--config", c.to_str().unwrap(), "--t-points", "3"]);
    let mut lines = out.lines();
    let meta = lines.next().unwrap();
    assert!(meta.starts_with("# slowlight ") && meta.contains("config_sha256="), "{meta}");
    let header = lines.next().unwrap();
    assert!(header.contains("temperature_K") && header.contains("group_velocity_m_per_s"));
    assert_eq!(rows(&out).len(), 3);
}

#[test]
fn output_file_matches_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("sweep.csv");
    let c = config("fig2_box.conf");
    let stdout = run_ok(&["sweep", "--config", c.to_str().unwrap(), "--t-points", "3"]);
    run_ok(&["sweep", "--config", c.to_str().unwrap(), "--t-points", "3", "--output", path.to_str().unwrap()]);
    assert_eq!(std::fs::read_to_string(path).unwrap(), stdout);
}

#[test]
fn validation_errors_exit_one() {
    let c = config("fig2_trap.conf");
    let s = c.to_str().unwrap();
    for args in [
        vec!["sweep", "--config", s, "--t-points", "1"],
        vec!["sweep", "--config", s, "--t-min", "-1"],
        vec!["sweep", "--config", "/nonexistent/slowlight.conf"],
        vec!["sweep", "--config", s, "--pinhole-radius-um", "10", "--pinhole-thermal"],
        vec!["bogus"],
    ] {
        let out = bin().args(&args).output().unwrap();
        assert_eq!(out.status.code(), Some(1), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    }
}

#[test]
fn malformed_config_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.conf");
    std::fs::write(&path, "species.mass = -1\ngeometry.kind = box\ngeometry.number_density = 1e18\n").unwrap();
    let out = bin().args(["sweep", "--config", path.to_str().unwrap()]).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn tf_reports_nine_si_fields() {
    let c = config("sec4_tf.conf");
    let out = run_ok(&["tf", "--config", c.to_str().unwrap()]);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    let obj = v.as_object().unwrap();
    assert_eq!(obj.len(), 9);
    for key in ["a0_r", "a0_z", "n_ideal", "vg_ideal", "mu", "r_tf_r", "r_tf_z", "n_tf", "vg_tf"] {
        assert!(obj[key].as_f64().unwrap() > 0.0, "{key}");
    }
}

fn chi_scan(extra: &[&str]) -> Vec<Vec<f64>> {
    let c = config("fig2_box.conf");
    let mut args = vec!["chi", "--config", c.to_str().unwrap(), "--t-over-tc", "1.5", "--detuning-points", "41"];
    args.extend_from_slice(extra);
    rows(&run_ok(&args))
}

#[test]
fn transparency_dip_needs_the_coupling_field() {
    let with = chi_scan(&[]);
    let centre = &with[20];
    assert_eq!(centre[0], 0.0);
    assert!(centre[3] < with[15][3], "no dip: {} vs {}", centre[3], with[15][3]);

    let without = chi_scan(&["--omega-coupling-gamma", "0"]);
    let peak = without.iter().map(|r| r[3]).fold(f64::MIN, f64::max);
    assert_eq!(without[20][3], peak, "absorption should peak on resonance without coupling");
}

#[test]
fn lossless_dark_state_is_transparent() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("lossless.conf");
    let text = std::fs::read_to_string(config("fig2_box.conf")).unwrap().replace("fields.gamma_gr_hz = 1000", "fields.gamma_gr_hz = 0");
    assert!(text.contains("fields.gamma_gr_hz = 0"));
    std::fs::write(&path, text).unwrap();
    let out = run_ok(&["chi", "--config", path.to_str().unwrap(), "--t-over-tc", "0.5", "--detuning-points", "41"]);
    let r = rows(&out);
    let centre = &r[20];
    assert_eq!(centre[0], 0.0);
    assert!(centre[3].abs() < 1e-6 * r[0][3].abs(), "Im chi = {} at resonance", centre[3]);
}

#[test]
fn help_and_version_exit_zero() {
    assert!(bin().arg("--help").output().unwrap().status.success());
    assert!(bin().arg("--version").output().unwrap().status.success());
}

#[test]
fn anomalous_dispersion_exits_two() {
    // without the coupling field the resonant medium has no group velocity
    let c = config("fig2_box.conf");
    let out = bin()
        .args(["sweep", "--config", c.to_str().unwrap(), "--t-points", "3", "--omega-coupling-gamma", "0"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("at T ="));
}
