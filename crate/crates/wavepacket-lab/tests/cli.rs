use std::path::Path;
use std::process::{Command, Output};

use wavepacket_lab::cli::{ExperimentConfig, OUT_ENV};

fn lab(args: &[&str], out_env: Option<&Path>) -> Output {
    let mut c = Command::new(env!("CARGO_BIN_EXE_wavepacket-lab"));
    c.args(args).env_remove(OUT_ENV);
    if let Some(p) = out_env {
        c.env(OUT_ENV, p);
    }
    c.output().expect("binary runs")
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

const SMALL: &str = r#"
n = 3
[data]
family = "bump"
[grid]
t_max = 8.0
r_max = 24.0
"#;

#[test]
fn zero_data_verify_is_trivially_passing() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "smoke.toml", include_str!("../configs/smoke.toml"));
    let out = dir.path().join("out");
    let o = lab(&["verify", "--config", &cfg, "--out", out.to_str().unwrap()], None);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let summary = std::fs::read_to_string(out.join("verify/summary.json")).unwrap();
    assert!(summary.contains("\"PASS\""));
    assert!(!summary.contains("FAIL"));
}

#[test]
fn verify_without_constants_is_a_missing_prerequisite() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "c.toml", "estimates = [\"dispersive\"]\n");
    let o = lab(&["verify", "--config", &cfg, "--out", dir.path().join("o").to_str().unwrap()], None);
    assert_eq!(o.status.code(), Some(4));
    assert!(String::from_utf8_lossy(&o.stderr).contains("constants"));
}

#[test]
fn knapp_below_the_floor_is_an_invalid_config() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "k.toml", "l_max = 32\n[knapp]\neps = [0.25, 0.0625]\n");
    let o = lab(&["knapp-scan", "--config", &cfg, "--out", dir.path().to_str().unwrap()], None);
    assert_eq!(o.status.code(), Some(3));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("epsilon 0.0625") && err.contains("floor"), "{err}");
}

#[test]
fn invalid_fields_are_named() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "bad.toml", "[grid]\nr_panel = 0.0\n");
    let o = lab(&["propagate", "--config", &cfg, "--out", dir.path().to_str().unwrap()], None);
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("r_panel"));
    let cfg = write(dir.path(), "typo.toml", "[grid]\nrmax = 3.0\n");
    let o = lab(&["propagate", "--config", &cfg, "--out", dir.path().to_str().unwrap()], None);
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("rmax"));
}

#[test]
fn propagate_is_reproducible_and_honours_the_environment() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "p.toml", SMALL);
    let a = dir.path().join("a");
    let b = dir.path().join("b");
    let o = lab(&["propagate", "--config", &cfg], Some(&a));
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let o = lab(&["propagate", "--config", &cfg, "--threads", "1", "--out", b.to_str().unwrap()], Some(&a));
    assert_eq!(o.status.code(), Some(0));
    for f in ["field.csv", "reports/energy.csv", "reports/energy.json", "plots/energy.csv", "summary.json"] {
        let x = std::fs::read(a.join("propagate").join(f)).unwrap();
        let y = std::fs::read(b.join("propagate").join(f)).unwrap();
        assert!(x == y, "{f} differs between runs");
    }

    let o = lab(&["report", "--config", &cfg], Some(&a));
    assert_eq!(o.status.code(), Some(0));
    assert!(std::fs::read_to_string(a.join("report.md")).unwrap().contains("propagate/energy"));
    let o = lab(&["report", "--config", &cfg, "--out", dir.path().join("nothing").to_str().unwrap()], None);
    assert_eq!(o.status.code(), Some(4));
}

#[test]
fn packets_reconstruct_the_data() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "p.toml", "[data]\nfamily = \"localized\"\nbig_n = 2\nseed = 3\n[grid]\nt_max = 8.0\n");
    let o = lab(&["packets", "--config", &cfg, "--out", dir.path().to_str().unwrap()], None);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stdout));
    assert!(dir.path().join("packets/coefficients.csv").exists());
}

#[test]
fn fit_constants_then_verify_dispersive() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "d.toml",
        r#"
estimates = ["dispersive"]
[data]
family = "bump"
[fit]
refine = false
[fit.grid]
ls = [0, 4]
m_max = 8.0
m_step = 1.0
r_max = 16.0
r_step = 0.5
seam_levels = 2
[dispersive]
calibration_seeds = [1001, 1002]
holdout_ns = [8]
holdout_seeds = [1, 2]
times = [0.0, 8.0]
r_before = 2.0
r_after = 4.0
r_step = 1.0
"#,
    );
    let out = dir.path().join("o");
    let o = lab(&["fit-constants", "--config", &cfg, "--out", out.to_str().unwrap()], None);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let table = std::fs::read_to_string(out.join("constants.csv")).unwrap();
    assert!(table.starts_with("n,N1,N2,regime,C,grid_hash"));
    let o = lab(&["verify", "--config", &cfg, "--out", out.to_str().unwrap()], None);
    assert!(matches!(o.status.code(), Some(0 | 1)), "{}", String::from_utf8_lossy(&o.stderr));
    let rep = std::fs::read_to_string(out.join("verify/reports/dispersive.json")).unwrap();
    assert!(rep.contains("C_disp") && rep.contains("config_hash"));
}

#[test]
fn shipped_configs_parse_and_validate() {
    for text in [include_str!("../configs/default.toml"), include_str!("../configs/smoke.toml")] {
        let c = ExperimentConfig::from_toml(text).unwrap();
        c.validate().unwrap();
        assert_eq!(ExperimentConfig::from_toml(&c.to_toml().unwrap()).unwrap(), c);
    }
}
