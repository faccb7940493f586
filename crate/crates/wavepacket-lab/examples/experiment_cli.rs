//! Driving experiments from a configuration, as the `wavepacket-lab` binary
//! does: parse TOML, validate, run commands and read back the artifacts.
//!
//! cargo run --example experiment_cli

use wavepacket_lab::cli::{error_exit_code, run, verdict_exit_code, Command, ExperimentConfig};

const CONFIG: &str = r#"
n = 3
estimates = ["dispersive", "morawetz"]

[data]
family = "localized"
big_n = 4
seed = 2

[grid]
t_max = 8.0
r_max = 24.0
"#;

fn main() -> wavepacket_lab::Result<()> {
    let cfg = ExperimentConfig::from_toml(CONFIG)?;
    let out = std::env::temp_dir().join("wavepacket-lab-example");
    for cmd in [Command::Propagate, Command::Packets] {
        let s = run(cmd, &cfg, &out)?;
        for r in &s.reports {
            println!(
                "{:<12} {:<24} {:<5} {:.3e}  {}",
                cmd.name(),
                r.name,
                r.verdict.to_string(),
                r.statistic,
                r.criterion
            );
        }
        println!("  exit code {}", verdict_exit_code(s.verdict));
    }

    // verify needs the constants table written by fit-constants.
    let e = run(Command::Verify, &cfg, &out.join("empty")).unwrap_err();
    println!("verify without constants: {e} (exit {})", error_exit_code(&e));

    let bad = ExperimentConfig::from_toml("l_max = 16\n[data]\nfamily = \"knapp\"\neps = 0.125").unwrap();
    let e = run(Command::Propagate, &bad, &out).unwrap_err();
    println!("Knapp data below the L_max floor: {e} (exit {})", error_exit_code(&e));

    let report = run(Command::Report, &cfg, &out)?;
    println!(
        "report over {} checks: {}; see {}",
        report.reports.len(),
        report.verdict,
        out.join("report.md").display()
    );
    Ok(())
}
