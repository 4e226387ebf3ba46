use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use svkin::SchemeParams;
use svkin_cli::{counterexample_scan, refinement_study, run, CliError, RunOptions, Scenario};

#[derive(Parser)]
#[command(
    name = "svkin",
    version,
    about = "Kinetic hydrostatic-reconstruction solver with entropy audits"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a scenario, writing states.csv, audit.jsonl and summary.json.
    Run {
        config: PathBuf,
        #[arg(long, default_value = "out")]
        out: PathBuf,
        #[arg(long)]
        audit_every: Option<usize>,
        /// Override a config entry, e.g. `--set grid.cells=400`.
        #[arg(long = "set", value_name = "KEY=VALUE")]
        overrides: Vec<String>,
    },
    /// Refinement study of the integrated entropy violation.
    Refine {
        config: PathBuf,
        #[arg(long, default_value_t = 4)]
        levels: usize,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long = "set", value_name = "KEY=VALUE")]
        overrides: Vec<String>,
    },
    /// One-step dissipation of the moving false equilibrium over a range of σ.
    Counterexample {
        #[arg(long, default_value_t = 2.0)]
        h_l: f64,
        #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
        u: f64,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        z_l: f64,
        #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
        z_r: f64,
        #[arg(long, default_value_t = 1.0)]
        g: f64,
        #[arg(long, default_value_t = 0.9)]
        beta: f64,
        /// Comma-separated σ values; a geometric grid ending at β/v_m when omitted.
        #[arg(long, value_delimiter = ',')]
        sigma_grid: Vec<f64>,
    },
}

fn write_json(path: &std::path::Path, value: &impl serde::Serialize) -> Result<(), CliError> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    std::fs::write(path, text).map_err(|e| CliError::io(path, e))
}

fn execute(command: Command) -> Result<bool, CliError> {
    match command {
        Command::Run {
            config,
            out,
            audit_every,
            overrides,
        } => {
            let scenario = Scenario::load(&config, &overrides)?;
            let output = run(
                &scenario,
                &RunOptions {
                    out_dir: Some(out),
                    audit_every,
                },
            )?;
            println!("{}", serde_json::to_string_pretty(&output.summary)?);
            Ok(output.summary.passed())
        }
        Command::Refine {
            config,
            levels,
            out,
            overrides,
        } => {
            let scenario = Scenario::load(&config, &overrides)?;
            let study = refinement_study(&scenario, levels)?;
            println!(
                "{:>8} {:>12} {:>14} {:>8}",
                "cells", "dx (m)", "violation", "order"
            );
            for r in &study.rows {
                let order = match (study.exact, r.order) {
                    (true, _) => "exact".to_string(),
                    (false, Some(o)) => format!("{o:.3}"),
                    (false, None) => "-".to_string(),
                };
                println!(
                    "{:>8} {:>12.5e} {:>14.6e} {:>8}",
                    r.cells, r.dx, r.violation, order
                );
            }
            if let Some(dir) = out {
                std::fs::create_dir_all(&dir).map_err(|e| CliError::io(&dir, e))?;
                write_json(&dir.join("refinement.json"), &study)?;
            }
            Ok(study.rows.iter().all(|r| r.audit_violations == 0))
        }
        Command::Counterexample {
            h_l,
            u,
            z_l,
            z_r,
            g,
            beta,
            sigma_grid,
        } => {
            let params = SchemeParams::new(g, beta)?;
            let scan = counterexample_scan(h_l, u, z_l, z_r, &sigma_grid, &params)?;
            for row in &scan.rows {
                println!("{}", serde_json::to_string(row)?);
            }
            eprintln!(
                "v_m = {}, sigma_max = {}, D > 0 everywhere: {}, D/sigma increasing: {}",
                scan.v_m, scan.sigma_max, scan.strictly_positive, scan.monotone
            );
            Ok(scan.passed())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli.command) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            eprintln!("audit failed");
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
