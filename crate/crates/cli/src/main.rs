//! Command-line front end for the toric nearly-Kähler toolkit.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage or configuration
//! error. Worker count comes from `--workers`, then the `NK_WORKERS`
//! environment variable, then the rayon default.

mod families;
mod golden;
mod radial_cmd;
mod scan;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};
use nk_core::radial::Controls;

#[derive(Parser)]
#[command(
    name = "nk",
    about = "Verify and construct toric nearly-Kähler structures from scalar potentials on R^3"
)]
struct Cli {
    /// Worker threads for grid scans (overrides NK_WORKERS).
    #[arg(long, global = true)]
    workers: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Scan a potential over a grid and verify the structure equations.
    Verify {
        /// Family name: s3s3, radial:<file> or poly:<coeff-file>.
        #[arg(long)]
        family: String,
        /// Scan box as "a1,b1,a2,b2,a3,b3".
        #[arg(long = "box", allow_hyphen_values = true)]
        bounds: String,
        /// Grid resolution per axis as "n1,n2,n3".
        #[arg(long)]
        res: String,
        /// Jet mode: exact or fd.
        #[arg(long, default_value = "exact")]
        mode: String,
        /// Residual tolerance (defaults: 1e-9 exact, 1e-4 fd).
        #[arg(long)]
        tol: Option<f64>,
        /// Output path of the JSON report.
        #[arg(long)]
        out: PathBuf,
    },
    /// Integrate radial initial data from a sweep file.
    Radial {
        /// Sweep file with lines "t0 x0 xp0 [t_end]".
        #[arg(long)]
        sweep: PathBuf,
        /// Default integration end for 3-field lines.
        #[arg(long = "t-end")]
        t_end: Option<f64>,
        /// Output directory for trajectory CSVs and the summary JSON.
        #[arg(long)]
        out: PathBuf,
        /// Relative tolerance of the integrator.
        #[arg(long, default_value_t = 1e-10)]
        rtol: f64,
        /// Absolute tolerance of the integrator.
        #[arg(long, default_value_t = 1e-12)]
        atol: f64,
        /// Maximum step size.
        #[arg(long, default_value_t = 2e-3)]
        max_step: f64,
    },
    /// Run the golden closed-form suite of the S³×S³ potential.
    Golden {
        /// RNG seed for the sample points.
        #[arg(long, default_value_t = 0x6e6b_676f_6c64)]
        seed: u64,
        /// Number of random sample points.
        #[arg(long, default_value_t = 500)]
        points: usize,
        /// Optional JSON report path.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn worker_count(flag: Option<usize>) -> Option<usize> {
    if let Some(n) = flag {
        return (n > 0).then_some(n);
    }
    std::env::var("NK_WORKERS")
        .ok()
        .and_then(|v| v.parse::<usize>().ok())
        .filter(|&n| n > 0)
}

fn run(cli: Cli) -> Result<u8> {
    if let Some(n) = worker_count(cli.workers) {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .context("cannot configure worker pool")?;
    }

    match cli.command {
        Command::Verify {
            family,
            bounds,
            res,
            mode,
            tol,
            out,
        } => {
            let fam = families::resolve_family(&family)?;
            let b: Vec<f64> = parse_csv_numbers(&bounds, 6, "--box")?;
            let r: Vec<usize> = parse_csv_counts(&res, 3, "--res")?;
            let residual_tol = tol.unwrap_or(match mode.as_str() {
                "fd" => 1e-4,
                _ => 1e-9,
            });
            let config = scan::ScanConfig {
                family: family.clone(),
                bounds: [[b[0], b[1]], [b[2], b[3]], [b[4], b[5]]],
                resolution: [r[0], r[1], r[2]],
                mode,
                residual_tol,
                pivot_tol: 1e-12,
            };
            let report = scan::run_scan(&fam, &config)?;
            scan::write_report(&report, &out)?;
            let agg = &report.aggregates;
            eprintln!(
                "{} points, {} admissible ({:.1}%), max residual over U0 = {}",
                agg.points,
                agg.admissible_count,
                agg.admissible_fraction * 100.0,
                agg.max_residual_over_u0
                    .map(|v| format!("{v:.3e}"))
                    .unwrap_or_else(|| "n/a".to_string()),
            );
            Ok(if agg.pass { 0 } else { 1 })
        }
        Command::Radial {
            sweep,
            t_end,
            out,
            rtol,
            atol,
            max_step,
        } => {
            let text = std::fs::read_to_string(&sweep)
                .with_context(|| format!("cannot read sweep file '{}'", sweep.display()))?;
            let controls = Controls {
                rtol,
                atol,
                max_step,
                ..Controls::default()
            };
            let summary = radial_cmd::run_sweep(&text, t_end, &out, &controls)?;
            eprintln!(
                "{} accepted, {} rejected; summary in {}",
                summary.accepted,
                summary.rejected,
                out.join("radial_summary.json").display()
            );
            Ok(0)
        }
        Command::Golden { seed, points, out } => {
            let report = golden::run_golden(seed, points)?;
            for check in &report.checks {
                println!(
                    "{}: {} — worst {:.3e} (tol {:.0e})",
                    if check.pass { "PASS" } else { "FAIL" },
                    check.name,
                    check.worst,
                    check.tolerance
                );
            }
            if let Some(path) = out {
                let json = serde_json::to_string_pretty(&report)?;
                std::fs::write(&path, json)
                    .with_context(|| format!("cannot write '{}'", path.display()))?;
            }
            Ok(if report.pass { 0 } else { 1 })
        }
    }
}

fn parse_csv_numbers(text: &str, expect: usize, flag: &str) -> Result<Vec<f64>> {
    let values: Result<Vec<f64>, _> = text.split(',').map(|f| f.trim().parse()).collect();
    let values = values.with_context(|| format!("cannot parse {flag} '{text}'"))?;
    anyhow::ensure!(
        values.len() == expect,
        "{flag} expects {expect} comma-separated numbers, found {}",
        values.len()
    );
    Ok(values)
}

fn parse_csv_counts(text: &str, expect: usize, flag: &str) -> Result<Vec<usize>> {
    let values: Result<Vec<usize>, _> = text.split(',').map(|f| f.trim().parse()).collect();
    let values = values.with_context(|| format!("cannot parse {flag} '{text}'"))?;
    anyhow::ensure!(
        values.len() == expect,
        "{flag} expects {expect} comma-separated counts, found {}",
        values.len()
    );
    Ok(values)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(2)
        }
    }
}
