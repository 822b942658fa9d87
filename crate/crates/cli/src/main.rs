use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Result;
use clap::{Parser, Subcommand};
use sins_cli::{cmd_flops, cmd_propagate, cmd_sweep, parse_h_list, parse_method, REFERENCE_RATIO};

/// Closed-form strapdown inertial propagation.
#[derive(Parser)]
#[command(name = "sins", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Integrate a scenario and write the trajectory as CSV.
    Propagate {
        #[arg(long)]
        scenario: PathBuf,
        /// closed, rk4 or euler
        #[arg(long, default_value = "closed")]
        method: String,
        /// Steps per IMU sample interval.
        #[arg(long, default_value_t = 1)]
        substeps: usize,
        /// CSV output path; stdout if omitted.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also write an x-y plot of the trajectory.
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Final-time error against the reference for a list of step sizes.
    Sweep {
        #[arg(long)]
        scenario: PathBuf,
        #[arg(long, default_value = "rk4")]
        method: String,
        /// Comma-separated step sizes in seconds.
        #[arg(long, default_value = "0.2,0.1,0.05,0.025,0.0125")]
        h_list: String,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also write a log-log plot.
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Count arithmetic operations for one step of each method.
    Flops {
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also write a bar chart.
        #[arg(long)]
        svg: Option<PathBuf>,
    },
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Propagate { scenario, method, substeps, out, svg } => {
            let summary = cmd_propagate(&scenario, parse_method(&method)?, substeps, out.as_deref(), svg.as_deref())?;
            if out.is_some() {
                let last = summary.trajectory.last().expect("trajectory is never empty");
                let p = last.state.position;
                eprintln!(
                    "{} states, final t = {} s, p = ({}, {}, {})",
                    summary.trajectory.len(),
                    last.t,
                    p[0],
                    p[1],
                    p[2]
                );
            }
        }
        Command::Sweep { scenario, method, h_list, out, svg } => {
            let points =
                cmd_sweep(&scenario, parse_method(&method)?, &parse_h_list(&h_list)?, out.as_deref(), svg.as_deref())?;
            if out.is_some() {
                let pts: Vec<(f64, f64)> = points.iter().map(|p| (p.h, p.pos_err)).collect();
                if pts.iter().all(|p| p.1 > 0.0) {
                    eprintln!("position error log-log slope: {:.3}", sins_core::integrators::loglog_slope(&pts));
                }
            }
        }
        Command::Flops { out, svg } => {
            let summary = cmd_flops(out.as_deref(), svg.as_deref())?;
            eprintln!("rk4/closed total operation ratio: {:.4} (reference {REFERENCE_RATIO})", summary.ratio);
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let msg = format!("{e:#}").replace('\n', " ");
            eprintln!("error: {msg}");
            ExitCode::FAILURE
        }
    }
}
