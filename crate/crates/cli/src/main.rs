use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use dnwr_cli::{execute, output, theory_cmd, CliError, Config, Mode};

#[derive(Parser)]
#[command(name = "dnwr", about = "Waveform relaxation experiments for the 1D wave equation")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run every (method, theta, T) combination of a config.
    Run { config: PathBuf },
    /// Compare at least two methods, each at its optimal theta.
    Compare { config: PathBuf },
    /// Print the finite-step bound, symmetric rate and minimum delay of DNWR or NNWR.
    Theory {
        method: String,
        a: String,
        b: String,
        c: String,
        t: String,
        theta: String,
    },
    /// Print the version.
    Version,
}

fn experiment(path: &Path, mode: Mode) -> Result<(), CliError> {
    let cfg = Config::from_path(path)?;
    let report = execute(&cfg, mode)?;
    let dir = output::output_dir(&report);
    let written = output::write_all(&report, &dir)?;
    for r in &report.results {
        let c = &r.combination;
        let theta = c.theta.map(|t| format!(" theta={t}")).unwrap_or_default();
        let status = match (&r.failure, r.converged_at) {
            (Some(msg), _) => format!("failed: {msg}"),
            (None, Some(k)) => format!("converged at iteration {k}"),
            (None, None) if r.diverged => "diverged".to_string(),
            (None, None) => format!("not converged after {} iterations", r.rows.len()),
        };
        let bound = r.finite_step_bound.map(|b| format!(" (bound {b})")).unwrap_or_default();
        println!("{}{theta} T={}: {status}{bound}", c.method, c.t_end);
    }
    println!("wrote {}", written.csv.display());
    println!("wrote {}", written.summary.display());
    println!("wrote {}", written.effective_config.display());
    match report.failures() {
        0 => Ok(()),
        n => Err(CliError::Numerical(format!("{n} combination(s) failed"))),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Run { config } => experiment(config, Mode::Run),
        Command::Compare { config } => experiment(config, Mode::Compare),
        Command::Theory {
            method,
            a,
            b,
            c,
            t,
            theta,
        } => theory_cmd::analyse(method, a, b, c, t, theta).map(|r| print!("{}", r.render())),
        Command::Version => {
            println!("dnwr {}", env!("CARGO_PKG_VERSION"));
            Ok(())
        }
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("dnwr: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
