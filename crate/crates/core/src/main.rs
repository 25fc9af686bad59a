use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use wavepath::runner;
use wavepath::state::Strictness;
use wavepath::Error;

#[derive(Parser)]
#[command(
    name = "wavepath",
    version,
    about = "Two-slit interference with which-path detectors"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute both screen patterns and a report for one config.
    Run {
        config: PathBuf,
        #[arg(long, default_value = "out")]
        out: PathBuf,
        /// Also write pattern.svg.
        #[arg(long)]
        svg: bool,
        /// Warn instead of failing when photon addition runs out of headroom.
        #[arg(long)]
        allow_truncation: bool,
    },
    /// Re-run a config over values of one numeric key and write sweep.csv.
    Sweep {
        config: PathBuf,
        /// Dotted key path, e.g. `detector.alpha` or `slits.0.width`.
        #[arg(long)]
        param: String,
        #[arg(
            long,
            value_delimiter = ',',
            required = true,
            allow_hyphen_values = true
        )]
        values: Vec<f64>,
        #[arg(long, default_value = "out")]
        out: PathBuf,
        #[arg(long)]
        allow_truncation: bool,
    },
    /// Compare the pattern against brute-force and eraser oracles on a small grid.
    OracleCheck {
        config: PathBuf,
        #[arg(long)]
        allow_truncation: bool,
    },
}

fn strictness(allow: bool) -> Strictness {
    if allow {
        Strictness::Warn
    } else {
        Strictness::Strict
    }
}

fn configure_threads() -> Result<(), Error> {
    let Ok(raw) = std::env::var("WAVEPATH_THREADS") else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .map_err(|_| Error::Config(format!("WAVEPATH_THREADS must be an integer, got `{raw}`")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| Error::Config(format!("thread pool: {e}")))
}

fn dispatch(command: Command) -> Result<i32, Error> {
    match command {
        Command::Run {
            config,
            out,
            svg,
            allow_truncation,
        } => {
            let r = runner::run(&config, &out, svg, strictness(allow_truncation))?;
            for w in &r.warnings {
                eprintln!("warning: {w}");
            }
            println!(
                "orthodox V = {:.6}, paper-claim V = {:.6}, |<d1|d2>| = {:.6}; wrote {}",
                r.orthodox_visibility,
                r.paper_claim_visibility,
                r.overlap.norm(),
                out.display()
            );
            Ok(0)
        }
        Command::Sweep {
            config,
            param,
            values,
            out,
            allow_truncation,
        } => {
            let rows = runner::sweep(&config, &param, &values, &out, strictness(allow_truncation))?;
            println!(
                "{} rows written to {}",
                rows.len(),
                out.join("sweep.csv").display()
            );
            Ok(0)
        }
        Command::OracleCheck {
            config,
            allow_truncation,
        } => {
            let r = runner::oracle_check(&config, strictness(allow_truncation))?;
            println!("bruteforce_deviation = {:.3e}", r.bruteforce_deviation);
            println!("eraser_deviation = {:.3e}", r.eraser_deviation);
            println!(
                "normalization_deviation = {:.3e}",
                r.normalization_deviation
            );
            println!("imag_residue = {:.3e}", r.imag_residue);
            let ok = r.passed();
            println!(
                "{}",
                if ok {
                    "oracle-check passed"
                } else {
                    "oracle-check FAILED"
                }
            );
            Ok(if ok { 0 } else { 3 })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = configure_threads().and_then(|()| dispatch(cli.command));
    match result {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
