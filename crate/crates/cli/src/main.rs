use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use sqw_cli::{
    cmd_search, cmd_spectrum, cmd_sweep, cmd_verify, parse_marked, parse_n_list, to_json, CliError,
    ExperimentConfig, DEFAULT_N_LIST,
};

/// Simplicial quantum walk search experiments on sphere triangulations.
#[derive(Parser)]
#[command(name = "sqw", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one marked-face search and write the p_f(t) trace as CSV.
    Search {
        /// Sphere dimension.
        #[arg(long)]
        n: usize,
        /// Two facet indices whose shared face is marked.
        #[arg(long, value_parser = parse_marked, default_value = "0,1")]
        marked: (usize, usize),
        /// Number of steps (default: twice the predicted stopping time, rounded up).
        #[arg(long)]
        t_max: Option<usize>,
        /// CSV destination; the summary then goes to stdout instead of stderr.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Search for several n concurrently and fit t_f against n + 2.
    Sweep {
        /// Comma-separated sphere dimensions.
        #[arg(long, value_parser = parse_n_list)]
        n_list: Option<Vec<usize>>,
        #[arg(long, value_parser = parse_marked, default_value = "0,1")]
        marked: (usize, usize),
        /// JSON destination (default: stdout).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check the graph isomorphism, the walk equivalence and the top eigenpair.
    Verify {
        #[arg(long)]
        n: Option<usize>,
        /// Facet-list JSON file to check instead of, or besides, a sphere.
        #[arg(long)]
        complex: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Report the discriminant spectrum and the predicted stopping time.
    Spectrum {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn emit(text: &str, out: Option<&PathBuf>) -> Result<(), CliError> {
    match out {
        Some(path) => std::fs::write(path, text)?,
        None => println!("{text}"),
    }
    Ok(())
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Search { n, marked, t_max, out } => {
            let output = cmd_search(&ExperimentConfig::new(n, marked, t_max)?)?;
            let summary = to_json(&output.summary);
            match out {
                Some(path) => {
                    std::fs::write(path, output.csv())?;
                    println!("{summary}");
                }
                None => {
                    print!("{}", output.csv());
                    eprintln!("{summary}");
                }
            }
        }
        Command::Sweep { n_list, marked, out } => {
            let list = n_list.unwrap_or_else(|| DEFAULT_N_LIST.to_vec());
            emit(&to_json(&cmd_sweep(&list, marked)?), out.as_ref())?;
        }
        Command::Verify { n, complex, out } => {
            let report = cmd_verify(n, complex.as_deref())?;
            emit(&to_json(&report), out.as_ref())?;
            if !report.passed {
                let failed: Vec<&str> = report
                    .checks
                    .iter()
                    .filter(|c| !c.passed)
                    .map(|c| c.name.as_str())
                    .collect();
                return Err(CliError::Verification(failed.join(", ")));
            }
        }
        Command::Spectrum { n, out } => {
            emit(&to_json(&cmd_spectrum(n)?), out.as_ref())?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("sqw: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
