//! `sonets` command-line front end.
//!
//! Exit codes: 0 success, 1 usage or configuration error, 2 inadmissible
//! covariance or failed scheme axioms, 3 I/O failure.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

#[derive(Parser)]
#[command(name = "sonets", version, about = "Second-order random networks with tunable two-edge motif statistics")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// List built-in schemes and their relations.
    Schemes {
        #[arg(long)]
        json: bool,
    },
    /// Check scheme axioms and covariance admissibility; print the spectrum.
    Validate {
        #[command(flatten)]
        config: ConfigArg,
        #[arg(long)]
        json: bool,
    },
    /// Print the square-root coefficients of the covariance as JSON.
    Sqrt {
        #[command(flatten)]
        config: ConfigArg,
    },
    /// Sample realizations and write one edge list per realization.
    Generate(GenerateArgs),
    /// Motif census, reciprocal summary and degree histograms of edge lists.
    Census(CensusArgs),
}

#[derive(Args)]
struct ConfigArg {
    /// JSON run configuration.
    #[arg(long = "config", value_name = "PATH")]
    path: PathBuf,
}

#[derive(Args)]
struct GenerateArgs {
    #[command(flatten)]
    config: ConfigArg,
    /// Output directory; overrides `output_dir` in the config.
    #[arg(long, value_name = "DIR")]
    out: Option<PathBuf>,
    #[arg(long, value_name = "U64")]
    seed: Option<u64>,
    #[arg(long, value_name = "N")]
    realizations: Option<usize>,
    /// Worker threads; 0 uses all cores.
    #[arg(long, value_name = "N", default_value_t = 0)]
    threads: usize,
    /// Also write a PBM adjacency image per realization.
    #[arg(long)]
    pbm: bool,
}

#[derive(Args)]
struct CensusArgs {
    /// Config or manifest naming the scheme. With no INPUTS, the files
    /// listed in the manifest are read.
    #[command(flatten)]
    config: ConfigArg,
    /// Directory for census.csv, summary.csv and degree histograms; without
    /// it the census is printed to stdout.
    #[arg(long, value_name = "DIR")]
    out: Option<PathBuf>,
    inputs: Vec<PathBuf>,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    let result = match cli.command {
        Command::Schemes { json } => commands::schemes(json),
        Command::Validate { config, json } => commands::validate(&config.path, json),
        Command::Sqrt { config } => commands::sqrt(&config.path),
        Command::Generate(a) => commands::generate(commands::GenerateOptions {
            config: a.config.path,
            out: a.out,
            seed: a.seed,
            realizations: a.realizations,
            threads: a.threads,
            pbm: a.pbm,
        }),
        Command::Census(a) => commands::census(&a.config.path, &a.inputs, a.out.as_deref()),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {f}");
            ExitCode::from(f.code())
        }
    }
}
