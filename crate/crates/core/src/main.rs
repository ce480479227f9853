use std::fs::File;
use std::io::{self, BufReader, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use qperceptron::datagen::{generate_margin_dataset_with, GeneratorOptions};
use qperceptron::grover::DEFAULT_GROWTH;
use qperceptron::harness::{self, Algorithm, Field, RunParams, SweepSpec};
use qperceptron::{verify, Error, TrainingSet};

const EXIT_INVALID: u8 = 2;
const EXIT_VERIFY_FAILED: u8 = 3;

#[derive(Parser, Debug)]
#[command(name = "qperceptron", version, about = "Quantum perceptron training simulator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Write a planted-margin dataset plus a `.meta.json` sidecar
    Gen {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        dim: usize,
        #[arg(long)]
        gamma: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
        /// Place every example exactly on the margin
        #[arg(long)]
        pin_to_margin: bool,
    },
    /// Train once and print the run record as JSON
    Train {
        #[arg(long)]
        algo: String,
        #[arg(long)]
        data: PathBuf,
        #[arg(long, default_value_t = 0.1)]
        epsilon: f64,
        #[arg(long)]
        gamma: f64,
        #[arg(long, default_value_t = DEFAULT_GROWTH)]
        c: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        k_override: Option<usize>,
    },
    /// Run a sweep spec (JSON) and write records as CSV
    Sweep {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Fit a log-log slope of median y against x from a sweep CSV
    Fit {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        x: String,
        #[arg(long)]
        y: String,
    },
    /// Run the built-in property suites
    Verify,
}

fn run(cmd: Command) -> Result<ExitCode, Error> {
    match cmd {
        Command::Gen {
            n,
            dim,
            gamma,
            seed,
            out,
            pin_to_margin,
        } => {
            let planted = generate_margin_dataset_with(n, dim, gamma, seed, GeneratorOptions { pin_to_margin })?;
            let meta = planted.save(&out, pin_to_margin)?;
            eprintln!("wrote {} and {}", out.display(), meta.display());
        }
        Command::Train {
            algo,
            data,
            epsilon,
            gamma,
            c,
            seed,
            k_override,
        } => {
            let algo: Algorithm = algo.parse()?;
            let data = TrainingSet::load(&data)?;
            let params = RunParams {
                epsilon,
                gamma,
                c,
                seed,
                k_override,
            };
            let record = harness::run_single(algo, &data, &params)?;
            println!("{}", serde_json::to_string(&record)?);
        }
        Command::Sweep { spec, out } => {
            let text = std::fs::read_to_string(&spec)?;
            let spec = SweepSpec::from_json(&text)?;
            let records = harness::run_sweep(&spec)?;
            harness::write_records(&records, BufWriter::new(File::create(&out)?))?;
            eprintln!("wrote {} records to {}", records.len(), out.display());
        }
        Command::Fit { input, x, y } => {
            let records = harness::read_records(BufReader::new(File::open(&input)?))?;
            let fit = harness::fit_exponent(&records, x.parse::<Field>()?, y.parse::<Field>()?)?;
            println!("{}", serde_json::to_string(&fit)?);
        }
        Command::Verify => {
            let checks = verify::run_all()?;
            let mut out = io::stdout().lock();
            for c in &checks {
                let status = if c.passed { "PASS" } else { "FAIL" };
                writeln!(out, "{status} {:<28} {}", c.name, c.detail)?;
            }
            if checks.iter().any(|c| !c.passed) {
                return Ok(ExitCode::from(EXIT_VERIFY_FAILED));
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => code,
        Err(e @ Error::InvalidArgument(_)) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_INVALID)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
