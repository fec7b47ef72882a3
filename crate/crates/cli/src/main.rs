mod commands;
mod config;
mod output;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::de::DeserializeOwned;
use serde_json::json;

use commands::{Failure, Outcome, Settings};
use output::OutDir;

#[derive(Parser)]
#[command(name = "nilmix", version, about = "Mixing rates and exact correlations for toral and nilmanifold automorphisms")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Classification, Lyapunov splitting and central series.
    Analyze(Common),
    /// ρ, χ, Hölder rates γ(s) and the order-2 envelope.
    Rates(Common),
    /// Diophantine certificates and the Lyapunov subspace sweep.
    Certify(Common),
    /// Fractional coboundary solve on a torus observable.
    Solve(Common),
    /// Schrödinger model sweep over r and h.
    Threshold(Common),
    /// Exact n-point correlation series with an optional decay fit.
    Correlate(Common),
    /// Densities of regular and tame time tuples.
    Density(Common),
    /// Counterexample series.
    Counterexample(Common),
}

#[derive(Args)]
struct Common {
    #[arg(long)]
    config: PathBuf,
    #[arg(long, default_value = "nilmix-out")]
    out: PathBuf,
    /// Starting working precision, in bits, for certified spectral data.
    #[arg(long)]
    precision: Option<u32>,
    /// Monte Carlo seed.
    #[arg(long, default_value_t = nilmix::rates::DensityOptions::default().seed)]
    seed: u64,
}

fn load<T: DeserializeOwned>(path: &Path) -> Result<T, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::Config(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Failure::Config(format!("{}: {e}", path.display())))
}

fn run<T: DeserializeOwned>(args: &Common, f: fn(T, &Settings) -> Outcome) -> Outcome {
    let st = Settings {
        precision: args.precision,
        seed: args.seed,
        config_dir: commands::config_dir(&args.config),
    };
    f(load(&args.config)?, &st)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (name, args, outcome) = match &cli.command {
        Command::Analyze(a) => ("analyze", a, run(a, commands::analyze)),
        Command::Rates(a) => ("rates", a, run(a, commands::rates)),
        Command::Certify(a) => ("certify", a, run(a, commands::certify)),
        Command::Solve(a) => ("solve", a, run(a, commands::solve)),
        Command::Threshold(a) => ("threshold", a, run(a, commands::threshold)),
        Command::Correlate(a) => ("correlate", a, run(a, commands::correlate)),
        Command::Density(a) => ("density", a, run(a, commands::density)),
        Command::Counterexample(a) => ("counterexample", a, run(a, commands::counterexample)),
    };
    let out = match outcome {
        Ok(o) => o,
        Err(Failure::Config(msg)) => {
            eprintln!("nilmix {name}: invalid config: {msg}");
            return ExitCode::from(2);
        }
        Err(Failure::Compute(e)) => {
            let err = json!({ "command": name, "error": format!("{e:?}"), "message": e.to_string() });
            eprintln!("{err}");
            return ExitCode::from(1);
        }
    };
    let report = json!({
        "command": name,
        "version": nilmix::VERSION,
        "settings": {
            "precision_bits": args.precision,
            "working_bits": out.bits,
            "seed": args.seed,
            "float": "f64",
        },
        "config": out.config,
        "system": out.system,
        "result": out.result,
    });
    let mut text = serde_json::to_string_pretty(&report).expect("report serializes");
    text.push('\n');
    let written = OutDir::create(&args.out).and_then(|mut dir| {
        dir.write("report.json", &text)?;
        for (file, body) in &out.tables {
            dir.write(file, body)?;
        }
        Ok(dir)
    });
    match written {
        Ok(dir) => {
            for line in &out.summary {
                println!("{line}");
            }
            println!("wrote {} to {}", dir.written().join(", "), dir.path().display());
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("{}", json!({ "command": name, "error": "Io", "message": e.to_string() }));
            ExitCode::from(1)
        }
    }
}
