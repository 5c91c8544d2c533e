use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use currents_lab::{config, output, run, EXIT_EXPERIMENT_FAILED, EXIT_INVALID};

#[derive(Parser)]
#[command(name = "currents-lab", version, about = "Run geodesic-current experiments from a JSON configuration")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run every experiment and write reports plus a manifest.
    Run {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 1)]
        workers: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Parse and validate a configuration without running it.
    Validate {
        #[arg(long)]
        config: PathBuf,
    },
    /// Pretty-print a report or manifest.
    Show { report: PathBuf },
}

fn code(c: i32) -> ExitCode {
    ExitCode::from(c as u8)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return code(if e.use_stderr() { EXIT_INVALID } else { 0 });
        }
    };
    match cli.command {
        Command::Validate { config: path } => match config::load(&path) {
            Ok(loaded) => {
                println!("{}: ok, {} experiments", path.display(), loaded.config.experiments.len());
                ExitCode::SUCCESS
            }
            Err(e) => {
                eprintln!("{e}");
                code(EXIT_INVALID)
            }
        },
        Command::Run { config: path, out, workers, seed } => {
            let bytes = match std::fs::read(&path) {
                Ok(b) => b,
                Err(e) => {
                    eprintln!("cannot read {}: {e}", path.display());
                    return code(EXIT_INVALID);
                }
            };
            let text = String::from_utf8_lossy(&bytes);
            let loaded = match config::parse(&text, &path.display().to_string()) {
                Ok(l) => l,
                Err(e) => {
                    eprintln!("{e}");
                    return code(EXIT_INVALID);
                }
            };
            match run::run(&loaded, &bytes, &out, workers, seed) {
                Ok(manifest) => {
                    for e in &manifest.entries {
                        match &e.error {
                            None => println!("{:<24} ok", e.name),
                            Some(err) => println!("{:<24} error: {err}", e.name),
                        }
                    }
                    if manifest.failures() > 0 {
                        code(EXIT_EXPERIMENT_FAILED)
                    } else {
                        ExitCode::SUCCESS
                    }
                }
                Err(e) => {
                    eprintln!("cannot write to {}: {e}", out.display());
                    code(EXIT_EXPERIMENT_FAILED)
                }
            }
        }
        Command::Show { report } => {
            let value: serde_json::Value = match std::fs::read(&report)
                .map_err(|e| e.to_string())
                .and_then(|b| serde_json::from_slice(&b).map_err(|e| e.to_string()))
            {
                Ok(v) => v,
                Err(e) => {
                    eprintln!("{}: {e}", report.display());
                    return code(EXIT_INVALID);
                }
            };
            print!("{}", output::to_canonical_string(value));
            ExitCode::SUCCESS
        }
    }
}
