use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use tangent_cli::corpus::run_corpus;
use tangent_cli::plot::emit_plot;
use tangent_cli::{parse_problem, replay, run, CertBundle, Problem};
use tangent_core::certify::Strategy;

const INPUT_ERROR: u8 = 3;

#[derive(Parser)]
#[command(name = "tangent", version, about = "Certified tangent-line inequality prover")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Prove one problem file.
    Check {
        file: PathBuf,
        #[arg(long, value_parser = parse_strategy)]
        strategy: Option<Strategy>,
        #[arg(long)]
        json: bool,
        /// Write the certificates to this path.
        #[arg(long)]
        emit_cert: Option<PathBuf>,
    },
    /// Run every problem file under a directory.
    Corpus {
        dir: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Check saved certificates against a problem file.
    Replay { cert: PathBuf, file: PathBuf },
    /// Print CSV samples of f and g.
    Plot {
        file: PathBuf,
        #[arg(long)]
        samples: usize,
    },
}

fn parse_strategy(s: &str) -> Result<Strategy, String> {
    s.parse()
}

fn load(path: &Path) -> Result<Problem, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    parse_problem(&text).map_err(|e| format!("{}: {e}", path.display()))
}

fn input_error(msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(INPUT_ERROR)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { INPUT_ERROR } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match cli.cmd {
        Cmd::Check { file, strategy, json, emit_cert } => {
            let p = match load(&file) {
                Ok(p) => p,
                Err(e) => return input_error(e),
            };
            let r = run(&p, strategy);
            if let Some(path) = emit_cert {
                let text = serde_json::to_string_pretty(&r.bundle()).expect("bundle serializes");
                if let Err(e) = std::fs::write(&path, text) {
                    return input_error(format!("{}: {e}", path.display()));
                }
            }
            println!("{}", if json { r.report.to_json() } else { r.report.to_text() });
            ExitCode::from(r.report.exit_code() as u8)
        }
        Cmd::Corpus { dir, json } => match run_corpus(&dir) {
            Ok(c) => {
                println!("{}", if json { c.canonical_json() } else { c.to_text() });
                ExitCode::from(u8::from(c.mismatched > 0))
            }
            Err(e) => input_error(format!("{}: {e}", dir.display())),
        },
        Cmd::Replay { cert, file } => {
            let p = match load(&file) {
                Ok(p) => p,
                Err(e) => return input_error(e),
            };
            let bundle: CertBundle = match std::fs::read_to_string(&cert)
                .map_err(|e| e.to_string())
                .and_then(|t| serde_json::from_str(&t).map_err(|e| e.to_string()))
            {
                Ok(b) => b,
                Err(e) => return input_error(format!("{}: {e}", cert.display())),
            };
            match replay(&bundle, &p) {
                Ok(()) => {
                    println!("accepted");
                    ExitCode::SUCCESS
                }
                Err(e) => {
                    println!("rejected: {e}");
                    ExitCode::from(1)
                }
            }
        }
        Cmd::Plot { file, samples } => {
            let p = match load(&file) {
                Ok(p) => p,
                Err(e) => return input_error(e),
            };
            match emit_plot(&p, samples) {
                Ok(csv) => {
                    print!("{csv}");
                    ExitCode::SUCCESS
                }
                Err(e) => input_error(e),
            }
        }
    }
}
