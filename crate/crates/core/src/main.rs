use std::io::IsTerminal;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use dpd_core::cli::{run_command, Options};
use dpd_core::report::{ErrorInfo, Report};

/// Exact computations with real DPD-pairs.
///
/// Commands: validate, smooth, fibers, classify, normalize, sections,
/// torsor, equiv. Exit status: 0 affirmative, 1 negative, 2 error.
#[derive(Parser, Debug)]
#[command(name = "dpd", version)]
struct Cli {
    /// The command to run.
    command: String,
    /// Pair documents (two for `equiv`).
    files: Vec<PathBuf>,
    /// Print the report as JSON.
    #[arg(long)]
    json: bool,
    /// A point (for `fibers`) or a nonzero rational (for `torsor` without a file).
    #[arg(long, allow_hyphen_values = true)]
    at: Option<String>,
    /// The degree for `sections`.
    #[arg(short = 'm', allow_hyphen_values = true)]
    m: Option<i64>,
    /// Twist function of an equivalence certificate.
    #[arg(long, allow_hyphen_values = true)]
    f: Option<String>,
    /// Reparametrization of an equivalence certificate, as a Möbius map in z.
    #[arg(long, allow_hyphen_values = true)]
    psi: Option<String>,
    /// Positive scalar of an equivalence certificate.
    #[arg(long, allow_hyphen_values = true)]
    lambda: Option<String>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut documents = Vec::new();
    let mut report = None;
    for path in &cli.files {
        match std::fs::read_to_string(path) {
            Ok(text) => documents.push(text),
            Err(e) => {
                let info = ErrorInfo::new("IoError", format!("{}: {e}", path.display()));
                report = Some(Report::failure(&cli.command, info));
                break;
            }
        }
    }
    let opts = Options { at: cli.at, m: cli.m, f: cli.f, psi: cli.psi, lambda: cli.lambda };
    let report = report.unwrap_or_else(|| run_command(&cli.command, &documents, &opts));
    if cli.json {
        println!("{}", report.to_json());
    } else {
        let color = std::env::var("DPD_COLOR").map_or(true, |v| v != "0") && std::io::stdout().is_terminal();
        print!("{}", report.render_text(color));
    }
    ExitCode::from(report.exit_code() as u8)
}
