use std::process::ExitCode;

use clap::Parser;
use isospec_cli::commands::interval_text;
use isospec_cli::error::{CliError, EXIT_INVARIANT_FAILURE, EXIT_PASS};
use isospec_cli::{args::Cli, emit, run};

fn report_error(e: &CliError) {
    eprintln!("error: {e}");
    if let CliError::Core(core) = e {
        if let Some((lo, hi)) = core.excluded_interval() {
            eprintln!("excluded interval: {}", interval_text(lo, hi));
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match run(&cli.command) {
        Ok(o) => o,
        Err(e) => {
            report_error(&e);
            return ExitCode::from(e.exit_code());
        }
    };
    for w in &outcome.report.warnings {
        eprintln!("warning: {w}");
    }
    if let Err(e) = emit(&outcome, &cli.command) {
        report_error(&e);
        return ExitCode::from(e.exit_code());
    }
    let failures = outcome.report.failures();
    if failures.is_empty() {
        ExitCode::from(EXIT_PASS)
    } else {
        eprintln!("failed invariants: {}", failures.join(", "));
        ExitCode::from(EXIT_INVARIANT_FAILURE)
    }
}
