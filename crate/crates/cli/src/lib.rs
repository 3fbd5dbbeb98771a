//! Command-line front end for `isospec-core`: catalog and tabulated
//! potentials, the `solve`, `deform`, `chain` and `verify` workflows, and
//! their JSON/CSV reports.

pub mod args;
pub mod commands;
pub mod config;
pub mod error;
pub mod metrics;
pub mod report;
pub mod table;

use std::io::Write;
use std::time::{SystemTime, UNIX_EPOCH};

use crate::args::{Command, Format};
use crate::commands::{Outcome, PrimaryTable};
use crate::error::{CliError, Result};
use crate::report::Report;
use crate::table::{format_float, write_table};

/// Runs one command up to (not including) writing its output.
pub fn run(command: &Command) -> Result<Outcome> {
    let args = command.args();
    let prepared = config::prepare(command.name(), args)?;
    let timestamp = (!args.no_timestamp).then(|| {
        SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map_or(0, |d| d.as_secs())
    });
    let mut report = Report::new(&prepared.config, timestamp);
    let table = match command {
        Command::Solve(_) => commands::solve(&prepared, &mut report)?,
        Command::Deform(_) => commands::deform(&prepared, &mut report)?,
        Command::Chain(_) => commands::chain(&prepared, &mut report)?,
        Command::Verify(_) => commands::verify(&prepared, &mut report)?,
    };
    Ok(Outcome { report, table })
}

/// Serializes an outcome in the requested format.
pub fn render(outcome: &Outcome, format: Format) -> Vec<u8> {
    match (format, &outcome.table) {
        (Format::Json, _) => outcome.report.to_json().into_bytes(),
        (Format::Csv, PrimaryTable::Potential(v)) => {
            let mut buf = Vec::new();
            write_table(&mut buf, v).expect("writing to memory cannot fail");
            buf
        }
        (Format::Csv, PrimaryTable::Checks(checks)) => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(["name", "value", "tolerance", "pass"]).expect("in-memory write");
            for c in checks {
                w.write_record([
                    c.name.clone(),
                    format_float(c.value),
                    format_float(c.tolerance),
                    c.pass().to_string(),
                ])
                .expect("in-memory write");
            }
            w.into_inner().expect("in-memory flush")
        }
    }
}

/// Writes to `--out` or standard output.
pub fn emit(outcome: &Outcome, command: &Command) -> Result<()> {
    let args = command.args();
    let bytes = render(outcome, args.format);
    match &args.out {
        Some(path) => std::fs::write(path, bytes).map_err(|source| CliError::Write {
            path: path.clone(),
            source,
        }),
        None => std::io::stdout()
            .write_all(&bytes)
            .map_err(|source| CliError::Write {
                path: "<stdout>".into(),
                source,
            }),
    }
}
