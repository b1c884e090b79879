//! Command-line front end for the zeno-discord library.

pub mod commands;
pub mod error;
pub mod format;
pub mod settings;

use std::fs::File;
use std::io::{self, BufWriter, Write};

use serde::Serialize;

pub use commands::{execute, Output};
pub use error::{CliError, CliResult};
pub use format::{fmt_g, Cell, Table};
pub use settings::{resolve, Cli, Command, CommandLine, Flags, Format, Settings};

#[derive(Serialize)]
struct Echo<'a> {
    command: &'static str,
    #[serde(flatten)]
    settings: &'a Settings,
}

/// Writes `output` in the configured format to `--out` or stdout.
pub fn emit(cmd: Command, settings: &Settings, output: &Output) -> CliResult<()> {
    let sink: Box<dyn Write> = match &settings.out {
        Some(path) => Box::new(File::create(path)?),
        None => Box::new(io::stdout().lock()),
    };
    let mut sink = BufWriter::new(sink);
    match settings.format {
        Format::Csv => output.table.write_csv(&mut sink)?,
        Format::Json => {
            let echo = Echo {
                command: cmd.name(),
                settings,
            };
            output.table.write_json(&echo, &mut sink)?
        }
    }
    sink.flush()?;
    Ok(())
}

pub fn run(cmd: Command, flags: &Flags) -> CliResult<()> {
    let settings = resolve(cmd, flags)?;
    let output = execute(cmd, &settings)?;
    emit(cmd, &settings, &output)?;
    match output.failure {
        Some(failed) => Err(CliError::ValidationFailed(failed)),
        None => Ok(()),
    }
}
