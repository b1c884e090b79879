use std::process::ExitCode;

use clap::Parser;
use zeno_discord_cli::{run, Cli};

fn main() -> ExitCode {
    let (cmd, flags) = Cli::parse().command.split();
    match run(cmd, &flags) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("zeno-discord: {e}");
            e.exit_code()
        }
    }
}
