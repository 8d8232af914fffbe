use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use fastening_cli::{run, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(output) => {
            let mut stdout = std::io::stdout().lock();
            // A closed pipe is not worth a panic.
            let _ = stdout.write_all(output.stdout.as_bytes());
            ExitCode::from(output.code)
        }
        Err(failure) => {
            eprintln!("fastening: {failure}");
            ExitCode::from(failure.code())
        }
    }
}
