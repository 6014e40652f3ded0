//! `nrange`: numerical ranges, C-numerical ranges and unitary dilations from
//! the command line.

mod args;
mod run;

use std::process::ExitCode;

use clap::Parser;

use args::Cli;

fn error_json(kind: &str, message: &str) -> String {
    serde_json::json!({ "error": kind, "message": message }).to_string()
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = e.print();
                return ExitCode::SUCCESS;
            }
            eprintln!("{}", error_json("UsageError", &e.render().to_string()));
            return ExitCode::from(2);
        }
    };
    match run::run(cli) {
        Ok(run::Outcome::Passed) => ExitCode::SUCCESS,
        Ok(run::Outcome::Failed) => ExitCode::from(1),
        Err(run::CliError::Core(e)) => {
            eprintln!("{}", error_json(e.kind(), &e.to_string()));
            ExitCode::from(2)
        }
        Err(run::CliError::Io(message)) => {
            eprintln!("{}", error_json("IoError", &message));
            ExitCode::from(2)
        }
    }
}
