mod args;
mod commands;
mod format;

use std::process::ExitCode;

use clap::Parser;
use gauss_secrecy::error::Error;

use crate::args::{Cli, Command};

/// Failure carrying the process exit code.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    pub fn usage(message: impl Into<String>) -> Self {
        Self {
            code: 2,
            message: message.into(),
        }
    }

    pub fn infeasible(message: impl Into<String>) -> Self {
        Self {
            code: 3,
            message: message.into(),
        }
    }

    pub fn internal(message: impl Into<String>) -> Self {
        Self {
            code: 4,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::InvalidArgument(_) | Error::InvalidConfig(_) => 2,
            Error::InfeasibleKeyRate { .. }
            | Error::OutOfRegime { .. }
            | Error::TooLargeInstance { .. } => 3,
            Error::Solver(_) | Error::Precondition(_) | Error::Internal(_) => 4,
        };
        Self {
            code,
            message: e.to_string(),
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = match cli.command {
        Command::Curve(a) => commands::curve(&a),
        Command::Sim(a) => commands::sim(&a),
        Command::Lp(a) => commands::lp(&a),
        Command::QuantizerStats(a) => commands::quantizer_stats(&a),
        Command::Verify(a) => commands::verify(&a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
