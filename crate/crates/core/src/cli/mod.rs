//! Command-line front end: argument parsing, execution and report
//! formatting. `main.rs` only wires these to stdio and the exit code.
//!
//! Exit codes: 0 success, 1 usage error, 2 verification failure or
//! inconsistent report, 3 numeric failure.

mod args;
mod execute;
mod format;

pub use args::{parse_command, Command, OutputFormat, ParseError};
pub use execute::{execute, NashDocument, PrintedPoint, RunReport};
pub use format::format_report;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_VERIFY: i32 = 2;
pub const EXIT_NUMERIC: i32 = 3;

/// Parses, executes and formats one invocation. Returns the bytes for
/// stdout, the diagnostics for stderr and the exit code.
pub fn run<I, S>(argv: I) -> (Vec<u8>, String, i32)
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cmd = match parse_command(argv) {
        Ok(cmd) => cmd,
        Err(ParseError::Help(text)) => return (text.into_bytes(), String::new(), EXIT_OK),
        Err(ParseError::Usage(msg)) => return (Vec::new(), msg, EXIT_USAGE),
    };
    let format = cmd.format();
    match execute(&cmd) {
        Ok(report) => {
            let code = report.exit_code();
            let diag = report.diagnostic();
            (format_report(&report, format), diag, code)
        }
        Err(err) => (Vec::new(), format!("error: {err}\n"), exit_code_for(&err)),
    }
}

pub fn exit_code_for(err: &crate::Error) -> i32 {
    use crate::Error;
    match err {
        Error::Domain(_) | Error::Io(_) => EXIT_USAGE,
        Error::Residual { .. } => EXIT_VERIFY,
        Error::Singular(_) | Error::NonConvergence(_) | Error::NonFinite(_) => EXIT_NUMERIC,
    }
}
