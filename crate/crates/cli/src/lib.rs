//! Command-line front end for the `ffsieve` library.

pub mod args;
pub mod commands;
pub mod config;
pub mod output;

use std::ffi::OsString;
use std::fs;
use std::io::Write;

use clap::Parser;

use args::{Cli, Command};

fn dispatch(cmd: &Command) -> Result<commands::Report, String> {
    match cmd {
        Command::Sieve(a) => commands::sieve(a),
        Command::Kappa(a) => commands::kappa_cmd(a),
        Command::Expsum(a) => commands::expsum(a),
        Command::Poisson(a) => commands::poisson(a),
        Command::Fourier(a) => commands::fourier(a),
        Command::Weyl(a) => commands::weyl(a),
        Command::Divisors(a) => commands::divisors(a),
        Command::Orthogonality(a) => commands::orthogonality(a),
        Command::ValidateAlpha(a) => commands::validate_alpha(a),
    }
}

/// Runs the CLI and returns the process exit code.
///
/// Exit codes: 0 success, 1 a numerical check failed, 2 invalid input.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString>,
{
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let args = match config::expand(args) {
        Ok(a) => a,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return 2;
        }
    };
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = e.exit_code();
            let text = if code == 0 { e.to_string() } else { e.render().to_string() };
            let _ = if code == 0 { write!(out, "{text}") } else { write!(err, "{text}") };
            return code;
        }
    };
    let common = cli.command.common().clone();
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(common.jobs).build() {
        Ok(p) => p,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return 2;
        }
    };
    let report = match pool.install(|| dispatch(&cli.command)) {
        Ok(r) => r,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return 2;
        }
    };
    let written = match &common.output {
        Some(path) => fs::write(path, &report.records).map_err(|e| format!("{}: {e}", path.display())),
        None => out.write_all(&report.records).map_err(|e| e.to_string()),
    };
    if let Err(e) = written {
        let _ = writeln!(err, "error: {e}");
        return 2;
    }
    for line in &report.summary {
        let _ = writeln!(err, "{line}");
    }
    if report.failures > 0 {
        let _ = writeln!(err, "{} check(s) failed", report.failures);
        1
    } else {
        0
    }
}
