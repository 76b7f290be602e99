//! Command line front end for the flatcurve analyses.

mod args;
mod commands;
mod output;
mod svg;
mod window;

use std::fmt;
use std::process::ExitCode;

use anyhow::Result;
use clap::{CommandFactory, Parser};
use flatcurve_core::Rational;
use serde_json::json;

use args::{Cli, Format, ModeArg};

/// A bad combination of arguments that clap itself cannot detect.
#[derive(Debug)]
pub struct UsageError(String);

impl fmt::Display for UsageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

pub fn usage(msg: impl Into<String>) -> anyhow::Error {
    UsageError(msg.into()).into()
}

fn run(cli: &Cli) -> Result<()> {
    let c = &cli.common;
    if c.format == Format::Svg && !matches!(cli.command, args::Command::Plot { .. }) {
        return Err(usage("SVG output is produced by the plot subcommand"));
    }
    let out = match window::run_mode(c)? {
        ModeArg::Exact => commands::exec::<Rational>(&cli.command, c)?,
        ModeArg::Float => commands::exec::<f64>(&cli.command, c)?,
    };
    out.write(c.out.as_deref())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            if !e.use_stderr() {
                return ExitCode::SUCCESS;
            }
            let text = e.to_string();
            if !text.contains("Usage:") {
                eprintln!("\n{}", Cli::command().render_usage());
            }
            return ExitCode::from(2);
        }
    };
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            if let Some(u) = e.downcast_ref::<UsageError>() {
                eprintln!("error: {u}\n\n{}", Cli::command().render_usage());
                return ExitCode::from(2);
            }
            let code = if let Some(d) = e.downcast_ref::<flatcurve_core::Error>() {
                d.code()
            } else if e.downcast_ref::<std::io::Error>().is_some() {
                "io_error"
            } else {
                "error"
            };
            let detail = format!("{e:#}");
            eprintln!("{}", json!({"error": code, "detail": detail}));
            ExitCode::from(1)
        }
    }
}
