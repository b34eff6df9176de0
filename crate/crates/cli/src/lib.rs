//! Command-line front end for `porc-core`.
//!
//! Every command prints one JSON object (default) or a CSV table with a
//! header row. Domain errors exit with status 2 and a one-line JSON object
//! on stderr; usage errors exit with 64.

pub mod args;
pub mod commands;
pub mod error;
pub mod output;

use std::ffi::OsString;
use std::io::Write;

use clap::error::ErrorKind;
use clap::Parser;
use serde::Serialize;

use crate::args::{Cli, Command, Common};
use crate::commands::{StabilityOpts, TrajectoryOpts};
use crate::error::{CliError, EXIT_USAGE};

fn init_logging() {
    let env = env_logger::Env::new().filter_or("PORC_LOG", "error");
    let _ = env_logger::Builder::from_env(env).format_timestamp(None).try_init();
}

#[derive(Serialize)]
struct Meta<'a> {
    tool: &'a str,
    version: &'a str,
    command: &'a str,
    args: Vec<String>,
}

fn dispatch(cmd: &Command) -> Result<(output::Payload, &Common, &'static str), CliError> {
    Ok(match cmd {
        Command::Potential { common, field, samples } => (commands::potential(common, *field, *samples)?, common, "potential"),
        Command::Regime { common, field } => (commands::regime(common, *field)?, common, "regime"),
        Command::Trajectory {
            common,
            field,
            energy,
            special,
            t0,
            t_start,
            t_end,
            samples,
            h,
        } => {
            let o = TrajectoryOpts {
                field: *field,
                energy: *energy,
                special: *special,
                t0: *t0,
                t_start: *t_start,
                t_end: *t_end,
                samples: *samples,
                h: *h,
            };
            (commands::trajectory(common, &o)?, common, "trajectory")
        }
        Command::Instanton {
            common,
            field,
            barrier,
            profile,
        } => (
            commands::instanton(common, *field, *barrier, profile.span, profile.samples)?,
            common,
            "instanton",
        ),
        Command::Bounce { common, barrier, profile } => (
            commands::bounce(common, *barrier, profile.span, profile.samples)?,
            common,
            "bounce",
        ),
        Command::Stability {
            common,
            field,
            barrier,
            levels,
            half_width,
            steps_per_unit,
            stride,
        } => {
            let o = StabilityOpts {
                field: *field,
                barrier: *barrier,
                levels: *levels,
                half_width: *half_width,
                steps_per_unit: *steps_per_unit,
                stride: *stride,
            };
            (commands::stability(common, &o)?, common, "stability")
        }
        Command::SpectrumMag { common, grid } => (commands::spectrum_mag(common, *grid)?, common, "spectrum-mag"),
        Command::SpectrumGrav { common, count, parity } => (
            commands::spectrum_grav(common, *count, *parity)?,
            common,
            "spectrum-grav",
        ),
    })
}

fn execute(cli: &Cli, argv: &[String]) -> Result<(), CliError> {
    let (payload, common, name) = dispatch(&cli.command)?;
    let text = payload.render(common.format)?;
    match &common.output {
        Some(path) => std::fs::write(path, text).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?,
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| CliError::Io(e.to_string()))?,
    }
    if common.meta {
        let meta = Meta {
            tool: "porc",
            version: env!("CARGO_PKG_VERSION"),
            command: name,
            args: argv.iter().skip(1).cloned().collect(),
        };
        let line = serde_json::to_string(&serde_json::json!({ "meta": meta })).map_err(|e| CliError::Io(e.to_string()))?;
        eprintln!("{line}");
    }
    Ok(())
}

/// Parse `args` (program name first), run the command and return the exit status.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    init_logging();
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let argv: Vec<String> = args.iter().map(|a| a.to_string_lossy().into_owned()).collect();
    let cli = match Cli::try_parse_from(&args) {
        Ok(cli) => cli,
        Err(e) => {
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                // A closed pipe (e.g. `porc --help | head`) is not an error.
                let _ = write!(std::io::stdout(), "{e}");
                return 0;
            }
            let rendered = e.to_string();
            let first = rendered.lines().next().unwrap_or("invalid arguments");
            let msg = first.trim_start_matches("error: ").to_owned();
            eprintln!("{}", CliError::usage(msg).to_json_line());
            return EXIT_USAGE;
        }
    };
    match execute(&cli, &argv) {
        Ok(()) => 0,
        Err(e) => {
            log::debug!("{e:?}");
            eprintln!("{}", e.to_json_line());
            e.exit_code()
        }
    }
}
