//! `csl`: chromatic sumsets, covering certificates and threshold layers from
//! the command line.
//!
//! Exit codes: 0 ok, 2 usage or malformed input, 3 unsupported structure,
//! 4 verification failed, 5 threshold unmet, 6 capacity or overflow.

mod commands;
mod scan;

use std::fmt;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use csl_core::capacity::{Capacity, ENV_VAR};

#[derive(Parser, Debug)]
#[command(
    name = "csl",
    version,
    about = "Chromatic sumsets, covering certificates and threshold layers"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args, Debug, Clone)]
pub struct Io {
    /// Tuple file (JSON).
    #[arg(long)]
    input: PathBuf,
    /// Where to write the result; stdout when omitted.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Write the chromatic sumset h·A.
    Sumset {
        #[command(flatten)]
        io: Io,
        /// Comma list, one entry per color.
        #[arg(long)]
        h: String,
        /// Window `lo:hi[,lo:hi..]`; required for structured colors.
        #[arg(long)]
        window: Option<String>,
    },
    /// Build a covering certificate for (rh)·A ⊆ X + h·A.
    Cover {
        #[command(flatten)]
        io: Io,
        #[arg(long)]
        r: u64,
        #[arg(long)]
        h: String,
        #[arg(long, value_enum, default_value_t = MethodArg::Auto)]
        method: MethodArg,
        /// Run the oracle and record the outcome in the certificate.
        #[arg(long)]
        verify: bool,
        #[arg(long)]
        window: Option<String>,
    },
    /// Write the representation profile and threshold layer at h.
    Layers {
        #[command(flatten)]
        io: Io,
        #[arg(long)]
        h: String,
        #[arg(long, default_value_t = 1)]
        t: u64,
        /// Also decompose the layer into C ∪ [c, H - d] ∪ (H - D).
        #[arg(long)]
        structure: bool,
    },
    /// Tabulate covers over a box of h values as CSV.
    Scan {
        #[command(flatten)]
        io: Io,
        #[arg(long)]
        r: u64,
        /// Threshold; switches the scan to layer covers.
        #[arg(long)]
        t: Option<u64>,
        #[arg(long, default_value = "1")]
        h_min: String,
        #[arg(long, default_value = "12")]
        h_max: String,
        #[arg(long, value_enum, default_value_t = MethodArg::Auto)]
        method: MethodArg,
        #[arg(long)]
        window: Option<String>,
    },
    /// Re-run the oracle on a certificate file.
    Verify {
        #[command(flatten)]
        io: Io,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum MethodArg {
    Auto,
    Finite,
    Submonoid,
    ApproxSubmonoid,
    FinitePlusMonoid,
    Semilinear,
    Inhomogeneous,
}

/// An error that carries its own exit code.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl std::error::Error for Failure {}

pub fn fail(code: u8, message: impl Into<String>) -> anyhow::Error {
    Failure {
        code,
        message: message.into(),
    }
    .into()
}

pub const USAGE: u8 = 2;
pub const UNSUPPORTED: u8 = 3;
pub const VERIFICATION_FAILED: u8 = 4;

fn exit_code(err: &anyhow::Error) -> u8 {
    if let Some(f) = err.downcast_ref::<Failure>() {
        return f.code;
    }
    if let Some(e) = err.downcast_ref::<csl_core::Error>() {
        return match e {
            csl_core::Error::Structural(_) | csl_core::Error::InvalidWitness(_) => USAGE,
            csl_core::Error::Unsupported(_) => UNSUPPORTED,
            csl_core::Error::Threshold { .. } | csl_core::Error::NotReady(_) => 5,
            csl_core::Error::Capacity { .. } | csl_core::Error::Overflow { .. } => 6,
        };
    }
    if err.downcast_ref::<serde_json::Error>().is_some()
        || err.downcast_ref::<std::io::Error>().is_some()
    {
        return USAGE;
    }
    1
}

fn run(cli: Cli) -> anyhow::Result<()> {
    if let Ok(spec) = std::env::var(ENV_VAR) {
        Capacity::parse_overrides(&spec).map_err(|e| fail(USAGE, format!("{ENV_VAR}: {e}")))?;
    }
    match cli.command {
        Command::Sumset { io, h, window } => commands::sumset(&io, &h, window.as_deref()),
        Command::Cover {
            io,
            r,
            h,
            method,
            verify,
            window,
        } => commands::cover(&io, r, &h, method, verify, window.as_deref()),
        Command::Layers {
            io,
            h,
            t,
            structure,
        } => commands::layers(&io, &h, t, structure),
        Command::Scan {
            io,
            r,
            t,
            h_min,
            h_max,
            method,
            window,
        } => scan::scan(&io, r, t, &h_min, &h_max, method, window.as_deref()),
        Command::Verify { io } => commands::verify(&io),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(exit_code(&err))
        }
    }
}
