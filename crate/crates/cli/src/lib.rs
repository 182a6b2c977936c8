//! `splice` command-line front end.
//!
//! Every command prints one report (JSON by default, CSV with
//! `--format csv`) that embeds the tool version, a hash of the
//! configuration, the tolerances used and the parsed inputs.
//!
//! Exit status: 0 on success, 2 when a theorem hypothesis does not hold
//! for the given inputs, 1 for anything else (bad flags, unreadable or
//! invalid specs, I/O).

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

mod commands;
pub mod report;
pub mod spec;

pub use spec::{validate_spec, AxisSpec, DomainSpec};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_HYPOTHESIS: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "splice", version, about = "Exponential bases on split intervals: sequences, Gram spectra, stability checks")]
pub struct Cli {
    #[command(flatten)]
    pub output: OutputArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    /// Report format.
    #[arg(long, value_enum, default_value = "json", global = true)]
    pub format: Format,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Override the numerical tolerance used by hypothesis checks.
    #[arg(long, global = true)]
    pub tolerance: Option<f64>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Star deviations delta*_n and frequencies n + delta*_n.
    Sequence {
        #[arg(long)]
        beta: String,
        #[arg(long, default_value_t = 16)]
        window: usize,
    },
    /// Validate a domain spec and list the split interval it describes.
    Domain {
        #[arg(long)]
        spec: String,
    },
    /// Gram matrix of the star system on a domain.
    Gram {
        /// Defaults to the unit interval.
        #[arg(long)]
        spec: Option<String>,
        #[arg(long)]
        beta: Option<String>,
        #[arg(long, default_value_t = 16)]
        window: usize,
    },
    /// Extreme Gram eigenvalues along nested windows.
    FrameBounds {
        #[arg(long)]
        spec: Option<String>,
        #[arg(long)]
        beta: Option<String>,
        /// Comma-separated, strictly increasing.
        #[arg(long, default_value = "16,32,64,128")]
        schedule: String,
    },
    /// Translation phases of the star set against the spec's gaps.
    ModulationCheck {
        #[arg(long)]
        spec: String,
        #[arg(long)]
        beta: Option<String>,
        #[arg(long, default_value_t = 16)]
        window: usize,
    },
    /// Complement domain in [0, Delta] and, with --window, its lattice system.
    Complement {
        #[arg(long)]
        spec: String,
        #[arg(long)]
        beta: Option<String>,
        #[arg(long)]
        window: Option<usize>,
    },
    /// m-segment stability criterion.
    Stability {
        #[arg(long)]
        spec: String,
        /// Bound on sup|delta_n|; without it the star deviations for --beta are used.
        #[arg(long)]
        envelope: Option<f64>,
        #[arg(long)]
        beta: Option<String>,
        #[arg(long, default_value_t = 16)]
        window: usize,
    },
    /// Product systems on split cubes.
    Tensor {
        #[arg(long)]
        spec: String,
        /// One scale per axis, comma-separated; a single value applies to all axes.
        #[arg(long)]
        beta: Option<String>,
        #[arg(long, default_value_t = 8)]
        window: usize,
    },
    /// Average of the sawtooth g along n*beta.
    Weyl {
        #[arg(long)]
        beta: String,
        #[arg(long, default_value_t = 100_000)]
        count: usize,
    },
}

/// A failed command: message plus exit status.
#[derive(Debug, Clone, PartialEq)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl Failure {
    pub fn usage(message: impl Into<String>) -> Self {
        Failure { code: EXIT_FAILURE, message: message.into() }
    }
}

impl From<splice_core::Error> for Failure {
    fn from(e: splice_core::Error) -> Self {
        let code = if e.is_hypothesis_violation() { EXIT_HYPOTHESIS } else { EXIT_FAILURE };
        Failure { code, message: e.to_string() }
    }
}

/// Parse `args` (including the program name), run, and write the report.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_FAILURE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { stderr.write_all(text.as_bytes()) } else { stdout.write_all(text.as_bytes()) };
            return code;
        }
    };
    match execute(&cli) {
        Ok((text, status)) => match &cli.output.out {
            Some(path) => match std::fs::write(path, &text) {
                Ok(()) => status,
                Err(e) => {
                    let _ = writeln!(stderr, "error: cannot write {}: {e}", path.display());
                    EXIT_FAILURE
                }
            },
            None => match stdout.write_all(text.as_bytes()) {
                Ok(()) => status,
                Err(_) => EXIT_FAILURE,
            },
        },
        Err(f) => {
            let _ = writeln!(stderr, "error: {}", f.message);
            f.code
        }
    }
}

/// Render the report for a parsed command line; returns the text and exit status.
pub fn execute(cli: &Cli) -> Result<(String, i32), Failure> {
    if let Some(t) = cli.output.tolerance {
        if !(t.is_finite() && t > 0.0) {
            return Err(Failure::usage(format!("tolerance must be positive, got {t}")));
        }
    }
    let out = commands::dispatch(&cli.command, cli.output.tolerance)?;
    let text = match cli.output.format {
        Format::Json => {
            let doc = report::envelope(out.command, out.inputs, out.tolerances, out.result);
            let mut s = serde_json::to_string_pretty(&doc).expect("reports serialize");
            s.push('\n');
            s
        }
        Format::Csv => out.csv.unwrap_or_else(|| report::scalar_csv(&out.result)),
    };
    Ok((text, out.status))
}

/// Cap the global worker pool from `SPLICE_THREADS`, if set.
pub fn configure_threads(value: Option<&str>) -> Result<(), Failure> {
    let Some(raw) = value else { return Ok(()) };
    let threads: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|n| *n > 0)
        .ok_or_else(|| Failure::usage(format!("SPLICE_THREADS must be a positive integer, got {raw:?}")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| Failure::usage(format!("cannot configure thread pool: {e}")))
}
