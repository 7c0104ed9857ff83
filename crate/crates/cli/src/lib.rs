//! Command-line driver for the `definetti` toolkit.

pub mod commands;
pub mod config;
pub mod error;
pub mod sweep;
pub mod verify;

use std::ffi::OsString;
use std::io::Write;

use clap::{Args, Parser, Subcommand};

use definetti::family::StateFamily;

use crate::config::{parse_list, parse_n_range, SweepConfig};
use crate::error::{CliError, EXIT_OK, EXIT_USAGE};
use crate::verify::{Level, Mutation};

/// Environment variable capping the worker count.
pub const THREADS_VAR: &str = "DEFINETTI_THREADS";

#[derive(Debug, Parser)]
#[command(
    name = "definetti",
    version,
    about = "Finite-dimensional bosonic de Finetti experiments"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print dimensions of the symmetric spaces.
    Dims {
        /// Mode count; a table over d = 1..4 when absent.
        #[arg(long)]
        d: Option<usize>,
        #[arg(long = "N")]
        n: Option<String>,
        #[arg(long = "N-range", conflicts_with = "n")]
        n_range: Option<String>,
    },
    /// Run the invariant suites.
    Verify {
        #[arg(default_value = "quick")]
        level: String,
        #[arg(long, hide = true)]
        mutate: Option<String>,
    },
    /// Compute distances and bounds over an (N, k) grid and write CSV.
    Sweep(SweepArgs),
    /// Fit the decay of the distance in N on a doubling grid.
    Convergence {
        #[arg(long, default_value_t = 2)]
        d: usize,
        #[arg(long, default_value_t = 1)]
        k: usize,
        #[arg(long, default_value = "hartree-sup")]
        state: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long = "N-min", default_value_t = 8)]
        n_min: usize,
        #[arg(long = "N-max", default_value_t = 64)]
        n_max: usize,
    },
    /// Check the normal-ordering and Laguerre identities.
    WickCheck {
        #[arg(long = "n-max", default_value_t = 12)]
        n_max: usize,
        #[arg(long, default_value_t = 60)]
        cutoff: usize,
    },
    /// Reconstruct a random operator from its Hartree expectations.
    TomographyDemo {
        #[arg(long, default_value_t = 2)]
        d: usize,
        #[arg(long, default_value_t = 2)]
        k: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Debug, Args)]
struct SweepArgs {
    #[arg(long)]
    config: Option<String>,
    #[arg(long)]
    d: Option<String>,
    #[arg(long = "N")]
    n: Option<String>,
    #[arg(long = "N-range")]
    n_range: Option<String>,
    #[arg(long)]
    k: Option<String>,
    #[arg(long)]
    state: Option<String>,
    #[arg(long)]
    seed: Option<String>,
    #[arg(long)]
    samples: Option<String>,
    /// Output path; `-` writes to standard output.
    #[arg(long)]
    output: Option<String>,
    #[arg(long)]
    tolerance: Option<String>,
}

impl SweepArgs {
    /// The config file, if any, with command-line flags applied on top.
    fn resolve(&self) -> Result<SweepConfig, CliError> {
        let mut cfg = match &self.config {
            Some(path) => std::fs::read_to_string(path)
                .map_err(|e| CliError::Usage(format!("{path}: {e}")))?
                .parse()?,
            None => SweepConfig::default(),
        };
        let flags = [
            ("d", &self.d),
            ("N", &self.n),
            ("N-range", &self.n_range),
            ("k", &self.k),
            ("state", &self.state),
            ("seed", &self.seed),
            ("samples", &self.samples),
            ("output", &self.output),
            ("tolerance", &self.tolerance),
        ];
        for (key, value) in flags {
            if let Some(v) = value {
                cfg.set(key, v).map_err(|e| CliError::Usage(format!("--{key}: {e}")))?;
            }
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

fn parse_mutation(name: Option<&str>) -> Result<Mutation, CliError> {
    match name {
        None | Some("none") => Ok(Mutation::None),
        Some("weight-prefactor") => Ok(Mutation::WeightPrefactor),
        Some(other) => Err(CliError::Usage(format!("unknown mutation `{other}`"))),
    }
}

fn thread_count() -> Result<Option<usize>, CliError> {
    match std::env::var(THREADS_VAR) {
        Err(_) => Ok(None),
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n >= 1 => Ok(Some(n)),
            _ => Err(CliError::Usage(format!(
                "{THREADS_VAR} must be a positive integer, got `{v}`"
            ))),
        },
    }
}

fn execute(command: Command, out: &mut Vec<u8>, notes: &mut Vec<String>) -> Result<(), CliError> {
    match command {
        Command::Dims { d, n, n_range } => {
            let ds: Vec<usize> = match d {
                Some(d) => vec![d],
                None => (1..=4).collect(),
            };
            let ns = match (n, n_range) {
                (Some(v), _) => parse_list("N", &v)?,
                (_, Some(r)) => parse_n_range(&r)?,
                _ => (0..=8).collect(),
            };
            out.write_all(commands::dims_table(&ds, &ns)?.as_bytes())?;
        }
        Command::Verify { level, mutate } => {
            let level: Level = level.parse()?;
            let mutation = parse_mutation(mutate.as_deref())?;
            let results = verify::run_suites(level, mutation);
            for r in &results {
                writeln!(out, "{r}")?;
            }
            let failed: Vec<&str> = results.iter().filter(|r| !r.passed()).map(|r| r.name).collect();
            if !failed.is_empty() {
                return Err(CliError::Verification(format!("suites failed: {}", failed.join(", "))));
            }
            writeln!(out, "all suites passed")?;
        }
        Command::Sweep(args) => {
            let cfg = args.resolve()?;
            let rows = sweep::run_sweep(&cfg)?;
            let csv = sweep::to_csv(&rows);
            if cfg.output == "-" {
                out.write_all(csv.as_bytes())?;
            } else {
                std::fs::write(&cfg.output, csv)?;
            }
            notes.extend(sweep::informational_notes(&rows));
            let bad = sweep::violations(&rows);
            if !bad.is_empty() {
                return Err(CliError::Verification(bad.join("; ")));
            }
        }
        Command::Convergence {
            d,
            k,
            state,
            seed,
            n_min,
            n_max,
        } => {
            let family: StateFamily = state
                .parse()
                .map_err(|e: definetti::Error| CliError::Usage(e.to_string()))?;
            let report = commands::convergence(d, k, family, seed, n_min, n_max)?;
            write!(out, "{report}")?;
        }
        Command::WickCheck { n_max, cutoff } => {
            let (text, pass) = commands::wick_check(n_max, cutoff)?;
            out.write_all(text.as_bytes())?;
            if !pass {
                return Err(CliError::Verification("wick-check".into()));
            }
        }
        Command::TomographyDemo { d, k, seed } => {
            let (text, pass) = commands::tomography_demo(d, k, seed)?;
            out.write_all(text.as_bytes())?;
            if !pass {
                return Err(CliError::Verification("tomography round trip".into()));
            }
        }
    }
    Ok(())
}

/// Parse `args` (including the program name), run the command and return
/// the process exit code.
pub fn run_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if code == EXIT_OK {
                out.write_all(text.as_bytes())
            } else {
                err.write_all(text.as_bytes())
            };
            return code;
        }
    };
    let mut buf = Vec::new();
    let mut notes = Vec::new();
    let result = thread_count().and_then(|threads| match threads {
        None => execute(cli.command, &mut buf, &mut notes),
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| CliError::Usage(format!("thread pool: {e}")))?
            .install(|| execute(cli.command, &mut buf, &mut notes)),
    });
    let _ = out.write_all(&buf);
    for note in &notes {
        let _ = writeln!(err, "{note}");
    }
    match result {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    let code = run_with(args, &mut stdout.lock(), &mut stderr.lock());
    let _ = std::io::stdout().flush();
    code
}
