//! The `zetaforge` command line.

mod commands;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::counting::{CountCache, CountError, Engine, DEFAULT_BUDGET, DEFAULT_WINDOW};

pub use commands::Report;

pub const EXIT_OK: i32 = 0;
pub const EXIT_NEGATIVE: i32 = 2;
pub const EXIT_RESOURCE: i32 = 3;
pub const EXIT_INPUT: i32 = 4;
pub const EXIT_INTERNAL: i32 = 1;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    Resource(String),
    #[error("{0}")]
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => EXIT_INPUT,
            CliError::Resource(_) => EXIT_RESOURCE,
            CliError::Internal(_) => EXIT_INTERNAL,
        }
    }
}

impl From<CountError> for CliError {
    fn from(e: CountError) -> Self {
        match e {
            CountError::BudgetExceeded { .. } | CountError::Unstable { .. } => CliError::Resource(e.to_string()),
            CountError::Internal(_) | CountError::Cache(_) => CliError::Internal(e.to_string()),
            _ => CliError::Input(e.to_string()),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Text,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum KindArg {
    Weil,
    Igusa,
    Serre,
}

#[derive(Parser, Debug)]
#[command(name = "zetaforge", version, about = "Exact point counts, zeta series and Grothendieck-ring specializations")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct GlobalArgs {
    /// Worker threads (default: available parallelism)
    #[arg(long, global = true)]
    pub workers: Option<usize>,
    /// Maximum number of ring tuples one count may visit
    #[arg(long, global = true, default_value_t = DEFAULT_BUDGET)]
    pub budget: u64,
    /// Consecutive unchanged levels required for a liftable count
    #[arg(long, global = true, default_value_t = DEFAULT_WINDOW)]
    pub stab_window: u32,
    /// Count cache directory; the ZETAFORGE_CACHE variable takes precedence
    #[arg(long, global = true)]
    pub cache_dir: Option<PathBuf>,
    /// Disable the count cache
    #[arg(long, global = true)]
    pub no_cache: bool,
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Text)]
    pub output: OutputFormat,
}

#[derive(Args, Debug, Clone)]
pub struct BaseArgs {
    /// Prime p
    #[arg(long)]
    pub p: Option<u64>,
    /// Extension degree over F_p
    #[arg(long)]
    pub m: Option<u32>,
    /// Field size q = p^m (alternative to --p/--m)
    #[arg(long)]
    pub q: Option<u64>,
}

#[derive(Args, Debug, Clone)]
pub struct FitArgs {
    /// Highest power of T kept in the series
    #[arg(long)]
    pub order: Option<usize>,
    /// Largest denominator degree to search (default: as large as the data allows)
    #[arg(long)]
    pub max_order: Option<usize>,
    /// Coefficients a recurrence must predict beyond those it was fitted on
    #[arg(long, default_value_t = crate::rationality::DEFAULT_MIN_GUARD)]
    pub min_guard: usize,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Print a single count
    Count {
        #[arg(long)]
        variety: PathBuf,
        #[arg(long, value_enum)]
        kind: KindArg,
        #[command(flatten)]
        base: BaseArgs,
        #[arg(long)]
        n: usize,
    },
    /// Hasse-Weil zeta function over F_q
    Zeta {
        #[arg(long)]
        variety: PathBuf,
        #[command(flatten)]
        base: BaseArgs,
        #[command(flatten)]
        fit: FitArgs,
    },
    /// Series of solution counts modulo p^(n+1)
    Igusa {
        #[arg(long)]
        variety: PathBuf,
        #[command(flatten)]
        base: BaseArgs,
        #[command(flatten)]
        fit: FitArgs,
    },
    /// Series of liftable solution counts modulo p^(n+1)
    Serre {
        #[arg(long)]
        variety: PathBuf,
        #[command(flatten)]
        base: BaseArgs,
        #[command(flatten)]
        fit: FitArgs,
    },
    /// Symmetric-product counts and the curve structure of the zeta function
    Kapranov {
        #[arg(long)]
        variety: PathBuf,
        #[command(flatten)]
        base: BaseArgs,
        #[command(flatten)]
        fit: FitArgs,
    },
    /// Evaluate a cover specification or a ring element
    Groth {
        /// Cover specification (JSON)
        #[arg(long, conflicts_with = "expr", required_unless_present = "expr")]
        cover: Option<PathBuf>,
        /// Ring element expression, e.g. "(L - 1)/3"
        #[arg(long)]
        expr: Option<String>,
        /// Specialization: count:Q, euler or hodge (repeatable)
        #[arg(long = "spec")]
        specs: Vec<String>,
        /// NAME=VALUE for counting specializations (repeatable)
        #[arg(long = "count-value")]
        count_values: Vec<String>,
        /// NAME=VALUE for the Euler specialization (repeatable)
        #[arg(long = "euler-value")]
        euler_values: Vec<String>,
        /// NAME=POLY in u, v for the Hodge specialization (repeatable)
        #[arg(long = "hodge-value")]
        hodge_values: Vec<String>,
    },
}

/// Resolved runtime settings.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunConfig {
    pub workers: usize,
    pub budget: u64,
    pub stab_window: u32,
    pub cache_dir: Option<PathBuf>,
    pub output: OutputFormat,
}

impl RunConfig {
    pub fn resolve(g: &GlobalArgs, env_cache: Option<OsString>) -> Result<Self, CliError> {
        let workers = g
            .workers
            .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()));
        if workers == 0 {
            return Err(CliError::Input("--workers must be at least 1".into()));
        }
        if g.budget == 0 {
            return Err(CliError::Input("--budget must be at least 1".into()));
        }
        if g.stab_window == 0 {
            return Err(CliError::Input("--stab-window must be at least 1".into()));
        }
        let cache_dir = if g.no_cache {
            None
        } else {
            env_cache
                .filter(|s| !s.is_empty())
                .map(PathBuf::from)
                .or_else(|| g.cache_dir.clone())
                .or_else(default_cache_dir)
        };
        Ok(RunConfig {
            workers,
            budget: g.budget,
            stab_window: g.stab_window,
            cache_dir,
            output: g.output,
        })
    }

    pub fn engine(&self) -> Result<Engine, CliError> {
        let engine = Engine::new(self.workers, self.budget);
        match &self.cache_dir {
            Some(dir) => Ok(engine.with_cache(CountCache::open(dir)?)),
            None => Ok(engine),
        }
    }
}

fn default_cache_dir() -> Option<PathBuf> {
    std::env::var_os("XDG_CACHE_HOME")
        .map(PathBuf::from)
        .or_else(|| std::env::var_os("HOME").map(|h| PathBuf::from(h).join(".cache")))
        .map(|d| d.join("zetaforge"))
}

/// Parses `args` (including the program name), runs the command and writes
/// the report to `out` and diagnostics to `err`. Returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let _ = if e.use_stderr() {
                write!(err, "{}", e.render())
            } else {
                write!(out, "{}", e.render())
            };
            return code;
        }
    };
    let result = RunConfig::resolve(&cli.global, std::env::var_os("ZETAFORGE_CACHE"))
        .and_then(|cfg| commands::execute(&cli.command, &cfg).map(|r| (cfg, r)));
    match result {
        Ok((cfg, report)) => {
            let body = match cfg.output {
                OutputFormat::Text => report.text.clone(),
                OutputFormat::Json => {
                    let mut s = serde_json::to_string_pretty(&report.json).expect("serializable");
                    s.push('\n');
                    s
                }
            };
            if out.write_all(body.as_bytes()).is_err() {
                return EXIT_INTERNAL;
            }
            report.status
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

pub fn main() {
    let code = run(std::env::args_os(), &mut std::io::stdout(), &mut std::io::stderr());
    std::process::exit(code);
}

#[cfg(test)]
mod tests {
    use super::*;

    fn global(args: &[&str]) -> GlobalArgs {
        let mut v = vec!["zetaforge"];
        v.extend_from_slice(args);
        v.extend_from_slice(&["groth", "--expr", "1"]);
        Cli::try_parse_from(v).unwrap().global
    }

    #[test]
    fn cache_precedence() {
        let g = global(&["--cache-dir", "/flag"]);
        let cfg = RunConfig::resolve(&g, Some("/env".into())).unwrap();
        assert_eq!(cfg.cache_dir, Some(PathBuf::from("/env")));
        let cfg = RunConfig::resolve(&g, None).unwrap();
        assert_eq!(cfg.cache_dir, Some(PathBuf::from("/flag")));
        let g = global(&["--cache-dir", "/flag", "--no-cache"]);
        assert_eq!(RunConfig::resolve(&g, Some("/env".into())).unwrap().cache_dir, None);
    }

    #[test]
    fn config_validation() {
        assert!(RunConfig::resolve(&global(&["--workers", "0"]), None).is_err());
        assert!(RunConfig::resolve(&global(&["--budget", "0"]), None).is_err());
        assert!(RunConfig::resolve(&global(&["--stab-window", "0"]), None).is_err());
        let cfg = RunConfig::resolve(&global(&["--workers", "3", "--output", "json"]), None).unwrap();
        assert_eq!((cfg.workers, cfg.output), (3, OutputFormat::Json));
    }
}
