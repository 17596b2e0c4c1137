//! `dqes`: MUB landscape sweeps, VQE runs and problem generation.

mod commands;
mod manifest;
mod svg;

use std::fmt;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};
use dqes_core::Observable;

/// Environment variable naming the default output directory.
pub const OUT_DIR_ENV: &str = "DQES_OUT_DIR";

#[derive(Debug, Parser)]
#[command(
    name = "dqes",
    version,
    about = "Exhaustive MUB-state search for variational cost landscapes"
)]
pub struct Cli {
    /// Record the wall-clock time in manifests (reruns then differ in that field only).
    #[arg(long, global = true)]
    timestamp: bool,

    /// Worker threads for sweeps and multi-start runs (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Build, verify or export complete MUB sets.
    #[command(subcommand)]
    Mub(commands::mub::MubCommand),
    /// Evaluate an observable on every (partial) MUB state.
    Landscape(commands::landscape::LandscapeArgs),
    /// Run VQE from ranked MUB states, explicit specs or random parameters.
    Vqe(commands::vqe::VqeArgs),
    /// Generate problem files.
    #[command(subcommand)]
    Problem(commands::problem::ProblemCommand),
    /// Re-run the command recorded in a manifest.
    Replay { manifest: PathBuf },
}

/// Observable source shared by `landscape` and `vqe`.
#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
pub struct ObservableSource {
    /// Observable JSON file.
    #[arg(long)]
    observable: Option<PathBuf>,
    /// Built-in fixture: H2_075, HeH+_100, xy1, ising_fig7, ising_fig8.
    #[arg(long)]
    fixture: Option<String>,
}

impl ObservableSource {
    pub fn load(&self) -> Result<(String, Observable)> {
        if let Some(path) = &self.observable {
            let text = std::fs::read_to_string(path)
                .with_context(|| format!("reading {}", path.display()))?;
            let obs = Observable::from_json(&text)
                .with_context(|| format!("in observable file {}", path.display()))?;
            let name = path
                .file_stem()
                .map_or_else(|| "observable".into(), |s| s.to_string_lossy().into_owned());
            Ok((name, obs))
        } else {
            let name = self.fixture.clone().expect("clap enforces one source");
            let obs = dqes_core::problems::named_observable(&name)?;
            Ok((name, obs))
        }
    }
}

/// Errors that should exit with status 2.
#[derive(Debug)]
pub struct UsageError(pub String);

impl fmt::Display for UsageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

pub fn usage(msg: impl Into<String>) -> anyhow::Error {
    UsageError(msg.into()).into()
}

/// `$DQES_OUT_DIR` or the working directory.
pub fn default_out_dir() -> PathBuf {
    std::env::var_os(OUT_DIR_ENV).map_or_else(|| PathBuf::from("."), PathBuf::from)
}

/// The explicit path, or `name` inside the default output directory.
pub fn resolve_out(explicit: Option<&Path>, name: &str) -> PathBuf {
    explicit.map_or_else(|| default_out_dir().join(name), Path::to_path_buf)
}

pub fn write_file(path: &Path, contents: &str) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    }
    std::fs::write(path, contents).with_context(|| format!("writing {}", path.display()))
}

/// Filesystem-friendly version of a fixture or spec label.
pub fn slug(s: &str) -> String {
    s.chars()
        .map(|c| match c {
            'a'..='z' | 'A'..='Z' | '0'..='9' | '-' | '_' | '.' => c,
            '+' => 'p',
            _ => '_',
        })
        .collect()
}

pub struct RunContext {
    pub args: Vec<String>,
    pub timestamp: bool,
}

fn run(cli: Cli, args: Vec<String>) -> Result<()> {
    if let Some(t) = cli.threads {
        if t == 0 {
            return Err(usage("--threads must be at least 1"));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global()
            .context("configuring the worker pool")?;
    }
    let ctx = RunContext {
        args,
        timestamp: cli.timestamp,
    };
    match cli.command {
        Command::Mub(cmd) => commands::mub::run(cmd, &ctx),
        Command::Landscape(a) => commands::landscape::run(a, &ctx),
        Command::Vqe(a) => commands::vqe::run(a, &ctx),
        Command::Problem(cmd) => commands::problem::run(cmd, &ctx),
        Command::Replay { manifest } => {
            let m = manifest::RunManifest::load(&manifest)?;
            if m.command_line.first().is_some_and(|c| c == "replay") {
                return Err(usage("a replay manifest cannot be replayed"));
            }
            let argv = std::iter::once("dqes".to_string()).chain(m.command_line.iter().cloned());
            let cli = Cli::try_parse_from(argv).map_err(|e| usage(e.to_string()))?;
            run(cli, m.command_line)
        }
    }
}

fn main() -> ExitCode {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli, args) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            if e.downcast_ref::<UsageError>().is_some() {
                ExitCode::from(2)
            } else {
                ExitCode::from(1)
            }
        }
    }
}
