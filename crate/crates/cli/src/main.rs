//! `semwave`: reproducible runs over the semwave-core toolkit.
//!
//! Every run resolves a parameter table (config file, then `--set` and
//! subcommand flags), writes its data files into the output directory and a
//! `manifest.json` beside them.

mod commands;
mod config;
mod error;
mod output;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use crate::error::CliError;
use crate::output::Outputs;

#[derive(Debug, Parser)]
#[command(name = "semwave", version, about = "Semantic wave-function toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    global: GlobalArgs,
}

#[derive(Debug, Clone, Args)]
struct GlobalArgs {
    /// TOML or JSON parameter file.
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,
    /// Output directory [default: semwave-out].
    #[arg(long, global = true, value_name = "DIR")]
    out: Option<PathBuf>,
    /// Seed for every random draw in the run [default: 0].
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Override a parameter: dotted key, JSON or bare-string value.
    #[arg(long = "set", global = true, value_name = "KEY=VALUE")]
    set: Vec<String>,
    /// -v info, -vv debug.
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    verbose: u8,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Cosine similarity of two tokens, or complex similarity of two states.
    Similarity(commands::similarity::Flags),
    /// Build a complex semantic state from embeddings.
    Complexify(commands::complexify::Flags),
    /// Two-wave intensity along a line.
    Interfere(commands::interfere::Flags),
    /// Split-step evolution of a wave field.
    Evolve(commands::evolve::Flags),
    /// Double-well tunneling period, spectral and time-domain.
    Tunnel(commands::tunnel::Flags),
    /// Tabulate the Laplacian Green's function.
    Greens(commands::greens::Flags),
    /// Lagrangian terms of a snapshot, or the action of a trajectory.
    Action(commands::action::Flags),
    /// Sample a potential landscape; break the Mexican-hat symmetry.
    Landscape(commands::landscape::Flags),
    /// Search for tokens equally similar to two targets.
    Scan(commands::scan::Flags),
    /// Fetch embeddings from a provider into a local file.
    Fetch(commands::fetch::Flags),
    /// Run several config files concurrently, one output directory each.
    Batch(BatchArgs),
}

#[derive(Debug, Args)]
struct BatchArgs {
    /// Config files; each names its subcommand under `command`.
    #[arg(required = true)]
    configs: Vec<PathBuf>,
    #[arg(long, default_value_t = 1)]
    jobs: usize,
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Self::Similarity(_) => "similarity",
            Self::Complexify(_) => "complexify",
            Self::Interfere(_) => "interfere",
            Self::Evolve(_) => "evolve",
            Self::Tunnel(_) => "tunnel",
            Self::Greens(_) => "greens",
            Self::Action(_) => "action",
            Self::Landscape(_) => "landscape",
            Self::Scan(_) => "scan",
            Self::Fetch(_) => "fetch",
            Self::Batch(_) => "batch",
        }
    }

    fn overrides(&self) -> Vec<(&'static str, Value)> {
        match self {
            Self::Similarity(f) => f.overrides(),
            Self::Complexify(f) => f.overrides(),
            Self::Interfere(f) => f.overrides(),
            Self::Evolve(f) => f.overrides(),
            Self::Tunnel(f) => f.overrides(),
            Self::Greens(f) => f.overrides(),
            Self::Action(f) => f.overrides(),
            Self::Landscape(f) => f.overrides(),
            Self::Scan(f) => f.overrides(),
            Self::Fetch(f) => f.overrides(),
            Self::Batch(_) => Vec::new(),
        }
    }
}

/// A fully resolved run, ready to execute.
#[derive(Debug, Clone)]
pub struct Run {
    pub command: String,
    pub params: Value,
    pub seed: u64,
    pub out: PathBuf,
    pub source: Option<PathBuf>,
}

fn base_table(path: Option<&Path>) -> Result<Value, CliError> {
    match path {
        Some(p) => config::load_file(p),
        None => Ok(json!({})),
    }
}

fn resolve(mut params: Value, global: &GlobalArgs, flags: Vec<(&str, Value)>) -> Result<(Value, u64, PathBuf), CliError> {
    for raw in &global.set {
        let (k, v) = config::parse_assignment(raw)?;
        config::set_path(&mut params, &k, v)?;
    }
    for (k, v) in flags {
        config::set_path(&mut params, k, v)?;
    }
    let seed = match (global.seed, params.get("seed")) {
        (Some(s), _) => s,
        (None, Some(v)) => v.as_u64().ok_or_else(|| CliError::config("seed", "must be a non-negative integer"))?,
        (None, None) => 0,
    };
    let out = match (&global.out, params.get("out")) {
        (Some(o), _) => o.clone(),
        (None, Some(Value::String(s))) => PathBuf::from(s),
        (None, Some(_)) => return Err(CliError::config("out", "must be a path string")),
        (None, None) => PathBuf::from("semwave-out"),
    };
    Ok((params, seed, out))
}

/// Executes one run and writes its manifest.
pub fn execute(run: &Run) -> Result<Vec<String>, CliError> {
    let mut outputs = Outputs::create(&run.out)?;
    let resolved = commands::dispatch(&run.command, &run.params, run.seed, &mut outputs)?;
    let mut manifest_config = json!({ "params": resolved });
    if let Some(src) = &run.source {
        manifest_config["source"] = json!(src.display().to_string());
    }
    outputs.finish(&run.command, run.seed, manifest_config)
}

fn batch(args: &BatchArgs, global: &GlobalArgs) -> Result<(), CliError> {
    if args.jobs == 0 {
        return Err(CliError::config("jobs", "must be >= 1"));
    }
    let root = global.out.clone().unwrap_or_else(|| PathBuf::from("semwave-out"));
    let mut runs = Vec::with_capacity(args.configs.len());
    for (i, path) in args.configs.iter().enumerate() {
        let table = config::load_file(path)?;
        let command = table
            .get("command")
            .and_then(Value::as_str)
            .ok_or_else(|| CliError::config(format!("{}: command", path.display()), "batch configs must name a subcommand"))?
            .to_string();
        if !commands::NAMES.contains(&command.as_str()) {
            return Err(CliError::config(format!("{}: command", path.display()), format!("unknown subcommand `{command}`")));
        }
        let (params, seed, _) = resolve(table, global, Vec::new())?;
        let stem = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
        runs.push(Run {
            command,
            params,
            seed,
            out: root.join(format!("{i}_{stem}")),
            source: Some(path.clone()),
        });
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(args.jobs)
        .build()
        .map_err(|e| CliError::Usage(format!("cannot start {} workers: {e}", args.jobs)))?;
    let results: Vec<Result<Vec<String>, CliError>> = pool.install(|| {
        use rayon::prelude::*;
        runs.par_iter().map(execute).collect()
    });
    let mut failed = 0;
    for (run, res) in runs.iter().zip(&results) {
        match res {
            Ok(files) => println!("{}\tok\t{}", run.out.display(), files.join(",")),
            Err(e) => {
                failed += 1;
                eprintln!("{}\terror\t{e}", run.out.display());
            }
        }
    }
    if failed > 0 {
        return Err(CliError::Batch {
            failed,
            total: runs.len(),
        });
    }
    Ok(())
}

fn run(cli: Cli) -> Result<(), CliError> {
    if let Command::Batch(args) = &cli.command {
        return batch(args, &cli.global);
    }
    let table = base_table(cli.global.config.as_deref())?;
    if let Some(named) = table.get("command").and_then(Value::as_str) {
        if named != cli.command.name() {
            return Err(CliError::config(
                "command",
                format!("config is for `{named}` but `{}` was invoked", cli.command.name()),
            ));
        }
    }
    let (params, seed, out) = resolve(table, &cli.global, cli.command.overrides())?;
    let run = Run {
        command: cli.command.name().to_string(),
        params,
        seed,
        out,
        source: cli.global.config.clone(),
    };
    let files = execute(&run)?;
    log::info!("wrote {} file(s) to {}", files.len(), run.out.display());
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let level = match cli.global.verbose {
        0 => "warn",
        1 => "info",
        _ => "debug",
    };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).init();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("semwave: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
