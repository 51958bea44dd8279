//! Command-line front end.
//!
//! Exit codes: 0 success, 1 validation failure, 2 numerical failure,
//! 3 I/O failure.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use slitflow_cli::scenario::{builtin, builtin_names, RunSpec, Scenario};
use slitflow_cli::{run_scenario, run_sweep, sample_detections, CliError};

/// Double-slit electromagnetic simulator: density profiles, energy flow
/// lines and fringe analysis for polarized light.
#[derive(Parser)]
#[command(name = "slitflow", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a scenario from a key = value config file.
    Run {
        /// Path to the scenario config.
        config: PathBuf,
        /// Output directory (default: `<out-base>/<scenario-name>`).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a builtin scenario by name.
    Scenario {
        /// Builtin name; see list-scenarios.
        name: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// List the builtin scenarios.
    ListScenarios,
    /// Sample detection events from a scenario's screen profile.
    Sample {
        /// Builtin name or config path providing the profile.
        target: String,
        /// Number of detection events.
        #[arg(long)]
        n: usize,
        /// Seed override (default: the scenario seed).
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    match dispatch() {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn dispatch() -> Result<(), CliError> {
    let cli = Cli::parse();
    match cli.command {
        Command::Run { config, out } => {
            let text = fs::read_to_string(&config)?;
            let scenario = Scenario::parse(&text)?;
            let dir = output_dir(out, &scenario.name);
            let manifest = run_scenario(&scenario, &dir)?;
            report(&manifest.scenario_name, &manifest.output_dir, manifest.files.len());
            Ok(())
        }
        Command::Scenario { name, out } => {
            let spec = builtin(&name)
                .ok_or_else(|| CliError::validation(format!("unknown builtin scenario `{name}`")))?;
            match spec {
                RunSpec::Single(scenario) => {
                    let dir = output_dir(out, &scenario.name);
                    let manifest = run_scenario(&scenario, &dir)?;
                    report(&manifest.scenario_name, &manifest.output_dir, manifest.files.len());
                }
                RunSpec::Sweep { base, states } => {
                    let dir = output_dir(out, &base.name);
                    let manifest = run_sweep(&base, &states, &dir)?;
                    report(&manifest.scenario_name, &manifest.output_dir, manifest.files.len());
                }
            }
            Ok(())
        }
        Command::ListScenarios => {
            for (name, description) in builtin_names() {
                println!("{name:<12} {description}");
            }
            Ok(())
        }
        Command::Sample { target, n, seed, out } => {
            let scenario = resolve_scenario(&target)?;
            let (wave, grating) = scenario.validate()?;
            let profile = slitflow::screen_profile(
                scenario.screen_distance,
                &scenario.xgrid(),
                &wave,
                &grating,
                &scenario.profile,
                &scenario.polarization,
                scenario.polarizers,
            )?;
            let events = sample_detections(&profile, n, seed.unwrap_or(scenario.seed))?;
            let dir = output_dir(out, &scenario.name);
            fs::create_dir_all(&dir)?;
            let mut csv = String::with_capacity(events.len() * 24 + 8);
            csv.push_str("x_mm\n");
            for x in &events {
                csv.push_str(&format!("{:.14e}\n", x * 1e3));
            }
            let path = dir.join("detections.csv");
            fs::write(&path, csv)?;
            println!("{} detection events -> {}", events.len(), path.display());
            Ok(())
        }
    }
}

/// Resolve a sample target: builtin name first, then config path.
fn resolve_scenario(target: &str) -> Result<Scenario, CliError> {
    if let Some(RunSpec::Single(s)) = builtin(target) {
        return Ok(s);
    }
    if let Some(RunSpec::Sweep { base, .. }) = builtin(target) {
        return Ok(base);
    }
    let text = fs::read_to_string(target)?;
    Scenario::parse(&text)
}

/// Output directory: --out flag, else `$SLITFLOW_OUT_DIR/<name>`,
/// else `runs/<name>`.
fn output_dir(flag: Option<PathBuf>, name: &str) -> PathBuf {
    if let Some(dir) = flag {
        return dir;
    }
    let base = std::env::var_os("SLITFLOW_OUT_DIR")
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from("runs"));
    base.join(name)
}

fn report(name: &str, dir: &std::path::Path, file_count: usize) {
    println!("scenario `{name}`: {file_count} files -> {}", dir.display());
}
