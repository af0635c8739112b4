//! Batch front end: solve one instance, run sweeps, dump the workload
//! catalog, or replay a dumped scenario. Exit codes: 0 success, 1 usage or
//! configuration error, 2 solver failure.

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use pqoff_core::baselines::run_scheme;
use pqoff_core::catalog;
use pqoff_core::driver::SolverSettings;
use pqoff_core::scenario::{generate, Scenario};
use pqoff_sim::config::RunConfig;
use pqoff_sim::experiments::{self, SweepSpec};
use pqoff_sim::report::{render_report, render_sca_trace_csv};
use pqoff_sim::{scenario_io, SimError};

#[derive(Parser)]
#[command(
    name = "pqoff",
    about = "Latency-optimal secure offloading of post-quantum workloads",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a scenario and solve it with one scheme.
    Solve(SolveArgs),
    /// Run a Monte-Carlo sweep and emit CSV plus a plot script.
    Sweep(SweepArgs),
    /// Print the cryptographic workload catalog as CSV.
    Catalog,
    /// Load a dumped scenario and re-solve it.
    Replay(ReplayArgs),
}

#[derive(Args)]
struct CommonArgs {
    /// Base seed for scenario generation.
    #[arg(long)]
    seed: Option<u64>,
    /// Configuration file (flat `key = value` text).
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output directory for traces and tables.
    #[arg(long, default_value = "out")]
    out: PathBuf,
    /// Configuration overrides, applied after the file.
    #[arg(value_name = "KEY=VALUE")]
    overrides: Vec<String>,
}

#[derive(Args)]
struct SolveArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Write the surrogate-solve trace CSV to the output directory.
    #[arg(long)]
    trace: bool,
    /// Write the generated scenario to this path for later replay.
    #[arg(long)]
    dump_scenario: Option<PathBuf>,
    /// Solve this dumped scenario instead of generating one.
    #[arg(long)]
    scenario: Option<PathBuf>,
    /// Print the effective configuration and exit.
    #[arg(long)]
    print_config: bool,
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Monte-Carlo runs per sweep point.
    #[arg(long)]
    runs: Option<usize>,
}

#[derive(Args)]
struct ReplayArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Scenario dump to load.
    #[arg(long)]
    scenario: PathBuf,
    /// Write the surrogate-solve trace CSV to the output directory.
    #[arg(long)]
    trace: bool,
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.exit_code() == 0 { 0 } else { 1 };
            let _ = e.print();
            std::process::exit(code);
        }
    };
    if let Err(e) = run(cli) {
        eprintln!("error: {e}");
        let code = match e {
            SimError::Solver(_) | SimError::TooManyExclusions { .. } => 2,
            _ => 1,
        };
        std::process::exit(code);
    }
}

fn load_config(common: &CommonArgs) -> Result<RunConfig, SimError> {
    let mut config = RunConfig::default();
    if let Some(path) = &common.config {
        let text = std::fs::read_to_string(path).map_err(|e| SimError::io(path, e))?;
        config.apply_file(&text)?;
    }
    config.apply_overrides(&common.overrides)?;
    if let Some(seed) = common.seed {
        config.seed = seed;
    }
    Ok(config)
}

fn write_file(path: &Path, contents: &str) -> Result<(), SimError> {
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            std::fs::create_dir_all(parent).map_err(|e| SimError::io(parent, e))?;
        }
    }
    std::fs::write(path, contents).map_err(|e| SimError::io(path, e))
}

fn solve_and_print(
    scn: &Scenario,
    config: &RunConfig,
    out_dir: &Path,
    trace: bool,
) -> Result<(), SimError> {
    let settings = SolverSettings::default();
    let report = run_scheme(config.scheme, scn, &settings)?;
    print!("{}", render_report(scn, &report));
    eprintln!("wall time: {:.3} s", report.wall_time_s);
    if trace {
        let path = out_dir.join("trace.csv");
        write_file(&path, &render_sca_trace_csv(&report))?;
        eprintln!("wrote {}", path.display());
    }
    Ok(())
}

fn run(cli: Cli) -> Result<(), SimError> {
    match cli.command {
        Command::Solve(args) => {
            let config = load_config(&args.common)?;
            if args.print_config {
                print!("{}", config.render());
                return Ok(());
            }
            let scn = match &args.scenario {
                Some(path) => {
                    let text =
                        std::fs::read_to_string(path).map_err(|e| SimError::io(path, e))?;
                    scenario_io::parse(&text)?
                }
                None => generate(&config.scenario, config.seed)?,
            };
            if let Some(path) = &args.dump_scenario {
                write_file(path, &scenario_io::render(&scn))?;
                eprintln!("wrote {}", path.display());
            }
            solve_and_print(&scn, &config, &args.common.out, args.trace)
        }
        Command::Sweep(args) => {
            let mut config = load_config(&args.common)?;
            if let Some(runs) = args.runs {
                config.runs = runs;
            }
            let spec = SweepSpec {
                axis: config.axis,
                points: config.resolved_points(),
                runs: config.runs,
                schemes: config.schemes.clone(),
                base: config.scenario,
                seed: config.seed,
                settings: SolverSettings::default(),
            };
            let result = experiments::run_sweep(&spec)?;
            experiments::emit(&result, &args.common.out)?;
            println!(
                "wrote {}/sweep.csv and plot_sweep.py ({} rows; {} of {} runs excluded)",
                args.common.out.display(),
                result.rows.len(),
                result.excluded,
                result.attempted
            );
            Ok(())
        }
        Command::Catalog => {
            print!("{}", catalog::to_csv());
            Ok(())
        }
        Command::Replay(args) => {
            let config = load_config(&args.common)?;
            let text = std::fs::read_to_string(&args.scenario)
                .map_err(|e| SimError::io(&args.scenario, e))?;
            let scn = scenario_io::parse(&text)?;
            solve_and_print(&scn, &config, &args.common.out, args.trace)
        }
    }
}
