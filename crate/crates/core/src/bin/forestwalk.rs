//! Command-line runner: builds ladders, checks them, builds forests, runs
//! record and walk suites, and prints reports. Exit codes: 0 success,
//! 1 invariant failure, 2 config error.

use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Parser, Subcommand};

use forestwalk::experiment::{
    find_switcher_for_cli, print_report, resolve_scale_for_cli, run, CheckToggles,
    ExperimentConfig, ExperimentError, RunStatus, ScaleSpec,
};
use forestwalk::forest::{build_forest, export_dot, forest_to_json};
use forestwalk::group::GroupModel;
use forestwalk::ladder::{check_ladder, scale_to_text};
use forestwalk::preset::PresetName;

#[derive(Parser)]
#[command(
    name = "forestwalk",
    about = "Rooted forests on groups and random walks to their boundaries",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a ladder from a config or preset and write its scale file.
    BuildLadder {
        #[command(flatten)]
        source: SourceArgs,
    },
    /// Exhaustively verify the ladder axioms on a ball.
    CheckLadder {
        #[command(flatten)]
        source: SourceArgs,
        /// Ball radius for the exhaustive check.
        #[arg(long, default_value_t = 3)]
        radius: u64,
    },
    /// Build the despiking forest on a ball and export it.
    BuildForest {
        #[command(flatten)]
        source: SourceArgs,
        #[arg(long, default_value_t = 3)]
        radius: u64,
    },
    /// Run the record-statistics suite for the configured law.
    Records {
        #[command(flatten)]
        source: SourceArgs,
    },
    /// Simulate walk paths and verify the per-path structure.
    Simulate {
        #[command(flatten)]
        source: SourceArgs,
    },
    /// Run every enabled check from the config.
    Verify {
        #[command(flatten)]
        source: SourceArgs,
    },
    /// Print the report table for an output directory.
    Report {
        /// Output directory of a previous run.
        #[arg(long, default_value = "out")]
        out: PathBuf,
    },
    /// Search for a superswitching element over a standard-generator ball.
    FindSwitcher {
        /// Group: `free`, `lamplighter` or `free-product`.
        #[arg(long)]
        group: String,
        #[arg(long, default_value_t = 2)]
        rank: usize,
        #[arg(long, default_value_t = 2)]
        modulus: u32,
        #[arg(long, value_delimiter = ',')]
        orders: Vec<u32>,
        /// Radius of the ball the element must switch for.
        #[arg(long, default_value_t = 1)]
        z_radius: u64,
        /// Candidate budget.
        #[arg(long, default_value_t = 2_000_000)]
        budget: usize,
        #[arg(long, default_value = "out")]
        out: PathBuf,
    },
    /// Export the forest of a scale as DOT text to stdout.
    ExportDot {
        #[command(flatten)]
        source: SourceArgs,
        #[arg(long, default_value_t = 2)]
        radius: u64,
    },
}

#[derive(clap::Args)]
struct SourceArgs {
    /// Experiment config (TOML).
    #[arg(long)]
    config: Option<PathBuf>,
    /// Named preset instead of a config file.
    #[arg(long)]
    preset: Option<String>,
    /// Master seed override.
    #[arg(long)]
    seed: Option<u64>,
    /// Output directory override.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn io_error(path: &std::path::Path, source: std::io::Error) -> ExperimentError {
    ExperimentError::Io {
        path: path.display().to_string(),
        source,
    }
}

fn load_config(args: &SourceArgs) -> Result<ExperimentConfig, ExperimentError> {
    let mut config = match (&args.config, &args.preset) {
        (Some(path), _) => {
            let text = std::fs::read_to_string(path).map_err(|e| io_error(path, e))?;
            ExperimentConfig::from_toml(&text)?
        }
        (None, Some(preset)) => {
            if PresetName::parse(preset).is_none() {
                return Err(ExperimentError::Config(format!(
                    "unknown preset `{preset}`"
                )));
            }
            ExperimentConfig {
                seed: 0,
                scale: ScaleSpec::preset(preset),
                law: Default::default(),
                alpha: Default::default(),
                walk: Default::default(),
                checks: CheckToggles::default(),
                params: Default::default(),
                output: Default::default(),
            }
        }
        (None, None) => {
            return Err(ExperimentError::Config("need --config or --preset".into()))
        }
    };
    if let Some(seed) = args.seed {
        config.seed = seed;
    }
    if let Some(out) = &args.out {
        config.output.dir = out.display().to_string();
    }
    Ok(config)
}

fn resolve_scale_only(
    args: &SourceArgs,
) -> Result<(ExperimentConfig, Arc<forestwalk::Scale>), ExperimentError> {
    let config = load_config(args)?;
    let scale = resolve_scale_for_cli(&config)?;
    Ok((config, scale))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(status) => ExitCode::from(status.exit_code() as u8),
        Err(err) => {
            eprintln!("error: {err}");
            let code = match err {
                ExperimentError::Config(_) => 2,
                _ => 1,
            };
            ExitCode::from(code)
        }
    }
}

fn dispatch(cli: Cli) -> Result<RunStatus, ExperimentError> {
    match cli.command {
        Command::BuildLadder { source } => {
            let (config, scale) = resolve_scale_only(&source)?;
            let out_dir = PathBuf::from(&config.output.dir);
            std::fs::create_dir_all(&out_dir).map_err(|e| io_error(&out_dir, e))?;
            let path = out_dir.join("scale.txt");
            std::fs::write(&path, scale_to_text(&scale)).map_err(|e| io_error(&path, e))?;
            println!(
                "built {} levels over {}; scale written to {}",
                scale.horizon(),
                scale.model(),
                path.display()
            );
            Ok(RunStatus::Ok)
        }
        Command::CheckLadder { source, radius } => {
            let (config, scale) = resolve_scale_only(&source)?;
            let report = check_ladder(&scale, radius, config.params.ball_budget)?;
            println!(
                "ball {} elements; ambiguous {}; height violations {}; escape {:?}",
                report.ball_size,
                report.ambiguous.len(),
                report.height_drop_violations.len(),
                report.escape_per_level
            );
            if report.direct_axioms_hold() {
                println!("ladder axioms hold on the tested ball");
                Ok(RunStatus::Ok)
            } else {
                println!("ladder axioms VIOLATED");
                Ok(RunStatus::InvariantFailure)
            }
        }
        Command::BuildForest { source, radius } => {
            let (config, scale) = resolve_scale_only(&source)?;
            let forest = build_forest(scale, radius, config.params.ball_budget)?;
            let stats = forest.stats();
            let out_dir = PathBuf::from(&config.output.dir);
            std::fs::create_dir_all(&out_dir).map_err(|e| io_error(&out_dir, e))?;
            let json_path = out_dir.join("forest.json");
            let mut text =
                serde_json::to_string_pretty(&forest_to_json(&forest)).expect("json");
            text.push('\n');
            std::fs::write(&json_path, text).map_err(|e| io_error(&json_path, e))?;
            let dot_path = out_dir.join("forest.dot");
            std::fs::write(&dot_path, export_dot(&forest, None))
                .map_err(|e| io_error(&dot_path, e))?;
            println!(
                "forest: {} vertices, {} edges, {} roots, acyclic {}",
                stats.vertices, stats.edges, stats.roots, stats.acyclic
            );
            Ok(if stats.acyclic && stats.root_violations == 0 {
                RunStatus::Ok
            } else {
                RunStatus::InvariantFailure
            })
        }
        Command::Records { source } => run_with_checks(&source, |c| {
            c.checks = CheckToggles {
                records: true,
                ..CheckToggles::default()
            }
        }),
        Command::Simulate { source } => run_with_checks(&source, |c| {
            c.checks = CheckToggles {
                walk: true,
                ..CheckToggles::default()
            }
        }),
        Command::Verify { source } => run_with_checks(&source, |_| {}),
        Command::Report { out } => {
            let ok = print_report(&out, std::io::stdout().lock())?;
            Ok(if ok {
                RunStatus::Ok
            } else {
                RunStatus::InvariantFailure
            })
        }
        Command::FindSwitcher {
            group,
            rank,
            modulus,
            orders,
            z_radius,
            budget,
            out,
        } => {
            let model = match group.as_str() {
                "free" => GroupModel::free(rank)?,
                "lamplighter" => GroupModel::lamplighter(modulus)?,
                "free-product" => GroupModel::free_product(orders)?,
                other => {
                    return Err(ExperimentError::Config(format!("unknown group `{other}`")))
                }
            };
            let (element, cert) = find_switcher_for_cli(&model, z_radius, budget, &out)?;
            println!("superswitcher: {element}");
            println!("certificate: {}", cert.display());
            Ok(RunStatus::Ok)
        }
        Command::ExportDot { source, radius } => {
            let (config, scale) = resolve_scale_only(&source)?;
            let forest = build_forest(scale, radius, config.params.ball_budget)?;
            print!("{}", export_dot(&forest, None));
            Ok(RunStatus::Ok)
        }
    }
}

fn run_with_checks(
    source: &SourceArgs,
    adjust: impl FnOnce(&mut ExperimentConfig),
) -> Result<RunStatus, ExperimentError> {
    let mut config = load_config(source)?;
    adjust(&mut config);
    if config_no_checks(&config) {
        println!("no checks enabled; nothing to run");
        return Ok(RunStatus::Ok);
    }
    let (status, artifacts) = run(&config)?;
    print_report(&artifacts.out_dir, std::io::stdout().lock())?;
    Ok(status)
}

fn config_no_checks(config: &ExperimentConfig) -> bool {
    let c = &config.checks;
    !(c.ladder || c.forest || c.markov_oracle || c.records || c.walk || c.stabilizer)
}
