use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use spikefilter::experiments::{cmd_showcase, cmd_spikes, cmd_sweep, cmd_validate, SweepSpec, DEFAULT_GRAPH_RES};
use spikefilter::{ExperimentConfig, Result};

#[derive(Parser, Debug)]
#[command(name = "spikefilter", version = spikefilter::output::VERSION, about = "Wonham filter, fixed-lag smoothing and spike experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct Common {
    /// JSON configuration; defaults to the paper-scale parameters.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    /// Output directory.
    #[arg(long, default_value = "out")]
    out: PathBuf,
    #[arg(long)]
    replicas: Option<usize>,
    /// Noise parameter; for `sweep`, a comma-separated list.
    #[arg(long, value_delimiter = ',')]
    gamma: Vec<f64>,
    /// Worker threads (0 = all cores).
    #[arg(long, default_value_t = 0)]
    threads: usize,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Single-path observation, filter and smoothed filter CSVs.
    Showcase {
        #[command(flatten)]
        common: Common,
        /// Keep every n-th row.
        #[arg(long, default_value_t = 1)]
        stride: usize,
    },
    /// Error probability and smoothing geometry over a grid of (gamma, C).
    Sweep {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_delimiter = ',', default_value = "0.5,1,2,4,8")]
        cvalues: Vec<f64>,
        /// Time t of the false-detection probability.
        #[arg(long, default_value_t = 1.0)]
        time: f64,
        /// Replicas of the geometry runs on [0, H] per cell.
        #[arg(long, default_value_t = 50)]
        geometry_replicas: usize,
    },
    /// Runs the invariant checks; exits with status 2 if any fails.
    Validate {
        #[command(flatten)]
        common: Common,
    },
    /// Samples the truncated spike process on random hidden paths.
    Spikes {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = DEFAULT_GRAPH_RES)]
        epsilon: f64,
    },
}

fn load(common: &Common) -> Result<ExperimentConfig> {
    let mut cfg = match &common.config {
        Some(p) => ExperimentConfig::from_json_file(p)?,
        None => ExperimentConfig::paper_defaults(),
    };
    if let Some(s) = common.seed {
        cfg.seed = s;
    }
    if let Some(r) = common.replicas {
        cfg.replicas = r;
    }
    if let Some(&g) = common.gamma.first() {
        cfg.gamma = g;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn pool(threads: usize) -> rayon::ThreadPool {
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .expect("thread pool")
}

enum Outcome {
    Ok,
    ValidationFailed,
}

fn run(cli: Cli) -> Result<Outcome> {
    match cli.command {
        Command::Showcase { common, stride } => {
            let cfg = load(&common)?;
            for f in pool(common.threads).install(|| cmd_showcase(&cfg, &common.out, stride))? {
                println!("{}", f.display());
            }
        }
        Command::Sweep {
            common,
            cvalues,
            time,
            geometry_replicas,
        } => {
            let cfg = load(&common)?;
            let gammas = if common.gamma.is_empty() {
                vec![cfg.gamma]
            } else {
                common.gamma.clone()
            };
            let mut spec = SweepSpec::new(gammas, cvalues, cfg.replicas);
            spec.error_time = time;
            spec.geometry_replicas = geometry_replicas;
            let (result, files) = pool(common.threads).install(|| cmd_sweep(&cfg, &spec, &common.out))?;
            for c in &result.cells {
                match (&c.error, &c.failure) {
                    (_, Some(m)) => log::warn!("gamma={} C={} failed: {m}", c.gamma, c.coefficient),
                    (Some(e), None) => log::info!(
                        "gamma={} C={} error={:.4}±{:.4} d_H={:.4}",
                        c.gamma,
                        c.coefficient,
                        e.estimate,
                        e.stderr,
                        c.mean_hausdorff
                    ),
                    (None, None) => {}
                }
            }
            for f in files {
                println!("{}", f.display());
            }
        }
        Command::Validate { common } => {
            let cfg = load(&common)?;
            let report = pool(common.threads).install(|| cmd_validate(&cfg))?;
            report.write(&mut std::io::stdout().lock())?;
            if !report.passed() {
                return Ok(Outcome::ValidationFailed);
            }
        }
        Command::Spikes { common, epsilon } => {
            let cfg = load(&common)?;
            let f = cmd_spikes(&cfg, epsilon, cfg.replicas, &common.out)?;
            println!("{}", f.display());
        }
    }
    Ok(Outcome::Ok)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
    // Usage errors are configuration errors (status 1); status 2 is reserved
    // for failed validation.
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(Outcome::Ok) => ExitCode::SUCCESS,
        Ok(Outcome::ValidationFailed) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
