//! Command-line driver for the secant-window Gabor laboratory.
//!
//! Every subcommand reads an optional JSON experiment config, merges it
//! with command-line flags (flags win), echoes the fully resolved
//! parameters into the artifact header, and writes one deterministic
//! artifact (CSV or JSON) to `--output`, the config's `output`, or
//! stdout. Runs with equal inputs produce byte-identical artifacts.
//!
//! Exit codes:
//!
//! * `0` — success;
//! * `1` — a numerical assertion failed; the report artifact is still
//!   written and the failure is printed to stderr;
//! * `2` — configuration, schema, or environment error (malformed JSON,
//!   unknown keys, invalid parameters, unusable flags); clap usage
//!   errors also exit 2.

mod commands;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use crate::config::{ExperimentConfig, Thresholds, WindowSpec};

/// Error classes, mapped one-to-one onto exit codes.
#[derive(Debug)]
pub enum CliError {
    /// Configuration/schema/environment problem (exit 2).
    Config(String),
    /// Numerical assertion failure (exit 1); the artifact was written.
    Assertion(String),
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Config(msg) => write!(f, "config error: {msg}"),
            CliError::Assertion(msg) => write!(f, "assertion failed: {msg}"),
        }
    }
}

#[derive(Parser)]
#[command(
    name = "secant-lab",
    version,
    about = "Numerical laboratory for Gabor frames with secant-type windows"
)]
struct Cli {
    /// JSON experiment config file.
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,

    /// Artifact destination (default: the config's `output`, else stdout).
    #[arg(long, global = true, value_name = "FILE")]
    output: Option<PathBuf>,

    /// Cap on worker threads for parallel sweeps (must be ≥ 1).
    #[arg(long, global = true, value_name = "N")]
    jobs: Option<usize>,

    /// RNG seed; precedence: this flag, then SECANT_LAB_SEED, then the
    /// config's `seed`, then 0.
    #[arg(long, global = true, value_name = "N")]
    seed: Option<u64>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Beurling density estimates for the configured point set.
    Density {
        /// Increasing window radii, comma-separated.
        #[arg(long, default_value = "20,40,80")]
        radii: String,
    },
    /// Stability constants C1, C2 of the configured window's generator.
    Stability {
        /// Symbol evaluation grid size (≥ 64).
        #[arg(long, default_value_t = 512)]
        theta_grid: usize,
        /// Correlation quadrature tolerance.
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
    },
    /// Finite-section sampling-bound ladder for V²(g) on Λ + x.
    SamplingBounds {
        /// Sampling shift x.
        #[arg(long, default_value_t = 0.0)]
        x_shift: f64,
        /// Increasing coefficient half-widths, comma-separated.
        #[arg(long, default_value = "20,40,80")]
        ladder: String,
    },
    /// Density-dichotomy experiment over a list of lattice steps.
    FrameDichotomy {
        /// Inline window spec `secant:A,B` or `gaussian:ALPHA,SIGMA`
        /// (overrides the config's window).
        #[arg(long)]
        window: Option<String>,
        /// Lattice steps ρ of Λ = ρZ, comma-separated.
        #[arg(long, default_value = "0.5,0.8,1.25")]
        rho_list: String,
        /// Increasing section ladder, comma-separated.
        #[arg(long, default_value = "20,40,80")]
        ladder: String,
        /// Fiber-shift grid size.
        #[arg(long, default_value_t = 16)]
        x_grid: usize,
        /// Relative jitter amplitude (0 keeps the exact lattice).
        #[arg(long, default_value_t = 0.0)]
        jitter: f64,
    },
    /// Averaged-deviation CIS criterion for V²(g) (secant windows only).
    CisCheck {
        /// Check Λ = Z + x instead of the configured point set.
        #[arg(long)]
        x: Option<f64>,
        /// Largest averaging window length N.
        #[arg(long, default_value_t = 64)]
        n_max: i64,
        /// Largest re-enumeration shift |j|.
        #[arg(long, default_value_t = 3)]
        shift_max: i64,
        /// Restrict N to multiples of the pattern period (periodic only).
        #[arg(long)]
        period_search: bool,
    },
    /// Closed-form monomial norms against quadrature, both Fock pairs.
    FockVerify {
        /// Check z^n for |n| ≤ this bound.
        #[arg(long, default_value_t = 5)]
        n_range: i64,
    },
    /// Kernel-norm asymptotic ratio sweep over log-moduli.
    KernelAsymptotics {
        /// Number of evenly spaced log-moduli.
        #[arg(long, default_value_t = 200)]
        points: usize,
        /// Sweep over log|w| ∈ [−range, range].
        #[arg(long, default_value_t = 10.0)]
        log_range: f64,
    },
    /// Coincidence of the Cauchy-transform and Fock norms on random
    /// elements (secant windows only).
    Coincidence {
        /// Number of random elements.
        #[arg(long, default_value_t = 12)]
        count: usize,
        /// Laurent band half-width for the Fock-side norm.
        #[arg(long, default_value_t = 10)]
        band: i64,
        /// Coefficient support length of each element.
        #[arg(long, default_value_t = 9)]
        support: usize,
    },
    /// Full acceptance suite; one PASS/FAIL line per criterion.
    VerifyAll,
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Density { .. } => "density",
            Command::Stability { .. } => "stability",
            Command::SamplingBounds { .. } => "sampling-bounds",
            Command::FrameDichotomy { .. } => "frame-dichotomy",
            Command::CisCheck { .. } => "cis-check",
            Command::FockVerify { .. } => "fock-verify",
            Command::KernelAsymptotics { .. } => "kernel-asymptotics",
            Command::Coincidence { .. } => "coincidence",
            Command::VerifyAll => "verify-all",
        }
    }

    /// The subcommand's parameters after flag/default resolution, for the
    /// resolved-config echo. The dichotomy window override is reflected
    /// in the resolved window itself, not here.
    fn params(&self) -> serde_json::Value {
        match self {
            Command::Density { radii } => serde_json::json!({ "radii": radii }),
            Command::Stability { theta_grid, tol } => {
                serde_json::json!({ "theta_grid": theta_grid, "tol": tol })
            }
            Command::SamplingBounds { x_shift, ladder } => {
                serde_json::json!({ "x_shift": x_shift, "ladder": ladder })
            }
            Command::FrameDichotomy { rho_list, ladder, x_grid, jitter, .. } => serde_json::json!({
                "rho_list": rho_list, "ladder": ladder, "x_grid": x_grid, "jitter": jitter
            }),
            Command::CisCheck { x, n_max, shift_max, period_search } => serde_json::json!({
                "x": x, "n_max": n_max, "shift_max": shift_max, "period_search": period_search
            }),
            Command::FockVerify { n_range } => serde_json::json!({ "n_range": n_range }),
            Command::KernelAsymptotics { points, log_range } => {
                serde_json::json!({ "points": points, "log_range": log_range })
            }
            Command::Coincidence { count, band, support } => {
                serde_json::json!({ "count": count, "band": band, "support": support })
            }
            Command::VerifyAll => serde_json::json!({}),
        }
    }
}

/// Parses a comma-separated float list, rejecting empty input.
fn parse_f64_list(flag: &str, s: &str) -> Result<Vec<f64>, CliError> {
    s.split(',')
        .map(|p| {
            p.trim()
                .parse::<f64>()
                .map_err(|_| CliError::Config(format!("--{flag}: `{p}` is not a number")))
        })
        .collect()
}

/// Parses a comma-separated integer list, rejecting empty input.
fn parse_i64_list(flag: &str, s: &str) -> Result<Vec<i64>, CliError> {
    s.split(',')
        .map(|p| {
            p.trim()
                .parse::<i64>()
                .map_err(|_| CliError::Config(format!("--{flag}: `{p}` is not an integer")))
        })
        .collect()
}

fn load_config(path: Option<&PathBuf>) -> Result<ExperimentConfig, CliError> {
    let Some(path) = path else {
        return Ok(ExperimentConfig::default());
    };
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text)
        .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
}

fn resolve_seed(flag: Option<u64>, config: &ExperimentConfig) -> Result<u64, CliError> {
    if let Some(s) = flag {
        return Ok(s);
    }
    if let Ok(raw) = std::env::var("SECANT_LAB_SEED") {
        return raw.trim().parse::<u64>().map_err(|_| {
            CliError::Config(format!("SECANT_LAB_SEED=`{raw}` is not a valid seed"))
        });
    }
    Ok(config.seed.unwrap_or(0))
}

fn run(cli: Cli) -> Result<(), CliError> {
    let config = load_config(cli.config.as_ref())?;
    if let Some(jobs) = cli.jobs {
        if jobs == 0 {
            return Err(CliError::Config("--jobs must be at least 1".into()));
        }
        secant_lab::parallel::set_max_jobs(jobs);
    }
    let seed = resolve_seed(cli.seed, &config)?;
    let overrides = config.thresholds;
    let thresholds = overrides
        .map(|o| Thresholds::defaults().apply(&o))
        .unwrap_or_else(Thresholds::defaults);

    let mut window = config.window.clone().unwrap_or_default();
    if let Command::FrameDichotomy { window: Some(inline), .. } = &cli.command {
        window = WindowSpec::parse_flag(inline)?;
    }
    let resolved = config::Resolved {
        subcommand: cli.command.name(),
        window,
        pointset: config.pointset.clone().unwrap_or_default(),
        params: cli.command.params(),
        seed,
        thresholds,
        threshold_overrides: overrides,
    };

    let out = match &cli.command {
        Command::Density { radii } => {
            commands::density(&resolved, &parse_f64_list("radii", radii)?)?
        }
        Command::Stability { theta_grid, tol } => {
            commands::stability(&resolved, *theta_grid, *tol)?
        }
        Command::SamplingBounds { x_shift, ladder } => {
            commands::sampling_bounds(&resolved, *x_shift, &parse_i64_list("ladder", ladder)?)?
        }
        Command::FrameDichotomy { rho_list, ladder, x_grid, jitter, .. } => {
            commands::frame_dichotomy(
                &resolved,
                &parse_f64_list("rho-list", rho_list)?,
                &parse_i64_list("ladder", ladder)?,
                *x_grid,
                *jitter,
            )?
        }
        Command::CisCheck { x, n_max, shift_max, period_search } => {
            commands::cis_check(&resolved, *x, *n_max, *shift_max, *period_search)?
        }
        Command::FockVerify { n_range } => commands::fock_verify(&resolved, *n_range)?,
        Command::KernelAsymptotics { points, log_range } => {
            commands::kernel_asymptotics(&resolved, *points, *log_range)?
        }
        Command::Coincidence { count, band, support } => {
            commands::coincidence(&resolved, *count, *band, *support)?
        }
        Command::VerifyAll => commands::verify_all(&resolved)?,
    };

    let target = cli.output.or_else(|| config.output.as_ref().map(PathBuf::from));
    match target {
        Some(path) => std::fs::write(&path, out.body.as_bytes())
            .map_err(|e| CliError::Config(format!("cannot write {}: {e}", path.display())))?,
        None => print!("{}", out.body),
    }
    match out.assertion {
        Some(msg) => Err(CliError::Assertion(msg)),
        None => Ok(()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{e}");
            match e {
                CliError::Assertion(_) => ExitCode::from(1),
                CliError::Config(_) => ExitCode::from(2),
            }
        }
    }
}
