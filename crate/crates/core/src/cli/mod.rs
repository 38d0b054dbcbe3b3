//! Command-line front end. Exit codes: 0 success, 1 verification failure or
//! other error, 2 invalid input (tableau or config), 3 no admissible initial
//! time, 4 regularity violation.

pub mod config;
pub mod json;
pub mod plot;
pub mod verify;

use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use thiserror::Error;

use crate::algebra::format_rational;
use crate::curve::curve_svg;
use crate::divisor::{CurveDivisor, DivisorAnalysis, DivisorError, T0Options};
use crate::le::{boundary_measurement, build_network, LeTableau};
use crate::soliton::{Precision, SolitonData, SolitonError};
use config::RunConfig;

/// Environment variable naming the default output directory.
pub const OUT_ENV: &str = "POSITROID_KP_OUT";
pub const DEFAULT_SEED: u64 = 20_240_901;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid input: {0}")]
    Input(String),
    #[error("invalid tableau: {0}")]
    Tableau(String),
    #[error("{0}")]
    InitialTime(String),
    #[error("regularity violated: {0}")]
    Regularity(String),
    #[error("verification failed: {0}")]
    Verify(String),
    #[error("{0}")]
    Other(String),
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) | CliError::Tableau(_) => 2,
            CliError::InitialTime(_) => 3,
            CliError::Regularity(_) => 4,
            CliError::Verify(_) | CliError::Other(_) | CliError::Io(_) => 1,
        }
    }
}

impl From<SolitonError> for CliError {
    fn from(e: SolitonError) -> Self {
        match e {
            SolitonError::NotTotallyNonnegative | SolitonError::Regularity { .. } => CliError::Regularity(e.to_string()),
            SolitonError::Phases(_) | SolitonError::Precision(_) => CliError::Input(e.to_string()),
            other => CliError::Other(other.to_string()),
        }
    }
}

impl From<DivisorError> for CliError {
    fn from(e: DivisorError) -> Self {
        match e {
            DivisorError::T0Search { .. } | DivisorError::Degenerate(_) => CliError::InitialTime(e.to_string()),
            DivisorError::Soliton(s) => s.into(),
            other => CliError::Other(other.to_string()),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ExampleName {
    Gr24,
    Gr492,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// RREF boundary measurement and all maximal minors.
    Matrix,
    /// Curve, vacuum/Sato/KP divisors and the oval checks.
    Divisor,
    /// u(x, y) on a grid: CSV plus SVG heatmap.
    Soliton,
    /// Invariant checks on the configured datum, or the full suite.
    Verify {
        /// Run the worked examples plus the randomised suite.
        #[arg(long)]
        suite: bool,
    },
    /// Runs matrix, divisor and soliton on a worked example.
    Example { name: ExampleName },
}

#[derive(Debug, Parser)]
#[command(
    name = "positroid-kp",
    version,
    about = "Le-networks, M-curves and KP divisors for multi-line KP-II solitons"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// JSON run configuration.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Seed for randomised checks.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Output directory (default: $POSITROID_KP_OUT, then ./positroid-kp-out).
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Floating-point precision in bits (53 or 106).
    #[arg(long, global = true)]
    pub precision: Option<u32>,
}

struct Context {
    out: PathBuf,
    seed: u64,
}

fn out_dir(cli: &Cli, cfg: Option<&RunConfig>) -> PathBuf {
    cli.out
        .clone()
        .or_else(|| cfg.and_then(|c| c.out.as_ref().map(|o| c.base_dir.join(o))))
        .or_else(|| std::env::var_os(OUT_ENV).map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("positroid-kp-out"))
}

fn write(dir: &Path, name: &str, contents: &str) -> Result<PathBuf, CliError> {
    std::fs::create_dir_all(dir)?;
    let path = dir.join(name);
    std::fs::write(&path, contents)?;
    Ok(path)
}

fn write_json(dir: &Path, name: &str, v: &Value) -> Result<PathBuf, CliError> {
    write(dir, name, &json::to_pretty(v))
}

fn precision(cfg: &RunConfig) -> Result<Precision, CliError> {
    Precision::from_bits(cfg.precision).map_err(|e| CliError::Input(e.to_string()))
}

pub fn matrix_report(tab: &LeTableau) -> Value {
    let gp = boundary_measurement(&build_network(tab));
    let m = gp.matrix();
    let rows: Vec<Vec<String>> = (0..gp.k()).map(|r| m.row(r).iter().map(format_rational).collect()).collect();
    let minors: Vec<Value> = gp
        .plucker()
        .into_iter()
        .map(|(subset, d)| json!({ "subset": subset, "value": format_rational(&d) }))
        .collect();
    json!({
        "command": "matrix",
        "tableau": tab.to_json(),
        "k": gp.k(),
        "n": gp.n(),
        "pivots": gp.pivots(),
        "matrix": rows,
        "minors": minors,
        "totally_nonnegative": gp.is_totally_nonnegative(),
    })
}

fn divisor_json(d: &CurveDivisor) -> Value {
    let points: Vec<Value> = d
        .points
        .iter()
        .map(|p| {
            json!({
                "component": p.component_label,
                "component_id": p.component,
                "zeta": json::float(p.zeta),
                "oval": p.oval_label,
                "oval_id": p.oval,
            })
        })
        .collect();
    json!({ "kind": d.kind, "degree": d.degree(), "points": points })
}

pub fn divisor_report(tab: &LeTableau, run: &DivisorAnalysis) -> Value {
    let checks = run.checks();
    json::normalize(json!({
        "command": "divisor",
        "tableau": tab.to_json(),
        "kappa": run.sd.kappa(),
        "t0": { "x0": run.choice.t0.x(), "rejected": run.choice.rejected },
        "network_divisor": run.numbers.entries,
        "sato": { "roots": run.choice.sato.roots, "stripped": run.choice.sato.stripped },
        "curve": json::to_value(&run.curve),
        "divisors": {
            "vacuum": divisor_json(&run.divisors.vacuum),
            "sato": divisor_json(&run.divisors.sato),
            "kp": divisor_json(&run.divisors.kp),
        },
        "parity": run.parity,
        "kp_ovals": run.kp_ovals,
        "checks": {
            "parity": checks.parity,
            "kp_ovals": checks.kp_ovals,
            "kp_degree": checks.kp_degree,
            "sato_on_gamma0": checks.sato_on_gamma0,
            "all": checks.all(),
        },
    }))
}

fn cmd_matrix(cfg: &RunConfig, ctx: &Context) -> Result<(), CliError> {
    let tab = cfg.tableau()?;
    let path = write_json(&ctx.out, "matrix.json", &matrix_report(&tab))?;
    println!("wrote {}", path.display());
    Ok(())
}

fn cmd_divisor(cfg: &RunConfig, ctx: &Context) -> Result<(), CliError> {
    let tab = cfg.tableau()?;
    let kappa = cfg.phases(tab.n())?;
    let opts = T0Options {
        precision: precision(cfg)?,
        max_x: cfg.t0_max,
        ..T0Options::default()
    };
    let run = DivisorAnalysis::run(&tab, kappa, &opts, cfg.t0)?;
    let report = divisor_report(&tab, &run);
    let path = write_json(&ctx.out, "divisor.json", &report)?;
    write(&ctx.out, "curve.svg", &curve_svg(&run.curve))?;
    let c = run.checks();
    println!(
        "wrote {} (t0 x = {}, checks {})",
        path.display(),
        run.choice.t0.x(),
        if c.all() { "pass" } else { "FAIL" }
    );
    Ok(())
}

fn cmd_soliton(cfg: &RunConfig, ctx: &Context) -> Result<(), CliError> {
    let tab = cfg.tableau()?;
    let kappa = cfg.phases(tab.n())?;
    let sd = SolitonData::from_tableau(kappa, &tab)?;
    let grid = plot::soliton_grid(&sd, &cfg.grid, precision(cfg)?)?;
    write(&ctx.out, "soliton.csv", &plot::grid_csv(&grid))?;
    let title = format!("KP-II soliton, Gr({},{})", tab.k(), tab.n());
    let path = write(&ctx.out, "soliton.svg", &plot::heatmap_svg(&grid, &title))?;
    let (lo, hi) = grid
        .values
        .iter()
        .flatten()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &v| (a.min(v), b.max(v)));
    let summary = json::normalize(json!({
        "command": "soliton",
        "tableau": tab.to_json(),
        "kappa": sd.kappa(),
        "grid": cfg.grid,
        "u_min": lo,
        "u_max": hi,
    }));
    write_json(&ctx.out, "soliton.json", &summary)?;
    println!("wrote {}", path.display());
    Ok(())
}

fn cmd_verify(cfg: Option<&RunConfig>, suite: bool, ctx: &Context, prec_flag: Option<u32>) -> Result<(), CliError> {
    let report = match cfg {
        Some(cfg) if suite => verify::suite(ctx.seed, cfg.trials, precision(cfg)?),
        Some(cfg) => {
            let tab = cfg.tableau()?;
            let kappa = cfg.phases(tab.n())?;
            verify::single("config", &tab, &kappa, ctx.seed, precision(cfg)?)
        }
        None => {
            let bits = prec_flag.unwrap_or(53);
            let prec = Precision::from_bits(bits).map_err(|e| CliError::Input(e.to_string()))?;
            verify::suite(ctx.seed, 200, prec)
        }
    };
    for c in &report.checks {
        let status = if c.passed { "PASS" } else { "FAIL" };
        if c.detail.is_empty() {
            println!("{status} {}", c.name);
        } else {
            println!("{status} {} ({})", c.name, c.detail);
        }
    }
    write_json(&ctx.out, "verify.json", &json::to_value(&report))?;
    if report.passed {
        Ok(())
    } else {
        let failed = report.checks.iter().filter(|c| !c.passed).count();
        Err(CliError::Verify(format!("{failed} check(s) failed")))
    }
}

fn cmd_example(name: ExampleName, ctx: &Context, prec_flag: Option<u32>) -> Result<(), CliError> {
    let key = match name {
        ExampleName::Gr24 => "gr24",
        ExampleName::Gr492 => "gr492",
    };
    let mut cfg = RunConfig::example(key)?;
    if let Some(bits) = prec_flag {
        cfg.precision = bits;
    }
    cfg.validate()?;
    let ctx = Context {
        out: ctx.out.join(key),
        seed: ctx.seed,
    };
    write_json(&ctx.out, "config.json", &json::to_value(&cfg))?;
    cmd_matrix(&cfg, &ctx)?;
    cmd_divisor(&cfg, &ctx)?;
    cmd_soliton(&cfg, &ctx)
}

pub fn run(cli: &Cli) -> Result<(), CliError> {
    let mut cfg = match &cli.config {
        Some(path) => Some(RunConfig::load(path)?),
        None => None,
    };
    if let (Some(cfg), Some(bits)) = (cfg.as_mut(), cli.precision) {
        cfg.precision = bits;
    }
    if let Some(cfg) = &cfg {
        cfg.validate()?;
    }
    let ctx = Context {
        out: out_dir(cli, cfg.as_ref()),
        seed: cli.seed,
    };
    let need = || {
        cfg.as_ref()
            .ok_or_else(|| CliError::Input("this command needs --config FILE".into()))
    };
    match &cli.command {
        Command::Matrix => cmd_matrix(need()?, &ctx),
        Command::Divisor => cmd_divisor(need()?, &ctx),
        Command::Soliton => cmd_soliton(need()?, &ctx),
        Command::Verify { suite } => cmd_verify(cfg.as_ref(), *suite, &ctx, cli.precision),
        Command::Example { name } => cmd_example(*name, &ctx, cli.precision),
    }
}

/// Entry point for the binary; returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match run(&cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
