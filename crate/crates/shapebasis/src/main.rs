//! Command-line driver: tabulates solver-built shape functions, runs
//! randomized two-sided average trials, materializes block families with
//! Monte Carlo checks, and emits witness tables, as CSV or JSON reports.

use clap::{Args, Parser, Subcommand};
use shapebasis::basis::{geometric_angles, geometric_block_config, ShapeFunction};
use shapebasis::blocks::{
    build_family, containment_check, divergence_report, quarter_bound_check, union_area,
};
use shapebasis::maximal::{random_sandwich_trial, sandwich_check};
use shapebasis::orlicz::YoungFunction;
use shapebasis::report::{Cell, Meta, Report};
use shapebasis::shape_law::{
    area_ratio, critical_shape, shape_lower_bound, solve_shape, ShapeLawParams, SOLVER_REL_TOL,
};
use std::collections::HashMap;
use std::f64::consts::FRAC_PI_6;
use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

const DEFAULT_SAMPLES: u64 = 100_000;
const SEED_ENV: &str = "SHAPEBASIS_SEED";

#[derive(Parser)]
#[command(
    name = "shapebasis",
    version,
    about = "Experiments on rectangle differentiation bases with angle-dependent shapes"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Tabulate solver-built shapes over the geometric angle set
    #[command(name = "shape-table")]
    ShapeTable(ShapeTableArgs),
    /// Randomized per-rectangle two-sided average comparison trials
    Lemma1(Lemma1Args),
    /// Block families: geometry checks, union areas and divergence table
    Blocks(BlocksArgs),
    /// Unit-area witness table with far-vertex distances
    Witness(WitnessArgs),
}

#[derive(Args)]
struct CommonArgs {
    /// Newline-delimited `key = value` file; explicit flags take precedence
    #[arg(long)]
    config: Option<PathBuf>,
    /// Write the report here instead of standard output
    #[arg(long)]
    out: Option<PathBuf>,
    /// Report format: csv (default) or json
    #[arg(long)]
    format: Option<String>,
    /// Seed for all randomized work (env SHAPEBASIS_SEED, then 0, when absent)
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Args)]
struct ShapeTableArgs {
    #[arg(long)]
    t: Option<f64>,
    #[arg(long)]
    rho0: Option<f64>,
    /// Largest k in the angle set {2^-k : 0 <= k <= K}
    #[arg(long = "K")]
    k_max: Option<usize>,
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Args)]
struct Lemma1Args {
    #[arg(long)]
    t: Option<f64>,
    #[arg(long)]
    rho0: Option<f64>,
    #[arg(long)]
    trials: Option<u64>,
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Args)]
struct BlocksArgs {
    /// Exponent of the Young function t (1 + log_+^alpha t)
    #[arg(long)]
    alpha: Option<f64>,
    /// Per-block count rule: an integer like '4' or a power like 'k^2'
    #[arg(long = "N")]
    count_rule: Option<String>,
    #[arg(long)]
    kmax: Option<usize>,
    #[arg(long)]
    samples: Option<u64>,
    /// Skip all Monte Carlo work and report closed-form columns only
    #[arg(long)]
    geometry_only: bool,
    /// Worker threads for Monte Carlo sampling (results are identical for
    /// any thread count)
    #[arg(long)]
    threads: Option<usize>,
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Args)]
struct WitnessArgs {
    #[arg(long)]
    t: Option<f64>,
    #[arg(long)]
    rho0: Option<f64>,
    /// Constant shape for every angle (alternative to --t/--rho0)
    #[arg(long)]
    sigma: Option<f64>,
    #[arg(long = "K")]
    k_max: Option<usize>,
    #[command(flatten)]
    common: CommonArgs,
}

/// Usage or configuration problem; maps to exit code 2.
struct UsageError(String);

impl From<shapebasis::Error> for UsageError {
    fn from(e: shapebasis::Error) -> Self {
        UsageError(e.to_string())
    }
}

type CmdResult = Result<bool, UsageError>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => e.exit(),
    };
    let outcome = match cli.command {
        Command::ShapeTable(args) => cmd_shape_table(args),
        Command::Lemma1(args) => cmd_lemma1(args),
        Command::Blocks(args) => cmd_blocks(args),
        Command::Witness(args) => cmd_witness(args),
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(UsageError(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

// ---------------------------------------------------------------------------
// Config-file handling

struct Settings {
    file: HashMap<String, String>,
}

impl Settings {
    fn load(path: &Option<PathBuf>) -> Result<Self, UsageError> {
        let mut file = HashMap::new();
        if let Some(path) = path {
            let contents = std::fs::read_to_string(path)
                .map_err(|e| UsageError(format!("cannot read {}: {e}", path.display())))?;
            for (lineno, line) in contents.lines().enumerate() {
                let line = line.trim();
                if line.is_empty() || line.starts_with('#') {
                    continue;
                }
                let (key, value) = line.split_once('=').ok_or_else(|| {
                    UsageError(format!(
                        "{}:{}: expected `key = value`",
                        path.display(),
                        lineno + 1
                    ))
                })?;
                file.insert(key.trim().to_string(), value.trim().to_string());
            }
        }
        Ok(Self { file })
    }

    /// Explicit flag, then config file, then `None`.
    fn get<T: FromStr>(&self, flag: Option<T>, key: &str) -> Result<Option<T>, UsageError>
    where
        T::Err: std::fmt::Display,
    {
        if flag.is_some() {
            return Ok(flag);
        }
        match self.file.get(key) {
            Some(raw) => raw
                .parse::<T>()
                .map(Some)
                .map_err(|e| UsageError(format!("config key `{key}`: {e}"))),
            None => Ok(None),
        }
    }

    fn require<T: FromStr>(&self, flag: Option<T>, key: &str) -> Result<T, UsageError>
    where
        T::Err: std::fmt::Display,
    {
        self.get(flag, key)?
            .ok_or_else(|| UsageError(format!("missing required parameter `{key}`")))
    }

    fn seed(&self, flag: Option<u64>) -> Result<u64, UsageError> {
        if let Some(seed) = self.get(flag, "seed")? {
            return Ok(seed);
        }
        match std::env::var(SEED_ENV) {
            Ok(raw) => raw
                .parse::<u64>()
                .map_err(|e| UsageError(format!("{SEED_ENV}: {e}"))),
            Err(_) => Ok(0),
        }
    }
}

enum Format {
    Csv,
    Json,
}

fn parse_format(settings: &Settings, flag: Option<String>) -> Result<Format, UsageError> {
    match settings.get(flag, "format")?.as_deref() {
        None | Some("csv") => Ok(Format::Csv),
        Some("json") => Ok(Format::Json),
        Some(other) => Err(UsageError(format!(
            "unknown format `{other}` (expected csv or json)"
        ))),
    }
}

fn emit(report: &Report, format: &Format, out: Option<PathBuf>) -> Result<(), UsageError> {
    let rendered = match format {
        Format::Csv => report.to_csv(),
        Format::Json => report.to_json(),
    };
    match out {
        Some(path) => std::fs::write(&path, rendered)
            .map_err(|e| UsageError(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{rendered}");
            Ok(())
        }
    }
}

fn meta(seed: u64, samples: u64) -> Meta {
    Meta {
        seed,
        samples,
        version: env!("CARGO_PKG_VERSION").to_string(),
    }
}

/// Geometric angles capped at pi/6, the domain of the shape law.
fn capped_angles(k_max: usize) -> Vec<f64> {
    geometric_angles(k_max)
        .into_iter()
        .map(|a| {
            if a > FRAC_PI_6 {
                eprintln!("warning: angle {a} exceeds pi/6; capped");
                FRAC_PI_6
            } else {
                a
            }
        })
        .collect()
}

// ---------------------------------------------------------------------------
// Commands

fn cmd_shape_table(args: ShapeTableArgs) -> CmdResult {
    let settings = Settings::load(&args.common.config)?;
    let t = settings.require(args.t, "t")?;
    let rho0 = settings.require(args.rho0, "rho0")?;
    let k_max = settings.require(args.k_max, "K")?;
    let seed = settings.seed(args.common.seed)?;
    let format = parse_format(&settings, args.common.format)?;
    let out = settings.get(args.common.out, "out")?;
    let params = ShapeLawParams::new(t, rho0)?;

    let mut report = Report::new(
        vec![
            "theta",
            "sigma",
            "sigma_star",
            "residual",
            "lower_bound",
            "theta_times_sigma",
        ],
        meta(seed, DEFAULT_SAMPLES),
    );
    let mut pass = true;
    let mut prev_sigma = 0.0;
    for (i, theta) in capped_angles(k_max).into_iter().enumerate() {
        let sigma = solve_shape(&params, theta)?;
        let residual = (area_ratio(t, theta, sigma)? - rho0).abs();
        if residual > SOLVER_REL_TOL * rho0 {
            pass = false;
        }
        if i > 0 && sigma <= prev_sigma {
            pass = false;
        }
        prev_sigma = sigma;
        report.push(vec![
            Cell::Float(theta),
            Cell::Float(sigma),
            Cell::Float(critical_shape(t, theta)),
            Cell::Float(residual),
            Cell::Float(shape_lower_bound(t, rho0, theta)),
            Cell::Float(theta * sigma),
        ]);
    }
    emit(&report, &format, out)?;
    Ok(pass)
}

fn cmd_lemma1(args: Lemma1Args) -> CmdResult {
    let settings = Settings::load(&args.common.config)?;
    let t = settings.require(args.t, "t")?;
    let rho0 = settings.require(args.rho0, "rho0")?;
    let trials: u64 = settings.require(args.trials, "trials")?;
    if trials == 0 {
        return Err(UsageError("trials must be at least 1".into()));
    }
    let seed = settings.seed(args.common.seed)?;
    let format = parse_format(&settings, args.common.format)?;
    let out = settings.get(args.common.out, "out")?;
    let params = ShapeLawParams::new(t, rho0)?;

    let mut report = Report::new(
        vec!["trial", "theta", "sigma", "inscribed_ok", "bounding_ok"],
        meta(seed, trials),
    );
    for index in 0..trials {
        let (rect, f) = random_sandwich_trial(&params, seed, index)?;
        let check = sandwich_check(&rect, t, rho0, &f)?;
        if !check.both() {
            report.push(vec![
                Cell::UInt(index),
                Cell::Float(rect.theta()),
                Cell::Float(rect.shape()),
                Cell::Bool(check.inscribed_ok),
                Cell::Bool(check.bounding_ok),
            ]);
        }
    }
    let pass = report.rows.is_empty();
    emit(&report, &format, out)?;
    Ok(pass)
}

enum CountRule {
    Constant(usize),
    Power(f64),
}

impl FromStr for CountRule {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        if let Ok(c) = s.parse::<usize>() {
            if c >= 1 {
                return Ok(CountRule::Constant(c));
            }
            return Err("constant count must be at least 1".into());
        }
        if let Some(rest) = s.strip_prefix("k^") {
            if let Ok(p) = rest.parse::<f64>() {
                if p > 0.0 && p.is_finite() {
                    return Ok(CountRule::Power(p));
                }
            }
        }
        Err(format!(
            "invalid count rule `{s}`: use an integer like `4` or a power like `k^2`"
        ))
    }
}

impl CountRule {
    /// Counts for blocks 0..=k_max; the power rule uses ceil(k^p) with 1 at k=0.
    fn counts(&self, k_max: usize) -> Vec<usize> {
        (0..=k_max)
            .map(|k| match self {
                CountRule::Constant(c) => *c,
                CountRule::Power(p) => {
                    if k == 0 {
                        1
                    } else {
                        (k as f64).powf(*p).ceil() as usize
                    }
                }
            })
            .collect()
    }
}

fn cmd_blocks(args: BlocksArgs) -> CmdResult {
    let settings = Settings::load(&args.common.config)?;
    let alpha = settings.require(args.alpha, "alpha")?;
    let rule: CountRule = settings
        .require::<String>(args.count_rule, "N")?
        .parse()
        .map_err(UsageError)?;
    let k_max = settings.require(args.kmax, "kmax")?;
    let samples = settings
        .get(args.samples, "samples")?
        .unwrap_or(DEFAULT_SAMPLES);
    let geometry_only = args.geometry_only
        || settings
            .get::<bool>(None, "geometry-only")?
            .unwrap_or(false);
    let seed = settings.seed(args.common.seed)?;
    let format = parse_format(&settings, args.common.format)?;
    let out = settings.get(args.common.out, "out")?;
    if let Some(threads) = settings.get(args.threads, "threads")? {
        // Ignored when a global pool already exists; sampling totals do not
        // depend on the thread count.
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global();
    }

    let phi = YoungFunction::llogl(alpha)?;
    let cfg = geometric_block_config(&rule.counts(k_max))?;
    let divergence = divergence_report(&cfg, &phi, k_max)?;

    let mut report = Report::new(
        vec![
            "k",
            "N_k",
            "sigma_k",
            "angle_ok",
            "union_ratio",
            "half_ok",
            "quarter_ok",
            "necessity_ratio",
        ],
        meta(seed, samples),
    );
    let mut pass = true;
    for row in &divergence.rows {
        let fam = build_family(&cfg, row.k)?;
        let contained = containment_check(&fam);
        if !contained {
            pass = false;
        }
        let (union_ratio, half_ok, quarter_ok) = if geometry_only {
            (Cell::Null, Cell::Null, Cell::Null)
        } else {
            let block_seed = seed.wrapping_add(row.k as u64);
            let est = union_area(&fam, samples, block_seed);
            let total = fam.rects.len() as f64 * 4.0 * fam.sigma;
            let ratio = est.value / total;
            let half_ok = ratio >= 0.5 - est.half_width95 / total;
            let quarter = if contained {
                let ok = quarter_bound_check(&fam, samples.min(10_000), block_seed)?;
                if !ok {
                    pass = false;
                }
                Cell::Bool(ok)
            } else {
                Cell::Null
            };
            (Cell::Float(ratio), Cell::Bool(half_ok), quarter)
        };
        report.push(vec![
            Cell::UInt(row.k as u64),
            Cell::UInt(row.count as u64),
            Cell::Float(row.sigma),
            Cell::Bool(row.angle_ok),
            union_ratio,
            half_ok,
            quarter_ok,
            Cell::Float(row.ratio),
        ]);
    }
    emit(&report, &format, out)?;
    Ok(pass)
}

fn cmd_witness(args: WitnessArgs) -> CmdResult {
    let settings = Settings::load(&args.common.config)?;
    let k_max = settings.require(args.k_max, "K")?;
    let seed = settings.seed(args.common.seed)?;
    let format = parse_format(&settings, args.common.format)?;
    let out = settings.get(args.common.out, "out")?;
    let sigma_const: Option<f64> = settings.get(args.sigma, "sigma")?;
    let t: Option<f64> = settings.get(args.t, "t")?;
    let rho0: Option<f64> = settings.get(args.rho0, "rho0")?;

    let angles = capped_angles(k_max);
    let shape_fn = match (sigma_const, t, rho0) {
        (Some(sigma), None, None) => {
            ShapeFunction::explicit(angles.iter().map(|&a| (a, sigma)).collect())?
        }
        (None, Some(t), Some(rho0)) => {
            let params = ShapeLawParams::new(t, rho0)?;
            ShapeFunction::from_solver(&angles, &params)?
        }
        _ => {
            return Err(UsageError(
                "provide either --sigma, or both --t and --rho0".into(),
            ))
        }
    };
    if shape_fn.entries().is_empty() {
        return Err(UsageError("empty witness table".into()));
    }

    let mut report = Report::new(
        vec!["theta", "sigma", "far_distance"],
        meta(seed, DEFAULT_SAMPLES),
    );
    let mut pass = true;
    let mut prev_far: Option<f64> = None;
    for &(theta, sigma) in shape_fn.entries() {
        let (_, far) = shapebasis::basis::unboundedness_witness(theta, sigma)?;
        if let Some(prev) = prev_far {
            if far <= prev {
                pass = false;
            }
        }
        prev_far = Some(far);
        report.push(vec![
            Cell::Float(theta),
            Cell::Float(sigma),
            Cell::Float(far),
        ]);
    }
    emit(&report, &format, out)?;
    Ok(pass)
}
