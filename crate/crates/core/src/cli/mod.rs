//! Command-line frontend: histograms, limit densities, constants, arithmetic
//! sums, ortholength spectra and the acceptance suite, as CSV or JSON.

mod output;

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

pub use output::{fmt_float, to_json};

use crate::arith::{
    asymptote_constant, c1_constant, c_ab, c_abk_product, mertens_congruence_sums_at,
    mirsky_main_term, mirsky_sums_at, ArithmeticConstant, Sieve, DEFAULT_PRIME_CUTOFF,
};
use crate::error::{invalid, Error, Result};
use crate::family::{ScalingKind, ScalingSpec, WeightMode, WeightedLogFamily};
use crate::limits::{ConstantCache, LimitDensity};
use crate::measures::{build_pair_correlation, Histogram};
use crate::modular::{ortholength_spectrum, ortholength_identity_check, tangency_census};
use crate::verify::acceptance::{Context, CRITERIA};

/// Environment variable holding the default prime cutoff.
pub const PRIME_CUTOFF_ENV: &str = "LOGPAIR_PRIME_CUTOFF";

#[derive(Debug, Clone, Parser)]
#[command(name = "logpair", version, about = "Pair correlations of weighted logarithms in arithmetic progressions")]
pub struct RunConfig {
    #[command(subcommand)]
    pub command: Command,
    /// Output format; defaults depend on the command.
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Write to this file instead of standard output.
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Histogram of an empirical pair correlation measure.
    Empirical(EmpiricalArgs),
    /// Bin averages of the limit density on the same grid.
    Limit(LimitArgs),
    /// Euler-product constants with tail bounds.
    Constants(ConstantsArgs),
    /// Σ φ(n)φ(n+k) over a progression against its main term.
    Mirsky(SumArgs),
    /// Σ φ(n) over a progression against its main term.
    Mertens(SumArgs),
    /// Ortholength spectrum, tangency census or the atom-exact identity check.
    Perp(PerpArgs),
    /// Acceptance criteria.
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Args)]
pub struct FamilyArgs {
    #[arg(long, default_value_t = 1)]
    pub a: u64,
    #[arg(long, default_value_t = 1)]
    pub b: u64,
    /// trivial | euler
    #[arg(long, default_value = "trivial")]
    pub weights: WeightMode,
    /// trivial | power:ALPHA | linear | invavg
    #[arg(long, default_value = "trivial")]
    pub scaling: ScalingKind,
}

#[derive(Debug, Clone, Args)]
pub struct GridArgs {
    #[arg(long, default_value_t = 400)]
    pub bins: usize,
    /// Histogram range lo:hi
    #[arg(long, default_value = "-4:4", allow_hyphen_values = true, value_parser = parse_support)]
    pub support: (f64, f64),
}

#[derive(Debug, Clone, Args)]
pub struct EmpiricalArgs {
    #[arg(long)]
    pub n: u64,
    #[command(flatten)]
    pub family: FamilyArgs,
    #[command(flatten)]
    pub grid: GridArgs,
}

#[derive(Debug, Clone, Args)]
pub struct LimitArgs {
    #[command(flatten)]
    pub family: FamilyArgs,
    #[command(flatten)]
    pub grid: GridArgs,
    #[arg(long, env = PRIME_CUTOFF_ENV, default_value_t = DEFAULT_PRIME_CUTOFF)]
    pub prime_cutoff: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ConstantChoice {
    /// c_{a,b}, or c_{a,b,k} when --k is given.
    Auto,
    Mertens,
    Mirsky,
    Asymptote,
    C1,
}

#[derive(Debug, Clone, Args)]
pub struct ConstantsArgs {
    #[arg(long, default_value_t = 1)]
    pub a: u64,
    #[arg(long, default_value_t = 1)]
    pub b: u64,
    #[arg(long)]
    pub k: Option<u64>,
    #[arg(long, value_enum, default_value_t = ConstantChoice::Auto)]
    pub kind: ConstantChoice,
    #[arg(long, env = PRIME_CUTOFF_ENV, default_value_t = DEFAULT_PRIME_CUTOFF)]
    pub prime_cutoff: u64,
}

#[derive(Debug, Clone, Args)]
pub struct SumArgs {
    #[arg(long, default_value_t = 1)]
    pub a: u64,
    #[arg(long, default_value_t = 1)]
    pub b: u64,
    /// Shift (Mirsky only).
    #[arg(long, default_value_t = 1)]
    pub k: u64,
    /// Comma-separated abscissae.
    #[arg(long, value_delimiter = ',', default_value = "1000,10000,100000,1000000")]
    pub x: Vec<f64>,
    #[arg(long, env = PRIME_CUTOFF_ENV, default_value_t = DEFAULT_PRIME_CUTOFF)]
    pub prime_cutoff: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PerpMode {
    Spectrum,
    Census,
    Check,
}

#[derive(Debug, Clone, Args)]
pub struct PerpArgs {
    #[arg(long, default_value_t = 1)]
    pub b: u64,
    /// Horizon N (largest q).
    #[arg(long)]
    pub n: u64,
    #[arg(long, value_enum, default_value_t = PerpMode::Spectrum)]
    pub mode: PerpMode,
    /// Scaling for the identity check.
    #[arg(long, default_value = "trivial")]
    pub scaling: ScalingKind,
}

#[derive(Debug, Clone, Args)]
pub struct VerifyArgs {
    /// `all` or a comma-separated list of criterion numbers.
    #[arg(long, default_value = "all")]
    pub suite: String,
}

fn parse_support(s: &str) -> std::result::Result<(f64, f64), String> {
    let (lo, hi) = s.split_once(':').ok_or("expected lo:hi")?;
    let lo: f64 = lo.trim().parse().map_err(|e| format!("bad lower bound: {e}"))?;
    let hi: f64 = hi.trim().parse().map_err(|e| format!("bad upper bound: {e}"))?;
    if !(lo.is_finite() && hi.is_finite() && lo < hi) {
        return Err("support needs finite lo < hi".into());
    }
    Ok((lo, hi))
}

/// Artifact produced by a command, plus whether it counts as success.
pub struct Outcome {
    pub text: String,
    pub success: bool,
}

/// Exit status for a library error.
pub fn exit_code(e: &Error) -> u8 {
    match e {
        Error::InvalidArgument(_) | Error::Config(_) => 2,
        Error::Capacity { .. } | Error::EmptyMeasure => 1,
    }
}

/// Parses `args`, runs the command and writes the artifact. Returns the exit status.
pub fn run_from<I, T>(args: I) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let config = match RunConfig::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return e.exit_code() as u8;
        }
    };
    let outcome = match run(&config) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return exit_code(&e);
        }
    };
    let written = match &config.output {
        Some(path) => std::fs::write(path, &outcome.text),
        None => std::io::stdout().lock().write_all(outcome.text.as_bytes()),
    };
    if let Err(e) = written {
        eprintln!("error: cannot write output: {e}");
        return 1;
    }
    u8::from(!outcome.success)
}

pub fn main_exit() -> ExitCode {
    ExitCode::from(run_from(std::env::args_os()))
}

/// Runs a parsed configuration.
pub fn run(config: &RunConfig) -> Result<Outcome> {
    let fmt = config.format;
    let text = match &config.command {
        Command::Empirical(a) => empirical(a, fmt.unwrap_or(Format::Csv))?,
        Command::Limit(a) => limit(a, fmt.unwrap_or(Format::Csv))?,
        Command::Constants(a) => constants(a, fmt.unwrap_or(Format::Json))?,
        Command::Mirsky(a) => sums(a, true, fmt.unwrap_or(Format::Csv))?,
        Command::Mertens(a) => sums(a, false, fmt.unwrap_or(Format::Csv))?,
        Command::Perp(a) => perp(a, fmt)?,
        Command::Verify(a) => return verify(a, fmt),
    };
    Ok(Outcome { text, success: true })
}

fn check_positive(name: &str, v: u64) -> Result<()> {
    if v == 0 {
        return invalid(format!("{name} must be positive"));
    }
    Ok(())
}

fn validate_family(f: &FamilyArgs) -> Result<WeightedLogFamily> {
    check_positive("a", f.a)?;
    check_positive("b", f.b)?;
    WeightedLogFamily::new(f.a, f.b, f.weights)
}

fn validate_grid(g: &GridArgs) -> Result<()> {
    if g.bins == 0 || g.bins > 10_000_000 {
        return invalid("bins must lie in 1..=10^7");
    }
    Ok(())
}

/// Limit density for a family and scaling kind.
pub fn limit_for(
    family: &WeightedLogFamily,
    kind: &ScalingKind,
    s_max: f64,
    cache: Option<&ConstantCache>,
) -> Result<LimitDensity> {
    let b = family.b();
    let class = match kind {
        ScalingKind::Trivial => 0,
        ScalingKind::Power(alpha) if *alpha < 1.0 => 1,
        ScalingKind::InverseAverageGap => 1,
        ScalingKind::Linear => 2,
        ScalingKind::Power(alpha) if *alpha == 1.0 => 2,
        ScalingKind::Power(_) => 3,
        ScalingKind::Custom(_) => return Err(Error::Config("custom scalings have no closed-form limit".into())),
    };
    match (family.weights(), class) {
        (WeightMode::Trivial, 0) => Ok(LimitDensity::UnscaledTrivial),
        (WeightMode::Trivial, 1) => Ok(LimitDensity::SublinearTrivial { b }),
        (WeightMode::Trivial, 2) => LimitDensity::linear_trivial(b, 1.0),
        (WeightMode::Trivial, _) => Ok(LimitDensity::SuperlinearZero),
        (WeightMode::Euler, 0) => Ok(LimitDensity::UnscaledEuler),
        (WeightMode::Euler, 2) => match cache {
            Some(c) => LimitDensity::linear_euler(family.a(), b, s_max, c),
            None => Err(Error::Config("the Euler linear limit needs constants".into())),
        },
        (WeightMode::Euler, _) => Err(Error::Config(
            "Euler weights have a closed-form limit only for trivial and linear scaling".into(),
        )),
    }
}

#[derive(Serialize)]
struct BinRow {
    bin_lo: f64,
    bin_hi: f64,
    density: f64,
}

fn grid_csv(rows: &[BinRow]) -> String {
    let mut s = String::from("bin_lo,bin_hi,density\n");
    for r in rows {
        let _ = writeln!(s, "{},{},{}", fmt_float(r.bin_lo), fmt_float(r.bin_hi), fmt_float(r.density));
    }
    s
}

#[derive(Serialize)]
struct EmpiricalReport<'a> {
    n: u64,
    a: u64,
    b: u64,
    weights: String,
    scaling: String,
    psi: f64,
    normalization: f64,
    total_mass: u128,
    underflow: u128,
    overflow: u128,
    bins: &'a [BinRow],
}

fn empirical(args: &EmpiricalArgs, fmt: Format) -> Result<String> {
    let family = validate_family(&args.family)?;
    validate_grid(&args.grid)?;
    check_positive("n", args.n)?;
    let spec = ScalingSpec::for_weights(family.weights(), args.family.scaling.clone())?;
    let sieve = match family.weights() {
        WeightMode::Euler => Some(Sieve::new(args.n.max(2))?),
        WeightMode::Trivial => None,
    };
    let measure = build_pair_correlation(&family, args.n, &spec, sieve.as_ref())?;
    let norm = spec.normalizer_value(args.n, measure.total_mass() as f64)?;
    let (lo, hi) = args.grid.support;
    let hist = measure.bin(lo, hi, args.grid.bins, norm)?;
    let rows: Vec<BinRow> = (0..hist.bins)
        .map(|i| {
            let (bin_lo, bin_hi) = hist.edges(i);
            BinRow { bin_lo, bin_hi, density: hist.density(i) }
        })
        .collect();
    Ok(match fmt {
        Format::Csv => grid_csv(&rows),
        Format::Json => to_json(&EmpiricalReport {
            n: args.n,
            a: family.a(),
            b: family.b(),
            weights: family.weights().to_string(),
            scaling: spec.kind.to_string(),
            psi: spec.psi(args.n)?,
            normalization: norm,
            total_mass: measure.total_mass(),
            underflow: hist.underflow,
            overflow: hist.overflow,
            bins: &rows,
        }),
    })
}

#[derive(Serialize)]
struct LimitReport<'a> {
    regime: &'static str,
    a: u64,
    b: u64,
    bins: &'a [BinRow],
}

fn limit(args: &LimitArgs, fmt: Format) -> Result<String> {
    let family = validate_family(&args.family)?;
    validate_grid(&args.grid)?;
    let (lo, hi) = args.grid.support;
    let s_max = lo.abs().max(hi.abs());
    let needs_constants = family.weights() == WeightMode::Euler
        && !matches!(args.family.scaling, ScalingKind::Trivial);
    let cache = if needs_constants {
        let sieve = Sieve::new(args.prime_cutoff.max(2))?;
        Some(ConstantCache::new(&sieve, args.prime_cutoff)?)
    } else {
        None
    };
    let density = limit_for(&family, &args.family.scaling, s_max, cache.as_ref())?;
    let grid = Histogram::new(lo, hi, args.grid.bins, 1.0)?;
    let rows: Vec<BinRow> = (0..grid.bins)
        .map(|i| {
            let (bin_lo, bin_hi) = grid.edges(i);
            BinRow { bin_lo, bin_hi, density: density.bin_average(bin_lo, bin_hi) }
        })
        .collect();
    Ok(match fmt {
        Format::Csv => grid_csv(&rows),
        Format::Json => to_json(&LimitReport {
            regime: density.tag(),
            a: family.a(),
            b: family.b(),
            bins: &rows,
        }),
    })
}

#[derive(Serialize)]
struct ConstantReport {
    kind: String,
    a: u64,
    b: u64,
    k: Option<u64>,
    value: f64,
    tail_bound: f64,
    cutoff: u64,
}

impl From<ArithmeticConstant> for ConstantReport {
    fn from(c: ArithmeticConstant) -> Self {
        let kind = serde_json::to_value(c.kind)
            .ok()
            .and_then(|v| v.as_str().map(str::to_owned))
            .unwrap_or_default();
        ConstantReport {
            kind,
            a: c.a,
            b: c.b,
            k: c.k,
            value: c.value,
            tail_bound: c.tail_bound,
            cutoff: c.prime_cutoff,
        }
    }
}

fn check_cutoff(p: u64) -> Result<()> {
    if !(2..=crate::arith::MAX_SIEVE_LIMIT).contains(&p) {
        return invalid(format!("prime cutoff must lie in [2, {}]", crate::arith::MAX_SIEVE_LIMIT));
    }
    Ok(())
}

fn constants(args: &ConstantsArgs, fmt: Format) -> Result<String> {
    check_cutoff(args.prime_cutoff)?;
    let kind = match (args.kind, args.k) {
        (ConstantChoice::Auto, Some(_)) => ConstantChoice::Mirsky,
        (ConstantChoice::Auto, None) => ConstantChoice::Mertens,
        (c, _) => c,
    };
    if matches!(kind, ConstantChoice::Mertens | ConstantChoice::Mirsky) {
        check_positive("a", args.a)?;
        check_positive("b", args.b)?;
    }
    let c = match kind {
        ConstantChoice::Mertens => c_ab(args.a, args.b, args.prime_cutoff)?,
        ConstantChoice::Mirsky => {
            let sieve = Sieve::new(args.prime_cutoff)?;
            c_abk_product(&sieve, args.a, args.b, args.k.unwrap_or(0), args.prime_cutoff)?
        }
        ConstantChoice::Asymptote => asymptote_constant(&Sieve::new(args.prime_cutoff)?, args.prime_cutoff)?,
        ConstantChoice::C1 => c1_constant(&Sieve::new(args.prime_cutoff)?, args.prime_cutoff)?,
        ConstantChoice::Auto => unreachable!("resolved above"),
    };
    let report = ConstantReport::from(c);
    Ok(match fmt {
        Format::Json => to_json(&report),
        Format::Csv => {
            let k = report.k.map(|k| k.to_string()).unwrap_or_default();
            format!(
                "kind,a,b,k,cutoff,value,tail_bound\n{},{},{},{},{},{},{}\n",
                report.kind,
                report.a,
                report.b,
                k,
                report.cutoff,
                fmt_float(report.value),
                fmt_float(report.tail_bound)
            )
        }
    })
}

#[derive(Serialize)]
struct SumRow {
    x: f64,
    sum: u128,
    main_term: f64,
    normalized_residual: f64,
}

#[derive(Serialize)]
struct SumReport<'a> {
    sum: &'static str,
    a: u64,
    b: u64,
    k: Option<u64>,
    constant: f64,
    tail_bound: f64,
    cutoff: u64,
    rows: &'a [SumRow],
}

fn sums(args: &SumArgs, mirsky: bool, fmt: Format) -> Result<String> {
    check_positive("a", args.a)?;
    check_positive("b", args.b)?;
    check_cutoff(args.prime_cutoff)?;
    if args.x.is_empty() || args.x.iter().any(|x| !(x.is_finite() && *x >= 1.0)) {
        return invalid("x values must be finite and at least 1");
    }
    let x_max = args.x.iter().cloned().fold(1.0, f64::max);
    if x_max > crate::arith::MIRSKY_MAX_X as f64 {
        return Err(Error::Capacity {
            what: "x",
            required: x_max as u128,
            limit: crate::arith::MIRSKY_MAX_X as u128,
        });
    }
    let k = if mirsky { args.k } else { 0 };
    let sieve = Sieve::new((x_max as u64 + k).max(args.prime_cutoff))?;
    let pi2 = std::f64::consts::PI.powi(2);
    let (c, values) = if mirsky {
        let c = c_abk_product(&sieve, args.a, args.b, k, args.prime_cutoff)?;
        (c, mirsky_sums_at(&sieve, &args.x, args.a, args.b, k)?)
    } else {
        let c = c_ab(args.a, args.b, args.prime_cutoff)?;
        (c, mertens_congruence_sums_at(&sieve, &args.x, args.a, args.b)?)
    };
    let rows: Vec<SumRow> = args
        .x
        .iter()
        .zip(values)
        .map(|(&x, s)| {
            let (main, env) = if mirsky {
                let kf = k as f64;
                (
                    mirsky_main_term(c.value, x, k),
                    x * (x + kf) * (2.0 * x).ln() * (2.0 * x + kf).ln(),
                )
            } else {
                (3.0 * c.value / pi2 * x * x, x * (2.0 * x).ln())
            };
            SumRow {
                x,
                sum: s,
                main_term: main,
                normalized_residual: (s as f64 - main).abs() / env,
            }
        })
        .collect();
    Ok(match fmt {
        Format::Csv => {
            let mut s = String::from("x,sum,main_term,normalized_residual\n");
            for r in &rows {
                let _ = writeln!(
                    s,
                    "{},{},{},{}",
                    fmt_float(r.x),
                    r.sum,
                    fmt_float(r.main_term),
                    fmt_float(r.normalized_residual)
                );
            }
            s
        }
        Format::Json => to_json(&SumReport {
            sum: if mirsky { "mirsky" } else { "mertens" },
            a: args.a,
            b: args.b,
            k: mirsky.then_some(k),
            constant: c.value,
            tail_bound: c.tail_bound,
            cutoff: c.prime_cutoff,
            rows: &rows,
        }),
    })
}

fn perp(args: &PerpArgs, fmt: Option<Format>) -> Result<String> {
    check_positive("b", args.b)?;
    match args.mode {
        PerpMode::Spectrum => {
            let sieve = Sieve::new(args.n.max(2))?;
            let sp = ortholength_spectrum(&sieve, args.b, args.n)?;
            Ok(match fmt.unwrap_or(Format::Csv) {
                Format::Json => to_json(&sp),
                Format::Csv => {
                    let mut s = String::from("q,length,multiplicity\n");
                    for e in &sp.entries {
                        let _ = writeln!(s, "{},{},{}", e.q, fmt_float(e.length), e.multiplicity);
                    }
                    s
                }
            })
        }
        PerpMode::Census => {
            if args.n > 100_000 {
                return Err(Error::Capacity { what: "census Q", required: args.n as u128, limit: 100_000 });
            }
            let points = tangency_census(args.b, args.n)?;
            Ok(match fmt.unwrap_or(Format::Csv) {
                Format::Json => to_json(&points),
                Format::Csv => {
                    let mut s = String::from("p,q,radius\n");
                    for t in &points {
                        let _ = writeln!(s, "{},{},{}", t.p, t.q, fmt_float(t.radius));
                    }
                    s
                }
            })
        }
        PerpMode::Check => {
            let sieve = Sieve::new(args.n.max(2))?;
            let spec = ScalingSpec::with_default_normalizer(args.scaling.clone())?;
            let report = ortholength_identity_check(&sieve, args.b, args.n, &spec)?;
            Ok(match fmt.unwrap_or(Format::Json) {
                Format::Json => to_json(&report),
                Format::Csv => format!(
                    "b,n,equal,atoms_compared,excluded_degenerate,max_position_gap\n{},{},{},{},{},{}\n",
                    report.b,
                    report.horizon,
                    report.equal,
                    report.atoms_compared,
                    report.excluded_degenerate,
                    fmt_float(report.max_position_gap)
                ),
            })
        }
    }
}

fn parse_suite(suite: &str) -> Result<Vec<u32>> {
    if suite.trim() == "all" {
        return Ok((1..=CRITERIA).collect());
    }
    suite
        .split(',')
        .map(|t| match t.trim().parse::<u32>() {
            Ok(id) if (1..=CRITERIA).contains(&id) => Ok(id),
            _ => invalid(format!("unknown criterion {t:?}; use all or 1..={CRITERIA}")),
        })
        .collect()
}

fn verify(args: &VerifyArgs, fmt: Option<Format>) -> Result<Outcome> {
    let ids = parse_suite(&args.suite)?;
    let ctx = Context::new()?;
    let outcomes: Vec<_> = ids.iter().map(|&id| ctx.run(id)).collect();
    let success = outcomes.iter().all(|o| o.passed);
    let text = match fmt {
        None => {
            let mut s = String::new();
            for o in &outcomes {
                let _ = writeln!(s, "{}", o.line());
            }
            s
        }
        Some(Format::Json) => to_json(&outcomes),
        Some(Format::Csv) => {
            let mut s = String::from("id,passed,title,detail\n");
            for o in &outcomes {
                let _ = writeln!(s, "{},{},\"{}\",\"{}\"", o.id, o.passed, o.title, o.detail.replace('"', "'"));
            }
            s
        }
    };
    Ok(Outcome { text, success })
}
