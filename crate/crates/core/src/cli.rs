//! Command-line front end. The binary only parses arguments and calls [`run`].

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_traits::{One, Signed, Zero};
use serde_json::json;

use crate::cesaro::{cesaro_quadrature, cesaro_residual, cesaro_zero_exact, CesaroResult};
use crate::error::Error;
use crate::pl_function::OmegaFn;
use crate::rational::{self, half, int, Rational};
use crate::semigroup::{
    apply, classify_fixed_point, fixed_point, moving_probe, orbit_zero_closed_form, zero_orbit_profile, FamilyKind,
    FixedPointFamily,
};
use crate::verify::{run_suite, CheckId, InstanceGen};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "semigroup", version, about = "Exact nonexpansive semigroup on piecewise-linear functions")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Apply T(t) to a function and print the result.
    Apply {
        #[arg(long, value_parser = parse_rational, allow_negative_numbers = true)]
        t: Rational,
        #[command(flatten)]
        x: Source,
        /// Write the result here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Time average (1/t) ∫_0^t T(s)x ds and its distance to x.
    Cesaro {
        #[arg(long, value_parser = parse_rational, allow_negative_numbers = true)]
        t: Rational,
        #[command(flatten)]
        x: Source,
        /// Trapezoid step; must divide t. Omit to use the exact route (zero function only).
        #[arg(long, value_parser = parse_rational, allow_negative_numbers = true)]
        h: Option<Rational>,
        /// Write the mean function here (quadrature route only).
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        decimal: Option<usize>,
    },
    /// Run verification suites.
    Verify {
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 200)]
        count: usize,
        /// Restrict to these suites (repeatable).
        #[arg(long, value_parser = parse_check_id)]
        suite: Vec<CheckId>,
        #[arg(long, value_enum, default_value_t = ReportFormat::Text)]
        format: ReportFormat,
    },
    /// Classify a function against the common fixed points, or list family members.
    Fixedpoints {
        #[command(flatten)]
        x: OptSource,
        /// Number of subdivisions of [0, 1/2] when listing.
        #[arg(long, default_value_t = 4)]
        grid: u32,
    },
    /// Emit plot data for a function, the zero-orbit profile, a time average or a residual sweep.
    Plotdata {
        #[command(flatten)]
        target: PlotTarget,
        #[arg(long, value_parser = parse_rational, allow_negative_numbers = true)]
        from: Option<Rational>,
        #[arg(long, value_parser = parse_rational, allow_negative_numbers = true)]
        to: Option<Rational>,
        /// Sweep step for --residual-sweep.
        #[arg(long, value_parser = parse_rational, allow_negative_numbers = true)]
        step: Option<Rational>,
        /// Evenly spaced samples added to the breakpoint rows.
        #[arg(long, default_value_t = 16)]
        samples: u32,
        #[arg(long, value_enum, default_value_t = TableFormat::Csv)]
        format: TableFormat,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        decimal: Option<usize>,
    },
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
pub struct Source {
    /// Builtin: zero, v:<s>, w:<s>, T0:<t>.
    #[arg(long)]
    pub x: Option<String>,
    /// JSON function file.
    #[arg(long)]
    pub x_file: Option<PathBuf>,
}

#[derive(Debug, Args)]
#[group(required = false, multiple = false)]
pub struct OptSource {
    #[arg(long)]
    pub x: Option<String>,
    #[arg(long)]
    pub x_file: Option<PathBuf>,
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
pub struct PlotTarget {
    #[arg(long)]
    pub x: Option<String>,
    #[arg(long)]
    pub x_file: Option<PathBuf>,
    /// The zero-orbit profile f on the real line.
    #[arg(long)]
    pub f: bool,
    /// Exact time average A(t)0 at the given t.
    #[arg(long, value_parser = parse_rational, allow_negative_numbers = true)]
    pub mean: Option<Rational>,
    /// Exact residual ||A(t)0|| over a range of t.
    #[arg(long)]
    pub residual_sweep: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ReportFormat {
    Text,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum TableFormat {
    Csv,
    Json,
}

fn parse_rational(s: &str) -> Result<Rational, String> {
    rational::parse(s).map_err(|e| e.to_string())
}

fn parse_check_id(s: &str) -> Result<CheckId, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

/// Resolves `zero`, `v:<s>`, `w:<s>` and `T0:<t>`.
pub fn builtin(name: &str) -> Result<OmegaFn, Error> {
    if name == "zero" {
        return Ok(OmegaFn::zero());
    }
    let (kind, arg) = name
        .split_once(':')
        .ok_or_else(|| Error::Argument(format!("unknown builtin {name:?}")))?;
    let value = rational::parse(arg)?;
    match kind {
        "v" => Ok(fixed_point(&FixedPointFamily::new(FamilyKind::V, value)?)),
        "w" => Ok(fixed_point(&FixedPointFamily::new(FamilyKind::W, value)?)),
        "T0" => orbit_zero_closed_form(&value),
        _ => Err(Error::Argument(format!("unknown builtin {name:?}"))),
    }
}

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error(transparent)]
    Input(#[from] Error),
    #[error("{0}")]
    Io(String),
}

impl CliError {
    fn code(&self) -> i32 {
        match self {
            CliError::Input(_) => EXIT_USAGE,
            CliError::Io(_) => EXIT_CHECK_FAILED,
        }
    }
}

fn io_err(path: &Path, e: std::io::Error) -> CliError {
    CliError::Io(format!("{}: {e}", path.display()))
}

fn load(x: Option<&String>, x_file: Option<&PathBuf>) -> Result<OmegaFn, CliError> {
    let f = match (x, x_file) {
        (Some(name), _) => builtin(name)?,
        (None, Some(path)) => {
            let text = fs::read_to_string(path).map_err(|e| io_err(path, e))?;
            OmegaFn::from_json(&text)?
        }
        (None, None) => return Err(Error::Argument("no function given".into()).into()),
    };
    f.require_c()?;
    Ok(f)
}

fn emit(out: Option<&PathBuf>, text: &str, stdout: &mut dyn Write) -> Result<(), CliError> {
    match out {
        Some(path) => fs::write(path, text).map_err(|e| io_err(path, e)),
        None => stdout.write_all(text.as_bytes()).map_err(|e| CliError::Io(e.to_string())),
    }
}

fn show(r: &Rational, decimal: Option<usize>) -> String {
    match decimal {
        Some(k) => format!("~{} (approx, truncated to {k} digits)", rational::truncated_decimal(r, k)),
        None => rational::format(r),
    }
}

fn cell(r: &Rational, decimal: Option<usize>) -> String {
    match decimal {
        Some(k) => format!("~{}", rational::truncated_decimal(r, k)),
        None => rational::exact_decimal(r).unwrap_or_else(|| rational::format(r)),
    }
}

/// Runs a parsed command, writing to the given streams, and returns the exit code.
pub fn run(cli: Cli, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32 {
    match dispatch(cli.command, stdout, stderr) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.code()
        }
    }
}

fn dispatch(cmd: Command, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<i32, CliError> {
    let w = |s: &mut dyn Write, text: String| s.write_all(text.as_bytes()).map_err(|e| CliError::Io(e.to_string()));
    match cmd {
        Command::Apply { t, x, out } => {
            let f = load(x.x.as_ref(), x.x_file.as_ref())?;
            let y = apply(&t, &f)?;
            let dist = format!("sup_dist: {}\n", rational::format(&y.sup_dist(&f)));
            emit(out.as_ref(), &format!("{}\n", y.to_json()), stdout)?;
            if out.is_some() {
                w(stdout, dist)?;
            } else {
                w(stderr, dist)?;
            }
            Ok(EXIT_OK)
        }
        Command::Cesaro { t, x, h, out, decimal } => {
            let f = load(x.x.as_ref(), x.x_file.as_ref())?;
            let result: CesaroResult = match &h {
                Some(h) => cesaro_quadrature(&f, &t, h)?,
                None if f.is_zero() => cesaro_zero_exact(&t)?,
                None => return Err(Error::Argument("--h is required unless x is the zero function".into()).into()),
            };
            let (residual, bound) = (result.sup_dist_to(&f), result.error_bound.clone());
            debug_assert_eq!((residual.clone(), bound.clone()), cesaro_residual(&f, &t, h.as_ref())?);
            let method = serde_json::to_value(result.method).expect("enum");
            w(
                stdout,
                format!(
                    "method: {}\nresidual: {}\nerror_bound: {}\n",
                    method.as_str().unwrap_or_default(),
                    show(&residual, decimal),
                    show(&bound, decimal)
                ),
            )?;
            if let Some(path) = out {
                let mean = result
                    .as_grid()
                    .ok_or_else(|| Error::Argument("--out needs the quadrature route (--h)".into()))?;
                fs::write(&path, format!("{}\n", mean.to_json())).map_err(|e| io_err(&path, e))?;
            }
            Ok(EXIT_OK)
        }
        Command::Verify { seed, count, suite, format } => {
            let gen = InstanceGen { seed, count, ..InstanceGen::default() };
            let ids = if suite.is_empty() { CheckId::ALL.to_vec() } else { suite };
            let reports: Vec<_> = {
                use rayon::prelude::*;
                ids.par_iter().map(|&id| run_suite(id, &gen)).collect()
            };
            let mut failed = false;
            for r in &reports {
                failed |= !r.ok();
                let line = match format {
                    ReportFormat::Json => r.to_json(),
                    ReportFormat::Text => {
                        let mut line =
                            format!("{} {} {}/{}", if r.ok() { "PASS" } else { "FAIL" }, r.check_id, r.passed, r.instances);
                        if let Some(wit) = &r.witness {
                            line += &format!("\n  witness: {}", serde_json::to_string(wit).expect("plain data"));
                        }
                        line
                    }
                };
                w(stdout, line + "\n")?;
            }
            Ok(if failed { EXIT_CHECK_FAILED } else { EXIT_OK })
        }
        Command::Fixedpoints { x, grid } => {
            if x.x.is_some() || x.x_file.is_some() {
                let f = load(x.x.as_ref(), x.x_file.as_ref())?;
                let record = match classify_fixed_point(&f)? {
                    Some(fam) => json!({"common_fixed_point": true, "family": fam}),
                    None => json!({
                        "common_fixed_point": false,
                        "moved_at": moving_probe(&f)?.map(|t| rational::format(&t)),
                    }),
                };
                w(stdout, format!("{record}\n"))?;
            } else {
                let n = grid.max(1);
                for kind in [FamilyKind::V, FamilyKind::W] {
                    for k in 0..=n {
                        let s = half() * Rational::new(k.into(), n.into());
                        let fam = FixedPointFamily::new(kind, s)?;
                        let record = json!({"family": fam, "function": fixed_point(&fam)});
                        w(stdout, format!("{record}\n"))?;
                    }
                }
            }
            Ok(EXIT_OK)
        }
        Command::Plotdata { target, from, to, step, samples, format, out, decimal } => {
            let (header, rows) = plot_rows(&target, from, to, step, samples)?;
            let text = match format {
                TableFormat::Csv => {
                    let mut s = format!("{},{}\n", header.0, header.1);
                    for (a, b) in &rows {
                        s += &format!("{},{}\n", cell(a, decimal), cell(b, decimal));
                    }
                    s
                }
                TableFormat::Json => {
                    let arr: Vec<_> = rows
                        .iter()
                        .map(|(a, b)| json!({ header.0: cell(a, decimal), header.1: cell(b, decimal) }))
                        .collect();
                    format!("{}\n", serde_json::Value::Array(arr))
                }
            };
            emit(out.as_ref(), &text, stdout)?;
            Ok(EXIT_OK)
        }
    }
}

type Rows = Vec<(Rational, Rational)>;

/// Sorted, deduplicated abscissae: the given vertices inside `[lo, hi]`, both ends, and `samples` interior points.
fn abscissae(vertices: impl Iterator<Item = Rational>, lo: &Rational, hi: &Rational, samples: u32) -> Vec<Rational> {
    let mut us: Vec<Rational> = vertices.filter(|u| u >= lo && u <= hi).collect();
    us.push(lo.clone());
    us.push(hi.clone());
    if samples > 0 {
        let n = int(samples as i64 + 1);
        us.extend((1..=samples).map(|k| lo + (hi - lo) * int(k as i64) / &n));
    }
    us.sort();
    us.dedup();
    us
}

fn omega_rows(lo: &Rational, hi: &Rational, cuts: impl Iterator<Item = Rational>, samples: u32, at_minus_one: Rational, eval: impl Fn(&Rational) -> Rational) -> Rows {
    let mut rows = Vec::new();
    if *lo <= -Rational::one() {
        rows.push((-Rational::one(), at_minus_one));
    }
    let start = lo.clone().max(Rational::zero());
    if *hi >= start {
        rows.extend(abscissae(cuts, &start, hi, samples).into_iter().map(|u| {
            let v = eval(&u);
            (u, v)
        }));
    }
    rows
}

fn plot_rows(
    target: &PlotTarget,
    from: Option<Rational>,
    to: Option<Rational>,
    step: Option<Rational>,
    samples: u32,
) -> Result<((&'static str, &'static str), Rows), CliError> {
    let check_range = |lo: &Rational, hi: &Rational| {
        if lo > hi {
            Err(Error::Argument(format!("empty range [{lo}, {hi}]")))
        } else {
            Ok(())
        }
    };
    if target.residual_sweep {
        let lo = from.unwrap_or_else(int1);
        let hi = to.unwrap_or_else(|| int(64));
        let step = step.unwrap_or_else(int1);
        check_range(&lo, &hi)?;
        if !lo.is_positive() || !step.is_positive() {
            return Err(Error::Argument("sweep needs positive --from and --step".into()).into());
        }
        let mut rows = Vec::new();
        let mut t = lo;
        while t <= hi {
            let (r, _) = cesaro_residual(&OmegaFn::zero(), &t, None)?;
            rows.push((t.clone(), r));
            t += &step;
        }
        return Ok((("t", "value"), rows));
    }
    if target.f {
        let f = zero_orbit_profile();
        let lo = from.unwrap_or_else(|| int(-3));
        let hi = to.unwrap_or_else(int1);
        check_range(&lo, &hi)?;
        let rows = abscissae(f.vertices().iter().map(|p| p.u.clone()), &lo, &hi, samples)
            .into_iter()
            .map(|u| {
                let v = f.eval(&u);
                (u, v)
            })
            .collect();
        return Ok((("u", "value"), rows));
    }
    if let Some(t) = &target.mean {
        let result = cesaro_zero_exact(t)?;
        let lo = from.unwrap_or_else(|| -Rational::one());
        let hi = to.unwrap_or_else(|| t + int(1));
        check_range(&lo, &hi)?;
        let cuts = match &result.mean {
            crate::cesaro::CesaroMean::Exact { profile, .. } => profile.cuts().to_vec(),
            crate::cesaro::CesaroMean::Grid(x) => x.breakpoints().iter().map(|p| p.u.clone()).collect(),
        };
        let rows = omega_rows(&lo, &hi, cuts.into_iter(), samples, Rational::zero(), |u| {
            result.eval(u).expect("u in Ω")
        });
        return Ok((("u", "value"), rows));
    }
    let f = load(target.x.as_ref(), target.x_file.as_ref())?;
    let lo = from.unwrap_or_else(|| -Rational::one());
    let hi = to.unwrap_or_else(|| f.profile().end() + int(1));
    check_range(&lo, &hi)?;
    let rows = omega_rows(
        &lo,
        &hi,
        f.breakpoints().iter().map(|p| p.u.clone()),
        samples,
        f.minus_one_value().clone(),
        |u| f.profile().eval(u),
    );
    Ok((("u", "value"), rows))
}

fn int1() -> Rational {
    Rational::one()
}
