//! `qzeros`: build q-hypergeometric polynomials, isolate their zeros and run
//! verification grids from the command line.
//!
//! Exit status: 0 on success, 1 when a verification reports a failure,
//! 2 on usage or configuration errors.

use std::fs;
use std::io::{ErrorKind, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use qzeros::analysis::{dominates, interlace, lmesh_against, InterlacingReport, LmeshResult};
use qzeros::families::{Family, FamilyParams};
use qzeros::roots::{default_eps, isolate_real_roots, RootSet};
use qzeros::scalar::{format_decimal, format_rational, parse_rational};
use qzeros::verify::{run_grid, run_table1, GridSpec, Report, TABLE1_ROWS};
use qzeros::{Error, PolyExact, QValue, Rational};
use serde::Serialize;

/// Digits after the point in decimal approximations.
const DIGITS: u32 = 20;

#[derive(Parser, Debug)]
#[command(name = "qzeros", version, about = "Exact zeros of q-hypergeometric polynomial families")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print the exact coefficients, lowest degree first.
    Coeffs(FamilyArgs),
    /// Isolate and refine the real zeros (JSON).
    Roots {
        #[command(flatten)]
        family: FamilyArgs,
        /// Refinement width as a rational `p/q` (default 2^-100).
        #[arg(long)]
        eps: Option<String>,
    },
    /// Logarithmic mesh decided exactly against a threshold (JSON).
    Lmesh {
        #[command(flatten)]
        family: FamilyArgs,
        /// Threshold in (0, 1]; defaults to q.
        #[arg(long)]
        threshold: Option<String>,
    },
    /// Interlacing relation between two family instances (JSON).
    Interlace {
        /// First polynomial, e.g. `little-q-jacobi:n=3,q=1/2,a=1/4,b=-1`.
        #[arg(long)]
        p: String,
        /// Second polynomial, same syntax.
        #[arg(long)]
        r: String,
    },
    /// Run a verification grid from a JSON config.
    Verify {
        #[arg(long)]
        config: PathBuf,
        /// Write the JSON report here instead of stdout.
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Trace each zero against one varying parameter (CSV).
    Sweep {
        #[command(flatten)]
        family: FamilyArgs,
        /// Parameter to vary: `a`, `b` or `q`.
        #[arg(long)]
        param: String,
        #[arg(long, allow_hyphen_values = true)]
        from: String,
        #[arg(long, allow_hyphen_values = true)]
        to: String,
        /// Number of intervals; `steps + 1` samples including both ends.
        #[arg(long, default_value_t = 10)]
        steps: usize,
        /// Write the CSV here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check rows of the zero-location table on deterministic samples.
    Table1 {
        /// Comma-separated row numbers, or `all`.
        #[arg(long, default_value = "all")]
        rows: String,
        #[arg(long, default_value_t = 20)]
        samples: usize,
        #[arg(long)]
        report: Option<PathBuf>,
    },
}

#[derive(Args, Debug, Clone)]
struct FamilyArgs {
    /// One of: little-q-jacobi, little-q-laguerre, q-laguerre, stieltjes-wigert,
    /// q-bessel, normalized-little-q-jacobi, e-factor.
    #[arg(long)]
    family: String,
    #[arg(long)]
    n: usize,
    #[arg(long)]
    q: String,
    #[arg(long, allow_hyphen_values = true)]
    a: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    b: Option<String>,
    #[arg(long)]
    k: Option<usize>,
}

/// Failure modes mapped onto exit codes.
#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error(transparent)]
    Core(#[from] Error),
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("config {path}: {source}")]
    Config { path: String, source: serde_json::Error },
}

type CliResult<T> = Result<T, CliError>;

impl FamilyArgs {
    fn params(&self) -> CliResult<FamilyParams> {
        let family: Family = self.family.parse()?;
        let opt = |v: &Option<String>| v.as_deref().map(parse_rational).transpose();
        let q = QValue::new(parse_rational(&self.q)?)?;
        Ok(FamilyParams::new(family, self.n, q, opt(&self.a)?, opt(&self.b)?, self.k)?)
    }
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct RootJson {
    lo: String,
    hi: String,
    multiplicity: usize,
    exact: Option<String>,
    decimal: String,
    error_bound: String,
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct RootsJson {
    family: String,
    degree: usize,
    real_root_count: usize,
    certified_real_rooted: bool,
    roots: Vec<RootJson>,
}

/// Half-width of the interval plus the decimal rounding error.
fn error_bound(lo: &Rational, hi: &Rational) -> Rational {
    let half_ulp = Rational::new(1.into(), num_bigint_pow10(DIGITS) * 2);
    (hi - lo) / Rational::from_integer(2.into()) + half_ulp
}

fn num_bigint_pow10(digits: u32) -> num_bigint::BigInt {
    num_bigint::BigInt::from(10u8).pow(digits)
}

fn roots_json(params: &FamilyParams, rs: &RootSet) -> RootsJson {
    let roots = rs
        .roots
        .iter()
        .map(|e| RootJson {
            lo: format_rational(&e.lo),
            hi: format_rational(&e.hi),
            multiplicity: e.multiplicity,
            exact: e.exact.as_ref().map(format_rational),
            decimal: format_decimal(&e.midpoint(), DIGITS),
            error_bound: format_rational(&error_bound(&e.lo, &e.hi)),
        })
        .collect();
    RootsJson {
        family: params.to_string(),
        degree: rs.degree(),
        real_root_count: rs.total_count,
        certified_real_rooted: rs.certified_real_rooted,
        roots,
    }
}

fn isolate(p: &PolyExact, eps: &Rational) -> CliResult<RootSet> {
    let mut rs = isolate_real_roots(p, eps)?;
    rs.refine_all(eps)?;
    Ok(rs)
}

/// Write one line to stdout; a closed pipe ends output quietly.
fn emit(line: &str) -> CliResult<()> {
    match writeln!(std::io::stdout().lock(), "{line}") {
        Err(e) if e.kind() != ErrorKind::BrokenPipe => Err(CliError::Io { path: "stdout".into(), source: e }),
        _ => Ok(()),
    }
}

fn print_json<T: Serialize>(value: &T) -> CliResult<()> {
    emit(&serde_json::to_string_pretty(value).expect("serializable"))
}

fn write_out(path: &Option<PathBuf>, text: &str) -> CliResult<()> {
    match path {
        Some(p) => fs::write(p, text).map_err(|source| CliError::Io { path: p.display().to_string(), source }),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes()).map_err(|source| CliError::Io { path: "stdout".into(), source })
        }
    }
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct LmeshJson {
    family: String,
    threshold: String,
    #[serde(flatten)]
    result: LmeshResult,
    decimal_lo: String,
    decimal_hi: String,
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct InterlaceJson {
    p: String,
    r: String,
    #[serde(flatten)]
    report: InterlacingReport,
    dominates: Option<bool>,
}

fn report_exit(report: &Report) -> ExitCode {
    if report.summary.fail > 0 || report.summary.error > 0 {
        ExitCode::from(1)
    } else {
        ExitCode::SUCCESS
    }
}

fn summary_line(report: &Report) -> String {
    let s = &report.summary;
    format!("total {} pass {} fail {} skipped {} error {}", s.total, s.pass, s.fail, s.skipped, s.error)
}

fn parse_rows(text: &str) -> CliResult<Vec<usize>> {
    if text.trim() == "all" {
        return Ok((1..=TABLE1_ROWS).collect());
    }
    text.split(',')
        .map(|t| {
            t.trim()
                .parse::<usize>()
                .ok()
                .filter(|r| (1..=TABLE1_ROWS).contains(r))
                .ok_or_else(|| CliError::Usage(format!("rows must be in 1..={TABLE1_ROWS}, got {t:?}")))
        })
        .collect()
}

fn sweep(family: &FamilyArgs, param: &str, from: &str, to: &str, steps: usize) -> CliResult<String> {
    if steps == 0 {
        return Err(CliError::Usage("steps must be at least 1".into()));
    }
    let (lo, hi) = (parse_rational(from)?, parse_rational(to)?);
    let mut rows = Vec::with_capacity(steps + 1);
    let eps = Rational::new(1.into(), num_bigint_pow10(DIGITS));
    for i in 0..=steps {
        let value = &lo + (&hi - &lo) * Rational::new(i.into(), steps.into());
        let text = format_rational(&value);
        let mut args = family.clone();
        match param {
            "a" => args.a = Some(text.clone()),
            "b" => args.b = Some(text.clone()),
            "q" => args.q = text.clone(),
            other => return Err(CliError::Usage(format!("cannot sweep parameter {other:?}; use a, b or q"))),
        }
        let params = args.params()?;
        let rs = isolate(&params.build()?, &eps)?;
        let mut cells = vec![text, format_decimal(&value, DIGITS)];
        let mut bound = Rational::from_integer(0.into());
        for &idx in &rs.expanded() {
            let e = &rs.roots[idx];
            cells.push(format_decimal(&e.midpoint(), DIGITS));
            bound = bound.max(error_bound(&e.lo, &e.hi));
        }
        rows.push((cells, bound));
    }
    let width = rows.iter().map(|(c, _)| c.len() - 2).max().unwrap_or(0).max(family.n);
    let mut header = vec!["param".to_string(), "param_decimal".to_string()];
    header.extend((1..=width).map(|k| format!("lambda_{k}")));
    header.push("error_bound".into());
    let mut text = header.join(",") + "\n";
    for (mut cells, bound) in rows {
        cells.resize(width + 2, String::new());
        cells.push(format_rational(&bound));
        text += &(cells.join(",") + "\n");
    }
    Ok(text)
}

fn run(cli: Cli) -> CliResult<ExitCode> {
    match cli.command {
        Command::Coeffs(args) => {
            let p = args.params()?.build()?;
            let text: Vec<String> = p.coeffs().iter().map(format_rational).collect();
            emit(&if text.is_empty() { "0".to_string() } else { text.join(", ") })?;
        }
        Command::Roots { family, eps } => {
            let params = family.params()?;
            let eps = match eps {
                Some(e) => parse_rational(&e)?,
                None => default_eps(),
            };
            let rs = isolate(&params.build()?, &eps)?;
            print_json(&roots_json(&params, &rs))?;
        }
        Command::Lmesh { family, threshold } => {
            let params = family.params()?;
            let threshold = match threshold {
                Some(t) => parse_rational(&t)?,
                None => params.q.get().clone(),
            };
            let rs = isolate(&params.build()?, &default_eps())?;
            let result = lmesh_against(&rs, &threshold)?;
            print_json(&LmeshJson {
                family: params.to_string(),
                threshold: format_rational(&threshold),
                decimal_lo: format_decimal(&result.lo, DIGITS),
                decimal_hi: format_decimal(&result.hi, DIGITS),
                result,
            })?;
        }
        Command::Interlace { p, r } => {
            let (pp, rp): (FamilyParams, FamilyParams) = (p.parse()?, r.parse()?);
            let eps = qzeros::analysis::coarse_eps();
            let (rs_p, rs_r) = (isolate(&pp.build()?, &eps)?, isolate(&rp.build()?, &eps)?);
            let report = interlace(&rs_p, &rs_r)?;
            let dom = if rs_p.degree() == rs_r.degree() { Some(dominates(&rs_p, &rs_r)?) } else { None };
            print_json(&InterlaceJson { p: pp.to_string(), r: rp.to_string(), report, dominates: dom })?;
        }
        Command::Verify { config, report } => {
            let path = config.display().to_string();
            let text = fs::read_to_string(&config).map_err(|source| CliError::Io { path: path.clone(), source })?;
            let grid: GridSpec = serde_json::from_str(&text).map_err(|source| CliError::Config { path, source })?;
            let result = run_grid(&grid)?;
            let json = serde_json::to_string_pretty(&result).expect("serializable") + "\n";
            write_out(&report, &json)?;
            if report.is_some() {
                emit(&summary_line(&result))?;
            }
            return Ok(report_exit(&result));
        }
        Command::Sweep { family, param, from, to, steps, out } => {
            let csv = sweep(&family, &param, &from, &to, steps)?;
            write_out(&out, &csv)?;
        }
        Command::Table1 { rows, samples, report } => {
            let rows = parse_rows(&rows)?;
            let result = run_table1(&rows, samples)?;
            for row in &rows {
                let id = format!("table1-row-{row}");
                let recs: Vec<_> = result.records.iter().filter(|r| r.check_id == id).collect();
                let pass = recs.iter().filter(|r| r.status == qzeros::verify::Status::Pass).count();
                emit(&format!("row {row}: {pass}/{} pass", recs.len()))?;
            }
            if let Some(path) = &report {
                let json = serde_json::to_string_pretty(&result).expect("serializable") + "\n";
                write_out(&Some(path.clone()), &json)?;
            }
            emit(&summary_line(&result))?;
            return Ok(report_exit(&result));
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(2) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
