//! Command-line front end: `bounds`, `table`, `verify`, `constants`.
//!
//! Defaults for `--eps` and `--n-max` can be overridden with the
//! `HARMONIC_BOUNDS_EPS` and `HARMONIC_BOUNDS_N_MAX` environment variables;
//! an explicit flag wins over the environment.

mod render;

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write as _;

use clap::{Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;

pub use render::{
    common_prefix, exact_decimal, is_plus_minus, is_settled, parse_rendered, plus_minus, render_decimal,
    scientific_prefix,
};

use crate::approx::{
    approx_value, correction, lambda_cont, sharp_bounds, sharp_constant, target_quantity, ApproxMethod, Side, Theorem,
};
use crate::enclosure::{gamma_enclosure, Interval, Precision};
use crate::error::{Error, Result};
use crate::exact::{harmonic_exact, Rational};
use crate::verify::{
    check_asymptotics, check_identities, check_lemma_sandwich, check_monotonicity, check_theorem_bounds,
    default_lemma_grid, ErrataValue, Lemma, VerificationReport, WitnessValue,
};

pub const DEFAULT_EPS: &str = "1e-12";
pub const DEFAULT_N_MAX: u64 = 1000;
pub const ENV_EPS: &str = "HARMONIC_BOUNDS_EPS";
pub const ENV_N_MAX: &str = "HARMONIC_BOUNDS_N_MAX";

/// Exit status for malformed invocations and domain errors.
pub const EXIT_USAGE: i32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Plain,
    Csv,
    Json,
    Markdown,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TableKind {
    /// lambda_n, discrete Lodge-Ramanujan correction
    Lambda,
    /// d_n, discrete DeTemple-Wang correction
    D,
    /// f_n, discrete Toth-Mare correction
    F,
    /// Lambda_n = lambda_n / 2 via the digamma function
    #[value(name = "Lambda_cont", alias = "lambda-cont")]
    LambdaCont,
}

impl TableKind {
    fn name(self) -> &'static str {
        match self {
            TableKind::Lambda => "lambda",
            TableKind::D => "d",
            TableKind::F => "f",
            TableKind::LambdaCont => "Lambda_cont",
        }
    }

    fn eval(self, n: u64, prec: &Precision) -> Result<Interval> {
        match self {
            TableKind::Lambda => correction(ApproxMethod::LodgeRamanujan, n, prec),
            TableKind::D => correction(ApproxMethod::DeTempleWang, n, prec),
            TableKind::F => correction(ApproxMethod::TothMare, n, prec),
            TableKind::LambdaCont => lambda_cont(&Rational::from(n), prec),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum VerifyTarget {
    Thm1,
    Thm2,
    Thm3,
    MonotoneF,
    MonotoneLambda,
    MonotoneD,
    Lemmas,
    Identities,
    Asymptotics,
    All,
}

#[derive(Debug, Parser)]
#[command(
    name = "harmonic-bounds",
    version,
    about = "Certified sharp bounds for harmonic-number approximations"
)]
pub struct Cli {
    /// Output format
    #[arg(long, value_enum, default_value_t = OutputFormat::Plain, global = true)]
    pub format: OutputFormat,

    /// Fractional decimal digits to print
    #[arg(long, default_value_t = 10, global = true, value_parser = clap::value_parser!(u32).range(1..=2000))]
    pub digits: u32,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// H_n, an approximation, its sharp bound pair and the residual
    Bounds {
        /// Index n >= 1
        #[arg(value_parser = clap::value_parser!(u64).range(1..))]
        n: u64,
        /// Method (toth-mare, lodge-ramanujan, detemple-wang, tm, lr, dw) or theorem (thm1..thm3)
        #[arg(default_value = "thm3")]
        method: String,
    },
    /// Correction sequence values for a range of indices
    Table {
        #[arg(value_enum)]
        kind: TableKind,
        #[arg(long, default_value_t = 1)]
        from: u64,
        #[arg(long, default_value_t = 10)]
        to: u64,
    },
    /// Run a verification check and report a verdict
    Verify {
        #[arg(value_enum)]
        target: VerifyTarget,
        #[arg(long, env = ENV_N_MAX, default_value_t = DEFAULT_N_MAX)]
        n_max: u64,
        /// Target enclosure width (decimal, exponent or p/q)
        #[arg(long, env = ENV_EPS, default_value = DEFAULT_EPS, value_parser = parse_eps)]
        eps: Rational,
    },
    /// Euler's constant, the three sharp constants and the three limits
    Constants,
}

fn parse_eps(s: &str) -> std::result::Result<Rational, String> {
    let r: Rational = s.parse().map_err(|e: Error| e.to_string())?;
    if !r.is_positive() {
        return Err(format!("eps must be positive, got {s}"));
    }
    Ok(r)
}

/// Resolves a method name or a theorem id.
pub fn parse_method(s: &str) -> Result<(ApproxMethod, Theorem)> {
    if let Ok(t) = s.parse::<Theorem>() {
        return Ok((t.method(), t));
    }
    let m: ApproxMethod = s
        .parse()
        .map_err(|_| Error::Parse(format!("unknown method or theorem {s:?}")))?;
    Ok((m, m.theorem()))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(untagged)]
pub enum RowIndex {
    Number(u64),
    Label(String),
}

impl std::fmt::Display for RowIndex {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            RowIndex::Number(n) => write!(f, "{n}"),
            RowIndex::Label(s) => f.write_str(s),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Row {
    pub index: RowIndex,
    pub value: Interval,
    pub decimal: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exact: Option<Rational>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Table {
    pub title: String,
    pub params: BTreeMap<String, String>,
    pub rows: Vec<Row>,
}

#[derive(Serialize)]
struct CsvRow<'a> {
    index: String,
    value_lo: &'a Rational,
    value_hi: &'a Rational,
    decimal: &'a str,
}

/// Extra digits tried, in order, until the printed digits settle.
const GUARD_DIGITS: [u32; 4] = [3, 10, 25, 60];

/// Evaluates `f` at increasing precision until the rendering settles; keeps
/// the last attempt if the value sits on a digit boundary throughout.
pub fn faithful<F>(digits: u32, f: F) -> Result<(Interval, String)>
where
    F: Fn(&Precision) -> Result<Interval>,
{
    let mut last = None;
    for extra in GUARD_DIGITS {
        let x = f(&Precision::digits(digits + extra))?;
        let s = render_decimal(&x, digits);
        if x.is_point() || is_settled(&s) {
            return Ok((x, s));
        }
        last = Some((x, s));
    }
    Ok(last.expect("guard digits nonempty"))
}

fn row<F>(index: RowIndex, digits: u32, f: F) -> Result<Row>
where
    F: Fn(&Precision) -> Result<Interval>,
{
    let (value, decimal) = faithful(digits, f)?;
    let exact = value.is_point().then(|| value.lo().clone());
    Ok(Row {
        index,
        value,
        decimal,
        exact,
    })
}

fn label(s: impl Into<String>) -> RowIndex {
    RowIndex::Label(s.into())
}

pub fn cmd_bounds(n: u64, method: &str, digits: u32) -> Result<Table> {
    if n == 0 {
        return Err(Error::domain("n must be at least 1"));
    }
    let (m, t) = parse_method(method)?;
    let h = harmonic_exact(n)?;
    let side_name = |s: Side| match s {
        Side::Lower => "lower",
        Side::Upper => "upper",
    };
    let constant = |prec: &Precision| Ok(sharp_constant(t, prec));
    let limit = |_: &Precision| Ok(Interval::point(m.limit()));
    type Eval<'a> = &'a dyn Fn(&Precision) -> Result<Interval>;
    let (lower_c, upper_c): (Eval, Eval) = match t.equality_side() {
        Side::Lower => (&constant, &limit),
        Side::Upper => (&limit, &constant),
    };
    let rows = vec![
        row(label(format!("H_{n}")), digits, |_| Ok(Interval::point(h.clone())))?,
        row(label(format!("approx {}", m.name())), digits, |p| approx_value(n, m, p))?,
        row(label("residual H_n - approx"), digits, |p| {
            Ok(&Interval::point(h.clone()) - &approx_value(n, m, &p.divided(2))?)
        })?,
        row(label("T_n"), digits, |p| target_quantity(n, t, p))?,
        row(label("lower-bound constant"), digits, lower_c)?,
        row(label("upper-bound constant"), digits, upper_c)?,
        row(
            label("lower bound on T_n"),
            digits,
            |p| Ok(sharp_bounds(n, t, p)?.lower),
        )?,
        row(
            label("upper bound on T_n"),
            digits,
            |p| Ok(sharp_bounds(n, t, p)?.upper),
        )?,
    ];
    let equality = if n == 1 { side_name(t.equality_side()) } else { "none" };
    Ok(Table {
        title: format!("bounds n={n} {t:?} ({})", m.name()),
        params: [
            ("n", n.to_string()),
            ("theorem", format!("{t:?}").to_lowercase()),
            ("method", m.name().to_string()),
            ("digits", digits.to_string()),
            ("equality_side", equality.to_string()),
        ]
        .into_iter()
        .map(|(k, v)| (k.to_string(), v))
        .collect(),
        rows,
    })
}

pub fn cmd_table(kind: TableKind, from: u64, to: u64, digits: u32) -> Result<Table> {
    if from == 0 || from > to {
        return Err(Error::domain(format!("need 1 <= from <= to, got {from}..{to}")));
    }
    let rows = (from..=to)
        .into_par_iter()
        .map(|n| row(RowIndex::Number(n), digits, |p| kind.eval(n, p)))
        .collect::<Result<Vec<_>>>()?;
    Ok(Table {
        title: format!("{} table", kind.name()),
        params: [
            ("kind", kind.name().to_string()),
            ("from", from.to_string()),
            ("to", to.to_string()),
            ("digits", digits.to_string()),
        ]
        .into_iter()
        .map(|(k, v)| (k.to_string(), v))
        .collect(),
        rows,
    })
}

pub fn cmd_constants(digits: u32) -> Result<Table> {
    let mut rows = vec![row(label("gamma"), digits, |p| Ok(gamma_enclosure(p)))?];
    for t in Theorem::ALL {
        let name = format!("c{} ({}_1)", t as usize + 1, t.method().sequence_name());
        rows.push(row(label(name), digits, |p| Ok(sharp_constant(t, p)))?);
    }
    for m in ApproxMethod::ALL {
        let name = format!("limit of {}_n", m.sequence_name());
        rows.push(row(label(name), digits, |_| Ok(Interval::point(m.limit())))?);
    }
    Ok(Table {
        title: "constants".into(),
        params: [("digits".to_string(), digits.to_string())].into_iter().collect(),
        rows,
    })
}

pub fn cmd_verify(target: VerifyTarget, n_max: u64, eps: &Rational) -> Result<VerificationReport> {
    if n_max == 0 {
        return Err(Error::domain("n_max must be at least 1"));
    }
    let prec = Precision::new(eps.clone())?;
    let params = || -> BTreeMap<String, String> {
        [("n_max", n_max.to_string()), ("eps", eps.to_string())]
            .into_iter()
            .map(|(k, v)| (k.to_string(), v))
            .collect()
    };
    let lemmas = || -> Result<VerificationReport> {
        let grid = default_lemma_grid();
        let parts = Lemma::ALL
            .into_iter()
            .map(|l| check_lemma_sandwich(l, &grid, &prec))
            .collect::<Result<Vec<_>>>()?;
        let mut p = params();
        p.remove("n_max");
        Ok(VerificationReport::merge("lemmas", p, parts))
    };
    let monotone_n = n_max.max(2);
    Ok(match target {
        VerifyTarget::Thm1 => check_theorem_bounds(Theorem::Thm1, n_max, &prec)?,
        VerifyTarget::Thm2 => check_theorem_bounds(Theorem::Thm2, n_max, &prec)?,
        VerifyTarget::Thm3 => check_theorem_bounds(Theorem::Thm3, n_max, &prec)?,
        VerifyTarget::MonotoneF => check_monotonicity(ApproxMethod::TothMare, monotone_n, &prec)?,
        VerifyTarget::MonotoneLambda => check_monotonicity(ApproxMethod::LodgeRamanujan, monotone_n, &prec)?,
        VerifyTarget::MonotoneD => check_monotonicity(ApproxMethod::DeTempleWang, monotone_n, &prec)?,
        VerifyTarget::Lemmas => lemmas()?,
        VerifyTarget::Identities => check_identities(&prec)?,
        VerifyTarget::Asymptotics => check_asymptotics(n_max, &prec)?,
        VerifyTarget::All => {
            let mut parts = Vec::new();
            for t in Theorem::ALL {
                parts.push(check_theorem_bounds(t, n_max, &prec)?);
            }
            for m in ApproxMethod::ALL {
                parts.push(check_monotonicity(m, monotone_n, &prec)?);
            }
            parts.push(lemmas()?);
            parts.push(check_identities(&prec)?);
            parts.push(check_asymptotics(n_max, &prec)?);
            VerificationReport::merge("all", params(), parts)
        }
    })
}

fn csv_text<F>(write: F) -> String
where
    F: FnOnce(&mut csv::Writer<Vec<u8>>) -> csv::Result<()>,
{
    let mut w = csv::Writer::from_writer(Vec::new());
    write(&mut w).expect("in-memory csv");
    String::from_utf8(w.into_inner().expect("in-memory csv")).expect("utf-8 csv")
}

fn md_cell(s: &str) -> String {
    s.replace('|', "\\|")
}

pub fn render_table(table: &Table, format: OutputFormat) -> String {
    let mut out = String::new();
    match format {
        OutputFormat::Plain => {
            let _ = writeln!(out, "{}", table.title);
            let width = table
                .rows
                .iter()
                .map(|r| r.index.to_string().chars().count())
                .max()
                .unwrap_or(0);
            for r in &table.rows {
                let idx = r.index.to_string();
                let pad = width - idx.chars().count();
                let _ = write!(out, "  {idx}{}  {}", " ".repeat(pad), r.decimal);
                match &r.exact {
                    Some(e) if e.to_string() != r.decimal => {
                        let _ = write!(out, "  (= {e})");
                    }
                    _ => {}
                }
                out.push('\n');
            }
        }
        OutputFormat::Csv => {
            out = csv_text(|w| {
                if table.rows.is_empty() {
                    w.write_record(["index", "value_lo", "value_hi", "decimal"])?;
                }
                for r in &table.rows {
                    w.serialize(CsvRow {
                        index: r.index.to_string(),
                        value_lo: r.value.lo(),
                        value_hi: r.value.hi(),
                        decimal: &r.decimal,
                    })?;
                }
                Ok(())
            });
        }
        OutputFormat::Json => {
            out = serde_json::to_string_pretty(table).expect("table serializes");
            out.push('\n');
        }
        OutputFormat::Markdown => {
            let _ = writeln!(out, "### {}\n", table.title);
            let _ = writeln!(out, "| index | value | exact or enclosure |");
            let _ = writeln!(out, "|---|---|---|");
            for r in &table.rows {
                let enclosure = match &r.exact {
                    Some(e) => e.to_string(),
                    None => format!("[{}, {}]", r.value.lo(), r.value.hi()),
                };
                let _ = writeln!(
                    out,
                    "| {} | {} | {} |",
                    md_cell(&r.index.to_string()),
                    r.decimal,
                    enclosure
                );
            }
        }
    }
    out
}

fn witness_text(v: &WitnessValue, digits: u32) -> String {
    match v {
        WitnessValue::Rational(r) => r.to_string(),
        WitnessValue::Interval(i) => render_decimal(i, digits),
        WitnessValue::Named(m) => m
            .iter()
            .map(|(k, i)| format!("{k}={}", render_decimal(i, digits)))
            .collect::<Vec<_>>()
            .join(" "),
        WitnessValue::Text(t) => t.clone(),
    }
}

fn errata_text(v: &ErrataValue, digits: u32) -> String {
    match v {
        ErrataValue::Interval(i) => render_decimal(i, digits),
        other => other.to_string(),
    }
}

fn status_text(s: crate::verify::WitnessStatus) -> String {
    serde_json::to_value(s)
        .ok()
        .and_then(|v| v.as_str().map(str::to_string))
        .unwrap_or_default()
}

pub fn render_report(report: &VerificationReport, format: OutputFormat, digits: u32) -> String {
    let mut out = String::new();
    match format {
        OutputFormat::Json => {
            out = serde_json::to_string_pretty(report).expect("report serializes");
            out.push('\n');
        }
        OutputFormat::Plain => {
            let _ = writeln!(out, "check: {}", report.check_name);
            for (k, v) in &report.params {
                let _ = writeln!(out, "  {k} = {v}");
            }
            let _ = writeln!(out, "witnesses: {}", report.witnesses.len());
            for w in &report.witnesses {
                let _ = writeln!(
                    out,
                    "  [{}] {}: {}",
                    status_text(w.status),
                    w.input,
                    witness_text(&w.value_or_interval, digits)
                );
            }
            let _ = writeln!(
                out,
                "errata: {} ({} mismatched)",
                report.errata.len(),
                report.mismatches().count()
            );
            for e in &report.errata {
                let tag = if e.matches { "match" } else { "MISMATCH" };
                let _ = writeln!(
                    out,
                    "  [{tag}] {}: printed {}, recomputed {}",
                    e.location,
                    errata_text(&e.printed, digits),
                    errata_text(&e.recomputed, digits)
                );
            }
            let _ = writeln!(out, "verdict: {}", report.verdict);
        }
        OutputFormat::Csv => {
            out = csv_text(|w| {
                w.write_record(["section", "item", "status", "detail"])?;
                for wit in &report.witnesses {
                    let detail = serde_json::to_string(&wit.value_or_interval).expect("serializes");
                    w.write_record(["witness", &wit.input, &status_text(wit.status), &detail])?;
                }
                for e in &report.errata {
                    let detail = format!("printed={}; recomputed={}", e.printed, e.recomputed);
                    let status = if e.matches { "match" } else { "mismatch" };
                    w.write_record(["erratum", &e.location, status, &detail])?;
                }
                w.write_record(["verdict", &report.check_name, &report.verdict.to_string(), ""])?;
                Ok(())
            });
        }
        OutputFormat::Markdown => {
            let _ = writeln!(out, "### {}: {}\n", report.check_name, report.verdict);
            let _ = writeln!(out, "| input | status | value |");
            let _ = writeln!(out, "|---|---|---|");
            for w in &report.witnesses {
                let _ = writeln!(
                    out,
                    "| {} | {} | {} |",
                    md_cell(&w.input),
                    status_text(w.status),
                    md_cell(&witness_text(&w.value_or_interval, digits))
                );
            }
            if !report.errata.is_empty() {
                let _ = writeln!(out, "\n| location | printed | recomputed | match |");
                let _ = writeln!(out, "|---|---|---|---|");
                for e in &report.errata {
                    let _ = writeln!(
                        out,
                        "| {} | {} | {} | {} |",
                        md_cell(&e.location),
                        md_cell(&errata_text(&e.printed, digits)),
                        md_cell(&errata_text(&e.recomputed, digits)),
                        e.matches
                    );
                }
            }
        }
    }
    out
}

/// Runs one invocation; returns `(exit status, stdout text, stderr text)`.
pub fn execute<I, T>(args: I) -> (i32, String, String)
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let text = e.render().to_string();
            return if e.use_stderr() {
                (code, String::new(), text)
            } else {
                (code, text, String::new())
            };
        }
    };
    let digits = cli.digits;
    let result = match cli.command {
        Command::Bounds { n, method } => cmd_bounds(n, &method, digits).map(|t| (0, render_table(&t, cli.format))),
        Command::Table { kind, from, to } => {
            cmd_table(kind, from, to, digits).map(|t| (0, render_table(&t, cli.format)))
        }
        Command::Constants => cmd_constants(digits).map(|t| (0, render_table(&t, cli.format))),
        Command::Verify { target, n_max, eps } => {
            cmd_verify(target, n_max, &eps).map(|r| (r.verdict.exit_code(), render_report(&r, cli.format, digits)))
        }
    };
    match result {
        Ok((code, text)) => (code, text, String::new()),
        Err(e) => (EXIT_USAGE, String::new(), format!("error: {e}\n")),
    }
}

/// Entry point for the binary: prints and returns the exit status.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let (code, out, err) = execute(args);
    // a closed pipe downstream is not an error worth reporting
    let _ = std::io::stdout().lock().write_all(out.as_bytes());
    let _ = std::io::stderr().lock().write_all(err.as_bytes());
    code
}
