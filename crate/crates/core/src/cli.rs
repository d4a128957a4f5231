//! Command-line front end.
//!
//! Exit codes: 0 when the run is clean, 1 when it reports a finding (an
//! identity mismatch, a unimodality counterexample, a failed limit check),
//! 2 on usage or input errors.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::analysis::{
    bessel_coeff, bessel_limit_failures, limit_q1, q_bessel_mismatch, scan_unimodality, ScanReport,
};
use crate::bijection::{build, format_trace, reduce, reduce_trace, ReducedPair};
use crate::genfun::{
    a_table, b_table, verify_identity, BTable, LeftMethod, RightMethod, VerificationReport,
};
use crate::partitions::{oracle_series, Partition};
use crate::qalg::{xq_to_json, IntPoly};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FINDING: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "kregular",
    version,
    about = "Exact generating functions for k-regular partitions"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Plain, global = true)]
    pub format: Format,

    /// Write output here instead of standard output.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,

    /// Cap on worker threads (default: all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    /// Report elapsed_ms as 0 so repeated runs are byte-identical.
    #[arg(long, global = true)]
    pub no_timings: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Plain,
    Json,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Compare both sides of the k-regular identity coefficientwise.
    Verify(VerifyArgs),
    /// Print a(m, n), b(m, n) or b(n_k, ..., n_1) tables.
    Table(TableArgs),
    /// Run the partition <-> (base, lambda) bijection.
    #[command(subcommand)]
    Bijection(BijectionCommand),
    /// Enumeration-based series of k-regular partitions by length and weight.
    Oracle(SeriesArgs),
    /// Scan the b polynomials for unimodality.
    Scan(ScanArgs),
    /// q -> 1 limits and the comparison with the q-analog coefficients.
    Bessel(BesselArgs),
}

#[derive(Debug, Args)]
pub struct SeriesArgs {
    #[arg(long, default_value_t = 2, value_parser = positive)]
    pub k: usize,
    /// Largest retained power of x.
    #[arg(long, default_value_t = 8)]
    pub xmax: usize,
    /// Largest retained power of q.
    #[arg(long, default_value_t = 24)]
    pub qmax: usize,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub series: SeriesArgs,
    #[arg(long, value_enum, default_value_t = LeftArg::Product)]
    pub left: LeftArg,
    #[arg(long, value_enum, default_value_t = RightArg::Recurrence)]
    pub right: RightArg,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum LeftArg {
    Product,
    Enumeration,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum RightArg {
    Recurrence,
    LemmaDirect,
}

#[derive(Debug, Args)]
pub struct TableArgs {
    #[arg(long, value_enum)]
    pub which: Which,
    #[arg(long, default_value_t = 2, value_parser = positive)]
    pub k: usize,
    /// Largest index sum.
    #[arg(long, default_value_t = 4)]
    pub max: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Which {
    A,
    B,
    #[value(name = "b_k", alias = "b-k")]
    BK,
}

#[derive(Debug, Subcommand)]
pub enum BijectionCommand {
    /// Partition to base word and lambda.
    Reduce(PartitionArg),
    /// Like reduce, printing every intermediate state.
    Trace(PartitionArg),
    /// Base partition and lambda back to the partition.
    Build(BuildArgs),
}

#[derive(Debug, Args)]
pub struct PartitionArg {
    #[arg(long, default_value_t = 2, value_parser = positive)]
    pub k: usize,
    /// Weakly increasing parts separated by spaces, e.g. "3 6 10 10".
    pub partition: String,
}

#[derive(Debug, Args)]
pub struct BuildArgs {
    #[arg(long, default_value_t = 2, value_parser = positive)]
    pub k: usize,
    /// Base partition, sizes 1..s, e.g. "1 2 3 3 4 5 5".
    #[arg(long)]
    pub base: String,
    /// Auxiliary partition.
    #[arg(long, default_value = "")]
    pub lambda: String,
}

#[derive(Debug, Args)]
pub struct ScanArgs {
    #[arg(long, default_value_t = 2, value_parser = positive)]
    pub k: usize,
    /// Largest index sum n_k + ... + n_1.
    #[arg(long, default_value_t = 8)]
    pub sum_bound: usize,
}

#[derive(Debug, Args)]
pub struct BesselArgs {
    #[arg(long, default_value_t = 6)]
    pub bound: usize,
}

fn positive(s: &str) -> Result<usize, String> {
    match s.parse::<usize>() {
        Ok(0) => Err("must be at least 1".into()),
        Ok(v) => Ok(v),
        Err(e) => Err(e.to_string()),
    }
}

/// Outcome of one subcommand: rendered text and the exit code.
struct Rendered {
    text: String,
    code: i32,
}

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error(transparent)]
    Partition(#[from] crate::partitions::PartitionError),
    #[error(transparent)]
    Bijection(#[from] crate::bijection::BijectionError),
    #[error(transparent)]
    Genfun(#[from] crate::genfun::GenfunError),
    #[error(transparent)]
    Analysis(#[from] crate::analysis::AnalysisError),
    #[error("cannot build thread pool: {0}")]
    Threads(String),
}

/// Parse `args` (including the program name) and run the command. Output
/// goes to `out` unless `--output` names a file; diagnostics go to `err`.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let sink: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = sink.write_all(text.as_bytes());
            return code;
        }
    };
    let rendered = match execute(&cli) {
        Ok(r) => r,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return EXIT_USAGE;
        }
    };
    let written = match &cli.output {
        Some(path) => std::fs::write(path, &rendered.text),
        None => out.write_all(rendered.text.as_bytes()),
    };
    if let Err(e) = written {
        let _ = writeln!(err, "error: cannot write output: {e}");
        return EXIT_USAGE;
    }
    rendered.code
}

fn execute(cli: &Cli) -> Result<Rendered, CliError> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = cli.threads {
        builder = builder.num_threads(n);
    }
    let pool = builder
        .build()
        .map_err(|e| CliError::Threads(e.to_string()))?;
    pool.install(|| dispatch(cli))
}

fn dispatch(cli: &Cli) -> Result<Rendered, CliError> {
    let json = cli.format == Format::Json;
    match &cli.command {
        Command::Verify(a) => {
            let left = match a.left {
                LeftArg::Product => LeftMethod::Product,
                LeftArg::Enumeration => LeftMethod::Enumeration,
            };
            let right = match a.right {
                RightArg::Recurrence => RightMethod::Recurrence,
                RightArg::LemmaDirect => RightMethod::LemmaDirect,
            };
            let mut report =
                verify_identity(a.series.k, a.series.xmax, a.series.qmax, left, right)?;
            if cli.no_timings {
                report.elapsed_ms = 0;
            }
            let code = if report.is_verified() {
                EXIT_OK
            } else {
                EXIT_FINDING
            };
            let text = if json {
                to_json(&report)
            } else {
                verify_plain(&report)
            };
            Ok(Rendered { text, code })
        }
        Command::Table(a) => Ok(Rendered {
            text: table(a, json)?,
            code: EXIT_OK,
        }),
        Command::Bijection(b) => Ok(Rendered {
            text: bijection(b, json)?,
            code: EXIT_OK,
        }),
        Command::Oracle(a) => {
            let s = oracle_series(a.k, a.xmax, a.qmax);
            let text = if json {
                let mut v = xq_to_json(&s);
                v["k"] = json!(a.k);
                pretty(&v)
            } else {
                let mut t = format!("k={} xmax={} qmax={}\n", a.k, a.xmax, a.qmax);
                for (d, q) in s.terms() {
                    let _ = writeln!(t, "x^{d}: {q}");
                }
                t
            };
            Ok(Rendered {
                text,
                code: EXIT_OK,
            })
        }
        Command::Scan(a) => {
            let mut report = scan_unimodality(a.k, a.sum_bound)?;
            if cli.no_timings {
                report.elapsed_ms = 0;
            }
            let code = if report.holds() {
                EXIT_OK
            } else {
                EXIT_FINDING
            };
            let text = if json {
                to_json(&report)
            } else {
                scan_plain(&report)
            };
            Ok(Rendered { text, code })
        }
        Command::Bessel(a) => Ok(bessel(a.bound, json)),
    }
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values always serialize");
    s.push('\n');
    s
}

fn to_json<T: serde::Serialize>(v: &T) -> String {
    pretty(&serde_json::to_value(v).expect("report types always serialize"))
}

fn verify_plain(r: &VerificationReport) -> String {
    let mut t = format!(
        "k={} xmax={} qmax={} left={} right={}\nstatus: {}\nmismatches: {}\n",
        r.k,
        r.xmax,
        r.qmax,
        r.left_method.as_str(),
        r.right_method.as_str(),
        if r.is_verified() {
            "verified"
        } else {
            "mismatch"
        },
        r.mismatches.len()
    );
    for m in &r.mismatches {
        let _ = writeln!(t, "  x^{} q^{}: lhs={} rhs={}", m.x, m.q, m.lhs, m.rhs);
    }
    let _ = writeln!(t, "elapsed_ms: {}", r.elapsed_ms);
    t
}

fn scan_plain(r: &ScanReport) -> String {
    let mut t = format!(
        "k={} sum_bound={} tuples_checked={} expected_tuples={}\ncounterexamples: {}\n",
        r.k,
        r.sum_bound,
        r.tuples_checked,
        r.expected_tuples,
        r.counterexamples.len()
    );
    for c in &r.counterexamples {
        let _ = writeln!(t, "  b{:?} = {}", c.tuple, c.poly);
    }
    let _ = writeln!(t, "elapsed_ms: {}", r.elapsed_ms);
    t
}

fn index_label(t: &[usize]) -> String {
    t.iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join(",")
}

fn table(a: &TableArgs, json: bool) -> Result<String, CliError> {
    let name = match a.which {
        Which::A => "a",
        Which::B => "b",
        Which::BK => "b_k",
    };
    let entries: Vec<(Vec<usize>, IntPoly)> = match a.which {
        Which::A | Which::B => {
            let t = if a.which == Which::A {
                a_table(a.max, a.max)
            } else {
                b_table(a.max, a.max)
            };
            (0..=a.max)
                .flat_map(|m| (0..=a.max - m).map(move |n| (m, n)))
                .map(|(m, n)| (vec![m, n], t[m][n].clone()))
                .collect()
        }
        Which::BK => BTable::with_sum_bound(a.k, a.max)?
            .sorted_entries()
            .into_iter()
            .map(|(t, p)| (t.to_vec(), p.clone()))
            .collect(),
    };
    let k = if a.which == Which::BK { a.k } else { 2 };
    if json {
        let rows: Vec<Value> = entries
            .iter()
            .map(|(t, p)| json!({ "index": t, "poly": p }))
            .collect();
        return Ok(pretty(&json!({
            "which": name,
            "k": k,
            "max": a.max,
            "index_order": if a.which == Which::BK { "n_k..n_1" } else { "m,n" },
            "entries": rows,
        })));
    }
    let mut t = String::new();
    let mut row = None;
    for (idx, p) in &entries {
        if a.which != Which::BK && row != Some(idx[0]) {
            row = Some(idx[0]);
            let _ = writeln!(t, "m = {}", idx[0]);
        }
        let _ = writeln!(t, "  {name}({}) = {p}", index_label(idx));
    }
    Ok(t)
}

fn reduced_json(pair: &ReducedPair) -> Value {
    json!({
        "k": pair.k(),
        "base": pair.base().to_string(),
        "word": pair.word(),
        "lambda": pair.lambda().to_string(),
        "base_weight": pair.base_weight(),
        "lambda_weight": pair.lambda().weight(),
        "forbidden": pair.forbidden(),
    })
}

fn reduced_plain(pair: &ReducedPair) -> String {
    let forb: Vec<String> = pair.forbidden().iter().map(ToString::to_string).collect();
    format!(
        "base={}\nlambda={}\nforbidden={}\n",
        pair.base(),
        pair.lambda(),
        forb.join(" ")
    )
}

fn bijection(cmd: &BijectionCommand, json: bool) -> Result<String, CliError> {
    match cmd {
        BijectionCommand::Reduce(a) => {
            let p: Partition = a.partition.parse()?;
            let pair = reduce(&p, a.k)?;
            Ok(if json {
                let mut v = reduced_json(&pair);
                v["partition"] = json!(p.to_string());
                pretty(&v)
            } else {
                reduced_plain(&pair)
            })
        }
        BijectionCommand::Trace(a) => {
            let p: Partition = a.partition.parse()?;
            let (steps, pair) = reduce_trace(&p, a.k)?;
            Ok(if json {
                let mut v = reduced_json(&pair);
                v["partition"] = json!(p.to_string());
                v["steps"] = steps
                    .iter()
                    .map(|s| json!({"step": s.step, "partition": s.partition.to_string(), "lambda": s.lambda.to_string()}))
                    .collect();
                pretty(&v)
            } else {
                format_trace(&steps, &pair)
            })
        }
        BijectionCommand::Build(a) => {
            let base: Partition = a.base.parse()?;
            let lambda: Partition = a.lambda.parse()?;
            let pair = ReducedPair::from_base(a.k, &base, lambda)?;
            let p = build(&pair);
            Ok(if json {
                let mut v = reduced_json(&pair);
                v["partition"] = json!(p.to_string());
                pretty(&v)
            } else {
                format!("partition={p}\n")
            })
        }
    }
}

fn bessel(bound: usize, json: bool) -> Rendered {
    let failures = bessel_limit_failures(bound);
    let mismatches = q_bessel_mismatch(bound);
    let b = b_table(bound, bound);
    let limits: Vec<(usize, usize, String)> = (0..=bound)
        .flat_map(|m| (0..=bound - m).map(move |n| (m, n)))
        .map(|(m, n)| (m, n, limit_q1(&b[m][n]).to_string()))
        .collect();
    let code = if failures.is_empty() {
        EXIT_OK
    } else {
        EXIT_FINDING
    };
    let text = if json {
        pretty(&json!({
            "bound": bound,
            "limit_check": failures.is_empty(),
            "limit_failures": failures,
            "limits": limits.iter().map(|(m, n, l)| json!({
                "m": m, "n": n, "limit": l, "bessel": bessel_coeff(*m, *n).to_string(),
            })).collect::<Vec<_>>(),
            "q_analog_mismatches": mismatches,
        }))
    } else {
        let mut t = format!(
            "bound={bound}\nlimit_check: {}\n",
            if failures.is_empty() { "pass" } else { "fail" }
        );
        for (m, n, l) in &limits {
            let _ = writeln!(
                t,
                "  b({m},{n})|q=1 = {l}  bessel = {}",
                bessel_coeff(*m, *n)
            );
        }
        let _ = writeln!(t, "q_analog_mismatches: {}", mismatches.len());
        for x in &mismatches {
            let _ = writeln!(
                t,
                "  ({},{}): b = {}  q-analog = {}",
                x.m, x.n, x.b, x.q_analog
            );
        }
        t
    };
    Rendered { text, code }
}
