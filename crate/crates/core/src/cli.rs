//! The `bn2` command line.
//!
//! Exit codes: 0 on success, 1 when a verification check fails, 2 on usage
//! or input errors.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::basis::{basis_dimension, enumerate_basis, ClassExpression};
use crate::enumerative::{
    castelnuovo_n, count_ell, count_m, count_n, sum_d, sum_s16, sum_t, SchubertIndex,
};
use crate::exactnum::format_rational;
use crate::relations::{build_relations, build_t};
use crate::verify::{self, CheckReport};

#[derive(Debug, Parser)]
#[command(name = "bn2", version, about = "Exact computation of the codimension-two Brill-Noether class")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Enumerative counts and the aggregate sums
    Counts {
        #[arg(value_enum)]
        what: CountKind,
        #[command(flatten)]
        p: Params,
    },
    /// List the generators of R^2 in genus g
    Basis {
        #[arg(long)]
        g: i64,
        #[arg(long, value_enum)]
        format: Option<Format>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Export the relation matrix (with evaluated rhs when --k is given)
    Matrix {
        #[arg(long)]
        g: i64,
        #[arg(long)]
        k: Option<i64>,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Solve the relation system at g = 2k
    Solve {
        #[arg(long)]
        k: i64,
        #[arg(long, value_enum)]
        format: Option<Format>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Export the triangularizing column matrix
    Tmatrix {
        #[arg(long)]
        g: i64,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run verification checks and print a JSON report
    Verify {
        #[arg(value_enum)]
        check: CheckKind,
        #[arg(long)]
        k: Option<i64>,
        #[arg(long, default_value_t = 6)]
        k_max: i64,
        #[arg(long)]
        g: Option<i64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum CountKind {
    N,
    M,
    Ell,
    Castelnuovo,
    #[value(name = "T")]
    T,
    #[value(name = "D")]
    D,
    S16,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum CheckKind {
    ClosedForm,
    Pullback,
    M4,
    Trigonal,
    Nonsingular,
    G5,
    Triangularity,
    All,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Debug, Args)]
struct Params {
    #[arg(long)]
    g: Option<i64>,
    #[arg(long)]
    k: Option<i64>,
    #[arg(long)]
    d: Option<i64>,
    #[arg(long, value_parser = parse_index)]
    alpha: Option<SchubertIndex>,
    #[arg(long, value_parser = parse_index)]
    beta: Option<SchubertIndex>,
    #[arg(long)]
    i: Option<i64>,
    #[arg(long)]
    j: Option<i64>,
}

fn parse_index(s: &str) -> Result<SchubertIndex, String> {
    let (a, b) = s.split_once(',').ok_or("expected a0,a1")?;
    let a0 = a.trim().parse::<i64>().map_err(|e| e.to_string())?;
    let a1 = b.trim().parse::<i64>().map_err(|e| e.to_string())?;
    Ok(SchubertIndex::new(a0, a1))
}

/// A failure that maps to an exit code.
enum Failure {
    Usage(String),
}

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure::Usage(e.to_string())
    }
}

fn need(v: Option<i64>, flag: &str) -> Result<i64, Failure> {
    v.ok_or_else(|| Failure::Usage(format!("missing required flag --{flag}")))
}

fn need_index(v: Option<SchubertIndex>, flag: &str) -> Result<SchubertIndex, Failure> {
    v.ok_or_else(|| Failure::Usage(format!("missing required flag --{flag}")))
}

fn counts(what: CountKind, p: &Params) -> Result<String, Failure> {
    let value = match what {
        CountKind::N => count_n(need(p.g, "g")?, need(p.d, "d")?, need_index(p.alpha, "alpha")?)?.to_string(),
        CountKind::M => count_m(need(p.g, "g")?, need(p.d, "d")?, need_index(p.alpha, "alpha")?)?.to_string(),
        CountKind::Ell => count_ell(need(p.g, "g")?, need(p.k, "k")?)?.to_string(),
        CountKind::Castelnuovo => format_rational(&castelnuovo_n(
            need(p.g, "g")?,
            need(p.d, "d")?,
            need_index(p.alpha, "alpha")?,
            need_index(p.beta, "beta")?,
        )?),
        CountKind::T => sum_t(need(p.i, "i")?, need(p.g, "g")?, need(p.k, "k")?)?.to_string(),
        CountKind::D => sum_d(need(p.i, "i")?, need(p.j, "j")?, need(p.g, "g")?, need(p.k, "k")?)?.to_string(),
        CountKind::S16 => sum_s16(need(p.i, "i")?, need(p.g, "g")?, need(p.k, "k")?)?.to_string(),
    };
    Ok(format!("{value}\n"))
}

fn check_genus(g: i64, min: i64) -> Result<(), Failure> {
    if g < min {
        return Err(Failure::Usage(format!("--g must be at least {min}, got {g}")));
    }
    Ok(())
}

fn class_output(e: &ClassExpression, format: Option<Format>) -> String {
    let labels = enumerate_basis(e.genus());
    match format {
        None => labels.iter().map(|l| format!("{l} {}\n", format_rational(&e.get(l)))).collect(),
        Some(Format::Csv) => {
            let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
            w.write_record(["label", "coefficient"]).expect("in-memory write");
            for l in &labels {
                w.write_record([l.to_string(), format_rational(&e.get(l))]).expect("in-memory write");
            }
            String::from_utf8(w.into_inner().expect("in-memory write")).expect("UTF-8")
        }
        Some(Format::Json) => {
            let coeffs: serde_json::Map<String, Value> = labels
                .iter()
                .map(|l| (l.to_string(), Value::String(format_rational(&e.get(l)))))
                .collect();
            pretty(&json!({"g": e.genus(), "coefficients": coeffs}))
        }
    }
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

fn tmatrix_output(g: i64, format: Format) -> Result<String, Failure> {
    let t = build_t(g)?;
    let labels: Vec<String> = enumerate_basis(g).iter().map(ToString::to_string).collect();
    Ok(match format {
        Format::Csv => {
            let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
            let mut header = vec!["label".to_string()];
            header.extend((1..=t.cols()).map(|c| format!("c{c}")));
            w.write_record(&header)?;
            for (i, l) in labels.iter().enumerate() {
                let mut rec = vec![l.clone()];
                rec.extend(t.row(i).iter().map(format_rational));
                w.write_record(&rec)?;
            }
            String::from_utf8(w.into_inner().map_err(|e| e.to_string())?)?
        }
        Format::Json => {
            let cols: Vec<Vec<String>> = (0..t.cols())
                .map(|j| (0..t.rows()).map(|i| format_rational(t.get(i, j))).collect())
                .collect();
            pretty(&json!({"g": g, "labels": labels, "columns": cols}))
        }
    })
}

fn verify_output(check: CheckKind, k: Option<i64>, k_max: i64, g: Option<i64>) -> Result<(String, bool), Failure> {
    if k_max < 3 {
        return Err(Failure::Usage(format!("--k-max must be at least 3, got {k_max}")));
    }
    let ks: Vec<i64> = match k {
        Some(k) if k < 3 => return Err(Failure::Usage(format!("--k must be at least 3, got {k}"))),
        Some(k) => vec![k],
        None => (3..=k_max).collect(),
    };
    let gs: Vec<i64> = match g {
        Some(g) => {
            check_genus(g, 6)?;
            vec![g]
        }
        None => (6..=2 * k_max).collect(),
    };
    let mut reports: Vec<CheckReport> = match check {
        CheckKind::ClosedForm => ks.iter().map(|&k| verify::check_closed_form(k)).collect::<Result<_, _>>()?,
        CheckKind::Pullback => ks.iter().map(|&k| verify::check_pullback(k)).collect::<Result<_, _>>()?,
        CheckKind::M4 => vec![verify::check_m4()],
        CheckKind::Trigonal => vec![verify::check_trigonal_interior()?, verify::check_theorem1()?],
        CheckKind::Nonsingular => gs.iter().map(|&g| verify::check_nonsingular(g)).collect::<Result<_, _>>()?,
        CheckKind::G5 => vec![verify::check_g5_rank()?],
        CheckKind::Triangularity => gs.iter().map(|&g| verify::check_triangularity(g)).collect::<Result<_, _>>()?,
        CheckKind::All => verify::run_all(k_max)?,
    };
    reports.sort_by(|a, b| a.check.cmp(&b.check));
    let failed = reports.iter().any(CheckReport::failed);
    let status = if failed { "fail" } else { "pass" };
    Ok((pretty(&json!({"status": status, "checks": reports})), failed))
}

fn execute(cli: Cli) -> Result<(String, Option<PathBuf>, bool), Failure> {
    Ok(match cli.command {
        Command::Counts { what, p } => (counts(what, &p)?, None, false),
        Command::Basis { g, format, out } => {
            check_genus(g, 5)?;
            let labels: Vec<String> = enumerate_basis(g).iter().map(ToString::to_string).collect();
            let text = match format {
                Some(Format::Json) => pretty(&json!({"g": g, "dimension": basis_dimension(g), "labels": labels})),
                _ => labels.iter().map(|l| format!("{l}\n")).collect(),
            };
            (text, out, false)
        }
        Command::Matrix { g, k, format, out } => {
            check_genus(g, 5)?;
            let system = build_relations(g)?;
            let text = match format {
                Format::Csv => system.to_csv(k)?,
                Format::Json => pretty(&system.to_json(k)?),
            };
            (text, out, false)
        }
        Command::Solve { k, format, out } => {
            if k < 3 {
                return Err(Failure::Usage(format!("--k must be at least 3, got {k}")));
            }
            (class_output(&verify::solve_class(k)?, format), out, false)
        }
        Command::Tmatrix { g, format, out } => {
            check_genus(g, 6)?;
            (tmatrix_output(g, format)?, out, false)
        }
        Command::Verify { check, k, k_max, g, out } => {
            let (text, failed) = verify_output(check, k, k_max, g)?;
            (text, out, failed)
        }
    })
}

/// Runs the command line, writing results to `out` and diagnostics to `err`.
pub fn run_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { out.write_all(text.as_bytes()) } else { err.write_all(text.as_bytes()) };
            return code;
        }
    };
    match execute(cli) {
        Ok((text, path, failed)) => {
            let written = match path {
                Some(p) => std::fs::write(&p, text.as_bytes()),
                None => out.write_all(text.as_bytes()),
            };
            if let Err(e) = written {
                let _ = writeln!(err, "error: {e}");
                return 2;
            }
            i32::from(failed)
        }
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            2
        }
    }
}

pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    run_with(args, &mut std::io::stdout().lock(), &mut std::io::stderr().lock())
}
