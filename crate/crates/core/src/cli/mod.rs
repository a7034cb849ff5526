//! The `coprimality` command-line tool.
//!
//! Every successful command writes one JSON document (or TSV for `table`) to
//! stdout. Domain errors exit with 1 and a one-line diagnostic on stderr;
//! usage errors exit with 2.

mod verify;

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::counting::{self, error_table, CountResult, Method};
use crate::density::{density, DEFAULT_PRIME_BOUND};
use crate::format::{float17, Float17};
use crate::graph::{parse_graph, Graph};
use crate::multiplicative::{f_enumerate, f_multiplicative, ArithmeticError};
use crate::polynomial::compute_poly;
use crate::Error;

pub use verify::{
    coprime_pairs, ratio_samples, ratios_bounded, verify, RatioSample, SuiteReport, VerifyOptions,
    VerifyReport,
};

#[derive(Debug, Parser)]
#[command(
    name = "coprimality",
    version,
    about = "Count tuples under pairwise coprimality constraints"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Coefficients of Q_G (or Q_G^+ with --plus).
    Poly {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        plus: bool,
    },
    /// Truncated Euler product for the density with its tail bound.
    Density {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long, default_value_t = DEFAULT_PRIME_BOUND)]
        prime_bound: u64,
    },
    /// Exact number of constrained tuples in [1, x]^v.
    Count {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        x: u64,
        #[arg(long, value_enum, default_value_t = CountMethod::Both)]
        method: CountMethod,
        #[arg(long, default_value_t = 1)]
        threads: usize,
    },
    /// Value of f_G(m) (or f_G^+(m) with --plus).
    F {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        m: u64,
        #[arg(long)]
        plus: bool,
    },
    /// Main-term error table over several x.
    Table {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long, value_delimiter = ',', required = true)]
        xs: Vec<u64>,
        #[arg(long, default_value_t = DEFAULT_PRIME_BOUND)]
        prime_bound: u64,
        #[arg(long, value_enum, default_value_t = Format::Tsv)]
        format: Format,
        #[arg(long, default_value_t = 1)]
        threads: usize,
    },
    /// Run the built-in consistency suites.
    Verify {
        #[arg(long, default_value_t = 4, value_parser = clap::value_parser!(u8).range(2..=4))]
        max_vertices: u8,
        #[arg(long, default_value_t = 40, value_parser = clap::value_parser!(u64).range(1..))]
        max_x: u64,
        #[arg(long, default_value_t = DEFAULT_PRIME_BOUND)]
        prime_bound: u64,
        #[arg(long, default_value_t = 1)]
        threads: usize,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CountMethod {
    Bruteforce,
    Moebius,
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Tsv,
}

/// Parses `args` (program name first), runs the command, and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let rendered = e.render().to_string();
            let sink: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = sink.write_all(rendered.as_bytes());
            return code;
        }
    };
    match execute(&cli.command, out) {
        Ok(true) => 0,
        Ok(false) => 1,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            1
        }
    }
}

fn read_graph(path: &Path) -> Result<Graph, Error> {
    let text =
        std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    Ok(parse_graph(&text)?)
}

fn emit_json(out: &mut dyn Write, value: &impl Serialize) -> Result<(), Error> {
    let text = serde_json::to_string(value).map_err(|e| Error::Io(e.to_string()))?;
    writeln!(out, "{text}").map_err(|e| Error::Io(e.to_string()))
}

#[derive(Serialize)]
struct PolyOutput {
    signed: bool,
    coefficients: Vec<String>,
}

#[derive(Serialize)]
struct DensityOutput {
    value: Float17,
    prime_bound: u64,
    tail_bound: Float17,
    float_budget: Float17,
}

#[derive(Serialize)]
struct CountOutput {
    x: u64,
    method: &'static str,
    count: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    methods_agree: Option<bool>,
}

#[derive(Serialize)]
struct FOutput {
    m: u64,
    signed: bool,
    value: String,
    path: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    paths_agree: Option<bool>,
}

#[derive(Serialize)]
struct TableRow {
    x: u64,
    g: String,
    main_term: Float17,
    abs_error: Float17,
    ratio: Float17,
    method: String,
}

#[derive(Serialize)]
struct TableOutput {
    log: &'static str,
    max_degree: usize,
    prime_bound: u64,
    density: Float17,
    rows: Vec<TableRow>,
}

/// Returns `Ok(false)` when the command ran but reports a failure.
fn execute(command: &Command, out: &mut dyn Write) -> Result<bool, Error> {
    match command {
        Command::Poly { graph, plus } => {
            let g = read_graph(graph)?;
            let poly = compute_poly(&g, !plus)?;
            emit_json(
                out,
                &PolyOutput {
                    signed: poly.is_signed(),
                    coefficients: poly.coefficients().iter().map(i128::to_string).collect(),
                },
            )?;
        }
        Command::Density { graph, prime_bound } => {
            let g = read_graph(graph)?;
            let est = density(&g, *prime_bound)?;
            emit_json(
                out,
                &DensityOutput {
                    value: Float17(est.value),
                    prime_bound: est.prime_bound,
                    tail_bound: Float17(est.tail_bound),
                    float_budget: Float17(est.float_budget),
                },
            )?;
        }
        Command::Count {
            graph,
            x,
            method,
            threads,
        } => {
            let g = read_graph(graph)?;
            let (result, name, agree): (CountResult, _, _) = match method {
                CountMethod::Bruteforce => (
                    counting::count(&g, *x, Method::Bruteforce, *threads)?,
                    "bruteforce",
                    None,
                ),
                CountMethod::Moebius => (
                    counting::count(&g, *x, Method::Moebius, *threads)?,
                    "moebius",
                    None,
                ),
                CountMethod::Both => (counting::count_both(&g, *x, *threads)?, "both", Some(true)),
            };
            emit_json(
                out,
                &CountOutput {
                    x: result.x,
                    method: name,
                    count: result.count.to_string(),
                    methods_agree: agree,
                },
            )?;
        }
        Command::F { graph, m, plus } => {
            let g = read_graph(graph)?;
            let signed = !plus;
            let multiplicative = compute_poly(&g, signed)
                .map_err(Error::from)
                .and_then(|poly| Ok(f_multiplicative(&poly, *m)?));
            let enumerated = match f_enumerate(&g, *m, signed) {
                Err(ArithmeticError::Infeasible { .. }) => None,
                other => Some(other?),
            };
            let output = match (enumerated, multiplicative) {
                (Some(a), Ok(b)) => {
                    if a != b {
                        return Err(Error::Inconsistent(format!(
                            "f({m}) disagrees: enumeration {a}, multiplicative {b}"
                        )));
                    }
                    FOutput {
                        m: *m,
                        signed,
                        value: a.to_string(),
                        path: "both",
                        paths_agree: Some(true),
                    }
                }
                (Some(a), Err(_)) => FOutput {
                    m: *m,
                    signed,
                    value: a.to_string(),
                    path: "enumerate",
                    paths_agree: None,
                },
                (None, Ok(b)) => FOutput {
                    m: *m,
                    signed,
                    value: b.to_string(),
                    path: "multiplicative",
                    paths_agree: None,
                },
                (None, Err(e)) => return Err(e),
            };
            emit_json(out, &output)?;
        }
        Command::Table {
            graph,
            xs,
            prime_bound,
            format,
            threads,
        } => {
            let g = read_graph(graph)?;
            let est = density(&g, *prime_bound)?;
            let rows = error_table(&g, xs, &est, *threads)?;
            match format {
                Format::Tsv => {
                    let mut text = String::from("x\tg\tmain_term\tabs_error\tratio\n");
                    for r in &rows {
                        text.push_str(&format!(
                            "{}\t{}\t{}\t{}\t{}\n",
                            r.x,
                            r.g,
                            float17(r.main_term),
                            float17(r.abs_error),
                            float17(r.ratio)
                        ));
                    }
                    out.write_all(text.as_bytes())
                        .map_err(|e| Error::Io(e.to_string()))?;
                }
                Format::Json => emit_json(
                    out,
                    &TableOutput {
                        log: "natural",
                        max_degree: g.max_degree(),
                        prime_bound: est.prime_bound,
                        density: Float17(est.value),
                        rows: rows
                            .iter()
                            .map(|r| TableRow {
                                x: r.x,
                                g: r.g.to_string(),
                                main_term: Float17(r.main_term),
                                abs_error: Float17(r.abs_error),
                                ratio: Float17(r.ratio),
                                method: r.method.to_string(),
                            })
                            .collect(),
                    },
                )?,
            }
        }
        Command::Verify {
            max_vertices,
            max_x,
            prime_bound,
            threads,
        } => {
            let report = verify(&VerifyOptions {
                max_vertices: *max_vertices as usize,
                max_x: *max_x,
                prime_bound: *prime_bound,
                threads: *threads,
            })?;
            emit_json(out, &report)?;
            return Ok(report.passed());
        }
    }
    Ok(true)
}
