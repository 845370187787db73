//! Command-line front-end for spexlab.
//!
//! Every run produces exactly one result document (JSON by default, CSV for
//! tabular results). Exit codes: 0 success, 1 invalid input or flags,
//! 2 solver non-convergence, 3 search refused by the edge cap,
//! 4 a `verify` check failed.

// `!(x > a)` is used on purpose so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::io::Read;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use spexlab::containment::{contains_sub, is_cancellative};
use spexlab::hypergraph::find_pattern_coloring;
use spexlab::search::{density_csv, density_trend, ex_search, spex_search, SearchOptions, SearchResult};
use spexlab::spectral::{spectral_radius, Shift};
use spexlab::stability::{peel, PeelParams, PeelStop};
use spexlab::{Error, Hypergraph, SolverOptions};

pub mod output;
pub mod source;
pub mod verify;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 1;
pub const EXIT_NOT_CONVERGED: i32 = 2;
pub const EXIT_CAP: i32 = 3;
pub const EXIT_CHECK_FAILED: i32 = 4;

#[derive(Parser, Debug)]
#[command(name = "spexlab", version, about = "Spectral Turán experiments on uniform hypergraphs")]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args, Debug)]
struct Common {
    /// Order of the spectral radius; defaults to the uniformity k.
    #[arg(long, global = true)]
    alpha: Option<f64>,
    #[arg(long, global = true, default_value_t = 1e-10)]
    tol: f64,
    #[arg(long = "max-iter", global = true, default_value_t = 200_000)]
    max_iter: usize,
    #[arg(long, global = true, default_value_t = 8)]
    starts: usize,
    #[arg(long, global = true, default_value_t = 0xA1FA)]
    seed: u64,
    /// auto, degree, or a nonnegative number.
    #[arg(long, global = true, default_value = "auto")]
    shift: String,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Write the result document here instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    /// Worker threads; defaults to the available parallelism.
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Run searches even when C(n, k) exceeds the edge cap.
    #[arg(long = "override-cap", global = true)]
    override_cap: bool,
    /// Allow the heuristic spex prune; results are marked incomplete.
    #[arg(long = "unsafe-prune", global = true)]
    unsafe_prune: bool,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Format {
    Json,
    Csv,
    /// The plain edge-list encoding; `construct` only.
    Text,
}

/// Where a single hypergraph comes from.
#[derive(Args, Debug)]
struct Input {
    /// File path, `-` for stdin, or a construction such as `turan:6:3:3`.
    input: Option<String>,
    #[arg(long, conflicts_with = "input")]
    host: Option<String>,
    /// Named construction with its parameters, e.g. `--construct b4 10`.
    #[arg(long, num_args = 1.., value_name = "NAME ARGS", conflicts_with_all = ["input", "host"])]
    construct: Option<Vec<String>>,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Build a named construction and print it.
    Construct {
        #[arg(required = true, num_args = 1.., value_name = "NAME ARGS")]
        tokens: Vec<String>,
    },
    /// Spectral radius with certificate.
    Lambda(Input),
    /// Check a host for copies of forbidden hypergraphs.
    Free {
        #[command(flatten)]
        input: Input,
        #[arg(long, required = true, num_args = 1..)]
        forbid: Vec<String>,
    },
    /// Test whether no edge contains the symmetric difference of two others.
    Cancellative(Input),
    /// Search for a coloring of the host that respects a pattern.
    Color {
        #[command(flatten)]
        input: Input,
        /// Pattern JSON file, `complete:L:K`, or `bipartite-like:H`.
        #[arg(long, required = true)]
        pattern: String,
    },
    /// Exact Turán number by exhaustive search.
    Ex {
        n: usize,
        k: usize,
        family: Vec<String>,
    },
    /// Largest spectral radius over F-free graphs by exhaustive search.
    Spex {
        n: usize,
        k: usize,
        family: Vec<String>,
    },
    /// ex(n) / C(n, k) over a range of n.
    Trend {
        k: usize,
        from: usize,
        to: usize,
        family: Vec<String>,
    },
    /// Repeatedly delete the vertex of smallest eigenvector entry.
    Peel {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        epsilon: f64,
        /// Turán density of the forbidden family.
        #[arg(long)]
        pi: f64,
        /// Stop at this many vertices; defaults to k.
        #[arg(long)]
        floor: Option<usize>,
    },
    /// Run a built-in verification suite.
    Verify {
        #[arg(value_parser = clap::builder::PossibleValuesParser::new(verify::SUITES))]
        suite: String,
    },
}

/// The result of one invocation.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub code: i32,
    pub document: String,
    /// Set when the document went to `--output` rather than stdout.
    pub written_to: Option<PathBuf>,
}

struct Failure {
    code: i32,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::SearchCapExceeded { .. } => EXIT_CAP,
            Error::InvalidInput(_) | Error::Parse(_) => EXIT_INVALID,
        };
        Failure { code, message: e.to_string() }
    }
}

fn invalid(msg: impl Into<String>) -> Failure {
    Failure { code: EXIT_INVALID, message: msg.into() }
}

type Doc = (i32, String);

fn json_doc(code: i32, v: Value) -> Doc {
    (code, output::render_json(v))
}

/// Parses `argv` (including the program name), runs the command and
/// returns the exit status and result document. `stdin` backs `-` inputs.
pub fn run<I, T>(argv: I, stdin: &mut (dyn Read + Send)) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_INVALID,
            };
            let document = if code == EXIT_OK {
                e.to_string()
            } else {
                output::render_json(json!({"error": e.to_string(), "exit_code": code}))
            };
            return Outcome { code, document, written_to: None };
        }
    };
    let output = cli.common.output.clone();
    let (code, document) = match dispatch_in_pool(&cli, stdin) {
        Ok(doc) => doc,
        Err(f) => json_doc(f.code, json!({"error": f.message, "exit_code": f.code})),
    };
    if let Some(path) = output {
        if let Err(e) = std::fs::write(&path, &document) {
            let code = EXIT_INVALID;
            let msg = format!("writing {}: {e}", path.display());
            return Outcome { code, document: output::render_json(json!({"error": msg, "exit_code": code})), written_to: None };
        }
        return Outcome { code, document, written_to: Some(path) };
    }
    Outcome { code, document, written_to: None }
}

fn dispatch_in_pool(cli: &Cli, stdin: &mut (dyn Read + Send)) -> Result<Doc, Failure> {
    match cli.common.threads {
        Some(0) => Err(invalid("--threads must be positive")),
        Some(t) => {
            let pool = rayon::ThreadPoolBuilder::new().num_threads(t).build().map_err(|e| invalid(e.to_string()))?;
            pool.install(|| dispatch(cli, stdin))
        }
        None => dispatch(cli, stdin),
    }
}

fn solver_options(c: &Common) -> Result<SolverOptions, Failure> {
    let shift = match c.shift.as_str() {
        "auto" => Shift::Auto,
        "degree" => Shift::DegreeBound,
        s => match s.parse::<f64>() {
            Ok(v) if v.is_finite() && v >= 0.0 => Shift::Explicit(v),
            _ => return Err(invalid(format!("--shift must be auto, degree or a nonnegative number, got `{s}`"))),
        },
    };
    if !(c.tol > 0.0) || c.max_iter == 0 || c.starts == 0 {
        return Err(invalid("--tol, --max-iter and --starts must be positive"));
    }
    Ok(SolverOptions { tol: c.tol, max_iter: c.max_iter, starts: c.starts, seed: c.seed, shift })
}

fn search_options(c: &Common) -> Result<SearchOptions, Failure> {
    Ok(SearchOptions {
        override_cap: c.override_cap,
        unsafe_prune: c.unsafe_prune,
        solver: solver_options(c)?,
        ..SearchOptions::default()
    })
}

fn alpha_for(c: &Common, k: usize) -> f64 {
    c.alpha.unwrap_or(k as f64)
}

fn load_input(input: &Input, stdin: &mut (dyn Read + Send)) -> Result<Hypergraph, Failure> {
    match (&input.input, &input.host, &input.construct) {
        (Some(s), _, _) | (_, Some(s), _) => Ok(source::load(s, stdin)?),
        (_, _, Some(tokens)) => Ok(source::construct(tokens, stdin)?),
        _ => Err(invalid("no hypergraph given: pass a file, `-`, --host or --construct")),
    }
}

fn load_family(srcs: &[String], stdin: &mut (dyn Read + Send)) -> Result<Vec<Hypergraph>, Failure> {
    srcs.iter().map(|s| source::load(s, stdin).map_err(Failure::from)).collect()
}

fn require_json(c: &Common, what: &str) -> Result<(), Failure> {
    if c.format != Format::Json {
        return Err(invalid(format!("{what} has no tabular form; use --format json")));
    }
    Ok(())
}

fn search_doc(kind: &str, r: &SearchResult, extra: Value) -> Doc {
    let mut v = json!({
        "kind": kind,
        "optimum": r.optimum.value(),
        "witnesses": r.witnesses,
        "nodes_explored": r.nodes_explored,
        "complete": r.complete,
        "solver_failures": r.solver_failures,
    });
    v.as_object_mut().unwrap().extend(extra.as_object().cloned().unwrap_or_default());
    let code = if r.solver_failures > 0 { EXIT_NOT_CONVERGED } else { EXIT_OK };
    json_doc(code, v)
}

fn dispatch(cli: &Cli, stdin: &mut (dyn Read + Send)) -> Result<Doc, Failure> {
    let c = &cli.common;
    if let Some(a) = c.alpha {
        if !(a > 1.0) || !a.is_finite() {
            return Err(invalid(format!("--alpha must be a finite number above 1, got {a}")));
        }
    }
    if c.format == Format::Text && !matches!(cli.cmd, Cmd::Construct { .. }) {
        return Err(invalid("--format text is only available for construct"));
    }
    match &cli.cmd {
        Cmd::Construct { tokens } => {
            let h = source::construct(tokens, stdin)?;
            match c.format {
                Format::Json => Ok(json_doc(EXIT_OK, serde_json::to_value(&h).unwrap())),
                Format::Text => Ok((EXIT_OK, h.to_text())),
                Format::Csv => Ok((
                    EXIT_OK,
                    output::render_csv(
                        &["edge", "vertices"],
                        h.edges().iter().enumerate().map(|(i, e)| vec![i.to_string(), e.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(" ")]),
                    ),
                )),
            }
        }
        Cmd::Lambda(input) => {
            let h = load_input(input, stdin)?;
            let alpha = alpha_for(c, h.k());
            let r = spectral_radius(&h, alpha, &solver_options(c)?)?;
            let code = if r.converged { EXIT_OK } else { EXIT_NOT_CONVERGED };
            match c.format {
                Format::Json => {
                    let mut v = r.to_json_value(&h);
                    v.as_object_mut().unwrap().insert("alpha".into(), alpha.into());
                    Ok(json_doc(code, v))
                }
                Format::Csv | Format::Text => Ok((
                    code,
                    output::render_csv(
                        &["vertex", "entry"],
                        r.vector.entries.iter().enumerate().map(|(i, x)| vec![i.to_string(), output::fmt_float(*x)]),
                    ),
                )),
            }
        }
        Cmd::Free { input, forbid } => {
            require_json(c, "free")?;
            let h = load_input(input, stdin)?;
            let family = load_family(forbid, stdin)?;
            let mut copies = Vec::new();
            for (src, f) in forbid.iter().zip(&family) {
                let hit = contains_sub(&h, f)?;
                copies.push(json!({"forbidden": src, "contained": hit.is_some(), "embedding": hit.map(|e| e.map)}));
            }
            let free = copies.iter().all(|c| c["contained"] == false);
            Ok(json_doc(EXIT_OK, json!({"free": free, "n": h.n(), "k": h.k(), "num_edges": h.num_edges(), "checks": copies})))
        }
        Cmd::Cancellative(input) => {
            require_json(c, "cancellative")?;
            let h = load_input(input, stdin)?;
            Ok(json_doc(EXIT_OK, json!({"cancellative": is_cancellative(&h), "n": h.n(), "k": h.k(), "num_edges": h.num_edges()})))
        }
        Cmd::Color { input, pattern } => {
            require_json(c, "color")?;
            let h = load_input(input, stdin)?;
            let p = source::load_pattern(pattern)?;
            let col = find_pattern_coloring(&h, &p)?;
            Ok(json_doc(EXIT_OK, json!({"colorable": col.is_some(), "coloring": col.map(|c| c.colors), "pattern": p})))
        }
        Cmd::Ex { n, k, family } => {
            require_json(c, "ex")?;
            let fam = load_family(family, stdin)?;
            let r = ex_search(*n, *k, &fam, &search_options(c)?)?;
            Ok(search_doc("ex", &r, json!({"n": n, "k": k, "family": family})))
        }
        Cmd::Spex { n, k, family } => {
            require_json(c, "spex")?;
            let fam = load_family(family, stdin)?;
            let alpha = alpha_for(c, *k);
            let r = spex_search(*n, *k, &fam, alpha, &search_options(c)?)?;
            Ok(search_doc("spex", &r, json!({"n": n, "k": k, "alpha": alpha, "family": family})))
        }
        Cmd::Trend { k, from, to, family } => {
            let fam = load_family(family, stdin)?;
            let pts = density_trend(&fam, *k, *from..=*to, &search_options(c)?)?;
            match c.format {
                Format::Json => Ok(json_doc(EXIT_OK, json!({"k": k, "family": family, "points": pts}))),
                Format::Csv | Format::Text => Ok((EXIT_OK, density_csv(&pts))),
            }
        }
        Cmd::Peel { input, epsilon, pi, floor } => {
            let h = load_input(input, stdin)?;
            let params = PeelParams::new(alpha_for(c, h.k()), *epsilon, *pi, h.k())?;
            let trace = peel(&h, &params, floor.unwrap_or(h.k()), &solver_options(c)?)?;
            let code = if trace.terminated_reason == PeelStop::SolverFailure { EXIT_NOT_CONVERGED } else { EXIT_OK };
            match c.format {
                Format::Json => {
                    let mut v = serde_json::to_value(&trace).unwrap();
                    let obj = v.as_object_mut().unwrap();
                    obj.insert("params".into(), json!({"alpha": params.alpha, "epsilon": params.epsilon, "pi": params.pi, "k": params.k,
                        "eps_prime": params.eps_prime(), "eps_double_prime": params.eps_double_prime()}));
                    Ok(json_doc(code, v))
                }
                Format::Csv | Format::Text => Ok((code, trace.to_csv())),
            }
        }
        Cmd::Verify { suite } => {
            let checks = verify::run_suite(suite, &solver_options(c)?)?;
            let failed: Vec<&str> = checks.iter().filter(|c| !c.pass).map(|c| c.name.as_str()).collect();
            let code = if failed.is_empty() { EXIT_OK } else { EXIT_CHECK_FAILED };
            for ch in &checks {
                eprintln!("{} {}", if ch.pass { "PASS" } else { "FAIL" }, ch.name);
            }
            match c.format {
                Format::Json => Ok(json_doc(
                    code,
                    json!({"suite": suite, "passed": checks.len() - failed.len(), "failed": failed, "all_pass": failed.is_empty(), "checks": checks}),
                )),
                Format::Csv | Format::Text => Ok((
                    code,
                    output::render_csv(
                        &["check", "pass", "detail"],
                        checks.iter().map(|ch| vec![ch.name.clone(), ch.pass.to_string(), output::round_floats(ch.detail.clone()).to_string()]),
                    ),
                )),
            }
        }
    }
}
