//! `tropdiff`: exact computations in valued difference fields, emitting JSON.
//!
//! Exit status: 0 when a result was produced (negative verdicts included),
//! 2 for a mathematical error such as a residue obstruction, 1 for malformed
//! input or usage.

mod exec;
mod request;

use std::io::{BufRead, Write};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::exec::{default_model, execute};
use crate::request::Request;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] tropdiff_core::Error),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) | CliError::Core(tropdiff_core::Error::Parse { .. }) => 1,
            CliError::Core(_) => 2,
        }
    }

    fn diagnostic(&self) -> Value {
        match self {
            CliError::Usage(msg) => json!({"kind": "Usage", "message": msg}),
            CliError::Core(e @ tropdiff_core::Error::Parse { pos, .. }) => {
                json!({"kind": e.kind(), "message": e.to_string(), "position": pos})
            }
            CliError::Core(e) => json!({"kind": e.kind(), "message": e.to_string()}),
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "tropdiff", version, about = "Exact computations in valued difference fields of Hahn series")]
struct Cli {
    /// PC, ISO, or a JSON file {"n", "a", "sigma_gamma"}.
    #[arg(long, global = true)]
    model: Option<String>,
    /// Target valuation, e.g. 4, 7/2 or (1,0).
    #[arg(long, global = true, allow_hyphen_values = true)]
    precision: Option<String>,
    /// Wrap the result in a request/response envelope.
    #[arg(long, global = true)]
    json: bool,
    /// Read newline-delimited JSON requests from FILE (or standard input).
    #[arg(long, value_name = "FILE", num_args = 0..=1, default_missing_value = "-")]
    batch: Option<String>,
    #[command(subcommand)]
    group: Option<Group>,
}

#[derive(Debug, Subcommand)]
enum Group {
    /// Hahn series arithmetic.
    #[command(subcommand)]
    Hahn(HahnCmd),
    /// Tropicalization of Laurent polynomials.
    #[command(subcommand)]
    Trop(TropCmd),
    /// σ-polynomials and Hensel lifting.
    #[command(subcommand)]
    Sigma(SigmaCmd),
    /// Linear systems over Z[σ].
    #[command(subcommand)]
    Zsigma(ZsigmaCmd),
    /// Integer lattices.
    #[command(subcommand)]
    Lattice(LatticeCmd),
    /// Amalgamation of cyclotomic difference fields.
    #[command(subcommand)]
    Amalg(AmalgCmd),
    /// Worked demonstrations.
    #[command(subcommand)]
    Demo(DemoCmd),
}

#[derive(Debug, Args)]
struct Expr {
    #[arg(allow_hyphen_values = true)]
    expr: String,
}

#[derive(Debug, Subcommand)]
enum HahnCmd {
    /// Canonical form of a series expression.
    Eval(Expr),
    /// Valuation.
    V(Expr),
    /// Angular component.
    Ac(Expr),
    /// Apply σ, or σ^k with --power.
    Sigma {
        #[command(flatten)]
        expr: Expr,
        #[arg(long, allow_hyphen_values = true)]
        power: Option<i64>,
    },
    /// Inverse; exact non-monomials need --precision.
    Inv(Expr),
}

#[derive(Debug, Subcommand)]
enum TropCmd {
    /// Tropical roots of a univariate polynomial.
    Roots(Expr),
    /// Initial form at a point of the value group.
    Initial {
        #[command(flatten)]
        expr: Expr,
        /// `1/2` for one variable, `[1, (0,1)]` for several.
        #[arg(long, allow_hyphen_values = true)]
        at: String,
    },
    /// Compare tropical roots with Newton polygon slopes.
    Kapranov(Expr),
}

#[derive(Debug, Subcommand)]
enum SigmaCmd {
    /// Lift an approximate root to --precision.
    Hensel {
        #[command(flatten)]
        expr: Expr,
        #[arg(long, allow_hyphen_values = true)]
        start: String,
    },
    /// Whether (G, a) is in σ-Hensel configuration.
    Config {
        #[command(flatten)]
        expr: Expr,
        #[arg(long, allow_hyphen_values = true)]
        start: String,
    },
    /// (order, top degree, total degree).
    Complexity(Expr),
}

#[derive(Debug, Args)]
struct System {
    /// Matrix over Z[σ], e.g. "[[1-s],[1-s^2]]".
    #[arg(long = "A")]
    a: String,
    /// Right-hand side, a list of series.
    #[arg(long = "b")]
    b: String,
}

#[derive(Debug, Subcommand)]
enum ZsigmaCmd {
    /// Recast A·z = b as a binomial coset.
    Coset(System),
    /// Check a candidate z directly and through the coset.
    Check {
        #[command(flatten)]
        system: System,
        #[arg(long = "z")]
        z: String,
    },
    /// Turn a solution z into a unit solution.
    Transfer {
        #[command(flatten)]
        system: System,
        #[arg(long = "z")]
        z: String,
    },
}

#[derive(Debug, Subcommand)]
enum LatticeCmd {
    /// Saturation of the lattice spanned by the rows.
    Saturate { rows: String },
    /// Lattice of characters vanishing on the connected component.
    CcMap { rows: String },
}

#[derive(Debug, Subcommand)]
enum AmalgCmd {
    /// Decide a problem given as a JSON file or inline JSON.
    Decide { problem: String },
    /// Whether a subfield {"n", "H", "b"} is an amalgamation base.
    Base { subfield: String },
    /// Reduce a valued problem to its residue problem and decide it.
    Reduce { problem: String },
}

#[derive(Debug, Subcommand)]
enum DemoCmd {
    /// The ball around a root of x² + 1 = t misses the fixed field.
    FixedField,
}

impl Group {
    fn into_request(self) -> Request {
        match self {
            Group::Hahn(c) => match c {
                HahnCmd::Eval(e) => Request::new("hahn eval").arg(e.expr),
                HahnCmd::V(e) => Request::new("hahn v").arg(e.expr),
                HahnCmd::Ac(e) => Request::new("hahn ac").arg(e.expr),
                HahnCmd::Sigma { expr, power } => {
                    Request::new("hahn sigma").arg(expr.expr).opt("power", power.map(|p| p.to_string()))
                }
                HahnCmd::Inv(e) => Request::new("hahn inv").arg(e.expr),
            },
            Group::Trop(c) => match c {
                TropCmd::Roots(e) => Request::new("trop roots").arg(e.expr),
                TropCmd::Initial { expr, at } => Request::new("trop initial").arg(expr.expr).opt("at", Some(at)),
                TropCmd::Kapranov(e) => Request::new("trop kapranov").arg(e.expr),
            },
            Group::Sigma(c) => match c {
                SigmaCmd::Hensel { expr, start } => {
                    Request::new("sigma hensel").arg(expr.expr).opt("start", Some(start))
                }
                SigmaCmd::Config { expr, start } => {
                    Request::new("sigma config").arg(expr.expr).opt("start", Some(start))
                }
                SigmaCmd::Complexity(e) => Request::new("sigma complexity").arg(e.expr),
            },
            Group::Zsigma(c) => {
                let (name, system, z) = match c {
                    ZsigmaCmd::Coset(s) => ("zsigma coset", s, None),
                    ZsigmaCmd::Check { system, z } => ("zsigma check", system, Some(z)),
                    ZsigmaCmd::Transfer { system, z } => ("zsigma transfer", system, Some(z)),
                };
                Request::new(name).opt("A", Some(system.a)).opt("b", Some(system.b)).opt("z", z)
            }
            Group::Lattice(c) => match c {
                LatticeCmd::Saturate { rows } => Request::new("lattice saturate").arg(rows),
                LatticeCmd::CcMap { rows } => Request::new("lattice cc-map").arg(rows),
            },
            Group::Amalg(c) => match c {
                AmalgCmd::Decide { problem } => Request::new("amalg decide").arg(problem),
                AmalgCmd::Base { subfield } => Request::new("amalg base").arg(subfield),
                AmalgCmd::Reduce { problem } => Request::new("amalg reduce").arg(problem),
            },
            Group::Demo(DemoCmd::FixedField) => Request::new("demo fixed-field"),
        }
    }
}

/// Runs one request; returns the bare result or diagnostics, the full
/// envelope, and the exit code.
fn respond(req: &Request) -> (Value, Value, u8) {
    let outcome = execute(req);
    let model = req.model.clone().unwrap_or_else(|| json!(default_model(req.command.trim())));
    let mut envelope = json!({
        "command": req.command,
        "model": model,
        "arguments": req.arguments,
        "options": req.options,
    });
    match outcome {
        Ok(result) => {
            envelope["result"] = result.clone();
            (result, envelope, 0)
        }
        Err(e) => {
            let diagnostics = json!([e.diagnostic()]);
            envelope["diagnostics"] = diagnostics.clone();
            (json!({"diagnostics": diagnostics}), envelope, e.exit_code())
        }
    }
}

fn malformed_line(line_no: usize, err: &serde_json::Error) -> (Value, u8) {
    let e = CliError::Usage(format!("line {line_no}: {err}"));
    (json!({"line": line_no, "diagnostics": [e.diagnostic()]}), e.exit_code())
}

/// Evaluates every request, possibly in parallel, and prints responses in
/// input order. The exit code is the largest of the per-request codes.
fn run_batch(source: &str, cli: &Cli) -> Result<u8, CliError> {
    let lines: Vec<String> = if source == "-" {
        std::io::stdin().lock().lines().collect::<Result<_, _>>()
    } else {
        std::fs::read_to_string(source).map(|s| s.lines().map(str::to_string).collect())
    }
    .map_err(|e| CliError::Usage(format!("cannot read batch input {source}: {e}")))?;
    let numbered: Vec<(usize, &String)> =
        lines.iter().enumerate().filter(|(_, l)| !l.trim().is_empty()).map(|(i, l)| (i + 1, l)).collect();
    let responses: Vec<(Value, u8)> = numbered
        .par_iter()
        .map(|(line_no, line)| match serde_json::from_str::<Request>(line) {
            Ok(mut req) => {
                if req.model.is_none() {
                    req.model = cli.model.clone().map(Value::String);
                }
                if let Some(p) = &cli.precision {
                    req.options.entry("precision".into()).or_insert_with(|| p.clone());
                }
                let (_, envelope, code) = respond(&req);
                (envelope, code)
            }
            Err(e) => malformed_line(*line_no, &e),
        })
        .collect();
    let mut out = std::io::stdout().lock();
    let mut worst = 0;
    for (v, code) in responses {
        writeln!(out, "{v}").map_err(|e| CliError::Usage(e.to_string()))?;
        worst = worst.max(code);
    }
    Ok(worst)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    if let Some(source) = &cli.batch {
        if cli.group.is_some() {
            eprintln!("tropdiff: --batch cannot be combined with a subcommand");
            return ExitCode::from(1);
        }
        return match run_batch(source, &cli) {
            Ok(code) => ExitCode::from(code),
            Err(e) => {
                eprintln!("tropdiff: {e}");
                ExitCode::from(e.exit_code())
            }
        };
    }
    let Some(group) = cli.group else {
        eprintln!("tropdiff: a subcommand or --batch is required (see --help)");
        return ExitCode::from(1);
    };
    let req = group.into_request().model(cli.model).opt("precision", cli.precision);
    let (bare, envelope, code) = respond(&req);
    println!("{}", if cli.json { &envelope } else { &bare });
    if code != 0 {
        if let Some(msg) = bare["diagnostics"][0]["message"].as_str() {
            eprintln!("tropdiff: {msg}");
        }
    }
    ExitCode::from(code)
}
