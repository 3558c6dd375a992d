//! Argument parsing and subcommand dispatch.

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use ngp_core::bargmann::{self, compute_um, spectrum_points};
use ngp_core::invariants::{decompose_invariant, fundamental_invariants, DEGREE_CAP};
use ngp_core::pairs::{harmonic_projection, is_harmonic, PairId};
use ngp_core::Rational;
use serde_json::{json, Value};

use crate::cache;
use crate::error::{CliError, CliResult};
use crate::json::{self, poly_to_json};
use crate::suite::{self, Depth};

#[derive(Parser, Debug)]
#[command(name = "ngp", version, about = "Exact invariant theory and Bargmann-Fock checks for nilpotent Gelfand pairs")]
pub struct Cli {
    /// Write the JSON result here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Supported pairs.
    Pairs {
        #[command(subcommand)]
        action: PairsAction,
    },
    /// Fundamental invariants of a pair.
    Invariants {
        #[command(subcommand)]
        action: InvariantsAction,
    },
    /// Decompose an invariant polynomial in the canonical basis.
    Decompose {
        #[command(flatten)]
        pair: PairArg,
        #[arg(long = "in")]
        input: PathBuf,
    },
    /// Project the (m, m) part of a polynomial onto harmonics.
    Harmonic {
        #[command(flatten)]
        pair: PairArg,
        #[arg(long)]
        m: u32,
        #[arg(long = "in")]
        input: PathBuf,
    },
    /// Spectral points ξ(λ, μ) of every block with s ≤ smax.
    Spectrum {
        #[command(flatten)]
        pair: PairArg,
        /// Comma separated nonzero rationals, e.g. `1,2,-1/2`.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
        lambda: Vec<Rational>,
        #[arg(long, default_value_t = 4)]
        smax: u32,
        /// Flag membership in S_m.
        #[arg(long)]
        sm: Option<u32>,
    },
    /// Interpolate u_m from the spectrum of U_m.
    Um {
        #[command(flatten)]
        pair: PairArg,
        #[arg(long)]
        m: u32,
        /// Sample cap on s; defaults to the smallest cap that determines u_m.
        #[arg(long)]
        smax: Option<u32>,
    },
    /// Run the verification suite.
    Verify {
        #[command(subcommand)]
        action: VerifyAction,
    },
}

#[derive(Subcommand, Debug)]
pub enum PairsAction {
    List,
}

#[derive(Subcommand, Debug)]
pub enum InvariantsAction {
    Build {
        #[command(flatten)]
        pair: PairArg,
    },
}

#[derive(Subcommand, Debug)]
pub enum VerifyAction {
    All {
        /// Restrict to these pairs (repeatable); default is all four.
        #[arg(long)]
        pair: Vec<PairId>,
        /// Raise the caps to degree 10, s ≤ 6, m ≤ 3.
        #[arg(long)]
        deep: bool,
        /// Run only these checks (repeatable).
        #[arg(long)]
        check: Vec<String>,
    },
}

#[derive(Args, Debug)]
pub struct PairArg {
    /// One of L6:n=2, L6:n=3, L8:n=2, L8:n=3.
    #[arg(long)]
    pub pair: PairId,
}

/// A finished command: its JSON and whether it counts as a pass.
pub struct Output {
    pub json: Value,
    pub passed: bool,
}

impl Output {
    fn ok(json: Value) -> Output {
        Output { json, passed: true }
    }
}

pub fn parse<I, T>(argv: I) -> CliResult<Cli>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    Cli::try_parse_from(argv).map_err(|e| CliError::Usage(e.render().to_string()))
}

pub fn execute(cli: &Cli) -> CliResult<Output> {
    match &cli.command {
        Command::Pairs { action: PairsAction::List } => Ok(Output::ok(pairs_list())),
        Command::Invariants { action: InvariantsAction::Build { pair } } => Ok(Output::ok(invariants_build(pair.pair))),
        Command::Decompose { pair, input } => decompose(pair.pair, input).map(Output::ok),
        Command::Harmonic { pair, m, input } => harmonic(pair.pair, *m, input).map(Output::ok),
        Command::Spectrum { pair, lambda, smax, sm } => spectrum(pair.pair, lambda, *smax, *sm).map(Output::ok),
        Command::Um { pair, m, smax } => um(pair.pair, *m, *smax).map(Output::ok),
        Command::Verify { action: VerifyAction::All { pair, deep, check } } => verify(pair, *deep, check),
    }
}

/// Full run: parse, execute, write. Returns the process exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            // help and version go to stdout and succeed
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    if let Err(e) = configure_threads() {
        eprintln!("{}", e);
        return e.exit_code();
    }
    match execute(&cli) {
        Ok(out) => {
            let text = json::pretty(&out.json);
            if let Err(e) = emit(cli.out.as_deref(), &text) {
                eprintln!("{}", e);
                return e.exit_code();
            }
            if out.passed {
                0
            } else {
                1
            }
        }
        Err(e) => {
            eprintln!("error: {}", e);
            e.exit_code()
        }
    }
}

fn emit(out: Option<&std::path::Path>, text: &str) -> CliResult<()> {
    match out {
        Some(p) => std::fs::write(p, text).map_err(|e| CliError::Io(format!("{}: {}", p.display(), e))),
        None => {
            print!("{}", text);
            Ok(())
        }
    }
}

/// Applies `NGP_THREADS` to the global rayon pool.
pub fn configure_threads() -> CliResult<()> {
    let Ok(v) = std::env::var("NGP_THREADS") else {
        return Ok(());
    };
    let n: usize = v.trim().parse().ok().filter(|&n| n > 0).ok_or_else(|| CliError::Usage(format!("NGP_THREADS must be a positive integer, got {:?}", v)))?;
    // a second call in the same process keeps the first pool
    let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    Ok(())
}

fn pairs_list() -> Value {
    let pairs: Vec<Value> = PairId::ALL
        .iter()
        .map(|&id| {
            let p = cache::pair(id);
            json!({
                "id": id.to_string(),
                "line": id.line,
                "n": id.n,
                "kappa": p.kappa,
                "nu1": p.nu1,
                "d0": p.d0,
                "generators": p.generators.iter().map(|g| g.name.clone()).collect::<Vec<_>>(),
            })
        })
        .collect();
    json!({ "pairs": pairs })
}

fn invariants_build(id: PairId) -> Value {
    let pair = cache::pair(id);
    let cat = fundamental_invariants(&pair);
    let kinds: Vec<&str> = cat.r.iter().map(|_| "r").chain(cat.q.iter().map(|_| "q")).chain(cat.p.iter().map(|_| "p")).collect();
    let list: Vec<Value> = cat
        .named()
        .iter()
        .zip(kinds)
        .map(|(ni, kind)| {
            json!({
                "name": ni.name,
                "kind": kind,
                "degree": [ni.degree.0, ni.degree.1, ni.degree.2],
                "display": ni.poly.to_string(),
                "poly": poly_to_json(&ni.poly),
            })
        })
        .collect();
    json!({ "pair": id.to_string(), "invariants": list })
}

fn decompose(id: PairId, input: &std::path::Path) -> CliResult<Value> {
    let pair = cache::pair(id);
    let g = json::read_poly(input)?;
    let cat = fundamental_invariants(&pair);
    let dec = decompose_invariant(&pair, &g)?;
    let reconstructed = dec.reconstruct(&pair)? == g;
    let terms: Vec<Value> = dec
        .terms
        .iter()
        .map(|(l, c)| json!({"label": l.render(&cat), "alpha": l.alpha, "beta": l.beta, "gamma": l.gamma, "coeff": c.to_string()}))
        .collect();
    let grouped: Vec<Value> = dec
        .grouped()
        .iter()
        .map(|((a, b), g)| {
            let r: Vec<Value> = g.iter().map(|(gamma, c)| json!({"gamma": gamma, "coeff": c.to_string()})).collect();
            json!({"alpha": a, "beta": b, "r_coefficients": r})
        })
        .collect();
    Ok(json!({"pair": id.to_string(), "degree_cap": DEGREE_CAP, "terms": terms, "grouped": grouped, "reconstructed": reconstructed}))
}

fn harmonic(id: PairId, m: u32, input: &std::path::Path) -> CliResult<Value> {
    let pair = cache::pair(id);
    let p = json::read_poly(input)?;
    let h = harmonic_projection(&pair, &p, m)?;
    Ok(json!({
        "pair": id.to_string(),
        "m": m,
        "projection": poly_to_json(&h),
        "display": h.to_string(),
        "harmonic": is_harmonic(&pair, &h),
    }))
}

fn spectrum(id: PairId, lambdas: &[Rational], smax: u32, sm: Option<u32>) -> CliResult<Value> {
    let pair = cache::pair(id);
    let pts = spectrum_points(&pair, lambdas, smax)?;
    let um = match sm {
        Some(m) => Some(compute_um(&pair, m, smax.max(bargmann::um_min_smax(&pair, m)))?),
        None => None,
    };
    let points: Vec<Value> = pts
        .iter()
        .map(|p| {
            let mut v = json!({
                "lambda": p.lambda.to_string(),
                "s": p.label.s,
                "i": p.label.i,
                "xi": p.xi.iter().map(|x| x.to_string()).collect::<Vec<_>>(),
            });
            if let Some(u) = &um {
                v["in_sm"] = json!(u.poly.evaluate(&p.xi).is_zero());
            }
            v
        })
        .collect();
    Ok(json!({
        "pair": id.to_string(),
        "lambdas": lambdas.iter().map(|l| l.to_string()).collect::<Vec<_>>(),
        "smax": smax,
        "sm": sm,
        "points": points,
    }))
}

fn um(id: PairId, m: u32, smax: Option<u32>) -> CliResult<Value> {
    let pair = cache::pair(id);
    let fit = compute_um(&pair, m, smax.unwrap_or_else(|| bargmann::um_min_smax(&pair, m)))?;
    let mut out = json!({
        "pair": id.to_string(),
        "m": m,
        "u": poly_to_json(&fit.poly),
        "display": fit.poly.to_string(),
        "scale": fit.scale.to_string(),
        "training_samples": fit.training,
        "held_out_samples": fit.held_out,
    });
    if pair.line() == 6 {
        out["matches_product"] = json!(fit.poly == bargmann::line6_product(&pair, m));
    }
    Ok(out)
}

fn verify(pairs: &[PairId], deep: bool, checks: &[String]) -> CliResult<Output> {
    let depth = if deep { Depth::DEEP } else { Depth::DEFAULT };
    let pairs: Vec<PairId> = if pairs.is_empty() { PairId::ALL.to_vec() } else { pairs.to_vec() };
    let known = suite::check_names();
    if let Some(bad) = checks.iter().find(|c| !known.contains(&c.as_str())) {
        return Err(CliError::Usage(format!("unknown check {:?}; known: {}", bad, known.join(", "))));
    }
    let report = if checks.is_empty() {
        suite::verify_all(&pairs, depth)
    } else {
        let mut results = Vec::new();
        for id in &pairs {
            for c in checks {
                results.push(suite::run_named(c, *id, depth)?);
            }
        }
        crate::report::Report::new("verify all", results)
    };
    let passed = report.passed();
    Ok(Output { json: serde_json::to_value(&report).expect("serializable"), passed })
}
