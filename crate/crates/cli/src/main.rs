//! `thermocat` command-line front end.
//!
//! Exit codes: 0 success, 1 internal failure, 2 usage or parse error,
//! 3 infeasible model.

mod spectrum_arg;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use thermocat::bounds::{
    dim_bound_arbitrary, dim_bound_diag, energy_bound, energy_bound_arbitrary, energy_bound_maintext, split_fuzz,
    BoundReport,
};
use thermocat::catalysts::{optimal_error, optimal_pair, FamilyParams};
use thermocat::divergences::{monotonicity_check, AlphaGrid};
use thermocat::hamiltonians::{FiniteSpectrum, Spectrum, SCHEMA};
use thermocat::oracle::{build_embezzle_lp, solve_lp, write_lp, LpStatus};
use thermocat::repro::{fig3_rows, spectrum_rows, table1, FIG3_MAX_A};
use thermocat::scalar::rational_to_f64;
use thermocat::spectra::check_transformation;
use thermocat::{Error, ProbVec, Rational};

use spectrum_arg::parse_spectrum;

#[derive(Parser, Debug)]
#[command(name = "thermocat", version, about = "Thermal embezzling catalysts, certificates and error bounds")]
struct Cli {
    #[command(flatten)]
    config: RunConfig,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct RunConfig {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Exact "p/q" strings or decimal floats.
    #[arg(long, global = true, value_enum, default_value_t = Mode::Exact)]
    mode: Mode,
    /// Seed for randomized commands.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Mode {
    Exact,
    Float,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// The optimal catalyst pair for an m-level system and n = m^a.
    Catalyst {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        a: u32,
        #[arg(long, value_enum, default_value_t = Emit::Pair)]
        emit: Emit,
    },
    /// Figure data: 1 (m=2,n=8), 2 (m=3,n=27) or 3 (error against n).
    Fig {
        #[arg(value_parser = clap::value_parser!(u8).range(1..=3))]
        n: u8,
        /// Largest power a for figure 3 (n = 2^a).
        #[arg(long, default_value_t = FIG3_MAX_A)]
        max_a: u32,
    },
    /// Verdict grid for arbitrarily accurate embezzling.
    Table1,
    /// Lower bound on catalytic error.
    Bound(BoundArgs),
    /// Rényi-divergence monotonicity check of a transformation file.
    Check {
        /// JSON with "p_in", "p_out" and a finite "spectrum".
        file: PathBuf,
    },
    /// Export or solve the exact catalyst LP.
    Lp {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        n: usize,
        /// Solve instead of printing the LP text.
        #[arg(long)]
        solve: bool,
    },
    /// Fuzz the split inequalities at uniformly random points.
    Fuzz {
        #[arg(long, default_value_t = 1_000_000)]
        points: usize,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Emit {
    Pair,
    Error,
    Verify,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum BoundKindArg {
    Dim,
    Energy,
    EnergyMaintext,
}

#[derive(Args, Debug)]
struct BoundArgs {
    #[arg(value_enum)]
    kind: BoundKindArg,
    /// System spectrum: trivial:N, levels:E1,E2,…, or @file.json.
    #[arg(long)]
    sys: Option<String>,
    /// Catalyst spectrum: trivial:N, levels:…, harmonic:HW, linear:C,E0, or @file.json.
    #[arg(long)]
    cat: String,
    /// Inverse temperature for inline spectra.
    #[arg(long, default_value_t = 1.0)]
    beta: f64,
    /// Mean-energy budget of the input catalyst.
    #[arg(long = "E", allow_hyphen_values = true)]
    energy: Option<f64>,
    /// Divergence gain in bits (κ₁ for dim, κ₂ for energy); replaces --sys.
    #[arg(long, allow_hyphen_values = true)]
    kappa: Option<f64>,
}

/// Failure with an exit code.
struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::InfeasibleEnergy { .. } | Error::Infeasible | Error::InfeasiblePair | Error::Unbounded => 3,
            Error::VerificationFailed(_) => 1,
            _ => 2,
        };
        Failure { code, message: e.to_string() }
    }
}

fn usage(message: impl Into<String>) -> Failure {
    Failure { code: 2, message: message.into() }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut out = Vec::new();
    match run(&cli, &mut out) {
        Ok(()) => {
            let mut stdout = std::io::stdout().lock();
            if stdout.write_all(&out).and_then(|_| stdout.flush()).is_err() {
                return ExitCode::from(1);
            }
            ExitCode::SUCCESS
        }
        Err(f) => {
            eprintln!("thermocat: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn run(cli: &Cli, out: &mut Vec<u8>) -> Result<(), Failure> {
    let cfg = &cli.config;
    match &cli.command {
        Command::Catalyst { m, a, emit } => catalyst(cfg, *m, *a, *emit, out),
        Command::Fig { n, max_a } => fig(cfg, *n, *max_a, out),
        Command::Table1 => table(cfg, out),
        Command::Bound(args) => bound(args, out),
        Command::Check { file } => check(file, out),
        Command::Lp { m, n, solve } => lp(cfg, *m, *n, *solve, out),
        Command::Fuzz { points } => {
            let report = split_fuzz(*points, cfg.seed);
            let mut v = serde_json::to_value(&report).expect("report serializes");
            v["schema"] = json!(SCHEMA);
            write_json(out, &v);
            Ok(())
        }
    }
}

fn num(cfg: &RunConfig, r: &Rational) -> String {
    match cfg.mode {
        Mode::Exact => r.to_string(),
        Mode::Float => rational_to_f64(r).to_string(),
    }
}

fn num_json(cfg: &RunConfig, r: &Rational) -> Value {
    match cfg.mode {
        Mode::Exact => json!(r.to_string()),
        Mode::Float => json!(rational_to_f64(r)),
    }
}

fn write_json(out: &mut Vec<u8>, v: &Value) {
    serde_json::to_writer_pretty(&mut *out, v).expect("in-memory write");
    out.push(b'\n');
}

fn write_csv(out: &mut Vec<u8>, header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) {
    let mut w = csv::Writer::from_writer(&mut *out);
    w.write_record(header).expect("in-memory write");
    for row in rows {
        w.write_record(&row).expect("in-memory write");
    }
    w.flush().expect("in-memory write");
}

fn catalyst(cfg: &RunConfig, m: usize, a: u32, emit: Emit, out: &mut Vec<u8>) -> Result<(), Failure> {
    let params = FamilyParams::new(m, a)?;
    match emit {
        Emit::Error => {
            writeln!(out, "{}", num(cfg, &optimal_error(params))).expect("in-memory write");
        }
        Emit::Verify => {
            let pair = optimal_pair(params)?;
            let ok = check_transformation(&pair)? && pair.distance() == optimal_error(params);
            if !ok {
                return Err(Failure { code: 1, message: "FAIL".into() });
            }
            writeln!(out, "OK").expect("in-memory write");
        }
        Emit::Pair => {
            let pair = optimal_pair(params)?;
            let (w, wp) = (pair.omega_in().entries(), pair.omega_out().entries());
            match cfg.format {
                Format::Json => write_json(
                    out,
                    &json!({
                        "schema": SCHEMA,
                        "m": m,
                        "a": a,
                        "omega_in": w.iter().map(|x| num_json(cfg, x)).collect::<Vec<_>>(),
                        "omega_out": wp.iter().map(|x| num_json(cfg, x)).collect::<Vec<_>>(),
                    }),
                ),
                Format::Csv => write_csv(
                    out,
                    &["index", "omega_in", "omega_out"],
                    w.iter().zip(wp).enumerate().map(|(i, (x, y))| vec![(i + 1).to_string(), num(cfg, x), num(cfg, y)]),
                ),
            }
        }
    }
    Ok(())
}

fn fig(cfg: &RunConfig, which: u8, max_a: u32, out: &mut Vec<u8>) -> Result<(), Failure> {
    if which == 3 {
        let rows = fig3_rows(max_a)?;
        let vdh = |r: &Option<Rational>| r.as_ref().map(|v| num(cfg, v)).unwrap_or_else(|| "infeasible".into());
        match cfg.format {
            Format::Csv => write_csv(
                out,
                &["n", "error_ours", "error_vdh"],
                rows.iter().map(|r| vec![r.n.to_string(), num(cfg, &r.error_ours), vdh(&r.error_vdh)]),
            ),
            Format::Json => write_json(
                out,
                &json!({
                    "schema": SCHEMA,
                    "figure": 3,
                    "m": 2,
                    "rows": rows.iter().map(|r| json!({
                        "n": r.n,
                        "error_ours": num_json(cfg, &r.error_ours),
                        "error_vdh": r.error_vdh.as_ref().map(|v| num_json(cfg, v)),
                    })).collect::<Vec<_>>(),
                }),
            ),
        }
        return Ok(());
    }
    let (m, a) = if which == 1 { (2, 3) } else { (3, 3) };
    let rows = spectrum_rows(m, a)?;
    match cfg.format {
        Format::Csv => write_csv(
            out,
            &["index", "omega_prime_ours", "omega_vdh"],
            rows.iter().map(|r| vec![r.index.to_string(), num(cfg, &r.omega_prime_ours), num(cfg, &r.omega_vdh)]),
        ),
        Format::Json => write_json(
            out,
            &json!({
                "schema": SCHEMA,
                "figure": which,
                "m": m,
                "n": rows.len(),
                "rows": rows.iter().map(|r| json!({
                    "index": r.index,
                    "omega_prime_ours": num_json(cfg, &r.omega_prime_ours),
                    "omega_vdh": num_json(cfg, &r.omega_vdh),
                })).collect::<Vec<_>>(),
            }),
        ),
    }
    Ok(())
}

fn table(cfg: &RunConfig, out: &mut Vec<u8>) -> Result<(), Failure> {
    let cells = table1()?;
    match cfg.format {
        Format::Json => write_json(out, &json!({"schema": SCHEMA, "cells": cells})),
        Format::Csv => write_csv(
            out,
            &["energy_levels", "dimension", "verdict", "bound", "example"],
            cells.iter().map(|c| {
                vec![
                    c.energy_levels.to_string(),
                    c.dimension.to_string(),
                    c.verdict.clone(),
                    c.bound.map(|b| b.to_string()).unwrap_or_default(),
                    c.example.unwrap_or_default().to_string(),
                ]
            }),
        ),
    }
    Ok(())
}

fn finite(s: Spectrum, flag: &str) -> Result<FiniteSpectrum, Failure> {
    match s {
        Spectrum::Finite(f) => Ok(f),
        Spectrum::Unbounded(_) => Err(usage(format!("--{flag} must be a finite spectrum here"))),
    }
}

fn bound(args: &BoundArgs, out: &mut Vec<u8>) -> Result<(), Failure> {
    let cat = parse_spectrum(&args.cat, args.beta)?;
    let sys = || -> Result<FiniteSpectrum, Failure> {
        let s = args.sys.as_deref().ok_or_else(|| usage("--sys or --kappa is required"))?;
        finite(parse_spectrum(s, args.beta)?, "sys")
    };
    let energy = || args.energy.ok_or_else(|| usage("--E is required for energy bounds"));
    let report: BoundReport = match args.kind {
        BoundKindArg::Dim => {
            let cat = finite(cat, "cat")?;
            match args.kappa {
                Some(k) => dim_bound_arbitrary(k, &cat)?,
                None => dim_bound_diag(&sys()?, &cat)?,
            }
        }
        BoundKindArg::Energy => match args.kappa {
            Some(k) => energy_bound_arbitrary(k, &cat, energy()?)?,
            None => energy_bound(&sys()?, &cat, energy()?)?,
        },
        BoundKindArg::EnergyMaintext => energy_bound_maintext(&cat, energy()?)?,
    };
    write_json(out, &report.to_json());
    Ok(())
}

fn check(file: &PathBuf, out: &mut Vec<u8>) -> Result<(), Failure> {
    let text = std::fs::read_to_string(file).map_err(|e| usage(format!("{}: {e}", file.display())))?;
    let v: Value = serde_json::from_str(&text).map_err(|e| usage(format!("{}: {e}", file.display())))?;
    let field = |k: &str| v.get(k).ok_or_else(|| usage(format!("missing field {k:?}")));
    let p_in = ProbVec::<f64>::from_json(field("p_in")?)?;
    let p_out = ProbVec::<f64>::from_json(field("p_out")?)?;
    let spectrum = finite(Spectrum::from_json(field("spectrum")?)?, "spectrum")?;
    let tau = spectrum.thermal_weights().weights;
    let verdict = monotonicity_check(&p_in, &p_out, &tau, &AlphaGrid::default())?;
    let alpha = verdict.witness_alpha.map(|a| if a.is_infinite() { json!("inf") } else { json!(a) });
    let gap = verdict.gap.map(|g| if g.is_infinite() { json!("-inf") } else { json!(g) });
    write_json(
        out,
        &json!({
            "schema": SCHEMA,
            "pass": verdict.pass,
            "witness_alpha": alpha,
            "gap": gap,
            "caveat": verdict.caveat,
        }),
    );
    Ok(())
}

fn lp(cfg: &RunConfig, m: usize, n: usize, solve: bool, out: &mut Vec<u8>) -> Result<(), Failure> {
    let problem = build_embezzle_lp(m, n)?;
    if !solve {
        out.extend_from_slice(write_lp(&problem).as_bytes());
        return Ok(());
    }
    let sol = solve_lp(&problem)?;
    if sol.status != LpStatus::Optimal {
        return Err(Failure { code: 3, message: format!("LP status {:?}", sol.status) });
    }
    let value = sol.value.expect("optimal carries a value");
    match cfg.format {
        Format::Csv => {
            writeln!(out, "{}", num(cfg, &value)).expect("in-memory write");
        }
        Format::Json => write_json(
            out,
            &json!({
                "schema": SCHEMA,
                "m": m,
                "n": n,
                "status": sol.status,
                "value": num_json(cfg, &value),
                "omega_in": sol.x[..n].iter().map(|x| num_json(cfg, x)).collect::<Vec<_>>(),
                "omega_out": sol.x[n..2 * n].iter().map(|x| num_json(cfg, x)).collect::<Vec<_>>(),
            }),
        ),
    }
    Ok(())
}
