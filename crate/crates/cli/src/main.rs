//! `hwlab` — reproducible experiments on highest-weight decompositions of U(d)
//! and the invariant random-matrix laws their rescaled limits match.
//!
//! Exit codes: 0 all report rows pass; 1 a comparison failed; 2 usage error;
//! 3 guard or runtime error (machine-readable JSON on stderr).

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use num::BigUint;
use serde_json::json;

use hwlab::decompose::{branch_one_step, measure_of_rep, tensor_decompose};
use hwlab::weights::{dim_weyl, HighestWeight};
use hwlab_cli::experiments::{
    run_clt, run_restrict_limit, run_so3_demo, run_tensor_limit, CltConfig, RestrictLimitConfig,
    So3Config, TensorLimitConfig,
};
use hwlab_cli::output::{format_f64, write_scalar_csv, write_spectra_csv, RunReport};

#[derive(Parser)]
#[command(
    name = "hwlab",
    version,
    about = "Exact U(d) highest-weight decompositions vs invariant random-matrix limits"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct StochasticArgs {
    /// RNG seed (mandatory: every stochastic run is reproducible from it).
    #[arg(long)]
    seed: u64,
    /// Number of Monte Carlo replicas.
    #[arg(long, default_value_t = 100_000)]
    samples: usize,
    /// CSV output path for sample-level data (one sorted spectrum per row).
    #[arg(long)]
    out: Option<PathBuf>,
    /// JSON report output path.
    #[arg(long = "json-report")]
    json_report: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Weyl dimension of an irreducible representation.
    Dim {
        #[arg(long)]
        d: usize,
        /// Highest weight as comma-separated integers, e.g. 2,1,0.
        #[arg(long, allow_hyphen_values = true)]
        w: String,
        #[arg(long)]
        json: bool,
    },
    /// Littlewood-Richardson decomposition of a tensor product.
    Tensor {
        #[arg(long)]
        d: usize,
        #[arg(long, allow_hyphen_values = true)]
        a: String,
        #[arg(long, allow_hyphen_values = true)]
        b: String,
        #[arg(long)]
        json: bool,
    },
    /// One-step branching U(d) -> U(d-1).
    Branch {
        #[arg(long)]
        d: usize,
        #[arg(long, allow_hyphen_values = true)]
        w: String,
        #[arg(long)]
        json: bool,
    },
    /// Restriction law of L*lambda0 vs corner spectra of the invariant orbit.
    RestrictLimit {
        #[arg(long = "dprime")]
        d_prime: usize,
        #[arg(long)]
        d: usize,
        /// Base weight lambda0 (length d'), scaled by L on the exact side.
        #[arg(long, allow_hyphen_values = true)]
        lambda0: String,
        /// The scale parameter L (exact side uses L*lambda0 rescaled by 1/L).
        #[arg(long = "scale")]
        scale_l: u64,
        /// Override the analytic moment tolerance (default 0.5/L).
        #[arg(long)]
        tolerance: Option<f64>,
        /// Override the W1 tolerance (default 0.02).
        #[arg(long = "w1-tolerance")]
        w1_tolerance: Option<f64>,
        /// Shift the exact law by a constant: a deliberate negative control.
        #[arg(long = "shift-exact", default_value_t = 0.0)]
        shift_exact: f64,
        #[command(flatten)]
        stochastic: StochasticArgs,
    },
    /// Tensor-product law of L*lambda0 (x) L*mu0 vs spectra of sums of
    /// independent invariant matrices.
    TensorLimit {
        #[arg(long)]
        d: usize,
        #[arg(long, allow_hyphen_values = true)]
        lambda0: String,
        #[arg(long, allow_hyphen_values = true)]
        mu0: String,
        #[arg(long = "scale")]
        scale_l: u64,
        /// Override the analytic moment tolerance (default 0.5/L).
        #[arg(long)]
        tolerance: Option<f64>,
        /// Override the W1 tolerance (default 2/L + 0.02).
        #[arg(long = "w1-tolerance")]
        w1_tolerance: Option<f64>,
        #[command(flatten)]
        stochastic: StochasticArgs,
    },
    /// Central limit theorem for tensor powers of the defining representation:
    /// exact rescaled moments vs the Wick limit, plus a GUE cross-check.
    Clt {
        #[arg(long, default_value_t = 2)]
        d: usize,
        /// Tensor powers to evaluate, comma-separated.
        #[arg(long = "n-list", default_value = "16,64,256")]
        n_list: String,
        /// Largest moment order (<= 8).
        #[arg(long = "k-max", default_value_t = 6)]
        k_max: usize,
        #[command(flatten)]
        stochastic: StochasticArgs,
    },
    /// SO(3) demo: J_z of a uniformly rotated angular momentum vs
    /// Uniform[-|J|, |J|], and exact spin-j restriction laws.
    So3Demo {
        /// Length |J| of the angular momentum vector.
        #[arg(long = "j-mag", default_value_t = 1.0)]
        j_mag: f64,
        /// Spins to check, as doubled integers (1 = spin 1/2).
        #[arg(long, default_value = "1,2,20,100,400")]
        spins: String,
        #[command(flatten)]
        stochastic: StochasticArgs,
    },
}

struct CliError {
    code: &'static str,
    message: String,
    exit: u8,
}

impl CliError {
    fn usage(message: impl Into<String>) -> Self {
        Self {
            code: "USAGE",
            message: message.into(),
            exit: 2,
        }
    }
}

impl From<hwlab::Error> for CliError {
    fn from(e: hwlab::Error) -> Self {
        let code = match &e {
            hwlab::Error::RankMismatch { .. } => "RANK_MISMATCH",
            hwlab::Error::InvalidRank(..) => "INVALID_RANK",
            hwlab::Error::TargetRankOutOfRange { .. } => "TARGET_RANK_OUT_OF_RANGE",
            hwlab::Error::EmptyInput(_) => "EMPTY_INPUT",
            hwlab::Error::StateCapExceeded { .. } => "STATE_CAP_EXCEEDED",
            hwlab::Error::EntryOutOfRange(_) => "ENTRY_OUT_OF_RANGE",
            hwlab::Error::MomentOrderCap { .. } => "MOMENT_ORDER_CAP",
            hwlab::Error::NotEnoughSamples(_) => "NOT_ENOUGH_SAMPLES",
            hwlab::Error::NegativeVariance(_) => "NEGATIVE_VARIANCE",
            hwlab::Error::EigensolverNoConvergence(_) => "EIGENSOLVER_NO_CONVERGENCE",
        };
        Self {
            code,
            message: e.to_string(),
            exit: 3,
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        Self {
            code: "IO",
            message: e.to_string(),
            exit: 3,
        }
    }
}

fn parse_weight_entries(s: &str) -> Result<Vec<i64>, CliError> {
    s.split(',')
        .map(|tok| {
            tok.trim()
                .parse::<i64>()
                .map_err(|_| CliError::usage(format!("invalid weight entry {tok:?}")))
        })
        .collect()
}

fn parse_u64_list(s: &str) -> Result<Vec<u64>, CliError> {
    s.split(',')
        .map(|tok| {
            tok.trim()
                .parse::<u64>()
                .map_err(|_| CliError::usage(format!("invalid integer {tok:?}")))
        })
        .collect()
}

fn weight_arg(d: usize, s: &str) -> Result<HighestWeight, CliError> {
    let entries = parse_weight_entries(s)?;
    if entries.len() != d {
        return Err(CliError::usage(format!(
            "weight {s:?} has {} entries, expected d = {d}",
            entries.len()
        )));
    }
    HighestWeight::from_i64(&entries)
        .map_err(|_| CliError::usage(format!("weight {s:?} is not non-increasing")))
}

fn init_thread_pool() {
    // HWLAB_THREADS is the only environment override the harness honors.
    if let Ok(v) = std::env::var("HWLAB_THREADS") {
        if let Ok(n) = v.parse::<usize>() {
            let _ = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build_global();
        }
    }
}

fn print_report(report: &hwlab::compare::MomentReport) {
    println!(
        "{:<12} {:>24} {:>24} {:>13} {:>12} {:>6}",
        "moment", "reference", "estimate", "std_error", "tolerance", "pass"
    );
    for row in &report.rows {
        let ks = format!(
            "p[{}]",
            row.ks
                .iter()
                .map(|k| k.to_string())
                .collect::<Vec<_>>()
                .join(",")
        );
        println!(
            "{:<12} {:>24} {:>24} {:>13.4e} {:>12.4e} {:>6}",
            ks,
            format_f64(row.reference),
            format_f64(row.estimate),
            row.std_error,
            row.tolerance,
            if row.pass { "ok" } else { "FAIL" }
        );
    }
    if let Some(w1) = &report.w1 {
        println!(
            "{:<12} {:>24} {:>24} {:>13} {:>12.4e} {:>6}",
            "W1",
            "-",
            format_f64(w1.value),
            "-",
            w1.tolerance,
            if w1.pass { "ok" } else { "FAIL" }
        );
    }
}

fn run(cli: Cli) -> Result<bool, CliError> {
    match cli.command {
        Command::Dim { d, w, json } => {
            let weight = weight_arg(d, &w)?;
            let dim = dim_weyl(&weight);
            if json {
                println!(
                    "{}",
                    json!({ "d": d, "weight": weight.to_string(), "dim": dim.to_string() })
                );
            } else {
                println!("{dim}");
            }
            Ok(true)
        }
        Command::Tensor { d, a, b, json } => {
            let wa = weight_arg(d, &a)?;
            let wb = weight_arg(d, &b)?;
            let decomposition = tensor_decompose(&wa, &wb)?;
            let parts: Vec<(HighestWeight, BigUint)> = decomposition.into_iter().collect();
            let measure = measure_of_rep(&parts)?;
            if json {
                let entries: Vec<_> = measure
                    .entries()
                    .map(|(w, e)| {
                        json!({
                            "weight": w.to_string(),
                            "multiplicity": e.multiplicity.to_string(),
                            "dim": dim_weyl(w).to_string(),
                            "probability": e.probability.to_string(),
                        })
                    })
                    .collect();
                println!(
                    "{}",
                    json!({ "d": d, "a": wa.to_string(), "b": wb.to_string(),
                            "total_dim": measure.total_dim().to_string(),
                            "components": entries })
                );
            } else {
                println!("weight\tmultiplicity\tdim\tprobability");
                for (w, e) in measure.entries() {
                    println!(
                        "{}\t{}\t{}\t{}",
                        w,
                        e.multiplicity,
                        dim_weyl(w),
                        e.probability
                    );
                }
            }
            Ok(true)
        }
        Command::Branch { d, w, json } => {
            let weight = weight_arg(d, &w)?;
            let branched = branch_one_step(&weight)?;
            if json {
                let entries: Vec<_> = branched
                    .iter()
                    .map(|(mu, c)| {
                        json!({
                            "weight": mu.to_string(),
                            "multiplicity": c.to_string(),
                            "dim": dim_weyl(mu).to_string(),
                        })
                    })
                    .collect();
                println!(
                    "{}",
                    json!({ "d": d, "w": weight.to_string(), "components": entries })
                );
            } else {
                println!("weight\tmultiplicity\tdim");
                for (mu, c) in branched.iter() {
                    println!("{}\t{}\t{}", mu, c, dim_weyl(mu));
                }
            }
            Ok(true)
        }
        Command::RestrictLimit {
            d_prime,
            d,
            lambda0,
            scale_l,
            tolerance,
            w1_tolerance,
            shift_exact,
            stochastic,
        } => {
            if scale_l < 1 {
                return Err(CliError::usage("--scale must be >= 1"));
            }
            let lambda0 = parse_weight_entries(&lambda0)?;
            let mut cfg = RestrictLimitConfig::new(
                d_prime,
                d,
                lambda0.clone(),
                scale_l,
                stochastic.samples,
                stochastic.seed,
            );
            if let Some(t) = tolerance {
                cfg.moment_tolerance = t;
            }
            if let Some(t) = w1_tolerance {
                cfg.w1_tolerance = t;
            }
            cfg.shift_exact = shift_exact;
            let outcome = run_restrict_limit(&cfg)?;
            print_report(&outcome.report);
            if let Some(path) = &stochastic.out {
                write_spectra_csv(path, &outcome.spectra)?;
            }
            if let Some(path) = &stochastic.json_report {
                let config = json!({
                    "d_prime": d_prime, "d": d, "lambda0": lambda0,
                    "scale_l": scale_l, "samples": stochastic.samples,
                    "moment_tolerance": cfg.moment_tolerance,
                    "w1_tolerance": cfg.w1_tolerance,
                    "shift_exact": shift_exact,
                });
                RunReport::new(
                    "restrict-limit",
                    stochastic.seed,
                    config,
                    &outcome.report,
                    &outcome.extras,
                    outcome.report.pass,
                )
                .write(path)?;
            }
            Ok(outcome.report.pass)
        }
        Command::TensorLimit {
            d,
            lambda0,
            mu0,
            scale_l,
            tolerance,
            w1_tolerance,
            stochastic,
        } => {
            if scale_l < 1 {
                return Err(CliError::usage("--scale must be >= 1"));
            }
            let lambda0 = parse_weight_entries(&lambda0)?;
            let mu0 = parse_weight_entries(&mu0)?;
            let mut cfg = TensorLimitConfig::new(
                d,
                lambda0.clone(),
                mu0.clone(),
                scale_l,
                stochastic.samples,
                stochastic.seed,
            );
            if let Some(t) = tolerance {
                cfg.moment_tolerance = t;
            }
            if let Some(t) = w1_tolerance {
                cfg.w1_tolerance = t;
            }
            let outcome = run_tensor_limit(&cfg)?;
            print_report(&outcome.report);
            println!("reference source: {}", outcome.extras.reference_source);
            if let Some(path) = &stochastic.out {
                write_spectra_csv(path, &outcome.spectra)?;
            }
            if let Some(path) = &stochastic.json_report {
                let config = json!({
                    "d": d, "lambda0": lambda0, "mu0": mu0, "scale_l": scale_l,
                    "samples": stochastic.samples,
                    "moment_tolerance": cfg.moment_tolerance,
                    "w1_tolerance": cfg.w1_tolerance,
                });
                RunReport::new(
                    "tensor-limit",
                    stochastic.seed,
                    config,
                    &outcome.report,
                    &outcome.extras,
                    outcome.report.pass,
                )
                .write(path)?;
            }
            Ok(outcome.report.pass)
        }
        Command::Clt {
            d,
            n_list,
            k_max,
            stochastic,
        } => {
            if !(1..=hwlab::ncmoments::MOMENT_ORDER_CAP).contains(&k_max) {
                return Err(CliError::usage(format!(
                    "--k-max must be in 1..={}",
                    hwlab::ncmoments::MOMENT_ORDER_CAP
                )));
            }
            let n_values = parse_u64_list(&n_list)?;
            if n_values.contains(&0) {
                return Err(CliError::usage("tensor powers must be >= 1"));
            }
            let cfg = CltConfig::new(
                d,
                n_values.clone(),
                k_max,
                stochastic.samples,
                stochastic.seed,
            );
            let outcome = run_clt(&cfg)?;
            println!(
                "{:<14} {:>2} {:>6} {:>24} {:>13} {:>28} {:>6}",
                "probe", "k", "n", "exact", "|exact-wick|", "check", "pass"
            );
            for row in &outcome.exact_rows {
                println!(
                    "{:<14} {:>2} {:>6} {:>11.4e}{:+.4e}i {:>13.4e} {:>28} {:>6}",
                    row.probe,
                    row.k,
                    row.n,
                    row.exact_re,
                    row.exact_im,
                    row.abs_gap,
                    row.check,
                    if row.pass { "ok" } else { "FAIL" }
                );
            }
            println!("-- Monte Carlo moments of Tr(X probe), X the fitted Gaussian limit --");
            println!(
                "fitted scale = {}, v = {}",
                format_f64(outcome.fit.scale),
                format_f64(outcome.fit.v)
            );
            for row in &outcome.mc_rows {
                println!(
                    "k = {}: wick = {:>12.6} estimate = {:>12.6} +- {:.2e} {}",
                    row.ks[0],
                    row.reference,
                    row.estimate,
                    row.std_error,
                    if row.pass { "ok" } else { "FAIL" }
                );
            }
            if let Some(path) = &stochastic.out {
                write_scalar_csv(path, "z", &outcome.z_samples)?;
            }
            if let Some(path) = &stochastic.json_report {
                let config = json!({
                    "d": d, "n_list": n_values, "k_max": k_max,
                    "samples": stochastic.samples,
                });
                let report = json!({
                    "exact_rows": outcome.exact_rows,
                    "mc_rows": outcome.mc_rows,
                });
                RunReport::new(
                    "clt",
                    stochastic.seed,
                    config,
                    report,
                    json!({ "fit": outcome.fit }),
                    outcome.pass,
                )
                .write(path)?;
            }
            Ok(outcome.pass)
        }
        Command::So3Demo {
            j_mag,
            spins,
            stochastic,
        } => {
            let spins_doubled = parse_u64_list(&spins)?;
            if spins_doubled.contains(&0) {
                return Err(CliError::usage("doubled spins must be >= 1"));
            }
            let mut cfg = So3Config::new(j_mag, stochastic.samples, stochastic.seed);
            cfg.spins_doubled = spins_doubled.clone();
            let outcome = run_so3_demo(&cfg)?;
            println!(
                "W1(J_z, Uniform[-|J|,|J|]) = {} (tolerance {:.4e}) {}",
                format_f64(outcome.archimedes.value),
                outcome.archimedes.tolerance,
                if outcome.archimedes.pass {
                    "ok"
                } else {
                    "FAIL"
                }
            );
            println!(
                "{:>6} {:>9} {:>24} {:>12} {:>6}",
                "2j", "uniform", "W1 vs uniform", "bound", "pass"
            );
            for row in &outcome.spin_rows {
                println!(
                    "{:>6} {:>9} {:>24} {:>12.4e} {:>6}",
                    row.two_j,
                    row.uniform_exact,
                    format_f64(row.w1_vs_uniform),
                    row.bound,
                    if row.pass { "ok" } else { "FAIL" }
                );
            }
            if let Some(path) = &stochastic.out {
                write_scalar_csv(path, "jz", &outcome.jz_samples)?;
            }
            if let Some(path) = &stochastic.json_report {
                let config = json!({
                    "j_mag": j_mag, "spins_doubled": spins_doubled,
                    "samples": stochastic.samples,
                });
                let report = json!({
                    "archimedes": outcome.archimedes,
                    "spin_rows": outcome.spin_rows,
                });
                RunReport::new(
                    "so3-demo",
                    stochastic.seed,
                    config,
                    report,
                    json!({}),
                    outcome.pass,
                )
                .write(path)?;
            }
            Ok(outcome.pass)
        }
    }
}

fn main() -> ExitCode {
    init_thread_pool();
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            eprintln!(
                r#"{{"error":{{"code":"COMPARISON_FAILED","message":"one or more report rows failed"}}}}"#
            );
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!(
                "{}",
                json!({ "error": { "code": e.code, "message": e.message } })
            );
            ExitCode::from(e.exit)
        }
    }
}
