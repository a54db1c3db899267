//! Command-line front end: JSON in, JSON out, machine-readable exit codes.
//!
//! Exit codes: 0 success or positive verdict, 1 negative verdict (not more
//! mixed, failed checks), 2 input error, 3 numerical failure. Errors print
//! one line on stderr carrying the stable error-code string.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::Value;

use gpt_spectra::axioms;
use gpt_spectra::io;
use gpt_spectra::majorize::{birkhoff, majorizes};
use gpt_spectra::purify;
use gpt_spectra::purity::{self, Verdict, Witness};
use gpt_spectra::spectral::diagonalize;
use gpt_spectra::{Error, Theory, Tolerances};

#[derive(Parser)]
#[command(
    name = "gpt-spectra",
    version,
    about = "State diagonalization, majorization, and purity convertibility for finite probabilistic theory models"
)]
struct Cli {
    /// Multiply every tolerance band by this factor (combined with the
    /// GPT_SPECTRA_TOL_SCALE environment variable).
    #[arg(long, global = true)]
    tol: Option<f64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Diagonalize a state into perfectly distinguishable pure states.
    Diagonalize {
        /// Input state JSON.
        #[arg(long = "in")]
        input: PathBuf,
        /// Output diagonalization JSON.
        #[arg(long)]
        out: PathBuf,
    },
    /// Decide whether spectrum q majorizes spectrum p.
    Majorize {
        /// Spectrum JSON for p.
        #[arg(long)]
        p: PathBuf,
        /// Spectrum JSON for q.
        #[arg(long)]
        q: PathBuf,
        /// Output JSON; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Certify convertibility from one state to another under mixtures of
    /// reversible channels.
    Convert {
        /// Source state sigma.
        #[arg(long)]
        from: PathBuf,
        /// Target state rho.
        #[arg(long)]
        to: PathBuf,
        /// Output channel JSON.
        #[arg(long)]
        out: PathBuf,
    },
    /// Decompose a doubly stochastic matrix into permutation matrices.
    Birkhoff {
        /// Input matrix JSON.
        #[arg(long = "in")]
        input: PathBuf,
        /// Output decomposition JSON.
        #[arg(long)]
        out: PathBuf,
    },
    /// Run the model checks and write a report.
    Check {
        /// Theory model: quantum_real, classical, or gbit.
        #[arg(long)]
        theory: String,
        /// Operational dimension (required for quantum_real and classical).
        #[arg(long)]
        dim: Option<usize>,
        /// Seed for the sampled checks (mandatory; checks are stochastic).
        #[arg(long)]
        seed: u64,
        /// Sample count per stochastic check.
        #[arg(long, default_value_t = 20)]
        trials: usize,
        /// Output report JSON.
        #[arg(long)]
        out: PathBuf,
    },
    /// Compute the steering effect preparing a weighted component.
    Steer {
        /// State rho whose purification is measured.
        #[arg(long)]
        state: PathBuf,
        /// Component sigma contained in rho.
        #[arg(long)]
        component: PathBuf,
        /// Containment weight p.
        #[arg(long)]
        weight: f64,
        /// Output effect JSON.
        #[arg(long)]
        out: PathBuf,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let scale = tolerance_scale(&cli);
    let tol = if (scale - 1.0).abs() < f64::EPSILON {
        Tolerances::default()
    } else {
        Tolerances::scaled(scale)
    };
    match run(cli.command, &tol) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {}: {e}", e.code());
            if e.is_input_error() {
                ExitCode::from(2)
            } else {
                ExitCode::from(3)
            }
        }
    }
}

fn tolerance_scale(cli: &Cli) -> f64 {
    let env_scale = std::env::var("GPT_SPECTRA_TOL_SCALE")
        .ok()
        .and_then(|s| s.parse::<f64>().ok())
        .filter(|s| s.is_finite() && *s > 0.0)
        .unwrap_or(1.0);
    env_scale * cli.tol.filter(|s| s.is_finite() && *s > 0.0).unwrap_or(1.0)
}

fn run(command: Command, tol: &Tolerances) -> Result<u8, Error> {
    match command {
        Command::Diagonalize { input, out } => {
            let rho = io::state_from_value(&read_json(&input)?, tol)?;
            let diag = diagonalize(&rho, tol)?;
            write_json(&out, &io::diagonalization_to_value(&diag)?)?;
            Ok(0)
        }
        Command::Majorize { p, q, out } => {
            let sp = io::spectrum_from_value(&read_json(&p)?, tol)?;
            let sq = io::spectrum_from_value(&read_json(&q)?, tol)?;
            let len = sp.len().max(sq.len());
            let sp = sp.zero_padded(len)?;
            let sq = sq.zero_padded(len)?;
            let verdict = majorizes(&sq, &sp, tol)?;
            let mut partial = Vec::with_capacity(len);
            let (mut run_p, mut run_q) = (0.0, 0.0);
            for k in 0..len {
                run_p += sp.values()[k];
                run_q += sq.values()[k];
                partial.push(serde_json::json!({
                    "k": k + 1,
                    "p_sum": io::json_f64(run_p)?,
                    "q_sum": io::json_f64(run_q)?,
                }));
            }
            let value = serde_json::json!({
                "schema": io::SCHEMA_VERSION,
                "q_majorizes_p": verdict,
                "partial_sums": Value::Array(partial),
            });
            match out {
                Some(path) => write_json(&path, &value)?,
                None => print!("{}", io::to_json_string(&value)),
            }
            Ok(if verdict { 0 } else { 1 })
        }
        Command::Convert { from, to, out } => {
            let sigma = io::state_from_value(&read_json(&from)?, tol)?;
            let rho = io::state_from_value(&read_json(&to)?, tol)?;
            let cert = purity::is_more_mixed(&rho, &sigma, tol)?;
            let value = match (&cert.verdict, &cert.witness) {
                (Verdict::MoreMixed, Witness::Rare(r)) => {
                    let mut v = io::rare_to_value(r)?;
                    let map = v.as_object_mut().expect("channel value is an object");
                    map.insert("verdict".into(), Value::from("more_mixed"));
                    map.insert("residual_error".into(), io::json_f64(cert.residual_error)?);
                    v
                }
                (Verdict::EquallyMixed, Witness::Reversible(u)) => serde_json::json!({
                    "schema": io::SCHEMA_VERSION,
                    "verdict": "equally_mixed",
                    "weights": Value::Array(vec![io::json_f64(1.0)?]),
                    "channels": Value::Array(vec![io::reversible_to_value(u)?]),
                    "residual_error": io::json_f64(cert.residual_error)?,
                }),
                (Verdict::NotMoreMixed, Witness::ViolatingIndex(k)) => serde_json::json!({
                    "schema": io::SCHEMA_VERSION,
                    "verdict": "not_more_mixed",
                    "violating_index": *k,
                    "partial_sum_excess": io::json_f64(cert.residual_error)?,
                }),
                _ => {
                    return Err(Error::Parse(
                        "certificate verdict and witness disagree".into(),
                    ))
                }
            };
            write_json(&out, &value)?;
            Ok(if cert.verdict == Verdict::NotMoreMixed { 1 } else { 0 })
        }
        Command::Birkhoff { input, out } => {
            let m = io::matrix_from_value(&read_json(&input)?)?;
            let decomp = birkhoff(&m, tol)?;
            let err = decomp.reconstruct().max_abs_diff(&m);
            write_json(&out, &io::birkhoff_to_value(&decomp, err)?)?;
            Ok(0)
        }
        Command::Check { theory, dim, seed, trials, out } => {
            let theory = parse_theory(&theory, dim)?;
            let report = axioms::run_report(theory, trials, seed, tol)?;
            let failed = !report.failures().is_empty();
            write_json(&out, &io::report_to_value(&report)?)?;
            Ok(if failed { 1 } else { 0 })
        }
        Command::Steer { state, component, weight, out } => {
            let rho = io::state_from_value(&read_json(&state)?, tol)?;
            let sigma = io::state_from_value(&read_json(&component)?, tol)?;
            let psi = purify::purify(&rho, tol)?;
            let steering = purify::steer(&psi, &sigma, weight, tol)?;
            let effect_matrix = steering.effect.as_matrix()?;
            let value = serde_json::json!({
                "schema": io::SCHEMA_VERSION,
                "effect": io::matrix_to_value(&effect_matrix)?["data"].clone(),
                "reproduction_error": io::json_f64(steering.reproduction_error)?,
            });
            write_json(&out, &value)?;
            Ok(0)
        }
    }
}

fn parse_theory(name: &str, dim: Option<usize>) -> Result<Theory, Error> {
    match name {
        "quantum_real" => {
            let d = dim.ok_or_else(|| Error::Parse("--dim is required for quantum_real".into()))?;
            if d == 0 {
                return Err(Error::Parse("--dim must be positive".into()));
            }
            Ok(Theory::QuantumReal { dim: d })
        }
        "classical" => {
            let d = dim.ok_or_else(|| Error::Parse("--dim is required for classical".into()))?;
            if d == 0 {
                return Err(Error::Parse("--dim must be positive".into()));
            }
            Ok(Theory::Classical { dim: d })
        }
        "gbit" => {
            if let Some(d) = dim {
                if d != 2 {
                    return Err(Error::Parse("the gbit has operational dimension 2".into()));
                }
            }
            Ok(Theory::Gbit)
        }
        other => Err(Error::Parse(format!("unknown theory \"{other}\""))),
    }
}

fn read_json(path: &Path) -> Result<Value, Error> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Parse(format!("cannot read {}: {e}", path.display())))?;
    io::parse_json(&text)
}

fn write_json(path: &Path, value: &Value) -> Result<(), Error> {
    std::fs::write(path, io::to_json_string(value))
        .map_err(|e| Error::Parse(format!("cannot write {}: {e}", path.display())))
}
