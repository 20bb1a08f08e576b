//! Command-line front end. [`run`] does all the work and returns the text
//! for stdout and stderr with the exit code, so it can be driven in-process.
//!
//! Exit codes: 0 computed or passed, 1 a check found violations, 2 bad input.

use std::path::PathBuf;

use clap::{Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};

use crate::allocation::{apply_allocation, shapley_matrix, shapley_value, special_allocation};
use crate::check::{
    check_abs_sums, check_efficiency, check_level_abs_sums, check_reasonable_structural, check_row_sums_zero,
    CheckReport, DEFAULT_TOL,
};
use crate::coalition::SetChain;
use crate::decomposition::{
    peel_decompose, random_allocation, step_limit, verify_decomposition, DecomposeError,
};
use crate::falsify::{sample_reasonableness_violation, Sampler};
use crate::game::span_decompose_monotone_binary;
use crate::io::{
    load_allocation, load_decomposition, load_game, to_canonical_json, AllocationDocument,
    DecompositionDocument, GameDocument,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VIOLATIONS: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "coalloc", version, about = "Allocation operators for cooperative games")]
struct Cli {
    /// Numerical tolerance for every comparison.
    #[arg(long, global = true, default_value_t = DEFAULT_TOL)]
    tol: f64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Shapley payoffs of a game, or the full Shapley matrix.
    Shapley {
        #[arg(long)]
        game: PathBuf,
        #[arg(long)]
        matrix: bool,
    },
    /// Monotonicity, superadditivity and minimal winning sets.
    CheckGame {
        #[arg(long)]
        game: PathBuf,
    },
    /// Special allocation of a permutation, players numbered from 1.
    Special {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        perm: String,
    },
    /// Efficiency, structural reasonableness, absolute-sum and row-sum reports.
    Verify {
        #[arg(long)]
        allocation: PathBuf,
    },
    /// Search a game family for a reasonableness violation.
    Falsify {
        #[arg(long)]
        allocation: PathBuf,
        #[arg(long)]
        sampler: Sampler,
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Write an allocation as a convex combination of special allocations.
    Decompose {
        #[arg(long)]
        allocation: PathBuf,
    },
    /// Check a decomposition certificate against an allocation.
    VerifyCert {
        #[arg(long)]
        allocation: PathBuf,
        #[arg(long)]
        cert: PathBuf,
    },
    /// Random reasonable, efficient allocation with its certificate.
    Generate {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        support: usize,
        #[arg(long)]
        seed: u64,
    },
    /// Payoffs of an allocation on a game.
    Payoff {
        #[arg(long)]
        allocation: PathBuf,
        #[arg(long)]
        game: PathBuf,
    },
    /// Integer combination of superadditive 0/1 games equal to a monotone 0/1 game.
    Span {
        #[arg(long)]
        game: PathBuf,
    },
}

/// What a command printed and how it exited.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

#[derive(Serialize)]
struct ResultDocument {
    command: String,
    args: Vec<String>,
    status: &'static str,
    tolerance: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    seed: Option<u64>,
    result: Value,
}

struct Computed {
    pass: bool,
    seed: Option<u64>,
    result: Value,
    notes: Vec<String>,
}

impl Computed {
    fn ok(result: Value) -> Self {
        Computed { pass: true, seed: None, result, notes: Vec::new() }
    }
}

fn input_error(message: impl std::fmt::Display) -> Outcome {
    Outcome { stdout: String::new(), stderr: format!("error: {message}\n"), code: EXIT_INPUT }
}

/// Parses `args` (program name first) and runs the command.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let argv: Vec<std::ffi::OsString> = args.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                Outcome { stdout: String::new(), stderr: text, code: EXIT_INPUT }
            } else {
                Outcome { stdout: text, stderr: String::new(), code: EXIT_OK }
            };
        }
    };
    if !cli.tol.is_finite() || cli.tol < 0.0 {
        return input_error(format!("--tol must be a nonnegative number, got {}", cli.tol));
    }
    let echo: Vec<String> = argv.iter().skip(1).map(|a| a.to_string_lossy().into_owned()).collect();
    let name = echo.iter().find(|a| !a.starts_with('-')).cloned().unwrap_or_default();

    match execute(&cli.command, cli.tol) {
        Ok(done) => {
            let doc = ResultDocument {
                command: name,
                args: echo,
                status: if done.pass { "pass" } else { "fail" },
                tolerance: cli.tol,
                seed: done.seed,
                result: done.result,
            };
            let stderr: String = done.notes.iter().map(|n| format!("{n}\n")).collect();
            Outcome {
                stdout: to_canonical_json(&doc),
                stderr,
                code: if done.pass { EXIT_OK } else { EXIT_VIOLATIONS },
            }
        }
        Err(message) => input_error(message),
    }
}

fn reports_json(reports: &[CheckReport]) -> Value {
    serde_json::to_value(reports).expect("reports serialize")
}

fn execute(command: &Command, tol: f64) -> Result<Computed, String> {
    let s = |e: &dyn std::fmt::Display| e.to_string();
    match command {
        Command::Shapley { game, matrix } => {
            let v = load_game(game).map_err(|e| s(&e))?;
            if *matrix {
                let a = shapley_matrix(v.n()).map_err(|e| s(&e))?;
                Ok(Computed::ok(json!({ "allocation": AllocationDocument::from(&a) })))
            } else {
                let phi = shapley_value(&v).map_err(|e| s(&e))?;
                Ok(Computed::ok(json!({ "payoffs": phi.0 })))
            }
        }
        Command::CheckGame { game } => {
            let v = load_game(game).map_err(|e| s(&e))?;
            let minimal: Vec<String> = v.minimal_sets().into_iter().map(|c| c.label()).collect();
            Ok(Computed::ok(json!({
                "n": v.n(),
                "monotone": v.is_monotone(),
                "superadditive": v.is_superadditive(),
                "binary": v.is_binary(),
                "minimal_sets": minimal,
            })))
        }
        Command::Special { n, perm } => {
            let chain = SetChain::parse_one_based(perm).map_err(|e| s(&e))?;
            if chain.n() != *n {
                return Err(format!("--perm lists {} players but --n is {n}", chain.n()));
            }
            let a = special_allocation(&chain);
            Ok(Computed::ok(json!({
                "permutation": chain.one_based(),
                "allocation": AllocationDocument::from(&a),
            })))
        }
        Command::Verify { allocation } => {
            let a = load_allocation(allocation).map_err(|e| s(&e))?;
            let reports = [
                check_efficiency(&a, tol),
                check_reasonable_structural(&a, tol),
                check_abs_sums(&a, tol),
                check_row_sums_zero(&a, tol),
                check_level_abs_sums(&a, tol),
            ];
            let pass = reports.iter().all(|r| r.pass);
            let characterized = reports[0].pass && reports[1].pass;
            let notes = reports
                .iter()
                .flat_map(|r| r.violations.iter().map(move |v| format!("{}: {v}", r.name)))
                .collect();
            Ok(Computed {
                pass,
                seed: None,
                result: json!({
                    "reasonable_efficient": characterized,
                    "reports": reports_json(&reports),
                }),
                notes,
            })
        }
        Command::Falsify { allocation, sampler, trials, seed } => {
            let a = load_allocation(allocation).map_err(|e| s(&e))?;
            let hit =
                sample_reasonableness_violation(&a, *sampler, *trials, *seed, tol).map_err(|e| s(&e))?;
            let violation = match &hit {
                None => Value::Null,
                Some(h) => json!({
                    "game_index": h.game_index,
                    "game_label": h.game_label,
                    "player": h.player + 1,
                    "observed": h.observed,
                    "lower": h.lower,
                    "upper": h.upper,
                    "game": GameDocument::from(&h.game),
                }),
            };
            Ok(Computed {
                pass: hit.is_none(),
                seed: Some(*seed),
                result: json!({
                    "sampler": sampler.name(),
                    "trials": trials,
                    "violation": violation,
                }),
                notes: hit.iter().map(|h| h.to_string()).collect(),
            })
        }
        Command::Decompose { allocation } => {
            let a = load_allocation(allocation).map_err(|e| s(&e))?;
            match peel_decompose(&a, tol) {
                Ok((d, trace)) => {
                    let check = verify_decomposition(&a, &d, 10.0 * tol);
                    let steps: Vec<Value> = trace
                        .steps
                        .iter()
                        .map(|st| {
                            json!({
                                "permutation": st.chain.one_based(),
                                "epsilon": st.epsilon,
                                "residual_max_abs": st.residual_max_abs,
                            })
                        })
                        .collect();
                    let residual = trace.steps.last().map_or(a.max_abs(), |st| st.residual_max_abs);
                    Ok(Computed {
                        pass: check.pass,
                        seed: None,
                        result: json!({
                            "decomposition": DecompositionDocument::from(&d),
                            "trace": {
                                "steps": trace.steps.len(),
                                "step_limit": step_limit(a.n()),
                                "total_weight": d.total_weight(),
                                "final_residual_max_abs": residual,
                                "peeled": steps,
                            },
                            "certificate_check": check,
                        }),
                        notes: Vec::new(),
                    })
                }
                Err(DecomposeError::Input(e)) => Err(e.to_string()),
                Err(err) => {
                    let reports = match &err {
                        DecomposeError::Precondition { failed } => reports_json(failed),
                        _ => json!([]),
                    };
                    Ok(Computed {
                        pass: false,
                        seed: None,
                        result: json!({ "error": err.to_string(), "reports": reports }),
                        notes: vec![err.to_string()],
                    })
                }
            }
        }
        Command::VerifyCert { allocation, cert } => {
            let a = load_allocation(allocation).map_err(|e| s(&e))?;
            let d = load_decomposition(cert).map_err(|e| s(&e))?;
            let report = verify_decomposition(&a, &d, tol);
            Ok(Computed {
                pass: report.pass,
                seed: None,
                notes: report.violations.iter().map(|v| v.to_string()).collect(),
                result: json!({ "report": report }),
            })
        }
        Command::Generate { n, support, seed } => {
            let (a, d) = random_allocation(*n, *support, *seed).map_err(|e| s(&e))?;
            Ok(Computed {
                pass: true,
                seed: Some(*seed),
                result: json!({
                    "allocation": AllocationDocument::from(&a),
                    "certificate": DecompositionDocument::from(&d),
                }),
                notes: Vec::new(),
            })
        }
        Command::Payoff { allocation, game } => {
            let a = load_allocation(allocation).map_err(|e| s(&e))?;
            let v = load_game(game).map_err(|e| s(&e))?;
            let phi = apply_allocation(&a, &v).map_err(|e| s(&e))?;
            Ok(Computed::ok(json!({ "payoffs": phi.0 })))
        }
        Command::Span { game } => {
            let v = load_game(game).map_err(|e| s(&e))?;
            let terms = span_decompose_monotone_binary(&v).map_err(|e| s(&e))?;
            let terms: Vec<Value> = terms
                .iter()
                .map(|t| {
                    json!({
                        "coefficient": t.coefficient,
                        "generator": t.generator.map(|c| c.label()),
                        "values": t.game.values(),
                    })
                })
                .collect();
            Ok(Computed::ok(json!({ "terms": terms })))
        }
    }
}
