use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use nnrank::bounds::{nnr_bracket, rectangle_cover, support, BoundsError};
use nnrank::certificates::{verify, Certificate};
use nnrank::nmf::{run_nmf, to_float, NmfConfig};

use nnrank_cli::claims::{run_claims, ClaimStatus, DEFAULT_SEED};
use nnrank_cli::targets::resolve_target;

/// Pinned seed whose first restart reaches the k = 19 target on the
/// built-in matrix A.
const DEFAULT_NMF_SEED: u64 = 35;

#[derive(Parser)]
#[command(
    name = "nnrank",
    version,
    about = "Exact nonnegative-rank brackets, certificates, and a numeric probe"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum EmitFormat {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Serialize a built-in matrix (A, V, B, C, M1..M4, onesMxN) to JSON or CSV
    Emit {
        /// Target name; B and C take --params
        name: String,
        /// Comma-separated parameters, e.g. `1,1,1,1,1` or `2-1*sqrt(2)`
        #[arg(long)]
        params: Option<String>,
        #[arg(long, value_enum, default_value = "json")]
        format: EmitFormat,
        /// Indent JSON output
        #[arg(long)]
        pretty: bool,
    },
    /// Serialize a built-in certificate (A, M1, or B with --params)
    Cert {
        /// Certificate name: A, M1, or B
        name: String,
        /// Equal alpha parameters for the B certificate
        #[arg(long)]
        params: Option<String>,
        /// Indent JSON output
        #[arg(long)]
        pretty: bool,
    },
    /// Verify a certificate file against a target; exit 0 iff valid
    Verify {
        /// Path to a certificate JSON file
        cert: PathBuf,
        /// Target name or path to a matrix JSON file
        target: String,
        #[arg(long)]
        pretty: bool,
    },
    /// Exact lower bounds and optional certificate upper bound for a target
    Bounds {
        /// Target name or path to a matrix JSON file
        target: String,
        /// Certificate supplying the upper bound; must verify exactly
        #[arg(long)]
        cert: Option<PathBuf>,
        /// Include a minimum rectangle cover witness
        #[arg(long)]
        witness: bool,
        #[arg(long)]
        pretty: bool,
    },
    /// Run the built-in claims suite; exit 0 iff nothing fails
    Claims {
        /// Run a single claim by id
        #[arg(long)]
        filter: Option<String>,
        /// Seed for the randomized suites
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        /// Print an aligned table instead of JSON
        #[arg(long)]
        pretty: bool,
    },
    /// Numeric factorization probe (multiplicative updates with restarts)
    Nmf {
        /// Target name or path to a matrix JSON file; must be nonnegative
        target: String,
        /// Inner dimension to probe
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 50)]
        restarts: usize,
        #[arg(long, default_value_t = DEFAULT_NMF_SEED)]
        seed: u64,
        #[arg(long = "max-iters", default_value_t = 20_000)]
        max_iters: usize,
        /// Stop once the relative residual reaches this value
        #[arg(long, default_value_t = 1e-3)]
        tol: f64,
        /// Write a `restart,residual,iterations` CSV table to this path
        #[arg(long = "residual-table")]
        residual_table: Option<PathBuf>,
        #[arg(long)]
        pretty: bool,
    },
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode, String> {
    match cli.command {
        Command::Emit {
            name,
            params,
            format,
            pretty,
        } => {
            let matrix = resolve_target(&name, params.as_deref())?;
            match format {
                EmitFormat::Json => println!("{}", matrix.to_json(pretty)),
                EmitFormat::Csv => print!("{}", matrix.to_csv().map_err(|e| e.to_string())?),
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Cert {
            name,
            params,
            pretty,
        } => {
            let cert = match (name.to_ascii_uppercase().as_str(), params) {
                ("A", None) => nnrank::certificates::cert_a(),
                ("M1", None) => nnrank::certificates::cert_m1(),
                ("B", Some(params)) => {
                    let alphas = nnrank_cli::targets::parse_params(&params)?;
                    nnrank::certificates::cert_b(&alphas).map_err(|e| e.to_string())?
                }
                ("B", None) => return Err("certificate `B` needs --params".to_string()),
                (other, _) => {
                    return Err(format!(
                        "unknown certificate `{other}` (known: A, M1, B) or stray --params"
                    ))
                }
            };
            println!("{}", cert.to_json(pretty));
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify {
            cert,
            target,
            pretty,
        } => {
            let cert_text =
                std::fs::read_to_string(&cert).map_err(|e| format!("reading {cert:?}: {e}"))?;
            let cert = Certificate::from_json(&cert_text).map_err(|e| e.to_string())?;
            let target = resolve_target(&target, None)?;
            let report = verify(&cert, &target).map_err(|e| e.to_string())?;
            if pretty {
                println!(
                    "{} factors, sum {}, {}",
                    report.factor_count,
                    if report.sum_matches { "exact" } else { "MISMATCH" },
                    if report.all_nonnegative {
                        "all nonnegative"
                    } else {
                        "NEGATIVE entries present"
                    }
                );
                if let Some(mm) = &report.first_mismatch {
                    println!(
                        "first mismatch at ({}, {}): expected {}, got {}",
                        mm.row, mm.col, mm.expected, mm.got
                    );
                }
            } else {
                let doc = json!({
                    "valid": report.is_valid(),
                    "sum_matches": report.sum_matches,
                    "all_nonnegative": report.all_nonnegative,
                    "factor_count": report.factor_count,
                    "first_mismatch": report.first_mismatch.as_ref().map(|mm| json!({
                        "row": mm.row,
                        "col": mm.col,
                        "expected": mm.expected.to_string(),
                        "got": mm.got.to_string(),
                    })),
                });
                println!("{doc}");
            }
            Ok(if report.is_valid() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }
        Command::Bounds {
            target,
            cert,
            witness,
            pretty,
        } => {
            let matrix = resolve_target(&target, None)?;
            let cert = match cert {
                None => None,
                Some(path) => {
                    let text = std::fs::read_to_string(&path)
                        .map_err(|e| format!("reading {path:?}: {e}"))?;
                    Some(Certificate::from_json(&text).map_err(|e| e.to_string())?)
                }
            };
            let report = nnr_bracket(&matrix, cert.as_ref()).map_err(|e| e.to_string())?;
            let cover = if witness {
                match rectangle_cover(&support(&matrix)) {
                    Ok(cover) => Some(cover.witness),
                    Err(BoundsError::TooLarge { .. }) => None,
                    Err(e) => return Err(e.to_string()),
                }
            } else {
                None
            };
            let mut doc = serde_json::to_value(&report).expect("report serializes");
            if let Some(cover) = cover {
                doc["cover"] = serde_json::to_value(cover).expect("witness serializes");
            }
            if pretty {
                println!("{}", serde_json::to_string_pretty(&doc).expect("valid json"));
            } else {
                println!("{doc}");
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Claims {
            filter,
            seed,
            pretty,
        } => {
            let results = run_claims(seed, filter.as_deref())?;
            if pretty {
                for r in &results {
                    let status = match r.status {
                        ClaimStatus::Pass => "PASS   ",
                        ClaimStatus::Fail => "FAIL   ",
                        ClaimStatus::Skipped => "SKIPPED",
                    };
                    println!("{status} {:<32} {}", r.id, r.details);
                }
            } else {
                println!(
                    "{}",
                    serde_json::to_string(&results).expect("claim results serialize")
                );
            }
            let failed = results.iter().any(|r| r.status == ClaimStatus::Fail);
            Ok(if failed {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            })
        }
        Command::Nmf {
            target,
            k,
            restarts,
            seed,
            max_iters,
            tol,
            residual_table,
            pretty,
        } => {
            let matrix = resolve_target(&target, None)?;
            let float = to_float(&matrix);
            let config = NmfConfig {
                k,
                max_iters,
                restarts,
                seed,
                epsilon: 1e-12,
                target_residual: Some(tol),
            };
            let result = run_nmf(&float, &config).map_err(|e| e.to_string())?;
            if let Some(path) = residual_table {
                let mut table = String::from("restart,residual,iterations\n");
                for record in &result.restarts {
                    table.push_str(&format!(
                        "{},{:e},{}\n",
                        record.index, record.residual, record.iterations
                    ));
                }
                std::fs::write(&path, table).map_err(|e| format!("writing {path:?}: {e}"))?;
            }
            if pretty {
                println!(
                    "k = {k}: best relative residual {:e} (restart {}, {} iterations, {} restarts run)",
                    result.residual,
                    result.best_restart,
                    result.iterations,
                    result.restarts.len()
                );
            } else {
                let doc = json!({
                    "k": k,
                    "seed": seed,
                    "restarts_run": result.restarts.len(),
                    "best_restart": result.best_restart,
                    "iterations": result.iterations,
                    "residual": result.residual,
                });
                println!("{doc}");
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}
