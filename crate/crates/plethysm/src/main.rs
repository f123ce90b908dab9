//! Command-line front end: counting, conjecture checks, partition scans,
//! Black–List rank checks, matrix export and the identity suite.
//!
//! Exit codes: 0 — every requested check is consistent with the targeted
//! conjecture or theorem; 1 — usage, parse or I/O error; 2 — a certified
//! failure was found (for example a shape whose rows cannot be independent
//! by counting); 3 — undetermined because a resource cap was hit.

use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::str::FromStr;
use std::time::Instant;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand};
use serde_json::json;

use plethysm::conjectures::{
    blacklist, check_shape, count_shape, scan, verify_proof, CheckConfig, CheckMode,
    ConjectureVerdict,
};
use plethysm::exactlinalg::CertPolicy;
use plethysm::ortho::{self, ExportFormat};
use plethysm::partitions::Partition;
use plethysm::report::{records_to_csv, verdicts_to_csv, verdicts_to_jsonl, Report};
use plethysm::Error;

#[derive(Parser)]
#[command(
    name = "plethysm",
    version,
    about = "Tableau counting, orthogonality matrices and certified rank checks \
             for the plethysm conjectures"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Comma-separated primes for the modular rank engine (each < 2^31).
    #[arg(long, global = true)]
    primes: Option<String>,

    /// Cap on the number of tableaux any single enumeration may produce.
    #[arg(long, global = true)]
    max_enum: Option<u64>,

    /// Side cap for the exact (fraction-free) rank engine.
    #[arg(long, global = true)]
    max_exact: Option<usize>,

    /// Worker threads; defaults to the available parallelism. Output bytes
    /// do not depend on this.
    #[arg(long, global = true)]
    threads: Option<usize>,

    /// Optional key=value config file (primes, max-enum, max-exact,
    /// threads, out); flags override file values.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Output format: json or csv for reports, mm or dense for matrices.
    #[arg(long, global = true)]
    format: Option<String>,

    /// Write output to this path instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Exact |H_λ|, |V_λ| and the dominance comparison; no enumeration.
    Count {
        /// Shape, e.g. "[6,2,2,1,1]" or "2x5".
        #[arg(long)]
        shape: String,
    },
    /// Check one shape against conjecture1 (row independence under
    /// dominance) or conjecture2 (full rank).
    Check {
        #[arg(long)]
        shape: String,
        /// conjecture1 or conjecture2.
        #[arg(long)]
        mode: String,
    },
    /// One verdict per partition of N, as JSON lines in enumeration order.
    Scan {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        mode: String,
    },
    /// Build M^{m,n}, certify its rank against |I_{n,m}| and compare with
    /// K of the m-by-n rectangle.
    Blacklist {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        n: usize,
    },
    /// Build K_λ (via --shape) or M^{m,n} (via --m/--n) and export it.
    Matrix {
        #[arg(long)]
        shape: Option<String>,
        #[arg(long)]
        m: Option<usize>,
        #[arg(long)]
        n: Option<usize>,
    },
    /// Run the identity suite for the two-row rectangle of width n.
    VerifyProof {
        #[arg(long)]
        n: usize,
    },
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum OutFormat {
    Json,
    Csv,
    MatrixMarket,
    Dense,
}

impl FromStr for OutFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s {
            "json" => Ok(OutFormat::Json),
            "csv" => Ok(OutFormat::Csv),
            "mm" => Ok(OutFormat::MatrixMarket),
            "dense" => Ok(OutFormat::Dense),
            _ => Err(Error::Parse {
                what: "format",
                input: s.to_string(),
                msg: "expected json, csv, mm or dense".into(),
                pos: 0,
            }),
        }
    }
}

/// Settings merged from defaults, the config file and flags, in that order.
struct Settings {
    cfg: CheckConfig,
    threads: Option<usize>,
    format: Option<OutFormat>,
    out: Option<PathBuf>,
}

fn parse_primes(s: &str) -> Result<Vec<u64>, Error> {
    s.split(',')
        .map(|piece| {
            piece.trim().parse::<u64>().map_err(|e| Error::Parse {
                what: "primes",
                input: s.to_string(),
                msg: format!("bad prime {piece:?}: {e}"),
                pos: 0,
            })
        })
        .collect()
}

fn load_settings(cli: &Cli) -> Result<Settings, Error> {
    let mut cfg = CheckConfig::default();
    let mut threads = None;
    let mut format = None;
    let mut out = None;

    if let Some(path) = &cli.config {
        let text = fs::read_to_string(path).map_err(|e| Error::Io {
            path: path.clone(),
            source: e,
        })?;
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let bad = |msg: String| Error::Parse {
                what: "config",
                input: raw.to_string(),
                msg,
                pos: lineno + 1,
            };
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| bad("expected key=value".into()))?;
            let value = value.trim();
            match key.trim() {
                "primes" => cfg.policy.primes = parse_primes(value)?,
                "max-enum" => {
                    cfg.max_enum = value.parse().map_err(|e| bad(format!("max-enum: {e}")))?
                }
                "max-exact" => {
                    cfg.policy.max_exact =
                        value.parse().map_err(|e| bad(format!("max-exact: {e}")))?
                }
                "threads" => {
                    threads = Some(value.parse().map_err(|e| bad(format!("threads: {e}")))?)
                }
                "out" => out = Some(PathBuf::from(value)),
                other => return Err(bad(format!("unknown key {other:?}"))),
            }
        }
    }

    if let Some(s) = &cli.primes {
        cfg.policy.primes = parse_primes(s)?;
    }
    if let Some(v) = cli.max_enum {
        cfg.max_enum = v;
    }
    if let Some(v) = cli.max_exact {
        cfg.policy.max_exact = v;
    }
    if let Some(v) = cli.threads {
        threads = Some(v);
    }
    if let Some(s) = &cli.format {
        format = Some(s.parse()?);
    }
    if let Some(p) = &cli.out {
        out = Some(p.clone());
    }
    if cfg.policy.primes.is_empty() {
        cfg.policy.primes = CertPolicy::default().primes;
    }

    Ok(Settings {
        cfg,
        threads,
        format,
        out,
    })
}

fn write_output(out: &Option<PathBuf>, text: &str) -> Result<(), Error> {
    match out {
        Some(path) => fs::write(path, text).map_err(|e| Error::Io {
            path: path.clone(),
            source: e,
        }),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .and_then(|_| stdout.flush())
                .map_err(|e| Error::Io {
                    path: PathBuf::from("<stdout>"),
                    source: e,
                })
        }
    }
}

fn params_json(settings: &Settings, extra: serde_json::Value) -> serde_json::Value {
    let mut params = json!({
        "primes": settings.cfg.policy.primes,
        "max_enum": settings.cfg.max_enum,
        "max_exact": settings.cfg.policy.max_exact,
    });
    if let serde_json::Value::Object(extra) = extra {
        params.as_object_mut().expect("object").extend(extra);
    }
    params
}

fn verdict_exit(verdicts: &[ConjectureVerdict]) -> i32 {
    if verdicts.iter().any(|v| v.is_certified_failure()) {
        2
    } else if verdicts.iter().any(|v| v.is_resource_undetermined()) {
        3
    } else {
        0
    }
}

fn report_format(settings: &Settings) -> Result<OutFormat, Error> {
    match settings.format {
        None => Ok(OutFormat::Json),
        Some(f @ (OutFormat::Json | OutFormat::Csv)) => Ok(f),
        Some(_) => Err(Error::InvalidArgument(
            "matrix formats (mm, dense) apply only to the matrix subcommand".into(),
        )),
    }
}

fn run(cli: &Cli) -> Result<i32, Error> {
    let settings = load_settings(cli)?;
    if let Some(t) = settings.threads {
        // Ignored if a global pool already exists; only throughput changes.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(t).build_global();
    }

    match &cli.command {
        Command::Count { shape } => {
            let start = Instant::now();
            let shape: Partition = shape.parse()?;
            let result = count_shape(&shape);
            let format = report_format(&settings)?;
            let text = match format {
                OutFormat::Json => {
                    let mut report =
                        Report::new("count", params_json(&settings, json!({"shape": shape})));
                    report.push(&result);
                    report.elapsed_ms = start.elapsed().as_millis() as u64;
                    report.to_json()
                }
                OutFormat::Csv => {
                    let mut text = String::from(
                        "shape,h_count,v_count,dominance_holds,comparison\n",
                    );
                    text.push_str(&format!(
                        "\"{}\",{},{},{},{}\n",
                        result.shape,
                        result.h_count,
                        result.v_count,
                        result.dominance_holds,
                        result.comparison
                    ));
                    text
                }
                _ => unreachable!(),
            };
            write_output(&settings.out, &text)?;
            Ok(0)
        }
        Command::Check { shape, mode } => {
            let start = Instant::now();
            let shape: Partition = shape.parse()?;
            let mode: CheckMode = mode.parse()?;
            let verdict = check_shape(&shape, mode, &settings.cfg)?;
            let format = report_format(&settings)?;
            let text = match format {
                OutFormat::Json => {
                    let mut report = Report::new(
                        "check",
                        params_json(&settings, json!({"shape": shape, "mode": mode})),
                    );
                    report.push(&verdict);
                    report.elapsed_ms = start.elapsed().as_millis() as u64;
                    report.to_json()
                }
                OutFormat::Csv => verdicts_to_csv(std::slice::from_ref(&verdict)),
                _ => unreachable!(),
            };
            write_output(&settings.out, &text)?;
            Ok(verdict_exit(std::slice::from_ref(&verdict)))
        }
        Command::Scan { n, mode } => {
            let mode: CheckMode = mode.parse()?;
            let verdicts = scan(*n, mode, &settings.cfg)?;
            let format = report_format(&settings)?;
            let text = match format {
                OutFormat::Json => verdicts_to_jsonl(&verdicts),
                OutFormat::Csv => verdicts_to_csv(&verdicts),
                _ => unreachable!(),
            };
            write_output(&settings.out, &text)?;
            Ok(verdict_exit(&verdicts))
        }
        Command::Blacklist { m, n } => {
            let start = Instant::now();
            let result = blacklist(*m, *n, &settings.cfg)?;
            let format = report_format(&settings)?;
            let text = match format {
                OutFormat::Json => {
                    let mut report = Report::new(
                        "blacklist",
                        params_json(&settings, json!({"m": m, "n": n})),
                    );
                    report.push(&result);
                    report.elapsed_ms = start.elapsed().as_millis() as u64;
                    report.to_json()
                }
                OutFormat::Csv => {
                    let mut text =
                        String::from("m,n,rows,cols,rank,certification,rank_equals_rows,matches_k\n");
                    text.push_str(&format!(
                        "{},{},{},{},{},{:?},{},{}\n",
                        result.m,
                        result.n,
                        result.rows,
                        result.cols,
                        result.rank_report.rank,
                        result.rank_report.certification,
                        result.rank_equals_rows,
                        result.matches_k_rectangle
                    ));
                    text
                }
                _ => unreachable!(),
            };
            write_output(&settings.out, &text)?;
            Ok(if result.rank_equals_rows && result.matches_k_rectangle {
                0
            } else if result.rank_report.certification
                == plethysm::exactlinalg::Certification::ModPEvidence
            {
                3
            } else {
                2
            })
        }
        Command::Matrix { shape, m, n } => {
            let matrix = match (shape, m, n) {
                (Some(shape), None, None) => {
                    let shape: Partition = shape.parse()?;
                    ortho::build_k_capped(&shape, settings.cfg.max_enum)?
                }
                (None, Some(m), Some(n)) => ortho::build_m_capped(*m, *n, settings.cfg.max_enum)?,
                _ => {
                    return Err(Error::InvalidArgument(
                        "matrix needs either --shape or both --m and --n".into(),
                    ))
                }
            };
            let format = match settings.format {
                None | Some(OutFormat::MatrixMarket) => ExportFormat::MatrixMarket,
                Some(OutFormat::Dense) => ExportFormat::Dense,
                Some(_) => {
                    return Err(Error::InvalidArgument(
                        "matrix export supports --format mm or dense".into(),
                    ))
                }
            };
            let path = settings.out.as_deref().ok_or_else(|| {
                Error::InvalidArgument("matrix export needs --out PATH".into())
            })?;
            ortho::export_matrix(&matrix, path, format)?;
            println!(
                "wrote {}x{} matrix ({} ones) to {} with labels at {}.labels",
                matrix.n_rows(),
                matrix.n_cols(),
                matrix.count_ones(),
                path.display(),
                path.display()
            );
            Ok(0)
        }
        Command::VerifyProof { n } => {
            let start = Instant::now();
            let result = verify_proof(*n, &settings.cfg)?;
            let format = report_format(&settings)?;
            let text = match format {
                OutFormat::Json => {
                    let mut report =
                        Report::new("verify-proof", params_json(&settings, json!({"n": n})));
                    for record in &result.records {
                        report.push(record);
                    }
                    report.push(&json!({
                        "check": "induction",
                        "n": result.n,
                        "steps": result.induction.steps,
                        "mu0_isolated": result.induction.mu0_isolated,
                        "pass": result.induction.pass,
                    }));
                    report.push(&json!({
                        "check": "left_kernel",
                        "n": result.n,
                        "rank_report": result.left_kernel_rank,
                        "pass": result.left_kernel_trivial,
                    }));
                    report.elapsed_ms = start.elapsed().as_millis() as u64;
                    report.to_json()
                }
                OutFormat::Csv => records_to_csv(&result.as_records()),
                _ => unreachable!(),
            };
            write_output(&settings.out, &text)?;
            Ok(if result.pass { 0 } else { 2 })
        }
    }
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            if matches!(
                err.kind(),
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion
            ) {
                print!("{err}");
                std::process::exit(0);
            }
            eprint!("{err}");
            std::process::exit(1);
        }
    };
    match run(&cli) {
        Ok(code) => std::process::exit(code),
        Err(err) => {
            eprintln!("error: {err}");
            std::process::exit(if err.is_resource_limit() { 3 } else { 1 });
        }
    }
}
