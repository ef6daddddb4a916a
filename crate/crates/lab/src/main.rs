use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};
use num_bigint::BigUint;
use roundlab::config::{parse_u64_list, ExperimentConfig, Suite};
use roundlab::trace;
use roundlab_core::games::{trace_gt_bound, trace_predecessor_bound, PredecessorParams};
use roundlab_core::rational;

#[derive(Parser)]
#[command(name = "lab", version, about = "Round-elimination experiment runner")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run a suite and append its records to a JSON-lines file.
    Run {
        #[arg(long)]
        suite: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
        /// Largest protocol width in qubits (env LAB_CAP_QUBITS).
        #[arg(long)]
        cap_qubits: Option<usize>,
        /// Random cases or trials per configuration (env LAB_TRIALS).
        #[arg(long)]
        trials: Option<usize>,
        /// Record wall time per case; breaks byte-identical reruns.
        #[arg(long)]
        timings: bool,
    },
    /// Summarize a records file as CSV.
    Report {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Print a bound ledger as CSV.
    Trace {
        #[command(subcommand)]
        which: TraceCmd,
    },
}

#[derive(Subcommand)]
enum TraceCmd {
    /// Greater-than: input length and message lengths.
    Gt {
        #[arg(long)]
        n: String,
        #[arg(long)]
        l: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Predecessor over m = 2^(2^m_exp) keys.
    Pred {
        #[arg(long)]
        m_exp: u64,
        #[arg(long)]
        c2: u64,
        #[arg(long)]
        c3: u64,
        #[arg(long, default_value = "97/300")]
        delta: String,
        /// Round count to use instead of the theorem's.
        #[arg(long)]
        t: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn emit(out: Option<PathBuf>, f: impl FnOnce(&mut dyn Write) -> Result<()>) -> Result<()> {
    match out {
        Some(p) => {
            let mut buf = Vec::new();
            f(&mut buf)?;
            std::fs::write(&p, buf).with_context(|| format!("cannot write {}", p.display()))
        }
        None => f(&mut std::io::stdout().lock()),
    }
}

fn summary(rows: Vec<(String, String)>) {
    for (k, v) in rows {
        eprintln!("{k}: {v}");
    }
}

fn run(cli: Cli) -> Result<bool> {
    match cli.cmd {
        Cmd::Run {
            suite,
            seed,
            out,
            cap_qubits,
            trials,
            timings,
        } => {
            let suite: Suite = suite.parse()?;
            let mut cfg = ExperimentConfig::new(suite, seed, out);
            cfg.apply_env()?;
            if let Some(q) = cap_qubits {
                cfg.caps.qubits = q;
            }
            if trials.is_some() {
                cfg.trials = trials;
            }
            cfg.timings = timings;
            let records = roundlab::run_to_file(&cfg)?;
            let failed = records.iter().filter(|r| !r.pass).count();
            eprintln!("{suite}: {} records, {failed} failed", records.len());
            for r in records.iter().filter(|r| !r.pass) {
                let bad: Vec<_> = r.checks.iter().filter(|c| !c.1).map(|c| c.0.as_str()).collect();
                eprintln!("  FAIL case {} ({}): {}", r.case, r.name, bad.join(", "));
            }
            Ok(failed == 0)
        }
        Cmd::Report { input, out } => {
            let rows = roundlab::emit_report(&input, &out)?;
            Ok(rows.iter().all(|r| r.failures == 0))
        }
        Cmd::Trace { which } => match which {
            TraceCmd::Gt { n, l, out } => {
                let n: BigUint = n.trim().parse().with_context(|| format!("bad --n `{n}`"))?;
                let l = parse_u64_list(&l)?;
                let tr = trace_gt_bound(&n, &l)?;
                emit(out, |w| trace::write_gt(w, &tr))?;
                summary(trace::gt_summary(&tr));
                Ok(true)
            }
            TraceCmd::Pred {
                m_exp,
                c2,
                c3,
                delta,
                t,
                out,
            } => {
                let params = PredecessorParams {
                    loglog_m: m_exp,
                    c2,
                    c3,
                    delta: rational::parse(&delta)?,
                    t,
                };
                let tr = trace_predecessor_bound(&params)?;
                emit(out, |w| trace::write_pred(w, &tr))?;
                summary(trace::pred_summary(&tr));
                Ok(true)
            }
        },
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
