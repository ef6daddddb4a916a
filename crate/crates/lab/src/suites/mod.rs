//! The experiment suites.
//!
//! Every case draws from its own ChaCha stream: the suite seed with the case
//! index as stream id. Cases run in parallel and are collected in index order.

mod cellprobe;
mod gt;
mod info;
mod reductions;
mod roundelim;
mod tracers;

use std::fs::OpenOptions;
use std::time::Instant;

use anyhow::{Context, Result};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::config::{ExperimentConfig, Suite};
use crate::record::{sig12, write_records, ResultRecord};

pub fn case_rng(seed: u64, case: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(case);
    rng
}

/// Runs `n` cases of `f` and returns their records in case order.
pub(crate) fn run_cases<F>(cfg: &ExperimentConfig, n: u64, f: F) -> Vec<ResultRecord>
where
    F: Fn(u64, &mut ChaCha8Rng) -> ResultRecord + Sync,
{
    (0..n)
        .into_par_iter()
        .map(|i| {
            let start = Instant::now();
            let mut rng = case_rng(cfg.seed, i);
            let mut r = f(i, &mut rng);
            if cfg.timings {
                r.wall_ms = Some(sig12(start.elapsed().as_secs_f64() * 1e3));
            }
            r
        })
        .collect()
}

/// Executes the configured suite without touching the output file.
pub fn run_suite(cfg: &ExperimentConfig) -> Result<Vec<ResultRecord>> {
    cfg.validate()?;
    Ok(match cfg.suite {
        Suite::InfoIdentities => info::identities(cfg),
        Suite::AverageEncoding => info::average_encoding(cfg),
        Suite::LocalTransition => info::local_transition(cfg),
        Suite::ClassicalRoundelim => roundelim::classical(cfg),
        Suite::QuantumRoundelim => roundelim::quantum(cfg),
        Suite::Reductions => reductions::run(cfg),
        Suite::CellprobeCompile => cellprobe::run(cfg),
        Suite::BoundTracers => tracers::run(cfg),
        Suite::GtProtocol => gt::run(cfg),
    })
}

/// Runs the suite and appends its records to `cfg.out`. The file is opened
/// first so an unwritable path fails before any work.
pub fn run_to_file(cfg: &ExperimentConfig) -> Result<Vec<ResultRecord>> {
    cfg.validate()?;
    let file = OpenOptions::new()
        .create(true)
        .append(true)
        .open(&cfg.out)
        .with_context(|| format!("cannot write {}", cfg.out.display()))?;
    let records = run_suite(cfg)?;
    write_records(std::io::BufWriter::new(file), &records)
        .with_context(|| format!("cannot write {}", cfg.out.display()))?;
    Ok(records)
}
