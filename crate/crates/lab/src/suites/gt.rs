//! The greater-than upper-bound protocol, run on random inputs.

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use roundlab_core::games::*;
use roundlab_core::rational::ratio;

use super::run_cases;
use crate::config::ExperimentConfig;
use crate::record::ResultRecord;

const SUITE: &str = "gt-protocol";

const CONFIGS: [(usize, usize); 6] = [(16, 1), (16, 2), (16, 3), (16, 4), (8, 1), (64, 3)];

/// Equal inputs, independent inputs, or a first difference at a random position.
fn pair(rng: &mut ChaCha8Rng, n: usize) -> (u64, u64) {
    let mask = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    let x = rng.random::<u64>() & mask;
    let y = match rng.random_range(0..4) {
        0 => x,
        1 => rng.random::<u64>() & mask,
        _ => {
            let pos = rng.random_range(0..n);
            let low = (1u64 << (n - 1 - pos)) - 1;
            ((x ^ (1u64 << (n - 1 - pos))) & !low) | (rng.random::<u64>() & low)
        }
    };
    (x, y)
}

fn ceil_log2(v: usize) -> usize {
    (usize::BITS - (v.max(1) - 1).leading_zeros()) as usize
}

pub fn run(cfg: &ExperimentConfig) -> Vec<ResultRecord> {
    let trials = cfg.trials_or(10_000) as u64;
    run_cases(cfg, CONFIGS.len() as u64, |i, rng| {
        let (n, t) = CONFIGS[i as usize];
        let mut rec = ResultRecord::new(SUITE, i, format!("n{n}-t{t}"), &format!("n={n} t={t} trials={trials} delta=1/3"));
        let p = match gt_protocol(n, t, ratio(1, 3)) {
            Ok(p) => p,
            Err(e) => return rec.error("build", e).clone(),
        };
        let mut errors = 0u64;
        let mut max_bits = 0usize;
        let mut rounds_ok = true;
        for _ in 0..trials {
            let (x, y) = pair(rng, n);
            let (bx, by) = (BitString::new(x, n), BitString::new(y, n));
            let run = match (bx, by) {
                (Ok(bx), Ok(by)) => p.run(&bx, &by, rng),
                (Err(e), _) | (_, Err(e)) => Err(e),
            };
            match run {
                Ok(r) => {
                    errors += (r.answer != (x > y)) as u64;
                    max_bits = max_bits.max(r.bits[0] + r.bits[1]);
                    rounds_ok &= r.messages.len() == t;
                }
                Err(e) => return rec.error("run", e).clone(),
            }
        }
        let err = errors as f64 / trials as f64;
        // 4·t·n^{1/t}·⌈log(3nt)⌉
        let bound = 4.0 * t as f64 * (n as f64).powf(1.0 / t as f64) * ceil_log2(3 * n * t) as f64;
        rec.measure("trials", &trials).measure("errors", &errors);
        rec.at_most("empirical_error", err, 1.0 / 3.0, 0.0);
        rec.at_most("communication", max_bits as f64, bound, 1e-9);
        rec.at_most("worst_case_communication", p.worst_case_bits() as f64, bound, 1e-9);
        rec.check("within_bound_exact", p.within_bound(p.worst_case_bits()));
        rec.check("rounds", rounds_ok);
        rec
    })
}
