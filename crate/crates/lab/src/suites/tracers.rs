//! Exact replays of the greater-than and predecessor iterations.

use num_bigint::BigUint;
use roundlab_core::games::*;
use roundlab_core::rational::{ratio, to_f64};

use super::run_cases;
use crate::config::ExperimentConfig;
use crate::record::ResultRecord;

const SUITE: &str = "bound-tracers";

#[derive(Debug, Clone)]
enum Case {
    /// `n = (6000·t³·Σl)^t`, above the precondition.
    Gt(Vec<u64>),
    /// `n` given directly, with the expected precondition outcome.
    GtAt(u64, Vec<u64>, bool),
    Pred(PredecessorParams),
}

pub fn delta() -> roundlab_core::rational::Ratio {
    ratio(1, 3) - ratio(1, 100)
}

fn cases() -> Vec<Case> {
    let pred = PredecessorParams {
        loglog_m: 1 << 21,
        c2: 1,
        c3: 1,
        delta: delta(),
        t: None,
    };
    vec![
        Case::Gt(vec![3]),
        Case::Gt(vec![1, 2]),
        Case::Gt(vec![2, 5, 1]),
        // 20736·ln 2 ≈ 14373.1
        Case::GtAt(14374, vec![4], true),
        Case::GtAt(14373, vec![4], false),
        Case::Pred(pred.clone()),
        Case::Pred(PredecessorParams {
            loglog_m: 16,
            t: Some(3),
            ..pred
        }),
    ]
}

fn gt_record(i: u64, n: BigUint, l: &[u64], expect_pre: bool) -> ResultRecord {
    let mut rec = ResultRecord::new(SUITE, i, "gt", &format!("n={n} l={l:?}"));
    match trace_gt_bound(&n, l) {
        Ok(tr) => {
            let last = tr.stages.last().map(|s| s.n.clone()).unwrap_or_default();
            rec.measure("t", &tr.t)
                .measure("n", &n.to_string())
                .measure("final_n", &last.to_string())
                .measure("epsilon_t", &tr.final_epsilon)
                .measure("precondition", &tr.precondition)
                .bound("epsilon_t", &ratio(1, 2));
            rec.check("precondition_as_expected", tr.precondition == expect_pre);
            // ε_t = 1/3 + t/(6t) = 1/2 holds whatever n is
            rec.check("epsilon_is_half", tr.final_epsilon == ratio(1, 2) && tr.epsilon_is_half);
            if expect_pre {
                rec.check("final_n_positive", tr.final_n_positive && last >= 1.into());
                rec.check("contradiction", tr.contradiction);
                let steps_ok = tr
                    .stages
                    .windows(2)
                    .all(|w| &w[1].epsilon - &w[0].epsilon == ratio(1, 6 * tr.t as i64));
                rec.check("epsilon_steps", steps_ok);
            } else {
                rec.check("no_contradiction", !tr.contradiction);
            }
        }
        Err(e) => {
            rec.error("trace", e);
        }
    }
    rec
}

fn pred_record(i: u64, params: &PredecessorParams) -> ResultRecord {
    let name = if params.t.is_some() { "predecessor-forced-t" } else { "predecessor" };
    let mut rec = ResultRecord::new(SUITE, i, name, &format!("{params:?}"));
    match trace_predecessor_bound(params) {
        Ok(tr) => {
            rec.measure("loglog_m", &params.loglog_m)
                .measure("t", &tr.t)
                .measure("delta", &params.delta)
                .measure("epsilon_t", &tr.final_epsilon);
            if params.t.is_none() {
                let want = &params.delta + ratio(1, 6);
                rec.check("epsilon_is_delta_plus_sixth", tr.final_epsilon == want);
                rec.at_most("epsilon_below_half", to_f64(&tr.final_epsilon), 0.5, 0.0);
                rec.check("strictly_below_half", tr.final_epsilon < ratio(1, 2));
                let checks = tr.checks.as_ref();
                rec.check(
                    "stage_checks",
                    checks.is_some_and(|c| c.exponent_witness && c.domain_room && c.set_nonempty && c.error_below_half),
                );
                rec.check("contradiction", tr.contradiction);
            } else {
                // too few bits for three rounds: the ledger must report the collapse
                rec.measure("collapse", &tr.collapse.map_or(-1, |c| c as i64));
                rec.check("collapse_reported", tr.collapse.is_some() && !tr.contradiction);
            }
        }
        Err(e) => {
            rec.error("trace", e);
        }
    }
    rec
}

pub fn run(cfg: &ExperimentConfig) -> Vec<ResultRecord> {
    let cases = cases();
    run_cases(cfg, cases.len() as u64, |i, _| match &cases[i as usize] {
        Case::Gt(l) => {
            let t = l.len() as u64;
            let n = BigUint::from(6000 * t.pow(3) * l.iter().sum::<u64>()).pow(t as u32);
            gt_record(i, n, l, true)
        }
        Case::GtAt(n, l, pre) => gt_record(i, BigUint::from(*n), l, *pre),
        Case::Pred(p) => pred_record(i, p),
    })
}
