//! CSV ledgers of the bound tracers.

use std::io::Write;

use anyhow::Result;
use num_bigint::{BigInt, BigUint};
use roundlab_core::games::tracer::approx_log2;
use roundlab_core::games::{GtTrace, PredTrace};
use roundlab_core::rational::render;

use crate::record::fmt_num;

/// Exact below 2^128, otherwise `2^<log2>` to 12 digits.
fn big(v: &BigUint) -> String {
    if v.bits() <= 128 {
        v.to_string()
    } else {
        format!("2^{}", fmt_num(approx_log2(v)))
    }
}

fn big_signed(v: &BigInt) -> String {
    match v.to_biguint() {
        Some(u) => big(&u),
        None => v.to_string(),
    }
}

pub fn write_gt<W: Write>(out: W, tr: &GtTrace) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["stage", "n", "k", "k_approx", "epsilon"])?;
    for s in &tr.stages {
        w.write_record([
            s.stage.to_string(),
            big_signed(&s.n),
            s.k.as_ref().map(|k| k.render()).unwrap_or_default(),
            s.k.as_ref().map(|k| fmt_num(k.to_f64())).unwrap_or_default(),
            render(&s.epsilon),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn gt_summary(tr: &GtTrace) -> Vec<(String, String)> {
    let mut v = vec![
        ("t".into(), tr.t.to_string()),
        ("C".into(), tr.c.render()),
        ("precondition".into(), tr.precondition.to_string()),
        ("final_epsilon".into(), render(&tr.final_epsilon)),
        ("epsilon_is_half".into(), tr.epsilon_is_half.to_string()),
        ("final_n_positive".into(), tr.final_n_positive.to_string()),
        ("contradiction".into(), tr.contradiction.to_string()),
    ];
    if let Some(f) = &tr.failure_stage {
        v.push(("failure_stage".into(), f.clone()));
    }
    v.extend(tr.rounding.iter().map(|r| ("rounding".into(), r.clone())));
    v
}

pub fn write_pred<W: Write>(out: W, tr: &PredTrace) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record([
        "stage",
        "rounds",
        "overhead_a",
        "overhead_b_factor",
        "domain_bits",
        "log2_set_lo",
        "log2_set_hi",
        "epsilon",
    ])?;
    for s in &tr.stages {
        w.write_record([
            s.stage.to_string(),
            s.rounds.to_string(),
            big(&s.overhead_a),
            s.overhead_b_factor.to_string(),
            big(&s.domain_bits),
            big_signed(&s.set_log2.0),
            big_signed(&s.set_log2.1),
            render(&s.epsilon),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn pred_summary(tr: &PredTrace) -> Vec<(String, String)> {
    let mut v = vec![
        ("loglog_m".into(), tr.params.loglog_m.to_string()),
        ("lll".into(), tr.lll.to_string()),
        ("log_n".into(), big(&tr.log_n)),
        ("c1".into(), tr.c1.render()),
        ("a".into(), big(&tr.a)),
        ("b_log2".into(), tr.b_log2.to_string()),
        ("t_theorem".into(), tr.t_theorem.to_string()),
        ("t".into(), tr.t.to_string()),
        ("final_epsilon".into(), render(&tr.final_epsilon)),
        ("contradiction".into(), tr.contradiction.to_string()),
    ];
    if let Some(c) = tr.collapse {
        v.push(("collapse".into(), c.to_string()));
    }
    if let Some(c) = &tr.checks {
        v.push(("exponent_witness".into(), c.exponent_witness.to_string()));
        v.push(("domain_room".into(), c.domain_room.to_string()));
        v.push(("set_nonempty".into(), c.set_nonempty.to_string()));
        v.push(("error_below_half".into(), c.error_below_half.to_string()));
    }
    v.extend(tr.rounding.iter().map(|r| ("rounding".into(), r.clone())));
    v
}
