//! Classical and quantum round reduction and elimination.

use std::f64::consts::LN_2;

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use roundlab_core::info::{qubits_for, JointDistribution};
use roundlab_core::protocol::*;
use roundlab_core::random;
use roundlab_core::rational::{ratio, to_f64, Ratio};
use roundlab_core::roundelim::*;
use roundlab_core::tensor::Party;

use super::run_cases;
use crate::config::ExperimentConfig;
use crate::record::{digest, ResultRecord};

fn random_game(rng: &mut ChaCha8Rng, e: usize, f: usize) -> GameSpec {
    let t: Vec<u32> = (0..e * f).map(|_| rng.random_range(0..2)).collect();
    GameSpec::new("random", e, f, 2, t).expect("valid table")
}

fn random_dist(rng: &mut ChaCha8Rng, e: usize, f: usize) -> JointDistribution {
    JointDistribution::from_table(e, f, &random::distribution(e * f, 5, true, rng)).expect("valid distribution")
}

fn private_spec(e: usize, f: usize, lengths: Vec<usize>) -> RandomProtocolSpec {
    RandomProtocolSpec {
        shape: Shape {
            starter: Party::Alice,
            lengths,
            alice_inputs: e,
            bob_inputs: f,
            answers: 2,
        },
        public_values: 1,
        max_coin_outcomes: 3,
        granularity: 6,
    }
}

/// Alice sends `x_j` for a public uniform `j`; Bob answers when `j = i` and
/// guesses with a public bit otherwise.
pub fn index_protocol(n: usize) -> roundlab_core::Result<(ClassicalProtocol, GameSpec, GameSpec)> {
    let g = GameSpec::equality(1);
    let gn = g.direct_sum(n)?;
    let enc = SumEncoding::new(2, 2, n)?;
    let p = ClassicalProtocol::from_fn(
        Shape::for_game(&gn, Party::Alice, vec![1]),
        vec![ratio(1, 2 * n as i64); 2 * n],
        CoinSpace::trivial(),
        CoinSpace::trivial(),
        move |_, x, pb, _, _| enc.digits(x)[pb / 2] as u32,
        move |b, pb, _, tr| {
            let (i, y, _) = enc.split_bob(b);
            if pb / 2 == i {
                u32::from(tr as usize == y)
            } else {
                (pb % 2) as u32
            }
        },
    )?;
    Ok((p, g, gn))
}

const SUITE_C: &str = "classical-roundelim";
const SUITE_Q: &str = "quantum-roundelim";
const RANDOM_ELIMINATIONS: u64 = 6;

fn classical_reduce_case(cfg: &ExperimentConfig, i: u64, rng: &mut ChaCha8Rng) -> ResultRecord {
    let tol = cfg.tolerances.certificate;
    let e = rng.random_range(2..=4);
    let f = rng.random_range(2..=4);
    let g = random_game(rng, e, f);
    let d = random_dist(rng, e, f);
    let t = rng.random_range(1..=3);
    let lengths: Vec<usize> = (0..t).map(|_| rng.random_range(1..=2)).collect();
    // every fifth case sends a first message that ignores x
    let zero_info = i % 5 == 4;
    let name = if zero_info { "reduce-zero-information" } else { "reduce" };
    let mut rec = ResultRecord::new(SUITE_C, i, name, "");
    let out = (|| -> roundlab_core::Result<()> {
        let base = random_protocol(&private_spec(e, f, lengths.clone()), rng)?;
        let p = if zero_info {
            ClassicalProtocol::from_fn(
                base.shape(),
                base.public.clone(),
                base.alice_coin.clone(),
                base.bob_coin.clone(),
                |k, x, pb, c, tr| if k == 0 { (c % 2) as u32 } else { base.message(k, x, pb, c, tr) },
                |x, pb, c, tr| base.answer(x, pb, c, tr),
            )?
        } else {
            base
        };
        rec.digest = digest(&format!("{g:?} {d:?} {p:?}"));
        let (q, cert) = classical_round_reduce(&p, &g, &d)?;
        rec.measure("information", &cert.information)
            .measure("error_before", &cert.error_before)
            .measure("signature_before", &cert.before.render())
            .measure("signature_after", &cert.after.render());
        if let (Some(b), Some(a)) = (&cert.exact_before, &cert.exact_after) {
            rec.measure("exact_before", b).measure("exact_after", a);
        }
        rec.at_most("reduction_bound", cert.error_after, cert.bound, tol);
        let expected = Signature::new(0, lengths[1..].to_vec(), Party::Bob);
        rec.check("signature", cert.after == expected && q.signature() == expected);
        let direct = distributional_error(&q, &g, &d)?;
        rec.check("exact_error_replayed", Some(&direct) == cert.exact_after.as_ref());
        if zero_info {
            rec.close("zero_information", cert.information, 0.0, 1e-12);
            rec.check("zero_information_exact_equality", cert.exact_before == cert.exact_after);
        }
        Ok(())
    })();
    if let Err(err) = out {
        rec.error("reduce", err);
    }
    rec
}

/// One-bit equality, four copies, one-bit index message.
fn classical_eq_elimination(i: u64) -> ResultRecord {
    let mut rec = ResultRecord::new(SUITE_C, i, "eliminate-eq-n4", "index protocol, EQ_1, n = 4");
    let out = (|| -> roundlab_core::Result<()> {
        let (p, g, gn) = index_protocol(4)?;
        let delta = eval_classical(&p, &gn, None)?.worst;
        let out = classical_round_eliminate(&p, &g, 4)?;
        let l1 = p.lengths[0] as f64;
        let bound = to_f64(&delta) + 0.5 * (2.0 * l1 * LN_2 / 4.0).sqrt();
        // exhaustive replay of the output on every input pair
        let worst = eval_classical(&out.protocol, &g, None)?.worst;
        rec.measure("delta", &delta).measure("worst_exact", &worst);
        rec.check("delta_replayed", out.delta == delta);
        rec.check("worst_replayed", out.worst == worst);
        rec.close("bound_replayed", out.bound, bound, 1e-12);
        rec.at_most("elimination_bound", to_f64(&worst), bound, 1e-7);
        rec.check("zero_rounds", out.protocol.rounds() == 0);
        Ok(())
    })();
    if let Err(err) = out {
        rec.error("eliminate", err);
    }
    rec
}

fn classical_random_elimination(cfg: &ExperimentConfig, i: u64, rng: &mut ChaCha8Rng) -> ResultRecord {
    let mut rec = ResultRecord::new(SUITE_C, i, "eliminate-random", "");
    let out = (|| -> roundlab_core::Result<()> {
        let g = random_game(rng, 2, 2);
        let n = 2;
        let gn = g.direct_sum(n)?;
        let spec = RandomProtocolSpec {
            shape: Shape::for_game(&gn, Party::Alice, vec![1, 1]),
            public_values: 2,
            max_coin_outcomes: 2,
            granularity: 4,
        };
        let p = random_protocol(&spec, rng)?;
        rec.digest = digest(&format!("{g:?} {p:?}"));
        let out = classical_round_eliminate(&p, &g, n)?;
        rec.measure("delta", &out.delta).measure("worst_exact", &out.worst);
        rec.at_most("elimination_bound", to_f64(&out.worst), out.bound, cfg.tolerances.certificate);
        rec.check(
            "signature",
            out.protocol.signature() == Signature::new(0, p.lengths[1..].to_vec(), Party::Bob),
        );
        Ok(())
    })();
    if let Err(err) = out {
        rec.error("eliminate", err);
    }
    rec
}

/// Random reductions, then the EQ elimination, then random eliminations.
pub fn classical(cfg: &ExperimentConfig) -> Vec<ResultRecord> {
    let n = cfg.trials_or(1000) as u64;
    run_cases(cfg, n + 1 + RANDOM_ELIMINATIONS, |i, rng| {
        if i < n {
            classical_reduce_case(cfg, i, rng)
        } else if i == n {
            classical_eq_elimination(i)
        } else {
            classical_random_elimination(cfg, i, rng)
        }
    })
}

fn quantum_reduce_case(cfg: &ExperimentConfig, i: u64, rng: &mut ChaCha8Rng) -> ResultRecord {
    let tol = cfg.tolerances.certificate;
    let cap = cfg.caps.qubits;
    let mut rec = ResultRecord::new(SUITE_Q, i, "reduce", "");
    // resample until the reduced protocol fits the cap
    let mut attempts = 0;
    let (g, d, spec, lengths, overhead) = loop {
        let e = rng.random_range(2..=3);
        let f = rng.random_range(2..=3);
        let g = random_game(rng, e, f);
        let d = random_dist(rng, e, f);
        let t = rng.random_range(1..=3);
        let lengths: Vec<usize> = (0..t).map(|k| if k == 0 { rng.random_range(1..=2) } else { 1 }).collect();
        let overhead = rng.random_range(0..=1);
        let work = [rng.random_range(0..=1), rng.random_range(0..=1)];
        let spec = RandomQuantumSpec::for_game(&g, lengths.clone(), overhead, work);
        // the reduction adds Alice's input copy C and Bob's purifying register R
        if spec.qubits() + qubits_for(e).max(1) + lengths[0] + overhead <= cap {
            break (g, d, spec, lengths, overhead);
        }
        attempts += 1;
        if attempts > 1000 {
            return rec.error("sample", format!("no protocol fits in {cap} qubits")).clone();
        }
    };
    let out = (|| -> roundlab_core::Result<()> {
        let p = random_quantum_protocol(&spec, rng)?;
        rec.digest = digest(&format!("{g:?} {d:?} {p:?}"));
        rec.check("input_safe", verify_safe(&p)?.pass);
        let (q, cert) = quantum_round_reduce(&p, &g, &d)?;
        rec.measure("information", &cert.information)
            .measure("error_before", &cert.error_before)
            .measure("qubits", &q.layout.total_qubits())
            .measure("signature_before", &cert.before.render())
            .measure("signature_after", &cert.after.render());
        rec.at_most("reduction_bound", cert.error_after, cert.bound, tol);
        rec.check("within_qubit_cap", q.layout.total_qubits() <= cap);
        // [t−1, c+l₁, l₂..l_t]^B written out by hand
        let expected = Signature {
            rounds: lengths.len() - 1,
            overhead: overhead + lengths[0],
            lengths: lengths[1..].to_vec(),
            starter: Party::Bob,
        };
        rec.check("signature", cert.after == expected && q.signature()? == expected);
        let safe = verify_safe(&q)?;
        let secure = verify_secure(&q)?;
        rec.measure("safe_deviation", &safe.max_deviation)
            .measure("secure_deviation", &secure.max_deviation);
        rec.check("verify_safe", safe.pass).check("verify_secure", secure.pass);
        Ok(())
    })();
    if let Err(err) = out {
        rec.error("reduce", err);
    }
    rec
}

fn check_elimination(
    cfg: &ExperimentConfig,
    rec: &mut ResultRecord,
    p: &PublicCoinQuantumProtocol,
    out: &QuantumElimination,
) -> roundlab_core::Result<()> {
    let tol = cfg.tolerances.certificate;
    rec.measure("delta", &out.delta).measure("game_value", &out.game_value);
    rec.at_most("elimination_bound", out.worst, out.bound, tol);
    for (k, (info, cap)) in out.information.iter().enumerate() {
        rec.at_most(&format!("information_cap_{k}"), *info, *cap, tol);
    }
    rec.check(
        "certificates",
        out.certificates.iter().all(|c| c.slack >= -tol),
    );
    rec.check("signature", out.protocol.signature()? == p.signature()?.reduced().expect("rounds > 0"));
    let mut safe = true;
    let mut secure = true;
    for (_, q) in &out.protocol.parts {
        safe &= verify_safe(q)?.pass;
        secure &= verify_secure(q)?.pass;
    }
    rec.check("verify_safe", safe).check("verify_secure", secure);
    Ok(())
}

fn quantum_random_elimination(cfg: &ExperimentConfig, i: u64, rng: &mut ChaCha8Rng) -> ResultRecord {
    let mut rec = ResultRecord::new(SUITE_Q, i, "eliminate-random", "");
    let out = (|| -> roundlab_core::Result<()> {
        let g = random_game(rng, 2, 2);
        let spec = RandomQuantumSpec::direct_sum(&g, 2, vec![1, 1], 0, [0, 1])?;
        let p = PublicCoinQuantumProtocol::from(random_quantum_protocol(&spec, rng)?);
        rec.digest = digest(&format!("{g:?} {p:?}"));
        let out = quantum_round_eliminate(&p, &g, 2)?;
        check_elimination(cfg, &mut rec, &p, &out)
    })();
    if let Err(err) = out {
        rec.error("eliminate", err);
    }
    rec
}

fn quantum_index_elimination(cfg: &ExperimentConfig, i: u64) -> ResultRecord {
    let mut rec = ResultRecord::new(SUITE_Q, i, "eliminate-eq-n4", "embedded index protocol, EQ_1, n = 4");
    let out = (|| -> roundlab_core::Result<()> {
        let (p, g, gn) = index_protocol(4)?;
        let parts = embed_classical(&p)?
            .parts
            .into_iter()
            .map(|(w, q)| {
                let q = q
                    .split_register("X", &[("X1", 1), ("X2", 1), ("X3", 1), ("X4", 1)])?
                    .split_register("Y", &[("I", 2), ("YB", 1), ("XB", 3)])?;
                Ok((w, q))
            })
            .collect::<roundlab_core::Result<Vec<(Ratio, QuantumProtocol)>>>()?;
        let p = PublicCoinQuantumProtocol::new(parts)?;
        let delta = eval_quantum(&p, &gn, None)?.worst;
        rec.close("delta", delta, 0.375, 1e-9);
        let out = quantum_round_eliminate(&p, &g, 4)?;
        rec.close("bound_replayed", out.bound, 0.375 + LN_2.powf(0.25), 1e-9);
        check_elimination(cfg, &mut rec, &p, &out)
    })();
    if let Err(err) = out {
        rec.error("eliminate", err);
    }
    rec
}

const QUANTUM_ELIMINATIONS: u64 = 4;

/// Random reductions, random two-copy eliminations, then the embedded EQ elimination.
pub fn quantum(cfg: &ExperimentConfig) -> Vec<ResultRecord> {
    let n = cfg.trials_or(100) as u64;
    run_cases(cfg, n + QUANTUM_ELIMINATIONS + 1, |i, rng| {
        if i < n {
            quantum_reduce_case(cfg, i, rng)
        } else if i < n + QUANTUM_ELIMINATIONS {
            quantum_random_elimination(cfg, i, rng)
        } else {
            quantum_index_elimination(cfg, i)
        }
    })
}
