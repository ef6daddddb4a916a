//! Entropy identities, average encoding and local transition.

use rand::Rng;
use roundlab_core::info::*;
use roundlab_core::random;
use roundlab_core::rational::{ratio, Ratio};
use roundlab_core::tensor::*;

use super::run_cases;
use crate::config::ExperimentConfig;
use crate::record::{digest, ResultRecord};

fn layout(regs: &[(&str, usize)]) -> RegisterLayout {
    RegisterLayout::simple(Party::Alice, regs).expect("fixed layouts are valid")
}

/// Random states of total dimension at most 8: first `n` on `A B C`, one
/// qubit each, then `n/2` two-register states for the entropy bounds alone.
pub fn identities(cfg: &ExperimentConfig) -> Vec<ResultRecord> {
    let tol = &cfg.tolerances;
    let n = cfg.trials_or(200) as u64;
    run_cases(cfg, n + n / 2, |i, rng| {
        let shape: [(&str, usize); 3] = match (i < n, i % 3) {
            (true, _) => [("A", 1), ("B", 1), ("C", 1)],
            (false, 0) => [("A", 1), ("B", 1), ("C", 0)],
            (false, 1) => [("A", 1), ("B", 2), ("C", 0)],
            _ => [("A", 2), ("B", 1), ("C", 0)],
        };
        let regs: Vec<_> = shape.iter().copied().filter(|r| r.1 > 0).collect();
        let l = layout(&regs);
        let d = 1usize << l.total_qubits();
        let rank = 1 + (i as usize) % d;
        let mut rec = ResultRecord::new("info-identities", i, if i < n { "chain" } else { "bounds" }, &format!("{regs:?} rank {rank} case {i}"));
        let rho = match random::density(l, rank, rng) {
            Ok(r) => r,
            Err(e) => return rec.error("sample", e).clone(),
        };
        rec.digest = digest(&format!("{regs:?} {:?}", rho.matrix()));
        let c: &[&str] = if regs.len() == 3 { &["C"] } else { &[] };
        let out = (|| -> roundlab_core::Result<()> {
            if !c.is_empty() {
                let rep = chain_identity(&rho, &["A"], &["B"], c)?;
                rec.measure("chain_lhs", &rep.lhs).measure("chain_rhs", &rep.rhs);
                rec.close("chain_residual", rep.lhs, rep.rhs, tol.identity);
            }
            let i_ab = mutual_information(&rho, &["A"])?;
            let sa = entropy_of(&rho, &["A"])?;
            let s = von_neumann_entropy(&rho)?;
            let logd = (d as f64).log2();
            rec.at_most("mutual_information_nonnegative", 0.0, i_ab, tol.entropy);
            rec.at_most("mutual_information_at_most_2sa", i_ab, 2.0 * sa, tol.entropy);
            rec.at_most("entropy_at_most_log_d", s, logd, tol.entropy);
            rec.measure("dimension", &d).measure("rank", &rank);
            Ok(())
        })();
        if let Err(e) = out {
            rec.error("evaluate", e);
        }
        rec
    })
}

fn perfect_example() -> ResultRecord {
    let basis = |v: usize| {
        let mut p = [0.0, 0.0];
        p[v] = 1.0;
        DensityMatrix::diagonal(&p, layout(&[("M", 1)])).expect("diagonal state")
    };
    let mut rec = ResultRecord::new("average-encoding", 0, "basis-states", "|x><x|, x uniform on {0,1}");
    let e = Encoding::new(
        vec![ratio(1, 2), ratio(1, 2)],
        Codewords::Quantum(vec![basis(0), basis(1)]),
    );
    match e.and_then(|e| average_encoding_gap(&e)) {
        Ok(g) => {
            let oracle = (2.0 * std::f64::consts::LN_2).sqrt();
            rec.close("lhs", g.lhs, 1.0, 1e-6);
            rec.close("rhs", g.rhs, 1.177410, 1e-6);
            rec.close("rhs_vs_sqrt_2ln2", g.rhs, oracle, 1e-9);
            rec.at_most("average_encoding", g.lhs, g.rhs, 1e-8);
        }
        Err(e) => {
            rec.error("evaluate", e);
        }
    }
    rec
}

/// Case 0 is the basis-state example, then classical encodings, then quantum ones.
pub fn average_encoding(cfg: &ExperimentConfig) -> Vec<ResultRecord> {
    let tol = cfg.tolerances.encoding;
    let classical = cfg.trials_or(500) as u64;
    let quantum = cfg.trials.map_or(100, |t| t.div_ceil(5)) as u64;
    run_cases(cfg, 1 + classical + quantum, |i, rng| {
        if i == 0 {
            return perfect_example();
        }
        let is_classical = i <= classical;
        let nx = rng.random_range(1..=4);
        let priors = random::distribution(nx, 7, true, rng);
        let (name, words) = if is_classical {
            let nm = rng.random_range(1..=4);
            let words: Vec<Vec<Ratio>> = (0..nx).map(|_| random::distribution(nm, 5, false, rng)).collect();
            ("classical", Codewords::Classical(words))
        } else {
            let q = rng.random_range(1..=2);
            let words: roundlab_core::Result<Vec<_>> = (0..nx)
                .map(|_| {
                    let rank = rng.random_range(1..=1usize << q);
                    random::density(layout(&[("M", q)]), rank, rng)
                })
                .collect();
            match words {
                Ok(w) => ("quantum", Codewords::Quantum(w)),
                Err(e) => {
                    let mut rec = ResultRecord::new("average-encoding", i, "quantum", "");
                    return rec.error("sample", e).clone();
                }
            }
        };
        let mut rec = ResultRecord::new(
            "average-encoding",
            i,
            name,
            &format!("{priors:?} {words:?}"),
        );
        match Encoding::new(priors, words).and_then(|e| average_encoding_gap(&e)) {
            Ok(g) => {
                rec.measure("inputs", &nx);
                rec.at_most("average_encoding", g.lhs, g.rhs, tol);
            }
            Err(e) => {
                rec.error("evaluate", e);
            }
        }
        rec
    })
}

/// Random pairs of states on one or two qubits and their purifications.
pub fn local_transition(cfg: &ExperimentConfig) -> Vec<ResultRecord> {
    let tol = cfg.tolerances.transition;
    let n = cfg.trials_or(100) as u64;
    run_cases(cfg, n, |i, rng| {
        let q = 1 + (i as usize) % 2;
        let d = 1usize << q;
        let (k1, k2) = (rng.random_range(1..=d), rng.random_range(1..=d));
        let mut rec = ResultRecord::new("local-transition", i, format!("dim{d}"), "");
        let out = (|| -> roundlab_core::Result<()> {
            let r1 = random::density(layout(&[("H", q)]), k1, rng)?;
            let r2 = random::density(layout(&[("H", q)]), k2, rng)?;
            rec.digest = digest(&format!("{:?} {:?}", r1.matrix(), r2.matrix()));
            let p1 = purify(&r1)?;
            let p2 = purify(&r2)?;
            let t = max_overlap_local_unitary(&p1, &p2, &["H'"])?;
            let f = fidelity(&r1, &r2)?;
            rec.close("overlap_vs_fidelity", t.overlap, f, tol);
            let moved = p2.apply_gate(&t.unitary, &["H'"])?;
            let achieved = p1.inner(&moved)?.norm();
            rec.close("achieved_overlap", achieved, t.overlap, tol);
            let td = r1.trace_distance(&r2)?;
            let post = p1.trace_distance(&moved)?;
            rec.measure("trace_distance", &td);
            rec.at_most("post_trace_distance", post, 2.0 * td.sqrt(), tol);
            Ok(())
        })();
        if let Err(e) = out {
            rec.error("evaluate", e);
        }
        rec
    })
}
