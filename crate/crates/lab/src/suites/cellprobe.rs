//! Cell-probe compilation and FKS rank tables.

use roundlab_core::games::*;
use roundlab_core::protocol::{verify_secure, Branch, Gate, GameSpec};
use roundlab_core::tensor::{c64, gates, Party, RegisterLayout};

use super::run_cases;
use crate::config::ExperimentConfig;
use crate::record::ResultRecord;

const SUITE: &str = "cellprobe-compile";

fn bits(s: usize) -> usize {
    (usize::BITS - (s.max(2) - 1).leading_zeros()) as usize
}

fn grover(cfg: &ExperimentConfig, i: u64, general: bool) -> ResultRecord {
    let name = if general { "grover-general" } else { "grover-address-only" };
    let mut rec = ResultRecord::new(SUITE, i, name, "one Grover iteration, s = 4, w = 1");
    let out = (|| -> roundlab_core::Result<()> {
        let (mut scheme, g) = grover_search()?;
        if general {
            scheme.address_only = false;
            scheme.theta.clear();
        }
        let report = check_address_only(&scheme)?;
        rec.measure("address_only_residual", &report.max_residual);
        rec.check("address_only", report.passed);
        let c = compile_cellprobe(&CellProbeScheme::Quantum(scheme), &g)?;
        let want = if general { "[2,0,3,3]^A" } else { "[2,0,2,3]^A" };
        rec.measure("signature", &c.signature.render());
        rec.check("signature", c.signature.render() == want);
        let success = c.protocol_error.iter().map(|e| 1.0 - e).fold(1.0, f64::min);
        rec.close("success_probability", success, 1.0, cfg.tolerances.amplitude);
        rec.at_most("scheme_gap", c.max_gap, 0.0, cfg.tolerances.amplitude);
        if let CompiledProtocol::Quantum(p) = &c.protocol {
            rec.check("verify_secure", verify_secure(p)?.pass);
        }
        Ok(())
    })();
    if let Err(e) = out {
        rec.error("compile", e);
    }
    rec
}

fn binary_search(i: u64) -> ResultRecord {
    let mut rec = ResultRecord::new(SUITE, i, "binary-search", "predecessor in S ⊆ [4] with 0 ∈ S, s = 4, w = 2");
    let out = (|| -> roundlab_core::Result<()> {
        let (scheme, g) = binary_search_predecessor()?;
        let (s, w, t) = (scheme.s, scheme.w, scheme.t);
        // exhaustive replay against the game table
        let mut wrong = 0u64;
        for q in 0..g.alice_inputs {
            for d in 0..g.bob_inputs {
                wrong += (scheme.run(q, d)?.0 != g.eval(q, d)) as u64;
            }
        }
        rec.measure("scheme_errors", &wrong);
        rec.check("scheme_exact", wrong == 0);
        let c = compile_cellprobe(&CellProbeScheme::Classical(scheme), &g)?;
        rec.measure("signature", &c.signature.render());
        let CompiledProtocol::Classical(p) = &c.protocol else {
            rec.check("classical_output", false);
            return Ok(());
        };
        // Alice sends an address, Bob echoes it with the cell contents
        let expected: Vec<usize> = (0..t).flat_map(|_| [bits(s), bits(s) + w]).collect();
        rec.measure("lengths", &p.lengths).bound("lengths", &expected);
        rec.check("message_lengths", p.lengths == expected);
        rec.check("signature", c.signature.render() == "[4,0,2,4,2,4]^A");
        let worst = c.protocol_error.iter().copied().fold(0.0, f64::max);
        rec.close("protocol_error", worst, 0.0, 0.0);
        Ok(())
    })();
    if let Err(e) = out {
        rec.error("compile", e);
    }
    rec
}

fn embedded_classical(cfg: &ExperimentConfig, i: u64) -> ResultRecord {
    let mut rec = ResultRecord::new(SUITE, i, "binary-search-embedded", "reversible embedding of binary search");
    let out = (|| -> roundlab_core::Result<()> {
        let (scheme, g) = binary_search_predecessor()?;
        let q = scheme.to_quantum()?;
        let worst = q.errors(&g)?.into_iter().fold(0.0, f64::max);
        rec.close("scheme_error", worst, 0.0, cfg.tolerances.amplitude);
        let report = check_address_only(&q)?;
        rec.at_most("address_only_residual", report.max_residual, 0.0, 1e-8);
        rec.check("address_only", report.passed);
        Ok(())
    })();
    if let Err(e) = out {
        rec.error("check", e);
    }
    rec
}

/// The data qubit is flipped by the query, so the address-only compiler must refuse.
fn leaky(i: u64) -> ResultRecord {
    let mut rec = ResultRecord::new(SUITE, i, "query-dependent-data", "B flipped on Q = 1, s = 2, w = 1");
    let out = (|| -> roundlab_core::Result<()> {
        let layout = RegisterLayout::simple(Party::Alice, &[("Q", 1), ("J", 1), ("B", 1)])?;
        let scheme = QuantumScheme {
            name: "leaky".into(),
            s: 2,
            w: 1,
            t: 1,
            queries: 2,
            answers: 2,
            tables: vec![vec![0, 1], vec![1, 0]],
            layout,
            steps: vec![
                vec![Gate::controlled(
                    &["Q"],
                    vec![Branch::Identity, Branch::Unitary(gates::pauli_x())],
                    &["B"],
                )],
                vec![],
            ],
            answer: vec!["B".into()],
            address_only: true,
            theta: vec![vec![c64(1.0, 0.0), c64(0.0, 0.0)]],
        };
        let g = GameSpec::from_fn("XOR", 2, 2, 2, |q, d| (q ^ d) as u32)?;
        let report = check_address_only(&scheme)?;
        rec.measure("address_only_residual", &report.max_residual);
        rec.check("check_rejects", !report.passed);
        let refused = compile_cellprobe(&CellProbeScheme::Quantum(scheme), &g).is_err();
        rec.check("compiler_refuses", refused);
        Ok(())
    })();
    if let Err(e) = out {
        rec.error("check", e);
    }
    rec
}

/// Every set of at most four keys in `[m]` and every query.
fn fks_universe(i: u64, m: u64) -> ResultRecord {
    let mut rec = ResultRecord::new(SUITE, i, "fks", &format!("FKS rank tables, m = {m}, |S| <= 4, exhaustive"));
    let mut sets = 0u64;
    let mut queries = 0u64;
    let mut wrong = 0u64;
    let mut max_probes = 0usize;
    let mut audit_failures = 0u64;
    let mut max_cells = 0usize;
    let mut first: Option<String> = None;
    let mut set = Vec::with_capacity(4);
    let mut visit = |set: &[u64]| {
        sets += 1;
        let t = match fks_build(set, m) {
            Ok(t) => t,
            Err(e) => {
                wrong += 1;
                first.get_or_insert(format!("{set:?}: {e}"));
                return;
            }
        };
        let a = t.audit(set);
        audit_failures += !a.passed as u64;
        max_cells = max_cells.max(a.cells);
        for x in 0..m {
            queries += 1;
            // rank by counting
            let expect = if set.contains(&x) {
                FksAnswer::Member(set.iter().filter(|&&y| y <= x).count() as u64)
            } else {
                FksAnswer::Absent
            };
            match fks_query(&t, x) {
                Ok(r) => {
                    max_probes = max_probes.max(r.probes);
                    if r.answer != expect {
                        wrong += 1;
                        first.get_or_insert(format!("{set:?} query {x}"));
                    }
                }
                Err(e) => {
                    wrong += 1;
                    first.get_or_insert(format!("{set:?} query {x}: {e}"));
                }
            }
        }
    };
    fn walk(m: u64, from: u64, set: &mut Vec<u64>, visit: &mut dyn FnMut(&[u64])) {
        visit(set);
        if set.len() == 4 {
            return;
        }
        for x in from..m {
            set.push(x);
            walk(m, x + 1, set, visit);
            set.pop();
        }
    }
    walk(m, 0, &mut set, &mut visit);
    rec.measure("universe", &m)
        .measure("sets", &sets)
        .measure("queries", &queries)
        .measure("wrong", &wrong)
        .measure("audit_failures", &audit_failures)
        .measure("max_cells", &max_cells);
    if let Some(f) = first {
        rec.measure("first_failure", &f);
    }
    rec.check("correct", wrong == 0);
    rec.at_most("probes", max_probes as f64, 3.0, 0.0);
    rec.check("implicit", audit_failures == 0);
    rec
}

const FIXED: u64 = 5;

pub fn run(cfg: &ExperimentConfig) -> Vec<ResultRecord> {
    let m = cfg.caps.fks_universe;
    run_cases(cfg, FIXED + m, |i, _| match i {
        0 => grover(cfg, i, false),
        1 => grover(cfg, i, true),
        2 => binary_search(i),
        3 => embedded_classical(cfg, i),
        4 => leaky(i),
        _ => fks_universe(i, i - FIXED + 1),
    })
}
