//! The twelve acceptance criteria, one PASS/FAIL line each.

use std::collections::BTreeMap;
use std::f64::consts::LN_2;
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use roundlab::{run_to_file, ExperimentConfig, ResultRecord, Suite};
use serde_json::Value;

const SEED: u64 = 20_240_917;

struct Run {
    records: Vec<ResultRecord>,
    elapsed: Duration,
    file: PathBuf,
}

type Outcome = Result<String, String>;

fn run(dir: &Path, suite: Suite, tag: &str) -> Run {
    let file = dir.join(format!("{suite}-{tag}.jsonl"));
    let cfg = ExperimentConfig::new(suite, SEED, &file);
    let start = Instant::now();
    let records = run_to_file(&cfg).unwrap_or_else(|e| panic!("{suite}: {e:#}"));
    Run {
        records,
        elapsed: start.elapsed(),
        file,
    }
}

fn num(v: &Value) -> f64 {
    v.as_f64().unwrap_or(f64::NAN)
}

fn ensure(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn all_pass(r: &Run) -> Result<(), String> {
    match r.records.iter().find(|r| !r.pass) {
        None => Ok(()),
        Some(bad) => Err(format!("case {} ({}) failed: {:?}", bad.case, bad.name, bad.checks)),
    }
}

fn within(r: &Run, limit: u64) -> Result<(), String> {
    ensure(
        r.elapsed < Duration::from_secs(limit),
        format!("took {:.1}s, limit {limit}s", r.elapsed.as_secs_f64()),
    )
}

fn named<'a>(r: &'a Run, name: &str) -> Vec<&'a ResultRecord> {
    r.records.iter().filter(|x| x.name == name).collect()
}

fn c1(r: &Run) -> Outcome {
    let chain = r.records.iter().filter(|x| x.residual.contains_key("chain_residual")).count();
    ensure(chain >= 200, format!("chain identity on {chain} states"))?;
    all_pass(r)?;
    within(r, 10)?;
    let mut worst = 0.0f64;
    for x in &r.records {
        ensure(num(&x.measured["dimension"]) <= 8.0, "dimension above 8")?;
        for k in ["mutual_information_nonnegative", "mutual_information_at_most_2sa", "entropy_at_most_log_d"] {
            ensure(num(&x.slack[k]) >= -1e-9, format!("case {}: {k}", x.case))?;
        }
        if let Some(v) = x.residual.get("chain_residual") {
            worst = worst.max(num(v));
        }
    }
    ensure(worst <= 1e-7, format!("chain residual {worst}"))?;
    Ok(format!("{} states ({chain} with the chain identity), max chain residual {worst:.2e}", r.records.len()))
}

fn c2(r: &Run) -> Outcome {
    all_pass(r)?;
    within(r, 30)?;
    let classical = named(r, "classical").len();
    let quantum = named(r, "quantum").len();
    ensure(classical >= 500 && quantum >= 100, format!("{classical} classical, {quantum} quantum"))?;
    let min = r
        .records
        .iter()
        .filter_map(|x| x.slack.get("average_encoding").map(num))
        .fold(f64::INFINITY, f64::min);
    ensure(min >= -1e-8, format!("slack {min}"))?;
    let ex = named(r, "basis-states");
    let ex = ex.first().ok_or("basis-state example missing")?;
    let lhs = num(&ex.measured["lhs"]);
    let rhs = num(&ex.measured["rhs"]);
    ensure((lhs - 1.0).abs() <= 1e-6, format!("lhs {lhs}"))?;
    // √(2 ln 2) computed here, not by the suite
    let oracle = (2.0 * LN_2).sqrt();
    ensure((rhs - oracle).abs() <= 1e-6 && (rhs - 1.177410).abs() <= 1e-6, format!("rhs {rhs}"))?;
    Ok(format!("{classical} classical + {quantum} quantum, min slack {min:.3e}, rhs {rhs}"))
}

fn c3(r: &Run) -> Outcome {
    ensure(r.records.len() >= 100, "fewer than 100 pairs")?;
    all_pass(r)?;
    let mut worst = 0.0f64;
    for x in &r.records {
        let res = num(&x.residual["overlap_vs_fidelity"]);
        ensure(res <= 1e-8, format!("case {}: overlap residual {res}", x.case))?;
        worst = worst.max(res);
        let post = num(&x.measured["post_trace_distance"]);
        let td = num(&x.measured["trace_distance"]);
        ensure(post <= 2.0 * td.sqrt() + 1e-8, format!("case {}: post {post}", x.case))?;
    }
    Ok(format!("{} pairs, max overlap residual {worst:.2e}", r.records.len()))
}

fn c4(r: &Run) -> Outcome {
    within(r, 120)?;
    let reduce: Vec<_> = r.records.iter().filter(|x| x.name.starts_with("reduce")).collect();
    ensure(reduce.len() >= 1000, "fewer than 1000 reductions")?;
    let mut min = f64::INFINITY;
    for x in &reduce {
        ensure(x.pass, format!("case {} failed: {:?}", x.case, x.checks))?;
        min = min.min(num(&x.slack["reduction_bound"]));
    }
    ensure(min >= -1e-7, format!("slack {min}"))?;
    let zero = named(r, "reduce-zero-information");
    ensure(!zero.is_empty(), "no zero-information cases")?;
    for x in &zero {
        ensure(x.checks["zero_information_exact_equality"], format!("case {}", x.case))?;
        ensure(x.measured["exact_before"] == x.measured["exact_after"], format!("case {}", x.case))?;
    }
    Ok(format!("{} reductions ({} zero-information), min slack {min:.3e}", reduce.len(), zero.len()))
}

fn parse_ratio(v: &Value) -> f64 {
    let s = v.as_str().unwrap_or("");
    match s.split_once('/') {
        Some((a, b)) => a.parse::<f64>().unwrap() / b.parse::<f64>().unwrap(),
        None => s.parse().unwrap_or(f64::NAN),
    }
}

fn c5(r: &Run) -> Outcome {
    let x = named(r, "eliminate-eq-n4");
    let x = x.first().ok_or("EQ elimination missing")?;
    ensure(x.pass, format!("{:?}", x.checks))?;
    let delta = parse_ratio(&x.measured["delta"]);
    let worst = parse_ratio(&x.measured["worst_exact"]);
    let bound = delta + 0.5 * (2.0 * 1.0 * LN_2 / 4.0).sqrt();
    ensure(worst <= bound + 1e-7, format!("worst {worst} above {bound}"))?;
    for e in named(r, "eliminate-random") {
        ensure(e.pass, format!("random elimination {} failed", e.case))?;
    }
    Ok(format!("delta {delta}, worst {worst}, bound {bound:.6}"))
}

fn c6(r: &Run) -> Outcome {
    within(r, 300)?;
    all_pass(r)?;
    let reduce = named(r, "reduce");
    ensure(reduce.len() >= 100, "fewer than 100 quantum reductions")?;
    let mut min = f64::INFINITY;
    for x in &reduce {
        ensure(num(&x.measured["qubits"]) <= 12.0, format!("case {} above 12 qubits", x.case))?;
        for k in ["signature", "verify_safe", "verify_secure", "within_qubit_cap"] {
            ensure(x.checks[k], format!("case {}: {k}", x.case))?;
        }
        // [t, c, l1, l2..]^A becomes [t−1, c+l1, l2..]^B
        let before = x.measured["signature_before"].as_str().unwrap();
        let after = x.measured["signature_after"].as_str().unwrap();
        let nums = |s: &str| -> Vec<usize> {
            s.trim_start_matches('[').split(']').next().unwrap().split(',').map(|v| v.parse().unwrap()).collect()
        };
        let (b, a) = (nums(before), nums(after));
        let mut want = vec![b[0] - 1, b[1] + b[2]];
        want.extend(&b[3..]);
        ensure(a == want && after.ends_with("^B") && before.ends_with("^A"), format!("{before} -> {after}"))?;
        min = min.min(num(&x.slack["reduction_bound"]));
    }
    let elim = r.records.iter().filter(|x| x.name.starts_with("eliminate")).count();
    ensure(elim > 0, "no quantum eliminations")?;
    ensure(min >= -1e-7, format!("slack {min}"))?;
    Ok(format!("{} reductions + {elim} eliminations, min slack {min:.3e}", reduce.len()))
}

fn c7(r: &Run) -> Outcome {
    all_pass(r)?;
    let mut seen = BTreeMap::new();
    let mut cases = 0.0;
    for x in &r.records {
        ensure(num(&x.measured["failures"]) == 0.0, format!("{} {}", x.name, x.measured["params"]))?;
        cases += num(&x.measured["cases"]);
        *seen.entry(x.name.clone()).or_insert(0) += 1;
    }
    let params: Vec<&str> = r.records.iter().filter_map(|x| x.measured["params"].as_str()).collect();
    for want in ["p=6 q=4 k=2", "p=4 q=4 k=4", "p=6 q=4 k=4", "n=8 k=4", "n=8 k=2"] {
        ensure(params.contains(&want), format!("configuration {want} missing"))?;
    }
    ensure(seen.len() == 4, format!("families {seen:?}"))?;
    Ok(format!("{} configurations, {cases} instances, 0 failures", r.records.len()))
}

fn c8(r: &Run) -> Outcome {
    let g = named(r, "grover-address-only");
    let g = g.first().ok_or("Grover missing")?;
    ensure(g.pass, format!("Grover: {:?}", g.checks))?;
    ensure(g.measured["signature"] == "[2,0,2,3]^A", "Grover signature")?;
    let success = num(&g.measured["success_probability"]);
    ensure((success - 1.0).abs() <= 1e-9, format!("success {success}"))?;
    let b = named(r, "binary-search");
    let b = b.first().ok_or("binary search missing")?;
    ensure(b.pass, format!("binary search: {:?}", b.checks))?;
    ensure(num(&b.measured["protocol_error"]) == 0.0, "binary search error")?;
    // log s = 2 address bits, then the address and a 2-bit word
    let lengths: Vec<f64> = b.measured["lengths"].as_array().unwrap().iter().map(num).collect();
    ensure(lengths == [2.0, 4.0, 2.0, 4.0], format!("lengths {lengths:?}"))?;
    for name in ["grover-general", "binary-search-embedded", "query-dependent-data"] {
        ensure(named(r, name).iter().all(|x| x.pass), format!("{name} failed"))?;
    }
    Ok(format!("Grover {} success {success}, binary search lengths {lengths:?}", g.measured["signature"]))
}

fn c9(r: &Run) -> Outcome {
    let fks = named(r, "fks");
    let ms: Vec<f64> = fks.iter().map(|x| num(&x.measured["universe"])).collect();
    ensure(ms == (1..=64).map(f64::from).collect::<Vec<_>>(), "universes 1..=64 not all covered")?;
    let mut sets = 0.0;
    for x in &fks {
        ensure(x.pass, format!("m = {}: {:?}", x.measured["universe"], x.checks))?;
        ensure(num(&x.measured["probes"]) <= 3.0, "more than 3 probes")?;
        sets += num(&x.measured["sets"]);
    }
    // Σ_m Σ_{j ≤ 4} C(m, j), counted here
    let binom = |n: u64, k: u64| (0..k).fold(1u64, |acc, i| acc * (n - i) / (i + 1));
    let expect: u64 = (1..=64u64).map(|m| (0..=4).filter(|&j| j <= m).map(|j| binom(m, j)).sum::<u64>()).sum();
    ensure(sets == expect as f64, format!("{sets} sets, expected {expect}"))?;
    Ok(format!("{expect} sets over m = 1..64, all correct, probes <= 3, audits pass"))
}

fn c10(r: &Run) -> Outcome {
    all_pass(r)?;
    let gt: Vec<_> = named(r, "gt").into_iter().filter(|x| x.measured["precondition"] == true).collect();
    let ts: Vec<f64> = gt.iter().map(|x| num(&x.measured["t"])).collect();
    for t in [1.0, 2.0, 3.0] {
        ensure(ts.contains(&t), format!("no GT row for t = {t}"))?;
    }
    for x in &gt {
        ensure(x.measured["epsilon_t"] == "1/2", "epsilon_t is not 1/2")?;
        let n: u64 = x.measured["final_n"].as_str().unwrap().parse().unwrap_or(u64::MAX);
        ensure(n >= 1, "n_t below 1")?;
    }
    let p = named(r, "predecessor");
    let p = p.first().ok_or("predecessor row missing")?;
    // δ = 1/3 − 1/100 = 97/300, and 97/300 + 1/6 = 147/300 = 49/100
    ensure(p.measured["delta"] == "97/300", "delta")?;
    ensure(p.measured["epsilon_t"] == "49/100", format!("epsilon {}", p.measured["epsilon_t"]))?;
    ensure(parse_ratio(&p.measured["epsilon_t"]) < 0.5, "not below 1/2")?;
    Ok("GT epsilon_t = 1/2 for t = 1,2,3; predecessor 97/300 + 1/6 = 49/100 < 1/2".into())
}

fn c11(r: &Run) -> Outcome {
    all_pass(r)?;
    let mut parts = Vec::new();
    for t in [1u32, 2] {
        let x = named(r, &format!("n16-t{t}"));
        let x = x.first().ok_or(format!("t = {t} missing"))?;
        ensure(num(&x.measured["trials"]) >= 1e4, "fewer than 10^4 trials")?;
        let bits = num(&x.measured["communication"]);
        // ⌈log(3·16·t)⌉ = 6 or 7
        let lg = (3.0 * 16.0 * t as f64).log2().ceil();
        let bound = 4.0 * t as f64 * 16f64.powf(1.0 / t as f64) * lg;
        ensure(bits <= bound, format!("t = {t}: {bits} bits above {bound}"))?;
        let err = num(&x.measured["empirical_error"]);
        ensure(err <= 1.0 / 3.0, format!("t = {t}: error {err}"))?;
        parts.push(format!("t={t}: {bits} <= {bound} bits, error {err}"));
    }
    Ok(parts.join("; "))
}

fn main() {
    let dir = tempfile::tempdir().unwrap();
    let runs: BTreeMap<Suite, Run> = Suite::ALL.iter().map(|&s| (s, run(dir.path(), s, "a"))).collect();
    for (s, r) in &runs {
        println!("  {s}: {} records in {:.2}s", r.records.len(), r.elapsed.as_secs_f64());
    }

    let c12 = || -> Outcome {
        for &s in &Suite::ALL {
            let again = run(dir.path(), s, "b");
            let a = std::fs::read(&runs[&s].file).map_err(|e| e.to_string())?;
            let b = std::fs::read(&again.file).map_err(|e| e.to_string())?;
            ensure(!a.is_empty() && a == b, format!("{s} differs on rerun"))?;
        }
        Ok("all nine suites byte-identical on rerun".into())
    };

    let criteria: Vec<(&str, Outcome)> = vec![
        ("1 information identities", c1(&runs[&Suite::InfoIdentities])),
        ("2 average encoding", c2(&runs[&Suite::AverageEncoding])),
        ("3 local transition", c3(&runs[&Suite::LocalTransition])),
        ("4 classical round reduction", c4(&runs[&Suite::ClassicalRoundelim])),
        ("5 classical round elimination", c5(&runs[&Suite::ClassicalRoundelim])),
        ("6 quantum reduction and elimination", c6(&runs[&Suite::QuantumRoundelim])),
        ("7 reductions", c7(&runs[&Suite::Reductions])),
        ("8 cell-probe compiler", c8(&runs[&Suite::CellprobeCompile])),
        ("9 FKS rank tables", c9(&runs[&Suite::CellprobeCompile])),
        ("10 bound tracers", c10(&runs[&Suite::BoundTracers])),
        ("11 GT protocol", c11(&runs[&Suite::GtProtocol])),
        ("12 determinism", c12()),
    ];
    let mut failed = Vec::new();
    for (name, outcome) in &criteria {
        match outcome {
            Ok(detail) => println!("PASS {name}: {detail}"),
            Err(why) => {
                println!("FAIL {name}: {why}");
                failed.push(*name);
            }
        }
    }
    if !failed.is_empty() {
        eprintln!("failed criteria: {failed:?}");
        std::process::exit(1);
    }
}
