use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::{One, Zero};

use super::product::build_product_distribution;
use super::EliminationCertificate;
use crate::error::{Error, Result};
use crate::info::{encoding_mutual_information, qubits_for, JointDistribution};
use crate::lp::solve_matrix_game;
use crate::protocol::quantum::{Branch, Gate, QuantumRound, Stage};
use crate::protocol::{
    eval_quantum, first_message_encoding_quantum, fix_public_coin_quantum,
    quantum_distributional_error, verify_secure, GameSpec, PublicCoinQuantumProtocol,
    QuantumProtocol, SumEncoding,
};
use crate::rational::{to_f64, Ratio};
use crate::tensor::matrix::unitary_with_first_column;
use crate::tensor::{c64, max_overlap_local_unitary, purify, DensityMatrix, Party, PureState, Register, RegisterLayout, C64};

/// Iterations of the worst-case search.
pub const MAX_ROUNDS: usize = 24;

fn fresh_name(layout: &RegisterLayout, base: &str) -> String {
    let mut name = String::from(base);
    let mut k = 0;
    while layout.contains(&name) {
        k += 1;
        name = format!("{base}{k}");
    }
    name
}

/// Alice's pure state on the registers she holds before the first send.
fn alice_state(p: &QuantumProtocol, x: usize, order: &[String]) -> Result<Vec<C64>> {
    let s = p.simulate(x, 0, Stage::Round(0))?;
    let mut full: Vec<String> = order.to_vec();
    full.extend(p.layout.complement(order));
    let s = s.permute(&full)?;
    let da = 1usize << p.layout.qubits_of(order)?;
    let db = s.amplitudes().len() / da;
    let amps = s.amplitudes();
    let mut best = (0, -1.0);
    for b in 0..db {
        let w: f64 = (0..da).map(|a| amps[a * db + b].norm_sqr()).sum();
        if w > best.1 {
            best = (b, w);
        }
    }
    let n = libm::sqrt(best.1);
    Ok((0..da).map(|a| amps[a * db + best.0] / n).collect())
}

/// Removes Alice's first message. Bob prepares the canonical purification of
/// the average message `σ` in `M` and a fresh register `R`, sends `R` as the
/// safe part, and Alice applies the local unitary taking it closest to her
/// real state for input `x`.
pub fn quantum_round_reduce(
    p: &QuantumProtocol,
    g: &GameSpec,
    d: &JointDistribution,
) -> Result<(QuantumProtocol, EliminationCertificate)> {
    p.validate()?;
    p.check_game(g)?;
    if p.rounds.is_empty() || p.starter != Party::Alice {
        return Err(Error::Precondition(
            "round reduction needs a first message from Alice".into(),
        ));
    }
    let secure = verify_secure(p)?;
    if !secure.pass {
        return Err(Error::Precondition(format!("protocol is not secure: {}", secure.detail)));
    }
    let enc = first_message_encoding_quantum(p, g, d)?;
    let send: Vec<String> = p.layout.select(&p.rounds[0].send)?.names();
    let local: Vec<String> = p
        .layout
        .owned_by(Party::Alice)
        .into_iter()
        .filter(|r| !send.contains(r))
        .collect();
    let mut alice_order = local.clone();
    alice_order.extend(send.iter().cloned());
    let px = d.marginal_x();
    let weights: Vec<f64> = px.iter().map(to_f64).collect();
    let sigma = DensityMatrix::mixture(&weights, &enc.codewords)?;
    let can = purify(&sigma)?;

    let r_name = fresh_name(&p.layout, "R");
    let rq = p.layout.qubits_of(&send)?;
    let mut after = p.layout.clone();
    for m in &send {
        after = after.with_owner(m, Party::Bob)?;
    }
    let c_name = fresh_name(&after, "C");
    let cq = qubits_for(p.alice_inputs()).max(1);
    let mut regs = after.registers().to_vec();
    regs.push(Register::new(c_name.clone(), cq, Party::Alice));
    regs.push(Register::new(r_name.clone(), rq, Party::Bob));
    let layout = RegisterLayout::new(regs)?;
    layout.check_capacity()?;

    // states on local ++ send ++ [R]
    let mut v_regs: Vec<Register> = Vec::new();
    for r in alice_order.iter() {
        v_regs.push(p.layout.get(r)?.clone());
    }
    v_regs.push(Register::new(r_name.clone(), rq, Party::Bob));
    let v_layout = RegisterLayout::new(v_regs)?;
    let dl = 1usize << p.layout.qubits_of(&local)?;
    let dm = 1usize << rq;
    let mut source = vec![C64::zero(); dl * dm * dm];
    for (k, a) in can.amplitudes().iter().enumerate() {
        source[k] = *a;
    }
    let source = PureState::new(source, v_layout.clone())?;
    let mut v_targets: Vec<String> = local.clone();
    v_targets.push(r_name.clone());
    let mut branches = Vec::with_capacity(1 << cq);
    for x in 0..1usize << cq {
        if x >= p.alice_inputs() {
            branches.push(Branch::Identity);
            continue;
        }
        let theta = alice_state(p, x, &alice_order)?;
        let mut target = vec![C64::zero(); dl * dm * dm];
        for (k, a) in theta.iter().enumerate() {
            target[k * dm] = *a;
        }
        let target = PureState::new(target, v_layout.clone())?;
        let t = max_overlap_local_unitary(&target, &source, &v_targets)?;
        branches.push(Branch::Unitary(t.unitary));
    }
    let v_refs: Vec<&str> = v_targets.iter().map(|s| s.as_str()).collect();
    let adjust = Gate::controlled(&[c_name.as_str()], branches, &v_refs);

    let mut w_targets: Vec<&str> = send.iter().map(|s| s.as_str()).collect();
    w_targets.push(r_name.as_str());
    let w = unitary_with_first_column(can.amplitudes())?;
    let mut prep: Vec<(Party, Gate)> = p
        .prep
        .iter()
        .filter(|(party, _)| *party == Party::Bob)
        .cloned()
        .collect();
    prep.push((Party::Bob, Gate::unitary(w, &w_targets)));

    let mut rounds: Vec<QuantumRound> = p.rounds[1..].to_vec();
    let mut finale = p.finale.clone();
    let (safe, overhead) = if rounds.is_empty() {
        (Vec::new(), rq)
    } else {
        rounds[0].send.insert(0, r_name.clone());
        if rounds.len() > 1 {
            rounds[1].ops.insert(0, adjust);
        } else {
            finale.ops.insert(0, adjust);
        }
        (vec![r_name.clone()], rq)
    };
    let q = QuantumProtocol {
        layout,
        starter: Party::Bob,
        alice_input: vec![c_name],
        alice_values: (0..p.alice_inputs()).map(|x| vec![x]).collect(),
        bob_input: p.bob_input.clone(),
        bob_values: p.bob_values.clone(),
        prep,
        rounds,
        safe,
        overhead,
        finale,
        answers: p.answers,
    };
    q.validate()?;
    let before = quantum_distributional_error(p, g, d)?;
    let after_err = quantum_distributional_error(&q, g, d)?;
    let information = encoding_mutual_information(&enc.encoding)?.max(0.0);
    let bound = before + libm::pow(2.0 * core::f64::consts::LN_2 * information, 0.25);
    let cert = EliminationCertificate {
        before: p.signature()?,
        after: q.signature()?,
        error_before: before,
        error_after: after_err,
        exact_before: None,
        exact_after: None,
        information,
        bound,
        slack: bound - after_err,
    };
    Ok((q, cert))
}

/// Result of [`quantum_round_eliminate`].
#[derive(Debug, Clone)]
pub struct QuantumElimination {
    pub protocol: PublicCoinQuantumProtocol,
    pub delta: f64,
    pub worst: f64,
    pub bound: f64,
    pub slack: f64,
    pub distributions: Vec<(Ratio, JointDistribution)>,
    /// Per distribution, `E_{i,prefix} I(X_i : M | prefix)` and its cap `2l₁/n`.
    pub information: Vec<(f64, f64)>,
    pub certificates: Vec<EliminationCertificate>,
    pub game_value: f64,
    pub rounds: usize,
}

/// Checks that the inputs of `p` follow the direct-sum layout: Alice holds
/// one register per copy, Bob holds `[i, y, prefix]`.
pub fn check_direct_sum_layout(p: &QuantumProtocol, enc: &SumEncoding) -> Result<()> {
    if p.alice_input.len() != enc.n || p.bob_input.len() != 3 {
        return Err(Error::InvalidProtocol(
            "direct-sum protocols take n Alice registers and Bob registers [i, y, prefix]".into(),
        ));
    }
    if p.alice_inputs() != enc.alice_inputs() || p.bob_inputs() != enc.bob_inputs() {
        return Err(Error::InvalidProtocol("input counts do not match the direct sum".into()));
    }
    for (x, v) in p.alice_values.iter().enumerate() {
        if *v != enc.digits(x) {
            return Err(Error::InvalidProtocol(format!("Alice input {x} is not stored digit-wise")));
        }
    }
    for (b, v) in p.bob_values.iter().enumerate() {
        let (i, y, c) = enc.split_bob(b);
        if *v != [i, y, c] {
            return Err(Error::InvalidProtocol(format!("Bob input {b} is not stored as [i, y, prefix]")));
        }
    }
    Ok(())
}

/// `P′` for copy `i` and a prefix: the prefix and Bob's index are folded in,
/// later copies are prepared as `Σ √p(x) |x⟩` on Alice's side.
pub fn restrict_quantum_copy(
    p: &QuantumProtocol,
    enc: &SumEncoding,
    i: usize,
    prefix: &[usize],
    px: &[Ratio],
) -> Result<QuantumProtocol> {
    let n = enc.n;
    let alice: Vec<usize> = (0..enc.e)
        .map(|v| {
            let mut xs = prefix.to_vec();
            xs.push(v);
            xs.resize(n, 0);
            enc.join(&xs)
        })
        .collect();
    let bob: Vec<usize> = (0..enc.f).map(|y| enc.bob(i, y, prefix)).collect();
    let mut q = p.select_inputs(&alice, &bob)?;
    let mut consts: Vec<(String, usize)> = Vec::new();
    for (j, v) in prefix.iter().enumerate() {
        consts.push((p.alice_input[j].clone(), *v));
    }
    consts.push((p.bob_input[0].clone(), i));
    consts.push((p.bob_input[2].clone(), enc.prefix_code(prefix)));
    let refs: Vec<(&str, usize)> = consts.iter().map(|(r, v)| (r.as_str(), *v)).collect();
    q = q.fold_constants(&refs)?;
    for reg in &p.alice_input[i + 1..] {
        let qubits = q.layout.get(reg)?.qubits;
        let mut amps = vec![c64(0.0, 0.0); 1 << qubits];
        for (v, w) in px.iter().enumerate() {
            amps[v] = c64(libm::sqrt(to_f64(w)), 0.0);
        }
        q = q.demote_alice_input(reg, &amps)?;
    }
    q.validate()?;
    Ok(q)
}

/// Protocol for `g` built from `D*` for one distribution, with the reduction
/// certificates and `E I(X_i : M | prefix)`.
pub fn quantum_eliminate_for_distribution(
    p: &PublicCoinQuantumProtocol,
    g: &GameSpec,
    n: usize,
    d: &JointDistribution,
) -> Result<(PublicCoinQuantumProtocol, Vec<EliminationCertificate>, f64)> {
    let gn = g.direct_sum(n)?;
    let enc = SumEncoding::new(g.alice_inputs, g.bob_inputs, n)?;
    let dstar = build_product_distribution(d, n)?;
    let (k, _) = fix_public_coin_quantum(p, &gn, &dstar)?;
    let pstar = &p.parts[k].1;
    let px = d.marginal_x();
    let nr = Ratio::from_integer((n as i64).into());
    let mut parts = Vec::new();
    let mut certs = Vec::new();
    let mut info = 0.0;
    for i in 0..n {
        for code in 0..g.alice_inputs.pow(i as u32) {
            let prefix = enc.prefix_digits(code * g.alice_inputs.pow((n - 1 - i) as u32), i);
            let w = prefix.iter().fold(Ratio::one() / &nr, |acc, x| acc * &px[*x]);
            if w.is_zero() {
                continue;
            }
            let pp = restrict_quantum_copy(pstar, &enc, i, &prefix, &px)?;
            let (q, cert) = quantum_round_reduce(&pp, g, d)?;
            info += to_f64(&w) * cert.information;
            certs.push(cert);
            parts.push((w, q));
        }
    }
    Ok((PublicCoinQuantumProtocol::new(parts)?, certs, info))
}

/// Exact weights near `w` summing to one, on a grid of `2⁻³⁰`.
fn rationalize(w: &[f64]) -> Vec<Ratio> {
    let scale = 1i64 << 30;
    let mut out: Vec<Ratio> = w
        .iter()
        .map(|v| Ratio::new((libm::round(v.max(0.0) * scale as f64) as i64).into(), scale.into()))
        .collect();
    let total = out.iter().fold(Ratio::zero(), |s, v| s + v);
    if let Some(k) = (0..w.len()).max_by(|a, b| w[*a].total_cmp(&w[*b])) {
        out[k] = &out[k] + Ratio::one() - total;
    }
    out
}

/// Eliminates the first round of a public-coin safe protocol for `g⁽ⁿ⁾`
/// whose inputs follow [`check_direct_sum_layout`].
pub fn quantum_round_eliminate(
    p: &PublicCoinQuantumProtocol,
    g: &GameSpec,
    n: usize,
) -> Result<QuantumElimination> {
    let gn = g.direct_sum(n)?;
    let enc = SumEncoding::new(g.alice_inputs, g.bob_inputs, n)?;
    for (_, q) in &p.parts {
        q.check_game(&gn)?;
        check_direct_sum_layout(q, &enc)?;
    }
    let sig = p.signature()?;
    if sig.rounds == 0 || sig.starter != Party::Alice {
        return Err(Error::Precondition("elimination needs a first message from Alice".into()));
    }
    let l1 = sig.lengths[0] as f64;
    let delta = eval_quantum(p, &gn, None)?.worst;
    let bound = delta + libm::pow(4.0 * l1 * core::f64::consts::LN_2 / n as f64, 0.25);

    let mut pairs = Vec::new();
    for x in 0..g.alice_inputs {
        for y in 0..g.bob_inputs {
            if g.promised(x, y) {
                pairs.push((x, y));
            }
        }
    }
    let u = Ratio::new(1.into(), (pairs.len() as i64).into());
    let mut next = Some(JointDistribution::new(
        g.alice_inputs,
        g.bob_inputs,
        pairs.iter().map(|(x, y)| (*x, *y, u.clone())).collect(),
    )?);
    let mut family: Vec<(JointDistribution, PublicCoinQuantumProtocol, Vec<f64>)> = Vec::new();
    let mut information = Vec::new();
    let mut certificates = Vec::new();
    let mut solution = None;
    let mut rounds = 0;
    while let Some(d) = next.take() {
        rounds += 1;
        let (q, certs, info) = quantum_eliminate_for_distribution(p, g, n, &d)?;
        information.push((info, 2.0 * l1 / n as f64));
        certificates.extend(certs);
        let errs = eval_quantum(&q, g, None)?;
        let row = pairs
            .iter()
            .map(|(x, y)| errs.per_input[x * g.bob_inputs + y])
            .collect();
        family.push((d, q, row));
        let matrix: Vec<Vec<f64>> = family.iter().map(|f| f.2.clone()).collect();
        let sol = solve_matrix_game(&matrix, &1e-12)?;
        if sol.value > bound && rounds < MAX_ROUNDS {
            let cols = rationalize(&sol.columns);
            let points = pairs
                .iter()
                .zip(cols)
                .filter(|(_, w)| !w.is_zero())
                .map(|((x, y), w)| (*x, *y, w))
                .collect();
            let dn = JointDistribution::new(g.alice_inputs, g.bob_inputs, points)?;
            if !family.iter().any(|f| f.0 == dn) {
                next = Some(dn);
            }
        }
        solution = Some(sol);
    }
    let sol = solution.ok_or_else(|| Error::Parameters("no protocol was built".into()))?;
    let lambda = rationalize(&sol.rows);
    let mut parts = Vec::new();
    let mut distributions = Vec::new();
    for ((d, q, _), w) in family.into_iter().zip(lambda) {
        if w.is_zero() {
            continue;
        }
        for (v, part) in q.parts {
            parts.push((&w * v, part));
        }
        distributions.push((w, d));
    }
    let protocol = PublicCoinQuantumProtocol::new(parts)?;
    let worst = eval_quantum(&protocol, g, None)?.worst;
    Ok(QuantumElimination {
        protocol,
        delta,
        worst,
        bound,
        slack: bound - worst,
        distributions,
        information,
        certificates,
        game_value: sol.value,
        rounds,
    })
}
