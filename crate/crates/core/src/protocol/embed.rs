//! Unitary embedding of classical protocols.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use super::classical::ClassicalProtocol;
use super::quantum::{Branch, Finale, Gate, PublicCoinQuantumProtocol, QuantumProtocol, QuantumRound};
use crate::error::{Error, Result};
use crate::info::qubits_for;
use crate::rational::{to_f64, Ratio};
use crate::tensor::matrix::unitary_with_first_column;
use crate::tensor::{c64, Party, Register, RegisterLayout};

fn xor_perm(bits: usize, v: usize) -> Branch {
    if v == 0 {
        Branch::Identity
    } else {
        Branch::Permutation((0..1usize << bits).map(|m| m ^ v).collect())
    }
}

fn amplitudes(dist: &[Ratio], qubits: usize) -> Vec<crate::tensor::C64> {
    let mut a = vec![c64(0.0, 0.0); 1 << qubits];
    for (i, p) in dist.iter().enumerate() {
        a[i] = c64(libm::sqrt(to_f64(p)), 0.0);
    }
    a
}

/// Embeds each public coin value as a coinless protocol: inputs in `X`/`Y`,
/// private coins as `Σ √q_r |r⟩` in `RA`/`RB`, messages `M1…` computed by
/// controlled XOR, and a local copy `Kk` kept by a sender who acts again.
pub fn embed_classical(p: &ClassicalProtocol) -> Result<PublicCoinQuantumProtocol> {
    if p.alice_coin.forfeit.is_some() || p.bob_coin.forfeit.is_some() {
        return Err(Error::InvalidProtocol("forfeit coins have no unitary embedding".into()));
    }
    let mut parts = Vec::with_capacity(p.public.len());
    for (c, w) in p.public.iter().enumerate() {
        parts.push((w.clone(), embed_coinless(p, c)?));
    }
    PublicCoinQuantumProtocol::new(parts)
}

fn embed_coinless(p: &ClassicalProtocol, pb: usize) -> Result<QuantumProtocol> {
    let t = p.rounds();
    let np = p.public.len();
    let mut regs = Vec::new();
    let xq = qubits_for(p.alice_inputs).max(1);
    let yq = qubits_for(p.bob_inputs).max(1);
    regs.push(Register::new("X", xq, Party::Alice));
    regs.push(Register::new("Y", yq, Party::Bob));
    let coin_reg = |party: Party| -> Option<(String, usize)> {
        let q = qubits_for(p.coin(party).outcomes);
        (q > 0).then(|| (format!("R{}", party.letter()), q))
    };
    for party in [Party::Alice, Party::Bob] {
        if let Some((n, q)) = coin_reg(party) {
            regs.push(Register::new(n, q, party));
        }
    }
    // which transcript register each party reads for message j
    let acts_after = |party: Party, k: usize| {
        (k + 1..t).any(|j| p.sender(j) == party) || p.answerer() == party
    };
    let mut copies = vec![false; t];
    for k in 0..t {
        if p.lengths[k] == 0 {
            continue;
        }
        regs.push(Register::new(format!("M{}", k + 1), p.lengths[k], p.sender(k)));
        if acts_after(p.sender(k), k) {
            copies[k] = true;
            regs.push(Register::new(format!("K{}", k + 1), p.lengths[k], p.sender(k)));
        }
    }
    let gq = qubits_for(p.answers).max(1);
    regs.push(Register::new("G", gq, p.answerer()));
    let layout = RegisterLayout::new(regs)?;
    layout.check_capacity()?;

    let view = |party: Party, k: usize| -> Vec<String> {
        // registers holding messages 0..k as seen by `party`
        (0..k)
            .filter(|j| p.lengths[*j] > 0)
            .map(|j| {
                if p.sender(j) == party {
                    format!("K{}", j + 1)
                } else {
                    format!("M{}", j + 1)
                }
            })
            .collect()
    };
    let own = |party: Party| -> (String, usize, usize) {
        match party {
            Party::Alice => ("X".into(), xq, p.alice_inputs),
            Party::Bob => ("Y".into(), yq, p.bob_inputs),
        }
    };

    let mut prep = Vec::new();
    for party in [Party::Alice, Party::Bob] {
        let Some((reg, q)) = coin_reg(party) else { continue };
        let (input, iq, n) = own(party);
        let cs = p.coin(party);
        let branches: Vec<Branch> = (0..1usize << iq)
            .map(|x| {
                let d = cs.dist(x.min(n - 1) * np + pb);
                unitary_with_first_column(&amplitudes(d, q)).map(Branch::Unitary)
            })
            .collect::<Result<_>>()?;
        prep.push((party, Gate::controlled(&[input.as_str()], branches, &[reg.as_str()])));
    }

    // controlled XOR of `value(input, coin, transcript)` into `target`
    let compute = |party: Party, k: usize, target: &str, bits: usize, f: &dyn Fn(usize, usize, u64) -> u32| {
        let (input, iq, n) = own(party);
        let mut controls = vec![input];
        let cq = coin_reg(party).map(|(r, q)| {
            controls.push(r);
            q
        });
        let cq = cq.unwrap_or(0);
        controls.extend(view(party, k));
        let tb = p.prefix_bits(k);
        let total = iq + cq + tb;
        let outcomes = p.coin(party).outcomes;
        let branches: Vec<Branch> = (0..1usize << total)
            .map(|v| {
                let tr = (v & ((1 << tb) - 1)) as u64;
                let coin = (v >> tb) & ((1 << cq) - 1);
                let x = v >> (tb + cq);
                if x >= n || coin >= outcomes {
                    Branch::Identity
                } else {
                    xor_perm(bits, f(x, coin, tr) as usize)
                }
            })
            .collect();
        let refs: Vec<&str> = controls.iter().map(|s| s.as_str()).collect();
        Gate::controlled(&refs, branches, &[target])
    };

    let mut rounds = Vec::with_capacity(t);
    for k in 0..t {
        let s = p.sender(k);
        let mut ops = Vec::new();
        let mut send = Vec::new();
        if p.lengths[k] > 0 {
            let m = format!("M{}", k + 1);
            ops.push(compute(s, k, &m, p.lengths[k], &|x, coin, tr| p.message(k, x, pb, coin, tr)));
            if copies[k] {
                let kk = format!("K{}", k + 1);
                let l = p.lengths[k];
                let branches = (0..1usize << l).map(|v| xor_perm(l, v)).collect();
                ops.push(Gate::controlled(&[m.as_str()], branches, &[kk.as_str()]));
            }
            send.push(m);
        }
        rounds.push(QuantumRound { sender: s, ops, send });
    }
    let a = p.answerer();
    let finale = Finale {
        party: a,
        ops: vec![compute(a, t, "G", gq, &|x, coin, tr| p.answer(x, pb, coin, tr))],
        answer: vec!["G".into()],
    };
    let q = QuantumProtocol {
        layout,
        starter: p.starter,
        alice_input: vec!["X".into()],
        alice_values: (0..p.alice_inputs).map(|x| vec![x]).collect(),
        bob_input: vec!["Y".into()],
        bob_values: (0..p.bob_inputs).map(|y| vec![y]).collect(),
        prep,
        rounds,
        safe: Vec::new(),
        overhead: 0,
        finale,
        answers: p.answers,
    };
    q.validate()?;
    Ok(q)
}
