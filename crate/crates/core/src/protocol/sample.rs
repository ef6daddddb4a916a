//! Random safe quantum protocols.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use rand::Rng;

use super::game::{GameSpec, SumEncoding};
use super::quantum::{Branch, Finale, Gate, QuantumProtocol, QuantumRound};
use crate::error::{Error, Result};
use crate::info::qubits_for;
use crate::random::unitary;
use crate::tensor::{Party, Register, RegisterLayout};

/// Shape of [`random_quantum_protocol`]. Alice sends first.
#[derive(Debug, Clone)]
pub struct RandomQuantumSpec {
    pub alice_input: Vec<(String, usize)>,
    pub alice_values: Vec<Vec<usize>>,
    pub bob_input: Vec<(String, usize)>,
    pub bob_values: Vec<Vec<usize>>,
    /// Message qubits per round.
    pub lengths: Vec<usize>,
    /// Safe qubits added to the first message.
    pub overhead: usize,
    /// Work qubits of Alice and Bob.
    pub work: [usize; 2],
    pub answers: usize,
}

impl RandomQuantumSpec {
    /// Inputs in single registers `X`, `Y`.
    pub fn for_game(g: &GameSpec, lengths: Vec<usize>, overhead: usize, work: [usize; 2]) -> Self {
        Self {
            alice_input: vec![("X".into(), qubits_for(g.alice_inputs).max(1))],
            alice_values: (0..g.alice_inputs).map(|x| vec![x]).collect(),
            bob_input: vec![("Y".into(), qubits_for(g.bob_inputs).max(1))],
            bob_values: (0..g.bob_inputs).map(|y| vec![y]).collect(),
            lengths,
            overhead,
            work,
            answers: g.answers,
        }
    }

    /// Direct-sum inputs: Alice holds `X1…Xn`, Bob holds `I`, `Y`, `XB`.
    pub fn direct_sum(
        g: &GameSpec,
        n: usize,
        lengths: Vec<usize>,
        overhead: usize,
        work: [usize; 2],
    ) -> Result<Self> {
        let enc = SumEncoding::new(g.alice_inputs, g.bob_inputs, n)?;
        let xq = qubits_for(g.alice_inputs).max(1);
        Ok(Self {
            alice_input: (1..=n).map(|j| (format!("X{j}"), xq)).collect(),
            alice_values: (0..enc.alice_inputs()).map(|x| enc.digits(x)).collect(),
            bob_input: vec![
                ("I".into(), qubits_for(n).max(1)),
                ("Y".into(), qubits_for(g.bob_inputs).max(1)),
                ("XB".into(), qubits_for(g.alice_inputs.pow(n as u32 - 1)).max(1)),
            ],
            bob_values: (0..enc.bob_inputs())
                .map(|b| {
                    let (i, y, c) = enc.split_bob(b);
                    vec![i, y, c]
                })
                .collect(),
            lengths,
            overhead,
            work,
            answers: g.answers,
        })
    }

    pub fn qubits(&self) -> usize {
        self.alice_input.iter().chain(&self.bob_input).map(|r| r.1).sum::<usize>()
            + self.lengths.iter().sum::<usize>()
            + self.overhead
            + self.work[0]
            + self.work[1]
            + qubits_for(self.answers).max(1)
    }
}

/// Each party's step is a Haar-random unitary on everything it holds apart
/// from its input, chosen by the input value. The safe register is scrambled
/// with Alice's work qubits before she reads her input.
pub fn random_quantum_protocol<R: Rng + ?Sized>(
    spec: &RandomQuantumSpec,
    rng: &mut R,
) -> Result<QuantumProtocol> {
    let t = spec.lengths.len();
    if t == 0 || spec.lengths[0] + spec.overhead == 0 {
        return Err(Error::Parameters("the first message must be nonempty".into()));
    }
    let sender = |k: usize| if k % 2 == 0 { Party::Alice } else { Party::Bob };
    let answerer = if t % 2 == 1 { Party::Bob } else { Party::Alice };
    let mut regs = Vec::new();
    for (n, q) in &spec.alice_input {
        regs.push(Register::new(n.as_str(), *q, Party::Alice));
    }
    for (n, q) in &spec.bob_input {
        regs.push(Register::new(n.as_str(), *q, Party::Bob));
    }
    let mut held: [Vec<String>; 2] = [Vec::new(), Vec::new()];
    let slot = |p: Party| if p == Party::Alice { 0 } else { 1 };
    for (party, name) in [(Party::Alice, "WA"), (Party::Bob, "WB")] {
        let q = spec.work[slot(party)];
        if q > 0 {
            regs.push(Register::new(name, q, party));
            held[slot(party)].push(name.into());
        }
    }
    if spec.overhead > 0 {
        regs.push(Register::new("S", spec.overhead, Party::Alice));
    }
    for (k, l) in spec.lengths.iter().enumerate() {
        if *l > 0 {
            regs.push(Register::new(format!("M{}", k + 1), *l, sender(k)));
        }
    }
    let gq = qubits_for(spec.answers).max(1);
    regs.push(Register::new("G", gq, answerer));
    let layout = RegisterLayout::new(regs)?;
    layout.check_capacity()?;

    let inputs = |p: Party| match p {
        Party::Alice => (&spec.alice_input, &spec.alice_values),
        Party::Bob => (&spec.bob_input, &spec.bob_values),
    };
    let controlled = |party: Party, targets: &[String], rng: &mut R| -> Gate {
        let (regs, vals) = inputs(party);
        let width: usize = regs.iter().map(|r| r.1).sum();
        let code = |row: &[usize]| {
            regs.iter().zip(row).fold(0usize, |acc, (r, v)| (acc << r.1) | v)
        };
        let d = 1usize << targets.iter().map(|t| layout.get(t).map_or(0, |r| r.qubits)).sum::<usize>();
        let mut branches = vec![Branch::Identity; 1 << width];
        for row in vals.iter() {
            branches[code(row)] = Branch::Unitary(unitary(d, rng));
        }
        let controls: Vec<&str> = regs.iter().map(|r| r.0.as_str()).collect();
        let targets: Vec<&str> = targets.iter().map(|s| s.as_str()).collect();
        Gate::controlled(&controls, branches, &targets)
    };

    let mut prep = Vec::new();
    if spec.overhead > 0 {
        let mut t: Vec<&str> = vec!["S"];
        if spec.work[0] > 0 {
            t.push("WA");
        }
        let d = 1usize << (spec.overhead + spec.work[0]);
        prep.push((Party::Alice, Gate::unitary(unitary(d, rng), &t)));
    }
    let mut rounds = Vec::with_capacity(t);
    for k in 0..t {
        let s = sender(k);
        let mut targets = held[slot(s)].clone();
        let m = format!("M{}", k + 1);
        let mut send = Vec::new();
        if spec.lengths[k] > 0 {
            targets.push(m.clone());
            send.push(m.clone());
        }
        if k == 0 && spec.overhead > 0 {
            send.push("S".into());
        }
        let ops = if targets.is_empty() {
            Vec::new()
        } else {
            vec![controlled(s, &targets, rng)]
        };
        for r in &send {
            held[slot(s.other())].push(r.clone());
        }
        held[slot(s)].retain(|r| !send.contains(r));
        rounds.push(QuantumRound { sender: s, ops, send });
    }
    let mut targets = held[slot(answerer)].clone();
    targets.push("G".into());
    let finale = Finale {
        party: answerer,
        ops: vec![controlled(answerer, &targets, rng)],
        answer: vec!["G".into()],
    };
    let q = QuantumProtocol {
        layout: layout.clone(),
        starter: Party::Alice,
        alice_input: spec.alice_input.iter().map(|r| r.0.clone()).collect(),
        alice_values: spec.alice_values.clone(),
        bob_input: spec.bob_input.iter().map(|r| r.0.clone()).collect(),
        bob_values: spec.bob_values.clone(),
        prep,
        rounds,
        safe: if spec.overhead > 0 { vec!["S".into()] } else { Vec::new() },
        overhead: spec.overhead,
        finale,
        answers: spec.answers,
    };
    q.validate()?;
    Ok(q)
}
