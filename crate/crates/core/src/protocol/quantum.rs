//! Safe quantum protocols over named registers.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use num_traits::Zero;

use super::game::GameSpec;
use super::signature::Signature;
use crate::error::{Error, Result};
use crate::info::{Codewords, Encoding, JointDistribution};
use crate::rational::{check_distribution, to_f64, Ratio};
use crate::tensor::matrix::permutation_matrix;
use crate::tensor::{DensityMatrix, Matrix, Party, PureState, RegisterLayout, C64};

/// Deviation allowed by the safety and security verifiers.
pub const VERIFY_TOL: f64 = 1e-8;

/// Action of one branch of a controlled gate.
#[derive(Debug, Clone, PartialEq)]
pub enum Branch {
    Identity,
    Unitary(Matrix),
    /// `|j⟩ ↦ |perm[j]⟩`.
    Permutation(Vec<usize>),
}

impl Branch {
    fn matrix(&self, d: usize) -> Matrix {
        match self {
            Branch::Identity => Matrix::identity(d),
            Branch::Unitary(m) => m.clone(),
            Branch::Permutation(p) => permutation_matrix(p),
        }
    }

    fn as_gate(&self, targets: &[String]) -> Option<Gate> {
        match self {
            Branch::Identity => None,
            Branch::Unitary(m) => Some(Gate::Unitary {
                matrix: m.clone(),
                targets: targets.to_vec(),
            }),
            Branch::Permutation(p) => Some(Gate::Permutation {
                perm: p.clone(),
                targets: targets.to_vec(),
            }),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Gate {
    Unitary {
        matrix: Matrix,
        targets: Vec<String>,
    },
    Permutation {
        perm: Vec<usize>,
        targets: Vec<String>,
    },
    /// `branches[c]` acts on `targets` when the controls hold `c`
    /// (controls concatenated, first most significant).
    Controlled {
        controls: Vec<String>,
        branches: Vec<Branch>,
        targets: Vec<String>,
    },
}

pub(crate) fn names(regs: &[&str]) -> Vec<String> {
    regs.iter().map(|s| s.to_string()).collect()
}

impl Gate {
    pub fn unitary(matrix: Matrix, targets: &[&str]) -> Self {
        Gate::Unitary {
            matrix,
            targets: names(targets),
        }
    }

    pub fn permutation(perm: Vec<usize>, targets: &[&str]) -> Self {
        Gate::Permutation {
            perm,
            targets: names(targets),
        }
    }

    pub fn controlled(controls: &[&str], branches: Vec<Branch>, targets: &[&str]) -> Self {
        Gate::Controlled {
            controls: names(controls),
            branches,
            targets: names(targets),
        }
    }

    pub fn targets(&self) -> &[String] {
        match self {
            Gate::Unitary { targets, .. }
            | Gate::Permutation { targets, .. }
            | Gate::Controlled { targets, .. } => targets,
        }
    }

    pub fn controls(&self) -> &[String] {
        match self {
            Gate::Controlled { controls, .. } => controls,
            _ => &[],
        }
    }

    pub fn apply(&self, state: &PureState) -> Result<PureState> {
        match self {
            Gate::Unitary { matrix, targets } => state.apply_gate(matrix, targets),
            Gate::Permutation { perm, targets } => state.apply_permutation(perm, targets),
            Gate::Controlled {
                controls,
                branches,
                targets,
            } => {
                let d = 1usize << state.layout().qubits_of(targets)?;
                let mats: Vec<Matrix> = branches.iter().map(|b| b.matrix(d)).collect();
                state.apply_controlled(controls, &mats, targets)
            }
        }
    }

    /// Removes control register `reg` fixed to `value`. `None` when the gate
    /// reduces to the identity.
    fn fold(&self, layout: &RegisterLayout, reg: &str, value: usize) -> Result<Option<Gate>> {
        if self.targets().iter().any(|t| t == reg) {
            return Err(Error::Precondition(format!("register {reg} is acted on")));
        }
        let Gate::Controlled {
            controls,
            branches,
            targets,
        } = self
        else {
            return Ok(Some(self.clone()));
        };
        let Some(k) = controls.iter().position(|c| c == reg) else {
            return Ok(Some(self.clone()));
        };
        let widths: Vec<usize> = controls
            .iter()
            .map(|c| layout.get(c).map(|r| r.qubits))
            .collect::<Result<_>>()?;
        let low: usize = widths[k + 1..].iter().sum();
        let w = widths[k];
        let rest: Vec<String> = controls
            .iter()
            .filter(|c| *c != reg)
            .cloned()
            .collect();
        let n_rest = 1usize << (widths.iter().sum::<usize>() - w);
        let picked: Vec<Branch> = (0..n_rest)
            .map(|c| {
                let hi = c >> low;
                let lo = c & ((1 << low) - 1);
                branches[(((hi << w) | value) << low) | lo].clone()
            })
            .collect();
        if rest.is_empty() {
            return Ok(picked[0].as_gate(targets));
        }
        if picked.iter().all(|b| *b == Branch::Identity) {
            return Ok(None);
        }
        Ok(Some(Gate::Controlled {
            controls: rest,
            branches: picked,
            targets: targets.clone(),
        }))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct QuantumRound {
    pub sender: Party,
    pub ops: Vec<Gate>,
    pub send: Vec<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Finale {
    pub party: Party,
    pub ops: Vec<Gate>,
    /// Measured in the computational basis; values `≥ |G|` count as errors.
    pub answer: Vec<String>,
}

/// A coinless safe protocol. Inputs are loaded as basis values of the input
/// registers; all other registers start in `|0⟩`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuantumProtocol {
    pub layout: RegisterLayout,
    pub starter: Party,
    pub alice_input: Vec<String>,
    /// Per input value, the basis value of each Alice input register.
    pub alice_values: Vec<Vec<usize>>,
    pub bob_input: Vec<String>,
    pub bob_values: Vec<Vec<usize>>,
    pub prep: Vec<(Party, Gate)>,
    pub rounds: Vec<QuantumRound>,
    /// Safe part of the first message.
    pub safe: Vec<String>,
    /// Declared overhead `c`.
    pub overhead: usize,
    pub finale: Finale,
    pub answers: usize,
}

/// Where a simulation stops.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stage {
    Start,
    Prepared,
    /// After the ops of round `k` (0-based), at send time.
    Round(usize),
    End,
}

impl QuantumProtocol {
    pub fn rounds(&self) -> usize {
        self.rounds.len()
    }

    pub fn lengths(&self) -> Result<Vec<usize>> {
        self.rounds
            .iter()
            .enumerate()
            .map(|(k, r)| {
                let q = self.layout.qubits_of(&r.send)?;
                Ok(if k == 0 { q - self.layout.qubits_of(&self.safe)? } else { q })
            })
            .collect()
    }

    pub fn signature(&self) -> Result<Signature> {
        Ok(Signature::new(self.overhead, self.lengths()?, self.starter))
    }

    pub fn alice_inputs(&self) -> usize {
        self.alice_values.len()
    }

    pub fn bob_inputs(&self) -> usize {
        self.bob_values.len()
    }

    /// Checks structure, ownership at every step and the secure-input rules.
    pub fn validate(&self) -> Result<()> {
        self.layout.check_capacity()?;
        let bad = |m: String| Err(Error::InvalidProtocol(m));
        for (regs, vals) in [
            (&self.alice_input, &self.alice_values),
            (&self.bob_input, &self.bob_values),
        ] {
            if vals.is_empty() {
                return bad("empty input set".into());
            }
            for v in vals.iter() {
                if v.len() != regs.len() {
                    return bad("input value table has wrong width".into());
                }
                for (r, x) in regs.iter().zip(v) {
                    if *x >> self.layout.get(r)?.qubits != 0 {
                        return bad(format!("input value {x} does not fit register {r}"));
                    }
                }
            }
        }
        for r in &self.alice_input {
            if self.layout.get(r)?.owner != Party::Alice {
                return bad(format!("Alice's input register {r} is not hers"));
            }
        }
        for r in &self.bob_input {
            if self.layout.get(r)?.owner != Party::Bob {
                return bad(format!("Bob's input register {r} is not his"));
            }
        }
        match self.rounds.first() {
            Some(r) if r.sender != self.starter => return bad("starter does not send first".into()),
            None if self.finale.party != Party::Bob => {
                return bad("Bob answers a zero-round protocol".into())
            }
            _ => {}
        }
        for w in self.rounds.windows(2) {
            if w[0].sender == w[1].sender {
                return bad("rounds must alternate".into());
            }
        }
        if let Some(last) = self.rounds.last() {
            if self.finale.party == last.sender {
                return bad("the last recipient answers".into());
            }
        }
        if !self.rounds.is_empty() {
            for s in &self.safe {
                if !self.rounds[0].send.contains(s) {
                    return bad(format!("safe register {s} is not in the first message"));
                }
            }
            if self.layout.qubits_of(&self.safe)? != self.overhead {
                return bad("safe registers do not match the declared overhead".into());
            }
        }
        let inputs: Vec<&String> = self.alice_input.iter().chain(&self.bob_input).collect();
        let mut owners = self.layout.clone();
        let check_op = |owners: &RegisterLayout, party: Party, g: &Gate| -> Result<()> {
            for r in g.targets().iter().chain(g.controls()) {
                if owners.get(r)?.owner != party {
                    return Err(Error::InvalidProtocol(format!(
                        "{party} acts on {r} without owning it"
                    )));
                }
            }
            if let Some(r) = g.targets().iter().find(|r| inputs.contains(r)) {
                return Err(Error::InvalidProtocol(format!("input register {r} is acted on")));
            }
            Ok(())
        };
        for (party, g) in &self.prep {
            check_op(&owners, *party, g)?;
        }
        for r in &self.rounds {
            for g in &r.ops {
                check_op(&owners, r.sender, g)?;
            }
            for s in &r.send {
                if inputs.contains(&s) {
                    return bad(format!("input register {s} is sent"));
                }
                if owners.get(s)?.owner != r.sender {
                    return bad(format!("{} sends {s} without owning it", r.sender));
                }
                owners = owners.with_owner(s, r.sender.other())?;
            }
        }
        for g in &self.finale.ops {
            check_op(&owners, self.finale.party, g)?;
        }
        for a in &self.finale.answer {
            if inputs.contains(&a) {
                return bad(format!("input register {a} is measured"));
            }
            if owners.get(a)?.owner != self.finale.party {
                return bad(format!("answer register {a} is not held by the answerer"));
            }
        }
        if self.finale.answer.is_empty() {
            return bad("no answer register".into());
        }
        Ok(())
    }

    pub fn initial_state(&self, x: usize, y: usize) -> Result<PureState> {
        let mut values: Vec<(&str, usize)> = Vec::new();
        for (r, v) in self.alice_input.iter().zip(&self.alice_values[x]) {
            values.push((r, *v));
        }
        for (r, v) in self.bob_input.iter().zip(&self.bob_values[y]) {
            values.push((r, *v));
        }
        PureState::from_values(self.layout.clone(), &values)
    }

    /// Runs `ops` from `state`, returning the state after each listed stage.
    pub fn simulate(&self, x: usize, y: usize, until: Stage) -> Result<PureState> {
        let mut s = self.initial_state(x, y)?;
        if until == Stage::Start {
            return Ok(s);
        }
        for (_, g) in &self.prep {
            s = g.apply(&s)?;
        }
        if until == Stage::Prepared {
            return Ok(s);
        }
        for (k, r) in self.rounds.iter().enumerate() {
            for g in &r.ops {
                s = g.apply(&s)?;
            }
            if until == Stage::Round(k) {
                return Ok(s);
            }
        }
        for g in &self.finale.ops {
            s = g.apply(&s)?;
        }
        Ok(s)
    }

    /// Answer distribution on `(x, y)`.
    pub fn answer_distribution(&self, x: usize, y: usize) -> Result<Vec<f64>> {
        self.simulate(x, y, Stage::End)?
            .probabilities(&self.finale.answer)
    }

    pub fn check_game(&self, g: &GameSpec) -> Result<()> {
        if self.alice_inputs() != g.alice_inputs
            || self.bob_inputs() != g.bob_inputs
            || self.answers != g.answers
        {
            return Err(Error::InvalidProtocol(format!(
                "protocol plays {}x{}→{}, game {} is {}x{}→{}",
                self.alice_inputs(),
                self.bob_inputs(),
                self.answers,
                g.name,
                g.alice_inputs,
                g.bob_inputs,
                g.answers
            )));
        }
        Ok(())
    }

    pub fn pair_error(&self, g: &GameSpec, x: usize, y: usize) -> Result<f64> {
        let p = self.answer_distribution(x, y)?;
        Ok((1.0 - p.get(g.eval(x, y) as usize).copied().unwrap_or(0.0)).max(0.0))
    }

    /// Removes registers holding a constant basis value that are only ever
    /// used as controls. Input registers among them leave the input lists.
    pub fn fold_constants(&self, constants: &[(&str, usize)]) -> Result<Self> {
        let mut p = self.clone();
        for &(reg, value) in constants {
            if p.rounds.iter().any(|r| r.send.iter().any(|s| s == reg))
                || p.finale.answer.iter().any(|s| s == reg)
            {
                return Err(Error::Precondition(format!("register {reg} is sent or measured")));
            }
            let fold_all = |ops: &[Gate]| -> Result<Vec<Gate>> {
                let mut out = Vec::with_capacity(ops.len());
                for g in ops {
                    if let Some(h) = g.fold(&p.layout, reg, value)? {
                        out.push(h);
                    }
                }
                Ok(out)
            };
            let mut prep = Vec::with_capacity(p.prep.len());
            for (party, g) in &p.prep {
                if let Some(h) = g.fold(&p.layout, reg, value)? {
                    prep.push((*party, h));
                }
            }
            let rounds = p
                .rounds
                .iter()
                .map(|r| {
                    Ok(QuantumRound {
                        sender: r.sender,
                        ops: fold_all(&r.ops)?,
                        send: r.send.clone(),
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            let finale_ops = fold_all(&p.finale.ops)?;
            for (regs, vals) in [
                (&mut p.alice_input, &mut p.alice_values),
                (&mut p.bob_input, &mut p.bob_values),
            ] {
                if let Some(k) = regs.iter().position(|r| r == reg) {
                    regs.remove(k);
                    for v in vals.iter_mut() {
                        v.remove(k);
                    }
                }
            }
            let keep = p.layout.complement(&[reg]);
            p.layout = p.layout.select(&keep)?;
            p.prep = prep;
            p.rounds = rounds;
            p.finale.ops = finale_ops;
        }
        p.validate()?;
        Ok(p)
    }

    /// Turns Alice's input register `reg` into a work register prepared in
    /// `Σ √p_v |v⟩`; `amplitudes` has one entry per basis value.
    pub fn demote_alice_input(&self, reg: &str, amplitudes: &[C64]) -> Result<Self> {
        let mut p = self.clone();
        let k = p
            .alice_input
            .iter()
            .position(|r| r == reg)
            .ok_or_else(|| Error::UnknownRegister(reg.into()))?;
        p.alice_input.remove(k);
        for v in p.alice_values.iter_mut() {
            v.remove(k);
        }
        let u = crate::tensor::matrix::unitary_with_first_column(amplitudes)?;
        p.prep.insert(0, (Party::Alice, Gate::unitary(u, &[reg])));
        Ok(p)
    }

    /// Replaces register `name` by consecutive sub-registers, the first holding
    /// the most significant bits. Gates, sends and input values follow.
    pub fn split_register(&self, name: &str, parts: &[(&str, usize)]) -> Result<Self> {
        let reg = self.layout.get(name)?.clone();
        if parts.iter().map(|p| p.1).sum::<usize>() != reg.qubits {
            return Err(Error::Dimension(format!("parts of {name} do not add up")));
        }
        let new_names = names(&parts.iter().map(|p| p.0).collect::<Vec<_>>());
        let mut regs = Vec::new();
        for r in self.layout.registers() {
            if r.name == name {
                for (n, q) in parts {
                    regs.push(crate::tensor::Register::new(*n, *q, r.owner));
                }
            } else {
                regs.push(r.clone());
            }
        }
        let expand = |list: &[String]| -> Vec<String> {
            list.iter()
                .flat_map(|r| if r == name { new_names.clone() } else { vec![r.clone()] })
                .collect()
        };
        let gate = |g: &Gate| -> Gate {
            match g {
                Gate::Unitary { matrix, targets } => Gate::Unitary {
                    matrix: matrix.clone(),
                    targets: expand(targets),
                },
                Gate::Permutation { perm, targets } => Gate::Permutation {
                    perm: perm.clone(),
                    targets: expand(targets),
                },
                Gate::Controlled {
                    controls,
                    branches,
                    targets,
                } => Gate::Controlled {
                    controls: expand(controls),
                    branches: branches.clone(),
                    targets: expand(targets),
                },
            }
        };
        let split_values = |regs: &[String], vals: &[Vec<usize>]| -> Vec<Vec<usize>> {
            vals.iter()
                .map(|row| {
                    let mut out = Vec::new();
                    for (r, v) in regs.iter().zip(row) {
                        if r == name {
                            let mut shift = reg.qubits;
                            for (_, q) in parts {
                                shift -= q;
                                out.push((v >> shift) & ((1 << q) - 1));
                            }
                        } else {
                            out.push(*v);
                        }
                    }
                    out
                })
                .collect()
        };
        let mut p = self.clone();
        p.layout = RegisterLayout::new(regs)?;
        p.alice_values = split_values(&self.alice_input, &self.alice_values);
        p.bob_values = split_values(&self.bob_input, &self.bob_values);
        p.alice_input = expand(&self.alice_input);
        p.bob_input = expand(&self.bob_input);
        p.prep = self.prep.iter().map(|(party, g)| (*party, gate(g))).collect();
        for r in p.rounds.iter_mut() {
            r.ops = r.ops.iter().map(gate).collect();
            r.send = expand(&r.send);
        }
        p.safe = expand(&self.safe);
        p.finale.ops = self.finale.ops.iter().map(gate).collect();
        p.finale.answer = expand(&self.finale.answer);
        p.validate()?;
        Ok(p)
    }

    /// Keeps the listed input rows (new index = position in the list).
    pub fn select_inputs(&self, alice: &[usize], bob: &[usize]) -> Result<Self> {
        let mut p = self.clone();
        p.alice_values = alice
            .iter()
            .map(|x| self.alice_values.get(*x).cloned())
            .collect::<Option<_>>()
            .ok_or_else(|| Error::Parameters("Alice input out of range".into()))?;
        p.bob_values = bob
            .iter()
            .map(|y| self.bob_values.get(*y).cloned())
            .collect::<Option<_>>()
            .ok_or_else(|| Error::Parameters("Bob input out of range".into()))?;
        p.validate()?;
        Ok(p)
    }
}

/// Finite mixture of coinless protocols sharing one game.
#[derive(Debug, Clone, PartialEq)]
pub struct PublicCoinQuantumProtocol {
    pub parts: Vec<(Ratio, QuantumProtocol)>,
}

impl From<QuantumProtocol> for PublicCoinQuantumProtocol {
    fn from(p: QuantumProtocol) -> Self {
        Self {
            parts: vec![(Ratio::from_integer(1.into()), p)],
        }
    }
}

impl PublicCoinQuantumProtocol {
    pub fn new(parts: Vec<(Ratio, QuantumProtocol)>) -> Result<Self> {
        if parts.is_empty() {
            return Err(Error::InvalidProtocol("empty mixture".into()));
        }
        let w: Vec<Ratio> = parts.iter().map(|(w, _)| w.clone()).collect();
        check_distribution(&w)?;
        let sig = parts[0].1.signature()?;
        for (_, p) in &parts {
            p.validate()?;
            if p.signature()? != sig {
                return Err(Error::InvalidProtocol("mixture parts have different signatures".into()));
            }
        }
        Ok(Self { parts })
    }

    pub fn signature(&self) -> Result<Signature> {
        self.parts[0].1.signature()
    }

    pub fn max_qubits(&self) -> usize {
        self.parts
            .iter()
            .map(|(_, p)| p.layout.total_qubits())
            .max()
            .unwrap_or(0)
    }
}

/// Errors of a quantum protocol.
#[derive(Debug, Clone, PartialEq)]
pub struct QuantumErrorReport {
    pub per_input: Vec<f64>,
    pub distributional: Option<f64>,
    pub worst: f64,
    pub worst_input: (usize, usize),
}

/// Simulates every input pair; public-coin parts are averaged with their weights.
pub fn eval_quantum(
    p: &PublicCoinQuantumProtocol,
    g: &GameSpec,
    d: Option<&JointDistribution>,
) -> Result<QuantumErrorReport> {
    for (_, q) in &p.parts {
        q.check_game(g)?;
        q.layout.check_capacity()?;
    }
    let mut per_input = vec![0.0; g.alice_inputs * g.bob_inputs];
    for (w, q) in &p.parts {
        let w = to_f64(w);
        if w == 0.0 {
            continue;
        }
        for x in 0..g.alice_inputs {
            for y in 0..g.bob_inputs {
                per_input[x * g.bob_inputs + y] += w * q.pair_error(g, x, y)?;
            }
        }
    }
    let mut worst = f64::NEG_INFINITY;
    let mut worst_input = (0, 0);
    for x in 0..g.alice_inputs {
        for y in 0..g.bob_inputs {
            let e = per_input[x * g.bob_inputs + y];
            if g.promised(x, y) && e > worst {
                worst = e;
                worst_input = (x, y);
            }
        }
    }
    let distributional = d.map(|d| d.expectation_f64(|x, y| per_input[x * g.bob_inputs + y]));
    Ok(QuantumErrorReport {
        per_input,
        distributional,
        worst,
        worst_input,
    })
}

/// Distributional error over the support of `d` only.
pub fn quantum_distributional_error(
    p: &QuantumProtocol,
    g: &GameSpec,
    d: &JointDistribution,
) -> Result<f64> {
    p.check_game(g)?;
    let mut e = 0.0;
    for (x, y, w) in d.support() {
        e += to_f64(w) * p.pair_error(g, *x, *y)?;
    }
    Ok(e)
}

/// Reduced state of the first message given each starter input.
#[derive(Debug, Clone, PartialEq)]
pub struct QuantumMessageEncoding {
    pub inputs: Vec<usize>,
    pub encoding: Encoding,
    pub codewords: Vec<DensityMatrix>,
}

pub fn first_message_encoding_quantum(
    p: &QuantumProtocol,
    g: &GameSpec,
    d: &JointDistribution,
) -> Result<QuantumMessageEncoding> {
    p.check_game(g)?;
    let first = p
        .rounds
        .first()
        .ok_or_else(|| Error::InvalidProtocol("protocol has no first message".into()))?;
    if first.send.is_empty() {
        return Err(Error::InvalidProtocol("first message is empty".into()));
    }
    let (marg, n) = match p.starter {
        Party::Alice => (d.marginal_x(), p.alice_inputs()),
        Party::Bob => (d.marginal_y(), p.bob_inputs()),
    };
    let mut codewords = Vec::with_capacity(n);
    for v in 0..n {
        let s = match p.starter {
            Party::Alice => p.simulate(v, 0, Stage::Round(0))?,
            Party::Bob => p.simulate(0, v, Stage::Round(0))?,
        };
        codewords.push(s.reduced(&first.send)?);
    }
    let inputs: Vec<usize> = (0..n).filter(|v| !marg[*v].is_zero()).collect();
    let encoding = Encoding::new(
        inputs.iter().map(|v| marg[*v].clone()).collect(),
        Codewords::Quantum(inputs.iter().map(|v| codewords[*v].clone()).collect()),
    )?;
    Ok(QuantumMessageEncoding {
        inputs,
        encoding,
        codewords,
    })
}

/// Coin value with the least distributional error.
pub fn fix_public_coin_quantum(
    p: &PublicCoinQuantumProtocol,
    g: &GameSpec,
    d: &JointDistribution,
) -> Result<(usize, f64)> {
    let mut best = (0, f64::INFINITY);
    for (k, (w, q)) in p.parts.iter().enumerate() {
        if w.is_zero() {
            continue;
        }
        let e = quantum_distributional_error(q, g, d)?;
        if e < best.1 {
            best = (k, e);
        }
    }
    Ok(best)
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyReport {
    pub pass: bool,
    pub max_deviation: f64,
    pub detail: String,
}

/// The safe part's reduced state at the first send is the same for all inputs.
pub fn verify_safe(p: &QuantumProtocol) -> Result<VerifyReport> {
    p.validate()?;
    if p.rounds.is_empty() || p.safe.is_empty() {
        return Ok(VerifyReport {
            pass: true,
            max_deviation: 0.0,
            detail: "no safe part".into(),
        });
    }
    let mut reference: Option<DensityMatrix> = None;
    let mut max_dev: f64 = 0.0;
    let mut worst = (0, 0);
    for x in 0..p.alice_inputs() {
        for y in 0..p.bob_inputs() {
            let s = p.simulate(x, y, Stage::Round(0))?.reduced(&p.safe)?;
            match &reference {
                None => reference = Some(s),
                Some(r) => {
                    let dev = r.trace_distance(&s)?;
                    if dev > max_dev {
                        max_dev = dev;
                        worst = (x, y);
                    }
                }
            }
        }
    }
    Ok(VerifyReport {
        pass: max_dev <= VERIFY_TOL,
        max_deviation: max_dev,
        detail: format!("largest deviation at inputs {worst:?}"),
    })
}

/// Input registers are never sent or measured and keep their basis state
/// after every step.
pub fn verify_secure(p: &QuantumProtocol) -> Result<VerifyReport> {
    let inputs: Vec<String> = p.alice_input.iter().chain(&p.bob_input).cloned().collect();
    let fail = |detail: String| VerifyReport {
        pass: false,
        max_deviation: 2.0,
        detail,
    };
    for r in &p.rounds {
        if let Some(s) = r.send.iter().find(|s| inputs.contains(s)) {
            return Ok(fail(format!("input register {s} is sent")));
        }
    }
    if let Some(s) = p.finale.answer.iter().find(|s| inputs.contains(s)) {
        return Ok(fail(format!("input register {s} is measured")));
    }
    if inputs.is_empty() {
        return Ok(VerifyReport {
            pass: true,
            max_deviation: 0.0,
            detail: "no input registers".into(),
        });
    }
    let mut max_dev: f64 = 0.0;
    let mut detail = String::from("inputs unchanged");
    for x in 0..p.alice_inputs() {
        for y in 0..p.bob_inputs() {
            let mut s = p.initial_state(x, y)?;
            let expect = s.reduced(&inputs)?;
            let steps = p
                .prep
                .iter()
                .map(|(_, g)| g)
                .chain(p.rounds.iter().flat_map(|r| r.ops.iter()))
                .chain(p.finale.ops.iter());
            for (k, g) in steps.enumerate() {
                s = g.apply(&s)?;
                let dev = s.reduced(&inputs)?.trace_distance(&expect)?;
                if dev > max_dev {
                    max_dev = dev;
                    detail = format!("step {k} moves the inputs on {:?}", (x, y));
                }
            }
        }
    }
    Ok(VerifyReport {
        pass: max_dev <= VERIFY_TOL,
        max_deviation: max_dev,
        detail,
    })
}
