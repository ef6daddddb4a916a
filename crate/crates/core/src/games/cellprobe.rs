//! Cell-probe schemes and their compilation into two-party protocols.
//!
//! Alice holds the query `q`, Bob the data `d`. Each probe becomes a round
//! trip: Alice sends an address, Bob answers with the address and the
//! cell contents.

use alloc::boxed::Box;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::info::qubits_for;
use crate::protocol::{
    eval_classical, Branch, ClassicalProtocol, CoinSpace, Finale, GameSpec, Gate, QuantumProtocol,
    QuantumRound, Shape, Signature,
};
use crate::rational::{to_f64, Ratio};
use crate::tensor::matrix::{inner, unitary_with_first_column};
use crate::tensor::{c64, gates, hermitian_eig, Matrix, Party, PureState, Register, RegisterLayout, C64};

pub const QUERY: &str = "Q";
pub const ADDRESS: &str = "J";
pub const DATA: &str = "B";
/// Bob's data index in compiled protocols.
pub const TABLE: &str = "D";

/// Tolerance of the address-only check.
pub const ADDRESS_ONLY_TOL: f64 = 1e-8;

type AddressFn = Box<dyn Fn(usize, usize, &[u64]) -> usize + Send + Sync>;
type OutputFn = Box<dyn Fn(usize, &[u64]) -> u32 + Send + Sync>;

/// A deterministic scheme: probe `i` reads the cell `address(i, q, contents
/// read so far)` and the answer is `output(q, all contents)`.
pub struct ClassicalScheme {
    pub name: String,
    pub s: usize,
    pub w: usize,
    pub t: usize,
    pub queries: usize,
    pub answers: usize,
    /// `T_d` for every data value `d`.
    pub tables: Vec<Vec<u64>>,
    pub address: AddressFn,
    pub output: OutputFn,
}

/// A quantum query scheme `U₀, O, U₁, …, O, U_t` over `layout`. The query is
/// loaded into `Q`; the oracle maps `|j, b⟩` on `(J, B)` to `|j, b ⊕ T_d[j]⟩`.
#[derive(Debug, Clone)]
pub struct QuantumScheme {
    pub name: String,
    pub s: usize,
    pub w: usize,
    pub t: usize,
    pub queries: usize,
    pub answers: usize,
    pub tables: Vec<Vec<u64>>,
    pub layout: RegisterLayout,
    /// `U₀ … U_t`.
    pub steps: Vec<Vec<Gate>>,
    pub answer: Vec<String>,
    pub address_only: bool,
    /// Declared data-register state before each probe.
    pub theta: Vec<Vec<C64>>,
}

pub enum CellProbeScheme {
    Classical(ClassicalScheme),
    Quantum(QuantumScheme),
}

#[derive(Debug, Clone)]
pub enum CompiledProtocol {
    Classical(ClassicalProtocol),
    Quantum(QuantumProtocol),
}

#[derive(Debug, Clone)]
pub struct Compiled {
    pub protocol: CompiledProtocol,
    pub signature: Signature,
    /// Row-major `ε_{q,d}` of the scheme and of the protocol.
    pub scheme_error: Vec<f64>,
    pub protocol_error: Vec<f64>,
    pub max_gap: f64,
}

fn address_bits(s: usize) -> usize {
    qubits_for(s).max(1)
}

fn check_tables(s: usize, w: usize, t: usize, tables: &[Vec<u64>]) -> Result<()> {
    if s == 0 || w == 0 || t == 0 || tables.is_empty() {
        return Err(Error::Parameters("a scheme needs cells, words, probes and data".into()));
    }
    for tb in tables {
        if tb.len() != s || tb.iter().any(|v| w < 64 && v >> w != 0) {
            return Err(Error::Parameters(format!("tables must hold {s} words of {w} bits")));
        }
    }
    Ok(())
}

impl ClassicalScheme {
    pub fn validate(&self) -> Result<()> {
        check_tables(self.s, self.w, self.t, &self.tables)?;
        if self.queries == 0 || self.answers == 0 {
            return Err(Error::Parameters("empty query or answer set".into()));
        }
        Ok(())
    }

    /// Answer and the cells read on `(q, d)`.
    pub fn run(&self, q: usize, d: usize) -> Result<(u32, Vec<usize>)> {
        let mut contents = Vec::with_capacity(self.t);
        let mut cells = Vec::with_capacity(self.t);
        for i in 0..self.t {
            let j = (self.address)(i, q, &contents);
            let v = *self.tables[d]
                .get(j)
                .ok_or_else(|| Error::Parameters(format!("probe {i} reads cell {j} of {}", self.s)))?;
            cells.push(j);
            contents.push(v);
        }
        Ok(((self.output)(q, &contents), cells))
    }

    /// Row-major `ε_{q,d} ∈ {0, 1}`.
    pub fn errors(&self, g: &GameSpec) -> Result<Vec<f64>> {
        let mut e = Vec::with_capacity(self.queries * self.tables.len());
        for q in 0..self.queries {
            for d in 0..self.tables.len() {
                let (a, _) = self.run(q, d)?;
                e.push(if a == g.eval(q, d) { 0.0 } else { 1.0 });
            }
        }
        Ok(e)
    }

    /// The same scheme as a reversible circuit: probe `i` copies the word
    /// into `Zi` and clears `B`, so the data register is `|0⟩` before every
    /// probe.
    pub fn to_quantum(&self) -> Result<QuantumScheme> {
        self.validate()?;
        let (s, w, t) = (self.s, self.w, self.t);
        let jq = address_bits(s);
        let qq = qubits_for(self.queries).max(1);
        let mut regs = vec![
            Register::new(QUERY, qq, Party::Alice),
            Register::new(ADDRESS, jq, Party::Alice),
            Register::new(DATA, w, Party::Alice),
        ];
        let z: Vec<String> = (1..=t).map(|i| format!("Z{i}")).collect();
        for n in &z {
            regs.push(Register::new(n.as_str(), w, Party::Alice));
        }
        regs.push(Register::new("G", qubits_for(self.answers).max(1), Party::Alice));
        let layout = RegisterLayout::new(regs)?;
        let xor = |dim: usize, v: usize| Branch::Permutation((0..dim).map(|j| j ^ v).collect());
        let words = 1usize << w;
        // decodes a control value on (Q, Z1..Zi) into (q, contents)
        let split = |c: usize, i: usize| -> (usize, Vec<u64>) {
            let contents = (0..i).map(|k| ((c >> ((i - 1 - k) * w)) & (words - 1)) as u64).collect();
            (c >> (i * w), contents)
        };
        let mut steps = Vec::with_capacity(t + 1);
        let branches = (0..1usize << qq)
            .map(|q| if q < self.queries { xor(1 << jq, (self.address)(0, q, &[])) } else { Branch::Identity })
            .collect();
        steps.push(vec![Gate::controlled(&[QUERY], branches, &[ADDRESS])]);
        for i in 1..=t {
            let zi = z[i - 1].as_str();
            let mut ops = vec![
                Gate::controlled(&[DATA], (0..words).map(|b| xor(words, b)).collect(), &[zi]),
                Gate::controlled(&[zi], (0..words).map(|b| xor(words, b)).collect(), &[DATA]),
            ];
            let mut controls = vec![QUERY];
            controls.extend(z[..i].iter().map(|s| s.as_str()));
            let branches = (0..1usize << (qq + i * w))
                .map(|c| {
                    let (q, contents) = split(c, i);
                    if q >= self.queries {
                        Branch::Identity
                    } else if i < t {
                        let prev = (self.address)(i - 1, q, &contents[..i - 1]);
                        let next = (self.address)(i, q, &contents);
                        xor(1 << jq, prev ^ next)
                    } else {
                        let g = 1 << qubits_for(self.answers).max(1);
                        xor(g, (self.output)(q, &contents) as usize)
                    }
                })
                .collect();
            let target = if i < t { ADDRESS } else { "G" };
            ops.push(Gate::controlled(&controls, branches, &[target]));
            steps.push(ops);
        }
        let mut zero = vec![c64(0.0, 0.0); words];
        zero[0] = c64(1.0, 0.0);
        Ok(QuantumScheme {
            name: format!("{} (reversible)", self.name),
            s,
            w,
            t,
            queries: self.queries,
            answers: self.answers,
            tables: self.tables.clone(),
            layout,
            steps,
            answer: vec!["G".into()],
            address_only: true,
            theta: vec![zero; t],
        })
    }
}

/// `|j, b⟩ ↦ |j, b ⊕ table[j]⟩` on an address of `jq` qubits and a word of `w`.
fn oracle_permutation(table: &[u64], jq: usize, w: usize) -> Vec<usize> {
    (0..1usize << (jq + w))
        .map(|c| {
            let (j, b) = (c >> w, c & ((1 << w) - 1));
            let v = table.get(j).copied().unwrap_or(0) as usize;
            (j << w) | (b ^ v)
        })
        .collect()
}

fn swap_permutation(w: usize) -> Vec<usize> {
    (0..1usize << (2 * w))
        .map(|c| ((c & ((1 << w) - 1)) << w) | (c >> w))
        .collect()
}

impl QuantumScheme {
    pub fn validate(&self) -> Result<()> {
        check_tables(self.s, self.w, self.t, &self.tables)?;
        self.layout.check_capacity()?;
        if self.layout.get(ADDRESS)?.qubits != address_bits(self.s) || self.layout.get(DATA)?.qubits != self.w {
            return Err(Error::Parameters("address or data register has the wrong width".into()));
        }
        if (1usize << self.layout.get(QUERY)?.qubits) < self.queries {
            return Err(Error::Parameters("query register too small".into()));
        }
        if self.steps.len() != self.t + 1 {
            return Err(Error::Parameters(format!("{} steps for {} probes", self.steps.len(), self.t)));
        }
        for g in self.steps.iter().flatten() {
            if g.targets().iter().any(|r| r == QUERY) {
                return Err(Error::Parameters("the query register is read only".into()));
            }
        }
        if self.address_only {
            if self.theta.len() != self.t {
                return Err(Error::Parameters("one fixed data state per probe is required".into()));
            }
            for th in &self.theta {
                if th.len() != 1 << self.w {
                    return Err(Error::Dimension("fixed data state has the wrong dimension".into()));
                }
            }
        }
        Ok(())
    }

    fn start(&self, q: usize) -> Result<PureState> {
        PureState::from_values(self.layout.clone(), &[(QUERY, q)])
    }

    fn oracle(&self, d: usize, s: &PureState) -> Result<PureState> {
        let perm = oracle_permutation(&self.tables[d], address_bits(self.s), self.w);
        s.apply_permutation(&perm, &[ADDRESS, DATA])
    }

    /// State right before probe `i` (0-based) on `(q, d)`.
    pub fn before_probe(&self, q: usize, d: usize, i: usize) -> Result<PureState> {
        let mut s = self.start(q)?;
        for k in 0..=i {
            if k > 0 {
                s = self.oracle(d, &s)?;
            }
            for g in &self.steps[k] {
                s = g.apply(&s)?;
            }
        }
        Ok(s)
    }

    pub fn answer_distribution(&self, q: usize, d: usize) -> Result<Vec<f64>> {
        let mut s = self.before_probe(q, d, self.t - 1)?;
        s = self.oracle(d, &s)?;
        for g in &self.steps[self.t] {
            s = g.apply(&s)?;
        }
        s.probabilities(&self.answer)
    }

    /// Row-major `ε_{q,d}`.
    pub fn errors(&self, g: &GameSpec) -> Result<Vec<f64>> {
        let mut e = Vec::with_capacity(self.queries * self.tables.len());
        for q in 0..self.queries {
            for d in 0..self.tables.len() {
                let p = self.answer_distribution(q, d)?;
                e.push((1.0 - p.get(g.eval(q, d) as usize).copied().unwrap_or(0.0)).max(0.0));
            }
        }
        Ok(e)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AddressOnlyReport {
    pub passed: bool,
    /// Data-register state before each probe: the declared one, or the one
    /// found on the first input when none is declared.
    pub fixed_states: Vec<Vec<C64>>,
    /// Largest `1 − ⟨θ_i|ρ_B|θ_i⟩` over inputs and probes.
    pub max_residual: f64,
    /// `(q, d, probe)` attaining it.
    pub worst: (usize, usize, usize),
}

/// Checks that before every probe the state factors as (rest) ⊗ `|θ_i⟩` on
/// the data register, with `θ_i` independent of `q` and `d`.
pub fn check_address_only(scheme: &QuantumScheme) -> Result<AddressOnlyReport> {
    check_tables(scheme.s, scheme.w, scheme.t, &scheme.tables)?;
    let mut fixed = Vec::with_capacity(scheme.t);
    for i in 0..scheme.t {
        match scheme.theta.get(i) {
            Some(th) => fixed.push(th.clone()),
            None => {
                let rho = scheme.before_probe(0, 0, i)?.reduced(&[DATA])?;
                let e = hermitian_eig(rho.matrix())?;
                let mut v = e.vectors.column(0);
                crate::tensor::eig::normalize_phase(&mut v);
                fixed.push(v);
            }
        }
    }
    let mut max_residual = 0.0f64;
    let mut worst = (0, 0, 0);
    for q in 0..scheme.queries {
        for d in 0..scheme.tables.len() {
            for (i, th) in fixed.iter().enumerate() {
                let rho = scheme.before_probe(q, d, i)?.reduced(&[DATA])?;
                let m = rho.matrix();
                let v = m.mul_vec(th)?;
                let r = (1.0 - inner(th, &v).re).max(0.0);
                if r > max_residual {
                    max_residual = r;
                    worst = (q, d, i);
                }
            }
        }
    }
    Ok(AddressOnlyReport {
        passed: max_residual <= ADDRESS_ONLY_TOL,
        fixed_states: fixed,
        max_residual,
        worst,
    })
}

fn gap(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

/// Compiles a scheme into a `2t`-round protocol started by Alice. Classical
/// and address-only quantum schemes give `(2t, 0, log s, log s + w)^A`,
/// general quantum schemes `(2t, 0, log s + w, log s + w)^A`.
pub fn compile_cellprobe(scheme: &CellProbeScheme, g: &GameSpec) -> Result<Compiled> {
    match scheme {
        CellProbeScheme::Classical(c) => compile_classical(c, g),
        CellProbeScheme::Quantum(q) => compile_quantum(q, g),
    }
}

fn check_game(queries: usize, data: usize, answers: usize, g: &GameSpec) -> Result<()> {
    if g.alice_inputs != queries || g.bob_inputs != data || g.answers != answers {
        return Err(Error::InvalidGame(format!(
            "scheme answers {queries}x{data}→{answers}, game {} is {}x{}→{}",
            g.name, g.alice_inputs, g.bob_inputs, g.answers
        )));
    }
    Ok(())
}

fn compile_classical(c: &ClassicalScheme, g: &GameSpec) -> Result<Compiled> {
    c.validate()?;
    check_game(c.queries, c.tables.len(), c.answers, g)?;
    let (w, t) = (c.w, c.t);
    let jb = address_bits(c.s);
    let mut lengths = Vec::with_capacity(2 * t);
    for _ in 0..t {
        lengths.extend([jb, jb + w]);
    }
    let prefix: Vec<usize> = (0..=2 * t).map(|k| lengths[..k].iter().sum()).collect();
    // contents carried by Bob's messages among the first k rounds
    let contents = |k: usize, tr: u64| -> Vec<u64> {
        (1..k)
            .step_by(2)
            .map(|r| (tr >> (prefix[k] - prefix[r + 1])) & ((1u64 << w) - 1))
            .collect()
    };
    let shape = Shape {
        starter: Party::Alice,
        lengths: lengths.clone(),
        alice_inputs: c.queries,
        bob_inputs: c.tables.len(),
        answers: c.answers,
    };
    let p = ClassicalProtocol::from_fn(
        shape,
        vec![Ratio::from_integer(1.into())],
        CoinSpace::trivial(),
        CoinSpace::trivial(),
        |k, input, _, _, tr| {
            if k % 2 == 0 {
                let j = (c.address)(k / 2, input, &contents(k, tr));
                (j.min((1 << jb) - 1)) as u32
            } else {
                let j = (tr & ((1u64 << jb) - 1)) as usize;
                let v = c.tables[input].get(j).copied().unwrap_or(0);
                ((j << w) as u64 | v) as u32
            }
        },
        |input, _, _, tr| (c.output)(input, &contents(2 * t, tr)),
    )?;
    let scheme_error = c.errors(g)?;
    let report = eval_classical(&p, g, None)?;
    let protocol_error: Vec<f64> = report.per_input.iter().map(to_f64).collect();
    Ok(Compiled {
        signature: p.signature(),
        max_gap: gap(&scheme_error, &protocol_error),
        protocol: CompiledProtocol::Classical(p),
        scheme_error,
        protocol_error,
    })
}

fn compile_quantum(sch: &QuantumScheme, g: &GameSpec) -> Result<Compiled> {
    sch.validate()?;
    check_game(sch.queries, sch.tables.len(), sch.answers, g)?;
    if sch.address_only {
        let r = check_address_only(sch)?;
        if !r.passed {
            let (q, d, i) = r.worst;
            return Err(Error::Precondition(format!(
                "address-only check failed: residual {:e} at query {q}, data {d}, probe {}",
                r.max_residual,
                i + 1
            )));
        }
    }
    let (w, t) = (sch.w, sch.t);
    let jq = address_bits(sch.s);
    let dq = qubits_for(sch.tables.len()).max(1);
    let special: Vec<String> = (1..=t).map(|i| format!("T{i}")).collect();
    let mut regs: Vec<Register> = sch
        .layout
        .registers()
        .iter()
        .map(|r| Register::new(r.name.as_str(), r.qubits, Party::Alice))
        .collect();
    regs.push(Register::new(TABLE, dq, Party::Bob));
    if sch.address_only {
        for n in &special {
            regs.push(Register::new(n.as_str(), w, Party::Bob));
        }
    }
    let layout = RegisterLayout::new(regs)?;
    layout.check_capacity()?;
    let oracle = |target: &str| {
        let branches = (0..1usize << dq)
            .map(|d| match sch.tables.get(d) {
                Some(tb) => Branch::Permutation(oracle_permutation(tb, jq, w)),
                None => Branch::Identity,
            })
            .collect();
        Gate::controlled(&[TABLE], branches, &[ADDRESS, target])
    };
    let swap = |i: usize| Gate::permutation(swap_permutation(w), &[DATA, special[i].as_str()]);
    let mut prep = Vec::new();
    if sch.address_only {
        for (th, n) in sch.theta.iter().zip(&special) {
            prep.push((Party::Bob, Gate::unitary(unitary_with_first_column(th)?, &[n.as_str()])));
        }
    }
    let mut rounds = Vec::with_capacity(2 * t);
    for i in 0..t {
        let mut ops = Vec::new();
        if i > 0 && sch.address_only {
            ops.push(swap(i - 1));
        }
        ops.extend(sch.steps[i].iter().cloned());
        let (data, send): (&str, Vec<String>) = if sch.address_only {
            (special[i].as_str(), vec![ADDRESS.into()])
        } else {
            (DATA, vec![ADDRESS.into(), DATA.into()])
        };
        rounds.push(QuantumRound {
            sender: Party::Alice,
            ops,
            send,
        });
        rounds.push(QuantumRound {
            sender: Party::Bob,
            ops: vec![oracle(data)],
            send: vec![ADDRESS.into(), data.to_string()],
        });
    }
    let mut ops = Vec::new();
    if sch.address_only {
        ops.push(swap(t - 1));
    }
    ops.extend(sch.steps[t].iter().cloned());
    let p = QuantumProtocol {
        layout,
        starter: Party::Alice,
        alice_input: vec![QUERY.into()],
        alice_values: (0..sch.queries).map(|q| vec![q]).collect(),
        bob_input: vec![TABLE.into()],
        bob_values: (0..sch.tables.len()).map(|d| vec![d]).collect(),
        prep,
        rounds,
        safe: Vec::new(),
        overhead: 0,
        finale: Finale {
            party: Party::Alice,
            ops,
            answer: sch.answer.clone(),
        },
        answers: sch.answers,
    };
    p.validate()?;
    let scheme_error = sch.errors(g)?;
    let mut protocol_error = Vec::with_capacity(scheme_error.len());
    for q in 0..sch.queries {
        for d in 0..sch.tables.len() {
            protocol_error.push(p.pair_error(g, q, d)?);
        }
    }
    Ok(Compiled {
        signature: p.signature()?,
        max_gap: gap(&scheme_error, &protocol_error),
        protocol: CompiledProtocol::Quantum(p),
        scheme_error,
        protocol_error,
    })
}

/// Predecessor in sets `S ⊆ [4]` containing 0, stored sorted in four 2-bit
/// cells (padded by repeating the maximum) and found with two probes.
pub fn binary_search_predecessor() -> Result<(ClassicalScheme, GameSpec)> {
    let sets: Vec<Vec<u64>> = (0..8u64)
        .map(|m| {
            let mut s = vec![0u64];
            s.extend((1..4).filter(|y| m >> (y - 1) & 1 == 1));
            s
        })
        .collect();
    let tables: Vec<Vec<u64>> = sets
        .iter()
        .map(|s| (0..4).map(|j| s[j.min(s.len() - 1)]).collect())
        .collect();
    let pred = |q: usize, s: &[u64]| s.iter().filter(|&&y| y <= q as u64).max().copied().unwrap_or(0) as u32;
    let g = GameSpec::from_fn("PRED_4", 4, 8, 4, |q, d| pred(q, &sets[d]))?;
    let scheme = ClassicalScheme {
        name: "binary-search predecessor".into(),
        s: 4,
        w: 2,
        t: 2,
        queries: 4,
        answers: 4,
        tables,
        address: Box::new(|i, q, c| match i {
            0 => 2,
            _ if c[0] <= q as u64 => 3,
            _ => 1,
        }),
        output: Box::new(|q, c| {
            let q = q as u64;
            let v = match (c[0] <= q, c[1] <= q) {
                (_, true) => c[1],
                (true, false) => c[0],
                (false, false) => 0,
            };
            v as u32
        }),
    };
    Ok((scheme, g))
}

/// One Grover iteration over four one-bit cells with a single marked cell;
/// the answer is the marked address. The data qubit stays in `|−⟩`.
pub fn grover_search() -> Result<(QuantumScheme, GameSpec)> {
    let layout = RegisterLayout::simple(Party::Alice, &[(QUERY, 1), (ADDRESS, 2), (DATA, 1)])?;
    let h = gates::hadamard();
    let h2 = h.kron(&h);
    // 2|s⟩⟨s| − I on the address
    let diffusion = Matrix::from_real(
        4,
        4,
        &(0..16).map(|k| if k % 5 == 0 { -0.5 } else { 0.5 }).collect::<Vec<_>>(),
    )?;
    let minus = gates::pauli_x();
    let u0 = vec![
        Gate::unitary(minus, &[DATA]),
        Gate::unitary(h.clone(), &[DATA]),
        Gate::unitary(h2, &[ADDRESS]),
    ];
    let u1 = vec![Gate::unitary(diffusion, &[ADDRESS])];
    let r = core::f64::consts::FRAC_1_SQRT_2;
    let scheme = QuantumScheme {
        name: "Grover search".into(),
        s: 4,
        w: 1,
        t: 1,
        queries: 1,
        answers: 4,
        tables: (0..4).map(|d| (0..4).map(|j| (j == d) as u64).collect()).collect(),
        layout,
        steps: vec![u0, u1],
        answer: vec![ADDRESS.into()],
        address_only: true,
        theta: vec![vec![c64(r, 0.0), c64(-r, 0.0)]],
    };
    let g = GameSpec::from_fn("SEARCH_4", 1, 4, 4, |_, d| d as u32)?;
    Ok((scheme, g))
}
