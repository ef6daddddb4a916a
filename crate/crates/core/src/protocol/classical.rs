//! Table-driven classical protocols with exact evaluation.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::{One, Zero};
use rand::Rng;

use super::game::GameSpec;
use super::signature::Signature;
use crate::error::{Error, Result};
use crate::info::{Codewords, Encoding, JointDistribution};
use crate::rational::{check_distribution, to_f64, Ratio};
use crate::tensor::Party;

/// Default limit on enumerated branches per evaluation.
pub const BRANCH_CAP: u64 = 10_000_000;

/// Largest table a protocol may hold.
pub const TABLE_CAP: usize = 1 << 24;

/// Distribution of a private coin, either fixed or chosen per
/// `(own input, public coin)` context `input·npub + pub`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CoinDist {
    Fixed(Vec<Ratio>),
    PerContext(Vec<Vec<Ratio>>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoinSpace {
    pub outcomes: usize,
    pub dist: CoinDist,
    /// Drawing this outcome counts as an error.
    pub forfeit: Option<usize>,
}

impl CoinSpace {
    pub fn trivial() -> Self {
        Self::fixed(vec![Ratio::one()])
    }

    pub fn fixed(dist: Vec<Ratio>) -> Self {
        Self {
            outcomes: dist.len(),
            dist: CoinDist::Fixed(dist),
            forfeit: None,
        }
    }

    pub fn dist(&self, context: usize) -> &[Ratio] {
        match &self.dist {
            CoinDist::Fixed(d) => d,
            CoinDist::PerContext(ds) => &ds[context],
        }
    }

    fn validate(&self, contexts: usize) -> Result<()> {
        let check = |d: &[Ratio]| -> Result<()> {
            if d.len() != self.outcomes {
                return Err(Error::InvalidProtocol(format!(
                    "coin distribution over {} outcomes, expected {}",
                    d.len(),
                    self.outcomes
                )));
            }
            check_distribution(d)
        };
        match &self.dist {
            CoinDist::Fixed(d) => check(d)?,
            CoinDist::PerContext(ds) => {
                if ds.len() != contexts {
                    return Err(Error::InvalidProtocol(format!(
                        "{} coin contexts, expected {contexts}",
                        ds.len()
                    )));
                }
                for d in ds {
                    check(d)?;
                }
            }
        }
        if self.forfeit.is_some_and(|f| f >= self.outcomes) {
            return Err(Error::InvalidProtocol("forfeit outcome out of range".into()));
        }
        Ok(())
    }
}

/// Sizes shared by a protocol and the game it plays.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Shape {
    pub starter: Party,
    pub lengths: Vec<usize>,
    pub alice_inputs: usize,
    pub bob_inputs: usize,
    pub answers: usize,
}

impl Shape {
    pub fn for_game(g: &GameSpec, starter: Party, lengths: Vec<usize>) -> Self {
        Self {
            starter,
            lengths,
            alice_inputs: g.alice_inputs,
            bob_inputs: g.bob_inputs,
            answers: g.answers,
        }
    }
}

/// A `t`-round protocol. Round `k` is sent by the starter for even `k`; the
/// recipient of the last message answers, and Bob answers when `t = 0`.
///
/// Tables are indexed by `((input·npub + pub)·ncoin + coin)·2^b + transcript`
/// where the transcript holds the `b` bits exchanged so far, earliest first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassicalProtocol {
    pub starter: Party,
    pub lengths: Vec<usize>,
    pub alice_inputs: usize,
    pub bob_inputs: usize,
    pub answers: usize,
    pub public: Vec<Ratio>,
    pub alice_coin: CoinSpace,
    pub bob_coin: CoinSpace,
    pub messages: Vec<Vec<u32>>,
    pub answer_table: Vec<u32>,
}

/// Outcome of one deterministic run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Run {
    pub transcript: u64,
    pub answer: u32,
    pub forfeited: bool,
}

impl ClassicalProtocol {
    pub fn from_fn(
        shape: Shape,
        public: Vec<Ratio>,
        alice_coin: CoinSpace,
        bob_coin: CoinSpace,
        message: impl Fn(usize, usize, usize, usize, u64) -> u32,
        answer: impl Fn(usize, usize, usize, u64) -> u32,
    ) -> Result<Self> {
        let mut p = Self {
            starter: shape.starter,
            lengths: shape.lengths,
            alice_inputs: shape.alice_inputs,
            bob_inputs: shape.bob_inputs,
            answers: shape.answers,
            public,
            alice_coin,
            bob_coin,
            messages: Vec::new(),
            answer_table: Vec::new(),
        };
        for k in 0..p.rounds() {
            let s = p.sender(k);
            let bits = p.prefix_bits(k);
            let size = p.table_size(s, bits)?;
            let mut t = Vec::with_capacity(size);
            for ctx in 0..p.inputs(s) * p.public.len() {
                for coin in 0..p.coin(s).outcomes {
                    for tr in 0..1u64 << bits {
                        let (input, pb) = (ctx / p.public.len(), ctx % p.public.len());
                        t.push(message(k, input, pb, coin, tr));
                    }
                }
            }
            p.messages.push(t);
        }
        let a = p.answerer();
        let bits = p.total_bits();
        let size = p.table_size(a, bits)?;
        let mut t = Vec::with_capacity(size);
        for ctx in 0..p.inputs(a) * p.public.len() {
            for coin in 0..p.coin(a).outcomes {
                for tr in 0..1u64 << bits {
                    t.push(answer(ctx / p.public.len(), ctx % p.public.len(), coin, tr));
                }
            }
        }
        p.answer_table = t;
        p.validate()?;
        Ok(p)
    }

    fn table_size(&self, party: Party, bits: usize) -> Result<usize> {
        let size = (self.inputs(party) * self.public.len() * self.coin(party).outcomes)
            .checked_mul(1usize.checked_shl(bits as u32).unwrap_or(usize::MAX))
            .unwrap_or(usize::MAX);
        if size > TABLE_CAP || bits > 40 {
            return Err(Error::Capacity {
                what: "protocol table",
                needed: size,
                limit: TABLE_CAP,
            });
        }
        Ok(size)
    }

    pub fn validate(&self) -> Result<()> {
        if self.public.is_empty() {
            return Err(Error::InvalidProtocol("empty public coin".into()));
        }
        check_distribution(&self.public)?;
        self.alice_coin.validate(self.alice_inputs * self.public.len())?;
        self.bob_coin.validate(self.bob_inputs * self.public.len())?;
        if self.messages.len() != self.rounds() {
            return Err(Error::InvalidProtocol("one message table per round".into()));
        }
        for k in 0..self.rounds() {
            let s = self.sender(k);
            let size = self.table_size(s, self.prefix_bits(k))?;
            if self.messages[k].len() != size {
                return Err(Error::InvalidProtocol(format!(
                    "round {k} table has {} entries, expected {size}",
                    self.messages[k].len()
                )));
            }
            let l = self.lengths[k];
            if l > 31 {
                return Err(Error::BitLength { expected: 31, got: l });
            }
            if let Some(m) = self.messages[k].iter().find(|m| (**m as u64) >> l != 0) {
                return Err(Error::BitLength {
                    expected: l,
                    got: 32 - m.leading_zeros() as usize,
                });
            }
        }
        let size = self.table_size(self.answerer(), self.total_bits())?;
        if self.answer_table.len() != size {
            return Err(Error::InvalidProtocol("answer table has wrong size".into()));
        }
        if self.answer_table.iter().any(|a| *a as usize >= self.answers) {
            return Err(Error::InvalidProtocol("answer outside G".into()));
        }
        Ok(())
    }

    pub fn rounds(&self) -> usize {
        self.lengths.len()
    }

    pub fn sender(&self, k: usize) -> Party {
        if k % 2 == 0 {
            self.starter
        } else {
            self.starter.other()
        }
    }

    pub fn answerer(&self) -> Party {
        match self.rounds() {
            0 => Party::Bob,
            t => self.sender(t - 1).other(),
        }
    }

    pub fn inputs(&self, party: Party) -> usize {
        match party {
            Party::Alice => self.alice_inputs,
            Party::Bob => self.bob_inputs,
        }
    }

    pub fn coin(&self, party: Party) -> &CoinSpace {
        match party {
            Party::Alice => &self.alice_coin,
            Party::Bob => &self.bob_coin,
        }
    }

    pub fn prefix_bits(&self, k: usize) -> usize {
        self.lengths[..k].iter().sum()
    }

    pub fn total_bits(&self) -> usize {
        self.lengths.iter().sum()
    }

    /// Bits sent by Alice and by Bob.
    pub fn communication(&self) -> [usize; 2] {
        let mut c = [0, 0];
        for (k, l) in self.lengths.iter().enumerate() {
            c[(self.sender(k) == Party::Bob) as usize] += l;
        }
        c
    }

    pub fn signature(&self) -> Signature {
        Signature::new(0, self.lengths.clone(), self.starter)
    }

    pub fn shape(&self) -> Shape {
        Shape {
            starter: self.starter,
            lengths: self.lengths.clone(),
            alice_inputs: self.alice_inputs,
            bob_inputs: self.bob_inputs,
            answers: self.answers,
        }
    }

    pub fn has_public_coin(&self) -> bool {
        self.public.len() > 1
    }

    fn index(&self, party: Party, input: usize, pb: usize, coin: usize, bits: usize, tr: u64) -> usize {
        (((input * self.public.len() + pb) * self.coin(party).outcomes + coin) << bits) | tr as usize
    }

    pub fn message(&self, k: usize, input: usize, pb: usize, coin: usize, transcript: u64) -> u32 {
        let bits = self.prefix_bits(k);
        self.messages[k][self.index(self.sender(k), input, pb, coin, bits, transcript)]
    }

    pub fn answer(&self, input: usize, pb: usize, coin: usize, transcript: u64) -> u32 {
        let a = self.answerer();
        self.answer_table[self.index(a, input, pb, coin, self.total_bits(), transcript)]
    }

    /// Deterministic run for fixed inputs and coins.
    pub fn run(&self, x: usize, y: usize, pb: usize, a: usize, b: usize) -> Run {
        let mut tr = 0u64;
        for k in 0..self.rounds() {
            let m = match self.sender(k) {
                Party::Alice => self.message(k, x, pb, a, tr),
                Party::Bob => self.message(k, y, pb, b, tr),
            };
            tr = (tr << self.lengths[k]) | m as u64;
        }
        let answer = match self.answerer() {
            Party::Alice => self.answer(x, pb, a, tr),
            Party::Bob => self.answer(y, pb, b, tr),
        };
        Run {
            transcript: tr,
            answer,
            forfeited: self.alice_coin.forfeit == Some(a) || self.bob_coin.forfeit == Some(b),
        }
    }

    /// Samples one run, drawing coins with `rng`.
    pub fn sample<R: Rng + ?Sized>(&self, x: usize, y: usize, rng: &mut R) -> Run {
        let pb = draw(&self.public, rng);
        let np = self.public.len();
        let a = draw(self.alice_coin.dist(x * np + pb), rng);
        let b = draw(self.bob_coin.dist(y * np + pb), rng);
        self.run(x, y, pb, a, b)
    }

    pub fn check_game(&self, g: &GameSpec) -> Result<()> {
        if self.alice_inputs != g.alice_inputs
            || self.bob_inputs != g.bob_inputs
            || self.answers != g.answers
        {
            return Err(Error::InvalidProtocol(format!(
                "protocol plays {}x{}→{}, game {} is {}x{}→{}",
                self.alice_inputs,
                self.bob_inputs,
                self.answers,
                g.name,
                g.alice_inputs,
                g.bob_inputs,
                g.answers
            )));
        }
        Ok(())
    }

    /// Probability of error on `(x, y)` and the number of branches visited.
    pub fn pair_error(&self, g: &GameSpec, x: usize, y: usize) -> (Ratio, u64) {
        let np = self.public.len();
        let want = g.eval(x, y);
        let mut err = Ratio::zero();
        let mut branches = 0u64;
        for (pb, wp) in self.public.iter().enumerate() {
            if wp.is_zero() {
                continue;
            }
            let da = self.alice_coin.dist(x * np + pb);
            let db = self.bob_coin.dist(y * np + pb);
            let mut inner = Ratio::zero();
            for (a, wa) in da.iter().enumerate() {
                if wa.is_zero() {
                    continue;
                }
                let mut bad_b = Ratio::zero();
                for (b, wb) in db.iter().enumerate() {
                    if wb.is_zero() {
                        continue;
                    }
                    branches += 1;
                    let r = self.run(x, y, pb, a, b);
                    if r.forfeited || r.answer != want {
                        bad_b += wb;
                    }
                }
                inner += wa * bad_b;
            }
            err += wp * inner;
        }
        (err, branches)
    }

    /// Bound on the branches [`eval_classical`] visits.
    pub fn branch_estimate(&self) -> u64 {
        (self.alice_inputs * self.bob_inputs) as u64
            * self.public.len() as u64
            * self.alice_coin.outcomes as u64
            * self.bob_coin.outcomes as u64
    }
}

fn draw<R: Rng + ?Sized>(dist: &[Ratio], rng: &mut R) -> usize {
    let u: f64 = rng.random();
    let mut acc = 0.0;
    let mut last = 0;
    for (i, p) in dist.iter().enumerate() {
        if p.is_zero() {
            continue;
        }
        last = i;
        acc += to_f64(p);
        if u < acc {
            return i;
        }
    }
    last
}

/// Exact errors of a protocol on a game.
#[derive(Debug, Clone, PartialEq)]
pub struct ErrorReport {
    /// Row-major `ε_{x,y}`.
    pub per_input: Vec<Ratio>,
    /// `E_D[ε_{x,y}]` when a distribution was given.
    pub distributional: Option<Ratio>,
    /// Maximum over promised pairs.
    pub worst: Ratio,
    pub worst_input: (usize, usize),
    pub branches: u64,
    /// Bits sent by Alice and Bob.
    pub communication: [usize; 2],
}

impl ErrorReport {
    pub fn pair(&self, bob_inputs: usize, x: usize, y: usize) -> &Ratio {
        &self.per_input[x * bob_inputs + y]
    }
}

pub fn eval_classical(
    p: &ClassicalProtocol,
    g: &GameSpec,
    d: Option<&JointDistribution>,
) -> Result<ErrorReport> {
    eval_classical_capped(p, g, d, BRANCH_CAP)
}

pub fn eval_classical_capped(
    p: &ClassicalProtocol,
    g: &GameSpec,
    d: Option<&JointDistribution>,
    cap: u64,
) -> Result<ErrorReport> {
    p.check_game(g)?;
    if let Some(d) = d {
        if d.alice_size() != g.alice_inputs || d.bob_size() != g.bob_inputs {
            return Err(Error::Dimension("distribution does not match the game".into()));
        }
    }
    let est = p.branch_estimate();
    if est > cap {
        return Err(Error::Capacity {
            what: "classical enumeration",
            needed: est as usize,
            limit: cap as usize,
        });
    }
    let mut per_input = Vec::with_capacity(g.alice_inputs * g.bob_inputs);
    let mut worst = Ratio::zero();
    let mut worst_input = None;
    let mut branches = 0;
    for x in 0..g.alice_inputs {
        for y in 0..g.bob_inputs {
            let (e, b) = p.pair_error(g, x, y);
            branches += b;
            if g.promised(x, y) && (worst_input.is_none() || e > worst) {
                worst = e.clone();
                worst_input = Some((x, y));
            }
            per_input.push(e);
        }
    }
    let distributional = d.map(|d| d.expectation(|x, y| per_input[x * g.bob_inputs + y].clone()));
    Ok(ErrorReport {
        per_input,
        distributional,
        worst,
        worst_input: worst_input.unwrap_or((0, 0)),
        branches,
        communication: p.communication(),
    })
}

/// Distributional error alone, visiting only the support of `d`.
pub fn distributional_error(p: &ClassicalProtocol, g: &GameSpec, d: &JointDistribution) -> Result<Ratio> {
    p.check_game(g)?;
    Ok(d.expectation(|x, y| p.pair_error(g, x, y).0))
}

/// The starter's first message as an encoding of the starter's input.
#[derive(Debug, Clone, PartialEq)]
pub struct MessageEncoding {
    /// Input values with positive prior, in order; `encoding` is indexed alike.
    pub inputs: Vec<usize>,
    pub encoding: Encoding,
    /// `σ_x` for every input value, including those of prior zero.
    pub codewords: Vec<Vec<Ratio>>,
}

pub fn first_message_encoding(
    p: &ClassicalProtocol,
    g: &GameSpec,
    d: &JointDistribution,
) -> Result<MessageEncoding> {
    p.check_game(g)?;
    if p.rounds() == 0 {
        return Err(Error::InvalidProtocol("protocol has no first message".into()));
    }
    let s = p.starter;
    if p.coin(s).forfeit.is_some() {
        return Err(Error::InvalidProtocol("first sender has a forfeit coin".into()));
    }
    let marg = match s {
        Party::Alice => d.marginal_x(),
        Party::Bob => d.marginal_y(),
    };
    let nm = 1usize << p.lengths[0];
    let np = p.public.len();
    let mut codewords = Vec::with_capacity(p.inputs(s));
    for x in 0..p.inputs(s) {
        let mut sigma = vec![Ratio::zero(); nm];
        for (pb, wp) in p.public.iter().enumerate() {
            for (c, wc) in p.coin(s).dist(x * np + pb).iter().enumerate() {
                sigma[p.message(0, x, pb, c, 0) as usize] += wp * wc;
            }
        }
        codewords.push(sigma);
    }
    let inputs: Vec<usize> = (0..marg.len()).filter(|x| !marg[*x].is_zero()).collect();
    let encoding = Encoding::new(
        inputs.iter().map(|x| marg[*x].clone()).collect(),
        Codewords::Classical(inputs.iter().map(|x| codewords[*x].clone()).collect()),
    )?;
    Ok(MessageEncoding {
        inputs,
        encoding,
        codewords,
    })
}

/// Result of fixing the public coin.
#[derive(Debug, Clone, PartialEq)]
pub struct FixedCoin {
    pub protocol: ClassicalProtocol,
    pub coin: usize,
    pub error: Ratio,
    /// `ε_D` of every coin value.
    pub errors: Vec<Ratio>,
}

/// Restricts `p` to the public coin value with the least distributional error
/// (the first such value on ties).
pub fn fix_public_coin(p: &ClassicalProtocol, g: &GameSpec, d: &JointDistribution) -> Result<FixedCoin> {
    let mut errors = Vec::with_capacity(p.public.len());
    for c in 0..p.public.len() {
        let q = p.restrict_public(c)?;
        errors.push(distributional_error(&q, g, d)?);
    }
    let mut best = 0;
    for (c, e) in errors.iter().enumerate() {
        if !p.public[c].is_zero() && (p.public[best].is_zero() || *e < errors[best]) {
            best = c;
        }
    }
    Ok(FixedCoin {
        protocol: p.restrict_public(best)?,
        coin: best,
        error: errors[best].clone(),
        errors,
    })
}

impl ClassicalProtocol {
    /// The coinless protocol obtained by fixing the public coin to `c`.
    pub fn restrict_public(&self, c: usize) -> Result<Self> {
        if c >= self.public.len() {
            return Err(Error::Parameters(format!("public coin value {c} out of range")));
        }
        let np = self.public.len();
        let narrow = |cs: &CoinSpace, inputs: usize| CoinSpace {
            outcomes: cs.outcomes,
            forfeit: cs.forfeit,
            dist: match &cs.dist {
                CoinDist::Fixed(d) => CoinDist::Fixed(d.clone()),
                CoinDist::PerContext(ds) => {
                    CoinDist::PerContext((0..inputs).map(|x| ds[x * np + c].clone()).collect())
                }
            },
        };
        Self::from_fn(
            self.shape(),
            vec![Ratio::one()],
            narrow(&self.alice_coin, self.alice_inputs),
            narrow(&self.bob_coin, self.bob_inputs),
            |k, input, _, coin, tr| self.message(k, input, c, coin, tr),
            |input, _, coin, tr| self.answer(input, c, coin, tr),
        )
    }

    /// Public-coin mixture `Σ w_k P_k`. All parts must share one shape.
    pub fn mix(parts: &[(Ratio, ClassicalProtocol)]) -> Result<Self> {
        let (_, first) = parts
            .first()
            .ok_or_else(|| Error::InvalidProtocol("empty mixture".into()))?;
        let weights: Vec<Ratio> = parts.iter().map(|(w, _)| w.clone()).collect();
        check_distribution(&weights)?;
        let shape = first.shape();
        if let Some((_, q)) = parts.iter().find(|(_, q)| q.shape() != shape) {
            return Err(Error::InvalidProtocol(format!(
                "mixture parts differ: {} vs {}",
                first.signature(),
                q.signature()
            )));
        }
        // global public value -> (part, local public value)
        let mut origin = Vec::new();
        let mut public = Vec::new();
        for (k, (w, q)) in parts.iter().enumerate() {
            for (c, pc) in q.public.iter().enumerate() {
                origin.push((k, c));
                public.push(w * pc);
            }
        }
        let np = public.len();
        let merge = |party: Party, inputs: usize| -> (CoinSpace, Vec<Vec<usize>>) {
            let any_forfeit = parts.iter().any(|(_, q)| q.coin(party).forfeit.is_some());
            let plain = parts
                .iter()
                .map(|(_, q)| q.coin(party).outcomes - q.coin(party).forfeit.is_some() as usize)
                .max()
                .unwrap_or(1);
            let outcomes = plain + any_forfeit as usize;
            let forfeit = any_forfeit.then_some(plain);
            // new outcome -> old outcome, per part (usize::MAX when absent)
            let maps: Vec<Vec<usize>> = parts
                .iter()
                .map(|(_, q)| {
                    let cs = q.coin(party);
                    let mut m = vec![usize::MAX; outcomes];
                    let mut next = 0;
                    for o in 0..cs.outcomes {
                        if Some(o) == cs.forfeit {
                            m[plain] = o;
                        } else {
                            m[next] = o;
                            next += 1;
                        }
                    }
                    m
                })
                .collect();
            let mut dists: Vec<Vec<Ratio>> = Vec::with_capacity(inputs * np);
            for x in 0..inputs {
                for &(k, c) in &origin {
                    let q = &parts[k].1;
                    let old = q.coin(party).dist(x * q.public.len() + c);
                    dists.push(
                        maps[k]
                            .iter()
                            .map(|&o| if o == usize::MAX { Ratio::zero() } else { old[o].clone() })
                            .collect(),
                    );
                }
            }
            let dist = match dists.first() {
                Some(d0) if dists.iter().all(|d| d == d0) => CoinDist::Fixed(d0.clone()),
                _ => CoinDist::PerContext(dists),
            };
            (
                CoinSpace {
                    outcomes,
                    dist,
                    forfeit,
                },
                maps,
            )
        };
        let (alice_coin, amap) = merge(Party::Alice, shape.alice_inputs);
        let (bob_coin, bmap) = merge(Party::Bob, shape.bob_inputs);
        let local = |party: Party, k: usize, coin: usize| -> usize {
            let m = if party == Party::Alice { &amap } else { &bmap };
            match m[k][coin] {
                usize::MAX => 0,
                o => o,
            }
        };
        Self::from_fn(
            shape,
            public,
            alice_coin,
            bob_coin,
            |r, input, pb, coin, tr| {
                let (k, c) = origin[pb];
                let q = &parts[k].1;
                q.message(r, input, c, local(q.sender(r), k, coin), tr)
            },
            |input, pb, coin, tr| {
                let (k, c) = origin[pb];
                let q = &parts[k].1;
                q.answer(input, c, local(q.answerer(), k, coin), tr)
            },
        )
    }
}

/// Parameters for [`random_protocol`].
#[derive(Debug, Clone)]
pub struct RandomProtocolSpec {
    pub shape: Shape,
    pub public_values: usize,
    pub max_coin_outcomes: usize,
    pub granularity: u32,
}

/// A protocol with uniformly random tables and random exact coin distributions.
pub fn random_protocol<R: Rng + ?Sized>(spec: &RandomProtocolSpec, rng: &mut R) -> Result<ClassicalProtocol> {
    let coin = |rng: &mut R| {
        let k = rng.random_range(1..=spec.max_coin_outcomes.max(1));
        CoinSpace::fixed(crate::random::distribution(k, spec.granularity, false, rng))
    };
    let public = if spec.public_values > 1 {
        crate::random::distribution(spec.public_values, spec.granularity, true, rng)
    } else {
        vec![Ratio::one()]
    };
    let alice_coin = coin(rng);
    let bob_coin = coin(rng);
    let mut p = ClassicalProtocol::from_fn(
        spec.shape.clone(),
        public,
        alice_coin,
        bob_coin,
        |_, _, _, _, _| 0,
        |_, _, _, _| 0,
    )?;
    for (k, t) in p.messages.iter_mut().enumerate() {
        let l = spec.shape.lengths[k];
        for m in t.iter_mut() {
            *m = rng.random_range(0..1u32 << l);
        }
    }
    for a in p.answer_table.iter_mut() {
        *a = rng.random_range(0..spec.shape.answers as u32);
    }
    Ok(p)
}
