//! Rank parity, its block variants, and the greater-than self-reduction.

use alloc::format;
use alloc::vec::Vec;

use super::bits::BitString;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn of(n: usize) -> Self {
        if n % 2 == 0 {
            Parity::Even
        } else {
            Parity::Odd
        }
    }
}

/// `p`: bit length, `q`: largest set size, `k`: fan-out of the block variants.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RankParityParams {
    pub p: usize,
    pub q: usize,
    pub k: usize,
}

/// A `PAR_{p,q}` instance: Alice holds `x`, Bob holds `set`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParInstance {
    pub x: BitString,
    pub set: Vec<BitString>,
}

fn check_set(len: usize, set: &[BitString]) -> Result<()> {
    for y in set {
        y.require_len(len)?;
    }
    let mut v: Vec<u64> = set.iter().map(|y| y.value()).collect();
    v.sort_unstable();
    if v.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::InvalidGame("set has a repeated element".into()));
    }
    Ok(())
}

/// `|{y ∈ S : y ≤ x}|`.
pub fn rank(x: &BitString, set: &[BitString]) -> Result<usize> {
    check_set(x.len(), set)?;
    Ok(set.iter().filter(|y| y.value() <= x.value()).count())
}

pub fn par_answer(x: &BitString, set: &[BitString]) -> Result<Parity> {
    rank(x, set).map(Parity::of)
}

fn check_size(set: &[BitString], q: usize) -> Result<()> {
    if set.len() > q {
        return Err(Error::InvalidGame(format!("set of size {} exceeds q = {q}", set.len())));
    }
    Ok(())
}

/// `PAR^{(k),A}_{p/k,q}`: Alice holds `xs = x₁…x_k`; Bob holds the 1-based
/// index `i`, his copy `prefix` of `x₁…x_{i−1}`, and `set`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParAInstance {
    pub xs: Vec<BitString>,
    pub i: usize,
    pub prefix: Vec<BitString>,
    pub set: Vec<BitString>,
}

/// `x̂ = x₁⋯x_k`, `Ŝ = {x₁⋯x_{i−1}·y·0^{p(1−i/k)} | y ∈ S}`.
pub fn par_reduce_a(params: &RankParityParams, inst: &ParAInstance) -> Result<ParInstance> {
    let RankParityParams { p, q, k } = *params;
    if k == 0 || p % k != 0 {
        return Err(Error::Parameters(format!("k = {k} must divide p = {p}")));
    }
    let block = p / k;
    if inst.xs.len() != k || inst.i == 0 || inst.i > k || inst.prefix.len() != inst.i - 1 {
        return Err(Error::InvalidGame("malformed block instance".into()));
    }
    for x in inst.xs.iter().chain(&inst.prefix) {
        x.require_len(block)?;
    }
    if inst.prefix[..] != inst.xs[..inst.i - 1] {
        return Err(Error::InvalidGame("Bob's prefix differs from Alice's blocks".into()));
    }
    check_set(block, &inst.set)?;
    check_size(&inst.set, q)?;
    let x = BitString::concat_all(&inst.xs)?;
    let head = BitString::concat_all(&inst.prefix)?;
    let tail = BitString::zeros(block * (k - inst.i))?;
    let set = inst
        .set
        .iter()
        .map(|y| head.concat(y)?.concat(&tail))
        .collect::<Result<Vec<_>>>()?;
    Ok(ParInstance { x, set })
}

/// `PAR^{(k),B}_{p−log k−1, q/k}`: Alice holds `x` and the 1-based `i`; Bob
/// holds `sets = S₁…S_k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParBInstance {
    pub x: BitString,
    pub i: usize,
    pub sets: Vec<Vec<BitString>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParBReduction {
    pub instance: ParInstance,
    /// `|S′_j|`, all even.
    pub block_sizes: Vec<usize>,
    /// Whether block `j` received the padding element.
    pub padded: Vec<bool>,
    /// `|Ŝ| ≤ q`; can fail when `q/k` is odd.
    pub within_q: bool,
}

fn log2_exact(k: usize) -> Option<usize> {
    k.is_power_of_two().then(|| k.trailing_zeros() as usize)
}

/// `x̂ = (i−1)·0·x`; `S′_j = {(j−1)·0·y | y ∈ S_j}` plus `(j−1)·1^{p−log k}`
/// when `|S_j|` is odd.
pub fn par_reduce_b(params: &RankParityParams, inst: &ParBInstance) -> Result<ParBReduction> {
    let RankParityParams { p, q, k } = *params;
    let lk = log2_exact(k)
        .ok_or_else(|| Error::Parameters(format!("k = {k} must be a power of two")))?;
    if q % k != 0 {
        return Err(Error::Parameters(format!("k = {k} must divide q = {q}")));
    }
    if p < lk + 1 {
        return Err(Error::Parameters(format!("p = {p} leaves no room for {lk} index bits")));
    }
    let len = p - lk - 1;
    if inst.sets.len() != k || inst.i == 0 || inst.i > k {
        return Err(Error::InvalidGame("malformed block instance".into()));
    }
    inst.x.require_len(len)?;
    let zero = BitString::zeros(1)?;
    let pad = BitString::ones(p - lk)?;
    let mut set = Vec::new();
    let mut block_sizes = Vec::with_capacity(k);
    let mut padded = Vec::with_capacity(k);
    for (j, s) in inst.sets.iter().enumerate() {
        check_set(len, s)?;
        check_size(s, q / k)?;
        let idx = BitString::new(j as u64, lk)?;
        let head = idx.concat(&zero)?;
        for y in s {
            set.push(head.concat(y)?);
        }
        let odd = s.len() % 2 == 1;
        if odd {
            set.push(idx.concat(&pad)?);
        }
        padded.push(odd);
        block_sizes.push(s.len() + odd as usize);
    }
    let x = BitString::new((inst.i - 1) as u64, lk)?.concat(&zero)?.concat(&inst.x)?;
    let within_q = set.len() <= q;
    Ok(ParBReduction {
        instance: ParInstance { x, set },
        block_sizes,
        padded,
        within_q,
    })
}

/// `GT^{(k)}_{n/k}`: Alice holds `xs = x₁…x_k`; Bob holds the 1-based `i`, his
/// copy `prefix` of `x₁…x_{i−1}`, and `y`. The answer is `x_i > y`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GtBlockInstance {
    pub xs: Vec<BitString>,
    pub i: usize,
    pub prefix: Vec<BitString>,
    pub y: BitString,
}

/// `x̃ = x₁⋯x_k`, `ỹ = x₁⋯x_{i−1}·y·1^{n(1−i/k)}`, so that `x̃ > ỹ` iff `x_i > y`.
pub fn gt_self_reduce(n: usize, k: usize, inst: &GtBlockInstance) -> Result<(BitString, BitString)> {
    if k == 0 || n % k != 0 {
        return Err(Error::Parameters(format!("k = {k} must divide n = {n}")));
    }
    let block = n / k;
    if inst.xs.len() != k || inst.i == 0 || inst.i > k || inst.prefix.len() != inst.i - 1 {
        return Err(Error::InvalidGame("malformed block instance".into()));
    }
    for x in inst.xs.iter().chain(&inst.prefix).chain([&inst.y]) {
        x.require_len(block)?;
    }
    if inst.prefix[..] != inst.xs[..inst.i - 1] {
        return Err(Error::InvalidGame("Bob's prefix differs from Alice's blocks".into()));
    }
    let x = BitString::concat_all(&inst.xs)?;
    let y = BitString::concat_all(&inst.prefix)?
        .concat(&inst.y)?
        .concat(&BitString::ones(block * (k - inst.i))?)?;
    Ok((x, y))
}
