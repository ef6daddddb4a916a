//! A `t`-round public-coin protocol for greater-than.
//!
//! Each round the sender fingerprints the `b = ⌈n^{1/t}⌉` sub-blocks of the
//! interval known to contain the first differing bit; the receiver locates
//! the first mismatching sub-block and names it in the next message. After
//! `t` rounds the interval is a single bit and the last receiver answers.

use alloc::format;
use alloc::vec::Vec;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use rand::Rng;

use super::bits::BitString;
use crate::error::{Error, Result};
use crate::rational::Ratio;
use crate::tensor::Party;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GtProtocol {
    pub n: usize,
    pub t: usize,
    pub delta: Ratio,
    /// Fan-out `b` with `b^t ≥ n`.
    pub branching: usize,
    /// `⌈log(n·t/δ)⌉`.
    pub hash_bits: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GtRun {
    /// `x > y` as decided by the protocol.
    pub answer: bool,
    pub answerer: Party,
    /// Message lengths in bits, one per round.
    pub messages: Vec<usize>,
    /// Bits sent by Alice and by Bob.
    pub bits: [usize; 2],
}

fn bits_for(values: usize) -> usize {
    (usize::BITS - (values.max(1) - 1).leading_zeros()) as usize
}

fn ceil_div(a: usize, b: usize) -> usize {
    a.div_ceil(b)
}

/// Builds the protocol for `n`-bit inputs with target error `delta`.
pub fn gt_protocol(n: usize, t: usize, delta: Ratio) -> Result<GtProtocol> {
    if !(1..=64).contains(&n) {
        return Err(Error::Parameters(format!("n = {n} must lie in 1..=64")));
    }
    let log_n = bits_for(n).max(1);
    if t == 0 || t > log_n {
        return Err(Error::Parameters(format!("t = {t} must lie in 1..={log_n}")));
    }
    if delta <= Ratio::zero() || delta >= Ratio::one() {
        return Err(Error::Parameters("delta must lie in (0, 1)".into()));
    }
    let mut b = 1usize;
    while (b as u128).pow(t as u32) < n as u128 {
        b += 1;
    }
    let target = Ratio::from_integer(((n * t) as i64).into()) / &delta;
    let mut h = 0usize;
    while Ratio::from_integer(num_bigint::BigInt::one() << h) < target {
        h += 1;
    }
    Ok(GtProtocol {
        n,
        t,
        delta,
        branching: b,
        hash_bits: h.max(1),
    })
}

impl GtProtocol {
    /// Bits of the sub-block index, with one extra value for "no difference".
    pub fn index_bits(&self) -> usize {
        bits_for(self.branching + 1)
    }

    /// Longest possible transcript.
    pub fn worst_case_bits(&self) -> usize {
        let mut len = self.n;
        let mut total = 0;
        for r in 0..self.t {
            let sz = ceil_div(len, self.branching);
            let blocks = ceil_div(len, sz);
            total += blocks * self.hash_bits.min(sz);
            if r > 0 {
                total += self.index_bits();
            }
            len = sz;
        }
        total
    }

    /// `bits ≤ 4·t·n^{1/t}·⌈log(nt/δ)⌉`, decided exactly.
    pub fn within_bound(&self, bits: usize) -> bool {
        let lhs = BigUint::from(bits).pow(self.t as u32);
        let rhs = BigUint::from(self.n) * BigUint::from(4 * self.t * self.hash_bits).pow(self.t as u32);
        lhs <= rhs
    }

    /// One run with fresh public coins.
    pub fn run<R: Rng + ?Sized>(&self, x: &BitString, y: &BitString, rng: &mut R) -> Result<GtRun> {
        x.require_len(self.n)?;
        y.require_len(self.n)?;
        let (mut lo, mut len) = (0usize, self.n);
        let mut equal = false;
        let mut messages = Vec::with_capacity(self.t);
        let mut bits = [0usize; 2];
        for r in 0..self.t {
            let sender = if r % 2 == 0 { Party::Alice } else { Party::Bob };
            let mut m = if r > 0 { self.index_bits() } else { 0 };
            if !equal {
                let sz = ceil_div(len, self.branching);
                let blocks = ceil_div(len, sz);
                let mut first = None;
                for j in 0..blocks {
                    let start = lo + j * sz;
                    let l = sz.min(lo + len - start);
                    let a = x.slice(start, start + l)?.value();
                    let c = y.slice(start, start + l)?.value();
                    let differ = if l <= self.hash_bits {
                        m += l;
                        a != c
                    } else {
                        m += self.hash_bits;
                        let mut differ = false;
                        for _ in 0..self.hash_bits {
                            let v: u64 = rng.random::<u64>() >> (64 - l);
                            differ |= ((a & v).count_ones() ^ (c & v).count_ones()) & 1 == 1;
                        }
                        differ
                    };
                    if differ && first.is_none() {
                        first = Some((start, l));
                    }
                }
                match first {
                    Some((s, l)) => (lo, len) = (s, l),
                    None => equal = true,
                }
            }
            bits[(sender == Party::Bob) as usize] += m;
            messages.push(m);
        }
        let answerer = if self.t % 2 == 1 { Party::Bob } else { Party::Alice };
        let answer = if equal {
            false
        } else {
            debug_assert_eq!(len, 1);
            match answerer {
                Party::Alice => x.bit(lo),
                Party::Bob => !y.bit(lo),
            }
        };
        Ok(GtRun {
            answer,
            answerer,
            messages,
            bits,
        })
    }
}
