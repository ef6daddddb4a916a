//! Two-level perfect hashing that returns ranks.
//!
//! Cell 0 holds the first-level hash, cells `1..=r` describe the buckets and
//! the rest are second-level slots. A lookup reads the header, one bucket
//! descriptor and one slot.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FksCell {
    /// First-level hash `((k·x) mod prime) mod buckets`.
    Header { k: u64, prime: u64, buckets: u64 },
    /// Second-level table of `size` slots starting at `offset`.
    Bucket { offset: u64, size: u64, k: u64 },
    /// A member and its 1-based rank.
    Entry { key: u64, rank: u64 },
    Empty,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FksRankTable {
    pub universe: u64,
    pub cells: Vec<FksCell>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FksAnswer {
    Member(u64),
    Absent,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FksLookup {
    pub answer: FksAnswer,
    pub probes: usize,
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

fn hash(k: u64, prime: u64, size: u64, x: u64) -> u64 {
    ((k as u128 * x as u128 % prime as u128) % size as u128) as u64
}

/// Smallest `k` in `1..prime` for which `keep` accepts the bucket sizes.
fn search(prime: u64, size: u64, keys: &[u64], keep: impl Fn(&[u64]) -> bool) -> Option<u64> {
    let mut counts = vec![0u64; size as usize];
    (1..prime).find(|&k| {
        counts.iter_mut().for_each(|c| *c = 0);
        for &x in keys {
            counts[hash(k, prime, size, x) as usize] += 1;
        }
        keep(&counts)
    })
}

/// Stores `set ⊆ [universe]`. Hash multipliers are tried in increasing order,
/// so the table is a function of its input.
pub fn fks_build(set: &[u64], universe: u64) -> Result<FksRankTable> {
    let mut keys = set.to_vec();
    keys.sort_unstable();
    keys.dedup();
    if keys.len() != set.len() {
        return Err(Error::Parameters("set has a repeated element".into()));
    }
    if let Some(&x) = keys.iter().find(|&&x| x >= universe) {
        return Err(Error::Parameters(format!("{x} lies outside [{universe}]")));
    }
    let n = keys.len() as u64;
    let mut prime = universe.max(2);
    while !is_prime(prime) {
        prime += 1;
    }
    let r = n.max(1);
    let k = search(prime, r, &keys, |c| c.iter().map(|s| s * s).sum::<u64>() <= 4 * n)
        .ok_or_else(|| Error::Parameters("no first-level hash found".into()))?;
    let mut buckets: Vec<Vec<u64>> = vec![Vec::new(); r as usize];
    for &x in &keys {
        buckets[hash(k, prime, r, x) as usize].push(x);
    }
    let mut cells = vec![FksCell::Header { k, prime, buckets: r }];
    let mut slots = Vec::new();
    let mut offset = 1 + r;
    for b in &buckets {
        if b.is_empty() {
            cells.push(FksCell::Bucket { offset, size: 0, k: 0 });
            continue;
        }
        let mut size = (b.len() * b.len()) as u64;
        let kb = loop {
            if let Some(kb) = search(prime, size, b, |c| c.iter().all(|&s| s <= 1)) {
                break kb;
            }
            size *= 2;
        };
        let mut table = vec![FksCell::Empty; size as usize];
        for &x in b {
            let rank = keys.partition_point(|&y| y <= x) as u64;
            table[hash(kb, prime, size, x) as usize] = FksCell::Entry { key: x, rank };
        }
        cells.push(FksCell::Bucket { offset, size, k: kb });
        offset += size;
        slots.extend(table);
    }
    cells.extend(slots);
    Ok(FksRankTable { universe, cells })
}

/// Looks `x` up, counting the cells read.
pub fn fks_query(table: &FksRankTable, x: u64) -> Result<FksLookup> {
    if x >= table.universe {
        return Err(Error::Parameters(format!("{x} lies outside [{}]", table.universe)));
    }
    let bad = || Error::InvalidEncoding("corrupt rank table".into());
    let FksCell::Header { k, prime, buckets } = table.cells[0] else {
        return Err(bad());
    };
    let i = 1 + hash(k, prime, buckets, x) as usize;
    let Some(&FksCell::Bucket { offset, size, k }) = table.cells.get(i) else {
        return Err(bad());
    };
    if size == 0 {
        return Ok(FksLookup {
            answer: FksAnswer::Absent,
            probes: 2,
        });
    }
    let slot = (offset + hash(k, prime, size, x)) as usize;
    let answer = match table.cells.get(slot).ok_or_else(bad)? {
        FksCell::Entry { key, rank } if *key == x => FksAnswer::Member(*rank),
        FksCell::Entry { .. } | FksCell::Empty => FksAnswer::Absent,
        _ => return Err(bad()),
    };
    Ok(FksLookup { answer, probes: 3 })
}

/// What a table stores beyond hash parameters.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FksAudit {
    /// Every member appears exactly once with its true rank and nothing else
    /// is stored.
    pub passed: bool,
    pub cells: usize,
    pub entries: usize,
    /// Largest number of bits any cell needs.
    pub word_bits: usize,
}

impl FksRankTable {
    pub fn audit(&self, set: &[u64]) -> FksAudit {
        let mut keys = set.to_vec();
        keys.sort_unstable();
        let mut seen = vec![false; keys.len()];
        let mut passed = matches!(self.cells.first(), Some(FksCell::Header { .. }));
        let mut entries = 0;
        let mut largest = 0u64;
        for c in &self.cells {
            match *c {
                FksCell::Header { k, prime, buckets } => largest = largest.max(k).max(prime).max(buckets),
                FksCell::Bucket { offset, size, k } => largest = largest.max(offset).max(size).max(k),
                FksCell::Entry { key, rank } => {
                    entries += 1;
                    largest = largest.max(key).max(rank);
                    match keys.binary_search(&key) {
                        Ok(j) if rank == j as u64 + 1 && !seen[j] => seen[j] = true,
                        _ => passed = false,
                    }
                }
                FksCell::Empty => {}
            }
        }
        passed &= seen.iter().all(|&s| s);
        // three fields and a two-bit tag per cell
        let field = (u64::BITS - largest.leading_zeros()).max(1) as usize;
        FksAudit {
            passed,
            cells: self.cells.len(),
            entries,
            word_bits: 3 * field + 2,
        }
    }
}
