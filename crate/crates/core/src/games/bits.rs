//! Fixed-length bit strings read as unsigned integers.

use alloc::format;
use alloc::string::String;
use core::fmt;

use crate::error::{Error, Result};

/// At most 64 bits; the first character is the most significant bit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BitString {
    len: u32,
    value: u64,
}

fn mask(len: u32) -> u64 {
    if len >= 64 {
        u64::MAX
    } else {
        (1u64 << len) - 1
    }
}

impl BitString {
    pub fn new(value: u64, len: usize) -> Result<Self> {
        if len > 64 {
            return Err(Error::Parameters(format!("bit strings hold at most 64 bits, got {len}")));
        }
        let len = len as u32;
        if value & !mask(len) != 0 {
            return Err(Error::Parameters(format!("{value} does not fit in {len} bits")));
        }
        Ok(Self { len, value })
    }

    pub fn parse(s: &str) -> Result<Self> {
        let mut v = 0u64;
        for c in s.chars() {
            v = (v << 1)
                | match c {
                    '0' => 0,
                    '1' => 1,
                    _ => return Err(Error::Parameters(format!("not a bit string: {s:?}"))),
                };
        }
        Self::new(v, s.len())
    }

    pub fn zeros(len: usize) -> Result<Self> {
        Self::new(0, len)
    }

    pub fn ones(len: usize) -> Result<Self> {
        Self::new(mask(len.min(64) as u32), len)
    }

    pub fn empty() -> Self {
        Self { len: 0, value: 0 }
    }

    pub fn len(&self) -> usize {
        self.len as usize
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn value(&self) -> u64 {
        self.value
    }

    /// Bit `i`, counting from the most significant end.
    pub fn bit(&self, i: usize) -> bool {
        (self.value >> (self.len as usize - 1 - i)) & 1 == 1
    }

    /// `self·other`.
    pub fn concat(&self, other: &Self) -> Result<Self> {
        let len = self.len() + other.len();
        if len > 64 {
            return Err(Error::Parameters(format!("concatenation has {len} bits")));
        }
        let hi = if other.len == 64 { 0 } else { self.value << other.len };
        Ok(Self {
            len: len as u32,
            value: hi | other.value,
        })
    }

    pub fn concat_all(parts: &[Self]) -> Result<Self> {
        parts.iter().try_fold(Self::empty(), |acc, p| acc.concat(p))
    }

    /// Bits `[from, to)`.
    pub fn slice(&self, from: usize, to: usize) -> Result<Self> {
        if from > to || to > self.len() {
            return Err(Error::Parameters(format!("slice {from}..{to} of {} bits", self.len)));
        }
        let len = (to - from) as u32;
        Ok(Self {
            len,
            value: (self.value >> (self.len() - to)) & mask(len),
        })
    }

    pub fn require_len(&self, len: usize) -> Result<()> {
        if self.len() != len {
            return Err(Error::BitLength {
                expected: len,
                got: self.len(),
            });
        }
        Ok(())
    }
}

impl fmt::Display for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: String = (0..self.len()).map(|i| if self.bit(i) { '1' } else { '0' }).collect();
        f.write_str(&s)
    }
}
