use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::tensor::Party;

/// `[t, c, l₁, …, l_t]^P`: rounds, safe overhead, message lengths and starter.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Signature {
    pub rounds: usize,
    pub overhead: usize,
    pub lengths: Vec<usize>,
    pub starter: Party,
}

impl Signature {
    pub fn new(overhead: usize, lengths: Vec<usize>, starter: Party) -> Self {
        Self {
            rounds: lengths.len(),
            overhead,
            lengths,
            starter,
        }
    }

    /// Shape after removing the first message: `[t−1, c+l₁, l₂, …]` with the other starter.
    pub fn reduced(&self) -> Option<Self> {
        let (l1, rest) = self.lengths.split_first()?;
        Some(Self::new(self.overhead + l1, rest.to_vec(), self.starter.other()))
    }

    pub fn append_round(&self, l: usize) -> Self {
        let mut lengths = self.lengths.clone();
        lengths.push(l);
        Self::new(self.overhead, lengths, self.starter)
    }

    pub fn render(&self) -> String {
        alloc::format!("{self}")
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{},{}", self.rounds, self.overhead)?;
        for l in &self.lengths {
            write!(f, ",{l}")?;
        }
        write!(f, "]^{}", self.starter)
    }
}
