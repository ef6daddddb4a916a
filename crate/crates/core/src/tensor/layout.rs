use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};

/// Largest register layout the simulator accepts.
pub const MAX_QUBITS: usize = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Party {
    Alice,
    Bob,
}

impl Party {
    pub fn other(self) -> Self {
        match self {
            Party::Alice => Party::Bob,
            Party::Bob => Party::Alice,
        }
    }

    pub fn letter(self) -> char {
        match self {
            Party::Alice => 'A',
            Party::Bob => 'B',
        }
    }
}

impl fmt::Display for Party {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.letter())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Register {
    pub name: String,
    pub qubits: usize,
    pub owner: Party,
}

impl Register {
    pub fn new(name: impl Into<String>, qubits: usize, owner: Party) -> Self {
        Self {
            name: name.into(),
            qubits,
            owner,
        }
    }
}

/// Ordered named registers; the first register holds the most significant qubits.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct RegisterLayout {
    registers: Vec<Register>,
}

impl RegisterLayout {
    pub fn new(registers: Vec<Register>) -> Result<Self> {
        for (i, r) in registers.iter().enumerate() {
            if registers[..i].iter().any(|s| s.name == r.name) {
                return Err(Error::DuplicateRegister(r.name.clone()));
            }
        }
        Ok(Self { registers })
    }

    /// Single-owner layout from `(name, qubits)` pairs.
    pub fn simple(owner: Party, regs: &[(&str, usize)]) -> Result<Self> {
        Self::new(
            regs.iter()
                .map(|(n, q)| Register::new(*n, *q, owner))
                .collect(),
        )
    }

    pub fn registers(&self) -> &[Register] {
        &self.registers
    }

    pub fn names(&self) -> Vec<String> {
        self.registers.iter().map(|r| r.name.clone()).collect()
    }

    pub fn total_qubits(&self) -> usize {
        self.registers.iter().map(|r| r.qubits).sum()
    }

    pub fn dim(&self) -> usize {
        1usize << self.total_qubits()
    }

    pub fn check_capacity(&self) -> Result<()> {
        let n = self.total_qubits();
        if n > MAX_QUBITS {
            return Err(Error::Capacity {
                what: "qubits",
                needed: n,
                limit: MAX_QUBITS,
            });
        }
        Ok(())
    }

    pub fn get(&self, name: &str) -> Result<&Register> {
        self.registers
            .iter()
            .find(|r| r.name == name)
            .ok_or_else(|| Error::UnknownRegister(name.to_string()))
    }

    pub fn contains(&self, name: &str) -> bool {
        self.registers.iter().any(|r| r.name == name)
    }

    pub fn index_of(&self, name: &str) -> Result<usize> {
        self.registers
            .iter()
            .position(|r| r.name == name)
            .ok_or_else(|| Error::UnknownRegister(name.to_string()))
    }

    /// Qubit offset of a register (0 = most significant).
    pub fn offset(&self, name: &str) -> Result<usize> {
        let i = self.index_of(name)?;
        Ok(self.registers[..i].iter().map(|r| r.qubits).sum())
    }

    /// Qubit positions of the named registers, in the order given.
    pub fn positions<S: AsRef<str>>(&self, names: &[S]) -> Result<Vec<usize>> {
        let mut out = Vec::new();
        for (i, n) in names.iter().enumerate() {
            let n = n.as_ref();
            if names[..i].iter().any(|m| m.as_ref() == n) {
                return Err(Error::DuplicateRegister(n.to_string()));
            }
            let off = self.offset(n)?;
            let q = self.get(n)?.qubits;
            out.extend(off..off + q);
        }
        Ok(out)
    }

    pub fn qubits_of<S: AsRef<str>>(&self, names: &[S]) -> Result<usize> {
        names
            .iter()
            .map(|n| self.get(n.as_ref()).map(|r| r.qubits))
            .sum()
    }

    pub fn concat(&self, other: &Self) -> Result<Self> {
        let mut regs = self.registers.clone();
        regs.extend(other.registers.iter().cloned());
        Self::new(regs)
    }

    /// Sub-layout of the named registers, kept in layout order.
    pub fn select<S: AsRef<str>>(&self, names: &[S]) -> Result<Self> {
        for n in names {
            self.get(n.as_ref())?;
        }
        Ok(Self {
            registers: self
                .registers
                .iter()
                .filter(|r| names.iter().any(|n| n.as_ref() == r.name))
                .cloned()
                .collect(),
        })
    }

    /// Sub-layout of the named registers, in the order given.
    pub fn reorder<S: AsRef<str>>(&self, names: &[S]) -> Result<Self> {
        let regs = names
            .iter()
            .map(|n| self.get(n.as_ref()).cloned())
            .collect::<Result<Vec<_>>>()?;
        Self::new(regs)
    }

    /// Names not in `names`, in layout order.
    pub fn complement<S: AsRef<str>>(&self, names: &[S]) -> Vec<String> {
        self.registers
            .iter()
            .filter(|r| !names.iter().any(|n| n.as_ref() == r.name))
            .map(|r| r.name.clone())
            .collect()
    }

    pub fn with_owner(&self, name: &str, owner: Party) -> Result<Self> {
        let i = self.index_of(name)?;
        let mut out = self.clone();
        out.registers[i].owner = owner;
        Ok(out)
    }

    pub fn owned_by(&self, party: Party) -> Vec<String> {
        self.registers
            .iter()
            .filter(|r| r.owner == party)
            .map(|r| r.name.clone())
            .collect()
    }
}

/// Places the bits of `value` (most significant first) at qubit `positions`
/// of an `n`-qubit basis index.
pub(crate) fn deposit(value: usize, positions: &[usize], n: usize) -> usize {
    let k = positions.len();
    let mut out = 0;
    for (b, &p) in positions.iter().enumerate() {
        if (value >> (k - 1 - b)) & 1 == 1 {
            out |= 1 << (n - 1 - p);
        }
    }
    out
}

/// Inverse of [`deposit`].
pub(crate) fn extract(index: usize, positions: &[usize], n: usize) -> usize {
    let mut out = 0;
    for &p in positions {
        out = (out << 1) | ((index >> (n - 1 - p)) & 1);
    }
    out
}

/// Basis-index tables splitting an `n`-qubit space into `targets` and the rest.
pub(crate) struct Split {
    pub targets: Vec<usize>,
    pub rest: Vec<usize>,
}

impl Split {
    pub fn new(target_positions: &[usize], n: usize) -> Self {
        let rest_positions: Vec<usize> = (0..n).filter(|p| !target_positions.contains(p)).collect();
        let targets = (0..1usize << target_positions.len())
            .map(|t| deposit(t, target_positions, n))
            .collect();
        let rest = (0..1usize << rest_positions.len())
            .map(|r| deposit(r, &rest_positions, n))
            .collect();
        Self { targets, rest }
    }

    #[inline]
    pub fn index(&self, t: usize, r: usize) -> usize {
        self.targets[t] | self.rest[r]
    }
}
