use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::error::{Error, Result};

/// A function `f: E × F → G` on index sets, with an optional promise.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GameSpec {
    pub name: String,
    pub alice_inputs: usize,
    pub bob_inputs: usize,
    pub answers: usize,
    /// Row-major `f(x, y)`.
    pub table: Vec<u32>,
    /// Pairs outside the promise are ignored by worst-case evaluation.
    pub promise: Option<Vec<bool>>,
}

impl GameSpec {
    pub fn new(
        name: impl Into<String>,
        alice_inputs: usize,
        bob_inputs: usize,
        answers: usize,
        table: Vec<u32>,
    ) -> Result<Self> {
        let g = Self {
            name: name.into(),
            alice_inputs,
            bob_inputs,
            answers,
            table,
            promise: None,
        };
        g.validate()?;
        Ok(g)
    }

    pub fn from_fn(
        name: impl Into<String>,
        alice_inputs: usize,
        bob_inputs: usize,
        answers: usize,
        f: impl Fn(usize, usize) -> u32,
    ) -> Result<Self> {
        let mut table = Vec::with_capacity(alice_inputs * bob_inputs);
        for x in 0..alice_inputs {
            for y in 0..bob_inputs {
                table.push(f(x, y));
            }
        }
        Self::new(name, alice_inputs, bob_inputs, answers, table)
    }

    pub fn with_promise(mut self, promise: Vec<bool>) -> Result<Self> {
        self.promise = Some(promise);
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        if self.alice_inputs == 0 || self.bob_inputs == 0 || self.answers == 0 {
            return Err(Error::InvalidGame("empty input or answer set".into()));
        }
        if self.table.len() != self.alice_inputs * self.bob_inputs {
            return Err(Error::InvalidGame(format!(
                "truth table has {} entries for {}x{}",
                self.table.len(),
                self.alice_inputs,
                self.bob_inputs
            )));
        }
        if let Some(v) = self.table.iter().find(|v| **v as usize >= self.answers) {
            return Err(Error::InvalidGame(format!("answer {v} outside G")));
        }
        if let Some(p) = &self.promise {
            if p.len() != self.table.len() {
                return Err(Error::InvalidGame("promise mask has wrong size".into()));
            }
            if !p.iter().any(|b| *b) {
                return Err(Error::InvalidGame("empty promise".into()));
            }
        }
        Ok(())
    }

    pub fn eval(&self, x: usize, y: usize) -> u32 {
        self.table[x * self.bob_inputs + y]
    }

    pub fn promised(&self, x: usize, y: usize) -> bool {
        self.promise
            .as_ref()
            .is_none_or(|p| p[x * self.bob_inputs + y])
    }

    /// Equality on `bits`-bit strings.
    pub fn equality(bits: usize) -> Self {
        let n = 1usize << bits;
        Self::from_fn(format!("EQ{bits}"), n, n, 2, |x, y| u32::from(x == y))
            .expect("equality table is valid")
    }

    /// `x > y` on `bits`-bit integers.
    pub fn greater_than(bits: usize) -> Self {
        let n = 1usize << bits;
        Self::from_fn(format!("GT{bits}"), n, n, 2, |x, y| u32::from(x > y))
            .expect("greater-than table is valid")
    }

    /// The direct-sum game `g⁽ⁿ⁾`.
    pub fn direct_sum(&self, n: usize) -> Result<Self> {
        let enc = SumEncoding::new(self.alice_inputs, self.bob_inputs, n)?;
        let mut table = Vec::with_capacity(enc.alice_inputs() * enc.bob_inputs());
        let mut promise = Vec::with_capacity(table.capacity());
        for a in 0..enc.alice_inputs() {
            let xs = enc.digits(a);
            for b in 0..enc.bob_inputs() {
                let (i, y, prefix) = enc.split_bob(b);
                let consistent = enc.prefix_of(a, i) == prefix;
                table.push(self.eval(xs[i], y));
                promise.push(consistent && self.promised(xs[i], y));
            }
        }
        let g = Self {
            name: format!("{}^({n})", self.name),
            alice_inputs: enc.alice_inputs(),
            bob_inputs: enc.bob_inputs(),
            answers: self.answers,
            table,
            promise: Some(promise),
        };
        g.validate()?;
        Ok(g)
    }
}

/// Index encoding of `g⁽ⁿ⁾` inputs. Alice holds `x₁…xₙ` as base-`|E|` digits
/// with `x₁` most significant; Bob holds `((i·|F| + y)·|E|ⁿ⁻¹ + p)` where `p`
/// encodes `x₁…xᵢ₋₁` left-aligned in `n − 1` digits.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SumEncoding {
    pub e: usize,
    pub f: usize,
    pub n: usize,
}

impl SumEncoding {
    pub fn new(e: usize, f: usize, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::Parameters("direct sum of zero copies".into()));
        }
        let limit = 1usize << 20;
        if e.checked_pow(n as u32).is_none_or(|v| v > limit) {
            return Err(Error::Capacity {
                what: "direct-sum inputs",
                needed: e.saturating_pow(n as u32),
                limit,
            });
        }
        Ok(Self { e, f, n })
    }

    pub fn alice_inputs(&self) -> usize {
        self.e.pow(self.n as u32)
    }

    pub fn bob_inputs(&self) -> usize {
        self.n * self.f * self.e.pow(self.n as u32 - 1)
    }

    pub fn digits(&self, a: usize) -> Vec<usize> {
        let mut d = alloc::vec![0; self.n];
        let mut v = a;
        for j in (0..self.n).rev() {
            d[j] = v % self.e;
            v /= self.e;
        }
        d
    }

    pub fn join(&self, digits: &[usize]) -> usize {
        digits.iter().fold(0, |acc, d| acc * self.e + d)
    }

    /// Prefix code of `x₁…xᵢ₋₁` for a 0-based `i`.
    pub fn prefix_of(&self, a: usize, i: usize) -> usize {
        let d = self.digits(a);
        self.prefix_code(&d[..i])
    }

    pub fn prefix_code(&self, prefix: &[usize]) -> usize {
        let mut v = 0;
        for j in 0..self.n - 1 {
            v = v * self.e + prefix.get(j).copied().unwrap_or(0);
        }
        v
    }

    pub fn bob(&self, i: usize, y: usize, prefix: &[usize]) -> usize {
        (i * self.f + y) * self.e.pow(self.n as u32 - 1) + self.prefix_code(prefix)
    }

    /// `(i, y, prefix code)` with 0-based `i`.
    pub fn split_bob(&self, b: usize) -> (usize, usize, usize) {
        let span = self.e.pow(self.n as u32 - 1);
        let p = b % span;
        let iy = b / span;
        (iy / self.f, iy % self.f, p)
    }

    /// Digits `x₁…xᵢ₋₁` of a prefix code.
    pub fn prefix_digits(&self, code: usize, i: usize) -> Vec<usize> {
        let mut d = alloc::vec![0; self.n - 1];
        let mut v = code;
        for j in (0..self.n - 1).rev() {
            d[j] = v % self.e;
            v /= self.e;
        }
        d.truncate(i);
        d
    }
}
