use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::{render, sum, Ratio};

/// Finite distribution on `E × F` with exact positive weights.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JointDistribution {
    e: usize,
    f: usize,
    points: Vec<(usize, usize, Ratio)>,
}

impl JointDistribution {
    /// Points are sorted; zero weights are rejected.
    pub fn new(e: usize, f: usize, mut points: Vec<(usize, usize, Ratio)>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::InvalidDistribution("empty support".into()));
        }
        points.sort_by(|a, b| (a.0, a.1).cmp(&(b.0, b.1)));
        for w in points.windows(2) {
            if (w[0].0, w[0].1) == (w[1].0, w[1].1) {
                return Err(Error::InvalidDistribution(format!(
                    "point ({}, {}) listed twice",
                    w[0].0, w[0].1
                )));
            }
        }
        for (x, y, p) in &points {
            if *x >= e || *y >= f {
                return Err(Error::InvalidDistribution(format!(
                    "point ({x}, {y}) outside {e}x{f}"
                )));
            }
            if !p.is_positive() {
                return Err(Error::InvalidDistribution(format!(
                    "non-positive weight {} at ({x}, {y})",
                    render(p)
                )));
            }
        }
        let s = sum(points.iter().map(|p| &p.2));
        if !s.is_one() {
            return Err(Error::InvalidDistribution(format!("sums to {}", render(&s))));
        }
        Ok(Self { e, f, points })
    }

    /// Row-major table over `E × F`; zero entries are dropped.
    pub fn from_table(e: usize, f: usize, table: &[Ratio]) -> Result<Self> {
        if table.len() != e * f {
            return Err(Error::Dimension(format!("{} weights for {e}x{f}", table.len())));
        }
        let points = table
            .iter()
            .enumerate()
            .filter(|(_, p)| !p.is_zero())
            .map(|(i, p)| (i / f, i % f, p.clone()))
            .collect();
        Self::new(e, f, points)
    }

    pub fn uniform(e: usize, f: usize) -> Result<Self> {
        let w = Ratio::new(1.into(), ((e * f) as i64).into());
        Self::from_table(e, f, &vec![w; e * f])
    }

    pub fn product(px: &[Ratio], qy: &[Ratio]) -> Result<Self> {
        let mut t = Vec::with_capacity(px.len() * qy.len());
        for a in px {
            for b in qy {
                t.push(a * b);
            }
        }
        Self::from_table(px.len(), qy.len(), &t)
    }

    pub fn alice_size(&self) -> usize {
        self.e
    }

    pub fn bob_size(&self) -> usize {
        self.f
    }

    pub fn support(&self) -> &[(usize, usize, Ratio)] {
        &self.points
    }

    pub fn prob(&self, x: usize, y: usize) -> Ratio {
        self.points
            .binary_search_by(|p| (p.0, p.1).cmp(&(x, y)))
            .map(|i| self.points[i].2.clone())
            .unwrap_or_else(|_| Ratio::zero())
    }

    pub fn marginal_x(&self) -> Vec<Ratio> {
        let mut m = vec![Ratio::zero(); self.e];
        for (x, _, p) in &self.points {
            m[*x] += p;
        }
        m
    }

    pub fn marginal_y(&self) -> Vec<Ratio> {
        let mut m = vec![Ratio::zero(); self.f];
        for (_, y, p) in &self.points {
            m[*y] += p;
        }
        m
    }

    /// Full row-major table including zeros.
    pub fn table(&self) -> Vec<Ratio> {
        let mut t = vec![Ratio::zero(); self.e * self.f];
        for (x, y, p) in &self.points {
            t[x * self.f + y] = p.clone();
        }
        t
    }

    /// `E_D[g(x, y)]`.
    pub fn expectation(&self, mut g: impl FnMut(usize, usize) -> Ratio) -> Ratio {
        self.points
            .iter()
            .fold(Ratio::zero(), |acc, (x, y, p)| acc + p * g(*x, *y))
    }

    pub fn expectation_f64(&self, mut g: impl FnMut(usize, usize) -> f64) -> f64 {
        self.points
            .iter()
            .map(|(x, y, p)| crate::rational::to_f64(p) * g(*x, *y))
            .sum()
    }
}
