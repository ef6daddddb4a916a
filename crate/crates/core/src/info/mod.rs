//! Entropies, mutual information, distances and the encoding inequalities.

pub mod distribution;
pub mod identities;

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::{check_distribution, to_f64, Ratio};
use crate::tensor::{hermitian_eig, trace_norm, DensityMatrix, Matrix, Register, RegisterLayout};
use crate::tensor::{Party, C64};

pub use distribution::JointDistribution;
pub use identities::{
    additivity, averaging, chain_identity, safe_bound, verify_information_identities,
    IdentityInput, IdentityMode, IdentityReport,
};

/// Eigenvalues in `[-CLAMP, 0)` are treated as zero.
pub const CLAMP: f64 = 1e-10;

fn xlogx(p: f64) -> f64 {
    if p <= 0.0 {
        0.0
    } else {
        -p * libm::log2(p)
    }
}

/// `−Σ p log₂ p` in bits.
pub fn shannon_entropy(p: &[f64]) -> Result<f64> {
    if p.is_empty() {
        return Err(Error::InvalidDistribution("empty".into()));
    }
    if let Some(x) = p.iter().find(|x| **x < -CLAMP || !x.is_finite()) {
        return Err(Error::InvalidDistribution(format!("negative probability {x}")));
    }
    let s: f64 = p.iter().sum();
    if (s - 1.0).abs() > 1e-9 {
        return Err(Error::InvalidDistribution(format!("sums to {s}")));
    }
    Ok(p.iter().map(|&x| xlogx(x)).sum())
}

pub fn shannon_entropy_exact(p: &[Ratio]) -> Result<f64> {
    check_distribution(p)?;
    Ok(p.iter().map(|x| xlogx(to_f64(x))).sum())
}

fn spectrum_entropy(values: &[f64]) -> Result<f64> {
    if let Some(v) = values.iter().find(|v| **v < -CLAMP) {
        return Err(Error::InvalidDensity(format!("eigenvalue {v:e} below zero")));
    }
    Ok(values.iter().map(|&v| xlogx(v)).sum())
}

/// `−Tr ρ log₂ ρ`.
pub fn von_neumann_entropy(rho: &DensityMatrix) -> Result<f64> {
    spectrum_entropy(&hermitian_eig(rho.matrix())?.values)
}

/// Entropy of the reduced state on `regs`.
pub fn entropy_of<S: AsRef<str>>(rho: &DensityMatrix, regs: &[S]) -> Result<f64> {
    if regs.is_empty() {
        return Ok(0.0);
    }
    von_neumann_entropy(&rho.partial_trace(regs)?)
}

/// `I(A:B) = S(A) + S(B) − S(AB)` for disjoint register sets.
pub fn mutual_information_between<S: AsRef<str>, T: AsRef<str>>(
    rho: &DensityMatrix,
    a: &[S],
    b: &[T],
) -> Result<f64> {
    if a.iter().any(|x| b.iter().any(|y| x.as_ref() == y.as_ref())) {
        return Err(Error::InvalidCut("register sets overlap".into()));
    }
    let mut ab: Vec<String> = a.iter().map(|s| String::from(s.as_ref())).collect();
    ab.extend(b.iter().map(|s| String::from(s.as_ref())));
    Ok(entropy_of(rho, a)? + entropy_of(rho, b)? - entropy_of(rho, &ab)?)
}

/// `I(A:B)` where `A` is `cut` and `B` is every other register.
pub fn mutual_information<S: AsRef<str>>(rho: &DensityMatrix, cut: &[S]) -> Result<f64> {
    let names = rho.layout().names();
    if cut.is_empty() || cut.len() >= names.len() {
        return Err(Error::InvalidCut("cut must be nonempty and proper".into()));
    }
    for c in cut {
        rho.layout().get(c.as_ref())?;
    }
    let rest = rho.layout().complement(cut);
    if rest.is_empty() {
        return Err(Error::InvalidCut("cut must be proper".into()));
    }
    mutual_information_between(rho, cut, &rest)
}

/// `Σ |p_i − q_i|`.
pub fn total_variation(p: &[f64], q: &[f64]) -> Result<f64> {
    if p.len() != q.len() {
        return Err(Error::Dimension(format!(
            "sample spaces of size {} and {}",
            p.len(),
            q.len()
        )));
    }
    Ok(p.iter().zip(q).map(|(a, b)| (a - b).abs()).sum())
}

pub fn total_variation_exact(p: &[Ratio], q: &[Ratio]) -> Result<Ratio> {
    if p.len() != q.len() {
        return Err(Error::Dimension(format!(
            "sample spaces of size {} and {}",
            p.len(),
            q.len()
        )));
    }
    Ok(p.iter()
        .zip(q)
        .fold(Ratio::zero(), |acc, (a, b)| acc + (a - b).abs()))
}

/// Codewords of an encoding `x ↦ σ_x`.
#[derive(Debug, Clone, PartialEq)]
pub enum Codewords {
    Classical(Vec<Vec<Ratio>>),
    Quantum(Vec<DensityMatrix>),
}

/// A random variable `X` with priors `p_x` and its encoding.
#[derive(Debug, Clone, PartialEq)]
pub struct Encoding {
    priors: Vec<Ratio>,
    codewords: Codewords,
}

impl Encoding {
    pub fn new(priors: Vec<Ratio>, codewords: Codewords) -> Result<Self> {
        check_distribution(&priors).map_err(|e| Error::InvalidEncoding(format!("{e}")))?;
        if priors.iter().any(|p| !p.is_positive()) {
            return Err(Error::InvalidEncoding("priors must be positive".into()));
        }
        match &codewords {
            Codewords::Classical(s) => {
                if s.len() != priors.len() {
                    return Err(Error::InvalidEncoding("one codeword per value".into()));
                }
                let k = s[0].len();
                for d in s {
                    if d.len() != k {
                        return Err(Error::InvalidEncoding("codeword spaces differ".into()));
                    }
                    check_distribution(d).map_err(|e| Error::InvalidEncoding(format!("{e}")))?;
                }
            }
            Codewords::Quantum(s) => {
                if s.len() != priors.len() {
                    return Err(Error::InvalidEncoding("one codeword per value".into()));
                }
                let names = s[0].layout().names();
                for d in s {
                    if d.layout().names() != names || d.dim() != s[0].dim() {
                        return Err(Error::InvalidEncoding("codeword layouts differ".into()));
                    }
                    d.validate()?;
                }
            }
        }
        Ok(Self { priors, codewords })
    }

    pub fn priors(&self) -> &[Ratio] {
        &self.priors
    }

    pub fn codewords(&self) -> &Codewords {
        &self.codewords
    }

    pub fn len(&self) -> usize {
        self.priors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.priors.is_empty()
    }

    pub fn is_classical(&self) -> bool {
        matches!(self.codewords, Codewords::Classical(_))
    }

    pub fn average_classical(&self) -> Option<Vec<Ratio>> {
        match &self.codewords {
            Codewords::Classical(s) => {
                let mut avg = alloc::vec![Ratio::zero(); s[0].len()];
                for (p, d) in self.priors.iter().zip(s) {
                    for (a, q) in avg.iter_mut().zip(d) {
                        *a += p * q;
                    }
                }
                Some(avg)
            }
            Codewords::Quantum(_) => None,
        }
    }

    pub fn average_quantum(&self) -> Result<Option<DensityMatrix>> {
        match &self.codewords {
            Codewords::Quantum(s) => {
                let w: Vec<f64> = self.priors.iter().map(to_f64).collect();
                Ok(Some(DensityMatrix::mixture(&w, s)?))
            }
            Codewords::Classical(_) => Ok(None),
        }
    }

    /// `Σ_x p_x |x⟩⟨x| ⊗ σ_x` on registers `X` and the codeword registers
    /// (a single register `M` for classical codewords).
    pub fn joint_state(&self) -> Result<DensityMatrix> {
        let xq = qubits_for(self.priors.len());
        let (blocks, msg_layout): (Vec<Matrix>, RegisterLayout) = match &self.codewords {
            Codewords::Classical(s) => {
                let mq = qubits_for(s[0].len());
                let blocks = s
                    .iter()
                    .map(|d| {
                        let mut v: Vec<f64> = d.iter().map(to_f64).collect();
                        v.resize(1 << mq, 0.0);
                        Matrix::diag(&v)
                    })
                    .collect();
                (blocks, RegisterLayout::new(alloc::vec![Register::new("M", mq, Party::Bob)])?)
            }
            Codewords::Quantum(s) => (
                s.iter().map(|d| d.matrix().clone()).collect(),
                s[0].layout().clone(),
            ),
        };
        let xl = RegisterLayout::new(alloc::vec![Register::new("X", xq, Party::Alice)])?;
        let layout = xl.concat(&msg_layout)?;
        layout.check_capacity()?;
        let dm = blocks[0].rows();
        let mut m = Matrix::zeros(dm << xq, dm << xq);
        for (x, (p, b)) in self.priors.iter().zip(&blocks).enumerate() {
            let p = to_f64(p);
            for i in 0..dm {
                for j in 0..dm {
                    m[(x * dm + i, x * dm + j)] = b[(i, j)] * p;
                }
            }
        }
        DensityMatrix::new(m, layout)
    }
}

/// Qubits needed to index `n` values.
pub fn qubits_for(n: usize) -> usize {
    let mut q = 0;
    while (1usize << q) < n {
        q += 1;
    }
    q
}

/// `S(σ) − Σ p_x S(σ_x)` (or the Shannon analogue).
pub fn encoding_mutual_information(e: &Encoding) -> Result<f64> {
    match &e.codewords {
        Codewords::Classical(s) => {
            let avg = e.average_classical().unwrap_or_default();
            let mut i = shannon_entropy_exact(&avg)?;
            for (p, d) in e.priors.iter().zip(s) {
                i -= to_f64(p) * shannon_entropy_exact(d)?;
            }
            Ok(i)
        }
        Codewords::Quantum(s) => {
            let avg = e
                .average_quantum()?
                .ok_or_else(|| Error::InvalidEncoding("no codewords".into()))?;
            let mut i = von_neumann_entropy(&avg)?;
            for (p, d) in e.priors.iter().zip(s) {
                i -= to_f64(p) * von_neumann_entropy(d)?;
            }
            Ok(i)
        }
    }
}

/// Two sides of an inequality `lhs ≤ rhs`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Gap {
    pub lhs: f64,
    pub rhs: f64,
    pub slack: f64,
}

impl Gap {
    pub fn new(lhs: f64, rhs: f64) -> Self {
        Self {
            lhs,
            rhs,
            slack: rhs - lhs,
        }
    }
}

/// `Σ_x p_x ‖σ_x − σ‖ ≤ √(2 ln 2 · I(X:M))`.
pub fn average_encoding_gap(e: &Encoding) -> Result<Gap> {
    let info = encoding_mutual_information(e)?.max(0.0);
    let lhs = match &e.codewords {
        Codewords::Classical(s) => {
            let avg = e.average_classical().unwrap_or_default();
            let mut acc = Ratio::zero();
            for (p, d) in e.priors.iter().zip(s) {
                acc += p * total_variation_exact(d, &avg)?;
            }
            to_f64(&acc)
        }
        Codewords::Quantum(s) => {
            let avg = e
                .average_quantum()?
                .ok_or_else(|| Error::InvalidEncoding("no codewords".into()))?;
            let mut acc = 0.0;
            for (p, d) in e.priors.iter().zip(s) {
                acc += to_f64(p) * d.trace_distance(&avg)?;
            }
            acc
        }
    };
    let rhs = libm::sqrt(2.0 * core::f64::consts::LN_2 * info);
    Ok(Gap::new(lhs, rhs))
}

/// Outcome-distribution distance versus trace distance for a POVM.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeasurementCheck {
    pub l1: f64,
    pub trace_distance: f64,
}

pub fn measurement_distance_check(
    rho1: &DensityMatrix,
    rho2: &DensityMatrix,
    povm: &[Matrix],
) -> Result<MeasurementCheck> {
    let d = rho1.dim();
    if rho2.dim() != d {
        return Err(Error::Dimension("states of different dimension".into()));
    }
    if povm.is_empty() {
        return Err(Error::InvalidPovm("no elements".into()));
    }
    let mut total = Matrix::zeros(d, d);
    for (k, e) in povm.iter().enumerate() {
        if e.rows() != d || e.cols() != d {
            return Err(Error::InvalidPovm(format!("element {k} has wrong size")));
        }
        let ev = hermitian_eig(e).map_err(|_| Error::InvalidPovm(format!("element {k} not Hermitian")))?;
        if let Some(min) = ev.values.last() {
            if *min < -1e-9 {
                return Err(Error::InvalidPovm(format!("element {k} has eigenvalue {min:e}")));
            }
        }
        total = total.add(e)?;
    }
    let dev = total.max_abs_diff(&Matrix::identity(d));
    if dev > 1e-8 {
        return Err(Error::InvalidPovm(format!("elements sum to identity only within {dev:e}")));
    }
    let outcome = |rho: &DensityMatrix| -> Result<Vec<f64>> {
        povm.iter()
            .map(|e| Ok(e.mul(rho.matrix())?.trace().re))
            .collect()
    };
    let l1 = total_variation(&outcome(rho1)?, &outcome(rho2)?)?;
    let tn = trace_norm(&rho1.matrix().sub(rho2.matrix())?)?;
    Ok(MeasurementCheck {
        l1,
        trace_distance: tn,
    })
}

/// Projectors onto the eigenvectors of `a`, a complete projective measurement.
pub fn eigenbasis_povm(a: &Matrix) -> Result<Vec<Matrix>> {
    let e = hermitian_eig(a)?;
    Ok((0..a.rows())
        .map(|k| {
            let v: Vec<C64> = e.vectors.column(k);
            Matrix::outer(&v, &v)
        })
        .collect())
}
