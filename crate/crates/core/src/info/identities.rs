//! Checks of the chain rule, the safe-message bound, additivity over
//! independent inputs and the averaging identity.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use super::{entropy_of, mutual_information_between};
use crate::error::{Error, Result};
use crate::tensor::{DensityMatrix, Matrix};

/// Tolerance for the equalities.
pub const IDENTITY_TOL: f64 = 1e-7;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IdentityMode {
    Chain,
    SafeBound,
    Additivity,
    Averaging,
}

#[derive(Debug, Clone, PartialEq)]
pub struct IdentityReport {
    pub mode: IdentityMode,
    pub lhs: f64,
    pub rhs: f64,
    /// `|lhs − rhs|` for equalities, `rhs − lhs` for inequalities.
    pub residual: f64,
    pub holds: bool,
    /// Classical refinement `I(X:M) ≤ a`, as `(lhs, rhs)`, when the state is diagonal.
    pub refined: Option<(f64, f64)>,
}

impl IdentityReport {
    fn equality(mode: IdentityMode, lhs: f64, rhs: f64) -> Self {
        let residual = (lhs - rhs).abs();
        Self {
            mode,
            lhs,
            rhs,
            residual,
            holds: residual <= IDENTITY_TOL,
            refined: None,
        }
    }
}

#[derive(Debug, Clone)]
pub enum IdentityInput {
    Chain {
        rho: DensityMatrix,
        a: Vec<String>,
        b: Vec<String>,
        c: Vec<String>,
    },
    SafeBound {
        rho: DensityMatrix,
        x: Vec<String>,
        m1: Vec<String>,
        m2: Vec<String>,
    },
    Additivity {
        rho: DensityMatrix,
        xs: Vec<String>,
        m: Vec<String>,
    },
    Averaging {
        rho: DensityMatrix,
        x: Vec<String>,
        y: Vec<String>,
        m: Vec<String>,
    },
}

pub fn verify_information_identities(input: &IdentityInput) -> Result<IdentityReport> {
    match input {
        IdentityInput::Chain { rho, a, b, c } => chain_identity(rho, a, b, c),
        IdentityInput::SafeBound { rho, x, m1, m2 } => safe_bound(rho, x, m1, m2),
        IdentityInput::Additivity { rho, xs, m } => additivity(rho, xs, m),
        IdentityInput::Averaging { rho, x, y, m } => averaging(rho, x, y, m),
    }
}

fn join<S: AsRef<str>>(parts: &[&[S]]) -> Vec<String> {
    parts
        .iter()
        .flat_map(|p| p.iter().map(|s| String::from(s.as_ref())))
        .collect()
}

/// `I(A:BC) = I(A:B) + I(AB:C) − I(B:C)`.
pub fn chain_identity<S: AsRef<str>>(
    rho: &DensityMatrix,
    a: &[S],
    b: &[S],
    c: &[S],
) -> Result<IdentityReport> {
    let bc = join(&[b, c]);
    let ab = join(&[a, b]);
    let lhs = mutual_information_between(rho, a, &bc)?;
    let rhs = mutual_information_between(rho, a, b)? + mutual_information_between(rho, &ab, c)?
        - mutual_information_between(rho, b, c)?;
    Ok(IdentityReport::equality(IdentityMode::Chain, lhs, rhs))
}

/// Conditional states of the other registers given each value of the
/// classical register set `x`, with their probabilities. Fails when `ρ` is
/// not block diagonal in `x`.
pub fn condition_on<S: AsRef<str>>(
    rho: &DensityMatrix,
    x: &[S],
) -> Result<Vec<(f64, Option<DensityMatrix>)>> {
    let layout = rho.layout();
    let xs: Vec<String> = x.iter().map(|s| String::from(s.as_ref())).collect();
    let rest = layout.complement(&xs);
    let mut order = xs.clone();
    order.extend(rest.iter().cloned());
    let xq = layout.qubits_of(&xs)?;
    let rq = layout.qubits_of(&rest)?;
    let pos = layout.positions(&order)?;
    let n = layout.total_qubits();
    let dr = 1usize << rq;
    // index in reordered basis -> index in original basis
    let map: Vec<usize> = (0..1usize << n)
        .map(|j| crate::tensor::layout::deposit(j, &pos, n))
        .collect();
    let m = rho.matrix();
    let mut out = Vec::new();
    for v in 0..1usize << xq {
        for w in 0..1usize << xq {
            if v == w {
                continue;
            }
            for i in 0..dr {
                for j in 0..dr {
                    let z = m[(map[v * dr + i], map[w * dr + j])];
                    if z.norm() > 1e-9 {
                        return Err(Error::Precondition(format!(
                            "registers {xs:?} are not classical"
                        )));
                    }
                }
            }
        }
        let mut block = Matrix::zeros(dr, dr);
        for i in 0..dr {
            for j in 0..dr {
                block[(i, j)] = m[(map[v * dr + i], map[v * dr + j])];
            }
        }
        let p = block.trace().re;
        if p > 1e-12 {
            let sub = layout.select(&rest)?;
            // `rest` is in layout order already, so the block matches `sub`.
            out.push((p, Some(DensityMatrix::new(block.scale_real(1.0 / p).hermitian_part(), sub)?)));
        } else {
            out.push((0.0, None));
        }
    }
    Ok(out)
}

fn is_diagonal(m: &Matrix) -> bool {
    for i in 0..m.rows() {
        for j in 0..m.cols() {
            if i != j && m[(i, j)].norm() > 1e-9 {
                return false;
            }
        }
    }
    true
}

/// `I(X : M₁M₂) ≤ 2a` when `M₂`'s state does not depend on `X`, `a` being the
/// qubit count of `M₁` (and `≤ a` for classical states).
pub fn safe_bound<S: AsRef<str>>(
    rho: &DensityMatrix,
    x: &[S],
    m1: &[S],
    m2: &[S],
) -> Result<IdentityReport> {
    let cond = condition_on(rho, x)?;
    let mut first: Option<DensityMatrix> = None;
    for (_, st) in &cond {
        if let Some(st) = st {
            let red = st.partial_trace(m2)?;
            match &first {
                None => first = Some(red),
                Some(f) => {
                    let dev = f.trace_distance(&red)?;
                    if dev > 1e-8 {
                        return Err(Error::Precondition(format!(
                            "second message depends on the input (deviation {dev:e})"
                        )));
                    }
                }
            }
        }
    }
    let m = join(&[m1, m2]);
    let lhs = mutual_information_between(rho, x, &m)?;
    let a = rho.layout().qubits_of(m1)? as f64;
    let rhs = 2.0 * a;
    let refined = if is_diagonal(rho.matrix()) {
        Some((lhs, a))
    } else {
        None
    };
    let slack = rhs - lhs;
    let holds = slack >= -IDENTITY_TOL && refined.is_none_or(|(l, r)| r - l >= -IDENTITY_TOL);
    Ok(IdentityReport {
        mode: IdentityMode::SafeBound,
        lhs,
        rhs,
        residual: slack,
        holds,
        refined,
    })
}

/// `I(X₁…Xₙ : M) = Σᵢ I(Xᵢ : M X₁…Xᵢ₋₁)` for independent `Xᵢ`.
pub fn additivity<S: AsRef<str>>(rho: &DensityMatrix, xs: &[S], m: &[S]) -> Result<IdentityReport> {
    // Independence: the joint state of the X registers is the product of its marginals.
    let joint = rho.partial_trace(xs)?;
    let mut prod: Option<DensityMatrix> = None;
    for r in joint.layout().names() {
        let marg = joint.partial_trace(&[r.as_str()])?;
        prod = Some(match prod {
            None => marg,
            Some(p) => p.tensor(&marg)?,
        });
    }
    if let Some(p) = prod {
        let dev = p.matrix().max_abs_diff(joint.matrix());
        if dev > 1e-9 {
            return Err(Error::Precondition(format!(
                "input registers are not independent (deviation {dev:e})"
            )));
        }
    }
    let lhs = mutual_information_between(rho, xs, m)?;
    let mut rhs = 0.0;
    for i in 0..xs.len() {
        let mut cond: Vec<String> = m.iter().map(|s| String::from(s.as_ref())).collect();
        cond.extend(xs[..i].iter().map(|s| String::from(s.as_ref())));
        rhs += mutual_information_between(rho, &xs[i..=i], &cond)?;
    }
    Ok(IdentityReport::equality(IdentityMode::Additivity, lhs, rhs))
}

/// `I(Y : MX) = I(X:Y) + E_x I(Y:M | X = x)` for classical `X`.
pub fn averaging<S: AsRef<str>>(
    rho: &DensityMatrix,
    x: &[S],
    y: &[S],
    m: &[S],
) -> Result<IdentityReport> {
    let mx = join(&[m, x]);
    let lhs = mutual_information_between(rho, y, &mx)?;
    let mut rhs = mutual_information_between(rho, x, y)?;
    for (p, st) in condition_on(rho, x)? {
        if let Some(st) = st {
            rhs += p * (entropy_of(&st, y)? + entropy_of(&st, m)? - entropy_of(&st, &join(&[y, m]))?);
        }
    }
    Ok(IdentityReport::equality(IdentityMode::Averaging, lhs, rhs))
}
