//! Hermitian eigendecomposition by cyclic complex Jacobi rotations.

use alloc::vec::Vec;

use super::matrix::{c64, Matrix, C64};
use crate::error::{Error, Result};

/// Entrywise tolerance for accepting an input as Hermitian.
pub const HERMITIAN_TOL: f64 = 1e-9;

const MAX_SWEEPS: usize = 100;

#[derive(Debug, Clone)]
pub struct Eigen {
    /// Eigenvalues in descending order.
    pub values: Vec<f64>,
    /// Column `k` is the eigenvector for `values[k]`.
    pub vectors: Matrix,
}

pub fn hermitian_eig(m: &Matrix) -> Result<Eigen> {
    let n = m.require_square()?;
    let dev = m.hermitian_deviation();
    if dev > HERMITIAN_TOL {
        return Err(Error::NotHermitian(dev));
    }
    let mut a = m.hermitian_part();
    let mut v = Matrix::identity(n);
    let scale = a.frobenius_norm().max(f64::MIN_POSITIVE);

    for _ in 0..MAX_SWEEPS {
        let mut off = 0.0;
        for p in 0..n {
            for q in p + 1..n {
                off += a[(p, q)].norm_sqr();
            }
        }
        if libm::sqrt(off) <= 1e-15 * scale {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                rotate(&mut a, &mut v, p, q);
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    let diag: Vec<f64> = (0..n).map(|i| a[(i, i)].re).collect();
    // Stable sort keeps ties in index order.
    order.sort_by(|&i, &j| diag[j].partial_cmp(&diag[i]).unwrap_or(core::cmp::Ordering::Equal));
    let mut vectors = Matrix::zeros(n, n);
    let mut values = Vec::with_capacity(n);
    for (k, &i) in order.iter().enumerate() {
        values.push(diag[i]);
        let mut col = v.column(i);
        normalize_phase(&mut col);
        vectors.set_column(k, &col);
    }
    Ok(Eigen { values, vectors })
}

fn rotate(a: &mut Matrix, v: &mut Matrix, p: usize, q: usize) {
    let apq = a[(p, q)];
    let mag = apq.norm();
    if mag <= f64::MIN_POSITIVE {
        return;
    }
    let app = a[(p, p)].re;
    let aqq = a[(q, q)].re;
    if mag <= 1e-300 || mag < 1e-18 * (app.abs() + aqq.abs()) {
        a[(p, q)] = c64(0.0, 0.0);
        a[(q, p)] = c64(0.0, 0.0);
        return;
    }
    let u = apq / mag;
    let theta = (aqq - app) / (2.0 * mag);
    let t = if theta.abs() > 1e150 {
        0.5 / theta
    } else {
        let sgn = if theta >= 0.0 { 1.0 } else { -1.0 };
        sgn / (theta.abs() + libm::sqrt(theta * theta + 1.0))
    };
    let c = 1.0 / libm::sqrt(1.0 + t * t);
    let s = t * c;
    // V = diag(1, ū) · [[c, s], [-s, c]]
    let vpp = c64(c, 0.0);
    let vpq = c64(s, 0.0);
    let vqp = -u.conj() * s;
    let vqq = u.conj() * c;

    let n = a.rows();
    for k in 0..n {
        let akp = a[(k, p)];
        let akq = a[(k, q)];
        a[(k, p)] = akp * vpp + akq * vqp;
        a[(k, q)] = akp * vpq + akq * vqq;
    }
    for k in 0..n {
        let apk = a[(p, k)];
        let aqk = a[(q, k)];
        a[(p, k)] = vpp.conj() * apk + vqp.conj() * aqk;
        a[(q, k)] = vpq.conj() * apk + vqq.conj() * aqk;
    }
    a[(p, q)] = c64(0.0, 0.0);
    a[(q, p)] = c64(0.0, 0.0);
    a[(p, p)] = c64(a[(p, p)].re, 0.0);
    a[(q, q)] = c64(a[(q, q)].re, 0.0);
    for k in 0..n {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = vkp * vpp + vkq * vqp;
        v[(k, q)] = vkp * vpq + vkq * vqq;
    }
}

/// Rotates `v` so that its first non-negligible entry is real and nonnegative.
pub fn normalize_phase(v: &mut [C64]) {
    let scale = v.iter().map(|z| z.norm()).fold(0.0, f64::max);
    if scale == 0.0 {
        return;
    }
    if let Some(z) = v.iter().find(|z| z.norm() > 1e-12 * scale).copied() {
        let ph = z.conj() / z.norm();
        for x in v.iter_mut() {
            *x *= ph;
        }
    }
}

/// Applies `f` to the spectrum of a Hermitian matrix.
pub fn spectral_map(m: &Matrix, f: impl Fn(f64) -> f64) -> Result<Matrix> {
    let e = hermitian_eig(m)?;
    let n = m.rows();
    let mut out = Matrix::zeros(n, n);
    for (k, &lam) in e.values.iter().enumerate() {
        let fl = f(lam);
        if fl == 0.0 {
            continue;
        }
        let col = e.vectors.column(k);
        for i in 0..n {
            for j in 0..n {
                out[(i, j)] += col[i] * col[j].conj() * fl;
            }
        }
    }
    Ok(out)
}

/// Principal square root of a positive semidefinite matrix; negative noise is clamped.
pub fn psd_sqrt(m: &Matrix) -> Result<Matrix> {
    spectral_map(m, |x| if x > 0.0 { libm::sqrt(x) } else { 0.0 })
}
