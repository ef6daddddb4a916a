//! Singular value decomposition by one-sided (Hestenes) Jacobi rotations.

use alloc::vec::Vec;

use super::matrix::{complete_basis, norm, Matrix, C64};
use crate::error::Result;

const MAX_SWEEPS: usize = 80;

/// `m = u · diag(s) · v†` with `s` descending, `u` having orthonormal columns
/// and `v` unitary.
#[derive(Debug, Clone)]
pub struct Svd {
    pub u: Matrix,
    pub s: Vec<f64>,
    pub v: Matrix,
}

pub fn svd(m: &Matrix) -> Result<Svd> {
    if m.rows() < m.cols() {
        let t = svd(&m.adjoint())?;
        return Ok(Svd {
            u: t.v,
            s: t.s,
            v: t.u,
        });
    }
    let rows = m.rows();
    let cols = m.cols();
    let mut a: Vec<Vec<C64>> = (0..cols).map(|j| m.column(j)).collect();
    let mut v: Vec<Vec<C64>> = (0..cols)
        .map(|j| {
            let mut e = alloc::vec![C64::new(0.0, 0.0); cols];
            e[j] = C64::new(1.0, 0.0);
            e
        })
        .collect();

    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..cols {
            for q in p + 1..cols {
                if rotate(&mut a, &mut v, p, q) {
                    rotated = true;
                }
            }
        }
        if !rotated {
            break;
        }
    }

    let sv: Vec<f64> = a.iter().map(|c| norm(c)).collect();
    let mut order: Vec<usize> = (0..cols).collect();
    order.sort_by(|&i, &j| sv[j].partial_cmp(&sv[i]).unwrap_or(core::cmp::Ordering::Equal));
    let smax = sv.iter().copied().fold(0.0, f64::max);

    let mut s = Vec::with_capacity(cols);
    let mut ucols: Vec<Vec<C64>> = Vec::new();
    let mut vmat = Matrix::zeros(cols, cols);
    for (k, &j) in order.iter().enumerate() {
        s.push(sv[j]);
        vmat.set_column(k, &v[j]);
        if sv[j] > 1e-13 * smax.max(f64::MIN_POSITIVE) && sv[j] > 0.0 {
            ucols.push(a[j].iter().map(|z| z / sv[j]).collect());
        }
    }
    let full = complete_basis(&ucols, rows);
    let mut u = Matrix::zeros(rows, cols);
    for (k, col) in full.iter().take(cols).enumerate() {
        u.set_column(k, col);
    }
    Ok(Svd { u, s, v: vmat })
}

fn rotate(a: &mut [Vec<C64>], v: &mut [Vec<C64>], p: usize, q: usize) -> bool {
    let alpha: f64 = a[p].iter().map(|z| z.norm_sqr()).sum();
    let beta: f64 = a[q].iter().map(|z| z.norm_sqr()).sum();
    let gamma: C64 = a[p].iter().zip(&a[q]).map(|(x, y)| x.conj() * y).sum();
    let g = gamma.norm();
    if g <= 1e-15 * libm::sqrt(alpha * beta) || g < 1e-300 {
        return false;
    }
    let e = gamma / g;
    let zeta = (beta - alpha) / (2.0 * g);
    let t = if zeta.abs() > 1e150 {
        0.5 / zeta
    } else {
        let sgn = if zeta >= 0.0 { 1.0 } else { -1.0 };
        sgn / (zeta.abs() + libm::sqrt(1.0 + zeta * zeta))
    };
    let c = 1.0 / libm::sqrt(1.0 + t * t);
    let s = c * t;
    let ec = e.conj();
    for cols in [a, v] {
        let (lo, hi) = cols.split_at_mut(q);
        let cp = &mut lo[p];
        let cq = &mut hi[0];
        for (x, y) in cp.iter_mut().zip(cq.iter_mut()) {
            let yt = *y * ec;
            let nx = *x * c - yt * s;
            let ny = *x * s + yt * c;
            *x = nx;
            *y = ny;
        }
    }
    true
}

/// `Tr √(A†A)`, the sum of singular values of a square matrix.
pub fn trace_norm(a: &Matrix) -> Result<f64> {
    a.require_square()?;
    Ok(svd(a)?.s.iter().sum())
}
