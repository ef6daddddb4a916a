//! Seeded generators for states, unitaries and exact distributions.

use alloc::vec::Vec;

use num_bigint::BigInt;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::Result;
use crate::rational::Ratio;
use crate::tensor::matrix::{complete_basis, inner, norm};
use crate::tensor::{c64, DensityMatrix, Matrix, PureState, RegisterLayout, C64};

pub fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    c64(re, im)
}

pub fn gaussian_vector<R: Rng + ?Sized>(d: usize, rng: &mut R) -> Vec<C64> {
    (0..d).map(|_| gaussian(rng)).collect()
}

/// Haar-random unit vector.
pub fn unit_vector<R: Rng + ?Sized>(d: usize, rng: &mut R) -> Vec<C64> {
    loop {
        let mut v = gaussian_vector(d, rng);
        let n = norm(&v);
        if n > 1e-6 {
            v.iter_mut().for_each(|z| *z /= n);
            return v;
        }
    }
}

pub fn pure_state<R: Rng + ?Sized>(layout: RegisterLayout, rng: &mut R) -> Result<PureState> {
    layout.check_capacity()?;
    PureState::normalized(gaussian_vector(layout.dim(), rng), layout)
}

/// Haar-random unitary from Gram–Schmidt on Gaussian columns.
pub fn unitary<R: Rng + ?Sized>(d: usize, rng: &mut R) -> Matrix {
    let mut cols: Vec<Vec<C64>> = Vec::with_capacity(d);
    while cols.len() < d {
        let mut v = gaussian_vector(d, rng);
        for _ in 0..2 {
            for c in &cols {
                let p = inner(c, &v);
                for (x, y) in v.iter_mut().zip(c) {
                    *x -= p * y;
                }
            }
        }
        let n = norm(&v);
        if n > 1e-6 {
            v.iter_mut().for_each(|z| *z /= n);
            cols.push(v);
        }
    }
    let cols = complete_basis(&cols, d);
    let mut m = Matrix::zeros(d, d);
    for (j, c) in cols.iter().enumerate() {
        m.set_column(j, c);
    }
    m
}

/// `G G† / Tr(G G†)` for a `d × rank` Gaussian `G`.
pub fn density<R: Rng + ?Sized>(
    layout: RegisterLayout,
    rank: usize,
    rng: &mut R,
) -> Result<DensityMatrix> {
    layout.check_capacity()?;
    let d = layout.dim();
    let rank = rank.clamp(1, d);
    let g = Matrix::from_vec(d, rank, gaussian_vector(d * rank, rng))?;
    let m = g.mul(&g.adjoint())?;
    let tr = m.trace().re;
    DensityMatrix::new(m.hermitian_part().scale_real(1.0 / tr), layout)
}

/// Random probability vector with denominators dividing `granularity`
/// (entries may be zero unless `positive`).
pub fn distribution<R: Rng + ?Sized>(
    n: usize,
    granularity: u32,
    positive: bool,
    rng: &mut R,
) -> Vec<Ratio> {
    let lo = u32::from(positive);
    loop {
        let w: Vec<u32> = (0..n).map(|_| rng.random_range(lo..=granularity)).collect();
        let total: u32 = w.iter().sum();
        if total > 0 {
            return w
                .into_iter()
                .map(|x| Ratio::new(BigInt::from(x), BigInt::from(total)))
                .collect();
        }
    }
}

/// Random real probability vector (for quantum priors).
pub fn float_distribution<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<f64> {
    let w: Vec<f64> = (0..n).map(|_| rng.random::<f64>() + 1e-3).collect();
    let s: f64 = w.iter().sum();
    w.into_iter().map(|x| x / s).collect()
}
