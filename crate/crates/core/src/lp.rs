//! Dense simplex with Bland's rule, used to solve small matrix games.

use alloc::vec;
use alloc::vec::Vec;

use num_traits::Num;

use crate::error::{Error, Result};

/// Optimal mixed strategies of a zero-sum matrix game.
#[derive(Debug, Clone, PartialEq)]
pub struct GameSolution<T> {
    /// `min_λ max_j Σ_k λ_k a[k][j]`.
    pub value: T,
    /// Minimizer's mixture over rows.
    pub rows: Vec<T>,
    /// Maximizer's mixture over columns.
    pub columns: Vec<T>,
}

/// Solves `max cᵀw` subject to `A w ≤ b`, `w ≥ 0` with `b ≥ 0`. Returns the
/// primal solution and the dual prices of the constraints. `eps` is the
/// tolerance for sign tests (zero for exact fields).
pub fn simplex<T>(a: &[Vec<T>], b: &[T], c: &[T], eps: &T) -> Result<(Vec<T>, Vec<T>)>
where
    T: Num + Clone + PartialOrd,
{
    let m = a.len();
    let n = c.len();
    let zero = T::zero();
    if b.len() != m || a.iter().any(|r| r.len() != n) {
        return Err(Error::Dimension("inconsistent linear program".into()));
    }
    if b.iter().any(|v| *v < zero) {
        return Err(Error::Parameters("right-hand side must be nonnegative".into()));
    }
    // tableau rows: [A | I | b]; objective row holds reduced costs c − z
    let width = n + m + 1;
    let mut t: Vec<Vec<T>> = (0..m)
        .map(|i| {
            let mut row = a[i].clone();
            row.extend((0..m).map(|j| if i == j { T::one() } else { T::zero() }));
            row.push(b[i].clone());
            row
        })
        .collect();
    let mut obj: Vec<T> = c.to_vec();
    obj.extend((0..m + 1).map(|_| T::zero()));
    let mut basis: Vec<usize> = (n..n + m).collect();
    let mut guard = 0usize;
    loop {
        guard += 1;
        if guard > 10_000 {
            return Err(Error::Parameters("simplex did not terminate".into()));
        }
        let Some(enter) = (0..n + m).find(|&j| obj[j] > *eps) else {
            break;
        };
        let mut leave: Option<usize> = None;
        for i in 0..m {
            if t[i][enter] > *eps {
                let better = match leave {
                    None => true,
                    Some(l) => {
                        // compare b_i / a_ie with b_l / a_le without dividing
                        let lhs = t[i][width - 1].clone() * t[l][enter].clone();
                        let rhs = t[l][width - 1].clone() * t[i][enter].clone();
                        lhs < rhs || (lhs == rhs && basis[i] < basis[l])
                    }
                };
                if better {
                    leave = Some(i);
                }
            }
        }
        let Some(r) = leave else {
            return Err(Error::Parameters("linear program is unbounded".into()));
        };
        let piv = t[r][enter].clone();
        for v in t[r].iter_mut() {
            *v = v.clone() / piv.clone();
        }
        let pivot_row = t[r].clone();
        for (i, row) in t.iter_mut().enumerate() {
            if i != r && row[enter] != zero {
                let f = row[enter].clone();
                for (v, p) in row.iter_mut().zip(&pivot_row) {
                    *v = v.clone() - f.clone() * p.clone();
                }
            }
        }
        let f = obj[enter].clone();
        for (v, p) in obj.iter_mut().zip(&pivot_row) {
            *v = v.clone() - f.clone() * p.clone();
        }
        basis[r] = enter;
    }
    let mut w = vec![T::zero(); n];
    for (i, &bv) in basis.iter().enumerate() {
        if bv < n {
            w[bv] = t[i][width - 1].clone();
        }
    }
    let duals = (0..m).map(|j| T::zero() - obj[n + j].clone()).collect();
    Ok((w, duals))
}

/// Solves the game where the row player minimizes `λᵀ a μ` and the column
/// player maximizes it.
pub fn solve_matrix_game<T>(a: &[Vec<T>], eps: &T) -> Result<GameSolution<T>>
where
    T: Num + Clone + PartialOrd,
{
    let k = a.len();
    let n = a.first().map_or(0, |r| r.len());
    if k == 0 || n == 0 {
        return Err(Error::Dimension("empty game".into()));
    }
    let mut lo = a[0][0].clone();
    for r in a {
        for v in r {
            if *v < lo {
                lo = v.clone();
            }
        }
    }
    // shift every payoff to at least one
    let shift = T::one() - lo;
    // constraint j: Σ_k w_k (a[k][j] + shift) ≤ 1
    let rows: Vec<Vec<T>> = (0..n)
        .map(|j| (0..k).map(|i| a[i][j].clone() + shift.clone()).collect())
        .collect();
    let (w, u) = simplex(&rows, &vec![T::one(); n], &vec![T::one(); k], eps)?;
    let sw = w.iter().fold(T::zero(), |s, v| s + v.clone());
    let su = u.iter().fold(T::zero(), |s, v| s + v.clone());
    if sw <= T::zero() || su <= T::zero() {
        return Err(Error::Parameters("degenerate game".into()));
    }
    let rows_mix: Vec<T> = w.iter().map(|v| v.clone() / sw.clone()).collect();
    let cols_mix: Vec<T> = u.iter().map(|v| v.clone() / su.clone()).collect();
    Ok(GameSolution {
        value: T::one() / sw - shift,
        rows: rows_mix,
        columns: cols_mix,
    })
}
