use alloc::vec::Vec;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::info::JointDistribution;
use crate::protocol::SumEncoding;
use crate::rational::Ratio;

/// Largest support [`build_product_distribution`] enumerates.
pub const PRODUCT_CAP: usize = 1 << 20;

/// `D*` on `Eⁿ × ([n] × F × Eⁿ⁻¹)`: `i` uniform, `(x_j, y_j)` i.i.d. from `D`,
/// Bob keeps `(i, y_i, x₁…x_{i−1})`. Uses the [`SumEncoding`] indices.
pub fn build_product_distribution(d: &JointDistribution, n: usize) -> Result<JointDistribution> {
    let (e, f) = (d.alice_size(), d.bob_size());
    let enc = SumEncoding::new(e, f, n)?;
    let size = enc.alice_inputs().saturating_mul(n).saturating_mul(f);
    if size > PRODUCT_CAP {
        return Err(Error::Capacity {
            what: "product distribution",
            needed: size,
            limit: PRODUCT_CAP,
        });
    }
    let px = d.marginal_x();
    let nr = Ratio::from_integer((n as i64).into());
    let mut points = Vec::new();
    for a in 0..enc.alice_inputs() {
        let xs = enc.digits(a);
        for i in 0..n {
            let rest = (0..n)
                .filter(|j| *j != i)
                .fold(Ratio::one(), |acc, j| acc * &px[xs[j]]);
            if rest.is_zero() {
                continue;
            }
            for y in 0..f {
                let w = d.prob(xs[i], y) * &rest / &nr;
                if !w.is_zero() {
                    points.push((a, enc.bob(i, y, &xs[..i]), w));
                }
            }
        }
    }
    JointDistribution::new(enc.alice_inputs(), enc.bob_inputs(), points)
}
