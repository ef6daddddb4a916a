//! Exact probabilities.

use alloc::string::{String, ToString};
use alloc::vec::Vec;
use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Ratio = num_rational::BigRational;

pub fn ratio(num: i64, den: i64) -> Ratio {
    Ratio::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(n: i64) -> Ratio {
    Ratio::from_integer(BigInt::from(n))
}

pub fn to_f64(r: &Ratio) -> f64 {
    if let Some(v) = r.to_f64() {
        return v;
    }
    // Huge numerators/denominators: scale both down before dividing.
    let n = r.numer().bits() as i64;
    let d = r.denom().bits() as i64;
    let shift = (n.max(d) - 60).max(0) as usize;
    let num = (r.numer() >> shift).to_f64().unwrap_or(0.0);
    let den = (r.denom() >> shift).to_f64().unwrap_or(1.0);
    num / den
}

/// Renders `num/den` (or `num` for integers).
pub fn render(r: &Ratio) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        alloc::format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn parse(s: &str) -> Result<Ratio> {
    let bad = || Error::Parameters(alloc::format!("not a rational: `{s}`"));
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(Ratio::new(n, d))
        }
        None => Ok(Ratio::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

pub fn sum<'a>(it: impl IntoIterator<Item = &'a Ratio>) -> Ratio {
    it.into_iter().fold(Ratio::zero(), |acc, x| acc + x)
}

/// Checks that `p` is a probability vector: entries nonnegative, sum exactly one.
pub fn check_distribution(p: &[Ratio]) -> Result<()> {
    if p.is_empty() {
        return Err(Error::InvalidDistribution("empty".into()));
    }
    if let Some(x) = p.iter().find(|x| x.is_negative()) {
        return Err(Error::InvalidDistribution(alloc::format!(
            "negative probability {}",
            render(x)
        )));
    }
    let s = sum(p);
    if !s.is_one() {
        return Err(Error::InvalidDistribution(alloc::format!(
            "sums to {}",
            render(&s)
        )));
    }
    Ok(())
}

pub fn uniform(n: usize) -> Vec<Ratio> {
    (0..n).map(|_| ratio(1, n as i64)).collect()
}
