//! Exact replays of the round-elimination iterations behind the predecessor
//! and greater-than lower bounds.
//!
//! Constants involving `ln 2` are kept symbolic as rational multiples of
//! `ln 2`; every floor is decided with rigorous bounds on `ln 2`.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::rational::{ratio, to_f64, Ratio};

/// Precisions (bits) tried before a rounding is declared undecidable.
const PRECISIONS: [u32; 4] = [64, 256, 1024, 4096];

/// Dyadic bounds `L/2^P ≤ ln 2 ≤ H/2^P` with `P = bits + 8`, from
/// `ln 2 = Σ_{k≥1} 1/(k·2^k)`.
pub fn ln2_bounds(bits: u32) -> (BigUint, BigUint, u32) {
    let p = bits + 8;
    let n = bits + 2;
    let one = BigUint::one() << p;
    let mut lo = BigUint::zero();
    let mut hi = BigUint::zero();
    for k in 1..=n {
        let den = BigUint::from(k) << k;
        let q = &one / &den;
        hi += &q + if (&q * &den) == one { 0u32 } else { 1u32 };
        lo += q;
    }
    // tail after n terms is below 1/((n+1)·2^n)
    hi += (&one >> n) + 1u32;
    (lo, hi, p)
}

fn ln2_ratios(bits: u32) -> (Ratio, Ratio) {
    let (lo, hi, p) = ln2_bounds(bits);
    let den = BigInt::one() << p;
    (
        Ratio::new(BigInt::from(lo), den.clone()),
        Ratio::new(BigInt::from(hi), den),
    )
}

pub fn ln2_f64() -> f64 {
    core::f64::consts::LN_2
}

/// `⌊f(ln 2)⌋` for `f` monotone on the bounding interval.
fn certified_floor(what: &str, f: impl Fn(&Ratio) -> Ratio) -> Result<BigInt> {
    for bits in PRECISIONS {
        let (lo, hi) = ln2_ratios(bits);
        let (a, b) = (f(&lo).floor().to_integer(), f(&hi).floor().to_integer());
        if a == b {
            return Ok(a);
        }
    }
    Err(Error::Precondition(format!("cannot decide the rounding of {what}")))
}

/// Whether `f(ln 2) ≤ bound` for monotone `f`.
fn certified_le(what: &str, bound: &Ratio, f: impl Fn(&Ratio) -> Ratio) -> Result<bool> {
    for bits in PRECISIONS {
        let (lo, hi) = ln2_ratios(bits);
        let (a, b) = (f(&lo), f(&hi));
        let (min, max) = if a <= b { (a, b) } else { (b, a) };
        if max <= *bound {
            return Ok(true);
        }
        if min > *bound {
            return Ok(false);
        }
    }
    Err(Error::Precondition(format!("cannot decide the comparison of {what}")))
}

/// `⌊N / (K·ln 2)⌋` by integer division. For huge `N` the floor may need
/// more digits of `ln 2` than is practical; the result is then the floor
/// taken with an upper bound on `ln 2`, a lower bound on the true value, and
/// the flag is false.
fn floor_div_ln2(n: &BigUint, k: &BigUint) -> (BigUint, bool) {
    let mut last = BigUint::zero();
    for bits in PRECISIONS {
        let (lo, hi, p) = ln2_bounds(bits);
        let num = n << p;
        let a = &num / (k * &hi);
        let b = &num / (k * &lo);
        if a == b {
            return (a, true);
        }
        last = a;
    }
    (last, false)
}

/// Exact fourth root of a nonnegative rational, when it exists.
fn root4(r: &Ratio) -> Option<Ratio> {
    if r.is_negative() {
        return None;
    }
    let (n, d) = (r.numer().clone(), r.denom().clone());
    let (a, b) = (n.nth_root(4), d.nth_root(4));
    (a.pow(4u32) == n && b.pow(4u32) == d).then(|| Ratio::new(a, b))
}

/// A real number `coeff · ln 2`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LnTwoMultiple {
    pub coeff: Ratio,
}

impl LnTwoMultiple {
    pub fn to_f64(&self) -> f64 {
        to_f64(&self.coeff) * ln2_f64()
    }

    pub fn render(&self) -> String {
        format!("{}*ln2", crate::rational::render(&self.coeff))
    }
}

fn big(v: u64) -> BigInt {
    BigInt::from(v)
}

/// One row of the greater-than ledger. Stage 0 is the starting problem.
#[derive(Debug, Clone, PartialEq)]
pub struct GtStage {
    pub stage: usize,
    /// `n_i = ⌊n_{i−1} / k_i⌋`.
    pub n: BigInt,
    /// `k_i = C·t⁴·l_i`.
    pub k: Option<LnTwoMultiple>,
    /// `ε_i = 1/3 + Σ_{j ≤ i} ((4 ln 2)·l_j / k_j)^{1/4}`.
    pub epsilon: Ratio,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GtTrace {
    pub n: BigUint,
    pub l: Vec<u64>,
    pub t: usize,
    /// `C = (4 ln 2)·6⁴`.
    pub c: LnTwoMultiple,
    /// `n ≥ (C t³ Σl)^t`.
    pub precondition: bool,
    /// `Some("precondition")` when the precondition fails.
    pub failure_stage: Option<String>,
    pub stages: Vec<GtStage>,
    pub final_epsilon: Ratio,
    pub epsilon_is_half: bool,
    pub final_n_positive: bool,
    /// The iteration ends in a zero-round protocol for a nontrivial problem.
    pub contradiction: bool,
    pub rounding: Vec<String>,
}

/// Replays the greater-than iteration for `n`-bit inputs and message
/// lengths `l₁ … l_t`.
pub fn trace_gt_bound(n: &BigUint, l: &[u64]) -> Result<GtTrace> {
    let t = l.len();
    if t == 0 || l.contains(&0) {
        return Err(Error::Parameters("message lengths must be positive".into()));
    }
    let tt = big(t as u64);
    let c = LnTwoMultiple {
        coeff: Ratio::from_integer(big(4 * 6u64.pow(4))),
    };
    let total: u64 = l.iter().sum();
    let nn = Ratio::from_integer(BigInt::from(n.clone()));
    // (C t³ Σl)^t is increasing in ln 2
    let base = &c.coeff * Ratio::from_integer(tt.pow(3u32) * big(total));
    let precondition = certified_le("the precondition", &nn, |x| {
        let v = &base * x;
        num_traits::pow(v, t)
    })?;
    let third = ratio(1, 3);
    let mut stages = vec![GtStage {
        stage: 0,
        n: BigInt::from(n.clone()),
        k: None,
        epsilon: third.clone(),
    }];
    let mut rounding = Vec::new();
    for (i, &li) in l.iter().enumerate() {
        let k = LnTwoMultiple {
            coeff: &c.coeff * Ratio::from_integer(tt.pow(4u32) * big(li)),
        };
        let prev = stages[i].n.clone();
        let ni = if prev.is_positive() {
            let p = Ratio::from_integer(prev);
            certified_floor("n_i", |x| &p / (&k.coeff * x))?
        } else {
            BigInt::zero()
        };
        rounding.push(format!("n_{} = floor(n_{} / k_{})", i + 1, i, i + 1));
        // ((4 ln 2) l_i / k_i) is rational: the ln 2 factors cancel
        let term = Ratio::from_integer(big(4 * li)) / &k.coeff;
        let step = root4(&term)
            .ok_or_else(|| Error::Precondition(format!("stage {} increment is not a rational fourth root", i + 1)))?;
        stages.push(GtStage {
            stage: i + 1,
            n: ni,
            k: Some(k),
            epsilon: &stages[i].epsilon + step,
        });
    }
    let last = stages.last().unwrap();
    let final_epsilon = last.epsilon.clone();
    let epsilon_is_half = final_epsilon == ratio(1, 2);
    let final_n_positive = last.n >= BigInt::one();
    Ok(GtTrace {
        n: n.clone(),
        l: l.to_vec(),
        t,
        c,
        precondition,
        failure_stage: (!precondition).then(|| "precondition".into()),
        contradiction: precondition && final_n_positive && epsilon_is_half,
        stages,
        final_epsilon,
        epsilon_is_half,
        final_n_positive,
        rounding,
    })
}

/// Predecessor parameters: the universe is `m = 2^{2^loglog_m}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PredecessorParams {
    pub loglog_m: u64,
    pub c2: u64,
    pub c3: u64,
    pub delta: Ratio,
    /// Round count to use instead of the theorem's value.
    pub t: Option<u64>,
}

/// One row of the predecessor ledger. Stage `i` holds a
/// `(2t−2i, i(a+b), a, b)^A` protocol.
#[derive(Debug, Clone, PartialEq)]
pub struct PredStage {
    pub stage: u64,
    pub rounds: u64,
    /// `i·a`; the overhead is `i·a + i·b`.
    pub overhead_a: BigUint,
    /// `log₂` of `i·b` is `log₂ i + c₃·log log m` (zero at stage 0).
    pub overhead_b_factor: u64,
    /// `p_i = ⌊p_{i−1} / (2c₁at⁴)⌋`, `p₀ = log m`.
    pub domain_bits: BigUint,
    /// Bounds on `log₂ n_i`.
    pub set_log2: (BigInt, BigInt),
    pub epsilon: Ratio,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PredChecks {
    /// `p_t ≥ (log m)^{1/2}`.
    pub exponent_witness: bool,
    /// `p_t ≥ log(c₁bt⁴) + 1`.
    pub domain_room: bool,
    /// `n_t ≥ 1`.
    pub set_nonempty: bool,
    /// `δ + 1/6 < 1/2`.
    pub error_below_half: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PredTrace {
    pub params: PredecessorParams,
    /// `⌊log log log m⌋` and whether it is exact.
    pub lll: u64,
    pub lll_exact: bool,
    /// `⌊(log log m)² / log log log m⌋`.
    pub log_n: BigUint,
    pub log_n_exact: bool,
    /// `c₁ = (4 ln 2)·12⁴`.
    pub c1: LnTwoMultiple,
    /// `a = c₂ log n`.
    pub a: BigUint,
    /// `b = (log m)^{c₃} = 2^{b_log2}`.
    pub b_log2: u64,
    /// The theorem's `⌊log log m / ((c₁+c₂+c₃) log log log m)⌋`.
    pub t_theorem: BigInt,
    pub t: u64,
    pub stages: Vec<PredStage>,
    /// First stage whose domain or set is empty.
    pub collapse: Option<u64>,
    pub final_epsilon: Ratio,
    pub checks: Option<PredChecks>,
    pub contradiction: bool,
    pub rounding: Vec<String>,
}

/// `⌊log₂ (K·ln 2)⌋` for an integer `K ≥ 2`.
fn floor_log2_ln2(k: &BigInt) -> Result<u64> {
    let v = certified_floor("log2", |x| Ratio::from_integer(k.clone()) * x)?;
    let e = v.bits().saturating_sub(1);
    // v ≥ 1 and ⌊log₂ x⌋ = ⌊log₂ ⌊x⌋⌋
    if v.is_zero() {
        return Err(Error::Parameters("constant below one".into()));
    }
    Ok(e)
}

/// Replays the predecessor iteration.
pub fn trace_predecessor_bound(params: &PredecessorParams) -> Result<PredTrace> {
    let PredecessorParams {
        loglog_m,
        c2,
        c3,
        ref delta,
        t: t_override,
    } = *params;
    if loglog_m < 2 || c2 == 0 || c3 == 0 {
        return Err(Error::Parameters("need log log m ≥ 2 and positive c₂, c₃".into()));
    }
    if delta.is_negative() || *delta >= ratio(1, 3) {
        return Err(Error::Parameters("delta must lie in [0, 1/3)".into()));
    }
    let mut rounding = Vec::new();
    let lll = 63 - loglog_m.leading_zeros() as u64;
    let lll_exact = loglog_m.is_power_of_two();
    if !lll_exact {
        rounding.push("log log log m rounded down".into());
    }
    if lll == 0 {
        return Err(Error::Parameters("log log log m must be positive".into()));
    }
    let sq = BigUint::from(loglog_m).pow(2u32);
    let log_n = &sq / lll;
    let log_n_exact = (&sq % lll).is_zero();
    if !log_n_exact {
        rounding.push("log n rounded down".into());
    }
    let c1 = LnTwoMultiple {
        coeff: Ratio::from_integer(big(4 * 12u64.pow(4))),
    };
    let a = &log_n * c2;
    let b_log2 = c3
        .checked_mul(loglog_m)
        .ok_or_else(|| Error::Parameters("b is too large".into()))?;
    let extra = Ratio::from_integer(big(c2 + c3));
    let t_theorem = certified_floor("t", |x| {
        Ratio::from_integer(big(loglog_m)) / ((&c1.coeff * x + &extra) * Ratio::from_integer(big(lll)))
    })?;
    rounding.push("t rounded down".into());
    let t = match t_override {
        Some(t) => t,
        None => t_theorem.to_u64().unwrap_or(0),
    };
    if t < 1 {
        return Err(Error::Parameters(format!(
            "parameters too small: t = {t_theorem} for log log m = {loglog_m}"
        )));
    }
    let t4 = BigUint::from(t).pow(4u32);
    // 2c₁at⁴ = (2·82944·a·t⁴)·ln 2
    let c1_int = BigUint::from(4 * 12u64.pow(4));
    let domain_div = &c1_int * 2u32 * &a * &t4;
    let e = floor_log2_ln2(&BigInt::from(&c1_int * &t4))?;
    // log₂(c₁bt⁴) lies in [b_log2 + e, b_log2 + e + 1)
    let shrink_lo = BigInt::from(b_log2) + e;
    let shrink_hi = &shrink_lo + 1;
    let start_hi = if log_n_exact { BigInt::from(log_n.clone()) } else { BigInt::from(log_n.clone()) + 1 };
    let mut stages = vec![PredStage {
        stage: 0,
        rounds: 2 * t,
        overhead_a: BigUint::zero(),
        overhead_b_factor: 0,
        domain_bits: BigUint::one() << loglog_m,
        set_log2: (BigInt::from(log_n.clone()), start_hi),
        epsilon: delta.clone(),
    }];
    rounding.push("p_i rounded down at every stage".into());
    let mut collapse = None;
    for i in 1..=t {
        let prev = stages.last().unwrap();
        let (domain_bits, exact) = floor_div_ln2(&prev.domain_bits, &domain_div);
        if !exact {
            rounding.push(format!("p_{i} is a lower bound (ln 2 rounded up)"));
        }
        let set_log2 = (&prev.set_log2.0 - &shrink_hi, &prev.set_log2.1 - &shrink_lo);
        let st = PredStage {
            stage: i,
            rounds: 2 * t - 2 * i,
            overhead_a: &a * i,
            overhead_b_factor: i,
            domain_bits,
            set_log2,
            epsilon: delta + ratio(2 * i as i64, 12 * t as i64),
        };
        let empty = st.domain_bits.is_zero() || st.set_log2.1.is_negative();
        stages.push(st);
        if empty {
            collapse = Some(i);
            break;
        }
    }
    let last = stages.last().unwrap();
    let final_epsilon = last.epsilon.clone();
    let checks = collapse.is_none().then(|| {
        let p = &last.domain_bits;
        PredChecks {
            exponent_witness: p * p >= BigUint::one() << loglog_m,
            domain_room: BigInt::from(p.clone()) >= &shrink_hi + 1,
            set_nonempty: !last.set_log2.0.is_negative(),
            error_below_half: final_epsilon < ratio(1, 2),
        }
    });
    let contradiction = checks
        .as_ref()
        .is_some_and(|c| c.exponent_witness && c.domain_room && c.set_nonempty && c.error_below_half);
    Ok(PredTrace {
        params: params.clone(),
        lll,
        lll_exact,
        log_n,
        log_n_exact,
        c1,
        a,
        b_log2,
        t_theorem,
        t,
        stages,
        collapse,
        final_epsilon,
        checks,
        contradiction,
        rounding,
    })
}

/// `log₂` of a big integer, for display.
pub fn approx_log2(v: &BigUint) -> f64 {
    let bits = v.bits();
    if bits <= 64 {
        return libm::log2(v.to_u64().unwrap_or(0) as f64);
    }
    let top = (v >> (bits - 64)).to_u64().unwrap_or(0) as f64;
    libm::log2(top) + (bits - 64) as f64
}
