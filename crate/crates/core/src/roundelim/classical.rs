use alloc::format;
use alloc::vec::Vec;

use num_traits::{One, Zero};

use super::product::build_product_distribution;
use super::EliminationCertificate;
use crate::error::{Error, Result};
use crate::info::{encoding_mutual_information, JointDistribution};
use crate::lp::solve_matrix_game;
use crate::protocol::classical::{CoinDist, CoinSpace, Shape};
use crate::protocol::{
    distributional_error, eval_classical, first_message_encoding, fix_public_coin,
    ClassicalProtocol, GameSpec, SumEncoding,
};
use crate::rational::{to_f64, Ratio};
use crate::tensor::Party;

/// Largest `|E|ⁿ` accepted by elimination.
pub const ELIMINATION_CAP: usize = 4096;

/// Iterations of the worst-case search.
pub const MAX_ROUNDS: usize = 64;

/// Removes Alice's first message. The public coin of the result is the
/// message `m ~ σ`; Alice then draws her old coin from `q^{xm}`, and forfeits
/// when `σ(m|x) = 0`.
pub fn classical_round_reduce(
    p: &ClassicalProtocol,
    g: &GameSpec,
    d: &JointDistribution,
) -> Result<(ClassicalProtocol, EliminationCertificate)> {
    p.check_game(g)?;
    if p.rounds() == 0 {
        return Err(Error::Precondition("protocol has no rounds".into()));
    }
    if p.starter != Party::Alice || p.has_public_coin() {
        return Err(Error::Precondition(
            "round reduction takes a private-coin protocol started by Alice".into(),
        ));
    }
    let enc = first_message_encoding(p, g, d)?;
    let px = d.marginal_x();
    let l1 = p.lengths[0];
    let nm = 1usize << l1;
    let mut sigma = alloc::vec![Ratio::zero(); nm];
    for (x, w) in px.iter().enumerate() {
        for (m, s) in enc.codewords[x].iter().enumerate() {
            sigma[m] += w * s;
        }
    }
    let na = p.alice_coin.outcomes;
    let mut alice = Vec::with_capacity(p.alice_inputs * nm);
    for x in 0..p.alice_inputs {
        let alpha = p.alice_coin.dist(x);
        for m in 0..nm {
            let sx = &enc.codewords[x][m];
            let mut q = alloc::vec![Ratio::zero(); na + 1];
            if sx.is_zero() {
                q[na] = Ratio::one();
            } else {
                for (r, a) in alpha.iter().enumerate() {
                    if p.message(0, x, 0, r, 0) as usize == m {
                        q[r] = a / sx;
                    }
                }
            }
            alice.push(q);
        }
    }
    let alice_coin = CoinSpace {
        outcomes: na + 1,
        dist: CoinDist::PerContext(alice),
        forfeit: Some(na),
    };
    let bob_coin = match &p.bob_coin.dist {
        CoinDist::Fixed(_) => p.bob_coin.clone(),
        CoinDist::PerContext(ds) => CoinSpace {
            outcomes: p.bob_coin.outcomes,
            forfeit: p.bob_coin.forfeit,
            dist: CoinDist::PerContext(
                (0..p.bob_inputs * nm).map(|c| ds[c / nm].clone()).collect(),
            ),
        },
    };
    let tail = p.lengths[1..].to_vec();
    let prefix_q = |k: usize| tail[..k].iter().sum::<usize>();
    let own = |party: Party, coin: usize| match party {
        Party::Alice if coin == na => 0,
        _ => coin,
    };
    let q = ClassicalProtocol::from_fn(
        Shape {
            starter: Party::Bob,
            lengths: tail.clone(),
            alice_inputs: p.alice_inputs,
            bob_inputs: p.bob_inputs,
            answers: p.answers,
        },
        sigma,
        alice_coin,
        bob_coin,
        |k, input, m, coin, tr| {
            let full = ((m as u64) << prefix_q(k)) | tr;
            p.message(k + 1, input, 0, own(p.sender(k + 1), coin), full)
        },
        |input, m, coin, tr| {
            let full = ((m as u64) << prefix_q(tail.len())) | tr;
            p.answer(input, 0, own(p.answerer(), coin), full)
        },
    )?;
    let before = distributional_error(p, g, d)?;
    let after = distributional_error(&q, g, d)?;
    let information = encoding_mutual_information(&enc.encoding)?.max(0.0);
    let bound = to_f64(&before) + 0.5 * libm::sqrt(2.0 * core::f64::consts::LN_2 * information);
    let error_after = to_f64(&after);
    let cert = EliminationCertificate {
        before: p.signature(),
        after: q.signature(),
        error_before: to_f64(&before),
        error_after,
        exact_before: Some(before),
        exact_after: Some(after),
        information,
        bound,
        slack: bound - error_after,
    };
    Ok((q, cert))
}

/// Result of [`classical_round_eliminate`].
#[derive(Debug, Clone)]
pub struct ClassicalElimination {
    pub protocol: ClassicalProtocol,
    /// Worst-case error of the input protocol on `g⁽ⁿ⁾`.
    pub delta: Ratio,
    /// Worst-case error of the output on `g`.
    pub worst: Ratio,
    pub bound: f64,
    pub slack: f64,
    /// Distributions whose protocols make up the output, with their weights.
    pub distributions: Vec<(Ratio, JointDistribution)>,
    /// Per distribution, `E_{i,prefix} I(X_i : M | prefix)` and its cap `l₁/n`.
    pub information: Vec<(f64, f64)>,
    /// Value of the finite game over the constructed family.
    pub game_value: Ratio,
    pub rounds: usize,
}

/// Builds `P′` for copy `i` (0-based) and prefix `x₁…x_{i−1}`: Alice holds `x_i`
/// and samples `x_{i+1}…x_n` privately from `px`; Bob holds `y`.
fn restrict_to_copy(
    p: &ClassicalProtocol,
    enc: &SumEncoding,
    g: &GameSpec,
    i: usize,
    prefix: &[usize],
    px: &[Ratio],
) -> Result<ClassicalProtocol> {
    if p.alice_coin.forfeit.is_some() || p.bob_coin.forfeit.is_some() {
        return Err(Error::Precondition("input protocol has forfeit coins".into()));
    }
    let e = enc.e;
    let tail = enc.n - 1 - i;
    let nr = e.pow(tail as u32);
    let na = p.alice_coin.outcomes;
    let full = |x: usize, r: usize| -> usize {
        let mut xs = prefix.to_vec();
        xs.push(x);
        let mut rest = alloc::vec![0; tail];
        let mut v = r;
        for j in (0..tail).rev() {
            rest[j] = v % e;
            v /= e;
        }
        xs.extend(rest);
        enc.join(&xs)
    };
    let rest_weight = |r: usize| -> Ratio {
        let mut w = Ratio::one();
        let mut v = r;
        for _ in 0..tail {
            w *= &px[v % e];
            v /= e;
        }
        w
    };
    let coin_for = |x: usize| -> Vec<Ratio> {
        let mut dist = Vec::with_capacity(nr * na);
        for r in 0..nr {
            let wr = rest_weight(r);
            let alpha = p.alice_coin.dist(full(x, r));
            for a in alpha {
                dist.push(&wr * a);
            }
        }
        dist
    };
    let alice_coin = CoinSpace {
        outcomes: nr * na,
        forfeit: None,
        dist: match &p.alice_coin.dist {
            CoinDist::Fixed(_) => CoinDist::Fixed(coin_for(0)),
            CoinDist::PerContext(_) => CoinDist::PerContext((0..e).map(coin_for).collect()),
        },
    };
    let bob_coin = match &p.bob_coin.dist {
        CoinDist::Fixed(_) => p.bob_coin.clone(),
        CoinDist::PerContext(_) => CoinSpace {
            outcomes: p.bob_coin.outcomes,
            forfeit: None,
            dist: CoinDist::PerContext(
                (0..g.bob_inputs)
                    .map(|y| p.bob_coin.dist(enc.bob(i, y, prefix)).to_vec())
                    .collect(),
            ),
        },
    };
    ClassicalProtocol::from_fn(
        Shape::for_game(g, p.starter, p.lengths.clone()),
        alloc::vec![Ratio::one()],
        alice_coin,
        bob_coin,
        |k, input, _, coin, tr| match p.sender(k) {
            Party::Alice => p.message(k, full(input, coin / na), 0, coin % na, tr),
            Party::Bob => p.message(k, enc.bob(i, input, prefix), 0, coin, tr),
        },
        |input, _, coin, tr| match p.answerer() {
            Party::Alice => p.answer(full(input, coin / na), 0, coin % na, tr),
            Party::Bob => p.answer(enc.bob(i, input, prefix), 0, coin, tr),
        },
    )
}

/// One protocol for `g` with `ε_D ≤ δ + ½√(2 l₁ ln 2 / n)`, built from `D*`.
/// Returns it with `E I(X_i : M | prefix)`.
pub fn eliminate_for_distribution(
    p: &ClassicalProtocol,
    g: &GameSpec,
    n: usize,
    d: &JointDistribution,
) -> Result<(ClassicalProtocol, f64)> {
    let gn = g.direct_sum(n)?;
    let enc = SumEncoding::new(g.alice_inputs, g.bob_inputs, n)?;
    let dstar = build_product_distribution(d, n)?;
    let pstar = fix_public_coin(p, &gn, &dstar)?.protocol;
    let px = d.marginal_x();
    let nr = Ratio::from_integer((n as i64).into());
    let mut parts = Vec::new();
    let mut info = 0.0;
    for i in 0..n {
        for code in 0..g.alice_inputs.pow(i as u32) {
            let mut prefix = alloc::vec![0; i];
            let mut v = code;
            for j in (0..i).rev() {
                prefix[j] = v % g.alice_inputs;
                v /= g.alice_inputs;
            }
            let w = prefix.iter().fold(Ratio::one() / &nr, |acc, x| acc * &px[*x]);
            if w.is_zero() {
                continue;
            }
            let pp = restrict_to_copy(&pstar, &enc, g, i, &prefix, &px)?;
            let (q, cert) = classical_round_reduce(&pp, g, d)?;
            info += to_f64(&w) * cert.information;
            parts.push((w, q));
        }
    }
    Ok((ClassicalProtocol::mix(&parts)?, info))
}

fn promised_pairs(g: &GameSpec) -> Vec<(usize, usize)> {
    let mut v = Vec::new();
    for x in 0..g.alice_inputs {
        for y in 0..g.bob_inputs {
            if g.promised(x, y) {
                v.push((x, y));
            }
        }
    }
    v
}

/// Eliminates the first round of a protocol for `g⁽ⁿ⁾`. Protocols built for
/// single distributions are mixed with weights from the exact matrix game over
/// input pairs; each round adds the protocol for the current adversarial
/// distribution until the game value meets the bound.
pub fn classical_round_eliminate(
    p: &ClassicalProtocol,
    g: &GameSpec,
    n: usize,
) -> Result<ClassicalElimination> {
    let gn = g.direct_sum(n)?;
    p.check_game(&gn)?;
    if g.alice_inputs.checked_pow(n as u32).is_none_or(|v| v > ELIMINATION_CAP) {
        return Err(Error::Capacity {
            what: "elimination inputs",
            needed: g.alice_inputs.saturating_pow(n as u32),
            limit: ELIMINATION_CAP,
        });
    }
    if p.rounds() == 0 || p.starter != Party::Alice {
        return Err(Error::Precondition("elimination needs a first message from Alice".into()));
    }
    let delta = eval_classical(p, &gn, None)?.worst;
    let l1 = p.lengths[0] as f64;
    let bound = to_f64(&delta) + 0.5 * libm::sqrt(2.0 * l1 * core::f64::consts::LN_2 / n as f64);
    let pairs = promised_pairs(g);
    let uniform = {
        let w = Ratio::new(1.into(), (pairs.len() as i64).into());
        JointDistribution::new(
            g.alice_inputs,
            g.bob_inputs,
            pairs.iter().map(|(x, y)| (*x, *y, w.clone())).collect(),
        )?
    };
    let mut family: Vec<(JointDistribution, ClassicalProtocol, Vec<Ratio>)> = Vec::new();
    let mut information = Vec::new();
    let mut next = Some(uniform);
    let mut solution = None;
    let mut rounds = 0;
    while let Some(d) = next.take() {
        rounds += 1;
        let (q, info) = eliminate_for_distribution(p, g, n, &d)?;
        information.push((info, l1 / n as f64));
        let errs = eval_classical(&q, g, None)?;
        let row = pairs
            .iter()
            .map(|(x, y)| errs.pair(g.bob_inputs, *x, *y).clone())
            .collect();
        family.push((d, q, row));
        let matrix: Vec<Vec<Ratio>> = family.iter().map(|f| f.2.clone()).collect();
        let sol = solve_matrix_game(&matrix, &Ratio::zero())?;
        if to_f64(&sol.value) > bound && rounds < MAX_ROUNDS {
            let points = pairs
                .iter()
                .zip(&sol.columns)
                .filter(|(_, w)| !w.is_zero())
                .map(|((x, y), w)| (*x, *y, w.clone()))
                .collect();
            let dn = JointDistribution::new(g.alice_inputs, g.bob_inputs, points)?;
            if !family.iter().any(|f| f.0 == dn) {
                next = Some(dn);
            }
        }
        solution = Some(sol);
    }
    let sol = solution.ok_or_else(|| Error::Parameters("no protocol was built".into()))?;
    let mut parts = Vec::new();
    let mut distributions = Vec::new();
    for ((d, q, _), w) in family.into_iter().zip(&sol.rows) {
        if !w.is_zero() {
            parts.push((w.clone(), q));
            distributions.push((w.clone(), d));
        }
    }
    let protocol = ClassicalProtocol::mix(&parts)?;
    let worst = eval_classical(&protocol, g, None)?.worst;
    if worst != sol.value {
        return Err(Error::Parameters(format!(
            "mixture error {} differs from the game value {}",
            to_f64(&worst),
            to_f64(&sol.value)
        )));
    }
    let slack = bound - to_f64(&worst);
    Ok(ClassicalElimination {
        protocol,
        delta,
        worst,
        bound,
        slack,
        distributions,
        information,
        game_value: sol.value,
        rounds,
    })
}
