use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use roundlab_core::info::JointDistribution;
use roundlab_core::lp::{simplex, solve_matrix_game};
use roundlab_core::protocol::*;
use roundlab_core::random;
use roundlab_core::rational::{int, ratio, to_f64, Ratio};
use roundlab_core::roundelim::quantum::{check_direct_sum_layout, restrict_quantum_copy};
use roundlab_core::roundelim::*;
use roundlab_core::tensor::*;

const LN2: f64 = core::f64::consts::LN_2;

fn random_game(rng: &mut ChaCha8Rng, e: usize, f: usize) -> GameSpec {
    let t: Vec<u32> = (0..e * f).map(|_| rng.random_range(0..2)).collect();
    GameSpec::new("random", e, f, 2, t).unwrap()
}

fn random_dist(rng: &mut ChaCha8Rng, e: usize, f: usize) -> JointDistribution {
    JointDistribution::from_table(e, f, &random::distribution(e * f, 5, true, rng)).unwrap()
}

fn private_spec(e: usize, f: usize, lengths: Vec<usize>) -> RandomProtocolSpec {
    RandomProtocolSpec {
        shape: Shape {
            starter: Party::Alice,
            lengths,
            alice_inputs: e,
            bob_inputs: f,
            answers: 2,
        },
        public_values: 1,
        max_coin_outcomes: 3,
        granularity: 6,
    }
}

/// Classical reduction keeps the overhead at zero.
fn classical_reduced(p: &ClassicalProtocol) -> Signature {
    Signature::new(0, p.lengths[1..].to_vec(), Party::Bob)
}

#[test]
fn matrix_games() {
    // matching pennies
    let a = vec![vec![int(1), int(0)], vec![int(0), int(1)]];
    let s = solve_matrix_game(&a, &Ratio::zero()).unwrap();
    assert_eq!(s.value, ratio(1, 2));
    assert_eq!(s.rows, vec![ratio(1, 2), ratio(1, 2)]);
    assert_eq!(s.columns, vec![ratio(1, 2), ratio(1, 2)]);
    // dominated row
    let a = vec![vec![int(3), int(2)], vec![int(1), int(0)]];
    let s = solve_matrix_game(&a, &Ratio::zero()).unwrap();
    assert_eq!(s.value, int(1));
    assert_eq!(s.rows, vec![int(0), int(1)]);
    // rock paper scissors with losses as payoffs
    let a: Vec<Vec<f64>> = vec![
        vec![0.0, 1.0, -1.0],
        vec![-1.0, 0.0, 1.0],
        vec![1.0, -1.0, 0.0],
    ];
    let s = solve_matrix_game(&a, &1e-12).unwrap();
    assert!(s.value.abs() < 1e-12);
    for v in s.rows.iter().chain(&s.columns) {
        assert!((v - 1.0 / 3.0).abs() < 1e-12);
    }
    // max x + y, x + 2y ≤ 4, 3x + y ≤ 6
    let (w, duals) = simplex(
        &[vec![int(1), int(2)], vec![int(3), int(1)]],
        &[int(4), int(6)],
        &[int(1), int(1)],
        &Ratio::zero(),
    )
    .unwrap();
    assert_eq!(w, vec![ratio(8, 5), ratio(6, 5)]);
    assert_eq!(duals, vec![ratio(2, 5), ratio(1, 5)]);
}

#[test]
fn product_distribution_examples() {
    let d = JointDistribution::uniform(2, 2).unwrap();
    let one = build_product_distribution(&d, 1).unwrap();
    assert_eq!(one, d);
    let two = build_product_distribution(&d, 2).unwrap();
    assert_eq!(two.support().len(), 16);
    assert!(two.support().iter().all(|s| s.2 == ratio(1, 16)));

    let mut rng = ChaCha8Rng::seed_from_u64(31);
    for n in 1..=3 {
        let d = random_dist(&mut rng, 2, 3);
        let ds = build_product_distribution(&d, n).unwrap();
        let enc = SumEncoding::new(2, 3, n).unwrap();
        let mut marg = vec![Ratio::zero(); 6];
        let mut index = vec![Ratio::zero(); n];
        for (a, b, w) in ds.support() {
            let (i, y, code) = enc.split_bob(*b);
            let xs = enc.digits(*a);
            assert_eq!(code, enc.prefix_code(&xs[..i]));
            marg[xs[i] * 3 + y] += w;
            index[i] += w;
        }
        for x in 0..2 {
            for y in 0..3 {
                assert_eq!(marg[x * 3 + y], d.prob(x, y));
            }
        }
        assert!(index.iter().all(|w| *w == ratio(1, n as i64)));
    }
}

#[test]
fn reduce_zero_information_keeps_error() {
    let mut rng = ChaCha8Rng::seed_from_u64(32);
    for _ in 0..30 {
        let g = random_game(&mut rng, 3, 3);
        let d = random_dist(&mut rng, 3, 3);
        let base = random_protocol(&private_spec(3, 3, vec![1, 1, 1]), &mut rng).unwrap();
        // first message depends on the coin only
        let p = ClassicalProtocol::from_fn(
            base.shape(),
            base.public.clone(),
            base.alice_coin.clone(),
            base.bob_coin.clone(),
            |k, x, pb, c, tr| if k == 0 { (c % 2) as u32 } else { base.message(k, x, pb, c, tr) },
            |x, pb, c, tr| base.answer(x, pb, c, tr),
        )
        .unwrap();
        let Ok((q, cert)) = classical_round_reduce(&p, &g, &d) else {
            continue;
        };
        assert!(cert.information.abs() < 1e-12);
        if matches!(p.alice_coin.dist, CoinDist::Fixed(_)) {
            assert_eq!(cert.exact_before, cert.exact_after);
        }
        assert!(cert.holds());
        assert_eq!(q.signature(), classical_reduced(&p));
    }
}

#[test]
fn reduce_send_x_equality() {
    let g = GameSpec::equality(1);
    let p = ClassicalProtocol::from_fn(
        Shape::for_game(&g, Party::Alice, vec![1]),
        vec![Ratio::one()],
        CoinSpace::trivial(),
        CoinSpace::trivial(),
        |_, x, _, _, _| x as u32,
        |y, _, _, tr| u32::from(tr as usize == y),
    )
    .unwrap();
    let d = JointDistribution::uniform(2, 2).unwrap();
    let (q, cert) = classical_round_reduce(&p, &g, &d).unwrap();
    assert_eq!(q.rounds(), 0);
    assert_eq!(q.signature().to_string(), "[0,0]^B");
    assert_eq!(cert.exact_before, Some(Ratio::zero()));
    assert!((cert.information - 1.0).abs() < 1e-12);
    assert!((cert.bound - 0.5 * (2.0 * LN2).sqrt()).abs() < 1e-12);
    assert!((cert.bound - 0.588705).abs() < 1e-6);
    // Bob sees a uniform message and forfeits half the time
    assert_eq!(cert.exact_after, Some(ratio(1, 2)));
    assert!(cert.holds());
}

/// `ε_Q(x,y) = Σ_m σ(m) ([σ_x(m) = 0] + Σ_{r: msg(x,r) = m} α(r)/σ_x(m) · ε_P(x,y|r))`.
fn stage_one_error(p: &ClassicalProtocol, g: &GameSpec, d: &JointDistribution, x: usize, y: usize) -> Ratio {
    let nm = 1usize << p.lengths[0];
    let px = d.marginal_x();
    let alpha = |x: usize| p.alice_coin.dist(x).to_vec();
    let sx = |x: usize| {
        let mut s = vec![Ratio::zero(); nm];
        for (r, a) in alpha(x).iter().enumerate() {
            s[p.message(0, x, 0, r, 0) as usize] += a;
        }
        s
    };
    let mut sigma = vec![Ratio::zero(); nm];
    for (x2, w) in px.iter().enumerate() {
        for (m, v) in sx(x2).iter().enumerate() {
            sigma[m] += w * v;
        }
    }
    let beta = p.bob_coin.dist(y).to_vec();
    let err_given = |r: usize| {
        let mut e = Ratio::zero();
        for (b, wb) in beta.iter().enumerate() {
            let run = p.run(x, y, 0, r, b);
            if run.answer != g.eval(x, y) {
                e += wb;
            }
        }
        e
    };
    let s = sx(x);
    let mut total = Ratio::zero();
    for m in 0..nm {
        if sigma[m].is_zero() {
            continue;
        }
        if s[m].is_zero() {
            total += &sigma[m];
            continue;
        }
        for (r, a) in alpha(x).iter().enumerate() {
            if p.message(0, x, 0, r, 0) as usize == m {
                total += &sigma[m] * a / &s[m] * err_given(r);
            }
        }
    }
    total
}

#[test]
fn stage_one_marginal_matches_direct_sum() {
    let mut rng = ChaCha8Rng::seed_from_u64(33);
    for _ in 0..40 {
        let e = rng.random_range(2..=3);
        let f = rng.random_range(2..=3);
        let g = random_game(&mut rng, e, f);
        let d = random_dist(&mut rng, e, f);
        let lengths: Vec<usize> = (0..rng.random_range(1..=3)).map(|_| rng.random_range(1..=2)).collect();
        let p = random_protocol(&private_spec(e, f, lengths), &mut rng).unwrap();
        let (q, _) = classical_round_reduce(&p, &g, &d).unwrap();
        let r = eval_classical(&q, &g, None).unwrap();
        for x in 0..e {
            for y in 0..f {
                assert_eq!(r.pair(f, x, y), &stage_one_error(&p, &g, &d, x, y));
            }
        }
    }
}

#[test]
fn random_classical_certificates_hold() {
    let mut rng = ChaCha8Rng::seed_from_u64(34);
    let mut checked = 0;
    while checked < 100 {
        let e = rng.random_range(2..=4);
        let f = rng.random_range(2..=4);
        let g = random_game(&mut rng, e, f);
        let d = random_dist(&mut rng, e, f);
        let t = rng.random_range(1..=3);
        let lengths: Vec<usize> = (0..t)
            .map(|k| if k == 0 { rng.random_range(1..=2) } else { rng.random_range(1..=2) })
            .collect();
        let p = random_protocol(&private_spec(e, f, lengths), &mut rng).unwrap();
        let (q, cert) = classical_round_reduce(&p, &g, &d).unwrap();
        assert!(cert.slack >= -CERT_TOL, "slack {}", cert.slack);
        assert_eq!(cert.after, classical_reduced(&p));
        assert_eq!(q.signature(), cert.after);
        let direct = distributional_error(&q, &g, &d).unwrap();
        assert_eq!(Some(direct), cert.exact_after);
        checked += 1;
    }
}

#[test]
fn reduce_rejects_bad_inputs() {
    let g = GameSpec::equality(1);
    let d = JointDistribution::uniform(2, 2).unwrap();
    let zero = ClassicalProtocol::from_fn(
        Shape::for_game(&g, Party::Alice, vec![]),
        vec![Ratio::one()],
        CoinSpace::trivial(),
        CoinSpace::trivial(),
        |_, _, _, _, _| 0,
        |_, _, _, _| 0,
    )
    .unwrap();
    assert!(classical_round_reduce(&zero, &g, &d).is_err());
    let public = ClassicalProtocol::from_fn(
        Shape::for_game(&g, Party::Alice, vec![1]),
        vec![ratio(1, 2), ratio(1, 2)],
        CoinSpace::trivial(),
        CoinSpace::trivial(),
        |_, x, _, _, _| x as u32,
        |_, _, _, _| 0,
    )
    .unwrap();
    assert!(classical_round_reduce(&public, &g, &d).is_err());
}

/// Alice sends `x_j` for a public uniform `j`; Bob answers when `j = i` and
/// guesses with a public bit otherwise.
fn index_protocol(n: usize) -> (ClassicalProtocol, GameSpec, GameSpec) {
    let g = GameSpec::equality(1);
    let gn = g.direct_sum(n).unwrap();
    let enc = SumEncoding::new(2, 2, n).unwrap();
    let p = ClassicalProtocol::from_fn(
        Shape::for_game(&gn, Party::Alice, vec![1]),
        vec![ratio(1, 2 * n as i64); 2 * n],
        CoinSpace::trivial(),
        CoinSpace::trivial(),
        move |_, x, pb, _, _| enc.digits(x)[pb / 2] as u32,
        move |b, pb, _, tr| {
            let (i, y, _) = enc.split_bob(b);
            if pb / 2 == i {
                u32::from(tr as usize == y)
            } else {
                (pb % 2) as u32
            }
        },
    )
    .unwrap();
    (p, g, gn)
}

#[test]
fn eliminate_index_protocol_for_equality() {
    let (p, g, gn) = index_protocol(4);
    let delta = eval_classical(&p, &gn, None).unwrap().worst;
    assert_eq!(delta, ratio(3, 8));
    let out = classical_round_eliminate(&p, &g, 4).unwrap();
    assert_eq!(out.delta, delta);
    let bound = 0.375 + 0.5 * (2.0 * LN2 / 4.0).sqrt();
    assert!((out.bound - bound).abs() < 1e-12);
    assert_eq!(out.protocol.rounds(), 0);
    let worst = eval_classical(&out.protocol, &g, None).unwrap().worst;
    assert_eq!(worst, out.worst);
    assert!(to_f64(&worst) <= bound + 1e-7);
    for (info, cap) in &out.information {
        assert!(*info <= cap + 1e-7);
    }

    // every product distribution on a grid of eighths
    for a in 0..=8 {
        for b in 0..=8 {
            let px = [ratio(a, 8), ratio(8 - a, 8)];
            let py = [ratio(b, 8), ratio(8 - b, 8)];
            let table: Vec<Ratio> = (0..4).map(|k| &px[k / 2] * &py[k % 2]).collect();
            let d = JointDistribution::from_table(2, 2, &table).unwrap();
            let e = distributional_error(&out.protocol, &g, &d).unwrap();
            assert!(to_f64(&e) <= bound + 1e-7);
        }
    }
}

#[test]
fn eliminate_with_empty_first_message_keeps_delta() {
    let g = GameSpec::equality(1);
    let n = 2;
    let gn = g.direct_sum(n).unwrap();
    let p = ClassicalProtocol::from_fn(
        Shape::for_game(&gn, Party::Alice, vec![0]),
        vec![ratio(1, 2), ratio(1, 2)],
        CoinSpace::trivial(),
        CoinSpace::trivial(),
        |_, _, _, _, _| 0,
        |_, pb, _, _| pb as u32,
    )
    .unwrap();
    let out = classical_round_eliminate(&p, &g, n).unwrap();
    assert_eq!(out.delta, ratio(1, 2));
    assert_eq!(out.worst, out.delta);
    assert!(out.slack.abs() < 1e-12);
}

#[test]
fn eliminate_random_protocols() {
    let mut rng = ChaCha8Rng::seed_from_u64(35);
    for _ in 0..6 {
        let g = random_game(&mut rng, 2, 2);
        let n = 2;
        let gn = g.direct_sum(n).unwrap();
        let spec = RandomProtocolSpec {
            shape: Shape::for_game(&gn, Party::Alice, vec![1, 1]),
            public_values: 2,
            max_coin_outcomes: 2,
            granularity: 4,
        };
        let p = random_protocol(&spec, &mut rng).unwrap();
        let out = classical_round_eliminate(&p, &g, n).unwrap();
        assert!(out.slack >= -1e-7, "slack {}", out.slack);
        assert_eq!(out.protocol.signature(), classical_reduced(&p));
    }
}

#[test]
fn eliminate_checks_shape() {
    let g = GameSpec::equality(1);
    let (p, _, _) = index_protocol(3);
    assert!(classical_round_eliminate(&p, &g, 4).is_err());
    assert!(classical_round_eliminate(&p, &GameSpec::equality(4), 6).is_err());
}

/// Alice sends `|0⟩`; Bob answers with an input-controlled unitary on `M1 G`.
fn fixed_message_protocol(rng: &mut ChaCha8Rng, g: &GameSpec, two_rounds: bool) -> QuantumProtocol {
    let mut regs = vec![
        Register::new("X", 1, Party::Alice),
        Register::new("Y", 1, Party::Bob),
        Register::new("M1", 1, Party::Alice),
    ];
    let answerer = if two_rounds { Party::Alice } else { Party::Bob };
    if two_rounds {
        regs.push(Register::new("M2", 1, Party::Bob));
    }
    regs.push(Register::new("G", 1, answerer));
    let layout = RegisterLayout::new(regs).unwrap();
    let mut rounds = vec![QuantumRound {
        sender: Party::Alice,
        ops: vec![],
        send: vec!["M1".into()],
    }];
    let bu = |rng: &mut ChaCha8Rng, d| (0..2).map(|_| Branch::Unitary(random::unitary(d, rng))).collect();
    let finale = if two_rounds {
        rounds.push(QuantumRound {
            sender: Party::Bob,
            ops: vec![Gate::controlled(&["Y"], bu(rng, 4), &["M1", "M2"])],
            send: vec!["M2".into()],
        });
        Finale {
            party: Party::Alice,
            ops: vec![Gate::controlled(&["X"], bu(rng, 4), &["M2", "G"])],
            answer: vec!["G".into()],
        }
    } else {
        Finale {
            party: Party::Bob,
            ops: vec![Gate::controlled(&["Y"], bu(rng, 4), &["M1", "G"])],
            answer: vec!["G".into()],
        }
    };
    let p = QuantumProtocol {
        layout,
        starter: Party::Alice,
        alice_input: vec!["X".into()],
        alice_values: (0..g.alice_inputs).map(|x| vec![x]).collect(),
        bob_input: vec!["Y".into()],
        bob_values: (0..g.bob_inputs).map(|y| vec![y]).collect(),
        prep: vec![],
        rounds,
        safe: vec![],
        overhead: 0,
        finale,
        answers: 2,
    };
    p.validate().unwrap();
    p
}

#[test]
fn quantum_fixed_message_keeps_error() {
    let mut rng = ChaCha8Rng::seed_from_u64(36);
    for two in [false, true] {
        for _ in 0..5 {
            let g = random_game(&mut rng, 2, 2);
            let d = random_dist(&mut rng, 2, 2);
            let p = fixed_message_protocol(&mut rng, &g, two);
            let (q, cert) = quantum_round_reduce(&p, &g, &d).unwrap();
            assert!(cert.information.abs() < 1e-9);
            assert!((cert.error_after - cert.error_before).abs() < 1e-8);
            assert_eq!(q.signature().unwrap(), p.signature().unwrap().reduced().unwrap());
            // same per-input errors, not just on average
            for x in 0..2 {
                for y in 0..2 {
                    let a = p.pair_error(&g, x, y).unwrap();
                    let b = q.pair_error(&g, x, y).unwrap();
                    assert!((a - b).abs() < 1e-8);
                }
            }
        }
    }
}

#[test]
fn random_quantum_certificates_hold() {
    let mut rng = ChaCha8Rng::seed_from_u64(37);
    let mut checked = 0;
    while checked < 40 {
        let g = random_game(&mut rng, 2, 2);
        let d = random_dist(&mut rng, 2, 2);
        let t = rng.random_range(1..=3);
        let lengths: Vec<usize> = (0..t).map(|k| if k == 0 { rng.random_range(1..=2) } else { 1 }).collect();
        let overhead = rng.random_range(0..=1);
        let work = [rng.random_range(0..=1), rng.random_range(0..=1)];
        let spec = RandomQuantumSpec::for_game(&g, lengths.clone(), overhead, work);
        if spec.qubits() + 1 + lengths[0] + overhead > MAX_QUBITS {
            continue;
        }
        let p = random_quantum_protocol(&spec, &mut rng).unwrap();
        assert!(verify_safe(&p).unwrap().pass);
        let (q, cert) = quantum_round_reduce(&p, &g, &d).unwrap();
        assert!(cert.slack >= -CERT_TOL, "slack {}", cert.slack);
        let sig = p.signature().unwrap().reduced().unwrap();
        assert_eq!(cert.after, sig);
        assert_eq!(sig.overhead, overhead + lengths[0]);
        assert!(verify_safe(&q).unwrap().pass);
        assert!(verify_secure(&q).unwrap().pass);
        checked += 1;
    }
}

#[test]
fn quantum_single_round_becomes_bob_only() {
    let mut rng = ChaCha8Rng::seed_from_u64(38);
    let g = random_game(&mut rng, 2, 2);
    let d = random_dist(&mut rng, 2, 2);
    let spec = RandomQuantumSpec::for_game(&g, vec![1], 1, [1, 1]);
    let p = random_quantum_protocol(&spec, &mut rng).unwrap();
    let (q, cert) = quantum_round_reduce(&p, &g, &d).unwrap();
    assert_eq!(q.rounds(), 0);
    assert_eq!(q.finale.party, Party::Bob);
    assert_eq!(cert.after.to_string(), "[0,2]^B");
    assert!(cert.holds());
}

fn two_round_classical(rng: &mut ChaCha8Rng, g: &GameSpec) -> ClassicalProtocol {
    let spec = RandomProtocolSpec {
        shape: Shape::for_game(g, Party::Alice, vec![1, 1]),
        public_values: 1,
        max_coin_outcomes: 2,
        granularity: 4,
    };
    loop {
        let p = random_protocol(&spec, rng).unwrap();
        if p.alice_coin.forfeit.is_none() && p.bob_coin.forfeit.is_none() {
            return p;
        }
    }
}

#[test]
fn embedded_classical_reduction_matches_pipelines() {
    let mut rng = ChaCha8Rng::seed_from_u64(39);
    for _ in 0..10 {
        let g = random_game(&mut rng, 2, 2);
        let d = random_dist(&mut rng, 2, 2);
        let p = two_round_classical(&mut rng, &g);
        let qp = embed_classical(&p).unwrap().parts.remove(0).1;
        let (cq, ccert) = classical_round_reduce(&p, &g, &d).unwrap();
        let (qq, qcert) = quantum_round_reduce(&qp, &g, &d).unwrap();
        assert!(ccert.holds());
        assert!(qcert.slack >= -CERT_TOL, "slack {}", qcert.slack);
        assert!((ccert.error_before - qcert.error_before).abs() < 1e-9);
        assert!((ccert.information - qcert.information).abs() < 1e-9);
        let gap = qcert.bound - ccert.bound;
        let classical_after = to_f64(&distributional_error(&cq, &g, &d).unwrap());
        assert!(qcert.error_after <= classical_after + gap + 1e-7);
        assert!(verify_safe(&qq).unwrap().pass);
    }
}

#[test]
fn restricted_copies_fold_the_prefix() {
    let mut rng = ChaCha8Rng::seed_from_u64(40);
    let g = random_game(&mut rng, 2, 2);
    let spec = RandomQuantumSpec::direct_sum(&g, 2, vec![1], 0, [0, 0]).unwrap();
    let p = random_quantum_protocol(&spec, &mut rng).unwrap();
    let enc = SumEncoding::new(2, 2, 2).unwrap();
    check_direct_sum_layout(&p, &enc).unwrap();
    let px = [ratio(1, 4), ratio(3, 4)];
    // copy 2 with prefix x₁: Bob's view is (i = 1, y, x₁), Alice fixes x₁
    for x1 in 0..2 {
        let pp = restrict_quantum_copy(&p, &enc, 1, &[x1], &px).unwrap();
        for x in 0..2 {
            for y in 0..2 {
                let a = pp.answer_distribution(x, y).unwrap();
                let b = p.answer_distribution(enc.join(&[x1, x]), enc.bob(1, y, &[x1])).unwrap();
                for (u, v) in a.iter().zip(&b) {
                    assert!((u - v).abs() < 1e-9);
                }
            }
        }
    }
    // copy 1: x₂ is averaged with weights px
    let pp = restrict_quantum_copy(&p, &enc, 0, &[], &px).unwrap();
    for x in 0..2 {
        for y in 0..2 {
            let a = pp.answer_distribution(x, y).unwrap();
            let mut b = vec![0.0; a.len()];
            for (x2, w) in px.iter().enumerate() {
                let r = p.answer_distribution(enc.join(&[x, x2]), enc.bob(0, y, &[])).unwrap();
                for (s, v) in b.iter_mut().zip(r) {
                    *s += to_f64(w) * v;
                }
            }
            for (u, v) in a.iter().zip(&b) {
                assert!((u - v).abs() < 1e-9);
            }
        }
    }
}

#[test]
fn quantum_eliminate_trivial_protocol() {
    let mut rng = ChaCha8Rng::seed_from_u64(41);
    let g = GameSpec::equality(1);
    let gn = g.direct_sum(2).unwrap();
    // first message |0⟩, Bob answers with a fixed random unitary on G
    let spec = RandomQuantumSpec::direct_sum(&g, 2, vec![1], 0, [0, 0]).unwrap();
    let mut p = random_quantum_protocol(&spec, &mut rng).unwrap();
    p.rounds[0].ops.clear();
    let u = random::unitary(2, &mut rng);
    p.finale.ops = vec![Gate::unitary(u, &["G"])];
    let p = PublicCoinQuantumProtocol::from(p);
    let out = quantum_round_eliminate(&p, &g, 2).unwrap();
    let delta = eval_quantum(&p, &gn, None).unwrap().worst;
    assert!((out.delta - delta).abs() < 1e-12);
    assert!((out.worst - delta).abs() < 1e-8);
    assert_eq!(out.protocol.signature().unwrap().to_string(), "[0,1]^B");
}

#[test]
fn quantum_eliminate_embedded_index_protocol() {
    let (p, g, gn) = index_protocol(4);
    let embedded = embed_classical(&p).unwrap();
    let parts = embedded
        .parts
        .into_iter()
        .map(|(w, q)| {
            let q = q
                .split_register("X", &[("X1", 1), ("X2", 1), ("X3", 1), ("X4", 1)])
                .unwrap()
                .split_register("Y", &[("I", 2), ("YB", 1), ("XB", 3)])
                .unwrap();
            (w, q)
        })
        .collect();
    let p = PublicCoinQuantumProtocol::new(parts).unwrap();
    let delta = eval_quantum(&p, &gn, None).unwrap().worst;
    assert!((delta - 0.375).abs() < 1e-9);
    let out = quantum_round_eliminate(&p, &g, 4).unwrap();
    let bound = 0.375 + (LN2).powf(0.25);
    assert!((out.bound - bound).abs() < 1e-9);
    assert!((out.bound - out.delta - 0.912).abs() < 1e-3);
    assert!(out.slack >= -1e-7, "slack {}", out.slack);
    for (info, cap) in &out.information {
        assert!(*info <= cap + 1e-7, "information {info} above {cap}");
    }
    for c in &out.certificates {
        assert!(c.holds());
    }
    for (_, q) in &out.protocol.parts {
        assert!(verify_safe(q).unwrap().pass);
        assert!(verify_secure(q).unwrap().pass);
    }
}

#[test]
fn quantum_eliminate_random_protocols() {
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    for _ in 0..4 {
        let g = random_game(&mut rng, 2, 2);
        let spec = RandomQuantumSpec::direct_sum(&g, 2, vec![1, 1], 0, [0, 1]).unwrap();
        let p = PublicCoinQuantumProtocol::from(random_quantum_protocol(&spec, &mut rng).unwrap());
        let out = quantum_round_eliminate(&p, &g, 2).unwrap();
        assert!(out.slack >= -1e-7, "slack {}", out.slack);
        assert_eq!(out.protocol.signature().unwrap(), p.signature().unwrap().reduced().unwrap());
    }
}
