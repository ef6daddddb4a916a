use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use roundlab_core::info::{encoding_mutual_information, Codewords, JointDistribution};
use roundlab_core::protocol::*;
use roundlab_core::random;
use roundlab_core::rational::{int, ratio, to_f64, Ratio};
use roundlab_core::tensor::matrix::unitary_with_first_column;
use roundlab_core::tensor::*;

fn xor_branch(bits: usize, v: usize) -> Branch {
    Branch::Permutation((0..1usize << bits).map(|m| m ^ v).collect())
}

fn send_x_eq(bits: usize) -> (ClassicalProtocol, GameSpec) {
    let g = GameSpec::equality(bits);
    let p = ClassicalProtocol::from_fn(
        Shape::for_game(&g, Party::Alice, vec![bits]),
        vec![Ratio::one()],
        CoinSpace::trivial(),
        CoinSpace::trivial(),
        |_, x, _, _, _| x as u32,
        |y, _, _, tr| u32::from(tr as usize == y),
    )
    .unwrap();
    (p, g)
}

#[test]
fn sending_x_solves_equality() {
    let (p, g) = send_x_eq(2);
    let r = eval_classical(&p, &g, Some(&JointDistribution::uniform(4, 4).unwrap())).unwrap();
    assert!(r.worst.is_zero());
    assert_eq!(r.distributional, Some(Ratio::zero()));
    assert_eq!(r.communication, [2, 0]);
    assert_eq!(p.signature().to_string(), "[1,0,2]^A");
}

#[test]
fn fair_coin_answer_has_error_half() {
    let g = GameSpec::equality(1);
    let p = ClassicalProtocol::from_fn(
        Shape::for_game(&g, Party::Alice, vec![]),
        vec![Ratio::one()],
        CoinSpace::trivial(),
        CoinSpace::fixed(vec![ratio(1, 2), ratio(1, 2)]),
        |_, _, _, _, _| 0,
        |_, _, coin, _| coin as u32,
    )
    .unwrap();
    assert_eq!(p.answerer(), Party::Bob);
    let r = eval_classical(&p, &g, None).unwrap();
    assert!(r.per_input.iter().all(|e| *e == ratio(1, 2)));
}

fn random_spec(e: usize, f: usize, lengths: Vec<usize>, public: usize) -> RandomProtocolSpec {
    RandomProtocolSpec {
        shape: Shape {
            starter: Party::Alice,
            lengths,
            alice_inputs: e,
            bob_inputs: f,
            answers: 2,
        },
        public_values: public,
        max_coin_outcomes: 3,
        granularity: 7,
    }
}

fn random_game(rng: &mut ChaCha8Rng, e: usize, f: usize) -> GameSpec {
    let t: Vec<u32> = (0..e * f).map(|_| rng.random_range(0..2)).collect();
    GameSpec::new("random", e, f, 2, t).unwrap()
}

fn random_dist(rng: &mut ChaCha8Rng, e: usize, f: usize) -> JointDistribution {
    JointDistribution::from_table(e, f, &random::distribution(e * f, 5, true, rng)).unwrap()
}

#[test]
fn exact_error_matches_monte_carlo() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let g = random_game(&mut rng, 3, 3);
    let d = random_dist(&mut rng, 3, 3);
    let p = random_protocol(&random_spec(3, 3, vec![1, 2], 2), &mut rng).unwrap();
    let exact = to_f64(&eval_classical(&p, &g, Some(&d)).unwrap().distributional.unwrap());
    let trials = 100_000;
    let mut bad = 0u32;
    let support = d.support();
    let w: Vec<f64> = support.iter().map(|s| to_f64(&s.2)).collect();
    for _ in 0..trials {
        let mut u: f64 = rng.random();
        let mut k = 0;
        while k + 1 < w.len() && u >= w[k] {
            u -= w[k];
            k += 1;
        }
        let (x, y, _) = &support[k];
        let r = p.sample(*x, *y, &mut rng);
        if r.forfeited || r.answer != g.eval(*x, *y) {
            bad += 1;
        }
    }
    let est = bad as f64 / trials as f64;
    let sigma = (exact * (1.0 - exact) / trials as f64).sqrt();
    assert!((est - exact).abs() <= 3.0 * sigma + 1e-12, "{est} vs {exact}");
}

#[test]
fn evaluation_is_independent_of_enumeration_order() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for _ in 0..20 {
        let g = random_game(&mut rng, 3, 2);
        let p = random_protocol(&random_spec(3, 2, vec![1, 1], 3), &mut rng).unwrap();
        // relabel Alice's coin outcomes in reverse
        let n = p.alice_coin.outcomes;
        let rev = |c: usize| n - 1 - c;
        let CoinDist::Fixed(d) = &p.alice_coin.dist else { unreachable!() };
        let q = ClassicalProtocol::from_fn(
            p.shape(),
            p.public.clone(),
            CoinSpace::fixed(d.iter().rev().cloned().collect()),
            p.bob_coin.clone(),
            |k, input, pb, coin, tr| match p.sender(k) {
                Party::Alice => p.message(k, input, pb, rev(coin), tr),
                Party::Bob => p.message(k, input, pb, coin, tr),
            },
            |input, pb, coin, tr| match p.answerer() {
                Party::Alice => p.answer(input, pb, rev(coin), tr),
                Party::Bob => p.answer(input, pb, coin, tr),
            },
        )
        .unwrap();
        assert_eq!(
            eval_classical(&p, &g, None).unwrap().per_input,
            eval_classical(&q, &g, None).unwrap().per_input
        );
    }
}

#[test]
fn public_coin_error_is_convex_combination() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for _ in 0..20 {
        let g = random_game(&mut rng, 2, 3);
        let d = random_dist(&mut rng, 2, 3);
        let p = random_protocol(&random_spec(2, 3, vec![2], 3), &mut rng).unwrap();
        let total = eval_classical(&p, &g, Some(&d)).unwrap().distributional.unwrap();
        let fixed = fix_public_coin(&p, &g, &d).unwrap();
        let mut sum = Ratio::zero();
        for (c, w) in p.public.iter().enumerate() {
            sum += w * &fixed.errors[c];
        }
        assert_eq!(sum, total);
        assert!(fixed.error <= total);
        assert!(!fixed.protocol.has_public_coin());
    }
}

#[test]
fn fixing_the_coin_picks_the_better_value() {
    let g = GameSpec::equality(1);
    let d = JointDistribution::uniform(2, 2).unwrap();
    // coin 0 errs with probability 1/5, coin 1 with 2/5 (through Bob's private coin)
    let bob = CoinSpace {
        outcomes: 5,
        dist: CoinDist::Fixed(vec![ratio(1, 5); 5]),
        forfeit: None,
    };
    let p = ClassicalProtocol::from_fn(
        Shape::for_game(&g, Party::Alice, vec![1]),
        vec![ratio(1, 2), ratio(1, 2)],
        CoinSpace::trivial(),
        bob,
        |_, x, _, _, _| x as u32,
        |y, pb, coin, tr| {
            let right = u32::from(tr as usize == y);
            if coin < pb + 1 {
                1 - right
            } else {
                right
            }
        },
    )
    .unwrap();
    let f = fix_public_coin(&p, &g, &d).unwrap();
    assert_eq!(f.errors, vec![ratio(1, 5), ratio(2, 5)]);
    assert_eq!(f.coin, 0);
    assert_eq!(f.error, ratio(1, 5));
    // a single-valued coin is returned unchanged
    let (q, g2) = send_x_eq(1);
    assert_eq!(fix_public_coin(&q, &g2, &d).unwrap().protocol, q);
}

#[test]
fn first_message_encodings() {
    let (p, g) = send_x_eq(1);
    let d = JointDistribution::uniform(2, 2).unwrap();
    let e = first_message_encoding(&p, &g, &d).unwrap();
    assert_eq!(e.codewords, vec![vec![int(1), int(0)], vec![int(0), int(1)]]);
    assert!((encoding_mutual_information(&e.encoding).unwrap() - 1.0).abs() < 1e-12);

    let constant = ClassicalProtocol::from_fn(
        Shape::for_game(&g, Party::Alice, vec![1]),
        vec![Ratio::one()],
        CoinSpace::fixed(vec![ratio(1, 3), ratio(2, 3)]),
        CoinSpace::trivial(),
        |_, _, _, coin, _| coin as u32,
        |_, _, _, _| 0,
    )
    .unwrap();
    let e = first_message_encoding(&constant, &g, &d).unwrap();
    assert!(encoding_mutual_information(&e.encoding).unwrap().abs() < 1e-12);
    let zero_round = ClassicalProtocol::from_fn(
        Shape::for_game(&g, Party::Alice, vec![]),
        vec![Ratio::one()],
        CoinSpace::trivial(),
        CoinSpace::trivial(),
        |_, _, _, _, _| 0,
        |_, _, _, _| 0,
    )
    .unwrap();
    assert!(first_message_encoding(&zero_round, &g, &d).is_err());
}

#[test]
fn mixture_matches_components() {
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    let g = random_game(&mut rng, 2, 2);
    let parts: Vec<(Ratio, ClassicalProtocol)> = [ratio(1, 3), ratio(2, 3)]
        .into_iter()
        .map(|w| (w, random_protocol(&random_spec(2, 2, vec![1, 1], 2), &mut rng).unwrap()))
        .collect();
    let m = ClassicalProtocol::mix(&parts).unwrap();
    let em = eval_classical(&m, &g, None).unwrap();
    for x in 0..2 {
        for y in 0..2 {
            let mut want = Ratio::zero();
            for (w, q) in &parts {
                want += w * q.pair_error(&g, x, y).0;
            }
            assert_eq!(*em.pair(2, x, y), want);
        }
    }
}

#[test]
fn table_validation() {
    let g = GameSpec::equality(1);
    let r = ClassicalProtocol::from_fn(
        Shape::for_game(&g, Party::Alice, vec![1]),
        vec![Ratio::one()],
        CoinSpace::trivial(),
        CoinSpace::trivial(),
        |_, _, _, _, _| 2,
        |_, _, _, _| 0,
    );
    assert!(matches!(r, Err(roundlab_core::Error::BitLength { .. })));
    let (p, _) = send_x_eq(1);
    assert!(eval_classical(&p, &GameSpec::equality(2), None).is_err());
    assert!(matches!(
        eval_classical_capped(&p, &GameSpec::equality(1), None, 2),
        Err(roundlab_core::Error::Capacity { .. })
    ));
}

#[test]
fn direct_sum_encoding() {
    let g = GameSpec::equality(1);
    let gn = g.direct_sum(3).unwrap();
    let enc = SumEncoding::new(2, 2, 3).unwrap();
    assert_eq!(gn.alice_inputs, 8);
    assert_eq!(gn.bob_inputs, 3 * 2 * 4);
    for a in 0..8 {
        let xs = enc.digits(a);
        assert_eq!(enc.join(&xs), a);
        for i in 0..3 {
            for y in 0..2 {
                let b = enc.bob(i, y, &xs[..i]);
                assert_eq!(enc.split_bob(b), (i, y, enc.prefix_of(a, i)));
                assert!(gn.promised(a, b));
                assert_eq!(gn.eval(a, b), g.eval(xs[i], y));
            }
        }
    }
}

#[test]
fn signature_arithmetic() {
    let s = Signature::new(1, vec![2, 3, 4], Party::Alice);
    assert_eq!(s.to_string(), "[3,1,2,3,4]^A");
    assert_eq!(s.reduced().unwrap().to_string(), "[2,3,3,4]^B");
    let t = s.append_round(5);
    assert_eq!(t.rounds, 4);
    assert_eq!(t.lengths, vec![2, 3, 4, 5]);
    assert_eq!(t.overhead, 1);
    assert!(Signature::new(0, vec![], Party::Bob).reduced().is_none());
}

#[test]
fn embedded_protocols_match_classical_evaluation() {
    let mut rng = ChaCha8Rng::seed_from_u64(15);
    for k in 0..30 {
        let lengths = match k % 3 {
            0 => vec![1],
            1 => vec![1, 1],
            _ => vec![1, 1, 1],
        };
        let g = random_game(&mut rng, 3, 2);
        let mut spec = random_spec(3, 2, lengths, 1 + k % 2);
        spec.max_coin_outcomes = 2;
        let p = random_protocol(&spec, &mut rng).unwrap();
        let q = embed_classical(&p).unwrap();
        let ec = eval_classical(&p, &g, None).unwrap();
        let eq = eval_quantum(&q, &g, None).unwrap();
        for (a, b) in ec.per_input.iter().zip(&eq.per_input) {
            assert!((to_f64(a) - b).abs() < 1e-9);
        }
        for (_, part) in &q.parts {
            assert!(verify_secure(part).unwrap().pass);
            assert!(verify_safe(part).unwrap().pass);
        }
    }
}

fn layout(regs: &[(&str, usize, Party)]) -> RegisterLayout {
    RegisterLayout::new(regs.iter().map(|(n, q, o)| Register::new(*n, *q, *o)).collect()).unwrap()
}

/// Alice sends `M`, Bob measures `G` after `ops`.
fn one_round(
    extra: &[(&str, usize, Party)],
    alice_ops: Vec<Gate>,
    send: &[&str],
    safe: &[&str],
    bob_ops: Vec<Gate>,
) -> QuantumProtocol {
    let mut regs = vec![("X", 1, Party::Alice), ("Y", 1, Party::Bob), ("G", 1, Party::Bob)];
    regs.extend_from_slice(extra);
    let l = layout(&regs);
    let overhead = l.qubits_of(safe).unwrap();
    let p = QuantumProtocol {
        layout: l,
        starter: Party::Alice,
        alice_input: vec!["X".into()],
        alice_values: vec![vec![0], vec![1]],
        bob_input: vec!["Y".into()],
        bob_values: vec![vec![0], vec![1]],
        prep: vec![],
        rounds: vec![QuantumRound {
            sender: Party::Alice,
            ops: alice_ops,
            send: send.iter().map(|s| s.to_string()).collect(),
        }],
        safe: safe.iter().map(|s| s.to_string()).collect(),
        overhead,
        finale: Finale {
            party: Party::Bob,
            ops: bob_ops,
            answer: vec!["G".into()],
        },
        answers: 2,
    };
    p.validate().unwrap();
    p
}

fn xor_game() -> GameSpec {
    GameSpec::from_fn("XOR", 2, 2, 2, |x, y| (x ^ y) as u32).unwrap()
}

#[test]
fn plus_state_answer_has_error_half() {
    let p = one_round(
        &[("M", 1, Party::Alice)],
        vec![],
        &["M"],
        &[],
        vec![Gate::unitary(gates::hadamard(), &["G"])],
    );
    let r = eval_quantum(&p.into(), &xor_game(), None).unwrap();
    assert!(r.per_input.iter().all(|e| (e - 0.5).abs() < 1e-12));
}

#[test]
fn xor_by_cnot_exchange() {
    let cx = |c: &str, t: &str| Gate::controlled(&[c], vec![Branch::Identity, xor_branch(1, 1)], &[t]);
    let p = one_round(
        &[("M", 1, Party::Alice)],
        vec![cx("X", "M")],
        &["M"],
        &[],
        vec![cx("M", "G"), cx("Y", "G")],
    );
    let r = eval_quantum(&p.clone().into(), &xor_game(), None).unwrap();
    assert!(r.worst.abs() < 1e-12);
    assert!(verify_secure(&p).unwrap().pass);
}

#[test]
fn safety_verifier_cases() {
    let cx = |c: &str, t: &str| Gate::controlled(&[c], vec![Branch::Identity, xor_branch(1, 1)], &[t]);
    let fixed = one_round(
        &[("M", 1, Party::Alice), ("S", 1, Party::Alice)],
        vec![cx("X", "M")],
        &["M", "S"],
        &["S"],
        vec![],
    );
    let r = verify_safe(&fixed).unwrap();
    assert!(r.pass && r.max_deviation < 1e-12);
    assert_eq!(fixed.signature().unwrap().to_string(), "[1,1,1]^A");

    let copy = one_round(
        &[("M", 1, Party::Alice), ("S", 1, Party::Alice)],
        vec![cx("X", "S")],
        &["M", "S"],
        &["S"],
        vec![],
    );
    let r = verify_safe(&copy).unwrap();
    assert!(!r.pass);
    assert!((r.max_deviation - 2.0).abs() < 1e-9);

    // S is half of a Bell pair whose other half Alice rotates depending on X
    let h_then_cx = vec![
        Gate::unitary(gates::hadamard(), &["S"]),
        cx("S", "A"),
        Gate::controlled(&["X"], vec![Branch::Identity, Branch::Unitary(gates::hadamard())], &["A"]),
        cx("X", "M"),
    ];
    let pair = one_round(
        &[("M", 1, Party::Alice), ("S", 1, Party::Alice), ("A", 1, Party::Alice)],
        h_then_cx,
        &["M", "S"],
        &["S"],
        vec![],
    );
    let r = verify_safe(&pair).unwrap();
    assert!(r.pass, "{r:?}");
}

#[test]
fn security_verifier_cases() {
    let work = one_round(
        &[("M", 1, Party::Alice)],
        vec![Gate::unitary(gates::hadamard(), &["M"])],
        &["M"],
        &[],
        vec![],
    );
    assert!(verify_secure(&work).unwrap().pass);

    let mut hadamard_x = work.clone();
    hadamard_x.rounds[0].ops = vec![Gate::unitary(gates::hadamard(), &["X"])];
    assert!(hadamard_x.validate().is_err());
    let r = verify_secure(&hadamard_x).unwrap();
    assert!(!r.pass, "{r:?}");

    let mut sent = work.clone();
    sent.rounds[0].send = vec!["M".into(), "X".into()];
    assert!(!verify_secure(&sent).unwrap().pass);

    let control = one_round(
        &[("M", 1, Party::Alice)],
        vec![Gate::controlled(
            &["X"],
            vec![Branch::Unitary(gates::hadamard()), Branch::Unitary(gates::phase(0.3))],
            &["M"],
        )],
        &["M"],
        &[],
        vec![],
    );
    assert!(verify_secure(&control).unwrap().pass);
}

#[test]
fn ownership_is_enforced() {
    let mut p = one_round(&[("M", 1, Party::Alice)], vec![], &["M"], &[], vec![]);
    p.rounds[0].ops = vec![Gate::unitary(gates::hadamard(), &["G"])];
    assert!(p.validate().is_err());
    let mut p = one_round(&[("M", 1, Party::Alice)], vec![], &["M"], &[], vec![]);
    p.finale.ops = vec![Gate::unitary(gates::hadamard(), &["X"])];
    assert!(p.validate().is_err());
}

#[test]
fn quantum_first_message_matches_fed_superposition() {
    let mut rng = ChaCha8Rng::seed_from_u64(16);
    for _ in 0..20 {
        let u0 = random::unitary(4, &mut rng);
        let u1 = random::unitary(4, &mut rng);
        let p = one_round(
            &[("M", 1, Party::Alice), ("A", 1, Party::Alice)],
            vec![Gate::controlled(&["X"], vec![Branch::Unitary(u0), Branch::Unitary(u1)], &["M", "A"])],
            &["M"],
            &[],
            vec![],
        );
        let g = xor_game();
        let px = random::distribution(2, 9, true, &mut rng);
        let d = JointDistribution::product(&px, &[ratio(1, 2), ratio(1, 2)]).unwrap();
        let e = first_message_encoding_quantum(&p, &g, &d).unwrap();
        let avg = e.encoding.average_quantum().unwrap().unwrap();
        // feed Σ √p_x |x⟩ into X and run Alice's first round
        let amps: Vec<C64> = px.iter().map(|p| c64(to_f64(p).sqrt(), 0.0)).collect();
        let fed = p.demote_alice_input("X", &amps).unwrap();
        let mut s = PureState::basis(fed.layout.clone(), 0).unwrap();
        for (_, gte) in &fed.prep {
            s = gte.apply(&s).unwrap();
        }
        for gte in &fed.rounds[0].ops {
            s = gte.apply(&s).unwrap();
        }
        let direct = s.reduced(&["M"]).unwrap();
        assert!(avg.matrix().max_abs_diff(direct.matrix()) < 1e-8);
        assert!(matches!(e.encoding.codewords(), Codewords::Quantum(_)));
    }
}

#[test]
fn folding_constant_controls_preserves_behaviour() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    let u: Vec<Branch> = (0..4).map(|_| Branch::Unitary(random::unitary(2, &mut rng))).collect();
    let mut p = one_round(
        &[("M", 1, Party::Alice), ("K", 1, Party::Alice)],
        vec![Gate::controlled(&["K", "X"], u, &["M"])],
        &["M"],
        &[],
        vec![Gate::controlled(&["M"], vec![Branch::Identity, xor_branch(1, 1)], &["G"])],
    );
    p.prep.push((
        Party::Alice,
        Gate::unitary(unitary_with_first_column(&[c64(0.0, 0.0), c64(1.0, 0.0)]).unwrap(), &["M"]),
    ));
    // K is never touched, so it stays |0⟩
    let folded = p.fold_constants(&[("K", 0)]).unwrap();
    assert_eq!(folded.layout.total_qubits(), p.layout.total_qubits() - 1);
    let g = xor_game();
    let a = eval_quantum(&p.into(), &g, None).unwrap();
    let b = eval_quantum(&folded.into(), &g, None).unwrap();
    for (x, y) in a.per_input.iter().zip(&b.per_input) {
        assert!((x - y).abs() < 1e-12);
    }
}
