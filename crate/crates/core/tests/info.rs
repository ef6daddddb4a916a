use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use roundlab_core::info::*;
use roundlab_core::random;
use roundlab_core::rational::{ratio, Ratio};
use roundlab_core::tensor::*;

fn layout(regs: &[(&str, usize)]) -> RegisterLayout {
    RegisterLayout::simple(Party::Alice, regs).unwrap()
}

fn h2(p: f64) -> f64 {
    -(p * p.log2() + (1.0 - p) * (1.0 - p).log2())
}

#[test]
fn shannon_cases() {
    assert_eq!(shannon_entropy(&[1.0]).unwrap(), 0.0);
    assert!((shannon_entropy(&[0.5, 0.5]).unwrap() - 1.0).abs() < 1e-15);
    assert!((shannon_entropy(&[0.75, 0.25]).unwrap() - h2(0.75)).abs() < 1e-12);
    assert!((shannon_entropy(&[0.75, 0.25]).unwrap() - 0.811278).abs() < 1e-6);
    assert!(shannon_entropy(&[1.5, -0.5]).is_err());
    assert!((shannon_entropy_exact(&[ratio(3, 4), ratio(1, 4)]).unwrap() - 0.811278).abs() < 1e-6);
}

#[test]
fn von_neumann_cases() {
    let mut r = ChaCha8Rng::seed_from_u64(1);
    let psi = random::pure_state(layout(&[("A", 2)]), &mut r).unwrap();
    assert!(von_neumann_entropy(&psi.density()).unwrap().abs() < 1e-9);
    for q in 1..=3 {
        let d = 1 << q;
        let mixed = DensityMatrix::diagonal(&vec![1.0 / d as f64; d], layout(&[("A", q)])).unwrap();
        assert!((von_neumann_entropy(&mixed).unwrap() - q as f64).abs() < 1e-12);
    }
    let rho = DensityMatrix::diagonal(&[0.75, 0.25], layout(&[("A", 1)])).unwrap();
    assert!((von_neumann_entropy(&rho).unwrap() - h2(0.75)).abs() < 1e-12);
}

fn bell() -> DensityMatrix {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    PureState::new(
        vec![c64(h, 0.0), c64(0.0, 0.0), c64(0.0, 0.0), c64(h, 0.0)],
        layout(&[("A", 1), ("B", 1)]),
    )
    .unwrap()
    .density()
}

#[test]
fn mutual_information_cases() {
    let mut r = ChaCha8Rng::seed_from_u64(2);
    let a = random::density(layout(&[("A", 1)]), 2, &mut r).unwrap();
    let b = random::density(layout(&[("B", 1)]), 2, &mut r).unwrap();
    assert!(mutual_information(&a.tensor(&b).unwrap(), &["A"]).unwrap().abs() < 1e-9);
    assert!((mutual_information(&bell(), &["A"]).unwrap() - 2.0).abs() < 1e-12);
    assert!(mutual_information(&bell(), &["A", "B"]).is_err());
    let empty: [&str; 0] = [];
    assert!(mutual_information(&bell(), &empty).is_err());
}

#[test]
fn chain_identity_and_bounds_on_random_states() {
    let mut r = ChaCha8Rng::seed_from_u64(3);
    let l = layout(&[("A", 1), ("B", 1), ("C", 1)]);
    for k in 0..200 {
        let rho = random::density(l.clone(), 1 + k % 8, &mut r).unwrap();
        let rep = chain_identity(&rho, &["A"], &["B"], &["C"]).unwrap();
        assert!(rep.residual <= 1e-7, "{rep:?}");
        let i = mutual_information(&rho, &["A"]).unwrap();
        let sa = entropy_of(&rho, &["A"]).unwrap();
        assert!(i >= -1e-9 && i <= 2.0 * sa + 1e-9);
        assert!(von_neumann_entropy(&rho).unwrap() <= 3.0 + 1e-9);
        // subadditivity
        let sab = entropy_of(&rho, &["A", "B"]).unwrap();
        let sb = entropy_of(&rho, &["B"]).unwrap();
        assert!(sab <= sa + sb + 1e-9);
    }
}

#[test]
fn encoding_information_cases() {
    let basis = |v: usize| {
        let mut p = [0.0, 0.0];
        p[v] = 1.0;
        DensityMatrix::diagonal(&p, layout(&[("M", 1)])).unwrap()
    };
    let perfect = Encoding::new(
        vec![ratio(1, 2), ratio(1, 2)],
        Codewords::Quantum(vec![basis(0), basis(1)]),
    )
    .unwrap();
    assert!((encoding_mutual_information(&perfect).unwrap() - 1.0).abs() < 1e-12);

    let constant = Encoding::new(
        vec![ratio(1, 3), ratio(2, 3)],
        Codewords::Quantum(vec![basis(0), basis(0)]),
    )
    .unwrap();
    assert!(encoding_mutual_information(&constant).unwrap().abs() < 1e-12);
    let g = average_encoding_gap(&constant).unwrap();
    assert!(g.lhs.abs() < 1e-12 && g.rhs.abs() < 1e-6);

    let h = std::f64::consts::FRAC_1_SQRT_2;
    let plus = PureState::new(vec![c64(h, 0.0), c64(h, 0.0)], layout(&[("M", 1)]))
        .unwrap()
        .density();
    let e = Encoding::new(
        vec![ratio(1, 2), ratio(1, 2)],
        Codewords::Quantum(vec![basis(0), plus]),
    )
    .unwrap();
    // eigenvalues of the average are (1 ± 1/√2)/2
    let l = (1.0 + h) / 2.0;
    let oracle = h2(l);
    assert!((encoding_mutual_information(&e).unwrap() - oracle).abs() < 1e-9);
    assert!((oracle - 0.600876).abs() < 1e-6);

    let g = average_encoding_gap(&perfect).unwrap();
    assert!((g.lhs - 1.0).abs() < 1e-9);
    assert!((g.rhs - 1.177410).abs() < 1e-6);
}

#[test]
fn classical_encoding_agrees_with_joint_state() {
    let mut r = ChaCha8Rng::seed_from_u64(4);
    for _ in 0..50 {
        let nx = r.random_range(1..=4);
        let nm = r.random_range(1..=4);
        let priors = random::distribution(nx, 6, true, &mut r);
        let words: Vec<Vec<Ratio>> = (0..nx).map(|_| random::distribution(nm, 5, false, &mut r)).collect();
        let e = Encoding::new(priors, Codewords::Classical(words)).unwrap();
        let direct = encoding_mutual_information(&e).unwrap();
        let joint = e.joint_state().unwrap();
        if nx > 1 {
            let via = mutual_information(&joint, &["X"]).unwrap();
            assert!((direct - via).abs() < 1e-8);
        }
        let g = average_encoding_gap(&e).unwrap();
        assert!(g.slack >= -1e-8, "{g:?}");
    }
}

#[test]
fn quantum_encodings_respect_average_encoding() {
    let mut r = ChaCha8Rng::seed_from_u64(5);
    for k in 0..50 {
        let nx = 1 + k % 4;
        let q = 1 + k % 2;
        let priors = random::distribution(nx, 7, true, &mut r);
        let words = (0..nx)
            .map(|_| random::density(layout(&[("M", q)]), 1 + k % 3, &mut r).unwrap())
            .collect();
        let e = Encoding::new(priors, Codewords::Quantum(words)).unwrap();
        let g = average_encoding_gap(&e).unwrap();
        assert!(g.slack >= -1e-8, "{g:?}");
        let via = e.joint_state().unwrap();
        if nx > 1 {
            let i = mutual_information(&via, &["X"]).unwrap();
            assert!((i - encoding_mutual_information(&e).unwrap()).abs() < 1e-8);
        }
    }
}

#[test]
fn encoding_validation() {
    assert!(Encoding::new(vec![ratio(1, 2), ratio(1, 3)], Codewords::Classical(vec![vec![ratio(1, 1)]; 2])).is_err());
    assert!(Encoding::new(vec![ratio(1, 1), ratio(0, 1)], Codewords::Classical(vec![vec![ratio(1, 1)]; 2])).is_err());
}

#[test]
fn total_variation_cases() {
    assert_eq!(total_variation(&[0.5, 0.5], &[0.5, 0.5]).unwrap(), 0.0);
    assert_eq!(total_variation(&[1.0, 0.0], &[0.0, 1.0]).unwrap(), 2.0);
    assert_eq!(
        total_variation_exact(&[ratio(3, 4), ratio(1, 4)], &[ratio(1, 2), ratio(1, 2)]).unwrap(),
        ratio(1, 2)
    );
    assert!(total_variation(&[1.0], &[0.5, 0.5]).is_err());
    let mut r = ChaCha8Rng::seed_from_u64(6);
    for _ in 0..20 {
        let p: Vec<f64> = random::float_distribution(4, &mut r);
        let q: Vec<f64> = random::float_distribution(4, &mut r);
        let l = layout(&[("A", 2)]);
        let a = DensityMatrix::diagonal(&p, l.clone()).unwrap();
        let b = DensityMatrix::diagonal(&q, l).unwrap();
        assert!((a.trace_distance(&b).unwrap() - total_variation(&p, &q).unwrap()).abs() < 1e-9);
    }
}

#[test]
fn measurement_distance_cases() {
    let mut r = ChaCha8Rng::seed_from_u64(7);
    let l = layout(&[("A", 2)]);
    let rho = random::density(l.clone(), 2, &mut r).unwrap();
    let comp: Vec<Matrix> = (0..4)
        .map(|i| {
            let mut d = vec![0.0; 4];
            d[i] = 1.0;
            Matrix::diag(&d)
        })
        .collect();
    let same = measurement_distance_check(&rho, &rho, &comp).unwrap();
    assert!(same.l1.abs() < 1e-12 && same.trace_distance.abs() < 1e-9);
    for _ in 0..30 {
        let a = random::density(l.clone(), 3, &mut r).unwrap();
        let b = random::density(l.clone(), 2, &mut r).unwrap();
        let diff = a.matrix().sub(b.matrix()).unwrap().hermitian_part();
        let opt = measurement_distance_check(&a, &b, &eigenbasis_povm(&diff).unwrap()).unwrap();
        assert!((opt.l1 - opt.trace_distance).abs() < 1e-8);
        // random POVM: E_k = S^{-1/2} A_k S^{-1/2}
        let parts: Vec<Matrix> = (0..3)
            .map(|_| {
                let g = Matrix::from_vec(4, 2, random::gaussian_vector(8, &mut r)).unwrap();
                g.mul(&g.adjoint()).unwrap()
            })
            .collect();
        let s = parts.iter().skip(1).fold(parts[0].clone(), |acc, p| acc.add(p).unwrap());
        let inv = spectral_map(&s.hermitian_part(), |x| 1.0 / x.sqrt()).unwrap();
        let povm: Vec<Matrix> = parts
            .iter()
            .map(|p| inv.mul(p).unwrap().mul(&inv).unwrap().hermitian_part())
            .collect();
        let c = measurement_distance_check(&a, &b, &povm).unwrap();
        assert!(c.l1 <= c.trace_distance + 1e-8);
    }
    let bad = vec![Matrix::identity(4).scale_real(0.5)];
    assert!(measurement_distance_check(&rho, &rho, &bad).is_err());
}

#[test]
fn safe_bound_cases() {
    // X uniform bit, M1 = copy of X, M2 constant |0⟩.
    let l = layout(&[("X", 1), ("M1", 1), ("M2", 1)]);
    let rho = DensityMatrix::diagonal(&[0.5, 0.0, 0.0, 0.0, 0.0, 0.0, 0.5, 0.0], l.clone()).unwrap();
    let rep = safe_bound(&rho, &["X"], &["M1"], &["M2"]).unwrap();
    assert!(rep.holds && rep.rhs == 2.0 && (rep.lhs - 1.0).abs() < 1e-12);
    assert_eq!(rep.refined, Some((rep.lhs, 1.0)));

    // M2 = copy of X violates the precondition.
    let dep = DensityMatrix::diagonal(&[0.5, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.5], l).unwrap();
    assert!(matches!(
        safe_bound(&dep, &["X"], &["M1"], &["M2"]),
        Err(roundlab_core::Error::Precondition(_))
    ));
}

#[test]
fn additivity_cases() {
    let l = layout(&[("X1", 1), ("X2", 1), ("M", 2)]);
    // M = X1 X2 for uniform independent bits.
    let mut d = vec![0.0; 16];
    for x in 0..4 {
        d[x * 4 + x] = 0.25;
    }
    let rho = DensityMatrix::diagonal(&d, l.clone()).unwrap();
    let rep = additivity(&rho, &["X1", "X2"], &["M"]).unwrap();
    assert!(rep.holds && (rep.lhs - 2.0).abs() < 1e-12 && (rep.rhs - 2.0).abs() < 1e-12);

    // correlated X1 = X2 is rejected
    let mut c = vec![0.0; 16];
    c[0] = 0.5;
    c[15] = 0.5;
    let bad = DensityMatrix::diagonal(&c, l).unwrap();
    assert!(additivity(&bad, &["X1", "X2"], &["M"]).is_err());
}

#[test]
fn averaging_on_random_classical_states() {
    let mut r = ChaCha8Rng::seed_from_u64(8);
    let l = layout(&[("X", 1), ("Y", 1), ("M", 1)]);
    for _ in 0..50 {
        let p = random::float_distribution(8, &mut r);
        let rho = DensityMatrix::diagonal(&p, l.clone()).unwrap();
        let rep = averaging(&rho, &["X"], &["Y"], &["M"]).unwrap();
        assert!(rep.residual <= 1e-7, "{rep:?}");
    }
    // quantum M given classical X, Y
    for _ in 0..20 {
        let mut blocks = Vec::new();
        let w = random::float_distribution(4, &mut r);
        for wi in &w {
            let s = random::density(layout(&[("M", 1)]), 2, &mut r).unwrap();
            blocks.push(s.matrix().scale_real(*wi));
        }
        let rho = DensityMatrix::new(Matrix::block_diag(&blocks), l.clone()).unwrap();
        let rep = averaging(&rho, &["X"], &["Y"], &["M"]).unwrap();
        assert!(rep.residual <= 1e-7, "{rep:?}");
    }
}

#[test]
fn joint_distribution_basics() {
    let d = JointDistribution::uniform(2, 3).unwrap();
    assert_eq!(d.support().len(), 6);
    assert_eq!(d.marginal_x(), vec![ratio(1, 2), ratio(1, 2)]);
    assert_eq!(d.prob(1, 2), ratio(1, 6));
    assert!(JointDistribution::new(2, 2, vec![(0, 0, ratio(1, 2))]).is_err());
    assert!(JointDistribution::new(2, 2, vec![(0, 0, ratio(1, 2)), (0, 0, ratio(1, 2))]).is_err());
    let p = JointDistribution::product(&[ratio(1, 4), ratio(3, 4)], &[ratio(1, 1), ratio(0, 1)]).unwrap();
    assert_eq!(p.support().len(), 2);
}
