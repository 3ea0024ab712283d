use qprivacy::measures::entropy;
use qprivacy::states::{
    ensemble_average, named_state, pure_decomposition, purify, random_density, random_pure, DensityMatrix, Ensemble,
    PureState,
};
use qprivacy::tensor::{ComplexMatrix, DimSignature, C64};

fn qubit() -> DimSignature {
    DimSignature::qubits(1).unwrap()
}

fn mixed_half() -> DensityMatrix {
    DensityMatrix::maximally_mixed(qubit())
}

#[test]
fn purify_pure_input_has_trivial_reference() {
    let psi = random_pure(&DimSignature::new(vec![3]).unwrap(), 1);
    let p = purify(&psi.density()).unwrap();
    assert_eq!(p.signature().dims(), &[1, 3]);
    assert!(p.fidelity(&PureState::new(psi.amplitudes().to_vec(), p.signature().clone()).unwrap()) > 1.0 - 1e-12);
}

#[test]
fn purify_maximally_mixed_is_bell_like() {
    let p = purify(&mixed_half()).unwrap();
    assert_eq!(p.signature().dims(), &[2, 2]);
    assert!((entropy(&p.reduced(&[0]).unwrap()).unwrap() - 1.0).abs() < 1e-12);
}

#[test]
fn purify_round_trip_rank_three() {
    let rho = random_density(&DimSignature::new(vec![3]).unwrap(), 3, 4).unwrap();
    let p = purify(&rho).unwrap();
    assert!(p.reduced(&[1]).unwrap().max_abs_diff(&rho) < 1e-9);
}

#[test]
fn ensemble_average_examples() {
    let rho = random_density(&qubit(), 2, 2).unwrap();
    let single = Ensemble::new(vec![(1.0, rho.clone())]).unwrap();
    assert!(ensemble_average(&single).max_abs_diff(&rho) < 1e-15);

    let zero = DensityMatrix::basis_state(qubit(), 0).unwrap();
    let one = DensityMatrix::basis_state(qubit(), 1).unwrap();
    let e = Ensemble::new(vec![(0.5, zero), (0.5, one)]).unwrap();
    assert!(ensemble_average(&e).max_abs_diff(&mixed_half()) < 1e-15);

    let sig = DimSignature::new(vec![3]).unwrap();
    let rho = random_density(&sig, 3, 7).unwrap();
    let spec = rho.spectrum().unwrap();
    let members = (0..3)
        .map(|k| (spec.eigenvalues[k], PureState::new(spec.eigenvector(k), sig.clone()).unwrap().density()))
        .collect();
    assert!(ensemble_average(&Ensemble::new(members).unwrap()).max_abs_diff(&rho) < 1e-12);
}

#[test]
fn pure_decomposition_examples() {
    let psi = random_pure(&qubit(), 3).density();
    let e = pure_decomposition(&psi, 1, 0).unwrap();
    assert_eq!(e.len(), 1);
    assert!(e.members()[0].1.max_abs_diff(&psi) < 1e-9);

    for seed in 0..5 {
        let e = pure_decomposition(&mixed_half(), 2, seed).unwrap();
        let (p0, a) = &e.members()[0];
        let (p1, b) = &e.members()[1];
        assert!((p0 - 0.5).abs() < 1e-9 && (p1 - 0.5).abs() < 1e-9);
        let overlap = (a.matrix() * b.matrix()).trace().norm();
        assert!(overlap < 1e-9, "overlap {overlap}");
    }

    let rho = random_density(&qubit(), 2, 11).unwrap();
    let e = pure_decomposition(&rho, 4, 12).unwrap();
    assert_eq!(e.len(), 4);
    assert!(e.is_pure_signal(1e-9));
    assert!(e.average().max_abs_diff(&rho) < 1e-9);
}

#[test]
fn random_states() {
    let sig = DimSignature::new(vec![2, 3]).unwrap();
    assert!((random_density(&sig, 1, 5).unwrap().purity() - 1.0).abs() < 1e-9);
    assert_eq!(random_density(&sig, 3, 5).unwrap(), random_density(&sig, 3, 5).unwrap());
    assert_eq!(random_pure(&sig, 5), random_pure(&sig, 5));

    let n = 2000;
    let d = sig.total();
    let mut mean = ComplexMatrix::zeros(d, d);
    for s in 0..n {
        mean = &mean + random_density(&sig, d, s).unwrap().matrix();
    }
    let mean = mean.scale_real(1.0 / n as f64);
    let target = ComplexMatrix::identity(d).scale_real(1.0 / d as f64);
    assert!(mean.max_abs_diff(&target) < 5.0 / (n as f64).sqrt());
}

#[test]
fn named_states() {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let t = 1.0 / 3f64.sqrt();
    let check = |name: &str, n: usize, support: &[usize], amp: f64| {
        let psi = named_state(name, &DimSignature::qubits(n).unwrap()).unwrap();
        for (i, a) in psi.amplitudes().iter().enumerate() {
            let want = if support.contains(&i) { amp } else { 0.0 };
            assert!((*a - C64::new(want, 0.0)).norm() < 1e-15, "{name}[{i}]");
        }
    };
    check("bell", 2, &[0, 3], h);
    check("ghz", 3, &[0, 7], h);
    check("w", 3, &[1, 2, 4], t);
    assert!(named_state("nope", &DimSignature::qubits(2).unwrap()).is_err());
}

#[test]
fn invalid_density_rejected() {
    let m = ComplexMatrix::from_real(2, 2, &[0.5, 0.2, 0.1, 0.5]).unwrap();
    assert!(DensityMatrix::new(m, qubit()).is_err());
    let m = ComplexMatrix::from_real_diagonal(&[0.7, 0.7]);
    assert!(DensityMatrix::new(m, qubit()).is_err());
    let m = ComplexMatrix::from_real_diagonal(&[1.1, -0.1]);
    assert!(DensityMatrix::new(m, qubit()).is_err());
}
