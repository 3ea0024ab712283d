use qprivacy::channels::{apply, ChannelKind, ChannelSpec, KrausChannel};
use qprivacy::measures::{
    carlen_lieb_bound, classical_correlation, coherent_information, concurrence, conditional_entropy, discord,
    disturbance, entropy, entropy_exchange, eof, holevo, marginal_entropy, MeasurementBasis,
};
use qprivacy::random::{haar_unitary, rng_from_seed};
use qprivacy::states::{named_state, pure_decomposition, purify, random_density, random_pure, DensityMatrix, Ensemble};
use qprivacy::tensor::{ComplexMatrix, DimSignature};

fn qubits(n: usize) -> DimSignature {
    DimSignature::qubits(n).unwrap()
}

fn bell() -> DensityMatrix {
    named_state("bell", &qubits(2)).unwrap().density()
}

fn spec(kind: ChannelKind, p: f64) -> KrausChannel {
    ChannelSpec::new(kind, p).unwrap().build()
}

fn classical_classical() -> DensityMatrix {
    DensityMatrix::new(ComplexMatrix::from_real_diagonal(&[0.5, 0.0, 0.0, 0.5]), qubits(2)).unwrap()
}

fn werner(p: f64) -> DensityMatrix {
    let m = &bell().matrix().scale_real(p) + &ComplexMatrix::identity(4).scale_real((1.0 - p) / 4.0);
    DensityMatrix::new(m, qubits(2)).unwrap()
}

#[test]
fn entropy_examples() {
    assert!(entropy(&random_pure(&qubits(3), 1).density()).unwrap().abs() < 1e-9);
    let mixed = DensityMatrix::maximally_mixed(DimSignature::new(vec![6]).unwrap());
    assert!((entropy(&mixed).unwrap() - 6f64.log2()).abs() < 1e-12);
    let d = DensityMatrix::new(ComplexMatrix::from_real_diagonal(&[0.75, 0.25]), qubits(1)).unwrap();
    assert!((entropy(&d).unwrap() - 0.811_278_124_459_132_8).abs() < 1e-12);
}

#[test]
fn coherent_information_examples() {
    let ic = |ch: &KrausChannel| coherent_information(&apply(ch, &bell(), 1).unwrap(), &[0], &[1]).unwrap();
    assert!((ic(&KrausChannel::identity(2)) - 1.0).abs() < 1e-12);
    assert!((ic(&spec(ChannelKind::Depolarizing, 1.0)) + 1.0).abs() < 1e-9);
    assert!(ic(&spec(ChannelKind::AmplitudeDamping, 0.5)).abs() < 1e-9);
}

#[test]
fn entropy_exchange_examples() {
    let rho = random_density(&qubits(1), 2, 2).unwrap();
    let u = KrausChannel::unitary(haar_unitary(2, &mut rng_from_seed(3))).unwrap();
    assert!(entropy_exchange(&u, &rho).unwrap().abs() < 1e-9);
    let half = DensityMatrix::maximally_mixed(qubits(1));
    assert!((entropy_exchange(&spec(ChannelKind::Depolarizing, 1.0), &half).unwrap() - 2.0).abs() < 1e-12);
    for seed in 0..10 {
        let ch = qprivacy::channels::random_channel(3, 2, seed).unwrap();
        let rho = random_density(&DimSignature::new(vec![3]).unwrap(), 3, seed + 100).unwrap();
        let joint = apply(&ch, &purify(&rho).unwrap().density(), 1).unwrap();
        let via = marginal_entropy(&joint, &[0, 1]).unwrap();
        assert!((entropy_exchange(&ch, &rho).unwrap() - via).abs() < 1e-9);
    }
}

#[test]
fn holevo_examples() {
    let rho = random_density(&qubits(1), 2, 4).unwrap();
    let same = Ensemble::new(vec![(0.3, rho.clone()), (0.7, rho)]).unwrap();
    assert!(holevo(&same).unwrap().abs() < 1e-12);
    let zero = DensityMatrix::basis_state(qubits(1), 0).unwrap();
    let one = DensityMatrix::basis_state(qubits(1), 1).unwrap();
    let e = Ensemble::new(vec![(0.5, zero), (0.5, one)]).unwrap();
    assert!((holevo(&e).unwrap() - 1.0).abs() < 1e-12);
}

#[test]
fn holevo_difference_equals_coherent_information() {
    for seed in 0..25 {
        let ch = qprivacy::channels::random_channel(2, 2, seed).unwrap();
        let rho = random_density(&qubits(1), 2, seed + 50).unwrap();
        let ens = pure_decomposition(&rho, 3, seed).unwrap();
        let chi_b = holevo(&ens.map(|m| apply(&ch, m, 0)).unwrap()).unwrap();
        let chi_e = holevo(&ens.map(|m| qprivacy::channels::complementary(&ch, m)).unwrap()).unwrap();
        let joint = apply(&ch, &purify(&rho).unwrap().density(), 1).unwrap();
        let ic = coherent_information(&joint, &[0], &[1]).unwrap();
        assert!((chi_b - chi_e - ic).abs() < 1e-8);
    }
}

#[test]
fn classical_correlation_examples() {
    let product = random_density(&qubits(1), 2, 1).unwrap().kron(&random_density(&qubits(1), 2, 2).unwrap()).unwrap();
    assert!(classical_correlation(&product).unwrap().0.abs() < 1e-9);
    assert!((classical_correlation(&bell()).unwrap().0 - 1.0).abs() < 1e-9);
    let (j, basis) = classical_correlation(&classical_classical()).unwrap();
    assert!((j - 1.0).abs() < 1e-9);
    assert!(basis.theta.abs() < 1e-6, "{basis:?}");
    let _ = MeasurementBasis::COMPUTATIONAL;
}

#[test]
fn discord_examples() {
    assert!(discord(&classical_classical()).unwrap().abs() < 1e-9);
    assert!((discord(&bell()).unwrap() - 1.0).abs() < 1e-4);
    let mut prev = discord(&werner(0.0)).unwrap();
    for k in 1..=100 {
        let d = discord(&werner(k as f64 / 100.0)).unwrap();
        assert!((d - prev).abs() <= 0.05, "jump at {k}");
        prev = d;
    }
}

#[test]
fn concurrence_examples() {
    assert!((concurrence(&bell()).unwrap() - 1.0).abs() < 1e-9);
    assert!((eof(&bell()).unwrap() - 1.0).abs() < 1e-9);
    let product = random_pure(&qubits(1), 1).kron(&random_pure(&qubits(1), 2)).unwrap().density();
    assert!(concurrence(&product).unwrap().abs() < 1e-9);
    assert!(eof(&product).unwrap().abs() < 1e-9);
    let w = named_state("w", &qubits(3)).unwrap().reduced(&[0, 1]).unwrap();
    assert!((concurrence(&w).unwrap() - 2.0 / 3.0).abs() < 1e-9);
}

#[test]
fn carlen_lieb_examples() {
    let psi = random_pure(&qubits(2), 6);
    let s = marginal_entropy(&psi.density(), &[0]).unwrap();
    assert!((carlen_lieb_bound(&psi.density()).unwrap() - s).abs() < 1e-9);
    let sep = DensityMatrix::new(ComplexMatrix::from_real_diagonal(&[0.4, 0.1, 0.2, 0.3]), qubits(2)).unwrap();
    assert_eq!(carlen_lieb_bound(&sep).unwrap(), 0.0);
    for seed in 0..50 {
        let rho = random_density(&qubits(2), 1 + (seed as usize % 4), seed).unwrap();
        assert!(carlen_lieb_bound(&rho).unwrap() <= eof(&rho).unwrap() + 1e-8);
    }
}

#[test]
fn disturbance_examples() {
    let rho = random_density(&qubits(1), 2, 8).unwrap();
    let u = KrausChannel::unitary(haar_unitary(2, &mut rng_from_seed(9))).unwrap();
    assert!(disturbance(&u, &rho).unwrap().abs() < 1e-9);
    let half = DensityMatrix::maximally_mixed(qubits(1));
    assert!((disturbance(&spec(ChannelKind::Depolarizing, 1.0), &half).unwrap() - 2.0).abs() < 1e-9);
    let dep = spec(ChannelKind::Depolarizing, 0.3);
    let once = disturbance(&dep, &rho).unwrap();
    let twice = disturbance(&dep.then(&dep).unwrap(), &rho).unwrap();
    assert!(once <= twice + 1e-8);
}

#[test]
fn conditional_entropy_examples() {
    let a = random_density(&qubits(1), 2, 1).unwrap();
    let prod = a.kron(&random_density(&qubits(1), 2, 2).unwrap()).unwrap();
    assert!((conditional_entropy(&prod, &[0], &[1]).unwrap() - entropy(&a).unwrap()).abs() < 1e-9);
    assert!((conditional_entropy(&bell(), &[0], &[1]).unwrap() + 1.0).abs() < 1e-9);
    assert!((conditional_entropy(&bell(), &[1], &[0]).unwrap() + 1.0).abs() < 1e-9);
    let ghz = named_state("ghz", &qubits(3)).unwrap().density();
    assert!(conditional_entropy(&ghz, &[0], &[1]).unwrap().abs() < 1e-9);
}
