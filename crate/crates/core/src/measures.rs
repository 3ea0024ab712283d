//! Entropic quantities in bits.
//!
//! Subsystem sets are slices of positions into the state's signature.
//! Eigenvalues in `[-psd_clip, 0)` are clipped to zero before taking
//! logarithms; anything more negative is reported as an error because it
//! means the operator was not a state to begin with.

use std::f64::consts::{FRAC_PI_2, PI, TAU};

use crate::channels::{apply, complementary, KrausChannel};
use crate::config::Tolerances;
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::states::{purify, DensityMatrix, Ensemble};
use crate::tensor::{hermitian_eigensystem, hermitian_eigenvalues, ComplexMatrix, DimSignature, C64, ZERO};

/// `-sum l log2 l` over a spectrum.
pub fn spectrum_entropy(eigenvalues: &[f64]) -> Result<f64> {
    let clip = Tolerances::DEFAULT.psd_clip;
    let mut s = 0.0;
    for &l in eigenvalues {
        if l < -clip {
            return Err(Error::Numeric { what: "negative eigenvalue in entropy".into(), residual: l });
        }
        let l = l.clamp(0.0, 1.0);
        if l > 0.0 {
            s -= l * l.log2();
        }
    }
    Ok(s)
}

pub fn matrix_entropy(m: &ComplexMatrix) -> Result<f64> {
    spectrum_entropy(&hermitian_eigenvalues(m)?)
}

/// Von Neumann entropy `S(rho)`.
pub fn entropy(rho: &DensityMatrix) -> Result<f64> {
    matrix_entropy(rho.matrix())
}

pub fn binary_entropy(p: f64) -> f64 {
    let p = p.clamp(0.0, 1.0);
    [p, 1.0 - p].iter().filter(|&&x| x > 0.0).map(|&x| -x * x.log2()).sum()
}

fn check_sets(sig: &DimSignature, a: &[usize], b: &[usize]) -> Result<()> {
    for &p in a.iter().chain(b) {
        sig.check_index(p)?;
    }
    if let Some(p) = a.iter().find(|p| b.contains(p)) {
        return Err(Error::invalid(format!("subsystem {p} appears on both sides")));
    }
    Ok(())
}

fn union(a: &[usize], b: &[usize]) -> Vec<usize> {
    let mut u: Vec<usize> = a.iter().chain(b).copied().collect();
    u.sort_unstable();
    u.dedup();
    u
}

/// Entropy of the marginal on `set`; an empty set has entropy zero.
pub fn marginal_entropy(joint: &DensityMatrix, set: &[usize]) -> Result<f64> {
    if set.is_empty() {
        return Ok(0.0);
    }
    if set.len() == joint.signature().len() {
        return entropy(joint);
    }
    entropy(&joint.partial_trace(set)?)
}

/// `I_c(reference > output) = S(output) - S(reference, output)`.
pub fn coherent_information(joint: &DensityMatrix, reference: &[usize], output: &[usize]) -> Result<f64> {
    check_sets(joint.signature(), reference, output)?;
    if reference.is_empty() || output.is_empty() {
        return Err(Error::invalid("coherent information needs a reference and an output"));
    }
    Ok(marginal_entropy(joint, output)? - marginal_entropy(joint, &union(reference, output))?)
}

/// `S(target | given) = S(target, given) - S(given)`.
pub fn conditional_entropy(joint: &DensityMatrix, target: &[usize], given: &[usize]) -> Result<f64> {
    check_sets(joint.signature(), target, given)?;
    Ok(marginal_entropy(joint, &union(target, given))? - marginal_entropy(joint, given)?)
}

/// `I(a : b) = S(a) + S(b) - S(a, b)`.
pub fn mutual_information(joint: &DensityMatrix, a: &[usize], b: &[usize]) -> Result<f64> {
    check_sets(joint.signature(), a, b)?;
    Ok(marginal_entropy(joint, a)? + marginal_entropy(joint, b)? - marginal_entropy(joint, &union(a, b))?)
}

/// Entropy of the environment output, `S(rho^E')`.
pub fn entropy_exchange(ch: &KrausChannel, rho: &DensityMatrix) -> Result<f64> {
    entropy(&complementary(ch, rho)?)
}

/// `chi = S(sum p_k rho_k) - sum p_k S(rho_k)`.
pub fn holevo(e: &Ensemble) -> Result<f64> {
    let mut avg_entropy = 0.0;
    for (p, rho) in e.members() {
        if *p > 0.0 {
            avg_entropy += p * entropy(rho)?;
        }
    }
    Ok(entropy(&e.average())? - avg_entropy)
}

/// Rank-1 projective qubit measurement along the Bloch axis `(theta, phi)`
/// with `theta` in `[0, pi/2]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeasurementBasis {
    pub theta: f64,
    pub phi: f64,
}

impl MeasurementBasis {
    pub const COMPUTATIONAL: MeasurementBasis = MeasurementBasis { theta: 0.0, phi: 0.0 };

    /// Canonical representative of the basis containing the axis `(theta, phi)`:
    /// the axis and its antipode name the same measurement.
    pub fn canonical(theta: f64, phi: f64) -> Self {
        let (st, ct) = theta.sin_cos();
        let (sp, cp) = phi.sin_cos();
        let mut n = [st * cp, st * sp, ct];
        if n[2] < 0.0 {
            n = [-n[0], -n[1], -n[2]];
        }
        let theta = n[2].clamp(-1.0, 1.0).acos();
        if theta.sin() < 1e-12 {
            return Self { theta: 0.0, phi: 0.0 };
        }
        let mut phi = n[1].atan2(n[0]).rem_euclid(TAU);
        if n[2] < 1e-12 {
            // equator: both antipodes are valid, keep the smaller phi
            phi = phi.rem_euclid(PI);
        }
        Self { theta, phi }
    }

    /// Basis whose first vector is `v` (any normalization or phase).
    pub fn from_vector(v: [C64; 2]) -> Self {
        let norm = (v[0].norm_sqr() + v[1].norm_sqr()).sqrt();
        let theta = 2.0 * (v[0].norm() / norm).clamp(0.0, 1.0).acos();
        let phi = v[1].arg() - v[0].arg();
        Self::canonical(theta, phi)
    }

    pub fn vectors(&self) -> [[C64; 2]; 2] {
        basis_vectors(self.theta, self.phi)
    }

    pub fn projectors(&self) -> Vec<ComplexMatrix> {
        self.vectors().iter().map(|v| ComplexMatrix::outer(v)).collect()
    }

    /// `max |sum pi_i - I|` together with `max |pi_i^2 - pi_i|`.
    pub fn completeness_error(&self) -> f64 {
        let ps = self.projectors();
        let sum = &ps[0] + &ps[1];
        let idem = ps.iter().map(|p| (p * p).max_abs_diff(p)).fold(0.0, f64::max);
        sum.max_abs_diff(&ComplexMatrix::identity(2)).max(idem)
    }
}

fn basis_vectors(theta: f64, phi: f64) -> [[C64; 2]; 2] {
    let (s, c) = (0.5 * theta).sin_cos();
    let e = C64::from_polar(1.0, phi);
    [[C64::new(c, 0.0), e * s], [-e.conj() * s, C64::new(c, 0.0)]]
}

/// `rho` on `A ⊗ B` with `dim B = 2`, cut into the four `A` blocks
/// `rho_{b b'} = <b| rho |b'>`.
struct QubitBlocks {
    blocks: [[ComplexMatrix; 2]; 2],
}

impl QubitBlocks {
    fn new(rho: &DensityMatrix) -> Result<Self> {
        let sig = rho.signature();
        if sig.len() != 2 {
            return Err(Error::dim(format!("classical correlation needs a bipartite state, got {sig}")));
        }
        if sig.dim(1) != 2 {
            return Err(Error::Unsupported(format!(
                "classical correlation measures a qubit; the measured side has dimension {}",
                sig.dim(1)
            )));
        }
        let da = sig.dim(0);
        let m = rho.matrix();
        let block = |b: usize, bp: usize| {
            let mut out = ComplexMatrix::zeros(da, da);
            for a in 0..da {
                for ap in 0..da {
                    out[(a, ap)] = m[(a * 2 + b, ap * 2 + bp)];
                }
            }
            out
        };
        Ok(Self { blocks: [[block(0, 0), block(0, 1)], [block(1, 0), block(1, 1)]] })
    }

    /// `p S(rho^{A|v})` for the unnormalized conditional state along `v`.
    fn weighted_conditional_entropy(&self, v: &[C64; 2]) -> Result<f64> {
        let da = self.blocks[0][0].rows();
        let mut m = ComplexMatrix::zeros(da, da);
        for b in 0..2 {
            for bp in 0..2 {
                let w = v[b].conj() * v[bp];
                if w != ZERO {
                    m = &m + &self.blocks[b][bp].scale(w);
                }
            }
        }
        let eig = hermitian_eigenvalues(&m.hermitian_part())?;
        let p: f64 = eig.iter().map(|l| l.max(0.0)).sum();
        if p <= 0.0 {
            return Ok(0.0);
        }
        let mut s = p * p.log2();
        for l in eig {
            if l > 0.0 {
                s -= l * l.log2();
            }
        }
        Ok(s)
    }

    /// `sum_i p_i S(rho^{A|i})` for the basis along `(theta, phi)`.
    fn objective(&self, theta: f64, phi: f64) -> Result<f64> {
        let [v0, v1] = basis_vectors(theta, phi);
        Ok(self.weighted_conditional_entropy(&v0)? + self.weighted_conditional_entropy(&v1)?)
    }
}

pub const GRID_SIZE: usize = 64;
const REFINE_MIN_STEP: f64 = 1e-7;
const REFINE_MAX_MOVES: usize = 20_000;

/// Mean conditional entropy of `A` after measuring `B` in `basis`.
pub fn measured_conditional_entropy(rho: &DensityMatrix, basis: &MeasurementBasis) -> Result<f64> {
    QubitBlocks::new(rho)?.objective(basis.theta, basis.phi)
}

/// `J(A:B)`: the largest `S(A) - sum_i p_i S(rho^{A|i})` over projective
/// qubit measurements on `B`, with the optimizing basis.
pub fn classical_correlation(rho: &DensityMatrix) -> Result<(f64, MeasurementBasis)> {
    classical_correlation_with(rho, Execution::default())
}

pub fn classical_correlation_with(rho: &DensityMatrix, exec: Execution) -> Result<(f64, MeasurementBasis)> {
    let blocks = QubitBlocks::new(rho)?;
    let s_a = marginal_entropy(rho, &[0])?;
    let theta_step = FRAC_PI_2 / (GRID_SIZE - 1) as f64;
    let phi_step = TAU / GRID_SIZE as f64;
    let values = exec.map(GRID_SIZE * GRID_SIZE, |idx| {
        blocks.objective((idx / GRID_SIZE) as f64 * theta_step, (idx % GRID_SIZE) as f64 * phi_step)
    });

    // first strict minimum in (theta, phi) order
    let mut best = (0usize, f64::INFINITY);
    for (idx, v) in values.into_iter().enumerate() {
        let v = v?;
        if v < best.1 {
            best = (idx, v);
        }
    }
    let (mut theta, mut phi, mut value) =
        ((best.0 / GRID_SIZE) as f64 * theta_step, (best.0 % GRID_SIZE) as f64 * phi_step, best.1);

    let mut step = theta_step;
    let mut moves = 0;
    while step > REFINE_MIN_STEP && moves < REFINE_MAX_MOVES {
        let mut candidate = None;
        let mut cand_value = value;
        for (dt, dp) in [(-1.0, -1.0), (-1.0, 0.0), (-1.0, 1.0), (0.0, -1.0), (0.0, 1.0), (1.0, -1.0), (1.0, 0.0), (1.0, 1.0)] {
            let (t, p) = (theta + dt * step, phi + dp * step);
            let v = blocks.objective(t, p)?;
            if v < cand_value - 1e-15 {
                cand_value = v;
                candidate = Some((t, p));
            }
        }
        match candidate {
            Some((t, p)) => {
                theta = t;
                phi = p;
                value = cand_value;
                moves += 1;
            }
            None => step *= 0.5,
        }
    }
    let basis = MeasurementBasis::canonical(theta, phi);
    let value = blocks.objective(basis.theta, basis.phi)?;
    Ok((s_a - value, basis))
}

/// `D(A:B) = I(A:B) - J(A:B)`.
pub fn discord(rho: &DensityMatrix) -> Result<f64> {
    let (j, _) = classical_correlation(rho)?;
    Ok(mutual_information(rho, &[0], &[1])? - j)
}

fn require_two_qubits(rho: &DensityMatrix) -> Result<()> {
    if rho.signature().dims() != [2, 2] {
        return Err(Error::Unsupported(format!(
            "Wootters formula needs a 2x2 state, got {}",
            rho.signature()
        )));
    }
    Ok(())
}

/// Wootters concurrence of a two-qubit state.
pub fn concurrence(rho: &DensityMatrix) -> Result<f64> {
    require_two_qubits(rho)?;
    let yy = ComplexMatrix::from_real(
        4,
        4,
        &[0.0, 0.0, 0.0, -1.0, 0.0, 0.0, 1.0, 0.0, 0.0, 1.0, 0.0, 0.0, -1.0, 0.0, 0.0, 0.0],
    )?;
    // Wootters lambdas are the singular values of sqrt(rho) sqrt(rho~) with
    // sqrt(rho~) = (Y⊗Y) sqrt(rho)* (Y⊗Y); avoids square roots of tiny eigenvalues
    let spec = hermitian_eigensystem(rho.matrix())?;
    let mut root = ComplexMatrix::zeros(4, 4);
    for (k, &l) in spec.eigenvalues.iter().enumerate() {
        let v = spec.eigenvector(k);
        root = &root + &ComplexMatrix::outer(&v).scale_real(l.max(0.0).sqrt());
    }
    let flipped_root = &(&yy * &root.conj()) * &yy;
    let product = &root * &flipped_root;
    let mut lambdas: Vec<f64> = product.to_nalgebra().singular_values().iter().copied().collect();
    lambdas.sort_by(|a, b| b.total_cmp(a));
    Ok((lambdas[0] - lambdas[1] - lambdas[2] - lambdas[3]).max(0.0))
}

/// Entanglement of formation: Wootters for two qubits, marginal entropy
/// for pure bipartite states of any dimensions.
pub fn eof(rho: &DensityMatrix) -> Result<f64> {
    if rho.signature().dims() == [2, 2] {
        let c = concurrence(rho)?;
        return Ok(binary_entropy(0.5 * (1.0 + (1.0 - c * c).max(0.0).sqrt())));
    }
    if rho.signature().len() == 2 && (1.0 - rho.purity()).abs() < Tolerances::DEFAULT.trace {
        return marginal_entropy(rho, &[0]);
    }
    Err(Error::Unsupported(format!(
        "entanglement of formation of a mixed {} state",
        rho.signature()
    )))
}

/// `max{S(A) - S(AB), S(B) - S(AB), 0}`, a lower bound on `E_f`.
pub fn carlen_lieb_bound(rho: &DensityMatrix) -> Result<f64> {
    if rho.signature().len() != 2 {
        return Err(Error::dim(format!("expected a bipartite state, got {}", rho.signature())));
    }
    let s_ab = entropy(rho)?;
    let s_a = marginal_entropy(rho, &[0])?;
    let s_b = marginal_entropy(rho, &[1])?;
    Ok((s_a - s_ab).max(s_b - s_ab).max(0.0))
}

/// `D(rho, E) = S(rho) - I_c(R > Q')` with `R` purifying `rho`.
pub fn disturbance(ch: &KrausChannel, rho: &DensityMatrix) -> Result<f64> {
    let flat = rho.with_signature(DimSignature::new(vec![rho.dim()])?)?;
    let psi = purify(&flat)?.density();
    let out = apply(ch, &psi, 1)?;
    Ok(entropy(&flat)? - coherent_information(&out, &[0], &[1])?)
}

#[cfg(test)]
mod tests {
    use std::collections::BTreeMap;

    use super::*;
    use crate::channels::{named_channel, random_channel};
    use crate::random::{haar_vector, rng_from_seed};
    use crate::states::{named_state, random_density, random_pure, PureState};

    fn sig(d: &[usize]) -> DimSignature {
        DimSignature::new(d.to_vec()).unwrap()
    }

    fn channel(name: &str, key: &str, v: f64) -> KrausChannel {
        named_channel(name, &BTreeMap::from([(key.to_string(), v)])).unwrap()
    }

    fn bell() -> DensityMatrix {
        named_state("bell", &sig(&[2, 2])).unwrap().density()
    }

    fn diag(values: &[f64], dims: &[usize]) -> DensityMatrix {
        DensityMatrix::new(ComplexMatrix::from_real_diagonal(values), sig(dims)).unwrap()
    }

    fn werner(p: f64) -> DensityMatrix {
        let m = &bell().matrix().scale_real(p) + &ComplexMatrix::identity(4).scale_real((1.0 - p) / 4.0);
        DensityMatrix::new(m, sig(&[2, 2])).unwrap()
    }

    #[test]
    fn entropy_examples() {
        assert!(entropy(&random_pure(&sig(&[3]), 1).density()).unwrap().abs() < 1e-12);
        let mixed = DensityMatrix::maximally_mixed(sig(&[5]));
        assert!((entropy(&mixed).unwrap() - 5f64.log2()).abs() < 1e-12);
        let d = diag(&[0.75, 0.25], &[2]);
        assert!((entropy(&d).unwrap() - 0.811_278_124_459_132_8).abs() < 1e-12);
    }

    #[test]
    fn entropy_rejects_negative_spectrum() {
        assert!(spectrum_entropy(&[1.0 + 1e-3, -1e-3]).is_err());
        assert_eq!(spectrum_entropy(&[1.0, -1e-10]).unwrap(), 0.0);
    }

    #[test]
    fn coherent_information_examples() {
        let id = KrausChannel::identity(2);
        assert!((coherent_information(&apply(&id, &bell(), 1).unwrap(), &[0], &[1]).unwrap() - 1.0).abs() < 1e-12);
        let dep = channel("depolarizing", "p", 1.0);
        let out = apply(&dep, &bell(), 1).unwrap();
        assert!((coherent_information(&out, &[0], &[1]).unwrap() + 1.0).abs() < 1e-12);
        let ad = channel("amplitude-damping", "gamma", 0.5);
        let out = apply(&ad, &bell(), 1).unwrap();
        assert!(coherent_information(&out, &[0], &[1]).unwrap().abs() < 1e-12);
        assert!(coherent_information(&out, &[0, 1], &[1]).is_err());
    }

    #[test]
    fn coherent_information_is_bounded_by_reference() {
        for seed in 0..50 {
            let rho = random_density(&sig(&[2, 3]), 6, seed).unwrap();
            let ic = coherent_information(&rho, &[0], &[1]).unwrap();
            assert!(ic.abs() <= 1.0 + 1e-9);
        }
    }

    #[test]
    fn entropy_exchange_examples() {
        let u = random_channel(3, 1, 2).unwrap();
        let rho = random_density(&sig(&[3]), 3, 9).unwrap();
        assert!(entropy_exchange(&u, &rho).unwrap().abs() < 1e-9);
        let dep = channel("depolarizing", "p", 1.0);
        let half = DensityMatrix::maximally_mixed(sig(&[2]));
        assert!((entropy_exchange(&dep, &half).unwrap() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn entropy_exchange_matches_purified_output() {
        for seed in 0..100u64 {
            let ch = random_channel(2, 1 + (seed % 4) as usize, seed).unwrap();
            let rho = random_density(&sig(&[2]), 2, seed + 500).unwrap();
            let psi = purify(&rho).unwrap().density();
            let joint = apply(&ch, &psi, 1).unwrap();
            assert!((entropy_exchange(&ch, &rho).unwrap() - entropy(&joint).unwrap()).abs() < 1e-8);
        }
    }

    #[test]
    fn holevo_examples() {
        let rho = random_density(&sig(&[2]), 2, 4).unwrap();
        let same = Ensemble::from_weights(vec![1.0, 2.0], vec![rho.clone(), rho]).unwrap();
        assert!(holevo(&same).unwrap().abs() < 1e-12);
        let zero = DensityMatrix::basis_state(sig(&[2]), 0).unwrap();
        let one = DensityMatrix::basis_state(sig(&[2]), 1).unwrap();
        let bits = Ensemble::from_weights(vec![0.5, 0.5], vec![zero, one]).unwrap();
        assert!((holevo(&bits).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn classical_correlation_examples() {
        let product = random_density(&sig(&[2]), 2, 1).unwrap().kron(&random_density(&sig(&[2]), 2, 2).unwrap()).unwrap();
        assert!(classical_correlation(&product).unwrap().0.abs() < 1e-9);
        let (j, _) = classical_correlation(&bell()).unwrap();
        assert!((j - 1.0).abs() < 1e-9);
        let cc = diag(&[0.5, 0.0, 0.0, 0.5], &[2, 2]);
        let (j, basis) = classical_correlation(&cc).unwrap();
        assert!((j - 1.0).abs() < 1e-9);
        assert_eq!(basis, MeasurementBasis::COMPUTATIONAL);
        assert!(basis.completeness_error() < 1e-12);
    }

    #[test]
    fn classical_correlation_rejects_qutrit_measurement() {
        let rho = DensityMatrix::maximally_mixed(sig(&[2, 3]));
        assert!(matches!(classical_correlation(&rho), Err(Error::Unsupported(_))));
        assert!(matches!(discord(&rho), Err(Error::Unsupported(_))));
    }

    #[test]
    fn grid_reduction_is_thread_independent() {
        for seed in 0..5 {
            let rho = random_density(&sig(&[2, 2]), 3, seed).unwrap();
            let a = classical_correlation_with(&rho, Execution::Sequential).unwrap();
            let b = classical_correlation_with(&rho, Execution::Parallel).unwrap();
            assert_eq!(a.0.to_bits(), b.0.to_bits());
            assert_eq!(a.1, b.1);
        }
    }

    #[test]
    fn no_random_basis_beats_the_optimizer() {
        let mut rng = rng_from_seed(2024);
        for seed in 0..10u64 {
            let rho = random_density(&sig(&[2, 2]), 1 + (seed % 4) as usize, seed).unwrap();
            let (j, _) = classical_correlation(&rho).unwrap();
            let s_a = marginal_entropy(&rho, &[0]).unwrap();
            for _ in 0..1000 {
                let v = haar_vector(2, &mut rng);
                let basis = MeasurementBasis::from_vector([v[0], v[1]]);
                let at = s_a - measured_conditional_entropy(&rho, &basis).unwrap();
                assert!(at <= j + 1e-9, "seed {seed}: {at} > {j}");
            }
        }
    }

    #[test]
    fn canonical_basis_is_stable() {
        let b = MeasurementBasis::canonical(PI - 0.3, 1.0);
        assert!((b.theta - 0.3).abs() < 1e-12);
        assert!((b.phi - (1.0 + PI)).abs() < 1e-12);
        let v = b.vectors()[0];
        assert!((MeasurementBasis::from_vector(v).theta - b.theta).abs() < 1e-12);
        assert_eq!(MeasurementBasis::canonical(0.0, 2.5), MeasurementBasis::COMPUTATIONAL);
    }

    #[test]
    fn discord_examples() {
        assert!(discord(&diag(&[0.5, 0.0, 0.0, 0.5], &[2, 2])).unwrap().abs() < 1e-9);
        assert!((discord(&bell()).unwrap() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn werner_discord_is_continuous() {
        let mut prev = discord(&werner(0.0)).unwrap();
        for i in 1..=100 {
            let d = discord(&werner(i as f64 / 100.0)).unwrap();
            assert!((d - prev).abs() <= 0.05, "jump at {i}");
            prev = d;
        }
    }

    #[test]
    fn discord_bounded_by_measured_marginal() {
        for seed in 0..30u64 {
            let rho = random_density(&sig(&[2, 2]), 1 + (seed % 4) as usize, seed).unwrap();
            let d = discord(&rho).unwrap();
            assert!(d >= -1e-8);
            assert!(d <= marginal_entropy(&rho, &[0]).unwrap() + 1e-8);
        }
    }

    #[test]
    fn concurrence_examples() {
        assert!((concurrence(&bell()).unwrap() - 1.0).abs() < 1e-9);
        assert!((eof(&bell()).unwrap() - 1.0).abs() < 1e-9);
        let product = PureState::basis(sig(&[2, 2]), 0).unwrap().density();
        assert!(concurrence(&product).unwrap().abs() < 1e-9);
        assert!(eof(&product).unwrap().abs() < 1e-9);
        let w = named_state("w", &sig(&[2, 2, 2])).unwrap().reduced(&[0, 1]).unwrap();
        assert!((concurrence(&w).unwrap() - 2.0 / 3.0).abs() < 1e-9);
    }

    #[test]
    fn eof_dimension_rules() {
        let psi = random_pure(&sig(&[2, 3]), 3);
        let marginal = entropy(&psi.reduced(&[0]).unwrap()).unwrap();
        assert!((eof(&psi.density()).unwrap() - marginal).abs() < 1e-12);
        let mixed = random_density(&sig(&[2, 3]), 2, 3).unwrap();
        assert!(matches!(eof(&mixed), Err(Error::Unsupported(_))));
    }

    #[test]
    fn carlen_lieb_examples() {
        let psi = random_pure(&sig(&[2, 2]), 5).density();
        let marginal = marginal_entropy(&psi, &[0]).unwrap();
        assert!((carlen_lieb_bound(&psi).unwrap() - marginal).abs() < 1e-9);
        assert_eq!(carlen_lieb_bound(&diag(&[0.5, 0.0, 0.0, 0.5], &[2, 2])).unwrap(), 0.0);
        for seed in 0..200 {
            let rho = random_density(&sig(&[2, 2]), 1 + (seed % 4) as usize, seed).unwrap();
            let (e, cl) = (eof(&rho).unwrap(), carlen_lieb_bound(&rho).unwrap());
            assert!(e >= cl - 1e-8, "seed {seed}: eof {e} < bound {cl}");
        }
    }

    #[test]
    fn disturbance_examples() {
        let rho = random_density(&sig(&[2]), 2, 6).unwrap();
        assert!(disturbance(&random_channel(2, 1, 3).unwrap(), &rho).unwrap().abs() < 1e-9);
        let dep = channel("depolarizing", "p", 1.0);
        let half = DensityMatrix::maximally_mixed(sig(&[2]));
        assert!((disturbance(&dep, &half).unwrap() - 2.0).abs() < 1e-12);
        let weak = channel("depolarizing", "p", 0.3);
        let twice = weak.then(&weak).unwrap();
        assert!(disturbance(&twice, &rho).unwrap() >= disturbance(&weak, &rho).unwrap() - 1e-8);
    }

    #[test]
    fn conditional_entropy_examples() {
        let a = random_density(&sig(&[2]), 2, 1).unwrap();
        let product = a.kron(&random_density(&sig(&[3]), 2, 2).unwrap()).unwrap();
        assert!((conditional_entropy(&product, &[0], &[1]).unwrap() - entropy(&a).unwrap()).abs() < 1e-12);
        assert!((conditional_entropy(&bell(), &[0], &[1]).unwrap() + 1.0).abs() < 1e-12);
        assert!((conditional_entropy(&bell(), &[1], &[0]).unwrap() + 1.0).abs() < 1e-12);
        let ghz = named_state("ghz", &sig(&[2, 2, 2])).unwrap().density();
        assert!(conditional_entropy(&ghz, &[0], &[1]).unwrap().abs() < 1e-12);
        assert!(conditional_entropy(&ghz, &[0], &[0]).is_err());
    }
}
