//! Density matrices, pure states, signal ensembles, purification and
//! random state sampling.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::config::Tolerances;
use crate::error::{Error, Result};
use crate::random::{ginibre, haar_unitary, haar_vector, rng_from_seed};
use crate::tensor::{
    hermitian_eigensystem, hermitian_eigenvalues, kron, partial_trace, reduced_from_vector,
    ComplexMatrix, DimSignature, HermitianSpectrum, C64, ZERO,
};

/// Eigenvalues at or below this weight do not count towards the rank.
pub const RANK_CUTOFF: f64 = 1e-12;

/// Positive semidefinite, unit-trace operator with a subsystem signature.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    matrix: ComplexMatrix,
    sig: DimSignature,
}

impl DensityMatrix {
    /// Validates Hermiticity, unit trace and positivity.
    pub fn new(matrix: ComplexMatrix, sig: DimSignature) -> Result<Self> {
        let tol = Tolerances::DEFAULT;
        if !matrix.is_square() || matrix.rows() != sig.total() {
            return Err(Error::dim(format!(
                "{}x{} matrix does not match signature {sig}",
                matrix.rows(),
                matrix.cols()
            )));
        }
        let herm = matrix.hermiticity_error();
        if herm > tol.hermiticity {
            return Err(Error::invalid(format!("density matrix not Hermitian (error {herm:e})")));
        }
        let trace = matrix.trace();
        if (trace.re - 1.0).abs() > tol.trace || trace.im.abs() > tol.trace {
            return Err(Error::invalid(format!("density matrix trace is {trace}, expected 1")));
        }
        let min = hermitian_eigenvalues(&matrix)?.last().copied().unwrap_or(0.0);
        if min < -tol.psd_clip {
            return Err(Error::invalid(format!("density matrix has eigenvalue {min:e} < 0")));
        }
        Ok(Self { matrix, sig })
    }

    /// Skips validation; for states produced by trace-preserving maps of
    /// already valid states.
    pub(crate) fn from_parts_unchecked(matrix: ComplexMatrix, sig: DimSignature) -> Self {
        debug_assert_eq!(matrix.rows(), sig.total());
        Self { matrix, sig }
    }

    pub fn maximally_mixed(sig: DimSignature) -> Self {
        let n = sig.total();
        Self { matrix: ComplexMatrix::from_real_diagonal(&vec![1.0 / n as f64; n]), sig }
    }

    /// `|k><k|` in the computational basis.
    pub fn basis_state(sig: DimSignature, k: usize) -> Result<Self> {
        let n = sig.total();
        if k >= n {
            return Err(Error::Index { index: k, count: n });
        }
        let mut diag = vec![0.0; n];
        diag[k] = 1.0;
        Ok(Self { matrix: ComplexMatrix::from_real_diagonal(&diag), sig })
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn signature(&self) -> &DimSignature {
        &self.sig
    }

    pub fn dim(&self) -> usize {
        self.sig.total()
    }

    pub fn partial_trace(&self, keep: &[usize]) -> Result<Self> {
        let (m, sig) = partial_trace(&self.matrix, &self.sig, keep)?;
        Ok(Self { matrix: m, sig })
    }

    pub fn kron(&self, other: &Self) -> Result<Self> {
        Ok(Self { matrix: kron(&self.matrix, &other.matrix)?, sig: self.sig.concat(&other.sig)? })
    }

    /// `Tr rho^2`
    pub fn purity(&self) -> f64 {
        // Tr(rho rho) = sum |rho_ij|^2 for Hermitian rho
        self.matrix.data().iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn eigenvalues(&self) -> Result<Vec<f64>> {
        hermitian_eigenvalues(&self.matrix)
    }

    pub fn spectrum(&self) -> Result<HermitianSpectrum> {
        hermitian_eigensystem(&self.matrix)
    }

    pub fn rank(&self) -> Result<usize> {
        Ok(self.eigenvalues()?.iter().filter(|&&l| l > RANK_CUTOFF).count())
    }

    /// Same operator, different signature with the same total dimension.
    pub fn with_signature(&self, sig: DimSignature) -> Result<Self> {
        if sig.total() != self.sig.total() {
            return Err(Error::dim(format!("cannot relabel {} as {sig}", self.sig)));
        }
        Ok(Self { matrix: self.matrix.clone(), sig })
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.matrix.max_abs_diff(&other.matrix)
    }
}

/// Unit vector with a subsystem signature.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    vector: Vec<C64>,
    sig: DimSignature,
}

impl PureState {
    pub fn new(vector: Vec<C64>, sig: DimSignature) -> Result<Self> {
        if vector.len() != sig.total() {
            return Err(Error::dim(format!("{} amplitudes for signature {sig}", vector.len())));
        }
        let norm = norm(&vector);
        if (norm - 1.0).abs() > Tolerances::DEFAULT.trace {
            return Err(Error::invalid(format!("state norm is {norm}, expected 1")));
        }
        Ok(Self { vector, sig })
    }

    /// Rescales to unit norm; fails on the zero vector.
    pub fn normalized(mut vector: Vec<C64>, sig: DimSignature) -> Result<Self> {
        if vector.len() != sig.total() {
            return Err(Error::dim(format!("{} amplitudes for signature {sig}", vector.len())));
        }
        let n = norm(&vector);
        if n < 1e-300 || !n.is_finite() {
            return Err(Error::invalid("cannot normalize the zero vector"));
        }
        vector.iter_mut().for_each(|z| *z /= n);
        Ok(Self { vector, sig })
    }

    pub(crate) fn from_parts_unchecked(vector: Vec<C64>, sig: DimSignature) -> Self {
        debug_assert_eq!(vector.len(), sig.total());
        Self { vector, sig }
    }

    pub fn basis(sig: DimSignature, k: usize) -> Result<Self> {
        let n = sig.total();
        if k >= n {
            return Err(Error::Index { index: k, count: n });
        }
        let mut v = vec![ZERO; n];
        v[k] = C64::new(1.0, 0.0);
        Ok(Self { vector: v, sig })
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.vector
    }

    pub fn signature(&self) -> &DimSignature {
        &self.sig
    }

    pub fn density(&self) -> DensityMatrix {
        DensityMatrix { matrix: ComplexMatrix::outer(&self.vector), sig: self.sig.clone() }
    }

    /// Marginal on `keep` (original subsystem order).
    pub fn reduced(&self, keep: &[usize]) -> Result<DensityMatrix> {
        let (m, sig) = reduced_from_vector(&self.vector, &self.sig, keep)?;
        Ok(DensityMatrix { matrix: m, sig })
    }

    pub fn kron(&self, other: &Self) -> Result<Self> {
        let sig = self.sig.concat(&other.sig)?;
        let mut v = Vec::with_capacity(sig.total());
        for a in &self.vector {
            for b in &other.vector {
                v.push(a * b);
            }
        }
        Ok(Self { vector: v, sig })
    }

    /// `|<self|other>|^2`
    pub fn fidelity(&self, other: &Self) -> f64 {
        self.vector.iter().zip(&other.vector).map(|(a, b)| a.conj() * b).sum::<C64>().norm_sqr()
    }
}

fn norm(v: &[C64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Weighted collection of signal states sharing one signature.
#[derive(Debug, Clone, PartialEq)]
pub struct Ensemble {
    members: Vec<(f64, DensityMatrix)>,
}

impl Ensemble {
    pub fn new(members: Vec<(f64, DensityMatrix)>) -> Result<Self> {
        if members.is_empty() {
            return Err(Error::invalid("ensemble has no members"));
        }
        let sig = members[0].1.signature().clone();
        let mut total = 0.0;
        for (k, (p, rho)) in members.iter().enumerate() {
            if !p.is_finite() || *p < 0.0 {
                return Err(Error::invalid(format!("member {k} has probability {p}")));
            }
            if rho.signature() != &sig {
                return Err(Error::dim(format!(
                    "member {k} has signature {}, expected {sig}",
                    rho.signature()
                )));
            }
            total += p;
        }
        if (total - 1.0).abs() > Tolerances::DEFAULT.trace {
            return Err(Error::invalid(format!("probabilities sum to {total}, expected 1")));
        }
        Ok(Self { members })
    }

    /// Builds an ensemble from non-negative weights, normalizing them.
    pub fn from_weights(weights: Vec<f64>, states: Vec<DensityMatrix>) -> Result<Self> {
        if weights.len() != states.len() {
            return Err(Error::dim("one weight per state required"));
        }
        let total: f64 = weights.iter().sum();
        if !total.is_finite() || total <= 0.0 {
            return Err(Error::invalid(format!("weights sum to {total}")));
        }
        Self::new(weights.into_iter().map(|w| w / total).zip(states).collect())
    }

    pub fn members(&self) -> &[(f64, DensityMatrix)] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn signature(&self) -> &DimSignature {
        self.members[0].1.signature()
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.members.iter().map(|(p, _)| *p).collect()
    }

    /// Every member has purity at least `1 - tol`.
    pub fn is_pure_signal(&self, tol: f64) -> bool {
        self.members.iter().all(|(_, rho)| rho.purity() >= 1.0 - tol)
    }

    pub fn average(&self) -> DensityMatrix {
        ensemble_average(self)
    }

    /// Apply `f` to every member, keeping the weights.
    pub fn map<F>(&self, mut f: F) -> Result<Self>
    where
        F: FnMut(&DensityMatrix) -> Result<DensityMatrix>,
    {
        let members = self
            .members
            .iter()
            .map(|(p, rho)| Ok((*p, f(rho)?)))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { members })
    }
}

/// `sum_k p_k rho_k`
pub fn ensemble_average(e: &Ensemble) -> DensityMatrix {
    let sig = e.signature().clone();
    let n = sig.total();
    let mut acc = ComplexMatrix::zeros(n, n);
    for (p, rho) in &e.members {
        acc = &acc + &rho.matrix().scale_real(*p);
    }
    DensityMatrix::from_parts_unchecked(acc, sig)
}

/// Purification with the reference placed first: the result lives on
/// `[rank] ++ rho.signature()` and tracing out subsystem 0 returns `rho`.
pub fn purify(rho: &DensityMatrix) -> Result<PureState> {
    let spec = rho.spectrum()?;
    let support: Vec<usize> =
        (0..spec.eigenvalues.len()).filter(|&k| spec.eigenvalues[k] > RANK_CUTOFF).collect();
    let rank = support.len().max(1);
    let n = rho.dim();
    let mut v = vec![ZERO; rank * n];
    for (j, &k) in support.iter().enumerate() {
        let w = spec.eigenvalues[k].sqrt();
        for q in 0..n {
            v[j * n + q] = spec.eigenvectors[(q, k)] * w;
        }
    }
    let sig = DimSignature::new(vec![rank])?.concat(rho.signature())?;
    PureState::normalized(v, sig)
}

/// Decomposition of `rho` into `count` pure states: the eigen-decomposition
/// rotated by the first `rank` columns of a Haar unitary on `C^count`.
pub fn pure_decomposition(rho: &DensityMatrix, count: usize, seed: u64) -> Result<Ensemble> {
    pure_decomposition_with(rho, count, &mut rng_from_seed(seed))
}

pub fn pure_decomposition_with<R: Rng + ?Sized>(
    rho: &DensityMatrix,
    count: usize,
    rng: &mut R,
) -> Result<Ensemble> {
    let spec = rho.spectrum()?;
    let support: Vec<usize> =
        (0..spec.eigenvalues.len()).filter(|&k| spec.eigenvalues[k] > RANK_CUTOFF).collect();
    if count < support.len() {
        return Err(Error::Infeasible(format!(
            "{count} pure states cannot average to a rank-{} state",
            support.len()
        )));
    }
    let n = rho.dim();
    let u = haar_unitary(count, rng);
    let mut weights = Vec::with_capacity(count);
    let mut states = Vec::with_capacity(count);
    for k in 0..count {
        let mut v = vec![ZERO; n];
        for (j, &e) in support.iter().enumerate() {
            let coeff = u[(k, j)] * spec.eigenvalues[e].sqrt();
            for (q, vq) in v.iter_mut().enumerate() {
                *vq += coeff * spec.eigenvectors[(q, e)];
            }
        }
        let p = norm(&v).powi(2);
        let member = if p > 1e-300 {
            PureState::normalized(v, rho.signature().clone())?
        } else {
            PureState::from_parts_unchecked(spec.eigenvector(0), rho.signature().clone())
        };
        weights.push(p);
        states.push(member.density());
    }
    Ensemble::from_weights(weights, states)
}

/// Haar-random pure state.
pub fn random_pure(sig: &DimSignature, seed: u64) -> PureState {
    random_pure_with(sig, &mut rng_from_seed(seed))
}

pub fn random_pure_with<R: Rng + ?Sized>(sig: &DimSignature, rng: &mut R) -> PureState {
    PureState::from_parts_unchecked(haar_vector(sig.total(), rng), sig.clone())
}

/// Mixed state from the induced measure: the marginal of a Haar pure state
/// on `sig ⊗ C^rank`, sampled as `G G^dagger / Tr` with `G` Ginibre.
pub fn random_density(sig: &DimSignature, rank: usize, seed: u64) -> Result<DensityMatrix> {
    random_density_with(sig, rank, &mut rng_from_seed(seed))
}

pub fn random_density_with<R: Rng + ?Sized>(
    sig: &DimSignature,
    rank: usize,
    rng: &mut R,
) -> Result<DensityMatrix> {
    let n = sig.total();
    if rank == 0 || rank > n {
        return Err(Error::invalid(format!("rank {rank} outside 1..={n}")));
    }
    let g = ginibre(n, rank, rng);
    let rho = &g * &g.adjoint();
    let t = rho.trace().re;
    Ok(DensityMatrix::from_parts_unchecked(rho.scale_real(1.0 / t).hermitian_part(), sig.clone()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NamedState {
    Bell,
    Ghz,
    W,
    ProductZero,
}

impl FromStr for NamedState {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "bell" => Ok(Self::Bell),
            "ghz" => Ok(Self::Ghz),
            "w" => Ok(Self::W),
            "product-zero" | "product_zero" => Ok(Self::ProductZero),
            _ => Err(Error::UnknownName { kind: "state", name: s.to_string() }),
        }
    }
}

impl fmt::Display for NamedState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Bell => "bell",
            Self::Ghz => "ghz",
            Self::W => "w",
            Self::ProductZero => "product-zero",
        })
    }
}

/// Textbook fixtures. Bell needs two qubits, GHZ and W need two or more.
pub fn named_state(name: &str, sig: &DimSignature) -> Result<PureState> {
    let which: NamedState = name.parse()?;
    let n = sig.total();
    let all_qubits = sig.dims().iter().all(|&d| d == 2);
    let mut v = vec![ZERO; n];
    match which {
        NamedState::ProductZero => v[0] = C64::new(1.0, 0.0),
        NamedState::Bell => {
            if sig.dims() != [2, 2] {
                return Err(Error::dim(format!("bell state needs signature 2x2, got {sig}")));
            }
            v[0] = C64::new(1.0, 0.0);
            v[3] = C64::new(1.0, 0.0);
        }
        NamedState::Ghz => {
            if !all_qubits || sig.len() < 2 {
                return Err(Error::dim(format!("ghz state needs two or more qubits, got {sig}")));
            }
            v[0] = C64::new(1.0, 0.0);
            v[n - 1] = C64::new(1.0, 0.0);
        }
        NamedState::W => {
            if !all_qubits || sig.len() < 2 {
                return Err(Error::dim(format!("w state needs two or more qubits, got {sig}")));
            }
            for k in 0..sig.len() {
                v[1 << k] = C64::new(1.0, 0.0);
            }
        }
    }
    PureState::normalized(v, sig.clone())
}

/// Either kind of state, as read from a literal.
#[derive(Debug, Clone, PartialEq)]
pub enum State {
    Pure(PureState),
    Mixed(DensityMatrix),
}

impl State {
    pub fn density(&self) -> DensityMatrix {
        match self {
            State::Pure(p) => p.density(),
            State::Mixed(d) => d.clone(),
        }
    }

    pub fn signature(&self) -> &DimSignature {
        match self {
            State::Pure(p) => p.signature(),
            State::Mixed(d) => d.signature(),
        }
    }
}

/// Textual state record: `dims` plus exactly one of `vector`, `density` or
/// `named`. Complex numbers are `[re, im]` pairs, matrices row-major.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateLiteral {
    pub dims: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub vector: Option<Vec<[f64; 2]>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub density: Option<Vec<Vec<[f64; 2]>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub named: Option<String>,
}

/// Hand-typed literals are accepted within this distance of unit
/// norm/trace and then renormalized.
const LITERAL_NORM_TOLERANCE: f64 = 1e-6;

impl StateLiteral {
    pub fn from_pure(state: &PureState) -> Self {
        Self {
            dims: state.signature().dims().to_vec(),
            vector: Some(state.amplitudes().iter().map(|z| [z.re, z.im]).collect()),
            density: None,
            named: None,
        }
    }

    pub fn to_state(&self) -> Result<State> {
        let sig = DimSignature::new(self.dims.clone())?;
        match (&self.vector, &self.density, &self.named) {
            (Some(v), None, None) => {
                let amps: Vec<C64> = v.iter().map(|[re, im]| C64::new(*re, *im)).collect();
                if amps.len() != sig.total() {
                    return Err(Error::dim(format!(
                        "vector has {} entries, dims {sig} need {}",
                        amps.len(),
                        sig.total()
                    )));
                }
                let n = norm(&amps);
                if (n - 1.0).abs() > LITERAL_NORM_TOLERANCE {
                    return Err(Error::invalid(format!("state vector norm is {n}, expected 1")));
                }
                Ok(State::Pure(PureState::normalized(amps, sig)?))
            }
            (None, Some(rows), None) => {
                let n = sig.total();
                if rows.len() != n || rows.iter().any(|r| r.len() != n) {
                    return Err(Error::dim(format!("density must be {n}x{n} for dims {sig}")));
                }
                let data: Vec<C64> =
                    rows.iter().flatten().map(|[re, im]| C64::new(*re, *im)).collect();
                let m = ComplexMatrix::new(n, n, data)?;
                let t = m.trace();
                if (t.re - 1.0).abs() > LITERAL_NORM_TOLERANCE || t.im.abs() > LITERAL_NORM_TOLERANCE {
                    return Err(Error::invalid(format!("density trace is {t}, expected 1")));
                }
                Ok(State::Mixed(DensityMatrix::new(m.scale_real(1.0 / t.re).hermitian_part(), sig)?))
            }
            (None, None, Some(name)) => Ok(State::Pure(named_state(name, &sig)?)),
            _ => Err(Error::invalid(
                "state literal needs exactly one of `vector`, `density`, `named`",
            )),
        }
    }
}
