//! Dense complex matrices over tensor-product spaces.
//!
//! Storage is row-major. Subsystem order always follows the
//! [`DimSignature`] and is never permuted implicitly; use
//! [`permute_subsystems`] when a different order is needed.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Sub};

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::config::{Tolerances, MAX_DIMENSION};
use crate::error::{Error, Result};

pub type C64 = Complex64;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);

/// Local dimension of each subsystem, in order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct DimSignature {
    dims: Vec<usize>,
}

impl DimSignature {
    pub fn new(dims: Vec<usize>) -> Result<Self> {
        if dims.is_empty() {
            return Err(Error::dim("signature needs at least one subsystem"));
        }
        if let Some(pos) = dims.iter().position(|&d| d == 0) {
            return Err(Error::dim(format!("subsystem {pos} has dimension 0")));
        }
        let mut total: usize = 1;
        for &d in &dims {
            total = total.saturating_mul(d);
        }
        if total > MAX_DIMENSION {
            return Err(Error::DimensionLimit { side: total, max: MAX_DIMENSION });
        }
        Ok(Self { dims })
    }

    pub fn qubits(n: usize) -> Result<Self> {
        Self::new(vec![2; n])
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn len(&self) -> usize {
        self.dims.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dims.is_empty()
    }

    pub fn dim(&self, index: usize) -> usize {
        self.dims[index]
    }

    pub fn total(&self) -> usize {
        self.dims.iter().product()
    }

    /// Row-major strides: the last subsystem varies fastest.
    pub fn strides(&self) -> Vec<usize> {
        let mut strides = vec![1; self.dims.len()];
        for k in (0..self.dims.len().saturating_sub(1)).rev() {
            strides[k] = strides[k + 1] * self.dims[k + 1];
        }
        strides
    }

    pub fn check_index(&self, index: usize) -> Result<()> {
        if index >= self.dims.len() {
            return Err(Error::Index { index, count: self.dims.len() });
        }
        Ok(())
    }

    /// Sub-signature for `positions`, in the order given.
    pub fn select(&self, positions: &[usize]) -> Result<Self> {
        for &p in positions {
            self.check_index(p)?;
        }
        Self::new(positions.iter().map(|&p| self.dims[p]).collect())
    }

    /// Indices not in `positions`, ascending.
    pub fn complement(&self, positions: &[usize]) -> Vec<usize> {
        (0..self.dims.len()).filter(|k| !positions.contains(k)).collect()
    }

    pub fn replaced(&self, position: usize, dim: usize) -> Result<Self> {
        self.check_index(position)?;
        let mut dims = self.dims.clone();
        dims[position] = dim;
        Self::new(dims)
    }

    pub fn inserted(&self, position: usize, dim: usize) -> Result<Self> {
        if position > self.dims.len() {
            return Err(Error::Index { index: position, count: self.dims.len() + 1 });
        }
        let mut dims = self.dims.clone();
        dims.insert(position, dim);
        Self::new(dims)
    }

    pub fn concat(&self, other: &Self) -> Result<Self> {
        let mut dims = self.dims.clone();
        dims.extend_from_slice(&other.dims);
        Self::new(dims)
    }
}

impl TryFrom<Vec<usize>> for DimSignature {
    type Error = Error;
    fn try_from(dims: Vec<usize>) -> Result<Self> {
        Self::new(dims)
    }
}

impl From<DimSignature> for Vec<usize> {
    fn from(sig: DimSignature) -> Self {
        sig.dims
    }
}

impl fmt::Display for DimSignature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.dims.iter().map(|d| d.to_string()).collect();
        write!(f, "{}", parts.join("x"))
    }
}

/// Dense row-major complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl ComplexMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<C64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::dim("matrix needs positive rows and columns"));
        }
        if data.len() != rows * cols {
            return Err(Error::dim(format!(
                "{} entries supplied for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        if data.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::invalid("matrix has a non-finite entry"));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![ZERO; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = ONE;
        }
        m
    }

    pub fn from_real(rows: usize, cols: usize, values: &[f64]) -> Result<Self> {
        Self::new(rows, cols, values.iter().map(|&x| C64::new(x, 0.0)).collect())
    }

    pub fn from_real_diagonal(values: &[f64]) -> Self {
        let n = values.len();
        let mut m = Self::zeros(n, n);
        for (i, &v) in values.iter().enumerate() {
            m.data[i * n + i] = C64::new(v, 0.0);
        }
        m
    }

    pub fn column(values: Vec<C64>) -> Result<Self> {
        let n = values.len();
        Self::new(n, 1, values)
    }

    /// `|v><v|`
    pub fn outer(v: &[C64]) -> Self {
        let n = v.len();
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                m.data[i * n + j] = v[i] * v[j].conj();
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn data(&self) -> &[C64] {
        &self.data
    }

    pub fn into_data(self) -> Vec<C64> {
        self.data
    }

    pub fn adjoint(&self) -> Self {
        let mut out = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.data[j * self.rows + i] = self.data[i * self.cols + j].conj();
            }
        }
        out
    }

    pub fn conj(&self) -> Self {
        Self { rows: self.rows, cols: self.cols, data: self.data.iter().map(|z| z.conj()).collect() }
    }

    pub fn scale(&self, factor: C64) -> Self {
        Self { rows: self.rows, cols: self.cols, data: self.data.iter().map(|z| z * factor).collect() }
    }

    pub fn scale_real(&self, factor: f64) -> Self {
        self.scale(C64::new(factor, 0.0))
    }

    pub fn trace(&self) -> C64 {
        (0..self.rows.min(self.cols)).map(|i| self.data[i * self.cols + i]).sum()
    }

    pub fn diagonal_real(&self) -> Vec<f64> {
        (0..self.rows.min(self.cols)).map(|i| self.data[i * self.cols + i].re).collect()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Largest entrywise modulus of `self - other`.
    ///
    /// Panics when the shapes differ.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "shape mismatch");
        self.data.iter().zip(&other.data).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn hermiticity_error(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        let n = self.rows;
        let mut worst: f64 = 0.0;
        for i in 0..n {
            for j in i..n {
                worst = worst.max((self.data[i * n + j] - self.data[j * n + i].conj()).norm());
            }
        }
        worst
    }

    pub fn unitarity_error(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        (&self.adjoint() * self).max_abs_diff(&Self::identity(self.rows))
    }

    /// Columns orthonormal: `max |m^dagger m - I|`.
    pub fn isometry_error(&self) -> f64 {
        (&self.adjoint() * self).max_abs_diff(&Self::identity(self.cols))
    }

    /// `(m + m^dagger) / 2`
    pub fn hermitian_part(&self) -> Self {
        let adj = self.adjoint();
        (self + &adj).scale_real(0.5)
    }

    pub fn kron(&self, other: &Self) -> Result<Self> {
        kron(self, other)
    }

    pub(crate) fn to_nalgebra(&self) -> DMatrix<C64> {
        DMatrix::from_row_slice(self.rows, self.cols, &self.data)
    }

    pub(crate) fn from_nalgebra(m: &DMatrix<C64>) -> Self {
        let (rows, cols) = m.shape();
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(m[(i, j)]);
            }
        }
        Self { rows, cols, data }
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = C64;
    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        assert!(i < self.rows && j < self.cols, "index ({i}, {j}) out of bounds");
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        assert!(i < self.rows && j < self.cols, "index ({i}, {j}) out of bounds");
        &mut self.data[i * self.cols + j]
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.cols, rhs.rows, "inner dimensions differ");
        let (n, m, p) = (self.rows, self.cols, rhs.cols);
        let mut out = ComplexMatrix::zeros(n, p);
        for i in 0..n {
            let row = &mut out.data[i * p..(i + 1) * p];
            for k in 0..m {
                let a = self.data[i * m + k];
                if a == ZERO {
                    continue;
                }
                let rhs_row = &rhs.data[k * p..(k + 1) * p];
                for (o, b) in row.iter_mut().zip(rhs_row) {
                    *o += a * b;
                }
            }
        }
        out
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "shape mismatch");
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "shape mismatch");
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

/// Kronecker product `a ⊗ b`.
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    let rows = a.rows.saturating_mul(b.rows);
    let cols = a.cols.saturating_mul(b.cols);
    let side = rows.max(cols);
    if side > MAX_DIMENSION {
        return Err(Error::DimensionLimit { side, max: MAX_DIMENSION });
    }
    let mut out = ComplexMatrix::zeros(rows, cols);
    for i in 0..a.rows {
        for j in 0..a.cols {
            let x = a.data[i * a.cols + j];
            if x == ZERO {
                continue;
            }
            for k in 0..b.rows {
                for l in 0..b.cols {
                    out.data[(i * b.rows + k) * cols + j * b.cols + l] = x * b.data[k * b.cols + l];
                }
            }
        }
    }
    Ok(out)
}

/// Flat offsets of every joint index over `positions` (row-major in the
/// order given), measured with the strides of `sig`.
pub(crate) fn offsets(sig: &DimSignature, positions: &[usize]) -> Vec<usize> {
    let strides = sig.strides();
    let mut out = vec![0usize];
    for &p in positions {
        let d = sig.dim(p);
        let s = strides[p];
        let mut next = Vec::with_capacity(out.len() * d);
        for &base in &out {
            for k in 0..d {
                next.push(base + k * s);
            }
        }
        out = next;
    }
    out
}

fn validate_positions(sig: &DimSignature, positions: &[usize]) -> Result<()> {
    for (k, &p) in positions.iter().enumerate() {
        sig.check_index(p)?;
        if positions[..k].contains(&p) {
            return Err(Error::dim(format!("subsystem {p} listed twice")));
        }
    }
    Ok(())
}

fn check_square_signature(m: &ComplexMatrix, sig: &DimSignature) -> Result<()> {
    if !m.is_square() || m.rows() != sig.total() {
        return Err(Error::dim(format!(
            "{}x{} matrix does not match signature {sig} (side {})",
            m.rows(),
            m.cols(),
            sig.total()
        )));
    }
    Ok(())
}

/// Trace out every subsystem not in `keep`. The kept subsystems stay in
/// their original order regardless of the order of `keep`.
pub fn partial_trace(
    m: &ComplexMatrix,
    sig: &DimSignature,
    keep: &[usize],
) -> Result<(ComplexMatrix, DimSignature)> {
    check_square_signature(m, sig)?;
    if keep.is_empty() {
        return Err(Error::dim("partial trace must keep at least one subsystem"));
    }
    validate_positions(sig, keep)?;
    let mut kept: Vec<usize> = keep.to_vec();
    kept.sort_unstable();
    let traced = sig.complement(&kept);
    let kept_off = offsets(sig, &kept);
    let traced_off = offsets(sig, &traced);
    let n = sig.total();
    let k = kept_off.len();
    let mut out = ComplexMatrix::zeros(k, k);
    for (i, &oi) in kept_off.iter().enumerate() {
        for (j, &oj) in kept_off.iter().enumerate() {
            let mut acc = ZERO;
            for &t in &traced_off {
                acc += m.data[(oi + t) * n + oj + t];
            }
            out.data[i * k + j] = acc;
        }
    }
    Ok((out, sig.select(&kept)?))
}

/// Reduced density matrix of the pure state `psi` on the `keep` subsystems
/// (original order). Equivalent to `partial_trace(|psi><psi|)` without
/// forming the full projector.
pub fn reduced_from_vector(
    psi: &[C64],
    sig: &DimSignature,
    keep: &[usize],
) -> Result<(ComplexMatrix, DimSignature)> {
    if psi.len() != sig.total() {
        return Err(Error::dim(format!("vector of length {} vs signature {sig}", psi.len())));
    }
    if keep.is_empty() {
        return Err(Error::dim("partial trace must keep at least one subsystem"));
    }
    validate_positions(sig, keep)?;
    let mut kept: Vec<usize> = keep.to_vec();
    kept.sort_unstable();
    let traced = sig.complement(&kept);
    let kept_off = offsets(sig, &kept);
    let traced_off = offsets(sig, &traced);
    let k = kept_off.len();
    let mut out = ComplexMatrix::zeros(k, k);
    for i in 0..k {
        for j in i..k {
            let mut acc = ZERO;
            for &t in &traced_off {
                acc += psi[kept_off[i] + t] * psi[kept_off[j] + t].conj();
            }
            out.data[i * k + j] = acc;
            out.data[j * k + i] = acc.conj();
        }
    }
    Ok((out, sig.select(&kept)?))
}

/// Reorder subsystems: position `k` of the result holds old subsystem
/// `order[k]`.
pub fn permute_subsystems(
    m: &ComplexMatrix,
    sig: &DimSignature,
    order: &[usize],
) -> Result<(ComplexMatrix, DimSignature)> {
    check_square_signature(m, sig)?;
    check_permutation(sig, order)?;
    let off = offsets(sig, order);
    let n = off.len();
    let mut out = ComplexMatrix::zeros(n, n);
    for (i, &oi) in off.iter().enumerate() {
        for (j, &oj) in off.iter().enumerate() {
            out.data[i * n + j] = m.data[oi * n + oj];
        }
    }
    Ok((out, sig.select(order)?))
}

pub fn permute_vector(
    psi: &[C64],
    sig: &DimSignature,
    order: &[usize],
) -> Result<(Vec<C64>, DimSignature)> {
    if psi.len() != sig.total() {
        return Err(Error::dim("vector length does not match signature"));
    }
    check_permutation(sig, order)?;
    let off = offsets(sig, order);
    Ok((off.iter().map(|&o| psi[o]).collect(), sig.select(order)?))
}

fn check_permutation(sig: &DimSignature, order: &[usize]) -> Result<()> {
    if order.len() != sig.len() {
        return Err(Error::dim("permutation must mention every subsystem once"));
    }
    validate_positions(sig, order)
}

/// Left-multiply the rows of `m` (indexed by `sig`) by `op`, which maps the
/// joint space of `positions` (dims in the order listed) onto a space with
/// local dims `out_dims`. Columns are untouched. Returns the new row
/// signature alongside the product.
pub fn apply_local(
    op: &ComplexMatrix,
    m: &ComplexMatrix,
    sig: &DimSignature,
    positions: &[usize],
    out_dims: &[usize],
) -> Result<(ComplexMatrix, DimSignature)> {
    if m.rows() != sig.total() {
        return Err(Error::dim(format!("{} rows vs signature {sig}", m.rows())));
    }
    validate_positions(sig, positions)?;
    if out_dims.len() != positions.len() {
        return Err(Error::dim("one output dimension per acted-on subsystem required"));
    }
    let in_size: usize = positions.iter().map(|&p| sig.dim(p)).product();
    let out_size: usize = out_dims.iter().product();
    if op.cols() != in_size || op.rows() != out_size {
        return Err(Error::dim(format!(
            "operator is {}x{}, expected {out_size}x{in_size}",
            op.rows(),
            op.cols()
        )));
    }
    let mut new_dims = sig.dims().to_vec();
    for (&p, &d) in positions.iter().zip(out_dims) {
        new_dims[p] = d;
    }
    let new_sig = DimSignature::new(new_dims)?;
    let rest = sig.complement(positions);
    let old_act = offsets(sig, positions);
    let old_rest = offsets(sig, &rest);
    let new_act = offsets(&new_sig, positions);
    let new_rest = offsets(&new_sig, &rest);
    let cols = m.cols();
    let mut out = ComplexMatrix::zeros(new_sig.total(), cols);
    for (&or, &nr) in old_rest.iter().zip(&new_rest) {
        for (a, &na) in new_act.iter().enumerate() {
            let dst = (na + nr) * cols;
            for (b, &ob) in old_act.iter().enumerate() {
                let coeff = op.data[a * in_size + b];
                if coeff == ZERO {
                    continue;
                }
                let src = (ob + or) * cols;
                for c in 0..cols {
                    out.data[dst + c] += coeff * m.data[src + c];
                }
            }
        }
    }
    Ok((out, new_sig))
}

/// `A rho A^dagger` with `A` acting on `positions`, identity elsewhere.
pub fn conjugate_local(
    op: &ComplexMatrix,
    rho: &ComplexMatrix,
    sig: &DimSignature,
    positions: &[usize],
    out_dims: &[usize],
) -> Result<(ComplexMatrix, DimSignature)> {
    check_square_signature(rho, sig)?;
    let (left, new_sig) = apply_local(op, rho, sig, positions, out_dims)?;
    // (A (A rho)^dagger)^dagger = A rho A^dagger
    let (both, _) = apply_local(op, &left.adjoint(), sig, positions, out_dims)?;
    Ok((both.adjoint(), new_sig))
}

/// Full-space matrix `I ⊗ op ⊗ I` for a square operator on `acting_on`.
pub fn embed_operator(
    op: &ComplexMatrix,
    sig: &DimSignature,
    acting_on: &[usize],
) -> Result<ComplexMatrix> {
    let dims: Vec<usize> = acting_on.iter().map(|&p| sig.dim(p)).collect();
    let (full, _) = apply_local(op, &ComplexMatrix::identity(sig.total()), sig, acting_on, &dims)?;
    Ok(full)
}

/// Conjugate `state` by the unitary `u` acting on `acting_on`.
pub fn apply_unitary(
    state: &ComplexMatrix,
    u: &ComplexMatrix,
    sig: &DimSignature,
    acting_on: &[usize],
) -> Result<ComplexMatrix> {
    let err = u.unitarity_error();
    if err > Tolerances::DEFAULT.unitarity {
        return Err(Error::invalid(format!("operator is not unitary (error {err:e})")));
    }
    let dims: Vec<usize> = acting_on.iter().map(|&p| sig.dim(p)).collect();
    Ok(conjugate_local(u, state, sig, acting_on, &dims)?.0)
}

/// Spectral decomposition of a Hermitian matrix, eigenvalues descending.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianSpectrum {
    pub eigenvalues: Vec<f64>,
    /// Eigenvectors as columns, matching `eigenvalues`.
    pub eigenvectors: ComplexMatrix,
}

impl HermitianSpectrum {
    pub fn eigenvector(&self, k: usize) -> Vec<C64> {
        let n = self.eigenvectors.rows();
        (0..n).map(|i| self.eigenvectors[(i, k)]).collect()
    }

    pub fn reconstruct(&self) -> ComplexMatrix {
        let lambda = ComplexMatrix::from_real_diagonal(&self.eigenvalues);
        &(&self.eigenvectors * &lambda) * &self.eigenvectors.adjoint()
    }
}

const RECONSTRUCTION_TOLERANCE: f64 = 1e-9;

fn check_hermitian(m: &ComplexMatrix) -> Result<()> {
    if !m.is_square() {
        return Err(Error::dim(format!("{}x{} matrix is not square", m.rows(), m.cols())));
    }
    let err = m.hermiticity_error();
    if err > Tolerances::DEFAULT.hermiticity * m.max_abs().max(1.0) {
        return Err(Error::invalid(format!("matrix is not Hermitian (error {err:e})")));
    }
    Ok(())
}

pub fn hermitian_eigensystem(m: &ComplexMatrix) -> Result<HermitianSpectrum> {
    check_hermitian(m)?;
    let n = m.rows();
    let sym = m.hermitian_part();
    let eig = nalgebra::SymmetricEigen::try_new(sym.to_nalgebra(), f64::EPSILON, 100 * n.max(10))
        .ok_or_else(|| Error::Numeric {
            what: "Hermitian eigensolver did not converge".into(),
            residual: f64::INFINITY,
        })?;
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
    let eigenvalues: Vec<f64> = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let mut vectors = ComplexMatrix::zeros(n, n);
    for (col, &k) in order.iter().enumerate() {
        for i in 0..n {
            vectors[(i, col)] = eig.eigenvectors[(i, k)];
        }
    }
    let spectrum = HermitianSpectrum { eigenvalues, eigenvectors: vectors };
    let residual = spectrum.reconstruct().max_abs_diff(&sym);
    if residual > RECONSTRUCTION_TOLERANCE * sym.max_abs().max(1.0) {
        return Err(Error::Numeric { what: "eigen-reconstruction".into(), residual });
    }
    Ok(spectrum)
}

/// Eigenvalues only, descending. Closed form for 1x1 and 2x2.
pub fn hermitian_eigenvalues(m: &ComplexMatrix) -> Result<Vec<f64>> {
    check_hermitian(m)?;
    match m.rows() {
        1 => Ok(vec![m[(0, 0)].re]),
        2 => {
            let (a, d) = (m[(0, 0)].re, m[(1, 1)].re);
            let b = (m[(0, 1)] + m[(1, 0)].conj()) * 0.5;
            let mean = 0.5 * (a + d);
            let half_gap = (0.25 * (a - d) * (a - d) + b.norm_sqr()).sqrt();
            Ok(vec![mean + half_gap, mean - half_gap])
        }
        n => {
            let eig = nalgebra::SymmetricEigen::try_new(
                m.hermitian_part().to_nalgebra(),
                f64::EPSILON,
                100 * n.max(10),
            )
            .ok_or_else(|| Error::Numeric {
                what: "Hermitian eigensolver did not converge".into(),
                residual: f64::INFINITY,
            })?;
            let mut values: Vec<f64> = eig.eigenvalues.iter().copied().collect();
            values.sort_by(|a, b| b.total_cmp(a));
            Ok(values)
        }
    }
}
