//! CPTP maps in Kraus form, their Stinespring dilations and complementary
//! channels.
//!
//! The environment of a dilation is minimal: one basis state per Kraus
//! operator. When the input and output dimensions differ the environment is
//! padded until `d_out * e_out` is a multiple of `d_in`, so the dilation is
//! a square unitary on `system ⊗ environment`.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::config::Tolerances;
use crate::error::{Error, Result};
use crate::random::{haar_unitary, rng_from_seed};
use crate::states::DensityMatrix;
use crate::tensor::{conjugate_local, ComplexMatrix, DimSignature, C64, ONE, ZERO};

#[derive(Debug, Clone)]
pub struct KrausChannel {
    kraus: Vec<ComplexMatrix>,
    input_dim: usize,
    output_dim: usize,
    dilation: OnceLock<Result<StinespringDilation>>,
}

impl PartialEq for KrausChannel {
    fn eq(&self, other: &Self) -> bool {
        self.kraus == other.kraus
    }
}

impl KrausChannel {
    /// Checks shapes and `sum_k K_k^dagger K_k = I`.
    pub fn new(kraus: Vec<ComplexMatrix>) -> Result<Self> {
        let first = kraus.first().ok_or_else(|| Error::invalid("channel has no Kraus operators"))?;
        let (output_dim, input_dim) = (first.rows(), first.cols());
        if let Some(k) = kraus.iter().position(|m| m.rows() != output_dim || m.cols() != input_dim) {
            return Err(Error::dim(format!(
                "Kraus operator {k} is not {output_dim}x{input_dim} like the first"
            )));
        }
        let ch = Self { kraus, input_dim, output_dim, dilation: OnceLock::new() };
        let err = ch.completeness_error();
        if err > Tolerances::DEFAULT.unitarity {
            return Err(Error::invalid(format!(
                "Kraus operators are not trace preserving (completeness error {err:e})"
            )));
        }
        Ok(ch)
    }

    pub fn identity(dim: usize) -> Self {
        Self::new(vec![ComplexMatrix::identity(dim)]).expect("identity is a channel")
    }

    pub fn unitary(u: ComplexMatrix) -> Result<Self> {
        Self::new(vec![u])
    }

    pub fn kraus_ops(&self) -> &[ComplexMatrix] {
        &self.kraus
    }

    pub fn input_dim(&self) -> usize {
        self.input_dim
    }

    pub fn output_dim(&self) -> usize {
        self.output_dim
    }

    /// Number of Kraus operators, the dimension of the minimal environment.
    pub fn env_dim(&self) -> usize {
        self.kraus.len()
    }

    pub fn completeness_error(&self) -> f64 {
        let mut acc = ComplexMatrix::zeros(self.input_dim, self.input_dim);
        for k in &self.kraus {
            acc = &acc + &(&k.adjoint() * k);
        }
        acc.max_abs_diff(&ComplexMatrix::identity(self.input_dim))
    }

    /// `next ∘ self`: apply `self` first.
    pub fn then(&self, next: &KrausChannel) -> Result<Self> {
        if next.input_dim != self.output_dim {
            return Err(Error::dim(format!(
                "cannot feed a {}-dimensional output into a {}-dimensional input",
                self.output_dim, next.input_dim
            )));
        }
        let mut ops = Vec::with_capacity(self.kraus.len() * next.kraus.len());
        for b in &next.kraus {
            for a in &self.kraus {
                ops.push(b * a);
            }
        }
        Self::new(ops)
    }

    /// Stinespring dilation, computed on first use and cached.
    pub fn dilation(&self) -> Result<&StinespringDilation> {
        self.dilation.get_or_init(|| dilate(self)).as_ref().map_err(Clone::clone)
    }

    /// Channel acting on a state whose whole space is the channel input.
    pub fn apply_whole(&self, rho: &DensityMatrix) -> Result<DensityMatrix> {
        let flat = rho.with_signature(DimSignature::new(vec![rho.dim()])?)?;
        apply(self, &flat, 0)
    }
}

/// Unitary `U` on `system ⊗ environment` with the environment prepared in
/// basis state `env_initial`.
#[derive(Debug, Clone, PartialEq)]
pub struct StinespringDilation {
    pub unitary: ComplexMatrix,
    pub env_initial: usize,
    pub input: DimSignature,
    pub output: DimSignature,
}

impl StinespringDilation {
    pub fn system_in(&self) -> usize {
        self.input.dim(0)
    }

    pub fn env_in(&self) -> usize {
        self.input.dim(1)
    }

    pub fn system_out(&self) -> usize {
        self.output.dim(0)
    }

    pub fn env_out(&self) -> usize {
        self.output.dim(1)
    }

    /// Columns of `U` reached from `|i> ⊗ |env_initial>`.
    pub fn isometry(&self) -> ComplexMatrix {
        let n = self.unitary.rows();
        let d = self.system_in();
        let mut v = ComplexMatrix::zeros(n, d);
        for i in 0..d {
            let col = i * self.env_in() + self.env_initial;
            for r in 0..n {
                v[(r, i)] = self.unitary[(r, col)];
            }
        }
        v
    }

    /// `U (rho ⊗ |e><e|) U^dagger` on output signature `[d_out, e_out]`.
    pub fn evolve(&self, rho: &DensityMatrix) -> Result<DensityMatrix> {
        if rho.dim() != self.system_in() {
            return Err(Error::dim(format!(
                "dilation expects a {}-dimensional input, got {}",
                self.system_in(),
                rho.dim()
            )));
        }
        let v = self.isometry();
        let out = &(&v * rho.matrix()) * &v.adjoint();
        Ok(DensityMatrix::from_parts_unchecked(out, self.output.clone()))
    }

    /// `Tr_E` of [`Self::evolve`].
    pub fn compress(&self, rho: &DensityMatrix) -> Result<DensityMatrix> {
        self.evolve(rho)?.partial_trace(&[0])
    }
}

/// `sum_k (I ⊗ K_k ⊗ I) rho (I ⊗ K_k ⊗ I)^dagger` on subsystem `acting_on`.
pub fn apply(ch: &KrausChannel, rho: &DensityMatrix, acting_on: usize) -> Result<DensityMatrix> {
    let sig = rho.signature();
    sig.check_index(acting_on)?;
    if sig.dim(acting_on) != ch.input_dim {
        return Err(Error::dim(format!(
            "channel takes dimension {}, subsystem {acting_on} has {}",
            ch.input_dim,
            sig.dim(acting_on)
        )));
    }
    let mut acc: Option<(ComplexMatrix, DimSignature)> = None;
    for k in &ch.kraus {
        let (term, out_sig) = conjugate_local(k, rho.matrix(), sig, &[acting_on], &[ch.output_dim])?;
        acc = Some(match acc {
            None => (term, out_sig),
            Some((m, s)) => (&m + &term, s),
        });
    }
    let (m, out_sig) = acc.expect("at least one Kraus operator");
    Ok(DensityMatrix::from_parts_unchecked(m.hermitian_part(), out_sig))
}

/// Minimal Stinespring dilation, completed to a unitary by extending the
/// isometry columns with an orthonormal basis.
pub fn dilate(ch: &KrausChannel) -> Result<StinespringDilation> {
    let (d_in, d_out, e) = (ch.input_dim, ch.output_dim, ch.env_dim());
    let mut e_out = e;
    while (d_out * e_out) % d_in != 0 {
        e_out += 1;
    }
    let n = d_out * e_out;
    let env_in = n / d_in;
    let input = DimSignature::new(vec![d_in, env_in])?;
    let output = DimSignature::new(vec![d_out, e_out])?;

    // isometry V|i> = sum_k K_k|i> ⊗ |k>
    let mut columns: Vec<Vec<C64>> = (0..d_in)
        .map(|i| {
            let mut col = vec![ZERO; n];
            for (k, op) in ch.kraus.iter().enumerate() {
                for o in 0..d_out {
                    col[o * e_out + k] = op[(o, i)];
                }
            }
            col
        })
        .collect();
    let gram = gram_error(&columns);
    if gram > Tolerances::DEFAULT.unitarity {
        return Err(Error::Numeric { what: "dilation isometry columns".into(), residual: gram });
    }

    let mut extra: Vec<Vec<C64>> = Vec::with_capacity(n - d_in);
    for m in 0..n {
        if extra.len() == n - d_in {
            break;
        }
        let mut v = vec![ZERO; n];
        v[m] = ONE;
        for _ in 0..2 {
            for u in columns.iter().chain(extra.iter()) {
                let overlap: C64 = u.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
                for (x, a) in v.iter_mut().zip(u) {
                    *x -= overlap * a;
                }
            }
        }
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm > 1e-3 {
            v.iter_mut().for_each(|z| *z /= norm);
            extra.push(v);
        }
    }
    if extra.len() != n - d_in {
        return Err(Error::Numeric {
            what: "unitary completion of the dilation".into(),
            residual: (n - d_in - extra.len()) as f64,
        });
    }

    let mut unitary = ComplexMatrix::zeros(n, n);
    let mut fill = extra.into_iter();
    for c in 0..n {
        let col = if c % env_in == 0 {
            std::mem::take(&mut columns[c / env_in])
        } else {
            fill.next().expect("counted above")
        };
        for (r, z) in col.into_iter().enumerate() {
            unitary[(r, c)] = z;
        }
    }
    let err = unitary.unitarity_error();
    if err > Tolerances::DEFAULT.unitarity {
        return Err(Error::Numeric { what: "dilation unitarity".into(), residual: err });
    }
    Ok(StinespringDilation { unitary, env_initial: 0, input, output })
}

fn gram_error(columns: &[Vec<C64>]) -> f64 {
    let mut worst: f64 = 0.0;
    for (i, a) in columns.iter().enumerate() {
        for (j, b) in columns.iter().enumerate() {
            let g: C64 = a.iter().zip(b).map(|(x, y)| x.conj() * y).sum();
            let target = if i == j { ONE } else { ZERO };
            worst = worst.max((g - target).norm());
        }
    }
    worst
}

/// Environment output `rho_E[k, l] = Tr(K_k rho K_l^dagger)` for a state
/// living entirely on the channel input.
pub fn complementary(ch: &KrausChannel, rho: &DensityMatrix) -> Result<DensityMatrix> {
    if rho.dim() != ch.input_dim {
        return Err(Error::dim(format!(
            "channel takes dimension {}, state has {}",
            ch.input_dim,
            rho.dim()
        )));
    }
    let e = ch.env_dim();
    let images: Vec<ComplexMatrix> = ch.kraus.iter().map(|k| k * rho.matrix()).collect();
    let mut out = ComplexMatrix::zeros(e, e);
    for k in 0..e {
        for l in 0..e {
            // Tr(K_k rho K_l^dagger) = sum_ij (K_k rho)_ij conj(K_l)_ij
            out[(k, l)] = images[k]
                .data()
                .iter()
                .zip(ch.kraus[l].data())
                .map(|(a, b)| a * b.conj())
                .sum();
        }
    }
    Ok(DensityMatrix::from_parts_unchecked(out.hermitian_part(), DimSignature::new(vec![e])?))
}

/// Joint output on `[d_out, e_out]` from the dilation; its marginals are the
/// channel output and the (padded) complementary output.
pub fn output_with_environment(ch: &KrausChannel, rho: &DensityMatrix) -> Result<DensityMatrix> {
    ch.dilation()?.evolve(&rho.with_signature(DimSignature::new(vec![rho.dim()])?)?)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ChannelKind {
    Identity,
    Depolarizing,
    AmplitudeDamping,
    PhaseDamping,
    BitFlip,
    Erasure,
}

impl ChannelKind {
    pub const ALL: [ChannelKind; 6] = [
        Self::Identity,
        Self::Depolarizing,
        Self::AmplitudeDamping,
        Self::PhaseDamping,
        Self::BitFlip,
        Self::Erasure,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Self::Identity => "identity",
            Self::Depolarizing => "depolarizing",
            Self::AmplitudeDamping => "amplitude-damping",
            Self::PhaseDamping => "phase-damping",
            Self::BitFlip => "bit-flip",
            Self::Erasure => "erasure",
        }
    }

    /// Name of the scalar parameter, if the family has one.
    pub fn param_name(self) -> Option<&'static str> {
        match self {
            Self::Identity => None,
            Self::Depolarizing | Self::BitFlip | Self::Erasure => Some("p"),
            Self::AmplitudeDamping => Some("gamma"),
            Self::PhaseDamping => Some("lambda"),
        }
    }
}

impl FromStr for ChannelKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let key = s.to_ascii_lowercase().replace('_', "-");
        Self::ALL
            .into_iter()
            .find(|k| k.name() == key)
            .ok_or_else(|| Error::UnknownName { kind: "channel", name: s.to_string() })
    }
}

impl fmt::Display for ChannelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A named qubit channel family with its parameter.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChannelSpec {
    pub kind: ChannelKind,
    pub param: f64,
}

impl ChannelSpec {
    pub fn new(kind: ChannelKind, param: f64) -> Result<Self> {
        if kind.param_name().is_some() && !(0.0..=1.0).contains(&param) {
            return Err(Error::ParameterRange {
                name: kind.param_name().unwrap_or("param").to_string(),
                value: param,
            });
        }
        Ok(Self { kind, param: if kind.param_name().is_some() { param } else { 0.0 } })
    }

    pub fn with_param(&self, param: f64) -> Result<Self> {
        Self::new(self.kind, param)
    }

    pub fn build(&self) -> KrausChannel {
        kraus_for(self.kind, self.param)
    }
}

impl fmt::Display for ChannelSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind.param_name() {
            Some(p) => write!(f, "{}({p}={})", self.kind, self.param),
            None => write!(f, "{}", self.kind),
        }
    }
}

fn kraus_for(kind: ChannelKind, x: f64) -> KrausChannel {
    let m = |v: [f64; 4]| ComplexMatrix::from_real(2, 2, &v).expect("2x2");
    let ops = match kind {
        ChannelKind::Identity => vec![ComplexMatrix::identity(2)],
        ChannelKind::Depolarizing => {
            // rho -> (1 - x) rho + x I/2
            let a = (1.0 - 0.75 * x).sqrt();
            let b = (0.25 * x).sqrt();
            let y = ComplexMatrix::new(
                2,
                2,
                vec![ZERO, C64::new(0.0, -b), C64::new(0.0, b), ZERO],
            )
            .expect("2x2");
            vec![m([a, 0.0, 0.0, a]), m([0.0, b, b, 0.0]), y, m([b, 0.0, 0.0, -b])]
        }
        ChannelKind::AmplitudeDamping => {
            vec![m([1.0, 0.0, 0.0, (1.0 - x).sqrt()]), m([0.0, x.sqrt(), 0.0, 0.0])]
        }
        ChannelKind::PhaseDamping => {
            vec![m([1.0, 0.0, 0.0, (1.0 - x).sqrt()]), m([0.0, 0.0, 0.0, x.sqrt()])]
        }
        ChannelKind::BitFlip => {
            let (a, b) = ((1.0 - x).sqrt(), x.sqrt());
            vec![m([a, 0.0, 0.0, a]), m([0.0, b, b, 0.0])]
        }
        ChannelKind::Erasure => {
            // output basis |0>, |1>, |erased>
            let a = (1.0 - x).sqrt();
            let b = x.sqrt();
            let keep = ComplexMatrix::from_real(3, 2, &[a, 0.0, 0.0, a, 0.0, 0.0]).expect("3x2");
            let lose0 = ComplexMatrix::from_real(3, 2, &[0.0, 0.0, 0.0, 0.0, b, 0.0]).expect("3x2");
            let lose1 = ComplexMatrix::from_real(3, 2, &[0.0, 0.0, 0.0, 0.0, 0.0, b]).expect("3x2");
            vec![keep, lose0, lose1]
        }
    };
    KrausChannel::new(ops).expect("textbook Kraus sets are complete")
}

/// Textbook channel by name; `params` holds the family's single parameter
/// (`p`, `gamma` or `lambda`).
pub fn named_channel(name: &str, params: &BTreeMap<String, f64>) -> Result<KrausChannel> {
    Ok(channel_spec(name, params)?.build())
}

pub fn channel_spec(name: &str, params: &BTreeMap<String, f64>) -> Result<ChannelSpec> {
    let kind: ChannelKind = name.parse()?;
    match kind.param_name() {
        None => {
            if let Some(key) = params.keys().next() {
                return Err(Error::invalid(format!("{kind} takes no parameters, got `{key}`")));
            }
            ChannelSpec::new(kind, 0.0)
        }
        Some(expected) => {
            if let Some(key) = params.keys().find(|k| k.as_str() != expected) {
                return Err(Error::invalid(format!("{kind} takes `{expected}`, got `{key}`")));
            }
            let value = params
                .get(expected)
                .ok_or_else(|| Error::invalid(format!("{kind} needs parameter `{expected}`")))?;
            ChannelSpec::new(kind, *value)
        }
    }
}

/// Haar unitary on `system ⊗ environment`, sliced into `env_dim` Kraus
/// operators `K_k = (I ⊗ <k|) U (I ⊗ |0>)`.
pub fn random_channel(input_dim: usize, env_dim: usize, seed: u64) -> Result<KrausChannel> {
    random_channel_with(input_dim, env_dim, &mut rng_from_seed(seed))
}

pub fn random_channel_with<R: rand::Rng + ?Sized>(
    input_dim: usize,
    env_dim: usize,
    rng: &mut R,
) -> Result<KrausChannel> {
    if input_dim == 0 || env_dim == 0 {
        return Err(Error::invalid("random channel needs positive dimensions"));
    }
    let n = input_dim * env_dim;
    if n > crate::config::MAX_DIMENSION {
        return Err(Error::DimensionLimit { side: n, max: crate::config::MAX_DIMENSION });
    }
    let u = haar_unitary(n, rng);
    let ops = (0..env_dim)
        .map(|k| {
            let mut op = ComplexMatrix::zeros(input_dim, input_dim);
            for o in 0..input_dim {
                for i in 0..input_dim {
                    op[(o, i)] = u[(o * env_dim + k, i * env_dim)];
                }
            }
            op
        })
        .collect();
    KrausChannel::new(ops)
}

/// Channel record in a scenario file: either `{kind, params}` or
/// `{kraus: [matrix, ...]}` with matrices as rows of `[re, im]` pairs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChannelLiteral {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kind: Option<String>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub params: BTreeMap<String, f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kraus: Option<Vec<Vec<Vec<[f64; 2]>>>>,
}

impl ChannelLiteral {
    pub fn named(spec: &ChannelSpec) -> Self {
        let mut params = BTreeMap::new();
        if let Some(name) = spec.kind.param_name() {
            params.insert(name.to_string(), spec.param);
        }
        Self { kind: Some(spec.kind.name().to_string()), params, kraus: None }
    }

    pub fn to_channel(&self) -> Result<KrausChannel> {
        match (&self.kind, &self.kraus) {
            (Some(kind), None) => named_channel(kind, &self.params),
            (None, Some(ops)) => {
                if !self.params.is_empty() {
                    return Err(Error::invalid("explicit Kraus channels take no params"));
                }
                let mats = ops
                    .iter()
                    .enumerate()
                    .map(|(k, rows)| {
                        let r = rows.len();
                        let c = rows.first().map_or(0, Vec::len);
                        if rows.iter().any(|row| row.len() != c) {
                            return Err(Error::dim(format!("Kraus operator {k} has ragged rows")));
                        }
                        let data = rows.iter().flatten().map(|[re, im]| C64::new(*re, *im)).collect();
                        ComplexMatrix::new(r, c, data)
                    })
                    .collect::<Result<Vec<_>>>()?;
                KrausChannel::new(mats)
            }
            _ => Err(Error::invalid("channel literal needs exactly one of `kind` or `kraus`")),
        }
    }
}
