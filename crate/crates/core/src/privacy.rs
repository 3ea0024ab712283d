//! One sender, several receivers: per-leg privacy quantities, trade-offs and
//! the monogamy theorems.
//!
//! Alice holds the reference `R` of a pure state on `R ⊗ Q_1 ⊗ … ⊗ Q_n`
//! and each `Q_i` travels through its own channel. Every environment starts
//! in a pure state, so the evolved state stays pure and is kept as a vector
//! on `R, Q_1', E_1', …, Q_n', E_n'`.
//!
//! Signal ensembles are by default the ones Alice induces by measuring `R`.
//! The eavesdropper of a leg holds everything outside `R` and that leg's
//! output, so the receiver and eavesdropper Holevo quantities of a leg
//! differ by exactly `I_c(R > Q_i')` for such ensembles.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::channels::{apply, complementary, KrausChannel};
use crate::config::Tolerances;
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::measures::{classical_correlation_with, eof, holevo, matrix_entropy, mutual_information};
use crate::random::{haar_unitary, rng_from_seed};
use crate::states::{DensityMatrix, Ensemble, PureState, RANK_CUTOFF};
use crate::tensor::{
    apply_local, hermitian_eigensystem, reduced_from_vector, ComplexMatrix, DimSignature, C64, ZERO,
};

#[derive(Debug, Clone, PartialEq)]
pub struct Leg {
    pub name: String,
    pub channel: KrausChannel,
}

/// Where a leg's signal ensemble comes from.
#[derive(Debug, Clone, PartialEq, Default)]
pub enum SignalSpec {
    /// Alice measures `R` in the eigenbasis of its marginal.
    #[default]
    ReferenceEigenbasis,
    /// Alice measures `R` with a random rank-1 POVM of `count` outcomes.
    ReferenceRandom { count: usize, seed: u64 },
    /// Explicit signals on the leg input. Only allowed when `R` alone
    /// purifies that input.
    InputEnsemble(Ensemble),
}

impl SignalSpec {
    pub fn label(&self) -> &'static str {
        match self {
            Self::ReferenceEigenbasis => "reference-eigenbasis",
            Self::ReferenceRandom { .. } => "reference-random",
            Self::InputEnsemble(_) => "explicit",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    initial: PureState,
    legs: Vec<Leg>,
    signals: Vec<SignalSpec>,
}

impl Scenario {
    /// `initial` lives on `[R, Q_1, …, Q_n]`; leg `i` acts on `Q_{i+1}`.
    pub fn new(initial: PureState, legs: Vec<Leg>, signals: Vec<SignalSpec>) -> Result<Self> {
        let sig = initial.signature();
        if sig.len() < 2 {
            return Err(Error::dim(format!("scenario needs a reference and at least one receiver, got {sig}")));
        }
        if legs.len() != sig.len() - 1 {
            return Err(Error::dim(format!(
                "{} legs for {} receiver subsystems in {sig}",
                legs.len(),
                sig.len() - 1
            )));
        }
        if signals.len() != legs.len() {
            return Err(Error::invalid(format!("{} signal specs for {} legs", signals.len(), legs.len())));
        }
        for (i, leg) in legs.iter().enumerate() {
            if leg.name.is_empty() || leg.name == "R" {
                return Err(Error::invalid(format!("leg {i} has an invalid name `{}`", leg.name)));
            }
            if legs[..i].iter().any(|l| l.name == leg.name) {
                return Err(Error::invalid(format!("duplicate leg name `{}`", leg.name)));
            }
            if leg.channel.input_dim() != sig.dim(i + 1) {
                return Err(Error::dim(format!(
                    "leg `{}` channel takes dimension {}, subsystem {} has {}",
                    leg.name,
                    leg.channel.input_dim(),
                    i + 1,
                    sig.dim(i + 1)
                )));
            }
        }
        Ok(Self { initial, legs, signals })
    }

    /// Default signals on every leg.
    pub fn with_default_signals(initial: PureState, legs: Vec<Leg>) -> Result<Self> {
        let n = legs.len();
        Self::new(initial, legs, vec![SignalSpec::default(); n])
    }

    pub fn initial(&self) -> &PureState {
        &self.initial
    }

    pub fn legs(&self) -> &[Leg] {
        &self.legs
    }

    pub fn signals(&self) -> &[SignalSpec] {
        &self.signals
    }

    pub fn reference_dim(&self) -> usize {
        self.initial.signature().dim(0)
    }
}

/// Globally pure state after every leg has been applied.
#[derive(Debug, Clone, PartialEq)]
pub struct EvolvedScenario {
    scenario: Scenario,
    psi: Vec<C64>,
    sig: DimSignature,
    labels: Vec<String>,
}

impl EvolvedScenario {
    pub fn scenario(&self) -> &Scenario {
        &self.scenario
    }

    pub fn vector(&self) -> &[C64] {
        &self.psi
    }

    /// `[R, Q_1', E_1', …]`
    pub fn signature(&self) -> &DimSignature {
        &self.sig
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn leg_count(&self) -> usize {
        self.scenario.legs.len()
    }

    pub fn output_position(&self, leg: usize) -> usize {
        1 + 2 * leg
    }

    pub fn environment_position(&self, leg: usize) -> usize {
        2 + 2 * leg
    }

    pub fn state(&self) -> PureState {
        PureState::from_parts_unchecked(self.psi.clone(), self.sig.clone())
    }

    /// `|psi><psi|` on the full signature.
    pub fn joint(&self) -> DensityMatrix {
        self.state().density()
    }

    pub fn marginal(&self, set: &[usize]) -> Result<DensityMatrix> {
        let (m, sig) = reduced_from_vector(&self.psi, &self.sig, set)?;
        Ok(DensityMatrix::from_parts_unchecked(m, sig))
    }

    pub fn entropy(&self, set: &[usize]) -> Result<f64> {
        pure_entropy(&self.psi, &self.sig, set)
    }

    /// `| <psi|psi> - 1 |`, zero for a globally pure normalized state.
    pub fn purity_error(&self) -> f64 {
        (self.psi.iter().map(|z| z.norm_sqr()).sum::<f64>() - 1.0).abs()
    }
}

/// Entropy of `set` for the pure vector `psi`, computed on whichever side
/// of the cut is smaller.
fn pure_entropy(psi: &[C64], sig: &DimSignature, set: &[usize]) -> Result<f64> {
    for &p in set {
        sig.check_index(p)?;
    }
    let comp = sig.complement(set);
    if set.is_empty() || comp.is_empty() {
        return Ok(0.0);
    }
    let size = |s: &[usize]| s.iter().map(|&p| sig.dim(p)).product::<usize>();
    let side = if size(&comp) < size(set) { comp } else { set.to_vec() };
    let (m, _) = reduced_from_vector(psi, sig, &side)?;
    matrix_entropy(&m)
}

/// Insert a subsystem of dimension `dim` in state `|0>` at `position`.
fn insert_ground(psi: &[C64], sig: &DimSignature, position: usize, dim: usize) -> Result<(Vec<C64>, DimSignature)> {
    let new_sig = sig.inserted(position, dim)?;
    let inner: usize = sig.dims()[position..].iter().product();
    let mut out = vec![ZERO; new_sig.total()];
    for (idx, &z) in psi.iter().enumerate() {
        let (hi, lo) = (idx / inner, idx % inner);
        out[hi * dim * inner + lo] = z;
    }
    Ok((out, new_sig))
}

pub fn evolve(s: &Scenario) -> Result<EvolvedScenario> {
    let order: Vec<usize> = (0..s.legs.len()).collect();
    evolve_in_order(s, &order)
}

/// Applies the legs' dilations in the given order. Legs act on disjoint
/// subsystems, so the result does not depend on the order.
pub fn evolve_in_order(s: &Scenario, order: &[usize]) -> Result<EvolvedScenario> {
    let n = s.legs.len();
    let mut seen = vec![false; n];
    for &i in order {
        if i >= n || std::mem::replace(&mut seen[i], true) {
            return Err(Error::invalid(format!("leg order {order:?} is not a permutation of 0..{n}")));
        }
    }
    if order.len() != n {
        return Err(Error::invalid(format!("leg order {order:?} is not a permutation of 0..{n}")));
    }
    let mut psi = s.initial.amplitudes().to_vec();
    let mut sig = s.initial.signature().clone();
    // current subsystem index of each leg's receiver
    let mut done = vec![false; n];
    for &i in order {
        let dil = s.legs[i].channel.dilation()?;
        let q = 1 + i + (0..i).filter(|&j| done[j]).count();
        let (v, with_env) = insert_ground(&psi, &sig, q + 1, dil.env_in())?;
        let col = ComplexMatrix::new(v.len(), 1, v)?;
        let (out, new_sig) =
            apply_local(&dil.unitary, &col, &with_env, &[q, q + 1], &[dil.system_out(), dil.env_out()])?;
        psi = out.into_data();
        sig = new_sig;
        done[i] = true;
    }
    let mut labels = vec!["R".to_string()];
    for leg in &s.legs {
        labels.push(leg.name.clone());
        labels.push(format!("E_{}", leg.name));
    }
    let evolved = EvolvedScenario { scenario: s.clone(), psi, sig, labels };
    let err = evolved.purity_error();
    if err > 1e-8 {
        return Err(Error::Numeric { what: "global purity after evolution".into(), residual: err });
    }
    Ok(evolved)
}

/// Unnormalized conditional vectors `(<m_j|_R ⊗ I) psi` on everything but `R`.
fn steer(psi: &[C64], sig: &DimSignature, outcomes: &[Vec<C64>]) -> Vec<Vec<C64>> {
    let rest = sig.total() / sig.dim(0);
    outcomes
        .iter()
        .map(|m| {
            let mut v = vec![ZERO; rest];
            for (r, mr) in m.iter().enumerate() {
                let c = mr.conj();
                if c == ZERO {
                    continue;
                }
                for (x, vx) in v.iter_mut().enumerate() {
                    *vx += c * psi[r * rest + x];
                }
            }
            v
        })
        .collect()
}

/// Rank-1 measurement vectors on `R` for the signal spec.
fn reference_outcomes(initial: &PureState, spec: &SignalSpec) -> Result<Vec<Vec<C64>>> {
    let (rho_r, _) = reduced_from_vector(initial.amplitudes(), initial.signature(), &[0])?;
    let spec_r = hermitian_eigensystem(&rho_r)?;
    let support: Vec<usize> =
        (0..spec_r.eigenvalues.len()).filter(|&k| spec_r.eigenvalues[k] > RANK_CUTOFF).collect();
    match spec {
        SignalSpec::ReferenceEigenbasis => Ok(support.iter().map(|&k| spec_r.eigenvector(k)).collect()),
        SignalSpec::ReferenceRandom { count, seed } => {
            if *count < support.len() {
                return Err(Error::Infeasible(format!(
                    "{count} signals cannot decompose a rank-{} marginal",
                    support.len()
                )));
            }
            let u = haar_unitary(*count, &mut rng_from_seed(*seed));
            let dr = rho_r.rows();
            Ok((0..*count)
                .map(|j| {
                    let mut m = vec![ZERO; dr];
                    for (col, &k) in support.iter().enumerate() {
                        let w = u[(j, col)].conj();
                        for (r, e) in spec_r.eigenvector(k).into_iter().enumerate() {
                            m[r] += w * e;
                        }
                    }
                    m
                })
                .collect())
        }
        SignalSpec::InputEnsemble(_) => Err(Error::invalid("explicit ensembles are not steered")),
    }
}

/// Per-leg privacy record. The receiver and eavesdropper Holevo quantities
/// stand in for the optimal accessible informations `H_Bob` and `H_Eve`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LegPrivacy {
    pub leg: usize,
    pub name: String,
    pub signals: String,
    pub signal_count: usize,
    pub pure_signals: bool,
    pub input_dim: usize,
    /// `S(rho^{Q_i})`
    pub input_entropy: f64,
    /// `chi^{Q'}`, proxy for `H_Bob`
    pub chi_receiver: f64,
    /// Holevo quantity of everything outside `R` and `Q_i'`, proxy for `H_Eve`
    pub chi_eve: f64,
    /// Holevo quantity of the leg's own environment `E_i'`
    pub chi_env: f64,
    /// `chi_receiver - chi_eve`
    pub p_min: f64,
    /// `I_c(R > Q_i')`, also the lower bound on the leg's privacy
    pub coherent_info: f64,
    /// `S(Q_i') - S(E_i')`, reference extended to the whole purification
    pub coherent_info_extended: f64,
    /// `S(rho^{Q_i}) - I_c(R > Q_i')`
    pub disturbance: f64,
    /// `max |sum p_k rho_k - rho^{Q_i}|` for the input ensemble
    pub ensemble_residual: f64,
}

impl LegPrivacy {
    pub fn privacy_lower_bound(&self) -> f64 {
        self.coherent_info
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PrivacyReport {
    pub legs: Vec<LegPrivacy>,
}

const ENSEMBLE_TOLERANCE: f64 = 1e-8;

fn holevo_of_weighted(states: &[(f64, f64)], average_entropy: f64) -> f64 {
    average_entropy - states.iter().map(|(p, s)| p * s).sum::<f64>()
}

pub fn leg_privacy(e: &EvolvedScenario, leg: usize) -> Result<LegPrivacy> {
    let s = &e.scenario;
    if leg >= s.legs.len() {
        return Err(Error::Index { index: leg, count: s.legs.len() });
    }
    let q_out = e.output_position(leg);
    let e_out = e.environment_position(leg);
    let init_sig = s.initial.signature();
    let input_dim = init_sig.dim(leg + 1);
    let (rho_in, _) = reduced_from_vector(s.initial.amplitudes(), init_sig, &[leg + 1])?;
    let input_entropy = matrix_entropy(&rho_in)?;
    let s_q = e.entropy(&[q_out])?;
    let s_rq = e.entropy(&[0, q_out])?;
    let coherent_info = s_q - s_rq;
    let coherent_info_extended = s_q - e.entropy(&[e_out])?;
    let spec = &s.signals[leg];

    let (chi_receiver, chi_eve, chi_env, signal_count, pure_signals, residual) = match spec {
        SignalSpec::InputEnsemble(ens) => {
            let s_rq_in = pure_entropy(s.initial.amplitudes(), init_sig, &[0, leg + 1])?;
            if s_rq_in > ENSEMBLE_TOLERANCE {
                return Err(Error::invalid(format!(
                    "explicit signals on leg `{}` need the reference alone to purify its input (S(R Q) = {s_rq_in:e})",
                    s.legs[leg].name
                )));
            }
            if ens.signature().total() != input_dim {
                return Err(Error::dim(format!(
                    "leg `{}` signals have dimension {}, input has {input_dim}",
                    s.legs[leg].name,
                    ens.signature().total()
                )));
            }
            let residual = ens.average().matrix().max_abs_diff(&rho_in);
            if residual > ENSEMBLE_TOLERANCE {
                return Err(Error::invalid(format!(
                    "leg `{}` signals average to a state {residual:e} away from the input marginal",
                    s.legs[leg].name
                )));
            }
            let ch = &s.legs[leg].channel;
            let flat = DimSignature::new(vec![input_dim])?;
            let flat_ens = ens.map(|rho| rho.with_signature(flat.clone()))?;
            let chi_b = holevo(&flat_ens.map(|rho| apply(ch, rho, 0))?)?;
            let chi_e = holevo(&flat_ens.map(|rho| complementary(ch, rho))?)?;
            let pure = ens.is_pure_signal(1e-10);
            (chi_b, chi_e, chi_e, ens.len(), pure, residual)
        }
        _ => {
            let outcomes = reference_outcomes(&s.initial, spec)?;
            let before = steer(s.initial.amplitudes(), init_sig, &outcomes);
            let after = steer(&e.psi, &e.sig, &outcomes);
            let rest_in = DimSignature::new(init_sig.dims()[1..].to_vec())?;
            let rest_out = DimSignature::new(e.sig.dims()[1..].to_vec())?;
            let (q_rest, e_rest) = (q_out - 1, e_out - 1);
            let eve: Vec<usize> = (0..rest_out.len()).filter(|&p| p != q_rest).collect();

            let mut avg_in = ComplexMatrix::zeros(input_dim, input_dim);
            let mut per_q = Vec::new();
            let mut per_eve = Vec::new();
            let mut per_env = Vec::new();
            for (v_in, v_out) in before.iter().zip(&after) {
                let p: f64 = v_out.iter().map(|z| z.norm_sqr()).sum();
                let (m_in, _) = reduced_from_vector(v_in, &rest_in, &[leg])?;
                avg_in = &avg_in + &m_in;
                if p < 1e-14 {
                    continue;
                }
                let unit: Vec<C64> = v_out.iter().map(|z| z / p.sqrt()).collect();
                per_q.push((p, pure_entropy(&unit, &rest_out, &[q_rest])?));
                per_eve.push((p, pure_entropy(&unit, &rest_out, &eve)?));
                per_env.push((p, pure_entropy(&unit, &rest_out, &[e_rest])?));
            }
            let residual = avg_in.max_abs_diff(&rho_in);
            if residual > ENSEMBLE_TOLERANCE {
                return Err(Error::Numeric { what: "steered ensemble average".into(), residual });
            }
            let eve_global: Vec<usize> = eve.iter().map(|p| p + 1).collect();
            let chi_b = holevo_of_weighted(&per_q, s_q);
            let chi_e = holevo_of_weighted(&per_eve, e.entropy(&eve_global)?);
            let chi_env = holevo_of_weighted(&per_env, e.entropy(&[e_out])?);
            (chi_b, chi_e, chi_env, outcomes.len(), true, residual)
        }
    };

    Ok(LegPrivacy {
        leg,
        name: s.legs[leg].name.clone(),
        signals: spec.label().to_string(),
        signal_count,
        pure_signals,
        input_dim,
        input_entropy,
        chi_receiver,
        chi_eve,
        chi_env,
        p_min: chi_receiver - chi_eve,
        coherent_info,
        coherent_info_extended,
        disturbance: input_entropy - coherent_info,
        ensemble_residual: residual,
    })
}

pub fn privacy_report(e: &EvolvedScenario) -> Result<PrivacyReport> {
    Ok(PrivacyReport { legs: (0..e.leg_count()).map(|i| leg_privacy(e, i)).collect::<Result<_>>()? })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Pass => "pass",
            Self::Fail => "fail",
        })
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    #[serde(default)]
    pub seed: u64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub trial: Option<u64>,
    #[serde(skip_serializing_if = "String::is_empty", default)]
    pub detail: String,
}

/// `left <= right` with `slack = right - left`; passes iff
/// `slack >= -tolerance`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InequalityReport {
    pub check: String,
    pub family: String,
    pub left: f64,
    pub right: f64,
    pub slack: f64,
    pub tolerance: f64,
    pub verdict: Verdict,
    #[serde(flatten)]
    pub provenance: Provenance,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl InequalityReport {
    pub fn new(family: &str, check: &str, left: f64, right: f64, tolerance: f64) -> Self {
        let slack = right - left;
        let verdict = if slack >= -tolerance { Verdict::Pass } else { Verdict::Fail };
        Self {
            check: check.to_string(),
            family: family.to_string(),
            left,
            right,
            slack,
            tolerance,
            verdict,
            provenance: Provenance::default(),
            note: None,
        }
    }

    pub fn with_detail(mut self, detail: impl Into<String>) -> Self {
        self.provenance.detail = detail.into();
        self
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }

    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }
}

const PROXY_NOTE: &str = "H_Eve taken as the eavesdropper Holevo quantity";

/// Trade-offs for one leg. The disturbance, privacy-chain and E_f checks
/// are emitted only for pure signals; for mixed signals they are not
/// implied and the leg record carries the raw values.
pub fn tradeoff_checks(e: &EvolvedScenario, leg: &LegPrivacy, tol: &Tolerances) -> Result<Vec<InequalityReport>> {
    let t = tol.inequality_slack;
    let log_d = (leg.input_dim as f64).log2();
    let detail = format!("leg {}", leg.name);
    let mut out = vec![
        InequalityReport::new("tradeoffs", "coherent-eve", leg.coherent_info + leg.chi_eve, log_d, t)
            .with_detail(&detail)
            .with_note(PROXY_NOTE),
        InequalityReport::new("tradeoffs", "privacy-eve", leg.p_min + leg.chi_eve, log_d, t)
            .with_detail(&detail)
            .with_note(PROXY_NOTE),
    ];
    if !leg.pure_signals {
        return Ok(out);
    }
    out.push(
        InequalityReport::new("tradeoffs", "disturbance-privacy", leg.disturbance + leg.p_min, leg.input_entropy, t)
            .with_detail(&detail),
    );
    out.push(
        InequalityReport::new("privacy-chain", "privacy-chain", leg.p_min, leg.coherent_info, t).with_detail(&detail),
    );
    let rq = e.marginal(&[0, e.output_position(leg.leg)])?;
    if rq.signature().dims() == [2, 2] {
        out.push(
            InequalityReport::new("tradeoffs", "privacy-eof", leg.p_min, eof(&rq)?, t).with_detail(&detail),
        );
    }
    Ok(out)
}

fn require_legs(e: &EvolvedScenario, report: &PrivacyReport, what: &str, exact: Option<usize>) -> Result<()> {
    let n = e.leg_count();
    if report.legs.len() != n {
        return Err(Error::invalid(format!("{what}: report has {} legs, scenario {n}", report.legs.len())));
    }
    match exact {
        Some(k) if n != k => Err(Error::invalid(format!("{what} needs exactly {k} receivers, got {n}"))),
        None if n < 2 => Err(Error::invalid(format!("{what} needs at least 2 receivers, got {n}"))),
        _ => Ok(()),
    }
}

/// Mutual exclusion of two receivers' minimal privacy, plus the coherent
/// information sum it is proved through.
pub fn theorem1_check(e: &EvolvedScenario, report: &PrivacyReport, tol: &Tolerances) -> Result<Vec<InequalityReport>> {
    require_legs(e, report, "theorem1", Some(2))?;
    let (b, c) = (&report.legs[0], &report.legs[1]);
    let t = tol.inequality_slack;
    Ok(vec![
        InequalityReport::new("theorem1", "theorem1", b.p_min + c.p_min, 0.0, t),
        InequalityReport::new("theorem1", "theorem1-coherent", b.coherent_info + c.coherent_info, 0.0, t),
    ])
}

/// `sum_i P^min_i <= 0`, with `sum_i S(R | Q_i') >= 0` as a companion.
pub fn multiparty_check(e: &EvolvedScenario, report: &PrivacyReport, tol: &Tolerances) -> Result<Vec<InequalityReport>> {
    require_legs(e, report, "multiparty", None)?;
    let t = tol.inequality_slack;
    let sum_p: f64 = report.legs.iter().map(|l| l.p_min).sum();
    let mut sum_cond = 0.0;
    for l in &report.legs {
        let q = e.output_position(l.leg);
        sum_cond += e.entropy(&[0, q])? - e.entropy(&[q])?;
    }
    Ok(vec![
        InequalityReport::new("multiparty", "multiparty", sum_p, 0.0, t),
        InequalityReport::new("multiparty", "multiparty-conditional", 0.0, sum_cond, t),
    ])
}

/// Monogamy against the joint coherent information `I_c(R > Q_1' Q_2')`.
pub fn theorem2_check(e: &EvolvedScenario, report: &PrivacyReport, tol: &Tolerances) -> Result<Vec<InequalityReport>> {
    require_legs(e, report, "theorem2", Some(2))?;
    let (b, c) = (&report.legs[0], &report.legs[1]);
    let (q1, q2) = (e.output_position(0), e.output_position(1));
    let joint_ic = e.entropy(&[q1, q2])? - e.entropy(&[0, q1, q2])?;
    let t = tol.inequality_slack;
    Ok(vec![
        InequalityReport::new("theorem2", "theorem2", b.p_min + c.p_min, joint_ic, t)
            .with_note("right side is the lower bound I_c(A>BC) on the joint privacy"),
        InequalityReport::new("theorem2", "theorem2-coherent", b.coherent_info + c.coherent_info, joint_ic, t),
    ])
}

/// `E_f(R Q_1') + P^min_2 <= S(R)` and its proof chain through the
/// Koashi-Winter relation and the discord of `R Q_2'`.
pub fn theorem3_check(e: &EvolvedScenario, report: &PrivacyReport, tol: &Tolerances) -> Result<Vec<InequalityReport>> {
    theorem3_check_with(e, report, tol, Execution::default())
}

pub fn theorem3_check_with(
    e: &EvolvedScenario,
    report: &PrivacyReport,
    tol: &Tolerances,
    exec: Execution,
) -> Result<Vec<InequalityReport>> {
    require_legs(e, report, "theorem3", Some(2))?;
    let (q1, q2) = (e.output_position(0), e.output_position(1));
    let rb = e.marginal(&[0, q1])?;
    if rb.signature().dims() != [2, 2] {
        return Err(Error::Unsupported(format!("theorem3 needs R Q1' to be 2x2, got {}", rb.signature())));
    }
    let rc = e.marginal(&[0, q2])?;
    let ef = eof(&rb)?;
    let s_r = e.entropy(&[0])?;
    let (j, _) = classical_correlation_with(&rc, exec)?;
    let d = mutual_information(&rc, &[0], &[1])? - j;
    let c = &report.legs[1];
    let (t, o) = (tol.inequality_slack, tol.optimizer_slack.max(tol.inequality_slack));
    Ok(vec![
        InequalityReport::new("theorem3", "theorem3", ef + c.p_min, s_r, t),
        InequalityReport::new("theorem3", "theorem3-koashi-winter", ef + j, s_r, o),
        InequalityReport::new("theorem3", "theorem3-discord-chain", ef + c.coherent_info, d, o),
        InequalityReport::new("theorem3", "theorem3-discord-bound", d, s_r, o),
    ])
}

/// `sum_i max(P^min_i, 0)^2 <= S(R)^2` for all-qubit scenarios.
pub fn squared_monogamy_check(e: &EvolvedScenario, report: &PrivacyReport, tol: &Tolerances) -> Result<InequalityReport> {
    require_legs(e, report, "squared monogamy", None)?;
    let s = e.scenario();
    let all_qubits = s.initial.signature().dims().iter().all(|&d| d == 2)
        && s.legs.iter().all(|l| l.channel.output_dim() == 2);
    if !all_qubits {
        return Err(Error::Unsupported("squared monogamy is checked for qubit scenarios only".into()));
    }
    let left: f64 = report.legs.iter().map(|l| l.p_min.max(0.0).powi(2)).sum();
    let s_r = e.entropy(&[0])?;
    Ok(InequalityReport::new("squared", "squared-monogamy", left, s_r * s_r, tol.inequality_slack)
        .with_note("negative P^min clamped at 0 before squaring"))
}
