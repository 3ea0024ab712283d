//! `compute`, `verify` and `sweep`.

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::report::{Format, LegRecord, Metadata, Record, ReportFile, SweepRow};
use super::scenario_file::ScenarioFile;
use crate::channels::{apply, complementary, random_channel_with, ChannelKind, ChannelSpec};
use crate::config::{Tolerances, MAX_DIMENSION};
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::measures::{coherent_information, disturbance, holevo, marginal_entropy};
use crate::privacy::{
    evolve, leg_privacy, multiparty_check, privacy_report, squared_monogamy_check, theorem1_check, theorem2_check,
    theorem3_check_with, tradeoff_checks, EvolvedScenario, InequalityReport, Leg, PrivacyReport, Scenario, SignalSpec,
};
use crate::random::{rng_from_seed, trial_seed};
use crate::states::{named_state, pure_decomposition_with, purify, random_density_with, random_pure_with};
use crate::tensor::DimSignature;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    Compute,
    Verify,
    Sweep,
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Compute => "compute",
            Self::Verify => "verify",
            Self::Sweep => "sweep",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CheckFamily {
    Ssa,
    WeakMonotonicity,
    HolevoIdentity,
    DataProcessing,
    Disturbance,
    PrivacyChain,
    Tradeoffs,
    Theorem1,
    Multiparty,
    Theorem2,
    Theorem3,
    Squared,
}

impl CheckFamily {
    pub const ALL: [CheckFamily; 12] = [
        Self::Ssa,
        Self::WeakMonotonicity,
        Self::HolevoIdentity,
        Self::DataProcessing,
        Self::Disturbance,
        Self::PrivacyChain,
        Self::Tradeoffs,
        Self::Theorem1,
        Self::Multiparty,
        Self::Theorem2,
        Self::Theorem3,
        Self::Squared,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Self::Ssa => "ssa",
            Self::WeakMonotonicity => "weak-monotonicity",
            Self::HolevoIdentity => "holevo-identity",
            Self::DataProcessing => "data-processing",
            Self::Disturbance => "disturbance",
            Self::PrivacyChain => "privacy-chain",
            Self::Tradeoffs => "tradeoffs",
            Self::Theorem1 => "theorem1",
            Self::Multiparty => "multiparty",
            Self::Theorem2 => "theorem2",
            Self::Theorem3 => "theorem3",
            Self::Squared => "squared",
        }
    }

    /// Families that only need generic random states and channels.
    fn is_generic(self) -> bool {
        matches!(self, Self::Ssa | Self::WeakMonotonicity | Self::HolevoIdentity | Self::DataProcessing | Self::Disturbance)
    }
}

impl FromStr for CheckFamily {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| Error::UnknownName { kind: "check family", name: s.to_string() })
    }
}

impl fmt::Display for CheckFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// `start:stop:step` with `step > 0` and `stop >= start`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RangeSpec {
    pub start: f64,
    pub stop: f64,
    pub step: f64,
}

impl RangeSpec {
    pub fn values(&self) -> Vec<f64> {
        let n = ((self.stop - self.start) / self.step + 1e-9).floor() as usize + 1;
        (0..n).map(|i| (self.start + i as f64 * self.step).min(self.stop)).collect()
    }
}

impl FromStr for RangeSpec {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        let [a, b, c] = parts.as_slice() else {
            return Err(Error::invalid(format!("range `{s}` is not start:stop:step")));
        };
        let parse = |x: &str| {
            x.trim().parse::<f64>().ok().filter(|v| v.is_finite()).ok_or_else(|| Error::invalid(format!("range `{s}`: `{x}` is not a number")))
        };
        let r = Self { start: parse(a)?, stop: parse(b)?, step: parse(c)? };
        if r.step <= 0.0 {
            return Err(Error::invalid(format!("range `{s}`: step must be positive")));
        }
        if r.stop < r.start {
            return Err(Error::invalid(format!("range `{s}` is empty")));
        }
        Ok(r)
    }
}

impl fmt::Display for RangeSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}", self.start, self.stop, self.step)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub scenario: Option<PathBuf>,
    pub dims: Vec<usize>,
    pub env_dim: usize,
    pub trials: u64,
    pub seed: u64,
    pub tolerance: Option<f64>,
    pub checks: Option<Vec<CheckFamily>>,
    pub channel: Option<String>,
    pub range: Option<RangeSpec>,
    pub execution: Execution,
    pub out: Option<PathBuf>,
    pub format: Format,
}

impl RunConfig {
    pub fn new(command: Command) -> Self {
        Self {
            command,
            scenario: None,
            dims: vec![2, 2, 2],
            env_dim: 2,
            trials: 1000,
            seed: 0,
            tolerance: None,
            checks: None,
            channel: None,
            range: None,
            execution: Execution::default(),
            out: None,
            format: Format::Text,
        }
    }

    pub fn tolerances(&self) -> Tolerances {
        let base = Tolerances::DEFAULT;
        match self.tolerance {
            Some(t) => Tolerances { inequality_slack: t, optimizer_slack: base.optimizer_slack.max(t), ..base },
            None => base,
        }
    }

    fn selected(&self) -> Vec<CheckFamily> {
        self.checks.clone().unwrap_or_else(|| CheckFamily::ALL.to_vec())
    }

    /// Rejects settings that cannot describe a run.
    pub fn validate(&self) -> Result<()> {
        if let Some(t) = self.tolerance {
            if !t.is_finite() || t < 0.0 {
                return Err(Error::invalid(format!("tolerance must be a finite non-negative number, got {t}")));
            }
        }
        if let Some(checks) = &self.checks {
            if checks.is_empty() {
                return Err(Error::invalid("--checks selects no check family"));
            }
        }
        match self.command {
            Command::Compute => {
                if self.scenario.is_none() {
                    return Err(Error::invalid("compute needs --scenario"));
                }
            }
            Command::Verify => self.validate_verify()?,
            Command::Sweep => {
                let name = self.channel.as_deref().ok_or_else(|| Error::invalid("sweep needs --channel"))?;
                let kind: ChannelKind = name.parse()?;
                if kind.param_name().is_none() {
                    return Err(Error::invalid(format!("channel `{kind}` has no parameter to sweep")));
                }
                let range = self.range.ok_or_else(|| Error::invalid("sweep needs --range start:stop:step"))?;
                for v in [range.start, range.stop] {
                    ChannelSpec::new(kind, v)?;
                }
            }
        }
        Ok(())
    }

    fn validate_verify(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::invalid("--trials must be at least 1"));
        }
        if self.env_dim == 0 {
            return Err(Error::invalid("--env-dim must be at least 1"));
        }
        let sig = DimSignature::new(self.dims.clone())?;
        if sig.len() < 2 {
            return Err(Error::invalid("--dims needs a reference and at least one receiver"));
        }
        // widest evolved vector: every receiver paired with a full environment
        let widest = self.dims[1..].iter().fold(self.dims[0] as u128, |acc, &d| acc * (d * self.env_dim) as u128);
        if widest > MAX_DIMENSION as u128 {
            return Err(Error::DimensionLimit { side: usize::try_from(widest).unwrap_or(usize::MAX), max: MAX_DIMENSION });
        }
        if let Some(checks) = &self.checks {
            let receivers = self.dims.len() - 1;
            let qubits = self.dims.iter().all(|&d| d == 2);
            for &f in checks {
                let ok = match f {
                    CheckFamily::Theorem1 | CheckFamily::Theorem2 => receivers == 2,
                    CheckFamily::Theorem3 => receivers == 2 && qubits,
                    CheckFamily::Multiparty => receivers >= 2,
                    CheckFamily::Squared => receivers >= 2 && qubits,
                    _ => true,
                };
                if !ok {
                    return Err(Error::invalid(format!("check family `{f}` does not apply to dims {}", sig)));
                }
            }
        }
        Ok(())
    }

    /// SHA-256 over everything that determines the numbers in the report.
    pub fn config_hash(&self, scenario_text: Option<&str>) -> String {
        let doc = serde_json::json!({
            "command": self.command,
            "scenario": scenario_text,
            "dims": self.dims,
            "env_dim": self.env_dim,
            "trials": self.trials,
            "seed": self.seed,
            "tolerance": self.tolerance,
            "checks": self.checks,
            "channel": self.channel,
            "range": self.range,
        });
        let digest = Sha256::digest(doc.to_string().as_bytes());
        digest.iter().map(|b| format!("{b:02x}")).collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunOutcome {
    pub report: ReportFile,
    pub rendered: String,
}

impl RunOutcome {
    pub fn passed(&self) -> bool {
        self.report.passed()
    }
}

/// Validates, runs, renders, and writes `--out` only once everything
/// succeeded.
pub fn run(cfg: &RunConfig) -> Result<RunOutcome> {
    cfg.validate()?;
    let scenario_text = match &cfg.scenario {
        Some(path) => Some(
            std::fs::read_to_string(path)
                .map_err(|e| Error::invalid(format!("cannot read scenario {}: {e}", path.display())))?,
        ),
        None => None,
    };
    let parsed = match (&scenario_text, &cfg.scenario) {
        (Some(text), Some(path)) => Some(
            ScenarioFile::parse(text)
                .and_then(|f| f.to_scenario())
                .map_err(|e| match e {
                    Error::Validation(msg) => Error::Validation(format!("{}: {msg}", path.display())),
                    other => Error::Validation(format!("{}: {other}", path.display())),
                })?,
        ),
        _ => None,
    };
    let records = match cfg.command {
        Command::Compute => compute(cfg, parsed.as_ref().expect("validated"))?,
        Command::Verify => verify(cfg)?,
        Command::Sweep => sweep(cfg, parsed.as_ref())?,
    };
    let metadata = Metadata {
        tool: "qprivacy".into(),
        version: env!("CARGO_PKG_VERSION").into(),
        command: cfg.command.to_string(),
        seed: cfg.seed,
        config_hash: cfg.config_hash(scenario_text.as_deref()),
    };
    let report = ReportFile::new(metadata, records);
    let rendered = report.render(cfg.format)?;
    if let Some(out) = &cfg.out {
        std::fs::write(out, &rendered).map_err(|e| Error::invalid(format!("cannot write {}: {e}", out.display())))?;
    }
    Ok(RunOutcome { report, rendered })
}

/// Scenario-level checks from `families` whose preconditions hold.
fn scenario_checks(
    e: &EvolvedScenario,
    report: &PrivacyReport,
    families: &[CheckFamily],
    tol: &Tolerances,
    exec: Execution,
) -> Result<Vec<InequalityReport>> {
    let has = |f: CheckFamily| families.contains(&f);
    let mut out = Vec::new();
    if has(CheckFamily::Tradeoffs) || has(CheckFamily::PrivacyChain) {
        for leg in &report.legs {
            for r in tradeoff_checks(e, leg, tol)? {
                if families.iter().any(|f| f.name() == r.family) {
                    out.push(r);
                }
            }
        }
    }
    let receivers = e.leg_count();
    let qubits = e.scenario().initial().signature().dims().iter().all(|&d| d == 2)
        && e.scenario().legs().iter().all(|l| l.channel.output_dim() == 2);
    if receivers == 2 {
        if has(CheckFamily::Theorem1) {
            out.extend(theorem1_check(e, report, tol)?);
        }
        if has(CheckFamily::Theorem2) {
            out.extend(theorem2_check(e, report, tol)?);
        }
        if has(CheckFamily::Theorem3) && qubits {
            out.extend(theorem3_check_with(e, report, tol, exec)?);
        }
    }
    if receivers >= 2 && has(CheckFamily::Multiparty) {
        out.extend(multiparty_check(e, report, tol)?);
    }
    if receivers >= 2 && qubits && has(CheckFamily::Squared) {
        out.push(squared_monogamy_check(e, report, tol)?);
    }
    Ok(out)
}

fn compute(cfg: &RunConfig, scenario: &Scenario) -> Result<Vec<Record>> {
    let tol = cfg.tolerances();
    let e = evolve(scenario)?;
    let report = privacy_report(&e)?;
    let mut records: Vec<Record> = report
        .legs
        .iter()
        .map(|l| Record::Leg(LegRecord { leg: l.clone(), seed: cfg.seed, trial: None }))
        .collect();
    for mut r in scenario_checks(&e, &report, &cfg.selected(), &tol, cfg.execution)? {
        r.provenance.seed = cfg.seed;
        records.push(Record::Inequality(r));
    }
    Ok(records)
}

fn verify(cfg: &RunConfig) -> Result<Vec<Record>> {
    let tol = cfg.tolerances();
    let families = cfg.selected();
    // trials run concurrently; the grid search inside each stays on the trial's thread
    let inner = Execution::Sequential;
    let per_trial = cfg.execution.map(cfg.trials as usize, |t| verify_trial(cfg, &tol, &families, t as u64, inner));
    let mut records = Vec::new();
    for (t, result) in per_trial.into_iter().enumerate() {
        let reports = result.map_err(|e| Error::Numeric {
            what: format!("trial {t} (seed {}): {e}", trial_seed(cfg.seed, t as u64)),
            residual: f64::NAN,
        })?;
        records.extend(reports.into_iter().map(Record::Inequality));
    }
    Ok(records)
}

fn verify_trial(
    cfg: &RunConfig,
    tol: &Tolerances,
    families: &[CheckFamily],
    trial: u64,
    exec: Execution,
) -> Result<Vec<InequalityReport>> {
    let seed = trial_seed(cfg.seed, trial);
    let mut rng = rng_from_seed(seed);
    let t = tol.inequality_slack;
    let has = |f: CheckFamily| families.contains(&f);

    // every draw happens in a fixed order so --checks never shifts the stream
    let sig = DimSignature::new(cfg.dims.clone())?;
    let psi = random_pure_with(&sig, &mut rng);
    let mut legs = Vec::new();
    for (i, &d) in cfg.dims[1..].iter().enumerate() {
        let k = rng.random_range(1..=cfg.env_dim);
        legs.push(Leg { name: format!("Q{}", i + 1), channel: random_channel_with(d, k, &mut rng)? });
    }
    let signals: Vec<SignalSpec> = (0..legs.len())
        .map(|i| {
            let s = rng.random();
            if i == 0 {
                SignalSpec::ReferenceEigenbasis
            } else {
                SignalSpec::ReferenceRandom { count: cfg.dims[0] + 1, seed: s }
            }
        })
        .collect();
    let tri_dims: Vec<usize> = (0..3).map(|i| cfg.dims.get(i).copied().unwrap_or(2)).collect();
    let tri_sig = DimSignature::new(tri_dims)?;
    let tri_rank = rng.random_range(1..=tri_sig.total());
    let tri = random_density_with(&tri_sig, tri_rank, &mut rng)?;
    let d = cfg.dims[1];
    let in_sig = DimSignature::new(vec![d])?;
    let in_rank = rng.random_range(1..=d);
    let rho = random_density_with(&in_sig, in_rank, &mut rng)?;
    let ens = pure_decomposition_with(&rho, d + 1, &mut rng)?;
    let k2 = rng.random_range(1..=cfg.env_dim);
    let second = random_channel_with(d, k2, &mut rng)?;

    let mut out = Vec::new();
    if has(CheckFamily::Ssa) || has(CheckFamily::WeakMonotonicity) {
        let s = |set: &[usize]| marginal_entropy(&tri, set);
        if has(CheckFamily::Ssa) {
            out.push(InequalityReport::new("ssa", "ssa", s(&[0, 1, 2])? + s(&[1])?, s(&[0, 1])? + s(&[1, 2])?, t));
        }
        if has(CheckFamily::WeakMonotonicity) {
            out.push(InequalityReport::new(
                "weak-monotonicity",
                "weak-monotonicity",
                s(&[0])? + s(&[1])?,
                s(&[0, 2])? + s(&[1, 2])?,
                t,
            ));
        }
    }
    let first = &legs[0].channel;
    if has(CheckFamily::HolevoIdentity) || has(CheckFamily::DataProcessing) {
        let purified = purify(&rho)?.density();
        let once = apply(first, &purified, 1)?;
        let ic = coherent_information(&once, &[0], &[1])?;
        if has(CheckFamily::HolevoIdentity) {
            let chi_b = holevo(&ens.map(|m| apply(first, m, 0))?)?;
            let chi_e = holevo(&ens.map(|m| complementary(first, m))?)?;
            out.push(
                InequalityReport::new("holevo-identity", "holevo-identity", (chi_b - chi_e - ic).abs(), 0.0, t)
                    .with_note("left is |chi_Q' - chi_E' - I_c| for a pure-signal ensemble"),
            );
        }
        if has(CheckFamily::DataProcessing) {
            let twice = apply(&second, &once, 1)?;
            out.push(InequalityReport::new(
                "data-processing",
                "data-processing",
                coherent_information(&twice, &[0], &[1])?,
                ic,
                t,
            ));
        }
    }
    if has(CheckFamily::Disturbance) {
        let d1 = disturbance(first, &rho)?;
        let d12 = disturbance(&first.then(&second)?, &rho)?;
        let log_d = (d as f64).log2();
        out.push(InequalityReport::new("disturbance", "disturbance-lower", 0.0, d1, t));
        out.push(InequalityReport::new("disturbance", "disturbance-upper", d1, 2.0 * log_d, t));
        out.push(InequalityReport::new("disturbance", "disturbance-monotone", d1, d12, t));
    }
    if families.iter().any(|f| !f.is_generic()) {
        let scenario = Scenario::new(psi, legs, signals)?;
        let e = evolve(&scenario)?;
        let report = privacy_report(&e)?;
        out.extend(scenario_checks(&e, &report, families, tol, exec)?);
    }
    for r in &mut out {
        r.provenance.seed = seed;
        r.provenance.trial = Some(trial);
    }
    Ok(out)
}

fn sweep(cfg: &RunConfig, scenario: Option<&Scenario>) -> Result<Vec<Record>> {
    let tol = cfg.tolerances();
    let kind: ChannelKind = cfg.channel.as_deref().expect("validated").parse()?;
    let base = match scenario {
        Some(s) => s.clone(),
        None => {
            let bell = named_state("bell", &DimSignature::qubits(2)?)?;
            let leg = Leg { name: "B".into(), channel: ChannelSpec::new(kind, 0.0)?.build() };
            Scenario::with_default_signals(bell, vec![leg])?
        }
    };
    if base.initial().signature().dim(1) != 2 {
        return Err(Error::dim("sweep channels act on a qubit; the first leg input is not one"));
    }
    let param_name = kind.param_name().expect("validated").to_string();
    let mut records = Vec::new();
    for value in cfg.range.expect("validated").values() {
        let spec = ChannelSpec::new(kind, value)?;
        let mut legs = base.legs().to_vec();
        legs[0].channel = spec.build();
        let s = Scenario::new(base.initial().clone(), legs, base.signals().to_vec())?;
        let e = evolve(&s)?;
        let leg = leg_privacy(&e, 0)?;
        records.push(Record::Sweep(SweepRow {
            channel: kind.name().into(),
            param_name: param_name.clone(),
            param: value,
            coherent_info: leg.coherent_info,
            chi_receiver: leg.chi_receiver,
            chi_eve: leg.chi_eve,
            p_min: leg.p_min,
            disturbance: leg.disturbance,
            seed: cfg.seed,
        }));
        for mut r in tradeoff_checks(&e, &leg, &tol)? {
            r.provenance.seed = cfg.seed;
            r.provenance.detail = format!("{spec}");
            records.push(Record::Inequality(r));
        }
    }
    Ok(records)
}
