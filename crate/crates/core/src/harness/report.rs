//! Report files and their renderings (`text`, `records`, `table`).

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::privacy::{InequalityReport, LegPrivacy, Verdict};

/// Significant digits kept in every rendered number.
pub const SIGNIFICANT_DIGITS: usize = 12;

pub fn round_sig(x: f64) -> f64 {
    if x == 0.0 {
        return 0.0;
    }
    if !x.is_finite() {
        return x;
    }
    let rounded: f64 = format!("{:.*e}", SIGNIFICANT_DIGITS - 1, x).parse().expect("formatted float parses");
    // avoid "-0" in the output
    if rounded == 0.0 {
        0.0
    } else {
        rounded
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Text,
    Records,
    Table,
}

impl FromStr for Format {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "text" => Ok(Self::Text),
            "records" => Ok(Self::Records),
            "table" => Ok(Self::Table),
            other => Err(Error::UnknownName { kind: "format", name: other.to_string() }),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Metadata {
    pub tool: String,
    pub version: String,
    pub command: String,
    pub seed: u64,
    pub config_hash: String,
}

/// One row of a parameter sweep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub channel: String,
    pub param_name: String,
    pub param: f64,
    pub coherent_info: f64,
    pub chi_receiver: f64,
    pub chi_eve: f64,
    pub p_min: f64,
    pub disturbance: f64,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LegRecord {
    #[serde(flatten)]
    pub leg: LegPrivacy,
    pub seed: u64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub trial: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Record {
    Inequality(InequalityReport),
    Leg(LegRecord),
    Sweep(SweepRow),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub checks: usize,
    pub failures: usize,
    pub min_slack: BTreeMap<String, f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportFile {
    pub metadata: Metadata,
    pub records: Vec<Record>,
    pub summary: Summary,
}

impl ReportFile {
    /// Builds the summary from `records` and rounds every number.
    pub fn new(metadata: Metadata, records: Vec<Record>) -> Self {
        let records: Vec<Record> = records.into_iter().map(round_record).collect();
        let mut summary = Summary { checks: 0, failures: 0, min_slack: BTreeMap::new() };
        for r in &records {
            if let Record::Inequality(ineq) = r {
                summary.checks += 1;
                if ineq.verdict == Verdict::Fail {
                    summary.failures += 1;
                }
                summary
                    .min_slack
                    .entry(ineq.family.clone())
                    .and_modify(|s: &mut f64| *s = s.min(ineq.slack))
                    .or_insert(ineq.slack);
            }
        }
        Self { metadata, records, summary }
    }

    pub fn inequalities(&self) -> impl Iterator<Item = &InequalityReport> {
        self.records.iter().filter_map(|r| match r {
            Record::Inequality(i) => Some(i),
            _ => None,
        })
    }

    pub fn passed(&self) -> bool {
        self.summary.failures == 0
    }

    pub fn render(&self, format: Format) -> Result<String> {
        match format {
            Format::Text => Ok(self.render_text()),
            Format::Records => self.render_records(),
            Format::Table => self.render_table(),
        }
    }

    fn render_records(&self) -> Result<String> {
        let mut out = String::new();
        let meta = serde_json::json!({"kind": "metadata", "metadata": self.metadata});
        writeln!(out, "{meta}").expect("string write");
        for r in &self.records {
            writeln!(out, "{}", serde_json::to_string(r).map_err(json_error)?).expect("string write");
        }
        let summary = serde_json::json!({"kind": "summary", "summary": self.summary});
        writeln!(out, "{summary}").expect("string write");
        Ok(out)
    }

    fn render_table(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let sweep: Vec<&SweepRow> = self
            .records
            .iter()
            .filter_map(|r| match r {
                Record::Sweep(s) => Some(s),
                _ => None,
            })
            .collect();
        if sweep.is_empty() {
            w.write_record(["check", "family", "left", "right", "slack", "tolerance", "verdict", "seed", "trial", "detail"])
                .map_err(csv_error)?;
            for i in self.inequalities() {
                w.write_record([
                    i.check.clone(),
                    i.family.clone(),
                    num(i.left),
                    num(i.right),
                    num(i.slack),
                    num(i.tolerance),
                    i.verdict.to_string(),
                    i.provenance.seed.to_string(),
                    i.provenance.trial.map(|t| t.to_string()).unwrap_or_default(),
                    i.provenance.detail.clone(),
                ])
                .map_err(csv_error)?;
            }
        } else {
            let name = &sweep[0].param_name;
            w.write_record([name.as_str(), "coherent_info", "chi_receiver", "chi_eve", "p_min", "disturbance"])
                .map_err(csv_error)?;
            for s in sweep {
                w.write_record([
                    num(s.param),
                    num(s.coherent_info),
                    num(s.chi_receiver),
                    num(s.chi_eve),
                    num(s.p_min),
                    num(s.disturbance),
                ])
                .map_err(csv_error)?;
            }
        }
        let bytes = w.into_inner().map_err(|e| Error::invalid(format!("table output: {e}")))?;
        Ok(String::from_utf8(bytes).expect("csv of utf-8 fields"))
    }

    fn render_text(&self) -> String {
        let m = &self.metadata;
        let mut out = String::new();
        let _ = writeln!(out, "{} {} {}  seed={}  config={}", m.tool, m.version, m.command, m.seed, m.config_hash);
        for r in &self.records {
            let _ = match r {
                Record::Leg(l) => {
                    let l = &l.leg;
                    writeln!(
                        out,
                        "leg {:<6} chi_Q'={}  chi_E'={}  P_min={}  I_c={}  D={}  signals={}({})",
                        l.name,
                        num(l.chi_receiver),
                        num(l.chi_eve),
                        num(l.p_min),
                        num(l.coherent_info),
                        num(l.disturbance),
                        l.signals,
                        l.signal_count
                    )
                }
                Record::Sweep(s) => writeln!(
                    out,
                    "{} {}={}  I_c={}  chi_Q'={}  chi_E'={}  P_min={}  D={}",
                    s.channel,
                    s.param_name,
                    num(s.param),
                    num(s.coherent_info),
                    num(s.chi_receiver),
                    num(s.chi_eve),
                    num(s.p_min),
                    num(s.disturbance)
                ),
                Record::Inequality(i) if i.verdict == Verdict::Fail || self.records.len() <= 200 => writeln!(
                    out,
                    "{} {:<26} {} <= {}  slack={}{}",
                    i.verdict,
                    i.check,
                    num(i.left),
                    num(i.right),
                    num(i.slack),
                    describe(i)
                ),
                Record::Inequality(_) => Ok(()),
            };
        }
        let s = &self.summary;
        let _ = writeln!(out, "checks: {}  failures: {}", s.checks, s.failures);
        for (family, slack) in &s.min_slack {
            let _ = writeln!(out, "  min slack {family:<18} {}", num(*slack));
        }
        out
    }
}

fn describe(i: &InequalityReport) -> String {
    let mut parts = Vec::new();
    if let Some(t) = i.provenance.trial {
        parts.push(format!("trial={t}"));
    }
    if !i.provenance.detail.is_empty() {
        parts.push(i.provenance.detail.clone());
    }
    if parts.is_empty() {
        String::new()
    } else {
        format!("  [{}]", parts.join(", "))
    }
}

fn num(x: f64) -> String {
    let r = round_sig(x);
    if r != 0.0 && (r.abs() < 1e-4 || r.abs() >= 1e12) {
        format!("{r:e}")
    } else {
        format!("{r}")
    }
}

fn json_error(e: serde_json::Error) -> Error {
    Error::invalid(format!("record serialization: {e}"))
}

fn csv_error(e: csv::Error) -> Error {
    Error::invalid(format!("table output: {e}"))
}

fn round_record(r: Record) -> Record {
    match r {
        Record::Inequality(mut i) => {
            i.left = round_sig(i.left);
            i.right = round_sig(i.right);
            i.slack = round_sig(i.slack);
            Record::Inequality(i)
        }
        Record::Leg(mut l) => {
            let x = &mut l.leg;
            for v in [
                &mut x.input_entropy,
                &mut x.chi_receiver,
                &mut x.chi_eve,
                &mut x.chi_env,
                &mut x.p_min,
                &mut x.coherent_info,
                &mut x.coherent_info_extended,
                &mut x.disturbance,
                &mut x.ensemble_residual,
            ] {
                *v = round_sig(*v);
            }
            Record::Leg(l)
        }
        Record::Sweep(mut s) => {
            for v in [&mut s.param, &mut s.coherent_info, &mut s.chi_receiver, &mut s.chi_eve, &mut s.p_min, &mut s.disturbance] {
                *v = round_sig(*v);
            }
            Record::Sweep(s)
        }
    }
}
