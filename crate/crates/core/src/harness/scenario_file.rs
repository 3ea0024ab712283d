//! Scenario documents: `{initial, legs, ensembles}` in JSON.
//!
//! ```json
//! {
//!   "initial": {"dims": [2, 2], "named": "bell"},
//!   "legs": [{"name": "B", "channel": {"kind": "depolarizing", "params": {"p": 0.1}}}],
//!   "ensembles": [{"leg": "B", "kind": "random", "count": 4, "seed": 7}]
//! }
//! ```
//!
//! Legs without an `ensembles` entry use the reference eigenbasis.

use serde::{Deserialize, Serialize};

use crate::channels::ChannelLiteral;
use crate::error::{Error, Result};
use crate::privacy::{Leg, Scenario, SignalSpec};
use crate::states::{Ensemble, PureState, State, StateLiteral};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    pub initial: StateLiteral,
    pub legs: Vec<LegEntry>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub ensembles: Vec<EnsembleEntry>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LegEntry {
    pub name: String,
    pub channel: ChannelLiteral,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnsembleEntry {
    pub leg: String,
    #[serde(flatten)]
    pub source: EnsembleSource,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum EnsembleSource {
    Eigenbasis,
    Random { count: usize, seed: u64 },
    Explicit { members: Vec<MemberEntry> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MemberEntry {
    pub p: f64,
    pub state: StateLiteral,
}

impl ScenarioFile {
    /// Parses `text`; errors name the offending field path and line.
    pub fn parse(text: &str) -> Result<Self> {
        let de = &mut serde_json::Deserializer::from_str(text);
        serde_path_to_error::deserialize(de).map_err(|e| {
            let path = e.path().to_string();
            // serde_json appends "at line L column C"
            Error::invalid(format!("field `{path}`: {}", e.into_inner()))
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("scenario files serialize")
    }

    pub fn to_scenario(&self) -> Result<Scenario> {
        let initial = match self.initial.to_state().map_err(|e| field_error("initial", e))? {
            State::Pure(p) => p,
            State::Mixed(rho) if rho.rank()? == 1 => {
                let spec = rho.spectrum()?;
                PureState::normalized(spec.eigenvector(0), rho.signature().clone())?
            }
            State::Mixed(_) => return Err(Error::invalid("field `initial`: the initial state must be pure")),
        };
        let legs = self
            .legs
            .iter()
            .enumerate()
            .map(|(i, l)| {
                let channel = l.channel.to_channel().map_err(|e| field_error(&format!("legs[{i}].channel"), e))?;
                Ok(Leg { name: l.name.clone(), channel })
            })
            .collect::<Result<Vec<_>>>()?;
        let mut signals = vec![SignalSpec::default(); legs.len()];
        let mut assigned = vec![false; legs.len()];
        for (k, entry) in self.ensembles.iter().enumerate() {
            let at = format!("ensembles[{k}]");
            let i = legs
                .iter()
                .position(|l| l.name == entry.leg)
                .ok_or_else(|| Error::invalid(format!("field `{at}.leg`: no leg named `{}`", entry.leg)))?;
            if std::mem::replace(&mut assigned[i], true) {
                return Err(Error::invalid(format!("field `{at}`: leg `{}` already has an ensemble", entry.leg)));
            }
            signals[i] = match &entry.source {
                EnsembleSource::Eigenbasis => SignalSpec::ReferenceEigenbasis,
                EnsembleSource::Random { count, seed } => SignalSpec::ReferenceRandom { count: *count, seed: *seed },
                EnsembleSource::Explicit { members } => {
                    let states = members
                        .iter()
                        .enumerate()
                        .map(|(j, m)| {
                            m.state.to_state().map(|s| s.density()).map_err(|e| field_error(&format!("{at}.members[{j}].state"), e))
                        })
                        .collect::<Result<Vec<_>>>()?;
                    let weights = members.iter().map(|m| m.p).collect();
                    SignalSpec::InputEnsemble(
                        Ensemble::from_weights(weights, states).map_err(|e| field_error(&at, e))?,
                    )
                }
            };
        }
        Scenario::new(initial, legs, signals)
    }
}

fn field_error(field: &str, e: Error) -> Error {
    match e {
        Error::Validation(msg) => Error::invalid(format!("field `{field}`: {msg}")),
        other => Error::invalid(format!("field `{field}`: {other}")),
    }
}
