//! JSON scenario files.
//!
//! ```json
//! {
//!   "version": 1,
//!   "agents": [
//!     { "id": "ann", "valuation": { "type": "uniform", "pieces": [{ "lo": "0", "hi": "1/2" }] } },
//!     { "id": "bob", "valuation": { "type": "constant", "pieces": [{ "lo": "0", "hi": "1", "value": "3" }] } }
//!   ],
//!   "profile": [[["0", "1/2"]], [["1/2", "1"]]],
//!   "allocation": [[["0", "1/2"]], [["1/2", "1"]]]
//! }
//! ```
//!
//! Numbers are strings holding `p/q`, an integer, or a decimal.

use std::collections::HashSet;
use std::fmt;

use serde::de::{self, Deserializer};
use serde::ser::Serializer;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::allocation::Allocation;
use crate::error::CakeError;
use crate::interval::IntervalSet;
use crate::rational::{parse_rational, Rational};
use crate::uniform::{Profile, UniformPreference};
use crate::valuation::{PieceSpec, Valuation, ValuationClass};

pub const SCENARIO_VERSION: u32 = 1;

/// A rational that travels as a string.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Exact(pub Rational);

impl Serialize for Exact {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(&self.0)
    }
}

impl<'de> Deserialize<'de> for Exact {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let text = String::deserialize(deserializer)?;
        parse_rational(&text).map(Exact).map_err(de::Error::custom)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PieceType {
    Uniform,
    Constant,
    Linear,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PieceText {
    pub lo: Exact,
    pub hi: Exact,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub value: Option<Exact>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub slope: Option<Exact>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub intercept: Option<Exact>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ValuationText {
    #[serde(rename = "type")]
    pub kind: PieceType,
    pub pieces: Vec<PieceText>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AgentText {
    pub id: String,
    pub valuation: ValuationText,
}

/// One interval list per agent.
pub type SetsText = Vec<Vec<[Exact; 2]>>;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioText {
    pub version: u32,
    pub agents: Vec<AgentText>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub profile: Option<SetsText>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub allocation: Option<SetsText>,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ScenarioError {
    #[error("line {line}, column {column}: {message}")]
    Syntax { line: usize, column: usize, message: String },
    #[error("agent {agent}: {message}")]
    Agent { agent: String, message: String },
    #[error("{0}")]
    Invalid(String),
}

/// A validated scenario.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Scenario {
    pub ids: Vec<String>,
    pub kinds: Vec<PieceType>,
    pub valuations: Vec<Valuation>,
    pub profile: Option<Profile>,
    pub allocation: Option<Allocation>,
}

fn sets_from_text(sets: &SetsText, n: usize, what: &str) -> Result<Vec<IntervalSet>, ScenarioError> {
    if sets.len() != n {
        return Err(ScenarioError::Invalid(format!("{what} lists {} agents, expected {n}", sets.len())));
    }
    sets.iter()
        .map(|pairs| {
            IntervalSet::from_pairs(pairs.iter().map(|[lo, hi]| (lo.0.clone(), hi.0.clone())))
                .map_err(|e| ScenarioError::Invalid(format!("{what}: {e}")))
        })
        .collect()
}

fn sets_to_text(sets: &[IntervalSet]) -> SetsText {
    sets.iter()
        .map(|s| s.intervals().iter().map(|i| [Exact(i.lo().clone()), Exact(i.hi().clone())]).collect())
        .collect()
}

fn piece_spec(kind: PieceType, piece: &PieceText) -> Result<PieceSpec, String> {
    let (lo, hi) = (piece.lo.0.clone(), piece.hi.0.clone());
    let field = |v: &Option<Exact>, name: &str| v.as_ref().map(|e| e.0.clone()).ok_or(format!("piece needs `{name}`"));
    match kind {
        PieceType::Uniform => {
            if piece.value.is_some() || piece.slope.is_some() || piece.intercept.is_some() {
                return Err("uniform pieces take only `lo` and `hi`".into());
            }
            Ok(PieceSpec::uniform(lo, hi))
        }
        PieceType::Constant => Ok(PieceSpec::constant(lo, hi, field(&piece.value, "value")?)),
        PieceType::Linear => {
            Ok(PieceSpec::linear(lo, hi, field(&piece.slope, "slope")?, field(&piece.intercept, "intercept")?))
        }
    }
}

/// serde_json's message without its trailing position, which we report separately.
fn syntax_message(e: &serde_json::Error) -> String {
    let text = e.to_string();
    match text.rsplit_once(" at line ") {
        Some((message, _)) => message.to_string(),
        None => text,
    }
}

impl Scenario {
    pub fn parse(text: &str) -> Result<Scenario, ScenarioError> {
        let raw: ScenarioText = serde_json::from_str(text).map_err(|e| ScenarioError::Syntax {
            line: e.line(),
            column: e.column(),
            message: syntax_message(&e),
        })?;
        Scenario::from_text(&raw)
    }

    pub fn from_text(raw: &ScenarioText) -> Result<Scenario, ScenarioError> {
        if raw.version != SCENARIO_VERSION {
            return Err(ScenarioError::Invalid(format!("unsupported version {}", raw.version)));
        }
        if raw.agents.is_empty() {
            return Err(ScenarioError::Invalid("no agents".into()));
        }
        let mut seen = HashSet::new();
        let mut valuations = Vec::with_capacity(raw.agents.len());
        for agent in &raw.agents {
            if !seen.insert(agent.id.as_str()) {
                return Err(ScenarioError::Invalid(format!("duplicate agent id `{}`", agent.id)));
            }
            let fail = |message: String| ScenarioError::Agent { agent: agent.id.clone(), message };
            let specs = agent
                .valuation
                .pieces
                .iter()
                .map(|p| piece_spec(agent.valuation.kind, p))
                .collect::<Result<Vec<_>, _>>()
                .map_err(fail)?;
            valuations.push(Valuation::normalize(specs).map_err(|e| fail(e.to_string()))?);
        }
        let n = valuations.len();
        let profile = raw.profile.as_ref().map(|p| sets_from_text(p, n, "profile")).transpose()?.map(Profile::new);
        let allocation = match &raw.allocation {
            Some(a) => Some(
                Allocation::new(sets_from_text(a, n, "allocation")?)
                    .map_err(|e| ScenarioError::Invalid(format!("allocation: {e}")))?,
            ),
            None => None,
        };
        Ok(Scenario {
            ids: raw.agents.iter().map(|a| a.id.clone()).collect(),
            kinds: raw.agents.iter().map(|a| a.valuation.kind).collect(),
            valuations,
            profile,
            allocation,
        })
    }

    /// Builds a scenario of uniform agents with ids `a1`, `a2`, ...
    pub fn from_preferences(prefs: &[UniformPreference]) -> Scenario {
        Scenario {
            ids: (1..=prefs.len()).map(|i| format!("a{i}")).collect(),
            kinds: vec![PieceType::Uniform; prefs.len()],
            valuations: prefs.iter().map(UniformPreference::to_valuation).collect(),
            profile: None,
            allocation: None,
        }
    }

    /// Builds a scenario from normalized valuations with ids `a1`, `a2`, ...
    pub fn from_valuations(valuations: Vec<Valuation>) -> Scenario {
        let kinds = valuations
            .iter()
            .map(|v| match v.class() {
                ValuationClass::PiecewiseUniform => PieceType::Uniform,
                ValuationClass::PiecewiseConstant => PieceType::Constant,
                ValuationClass::PiecewiseLinear => PieceType::Linear,
            })
            .collect();
        Scenario {
            ids: (1..=valuations.len()).map(|i| format!("a{i}")).collect(),
            kinds,
            valuations,
            profile: None,
            allocation: None,
        }
    }

    pub fn n(&self) -> usize {
        self.valuations.len()
    }

    /// The agents as uniform preferences, if every agent is uniform.
    pub fn uniform_preferences(&self) -> Result<Vec<UniformPreference>, CakeError> {
        self.valuations
            .iter()
            .zip(&self.ids)
            .map(|(v, id)| {
                if v.class() != ValuationClass::PiecewiseUniform {
                    return Err(CakeError::UnsupportedValuationClass(format!(
                        "agent `{id}` is not piecewise uniform"
                    )));
                }
                UniformPreference::new(v.valued_set())
            })
            .collect()
    }

    /// Canonical text form: normalized densities, canonical interval sets.
    pub fn to_text(&self) -> ScenarioText {
        let agents = self
            .ids
            .iter()
            .zip(&self.kinds)
            .zip(&self.valuations)
            .map(|((id, kind), v)| AgentText { id: id.clone(), valuation: valuation_text(*kind, v) })
            .collect();
        ScenarioText {
            version: SCENARIO_VERSION,
            agents,
            profile: self.profile.as_ref().map(|p| sets_to_text(p.strategies())),
            allocation: self.allocation.as_ref().map(|a| sets_to_text(a.portions())),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_text()).expect("scenario serializes")
    }
}

fn valuation_text(kind: PieceType, v: &Valuation) -> ValuationText {
    let pieces = v
        .pieces()
        .iter()
        .map(|p| {
            let (lo, hi) = (Exact(p.lo().clone()), Exact(p.hi().clone()));
            match kind {
                PieceType::Uniform => PieceText { lo, hi, value: None, slope: None, intercept: None },
                PieceType::Constant => {
                    PieceText { lo, hi, value: Some(Exact(p.intercept().clone())), slope: None, intercept: None }
                }
                PieceType::Linear => PieceText {
                    lo,
                    hi,
                    value: None,
                    slope: Some(Exact(p.slope().clone())),
                    intercept: Some(Exact(p.intercept().clone())),
                },
            }
        })
        .collect();
    ValuationText { kind, pieces }
}

impl fmt::Display for Scenario {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_json())
    }
}
