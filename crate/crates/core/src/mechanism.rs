//! Every mechanism behind one name, for front ends.

use std::fmt;
use std::str::FromStr;

use crate::allocation::Allocation;
use crate::error::{CakeError, Result};
use crate::generate::InstanceGenerator;
use crate::rw::{self, AgentOracle, MechanismResult, QueryTranscript, SincereOracle};
use crate::uniform::{length_game, lex_order, procaccia, AgentOrder, Profile, UniformPreference};
use crate::valuation::{Valuation, ValuationClass};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum MechanismKind {
    CutAndChoose,
    LastDiminisher,
    EvenPaz,
    Selfridge,
    LexOrder,
    LengthGame,
    Procaccia,
}

impl MechanismKind {
    pub const ALL: [MechanismKind; 7] = [
        MechanismKind::CutAndChoose,
        MechanismKind::LastDiminisher,
        MechanismKind::EvenPaz,
        MechanismKind::Selfridge,
        MechanismKind::LexOrder,
        MechanismKind::LengthGame,
        MechanismKind::Procaccia,
    ];

    pub fn name(self) -> &'static str {
        match self {
            MechanismKind::CutAndChoose => "cut-and-choose",
            MechanismKind::LastDiminisher => "last-diminisher",
            MechanismKind::EvenPaz => "even-paz",
            MechanismKind::Selfridge => "selfridge",
            MechanismKind::LexOrder => "lex-order",
            MechanismKind::LengthGame => "length-game",
            MechanismKind::Procaccia => "procaccia",
        }
    }

    /// The query protocol, for mechanisms that only talk to agents through
    /// eval and cut queries.
    pub fn protocol(self) -> Option<fn(&[&dyn AgentOracle]) -> Result<MechanismResult>> {
        match self {
            MechanismKind::CutAndChoose => Some(rw::cut_and_choose),
            MechanismKind::LastDiminisher => Some(rw::last_diminisher),
            MechanismKind::EvenPaz => Some(rw::even_paz),
            MechanismKind::Selfridge => Some(rw::selfridge),
            _ => None,
        }
    }
}

impl fmt::Display for MechanismKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for MechanismKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        MechanismKind::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| format!("unknown mechanism `{s}`"))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MechanismRun {
    pub allocation: Allocation,
    /// Present for query protocols.
    pub transcript: Option<QueryTranscript>,
}

fn uniform_preferences(valuations: &[Valuation]) -> Result<Vec<UniformPreference>> {
    valuations
        .iter()
        .enumerate()
        .map(|(i, v)| {
            if v.class() != ValuationClass::PiecewiseUniform {
                return Err(CakeError::UnsupportedValuationClass(format!("agent {i} is not piecewise uniform")));
            }
            UniformPreference::new(v.valued_set())
        })
        .collect()
}

/// Runs `kind` with sincere agents. The claim-based mechanisms use `profile`
/// when given and the sincere profile otherwise.
pub fn run_mechanism(kind: MechanismKind, valuations: &[Valuation], profile: Option<&Profile>) -> Result<MechanismRun> {
    if let Some(protocol) = kind.protocol() {
        let oracles: Vec<SincereOracle> = valuations.iter().map(SincereOracle::new).collect();
        let refs: Vec<&dyn AgentOracle> = oracles.iter().map(|o| o as &dyn AgentOracle).collect();
        let out = protocol(&refs)?;
        return Ok(MechanismRun { allocation: out.allocation, transcript: Some(out.transcript) });
    }
    let claims = || -> Result<Profile> {
        match profile {
            Some(p) if p.n() != valuations.len() => {
                Err(CakeError::DimensionMismatch { expected: valuations.len(), found: p.n() })
            }
            Some(p) => Ok(p.clone()),
            None => Ok(Profile::sincere(&uniform_preferences(valuations)?)),
        }
    };
    let allocation = match kind {
        MechanismKind::LexOrder => {
            let p = claims()?;
            lex_order(&p, &AgentOrder::identity(p.n()))?
        }
        MechanismKind::LengthGame => length_game(&claims()?),
        _ => procaccia(&uniform_preferences(valuations)?)?.allocation,
    };
    Ok(MechanismRun { allocation, transcript: None })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct QueryCount {
    pub n: usize,
    pub total: usize,
    pub eval: usize,
    pub cut: usize,
}

/// Query counts of a protocol on random piecewise uniform agents, one
/// instance per agent count in `lo..=hi`, all drawn from one seeded stream.
pub fn query_counts(kind: MechanismKind, lo: usize, hi: usize, seed: u64) -> Result<Vec<QueryCount>> {
    if kind.protocol().is_none() {
        return Err(CakeError::NotAProtocol(kind.name()));
    }
    let mut gen = InstanceGenerator::new(seed);
    (lo..=hi)
        .map(|n| {
            let vals: Vec<Valuation> = gen.uniform_preferences(n).iter().map(UniformPreference::to_valuation).collect();
            let t = run_mechanism(kind, &vals, None)?.transcript.expect("protocols record queries");
            Ok(QueryCount { n, total: t.total(), eval: t.eval_count(), cut: t.cut_count() })
        })
        .collect()
}
