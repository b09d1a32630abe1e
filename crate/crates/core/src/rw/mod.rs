//! Robertson-Webb protocol runtime.
//!
//! Mechanisms talk to agents only through [`Protocol::eval`] and
//! [`Protocol::cut`]; every query is recorded in a [`QueryTranscript`].

mod cut_and_choose;
mod even_paz;
mod last_diminisher;
mod oracle;
mod selfridge;
mod transcript;

pub use cut_and_choose::cut_and_choose;
pub use even_paz::even_paz;
pub use last_diminisher::last_diminisher;
pub use oracle::{AgentOracle, RandomLiar, SincereOracle};
pub use selfridge::selfridge;
pub use transcript::{QueryKind, QueryRecord, QueryTranscript};

use crate::allocation::Allocation;
use crate::error::{CakeError, Result};
use crate::interval::IntervalSet;
use crate::rational::{self, one, Rational};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MechanismResult {
    pub allocation: Allocation,
    pub transcript: QueryTranscript,
}

/// A single mechanism run: the agents' oracles plus the transcript so far.
pub struct Protocol<'a> {
    oracles: &'a [&'a dyn AgentOracle],
    transcript: QueryTranscript,
    portions: Vec<IntervalSet>,
}

impl<'a> Protocol<'a> {
    pub fn new(oracles: &'a [&'a dyn AgentOracle]) -> Self {
        Protocol {
            oracles,
            transcript: QueryTranscript::new(oracles.len()),
            portions: vec![IntervalSet::empty(); oracles.len()],
        }
    }

    pub fn n(&self) -> usize {
        self.oracles.len()
    }

    pub fn eval(&mut self, agent: usize, a: &Rational, b: &Rational) -> Result<Rational> {
        let oracle = self.oracles.get(agent).ok_or(CakeError::AgentOutOfRange(agent))?;
        let response = oracle.eval(a, b)?;
        self.transcript.record(agent, QueryKind::Eval, a.clone(), b.clone(), response.clone());
        Ok(response)
    }

    /// Cut answers are clamped into `[a, 1]`, so an insincere agent can
    /// only misplace its own knife, never move it off the cake.
    pub fn cut(&mut self, agent: usize, a: &Rational, target: &Rational) -> Result<Rational> {
        let oracle = self.oracles.get(agent).ok_or(CakeError::AgentOutOfRange(agent))?;
        let response = oracle.cut(a, target)?;
        let response = rational::min(&rational::max(&response, a), &one());
        self.transcript.record(agent, QueryKind::Cut, a.clone(), target.clone(), response.clone());
        Ok(response)
    }

    /// Adds `[lo, hi]` to an agent's portion.
    pub fn give(&mut self, agent: usize, lo: &Rational, hi: &Rational) {
        if lo < hi {
            let slice = IntervalSet::span(lo.clone(), hi.clone());
            self.portions[agent] = self.portions[agent].union(&slice);
        }
    }

    pub fn finish(self) -> Result<MechanismResult> {
        Ok(MechanismResult { allocation: Allocation::new(self.portions)?, transcript: self.transcript })
    }
}

fn check_arity(mechanism: &'static str, found: usize, ok: bool, expected: &str) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(CakeError::ArityMismatch { mechanism, expected: expected.to_string(), found })
    }
}

/// `[lo, hi]` as a pair, used when slices get relabelled.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct Slice {
    pub lo: Rational,
    pub hi: Rational,
}

impl Slice {
    pub fn new(lo: Rational, hi: Rational) -> Self {
        Slice { lo, hi }
    }
}
