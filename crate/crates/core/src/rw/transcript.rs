use std::fmt;

use crate::error::Result;
use crate::rational::Rational;

use super::AgentOracle;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum QueryKind {
    Eval,
    Cut,
}

impl fmt::Display for QueryKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            QueryKind::Eval => "eval",
            QueryKind::Cut => "cut",
        })
    }
}

/// One query: for `eval` the arguments are `(a, b)`, for `cut` `(a, target)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QueryRecord {
    pub agent: usize,
    pub kind: QueryKind,
    pub args: (Rational, Rational),
    pub response: Rational,
}

impl fmt::Display for QueryRecord {
    /// `agent,kind,args,response` with the two arguments separated by a space.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{},{} {},{}", self.agent, self.kind, self.args.0, self.args.1, self.response)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct QueryTranscript {
    records: Vec<QueryRecord>,
    evals: Vec<usize>,
    cuts: Vec<usize>,
}

impl QueryTranscript {
    pub fn new(agents: usize) -> Self {
        QueryTranscript { records: Vec::new(), evals: vec![0; agents], cuts: vec![0; agents] }
    }

    pub(crate) fn record(&mut self, agent: usize, kind: QueryKind, a: Rational, b: Rational, response: Rational) {
        match kind {
            QueryKind::Eval => self.evals[agent] += 1,
            QueryKind::Cut => self.cuts[agent] += 1,
        }
        self.records.push(QueryRecord { agent, kind, args: (a, b), response });
    }

    pub fn records(&self) -> &[QueryRecord] {
        &self.records
    }

    pub fn total(&self) -> usize {
        self.records.len()
    }

    pub fn eval_count(&self) -> usize {
        self.evals.iter().sum()
    }

    pub fn cut_count(&self) -> usize {
        self.cuts.iter().sum()
    }

    /// `(evals, cuts)` issued to one agent.
    pub fn agent_counts(&self, agent: usize) -> (usize, usize) {
        (self.evals[agent], self.cuts[agent])
    }

    /// One `agent,kind,args,response` line per query.
    pub fn to_lines(&self) -> String {
        self.records.iter().map(|r| format!("{r}\n")).collect()
    }

    /// Re-issues every recorded query and reports whether all responses match.
    pub fn replays_against(&self, oracles: &[&dyn AgentOracle]) -> Result<bool> {
        for record in &self.records {
            let oracle = oracles[record.agent];
            let (a, b) = &record.args;
            let response = match record.kind {
                QueryKind::Eval => oracle.eval(a, b)?,
                QueryKind::Cut => oracle.cut(a, b)?,
            };
            if response != record.response {
                return Ok(false);
            }
        }
        Ok(true)
    }
}
