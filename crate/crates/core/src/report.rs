//! Serializable summaries of a run: allocation, equity table, criteria and
//! whatever extra evidence the command produced.

use std::fmt::Write as _;

use serde::Serialize;

use crate::allocation::{equity_table, is_non_wasteful, Allocation};
use crate::equilibrium::{EquilibriumReport, Violation};
use crate::error::Result;
use crate::interval::IntervalSet;
use crate::rw::QueryTranscript;
use crate::scenario::{Exact, SetsText};
use crate::valuation::Valuation;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Criteria {
    pub proportional: bool,
    pub envy_free: bool,
    pub equitable: bool,
    pub non_wasteful: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct QueryCounts {
    pub total: usize,
    pub eval: usize,
    pub cut: usize,
    /// `[eval, cut]` per agent.
    pub per_agent: Vec<[usize; 2]>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ViolationJson {
    pub kind: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub first: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub second: Option<usize>,
    pub witness: Vec<[Exact; 2]>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DeviationJson {
    pub agent: usize,
    pub strategy: Vec<[Exact; 2]>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EquilibriumJson {
    pub is_equilibrium: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub violation: Option<ViolationJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub deviating_agent: Option<DeviationJson>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OptimumJson {
    pub objective: String,
    pub value: Exact,
    pub pivots: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RunReport {
    pub command: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mechanism: Option<String>,
    pub agents: Vec<String>,
    pub allocation: SetsText,
    /// `equity_table[i][j]` is agent `i`'s value for portion `j`.
    pub equity_table: Vec<Vec<Exact>>,
    pub criteria: Criteria,
    pub ue: Exact,
    pub ee: Exact,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub queries: Option<QueryCounts>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub equilibrium: Option<EquilibriumJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub optimum: Option<OptimumJson>,
}

fn set_text(set: &IntervalSet) -> Vec<[Exact; 2]> {
    set.intervals().iter().map(|i| [Exact(i.lo().clone()), Exact(i.hi().clone())]).collect()
}

impl RunReport {
    pub fn audit(command: &str, agents: &[String], valuations: &[Valuation], allocation: &Allocation) -> Result<Self> {
        let table = equity_table(valuations, allocation)?;
        Ok(RunReport {
            command: command.to_string(),
            mechanism: None,
            agents: agents.to_vec(),
            allocation: allocation.portions().iter().map(set_text).collect(),
            equity_table: table.rows().iter().map(|r| r.iter().cloned().map(Exact).collect()).collect(),
            criteria: Criteria {
                proportional: table.is_proportional(),
                envy_free: table.is_envy_free(),
                equitable: table.is_equitable(),
                non_wasteful: is_non_wasteful(valuations, allocation)?,
            },
            ue: Exact(table.utilitarian_efficiency()),
            ee: Exact(table.egalitarian_efficiency()),
            queries: None,
            equilibrium: None,
            optimum: None,
        })
    }

    pub fn with_mechanism(mut self, name: &str) -> Self {
        self.mechanism = Some(name.to_string());
        self
    }

    pub fn with_queries(mut self, transcript: &QueryTranscript) -> Self {
        let per_agent = (0..self.agents.len())
            .map(|i| {
                let (e, c) = transcript.agent_counts(i);
                [e, c]
            })
            .collect();
        self.queries = Some(QueryCounts {
            total: transcript.total(),
            eval: transcript.eval_count(),
            cut: transcript.cut_count(),
            per_agent,
        });
        self
    }

    pub fn with_equilibrium(mut self, report: &EquilibriumReport) -> Self {
        let violation = report.violation.as_ref().map(|v| match v {
            Violation::UnallocatedValuedCake(w) => {
                ViolationJson { kind: "unallocated-valued-cake", first: None, second: None, witness: set_text(w) }
            }
            Violation::LengthOrderViolation { first, second, witness } => ViolationJson {
                kind: "length-order",
                first: Some(*first),
                second: Some(*second),
                witness: set_text(witness),
            },
        });
        let deviating_agent =
            report.deviating_agent.as_ref().map(|(agent, s)| DeviationJson { agent: *agent, strategy: set_text(s) });
        self.equilibrium = Some(EquilibriumJson { is_equilibrium: report.is_equilibrium, violation, deviating_agent });
        self
    }

    pub fn with_optimum(mut self, objective: &str, value: crate::Rational, pivots: usize) -> Self {
        self.optimum = Some(OptimumJson { objective: objective.to_string(), value: Exact(value), pivots });
        self
    }

    /// The named yes/no property, for `--expect-<name>` style checks.
    pub fn flag(&self, name: &str) -> Option<bool> {
        match name {
            "proportional" => Some(self.criteria.proportional),
            "envy-free" => Some(self.criteria.envy_free),
            "equitable" => Some(self.criteria.equitable),
            "non-wasteful" => Some(self.criteria.non_wasteful),
            "equilibrium" => self.equilibrium.as_ref().map(|e| e.is_equilibrium),
            _ => None,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// One row per agent, then `key,value` summary rows.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("agent,portion");
        for j in 1..=self.agents.len() {
            let _ = write!(out, ",A_{j}");
        }
        out.push('\n');
        for (i, id) in self.agents.iter().enumerate() {
            let _ = write!(out, "{id},{}", portion_text(&self.allocation[i]).replace(',', ";"));
            for v in &self.equity_table[i] {
                let _ = write!(out, ",{}", v.0);
            }
            out.push('\n');
        }
        out.push('\n');
        out.push_str("key,value\n");
        for (key, value) in self.summary() {
            let _ = writeln!(out, "{key},{value}");
        }
        out
    }

    pub fn to_table(&self) -> String {
        let width = self.agents.iter().map(String::len).max().unwrap_or(0).max(5);
        let mut out = String::new();
        if let Some(m) = &self.mechanism {
            let _ = writeln!(out, "mechanism: {m}");
        }
        for (i, id) in self.agents.iter().enumerate() {
            let _ = writeln!(out, "{id:>width$}  {}", portion_text(&self.allocation[i]));
        }
        out.push('\n');
        let cells: Vec<Vec<String>> =
            self.equity_table.iter().map(|r| r.iter().map(|v| v.0.to_string()).collect()).collect();
        let cell = cells.iter().flatten().map(String::len).max().unwrap_or(1).max(4);
        let _ = write!(out, "{:>width$}", "u_i");
        for j in 1..=self.agents.len() {
            let _ = write!(out, "  {:>cell$}", format!("A_{j}"));
        }
        out.push('\n');
        for (id, row) in self.agents.iter().zip(&cells) {
            let _ = write!(out, "{id:>width$}");
            for c in row {
                let _ = write!(out, "  {c:>cell$}");
            }
            out.push('\n');
        }
        out.push('\n');
        for (key, value) in self.summary() {
            let _ = writeln!(out, "{key}: {value}");
        }
        out
    }

    fn summary(&self) -> Vec<(String, String)> {
        let mut rows = vec![
            ("proportional".to_string(), self.criteria.proportional.to_string()),
            ("envy_free".to_string(), self.criteria.envy_free.to_string()),
            ("equitable".to_string(), self.criteria.equitable.to_string()),
            ("non_wasteful".to_string(), self.criteria.non_wasteful.to_string()),
            ("ue".to_string(), self.ue.0.to_string()),
            ("ee".to_string(), self.ee.0.to_string()),
        ];
        if let Some(q) = &self.queries {
            rows.push(("queries".into(), q.total.to_string()));
            rows.push(("eval_queries".into(), q.eval.to_string()));
            rows.push(("cut_queries".into(), q.cut.to_string()));
        }
        if let Some(e) = &self.equilibrium {
            rows.push(("equilibrium".into(), e.is_equilibrium.to_string()));
            if let Some(v) = &e.violation {
                rows.push(("violation".into(), v.kind.to_string()));
            }
        }
        if let Some(o) = &self.optimum {
            rows.push((format!("optimum_{}", o.objective), o.value.0.to_string()));
        }
        rows
    }
}

fn portion_text(pairs: &[[Exact; 2]]) -> String {
    if pairs.is_empty() {
        return "∅".to_string();
    }
    pairs.iter().map(|[lo, hi]| format!("[{}, {}]", lo.0, hi.0)).collect::<Vec<_>>().join(" ∪ ")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{one, rat, zero};
    use crate::valuation::PieceSpec;

    fn sample() -> RunReport {
        let vals = vec![
            Valuation::normalize(vec![PieceSpec::uniform(zero(), one())]).unwrap(),
            Valuation::normalize(vec![PieceSpec::uniform(rat(1, 2), one())]).unwrap(),
        ];
        let alloc = Allocation::new(vec![
            IntervalSet::span(zero(), rat(1, 2)),
            IntervalSet::span(rat(1, 2), one()),
        ])
        .unwrap();
        RunReport::audit("audit", &["x".into(), "y".into()], &vals, &alloc).unwrap()
    }

    #[test]
    fn criteria_and_numbers() {
        let r = sample();
        assert!(r.criteria.proportional && r.criteria.envy_free && !r.criteria.equitable);
        assert_eq!(r.ue.0, rat(3, 2));
        assert_eq!(r.flag("envy-free"), Some(true));
        assert_eq!(r.flag("equilibrium"), None);
    }

    #[test]
    fn renderings() {
        let r = sample();
        let json = r.to_json();
        assert!(json.contains("\"ue\": \"3/2\""));
        assert!(!json.contains("queries"));
        let csv = r.to_csv();
        assert!(csv.starts_with("agent,portion,A_1,A_2\nx,[0; 1/2],1/2,1/2\n"));
        assert!(csv.contains("envy_free,true"));
        let table = r.to_table();
        assert!(table.contains("[1/2, 1]"));
        assert!(table.contains("ee: 1/2"));
    }
}
