use std::fmt::Write as _;

use faircake::equilibrium::{is_equilibrium, reduce_profile, ReducedProfile};
use faircake::lp::{max_ee_with, max_ue, max_ue_with, price_of, FairnessConstraint};
use faircake::mechanism::{query_counts, run_mechanism, MechanismKind};
use faircake::report::RunReport;
use faircake::scenario::{Exact, Scenario};
use faircake::uniform::Profile;
use faircake::CakeError;
use serde::Serialize;

use crate::{Expectations, Format, Mechanism, Objective};

#[derive(Debug)]
pub enum CliError {
    Input(String),
}

impl From<CakeError> for CliError {
    fn from(e: CakeError) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<faircake::scenario::ScenarioError> for CliError {
    fn from(e: faircake::scenario::ScenarioError) -> Self {
        CliError::Input(e.to_string())
    }
}

/// What to print, and which `--expect-*` assertions did not hold.
pub struct Output {
    pub text: String,
    pub failed: Vec<&'static str>,
}

fn render(report: &RunReport, format: Option<Format>) -> String {
    match format.unwrap_or(Format::Json) {
        Format::Json => report.to_json() + "\n",
        Format::Csv => report.to_csv(),
        Format::Table => report.to_table(),
    }
}

fn finish(report: &RunReport, format: Option<Format>, expect: &Expectations) -> Result<Output, CliError> {
    let mut failed = Vec::new();
    for flag in expect.names() {
        match report.flag(flag) {
            Some(true) => {}
            Some(false) => failed.push(flag),
            None => return Err(CliError::Input(format!("--expect-{flag} does not apply to this command"))),
        }
    }
    Ok(Output { text: render(report, format), failed })
}

pub fn run(
    text: &str,
    mechanism: Mechanism,
    emit_scenario: bool,
    format: Option<Format>,
    expect: &Expectations,
) -> Result<Output, CliError> {
    let mut scenario = Scenario::parse(text)?;
    let kind = mechanism.kind();
    if kind == MechanismKind::Procaccia || (kind.protocol().is_none() && scenario.profile.is_none()) {
        // names the offending agent by id
        scenario.uniform_preferences()?;
    }
    let out = run_mechanism(kind, &scenario.valuations, scenario.profile.as_ref())?;
    if emit_scenario {
        scenario.profile = Some(Profile::new(out.allocation.portions().to_vec()));
        scenario.allocation = Some(out.allocation);
        return Ok(Output { text: scenario.to_json() + "\n", failed: Vec::new() });
    }
    let mut report =
        RunReport::audit("run", &scenario.ids, &scenario.valuations, &out.allocation)?.with_mechanism(kind.name());
    if let Some(t) = &out.transcript {
        report = report.with_queries(t);
    }
    finish(&report, format, expect)
}

pub fn audit(text: &str, format: Option<Format>, expect: &Expectations) -> Result<Output, CliError> {
    let scenario = Scenario::parse(text)?;
    let allocation = scenario
        .allocation
        .as_ref()
        .ok_or_else(|| CliError::Input("scenario has no `allocation` to audit".into()))?;
    finish(&RunReport::audit("audit", &scenario.ids, &scenario.valuations, allocation)?, format, expect)
}

pub fn equilibrium(text: &str, reduce: bool, format: Option<Format>, expect: &Expectations) -> Result<Output, CliError> {
    let scenario = Scenario::parse(text)?;
    let prefs = scenario.uniform_preferences()?;
    let profile = scenario.profile.clone().ok_or_else(|| CliError::Input("scenario has no `profile`".into()))?;
    let reduced = if reduce {
        reduce_profile(&profile)
    } else {
        ReducedProfile::certify(profile)
            .map_err(|e| CliError::Input(format!("{e}; pass --reduce to reduce it first")))?
    };
    let verdict = is_equilibrium(&prefs, &reduced)?;
    let report = RunReport::audit("equilibrium", &scenario.ids, &scenario.valuations, &reduced.allocation())?
        .with_equilibrium(&verdict);
    finish(&report, format, expect)
}

pub fn optimal(
    text: &str,
    objective: Objective,
    criterion: FairnessConstraint,
    verbose_lp: bool,
    format: Option<Format>,
    expect: &Expectations,
) -> Result<Output, CliError> {
    let scenario = Scenario::parse(text)?;
    let (label, optimum) = match objective {
        Objective::Utilitarian => {
            let label = match criterion {
                FairnessConstraint::None => "utilitarian".to_string(),
                c => format!("utilitarian+{c}"),
            };
            (label, max_ue_with(&scenario.valuations, criterion, verbose_lp)?)
        }
        Objective::Egalitarian => {
            if criterion != FairnessConstraint::None {
                return Err(CliError::Input("--criterion applies to the utilitarian objective only".into()));
            }
            ("egalitarian".to_string(), max_ee_with(&scenario.valuations, verbose_lp)?)
        }
    };
    if let Some(trace) = &optimum.trace {
        eprint!("{trace}");
    }
    let report = RunReport::audit("optimal", &scenario.ids, &scenario.valuations, &optimum.allocation)?
        .with_optimum(&label, optimum.value.clone(), optimum.pivots);
    finish(&report, format, expect)
}

#[derive(Serialize)]
struct PriceRow {
    criterion: String,
    unconstrained_ue: Exact,
    constrained_ue: Exact,
    price: Exact,
}

pub fn pof(text: &str, criterion: FairnessConstraint, format: Option<Format>) -> Result<Output, CliError> {
    let scenario = Scenario::parse(text)?;
    let vals = &scenario.valuations;
    let row = PriceRow {
        criterion: criterion.to_string(),
        unconstrained_ue: Exact(max_ue(vals, FairnessConstraint::None)?.value),
        constrained_ue: Exact(max_ue(vals, criterion)?.value),
        price: Exact(price_of(vals, criterion)?),
    };
    let text = match format.unwrap_or(Format::Csv) {
        Format::Json => serde_json::to_string_pretty(&row).expect("row serializes") + "\n",
        Format::Csv => format!(
            "criterion,unconstrained_ue,constrained_ue,price\n{},{},{},{}\n",
            row.criterion, row.unconstrained_ue.0, row.constrained_ue.0, row.price.0
        ),
        Format::Table => format!(
            "criterion: {}\nunconstrained_ue: {}\nconstrained_ue: {}\nprice: {}\n",
            row.criterion, row.unconstrained_ue.0, row.constrained_ue.0, row.price.0
        ),
    };
    Ok(Output { text, failed: Vec::new() })
}

#[derive(Serialize)]
struct BenchRow {
    n: usize,
    total: usize,
    eval: usize,
    cut: usize,
}

pub fn bench(mechanism: Mechanism, (lo, hi): (usize, usize), seed: u64, format: Option<Format>) -> Result<Output, CliError> {
    let rows: Vec<BenchRow> = query_counts(mechanism.kind(), lo, hi, seed)?
        .into_iter()
        .map(|q| BenchRow { n: q.n, total: q.total, eval: q.eval, cut: q.cut })
        .collect();
    let mut text = String::new();
    match format.unwrap_or(Format::Csv) {
        Format::Json => text = serde_json::to_string_pretty(&rows).expect("rows serialize") + "\n",
        Format::Csv => {
            text.push_str("n,total,eval,cut\n");
            for r in &rows {
                let _ = writeln!(text, "{},{},{},{}", r.n, r.total, r.eval, r.cut);
            }
        }
        Format::Table => {
            let _ = writeln!(text, "{:>5} {:>8} {:>8} {:>8}", "n", "total", "eval", "cut");
            for r in &rows {
                let _ = writeln!(text, "{:>5} {:>8} {:>8} {:>8}", r.n, r.total, r.eval, r.cut);
            }
        }
    }
    Ok(Output { text, failed: Vec::new() })
}
