use std::fmt;
use std::str::FromStr;

use crate::allocation::Allocation;
use crate::error::{CakeError, Result};
use crate::interval::IntervalSet;
use crate::rational::{int, one, zero, Rational};
use crate::valuation::Valuation;

use super::segment::SegmentRateMatrix;
use super::simplex::{solve, solve_traced, ConstraintKind, LpProblem, LpSolution, LpStatus};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FairnessConstraint {
    None,
    Proportional,
    EnvyFree,
    Equitable,
}

impl fmt::Display for FairnessConstraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FairnessConstraint::None => "none",
            FairnessConstraint::Proportional => "proportional",
            FairnessConstraint::EnvyFree => "envy-free",
            FairnessConstraint::Equitable => "equitable",
        })
    }
}

impl FromStr for FairnessConstraint {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "none" => Ok(FairnessConstraint::None),
            "proportional" => Ok(FairnessConstraint::Proportional),
            "envy-free" | "envy_free" => Ok(FairnessConstraint::EnvyFree),
            "equitable" => Ok(FairnessConstraint::Equitable),
            other => Err(format!("unknown criterion `{other}`")),
        }
    }
}

/// An optimal value together with an allocation that attains it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Optimum {
    pub value: Rational,
    pub allocation: Allocation,
    pub pivots: usize,
    /// Tableau trace, when requested.
    pub trace: Option<String>,
}

/// Variables `x[i][s]`: length of segment `s` given to agent `i`.
struct SegmentLp {
    rates: SegmentRateMatrix,
    problem: LpProblem,
}

impl SegmentLp {
    fn new(valuations: &[Valuation], extra_vars: usize) -> Result<Self> {
        if valuations.is_empty() {
            return Err(CakeError::DimensionMismatch { expected: 1, found: 0 });
        }
        let rates = SegmentRateMatrix::new(valuations)?;
        let segs = rates.segmentation.len();
        let mut problem = LpProblem::new(valuations.len() * segs + extra_vars);
        for s in 0..segs {
            let row = (0..valuations.len()).map(|i| (i * segs + s, one())).collect();
            problem.add(row, ConstraintKind::Le, rates.segmentation.length(s));
        }
        Ok(SegmentLp { rates, problem })
    }

    fn var(&self, agent: usize, segment: usize) -> usize {
        agent * self.rates.segmentation.len() + segment
    }

    /// Coefficients of `u_viewer(A_owner)`.
    fn utility(&self, viewer: usize, owner: usize) -> Vec<(usize, Rational)> {
        (0..self.rates.segmentation.len())
            .filter(|&s| self.rates.rates[viewer][s] != zero())
            .map(|s| (self.var(owner, s), self.rates.rates[viewer][s].clone()))
            .collect()
    }

    fn solve(&self, verbose: bool) -> (LpSolution, Option<String>) {
        if verbose {
            let mut trace = String::new();
            let sol = solve_traced(&self.problem, &mut trace);
            (sol, Some(trace))
        } else {
            (solve(&self.problem), None)
        }
    }

    /// Lays each agent's share of a segment out left to right in index order.
    fn materialize(&self, x: &[Rational]) -> Result<Allocation> {
        let n = self.rates.n();
        let seg = &self.rates.segmentation;
        let mut portions = vec![IntervalSet::empty(); n];
        for s in 0..seg.len() {
            let mut lo = seg.segment(s).0.clone();
            for (i, portion) in portions.iter_mut().enumerate() {
                let amount = &x[self.var(i, s)];
                if *amount > zero() {
                    let hi = &lo + amount;
                    *portion = portion.union(&IntervalSet::span(lo.clone(), hi.clone()));
                    lo = hi;
                }
            }
        }
        Allocation::new(portions)
    }

    fn finish(&self, verbose: bool) -> Result<Optimum> {
        let (sol, trace) = self.solve(verbose);
        match sol.status {
            LpStatus::Optimal => Ok(Optimum {
                value: sol.value.clone(),
                allocation: self.materialize(&sol.x)?,
                pivots: sol.pivots,
                trace,
            }),
            LpStatus::Infeasible => Err(CakeError::Infeasible("no allocation meets the constraints".into())),
            LpStatus::Unbounded => Err(CakeError::Lp("objective unbounded".into())),
        }
    }
}

/// Largest utilitarian efficiency among allocations meeting `constraint`.
pub fn max_ue(valuations: &[Valuation], constraint: FairnessConstraint) -> Result<Optimum> {
    max_ue_with(valuations, constraint, false)
}

pub fn max_ue_with(valuations: &[Valuation], constraint: FairnessConstraint, verbose: bool) -> Result<Optimum> {
    let n = valuations.len();
    let mut lp = SegmentLp::new(valuations, 0)?;
    for i in 0..n {
        for (v, c) in lp.utility(i, i) {
            lp.problem.objective[v] += c;
        }
    }
    match constraint {
        FairnessConstraint::None => {}
        FairnessConstraint::Proportional => {
            for i in 0..n {
                let row = lp.utility(i, i);
                lp.problem.add(row, ConstraintKind::Ge, Rational::new(1.into(), (n as i64).into()));
            }
        }
        FairnessConstraint::EnvyFree => {
            for i in 0..n {
                for j in (0..n).filter(|&j| j != i) {
                    let mut row = lp.utility(i, i);
                    row.extend(lp.utility(i, j).into_iter().map(|(v, c)| (v, -c)));
                    lp.problem.add(row, ConstraintKind::Ge, zero());
                }
            }
        }
        FairnessConstraint::Equitable => {
            for i in 1..n {
                let mut row = lp.utility(i, i);
                row.extend(lp.utility(0, 0).into_iter().map(|(v, c)| (v, -c)));
                lp.problem.add(row, ConstraintKind::Eq, zero());
            }
        }
    }
    lp.finish(verbose)
}

/// Largest egalitarian efficiency, `max t` with `u_i(A_i) ≥ t` for all `i`.
pub fn max_ee(valuations: &[Valuation]) -> Result<Optimum> {
    max_ee_with(valuations, false)
}

pub fn max_ee_with(valuations: &[Valuation], verbose: bool) -> Result<Optimum> {
    let mut lp = SegmentLp::new(valuations, 1)?;
    let t = lp.problem.num_vars - 1;
    lp.problem.objective[t] = one();
    for i in 0..valuations.len() {
        let mut row = lp.utility(i, i);
        row.push((t, int(-1)));
        lp.problem.add(row, ConstraintKind::Ge, zero());
    }
    lp.finish(verbose)
}

/// True when no allocation gives every agent at least as much and the group
/// strictly more.
pub fn pareto_oracle(valuations: &[Valuation], allocation: &Allocation) -> Result<bool> {
    if allocation.n() != valuations.len() {
        return Err(CakeError::DimensionMismatch { expected: valuations.len(), found: allocation.n() });
    }
    let mut lp = SegmentLp::new(valuations, 0)?;
    let mut current = zero();
    for (i, v) in valuations.iter().enumerate() {
        for (var, c) in lp.utility(i, i) {
            lp.problem.objective[var] += c;
        }
        let u = v.eval(allocation.portion(i));
        lp.problem.add(lp.utility(i, i), ConstraintKind::Ge, u.clone());
        current += u;
    }
    let (sol, _) = lp.solve(false);
    match sol.status {
        LpStatus::Optimal => Ok(sol.value == current),
        _ => Err(CakeError::Lp(format!("pareto check ended {:?}", sol.status))),
    }
}

/// `max_ue(None) / max_ue(constraint)`.
pub fn price_of(valuations: &[Valuation], constraint: FairnessConstraint) -> Result<Rational> {
    let best = max_ue(valuations, FairnessConstraint::None)?.value;
    let fair = max_ue(valuations, constraint)?.value;
    if fair == zero() {
        return Err(CakeError::Lp("constrained optimum is zero".into()));
    }
    Ok(best / fair)
}
