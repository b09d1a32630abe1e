//! Exact linear programming over segment lengths: utilitarian and egalitarian
//! optima, fairness-constrained optima, Pareto checks and prices of fairness.

mod optimal;
mod segment;
mod simplex;

pub use optimal::{max_ee, max_ee_with, max_ue, max_ue_with, pareto_oracle, price_of, FairnessConstraint, Optimum};
pub use segment::{segment, utilitarian_optimal, SegmentRateMatrix, Segmentation};
pub use simplex::{solve, solve_traced, Constraint, ConstraintKind, LpProblem, LpSolution, LpStatus};
