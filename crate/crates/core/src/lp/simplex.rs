//! Exact two-phase tableau simplex with Bland's rule.

use std::fmt::Write as _;

use num_traits::Zero;

use crate::rational::{int, one, zero, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ConstraintKind {
    Le,
    Ge,
    Eq,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Constraint {
    /// Sparse `(variable, coefficient)` pairs.
    pub coeffs: Vec<(usize, Rational)>,
    pub kind: ConstraintKind,
    pub rhs: Rational,
}

/// Maximise `objective · x` subject to the constraints and `x ≥ 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LpProblem {
    pub num_vars: usize,
    pub objective: Vec<Rational>,
    pub constraints: Vec<Constraint>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LpSolution {
    pub status: LpStatus,
    /// Objective value at `x`; zero unless optimal.
    pub value: Rational,
    pub x: Vec<Rational>,
    pub pivots: usize,
}

impl LpProblem {
    pub fn new(num_vars: usize) -> Self {
        LpProblem { num_vars, objective: vec![zero(); num_vars], constraints: Vec::new() }
    }

    pub fn add(&mut self, coeffs: Vec<(usize, Rational)>, kind: ConstraintKind, rhs: Rational) {
        self.constraints.push(Constraint { coeffs, kind, rhs });
    }

    /// The dual, again as a maximisation over non-negative variables; its
    /// optimum is minus the primal optimum.
    ///
    /// A `≤` row gives one dual variable `y ≥ 0`, a `≥` row gives `y = -w`,
    /// and an equality gives `y = w⁺ - w⁻`.
    pub fn dual(&self) -> LpProblem {
        let mut columns: Vec<(usize, Rational)> = Vec::new();
        for (r, c) in self.constraints.iter().enumerate() {
            match c.kind {
                ConstraintKind::Le => columns.push((r, one())),
                ConstraintKind::Ge => columns.push((r, int(-1))),
                ConstraintKind::Eq => {
                    columns.push((r, one()));
                    columns.push((r, int(-1)));
                }
            }
        }
        let mut dual = LpProblem::new(columns.len());
        for (k, (r, sign)) in columns.iter().enumerate() {
            dual.objective[k] = -(&self.constraints[*r].rhs * sign);
        }
        let mut rows: Vec<Vec<(usize, Rational)>> = vec![Vec::new(); self.num_vars];
        for (k, (r, sign)) in columns.iter().enumerate() {
            for (j, a) in &self.constraints[*r].coeffs {
                rows[*j].push((k, a * sign));
            }
        }
        for (j, row) in rows.into_iter().enumerate() {
            dual.add(row, ConstraintKind::Ge, self.objective[j].clone());
        }
        dual
    }

    /// Checks `x` against every constraint and the sign restrictions.
    pub fn is_feasible(&self, x: &[Rational]) -> bool {
        x.len() == self.num_vars
            && x.iter().all(|v| *v >= zero())
            && self.constraints.iter().all(|c| {
                let lhs = c.coeffs.iter().fold(zero(), |acc, (j, a)| acc + a * &x[*j]);
                match c.kind {
                    ConstraintKind::Le => lhs <= c.rhs,
                    ConstraintKind::Ge => lhs >= c.rhs,
                    ConstraintKind::Eq => lhs == c.rhs,
                }
            })
    }

    pub fn objective_at(&self, x: &[Rational]) -> Rational {
        self.objective.iter().zip(x).fold(zero(), |acc, (c, v)| acc + c * v)
    }
}

struct Tableau {
    /// `rows[r]` holds the coefficients followed by the right-hand side.
    rows: Vec<Vec<Rational>>,
    basis: Vec<usize>,
    /// Reduced costs; `cost[cols]` is minus the current objective value.
    cost: Vec<Rational>,
    cols: usize,
    pivots: usize,
}

enum Outcome {
    Optimal,
    Unbounded,
}

impl Tableau {
    fn set_objective(&mut self, objective: &[Rational]) {
        let mut cost = vec![zero(); self.cols + 1];
        for (j, c) in objective.iter().enumerate() {
            cost[j] = c.clone();
        }
        for (r, &b) in self.basis.iter().enumerate() {
            if !cost[b].is_zero() {
                let factor = cost[b].clone();
                for (j, v) in self.rows[r].iter().enumerate() {
                    if !v.is_zero() {
                        cost[j] -= &factor * v;
                    }
                }
            }
        }
        self.cost = cost;
    }

    fn pivot(&mut self, row: usize, col: usize) {
        self.pivots += 1;
        let p = self.rows[row][col].clone();
        for v in self.rows[row].iter_mut() {
            if !v.is_zero() {
                *v /= &p;
            }
        }
        let nonzero: Vec<usize> = (0..=self.cols).filter(|&j| !self.rows[row][j].is_zero()).collect();
        let pivot_row = self.rows[row].clone();
        for (r, other) in self.rows.iter_mut().enumerate() {
            if r == row || other[col].is_zero() {
                continue;
            }
            let factor = other[col].clone();
            for &j in &nonzero {
                other[j] -= &factor * &pivot_row[j];
            }
        }
        if !self.cost[col].is_zero() {
            let factor = self.cost[col].clone();
            for &j in &nonzero {
                self.cost[j] -= &factor * &pivot_row[j];
            }
        }
        self.basis[row] = col;
    }

    /// Bland's rule: lowest-index improving column, lowest-index basic
    /// variable among tied ratios.
    fn run(&mut self, allowed: usize, trace: &mut Option<&mut String>) -> Outcome {
        loop {
            let Some(col) = (0..allowed).find(|&j| self.cost[j] > zero()) else {
                return Outcome::Optimal;
            };
            let mut leave: Option<(usize, Rational)> = None;
            for (r, row) in self.rows.iter().enumerate() {
                if row[col] > zero() {
                    let ratio = &row[self.cols] / &row[col];
                    let better = match &leave {
                        None => true,
                        Some((lr, lv)) => ratio < *lv || (ratio == *lv && self.basis[r] < self.basis[*lr]),
                    };
                    if better {
                        leave = Some((r, ratio));
                    }
                }
            }
            let Some((row, _)) = leave else {
                return Outcome::Unbounded;
            };
            if let Some(out) = trace.as_deref_mut() {
                let _ = writeln!(out, "pivot {}: enter x{col}, leave x{} (row {row})", self.pivots + 1, self.basis[row]);
            }
            self.pivot(row, col);
            if let Some(out) = trace.as_deref_mut() {
                self.dump(out);
            }
        }
    }

    fn dump(&self, out: &mut String) {
        for (r, row) in self.rows.iter().enumerate() {
            let cells: Vec<String> = row.iter().map(|v| v.to_string()).collect();
            let _ = writeln!(out, "  x{:<4}| {}", self.basis[r], cells.join(" "));
        }
        let cells: Vec<String> = self.cost.iter().map(|v| v.to_string()).collect();
        let _ = writeln!(out, "  cost | {}", cells.join(" "));
    }
}

pub fn solve(problem: &LpProblem) -> LpSolution {
    solve_inner(problem, None)
}

/// Solves and appends a plain-text tableau trace to `trace`.
pub fn solve_traced(problem: &LpProblem, trace: &mut String) -> LpSolution {
    solve_inner(problem, Some(trace))
}

fn solve_inner(problem: &LpProblem, mut trace: Option<&mut String>) -> LpSolution {
    let n = problem.num_vars;
    let m = problem.constraints.len();
    // Normalise to non-negative right-hand sides.
    let mut rows: Vec<(Vec<(usize, Rational)>, ConstraintKind, Rational)> = Vec::with_capacity(m);
    for c in &problem.constraints {
        if c.rhs < zero() {
            let kind = match c.kind {
                ConstraintKind::Le => ConstraintKind::Ge,
                ConstraintKind::Ge => ConstraintKind::Le,
                ConstraintKind::Eq => ConstraintKind::Eq,
            };
            rows.push((c.coeffs.iter().map(|(j, a)| (*j, -a)).collect(), kind, -&c.rhs));
        } else {
            rows.push((c.coeffs.clone(), c.kind, c.rhs.clone()));
        }
    }
    let slacks = rows.iter().filter(|r| r.1 != ConstraintKind::Eq).count();
    let artificials = rows.iter().filter(|r| r.1 != ConstraintKind::Le).count();
    let cols = n + slacks + artificials;
    let mut tab = Tableau { rows: Vec::with_capacity(m), basis: Vec::with_capacity(m), cost: Vec::new(), cols, pivots: 0 };
    let (mut next_slack, mut next_art) = (n, n + slacks);
    for (coeffs, kind, rhs) in rows {
        let mut row = vec![zero(); cols + 1];
        for (j, a) in coeffs {
            row[j] += a;
        }
        row[cols] = rhs;
        match kind {
            ConstraintKind::Le => {
                row[next_slack] = one();
                tab.basis.push(next_slack);
                next_slack += 1;
            }
            ConstraintKind::Ge => {
                row[next_slack] = int(-1);
                next_slack += 1;
                row[next_art] = one();
                tab.basis.push(next_art);
                next_art += 1;
            }
            ConstraintKind::Eq => {
                row[next_art] = one();
                tab.basis.push(next_art);
                next_art += 1;
            }
        }
        tab.rows.push(row);
    }

    if artificials > 0 {
        if let Some(out) = trace.as_deref_mut() {
            let _ = writeln!(out, "phase 1: {m} rows, {cols} columns, {artificials} artificial");
        }
        let mut phase1 = vec![zero(); cols];
        for v in phase1.iter_mut().skip(n + slacks) {
            *v = int(-1);
        }
        tab.set_objective(&phase1);
        tab.run(cols, &mut trace);
        if tab.cost[cols] != zero() {
            return LpSolution { status: LpStatus::Infeasible, value: zero(), x: vec![zero(); n], pivots: tab.pivots };
        }
        // Drive remaining artificials (all at zero) out of the basis.
        let mut r = 0;
        while r < tab.rows.len() {
            if tab.basis[r] >= n + slacks {
                match (0..n + slacks).find(|&j| !tab.rows[r][j].is_zero()) {
                    Some(col) => {
                        tab.pivot(r, col);
                        r += 1;
                    }
                    None => {
                        tab.rows.remove(r);
                        tab.basis.remove(r);
                    }
                }
            } else {
                r += 1;
            }
        }
    }

    if let Some(out) = trace.as_deref_mut() {
        let _ = writeln!(out, "phase 2: {} rows", tab.rows.len());
    }
    let mut objective = problem.objective.clone();
    objective.resize(cols, zero());
    tab.set_objective(&objective);
    let outcome = tab.run(n + slacks, &mut trace);
    let mut x = vec![zero(); n];
    for (r, &b) in tab.basis.iter().enumerate() {
        if b < n {
            x[b] = tab.rows[r][cols].clone();
        }
    }
    match outcome {
        Outcome::Unbounded => LpSolution { status: LpStatus::Unbounded, value: zero(), x, pivots: tab.pivots },
        Outcome::Optimal => {
            let value = problem.objective_at(&x);
            if let Some(out) = trace.as_deref_mut() {
                let _ = writeln!(out, "optimal value {value} after {} pivots", tab.pivots);
            }
            LpSolution { status: LpStatus::Optimal, value, x, pivots: tab.pivots }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    fn row(pairs: &[(usize, i64)]) -> Vec<(usize, Rational)> {
        pairs.iter().map(|&(j, a)| (j, int(a))).collect()
    }

    #[test]
    fn single_bound() {
        let mut lp = LpProblem::new(1);
        lp.objective[0] = int(1);
        lp.add(row(&[(0, 1)]), ConstraintKind::Le, rat(3, 7));
        let s = solve(&lp);
        assert_eq!(s.status, LpStatus::Optimal);
        assert_eq!(s.value, rat(3, 7));
    }

    #[test]
    fn textbook_problem_and_its_dual() {
        // max 3x + 5y, x ≤ 4, 2y ≤ 12, 3x + 2y ≤ 18 → 36 at (2, 6)
        let mut lp = LpProblem::new(2);
        lp.objective = vec![int(3), int(5)];
        lp.add(row(&[(0, 1)]), ConstraintKind::Le, int(4));
        lp.add(row(&[(1, 2)]), ConstraintKind::Le, int(12));
        lp.add(row(&[(0, 3), (1, 2)]), ConstraintKind::Le, int(18));
        let s = solve(&lp);
        assert_eq!(s.value, int(36));
        assert_eq!(s.x, vec![int(2), int(6)]);
        let d = solve(&lp.dual());
        assert_eq!(d.value, int(-36));
    }

    #[test]
    fn mixed_constraints() {
        // max x + 2y, x + y = 1, x ≥ 1/3, y ≥ 1/4
        let mut lp = LpProblem::new(2);
        lp.objective = vec![int(1), int(2)];
        lp.add(row(&[(0, 1), (1, 1)]), ConstraintKind::Eq, int(1));
        lp.add(row(&[(0, 1)]), ConstraintKind::Ge, rat(1, 3));
        lp.add(row(&[(1, 1)]), ConstraintKind::Ge, rat(1, 4));
        let s = solve(&lp);
        assert_eq!(s.value, rat(5, 3));
        assert!(lp.is_feasible(&s.x));
        assert_eq!(solve(&lp.dual()).value, rat(-5, 3));
    }

    #[test]
    fn infeasible_and_unbounded() {
        let mut lp = LpProblem::new(1);
        lp.objective[0] = int(1);
        lp.add(row(&[(0, 1)]), ConstraintKind::Le, int(1));
        lp.add(row(&[(0, 1)]), ConstraintKind::Ge, int(2));
        assert_eq!(solve(&lp).status, LpStatus::Infeasible);
        let mut lp = LpProblem::new(2);
        lp.objective = vec![int(1), int(0)];
        lp.add(row(&[(0, 1), (1, -1)]), ConstraintKind::Le, int(1));
        assert_eq!(solve(&lp).status, LpStatus::Unbounded);
    }

    #[test]
    fn degenerate_cycling_instance_terminates() {
        // Beale's example, which cycles under the largest-coefficient rule.
        let mut lp = LpProblem::new(4);
        lp.objective = vec![rat(3, 4), int(-150), rat(1, 50), int(-6)];
        lp.add(vec![(0, rat(1, 4)), (1, int(-60)), (2, rat(-1, 25)), (3, int(9))], ConstraintKind::Le, int(0));
        lp.add(vec![(0, rat(1, 2)), (1, int(-90)), (2, rat(-1, 50)), (3, int(3))], ConstraintKind::Le, int(0));
        lp.add(row(&[(2, 1)]), ConstraintKind::Le, int(1));
        let s = solve(&lp);
        assert_eq!(s.status, LpStatus::Optimal);
        assert_eq!(s.value, rat(1, 20));
        assert!(s.pivots < 50);
    }

    #[test]
    fn redundant_equalities() {
        let mut lp = LpProblem::new(2);
        lp.objective = vec![int(1), int(1)];
        lp.add(row(&[(0, 1), (1, 1)]), ConstraintKind::Eq, int(2));
        lp.add(row(&[(0, 2), (1, 2)]), ConstraintKind::Eq, int(4));
        let s = solve(&lp);
        assert_eq!(s.status, LpStatus::Optimal);
        assert_eq!(s.value, int(2));
    }

    #[test]
    fn trace_mentions_pivots() {
        let mut lp = LpProblem::new(1);
        lp.objective[0] = int(1);
        lp.add(row(&[(0, 1)]), ConstraintKind::Le, int(1));
        let mut out = String::new();
        solve_traced(&lp, &mut out);
        assert!(out.contains("pivot 1"));
        assert!(out.contains("optimal value 1"));
    }
}
