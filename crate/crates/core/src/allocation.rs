//! Allocations and the equity/efficiency criteria used to audit them.
//!
//! All comparisons are exact rational comparisons. The predicates work on an
//! [`EquityTable`] so the integration happens once per audit.

use std::fmt;


use crate::error::{CakeError, Result};
use crate::interval::{union_all, IntervalSet};
use crate::rational::{int, one, zero, Rational};
use crate::valuation::Valuation;

/// One portion per agent; portions overlap at most in boundary points.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Allocation {
    portions: Vec<IntervalSet>,
}

impl Allocation {
    pub fn new(portions: Vec<IntervalSet>) -> Result<Self> {
        for i in 0..portions.len() {
            for j in i + 1..portions.len() {
                if !portions[i].is_disjoint(&portions[j]) {
                    return Err(CakeError::OverlappingPortions { first: i, second: j });
                }
            }
        }
        Ok(Allocation { portions })
    }

    pub fn empty(n: usize) -> Self {
        Allocation { portions: vec![IntervalSet::empty(); n] }
    }

    pub fn portions(&self) -> &[IntervalSet] {
        &self.portions
    }

    pub fn portion(&self, agent: usize) -> &IntervalSet {
        &self.portions[agent]
    }

    pub fn n(&self) -> usize {
        self.portions.len()
    }

    pub fn allocated(&self) -> IntervalSet {
        union_all(&self.portions)
    }

    pub fn covers_cake(&self) -> bool {
        self.allocated() == IntervalSet::full()
    }

    pub fn into_portions(self) -> Vec<IntervalSet> {
        self.portions
    }
}

/// `entries[i][j]` is agent `i`'s value for agent `j`'s portion.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EquityTable {
    entries: Vec<Vec<Rational>>,
}

pub fn equity_table(valuations: &[Valuation], allocation: &Allocation) -> Result<EquityTable> {
    if valuations.len() != allocation.n() {
        return Err(CakeError::DimensionMismatch { expected: valuations.len(), found: allocation.n() });
    }
    let entries = valuations
        .iter()
        .map(|v| allocation.portions().iter().map(|p| v.eval(p)).collect())
        .collect();
    Ok(EquityTable { entries })
}

impl EquityTable {
    pub fn from_entries(entries: Vec<Vec<Rational>>) -> Result<Self> {
        let n = entries.len();
        if let Some(row) = entries.iter().find(|r| r.len() != n) {
            return Err(CakeError::DimensionMismatch { expected: n, found: row.len() });
        }
        Ok(EquityTable { entries })
    }

    pub fn n(&self) -> usize {
        self.entries.len()
    }

    pub fn entry(&self, agent: usize, portion: usize) -> &Rational {
        &self.entries[agent][portion]
    }

    pub fn rows(&self) -> &[Vec<Rational>] {
        &self.entries
    }

    pub fn diagonal(&self) -> Vec<Rational> {
        (0..self.n()).map(|i| self.entries[i][i].clone()).collect()
    }

    pub fn is_proportional(&self) -> bool {
        let share = one() / int(self.n().max(1) as i64);
        (0..self.n()).all(|i| self.entries[i][i] >= share)
    }

    pub fn is_envy_free(&self) -> bool {
        self.envy_pairs().is_empty()
    }

    /// `(i, j)` pairs where agent `i` strictly prefers `j`'s portion.
    pub fn envy_pairs(&self) -> Vec<(usize, usize)> {
        let mut pairs = Vec::new();
        for (i, row) in self.entries.iter().enumerate() {
            for (j, value) in row.iter().enumerate() {
                if *value > row[i] {
                    pairs.push((i, j));
                }
            }
        }
        pairs
    }

    pub fn is_equitable(&self) -> bool {
        let diagonal = self.diagonal();
        diagonal.windows(2).all(|w| w[0] == w[1])
    }

    pub fn utilitarian_efficiency(&self) -> Rational {
        self.diagonal().into_iter().fold(zero(), |acc, u| acc + u)
    }

    /// Smallest diagonal entry (zero for an empty table).
    pub fn egalitarian_efficiency(&self) -> Rational {
        self.diagonal().into_iter().min().unwrap_or_else(zero)
    }
}

impl fmt::Display for EquityTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cells: Vec<Vec<String>> = self
            .entries
            .iter()
            .map(|row| row.iter().map(|v| v.to_string()).collect())
            .collect();
        let width = cells.iter().flatten().map(|c| c.len()).max().unwrap_or(1).max(4);
        write!(f, "{:>6} |", "")?;
        for j in 0..self.n() {
            write!(f, " {:>width$}", format!("A_{}", j + 1))?;
        }
        writeln!(f)?;
        writeln!(f, "{}", "-".repeat(8 + self.n() * (width + 1)))?;
        for (i, row) in cells.iter().enumerate() {
            write!(f, "{:>6} |", format!("u_{}", i + 1))?;
            for cell in row {
                write!(f, " {cell:>width$}")?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// No agent owns a positive-length region it has zero density on while some
/// other agent has positive density there.
pub fn is_non_wasteful(valuations: &[Valuation], allocation: &Allocation) -> Result<bool> {
    Ok(wasted_regions(valuations, allocation)?.is_empty())
}

/// `(owner, region)` pairs witnessing waste.
pub fn wasted_regions(valuations: &[Valuation], allocation: &Allocation) -> Result<Vec<(usize, IntervalSet)>> {
    if valuations.len() != allocation.n() {
        return Err(CakeError::DimensionMismatch { expected: valuations.len(), found: allocation.n() });
    }
    let mut out = Vec::new();
    for (i, portion) in allocation.portions().iter().enumerate() {
        let unvalued = portion.difference(&valuations[i].valued_set());
        let wanted_by_others = union_all(
            valuations
                .iter()
                .enumerate()
                .filter(|(j, _)| *j != i)
                .map(|(_, v)| v.valued_set())
                .collect::<Vec<_>>()
                .iter(),
        );
        let wasted = unvalued.intersect(&wanted_by_others);
        if !wasted.is_empty() {
            out.push((i, wasted));
        }
    }
    Ok(out)
}

/// Cake somebody values that no portion covers.
pub fn uncovered_valued_cake(valuations: &[Valuation], allocation: &Allocation) -> IntervalSet {
    let valued: Vec<IntervalSet> = valuations.iter().map(Valuation::valued_set).collect();
    union_all(&valued).difference(&allocation.allocated())
}

fn own_utilities(valuations: &[Valuation], allocation: &Allocation) -> Result<Vec<Rational>> {
    if valuations.len() != allocation.n() {
        return Err(CakeError::DimensionMismatch { expected: valuations.len(), found: allocation.n() });
    }
    Ok(valuations.iter().zip(allocation.portions()).map(|(v, p)| v.eval(p)).collect())
}

/// `a` is weakly better for everyone and strictly better for someone.
pub fn pareto_dominates(valuations: &[Valuation], a: &Allocation, b: &Allocation) -> Result<bool> {
    let ua = own_utilities(valuations, a)?;
    let ub = own_utilities(valuations, b)?;
    let weakly = ua.iter().zip(&ub).all(|(x, y)| x >= y);
    let strictly = ua.iter().zip(&ub).any(|(x, y)| x > y);
    Ok(weakly && strictly)
}

pub fn utilitarian_equivalent(valuations: &[Valuation], a: &Allocation, b: &Allocation) -> Result<bool> {
    Ok(own_utilities(valuations, a)? == own_utilities(valuations, b)?)
}

/// Sum of the agents' values for their own portions.
pub fn utilitarian_value(valuations: &[Valuation], allocation: &Allocation) -> Result<Rational> {
    Ok(own_utilities(valuations, allocation)?.into_iter().fold(zero(), |acc, u| acc + u))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{parse_rational, rat};

    fn q(s: &str) -> Rational {
        parse_rational(s).unwrap()
    }

    fn set(pairs: &[(&str, &str)]) -> IntervalSet {
        IntervalSet::from_pairs(pairs.iter().map(|(a, b)| (q(a), q(b)))).unwrap()
    }

    fn uniform(pairs: &[(&str, &str)]) -> Valuation {
        Valuation::uniform_on(&set(pairs)).unwrap()
    }

    fn table(rows: &[&[&str]]) -> EquityTable {
        EquityTable::from_entries(rows.iter().map(|r| r.iter().map(|s| q(s)).collect()).collect()).unwrap()
    }

    fn example_two() -> (Vec<Valuation>, Allocation) {
        let vals = vec![uniform(&[("0", "0.1")]), uniform(&[("0.4", "1")]), uniform(&[("0.4", "1")])];
        let alloc = Allocation::new(vec![
            set(&[("0", "0.1")]),
            set(&[("0.4", "0.8")]),
            set(&[("0.8", "1")]),
        ])
        .unwrap();
        (vals, alloc)
    }

    #[test]
    fn three_agent_table_is_proportional_but_not_envy_free() {
        let (vals, alloc) = example_two();
        let t = equity_table(&vals, &alloc).unwrap();
        assert_eq!(t, table(&[&["1", "0", "0"], &["0", "2/3", "1/3"], &["0", "2/3", "1/3"]]));
        assert_eq!(t.diagonal(), vec![one(), rat(2, 3), rat(1, 3)]);
        assert!(t.is_proportional());
        assert!(!t.is_envy_free());
        assert_eq!(t.envy_pairs(), vec![(2, 1)]);
        assert!(!t.is_equitable());
    }

    #[test]
    fn swapped_halves_are_equitable_only() {
        let vals = vec![uniform(&[("0", "0.6")]), uniform(&[("0.4", "1")])];
        let alloc = Allocation::new(vec![set(&[("0.5", "1")]), set(&[("0", "0.5")])]).unwrap();
        let t = equity_table(&vals, &alloc).unwrap();
        assert_eq!(t, table(&[&["1/6", "5/6"], &["5/6", "1/6"]]));
        assert!(t.is_equitable());
        assert!(!t.is_envy_free());
        assert!(!t.is_proportional());
    }

    #[test]
    fn throwing_the_cake_away_is_envy_free() {
        let (vals, _) = example_two();
        let t = equity_table(&vals, &Allocation::empty(3)).unwrap();
        assert!(t.rows().iter().flatten().all(|v| *v == zero()));
        assert!(t.is_envy_free());
        assert!(!t.is_proportional());
        assert!(t.is_equitable());
    }

    #[test]
    fn dimension_and_overlap_errors() {
        let (vals, _) = example_two();
        assert!(matches!(
            equity_table(&vals, &Allocation::empty(2)),
            Err(CakeError::DimensionMismatch { expected: 3, found: 2 })
        ));
        assert!(matches!(
            Allocation::new(vec![set(&[("0", "0.6")]), set(&[("0.5", "1")])]),
            Err(CakeError::OverlappingPortions { first: 0, second: 1 })
        ));
        // boundary points may be shared
        assert!(Allocation::new(vec![set(&[("0", "0.5")]), set(&[("0.5", "1")])]).is_ok());
    }

    #[test]
    fn waste_examples() {
        let both_full = vec![uniform(&[("0", "1")]), uniform(&[("0", "1")])];
        let greedy = Allocation::new(vec![IntervalSet::full(), IntervalSet::empty()]).unwrap();
        assert!(is_non_wasteful(&both_full, &greedy).unwrap());

        let narrow_first = vec![uniform(&[("0", "0.1")]), uniform(&[("0", "1")])];
        assert!(!is_non_wasteful(&narrow_first, &greedy).unwrap());
        assert_eq!(wasted_regions(&narrow_first, &greedy).unwrap(), vec![(0, set(&[("0.1", "1")]))]);
        assert_eq!(uncovered_valued_cake(&narrow_first, &greedy), IntervalSet::empty());
        assert_eq!(
            uncovered_valued_cake(&narrow_first, &Allocation::empty(2)),
            IntervalSet::full()
        );
    }

    #[test]
    fn efficiency_examples() {
        let vals = vec![uniform(&[("0", "0.5")]), uniform(&[("0.5", "1")]), uniform(&[("0", "1")])];
        let optimal = Allocation::new(vec![set(&[("0", "0.5")]), set(&[("0.5", "1")]), IntervalSet::empty()]).unwrap();
        let t = equity_table(&vals, &optimal).unwrap();
        assert_eq!(t.utilitarian_efficiency(), int(2));
        assert_eq!(t.egalitarian_efficiency(), zero());

        let fair = Allocation::new(vec![
            set(&[("0", "0.25")]),
            set(&[("0.75", "1")]),
            set(&[("0.25", "0.75")]),
        ])
        .unwrap();
        let t = equity_table(&vals, &fair).unwrap();
        assert_eq!(t.egalitarian_efficiency(), rat(1, 2));
        assert_eq!(t.utilitarian_efficiency(), rat(3, 2));
    }

    #[test]
    fn dominance_and_equivalence() {
        let vals = vec![uniform(&[("0", "0.5")]), uniform(&[("0.5", "1")])];
        let a = Allocation::new(vec![set(&[("0", "0.5")]), set(&[("0.5", "1")])]).unwrap();
        let b = Allocation::new(vec![set(&[("0", "0.5")]), IntervalSet::empty()]).unwrap();
        assert!(!pareto_dominates(&vals, &a, &a).unwrap());
        assert!(pareto_dominates(&vals, &a, &b).unwrap());
        assert!(!pareto_dominates(&vals, &b, &a).unwrap());
        assert!(utilitarian_equivalent(&vals, &a, &a).unwrap());

        // agents that value neither of the swapped portions
        let vals = vec![uniform(&[("0", "0.2")]), uniform(&[("0.8", "1")])];
        let x = Allocation::new(vec![set(&[("0.3", "0.4")]), set(&[("0.5", "0.6")])]).unwrap();
        let swapped = Allocation::new(vec![set(&[("0.5", "0.6")]), set(&[("0.3", "0.4")])]).unwrap();
        assert!(utilitarian_equivalent(&vals, &x, &swapped).unwrap());
    }
}
