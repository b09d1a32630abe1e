use crate::error::Result;
use crate::rational::{self, one, rat};

use super::{check_arity, AgentOracle, MechanismResult, Protocol};

/// Last diminisher for `n >= 2` agents.
///
/// Each round the remaining agents, in index order, may trim the candidate
/// slice `[s, l]` down to a fair share; the last to trim takes it.
pub fn last_diminisher(oracles: &[&dyn AgentOracle]) -> Result<MechanismResult> {
    let n = oracles.len();
    check_arity("last-diminisher", n, n >= 2, ">= 2")?;
    let mut p = Protocol::new(oracles);
    let share = rat(1, n as i64);
    let mut remaining: Vec<usize> = (0..n).collect();
    let mut s = rational::zero();
    while remaining.len() > 1 {
        let mut l = one();
        let mut last = None;
        for &i in &remaining {
            if p.eval(i, &s, &l)? > share {
                last = Some(i);
                let mark = p.cut(i, &s, &share)?;
                l = rational::min(&l, &mark);
            }
        }
        let winner = last.unwrap_or(remaining[0]);
        p.give(winner, &s, &l);
        remaining.retain(|&i| i != winner);
        s = l;
    }
    p.give(remaining[0], &s, &one());
    p.finish()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::allocation::equity_table;
    use crate::interval::IntervalSet;
    use crate::rational::{zero, Rational};
    use crate::rw::SincereOracle;
    use crate::valuation::{PieceSpec, Valuation};

    fn uniform_from(lo: Rational) -> Valuation {
        Valuation::normalize(vec![PieceSpec::uniform(lo, one())]).unwrap()
    }

    #[test]
    fn staggered_uniform_agents() {
        let vals = vec![uniform_from(zero()), uniform_from(rat(2, 5)), uniform_from(rat(4, 5))];
        let oracles: Vec<SincereOracle> = vals.iter().map(SincereOracle::new).collect();
        let refs: Vec<&dyn AgentOracle> = oracles.iter().map(|o| o as &dyn AgentOracle).collect();
        let out = last_diminisher(&refs).unwrap();
        assert_eq!(out.allocation.portion(0), &IntervalSet::span(zero(), rat(1, 3)));
        assert_eq!(out.allocation.portion(1), &IntervalSet::span(rat(1, 3), rat(3, 5)));
        assert_eq!(out.allocation.portion(2), &IntervalSet::span(rat(3, 5), one()));
        assert!(equity_table(&vals, &out.allocation).unwrap().is_proportional());
    }

    #[test]
    fn identical_uniform_agents_use_quadratic_queries() {
        for n in 2..9usize {
            let v = uniform_from(zero());
            let o = SincereOracle::new(&v);
            let refs: Vec<&dyn AgentOracle> = vec![&o; n];
            let out = last_diminisher(&refs).unwrap();
            assert_eq!(out.transcript.total(), n * (n + 1) / 2 + n - 2, "n = {n}");
            for i in 0..n {
                assert_eq!(out.allocation.portion(i).length(), rat(1, n as i64));
            }
        }
    }
}
