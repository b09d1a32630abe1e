use crate::error::Result;
use crate::rational::{self, one, rat, zero, Rational};

use super::{check_arity, AgentOracle, MechanismResult, Protocol};

/// Even-Paz divide and conquer for `n >= 1` agents.
///
/// A group of `k` agents on `[s, t]` each marks the point where the left part
/// holds `floor(k/2)/k` of their value for `[s, t]`; the `floor(k/2)` leftmost
/// marks recurse on the left, the rest on the right.
pub fn even_paz(oracles: &[&dyn AgentOracle]) -> Result<MechanismResult> {
    let n = oracles.len();
    check_arity("even-paz", n, n >= 1, ">= 1")?;
    let mut p = Protocol::new(oracles);
    divide(&mut p, (0..n).collect(), zero(), one())?;
    p.finish()
}

fn divide(p: &mut Protocol<'_>, group: Vec<usize>, s: Rational, t: Rational) -> Result<()> {
    let k = group.len();
    if k == 1 {
        p.give(group[0], &s, &t);
        return Ok(());
    }
    let half = k / 2;
    let fraction = rat(half as i64, k as i64);
    let mut marks = Vec::with_capacity(k);
    for &i in &group {
        let v = p.eval(i, &s, &t)?;
        let m = p.cut(i, &s, &(v * &fraction))?;
        marks.push((rational::min(&m, &t), i));
    }
    marks.sort();
    let mid = marks[half - 1].0.clone();
    let left = marks[..half].iter().map(|(_, i)| *i).collect();
    let right = marks[half..].iter().map(|(_, i)| *i).collect();
    divide(p, left, s, mid.clone())?;
    divide(p, right, mid, t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::allocation::equity_table;
    use crate::rw::{RandomLiar, SincereOracle};
    use crate::valuation::{PieceSpec, Valuation};

    #[test]
    fn uniform_agents_get_equal_shares() {
        for n in 1..12usize {
            let v = Valuation::normalize(vec![PieceSpec::uniform(zero(), one())]).unwrap();
            let o = SincereOracle::new(&v);
            let refs: Vec<&dyn AgentOracle> = vec![&o; n];
            let out = even_paz(&refs).unwrap();
            assert!(out.allocation.covers_cake());
            let vals = vec![v.clone(); n];
            assert!(equity_table(&vals, &out.allocation).unwrap().is_proportional(), "n = {n}");
            let depth = (n as f64).log2().ceil() as usize;
            assert!(out.transcript.total() <= 2 * n * depth);
        }
    }

    #[test]
    fn odd_group_with_skewed_agents() {
        let vals = vec![
            Valuation::normalize(vec![PieceSpec::uniform(zero(), rat(1, 3))]).unwrap(),
            Valuation::normalize(vec![PieceSpec::uniform(zero(), one())]).unwrap(),
            Valuation::normalize(vec![PieceSpec::uniform(rat(1, 2), one())]).unwrap(),
        ];
        let oracles: Vec<SincereOracle> = vals.iter().map(SincereOracle::new).collect();
        let refs: Vec<&dyn AgentOracle> = oracles.iter().map(|o| o as &dyn AgentOracle).collect();
        let out = even_paz(&refs).unwrap();
        assert!(equity_table(&vals, &out.allocation).unwrap().is_proportional());
    }

    #[test]
    fn honest_agent_keeps_a_fair_share_among_liars() {
        let v = Valuation::normalize(vec![PieceSpec::uniform(zero(), one())]).unwrap();
        let honest = SincereOracle::new(&v);
        for seed in 0..40 {
            let liars: Vec<RandomLiar> = (0..4).map(|j| RandomLiar::new(seed * 10 + j)).collect();
            let mut refs: Vec<&dyn AgentOracle> = vec![&honest];
            refs.extend(liars.iter().map(|l| l as &dyn AgentOracle));
            let out = even_paz(&refs).unwrap();
            assert!(out.allocation.covers_cake());
            assert!(v.eval(out.allocation.portion(0)) >= rat(1, 5));
        }
    }
}
