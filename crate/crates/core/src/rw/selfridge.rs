use std::cmp::Ordering;

use crate::error::Result;
use crate::rational::{self, one, rat, zero, Rational};

use super::{check_arity, AgentOracle, MechanismResult, Protocol, Slice};

/// Selfridge-Conway envy-free division for three agents.
///
/// Agent 0 cuts thirds, agent 1 trims its favourite down to a tie with its
/// second choice, then agents 2, 1, 0 choose in turn with agent 1 bound to
/// the trimmed slice if it is still there. The trimming is divided among the
/// three in a second stage.
pub fn selfridge(oracles: &[&dyn AgentOracle]) -> Result<MechanismResult> {
    check_arity("selfridge", oracles.len(), oracles.len() == 3, "3")?;
    let mut p = Protocol::new(oracles);
    let third = rat(1, 3);
    let a = p.cut(0, &zero(), &third)?;
    let b = p.cut(0, &a, &third)?;
    let slices = [Slice::new(zero(), a.clone()), Slice::new(a, b.clone()), Slice::new(b, one())];

    let mut ranked: Vec<(Rational, usize)> = Vec::with_capacity(3);
    for (pos, s) in slices.iter().enumerate() {
        ranked.push((p.eval(1, &s.lo, &s.hi)?, pos));
    }
    ranked.sort_by(|x, y| y.0.cmp(&x.0).then(x.1.cmp(&y.1)));
    let (top, second, bottom) = (&slices[ranked[0].1], &slices[ranked[1].1], &slices[ranked[2].1]);

    let cut_at = if ranked[0].0 > ranked[1].0 {
        let c = p.cut(1, &top.lo, &ranked[1].0)?;
        rational::min(&c, &top.hi)
    } else {
        top.hi.clone()
    };
    let trimmed = Slice::new(top.lo.clone(), cut_at.clone());
    let trimming = Slice::new(cut_at, top.hi.clone());

    // Choosing order: 2, then 1 (forced onto the trimmed slice if left), then 0.
    let mut pool = vec![trimmed.clone(), second.clone(), bottom.clone()];
    let pick2 = favourite(&mut p, 2, &pool)?;
    let slice2 = pool.remove(pick2);
    let slice1 = match pool.iter().position(|s| *s == trimmed) {
        Some(idx) => pool.remove(idx),
        None => {
            let pick1 = favourite(&mut p, 1, &pool)?;
            pool.remove(pick1)
        }
    };
    let slice0 = pool.remove(0);
    p.give(2, &slice2.lo, &slice2.hi);
    p.give(1, &slice1.lo, &slice1.hi);
    p.give(0, &slice0.lo, &slice0.hi);

    if trimming.lo < trimming.hi {
        let (taker, other) = if slice2 == trimmed { (2, 1) } else { (1, 2) };
        let whole = p.eval(other, &trimming.lo, &trimming.hi)?;
        let part = whole / rat(3, 1);
        let d = rational::min(&p.cut(other, &trimming.lo, &part)?, &trimming.hi);
        let e = rational::min(&p.cut(other, &d, &part)?, &trimming.hi);
        let mut parts =
            vec![Slice::new(trimming.lo.clone(), d.clone()), Slice::new(d, e.clone()), Slice::new(e, trimming.hi)];
        let first = favourite(&mut p, taker, &parts)?;
        let s = parts.remove(first);
        p.give(taker, &s.lo, &s.hi);
        let next = favourite(&mut p, 0, &parts)?;
        let s = parts.remove(next);
        p.give(0, &s.lo, &s.hi);
        let s = parts.remove(0);
        p.give(other, &s.lo, &s.hi);
    }
    p.finish()
}

/// Position of the agent's most valued slice, earliest on ties.
fn favourite(p: &mut Protocol<'_>, agent: usize, pool: &[Slice]) -> Result<usize> {
    let mut best: Option<(Rational, usize)> = None;
    for (idx, s) in pool.iter().enumerate() {
        let v = p.eval(agent, &s.lo, &s.hi)?;
        let better = match &best {
            None => true,
            Some((bv, _)) => v.cmp(bv) == Ordering::Greater,
        };
        if better {
            best = Some((v, idx));
        }
    }
    Ok(best.map_or(0, |(_, idx)| idx))
}
