use crate::error::Result;
use crate::rational::{one, rat, zero};

use super::{check_arity, AgentOracle, MechanismResult, Protocol};

/// Two agents. The first halves the cake by its own measure, the second takes
/// the piece it strictly prefers, or the right piece when indifferent.
pub fn cut_and_choose(oracles: &[&dyn AgentOracle]) -> Result<MechanismResult> {
    check_arity("cut-and-choose", oracles.len(), oracles.len() == 2, "2")?;
    let mut p = Protocol::new(oracles);
    let (lo, hi) = (zero(), one());
    let a = p.cut(0, &lo, &rat(1, 2))?;
    let left = p.eval(1, &lo, &a)?;
    let right = p.eval(1, &a, &hi)?;
    if left > right {
        p.give(1, &lo, &a);
        p.give(0, &a, &hi);
    } else {
        p.give(0, &lo, &a);
        p.give(1, &a, &hi);
    }
    p.finish()
}
