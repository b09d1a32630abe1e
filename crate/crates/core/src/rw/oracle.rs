use std::cell::RefCell;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::rational::{rat, Rational};
use crate::valuation::Valuation;

/// An agent as the mechanism sees it: something that answers `eval` and `cut`.
pub trait AgentOracle {
    /// The agent's value for `[a, b]`.
    fn eval(&self, a: &Rational, b: &Rational) -> Result<Rational>;
    /// A point `b` with `eval(a, b) = target`.
    fn cut(&self, a: &Rational, target: &Rational) -> Result<Rational>;
}

/// Answers every query truthfully from a valuation.
#[derive(Clone, Debug)]
pub struct SincereOracle<'v> {
    valuation: &'v Valuation,
}

impl<'v> SincereOracle<'v> {
    pub fn new(valuation: &'v Valuation) -> Self {
        SincereOracle { valuation }
    }
}

impl AgentOracle for SincereOracle<'_> {
    fn eval(&self, a: &Rational, b: &Rational) -> Result<Rational> {
        Ok(self.valuation.eval_interval(a, b))
    }

    fn cut(&self, a: &Rational, target: &Rational) -> Result<Rational> {
        Ok(self.valuation.cut(a, target)?.point)
    }
}

/// Answers with seeded noise: evaluations uniform on a grid in `[0, 1]`,
/// cuts anywhere in `[a, 1]`. Used to probe the guarantees sincere agents keep
/// against arbitrary behaviour.
#[derive(Debug)]
pub struct RandomLiar {
    rng: RefCell<ChaCha8Rng>,
}

const LIAR_GRID: i64 = 1 << 10;

impl RandomLiar {
    pub fn new(seed: u64) -> Self {
        RandomLiar { rng: RefCell::new(ChaCha8Rng::seed_from_u64(seed)) }
    }
}

impl AgentOracle for RandomLiar {
    fn eval(&self, _a: &Rational, _b: &Rational) -> Result<Rational> {
        let k = self.rng.borrow_mut().gen_range(0..=LIAR_GRID);
        Ok(rat(k, LIAR_GRID))
    }

    fn cut(&self, a: &Rational, _target: &Rational) -> Result<Rational> {
        let k = self.rng.borrow_mut().gen_range(0..=LIAR_GRID);
        let one = crate::rational::one();
        Ok(a + (&one - a) * rat(k, LIAR_GRID))
    }
}
