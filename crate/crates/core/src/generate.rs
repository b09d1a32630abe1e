//! Seeded random instances.

use rand::seq::index::sample;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::interval::{Interval, IntervalSet};
use crate::rational::{int, rat, Rational};
use crate::uniform::{Profile, UniformPreference};
use crate::valuation::{PieceSpec, Valuation};

pub const DEFAULT_GRID: i64 = 64;

pub struct InstanceGenerator {
    rng: ChaCha8Rng,
    grid: i64,
}

impl InstanceGenerator {
    pub fn new(seed: u64) -> Self {
        Self::with_grid(seed, DEFAULT_GRID)
    }

    /// Endpoints are multiples of `1 / grid`; `grid` must be at least 8.
    pub fn with_grid(seed: u64, grid: i64) -> Self {
        assert!(grid >= 8, "grid too coarse for four intervals");
        InstanceGenerator { rng: ChaCha8Rng::seed_from_u64(seed), grid }
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    /// One to four disjoint grid intervals.
    fn grid_intervals(&mut self) -> Vec<(Rational, Rational)> {
        let k = self.rng.gen_range(1..=4usize);
        let mut points: Vec<i64> = sample(&mut self.rng, self.grid as usize + 1, 2 * k)
            .into_iter()
            .map(|p| p as i64)
            .collect();
        points.sort();
        points.chunks(2).map(|c| (rat(c[0], self.grid), rat(c[1], self.grid))).collect()
    }

    pub fn uniform_preference(&mut self) -> UniformPreference {
        let set = IntervalSet::from_pairs(self.grid_intervals()).expect("grid points lie in [0, 1]");
        UniformPreference::new(set).expect("distinct endpoints give positive length")
    }

    pub fn uniform_preferences(&mut self, n: usize) -> Vec<UniformPreference> {
        (0..n).map(|_| self.uniform_preference()).collect()
    }

    /// Piecewise constant with integer heights from 1 to 9.
    pub fn constant_valuation(&mut self) -> Valuation {
        let pieces: Vec<PieceSpec> = self
            .grid_intervals()
            .into_iter()
            .map(|(lo, hi)| PieceSpec::constant(lo, hi, int(self.rng.gen_range(1..=9))))
            .collect();
        Valuation::normalize(pieces).expect("positive heights on positive lengths")
    }

    pub fn constant_valuations(&mut self, n: usize) -> Vec<Valuation> {
        (0..n).map(|_| self.constant_valuation()).collect()
    }

    /// A random union of the pieces of `set` cut at `marks`; each piece is kept
    /// with probability one half.
    pub fn aligned_subset(&mut self, set: &IntervalSet, marks: &[Rational]) -> IntervalSet {
        let pieces: Vec<Interval> = set.split_at(marks);
        IntervalSet::from_intervals(pieces.into_iter().filter(|_| self.rng.gen_bool(0.5)))
    }

    /// Each agent claims a random aligned part of its own preference.
    pub fn well_behaved_profile(&mut self, prefs: &[UniformPreference]) -> Profile {
        let marks = crate::interval::breakpoints(prefs.iter().map(UniformPreference::valued));
        Profile::new(prefs.iter().map(|p| self.aligned_subset(p.valued(), &marks)).collect())
    }
}
