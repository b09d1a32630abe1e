use crate::allocation::Allocation;
use crate::error::{CakeError, Result};
use crate::interval::IntervalSet;
use crate::rational::{self, zero, Rational};
use crate::valuation::{Valuation, ValuationClass};

/// Marks on `[0, 1]` between which every agent's density is a single linear
/// function and the agents' densities never cross.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Segmentation {
    marks: Vec<Rational>,
}

impl Segmentation {
    pub fn marks(&self) -> &[Rational] {
        &self.marks
    }

    pub fn len(&self) -> usize {
        self.marks.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn segment(&self, s: usize) -> (&Rational, &Rational) {
        (&self.marks[s], &self.marks[s + 1])
    }

    pub fn length(&self, s: usize) -> Rational {
        &self.marks[s + 1] - &self.marks[s]
    }

    pub fn midpoint(&self, s: usize) -> Rational {
        (&self.marks[s] + &self.marks[s + 1]) / rational::int(2)
    }
}

pub fn segment(valuations: &[Valuation]) -> Segmentation {
    let mut marks = vec![zero(), rational::one()];
    for v in valuations {
        marks.extend(v.breakpoints());
    }
    for (a, va) in valuations.iter().enumerate() {
        for vb in &valuations[a + 1..] {
            for pa in va.pieces() {
                for pb in vb.pieces() {
                    if pa.slope() == pb.slope() {
                        continue;
                    }
                    let lo = rational::max(pa.lo(), pb.lo());
                    let hi = rational::min(pa.hi(), pb.hi());
                    let x = (pb.intercept() - pa.intercept()) / (pa.slope() - pb.slope());
                    if lo < x && x < hi {
                        marks.push(x);
                    }
                }
            }
        }
    }
    marks.sort();
    marks.dedup();
    Segmentation { marks }
}

/// Per-unit-length utility of each agent on each segment.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SegmentRateMatrix {
    pub segmentation: Segmentation,
    /// `rates[i][s]`
    pub rates: Vec<Vec<Rational>>,
}

impl SegmentRateMatrix {
    /// Requires piecewise constant (or uniform) valuations.
    pub fn new(valuations: &[Valuation]) -> Result<Self> {
        if valuations.iter().any(|v| v.class() == ValuationClass::PiecewiseLinear) {
            return Err(CakeError::UnsupportedValuationClass(
                "linear densities make utilities non-linear in segment lengths".into(),
            ));
        }
        let segmentation = segment(valuations);
        let rates = valuations
            .iter()
            .map(|v| (0..segmentation.len()).map(|s| v.density_at(&segmentation.midpoint(s))).collect())
            .collect();
        Ok(SegmentRateMatrix { segmentation, rates })
    }

    pub fn n(&self) -> usize {
        self.rates.len()
    }
}

/// Gives every segment to the agent whose density there is highest, ties to
/// the lowest index.
pub fn utilitarian_optimal(valuations: &[Valuation]) -> Result<Allocation> {
    if valuations.is_empty() {
        return Err(CakeError::DimensionMismatch { expected: 1, found: 0 });
    }
    let seg = segment(valuations);
    let mut portions = vec![IntervalSet::empty(); valuations.len()];
    for s in 0..seg.len() {
        let mid = seg.midpoint(s);
        let mut best = 0;
        let mut best_density = valuations[0].density_at(&mid);
        for (i, v) in valuations.iter().enumerate().skip(1) {
            let d = v.density_at(&mid);
            if d > best_density {
                best = i;
                best_density = d;
            }
        }
        let (lo, hi) = seg.segment(s);
        portions[best] = portions[best].union(&IntervalSet::span(lo.clone(), hi.clone()));
    }
    Allocation::new(portions)
}
