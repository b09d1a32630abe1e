//! Piecewise (uniform | constant | linear) densities and the two
//! Robertson-Webb primitives, `eval` and `cut`.

use num_traits::{Signed, Zero};

use crate::error::{CakeError, Result};
use crate::interval::{Interval, IntervalSet};
use crate::rational::{self, int, one, rat, zero, Rational};

/// Shape of a raw density piece, before normalization.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DensityKind {
    /// Indicator density; every uniform piece of one valuation shares the same
    /// height after normalization.
    Uniform,
    Constant(Rational),
    Linear { slope: Rational, intercept: Rational },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PieceSpec {
    pub lo: Rational,
    pub hi: Rational,
    pub kind: DensityKind,
}

impl PieceSpec {
    pub fn uniform(lo: Rational, hi: Rational) -> Self {
        PieceSpec { lo, hi, kind: DensityKind::Uniform }
    }

    pub fn constant(lo: Rational, hi: Rational, value: Rational) -> Self {
        PieceSpec { lo, hi, kind: DensityKind::Constant(value) }
    }

    pub fn linear(lo: Rational, hi: Rational, slope: Rational, intercept: Rational) -> Self {
        PieceSpec { lo, hi, kind: DensityKind::Linear { slope, intercept } }
    }

    fn slope_intercept(&self) -> (Rational, Rational) {
        match &self.kind {
            DensityKind::Uniform => (zero(), one()),
            DensityKind::Constant(v) => (zero(), v.clone()),
            DensityKind::Linear { slope, intercept } => (slope.clone(), intercept.clone()),
        }
    }
}

/// The narrowest class a valuation belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum ValuationClass {
    PiecewiseUniform,
    PiecewiseConstant,
    PiecewiseLinear,
}

/// One normalized piece: density `slope * x + intercept` on `[lo, hi]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Piece {
    lo: Rational,
    hi: Rational,
    slope: Rational,
    intercept: Rational,
}

impl Piece {
    pub fn lo(&self) -> &Rational {
        &self.lo
    }

    pub fn hi(&self) -> &Rational {
        &self.hi
    }

    pub fn slope(&self) -> &Rational {
        &self.slope
    }

    pub fn intercept(&self) -> &Rational {
        &self.intercept
    }

    pub fn density_at(&self, x: &Rational) -> Rational {
        &self.slope * x + &self.intercept
    }

    /// Antiderivative of the density, `slope x² / 2 + intercept x`.
    fn primitive(&self, x: &Rational) -> Rational {
        &self.slope * x * x / int(2) + &self.intercept * x
    }

    /// Mass of the piece over `[a, b] ∩ [lo, hi]`.
    fn mass_between(&self, a: &Rational, b: &Rational) -> Rational {
        let lo = rational::max(a, &self.lo);
        let hi = rational::min(b, &self.hi);
        if lo >= hi {
            return zero();
        }
        self.primitive(&hi) - self.primitive(&lo)
    }
}

/// Answer to a `cut` query.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CutPoint {
    pub point: Rational,
    /// False when the point came from bisection on a linear piece whose exact
    /// answer is irrational.
    pub exact: bool,
}

/// A normalized piecewise-linear probability density on `[0, 1]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Valuation {
    pieces: Vec<Piece>,
    class: ValuationClass,
}

pub fn default_cut_tolerance() -> Rational {
    rat(1, 1_000_000_000_000)
}

impl Valuation {
    /// Validates raw pieces and scales them to total mass one.
    pub fn normalize(specs: impl IntoIterator<Item = PieceSpec>) -> Result<Valuation> {
        let mut raw: Vec<Piece> = Vec::new();
        for spec in specs {
            Interval::new(spec.lo.clone(), spec.hi.clone())?;
            if spec.lo == spec.hi {
                continue;
            }
            let (slope, intercept) = spec.slope_intercept();
            let piece = Piece { lo: spec.lo, hi: spec.hi, slope, intercept };
            if piece.density_at(&piece.lo).is_negative() || piece.density_at(&piece.hi).is_negative() {
                return Err(CakeError::NegativeDensity { lo: piece.lo, hi: piece.hi });
            }
            if piece.slope.is_zero() && piece.intercept.is_zero() {
                continue;
            }
            raw.push(piece);
        }
        raw.sort_by(|a, b| a.lo.cmp(&b.lo));
        for pair in raw.windows(2) {
            if pair[1].lo < pair[0].hi {
                return Err(CakeError::OverlappingPieces { at: pair[1].lo.clone() });
            }
        }
        let mass = raw.iter().fold(zero(), |acc, p| acc + p.mass_between(&p.lo, &p.hi));
        if mass.is_zero() {
            return Err(CakeError::ZeroMass);
        }
        let pieces: Vec<Piece> = raw
            .into_iter()
            .map(|p| Piece {
                lo: p.lo,
                hi: p.hi,
                slope: p.slope / &mass,
                intercept: p.intercept / &mass,
            })
            .collect();
        let class = if pieces.iter().any(|p| !p.slope.is_zero()) {
            ValuationClass::PiecewiseLinear
        } else if pieces.windows(2).all(|w| w[0].intercept == w[1].intercept) {
            ValuationClass::PiecewiseUniform
        } else {
            ValuationClass::PiecewiseConstant
        };
        Ok(Valuation { pieces, class })
    }

    /// Piecewise-uniform valuation over `valued`.
    pub fn uniform_on(valued: &IntervalSet) -> Result<Valuation> {
        Self::normalize(
            valued
                .intervals()
                .iter()
                .map(|i| PieceSpec::uniform(i.lo().clone(), i.hi().clone())),
        )
    }

    pub fn pieces(&self) -> &[Piece] {
        &self.pieces
    }

    pub fn class(&self) -> ValuationClass {
        self.class
    }

    /// The region with positive density.
    pub fn valued_set(&self) -> IntervalSet {
        IntervalSet::from_intervals(
            self.pieces
                .iter()
                .map(|p| Interval::new(p.lo.clone(), p.hi.clone()).expect("validated piece")),
        )
    }

    /// Density at `x`; at a shared piece boundary the right-hand piece wins.
    pub fn density_at(&self, x: &Rational) -> Rational {
        self.pieces
            .iter()
            .rev()
            .find(|p| p.lo <= *x && *x <= p.hi)
            .map(|p| p.density_at(x))
            .unwrap_or_else(zero)
    }

    /// Piece endpoints in increasing order.
    pub fn breakpoints(&self) -> Vec<Rational> {
        let mut marks: Vec<Rational> = self.pieces.iter().flat_map(|p| [p.lo.clone(), p.hi.clone()]).collect();
        marks.sort();
        marks.dedup();
        marks
    }

    pub fn eval_interval(&self, a: &Rational, b: &Rational) -> Rational {
        if a >= b {
            return zero();
        }
        self.pieces.iter().fold(zero(), |acc, p| acc + p.mass_between(a, b))
    }

    pub fn eval(&self, set: &IntervalSet) -> Rational {
        set.intervals()
            .iter()
            .fold(zero(), |acc, i| acc + self.eval_interval(i.lo(), i.hi()))
    }

    /// Smallest `b ≥ a` with `eval([a, b]) = target`.
    pub fn cut(&self, a: &Rational, target: &Rational) -> Result<CutPoint> {
        self.cut_with_tolerance(a, target, &default_cut_tolerance())
    }

    pub fn cut_with_tolerance(&self, a: &Rational, target: &Rational, tolerance: &Rational) -> Result<CutPoint> {
        if *a < zero() || *a > one() {
            return Err(CakeError::InvalidQuery(format!("cut start {a} outside [0, 1]")));
        }
        if target.is_negative() {
            return Err(CakeError::InvalidQuery(format!("negative cut target {target}")));
        }
        if target.is_zero() {
            return Ok(CutPoint { point: a.clone(), exact: true });
        }
        let mut acc = zero();
        for piece in self.pieces.iter().filter(|p| p.hi > *a) {
            let start = rational::max(a, &piece.lo);
            let mass = piece.mass_between(&start, &piece.hi);
            if mass.is_zero() {
                continue;
            }
            let needed = target - &acc;
            if mass >= needed {
                return Ok(solve_in_piece(piece, &start, &needed, tolerance));
            }
            acc += mass;
        }
        Err(CakeError::TargetUnreachable { target: target.clone(), available: acc })
    }
}

/// Smallest `b` in `[start, piece.hi]` with mass `needed` over `[start, b]`,
/// given that the piece holds at least that much.
fn solve_in_piece(piece: &Piece, start: &Rational, needed: &Rational, tolerance: &Rational) -> CutPoint {
    let t0 = piece.density_at(start);
    if piece.slope.is_zero() {
        return CutPoint { point: start + needed / &t0, exact: true };
    }
    // slope/2 (b - start)² + t0 (b - start) = needed
    let discriminant = &t0 * &t0 + int(2) * &piece.slope * needed;
    if let Some(root) = rational::exact_sqrt(&discriminant) {
        let point = start + (root - &t0) / &piece.slope;
        return CutPoint { point, exact: true };
    }
    let (mut lo, mut hi) = (start.clone(), piece.hi.clone());
    while &hi - &lo > *tolerance {
        let mid = (&lo + &hi) / int(2);
        if piece.mass_between(start, &mid) < *needed {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    CutPoint { point: hi, exact: false }
}
