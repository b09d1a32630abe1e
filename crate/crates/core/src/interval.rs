//! Closed sub-intervals of the unit cake and canonical finite unions of them.
//!
//! An [`IntervalSet`] is kept sorted, with positive gaps between members and no
//! zero-length members, so two sets covering the same points (up to measure
//! zero) compare equal.

use std::fmt;

use crate::error::{CakeError, Result};
use crate::rational::{self, one, zero, Rational};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Interval {
    lo: Rational,
    hi: Rational,
}

impl Interval {
    pub fn new(lo: Rational, hi: Rational) -> Result<Self> {
        if lo < zero() || hi > one() || lo > hi {
            return Err(CakeError::InvalidInterval { lo, hi });
        }
        Ok(Interval { lo, hi })
    }

    pub fn unit() -> Self {
        Interval { lo: zero(), hi: one() }
    }

    pub fn lo(&self) -> &Rational {
        &self.lo
    }

    pub fn hi(&self) -> &Rational {
        &self.hi
    }

    pub fn length(&self) -> Rational {
        &self.hi - &self.lo
    }

    pub fn is_degenerate(&self) -> bool {
        self.lo == self.hi
    }

    pub fn midpoint(&self) -> Rational {
        (&self.lo + &self.hi) / rational::int(2)
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct IntervalSet {
    intervals: Vec<Interval>,
}

impl IntervalSet {
    pub fn empty() -> Self {
        IntervalSet::default()
    }

    /// The whole cake, `[0, 1]`.
    pub fn full() -> Self {
        IntervalSet { intervals: vec![Interval::unit()] }
    }

    pub fn from_interval(interval: Interval) -> Self {
        Self::from_intervals(std::iter::once(interval))
    }

    /// Builds the canonical form of an arbitrary collection of intervals.
    pub fn from_intervals(intervals: impl IntoIterator<Item = Interval>) -> Self {
        let mut raw: Vec<Interval> = intervals.into_iter().filter(|i| !i.is_degenerate()).collect();
        raw.sort();
        let mut merged: Vec<Interval> = Vec::with_capacity(raw.len());
        for next in raw {
            match merged.last_mut() {
                Some(last) if next.lo <= last.hi => {
                    if next.hi > last.hi {
                        last.hi = next.hi;
                    }
                }
                _ => merged.push(next),
            }
        }
        IntervalSet { intervals: merged }
    }

    /// Convenience constructor from endpoint pairs.
    pub fn from_pairs<I>(pairs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Rational, Rational)>,
    {
        let intervals = pairs
            .into_iter()
            .map(|(lo, hi)| Interval::new(lo, hi))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::from_intervals(intervals))
    }

    /// `[lo, hi]` as a set; panics if the bounds are not a valid sub-interval.
    pub fn span(lo: Rational, hi: Rational) -> Self {
        Self::from_interval(Interval::new(lo, hi).expect("invalid span"))
    }

    pub fn intervals(&self) -> &[Interval] {
        &self.intervals
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    pub fn length(&self) -> Rational {
        self.intervals.iter().fold(zero(), |acc, i| acc + i.length())
    }

    pub fn union(&self, other: &IntervalSet) -> IntervalSet {
        Self::from_intervals(self.intervals.iter().chain(other.intervals.iter()).cloned())
    }

    pub fn intersect(&self, other: &IntervalSet) -> IntervalSet {
        let (a, b) = (&self.intervals, &other.intervals);
        let (mut i, mut j) = (0, 0);
        let mut out = Vec::new();
        while i < a.len() && j < b.len() {
            let lo = rational::max(&a[i].lo, &b[j].lo);
            let hi = rational::min(&a[i].hi, &b[j].hi);
            if lo < hi {
                out.push(Interval { lo, hi });
            }
            if a[i].hi < b[j].hi {
                i += 1;
            } else {
                j += 1;
            }
        }
        IntervalSet { intervals: out }
    }

    /// Complement within `[0, 1]`.
    pub fn complement(&self) -> IntervalSet {
        let mut out = Vec::with_capacity(self.intervals.len() + 1);
        let mut cursor = zero();
        for interval in &self.intervals {
            if cursor < interval.lo {
                out.push(Interval { lo: cursor.clone(), hi: interval.lo.clone() });
            }
            cursor = interval.hi.clone();
        }
        if cursor < one() {
            out.push(Interval { lo: cursor, hi: one() });
        }
        IntervalSet { intervals: out }
    }

    pub fn difference(&self, other: &IntervalSet) -> IntervalSet {
        self.intersect(&other.complement())
    }

    /// `other ⊆ self` up to measure zero.
    pub fn contains_set(&self, other: &IntervalSet) -> bool {
        other.difference(self).is_empty()
    }

    /// Disjoint up to measure zero (shared boundary points are fine).
    pub fn is_disjoint(&self, other: &IntervalSet) -> bool {
        self.intersect(other).is_empty()
    }

    /// All interval endpoints in increasing order.
    pub fn endpoints(&self) -> impl Iterator<Item = &Rational> {
        self.intervals.iter().flat_map(|i| [&i.lo, &i.hi])
    }

    /// The leftmost part of the set with the given length (the whole set if it
    /// is shorter).
    pub fn take_prefix(&self, length: &Rational) -> IntervalSet {
        let mut remaining = length.clone();
        let mut out = Vec::new();
        for interval in &self.intervals {
            if remaining <= zero() {
                break;
            }
            let len = interval.length();
            if len <= remaining {
                remaining -= &len;
                out.push(interval.clone());
            } else {
                out.push(Interval { lo: interval.lo.clone(), hi: &interval.lo + &remaining });
                remaining = zero();
            }
        }
        IntervalSet { intervals: out }
    }

    /// Pieces of the cake between consecutive distinct `marks` that lie inside
    /// this set; marks outside `[0, 1]` are ignored.
    pub fn split_at(&self, marks: &[Rational]) -> Vec<Interval> {
        let mut cuts: Vec<Rational> = marks
            .iter()
            .filter(|m| **m > zero() && **m < one())
            .cloned()
            .collect();
        cuts.sort();
        cuts.dedup();
        let mut out = Vec::new();
        for interval in &self.intervals {
            let mut lo = interval.lo.clone();
            for cut in cuts.iter().filter(|c| **c > interval.lo && **c < interval.hi) {
                out.push(Interval { lo, hi: cut.clone() });
                lo = cut.clone();
            }
            out.push(Interval { lo, hi: interval.hi.clone() });
        }
        out
    }
}

impl From<Interval> for IntervalSet {
    fn from(interval: Interval) -> Self {
        IntervalSet::from_interval(interval)
    }
}

impl FromIterator<Interval> for IntervalSet {
    fn from_iter<T: IntoIterator<Item = Interval>>(iter: T) -> Self {
        IntervalSet::from_intervals(iter)
    }
}

impl fmt::Display for IntervalSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.intervals.is_empty() {
            return write!(f, "∅");
        }
        for (k, interval) in self.intervals.iter().enumerate() {
            if k > 0 {
                write!(f, " ∪ ")?;
            }
            write!(f, "{interval}")?;
        }
        Ok(())
    }
}

/// Union of a family of sets.
pub fn union_all<'a>(sets: impl IntoIterator<Item = &'a IntervalSet>) -> IntervalSet {
    IntervalSet::from_intervals(sets.into_iter().flat_map(|s| s.intervals.iter().cloned()))
}

/// Sorted distinct endpoints of a family of sets, always including 0 and 1.
pub fn breakpoints<'a>(sets: impl IntoIterator<Item = &'a IntervalSet>) -> Vec<Rational> {
    let mut marks: Vec<Rational> = vec![zero(), one()];
    for set in sets {
        marks.extend(set.endpoints().cloned());
    }
    marks.sort();
    marks.dedup();
    marks
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{parse_rational, rat};

    fn set(pairs: &[(&str, &str)]) -> IntervalSet {
        IntervalSet::from_pairs(
            pairs
                .iter()
                .map(|(a, b)| (parse_rational(a).unwrap(), parse_rational(b).unwrap())),
        )
        .unwrap()
    }

    #[test]
    fn length_examples() {
        assert_eq!(set(&[("0", "1/2"), ("3/4", "1")]).length(), rat(3, 4));
        assert_eq!(IntervalSet::empty().length(), zero());
        assert_eq!(IntervalSet::full().length(), one());
    }

    #[test]
    fn set_operation_examples() {
        assert_eq!(set(&[("0", "0.6")]).intersect(&set(&[("0.5", "1")])), set(&[("0.5", "0.6")]));
        assert_eq!(
            IntervalSet::full().difference(&set(&[("0.4", "0.6")])),
            set(&[("0", "0.4"), ("0.6", "1")])
        );
        let merged = set(&[("0", "0.5")]).union(&set(&[("0.5", "1")]));
        assert_eq!(merged, IntervalSet::full());
        assert_eq!(merged.intervals().len(), 1);
    }

    #[test]
    fn canonical_form_drops_points_and_merges() {
        let s = set(&[("1/2", "1/2"), ("0.7", "0.9"), ("0", "0.3"), ("0.2", "0.4"), ("0.9", "1")]);
        assert_eq!(s, set(&[("0", "0.4"), ("0.7", "1")]));
        // touching sets only share a point, which has no length
        assert!(set(&[("0", "0.5")]).is_disjoint(&set(&[("0.5", "1")])));
    }

    #[test]
    fn rejects_intervals_outside_the_cake() {
        assert!(Interval::new(rat(-1, 2), rat(1, 2)).is_err());
        assert!(Interval::new(rat(1, 2), rat(3, 2)).is_err());
        assert!(Interval::new(rat(3, 4), rat(1, 2)).is_err());
        assert!(Interval::new(rat(1, 2), rat(1, 2)).is_ok());
    }

    #[test]
    fn prefix_and_split() {
        let s = set(&[("0", "0.1"), ("0.4", "1")]);
        assert_eq!(s.take_prefix(&rat(3, 10)), set(&[("0", "0.1"), ("0.4", "0.6")]));
        assert_eq!(s.take_prefix(&one()), s);
        let parts = s.split_at(&[rat(1, 2), rat(1, 20), rat(2, 5)]);
        assert_eq!(parts.len(), 4);
        assert_eq!(IntervalSet::from_intervals(parts), s);
    }

    #[test]
    fn complement_of_empty_is_full() {
        assert_eq!(IntervalSet::empty().complement(), IntervalSet::full());
        assert!(IntervalSet::full().complement().is_empty());
        assert_eq!(set(&[("0", "0.1"), ("0.4", "1")]).to_string(), "[0, 1/10] ∪ [2/5, 1]");
    }
}
