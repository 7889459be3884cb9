//! Period-`P` unions of disjoint closed rational intervals on the line.
//!
//! A set is stored canonically: maximal intervals, sorted by start, with at
//! most one interval wrapping across the period seam (stored as `lo > hi` so
//! that seam-crossing gap arithmetic stays exact). The full line has the
//! single interval `[0, P]`.
//!
//! `complement` is the closure of the set-theoretic complement, so touching
//! endpoints are shared between a set and its complement and
//! `complement(complement(A)) = A` whenever `A` has no degenerate intervals.

use crate::rational::{divides, exact_quotient, rem_euclid, Rational};
use num::{Signed, Zero};
use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PeriodicIntervalSet {
    period: Rational,
    /// Canonical closed intervals; `lo > hi` encodes a seam-wrapping interval.
    intervals: Vec<(Rational, Rational)>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum IntervalSetError {
    #[error("period must be positive")]
    NonpositivePeriod,
    #[error("interval endpoint out of range [0, period)")]
    EndpointOutOfRange,
    #[error("period {set_period} does not divide the common period {common}")]
    PeriodMismatch { set_period: String, common: String },
}

/// Outcome of an exact cover query.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CoverVerdict {
    Covers,
    /// A point of the line not contained in the union.
    Gap { witness: Rational },
}

impl CoverVerdict {
    pub fn covers(&self) -> bool {
        matches!(self, CoverVerdict::Covers)
    }
}

impl PeriodicIntervalSet {
    /// Builds the canonical set from arbitrary (possibly overlapping,
    /// possibly wrapping) closed intervals with endpoints in `[0, period)`.
    pub fn new(
        period: Rational,
        intervals: Vec<(Rational, Rational)>,
    ) -> Result<Self, IntervalSetError> {
        if !period.is_positive() {
            return Err(IntervalSetError::NonpositivePeriod);
        }
        let zero = Rational::zero();
        let mut arcs: Vec<(Rational, Rational)> = Vec::with_capacity(intervals.len());
        for (lo, hi) in intervals {
            if lo < zero || lo >= period || hi < zero || hi >= period {
                return Err(IntervalSetError::EndpointOutOfRange);
            }
            // unwrap to (start, end) with end >= start
            let end = if lo <= hi { hi.clone() } else { &hi + &period };
            arcs.push((lo, end));
        }
        Ok(Self::from_arcs(period, arcs))
    }

    /// The whole line.
    pub fn full(period: Rational) -> Self {
        assert!(period.is_positive());
        let zero = Rational::zero();
        PeriodicIntervalSet {
            intervals: vec![(zero, period.clone())],
            period,
        }
    }

    /// The empty set.
    pub fn empty(period: Rational) -> Self {
        assert!(period.is_positive());
        PeriodicIntervalSet {
            period,
            intervals: Vec::new(),
        }
    }

    /// Canonicalizes unwrapped arcs `(start, end)` with `start in [0, P)`,
    /// `start <= end <= start + P`.
    fn from_arcs(period: Rational, mut arcs: Vec<(Rational, Rational)>) -> Self {
        if arcs.is_empty() {
            return Self::empty(period);
        }
        arcs.sort();
        // merge overlapping or touching arcs
        let mut merged: Vec<(Rational, Rational)> = Vec::with_capacity(arcs.len());
        for (s, e) in arcs {
            match merged.last_mut() {
                Some((_, le)) if s <= *le => {
                    if e > *le {
                        *le = e;
                    }
                }
                _ => merged.push((s, e)),
            }
        }
        // fold arcs reaching past the seam into the front
        let seam_end = {
            let last = merged.last().unwrap();
            &last.1 - &period
        };
        if seam_end >= merged[0].0 {
            // the wrapping arc overlaps the leading arcs: absorb them
            let (ws, mut we) = merged.pop().unwrap();
            let mut rest = Vec::new();
            for (s, e) in merged {
                if s <= &we - &period {
                    let lifted = &e + &period;
                    if lifted > we {
                        we = lifted;
                    }
                } else {
                    rest.push((s, e));
                }
            }
            if &we - &ws >= period {
                return Self::full(period);
            }
            rest.push((ws, we));
            merged = rest;
        }
        if merged.len() == 1 && &merged[0].1 - &merged[0].0 >= period {
            return Self::full(period);
        }
        let intervals = merged
            .into_iter()
            .map(|(s, e)| {
                if e < period {
                    (s, e)
                } else if e == period && s.is_zero() {
                    (s, e) // full, handled above; defensive
                } else {
                    let hi = &e - &period;
                    (s, hi)
                }
            })
            .collect();
        PeriodicIntervalSet { period, intervals }
    }

    pub fn period(&self) -> &Rational {
        &self.period
    }

    /// Canonical `(lo, hi)` pairs; a wrapping interval has `lo > hi`.
    pub fn intervals(&self) -> &[(Rational, Rational)] {
        &self.intervals
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.intervals.len() == 1 && self.intervals[0].1 == self.period && self.intervals[0].0.is_zero()
    }

    /// Unwrapped `(start, end)` arcs sorted by start, `end <= start + P`.
    pub fn arcs(&self) -> Vec<(Rational, Rational)> {
        self.intervals
            .iter()
            .map(|(lo, hi)| {
                if lo <= hi {
                    (lo.clone(), hi.clone())
                } else {
                    (lo.clone(), hi + &self.period)
                }
            })
            .collect()
    }

    /// Exact membership of a point of the line (reduced by the period).
    pub fn contains(&self, x: &Rational) -> bool {
        if self.is_full() {
            return true;
        }
        let x = rem_euclid(x, &self.period);
        self.intervals.iter().any(|(lo, hi)| {
            if lo <= hi {
                *lo <= x && x <= *hi
            } else {
                x >= *lo || x <= *hi
            }
        })
    }

    /// Total length covered within one period.
    pub fn measure(&self) -> Rational {
        if self.is_full() {
            return self.period.clone();
        }
        self.intervals
            .iter()
            .map(|(lo, hi)| {
                if lo <= hi {
                    hi - lo
                } else {
                    &self.period - lo + hi
                }
            })
            .sum()
    }

    /// Cyclic gaps between consecutive intervals, as `(gap_start, gap_len)`,
    /// in sorted order. Empty for the full set; the whole period for the
    /// empty set is reported as a single gap starting at 0.
    pub fn gaps(&self) -> Vec<(Rational, Rational)> {
        if self.is_full() {
            return Vec::new();
        }
        if self.intervals.is_empty() {
            return vec![(Rational::zero(), self.period.clone())];
        }
        let arcs = self.arcs();
        let mut out = Vec::with_capacity(arcs.len());
        for i in 0..arcs.len() {
            let end = &arcs[i].1;
            let next_start = if i + 1 < arcs.len() {
                arcs[i + 1].0.clone()
            } else {
                &arcs[0].0 + &self.period
            };
            let len = &next_start - end;
            debug_assert!(!len.is_negative());
            out.push((rem_euclid(end, &self.period), len));
        }
        out
    }

    /// Union with another set of the same period.
    pub fn union(&self, other: &PeriodicIntervalSet) -> PeriodicIntervalSet {
        assert_eq!(self.period, other.period, "union requires equal periods");
        if self.is_full() || other.is_full() {
            return Self::full(self.period.clone());
        }
        let mut arcs = self.arcs();
        arcs.extend(other.arcs());
        Self::from_arcs(self.period.clone(), arcs)
    }

    /// Closure of the complement.
    pub fn complement(&self) -> PeriodicIntervalSet {
        if self.is_full() {
            return Self::empty(self.period.clone());
        }
        if self.intervals.is_empty() {
            return Self::full(self.period.clone());
        }
        let arcs: Vec<(Rational, Rational)> = self
            .gaps()
            .into_iter()
            .map(|(start, len)| {
                let end = &start + &len;
                (start, end)
            })
            .collect();
        Self::from_arcs(self.period.clone(), arcs)
    }

    /// Re-expresses the set with a larger period that the current one divides.
    pub fn lift_to_period(
        &self,
        common: &Rational,
    ) -> Result<PeriodicIntervalSet, IntervalSetError> {
        if common == &self.period {
            return Ok(self.clone());
        }
        if !divides(&self.period, common) {
            return Err(IntervalSetError::PeriodMismatch {
                set_period: self.period.to_string(),
                common: common.to_string(),
            });
        }
        if self.is_full() {
            return Ok(Self::full(common.clone()));
        }
        let copies = exact_quotient(common, &self.period);
        let copies: u64 = copies.try_into().expect("period ratio fits in u64");
        let mut arcs = Vec::with_capacity(self.intervals.len() * copies as usize);
        for k in 0..copies {
            let shift = Rational::from_integer(k.into()) * &self.period;
            for (s, e) in self.arcs() {
                arcs.push((s + &shift, e + &shift));
            }
        }
        Ok(Self::from_arcs(common.clone(), arcs))
    }
}

/// Exact test that the union of the sets is the whole line. Every set's
/// period must divide `common_period`. On failure the verdict carries a
/// witness point missed by every set.
pub fn interval_set_covers_line(
    sets: &[PeriodicIntervalSet],
    common_period: &Rational,
) -> Result<CoverVerdict, IntervalSetError> {
    if !common_period.is_positive() {
        return Err(IntervalSetError::NonpositivePeriod);
    }
    let mut acc = PeriodicIntervalSet::empty(common_period.clone());
    for s in sets {
        acc = acc.union(&s.lift_to_period(common_period)?);
    }
    if acc.is_full() {
        return Ok(CoverVerdict::Covers);
    }
    let (gap_start, gap_len) = acc.gaps().into_iter().next().expect("non-full set has a gap");
    let witness = rem_euclid(&(&gap_start + &gap_len / crate::rational::rat_int(2)), common_period);
    Ok(CoverVerdict::Gap { witness })
}

impl fmt::Display for PeriodicIntervalSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "period={};", self.period)?;
        for (lo, hi) in &self.intervals {
            write!(f, " [{},{}]", lo, hi)?;
        }
        Ok(())
    }
}

impl std::str::FromStr for PeriodicIntervalSet {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let rest = s
            .strip_prefix("period=")
            .ok_or_else(|| "expected `period=P; ...`".to_string())?;
        let (p, ivs) = rest
            .split_once(';')
            .ok_or_else(|| "expected `;` after period".to_string())?;
        let period = crate::rational::parse_rational(p).map_err(|e| e.to_string())?;
        let mut intervals = Vec::new();
        let mut full = false;
        for tok in ivs.split_whitespace() {
            let inner = tok
                .strip_prefix('[')
                .and_then(|t| t.strip_suffix(']'))
                .ok_or_else(|| format!("malformed interval `{tok}`"))?;
            let (lo, hi) = inner
                .split_once(',')
                .ok_or_else(|| format!("malformed interval `{tok}`"))?;
            let lo = crate::rational::parse_rational(lo).map_err(|e| e.to_string())?;
            let hi = crate::rational::parse_rational(hi).map_err(|e| e.to_string())?;
            if lo.is_zero() && hi == period {
                full = true;
            }
            intervals.push((lo, hi));
        }
        if full {
            return Ok(PeriodicIntervalSet::full(period));
        }
        PeriodicIntervalSet::new(period, intervals).map_err(|e| e.to_string())
    }
}
