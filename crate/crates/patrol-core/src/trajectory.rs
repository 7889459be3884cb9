//! Piecewise-linear rational agent motions.
//!
//! A `Trajectory` is periodic: breakpoints at strictly increasing times in
//! `[0, period)`, linear motion between consecutive breakpoints, and a wrap
//! segment from the last breakpoint back to the first one shifted by one
//! period. A `WindowMotion` is the non-periodic restriction of a motion to a
//! single time window, used by the zigzag discretization.

use crate::rational::{rem_euclid, Rational};
use num::{Signed, Zero};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Trajectory {
    period: Rational,
    points: Vec<(Rational, Rational)>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TrajectoryError {
    #[error("period must be positive")]
    NonpositivePeriod,
    #[error("a trajectory needs at least one breakpoint")]
    NoBreakpoints,
    #[error("breakpoint times must be strictly increasing within [0, period)")]
    BadTimes,
}

/// One linear piece of motion: from `(t0, x0)` to `(t1, x1)` with `t0 < t1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Segment {
    pub t0: Rational,
    pub t1: Rational,
    pub x0: Rational,
    pub x1: Rational,
}

impl Segment {
    pub fn is_stationary(&self) -> bool {
        self.x0 == self.x1
    }

    /// |dx/dt|, exact.
    pub fn speed(&self) -> Rational {
        ((&self.x1 - &self.x0) / (&self.t1 - &self.t0)).abs()
    }

    /// Time at which the segment passes position `x`; `x` must lie in the
    /// segment's position range and the segment must not be stationary.
    pub fn time_at_position(&self, x: &Rational) -> Rational {
        debug_assert!(!self.is_stationary());
        &self.t0 + (x - &self.x0) * (&self.t1 - &self.t0) / (&self.x1 - &self.x0)
    }
}

impl Trajectory {
    pub fn new(
        period: Rational,
        points: Vec<(Rational, Rational)>,
    ) -> Result<Self, TrajectoryError> {
        if !period.is_positive() {
            return Err(TrajectoryError::NonpositivePeriod);
        }
        if points.is_empty() {
            return Err(TrajectoryError::NoBreakpoints);
        }
        for (i, (t, _)) in points.iter().enumerate() {
            if t < &Rational::zero() || t >= &period {
                return Err(TrajectoryError::BadTimes);
            }
            if i > 0 && points[i - 1].0 >= *t {
                return Err(TrajectoryError::BadTimes);
            }
        }
        Ok(Trajectory { period, points })
    }

    /// Stationary trajectory sitting at `x` forever.
    pub fn stationary(period: Rational, x: Rational) -> Self {
        Trajectory::new(period, vec![(Rational::zero(), x)]).expect("valid stationary trajectory")
    }

    pub fn period(&self) -> &Rational {
        &self.period
    }

    pub fn points(&self) -> &[(Rational, Rational)] {
        &self.points
    }

    /// The segments of one period, including the wrap segment.
    pub fn segments(&self) -> Vec<Segment> {
        let n = self.points.len();
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            let (t0, x0) = self.points[i].clone();
            let (t1, x1) = if i + 1 < n {
                self.points[i + 1].clone()
            } else {
                (&self.points[0].0 + &self.period, self.points[0].1.clone())
            };
            out.push(Segment { t0, t1, x0, x1 });
        }
        out
    }

    /// Segments covering `[0, common_period)` for a common period that this
    /// trajectory's period divides; segment times fall within
    /// `[0, common_period + period)` before reduction and are emitted shifted
    /// into consecutive copies.
    pub fn segments_over(&self, common_period: &Rational) -> Vec<Segment> {
        debug_assert!(crate::rational::divides(&self.period, common_period));
        let copies: u64 = crate::rational::exact_quotient(common_period, &self.period)
            .try_into()
            .expect("period ratio fits in u64");
        let base = self.segments();
        let mut out = Vec::with_capacity(base.len() * copies as usize);
        for k in 0..copies {
            let shift = Rational::from_integer(k.into()) * &self.period;
            for s in &base {
                out.push(Segment {
                    t0: &s.t0 + &shift,
                    t1: &s.t1 + &shift,
                    x0: s.x0.clone(),
                    x1: s.x1.clone(),
                });
            }
        }
        out
    }

    /// Exact position at an arbitrary time.
    pub fn position_at(&self, t: &Rational) -> Rational {
        let t = rem_euclid(t, &self.period);
        // find the segment whose [t0, t1) contains t; the wrap segment covers
        // [t_last, period) plus [0, t_first)
        let first_t = &self.points[0].0;
        if &t < first_t {
            // inside the wrap segment, shifted forward one period
            let seg = self.segments().pop().expect("nonempty");
            let t_lift = &t + &self.period;
            return interpolate(&seg, &t_lift);
        }
        for seg in self.segments() {
            if t >= seg.t0 && t < seg.t1 {
                return interpolate(&seg, &t);
            }
        }
        // t equals the last breakpoint exactly out of loop only if t >= t1 of
        // the wrap segment, which cannot happen after reduction
        unreachable!("time not located in any segment")
    }

    /// Maximum segment speed.
    pub fn max_speed(&self) -> Rational {
        self.segments()
            .iter()
            .map(Segment::speed)
            .max()
            .expect("at least the wrap segment exists")
    }
}

fn interpolate(seg: &Segment, t: &Rational) -> Rational {
    if seg.is_stationary() {
        return seg.x0.clone();
    }
    &seg.x0 + (t - &seg.t0) * (&seg.x1 - &seg.x0) / (&seg.t1 - &seg.t0)
}

/// True iff every segment's speed is at most `v` (exact comparison,
/// equality allowed).
pub fn trajectory_speed_ok(traj: &Trajectory, v: &Rational) -> bool {
    traj.segments().iter().all(|s| s.speed() <= *v)
}

/// A piecewise-linear motion on one closed time window, given by at least
/// two breakpoints with strictly increasing times.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WindowMotion {
    points: Vec<(Rational, Rational)>,
}

impl WindowMotion {
    pub fn new(points: Vec<(Rational, Rational)>) -> Result<Self, TrajectoryError> {
        if points.len() < 2 {
            return Err(TrajectoryError::NoBreakpoints);
        }
        for i in 1..points.len() {
            if points[i - 1].0 >= points[i].0 {
                return Err(TrajectoryError::BadTimes);
            }
        }
        Ok(WindowMotion { points })
    }

    pub fn points(&self) -> &[(Rational, Rational)] {
        &self.points
    }

    pub fn t_start(&self) -> &Rational {
        &self.points[0].0
    }

    pub fn t_end(&self) -> &Rational {
        &self.points[self.points.len() - 1].0
    }

    pub fn start_position(&self) -> &Rational {
        &self.points[0].1
    }

    pub fn end_position(&self) -> &Rational {
        &self.points[self.points.len() - 1].1
    }

    pub fn max_speed(&self) -> Rational {
        (0..self.points.len() - 1)
            .map(|i| {
                let (t0, x0) = &self.points[i];
                let (t1, x1) = &self.points[i + 1];
                ((x1 - x0) / (t1 - t0)).abs()
            })
            .max()
            .expect("at least one leg")
    }

    /// Minimum position together with the earliest time attaining it.
    pub fn min_position(&self) -> (Rational, Rational) {
        let mut best = (self.points[0].1.clone(), self.points[0].0.clone());
        for (t, x) in &self.points[1..] {
            if *x < best.0 {
                best = (x.clone(), t.clone());
            }
        }
        (best.1, best.0) // (time, position)
    }

    /// Maximum position together with the earliest time attaining it.
    pub fn max_position(&self) -> (Rational, Rational) {
        let mut best = (self.points[0].1.clone(), self.points[0].0.clone());
        for (t, x) in &self.points[1..] {
            if *x > best.0 {
                best = (x.clone(), t.clone());
            }
        }
        (best.1, best.0)
    }

    pub fn position_at(&self, t: &Rational) -> Rational {
        assert!(t >= self.t_start() && t <= self.t_end());
        for i in 0..self.points.len() - 1 {
            let (t0, x0) = &self.points[i];
            let (t1, x1) = &self.points[i + 1];
            if t >= t0 && t <= t1 {
                if x0 == x1 {
                    return x0.clone();
                }
                return x0 + (t - t0) * (x1 - x0) / (t1 - t0);
            }
        }
        unreachable!("time inside the window")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{rat, rat_int};

    fn osc() -> Trajectory {
        // oscillates between 0 and 1/2 with period 1 at speed 1
        Trajectory::new(
            rat_int(1),
            vec![(rat_int(0), rat_int(0)), (rat(1, 2), rat(1, 2))],
        )
        .unwrap()
    }

    #[test]
    fn stationary_speed_zero() {
        let t = Trajectory::stationary(rat_int(5), rat(7, 3));
        assert!(trajectory_speed_ok(&t, &rat_int(0)));
        assert_eq!(t.position_at(&rat(99, 7)), rat(7, 3));
    }

    #[test]
    fn boundary_speed_equality_allowed() {
        // one unit in one time unit at v = 1
        let t = Trajectory::new(
            rat_int(2),
            vec![(rat_int(0), rat_int(0)), (rat_int(1), rat_int(1))],
        )
        .unwrap();
        assert!(trajectory_speed_ok(&t, &rat_int(1)));
    }

    #[test]
    fn too_fast_segment_rejected() {
        // one unit in 1/2 time unit exceeds v = 1
        let t = Trajectory::new(
            rat_int(1),
            vec![(rat_int(0), rat_int(0)), (rat(1, 2), rat_int(1))],
        )
        .unwrap();
        assert!(!trajectory_speed_ok(&t, &rat_int(1)));
        assert!(trajectory_speed_ok(&t, &rat_int(2)));
    }

    #[test]
    fn oscillation_positions() {
        let t = osc();
        assert_eq!(t.position_at(&rat(1, 4)), rat(1, 4));
        assert_eq!(t.position_at(&rat(3, 4)), rat(1, 4));
        assert_eq!(t.position_at(&rat_int(1)), rat_int(0));
        assert_eq!(t.position_at(&rat(-1, 4)), rat(1, 4));
    }

    #[test]
    fn unrolling_covers_common_period() {
        let t = osc();
        let segs = t.segments_over(&rat_int(3));
        assert_eq!(segs.len(), 6);
        assert_eq!(segs.last().unwrap().t1, rat_int(3));
    }

    #[test]
    fn continuity_across_wrap() {
        let t = Trajectory::new(
            rat_int(2),
            vec![(rat(1, 2), rat_int(1)), (rat_int(1), rat_int(3))],
        )
        .unwrap();
        // wrap segment from (1, 3) back to (5/2, 1)
        let segs = t.segments();
        assert_eq!(segs[1].t1, rat(5, 2));
        assert_eq!(segs[1].x1, rat_int(1));
        assert_eq!(t.position_at(&rat_int(0)), rat(5, 3));
    }

    #[test]
    fn window_motion_extremes() {
        let w = WindowMotion::new(vec![
            (rat_int(0), rat_int(2)),
            (rat_int(1), rat_int(0)),
            (rat_int(3), rat_int(4)),
            (rat_int(4), rat_int(4)),
        ])
        .unwrap();
        let (tmin, xmin) = w.min_position();
        let (tmax, xmax) = w.max_position();
        assert_eq!((tmin, xmin), (rat_int(1), rat_int(0)));
        assert_eq!((tmax, xmax), (rat_int(3), rat_int(4)));
        assert_eq!(w.max_speed(), rat_int(2));
    }
}
