//! Unidirectional circle patrolling.
//!
//! Agents move clockwise only. The runners baseline keeps the `r` fastest
//! agents at constant speed `v_r`, equidistant, patrolling perimeter
//! `max_r r * v_r`. Beating that baseline by a factor `c/2` is equivalent to
//! the existence of a *layered cover*: `k` periodic interval families where
//! family `i` has interval lengths at most `1/(c*i - 1)`, consecutive gaps
//! exactly 1, and the union covers the whole line. This module holds the
//! types, the exact checkers, and the two conversion directions; the greedy
//! searcher for layered covers lives in [`search`].

mod search;

pub use search::{greedy_ck_search, GreedyOutcome};

/// Why the greedy search stopped without a cover.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GreedyStall {
    /// Every remaining candidate family covers zero new cells.
    NoProgress,
    /// The family count limit was reached.
    KMaxExhausted,
    /// The period is shorter than the unit gap, so no chain exists.
    PeriodBelowUnitGap,
}

use crate::fence::{parse_schedule_text, perr, ScheduleParseError};
use crate::interval::{interval_set_covers_line, CoverVerdict, PeriodicIntervalSet};
use crate::rational::{divides, rat, rat_int, rem_euclid, Rational};
use crate::sweep::{self, CoverageProblem, CoverageVerdict, StationaryPiece, VisitLinePiece};
use num::{One, Signed, Zero};

/// A `(c, k)` layered cover: `k` interval families with one common period.
/// Family `i` (1-indexed) has interval lengths at most `1/(c*i - 1)` and
/// consecutive-interval gaps of exactly 1; together they cover the line.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CKSequence {
    c: Rational,
    sets: Vec<PeriodicIntervalSet>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CircleError {
    #[error("c must be greater than 1")]
    CTooSmall,
    #[error("a sequence needs at least one set")]
    NoSets,
    #[error("all sets must share one period")]
    MixedPeriods,
    #[error("granularity must divide the period and the unit gap")]
    BadGranularity,
    #[error("perimeter, idle and period must be positive")]
    NonpositiveParameter,
    #[error("schedule needs at least one agent")]
    NoAgents,
    #[error("agent {0}: positions must be non-decreasing")]
    NotMonotone(usize),
    #[error("agent {0} exceeds its speed limit")]
    SpeedExceeded(usize),
    #[error("agent {0}: period shift must be a non-negative integer number of laps")]
    BadLift(usize),
    #[error("agent {0}'s period does not divide the common period")]
    PeriodMismatch(usize),
    #[error("agent {0} is not slower than the sweep speed c")]
    AgentTooFast(usize),
    #[error("agent {0}: covered sets are not periodic under the schedule period")]
    SweepIncompatible(usize),
    #[error("input sequence is invalid: {0}")]
    InvalidSequence(String),
    #[error("schedule does not patrol: point {witness_x} has no visit in [{witness_t}, {witness_t} + idle)")]
    NotPatrolling { witness_x: Rational, witness_t: Rational },
}

impl CKSequence {
    pub fn new(c: Rational, sets: Vec<PeriodicIntervalSet>) -> Result<Self, CircleError> {
        if c <= Rational::one() {
            return Err(CircleError::CTooSmall);
        }
        if sets.is_empty() {
            return Err(CircleError::NoSets);
        }
        if sets.iter().any(|s| s.period() != sets[0].period()) {
            return Err(CircleError::MixedPeriods);
        }
        Ok(CKSequence { c, sets })
    }

    pub fn c(&self) -> &Rational {
        &self.c
    }

    pub fn k(&self) -> usize {
        self.sets.len()
    }

    pub fn period(&self) -> &Rational {
        self.sets[0].period()
    }

    pub fn sets(&self) -> &[PeriodicIntervalSet] {
        &self.sets
    }
}

/// Which layered-cover condition failed, with a witness.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CKVerdict {
    Ok,
    IntervalTooLong { set: usize, start: Rational, len: Rational, cap: Rational },
    GapNotOne { set: usize, after: Rational, gap: Rational },
    CoverGap { witness: Rational },
}

impl CKVerdict {
    pub fn is_ok(&self) -> bool {
        matches!(self, CKVerdict::Ok)
    }
}

/// Exact check of all three conditions plus full cover.
pub fn verify_ck(seq: &CKSequence) -> CKVerdict {
    let one = Rational::one();
    for (idx, set) in seq.sets.iter().enumerate() {
        let i = idx + 1;
        let cap = Rational::one() / (&seq.c * rat_int(i as i64) - &one);
        if set.is_empty() {
            continue;
        }
        if set.is_full() {
            // a single bi-infinite interval: no consecutive pairs, but the
            // length condition still applies to the covering interval
            if set.period() > &cap {
                return CKVerdict::IntervalTooLong {
                    set: i,
                    start: Rational::zero(),
                    len: set.period().clone(),
                    cap,
                };
            }
            continue;
        }
        for (s, e) in set.arcs() {
            let len = &e - &s;
            if len > cap {
                return CKVerdict::IntervalTooLong { set: i, start: s, len, cap };
            }
        }
        for (after, gap) in set.gaps() {
            if gap != one {
                return CKVerdict::GapNotOne { set: i, after, gap };
            }
        }
    }
    match interval_set_covers_line(&seq.sets, seq.period()) {
        Ok(CoverVerdict::Covers) => CKVerdict::Ok,
        Ok(CoverVerdict::Gap { witness }) => CKVerdict::CoverGap { witness },
        Err(_) => unreachable!("sets share one period"),
    }
}

/// Clockwise motion: positions are non-decreasing in unwrapped coordinates
/// and advance by `lift` (a whole number of laps) per time period.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonotoneTrajectory {
    period: Rational,
    points: Vec<(Rational, Rational)>,
    lift: Rational,
}

impl MonotoneTrajectory {
    pub fn new(
        period: Rational,
        points: Vec<(Rational, Rational)>,
        lift: Rational,
    ) -> Result<Self, String> {
        if !period.is_positive() {
            return Err("period must be positive".into());
        }
        if points.is_empty() {
            return Err("at least one breakpoint".into());
        }
        for (i, (t, _)) in points.iter().enumerate() {
            if t < &Rational::zero() || t >= &period {
                return Err("breakpoint times must lie in [0, period)".into());
            }
            if i > 0 && points[i - 1].0 >= *t {
                return Err("breakpoint times must be strictly increasing".into());
            }
            if i > 0 && points[i - 1].1 > points[i].1 {
                return Err("positions must be non-decreasing".into());
            }
        }
        if lift.is_negative() {
            return Err("lift must be non-negative".into());
        }
        if &points[0].1 + &lift < points[points.len() - 1].1 {
            return Err("wrap segment would move backwards".into());
        }
        Ok(MonotoneTrajectory { period, points, lift })
    }

    pub fn stationary(period: Rational, x: Rational) -> Self {
        MonotoneTrajectory::new(period, vec![(Rational::zero(), x)], Rational::zero())
            .expect("valid stationary motion")
    }

    pub fn period(&self) -> &Rational {
        &self.period
    }

    pub fn points(&self) -> &[(Rational, Rational)] {
        &self.points
    }

    pub fn lift(&self) -> &Rational {
        &self.lift
    }

    /// Segments over `[0, common)` in unwrapped coordinates; copy `j` is
    /// shifted by `j * lift` in position.
    pub fn segments_over(&self, common: &Rational) -> Vec<crate::trajectory::Segment> {
        debug_assert!(divides(&self.period, common));
        let copies: u64 = crate::rational::exact_quotient(common, &self.period)
            .try_into()
            .expect("period ratio fits in u64");
        let n = self.points.len();
        let mut out = Vec::with_capacity(n * copies as usize);
        for j in 0..copies {
            let t_shift = rat_int(j as i64) * &self.period;
            let x_shift = rat_int(j as i64) * &self.lift;
            for i in 0..n {
                let (t0, x0) = (&self.points[i].0 + &t_shift, &self.points[i].1 + &x_shift);
                let (t1, x1) = if i + 1 < n {
                    (&self.points[i + 1].0 + &t_shift, &self.points[i + 1].1 + &x_shift)
                } else {
                    (
                        &self.points[0].0 + &t_shift + &self.period,
                        &self.points[0].1 + &x_shift + &self.lift,
                    )
                };
                out.push(crate::trajectory::Segment { t0, t1, x0, x1 });
            }
        }
        out
    }

    pub fn max_speed(&self) -> Rational {
        self.segments_over(&self.period.clone())
            .iter()
            .map(|s| s.speed())
            .max()
            .expect("non-empty")
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CircleAgent {
    pub speed: Rational,
    pub motion: MonotoneTrajectory,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CircleSchedule {
    perimeter: Rational,
    idle: Rational,
    period: Rational,
    agents: Vec<CircleAgent>,
}

impl CircleSchedule {
    pub fn new(
        perimeter: Rational,
        idle: Rational,
        period: Rational,
        agents: Vec<CircleAgent>,
    ) -> Result<Self, CircleError> {
        if !perimeter.is_positive() || !idle.is_positive() || !period.is_positive() {
            return Err(CircleError::NonpositiveParameter);
        }
        if agents.is_empty() {
            return Err(CircleError::NoAgents);
        }
        for (i, a) in agents.iter().enumerate() {
            if !divides(a.motion.period(), &period) {
                return Err(CircleError::PeriodMismatch(i));
            }
            if a.motion.max_speed() > a.speed {
                return Err(CircleError::SpeedExceeded(i));
            }
            if !divides(&perimeter, a.motion.lift()) {
                return Err(CircleError::BadLift(i));
            }
        }
        Ok(CircleSchedule { perimeter, idle, period, agents })
    }

    pub fn perimeter(&self) -> &Rational {
        &self.perimeter
    }

    pub fn idle(&self) -> &Rational {
        &self.idle
    }

    pub fn period(&self) -> &Rational {
        &self.period
    }

    pub fn agents(&self) -> &[CircleAgent] {
        &self.agents
    }
}

/// The baseline: the fastest `r` agents cruise at speed `v_r`, equidistant
/// on a circle of perimeter `r * v_r`; `r` is chosen to maximize that value
/// (smallest `r` on ties). Remaining agents park at 0.
pub fn runners_strategy(speeds: &[Rational]) -> (Rational, CircleSchedule) {
    assert!(!speeds.is_empty(), "at least one agent");
    for w in speeds.windows(2) {
        assert!(w[0] >= w[1], "speeds must be sorted descending");
    }
    assert!(speeds.iter().all(|v| v.is_positive()));
    let mut best_r = 1usize;
    let mut best = speeds[0].clone();
    for (idx, v) in speeds.iter().enumerate() {
        let r = idx + 1;
        let value = rat_int(r as i64) * v;
        if value > best {
            best = value;
            best_r = r;
        }
    }
    let perimeter = best;
    let v_r = &speeds[best_r - 1];
    let period = &perimeter / v_r; // one full lap
    let mut agents = Vec::with_capacity(speeds.len());
    for (idx, v) in speeds.iter().enumerate() {
        let motion = if idx < best_r {
            let start = rat_int(idx as i64) * v_r;
            MonotoneTrajectory::new(
                period.clone(),
                vec![(Rational::zero(), start)],
                perimeter.clone(),
            )
            .expect("cruising motion is valid")
        } else {
            MonotoneTrajectory::stationary(period.clone(), Rational::zero())
        };
        agents.push(CircleAgent { speed: v.clone(), motion });
    }
    let schedule = CircleSchedule::new(perimeter.clone(), rat_int(1), period, agents)
        .expect("runners schedule is valid");
    (perimeter, schedule)
}

/// Exact coverage decision on the torus (x modulo the perimeter, t modulo
/// the period) by the same critical-x sweep as the fence verifier.
pub fn verify_circle_coverage(schedule: &CircleSchedule) -> CoverageVerdict {
    sweep::verify_coverage(&circle_coverage_problem(schedule))
}

pub(crate) fn circle_coverage_problem(schedule: &CircleSchedule) -> CoverageProblem {
    let c = &schedule.perimeter;
    let mut moving = Vec::new();
    let mut stationary = Vec::new();
    for agent in &schedule.agents {
        for seg in agent.motion.segments_over(&schedule.period) {
            if seg.is_stationary() {
                stationary.push(StationaryPiece {
                    x: rem_euclid(&seg.x0, c),
                    t0: seg.t0,
                    t1: seg.t1,
                });
                continue;
            }
            // split the climb [x0, x1] into perimeter tiles
            let beta = (&seg.t1 - &seg.t0) / (&seg.x1 - &seg.x0);
            let alpha = &seg.t0 - &beta * &seg.x0;
            let mut j = (&seg.x0 / c).floor();
            loop {
                let tile_lo = &j * c;
                let tile_hi = &tile_lo + c;
                if tile_lo >= seg.x1 && seg.x1 != tile_lo {
                    break;
                }
                let lo = if seg.x0 > tile_lo { seg.x0.clone() } else { tile_lo.clone() };
                let hi = if seg.x1 < tile_hi { seg.x1.clone() } else { tile_hi.clone() };
                if lo <= hi {
                    // circle coordinates: x = absolute - j*c
                    let shift = &j * c;
                    moving.push(VisitLinePiece {
                        x_lo: &lo - &shift,
                        x_hi: &hi - &shift,
                        alpha: &alpha + &beta * &shift,
                        beta: beta.clone(),
                    });
                }
                if tile_hi >= seg.x1 {
                    break;
                }
                j += Rational::one();
            }
        }
    }
    CoverageProblem {
        x_lo: Rational::zero(),
        x_hi: c.clone(),
        period: schedule.period.clone(),
        idle: schedule.idle.clone(),
        moving,
        stationary,
    }
}

/// Builds a circle schedule of perimeter `c/2` from a layered cover: agent
/// `i` (speed `1/i`) realizes the halved family `S_i / 2` as its covered
/// time set. For each halved interval `[α, β]` the agent is at the sweep
/// point `c·α mod (c/2)` at time `α`, tracks at full speed until it has
/// covered `β`, and then waits: the sweep comes back around exactly when the
/// next interval starts.
pub fn ck_to_circle_schedule(seq: &CKSequence) -> Result<CircleSchedule, CircleError> {
    let verdict = verify_ck(seq);
    if !verdict.is_ok() {
        return Err(CircleError::InvalidSequence(format!("{verdict:?}")));
    }
    let c = &seq.c;
    let perimeter = c / rat_int(2);
    let period = seq.period() / rat_int(2);
    let mut agents = Vec::with_capacity(seq.k());
    for (idx, set) in seq.sets.iter().enumerate() {
        let i = idx + 1;
        let speed = rat(1, i as i64);
        if set.is_empty() {
            agents.push(CircleAgent {
                speed,
                motion: MonotoneTrajectory::stationary(period.clone(), Rational::zero()),
            });
            continue;
        }
        if set.is_full() {
            // the family alone promises every time: realize it as a plain
            // full-speed cruiser, whose own period is one lap; the verifier
            // remains the ground truth for whether this patrols
            let lap = &perimeter / &speed;
            let motion = MonotoneTrajectory::new(
                lap,
                vec![(Rational::zero(), Rational::zero())],
                perimeter.clone(),
            )
            .expect("cruiser is valid");
            agents.push(CircleAgent { speed, motion });
            continue;
        }
        // absolute (unwrapped) breakpoints over one halved period, gauge
        // fixed at position c*α1 for the first interval
        let arcs = set.arcs();
        let mut abs_points: Vec<(Rational, Rational)> = Vec::new();
        let mut pos = c * &arcs[0].0 / rat_int(2);
        for (a, b) in &arcs {
            let alpha = a / rat_int(2);
            let beta = b / rat_int(2);
            if alpha == beta {
                continue; // degenerate: the agent just sits at the sweep point
            }
            let travel = c * (&beta - &alpha);
            let burst_end = &alpha + rat_int(i as i64) * c * (&beta - &alpha);
            abs_points.push((alpha, pos.clone()));
            pos += travel;
            abs_points.push((burst_end, pos.clone()));
        }
        let lift = c * &set.measure() / rat_int(2);
        let motion = if abs_points.is_empty() {
            MonotoneTrajectory::stationary(period.clone(), pos)
        } else {
            // reduce times into [0, period), dropping duplicate joints
            let mut reduced: Vec<(Rational, Rational)> = Vec::with_capacity(abs_points.len());
            for (t, x) in abs_points {
                let wraps = (&t / &period).floor();
                let t_red = &t - &wraps * &period;
                let x_red = &x - &wraps * &lift;
                reduced.push((t_red, x_red));
            }
            reduced.sort_by(|a, b| a.0.cmp(&b.0));
            reduced.dedup_by(|a, b| a.0 == b.0);
            MonotoneTrajectory::new(period.clone(), reduced, lift.clone())
                .expect("tracking construction is monotone")
        };
        let agent = CircleAgent { speed, motion };
        if agent.motion.max_speed() > agent.speed {
            return Err(CircleError::AgentTooFast(i - 1));
        }
        agents.push(agent);
    }
    let common = agents.iter().fold(period.clone(), |acc, a| {
        if crate::rational::divides(a.motion.period(), &acc) {
            acc
        } else {
            crate::rational::rational_lcm(&acc, a.motion.period())
        }
    });
    CircleSchedule::new(perimeter, rat_int(1), common, agents)
}

/// Extracts, per agent, the set of times `t` such that the agent visits the
/// sweep point `c·t mod L` during `[t, t + L/c]` (`L` the perimeter). The
/// union covering the whole line is necessary for patrolling; on failure the
/// uncovered time is reported. The extracted families use the schedule
/// period.
pub fn circle_schedule_to_ck(
    schedule: &CircleSchedule,
    c: &Rational,
) -> Result<CKSequence, CircleError> {
    if *c <= Rational::one() {
        return Err(CircleError::CTooSmall);
    }
    let l = &schedule.perimeter;
    let period = &schedule.period;
    let window = l / c;
    let mut sets = Vec::with_capacity(schedule.agents.len());
    for (idx, agent) in schedule.agents.iter().enumerate() {
        // covered sets repeat with the schedule period only when the sweep
        // advances a whole number of laps per period relative to the agent
        let drift = c * period - agent.motion.lift();
        if !divides(l, &drift) {
            return Err(CircleError::SweepIncompatible(idx));
        }
        let mut arcs: Vec<(Rational, Rational)> = Vec::new();
        let mut full = false;
        for seg in agent.motion.segments_over(period) {
            let v = if seg.t1 == seg.t0 {
                Rational::zero()
            } else {
                (&seg.x1 - &seg.x0) / (&seg.t1 - &seg.t0)
            };
            // t covered via this segment at lap m:
            //   t(t') = (pos(t') + mL)/c  for t' in [t0, t1]
            //   with  t' - window <= t(t') <= t'
            let m_lo = crate::rational::ceil_int(&((c * (&seg.t0 - &window) - &seg.x1) / l));
            let m_hi = crate::rational::floor_int(&((c * &seg.t1 - &seg.x0) / l));
            let mut m = m_lo.clone();
            while m <= m_hi {
                let mr = Rational::from_integer(m.clone());
                let shift = &mr * l;
                // t(t') = (x0 + v (t' - t0) + mL)/c ; constraints linear in t':
                // (i)  t(t') <= t'            <=>  base <= (c - v) t'
                // (ii) t(t') >= t' - window   <=>  (c - v) t' <= base + c*window
                // with base = x0 - v t0 + mL; t(t') is non-decreasing in t'
                let base = &seg.x0 - &v * &seg.t0 + &shift;
                let c_minus_v = c - &v;
                let bounds = if c_minus_v.is_positive() {
                    Some((&base / &c_minus_v, (&base + c * &window) / &c_minus_v))
                } else if c_minus_v.is_zero() {
                    // the agent matches the sweep: either the whole segment
                    // tracks this lap or none of it does
                    if !base.is_positive() && !(&base + c * &window).is_negative() {
                        None // unconstrained
                    } else {
                        m += num::bigint::BigInt::one();
                        continue;
                    }
                } else {
                    // faster than the sweep: the inequalities flip
                    Some(((&base + c * &window) / &c_minus_v, &base / &c_minus_v))
                };
                let (lo, hi) = match bounds {
                    None => (seg.t0.clone(), seg.t1.clone()),
                    Some((w0, w1)) => (
                        if w0 > seg.t0 { w0 } else { seg.t0.clone() },
                        if w1 < seg.t1 { w1 } else { seg.t1.clone() },
                    ),
                };
                if lo <= hi {
                    let t_lo = (&seg.x0 + &v * (&lo - &seg.t0) + &shift) / c;
                    let t_hi = (&seg.x0 + &v * (&hi - &seg.t0) + &shift) / c;
                    if &t_hi - &t_lo >= *period {
                        full = true;
                        break;
                    }
                    let s = rem_euclid(&t_lo, period);
                    let e = &s + (&t_hi - &t_lo);
                    arcs.push((s, e));
                }
                m += num::bigint::BigInt::one();
            }
            if full {
                break;
            }
        }
        let set = if full {
            PeriodicIntervalSet::full(period.clone())
        } else {
            arcs_to_set(period, arcs)
        };
        sets.push(set);
    }
    match interval_set_covers_line(&sets, period) {
        Ok(CoverVerdict::Covers) => {}
        Ok(CoverVerdict::Gap { witness }) => {
            let witness_x = rem_euclid(&(c * &witness), l);
            return Err(CircleError::NotPatrolling { witness_x, witness_t: witness });
        }
        Err(_) => unreachable!("sets share one period"),
    }
    CKSequence::new(c.clone(), sets)
}

fn arcs_to_set(period: &Rational, arcs: Vec<(Rational, Rational)>) -> PeriodicIntervalSet {
    // arcs are (start in [0, P), end >= start); ends may exceed the period
    let mut pairs = Vec::with_capacity(arcs.len());
    for (s, e) in arcs {
        if &e - &s >= *period {
            return PeriodicIntervalSet::full(period.clone());
        }
        let hi = rem_euclid(&e, period);
        pairs.push((s, hi));
    }
    PeriodicIntervalSet::new(period.clone(), pairs).expect("endpoints reduced")
}

/// Sequence file format: header
/// `c=<rational> k=<int> period=<rational> granularity=<rational>`,
/// then one line per family: `i: lo,hi lo,hi ...`.
pub fn format_ck_sequence(seq: &CKSequence, granularity: &Rational) -> String {
    let mut out = format!(
        "c={} k={} period={} granularity={}\n",
        seq.c,
        seq.k(),
        seq.period(),
        granularity
    );
    for (idx, set) in seq.sets.iter().enumerate() {
        out.push_str(&format!("{}:", idx + 1));
        for (lo, hi) in set.intervals() {
            out.push_str(&format!(" {lo},{hi}"));
        }
        out.push('\n');
    }
    out
}

pub fn parse_ck_sequence(text: &str) -> Result<(CKSequence, Rational), ScheduleParseError> {
    let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
    let (lno, header) = lines.next().ok_or_else(|| perr(1, "empty sequence"))?;
    let mut c = None;
    let mut k = None;
    let mut period = None;
    let mut granularity = None;
    for tok in header.split_whitespace() {
        let (key, val) = tok
            .split_once('=')
            .ok_or_else(|| perr(lno + 1, format!("malformed header token `{tok}`")))?;
        match key {
            "c" => c = Some(crate::rational::parse_rational(val).map_err(|e| perr(lno + 1, e.to_string()))?),
            "k" => k = Some(val.parse::<usize>().map_err(|_| perr(lno + 1, "malformed k"))?),
            "period" => {
                period =
                    Some(crate::rational::parse_rational(val).map_err(|e| perr(lno + 1, e.to_string()))?)
            }
            "granularity" => {
                granularity =
                    Some(crate::rational::parse_rational(val).map_err(|e| perr(lno + 1, e.to_string()))?)
            }
            _ => return Err(perr(lno + 1, format!("unknown header key `{key}`"))),
        }
    }
    let c = c.ok_or_else(|| perr(lno + 1, "missing c"))?;
    let k = k.ok_or_else(|| perr(lno + 1, "missing k"))?;
    let period = period.ok_or_else(|| perr(lno + 1, "missing period"))?;
    let granularity = granularity.ok_or_else(|| perr(lno + 1, "missing granularity"))?;
    let mut sets = Vec::with_capacity(k);
    for want in 1..=k {
        let (lno_s, line) = lines
            .next()
            .ok_or_else(|| perr(lno + 1, format!("missing family {want}")))?;
        let (label, rest) = line
            .split_once(':')
            .ok_or_else(|| perr(lno_s + 1, "expected `<i>: ...`"))?;
        let got: usize = label
            .trim()
            .parse()
            .map_err(|_| perr(lno_s + 1, "malformed family index"))?;
        if got != want {
            return Err(perr(lno_s + 1, format!("expected family {want}, got {got}")));
        }
        let mut pairs = Vec::new();
        let mut full = false;
        for tok in rest.split_whitespace() {
            let (lo, hi) = tok
                .split_once(',')
                .ok_or_else(|| perr(lno_s + 1, format!("malformed interval `{tok}`")))?;
            let lo = crate::rational::parse_rational(lo).map_err(|e| perr(lno_s + 1, e.to_string()))?;
            let hi = crate::rational::parse_rational(hi).map_err(|e| perr(lno_s + 1, e.to_string()))?;
            if lo.is_zero() && hi == period {
                full = true;
            }
            pairs.push((lo, hi));
        }
        let set = if full {
            PeriodicIntervalSet::full(period.clone())
        } else {
            PeriodicIntervalSet::new(period.clone(), pairs).map_err(|e| perr(lno_s + 1, e.to_string()))?
        };
        sets.push(set);
    }
    if let Some((extra, _)) = lines.next() {
        return Err(perr(extra + 1, "trailing content after last family"));
    }
    let seq = CKSequence::new(c, sets).map_err(|e| perr(0, e.to_string()))?;
    Ok((seq, granularity))
}

/// Schedule file format mirrors the fence one: header `circle L T P k`, per
/// agent `v= <speed>` then `t,x` pairs (unwrapped positions) and the lap
/// shift is recovered from the wrap (`lift` is appended as a final `w=` token
/// on the speed line).
pub fn format_circle_schedule(s: &CircleSchedule) -> String {
    let mut out = format!("circle {} {} {} {}\n", s.perimeter, s.idle, s.period, s.agents.len());
    for a in &s.agents {
        out.push_str(&format!("v= {} w= {}\n", a.speed, a.motion.lift()));
        let pts = if a.motion.period() == &s.period {
            a.motion.points().to_vec()
        } else {
            // unroll to the common period, adjusting lifts per copy
            let copies: u64 = crate::rational::exact_quotient(&s.period, a.motion.period())
                .try_into()
                .expect("ratio fits");
            let mut v = Vec::new();
            for j in 0..copies {
                let ts = rat_int(j as i64) * a.motion.period();
                let xs = rat_int(j as i64) * a.motion.lift();
                for (t, x) in a.motion.points() {
                    v.push((t + &ts, x + &xs));
                }
            }
            v
        };
        let pairs: Vec<String> = pts.iter().map(|(t, x)| format!("{t},{x}")).collect();
        out.push_str(&pairs.join(" "));
        out.push('\n');
    }
    out
}

pub fn parse_circle_schedule(text: &str) -> Result<CircleSchedule, ScheduleParseError> {
    // reuse the fence line structure; the `v=` line additionally carries `w=`
    let mut normalized = String::new();
    let mut lifts: Vec<Rational> = Vec::new();
    for line in text.lines() {
        let trimmed = line.trim();
        if let Some(rest) = trimmed.strip_prefix("v=") {
            if let Some((speed, w)) = rest.split_once("w=") {
                normalized.push_str(&format!("v= {}\n", speed.trim()));
                lifts.push(
                    crate::rational::parse_rational(w).map_err(|e| perr(0, e.to_string()))?,
                );
                continue;
            }
        }
        normalized.push_str(line);
        normalized.push('\n');
    }
    let text2 = normalized.replacen("circle", "fence", 1);
    let (header, agents) = parse_schedule_text(&text2, "fence")?;
    let [perimeter, idle, period] = header;
    if lifts.len() != agents.len() {
        return Err(perr(1, "every agent needs a `w=` lap shift"));
    }
    let agents = agents
        .into_iter()
        .zip(lifts)
        .map(|((speed, points, line), lift)| {
            let motion = MonotoneTrajectory::new(period.clone(), points, lift)
                .map_err(|e| perr(line, e))?;
            Ok(CircleAgent { speed, motion })
        })
        .collect::<Result<Vec<_>, ScheduleParseError>>()?;
    CircleSchedule::new(perimeter, idle, period, agents).map_err(|e| perr(0, e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(period: i64, denom: i64, ivs: &[(i64, i64)]) -> PeriodicIntervalSet {
        PeriodicIntervalSet::new(
            rat_int(period),
            ivs.iter().map(|&(l, h)| (rat(l, denom), rat(h, denom))).collect(),
        )
        .unwrap()
    }

    #[test]
    fn runners_single_agent() {
        let (p, s) = runners_strategy(&[rat_int(1)]);
        assert_eq!(p, rat_int(1));
        assert!(verify_circle_coverage(&s).is_covered());
    }

    #[test]
    fn runners_picks_best_r() {
        let (p, _) = runners_strategy(&[rat_int(2), rat_int(1)]);
        assert_eq!(p, rat_int(2));
        let (p, s) = runners_strategy(&[rat_int(1), rat(1, 2), rat(1, 3)]);
        assert_eq!(p, rat_int(1));
        // tie between r = 1, 2, 3 broken to the smallest: one cruiser
        assert_eq!(s.agents()[1].motion.lift(), &Rational::zero());
        assert!(verify_circle_coverage(&s).is_covered());
    }

    #[test]
    fn one_slow_agent_fails_big_circle() {
        let motion = MonotoneTrajectory::new(
            rat_int(2),
            vec![(Rational::zero(), Rational::zero())],
            rat_int(2),
        )
        .unwrap();
        let s = CircleSchedule::new(
            rat_int(2),
            rat_int(1),
            rat_int(2),
            vec![CircleAgent { speed: rat_int(1), motion }],
        )
        .unwrap();
        assert!(!verify_circle_coverage(&s).is_covered());
    }

    #[test]
    fn ck_degenerate_full_cover() {
        // period 1/2 <= 1/(c-1) for c = 2: a single full set is a valid cover
        let seq = CKSequence::new(
            rat_int(2),
            vec![PeriodicIntervalSet::full(rat(1, 2))],
        )
        .unwrap();
        assert!(verify_ck(&seq).is_ok());
    }

    #[test]
    fn ck_single_family_has_uncoverable_gap() {
        // one family with gaps exactly 1 can never cover the line
        let seq = CKSequence::new(rat_int(2), vec![set(2, 1, &[(0, 1)])]).unwrap();
        match verify_ck(&seq) {
            CKVerdict::CoverGap { witness } => {
                assert!(witness > rat_int(1) && witness < rat_int(2));
            }
            v => panic!("expected cover gap, got {v:?}"),
        }
    }

    #[test]
    fn ck_length_and_gap_violations() {
        // c = 2, family 1 cap is 1: a length-3/2 interval violates it
        let seq = CKSequence::new(rat_int(2), vec![set(4, 2, &[(0, 3)])]).unwrap();
        assert!(matches!(verify_ck(&seq), CKVerdict::IntervalTooLong { set: 1, .. }));
        // gaps must be exactly 1: [0, 1/2] then [2, 5/2] has a gap of 3/2
        let seq = CKSequence::new(rat_int(2), vec![set(4, 2, &[(0, 1), (4, 5)])]).unwrap();
        assert!(matches!(verify_ck(&seq), CKVerdict::GapNotOne { set: 1, .. }));
    }

    #[test]
    fn hand_built_two_family_cover_converts() {
        // c = 3/2: caps are 2 and 1/2. Period 2: family 1 covers [0, 1],
        // family 2 covers [3/2, 2] u [1, ...]: build a genuine cover with
        // gaps exactly 1 in each family.
        // family 1: [0, 1] (gap 1 at seam), family 2: [1, 3/2] and wrap
        // [5/2->..]: gaps exactly 1 means the next starts at 5/2 == 1/2 mod 2:
        // [1, 3/2] then [1/2 ... no: use period 2 with intervals [1,3/2] and
        // [-1/2,0] => [3/2,0] wrapping: gap from 3/2 end... keep simple:
        // family 2 = [1, 2) as two touching halves is merged; instead cover
        // the hole (1, 2) with two families of cap 1/2 each.
        let f1 = set(2, 1, &[(0, 1)]);
        let f2 = set(2, 2, &[(2, 3)]); // [1, 3/2], gap 1 to [5/2, 3] = [1/2, 1] mod 2
        let f2 = f2.union(&set(2, 2, &[(1, 2)])); // add [1/2, 1]
        let f3 = set(2, 2, &[(3, 4)]).union(&set(2, 2, &[(0, 1)])); // [3/2, 2] + [0, 1/2]
        let seq = CKSequence::new(rat(3, 2), vec![f1, f2, f3]).unwrap();
        assert!(verify_ck(&seq).is_ok(), "{:?}", verify_ck(&seq));
        let schedule = ck_to_circle_schedule(&seq).unwrap();
        assert_eq!(schedule.perimeter(), &rat(3, 4));
        assert!(verify_circle_coverage(&schedule).is_covered());
    }

    #[test]
    fn extraction_from_runners_pair() {
        // two unit-speed agents on perimeter 2 = c: covered families have
        // intervals of length 1 gapped by exactly 1, and they cover the line
        let (p, s) = runners_strategy(&[rat_int(1), rat_int(1)]);
        assert_eq!(p, rat_int(2));
        let seq = circle_schedule_to_ck(&s, &rat_int(2)).unwrap();
        assert_eq!(seq.k(), 2);
        for set in seq.sets() {
            for (lo, hi) in set.arcs() {
                assert_eq!(&hi - &lo, rat_int(1));
            }
            for (_, gap) in set.gaps() {
                assert_eq!(gap, rat_int(1));
            }
        }
    }

    #[test]
    fn extraction_fast_cruiser_is_full() {
        // a cruiser faster than the sweep covers every time
        let motion = MonotoneTrajectory::new(
            rat_int(1),
            vec![(Rational::zero(), Rational::zero())],
            rat_int(3),
        )
        .unwrap();
        let s = CircleSchedule::new(
            rat_int(1),
            rat_int(1),
            rat_int(1),
            vec![CircleAgent { speed: rat_int(3), motion }],
        )
        .unwrap();
        let seq = circle_schedule_to_ck(&s, &rat_int(2)).unwrap();
        assert!(seq.sets()[0].is_full());
    }

    #[test]
    fn schedule_text_round_trip() {
        let (_, s) = runners_strategy(&[rat_int(2), rat_int(1)]);
        let text = format_circle_schedule(&s);
        let parsed = parse_circle_schedule(&text).unwrap();
        assert_eq!(s, parsed);
    }
}
