//! Fence patrolling: schedules on a segment `[0, L]` with idle time `T`.
//!
//! Contains the partition baseline (agent `i` oscillates in its own segment
//! of length `v_i / 2`), the dense two-tier construction that beats the
//! baseline by a ratio approaching 4/3, and the exact coverage verifier.

use crate::rational::{divides, parse_rational, rat, rat_int, Rational};
use crate::sweep::{self, CoverageProblem, CoverageVerdict, StationaryPiece, VisitLinePiece};
use crate::trajectory::{trajectory_speed_ok, Trajectory};
use num::{Signed, Zero};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FenceAgent {
    pub speed: Rational,
    pub trajectory: Trajectory,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FenceSchedule {
    length: Rational,
    idle: Rational,
    period: Rational,
    agents: Vec<FenceAgent>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FenceError {
    #[error("fence length must be non-negative")]
    NegativeLength,
    #[error("idle time and period must be positive")]
    NonpositiveTime,
    #[error("schedule needs at least one agent")]
    NoAgents,
    #[error("agent {0} exceeds its speed limit")]
    SpeedExceeded(usize),
    #[error("agent {0}'s trajectory period does not divide the common period")]
    PeriodMismatch(usize),
}

impl FenceSchedule {
    pub fn new(
        length: Rational,
        idle: Rational,
        period: Rational,
        agents: Vec<FenceAgent>,
    ) -> Result<Self, FenceError> {
        if length.is_negative() {
            return Err(FenceError::NegativeLength);
        }
        if !idle.is_positive() || !period.is_positive() {
            return Err(FenceError::NonpositiveTime);
        }
        if agents.is_empty() {
            return Err(FenceError::NoAgents);
        }
        for (i, a) in agents.iter().enumerate() {
            if !trajectory_speed_ok(&a.trajectory, &a.speed) {
                return Err(FenceError::SpeedExceeded(i));
            }
            if !divides(a.trajectory.period(), &period) {
                return Err(FenceError::PeriodMismatch(i));
            }
        }
        Ok(FenceSchedule { length, idle, period, agents })
    }

    pub fn length(&self) -> &Rational {
        &self.length
    }

    pub fn idle(&self) -> &Rational {
        &self.idle
    }

    pub fn period(&self) -> &Rational {
        &self.period
    }

    pub fn agents(&self) -> &[FenceAgent] {
        &self.agents
    }

    /// Same schedule with times and lengths scaled by `gamma > 0`; speeds
    /// are unchanged, so validity and coverage verdicts transport.
    pub fn scaled(&self, gamma: &Rational) -> FenceSchedule {
        assert!(gamma.is_positive());
        let agents = self
            .agents
            .iter()
            .map(|a| FenceAgent {
                speed: a.speed.clone(),
                trajectory: Trajectory::new(
                    a.trajectory.period() * gamma,
                    a.trajectory
                        .points()
                        .iter()
                        .map(|(t, x)| (t * gamma, x * gamma))
                        .collect(),
                )
                .expect("scaling preserves validity"),
            })
            .collect();
        FenceSchedule {
            length: &self.length * gamma,
            idle: &self.idle * gamma,
            period: &self.period * gamma,
            agents,
        }
    }

    /// Same schedule declared over a different fence length (used to probe
    /// the verifier's sensitivity).
    pub fn with_length(&self, length: Rational) -> FenceSchedule {
        let mut s = self.clone();
        s.length = length;
        s
    }
}

/// The baseline: the fence is split into `k` consecutive segments, segment
/// `i` of length `v_i / 2`, and agent `i` sweeps its own segment back and
/// forth at full speed. Patrols `L = (v_1 + ... + v_k) / 2` with idle 1.
pub fn partition_strategy(speeds: &[Rational]) -> FenceSchedule {
    assert!(!speeds.is_empty() && speeds.iter().all(|v| v.is_positive()));
    let half = rat(1, 2);
    let mut offset = Rational::zero();
    let mut agents = Vec::with_capacity(speeds.len());
    for v in speeds {
        let seg = v * &half;
        let traj = Trajectory::new(
            rat_int(1),
            vec![
                (Rational::zero(), offset.clone()),
                (half.clone(), &offset + &seg),
            ],
        )
        .expect("oscillator breakpoints are valid");
        agents.push(FenceAgent { speed: v.clone(), trajectory: traj });
        offset += seg;
    }
    FenceSchedule::new(offset, rat_int(1), rat_int(1), agents).expect("partition schedule is valid")
}

/// Parameters of the two-tier construction: fence `[0, L]`, `n + L - 1`
/// unit-speed agents plus `n * L` agents of speed `1/(2n-1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FenceConstructionParams {
    pub n: u64,
    pub l: u64,
}

impl FenceConstructionParams {
    pub fn new(n: u64, l: u64) -> Self {
        assert!(n >= 1 && l >= 1);
        FenceConstructionParams { n, l }
    }
}

/// Fence length the same set of agents would patrol under the partition
/// baseline: `(n + L - 1 + nL/(2n-1)) / 2`.
pub fn partition_length(params: FenceConstructionParams) -> Rational {
    let n = rat_int(params.n as i64);
    let l = rat_int(params.l as i64);
    let two_n_minus_1 = rat_int(2 * params.n as i64 - 1);
    (&n + &l - rat_int(1) + &n * &l / two_n_minus_1) / rat_int(2)
}

/// The construction that patrols `[0, L]` with idle 1 using these agents.
/// Fast agents `A_i` (`-n < i < L`) oscillate between `i` and `i + n - 1/2`
/// starting at `i` at time 0 (some of them step outside the fence, which is
/// legal); slow agents `B_{i,j}` oscillate between `i + 1/2` and `i + 1`,
/// sitting at `i + 1/2` at time `j + 1/2`. Every agent has period `2n - 1`,
/// and all breakpoints share the denominator 2, which keeps the verifier's
/// rational sweep fast.
pub fn build_43_schedule(params: FenceConstructionParams) -> FenceSchedule {
    let n = params.n as i64;
    let l = params.l as i64;
    let period = rat_int(2 * n - 1);
    let half = rat(1, 2);
    let mut agents = Vec::new();

    for i in (-n + 1)..l {
        let lo = rat_int(i);
        let hi = &lo + rat_int(n) - &half;
        let turn = rat_int(n) - &half; // time to travel n - 1/2 at speed 1
        let traj = Trajectory::new(period.clone(), vec![(Rational::zero(), lo), (turn, hi)])
            .expect("fast oscillator is valid");
        agents.push(FenceAgent { speed: rat_int(1), trajectory: traj });
    }

    let slow_speed = rat(1, 2 * n - 1);
    for i in 0..l {
        for j in 0..n {
            let bottom = rat_int(i) + &half;
            let top = rat_int(i + 1);
            let t_bottom = rat_int(j) + &half;
            let t_top = rat_int(j + n); // lands on the seam when j = n - 1
            let points = if j < n - 1 {
                vec![(t_bottom, bottom), (t_top, top)]
            } else {
                vec![(Rational::zero(), top), (rat_int(n) - &half, bottom)]
            };
            let traj = Trajectory::new(period.clone(), points).expect("slow oscillator is valid");
            agents.push(FenceAgent { speed: slow_speed.clone(), trajectory: traj });
        }
    }

    FenceSchedule::new(rat_int(l), rat_int(1), period, agents)
        .expect("two-tier construction is valid")
}

/// Exact coverage decision for a fence schedule via the critical-x sweep.
pub fn verify_fence_coverage(schedule: &FenceSchedule) -> CoverageVerdict {
    sweep::verify_coverage(&coverage_problem(schedule))
}

pub(crate) fn coverage_problem(schedule: &FenceSchedule) -> CoverageProblem {
    let mut moving = Vec::new();
    let mut stationary = Vec::new();
    for agent in &schedule.agents {
        for seg in agent.trajectory.segments_over(&schedule.period) {
            if seg.is_stationary() {
                stationary.push(StationaryPiece { x: seg.x0, t0: seg.t0, t1: seg.t1 });
            } else {
                let beta = (&seg.t1 - &seg.t0) / (&seg.x1 - &seg.x0);
                let alpha = &seg.t0 - &beta * &seg.x0;
                let (x_lo, x_hi) = if seg.x0 <= seg.x1 { (seg.x0, seg.x1) } else { (seg.x1, seg.x0) };
                moving.push(VisitLinePiece { x_lo, x_hi, alpha, beta });
            }
        }
    }
    CoverageProblem {
        x_lo: Rational::zero(),
        x_hi: schedule.length.clone(),
        period: schedule.period.clone(),
        idle: schedule.idle.clone(),
        moving,
        stationary,
    }
}

/// Text form: header `fence L T P k`, then per agent a `v= <speed>` line
/// followed by one line of `t,x` breakpoint pairs. Trajectories whose own
/// period divides the common one are unrolled to the common period, since
/// the format carries a single period.
pub fn format_fence_schedule(s: &FenceSchedule) -> String {
    let mut out = format!("fence {} {} {} {}\n", s.length, s.idle, s.period, s.agents.len());
    for a in &s.agents {
        out.push_str(&format!("v= {}\n", a.speed));
        let pairs: Vec<String> = unrolled_points(&a.trajectory, &s.period)
            .iter()
            .map(|(t, x)| format!("{t},{x}"))
            .collect();
        out.push_str(&pairs.join(" "));
        out.push('\n');
    }
    out
}

pub(crate) fn unrolled_points(
    traj: &Trajectory,
    common: &Rational,
) -> Vec<(Rational, Rational)> {
    if traj.period() == common {
        return traj.points().to_vec();
    }
    let copies: u64 = crate::rational::exact_quotient(common, traj.period())
        .try_into()
        .expect("period ratio fits in u64");
    let mut out = Vec::with_capacity(traj.points().len() * copies as usize);
    for k in 0..copies {
        let shift = rat_int(k as i64) * traj.period();
        for (t, x) in traj.points() {
            out.push((t + &shift, x.clone()));
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("line {line}: {msg}")]
pub struct ScheduleParseError {
    pub line: usize,
    pub msg: String,
}

pub(crate) fn perr(line: usize, msg: impl Into<String>) -> ScheduleParseError {
    ScheduleParseError { line, msg: msg.into() }
}

pub fn parse_fence_schedule(text: &str) -> Result<FenceSchedule, ScheduleParseError> {
    let (header, agents) = parse_schedule_text(text, "fence")?;
    let [length, idle, period] = header;
    let agents = agents
        .into_iter()
        .map(|(speed, points, line)| {
            let trajectory = Trajectory::new(period.clone(), points)
                .map_err(|e| perr(line, e.to_string()))?;
            Ok(FenceAgent { speed, trajectory })
        })
        .collect::<Result<Vec<_>, ScheduleParseError>>()?;
    FenceSchedule::new(length, idle, period, agents).map_err(|e| perr(0, e.to_string()))
}

/// Shared parser for the fence/circle schedule text forms. Returns the three
/// header rationals and per agent `(speed, breakpoints, line_number)`.
pub(crate) fn parse_schedule_text(
    text: &str,
    kind: &str,
) -> Result<([Rational; 3], Vec<(Rational, Vec<(Rational, Rational)>, usize)>), ScheduleParseError>
{
    let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
    let (lno, header) = lines.next().ok_or_else(|| perr(1, "empty schedule"))?;
    let mut toks = header.split_whitespace();
    if toks.next() != Some(kind) {
        return Err(perr(lno + 1, format!("expected `{kind}` header")));
    }
    let mut header_vals = Vec::with_capacity(3);
    for name in ["length", "idle", "period"] {
        let tok = toks.next().ok_or_else(|| perr(lno + 1, format!("missing {name}")))?;
        header_vals.push(parse_rational(tok).map_err(|e| perr(lno + 1, format!("{name}: {e}")))?);
    }
    let k: usize = toks
        .next()
        .ok_or_else(|| perr(lno + 1, "missing agent count"))?
        .parse()
        .map_err(|_| perr(lno + 1, "malformed agent count"))?;
    let mut agents = Vec::with_capacity(k);
    for _ in 0..k {
        let (lno_v, vline) = lines
            .next()
            .ok_or_else(|| perr(lno + 1, "missing agent speed line"))?;
        let speed_tok = vline
            .trim()
            .strip_prefix("v=")
            .ok_or_else(|| perr(lno_v + 1, "expected `v= <speed>`"))?;
        let speed = parse_rational(speed_tok).map_err(|e| perr(lno_v + 1, e.to_string()))?;
        let (lno_b, bline) = lines
            .next()
            .ok_or_else(|| perr(lno_v + 1, "missing breakpoint line"))?;
        let mut points = Vec::new();
        for pair in bline.split_whitespace() {
            let (t, x) = pair
                .split_once(',')
                .ok_or_else(|| perr(lno_b + 1, format!("malformed pair `{pair}`")))?;
            let t = parse_rational(t).map_err(|e| perr(lno_b + 1, e.to_string()))?;
            let x = parse_rational(x).map_err(|e| perr(lno_b + 1, e.to_string()))?;
            points.push((t, x));
        }
        agents.push((speed, points, lno_b + 1));
    }
    if let Some((extra, _)) = lines.next() {
        return Err(perr(extra + 1, "trailing content after last agent"));
    }
    let header: [Rational; 3] = header_vals.try_into().expect("three header values");
    Ok((header, agents))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn partition_single_agent() {
        let s = partition_strategy(&[rat_int(1)]);
        assert_eq!(s.length(), &rat(1, 2));
        assert!(verify_fence_coverage(&s).is_covered());
    }

    #[test]
    fn partition_two_agents() {
        let s = partition_strategy(&[rat_int(1), rat_int(1)]);
        assert_eq!(s.length(), &rat_int(1));
        assert!(verify_fence_coverage(&s).is_covered());
    }

    #[test]
    fn partition_mixed_speeds() {
        let s = partition_strategy(&[rat_int(2), rat_int(1), rat_int(1)]);
        assert_eq!(s.length(), &rat_int(2));
        assert!(verify_fence_coverage(&s).is_covered());
    }

    #[test]
    fn partition_fails_when_inflated() {
        let s = partition_strategy(&[rat_int(1), rat(1, 2)]);
        let inflated = s.with_length(s.length() + rat(1, 100));
        match verify_fence_coverage(&inflated) {
            CoverageVerdict::Gap { x, .. } => assert!(x > *s.length()),
            CoverageVerdict::Covered => panic!("inflated fence reported covered"),
        }
    }

    #[test]
    fn stationary_agent_leaves_gap() {
        let s = FenceSchedule::new(
            rat_int(1),
            rat_int(1),
            rat_int(1),
            vec![FenceAgent {
                speed: rat_int(1),
                trajectory: Trajectory::stationary(rat_int(1), Rational::zero()),
            }],
        )
        .unwrap();
        match verify_fence_coverage(&s) {
            CoverageVerdict::Gap { x, .. } => assert!(x.is_positive()),
            CoverageVerdict::Covered => panic!("stationary agent cannot cover a unit fence"),
        }
    }

    #[test]
    fn partition_length_values() {
        assert_eq!(partition_length(FenceConstructionParams::new(3, 8)), rat(37, 5));
        assert_eq!(partition_length(FenceConstructionParams::new(1, 1)), rat_int(1));
    }

    #[test]
    fn two_tier_figure_case() {
        let s = build_43_schedule(FenceConstructionParams::new(3, 8));
        assert_eq!(s.agents().len(), 10 + 24);
        assert_eq!(s.period(), &rat_int(5));
        assert!(verify_fence_coverage(&s).is_covered());
    }

    #[test]
    fn two_tier_degenerate_case() {
        let s = build_43_schedule(FenceConstructionParams::new(1, 1));
        assert!(verify_fence_coverage(&s).is_covered());
    }

    #[test]
    fn two_tier_fails_when_inflated() {
        let s = build_43_schedule(FenceConstructionParams::new(2, 3));
        let inflated = s.with_length(rat_int(3) + rat(1, 7));
        assert!(!verify_fence_coverage(&inflated).is_covered());
    }

    #[test]
    fn scaling_preserves_verdict() {
        let s = partition_strategy(&[rat_int(1), rat(3, 2)]);
        for gamma in [rat(1, 3), rat(7, 2)] {
            assert!(verify_fence_coverage(&s.scaled(&gamma)).is_covered());
        }
    }

    #[test]
    fn schedule_text_round_trip() {
        let s = build_43_schedule(FenceConstructionParams::new(2, 2));
        let text = format_fence_schedule(&s);
        let parsed = parse_fence_schedule(&text).unwrap();
        assert_eq!(s, parsed);
    }

    #[test]
    fn parse_reports_line_numbers() {
        let err = parse_fence_schedule("fence 1 1 1 1\nv= x\n0,0").unwrap_err();
        assert_eq!(err.line, 2);
    }
}
