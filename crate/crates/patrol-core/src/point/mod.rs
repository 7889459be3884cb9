//! Discretized point patrolling and the machinery around it.
//!
//! An instance is a vector of positive integer revisit intervals
//! `(a_1, ..., a_k)`. A schedule visits the point at every integer tick,
//! each tick served by one agent, and agent `i`'s consecutive visits must be
//! at least `a_i` ticks apart. Instances for which such a schedule exists
//! are *good*, the rest are *bad*; feasibility is decided exactly by a
//! canonicalized cooldown-state search in [`solver`].

mod solver;
mod thresholds;

pub use solver::{solve_discretized, solve_discretized_with_options, Feasibility, SolveStats};
pub use thresholds::{
    alpha_constant, f_sequence_check, for_each_minimal_candidate, minimal_candidates, FCheck,
};

use crate::budget::{Budget, BudgetExceeded};
use crate::rational::{floor_log2, pow2, rat_int, Rational};
use num::bigint::BigInt;
use num::{One, Signed, Zero};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PointError {
    #[error("instance must be non-empty")]
    EmptyInstance,
    #[error("revisit intervals must be positive")]
    ZeroInterval,
    #[error("reciprocal sum of 2^-b must be at least 1")]
    InsufficientDensity,
    #[error("constructed schedule period {0} is too large to materialize")]
    PeriodTooLarge(u64),
    #[error("halving requires every interval at most 2M = {0}")]
    HalveOutOfRange(u64),
}

/// A sorted vector of positive revisit intervals; agents are interchangeable
/// up to their interval, so ascending order is the canonical form.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PointInstance {
    intervals: Vec<u64>,
}

impl PointInstance {
    pub fn new(mut intervals: Vec<u64>) -> Result<Self, PointError> {
        if intervals.is_empty() {
            return Err(PointError::EmptyInstance);
        }
        if intervals.iter().any(|&a| a == 0) {
            return Err(PointError::ZeroInterval);
        }
        intervals.sort_unstable();
        Ok(PointInstance { intervals })
    }

    pub fn intervals(&self) -> &[u64] {
        &self.intervals
    }

    pub fn len(&self) -> usize {
        self.intervals.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Product of the intervals, saturating at `u128::MAX`.
    pub fn product(&self) -> u128 {
        self.intervals
            .iter()
            .fold(1u128, |acc, &a| acc.saturating_mul(a as u128))
    }

    /// Exact reciprocal sum `sum(1 / a_i)`.
    pub fn reciprocal_sum(&self) -> Rational {
        self.intervals
            .iter()
            .map(|&a| Rational::new(BigInt::one(), BigInt::from(a)))
            .sum()
    }
}

impl std::fmt::Display for PointInstance {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "point:")?;
        for a in &self.intervals {
            write!(f, " {a}")?;
        }
        Ok(())
    }
}

/// A periodic assignment of one agent per integer tick.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PeriodicVisitSchedule {
    assignment: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ScheduleInvalid {
    #[error("schedule must assign at least one tick")]
    Empty,
    #[error("agent index {0} out of range")]
    AgentOutOfRange(usize),
    #[error("agent {agent} revisits after {gap} ticks, below its interval {interval}")]
    GapTooSmall { agent: usize, gap: u64, interval: u64 },
}

impl PeriodicVisitSchedule {
    pub fn new(assignment: Vec<usize>) -> Result<Self, ScheduleInvalid> {
        if assignment.is_empty() {
            return Err(ScheduleInvalid::Empty);
        }
        Ok(PeriodicVisitSchedule { assignment })
    }

    pub fn period(&self) -> u64 {
        self.assignment.len() as u64
    }

    pub fn assignment(&self) -> &[usize] {
        &self.assignment
    }

    /// Checks every invariant against an instance: one agent per tick (by
    /// construction) and cyclic revisit gaps of at least `a_i` for agent `i`.
    /// An agent assigned exactly once has gap equal to the period; an agent
    /// never assigned is fine.
    pub fn validate_for(&self, inst: &PointInstance) -> Result<(), ScheduleInvalid> {
        let period = self.period();
        let mut ticks_per_agent: Vec<Vec<u64>> = vec![Vec::new(); inst.len()];
        for (t, &agent) in self.assignment.iter().enumerate() {
            if agent >= inst.len() {
                return Err(ScheduleInvalid::AgentOutOfRange(agent));
            }
            ticks_per_agent[agent].push(t as u64);
        }
        for (agent, ticks) in ticks_per_agent.iter().enumerate() {
            let interval = inst.intervals()[agent];
            for i in 0..ticks.len() {
                let gap = if i + 1 < ticks.len() {
                    ticks[i + 1] - ticks[i]
                } else {
                    ticks[0] + period - ticks[i]
                };
                if gap < interval {
                    return Err(ScheduleInvalid::GapTooSmall { agent, gap, interval });
                }
            }
        }
        Ok(())
    }
}

impl std::fmt::Display for PeriodicVisitSchedule {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "period={}:", self.period())?;
        for i in &self.assignment {
            write!(f, " {i}")?;
        }
        Ok(())
    }
}

/// The continuous variant: positive rational lower bounds on revisit times.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContinuousPointInstance {
    intervals: Vec<Rational>,
}

impl ContinuousPointInstance {
    pub fn new(mut intervals: Vec<Rational>) -> Result<Self, PointError> {
        if intervals.is_empty() {
            return Err(PointError::EmptyInstance);
        }
        if intervals.iter().any(|a| !a.is_positive()) {
            return Err(PointError::ZeroInterval);
        }
        intervals.sort();
        Ok(ContinuousPointInstance { intervals })
    }

    pub fn intervals(&self) -> &[Rational] {
        &self.intervals
    }

    pub fn reciprocal_sum(&self) -> Rational {
        self.intervals.iter().map(|a| Rational::one() / a).sum()
    }

    /// The discretized instance whose goodness decides whether idle time `t`
    /// is achievable: intervals `ceil(a_i / t)`.
    pub fn discretized_for_idle(&self, t: &Rational) -> PointInstance {
        let intervals = self
            .intervals
            .iter()
            .map(|a| {
                let c = crate::rational::ceil_int(&(a / t));
                u64::try_from(c).expect("discretized interval fits in u64")
            })
            .collect();
        PointInstance::new(intervals).expect("non-empty positive")
    }
}

/// False means certainly bad: the reciprocal sum is below 1, so the agents
/// cannot serve one visit per tick even in aggregate.
pub fn necessary_condition(inst: &PointInstance) -> bool {
    inst.reciprocal_sum() >= Rational::one()
}

/// Constructive schedule for intervals `(2^{b_1}, ..., 2^{b_k})` with
/// `sum 2^{-b_i} >= 1`: a greedy subset of the agents with reciprocal sum
/// exactly 1 is arranged into disjoint dyadic residue classes (two agents of
/// interval `2d` can stand in for one of interval `d`, unfolded here into an
/// explicit assignment). The period is the largest `2^{b_i}` actually used.
pub fn power_of_two_schedule(exponents: &[u32]) -> Result<PeriodicVisitSchedule, PointError> {
    if exponents.is_empty() {
        return Err(PointError::EmptyInstance);
    }
    let total: Rational = exponents.iter().map(|&b| pow2(-(b as i64))).sum();
    if total < Rational::one() {
        return Err(PointError::InsufficientDensity);
    }
    // ascending exponent = descending weight; the running sum stays a
    // multiple of the current weight, so the greedy subset lands exactly on 1
    let mut order: Vec<usize> = (0..exponents.len()).collect();
    order.sort_by_key(|&i| (exponents[i], i));
    let one = Rational::one();
    let mut acc = Rational::zero();
    let mut chosen: Vec<(usize, u32, u64)> = Vec::new(); // (agent, b, residue)
    let mut max_period: u64 = 1;
    for &i in &order {
        let b = exponents[i];
        let w = pow2(-(b as i64));
        if &acc + &w <= one {
            if b >= 26 {
                return Err(PointError::PeriodTooLarge(1u64 << b.min(63)));
            }
            // residue = bit reversal of the dyadic offset acc = m / 2^b
            let m_big = crate::rational::floor_int(&(&acc * pow2(b as i64)));
            let m = u64::try_from(m_big).expect("offset numerator below 2^26");
            let residue = reverse_bits(m, b);
            chosen.push((i, b, residue));
            max_period = max_period.max(1u64 << b);
            acc += w;
            if acc == one {
                break;
            }
        }
    }
    assert_eq!(acc, one, "greedy dyadic subset must reach exactly 1");
    let mut assignment = vec![usize::MAX; max_period as usize];
    for &(agent, b, residue) in &chosen {
        let step = 1u64 << b;
        let mut t = residue;
        while t < max_period {
            assert_eq!(assignment[t as usize], usize::MAX, "dyadic classes are disjoint");
            assignment[t as usize] = agent;
            t += step;
        }
    }
    assert!(assignment.iter().all(|&a| a != usize::MAX), "dyadic classes cover all ticks");
    Ok(PeriodicVisitSchedule { assignment })
}

fn reverse_bits(m: u64, width: u32) -> u64 {
    let mut out = 0u64;
    for i in 0..width {
        if m & (1 << i) != 0 {
            out |= 1 << (width - 1 - i);
        }
    }
    out
}

/// If the reciprocal sum is at least 2, rounds every interval up to a power
/// of two (`a_i <= 2^{b_i} < 2 a_i`) and returns a schedule that is valid for
/// the original instance. Returns `None` when the sum is below 2.
pub fn sufficient_condition_two(inst: &PointInstance) -> Option<PeriodicVisitSchedule> {
    if inst.reciprocal_sum() < rat_int(2) {
        return None;
    }
    let exponents: Vec<u32> = inst.intervals().iter().map(|&a| ceil_log2_u64(a)).collect();
    let schedule = power_of_two_schedule(&exponents).expect("sum 2^-b >= sum 1/(2a) >= 1");
    debug_assert!(schedule.validate_for(inst).is_ok());
    Some(schedule)
}

fn ceil_log2_u64(a: u64) -> u32 {
    debug_assert!(a >= 1);
    64 - (a - 1).leading_zeros()
}

/// Polynomial-time 2-approximation for the continuous problem: with
/// `y` solving `sum y/a_i = 1`, pick `2^{b_i}` in `[a_i/2y, a_i/y]` and run
/// the power-of-two construction; the returned idle time `2y` is at most
/// twice optimal, and the schedule (one tick = one idle time) is valid for
/// the discretization `ceil(a_i / 2y)`.
pub fn approx_idle_2(inst: &ContinuousPointInstance) -> (Rational, PeriodicVisitSchedule) {
    let y = Rational::one() / inst.reciprocal_sum();
    let exponents: Vec<u32> = inst
        .intervals()
        .iter()
        .map(|a| {
            let e = floor_log2(&(a / &y));
            debug_assert!(e >= 0);
            e as u32
        })
        .collect();
    let schedule = power_of_two_schedule(&exponents).expect("sum 2^-b >= sum y/a = 1");
    let idle = rat_int(2) * &y;
    debug_assert!(schedule
        .validate_for(&inst.discretized_for_idle(&idle))
        .is_ok());
    (idle, schedule)
}

/// The idle times at which some discretization ceiling changes value; the
/// optimum is always one of these.
pub fn idle_candidates(inst: &ContinuousPointInstance) -> Vec<Rational> {
    let recip = inst.reciprocal_sum();
    let mut out: Vec<Rational> = Vec::new();
    for a in inst.intervals() {
        let j_max = crate::rational::ceil_int(&(a * &recip)) + BigInt::one();
        let j_max = u64::try_from(j_max).expect("candidate count fits in u64");
        for j in 1..=j_max {
            out.push(a / rat_int(j as i64));
        }
    }
    out.sort();
    out.dedup();
    out
}

/// Exact minimum achievable idle time for the continuous problem: binary
/// search over the candidate grid, using the discretized solver as the
/// monotone feasibility predicate.
pub fn optimal_idle_exact(
    inst: &ContinuousPointInstance,
    budget: &Budget,
) -> Result<Rational, BudgetExceeded> {
    let candidates = idle_candidates(inst);
    let feasible = |t: &Rational| -> Result<bool, BudgetExceeded> {
        match solve_discretized(&inst.discretized_for_idle(t), budget) {
            Feasibility::Good(_) => Ok(true),
            Feasibility::Bad => Ok(false),
            Feasibility::OutOfBudget => Err(BudgetExceeded(format!(
                "state budget exhausted while testing idle time {t}"
            ))),
        }
    };
    // the largest candidate is max(a_i), whose discretization contains a 1
    let mut lo = 0usize; // may be infeasible
    let mut hi = candidates.len() - 1; // always feasible
    if feasible(&candidates[lo])? {
        return Ok(candidates[lo].clone());
    }
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if feasible(&candidates[mid])? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(candidates[hi].clone())
}

/// The family `(2^0 + 1, 2^1 + 1, ..., 2^k + 1)`; every member is bad, and
/// its reciprocal sum approaches [`alpha_constant`] from below.
pub fn bad_family(k: u32) -> PointInstance {
    let intervals = (0..=k).map(|i| (1u64 << i) + 1).collect();
    PointInstance::new(intervals).expect("non-empty positive")
}

/// Compresses an instance with all intervals at most `2M` into one with all
/// intervals at most `M`, preserving badness: intervals above `M` are paired
/// (each pair raised to its larger member, an odd leftover is dropped) and
/// each pair `(x, x)` is replaced by a single agent with interval
/// `ceil(x/2)`. The reciprocal sum `t` degrades to at least
/// `(M+1)/(M+2) * t - 1/(M+2)`.
pub fn halve_transform(inst: &PointInstance, m: u64) -> Result<PointInstance, PointError> {
    if inst.intervals().iter().any(|&a| a > 2 * m) {
        return Err(PointError::HalveOutOfRange(2 * m));
    }
    let mut result: Vec<u64> = Vec::new();
    let mut big: Vec<u64> = Vec::new();
    for &a in inst.intervals() {
        if a <= m {
            result.push(a);
        } else {
            big.push(a);
        }
    }
    let mut it = big.chunks_exact(2);
    for pair in &mut it {
        let x = pair[1]; // raise the pair to its larger member
        result.push(x.div_ceil(2));
    }
    // an odd leftover (the largest element) is dropped; dropping an agent
    // also preserves badness
    if result.is_empty() {
        return Err(PointError::EmptyInstance);
    }
    PointInstance::new(result)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::budget::Budget;
    use crate::rational::rat;

    fn inst(v: &[u64]) -> PointInstance {
        PointInstance::new(v.to_vec()).unwrap()
    }

    fn cinst(v: &[(i64, i64)]) -> ContinuousPointInstance {
        ContinuousPointInstance::new(v.iter().map(|&(p, q)| rat(p, q)).collect()).unwrap()
    }

    #[test]
    fn necessary_condition_examples() {
        assert!(!necessary_condition(&inst(&[2, 3, 7]))); // 41/42 < 1
        assert!(necessary_condition(&inst(&[1])));
        assert!(necessary_condition(&inst(&[3, 3, 3])));
    }

    #[test]
    fn power_schedule_base_case() {
        let s = power_of_two_schedule(&[0]).unwrap();
        assert_eq!(s.period(), 1);
        assert_eq!(s.assignment(), &[0]);
    }

    #[test]
    fn power_schedule_alternation() {
        let s = power_of_two_schedule(&[1, 1]).unwrap();
        assert_eq!(s.period(), 2);
        s.validate_for(&inst(&[2, 2])).unwrap();
    }

    #[test]
    fn power_schedule_mixed() {
        let s = power_of_two_schedule(&[1, 2, 2]).unwrap();
        assert_eq!(s.period(), 4);
        assert_eq!(s.assignment(), &[0, 1, 0, 2]);
        s.validate_for(&inst(&[2, 4, 4])).unwrap();
    }

    #[test]
    fn power_schedule_rejects_thin_input() {
        assert_eq!(
            power_of_two_schedule(&[1, 2]),
            Err(PointError::InsufficientDensity)
        );
    }

    #[test]
    fn power_schedule_skips_spare_agents() {
        // six agents of interval 4: only four are used
        let s = power_of_two_schedule(&[2, 2, 2, 2, 2, 2]).unwrap();
        assert_eq!(s.period(), 4);
        s.validate_for(&inst(&[4, 4, 4, 4, 4, 4])).unwrap();
    }

    #[test]
    fn sufficient_condition_two_examples() {
        assert!(sufficient_condition_two(&inst(&[1, 2])).is_none()); // sum 3/2
        let s = sufficient_condition_two(&inst(&[2, 2, 2, 2])).unwrap();
        s.validate_for(&inst(&[2, 2, 2, 2])).unwrap();
        let s = sufficient_condition_two(&inst(&[3, 3, 3, 3, 3, 3])).unwrap();
        s.validate_for(&inst(&[3, 3, 3, 3, 3, 3])).unwrap();
        assert_eq!(s.period(), 4);
    }

    #[test]
    fn approx_idle_examples() {
        let (idle, _) = approx_idle_2(&cinst(&[(1, 1), (1, 1)]));
        assert_eq!(idle, rat_int(1)); // y = 1/2
        let (idle, _) = approx_idle_2(&cinst(&[(2, 1), (2, 1)]));
        assert_eq!(idle, rat_int(2)); // y = 1
        let (idle, _) = approx_idle_2(&cinst(&[(1, 1)]));
        assert_eq!(idle, rat_int(2)); // y = 1
    }

    #[test]
    fn optimal_idle_small() {
        let b = Budget::default();
        assert_eq!(optimal_idle_exact(&cinst(&[(1, 1)]), &b).unwrap(), rat_int(1));
        assert_eq!(
            optimal_idle_exact(&cinst(&[(1, 1), (1, 1)]), &b).unwrap(),
            rat(1, 2)
        );
    }

    #[test]
    fn bad_family_shape() {
        assert_eq!(bad_family(0).intervals(), &[2]);
        assert_eq!(bad_family(2).intervals(), &[2, 3, 5]);
        assert_eq!(bad_family(4).intervals(), &[2, 3, 5, 9, 17]);
    }

    #[test]
    fn halve_transform_examples() {
        assert_eq!(
            halve_transform(&inst(&[2, 3, 8, 8]), 4).unwrap(),
            inst(&[2, 3, 4])
        );
        assert_eq!(halve_transform(&inst(&[2, 2]), 1).unwrap(), inst(&[1]));
        assert_eq!(
            halve_transform(&inst(&[2, 3, 5, 9]), 5).unwrap(),
            inst(&[2, 3, 5])
        );
        assert!(halve_transform(&inst(&[2, 20]), 5).is_err());
    }

    #[test]
    fn halve_transform_preserves_reciprocal_bound() {
        // sum degrades by at most the stated factor
        let cases: &[(&[u64], u64)] = &[(&[2, 3, 8, 8], 4), (&[2, 3, 5, 9], 5), (&[3, 4, 4], 2)];
        for &(v, m) in cases {
            let a = inst(v);
            let t = a.reciprocal_sum();
            let b = halve_transform(&a, m).unwrap();
            let lhs = b.reciprocal_sum();
            let factor = rat(m as i64 + 1, m as i64 + 2);
            let rhs = factor * t - rat(1, m as i64 + 2);
            assert!(lhs >= rhs, "{v:?} M={m}: {lhs} < {rhs}");
        }
    }

    #[test]
    fn schedule_validation_catches_small_gaps() {
        let s = PeriodicVisitSchedule::new(vec![0, 1, 0]).unwrap();
        // agent 0 at ticks 0 and 2: cyclic gaps 2 and 1
        assert!(s.validate_for(&inst(&[2, 3])).is_err());
        let s = PeriodicVisitSchedule::new(vec![0, 1]).unwrap();
        s.validate_for(&inst(&[2, 2])).unwrap();
    }

    #[test]
    fn discretization_of_continuous_instances() {
        let c = cinst(&[(2, 1), (3, 1), (5, 1)]);
        let d = c.discretized_for_idle(&rat_int(1));
        assert_eq!(d.intervals(), &[2, 3, 5]);
        let d = c.discretized_for_idle(&rat(3, 2));
        assert_eq!(d.intervals(), &[2, 2, 4]);
    }
}
