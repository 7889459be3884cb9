//! Feasibility solver for discretized point patrolling.
//!
//! The search runs over cooldown states: entry `i` is
//! `min(ticks since agent i's last visit, a_i - 1)`, so agent `i` may serve
//! the next tick exactly when its entry is `a_i - 1`. An instance is good
//! iff this finite graph contains a cycle, and any cycle is reachable from
//! the all-ready state by a monotonicity argument, so a depth-first search
//! from there decides feasibility and extracts a periodic schedule from the
//! first cycle found.
//!
//! Agents sharing the same interval are interchangeable; their cooldowns are
//! kept sorted, which collapses the state space from the raw product to
//! multiset-counted states.

use super::{PeriodicVisitSchedule, PointInstance};
use crate::budget::Budget;
use std::collections::HashMap;

/// Solver verdict. Budget exhaustion is reported distinctly and never
/// conflated with a negative answer.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Feasibility {
    Good(PeriodicVisitSchedule),
    Bad,
    OutOfBudget,
}

impl Feasibility {
    pub fn is_good(&self) -> bool {
        matches!(self, Feasibility::Good(_))
    }

    pub fn schedule(&self) -> Option<&PeriodicVisitSchedule> {
        match self {
            Feasibility::Good(s) => Some(s),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SolveStats {
    pub states_visited: u64,
}

/// Contiguous run of agents sharing one interval value.
#[derive(Debug, Clone)]
struct Group {
    start: usize,
    end: usize, // exclusive
    cap: u32,   // a - 1
}

fn groups_of(inst: &PointInstance) -> Vec<Group> {
    let a = inst.intervals();
    let mut out = Vec::new();
    let mut i = 0;
    while i < a.len() {
        let mut j = i;
        while j < a.len() && a[j] == a[i] {
            j += 1;
        }
        out.push(Group {
            start: i,
            end: j,
            cap: u32::try_from(a[i] - 1).expect("interval fits in u32"),
        });
        i = j;
    }
    out
}

/// Successor of a canonical state when an agent of group `g` serves the next
/// tick: every cooldown advances (capped), one capped member of `g` resets
/// to zero. Keeping each group sorted re-canonicalizes the result.
fn successor(state: &[u32], groups: &[Group], g: usize) -> Vec<u32> {
    let mut next: Vec<u32> = Vec::with_capacity(state.len());
    for grp in groups {
        for &c in &state[grp.start..grp.end] {
            next.push(c.saturating_add(1).min(grp.cap));
        }
    }
    let grp = &groups[g];
    // after capping, the slice is sorted ascending and its last member is at
    // cap (the ready one); reset it and rotate it to the front of the slice
    debug_assert_eq!(next[grp.end - 1], grp.cap);
    next[grp.start..grp.end].rotate_right(1);
    next[grp.start] = 0;
    next
}

fn ready_groups(state: &[u32], groups: &[Group]) -> Vec<usize> {
    groups
        .iter()
        .enumerate()
        .filter(|(_, grp)| state[grp.end - 1] == grp.cap)
        .map(|(g, _)| g)
        .collect()
}

/// Key encoding: states pack into one `u64` whenever the instance is small
/// enough, which covers the large enumerations; wide states fall back to the
/// vector itself.
enum ColorMap {
    Packed { bits: u32, map: HashMap<u64, Color> },
    Wide(HashMap<Vec<u32>, Color>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Color {
    OnPath(usize),
    Done,
}

impl ColorMap {
    fn for_instance(inst: &PointInstance) -> ColorMap {
        let max = *inst.intervals().iter().max().expect("non-empty");
        let bits = 64 - (max - 1).max(1).leading_zeros();
        if bits as usize * inst.len() <= 64 {
            ColorMap::Packed { bits, map: HashMap::new() }
        } else {
            ColorMap::Wide(HashMap::new())
        }
    }

    fn pack(bits: u32, state: &[u32]) -> u64 {
        let mut key = 0u64;
        for &c in state {
            key = (key << bits) | c as u64;
        }
        key
    }

    fn get(&self, state: &[u32]) -> Option<Color> {
        match self {
            ColorMap::Packed { bits, map } => map.get(&Self::pack(*bits, state)).copied(),
            ColorMap::Wide(map) => map.get(state).copied(),
        }
    }

    fn insert(&mut self, state: &[u32], color: Color) {
        match self {
            ColorMap::Packed { bits, map } => {
                map.insert(Self::pack(*bits, state), color);
            }
            ColorMap::Wide(map) => {
                map.insert(state.to_vec(), color);
            }
        }
    }
}

pub fn solve_discretized(inst: &PointInstance, budget: &Budget) -> Feasibility {
    solve_discretized_with_options(inst, budget, false).0
}

/// `dominance` additionally discards a state when a fully-explored state
/// dominates it componentwise (larger cooldowns permit a superset of
/// futures); sound, and useful only as a cross-check since canonicalization
/// already collapses the interesting instances.
pub fn solve_discretized_with_options(
    inst: &PointInstance,
    budget: &Budget,
    dominance: bool,
) -> (Feasibility, SolveStats) {
    let mut stats = SolveStats::default();
    if inst.product() > budget.max_states as u128 {
        return (Feasibility::OutOfBudget, stats);
    }
    let groups = groups_of(inst);
    let all_ready: Vec<u32> = groups
        .iter()
        .flat_map(|g| std::iter::repeat(g.cap).take(g.end - g.start))
        .collect();

    struct Frame {
        state: Vec<u32>,
        options: Vec<usize>,
        next: usize,
    }

    let mut colors = ColorMap::for_instance(inst);
    let mut done_states: Vec<Vec<u32>> = Vec::new(); // dominance store
    let mut path: Vec<Frame> = Vec::new();
    colors.insert(&all_ready, Color::OnPath(0));
    stats.states_visited = 1;
    path.push(Frame {
        options: ready_groups(&all_ready, &groups),
        state: all_ready,
        next: 0,
    });

    let cycle: Option<(usize, usize)> = loop {
        let depth = path.len();
        let Some(frame) = path.last_mut() else {
            break None; // exhausted without a cycle
        };
        if frame.next >= frame.options.len() {
            colors.insert(&frame.state, Color::Done);
            if dominance {
                done_states.push(frame.state.clone());
            }
            path.pop();
            continue;
        }
        let g = frame.options[frame.next];
        frame.next += 1;
        let succ = successor(&frame.state, &groups, g);
        match colors.get(&succ) {
            Some(Color::Done) => continue,
            Some(Color::OnPath(d)) => break Some((d, g)),
            None => {
                if dominance
                    && done_states
                        .iter()
                        .any(|d| d.iter().zip(&succ).all(|(a, b)| a >= b))
                {
                    continue;
                }
                stats.states_visited += 1;
                if stats.states_visited > budget.max_states {
                    return (Feasibility::OutOfBudget, stats);
                }
                colors.insert(&succ, Color::OnPath(depth));
                path.push(Frame {
                    options: ready_groups(&succ, &groups),
                    state: succ,
                    next: 0,
                });
            }
        }
    };

    match cycle {
        None => (Feasibility::Bad, stats),
        Some((cycle_start, closing_group)) => {
            // choices along the path: frame i's last tried option leads to
            // frame i+1; the closing edge leads from the path tip back to
            // frame `cycle_start`
            let prefix: Vec<usize> = path[..cycle_start]
                .iter()
                .map(|f| f.options[f.next - 1])
                .collect();
            let mut cycle_choices: Vec<usize> = path[cycle_start..path.len() - 1]
                .iter()
                .map(|f| f.options[f.next - 1])
                .collect();
            cycle_choices.push(closing_group);
            let schedule = extract_schedule(inst, &groups, &prefix, &cycle_choices);
            debug_assert!(schedule.validate_for(inst).is_ok());
            (Feasibility::Good(schedule), stats)
        }
    }
}

/// Unfolds a canonical cycle into a concrete periodic schedule. Concrete
/// per-agent cooldowns are walked along the cycle's group choices (ties go
/// to the lowest agent index among the ready members) until the concrete
/// state repeats at the same cycle phase; the window between the repeats is
/// the schedule.
fn extract_schedule(
    inst: &PointInstance,
    groups: &[Group],
    prefix: &[usize],
    cycle_choices: &[usize],
) -> PeriodicVisitSchedule {
    let k = inst.len();
    let caps: Vec<u32> = inst
        .intervals()
        .iter()
        .map(|&a| u32::try_from(a - 1).expect("interval fits in u32"))
        .collect();
    let mut state: Vec<u32> = caps.clone();
    let step = |state: &mut Vec<u32>, g: usize| -> usize {
        let grp = &groups[g];
        // readiness is judged before the tick advances
        let agent = (grp.start..grp.end)
            .find(|&i| state[i] == caps[i])
            .expect("chosen group has a ready agent");
        for i in 0..k {
            state[i] = state[i].saturating_add(1).min(caps[i]);
        }
        state[agent] = 0;
        agent
    };
    for &g in prefix {
        step(&mut state, g);
    }
    let mut seen: HashMap<(Vec<u32>, usize), usize> = HashMap::new();
    let mut agents: Vec<usize> = Vec::new();
    let mut phase = 0usize;
    loop {
        if let Some(&first) = seen.get(&(state.clone(), phase)) {
            let assignment = agents[first..].to_vec();
            return PeriodicVisitSchedule::new(assignment).expect("cycle is non-empty");
        }
        seen.insert((state.clone(), phase), agents.len());
        agents.push(step(&mut state, cycle_choices[phase]));
        phase = (phase + 1) % cycle_choices.len();
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn inst(v: &[u64]) -> PointInstance {
        PointInstance::new(v.to_vec()).unwrap()
    }

    fn solve(v: &[u64]) -> Feasibility {
        solve_discretized(&inst(v), &Budget::default())
    }

    #[test]
    fn round_robin_is_good() {
        match solve(&[2, 2]) {
            Feasibility::Good(s) => {
                s.validate_for(&inst(&[2, 2])).unwrap();
            }
            other => panic!("expected good, got {other:?}"),
        }
        assert!(solve(&[3, 3, 3]).is_good());
        assert!(solve(&[1]).is_good());
    }

    #[test]
    fn known_bad_instances() {
        assert_eq!(solve(&[2, 3, 5]), Feasibility::Bad);
        assert_eq!(solve(&[2, 3, 7]), Feasibility::Bad);
        assert_eq!(solve(&[2]), Feasibility::Bad);
    }

    #[test]
    fn power_tuple_is_good() {
        match solve(&[2, 4, 8, 8]) {
            Feasibility::Good(s) => s.validate_for(&inst(&[2, 4, 8, 8])).unwrap(),
            other => panic!("expected good, got {other:?}"),
        }
    }

    #[test]
    fn budget_is_reported_distinctly() {
        let tiny = Budget::with_states(4);
        assert_eq!(
            solve_discretized(&inst(&[5, 6, 7]), &tiny),
            Feasibility::OutOfBudget
        );
    }

    #[test]
    fn dominance_pruning_agrees() {
        let b = Budget::default();
        for v in [
            vec![2u64, 3, 5],
            vec![2, 4, 8, 8],
            vec![3, 3, 3],
            vec![2, 3, 6],
            vec![2, 4, 5],
            vec![4, 4, 4, 4],
        ] {
            let i = inst(&v);
            let plain = solve_discretized(&i, &b).is_good();
            let (pruned, _) = solve_discretized_with_options(&i, &b, true);
            assert_eq!(plain, pruned.is_good(), "{v:?}");
        }
    }

    #[test]
    fn wide_states_work() {
        // a 23-bit interval with k = 3 overflows the packed key
        let v: Vec<u64> = vec![1, 3, (1 << 22) + 1];
        match solve(&v) {
            Feasibility::Good(s) => s.validate_for(&inst(&v)).unwrap(),
            other => panic!("expected good, got {other:?}"),
        }
    }

    #[test]
    fn deterministic_output() {
        let b = Budget::default();
        let a = solve_discretized(&inst(&[2, 4, 6, 6]), &b);
        let bb = solve_discretized(&inst(&[2, 4, 6, 6]), &b);
        assert_eq!(a, bb);
    }
}
