//! Search budgets shared by the exhaustive solvers.
//!
//! Exceeding a budget is always reported distinctly from a negative verdict:
//! "unknown (budget)" never degrades into "bad"/"none".

/// Caps for the exhaustive searches. Every solver that can exhaust a budget
/// takes one of these explicitly; defaults are desk-scale.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Budget {
    /// Maximum number of solver states (also bounds instance products).
    pub max_states: u64,
    /// Maximum modulus lcm a covering-system search will enumerate.
    pub max_lcm: u64,
    /// Maximum nodes expanded by backtracking searches.
    pub max_nodes: u64,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            max_states: 100_000_000,
            max_lcm: 1 << 24,
            max_nodes: 10_000_000,
        }
    }
}

impl Budget {
    pub fn with_states(max_states: u64) -> Self {
        Budget { max_states, ..Budget::default() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("budget exceeded: {0}")]
pub struct BudgetExceeded(pub String);
