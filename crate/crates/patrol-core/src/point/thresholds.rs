//! Reciprocal-sum threshold machinery: the nested expression `f(r)` behind
//! the goodness threshold, enumeration of minimal candidate tuples, and the
//! partial sums of the conjectured sharp constant.

use super::PointInstance;
use crate::rational::Rational;
use num::bigint::BigInt;
use num::{One, Signed, Zero};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FCheck {
    /// True iff `f(r) > threshold` for every checked `r`.
    pub all_above: bool,
    /// Minimum of `f(r)` over the checked range.
    pub min_value: Rational,
    /// The `r` attaining the minimum.
    pub min_r: u32,
}

/// Evaluates the nested expression
/// `f(r) = g_1(g_2(... g_r(base) ...))` with
/// `g_s(x) = (x * (scale_base * 2^(s-1) + 1) - 1) / (scale_base * 2^(s-1) + 2)`
/// for `r = 1..=r_max`, entirely in exact rationals, and reports whether
/// every value strictly exceeds `threshold`.
pub fn f_sequence_check(
    threshold: &Rational,
    base: &Rational,
    scale_base: u64,
    r_max: u32,
) -> FCheck {
    assert!(r_max >= 1);
    let mut min_value: Option<(Rational, u32)> = None;
    for r in 1..=r_max {
        let mut x = base.clone();
        for s in (0..r).rev() {
            let m = BigInt::from(scale_base) * (BigInt::one() << s);
            let m_plus_1 = Rational::from_integer(&m + BigInt::one());
            let m_plus_2 = Rational::from_integer(m + BigInt::from(2));
            x = (x * m_plus_1 - Rational::one()) / m_plus_2;
        }
        match &min_value {
            Some((best, _)) if *best <= x => {}
            _ => min_value = Some((x, r)),
        }
    }
    let (min_value, min_r) = min_value.expect("r_max >= 1");
    FCheck { all_above: min_value > *threshold, min_value, min_r }
}

/// Calls `visit` for every sorted tuple with entries in `1..=bound` whose
/// reciprocal sum reaches `threshold` but drops below it when the last
/// (largest) element is removed. Tuples are produced exactly once, in
/// lexicographic order; minimality makes the family finite.
pub fn for_each_minimal_candidate<F: FnMut(&[u64])>(
    bound: u64,
    threshold: &Rational,
    visit: &mut F,
) {
    assert!(bound >= 1);
    assert!(threshold.is_positive());
    let mut prefix: Vec<u64> = Vec::new();
    rec(bound, threshold, &mut prefix, Rational::zero(), visit);

    fn rec<F: FnMut(&[u64])>(
        bound: u64,
        threshold: &Rational,
        prefix: &mut Vec<u64>,
        sum: Rational,
        visit: &mut F,
    ) {
        // invariant: sum of reciprocals of `prefix` is strictly below threshold
        let lo = prefix.last().copied().unwrap_or(1);
        for a in lo..=bound {
            let next = &sum + Rational::new(BigInt::one(), BigInt::from(a));
            prefix.push(a);
            if next >= *threshold {
                visit(prefix);
            } else {
                rec(bound, threshold, prefix, next, visit);
            }
            prefix.pop();
        }
    }
}

/// Materialized version of [`for_each_minimal_candidate`].
pub fn minimal_candidates(bound: u64, threshold: &Rational) -> Vec<PointInstance> {
    let mut out = Vec::new();
    for_each_minimal_candidate(bound, threshold, &mut |tuple| {
        out.push(PointInstance::new(tuple.to_vec()).expect("non-empty positive"));
    });
    out
}

/// Partial sum of `sum_{i >= 0} 1 / (2^i + 1)`, monotone increasing in the
/// number of terms; exposed for reporting.
pub fn alpha_constant(terms: u32) -> Rational {
    (0..terms)
        .map(|i| Rational::new(BigInt::one(), (BigInt::one() << i) + BigInt::one()))
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{rat, rat_int};

    #[test]
    fn f_from_unit_base_fails_fast() {
        // f(1) = (1*13 - 1)/14 = 6/7 < 1.1822
        let res = f_sequence_check(&rat(11822, 10000), &Rational::one(), 12, 4);
        assert!(!res.all_above);
        assert_eq!(f_sequence_check(&rat(11822, 10000), &rat_int(1), 12, 1).min_value, rat(6, 7));
    }

    #[test]
    fn f_stays_positive_for_base_at_least_one() {
        let res = f_sequence_check(&Rational::zero(), &rat_int(1), 12, 8);
        assert!(res.all_above);
    }

    #[test]
    fn f_at_default_base_first_values() {
        // hand-checked: f(1) = (1.546*13 - 1)/14 = 9549/7000
        let res = f_sequence_check(&rat(11822, 10000), &rat(1546, 1000), 12, 1);
        assert_eq!(res.min_value, rat(9549, 7000));
        assert!(res.all_above);
    }

    #[test]
    fn minimal_candidates_tiny() {
        let got: Vec<Vec<u64>> = minimal_candidates(2, &Rational::one())
            .iter()
            .map(|i| i.intervals().to_vec())
            .collect();
        assert_eq!(got, vec![vec![1], vec![2, 2]]);

        let got: Vec<Vec<u64>> = minimal_candidates(3, &Rational::one())
            .iter()
            .map(|i| i.intervals().to_vec())
            .collect();
        assert_eq!(got, vec![vec![1], vec![2, 2], vec![2, 3, 3], vec![3, 3, 3]]);
    }

    #[test]
    fn minimal_candidates_member_spot_checks() {
        // ten 8s reach 1.25 >= 1.1822 while nine stay below
        let thr = rat(11822, 10000);
        let mut found = false;
        for_each_minimal_candidate(8, &thr, &mut |t| {
            if t == [8u64; 10] {
                found = true;
            }
            assert!(t.len() <= 10);
        });
        assert!(found);
    }

    #[test]
    fn alpha_partial_sums() {
        assert_eq!(alpha_constant(1), rat(1, 2));
        assert_eq!(alpha_constant(3), rat(31, 30));
        let a30 = alpha_constant(30);
        assert!(a30 > rat(1264, 1000) && a30 < rat(12645, 10000));
        assert!(alpha_constant(31) > a30);
    }
}
