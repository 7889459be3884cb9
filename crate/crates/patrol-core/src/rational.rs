//! Exact rational arithmetic used for every time, position, speed and ratio.
//!
//! All quantities are `num::BigRational`: always in lowest terms with a
//! positive denominator, and every operation is exact. The canonical text
//! form is `p/q`, with `/q` omitted when the denominator is 1; this is
//! exactly what `BigRational`'s `Display`/`FromStr` produce and accept.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, Zero};
use std::str::FromStr;

pub type Rational = BigRational;

/// Shorthand for a rational from two machine integers.
pub fn rat(numer: i64, denom: i64) -> Rational {
    assert!(denom != 0, "zero denominator");
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

/// Rational from a single integer.
pub fn rat_int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Parses the canonical `p/q` form (`q` omitted when 1).
pub fn parse_rational(s: &str) -> Result<Rational, ParseRationalError> {
    let s = s.trim();
    if s.is_empty() {
        return Err(ParseRationalError::Empty);
    }
    if let Some((_, d)) = s.split_once('/') {
        let d = d.trim();
        if d == "0" || d == "-0" || d == "+0" {
            return Err(ParseRationalError::ZeroDenominator);
        }
    }
    Rational::from_str(s).map_err(|_| ParseRationalError::Malformed(s.to_string()))
}

/// Parses a decimal literal (`12.345`) into an exact rational.
/// The resulting denominator is a power of ten and must not exceed `max_denom`.
pub fn parse_decimal(s: &str, max_denom: &BigInt) -> Result<Rational, ParseRationalError> {
    let s = s.trim();
    let (int_part, frac_part) = match s.split_once('.') {
        Some((i, f)) => (i, f),
        None => (s, ""),
    };
    if frac_part.is_empty() {
        return parse_rational(int_part);
    }
    if !frac_part.bytes().all(|b| b.is_ascii_digit()) {
        return Err(ParseRationalError::Malformed(s.to_string()));
    }
    let denom = BigInt::from(10u32).pow(frac_part.len() as u32);
    if &denom > max_denom {
        return Err(ParseRationalError::DenominatorTooLarge);
    }
    let int: BigInt = int_part
        .parse()
        .map_err(|_| ParseRationalError::Malformed(s.to_string()))?;
    let frac: BigInt = frac_part
        .parse()
        .map_err(|_| ParseRationalError::Malformed(s.to_string()))?;
    let abs = Rational::from_integer(int.abs()) + Rational::new(frac, denom);
    Ok(if int_part.starts_with('-') { -abs } else { abs })
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ParseRationalError {
    #[error("empty rational literal")]
    Empty,
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("malformed rational literal `{0}`")]
    Malformed(String),
    #[error("decimal denominator exceeds the configured bound")]
    DenominatorTooLarge,
}

/// Floor of a rational as a `BigInt`.
pub fn floor_int(x: &Rational) -> BigInt {
    x.floor().to_integer()
}

/// Ceiling of a rational as a `BigInt`.
pub fn ceil_int(x: &Rational) -> BigInt {
    x.ceil().to_integer()
}

/// `x` reduced into `[0, period)`, exactly.
pub fn rem_euclid(x: &Rational, period: &Rational) -> Rational {
    debug_assert!(period.is_positive());
    let q = (x / period).floor();
    x - q * period
}

/// Whether `small` divides `big` an integer number of times.
pub fn divides(small: &Rational, big: &Rational) -> bool {
    if small.is_zero() {
        return big.is_zero();
    }
    (big / small).is_integer()
}

/// Exact integer quotient `big / small`; caller must check `divides` first.
pub fn exact_quotient(big: &Rational, small: &Rational) -> BigInt {
    let q = big / small;
    debug_assert!(q.is_integer());
    q.to_integer()
}

/// Least common multiple of two positive rationals: the smallest positive
/// rational that both divide.
pub fn rational_lcm(a: &Rational, b: &Rational) -> Rational {
    use num::Integer;
    debug_assert!(a.is_positive() && b.is_positive());
    let num = (a.numer() * b.denom()).lcm(&(b.numer() * a.denom()));
    Rational::new(num, a.denom() * b.denom())
}

/// Largest power of two `<= x` for positive `x`, returned as an exponent.
/// `2^result <= x < 2^(result+1)`.
pub fn floor_log2(x: &Rational) -> i64 {
    assert!(x.is_positive());
    let one = Rational::one();
    let two = rat_int(2);
    let mut e: i64 = 0;
    let mut p = Rational::one();
    if *x >= one {
        while &p * &two <= *x {
            p *= &two;
            e += 1;
        }
        e
    } else {
        while p > *x {
            p /= &two;
            e -= 1;
        }
        e
    }
}

/// `2^e` as a rational, `e` may be negative.
pub fn pow2(e: i64) -> Rational {
    let two = rat_int(2);
    if e >= 0 {
        Rational::from_integer(BigInt::from(2u32).pow(e as u32))
    } else {
        Rational::one() / two.pow((-e) as i32)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_text_form() {
        assert_eq!(rat(3, 6).to_string(), "1/2");
        assert_eq!(rat(4, 2).to_string(), "2");
        assert_eq!(rat(-3, 6).to_string(), "-1/2");
        assert_eq!(rat(1, -2).to_string(), "-1/2");
    }

    #[test]
    fn parse_round_trip() {
        for s in ["0", "7", "-7", "3/4", "-3/4", "22/7"] {
            let r = parse_rational(s).unwrap();
            assert_eq!(r.to_string(), s);
        }
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("").is_err());
        assert!(parse_rational("x").is_err());
    }

    #[test]
    fn decimal_is_exact() {
        let bound = BigInt::from(1_000_000u64);
        assert_eq!(parse_decimal("2.1", &bound).unwrap(), rat(21, 10));
        assert_eq!(parse_decimal("-0.25", &bound).unwrap(), rat(-1, 4));
        assert_eq!(parse_decimal("3", &bound).unwrap(), rat_int(3));
        assert!(parse_decimal("0.12345678901", &BigInt::from(100u32)).is_err());
    }

    #[test]
    fn arithmetic_round_trips() {
        let a = rat(355, 113);
        let b = rat(-22, 7);
        assert_eq!(&(&a + &b) - &b, a);
        assert_eq!(&(&a * &b) / &b, a);
    }

    #[test]
    fn euclidean_remainder() {
        let p = rat_int(3);
        assert_eq!(rem_euclid(&rat(7, 2), &p), rat(1, 2));
        assert_eq!(rem_euclid(&rat(-1, 2), &p), rat(5, 2));
        assert_eq!(rem_euclid(&rat_int(6), &p), rat_int(0));
    }

    #[test]
    fn log2_and_pow2() {
        assert_eq!(floor_log2(&rat_int(1)), 0);
        assert_eq!(floor_log2(&rat_int(5)), 2);
        assert_eq!(floor_log2(&rat(1, 3)), -2);
        assert_eq!(pow2(-2), rat(1, 4));
        assert_eq!(pow2(4), rat_int(16));
    }

    #[test]
    fn divisibility() {
        assert!(divides(&rat(1, 2), &rat_int(3)));
        assert!(!divides(&rat(2, 3), &rat_int(1)));
        assert_eq!(exact_quotient(&rat_int(3), &rat(1, 2)), BigInt::from(6));
    }
}
