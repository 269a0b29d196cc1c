//! Exact rational values: parsing, `p/q` formatting, and decimal rendering.
//!
//! All rate and distortion arithmetic in this crate is exact. Quantities
//! that can be infinite (distortion against a wrong symbol) use
//! [`Distortion`], which keeps infinity as an explicit variant instead of a
//! float sentinel.

use std::cmp::Ordering;
use std::fmt;

use num::{BigInt, BigRational, One, Signed, Zero};

use crate::{Error, Result};

pub type Rational = BigRational;

/// Shorthand for a rational from machine integers.
pub fn rat(num: i64, den: i64) -> Rational {
    assert!(den != 0, "zero denominator");
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// Parses "p/q" or a bare integer "p" into an exact rational.
///
/// Decimal notation is rejected on purpose: a value like 0.1 has no exact
/// binary or rational reading that matches user intent, so callers must
/// write 1/10.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = |msg: &str| Error::Parse(format!("{msg}: {s:?}"));
    if s.contains('.') {
        return Err(bad("decimal notation not accepted, use p/q"));
    }
    let mut parts = s.splitn(2, '/');
    let num = parts
        .next()
        .filter(|t| !t.is_empty())
        .ok_or_else(|| bad("empty numerator"))?;
    let num: BigInt = num.parse().map_err(|_| bad("bad numerator"))?;
    let den = match parts.next() {
        Some(d) => d.parse().map_err(|_| bad("bad denominator"))?,
        None => BigInt::one(),
    };
    if den.is_zero() {
        return Err(bad("zero denominator"));
    }
    Ok(BigRational::new(num, den))
}

/// Canonical "p/q" form; integers render with an explicit "/1".
pub fn format_rational(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Decimal rendering with the given number of significant digits, computed
/// by exact integer division (round half away from zero).
pub fn to_decimal(r: &Rational, sig: usize) -> String {
    assert!(sig > 0);
    if r.is_zero() {
        return "0".into();
    }
    let neg = r.is_negative();
    let num = r.numer().abs();
    let den = r.denom().clone();
    // Position of the leading digit: largest e with 10^e <= num/den.
    let mut exp: i64 = 0;
    let ten = BigInt::from(10);
    let mut scaled_num = num.clone();
    let mut scaled_den = den.clone();
    while scaled_num >= scaled_den {
        scaled_den *= &ten;
        exp += 1;
    }
    while &scaled_num * &ten < scaled_den {
        scaled_num *= &ten;
        exp -= 1;
    }
    // Now 10^(exp-1) <= num/den < 10^exp. Scale so the integer part has
    // exactly `sig` digits, then round.
    let shift = sig as i64 - exp;
    let (mut n, mut d) = (num, den);
    match shift.cmp(&0) {
        Ordering::Greater => n *= ten.pow(shift as u32),
        Ordering::Less => d *= ten.pow((-shift) as u32),
        Ordering::Equal => {}
    }
    let (q, rem) = (&n / &d, &n % &d);
    let mut digits = if &rem * 2 >= d { q + 1 } else { q }.to_string();
    // Rounding may add a digit (e.g. 999.6 -> 1000).
    if digits.len() > sig {
        digits.truncate(sig);
        exp += 1;
    }
    let mut out = String::new();
    if neg {
        out.push('-');
    }
    if exp <= 0 {
        out.push_str("0.");
        for _ in 0..-exp {
            out.push('0');
        }
        out.push_str(digits.trim_end_matches('0'));
        if out.ends_with('.') {
            out.pop();
        }
    } else if (exp as usize) >= digits.len() {
        out.push_str(&digits);
        for _ in 0..exp as usize - digits.len() {
            out.push('0');
        }
    } else {
        let (int_part, frac_part) = digits.split_at(exp as usize);
        out.push_str(int_part);
        let frac = frac_part.trim_end_matches('0');
        if !frac.is_empty() {
            out.push('.');
            out.push_str(frac);
        }
    }
    out
}

/// Distortion of a reconstruction: an exact fraction, or infinite when a
/// wrong (non-erased, non-matching) symbol was produced.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Distortion {
    Finite(Rational),
    Infinite,
}

impl Distortion {
    pub fn zero() -> Self {
        Distortion::Finite(Rational::zero())
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, Distortion::Infinite)
    }

    pub fn as_finite(&self) -> Option<&Rational> {
        match self {
            Distortion::Finite(r) => Some(r),
            Distortion::Infinite => None,
        }
    }
}

impl PartialOrd for Distortion {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Distortion {
    fn cmp(&self, other: &Self) -> Ordering {
        use Distortion::*;
        match (self, other) {
            (Infinite, Infinite) => Ordering::Equal,
            (Infinite, Finite(_)) => Ordering::Greater,
            (Finite(_), Infinite) => Ordering::Less,
            (Finite(a), Finite(b)) => a.cmp(b),
        }
    }
}

impl fmt::Display for Distortion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Distortion::Finite(r) => write!(f, "{}", format_rational(r)),
            Distortion::Infinite => write!(f, "inf"),
        }
    }
}

/// Floor of log base `b` of `x` for integer x >= 1, b >= 2, by exact
/// bracketing: the unique e with b^e <= x < b^(e+1).
pub fn ilog_floor(x: &num::BigUint, b: u32) -> u64 {
    use num::BigUint;
    assert!(!x.is_zero(), "log of zero");
    assert!(b >= 2);
    let b = BigUint::from(b);
    let mut e = 0u64;
    let mut pow = BigUint::one();
    loop {
        let next = &pow * &b;
        if &next > x {
            return e;
        }
        pow = next;
        e += 1;
    }
}

/// Whether `x` is an exact power b^e; returns e when so.
pub fn exact_log(x: &num::BigUint, b: u32) -> Option<u64> {
    use num::BigUint;
    let e = ilog_floor(x, b);
    let back = num::pow::pow(BigUint::from(b), e as usize);
    (&back == x).then_some(e)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_fractions_and_integers() {
        assert_eq!(parse_rational("1/3").unwrap(), rat(1, 3));
        assert_eq!(parse_rational("2").unwrap(), rat(2, 1));
        assert_eq!(parse_rational("-7/2").unwrap(), rat(-7, 2));
        assert_eq!(parse_rational(" 10/4 ").unwrap(), rat(5, 2));
    }

    #[test]
    fn rejects_decimals_and_garbage() {
        assert!(parse_rational("0.5").is_err());
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("").is_err());
        assert!(parse_rational("a/b").is_err());
        assert!(parse_rational("1/2/3").is_err());
    }

    #[test]
    fn canonical_format() {
        assert_eq!(format_rational(&rat(2, 4)), "1/2");
        assert_eq!(format_rational(&rat(0, 5)), "0/1");
        assert_eq!(format_rational(&rat(3, -6)), "-1/2");
    }

    #[test]
    fn decimal_rendering() {
        assert_eq!(to_decimal(&rat(1, 2), 12), "0.5");
        assert_eq!(to_decimal(&rat(1, 110), 12), "0.00909090909091");
        assert_eq!(to_decimal(&rat(100, 128), 12), "0.78125");
        assert_eq!(to_decimal(&rat(0, 1), 12), "0");
        assert_eq!(to_decimal(&rat(20, 17), 12), "1.17647058824");
        assert_eq!(to_decimal(&rat(-1, 3), 5), "-0.33333");
        assert_eq!(to_decimal(&rat(2, 3), 3), "0.667");
        assert_eq!(to_decimal(&rat(999999, 1000), 3), "1000");
        assert_eq!(to_decimal(&rat(12345, 1), 3), "12300");
    }

    #[test]
    fn distortion_ordering_treats_infinity_as_top() {
        let half = Distortion::Finite(rat(1, 2));
        let one = Distortion::Finite(rat(1, 1));
        assert!(half < one);
        assert!(one < Distortion::Infinite);
        assert_eq!(
            Distortion::Infinite.cmp(&Distortion::Infinite),
            Ordering::Equal
        );
        assert_eq!(Distortion::Infinite.to_string(), "inf");
        assert_eq!(half.to_string(), "1/2");
    }

    #[test]
    fn integer_log_bracketing() {
        use num::BigUint;
        assert_eq!(ilog_floor(&BigUint::from(1u32), 2), 0);
        assert_eq!(ilog_floor(&BigUint::from(7u32), 2), 2);
        assert_eq!(ilog_floor(&BigUint::from(8u32), 2), 3);
        assert_eq!(exact_log(&BigUint::from(81u32), 3), Some(4));
        assert_eq!(exact_log(&BigUint::from(80u32), 3), None);
    }
}
