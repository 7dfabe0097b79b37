//! Exact rational helpers shared by every layer of the engine.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::str::FromStr;

use crate::error::{Error, Result};

/// Exact rational scalar.
pub type Q = BigRational;

pub fn q(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

pub fn qi(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn to_f64(v: &Q) -> f64 {
    v.to_f64().unwrap_or(f64::NAN)
}

/// Parses an integer, a terminating decimal (`0.125`, `-3.5e-2` is not accepted)
/// or a fraction `p/q` into an exact rational. No binary floating point is involved.
pub fn parse_rational(text: &str) -> Result<Q> {
    let s = text.trim();
    let bad = || Error::Parse(format!("not a rational number: {text:?}"));
    if s.is_empty() {
        return Err(bad());
    }
    if let Some((n, d)) = s.split_once('/') {
        let n = parse_rational(n)?;
        let d = parse_rational(d)?;
        if d.is_zero() {
            return Err(Error::Parse(format!("zero denominator in {text:?}")));
        }
        return Ok(n / d);
    }
    let (neg, body) = match s.as_bytes()[0] {
        b'-' => (true, &s[1..]),
        b'+' => (false, &s[1..]),
        _ => (false, s),
    };
    if body.is_empty() || body.starts_with(['+', '-']) {
        return Err(bad());
    }
    let (int_part, frac_part) = match body.split_once('.') {
        Some((i, f)) => (i, f),
        None => (body, ""),
    };
    if !int_part.chars().all(|c| c.is_ascii_digit()) || !frac_part.chars().all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad());
    }
    let digits = format!("{int_part}{frac_part}");
    let numer = BigInt::from_str(if digits.is_empty() { "0" } else { &digits }).map_err(|_| bad())?;
    let denom = num_traits::pow(BigInt::from(10), frac_part.len());
    let v = Q::new(numer, denom);
    Ok(if neg { -v } else { v })
}

/// Renders a float with `sig` significant digits, switching to scientific
/// notation outside `[1e-6, 1e15)`.
pub fn format_sig(v: f64, sig: usize) -> String {
    let sig = sig.max(1);
    if v == 0.0 {
        return "0".to_string();
    }
    if !v.is_finite() {
        return format!("{v}");
    }
    let mag = v.abs().log10().floor() as i32;
    if !(-6..15).contains(&mag) {
        return format!("{:.*e}", sig - 1, v);
    }
    let decimals = (sig as i32 - 1 - mag).max(0) as usize;
    let s = format!("{:.*}", decimals, v);
    // "-0.000" style artefacts cannot appear because |v| >= 1e-6 here.
    s
}

/// Decimal rendering of an exact rational.
pub fn render_decimal(v: &Q, sig: usize) -> String {
    if v.is_integer() {
        return v.to_integer().to_string();
    }
    format_sig(to_f64(v), sig)
}

/// `p/q` rendering (integers render without the slash).
pub fn render_exact(v: &Q) -> String {
    if v.is_integer() {
        v.to_integer().to_string()
    } else {
        format!("{}/{}", v.numer(), v.denom())
    }
}

pub fn abs(v: &Q) -> Q {
    v.abs()
}

/// Converts a finite float to the exact rational it denotes.
pub fn from_f64(v: f64) -> Option<Q> {
    Q::from_float(v)
}

pub fn is_one(v: &Q) -> bool {
    v.is_one()
}

/// Integer square root test: returns `Some(r)` when `n = r²`.
pub fn exact_isqrt(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let r = n.sqrt();
    if &(&r * &r) == n {
        Some(r)
    } else {
        None
    }
}

/// Splits a positive integer as `n = s² · d` with `d` squarefree, returning `(s, d)`.
///
/// Trial division runs up to `TRIAL_LIMIT`; a remaining cofactor is treated as
/// squarefree unless it is a perfect square.
pub fn square_free_split(n: &BigInt) -> (BigInt, BigInt) {
    const TRIAL_LIMIT: u64 = 1_000_000;
    assert!(n.is_positive(), "square_free_split needs a positive integer");
    let mut rest = n.clone();
    let mut square = BigInt::one();
    let mut free = BigInt::one();
    let mut p: u64 = 2;
    while p <= TRIAL_LIMIT {
        let bp = BigInt::from(p);
        if &bp * &bp > rest {
            break;
        }
        let mut e = 0u32;
        while (&rest % &bp).is_zero() {
            rest /= &bp;
            e += 1;
        }
        if e > 0 {
            square *= num_traits::pow(bp.clone(), (e / 2) as usize);
            if e % 2 == 1 {
                free *= &bp;
            }
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if !rest.is_one() {
        match exact_isqrt(&rest) {
            Some(r) => square *= r,
            None => free *= rest,
        }
    }
    (square, free)
}

/// `√v = c·√d` for a nonnegative rational `v`, with `c` rational and `d`
/// a squarefree positive integer.
pub fn sqrt_rational(v: &Q) -> (Q, BigInt) {
    assert!(!v.is_negative(), "square root of a negative rational");
    if v.is_zero() {
        return (Q::zero(), BigInt::one());
    }
    // √(p/q) = √(p q) / q
    let pq = v.numer() * v.denom();
    let (s, d) = square_free_split(&pq);
    (Q::new(s, v.denom().clone()), d)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_decimals_and_fractions_exactly() {
        assert_eq!(parse_rational("0.1").unwrap(), q(1, 10));
        assert_eq!(parse_rational("-3/4").unwrap(), q(-3, 4));
        assert_eq!(parse_rational("2").unwrap(), qi(2));
        assert_eq!(parse_rational(".5").unwrap(), q(1, 2));
        assert_eq!(parse_rational("1.5/3").unwrap(), q(1, 2));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("abc").is_err());
        assert!(parse_rational("--1").is_err());
        assert!(parse_rational("").is_err());
    }

    #[test]
    fn square_free_parts() {
        assert_eq!(square_free_split(&BigInt::from(160)), (BigInt::from(4), BigInt::from(10)));
        assert_eq!(square_free_split(&BigInt::from(61)), (BigInt::from(1), BigInt::from(61)));
        assert_eq!(square_free_split(&BigInt::from(1)), (BigInt::from(1), BigInt::from(1)));
        let (c, d) = sqrt_rational(&q(32, 9));
        assert_eq!((c, d), (q(4, 3), BigInt::from(2)));
    }

    #[test]
    fn significant_digits() {
        assert_eq!(format_sig(5f64.sqrt(), 12), "2.23606797750");
        assert_eq!(format_sig(-0.25, 3), "-0.250");
        assert_eq!(format_sig(1234.4, 2), "1234");
    }
}
