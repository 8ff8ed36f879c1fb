//! Exact rationals: parsing and formatting as `p/q`, and vector helpers.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

/// Parses `p/q` or a bare integer `p`, with optional sign and surrounding spaces.
pub fn parse_rational(s: &str) -> Result<Q> {
    let t = s.trim();
    let bad = || Error::Parse(format!("not a rational number: {s:?}"));
    let int = |x: &str| -> Result<BigInt> {
        let x = x.trim();
        let digits = x.strip_prefix(['-', '+']).unwrap_or(x);
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        x.parse::<BigInt>().map_err(|_| bad())
    };
    match t.split_once('/') {
        Some((n, d)) => {
            let d = int(d)?;
            if d.is_zero() {
                return Err(Error::Parse(format!("zero denominator in {s:?}")));
            }
            Ok(Q::new(int(n)?, d))
        }
        None => Ok(Q::from_integer(int(t)?)),
    }
}

/// Always `p/q` in lowest terms with a positive denominator.
pub fn format_rational(x: &Q) -> String {
    format!("{}/{}", x.numer(), x.denom())
}

/// Comma-separated rationals, e.g. `-1/2, 3/7, 0`.
pub fn parse_point(s: &str) -> Result<Vec<Q>> {
    if s.trim().is_empty() {
        return Err(Error::Parse("empty point".into()));
    }
    s.split(',').map(parse_rational).collect()
}

pub fn format_point(x: &[Q]) -> Vec<String> {
    x.iter().map(format_rational).collect()
}

pub fn dot(x: &[Q], d: &[i64]) -> Q {
    x.iter().zip(d).fold(Q::zero(), |acc, (a, &b)| acc + a * q(b))
}

pub fn one_dot(d: &[i64]) -> i64 {
    d.iter().sum()
}

/// `x + t * (1, ..., 1)`.
pub fn shift(x: &[Q], t: &Q) -> Vec<Q> {
    x.iter().map(|a| a + t).collect()
}

pub fn midpoint(x: &[Q], y: &[Q]) -> Vec<Q> {
    let half = Q::new(BigInt::one(), BigInt::from(2));
    x.iter().zip(y).map(|(a, b)| (a + b) * &half).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        for s in ["3/4", "-6/8", "5", "+2/3", " 7 / 9 "] {
            let x = parse_rational(s).unwrap();
            assert_eq!(parse_rational(&format_rational(&x)).unwrap(), x);
        }
        assert_eq!(format_rational(&parse_rational("-6/8").unwrap()), "-3/4");
        assert_eq!(format_rational(&parse_rational("5").unwrap()), "5/1");
    }

    #[test]
    fn rejects_garbage() {
        for s in ["", "1/0", "a/2", "1/2/3", "--1", "1.5", "/", "3/"] {
            assert!(parse_rational(s).is_err(), "{s}");
        }
    }

    #[test]
    fn point_parsing() {
        let p = parse_point("1/2,-1,0").unwrap();
        assert_eq!(p, vec![ratio(1, 2), q(-1), q(0)]);
        assert!(parse_point("").is_err());
    }
}
