//! Exact rational helpers: parsing, formatting, common denominators.
//!
//! Rationals are carried end to end as `num::BigRational` so that vertex
//! coordinates, optimality gaps and oracle baselines never see float drift.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

/// Shorthand used pervasively in tests: `rat(7, 20)` is 7/20.
pub fn rat(numer: i64, denom: i64) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

/// Parses `"a/b"`, an integer `"a"`, or a finite decimal `"0.6"` exactly.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let s = text.trim();
    if s.is_empty() {
        return Err(Error::InvalidArgument("empty rational literal".into()));
    }
    let bad = |_| Error::InvalidArgument(format!("malformed rational literal `{s}`"));
    if let Some((n, d)) = s.split_once('/') {
        let numer: BigInt = n.trim().parse().map_err(bad)?;
        let denom: BigInt = d.trim().parse().map_err(bad)?;
        if denom.is_zero() {
            return Err(Error::InvalidArgument(format!("zero denominator in `{s}`")));
        }
        return Ok(Rational::new(numer, denom));
    }
    if let Some((int, frac)) = s.split_once('.') {
        let int_part: BigInt = if int.is_empty() || int == "-" {
            BigInt::zero()
        } else {
            int.parse().map_err(bad)?
        };
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(Error::InvalidArgument(format!(
                "malformed rational literal `{s}`"
            )));
        }
        let scale = BigInt::from(10u32).pow(frac.len() as u32);
        let frac_part: BigInt = frac.parse().map_err(bad)?;
        let negative = s.starts_with('-');
        let mut value = Rational::from(int_part.clone());
        let frac_rat = Rational::new(frac_part, scale);
        if negative {
            value -= frac_rat;
        } else {
            value += frac_rat;
        }
        return Ok(value);
    }
    let numer: BigInt = s.parse().map_err(bad)?;
    Ok(Rational::from(numer))
}

/// Formats as `"a/b"`, or plain `"a"` for integers. Round-trips through
/// [`parse_rational`].
pub fn format_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Least common multiple of the denominators, i.e. the smallest `N` with
/// every entry in `(1/N)·Z`.
pub fn common_denominator(values: &[Rational]) -> BigInt {
    let mut acc = BigInt::one();
    for v in values {
        acc = num::integer::lcm(acc, v.denom().clone());
    }
    acc
}

pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().expect("rational out of f64 range")
}

/// Exact dot product of two rational vectors.
pub fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    debug_assert_eq!(a.len(), b.len());
    let mut acc = Rational::zero();
    for (x, y) in a.iter().zip(b) {
        acc += x * y;
    }
    acc
}

/// Exact squared Euclidean distance.
pub fn dist_sq(a: &[Rational], b: &[Rational]) -> Rational {
    debug_assert_eq!(a.len(), b.len());
    let mut acc = Rational::zero();
    for (x, y) in a.iter().zip(b) {
        let d = x - y;
        acc += &d * &d;
    }
    acc
}

/// True when `0 <= r <= 1`.
pub fn in_unit_interval(r: &Rational) -> bool {
    !r.is_negative() && *r <= Rational::one()
}
