//! Exact rationals and small vector helpers.
//!
//! Rationals are `num_rational::BigRational`, which keeps every value in
//! lowest terms with a positive denominator. The text form used in every
//! document is `"p/q"`, or `"p"` for integers.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rat = num_rational::BigRational;
pub type RatVec = Vec<Rat>;
pub type IntVec = Vec<i64>;

pub fn int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

pub fn to_rat_vec(v: &[i64]) -> RatVec {
    v.iter().map(|&x| int(x)).collect()
}

pub fn dot(a: &[Rat], b: &[Rat]) -> Rat {
    a.iter().zip(b).fold(Rat::zero(), |acc, (x, y)| acc + x * y)
}

/// `<a, u>` for a rational vector and an integer direction.
pub fn dot_int(a: &[Rat], u: &[i64]) -> Rat {
    let mut acc = Rat::zero();
    for (x, &y) in a.iter().zip(u) {
        if y != 0 {
            acc += x * BigInt::from(y);
        }
    }
    acc
}

pub fn sub(a: &[Rat], b: &[Rat]) -> RatVec {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, i| acc * BigInt::from(i))
}

pub fn floor(x: &Rat) -> BigInt {
    x.numer().div_floor(x.denom())
}

pub fn format_rat(x: &Rat) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub fn format_vec(v: &[Rat]) -> Vec<String> {
    v.iter().map(format_rat).collect()
}

/// Parses `"p"`, `"-p"`, or `"p/q"` with `q > 0`. Leading `+` signs, signed
/// denominators and surrounding whitespace are rejected so that the text form is canonical
/// after one round trip.
pub fn parse_rat(s: &str) -> Result<Rat> {
    let bad = || Error::InvalidInput(format!("malformed rational {s:?}"));
    let parse_int = |t: &str| -> Result<BigInt> {
        let digits = t.strip_prefix('-').unwrap_or(t);
        if digits.is_empty() || !digits.bytes().all(|c| c.is_ascii_digit()) {
            return Err(bad());
        }
        t.parse::<BigInt>().map_err(|_| bad())
    };
    match s.split_once('/') {
        None => Ok(Rat::from_integer(parse_int(s)?)),
        Some((n, d)) => {
            let n = parse_int(n)?;
            if d.starts_with('-') {
                return Err(bad());
            }
            let d = parse_int(d)?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(Rat::new(n, d))
        }
    }
}

pub fn to_f64(x: &Rat) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

pub fn is_primitive(v: &[i64]) -> bool {
    v.iter().fold(0i64, |g, &x| g.gcd(&x)) == 1
}

/// Divides by the gcd of the entries. Returns `None` for the zero vector.
pub fn primitivize(v: &[i64]) -> Option<IntVec> {
    let g = v.iter().fold(0i64, |g, &x| g.gcd(&x));
    if g == 0 {
        return None;
    }
    Some(v.iter().map(|x| x / g).collect())
}

/// Scales a nonzero rational vector to the primitive integer vector with the
/// same direction.
pub fn primitive_integer_direction(v: &[Rat]) -> Vec<BigInt> {
    let l = v.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let ints: Vec<BigInt> = v.iter().map(|x| (x * &l).to_integer()).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    debug_assert!(!g.is_zero());
    ints.into_iter().map(|x| x / &g).collect()
}

pub fn abs(x: &Rat) -> Rat {
    x.abs()
}
