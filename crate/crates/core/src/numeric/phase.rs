//! Rationals and exact phases `e(x) = exp(2 pi i x)` with `x` in `Q/Z`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num::integer::Integer;
use num::{BigInt, BigRational, One, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

/// Shorthand constructor `n/d`.
pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Parses `"a/b"`, `"a"` or `"-a/b"`.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n: BigInt = n.parse().map_err(|_| Error::Parse(format!("bad rational {s:?}")))?;
    let d: BigInt = d.parse().map_err(|_| Error::Parse(format!("bad rational {s:?}")))?;
    if d.is_zero() {
        return Err(Error::Parse(format!("zero denominator in {s:?}")));
    }
    Ok(Rational::new(n, d))
}

pub fn format_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// An element of `Q/Z`, written multiplicatively as `e(num/den)`.
///
/// Always reduced with `0 <= num < den`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Phase {
    num: u64,
    den: u64,
}

impl Phase {
    pub const ONE: Phase = Phase { num: 0, den: 1 };

    pub fn new(num: i64, den: i64) -> Phase {
        assert!(den != 0, "phase with zero denominator");
        let (num, den) = if den < 0 { (-num, -den) } else { (num, den) };
        let r = num.rem_euclid(den);
        let g = r.gcd(&den);
        Phase { num: (r / g) as u64, den: (den / g) as u64 }
    }

    pub fn from_rational(r: &Rational) -> Phase {
        let den = r.denom();
        let num = r.numer().mod_floor(den);
        let den = den.to_i64().expect("phase denominator fits in i64");
        Phase::new(num.to_i64().unwrap(), den)
    }

    pub fn numer(&self) -> u64 {
        self.num
    }

    pub fn denom(&self) -> u64 {
        self.den
    }

    /// Order of the phase as a root of unity.
    pub fn order(&self) -> u64 {
        self.den
    }

    pub fn is_one(&self) -> bool {
        self.num == 0
    }

    pub fn value(&self) -> Rational {
        rat(self.num as i64, self.den as i64)
    }

    pub fn inv(&self) -> Phase {
        Phase::new(-(self.num as i64), self.den as i64)
    }

    pub fn pow(&self, k: i64) -> Phase {
        let n = (self.num as i128 * k as i128).rem_euclid(self.den as i128);
        Phase::new(n as i64, self.den as i64)
    }

    pub fn to_f64(&self) -> f64 {
        self.num as f64 / self.den as f64
    }

    /// Parses `"a/b"` as a phase, reducing modulo 1.
    pub fn parse(s: &str) -> Result<Phase> {
        parse_rational(s).map(|r| Phase::from_rational(&r))
    }
}

/// `phase_mul`: multiplication of phases adds their arguments mod 1.
impl Mul for Phase {
    type Output = Phase;
    fn mul(self, o: Phase) -> Phase {
        let den = self.den.lcm(&o.den);
        let n = self.num as u128 * (den / self.den) as u128 + o.num as u128 * (den / o.den) as u128;
        Phase::new((n % den as u128) as i64, den as i64)
    }
}

impl Default for Phase {
    fn default() -> Self {
        Phase::ONE
    }
}

impl fmt::Debug for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "e({}/{})", self.num, self.den)
    }
}

impl fmt::Display for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == 1 {
            write!(f, "0")
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

// Additive notation on Q/Z, used by cochain code.
impl Add for Phase {
    type Output = Phase;
    fn add(self, o: Phase) -> Phase {
        self * o
    }
}

impl Neg for Phase {
    type Output = Phase;
    fn neg(self) -> Phase {
        self.inv()
    }
}

impl Sub for Phase {
    type Output = Phase;
    fn sub(self, o: Phase) -> Phase {
        self * o.inv()
    }
}
impl serde::Serialize for Phase {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> serde::Deserialize<'de> for Phase {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Phase, D::Error> {
        let s = String::deserialize(d)?;
        Phase::parse(&s).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn phase_products() {
        assert_eq!(Phase::new(1, 2) * Phase::new(1, 2), Phase::ONE);
        assert_eq!(Phase::new(1, 3) * Phase::new(1, 2), Phase::new(5, 6));
        assert_eq!(Phase::new(3, 4) * Phase::new(3, 4), Phase::new(1, 2));
    }

    #[test]
    fn phase_reduces_mod_one() {
        assert_eq!(Phase::new(-1, 4), Phase::new(3, 4));
        assert_eq!(Phase::new(6, 4), Phase::new(1, 2));
        assert_eq!(Phase::parse("-7/3").unwrap(), Phase::new(2, 3));
        assert_eq!(Phase::new(2, 6).pow(-1), Phase::new(2, 3));
    }

    #[test]
    fn rational_parsing() {
        assert_eq!(parse_rational("-3/6").unwrap(), rat(-1, 2));
        assert_eq!(parse_rational("5").unwrap(), rat(5, 1));
        assert!(parse_rational("1/0").is_err());
        assert_eq!(format_rational(&rat(-2, 4)), "-1/2");
    }
}
