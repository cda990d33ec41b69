//! Exact arithmetic for dimension formulas.
//!
//! Dimensions of the base-3 digit-restricted sets built in [`crate::dimension`]
//! have the form `a + b·log₃2` with rational `a`, `b`. The bound formulas are
//! polynomial in `s` and `t` with rational coefficients and only divide by
//! integers, so the ring `Q[log₃2]` is closed under everything they do. An
//! [`Exact`] is a polynomial in `λ = log₃2` with rational coefficients.
//! Since `λ` is transcendental a nonzero polynomial never vanishes at `λ`, so
//! sign and ceiling decisions on non-rational values can be read off a
//! floating-point evaluation.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::{LabError, Result};

/// `log₃ 2`.
pub const LOG3_2: f64 = std::f64::consts::LN_2 / 1.098_612_288_668_109_8;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Exact {
    /// `coeffs[i]` multiplies `λ^i`; no trailing zeros.
    coeffs: Vec<BigRational>,
}

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

impl Exact {
    pub fn zero() -> Self {
        Exact { coeffs: Vec::new() }
    }

    pub fn int(n: i64) -> Self {
        Self::rational(rat(n, 1))
    }

    pub fn ratio(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        Self::rational(rat(num, den))
    }

    pub fn rational(r: BigRational) -> Self {
        Exact { coeffs: vec![r] }.trimmed()
    }

    /// `a + b·log₃2`.
    pub fn with_log3_2(a: BigRational, b: BigRational) -> Self {
        Exact { coeffs: vec![a, b] }.trimmed()
    }

    /// `log₃2` itself.
    pub fn log3_2() -> Self {
        Self::with_log3_2(BigRational::zero(), BigRational::one())
    }

    /// Exact value of a finite `f64` (every finite double is a dyadic rational).
    pub fn from_f64(x: f64) -> Result<Self> {
        BigRational::from_float(x)
            .map(Self::rational)
            .ok_or_else(|| LabError::param(format!("non-finite value {x}")))
    }

    fn trimmed(mut self) -> Self {
        while self.coeffs.last().is_some_and(Zero::is_zero) {
            self.coeffs.pop();
        }
        self
    }

    pub fn is_rational(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn as_rational(&self) -> Option<BigRational> {
        match self.coeffs.len() {
            0 => Some(BigRational::zero()),
            1 => Some(self.coeffs[0].clone()),
            _ => None,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn to_f64(&self) -> f64 {
        // Horner in λ
        self.coeffs
            .iter()
            .rev()
            .fold(0.0, |acc, c| acc * LOG3_2 + c.to_f64().unwrap_or(f64::NAN))
    }

    pub fn signum(&self) -> i32 {
        if let Some(r) = self.as_rational() {
            return if r.is_positive() {
                1
            } else if r.is_negative() {
                -1
            } else {
                0
            };
        }
        let v = self.to_f64();
        debug_assert!(v != 0.0);
        if v > 0.0 {
            1
        } else {
            -1
        }
    }

    /// Smallest integer `≥ self`.
    pub fn ceil(&self) -> i64 {
        match self.as_rational() {
            Some(r) => r.ceil().to_integer().to_i64().expect("ceiling out of i64 range"),
            None => self.to_f64().ceil() as i64,
        }
    }

    /// Division by a nonzero rational value. Fails if the divisor is not
    /// rational (the ring is not closed under that).
    pub fn checked_div(&self, rhs: &Exact) -> Result<Exact> {
        let d = rhs
            .as_rational()
            .ok_or_else(|| LabError::param("division by a non-rational value"))?;
        if d.is_zero() {
            return Err(LabError::param("division by zero"));
        }
        Ok(Exact {
            coeffs: self.coeffs.iter().map(|c| c / &d).collect(),
        }
        .trimmed())
    }

    pub fn div_int(&self, d: i64) -> Exact {
        self.checked_div(&Exact::int(d)).expect("integer divisor must be nonzero")
    }

    pub fn min(self, other: Exact) -> Exact {
        if other < self {
            other
        } else {
            self
        }
    }

    pub fn max(self, other: Exact) -> Exact {
        if other > self {
            other
        } else {
            self
        }
    }
}

impl From<i64> for Exact {
    fn from(n: i64) -> Self {
        Exact::int(n)
    }
}

impl From<BigRational> for Exact {
    fn from(r: BigRational) -> Self {
        Exact::rational(r)
    }
}

impl Add for &Exact {
    type Output = Exact;
    fn add(self, rhs: &Exact) -> Exact {
        let len = self.coeffs.len().max(rhs.coeffs.len());
        let coeffs = (0..len)
            .map(|i| {
                let a = self.coeffs.get(i).cloned().unwrap_or_else(BigRational::zero);
                let b = rhs.coeffs.get(i).cloned().unwrap_or_else(BigRational::zero);
                a + b
            })
            .collect();
        Exact { coeffs }.trimmed()
    }
}

impl Neg for &Exact {
    type Output = Exact;
    fn neg(self) -> Exact {
        Exact {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl Sub for &Exact {
    type Output = Exact;
    fn sub(self, rhs: &Exact) -> Exact {
        self + &(-rhs)
    }
}

impl Mul for &Exact {
    type Output = Exact;
    fn mul(self, rhs: &Exact) -> Exact {
        if self.is_zero() || rhs.is_zero() {
            return Exact::zero();
        }
        let mut coeffs = vec![BigRational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        Exact { coeffs }.trimmed()
    }
}

macro_rules! forward_owned {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr for Exact {
            type Output = Exact;
            fn $m(self, rhs: Exact) -> Exact { (&self).$m(&rhs) }
        }
        impl $tr<&Exact> for Exact {
            type Output = Exact;
            fn $m(self, rhs: &Exact) -> Exact { (&self).$m(rhs) }
        }
        impl $tr<Exact> for &Exact {
            type Output = Exact;
            fn $m(self, rhs: Exact) -> Exact { self.$m(&rhs) }
        }
        impl $tr<i64> for Exact {
            type Output = Exact;
            fn $m(self, rhs: i64) -> Exact { (&self).$m(&Exact::int(rhs)) }
        }
        impl $tr<i64> for &Exact {
            type Output = Exact;
            fn $m(self, rhs: i64) -> Exact { self.$m(&Exact::int(rhs)) }
        }
    )*};
}
forward_owned!(Add add, Sub sub, Mul mul);

impl Neg for Exact {
    type Output = Exact;
    fn neg(self) -> Exact {
        -&self
    }
}

impl PartialOrd for Exact {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Exact {
    fn cmp(&self, other: &Self) -> Ordering {
        (self - other).signum().cmp(&0)
    }
}

fn fmt_rational(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Display for Exact {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let (neg, mag) = (c.is_negative(), c.abs());
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            let power = match i {
                0 => String::new(),
                1 => "log3(2)".to_string(),
                p => format!("log3(2)^{p}"),
            };
            if i == 0 {
                write!(f, "{}", fmt_rational(&mag))?;
            } else if mag.is_one() {
                write!(f, "{power}")?;
            } else {
                write!(f, "{}*{power}", fmt_rational(&mag))?;
            }
        }
        Ok(())
    }
}

fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let bad = || LabError::param(format!("cannot parse number '{s}'"));
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| bad())?;
        let d: BigInt = d.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        return Ok(BigRational::new(n, d));
    }
    let (neg, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s.strip_prefix('+').unwrap_or(s)),
    };
    let (int_part, frac_part) = body.split_once('.').unwrap_or((body, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad());
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let digits = format!("{int_part}{frac_part}");
    let numer: BigInt = digits.parse().map_err(|_| bad())?;
    let denom = num_traits::pow(BigInt::from(10), frac_part.len());
    let r = BigRational::new(numer, denom);
    Ok(if neg { -r } else { r })
}

impl FromStr for Exact {
    type Err = LabError;

    /// Accepts integers, decimals (`3.5`, read exactly), fractions (`7/2`) and
    /// sums of those with `log3(2)` terms, e.g. `1 + log3(2)` or `2*log3(2)`.
    fn from_str(s: &str) -> Result<Self> {
        let normalized = s.replace(' ', "").replace('-', "+-");
        let mut total = Exact::zero();
        let mut any = false;
        for term in normalized.split('+').filter(|t| !t.is_empty()) {
            any = true;
            let (neg, term) = match term.strip_prefix('-') {
                Some(t) => (true, t),
                None => (false, term),
            };
            let value = if let Some(coef) = term.strip_suffix("log3(2)") {
                let coef = coef.strip_suffix('*').unwrap_or(coef);
                let c = if coef.is_empty() {
                    BigRational::one()
                } else {
                    parse_rational(coef)?
                };
                Exact::with_log3_2(BigRational::zero(), c)
            } else {
                Exact::rational(parse_rational(term)?)
            };
            total = if neg { total - value } else { total + value };
        }
        if !any {
            return Err(LabError::param(format!("cannot parse number '{s}'")));
        }
        Ok(total)
    }
}

/// JSON form: the decimal value plus the exact expression.
#[derive(Serialize, Deserialize)]
struct ExactRepr {
    value: f64,
    exact: String,
}

impl Serialize for Exact {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        ExactRepr {
            value: self.to_f64(),
            exact: self.to_string(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Exact {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let repr = ExactRepr::deserialize(deserializer)?;
        repr.exact.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_display() {
        let x: Exact = "3.5".parse().unwrap();
        assert_eq!(x, Exact::ratio(7, 2));
        assert_eq!(x.to_string(), "7/2");
        let y: Exact = "1 + log3(2)".parse().unwrap();
        assert_eq!(y.to_string(), "1 + log3(2)");
        assert!((y.to_f64() - 1.630_929_753_571_457).abs() < 1e-12);
        let z: Exact = "-1/2 - 3/2*log3(2)".parse().unwrap();
        assert_eq!(z.to_string(), "-1/2 - 3/2*log3(2)");
        assert!("abc".parse::<Exact>().is_err());
        assert!("1/0".parse::<Exact>().is_err());
    }

    #[test]
    fn ring_operations_are_exact() {
        let s = Exact::int(1) + Exact::log3_2();
        let back = (&(&Exact::int(1) + &s) - 1i64) - &s;
        assert!(back.is_zero());
        let sq = &s * &s;
        assert_eq!(sq.to_string(), "1 + 2*log3(2) + log3(2)^2");
        assert_eq!(s.ceil(), 2);
        assert_eq!(Exact::int(2).ceil(), 2);
        assert_eq!(Exact::ratio(3, 2).ceil(), 2);
        assert_eq!(Exact::ratio(-3, 2).ceil(), -1);
        assert!(Exact::log3_2() < Exact::ratio(2, 3));
        assert!(Exact::log3_2() > Exact::ratio(5, 8));
    }

    #[test]
    fn division_requires_rational_divisor() {
        assert!(Exact::int(1).checked_div(&Exact::log3_2()).is_err());
        assert!(Exact::int(1).checked_div(&Exact::zero()).is_err());
        assert_eq!(Exact::int(17).div_int(6), Exact::ratio(17, 6));
    }

    #[test]
    fn serde_round_trip() {
        let y = Exact::ratio(1, 3) + Exact::log3_2();
        let json = serde_json::to_string(&y).unwrap();
        let back: Exact = serde_json::from_str(&json).unwrap();
        assert_eq!(back, y);
    }
}
