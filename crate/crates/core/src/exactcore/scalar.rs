//! Exact rational scalars and the base parameter `u` with `q = u^8`.
//!
//! Every fractional power of `q` that shows up in the melting-crystal
//! formulas is a multiple of 1/8, so writing `q = u^8` turns all of them into
//! integer powers of a single rational number.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Exact scalar. Always gcd-reduced with a positive denominator.
pub type Rat = BigRational;

pub fn rat(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

/// Parses `"p/q"`, `"p"` or a plain decimal integer.
pub fn parse_rat(s: &str) -> Result<Rat> {
    let s = s.trim();
    let bad = || Error::InvalidArgument(format!("not a rational: {s:?}"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n = BigInt::from_str(n.trim()).map_err(|_| bad())?;
            let d = BigInt::from_str(d.trim()).map_err(|_| bad())?;
            if d.is_zero() {
                return Err(Error::DivisionByZero);
            }
            Ok(Rat::new(n, d))
        }
        None => Ok(Rat::from_integer(BigInt::from_str(s).map_err(|_| bad())?)),
    }
}

/// `"p/q"` rendering used in every JSON report (integers keep the `/1`).
pub fn fmt_rat(r: &Rat) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

pub fn rat_to_f64(r: &Rat) -> f64 {
    use num_traits::ToPrimitive;
    match (r.numer().to_f64(), r.denom().to_f64()) {
        (Some(n), Some(d)) if n.is_finite() && d.is_finite() => n / d,
        _ => {
            // Scale down both parts so the quotient survives the conversion.
            let shift = r.numer().bits().max(r.denom().bits()).saturating_sub(900);
            let n = (r.numer() >> shift).to_f64().unwrap_or(f64::NAN);
            let d = (r.denom() >> shift).to_f64().unwrap_or(f64::NAN);
            n / d
        }
    }
}

pub fn binomial(n: u64, k: u64) -> Rat {
    if k > n {
        return Rat::zero();
    }
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    Rat::from_integer(acc)
}

pub fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, i| acc * BigInt::from(i))
}

/// Serde adapter storing a [`Rat`] as a `"p/q"` string.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RatStr(pub Rat);

impl fmt::Debug for RatStr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&fmt_rat(&self.0))
    }
}

impl fmt::Display for RatStr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&fmt_rat(&self.0))
    }
}

impl Serialize for RatStr {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&fmt_rat(&self.0))
    }
}

impl<'de> Deserialize<'de> for RatStr {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        parse_rat(&s).map(RatStr).map_err(serde::de::Error::custom)
    }
}

impl From<Rat> for RatStr {
    fn from(r: Rat) -> Self {
        RatStr(r)
    }
}

/// The numeric value of the base parameter together with cached powers.
///
/// `q = u^8`, so `q^(k/8) = u^k`. All `q`-dependent scalars in the crate are
/// produced through this type.
#[derive(Clone, Debug, PartialEq)]
pub struct QParams {
    u: Rat,
    q: Rat,
}

impl QParams {
    pub fn new(u: Rat) -> Result<Self> {
        if u.is_zero() || u.abs().is_one() {
            return Err(Error::SpecializationPole(format!(
                "u = {} makes 1 - q^k vanish",
                fmt_rat(&u)
            )));
        }
        let q = u.pow(8);
        Ok(QParams { u, q })
    }

    /// u = 2/3, q = 256/6561.
    pub fn default_params() -> Self {
        Self::new(ratio(2, 3)).expect("2/3 is admissible")
    }

    pub fn u(&self) -> &Rat {
        &self.u
    }

    pub fn q(&self) -> &Rat {
        &self.q
    }

    /// `u^k = q^(k/8)`.
    pub fn u_pow(&self, k: i64) -> Rat {
        pow_i64(&self.u, k)
    }

    /// `q^k`.
    pub fn q_pow(&self, k: i64) -> Rat {
        pow_i64(&self.q, k)
    }

    /// `q^(k/2)`.
    pub fn q_half_pow(&self, k: i64) -> Rat {
        self.u_pow(4 * k)
    }

    /// `1 - q^k`, rejecting `k = 0`.
    pub fn one_minus_q_pow(&self, k: i64) -> Result<Rat> {
        if k == 0 {
            return Err(Error::SpecializationPole("1 - q^0".into()));
        }
        Ok(Rat::one() - self.q_pow(k))
    }

    /// `(q;q)_n = prod_{j=1}^n (1 - q^j)`.
    pub fn q_pochhammer(&self, n: u64) -> Rat {
        (1..=n as i64).fold(Rat::one(), |acc, j| acc * (Rat::one() - self.q_pow(j)))
    }

    /// Power sum `p_k(q^{-rho}) = sum_i q^{k(i-1/2)} = q^{k/2} / (1 - q^k)`.
    pub fn power_sum_rho(&self, k: i64) -> Result<Rat> {
        Ok(self.q_half_pow(k) / self.one_minus_q_pow(k)?)
    }
}

pub fn pow_i64(base: &Rat, k: i64) -> Rat {
    if k >= 0 {
        pow_u(base, k as u64)
    } else {
        pow_u(&base.recip(), k.unsigned_abs())
    }
}

fn pow_u(base: &Rat, mut k: u64) -> Rat {
    let mut acc = Rat::one();
    let mut b = base.clone();
    while k > 0 {
        if k & 1 == 1 {
            acc *= &b;
        }
        k >>= 1;
        if k > 0 {
            b = &b * &b;
        }
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format_round_trip() {
        assert_eq!(parse_rat("6/-4").unwrap(), ratio(-3, 2));
        assert_eq!(fmt_rat(&ratio(-3, 2)), "-3/2");
        assert_eq!(fmt_rat(&rat(5)), "5/1");
        assert_eq!(parse_rat("7").unwrap(), rat(7));
        assert!(parse_rat("1/0").is_err());
        assert!(parse_rat("x").is_err());
    }

    #[test]
    fn default_q_is_u_to_the_eighth() {
        let p = QParams::default_params();
        assert_eq!(p.q(), &ratio(256, 6561));
        assert_eq!(p.q_half_pow(1), ratio(16, 81));
        assert_eq!(p.u_pow(-2), ratio(9, 4));
    }

    #[test]
    fn rejects_degenerate_u() {
        assert!(QParams::new(rat(1)).is_err());
        assert!(QParams::new(rat(-1)).is_err());
        assert!(QParams::new(rat(0)).is_err());
        assert!(QParams::new(ratio(3, 2)).is_ok());
    }

    #[test]
    fn f64_conversion_of_huge_values() {
        let big = pow_i64(&ratio(3, 2), 3000) / pow_i64(&ratio(3, 2), 2999);
        assert!((rat_to_f64(&big) - 1.5).abs() < 1e-12);
        let r = pow_i64(&ratio(7, 3), 1200);
        let f = rat_to_f64(&(r.clone() / (r * rat(4))));
        assert!((f - 0.25).abs() < 1e-12);
    }
}
