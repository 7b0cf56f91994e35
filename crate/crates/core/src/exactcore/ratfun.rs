//! Exact univariate rational functions.

use std::fmt;


use super::poly::Poly;
use super::ring::Ring;
use super::scalar::Rat;
use crate::error::{Error, Result};
use crate::profile::{timed, Kernel};

/// `num / den` with `den` monic and `gcd(num, den) = 1`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RatFun {
    num: Poly,
    den: Poly,
}

impl fmt::Debug for RatFun {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:?}) / ({:?})", self.num, self.den)
    }
}

impl RatFun {
    pub fn new(num: Poly, den: Poly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::normalized(num, den))
    }

    fn normalized(num: Poly, den: Poly) -> Self {
        timed(Kernel::RationalFunction, || {
            if num.is_zero() {
                return RatFun { num, den: Poly::one() };
            }
            let g = Poly::gcd(&num, &den);
            let (num, den) = if g.degree() == Some(0) {
                (num, den)
            } else {
                (num.div_rem(&g).0, den.div_rem(&g).0)
            };
            let lead = den.leading().expect("nonzero denominator").recip();
            RatFun { num: num.scale(&lead), den: den.scale(&lead) }
        })
    }

    pub fn from_poly(p: Poly) -> Self {
        RatFun { num: p, den: Poly::one() }
    }

    pub fn constant(c: Rat) -> Self {
        Self::from_poly(Poly::constant(c))
    }

    pub fn x() -> Self {
        Self::from_poly(Poly::x())
    }

    /// `(a + b x) / (c + d x)`.
    pub fn linear_fraction(a: Rat, b: Rat, c: Rat, d: Rat) -> Result<Self> {
        Self::new(Poly::linear(a, b), Poly::linear(c, d))
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn add(&self, o: &RatFun) -> RatFun {
        if o.is_zero() {
            return self.clone();
        }
        if self.is_zero() {
            return o.clone();
        }
        if self.den == o.den {
            return Self::normalized(self.num.add(&o.num), self.den.clone());
        }
        Self::normalized(
            self.num.mul(&o.den).add(&o.num.mul(&self.den)),
            self.den.mul(&o.den),
        )
    }

    pub fn neg(&self) -> RatFun {
        RatFun { num: self.num.neg(), den: self.den.clone() }
    }

    pub fn sub(&self, o: &RatFun) -> RatFun {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &RatFun) -> RatFun {
        if self.is_zero() || o.is_zero() {
            return RatFun::from_poly(Poly::zero());
        }
        Self::normalized(self.num.mul(&o.num), self.den.mul(&o.den))
    }

    pub fn scale(&self, c: &Rat) -> RatFun {
        if c.is_zero() {
            return RatFun::from_poly(Poly::zero());
        }
        RatFun { num: self.num.scale(c), den: self.den.clone() }
    }

    pub fn inv(&self) -> Result<RatFun> {
        RatFun::new(self.den.clone(), self.num.clone())
    }

    pub fn div(&self, o: &RatFun) -> Result<RatFun> {
        Ok(self.mul(&o.inv()?))
    }

    /// Exact value at `x`, or `SeriesPole` when the denominator vanishes.
    pub fn eval(&self, x: &Rat) -> Result<Rat> {
        let d = self.den.eval(x);
        if d.is_zero() {
            return Err(Error::SeriesPole(format!("rational function pole at x = {x}")));
        }
        Ok(self.num.eval(x) / d)
    }

    /// `f(c x)`; this realizes `q^{+-D}` for `c = q^{+-1}`.
    pub fn scale_var(&self, c: &Rat) -> RatFun {
        Self::normalized(self.num.scale_var(c), self.den.scale_var(c))
    }

    /// `f(x + c)`.
    pub fn shift_var(&self, c: &Rat) -> RatFun {
        Self::normalized(self.num.shift_var(c), self.den.shift_var(c))
    }

    /// Taylor coefficients at `x = 0` through `x^n`.
    pub fn taylor(&self, n: usize) -> Result<Vec<Rat>> {
        self.num
            .series_div(&self.den, n)
            .ok_or_else(|| Error::SeriesPole("rational function has a pole at 0".into()))
    }

    /// Coefficients of the expansion at infinity in powers of `y = 1/x`
    /// through `y^n`. Requires `deg num <= deg den`.
    pub fn expand_at_infinity(&self, n: usize) -> Result<Vec<Rat>> {
        let dd = self.den.degree().unwrap_or(0);
        match self.num.degree() {
            None => return Ok(vec![Rat::zero(); n + 1]),
            Some(nd) if nd > dd => {
                return Err(Error::SeriesPole("rational function has a pole at infinity".into()))
            }
            _ => {}
        }
        // f(1/y) = (y^dd num(1/y)) / (y^dd den(1/y))
        self.num
            .reversed(dd)
            .series_div(&self.den.reversed(dd), n)
            .ok_or_else(|| Error::SeriesPole("pole at infinity".into()))
    }
}

impl Ring for RatFun {
    fn zero() -> Self {
        RatFun::from_poly(Poly::zero())
    }
    fn one() -> Self {
        RatFun::from_poly(Poly::one())
    }
    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
    fn add(&self, other: &Self) -> Self {
        RatFun::add(self, other)
    }
    fn sub(&self, other: &Self) -> Self {
        RatFun::sub(self, other)
    }
    fn mul(&self, other: &Self) -> Self {
        RatFun::mul(self, other)
    }
    fn neg(&self) -> Self {
        RatFun::neg(self)
    }
    fn scale(&self, c: &Rat) -> Self {
        RatFun::scale(self, c)
    }
    fn from_rat(c: Rat) -> Self {
        RatFun::constant(c)
    }
    fn try_inv(&self) -> Option<Self> {
        self.inv().ok()
    }
    fn exp_nilpotent(&self) -> Option<Self> {
        self.is_zero().then(|| RatFun::from_poly(Poly::one()))
    }
}

impl From<Rat> for RatFun {
    fn from(c: Rat) -> Self {
        RatFun::constant(c)
    }
}

impl RatFun {
    pub fn is_one(&self) -> bool {
        self.den.degree() == Some(0) && self.num.degree() == Some(0) && self.num.coeff(0) == Rat::one()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactcore::scalar::{rat, ratio};

    #[test]
    fn normal_form_is_canonical() {
        // (2x - 2) / (4x^2 - 4) = (1/2) / (x + 1)
        let f = RatFun::new(
            Poly::new(vec![rat(-2), rat(2)]),
            Poly::new(vec![rat(-4), rat(0), rat(4)]),
        )
        .unwrap();
        let g = RatFun::new(Poly::constant(ratio(1, 2)), Poly::new(vec![rat(1), rat(1)])).unwrap();
        assert_eq!(f, g);
    }

    #[test]
    fn shift_round_trip() {
        let q = ratio(1, 7);
        let f = RatFun::linear_fraction(rat(1), rat(-3), rat(2), rat(5)).unwrap();
        assert_eq!(f.scale_var(&q).scale_var(&q.recip()), f);
        assert_eq!(f.shift_var(&q).shift_var(&-q), f);
    }

    #[test]
    fn expansions() {
        // 1 / (1 - x) at 0 and (x - 1)/x at infinity = 1 - y.
        let f = RatFun::linear_fraction(rat(1), rat(0), rat(1), rat(-1)).unwrap();
        assert_eq!(f.taylor(3).unwrap(), vec![rat(1); 4]);
        let g = RatFun::linear_fraction(rat(-1), rat(1), rat(0), rat(1)).unwrap();
        assert_eq!(g.expand_at_infinity(2).unwrap(), vec![rat(1), rat(-1), rat(0)]);
        assert!(g.taylor(1).is_err());
        assert!(g.eval(&rat(0)).is_err());
    }
}
