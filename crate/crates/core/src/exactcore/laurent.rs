//! Truncated Laurent series with explicit trusted windows.
//!
//! Used both for the formal variable `x` of the admissible basis (`LaurentX`)
//! and for the radius `R` of the 4D limit (`RSeries`).

use super::ring::Ring;
use super::scalar::{rat, Rat};
use crate::error::{Error, Result};
use crate::profile::{timed, Kernel};

/// Coefficients for exponents `low..prec`. Everything below `low` is exactly
/// zero; everything from `prec` on is unknown.
#[derive(Clone, Debug, PartialEq)]
pub struct Laurent<R> {
    low: i64,
    coeffs: Vec<R>,
}

pub type RSeries = Laurent<Rat>;

impl<R: Ring> Laurent<R> {
    pub fn new(low: i64, coeffs: Vec<R>) -> Self {
        Laurent { low, coeffs }
    }

    /// Zero known for exponents below `prec`.
    pub fn zero(prec: i64) -> Self {
        Laurent { low: prec, coeffs: Vec::new() }
    }

    pub fn constant(c: R, prec: i64) -> Self {
        Self::monomial(c, 0, prec)
    }

    pub fn one(prec: i64) -> Self {
        Self::constant(R::one(), prec)
    }

    /// `c * v^k`, known for exponents below `prec`.
    pub fn monomial(c: R, k: i64, prec: i64) -> Self {
        if k >= prec {
            return Self::zero(prec);
        }
        let mut coeffs = vec![R::zero(); (prec - k) as usize];
        coeffs[0] = c;
        Laurent { low: k, coeffs }
    }

    /// `exp(a v)` for a ring element `a`, known below `prec`.
    pub fn exp_linear(a: &R, prec: i64) -> Self {
        let mut coeffs = Vec::new();
        let mut term = R::one();
        for k in 0..prec.max(0) {
            coeffs.push(term.clone());
            term = term.mul(a).scale(&rat(k + 1).recip());
        }
        Laurent { low: 0, coeffs }
    }

    pub fn low(&self) -> i64 {
        self.low
    }

    /// First exponent whose coefficient is unknown.
    pub fn prec(&self) -> i64 {
        self.low + self.coeffs.len() as i64
    }

    pub fn coeff(&self, k: i64) -> Result<R> {
        if k >= self.prec() {
            return Err(Error::BeyondCutoff { requested: k, cutoff: self.prec() - 1 });
        }
        if k < self.low {
            return Ok(R::zero());
        }
        Ok(self.coeffs[(k - self.low) as usize].clone())
    }

    /// Exact valuation, or `None` when every known coefficient vanishes.
    pub fn valuation(&self) -> Option<i64> {
        self.coeffs
            .iter()
            .position(|c| !c.is_zero())
            .map(|p| self.low + p as i64)
    }

    /// Drops known leading zeros so `low` is the true valuation.
    pub fn normalized(&self) -> Self {
        match self.valuation() {
            Some(v) => Laurent { low: v, coeffs: self.coeffs[(v - self.low) as usize..].to_vec() },
            None => Self::zero(self.prec()),
        }
    }

    pub fn truncate(&self, prec: i64) -> Self {
        if prec >= self.prec() {
            return self.clone();
        }
        if prec <= self.low {
            return Self::zero(prec);
        }
        Laurent { low: self.low, coeffs: self.coeffs[..(prec - self.low) as usize].to_vec() }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(R::is_zero)
    }

    /// Multiplication by `v^k`.
    pub fn shift(&self, k: i64) -> Self {
        Laurent { low: self.low + k, coeffs: self.coeffs.clone() }
    }

    pub fn add(&self, o: &Self) -> Self {
        let prec = self.prec().min(o.prec());
        let low = self.low.min(o.low).min(prec);
        let coeffs = (low..prec)
            .map(|k| {
                let a = if k >= self.low { Some(&self.coeffs[(k - self.low) as usize]) } else { None };
                let b = if k >= o.low { Some(&o.coeffs[(k - o.low) as usize]) } else { None };
                match (a, b) {
                    (Some(a), Some(b)) => a.add(b),
                    (Some(a), None) => a.clone(),
                    (None, Some(b)) => b.clone(),
                    (None, None) => R::zero(),
                }
            })
            .collect();
        Laurent { low, coeffs }
    }

    pub fn neg(&self) -> Self {
        Laurent { low: self.low, coeffs: self.coeffs.iter().map(R::neg).collect() }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn scale(&self, c: &Rat) -> Self {
        Laurent { low: self.low, coeffs: self.coeffs.iter().map(|a| a.scale(c)).collect() }
    }

    pub fn scale_ring(&self, c: &R) -> Self {
        Laurent { low: self.low, coeffs: self.coeffs.iter().map(|a| a.mul(c)).collect() }
    }

    /// Product. An exponent is trusted only when every contributing pair is
    /// in-window, giving `prec = min(prec_a + val_b, prec_b + val_a)`.
    pub fn mul(&self, o: &Self) -> Self {
        timed(Kernel::SeriesMultiplication, || {
            let a = self.normalized();
            let b = o.normalized();
            let prec = (a.prec() + b.low).min(b.prec() + a.low);
            let low = (a.low + b.low).min(prec);
            let mut coeffs = vec![R::zero(); (prec - low).max(0) as usize];
            for (i, x) in a.coeffs.iter().enumerate() {
                if x.is_zero() {
                    continue;
                }
                for (j, y) in b.coeffs.iter().enumerate() {
                    let k = a.low + i as i64 + b.low + j as i64;
                    if k >= prec {
                        break;
                    }
                    if !y.is_zero() {
                        coeffs[(k - low) as usize].add_assign(&x.mul(y));
                    }
                }
            }
            Laurent { low, coeffs }
        })
    }

    /// Inverse of a series with an invertible leading coefficient. The
    /// relative precision is preserved.
    pub fn inv(&self) -> Result<Self> {
        let a = self.normalized();
        if a.coeffs.is_empty() {
            return Err(Error::SeriesPole("inverse of a series with no known nonzero term".into()));
        }
        let lead_inv = a.coeffs[0]
            .try_inv()
            .ok_or_else(|| Error::SeriesPole("leading coefficient not invertible".into()))?;
        let n = a.coeffs.len();
        let mut out: Vec<R> = Vec::with_capacity(n);
        out.push(lead_inv.clone());
        for m in 1..n {
            let mut acc = R::zero();
            for i in 1..=m {
                if !a.coeffs[i].is_zero() {
                    acc.add_assign(&a.coeffs[i].mul(&out[m - i]));
                }
            }
            out.push(acc.neg().mul(&lead_inv));
        }
        Ok(Laurent { low: -a.low, coeffs: out })
    }

    pub fn div(&self, o: &Self) -> Result<Self> {
        Ok(self.mul(&o.inv()?))
    }

    /// Exponential. Requires a vanishing negative part and a constant term
    /// whose exponential is exact in `R`.
    pub fn exp(&self) -> Result<Self> {
        if (self.low..0.min(self.prec())).any(|k| !self.coeffs[(k - self.low) as usize].is_zero()) {
            return Err(Error::SeriesPole("exp of a series with a pole".into()));
        }
        let prec = self.prec();
        if prec <= 0 {
            return Ok(Self::zero(prec));
        }
        let c0 = self.coeff(0)?;
        let e0 = c0.exp_nilpotent().ok_or(Error::NonZeroConstantTerm)?;
        let n = prec as usize;
        let a: Vec<R> = (0..prec).map(|k| self.coeff(k)).collect::<Result<_>>()?;
        let mut out: Vec<R> = Vec::with_capacity(n);
        out.push(e0);
        for m in 1..n {
            let mut acc = R::zero();
            for k in 1..=m {
                if !a[k].is_zero() {
                    acc.add_assign(&a[k].mul(&out[m - k]).scale(&rat(k as i64)));
                }
            }
            out.push(acc.scale(&rat(m as i64).recip()));
        }
        Ok(Laurent { low: 0, coeffs: out })
    }

    /// Logarithm of a series `1 + O(v)`.
    pub fn log(&self) -> Result<Self> {
        if self.valuation().is_some_and(|v| v < 0) || self.prec() <= 0 {
            return Err(Error::LogConstantTerm);
        }
        if self.coeff(0)? != R::one() {
            return Err(Error::LogConstantTerm);
        }
        let prec = self.prec();
        let f: Vec<R> = (0..prec).map(|k| self.coeff(k)).collect::<Result<_>>()?;
        let mut out: Vec<R> = vec![R::zero()];
        for m in 1..prec as usize {
            let mut acc = f[m].scale(&rat(m as i64));
            for k in 1..m {
                acc = acc.sub(&out[k].mul(&f[m - k]).scale(&rat(k as i64)));
            }
            out.push(acc.scale(&rat(m as i64).recip()));
        }
        Ok(Laurent { low: 0, coeffs: out })
    }

    /// Coefficients of strictly negative exponents that are nonzero.
    pub fn pole_part(&self) -> Vec<(i64, R)> {
        (self.low..0.min(self.prec()))
            .filter_map(|k| {
                let c = &self.coeffs[(k - self.low) as usize];
                (!c.is_zero()).then(|| (k, c.clone()))
            })
            .collect()
    }

    pub fn map<S: Ring>(&self, f: impl Fn(&R) -> S) -> Laurent<S> {
        Laurent { low: self.low, coeffs: self.coeffs.iter().map(f).collect() }
    }

    /// Replaces each coefficient `c_k` by `c_k * s^k`.
    pub fn scale_by_power(&self, s: &Rat) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| c.scale(&super::scalar::pow_i64(s, self.low + i as i64)))
            .collect();
        Laurent { low: self.low, coeffs }
    }
}
