//! Truncated power series in a grading variable (the fugacity `Q` in 5D or
//! `w = (Lambda/hbar)^2` in 4D).

use super::ring::Ring;
use super::scalar::{rat, Rat};
use crate::error::{Error, Result};
use crate::profile::{timed, Kernel};

/// Coefficients for degrees `0..=cutoff`; degrees above the cutoff are
/// unknown, not zero. A cutoff of `-1` means nothing is known.
#[derive(Clone, Debug, PartialEq)]
pub struct GradedSeries<R> {
    coeffs: Vec<R>,
}

impl<R: Ring> GradedSeries<R> {
    /// Series from explicit coefficients; the cutoff is `coeffs.len() - 1`.
    pub fn from_coeffs(coeffs: Vec<R>) -> Self {
        GradedSeries { coeffs }
    }

    pub fn zero(cutoff: i64) -> Self {
        GradedSeries { coeffs: vec![R::zero(); (cutoff + 1).max(0) as usize] }
    }

    pub fn constant(c: R, cutoff: i64) -> Self {
        let mut s = Self::zero(cutoff);
        if let Some(first) = s.coeffs.first_mut() {
            *first = c;
        }
        s
    }

    pub fn one(cutoff: i64) -> Self {
        Self::constant(R::one(), cutoff)
    }

    /// `c * g^k` truncated at `cutoff`.
    pub fn monomial(c: R, k: usize, cutoff: i64) -> Self {
        let mut s = Self::zero(cutoff);
        if let Some(slot) = s.coeffs.get_mut(k) {
            *slot = c;
        }
        s
    }

    /// An element about which nothing is known.
    pub fn unknown() -> Self {
        GradedSeries { coeffs: Vec::new() }
    }

    pub fn cutoff(&self) -> i64 {
        self.coeffs.len() as i64 - 1
    }

    pub fn coeffs(&self) -> &[R] {
        &self.coeffs
    }

    /// Coefficient of degree `n`; reading past the cutoff is an error.
    pub fn coeff(&self, n: usize) -> Result<&R> {
        self.coeffs.get(n).ok_or(Error::BeyondCutoff {
            requested: n as i64,
            cutoff: self.cutoff(),
        })
    }

    /// True when every known coefficient vanishes.
    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(R::is_zero)
    }

    /// Lower bound on the valuation: the first nonzero degree, or
    /// `cutoff + 1` when all known coefficients vanish.
    pub fn valuation(&self) -> i64 {
        self.coeffs
            .iter()
            .position(|c| !c.is_zero())
            .map_or(self.cutoff() + 1, |p| p as i64)
    }

    pub fn truncate(&self, cutoff: i64) -> Self {
        let n = (cutoff + 1).clamp(0, self.coeffs.len() as i64) as usize;
        GradedSeries { coeffs: self.coeffs[..n].to_vec() }
    }

    /// Multiplication by `g^k`; the result is known through
    /// `min(cutoff + k, cap)`.
    pub fn shift(&self, k: usize, cap: i64) -> Self {
        let new_cut = (self.cutoff() + k as i64).min(cap);
        let mut out = Self::zero(new_cut);
        for (i, slot) in out.coeffs.iter_mut().enumerate() {
            if i >= k {
                *slot = self.coeffs[i - k].clone();
            }
        }
        out
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.coeffs.len().min(o.coeffs.len());
        GradedSeries { coeffs: (0..n).map(|i| self.coeffs[i].add(&o.coeffs[i])).collect() }
    }

    pub fn sub(&self, o: &Self) -> Self {
        let n = self.coeffs.len().min(o.coeffs.len());
        GradedSeries { coeffs: (0..n).map(|i| self.coeffs[i].sub(&o.coeffs[i])).collect() }
    }

    pub fn neg(&self) -> Self {
        GradedSeries { coeffs: self.coeffs.iter().map(R::neg).collect() }
    }

    pub fn scale(&self, c: &Rat) -> Self {
        GradedSeries { coeffs: self.coeffs.iter().map(|a| a.scale(c)).collect() }
    }

    pub fn scale_ring(&self, c: &R) -> Self {
        GradedSeries { coeffs: self.coeffs.iter().map(|a| a.mul(c)).collect() }
    }

    /// Product truncated at the smaller cutoff. A factor with a high
    /// valuation extends what is known about the product, so the cutoff is
    /// `min(cut_a + val_b, cut_b + val_a)`.
    pub fn mul(&self, o: &Self) -> Self {
        timed(Kernel::SeriesMultiplication, || {
            let (va, vb) = (self.valuation(), o.valuation());
            let cut = (self.cutoff() + vb).min(o.cutoff() + va);
            let mut out = Self::zero(cut);
            for (n, slot) in out.coeffs.iter_mut().enumerate() {
                let n = n as i64;
                let lo = va.max(n - o.cutoff());
                let hi = (n - vb).min(self.cutoff());
                let mut acc = R::zero();
                for i in lo..=hi {
                    let a = &self.coeffs[i as usize];
                    let b = &o.coeffs[(n - i) as usize];
                    if !a.is_zero() && !b.is_zero() {
                        acc.add_assign(&a.mul(b));
                    }
                }
                *slot = acc;
            }
            out
        })
    }

    /// Multiplicative inverse; needs an invertible constant term.
    pub fn inv(&self) -> Result<Self> {
        let c0 = self.coeff(0)?;
        let c0_inv = c0.try_inv().ok_or(Error::DivisionByZero)?;
        let mut out: Vec<R> = Vec::with_capacity(self.coeffs.len());
        out.push(c0_inv.clone());
        for n in 1..self.coeffs.len() {
            let mut acc = R::zero();
            for i in 1..=n {
                acc.add_assign(&self.coeffs[i].mul(&out[n - i]));
            }
            out.push(acc.neg().mul(&c0_inv));
        }
        Ok(GradedSeries { coeffs: out })
    }

    /// Truncated exponential. The constant term must itself have an exact
    /// exponential in `R` (zero for scalars, nilpotent for polynomials).
    pub fn exp(&self) -> Result<Self> {
        if self.coeffs.is_empty() {
            return Ok(self.clone());
        }
        let e0 = self.coeffs[0].exp_nilpotent().ok_or(Error::NonZeroConstantTerm)?;
        // f' = a' f  =>  n f_n = sum_{k=1}^n k a_k f_{n-k}
        let mut out: Vec<R> = Vec::with_capacity(self.coeffs.len());
        out.push(e0);
        for n in 1..self.coeffs.len() {
            let mut acc = R::zero();
            for k in 1..=n {
                if !self.coeffs[k].is_zero() {
                    acc.add_assign(&self.coeffs[k].mul(&out[n - k]).scale(&rat(k as i64)));
                }
            }
            out.push(acc.scale(&rat(n as i64).recip()));
        }
        Ok(GradedSeries { coeffs: out })
    }

    /// Truncated logarithm of a series with constant term 1.
    pub fn log(&self) -> Result<Self> {
        if self.coeffs.is_empty() {
            return Ok(self.clone());
        }
        if self.coeffs[0] != R::one() {
            return Err(Error::LogConstantTerm);
        }
        // n a_n = n f_n - sum_{k=1}^{n-1} k a_k f_{n-k}
        let mut out: Vec<R> = vec![R::zero()];
        for n in 1..self.coeffs.len() {
            let mut acc = self.coeffs[n].scale(&rat(n as i64));
            for k in 1..n {
                acc = acc.sub(&out[k].mul(&self.coeffs[n - k]).scale(&rat(k as i64)));
            }
            out.push(acc.scale(&rat(n as i64).recip()));
        }
        Ok(GradedSeries { coeffs: out })
    }

    pub fn map<S: Ring>(&self, f: impl Fn(&R) -> S) -> GradedSeries<S> {
        GradedSeries { coeffs: self.coeffs.iter().map(f).collect() }
    }
}

impl<R: Ring> Ring for GradedSeries<R> {
    // Ring constants are exact to all orders; the cap keeps them finite.
    fn zero() -> Self {
        GradedSeries::zero(UNBOUNDED_CUTOFF)
    }
    fn one() -> Self {
        GradedSeries::one(UNBOUNDED_CUTOFF)
    }
    fn is_zero(&self) -> bool {
        GradedSeries::is_zero(self)
    }
    fn add(&self, other: &Self) -> Self {
        GradedSeries::add(self, other)
    }
    fn sub(&self, other: &Self) -> Self {
        GradedSeries::sub(self, other)
    }
    fn mul(&self, other: &Self) -> Self {
        GradedSeries::mul(self, other)
    }
    fn neg(&self) -> Self {
        GradedSeries::neg(self)
    }
    fn scale(&self, c: &Rat) -> Self {
        GradedSeries::scale(self, c)
    }
    fn from_rat(c: Rat) -> Self {
        GradedSeries::constant(R::from_rat(c), UNBOUNDED_CUTOFF)
    }
    fn try_inv(&self) -> Option<Self> {
        self.inv().ok()
    }
    fn exp_nilpotent(&self) -> Option<Self> {
        self.is_zero().then(|| GradedSeries::one(self.cutoff()))
    }
}

/// Cutoff used for exact ring constants of [`GradedSeries`]. Values built
/// for a concrete job should use that job's cutoff instead.
pub const UNBOUNDED_CUTOFF: i64 = 64;

impl<R: Ring> GradedSeries<R> {
    pub fn is_one(&self) -> bool {
        self.coeffs.first().is_some_and(|c| *c == R::one())
            && self.coeffs[1..].iter().all(R::is_zero)
    }
}

/// Scalar-valued convenience: `sum_k c_k g^k` as rationals.
pub fn scalar_series(coeffs: Vec<Rat>) -> GradedSeries<Rat> {
    GradedSeries::from_coeffs(coeffs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactcore::scalar::ratio;
    use proptest::prelude::*;

    fn s(v: &[i64]) -> GradedSeries<Rat> {
        scalar_series(v.iter().map(|&c| rat(c)).collect())
    }

    #[test]
    fn exp_of_zero_and_of_g() {
        let z = GradedSeries::<Rat>::zero(4);
        assert!(z.exp().unwrap().is_one());
        let g = s(&[0, 1, 0]);
        assert_eq!(g.exp().unwrap(), scalar_series(vec![rat(1), rat(1), ratio(1, 2)]));
    }

    #[test]
    fn exp_rejects_constant_term() {
        assert_eq!(s(&[1, 1]).exp(), Err(Error::NonZeroConstantTerm));
    }

    #[test]
    fn reading_past_cutoff_fails() {
        let a = s(&[1, 2, 3]);
        assert!(a.coeff(2).is_ok());
        assert!(matches!(a.coeff(3), Err(Error::BeyondCutoff { .. })));
        let b = s(&[1, 1]);
        assert_eq!(a.mul(&b).cutoff(), 1);
    }

    #[test]
    fn valuation_extends_product_window() {
        // g^2 known through g^5 times a series known through g^2.
        let a = GradedSeries::monomial(rat(1), 2, 5);
        let b = s(&[1, 1, 1]);
        let p = a.mul(&b);
        assert_eq!(p.cutoff(), 4);
        assert_eq!(p, s(&[0, 0, 1, 1, 1]));
    }

    #[test]
    fn inverse_of_one_minus_g() {
        let inv = s(&[1, -1, 0, 0]).inv().unwrap();
        assert_eq!(inv, s(&[1, 1, 1, 1]));
    }

    proptest! {
        #[test]
        fn exp_log_round_trip(v in prop::collection::vec(-5i64..5, 1..6)) {
            let mut c = vec![rat(1)];
            c.extend(v.iter().map(|&x| ratio(x, 3)));
            let f = scalar_series(c);
            prop_assert_eq!(f.log().unwrap().exp().unwrap(), f);
        }

        #[test]
        fn distributive(a in prop::collection::vec(-9i64..9, 4),
                        b in prop::collection::vec(-9i64..9, 4),
                        c in prop::collection::vec(-9i64..9, 4)) {
            let (a, b, c) = (s(&a), s(&b), s(&c));
            prop_assert_eq!(a.add(&b).mul(&c).truncate(3), a.mul(&c).add(&b.mul(&c)).truncate(3));
        }
    }
}
