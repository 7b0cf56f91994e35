//! Dense univariate polynomials over [`Rat`].

use std::fmt;

use num_traits::{One, Zero};

use super::scalar::{fmt_rat, Rat};
use crate::profile::{timed, Kernel};

/// Coefficients in increasing degree, trailing zeros stripped.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    coeffs: Vec<Rat>,
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| match i {
                0 => fmt_rat(c),
                1 => format!("{}*x", fmt_rat(c)),
                _ => format!("{}*x^{i}", fmt_rat(c)),
            })
            .collect();
        f.write_str(&terms.join(" + "))
    }
}

impl Poly {
    pub fn new(mut coeffs: Vec<Rat>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn constant(c: Rat) -> Self {
        Poly::new(vec![c])
    }

    pub fn one() -> Self {
        Poly::constant(Rat::one())
    }

    /// The monomial `c * x^k`.
    pub fn monomial(c: Rat, k: usize) -> Self {
        let mut v = vec![Rat::zero(); k + 1];
        v[k] = c;
        Poly::new(v)
    }

    /// `a + b x`.
    pub fn linear(a: Rat, b: Rat) -> Self {
        Poly::new(vec![a, b])
    }

    pub fn x() -> Self {
        Poly::monomial(Rat::one(), 1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> Rat {
        self.coeffs.get(k).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn leading(&self) -> Option<&Rat> {
        self.coeffs.last()
    }

    pub fn add(&self, o: &Poly) -> Poly {
        let n = self.coeffs.len().max(o.coeffs.len());
        let v = (0..n)
            .map(|i| match (self.coeffs.get(i), o.coeffs.get(i)) {
                (Some(a), Some(b)) => a + b,
                (Some(a), None) => a.clone(),
                (None, Some(b)) => b.clone(),
                (None, None) => unreachable!(),
            })
            .collect();
        Poly::new(v)
    }

    pub fn neg(&self) -> Poly {
        Poly { coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }

    pub fn sub(&self, o: &Poly) -> Poly {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Poly) -> Poly {
        if self.is_zero() || o.is_zero() {
            return Poly::zero();
        }
        timed(Kernel::SeriesMultiplication, || {
            let mut v = vec![Rat::zero(); self.coeffs.len() + o.coeffs.len() - 1];
            for (i, a) in self.coeffs.iter().enumerate() {
                if a.is_zero() {
                    continue;
                }
                for (j, b) in o.coeffs.iter().enumerate() {
                    if !b.is_zero() {
                        v[i + j] += a * b;
                    }
                }
            }
            Poly::new(v)
        })
    }

    pub fn scale(&self, c: &Rat) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly { coeffs: self.coeffs.iter().map(|a| a * c).collect() }
    }

    /// Euclidean division; panics on a zero divisor.
    pub fn div_rem(&self, d: &Poly) -> (Poly, Poly) {
        let dd = d.degree().expect("division by the zero polynomial");
        let lead_inv = d.coeffs[dd].recip();
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return (Poly::zero(), self.clone());
        }
        let mut quot = vec![Rat::zero(); rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let c = &rem[k + dd] * &lead_inv;
            if !c.is_zero() {
                for (j, b) in d.coeffs.iter().enumerate() {
                    rem[k + j] -= &c * b;
                }
            }
            quot[k] = c;
        }
        rem.truncate(dd);
        (Poly::new(quot), Poly::new(rem))
    }

    pub fn monic(&self) -> Poly {
        match self.leading() {
            Some(l) if !l.is_one() => self.scale(&l.recip()),
            _ => self.clone(),
        }
    }

    /// Monic gcd (zero only when both inputs are zero).
    pub fn gcd(a: &Poly, b: &Poly) -> Poly {
        let (mut a, mut b) = (a.monic(), b.monic());
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r.monic();
        }
        a
    }

    pub fn eval(&self, x: &Rat) -> Rat {
        self.coeffs.iter().rev().fold(Rat::zero(), |acc, c| acc * x + c)
    }

    /// `p(c x)`.
    pub fn scale_var(&self, c: &Rat) -> Poly {
        let mut pw = Rat::one();
        let mut v = Vec::with_capacity(self.coeffs.len());
        for a in &self.coeffs {
            v.push(a * &pw);
            pw *= c;
        }
        Poly::new(v)
    }

    /// `p(x + c)` by Horner's scheme.
    pub fn shift_var(&self, c: &Rat) -> Poly {
        let lin = Poly::linear(c.clone(), Rat::one());
        self.coeffs
            .iter()
            .rev()
            .fold(Poly::zero(), |acc, a| acc.mul(&lin).add(&Poly::constant(a.clone())))
    }

    /// `p(1/x) * x^deg` (coefficient reversal with respect to `deg`).
    pub fn reversed(&self, deg: usize) -> Poly {
        let mut v = vec![Rat::zero(); deg + 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            assert!(i <= deg, "reversal degree too small");
            v[deg - i] = a.clone();
        }
        Poly::new(v)
    }

    /// Power-series coefficients of `self / den` through `x^n`; `den(0) != 0`.
    pub fn series_div(&self, den: &Poly, n: usize) -> Option<Vec<Rat>> {
        let d0 = den.coeff(0);
        if d0.is_zero() {
            return None;
        }
        let d0_inv = d0.recip();
        let mut out: Vec<Rat> = Vec::with_capacity(n + 1);
        for k in 0..=n {
            let mut acc = self.coeff(k);
            for j in 1..=k.min(den.coeffs.len().saturating_sub(1)) {
                acc -= &den.coeffs[j] * &out[k - j];
            }
            out.push(acc * &d0_inv);
        }
        Some(out)
    }

    pub fn pow(&self, k: u32) -> Poly {
        (0..k).fold(Poly::one(), |acc, _| acc.mul(self))
    }
}

/// `prod (1 - c x)` over the given `c`s.
pub fn product_of_linear(cs: &[Rat]) -> Poly {
    cs.iter()
        .fold(Poly::one(), |acc, c| acc.mul(&Poly::linear(Rat::one(), -c)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactcore::scalar::{rat, ratio};

    fn p(v: &[i64]) -> Poly {
        Poly::new(v.iter().map(|&c| rat(c)).collect())
    }

    #[test]
    fn division_and_gcd() {
        // (x-1)(x+2) and (x-1)(x-3)
        let a = p(&[-1, 1]).mul(&p(&[2, 1]));
        let b = p(&[-1, 1]).mul(&p(&[-3, 1]));
        assert_eq!(Poly::gcd(&a, &b), p(&[-1, 1]));
        let (q, r) = a.div_rem(&p(&[-1, 1]));
        assert_eq!(q, p(&[2, 1]));
        assert!(r.is_zero());
    }

    #[test]
    fn variable_substitutions() {
        let f = p(&[1, 2, 3]);
        assert_eq!(f.shift_var(&rat(1)), p(&[6, 8, 3]));
        assert_eq!(f.scale_var(&rat(2)), p(&[1, 4, 12]));
        assert_eq!(f.eval(&ratio(1, 2)), ratio(11, 4));
        assert_eq!(f.reversed(3), p(&[0, 3, 2, 1]));
    }

    #[test]
    fn geometric_series_division() {
        let s = Poly::one().series_div(&p(&[1, -1]), 4).unwrap();
        assert!(s.iter().all(|c| c == &rat(1)));
        assert!(Poly::one().series_div(&p(&[0, 1]), 2).is_none());
    }
}
