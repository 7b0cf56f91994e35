//! Truncated multivariate polynomials in the couplings `t_1, t_2, ...`.

use std::collections::BTreeMap;
use std::fmt;

use super::ring::Ring;
use super::scalar::{fmt_rat, rat, Rat};
use crate::profile::{timed, Kernel};

/// Exponent vector with trailing zeros trimmed; `[]` is the constant monomial.
pub type Monomial = Vec<u32>;

/// Polynomial with exact coefficients, truncated above total degree `cutoff`.
/// A `None` cutoff means the polynomial is exact in every degree.
#[derive(Clone, PartialEq)]
pub struct TPoly {
    terms: BTreeMap<Monomial, Rat>,
    cutoff: Option<u32>,
}

impl fmt::Debug for TPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            f.write_str("0")?;
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            f.write_str(&fmt_rat(c))?;
            for (v, e) in m.iter().enumerate().filter(|(_, e)| **e > 0) {
                write!(f, "*t{}^{}", v + 1, e)?;
            }
        }
        if let Some(d) = self.cutoff {
            write!(f, " + O(deg {})", d + 1)?;
        }
        Ok(())
    }
}

fn degree_of(m: &[u32]) -> u32 {
    m.iter().sum()
}

fn trim(mut m: Monomial) -> Monomial {
    while m.last() == Some(&0) {
        m.pop();
    }
    m
}

fn min_cutoff(a: Option<u32>, b: Option<u32>) -> Option<u32> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (x, None) => x,
        (None, y) => y,
    }
}

impl TPoly {
    pub fn zero_with(cutoff: Option<u32>) -> Self {
        TPoly { terms: BTreeMap::new(), cutoff }
    }

    pub fn constant(c: Rat, cutoff: Option<u32>) -> Self {
        Self::term(c, Vec::new(), cutoff)
    }

    /// `c * t^m`, dropped if its degree exceeds the cutoff.
    pub fn term(c: Rat, m: Monomial, cutoff: Option<u32>) -> Self {
        let m = trim(m);
        let mut terms = BTreeMap::new();
        if !c.is_zero() && cutoff.is_none_or(|d| degree_of(&m) <= d) {
            terms.insert(m, c);
        }
        TPoly { terms, cutoff }
    }

    /// The coupling with zero-based index `i` (so `var(0, ..)` is `t_1`).
    pub fn var(i: usize, cutoff: Option<u32>) -> Self {
        let mut m = vec![0; i + 1];
        m[i] = 1;
        Self::term(Rat::one(), m, cutoff)
    }

    pub fn cutoff(&self) -> Option<u32> {
        self.cutoff
    }

    pub fn terms(&self) -> &BTreeMap<Monomial, Rat> {
        &self.terms
    }

    pub fn coeff(&self, m: &[u32]) -> Rat {
        self.terms.get(&trim(m.to_vec())).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn constant_term(&self) -> Rat {
        self.coeff(&[])
    }

    pub fn with_cutoff(&self, cutoff: Option<u32>) -> Self {
        let cutoff = min_cutoff(self.cutoff, cutoff);
        let terms = self
            .terms
            .iter()
            .filter(|(m, _)| cutoff.is_none_or(|d| degree_of(m) <= d))
            .map(|(m, c)| (m.clone(), c.clone()))
            .collect();
        TPoly { terms, cutoff }
    }

    pub fn eval(&self, point: &[Rat]) -> Rat {
        self.terms
            .iter()
            .map(|(m, c)| {
                m.iter().enumerate().fold(c.clone(), |acc, (v, &e)| {
                    let x = point.get(v).cloned().unwrap_or_else(Rat::zero);
                    acc * x.pow(e as i32)
                })
            })
            .fold(Rat::zero(), |a, b| a + b)
    }

    /// Part of exact total degree `d`.
    pub fn homogeneous(&self, d: u32) -> Self {
        let terms = self
            .terms
            .iter()
            .filter(|(m, _)| degree_of(m) == d)
            .map(|(m, c)| (m.clone(), c.clone()))
            .collect();
        TPoly { terms, cutoff: self.cutoff }
    }

    /// Partial derivative in the coupling with zero-based index `i`. The
    /// result is trusted one degree less.
    pub fn derivative(&self, i: usize) -> Self {
        let mut terms = BTreeMap::new();
        for (m, c) in &self.terms {
            let e = m.get(i).copied().unwrap_or(0);
            if e == 0 {
                continue;
            }
            let mut m2 = m.clone();
            m2[i] -= 1;
            terms.insert(trim(m2), c * rat(e as i64));
        }
        TPoly { terms, cutoff: self.cutoff.map(|d| d.saturating_sub(1)) }
    }

    fn combine(&self, o: &Self, sign: bool) -> Self {
        let cutoff = min_cutoff(self.cutoff, o.cutoff);
        let mut out = self.with_cutoff(cutoff);
        for (m, c) in &o.terms {
            if cutoff.is_some_and(|d| degree_of(m) > d) {
                continue;
            }
            let e = out.terms.entry(m.clone()).or_insert_with(Rat::zero);
            if sign {
                *e += c;
            } else {
                *e -= c;
            }
            if e.is_zero() {
                out.terms.remove(m);
            }
        }
        out
    }
}

impl Ring for TPoly {
    fn zero() -> Self {
        TPoly::zero_with(None)
    }
    fn one() -> Self {
        TPoly::constant(Rat::one(), None)
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
    fn add(&self, other: &Self) -> Self {
        self.combine(other, true)
    }
    fn sub(&self, other: &Self) -> Self {
        self.combine(other, false)
    }
    fn mul(&self, o: &Self) -> Self {
        timed(Kernel::SeriesMultiplication, || {
            let cutoff = min_cutoff(self.cutoff, o.cutoff);
            let mut terms: BTreeMap<Monomial, Rat> = BTreeMap::new();
            for (ma, ca) in &self.terms {
                let da = degree_of(ma);
                for (mb, cb) in &o.terms {
                    if cutoff.is_some_and(|d| da + degree_of(mb) > d) {
                        continue;
                    }
                    let n = ma.len().max(mb.len());
                    let m: Monomial = (0..n)
                        .map(|i| ma.get(i).copied().unwrap_or(0) + mb.get(i).copied().unwrap_or(0))
                        .collect();
                    *terms.entry(m).or_insert_with(Rat::zero) += ca * cb;
                }
            }
            terms.retain(|_, c| !c.is_zero());
            TPoly { terms, cutoff }
        })
    }
    fn neg(&self) -> Self {
        TPoly {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
            cutoff: self.cutoff,
        }
    }
    fn scale(&self, c: &Rat) -> Self {
        if c.is_zero() {
            return TPoly::zero_with(self.cutoff);
        }
        TPoly {
            terms: self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect(),
            cutoff: self.cutoff,
        }
    }
    fn from_rat(c: Rat) -> Self {
        TPoly::constant(c, None)
    }
    fn try_inv(&self) -> Option<Self> {
        // 1/(c + n) = sum_k (-n)^k / c^{k+1}, finite under a degree cutoff.
        let c = self.constant_term();
        if c.is_zero() {
            return None;
        }
        let ci = c.recip();
        let n = self.sub(&TPoly::constant(c, None));
        if n.is_zero() {
            return Some(TPoly::constant(ci, self.cutoff));
        }
        let d = self.cutoff?;
        let x = n.scale(&-ci.clone());
        let mut acc = TPoly::constant(Rat::one(), self.cutoff);
        let mut pw = acc.clone();
        for _ in 0..d {
            pw = pw.mul(&x);
            acc = acc.add(&pw);
        }
        Some(acc.scale(&ci))
    }
    fn exp_nilpotent(&self) -> Option<Self> {
        if !self.constant_term().is_zero() {
            return None;
        }
        if self.terms.is_empty() {
            return Some(TPoly::constant(Rat::one(), self.cutoff));
        }
        let d = self.cutoff?;
        let mut acc = TPoly::constant(Rat::one(), self.cutoff);
        let mut pw = acc.clone();
        for k in 1..=d {
            pw = pw.mul(self).scale(&rat(k as i64).recip());
            if pw.is_zero() {
                break;
            }
            acc = acc.add(&pw);
        }
        Some(acc)
    }
}
