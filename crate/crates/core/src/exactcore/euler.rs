//! Closed-form expansions of the infinite products that appear throughout:
//! Euler products in `x`, the MacMahon function and the `Q`-prefactor.

use num_bigint::BigInt;

use super::ratfun::RatFun;
use super::ring::Ring;
use super::scalar::{rat, QParams, Rat};
use super::series::GradedSeries;
use crate::error::Result;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sign {
    Plus,
    Minus,
}

/// Coefficients of `prod_{i>=1} (1 +- c q^{i-1/2} x)^{+-1}` through `x^xdeg`.
///
/// The direct product gives `(+-c)^n q^{n^2/2} / (q;q)_n`, the inverted one
/// `(-+c)^n q^{n/2} / (q;q)_n` (q-binomial theorem). `c` may be any ring
/// element, e.g. a grading monomial `Q`.
pub fn euler_expand<R: Ring>(
    params: &QParams,
    sign: Sign,
    inverted: bool,
    scale: &R,
    xdeg: usize,
) -> Vec<R> {
    let flip = match (sign, inverted) {
        (Sign::Plus, false) | (Sign::Minus, true) => false,
        (Sign::Minus, false) | (Sign::Plus, true) => true,
    };
    let mut out = Vec::with_capacity(xdeg + 1);
    let mut cpow = R::one();
    let mut poch = Rat::one();
    for n in 0..=xdeg as i64 {
        if n > 0 {
            cpow = cpow.mul(scale);
            poch *= Rat::one() - params.q_pow(n);
        }
        let qpow = if inverted { params.u_pow(4 * n) } else { params.u_pow(4 * n * n) };
        let mut c = qpow / &poch;
        if flip && n % 2 == 1 {
            c = -c;
        }
        out.push(cpow.scale(&c));
    }
    out
}

/// Integer coefficients of `prod_{n>=1} (1 - q^n)^{-n}` through `q^vdeg`,
/// from `n a_n = sum_{k=1}^n sigma_2(k) a_{n-k}`.
pub fn macmahon_series(vdeg: usize) -> Vec<BigInt> {
    let sigma2: Vec<BigInt> = (0..=vdeg)
        .map(|k| {
            (1..=k)
                .filter(|d| k % d == 0)
                .map(|d| BigInt::from(d * d))
                .fold(BigInt::from(0), |a, b| a + b)
        })
        .collect();
    let mut a: Vec<BigInt> = vec![BigInt::from(1)];
    for n in 1..=vdeg {
        let s = (1..=n).fold(BigInt::from(0), |acc, k| acc + &sigma2[k] * &a[n - k]);
        a.push(s / BigInt::from(n));
    }
    a
}

/// `prod_{n>=1} (1 - Q q^n)^{-n}` through `Q^ndeg`, computed as
/// `exp(sum_k Q^k/k * q^k/(1-q^k)^2)`.
pub fn q_prefactor_series(params: &QParams, ndeg: usize) -> Result<GradedSeries<Rat>> {
    let mut log = vec![Rat::zero()];
    for k in 1..=ndeg as i64 {
        let d = params.one_minus_q_pow(k)?;
        log.push(params.q_pow(k) / (&d * &d) / rat(k));
    }
    GradedSeries::from_coeffs(log).exp()
}

/// `f(q^{+-1} x)`, the action of `q^{+-D}` on functions of `x`.
pub fn ratfun_shift(params: &QParams, f: &RatFun, direction: i64) -> RatFun {
    f.scale_var(&params.q_pow(direction))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactcore::poly::Poly;

    #[test]
    fn euler_first_coefficients() {
        let p = QParams::default_params();
        let q = p.q().clone();
        let qh = p.q_half_pow(1);
        let direct = euler_expand(&p, Sign::Plus, false, &rat(1), 3);
        assert_eq!(direct[0], rat(1));
        assert_eq!(direct[1], &qh / (rat(1) - &q));
        let inv = euler_expand(&p, Sign::Minus, true, &rat(1), 3);
        assert_eq!(inv[1], &qh / (rat(1) - &q));
        assert_eq!(euler_expand(&p, Sign::Plus, true, &rat(1), 0), vec![rat(1)]);
    }

    #[test]
    fn product_and_inverse_cancel() {
        let p = QParams::new(crate::exactcore::scalar::ratio(3, 5)).unwrap();
        let c = rat(7);
        for sign in [Sign::Plus, Sign::Minus] {
            let a = euler_expand(&p, sign, false, &c, 6);
            let b = euler_expand(&p, sign, true, &c, 6);
            let prod = GradedSeries::from_coeffs(a).mul(&GradedSeries::from_coeffs(b));
            assert!(prod.is_one());
        }
    }

    #[test]
    fn macmahon_counts() {
        let m = macmahon_series(12);
        let want = [1, 1, 3, 6, 13, 24, 48, 86, 160, 282, 500, 859, 1479];
        assert_eq!(m, want.iter().map(|&c| BigInt::from(c)).collect::<Vec<_>>());
    }

    #[test]
    fn prefactor_low_orders() {
        let p = QParams::default_params();
        let s = q_prefactor_series(&p, 2).unwrap();
        let q = p.q().clone();
        let one = rat(1);
        // sum_n n q^n = q/(1-q)^2
        let s1 = &q / ((&one - &q) * (&one - &q));
        assert_eq!(s.coeff(1).unwrap(), &s1);
        let s2 = p.q_pow(2) / ((&one - p.q_pow(2)) * (&one - p.q_pow(2)));
        assert_eq!(s.coeff(2).unwrap(), &(&s1 * &s1 / rat(2) + s2 / rat(2)));
    }

    #[test]
    fn shift_of_simple_fraction() {
        let p = QParams::default_params();
        let qmh = p.q_half_pow(-1);
        let f = RatFun::new(Poly::one(), Poly::linear(rat(1), -qmh)).unwrap();
        let g = ratfun_shift(&p, &f, -1);
        let want = RatFun::new(Poly::one(), Poly::linear(rat(1), -p.q_half_pow(-3))).unwrap();
        assert_eq!(g, want);
        assert_eq!(ratfun_shift(&p, &ratfun_shift(&p, &f, 1), -1), f);
        assert_eq!(ratfun_shift(&p, &RatFun::x(), 1), RatFun::x().scale(&p.q_pow(1)));
    }
}
