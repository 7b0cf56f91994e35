//! Difference operators with rational coefficients, the Kac-Schwarz operator
//! and the quantum curve checks.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde_json::json;

use crate::error::{Error, Result};
use crate::exactcore::euler::{euler_expand, q_prefactor_series, Sign};
use crate::exactcore::poly::Poly;
use crate::exactcore::{fmt_rat, rat, ratio, GradedSeries, LaurentX, QParams, Rat, RatFun, Ring};
use crate::partfun::{z4d_x, z5d_x};
use crate::report::{rat_json, ratfun_json, Entry};

/// How the elementary shift acts on the variable.
#[derive(Clone, Debug, PartialEq)]
pub enum Shift {
    /// `sigma f(x) = f(c x)`; with `c = q` this is `q^D`.
    Scale(Rat),
    /// `sigma f(X) = f(X + c)`; with `c = hbar` this is `e^{hbar d/dX}`.
    Translate(Rat),
}

impl Shift {
    fn pull(&self, f: &RatFun, k: i64) -> RatFun {
        match self {
            Shift::Scale(c) => f.scale_var(&crate::exactcore::scalar::pow_i64(c, k)),
            Shift::Translate(c) => f.shift_var(&(c * rat(k))),
        }
    }
}

/// `sum r(x) g^grade sigma^k`, kept in normal form (shifts on the right,
/// like terms merged, zero terms dropped).
#[derive(Clone, Debug, PartialEq)]
pub struct DiffOp {
    shift: Shift,
    terms: BTreeMap<(u32, i64), RatFun>,
}

impl DiffOp {
    pub fn zero(shift: Shift) -> Self {
        DiffOp { shift, terms: BTreeMap::new() }
    }

    pub fn term(shift: Shift, r: RatFun, grade: u32, k: i64) -> Self {
        let mut op = Self::zero(shift);
        if !r.is_zero() {
            op.terms.insert((grade, k), r);
        }
        op
    }

    pub fn identity(shift: Shift) -> Self {
        Self::term(shift, RatFun::constant(rat(1)), 0, 0)
    }

    pub fn mult(shift: Shift, r: RatFun) -> Self {
        Self::term(shift, r, 0, 0)
    }

    pub fn sigma(shift: Shift, k: i64) -> Self {
        Self::term(shift, RatFun::constant(rat(1)), 0, k)
    }

    pub fn terms(&self) -> &BTreeMap<(u32, i64), RatFun> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut out = self.clone();
        for (key, r) in &o.terms {
            let v = match out.terms.remove(key) {
                Some(e) => e.add(r),
                None => r.clone(),
            };
            if !v.is_zero() {
                out.terms.insert(*key, v);
            }
        }
        out
    }

    pub fn neg(&self) -> Self {
        DiffOp { shift: self.shift.clone(), terms: self.terms.iter().map(|(k, r)| (*k, r.neg())).collect() }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    /// Multiplication by `g^d`.
    pub fn graded(&self, d: u32) -> Self {
        DiffOp { shift: self.shift.clone(), terms: self.terms.iter().map(|((g, k), r)| ((g + d, *k), r.clone())).collect() }
    }

    /// `self o other`, using `sigma^k r = r(sigma^k x) sigma^k`.
    pub fn compose(&self, o: &Self) -> Self {
        let mut out = Self::zero(self.shift.clone());
        for ((g1, k1), r1) in &self.terms {
            for ((g2, k2), r2) in &o.terms {
                let r = r1.mul(&self.shift.pull(r2, *k1));
                out = out.add(&Self::term(self.shift.clone(), r, g1 + g2, k1 + k2));
            }
        }
        out
    }

    /// Applies the operator to `f = sum_n f_n g^n`, keeping grades through
    /// `f`'s cutoff.
    pub fn apply(&self, f: &GradedSeries<RatFun>) -> GradedSeries<RatFun> {
        let cut = f.cutoff();
        let mut out = vec![RatFun::zero(); (cut + 1).max(0) as usize];
        for ((g, k), r) in &self.terms {
            for (n, fn_) in f.coeffs().iter().enumerate() {
                let target = n + *g as usize;
                if target as i64 > cut || fn_.is_zero() {
                    continue;
                }
                out[target] = out[target].add(&r.mul(&self.shift.pull(fn_, *k)));
            }
        }
        GradedSeries::from_coeffs(out)
    }

    /// Pointwise value `(op f)(x0)` for an `f` given by a closure.
    pub fn eval_at(&self, x0: &Rat, grade: u32, f: impl Fn(u32, &Rat) -> Result<Rat>) -> Result<Rat> {
        let mut acc = rat(0);
        for ((g, k), r) in &self.terms {
            if *g > grade {
                continue;
            }
            let x = match &self.shift {
                Shift::Scale(c) => x0 * crate::exactcore::scalar::pow_i64(c, *k),
                Shift::Translate(c) => x0 + c * rat(*k),
            };
            acc += r.eval(x0)? * f(grade - g, &x)?;
        }
        Ok(acc)
    }
}

/// Which expression of the Kac-Schwarz operator to build.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AForm {
    Prod,
    Sum,
}

fn q_shift(params: &QParams) -> Shift {
    Shift::Scale(params.q().clone())
}

/// `A` as a product of three factors or as the expanded four-term sum.
pub fn build_a(params: &QParams, form: AForm) -> Result<DiffOp> {
    let sh = q_shift(params);
    let qh = params.u_pow(4);
    let one_minus = RatFun::from_poly(Poly::linear(rat(1), -qh.clone()));
    Ok(match form {
        AForm::Prod => {
            let inv = DiffOp::mult(sh.clone(), one_minus.inv()?);
            let qx = DiffOp::mult(sh.clone(), RatFun::from_poly(Poly::monomial(qh.clone(), 1)));
            let core = qx.compose(&DiffOp::sigma(sh.clone(), -1)).compose(&inv);
            let f1 = DiffOp::identity(sh.clone()).add(&core);
            let f2 = DiffOp::identity(sh.clone()).add(&core.graded(1));
            let f3 = DiffOp::mult(sh.clone(), one_minus).compose(&DiffOp::sigma(sh.clone(), 1));
            f1.compose(&f2).compose(&f3)
        }
        AForm::Sum => {
            let t1 = DiffOp::term(sh.clone(), one_minus, 0, 1);
            let t2 = DiffOp::term(sh.clone(), RatFun::from_poly(Poly::monomial(qh.clone(), 1)), 0, 0);
            let t3 = t2.graded(1);
            let pole = RatFun::new(Poly::monomial(rat(1), 2), Poly::linear(rat(1), -params.u_pow(-4)))?;
            let t4 = DiffOp::term(sh, pole, 1, -1);
            t1.add(&t2).add(&t3).add(&t4)
        }
    })
}

pub fn check_a_forms(params: &QParams) -> Result<Entry> {
    let p = build_a(params, AForm::Prod)?;
    let s = build_a(params, AForm::Sum)?;
    let diff = p.sub(&s);
    let terms: Vec<_> = diff
        .terms()
        .iter()
        .map(|((g, k), r)| json!({ "grade": g, "shift": k, "coefficient": ratfun_json(r) }))
        .collect();
    Ok(Entry::new(
        "A (product form) = A (sum form)",
        "exact normal form",
        diff.is_zero(),
        json!({ "terms_sum_form": s.terms().len(), "difference": terms }),
    ))
}

/// Fixed rational sample points used as an evaluation witness.
fn sample_points() -> [Rat; 3] {
    [ratio(2, 7), ratio(-3, 11), ratio(5, 13)]
}

/// `(A - 1) Z(x)` per `Q` degree, required to vanish as a rational function.
pub fn qcurve_residual(params: &QParams, ncut: u32) -> Result<Entry> {
    let z = z5d_x(params, ncut)?;
    let a = build_a(params, AForm::Sum)?.sub(&DiffOp::identity(q_shift(params)));
    let res = a.apply(&z);
    let mut bad = Vec::new();
    for (n, r) in res.coeffs().iter().enumerate() {
        if !r.is_zero() {
            bad.push(json!({ "degree": n, "residual": ratfun_json(r) }));
        }
    }
    // Second witness: the bracket at numeric points.
    let mut witness = Vec::new();
    for x0 in sample_points() {
        for n in 0..=ncut {
            let v = a.eval_at(&x0, n, |m, x| z.coeff(m as usize)?.eval(x))?;
            if v != rat(0) {
                bad.push(json!({ "degree": n, "x": fmt_rat(&x0), "value": fmt_rat(&v) }));
            }
        }
        witness.push(fmt_rat(&x0));
    }
    Ok(Entry::new(
        "(A - 1) Z(x) = 0",
        format!("Q^0..Q^{ncut}"),
        bad.is_empty(),
        json!({ "sample_points": witness, "nonzero": bad }),
    ))
}

/// The two Euler products and the Gaussian diagonal of `G`, on Laurent
/// series in `x` whose coefficients are `Q`-series through `Q^qdeg`.
pub struct GenOp {
    params: QParams,
    qdeg: i64,
    left: Vec<GradedSeries<Rat>>,
    right: Vec<GradedSeries<Rat>>,
}

impl GenOp {
    /// Products expanded through `x^xdeg`.
    pub fn new(params: &QParams, qdeg: u32, xdeg: usize) -> Self {
        let cap = qdeg as i64;
        let one = GradedSeries::one(cap);
        let qm = GradedSeries::monomial(rat(1), 1, cap);
        let left = euler_expand(params, Sign::Minus, false, &one, xdeg);
        let a = euler_expand(params, Sign::Plus, false, &one, xdeg);
        let b = euler_expand(params, Sign::Plus, false, &qm, xdeg);
        let right = (0..=xdeg)
            .map(|n| {
                (0..=n).fold(GradedSeries::zero(cap), |acc: GradedSeries<Rat>, i| acc.add(&a[i].mul(&b[n - i]).truncate(cap)))
            })
            .collect();
        GenOp { params: params.clone(), qdeg: cap, left, right }
    }

    fn series(&self, c: &[GradedSeries<Rat>]) -> LaurentX {
        LaurentX::new(0, c.to_vec())
    }

    /// `q^{-(D - 1/2)^2 / 2}`: `x^n -> u^{-(2n-1)^2} x^n`.
    pub fn diagonal(&self, f: &LaurentX) -> LaurentX {
        let low = f.low();
        let coeffs = (low..f.prec())
            .map(|n| {
                let c = f.coeff(n).expect("in window");
                c.scale(&self.params.u_pow(-(2 * n - 1) * (2 * n - 1)))
            })
            .collect();
        LaurentX::new(low, coeffs)
    }

    /// `G f`.
    pub fn apply(&self, f: &LaurentX) -> LaurentX {
        let r = f.mul(&self.series(&self.right));
        let d = self.diagonal(&r);
        d.mul(&self.series(&self.left))
    }

    /// `Phi_j = G x^{-j}`, known for exponents `-j .. xdeg - j`.
    pub fn phi(&self, j: u32) -> LaurentX {
        let prec = self.right.len() as i64 - j as i64;
        let mono = LaurentX::monomial(GradedSeries::one(self.qdeg), -(j as i64), prec);
        self.apply(&mono)
    }
}

/// Applies a `q`-difference operator to a Laurent series in `x`. Rational
/// coefficients are expanded at `x = 0`.
pub fn apply_to_laurent(op: &DiffOp, f: &LaurentX, qdeg: i64) -> Result<LaurentX> {
    let Shift::Scale(c) = &op.shift else {
        return Err(Error::InvalidArgument("Laurent action needs a multiplicative shift".into()));
    };
    let width = (f.prec() - f.low()).max(0) as usize;
    let mut acc: Option<LaurentX> = None;
    for ((g, k), r) in &op.terms {
        let shifted = f.map(|c| c.clone()).scale_by_power(&crate::exactcore::scalar::pow_i64(c, *k));
        let taylor: Vec<GradedSeries<Rat>> = r
            .taylor(width)?
            .into_iter()
            .map(|c| GradedSeries::monomial(c, *g as usize, qdeg))
            .collect();
        let term = LaurentX::new(0, taylor).mul(&shifted);
        acc = Some(match acc {
            None => term,
            Some(a) => a.add(&term),
        });
    }
    Ok(acc.unwrap_or_else(|| LaurentX::zero(f.prec())))
}

fn truncated_equal(a: &GradedSeries<Rat>, b: &GradedSeries<Rat>, qdeg: i64) -> Result<bool> {
    if a.cutoff() < qdeg || b.cutoff() < qdeg {
        return Err(Error::CutoffExceeded(format!("Q-window {} below {qdeg}", a.cutoff().min(b.cutoff()))));
    }
    Ok(a.truncate(qdeg) == b.truncate(qdeg))
}

/// `A Phi_j = q^{-j} Phi_j` on the window `x^{-j} .. x^{-j + width - 1}`.
pub fn kac_schwarz_check(params: &QParams, jmax: u32, width: u32, qdeg: u32) -> Result<Entry> {
    let g = GenOp::new(params, qdeg, (width + jmax) as usize + 2);
    let a = build_a(params, AForm::Sum)?;
    let cap = qdeg as i64;
    let results: Vec<Result<(u32, Vec<serde_json::Value>)>> = (0..=jmax)
        .into_par_iter()
        .map(|j| {
            let phi = g.phi(j);
            let lhs = apply_to_laurent(&a, &phi, cap)?;
            let rhs = phi.scale(&params.q_pow(-(j as i64)));
            let lo = -(j as i64);
            let hi = lo + width as i64;
            if lhs.prec() < hi || rhs.prec() < hi {
                return Err(Error::CutoffExceeded(format!("x-window for j = {j} ends at {}", lhs.prec().min(rhs.prec()))));
            }
            let mut bad = Vec::new();
            for e in lo..hi {
                if !truncated_equal(&lhs.coeff(e)?, &rhs.coeff(e)?, cap)? {
                    bad.push(json!({ "j": j, "x": e }));
                }
            }
            Ok((j, bad))
        })
        .collect();
    let mut bad = Vec::new();
    for r in results {
        bad.extend(r?.1);
    }
    Ok(Entry::new(
        "A Phi_j = q^-j Phi_j",
        format!("j <= {jmax}, x-window width {width}, Q^{qdeg}"),
        bad.is_empty(),
        json!({ "mismatches": bad }),
    ))
}

/// `Z(x) = C prod (1 - Q q^n)^{-n} Phi_0(x)`; reports `C` and checks that it
/// does not depend on `Q` or `x`.
pub fn z_phi0_constant(params: &QParams, qdeg: u32, xdeg: u32) -> Result<Entry> {
    let cap = qdeg as i64;
    let g = GenOp::new(params, qdeg, xdeg as usize + 2);
    let phi0 = g.phi(0).truncate(xdeg as i64 + 1);
    let pref = q_prefactor_series(params, qdeg as usize)?;
    let rhs = phi0.scale_ring(&pref);
    let z = z5d_x(params, qdeg)?;
    let mut zc = vec![GradedSeries::zero(cap); xdeg as usize + 1];
    for (n, zn) in z.coeffs().iter().enumerate() {
        for (e, c) in zn.taylor(xdeg as usize)?.into_iter().enumerate() {
            zc[e] = zc[e].add(&GradedSeries::monomial(c, n, cap));
        }
    }
    let lhs = LaurentX::new(0, zc);
    let ratio_series = lhs.div(&rhs)?;
    let c0 = ratio_series.coeff(0)?;
    let constant = c0.coeff(0)?.clone();
    let want = LaurentX::constant(GradedSeries::constant(constant.clone(), cap), ratio_series.prec());
    let mut ok = ratio_series.prec() > xdeg as i64;
    for e in 0..ratio_series.prec().min(xdeg as i64 + 1) {
        ok &= truncated_equal(&ratio_series.coeff(e)?, &want.coeff(e)?, cap)?;
    }
    Ok(Entry::new(
        "Z(x) = C * prefactor * Phi_0(x), C constant",
        format!("Q^{qdeg}, x^{xdeg}"),
        ok,
        json!({ "C": rat_json(&constant), "C_equals_u": constant == *params.u() }),
    ))
}

/// The 4D curve: per `w` degree,
/// `(X - hbar)(c_n(X - hbar) - c_n(X)) + hbar^2 c_{n-1}(X + hbar) / X = 0`.
pub fn residual_4d(hbar: &Rat, ncut: u32) -> Result<Entry> {
    if *hbar == rat(0) {
        return Err(Error::InvalidArgument("hbar must be nonzero".into()));
    }
    let sh = Shift::Translate(hbar.clone());
    let x_minus = RatFun::from_poly(Poly::linear(-hbar.clone(), rat(1)));
    let back = DiffOp::sigma(sh.clone(), -1).sub(&DiffOp::identity(sh.clone()));
    let inv_x = RatFun::new(Poly::constant(hbar * hbar), Poly::x())?;
    let op = DiffOp::mult(sh.clone(), x_minus)
        .compose(&back)
        .add(&DiffOp::term(sh, inv_x, 1, 1));
    let z = z4d_x(hbar, ncut)?;
    let res = op.apply(&z);
    let mut bad = Vec::new();
    for (n, r) in res.coeffs().iter().enumerate() {
        if !r.is_zero() {
            bad.push(json!({ "degree": n, "residual": ratfun_json(r) }));
        }
    }
    let off_lattice = sample_points()
        .into_iter()
        .chain([ratio(7, 17), ratio(-11, 19)])
        .filter(|x| !(x / hbar).is_integer())
        .take(3);
    for x0 in off_lattice {
        for n in 0..=ncut {
            let v = op.eval_at(&x0, n, |m, x| z.coeff(m as usize)?.eval(x))?;
            if v != rat(0) {
                bad.push(json!({ "degree": n, "X": fmt_rat(&x0), "value": fmt_rat(&v) }));
            }
        }
    }
    Ok(Entry::new(
        "4D difference equation",
        format!("w^0..w^{ncut}"),
        bad.is_empty(),
        json!({ "nonzero": bad }),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p() -> QParams {
        QParams::default_params()
    }

    #[test]
    fn sigma_past_x() {
        let sh = q_shift(&p());
        let lhs = DiffOp::sigma(sh.clone(), 1).compose(&DiffOp::mult(sh.clone(), RatFun::x()));
        let rhs = DiffOp::term(sh.clone(), RatFun::x().scale(p().q()), 0, 1);
        assert_eq!(lhs, rhs);
        let a = build_a(&p(), AForm::Sum).unwrap();
        assert_eq!(DiffOp::identity(sh).compose(&a), a);
    }

    #[test]
    fn inverse_pair() {
        let sh = q_shift(&p());
        let f = RatFun::from_poly(Poly::linear(rat(1), -p().u_pow(4)));
        let a = DiffOp::mult(sh.clone(), f.clone()).compose(&DiffOp::sigma(sh.clone(), 1));
        let b = DiffOp::sigma(sh.clone(), -1).compose(&DiffOp::mult(sh.clone(), f.inv().unwrap()));
        assert_eq!(a.compose(&b), DiffOp::identity(sh));
    }

    #[test]
    fn associativity() {
        let sh = q_shift(&p());
        let a = build_a(&p(), AForm::Sum).unwrap();
        let b = DiffOp::term(sh.clone(), RatFun::linear_fraction(rat(1), rat(2), rat(3), rat(-1)).unwrap(), 0, 2);
        let c = DiffOp::term(sh, RatFun::x(), 1, -1);
        assert_eq!(a.compose(&b).compose(&c), a.compose(&b.compose(&c)));
    }

    #[test]
    fn a_forms_agree() {
        assert!(check_a_forms(&p()).unwrap().passed());
        let a = build_a(&p(), AForm::Sum).unwrap();
        // The Q^0 part applied to 1 gives (1 - q^{1/2} x) + q^{1/2} x = 1.
        let one = GradedSeries::from_coeffs(vec![RatFun::constant(rat(1))]);
        assert!(a.apply(&one).coeffs()[0].is_one());
    }

    #[test]
    fn curve_low_orders() {
        let e = qcurve_residual(&p(), 3).unwrap();
        assert!(e.passed(), "{}", e.witness);
        assert!(residual_4d(&ratio(3, 2), 3).unwrap().passed());
    }

    #[test]
    fn phi_leading_term() {
        let g = GenOp::new(&p(), 1, 6);
        let phi2 = g.phi(2);
        assert_eq!(phi2.low(), -2);
        assert_eq!(phi2.coeff(-2).unwrap().coeffs()[0], p().u_pow(-25));
        let phi0 = g.phi(0);
        assert_eq!(phi0.coeff(0).unwrap().coeffs()[0], p().u_pow(-1));
    }

    #[test]
    fn kac_schwarz_small() {
        let e = kac_schwarz_check(&p(), 2, 6, 1).unwrap();
        assert!(e.passed(), "{}", e.witness);
        let c = z_phi0_constant(&p(), 1, 5).unwrap();
        assert!(c.passed(), "{}", c.witness);
    }
}
