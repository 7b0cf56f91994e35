//! The 4D limit `q = e^{-R hbar}`, `Q = (R Lambda)^2`, `x = e^{R(X - hbar/2)}`
//! checked coefficient by coefficient in the radius `R`.

use rayon::prelude::*;
use serde_json::json;

use crate::error::{Error, Result};
use crate::exactcore::laurent::Laurent;
use crate::exactcore::poly::Poly;
use crate::exactcore::scalar::{binomial, pow_i64, rat_to_f64};
use crate::exactcore::{fmt_rat, rat, RSeries, Rat, RatFun, Ring, TPoly};
use crate::partfun::{insertion4d_factor, insertion4d_ratfun};
use crate::partitions::{enumerate_partitions, phi4d_k, plancherel_weight, Partition};
use crate::report::{rat_json, ratfun_json, Entry};

/// Parameters of the substitution and the last `R` exponent to verify.
#[derive(Clone, Debug)]
pub struct RSubstitution {
    pub hbar: Rat,
    pub lambda: Rat,
    pub order: i64,
}

impl RSubstitution {
    pub fn new(hbar: Rat, lambda: Rat) -> Result<Self> {
        if hbar == rat(0) {
            return Err(Error::InvalidArgument("hbar must be nonzero".into()));
        }
        Ok(RSubstitution { hbar, lambda, order: 4 })
    }

    /// `w = (Lambda / hbar)^2`, the 4D fugacity.
    pub fn w(&self) -> Rat {
        let r = &self.lambda / &self.hbar;
        &r * &r
    }
}

/// `exp(a R)`.
fn e<R: Ring>(a: &R, prec: i64) -> Laurent<R> {
    Laurent::exp_linear(a, prec)
}

/// `1 - exp(a R)`, of valuation one when `a != 0`.
fn one_minus_e<R: Ring>(a: &R, prec: i64) -> Laurent<R> {
    Laurent::one(prec).sub(&e(a, prec))
}

fn first_nonzero<R: Ring>(d: &Laurent<R>, upto: i64) -> Option<(i64, R)> {
    (d.low()..=upto.min(d.prec() - 1)).find_map(|k| {
        let c = d.coeff(k).ok()?;
        (!c.is_zero()).then_some((k, c))
    })
}

/// `lambda`-term of `Z(x_1, .., x_N)` under the substitution, each `x_j`
/// given by its `X_j` in any coefficient ring (a number or the symbol itself).
pub fn weight_term<R: Ring>(sub: &RSubstitution, lambda: &Partition, xs: &[R]) -> Result<Laurent<R>> {
    let n = lambda.size() as i64;
    let len = lambda.len() as i64;
    let hooks = lambda.hook_lengths();
    let prec = sub.order + 2 * hooks.len() as i64 + 2 * len * xs.len() as i64 + 4;
    let h = &sub.hbar;
    let lead = rat(n + 2 * lambda.n_lambda() as i64);
    let mut s: Laurent<R> = e(&R::from_rat(-(lead * h)), prec);
    for &hk in hooks.values() {
        let d = one_minus_e(&R::from_rat(-(rat(hk as i64) * h)), prec).inv()?;
        s = s.mul(&d).mul(&d);
    }
    s = s.mul(&Laurent::monomial(R::from_rat(pow_i64(&sub.lambda, 2 * n)), 2 * n, prec + 2 * n));
    for x in xs {
        for i in 1..=len {
            let l = lambda.part(i as usize) as i64;
            let num = one_minus_e(&x.sub(&R::from_rat(rat(l - i + 1) * h)), prec);
            let den = one_minus_e(&x.sub(&R::from_rat(rat(1 - i) * h)), prec);
            s = s.mul(&num.div(&den)?);
        }
    }
    if s.prec() <= sub.order {
        return Err(Error::CutoffExceeded(format!("R-window ends at {}", s.prec() - 1)));
    }
    Ok(s.truncate(sub.order + 1))
}

fn plancherel_sq_w(sub: &RSubstitution, lambda: &Partition) -> Rat {
    let p = plancherel_weight(lambda);
    &p * &p * pow_i64(&sub.w(), lambda.size() as i64)
}

/// Weight limit at a numeric `X`: no pole in `R` and constant term equal to
/// the 4D `lambda`-term.
pub fn weight_limit_check(sub: &RSubstitution, lambda: &Partition, x: &Rat) -> Result<Entry> {
    let s = weight_term(sub, lambda, std::slice::from_ref(x))?;
    let want = plancherel_sq_w(sub, lambda) * insertion4d_factor(&sub.hbar, lambda, x)?;
    let d = s.sub(&Laurent::constant(want.clone(), s.prec()));
    let first = first_nonzero(&d, 0);
    Ok(Entry::new(
        format!("weight limit {lambda:?} at X = {}", fmt_rat(x)),
        format!("R^{}..R^0", s.low()),
        first.is_none(),
        json!({
            "constant": rat_json(&want),
            "first_nonzero": first.map(|(k, c)| json!({ "R": k, "coefficient": rat_json(&c) })),
        }),
    ))
}

/// The same with `X` kept as a symbol; coefficients are rational functions.
pub fn weight_limit_symbolic(sub: &RSubstitution, lambda: &Partition) -> Result<(bool, serde_json::Value)> {
    let s = weight_term(sub, lambda, &[RatFun::x()])?;
    let want = insertion4d_ratfun(&sub.hbar, lambda).scale(&plancherel_sq_w(sub, lambda));
    let d = s.sub(&Laurent::constant(want, s.prec()));
    let first = first_nonzero(&d, 0);
    Ok((
        first.is_none(),
        json!({
            "lambda": lambda.parts(),
            "first_nonzero": first.map(|(k, c)| json!({ "R": k, "coefficient": ratfun_json(&c) })),
        }),
    ))
}

/// `phi_j(lambda)` with `q = e^{-R hbar}`.
fn phi_r(sub: &RSubstitution, lambda: &Partition, j: u32, prec: i64) -> RSeries {
    let mut acc = RSeries::zero(prec);
    let jh = rat(j as i64) * &sub.hbar;
    for i in 1..=lambda.len() as i64 {
        let l = lambda.part(i as usize) as i64;
        acc = acc.add(&e(&-(rat(l - i + 1) * &jh), prec)).sub(&e(&-(rat(1 - i) * &jh), prec));
    }
    acc
}

/// `sum_j (-1)^{k-j} C(k,j) phi_j` vanishes through `R^{k-1}` and its `R^k`
/// coefficient is `(-hbar)^k phi^{4D}_k`.
pub fn phi_finite_diff(sub: &RSubstitution, lambda: &Partition, k: u32) -> Result<(RSeries, Rat)> {
    if k == 0 {
        return Err(Error::InvalidArgument("k >= 1".into()));
    }
    let prec = k as i64 + sub.order + 1;
    let mut acc = RSeries::zero(prec);
    for j in 1..=k {
        let c = binomial(k as u64, j as u64) * pow_i64(&rat(-1), (k - j) as i64);
        acc = acc.add(&phi_r(sub, lambda, j, prec).scale(&c));
    }
    let want = Rat::from_integer(phi4d_k(lambda, k)) * pow_i64(&-sub.hbar.clone(), k as i64);
    Ok((acc, want))
}

pub fn phi_finite_diff_check(sub: &RSubstitution, lambda: &Partition, k: u32) -> Result<(bool, serde_json::Value)> {
    let (s, want) = phi_finite_diff(sub, lambda, k)?;
    let d = s.sub(&RSeries::monomial(want.clone(), k as i64, s.prec()));
    let first = first_nonzero(&d, k as i64);
    Ok((
        first.is_none(),
        json!({
            "lambda": lambda.parts(),
            "k": k,
            "leading": rat_json(&want),
            "first_nonzero": first.map(|(e, c)| json!({ "R": e, "coefficient": rat_json(&c) })),
        }),
    ))
}

/// `t_j = sum_{k>=j} C(k,j) (-1)^{k-j} T_k / (-R hbar)^k`, entry `j-1` for `t_j`.
pub fn t_of_t<R: Ring>(hbar: &Rat, tt: &[R], prec: i64) -> Vec<Laurent<R>> {
    let kmax = tt.len();
    (1..=kmax)
        .map(|j| {
            let mut acc = Laurent::zero(prec);
            for k in j..=kmax {
                let c = binomial(k as u64, j as u64) * pow_i64(&rat(-1), (k - j) as i64) / pow_i64(&-hbar.clone(), k as i64);
                acc = acc.add(&Laurent::monomial(tt[k - 1].scale(&c), -(k as i64), prec));
            }
            acc
        })
        .collect()
}

/// `phi(t(T, R), lambda) = sum_j t_j phi_j(lambda)`.
fn potential<R: Ring>(sub: &RSubstitution, lambda: &Partition, tt: &[R]) -> Laurent<R> {
    let kmax = tt.len() as i64;
    let prec = sub.order + kmax + 1;
    let ts = t_of_t(&sub.hbar, tt, prec);
    let mut acc = Laurent::zero(sub.order + 1);
    for (j, tj) in ts.iter().enumerate() {
        let phi = phi_r(sub, lambda, j as u32 + 1, prec).map(|c| R::from_rat(c.clone()));
        acc = acc.add(&tj.mul(&phi));
    }
    acc.truncate(sub.order + 1)
}

pub fn potential_limit_check(sub: &RSubstitution, lambda: &Partition, tt: &[Rat]) -> Result<(bool, serde_json::Value)> {
    let s = potential(sub, lambda, tt);
    let want = tt
        .iter()
        .enumerate()
        .fold(rat(0), |a, (k, t)| a + t * Rat::from_integer(phi4d_k(lambda, k as u32 + 1)));
    let d = s.sub(&RSeries::constant(want.clone(), s.prec()));
    let first = first_nonzero(&d, 0);
    Ok((
        first.is_none(),
        json!({
            "lambda": lambda.parts(),
            "T": tt.iter().map(rat_json).collect::<Vec<_>>(),
            "constant": rat_json(&want),
            "first_nonzero": first.map(|(e, c)| json!({ "R": e, "coefficient": rat_json(&c) })),
        }),
    ))
}

/// The full `lambda`-term `weight * exp(phi(t(T, R)))` with formal `T_1..T_kmax`
/// tends to `w^|lambda| (dim/|lambda|!)^2 exp(sum T_k phi^{4D}_k)`.
pub fn lambda_term_limit(sub: &RSubstitution, lambda: &Partition, kmax: u32, dt: u32) -> Result<(bool, serde_json::Value)> {
    let tt: Vec<TPoly> = (0..kmax as usize).map(|i| TPoly::var(i, Some(dt))).collect();
    let weight = weight_term::<Rat>(sub, lambda, &[])?.map(|c| TPoly::constant(c.clone(), Some(dt)));
    let phi = potential(sub, lambda, &tt);
    let term = weight.mul(&phi.exp()?);
    let mut lin = TPoly::zero_with(Some(dt));
    for (k, t) in tt.iter().enumerate() {
        lin = lin.add(&t.scale(&Rat::from_integer(phi4d_k(lambda, k as u32 + 1))));
    }
    let expo = lin.exp_nilpotent().ok_or(Error::NonZeroConstantTerm)?;
    let want = expo.scale(&plancherel_sq_w(sub, lambda));
    let d = term.sub(&Laurent::constant(want, term.prec()));
    let first = first_nonzero(&d, 0);
    Ok((
        first.is_none(),
        json!({
            "lambda": lambda.parts(),
            "first_nonzero": first.map(|(e, c)| json!({ "R": e, "coefficient": format!("{c:?}") })),
        }),
    ))
}

/// `[(A - 1) f](x(X, R))` for a test function `f(X)`, as a series in `R` with
/// coefficients rational in `X`.
pub fn operator_expansion(sub: &RSubstitution, f: &RatFun) -> Result<Laurent<RatFun>> {
    let h = &sub.hbar;
    for k in -2..=2 {
        if f.den().eval(&(rat(k) * h)) == rat(0) {
            return Err(Error::InvalidArgument(format!("test function has a pole at X = {}", fmt_rat(&(rat(k) * h)))));
        }
    }
    let prec = sub.order + 4;
    let x = RatFun::x();
    let c = |v: Rat| RatFun::constant(v);
    let lam2 = &sub.lambda * &sub.lambda;
    let f_minus = Laurent::constant(f.shift_var(&-h.clone()), prec);
    let f0 = Laurent::constant(f.clone(), prec);
    let f_plus = Laurent::constant(f.shift_var(h), prec);
    let qx = e(&x.sub(&c(h.clone())), prec);
    let big_q = Laurent::monomial(c(lam2), 2, prec + 2);
    let t1 = Laurent::one(prec).sub(&qx).mul(&f_minus);
    let t2 = qx.sub(&Laurent::one(prec)).mul(&f0);
    let t3 = big_q.mul(&qx).mul(&f0);
    let x2 = e(&x.scale(&rat(2)).sub(&c(h.clone())), prec);
    let t4 = big_q.mul(&x2).mul(&one_minus_e(&x, prec).inv()?).mul(&f_plus);
    Ok(t1.add(&t2).add(&t3).add(&t4))
}

/// The `R^1` coefficient predicted by the 4D operator.
pub fn operator_first_order(sub: &RSubstitution, f: &RatFun) -> Result<RatFun> {
    let h = &sub.hbar;
    let xm = RatFun::from_poly(Poly::linear(-h.clone(), rat(1)));
    let lam2 = RatFun::new(Poly::constant(&sub.lambda * &sub.lambda), Poly::x())?;
    Ok(xm.mul(&f.shift_var(&-h.clone()).sub(f)).neg().sub(&lam2.mul(&f.shift_var(h))))
}

pub fn operator_limit_check(sub: &RSubstitution, f: &RatFun) -> Result<(bool, serde_json::Value)> {
    let s = operator_expansion(sub, f)?;
    let want = operator_first_order(sub, f)?;
    let d = s.sub(&Laurent::monomial(want.clone(), 1, s.prec()));
    let first = first_nonzero(&d, 1);
    Ok((
        first.is_none(),
        json!({
            "f": ratfun_json(f),
            "first_order": ratfun_json(&want),
            "first_nonzero": first.map(|(e, c)| json!({ "R": e, "coefficient": ratfun_json(&c) })),
        }),
    ))
}

/// Outcome of the floating-point convergence estimate.
#[derive(Clone, Debug)]
pub struct Rate {
    pub errors: Vec<f64>,
    pub slope: f64,
    pub loss_of_precision: bool,
}

fn z5d_float(sub: &RSubstitution, parts: &[Partition], x: f64, r: f64) -> f64 {
    let h = rat_to_f64(&sub.hbar);
    let big_q = (r * rat_to_f64(&sub.lambda)).powi(2);
    parts
        .iter()
        .map(|l| {
            let n = l.size() as f64;
            let mut w = (-(n + 2.0 * l.n_lambda() as f64) * h * r).exp() * big_q.powf(n);
            for &hk in l.hook_lengths().values() {
                let d = -(-(hk as f64) * h * r).exp_m1();
                w /= d * d;
            }
            for i in 1..=l.len() as i64 {
                let a = (l.part(i as usize) as i64 - i + 1) as f64;
                let b = (1 - i) as f64;
                w *= (r * (x - a * h)).exp_m1() / (r * (x - b * h)).exp_m1();
            }
            w
        })
        .sum()
}

fn z4d_float(sub: &RSubstitution, parts: &[Partition], x: f64) -> f64 {
    let h = rat_to_f64(&sub.hbar);
    let w = rat_to_f64(&sub.w());
    parts
        .iter()
        .map(|l| {
            let p = rat_to_f64(&plancherel_weight(l));
            let mut v = p * p * w.powi(l.size() as i32);
            for i in 1..=l.len() as i64 {
                let a = (l.part(i as usize) as i64 - i + 1) as f64;
                v *= (x - a * h) / (x - (1 - i) as f64 * h);
            }
            v
        })
        .sum()
}

/// `|Z_{<=N}(x(X, R)) - Z_4D,<=N(X)|` for each `R` and the least-squares
/// slope of `log err` against `log R`.
pub fn numeric_rate(sub: &RSubstitution, x: f64, ncut: u32, rs: &[f64]) -> Result<Rate> {
    if rs.len() < 2 || rs.windows(2).any(|p| !(p[0] > p[1] && p[1] > 0.0)) {
        return Err(Error::InvalidArgument("R values must be positive and decreasing".into()));
    }
    let parts = enumerate_partitions(ncut);
    let z4 = z4d_float(sub, &parts, x);
    let errors: Vec<f64> = rs.iter().map(|&r| (z5d_float(sub, &parts, x, r) - z4).abs()).collect();
    let loss_of_precision = errors.iter().any(|&e| e < 1e-12);
    let pts: Vec<(f64, f64)> = rs.iter().zip(&errors).map(|(r, e)| (r.ln(), e.ln())).collect();
    let m = pts.len() as f64;
    let (sx, sy) = pts.iter().fold((0.0, 0.0), |(a, b), (x, y)| (a + x, b + y));
    let (mx, my) = (sx / m, sy / m);
    let num: f64 = pts.iter().map(|(x, y)| (x - mx) * (y - my)).sum();
    let den: f64 = pts.iter().map(|(x, _)| (x - mx) * (x - mx)).sum();
    Ok(Rate { errors, slope: num / den, loss_of_precision })
}

fn collect(
    name: &str,
    window: String,
    items: Vec<Result<(bool, serde_json::Value)>>,
) -> Entry {
    let mut fails = Vec::new();
    let mut count = 0;
    for it in items {
        count += 1;
        match it {
            Ok((true, _)) => {}
            Ok((false, w)) => fails.push(w),
            Err(e) => return Entry::error(name, window, &e),
        }
    }
    Entry::new(name, window, fails.is_empty(), json!({ "cases": count, "failures": fails }))
}

/// Test functions for the operator expansion.
pub fn test_functions(hbar: &Rat) -> Vec<RatFun> {
    let mut out = vec![RatFun::constant(rat(1)), RatFun::x()];
    out.push(RatFun::from_poly(Poly::new(vec![rat(2), rat(-1), rat(3)])));
    // Poles at X = 1/2 + (shifts of) hbar/3 stay off the lattice hbar Z.
    let pole = hbar / rat(3) + crate::exactcore::ratio(1, 2);
    out.push(RatFun::new(Poly::linear(rat(1), rat(1)), Poly::linear(-pole, rat(1))).expect("nonzero"));
    out
}

/// All limit statements for `|lambda| <= size`, `k <= kmax`.
pub fn limit_suite(sub: &RSubstitution, size: u32, kmax: u32) -> Vec<Entry> {
    let parts = enumerate_partitions(size);
    let window = format!("|lambda| <= {size}, R^..R^{}", sub.order);
    let mut out = Vec::new();

    let w: Vec<_> = parts.par_iter().map(|l| weight_limit_symbolic(sub, l)).collect();
    out.push(collect("weight limits (symbolic X)", window.clone(), w));

    let pairs: Vec<(Partition, u32)> = parts.iter().flat_map(|l| (1..=kmax).map(move |k| (l.clone(), k))).collect();
    let f: Vec<_> = pairs.par_iter().map(|(l, k)| phi_finite_diff_check(sub, l, *k)).collect();
    out.push(collect("phi finite differences", format!("{window}, k <= {kmax}"), f));

    let samples: Vec<Vec<Rat>> = {
        let mut s: Vec<Vec<Rat>> = (0..kmax as usize)
            .map(|i| {
                let mut t = vec![rat(0); kmax as usize];
                t[i] = rat(1);
                t
            })
            .collect();
        s.push((1..=kmax as i64).map(|k| crate::exactcore::ratio(if k % 2 == 0 { -k } else { k }, k + 2)).collect());
        s
    };
    let cases: Vec<(Partition, Vec<Rat>)> =
        parts.iter().flat_map(|l| samples.iter().map(move |t| (l.clone(), t.clone()))).collect();
    let p: Vec<_> = cases.par_iter().map(|(l, t)| potential_limit_check(sub, l, t)).collect();
    out.push(collect("potential limits", format!("{window}, T_1..T_{kmax}"), p));

    let z: Vec<_> = parts.par_iter().map(|l| lambda_term_limit(sub, l, kmax.min(3), 2)).collect();
    out.push(collect("lambda-term limits (formal T)", format!("{window}, T-degree 2"), z));

    let o: Vec<_> = test_functions(&sub.hbar).iter().map(|f| operator_limit_check(sub, f)).collect();
    out.push(collect("operator expansion", format!("R^0, R^1 through R^{}", sub.order), o));
    out
}

/// The floating-point supplement: slope within `1 +- 0.1`, halving `R`
/// halves the error within 10%, and the slope does not depend on `N >= 3`.
pub fn rate_entry(sub: &RSubstitution, x: f64) -> Entry {
    let rs = [1e-2, 1e-3, 1e-4];
    let run = || -> Result<(bool, serde_json::Value)> {
        let r3 = numeric_rate(sub, x, 3, &rs)?;
        let r4 = numeric_rate(sub, x, 4, &rs)?;
        let half = numeric_rate(sub, x, 3, &[1e-3, 5e-4])?;
        let ratio = half.errors[0] / half.errors[1];
        let ok = (r3.slope - 1.0).abs() <= 0.1
            && (r4.slope - r3.slope).abs() <= 0.1
            && (ratio - 2.0).abs() <= 0.2
            && !r3.loss_of_precision
            && !r4.loss_of_precision;
        Ok((
            ok,
            json!({
                "R": rs,
                "errors_n3": r3.errors,
                "slope_n3": r3.slope,
                "slope_n4": r4.slope,
                "halving_ratio": ratio,
                "loss_of_precision": r3.loss_of_precision || r4.loss_of_precision,
            }),
        ))
    };
    let window = format!("X = {x}, R in 1e-2..1e-4, N = 3, 4");
    match run() {
        Ok((ok, w)) => Entry::new("numeric convergence rate", window, ok, w),
        Err(e) => Entry::error("numeric convergence rate", window, &e),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactcore::ratio;

    fn sub() -> RSubstitution {
        RSubstitution::new(rat(1), rat(1)).unwrap()
    }

    fn part(p: &[u32]) -> Partition {
        Partition::new(p.to_vec()).unwrap()
    }

    #[test]
    fn empty_partition_term_is_one() {
        let s = weight_term::<Rat>(&sub(), &Partition::empty(), &[]).unwrap();
        assert_eq!(s, RSeries::one(5));
    }

    #[test]
    fn single_box_limit() {
        let s = RSubstitution::new(ratio(1, 2), ratio(3, 1)).unwrap();
        let t = weight_term(&s, &part(&[1]), &[RatFun::x()]).unwrap();
        // (Lambda/hbar)^2 (X - hbar)/X
        let want = RatFun::new(Poly::linear(rat(-18), rat(36)), Poly::x()).unwrap();
        assert_eq!(t.coeff(0).unwrap(), want);
        assert!(t.pole_part().is_empty());
        assert!(weight_limit_check(&s, &part(&[2]), &rat(5)).unwrap().passed());
    }

    #[test]
    fn insertion_at_zero_is_a_pole() {
        let e = weight_limit_check(&sub(), &part(&[1]), &rat(0));
        assert!(matches!(e, Err(Error::SeriesPole(_))));
    }

    #[test]
    fn finite_differences() {
        let (s, want) = phi_finite_diff(&sub(), &part(&[1]), 1).unwrap();
        assert_eq!(s.coeff(1).unwrap(), rat(-1));
        assert_eq!(s.coeff(2).unwrap(), ratio(1, 2));
        assert_eq!(want, rat(-1));
        let (s, want) = phi_finite_diff(&sub(), &part(&[2, 1]), 2).unwrap();
        assert_eq!(s.coeff(2).unwrap(), rat(3));
        assert_eq!(want, rat(3));
        assert!(phi_finite_diff(&sub(), &Partition::empty(), 3).unwrap().0.is_zero());
    }

    #[test]
    fn leading_order_homogeneous_in_hbar() {
        let l = part(&[3, 1]);
        for k in 1..=4u32 {
            let a = phi_finite_diff(&sub(), &l, k).unwrap().0.coeff(k as i64).unwrap();
            let s2 = RSubstitution::new(rat(2), rat(1)).unwrap();
            let b = phi_finite_diff(&s2, &l, k).unwrap().0.coeff(k as i64).unwrap();
            assert_eq!(b, a * pow_i64(&rat(2), k as i64));
        }
    }

    #[test]
    fn couplings_from_t() {
        let h = ratio(1, 3);
        let t = t_of_t(&h, &[rat(5)], 2);
        assert_eq!(t[0].coeff(-1).unwrap(), rat(-15));
        let t = t_of_t(&h, &[rat(0), rat(2)], 2);
        assert_eq!(t[0].coeff(-2).unwrap(), rat(-36));
        assert_eq!(t[1].coeff(-2).unwrap(), rat(18));
        assert!(t_of_t(&h, &vec![rat(0); 3], 2).iter().all(|s| s.is_zero()));
    }

    #[test]
    fn potential_superposition() {
        let s = sub();
        let l = part(&[2, 2, 1]);
        let a = potential(&s, &l, &[rat(1), rat(0), rat(0)]);
        let b = potential(&s, &l, &[rat(0), rat(0), rat(1)]);
        let ab = potential(&s, &l, &[rat(3), rat(0), rat(-2)]);
        assert_eq!(ab.coeff(0).unwrap(), a.coeff(0).unwrap() * rat(3) - b.coeff(0).unwrap() * rat(2));
        assert!(potential_limit_check(&s, &part(&[1]), &[rat(0), rat(7)]).unwrap().0);
    }

    #[test]
    fn operator_examples() {
        let s = sub();
        let one = operator_expansion(&s, &RatFun::constant(rat(1))).unwrap();
        assert!(one.coeff(0).unwrap().is_zero());
        // -Lambda^2 / X
        assert_eq!(one.coeff(1).unwrap(), RatFun::new(Poly::constant(rat(-1)), Poly::x()).unwrap());
        assert!(operator_limit_check(&s, &RatFun::x()).unwrap().0);
        let bad = RatFun::new(Poly::one(), Poly::x()).unwrap();
        assert!(operator_expansion(&s, &bad).is_err());
    }

    #[test]
    fn small_suite() {
        let s = sub();
        for e in limit_suite(&s, 2, 2) {
            assert!(e.passed(), "{} {}", e.name, e.witness);
        }
    }

    #[test]
    fn convergence_slope() {
        let r = numeric_rate(&sub(), 5.0, 3, &[1e-2, 1e-3, 1e-4]).unwrap();
        assert!((r.slope - 1.0).abs() < 0.1, "{r:?}");
        assert!(!r.loss_of_precision);
    }
}
