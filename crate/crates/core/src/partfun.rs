//! Partition sums for the 5D melting crystal and its 4D counterpart, and
//! their comparison with the fermionic expressions.

use rayon::prelude::*;
use serde_json::json;

use crate::error::{Error, Result};
use crate::exactcore::poly::Poly;
use crate::exactcore::{fmt_rat, rat, GradedSeries, QParams, Rat, RatFun, Ring, TPoly};
use crate::fock::{
    apply_chain, bra_chain, current_exponential, eigenvalue, g_chain, vertex_rho, Diagonal, FockCtx, GState, Op,
    VertexKind,
};
use crate::partitions::{enumerate_partitions, phi_k_s, plancherel_weight, schur_principal, Partition};
use crate::profile::{timed, Kernel};
use crate::report::Entry;

/// `sum_{|lambda| <= ncut} weight(lambda) g^{|lambda| + offset}`.
pub fn partition_sum<R: Ring>(
    ncut: u32,
    offset: u32,
    weight: impl Fn(&Partition) -> Result<R> + Sync,
) -> Result<GradedSeries<R>> {
    let parts = timed(Kernel::PartitionEnumeration, || enumerate_partitions(ncut));
    let terms: Vec<(usize, R)> = parts
        .par_iter()
        .map(|l| Ok((l.size() as usize, weight(l)?)))
        .collect::<Result<_>>()?;
    let cutoff = (ncut + offset) as i64;
    let mut coeffs = vec![R::zero(); cutoff as usize + 1];
    for (n, w) in terms {
        coeffs[n + offset as usize].add_assign(&w);
    }
    Ok(GradedSeries::from_coeffs(coeffs))
}

/// The couplings `t_1..t_kmax` as formal variables truncated at total degree `dt`.
pub fn formal_couplings(kmax: u32, dt: u32) -> Vec<TPoly> {
    (0..kmax as usize).map(|i| TPoly::var(i, Some(dt))).collect()
}

fn charge_offset(s: i64) -> Result<u32> {
    u32::try_from(s * (s + 1) / 2).map_err(|_| Error::InvalidArgument(format!("charge {s} out of range")))
}

/// `prod_i (1 - q^{lambda_i - i + 1/2} x) / (1 - q^{-i + 1/2} x)` at a number.
pub fn insertion_factor(params: &QParams, lambda: &Partition, x: &Rat) -> Result<Rat> {
    let mut acc = rat(1);
    for i in 1..=lambda.len() as i64 {
        let l = lambda.part(i as usize) as i64;
        let den = rat(1) - params.u_pow(4 * (1 - 2 * i)) * x;
        if den == rat(0) {
            return Err(Error::InsertionPole(format!("1 - q^({}/2) x vanishes at x = {}", 1 - 2 * i, fmt_rat(x))));
        }
        acc *= (rat(1) - params.u_pow(4 * (2 * l - 2 * i + 1)) * x) / den;
    }
    Ok(acc)
}

/// The same product as a rational function of `x`.
pub fn insertion_ratfun(params: &QParams, lambda: &Partition) -> RatFun {
    let mut num = Poly::one();
    let mut den = Poly::one();
    for i in 1..=lambda.len() as i64 {
        let l = lambda.part(i as usize) as i64;
        num = num.mul(&Poly::linear(rat(1), -params.u_pow(4 * (2 * l - 2 * i + 1))));
        den = den.mul(&Poly::linear(rat(1), -params.u_pow(4 * (1 - 2 * i))));
    }
    RatFun::new(num, den).expect("nonzero denominator")
}

/// `prod_i (X - (lambda_i - i + 1) hbar) / (X - (-i + 1) hbar)` at a number.
pub fn insertion4d_factor(hbar: &Rat, lambda: &Partition, x: &Rat) -> Result<Rat> {
    let mut acc = rat(1);
    for i in 1..=lambda.len() as i64 {
        let l = lambda.part(i as usize) as i64;
        let den = x - rat(1 - i) * hbar;
        if den == rat(0) {
            return Err(Error::InsertionPole(format!("X = {} hits ({})hbar", fmt_rat(x), 1 - i)));
        }
        acc *= (x - rat(l - i + 1) * hbar) / den;
    }
    Ok(acc)
}

pub fn insertion4d_ratfun(hbar: &Rat, lambda: &Partition) -> RatFun {
    let mut num = Poly::one();
    let mut den = Poly::one();
    for i in 1..=lambda.len() as i64 {
        let l = lambda.part(i as usize) as i64;
        num = num.mul(&Poly::linear(-rat(l - i + 1) * hbar, rat(1)));
        den = den.mul(&Poly::linear(-rat(1 - i) * hbar, rat(1)));
    }
    RatFun::new(num, den).expect("nonzero denominator")
}

/// `exp(sum_k t_k phi_k)` for nilpotent couplings.
fn exp_potential(t: &[TPoly], phi: impl Fn(u32) -> Result<Rat>) -> Result<TPoly> {
    let mut acc = TPoly::zero();
    for (i, tk) in t.iter().enumerate() {
        if !tk.is_zero() {
            acc = acc.add(&tk.scale(&phi(i as u32 + 1)?));
        }
    }
    if acc.is_zero() {
        return Ok(TPoly::constant(rat(1), t.first().and_then(TPoly::cutoff)));
    }
    acc.exp_nilpotent().ok_or(Error::NonZeroConstantTerm)
}

/// `Z(t, s, x_1..x_N)` through `Q^{ncut + s(s+1)/2}` with coefficients
/// polynomial in the couplings.
pub fn z5d(params: &QParams, t: &[TPoly], s: i64, insertions: &[Rat], ncut: u32) -> Result<GradedSeries<TPoly>> {
    partition_sum(ncut, charge_offset(s)?, |l| {
        let sq = schur_principal(params, l)?;
        let mut w = &sq * &sq;
        for x in insertions {
            w *= insertion_factor(params, l, x)?;
        }
        Ok(exp_potential(t, |k| phi_k_s(params, l, k, s))?.scale(&w))
    })
}

/// `Z(0, s, x_1..x_N)` with numeric coefficients.
pub fn z5d_numeric(params: &QParams, s: i64, insertions: &[Rat], ncut: u32) -> Result<GradedSeries<Rat>> {
    partition_sum(ncut, charge_offset(s)?, |l| {
        let sq = schur_principal(params, l)?;
        let mut w = &sq * &sq;
        for x in insertions {
            w *= insertion_factor(params, l, x)?;
        }
        Ok(w)
    })
}

/// `Z(x)` with exact rational-function coefficients in `x`.
pub fn z5d_x(params: &QParams, ncut: u32) -> Result<GradedSeries<RatFun>> {
    partition_sum(ncut, 0, |l| {
        let sq = schur_principal(params, l)?;
        Ok(insertion_ratfun(params, l).scale(&(&sq * &sq)))
    })
}

/// `Z_4D(T, s, X_1..X_N)` through `w^{ncut + s(s+1)/2}`, `w = (Lambda/hbar)^2`.
/// The charge-`s` potentials are the bead eigenvalues of `H^{4D}_k`.
pub fn z4d(hbar: &Rat, t: &[TPoly], s: i64, insertions: &[Rat], ncut: u32) -> Result<GradedSeries<TPoly>> {
    let params = QParams::default_params();
    partition_sum(ncut, charge_offset(s)?, |l| {
        let p = plancherel_weight(l);
        let mut w = &p * &p;
        for x in insertions {
            w *= insertion4d_factor(hbar, l, x)?;
        }
        let phi = |k| Ok(eigenvalue(&params, Diagonal::H4D(k), s, l));
        Ok(exp_potential(t, phi)?.scale(&w))
    })
}

pub fn z4d_numeric(hbar: &Rat, insertions: &[Rat], ncut: u32) -> Result<GradedSeries<Rat>> {
    partition_sum(ncut, 0, |l| {
        let p = plancherel_weight(l);
        let mut w = &p * &p;
        for x in insertions {
            w *= insertion4d_factor(hbar, l, x)?;
        }
        Ok(w)
    })
}

/// `Z_4D(X)` with rational-function coefficients in `X`.
pub fn z4d_x(hbar: &Rat, ncut: u32) -> Result<GradedSeries<RatFun>> {
    partition_sum(ncut, 0, |l| {
        let p = plancherel_weight(l);
        Ok(insertion4d_ratfun(hbar, l).scale(&(&p * &p)))
    })
}

/// Checks `Z(t_k = -q^{-k/2} x^k / k) = Z(x)` as power series in `x` through
/// `x^xdeg`, and at `x0` the truncations agree term by term.
pub fn check_t_x_substitution(params: &QParams, ncut: u32, xdeg: u32, x0: &Rat) -> Result<Entry> {
    // One formal variable standing for x; t_k is its k-th power.
    let t: Vec<TPoly> = (1..=xdeg as i64)
        .map(|k| {
            let mut m = vec![0u32];
            m[0] = k as u32;
            TPoly::term(-params.u_pow(-4 * k) / rat(k), m, Some(xdeg))
        })
        .collect();
    let via_t = z5d(params, &t, 0, &[], ncut)?;
    let via_x = z5d_x(params, ncut)?;
    let mut bad = Vec::new();
    for n in 0..=ncut as usize {
        let taylor = via_x.coeff(n)?.taylor(xdeg as usize)?;
        let poly = via_t.coeff(n)?;
        let mut at_x0_t = rat(0);
        let mut at_x0_x = rat(0);
        for (d, c) in taylor.iter().enumerate() {
            let from_t = poly.coeff(&[d as u32]);
            let xp = x0.pow(d as i32);
            at_x0_t += &from_t * &xp;
            at_x0_x += c * &xp;
            if &from_t != c {
                bad.push(json!({ "Q": n, "x": d, "via_t": fmt_rat(&from_t), "via_x": fmt_rat(c) }));
            }
        }
        if at_x0_t != at_x0_x {
            bad.push(json!({ "Q": n, "x0": fmt_rat(x0) }));
        }
    }
    Ok(Entry::new(
        "t-x substitution",
        format!("Q^{ncut}, x^{xdeg}"),
        bad.is_empty(),
        json!({ "mismatches": bad }),
    ))
}

/// Checks `Z_4D(T_k = -hbar^k / (k X^k)) = Z_4D(X)` as series in `1/X`.
pub fn check_t_x_substitution_4d(hbar: &Rat, ncut: u32, ydeg: u32) -> Result<Entry> {
    let t: Vec<TPoly> = (1..=ydeg as i64)
        .map(|k| TPoly::term(-hbar.pow(k as i32) / rat(k), vec![k as u32], Some(ydeg)))
        .collect();
    let via_t = z4d(hbar, &t, 0, &[], ncut)?;
    let via_x = z4d_x(hbar, ncut)?;
    let mut bad = Vec::new();
    for n in 0..=ncut as usize {
        let at_inf = via_x.coeff(n)?.expand_at_infinity(ydeg as usize)?;
        let poly = via_t.coeff(n)?;
        for (d, c) in at_inf.iter().enumerate() {
            let from_t = poly.coeff(&[d as u32]);
            if &from_t != c {
                bad.push(json!({ "w": n, "1/X": d, "via_T": fmt_rat(&from_t), "via_X": fmt_rat(c) }));
            }
        }
    }
    Ok(Entry::new(
        "T-X substitution (4D)",
        format!("w^{ncut}, X^-{ydeg}"),
        bad.is_empty(),
        json!({ "mismatches": bad }),
    ))
}

/// Which fermionic expression to compare with the partition sum.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Crosscheck {
    /// `<0| Gamma_+ Q^{L0} e^{H(t)} Gamma_- |0>`.
    ZtEH,
    /// Prefactor times `<0| exp(sum (-1)^k q^{k/2} t_k J_k) g_1 |0>`.
    ZtG1,
    /// The `g_2` and `g_2'` expressions, and the standard tau function.
    ZtDual,
    /// `<0| e^{J_1} w^{L0} e^{H_4D(T)} e^{J_-1} |0>`.
    Z4dEH,
    /// Charge-`s` sectors of both models.
    ZCharged,
}

/// Windows for a crosscheck: `Q^ncut`, couplings `t_1..t_kmax` to total
/// degree `dt`.
#[derive(Clone, Copy, Debug)]
pub struct Window {
    pub ncut: u32,
    pub kmax: u32,
    pub dt: u32,
}

impl Window {
    fn describe(&self) -> String {
        format!("Q^{}, t_1..t_{} to degree {}", self.ncut, self.kmax, self.dt)
    }

    fn fock(&self, params: &QParams) -> FockCtx {
        FockCtx {
            params: params.clone(),
            size_cutoff: self.ncut.max(self.dt * self.kmax),
            grade_cap: self.ncut as i64,
        }
    }
}

/// Coefficient-wise comparison of two coupling-valued series.
pub fn compare_tseries(a: &GradedSeries<TPoly>, b: &GradedSeries<TPoly>, ncut: u32, dt: u32) -> Result<Vec<serde_json::Value>> {
    let mut bad = Vec::new();
    for n in 0..=ncut as usize {
        let x = a.coeff(n)?.with_cutoff(Some(dt));
        let y = b.coeff(n)?.with_cutoff(Some(dt));
        let d = x.sub(&y);
        if !d.is_zero() {
            bad.push(json!({ "degree": n, "difference": format!("{d:?}") }));
        }
    }
    Ok(bad)
}


/// `exp(sum_k c_k t_k J_k)` as a bra-side operator with reach `dt * kmax`.
fn coupling_exponential(t: &[TPoly], c: impl Fn(i64) -> Rat, w: &Window) -> Op<TPoly> {
    let a: Vec<TPoly> = t.iter().enumerate().map(|(i, tk)| tk.scale(&c(i as i64 + 1))).collect();
    current_exponential(false, &a, Some(w.dt * w.kmax), w.ncut as i64)
}

fn ket_tpoly(ctx: &FockCtx, which: GState) -> Result<crate::fock::FockVector<TPoly>> {
    Ok(apply_chain(ctx, 0, &g_chain(ctx, which)?)?.map(|c| TPoly::constant(c.clone(), None)))
}

fn entry_from_mismatches(name: &str, w: &Window, bad: Vec<serde_json::Value>) -> Entry {
    Entry::new(name, w.describe(), bad.is_empty(), json!({ "mismatches": bad }))
}

pub fn crosscheck_fermionic(params: &QParams, which: Crosscheck, w: Window) -> Result<Vec<Entry>> {
    let ctx = w.fock(params);
    let t = formal_couplings(w.kmax, w.dt);
    let cap = w.ncut as i64;
    let n = ctx.size_cutoff;
    let gm = vertex_rho(params, VertexKind::Plain, true, false, 0, n, cap)?;
    let gp = vertex_rho(params, VertexKind::Plain, false, false, 0, n, cap)?;
    match which {
        Crosscheck::ZtEH => {
            let comb = z5d(params, &t, 0, &[], w.ncut)?;
            let right = vec![Op::GradingPowerL0, Op::ExpH(t.clone()), gm.lift()];
            let fermi = bra_chain(&ctx, 0, &[gp.lift()])?.pair(&apply_chain(&ctx, 0, &right)?)?;
            Ok(vec![entry_from_mismatches("Z(t) = <Gamma_+ Q^L0 e^H Gamma_->", &w, compare_tseries(&comb, &fermi, w.ncut, w.dt)?)])
        }
        Crosscheck::ZtG1 => {
            let comb = z5d(params, &t, 0, &[], w.ncut)?;
            let bra = bra_chain(&ctx, 0, &[coupling_exponential(&t, |k| pow_sign(k) * params.u_pow(4 * k), &w)])?;
            let vev = bra.pair(&ket_tpoly(&ctx, GState::G1)?)?;
            let mut lin = TPoly::zero();
            for (i, tk) in t.iter().enumerate() {
                let k = i as i64 + 1;
                lin = lin.add(&tk.scale(&(params.q_pow(k) / params.one_minus_q_pow(k)?)));
            }
            let pref = lin.exp_nilpotent().ok_or(Error::NonZeroConstantTerm)?;
            let fermi = vev.scale_ring(&pref);
            Ok(vec![entry_from_mismatches("Z(t) = prefactor <e^{tJ} g_1>", &w, compare_tseries(&comb, &fermi, w.ncut, w.dt)?)])
        }
        Crosscheck::ZtDual => {
            let comb = z5d(params, &t, 0, &[], w.ncut)?;
            let bra2 = bra_chain(&ctx, 0, &[coupling_exponential(&t, |k| pow_sign(k) * params.u_pow(4 * k), &w)])?;
            let z2 = bra2.pair(&ket_tpoly(&ctx, GState::G2)?)?;
            let bra2p = bra_chain(&ctx, 0, &[coupling_exponential(&t, |k| -params.u_pow(4 * k), &w)])?;
            let z2p = bra2p.pair(&ket_tpoly(&ctx, GState::G2Prime)?)?;
            // Standard form: <0| e^{sum t_k J_k} (-q^{1/2})^{L0} g_2 |0>.
            let scaled = apply_chain(&ctx, 0, &g_chain(&ctx, GState::G2)?)?
                .apply(&ctx, &Op::ScalarPowerL0(-params.u_pow(4)))?
                .map(|c| TPoly::constant(c.clone(), None));
            let bra_std = bra_chain(&ctx, 0, &[coupling_exponential(&t, |_| rat(1), &w)])?;
            let zstd = bra_std.pair(&scaled)?;
            Ok(vec![
                entry_from_mismatches("Z(t) = <e^{tJ} g_2>", &w, compare_tseries(&comb, &z2, w.ncut, w.dt)?),
                entry_from_mismatches("Z(t) = <e^{-tJ} g_2'>", &w, compare_tseries(&comb, &z2p, w.ncut, w.dt)?),
                entry_from_mismatches("Z(t) = standard tau", &w, compare_tseries(&comb, &zstd, w.ncut, w.dt)?),
            ])
        }
        Crosscheck::Z4dEH => {
            let comb = z4d(&rat(1), &t, 0, &[], w.ncut)?;
            let fermi = z4d_fock(&ctx, &t, 0)?;
            Ok(vec![entry_from_mismatches("Z_4D(T) = <e^J1 w^L0 e^H4D e^J-1>", &w, compare_tseries(&comb, &fermi, w.ncut, w.dt)?)])
        }
        Crosscheck::ZCharged => charged_checks(params, &ctx, &t, &w),
    }
}

fn pow_sign(k: i64) -> Rat {
    if k % 2 == 0 {
        rat(1)
    } else {
        rat(-1)
    }
}

/// `<s| e^{J_1} w^{L0} e^{H_4D(T)} e^{J_-1} |s>`.
pub fn z4d_fock(ctx: &FockCtx, t: &[TPoly], s: i64) -> Result<GradedSeries<TPoly>> {
    let cap = ctx.grade_cap;
    let up = current_exponential(true, &[TPoly::one()], None, cap);
    let down = current_exponential(false, &[TPoly::one()], None, cap);
    let ket = apply_chain(ctx, s, &[Op::GradingPowerL0, Op::ExpH4D(t.to_vec()), up])?;
    bra_chain(ctx, s, &[down])?.pair(&ket)
}

/// Charge-`s` comparisons. The combinatorial 5D potential is the closed
/// form with the geometric tail; the 4D correction is whatever the beads
/// give beyond the shifted sum, and is reported.
fn charged_checks(params: &QParams, ctx: &FockCtx, t: &[TPoly], w: &Window) -> Result<Vec<Entry>> {
    let mut entries = Vec::new();
    let charges = [-2i64, -1, 1, 2];
    let mut bad = Vec::new();
    for &s in &charges {
        for l in enumerate_partitions(w.ncut) {
            for k in 1..=w.kmax {
                let closed = phi_k_s(params, &l, k, s)?;
                let beads = eigenvalue(params, Diagonal::H(k), s, &l);
                if closed != beads {
                    bad.push(json!({ "s": s, "lambda": l.to_string(), "k": k }));
                }
            }
        }
    }
    entries.push(Entry::new(
        "phi_k(s, lambda) closed form = bead eigenvalue",
        format!("s in {charges:?}, |lambda| <= {}, k <= {}", w.ncut, w.kmax),
        bad.is_empty(),
        json!({ "mismatches": bad }),
    ));

    let cap = ctx.grade_cap;
    let n = ctx.size_cutoff;
    let gm = vertex_rho(params, VertexKind::Plain, true, false, 0, n, cap)?;
    let gp = vertex_rho(params, VertexKind::Plain, false, false, 0, n, cap)?;
    for &s in &[-1i64, 1, 2] {
        let off = (s * (s + 1) / 2) as u32;
        let ctx_s = FockCtx { grade_cap: cap + off as i64, ..ctx.clone() };
        let comb = z5d(params, t, s, &[], w.ncut)?;
        let right = vec![Op::GradingPowerL0, Op::ExpH(t.to_vec()), gm.lift()];
        let fermi = bra_chain(&ctx_s, s, &[gp.lift()])?.pair(&apply_chain(&ctx_s, s, &right)?)?;
        let bad = compare_tseries(&comb, &fermi, w.ncut + off, w.dt)?;
        entries.push(entry_from_mismatches(&format!("Z(t, s={s}) = <s| Gamma_+ Q^L0 e^H Gamma_- |s>"), w, bad));

        let comb4 = z4d(&rat(1), t, s, &[], w.ncut)?;
        let fermi4 = z4d_fock(&ctx_s, t, s)?;
        let bad4 = compare_tseries(&comb4, &fermi4, w.ncut + off, w.dt)?;
        entries.push(entry_from_mismatches(&format!("Z_4D(T, s={s}) = <s| e^J1 w^L0 e^H4D e^J-1 |s>"), w, bad4));
    }

    // The 4D correction: bead eigenvalue minus the shifted finite sum.
    let mut corrections = Vec::new();
    let mut uniform = true;
    for s in -3i64..=3 {
        for k in 1..=w.kmax {
            let mut seen: Option<Rat> = None;
            for l in enumerate_partitions(w.ncut) {
                let shifted: Rat = (1..=l.len() as i64)
                    .map(|i| {
                        let li = l.part(i as usize) as i64;
                        rat(li - i + 1 + s).pow(k as i32) - rat(-i + 1 + s).pow(k as i32)
                    })
                    .fold(rat(0), |a, b| a + b);
                let c = eigenvalue(params, Diagonal::H4D(k), s, &l) - shifted;
                match &seen {
                    None => seen = Some(c),
                    Some(prev) if *prev != c => uniform = false,
                    _ => {}
                }
            }
            let c = seen.unwrap_or_else(|| rat(0));
            let closed: Rat = if s >= 0 {
                (1..=s).map(|m| rat(m).pow(k as i32)).fold(rat(0), |a, b| a + b)
            } else {
                -(s + 1..=0).map(|m| rat(m).pow(k as i32)).fold(rat(0), |a, b| a + b)
            };
            uniform &= c == closed;
            corrections.push(json!({ "s": s, "k": k, "correction": fmt_rat(&c) }));
        }
    }
    entries.push(Entry::new(
        "4D charge-s correction is lambda-independent and equals sum_{n=1}^s n^k",
        format!("|s| <= 3, |lambda| <= {}, k <= {}", w.ncut, w.kmax),
        uniform,
        json!({ "corrections": corrections }),
    ));
    Ok(entries)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactcore::scalar::ratio;

    #[test]
    fn low_orders() {
        let p = QParams::default_params();
        let z = z5d_numeric(&p, 0, &[], 2).unwrap();
        assert_eq!(z.coeff(0).unwrap(), &rat(1));
        let q = p.q().clone();
        assert_eq!(z.coeff(1).unwrap(), &(&q / ((rat(1) - &q) * (rat(1) - &q))));
        let zx = z5d_x(&p, 1).unwrap();
        let want = insertion_ratfun(&p, &Partition::new(vec![1]).unwrap()).scale(z.coeff(1).unwrap());
        assert_eq!(zx.coeff(1).unwrap(), &want);
        assert!(zx.coeff(0).unwrap().is_one());
    }

    #[test]
    fn four_d_low_orders() {
        let h = ratio(3, 2);
        let z = z4d_x(&h, 2).unwrap();
        let c1 = RatFun::new(Poly::linear(-h.clone(), rat(1)), Poly::x()).unwrap();
        assert_eq!(z.coeff(1).unwrap(), &c1);
        let plain = z4d_numeric(&h, &[], 3).unwrap();
        assert_eq!(plain.coeffs(), &[rat(1), rat(1), ratio(1, 2), ratio(1, 6)]);
    }

    #[test]
    fn insertion_pole_reported() {
        let p = QParams::default_params();
        let x = p.u_pow(4);
        let l = Partition::new(vec![1]).unwrap();
        assert!(matches!(insertion_factor(&p, &l, &x), Err(Error::InsertionPole(_))));
        assert!(matches!(insertion4d_factor(&rat(1), &l, &rat(0)), Err(Error::InsertionPole(_))));
    }

    #[test]
    fn substitutions() {
        let p = QParams::default_params();
        let e = check_t_x_substitution(&p, 3, 4, &ratio(1, 5)).unwrap();
        assert!(e.passed(), "{}", e.witness);
        assert!(check_t_x_substitution_4d(&ratio(1, 2), 3, 4).unwrap().passed());
    }

    #[test]
    fn fermionic_small_window() {
        let p = QParams::default_params();
        let w = Window { ncut: 2, kmax: 2, dt: 1 };
        for c in [Crosscheck::ZtEH, Crosscheck::ZtG1, Crosscheck::ZtDual, Crosscheck::Z4dEH, Crosscheck::ZCharged] {
            for e in crosscheck_fermionic(&p, c, w).unwrap() {
                assert!(e.passed(), "{c:?}: {e:?}");
            }
        }
    }
}
