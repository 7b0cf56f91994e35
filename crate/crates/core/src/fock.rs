//! Truncated charged free-fermion Fock space.
//!
//! States `|s, lambda>` are stored by partition within a fixed charge sector;
//! the bead (Maya diagram) picture places particles at `lambda_i - i + 1 + s`.
//! Every vector tracks which grading degrees of its amplitudes are exact, so
//! operator chains never report a coefficient that truncation could have
//! changed.

use std::collections::BTreeMap;

use num_traits::ToPrimitive;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::exactcore::ring::Ring;
use crate::exactcore::scalar::{rat, QParams, Rat};
use crate::exactcore::series::GradedSeries;
use crate::exactcore::euler::q_prefactor_series;
use crate::partitions::{enumerate_partitions, partitions_of, skew_schur_principal, Partition};
use crate::report::{rat_json, series_json, Entry};
use serde_json::json;
use crate::profile::{timed, Kernel};

/// Sentinel tail: states outside the size window are exactly zero.
pub const EXACT: i64 = i64::MAX;

/// Result of `J_k` on a basis state: signed target states.
pub fn apply_j_basis(charge: i64, lambda: &Partition, k: i64) -> Result<Vec<(i64, Partition)>> {
    if k == 0 {
        return Err(Error::ZeroModeRequest);
    }
    let m = lambda.len() + k.unsigned_abs() as usize + 1;
    let beads = lambda.beads(charge, m);
    let floor = charge - m as i64; // every position <= floor is occupied
    let occupied = |p: i64| p <= floor || beads.binary_search_by(|b| p.cmp(b)).is_ok();
    let mut out = Vec::new();
    for (idx, &b) in beads.iter().enumerate() {
        let target = b - k;
        if occupied(target) {
            continue;
        }
        let (lo, hi) = if target < b { (target, b) } else { (b, target) };
        let between = beads.iter().filter(|&&p| p > lo && p < hi).count();
        let sign = if between % 2 == 0 { 1 } else { -1 };
        let mut nb = beads.clone();
        nb[idx] = target;
        nb.sort_unstable_by(|a, b| b.cmp(a));
        let parts: Vec<u32> = nb
            .iter()
            .enumerate()
            .map(|(i, &p)| (p + i as i64 - charge) as u32)
            .collect();
        out.push((sign, Partition::from_sorted(parts)));
    }
    Ok(out)
}

/// Normal-ordered eigenvalue `sum_n f(n) :psi_{-n} psi*_n:` on `|s, lambda>`.
pub fn bead_eigenvalue(charge: i64, lambda: &Partition, f: impl Fn(i64) -> Rat) -> Rat {
    let m = lambda.len() as i64;
    let mut acc = rat(0);
    for i in 1..=m {
        acc += f(lambda.part(i as usize) as i64 - i + 1 + charge) - f(1 - i);
    }
    if charge > 0 {
        for n in (1 - m)..=(charge - m) {
            acc += f(n);
        }
    } else if charge < 0 {
        for n in (charge - m + 1)..=(-m) {
            acc -= f(n);
        }
    }
    acc
}

/// Diagonal operators of the model.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Diagonal {
    L0,
    K,
    H(u32),
    H4D(u32),
}

pub fn eigenvalue(params: &QParams, op: Diagonal, charge: i64, lambda: &Partition) -> Rat {
    match op {
        Diagonal::L0 => bead_eigenvalue(charge, lambda, rat),
        Diagonal::K => bead_eigenvalue(charge, lambda, |n| {
            let h = Rat::new((2 * n - 1).into(), 2.into());
            &h * &h
        }),
        Diagonal::H(k) => bead_eigenvalue(charge, lambda, |n| params.q_pow(k as i64 * n)),
        Diagonal::H4D(k) => bead_eigenvalue(charge, lambda, |n| rat(n).pow(k as i32)),
    }
}

fn l0_of(charge: i64, lambda: &Partition) -> i64 {
    lambda.size() as i64 + charge * (charge + 1) / 2
}

/// Operators acting on [`FockVector`]s.
#[derive(Clone, Debug)]
pub enum Op<R: Ring> {
    /// A single current mode `J_k`.
    J(i64),
    /// `exp(sum_k c_k J_{-k})` (raising) or `exp(sum_k c_k J_k)`, with
    /// `coeffs[k-1] = c_k`. `grade_rate` is a lower bound on
    /// `val(c_k) / k` valid for the whole infinite family, `reach` bounds
    /// the total size change when the exponential is finite.
    Vertex {
        raising: bool,
        coeffs: Vec<GradedSeries<R>>,
        grade_rate: i64,
        reach: Option<u32>,
    },
    /// `g^{L_0}` for the grading variable `g` (`Q` or `w`).
    GradingPowerL0,
    /// `c^{L_0}` for a scalar `c`.
    ScalarPowerL0(Rat),
    /// `q^{p K / 2}`.
    QPowerK(i64),
    /// Multiplication by the eigenvalue of a diagonal operator.
    Diag(Diagonal),
    /// `exp(sum_k t_k H_k)` with nilpotent `t_k`.
    ExpH(Vec<R>),
    /// `exp(sum_k T_k H^{4D}_k)` with nilpotent `T_k`.
    ExpH4D(Vec<R>),
    /// Multiplication by a constant.
    Scale(GradedSeries<R>),
}

impl<R: Ring> Op<R> {
    /// Adjoint with respect to the basis pairing (`J_k^T = J_{-k}`).
    pub fn transpose(&self) -> Op<R> {
        match self {
            Op::J(k) => Op::J(-k),
            Op::Vertex { raising, coeffs, grade_rate, reach } => Op::Vertex {
                raising: !raising,
                coeffs: coeffs.clone(),
                grade_rate: *grade_rate,
                reach: *reach,
            },
            other => other.clone(),
        }
    }
}

impl Op<Rat> {
    /// The same operator over a larger coefficient ring.
    pub fn lift<R: Ring>(&self) -> Op<R> {
        let series = |s: &GradedSeries<Rat>| s.map(|c| R::from_rat(c.clone()));
        match self {
            Op::J(k) => Op::J(*k),
            Op::Vertex { raising, coeffs, grade_rate, reach } => Op::Vertex {
                raising: *raising,
                coeffs: coeffs.iter().map(series).collect(),
                grade_rate: *grade_rate,
                reach: *reach,
            },
            Op::GradingPowerL0 => Op::GradingPowerL0,
            Op::ScalarPowerL0(c) => Op::ScalarPowerL0(c.clone()),
            Op::QPowerK(p) => Op::QPowerK(*p),
            Op::Diag(d) => Op::Diag(*d),
            Op::ExpH(t) => Op::ExpH(t.iter().map(|c| R::from_rat(c.clone())).collect()),
            Op::ExpH4D(t) => Op::ExpH4D(t.iter().map(|c| R::from_rat(c.clone())).collect()),
            Op::Scale(c) => Op::Scale(series(c)),
        }
    }
}

/// Which vertex operator family.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VertexKind {
    /// `Gamma(x)`: `c_k = x^k / k`.
    Plain,
    /// `Gamma'(x)`: `c_k = -(-x)^k / k`.
    Primed,
}

/// Vertex operator with coefficients `x^k` replaced by `p_k` (so the
/// specialization `q^{-rho}` uses `p_k = q^{k/2}/(1-q^k)`), optionally
/// inverted. `grade` multiplies `c_k` by `g^{k * grade}`.
pub fn vertex_from_power_sums(
    kind: VertexKind,
    raising: bool,
    inverse: bool,
    power_sums: &[Rat],
    grade: usize,
    grade_cap: i64,
) -> Op<Rat> {
    let coeffs = power_sums
        .iter()
        .enumerate()
        .map(|(i, p)| {
            let k = i as i64 + 1;
            let mut c = p / rat(k);
            if kind == VertexKind::Primed && k % 2 == 0 {
                c = -c;
            }
            if inverse {
                c = -c;
            }
            GradedSeries::monomial(c, grade * k as usize, grade_cap)
        })
        .collect();
    Op::Vertex { raising, coeffs, grade_rate: grade as i64, reach: None }
}

/// `Gamma_{+-}(q^{-rho})`-type operator with `kmax` modes.
pub fn vertex_rho(
    params: &QParams,
    kind: VertexKind,
    raising: bool,
    inverse: bool,
    grade: usize,
    kmax: u32,
    grade_cap: i64,
) -> Result<Op<Rat>> {
    let p: Vec<Rat> = (1..=kmax as i64).map(|k| params.power_sum_rho(k)).collect::<Result<_>>()?;
    Ok(vertex_from_power_sums(kind, raising, inverse, &p, grade, grade_cap))
}

/// Single-variable vertex operator at a ring-valued point `x` (numeric or a
/// nilpotent polynomial variable).
pub fn vertex_at<R: Ring>(
    kind: VertexKind,
    raising: bool,
    x: &R,
    kmax: u32,
    reach: Option<u32>,
    grade_cap: i64,
) -> Op<R> {
    let mut pw = R::one();
    let mut coeffs = Vec::new();
    for k in 1..=kmax as i64 {
        pw = pw.mul(x);
        let mut c = pw.scale(&rat(k).recip());
        if kind == VertexKind::Primed && k % 2 == 0 {
            c = c.neg();
        }
        coeffs.push(GradedSeries::constant(c, grade_cap));
    }
    Op::Vertex { raising, coeffs, grade_rate: 0, reach }
}

/// `exp(sum_k a_k J_{+-k})` for explicit ring coefficients.
pub fn current_exponential<R: Ring>(
    raising: bool,
    a: &[R],
    reach: Option<u32>,
    grade_cap: i64,
) -> Op<R> {
    let coeffs = a.iter().map(|c| GradedSeries::constant(c.clone(), grade_cap)).collect();
    Op::Vertex { raising, coeffs, grade_rate: 0, reach }
}

/// Shared parameters of a Fock computation.
#[derive(Clone, Debug)]
pub struct FockCtx {
    pub params: QParams,
    /// Largest `|lambda|` kept.
    pub size_cutoff: u32,
    /// Largest grading degree ever tracked.
    pub grade_cap: i64,
}

/// Finite combination of `|s, lambda>` with graded amplitudes.
#[derive(Clone, Debug, PartialEq)]
pub struct FockVector<R: Ring> {
    charge: i64,
    size_cutoff: u32,
    grade_cap: i64,
    amps: BTreeMap<Partition, GradedSeries<R>>,
    /// Grading degree through which all states with `|lambda| > size_cutoff`
    /// are known to vanish; [`EXACT`] when they vanish identically.
    tail: i64,
}

impl<R: Ring> FockVector<R> {
    pub fn ground(ctx: &FockCtx, charge: i64) -> Self {
        let mut amps = BTreeMap::new();
        amps.insert(Partition::empty(), GradedSeries::one(ctx.grade_cap));
        FockVector { charge, size_cutoff: ctx.size_cutoff, grade_cap: ctx.grade_cap, amps, tail: EXACT }
    }

    pub fn basis(ctx: &FockCtx, charge: i64, lambda: Partition) -> Self {
        let mut v = Self::ground(ctx, charge);
        v.amps.clear();
        v.amps.insert(lambda, GradedSeries::one(ctx.grade_cap));
        v
    }

    pub fn charge(&self) -> i64 {
        self.charge
    }

    pub fn tail(&self) -> i64 {
        self.tail
    }

    pub fn size_cutoff(&self) -> u32 {
        self.size_cutoff
    }

    pub fn amplitudes(&self) -> &BTreeMap<Partition, GradedSeries<R>> {
        &self.amps
    }

    /// Amplitude of `|lambda>`, with the exactness window it is known to.
    pub fn amplitude(&self, lambda: &Partition) -> GradedSeries<R> {
        if lambda.size() > self.size_cutoff {
            return if self.tail == EXACT {
                GradedSeries::zero(self.grade_cap)
            } else {
                GradedSeries::zero(self.tail.min(self.grade_cap))
            };
        }
        self.amps
            .get(lambda)
            .cloned()
            .unwrap_or_else(|| GradedSeries::zero(self.grade_cap))
    }

    pub fn map<S: Ring>(&self, f: impl Fn(&R) -> S) -> FockVector<S> {
        FockVector {
            charge: self.charge,
            size_cutoff: self.size_cutoff,
            grade_cap: self.grade_cap,
            amps: self.amps.iter().map(|(k, v)| (k.clone(), v.map(&f))).collect(),
            tail: self.tail,
        }
    }

    pub fn add(&self, o: &Self) -> Result<Self> {
        if self.charge != o.charge {
            return Err(Error::ChargeMismatch { bra: self.charge, ket: o.charge });
        }
        let mut amps = self.amps.clone();
        for (k, v) in &o.amps {
            let e = amps.remove(k).unwrap_or_else(|| GradedSeries::zero(self.grade_cap));
            amps.insert(k.clone(), e.add(v));
        }
        let mut out = self.clone();
        out.amps = amps;
        out.tail = self.tail.min(o.tail);
        out.prune();
        Ok(out)
    }

    pub fn scale_series(&self, c: &GradedSeries<R>) -> Self {
        let mut out = self.clone();
        for v in out.amps.values_mut() {
            *v = v.mul(c).truncate(self.grade_cap);
        }
        if self.tail != EXACT {
            out.tail = (self.tail + c.valuation()).min(self.grade_cap);
        }
        out
    }

    fn prune(&mut self) {
        let cap = self.grade_cap;
        self.amps.retain(|_, v| !(v.is_zero() && v.cutoff() >= cap));
    }

    /// One application of `sum_k c_k J_{-+k}`, keeping sizes within the window.
    fn current_sum(&self, raising: bool, coeffs: &[GradedSeries<R>]) -> Result<BTreeMap<Partition, GradedSeries<R>>> {
        let n = self.size_cutoff;
        let terms: Vec<(Partition, GradedSeries<R>)> = self
            .amps
            .par_iter()
            .map(|(mu, a)| -> Result<Vec<(Partition, GradedSeries<R>)>> {
                let mut out = Vec::new();
                for (i, c) in coeffs.iter().enumerate() {
                    let k = i as i64 + 1;
                    if c.is_zero() && c.cutoff() >= self.grade_cap {
                        continue;
                    }
                    if raising && mu.size() as i64 + k > n as i64 {
                        break;
                    }
                    if !raising && (mu.size() as i64) < k {
                        break;
                    }
                    let j = if raising { -k } else { k };
                    let ca = c.mul(a).truncate(self.grade_cap);
                    for (sign, nu) in apply_j_basis(self.charge, mu, j)? {
                        let v = if sign > 0 { ca.clone() } else { ca.neg() };
                        out.push((nu, v));
                    }
                }
                Ok(out)
            })
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .flatten()
            .collect();
        let mut acc: BTreeMap<Partition, GradedSeries<R>> = BTreeMap::new();
        for (nu, v) in terms {
            match acc.get_mut(&nu) {
                Some(e) => *e = e.add(&v),
                None => {
                    acc.insert(nu, v);
                }
            }
        }
        Ok(acc)
    }

    /// Applies one operator.
    pub fn apply(&self, ctx: &FockCtx, op: &Op<R>) -> Result<Self> {
        timed(Kernel::FockOperator, || self.apply_inner(ctx, op))
    }

    fn apply_inner(&self, ctx: &FockCtx, op: &Op<R>) -> Result<Self> {
        let n = self.size_cutoff as i64;
        match op {
            Op::J(k) => {
                if *k == 0 {
                    return Err(Error::ZeroModeRequest);
                }
                let coeffs: Vec<GradedSeries<R>> = (1..=k.unsigned_abs())
                    .map(|i| {
                        if i == k.unsigned_abs() {
                            GradedSeries::one(self.grade_cap)
                        } else {
                            GradedSeries::zero(self.grade_cap)
                        }
                    })
                    .collect();
                let raising = *k < 0;
                let mut out = self.clone();
                out.amps = self.current_sum(raising, &coeffs)?;
                out.fix_window(raising, 0, Some(k.unsigned_abs() as u32), self);
                out.prune();
                Ok(out)
            }
            Op::Vertex { raising, coeffs, grade_rate, reach } => {
                // exp(X) v = sum_m X^m v / m!; each X changes the size, so the
                // sum stops after size_cutoff + 1 terms.
                let mut total = self.amps.clone();
                let mut term = self.clone();
                for m in 1..=(n + 1) {
                    let next = term.current_sum(*raising, coeffs)?;
                    if next.is_empty() {
                        break;
                    }
                    let inv_m = rat(m).recip();
                    term.amps = next
                        .into_iter()
                        .filter(|(_, v)| !(v.is_zero() && v.cutoff() >= self.grade_cap))
                        .map(|(k, v)| (k, v.scale(&inv_m)))
                        .collect();
                    if term.amps.is_empty() {
                        break;
                    }
                    for (k, v) in &term.amps {
                        match total.get_mut(k) {
                            Some(e) => *e = e.add(v),
                            None => {
                                total.insert(k.clone(), v.clone());
                            }
                        }
                    }
                }
                let mut out = self.clone();
                out.amps = total;
                out.fix_window(*raising, *grade_rate, *reach, self);
                out.prune();
                Ok(out)
            }
            Op::GradingPowerL0 => {
                let mut out = self.clone();
                for (lambda, v) in out.amps.iter_mut() {
                    let s = l0_of(self.charge, lambda);
                    *v = v.shift(s as usize, self.grade_cap);
                }
                if self.tail != EXACT {
                    let s = l0_of(self.charge, &Partition::empty()) + n + 1;
                    out.tail = (self.tail + s).min(self.grade_cap);
                }
                out.prune();
                Ok(out)
            }
            Op::ScalarPowerL0(c) => self.map_diag(|lambda| {
                let e = l0_of(self.charge, lambda);
                Ok(GradedSeries::constant(R::from_rat(crate::exactcore::scalar::pow_i64(c, e)), self.grade_cap))
            }),
            Op::QPowerK(p) => self.map_diag(|lambda| {
                let k4 = eigenvalue(&ctx.params, Diagonal::K, self.charge, lambda) * rat(4 * p);
                let e = k4.to_integer().to_i64().ok_or_else(|| Error::InvalidArgument("K eigenvalue overflow".into()))?;
                Ok(GradedSeries::constant(R::from_rat(ctx.params.u_pow(e)), self.grade_cap))
            }),
            Op::Diag(d) => self.map_diag(|lambda| {
                let e = eigenvalue(&ctx.params, *d, self.charge, lambda);
                Ok(GradedSeries::constant(R::from_rat(e), self.grade_cap))
            }),
            Op::ExpH(t) | Op::ExpH4D(t) => {
                let four_d = matches!(op, Op::ExpH4D(_));
                self.map_diag(|lambda| {
                    let mut phi = R::zero();
                    for (i, tk) in t.iter().enumerate() {
                        let k = i as u32 + 1;
                        let d = if four_d { Diagonal::H4D(k) } else { Diagonal::H(k) };
                        let e = eigenvalue(&ctx.params, d, self.charge, lambda);
                        phi = phi.add(&tk.scale(&e));
                    }
                    let e = phi.exp_nilpotent().ok_or(Error::NonZeroConstantTerm)?;
                    Ok(GradedSeries::constant(e, self.grade_cap))
                })
            }
            Op::Scale(c) => Ok(self.scale_series(c)),
        }
    }

    fn map_diag(&self, f: impl Fn(&Partition) -> Result<GradedSeries<R>>) -> Result<Self> {
        let mut out = self.clone();
        for (lambda, v) in out.amps.iter_mut() {
            *v = v.mul(&f(lambda)?).truncate(self.grade_cap);
        }
        out.prune();
        Ok(out)
    }

    /// Trust bookkeeping after a size-changing operator, given the input.
    fn fix_window(&mut self, raising: bool, grade_rate: i64, reach: Option<u32>, input: &Self) {
        let n = self.size_cutoff as i64;
        let stays_inside = |size: i64| reach.is_some_and(|l| size + l as i64 <= n);
        if raising {
            // Anything pushed past the window picks up at least
            // `grade_rate` per unit of size.
            for (mu, a) in &input.amps {
                let size = mu.size() as i64;
                if stays_inside(size) {
                    continue;
                }
                let bound = a.valuation() + grade_rate * (n + 1 - size) - 1;
                self.tail = self.tail.min(bound);
            }
            if self.tail != EXACT {
                self.tail = self.tail.min(self.grade_cap);
            }
        } else if input.tail != EXACT {
            let t = input.tail.min(self.grade_cap);
            for size in 0..=n {
                if stays_inside(size) {
                    continue;
                }
                for nu in partitions_of(size as u32) {
                    let v = self.amps.remove(&nu).unwrap_or_else(|| GradedSeries::zero(self.grade_cap));
                    self.amps.insert(nu, v.truncate(t));
                }
            }
        }
    }

    /// Pairing `sum_lambda a_lambda b_lambda` with the exactness window
    /// implied by both tails.
    pub fn pair(&self, o: &Self) -> Result<GradedSeries<R>> {
        if self.charge != o.charge {
            return Err(Error::ChargeMismatch { bra: self.charge, ket: o.charge });
        }
        let mut acc = GradedSeries::zero(self.grade_cap);
        for (k, a) in &self.amps {
            if let Some(b) = o.amps.get(k) {
                acc = acc.add(&a.mul(b).truncate(self.grade_cap));
            }
        }
        let bound = match (self.tail, o.tail) {
            (EXACT, _) | (_, EXACT) => EXACT,
            (a, b) => a + b + 1,
        };
        Ok(if bound == EXACT { acc } else { acc.truncate(bound) })
    }
}

/// `<s| left right |s>`: `right` acts on the ket, the transpose of `left` on
/// the bra, and the two vectors are paired.
pub fn vev<R: Ring>(ctx: &FockCtx, charge: i64, left: &[Op<R>], right: &[Op<R>]) -> Result<GradedSeries<R>> {
    bra_chain(ctx, charge, left)?.pair(&apply_chain(ctx, charge, right)?)
}

/// `<s| left` as a ket: the transposed operators applied to `|s>`.
pub fn bra_chain<R: Ring>(ctx: &FockCtx, charge: i64, left: &[Op<R>]) -> Result<FockVector<R>> {
    let mut v = FockVector::ground(ctx, charge);
    for op in left {
        v = v.apply(ctx, &op.transpose())?;
    }
    Ok(v)
}

/// Applies a chain (rightmost operator first) to the charge-`s` ground state.
pub fn apply_chain<R: Ring>(ctx: &FockCtx, charge: i64, chain: &[Op<R>]) -> Result<FockVector<R>> {
    let mut v = FockVector::ground(ctx, charge);
    for op in chain.iter().rev() {
        v = v.apply(ctx, op)?;
    }
    Ok(v)
}

/// Named operator products applied to the vacuum.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GState {
    G1,
    G2,
    G2Prime,
    G,
}

/// The operator product of `which` as a chain (leftmost operator first).
pub fn g_chain(ctx: &FockCtx, which: GState) -> Result<Vec<Op<Rat>>> {
    use VertexKind::{Plain, Primed};
    let p = &ctx.params;
    let k = ctx.size_cutoff;
    let cap = ctx.grade_cap;
    let gm = |kind, inv| vertex_rho(p, kind, true, inv, 0, k, cap);
    let gp = |kind| vertex_rho(p, kind, false, false, 0, k, cap);
    Ok(match which {
        GState::G1 => vec![
            Op::QPowerK(1),
            gm(Plain, false)?,
            gp(Plain)?,
            Op::GradingPowerL0,
            gm(Plain, false)?,
            gp(Plain)?,
            Op::QPowerK(1),
        ],
        GState::G2 => {
            let mut v = vec![gm(Primed, true)?];
            v.extend(g_chain(ctx, GState::G1)?);
            v
        }
        GState::G2Prime => vec![
            gm(Plain, true)?,
            Op::QPowerK(-1),
            gm(Primed, false)?,
            gp(Primed)?,
            Op::GradingPowerL0,
            gm(Primed, false)?,
            gp(Primed)?,
            Op::QPowerK(-1),
        ],
        GState::G => vec![
            gm(Plain, true)?,
            Op::QPowerK(-1),
            gm(Primed, false)?,
            vertex_rho(p, Primed, true, false, 1, k, cap)?,
        ],
    })
}

pub fn build_g_state(ctx: &FockCtx, which: GState) -> Result<FockVector<Rat>> {
    apply_chain(ctx, 0, &g_chain(ctx, which)?)
}

/// Compares vertex matrix elements with skew Schur functions and checks the
/// conjugation symmetries, for all `|lambda|, |mu| <= cutoff`.
pub fn check_matrix_elements(params: &QParams, cutoff: u32) -> Result<Vec<Entry>> {
    let ctx = FockCtx { params: params.clone(), size_cutoff: cutoff, grade_cap: 0 };
    let parts = enumerate_partitions(cutoff);
    let x = rat(1) / rat(3);
    let plain_m = vertex_rho(params, VertexKind::Plain, true, false, 0, cutoff, 0)?;
    let primed_m = vertex_rho(params, VertexKind::Primed, true, false, 0, cutoff, 0)?;
    let at_x = |kind, raising| vertex_at(kind, raising, &x, cutoff, None, 0);
    let mut mismatches = Vec::new();
    let mut record = |what: &str, lambda: &Partition, mu: &Partition, a: &Rat, b: &Rat| {
        if a != b {
            mismatches.push(json!({
                "check": what, "lambda": lambda.to_string(), "mu": mu.to_string(),
                "lhs": rat_json(a), "rhs": rat_json(b),
            }));
        }
    };
    let element = |op: &Op<Rat>, lambda: &Partition, mu: &Partition| -> Result<Rat> {
        let v = FockVector::basis(&ctx, 0, mu.clone()).apply(&ctx, op)?;
        Ok(v.amplitude(lambda).coeff(0)?.clone())
    };
    let mut pairs = 0usize;
    for mu in &parts {
        for lambda in &parts {
            pairs += 1;
            let lt = lambda.conjugate();
            let mt = mu.conjugate();
            let want = skew_schur_principal(params, lambda, mu)?;
            record("Gamma_-", lambda, mu, &element(&plain_m, lambda, mu)?, &want);
            let want_t = skew_schur_principal(params, &lt, &mt)?;
            record("Gamma'_-", lambda, mu, &element(&primed_m, lambda, mu)?, &want_t);
            for raising in [true, false] {
                let a = element(&at_x(VertexKind::Plain, raising), lambda, mu)?;
                let b = element(&at_x(VertexKind::Primed, raising), &lt, &mt)?;
                record(if raising { "conjugation Gamma_-" } else { "conjugation Gamma_+" }, lambda, mu, &a, &b);
            }
        }
        let l0 = eigenvalue(params, Diagonal::L0, 0, mu);
        record("conjugation L0", mu, mu, &l0, &eigenvalue(params, Diagonal::L0, 0, &mu.conjugate()));
        let k = eigenvalue(params, Diagonal::K, 0, mu);
        record("conjugation K", mu, mu, &k, &-eigenvalue(params, Diagonal::K, 0, &mu.conjugate()));
        record("K = kappa", mu, mu, &k, &rat(mu.kappa()));
    }
    let ok = mismatches.is_empty();
    Ok(vec![Entry::new(
        "fock matrix elements",
        format!("|lambda|, |mu| <= {cutoff}"),
        ok,
        json!({ "pairs": pairs, "mismatches": mismatches }),
    )])
}

/// Checks `g_2'|0> = prod_n (1 - Q q^n)^{-n} g|0>` amplitude by amplitude.
pub fn check_g_state_identity(params: &QParams, qdeg: u32, size: u32) -> Result<Entry> {
    let ctx = FockCtx { params: params.clone(), size_cutoff: qdeg.max(size), grade_cap: qdeg as i64 };
    let lhs = build_g_state(&ctx, GState::G2Prime)?;
    let pref = q_prefactor_series(params, qdeg as usize)?;
    let rhs = build_g_state(&ctx, GState::G)?.scale_series(&pref);
    let mut bad = Vec::new();
    let mut checked = 0;
    for lambda in enumerate_partitions(size) {
        let a = lhs.amplitude(&lambda);
        let b = rhs.amplitude(&lambda);
        if a.cutoff() < qdeg as i64 || b.cutoff() < qdeg as i64 {
            return Err(Error::CutoffExceeded(format!("amplitude of {lambda} known only through Q^{}", a.cutoff().min(b.cutoff()))));
        }
        checked += 1;
        if a.truncate(qdeg as i64) != b.truncate(qdeg as i64) {
            bad.push(json!({ "lambda": lambda.to_string(), "lhs": series_json(&a), "rhs": series_json(&b) }));
        }
    }
    Ok(Entry::new(
        "g2' state = prefactor * g state",
        format!("Q^{qdeg}, |lambda| <= {size}"),
        bad.is_empty(),
        json!({ "amplitudes": checked, "mismatches": bad }),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::partitions::plancherel_weight;

    fn ctx(n: u32, cap: i64) -> FockCtx {
        FockCtx { params: QParams::default_params(), size_cutoff: n, grade_cap: cap }
    }

    fn p(v: &[u32]) -> Partition {
        Partition::new(v.to_vec()).unwrap()
    }

    #[test]
    fn single_moves() {
        assert_eq!(apply_j_basis(0, &Partition::empty(), -1).unwrap(), vec![(1, p(&[1]))]);
        assert_eq!(apply_j_basis(0, &p(&[1]), 1).unwrap(), vec![(1, Partition::empty())]);
        assert!(apply_j_basis(0, &Partition::empty(), 1).unwrap().is_empty());
        assert_eq!(apply_j_basis(0, &p(&[1]), 0), Err(Error::ZeroModeRequest));
        // J_{-2}|0> = |(2)> - |(1,1)>
        let mut v = apply_j_basis(0, &Partition::empty(), -2).unwrap();
        v.sort();
        assert_eq!(v, vec![(-1, p(&[1, 1])), (1, p(&[2]))]);
    }

    #[test]
    fn heisenberg_relation() {
        for m in 1..=3i64 {
            for lambda in enumerate_partitions(4) {
                let c = ctx(9, 0);
                let v = FockVector::<Rat>::basis(&c, 0, lambda.clone());
                let ab = v.apply(&c, &Op::J(-m)).unwrap().apply(&c, &Op::J(m)).unwrap();
                let ba = v.apply(&c, &Op::J(m)).unwrap().apply(&c, &Op::J(-m)).unwrap();
                let diff = ab.add(&ba.map(|x| -x)).unwrap();
                assert_eq!(diff.amplitude(&lambda).coeffs()[0], rat(m));
                for (k, a) in diff.amplitudes() {
                    if k != &lambda {
                        assert!(a.is_zero(), "{k:?}");
                    }
                }
            }
        }
    }

    #[test]
    fn ground_state_eigenvalues() {
        let params = QParams::default_params();
        for s in -3..=3i64 {
            let l0 = eigenvalue(&params, Diagonal::L0, s, &Partition::empty());
            assert_eq!(l0, rat(s * (s + 1) / 2));
        }
        assert_eq!(eigenvalue(&params, Diagonal::K, 0, &p(&[2])), rat(2));
        assert_eq!(eigenvalue(&params, Diagonal::H(1), 0, &p(&[1])), params.q() - rat(1));
    }

    #[test]
    fn plancherel_from_exponential() {
        let c = ctx(6, 0);
        let v = apply_chain(&c, 0, &[current_exponential(true, &[rat(1)], None, 0)]).unwrap();
        for lambda in enumerate_partitions(6) {
            assert_eq!(v.amplitude(&lambda).coeffs()[0], plancherel_weight(&lambda));
        }
    }

    #[test]
    fn vacuum_invariance() {
        let c = ctx(5, 0);
        let chain = vec![vertex_rho(&c.params, VertexKind::Plain, false, false, 0, 5, 0).unwrap(), Op::QPowerK(1)];
        let v = apply_chain(&c, 0, &chain).unwrap();
        assert_eq!(v.amplitudes().len(), 1);
        assert!(v.amplitude(&Partition::empty()).is_one());
    }
}

#[cfg(test)]
mod vev_tests {
    use super::*;
    use crate::exactcore::scalar::ratio;

    #[test]
    fn trivial_vev() {
        let c = FockCtx { params: QParams::default_params(), size_cutoff: 3, grade_cap: 3 };
        let v = vev::<Rat>(&c, 0, &[], &[]).unwrap();
        assert!(v.is_one());
        assert_eq!(vev::<Rat>(&c, 2, &[], &[]).unwrap().cutoff(), 3);
    }

    #[test]
    fn crystal_vev_first_order() {
        let p = QParams::default_params();
        let c = FockCtx { params: p.clone(), size_cutoff: 3, grade_cap: 3 };
        let gp = vertex_rho(&p, VertexKind::Plain, false, false, 0, 3, 3).unwrap();
        let gm = vertex_rho(&p, VertexKind::Plain, true, false, 0, 3, 3).unwrap();
        let z = vev(&c, 0, &[gp], &[Op::GradingPowerL0, gm]).unwrap();
        assert_eq!(z.cutoff(), 3);
        let q = p.q().clone();
        let one = rat(1);
        assert_eq!(z.coeff(1).unwrap(), &(&q / ((&one - &q) * (&one - &q))));
    }

    #[test]
    fn plancherel_vev() {
        let p = QParams::default_params();
        let c = FockCtx { params: p, size_cutoff: 4, grade_cap: 4 };
        let up = current_exponential(true, &[rat(1)], None, 4);
        let down = current_exponential(false, &[rat(1)], None, 4);
        let z = vev(&c, 0, &[down], &[Op::GradingPowerL0, up]).unwrap();
        assert_eq!(&z.coeffs()[..3], &[rat(1), rat(1), ratio(1, 2)]);
        assert_eq!(z.cutoff(), 4);
    }

    #[test]
    fn matrix_elements_agree() {
        let entries = check_matrix_elements(&QParams::default_params(), 4).unwrap();
        assert!(entries.iter().all(Entry::passed), "{entries:?}");
    }

    #[test]
    fn g_states() {
        let p = QParams::default_params();
        let c = FockCtx { params: p.clone(), size_cutoff: 2, grade_cap: 2 };
        for which in [GState::G1, GState::G2, GState::G2Prime, GState::G] {
            let v = build_g_state(&c, which).unwrap();
            assert_eq!(v.amplitude(&Partition::empty()).coeffs()[0], rat(1), "{which:?}");
        }
        let e = check_g_state_identity(&p, 2, 2).unwrap();
        assert!(e.passed(), "{e:?}");
    }
}
