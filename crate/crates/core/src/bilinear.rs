//! Fay-type, Hirota-Miwa and differential Fay identities for `Z(t)` and
//! `Z_4D(T)`, certified by evaluation on tensor grids.
//!
//! At fugacity degree `n` every residual is a rational function whose
//! denominators are known products of linear factors in each variable; after
//! clearing them it is a polynomial of bounded degree `d` in each variable, so
//! vanishing on a grid of `d + 1` values per variable proves the identity.

use std::collections::{BTreeSet, HashMap};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::json;

use crate::error::{Error, Result};
use crate::exactcore::laurent::Laurent;
use crate::exactcore::scalar::pow_i64;
use crate::exactcore::tpoly::Monomial;
use crate::exactcore::{fmt_rat, rat, ratio, GradedSeries, QParams, RSeries, Rat, Ring, TPoly};
use crate::fock::{apply_chain, bra_chain, current_exponential, g_chain, FockCtx, GState, Op};
use crate::limit4d::{weight_term, RSubstitution};
use crate::partfun::{compare_tseries, insertion4d_factor, insertion_factor, Window};
use crate::partitions::{enumerate_partitions, phi4d_k, phi_k, plancherel_weight, schur_principal, Partition};
use crate::profile::{timed, Kernel};
use crate::report::{rat_json, Entry};

/// Which partition sum the insertions act on.
#[derive(Clone, Debug)]
pub enum Model {
    /// `Z(t, x_1..x_N)`, graded by `Q`.
    Crystal(QParams),
    /// `Z(t + [y_1] + .. + [y_N])` for the standard-form tau function
    /// `<0| e^{sum t_k J_k} (-q^{1/2})^{L0} g_2 |0> = Z(t)`; each shift is the
    /// reciprocal insertion factor at `q^{1/2} y`.
    CrystalShifted(QParams),
    /// `Z_4D(T, X_1..X_N)`, graded by `w = (Lambda/hbar)^2`.
    FourD(Rat),
}

impl Model {
    pub fn insertion(&self, lambda: &Partition, x: &Rat) -> Result<Rat> {
        match self {
            Model::Crystal(p) => insertion_factor(p, lambda, x),
            Model::CrystalShifted(p) => {
                let f = insertion_factor(p, lambda, &(p.u_pow(4) * x))?;
                if f == rat(0) {
                    return Err(Error::InsertionPole(format!("shift by [{}] hits a zero of the insertion", fmt_rat(x))));
                }
                Ok(f.recip())
            }
            Model::FourD(h) => insertion4d_factor(h, lambda, x),
        }
    }

    fn name(&self) -> &'static str {
        match self {
            Model::Crystal(_) => "Z",
            Model::CrystalShifted(_) => "tau",
            Model::FourD(_) => "Z_4D",
        }
    }
}

/// Per-partition weights of a partition sum, ready for insertions.
pub struct Table<R> {
    model: Model,
    ncut: u32,
    terms: Vec<(Partition, R)>,
}

impl Table<Rat> {
    /// Weights at `t = 0`.
    pub fn new(model: Model, ncut: u32) -> Result<Self> {
        let terms = enumerate_partitions(ncut)
            .into_iter()
            .map(|l| {
                let w = base_weight(&model, &l)?;
                Ok((l, w))
            })
            .collect::<Result<_>>()?;
        Ok(Table { model, ncut, terms })
    }
}

impl Table<TPoly> {
    /// Weights `w_lambda exp(sum t_k phi_k(lambda))` with formal couplings.
    pub fn with_couplings(model: Model, ncut: u32, t: &[TPoly]) -> Result<Self> {
        let terms = enumerate_partitions(ncut)
            .into_par_iter()
            .map(|l| {
                let w = base_weight(&model, &l)?;
                let mut lin = TPoly::zero();
                for (i, tk) in t.iter().enumerate() {
                    let k = i as u32 + 1;
                    let phi = match &model {
                        Model::Crystal(p) | Model::CrystalShifted(p) => phi_k(p, &l, k)?,
                        Model::FourD(_) => Rat::from_integer(phi4d_k(&l, k)),
                    };
                    lin = lin.add(&tk.scale(&phi));
                }
                let e = if lin.is_zero() {
                    TPoly::constant(rat(1), t.first().and_then(TPoly::cutoff))
                } else {
                    lin.exp_nilpotent().ok_or(Error::NonZeroConstantTerm)?
                };
                Ok((l, e.scale(&w)))
            })
            .collect::<Result<_>>()?;
        Ok(Table { model, ncut, terms })
    }
}

fn base_weight(model: &Model, l: &Partition) -> Result<Rat> {
    Ok(match model {
        Model::Crystal(p) | Model::CrystalShifted(p) => {
            let s = schur_principal(p, l)?;
            &s * &s
        }
        Model::FourD(_) => {
            let p = plancherel_weight(l);
            &p * &p
        }
    })
}

impl<R: Ring + Send + Sync> Table<R> {
    pub fn ncut(&self) -> u32 {
        self.ncut
    }

    pub fn model(&self) -> &Model {
        &self.model
    }

    /// The partition sum with insertions at `xs`.
    pub fn z(&self, xs: &[Rat]) -> Result<GradedSeries<R>> {
        let mut coeffs = vec![R::zero(); self.ncut as usize + 1];
        for (l, w) in &self.terms {
            let mut f = rat(1);
            for x in xs {
                f *= self.model.insertion(l, x)?;
            }
            coeffs[l.size() as usize].add_assign(&w.scale(&f));
        }
        Ok(GradedSeries::from_coeffs(coeffs))
    }

    /// True when no insertion at `x` hits a pole for any partition in range.
    fn admissible(&self, x: &Rat) -> bool {
        self.terms.iter().all(|(l, _)| self.model.insertion(l, x).is_ok())
    }

    fn map<S: Ring>(&self, f: impl Fn(&R) -> S) -> Table<S> {
        Table { model: self.model.clone(), ncut: self.ncut, terms: self.terms.iter().map(|(l, w)| (l.clone(), f(w))).collect() }
    }
}

/// Insertion factors at one point for every partition in the table, and a
/// common denominator for them.
struct PointData {
    factors: Vec<Rat>,
    den: BigInt,
}

impl<R: Expand> Table<R> {
    fn weight_den(&self) -> BigInt {
        self.terms.iter().flat_map(|(_, w)| w.expand()).fold(BigInt::one(), |acc, (_, c)| acc.lcm(c.denom()))
    }

    fn point_data(&self, grid: &Grid) -> Result<HashMap<Rat, PointData>> {
        let xs: Vec<&Rat> = grid.values.iter().flatten().collect();
        let data: Vec<PointData> = xs
            .par_iter()
            .map(|x| {
                let factors = self.terms.iter().map(|(l, _)| self.model.insertion(l, x)).collect::<Result<Vec<_>>>()?;
                let den = factors.iter().fold(BigInt::one(), |acc, f| acc.lcm(f.denom()));
                Ok(PointData { factors, den })
            })
            .collect::<Result<_>>()?;
        Ok(xs.into_iter().cloned().zip(data).collect())
    }

    /// `Z(xs)` from cached factors, with a denominator that is the weight
    /// denominator times one factor per point.
    fn z_cleared(&self, data: &HashMap<Rat, PointData>, wden: &BigInt, xs: &[Rat]) -> (GradedSeries<R>, BigInt) {
        let pts: Vec<&PointData> = xs.iter().map(|x| &data[x]).collect();
        let mut coeffs = vec![R::zero(); self.ncut as usize + 1];
        for (i, (l, w)) in self.terms.iter().enumerate() {
            let f = pts.iter().fold(rat(1), |acc, p| acc * &p.factors[i]);
            coeffs[l.size() as usize].add_assign(&w.scale(&f));
        }
        let den = pts.iter().fold(wden.clone(), |acc, p| acc * &p.den);
        (GradedSeries::from_coeffs(coeffs), den)
    }
}

/// How the Vandermonde factors are formed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Form {
    /// `prod (x_i - x_j)`.
    Direct,
    /// `prod (x_i^{-1} - x_j^{-1})`.
    Inverse,
}

fn vandermonde(xs: &[Rat], form: Form) -> Rat {
    let mut acc = rat(1);
    for i in 0..xs.len() {
        for j in i + 1..xs.len() {
            acc *= match form {
                Form::Direct => &xs[i] - &xs[j],
                Form::Inverse => xs[i].recip() - xs[j].recip(),
            };
        }
    }
    acc
}

fn check_distinct(xs: &[Rat]) -> Result<()> {
    let set: BTreeSet<&Rat> = xs.iter().collect();
    if set.len() != xs.len() {
        return Err(Error::DegenerateSample("points must be pairwise distinct".into()));
    }
    Ok(())
}

/// Position lists of the two factors in each term of the `N`-th Fay sum,
/// with signs: `j = N..2N`, first `{1..N-1, j}`, second the rest.
fn fay_terms(n: usize) -> Vec<(i32, Vec<usize>, Vec<usize>)> {
    (n..=2 * n)
        .map(|j| {
            let mut first: Vec<usize> = (0..n - 1).collect();
            first.push(j - 1);
            let second = (n - 1..2 * n).filter(|&p| p != j - 1).collect();
            let sign = if (j - n) % 2 == 0 { 1 } else { -1 };
            (sign, first, second)
        })
        .collect()
}

/// `sum_j (-1)^{j-N} xi(x_1..x_{N-1}, x_j) xi(x_N..^x_j..x_2N)` where
/// `xi = Delta * Z` and `z` evaluates `Z` on a set of positions.
fn fay_sum<R: Ring>(
    n: usize,
    xs: &[Rat],
    form: Form,
    z: impl Fn(&[usize]) -> Result<GradedSeries<R>>,
) -> Result<GradedSeries<R>> {
    let pick = |ps: &[usize]| ps.iter().map(|&p| xs[p].clone()).collect::<Vec<_>>();
    let mut acc: Option<GradedSeries<R>> = None;
    for (sign, a, b) in fay_terms(n) {
        let c = vandermonde(&pick(&a), form) * vandermonde(&pick(&b), form) * rat(sign as i64);
        let term = z(&a)?.mul(&z(&b)?).scale(&c);
        acc = Some(match acc {
            None => term,
            Some(s) => s.add(&term),
        });
    }
    Ok(acc.expect("at least one term"))
}

fn series_is_zero<R: Ring>(s: &GradedSeries<R>) -> bool {
    s.coeffs().iter().all(R::is_zero)
}

fn nonzero_degrees<R: Ring>(s: &GradedSeries<R>) -> Vec<usize> {
    s.coeffs().iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(n, _)| n).collect()
}

/// Residual of the `N`-th Fay identity at one point set.
pub fn fay_residual<R: Ring + Send + Sync>(table: &Table<R>, n: usize, xs: &[Rat], form: Form) -> Result<GradedSeries<R>> {
    if !(2..=3).contains(&n) || xs.len() != 2 * n {
        return Err(Error::InvalidArgument(format!("Fay identity needs N in {{2, 3}} and 2N points, got N = {n}, {} points", xs.len())));
    }
    check_distinct(xs)?;
    fay_sum(n, xs, form, |ps| table.z(&ps.iter().map(|&p| xs[p].clone()).collect::<Vec<_>>()))
}

/// The three-term form written out.
pub fn fay4_residual<R: Ring + Send + Sync>(table: &Table<R>, xs: &[Rat; 4], form: Form) -> Result<GradedSeries<R>> {
    let d = |a: &Rat, b: &Rat| match form {
        Form::Direct => a - b,
        Form::Inverse => a.recip() - b.recip(),
    };
    let [x1, x2, x3, x4] = xs;
    let t = |a: &Rat, b: &Rat, c: &Rat, e: &Rat| -> Result<GradedSeries<R>> {
        Ok(table.z(&[a.clone(), b.clone()])?.mul(&table.z(&[c.clone(), e.clone()])?).scale(&(d(a, b) * d(c, e))))
    };
    Ok(t(x1, x2, x3, x4)?.sub(&t(x1, x3, x2, x4)?).add(&t(x1, x4, x2, x3)?))
}

/// Hirota-Miwa residual evaluated directly.
pub fn hirota_miwa_residual<R: Ring + Send + Sync>(table: &Table<R>, xs: &[Rat; 3]) -> Result<GradedSeries<R>> {
    let [x1, x2, x3] = xs;
    let z2 = |a: &Rat, b: &Rat| table.z(&[a.clone(), b.clone()]);
    let z1 = |a: &Rat| table.z(std::slice::from_ref(a));
    let a = z2(x1, x2)?.mul(&z1(x3)?).scale(&((x1 - x2) * x3));
    let b = z2(x2, x3)?.mul(&z1(x1)?).scale(&((x2 - x3) * x1));
    let c = z2(x3, x1)?.mul(&z1(x2)?).scale(&((x3 - x1) * x2));
    Ok(a.add(&b).add(&c))
}

/// Seeded source of distinct admissible sample values.
pub struct Sampler {
    rng: ChaCha8Rng,
    used: BTreeSet<Rat>,
}

impl Sampler {
    pub fn new(seed: u64) -> Self {
        Sampler { rng: ChaCha8Rng::seed_from_u64(seed), used: BTreeSet::new() }
    }

    fn draw(&mut self, four_d: bool) -> Rat {
        if four_d {
            ratio(self.rng.gen_range(1..=80), self.rng.gen_range(1..=7))
        } else {
            ratio(self.rng.gen_range(1..=12), self.rng.gen_range(2..=40))
        }
    }

    /// `count` fresh values admissible for `table`.
    pub fn values<R: Ring + Send + Sync>(&mut self, table: &Table<R>, count: usize) -> Vec<Rat> {
        let four_d = matches!(table.model, Model::FourD(_));
        let mut out = Vec::with_capacity(count);
        while out.len() < count {
            let v = self.draw(four_d);
            if v != rat(0) && !self.used.contains(&v) && table.admissible(&v) {
                self.used.insert(v.clone());
                out.push(v);
            }
        }
        out
    }
}

/// Tensor grid with one value list per variable.
pub struct Grid {
    pub values: Vec<Vec<Rat>>,
}

impl Grid {
    pub fn new<R: Ring + Send + Sync>(table: &Table<R>, vars: usize, per_var: usize, seed: u64) -> Self {
        let mut s = Sampler::new(seed);
        Grid { values: (0..vars).map(|_| s.values(table, per_var)).collect() }
    }

    pub fn size(&self) -> usize {
        self.values.iter().map(Vec::len).product()
    }

    fn point(&self, mut idx: usize) -> Vec<usize> {
        self.values
            .iter()
            .map(|v| {
                let i = idx % v.len();
                idx /= v.len();
                i
            })
            .collect()
    }

    fn json(&self) -> serde_json::Value {
        json!(self.values.iter().map(|v| v.iter().map(rat_json).collect::<Vec<_>>()).collect::<Vec<_>>())
    }
}

/// Coefficient rings whose elements expand into rational monomial terms.
pub trait Expand: Ring + Send + Sync {
    fn expand(&self) -> Vec<(Monomial, Rat)>;
    fn degree_cutoff(&self) -> Option<u32>;
}

impl Expand for Rat {
    fn expand(&self) -> Vec<(Monomial, Rat)> {
        vec![(Vec::new(), self.clone())]
    }
    fn degree_cutoff(&self) -> Option<u32> {
        None
    }
}

impl Expand for TPoly {
    fn expand(&self) -> Vec<(Monomial, Rat)> {
        self.terms().iter().map(|(m, c)| (m.clone(), c.clone())).collect()
    }
    fn degree_cutoff(&self) -> Option<u32> {
        self.cutoff()
    }
}

/// Monomials of total degree up to a cutoff, with their product table.
struct Basis {
    index: HashMap<Monomial, usize>,
    product: Vec<Vec<Option<usize>>>,
}

impl Basis {
    fn new<'a, R: Expand + 'a>(series: impl IntoIterator<Item = &'a GradedSeries<R>>) -> Result<Self> {
        let mut vars = 0;
        let mut cutoff: Option<u32> = None;
        for s in series {
            for c in s.coeffs() {
                if let Some(d) = c.degree_cutoff() {
                    cutoff = Some(cutoff.map_or(d, |e| e.min(d)));
                }
                vars = c.expand().iter().map(|(m, _)| m.len()).fold(vars, usize::max);
            }
        }
        let monos = match (vars, cutoff) {
            (0, _) => vec![Vec::new()],
            (_, Some(d)) => monomials(vars, d),
            (_, None) => return Err(Error::InvalidArgument("formal couplings need a degree cutoff".into())),
        };
        let index: HashMap<Monomial, usize> = monos.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
        let product = monos
            .iter()
            .map(|a| {
                monos
                    .iter()
                    .map(|b| {
                        let n = a.len().max(b.len());
                        let mut m: Monomial = (0..n).map(|i| a.get(i).unwrap_or(&0) + b.get(i).unwrap_or(&0)).collect();
                        while m.last() == Some(&0) {
                            m.pop();
                        }
                        index.get(&m).copied()
                    })
                    .collect()
            })
            .collect();
        Ok(Basis { index, product })
    }

    fn len(&self) -> usize {
        self.product.len()
    }

    /// Integer numerators over a common denominator; monomials outside the
    /// basis are beyond the trusted degree and dropped.
    /// `den` must be a multiple of every coefficient denominator.
    fn clear<R: Expand>(&self, s: &GradedSeries<R>, den: &BigInt) -> Cleared {
        let terms: Vec<Vec<(usize, Rat)>> = s
            .coeffs()
            .iter()
            .map(|c| c.expand().into_iter().filter_map(|(m, v)| self.index.get(&m).map(|&i| (i, v))).collect())
            .collect();
        let nums = terms
            .iter()
            .map(|row| {
                let mut out = vec![BigInt::zero(); self.len()];
                for (i, v) in row {
                    let (q, r) = den.div_rem(v.denom());
                    debug_assert!(r.is_zero());
                    out[*i] = v.numer() * q;
                }
                out
            })
            .collect();
        Cleared { nums }
    }
}

fn monomials(vars: usize, d: u32) -> Vec<Monomial> {
    let mut out = vec![Vec::new()];
    for v in 0..vars {
        let mut next = Vec::new();
        for m in &out {
            let used: u32 = m.iter().sum();
            for e in 0..=d - used {
                let mut m2 = m.clone();
                m2.resize(v, 0);
                m2.push(e);
                next.push(m2);
            }
        }
        out = next;
    }
    out.into_iter()
        .map(|mut m| {
            while m.last() == Some(&0) {
                m.pop();
            }
            m
        })
        .collect()
}

/// Integer numerators of a graded series. Stored values are cleared with the
/// weight denominator times one factor per inserted point, so every product
/// `A B` in a bilinear identity carries the same denominator.
#[derive(Clone)]
struct Cleared {
    nums: Vec<Vec<BigInt>>,
}

/// Nonzero degrees of `sum_i c_i A_i B_i`, in integer arithmetic; all
/// products `A_i B_i` must share one denominator.
fn bilinear_nonzero(basis: &Basis, terms: &[(Rat, &Cleared, &Cleared)]) -> Vec<usize> {
    timed(Kernel::SeriesMultiplication, || bilinear_sum(basis, terms))
}

fn bilinear_sum(basis: &Basis, terms: &[(Rat, &Cleared, &Cleared)]) -> Vec<usize> {
    let top = terms.iter().map(|(_, a, b)| a.nums.len().min(b.nums.len())).min().unwrap_or(0);
    let common = terms.iter().fold(BigInt::one(), |acc, (c, _, _)| acc.lcm(c.denom()));
    let mut total = vec![vec![BigInt::zero(); basis.len()]; top];
    for (c, a, b) in terms {
        if c.numer().is_zero() {
            continue;
        }
        let f = c.numer() * (&common / c.denom());
        for (na, ra) in a.nums.iter().enumerate().take(top) {
            for (nb, rb) in b.nums.iter().enumerate().take(top - na) {
                for (ia, va) in ra.iter().enumerate().filter(|(_, v)| !v.is_zero()) {
                    for (ib, vb) in rb.iter().enumerate().filter(|(_, v)| !v.is_zero()) {
                        if let Some(k) = basis.product[ia][ib] {
                            total[na + nb][k] += &f * va * vb;
                        }
                    }
                }
            }
        }
    }
    total.iter().enumerate().filter(|(_, r)| r.iter().any(|v| !v.is_zero())).map(|(n, _)| n).collect()
}

/// `Z` (or a derived series) at every combination of grid values for a list
/// of position subsets, stored densely.
struct Store {
    per_var: usize,
    slots: HashMap<Vec<usize>, usize>,
    values: Vec<Vec<Cleared>>,
}

impl Store {
    fn build<R: Expand>(
        grid: &Grid,
        subsets: &[Vec<usize>],
        eval: impl Fn(&[Rat]) -> Result<(Vec<GradedSeries<R>>, BigInt)> + Sync,
        basis_from: impl Fn(&[(Vec<GradedSeries<R>>, BigInt)]) -> Result<Basis>,
    ) -> Result<(Self, Basis)> {
        let per_var = grid.values[0].len();
        let jobs: Vec<(usize, Vec<Rat>)> = subsets
            .iter()
            .enumerate()
            .flat_map(|(s, ps)| {
                let count = per_var.pow(ps.len() as u32);
                (0..count).map(move |mut f| {
                    let xs = ps
                        .iter()
                        .map(|&p| {
                            let v = grid.values[p][f % per_var].clone();
                            f /= per_var;
                            v
                        })
                        .collect();
                    (s, xs)
                })
            })
            .collect();
        let raw: Vec<(Vec<GradedSeries<R>>, BigInt)> = jobs.par_iter().map(|(_, xs)| eval(xs)).collect::<Result<_>>()?;
        let basis = basis_from(&raw)?;
        let cleared: Vec<Vec<Cleared>> = raw.par_iter().map(|(r, d)| r.iter().map(|s| basis.clear(s, d)).collect()).collect();
        let mut values: Vec<Vec<Cleared>> = vec![Vec::new(); subsets.len()];
        for ((s, _), c) in jobs.iter().zip(cleared) {
            values[*s].extend(c);
        }
        let slots = subsets.iter().cloned().enumerate().map(|(i, s)| (s, i)).collect();
        Ok((Store { per_var, slots, values }, basis))
    }

    /// Entry `k` of the values stored for `positions` at grid indices `idx`.
    fn get(&self, positions: &[usize], idx: &[usize], k: usize, stride: usize) -> &Cleared {
        let s = self.slots[positions];
        let flat = positions.iter().rev().fold(0, |acc, &p| acc * self.per_var + idx[p]);
        &self.values[s][flat * stride + k]
    }
}

fn all_basis<R: Expand>(raw: &[(Vec<GradedSeries<R>>, BigInt)]) -> Result<Basis> {
    Basis::new(raw.iter().flat_map(|(r, _)| r))
}

/// Runs `residual` on every grid point in parallel; returns the first point
/// where it is nonzero, with the offending degrees.
fn run_grid(grid: &Grid, residual: impl Fn(&[usize], &[Rat]) -> Vec<usize> + Sync) -> Option<serde_json::Value> {
    let found: Vec<Option<serde_json::Value>> = (0..grid.size())
        .into_par_iter()
        .map(|i| {
            let idx = grid.point(i);
            let xs: Vec<Rat> = idx.iter().zip(&grid.values).map(|(&k, v)| v[k].clone()).collect();
            let bad = residual(&idx, &xs);
            (!bad.is_empty()).then(|| json!({ "point": xs.iter().map(rat_json).collect::<Vec<_>>(), "degrees": bad }))
        })
        .collect();
    found.into_iter().flatten().next()
}

fn position_subsets(vars: usize, size: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    for mask in 0u32..(1 << vars) {
        if mask.count_ones() as usize == size {
            out.push((0..vars).filter(|p| mask & (1 << p) != 0).collect());
        }
    }
    out
}

/// Certified `N`-th Fay identity through the table's fugacity degree.
/// Degree in each variable after clearing denominators: `ncut + N - 1`.
pub fn fay_certified<R: Expand>(table: &Table<R>, n: usize, form: Form, seed: u64) -> Result<Entry> {
    if !(2..=3).contains(&n) {
        return Err(Error::InvalidArgument(format!("N = {n} not in {{2, 3}}")));
    }
    let per_var = table.ncut as usize + n;
    let grid = Grid::new(table, 2 * n, per_var, seed);
    let data = table.point_data(&grid)?;
    let wden = table.weight_den();
    // Stored values are xi = Delta Z; the Vandermonde denominator divides the
    // (N-1)-th power of each point's denominator (of its numerator for the
    // inverse form), which keeps the common-denominator structure.
    let xi = |xs: &[Rat]| {
        let (z, mut den) = table.z_cleared(&data, &wden, xs);
        for x in xs {
            let d = if form == Form::Direct { x.denom().clone() } else { x.numer().abs() };
            den *= num_traits::pow(d, n - 1);
        }
        Ok((vec![z.scale(&vandermonde(xs, form))], den))
    };
    let (store, basis) = Store::build(&grid, &position_subsets(2 * n, n), xi, all_basis)?;
    let terms = fay_terms(n);
    let bad = run_grid(&grid, |idx, _| {
        let coeffs: Vec<(Rat, &Cleared, &Cleared)> =
            terms.iter().map(|(sign, a, b)| (rat(*sign as i64), store.get(a, idx, 0, 1), store.get(b, idx, 0, 1))).collect();
        bilinear_nonzero(&basis, &coeffs)
    });
    let form_name = if form == Form::Direct { "" } else { ", inverse variables" };
    Ok(Entry::new(
        format!("Fay N = {n} for {}{form_name}", table.model.name()),
        format!("degree <= {}, {} points ({per_var} per variable)", table.ncut, grid.size()),
        bad.is_none(),
        json!({ "seed": seed, "grid": grid.json(), "degree_bound": per_var - 1, "failure": bad }),
    ))
}

/// Certified Hirota-Miwa identity, evaluated directly and as the `x_4 = 0`
/// case of the three-term Fay identity; the two residuals must coincide.
pub fn hirota_miwa_certified<R: Expand>(table: &Table<R>, seed: u64) -> Result<Entry> {
    let per_var = table.ncut as usize + 2;
    let grid = Grid::new(table, 3, per_var, seed);
    let mut subsets = position_subsets(3, 1);
    subsets.extend(position_subsets(3, 2));
    let data = table.point_data(&grid)?;
    let wden = table.weight_den();
    let (store, basis) = Store::build(&grid, &subsets, |xs| {
        let (z, den) = table.z_cleared(&data, &wden, xs);
        Ok((vec![z], den))
    }, all_basis)?;
    let bad = run_grid(&grid, |idx, xs| {
        let z = |ps: &[usize]| store.get(ps, idx, 0, 1);
        let (x1, x2, x3) = (&xs[0], &xs[1], &xs[2]);
        let hm = [
            ((x1 - x2) * x3, z(&[0, 1]), z(&[2])),
            ((x2 - x3) * x1, z(&[1, 2]), z(&[0])),
            ((x3 - x1) * x2, z(&[0, 2]), z(&[1])),
        ];
        // The three-term form at x_4 = 0: an insertion at zero is trivial.
        let pts = [x1.clone(), x2.clone(), x3.clone(), rat(0)];
        let live = |ps: &[usize]| ps.iter().copied().filter(|&p| p != 3).collect::<Vec<_>>();
        let mut both: Vec<(Rat, &Cleared, &Cleared)> = hm.to_vec();
        for (sign, a, b) in fay_terms(2) {
            let pick = |ps: &[usize]| ps.iter().map(|&p| pts[p].clone()).collect::<Vec<_>>();
            let c = vandermonde(&pick(&a), Form::Direct) * vandermonde(&pick(&b), Form::Direct) * rat(-sign as i64);
            both.push((c, z(&live(&a)), z(&live(&b))));
        }
        let mut bad = bilinear_nonzero(&basis, &hm);
        if !bilinear_nonzero(&basis, &both).is_empty() {
            bad.push(usize::MAX);
        }
        bad
    });
    Ok(Entry::new(
        format!("Hirota-Miwa for {}", table.model.name()),
        format!("degree <= {}, {} points", table.ncut, grid.size()),
        bad.is_none(),
        json!({ "seed": seed, "grid": grid.json(), "degree_bound": per_var - 1, "failure": bad }),
    ))
}

/// Differential Fay residual for the standard-form tau function at one pair:
/// `(y1 - y2)(tau12 tau - tau1 tau2) + y1 y2 (tau1 d1tau2 - d1tau1 tau2)`.
fn diff_fay_at(
    z: impl Fn(&[Rat]) -> Result<GradedSeries<TPoly>>,
    y1: &Rat,
    y2: &Rat,
) -> Result<GradedSeries<TPoly>> {
    let d1 = |s: &GradedSeries<TPoly>| s.map(|p| p.derivative(0));
    let t12 = z(&[y1.clone(), y2.clone()])?;
    let t0 = z(&[])?;
    let t1 = z(std::slice::from_ref(y1))?;
    let t2 = z(std::slice::from_ref(y2))?;
    let a = t12.mul(&t0).sub(&t1.mul(&t2)).scale(&(y1 - y2));
    let b = t1.mul(&d1(&t2)).sub(&d1(&t1).mul(&t2)).scale(&(y1 * y2));
    Ok(a.add(&b))
}

/// Certified differential Fay identity. The shifted insertions have poles
/// at `lambda_i - i` in `1 - ncut..=ncut - 1`; clearing them leaves degree
/// `2 ncut - 1` per variable, plus one from the prefactors `y_1 - y_2`, `y_1 y_2`.
pub fn diff_fay_certified(params: &QParams, ncut: u32, t: &[TPoly], seed: u64) -> Result<Entry> {
    if t.first().and_then(TPoly::cutoff).is_none_or(|d| d < 1) {
        return Err(Error::InvalidArgument("differential Fay needs t_1 to degree >= 1".into()));
    }
    let table = Table::with_couplings(Model::CrystalShifted(params.clone()), ncut, t)?;
    let per_var = 2 * ncut as usize + 1;
    let grid = Grid::new(&table, 2, per_var, seed);
    let mut subsets = position_subsets(2, 1);
    subsets.extend(position_subsets(2, 2));
    subsets.push(Vec::new());
    // Each slot holds tau and d tau / d t_1; the basis is cut at the
    // derivative's trusted degree.
    let data = table.point_data(&grid)?;
    let wden = table.weight_den();
    let eval = |xs: &[Rat]| {
        let (z, den) = table.z_cleared(&data, &wden, xs);
        let d = z.map(|p| p.derivative(0));
        Ok((vec![z, d], den))
    };
    let (store, basis) = Store::build(&grid, &subsets, eval, all_basis)?;
    let bad = run_grid(&grid, |idx, ys| {
        let (y1, y2) = (&ys[0], &ys[1]);
        let v = |ps: &[usize], k| store.get(ps, idx, k, 2);
        let terms = [
            (y1 - y2, v(&[0, 1], 0), v(&[], 0)),
            (y2 - y1, v(&[0], 0), v(&[1], 0)),
            (y1 * y2, v(&[0], 0), v(&[1], 1)),
            (-(y1 * y2), v(&[0], 1), v(&[1], 0)),
        ];
        bilinear_nonzero(&basis, &terms)
    });
    Ok(Entry::new(
        "differential Fay for the standard tau function",
        format!("degree <= {ncut}, t-degree <= {}, {} points", t[0].cutoff().unwrap_or(0) - 1, grid.size()),
        bad.is_none(),
        json!({ "seed": seed, "grid": grid.json(), "degree_bound": per_var - 1, "failure": bad }),
    ))
}

/// Differential Fay at one explicit pair.
pub fn diff_fay(params: &QParams, ncut: u32, t: &[TPoly], y1: &Rat, y2: &Rat) -> Result<GradedSeries<TPoly>> {
    check_distinct(&[y1.clone(), y2.clone()])?;
    let table = Table::with_couplings(Model::CrystalShifted(params.clone()), ncut, t)?;
    diff_fay_at(|v| table.z(v), y1, y2)
}

/// `d tau / d t_1` three ways: the J_1 insertion
/// `<0| J_1 e^{sum t_k J_k} (-q^{1/2})^{L0} g_2 |0>`, the derivative of the
/// combinatorial `Z(t)`, and the `epsilon`-linear part of `Z(t + epsilon e_1)`.
pub fn tau_t1_paths(params: &QParams, w: Window) -> Result<Entry> {
    let ctx = FockCtx {
        params: params.clone(),
        size_cutoff: w.ncut.max(w.dt * w.kmax + 1),
        grade_cap: w.ncut as i64,
    };
    let t: Vec<TPoly> = (0..w.kmax as usize).map(|i| TPoly::var(i, Some(w.dt))).collect();
    let ket = apply_chain(&ctx, 0, &g_chain(&ctx, GState::G2)?)?
        .apply(&ctx, &Op::ScalarPowerL0(-params.u_pow(4)))?
        .map(|c| TPoly::constant(c.clone(), None));
    let bra = bra_chain(&ctx, 0, &[Op::J(1), current_exponential(false, &t, Some(w.dt * w.kmax), w.ncut as i64)])?;
    let fock = bra.pair(&ket)?;

    let table = Table::with_couplings(Model::Crystal(params.clone()), w.ncut, &t)?;
    let derivative = table.z(&[])?.map(|p| p.derivative(0));

    let eps = TPoly::var(w.kmax as usize, Some(w.dt));
    let mut shifted = t.clone();
    shifted[0] = shifted[0].add(&eps);
    let with_eps = Table::with_couplings(Model::Crystal(params.clone()), w.ncut, &shifted)?.z(&[])?;
    let linear = with_eps.map(|p| eps_linear(p, w.kmax as usize));

    let low = w.dt - 1;
    let a = compare_tseries(&fock, &derivative, w.ncut, low)?;
    let b = compare_tseries(&linear, &derivative, w.ncut, low)?;
    Ok(Entry::new(
        "tau_t1: J_1 insertion = derivative = epsilon coefficient",
        format!("Q^{}, t_1..t_{} to degree {low}", w.ncut, w.kmax),
        a.is_empty() && b.is_empty(),
        json!({ "fock_vs_derivative": a, "epsilon_vs_derivative": b }),
    ))
}

/// Coefficient of `epsilon^1` where `epsilon` is the variable with index `v`.
fn eps_linear(p: &TPoly, v: usize) -> TPoly {
    let mut out = TPoly::zero_with(p.cutoff().map(|d| d.saturating_sub(1)));
    for (m, c) in p.terms() {
        if m.get(v).copied() == Some(1) {
            let mut m2 = m.clone();
            m2[v] = 0;
            out = out.add(&TPoly::term(c.clone(), m2, None));
        }
    }
    out
}

/// The 5D three-term identity under the 4D substitution, divided by `R^2`:
/// per term and per fugacity degree its constant coefficient equals the
/// corresponding 4D term, and the sum of the three vanishes identically.
pub fn fay_bridge(sub: &RSubstitution, xs: &[Rat; 4], ncut: u32) -> Result<Entry> {
    check_distinct(xs)?;
    let four = Table::new(Model::FourD(sub.hbar.clone()), ncut)?;
    let parts = enumerate_partitions(ncut);
    let prec = sub.order + 3;
    let half = &sub.hbar / rat(2);
    let xr = |x: &Rat| Laurent::exp_linear(&(x - &half), prec);
    let pairs = [(0, 1, 2, 3, 1), (0, 2, 1, 3, -1), (0, 3, 1, 2, 1)];
    let mut per_pair: HashMap<(usize, usize), Vec<RSeries>> = HashMap::new();
    for &(a, b, c, d, _) in &pairs {
        for (i, j) in [(a, b), (c, d)] {
            let ws = parts
                .par_iter()
                .map(|l| weight_term(sub, l, &[xs[i].clone(), xs[j].clone()]))
                .collect::<Result<Vec<_>>>()?;
            per_pair.insert((i, j), ws);
        }
    }
    let w = sub.w();
    let mut bad = Vec::new();
    let mut total_5d: Vec<RSeries> = vec![RSeries::zero(sub.order + 1); ncut as usize + 1];
    let mut total_4d = vec![rat(0); ncut as usize + 1];
    for &(a, b, c, d, sign) in &pairs {
        let vd = xr(&xs[a]).sub(&xr(&xs[b])).mul(&xr(&xs[c]).sub(&xr(&xs[d])));
        let z4 = four.z(&[xs[a].clone(), xs[b].clone()])?.mul(&four.z(&[xs[c].clone(), xs[d].clone()])?);
        let v4 = (&xs[a] - &xs[b]) * (&xs[c] - &xs[d]) * rat(sign);
        for n in 0..=ncut as usize {
            let mut acc = RSeries::zero(prec);
            for (li, l) in parts.iter().enumerate() {
                for (mi, m) in parts.iter().enumerate() {
                    if (l.size() + m.size()) as usize == n {
                        acc = acc.add(&per_pair[&(a, b)][li].mul(&per_pair[&(c, d)][mi]));
                    }
                }
            }
            let term = acc.mul(&vd).scale(&rat(sign)).shift(-2).truncate(sub.order + 1);
            let want = z4.coeff(n)? * pow_i64(&w, n as i64) * &v4;
            let pole = term.pole_part();
            let c0 = term.coeff(0)?;
            if !pole.is_empty() || c0 != want {
                bad.push(json!({ "term": [a, b, c, d], "degree": n, "constant": rat_json(&c0), "expected": rat_json(&want) }));
            }
            total_5d[n] = total_5d[n].add(&term);
            total_4d[n] += want;
        }
    }
    for (n, s) in total_5d.iter().enumerate() {
        if !s.is_zero() || total_4d[n] != rat(0) {
            bad.push(json!({ "sum_degree": n, "first_nonzero": s.valuation() }));
        }
    }
    Ok(Entry::new(
        "5D three-term identity / R^2 -> 4D three-term identity",
        format!("degree <= {ncut}, R^0..R^{}", sub.order),
        bad.is_empty(),
        json!({ "X": xs.iter().map(rat_json).collect::<Vec<_>>(), "mismatches": bad }),
    ))
}

/// Formal couplings `t_1..t_kmax` to total degree `dt`.
pub fn couplings(kmax: u32, dt: u32) -> Vec<TPoly> {
    (0..kmax as usize).map(|i| TPoly::var(i, Some(dt))).collect()
}

/// Residual of the Fay identity at an explicit sample, as an entry.
pub fn fay_sample_entry<R: Ring + Send + Sync>(table: &Table<R>, n: usize, xs: &[Rat]) -> Result<Entry> {
    let s = fay_residual(table, n, xs, Form::Direct)?;
    Ok(Entry::new(
        format!("Fay N = {n} for {} at sample", table.model.name()),
        format!("degree <= {}", table.ncut),
        series_is_zero(&s),
        json!({ "sample": xs.iter().map(rat_json).collect::<Vec<_>>(), "nonzero_degrees": nonzero_degrees(&s) }),
    ))
}

/// Drops the couplings (`t = 0`).
pub fn at_zero(table: &Table<TPoly>) -> Table<Rat> {
    table.map(TPoly::constant_term)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p() -> QParams {
        QParams::default_params()
    }

    fn pts(v: &[(i64, i64)]) -> Vec<Rat> {
        v.iter().map(|&(a, b)| ratio(a, b)).collect()
    }

    #[test]
    fn degree_zero_is_pluecker() {
        let t = Table::new(Model::Crystal(p()), 0).unwrap();
        let xs = pts(&[(1, 2), (1, 3), (1, 5), (1, 7)]);
        let r = fay_residual(&t, 2, &xs, Form::Direct).unwrap();
        assert!(series_is_zero(&r));
        assert_eq!(t.z(&xs).unwrap().coeffs()[0], rat(1));
    }

    #[test]
    fn main_sample_and_three_term_form_agree() {
        let t = Table::new(Model::Crystal(p()), 3).unwrap();
        let xs = pts(&[(1, 2), (1, 3), (1, 5), (1, 7)]);
        let general = fay_residual(&t, 2, &xs, Form::Direct).unwrap();
        let four = fay4_residual(&t, &[xs[0].clone(), xs[1].clone(), xs[2].clone(), xs[3].clone()], Form::Direct).unwrap();
        assert_eq!(general, four);
        assert!(series_is_zero(&general));
        let six = pts(&[(1, 2), (1, 3), (1, 5), (1, 7), (2, 9), (3, 11)]);
        assert!(series_is_zero(&fay_residual(&Table::new(Model::Crystal(p()), 2).unwrap(), 3, &six, Form::Direct).unwrap()));
    }

    #[test]
    fn coinciding_points_rejected() {
        let t = Table::new(Model::Crystal(p()), 1).unwrap();
        let xs = pts(&[(1, 2), (1, 2), (1, 5), (1, 7)]);
        assert!(matches!(fay_residual(&t, 2, &xs, Form::Direct), Err(Error::DegenerateSample(_))));
    }

    #[test]
    fn residual_alternates() {
        // A symmetric function that is not a tau function.
        let mut t = Table::new(Model::Crystal(p()), 4).unwrap();
        for (i, (_, w)) in t.terms.iter_mut().enumerate() {
            *w = rat((i * i) as i64 + 2);
        }
        let xs = pts(&[(1, 2), (1, 3), (1, 5), (1, 7)]);
        let swapped = [xs[1].clone(), xs[0].clone(), xs[2].clone(), xs[3].clone()];
        let a = fay4_residual(&t, &[xs[0].clone(), xs[1].clone(), xs[2].clone(), xs[3].clone()], Form::Direct).unwrap();
        let b = fay4_residual(&t, &swapped, Form::Direct).unwrap();
        assert!(!series_is_zero(&a));
        assert_eq!(a, b.neg());
        assert!(!fay_certified(&t, 2, Form::Direct, 1).unwrap().passed());
        assert!(!hirota_miwa_certified(&t, 1).unwrap().passed());
    }

    #[test]
    fn hirota_miwa_two_paths() {
        let t = Table::new(Model::Crystal(p()), 2).unwrap();
        let xs = pts(&[(1, 2), (1, 3), (1, 5)]);
        let hm = hirota_miwa_residual(&t, &[xs[0].clone(), xs[1].clone(), xs[2].clone()]).unwrap();
        let fay = fay4_residual(&t, &[xs[0].clone(), xs[1].clone(), xs[2].clone(), rat(0)], Form::Direct).unwrap();
        assert_eq!(hm, fay);
        assert!(series_is_zero(&hm));
    }

    #[test]
    fn shifted_insertion_matches_coupling_shift() {
        // Z(t_k = eps^k y0^k / k) against the shifted insertion at y = eps y0.
        let params = p();
        let dt = 3;
        let y0 = ratio(1, 3);
        let t: Vec<TPoly> = (1..=dt as usize)
            .map(|k| TPoly::term(pow_i64(&y0, k as i64) / rat(k as i64), vec![k as u32], Some(dt)))
            .collect();
        let formal = Table::with_couplings(Model::Crystal(params.clone()), 3, &t).unwrap().z(&[]).unwrap();
        let shifted = Table::new(Model::CrystalShifted(params.clone()), 3).unwrap();
        // t_1 plays the role of eps; compare eps-Taylor coefficients.
        for n in 0..=3usize {
            let coeff = formal.coeff(n).unwrap();
            let mut got = vec![rat(0); dt as usize + 1];
            for (m, c) in coeff.terms() {
                got[m.iter().sum::<u32>() as usize] += c;
            }
            let mut want = vec![rat(0); dt as usize + 1];
            for (l, w) in &shifted.terms {
                if l.size() as usize != n {
                    continue;
                }
                let f = crate::partfun::insertion_ratfun(&params, l).inv().unwrap().scale_var(&(params.u_pow(4) * &y0));
                for (e, c) in f.taylor(dt as usize).unwrap().into_iter().enumerate() {
                    want[e] += w * c;
                }
            }
            assert_eq!(got, want, "degree {n}");
        }
    }

    #[test]
    fn diff_fay_low_degree() {
        let t = couplings(2, 2);
        let r = diff_fay(&p(), 2, &t, &ratio(1, 2), &ratio(1, 3)).unwrap();
        assert!(r.coeffs().iter().all(|c| c.with_cutoff(Some(1)).is_zero()));
        let e = tau_t1_paths(&p(), Window { ncut: 2, kmax: 2, dt: 2 }).unwrap();
        assert!(e.passed(), "{}", e.witness);
    }

    #[test]
    fn four_d_three_term() {
        let t = Table::new(Model::FourD(rat(1)), 2).unwrap();
        let xs = [rat(3), rat(5), rat(7), rat(11)];
        assert!(series_is_zero(&fay4_residual(&t, &xs, Form::Direct).unwrap()));
        assert!(series_is_zero(&fay4_residual(&t, &xs, Form::Inverse).unwrap()));
    }

    #[test]
    fn small_certificates() {
        let t = Table::new(Model::Crystal(p()), 1).unwrap();
        assert!(fay_certified(&t, 2, Form::Direct, 0).unwrap().passed());
        assert!(hirota_miwa_certified(&t, 0).unwrap().passed());
        let sub = RSubstitution::new(rat(1), rat(1)).unwrap();
        let e = fay_bridge(&sub, &[rat(3), rat(5), rat(7), rat(11)], 2).unwrap();
        assert!(e.passed(), "{}", e.witness);
    }
}
