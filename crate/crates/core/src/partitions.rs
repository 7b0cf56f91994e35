//! Partitions, plane partitions and the Schur-function specializations used
//! by the partition sums.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::error::{Error, Result};
use crate::exactcore::scalar::{QParams, Rat};
use crate::profile::{timed, Kernel};
use crate::report::Entry;

/// Weakly decreasing positive parts; the empty list is the empty partition.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
#[serde(try_from = "Vec<u32>", into = "Vec<u32>")]
pub struct Partition(Vec<u32>);

impl fmt::Debug for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("()");
        }
        let parts: Vec<String> = self.0.iter().map(|p| p.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

impl TryFrom<Vec<u32>> for Partition {
    type Error = Error;
    fn try_from(v: Vec<u32>) -> Result<Self> {
        Partition::new(v)
    }
}

impl From<Partition> for Vec<u32> {
    fn from(p: Partition) -> Self {
        p.0
    }
}

impl Partition {
    pub fn new(parts: Vec<u32>) -> Result<Self> {
        if parts.contains(&0) || parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::InvalidArgument(format!("not a partition: {parts:?}")));
        }
        Ok(Partition(parts))
    }

    /// Drops trailing zeros; the parts must already be weakly decreasing.
    pub(crate) fn from_sorted(mut parts: Vec<u32>) -> Self {
        while parts.last() == Some(&0) {
            parts.pop();
        }
        debug_assert!(parts.windows(2).all(|w| w[0] >= w[1]));
        Partition(parts)
    }

    pub fn empty() -> Self {
        Partition(Vec::new())
    }

    pub fn parts(&self) -> &[u32] {
        &self.0
    }

    /// `lambda_i` with 1-based `i`, zero past the length.
    pub fn part(&self, i: usize) -> u32 {
        if i == 0 {
            return 0;
        }
        self.0.get(i - 1).copied().unwrap_or(0)
    }

    pub fn size(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn conjugate(&self) -> Partition {
        let first = self.0.first().copied().unwrap_or(0);
        Partition(
            (1..=first)
                .map(|j| self.0.iter().filter(|&&p| p >= j).count() as u32)
                .collect(),
        )
    }

    /// `mu` is contained in `self` as Young diagrams.
    pub fn contains(&self, mu: &Partition) -> bool {
        mu.len() <= self.len() && mu.0.iter().zip(&self.0).all(|(m, l)| m <= l)
    }

    /// Cells `(i, j)`, 1-based, row by row.
    pub fn cells(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        self.0
            .iter()
            .enumerate()
            .flat_map(|(i, &l)| (1..=l).map(move |j| (i as u32 + 1, j)))
    }

    /// `kappa = 2 sum (j - i)` over the cells.
    pub fn kappa(&self) -> i64 {
        2 * self.cells().map(|(i, j)| j as i64 - i as i64).sum::<i64>()
    }

    /// `n(lambda) = sum (i - 1) lambda_i`.
    pub fn n_lambda(&self) -> u64 {
        self.0.iter().enumerate().map(|(i, &l)| i as u64 * l as u64).sum()
    }

    /// Hook lengths keyed by 1-based cell.
    pub fn hook_lengths(&self) -> BTreeMap<(u32, u32), u32> {
        let c = self.conjugate();
        self.cells()
            .map(|(i, j)| ((i, j), (self.part(i as usize) - j) + (c.part(j as usize) - i) + 1))
            .collect()
    }

    /// Bead positions `lambda_i - i + 1 + s` for `i = 1..=m`.
    pub fn beads(&self, s: i64, m: usize) -> Vec<i64> {
        (1..=m).map(|i| self.part(i) as i64 - i as i64 + 1 + s).collect()
    }

    /// Whether `self / mu` is a horizontal strip (at most one cell per column).
    pub fn is_horizontal_strip_over(&self, mu: &Partition) -> bool {
        self.contains(mu) && (1..=self.len()).all(|i| self.part(i + 1) <= mu.part(i))
    }
}

/// All partitions of `n`, lexicographically descending.
pub fn partitions_of(n: u32) -> Vec<Partition> {
    fn rec(rem: u32, max: u32, cur: &mut Vec<u32>, out: &mut Vec<Partition>) {
        if rem == 0 {
            out.push(Partition(cur.clone()));
            return;
        }
        for p in (1..=rem.min(max)).rev() {
            cur.push(p);
            rec(rem - p, p, cur, out);
            cur.pop();
        }
    }
    timed(Kernel::PartitionEnumeration, || {
        let mut out = Vec::new();
        rec(n, n, &mut Vec::new(), &mut out);
        out
    })
}

/// All partitions with `|lambda| <= max_size`, graded by size and
/// lexicographically descending within a size.
pub fn enumerate_partitions(max_size: u32) -> Vec<Partition> {
    (0..=max_size).flat_map(partitions_of).collect()
}

/// Stack of rows, each row a partition bounded pointwise by the one above.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PlanePartition {
    rows: Vec<Partition>,
}

impl PlanePartition {
    pub fn new(rows: Vec<Partition>) -> Result<Self> {
        let ok = rows.iter().all(|r| !r.is_empty())
            && rows.windows(2).all(|w| w[0].contains(&w[1]));
        if !ok {
            return Err(Error::InvalidArgument("rows are not weakly decreasing".into()));
        }
        Ok(PlanePartition { rows })
    }

    pub fn rows(&self) -> &[Partition] {
        &self.rows
    }

    pub fn volume(&self) -> u32 {
        self.rows.iter().map(Partition::size).sum()
    }
}

/// Every plane partition of volume at most `max_volume`, by depth-first
/// extension with row and column monotonicity.
pub fn enumerate_plane_partitions(max_volume: u32) -> Vec<PlanePartition> {
    // Partitions with part i at most bound[i] and size in 1..=budget.
    fn bounded(bound: &[u32], budget: u32) -> Vec<Partition> {
        fn rec(bound: &[u32], i: usize, rem: u32, cur: &mut Vec<u32>, out: &mut Vec<Partition>) {
            if !cur.is_empty() {
                out.push(Partition(cur.clone()));
            }
            if i >= bound.len() {
                return;
            }
            let cap = bound[i].min(rem).min(cur.last().copied().unwrap_or(u32::MAX));
            for p in 1..=cap {
                cur.push(p);
                rec(bound, i + 1, rem - p, cur, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        rec(bound, 0, budget, &mut Vec::new(), &mut out);
        out
    }
    fn extend(rows: &mut Vec<Partition>, rem: u32, out: &mut Vec<PlanePartition>) {
        out.push(PlanePartition { rows: rows.clone() });
        if rem == 0 {
            return;
        }
        let bound: Vec<u32> = match rows.last() {
            Some(r) => r.parts().to_vec(),
            None => vec![rem; rem as usize],
        };
        for row in bounded(&bound, rem) {
            let size = row.size();
            rows.push(row);
            extend(rows, rem - size, out);
            rows.pop();
        }
    }
    timed(Kernel::PartitionEnumeration, || {
        let mut out = Vec::new();
        extend(&mut Vec::new(), max_volume, &mut out);
        out.sort_by(|a, b| a.volume().cmp(&b.volume()).then_with(|| b.cmp(a)));
        out
    })
}

/// Number of plane partitions of each volume `0..=max_volume`.
pub fn plane_partition_counts(max_volume: u32) -> Vec<u64> {
    let mut counts = vec![0u64; max_volume as usize + 1];
    for p in enumerate_plane_partitions(max_volume) {
        counts[p.volume() as usize] += 1;
    }
    counts
}

/// `dim(lambda) / |lambda|! = 1 / prod h`.
pub fn plancherel_weight(lambda: &Partition) -> Rat {
    let prod = lambda
        .hook_lengths()
        .values()
        .fold(BigInt::one(), |acc, &h| acc * BigInt::from(h));
    Rat::new(BigInt::one(), prod)
}

/// `s_lambda(q^{-rho}) = q^{-kappa/4} / prod (q^{-h/2} - q^{h/2})`.
pub fn schur_principal(params: &QParams, lambda: &Partition) -> Result<Rat> {
    let mut den = Rat::one();
    for &h in lambda.hook_lengths().values() {
        let h = h as i64;
        den *= params.u_pow(-4 * h) - params.u_pow(4 * h);
    }
    if den.is_zero() {
        return Err(Error::SpecializationPole(format!("hook factor of {lambda} vanishes")));
    }
    Ok(params.u_pow(-2 * lambda.kappa()) / den)
}

/// `h_n(q^{-rho}) = q^{n/2} / (q;q)_n`, zero for negative `n`.
pub fn h_rho(params: &QParams, n: i64) -> Rat {
    if n < 0 {
        return Rat::zero();
    }
    params.q_half_pow(n) / params.q_pochhammer(n as u64)
}

/// Determinant by fraction-exact Gaussian elimination.
pub fn det(mut m: Vec<Vec<Rat>>) -> Rat {
    let n = m.len();
    let mut acc = Rat::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&r| !m[r][c].is_zero()) else {
            return Rat::zero();
        };
        if p != c {
            m.swap(p, c);
            acc = -acc;
        }
        let pivot = m[c][c].clone();
        acc *= &pivot;
        for r in c + 1..n {
            if m[r][c].is_zero() {
                continue;
            }
            let f = &m[r][c] / &pivot;
            for k in c..n {
                let v = &f * &m[c][k];
                m[r][k] -= v;
            }
        }
    }
    acc
}

/// `s_{lambda/mu}(q^{-rho})` from the Jacobi-Trudi determinant
/// `det(h_{lambda_i - mu_j - i + j})`.
pub fn skew_schur_principal(params: &QParams, lambda: &Partition, mu: &Partition) -> Result<Rat> {
    if !lambda.contains(mu) {
        return Ok(Rat::zero());
    }
    let l = lambda.len();
    let m: Vec<Vec<Rat>> = (1..=l)
        .map(|i| {
            (1..=l)
                .map(|j| {
                    let n = lambda.part(i) as i64 - mu.part(j) as i64 - i as i64 + j as i64;
                    h_rho(params, n)
                })
                .collect()
        })
        .collect();
    Ok(det(m))
}

/// Exponent `d` such that `s_{lambda/mu}(x) = x^d` for a single variable, or
/// `None` when the skew shape is not a horizontal strip (the value is 0).
pub fn skew_schur_single(lambda: &Partition, mu: &Partition) -> Option<u32> {
    lambda
        .is_horizontal_strip_over(mu)
        .then(|| lambda.size() - mu.size())
}

/// `phi_k(lambda) = sum_i (q^{k(lambda_i - i + 1)} - q^{k(-i + 1)})`.
pub fn phi_k(params: &QParams, lambda: &Partition, k: u32) -> Result<Rat> {
    phi_k_s(params, lambda, k, 0)
}

/// Charge-`s` potential: the shifted finite sum plus
/// `q^k (1 - q^{ks}) / (1 - q^k)`.
pub fn phi_k_s(params: &QParams, lambda: &Partition, k: u32, s: i64) -> Result<Rat> {
    if k == 0 {
        return Err(Error::InvalidArgument("potentials are indexed by k >= 1".into()));
    }
    let k = k as i64;
    let mut acc = Rat::zero();
    for i in 1..=lambda.len() as i64 {
        let l = lambda.part(i as usize) as i64;
        acc += params.q_pow(k * (l - i + 1 + s)) - params.q_pow(k * (-i + 1 + s));
    }
    if s != 0 {
        acc += (Rat::one() - params.q_pow(k * s)) / params.one_minus_q_pow(k)? * params.q_pow(k);
    }
    Ok(acc)
}

/// `phi^{4D}_k(lambda) = sum_i ((lambda_i - i + 1)^k - (-i + 1)^k)`.
pub fn phi4d_k(lambda: &Partition, k: u32) -> BigInt {
    (1..=lambda.len() as i64)
        .map(|i| {
            let l = lambda.part(i as usize) as i64;
            BigInt::from(l - i + 1).pow(k) - BigInt::from(-i + 1).pow(k)
        })
        .fold(BigInt::zero(), |a, b| a + b)
}

/// Integer coefficients of the formal `q`-expansion of
/// `sum_lambda s_lambda(q^{-rho})^2 = sum q^{|lambda| + 2 n(lambda)} / prod (1 - q^h)^2`
/// through `q^vdeg`.
pub fn schur_square_qseries(vdeg: u32) -> Vec<BigInt> {
    let n = vdeg as usize + 1;
    let mut total = vec![BigInt::zero(); n];
    for lambda in enumerate_partitions(vdeg) {
        let lead = (lambda.size() as u64 + 2 * lambda.n_lambda()) as usize;
        if lead >= n {
            continue;
        }
        let mut s = vec![BigInt::zero(); n];
        s[lead] = BigInt::one();
        for &h in lambda.hook_lengths().values() {
            // Two divisions by (1 - q^h): running sums with stride h.
            for _ in 0..2 {
                for i in h as usize..n {
                    let prev = s[i - h as usize].clone();
                    s[i] += prev;
                }
            }
        }
        for (t, c) in total.iter_mut().zip(s) {
            *t += c;
        }
    }
    total
}

/// `Sum_{|lambda| = n} plancherel_weight^2 = 1 / n!`, as an exact check value.
pub fn plancherel_total(n: u32) -> Rat {
    partitions_of(n)
        .iter()
        .map(|l| {
            let w = plancherel_weight(l);
            &w * &w
        })
        .fold(Rat::zero(), |a, b| a + b)
}

/// `|lambda|! / prod h`, the number of standard Young tableaux.
pub fn dimension(lambda: &Partition) -> BigInt {
    let w = plancherel_weight(lambda) * Rat::from_integer(crate::exactcore::scalar::factorial(lambda.size() as u64));
    w.to_integer()
}

/// Plane partitions by volume, the `q`-expansion of `sum s_lambda(q^{-rho})^2`
/// and the MacMahon product, through `q^vdeg`.
pub fn macmahon_check(vdeg: u32) -> Entry {
    let planes: Vec<BigInt> = plane_partition_counts(vdeg).into_iter().map(BigInt::from).collect();
    let schur = schur_square_qseries(vdeg);
    let product = crate::exactcore::euler::macmahon_series(vdeg as usize);
    let show = |v: &[BigInt]| v.iter().map(|c| c.to_string()).collect::<Vec<_>>();
    Entry::new(
        "MacMahon: plane partitions = Schur squares = product",
        format!("q^0..q^{vdeg}"),
        planes == schur && schur == product,
        json!({ "plane_partitions": show(&planes), "schur_squares": show(&schur), "product": show(&product) }),
    )
}

/// Hook formula against Jacobi-Trudi for `|lambda| <= size`, and
/// `sum_{|lambda| = n} (dim lambda)^2 = n!` for `n <= dim_n`.
pub fn hook_formula_check(params: &QParams, size: u32, dim_n: u32) -> Result<Entry> {
    let mut bad = Vec::new();
    for l in enumerate_partitions(size) {
        let hook = schur_principal(params, &l)?;
        let jt = skew_schur_principal(params, &l, &Partition::empty())?;
        if hook != jt {
            bad.push(json!({ "lambda": l.parts(), "hook": crate::report::rat_json(&hook), "jacobi_trudi": crate::report::rat_json(&jt) }));
        }
    }
    for n in 0..=dim_n {
        let total = partitions_of(n).iter().fold(BigInt::zero(), |acc, l| {
            let d = dimension(l);
            acc + &d * &d
        });
        let fact = crate::exactcore::scalar::factorial(n as u64);
        if total != fact {
            bad.push(json!({ "n": n, "sum_dim_squared": total.to_string() }));
        }
    }
    Ok(Entry::new(
        "hook formula = Jacobi-Trudi; sum of squared dimensions = n!",
        format!("|lambda| <= {size}; n <= {dim_n}"),
        bad.is_empty(),
        json!({ "mismatches": bad }),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactcore::scalar::{rat, ratio};

    fn p(v: &[u32]) -> Partition {
        Partition::new(v.to_vec()).unwrap()
    }

    #[test]
    fn small_enumerations() {
        assert_eq!(enumerate_partitions(0), vec![Partition::empty()]);
        assert_eq!(enumerate_partitions(2), vec![p(&[]), p(&[1]), p(&[2]), p(&[1, 1])]);
        assert_eq!(enumerate_partitions(5).len(), 19);
        assert_eq!(plane_partition_counts(5), vec![1, 1, 3, 6, 13, 24]);
    }

    #[test]
    fn kappa_and_hooks() {
        assert_eq!(Partition::empty().kappa(), 0);
        assert_eq!(p(&[2]).kappa(), 2);
        assert_eq!(p(&[1, 1]).kappa(), -2);
        let h = p(&[2, 1]).hook_lengths();
        assert_eq!(h[&(1, 1)], 3);
        assert_eq!(h[&(1, 2)], 1);
        assert_eq!(h[&(2, 1)], 1);
        assert_eq!(plancherel_weight(&p(&[2, 2])), ratio(1, 12));
        assert_eq!(plancherel_weight(&p(&[2, 1])), ratio(1, 3));
    }

    #[test]
    fn single_variable_skew() {
        assert_eq!(skew_schur_single(&p(&[3]), &p(&[1])), Some(2));
        assert_eq!(skew_schur_single(&p(&[2, 2]), &p(&[1])), None);
        assert_eq!(skew_schur_single(&p(&[2, 1]), &p(&[2, 1])), Some(0));
    }

    #[test]
    fn potentials() {
        let params = QParams::default_params();
        let q = params.q().clone();
        assert_eq!(phi_k(&params, &p(&[1]), 1).unwrap(), &q - rat(1));
        assert_eq!(phi_k_s(&params, &Partition::empty(), 1, 1).unwrap(), q);
        assert_eq!(phi4d_k(&p(&[2, 1]), 2), BigInt::from(3));
        assert_eq!(phi4d_k(&p(&[1]), 1), BigInt::from(1));
    }
}
