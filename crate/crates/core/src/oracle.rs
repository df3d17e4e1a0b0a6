//! Brute-force ground truth: sublattice enumeration in Hermite normal form,
//! elementary divisors over `Z_(p)`, ideal counting and the lattice sum `A`.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactalg::{series_coefficients, Var};
use crate::flagcomb::{flag_count, flag_dimension, FlagType};
use crate::fpgeom::require_prime;
use crate::grouppres::{hypothesis_report, pfaffian, HypothesisReport, Presentation};
use crate::zetacore::{grenham_zeta, normal_zeta_smooth, zeta_lattice, zeta_p_shift, LocalZeta, PointCount};

fn json_number(x: &BigInt) -> serde_json::Number {
    x.to_string().parse().expect("integers are valid JSON numbers")
}

fn big_number<S: serde::Serializer>(x: &BigInt, s: S) -> std::result::Result<S::Ok, S::Error> {
    json_number(x).serialize(s)
}

fn big_numbers<S: serde::Serializer>(v: &[BigInt], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(json_number))
}

/// Largest modulus `p^N` the enumerators accept.
const MAX_MODULUS: u128 = 1 << 40;

/// Upper-triangular basis (as rows) of a sublattice of `Z^h`, with positive
/// diagonal and entries above each pivot reduced modulo it.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HnfMatrix {
    rows: Vec<Vec<i64>>,
}

impl HnfMatrix {
    /// Validates the Hermite normal form conditions.
    pub fn new(rows: Vec<Vec<i64>>) -> Result<Self> {
        let h = rows.len();
        for (i, row) in rows.iter().enumerate() {
            if row.len() != h {
                return Err(Error::invalid("HNF matrix must be square"));
            }
            if row[i] <= 0 {
                return Err(Error::invalid(format!("diagonal entry {i} must be positive")));
            }
            for (j, &x) in row.iter().enumerate() {
                if j < i && x != 0 {
                    return Err(Error::invalid("HNF matrix must be upper triangular"));
                }
                if j > i && !(0..rows[j][j]).contains(&x) {
                    return Err(Error::invalid(format!("entry ({i}, {j}) not reduced modulo its pivot")));
                }
            }
        }
        Ok(HnfMatrix { rows })
    }

    pub fn identity(h: usize) -> Self {
        let rows = (0..h)
            .map(|i| (0..h).map(|j| i64::from(i == j)).collect())
            .collect();
        HnfMatrix { rows }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Vec<i64>] {
        &self.rows
    }

    pub fn diagonal(&self) -> Vec<i64> {
        (0..self.dim()).map(|i| self.rows[i][i]).collect()
    }

    /// `|Z^h : Λ|`, the product of the diagonal.
    pub fn index(&self) -> BigInt {
        self.diagonal().iter().map(|&x| BigInt::from(x)).product()
    }

    /// Membership by reduction against the rows.
    pub fn contains(&self, v: &[i64]) -> bool {
        let mut v: Vec<i128> = v.iter().map(|&x| x as i128).collect();
        for (i, row) in self.rows.iter().enumerate() {
            let pivot = row[i] as i128;
            if v[i] % pivot != 0 {
                return false;
            }
            let q = v[i] / pivot;
            if q != 0 {
                for j in i..v.len() {
                    v[j] -= q * row[j] as i128;
                }
            }
        }
        true
    }

    /// Not contained in `p·Z^h`.
    pub fn is_maximal(&self, p: u64) -> bool {
        self.rows.iter().flatten().any(|&x| x % p as i64 != 0)
    }
}

fn modulus(p: u64, n: u32) -> Result<u128> {
    let m = (p as u128).checked_pow(n).filter(|&m| m <= MAX_MODULUS);
    m.ok_or_else(|| Error::invalid(format!("{p}^{n} is too large to enumerate")))
}

/// Weak compositions of `n` into `parts` parts, in lexicographic order.
pub fn compositions(n: u32, parts: usize) -> Vec<Vec<u32>> {
    fn go(n: u32, parts: usize, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if parts == 1 {
            prefix.push(n);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for k in 0..=n {
            prefix.push(k);
            go(n - k, parts - 1, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if parts > 0 {
        go(n, parts, &mut Vec::new(), &mut out);
    } else if n == 0 {
        out.push(Vec::new());
    }
    out
}

/// Number of HNF matrices of index `p^n` in dimension `h`: column `j` has `j`
/// free entries modulo its pivot.
pub fn sublattice_count(h: usize, p: u64, n: u32) -> BigInt {
    compositions(n, h)
        .iter()
        .map(|e| {
            let exp: u32 = e.iter().enumerate().map(|(j, ej)| j as u32 * ej).sum();
            BigInt::from(p).pow(exp)
        })
        .sum()
}

fn check_budget(what: &'static str, needed: &BigInt, budget: u64) -> Result<()> {
    if *needed > BigInt::from(budget) {
        return Err(Error::BudgetExceeded {
            what,
            needed: needed.to_string(),
            budget,
        });
    }
    Ok(())
}

/// Calls `f` on every HNF matrix with the given pivot exponents.
fn for_each_with_diagonal(p: u64, exps: &[u32], f: &mut dyn FnMut(&HnfMatrix)) {
    let h = exps.len();
    let pivots: Vec<i64> = exps.iter().map(|&e| (p as i64).pow(e)).collect();
    let slots: Vec<(usize, usize)> = (0..h).flat_map(|j| (0..j).map(move |i| (i, j))).collect();
    let mut m = HnfMatrix {
        rows: (0..h)
            .map(|i| (0..h).map(|j| if i == j { pivots[i] } else { 0 }).collect())
            .collect(),
    };
    loop {
        f(&m);
        // Odometer over the free entries.
        let mut k = 0;
        loop {
            if k == slots.len() {
                return;
            }
            let (i, j) = slots[k];
            m.rows[i][j] += 1;
            if m.rows[i][j] < pivots[j] {
                break;
            }
            m.rows[i][j] = 0;
            k += 1;
        }
    }
}

/// Every sublattice of `Z^h` of index `p^n`, each exactly once.
pub fn enumerate_sublattices(h: usize, p: u64, n: u32, budget: u64) -> Result<Vec<HnfMatrix>> {
    require_prime(p)?;
    modulus(p, n)?;
    check_budget("sublattices", &sublattice_count(h, p, n), budget)?;
    let mut out = Vec::new();
    for e in compositions(n, h) {
        for_each_with_diagonal(p, &e, &mut |m| out.push(m.clone()));
    }
    Ok(out)
}

fn pow_mod(p: u64, k: u32) -> i128 {
    (p as i128).pow(k)
}

fn valuation(mut x: i128, p: u64, cap: u32) -> u32 {
    if x == 0 {
        return cap;
    }
    let p = p as i128;
    let mut v = 0;
    while x % p == 0 && v < cap {
        x /= p;
        v += 1;
    }
    v
}

fn inverse_mod(a: i128, m: i128) -> i128 {
    let (mut r0, mut r1) = (a.rem_euclid(m), m);
    let (mut s0, mut s1) = (1i128, 0i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
    }
    debug_assert_eq!(r0, 1, "not a unit");
    s0.rem_euclid(m)
}

/// Valuations of the elementary divisors of `a` over `Z/p^k`, capped at `k`,
/// in increasing order. Returns `min(rows, cols)` values.
pub fn local_snf_valuations(a: &[Vec<i64>], p: u64, k: u32) -> Vec<u32> {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let n = rows.min(cols);
    if k == 0 {
        return vec![0; n];
    }
    let m = pow_mod(p, k);
    let mut a: Vec<Vec<i128>> = a
        .iter()
        .map(|r| r.iter().map(|&x| (x as i128).rem_euclid(m)).collect())
        .collect();
    let mut out = Vec::with_capacity(n);
    for s in 0..n {
        let mut best: Option<(u32, usize, usize)> = None;
        for (i, row) in a.iter().enumerate().skip(s) {
            for (j, &x) in row.iter().enumerate().skip(s) {
                let v = valuation(x, p, k);
                if v < k && best.is_none_or(|b| v < b.0) {
                    best = Some((v, i, j));
                }
            }
        }
        let Some((v, i, j)) = best else {
            out.extend(std::iter::repeat_n(k, n - s));
            break;
        };
        a.swap(s, i);
        for row in a.iter_mut() {
            row.swap(s, j);
        }
        let pv = pow_mod(p, v);
        let unit_inv = inverse_mod(a[s][s] / pv, m);
        for i in s + 1..rows {
            let f = (a[i][s] / pv) * unit_inv % m;
            if f != 0 {
                for j in s..cols {
                    a[i][j] = (a[i][j] - f * a[s][j]).rem_euclid(m);
                }
            }
        }
        for j in s + 1..cols {
            let f = (a[s][j] / pv) * unit_inv % m;
            if f != 0 {
                for row in a.iter_mut() {
                    row[j] = (row[j] - f * row[s]).rem_euclid(m);
                }
            }
        }
        out.push(v);
    }
    out.sort_unstable();
    out
}

/// The type `(I, r_I)` of a lattice in `Z^{d'}` together with the index
/// exponent `w` of its maximal representative.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct LatticeType {
    pub set: Vec<u32>,
    pub r: Vec<u32>,
    pub w: u32,
    /// Power of `p` divided out to reach the maximal representative.
    pub scale: u32,
}

fn p_exponent(x: i64, p: u64) -> Option<u32> {
    let mut x = x;
    let mut e = 0;
    while x % p as i64 == 0 {
        x /= p as i64;
        e += 1;
    }
    (x == 1).then_some(e)
}

/// Reads the type off the elementary divisors `p^{s_1} | … | p^{s_{d'}}`.
pub fn lattice_type(m: &HnfMatrix, p: u64) -> Result<LatticeType> {
    require_prime(p)?;
    let mut total = 0;
    for x in m.diagonal() {
        total += p_exponent(x, p)
            .ok_or_else(|| Error::invalid(format!("diagonal entry {x} is not a power of {p}")))?;
    }
    let s = local_snf_valuations(m.rows(), p, total + 1);
    let scale = s[0];
    let dp = s.len() as u32;
    let mut set = Vec::new();
    let mut r = Vec::new();
    let mut w = 0;
    for i in 1..s.len() {
        if s[i] > s[i - 1] {
            let gap = s[i] - s[i - 1];
            set.push(i as u32);
            r.push(gap);
            w += gap * (dp - i as u32);
        }
    }
    Ok(LatticeType { set, r, w, scale })
}

/// `f(I, r_I, p)` from the formula and from enumeration.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TypeCount {
    pub dprime: u32,
    pub set: Vec<u32>,
    pub r: Vec<u32>,
    pub prime: u64,
    #[serde(serialize_with = "big_number")]
    pub formula: BigInt,
    #[serde(serialize_with = "big_number")]
    pub enumerated: BigInt,
}

impl TypeCount {
    pub fn agrees(&self) -> bool {
        self.formula == self.enumerated
    }
}

/// `b_I(p) · p^{Σ r_i (d'−i) i − dim F_I}`.
pub fn lattices_of_type_formula(ft: &FlagType, r: &[u32], p: u64) -> Result<BigInt> {
    if r.len() != ft.set().len() || r.contains(&0) {
        return Err(Error::invalid("r must give one positive entry per element of I"));
    }
    let dp = ft.n();
    let b = flag_count(ft)
        .eval_var(Var::Q, &BigRational::from_integer(p.into()))
        .constant_value()
        .to_integer();
    let exp: i64 = ft
        .set()
        .iter()
        .zip(r)
        .map(|(&i, &ri)| (ri * (dp - i) * i) as i64)
        .sum::<i64>()
        - flag_dimension(ft) as i64;
    if exp < 0 {
        return Err(Error::invalid("negative exponent in the type-count formula"));
    }
    Ok(b * BigInt::from(p).pow(exp as u32))
}

/// Evaluates the formula and counts maximal lattices of the type among all
/// sublattices of the right index.
pub fn count_lattices_of_type(ft: &FlagType, r: &[u32], p: u64, budget: u64) -> Result<TypeCount> {
    require_prime(p)?;
    let formula = lattices_of_type_formula(ft, r, p)?;
    let dp = ft.n();
    let w: u32 = ft.set().iter().zip(r).map(|(&i, &ri)| ri * (dp - i)).sum();
    let mut enumerated = 0u64;
    for m in enumerate_sublattices(dp as usize, p, w, budget)? {
        if !m.is_maximal(p) {
            continue;
        }
        let t = lattice_type(&m, p)?;
        if t.set == ft.set() && t.r == r {
            enumerated += 1;
        }
    }
    Ok(TypeCount {
        dprime: dp,
        set: ft.set().to_vec(),
        r: r.to_vec(),
        prime: p,
        formula,
        enumerated: enumerated.into(),
    })
}

/// All types `(I, r_I)` in rank `d'` with `w = Σ r_i (d'−i) ≤ max_w`.
pub fn types_up_to(dprime: u32, max_w: u32) -> Vec<(FlagType, Vec<u32>)> {
    fn go(idx: &[u32], dp: u32, budget: u32, r: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        let Some((&i, rest)) = idx.split_first() else {
            out.push(r.clone());
            return;
        };
        let cost = dp - i;
        for ri in 1..=budget / cost {
            r.push(ri);
            go(rest, dp, budget - ri * cost, r, out);
            r.pop();
        }
    }
    let mut out = Vec::new();
    for ft in FlagType::all(dprime) {
        let mut rs = Vec::new();
        go(ft.set(), dprime, max_w, &mut Vec::new(), &mut rs);
        out.extend(rs.into_iter().map(|r| (ft.clone(), r)));
    }
    out
}

/// The Lie ring `Z^d ⊕ Z^{d'}` with `[x_i, x_j] = M_{ij}(y)` and central `y`.
#[derive(Clone, Debug)]
pub struct LieRing {
    d: usize,
    dprime: usize,
    structure: Vec<Vec<Vec<i64>>>,
}

impl LieRing {
    pub fn new(pres: &Presentation) -> Self {
        let d = pres.d();
        let structure = (0..d)
            .map(|i| (0..d).map(|j| pres.form(i, j).clone()).collect())
            .collect();
        LieRing {
            d,
            dprime: pres.dprime(),
            structure,
        }
    }

    pub fn rank(&self) -> usize {
        self.d + self.dprime
    }

    pub fn bracket(&self, u: &[i64], v: &[i64]) -> Vec<i64> {
        let mut out = vec![0i64; self.rank()];
        for i in 0..self.d {
            if u[i] == 0 {
                continue;
            }
            for j in 0..self.d {
                if v[j] == 0 {
                    continue;
                }
                for (k, c) in self.structure[i][j].iter().enumerate() {
                    out[self.d + k] += u[i] * v[j] * c;
                }
            }
        }
        out
    }

    fn is_ideal(&self, m: &HnfMatrix) -> bool {
        let h = self.rank();
        (0..self.d).all(|b| {
            let mut e = vec![0i64; h];
            e[b] = 1;
            m.rows().iter().all(|row| m.contains(&self.bracket(&e, row)))
        })
    }
}

/// Ideal counts by testing every sublattice of `Z^h`.
pub fn ideal_counts_naive(pres: &Presentation, p: u64, n: u32, budget: u64) -> Result<Vec<BigInt>> {
    require_prime(p)?;
    let ring = LieRing::new(pres);
    let h = ring.rank();
    let total: BigInt = (0..=n).map(|k| sublattice_count(h, p, k)).sum();
    check_budget("sublattices", &total, budget)?;
    (0..=n)
        .map(|k| {
            let lattices = enumerate_sublattices(h, p, k, budget)?;
            let c = lattices.par_iter().filter(|m| ring.is_ideal(m)).count();
            Ok(BigInt::from(c))
        })
        .collect()
}

/// Integer matrix `Ψ` (`d × d·d'`) with `g ∈ X(Λ')` iff `gΨ ≡ 0 mod p^w`,
/// where `p^w = |Z^{d'} : Λ'|`. Column `(k, l)` is coordinate `l` of
/// `[g, x_k]·adj(B)`.
fn kernel_system(pres: &Presentation, b: &HnfMatrix, modulus: i128) -> Vec<Vec<i64>> {
    let d = pres.d();
    let dp = pres.dprime();
    let adj = adjugate_upper(b);
    let mut psi = vec![vec![0i64; d * dp]; d];
    for (j, row) in psi.iter_mut().enumerate() {
        for k in 0..d {
            let form = pres.form(j, k);
            for l in 0..dp {
                let mut acc: i128 = 0;
                for (mm, &c) in form.iter().enumerate() {
                    acc += c as i128 * adj[mm][l];
                }
                row[k * dp + l] = acc.rem_euclid(modulus) as i64;
            }
        }
    }
    psi
}

/// `det(B)·B^{-1}` for upper-triangular `B`.
fn adjugate_upper(b: &HnfMatrix) -> Vec<Vec<i128>> {
    let n = b.dim();
    let det: i128 = b.diagonal().iter().map(|&x| x as i128).product();
    let r = b.rows();
    let mut y = vec![vec![0i128; n]; n];
    for j in 0..n {
        y[j][j] = det / r[j][j] as i128;
        for i in (0..j).rev() {
            let s: i128 = (i + 1..=j).map(|k| r[i][k] as i128 * y[k][j]).sum();
            debug_assert_eq!(s % r[i][i] as i128, 0);
            y[i][j] = -s / r[i][i] as i128;
        }
    }
    y
}

fn total_exponent(b: &HnfMatrix, p: u64) -> Result<u32> {
    b.diagonal().iter().try_fold(0, |acc, &x| {
        p_exponent(x, p)
            .map(|e| acc + e)
            .ok_or_else(|| Error::invalid(format!("diagonal entry {x} is not a power of {p}")))
    })
}

/// `log_p |Z^d : X(Λ')|` where `X(Λ') = {g : [g, L] ⊆ Λ'}`.
pub fn center_index_exponent(pres: &Presentation, b: &HnfMatrix, p: u64) -> Result<u32> {
    if b.dim() != pres.dprime() {
        return Err(Error::invalid("lattice dimension must equal d'"));
    }
    let w = total_exponent(b, p)?;
    if w == 0 {
        return Ok(0);
    }
    let psi = kernel_system(pres, b, pow_mod(p, w));
    Ok(local_snf_valuations(&psi, p, w).iter().map(|v| w - v).sum())
}

/// `w'([Λ']) = w + log_p |G_p : X(Λ')|` for a maximal lattice `Λ'`.
pub fn weight_wprime(pres: &Presentation, b: &HnfMatrix, p: u64) -> Result<u32> {
    require_prime(p)?;
    if !b.is_maximal(p) {
        return Err(Error::invalid("lattice is not maximal in its homothety class"));
    }
    Ok(total_exponent(b, p)? + center_index_exponent(pres, b, p)?)
}

/// Ideal counts `[a_0, …, a_n]` of index `p^k`.
///
/// With the `y`-coordinates last, an HNF basis splits into an `x`-block `A`,
/// a free block `C` and the basis `B` of `Λ' = Λ ∩ Y`. The ideal condition
/// only asks each row of `A` to lie in `X(Λ')`, so for fixed pivots the rows
/// are counted independently and `C` contributes `|Y : Λ'|^d`.
pub fn ideal_counts(pres: &Presentation, p: u64, n: u32, budget: u64) -> Result<Vec<BigInt>> {
    require_prime(p)?;
    let mod_n = modulus(p, n)?;
    let d = pres.d();
    let dp = pres.dprime();
    let lattices: BigInt = (0..=n).map(|k| sublattice_count(dp, p, k)).sum();
    check_budget("central sublattices", &lattices, budget)?;
    check_budget("row completions", &BigInt::from(mod_n), budget)?;
    let mut blocks: Vec<(u32, HnfMatrix)> = Vec::new();
    for j in 0..=n {
        for b in enumerate_sublattices(dp, p, j, budget)? {
            blocks.push((j, b));
        }
    }
    let partial: Vec<Vec<BigInt>> = blocks
        .par_iter()
        .map(|(j, b)| {
            let mut out = vec![BigInt::zero(); n as usize + 1];
            let m = pow_mod(p, *j);
            let psi = kernel_system(pres, b, m);
            let mut cache: HashMap<Vec<u32>, u64> = HashMap::new();
            let free = BigInt::from(p).pow(j * d as u32);
            for k in *j..=n {
                let mut total = BigInt::zero();
                for e in compositions(k - j, d) {
                    let mut prod = BigInt::one();
                    for i in 0..d {
                        let c = *cache
                            .entry(e[i..].to_vec())
                            .or_insert_with(|| row_completions(&psi, m, p, i, &e));
                        if c == 0 {
                            prod = BigInt::zero();
                            break;
                        }
                        prod *= c;
                    }
                    total += prod;
                }
                out[k as usize] = total * &free;
            }
            out
        })
        .collect();
    let mut out = vec![BigInt::zero(); n as usize + 1];
    for v in partial {
        for (a, b) in out.iter_mut().zip(v) {
            *a += b;
        }
    }
    Ok(out)
}

/// Number of rows `(0, …, 0, p^{e_i}, a_{i+1}, …)` with `0 ≤ a_j < p^{e_j}`
/// satisfying `aΨ ≡ 0 mod m`.
fn row_completions(psi: &[Vec<i64>], m: i128, p: u64, i: usize, e: &[u32]) -> u64 {
    let d = e.len();
    let cols = psi.first().map_or(0, Vec::len);
    let base: Vec<i128> = psi[i].iter().map(|&x| x as i128 * pow_mod(p, e[i]) % m).collect();
    let free: Vec<usize> = (i + 1..d).collect();
    let bounds: Vec<i128> = free.iter().map(|&j| pow_mod(p, e[j])).collect();
    let mut a = vec![0i128; free.len()];
    let mut acc = base.clone();
    let mut count = 0u64;
    loop {
        if acc.iter().all(|x| x.rem_euclid(m) == 0) {
            count += 1;
        }
        let mut k = 0;
        loop {
            if k == free.len() {
                return count;
            }
            a[k] += 1;
            let row = &psi[free[k]];
            if a[k] < bounds[k] {
                for c in 0..cols {
                    acc[c] = (acc[c] + row[c] as i128) % m;
                }
                break;
            }
            for c in 0..cols {
                acc[c] = (acc[c] - (bounds[k] - 1) * row[c] as i128).rem_euclid(m);
            }
            a[k] = 0;
            k += 1;
        }
    }
}

/// Coefficients `[A_0, …, A_n]` of `A(p, t) = Σ_{[Λ']} p^{d·w} t^{w'}` over
/// maximal lattices.
pub fn lattice_sum_a(pres: &Presentation, p: u64, n: u32, budget: u64) -> Result<Vec<BigInt>> {
    require_prime(p)?;
    let d = pres.d() as u32;
    let dp = pres.dprime();
    let mut out = vec![BigInt::zero(); n as usize + 1];
    for w in 0..=n {
        let lattices = enumerate_sublattices(dp, p, w, budget)?;
        let weights: Vec<Option<u32>> = lattices
            .par_iter()
            .map(|b| {
                if !b.is_maximal(p) {
                    return Ok(None);
                }
                weight_wprime(pres, b, p).map(Some)
            })
            .collect::<Result<_>>()?;
        for wp in weights.into_iter().flatten() {
            if wp <= n {
                out[wp as usize] += BigInt::from(p).pow(d * w);
            }
        }
    }
    Ok(out)
}

/// Coefficients `a_0..a_N` of `f` at `p`, which must all be integers.
pub fn integer_series(f: &crate::exactalg::RatFn, p: u64, n: u32) -> Result<Vec<BigInt>> {
    series_coefficients(f, p as i64, n as usize)?
        .into_iter()
        .map(|c| {
            if c.is_integer() {
                Ok(c.to_integer())
            } else {
                Err(Error::invalid(format!("non-integral coefficient {c}")))
            }
        })
        .collect()
}

/// The known closed form for `pres` at `p`, if any, with the
/// hypothesis report it rests on.
pub fn closed_form(pres: &Presentation, p: u64, budget: u64) -> Result<(LocalZeta, Option<HypothesisReport>)> {
    let d = pres.d();
    if pres.dprime() + 1 == d && Presentation::grenham(d).is_ok_and(|g| g == *pres) {
        return Ok((grenham_zeta(d as u32)?, None));
    }
    if d % 2 == 1 || pfaffian(pres).is_zero() {
        return Err(Error::NoClosedForm(
            "needs even d with nonzero Pfaffian, or a Grenham presentation".into(),
        ));
    }
    let report = hypothesis_report(pres, p, false, budget)?;
    let n_points = report
        .n_points
        .ok_or_else(|| Error::NoClosedForm("point count exceeded the budget".into()))?;
    let n_p = PointCount::constant(n_points as i64);
    Ok((normal_zeta_smooth(pres, n_p)?, Some(report)))
}

/// Three-way comparison of ideal counts, the closed form and the lattice sum.
#[derive(Clone, Debug, Serialize)]
pub struct CompareReport {
    pub prime: u64,
    #[serde(rename = "N")]
    pub n: u32,
    #[serde(serialize_with = "big_numbers")]
    pub coefficients: Vec<BigInt>,
    #[serde(serialize_with = "big_numbers")]
    pub closed_form_coefficients: Vec<BigInt>,
    #[serde(serialize_with = "big_numbers")]
    pub lattice_sum_coefficients: Vec<BigInt>,
    pub agree: bool,
    pub first_divergence: Option<usize>,
    pub hypotheses: Option<HypothesisReport>,
    pub verdict: String,
}

pub fn compare_report(pres: &Presentation, p: u64, n: u32, budget: u64) -> Result<CompareReport> {
    let (zeta, hypotheses) = closed_form(pres, p, budget)?;
    let coefficients = ideal_counts(pres, p, n, budget)?;
    let closed = integer_series(&zeta.value, p, n)?;
    let d = pres.d() as u32;
    let dp = pres.dprime() as u32;
    let pre = integer_series(&(&zeta_lattice(d)? * &zeta_p_shift(d + dp, d * dp)?), p, n)?;
    let a = lattice_sum_a(pres, p, n, budget)?;
    let lattice_sum: Vec<BigInt> = (0..=n as usize)
        .map(|k| (0..=k).map(|i| &pre[i] * &a[k - i]).sum())
        .collect();
    let first_divergence =
        (0..=n as usize).find(|&k| coefficients[k] != closed[k] || coefficients[k] != lattice_sum[k]);
    let agree = first_divergence.is_none();
    let good = hypotheses.as_ref().is_none_or(HypothesisReport::passes);
    let verdict = match (agree, good) {
        (true, _) => "agree",
        (false, false) => "expected at bad prime",
        (false, true) if p == 2 => "possible bad prime",
        (false, true) => "mismatch",
    };
    Ok(CompareReport {
        prime: p,
        n,
        coefficients,
        closed_form_coefficients: closed,
        lattice_sum_coefficients: lattice_sum,
        agree,
        first_divergence,
        hypotheses,
        verdict: verdict.into(),
    })
}

/// Converts counts to `u64` for display and tests.
pub fn to_u64s(v: &[BigInt]) -> Option<Vec<u64>> {
    v.iter().map(ToPrimitive::to_u64).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fpgeom::DEFAULT_BUDGET;

    const B: u64 = DEFAULT_BUDGET;

    fn gaussian() -> Presentation {
        Presentation::from_entries(
            4,
            2,
            &[
                (1, 3, vec![1, 0]),
                (1, 4, vec![0, 1]),
                (2, 3, vec![0, 1]),
                (2, 4, vec![-1, 0]),
            ],
        )
        .unwrap()
    }

    fn hnf(rows: &[&[i64]]) -> HnfMatrix {
        HnfMatrix::new(rows.iter().map(|r| r.to_vec()).collect()).unwrap()
    }

    #[test]
    fn sublattice_examples() {
        assert_eq!(enumerate_sublattices(2, 2, 1, B).unwrap().len(), 3);
        assert_eq!(enumerate_sublattices(1, 3, 2, B).unwrap(), vec![hnf(&[&[9]])]);
        assert_eq!(enumerate_sublattices(3, 2, 1, B).unwrap().len(), 7);
        assert!(enumerate_sublattices(4, 3, 6, 10).is_err());
    }

    #[test]
    fn sublattice_counts_match_lattice_zeta() {
        for h in 1..=5 {
            for p in [2, 3] {
                let s = integer_series(&zeta_lattice(h as u32).unwrap(), p, 5).unwrap();
                for n in 0..=5 {
                    assert_eq!(sublattice_count(h, p, n), s[n as usize], "h = {h}, p = {p}, n = {n}");
                }
            }
        }
        for (h, p, n) in [(2, 3, 3), (3, 2, 3), (4, 2, 2)] {
            let all = enumerate_sublattices(h, p, n, B).unwrap();
            let set: std::collections::HashSet<_> = all.iter().collect();
            assert_eq!(set.len(), all.len());
            assert_eq!(BigInt::from(all.len()), sublattice_count(h, p, n));
        }
    }

    #[test]
    fn type_examples() {
        let t = lattice_type(&HnfMatrix::identity(3), 2).unwrap();
        assert_eq!((t.set, t.r, t.w), (vec![], vec![], 0));
        let t = lattice_type(&hnf(&[&[1, 0], &[0, 3]]), 3).unwrap();
        assert_eq!((t.set, t.r, t.w), (vec![1], vec![1], 1));
        let t = lattice_type(&hnf(&[&[1, 0, 0], &[0, 5, 0], &[0, 0, 125]]), 5).unwrap();
        assert_eq!((t.set, t.r, t.w), (vec![1, 2], vec![1, 2], 4));
        let t = lattice_type(&hnf(&[&[2, 0], &[0, 4]]), 2).unwrap();
        assert_eq!((t.set, t.r, t.w, t.scale), (vec![1], vec![1], 1, 1));
        assert!(lattice_type(&hnf(&[&[1, 0], &[0, 6]]), 2).is_err());
    }

    #[test]
    fn type_count_examples() {
        let c = count_lattices_of_type(&FlagType::new(2, &[1]).unwrap(), &[1], 3, B).unwrap();
        assert_eq!(c.formula, 4.into());
        assert!(c.agrees());
        let c = count_lattices_of_type(&FlagType::new(3, &[2]).unwrap(), &[1], 2, B).unwrap();
        assert_eq!(c.formula, 7.into());
        assert!(c.agrees());
        for dp in 1..=4 {
            let c = count_lattices_of_type(&FlagType::new(dp, &[]).unwrap(), &[], 5, B).unwrap();
            assert_eq!((c.formula, c.enumerated), (1.into(), 1.into()));
        }
    }

    #[test]
    fn local_snf() {
        let a = vec![vec![2, 4], vec![6, 8]];
        // det = -8, gcd of entries 2: divisors 2 and 4.
        assert_eq!(local_snf_valuations(&a, 2, 5), vec![1, 2]);
        assert_eq!(local_snf_valuations(&a, 3, 3), vec![0, 0]);
        assert_eq!(local_snf_valuations(&[vec![0, 0]], 3, 2), vec![2]);
    }

    #[test]
    fn weight_examples() {
        let h = Presentation::heisenberg();
        assert_eq!(weight_wprime(&h, &HnfMatrix::identity(1), 2).unwrap(), 0);
        let g = gaussian();
        assert_eq!(weight_wprime(&g, &hnf(&[&[1, 0], &[0, 3]]), 3).unwrap(), 5);
        // Λ' = {y : y_1 + 2y_2 ≡ 0 mod 5} belongs to the point (1:2) on y_1² + y_2² = 0.
        assert_eq!(weight_wprime(&g, &hnf(&[&[1, 2], &[0, 5]]), 5).unwrap(), 3);
        assert_eq!(weight_wprime(&g, &hnf(&[&[1, 0], &[0, 5]]), 5).unwrap(), 5);
    }

    #[test]
    fn index_abel_when_no_points() {
        // At p = 3 the Pfaffian has no points, so w' = Σ r_i (d + d' − i).
        let g = gaussian();
        for w in 1..=3 {
            for b in enumerate_sublattices(2, 3, w, B).unwrap() {
                if !b.is_maximal(3) {
                    continue;
                }
                let t = lattice_type(&b, 3).unwrap();
                let expected: u32 = t.set.iter().zip(&t.r).map(|(i, r)| r * (4 + 2 - i)).sum();
                assert_eq!(weight_wprime(&g, &b, 3).unwrap(), expected);
            }
        }
    }

    #[test]
    fn heisenberg_ideals() {
        let h = Presentation::heisenberg();
        assert_eq!(to_u64s(&ideal_counts(&h, 2, 2, B).unwrap()).unwrap(), vec![1, 3, 7]);
        assert_eq!(to_u64s(&ideal_counts(&h, 3, 0, B).unwrap()).unwrap(), vec![1]);
    }

    #[test]
    fn fast_counts_match_naive() {
        let h = Presentation::heisenberg();
        for p in [2, 3] {
            assert_eq!(ideal_counts(&h, p, 4, B).unwrap(), ideal_counts_naive(&h, p, 4, B).unwrap());
        }
        let g3 = Presentation::grenham(3).unwrap();
        assert_eq!(ideal_counts(&g3, 2, 3, B).unwrap(), ideal_counts_naive(&g3, 2, 3, B).unwrap());
        let g = gaussian();
        assert_eq!(ideal_counts(&g, 2, 2, B).unwrap(), ideal_counts_naive(&g, 2, 2, B).unwrap());
        assert_eq!(ideal_counts(&g, 3, 2, B).unwrap(), ideal_counts_naive(&g, 3, 2, B).unwrap());
    }

    #[test]
    fn ideal_counts_are_monotone_in_n() {
        let g3 = Presentation::grenham(3).unwrap();
        let long = ideal_counts(&g3, 3, 4, B).unwrap();
        for n in 0..4 {
            assert_eq!(ideal_counts(&g3, 3, n, B).unwrap()[..], long[..=n as usize]);
        }
    }

    #[test]
    fn lattice_sum_examples() {
        let h = Presentation::heisenberg();
        assert_eq!(to_u64s(&lattice_sum_a(&h, 2, 4, B).unwrap()).unwrap(), vec![1, 0, 0, 0, 0]);
        let g = gaussian();
        let a0 = crate::zetacore::smooth_a(4, 2, &PointCount::Zero).unwrap();
        assert_eq!(lattice_sum_a(&g, 3, 6, B).unwrap(), integer_series(&a0, 3, 6).unwrap());
        let a2 = crate::zetacore::smooth_a(4, 2, &PointCount::constant(2)).unwrap();
        assert_eq!(lattice_sum_a(&g, 5, 6, B).unwrap(), integer_series(&a2, 5, 6).unwrap());
    }

    #[test]
    fn compare_examples() {
        let r = compare_report(&Presentation::heisenberg(), 2, 5, B).unwrap();
        assert!(r.agree, "{r:?}");
        let r = compare_report(&Presentation::grenham(3).unwrap(), 3, 4, B).unwrap();
        assert!(r.agree, "{r:?}");
        let r = compare_report(&gaussian(), 2, 3, B).unwrap();
        assert!(!r.hypotheses.as_ref().unwrap().passes());
        if !r.agree {
            assert_eq!(r.verdict, "expected at bad prime");
        }
    }
}
