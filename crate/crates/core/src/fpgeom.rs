//! Brute-force projective geometry over prime fields: point counts,
//! smoothness, linear subspaces on hypersurfaces and isotropic subspaces of
//! pencils of alternating forms.

use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactalg::{MPoly, Var};
use crate::grouppres::{pfaffian_generic, PfRing};

/// Default cap on enumerated points or subspaces.
pub const DEFAULT_BUDGET: u64 = 10_000_000;

/// Outcome of a hypothesis check.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Check {
    Holds,
    Fails,
    /// Nothing to check, e.g. lines inside `P^1`.
    Vacuous,
    /// Not decided by the program but asserted by the caller.
    Asserted,
    /// Not decided, typically because the budget was exceeded.
    Unchecked,
}

impl Check {
    pub fn from_bool(b: bool) -> Self {
        if b {
            Check::Holds
        } else {
            Check::Fails
        }
    }

    /// Holds, vacuous or asserted.
    pub fn is_ok(self) -> bool {
        matches!(self, Check::Holds | Check::Vacuous | Check::Asserted)
    }
}

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut f = 2;
    while f * f <= p {
        if p % f == 0 {
            return false;
        }
        f += 1;
    }
    true
}

pub(crate) fn require_prime(p: u64) -> Result<()> {
    if is_prime(p) && p < 1 << 31 {
        Ok(())
    } else {
        Err(Error::invalid(format!("{p} is not a supported prime")))
    }
}

fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1 % p;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    r
}

fn inv_mod(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}

fn budget_error(what: &'static str, needed: u128, budget: u64) -> Error {
    Error::BudgetExceeded {
        what,
        needed: needed.to_string(),
        budget,
    }
}

/// A polynomial in `y_1, …, y_m` reduced modulo `p`.
#[derive(Clone, Debug)]
pub struct ModPoly {
    p: u64,
    m: usize,
    terms: Vec<(u64, Vec<u32>)>,
}

impl ModPoly {
    /// Reduces `f` modulo `p`. Every variable must be some `y_k` with `k ≤ m`
    /// and no coefficient denominator may be divisible by `p`.
    pub fn new(f: &MPoly, m: usize, p: u64) -> Result<Self> {
        require_prime(p)?;
        let mut terms = Vec::new();
        for (powers, c) in f.terms() {
            let mut exps = vec![0u32; m];
            for (v, e) in powers {
                match v {
                    Var::Coord(k) if (k as usize) <= m => exps[k as usize - 1] = e,
                    other => return Err(Error::UnexpectedVariable(other.to_string())),
                }
            }
            let pb = num_bigint::BigInt::from(p);
            let num = c.numer().mod_floor(&pb).to_u64().expect("reduced");
            let den = c.denom().mod_floor(&pb).to_u64().expect("reduced");
            if den == 0 {
                return Err(Error::invalid(format!("coefficient {c} is not defined mod {p}")));
            }
            let coef = num * inv_mod(den, p) % p;
            if coef != 0 {
                terms.push((coef, exps));
            }
        }
        Ok(ModPoly { p, m, terms })
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn num_vars(&self) -> usize {
        self.m
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Total degree of the reduction; `None` if it vanishes.
    pub fn total_degree(&self) -> Option<u32> {
        self.terms.iter().map(|(_, e)| e.iter().sum()).max()
    }

    pub fn eval(&self, x: &[u64]) -> u64 {
        let p = self.p;
        let mut acc = 0;
        for (c, exps) in &self.terms {
            let mut t = *c;
            for (xi, &e) in x.iter().zip(exps) {
                if e > 0 {
                    t = t * pow_mod(*xi, e as u64, p) % p;
                    if t == 0 {
                        break;
                    }
                }
            }
            acc = (acc + t) % p;
        }
        acc
    }

    pub fn derivative(&self, k: usize) -> ModPoly {
        let p = self.p;
        let terms = self
            .terms
            .iter()
            .filter(|(_, e)| e[k] > 0)
            .filter_map(|(c, e)| {
                let coef = c * (e[k] as u64 % p) % p;
                (coef != 0).then(|| {
                    let mut e = e.clone();
                    e[k] -= 1;
                    (coef, e)
                })
            })
            .collect();
        ModPoly {
            p,
            m: self.m,
            terms,
        }
    }
}

fn checked_pow(p: u64, e: usize) -> u128 {
    (0..e).fold(1u128, |acc, _| acc.saturating_mul(p as u128))
}

/// Number of points of `P^{m−1}(F_p)`.
pub fn projective_size(m: usize, p: u64) -> u128 {
    (checked_pow(p, m) - 1) / (p as u128 - 1)
}

/// The projective point with index `idx`, normalized so that its first
/// nonzero coordinate is 1.
fn point_at(mut idx: u64, m: usize, p: u64) -> Vec<u64> {
    let mut lead = m - 1;
    for k in 0..m {
        let block = checked_pow(p, m - 1 - k) as u64;
        if idx < block {
            lead = k;
            break;
        }
        idx -= block;
    }
    let mut x = vec![0u64; m];
    x[lead] = 1;
    for slot in x[lead + 1..].iter_mut().rev() {
        *slot = idx % p;
        idx /= p;
    }
    x
}

fn homogeneous(f: &MPoly, m: usize, p: u64) -> Result<ModPoly> {
    if !f.is_homogeneous() {
        return Err(Error::NotHomogeneous);
    }
    ModPoly::new(f, m, p)
}

fn points_within_budget(m: usize, p: u64, budget: u64) -> Result<u64> {
    let n = projective_size(m, p);
    if n > budget as u128 {
        return Err(budget_error("projective points", n, budget));
    }
    Ok(n as u64)
}

/// Number of zeros of the homogeneous `f(y_1, …, y_m)` in `P^{m−1}(F_p)`.
pub fn count_points(f: &MPoly, m: usize, p: u64, budget: u64) -> Result<u64> {
    let g = homogeneous(f, m, p)?;
    let n = points_within_budget(m, p, budget)?;
    Ok((0..n)
        .into_par_iter()
        .filter(|&i| g.eval(&point_at(i, m, p)) == 0)
        .count() as u64)
}

/// The zeros themselves, in enumeration order.
pub fn zeros(f: &MPoly, m: usize, p: u64, budget: u64) -> Result<Vec<Vec<u64>>> {
    let g = homogeneous(f, m, p)?;
    let n = points_within_budget(m, p, budget)?;
    Ok((0..n)
        .into_par_iter()
        .map(|i| point_at(i, m, p))
        .filter(|x| g.eval(x) == 0)
        .collect())
}

/// True when no point of `P^{m−1}(F_p)` annihilates `f` and all its partial
/// derivatives.
pub fn is_smooth_mod_p(f: &MPoly, m: usize, p: u64, budget: u64) -> Result<bool> {
    let g = homogeneous(f, m, p)?;
    let grads: Vec<ModPoly> = (0..m).map(|k| g.derivative(k)).collect();
    let n = points_within_budget(m, p, budget)?;
    Ok(!(0..n).into_par_iter().any(|i| {
        let x = point_at(i, m, p);
        g.eval(&x) == 0 && grads.iter().all(|d| d.eval(&x) == 0)
    }))
}

/// Number of `k`-dimensional subspaces of `F_p^m`.
pub fn subspace_count(m: usize, k: usize, p: u64) -> u128 {
    if k > m {
        return 0;
    }
    let mut num = 1u128;
    let mut den = 1u128;
    for i in 0..k {
        num = num.saturating_mul(checked_pow(p, m - i) - 1);
        den = den.saturating_mul(checked_pow(p, i + 1) - 1);
    }
    if num == u128::MAX {
        return u128::MAX;
    }
    num / den
}

/// All pivot sets of size `k` in `0..m`.
fn pivot_sets(m: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, m: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for c in start..m {
            if m - c < k - cur.len() {
                break;
            }
            cur.push(c);
            go(c + 1, m, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, m, k, &mut Vec::new(), &mut out);
    out
}

/// Depth-first walk over the reduced row-echelon bases with the given pivots.
/// `accept(rows)` is called each time a row is appended and may prune;
/// `found` is called on complete bases and returns true to stop.
fn walk_echelon(
    m: usize,
    p: u64,
    pivots: &[usize],
    rows: &mut Vec<Vec<u64>>,
    accept: &dyn Fn(&[Vec<u64>]) -> bool,
    found: &mut dyn FnMut(&[Vec<u64>]) -> bool,
) -> bool {
    let r = rows.len();
    if r == pivots.len() {
        return found(rows);
    }
    let pc = pivots[r];
    let free: Vec<usize> = (pc + 1..m).filter(|c| !pivots.contains(c)).collect();
    let total = checked_pow(p, free.len()) as u64;
    for code in 0..total {
        let mut row = vec![0u64; m];
        row[pc] = 1;
        let mut c = code;
        for &col in free.iter().rev() {
            row[col] = c % p;
            c /= p;
        }
        rows.push(row);
        if accept(rows) && walk_echelon(m, p, pivots, rows, accept, found) {
            rows.pop();
            return true;
        }
        rows.pop();
    }
    false
}

/// Checks that `f` vanishes on every point of span(rows) that involves the
/// last row, i.e. `v_last + Σ c_j v_j` for all coefficient vectors `c`.
fn new_points_vanish(g: &ModPoly, rows: &[Vec<u64>]) -> bool {
    let p = g.p;
    let (last, prev) = rows.split_last().expect("nonempty");
    let total = checked_pow(p, prev.len()) as u64;
    let mut x = vec![0u64; last.len()];
    for code in 0..total {
        x.copy_from_slice(last);
        let mut c = code;
        for row in prev {
            let a = c % p;
            c /= p;
            if a != 0 {
                for (xi, ri) in x.iter_mut().zip(row) {
                    *xi = (*xi + a * ri) % p;
                }
            }
        }
        if g.eval(&x) != 0 {
            return false;
        }
    }
    true
}

fn subspaces_within_budget(m: usize, dim: usize, p: u64, budget: u64) -> Result<()> {
    let n = subspace_count(m, dim, p);
    if n > budget as u128 {
        return Err(budget_error("linear subspaces", n, budget));
    }
    Ok(())
}

/// Number of projective `k`-planes contained in `f = 0` in `P^{m−1}(F_p)`.
pub fn fano_count(f: &MPoly, m: usize, p: u64, k: usize, budget: u64) -> Result<u64> {
    if k + 1 > m.saturating_sub(1) && !(k == 0 && m == 1) {
        return Err(Error::invalid(format!("k = {k} needs 1 ≤ k + 1 ≤ m − 1 with m = {m}")));
    }
    let g = homogeneous(f, m, p)?;
    subspaces_within_budget(m, k + 1, p, budget)?;
    let count = pivot_sets(m, k + 1)
        .par_iter()
        .map(|pivots| {
            let mut n = 0u64;
            walk_echelon(
                m,
                p,
                pivots,
                &mut Vec::new(),
                &|rows| new_points_vanish(&g, rows),
                &mut |_| {
                    n += 1;
                    false
                },
            );
            n
        })
        .sum();
    Ok(count)
}

/// A projective line on `f = 0`, given by two spanning points. Inside `P^0`
/// and `P^1` there is nothing to find.
pub fn find_line(f: &MPoly, m: usize, p: u64, budget: u64) -> Result<Option<[Vec<u64>; 2]>> {
    let g = homogeneous(f, m, p)?;
    if m < 3 {
        return Ok(None);
    }
    subspaces_within_budget(m, 2, p, budget)?;
    let hit = pivot_sets(m, 2).par_iter().find_map_first(|pivots| {
        let mut line = None;
        walk_echelon(
            m,
            p,
            pivots,
            &mut Vec::new(),
            &|rows| new_points_vanish(&g, rows),
            &mut |rows| {
                line = Some([rows[0].clone(), rows[1].clone()]);
                true
            },
        );
        line
    });
    Ok(hit)
}

/// An alternating bilinear form on `F_q^n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SkewForm {
    q: u64,
    matrix: Vec<Vec<u64>>,
}

impl SkewForm {
    /// Validates antisymmetry and the zero diagonal; entries are reduced mod `q`.
    pub fn new(q: u64, matrix: Vec<Vec<i64>>) -> Result<Self> {
        require_prime(q)?;
        let n = matrix.len();
        if matrix.iter().any(|row| row.len() != n) {
            return Err(Error::invalid("skew form matrix must be square"));
        }
        let m: Vec<Vec<u64>> = matrix
            .iter()
            .map(|row| row.iter().map(|&x| x.rem_euclid(q as i64) as u64).collect())
            .collect();
        for i in 0..n {
            if m[i][i] != 0 {
                return Err(Error::invalid("skew form has a nonzero diagonal entry"));
            }
            for j in 0..i {
                if (m[i][j] + m[j][i]) % q != 0 {
                    return Err(Error::invalid("skew form matrix is not antisymmetric"));
                }
            }
        }
        Ok(SkewForm { q, matrix: m })
    }

    /// Form with the given strictly upper-triangular entries, row by row.
    pub fn from_upper(q: u64, n: usize, upper: &[u64]) -> Result<Self> {
        if upper.len() != n * (n.max(1) - 1) / 2 {
            return Err(Error::invalid("wrong number of upper-triangular entries"));
        }
        let mut m = vec![vec![0i64; n]; n];
        let mut it = upper.iter();
        for i in 0..n {
            for j in i + 1..n {
                let x = (*it.next().expect("length checked") % q) as i64;
                m[i][j] = x;
                m[j][i] = -x;
            }
        }
        SkewForm::new(q, m)
    }

    pub fn zero(q: u64, n: usize) -> Result<Self> {
        SkewForm::new(q, vec![vec![0; n]; n])
    }

    /// The standard symplectic form pairing `e_{2i−1}` with `e_{2i}`.
    pub fn standard(q: u64, r: usize) -> Result<Self> {
        let n = 2 * r;
        let mut m = vec![vec![0i64; n]; n];
        for i in 0..r {
            m[2 * i][2 * i + 1] = 1;
            m[2 * i + 1][2 * i] = -1;
        }
        SkewForm::new(q, m)
    }

    pub fn dim(&self) -> usize {
        self.matrix.len()
    }

    pub fn field_size(&self) -> u64 {
        self.q
    }

    pub fn entry(&self, i: usize, j: usize) -> u64 {
        self.matrix[i][j]
    }

    pub fn pair(&self, u: &[u64], v: &[u64]) -> u64 {
        let q = self.q;
        let mut acc = 0;
        for (i, ui) in u.iter().enumerate() {
            if *ui == 0 {
                continue;
            }
            for (j, vj) in v.iter().enumerate() {
                acc = (acc + ui * self.matrix[i][j] % q * vj) % q;
            }
        }
        acc
    }
}

/// Polynomial over `F_q` in one variable, lowest degree first.
#[derive(Clone, Debug, PartialEq, Eq)]
struct FqPoly {
    q: u64,
    c: Vec<u64>,
}

impl FqPoly {
    fn trimmed(mut self) -> Self {
        while self.c.last() == Some(&0) {
            self.c.pop();
        }
        self
    }
}

impl PfRing for FqPoly {
    fn add(&self, o: &Self) -> Self {
        let n = self.c.len().max(o.c.len());
        let c = (0..n)
            .map(|i| (self.c.get(i).unwrap_or(&0) + o.c.get(i).unwrap_or(&0)) % self.q)
            .collect();
        FqPoly { q: self.q, c }.trimmed()
    }
    fn sub(&self, o: &Self) -> Self {
        let n = self.c.len().max(o.c.len());
        let q = self.q;
        let c = (0..n)
            .map(|i| (self.c.get(i).unwrap_or(&0) + q - o.c.get(i).unwrap_or(&0)) % q)
            .collect();
        FqPoly { q, c }.trimmed()
    }
    fn mul(&self, o: &Self) -> Self {
        if self.c.is_empty() || o.c.is_empty() {
            return FqPoly { q: self.q, c: Vec::new() };
        }
        let mut c = vec![0u64; self.c.len() + o.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            for (j, b) in o.c.iter().enumerate() {
                c[i + j] = (c[i + j] + a * b) % self.q;
            }
        }
        FqPoly { q: self.q, c }.trimmed()
    }
}

/// Coefficients of `Pf(φ + tψ)` in `t` over `F_q`, lowest degree first
/// (empty for the zero polynomial).
pub fn pencil_pfaffian(phi: &SkewForm, psi: &SkewForm) -> Result<Vec<u64>> {
    if phi.dim() != psi.dim() || phi.q != psi.q {
        return Err(Error::invalid("pencil forms differ in dimension or field"));
    }
    let q = phi.q;
    let zero = FqPoly { q, c: Vec::new() };
    let one = FqPoly { q, c: vec![1] };
    let pf = pfaffian_generic(phi.dim(), zero, one, |i, j| {
        FqPoly {
            q,
            c: vec![phi.matrix[i][j], psi.matrix[i][j]],
        }
        .trimmed()
    });
    Ok(pf.c)
}

/// True when every member of the pencil `φ + tψ` is degenerate, i.e.
/// `Pf(φ + tψ)` is the zero polynomial.
pub fn pencil_all_degenerate(phi: &SkewForm, psi: &SkewForm) -> Result<bool> {
    Ok(pencil_pfaffian(phi, psi)?.is_empty())
}

/// A basis (in reduced row-echelon form) of a `target_dim`-dimensional
/// subspace isotropic for both forms, if one exists.
pub fn common_isotropic_subspace(
    phi: &SkewForm,
    psi: &SkewForm,
    target_dim: usize,
    budget: u64,
) -> Result<Option<Vec<Vec<u64>>>> {
    if phi.dim() != psi.dim() || phi.q != psi.q {
        return Err(Error::invalid("pencil forms differ in dimension or field"));
    }
    let n = phi.dim();
    if target_dim > n {
        return Ok(None);
    }
    if target_dim == 0 {
        return Ok(Some(Vec::new()));
    }
    subspaces_within_budget(n, target_dim, phi.q, budget)?;
    let accept = |rows: &[Vec<u64>]| {
        let (last, prev) = rows.split_last().expect("nonempty");
        prev.iter()
            .all(|r| phi.pair(r, last) == 0 && psi.pair(r, last) == 0)
    };
    let hit = pivot_sets(n, target_dim).par_iter().find_map_first(|pivots| {
        let mut basis = None;
        walk_echelon(n, phi.q, pivots, &mut Vec::new(), &accept, &mut |rows| {
            basis = Some(rows.to_vec());
            true
        });
        basis
    });
    Ok(hit)
}

/// True when `rows` span a subspace isotropic for `form`.
pub fn is_isotropic(form: &SkewForm, rows: &[Vec<u64>]) -> bool {
    rows.iter()
        .all(|u| rows.iter().all(|v| form.pair(u, v) == 0))
}

/// Rank over `F_p` of the given vectors.
pub fn rank_mod_p(rows: &[Vec<u64>], p: u64) -> usize {
    let mut a: Vec<Vec<u64>> = rows.to_vec();
    let cols = a.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(piv) = (rank..a.len()).find(|&r| a[r][c] % p != 0) else {
            continue;
        };
        a.swap(rank, piv);
        let inv = inv_mod(a[rank][c] % p, p);
        for x in a[rank].iter_mut() {
            *x = *x * inv % p;
        }
        for r in 0..a.len() {
            if r != rank && a[r][c] % p != 0 {
                let factor = a[r][c] % p;
                for k in 0..cols {
                    a[r][k] = (a[r][k] + p * p - factor * a[rank][k] % p) % p;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Integer evaluation of a point count polynomial, used to compare with
/// closed forms such as `(p^2 + 1)(p^2 + p + 1)`.
pub fn eval_in_p(f: &MPoly, p: u64) -> Option<u64> {
    let v = f.eval_var(Var::P, &num_rational::BigRational::from_integer(p.into()));
    if !v.is_constant() {
        return None;
    }
    let c = v.constant_value();
    if c.is_zero() {
        return Some(0);
    }
    c.is_integer().then(|| c.to_integer().to_u64()).flatten()
}
