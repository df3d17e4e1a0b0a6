//! Flag varieties over finite fields: Gaussian binomials, the counts `b_I(q)`,
//! Schubert-cell polynomials `c_I(q)` and the generating function `F_n(q, X)`.

use std::fmt;

use num_rational::BigRational;
use num_traits::One;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::exactalg::{MPoly, RatFn, Var};

/// Largest `n` for which `S_n` is enumerated.
pub const MAX_PERMUTATION_N: u32 = 12;

/// A subset `I ⊆ {1, …, n−1}` together with the ambient rank `n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FlagType {
    n: u32,
    set: Vec<u32>,
}

impl FlagType {
    /// Validates and sorts `set`.
    pub fn new(n: u32, set: &[u32]) -> Result<Self> {
        if n == 0 {
            return Err(Error::invalid("flag rank must be positive"));
        }
        let mut s = set.to_vec();
        s.sort_unstable();
        s.dedup();
        if s.len() != set.len() {
            return Err(Error::invalid("repeated index in flag type"));
        }
        if let Some(bad) = s.iter().find(|&&i| i == 0 || i >= n) {
            return Err(Error::invalid(format!("index {bad} outside [1, {}]", n - 1)));
        }
        Ok(FlagType { n, set: s })
    }

    pub(crate) fn from_mask(n: u32, mask: u32) -> Self {
        FlagType {
            n,
            set: (1..n).filter(|i| mask >> (i - 1) & 1 == 1).collect(),
        }
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn set(&self) -> &[u32] {
        &self.set
    }

    pub(crate) fn mask(&self) -> u32 {
        self.set.iter().fold(0, |m, i| m | 1 << (i - 1))
    }

    /// `[n−1] \ I`.
    pub fn complement(&self) -> FlagType {
        FlagType {
            n: self.n,
            set: (1..self.n).filter(|i| !self.set.contains(i)).collect(),
        }
    }

    /// All `2^{n−1}` types of rank `n`, ordered by bitmask.
    pub fn all(n: u32) -> Vec<FlagType> {
        (0..1u32 << (n - 1)).map(|m| FlagType::from_mask(n, m)).collect()
    }
}

impl fmt::Display for FlagType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.set.iter().map(u32::to_string).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

fn q() -> MPoly {
    MPoly::var(Var::Q)
}

/// Polynomial in `q` from its coefficient list, lowest degree first.
pub(crate) fn poly_in_q(coeffs: &[u64]) -> MPoly {
    let cs: Vec<MPoly> = coeffs.iter().map(|&c| MPoly::from_int(c as i64)).collect();
    MPoly::from_coeffs_in(Var::Q, &cs)
}

/// The Gaussian binomial `[n choose k]_q`.
pub fn gaussian_binomial(n: u32, k: u32) -> Result<MPoly> {
    if k > n {
        return Err(Error::invalid(format!("k = {k} exceeds n = {n}")));
    }
    let k = k.min(n - k) as usize;
    // Row of the q-Pascal triangle: [m choose j] = [m-1 choose j-1] + q^j [m-1 choose j].
    let mut row: Vec<MPoly> = vec![MPoly::one()];
    for m in 1..=n as usize {
        let mut next = vec![MPoly::one(); (m + 1).min(k + 1)];
        for j in 1..next.len() {
            let left = &row[j - 1];
            let right = row.get(j).map_or_else(MPoly::zero, |r| r * &q().pow(j as u32));
            next[j] = left + &right;
        }
        row = next;
    }
    Ok(row[k].clone())
}

/// `b_I(q)`: the number of `F_q`-points of the variety of flags of type `I`.
pub fn flag_count(ft: &FlagType) -> MPoly {
    let mut dims = vec![ft.n];
    dims.extend(ft.set.iter().map(|i| ft.n - i));
    let mut out = MPoly::one();
    for w in dims.windows(2) {
        out = &out * &gaussian_binomial(w[0], w[1]).expect("chain is decreasing");
    }
    out
}

/// Dimension of the flag variety, read off as `deg_q b_I`.
pub fn flag_dimension(ft: &FlagType) -> u32 {
    flag_count(ft).degree_in(Var::Q)
}

/// Descent set and inversion number of a permutation in one-line notation.
pub fn permutation_type(w: &[u32]) -> Result<(Vec<u32>, u32)> {
    let n = w.len();
    let mut seen = vec![false; n + 1];
    for &x in w {
        if x == 0 || x as usize > n || seen[x as usize] {
            return Err(Error::invalid(format!("{w:?} is not a permutation")));
        }
        seen[x as usize] = true;
    }
    let descents = (1..n as u32)
        .filter(|&i| w[i as usize] < w[i as usize - 1])
        .collect();
    Ok((descents, inversions(w)))
}

fn inversions(w: &[u32]) -> u32 {
    let mut count = 0;
    for i in 0..w.len() {
        for j in i + 1..w.len() {
            if w[i] > w[j] {
                count += 1;
            }
        }
    }
    count
}

fn descent_mask(w: &[u32]) -> u32 {
    let mut m = 0;
    for i in 1..w.len() {
        if w[i] < w[i - 1] {
            m |= 1 << (i - 1);
        }
    }
    m
}

/// Rearranges `w` into the next permutation in lexicographic order; false at
/// the last one.
pub(crate) fn next_permutation(w: &mut [u32]) -> bool {
    let n = w.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && w[i - 1] >= w[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = n - 1;
    while w[j] <= w[i - 1] {
        j -= 1;
    }
    w.swap(i - 1, j);
    w[i..].reverse();
    true
}

fn check_enumerable(n: u32) -> Result<()> {
    if n > MAX_PERMUTATION_N {
        return Err(Error::BudgetExceeded {
            what: "permutations",
            needed: format!("{n}!"),
            budget: MAX_PERMUTATION_N as u64,
        });
    }
    Ok(())
}

/// Calls `f` on every permutation of `{1..n}`, split across workers by the
/// first letter. Results are combined with `merge`; the total does not depend
/// on the split.
pub fn fold_permutations<T, F, M>(n: u32, init: impl Fn() -> T + Sync, f: F, merge: M) -> Result<T>
where
    T: Send,
    F: Fn(&mut T, &[u32]) + Sync,
    M: Fn(T, T) -> T + Sync + Send,
{
    check_enumerable(n)?;
    if n == 0 {
        let mut acc = init();
        f(&mut acc, &[]);
        return Ok(acc);
    }
    let result = (1..=n)
        .into_par_iter()
        .map(|first| {
            let mut acc = init();
            let mut w: Vec<u32> = std::iter::once(first)
                .chain((1..=n).filter(|&x| x != first))
                .collect();
            loop {
                f(&mut acc, &w);
                if !next_permutation(&mut w[1..]) {
                    break;
                }
            }
            acc
        })
        .reduce(&init, &merge);
    Ok(result)
}

/// `c_I(q) = Σ_{ν(w) = I} q^{l(w)}` for every `I`, from one pass over `S_n`.
#[derive(Clone, Debug)]
pub struct SchubertTable {
    n: u32,
    /// `counts[mask][k]` = number of permutations with descent mask `mask` and length `k`.
    counts: Vec<Vec<u64>>,
}

impl SchubertTable {
    pub fn new(n: u32) -> Result<Self> {
        if n == 0 {
            return Err(Error::invalid("n must be positive"));
        }
        let max_len = (n * (n - 1) / 2) as usize;
        let types = 1usize << (n - 1);
        let counts = fold_permutations(
            n,
            || vec![vec![0u64; max_len + 1]; types],
            |acc, w| acc[descent_mask(w) as usize][inversions(w) as usize] += 1,
            |mut a, b| {
                for (x, y) in a.iter_mut().zip(b) {
                    for (u, v) in x.iter_mut().zip(y) {
                        *u += v;
                    }
                }
                a
            },
        )?;
        Ok(SchubertTable { n, counts })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    /// Coefficients `a_{k, I}` of `c_I(q)`, lowest degree first.
    pub fn coefficients(&self, ft: &FlagType) -> &[u64] {
        &self.counts[ft.mask() as usize]
    }

    pub fn c(&self, ft: &FlagType) -> MPoly {
        poly_in_q(self.coefficients(ft))
    }
}

/// `c_I(q) = Σ_{J ⊆ I} (−1)^{|I|−|J|} b_J(q)`.
pub fn schubert_c_inclusion_exclusion(ft: &FlagType) -> MPoly {
    let mask = ft.mask();
    let mut out = MPoly::zero();
    let mut sub = mask;
    loop {
        let b = flag_count(&FlagType::from_mask(ft.n, sub));
        if (mask.count_ones() - sub.count_ones()) % 2 == 0 {
            out = &out + &b;
        } else {
            out = &out - &b;
        }
        if sub == 0 {
            break;
        }
        sub = (sub - 1) & mask;
    }
    out
}

/// `c_I(q)`, computed from the Schubert cells and by inclusion–exclusion;
/// the two must agree.
pub fn schubert_c(ft: &FlagType) -> Result<MPoly> {
    let table = SchubertTable::new(ft.n)?;
    let cells = table.c(ft);
    let ie = schubert_c_inclusion_exclusion(ft);
    assert_eq!(
        cells, ie,
        "Schubert cells and inclusion-exclusion disagree for type {ft} in rank {}",
        ft.n
    );
    Ok(cells)
}

/// `F_n(q, X) = Σ_I b_I(q) ∏_{i∈I} X_i / (1 − X_i)`.
pub fn flag_fn(n: u32) -> Result<RatFn> {
    if n == 0 {
        return Err(Error::invalid("n must be positive"));
    }
    let x = |i: u32| MPoly::var(Var::X(i));
    let one = MPoly::one();
    let mut numerator = MPoly::zero();
    for ft in FlagType::all(n) {
        let mut term = flag_count(&ft);
        for i in 1..n {
            let f = if ft.set.contains(&i) { x(i) } else { &one - &x(i) };
            term = &term * &f;
        }
        numerator = &numerator + &term;
    }
    let factors = (1..n).map(|i| &one - &x(i)).collect();
    RatFn::from_factors(numerator, factors)
}

/// Variables `q, X_1, …, X_{n−1}`.
pub fn flag_variables(n: u32) -> Vec<Var> {
    std::iter::once(Var::Q).chain((1..n).map(Var::X)).collect()
}

/// Checks `F_n(q^{-1}, X^{-1}) = (−1)^{n−1} q^{−binom(n,2)} F_n(q, X)`.
pub fn check_flag_funeq(n: u32) -> Result<bool> {
    if n < 2 {
        return Err(Error::invalid("the functional equation needs n ≥ 2"));
    }
    let f = flag_fn(n)?;
    let inverted = f.invert_variables(&flag_variables(n));
    let sign = if (n - 1) % 2 == 0 { 1 } else { -1 };
    let expected = f.mul_laurent(
        &BigRational::from_integer(sign.into()),
        &[(Var::Q, -((n * (n - 1) / 2) as i64))],
    );
    Ok(inverted == expected)
}

/// Outcome of the exhaustive symmetry checks on `S_n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymmetryReport {
    pub n: u32,
    /// `a_{k,I} = a_{binom(n,2)−k, I^c}` for all `k, I`.
    pub palindromic: bool,
    /// `w ↦ w·w_0` maps type `I` to `I^c` and length `l` to `binom(n,2) − l`.
    pub bijection: bool,
    /// `b_I = Σ_{J⊆I} c_J` for all `I`.
    pub mobius: bool,
    /// Cells and inclusion–exclusion agree for all `I`.
    pub cells_match: bool,
    pub permutations_checked: u64,
}

impl SymmetryReport {
    pub fn holds(&self) -> bool {
        self.palindromic && self.bijection && self.mobius && self.cells_match
    }
}

/// `w · w_0` in one-line notation. With permutations acting on values this
/// sends `w_i` to `n + 1 − w_i`, turning every descent into an ascent.
pub fn times_longest(w: &[u32]) -> Vec<u32> {
    let n = w.len() as u32;
    w.iter().map(|x| n + 1 - x).collect()
}

pub fn verify_schubert_symmetry(n: u32) -> Result<SymmetryReport> {
    let table = SchubertTable::new(n)?;
    let top = n * (n - 1) / 2;
    let all_mask = (1u32 << (n - 1)) - 1;
    let types = FlagType::all(n);
    let palindromic = types.iter().all(|ft| {
        let a = table.coefficients(ft);
        let b = table.coefficients(&ft.complement());
        (0..=top as usize).all(|k| a[k] == b[top as usize - k])
    });
    let (bijection, checked) = fold_permutations(
        n,
        || (true, 0u64),
        |acc, w| {
            let v = times_longest(w);
            let ok = descent_mask(&v) == all_mask & !descent_mask(w)
                && inversions(&v) == top - inversions(w);
            acc.0 &= ok;
            acc.1 += 1;
        },
        |a, b| (a.0 && b.0, a.1 + b.1),
    )?;
    let mobius = types.iter().all(|ft| {
        let mask = ft.mask();
        let mut sum = MPoly::zero();
        let mut sub = mask;
        loop {
            sum = &sum + &table.c(&FlagType::from_mask(n, sub));
            if sub == 0 {
                break;
            }
            sub = (sub - 1) & mask;
        }
        sum == flag_count(ft)
    });
    let cells_match = types
        .iter()
        .all(|ft| table.c(ft) == schubert_c_inclusion_exclusion(ft));
    Ok(SymmetryReport {
        n,
        palindromic,
        bijection,
        mobius,
        cells_match,
        permutations_checked: checked,
    })
}

/// `∏_{i=1}^{n} (1 + q + … + q^{i−1})`.
pub fn q_factorial(n: u32) -> MPoly {
    (1..=n).fold(MPoly::one(), |acc, i| {
        &acc * &poly_in_q(&vec![1; i as usize])
    })
}

/// `b_I(q^{-1}) = q^{−dim F_I} b_I(q)`.
pub fn check_flag_count_inversion(ft: &FlagType) -> bool {
    let b = RatFn::from_poly(flag_count(ft));
    let dim = flag_dimension(ft) as i64;
    b.invert_variables(&[Var::Q]) == b.mul_laurent(&BigRational::one(), &[(Var::Q, -dim)])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::parse_poly;

    fn p(s: &str) -> MPoly {
        parse_poly(s).unwrap()
    }

    #[test]
    fn gaussian_binomials() {
        assert_eq!(gaussian_binomial(2, 1).unwrap(), p("q + 1"));
        assert_eq!(gaussian_binomial(4, 2).unwrap(), p("q^4 + q^3 + 2*q^2 + q + 1"));
        assert_eq!(gaussian_binomial(7, 0).unwrap(), MPoly::one());
        assert_eq!(gaussian_binomial(7, 7).unwrap(), MPoly::one());
        assert!(gaussian_binomial(2, 3).is_err());
    }

    #[test]
    fn flag_counts() {
        assert_eq!(flag_count(&FlagType::new(3, &[]).unwrap()), MPoly::one());
        assert_eq!(flag_count(&FlagType::new(3, &[1]).unwrap()), p("q^2 + q + 1"));
        assert_eq!(
            flag_count(&FlagType::new(3, &[1, 2]).unwrap()),
            p("q^3 + 2*q^2 + 2*q + 1")
        );
        assert!(FlagType::new(3, &[3]).is_err());
        assert!(FlagType::new(3, &[0]).is_err());
        assert!(FlagType::new(3, &[1, 1]).is_err());
    }

    #[test]
    fn permutation_types() {
        assert_eq!(
            permutation_type(&[3, 6, 5, 1, 4, 2]).unwrap(),
            (vec![2, 3, 5], 10)
        );
        assert_eq!(permutation_type(&[1, 2, 3, 4]).unwrap(), (vec![], 0));
        assert_eq!(permutation_type(&[4, 3, 2, 1]).unwrap(), (vec![1, 2, 3], 6));
        assert!(permutation_type(&[1, 1, 2]).is_err());
        assert!(permutation_type(&[0, 1]).is_err());
    }

    #[test]
    fn schubert_polynomials() {
        assert_eq!(schubert_c(&FlagType::new(3, &[1]).unwrap()).unwrap(), p("q^2 + q"));
        assert_eq!(schubert_c(&FlagType::new(3, &[1, 2]).unwrap()).unwrap(), p("q^3"));
        for n in 1..6 {
            assert_eq!(schubert_c(&FlagType::new(n, &[]).unwrap()).unwrap(), MPoly::one());
        }
        assert!(matches!(
            schubert_c(&FlagType::new(13, &[]).unwrap()),
            Err(Error::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn flag_functions() {
        assert_eq!(flag_fn(1).unwrap(), RatFn::one());
        assert_eq!(flag_fn(2).unwrap().to_string(), "(q*X1 + 1)/(1 - X1)");
        let f3 = flag_fn(3).unwrap();
        assert_eq!(
            f3.numerator(),
            &p("1 + (q^2 + q)*X1 + (q^2 + q)*X2 + q^3*X1*X2")
        );
        assert_eq!(f3.denominator_factors().len(), 2);
    }

    #[test]
    fn functional_equations_small() {
        for n in 2..=4 {
            assert!(check_flag_funeq(n).unwrap(), "n = {n}");
        }
    }

    #[test]
    fn permutation_enumeration_is_complete() {
        let count = fold_permutations(5, || 0u64, |c, _| *c += 1, |a, b| a + b).unwrap();
        assert_eq!(count, 120);
    }
}
